//! The full catalogue run: every symmetry, bracket, adjoint table, optimal
//! system, reduction, multiplier and conserved vector, checked into one
//! [`Report`]. Check ids are `family/case[/item]`.

use std::collections::BTreeMap;

use serde_json::json;

use crate::catalogue::conservation::conservation_cases;
use crate::catalogue::{
    admissible, algebra_basis, corrected_determining, generators, pde, printed_brackets, printed_determining,
    printed_reductions, printed_table, table_number, CaseId, DETERMINING_CORRECTION,
};
use crate::conservation::{analyse_case, CaseFinding, Status, VectorCheck, MANUFACTURED_POINTS};
use crate::expr::{u, Expr};
use crate::jet::PdeSpec;
use crate::lie::{adjoint_map, adjoint_table, epsilon, is_automorphism, structure_constants, LieAlgebra};
use crate::linalg::{identity, mat_add, mat_is_zero, mat_mul, mat_scale};
use crate::numeric::roundtrip::{ode_roundtrip_check, specialize, Domain, RoundTripConfig};
use crate::numeric::CheckOptions;
use crate::reduction::tables::check_rows;
use crate::reduction::{invariants_for, reduce};
use crate::report::{Check, Report};
use crate::symmetry::{compare_determining, verify_symmetry, VectorField};

/// Samples per case of the optimal system sweep.
pub const OPTIMAL_SAMPLES: usize = 1000;

/// Bound on the manufactured divergence residual.
pub const MANUFACTURED_TOL: f64 = 1e-9;

/// Bound on the round-trip residual `max |R[u]|`.
pub const ROUNDTRIP_TOL: f64 = 1e-6;

/// Text hashed into the report's input digest.
pub fn catalogue_inputs() -> Vec<String> {
    let mut out = Vec::new();
    for id in CaseId::ALL {
        out.push(format!("{id}: {:?}", pde(id)));
        for (name, g) in generators(id) {
            out.push(format!("{id} {name}: {g}"));
        }
    }
    out.extend(printed_determining().iter().map(|(l, e)| format!("{l}: {e}")));
    out.push(format!("{:?}", printed_reductions()));
    out.push(format!("{:?}", conservation_cases()));
    out
}

pub fn symmetry_checks(opts: &CheckOptions) -> Vec<Check> {
    let items: Vec<(CaseId, String, VectorField)> = CaseId::ALL
        .into_iter()
        .flat_map(|id| generators(id).into_iter().map(move |(n, g)| (id, n, g)))
        .collect();
    crate::par::map(&items, |(id, name, g)| {
        let id_s = format!("symmetry/{id}/{name}");
        match verify_symmetry(&pde(*id), g, &admissible(*id), opts) {
            Ok(c) => Check::certified(id_s, &c.certificate, c.generator.clone()).with_details(&c),
            Err(e) => Check::new(id_s, Status::Fail, "symbolic", e.to_string()),
        }
    })
}

pub fn determining_check() -> Check {
    let p = PdeSpec::abstract_fg();
    let id = "determining/abstract";
    let c = match compare_determining(&p, &printed_determining()) {
        Ok(c) => c,
        Err(e) => return Check::new(id, Status::Fail, "symbolic", e.to_string()),
    };
    let failed: Vec<String> = c
        .literal
        .iter()
        .chain(&c.printed_in_derived)
        .chain(&c.derived_in_printed)
        .filter(|(_, ok)| !ok)
        .map(|(l, _)| l.clone())
        .collect();
    let mut out = Check::new(
        id,
        Status::from_pass(c.equivalent()),
        "symbolic",
        if failed.is_empty() {
            "printed system equivalent to the derived one".to_string()
        } else {
            format!("not equivalent as printed: {}", failed.join(", "))
        },
    );
    let corrected = compare_determining(&p, &corrected_determining()).ok();
    let corrected_ok = corrected.as_ref().is_some_and(|c| c.equivalent());
    if !c.equivalent() && corrected_ok {
        let (label, text) = DETERMINING_CORRECTION;
        out.witness = Some(format!("equivalent once {label} reads {text} = 0"));
    }
    out.with_details(json!({ "as_printed": c, "corrected": corrected, "corrected_equivalent": corrected_ok }))
}

fn algebra(id: CaseId) -> Result<LieAlgebra, String> {
    structure_constants(&algebra_basis(id)).map_err(|e| e.to_string())
}

fn show(c: &[Expr]) -> String {
    crate::lie::show_combination(c)
}

pub fn commutator_check(id: CaseId) -> Check {
    let cid = format!("commutators/{id}");
    let alg = match algebra(id) {
        Ok(a) => a,
        Err(e) => return Check::new(cid, Status::Fail, "symbolic", e),
    };
    let got = alg.nonzero_brackets();
    let want = printed_brackets(id);
    let same = got.len() == want.len()
        && got.iter().zip(&want).all(|((i, j, c), (pi, pj, pc))| {
            (i, j) == (pi, pj) && c.iter().zip(pc).all(|(a, b)| (a - b).is_zero())
        });
    let list = |v: &[(usize, usize, Vec<Expr>)]| -> Vec<String> {
        v.iter().map(|(i, j, c)| format!("[X{}, X{}] = {}", i + 1, j + 1, show(c))).collect()
    };
    let mut out = Check::new(cid, Status::from_pass(same), "symbolic", list(&got).join("; "));
    if !same {
        out.residual = Some(format!("printed {}", list(&want).join("; ")));
    }
    out.with_details(json!({ "derived": list(&got), "printed": list(&want) }))
}

/// Printed adjoint table against the computed one, entry by entry.
pub fn adjoint_table_check(id: CaseId) -> Option<Check> {
    let want = printed_table(id)?;
    let cid = format!("adjoint-table/{id}");
    let tab = match algebra(id).and_then(|a| adjoint_table(&a).map_err(|e| e.to_string())) {
        Ok(t) => t,
        Err(e) => return Some(Check::new(cid, Status::Fail, "symbolic", e)),
    };
    let mut wrong = Vec::new();
    let mut rows = Vec::new();
    for (i, row) in tab.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            rows.push(format!("Ad(exp(eps X{})) X{} = {}", i + 1, j + 1, show(entry)));
            if entry.iter().zip(&want[i][j]).any(|(a, b)| !(a - b).is_zero()) {
                wrong.push(format!("[{}][{}]: {} vs printed {}", i + 1, j + 1, show(entry), show(&want[i][j])));
            }
        }
    }
    let n = table_number(id).unwrap_or(0);
    let mut out = Check::new(
        cid,
        Status::from_pass(wrong.is_empty()),
        "symbolic",
        format!("table {n}, {} entries, {} differ", rows.len(), wrong.len()),
    );
    if !wrong.is_empty() {
        out.residual = Some(wrong.join("; "));
    }
    Some(out.with_details(json!({ "table": n, "entries": rows })))
}

/// Every `Ad(exp(eps X_i))` is an automorphism with inverse `Ad(exp(-eps X_i))`.
pub fn adjoint_identity_check(id: CaseId) -> Check {
    let cid = format!("adjoint-identities/{id}");
    let alg = match algebra(id) {
        Ok(a) => a,
        Err(e) => return Check::new(cid, Status::Fail, "symbolic", e),
    };
    let eps = epsilon();
    let n = alg.dim();
    let mut bad = Vec::new();
    for i in 0..n {
        let ok = match (adjoint_map(&alg, i, &eps), adjoint_map(&alg, i, &-eps.clone())) {
            (Ok(a), Ok(b)) => {
                let d = mat_add(&mat_mul(&a.matrix, &b.matrix), &mat_scale(&identity(n), &Expr::int(-1)));
                is_automorphism(&alg, &a) && mat_is_zero(&d)
            }
            _ => false,
        };
        if !ok {
            bad.push(format!("X{}", i + 1));
        }
    }
    let summary = if bad.is_empty() {
        format!("{n} adjoint maps are invertible automorphisms")
    } else {
        format!("fails for {}", bad.join(", "))
    };
    Check::new(cid, Status::from_pass(bad.is_empty()), "symbolic", summary)
}

pub fn optimal_check(id: CaseId, samples: usize, seed: u64) -> Check {
    let cid = format!("optimal/{id}");
    let s = match crate::optimal::sweep(id, samples, seed) {
        Ok(s) => s,
        Err(e) => return Check::new(cid, Status::Fail, "numeric", e.to_string()),
    };
    let pass = s.off_branch == 0 && s.unlisted == 0 && s.witness_failures == 0;
    let mut out = Check::new(
        cid,
        Status::from_pass(pass),
        "numeric",
        format!(
            "{} samples: {} outside the printed branch, {} unlisted, {} witness failures, max error {:.1e}",
            s.samples, s.off_branch, s.unlisted, s.witness_failures, s.max_abs_error
        ),
    );
    out.witness = s.first_off_branch.clone();
    out.with_details(&s)
}

pub fn reduction_checks(seed: u64) -> Vec<Check> {
    check_rows(printed_reductions(), seed)
        .into_iter()
        .map(|r| {
            let method = match r.method {
                crate::reduction::tables::Certification::Symbolic => "symbolic",
                crate::reduction::tables::Certification::Numeric => "numeric",
            };
            let mut c = Check::new(
                format!("reduction/{}/{}", r.case, r.label),
                Status::from_pass(r.agrees()),
                method,
                format!("table {} row {}: {}", r.table, r.label, r.generator),
            );
            if let Some(e) = &r.error {
                c.residual = Some(e.clone());
            } else if !r.corrections.is_empty() {
                c.residual = Some(r.corrections.join("; "));
            }
            c.with_details(&r)
        })
        .collect()
}

struct RoundTripCase {
    id: &'static str,
    case: CaseId,
    coeffs: &'static [i64],
    domain: &'static str,
    f0: f64,
    fp0: f64,
    /// Concrete `f`, `g` for a case with abstract coefficients.
    specialize: bool,
}

const ROUNDTRIPS: &[RoundTripCase] = &[
    RoundTripCase {
        id: "principal/X1",
        case: CaseId::Principal,
        coeffs: &[1],
        domain: "t=0:1,x=0.5:2",
        f0: 0.5,
        fp0: 0.1,
        specialize: true,
    },
    RoundTripCase {
        id: "case1/X1",
        case: CaseId::Case1,
        coeffs: &[1, 0],
        domain: "t=0:0.5,x=0.5:2",
        f0: 0.5,
        fp0: 0.0,
        specialize: false,
    },
    RoundTripCase {
        id: "case1/X2",
        case: CaseId::Case1,
        coeffs: &[0, 1],
        domain: "t=0:1,x=0.5:2",
        f0: 0.9,
        fp0: 0.0,
        specialize: false,
    },
];

fn roundtrip_check(r: &RoundTripCase) -> Check {
    let cid = format!("roundtrip/{}", r.id);
    let run = || -> Result<_, String> {
        let coeffs: Vec<Expr> = r.coeffs.iter().map(|&k| Expr::int(k)).collect();
        let v = VectorField::combination(&coeffs, &algebra_basis(r.case));
        let ode = invariants_for(&v).and_then(|a| reduce(&pde(r.case), &a)).map_err(|e| e.to_string())?;
        let (p, lhs) = if r.specialize {
            let (p, b) = specialize(&pde(r.case), &(1 + u().powi(2)), &(u() * (1 - u())));
            (p, ode.lhs.subst(&b).norm())
        } else {
            (pde(r.case), ode.lhs.clone())
        };
        let domain = Domain::parse(r.domain).map_err(|e| e.to_string())?;
        let cfg = RoundTripConfig::default();
        ode_roundtrip_check(&p, &ode.ansatz, &lhs, &domain, r.f0, r.fp0, &BTreeMap::new(), &cfg)
            .map_err(|e| e.to_string())
    };
    match run() {
        Ok(rep) => Check::new(
            cid,
            Status::from_pass(rep.max_residual < ROUNDTRIP_TOL),
            "numeric",
            format!("max |R[u]| = {:.2e} on {} at {:?}", rep.max_residual, r.domain, rep.argmax),
        )
        .with_details(&rep),
        Err(e) => Check::new(cid, Status::Fail, "numeric", e),
    }
}

pub fn roundtrip_checks() -> Vec<Check> {
    crate::par::map(ROUNDTRIPS, roundtrip_check)
}

fn vector_check(id: String, v: &VectorCheck, what: &str) -> Check {
    Check::certified(id, &v.certificate, format!("{what}: T^t = {}, T^x = {}", v.density, v.flux))
}

/// Checks derived from the conservation analysis of one case.
pub fn conservation_checks(f: &CaseFinding) -> Vec<Check> {
    let mut out = Vec::new();
    let sid = format!("multiplier-solve/{}", f.case);
    out.push(match (&f.solved, &f.solve_error) {
        (Some(s), _) => {
            let status = if s.constraints.is_empty() { Status::Pass } else { Status::Constrained };
            let mut c = Check::new(sid, status, "symbolic", format!("lambda = {}: {}", s.lambda, s.multipliers.join(", ")));
            c.constraints = s.constraints.clone();
            c.with_details(s)
        }
        (None, e) => Check::new(sid, Status::Fail, "symbolic", e.clone().unwrap_or_default()),
    });
    for v in &f.vectors {
        let base = format!("{}/{}", f.case, v.label);
        let m = &v.multiplier;
        let mut c = Check::new(format!("multiplier/{base}"), m.status, m.certificate.method(), m.multiplier.clone());
        if !m.certificate.residual.is_empty() {
            c.residual = Some(m.certificate.residual.clone());
        }
        c.constraints = m.constraints.iter().map(|k| k.to_string()).collect();
        if m.status == Status::Constrained {
            c.summary = format!("{} passes iff {}", m.multiplier, c.constraints.join(" or "));
        }
        out.push(c.with_details(m));

        let fixes: Vec<String> = v.constraint.iter().chain(&v.printed_values).map(|k| k.to_string()).collect();
        let mut c = vector_check(format!("conserved/{base}/printed"), &v.printed, "printed");
        c.constraints = fixes.clone();
        out.push(c);

        let cid = format!("conserved/{base}/constructed");
        match &v.constructed {
            Some(k) => {
                let mut c = vector_check(cid, k, "constructed");
                c.constraints = fixes.clone();
                if !v.printed.pass {
                    c.witness = Some(format!("corrects the printed T^x = {}", v.printed.flux));
                }
                out.push(c);
            }
            None => out.push(Check::new(cid, Status::Fail, "symbolic", v.construction_error.clone().unwrap_or_default())),
        }

        if v.constructed.is_some() {
            let cid = format!("conserved/{base}/reproduces-printed");
            let summary = if v.reproduces_printed {
                "printed vector equals the constructed one up to a trivial vector"
            } else {
                "printed vector differs from the constructed one by a nontrivial vector"
            };
            out.push(Check::new(cid, Status::from_pass(v.reproduces_printed), "symbolic", summary));

            let cid = format!("conserved/{base}/manufactured");
            let worst = v.manufactured_max.unwrap_or(f64::INFINITY);
            let mut c = Check::new(
                cid,
                Status::from_pass(worst < MANUFACTURED_TOL),
                "numeric",
                format!("max scaled divergence residual {worst:.2e} at {MANUFACTURED_POINTS} manufactured points"),
            );
            c.constraints = fixes;
            out.push(c);
        }
    }
    out
}

pub fn conservation_findings(opts: &CheckOptions) -> Vec<CaseFinding> {
    crate::par::map(conservation_cases(), |c| analyse_case(c, opts))
}

/// Runs every check in a fixed order; the result depends on `opts` only.
pub fn paper_suite(opts: &CheckOptions) -> Report {
    let inputs = catalogue_inputs();
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let mut r = Report::new(opts, &refs);
    for c in symmetry_checks(opts) {
        r.push(c);
    }
    r.push(determining_check());
    for id in CaseId::SPECIAL {
        r.push(commutator_check(id));
    }
    for id in CaseId::SPECIAL {
        if let Some(c) = adjoint_table_check(id) {
            r.push(c);
        }
        r.push(adjoint_identity_check(id));
    }
    for c in crate::par::map(&CaseId::SPECIAL, |id| optimal_check(*id, OPTIMAL_SAMPLES, opts.seed)) {
        r.push(c);
    }
    for c in reduction_checks(opts.seed) {
        r.push(c);
    }
    for c in roundtrip_checks() {
        r.push(c);
    }
    for f in conservation_findings(opts) {
        for c in conservation_checks(&f) {
            r.push(c);
        }
    }
    r
}
