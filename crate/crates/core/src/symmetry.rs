//! Point generators, their second prolongation, invariance residuals and
//! determining equations.

use std::collections::BTreeMap;

use crate::expr::{apply, jet, jet_coefficients, replace_applied, t, u, x, Applied, Expr, Jet, JetMonomial, Symbol};
use crate::linalg::in_applied_span;
use crate::jet::{d_t, d_x, on_shell, JetError, PdeSpec};
use crate::numeric::{certify_zero, CheckOptions, ParamSpace, Ranges, ZeroCertificate};

/// `xi1 d/dt + xi2 d/dx + eta d/du` with coefficients in `(t, x, u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub xi1: Expr,
    pub xi2: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(xi1: Expr, xi2: Expr, eta: Expr) -> VectorField {
        VectorField { xi1, xi2, eta }
    }

    pub fn zero() -> VectorField {
        VectorField::new(Expr::zero(), Expr::zero(), Expr::zero())
    }

    /// Abstract coefficients `xi1(t,x,u)`, `xi2(t,x,u)`, `eta(t,x,u)`.
    pub fn generic() -> VectorField {
        let f = |name| apply(name, vec![0, 0, 0], vec![t(), x(), u()]);
        VectorField::new(f("xi1"), f("xi2"), f("eta"))
    }

    pub fn components(&self) -> [&Expr; 3] {
        [&self.xi1, &self.xi2, &self.eta]
    }

    pub fn map(&self, op: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField::new(op(&self.xi1), op(&self.xi2), op(&self.eta))
    }

    pub fn norm(&self) -> VectorField {
        self.map(Expr::norm)
    }

    pub fn is_well_formed(&self) -> bool {
        self.components().iter().all(|c| !c.has_derivative_jet())
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// `X(F) = xi1 F_t + xi2 F_x + eta F_u`.
    pub fn act(&self, f: &Expr) -> Expr {
        let terms = [
            &self.xi1 * f.diff(&Symbol::T),
            &self.xi2 * f.diff(&Symbol::X),
            &self.eta * f.diff(&Symbol::Jet(Jet::U)),
        ];
        Expr::sum(terms).norm()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            (&self.xi1 + &other.xi1).norm(),
            (&self.xi2 + &other.xi2).norm(),
            (&self.eta + &other.eta).norm(),
        )
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        self.map(|e| (c * e).norm())
    }

    /// `sum c_i X_i`.
    pub fn combination(coeffs: &[Expr], basis: &[VectorField]) -> VectorField {
        let mut out = VectorField::zero();
        for (c, b) in coeffs.iter().zip(basis) {
            out = out.add(&b.scale(c));
        }
        out
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = [(&self.xi1, "d/dt"), (&self.xi2, "d/dx"), (&self.eta, "d/du")]
            .iter()
            .filter(|(c, _)| !c.is_zero_literal())
            .map(|(c, d)| if c.is_one_literal() { d.to_string() } else { format!("({c}) {d}") })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A generator together with its first and second order extended coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub zeta_t: Expr,
    pub zeta_x: Expr,
    pub zeta_xx: Expr,
}

pub fn prolong2(v: &VectorField) -> Result<ProlongedField, JetError> {
    let (ut, ux, uxx, uxt) = (jet(1, 0), jet(0, 1), jet(0, 2), jet(1, 1));
    let zeta_t = (d_t(&v.eta)? - &ut * d_t(&v.xi1)? - &ux * d_t(&v.xi2)?).norm();
    let dx_xi1 = d_x(&v.xi1)?;
    let dx_xi2 = d_x(&v.xi2)?;
    let zeta_x = (d_x(&v.eta)? - &ut * &dx_xi1 - &ux * &dx_xi2).norm();
    let zeta_xx = (d_x(&zeta_x)? - uxt * dx_xi1 - uxx * dx_xi2).norm();
    Ok(ProlongedField {
        base: v.clone(),
        zeta_t,
        zeta_x,
        zeta_xx,
    })
}

impl ProlongedField {
    /// `X^[2](e)` for `e` on the second-order jet.
    pub fn act(&self, e: &Expr) -> Expr {
        let d = |s: Symbol| e.diff(&s);
        let j = |t, x| Symbol::Jet(Jet { t, x });
        let terms = [
            &self.base.xi1 * d(Symbol::T),
            &self.base.xi2 * d(Symbol::X),
            &self.base.eta * d(j(0, 0)),
            &self.zeta_t * d(j(1, 0)),
            &self.zeta_x * d(j(0, 1)),
            &self.zeta_xx * d(j(0, 2)),
        ];
        Expr::sum(terms).norm()
    }
}

/// `X^[2] R[u]` restricted to solutions.
pub fn invariance_residual(p: &PdeSpec, v: &VectorField) -> Result<Expr, JetError> {
    let pr = prolong2(v)?;
    on_shell(&pr.act(&p.residual()), p)
}

/// Coefficients of the on-shell invariance residual with abstract
/// `xi1, xi2, eta`, keyed by monomials in `u_x, u_xx, u_xxx`.
pub fn determining_equations(p: &PdeSpec) -> Result<BTreeMap<JetMonomial, Expr>, JetError> {
    let res = invariance_residual(p, &VectorField::generic())?;
    Ok(jet_coefficients(&res)
        .into_iter()
        .filter(|(_, c)| !c.is_zero_literal())
        .collect())
}

/// Mutual containment of the derived and a printed determining system.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DeterminingComparison {
    /// Single-derivative equations found literally, each after substituting
    /// the earlier ones.
    pub literal: Vec<(String, bool)>,
    /// Printed equation lies in the span of the derived system.
    pub printed_in_derived: Vec<(String, bool)>,
    /// Derived equation lies in the span of the printed system.
    pub derived_in_printed: Vec<(String, bool)>,
}

impl DeterminingComparison {
    pub fn equivalent(&self) -> bool {
        [&self.literal, &self.printed_in_derived, &self.derived_in_printed]
            .iter()
            .all(|v| v.iter().all(|(_, ok)| *ok))
    }
}

const FIELD_NAMES: [&str; 3] = ["xi1", "xi2", "eta"];

/// Sets the single derivative `d` and all its derivatives to zero.
fn kill_family(e: &Expr, d: &Applied) -> Expr {
    replace_applied(e, &|ap| {
        (ap.name == d.name && ap.derivs.iter().zip(&d.derivs).all(|(a, b)| a >= b)).then(Expr::zero)
    })
    .simplify()
}

fn single_derivative(e: &Expr) -> Option<Applied> {
    match e {
        Expr::Apply(ap) if FIELD_NAMES.contains(&&*ap.name) => Some((**ap).clone()),
        _ => None,
    }
}

fn multiple_of(e: &Expr, target: &Expr) -> bool {
    let r = (e.clone() / target.clone()).simplify();
    !r.is_zero() && !r.contains(&mut |n| matches!(n, Expr::Apply(ap) if FIELD_NAMES.contains(&&*ap.name)))
}

/// Compares the determining system of `p` with `printed`. Printed rows that
/// are a single derivative are matched literally and then substituted into
/// both systems; the remaining rows are compared by linear span both ways.
pub fn compare_determining(p: &PdeSpec, printed: &[(&str, Expr)]) -> Result<DeterminingComparison, JetError> {
    let mut ours: Vec<Expr> = determining_equations(p)?.into_values().map(|e| e.simplify()).collect();
    let mut rest: Vec<(&str, Expr)> = Vec::new();
    let mut literal = Vec::new();
    for (label, e) in printed {
        let Some(d) = single_derivative(e) else {
            rest.push((label, e.clone()));
            continue;
        };
        literal.push((label.to_string(), ours.iter().any(|o| multiple_of(o, e))));
        ours = ours.iter().map(|o| kill_family(o, &d)).filter(|o| !o.is_zero()).collect();
        for r in rest.iter_mut() {
            r.1 = kill_family(&r.1, &d);
        }
    }
    let printed_rest: Vec<Expr> = rest.iter().map(|(_, e)| e.clone()).collect();
    let printed_in_derived = rest
        .iter()
        .map(|(l, e)| (l.to_string(), in_applied_span(&ours, e, &FIELD_NAMES)))
        .collect();
    let derived_in_printed = ours
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("derived[{i}]"), in_applied_span(&printed_rest, e, &FIELD_NAMES)))
        .collect();
    Ok(DeterminingComparison {
        literal,
        printed_in_derived,
        derived_in_printed,
    })
}

/// Invariance check of one generator.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SymmetryCheck {
    pub generator: String,
    pub pass: bool,
    pub certificate: ZeroCertificate,
}

pub fn verify_symmetry(
    p: &PdeSpec,
    v: &VectorField,
    params: &ParamSpace,
    opts: &CheckOptions,
) -> Result<SymmetryCheck, JetError> {
    let r = invariance_residual(p, v)?;
    let certificate = certify_zero(&r, &Ranges::default(), params, opts);
    Ok(SymmetryCheck {
        generator: v.to_string(),
        pass: certificate.pass(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::*;

    fn fisher() -> PdeSpec {
        PdeSpec::new(u(), u() * (1 - u()))
    }

    #[test]
    fn prolongation_examples() {
        let pr = prolong2(&VectorField::new(Expr::one(), Expr::zero(), Expr::zero())).unwrap();
        assert!(pr.zeta_t.is_zero_literal() && pr.zeta_x.is_zero_literal() && pr.zeta_xx.is_zero_literal());
        let e = exp(-t());
        let pr = prolong2(&VectorField::new(e.clone(), Expr::zero(), u() * e.clone())).unwrap();
        assert!((pr.zeta_t - (2 * e.clone() * jet(1, 0) - u() * e)).is_zero());
        let n = param("n");
        let pr = prolong2(&VectorField::new(Expr::zero(), x(), 2 * u() / n.clone())).unwrap();
        assert!((pr.zeta_x - (2 / n - 1) * jet(0, 1)).is_zero());
    }

    #[test]
    fn symmetries_and_non_symmetries() {
        let dt = VectorField::new(Expr::one(), Expr::zero(), Expr::zero());
        assert!(invariance_residual(&PdeSpec::abstract_fg(), &dt).unwrap().is_zero());
        let e = exp(-t());
        let x2 = VectorField::new(e.clone(), Expr::zero(), u() * e);
        assert!(invariance_residual(&fisher(), &x2).unwrap().is_zero());
        let du = VectorField::new(Expr::zero(), Expr::zero(), Expr::one());
        let r = invariance_residual(&fisher(), &du).unwrap();
        let mut env = std::collections::BTreeMap::new();
        env.insert(Symbol::X, 1.0);
        env.insert(Symbol::Jet(Jet::U), 0.3);
        env.insert(Symbol::Jet(Jet { t: 0, x: 1 }), 0.2);
        env.insert(Symbol::Jet(Jet { t: 0, x: 2 }), 0.1);
        assert!(r.eval(&env).unwrap().abs() > 0.1);
    }

    #[test]
    fn residual_is_linear() {
        let p = fisher();
        let a = VectorField::new(t(), x() * u(), u().powi(2));
        let b = VectorField::new(exp(-t()), Expr::zero(), u() * exp(-t()));
        let lhs = invariance_residual(&p, &a.add(&b)).unwrap();
        let rhs = invariance_residual(&p, &a).unwrap() + invariance_residual(&p, &b).unwrap();
        assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn determining_system_matches_the_printed_one_after_one_correction() {
        let printed = crate::catalogue::printed_determining();
        let c = compare_determining(&PdeSpec::abstract_fg(), &printed).unwrap();
        assert!(c.literal.iter().all(|(_, ok)| *ok));
        assert_eq!(c.printed_in_derived.iter().filter(|(_, ok)| !ok).count(), 1);
        let printed = crate::catalogue::corrected_determining();
        let c = compare_determining(&PdeSpec::abstract_fg(), &printed).unwrap();
        assert!(c.equivalent(), "{c:?}");
    }
}
