//! Command-line driver: each subcommand reads a case file, runs one family
//! of checks and emits a [`Report`].
//!
//! Exit codes: 0 when every check passes, 1 when any check fails or is only
//! constrained, 2 on usage, parse or I/O errors.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fisher_lie::catalogue::CaseId;
use fisher_lie::conservation::{construct_conserved_vector, verify_conserved_vector, verify_multiplier, Status};
use fisher_lie::dsl::casefile::{parse_case, CaseFile};
use fisher_lie::dsl::parse_expr;
use fisher_lie::expr::{Expr, Symbol, Q};
use fisher_lie::lie::{adjoint_map, adjoint_table, epsilon, is_automorphism, show_combination, structure_constants};
use fisher_lie::numeric::roundtrip::{ode_roundtrip_check, Domain, RoundTripConfig};
use fisher_lie::numeric::{CheckOptions, ParamSpace};
use fisher_lie::optimal::{check_witness, optimal_representative, ParamValues};
use fisher_lie::reduction::{invariants_for, reduce};
use fisher_lie::report::{emit_report, Check, Format, Report};
use fisher_lie::symmetry::{determining_equations, verify_symmetry, VectorField};

#[derive(Parser, Debug)]
#[command(name = "fisher-lie", version, about = "Symmetry, reduction and conservation-law checks for u_t = (1/x)(x f(u) u_x)_x + g(u)")]
pub struct Cli {
    /// Master seed of every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Jet points per numeric zero check.
    #[arg(long, global = true, default_value_t = 200)]
    pub points: usize,
    /// Tolerance of numeric zero checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    pub format: OutFormat,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariance of one generator.
    VerifySymmetry {
        file: PathBuf,
        #[arg(long)]
        generator: String,
    },
    /// Determining equations of the case's PDE.
    Determining { file: PathBuf },
    /// Brackets of the listed generators.
    Commutators { file: PathBuf },
    /// Adjoint table of the listed generators.
    AdjointTable { file: PathBuf },
    /// Optimal-system representative of `sum a_k X_k` for a catalogue case.
    Optimal {
        file: PathBuf,
        #[arg(long)]
        case: CaseId,
        /// Comma separated rationals, one per basis element.
        #[arg(long)]
        coeffs: String,
    },
    /// Similarity reduction under one generator.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        generator: String,
    },
    /// Multiplier criterion `E_u(x Λ R) = 0`.
    VerifyMultiplier {
        file: PathBuf,
        #[arg(long)]
        multiplier: String,
    },
    /// Conserved vector built from one multiplier.
    Conserved {
        file: PathBuf,
        #[arg(long)]
        multiplier: String,
    },
    /// Integrates the reduced ODE and substitutes the solution back.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        generator: String,
        /// `t=A:B,x=C:D`
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        f0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        fp0: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Every check of the built-in catalogue.
    PaperSuite,
}

/// What a run produced: the rendered report or an error message.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Outcome {
        Outcome {
            code: 2,
            stdout: Vec::new(),
            stderr: msg,
        }
    }
}

struct Input {
    text: String,
    case: CaseFile,
}

fn load(path: &PathBuf) -> Result<Input, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let case = parse_case(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    Ok(Input {
        text,
        case: case.resolved(),
    })
}

/// Samples `{1/2, 2, 3}` for every unbound parameter.
fn samples(c: &CaseFile) -> ParamSpace {
    let vals = vec![Q::new(1.into(), 2.into()), Q::from_integer(2.into()), Q::from_integer(3.into())];
    c.free_params().into_iter().map(|n| (n, vals.clone())).collect()
}

fn generator<'a>(c: &'a CaseFile, name: &str) -> Result<&'a VectorField, String> {
    c.generator(name).ok_or_else(|| {
        let known: Vec<&str> = c.generators.iter().map(|(n, _)| n.as_str()).collect();
        format!("unknown generator `{name}` (file has {})", known.join(", "))
    })
}

fn multiplier<'a>(c: &'a CaseFile, name: &str) -> Result<&'a Expr, String> {
    c.multiplier(name).ok_or_else(|| {
        let known: Vec<&str> = c.multipliers.iter().map(|(n, _)| n.as_str()).collect();
        format!("unknown multiplier `{name}` (file has {})", known.join(", "))
    })
}

fn parse_coeffs(s: &str) -> Result<Vec<Q>, String> {
    s.split(',')
        .map(|part| {
            let e = parse_expr(part.trim()).map_err(|e| format!("--coeffs: {e}"))?.simplify();
            e.as_num().cloned().ok_or_else(|| format!("--coeffs: `{}` is not a number", part.trim()))
        })
        .collect()
}

fn symmetry(c: &CaseFile, name: &str, opts: &CheckOptions) -> Result<Vec<Check>, String> {
    let v = generator(c, name)?;
    let r = verify_symmetry(&c.pde(), v, &samples(c), opts).map_err(|e| e.to_string())?;
    Ok(vec![Check::certified(format!("symmetry/{name}"), &r.certificate, r.generator.clone()).with_details(&r)])
}

fn determining(c: &CaseFile) -> Result<Vec<Check>, String> {
    let eqs = determining_equations(&c.pde()).map_err(|e| e.to_string())?;
    Ok(eqs
        .iter()
        .enumerate()
        .map(|(k, (mono, e))| {
            let m: Vec<String> = mono.iter().map(|(j, p)| format!("{}^{p}", Expr::Sym(Symbol::Jet(*j)))).collect();
            let label = if m.is_empty() { "1".to_string() } else { m.join("*") };
            Check::new(format!("determining/{}", k + 1), Status::Pass, "symbolic", format!("[{label}] {e} = 0"))
        })
        .collect())
}

fn basis(c: &CaseFile) -> Vec<VectorField> {
    c.generators.iter().map(|(_, v)| v.clone()).collect()
}

fn commutators(c: &CaseFile) -> Result<Vec<Check>, String> {
    let alg = structure_constants(&basis(c)).map_err(|e| e.to_string())?;
    let name = |i: usize| c.generators[i].0.clone();
    let mut out: Vec<Check> = alg
        .nonzero_brackets()
        .into_iter()
        .map(|(i, j, k)| {
            let text = show_combination(&k);
            let text = (0..k.len()).fold(text, |s, m| s.replace(&format!("X{}", m + 1), &format!("{{{}}}", name(m))));
            let text = text.replace(['{', '}'], "");
            Check::new(format!("commutators/{}/{}", name(i), name(j)), Status::Pass, "symbolic", format!("[{}, {}] = {text}", name(i), name(j)))
        })
        .collect();
    let ok = alg.is_antisymmetric() && alg.satisfies_jacobi();
    out.push(Check::new(
        "commutators/identities",
        Status::from_pass(ok),
        "symbolic",
        "antisymmetry and the Jacobi identity",
    ));
    Ok(out)
}

fn adjoint(c: &CaseFile) -> Result<Vec<Check>, String> {
    let alg = structure_constants(&basis(c)).map_err(|e| e.to_string())?;
    let tab = adjoint_table(&alg).map_err(|e| e.to_string())?;
    let eps = epsilon();
    let mut out = Vec::new();
    for (i, row) in tab.iter().enumerate() {
        let entries: Vec<String> = row.iter().map(|e| show_combination(e)).collect();
        let map = adjoint_map(&alg, i, &eps).map_err(|e| e.to_string())?;
        let gi = &c.generators[i].0;
        out.push(Check::new(
            format!("adjoint-table/{gi}"),
            Status::from_pass(is_automorphism(&alg, &map)),
            "symbolic",
            format!("Ad(exp(eps {gi})): {}", entries.join(" | ")),
        ));
    }
    Ok(out)
}

fn optimal(c: &CaseFile, case: CaseId, coeffs: &str) -> Result<Vec<Check>, String> {
    let a = parse_coeffs(coeffs)?;
    let mut params = ParamValues::new();
    for name in fisher_lie::catalogue::param_names(case) {
        // Unbound parameters of the file take the first admissible sample.
        let v = fisher_lie::catalogue::admissible(case)
            .get(*name)
            .and_then(|s| s.first().cloned())
            .unwrap_or_else(|| Q::from_integer(2.into()));
        params.insert(name.to_string(), v);
    }
    for (name, e) in &c.params {
        if let Some(q) = e.simplify().as_num() {
            params.insert(name.clone(), q.clone());
        }
    }
    let r = optimal_representative(case, &a, &params).map_err(|e| e.to_string())?;
    let w = check_witness(&r, &params).map_err(|e| e.to_string())?;
    let pass = r.in_printed_branch() && w.exact && w.max_abs_error < 1e-9;
    let rep: Vec<Expr> = r.representative.iter().map(|q| Expr::Num(q.clone())).collect();
    let mut check = Check::new(
        format!("optimal/{case}"),
        Status::from_pass(pass),
        "symbolic",
        format!("{} ({}), listed as {}", show_combination(&rep), r.branch, r.listed.unwrap_or("nothing")),
    );
    let steps: Vec<String> = r.witness.iter().map(|s| s.describe()).collect();
    check.witness = Some(steps.join(", "));
    if !r.in_printed_branch() {
        check.residual = Some(format!("printed branch {} promises {}", r.printed_branch, r.printed_label));
    }
    Ok(vec![check.with_details(&w)])
}

fn reduction(c: &CaseFile, name: &str) -> Result<Vec<Check>, String> {
    let v = generator(c, name)?;
    let id = format!("reduce/{name}");
    let check = match invariants_for(v).and_then(|a| reduce(&c.pde(), &a)) {
        Ok(o) => Check::new(
            id,
            Status::Pass,
            "symbolic",
            format!("u = ({}) F(alpha), alpha = {}: {} = 0", o.ansatz.phi, o.ansatz.alpha, o.lhs),
        ),
        Err(e) => Check::new(id, Status::Fail, "symbolic", e.to_string()),
    };
    Ok(vec![check])
}

fn multiplier_check(c: &CaseFile, name: &str, opts: &CheckOptions) -> Result<Vec<Check>, String> {
    let lam = multiplier(c, name)?;
    let m = verify_multiplier(&c.pde(), lam, &samples(c), opts).map_err(|e| e.to_string())?;
    let mut check = Check::new(format!("multiplier/{name}"), m.status, m.certificate.method(), m.multiplier.clone());
    if !m.certificate.residual.is_empty() {
        check.residual = Some(m.certificate.residual.clone());
    }
    check.constraints = m.constraints.iter().map(|k| k.to_string()).collect();
    if m.status == Status::Constrained {
        check.summary = format!("{} passes iff {}", m.multiplier, check.constraints.join(" or "));
    }
    Ok(vec![check.with_details(&m)])
}

fn conserved(c: &CaseFile, name: &str, opts: &CheckOptions) -> Result<Vec<Check>, String> {
    let lam = multiplier(c, name)?;
    let p = c.pde();
    let v = construct_conserved_vector(&p, lam).map_err(|e| e.to_string())?;
    let k = verify_conserved_vector(&p, &v, &samples(c), opts).map_err(|e| e.to_string())?;
    let summary = format!("T^t = {}, T^x = {}", k.density, k.flux);
    Ok(vec![Check::certified(format!("conserved/{name}"), &k.certificate, summary).with_details(&k)])
}

fn roundtrip(c: &CaseFile, name: &str, domain: &str, f0: f64, fp0: f64, step: f64) -> Result<Vec<Check>, String> {
    let v = generator(c, name)?;
    let domain = Domain::parse(domain).map_err(|e| e.to_string())?;
    let p = c.pde();
    let ode = invariants_for(v).and_then(|a| reduce(&p, &a)).map_err(|e| e.to_string())?;
    let params: BTreeMap<Symbol, f64> = c.free_params().into_iter().map(|n| (Symbol::param(&n), 0.5)).collect();
    let cfg = RoundTripConfig { step, ..RoundTripConfig::default() };
    let id = format!("roundtrip/{name}");
    let check = match ode_roundtrip_check(&p, &ode.ansatz, &ode.lhs, &domain, f0, fp0, &params, &cfg) {
        Ok(r) => Check::new(
            id,
            Status::from_pass(r.max_residual < fisher_lie::suite::ROUNDTRIP_TOL),
            "numeric",
            format!("max |R[u]| = {:.2e} at {:?}", r.max_residual, r.argmax),
        )
        .with_details(&r),
        Err(e) => Check::new(id, Status::Fail, "numeric", e.to_string()),
    };
    Ok(vec![check])
}

fn checks(cmd: &Command, opts: &CheckOptions) -> Result<(Vec<String>, Vec<Check>), String> {
    let (file, run): (&PathBuf, Box<dyn Fn(&CaseFile) -> Result<Vec<Check>, String>>) = match cmd {
        Command::VerifySymmetry { file, generator } => (file, Box::new(move |c| symmetry(c, generator, opts))),
        Command::Determining { file } => (file, Box::new(determining)),
        Command::Commutators { file } => (file, Box::new(commutators)),
        Command::AdjointTable { file } => (file, Box::new(adjoint)),
        Command::Optimal { file, case, coeffs } => (file, Box::new(move |c| optimal(c, *case, coeffs))),
        Command::Reduce { file, generator } => (file, Box::new(move |c| reduction(c, generator))),
        Command::VerifyMultiplier { file, multiplier } => (file, Box::new(move |c| multiplier_check(c, multiplier, opts))),
        Command::Conserved { file, multiplier } => (file, Box::new(move |c| conserved(c, multiplier, opts))),
        Command::Roundtrip {
            file,
            generator,
            domain,
            f0,
            fp0,
            step,
        } => (file, Box::new(move |c| roundtrip(c, generator, domain, *f0, *fp0, *step))),
        Command::PaperSuite => unreachable!("handled by run"),
    };
    let input = load(file)?;
    let out = run(&input.case)?;
    Ok((vec![input.text, format!("{cmd:?}")], out))
}

/// Runs one parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let opts = CheckOptions {
        seed: cli.seed,
        points: cli.points,
        tol: cli.tol,
    };
    let report = match &cli.command {
        Command::PaperSuite => fisher_lie::suite::paper_suite(&opts),
        cmd => match checks(cmd, &opts) {
            Ok((inputs, list)) => {
                let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
                let mut r = Report::new(&opts, &refs);
                for c in list {
                    r.push(c);
                }
                r
            }
            Err(e) => return Outcome::usage(e),
        },
    };
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let bytes = emit_report(&report, format);
    let code = report.exit_code();
    match &cli.out {
        Some(path) => match std::fs::write(path, &bytes) {
            Ok(()) => Outcome {
                code,
                stdout: Vec::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::usage(format!("{}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: bytes,
            stderr: String::new(),
        },
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            }
        }
    }
}
