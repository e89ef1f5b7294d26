//! Conservation laws by the multiplier method: the Euler operator,
//! multiplier checks and determination, and conserved vectors built by
//! integration by parts.

mod analysis;
mod construct;
mod solve;

pub use analysis::{analyse_case, CaseFinding, VectorFinding, MANUFACTURED_POINTS};
pub use construct::{
    construct_conserved_vector, divergence_residual, equivalent_modulo_trivial, manufactured_divergence, verify_conserved_vector, ConservedVector, VectorCheck,
};
pub use solve::{multiplier_solve, PhiFamily, SolvedMultipliers};

use serde::Serialize;

pub use crate::report::Status;
use thiserror::Error;

use crate::expr::{apply, q, t, u, x, Expr, Symbol};
use crate::jet::{d_t, d_x, JetError, PdeSpec};
use crate::numeric::{certify_zero, CheckOptions, ParamSpace, Ranges, ZeroCertificate};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ConservationError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("multiplier depends on derivatives of u: {0}")]
    JetDependentMultiplier(String),
    #[error("no catalogue form matches {0}")]
    NoCatalogueMatch(String),
    #[error("remainder is not a total x-derivative: {0}")]
    ConstructionStuck(String),
    #[error("f and g must be concrete")]
    AbstractPde,
}

/// `E_u(e) = sum over jets J of (-D)^J (de/du_J)`.
pub fn euler_apply(e: &Expr) -> Result<Expr, JetError> {
    let e = e.norm();
    let mut terms = Vec::new();
    for s in e.symbols() {
        let Symbol::Jet(j) = s else { continue };
        let mut term = e.diff(&s);
        for _ in 0..j.t {
            term = d_t(&term)?;
        }
        for _ in 0..j.x {
            term = d_x(&term)?;
        }
        if j.order() % 2 == 1 {
            term = -term;
        }
        terms.push(term);
    }
    Ok(Expr::sum(terms).simplify())
}

/// Effective characteristic `x Λ` of a multiplier.
pub fn characteristic(lambda: &Expr) -> Expr {
    (x() * lambda.clone()).norm()
}

fn check_multiplier_form(lambda: &Expr) -> Result<(), ConservationError> {
    if lambda.has_derivative_jet() {
        return Err(ConservationError::JetDependentMultiplier(lambda.to_string()));
    }
    Ok(())
}

/// Sampling box used by the conservation checks: positive `u` keeps
/// fractional powers and logarithms real.
pub fn conservation_ranges() -> Ranges {
    Ranges {
        t: (0.0, 2.0),
        x: (0.5, 2.0),
        u: (0.2, 0.9),
        deriv: (-1.0, 1.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierCheck {
    pub multiplier: String,
    pub status: Status,
    pub certificate: ZeroCertificate,
    /// Parameter relations under which the residual vanishes exactly.
    pub constraints: Vec<Constraint>,
}

/// A parameter relation `param = value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub param: String,
    pub value: String,
    #[serde(skip)]
    sym: Symbol,
    #[serde(skip)]
    val: Expr,
}

impl Constraint {
    pub fn new(sym: Symbol, val: Expr) -> Constraint {
        Constraint {
            param: sym.to_string(),
            value: val.to_string(),
            sym,
            val,
        }
    }

    pub fn apply(&self, e: &Expr) -> Expr {
        e.subst_sym(&self.sym, &self.val).simplify()
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.param, self.value)
    }
}

/// Single relations `P = v` or `P = R` tried when a residual does not vanish.
fn candidate_constraints(e: &Expr) -> Vec<Constraint> {
    let names: Vec<Symbol> = e.symbols().into_iter().filter(|s| matches!(s, Symbol::Param(_))).collect();
    let mut out = Vec::new();
    for s in &names {
        for v in [q(1, 1), q(-1, 1), q(2, 1), q(1, 2)] {
            out.push(Constraint::new(s.clone(), Expr::Num(v)));
        }
    }
    for (i, a) in names.iter().enumerate() {
        for b in &names[..i] {
            out.push(Constraint::new(a.clone(), Expr::Sym(b.clone())));
        }
    }
    out
}

/// Relations from [`candidate_constraints`] that make `residual` vanish.
pub fn vanishing_constraints(residual: &Expr) -> Vec<Constraint> {
    candidate_constraints(residual)
        .into_iter()
        .filter(|c| c.apply(residual).is_zero())
        .collect()
}

/// `E_u(x Λ R[u])`.
pub fn multiplier_residual(p: &PdeSpec, lambda: &Expr) -> Result<Expr, ConservationError> {
    check_multiplier_form(lambda)?;
    Ok(euler_apply(&(characteristic(lambda) * p.residual()))?)
}

pub fn verify_multiplier(
    p: &PdeSpec,
    lambda: &Expr,
    params: &ParamSpace,
    opts: &CheckOptions,
) -> Result<MultiplierCheck, ConservationError> {
    let r = multiplier_residual(p, lambda)?;
    let certificate = certify_zero(&r, &conservation_ranges(), params, opts);
    let (status, constraints) = if certificate.pass() {
        (Status::Pass, Vec::new())
    } else {
        let c = vanishing_constraints(&r.simplify());
        (if c.is_empty() { Status::Fail } else { Status::Constrained }, c)
    };
    Ok(MultiplierCheck {
        multiplier: lambda.to_string(),
        status,
        certificate,
        constraints,
    })
}

/// Abstract multiplier `Λ(t, x, u)` with the given derivative orders.
pub fn abstract_multiplier(dt: u8, dx: u8, du: u8) -> Expr {
    apply("Lambda", vec![dt, dx, du], vec![t(), x(), u()])
}

/// Coefficients of the jet monomials of `E_u(x Λ R)` for abstract `Λ`.
pub fn multiplier_determining(p: &PdeSpec) -> Result<Vec<Expr>, ConservationError> {
    let e = euler_apply(&(x() * abstract_multiplier(0, 0, 0) * p.residual()))?;
    Ok(crate::expr::jet_coefficients(&e)
        .into_values()
        .map(|c| c.simplify())
        .filter(|c| !c.is_zero())
        .collect())
}

/// True when `candidate` is a nonzero constant multiple of one of `system`.
pub fn contains_up_to_constant(system: &[Expr], candidate: &Expr) -> bool {
    system.iter().any(|e| {
        let r = (e.clone() / candidate.clone()).simplify();
        r.as_num().is_some_and(|v| *v != q(0, 1))
    })
}

/// `candidate` is a combination, with coefficients in `t, x, u` and the
/// abstract `f`, `g`, of the equations of `system`, all linear in the
/// derivatives of `Λ`.
pub fn in_linear_span(system: &[Expr], candidate: &Expr) -> bool {
    crate::linalg::in_applied_span(system, candidate, &["Lambda"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{apply1, exp, func, jet, sqrt, Func};

    fn fisher() -> PdeSpec {
        PdeSpec::new(u(), u() * (1 - u()))
    }

    #[test]
    fn euler_of_total_derivatives_vanishes() {
        let e = u() * jet(0, 1).powi(2) * x() + exp(t() * u());
        assert!(euler_apply(&d_x(&e).unwrap()).unwrap().is_zero());
        assert!(euler_apply(&(u() * jet(1, 0))).unwrap().is_zero());
        assert!(!euler_apply(&u().powi(2)).unwrap().is_zero());
    }

    #[test]
    fn constant_multiplier_fails_for_fisher() {
        let r = multiplier_residual(&fisher(), &Expr::one()).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn bessel_multiplier_of_case1() {
        let lam = exp(-t()) * func(Func::BesselI0, sqrt(2) * x());
        let c = verify_multiplier(&fisher(), &lam, &ParamSpace::new(), &CheckOptions::default()).unwrap();
        assert_eq!(c.status, Status::Pass, "{}", c.certificate.residual);
    }

    #[test]
    fn determining_system_of_abstract_pde() {
        let sys = multiplier_determining(&PdeSpec::abstract_fg()).unwrap();
        let f = apply1("f", 0, u());
        let de1 = x() * f.clone() * abstract_multiplier(0, 0, 1);
        let de2 = 2 * x() * f.clone() * abstract_multiplier(0, 1, 1) + f * abstract_multiplier(0, 0, 1);
        assert!(contains_up_to_constant(&sys, &de1));
        assert!(!contains_up_to_constant(&sys, &de2));
        assert!(in_linear_span(&sys, &de2));
        assert!(!in_linear_span(&sys, &(x() * abstract_multiplier(1, 0, 1))));
    }
}
