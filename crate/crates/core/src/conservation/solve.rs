//! Separable multipliers `e^{λt} φ(x)` from the determining system.

use std::collections::BTreeMap;
use serde::Serialize;

use super::{euler_apply, ConservationError};
use crate::expr::{apply1, big_f, exp, func, ln, param, q_to_f64, sqrt, t, x, Expr, Func, Symbol};
use crate::jet::{PdeFn, PdeSpec};
use crate::numeric::ParamSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiFamily {
    /// `(x φ')' = 0`: `1, ln x`.
    Logarithmic,
    /// `x φ'' + φ' - κ² x φ = 0`: `I₀(κx), K₀(κx)`.
    ModifiedBessel,
    /// `x φ'' + φ' + κ² x φ = 0`: `J₀(κx), Y₀(κx)`.
    Bessel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolvedMultipliers {
    pub lambda: String,
    pub family: PhiFamily,
    pub kappa: Option<String>,
    pub multipliers: Vec<String>,
    /// Relations `... = 0` needed for the multipliers to exist.
    pub constraints: Vec<String>,
    #[serde(skip)]
    pub exprs: Vec<Expr>,
    #[serde(skip)]
    pub kappa_expr: Option<Expr>,
}

/// Replaces `φ^{(k)}(x)` by the plain symbol `F^{(k)}`.
fn phi_as_symbols(e: &Expr) -> Expr {
    crate::expr::replace_applied(e, &|ap| (&*ap.name == "phi" && ap.derivs[0] <= 2).then(|| big_f(ap.derivs[0]))).norm()
}

struct Linear {
    a: Expr,
    b: Expr,
    c: Expr,
}

/// `A φ'' + B φ' + C φ` with coefficients free of `φ`.
fn linear_in_phi(e: &Expr) -> Option<Linear> {
    let (f0, f1, f2) = (Symbol::F(0), Symbol::F(1), Symbol::F(2));
    let l = Linear {
        a: e.diff(&f2).simplify(),
        b: e.diff(&f1).simplify(),
        c: e.diff(&f0).simplify(),
    };
    let free = |c: &Expr| ![&f0, &f1, &f2].iter().any(|s| c.has_symbol(s));
    let rest = (e.clone() - l.a.clone() * big_f(2) - l.b.clone() * big_f(1) - l.c.clone() * big_f(0)).simplify();
    (free(&l.a) && free(&l.b) && free(&l.c) && rest.is_zero()).then_some(l)
}

/// Sign of `r` over the admissible parameters, if it is the same everywhere.
fn sign_over(r: &Expr, params: &ParamSpace) -> Option<f64> {
    let mut envs = vec![BTreeMap::new()];
    for (name, vals) in params {
        if !r.has_symbol(&Symbol::param(name)) {
            continue;
        }
        envs = envs
            .into_iter()
            .flat_map(|env: BTreeMap<Symbol, f64>| {
                vals.iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(Symbol::param(name), q_to_f64(v));
                    e
                })
            })
            .collect();
    }
    let signs: Vec<f64> = envs.iter().map(|e| r.eval(e).ok().map(f64::signum)).collect::<Option<_>>()?;
    let s = *signs.first()?;
    signs.iter().all(|v| *v == s).then_some(s)
}

/// Multipliers of the form `e^{λt} φ(x)` with `φ` in the catalogue
/// `{1, ln x}`, `{I₀, K₀}(κx)` or `{J₀, Y₀}(κx)`. Parameter signs are taken
/// from the admissible values in `params`.
pub fn multiplier_solve(p: &PdeSpec, params: &ParamSpace) -> Result<SolvedMultipliers, ConservationError> {
    if matches!(p.f, PdeFn::Abstract(_)) || matches!(p.g, PdeFn::Abstract(_)) {
        return Err(ConservationError::AbstractPde);
    }
    let lam = param("lambda");
    let lam_sym = Symbol::param("lambda");
    let ansatz = exp(lam.clone() * t()) * apply1("phi", 0, x());
    let e = euler_apply(&(x() * ansatz * p.residual()))?;
    let e = phi_as_symbols(&(e * exp(-lam.clone() * t())).simplify()).simplify();
    if e.has_derivative_jet() {
        return Err(ConservationError::NoCatalogueMatch(e.to_string()));
    }
    let groups = crate::expr::split_dependence(&e, &|s| *s == Symbol::Jet(crate::expr::Jet::U));
    let mut conditions = Vec::new();
    let mut ratios = Vec::new();
    for g in groups.values() {
        let l = linear_in_phi(g).ok_or_else(|| ConservationError::NoCatalogueMatch(g.to_string()))?;
        if l.a.is_zero() && l.b.is_zero() {
            // Algebraic in φ: each x-dependent part of the coefficient vanishes.
            for c in crate::expr::split_dependence(&l.c, &|s| *s == Symbol::X).values() {
                conditions.push(c.clone());
            }
            continue;
        }
        // a (x φ'' + φ') + b x φ
        let a = l.b.clone();
        let bad = || ConservationError::NoCatalogueMatch(g.to_string());
        if !(l.a.clone() - a.clone() * x()).simplify().is_zero() {
            return Err(bad());
        }
        let r = (l.c.clone() / (a * x())).simplify();
        if r.has_symbol(&Symbol::X) {
            return Err(bad());
        }
        ratios.push(r);
    }
    // Fix λ from the first condition that mentions it.
    let mut lambda_value = Expr::zero();
    let mut constraints = Vec::new();
    for c in &conditions {
        let k = c.diff(&lam_sym).simplify();
        if !k.is_zero() && !k.has_symbol(&lam_sym) && lambda_value.is_zero() && c.has_symbol(&lam_sym) {
            lambda_value = (-(c.subst_sym(&lam_sym, &Expr::zero())) / k).simplify();
        }
    }
    for c in &conditions {
        let v = c.subst_sym(&lam_sym, &lambda_value).simplify();
        if !v.is_zero() {
            constraints.push(v);
        }
    }
    let mut ratios: Vec<Expr> = ratios.into_iter().map(|r| r.subst_sym(&lam_sym, &lambda_value).simplify()).collect();
    let Some(r) = ratios.pop() else {
        return Err(ConservationError::NoCatalogueMatch(e.to_string()));
    };
    for other in ratios {
        let d = (other - r.clone()).simplify();
        if !d.is_zero() {
            constraints.push(d);
        }
    }
    let decay = exp(lambda_value.clone() * t()).norm();
    let (family, kappa, phis) = if r.is_zero() {
        (PhiFamily::Logarithmic, None, vec![Expr::one(), ln(x())])
    } else {
        let s = sign_over(&r, params).ok_or_else(|| ConservationError::NoCatalogueMatch(format!("sign of {r}")))?;
        let kappa = sqrt((r.clone() * s as i64).simplify()).simplify();
        let arg = kappa.clone() * x();
        if s < 0.0 {
            (PhiFamily::ModifiedBessel, Some(kappa), vec![func(Func::BesselI0, arg.clone()), func(Func::BesselK0, arg)])
        } else {
            (PhiFamily::Bessel, Some(kappa), vec![func(Func::BesselJ0, arg.clone()), func(Func::BesselY0, arg)])
        }
    };
    let exprs: Vec<Expr> = phis.into_iter().map(|f| (decay.clone() * f).norm()).collect();
    Ok(SolvedMultipliers {
        lambda: lambda_value.to_string(),
        family,
        kappa: kappa.as_ref().map(|k| k.to_string()),
        kappa_expr: kappa,
        multipliers: exprs.iter().map(Expr::to_string).collect(),
        constraints: constraints.iter().map(|c| format!("{c} = 0")).collect(),
        exprs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{q, u, Expr};

    #[test]
    fn fisher_gives_modified_bessel() {
        let s = multiplier_solve(&PdeSpec::new(u(), u() * (1 - u())), &ParamSpace::new()).unwrap();
        assert_eq!(s.family, PhiFamily::ModifiedBessel);
        assert_eq!(s.lambda, "-1");
        assert_eq!(s.exprs[0], (exp(-t()) * func(Func::BesselI0, sqrt(2) * x())).norm());
        assert!(s.constraints.is_empty());
    }

    #[test]
    fn heat_equation_gives_logarithm() {
        let s = multiplier_solve(&PdeSpec::new(Expr::one(), Expr::zero()), &ParamSpace::new()).unwrap();
        assert_eq!(s.family, PhiFamily::Logarithmic);
        assert_eq!(s.exprs, vec![Expr::one(), ln(x())]);
    }

    #[test]
    fn quadratic_source_gives_bessel() {
        let mut ps = ParamSpace::new();
        ps.insert("a".into(), vec![q(1, 1), q(2, 1)]);
        ps.insert("p".into(), vec![q(1, 2), q(3, 1)]);
        let s = multiplier_solve(&PdeSpec::new(param("a") * u(), param("p") * u().powi(2)), &ps).unwrap();
        assert_eq!(s.family, PhiFamily::Bessel);
        assert_eq!(s.lambda, "0");
        let k = s.kappa_expr.unwrap();
        assert!((k.powi(2) - 2 * param("p") / param("a")).simplify().is_zero());
    }
}
