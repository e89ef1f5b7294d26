//! Similarity reduction: invariants of a generator, substitution of
//! `u = phi(t, x) F(alpha)` into the PDE and extraction of the reduced ODE.

pub mod tables;

use thiserror::Error;

use crate::expr::{alpha, big_f, exp, ln, split_dependence, t, u, x, Binding, Expr, Func, Jet, Symbol};
use crate::jet::PdeSpec;
use crate::symmetry::VectorField;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error("unsupported generator shape: {0}")]
    UnsupportedShape(String),
    #[error("generator has no t or x component")]
    DegenerateGenerator,
    #[error("explicit dependence left after prefactor division: {0}")]
    ResidualExplicitDependence(String),
    #[error("ansatz is not invariant under the generator: {0}")]
    NotInvariant(String),
}

/// `u = phi(t, x) F(alpha(t, x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityAnsatz {
    pub alpha: Expr,
    pub phi: Expr,
}

impl SimilarityAnsatz {
    pub fn new(alpha: Expr, phi: Expr) -> SimilarityAnsatz {
        SimilarityAnsatz {
            alpha: alpha.norm(),
            phi: phi.norm(),
        }
    }

    /// `X(alpha)` and `X(u - phi F(alpha))` on `u = phi F`, both zero for an
    /// invariant ansatz.
    pub fn invariance_defects(&self, v: &VectorField) -> (Expr, Expr) {
        let xa = v.act(&self.alpha);
        let on = Binding::single(Symbol::Jet(Jet::U), (&self.phi * big_f(0)).norm());
        let eta = v.eta.subst(&on);
        let xi = VectorField::new(v.xi1.subst(&on), v.xi2.subst(&on), Expr::zero());
        let manifold = (eta - xi.act(&self.phi) * big_f(0) - &self.phi * big_f(1) * xi.act(&self.alpha)).norm();
        (xa, manifold)
    }

    pub fn is_invariant_under(&self, v: &VectorField) -> bool {
        let (a, m) = self.invariance_defects(v);
        a.is_zero() && m.is_zero()
    }

    /// `F(alpha) -> k F(alpha)` with `phi -> phi / k`.
    pub fn rescaled(&self, k: &Expr) -> SimilarityAnsatz {
        SimilarityAnsatz::new(self.alpha.clone(), &self.phi / k)
    }
}

fn free_of(e: &Expr, syms: &[Symbol]) -> bool {
    syms.iter().all(|s| !e.has_symbol(s))
}

fn uu() -> Symbol {
    Symbol::Jet(Jet::U)
}

/// Antiderivative in `t` of sums of `c e^{mu t}`, `c` and `c / (a + b t)`.
fn integrate_t(e: &Expr) -> Option<Expr> {
    let mut out = Vec::new();
    for (key, coef) in split_dependence(&e.norm(), &|s| *s == Symbol::T) {
        let term = if key.is_one_literal() {
            coef * t()
        } else if let Expr::Func(Func::Exp, arg) = &key {
            let mu = arg.diff(&Symbol::T);
            if mu.has_symbol(&Symbol::T) || mu.is_zero() {
                return None;
            }
            coef * key.clone() / mu
        } else if let Expr::Pow(pe) = &key {
            let (base, ex) = (&pe.0, &pe.1);
            let slope = base.diff(&Symbol::T);
            if !ex.norm().as_num().is_some_and(|v| *v == -<crate::expr::Q as num_traits::One>::one()) || slope.has_symbol(&Symbol::T) {
                return None;
            }
            coef * ln(base.clone()) / slope
        } else {
            return None;
        };
        out.push(term);
    }
    Some(Expr::sum(out).norm())
}

/// Closed-form invariants for generators `xi1(t) d/dt + k x d/dx + beta(t) u d/du`.
pub fn invariants_for(v: &VectorField) -> Result<SimilarityAnsatz, ReductionError> {
    let (tx, xu) = ([Symbol::X, uu()], [Symbol::T, Symbol::X, uu()]);
    let xi1 = v.xi1.norm();
    if !free_of(&xi1, &tx) {
        return Err(ReductionError::UnsupportedShape(format!("xi1 = {xi1} depends on x or u")));
    }
    let k = (&v.xi2 / x()).norm();
    if !free_of(&k, &xu) {
        return Err(ReductionError::UnsupportedShape(format!("xi2 = {} is not a constant multiple of x", v.xi2)));
    }
    let beta = (&v.eta / u()).norm();
    if !free_of(&beta, &tx) {
        return Err(ReductionError::UnsupportedShape(format!("eta = {} is not u times a function of t", v.eta)));
    }
    let unsupported = |what: &str, e: &Expr| ReductionError::UnsupportedShape(format!("cannot integrate {what} = {e}"));
    let ans = if xi1.is_zero() {
        if k.is_zero() {
            return Err(ReductionError::DegenerateGenerator);
        }
        SimilarityAnsatz::new(t(), x().pow(&beta / &k))
    } else if k.is_zero() {
        let g = (&beta / &xi1).norm();
        let phase = integrate_t(&g).ok_or_else(|| unsupported("eta/(u xi1)", &g))?;
        SimilarityAnsatz::new(x(), exp(phase))
    } else {
        let parts = split_dependence(&beta, &|s| *s == Symbol::T);
        let b = parts.get(&Expr::one()).cloned().unwrap_or_else(Expr::zero);
        let rest = (&beta - &b).norm();
        let g = (&rest / &xi1).norm();
        let phase = integrate_t(&g).ok_or_else(|| unsupported("eta/(u xi1)", &g))?;
        let phi = x().pow(&b / &k) * exp(phase);
        let slope = xi1.diff(&Symbol::T);
        let alpha = if !slope.is_zero() && slope.diff(&Symbol::T).is_zero() {
            (&xi1 / &slope).simplify() * x().pow(-(&slope / &k).simplify())
        } else {
            let s = integrate_t(&xi1.recip()).ok_or_else(|| unsupported("1/xi1", &xi1.recip()))?;
            &k * s - ln(x())
        };
        SimilarityAnsatz::new(alpha.simplify(), phi.simplify())
    };
    let (a, m) = ans.invariance_defects(v);
    if !a.is_zero() || !m.is_zero() {
        return Err(ReductionError::NotInvariant(format!("X(alpha) = {a}, manifold defect {m}")));
    }
    Ok(ans)
}

/// An ODE `lhs(alpha, F, F', F'') = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedOde {
    pub lhs: Expr,
    pub ansatz: SimilarityAnsatz,
}

impl ReducedOde {
    /// Highest derivative of `F` present.
    pub fn order(&self) -> u8 {
        (0..=2).rev().find(|&k| self.lhs.has_symbol(&Symbol::F(k))).unwrap_or(0)
    }
}

/// Expresses one coordinate through `alpha` and the other coordinate.
/// Returns `(eliminated, replacement, remaining, shift)`; a shift `s` means
/// the coefficient of the power of `x` is proportional to `t - s`.
fn inversion(a: &Expr) -> Result<(Symbol, Expr, Symbol, Option<Expr>), ReductionError> {
    let al = alpha();
    if !a.has_symbol(&Symbol::X) {
        if *a == t() {
            return Ok((Symbol::T, al, Symbol::X, None));
        }
        return Err(ReductionError::UnsupportedShape(format!("alpha = {a} is a function of t only")));
    }
    if *a == x() {
        return Ok((Symbol::X, al, Symbol::T, None));
    }
    let parts = split_dependence(a, &|s| *s == Symbol::X);
    let bad = || ReductionError::UnsupportedShape(format!("cannot solve alpha = {a} for x"));
    let mut rest = Expr::zero();
    let mut log_coef = None;
    let mut power = None;
    for (key, coef) in &parts {
        if key.is_one_literal() {
            rest = coef.clone();
        } else if *key == ln(x()).norm() {
            log_coef = Some(coef.clone());
        } else if let Some(p) = x_power(key) {
            power = Some((p, coef.clone()));
        } else {
            return Err(bad());
        }
    }
    let mut shift = None;
    let repl = match (log_coef, power) {
        (Some(c), None) => exp((al - rest) / c),
        (None, Some((p, c))) if rest.is_zero() => {
            let slope = c.diff(&Symbol::T).simplify();
            let c0 = c.subst_sym(&Symbol::T, &Expr::zero()).simplify();
            if !slope.is_zero() && slope.diff(&Symbol::T).is_zero() && !c0.is_zero() {
                shift = Some((-c0 / slope).simplify());
            }
            (al / c).pow(p.recip())
        }
        _ => return Err(bad()),
    };
    Ok((Symbol::X, repl.norm(), Symbol::T, shift))
}

fn x_power(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Sym(Symbol::X) => Some(Expr::one()),
        Expr::Pow(pe) if pe.0 == x() && !pe.1.has_symbol(&Symbol::X) => Some(pe.1.clone()),
        _ => None,
    }
}

/// Substitutes the ansatz into `R[u]` and divides out the prefactor.
pub fn reduce(p: &PdeSpec, ans: &SimilarityAnsatz) -> Result<ReducedOde, ReductionError> {
    let (a, phi) = (&ans.alpha, &ans.phi);
    let d = |e: &Expr, s: Symbol| e.diff(&s);
    let (at, ax) = (d(a, Symbol::T), d(a, Symbol::X));
    let axx = d(&ax, Symbol::X);
    let (pt, px) = (d(phi, Symbol::T), d(phi, Symbol::X));
    let pxx = d(&px, Symbol::X);
    let (f0, f1, f2) = (big_f(0), big_f(1), big_f(2));
    let mut b = Binding::new();
    b.bind(uu(), phi * &f0);
    b.bind(Symbol::Jet(Jet { t: 1, x: 0 }), &pt * &f0 + phi * &at * &f1);
    b.bind(Symbol::Jet(Jet { t: 0, x: 1 }), &px * &f0 + phi * &ax * &f1);
    b.bind(
        Symbol::Jet(Jet { t: 0, x: 2 }),
        &pxx * &f0 + (2 * &px * &ax + phi * &axx) * &f1 + phi * ax.powi(2) * &f2,
    );
    let r = p.residual().subst(&b);
    let (gone, repl, remaining, shift) = inversion(a)?;
    let mut r = r.subst(&Binding::single(gone, repl));
    if let Some(s) = shift {
        // the identity holds for every t, so recentre on the zero of the coefficient
        r = r.subst_sym(&Symbol::T, &(t() + s)).simplify();
    }
    let groups = split_dependence(&r, &|s| *s == remaining);
    let Some((k0, _)) = groups.iter().next() else {
        return Ok(ReducedOde {
            lhs: Expr::zero(),
            ansatz: ans.clone(),
        });
    };
    let mut terms = Vec::new();
    for (key, coef) in &groups {
        let mut ratio = (key / k0).simplify();
        if ratio.has_symbol(&remaining) {
            if !ratio.diff(&remaining).is_zero() {
                return Err(ReductionError::ResidualExplicitDependence(format!("{ratio}")));
            }
            ratio = ratio.subst_sym(&remaining, &Expr::one()).simplify();
        }
        terms.push(ratio * coef);
    }
    let lhs = crate::expr::normal::primitive_part(&Expr::sum(terms).simplify());
    if lhs.has_symbol(&Symbol::T) || lhs.has_symbol(&Symbol::X) {
        return Err(ReductionError::ResidualExplicitDependence(format!("{lhs}")));
    }
    Ok(ReducedOde {
        lhs,
        ansatz: ans.clone(),
    })
}

/// True when `ours = h printed` with `h` nonzero and free of `F'`, `F''`.
pub fn matches_up_to_factor(ours: &Expr, printed: &Expr) -> bool {
    if ours.is_zero() || printed.is_zero() {
        return false;
    }
    [Symbol::F(1), Symbol::F(2)].iter().all(|s| {
        let cross = ours.diff(s) * printed - ours * printed.diff(s);
        cross.is_zero()
    })
}
