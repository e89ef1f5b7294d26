//! Jet space of `u(t, x)`: the PDE residual, total derivatives and on-shell
//! elimination of `t`-derivatives.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{apply1, jet, u, x, Binding, Expr, Jet, Symbol};

/// Highest total derivative order carried by the jet.
pub const MAX_ORDER: u8 = 4;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum JetError {
    #[error("jet order overflow: {0} exceeds the supported order {MAX_ORDER}")]
    OrderOverflow(String),
}

/// A coefficient function of the PDE.
#[derive(Clone, Debug, PartialEq)]
pub enum PdeFn {
    /// An expression in `u`.
    Concrete(Expr),
    /// An abstract function symbol of one argument.
    Abstract(Arc<str>),
}

impl PdeFn {
    /// The `k`-th derivative evaluated at `arg`.
    pub fn at(&self, k: u8, arg: &Expr) -> Expr {
        match self {
            PdeFn::Concrete(e) => {
                let u_sym = Symbol::Jet(Jet::U);
                let mut d = e.norm();
                for _ in 0..k {
                    d = d.diff(&u_sym);
                }
                if *arg == u() {
                    d
                } else {
                    d.subst_sym(&u_sym, arg)
                }
            }
            PdeFn::Abstract(name) => apply1(name, k, arg.clone()),
        }
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self, PdeFn::Abstract(_))
    }
}

/// `R[u] = u_t - (1/x)(x f(u) u_x)_x - g(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeSpec {
    pub f: PdeFn,
    pub g: PdeFn,
}

impl PdeSpec {
    pub fn new(f: Expr, g: Expr) -> PdeSpec {
        PdeSpec {
            f: PdeFn::Concrete(f),
            g: PdeFn::Concrete(g),
        }
    }

    pub fn abstract_fg() -> PdeSpec {
        PdeSpec {
            f: PdeFn::Abstract(Arc::from("f")),
            g: PdeFn::Abstract(Arc::from("g")),
        }
    }

    /// `f u_x / x + f' u_x^2 + f u_xx + g`, the value of `u_t` on solutions.
    pub fn rhs(&self) -> Expr {
        let ux = jet(0, 1);
        let f = self.f.at(0, &u());
        let fp = self.f.at(1, &u());
        (f.clone() * ux.clone() / x() + fp * ux.powi(2) + f * jet(0, 2) + self.g.at(0, &u())).norm()
    }

    pub fn residual(&self) -> Expr {
        (jet(1, 0) - self.rhs()).norm()
    }
}

fn jet_symbol(j: Jet) -> Result<Symbol, JetError> {
    if j.order() > MAX_ORDER {
        return Err(JetError::OrderOverflow(crate::expr::jet(j.t, j.x).to_string()));
    }
    Ok(Symbol::Jet(j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    T,
    X,
}

/// `D_t` or `D_x` acting on an expression in `t, x` and the jet.
pub fn total_derivative(e: &Expr, dir: Dir) -> Result<Expr, JetError> {
    let mut terms = Vec::new();
    for s in e.symbols() {
        let carrier = match (&s, dir) {
            (Symbol::T, Dir::T) | (Symbol::X, Dir::X) => Expr::one(),
            (Symbol::Jet(j), Dir::T) => Expr::Sym(jet_symbol(Jet { t: j.t + 1, x: j.x })?),
            (Symbol::Jet(j), Dir::X) => Expr::Sym(jet_symbol(Jet { t: j.t, x: j.x + 1 })?),
            _ => continue,
        };
        terms.push(crate::expr::normal::normalize(&(carrier * e.diff(&s))));
    }
    Ok(Expr::sum(terms).norm())
}

pub fn d_t(e: &Expr) -> Result<Expr, JetError> {
    total_derivative(e, Dir::T)
}

pub fn d_x(e: &Expr) -> Result<Expr, JetError> {
    total_derivative(e, Dir::X)
}

/// On-shell values of the `t`-derivative jets, built lazily.
pub struct Shell {
    rhs: Expr,
    cache: BTreeMap<Jet, Expr>,
}

impl Shell {
    pub fn new(p: &PdeSpec) -> Shell {
        Shell {
            rhs: p.rhs(),
            cache: BTreeMap::new(),
        }
    }

    /// Value of `j` on solutions, free of `t`-derivatives.
    pub fn value(&mut self, j: Jet) -> Result<Expr, JetError> {
        if j.t == 0 {
            return Ok(Expr::Sym(Symbol::Jet(j)));
        }
        if let Some(v) = self.cache.get(&j) {
            return Ok(v.clone());
        }
        let v = if j.x > 0 {
            d_x(&self.value(Jet { t: j.t, x: j.x - 1 })?)?
        } else if j.t == 1 {
            self.rhs.clone()
        } else {
            let prev = d_t(&self.value(Jet { t: j.t - 1, x: 0 })?)?;
            self.reduce(&prev)?
        };
        self.cache.insert(j, v.clone());
        Ok(v)
    }

    /// Replaces every `t`-derivative jet in `e`.
    pub fn reduce(&mut self, e: &Expr) -> Result<Expr, JetError> {
        let mut b = Binding::new();
        let mut any = false;
        for s in e.symbols() {
            if let Symbol::Jet(j) = s {
                if j.t > 0 {
                    b.bind(s.clone(), self.value(j)?);
                    any = true;
                }
            }
        }
        Ok(if any { e.subst(&b) } else { e.norm() })
    }
}

pub fn on_shell(e: &Expr, p: &PdeSpec) -> Result<Expr, JetError> {
    Shell::new(p).reduce(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::*;

    fn fisher() -> PdeSpec {
        PdeSpec::new(u(), u() * (1 - u()))
    }

    #[test]
    fn residual_shapes() {
        let r = fisher().residual();
        let ux = jet(0, 1);
        let want = jet(1, 0) - u() * ux.clone() / x() - ux.powi(2) - u() * jet(0, 2) - u() + u().powi(2);
        assert!((r - want).is_zero());
        let heat = PdeSpec::new(Expr::one(), Expr::zero()).residual();
        assert!((heat - (jet(1, 0) - jet(0, 1) / x() - jet(0, 2))).is_zero());
        let a = PdeSpec::abstract_fg().residual();
        assert!(a.has_applied("f") && a.has_applied("g"));
    }

    #[test]
    fn total_derivatives() {
        assert_eq!(d_x(&(x() * u())).unwrap(), (u() + x() * jet(0, 1)).norm());
        assert_eq!(d_t(&jet(0, 1)).unwrap(), jet(1, 1));
        let e = apply1("f", 0, u());
        assert_eq!(d_x(&e).unwrap(), (apply1("f", 1, u()) * jet(0, 1)).norm());
        assert!(matches!(d_x(&jet(0, 4)), Err(JetError::OrderOverflow(_))));
    }

    #[test]
    fn bessel_total_derivative() {
        let s2 = sqrt(Expr::int(2));
        let i0 = func(Func::BesselI0, s2.clone() * x());
        let e = exp(-t()) * i0.clone() * u();
        let want = exp(-t()) * (s2.clone() * func(Func::BesselI1, s2 * x()) * u() + i0 * jet(0, 1));
        assert!((d_x(&e).unwrap() - want).is_zero());
    }

    #[test]
    fn on_shell_rules() {
        let heat = PdeSpec::new(Expr::one(), Expr::zero());
        let v = on_shell(&jet(1, 0), &heat).unwrap();
        assert!((v - (jet(0, 1) / x() + jet(0, 2))).is_zero());
        for p in [fisher(), PdeSpec::abstract_fg()] {
            assert!(on_shell(&p.residual(), &p).unwrap().is_zero_literal());
        }
        let p = PdeSpec::new(u(), Expr::zero());
        let want = d_x(&(u() * jet(0, 1) / x() + jet(0, 1).powi(2) + u() * jet(0, 2))).unwrap();
        assert!((on_shell(&jet(1, 1), &p).unwrap() - want).is_zero());
        let tt = on_shell(&jet(2, 0), &fisher()).unwrap();
        assert!(!tt.contains(&mut |e| matches!(e, Expr::Sym(Symbol::Jet(j)) if j.t > 0)));
        assert_eq!(on_shell(&tt, &fisher()).unwrap(), tt);
    }
}
