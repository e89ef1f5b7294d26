//! Double-precision evaluation.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{q_to_f64, Applied, Expr, Func, Symbol};
use crate::special;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound symbol {0}")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Values for symbols and abstract function applications.
pub trait NumericEnv {
    fn symbol(&self, s: &Symbol) -> Option<f64>;

    fn applied(&self, _ap: &Applied, _args: &[f64]) -> Option<f64> {
        None
    }
}

impl NumericEnv for BTreeMap<Symbol, f64> {
    fn symbol(&self, s: &Symbol) -> Option<f64> {
        self.get(s).copied()
    }
}

pub fn eval(e: &Expr, env: &dyn NumericEnv) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num(v) => q_to_f64(v),
        Expr::Sym(s) => env
            .symbol(s)
            .ok_or_else(|| EvalError::Unbound(s.to_string()))?,
        Expr::Add(v) => {
            let mut acc = 0.0;
            for c in v.iter() {
                acc += eval(c, env)?;
            }
            acc
        }
        Expr::Mul(v) => {
            let mut acc = 1.0;
            for c in v.iter() {
                acc *= eval(c, env)?;
            }
            acc
        }
        Expr::Pow(p) => {
            let b = eval(&p.0, env)?;
            match p.1.as_num().filter(|k| k.is_integer()) {
                Some(k) => {
                    let k = q_to_f64(k);
                    if b == 0.0 && k < 0.0 {
                        return Err(EvalError::Domain("division by zero".into()));
                    }
                    b.powi(k as i32)
                }
                None => {
                    let k = eval(&p.1, env)?;
                    if b < 0.0 || (b == 0.0 && k <= 0.0) {
                        return Err(EvalError::Domain(format!("{b}^{k}")));
                    }
                    b.powf(k)
                }
            }
        }
        Expr::Func(f, a) => {
            let w = eval(a, env)?;
            let positive = |name: &str| {
                if w > 0.0 {
                    Ok(())
                } else {
                    Err(EvalError::Domain(format!("{name}({w})")))
                }
            };
            match f {
                Func::Exp => w.exp(),
                Func::Ln => {
                    positive("ln")?;
                    w.ln()
                }
                Func::BesselI0 => special::bessel_i0(w),
                Func::BesselI1 => special::bessel_i1(w),
                Func::BesselK0 => {
                    positive("besselK0")?;
                    special::bessel_k0(w)
                }
                Func::BesselK1 => {
                    positive("besselK1")?;
                    special::bessel_k1(w)
                }
                Func::BesselJ0 => special::bessel_j0(w),
                Func::BesselJ1 => special::bessel_j1(w),
                Func::BesselY0 => {
                    positive("besselY0")?;
                    special::bessel_y0(w)
                }
                Func::BesselY1 => {
                    positive("besselY1")?;
                    special::bessel_y1(w)
                }
            }
        }
        Expr::Apply(ap) => {
            let mut args = Vec::with_capacity(ap.args.len());
            for a in &ap.args {
                args.push(eval(a, env)?);
            }
            env.applied(ap, &args)
                .ok_or_else(|| EvalError::Unbound(ap.name.to_string()))?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::*;

    #[test]
    fn basics() {
        let env: BTreeMap<Symbol, f64> = BTreeMap::new();
        assert_eq!(func(Func::BesselI0, Expr::zero()).eval(&env), Ok(1.0));
        let mut env = BTreeMap::new();
        env.insert(Symbol::X, 2.0);
        env.insert(Symbol::Jet(Jet { t: 0, x: 1 }), 3.0);
        assert_eq!((x() * jet(0, 1)).eval(&env), Ok(6.0));
        assert!(matches!(ln(-x()).eval(&env), Err(EvalError::Domain(_))));
        assert!(matches!(t().eval(&env), Err(EvalError::Unbound(_))));
    }
}
