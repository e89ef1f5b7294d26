//! Partial differentiation with respect to a single symbol.
//!
//! Jet variables are independent coordinates here; total derivatives live in
//! the jet module.

use std::sync::Arc;

use super::{func, Applied, Expr, Func, Symbol};

pub fn diff(e: &Expr, v: &Symbol) -> Expr {
    if !e.has_symbol(v) {
        return Expr::zero();
    }
    match e {
        Expr::Num(_) => Expr::zero(),
        Expr::Sym(s) => {
            if s == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Add(terms) => Expr::sum(
            terms
                .iter()
                .filter(|t| t.has_symbol(v))
                .map(|t| diff(t, v)),
        ),
        Expr::Mul(fs) => {
            let mut out = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                if !f.has_symbol(v) {
                    continue;
                }
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                prod.push(diff(f, v));
                prod.extend(
                    fs.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, g)| g.clone()),
                );
                out.push(Expr::product(prod));
            }
            Expr::sum(out)
        }
        Expr::Pow(p) => {
            let (b, k) = (&p.0, &p.1);
            if !k.has_symbol(v) {
                k * b.pow(k - 1) * diff(b, v)
            } else {
                e * (diff(k, v) * super::ln(b.clone()) + k * diff(b, v) / b)
            }
        }
        Expr::Func(f, a) => {
            let a = a.as_ref();
            let da = diff(a, v);
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Ln => a.recip(),
                Func::BesselI0 => func(Func::BesselI1, a),
                Func::BesselI1 => func(Func::BesselI0, a) - func(Func::BesselI1, a) / a,
                Func::BesselK0 => -func(Func::BesselK1, a),
                Func::BesselK1 => -func(Func::BesselK0, a) - func(Func::BesselK1, a) / a,
                Func::BesselJ0 => -func(Func::BesselJ1, a),
                Func::BesselJ1 => func(Func::BesselJ0, a) - func(Func::BesselJ1, a) / a,
                Func::BesselY0 => -func(Func::BesselY1, a),
                Func::BesselY1 => func(Func::BesselY0, a) - func(Func::BesselY1, a) / a,
            };
            outer * da
        }
        Expr::Apply(ap) => {
            let mut out = Vec::new();
            for (i, arg) in ap.args.iter().enumerate() {
                if !arg.has_symbol(v) {
                    continue;
                }
                let mut derivs = ap.derivs.clone();
                derivs[i] += 1;
                let d = Expr::Apply(Arc::new(Applied {
                    name: ap.name.clone(),
                    derivs,
                    args: ap.args.clone(),
                }));
                out.push(d * diff(arg, v));
            }
            Expr::sum(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::*;

    #[test]
    fn polynomial_and_abstract() {
        let ux = jet(0, 1);
        let ux_sym = Symbol::Jet(Jet { t: 0, x: 1 });
        assert_eq!((x() * ux.powi(2)).diff(&ux_sym), (2 * x() * ux.clone()).norm());
        let u_sym = Symbol::Jet(Jet::U);
        assert_eq!(apply1("f", 0, u()).diff(&u_sym), apply1("f", 1, u()));
        assert!(apply1("f", 0, u()).diff(&Symbol::X).is_zero_literal());
    }

    #[test]
    fn bessel_chain_rule() {
        let s2 = sqrt(Expr::int(2));
        let e = exp(-t()) * func(Func::BesselI0, s2.clone() * x());
        let want = (s2.clone() * exp(-t()) * func(Func::BesselI1, s2 * x())).norm();
        assert_eq!(e.diff(&Symbol::X), want);
    }

    #[test]
    fn symbolic_exponent() {
        let n = param("n");
        let e = x().pow(n.clone());
        assert_eq!(e.diff(&Symbol::X), (n.clone() * x().pow(n.clone() - 1)).norm());
        let d = Expr::int(2).pow(t()).diff(&Symbol::T);
        assert_eq!(d, (Expr::int(2).pow(t()) * ln(Expr::int(2))).norm());
    }
}
