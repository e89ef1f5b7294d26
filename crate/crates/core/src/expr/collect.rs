//! Coefficient extraction with respect to chosen symbols.

use std::collections::BTreeMap;

use super::normal::{to_expr, to_poly, Mon, Poly};
use super::{Expr, Jet, Symbol};

/// Powers of selected symbols, e.g. `u_x^2 u_xx`, as `(symbol, exponent)` pairs.
pub type SymMonomial = Vec<(Symbol, Expr)>;

/// Jet derivatives of order at least one with their integer powers.
pub type JetMonomial = Vec<(Jet, Expr)>;

/// Groups the normal form of `e` by the powers of symbols accepted by `pick`.
/// Exponents of picked symbols may be any expression.
pub fn coefficients_by(e: &Expr, pick: &dyn Fn(&Symbol) -> bool) -> BTreeMap<SymMonomial, Expr> {
    let p = to_poly(e);
    let mut groups: BTreeMap<SymMonomial, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut key = Vec::new();
        let mut rest = Mon {
            factors: BTreeMap::new(),
            exp: m.exp.clone(),
        };
        for (b, ex) in &m.factors {
            match b {
                Expr::Sym(s) if pick(s) => key.push((s.clone(), to_expr(ex))),
                _ => {
                    rest.factors.insert(b.clone(), ex.clone());
                }
            }
        }
        groups.entry(key).or_default().add_term(rest, c.clone());
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, to_expr(&v)))
        .collect()
}

/// Splits the normal form of `e` into `dependent monomial -> coefficient`,
/// where a factor (or `exp` term) is dependent when it mentions a symbol
/// accepted by `dep`.
pub fn split_dependence(e: &Expr, dep: &dyn Fn(&Symbol) -> bool) -> BTreeMap<Expr, Expr> {
    let mentions = |x: &Expr| x.contains(&mut |n| matches!(n, Expr::Sym(s) if dep(s)));
    let p = to_poly(e);
    let mut groups: BTreeMap<Mon, Poly> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut key = Mon::one();
        let mut rest = Mon::one();
        for (b, ex) in &m.factors {
            let target = if mentions(b) || mentions(&to_expr(ex)) { &mut key } else { &mut rest };
            target.factors.insert(b.clone(), ex.clone());
        }
        for (em, ec) in &m.exp.terms {
            let target = if mentions(&super::normal::mon_expr(em)) { &mut key } else { &mut rest };
            target.exp.add_term(em.clone(), ec.clone());
        }
        groups.entry(key).or_default().add_assign(&super::normal::settle_mon(c, rest));
    }
    groups
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (super::normal::mon_expr(&k), to_expr(&v)))
        .collect()
}

pub fn jet_coefficients(e: &Expr) -> BTreeMap<JetMonomial, Expr> {
    coefficients_by(e, &|s| matches!(s, Symbol::Jet(j) if j.order() > 0))
        .into_iter()
        .map(|(k, v)| {
            let key = k
                .into_iter()
                .map(|(s, ex)| match s {
                    Symbol::Jet(j) => (j, ex),
                    _ => unreachable!(),
                })
                .collect();
            (key, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use crate::expr::*;

    #[test]
    fn splits_by_dependence() {
        let (a, b, n) = (param("a"), param("b"), param("n"));
        let e = a.clone() * exp(-n.clone() * t()) * x() + b.clone() * x() * exp(Expr::int(2)) + 3 * a.clone() + n;
        let dep = |s: &Symbol| matches!(s, Symbol::T | Symbol::X);
        let g = split_dependence(&e, &dep);
        assert_eq!(g.len(), 3);
        assert_eq!(g[&(exp(-param("n") * t()) * x()).norm()], a.clone());
        assert_eq!(g[&x()], (b * exp(Expr::int(2))).norm());
        assert_eq!(g[&Expr::one()], (3 * a + param("n")).norm());
    }

    #[test]
    fn groups_jet_monomials() {
        let ux = jet(0, 1);
        let e = x() * ux.powi(2) + u() * ux.powi(2) + jet(0, 2) * t() + 3;
        let c = jet_coefficients(&e);
        assert_eq!(c.len(), 3);
        let key = vec![(Jet { t: 0, x: 1 }, Expr::int(2))];
        assert_eq!(c[&key], (x() + u()).norm());
        assert_eq!(c[&vec![]], Expr::int(3));
    }
}
