//! Lie algebras of point generators: brackets, structure constants, adjoint
//! actions and adjoint tables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{exp, param, split_dependence, Expr, Symbol};
use crate::linalg::{identity, mat_add, mat_is_zero, mat_mul, mat_scale, mat_vec, solve_expr, trace, ExprMatrix};
use crate::symmetry::VectorField;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LieError {
    #[error("[X{i}, X{j}] is not a combination of the basis (bracket {bracket})")]
    NotClosed { i: usize, j: usize, bracket: String },
    #[error("structure constants violate {0}")]
    InvariantViolated(String),
    #[error("ad(X{0}) is neither nilpotent nor of the form ad^2 = tr(ad) ad")]
    SeriesNotClosed(usize),
    #[error("basis index {0} out of range")]
    BadIndex(usize),
    #[error("all coefficients are zero")]
    ZeroElement,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

/// The group parameter of adjoint actions.
pub fn epsilon() -> Expr {
    param("eps")
}

/// `[X, Y]^i = X(Y^i) - Y(X^i)`.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    let c = |a: &Expr, b: &Expr| (x.act(b) - y.act(a)).norm();
    VectorField::new(c(&x.xi1, &y.xi1), c(&x.xi2, &y.xi2), c(&x.eta, &y.eta))
}

fn depends(s: &Symbol) -> bool {
    matches!(s, Symbol::T | Symbol::X | Symbol::Jet(_))
}

/// Coefficients `c` with `v = sum c_k basis_k`, the `c_k` free of `t, x, u`.
pub fn decompose(v: &VectorField, basis: &[VectorField]) -> Option<Vec<Expr>> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for comp in 0..3 {
        let target = split_dependence(v.components()[comp], &depends);
        let parts: Vec<_> = basis
            .iter()
            .map(|b| split_dependence(b.components()[comp], &depends))
            .collect();
        let keys: BTreeSet<&Expr> = target.keys().chain(parts.iter().flat_map(|p| p.keys())).collect();
        for key in keys {
            rows.push(parts.iter().map(|p| p.get(key).cloned().unwrap_or_else(Expr::zero)).collect());
            rhs.push(target.get(key).cloned().unwrap_or_else(Expr::zero));
        }
    }
    if rows.is_empty() {
        return Some(vec![Expr::zero(); basis.len()]);
    }
    let c = solve_expr(&rows, &rhs)?;
    let back = VectorField::combination(&c, basis);
    VectorField::new(&v.xi1 - &back.xi1, &v.xi2 - &back.xi2, &v.eta - &back.eta)
        .is_zero()
        .then_some(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub basis: Vec<VectorField>,
    /// `c[i][j][k]` with `[X_i, X_j] = sum_k c[i][j][k] X_k`.
    pub c: Vec<Vec<Vec<Expr>>>,
}

pub fn structure_constants(basis: &[VectorField]) -> Result<LieAlgebra, LieError> {
    let n = basis.len();
    let mut c = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = commutator(&basis[i], &basis[j]);
            c[i][j] = decompose(&b, basis).ok_or_else(|| LieError::NotClosed {
                i: i + 1,
                j: j + 1,
                bracket: format!("{}", show_field(&b)),
            })?;
        }
    }
    let alg = LieAlgebra {
        basis: basis.to_vec(),
        c,
    };
    if !alg.is_antisymmetric() {
        return Err(LieError::InvariantViolated("antisymmetry".into()));
    }
    if !alg.satisfies_jacobi() {
        return Err(LieError::InvariantViolated("the Jacobi identity".into()));
    }
    Ok(alg)
}

fn show_field(v: &VectorField) -> String {
    format!("({}) d/dt + ({}) d/dx + ({}) d/du", v.xi1, v.xi2, v.eta)
}

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `ad(X_i)` as a matrix on coefficient vectors: `M[k][j] = c[i][j][k]`.
    pub fn ad_matrix(&self, i: usize) -> ExprMatrix {
        let n = self.dim();
        (0..n).map(|k| (0..n).map(|j| self.c[i][j][k].clone()).collect()).collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (&self.c[i][j][k] + &self.c[j][i][k]).is_zero())))
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let c = &self.c;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let s = Expr::sum((0..n).flat_map(|l| {
                            [
                                &c[i][j][l] * &c[l][k][m],
                                &c[j][k][l] * &c[l][i][m],
                                &c[k][i][l] * &c[l][j][m],
                            ]
                        }));
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Nonzero brackets `(i, j, coefficients)` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Expr>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.c[i][j].iter().any(|e| !e.is_zero()) {
                    out.push((i, j, self.c[i][j].clone()));
                }
            }
        }
        out
    }

    /// Structure constants with parameters replaced by values.
    pub fn subst_params(&self, b: &crate::expr::Binding) -> LieAlgebra {
        LieAlgebra {
            basis: self.basis.iter().map(|v| v.map(|e| e.subst(b))).collect(),
            c: self
                .c
                .iter()
                .map(|r| r.iter().map(|v| v.iter().map(|e| e.subst(b)).collect()).collect())
                .collect(),
        }
    }
}

/// `Ad(exp(eps X_i))` acting on basis coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointMap {
    pub generator: usize,
    pub eps: Expr,
    pub matrix: ExprMatrix,
}

impl AdjointMap {
    pub fn apply(&self, a: &[Expr]) -> Vec<Expr> {
        mat_vec(&self.matrix, a).iter().map(Expr::simplify).collect()
    }
}

/// `exp(-eps ad(X_i))` in closed form.
pub fn adjoint_map(alg: &LieAlgebra, i: usize, eps: &Expr) -> Result<AdjointMap, LieError> {
    if i >= alg.dim() {
        return Err(LieError::BadIndex(i));
    }
    let n = alg.dim();
    let m = alg.ad_matrix(i);
    let m2 = mat_mul(&m, &m);
    let lambda = trace(&m);
    let matrix = if lambda.is_zero() {
        // nilpotent: the series terminates
        let mut out = identity(n);
        let mut power = identity(n);
        let mut k = 0;
        loop {
            power = mat_mul(&power, &m);
            k += 1;
            if mat_is_zero(&power) {
                break;
            }
            if k > n {
                return Err(LieError::SeriesNotClosed(i + 1));
            }
            let coef = (-eps.clone()).powi(k as i64) / factorial(k);
            out = mat_add(&out, &mat_scale(&power, &coef));
        }
        out
    } else if mat_is_zero(&mat_add(&m2, &mat_scale(&m, &-lambda.clone()))) {
        let coef = (exp(-eps.clone() * lambda.clone()) - 1) / lambda;
        mat_add(&identity(n), &mat_scale(&m, &coef))
    } else {
        return Err(LieError::SeriesNotClosed(i + 1));
    };
    Ok(AdjointMap {
        generator: i,
        eps: eps.clone(),
        matrix: matrix.iter().map(|r| r.iter().map(Expr::simplify).collect()).collect(),
    })
}

fn factorial(k: usize) -> Expr {
    Expr::int((1..=k as i64).product())
}

pub fn adjoint(alg: &LieAlgebra, i: usize, a: &[Expr], eps: &Expr) -> Result<Vec<Expr>, LieError> {
    Ok(adjoint_map(alg, i, eps)?.apply(a))
}

/// `table[i][j]` holds the coefficients of `Ad(exp(eps X_i)) X_j`.
pub fn adjoint_table(alg: &LieAlgebra) -> Result<Vec<Vec<Vec<Expr>>>, LieError> {
    let n = alg.dim();
    let eps = epsilon();
    (0..n)
        .map(|i| {
            let a = adjoint_map(alg, i, &eps)?;
            Ok((0..n).map(|j| (0..n).map(|k| a.matrix[k][j].clone()).collect()).collect())
        })
        .collect()
}

/// Checks `Ad [X_j, X_k] = [Ad X_j, Ad X_k]` for all pairs.
pub fn is_automorphism(alg: &LieAlgebra, a: &AdjointMap) -> bool {
    let n = alg.dim();
    let col = |j: usize| -> Vec<Expr> { (0..n).map(|k| a.matrix[k][j].clone()).collect() };
    for j in 0..n {
        for k in 0..n {
            let lhs = a.apply(&alg.c[j][k]);
            let (aj, ak) = (col(j), col(k));
            for m in 0..n {
                let rhs = Expr::sum(
                    (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).map(|(p, q)| &aj[p] * &ak[q] * &alg.c[p][q][m]),
                );
                if !(&lhs[m] - rhs).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// `sum a_k X_k` as text.
pub fn show_combination(a: &[Expr]) -> String {
    let mut out = String::new();
    for (k, c) in a.iter().enumerate() {
        let c = c.simplify();
        if c.is_zero_literal() {
            continue;
        }
        let text = if c.is_one_literal() {
            format!("X{}", k + 1)
        } else if (-c.clone()).norm().is_one_literal() {
            format!("-X{}", k + 1)
        } else if matches!(c, Expr::Add(_)) {
            format!("({c})*X{}", k + 1)
        } else {
            format!("{c}*X{}", k + 1)
        };
        if out.is_empty() {
            out = text;
        } else if let Some(rest) = text.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {text}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::*;

    fn dt() -> VectorField {
        VectorField::new(Expr::one(), Expr::zero(), Expr::zero())
    }

    fn fisher_pair() -> Vec<VectorField> {
        let e = exp(-t());
        vec![VectorField::new(e.clone(), Expr::zero(), u() * e), dt()]
    }

    #[test]
    fn brackets() {
        let b = fisher_pair();
        assert_eq!(commutator(&b[0], &b[1]), b[0].norm());
        assert!(commutator(&b[0], &b[0]).is_zero());
        let n = param("n");
        let x3 = VectorField::new(exp(-n.clone() * t()), Expr::zero(), u() * exp(-n.clone() * t()));
        let want = x3.scale(&-n);
        let got = commutator(&dt(), &x3);
        assert!(VectorField::new(got.xi1 - want.xi1, got.xi2 - want.xi2, got.eta - want.eta).is_zero());
    }

    #[test]
    fn constants_and_closure() {
        let alg = structure_constants(&fisher_pair()).unwrap();
        assert!(alg.c[0][1][0].is_one_literal() && alg.c[0][1][1].is_zero_literal());
        let dx = VectorField::new(Expr::zero(), Expr::one(), Expr::zero());
        let alg = structure_constants(&[dt(), dx.clone()]).unwrap();
        assert!(alg.nonzero_brackets().is_empty());
        let bad = structure_constants(&[dt(), VectorField::new(Expr::zero(), t(), Expr::zero())]);
        assert!(matches!(bad, Err(LieError::NotClosed { i: 1, j: 2, .. })));
    }

    #[test]
    fn fisher_table() {
        let alg = structure_constants(&fisher_pair()).unwrap();
        let tab = adjoint_table(&alg).unwrap();
        let eps = epsilon();
        assert_eq!(tab[0][1], vec![(-eps.clone()).norm(), Expr::one()]);
        assert_eq!(tab[1][0], vec![exp(eps.clone()).norm(), Expr::zero()]);
        assert_eq!(tab[0][0], vec![Expr::one(), Expr::zero()]);
        assert_eq!(show_combination(&tab[0][1]), "-eps*X1 + X2");
        for i in 0..2 {
            let a = adjoint_map(&alg, i, &eps).unwrap();
            assert!(is_automorphism(&alg, &a));
            let inv = adjoint_map(&alg, i, &-eps.clone()).unwrap();
            assert!(mat_is_zero(&mat_add(&mat_mul(&a.matrix, &inv.matrix), &mat_scale(&identity(2), &Expr::int(-1)))));
        }
    }

    #[test]
    fn symbolic_rate() {
        let q1 = param("q") - 1;
        let x2 = VectorField::new(2 * q1.clone() * t(), (param("q") - param("n") - 1) * x(), Expr::int(-2) * u());
        let alg = structure_constants(&[dt(), x2]).unwrap();
        assert!((&alg.c[0][1][0] - 2 * q1.clone()).is_zero());
        let tab = adjoint_table(&alg).unwrap();
        assert_eq!(tab[1][0][0], exp(2 * epsilon() * q1.clone()).norm());
        assert!((&tab[0][1][0] + 2 * epsilon() * q1).is_zero());
    }

    #[test]
    fn series_not_closed() {
        let one = Expr::one;
        let z = Expr::zero;
        let alg = LieAlgebra {
            basis: vec![VectorField::zero(); 3],
            c: vec![
                vec![vec![z(), z(), z()], vec![one(), z(), z()], vec![z(), one(), Expr::int(2)]],
                vec![vec![z(); 3]; 3],
                vec![vec![z(); 3]; 3],
            ],
        };
        assert_eq!(adjoint_map(&alg, 0, &epsilon()), Err(LieError::SeriesNotClosed(1)));
    }
}
