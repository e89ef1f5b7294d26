//! Small dense linear algebra over exact rationals and over symbolic
//! expressions.

use num_traits::Zero;

use crate::expr::{replace_applied, Applied, Expr, Symbol, Q};

/// Row-reduces `rows` in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = rows[i][c].clone();
                for j in 0..ncols {
                    let d = &k * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// True when `v` is a linear combination of `basis`.
pub fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    let r0 = rank(basis);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank(&ext) == r0
}

/// Solves `a c = b` over the field of expressions; `None` when inconsistent.
/// Free unknowns are set to zero.
pub fn solve_expr(a: &[Vec<Expr>], b: &[Expr]) -> Option<Vec<Expr>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Expr>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.iter().map(Expr::norm).collect::<Vec<_>>();
            r.push(rhs.norm());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = (&*v * &inv).simplify();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let k = m[i][c].clone();
                for j in 0..=n {
                    m[i][j] = (&m[i][j] - &k * &m[r][j]).simplify();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut sol = vec![Expr::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][n].clone();
    }
    Some(sol)
}

/// `candidate` is a combination of `system` with coefficients free of the
/// applied functions named in `names`; every expression must be linear in
/// those functions and their derivatives.
pub fn in_applied_span(system: &[Expr], candidate: &Expr, names: &[&str]) -> bool {
    let tracked = |ap: &Applied| names.contains(&&*ap.name);
    let mut unknowns: Vec<Applied> = Vec::new();
    for e in system.iter().chain([candidate]) {
        e.walk(&mut |n| {
            if let Expr::Apply(ap) = n {
                if tracked(ap) && !unknowns.contains(ap) {
                    unknowns.push((**ap).clone());
                }
            }
        });
    }
    let coefficients = |e: &Expr| -> Vec<Expr> {
        let slotted = replace_applied(e, &|ap| {
            tracked(ap).then(|| {
                let k = unknowns.iter().position(|v| v == ap).unwrap_or(0);
                Expr::Sym(Symbol::Slot(k as u8))
            })
        })
        .norm();
        (0..unknowns.len()).map(|k| slotted.diff(&Symbol::Slot(k as u8)).simplify()).collect()
    };
    let cols: Vec<Vec<Expr>> = system.iter().map(coefficients).collect();
    let rhs = coefficients(candidate);
    // One equation per unknown derivative, one coefficient per member of the system.
    let a: Vec<Vec<Expr>> = (0..unknowns.len()).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect();
    let generic = (1..=2).map(|k| span_at_point(&cols, &rhs, k)).collect::<Option<Vec<bool>>>();
    match generic {
        Some(v) => v.iter().all(|b| *b),
        None => solve_expr(&a, &rhs).is_some(),
    }
}

/// Span test with every remaining symbol and applied function replaced by
/// a fixed rational; `None` when some coefficient does not evaluate to one.
fn span_at_point(cols: &[Vec<Expr>], rhs: &[Expr], k: i64) -> Option<bool> {
    let mut seen: Vec<Expr> = Vec::new();
    for e in cols.iter().flatten().chain(rhs) {
        e.walk(&mut |n| {
            if matches!(n, Expr::Sym(_) | Expr::Apply(_)) && !seen.contains(n) {
                seen.push(n.clone());
            }
        });
    }
    let value = |i: usize| Expr::rat(7 + 3 * i as i64 + 11 * k, 5 + 2 * i as i64 + k);
    let at = |e: &Expr| -> Option<Q> {
        let r = replace_applied(e, &|ap| {
            seen.iter().position(|s| matches!(s, Expr::Apply(b) if **b == *ap)).map(value)
        });
        let r = seen.iter().enumerate().fold(r, |acc, (i, s)| match s {
            Expr::Sym(sym) => acc.subst_sym(sym, &value(i)),
            _ => acc,
        });
        r.norm().as_num().cloned()
    };
    let basis: Vec<Vec<Q>> = cols.iter().map(|c| c.iter().map(at).collect::<Option<_>>()).collect::<Option<_>>()?;
    let v: Vec<Q> = rhs.iter().map(at).collect::<Option<_>>()?;
    Some(in_span(&basis, &v))
}

pub type ExprMatrix = Vec<Vec<Expr>>;

pub fn identity(n: usize) -> ExprMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &ExprMatrix, b: &ExprMatrix) -> ExprMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| Expr::sum((0..k).map(|l| &a[i][l] * &b[l][j])).norm())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &ExprMatrix, v: &[Expr]) -> Vec<Expr> {
    a.iter()
        .map(|row| Expr::sum(row.iter().zip(v).map(|(x, y)| x * y)).norm())
        .collect()
}

pub fn mat_scale(a: &ExprMatrix, c: &Expr) -> ExprMatrix {
    a.iter()
        .map(|row| row.iter().map(|x| (c * x).norm()).collect())
        .collect()
}

pub fn mat_add(a: &ExprMatrix, b: &ExprMatrix) -> ExprMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x + y).norm()).collect())
        .collect()
}

pub fn mat_is_zero(a: &ExprMatrix) -> bool {
    a.iter().all(|r| r.iter().all(Expr::is_zero))
}

pub fn trace(a: &ExprMatrix) -> Expr {
    Expr::sum((0..a.len()).map(|i| a[i][i].clone())).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{param, qi};

    #[test]
    fn rational_span() {
        let basis = vec![vec![qi(1), qi(0), qi(1)], vec![qi(0), qi(1), qi(1)]];
        assert!(in_span(&basis, &[qi(2), qi(3), qi(5)]));
        assert!(!in_span(&basis, &[qi(0), qi(0), qi(1)]));
    }

    #[test]
    fn symbolic_solve() {
        let n = param("n");
        let a = vec![vec![n.clone(), Expr::one()], vec![Expr::zero(), Expr::int(2)]];
        let b = vec![n.clone() + 1, Expr::int(2)];
        let s = solve_expr(&a, &b).unwrap();
        assert!(s[0].is_one_literal() && s[1].is_one_literal());
        let a = vec![vec![Expr::one()], vec![Expr::int(2)]];
        assert!(solve_expr(&a, &[Expr::one(), Expr::one()]).is_none());
    }
}
