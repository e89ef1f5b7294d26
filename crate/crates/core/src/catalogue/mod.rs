//! The studied special cases: coefficient functions, symmetry generators,
//! the printed commutators, adjoint tables and optimal lists.

pub mod conservation;
mod reductions;

pub use reductions::{printed_reductions, reduction_table_number, PrintedReduction};

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::expr::{exp, param, q, qi, t, u, x, Expr, Q};
use crate::jet::PdeSpec;
use crate::numeric::ParamSpace;
use crate::symmetry::VectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    Principal,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::Principal,
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
        CaseId::Case6,
    ];

    /// Cases with a nontrivial algebra.
    pub const SPECIAL: [CaseId; 6] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
        CaseId::Case6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Principal => "principal",
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
            CaseId::Case5 => "case5",
            CaseId::Case6 => "case6",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = String;

    fn from_str(s: &str) -> Result<CaseId, String> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown case `{s}` (expected principal or case1..case6)"))
    }
}

fn field(xi1: Expr, xi2: Expr, eta: Expr) -> VectorField {
    VectorField::new(xi1, xi2, eta).norm()
}

pub fn d_t() -> VectorField {
    field(Expr::one(), Expr::zero(), Expr::zero())
}

/// `e^{-k t}(d/dt + u d/du)`.
pub fn decay(k: Expr) -> VectorField {
    let e = exp(-k * t());
    field(e.clone(), Expr::zero(), u() * e)
}

/// `x d/dx + c u d/du`.
pub fn radial(c: Expr) -> VectorField {
    field(Expr::zero(), x(), c * u())
}

fn pn(name: &str) -> Expr {
    param(name)
}

pub fn pde(id: CaseId) -> PdeSpec {
    let (n, m) = (pn("n"), pn("m"));
    match id {
        CaseId::Principal => PdeSpec::abstract_fg(),
        CaseId::Case1 => PdeSpec::new(u(), u() * (1 - u())),
        CaseId::Case2 => PdeSpec::new(m * u(), pn("p") * u().powi(2)),
        CaseId::Case3 => PdeSpec::new(m * u().pow(n), pn("p") * u().pow(pn("q"))),
        CaseId::Case4 => PdeSpec::new(pn("a") * u().pow(n), u()),
        CaseId::Case5 => PdeSpec::new(u().pow(n.recip()), u()),
        CaseId::Case6 => PdeSpec::new(pn("a") * u().pow(n), u().pow(m.recip())),
    }
}

/// Generators as first listed, keyed `X1, X2, ...`; `X1 = d/dt` throughout.
pub fn generators(id: CaseId) -> Vec<(String, VectorField)> {
    let (n, q_, m) = (pn("n"), pn("q"), pn("m"));
    let extra = match id {
        CaseId::Principal => vec![],
        CaseId::Case1 => vec![decay(Expr::one())],
        CaseId::Case2 => vec![field(t(), Expr::zero(), -u())],
        CaseId::Case3 => vec![field(
            2 * q_.clone() * t() - 2 * t(),
            (q_ - n - 1) * x(),
            Expr::int(-2) * u(),
        )],
        CaseId::Case4 => vec![decay(n.clone()), radial(2 / n)],
        CaseId::Case5 => vec![decay(n.recip()), radial(2 * n)],
        CaseId::Case6 => vec![field(
            2 * m.clone() * t() - 2 * t(),
            x() * ((n + 1) * m.clone() - 1),
            2 * m * u(),
        )],
    };
    std::iter::once(d_t())
        .chain(extra)
        .enumerate()
        .map(|(k, v)| (format!("X{}", k + 1), v))
        .collect()
}

/// Positions in [`generators`] of the algebra basis as ordered for the optimal
/// system analysis.
pub fn algebra_order(id: CaseId) -> Vec<usize> {
    match id {
        CaseId::Principal => vec![0],
        CaseId::Case1 => vec![1, 0],
        CaseId::Case4 => vec![0, 2, 1],
        CaseId::Case2 | CaseId::Case3 | CaseId::Case6 => vec![0, 1],
        CaseId::Case5 => vec![0, 1, 2],
    }
}

pub fn algebra_basis(id: CaseId) -> Vec<VectorField> {
    let g = generators(id);
    algebra_order(id).into_iter().map(|k| g[k].1.clone()).collect()
}

/// Parameter names of the case, in display order.
pub fn param_names(id: CaseId) -> &'static [&'static str] {
    match id {
        CaseId::Principal | CaseId::Case1 => &[],
        CaseId::Case2 => &["m", "p"],
        CaseId::Case3 => &["m", "n", "p", "q"],
        CaseId::Case4 => &["a", "n"],
        CaseId::Case5 => &["n"],
        CaseId::Case6 => &["a", "m", "n"],
    }
}

/// Admissible sample values, avoiding the degenerate ones.
pub fn admissible(id: CaseId) -> ParamSpace {
    let exps = || vec![qi(2), qi(3), q(1, 2)];
    let amps = || vec![qi(1), qi(2)];
    param_names(id)
        .iter()
        .map(|&name| {
            let set = match name {
                "a" | "m" if id != CaseId::Case6 => amps(),
                "p" => amps(),
                _ => exps(),
            };
            (name.to_string(), set)
        })
        .collect()
}

/// Brackets as printed: `(i, j, coefficients)` on [`algebra_basis`].
pub fn printed_brackets(id: CaseId) -> Vec<(usize, usize, Vec<Expr>)> {
    let (n, q_, m) = (pn("n"), pn("q"), pn("m"));
    let z = Expr::zero;
    match id {
        CaseId::Principal => vec![],
        CaseId::Case1 | CaseId::Case2 => vec![(0, 1, vec![Expr::one(), z()])],
        CaseId::Case3 => vec![(0, 1, vec![2 * (q_ - 1), z()])],
        CaseId::Case4 => vec![(0, 2, vec![z(), z(), -n])],
        CaseId::Case5 => vec![(0, 1, vec![z(), -n.recip(), z()])],
        CaseId::Case6 => vec![(0, 1, vec![2 * (m - 1), z()])],
    }
}

/// Printed adjoint table, `table[i][j]` = coefficients of `Ad(exp(eps X_i)) X_j`,
/// for the cases that print one.
pub fn printed_table(id: CaseId) -> Option<Vec<Vec<Vec<Expr>>>> {
    let eps = crate::lie::epsilon();
    let (n, q_, m) = (pn("n"), pn("q"), pn("m"));
    let dim = algebra_order(id).len();
    let unit = |j: usize| -> Vec<Expr> { (0..dim).map(|k| if k == j { Expr::one() } else { Expr::zero() }).collect() };
    let mut tab: Vec<Vec<Vec<Expr>>> = (0..dim).map(|_| (0..dim).map(unit).collect()).collect();
    let z = Expr::zero;
    match id {
        CaseId::Principal | CaseId::Case2 => return None,
        CaseId::Case1 => {
            tab[0][1] = vec![-eps.clone(), Expr::one()];
            tab[1][0] = vec![exp(eps), z()];
        }
        CaseId::Case3 | CaseId::Case6 => {
            let k = if id == CaseId::Case3 { q_ } else { m };
            tab[0][1] = vec![-2 * eps.clone() * (k.clone() - 1), Expr::one()];
            tab[1][0] = vec![exp(2 * eps * (k - 1)), z()];
        }
        CaseId::Case4 => {
            tab[0][2] = vec![z(), z(), exp(n.clone() * eps.clone())];
            tab[2][0] = vec![Expr::one(), z(), -n * eps];
        }
        CaseId::Case5 => {
            tab[0][1] = vec![z(), exp(eps.clone() / n.clone()), z()];
            tab[1][0] = vec![Expr::one(), -eps / n, z()];
        }
    }
    Some(tab)
}

/// Number of the printed table for a case.
pub fn table_number(id: CaseId) -> Option<u8> {
    match id {
        CaseId::Case1 => Some(1),
        CaseId::Case3 => Some(2),
        CaseId::Case4 => Some(3),
        CaseId::Case5 => Some(4),
        CaseId::Case6 => Some(5),
        _ => None,
    }
}

/// A coefficient slot of a listed optimal-system element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Zero,
    One,
    PlusMinusOne,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListedElement {
    pub label: &'static str,
    pub text: &'static str,
    pub slots: Vec<Slot>,
}

/// The printed one-dimensional optimal list.
pub fn printed_optimal_list(id: CaseId) -> Vec<ListedElement> {
    use Slot::*;
    let e = |label, text, slots: &[Slot]| ListedElement {
        label,
        text,
        slots: slots.to_vec(),
    };
    match id {
        CaseId::Principal => vec![e("X^1", "X1", &[One])],
        CaseId::Case1 | CaseId::Case2 => vec![e("X^1", "X2", &[Zero, One]), e("X^2", "±X1", &[PlusMinusOne, Zero])],
        CaseId::Case3 | CaseId::Case6 => vec![
            e("X^1", "X2", &[Zero, One]),
            e("X^2", "c1 X1 + X2", &[Free, One]),
            e("X^3", "X1", &[One, Zero]),
        ],
        CaseId::Case4 => vec![
            e("X^1", "X1 + X2", &[One, One, Zero]),
            e("X^2", "X1", &[One, Zero, Zero]),
            e("X^3", "c2 X2 ± X3", &[Zero, Free, PlusMinusOne]),
            e("X^4", "±X3", &[Zero, Zero, PlusMinusOne]),
        ],
        CaseId::Case5 => vec![
            e("X^1", "X1 + X3", &[One, Zero, One]),
            e("X^2", "X1", &[One, Zero, Zero]),
            e("X^3", "±X2 + c3 X3", &[Zero, PlusMinusOne, Free]),
            e("X^4", "X3", &[Zero, Zero, One]),
        ],
    }
}

/// The printed branch (name and list index) that the case tree assigns to `a`.
/// `degenerate` is true on the `q = 1` or `m = 1` sub-branch.
pub fn printed_branch(id: CaseId, a: &[Q], degenerate: bool) -> (&'static str, usize) {
    let nz = |k: usize| !a[k].is_zero();
    match id {
        CaseId::Principal => ("I", 0),
        CaseId::Case1 | CaseId::Case2 => {
            if nz(1) {
                ("I", 0)
            } else {
                ("II", 1)
            }
        }
        CaseId::Case3 | CaseId::Case6 => match (nz(1), degenerate) {
            (true, false) => ("I", 0),
            (true, true) => ("II", 1),
            (false, _) => ("III", 2),
        },
        CaseId::Case4 => match (nz(0), nz(1)) {
            (true, true) => ("I", 0),
            (true, false) => ("II", 1),
            (false, true) => ("III", 2),
            (false, false) => ("IV", 3),
        },
        CaseId::Case5 => match (nz(0), nz(2), nz(1)) {
            (true, true, _) => ("I", 0),
            (true, false, _) => ("II", 1),
            (false, _, true) => ("III", 2),
            (false, _, false) => ("IV", 3),
        },
    }
}

/// The printed determining equations of the symmetry criterion, in the
/// labels of this crate (`xi1` is the `d/dt` coefficient). The first three
/// are single derivatives set to zero.
pub fn printed_determining() -> Vec<(&'static str, Expr)> {
    const ROWS: &[(&str, &str)] = &[
        ("D1", "xi1[0,1,0](t,x,u)"),
        ("D2", "xi1[0,0,1](t,x,u)"),
        ("D3", "xi2[0,0,1](t,x,u)"),
        (
            "D4",
            "f'(u)*(-2*xi2[0,1,0](t,x,u) + f'(u)*xi1[1,0,0](t,x,u) + eta[0,0,1](t,x,u)) \
             + eta[0,0,0](t,x,u)*f''(u) + f(u)*eta[0,0,2](t,x,u)",
        ),
        (
            "D5",
            "f(u)*(xi2[0,0,0](t,x,u) + x*xi2[0,1,0](t,x,u) - x*xi1[1,0,0](t,x,u) + x^2*xi2[0,2,0](t,x,u) \
             - 2*x^2*eta[0,1,1](t,x,u)) - f'(u)*(x*eta[0,0,0](t,x,u) + 2*x^2*eta[0,1,0](t,x,u)) - x^2*xi2[1,0,0](t,x,u)",
        ),
        (
            "D6",
            "x*eta[0,0,0](t,x,u)*g'(u) + x*g(u)*xi1[1,0,0](t,x,u) - x*eta[1,0,0](t,x,u) - x*g(u)*eta[0,0,1](t,x,u) \
             + f(u)*eta[0,1,0](t,x,u) + x*f(u)*eta[0,2,0](t,x,u)",
        ),
        ("D7", "eta[0,0,0](t,x,u)*f'(u) - 2*f(u)*xi2[0,1,0](t,x,u) + f(u)*xi1[1,0,0](t,x,u)"),
    ];
    ROWS.iter()
        .map(|(l, s)| (*l, crate::dsl::parse_expr(s).expect("printed equations parse")))
        .collect()
}

/// The one printed equation that is not a consequence of the criterion, and
/// its corrected form: `xi1_t` in place of `f' xi1_t` inside the bracket.
pub const DETERMINING_CORRECTION: (&str, &str) = (
    "D4",
    "f'(u)*(-2*xi2[0,1,0](t,x,u) + xi1[1,0,0](t,x,u) + eta[0,0,1](t,x,u)) \
     + eta[0,0,0](t,x,u)*f''(u) + f(u)*eta[0,0,2](t,x,u)",
);

/// [`printed_determining`] with [`DETERMINING_CORRECTION`] applied.
pub fn corrected_determining() -> Vec<(&'static str, Expr)> {
    let (label, text) = DETERMINING_CORRECTION;
    printed_determining()
        .into_iter()
        .map(|(l, e)| if l == label { (l, crate::dsl::parse_expr(text).expect("correction parses")) } else { (l, e) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::invariance_residual;

    #[test]
    fn names_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.name().parse::<CaseId>().unwrap(), id);
        }
        assert!("case7".parse::<CaseId>().is_err());
    }

    #[test]
    fn every_generator_is_a_symmetry() {
        for id in CaseId::ALL {
            let p = pde(id);
            for (name, g) in generators(id) {
                let r = invariance_residual(&p, &g).unwrap();
                assert!(r.is_zero(), "{id} {name}: {r}");
            }
        }
    }

    #[test]
    fn shapes_agree() {
        for id in CaseId::SPECIAL {
            let dim = algebra_order(id).len();
            assert_eq!(printed_optimal_list(id)[0].slots.len(), dim);
            if let Some(t) = printed_table(id) {
                assert!(t.iter().all(|r| r.len() == dim && r.iter().all(|c| c.len() == dim)));
            }
        }
    }
}
