//! Immutable symbolic expressions over exact rationals.
//!
//! Trees are built with the arithmetic operators and the free constructor
//! functions in this module; they are not simplified on construction. Call
//! [`Expr::norm`] to obtain the canonical form described in [`normal`].

mod collect;
mod diff;
mod eval;
pub mod normal;
mod print;
mod subst;

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use collect::{coefficients_by, jet_coefficients, split_dependence, JetMonomial, SymMonomial};
pub use eval::{EvalError, NumericEnv};
pub use subst::{replace_applied, Binding, Lambda};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Derivative `u_{t^t x^x}` of the single dependent variable; `Jet { t: 0, x: 0 }` is `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub t: u8,
    pub x: u8,
}

impl Jet {
    pub const U: Jet = Jet { t: 0, x: 0 };

    pub fn order(self) -> u8 {
        self.t + self.x
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T,
    X,
    Jet(Jet),
    /// Similarity variable of a reduction.
    Alpha,
    /// Reduced unknown `F` and its derivatives in `alpha`.
    F(u8),
    Param(Arc<str>),
    /// Bound argument of a [`Lambda`].
    Slot(u8),
}

impl Symbol {
    pub fn param(name: &str) -> Symbol {
        Symbol::Param(Arc::from(name))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Symbol::Jet(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    BesselI0,
    BesselI1,
    BesselK0,
    BesselK1,
    BesselJ0,
    BesselJ1,
    BesselY0,
    BesselY1,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Exp,
        Func::Ln,
        Func::BesselI0,
        Func::BesselI1,
        Func::BesselK0,
        Func::BesselK1,
        Func::BesselJ0,
        Func::BesselJ1,
        Func::BesselY0,
        Func::BesselY1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::BesselI0 => "besselI0",
            Func::BesselI1 => "besselI1",
            Func::BesselK0 => "besselK0",
            Func::BesselK1 => "besselK1",
            Func::BesselJ0 => "besselJ0",
            Func::BesselJ1 => "besselJ1",
            Func::BesselY0 => "besselY0",
            Func::BesselY1 => "besselY1",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// An abstract function symbol such as `f`, `xi1` or `Lam` applied to
/// arguments, carrying the order of partial differentiation in each slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Applied {
    pub name: Arc<str>,
    pub derivs: Vec<u8>,
    pub args: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(Q),
    Sym(Symbol),
    Add(Arc<Vec<Expr>>),
    Mul(Arc<Vec<Expr>>),
    Pow(Arc<(Expr, Expr)>),
    Func(Func, Arc<Expr>),
    Apply(Arc<Applied>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Num(Q::zero())
    }

    pub fn one() -> Expr {
        Expr::Num(Q::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Num(qi(n))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Num(q(n, d))
    }

    pub fn as_num(&self) -> Option<&Q> {
        match self {
            Expr::Num(v) => Some(v),
            _ => None,
        }
    }

    /// Structural zero test; meaningful on normalized expressions.
    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Num(v) if v.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        matches!(self, Expr::Num(v) if v.is_one())
    }

    pub fn pow(&self, e: impl Into<Expr>) -> Expr {
        Expr::Pow(Arc::new((self.clone(), e.into())))
    }

    pub fn powi(&self, n: i64) -> Expr {
        self.pow(Expr::int(n))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let v: Vec<Expr> = terms.into_iter().collect();
        match v.len() {
            0 => Expr::zero(),
            1 => v.into_iter().next().unwrap(),
            _ => Expr::Add(Arc::new(v)),
        }
    }

    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let v: Vec<Expr> = factors.into_iter().collect();
        match v.len() {
            0 => Expr::one(),
            1 => v.into_iter().next().unwrap(),
            _ => Expr::Mul(Arc::new(v)),
        }
    }

    /// Visits every node, parents before children.
    pub fn walk(&self, visit: &mut impl FnMut(&Expr)) {
        visit(self);
        match self {
            Expr::Num(_) | Expr::Sym(_) => {}
            Expr::Add(v) | Expr::Mul(v) => v.iter().for_each(|c| c.walk(visit)),
            Expr::Pow(p) => {
                p.0.walk(visit);
                p.1.walk(visit);
            }
            Expr::Func(_, a) => a.walk(visit),
            Expr::Apply(ap) => ap.args.iter().for_each(|c| c.walk(visit)),
        }
    }

    pub fn contains(&self, pred: &mut impl FnMut(&Expr) -> bool) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= pred(e));
        found
    }

    pub fn has_symbol(&self, s: &Symbol) -> bool {
        self.contains(&mut |e| matches!(e, Expr::Sym(v) if v == s))
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        let mut out = std::collections::BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                out.insert(s.clone());
            }
        });
        out
    }

    /// True when some jet variable other than `u` occurs.
    pub fn has_derivative_jet(&self) -> bool {
        self.contains(&mut |e| matches!(e, Expr::Sym(Symbol::Jet(j)) if j.order() > 0))
    }

    pub fn has_applied(&self, name: &str) -> bool {
        self.contains(&mut |e| matches!(e, Expr::Apply(a) if &*a.name == name))
    }

    pub fn norm(&self) -> Expr {
        normal::normalize(self)
    }

    /// Normal form with exact cancellation of sum denominators.
    pub fn simplify(&self) -> Expr {
        normal::simplify(self)
    }

    /// Proves `self == 0` under the normal-form rules (with denominators cleared).
    pub fn is_zero(&self) -> bool {
        normal::is_zero(self)
    }

    pub fn diff(&self, v: &Symbol) -> Expr {
        diff::diff(self, v).norm()
    }

    pub fn subst(&self, b: &Binding) -> Expr {
        subst::substitute(self, b).norm()
    }

    pub fn subst_sym(&self, s: &Symbol, by: &Expr) -> Expr {
        let mut b = Binding::new();
        b.bind(s.clone(), by.clone());
        self.subst(&b)
    }

    pub fn eval(&self, env: &dyn NumericEnv) -> Result<f64, EvalError> {
        eval::eval(self, env)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Expr {
        Expr::Sym(s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Q> for Expr {
    fn from(v: Q) -> Expr {
        Expr::Num(v)
    }
}

impl From<&Expr> for Expr {
    fn from(e: &Expr) -> Expr {
        e.clone()
    }
}

pub fn t() -> Expr {
    Expr::Sym(Symbol::T)
}

pub fn x() -> Expr {
    Expr::Sym(Symbol::X)
}

pub fn u() -> Expr {
    Expr::Sym(Symbol::Jet(Jet::U))
}

pub fn jet(t: u8, x: u8) -> Expr {
    Expr::Sym(Symbol::Jet(Jet { t, x }))
}

pub fn alpha() -> Expr {
    Expr::Sym(Symbol::Alpha)
}

/// `F`, `F'`, `F''` for `k` = 0, 1, 2.
pub fn big_f(k: u8) -> Expr {
    Expr::Sym(Symbol::F(k))
}

pub fn param(name: &str) -> Expr {
    Expr::Sym(Symbol::param(name))
}

pub fn slot(i: u8) -> Expr {
    Expr::Sym(Symbol::Slot(i))
}

pub fn func(f: Func, arg: impl Into<Expr>) -> Expr {
    Expr::Func(f, Arc::new(arg.into()))
}

pub fn exp(arg: impl Into<Expr>) -> Expr {
    func(Func::Exp, arg)
}

pub fn ln(arg: impl Into<Expr>) -> Expr {
    func(Func::Ln, arg)
}

pub fn sqrt(arg: impl Into<Expr>) -> Expr {
    arg.into().pow(Expr::rat(1, 2))
}

pub fn apply(name: &str, derivs: Vec<u8>, args: Vec<Expr>) -> Expr {
    debug_assert_eq!(derivs.len(), args.len());
    Expr::Apply(Arc::new(Applied {
        name: Arc::from(name),
        derivs,
        args,
    }))
}

/// Abstract `name` of one argument, differentiated `k` times.
pub fn apply1(name: &str, k: u8, arg: impl Into<Expr>) -> Expr {
    apply(name, vec![k], vec![arg.into()])
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                ops::$tr::$method(self, rhs.clone())
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                ops::$tr::$method(self.clone(), rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                ops::$tr::$method(self.clone(), rhs.clone())
            }
        }
        impl ops::$tr<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                ops::$tr::$method(self, Expr::int(rhs))
            }
        }
        impl ops::$tr<i64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                ops::$tr::$method(self.clone(), Expr::int(rhs))
            }
        }
        impl ops::$tr<Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                ops::$tr::$method(Expr::int(self), rhs)
            }
        }
        impl ops::$tr<&Expr> for i64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                ops::$tr::$method(Expr::int(self), rhs.clone())
            }
        }
    };
}

fn flat_push(out: &mut Vec<Expr>, e: Expr, add: bool) {
    match e {
        Expr::Add(v) if add => out.extend(v.iter().cloned()),
        Expr::Mul(v) if !add => out.extend(v.iter().cloned()),
        other => out.push(other),
    }
}

binop!(Add, add, |a, b| {
    let mut v = Vec::new();
    flat_push(&mut v, a, true);
    flat_push(&mut v, b, true);
    Expr::Add(Arc::new(v))
});
binop!(Mul, mul, |a, b| {
    let mut v = Vec::new();
    flat_push(&mut v, a, false);
    flat_push(&mut v, b, false);
    Expr::Mul(Arc::new(v))
});
binop!(Sub, sub, |a, b| a + (-b));
binop!(Div, div, |a, b| a * b.recip());

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(v) => Expr::Num(-v),
            other => Expr::int(-1) * other,
        }
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::symbol_name(self))
    }
}

pub fn q_to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}
