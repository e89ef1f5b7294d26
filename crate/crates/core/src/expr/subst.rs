//! Simultaneous substitution of symbols and abstract functions.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{diff::diff, Applied, Expr, Symbol};

/// Body of a substituted abstract function; argument `i` is `Slot(i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda {
    pub arity: u8,
    pub body: Expr,
}

impl Lambda {
    pub fn new(arity: u8, body: Expr) -> Lambda {
        Lambda { arity, body }
    }

    /// Body differentiated `derivs[i]` times in slot `i`, then applied to `args`.
    pub fn apply(&self, derivs: &[u8], args: &[Expr]) -> Expr {
        let mut body = self.body.clone();
        for (i, &k) in derivs.iter().enumerate() {
            for _ in 0..k {
                body = diff(&body, &Symbol::Slot(i as u8)).norm();
            }
        }
        let mut slots = Binding::new();
        for (i, a) in args.iter().enumerate() {
            slots.bind(Symbol::Slot(i as u8), a.clone());
        }
        substitute(&body, &slots)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding {
    syms: BTreeMap<Symbol, Expr>,
    funcs: BTreeMap<Arc<str>, Lambda>,
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn single(s: Symbol, e: Expr) -> Binding {
        let mut b = Binding::new();
        b.bind(s, e);
        b
    }

    /// Panics if `s` is already bound.
    pub fn bind(&mut self, s: Symbol, e: Expr) -> &mut Binding {
        let prev = self.syms.insert(s, e);
        assert!(prev.is_none(), "symbol bound twice");
        self
    }

    /// Panics if `name` is already bound.
    pub fn bind_fn(&mut self, name: &str, l: Lambda) -> &mut Binding {
        let prev = self.funcs.insert(Arc::from(name), l);
        assert!(prev.is_none(), "function bound twice");
        self
    }

    pub fn get(&self, s: &Symbol) -> Option<&Expr> {
        self.syms.get(s)
    }

    pub fn get_fn(&self, name: &str) -> Option<&Lambda> {
        self.funcs.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty() && self.funcs.is_empty()
    }
}

/// Raw (unnormalized) substitution.
pub fn substitute(e: &Expr, b: &Binding) -> Expr {
    match e {
        Expr::Num(_) => e.clone(),
        Expr::Sym(s) => b.syms.get(s).cloned().unwrap_or_else(|| e.clone()),
        Expr::Add(v) => Expr::sum(v.iter().map(|c| substitute(c, b))),
        Expr::Mul(v) => Expr::product(v.iter().map(|c| substitute(c, b))),
        Expr::Pow(p) => substitute(&p.0, b).pow(substitute(&p.1, b)),
        Expr::Func(f, a) => Expr::Func(*f, Arc::new(substitute(a, b))),
        Expr::Apply(ap) => {
            let args: Vec<Expr> = ap.args.iter().map(|a| substitute(a, b)).collect();
            match b.funcs.get(&ap.name) {
                Some(l) => l.apply(&ap.derivs, &args),
                None => Expr::Apply(Arc::new(Applied {
                    name: ap.name.clone(),
                    derivs: ap.derivs.clone(),
                    args,
                })),
            }
        }
    }
}

/// Rebuilds `e`, replacing applied functions for which `map` answers.
pub fn replace_applied(e: &Expr, map: &dyn Fn(&Applied) -> Option<Expr>) -> Expr {
    match e {
        Expr::Num(_) | Expr::Sym(_) => e.clone(),
        Expr::Add(v) => Expr::sum(v.iter().map(|a| replace_applied(a, map))),
        Expr::Mul(v) => Expr::product(v.iter().map(|a| replace_applied(a, map))),
        Expr::Pow(b) => replace_applied(&b.0, map).pow(replace_applied(&b.1, map)),
        Expr::Func(f, a) => super::func(*f, replace_applied(a, map)),
        Expr::Apply(ap) => map(ap).unwrap_or_else(|| {
            let mut ap = (**ap).clone();
            ap.args = ap.args.iter().map(|a| replace_applied(a, map)).collect();
            Expr::Apply(Arc::new(ap))
        }),
    }
}
