//! Infix printer whose output the case-file parser reads back.

use num_traits::{One, Signed};

use super::{Expr, Jet, Symbol, Q};

pub fn symbol_name(s: &Symbol) -> String {
    match s {
        Symbol::T => "t".into(),
        Symbol::X => "x".into(),
        Symbol::Jet(j) => jet_name(*j),
        Symbol::Alpha => "alpha".into(),
        Symbol::F(k) => format!("F{}", "'".repeat(*k as usize)),
        Symbol::Param(p) => p.to_string(),
        Symbol::Slot(i) => format!("_{i}"),
    }
}

pub fn jet_name(j: Jet) -> String {
    if j == Jet::U {
        return "u".into();
    }
    format!("u_{}{}", "x".repeat(j.x as usize), "t".repeat(j.t as usize))
}

fn num(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn print(e: &Expr) -> String {
    let (neg, body) = signed(e);
    if neg {
        format!("-{}", wrap_if_sum(e, body))
    } else {
        body
    }
}

fn wrap_if_sum(e: &Expr, body: String) -> String {
    if matches!(e, Expr::Add(_)) {
        format!("({body})")
    } else {
        body
    }
}

/// Splits a leading minus sign off `e` (sums are never negated).
fn signed(e: &Expr) -> (bool, String) {
    match e {
        Expr::Num(v) if v.is_negative() => (true, num(&-v)),
        Expr::Mul(fs) => match &fs[0] {
            Expr::Num(c) if c.is_negative() => {
                let mut rest = fs.to_vec();
                let c = -c;
                if c.is_one() {
                    rest.remove(0);
                } else {
                    rest[0] = Expr::Num(c);
                }
                (true, product(&rest))
            }
            _ => (false, product(fs)),
        },
        Expr::Add(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let (neg, body) = signed(t);
                let body = wrap_if_sum(t, body);
                match (i, neg) {
                    (0, true) => out.push_str(&format!("-{body}")),
                    (0, false) => out.push_str(&body),
                    (_, true) => out.push_str(&format!(" - {body}")),
                    (_, false) => out.push_str(&format!(" + {body}")),
                }
            }
            (false, out)
        }
        Expr::Pow(p) if p.1.as_num().is_some_and(|k| k.is_negative()) => {
            (false, product(std::slice::from_ref(e)))
        }
        _ => (false, factor(e)),
    }
}

fn product(fs: &[Expr]) -> String {
    if fs.is_empty() {
        return "1".into();
    }
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        match f {
            Expr::Num(c) if i == 0 && !c.is_integer() && c.is_positive() => {
                if !c.numer().is_one() || fs.len() == 1 {
                    numer.push(c.numer().to_string());
                }
                denom.push(c.denom().to_string());
            }
            Expr::Pow(p) => match p.1.as_num() {
                // `1/0^2` would reparse as `0^-1`.
                Some(k) if k.is_negative() && !p.0.is_zero_literal() => {
                    let k = -k;
                    if k.is_one() {
                        denom.push(factor(&p.0));
                    } else {
                        denom.push(factor(&p.0.pow(Expr::Num(k))));
                    }
                }
                _ => numer.push(factor(f)),
            },
            _ => numer.push(factor(f)),
        }
    }
    let top = if numer.is_empty() {
        "1".to_string()
    } else {
        numer.join("*")
    };
    if denom.is_empty() {
        top
    } else if denom.len() == 1 {
        format!("{top}/{}", denom[0])
    } else {
        format!("{top}/({})", denom.join("*"))
    }
}

/// Renders `e` so that it binds at least as tightly as a product factor.
fn factor(e: &Expr) -> String {
    match e {
        Expr::Num(v) => {
            if v.is_integer() && !v.is_negative() {
                num(v)
            } else {
                format!("({})", num(v))
            }
        }
        Expr::Sym(s) => symbol_name(s),
        Expr::Add(_) => format!("({})", print(e)),
        Expr::Mul(fs) => {
            let (neg, _) = signed(e);
            if neg || fs.iter().any(|f| matches!(f, Expr::Pow(p) if p.1.as_num().is_some_and(|k| k.is_negative()))) {
                format!("({})", print(e))
            } else {
                product(fs)
            }
        }
        Expr::Pow(p) => {
            let (b, k) = (&p.0, &p.1);
            if let Some(h) = k.as_num() {
                if *h == super::q(1, 2) {
                    return format!("sqrt({})", print(b));
                }
            }
            format!("{}^{}", power_operand(b), power_operand(k))
        }
        Expr::Func(f, a) => format!("{}({})", f.name(), print(a)),
        Expr::Apply(ap) => {
            let args: Vec<String> = ap.args.iter().map(print).collect();
            let args = args.join(", ");
            // Only `f` and `g` may be called without an index.
            let bare = matches!(&*ap.name, "f" | "g") && ap.derivs.len() == 1;
            if bare && ap.derivs[0] == 0 {
                format!("{}({args})", ap.name)
            } else if bare && ap.derivs[0] <= 3 {
                format!("{}{}({args})", ap.name, "'".repeat(ap.derivs[0] as usize))
            } else {
                let ds: Vec<String> = ap.derivs.iter().map(|d| d.to_string()).collect();
                format!("{}[{}]({args})", ap.name, ds.join(","))
            }
        }
    }
}

fn power_operand(e: &Expr) -> String {
    match e {
        Expr::Num(v) if v.is_integer() && !v.is_negative() => num(v),
        Expr::Sym(_) | Expr::Func(..) | Expr::Apply(_) => factor(e),
        _ => format!("({})", print(e)),
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::*;

    #[test]
    fn shapes() {
        assert_eq!((u() * (1 - u())).norm().to_string(), "u - u^2");
        assert_eq!(x().recip().norm().to_string(), "1/x");
        assert_eq!((Expr::rat(-3, 2) * x()).norm().to_string(), "-3*x/2");
        assert_eq!(sqrt(Expr::int(2)).norm().to_string(), "sqrt(2)");
        assert_eq!(apply1("f", 1, u()).to_string(), "f'(u)");
        assert_eq!(apply1("phi", 0, x()).to_string(), "phi[0](x)");
        assert_eq!(apply("eta", vec![0, 0, 0], vec![t(), x(), u()]).to_string(), "eta[0,0,0](t, x, u)");
        assert_eq!(Expr::int(0).powi(-2).to_string(), "0^(-2)");
        assert_eq!(apply("xi1", vec![1, 0, 2], vec![t(), x(), u()]).to_string(), "xi1[1,0,2](t, x, u)");
        assert_eq!(jet(1, 1).to_string(), "u_xt");
        assert_eq!(big_f(2).to_string(), "F''");
        assert_eq!((x() * param("c") / 2).norm().to_string(), "x*c/2");
        assert_eq!((-x() / 2).norm().to_string(), "-x/2");
    }
}
