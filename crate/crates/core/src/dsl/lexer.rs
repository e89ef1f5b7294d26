//! Tokens of the expression language.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{DslError, ErrorKind, Span};
use crate::expr::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(Q),
    /// Identifier, possibly carrying trailing primes (`F''`, `f'`).
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn decimal(int_part: &str, frac: &str, exp: i64) -> Q {
    let digits: BigInt = format!("{int_part}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        Q::from_integer(digits * p)
    } else {
        Q::new(digits, p)
    }
}

/// Splits one line of source into tokens. `line` is 1-based.
pub fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| Span { line, col: col0 + i };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span: at(i) });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut frac = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let f0 = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[f0..i].iter().collect();
            }
            let mut exp = 0i64;
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                let neg = match chars.get(j) {
                    Some('-') => {
                        j += 1;
                        true
                    }
                    Some('+') => {
                        j += 1;
                        false
                    }
                    _ => false,
                };
                let e0 = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == e0 {
                    return Err(DslError::new(ErrorKind::Lexical, "malformed exponent in number", at(i)));
                }
                let digits: String = chars[e0..j].iter().collect();
                exp = digits
                    .parse::<i64>()
                    .ok()
                    .filter(|v| *v <= 4096)
                    .ok_or_else(|| DslError::new(ErrorKind::Lexical, "exponent too large", at(e0)))?;
                if neg {
                    exp = -exp;
                }
                i = j;
            }
            let int_part = if int_part.is_empty() { "0".to_string() } else { int_part };
            let v = decimal(&int_part, &frac, exp);
            out.push(Token { tok: Tok::Num(v), span: at(start) });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(name), span: at(start) });
            continue;
        }
        return Err(DslError::new(ErrorKind::Lexical, format!("unexpected character {c:?}"), at(i)));
    }
    out.push(Token { tok: Tok::End, span: at(chars.len()) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn nums(s: &str) -> Vec<Q> {
        lex(s, 1, 1)
            .unwrap()
            .into_iter()
            .filter_map(|t| match t.tok {
                Tok::Num(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(nums("0.5 .25 12 1e-3 2.5E2"), vec![
            Q::new(1.into(), 2.into()),
            Q::new(1.into(), 4.into()),
            Q::from_integer(12.into()),
            Q::new(1.into(), 1000.into()),
            Q::from_integer(250.into()),
        ]);
        assert!(Q::one() == nums("1.000")[0]);
    }

    #[test]
    fn primes_and_positions() {
        let toks = lex("F'' + u_xx", 3, 5).unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("F''".into()));
        assert_eq!(toks[2].tok, Tok::Ident("u_xx".into()));
        assert_eq!(toks[2].span, Span { line: 3, col: 11 });
        let err = lex("x # y", 2, 1).unwrap_err();
        assert_eq!((err.span.line, err.span.col), (2, 3));
    }
}
