//! INI-style case files.
//!
//! ```text
//! # Case 1
//! [pde]
//! f = u
//! g = u*(1 - u)
//!
//! [generator X2]
//! eta = u*exp(-t)
//! xi_t = 0
//!
//! [multiplier L1]
//! lambda = exp(-t)*besselI0(sqrt(2)*x)
//!
//! [ansatz A1]
//! alpha = x
//! phi = exp(t)
//! ```
//!
//! `[params]` holds `name = expr` bindings that are substituted everywhere
//! by [`CaseFile::resolved`]. Missing `f`/`g` stand for abstract functions.

use std::collections::BTreeSet;

use super::{parse_expr_at, DslError, ErrorKind, Span};
use crate::expr::{Binding, Expr, Symbol};
use crate::jet::{PdeFn, PdeSpec};
use crate::reduction::SimilarityAnsatz;
use crate::symmetry::VectorField;

#[derive(Clone, Debug, PartialEq)]
pub struct CaseFile {
    pub f: Option<Expr>,
    pub g: Option<Expr>,
    pub params: Vec<(String, Expr)>,
    pub generators: Vec<(String, VectorField)>,
    pub multipliers: Vec<(String, Expr)>,
    pub ansatze: Vec<(String, SimilarityAnsatz)>,
}

impl CaseFile {
    pub fn empty() -> CaseFile {
        CaseFile {
            f: None,
            g: None,
            params: Vec::new(),
            generators: Vec::new(),
            multipliers: Vec::new(),
            ansatze: Vec::new(),
        }
    }

    pub fn pde(&self) -> PdeSpec {
        let side = |e: &Option<Expr>, name: &str| match e {
            Some(e) => PdeFn::Concrete(e.clone()),
            None => PdeFn::Abstract(name.into()),
        };
        PdeSpec {
            f: side(&self.f, "f"),
            g: side(&self.g, "g"),
        }
    }

    pub fn generator(&self, name: &str) -> Option<&VectorField> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn multiplier(&self, name: &str) -> Option<&Expr> {
        self.multipliers.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn ansatz(&self, name: &str) -> Option<&SimilarityAnsatz> {
        self.ansatze.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Parameter names left in the PDE, generators, multipliers and ansatze.
    pub fn free_params(&self) -> BTreeSet<String> {
        let mut exprs: Vec<&Expr> = self.f.iter().chain(&self.g).collect();
        for (_, v) in &self.generators {
            exprs.extend(v.components());
        }
        exprs.extend(self.multipliers.iter().map(|(_, l)| l));
        for (_, a) in &self.ansatze {
            exprs.push(&a.alpha);
            exprs.push(&a.phi);
        }
        let bound: BTreeSet<&str> = self.params.iter().map(|(n, _)| n.as_str()).collect();
        exprs
            .iter()
            .flat_map(|e| e.symbols())
            .filter_map(|s| match s {
                Symbol::Param(n) if !bound.contains(&*n) => Some(n.to_string()),
                _ => None,
            })
            .collect()
    }

    /// The case with every `[params]` binding substituted, in file order.
    pub fn resolved(&self) -> CaseFile {
        let mut out = self.clone();
        for (name, value) in &self.params {
            let b = Binding::single(Symbol::param(name), value.clone());
            let s = |e: &Expr| e.subst(&b).norm();
            out.f = out.f.as_ref().map(s);
            out.g = out.g.as_ref().map(s);
            for (_, v) in &mut out.generators {
                *v = v.map(s);
            }
            for (_, l) in &mut out.multipliers {
                *l = s(l);
            }
            for (_, a) in &mut out.ansatze {
                *a = SimilarityAnsatz::new(s(&a.alpha), s(&a.phi));
            }
        }
        out.params.clear();
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Pde,
    Params,
    Generator,
    Multiplier,
    Ansatz,
}

struct Entry {
    key: String,
    value: Expr,
    span: Span,
    line: String,
}

fn allowed(sec: Section) -> &'static [Symbol] {
    const PDE: &[Symbol] = &[Symbol::Jet(crate::expr::Jet::U)];
    const POINT: &[Symbol] = &[Symbol::T, Symbol::X, Symbol::Jet(crate::expr::Jet::U)];
    const PLANE: &[Symbol] = &[Symbol::T, Symbol::X];
    match sec {
        Section::Pde => PDE,
        Section::Generator | Section::Multiplier => POINT,
        Section::Ansatz => PLANE,
        Section::Params | Section::None => &[],
    }
}

fn check_symbols(sec: Section, e: &Entry) -> Result<(), DslError> {
    let ok = allowed(sec);
    let bad: BTreeSet<String> = e
        .value
        .symbols()
        .into_iter()
        .filter(|s| !matches!(s, Symbol::Param(_)) && !ok.contains(s))
        .map(|s| s.to_string())
        .collect();
    let mut applied = false;
    e.value.walk(&mut |n| applied |= matches!(n, Expr::Apply(_)));
    if !bad.is_empty() {
        let list: Vec<String> = bad.into_iter().collect();
        return Err(DslError::new(ErrorKind::Semantic, format!("{} may not depend on {}", e.key, list.join(", ")), e.span)
            .with_source(&e.line));
    }
    if applied {
        return Err(DslError::new(ErrorKind::Semantic, format!("{} may not contain abstract functions", e.key), e.span)
            .with_source(&e.line));
    }
    Ok(())
}

fn take(entries: &mut Vec<Entry>, key: &str) -> Option<Expr> {
    let i = entries.iter().position(|e| e.key == key)?;
    Some(entries.remove(i).value)
}

struct Builder {
    case: CaseFile,
    seen: BTreeSet<(u8, String)>,
}

impl Builder {
    fn close(&mut self, sec: Section, name: &str, head: Span, head_line: &str, mut entries: Vec<Entry>) -> Result<(), DslError> {
        let keys: &[&str] = match sec {
            Section::None => &[],
            Section::Pde => &["f", "g"],
            Section::Params => &[],
            Section::Generator => &["xi_t", "xi_x", "eta"],
            Section::Multiplier => &["lambda"],
            Section::Ansatz => &["alpha", "phi"],
        };
        let mut seen_keys = BTreeSet::new();
        for e in &entries {
            if sec != Section::Params && !keys.contains(&e.key.as_str()) {
                let msg = format!("unknown key {:?}; expected one of {}", e.key, keys.join(", "));
                return Err(DslError::new(ErrorKind::Semantic, msg, e.span).with_source(&e.line));
            }
            if !seen_keys.insert(e.key.clone()) {
                return Err(DslError::new(ErrorKind::Semantic, format!("duplicate key {:?}", e.key), e.span).with_source(&e.line));
            }
            check_symbols(sec, e)?;
        }
        let tag = sec as u8;
        if tag != Section::None as u8 && !self.seen.insert((tag, name.to_string())) {
            return Err(DslError::new(ErrorKind::Semantic, format!("duplicate section {name:?}"), head).with_source(head_line));
        }
        let c = &mut self.case;
        match sec {
            Section::None => {}
            Section::Pde => {
                c.f = take(&mut entries, "f");
                c.g = take(&mut entries, "g");
            }
            Section::Params => {
                c.params = entries.into_iter().map(|e| (e.key, e.value)).collect();
            }
            Section::Generator => {
                let mut get = |k| take(&mut entries, k).unwrap_or_else(Expr::zero);
                let v = VectorField::new(get("xi_t"), get("xi_x"), get("eta"));
                if v.is_zero() {
                    return Err(DslError::new(ErrorKind::Semantic, format!("generator {name} is zero"), head).with_source(head_line));
                }
                c.generators.push((name.to_string(), v));
            }
            Section::Multiplier => {
                let Some(l) = take(&mut entries, "lambda") else {
                    return Err(DslError::new(ErrorKind::Semantic, format!("multiplier {name} needs lambda"), head).with_source(head_line));
                };
                c.multipliers.push((name.to_string(), l));
            }
            Section::Ansatz => {
                let Some(a) = take(&mut entries, "alpha") else {
                    return Err(DslError::new(ErrorKind::Semantic, format!("ansatz {name} needs alpha"), head).with_source(head_line));
                };
                let phi = take(&mut entries, "phi").unwrap_or_else(Expr::one);
                c.ansatze.push((name.to_string(), SimilarityAnsatz::new(a, phi)));
            }
        }
        Ok(())
    }
}

fn header(body: &str, span: Span, line: &str) -> Result<(Section, String), DslError> {
    let err = |m: String| Err(DslError::new(ErrorKind::Syntax, m, span).with_source(line));
    let mut parts = body.split_whitespace();
    let kind = parts.next().unwrap_or("");
    let name = parts.next();
    if parts.next().is_some() {
        return err("section headers take at most one name".into());
    }
    let named = |s: Section| match name {
        Some(n) if n.chars().all(|c| c.is_alphanumeric() || c == '_') => Ok((s, n.to_string())),
        Some(n) => err(format!("invalid section name {n:?}")),
        None => err(format!("[{kind}] needs a name")),
    };
    match kind {
        "pde" | "params" if name.is_some() => err(format!("[{kind}] takes no name")),
        "pde" => Ok((Section::Pde, String::new())),
        "params" => Ok((Section::Params, String::new())),
        "generator" => named(Section::Generator),
        "multiplier" => named(Section::Multiplier),
        "ansatz" => named(Section::Ansatz),
        other => err(format!("unknown section [{other}]")),
    }
}

/// Parses a case file. Comments start with `#` or `;` at the beginning of
/// a line.
pub fn parse_case(text: &str) -> Result<CaseFile, DslError> {
    let mut b = Builder {
        case: CaseFile::empty(),
        seen: BTreeSet::new(),
    };
    let mut sec = Section::None;
    let mut name = String::new();
    let mut head = Span { line: 1, col: 1 };
    let mut head_line = String::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim_start();
        let indent = raw.chars().count() - trimmed.chars().count();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        let span = Span { line: line_no, col: indent + 1 };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(body) = rest.strip_suffix(']') else {
                return Err(DslError::new(ErrorKind::Syntax, "unterminated section header", span).with_source(raw));
            };
            b.close(sec, &name, head, &head_line, std::mem::take(&mut entries))?;
            (sec, name) = header(body, span, raw)?;
            head = span;
            head_line = raw.to_string();
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return Err(DslError::new(ErrorKind::Syntax, "expected key = expression", span).with_source(raw));
        };
        if sec == Section::None {
            return Err(DslError::new(ErrorKind::Syntax, "entry outside of any section", span).with_source(raw));
        }
        let key = raw[..eq].trim().to_string();
        if key.is_empty() || !key.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(DslError::new(ErrorKind::Syntax, format!("invalid key {key:?}"), span).with_source(raw));
        }
        let col = raw[..eq + 1].chars().count() + 1;
        let value = parse_expr_at(&raw[eq + 1..], line_no, col).map_err(|e| e.with_source(raw))?;
        entries.push(Entry {
            key,
            value: value.norm(),
            span,
            line: raw.to_string(),
        });
    }
    b.close(sec, &name, head, &head_line, entries)?;
    Ok(b.case)
}

/// Renders a case file that [`parse_case`] reads back to an equal value.
pub fn print_case(c: &CaseFile) -> String {
    let mut out = String::new();
    if c.f.is_some() || c.g.is_some() {
        out.push_str("[pde]\n");
        if let Some(f) = &c.f {
            out.push_str(&format!("f = {f}\n"));
        }
        if let Some(g) = &c.g {
            out.push_str(&format!("g = {g}\n"));
        }
    }
    if !c.params.is_empty() {
        out.push_str("\n[params]\n");
        for (k, v) in &c.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    for (n, v) in &c.generators {
        out.push_str(&format!("\n[generator {n}]\n"));
        for (k, e) in [("xi_t", &v.xi1), ("xi_x", &v.xi2), ("eta", &v.eta)] {
            if !e.is_zero_literal() {
                out.push_str(&format!("{k} = {e}\n"));
            }
        }
    }
    for (n, l) in &c.multipliers {
        out.push_str(&format!("\n[multiplier {n}]\nlambda = {l}\n"));
    }
    for (n, a) in &c.ansatze {
        out.push_str(&format!("\n[ansatz {n}]\nalpha = {}\nphi = {}\n", a.alpha, a.phi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{exp, param, t, u};

    const CASE1: &str = "# Case 1\n[pde]\nf = u\ng = u*(1-u)\n\n[generator X2]\neta = u*exp(-t)\n\n[multiplier L]\nlambda = exp(-t)*(c1 + c2*ln(x))\n\n[ansatz A]\nalpha = x\nphi = exp(t)\n";

    #[test]
    fn reads_sections() {
        let c = parse_case(CASE1).unwrap();
        assert_eq!(c.f, Some(u()));
        assert_eq!(c.g, Some((u() - u().powi(2)).norm()));
        let v = c.generator("X2").unwrap();
        assert!(v.xi1.is_zero() && v.xi2.is_zero());
        assert_eq!(v.eta, (u() * exp(-t())).norm());
        assert!(c.multiplier("L").unwrap().has_symbol(&Symbol::param("c2")));
        assert_eq!(c.ansatz("A").unwrap().phi, exp(t()).norm());
    }

    #[test]
    fn print_parse_round_trip() {
        let c = parse_case(CASE1).unwrap();
        assert_eq!(parse_case(&print_case(&c)).unwrap(), c);
    }

    #[test]
    fn free_parameters() {
        let c = parse_case("[pde]\nf = m*u^n\ng = p*u\n[params]\nn = 2\n[multiplier L]\nlambda = exp(c*t)\n").unwrap();
        let names: Vec<String> = c.free_params().into_iter().collect();
        assert_eq!(names, ["c", "m", "p"]);
    }

    #[test]
    fn params_substitute() {
        let c = parse_case("[pde]\nf = m*u^n\ng = p*u\n[params]\nn = 2\np = m\n").unwrap();
        let r = c.resolved();
        assert_eq!(r.f, Some((param("m") * u().powi(2)).norm()));
        assert_eq!(r.g, Some((param("m") * u()).norm()));
    }

    #[test]
    fn diagnostics() {
        let e = parse_case("[pde]\nf = u +\n").unwrap_err();
        assert_eq!((e.kind, e.span.line), (ErrorKind::Syntax, 2));
        let e = parse_case("[pde]\nf = u*x\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        let e = parse_case("[generator]\neta = u\n").unwrap_err();
        assert_eq!(e.span.line, 1);
        let e = parse_case("[pde]\nh = u\n").unwrap_err();
        assert!(e.to_string().contains("unknown key"));
        let e = parse_case("[ansatz A]\nalpha = u\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic);
        assert!(parse_case("[pde]\ng = x\n").unwrap_err().to_string().contains("^"));
        assert!(parse_case("").unwrap() == CaseFile::empty());
    }
}
