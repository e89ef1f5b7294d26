//! Numerical certification: seeded jet points, relative zero checks,
//! manufactured fields and the RK4 round trip of reduced ODEs.

pub mod roundtrip;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{q_to_f64, Applied, Expr, Jet, NumericEnv, Symbol, Q};
use crate::jet::MAX_ORDER;
use crate::par;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum NumericError {
    #[error("invalid range for {0}: {1}")]
    InvalidRange(&'static str, String),
    #[error("point count must be at least 1")]
    NoPoints,
}

/// Sampling box for jet points.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranges {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub u: (f64, f64),
    pub deriv: (f64, f64),
}

impl Default for Ranges {
    fn default() -> Ranges {
        Ranges {
            t: (0.0, 3.0),
            x: (0.2, 5.0),
            u: (0.05, 0.95),
            deriv: (-2.0, 2.0),
        }
    }
}

impl Ranges {
    pub fn validate(&self) -> Result<(), NumericError> {
        let check = |name, (lo, hi): (f64, f64)| {
            if lo.is_finite() && hi.is_finite() && lo < hi {
                Ok(())
            } else {
                Err(NumericError::InvalidRange(name, format!("({lo}, {hi})")))
            }
        };
        check("t", self.t)?;
        check("x", self.x)?;
        check("u", self.u)?;
        check("derivatives", self.deriv)?;
        if self.x.0 <= 0.0 {
            return Err(NumericError::InvalidRange("x", "x must be positive".into()));
        }
        Ok(())
    }
}

/// Admissible values per parameter name.
pub type ParamSpace = BTreeMap<String, Vec<Q>>;

/// Values for every coordinate, jet variable up to the jet order, and
/// parameter, with the seed and index that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    pub seed: u64,
    pub index: usize,
    pub values: BTreeMap<Symbol, f64>,
}

impl JetPoint {
    /// Parameter assignment as text, used to count distinct samples.
    pub fn param_key(&self) -> String {
        self.values
            .iter()
            .filter(|(s, _)| matches!(s, Symbol::Param(_)))
            .map(|(s, v)| format!("{s}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn point_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn sample_jet_points(
    n: usize,
    seed: u64,
    ranges: &Ranges,
    params: &ParamSpace,
) -> Result<Vec<JetPoint>, NumericError> {
    if n == 0 {
        return Err(NumericError::NoPoints);
    }
    ranges.validate()?;
    Ok(par::map_range(n, |index| {
        let mut rng = point_rng(seed, index);
        let mut values = BTreeMap::new();
        values.insert(Symbol::T, rng.random_range(ranges.t.0..ranges.t.1));
        values.insert(Symbol::X, rng.random_range(ranges.x.0..ranges.x.1));
        values.insert(Symbol::Jet(Jet::U), rng.random_range(ranges.u.0..ranges.u.1));
        for order in 1..=MAX_ORDER {
            for tt in 0..=order {
                let j = Jet { t: tt, x: order - tt };
                values.insert(Symbol::Jet(j), rng.random_range(ranges.deriv.0..ranges.deriv.1));
            }
        }
        values.insert(Symbol::Alpha, rng.random_range(ranges.x.0..ranges.x.1));
        for k in 0..3 {
            let r = if k == 0 { ranges.u } else { ranges.deriv };
            values.insert(Symbol::F(k), rng.random_range(r.0..r.1));
        }
        for (name, set) in params {
            let v = &set[rng.random_range(0..set.len())];
            values.insert(Symbol::param(name), q_to_f64(v));
        }
        JetPoint { seed, index, values }
    }))
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Evaluation environment of one point. Abstract functions take values that
/// are fixed per (point, name, derivative orders), in `(0.5, 2)`.
pub struct PointEnv<'a> {
    pub point: &'a JetPoint,
}

impl NumericEnv for PointEnv<'_> {
    fn symbol(&self, s: &Symbol) -> Option<f64> {
        self.point.values.get(s).copied()
    }

    fn applied(&self, ap: &Applied, _args: &[f64]) -> Option<f64> {
        let mut h = mix(self.point.seed ^ mix(self.point.index as u64));
        for b in ap.name.bytes() {
            h = mix(h ^ b as u64);
        }
        for &d in &ap.derivs {
            h = mix(h ^ (d as u64 + 0x100));
        }
        Some(0.5 + 1.5 * (h >> 11) as f64 / (1u64 << 53) as f64)
    }
}

/// Outcome of a numeric zero check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericSummary {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    pub max_scaled: f64,
    pub argmax: Option<usize>,
    pub domain_errors: usize,
    pub param_samples: usize,
    pub pass: bool,
}

/// `|e| / (1 + sum |terms|)` at one point, `None` on a domain error.
pub fn scaled_value(e: &Expr, env: &dyn NumericEnv) -> Option<f64> {
    let terms: Vec<&Expr> = match e {
        Expr::Add(v) => v.iter().collect(),
        other => vec![other],
    };
    let mut sum = 0.0;
    let mut scale = 1.0;
    for t in terms {
        let v = t.eval(env).ok()?;
        sum += v;
        scale += v.abs();
    }
    sum.is_finite().then(|| sum.abs() / scale)
}

pub fn numeric_zero_check(e: &Expr, points: &[JetPoint], tol: f64) -> NumericSummary {
    let e = e.norm();
    let vals = par::map(points, |p| scaled_value(&e, &PointEnv { point: p }));
    summarize(&vals, points, tol)
}

/// Same as [`numeric_zero_check`] but always on the calling thread.
pub fn numeric_zero_check_serial(e: &Expr, points: &[JetPoint], tol: f64) -> NumericSummary {
    let e = e.norm();
    let vals = par::map_serial(points, |p| scaled_value(&e, &PointEnv { point: p }));
    summarize(&vals, points, tol)
}

fn summarize(vals: &[Option<f64>], points: &[JetPoint], tol: f64) -> NumericSummary {
    let mut max = 0.0;
    let mut argmax = None;
    let mut domain_errors = 0;
    for (i, v) in vals.iter().enumerate() {
        match v {
            Some(v) => {
                if argmax.is_none() || *v > max {
                    max = *v;
                    argmax = Some(points[i].index);
                }
            }
            None => domain_errors += 1,
        }
    }
    let samples: BTreeSet<String> = points.iter().map(JetPoint::param_key).collect();
    NumericSummary {
        seed: points.first().map_or(0, |p| p.seed),
        points: points.len(),
        tol,
        max_scaled: max,
        argmax,
        domain_errors,
        param_samples: samples.len(),
        pass: argmax.is_some() && domain_errors < points.len() && max < tol,
    }
}

/// A closed-form field `u(t, x)` whose jet is obtained by exact differentiation.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedField {
    pub u: Expr,
    derivatives: BTreeMap<Jet, Expr>,
}

impl ManufacturedField {
    pub fn new(u: Expr) -> ManufacturedField {
        let mut derivatives = BTreeMap::new();
        for order in 0..=MAX_ORDER {
            for tt in 0..=order {
                let j = Jet { t: tt, x: order - tt };
                let mut d = u.norm();
                for _ in 0..j.t {
                    d = d.diff(&Symbol::T);
                }
                for _ in 0..j.x {
                    d = d.diff(&Symbol::X);
                }
                derivatives.insert(j, d);
            }
        }
        ManufacturedField { u, derivatives }
    }

    /// `(1 + 0.3 x^2) exp(-t/2)`.
    pub fn poly_exp() -> ManufacturedField {
        use crate::expr::{exp, t, x};
        ManufacturedField::new((1 + Expr::rat(3, 10) * x().powi(2)) * exp(-t() / 2))
    }

    /// `0.5 + 0.4 exp(-(x - 1)^2 - t)`.
    pub fn gaussian() -> ManufacturedField {
        use crate::expr::{exp, t, x};
        ManufacturedField::new(Expr::rat(1, 2) + Expr::rat(2, 5) * exp(-(x() - 1).powi(2) - t()))
    }

    /// Consistent jet point at `(t, x)`, carrying the given parameters.
    pub fn point(&self, t: f64, x: f64, params: &BTreeMap<Symbol, f64>, index: usize) -> JetPoint {
        let mut base = params.clone();
        base.insert(Symbol::T, t);
        base.insert(Symbol::X, x);
        let mut values = base.clone();
        for (j, d) in &self.derivatives {
            if let Ok(v) = d.eval(&base) {
                values.insert(Symbol::Jet(*j), v);
            }
        }
        JetPoint {
            seed: 0,
            index,
            values,
        }
    }
}

/// Seed, point count and tolerance of numeric certification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckOptions {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            seed: 42,
            points: 200,
            tol: 1e-9,
        }
    }
}

/// Result of certifying an expression to be zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCertificate {
    pub symbolic: bool,
    /// Evaluation of the unsimplified expression at seeded jet points, run
    /// whether or not normalization reached zero.
    pub numeric: Option<NumericSummary>,
    /// Simplified form, empty when symbolically zero.
    pub residual: String,
}

impl ZeroCertificate {
    pub fn pass(&self) -> bool {
        self.symbolic || self.numeric.as_ref().is_some_and(|n| n.pass)
    }

    pub fn method(&self) -> &'static str {
        if self.symbolic {
            "symbolic"
        } else {
            "numeric"
        }
    }
}

/// Symbolic zero test plus a numeric one at seeded jet points.
pub fn certify_zero(e: &Expr, ranges: &Ranges, params: &ParamSpace, opts: &CheckOptions) -> ZeroCertificate {
    let r = e.simplify();
    let numeric = sample_jet_points(opts.points, opts.seed, ranges, params)
        .ok()
        .map(|pts| numeric_zero_check(e, &pts, opts.tol));
    ZeroCertificate {
        symbolic: r.is_zero(),
        numeric,
        residual: if r.is_zero() { String::new() } else { r.to_string() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::*;

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let a = sample_jet_points(3, 42, &Ranges::default(), &ParamSpace::new()).unwrap();
        let b = sample_jet_points(3, 42, &Ranges::default(), &ParamSpace::new()).unwrap();
        assert_eq!(a, b);
        let pts = sample_jet_points(200, 42, &Ranges::default(), &ParamSpace::new()).unwrap();
        for p in &pts {
            let x = p.values[&Symbol::X];
            let u = p.values[&Symbol::Jet(Jet::U)];
            assert!(x > 0.0 && (0.05..0.95).contains(&u));
        }
        let bad = Ranges {
            x: (-1.0, 1.0),
            ..Ranges::default()
        };
        assert!(sample_jet_points(3, 42, &bad, &ParamSpace::new()).is_err());
        assert!(sample_jet_points(0, 42, &Ranges::default(), &ParamSpace::new()).is_err());
    }

    #[test]
    fn zero_checks() {
        let pts = sample_jet_points(50, 7, &Ranges::default(), &ParamSpace::new()).unwrap();
        let e = Expr::sum([(x() + 1).powi(2), -x().powi(2), -2 * x(), Expr::int(-1)]);
        assert!(numeric_zero_check(&e, &pts, 1e-9).pass);
        let s = numeric_zero_check(&jet(0, 1), &pts, 1e-9);
        assert!(!s.pass && s.argmax.is_some());
        assert_eq!(s, numeric_zero_check_serial(&jet(0, 1), &pts, 1e-9));
    }

    #[test]
    fn abstract_values_are_stable() {
        let pts = sample_jet_points(2, 1, &Ranges::default(), &ParamSpace::new()).unwrap();
        let env = PointEnv { point: &pts[0] };
        let f = apply1("f", 1, u());
        assert_eq!(f.eval(&env), f.eval(&env));
        assert_ne!(f.eval(&env), apply1("f", 0, u()).eval(&env));
    }

    #[test]
    fn manufactured_jet_is_consistent() {
        let m = ManufacturedField::poly_exp();
        let p = m.point(0.5, 1.5, &BTreeMap::new(), 0);
        let ux = p.values[&Symbol::Jet(Jet { t: 0, x: 1 })];
        let want = 0.6 * 1.5 * (-0.25f64).exp();
        assert!((ux - want).abs() < 1e-12);
    }
}
