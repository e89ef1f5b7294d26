//! RK4 integration of reduced ODEs and the PDE round-trip check.
//!
//! The ODE is solved for `F''` and integrated with fixed-step RK4 across the
//! range of `alpha` over the `(t, x)` grid. `F''` on the trajectory is then
//! rebuilt from the computed `F'` by finite differences instead of the ODE,
//! so an ODE that is not a true reduction shows up as a PDE residual.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{q, Binding, Expr, Jet, Lambda, Symbol};
use crate::jet::{PdeFn, PdeSpec};
use crate::reduction::SimilarityAnsatz;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RoundTripError {
    #[error("leading coefficient of F'' vanishes at alpha = {0}")]
    LeadingCoefficientVanishes(f64),
    #[error("integration blew up (|F| > 1e6) at alpha = {0}")]
    BlowUp(f64),
    #[error("the ODE is not linear in F''")]
    NotLinearInHighest,
    #[error("the PDE has abstract coefficient functions; specialize it first")]
    AbstractPde,
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error("invalid domain: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub t: (f64, f64),
    pub x: (f64, f64),
}

impl Domain {
    /// Parses `t=0:1,x=0.5:2`.
    pub fn parse(s: &str) -> Result<Domain, RoundTripError> {
        let bad = || RoundTripError::Domain(format!("expected t=A:B,x=C:D, got {s:?}"));
        let mut t = None;
        let mut x = None;
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let (a, b) = v.split_once(':').ok_or_else(bad)?;
            let r = (a.trim().parse::<f64>().map_err(|_| bad())?, b.trim().parse::<f64>().map_err(|_| bad())?);
            match k.trim() {
                "t" => t = Some(r),
                "x" => x = Some(r),
                _ => return Err(bad()),
            }
        }
        let d = Domain {
            t: t.ok_or_else(bad)?,
            x: x.ok_or_else(bad)?,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), RoundTripError> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if !ok(self.t) || !ok(self.x) {
            return Err(RoundTripError::Domain("bounds must be finite and ordered".into()));
        }
        if self.x.0 <= 0.0 {
            return Err(RoundTripError::Domain("x must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundTripConfig {
    pub step: f64,
    pub grid: usize,
}

impl Default for RoundTripConfig {
    fn default() -> RoundTripConfig {
        RoundTripConfig { step: 1e-3, grid: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub alpha_range: (f64, f64),
    pub steps: usize,
    pub grid: usize,
    pub max_residual: f64,
    /// `(t, x)` of the largest residual.
    pub argmax: (f64, f64),
}

/// Replaces abstract `f` and `g` by concrete functions of `u`, in both the
/// PDE and any reduced ODE built from it.
pub fn specialize(p: &PdeSpec, f: &Expr, g: &Expr) -> (PdeSpec, Binding) {
    let mut b = Binding::new();
    let slot = Expr::Sym(Symbol::Slot(0));
    let on_slot = |e: &Expr| e.subst_sym(&Symbol::Jet(Jet::U), &slot);
    let mut side = |pf: &PdeFn, concrete: &Expr| match pf {
        PdeFn::Abstract(name) => {
            b.bind_fn(name, Lambda::new(1, on_slot(concrete)));
            PdeFn::Concrete(concrete.clone())
        }
        PdeFn::Concrete(e) => PdeFn::Concrete(e.clone()),
    };
    let spec = PdeSpec {
        f: side(&p.f, f),
        g: side(&p.g, g),
    };
    (spec, b)
}

struct Ode {
    lead: Expr,
    rest: Expr,
    env: BTreeMap<Symbol, f64>,
}

impl Ode {
    fn second(&self, a: f64, y: [f64; 2]) -> Result<f64, RoundTripError> {
        let mut env = self.env.clone();
        env.insert(Symbol::Alpha, a);
        env.insert(Symbol::F(0), y[0]);
        env.insert(Symbol::F(1), y[1]);
        let ev = |e: &Expr| e.eval(&env).map_err(|e| RoundTripError::Eval(e.to_string()));
        let lead = ev(&self.lead)?;
        if !lead.is_finite() || lead.abs() < 1e-12 {
            return Err(RoundTripError::LeadingCoefficientVanishes(a));
        }
        Ok(-ev(&self.rest)? / lead)
    }

    fn rhs(&self, a: f64, y: [f64; 2]) -> Result<[f64; 2], RoundTripError> {
        Ok([y[1], self.second(a, y)?])
    }
}

fn axpy(y: [f64; 2], h: f64, k: [f64; 2]) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

/// Classic RK4 from `a0` over `n` steps of size `h`; returns `(F, F')` at
/// every node.
fn rk4(ode: &Ode, a0: f64, h: f64, n: usize, y0: [f64; 2]) -> Result<Vec<[f64; 2]>, RoundTripError> {
    let mut ys = Vec::with_capacity(n + 1);
    let mut y = y0;
    ys.push(y);
    for i in 0..n {
        let a = a0 + i as f64 * h;
        let k1 = ode.rhs(a, y)?;
        let k2 = ode.rhs(a + h / 2.0, axpy(y, h / 2.0, k1))?;
        let k3 = ode.rhs(a + h / 2.0, axpy(y, h / 2.0, k2))?;
        let k4 = ode.rhs(a + h, axpy(y, h, k3))?;
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        if !y[0].is_finite() || y[0].abs() > 1e6 {
            return Err(RoundTripError::BlowUp(a + h));
        }
        ys.push(y);
    }
    Ok(ys)
}

/// Fourth-order first derivative of equally spaced samples.
fn fd_derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    if n < 5 {
        // too short for the five-point stencils; fall back to second order
        return (0..n)
            .map(|i| match i {
                0 if n > 1 => (v[1] - v[0]) / h,
                _ if i + 1 == n && n > 1 => (v[i] - v[i - 1]) / h,
                _ if n > 2 => (v[i + 1] - v[i - 1]) / (2.0 * h),
                _ => 0.0,
            })
            .collect();
    }
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h)
            } else if i < 2 {
                let w = &v[i..i + 5];
                (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h)
            } else {
                let w = &v[i - 4..=i];
                (25.0 * w[4] - 48.0 * w[3] + 36.0 * w[2] - 16.0 * w[1] + 3.0 * w[0]) / (12.0 * h)
            }
        })
        .collect()
}

struct Trajectory {
    a0: f64,
    h: f64,
    f: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
}

impl Trajectory {
    fn locate(&self, a: f64) -> (usize, f64) {
        let n = self.f.len() - 1;
        if n == 0 {
            return (0, 0.0);
        }
        let s = ((a - self.a0) / self.h).clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64)
    }

    fn hermite(&self, v: &[f64], d: &[f64], a: f64) -> f64 {
        let (i, s) = self.locate(a);
        if v.len() == 1 {
            return v[0];
        }
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * v[i] + h10 * self.h * d[i] + h01 * v[i + 1] + h11 * self.h * d[i + 1]
    }

    /// Cubic Lagrange interpolation through the four nearest nodes.
    fn lagrange(&self, v: &[f64], a: f64) -> f64 {
        let n = v.len();
        if n < 4 {
            let (i, s) = self.locate(a);
            return if n == 1 { v[0] } else { v[i] * (1.0 - s) + v[i + 1] * s };
        }
        let (i, s) = self.locate(a);
        let j0 = i.saturating_sub(1).min(n - 4);
        let z = s + (i - j0) as f64;
        let mut out = 0.0;
        for k in 0..4 {
            let mut w = 1.0;
            for m in 0..4 {
                if m != k {
                    w *= (z - m as f64) / (k as f64 - m as f64);
                }
            }
            out += w * v[j0 + k];
        }
        out
    }

    fn at(&self, a: f64) -> [f64; 3] {
        [self.hermite(&self.f, &self.f1, a), self.hermite(&self.f1, &self.f2, a), self.lagrange(&self.f2, a)]
    }
}

/// Integrates `ode = 0` from `(F0, F0')` at the smallest `alpha` of the grid
/// and reports `max |R[u]|` for `u = phi F(alpha)` over the `grid x grid`
/// points of `domain`. `params` binds every parameter numerically.
pub fn ode_roundtrip_check(
    p: &PdeSpec,
    ansatz: &SimilarityAnsatz,
    ode: &Expr,
    domain: &Domain,
    f0: f64,
    fp0: f64,
    params: &BTreeMap<Symbol, f64>,
    cfg: &RoundTripConfig,
) -> Result<RoundTripReport, RoundTripError> {
    domain.validate()?;
    if p.f.is_abstract() || p.g.is_abstract() {
        return Err(RoundTripError::AbstractPde);
    }
    let lhs = ode.norm();
    let lead = lhs.diff(&Symbol::F(2)).norm();
    if lead.has_symbol(&Symbol::F(2)) {
        return Err(RoundTripError::NotLinearInHighest);
    }
    let rest = lhs.subst_sym(&Symbol::F(2), &Expr::zero()).norm();
    let system = Ode {
        lead,
        rest,
        env: params.clone(),
    };
    let grid = cfg.grid.max(2);
    let node = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * k as f64 / (grid - 1) as f64;
    let coords: Vec<(f64, f64)> = (0..grid)
        .flat_map(|i| (0..grid).map(move |j| (i, j)))
        .map(|(i, j)| (node(domain.t, i), node(domain.x, j)))
        .collect();
    let d = |e: &Expr, s: Symbol| e.diff(&s).norm();
    let (al, phi) = (&ansatz.alpha, &ansatz.phi);
    let parts = [
        al.clone(),
        d(al, Symbol::T),
        d(al, Symbol::X),
        d(&d(al, Symbol::X), Symbol::X),
        phi.clone(),
        d(phi, Symbol::T),
        d(phi, Symbol::X),
        d(&d(phi, Symbol::X), Symbol::X),
    ];
    let at_point = |t: f64, x: f64| -> Result<[f64; 8], RoundTripError> {
        let mut env = params.clone();
        env.insert(Symbol::T, t);
        env.insert(Symbol::X, x);
        let mut out = [0.0; 8];
        for (o, e) in out.iter_mut().zip(&parts) {
            *o = e.eval(&env).map_err(|e| RoundTripError::Eval(e.to_string()))?;
        }
        Ok(out)
    };
    let values: Vec<[f64; 8]> = coords.iter().map(|&(t, x)| at_point(t, x)).collect::<Result<_, _>>()?;
    let (amin, amax) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[0]), hi.max(v[0])));
    let steps = (((amax - amin) / cfg.step).ceil() as usize).max(1);
    let h = (amax - amin) / steps as f64;
    let traj = if h > 0.0 {
        let ys = rk4(&system, amin, h, steps, [f0, fp0])?;
        let f: Vec<f64> = ys.iter().map(|y| y[0]).collect();
        let f1: Vec<f64> = ys.iter().map(|y| y[1]).collect();
        let f2 = fd_derivative(&f1, h);
        Trajectory { a0: amin, h, f, f1, f2 }
    } else {
        let f2 = system.second(amin, [f0, fp0])?;
        Trajectory {
            a0: amin,
            h: 1.0,
            f: vec![f0],
            f1: vec![fp0],
            f2: vec![f2],
        }
    };
    let residual = p.residual();
    let mut max = 0.0f64;
    let mut argmax = coords[0];
    for (&(t, x), v) in coords.iter().zip(&values) {
        let [a, at, ax, axx, ph, pt, px, pxx] = *v;
        let [ff, f1, f2] = traj.at(a);
        let mut env = params.clone();
        env.insert(Symbol::T, t);
        env.insert(Symbol::X, x);
        env.insert(Symbol::Jet(Jet::U), ph * ff);
        env.insert(Symbol::Jet(Jet { t: 1, x: 0 }), pt * ff + ph * at * f1);
        env.insert(Symbol::Jet(Jet { t: 0, x: 1 }), px * ff + ph * ax * f1);
        env.insert(
            Symbol::Jet(Jet { t: 0, x: 2 }),
            pxx * ff + (2.0 * px * ax + ph * axx) * f1 + ph * ax * ax * f2,
        );
        let r = residual.eval(&env).map_err(|e| RoundTripError::Eval(e.to_string()))?;
        if !r.is_finite() {
            return Err(RoundTripError::Eval(format!("non-finite residual at t = {t}, x = {x}")));
        }
        if r.abs() > max {
            max = r.abs();
            argmax = (t, x);
        }
    }
    Ok(RoundTripReport {
        alpha_range: (amin, amax),
        steps,
        grid,
        max_residual: max,
        argmax,
    })
}

/// `ode` with its first term scaled by `1 + eps`; a negative control.
pub fn perturbed(ode: &Expr, eps: f64) -> Expr {
    let e = ode.norm();
    let k = q(((1.0 + eps) * 1000.0).round() as i64, 1000);
    match &e {
        Expr::Add(ts) => {
            let mut ts = ts.to_vec();
            ts[0] = Expr::Num(k) * ts[0].clone();
            Expr::sum(ts).norm()
        }
        other => other.clone(),
    }
}
