//! Checks of the printed multipliers and conserved vectors of one case.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    construct_conserved_vector, equivalent_modulo_trivial, manufactured_divergence, multiplier_solve, verify_conserved_vector, verify_multiplier,
    Constraint, ConservedVector, MultiplierCheck, SolvedMultipliers, Status, VectorCheck,
};
use crate::catalogue::conservation::{parsed, ConservationCase, PrintedVector};
use crate::expr::{Expr, Symbol};
use crate::jet::PdeSpec;
use crate::numeric::{CheckOptions, ManufacturedField};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorFinding {
    pub label: String,
    pub multiplier: MultiplierCheck,
    /// Relation imposed before construction, taken from the multiplier check.
    pub constraint: Option<Constraint>,
    /// Parameter values the printed vector is compared at.
    pub printed_values: Vec<Constraint>,
    /// The printed vector, under `constraint` and `printed_values`.
    pub printed: VectorCheck,
    pub constructed: Option<VectorCheck>,
    pub construction_error: Option<String>,
    /// Printed and constructed vectors differ by a trivial vector.
    pub reproduces_printed: bool,
    /// Largest scaled divergence residual of the constructed vector along a
    /// manufactured field, remaining parameters set to 1/2.
    pub manufactured_max: Option<f64>,
}

/// Points of the manufactured divergence check.
pub const MANUFACTURED_POINTS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseFinding {
    pub case: String,
    pub f: String,
    pub g: String,
    pub solved: Option<SolvedMultipliers>,
    pub solve_error: Option<String>,
    pub vectors: Vec<VectorFinding>,
}

fn check_vector(c: &ConservationCase, v: &PrintedVector, opts: &CheckOptions) -> VectorFinding {
    let params = c.admissible();
    let lam = parsed(v.multiplier);
    let multiplier = verify_multiplier(&c.pde(), &lam, &params, opts).expect("printed multipliers are jet free");
    let constraint = (multiplier.status == Status::Constrained).then(|| multiplier.constraints[0].clone());
    let printed_values: Vec<Constraint> = c
        .printed_values
        .iter()
        .map(|(p, v)| Constraint::new(Symbol::param(p), parsed(v)))
        .collect();
    let fixes: Vec<&Constraint> = constraint.iter().chain(&printed_values).collect();
    let fix = |e: &Expr| fixes.iter().fold(e.clone(), |acc, k| k.apply(&acc));
    let pde = PdeSpec::new(fix(&parsed(c.f)), fix(&parsed(c.g)));
    let fix = |e: &str| fix(&parsed(e));
    let lam_c = fix(v.multiplier);
    let printed_v = ConservedVector::new(fix(v.density), fix(v.flux), lam_c.clone());
    let printed = verify_conserved_vector(&pde, &printed_v, &params, opts).expect("printed vectors are supported");
    let mut out = VectorFinding {
        label: v.label.to_string(),
        multiplier,
        constraint,
        printed_values,
        printed,
        constructed: None,
        construction_error: None,
        reproduces_printed: false,
        manufactured_max: None,
    };
    if out.multiplier.status == Status::Fail {
        out.construction_error = Some("multiplier fails".into());
        return out;
    }
    match construct_conserved_vector(&pde, &lam_c) {
        Ok(ours) => {
            out.constructed = verify_conserved_vector(&pde, &ours, &params, opts).ok();
            out.reproduces_printed = equivalent_modulo_trivial(&ours, &printed_v, &params, opts).unwrap_or(false);
            let halves: BTreeMap<Symbol, f64> = c.params.iter().map(|p| (Symbol::param(p), 0.5)).collect();
            out.manufactured_max =
                manufactured_divergence(&pde, &ours, &ManufacturedField::poly_exp(), &halves, MANUFACTURED_POINTS).ok();
        }
        Err(e) => out.construction_error = Some(e.to_string()),
    }
    out
}

pub fn analyse_case(c: &ConservationCase, opts: &CheckOptions) -> CaseFinding {
    let (solved, solve_error) = match multiplier_solve(&c.pde(), &c.admissible()) {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CaseFinding {
        case: c.case.name().to_string(),
        f: parsed(c.f).to_string(),
        g: parsed(c.g).to_string(),
        solved,
        solve_error,
        vectors: crate::par::map(c.vectors, |v| check_vector(c, v, opts)),
    }
}
