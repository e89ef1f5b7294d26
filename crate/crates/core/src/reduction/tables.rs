//! Comparison of computed reductions with the printed rows.

use serde::Serialize;

use super::{invariants_for, matches_up_to_factor, reduce, ReducedOde, SimilarityAnsatz};
use crate::catalogue::{admissible, algebra_basis, pde, reduction_table_number, PrintedReduction};
use crate::dsl::parse_expr;
use crate::expr::{q, Expr, Symbol};
use crate::numeric::{numeric_zero_check, sample_jet_points, Ranges};
use crate::symmetry::VectorField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowCheck {
    pub case: String,
    pub table: u8,
    pub label: String,
    pub generator: String,
    pub computed_alpha: String,
    pub computed_phi: String,
    pub computed_ode: String,
    /// Printed ansatz is invariant under the generator.
    pub printed_ansatz_valid: bool,
    /// Printed ODE agrees, up to a factor free of `F'` and `F''`, with the
    /// reduction under the printed ansatz (or under ours when the printed one
    /// is invalid).
    pub ode_matches: bool,
    pub method: Certification,
    /// Reduction failed before any comparison.
    pub error: Option<String>,
    pub corrections: Vec<String>,
}

impl RowCheck {
    pub fn agrees(&self) -> bool {
        self.error.is_none() && self.printed_ansatz_valid && self.ode_matches
    }
}

fn parsed(s: &str) -> Expr {
    parse_expr(s).expect("printed rows parse").norm()
}

pub fn row_generator(r: &PrintedReduction) -> VectorField {
    let coeffs: Vec<Expr> = r.coeffs.iter().map(|c| parsed(c)).collect();
    VectorField::combination(&coeffs, &algebra_basis(r.case)).norm()
}

/// Numeric version of [`matches_up_to_factor`] over seeded points.
fn matches_numerically(ours: &Expr, printed: &Expr, r: &PrintedReduction, seed: u64, n: usize, tol: f64) -> bool {
    let mut params = admissible(r.case);
    if ours.has_symbol(&Symbol::param("c")) || printed.has_symbol(&Symbol::param("c")) {
        params.insert("c".into(), vec![q(1, 1), q(3, 2)]);
    }
    let ranges = Ranges {
        x: (0.5, 2.0),
        u: (0.2, 0.9),
        deriv: (-1.0, 1.0),
        ..Ranges::default()
    };
    let Ok(points) = sample_jet_points(n, seed, &ranges, &params) else {
        return false;
    };
    [Symbol::F(1), Symbol::F(2)].iter().all(|s| {
        let cross = ours.diff(s) * printed - ours * printed.diff(s);
        numeric_zero_check(&cross, &points, tol).pass
    })
}

fn same_form(ours: &Expr, printed: &Expr, r: &PrintedReduction, seed: u64) -> Option<Certification> {
    if matches_up_to_factor(ours, printed) {
        return Some(Certification::Symbolic);
    }
    matches_numerically(ours, printed, r, seed, 200, 1e-9).then_some(Certification::Numeric)
}

pub fn check_row(r: &PrintedReduction, seed: u64) -> RowCheck {
    let v = row_generator(r);
    let printed_ode = parsed(r.ode);
    let printed = SimilarityAnsatz::new(parsed(r.alpha), parsed(r.phi));
    let mut out = RowCheck {
        case: r.case.name().to_string(),
        table: reduction_table_number(r.case),
        label: r.label.to_string(),
        generator: r.generator.to_string(),
        computed_alpha: String::new(),
        computed_phi: String::new(),
        computed_ode: String::new(),
        printed_ansatz_valid: printed.is_invariant_under(&v),
        ode_matches: false,
        method: Certification::Symbolic,
        error: None,
        corrections: Vec::new(),
    };
    let ours = invariants_for(&v).and_then(|a| reduce(&pde(r.case), &a));
    let ours: ReducedOde = match ours {
        Ok(o) => o,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.computed_alpha = ours.ansatz.alpha.to_string();
    out.computed_phi = ours.ansatz.phi.to_string();
    out.computed_ode = ours.lhs.to_string();
    let reference = if out.printed_ansatz_valid {
        match reduce(&pde(r.case), &printed) {
            Ok(o) => o,
            Err(e) => {
                out.error = Some(format!("printed ansatz: {e}"));
                return out;
            }
        }
    } else {
        out.corrections.push(format!("ansatz: u = ({}) F(alpha), alpha = {}", ours.ansatz.phi, ours.ansatz.alpha));
        ours
    };
    match same_form(&reference.lhs, &printed_ode, r, seed) {
        Some(m) => {
            out.ode_matches = true;
            out.method = m;
        }
        None => {
            out.method = Certification::Numeric;
            out.corrections.push(format!("ode: {} = 0", reference.lhs));
        }
    }
    out
}

/// Checks every printed row; rows are independent.
pub fn check_rows(rows: &[PrintedReduction], seed: u64) -> Vec<RowCheck> {
    crate::par::map(rows, |r| check_row(r, seed))
}
