//! Printed multipliers and conserved vectors, transcribed into the
//! expression language. The equations of this part use their own parameter
//! names (`f = a u` in Case 2, `f = m u^n` in Case 4).

use super::CaseId;
use crate::dsl::parse_expr;
use crate::expr::{q, Expr};
use crate::jet::PdeSpec;
use crate::numeric::ParamSpace;

#[derive(Clone, Debug, PartialEq)]
pub struct PrintedVector {
    pub label: &'static str,
    pub multiplier: &'static str,
    pub density: &'static str,
    pub flux: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservationCase {
    pub case: CaseId,
    pub f: &'static str,
    pub g: &'static str,
    pub params: &'static [&'static str],
    /// Parameter values the printed vectors are written for.
    pub printed_values: &'static [(&'static str, &'static str)],
    pub vectors: &'static [PrintedVector],
}

impl ConservationCase {
    pub fn pde(&self) -> PdeSpec {
        PdeSpec::new(parsed(self.f), parsed(self.g))
    }

    /// Positive samples for every parameter; `n` avoids `-1` and `0`.
    pub fn admissible(&self) -> ParamSpace {
        self.params
            .iter()
            .map(|p| (p.to_string(), vec![q(1, 2), q(2, 1), q(3, 1)]))
            .collect()
    }
}

pub(crate) fn parsed(s: &str) -> Expr {
    parse_expr(s).expect("printed conservation data parses").norm()
}

const fn vector(
    label: &'static str,
    multiplier: &'static str,
    density: &'static str,
    flux: &'static str,
) -> PrintedVector {
    PrintedVector {
        label,
        multiplier,
        density,
        flux,
    }
}

const CASES: &[ConservationCase] = &[
    ConservationCase {
        case: CaseId::Case1,
        f: "u",
        g: "u*(1-u)",
        params: &[],
        printed_values: &[],
        vectors: &[
            vector(
                "T1",
                "exp(-t)*besselI0(sqrt(2)*x)",
                "x*u*exp(-t)*besselI0(sqrt(2)*x)",
                "(sqrt(2)*x*u^2*exp(-t)*besselI1(sqrt(2)*x) - x*u*exp(-t)*besselI0(sqrt(2)*x)*u_x)/2",
            ),
            vector(
                "T2",
                "exp(-t)*besselK0(sqrt(2)*x)",
                "x*u*exp(-t)*besselK0(sqrt(2)*x)",
                "-(sqrt(2)*x*u^2*exp(-t)*besselK1(sqrt(2)*x) - x*u*exp(-t)*besselK0(sqrt(2)*x)*u_x)/2",
            ),
        ],
    },
    ConservationCase {
        case: CaseId::Case2,
        f: "a*u",
        g: "p*u^2",
        params: &["a", "p"],
        printed_values: &[("a", "1"), ("p", "1")],
        vectors: &[
            vector(
                "T1",
                "besselJ0(sqrt(2)*x)",
                "x*u*besselJ0(sqrt(2)*x)",
                "-(sqrt(2)*x*u^2*besselJ1(sqrt(2)*x))/2 - x*u*besselJ0(sqrt(2)*x)*u_x",
            ),
            vector(
                "T2",
                "besselY0(sqrt(2)*x)",
                "x*u*besselY0(sqrt(2)*x)",
                "-(sqrt(2)*x*u^2*besselY1(sqrt(2)*x))/2 - x*u*besselY0(sqrt(2)*x)*u_x",
            ),
        ],
    },
    ConservationCase {
        case: CaseId::Case3,
        f: "m*u^n",
        g: "p*u^q",
        params: &["m", "n", "p", "q"],
        printed_values: &[],
        vectors: &[
            vector(
                "T1",
                "exp(-p*q*u^(q-1)*t)",
                "x*exp(-p*q*u^(q-1)*t)",
                "-x*m*u^n*exp(-p*q*u^(q-1)*t)*u_x",
            ),
            vector(
                "T2",
                "exp(-p*q*u^(q-1)*t)*ln(x)",
                "x*u*exp(-p*q*u^(q-1)*t)*ln(x)",
                "-x*m*u^n*exp(-p*q*u^(q-1)*t)*ln(x)*u_x + exp(-p*q*u^(q-1)*t)*m*u^(n+1)/m",
            ),
        ],
    },
    ConservationCase {
        case: CaseId::Case4,
        f: "m*u^n",
        g: "u",
        params: &["m", "n"],
        printed_values: &[],
        vectors: &[
            vector("T1", "exp(-t)", "x*u*exp(-t)", "-x*exp(u)*exp(-t)*u_x"),
            vector("T2", "exp(-t)*ln(x)", "x*u*exp(-t)*ln(x)", "-x*exp(u)*exp(-t)*ln(x)*u_x + exp(x)"),
        ],
    },
    ConservationCase {
        case: CaseId::Case5,
        f: "u^(1/n)",
        g: "u",
        params: &["n"],
        printed_values: &[],
        vectors: &[
            vector("T1", "exp(-t)", "x*u*exp(-t)", "-x*u_x*exp(-t)*u^(1/n)"),
            vector(
                "T2",
                "exp(-t)*ln(x)",
                "x*u*exp(-t)*ln(x)",
                "-u^(1/n)*exp(-t)*(n/(n+1)*u - ln(x)*x*u_x)",
            ),
        ],
    },
];

pub fn conservation_cases() -> &'static [ConservationCase] {
    CASES
}

pub fn conservation_case(id: CaseId) -> Option<&'static ConservationCase> {
    CASES.iter().find(|c| c.case == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for c in CASES {
            c.pde();
            for v in c.vectors {
                for s in [v.multiplier, v.density, v.flux] {
                    parse_expr(s).unwrap_or_else(|e| panic!("{} {}: {e}", c.case, v.label));
                }
            }
        }
    }
}
