//! Printed reduction rows, transcribed into the expression language.
//!
//! `coeffs` locates the row's generator in the algebra basis of
//! [`super::algebra_basis`]; free list constants are fixed as printed
//! (`c` stays symbolic, the others are 1).

use super::CaseId;

#[derive(Clone, Debug, PartialEq)]
pub struct PrintedReduction {
    pub case: CaseId,
    pub label: &'static str,
    pub generator: &'static str,
    pub coeffs: &'static [&'static str],
    pub ode: &'static str,
    pub alpha: &'static str,
    pub phi: &'static str,
}

const fn row(
    case: CaseId,
    label: &'static str,
    generator: &'static str,
    coeffs: &'static [&'static str],
    ode: &'static str,
    alpha: &'static str,
    phi: &'static str,
) -> PrintedReduction {
    PrintedReduction {
        case,
        label,
        generator,
        coeffs,
        ode,
        alpha,
        phi,
    }
}

use CaseId::*;

const ROWS: &[PrintedReduction] = &[
    row(Principal, "X^1", "X1", &["1"], "F'' - F'/alpha + F/alpha", "x", "1"),
    row(Case1, "X^1", "X2", &["1", "0"], "alpha*F^2 - alpha*F*F'' - alpha*F'^2 - F*F'", "x", "exp(t)"),
    row(Case1, "X^2", "X1", &["0", "1"], "F*F' + alpha*F'^2 + alpha*F*F'' + alpha*F - alpha*F^2", "x", "1"),
    row(Case2, "X^1", "X1", &["1", "0"], "m*F'^2 + m*F*F'' + alpha*p*F^2", "x", "1"),
    row(Case2, "X^2", "X2", &["0", "1"], "alpha*p*F^2 + m*F*F'' + m*F'^2 - alpha*F", "x", "1/t"),
    row(
        Case3,
        "X^1",
        "X2",
        &["0", "1"],
        "4*alpha^(n/(2*(q-1)))*m*F^(n-1)*((q+2*n+1)*(q-1)*F*F'*alpha^(q/(q-1))*alpha^(-1/(2*(q-1))) \
         + alpha^(2*q/(q-1))*(q-1)^2*(F'^2*n + F''*F)*alpha^(-3/(2*(q-1))) + alpha^(1/(2*(q-1)))*(n+1)*F^2)",
        "t*x^(2*(q-1)/(n+1))",
        "x^(2/(n+1))",
    ),
    row(
        Case3,
        "X^2",
        "c X1 + X2",
        &["c", "1"],
        "4*m*F^(n-1)*(alpha^2*F*(q-1)^2*F'' + n*alpha^2*(q-1)^2*F'^2 + (q+2*n+1)*alpha*(q-1)*F*F' + F^2*(n+1))",
        "(2*q*t + c - 2*t)/(2*(q-1))*x^(2*(q-1)/(n+1))",
        "x^(2/(n+1))",
    ),
    row(Case3, "X^3", "X1", &["1", "0"], "m*F^n*F' + alpha*m*n*F^(n-1)*F'^2 - alpha*m*F^n*F'' - alpha*p*F^q", "x", "1"),
    row(
        Case4,
        "X^1",
        "X1 + X2",
        &["1", "1", "0"],
        "n^2*F^n*F'' - F'*(4*n^2*F^n + 4*n*F^n + n^2) + (n^2 + 4*n*F^n)*F + 4*F^(n+1) - n^3*F'^2*F^(n-1)",
        "-ln(x) + t",
        "x^(2/n)",
    ),
    row(
        Case4,
        "X^2",
        "X1",
        &["1", "0", "0"],
        "F^n*F' - alpha*n*F^(n-1)*F'^2 - alpha*F^n*F'' - alpha*F",
        "(2*q*t + c - 2*t)/(2*(q-1))*x^(2*(q-1)/(n+1))",
        "x^(2/(n+1))",
    ),
    row(
        Case4,
        "X^3",
        "X2 + X3",
        &["0", "1", "1"],
        "F^n*F'' + (n^3*F'^2 - 4*n*(n+1)*F*F' + 4*(n+1)*F^2)/n^2 + F^(n-1) - n*F'",
        "(exp(n*t) - n*ln(x))/n",
        "n^(-1/n)*exp(t)",
    ),
    row(Case4, "X^4", "X3", &["0", "0", "1"], "alpha*F^n*F'' + F^n*F' + alpha*n*F^(n-1)*F'^2", "x", "exp(-t)"),
    row(
        Case5,
        "X^1",
        "X1 + X3",
        &["1", "0", "1"],
        "(n*F'' + F'^2*F^(-1) - 4*n*(1+n)*F' + 4*n^2*(1+n)*F)*F^(1/n) + n*(F - F')",
        "-ln(x) + t",
        "x^(2*n)",
    ),
    row(
        Case5,
        "X^2",
        "X1",
        &["1", "0", "0"],
        "n*F^(1/n)*F' - alpha*F^((1-n)/n)*F'^2 - alpha*n*F^(1/n)*F'' - alpha*n*F",
        "x",
        "1",
    ),
    row(
        Case5,
        "X^3",
        "X2 + X3",
        &["0", "1", "1"],
        "n^n*exp(-alpha*(1-2*n))*((n*F'' + F'^2*F^(-1) - 4*n*(1+n)*F' + 4*n^2*F*(1+n))*F^(1/n) - F')",
        "exp(t/n)*n - ln(x)",
        "x^(2*n)*exp(t)*n^n",
    ),
    row(Case5, "X^4", "X3", &["0", "0", "1"], "4*n^2*F*F^(1/n) + 4*n*F*F^(1/n) - F' + F", "t", "x^(2*n)"),
    row(
        Case6,
        "X^1",
        "X2",
        &["0", "1"],
        "alpha^(-m*n/(2*m-2))*((((n+1)*m-1)^2*(F' - F^(1/m)) - 4*m*(n+1)*F^n*F^2)*alpha^(-1/(2*m-2))*alpha^(-m/(2*m-2)) \
         + (alpha^(-5/(2*m-2))*alpha^(3*m/(2*m-2))*(m-1)*(n*F'^2 + F*F'')*F^(-1) \
         - 2*F'*alpha^(m/(2*m-2))*alpha^(-3/(2*m-2))*(1/2 + (n+1/2)*m))*(m-1)*F^n)",
        "t*x^(-2*(m-1)/(m*n+m-1))",
        "x^(2*m/(m*n+m-1))",
    ),
    row(
        Case6,
        "X^2",
        "X1 + X2",
        &["1", "1"],
        "((n+1)*m-1)^2*F^(1/m) + 4*F^n*alpha^2*(m-1)^2*F'' + 4*F^(n-1)*n*alpha^2*(m-1)^2*F'^2 \
         - 8*alpha*(m-1)*(1/2 + (n+1/2)*m)*F^n*F' - ((n+1)*m-1)^2*F' + F^n*F*m^2*(n+1)",
        "(2*m*t - 2*t + 1)*x^(-2*(m-1)/(m*n+m-1))/(2*(m-1))",
        "x^(2*m/(m*n+m-1))",
    ),
    row(Case6, "X^3", "X1", &["1", "0"], "F^5*F' + 5*alpha*F^4*F'^2 + alpha*F^5*F'' + alpha*F^(1/m)", "t", "1"),
];

pub fn printed_reductions() -> &'static [PrintedReduction] {
    ROWS
}

/// Table number of the printed reductions for `id`.
pub fn reduction_table_number(id: CaseId) -> u8 {
    match id {
        Principal => 6,
        Case1 | Case2 | Case3 => 7,
        Case4 => 8,
        Case5 => 9,
        Case6 => 10,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expr;

    #[test]
    fn every_row_parses() {
        for r in ROWS {
            for s in [r.ode, r.alpha, r.phi].iter().chain(r.coeffs) {
                parse_expr(s).unwrap_or_else(|e| panic!("{} {}: {e}", r.case, r.label));
            }
        }
        assert_eq!(ROWS.len(), 19);
    }
}
