//! Expressions covering every node type of the language.

pub const CORPUS: &[&str] = &[
    "0",
    "-7/3",
    "0.25",
    "t",
    "x",
    "u",
    "u_t",
    "u_x",
    "u_xx",
    "u_xt",
    "u_tt",
    "u_xxx",
    "alpha",
    "F",
    "F'",
    "F''",
    "m*u^n + p*u^q",
    "a*u^(1/n) - c1*x",
    "(t + x)^3 - t*x^2",
    "-x^-2 + 2^-1",
    "2^3^2",
    "exp(-t)*u",
    "ln(x)*exp(-2*eps)",
    "sqrt(2)*x",
    "besselI0(sqrt(2)*x) + besselI1(x)",
    "besselK0(x)*besselK1(2*x)",
    "besselJ0(lambda*x) - besselJ1(x)/x",
    "besselY0(x)^2 + besselY1(3*x)",
    "f(u)*u_xx + f'(u)*u_x^2 + g(u)",
    "f''(u)*eta[0,0,0](t,x,u) + xi1[1,0,0](t,x,u)",
    "xi2[0,2,0](t,x,u) - 2*eta[0,1,1](t,x,u)",
    "F''*F^n + F'^2*n*F^(n - 1)/alpha",
    "exp(t)*(c1 + c2*ln(x))",
    "u*(1 - u)/(1 + u^2)",
];
