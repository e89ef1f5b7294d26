use std::collections::BTreeMap;

use fisher_lie::catalogue::{algebra_basis, pde, CaseId};
use fisher_lie::expr::{u, Expr, Symbol};
use fisher_lie::jet::PdeSpec;
use fisher_lie::numeric::roundtrip::*;
use fisher_lie::reduction::{invariants_for, reduce, ReducedOde};
use fisher_lie::symmetry::VectorField;

fn reduced(p: &PdeSpec, id: CaseId, coeffs: &[i64]) -> ReducedOde {
    let c: Vec<Expr> = coeffs.iter().map(|&k| Expr::int(k)).collect();
    let v = VectorField::combination(&c, &algebra_basis(id));
    reduce(p, &invariants_for(&v).unwrap()).unwrap()
}

fn run(p: &PdeSpec, ode: &ReducedOde, lhs: &Expr, domain: &str, f0: f64, fp0: f64, step: f64) -> RoundTripReport {
    let cfg = RoundTripConfig { step, grid: 50 };
    ode_roundtrip_check(p, &ode.ansatz, lhs, &Domain::parse(domain).unwrap(), f0, fp0, &BTreeMap::new(), &cfg)
        .unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn case1_steady_reduction_round_trips() {
    let p = pde(CaseId::Case1);
    let ode = reduced(&p, CaseId::Case1, &[0, 1]);
    let r = run(&p, &ode, &ode.lhs, "t=0:1,x=0.5:2", 0.9, 0.0, 1e-3);
    eprintln!("{r:?}");
    assert!(r.max_residual < 1e-6);
}

#[test]
fn case1_decay_reduction_round_trips() {
    let p = pde(CaseId::Case1);
    let ode = reduced(&p, CaseId::Case1, &[1, 0]);
    let r = run(&p, &ode, &ode.lhs, "t=0:0.5,x=0.5:2", 0.5, 0.0, 1e-3);
    eprintln!("{r:?}");
    assert!(r.max_residual < 1e-6);
}

#[test]
fn principal_reduction_round_trips_once_specialized() {
    let (p, b) = specialize(&pde(CaseId::Principal), &(1 + u().powi(2)), &(u() * (1 - u())));
    let ode = reduced(&pde(CaseId::Principal), CaseId::Principal, &[1]);
    let lhs = ode.lhs.subst(&b).norm();
    let r = run(&p, &ode, &lhs, "t=0:1,x=0.5:2", 0.5, 0.1, 1e-3);
    eprintln!("{r:?}");
    assert!(r.max_residual < 1e-6);
}

#[test]
fn perturbed_ode_fails_the_round_trip() {
    let p = pde(CaseId::Case1);
    let ode = reduced(&p, CaseId::Case1, &[1, 0]);
    let bad = perturbed(&ode.lhs, 0.1);
    let r = run(&p, &ode, &bad, "t=0:0.5,x=0.5:2", 0.5, 0.0, 1e-3);
    eprintln!("{r:?}");
    assert!(r.max_residual > 1e-3);
}

#[test]
fn constant_solves_the_source_free_steady_equation() {
    let p = PdeSpec::new(u(), Expr::zero());
    let ode = reduced(&p, CaseId::Case1, &[0, 1]);
    let r = run(&p, &ode, &ode.lhs, "t=0:1,x=0.5:2", 0.7, 0.0, 1e-3);
    assert_eq!(r.max_residual, 0.0);
}

#[test]
fn halving_the_step_shrinks_the_defect() {
    let p = pde(CaseId::Case1);
    let ode = reduced(&p, CaseId::Case1, &[1, 0]);
    let defects: Vec<f64> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| run(&p, &ode, &ode.lhs, "t=0:0.5,x=0.5:2", 0.5, 0.0, h).max_residual)
        .collect();
    eprintln!("{defects:?}");
    for w in defects.windows(2) {
        assert!(w[0] / w[1] >= 8.0 || w[1] < 1e-11, "{defects:?}");
    }
}

#[test]
fn errors() {
    let p = pde(CaseId::Case1);
    let ode = reduced(&p, CaseId::Case1, &[0, 1]);
    let d = Domain::parse("t=0:1,x=0.5:2").unwrap();
    let cfg = RoundTripConfig::default();
    let none = BTreeMap::new();
    // F'' has coefficient F, so F0 = 0 is singular
    assert!(matches!(
        ode_roundtrip_check(&p, &ode.ansatz, &ode.lhs, &d, 0.0, 0.0, &none, &cfg),
        Err(RoundTripError::LeadingCoefficientVanishes(_))
    ));
    assert!(Domain::parse("t=0:1,x=-1:1").is_err());
    assert!(Domain::parse("t=0:1").is_err());
    let abs = pde(CaseId::Principal);
    assert_eq!(
        ode_roundtrip_check(&abs, &ode.ansatz, &ode.lhs, &d, 0.5, 0.0, &none, &cfg),
        Err(RoundTripError::AbstractPde)
    );
    let blow = Expr::Sym(Symbol::F(2)) - Expr::Sym(Symbol::F(0)).powi(3) * 1000;
    assert!(matches!(
        ode_roundtrip_check(&p, &ode.ansatz, &blow, &d, 1.0, 0.0, &none, &cfg),
        Err(RoundTripError::BlowUp(_))
    ));
}
