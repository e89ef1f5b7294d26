use fisher_lie::catalogue::CaseId;
use fisher_lie::optimal::{check_witness, optimal_representative, random_coefficients, random_params, sample_rng};

fn sweep(case: CaseId, n: usize) -> (usize, usize) {
    let mut off_branch = 0;
    let mut unlisted = 0;
    for i in 0..n {
        let mut rng = sample_rng(42, i);
        let params = random_params(&mut rng, case);
        let dim = fisher_lie::catalogue::algebra_basis(case).len();
        let a = random_coefficients(&mut rng, dim);
        let r = optimal_representative(case, &a, &params).unwrap();
        let c = check_witness(&r, &params).unwrap();
        assert!(c.exact && c.max_abs_error < 1e-9, "{case} {a:?} {params:?}: {c:?}");
        off_branch += usize::from(!r.in_printed_branch());
        unlisted += usize::from(r.listed.is_none());
    }
    (off_branch, unlisted)
}

#[test]
fn two_dimensional_cases_always_land_in_the_printed_branch() {
    for case in [CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case6] {
        assert_eq!(sweep(case, 300), (0, 0), "{case}");
    }
}

#[test]
fn three_dimensional_witnesses_verify() {
    for case in [CaseId::Case4, CaseId::Case5] {
        let (off, unlisted) = sweep(case, 300);
        eprintln!("{case}: {off} off-branch, {unlisted} unlisted of 300");
        assert!(off > 0 && unlisted > 0);
    }
}
