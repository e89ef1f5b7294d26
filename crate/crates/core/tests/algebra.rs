use fisher_lie::catalogue::{algebra_basis, printed_brackets, printed_table, CaseId};
use fisher_lie::lie::{adjoint_map, adjoint_table, is_automorphism, structure_constants, epsilon};
use fisher_lie::linalg::{identity, mat_add, mat_is_zero, mat_mul, mat_scale};
use fisher_lie::expr::Expr;

#[test]
fn brackets_match_the_printed_commutators() {
    for id in CaseId::SPECIAL {
        let alg = structure_constants(&algebra_basis(id)).unwrap();
        let got = alg.nonzero_brackets();
        let want = printed_brackets(id);
        assert_eq!(got.len(), want.len(), "{id}");
        for ((i, j, c), (pi, pj, pc)) in got.iter().zip(&want) {
            assert_eq!((i, j), (pi, pj), "{id}");
            for (a, b) in c.iter().zip(pc) {
                assert!((a - b).is_zero(), "{id}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn tables_match_entry_for_entry() {
    for id in CaseId::SPECIAL {
        let alg = structure_constants(&algebra_basis(id)).unwrap();
        let tab = adjoint_table(&alg).unwrap();
        let Some(want) = printed_table(id) else { continue };
        for i in 0..tab.len() {
            for j in 0..tab.len() {
                for k in 0..tab.len() {
                    assert!((&tab[i][j][k] - &want[i][j][k]).is_zero(), "{id} [{i}][{j}][{k}]: {} vs {}", tab[i][j][k], want[i][j][k]);
                }
            }
        }
    }
}

#[test]
fn adjoint_maps_are_invertible_automorphisms() {
    let eps = epsilon();
    for id in CaseId::SPECIAL {
        let alg = structure_constants(&algebra_basis(id)).unwrap();
        let n = alg.dim();
        for i in 0..n {
            let a = adjoint_map(&alg, i, &eps).unwrap();
            assert!(is_automorphism(&alg, &a), "{id} X{}", i + 1);
            let b = adjoint_map(&alg, i, &-eps.clone()).unwrap();
            let d = mat_add(&mat_mul(&a.matrix, &b.matrix), &mat_scale(&identity(n), &Expr::int(-1)));
            assert!(mat_is_zero(&d), "{id} X{}", i + 1);
        }
    }
}
