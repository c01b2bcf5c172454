//! Artin bases on the grid `m ≤ 4`, `p | m`, `n ≤ 4`.

use std::collections::BTreeMap;

use supercoinv::artin::{
    artin_hilbert, artin_recursive, enumerate_artin, generating_polynomial, is_artin, is_hook_free, p_contract,
    staircase_diagrams,
};
use supercoinv::groups::GroupSpec;

fn grid() -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for m in 1..=4 {
        for p in (1..=m).filter(|p| m % p == 0) {
            for n in 1..=4 {
                out.push((m, p, n));
            }
        }
    }
    out
}

#[test]
fn contraction_fibers_have_size_p() {
    for (m, p, n) in grid() {
        let basis = enumerate_artin(m, p, n).unwrap();
        let mut fibers: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for a in enumerate_artin(m, 1, n).unwrap() {
            *fibers.entry(p_contract(&a, m, p).unwrap()).or_default() += 1;
        }
        let image: Vec<Vec<u32>> = fibers.keys().cloned().collect();
        assert_eq!(image, basis, "image of the contraction for ({m},{p},{n})");
        assert!(fibers.values().all(|&c| c == p as usize), "fiber sizes for ({m},{p},{n}): {fibers:?}");
    }
}

#[test]
fn hook_freeness_characterises_the_basis() {
    for (m, p, n) in grid() {
        for a in staircase_diagrams(m, n) {
            assert_eq!(is_hook_free(&a, m, p), is_artin(&a, m, p), "{a:?} for ({m},{p},{n})");
        }
    }
}

#[test]
fn recursion_rebuilds_the_basis() {
    for (m, p, n) in grid() {
        let rec: Vec<Vec<u32>> = artin_recursive(m, p, n).unwrap().into_iter().collect();
        assert_eq!(rec, enumerate_artin(m, p, n).unwrap(), "({m},{p},{n})");
    }
}

#[test]
fn generating_polynomial_is_the_product_formula() {
    for (m, p, n) in grid() {
        let basis = enumerate_artin(m, p, n).unwrap();
        let order = GroupSpec::new(m, p, n).map(|s| s.order).unwrap_or_default();
        if n > 1 {
            assert_eq!(num_bigint::BigInt::from(basis.len()), order, "({m},{p},{n})");
        }
        assert_eq!(generating_polynomial(&basis), artin_hilbert(m, p, n).unwrap(), "({m},{p},{n})");
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(enumerate_artin(4, 3, 2).is_err());
    assert!(artin_hilbert(0, 1, 2).is_err());
}
