//! Invariant data of `G(m,p,n)` on the grid `m ≤ 4`, `p | m`, `n ≤ 4`.

use num_traits::One;

use supercoinv::groups::{build_group, group_matrices, validate_covandermondian, validate_jacobian, x_degree, GroupSpec};
use supercoinv::superpoly::{monomial_basis, SuperPoly};
use supercoinv::Rational;

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

fn sign_scale(f: &SuperPoly, s: i8) -> SuperPoly {
    f.scale(&Rational::from_integer(s.into()))
}

/// Reflecting hyperplanes counted from the group elements: a real
/// reflection is an element whose matrix differs from the identity by a
/// rank-one matrix, and each hyperplane carries exactly one.
fn hyperplanes_by_enumeration(spec: &GroupSpec) -> usize {
    let n = spec.nvars();
    group_matrices(spec)
        .unwrap()
        .iter()
        .filter(|g| {
            let a = g.matrix();
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|r| (0..n).map(|c| a[r][c] as i64 - (r == c) as i64).collect())
                .collect();
            let nonzero: Vec<&Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
            !nonzero.is_empty()
                && nonzero.iter().all(|r| {
                    let s = nonzero[0];
                    (0..n).all(|i| (0..n).all(|j| r[i] * s[j] == r[j] * s[i]))
                })
        })
        .count()
}

#[test]
fn degrees_exponents_and_hyperplanes() {
    for (m, p, n) in grid() {
        let gd = build_group(m, p, n).unwrap();
        let s = &gd.spec;
        let exponent_sum: u32 = s.degrees.iter().map(|d| d - 1).sum();
        assert_eq!(s.deg_vandermondian, exponent_sum, "{s}");
        assert_eq!(x_degree(&gd.vandermondian), Some(s.deg_vandermondian), "{s}");
        let degree_product: u64 = s.degrees.iter().map(|&d| d as u64).product();
        assert_eq!(num_bigint::BigInt::from(degree_product), s.order, "{s}");

        let (m, p, n) = (s.m, s.p, s.n);
        let rotations = if m / p > 1 { n } else { 0 };
        assert_eq!(s.coexponents.iter().sum::<u32>(), m * n * (n - 1) / 2 + rotations, "{s}");
        assert_eq!(x_degree(&gd.covandermondian), Some(s.coexponents.iter().sum()), "{s}");
        if m <= 2 {
            assert_eq!(hyperplanes_by_enumeration(s), s.hyperplane_count() as usize, "{s}");
        }
    }
}

#[test]
fn jacobian_and_covandermondian_validate() {
    for (m, p, n) in grid() {
        let gd = build_group(m, p, n).unwrap();
        assert!(validate_jacobian(&gd), "{}", gd.spec);
        assert!(validate_covandermondian(&gd), "{}", gd.spec);
    }
}

#[test]
fn real_groups_fix_invariants_and_scale_vandermondians() {
    for (m, p, n) in grid().into_iter().filter(|&(m, _, _)| m <= 2) {
        let gd = build_group(m, p, n).unwrap();
        let elements = group_matrices(&gd.spec).unwrap();
        assert_eq!(num_bigint::BigInt::from(elements.len()), gd.spec.order);
        for g in &elements {
            for f in &gd.basic_invariants {
                assert_eq!(&g.act(f), f, "{} fixes {f}", gd.spec);
            }
            let det = g.determinant();
            assert_eq!(g.act(&gd.vandermondian), sign_scale(&gd.vandermondian, det), "{}", gd.spec);
            assert_eq!(g.act(&gd.covandermondian), sign_scale(&gd.covandermondian, det), "{}", gd.spec);
        }
    }
}

#[test]
fn generalized_derivatives_shift_bidegree() {
    for (m, p, n) in grid() {
        let gd = build_group(m, p, n).unwrap();
        let nv = gd.nvars();
        assert_eq!(gd.ext_derivatives.len() as u32, gd.spec.rank);
        for (d, &e) in gd.ext_derivatives.iter().zip(&gd.spec.coexponents) {
            assert_eq!(d.bidegree_shift(), Some((-(e as i64), 1)), "{}", gd.spec);
            for k in 0..nv as u32 {
                for mono in monomial_basis(nv, e + 2, k) {
                    let image = d.apply(&SuperPoly::from_monomial(mono.clone(), Rational::one()));
                    assert!(image.is_zero() || image.bidegree() == Some((2, k + 1)), "{} on {mono:?}", gd.spec);
                }
            }
        }
        if gd.spec.coexponents.first() == Some(&1) {
            assert_eq!(gd.ext_derivatives[0], gd.exterior_d, "{}", gd.spec);
        }
    }
}
