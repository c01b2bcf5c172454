//! Sub-staircase diagrams and the Artin monomial bases of the coinvariant
//! rings of `G(m,p,n)`.
//!
//! A diagram is an exponent vector `(a_1, ..., a_n)`: row `i` has `a_i`
//! cells and stands for the monomial `x_1^{a_1} ⋯ x_n^{a_n}`.

use std::collections::BTreeSet;

use crate::qseries::{q_integer, QPoly};
use crate::{Error, Result};

fn check_params(m: u32, p: u32, n: u32) -> Result<()> {
    if m == 0 || p == 0 || n == 0 || !m.is_multiple_of(p) {
        return Err(Error::InvalidGroup { m, p, n, reason: "need positive parameters with p | m".into() });
    }
    Ok(())
}

/// `a_i < i·m` for every row (rows numbered from 1).
pub fn is_staircase(a: &[u32], m: u32) -> bool {
    a.iter().enumerate().all(|(i, &x)| x < (i as u32 + 1) * m)
}

/// Membership in the Artin basis of type `G(m,p,n)`: for some pivot row `j`,
/// rows above are staircase, row `j` is shorter than `m/p`, and each row
/// `i` below satisfies `0 <= a_i - m/p < (i-1)m`.
pub fn is_artin(a: &[u32], m: u32, p: u32) -> bool {
    let q = m / p;
    (0..a.len()).any(|j| {
        a[..j].iter().enumerate().all(|(i, &x)| x < (i as u32 + 1) * m)
            && a[j] < q
            && a[j + 1..].iter().enumerate().all(|(off, &x)| {
                let i = (j + off + 1) as u32; // 0-based row index
                x >= q && x - q < i * m
            })
    })
}

/// The `p`-contraction: with `i*` the last row shorter than `m`, the first
/// `min(a_ℓ, m)` cells of each row `ℓ >= i*` shrink to
/// `floor(min(a_ℓ, m) / p)` cells; everything else is kept.
pub fn p_contract(a: &[u32], m: u32, p: u32) -> Result<Vec<u32>> {
    let Some(start) = a.iter().rposition(|&x| x < m) else {
        return Err(Error::Unsupported("every row has at least m cells".into()));
    };
    let mut out = a.to_vec();
    for x in &mut out[start..] {
        let w = (*x).min(m);
        *x = w / p + (*x - w);
    }
    Ok(out)
}

/// Hook-freeness: for no `j` is `a_j >= m/p + (j-1)m` with `a_i >= m/p` for
/// every `i > j`.
pub fn is_hook_free(a: &[u32], m: u32, p: u32) -> bool {
    let q = m / p;
    !(0..a.len()).any(|j| a[j] >= q + j as u32 * m && a[j + 1..].iter().all(|&x| x >= q))
}

/// Every exponent vector in the box `a_i < i·m`, lexicographically sorted.
pub fn staircase_diagrams(m: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for i in 1..=n {
        let mut next = Vec::with_capacity(out.len() * (i * m) as usize);
        for prefix in &out {
            for x in 0..i * m {
                let mut v = prefix.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The Artin basis of type `G(m,p,n)` as lexicographically sorted exponent vectors.
pub fn enumerate_artin(m: u32, p: u32, n: u32) -> Result<Vec<Vec<u32>>> {
    check_params(m, p, n)?;
    Ok(staircase_diagrams(m, n).into_iter().filter(|a| is_artin(a, m, p)).collect())
}

/// `[m]_q [2m]_q ⋯ [(n-1)m]_q [nm/p]_q`.
pub fn artin_hilbert(m: u32, p: u32, n: u32) -> Result<QPoly> {
    check_params(m, p, n)?;
    let mut acc = q_integer(n * m / p);
    for i in 1..n {
        acc = &acc * &q_integer(i * m);
    }
    Ok(acc)
}

/// `Σ q^{|a|}` over a set of diagrams.
pub fn generating_polynomial<'a, I: IntoIterator<Item = &'a Vec<u32>>>(diagrams: I) -> QPoly {
    let mut acc = QPoly::zero();
    for a in diagrams {
        acc = &acc + &QPoly::monomial(1, a.iter().sum());
    }
    acc
}

/// The Artin basis rebuilt from the recursion on `n`: diagrams whose last
/// row is shorter than `m/p` over a staircase top, plus every diagram of
/// rank `n-1` extended by a last row of length `m/p ..= (n-1)m + m/p - 1`.
pub fn artin_recursive(m: u32, p: u32, n: u32) -> Result<BTreeSet<Vec<u32>>> {
    check_params(m, p, n)?;
    let q = m / p;
    if n == 1 {
        return Ok((0..q).map(|x| vec![x]).collect());
    }
    let mut out = BTreeSet::new();
    for top in staircase_diagrams(m, n - 1) {
        for x in 0..q {
            let mut v = top.clone();
            v.push(x);
            out.insert(v);
        }
    }
    for smaller in artin_recursive(m, p, n - 1)? {
        for j in q..(n - 1) * m + q {
            let mut v = smaller.clone();
            v.push(j);
            out.insert(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_examples() {
        assert_eq!(p_contract(&[1, 4, 3, 15, 6], 4, 2).unwrap(), vec![1, 4, 1, 13, 4]);
        assert_eq!(p_contract(&[1, 3], 2, 2).unwrap(), vec![0, 2]);
        assert_eq!(p_contract(&[1, 7, 2], 4, 1).unwrap(), vec![1, 7, 2]);
    }

    #[test]
    fn dihedral_artin_basis() {
        for m in 1..6 {
            let got = enumerate_artin(m, m, 2).unwrap();
            let mut expected: Vec<Vec<u32>> = (0..m).map(|a| vec![a, 0]).collect();
            expected.extend((1..=m).map(|b| vec![0, b]));
            expected.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn counts_and_series() {
        assert_eq!(enumerate_artin(2, 1, 2).unwrap().len(), 8);
        assert_eq!(enumerate_artin(4, 2, 3).unwrap().len(), 192);
        assert_eq!(artin_hilbert(2, 1, 2).unwrap(), QPoly::from_coeffs([1, 2, 2, 2, 1]));
        assert_eq!(artin_hilbert(1, 1, 4).unwrap(), crate::qseries::q_factorial(4));
        assert!(enumerate_artin(4, 3, 2).is_err());
    }

    #[test]
    fn hooks() {
        assert!(!is_hook_free(&[2, 2, 2], 4, 2));
        assert!(is_hook_free(&[0, 0, 0], 4, 2));
        let hook_free: Vec<_> =
            staircase_diagrams(4, 3).into_iter().filter(|a| is_hook_free(a, 4, 2)).collect();
        assert_eq!(hook_free, enumerate_artin(4, 2, 3).unwrap());
    }
}
