//! Integer polynomials in one or two variables and the q-combinatorics used
//! for Hilbert series: q-integers, q-factorials and q-Stirling numbers of
//! types A and B.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Sparse polynomial in one variable with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::monomial(1, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: u32) -> Self {
        let mut p = QPoly::zero();
        p.add_term(e, c.into());
        p
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^i`.
    pub fn from_coeffs<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut p = QPoly::zero();
        for (e, c) in coeffs.into_iter().enumerate() {
            p.add_term(e as u32, c.into());
        }
        p
    }

    fn add_term(&mut self, e: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Highest exponent with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn eval(&self, q: i64) -> BigInt {
        let q = BigInt::from(q);
        let mut acc = BigInt::zero();
        let mut last = self.degree().unwrap_or(0);
        for (&e, c) in self.coeffs.iter().rev() {
            acc *= num_traits::pow(q.clone(), (last - e) as usize);
            acc += c;
            last = e;
        }
        acc * num_traits::pow(q, last as usize)
    }

    /// Substitute `q -> q^s`.
    pub fn dilate(&self, s: u32) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * s, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renders with the given variable name, highest degree first,
    /// e.g. `z^2 + 6*z + 6`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let var_part = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if var_part.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&var_part);
            } else {
                out.push_str(&format!("{mag}*{var_part}"));
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("q"))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (&a, c) in &self.coeffs {
            for (&b, d) in &rhs.coeffs {
                out.add_term(a + b, c * d);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Which q-Stirling recursion and Hilbert series formula to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Symmetric groups.
    A,
    /// Hyperoctahedral groups.
    B,
}

/// `[k]_q = 1 + q + ... + q^{k-1}`; zero for `k = 0`.
pub fn q_integer(k: u32) -> QPoly {
    QPoly::from_coeffs(std::iter::repeat_n(1, k as usize))
}

/// `[k]_q! = [1]_q [2]_q ... [k]_q`.
pub fn q_factorial(k: u32) -> QPoly {
    (1..=k).fold(QPoly::one(), |acc, i| &acc * &q_integer(i))
}

/// Table `t[n][k]` of a Stirling-type recursion
/// `S(n,k) = S(n-1,k-1) + w(k) S(n-1,k)` with `S(0,k) = δ_{k,0}`.
fn stirling_table(n: u32, weight: impl Fn(u32) -> QPoly) -> Vec<Vec<QPoly>> {
    let n = n as usize;
    let mut t = vec![vec![QPoly::zero(); n + 1]; n + 1];
    t[0][0] = QPoly::one();
    for row in 1..=n {
        for k in 0..=row {
            let mut v = if k > 0 { t[row - 1][k - 1].clone() } else { QPoly::zero() };
            if k < row {
                v = &v + &(&weight(k as u32) * &t[row - 1][k]);
            }
            t[row][k] = v;
        }
    }
    t
}

/// Type A q-Stirling number: `Stir(n,k) = Stir(n-1,k-1) + [k]_q Stir(n-1,k)`
/// with `Stir(1,k) = δ_{k,1}`. Zero for `k <= 0` or `k > n`.
pub fn q_stirling_a(n: u32, k: i64) -> QPoly {
    if k <= 0 || k > n as i64 || n == 0 {
        return QPoly::zero();
    }
    stirling_table(n, q_integer)[n as usize][k as usize].clone()
}

/// Type B q-Stirling number: `Stir(n,k) = Stir(n-1,k-1) + [2k+1]_q Stir(n-1,k)`
/// with `Stir(0,k) = δ_{k,0}`. Zero for `k < 0` or `k > n`.
pub fn q_stirling_b(n: u32, k: i64) -> QPoly {
    if k < 0 || k > n as i64 {
        return QPoly::zero();
    }
    stirling_table(n, |k| q_integer(2 * k + 1))[n as usize][k as usize].clone()
}

/// Conjectured Hilbert series of the `θ`-degree `k` part of the super
/// coinvariant ring of `S_n` (family A) or `B_n` (family B).
///
/// Returns zero outside `0 <= k <= n-1` (A) or `0 <= k <= n` (B).
pub fn zabrocki_hilbert(n: u32, k: i64, family: Family) -> QPoly {
    let top = match family {
        Family::A => n as i64 - 1,
        Family::B => n as i64,
    };
    if n == 0 || k < 0 || k > top {
        return QPoly::zero();
    }
    let r = n - k as u32;
    match family {
        Family::A => &q_factorial(r) * &q_stirling_a(n, r as i64),
        Family::B => {
            let f = q_factorial(r).dilate(2);
            let two = q_integer(2).pow(r);
            &(&f * &two) * &q_stirling_b(n, r as i64)
        }
    }
}

/// `Σ_k (-q^j)^k · zabrocki_hilbert(n,k,family)`; equals 1 when `j = 1`.
pub fn alternating_sum_check(n: u32, family: Family, j: u32) -> QPoly {
    let top = match family {
        Family::A => n.saturating_sub(1),
        Family::B => n,
    };
    let mut acc = QPoly::zero();
    for k in 0..=top {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let w = QPoly::monomial(sign, j * k);
        acc = &acc + &(&w * &zabrocki_hilbert(n, k as i64, family));
    }
    acc
}

/// Sparse polynomial in `q` and `z` with integer coefficients, keyed by
/// `(q exponent, z exponent)`. Bigraded Hilbert series use `q` for the
/// `x`-degree and `z` for the `θ`-degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QZPoly {
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl QZPoly {
    pub fn zero() -> Self {
        QZPoly::default()
    }

    /// Builds the series `Σ dim · q^i z^k` from `(i, k, dim)` triples.
    pub fn from_dims<I: IntoIterator<Item = (u32, u32, u64)>>(dims: I) -> Self {
        let mut p = QZPoly::zero();
        for (i, k, d) in dims {
            p.add_term(i, k, BigInt::from(d));
        }
        p
    }

    pub fn add_term(&mut self, qe: u32, ze: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((qe, ze)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(qe, ze));
        }
    }

    pub fn coeff(&self, qe: u32, ze: u32) -> BigInt {
        self.coeffs.get(&(qe, ze)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Polynomial in `z` obtained by setting `q` to a value.
    pub fn at_q(&self, q: i64) -> QPoly {
        let qb = BigInt::from(q);
        let mut out = QPoly::zero();
        for (&(a, b), c) in &self.coeffs {
            out.add_term(b, c * num_traits::pow(qb.clone(), a as usize));
        }
        out
    }

    /// Polynomial in `q` obtained by setting `z` to a value.
    pub fn at_z(&self, z: i64) -> QPoly {
        self.substitute_z(z, 0)
    }

    /// Polynomial in `q` obtained by substituting `z -> c·q^j`.
    pub fn substitute_z(&self, c: i64, j: u32) -> QPoly {
        let cb = BigInt::from(c);
        let mut out = QPoly::zero();
        for (&(a, b), v) in &self.coeffs {
            out.add_term(a + j * b, v * num_traits::pow(cb.clone(), b as usize));
        }
        out
    }

    /// The coefficient of `z^k`, as a polynomial in `q`.
    pub fn z_slice(&self, k: u32) -> QPoly {
        let mut out = QPoly::zero();
        for (&(a, b), v) in &self.coeffs {
            if b == k {
                out.add_term(a, v.clone());
            }
        }
        out
    }
}

impl fmt::Display for QZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        // Highest z-degree first, then highest q-degree.
        let mut keys: Vec<_> = self.coeffs.iter().collect();
        keys.sort_by_key(|&(&(q, z), _)| std::cmp::Reverse((z, q)));
        for (&(a, b), c) in keys {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts = Vec::new();
            let mag = c.abs();
            let has_var = a > 0 || b > 0;
            if !mag.is_one() || !has_var {
                parts.push(mag.to_string());
            }
            for (v, e) in [("q", a), ("z", b)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
