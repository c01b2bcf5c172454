use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{SuperMonomial, ThetaSet};
use crate::{Error, Rational, Result};

/// Sparse element of `ℚ[x_1..x_n, θ_1..θ_n]`. Indices in the API are 0-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperPoly {
    nvars: usize,
    terms: BTreeMap<SuperMonomial, Rational>,
}

impl SuperPoly {
    pub fn zero(nvars: usize) -> Self {
        SuperPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        SuperPoly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        SuperPoly::from_monomial(SuperMonomial::one(nvars), c)
    }

    pub fn from_monomial(m: SuperMonomial, c: Rational) -> Self {
        let mut p = SuperPoly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    /// The variable `x_i`.
    pub fn x(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        SuperPoly::from_monomial(SuperMonomial::new(e, ThetaSet::EMPTY), Rational::one())
    }

    /// The odd variable `θ_i`.
    pub fn theta(nvars: usize, i: usize) -> Self {
        SuperPoly::from_monomial(
            SuperMonomial::new(vec![0; nvars], ThetaSet::singleton(i)),
            Rational::one(),
        )
    }

    /// `x^xexp` with coefficient 1.
    pub fn x_monomial(xexp: Vec<u32>) -> Self {
        SuperPoly::from_monomial(SuperMonomial::new(xexp, ThetaSet::EMPTY), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (SuperMonomial, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = SuperPoly::zero(nvars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<SuperMonomial, Rational> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &SuperMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_coeff(&self) -> Rational {
        self.coeff(&SuperMonomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: SuperMonomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero(self.nvars);
        }
        SuperPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product with Koszul signs; errors on mismatched variable counts.
    pub fn multiply(&self, other: &SuperPoly) -> Result<SuperPoly> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        let mut out = SuperPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let Some((set, neg)) = a.thetas.wedge(b.thetas) else { continue };
                let xexp = a.xexp.iter().zip(&b.xexp).map(|(p, q)| p + q).collect();
                let c = ca * cb;
                out.add_term(SuperMonomial::new(xexp, set), if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> SuperPoly {
        let mut acc = SuperPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Interior product `∂_{θ_i}`.
    pub fn theta_derivative(&self, i: usize) -> SuperPoly {
        let mut out = SuperPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((set, neg)) = m.thetas.interior(i) {
                let c = if neg { -c.clone() } else { c.clone() };
                out.add_term(SuperMonomial::new(m.xexp.clone(), set), c);
            }
        }
        out
    }

    /// `∂_{x_i}^times`.
    pub fn x_derivative(&self, i: usize, times: u32) -> SuperPoly {
        let mut out = SuperPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let a = m.xexp[i];
            if a < times {
                continue;
            }
            let mut xexp = m.xexp.clone();
            xexp[i] -= times;
            let f = Rational::from_integer(falling(a, times));
            out.add_term(SuperMonomial::new(xexp, m.thetas), c * f);
        }
        out
    }

    /// Common bidegree of all terms, or `None` if zero or not bihomogeneous.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| m.bidegree());
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Component of bidegree `(i, k)`.
    pub fn component(&self, i: u32, k: u32) -> SuperPoly {
        SuperPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree() == (i, k))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Distinct bidegrees present, in increasing order.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self.terms.keys().map(|m| m.bidegree()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The positive-definite pairing `(f, ω) = Σ f_c ω_c α!`.
    ///
    /// Agrees with the constant coefficient of `∂_ω f`; see
    /// [`super::Operator::partial_omega`].
    pub fn pairing(&self, omega: &SuperPoly) -> Result<Rational> {
        if self.nvars != omega.nvars {
            return Err(Error::NvarsMismatch(self.nvars, omega.nvars));
        }
        let (small, big) = if self.num_terms() <= omega.num_terms() { (self, omega) } else { (omega, self) };
        let mut acc = Rational::zero();
        for (m, c) in &small.terms {
            if let Some(d) = big.terms.get(m) {
                acc += c * d * Rational::from_integer(m.factorial_weight());
            }
        }
        Ok(acc)
    }

    /// Image under the signed permutation `x_j -> s_j x_{σ(j)}`,
    /// `θ_j -> s_j θ_{σ(j)}`, with `s_j = ±1`.
    pub fn signed_permute(&self, perm: &[usize], signs: &[i8]) -> SuperPoly {
        let n = self.nvars;
        let mut out = SuperPoly::zero(n);
        for (m, c) in &self.terms {
            let mut neg = false;
            let mut xexp = vec![0; n];
            for j in 0..n {
                xexp[perm[j]] = m.xexp[j];
                if signs[j] < 0 && m.xexp[j] % 2 == 1 {
                    neg = !neg;
                }
            }
            let mut set = ThetaSet::EMPTY;
            for j in m.thetas.iter() {
                if signs[j] < 0 {
                    neg = !neg;
                }
                let (s, ng) = set.wedge(ThetaSet::singleton(perm[j])).expect("permutation");
                set = s;
                neg ^= ng;
            }
            out.add_term(SuperMonomial::new(xexp, set), if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Largest x-degree among the terms.
    pub fn max_xdeg(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.xdeg()).max()
    }
}

/// `a (a-1) ... (a-t+1)`; zero when `t > a`.
pub fn falling(a: u32, t: u32) -> BigInt {
    if t > a {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for s in 0..t {
        acc *= a - s;
    }
    acc
}

impl std::fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        self + &(-rhs)
    }
}

impl Neg for &SuperPoly {
    type Output = SuperPoly;
    fn neg(self) -> SuperPoly {
        SuperPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SuperPoly {
    type Output = SuperPoly;
    fn mul(self, rhs: &SuperPoly) -> SuperPoly {
        self.multiply(rhs).expect("variable count mismatch")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SuperPoly {
            type Output = SuperPoly;
            fn $m(self, rhs: SuperPoly) -> SuperPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
