use std::fmt;

use serde::{Deserialize, Serialize};

/// A set of `θ` indices (0-based), stored as a bitmask. Iteration yields
/// indices in increasing order, which is the canonical product order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaSet(u32);

impl ThetaSet {
    pub const EMPTY: ThetaSet = ThetaSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ThetaSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        ThetaSet(1 << i)
    }

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            ThetaSet(u32::MAX)
        } else {
            ThetaSet((1u32 << n) - 1)
        }
    }

    /// Builds a set from indices, returning `None` on a repeated index.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Option<Self> {
        let mut bits = 0u32;
        for i in it {
            let b = 1u32 << i;
            if bits & b != 0 {
                return None;
            }
            bits |= b;
        }
        Some(ThetaSet(bits))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn union(self, other: ThetaSet) -> ThetaSet {
        ThetaSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: ThetaSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl DoubleEndedIterator<Item = usize> {
        (0..32usize).filter(move |&i| self.contains(i))
    }

    /// Number of members strictly below `i`.
    pub fn count_below(self, i: usize) -> u32 {
        (self.0 & 1u32.checked_shl(i as u32).map_or(u32::MAX, |b| b - 1)).count_ones()
    }

    /// Sign-aware product `θ_self · θ_other`. Returns the canonical set and
    /// whether the sign is negative, or `None` when an index repeats.
    pub fn wedge(self, other: ThetaSet) -> Option<(ThetaSet, bool)> {
        if !self.is_disjoint(other) {
            return None;
        }
        // Each index of `other` must move past every larger index of `self`.
        let mut parity = 0u32;
        for b in other.iter() {
            parity += self.0.checked_shr(b as u32 + 1).unwrap_or(0).count_ones();
        }
        Some((self.union(other), parity % 2 == 1))
    }

    /// Interior product `∂_{θ_i}` on `θ_self`: removes `i`, with sign
    /// `(-1)^{#members below i}`. `None` if `i` is absent.
    pub fn interior(self, i: usize) -> Option<(ThetaSet, bool)> {
        if !self.contains(i) {
            return None;
        }
        Some((ThetaSet(self.0 & !(1 << i)), self.count_below(i) % 2 == 1))
    }

    /// All `k`-subsets of `0..n`, in increasing bitmask order.
    pub fn subsets(n: usize, k: u32) -> Vec<ThetaSet> {
        (0..1u32 << n).filter(|b| b.count_ones() == k).map(ThetaSet).collect()
    }
}

impl fmt::Debug for ThetaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i + 1)).finish()
    }
}

/// `x^α θ_I` with `I` in canonical increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperMonomial {
    pub xexp: Vec<u32>,
    pub thetas: ThetaSet,
}

impl SuperMonomial {
    pub fn one(n: usize) -> Self {
        SuperMonomial { xexp: vec![0; n], thetas: ThetaSet::EMPTY }
    }

    pub fn new(xexp: Vec<u32>, thetas: ThetaSet) -> Self {
        SuperMonomial { xexp, thetas }
    }

    pub fn nvars(&self) -> usize {
        self.xexp.len()
    }

    pub fn xdeg(&self) -> u32 {
        self.xexp.iter().sum()
    }

    pub fn tdeg(&self) -> u32 {
        self.thetas.len()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.xdeg(), self.tdeg())
    }

    /// `α! = Π α_j!`, the weight of this monomial in the pairing.
    pub fn factorial_weight(&self) -> num_bigint::BigInt {
        let mut acc = num_bigint::BigInt::from(1);
        for &a in &self.xexp {
            for t in 2..=a {
                acc *= t;
            }
        }
        acc
    }
}

impl fmt::Debug for SuperMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::monomial_string(self))
    }
}

/// All exponent vectors of length `n` with total degree `d`, in decreasing
/// lexicographic order (`x_1^d` first).
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn go(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if pos + 1 == n {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[pos] = a;
            go(pos + 1, left - a, cur, out);
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, d, &mut cur, &mut out);
    out
}

/// Number of exponent vectors of length `n` and degree `d`.
pub fn count_exponent_vectors(n: usize, d: u32) -> u64 {
    if n == 0 {
        return (d == 0) as u64;
    }
    binomial(d as u64 + n as u64 - 1, n as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Every monomial of bidegree `(i, k)` in `n` variables: x-part in
/// decreasing lex order, then `θ` sets in increasing bitmask order.
pub fn monomial_basis(n: usize, i: u32, k: u32) -> Vec<SuperMonomial> {
    let subsets = ThetaSet::subsets(n, k);
    let mut out = Vec::new();
    for e in exponent_vectors(n, i) {
        for &s in &subsets {
            out.push(SuperMonomial::new(e.clone(), s));
        }
    }
    out
}
