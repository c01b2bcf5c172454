//! Commutative polynomials over ℚ, reduced lexicographic Gröbner bases
//! (`x_1 > ... > x_n`) by Buchberger's algorithm, and the explicit bases
//! of the coinvariant ideals of `G(m,p,n)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::superpoly::{SuperMonomial, SuperPoly, ThetaSet};
use crate::{Error, Rational, Result};

/// Exponent vector; `Vec<u32>`'s derived order is lex with `x_1` largest.
pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn sub_exp(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        CommPoly::monomial(vec![0; nvars], Rational::one())
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = CommPoly::zero(e.len());
        p.add_term(e, c);
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        CommPoly::monomial(e, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = CommPoly::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// The `x`-part of a super-polynomial with no `θ` factors.
    pub fn from_super(f: &SuperPoly) -> Result<Self> {
        let mut p = CommPoly::zero(f.nvars());
        for (m, c) in f.terms() {
            if !m.thetas.is_empty() {
                return Err(Error::Unsupported("polynomial has odd variables".into()));
            }
            p.add_term(m.xexp.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn to_super(&self) -> SuperPoly {
        SuperPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (SuperMonomial::new(e.clone(), ThetaSet::EMPTY), c.clone())),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
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

    /// Leading exponent in lex order.
    pub fn leading_monomial(&self) -> Option<&Exponent> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &Rational) -> CommPoly {
        CommPoly::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn monic(&self) -> CommPoly {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// `c · x^e · self`.
    pub fn mul_term(&self, e: &[u32], c: &Rational) -> CommPoly {
        CommPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.iter().zip(e).map(|(x, y)| x + y).collect(), v * c))
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_super())
    }
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.scale(&-Rational::one())
    }
}

impl Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self + &(-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero(self.nvars);
        for (e, c) in &rhs.terms {
            out = &out + &self.mul_term(e, c);
        }
        out
    }
}

/// `h_j(x_{v_1}^power, ..., x_{v_k}^power)`: the sum of all degree-`j`
/// monomials in the listed variables, each exponent multiplied by `power`.
pub fn complete_homogeneous(j: u32, vars: &[usize], power: u32, nvars: usize) -> CommPoly {
    let mut out = CommPoly::zero(nvars);
    let k = vars.len();
    if k == 0 {
        return if j == 0 { CommPoly::one(nvars) } else { out };
    }
    for e in crate::superpoly::exponent_vectors(k, j) {
        let mut full = vec![0; nvars];
        for (pos, &v) in vars.iter().enumerate() {
            full[v] += e[pos] * power;
        }
        out.add_term(full, Rational::one());
    }
    out
}

/// The explicit reduced Gröbner basis of the coinvariant ideal of `G(m,p,n)`:
/// `h_j(x_j^m..x_n^m)` for `j ∈ [n]` when `p = 1`; otherwise those with
/// `j ∈ [n-1]` together with `h_{j-1}(x_j^m..x_n^m)·(x_j⋯x_n)^{m/p}` for `j ∈ [n]`.
pub fn paper_basis(m: u32, p: u32, n: u32) -> Result<Vec<CommPoly>> {
    if m == 0 || p == 0 || n == 0 || !m.is_multiple_of(p) {
        return Err(Error::InvalidGroup { m, p, n, reason: "need positive parameters with p | m".into() });
    }
    let nv = n as usize;
    let tail = |j: usize| (j..nv).collect::<Vec<usize>>();
    let mut out = Vec::new();
    let first = if p == 1 { nv } else { nv - 1 };
    for j in 0..first {
        out.push(complete_homogeneous(j as u32 + 1, &tail(j), m, nv));
    }
    if p > 1 {
        for j in 0..nv {
            let mut e = vec![0; nv];
            for x in e.iter_mut().skip(j) {
                *x = m / p;
            }
            out.push(complete_homogeneous(j as u32, &tail(j), m, nv).mul_term(&e, &Rational::one()));
        }
    }
    Ok(out)
}

/// Leading monomials of [`paper_basis`]: `x_j^{jm}` (and, for `p > 1`,
/// `x_j^{(j-1)m}(x_j⋯x_n)^{m/p}`).
pub fn paper_leading_monomials(m: u32, p: u32, n: u32) -> Vec<Exponent> {
    let nv = n as usize;
    let mut out = Vec::new();
    let first = if p == 1 { nv } else { nv - 1 };
    for j in 0..first {
        let mut e = vec![0; nv];
        e[j] = (j as u32 + 1) * m;
        out.push(e);
    }
    if p > 1 {
        for j in 0..nv {
            let mut e = vec![0; nv];
            for x in e.iter_mut().skip(j) {
                *x = m / p;
            }
            e[j] += j as u32 * m;
            out.push(e);
        }
    }
    out
}

/// A reduced lex Gröbner basis: monic, inter-reduced, sorted by
/// decreasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<CommPoly>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[CommPoly] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> Vec<Exponent> {
        self.generators.iter().filter_map(|g| g.leading_monomial().cloned()).collect()
    }

    pub fn normal_form(&self, f: &CommPoly) -> CommPoly {
        normal_form(f, &self.generators)
    }

    pub fn contains(&self, f: &CommPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Monomials divisible by no leading monomial. Errors if some variable
    /// has no pure power among the leading monomials.
    pub fn standard_monomials(&self) -> Result<Vec<Exponent>> {
        let lms = self.leading_monomials();
        let n = self.generators.first().map_or(0, |g| g.nvars());
        let mut bounds = Vec::with_capacity(n);
        for i in 0..n {
            let b = lms
                .iter()
                .filter(|e| e.iter().enumerate().all(|(j, &x)| j == i || x == 0) && e[i] > 0)
                .map(|e| e[i])
                .min()
                .ok_or(Error::InfiniteQuotient(i + 1))?;
            bounds.push(b);
        }
        let mut out = vec![Vec::new()];
        for &b in &bounds {
            let mut next = Vec::new();
            for prefix in &out {
                for x in 0..b {
                    let mut v: Vec<u32> = prefix.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out.retain(|e| !lms.iter().any(|l| divides(l, e)));
        Ok(out)
    }
}

/// Full reduction of `f` modulo `gens` (every term, not only the leading one).
pub fn normal_form(f: &CommPoly, gens: &[CommPoly]) -> CommPoly {
    let mut rest = f.terms.clone();
    let mut rem = CommPoly::zero(f.nvars);
    let lead: Vec<(&Exponent, &Rational)> =
        gens.iter().filter_map(|g| Some((g.leading_monomial()?, g.leading_coeff()?))).collect();
    while let Some((e, c)) = rest.pop_last() {
        let hit = lead.iter().position(|(l, _)| divides(l, &e));
        match hit {
            None => {
                rem.terms.insert(e, c);
            }
            Some(k) => {
                let (l, lc) = lead[k];
                let shift = sub_exp(&e, l);
                let factor = &c / lc;
                for (ge, gc) in gens[k].terms.iter().rev().skip(1) {
                    let t: Exponent = ge.iter().zip(&shift).map(|(x, y)| x + y).collect();
                    let v = rest.entry(t.clone()).or_insert_with(Rational::zero);
                    *v -= &factor * gc;
                    if v.is_zero() {
                        rest.remove(&t);
                    }
                }
            }
        }
    }
    rem
}

fn s_polynomial(f: &CommPoly, g: &CommPoly) -> CommPoly {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lcm(lf, lg);
    let a = f.mul_term(&sub_exp(&l, lf), &f.leading_coeff().unwrap().recip());
    let b = g.mul_term(&sub_exp(&l, lg), &g.leading_coeff().unwrap().recip());
    &a - &b
}

/// Pair key: total degree of the lcm, then the lcm in lex order, then indices.
type PairKey = (u32, Exponent, usize, usize);

fn pair_key(gens: &[CommPoly], i: usize, j: usize) -> PairKey {
    let l = lcm(gens[i].leading_monomial().unwrap(), gens[j].leading_monomial().unwrap());
    (l.iter().sum(), l, i, j)
}

/// Reduced lex Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[CommPoly]) -> Result<GroebnerBasis> {
    let nvars = gens.first().map(|g| g.nvars).ok_or(Error::Unsupported("empty generating set".into()))?;
    if gens.iter().any(|g| g.nvars != nvars) {
        return Err(Error::NvarsMismatch(nvars, gens.iter().find(|g| g.nvars != nvars).unwrap().nvars));
    }
    let mut basis: Vec<CommPoly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pending: BTreeSet<PairKey> = BTreeSet::new();
    let mut pending_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert(pair_key(&basis, i, j));
            pending_pairs.insert((i, j));
        }
    }
    while let Some(key) = pending.pop_first() {
        let (_, l, i, j) = key;
        pending_pairs.remove(&(i, j));
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if coprime(li, lj) {
            continue;
        }
        let is_pending = |a: usize, b: usize| pending_pairs.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].leading_monomial().unwrap(), &l)
                && !is_pending(i, k)
                && !is_pending(j, k)
        });
        if chain {
            continue;
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic());
        let new = basis.len() - 1;
        for k in 0..new {
            pending.insert(pair_key(&basis, k, new));
            pending_pairs.insert((k, new));
        }
    }
    Ok(GroebnerBasis { generators: reduce_basis(basis) })
}

/// Minimal, monic, inter-reduced form of a Gröbner basis, sorted by
/// decreasing leading monomial.
pub fn reduce_basis(basis: Vec<CommPoly>) -> Vec<CommPoly> {
    let mut basis: Vec<CommPoly> = basis.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    basis.dedup_by(|a, b| a.leading_monomial() == b.leading_monomial());
    let lms: Vec<Exponent> = basis.iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| !(0..basis.len()).any(|k| k != i && divides(&lms[k], &lms[i])))
        .collect();
    let minimal: Vec<CommPoly> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();
    let mut out: Vec<CommPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<CommPoly> =
                minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
            let g = &minimal[i];
            let lm = g.leading_monomial().unwrap().clone();
            let tail = CommPoly::from_terms(g.nvars, g.terms().filter(|(e, _)| **e != lm).map(|(e, c)| (e.clone(), c.clone())));
            let mut r = normal_form(&tail, &others);
            r.add_term(lm, g.leading_coeff().unwrap().clone());
            r.monic()
        })
        .collect();
    out.sort_by(|a, b| b.leading_monomial().cmp(&a.leading_monomial()));
    out
}

/// Wraps a candidate set as a basis after reduction, without completing it.
pub fn as_reduced(gens: Vec<CommPoly>) -> GroebnerBasis {
    GroebnerBasis { generators: reduce_basis(gens) }
}

/// True iff `gens` is already a Gröbner basis: all S-polynomials reduce to 0.
pub fn is_groebner_basis(gens: &[CommPoly]) -> bool {
    for j in 0..gens.len() {
        for i in 0..j {
            if !normal_form(&s_polynomial(&gens[i], &gens[j]), gens).is_zero() {
                return false;
            }
        }
    }
    true
}

/// True iff `gens` is a reduced Gröbner basis (monic, no term of any
/// generator divisible by another generator's leading monomial).
pub fn is_reduced(gens: &[CommPoly]) -> bool {
    gens.iter().enumerate().all(|(i, g)| {
        g.leading_coeff().is_some_and(|c| c.is_one())
            && gens.iter().enumerate().all(|(k, h)| {
                k == i || g.terms().all(|(e, _)| !divides(h.leading_monomial().unwrap(), e))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(s: &str, n: usize) -> CommPoly {
        CommPoly::from_super(&SuperPoly::parse(s, n).unwrap()).unwrap()
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(complete_homogeneous(0, &[0, 1], 3, 2), CommPoly::one(2));
        assert_eq!(complete_homogeneous(2, &[0, 1], 1, 2), cp("x1^2 + x1*x2 + x2^2", 2));
        assert_eq!(complete_homogeneous(1, &[0, 1], 2, 2), cp("x1^2 + x2^2", 2));
    }

    #[test]
    fn explicit_bases() {
        assert_eq!(paper_basis(1, 1, 2).unwrap(), vec![cp("x1 + x2", 2), cp("x2^2", 2)]);
        assert_eq!(paper_basis(2, 2, 2).unwrap(), vec![cp("x1^2 + x2^2", 2), cp("x1*x2", 2), cp("x2^3", 2)]);
        let lms: Vec<Exponent> =
            paper_basis(3, 1, 3).unwrap().iter().map(|g| g.leading_monomial().unwrap().clone()).collect();
        assert_eq!(lms, paper_leading_monomials(3, 1, 3));
    }

    #[test]
    fn small_buchberger_runs() {
        let gb = buchberger(&[cp("x1 + x2", 2), cp("x1*x2", 2)]).unwrap();
        assert_eq!(gb.generators(), &[cp("x1 + x2", 2), cp("x2^2", 2)]);
        let single = buchberger(&[cp("x1^2*x2", 2)]).unwrap();
        assert_eq!(single.generators(), &[cp("x1^2*x2", 2)]);
        assert!(normal_form(&cp("x1^2", 2), gb.generators()).is_zero());
        assert_eq!(gb.standard_monomials().unwrap(), vec![vec![0, 0], vec![0, 1]]);
        let d2 = buchberger(&paper_basis(2, 2, 2).unwrap()).unwrap();
        assert_eq!(d2.standard_monomials().unwrap(), vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0]]);
    }

    #[test]
    fn detects_infinite_quotient() {
        let gb = buchberger(&[cp("x1", 2)]).unwrap();
        assert_eq!(gb.standard_monomials(), Err(Error::InfiniteQuotient(2)));
    }
}
