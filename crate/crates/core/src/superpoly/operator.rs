use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::{SuperMonomial, ThetaSet};
use super::poly::{falling, SuperPoly};
use crate::{Error, Rational, Result};

/// One normal-ordered operator term without its coefficient:
/// `x^mulx · θ_multheta ∘ ∂_x^derx ∘ ∂_{θ_{d_1}} ∘ ... ∘ ∂_{θ_{d_l}}`
/// where `d_1 < ... < d_l` are the members of `dertheta` and
/// `∂_{θ_{d_l}}` acts first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OpMonomial {
    pub mulx: Vec<u32>,
    pub multheta: ThetaSet,
    pub derx: Vec<u32>,
    pub dertheta: ThetaSet,
}

impl OpMonomial {
    pub fn identity(n: usize) -> Self {
        OpMonomial {
            mulx: vec![0; n],
            multheta: ThetaSet::EMPTY,
            derx: vec![0; n],
            dertheta: ThetaSet::EMPTY,
        }
    }

    /// Bidegree shift `(|mulx| - |derx|, |multheta| - |dertheta|)`.
    pub fn shift(&self) -> (i64, i64) {
        let sx: i64 = self.mulx.iter().map(|&a| a as i64).sum::<i64>()
            - self.derx.iter().map(|&a| a as i64).sum::<i64>();
        (sx, self.multheta.len() as i64 - self.dertheta.len() as i64)
    }

    /// Applies this term to a monomial, returning the image monomial and an
    /// integer factor (possibly negative), or `None` when the image is zero.
    pub fn apply_monomial(&self, m: &SuperMonomial) -> Option<(SuperMonomial, Rational)> {
        let mut neg = false;
        let mut set = m.thetas;
        for d in self.dertheta.iter().rev() {
            let (s, ng) = set.interior(d)?;
            set = s;
            neg ^= ng;
        }
        let mut factor = num_bigint::BigInt::one();
        let mut xexp = m.xexp.clone();
        for (j, &t) in self.derx.iter().enumerate() {
            if t == 0 {
                continue;
            }
            if xexp[j] < t {
                return None;
            }
            factor *= falling(xexp[j], t);
            xexp[j] -= t;
        }
        let (s, ng) = self.multheta.wedge(set)?;
        neg ^= ng;
        for (j, &a) in self.mulx.iter().enumerate() {
            xexp[j] += a;
        }
        let c = Rational::from_integer(if neg { -factor } else { factor });
        Some((SuperMonomial::new(xexp, s), c))
    }
}

/// Differential operator on super-polynomials stored as a sum of
/// normal-ordered terms (all derivatives act before all multiplications).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Operator {
    nvars: usize,
    terms: BTreeMap<OpMonomial, Rational>,
}

impl Operator {
    pub fn zero(nvars: usize) -> Self {
        Operator { nvars, terms: BTreeMap::new() }
    }

    pub fn identity(nvars: usize) -> Self {
        Operator::from_term(OpMonomial::identity(nvars), Rational::one())
    }

    pub fn from_term(t: OpMonomial, c: Rational) -> Self {
        let mut op = Operator::zero(t.mulx.len());
        op.add_term(t, c);
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (OpMonomial, Rational)>>(nvars: usize, it: I) -> Self {
        let mut op = Operator::zero(nvars);
        for (t, c) in it {
            op.add_term(t, c);
        }
        op
    }

    /// Multiplication by `x_i`.
    pub fn mul_x(nvars: usize, i: usize) -> Self {
        let mut t = OpMonomial::identity(nvars);
        t.mulx[i] = 1;
        Operator::from_term(t, Rational::one())
    }

    /// Left multiplication by `θ_i`.
    pub fn mul_theta(nvars: usize, i: usize) -> Self {
        let mut t = OpMonomial::identity(nvars);
        t.multheta = ThetaSet::singleton(i);
        Operator::from_term(t, Rational::one())
    }

    /// `∂_{x_i}^times`.
    pub fn der_x(nvars: usize, i: usize, times: u32) -> Self {
        let mut t = OpMonomial::identity(nvars);
        t.derx[i] = times;
        Operator::from_term(t, Rational::one())
    }

    /// `∂_{θ_i}`.
    pub fn der_theta(nvars: usize, i: usize) -> Self {
        let mut t = OpMonomial::identity(nvars);
        t.dertheta = ThetaSet::singleton(i);
        Operator::from_term(t, Rational::one())
    }

    /// Left multiplication by `f`.
    pub fn multiplication_by(f: &SuperPoly) -> Self {
        let n = f.nvars();
        Operator::from_terms(
            n,
            f.terms().map(|(m, c)| {
                let t = OpMonomial {
                    mulx: m.xexp.clone(),
                    multheta: m.thetas,
                    derx: vec![0; n],
                    dertheta: ThetaSet::EMPTY,
                };
                (t, c.clone())
            }),
        )
    }

    /// `∂_ω`: replace each `x_j` by `∂_{x_j}` and each `θ_i` by `∂_{θ_i}`,
    /// reversing the order of the `θ` factors.
    pub fn partial_omega(omega: &SuperPoly) -> Self {
        let n = omega.nvars();
        Operator::from_terms(
            n,
            omega.terms().map(|(m, c)| {
                let k = m.thetas.len();
                let t = OpMonomial {
                    mulx: vec![0; n],
                    multheta: ThetaSet::EMPTY,
                    derx: m.xexp.clone(),
                    dertheta: m.thetas,
                };
                let neg = (k * k.saturating_sub(1) / 2) % 2 == 1;
                (t, if neg { -c.clone() } else { c.clone() })
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: OpMonomial, c: Rational) {
        debug_assert_eq!(t.mulx.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
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

    pub fn scale(&self, c: &Rational) -> Operator {
        Operator::from_terms(self.nvars, self.terms.iter().map(|(t, v)| (t.clone(), v * c)))
    }

    /// Uniform bidegree shift of all terms, if there is one.
    pub fn bidegree_shift(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|t| t.shift());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    pub fn apply(&self, f: &SuperPoly) -> SuperPoly {
        self.try_apply(f).expect("variable count mismatch")
    }

    pub fn try_apply(&self, f: &SuperPoly) -> Result<SuperPoly> {
        if self.nvars != f.nvars() {
            return Err(Error::NvarsMismatch(self.nvars, f.nvars()));
        }
        let mut out = SuperPoly::zero(self.nvars);
        for (t, c) in &self.terms {
            for (m, v) in f.terms() {
                if let Some((img, factor)) = t.apply_monomial(m) {
                    out.add_term(img, c * v * factor);
                }
            }
        }
        Ok(out)
    }

    /// Applies the operator to a single monomial with coefficient 1.
    pub fn apply_monomial(&self, m: &SuperMonomial) -> SuperPoly {
        let mut out = SuperPoly::zero(self.nvars);
        for (t, c) in &self.terms {
            if let Some((img, factor)) = t.apply_monomial(m) {
                out.add_term(img, c * factor);
            }
        }
        out
    }

    /// `self ∘ other`, renormalised.
    pub fn compose(&self, other: &Operator) -> Operator {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Operator::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                compose_terms(a, b, &(ca * cb), &mut out);
            }
        }
        out
    }

    /// Adjoint with respect to the pairing: `x_i <-> ∂_{x_i}` and
    /// `θ_i <-> ∂_{θ_i}`, order reversed.
    pub fn adjoint(&self) -> Operator {
        Operator::from_terms(
            self.nvars,
            self.terms.iter().map(|(t, c)| {
                let s = t.multheta.len();
                let l = t.dertheta.len();
                let parity = s * s.saturating_sub(1) / 2 + l * l.saturating_sub(1) / 2;
                let adj = OpMonomial {
                    mulx: t.derx.clone(),
                    multheta: t.dertheta,
                    derx: t.mulx.clone(),
                    dertheta: t.multheta,
                };
                (adj, if parity % 2 == 1 { -c.clone() } else { c.clone() })
            }),
        )
    }
}

/// Normal-orders `∂_{θ_D} ∘ θ_M` into a list of `(negative, M', D')`.
fn reorder_theta(d: ThetaSet, m: ThetaSet) -> Vec<(bool, ThetaSet, ThetaSet)> {
    let mut cur = vec![(false, m, ThetaSet::EMPTY)];
    for j in d.iter().rev() {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (neg, mm, dd) in cur {
            if let Some((rest, ng)) = mm.interior(j) {
                next.push((neg ^ ng, rest, dd));
            }
            if !dd.contains(j) {
                let pass_m = mm.len() % 2 == 1;
                let pass_d = dd.count_below(j) % 2 == 1;
                next.push((neg ^ pass_m ^ pass_d, mm, dd.union(ThetaSet::singleton(j))));
            }
        }
        cur = next;
    }
    cur
}

fn binomial_big(n: u32, k: u32) -> num_bigint::BigInt {
    falling(n, k) / falling(k, k)
}

fn compose_terms(a: &OpMonomial, b: &OpMonomial, c: &Rational, out: &mut Operator) {
    let n = a.mulx.len();
    let thetas = reorder_theta(a.dertheta, b.multheta);
    if thetas.is_empty() {
        return;
    }
    // ∂^γ ∘ x^δ = Σ_ν Π_j C(γ_j,ν_j) δ_j^{(ν_j)} x^{δ-ν} ∂^{γ-ν}
    let mut xparts: Vec<(Vec<u32>, num_bigint::BigInt)> = vec![(Vec::new(), num_bigint::BigInt::one())];
    for j in 0..n {
        let (g, dl) = (a.derx[j], b.mulx[j]);
        let mut next = Vec::new();
        for (nu, f) in &xparts {
            for v in 0..=g.min(dl) {
                let mut nu2 = nu.clone();
                nu2.push(v);
                next.push((nu2, f * binomial_big(g, v) * falling(dl, v)));
            }
        }
        xparts = next;
    }
    for (nu, f) in xparts {
        let mulx: Vec<u32> = (0..n).map(|j| a.mulx[j] + b.mulx[j] - nu[j]).collect();
        let derx: Vec<u32> = (0..n).map(|j| a.derx[j] - nu[j] + b.derx[j]).collect();
        for &(neg0, mm, dd) in &thetas {
            let Some((mt, n1)) = a.multheta.wedge(mm) else { continue };
            let Some((dt, n2)) = dd.wedge(b.dertheta) else { continue };
            let neg = neg0 ^ n1 ^ n2;
            let coef = c * Rational::from_integer(f.clone());
            let t = OpMonomial { mulx: mulx.clone(), multheta: mt, derx: derx.clone(), dertheta: dt };
            out.add_term(t, if neg { -coef } else { coef });
        }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &(-rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (t, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &a) in t.mulx.iter().enumerate() {
                if a > 0 {
                    write!(f, "*x{}^{a}", j + 1)?;
                }
            }
            for j in t.multheta.iter() {
                write!(f, "*t{}", j + 1)?;
            }
            for (j, &a) in t.derx.iter().enumerate() {
                if a > 0 {
                    write!(f, "*dx{}^{a}", j + 1)?;
                }
            }
            for j in t.dertheta.iter() {
                write!(f, "*dt{}", j + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> SuperPoly {
        SuperPoly::parse(s, n).unwrap()
    }

    fn exterior_d(n: usize) -> Operator {
        (0..n).fold(Operator::zero(n), |acc, j| {
            &acc + &Operator::mul_theta(n, j).compose(&Operator::der_x(n, j, 1))
        })
    }

    #[test]
    fn partial_omega_reverses_thetas() {
        let op = Operator::partial_omega(&p("t1*t2", 2));
        let expected = Operator::der_theta(2, 1).compose(&Operator::der_theta(2, 0));
        assert_eq!(op, expected);
        assert_eq!(op.apply(&p("t1*t2", 2)), SuperPoly::one(2));
        let w = p("x1*t1", 1);
        assert_eq!(Operator::partial_omega(&w).apply(&w), SuperPoly::one(1));
        assert_eq!(Operator::partial_omega(&p("x1^2", 1)), Operator::der_x(1, 0, 2));
    }

    #[test]
    fn exterior_derivative_examples() {
        let d1 = exterior_d(1);
        assert_eq!(d1.apply(&p("x1^2", 1)), p("2*x1*t1", 1));
        let d2 = exterior_d(2);
        assert_eq!(d2.adjoint().apply(&p("t1", 2)), p("x1", 2));
        assert!(d2.compose(&d2).is_zero());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let n = 2;
        let ops = [
            Operator::der_x(n, 0, 2),
            Operator::mul_x(n, 0),
            Operator::der_theta(n, 1),
            Operator::mul_theta(n, 1),
            exterior_d(n),
            exterior_d(n).adjoint(),
        ];
        let probes = [p("x1^3*x2*t1*t2", 2), p("x1*t2 + x2^2", 2), p("t1 - 3*x1^2*x2^2*t1", 2)];
        for a in &ops {
            for b in &ops {
                let ab = a.compose(b);
                for f in &probes {
                    assert_eq!(ab.apply(f), a.apply(&b.apply(f)), "{a:?} o {b:?}");
                }
            }
        }
    }

    #[test]
    fn adjoint_of_generators() {
        assert_eq!(Operator::der_x(3, 0, 1).adjoint(), Operator::mul_x(3, 0));
        assert_eq!(Operator::der_theta(3, 2).adjoint(), Operator::mul_theta(3, 2));
        let d = exterior_d(2);
        let dag = (0..2).fold(Operator::zero(2), |acc, j| {
            &acc + &Operator::mul_x(2, j).compose(&Operator::der_theta(2, j))
        });
        assert_eq!(d.adjoint(), dag);
        assert_eq!(d.adjoint().adjoint(), d);
    }

    #[test]
    fn canonical_commutation() {
        // ∂ ∘ x = x ∘ ∂ + 1
        let lhs = Operator::der_x(1, 0, 1).compose(&Operator::mul_x(1, 0));
        let rhs = &Operator::mul_x(1, 0).compose(&Operator::der_x(1, 0, 1)) + &Operator::identity(1);
        assert_eq!(lhs, rhs);
        // ∂_θ ∘ θ + θ ∘ ∂_θ = 1
        let a = Operator::der_theta(1, 0).compose(&Operator::mul_theta(1, 0));
        let b = Operator::mul_theta(1, 0).compose(&Operator::der_theta(1, 0));
        assert_eq!(&a + &b, Operator::identity(1));
    }
}
