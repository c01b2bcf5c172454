//! Invariant data of the imprimitive reflection groups `G(m,p,n)`: basic
//! invariants, Vandermondian and co-Vandermondian, generalized exterior
//! derivatives and co-exponents, plus Jacobian-type consistency checks.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::superpoly::{exponent_vectors, Operator, SuperMonomial, SuperPoly, ThetaSet};
use crate::{Error, Rational, Result};

/// Validated parameters `(m, p, n)` with the derived numerical data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub m: u32,
    pub p: u32,
    pub n: u32,
    /// Number of generalized exterior derivatives with positive co-exponent.
    pub rank: u32,
    pub order: BigInt,
    pub coexponents: Vec<u32>,
    /// Degrees of the basic invariants.
    pub degrees: Vec<u32>,
    pub deg_vandermondian: u32,
}

fn choose2(n: u32) -> u32 {
    n * n.saturating_sub(1) / 2
}

impl GroupSpec {
    /// Validates `p | m`; a rank-one group `G(m,p,1)` is normalised to `G(m/p,1,1)`.
    pub fn new(m: u32, p: u32, n: u32) -> Result<GroupSpec> {
        let bad = |reason: &str| Error::InvalidGroup { m, p, n, reason: reason.to_string() };
        if m == 0 || p == 0 || n == 0 {
            return Err(bad("parameters must be positive"));
        }
        if !m.is_multiple_of(p) {
            return Err(bad("p must divide m"));
        }
        if n > 12 {
            return Err(bad("n larger than 12 is not supported"));
        }
        let (m, p) = if n == 1 { (m / p, 1) } else { (m, p) };
        let q = m / p;
        let (rank, coexponents, degrees) = if m == 1 {
            (n - 1, (1..n).collect(), (1..=n).collect())
        } else if p != m {
            (n, (1..=n).map(|i| (i - 1) * m + 1).collect(), (1..=n).map(|i| if i < n || p == 1 { i * m } else { n * q }).collect())
        } else {
            let mut co: Vec<u32> = (1..n).map(|i| (i - 1) * m + 1).collect();
            co.push((n - 1) * (m - 1));
            (n, co, (1..=n).map(|i| if i < n { i * m } else { n * q }).collect())
        };
        let mut order = BigInt::from(m).pow(n);
        for k in 2..=n {
            order *= k;
        }
        order /= p;
        Ok(GroupSpec {
            m,
            p,
            n,
            rank,
            order,
            coexponents,
            degrees,
            deg_vandermondian: m * choose2(n) + n * (q - 1),
        })
    }

    /// Conventional name: `S_n`, `B_n`, `D_n` or `G(m,p,n)`.
    pub fn name(&self) -> String {
        match (self.m, self.p) {
            (1, 1) => format!("S_{}", self.n),
            (2, 1) => format!("B_{}", self.n),
            (2, 2) => format!("D_{}", self.n),
            _ => format!("G({},{},{})", self.m, self.p, self.n),
        }
    }

    /// Number of reflecting hyperplanes: `m·C(n,2)` transposition-type plus
    /// `n` coordinate hyperplanes when `m/p > 1`.
    pub fn hyperplane_count(&self) -> u32 {
        let rot = if self.m / self.p > 1 { self.n } else { 0 };
        self.m * choose2(self.n) + rot
    }

    pub fn nvars(&self) -> usize {
        self.n as usize
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.m, self.p, self.n)
    }
}

/// How the terms of the last operator for `G(m,m,n)` are signed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LastDerivativeSigns {
    /// Not a `G(m,m,n)` group with `m > 1`.
    NotApplicable,
    Unsigned,
    /// `(-1)^j` on the `j`-th term.
    Alternating,
}

/// All polynomial and operator data for one group.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    pub basic_invariants: Vec<SuperPoly>,
    pub vandermondian: SuperPoly,
    pub covandermondian: SuperPoly,
    /// `coefficient_matrix[i][j]` is the x-polynomial `g` with `d_i = Σ_j ∂_g θ_j`.
    pub coefficient_matrix: Vec<Vec<SuperPoly>>,
    pub ext_derivatives: Vec<Operator>,
    pub exterior_d: Operator,
    pub exterior_d_adjoint: Operator,
    pub last_signs: LastDerivativeSigns,
}

fn sum_powers(n: usize, e: u32) -> SuperPoly {
    (0..n).fold(SuperPoly::zero(n), |acc, j| {
        let mut v = vec![0; n];
        v[j] = e;
        &acc + &SuperPoly::x_monomial(v)
    })
}

/// `Π_{i<j} (x_j^m - x_i^m)`.
fn power_vandermonde(n: usize, m: u32) -> SuperPoly {
    let mut acc = SuperPoly::one(n);
    for j in 0..n {
        for i in 0..j {
            let mut a = vec![0; n];
            a[j] = m;
            let mut b = vec![0; n];
            b[i] = m;
            acc = &acc * &(&SuperPoly::x_monomial(a) - &SuperPoly::x_monomial(b));
        }
    }
    acc
}

/// `Σ_j ∂_{g_j} θ_j`.
pub fn operator_from_row(row: &[SuperPoly]) -> Operator {
    let n = row.len();
    row.iter().enumerate().fold(Operator::zero(n), |acc, (j, g)| {
        &acc + &Operator::mul_theta(n, j).compose(&Operator::partial_omega(g))
    })
}

/// `Σ_j x_j^e`-type row: `g_j = x_j^e`.
fn power_row(n: usize, e: u32) -> Vec<SuperPoly> {
    (0..n)
        .map(|j| {
            let mut v = vec![0; n];
            v[j] = e;
            SuperPoly::x_monomial(v)
        })
        .collect()
}

fn last_row(n: usize, m: u32, signs: LastDerivativeSigns) -> Vec<SuperPoly> {
    (0..n)
        .map(|j| {
            let v: Vec<u32> = (0..n).map(|k| if k == j { 0 } else { m - 1 }).collect();
            let g = SuperPoly::x_monomial(v);
            if signs == LastDerivativeSigns::Alternating && j % 2 == 1 {
                -&g
            } else {
                g
            }
        })
        .collect()
}

/// Determinant of a square matrix of commuting polynomials.
pub fn poly_det(mat: &[Vec<SuperPoly>], nvars: usize) -> SuperPoly {
    let k = mat.len();
    if k == 0 {
        return SuperPoly::one(nvars);
    }
    let mut acc = SuperPoly::zero(nvars);
    for c in 0..k {
        if mat[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SuperPoly>> = mat[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &mat[0][c] * &poly_det(&minor, nvars);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `Some(c)` with `a = c·b` and `c ≠ 0`, if it exists.
pub fn proportionality(a: &SuperPoly, b: &SuperPoly) -> Option<Rational> {
    if a.is_zero() || b.is_zero() || a.num_terms() != b.num_terms() {
        return None;
    }
    let mut ratio: Option<Rational> = None;
    for (m, ca) in a.terms() {
        let cb = b.coeff(m);
        if cb.is_zero() {
            return None;
        }
        let r = ca / cb;
        match &ratio {
            None => ratio = Some(r),
            Some(x) if *x != r => return None,
            _ => {}
        }
    }
    ratio
}

/// Builds the data of `G(m,p,n)` from the explicit formulas.
pub fn build_group(m: u32, p: u32, n: u32) -> Result<GroupData> {
    let spec = GroupSpec::new(m, p, n)?;
    let (m, p, nn) = (spec.m, spec.p, spec.n as usize);
    let q = m / p;
    let basic_invariants: Vec<SuperPoly> = if m == 1 {
        (1..=spec.n).map(|i| sum_powers(nn, i)).collect()
    } else {
        let mut v: Vec<SuperPoly> = (1..spec.n).map(|i| sum_powers(nn, m * i)).collect();
        v.push(if p == 1 { sum_powers(nn, m * spec.n) } else { SuperPoly::x_monomial(vec![q; nn]) });
        v
    };
    let vprod = power_vandermonde(nn, m);
    let vandermondian = &SuperPoly::x_monomial(vec![q - 1; nn]) * &vprod;
    let covandermondian = if m == 1 || p == m { vprod.clone() } else { &SuperPoly::x_monomial(vec![1; nn]) * &vprod };

    let mut rows: Vec<Vec<SuperPoly>> =
        spec.coexponents.iter().take(if m > 1 && p == m { nn - 1 } else { nn }).map(|&e| power_row(nn, e)).collect();
    let mut last_signs = LastDerivativeSigns::NotApplicable;
    if m > 1 && p == m {
        // Pick the sign pattern whose Jacobian matches the co-Vandermondian.
        last_signs = LastDerivativeSigns::Unsigned;
        for signs in [LastDerivativeSigns::Unsigned, LastDerivativeSigns::Alternating] {
            let mut trial = rows.clone();
            trial.push(last_row(nn, m, signs));
            if proportionality(&poly_det(&trial, nn), &covandermondian).is_some() {
                last_signs = signs;
                break;
            }
        }
        rows.push(last_row(nn, m, last_signs));
    }
    let ext_derivatives = rows.iter().map(|r| operator_from_row(r)).collect();
    let exterior_d = operator_from_row(&power_row(nn, 1));
    let exterior_d_adjoint = exterior_d.adjoint();
    Ok(GroupData {
        spec,
        basic_invariants,
        vandermondian,
        covandermondian,
        coefficient_matrix: rows,
        ext_derivatives,
        exterior_d,
        exterior_d_adjoint,
        last_signs,
    })
}

impl GroupData {
    pub fn nvars(&self) -> usize {
        self.spec.n as usize
    }

    /// Generators of the super coinvariant ideal: `f_a` and `d f_a`.
    pub fn ideal_generators(&self) -> Vec<SuperPoly> {
        let mut out = self.basic_invariants.clone();
        out.extend(self.basic_invariants.iter().map(|f| self.exterior_d.apply(f)));
        out
    }

    /// Operators `∂_{f_a}` and `∂_{d f_a}` whose common kernel is the space
    /// of super harmonics.
    pub fn harmonic_operators(&self) -> Vec<Operator> {
        self.ideal_generators().iter().map(Operator::partial_omega).collect()
    }

    /// The generalized exterior derivatives, with `d_0 = Σ θ_j` prepended
    /// for the symmetric groups so the list has `n` entries.
    fn full_derivative_rows(&self) -> Vec<Vec<SuperPoly>> {
        let n = self.nvars();
        let mut rows = Vec::new();
        if self.spec.m == 1 {
            rows.push(vec![SuperPoly::one(n); n]);
        }
        rows.extend(self.coefficient_matrix.iter().cloned());
        rows
    }
}

/// True iff `det(∂_{x_j} f_i)` is a nonzero multiple of the Vandermondian.
pub fn validate_jacobian(gd: &GroupData) -> bool {
    let n = gd.nvars();
    let jac: Vec<Vec<SuperPoly>> =
        gd.basic_invariants.iter().map(|f| (0..n).map(|j| f.x_derivative(j, 1)).collect()).collect();
    proportionality(&poly_det(&jac, n), &gd.vandermondian).is_some()
}

/// Checks `d_1 ∘ ... ∘ d_n = c · θ_1⋯θ_n ∘ ∂_{Δ*}` for a single nonzero
/// constant `c`, both as an operator identity and on every monomial of
/// degree `deg Δ*` (the latter for `n ≤ 3`). For the symmetric groups
/// `d_0 = Σ θ_j` is put in front.
pub fn validate_covandermondian(gd: &GroupData) -> bool {
    let n = gd.nvars();
    let rows = gd.full_derivative_rows();
    if rows.len() != n {
        return false;
    }
    let composed = rows
        .iter()
        .map(|r| operator_from_row(r))
        .fold(Operator::identity(n), |acc, d| acc.compose(&d));
    let volume = SuperPoly::from_monomial(SuperMonomial::new(vec![0; n], ThetaSet::full(n)), Rational::one());
    let target = Operator::multiplication_by(&volume).compose(&Operator::partial_omega(&gd.covandermondian));

    let Some(scale) = operator_proportionality(&composed, &target) else { return false };
    if n > 3 {
        return true;
    }
    let deg = gd.covandermondian.max_xdeg().unwrap_or(0);
    for e in exponent_vectors(n, deg) {
        let probe = SuperPoly::x_monomial(e);
        let lhs = composed.apply(&probe);
        let rhs = target.apply(&probe).scale(&scale);
        if lhs != rhs {
            return false;
        }
    }
    true
}

fn operator_proportionality(a: &Operator, b: &Operator) -> Option<Rational> {
    if a.is_zero() || b.is_zero() || a.num_terms() != b.num_terms() {
        return None;
    }
    let bt: std::collections::BTreeMap<_, _> = b.terms().collect();
    let mut ratio: Option<Rational> = None;
    for (t, ca) in a.terms() {
        let cb = bt.get(t)?;
        let r = ca / *cb;
        match &ratio {
            None => ratio = Some(r),
            Some(x) if *x != r => return None,
            _ => {}
        }
    }
    ratio
}

/// A signed permutation `x_j -> s_j x_{perm[j]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn determinant(&self) -> i8 {
        let n = self.perm.len();
        let mut inv = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.perm[a] > self.perm[b] {
                    inv += 1;
                }
            }
        }
        let s: i8 = self.signs.iter().product();
        if inv % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// The matrix sending the basis vector `e_j` to `s_j e_{perm[j]}`.
    pub fn matrix(&self) -> Vec<Vec<i8>> {
        let n = self.perm.len();
        let mut a = vec![vec![0i8; n]; n];
        for j in 0..n {
            a[self.perm[j]][j] = self.signs[j];
        }
        a
    }

    pub fn act(&self, f: &SuperPoly) -> SuperPoly {
        f.signed_permute(&self.perm, &self.signs)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Every element of `G(m,p,n)` for `m ≤ 2` as a signed permutation.
pub fn group_matrices(spec: &GroupSpec) -> Result<Vec<SignedPermutation>> {
    if spec.m > 2 {
        return Err(Error::Unsupported(format!("group elements of {spec} need roots of unity of order {}", spec.m)));
    }
    let n = spec.nvars();
    let mut out = Vec::new();
    for perm in permutations(n) {
        let nsign = if spec.m == 2 { 1u32 << n } else { 1 };
        for mask in 0..nsign {
            if spec.p == 2 && mask.count_ones() % 2 == 1 {
                continue;
            }
            let signs = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            out.push(SignedPermutation { perm: perm.clone(), signs });
        }
    }
    Ok(out)
}

/// Total degree of a polynomial's terms, if homogeneous in `x`.
pub fn x_degree(f: &SuperPoly) -> Option<u32> {
    let mut it = f.terms().map(|(m, _)| m.xdeg());
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}
