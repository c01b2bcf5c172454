//! Super harmonics of `G(m,p,n)` bidegree by bidegree, their Hilbert series,
//! the determinant-isotypic forms and their derivative closure, exactness
//! of the exterior derivative, Laplacian spectra and the top-degree
//! structures built from the Jacobian.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::{GroupData, GroupSpec};
use crate::linalg::{normalize, Echelon, SparseVec, Subspace};
use crate::qseries::{QPoly, QZPoly};
use crate::superpoly::{
    binomial, count_exponent_vectors, monomial_basis, Operator, SuperMonomial, SuperPoly, ThetaSet,
};
use crate::{Error, Rational, Result};

/// Default refusal threshold, in dense matrix entries.
pub const DEFAULT_CELL_BUDGET: u64 = 20_000_000;

/// Ordered monomial basis of one bidegree.
#[derive(Debug)]
pub struct Ambient {
    nvars: usize,
    bidegree: (u32, u32),
    monomials: Vec<SuperMonomial>,
    index: HashMap<SuperMonomial, usize>,
}

impl Ambient {
    pub fn new(nvars: usize, i: u32, k: u32) -> Self {
        let monomials = monomial_basis(nvars, i, k);
        let index = monomials.iter().cloned().enumerate().map(|(c, m)| (m, c)).collect();
        Ambient { nvars, bidegree: (i, k), monomials, index }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn monomials(&self) -> &[SuperMonomial] {
        &self.monomials
    }

    pub fn position(&self, m: &SuperMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `f`, or `None` if `f` has a term outside this bidegree.
    pub fn to_vector(&self, f: &SuperPoly) -> Option<SparseVec> {
        let mut v = Vec::with_capacity(f.num_terms());
        for (m, c) in f.terms() {
            v.push((self.position(m)?, c.clone()));
        }
        Some(normalize(v))
    }

    pub fn to_poly(&self, v: &[(usize, Rational)]) -> SuperPoly {
        SuperPoly::from_terms(self.nvars, v.iter().map(|(c, x)| (self.monomials[*c].clone(), x.clone())))
    }
}

/// A subspace of one bidegree component, in reduced row echelon form over
/// the ambient monomial basis.
#[derive(Clone, Debug)]
pub struct CellSpace {
    pub ambient: Arc<Ambient>,
    pub space: Subspace,
}

impl CellSpace {
    pub fn zero(ambient: Arc<Ambient>) -> Self {
        let n = ambient.dim();
        CellSpace { ambient, space: Subspace::zero(n) }
    }

    pub fn span(ambient: Arc<Ambient>, gens: &[SuperPoly]) -> Result<Self> {
        let vecs = gens
            .iter()
            .map(|g| ambient.to_vector(g).ok_or_else(|| Error::Integrity(format!("{g} is not of bidegree {:?}", ambient.bidegree))))
            .collect::<Result<Vec<_>>>()?;
        let space = Subspace::span(ambient.dim(), &vecs);
        Ok(CellSpace { ambient, space })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.ambient.bidegree
    }

    pub fn basis_polys(&self) -> Vec<SuperPoly> {
        self.space.basis().iter().map(|r| self.ambient.to_poly(r)).collect()
    }

    /// Membership; a polynomial of another bidegree is contained only if zero.
    pub fn contains(&self, f: &SuperPoly) -> bool {
        match self.ambient.to_vector(f) {
            Some(v) => self.space.contains(&v),
            None => false,
        }
    }
}

impl PartialEq for CellSpace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient.bidegree == other.ambient.bidegree && self.space == other.space
    }
}

/// Dense-equivalent size of the elimination for a cell.
fn kernel_cost(ops: &[Operator], nvars: usize, i: u32, k: u32) -> u64 {
    let cols = count_exponent_vectors(nvars, i) * binomial(nvars as u64, k as u64);
    let rows: u64 = ops
        .iter()
        .filter_map(|op| op.bidegree_shift())
        .filter_map(|(dx, dt)| {
            let (ti, tk) = (i as i64 + dx, k as i64 + dt);
            (ti >= 0 && tk >= 0 && tk <= nvars as i64)
                .then(|| count_exponent_vectors(nvars, ti as u32) * binomial(nvars as u64, tk as u64))
        })
        .sum();
    cols.saturating_mul(rows)
}

/// Kernel of a linear map given by its images on a list of domain vectors:
/// returns coefficient vectors `λ` with `Σ λ_c image_c = 0`.
fn dependencies(images: &[Vec<(usize, SuperPoly)>]) -> Vec<SparseVec> {
    // Rows of the constraint matrix are indexed by (operator, target monomial).
    let mut rows: HashMap<(usize, SuperMonomial), Vec<(usize, Rational)>> = HashMap::new();
    for (c, imgs) in images.iter().enumerate() {
        for (a, img) in imgs {
            for (m, x) in img.terms() {
                rows.entry((*a, m.clone())).or_default().push((c, x.clone()));
            }
        }
    }
    let mut keys: Vec<_> = rows.keys().cloned().collect();
    keys.sort();
    let constraints: Vec<SparseVec> = keys.into_iter().map(|key| normalize(rows.remove(&key).unwrap())).collect();
    crate::linalg::nullspace(images.len(), &constraints)
}

/// Common kernel of `ops` on the full bidegree-`(i, k)` monomial space.
pub fn kernel_intersection(ops: &[Operator], nvars: usize, bidegree: (u32, u32), budget: u64) -> Result<CellSpace> {
    let (i, k) = bidegree;
    let cost = kernel_cost(ops, nvars, i, k);
    if cost > budget {
        return Err(Error::Infeasible { what: format!("kernel at bidegree ({i},{k})"), estimate: cost, budget });
    }
    let ambient = Arc::new(Ambient::new(nvars, i, k));
    let images: Vec<Vec<(usize, SuperPoly)>> = ambient
        .monomials()
        .iter()
        .map(|m| ops.iter().enumerate().map(|(a, op)| (a, op.apply_monomial(m))).collect())
        .collect();
    let kernel = dependencies(&images);
    Ok(CellSpace { space: Subspace::span(ambient.dim(), &kernel), ambient })
}

/// Harmonic subspaces for every bidegree `i ≤ deg Δ`, `k ≤ n`; all other
/// bidegrees are zero.
#[derive(Clone, Debug)]
pub struct HarmonicCells {
    pub spec: GroupSpec,
    cells: BTreeMap<(u32, u32), CellSpace>,
}

impl HarmonicCells {
    pub fn get(&self, i: u32, k: u32) -> Option<&CellSpace> {
        self.cells.get(&(i, k))
    }

    pub fn dim(&self, i: i64, k: i64) -> usize {
        if i < 0 || k < 0 {
            return 0;
        }
        self.get(i as u32, k as u32).map_or(0, |c| c.dim())
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(u32, u32), &CellSpace)> {
        self.cells.iter()
    }

    pub fn dim_table(&self) -> DimTable {
        DimTable::from_cells(&self.spec, self.cells.iter().map(|(&(i, k), c)| (i, k, c.dim() as u64)))
    }
}

/// Classical harmonic polynomials: for each coefficient of `Π [d_a]_q`.
fn classical_dims(spec: &GroupSpec) -> Vec<u64> {
    let mut acc = QPoly::one();
    for &d in &spec.degrees {
        acc = &acc * &crate::qseries::q_integer(d);
    }
    (0..=spec.deg_vandermondian).map(|i| acc.coeff(i).try_into().unwrap_or(u64::MAX)).collect()
}

/// Worst dense-equivalent matrix size over all cells of the two-stage
/// computation.
pub fn estimate_cost(gd: &GroupData) -> u64 {
    let spec = &gd.spec;
    let n = spec.nvars();
    let h = classical_dims(spec);
    let mut worst = 0u64;
    for i in 0..=spec.deg_vandermondian {
        let cols = count_exponent_vectors(n, i);
        let rows: u64 = spec.degrees.iter().filter(|&&d| d <= i).map(|&d| count_exponent_vectors(n, i - d)).sum();
        worst = worst.max(cols.saturating_mul(rows));
        for k in 1..=spec.n {
            let cols = h[i as usize] * binomial(n as u64, k as u64);
            let rows: u64 = spec
                .degrees
                .iter()
                .filter(|&&d| d <= i + 1)
                .map(|&d| count_exponent_vectors(n, i + 1 - d) * binomial(n as u64, k as u64 - 1))
                .sum();
            worst = worst.max(cols.saturating_mul(rows));
        }
    }
    worst
}

/// Computes every harmonic cell. The x-only kernels `H^i` come first; the
/// `θ`-degree `k` cell is then the kernel of the `∂_{d f_a}` on `H^i ⊗ Λ^k`.
pub fn harmonic_cells(gd: &GroupData, budget: u64) -> Result<HarmonicCells> {
    let cost = estimate_cost(gd);
    if cost > budget {
        return Err(Error::Infeasible { what: format!("harmonics of {}", gd.spec), estimate: cost, budget });
    }
    let spec = &gd.spec;
    let n = spec.nvars();
    let ops = gd.harmonic_operators();
    let (x_ops, form_ops) = ops.split_at(n);
    let top = spec.deg_vandermondian;

    let classical: Vec<CellSpace> = (0..=top)
        .into_par_iter()
        .map(|i| kernel_intersection(x_ops, n, (i, 0), u64::MAX))
        .collect::<Result<_>>()?;

    let jobs: Vec<(u32, u32)> = (0..=top).flat_map(|i| (1..=spec.n).map(move |k| (i, k))).collect();
    let forms: Vec<((u32, u32), CellSpace)> = jobs
        .into_par_iter()
        .map(|(i, k)| {
            let cell = forms_in_cell(&classical[i as usize], form_ops, n, k);
            ((i, k), cell)
        })
        .collect();

    let mut cells = BTreeMap::new();
    for (i, c) in classical.into_iter().enumerate() {
        cells.insert((i as u32, 0), c);
    }
    cells.extend(forms);
    Ok(HarmonicCells { spec: spec.clone(), cells })
}

/// One harmonic cell; zero outside `i ≤ deg Δ`, `k ≤ n`.
pub fn harmonic_cell(gd: &GroupData, i: u32, k: u32, budget: u64) -> Result<CellSpace> {
    let n = gd.nvars();
    if i > gd.spec.deg_vandermondian || k > gd.spec.n {
        return Ok(CellSpace::zero(Arc::new(Ambient::new(n, i, k.min(gd.spec.n)))));
    }
    let ops = gd.harmonic_operators();
    let (x_ops, form_ops) = ops.split_at(n);
    let classical = kernel_intersection(x_ops, n, (i, 0), budget)?;
    if k == 0 {
        return Ok(classical);
    }
    let cols = classical.dim() as u64 * binomial(n as u64, k as u64);
    let rows = kernel_cost(form_ops, n, i, k) / (count_exponent_vectors(n, i) * binomial(n as u64, k as u64)).max(1);
    if cols.saturating_mul(rows) > budget {
        return Err(Error::Infeasible { what: format!("bidegree ({i},{k})"), estimate: cols * rows, budget });
    }
    Ok(forms_in_cell(&classical, form_ops, n, k))
}

fn forms_in_cell(classical: &CellSpace, ops: &[Operator], n: usize, k: u32) -> CellSpace {
    let i = classical.bidegree().0;
    let ambient = Arc::new(Ambient::new(n, i, k));
    let hs = classical.basis_polys();
    if hs.is_empty() {
        return CellSpace::zero(ambient);
    }
    let subsets = ThetaSet::subsets(n, k);
    let mut domain = Vec::with_capacity(hs.len() * subsets.len());
    for h in &hs {
        for &s in &subsets {
            let t = SuperPoly::from_monomial(SuperMonomial::new(vec![0; n], s), Rational::one());
            domain.push(h * &t);
        }
    }
    let images: Vec<Vec<(usize, SuperPoly)>> =
        domain.iter().map(|f| ops.iter().enumerate().map(|(a, op)| (a, op.apply(f))).collect()).collect();
    let kernel = dependencies(&images);
    let vecs: Vec<SparseVec> = kernel
        .iter()
        .map(|lam| {
            let mut acc = Vec::new();
            for (c, x) in lam {
                for (m, y) in domain[*c].terms() {
                    acc.push((ambient.position(m).expect("bidegree"), x * y));
                }
            }
            normalize(acc)
        })
        .collect();
    CellSpace { space: Subspace::span(ambient.dim(), &vecs), ambient }
}

/// Bigraded dimension table, serialised as
/// `{"group": {"m","p","n"}, "version": 1, "dims": [[i, k, dim], ...]}`.
/// Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub group: GroupKey,
    pub version: u32,
    pub dims: Vec<(u32, u32, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupKey {
    pub m: u32,
    pub p: u32,
    pub n: u32,
}

impl From<&GroupSpec> for GroupKey {
    fn from(s: &GroupSpec) -> Self {
        GroupKey { m: s.m, p: s.p, n: s.n }
    }
}

impl DimTable {
    pub const VERSION: u32 = 1;

    pub fn from_cells<I: IntoIterator<Item = (u32, u32, u64)>>(spec: &GroupSpec, cells: I) -> Self {
        let mut dims: Vec<_> = cells.into_iter().filter(|c| c.2 > 0).collect();
        dims.sort();
        DimTable { group: spec.into(), version: Self::VERSION, dims }
    }

    pub fn get(&self, i: u32, k: u32) -> u64 {
        self.dims.iter().find(|c| c.0 == i && c.1 == k).map_or(0, |c| c.2)
    }

    pub fn total(&self) -> u64 {
        self.dims.iter().map(|c| c.2).sum()
    }

    /// `Σ dim · q^i z^k`.
    pub fn hilbert(&self) -> QZPoly {
        QZPoly::from_dims(self.dims.iter().copied())
    }

    /// The `q = 1` specialisation as a polynomial in `z`.
    pub fn at_q1(&self) -> QPoly {
        self.hilbert().at_q(1)
    }

    /// Largest `i` with a nonzero entry at `θ`-degree `k`.
    pub fn top_xdeg(&self, k: u32) -> Option<u32> {
        self.dims.iter().filter(|c| c.1 == k).map(|c| c.0).max()
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &DimTable) -> bool {
        self.dims.iter().all(|&(i, k, d)| d <= other.get(i, k))
    }

    /// One LaTeX table row: group, `Hilb(1, z)` of this table, and the
    /// closure column (`(same)` when equal).
    pub fn latex_row(&self, closure: Option<&DimTable>) -> String {
        let spec = GroupSpec::new(self.group.m, self.group.p, self.group.n).ok();
        let name = match (self.group.m, self.group.p) {
            (1, 1) => format!("\\mathfrak{{S}}_{}", self.group.n),
            (2, 1) => format!("\\mathfrak{{B}}_{}", self.group.n),
            (2, 2) => format!("\\mathfrak{{D}}_{}", self.group.n),
            _ => spec.map_or_else(|| "?".into(), |s| format!("G({}, {}, {})", s.m, s.p, s.n)),
        };
        let tex = |p: &QPoly| p.to_string_in("z").replace('*', "");
        let second = match closure {
            None => String::new(),
            Some(c) if c.at_q1() == self.at_q1() => " & (same)".to_string(),
            Some(c) => format!(" & ${}$", tex(&c.at_q1())),
        };
        format!("${name}$ & ${}${second} \\\\", tex(&self.at_q1()))
    }
}

impl fmt::Display for DimTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maxk = self.dims.iter().map(|c| c.1).max().unwrap_or(0);
        let maxi = self.dims.iter().map(|c| c.0).max().unwrap_or(0);
        write!(f, "i\\k")?;
        for k in 0..=maxk {
            write!(f, "\t{k}")?;
        }
        writeln!(f)?;
        for i in 0..=maxi {
            write!(f, "{i}")?;
            for k in 0..=maxk {
                write!(f, "\t{}", self.get(i, k))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Super harmonic dimensions of a group.
pub fn sh_dim_table(gd: &GroupData, budget: u64) -> Result<DimTable> {
    Ok(harmonic_cells(gd, budget)?.dim_table())
}

/// `dim` of the bidegree-`(i, k)` part of the super coinvariant ring:
/// ambient dimension minus the rank of the ideal's bidegree component,
/// spanned by `x^β θ_K · g` over the generators `g`.
pub fn quotient_dim(gd: &GroupData, i: u32, k: u32) -> usize {
    let n = gd.nvars();
    let ambient = Ambient::new(n, i, k);
    let mut e = Echelon::new(ambient.dim());
    for g in gd.ideal_generators() {
        let Some((gi, gk)) = g.bidegree() else { continue };
        if gi > i || gk > k {
            continue;
        }
        for mult in monomial_basis(n, i - gi, k - gk) {
            let prod = &SuperPoly::from_monomial(mult, Rational::one()) * &g;
            if let Some(v) = ambient.to_vector(&prod) {
                e.insert(&v);
            }
        }
    }
    ambient.dim() - e.rank()
}

/// The forms `d_{i_1} ∘ ⋯ ∘ d_{i_k} Δ` for every subset `i_1 < ⋯ < i_k`
/// of the `r` generalized exterior derivatives (0-based subset indices).
pub fn det_isotypic_elements(gd: &GroupData) -> Vec<(Vec<usize>, SuperPoly)> {
    let r = gd.spec.rank as usize;
    let mut out = Vec::with_capacity(1 << r);
    for mask in 0u32..(1 << r) {
        let subset: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        let mut f = gd.vandermondian.clone();
        for &j in subset.iter().rev() {
            f = gd.ext_derivatives[j].apply(&f);
        }
        out.push((subset, f));
    }
    out.sort_by_key(|(s, _)| (s.len(), s.clone()));
    out
}

/// Span of the determinant-isotypic forms, per bidegree. Fails with an
/// integrity error if some form vanishes, has the wrong bidegree, is not
/// harmonic or the forms are dependent.
pub fn det_isotypic_basis(gd: &GroupData, cells: &HarmonicCells) -> Result<BTreeMap<(u32, u32), CellSpace>> {
    let n = gd.nvars();
    let mut by_cell: BTreeMap<(u32, u32), Vec<SuperPoly>> = BTreeMap::new();
    for (subset, f) in det_isotypic_elements(gd) {
        let expected_x = gd.spec.deg_vandermondian as i64
            - subset.iter().map(|&j| gd.spec.coexponents[j] as i64).sum::<i64>();
        let bideg = f.bidegree().ok_or_else(|| Error::Integrity(format!("d-image for {subset:?} vanishes")))?;
        if bideg != (expected_x as u32, subset.len() as u32) || expected_x < 0 {
            return Err(Error::Integrity(format!("d-image for {subset:?} has bidegree {bideg:?}")));
        }
        let in_sh = cells.get(bideg.0, bideg.1).is_some_and(|c| c.contains(&f));
        if !in_sh {
            return Err(Error::Integrity(format!("d-image for {subset:?} is not harmonic")));
        }
        by_cell.entry(bideg).or_default().push(f);
    }
    let mut out = BTreeMap::new();
    for ((i, k), gens) in by_cell {
        let cell = CellSpace::span(Arc::new(Ambient::new(n, i, k)), &gens)?;
        if cell.dim() != gens.len() {
            return Err(Error::Integrity(format!("dependent determinant forms at ({i},{k})")));
        }
        out.insert((i, k), cell);
    }
    Ok(out)
}

/// `ℚ[∂_{x_1},…,∂_{x_n}]` applied to the determinant-isotypic forms, per
/// bidegree, built from the top x-degree down.
pub fn derivative_closure_cells(gd: &GroupData) -> Result<BTreeMap<(u32, u32), CellSpace>> {
    let n = gd.nvars();
    let mut seeds: BTreeMap<(u32, u32), Vec<SuperPoly>> = BTreeMap::new();
    for (_, f) in det_isotypic_elements(gd) {
        let b = f.bidegree().ok_or_else(|| Error::Integrity("vanishing determinant form".into()))?;
        seeds.entry(b).or_default().push(f);
    }
    let top = gd.spec.deg_vandermondian;
    let ks: Vec<u32> = (0..=gd.spec.n).collect();
    let per_k: Vec<Vec<((u32, u32), CellSpace)>> = ks
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            let mut above: Vec<SuperPoly> = Vec::new();
            for i in (0..=top).rev() {
                let mut gens: Vec<SuperPoly> = seeds.get(&(i, k)).cloned().unwrap_or_default();
                for f in &above {
                    for j in 0..n {
                        let g = f.x_derivative(j, 1);
                        if !g.is_zero() {
                            gens.push(g);
                        }
                    }
                }
                let cell = CellSpace::span(Arc::new(Ambient::new(n, i, k)), &gens)?;
                above = cell.basis_polys();
                out.push(((i, k), cell));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_k.into_iter().flatten().collect())
}

pub fn derivative_closure(gd: &GroupData) -> Result<DimTable> {
    let cells = derivative_closure_cells(gd)?;
    Ok(DimTable::from_cells(&gd.spec, cells.iter().map(|(&(i, k), c)| (i, k, c.dim() as u64))))
}

fn image_rank(op: &Operator, source: Option<&CellSpace>, target: &Ambient) -> Result<(usize, bool)> {
    let Some(src) = source else { return Ok((0, true)) };
    let mut e = Echelon::new(target.dim());
    for f in src.basis_polys() {
        let img = op.apply(&f);
        if img.is_zero() {
            continue;
        }
        let v = target.to_vector(&img).ok_or_else(|| Error::Integrity("image left the target bidegree".into()))?;
        e.insert(&v);
    }
    Ok((e.rank(), true))
}

/// Results of the exactness and Hodge decomposition checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    /// `exact_by_k[k]`: ranks balance at every cell of `θ`-degree `k`.
    pub exact_by_k: Vec<bool>,
    /// `d` and `d†` map harmonics to harmonics.
    pub preserved: bool,
    /// `dim SH^{i,k} = rank d(SH^{i+1,k-1}) + rank d†(SH^{i-1,k+1})`, direct sum.
    pub hodge: bool,
    /// `Hilb(q, -q) = 1`.
    pub hilbert_identity: bool,
    /// Cells where some check failed.
    pub failures: Vec<(u32, u32, String)>,
}

impl ExactnessReport {
    pub fn all_pass(&self) -> bool {
        self.exact_by_k.iter().all(|&b| b) && self.preserved && self.hodge && self.hilbert_identity
    }
}

/// Checks exactness of `0 → SH^{·,0} → ⋯ → SH^{·,n} → 0` under `d`,
/// preservation of harmonics by `d` and `d†`, the Hodge splitting and
/// `Hilb(q, -q) = 1`.
pub fn exactness_check(gd: &GroupData, cells: &HarmonicCells) -> Result<ExactnessReport> {
    let spec = &gd.spec;
    let n = spec.nvars();
    let top = spec.deg_vandermondian;
    let d = &gd.exterior_d;
    let dd = &gd.exterior_d_adjoint;
    let jobs: Vec<(u32, u32)> = (0..=top).flat_map(|i| (0..=spec.n).map(move |k| (i, k))).collect();
    let results: Vec<(u32, u32, Vec<String>)> = jobs
        .into_par_iter()
        .map(|(i, k)| -> Result<(u32, u32, Vec<String>)> {
            let mut fails = Vec::new();
            let here = cells.get(i, k).expect("cell");
            let ambient = &here.ambient;
            let from_above = if k >= 1 { cells.get(i + 1, k - 1) } else { None };
            let from_below = if i >= 1 && k < spec.n { cells.get(i - 1, k + 1) } else { None };
            let (rank_in_d, _) = image_rank(d, from_above, ambient)?;
            let (rank_in_dd, _) = image_rank(dd, from_below, ambient)?;
            // Kernel of d on this cell.
            let rank_out = if i >= 1 && k < spec.n {
                let target = Ambient::new(n, i - 1, k + 1);
                image_rank(d, Some(here), &target)?.0
            } else {
                0
            };
            let ker = here.dim() - rank_out;
            let expected_ker = if k == 0 { (i == 0) as usize } else { rank_in_d };
            if ker != expected_ker {
                fails.push(format!("exact: ker {ker} vs image {expected_ker}"));
            }
            for f in here.basis_polys() {
                let a = d.apply(&f);
                if !a.is_zero() && !(i >= 1 && cells.get(i - 1, k + 1).is_some_and(|c| c.contains(&a))) {
                    fails.push("preserved: d leaves SH".into());
                    break;
                }
                let b = dd.apply(&f);
                let ok = b.is_zero() || (k >= 1 && cells.get(i + 1, k - 1).is_some_and(|c| c.contains(&b)));
                if !b.is_zero() && i + 1 > top {
                    fails.push("preserved: d† leaves the truncation".into());
                    break;
                }
                if !ok {
                    fails.push("preserved: d† leaves SH".into());
                    break;
                }
            }
            if i + k >= 1 {
                let mut e = Echelon::new(ambient.dim());
                for (op, src) in [(d, from_above), (dd, from_below)] {
                    if let Some(s) = src {
                        for f in s.basis_polys() {
                            let img = op.apply(&f);
                            if let Some(v) = ambient.to_vector(&img) {
                                e.insert(&v);
                            }
                        }
                    }
                }
                if here.dim() != rank_in_d + rank_in_dd || e.rank() != here.dim() {
                    fails.push(format!("hodge: {} vs {} + {}", here.dim(), rank_in_d, rank_in_dd));
                }
            }
            Ok((i, k, fails))
        })
        .collect::<Result<_>>()?;

    let mut exact_by_k = vec![true; spec.n as usize + 1];
    let mut preserved = true;
    let mut hodge = true;
    let mut failures = Vec::new();
    for (i, k, fails) in results {
        for f in fails {
            if f.starts_with("exact") {
                exact_by_k[k as usize] = false;
            } else if f.starts_with("preserved") {
                preserved = false;
            } else {
                hodge = false;
            }
            failures.push((i, k, f));
        }
    }
    let hilbert_identity = cells.dim_table().hilbert().substitute_z(-1, 1).is_one();
    Ok(ExactnessReport { exact_by_k, preserved, hodge, hilbert_identity, failures })
}

/// `Σ_j ∂_{x_j}^N θ_j`.
pub fn power_derivative(nvars: usize, power: u32) -> Operator {
    (0..nvars).fold(Operator::zero(nvars), |acc, j| {
        &acc + &Operator::mul_theta(nvars, j).compose(&Operator::der_x(nvars, j, power))
    })
}

/// Predicted eigenvalue of `d†d + dd†` for `d = Σ ∂_{x_j}^N θ_j` on `x^α θ_I`:
/// `Σ_{j∉I} α_j^{(N)} + Σ_{j∈I} (α_j+N)^{(N)}` (falling factorials).
pub fn laplacian_eigenvalue(m: &SuperMonomial, power: u32) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::zero();
    for (j, &a) in m.xexp.iter().enumerate() {
        acc += if m.thetas.contains(j) {
            crate::superpoly::falling(a + power, power)
        } else {
            crate::superpoly::falling(a, power)
        };
    }
    acc
}

/// Verifies that every monomial `x^α θ_I` with `|α| + |I| ≤ degree_bound`
/// is an eigenvector of the Laplacian with the predicted eigenvalue, and
/// that the eigenvalue vanishes exactly when `I = ∅` and all `α_j < N`.
pub fn laplacian_spectrum_check(power: u32, nvars: usize, degree_bound: u32) -> bool {
    let d = power_derivative(nvars, power);
    let dag = d.adjoint();
    let lap = &dag.compose(&d) + &d.compose(&dag);
    for total in 0..=degree_bound {
        for k in 0..=(nvars as u32).min(total) {
            for m in monomial_basis(nvars, total - k, k) {
                let lam = laplacian_eigenvalue(&m, power);
                let f = SuperPoly::from_monomial(m.clone(), Rational::one());
                let expected = f.scale(&Rational::from_integer(lam.clone()));
                if lap.apply(&f) != expected {
                    return false;
                }
                let in_kernel = m.thetas.is_empty() && m.xexp.iter().all(|&a| a < power);
                if lam.is_zero() != in_kernel {
                    return false;
                }
            }
        }
    }
    true
}

/// Top `θ`-degree structures built from the Jacobian.
#[derive(Clone, Debug)]
pub struct FittingData {
    /// Generators `∂_{x_j} f_i`.
    pub iprime_gens: Vec<SuperPoly>,
    /// `∂_{Δ*} Δ`.
    pub gamma: SuperPoly,
    /// `hprime_dims[i]`: dimension of the degree-`i` part of the polynomials
    /// killed by `∂_g` for every generator `g`.
    pub hprime_dims: Vec<u64>,
    /// Degree-wise dimensions of `ℚ[∂] Γ`.
    pub gamma_closure_dims: Vec<u64>,
    pub gamma_in_hprime: bool,
}

impl FittingData {
    /// `Ann Γ` equals the Jacobian ideal iff both complements agree degreewise.
    pub fn annihilator_matches(&self) -> bool {
        self.gamma_in_hprime && self.gamma_closure_dims == self.hprime_dims
    }
}

/// Closed form for the largest x-degree of `SH^r`.
pub fn top_xdeg_formula(spec: &GroupSpec) -> u32 {
    let q = spec.m / spec.p;
    if spec.n == 1 {
        q.saturating_sub(2)
    } else if spec.m <= 2 {
        0
    } else {
        q - 2 + (spec.n - 1) * (spec.m - 2)
    }
}

pub fn fitting_structures(gd: &GroupData) -> Result<FittingData> {
    let n = gd.nvars();
    let top = gd.spec.deg_vandermondian;
    let mut iprime_gens = Vec::new();
    for f in &gd.basic_invariants {
        for j in 0..n {
            let g = f.x_derivative(j, 1);
            if !g.is_zero() && !iprime_gens.contains(&g) {
                iprime_gens.push(g);
            }
        }
    }
    let ops: Vec<Operator> = iprime_gens.iter().map(Operator::partial_omega).collect();
    let hprime: Vec<CellSpace> = (0..=top)
        .into_par_iter()
        .map(|i| kernel_intersection(&ops, n, (i, 0), u64::MAX))
        .collect::<Result<_>>()?;
    let gamma = Operator::partial_omega(&gd.covandermondian).apply(&gd.vandermondian);
    let gdeg = gamma.max_xdeg().unwrap_or(0);
    let gamma_in_hprime = !gamma.is_zero() && hprime.get(gdeg as usize).is_some_and(|c| c.contains(&gamma));

    let mut closure = vec![0u64; top as usize + 1];
    let mut level = vec![gamma.clone()];
    for i in (0..=gdeg).rev() {
        let cell = CellSpace::span(Arc::new(Ambient::new(n, i, 0)), &level)?;
        closure[i as usize] = cell.dim() as u64;
        level = cell
            .basis_polys()
            .iter()
            .flat_map(|f| (0..n).map(move |j| f.x_derivative(j, 1)))
            .filter(|g| !g.is_zero())
            .collect();
    }
    Ok(FittingData {
        iprime_gens,
        gamma,
        hprime_dims: hprime.iter().map(|c| c.dim() as u64).collect(),
        gamma_closure_dims: closure,
        gamma_in_hprime,
    })
}

/// Observed support of the harmonics, and the support statements that
/// apply to the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    /// Nonzero bidegrees.
    pub observed: Vec<(u32, u32)>,
    /// `p = 1`: nonzero exactly where `i + k + m·C(k,2) ≤ m·C(n,2) + (m-1)n`.
    pub bidegree_bound: Option<bool>,
    /// `p ≠ m` or `p = 1`: nonzero total degrees are exactly `0 ..= deg Δ`.
    pub total_degree_support: Option<bool>,
    /// `p ≠ m` or `p = 1`: the top total-degree slice is spanned by `Δ` and `dΔ`.
    pub top_slice_spanned: Option<bool>,
    pub top_total_degree: u32,
    pub top_slice_dim: usize,
}

impl SupportReport {
    pub fn all_pass(&self) -> bool {
        [self.bidegree_bound, self.total_degree_support, self.top_slice_spanned].iter().all(|c| c.unwrap_or(true))
    }
}

pub fn support_check(gd: &GroupData, cells: &HarmonicCells) -> Result<SupportReport> {
    let spec = &gd.spec;
    let (m, n) = (spec.m as u64, spec.n as u64);
    let observed: Vec<(u32, u32)> = cells.cells().filter(|(_, c)| c.dim() > 0).map(|(&b, _)| b).collect();
    let bidegree_bound = (spec.p == 1).then(|| {
        cells.cells().all(|(&(i, k), c)| {
            let lhs = i as u64 + k as u64 + m * binomial(k as u64, 2);
            let rhs = m * binomial(n, 2) + (m - 1) * n;
            (c.dim() > 0) == (lhs <= rhs)
        })
    });
    let top_total_degree = observed.iter().map(|(i, k)| i + k).max().unwrap_or(0);
    let slice: Vec<&CellSpace> =
        cells.cells().filter(|(&(i, k), _)| i + k == top_total_degree).map(|(_, c)| c).collect();
    let top_slice_dim = slice.iter().map(|c| c.dim()).sum();

    let applies = spec.p != spec.m || spec.p == 1;
    let (total_degree_support, top_slice_spanned) = if applies {
        let top = spec.deg_vandermondian;
        let support = (0..=top + spec.n).all(|l| {
            let nonzero = cells.cells().any(|(&(i, k), c)| i + k == l && c.dim() > 0);
            nonzero == (l <= top)
        });
        let delta = &gd.vandermondian;
        let d_delta = gd.exterior_d.apply(delta);
        let mut spanned = top_total_degree == top;
        for c in &slice {
            let gens: Vec<SuperPoly> =
                [delta, &d_delta].into_iter().filter(|f| f.bidegree() == Some(c.bidegree())).cloned().collect();
            let expected = CellSpace::span(c.ambient.clone(), &gens)?;
            spanned &= expected == **c;
        }
        (Some(support), Some(spanned))
    } else {
        (None, None)
    };
    Ok(SupportReport { observed, bidegree_bound, total_degree_support, top_slice_spanned, top_total_degree, top_slice_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn p(s: &str, n: usize) -> SuperPoly {
        SuperPoly::parse(s, n).unwrap()
    }

    #[test]
    fn s2_table_by_hand() {
        let gd = build_group(1, 1, 2).unwrap();
        let t = sh_dim_table(&gd, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(t.dims, vec![(0, 0, 1), (0, 1, 1), (1, 0, 1)]);
        assert_eq!(harmonic_cell(&gd, 1, 0, DEFAULT_CELL_BUDGET).unwrap().dim(), 1);
        assert_eq!(harmonic_cell(&gd, 1, 1, DEFAULT_CELL_BUDGET).unwrap().dim(), 0);
        assert_eq!(harmonic_cell(&gd, 5, 1, DEFAULT_CELL_BUDGET).unwrap().dim(), 0);
        // Brute force: the generic kernel on the full space agrees.
        let ops = gd.harmonic_operators();
        for (i, k) in [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2)] {
            let full = kernel_intersection(&ops, 2, (i, k), DEFAULT_CELL_BUDGET).unwrap();
            assert_eq!(full.dim() as u64, t.get(i, k), "({i},{k})");
        }
    }

    #[test]
    fn s3_and_quotient_oracle() {
        let gd = build_group(1, 1, 3).unwrap();
        let cells = harmonic_cells(&gd, DEFAULT_CELL_BUDGET).unwrap();
        let t = cells.dim_table();
        assert_eq!(t.at_q1(), QPoly::from_coeffs([6, 6, 1]));
        for (&(i, k), c) in cells.cells() {
            assert_eq!(c.dim(), quotient_dim(&gd, i, k), "({i},{k})");
        }
    }

    #[test]
    fn dihedral_four_elements() {
        let gd = build_group(2, 2, 2).unwrap();
        let cells = harmonic_cells(&gd, DEFAULT_CELL_BUDGET).unwrap();
        let det = det_isotypic_basis(&gd, &cells).unwrap();
        let expected = [
            ((2, 0), p("x1^2 - x2^2", 2)),
            ((1, 1), p("x1*t1 - x2*t2", 2)),
            ((1, 1), p("x2*t1 - x1*t2", 2)),
            ((0, 2), p("t1*t2", 2)),
        ];
        for (b, f) in expected {
            assert!(det[&b].contains(&f), "{f}");
        }
        assert_eq!(det[&(1, 1)].dim(), 2);
    }

    #[test]
    fn laplacian_examples() {
        let m = SuperMonomial::new(vec![1], ThetaSet::singleton(0));
        assert_eq!(laplacian_eigenvalue(&m, 2), 6.into());
        assert_eq!(laplacian_eigenvalue(&SuperMonomial::new(vec![1, 0], ThetaSet::EMPTY), 2), 0.into());
        assert!(laplacian_spectrum_check(1, 2, 4));
        assert!(laplacian_spectrum_check(2, 2, 4));
    }

    #[test]
    fn refuses_oversized() {
        let gd = build_group(2, 1, 5).unwrap();
        assert!(matches!(harmonic_cells(&gd, 1_000), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn g422_top_forms() {
        let gd = build_group(4, 2, 2).unwrap();
        let fit = fitting_structures(&gd).unwrap();
        for g in ["x1^3", "x2^3", "x1^2*x2", "x1*x2^2"] {
            assert!(fit.iprime_gens.iter().any(|h| crate::groups::proportionality(h, &p(g, 2)).is_some()), "{g}");
        }
        assert_eq!(&fit.hprime_dims[..4], &[1, 2, 3, 0]);
        let t = sh_dim_table(&gd, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!((0..=2).map(|i| t.get(i, 2)).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(t.top_xdeg(2), Some(top_xdeg_formula(&gd.spec)));
    }

    #[test]
    fn supports() {
        let gd = build_group(1, 1, 3).unwrap();
        let cells = harmonic_cells(&gd, DEFAULT_CELL_BUDGET).unwrap();
        let r = support_check(&gd, &cells).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.observed, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0)]);
        assert_eq!(r.top_slice_dim, 2);

        let gd = build_group(2, 2, 2).unwrap();
        let cells = harmonic_cells(&gd, DEFAULT_CELL_BUDGET).unwrap();
        let r = support_check(&gd, &cells).unwrap();
        assert_eq!((r.top_total_degree, r.top_slice_dim, r.top_slice_spanned), (2, 4, None));
    }
}
