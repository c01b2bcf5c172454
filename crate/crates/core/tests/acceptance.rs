//! Acceptance run: every criterion is checked with exact arithmetic and
//! reported on one line. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use supercoinv::artin::{
    artin_hilbert, enumerate_artin, generating_polynomial, is_artin, is_hook_free, p_contract, staircase_diagrams,
};
use supercoinv::groebner::{as_reduced, buchberger, is_groebner_basis, is_reduced, paper_basis, paper_leading_monomials};
use supercoinv::groups::{build_group, GroupData};
use supercoinv::harmonics::{
    derivative_closure, det_isotypic_basis, estimate_cost, exactness_check, harmonic_cells, laplacian_spectrum_check,
    support_check, DimTable, HarmonicCells, DEFAULT_CELL_BUDGET,
};
use supercoinv::qseries::{alternating_sum_check, zabrocki_hilbert, Family, QPoly};
use supercoinv::superpoly::{monomial_basis, Operator, SuperMonomial, SuperPoly};
use supercoinv::Rational;

type Triple = (u32, u32, u32);

/// Groups of the first two criteria with their Hilbert series at `q = 1`
/// (ascending powers of `z`).
const REQUIRED: &[(Triple, &[i64])] = &[
    ((1, 1, 3), &[6, 6, 1]),
    ((1, 1, 4), &[24, 36, 14, 1]),
    ((2, 2, 2), &[4, 4, 1]),
    ((2, 2, 3), &[24, 36, 14, 1]),
    ((3, 1, 2), &[18, 21, 4]),
    ((4, 1, 2), &[32, 40, 9]),
    ((5, 1, 2), &[50, 65, 16]),
];

/// Larger groups, run when within the cell budget.
const STRETCH: &[(Triple, &[i64])] = &[((1, 1, 5), &[120, 240, 150, 30, 1]), ((2, 1, 4), &[384, 768, 464, 80, 1])];

const D4_HARMONICS: &[i64] = &[192, 384, 240, 48, 1];
const D4_CLOSURE: &[i64] = &[192, 384, 238, 46, 1];

struct Harmonics {
    gd: GroupData,
    cells: HarmonicCells,
    table: DimTable,
}

/// Harmonic cells computed once per group and shared across criteria.
#[derive(Default)]
struct Context {
    computed: BTreeMap<Triple, Option<Harmonics>>,
}

impl Context {
    /// `None` when the group is over the cell budget.
    fn harmonics(&mut self, t: Triple) -> Option<&Harmonics> {
        self.computed
            .entry(t)
            .or_insert_with(|| {
                let gd = build_group(t.0, t.1, t.2).expect("valid group");
                if estimate_cost(&gd) > DEFAULT_CELL_BUDGET {
                    return None;
                }
                let cells = harmonic_cells(&gd, DEFAULT_CELL_BUDGET).expect("harmonics within budget");
                let table = cells.dim_table();
                Some(Harmonics { gd, cells, table })
            })
            .as_ref()
    }
}

fn name(t: Triple) -> String {
    build_group(t.0, t.1, t.2).map(|g| g.spec.name()).unwrap_or_else(|_| format!("{t:?}"))
}

fn zpoly(c: &[i64]) -> QPoly {
    QPoly::from_coeffs(c.iter().copied())
}

/// Outcome of one criterion: failures listed, plus notes such as skips.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn criterion_sh_table(ctx: &mut Context) -> Outcome {
    let mut out = Outcome::default();
    for &(t, expected) in REQUIRED.iter().chain(STRETCH) {
        match ctx.harmonics(t) {
            Some(h) => {
                let got = h.table.at_q1();
                out.check(got == zpoly(expected), || format!("{}: got {}", name(t), got.to_string_in("z")));
            }
            None if STRETCH.iter().any(|s| s.0 == t) => out.notes.push(format!("{} over budget, skipped", name(t))),
            None => out.failures.push(format!("{} over budget", name(t))),
        }
    }
    out
}

fn criterion_closure_table(ctx: &mut Context) -> Outcome {
    let mut out = Outcome::default();
    for &(t, expected) in REQUIRED.iter().chain(STRETCH) {
        let Some(h) = ctx.harmonics(t) else { continue };
        let closure = derivative_closure(&h.gd).expect("closure");
        let got = closure.at_q1();
        out.check(got == zpoly(expected), || format!("{} closure: got {}", name(t), got.to_string_in("z")));
    }
    match ctx.harmonics((2, 2, 4)) {
        Some(h) => {
            let sh = h.table.at_q1();
            let closure = derivative_closure(&h.gd).expect("closure").at_q1();
            out.check(sh == zpoly(D4_HARMONICS), || format!("D_4 harmonics: got {}", sh.to_string_in("z")));
            out.check(closure == zpoly(D4_CLOSURE), || format!("D_4 closure: got {}", closure.to_string_in("z")));
            out.notes.push(format!("D_4 {} < {}", closure.to_string_in("z"), sh.to_string_in("z")));
        }
        None => out.notes.push("D_4 over budget, skipped".into()),
    }
    // Strict-inequality witness that needs no table: G(4,2,2) at θ-degree 2.
    let h = ctx.harmonics((4, 2, 2)).expect("G(4,2,2) is small");
    let sh2: u64 = h.table.dims.iter().filter(|d| d.1 == 2).map(|d| d.2).sum();
    let det = det_isotypic_basis(&h.gd, &h.cells).expect("determinant forms");
    let det2: usize = det.iter().filter(|(b, _)| b.1 == 2).map(|(_, c)| c.dim()).sum();
    out.check(sh2 == 6 && det2 == 1, || format!("G(4,2,2) θ-degree 2: harmonics {sh2}, determinant part {det2}"));
    out.notes.push(format!("G(4,2,2) θ-degree 2: {sh2} vs {det2}"));
    out
}

fn criterion_groebner_artin() -> Outcome {
    let mut out = Outcome::default();
    let mut count = 0;
    for m in 1..=4u32 {
        for p in (1..=m).filter(|p| m % p == 0) {
            for n in 1..=4u32 {
                count += 1;
                let explicit = paper_basis(m, p, n).expect("basis");
                let gb = buchberger(&explicit).expect("completion");
                let label = format!("({m},{p},{n})");
                out.check(is_groebner_basis(&explicit) && is_reduced(&explicit), || format!("{label} not a reduced basis"));
                out.check(gb == as_reduced(explicit), || format!("{label} completion changed the basis"));
                let mut lm = gb.leading_monomials();
                let mut expected = paper_leading_monomials(m, p, n);
                lm.sort();
                expected.sort();
                out.check(lm == expected, || format!("{label} leading monomials"));
                let standard = gb.standard_monomials().expect("finite quotient");
                out.check(standard == enumerate_artin(m, p, n).unwrap(), || format!("{label} standard monomials"));
                let (order, hilb) = if n == 1 {
                    (BigInt::from(m / p), artin_hilbert(m, p, 1).unwrap())
                } else {
                    let factorial: BigInt = (1..=n).map(BigInt::from).product();
                    (BigInt::from(m).pow(n) * factorial / p, artin_hilbert(m, p, n).unwrap())
                };
                out.check(BigInt::from(standard.len()) == order, || format!("{label} has {} standard monomials", standard.len()));
                out.check(generating_polynomial(&standard) == hilb, || format!("{label} generating polynomial"));
            }
        }
    }
    out.notes.push(format!("{count} parameter triples"));
    out
}

fn criterion_exactness(ctx: &mut Context) -> Outcome {
    let mut out = Outcome::default();
    for &(t, _) in REQUIRED.iter().chain(STRETCH) {
        let Some(h) = ctx.harmonics(t) else { continue };
        let report = exactness_check(&h.gd, &h.cells).expect("exactness");
        out.check(report.all_pass(), || format!("{}: {:?}", name(t), report.failures));
        let specialised = h.table.hilbert().substitute_z(-1, 1);
        out.check(specialised.is_one(), || format!("{}: Hilb(q,-q) = {specialised}", name(t)));
    }
    out
}

fn criterion_conjectured_series(ctx: &mut Context) -> Outcome {
    let mut out = Outcome::default();
    let cases = [
        ((1, 1, 2), Family::A),
        ((1, 1, 3), Family::A),
        ((1, 1, 4), Family::A),
        ((1, 1, 5), Family::A),
        ((2, 1, 2), Family::B),
        ((2, 1, 3), Family::B),
    ];
    for (t, family) in cases {
        let Some(h) = ctx.harmonics(t) else {
            out.notes.push(format!("{} over budget, skipped", name(t)));
            continue;
        };
        let series = h.table.hilbert();
        for k in 0..=t.2 {
            let got = series.z_slice(k);
            let expected = zabrocki_hilbert(t.2, k as i64, family);
            out.check(got == expected, || format!("{} θ-degree {k}: {got} vs {expected}", name(t)));
        }
    }
    for n in 1..=8 {
        for family in [Family::A, Family::B] {
            let s = alternating_sum_check(n, family, 1);
            out.check(s.is_one(), || format!("alternating sum {family:?} n={n}: {s}"));
        }
    }
    out
}

fn criterion_support(ctx: &mut Context) -> Outcome {
    let mut out = Outcome::default();
    for &(t, _) in REQUIRED {
        let h = ctx.harmonics(t).expect("required groups are within budget");
        let report = support_check(&h.gd, &h.cells).expect("support");
        if t.1 == 1 {
            out.check(report.bidegree_bound == Some(true), || format!("{} bidegree support", name(t)));
        }
        if t.1 != t.0 {
            out.check(report.top_slice_dim == 2 && report.top_slice_spanned == Some(true), || {
                format!("{} top slice: dim {}, spanned {:?}", name(t), report.top_slice_dim, report.top_slice_spanned)
            });
            out.check(report.total_degree_support == Some(true), || format!("{} total-degree support", name(t)));
        }
    }
    let h = ctx.harmonics((2, 2, 2)).expect("D_2 is small");
    let report = support_check(&h.gd, &h.cells).expect("support");
    let det = det_isotypic_basis(&h.gd, &h.cells).expect("determinant forms");
    let top = report.top_total_degree;
    let det_top: usize = det.iter().filter(|(b, _)| b.0 + b.1 == top).map(|(_, c)| c.dim()).sum();
    out.check(report.top_slice_dim == 4 && det_top == 4, || {
        format!("D_2 top slice: dim {}, determinant part {det_top}", report.top_slice_dim)
    });
    out
}

fn mono(m: &SuperMonomial) -> SuperPoly {
    SuperPoly::from_monomial(m.clone(), Rational::one())
}

fn monomials_up_to(n: usize, max: u32) -> Vec<SuperMonomial> {
    (0..=(n as u32).min(max)).flat_map(|k| (0..=max - k).flat_map(move |i| monomial_basis(n, i, k))).collect()
}

fn adjoint_holds(n: usize, op: &Operator) -> bool {
    let (di, dk) = op.bidegree_shift().expect("bi-homogeneous");
    let adj = op.adjoint();
    monomials_up_to(n, 6).iter().all(|f| {
        let (i, k) = f.bidegree();
        let (ti, tk) = (i as i64 + di, k as i64 + dk);
        if ti < 0 || tk < 0 || tk > n as i64 || ti + tk > 6 {
            return true;
        }
        let image = op.apply(&mono(f));
        monomial_basis(n, ti as u32, tk as u32).iter().all(|g| {
            let g = mono(g);
            image.pairing(&g).unwrap() == mono(f).pairing(&adj.apply(&g)).unwrap()
        })
    })
}

fn criterion_properties() -> Outcome {
    let mut out = Outcome::default();
    for (m, p, n) in [(1, 1, 2), (1, 1, 3), (2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 3, 2), (4, 2, 3)] {
        let gd = build_group(m, p, n).unwrap();
        let nv = n as usize;
        let mut ops: Vec<Operator> = (0..nv).flat_map(|i| [Operator::der_x(nv, i, 1), Operator::der_theta(nv, i)]).collect();
        ops.push(gd.exterior_d.clone());
        ops.extend(gd.ext_derivatives.iter().cloned());
        out.check(ops.iter().all(|op| adjoint_holds(nv, op)), || format!("adjointness for {}", gd.spec));
    }
    for n in 1..=3 {
        let basis = monomials_up_to(n, 6);
        let gram_diagonal = basis.iter().all(|a| {
            basis.iter().all(|b| {
                let v = mono(a).pairing(&mono(b)).unwrap();
                if a == b {
                    v > Rational::zero()
                } else {
                    v.is_zero()
                }
            })
        });
        out.check(gram_diagonal, || format!("pairing not positive definite for n={n}"));
    }
    let small = monomials_up_to(3, 3);
    let supercommute = small.iter().all(|a| {
        small.iter().all(|b| {
            let (fa, fb) = (mono(a), mono(b));
            let ba = &fb * &fa;
            let expected = if a.tdeg() * b.tdeg() % 2 == 1 { -&ba } else { ba };
            &fa * &fb == expected
        })
    });
    out.check(supercommute, || "θ-graded commutativity".into());
    for power in 1..=3 {
        for n in 1..=3 {
            out.check(laplacian_spectrum_check(power, n, 6), || format!("Laplacian spectrum N={power} n={n}"));
        }
    }
    for m in 1..=4u32 {
        for p in (1..=m).filter(|p| m % p == 0) {
            for n in 1..=4u32 {
                let mut fibers: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
                for a in enumerate_artin(m, 1, n).unwrap() {
                    *fibers.entry(p_contract(&a, m, p).unwrap()).or_default() += 1;
                }
                let image: Vec<Vec<u32>> = fibers.keys().cloned().collect();
                out.check(image == enumerate_artin(m, p, n).unwrap() && fibers.values().all(|&c| c == p), || {
                    format!("contraction fibers ({m},{p},{n})")
                });
                let hooks = staircase_diagrams(m, n).iter().all(|a| is_hook_free(a, m, p) == is_artin(a, m, p));
                out.check(hooks, || format!("hook criterion ({m},{p},{n})"));
            }
        }
    }
    out
}

type Criterion = Box<dyn FnOnce(&mut Context) -> Outcome>;

fn main() -> ExitCode {
    let mut ctx = Context::default();
    let criteria: [(&str, Criterion); 7] = [
        ("harmonic Hilbert series at q=1", Box::new(criterion_sh_table)),
        ("derivative closure Hilbert series", Box::new(criterion_closure_table)),
        ("Groebner and Artin bases on m<=4, p|m, n<=4", Box::new(|_| criterion_groebner_artin())),
        ("exactness and Hilb(q,-q)=1", Box::new(criterion_exactness)),
        ("conjectured q-Stirling series", Box::new(criterion_conjectured_series)),
        ("support of harmonic forms", Box::new(criterion_support)),
        ("superpoly, Laplacian, contraction and hook properties", Box::new(|_| criterion_properties())),
    ];
    let mut failed = 0;
    for (number, (title, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut ctx);
        let verdict = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut detail = outcome.notes.clone();
        detail.extend(outcome.failures.iter().cloned());
        let detail = if detail.is_empty() { String::new() } else { format!(" [{}]", detail.join("; ")) };
        println!("criterion {}: {verdict} {title} ({:.1}s){detail}", number + 1, start.elapsed().as_secs_f64());
        failed += !outcome.failures.is_empty() as u32;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
