//! Named checks of theorems and conjectures, producing machine-readable
//! reports. Theorem checks end in `pass`/`fail`; conjecture checks end in
//! `consistent`/`inconsistent`; checks that cannot run are `skipped`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artin::{artin_hilbert, enumerate_artin, generating_polynomial, is_hook_free, staircase_diagrams, artin_recursive};
use crate::groebner::{as_reduced, buchberger, is_groebner_basis, is_reduced, paper_basis, paper_leading_monomials};
use crate::groups::{build_group, group_matrices, GroupData, GroupSpec};
use crate::harmonics::{
    derivative_closure_cells, det_isotypic_basis, det_isotypic_elements, exactness_check, fitting_structures,
    harmonic_cells, laplacian_spectrum_check, support_check, top_xdeg_formula, DimTable, HarmonicCells,
};
use crate::qseries::{alternating_sum_check, q_factorial, q_integer, zabrocki_hilbert, Family, QPoly};
use crate::superpoly::binomial;
use crate::{Error, Result};

pub const SUITES: &[&str] = &[
    "artin-mpn",
    "grobner-mpn",
    "exact",
    "support-b",
    "support-c",
    "top-forms",
    "operator-closure",
    "no-dice",
    "table-calcs",
    "zabrocki",
    "hilb-alt",
    "q-identities",
    "laplacian",
];

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Printed reference data.
    Published,
    /// A closed formula evaluated independently of the computation checked.
    Formula,
    /// An independent computation.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub value: Value,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Consistent,
    Inconsistent,
    Skipped(String),
}

impl Verdict {
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Inconsistent)
    }

    fn label(&self) -> String {
        match self {
            Verdict::Pass => "pass".into(),
            Verdict::Fail => "fail".into(),
            Verdict::Consistent => "consistent".into(),
            Verdict::Inconsistent => "inconsistent".into(),
            Verdict::Skipped(r) => format!("skipped ({r})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
}

impl Params {
    fn group(s: &GroupSpec) -> Self {
        Params { m: Some(s.m), p: Some(s.p), n: Some(s.n), ..Default::default() }
    }

    fn rank(n: u32, family: Family) -> Self {
        Params { n: Some(n), family: Some(family), ..Default::default() }
    }

    fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (k, v) in [("m", self.m), ("p", self.p), ("n", self.n), ("N", self.power), ("deg", self.degree_bound), ("j", self.j)] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        if let Some(f) = self.family {
            parts.push(format!("{f:?}"));
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub claim_id: String,
    pub params: Params,
    pub expected: Expected,
    pub computed: Value,
    pub verdict: Verdict,
    /// First differing entry on failure, or supplementary data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Theorem,
    Conjecture,
}

fn report(claim: &str, params: Params, kind: Kind, expected: Value, provenance: Provenance, computed: Value) -> CheckReport {
    let diff = first_difference("", &expected, &computed);
    let verdict = match (kind, diff.is_none()) {
        (Kind::Theorem, true) => Verdict::Pass,
        (Kind::Theorem, false) => Verdict::Fail,
        (Kind::Conjecture, true) => Verdict::Consistent,
        (Kind::Conjecture, false) => Verdict::Inconsistent,
    };
    CheckReport {
        claim_id: claim.into(),
        params,
        expected: Expected { value: expected, provenance },
        computed,
        verdict,
        detail: diff,
    }
}

fn skipped(claim: &str, params: Params, expected: Value, provenance: Provenance, computed: Value, reason: &str) -> CheckReport {
    CheckReport {
        claim_id: claim.into(),
        params,
        expected: Expected { value: expected, provenance },
        computed,
        verdict: Verdict::Skipped(reason.into()),
        detail: None,
    }
}

/// Path and values of the first entry where `a` and `b` differ.
pub fn first_difference(path: &str, a: &Value, b: &Value) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for (k, va) in x {
                let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                match y.get(k) {
                    Some(vb) => {
                        if let Some(d) = first_difference(&sub, va, vb) {
                            return Some(d);
                        }
                    }
                    None => return Some(format!("{sub}: missing from computed")),
                }
            }
            y.keys().find(|k| !x.contains_key(*k)).map(|k| format!("{path}.{k}: not expected"))
        }
        (Value::Array(x), Value::Array(y)) => {
            for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                if let Some(d) = first_difference(&format!("{path}[{i}]"), va, vb) {
                    return Some(d);
                }
            }
            (x.len() != y.len()).then(|| format!("{path}: length {} vs {}", x.len(), y.len()))
        }
        _ => (a != b).then(|| format!("{path}: expected {a}, computed {b}")),
    }
}

/// Inputs for a suite run: `n` alone selects a rank (symmetric group or, with
/// `m = 2, p = 1`, hyperoctahedral group); no `n` runs the default grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteArgs {
    pub m: Option<u32>,
    pub p: Option<u32>,
    pub n: Option<u32>,
    pub cell_budget: u64,
}

impl SuiteArgs {
    fn groups(&self, default: &[(u32, u32, u32)]) -> Result<Vec<GroupSpec>> {
        match self.n {
            Some(n) => Ok(vec![GroupSpec::new(self.m.unwrap_or(1), self.p.unwrap_or(1), n)?]),
            None => default.iter().map(|&(m, p, n)| GroupSpec::new(m, p, n)).collect(),
        }
    }

    fn family(&self) -> Result<Option<Family>> {
        match (self.m.unwrap_or(1), self.p.unwrap_or(1)) {
            (1, 1) if self.m.is_some() => Ok(Some(Family::A)),
            (1, 1) => Ok(None),
            (2, 1) => Ok(Some(Family::B)),
            (m, p) => Err(Error::Unsupported(format!("no conjectured series for G({m},{p},n)"))),
        }
    }
}

/// Groups run by the group-based suites when no parameters are given.
pub const DEFAULT_GROUPS: &[(u32, u32, u32)] = &[
    (1, 1, 3),
    (1, 1, 4),
    (2, 2, 2),
    (2, 2, 3),
    (3, 1, 2),
    (4, 1, 2),
    (5, 1, 2),
    (2, 1, 2),
    (2, 1, 3),
    (4, 2, 2),
    (3, 3, 3),
];

/// Printed `Hilb(1, z)` row: `(m, p, n, harmonics, closure)`, coefficients
/// listed from `z^0` up; `None` marks a closure equal to the harmonics.
pub type PublishedRow = (u32, u32, u32, &'static [i64], Option<&'static [i64]>);

pub const PUBLISHED_TABLE: &[PublishedRow] = &[
    (1, 1, 3, &[6, 6, 1], None),
    (1, 1, 4, &[24, 36, 14, 1], None),
    (1, 1, 5, &[120, 240, 150, 30, 1], None),
    (1, 1, 6, &[720, 1800, 1560, 540, 62, 1], None),
    (2, 1, 4, &[384, 768, 464, 80, 1], None),
    (2, 1, 5, &[3840, 9600, 8160, 2640, 242, 1], None),
    (2, 2, 2, &[4, 4, 1], None),
    (2, 2, 3, &[24, 36, 14, 1], None),
    (2, 2, 4, &[192, 384, 240, 48, 1], Some(&[192, 384, 238, 46, 1])),
    (2, 2, 5, &[1920, 4800, 4160, 1440, 162, 1], Some(&[1920, 4800, 4140, 1405, 147, 1])),
    (3, 1, 2, &[18, 21, 4], None),
    (4, 1, 2, &[32, 40, 9], None),
    (5, 1, 2, &[50, 65, 16], None),
    (5, 1, 3, &[750, 1350, 665, 64], None),
    (3, 1, 4, &[1944, 4212, 2862, 609, 16], None),
    (4, 1, 4, &[6144, 13824, 9920, 2320, 81], None),
    (4, 2, 4, &[3072, 7104, 5408, 1451, 76], Some(&[3072, 6144, 3616, 544, 1])),
    (4, 4, 4, &[1536, 3072, 1920, 416, 33], Some(&[1536, 3072, 1822, 286, 1])),
];

pub fn published_row(spec: &GroupSpec) -> Option<(QPoly, QPoly)> {
    PUBLISHED_TABLE.iter().find(|r| (r.0, r.1, r.2) == (spec.m, spec.p, spec.n)).map(|r| {
        let sh = QPoly::from_coeffs(r.3.iter().copied());
        let cl = r.4.map_or_else(|| sh.clone(), |c| QPoly::from_coeffs(c.iter().copied()));
        (sh, cl)
    })
}

fn zstr(p: &QPoly) -> Value {
    Value::String(p.to_string_in("z"))
}

fn qstr(p: &QPoly) -> Value {
    Value::String(p.to_string_in("q"))
}

/// Harmonics of a group, or a skip reason when the group is over budget.
fn cells_for(gd: &GroupData, budget: u64) -> std::result::Result<HarmonicCells, String> {
    harmonic_cells(gd, budget).map_err(|e| match e {
        Error::Infeasible { estimate, budget, .. } => format!("estimated {estimate} matrix entries exceeds budget {budget}"),
        other => other.to_string(),
    })
}

fn closure_table(gd: &GroupData) -> Result<DimTable> {
    let cells = derivative_closure_cells(gd)?;
    Ok(DimTable::from_cells(&gd.spec, cells.iter().map(|(&(i, k), c)| (i, k, c.dim() as u64))))
}

/// Groups covered by the positive top-form result: real groups and `G(m,1,n)`.
pub fn top_forms_positive(s: &GroupSpec) -> bool {
    s.p == 1 || s.m <= 2 || s.n == 1 || (s.m == s.p && s.n == 2)
}

fn is_real(s: &GroupSpec) -> bool {
    s.m <= 2 || (s.m == s.p && s.n == 2) || (s.n == 1 && s.m / s.p <= 2)
}

pub fn run_suite(name: &str, args: &SuiteArgs) -> Result<Vec<CheckReport>> {
    let per_group = |default: &[(u32, u32, u32)], f: fn(&GroupSpec, u64) -> Result<Vec<CheckReport>>| -> Result<Vec<CheckReport>> {
        let groups = args.groups(default)?;
        let out: Vec<Vec<CheckReport>> = groups.par_iter().map(|s| f(s, args.cell_budget)).collect::<Result<_>>()?;
        Ok(out.into_iter().flatten().collect())
    };
    let grid = artin_grid();
    match name {
        "artin-mpn" => per_group(&grid, artin_suite),
        "grobner-mpn" => per_group(&grid, grobner_suite),
        "exact" => per_group(DEFAULT_GROUPS, exact_suite),
        "support-b" => per_group(DEFAULT_GROUPS, support_b_suite),
        "support-c" => per_group(DEFAULT_GROUPS, support_c_suite),
        "top-forms" => per_group(DEFAULT_GROUPS, top_forms_suite),
        "operator-closure" => per_group(DEFAULT_GROUPS, operator_suite),
        "no-dice" => per_group(DEFAULT_GROUPS, no_dice_suite),
        "table-calcs" => {
            let rows: Vec<(u32, u32, u32)> = PUBLISHED_TABLE.iter().map(|r| (r.0, r.1, r.2)).collect();
            per_group(&rows, table_suite)
        }
        "zabrocki" => zabrocki_suite(args),
        "hilb-alt" => hilb_alt_suite(args),
        "q-identities" => Ok(q_identities_suite(args)),
        "laplacian" => Ok(laplacian_suite(args)),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

/// Every `(m, p, n)` with `m ≤ 4`, `p | m`, `n ≤ 4`.
pub fn artin_grid() -> Vec<(u32, u32, u32)> {
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

fn artin_suite(s: &GroupSpec, _: u64) -> Result<Vec<CheckReport>> {
    let (m, p, n) = (s.m, s.p, s.n);
    let basis = enumerate_artin(m, p, n)?;
    let recursive: Vec<Vec<u32>> = artin_recursive(m, p, n)?.into_iter().collect();
    let hook_free: Vec<Vec<u32>> = staircase_diagrams(m, n).into_iter().filter(|a| is_hook_free(a, m, p)).collect();
    let main = report(
        "thm:Artin_mpn",
        Params::group(s),
        Kind::Theorem,
        json!({"count": s.order.to_string(), "hilbert": qstr(&artin_hilbert(m, p, n)?), "recursion_agrees": true}),
        Provenance::Formula,
        json!({
            "count": basis.len().to_string(),
            "hilbert": qstr(&generating_polynomial(&basis)),
            "recursion_agrees": recursive == basis,
        }),
    );
    let hooks = report(
        "lem:hooks",
        Params::group(s),
        Kind::Theorem,
        json!({"hook_free_equals_artin": true}),
        Provenance::Oracle,
        json!({"hook_free_equals_artin": hook_free == basis}),
    );
    Ok(vec![main, hooks])
}

fn grobner_suite(s: &GroupSpec, _: u64) -> Result<Vec<CheckReport>> {
    let (m, p, n) = (s.m, s.p, s.n);
    let explicit = paper_basis(m, p, n)?;
    let gb = buchberger(&explicit)?;
    let standard = gb.standard_monomials()?;
    let mut lms = paper_leading_monomials(m, p, n);
    lms.sort_by(|a, b| b.cmp(a));
    let artin = enumerate_artin(m, p, n)?;
    Ok(vec![report(
        "thm:grobner_mpn",
        Params::group(s),
        Kind::Theorem,
        json!({
            "is_groebner_basis": true,
            "is_reduced": true,
            "completion_is_stable": true,
            "leading_monomials": lms,
            "standard_monomials_are_artin": true,
            "standard_count": s.order.to_string(),
            "hilbert": qstr(&artin_hilbert(m, p, n)?),
        }),
        Provenance::Formula,
        json!({
            "is_groebner_basis": is_groebner_basis(&explicit),
            "is_reduced": is_reduced(&explicit),
            "completion_is_stable": gb == as_reduced(explicit.clone()),
            "leading_monomials": gb.leading_monomials(),
            "standard_monomials_are_artin": standard == artin,
            "standard_count": standard.len().to_string(),
            "hilbert": qstr(&generating_polynomial(&standard)),
        }),
    )])
}

fn exact_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let gd = build_group(s.m, s.p, s.n)?;
    let claims = ["thm:exact", "cor:Hilb", "cor:dif_difdagger", "lem:d_preserved"];
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => {
            return Ok(claims.iter().map(|c| skipped(c, Params::group(s), Value::Null, Provenance::Formula, Value::Null, &reason)).collect())
        }
    };
    let ex = exactness_check(&gd, &cells)?;
    let hilb = cells.dim_table().hilbert().substitute_z(-1, 1);
    let detail = |r: &mut CheckReport| {
        if r.verdict == Verdict::Fail {
            if let Some((i, k, msg)) = ex.failures.first() {
                r.detail = Some(format!("({i},{k}): {msg}"));
            }
        }
    };
    let mut out = vec![
        report(
            claims[0],
            Params::group(s),
            Kind::Theorem,
            json!(vec![true; s.n as usize + 1]),
            Provenance::Formula,
            json!(ex.exact_by_k),
        ),
        report(claims[1], Params::group(s), Kind::Theorem, qstr(&QPoly::one()), Provenance::Formula, qstr(&hilb)),
        report(claims[2], Params::group(s), Kind::Theorem, json!(true), Provenance::Formula, json!(ex.hodge)),
        report(claims[3], Params::group(s), Kind::Theorem, json!(true), Provenance::Formula, json!(ex.preserved)),
    ];
    out.iter_mut().for_each(detail);
    Ok(out)
}

fn support_b_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let gd = build_group(s.m, s.p, s.n)?;
    let (m, n) = (s.m as u64, s.n as u64);
    let mut expected = Vec::new();
    for i in 0..=s.deg_vandermondian {
        for k in 0..=s.n {
            if i as u64 + k as u64 + m * binomial(k as u64, 2) <= m * binomial(n, 2) + (m - 1) * n {
                expected.push((i, k));
            }
        }
    }
    expected.sort();
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => return Ok(vec![skipped("thm:B", Params::group(s), json!(expected), Provenance::Formula, Value::Null, &reason)]),
    };
    let observed = support_check(&gd, &cells)?.observed;
    if s.p != 1 {
        return Ok(vec![skipped("thm:B", Params::group(s), json!(expected), Provenance::Formula, json!(observed), "needs p = 1")]);
    }
    Ok(vec![report("thm:B", Params::group(s), Kind::Theorem, json!(expected), Provenance::Formula, json!(observed))])
}

fn support_c_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let gd = build_group(s.m, s.p, s.n)?;
    let top = s.deg_vandermondian;
    let d_delta = gd.exterior_d.apply(&gd.vandermondian);
    let expected = json!({
        "total_degrees": (0..=top).collect::<Vec<_>>(),
        "top_slice_dim": 1 + usize::from(!d_delta.is_zero()),
        "top_slice_spanned_by_delta_and_d_delta": true,
    });
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => return Ok(vec![skipped("thm:C", Params::group(s), expected, Provenance::Formula, Value::Null, &reason)]),
    };
    let r = support_check(&gd, &cells)?;
    let mut totals: Vec<u32> = r.observed.iter().map(|(i, k)| i + k).collect();
    totals.sort();
    totals.dedup();
    let computed = json!({
        "total_degrees": totals,
        "top_slice_dim": r.top_slice_dim,
        "top_slice_spanned_by_delta_and_d_delta": r.top_slice_spanned.unwrap_or(false),
    });
    let mut out = vec![if r.top_slice_spanned.is_some() {
        report("thm:C", Params::group(s), Kind::Theorem, expected, Provenance::Formula, computed)
    } else {
        skipped("thm:C", Params::group(s), expected, Provenance::Formula, computed, "p = m > 1 is outside the hypothesis")
    }];
    if (s.m, s.p, s.n) == (2, 2, 2) {
        let det = det_isotypic_basis(&gd, &cells)?;
        let inside = cells
            .cells()
            .filter(|(&(i, k), _)| i + k == r.top_total_degree)
            .all(|(b, c)| c.dim() == 0 || det.get(b).is_some_and(|d| d == c));
        out.push(report(
            "ex:G222",
            Params::group(s),
            Kind::Theorem,
            json!({"top_total_degree": 2, "top_slice_dim": 4, "top_slice_is_determinant_part": true}),
            Provenance::Published,
            json!({"top_total_degree": r.top_total_degree, "top_slice_dim": r.top_slice_dim, "top_slice_is_determinant_part": inside}),
        ));
    }
    Ok(out)
}

fn top_forms_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let gd = build_group(s.m, s.p, s.n)?;
    let params = Params::group(s);
    let cells = cells_for(&gd, budget);
    let r = s.rank;
    let mut out = Vec::new();
    let xdeg_expected = json!(top_xdeg_formula(s));
    match &cells {
        Ok(c) => out.push(report(
            "lem:top_xdeg",
            params.clone(),
            Kind::Theorem,
            xdeg_expected,
            Provenance::Formula,
            json!(c.dim_table().top_xdeg(r)),
        )),
        Err(reason) => out.push(skipped("lem:top_xdeg", params.clone(), xdeg_expected, Provenance::Formula, Value::Null, reason)),
    }
    let fitting_claims = ["lem:Gamma_G_in_Hprime", "lem:top_harmonics", "prop:H_prime_annihilator"];
    if s.m == 1 {
        for c in fitting_claims {
            out.push(skipped(c, params.clone(), Value::Null, Provenance::Formula, Value::Null, "symmetric groups need the reduced representation"));
        }
    } else {
        let fit = fitting_structures(&gd)?;
        out.push(report(fitting_claims[0], params.clone(), Kind::Theorem, json!(true), Provenance::Formula, json!(fit.gamma_in_hprime)));
        match &cells {
            Ok(c) => {
                let top: Vec<u64> = (0..=s.deg_vandermondian).map(|i| c.dim(i as i64, s.n as i64) as u64).collect();
                out.push(report(fitting_claims[1], params.clone(), Kind::Theorem, json!(fit.hprime_dims), Provenance::Oracle, json!(top)));
            }
            Err(reason) => out.push(skipped(fitting_claims[1], params.clone(), json!(fit.hprime_dims), Provenance::Oracle, Value::Null, reason)),
        }
        if top_forms_positive(s) {
            out.push(report(fitting_claims[2], params.clone(), Kind::Theorem, json!(true), Provenance::Formula, json!(fit.annihilator_matches())));
        } else {
            out.push(skipped(fitting_claims[2], params.clone(), json!(true), Provenance::Formula, json!(fit.annihilator_matches()), "outside the hypothesis"));
        }
    }
    // Top θ-degree part of the operator identity.
    let closure = closure_table(&gd)?;
    match &cells {
        Ok(c) => {
            let sh: Vec<u64> = (0..=s.deg_vandermondian).map(|i| c.dim(i as i64, r as i64) as u64).collect();
            let cl: Vec<u64> = (0..=s.deg_vandermondian).map(|i| closure.get(i, r)).collect();
            if top_forms_positive(s) {
                out.push(report("thm:A2", params, Kind::Theorem, json!(sh), Provenance::Oracle, json!(cl)));
            } else {
                out.push(skipped("thm:A2", params, json!(sh), Provenance::Oracle, json!(cl), "outside the hypothesis"));
            }
        }
        Err(reason) => out.push(skipped("thm:A2", params, Value::Null, Provenance::Oracle, Value::Null, reason)),
    }
    Ok(out)
}

fn operator_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let gd = build_group(s.m, s.p, s.n)?;
    let params = Params::group(s);
    let r = s.rank as u64;
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => {
            return Ok(["thm:semi-invariants", "closure-in-harmonics", "thm:Steinberg", "thm:A1"]
                .iter()
                .map(|c| skipped(c, params.clone(), Value::Null, Provenance::Formula, Value::Null, &reason))
                .collect())
        }
    };
    let mut out = Vec::new();

    let mut expected = json!({"by_k": (0..=r).map(|k| binomial(r, k)).collect::<Vec<_>>()});
    let det = det_isotypic_basis(&gd, &cells);
    let by_k: Vec<u64> = match &det {
        Ok(d) => (0..=s.rank).map(|k| d.iter().filter(|(b, _)| b.1 == k).map(|(_, c)| c.dim() as u64).sum()).collect(),
        Err(_) => Vec::new(),
    };
    let mut computed = json!({"by_k": by_k});
    if s.m <= 2 {
        let elems = det_isotypic_elements(&gd);
        let group = group_matrices(s)?;
        let isotypic = group.iter().all(|g| {
            let sign = crate::Rational::from_integer(BigInt::from(g.determinant()));
            elems.iter().all(|(_, f)| g.act(f) == f.scale(&sign))
        });
        expected["determinant_isotypic"] = json!(true);
        computed["determinant_isotypic"] = json!(isotypic);
    }
    let mut rep = report("thm:semi-invariants", params.clone(), Kind::Theorem, expected, Provenance::Formula, computed);
    if let Err(e) = det {
        rep.detail = Some(e.to_string());
    }
    out.push(rep);

    let closure = derivative_closure_cells(&gd)?;
    let contained = closure.iter().all(|(&(i, k), c)| c.dim() == 0 || cells.get(i, k).is_some_and(|h| h.space.contains_subspace(&c.space)));
    out.push(report("closure-in-harmonics", params.clone(), Kind::Theorem, json!(true), Provenance::Formula, json!(contained)));

    let closure_t = DimTable::from_cells(s, closure.iter().map(|(&(i, k), c)| (i, k, c.dim() as u64)));
    let mut classical = QPoly::one();
    for &d in &s.degrees {
        classical = &classical * &q_integer(d);
    }
    out.push(report(
        "thm:Steinberg",
        params.clone(),
        Kind::Theorem,
        qstr(&classical),
        Provenance::Formula,
        qstr(&closure_t.hilbert().z_slice(0)),
    ));

    let sh_t = cells.dim_table();
    let (exp, comp) = (json!(sh_t.dims), json!(closure_t.dims));
    if s.rank <= 2 && (s.p == 1 || is_real(s)) {
        out.push(report("thm:A1", params, Kind::Theorem, exp, Provenance::Oracle, comp));
    } else if s.p == 1 {
        out.push(report("conj:A", params, Kind::Conjecture, exp, Provenance::Oracle, comp));
    } else {
        let mut rep = skipped("eq:thm:A", params, exp.clone(), Provenance::Oracle, comp.clone(), "no claim for this group");
        rep.detail = first_difference("dims", &exp, &comp);
        out.push(rep);
    }
    Ok(out)
}

fn no_dice_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let params = Params::group(s);
    let expected = json!({"annihilator_equals_jacobian_ideal": false, "harmonic_top_xdeg_exceeds_determinant_part": true});
    if top_forms_positive(s) {
        return Ok(vec![skipped("lem:no_dice", params, expected, Provenance::Formula, Value::Null, "covered by the positive case")]);
    }
    let gd = build_group(s.m, s.p, s.n)?;
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => return Ok(vec![skipped("lem:no_dice", params, expected, Provenance::Formula, Value::Null, &reason)]),
    };
    let fit = fitting_structures(&gd)?;
    let table = cells.dim_table();
    let r = s.rank;
    let sh_top = table.top_xdeg(r).unwrap_or(0);
    let det_xdeg = s.deg_vandermondian - s.coexponents.iter().sum::<u32>();
    let sh_dim: u64 = (0..=s.deg_vandermondian).map(|i| table.get(i, r)).sum();
    let mut rep = report(
        "lem:no_dice",
        params,
        Kind::Theorem,
        expected,
        Provenance::Formula,
        json!({"annihilator_equals_jacobian_ideal": fit.annihilator_matches(), "harmonic_top_xdeg_exceeds_determinant_part": sh_top > det_xdeg}),
    );
    if rep.detail.is_none() {
        rep.detail = Some(format!("top θ-degree: harmonics dimension {sh_dim}, x-degree ≤ {sh_top}; determinant part dimension 1, x-degree {det_xdeg}"));
    }
    Ok(vec![rep])
}

fn table_suite(s: &GroupSpec, budget: u64) -> Result<Vec<CheckReport>> {
    let params = Params::group(s);
    let Some((sh, cl)) = published_row(s) else {
        return Ok(vec![skipped("tab:calcs", params, Value::Null, Provenance::Published, Value::Null, "no published row")]);
    };
    let expected = json!({"harmonics": zstr(&sh), "closure": zstr(&cl)});
    let gd = build_group(s.m, s.p, s.n)?;
    let cells = match cells_for(&gd, budget) {
        Ok(c) => c,
        Err(reason) => return Ok(vec![skipped("tab:calcs", params, expected, Provenance::Published, Value::Null, &reason)]),
    };
    let closure = closure_table(&gd)?;
    let computed = json!({"harmonics": zstr(&cells.dim_table().at_q1()), "closure": zstr(&closure.at_q1())});
    Ok(vec![report("tab:calcs", params, Kind::Theorem, expected, Provenance::Published, computed)])
}

fn families(args: &SuiteArgs) -> Result<Vec<(u32, Family)>> {
    Ok(match (args.n, args.family()?) {
        (Some(n), Some(f)) => vec![(n, f)],
        (Some(n), None) => vec![(n, Family::A)],
        (None, Some(Family::B)) => vec![(2, Family::B), (3, Family::B)],
        (None, _) => vec![(2, Family::A), (3, Family::A), (4, Family::A), (2, Family::B), (3, Family::B)],
    })
}

fn zabrocki_suite(args: &SuiteArgs) -> Result<Vec<CheckReport>> {
    let cases = families(args)?;
    let out: Vec<CheckReport> = cases
        .par_iter()
        .map(|&(n, family)| -> Result<CheckReport> {
            let (m, claim, top) = match family {
                Family::A => (1, "conj:Hilb_type_A", n as i64 - 1),
                Family::B => (2, "conj:Hilb_type_B", n as i64),
            };
            let expected: Vec<Value> = (0..=top).map(|k| qstr(&zabrocki_hilbert(n, k, family))).collect();
            let gd = build_group(m, 1, n)?;
            let params = Params::rank(n, family);
            Ok(match cells_for(&gd, args.cell_budget) {
                Ok(cells) => {
                    let h = cells.dim_table().hilbert();
                    let computed: Vec<Value> = (0..=top).map(|k| qstr(&h.z_slice(k as u32))).collect();
                    report(claim, params, Kind::Conjecture, json!(expected), Provenance::Formula, json!(computed))
                }
                Err(reason) => skipped(claim, params, json!(expected), Provenance::Formula, Value::Null, &reason),
            })
        })
        .collect::<Result<_>>()?;
    Ok(out)
}

fn hilb_alt_suite(args: &SuiteArgs) -> Result<Vec<CheckReport>> {
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => vec![2, 3, 4],
    };
    let per_n: Vec<Vec<CheckReport>> = ns
        .par_iter()
        .map(|&n| -> Result<Vec<CheckReport>> {
            let gd = build_group(1, 1, n)?;
            let cells = cells_for(&gd, args.cell_budget);
            Ok((1..n)
                .map(|j| {
                    let params = Params { j: Some(j), ..Params::rank(n, Family::A) };
                    let expected = qstr(&alternating_sum_check(n, Family::A, j));
                    match &cells {
                        Ok(c) => report(
                            "conj:Hilb_alt",
                            params,
                            Kind::Conjecture,
                            expected,
                            Provenance::Formula,
                            qstr(&c.dim_table().hilbert().substitute_z(-1, j)),
                        ),
                        Err(reason) => skipped("conj:Hilb_alt", params, expected, Provenance::Formula, Value::Null, reason),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn q_identities_suite(args: &SuiteArgs) -> Vec<CheckReport> {
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => (1..=8).collect(),
    };
    let mut out = Vec::new();
    for family in [Family::A, Family::B] {
        for &n in &ns {
            let claim = match family {
                Family::A => "alternating-sum:type_A",
                Family::B => "alternating-sum:type_B",
            };
            let expected_total = match family {
                Family::A => q_factorial(n).eval(1),
                Family::B => GroupSpec::new(2, 1, n).map(|s| s.order).unwrap_or_default(),
            };
            out.push(report(
                claim,
                Params::rank(n, family),
                Kind::Theorem,
                json!({"alternating_sum": "1", "classical_part_at_q1": expected_total.to_string()}),
                Provenance::Formula,
                json!({
                    "alternating_sum": alternating_sum_check(n, family, 1).to_string_in("q"),
                    "classical_part_at_q1": zabrocki_hilbert(n, 0, family).eval(1).to_string(),
                }),
            ));
        }
    }
    out
}

fn laplacian_suite(args: &SuiteArgs) -> Vec<CheckReport> {
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => vec![1, 2, 3],
    };
    let mut cases = Vec::new();
    for power in 1..=3 {
        for &n in &ns {
            cases.push((power, n));
        }
    }
    cases
        .par_iter()
        .map(|&(power, n)| {
            let params = Params { n: Some(n), power: Some(power), degree_bound: Some(6), ..Default::default() };
            report(
                "lem:power_sum_Laplacian",
                params,
                Kind::Theorem,
                json!(true),
                Provenance::Formula,
                json!(laplacian_spectrum_check(power, n as usize, 6)),
            )
        })
        .collect()
}

/// One JSON object per line.
pub fn to_jsonl(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&serde_json::to_string(r).expect("report serialises"));
        s.push('\n');
    }
    s
}

/// Aligned human-readable table of claim, parameters and verdict.
pub fn summary(reports: &[CheckReport]) -> String {
    let w0 = reports.iter().map(|r| r.claim_id.len()).max().unwrap_or(5).max(5);
    let w1 = reports.iter().map(|r| r.params.describe().len()).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let _ = writeln!(s, "{:w0$}  {:w1$}  verdict", "claim", "params");
    for r in reports {
        let _ = write!(s, "{:w0$}  {:w1$}  {}", r.claim_id, r.params.describe(), r.verdict.label());
        if let (true, Some(d)) = (r.verdict.is_failure(), &r.detail) {
            let _ = write!(s, "  [{d}]");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(m: u32, p: u32, n: u32) -> SuiteArgs {
        SuiteArgs { m: Some(m), p: Some(p), n: Some(n), cell_budget: crate::harmonics::DEFAULT_CELL_BUDGET }
    }

    #[test]
    fn table_row_for_s3() {
        let r = run_suite("table-calcs", &args(1, 1, 3)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].verdict, Verdict::Pass);
        assert_eq!(r[0].computed["harmonics"], "z^2 + 6*z + 6");
    }

    #[test]
    fn no_dice_for_g422() {
        let r = run_suite("no-dice", &args(4, 2, 2)).unwrap();
        assert_eq!(r[0].verdict, Verdict::Pass, "{:?}", r[0]);
    }

    #[test]
    fn zabrocki_rank_two() {
        let a = SuiteArgs { m: None, p: None, n: Some(2), cell_budget: 1 << 30 };
        let r = run_suite("zabrocki", &a).unwrap();
        assert_eq!(r[0].verdict, Verdict::Consistent);
        assert_eq!(r[0].computed, json!(["q + 1", "1"]));
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suite("nope", &args(1, 1, 2)), Err(Error::UnknownSuite("nope".into())));
    }

    #[test]
    fn skipped_when_over_budget() {
        let a = SuiteArgs { cell_budget: 10, ..args(1, 1, 4) };
        let r = run_suite("table-calcs", &a).unwrap();
        assert!(matches!(r[0].verdict, Verdict::Skipped(_)));
    }

    #[test]
    fn difference_paths() {
        let d = first_difference("", &json!({"a": [1, 2]}), &json!({"a": [1, 3]}));
        assert_eq!(d.as_deref(), Some("a[1]: expected 2, computed 3"));
    }
}
