//! Kuo condensation on region duals and the case recurrences built on it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::matchgraph::{
    count_matchings, dual_graph, matching_generating_function, CountError, MatchGraph, Part,
};
use crate::region::{build_region, RegionSpec, SpecInvalid};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CondensationError {
    #[error("{0} has total size at most 4 and is resolved by the base table")]
    BaseCase(RegionSpec),
    #[error("no recurrence case matches {0}")]
    CaseUnreachable(RegionSpec),
    #[error("recurrence division for {0} is not exact")]
    DivisionInexact(RegionSpec),
    #[error("sub-region {sub} of {parent} is invalid: {source}")]
    InvalidSubSpec {
        parent: RegionSpec,
        sub: RegionSpec,
        source: SpecInvalid,
    },
    #[error("corner vertices not found: {0}")]
    CornersNotFound(&'static str),
    #[error(transparent)]
    Spec(#[from] SpecInvalid),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Four vertices on the outer face, in cyclic order `x, y, z, t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CornerQuad {
    /// Western corner, black.
    pub x: usize,
    /// Southern corner, white.
    pub y: usize,
    /// Eastern corner, black.
    pub z: usize,
    /// Northern corner, white.
    pub t: usize,
}

/// Corner vertices of a region dual or an Aztec diamond graph.
///
/// `t` and `y` are the highest and lowest white vertices; `x` is the highest
/// black vertex in the leftmost column and `z` the lowest black vertex in the
/// rightmost column. Columns are `floor(x / unit)`. Ties go to the smaller x.
pub fn pick_corners(g: &MatchGraph) -> Result<CornerQuad, CondensationError> {
    let unit = g.unit.max(1);
    let v = &g.vertices;
    let column = |i: usize| v[i].x.div_euclid(unit);
    let of = |part: Part| (0..v.len()).filter(move |&i| v[i].part == part);
    let highest = |i: &usize| (-v[*i].y, v[*i].x);
    let lowest = |i: &usize| (v[*i].y, v[*i].x);

    let t = of(Part::White)
        .min_by_key(highest)
        .ok_or(CondensationError::CornersNotFound("no white vertex"))?;
    let y = of(Part::White)
        .min_by_key(lowest)
        .ok_or(CondensationError::CornersNotFound("no white vertex"))?;
    let left = (0..v.len())
        .map(column)
        .min()
        .ok_or(CondensationError::CornersNotFound("empty graph"))?;
    let right = (0..v.len()).map(column).max().unwrap_or(left);
    let x = of(Part::Black)
        .filter(|&i| column(i) == left)
        .min_by_key(highest)
        .ok_or(CondensationError::CornersNotFound(
            "western extreme is not black",
        ))?;
    let z = of(Part::Black)
        .filter(|&i| column(i) == right)
        .min_by_key(lowest)
        .ok_or(CondensationError::CornersNotFound(
            "eastern extreme is not black",
        ))?;
    if x == z || y == t {
        return Err(CondensationError::CornersNotFound("corners coincide"));
    }
    Ok(CornerQuad { x, y, z, t })
}

/// The six matching counts in Kuo's identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuoCheck {
    pub quad: CornerQuad,
    #[serde(serialize_with = "as_text")]
    pub whole: BigRational,
    #[serde(serialize_with = "as_text")]
    pub without_all: BigRational,
    #[serde(serialize_with = "as_text")]
    pub without_xy: BigRational,
    #[serde(serialize_with = "as_text")]
    pub without_zt: BigRational,
    #[serde(serialize_with = "as_text")]
    pub without_tx: BigRational,
    #[serde(serialize_with = "as_text")]
    pub without_yz: BigRational,
    pub holds: bool,
}

fn as_text<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn weighted_count(g: &MatchGraph) -> Result<BigRational, CountError> {
    if g.is_unweighted() {
        count_matchings(g).map(|c| BigRational::from_integer(c.into()))
    } else {
        matching_generating_function(g)
    }
}

/// Evaluates `M(G) M(G-{x,y,z,t}) = M(G-{x,y}) M(G-{z,t}) + M(G-{t,x}) M(G-{y,z})`.
pub fn verify_kuo(g: &MatchGraph, q: &CornerQuad) -> Result<KuoCheck, CountError> {
    let m = |removed: &[usize]| weighted_count(&g.without(removed));
    let whole = m(&[])?;
    let without_all = m(&[q.x, q.y, q.z, q.t])?;
    let without_xy = m(&[q.x, q.y])?;
    let without_zt = m(&[q.z, q.t])?;
    let without_tx = m(&[q.t, q.x])?;
    let without_yz = m(&[q.y, q.z])?;
    let holds = &whole * &without_all == &without_xy * &without_zt + &without_tx * &without_yz;
    Ok(KuoCheck {
        quad: *q,
        whole,
        without_all,
        without_xy,
        without_zt,
        without_tx,
        without_yz,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    #[serde(rename = "I.1")]
    I1,
    #[serde(rename = "I.2")]
    I2,
    #[serde(rename = "I.3")]
    I3,
    #[serde(rename = "I.4")]
    I4,
    #[serde(rename = "I.5")]
    I5,
    #[serde(rename = "I.6")]
    I6,
    /// `D_1(1, …, 1, 2)`.
    #[serde(rename = "II.1")]
    II1,
    /// `D_2(1, …, 1, 2, 1)`.
    #[serde(rename = "II.2a")]
    II2a,
    /// `D_2(1, …, 1, 4)`.
    #[serde(rename = "II.2b(i)")]
    II2bI,
    /// `D_2(1, …, 1, 3, 1, …, 1, 2)` with the 3 strictly inside.
    #[serde(rename = "II.2b(ii)")]
    II2bII,
    /// `D_2(3, 1, …, 1, 2)`.
    #[serde(rename = "II.2b(iii)")]
    II2bIII,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::I1 => "I.1",
            CaseId::I2 => "I.2",
            CaseId::I3 => "I.3",
            CaseId::I4 => "I.4",
            CaseId::I5 => "I.5",
            CaseId::I6 => "I.6",
            CaseId::II1 => "II.1",
            CaseId::II2a => "II.2a",
            CaseId::II2bI => "II.2b(i)",
            CaseId::II2bII => "II.2b(ii)",
            CaseId::II2bIII => "II.2b(iii)",
        })
    }
}

impl CaseId {
    pub fn is_case_one(self) -> bool {
        matches!(
            self,
            CaseId::I1 | CaseId::I2 | CaseId::I3 | CaseId::I4 | CaseId::I5 | CaseId::I6
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityForm {
    /// `M · M_3 = 2 · M_1 · M_2`.
    Condensation,
    /// `M = factor · M_1`.
    Multiple { factor: u32 },
}

impl fmt::Display for IdentityForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityForm::Condensation => f.write_str("M*M3 = 2*M1*M2"),
            IdentityForm::Multiple { factor } => write!(f, "M = {factor}*M1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseRecurrence {
    pub case_id: CaseId,
    /// The spec after the flip the case requires (possibly the input itself).
    pub oriented: RegionSpec,
    pub sub_specs: Vec<RegionSpec>,
    pub form: IdentityForm,
}

/// `D_0()`, whose dual is the empty graph.
pub fn empty_spec() -> RegionSpec {
    RegionSpec::new(0, Vec::new())
}

fn is_empty_spec(s: &RegionSpec) -> bool {
    s.a == 0 && s.d.iter().all(|&d| d == 0)
}

fn sub(a: i64, d: Vec<i64>) -> RegionSpec {
    if a == 0 && d.iter().all(|&x| x == 0) {
        return empty_spec();
    }
    // negative entries cannot come out of a correctly dispatched case, but
    // keep them visible as invalid zero entries rather than wrapping
    RegionSpec::new(
        a.max(0) as u32,
        d.into_iter().map(|x| x.max(0) as u32).collect::<Vec<_>>(),
    )
}

/// `d[lo..=hi]` (0-based) with `dlo` taken off the first and `dhi` off the
/// last entry; both apply when the range is a single entry.
fn trim(d: &[i64], lo: usize, hi: usize, dlo: i64, dhi: i64) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    let mut s = d[lo..=hi].to_vec();
    s[0] -= dlo;
    let last = s.len() - 1;
    s[last] -= dhi;
    s
}

fn all_ones(d: &[u32]) -> bool {
    d.iter().all(|&x| x == 1)
}

fn case_two(a: u32, d: &[u32]) -> Option<(CaseId, Vec<RegionSpec>, IdentityForm)> {
    let k = d.len();
    let di: Vec<i64> = d.iter().map(|&x| i64::from(x)).collect();
    let a = i64::from(a);
    let cond = IdentityForm::Condensation;
    match a {
        1 if d[k - 1] == 2 && all_ones(&d[..k - 1]) && k >= 2 => Some((
            CaseId::II1,
            vec![sub(1, di[1..].to_vec())],
            IdentityForm::Multiple { factor: 2 },
        )),
        2 if k >= 2 && d[k - 1] == 1 && d[k - 2] == 2 && all_ones(&d[..k - 2]) => Some((
            CaseId::II2a,
            vec![
                sub(a, di[1..].to_vec()),
                sub(a - 1, di[..k - 1].to_vec()),
                sub(a - 1, di[1..k - 1].to_vec()),
            ],
            cond,
        )),
        2 if k >= 2 && d[k - 1] == 4 && all_ones(&d[..k - 1]) => Some((
            CaseId::II2bI,
            vec![
                sub(a, di[1..].to_vec()),
                sub(a - 1, trim(&di, 0, k - 1, 0, 2)),
                sub(a - 1, trim(&di, 1, k - 1, 0, 2)),
            ],
            cond,
        )),
        2 if k >= 2 && d[0] == 3 && d[k - 1] == 2 && all_ones(&d[1..k - 1]) => {
            let mut a_k = vec![1; k - 1];
            a_k.push(2);
            Some((
                CaseId::II2bIII,
                vec![RegionSpec::new(1, a_k)],
                IdentityForm::Multiple { factor: 4 },
            ))
        }
        2 if k >= 3 && d[k - 1] == 2 => {
            let inner = &d[..k - 1];
            let i = inner.iter().position(|&x| x == 3)?;
            if i == 0 || inner.iter().filter(|&&x| x != 1).count() != 1 {
                return None;
            }
            Some((
                CaseId::II2bII,
                vec![
                    sub(a, di[1..].to_vec()),
                    sub(a - 1, trim(&di, 0, i, 0, 1)),
                    sub(a - 1, trim(&di, 1, i, 0, 1)),
                ],
                cond,
            ))
        }
        _ => None,
    }
}

fn case_one(a: u32, d: &[u32]) -> Option<(CaseId, Vec<RegionSpec>)> {
    let k = d.len();
    let di: Vec<i64> = d.iter().map(|&x| i64::from(x)).collect();
    let a = i64::from(a);
    let (d1, dk) = (di[0], di[k - 1]);
    // smallest index (0-based) > 0 with d >= 2, and largest < k-1 with d >= 2
    let m_idx = (1..k).find(|&i| di[i] >= 2);
    let q_idx = (0..k.saturating_sub(1)).rev().find(|&i| di[i] >= 2);
    let last_minus = |t: i64| {
        let mut s = di.clone();
        s[k - 1] -= t;
        s
    };
    let upto_q_minus_one = |q: usize| {
        let mut s = di[..=q].to_vec();
        s[q] -= 1;
        s
    };
    Some(if d1 >= 3 {
        let mut first = di.clone();
        first[0] -= 2;
        (
            CaseId::I1,
            vec![
                sub(a - 1, first),
                sub(a - 1, last_minus(2)),
                sub(a - 2, trim(&di, 0, k - 1, 2, 2)),
            ],
        )
    } else if d1 == 2 && dk >= 3 {
        let m = m_idx?;
        let big_m = m as i64 + 1;
        (
            CaseId::I2,
            vec![
                sub(a - big_m, trim(&di, m, k - 1, 1, 0)),
                sub(a - 1, last_minus(2)),
                sub(a - big_m - 1, trim(&di, m, k - 1, 1, 2)),
            ],
        )
    } else if d1 == 1 && dk >= 3 {
        (
            CaseId::I3,
            vec![
                sub(a, di[1..].to_vec()),
                sub(a - 1, last_minus(2)),
                sub(a - 1, trim(&di, 1, k - 1, 0, 2)),
            ],
        )
    } else if d1 == 2 && dk == 2 {
        let m = m_idx?;
        let q = q_idx?;
        let big_m = m as i64 + 1;
        (
            CaseId::I4,
            vec![
                sub(a - big_m, trim(&di, m, k - 1, 1, 0)),
                sub(a - 1, upto_q_minus_one(q)),
                sub(a - big_m - 1, trim(&di, m, q, 1, 1)),
            ],
        )
    } else if d1 == 1 && dk == 1 {
        (
            CaseId::I5,
            vec![
                sub(a, di[1..].to_vec()),
                sub(a - 1, di[..k - 1].to_vec()),
                sub(a - 1, di[1..k - 1].to_vec()),
            ],
        )
    } else if d1 == 1 && dk == 2 {
        let q = q_idx?;
        (
            CaseId::I6,
            vec![
                sub(a, di[1..].to_vec()),
                sub(a - 1, upto_q_minus_one(q)),
                sub(a - 1, trim(&di, 1, q, 0, 1)),
            ],
        )
    } else {
        return None;
    })
}

/// Chooses the case and its sub-regions for a valid spec with `T >= 5`.
pub fn case_recurrence(spec: &RegionSpec) -> Result<CaseRecurrence, CondensationError> {
    build_region(spec)?;
    let t = spec.total_size();
    if t <= 4 {
        return Err(CondensationError::BaseCase(spec.clone()));
    }
    let a = spec.a;
    let w = spec.width() as u32;
    let flipped = spec.flipped().expect("valid regions have positive width");

    if a.min(w) < 3 {
        let mut candidates = Vec::new();
        if a <= w {
            candidates.push(spec.clone());
        }
        if w <= a {
            candidates.push(flipped);
        }
        for c in candidates {
            if let Some((case_id, sub_specs, form)) = case_two(c.a, &c.d) {
                return Ok(CaseRecurrence {
                    case_id,
                    oriented: c,
                    sub_specs,
                    form,
                });
            }
        }
        return Err(CondensationError::CaseUnreachable(spec.clone()));
    }

    let oriented = if spec.d[0] > spec.d[spec.d.len() - 1] {
        flipped
    } else {
        spec.clone()
    };
    if oriented.d.len() == 1 {
        let d1 = i64::from(oriented.d[0]);
        let a = i64::from(oriented.a);
        return Ok(CaseRecurrence {
            case_id: CaseId::I1,
            sub_specs: vec![
                sub(a - 1, vec![d1 - 2]),
                sub(a - 1, vec![d1 - 2]),
                sub(a - 2, vec![d1 - 4]),
            ],
            oriented,
            form: IdentityForm::Condensation,
        });
    }
    let (case_id, sub_specs) = case_one(oriented.a, &oriented.d)
        .ok_or_else(|| CondensationError::CaseUnreachable(spec.clone()))?;
    Ok(CaseRecurrence {
        case_id,
        oriented,
        sub_specs,
        form: IdentityForm::Condensation,
    })
}

/// Tiling counts of every valid spec with `T <= 4`, computed once by the
/// transfer-matrix counter.
pub const BASE_TABLE: [(u32, &[u32], u32); 7] = [
    (1, &[2], 2),
    (1, &[1, 2], 4),
    (2, &[2, 1], 4),
    (1, &[1, 1, 2], 8),
    (2, &[1, 2, 1], 16),
    (3, &[2, 1, 1], 8),
    (2, &[4], 8),
];

fn base_value(spec: &RegionSpec) -> Option<BigUint> {
    BASE_TABLE
        .iter()
        .find(|(a, d, _)| *a == spec.a && *d == spec.d.as_slice())
        .map(|&(_, _, m)| BigUint::from(m))
}

/// Recursive counter with a memo table keyed on canonical specs.
///
/// Safe to share between threads; the table only grows.
#[derive(Debug, Default)]
pub struct Condenser {
    memo: RwLock<HashMap<RegionSpec, BigUint>>,
}

impl Condenser {
    pub fn new() -> Self {
        Condenser::default()
    }

    /// Starts from previously computed values (keys are canonicalized).
    pub fn with_entries(entries: impl IntoIterator<Item = (RegionSpec, BigUint)>) -> Self {
        let memo = entries
            .into_iter()
            .map(|(s, m)| (s.canonical(), m))
            .collect();
        Condenser {
            memo: RwLock::new(memo),
        }
    }

    /// Snapshot of the memo table, sorted by spec.
    pub fn entries(&self) -> Vec<(RegionSpec, BigUint)> {
        let memo = self.memo.read().expect("memo lock");
        let mut out: Vec<_> = memo.iter().map(|(s, m)| (s.clone(), m.clone())).collect();
        out.sort();
        out
    }

    pub fn count(&self, spec: &RegionSpec) -> Result<BigUint, CondensationError> {
        if is_empty_spec(spec) {
            return Ok(BigUint::one());
        }
        let key = spec.canonical();
        if let Some(m) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(m.clone());
        }
        build_region(spec)?;
        let value = match base_value(spec) {
            Some(m) => m,
            None => self.solve(spec)?,
        };
        self.memo
            .write()
            .expect("memo lock")
            .insert(key, value.clone());
        Ok(value)
    }

    fn solve(&self, spec: &RegionSpec) -> Result<BigUint, CondensationError> {
        let rec = case_recurrence(spec)?;
        let mut subs = Vec::with_capacity(rec.sub_specs.len());
        for s in &rec.sub_specs {
            let m = self.count(s).map_err(|e| match e {
                CondensationError::Spec(source) => CondensationError::InvalidSubSpec {
                    parent: spec.clone(),
                    sub: s.clone(),
                    source,
                },
                other => other,
            })?;
            subs.push(m);
        }
        match rec.form {
            IdentityForm::Multiple { factor } => Ok(&subs[0] * factor),
            IdentityForm::Condensation => {
                let numerator = BigUint::from(2u8) * &subs[0] * &subs[1];
                let (q, r) = numerator.div_rem(&subs[2]);
                if subs[2].is_zero() || !r.is_zero() {
                    return Err(CondensationError::DivisionInexact(spec.clone()));
                }
                Ok(q)
            }
        }
    }
}

/// Counts tilings through the case recurrences with a fresh memo table.
pub fn condensation_count(spec: &RegionSpec) -> Result<BigUint, CondensationError> {
    Condenser::new().count(spec)
}

/// Width and regular-cell count predicted for one sub-region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaPrediction {
    pub w: i64,
    #[serde(rename = "C")]
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubRegionDelta {
    pub spec: RegionSpec,
    pub measured: DeltaPrediction,
    /// Prediction with the summation bound read as the sequence length `k`.
    pub predicted: DeltaPrediction,
    /// Prediction with the bound read as the down-triangle line count `n`,
    /// where the two readings differ.
    pub predicted_alt: Option<DeltaPrediction>,
    pub agrees: bool,
    pub alt_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatsDeltas {
    pub case_id: CaseId,
    pub oriented: RegionSpec,
    pub parent: DeltaPrediction,
    pub subs: Vec<SubRegionDelta>,
    /// `1 + C_1 + C_2 - w_1(w_1+1)/2 - w_2(w_2+1)/2 = C + C_3 - w(w+1)/2 - w_3(w_3+1)/2`
    /// on measured values.
    pub balance_holds: bool,
}

fn measure(spec: &RegionSpec) -> Result<DeltaPrediction, SpecInvalid> {
    if is_empty_spec(spec) {
        return Ok(DeltaPrediction { w: 0, c: 0 });
    }
    let s = build_region(spec)?.stats();
    Ok(DeltaPrediction {
        w: i64::from(s.w),
        c: s.c as i64,
    })
}

fn tri(w: i64) -> i64 {
    w * (w + 1) / 2
}

/// Predicted `(w_i, C_i)` for Case I.4 and I.6 given the summation bound.
fn bounded_predictions(a: i64, w: i64, c: i64, bound: i64) -> [DeltaPrediction; 3] {
    let span = bound + 1;
    let sum2: i64 = (0..=bound).map(|i| w - i).sum();
    let sum3: i64 = (0..=bound).map(|i| w - i - 1).sum();
    [
        DeltaPrediction {
            w: w - 1,
            c: c - a - w,
        },
        DeltaPrediction {
            w: w - span,
            c: c - w - sum2,
        },
        DeltaPrediction {
            w: w - span - 1,
            c: c - (a - 1) - 2 * w - sum3,
        },
    ]
}

/// Compares the sub-region widths and regular-cell counts with the closed
/// deltas of the case, for specs that fall in Case I.
pub fn stats_deltas(spec: &RegionSpec) -> Result<StatsDeltas, CondensationError> {
    let rec = case_recurrence(spec)?;
    if !rec.case_id.is_case_one() {
        return Err(CondensationError::CaseUnreachable(spec.clone()));
    }
    let region = build_region(&rec.oriented)?;
    let stats = region.stats();
    let a = i64::from(rec.oriented.a);
    let w = i64::from(stats.w);
    let c = stats.c as i64;
    let k = rec.oriented.d.len() as i64;
    let di = &rec.oriented.d;
    // q as a 1-based index: largest index below k with d_q >= 2
    let q = (0..di.len().saturating_sub(1))
        .rev()
        .find(|&i| di[i] >= 2)
        .map_or(0, |i| i as i64 + 1);

    let (predicted, alt): ([DeltaPrediction; 3], Option<[DeltaPrediction; 3]>) = match rec.case_id {
        CaseId::I1 | CaseId::I2 | CaseId::I3 => (
            [
                DeltaPrediction {
                    w: w - 1,
                    c: c - a - w,
                },
                DeltaPrediction {
                    w: w - 1,
                    c: c - 2 * w,
                },
                DeltaPrediction {
                    w: w - 2,
                    c: c - (a - 1) - (w - 1) - 2 * w,
                },
            ],
            None,
        ),
        CaseId::I5 => (
            [
                DeltaPrediction {
                    w: w - 1,
                    c: c - a - w,
                },
                DeltaPrediction { w, c: c - w },
                DeltaPrediction {
                    w: w - 1,
                    c: c - (a - 1) - 2 * w,
                },
            ],
            None,
        ),
        CaseId::I4 | CaseId::I6 => {
            let by_k = bounded_predictions(a, w, c, k - q);
            let by_n = bounded_predictions(a, w, c, i64::from(stats.n) - q);
            (by_k, (by_n != by_k).then_some(by_n))
        }
        _ => unreachable!("Case I only"),
    };

    let mut subs = Vec::with_capacity(3);
    let mut measured = Vec::with_capacity(3);
    for (i, s) in rec.sub_specs.iter().enumerate() {
        let m = measure(s).map_err(|source| CondensationError::InvalidSubSpec {
            parent: spec.clone(),
            sub: s.clone(),
            source,
        })?;
        measured.push(m);
        subs.push(SubRegionDelta {
            spec: s.clone(),
            measured: m,
            predicted: predicted[i],
            predicted_alt: alt.map(|p| p[i]),
            agrees: predicted[i] == m,
            alt_agrees: alt.map(|p| p[i] == m),
        });
    }
    let lhs = 1 + measured[0].c + measured[1].c - tri(measured[0].w) - tri(measured[1].w);
    let rhs = c + measured[2].c - tri(w) - tri(measured[2].w);
    Ok(StatsDeltas {
        case_id: rec.case_id,
        oriented: rec.oriented.clone(),
        parent: DeltaPrediction { w, c },
        subs,
        balance_holds: lhs == rhs,
    })
}

/// One JSON-lines record of a condensation trace.
#[derive(Clone, Debug, Serialize)]
pub struct CaseTrace {
    pub spec: RegionSpec,
    pub case_id: Option<CaseId>,
    pub oriented: Option<RegionSpec>,
    pub sub_specs: Vec<RegionSpec>,
    #[serde(serialize_with = "counts_as_text")]
    pub sub_counts: Vec<BigUint>,
    pub form: Option<IdentityForm>,
    pub kuo: Option<KuoCheck>,
    pub identity_holds: bool,
}

fn counts_as_text<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for m in v {
        seq.serialize_element(&m.to_string())?;
    }
    seq.end()
}

/// Case, sub-regions, their counts and the six Kuo counts on the dual.
///
/// The Kuo counts are skipped (`None`) when the dual is too wide to count.
pub fn condensation_trace(
    engine: &Condenser,
    spec: &RegionSpec,
) -> Result<CaseTrace, CondensationError> {
    let region = build_region(spec)?;
    let dual = dual_graph(&region);
    let kuo = match pick_corners(&dual).map(|q| verify_kuo(&dual, &q)) {
        Ok(Ok(k)) => Some(k),
        Ok(Err(CountError::SizeLimit { .. })) => None,
        Ok(Err(e)) => return Err(e.into()),
        Err(e) => return Err(e),
    };
    let rec = match case_recurrence(spec) {
        Ok(r) => Some(r),
        Err(CondensationError::BaseCase(_)) => None,
        Err(e) => return Err(e),
    };
    let total = engine.count(spec)?;
    let (sub_specs, sub_counts, identity_holds) = match &rec {
        None => (Vec::new(), Vec::new(), true),
        Some(r) => {
            let counts = r
                .sub_specs
                .iter()
                .map(|s| engine.count(s))
                .collect::<Result<Vec<_>, _>>()?;
            let holds = match r.form {
                IdentityForm::Condensation => {
                    &total * &counts[2] == BigUint::from(2u8) * &counts[0] * &counts[1]
                }
                IdentityForm::Multiple { factor } => total == &counts[0] * factor,
            };
            (r.sub_specs.clone(), counts, holds)
        }
    };
    Ok(CaseTrace {
        spec: spec.clone(),
        case_id: rec.as_ref().map(|r| r.case_id),
        oriented: rec.as_ref().map(|r| r.oriented.clone()),
        sub_specs,
        sub_counts,
        form: rec.as_ref().map(|r| r.form),
        identity_holds: identity_holds && kuo.as_ref().is_none_or(|k| k.holds),
        kuo,
    })
}

/// Whether two embedded graphs coincide after a translation and one of the
/// eight symmetries of the square lattice.
pub fn congruent(g: &MatchGraph, h: &MatchGraph) -> bool {
    if g.vertices.len() != h.vertices.len() || g.edges.len() != h.edges.len() {
        return false;
    }
    let shape = |g: &MatchGraph, f: &dyn Fn(i64, i64) -> (i64, i64)| {
        let pts: Vec<(i64, i64)> = g.vertices.iter().map(|v| f(v.x, v.y)).collect();
        let mx = pts.iter().map(|p| p.0).min().unwrap_or(0);
        let my = pts.iter().map(|p| p.1).min().unwrap_or(0);
        let norm = |p: (i64, i64)| (p.0 - mx, p.1 - my);
        let edges: BTreeSet<((i64, i64), (i64, i64))> = g
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (norm(pts[e.u]), norm(pts[e.v]));
                (a.min(b), a.max(b))
            })
            .collect();
        let verts: BTreeSet<(i64, i64)> = pts.iter().map(|&p| norm(p)).collect();
        (verts, edges)
    };
    let target = shape(h, &|x, y| (x, y));
    let maps: [&dyn Fn(i64, i64) -> (i64, i64); 8] = [
        &|x, y| (x, y),
        &|x, y| (-x, y),
        &|x, y| (x, -y),
        &|x, y| (-x, -y),
        &|x, y| (y, x),
        &|x, y| (-y, x),
        &|x, y| (y, -x),
        &|x, y| (-y, -x),
    ];
    maps.iter().any(|f| shape(g, f) == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchgraph::{Edge, Vertex};

    fn spec(a: u32, d: &[u32]) -> RegionSpec {
        RegionSpec::new(a, d.to_vec())
    }

    fn four_cycle(weights: [i64; 4]) -> MatchGraph {
        let pos = [
            (-1, 0, Part::Black),
            (0, -1, Part::White),
            (1, 0, Part::Black),
            (0, 1, Part::White),
        ];
        let vertices = pos
            .iter()
            .enumerate()
            .map(|(id, &(x, y, part))| Vertex { id, part, x, y })
            .collect();
        let edges = (0..4)
            .map(|i| Edge {
                u: i,
                v: (i + 1) % 4,
                weight: BigRational::from_integer(weights[i].into()),
            })
            .collect();
        MatchGraph::new(vertices, edges, 1)
    }

    #[test]
    fn four_cycle_corners_and_identity() {
        let g = four_cycle([1, 1, 1, 1]);
        let q = pick_corners(&g).unwrap();
        assert_eq!(
            q,
            CornerQuad {
                x: 0,
                y: 1,
                z: 2,
                t: 3
            }
        );
        let k = verify_kuo(&g, &q).unwrap();
        assert_eq!(k.whole, BigRational::from_integer(2.into()));
        assert_eq!(k.without_all, BigRational::one());
        assert!(k.holds);
    }

    #[test]
    fn weighted_four_cycle() {
        let g = four_cycle([1, 2, 3, 4]);
        let k = verify_kuo(&g, &pick_corners(&g).unwrap()).unwrap();
        assert_eq!(k.whole, BigRational::from_integer(11.into()));
        assert!(k.holds);
    }

    #[test]
    fn aztec_corners() {
        let g = dual_graph(&build_region(&spec(2, &[4])).unwrap());
        let q = pick_corners(&g).unwrap();
        let parts = [q.x, q.y, q.z, q.t].map(|i| g.vertices[i].part);
        assert_eq!(parts, [Part::Black, Part::White, Part::Black, Part::White]);
        assert!(verify_kuo(&g, &q).unwrap().holds);
    }

    #[test]
    fn dispatch_examples() {
        let r = case_recurrence(&spec(1, &[1, 1, 1, 2])).unwrap();
        assert_eq!(r.case_id, CaseId::II1);
        assert_eq!(r.sub_specs, vec![spec(1, &[1, 1, 2])]);
        let r = case_recurrence(&spec(2, &[3, 1, 2])).unwrap();
        assert_eq!(r.case_id, CaseId::II2bIII);
        assert_eq!(r.sub_specs, vec![spec(1, &[1, 1, 2])]);
        assert_eq!(r.form, IdentityForm::Multiple { factor: 4 });
        let r = case_recurrence(&spec(4, &[8])).unwrap();
        assert_eq!(r.case_id, CaseId::I1);
        assert_eq!(
            r.sub_specs,
            vec![spec(3, &[6]), spec(3, &[6]), spec(2, &[4])]
        );
        assert!(matches!(
            case_recurrence(&spec(2, &[4])),
            Err(CondensationError::BaseCase(_))
        ));
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            condensation_count(&spec(4, &[8])).unwrap(),
            BigUint::from(1024u32)
        );
        assert_eq!(
            condensation_count(&spec(3, &[6])).unwrap(),
            BigUint::from(64u32)
        );
        assert_eq!(
            condensation_count(&spec(2, &[3, 1, 2])).unwrap(),
            BigUint::from(32u32)
        );
    }

    #[test]
    fn base_table_matches_counter() {
        for (a, d, m) in BASE_TABLE {
            let g = dual_graph(&build_region(&spec(a, d)).unwrap());
            assert_eq!(count_matchings(&g).unwrap(), BigUint::from(m));
        }
    }

    #[test]
    fn delta_examples() {
        let r = stats_deltas(&spec(4, &[8])).unwrap();
        assert_eq!(r.case_id, CaseId::I1);
        assert!(r.subs.iter().all(|s| s.agrees));
        assert!(r.balance_holds);

        let r = stats_deltas(&spec(3, &[1, 4, 1])).unwrap();
        assert_eq!(r.case_id, CaseId::I5);
        assert_eq!(r.subs[1].measured.w, r.parent.w);
        assert_eq!(r.subs[1].measured.c, r.parent.c - r.parent.w);
        assert!(r.balance_holds);
    }

    #[test]
    fn congruence_detects_mirror() {
        let g = four_cycle([1, 1, 1, 1]);
        let mut h = g.clone();
        for v in &mut h.vertices {
            v.x = 10 - v.x;
            v.y += 3;
        }
        assert!(congruent(&g, &h));
        h.edges.pop();
        assert!(!congruent(&g, &h));
    }
}
