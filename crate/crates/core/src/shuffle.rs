//! Weighted Aztec diamonds, urban renewal and the shift operator on encoded
//! sequences.
//!
//! Edge weights of `AD_n` live in a `2n × 2n` matrix. The d-cell in row `i`,
//! column `j` (both from 0) owns the entries
//!
//! ```text
//! [2i][2j]   = NW edge    [2i][2j+1]   = NE edge
//! [2i+1][2j] = SW edge    [2i+1][2j+1] = SE edge
//! ```
//!
//! so a 2×2 block `[[x, w], [y, z]]` lists the cell's edges as NW, NE, SW, SE
//! and its cyclic order is `x, w, z, y`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matchgraph::{Edge, MatchGraph, Part, Vertex};
use crate::region::{build_region, CellKind, Color, RegionSpec, SpecInvalid};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ShuffleError {
    #[error("block at ({row}, {col}) has zero cell-factor")]
    SingularBlock { row: usize, col: usize },
    #[error("block {0} is not one of the four binary blocks")]
    NotBinaryBlock(usize),
    #[error("pattern must have even dimensions, got {rows}x{cols}")]
    OddShape { rows: usize, cols: usize },
    #[error("binary-block patterns have two columns, got {0}")]
    NotTwoColumns(usize),
    #[error("encoded sequence of a characteristic matrix contains a ± term")]
    PlusMinusInCode,
    #[error("closed-form S = {closed} but iterated shifts give {procedural}")]
    FormulaProcedureMismatch { closed: u64, procedural: u64 },
    #[error("Aztec diamond of order 0 has no d-cells to reduce")]
    EmptyDiamond,
    #[error("part index {part} out of range for order {order}")]
    NoSuchPart { part: usize, order: usize },
    #[error(transparent)]
    Spec(#[from] SpecInvalid),
}

/// A periodic seed for Aztec-diamond edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPattern {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for WeightPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PatternJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PatternJson::deserialize(d)?;
        let entries = raw
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.trim().parse::<BigRational>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(format!("bad entry: {e}")))?;
        if entries.len() != raw.rows || entries.iter().any(|r| r.len() != raw.cols) {
            return Err(D::Error::custom("entries do not match rows/cols"));
        }
        Ok(WeightPattern {
            rows: raw.rows,
            cols: raw.cols,
            entries,
        })
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl WeightPattern {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self, ShuffleError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows % 2 == 1 || cols % 2 == 1 || rows == 0 || cols == 0 {
            return Err(ShuffleError::OddShape { rows, cols });
        }
        assert!(entries.iter().all(|r| r.len() == cols), "ragged pattern");
        Ok(WeightPattern {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self, ShuffleError> {
        WeightPattern::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r % self.rows][c % self.cols]
    }

    /// Block `[[x, w], [y, z]]` with top-left entry at `(2 bi, 2 bj)`.
    fn block(&self, bi: usize, bj: usize) -> [&BigRational; 4] {
        let (r, c) = (2 * bi, 2 * bj);
        [
            &self.entries[r][c],
            &self.entries[r][c + 1],
            &self.entries[r + 1][c],
            &self.entries[r + 1][c + 1],
        ]
    }

    /// Short stable digest of the entries, for traces.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}x{}", self.rows, self.cols));
        for row in &self.entries {
            for e in row {
                h.update(b";");
                h.update(e.to_string());
            }
        }
        h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Explicit `2n × 2n` edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    pub order: usize,
    pub entries: Vec<Vec<BigRational>>,
}

impl WeightMatrix {
    /// Fills the matrix periodically with period `pattern`.
    pub fn from_pattern(pattern: &WeightPattern, order: usize) -> Self {
        let entries = (0..2 * order)
            .map(|r| (0..2 * order).map(|c| pattern.get(r, c).clone()).collect())
            .collect();
        WeightMatrix { order, entries }
    }
}

/// `AD_n` with its edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AztecGraph {
    pub weights: WeightMatrix,
}

/// Cell factor of `[[x, w], [y, z]]` and the block `[[z, y], [w, x]] / Δ`.
fn renew_block(block: [&BigRational; 4]) -> Option<(BigRational, [BigRational; 4])> {
    let [x, w, y, z] = block;
    let delta = x * z + y * w;
    if delta.is_zero() {
        return None;
    }
    let out = [z / &delta, y / &delta, w / &delta, x / &delta];
    Some((delta, out))
}

impl AztecGraph {
    pub fn new(weights: WeightMatrix) -> Self {
        AztecGraph { weights }
    }

    pub fn from_pattern(pattern: &WeightPattern, order: usize) -> Self {
        AztecGraph::new(WeightMatrix::from_pattern(pattern, order))
    }

    pub fn order(&self) -> usize {
        self.weights.order
    }

    /// Edge weights of d-cell `(i, j)` in cyclic order NW, NE, SE, SW.
    pub fn cell_weights(&self, i: usize, j: usize) -> [BigRational; 4] {
        let m = &self.weights.entries;
        [
            m[2 * i][2 * j].clone(),
            m[2 * i][2 * j + 1].clone(),
            m[2 * i + 1][2 * j + 1].clone(),
            m[2 * i + 1][2 * j].clone(),
        ]
    }

    /// The graph with vertices N, E, S, W of cell `(i, j)` at
    /// `(2j+1, -2i)`, `(2j+2, -2i-1)`, `(2j+1, -2i-2)`, `(2j, -2i-1)`.
    /// East and west vertices are black.
    pub fn to_match_graph(&self) -> MatchGraph {
        let n = self.order() as i64;
        let mut index = std::collections::HashMap::new();
        let mut vertices = Vec::new();
        let mut vertex = |x: i64, y: i64, vertices: &mut Vec<Vertex>| -> usize {
            *index.entry((x, y)).or_insert_with(|| {
                let part = if x % 2 == 0 { Part::Black } else { Part::White };
                vertices.push(Vertex {
                    id: vertices.len(),
                    part,
                    x,
                    y,
                });
                vertices.len() - 1
            })
        };
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let north = vertex(2 * j + 1, -2 * i, &mut vertices);
                let west = vertex(2 * j, -2 * i - 1, &mut vertices);
                let east = vertex(2 * j + 2, -2 * i - 1, &mut vertices);
                let south = vertex(2 * j + 1, -2 * i - 2, &mut vertices);
                let [nw, ne, se, sw] = self.cell_weights(i as usize, j as usize);
                edges.push(Edge {
                    u: west,
                    v: north,
                    weight: nw,
                });
                edges.push(Edge {
                    u: east,
                    v: north,
                    weight: ne,
                });
                edges.push(Edge {
                    u: east,
                    v: south,
                    weight: se,
                });
                edges.push(Edge {
                    u: west,
                    v: south,
                    weight: sw,
                });
            }
        }
        MatchGraph::new(vertices, edges, 1)
    }
}

/// `xz + yt` for cyclic edge weights `x, y, z, t`.
pub fn cell_factor(cyclic: &[BigRational; 4]) -> BigRational {
    let [x, y, z, t] = cyclic;
    x * z + y * t
}

/// Urban renewal on a pattern: every block becomes `[[z, y], [w, x]] / Δ`,
/// then rows and columns shift cyclically by one toward the origin.
pub fn d_transform(pattern: &WeightPattern) -> Result<WeightPattern, ShuffleError> {
    let (k, l) = (pattern.rows, pattern.cols);
    if k % 2 == 1 || l % 2 == 1 {
        return Err(ShuffleError::OddShape { rows: k, cols: l });
    }
    let mut b = vec![vec![BigRational::zero(); l]; k];
    for bi in 0..k / 2 {
        for bj in 0..l / 2 {
            let (_, [nx, nw, ny, nz]) = renew_block(pattern.block(bi, bj))
                .ok_or(ShuffleError::SingularBlock { row: bi, col: bj })?;
            b[2 * bi][2 * bj] = nx;
            b[2 * bi][2 * bj + 1] = nw;
            b[2 * bi + 1][2 * bj] = ny;
            b[2 * bi + 1][2 * bj + 1] = nz;
        }
    }
    let entries = (0..k)
        .map(|r| {
            (0..l)
                .map(|c| b[(r + 1) % k][(c + 1) % l].clone())
                .collect()
        })
        .collect();
    Ok(WeightPattern {
        rows: k,
        cols: l,
        entries,
    })
}

/// One urban-renewal step on an explicit weight matrix:
/// `MGF(g) = factor · MGF(returned)`.
pub fn reduction_step(g: &AztecGraph) -> Result<(AztecGraph, BigRational), ShuffleError> {
    let n = g.order();
    if n == 0 {
        return Err(ShuffleError::EmptyDiamond);
    }
    let m = &g.weights.entries;
    let size = 2 * n;
    let mut b = vec![vec![BigRational::zero(); size]; size];
    let mut factor = BigRational::one();
    for bi in 0..n {
        for bj in 0..n {
            let (r, c) = (2 * bi, 2 * bj);
            let block = [&m[r][c], &m[r][c + 1], &m[r + 1][c], &m[r + 1][c + 1]];
            let (delta, [nx, nw, ny, nz]) =
                renew_block(block).ok_or(ShuffleError::SingularBlock { row: bi, col: bj })?;
            factor *= delta;
            b[r][c] = nx;
            b[r][c + 1] = nw;
            b[r + 1][c] = ny;
            b[r + 1][c + 1] = nz;
        }
    }
    let entries = (0..size - 2)
        .map(|r| (0..size - 2).map(|c| b[r + 1][c + 1].clone()).collect())
        .collect();
    Ok((
        AztecGraph::new(WeightMatrix {
            order: n - 1,
            entries,
        }),
        factor,
    ))
}

/// Multiplies one row part by `t`. Parts are row 0, rows `(2p-1, 2p)` for
/// `0 < p < n`, and row `2n-1`.
pub fn scale_part(
    g: &AztecGraph,
    part: usize,
    t: &BigRational,
) -> Result<AztecGraph, ShuffleError> {
    let n = g.order();
    if part > n || n == 0 {
        return Err(ShuffleError::NoSuchPart { part, order: n });
    }
    let rows: Vec<usize> = if part == 0 {
        vec![0]
    } else if part == n {
        vec![2 * n - 1]
    } else {
        vec![2 * part - 1, 2 * part]
    };
    let mut out = g.clone();
    for r in rows {
        for e in &mut out.weights.entries[r] {
            *e *= t;
        }
    }
    Ok(out)
}

/// One term of an encoded sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Zero,
    Plus,
    Minus,
    PlusMinus,
}

impl Sign {
    fn has_plus(self) -> bool {
        matches!(self, Sign::Plus | Sign::PlusMinus)
    }

    fn has_minus(self) -> bool {
        matches!(self, Sign::Minus | Sign::PlusMinus)
    }

    fn from_parts(plus: bool, minus: bool) -> Sign {
        match (plus, minus) {
            (true, true) => Sign::PlusMinus,
            (true, false) => Sign::Plus,
            (false, true) => Sign::Minus,
            (false, false) => Sign::Zero,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Zero => '0',
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::PlusMinus => '±',
        }
    }

    /// The binary block this term abbreviates.
    fn block(self) -> [[i64; 2]; 2] {
        match self {
            Sign::Zero => [[1, 1], [1, 1]],
            Sign::Plus => [[1, 1], [1, 0]],
            Sign::Minus => [[0, 1], [1, 1]],
            Sign::PlusMinus => [[0, 1], [1, 0]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EncodedSeq(pub Vec<Sign>);

impl EncodedSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&s| s == Sign::Zero).count()
    }

    /// The 2q×2 binary-block pattern abbreviated by the sequence.
    pub fn to_pattern(&self) -> WeightPattern {
        let mut entries = Vec::with_capacity(2 * self.len());
        for s in &self.0 {
            for row in s.block() {
                entries.push(row.iter().map(|&v| int(v)).collect());
            }
        }
        WeightPattern {
            rows: entries.len(),
            cols: 2,
            entries,
        }
    }
}

impl fmt::Display for EncodedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unexpected character {0:?} in encoded sequence")]
pub struct ParseSeqError(char);

impl FromStr for EncodedSeq {
    type Err = ParseSeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Sign::Zero),
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                '±' => Ok(Sign::PlusMinus),
                other => Err(ParseSeqError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(EncodedSeq)
    }
}

impl Serialize for EncodedSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EncodedSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// One 2×2 block per line of black cells, top line first.
pub fn characteristic_matrix(spec: &RegionSpec) -> Result<WeightPattern, ShuffleError> {
    let region = build_region(spec)?;
    let mut lines: Vec<(i64, CellKind)> = region
        .cells
        .iter()
        .filter(|c| c.color == Color::Black)
        .map(|c| (c.level, c.kind))
        .collect();
    lines.sort_unstable_by(|a, b| b.cmp(a));
    lines.dedup();
    let seq = lines
        .iter()
        .map(|&(_, kind)| match kind {
            CellKind::Square => Sign::Zero,
            CellKind::TriangleUp => Sign::Plus,
            CellKind::TriangleDown => Sign::Minus,
        })
        .collect();
    Ok(EncodedSeq(seq).to_pattern())
}

/// Reads a binary-block pattern as its encoded sequence.
pub fn encode(pattern: &WeightPattern) -> Result<EncodedSeq, ShuffleError> {
    if pattern.cols != 2 {
        return Err(ShuffleError::NotTwoColumns(pattern.cols));
    }
    if pattern.rows % 2 == 1 {
        return Err(ShuffleError::OddShape {
            rows: pattern.rows,
            cols: pattern.cols,
        });
    }
    let signs = [Sign::Zero, Sign::Plus, Sign::Minus, Sign::PlusMinus];
    (0..pattern.rows / 2)
        .map(|bi| {
            let [x, w, y, z] = pattern.block(bi, 0);
            signs
                .iter()
                .copied()
                .find(|s| {
                    let b = s.block();
                    *x == int(b[0][0])
                        && *w == int(b[0][1])
                        && *y == int(b[1][0])
                        && *z == int(b[1][1])
                })
                .ok_or(ShuffleError::NotBinaryBlock(bi))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(EncodedSeq)
}

/// Shifts every `+` one place left cyclically; `−` terms stay put, a `+`
/// landing on a `−` makes `±`, and vacated places become `0`.
pub fn sh(seq: &EncodedSeq) -> EncodedSeq {
    let s = &seq.0;
    let n = s.len();
    EncodedSeq(
        (0..n)
            .map(|i| Sign::from_parts(s[(i + 1) % n].has_plus(), s[i].has_minus()))
            .collect(),
    )
}

/// `M(AD_m(wt_A)) = 2^t · M(AD_{m-1}(wt_{sh(A)}))` where `t` counts the 0
/// terms among the first `m` blocks of the periodic extension of `A`.
pub fn binary_reduction_step(
    pattern: &WeightPattern,
    order: usize,
) -> Result<(WeightPattern, u64), ShuffleError> {
    let code = encode(pattern)?;
    let q = code.len();
    let t = (0..order).filter(|&i| code.0[i % q] == Sign::Zero).count() as u64;
    Ok((sh(&code).to_pattern(), t))
}

/// Closed form: `t(i) = 0` if `s_i` is `−`, otherwise `q - i + 1 - g(i)` with
/// `g(i)` the number of `+` among `s_i, …, s_q`.
pub fn exponent_closed(code: &EncodedSeq) -> u64 {
    let q = code.len();
    (0..q)
        .filter(|&i| code.0[i] != Sign::Minus)
        .map(|i| {
            let g = code.0[i..].iter().filter(|&&s| s == Sign::Plus).count();
            (q - i - g) as u64
        })
        .sum()
}

/// Sum over `j < q` of the 0 terms of `sh^j(code)` after dropping its last
/// `j` terms.
pub fn exponent_iterated(code: &EncodedSeq) -> u64 {
    let q = code.len();
    let mut cur = code.clone();
    let mut total = 0u64;
    for j in 0..q {
        total += cur.0[..q - j].iter().filter(|&&s| s == Sign::Zero).count() as u64;
        cur = sh(&cur);
    }
    total
}

/// The exponent `S` of `M(AD_q(wt_A)) = 2^S` for the characteristic matrix.
pub fn exponent_s(spec: &RegionSpec) -> Result<u64, ShuffleError> {
    let code = encode(&characteristic_matrix(spec)?)?;
    if code.0.contains(&Sign::PlusMinus) {
        return Err(ShuffleError::PlusMinusInCode);
    }
    let closed = exponent_closed(&code);
    let procedural = exponent_iterated(&code);
    if closed != procedural {
        return Err(ShuffleError::FormulaProcedureMismatch { closed, procedural });
    }
    Ok(closed)
}

pub fn shuffle_count(spec: &RegionSpec) -> Result<BigUint, ShuffleError> {
    Ok(BigUint::one() << exponent_s(spec)?)
}

/// One line of a binary reduction trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTraceStep {
    pub step: usize,
    pub order: usize,
    pub code: EncodedSeq,
    /// Power of two contributed by this step.
    pub factor_log2: u64,
    pub pattern_hash: String,
}

/// The chain `AD_q → AD_{q-1} → … → AD_0` on the characteristic matrix.
pub fn reduction_trace(spec: &RegionSpec) -> Result<Vec<ReductionTraceStep>, ShuffleError> {
    let mut pattern = characteristic_matrix(spec)?;
    let q = pattern.rows / 2;
    let mut out = Vec::with_capacity(q);
    for step in 0..q {
        let order = q - step;
        let code = encode(&pattern)?;
        let (next, t) = binary_reduction_step(&pattern, order)?;
        out.push(ReductionTraceStep {
            step,
            order,
            code,
            factor_log2: t,
            pattern_hash: pattern.digest(),
        });
        pattern = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchgraph::matching_generating_function;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> EncodedSeq {
        s.parse().unwrap()
    }

    fn ones() -> WeightPattern {
        WeightPattern::from_ints(&[&[1, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn aztec_graph_sizes() {
        for n in 1..=4usize {
            let g = AztecGraph::from_pattern(&ones(), n).to_match_graph();
            assert_eq!(g.vertex_count(), 2 * n * (n + 1));
            assert_eq!(g.edges.len(), 4 * n * n);
            g.validate().unwrap();
        }
    }

    #[test]
    fn aztec_counts() {
        assert_eq!(
            matching_generating_function(&AztecGraph::from_pattern(&ones(), 1).to_match_graph())
                .unwrap(),
            int(2)
        );
        assert_eq!(
            matching_generating_function(&AztecGraph::from_pattern(&ones(), 2).to_match_graph())
                .unwrap(),
            int(8)
        );
        assert_eq!(
            matching_generating_function(&AztecGraph::from_pattern(&ones(), 3).to_match_graph())
                .unwrap(),
            int(64)
        );
    }

    #[test]
    fn cell_factors() {
        assert_eq!(cell_factor(&[int(1), int(1), int(1), int(1)]), int(2));
        assert_eq!(cell_factor(&[int(1), int(0), int(1), int(1)]), int(1));
        assert_eq!(cell_factor(&[int(1), int(0), int(1), int(0)]), int(1));
    }

    #[test]
    fn d_transform_blocks() {
        let half = d_transform(&ones()).unwrap();
        assert!(half.entries.iter().flatten().all(|e| *e == q("1/2")));
        let swap = WeightPattern::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(
            d_transform(&swap).unwrap(),
            WeightPattern::from_ints(&[&[0, 1], &[1, 0]]).unwrap()
        );
        let id = WeightPattern::from_ints(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(d_transform(&id).unwrap(), id);
        let singular = WeightPattern::from_ints(&[&[1, 0], &[1, 0]]).unwrap();
        assert_eq!(
            d_transform(&singular),
            Err(ShuffleError::SingularBlock { row: 0, col: 0 })
        );
    }

    #[test]
    fn reduction_on_ones() {
        let g1 = AztecGraph::from_pattern(&ones(), 1);
        let (g0, f) = reduction_step(&g1).unwrap();
        assert_eq!(g0.order(), 0);
        assert_eq!(f, int(2));
        assert_eq!(
            matching_generating_function(&g0.to_match_graph()).unwrap(),
            int(1)
        );
        let g2 = AztecGraph::from_pattern(&ones(), 2);
        let (g1, f) = reduction_step(&g2).unwrap();
        assert_eq!(f, int(16));
        assert_eq!(
            matching_generating_function(&g1.to_match_graph()).unwrap() * f,
            int(8)
        );
    }

    #[test]
    fn explicit_and_pattern_reduction_agree() {
        let p =
            WeightPattern::from_ints(&[&[1, 2, 3, 1], &[2, 5, 1, 1], &[3, 1, 4, 1], &[1, 2, 2, 7]])
                .unwrap();
        let (explicit, _) = reduction_step(&AztecGraph::from_pattern(&p, 3)).unwrap();
        let via_pattern = AztecGraph::from_pattern(&d_transform(&p).unwrap(), 2);
        assert_eq!(explicit, via_pattern);
    }

    #[test]
    fn part_scaling_examples() {
        let g = AztecGraph::from_pattern(&ones(), 1);
        let s = scale_part(&g, 0, &int(2)).unwrap();
        assert_eq!(
            matching_generating_function(&s.to_match_graph()).unwrap(),
            int(4)
        );
        let g = AztecGraph::from_pattern(&ones(), 2);
        let s = scale_part(&g, 1, &int(3)).unwrap();
        assert_eq!(
            matching_generating_function(&s.to_match_graph()).unwrap(),
            int(72)
        );
        assert!(scale_part(&g, 3, &int(3)).is_err());
    }

    #[test]
    fn encode_blocks() {
        let p = WeightPattern::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(encode(&p).unwrap().to_string(), "±");
        assert_eq!(encode(&seq("0+-±").to_pattern()).unwrap(), seq("0+-±"));
        let bad = WeightPattern::from_ints(&[&[1, 1], &[1, 1], &[2, 1], &[1, 1]]).unwrap();
        assert_eq!(encode(&bad), Err(ShuffleError::NotBinaryBlock(1)));
    }

    #[test]
    fn sh_examples() {
        assert_eq!(sh(&seq("0000")), seq("0000"));
        assert_eq!(sh(&seq("+-")), seq("0±"));
        assert_eq!(sh(&seq("0+0")), seq("+00"));
        assert_eq!(sh(&seq("+00")), seq("00+"));
        assert_eq!(sh(&seq("-+")), seq("±0"));
    }

    #[test]
    fn characteristic_matrix_of_d7_region() {
        let code =
            encode(&characteristic_matrix(&RegionSpec::new(7, vec![4, 2, 5, 4])).unwrap()).unwrap();
        assert_eq!(code.len(), 9);
        assert_eq!(code.zeros(), 6);
        assert_eq!(code.0.iter().filter(|&&s| s == Sign::Plus).count(), 2);
        assert_eq!(code.0.iter().filter(|&&s| s == Sign::Minus).count(), 1);
    }

    #[test]
    fn aztec_exponent() {
        for a in 1..=6u32 {
            assert_eq!(
                exponent_s(&RegionSpec::new(a, vec![2 * a])).unwrap(),
                u64::from(a * (a + 1) / 2)
            );
        }
    }

    #[test]
    fn pattern_json() {
        let p = WeightPattern::new(vec![vec![q("1/2"), q("3")], vec![q("0"), q("-4/8")]]).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"rows":2,"cols":2,"entries":[["1/2","3"],["0","-1/2"]]}"#
        );
        assert_eq!(serde_json::from_str::<WeightPattern>(&text).unwrap(), p);
    }
}
