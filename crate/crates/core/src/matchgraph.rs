//! Weighted bipartite graphs and exact perfect-matching counts.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::region::{Color, Region};

/// Largest profile width the transfer-matrix counter can represent.
pub const MAX_BANDWIDTH: usize = 127;

/// Largest side the permanent oracle accepts.
pub const PERMANENT_MAX_SIDE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Black,
    White,
}

impl From<Color> for Part {
    fn from(c: Color) -> Part {
        match c {
            Color::Black => Part::Black,
            Color::White => Part::White,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub part: Part,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "weight_text")]
    pub weight: BigRational,
}

/// Rationals travel as `"p/q"` strings (or `"p"` for integers).
mod weight_text {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.trim()
            .parse::<BigRational>()
            .map_err(|e| D::Error::custom(format!("bad weight {text:?}: {e}")))
    }
}

/// A graph whose vertex `i` is `vertices[i]`; `id` always equals the index.
///
/// `unit` is the coordinate length of one lattice step, used when sorting
/// vertices into columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub unit: i64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("profile width {width} exceeds the limit {limit}")]
    SizeLimit { width: usize, limit: usize },
    #[error("edge {u}-{v} has weight {weight}; unweighted counting needs weight 1")]
    NonUnitWeight { u: usize, v: usize, weight: String },
    #[error("edge {u}-{v} refers to a missing vertex")]
    DanglingEdge { u: usize, v: usize },
    #[error("edge {u}-{v} joins two vertices of one part")]
    NotBipartite { u: usize, v: usize },
    #[error("permanent oracle handles at most {limit} vertices per part, got {side}")]
    OracleTooLarge { side: usize, limit: usize },
}

/// Result of stripping forced edges.
#[derive(Clone, Debug, PartialEq)]
pub enum Forced {
    /// Some vertex lost all its edges; the graph has no perfect matching.
    Zero,
    Reduced {
        graph: MatchGraph,
        multiplier: BigRational,
    },
}

impl MatchGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, unit: i64) -> Self {
        MatchGraph {
            vertices,
            edges,
            unit,
        }
    }

    pub fn empty() -> Self {
        MatchGraph::new(Vec::new(), Vec::new(), 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_one())
    }

    pub fn validate(&self) -> Result<(), CountError> {
        for e in &self.edges {
            let (Some(a), Some(b)) = (self.vertices.get(e.u), self.vertices.get(e.v)) else {
                return Err(CountError::DanglingEdge { u: e.u, v: e.v });
            };
            if a.part == b.part {
                return Err(CountError::NotBipartite { u: e.u, v: e.v });
            }
        }
        Ok(())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.u == v {
                Some(e.v)
            } else if e.v == v {
                Some(e.u)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Induced subgraph on the vertices not in `removed`, renumbered in order.
    pub fn without(&self, removed: &[usize]) -> MatchGraph {
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !removed.contains(&i) {
                map[i] = vertices.len();
                vertices.push(Vertex {
                    id: vertices.len(),
                    ..v.clone()
                });
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.u] != usize::MAX && map[e.v] != usize::MAX)
            .map(|e| Edge {
                u: map[e.u],
                v: map[e.v],
                weight: e.weight.clone(),
            })
            .collect();
        MatchGraph::new(vertices, edges, self.unit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<MatchGraph, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One perfect matching as edge indices, if any exists.
    pub fn find_perfect_matching(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (idx, e) in self.edges.iter().enumerate() {
            if e.weight.is_zero() {
                continue;
            }
            let (b, w) = if self.vertices[e.u].part == Part::Black {
                (e.u, e.v)
            } else {
                (e.v, e.u)
            };
            adj[b].push((w, idx));
        }
        let blacks: Vec<usize> = (0..n)
            .filter(|&i| self.vertices[i].part == Part::Black)
            .collect();
        if 2 * blacks.len() != n {
            return None;
        }
        let mut mate: Vec<Option<(usize, usize)>> = vec![None; n];

        fn augment(
            b: usize,
            adj: &[Vec<(usize, usize)>],
            mate: &mut [Option<(usize, usize)>],
            seen: &mut [bool],
        ) -> bool {
            for &(w, idx) in &adj[b] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                let free = match mate[w] {
                    None => true,
                    Some((other, _)) => augment(other, adj, mate, seen),
                };
                if free {
                    mate[w] = Some((b, idx));
                    return true;
                }
            }
            false
        }

        for &b in &blacks {
            let mut seen = vec![false; n];
            if !augment(b, &adj, &mut mate, &mut seen) {
                return None;
            }
        }
        let mut out: Vec<usize> = mate.iter().flatten().map(|&(_, idx)| idx).collect();
        out.sort_unstable();
        Some(out)
    }
}

/// Planar dual of a region: one vertex per cell at its centroid (scaled by 6),
/// one unit-weight edge per shared cell side. Edges run black to white.
pub fn dual_graph(region: &Region) -> MatchGraph {
    let vertices = region
        .cells
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let (x, y) = c.centroid6();
            Vertex {
                id,
                part: c.color.into(),
                x,
                y,
            }
        })
        .collect::<Vec<_>>();
    let edges = region
        .adjacency()
        .into_iter()
        .map(|(u, v)| {
            let (u, v) = if vertices[u].part == Part::Black {
                (u, v)
            } else {
                (v, u)
            };
            Edge {
                u,
                v,
                weight: BigRational::one(),
            }
        })
        .collect();
    MatchGraph::new(vertices, edges, 6)
}

/// Repeatedly matches a degree-1 vertex with its only neighbour, multiplying
/// by the edge weight.
pub fn reduce_forced(g: &MatchGraph) -> Forced {
    let mut graph = g.clone();
    let mut multiplier = BigRational::one();
    loop {
        let n = graph.vertices.len();
        let mut degree = vec![0usize; n];
        for e in &graph.edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        if degree.contains(&0) {
            return Forced::Zero;
        }
        let Some(leaf) = degree.iter().position(|&d| d == 1) else {
            return Forced::Reduced { graph, multiplier };
        };
        let edge = graph
            .edges
            .iter()
            .find(|e| e.u == leaf || e.v == leaf)
            .expect("leaf has an edge");
        let other = if edge.u == leaf { edge.v } else { edge.u };
        multiplier *= edge.weight.clone();
        graph = graph.without(&[leaf, other]);
    }
}

/// Semiring the transfer-matrix counter runs over.
trait Weight: Clone + Zero + One + Add<Output = Self> + for<'a> Mul<&'a Self, Output = Self> {}
impl Weight for BigUint {}
impl Weight for BigRational {}

/// Vertex orders tried by the counter; the narrowest profile wins.
const SWEEPS: [(i64, i64); 6] = [(-1, 1), (1, -1), (1, 1), (-1, -1), (0, 1), (1, 0)];

fn best_order(g: &MatchGraph) -> (Vec<usize>, usize) {
    let n = g.vertices.len();
    let mut best: Option<(Vec<usize>, usize)> = None;
    for &(cx, cy) in &SWEEPS {
        // primary key the projection onto (cx, cy), ties broken by the
        // perpendicular coordinate
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| {
            let v = &g.vertices[i];
            (-(cx * v.x + cy * v.y), cy * v.x - cx * v.y, i)
        });
        let mut pos = vec![0usize; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let width = g
            .edges
            .iter()
            .map(|e| pos[e.u].abs_diff(pos[e.v]))
            .max()
            .unwrap_or(0);
        if best.as_ref().is_none_or(|(_, w)| width < *w) {
            best = Some((order, width));
        }
    }
    best.unwrap_or((Vec::new(), 0))
}

fn profile_count<T: Weight>(
    g: &MatchGraph,
    weight: impl Fn(&Edge) -> T,
    limit: usize,
) -> Result<T, CountError> {
    g.validate()?;
    let n = g.vertices.len();
    if n == 0 {
        return Ok(T::one());
    }
    if n % 2 == 1 {
        return Ok(T::zero());
    }
    let (order, width) = best_order(g);
    let limit = limit.min(MAX_BANDWIDTH);
    if width > limit {
        return Err(CountError::SizeLimit { width, limit });
    }
    let mut pos = vec![0usize; n];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    // forward[p] = (offset, weight) for edges to later positions
    let mut forward: Vec<Vec<(u32, T)>> = vec![Vec::new(); n];
    for e in &g.edges {
        let (a, b) = (pos[e.u], pos[e.v]);
        let (lo, hi) = (a.min(b), a.max(b));
        if lo == hi {
            continue;
        }
        forward[lo].push(((hi - lo) as u32, weight(e)));
    }

    let mut states: HashMap<u128, T> = HashMap::new();
    states.insert(0, T::one());
    for fwd in &forward {
        let mut next: HashMap<u128, T> = HashMap::with_capacity(states.len());
        for (mask, value) in states {
            if mask & 1 == 1 {
                add_into(&mut next, mask >> 1, value);
                continue;
            }
            for (offset, w) in fwd {
                let bit = 1u128 << offset;
                if mask & bit == 0 {
                    add_into(&mut next, (mask | bit) >> 1, value.clone() * w);
                }
            }
        }
        states = next;
        if states.is_empty() {
            return Ok(T::zero());
        }
    }
    Ok(states.remove(&0).unwrap_or_else(T::zero))
}

fn add_into<T: Weight>(map: &mut HashMap<u128, T>, key: u128, value: T) {
    match map.get_mut(&key) {
        Some(slot) => *slot = slot.clone() + value,
        None => {
            map.insert(key, value);
        }
    }
}

/// Number of perfect matchings of an unweighted graph.
pub fn count_matchings(g: &MatchGraph) -> Result<BigUint, CountError> {
    count_matchings_with_limit(g, MAX_BANDWIDTH)
}

pub fn count_matchings_with_limit(g: &MatchGraph, limit: usize) -> Result<BigUint, CountError> {
    if let Some(e) = g.edges.iter().find(|e| !e.weight.is_one()) {
        return Err(CountError::NonUnitWeight {
            u: e.u,
            v: e.v,
            weight: e.weight.to_string(),
        });
    }
    profile_count(g, |_| BigUint::one(), limit)
}

/// Sum over perfect matchings of the product of edge weights.
pub fn matching_generating_function(g: &MatchGraph) -> Result<BigRational, CountError> {
    profile_count(g, |e| e.weight.clone(), MAX_BANDWIDTH)
}

/// Weighted biadjacency matrix, rows black and columns white.
fn biadjacency(g: &MatchGraph) -> (Vec<Vec<BigRational>>, usize, usize) {
    let mut row = vec![usize::MAX; g.vertices.len()];
    let mut col = vec![usize::MAX; g.vertices.len()];
    let (mut nb, mut nw) = (0, 0);
    for (i, v) in g.vertices.iter().enumerate() {
        match v.part {
            Part::Black => {
                row[i] = nb;
                nb += 1;
            }
            Part::White => {
                col[i] = nw;
                nw += 1;
            }
        }
    }
    let mut m = vec![vec![BigRational::zero(); nw]; nb];
    for e in &g.edges {
        let (b, w) = if g.vertices[e.u].part == Part::Black {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        m[row[b]][col[w]] += e.weight.clone();
    }
    (m, nb, nw)
}

/// Weighted perfect-matching count by Ryser's formula with Gray-code order.
pub fn permanent_oracle(g: &MatchGraph) -> Result<BigRational, CountError> {
    g.validate()?;
    let (m, nb, nw) = biadjacency(g);
    if nb != nw {
        return Ok(BigRational::zero());
    }
    let n = nb;
    if n > PERMANENT_MAX_SIDE {
        return Err(CountError::OracleTooLarge {
            side: n,
            limit: PERMANENT_MAX_SIDE,
        });
    }
    if n == 0 {
        return Ok(BigRational::one());
    }
    // clear denominators row by row
    let mut scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in &m {
        let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(r.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let mut sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    let mut gray = 0u32;
    for k in 1u32..(1u32 << n) {
        let next = k ^ (k >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << flipped) != 0;
        for (s, r) in sums.iter_mut().zip(&rows) {
            if adding {
                *s += &r[flipped];
            } else {
                *s -= &r[flipped];
            }
        }
        gray = next;
        let prod = sums.iter().fold(BigInt::one(), |acc, s| acc * s);
        if (n as u32 - next.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    let value = BigRational::new(total, scale);
    debug_assert!(!value.is_negative() || m.iter().flatten().any(|x| x.is_negative()));
    Ok(value)
}
