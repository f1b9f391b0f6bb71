//! Independent oracles and fixture generators shared by the integration tests.
#![allow(dead_code)]

use douglas_core::condensation::CornerQuad;
use douglas_core::{BigRational, Edge, MatchGraph, Part, Vertex};
use num_traits::{One, Zero};
use rand::Rng;

/// Sum over perfect matchings by plain recursion on the lowest unmatched
/// vertex. Exponential; only for small graphs.
pub fn brute_mgf(g: &MatchGraph) -> BigRational {
    let n = g.vertices.len();
    let mut adj: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.u].push((e.v, e.weight.clone()));
        adj[e.v].push((e.u, e.weight.clone()));
    }
    fn go(used: &mut Vec<bool>, adj: &[Vec<(usize, BigRational)>]) -> BigRational {
        let Some(v) = used.iter().position(|u| !u) else {
            return BigRational::one();
        };
        used[v] = true;
        let mut total = BigRational::zero();
        for (w, wt) in &adj[v] {
            if !used[*w] {
                used[*w] = true;
                total += go(used, adj) * wt;
                used[*w] = false;
            }
        }
        used[v] = false;
        total
    }
    go(&mut vec![false; n], &adj)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn random_positive_rational(rng: &mut impl Rng) -> BigRational {
    rational(rng.gen_range(1..=9), rng.gen_range(1..=5))
}

/// Random bipartite graph with `side` vertices per part and edge density `p`.
pub fn random_bipartite(rng: &mut impl Rng, side: usize, p: f64, weighted: bool) -> MatchGraph {
    let mut vertices = Vec::new();
    for i in 0..2 * side {
        let part = if i < side { Part::Black } else { Part::White };
        vertices.push(Vertex {
            id: i,
            part,
            x: (i % side) as i64,
            y: (i / side) as i64,
        });
    }
    let mut edges = Vec::new();
    for b in 0..side {
        for w in side..2 * side {
            if rng.gen_bool(p) {
                let weight = if weighted {
                    random_positive_rational(rng)
                } else {
                    BigRational::one()
                };
                edges.push(Edge { u: b, v: w, weight });
            }
        }
    }
    MatchGraph::new(vertices, edges, 1)
}

/// A grid graph with random interior edges removed, plus four perimeter
/// vertices in cyclic order with colours black, white, black, white.
pub fn random_planar_fixture(rng: &mut impl Rng) -> (MatchGraph, CornerQuad) {
    let (w, h) = loop {
        let w = rng.gen_range(2..=5i64);
        let h = rng.gen_range(2..=5i64);
        if (w * h) % 2 == 0 {
            break (w, h);
        }
    };
    let id = |x: i64, y: i64| (y * w + x) as usize;
    let mut vertices = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let part = if (x + y) % 2 == 0 {
                Part::Black
            } else {
                Part::White
            };
            vertices.push(Vertex {
                id: id(x, y),
                part,
                x,
                y,
            });
        }
    }
    let on_perimeter = |x0: i64, y0: i64, x1: i64, y1: i64| {
        (x0 == x1 && (x0 == 0 || x0 == w - 1)) || (y0 == y1 && (y0 == 0 || y0 == h - 1))
    };
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            for (dx, dy) in [(1, 0), (0, 1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx >= w || ny >= h {
                    continue;
                }
                if on_perimeter(x, y, nx, ny) || rng.gen_bool(0.75) {
                    edges.push(Edge {
                        u: id(x, y),
                        v: id(nx, ny),
                        weight: BigRational::one(),
                    });
                }
            }
        }
    }
    // perimeter walk, counterclockwise from the origin
    let mut ring = Vec::new();
    for x in 0..w {
        ring.push(id(x, 0));
    }
    for y in 1..h {
        ring.push(id(w - 1, y));
    }
    for x in (0..w - 1).rev() {
        ring.push(id(x, h - 1));
    }
    for y in (1..h - 1).rev() {
        ring.push(id(0, y));
    }
    let g = MatchGraph::new(vertices, edges, 1);
    let part = |i: usize| g.vertices[ring[i]].part;
    loop {
        let mut idx: Vec<usize> = (0..4).map(|_| rng.gen_range(0..ring.len())).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() < 4 {
            continue;
        }
        let colours = [part(idx[0]), part(idx[1]), part(idx[2]), part(idx[3])];
        let quad = match colours {
            [Part::Black, Part::White, Part::Black, Part::White] => CornerQuad {
                x: ring[idx[0]],
                y: ring[idx[1]],
                z: ring[idx[2]],
                t: ring[idx[3]],
            },
            [Part::White, Part::Black, Part::White, Part::Black] => CornerQuad {
                x: ring[idx[1]],
                y: ring[idx[2]],
                z: ring[idx[3]],
                t: ring[idx[0]],
            },
            _ => continue,
        };
        return (g, quad);
    }
}
