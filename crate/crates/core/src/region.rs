//! Generalized Douglas regions.
//!
//! Lattice points are integer pairs. Southwest-to-northeast diagonals are the
//! level sets of `y - x`: the top diagonal ℓ is level 0, the bottom diagonal
//! ℓ' is level `-T`, and the drawn-in diagonals sit at levels `-d_1`,
//! `-(d_1 + d_2)`, and so on. A unit square is named by its lower-left corner
//! `(i, j)`; its main diagonal lies on level `j - i`, and the square is split
//! into an upper-left (up-pointing) and a lower-right (down-pointing) triangle
//! exactly when that level is drawn in.
//!
//! The vertex `A` sits at the origin, so `D = (-a, -a)`, `B = (T - a, -a)` and
//! `C = (0, -T)` for every valid region.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The pair `(a, [d_1, …, d_k])` defining `D_a(d_1, …, d_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionSpec {
    pub a: u32,
    pub d: Vec<u32>,
}

impl RegionSpec {
    pub fn new(a: u32, d: impl Into<Vec<u32>>) -> Self {
        RegionSpec { a, d: d.into() }
    }

    /// `T = d_1 + … + d_k`.
    pub fn total_size(&self) -> u32 {
        self.d.iter().sum()
    }

    pub fn layer_count(&self) -> usize {
        self.d.len()
    }

    /// The width a valid region with this spec would have, `T - a`.
    pub fn width(&self) -> i64 {
        i64::from(self.total_size()) - i64::from(self.a)
    }

    /// The spec of the region flipped about ℓ': side `w`, reversed distances.
    ///
    /// Returns `None` when `T <= a`, which no valid region satisfies.
    pub fn flipped(&self) -> Option<RegionSpec> {
        let w = self.width();
        if w < 1 {
            return None;
        }
        let mut d = self.d.clone();
        d.reverse();
        Some(RegionSpec { a: w as u32, d })
    }

    /// Lexicographic minimum of the spec and its flip.
    pub fn canonical(&self) -> RegionSpec {
        match self.flipped() {
            Some(f) if f < *self => f,
            _ => self.clone(),
        }
    }

    fn check_fields(&self) -> Result<(), SpecInvalid> {
        if self.a == 0 {
            return Err(SpecInvalid::new(InvalidReason::SideNotPositive));
        }
        if self.d.is_empty() {
            return Err(SpecInvalid::new(InvalidReason::NoLayers));
        }
        if self.d.contains(&0) {
            return Err(SpecInvalid::new(InvalidReason::DistanceNotPositive));
        }
        Ok(())
    }

    /// Levels of the drawn-in diagonals, top to bottom.
    pub fn drawn_levels(&self) -> Vec<i64> {
        let mut acc = 0i64;
        let mut out = Vec::with_capacity(self.d.len().saturating_sub(1));
        for &d in &self.d[..self.d.len().saturating_sub(1)] {
            acc += i64::from(d);
            out.push(-acc);
        }
        out
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{}(", self.a)?;
        for (i, d) in self.d.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvalidReason {
    SideNotPositive,
    NoLayers,
    DistanceNotPositive,
    /// ℓ' passes through black unit squares, so no tiling exists.
    EllPrimeOnBlack,
    /// The vertices `B` and `D` are not on one horizontal line.
    NotHorizontal,
    /// The southwestern and northeastern boundaries meet.
    BoundariesIntersect,
    /// Black and white cell counts differ.
    ColorImbalance,
}

impl InvalidReason {
    /// Stable machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            InvalidReason::SideNotPositive => "side-not-positive",
            InvalidReason::NoLayers => "no-layers",
            InvalidReason::DistanceNotPositive => "distance-not-positive",
            InvalidReason::EllPrimeOnBlack => "ell-prime-on-black",
            InvalidReason::NotHorizontal => "not-horizontal",
            InvalidReason::BoundariesIntersect => "boundaries-intersect",
            InvalidReason::ColorImbalance => "color-imbalance",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::SideNotPositive => "side a must be positive",
            InvalidReason::NoLayers => "at least one distance is required",
            InvalidReason::DistanceNotPositive => "distances must be positive",
            InvalidReason::EllPrimeOnBlack => "ell-prime on black squares",
            InvalidReason::NotHorizontal => "vertices B and D not on one horizontal line",
            InvalidReason::BoundariesIntersect => {
                "southwestern and northeastern boundaries intersect"
            }
            InvalidReason::ColorImbalance => "black and white cell counts differ",
        })
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("invalid region spec: {reason}")]
pub struct SpecInvalid {
    pub reason: InvalidReason,
}

impl SpecInvalid {
    fn new(reason: InvalidReason) -> Self {
        SpecInvalid { reason }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn level(self) -> i64 {
        self.y - self.x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Square,
    /// Upper-left half of a split square; points away from ℓ'.
    TriangleUp,
    /// Lower-right half of a split square; points toward ℓ'.
    TriangleDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// Position of a cell in the augmented lattice, without its colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct CellKey {
    kind: CellKind,
    i: i64,
    j: i64,
}

impl CellKey {
    fn level(self) -> i64 {
        self.j - self.i
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub kind: CellKind,
    pub color: Color,
    /// Level of the diagonal through (or splitting) the anchor square.
    pub level: i64,
    /// Lower-left corner of the unit square containing the cell.
    pub anchor: LatticePoint,
}

impl Cell {
    fn key(&self) -> CellKey {
        CellKey {
            kind: self.kind,
            i: self.anchor.x,
            j: self.anchor.y,
        }
    }

    /// Corners in counterclockwise order.
    pub fn polygon(&self) -> Vec<LatticePoint> {
        let (i, j) = (self.anchor.x, self.anchor.y);
        let p = LatticePoint::new;
        match self.kind {
            CellKind::Square => vec![p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1)],
            CellKind::TriangleUp => vec![p(i, j), p(i + 1, j + 1), p(i, j + 1)],
            CellKind::TriangleDown => vec![p(i, j), p(i + 1, j), p(i + 1, j + 1)],
        }
    }

    /// Centroid scaled by 6, so that it is integral for every cell kind.
    pub fn centroid6(&self) -> (i64, i64) {
        centroid6(self.key())
    }

    /// Black squares and black up-pointing triangles.
    pub fn is_regular(&self) -> bool {
        self.color == Color::Black && self.kind != CellKind::TriangleDown
    }
}

fn centroid6(key: CellKey) -> (i64, i64) {
    let (i, j) = (6 * key.i, 6 * key.j);
    match key.kind {
        CellKind::Square => (i + 3, j + 3),
        CellKind::TriangleUp => (i + 2, j + 4),
        CellKind::TriangleDown => (i + 4, j + 2),
    }
}

/// The square lattice with a set of drawn-in diagonals.
struct Lattice {
    drawn: Vec<i64>,
}

#[derive(Clone, Copy)]
enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl Lattice {
    fn is_drawn(&self, level: i64) -> bool {
        self.drawn.contains(&level)
    }

    fn cells_of_square(&self, i: i64, j: i64) -> impl Iterator<Item = CellKey> {
        let kinds: &[CellKind] = if self.is_drawn(j - i) {
            &[CellKind::TriangleUp, CellKind::TriangleDown]
        } else {
            &[CellKind::Square]
        };
        kinds.iter().map(move |&kind| CellKey { kind, i, j })
    }

    /// The cell of square `(i, j)` that owns the given side.
    fn cell_on_side(&self, i: i64, j: i64, side: Side) -> CellKey {
        let kind = if !self.is_drawn(j - i) {
            CellKind::Square
        } else {
            match side {
                Side::Top | Side::Left => CellKind::TriangleUp,
                Side::Bottom | Side::Right => CellKind::TriangleDown,
            }
        };
        CellKey { kind, i, j }
    }

    fn neighbors(&self, c: CellKey) -> Vec<CellKey> {
        let (i, j) = (c.i, c.j);
        let top = || self.cell_on_side(i, j + 1, Side::Bottom);
        let bottom = || self.cell_on_side(i, j - 1, Side::Top);
        let left = || self.cell_on_side(i - 1, j, Side::Right);
        let right = || self.cell_on_side(i + 1, j, Side::Left);
        match c.kind {
            CellKind::Square => vec![top(), bottom(), left(), right()],
            CellKind::TriangleUp => vec![
                top(),
                left(),
                CellKey {
                    kind: CellKind::TriangleDown,
                    i,
                    j,
                },
            ],
            CellKind::TriangleDown => vec![
                bottom(),
                right(),
                CellKey {
                    kind: CellKind::TriangleUp,
                    i,
                    j,
                },
            ],
        }
    }
}

/// Colours of every cell whose anchor lies in a box, stored densely.
struct ColorGrid {
    x0: i64,
    y0: i64,
    width: usize,
    height: usize,
    colors: Vec<Option<Color>>,
}

impl ColorGrid {
    fn slot(&self, c: CellKey) -> Option<usize> {
        let (di, dj) = (c.i - self.x0, c.j - self.y0);
        if di < 0 || dj < 0 || di as usize >= self.width || dj as usize >= self.height {
            return None;
        }
        let kind = match c.kind {
            CellKind::Square => 0,
            CellKind::TriangleUp => 1,
            CellKind::TriangleDown => 2,
        };
        Some((kind * self.width + di as usize) * self.height + dj as usize)
    }

    fn get(&self, c: CellKey) -> Color {
        self.slot(c)
            .and_then(|s| self.colors[s])
            .expect("cell outside the coloured box")
    }
}

/// Proper 2-colouring of every cell whose anchor lies in the box, anchored at
/// "squares on ℓ are white".
fn color_box(lattice: &Lattice, (x0, x1): (i64, i64), (y0, y1): (i64, i64)) -> ColorGrid {
    let width = (x1 - x0 + 1) as usize;
    let height = (y1 - y0 + 1) as usize;
    let mut grid = ColorGrid {
        x0,
        y0,
        width,
        height,
        colors: vec![None; 3 * width * height],
    };
    let mut queue = VecDeque::new();
    for i in x0..=x1 {
        if (y0..=y1).contains(&i) {
            let seed = CellKey {
                kind: CellKind::Square,
                i,
                j: i,
            };
            let slot = grid.slot(seed).expect("seed in box");
            grid.colors[slot] = Some(Color::White);
            queue.push_back(seed);
        }
    }
    while let Some(c) = queue.pop_front() {
        let color = grid.get(c);
        for n in lattice.neighbors(c) {
            let Some(slot) = grid.slot(n) else {
                continue;
            };
            match grid.colors[slot] {
                Some(existing) => {
                    assert_ne!(existing, color, "augmented lattice is not 2-colourable");
                }
                None => {
                    grid.colors[slot] = Some(color.flip());
                    queue.push_back(n);
                }
            }
        }
    }
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corners {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub c: LatticePoint,
    pub d: LatticePoint,
}

/// A constructed generalized Douglas region.
#[derive(Clone, Debug)]
pub struct Region {
    pub spec: RegionSpec,
    pub cells: Vec<Cell>,
    pub corners: Corners,
    /// Cell indices per layer, top layer first.
    pub layers: Vec<Vec<usize>>,
    pub drawn_levels: Vec<i64>,
    /// Closed boundary A → B → C → D → A, without the repeated start point.
    pub boundary: Vec<LatticePoint>,
}

/// Line statistics of a region, obtained by scanning its cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionStats {
    /// Lines of black squares.
    pub p: u32,
    /// Lines of black up-pointing triangles.
    pub m: u32,
    /// Lines of black down-pointing triangles.
    pub n: u32,
    pub q: u32,
    /// White squares in the bottom line.
    pub w: u32,
    /// Regular cells.
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "T")]
    pub t: u32,
}

impl RegionStats {
    /// `C - w(w+1)/2`.
    pub fn exponent(&self) -> i64 {
        let w = i64::from(self.w);
        self.c as i64 - w * (w + 1) / 2
    }
}

/// Named lemma identity together with whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        IdentityCheck {
            name: name.into(),
            passed,
        }
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("exponent C - w(w+1)/2 = {0} is negative")]
    ExponentNegative(i64),
}

impl Region {
    pub fn build(spec: &RegionSpec) -> Result<Region, SpecInvalid> {
        build_region(spec)
    }

    pub fn stats(&self) -> RegionStats {
        structural_stats(self)
    }

    pub fn total_size(&self) -> u32 {
        self.spec.total_size()
    }

    /// Pairs of cell indices sharing an edge, each pair listed once with the
    /// smaller index first.
    pub fn adjacency(&self) -> Vec<(usize, usize)> {
        let lattice = Lattice {
            drawn: self.drawn_levels.clone(),
        };
        let index: HashMap<CellKey, usize> = self
            .cells
            .iter()
            .enumerate()
            .map(|(idx, c)| (c.key(), idx))
            .collect();
        let mut pairs = Vec::new();
        for (u, cell) in self.cells.iter().enumerate() {
            for n in lattice.neighbors(cell.key()) {
                if let Some(&v) = index.get(&n) {
                    if u < v {
                        pairs.push((u, v));
                    }
                }
            }
        }
        pairs
    }
}

pub fn build_region(spec: &RegionSpec) -> Result<Region, SpecInvalid> {
    spec.check_fields()?;
    let a = i64::from(spec.a);
    let t = i64::from(spec.total_size());
    let lattice = Lattice {
        drawn: spec.drawn_levels(),
    };

    // Everything the construction touches fits in this box of anchors.
    let xs = (-a - 2, t + 1);
    let ys = (-a - t - 2, 1);
    let colors = color_box(&lattice, xs, ys);
    let color_of = |c: CellKey| colors.get(c);

    // Remark 1(1): squares on ℓ' must be white.
    let on_ell_prime = CellKey {
        kind: CellKind::Square,
        i: 0,
        j: -t,
    };
    if color_of(on_ell_prime) != Color::White {
        return Err(SpecInvalid::new(InvalidReason::EllPrimeOnBlack));
    }

    // Northeastern boundary: south/east steps keeping a black cell on the right.
    let mut ne = Vec::with_capacity(t as usize + 1);
    let mut p = LatticePoint::new(0, 0);
    ne.push(p);
    for _ in 0..t {
        let east = lattice.cell_on_side(p.x, p.y - 1, Side::Top);
        let south = lattice.cell_on_side(p.x - 1, p.y - 1, Side::Right);
        debug_assert_ne!(color_of(east), color_of(south));
        p = if color_of(east) == Color::Black {
            LatticePoint::new(p.x + 1, p.y)
        } else {
            LatticePoint::new(p.x, p.y - 1)
        };
        ne.push(p);
    }
    let b = p;
    if b.y != -a {
        return Err(SpecInvalid::new(InvalidReason::NotHorizontal));
    }

    // Southwestern boundary: reflection of the northeastern one about the
    // perpendicular bisector x + y = -a of AD.
    let sw: Vec<LatticePoint> = ne
        .iter()
        .map(|q| LatticePoint::new(-a - q.y, -a - q.x))
        .collect();
    let c = *sw.last().expect("non-empty path");
    let d = LatticePoint::new(-a, -a);

    let mut boundary: Vec<LatticePoint> = ne.clone();
    // B → C: south, west, south, west, …
    let mut z = b;
    while z != c {
        z = LatticePoint::new(z.x, z.y - 1);
        boundary.push(z);
        z = LatticePoint::new(z.x - 1, z.y);
        if z != c {
            boundary.push(z);
        }
    }
    // C → D along the reversed southwestern boundary.
    boundary.extend(sw.iter().rev());
    boundary.pop();
    // D → A: north, east, north, east, …
    let mut z = d;
    boundary.push(z);
    while z != LatticePoint::new(0, 0) {
        z = LatticePoint::new(z.x, z.y + 1);
        boundary.push(z);
        z = LatticePoint::new(z.x + 1, z.y);
        boundary.push(z);
    }
    boundary.pop();
    {
        let mut seen = boundary.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != boundary.len() {
            return Err(SpecInvalid::new(InvalidReason::BoundariesIntersect));
        }
    }

    let cells = fill_polygon(&lattice, &boundary, &color_of);

    let blacks = cells.iter().filter(|c| c.color == Color::Black).count();
    if 2 * blacks != cells.len() {
        return Err(SpecInvalid::new(InvalidReason::ColorImbalance));
    }

    let drawn = lattice.drawn.clone();
    let layers = assign_layers(&cells, &drawn, spec.d.len());

    Ok(Region {
        spec: spec.clone(),
        cells,
        corners: Corners {
            a: LatticePoint::new(0, 0),
            b,
            c,
            d,
        },
        layers,
        drawn_levels: drawn,
        boundary,
    })
}

/// Cells whose centroid lies inside the closed lattice polygon, by a
/// horizontal scanline over each unit row.
fn fill_polygon(
    lattice: &Lattice,
    polygon: &[LatticePoint],
    color_of: &impl Fn(CellKey) -> Color,
) -> Vec<Cell> {
    let min_x = polygon.iter().map(|p| p.x).min().unwrap_or(0);
    let max_x = polygon.iter().map(|p| p.x).max().unwrap_or(0);
    let min_y = polygon.iter().map(|p| p.y).min().unwrap_or(0);
    let max_y = polygon.iter().map(|p| p.y).max().unwrap_or(0);

    let mut cells = Vec::new();
    for j in min_y..max_y {
        // x-coordinates of vertical edges spanning the row [j, j+1]
        let mut crossings: Vec<i64> = polygon
            .iter()
            .zip(polygon.iter().cycle().skip(1))
            .filter(|(p, q)| p.x == q.x && p.y.min(q.y) <= j && p.y.max(q.y) > j)
            .map(|(p, _)| 6 * p.x)
            .collect();
        crossings.sort_unstable();
        for i in min_x..max_x {
            for key in lattice.cells_of_square(i, j) {
                let (cx, _) = centroid6(key);
                let right = crossings.iter().filter(|&&x| x > cx).count();
                if right % 2 == 1 {
                    cells.push(Cell {
                        kind: key.kind,
                        color: color_of(key),
                        level: key.level(),
                        anchor: LatticePoint::new(i, j),
                    });
                }
            }
        }
    }
    cells
}

fn assign_layers(cells: &[Cell], drawn: &[i64], k: usize) -> Vec<Vec<usize>> {
    let mut layers = vec![Vec::new(); k];
    for (idx, cell) in cells.iter().enumerate() {
        // number of drawn diagonals strictly above the cell
        let above = match cell.kind {
            CellKind::TriangleUp => drawn.iter().filter(|&&l| l > cell.level).count(),
            CellKind::TriangleDown => drawn.iter().filter(|&&l| l >= cell.level).count(),
            CellKind::Square => drawn.iter().filter(|&&l| l > cell.level).count(),
        };
        layers[above.min(k - 1)].push(idx);
    }
    layers
}

/// Counts lines of black cells, the width and the regular cells.
pub fn structural_stats(region: &Region) -> RegionStats {
    let mut lines: Vec<(CellKind, i64)> = region
        .cells
        .iter()
        .filter(|c| c.color == Color::Black)
        .map(|c| (c.kind, c.level))
        .collect();
    lines.sort_unstable();
    lines.dedup();
    let count = |kind| lines.iter().filter(|(k, _)| *k == kind).count() as u32;
    let t = region.spec.total_size();
    let bottom = -i64::from(t);
    let w = region
        .cells
        .iter()
        .filter(|c| c.kind == CellKind::Square && c.level == bottom && c.color == Color::White)
        .count() as u32;
    let c = region.cells.iter().filter(|c| c.is_regular()).count() as u64;
    let (p, m, n) = (
        count(CellKind::Square),
        count(CellKind::TriangleUp),
        count(CellKind::TriangleDown),
    );
    RegionStats {
        p,
        m,
        n,
        q: p + m + n,
        w,
        c,
        t,
    }
}

/// The structural lemma equations and `p > 0`, evaluated on counted stats.
pub fn lemma_identities(spec: &RegionSpec, s: &RegionStats) -> Vec<IdentityCheck> {
    let a = i64::from(spec.a);
    let k = spec.d.len() as i64;
    let sum: i64 = spec.d.iter().map(|&d| i64::from(d)).sum();
    let (p, m, n, w) = (
        i64::from(s.p),
        i64::from(s.m),
        i64::from(s.n),
        i64::from(s.w),
    );
    vec![
        IdentityCheck::new("a = p + n", a == p + n),
        IdentityCheck::new("w = p + m", w == p + m),
        IdentityCheck::new("a + m - n = w", a + m - n == w),
        IdentityCheck::new("a + w = 2p + m + n", a + w == 2 * p + m + n),
        IdentityCheck::new("2p + m + n = sum d", 2 * p + m + n == sum),
        IdentityCheck::new("m + n = k - 1", m + n == k - 1),
        IdentityCheck::new("p > 0", p > 0),
    ]
}

/// `2^(C - w(w+1)/2)`.
pub fn formula_count(region: &Region) -> Result<BigUint, FormulaError> {
    let e = region.stats().exponent();
    if e < 0 {
        return Err(FormulaError::ExponentNegative(e));
    }
    Ok(BigUint::from(1u8) << e as u64)
}

/// The `a` making `d` a valid region, if any.
pub fn find_side(d: &[u32]) -> Option<RegionSpec> {
    let t: u32 = d.iter().sum();
    (1..t)
        .map(|a| RegionSpec::new(a, d.to_vec()))
        .find(|s| build_region(s).is_ok())
}
