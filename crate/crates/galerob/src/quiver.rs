//! The Gale-Robinson quiver on vertices 1..N: eight arrow kinds, greedy path
//! construction, faces of the planar lift, and classical multigraph mutation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{GRParams, ParamsError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("no path from vertex {start} with weight {weight}")]
    NoPath { start: i64, weight: Weight },
    #[error("path construction stalled at vertex {vertex} with remaining weight {remaining}")]
    InternalError { vertex: i64, remaining: Weight },
    #[error("square {residue} has crossing diagonals")]
    NonPlanarSquare { residue: i64 },
    #[error("vertex {0} lies on a two-cycle")]
    VertexInTwoCycle(i64),
}

/// The eight arrow kinds, in the order used to list and to greedily apply them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArrowKind {
    East,
    West,
    South,
    North,
    Southeast,
    Northeast,
    Southwest,
    Northwest,
}

use ArrowKind::*;

impl ArrowKind {
    pub const ALL: [ArrowKind; 8] = [
        East, West, South, North, Southeast, Northeast, Southwest, Northwest,
    ];

    /// Label change target - source (never reduced mod N; targets stay in 1..N).
    pub fn offset(self, p: GRParams) -> i64 {
        match self {
            East => p.a,
            West => p.b(),
            South => -p.c,
            North => -p.d(),
            Southeast => p.a - p.c,
            Northeast => p.a - p.d(),
            Southwest => p.b() - p.c,
            Northwest => p.b() - p.d(),
        }
    }

    /// Step in the planar lift.
    pub fn displacement(self) -> (i64, i64) {
        match self {
            East => (1, 0),
            West => (-1, 0),
            South => (0, -1),
            North => (0, 1),
            Southeast => (1, -1),
            Northeast => (1, 1),
            Southwest => (-1, -1),
            Northwest => (-1, 1),
        }
    }

    /// Degree of the arrow's matrix entry in the calibrated representation.
    pub fn weight(self) -> Weight {
        match self {
            East => Weight::new(1, 0, 0, 0),
            West => Weight::new(0, 1, 0, 0),
            South => Weight::new(0, 0, 1, 0),
            North => Weight::new(0, 0, 0, 1),
            Southeast => Weight::new(1, 0, 1, 0),
            Northeast => Weight::new(1, 0, 0, 1),
            Southwest => Weight::new(0, 1, 1, 0),
            Northwest => Weight::new(0, 1, 0, 1),
        }
    }

    /// Whether an arrow of this kind leaves the given source vertex.
    pub fn exists_at(self, p: GRParams, source: i64) -> bool {
        let (a, b, c, d, n) = (p.a, p.b(), p.c, p.d(), p.n);
        let i = source;
        match self {
            East => i + a <= n,
            West => i + b <= n,
            South => i - c >= 1,
            North => i - d >= 1,
            Southeast => i + a > n && i - c < 1,
            Northeast => i + a > n && i - d < 1,
            Southwest => i + b > n && i - c < 1,
            Northwest => i + b > n && i - d < 1,
        }
    }
}

impl fmt::Display for ArrowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: i64,
    pub target: i64,
    pub kind: ArrowKind,
}

/// The quiver Q(a, c, N) with its full arrow list, ordered by (source, kind).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    params: GRParams,
    arrows: Vec<Arrow>,
}

pub fn build_quiver(a: i64, c: i64, n: i64) -> Result<Quiver, QuiverError> {
    Ok(Quiver::from_params(GRParams::new(a, c, n)?))
}

impl Quiver {
    pub fn from_params(params: GRParams) -> Quiver {
        let mut arrows = Vec::new();
        for source in 1..=params.n {
            for kind in ArrowKind::ALL {
                if kind.exists_at(params, source) {
                    let target = source + kind.offset(params);
                    debug_assert!((1..=params.n).contains(&target));
                    arrows.push(Arrow { source, target, kind });
                }
            }
        }
        for v in 1..=params.n {
            assert!(
                arrows.iter().any(|ar| ar.source == v),
                "vertex {v} has out-degree 0"
            );
        }
        Quiver { params, arrows }
    }

    pub fn params(&self) -> GRParams {
        self.params
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn census(&self) -> BTreeMap<ArrowKind, usize> {
        let mut out = BTreeMap::new();
        for ar in &self.arrows {
            *out.entry(ar.kind).or_insert(0) += 1;
        }
        out
    }

    pub fn has_arrow(&self, source: i64, kind: ArrowKind) -> bool {
        self.arrows
            .iter()
            .any(|ar| ar.source == source && ar.kind == kind)
    }

    /// Forgets kinds, keeping arrow multiplicities only.
    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.params.n);
        for ar in &self.arrows {
            g.add_arrows(ar.source, ar.target, 1);
        }
        g
    }
}

/// Vertex label at lift coordinates (x, y): the representative of ax + cy in 1..N.
pub fn lift_vertex(p: GRParams, x: i64, y: i64) -> i64 {
    p.rep(p.a * x + p.c * y)
}

/// A composable arrow sequence; arrows are stored in application order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub start: i64,
    pub end: i64,
    pub weight: Weight,
    pub arrows: Vec<Arrow>,
}

/// Greedy path from `start` of total weight `weight`.
///
/// Requires `weight` componentwise nonnegative and `start + level(weight)`
/// in 1..N; for other inputs no path exists and `NoPath` is returned.
pub fn find_path(quiver: &Quiver, start: i64, weight: Weight) -> Result<Path, QuiverError> {
    let p = quiver.params();
    let end = start + p.level(weight);
    if !weight.is_nonneg() || !(1..=p.n).contains(&end) || !(1..=p.n).contains(&start) {
        return Err(QuiverError::NoPath { start, weight });
    }
    let mut u = start;
    let mut rem = weight;
    let mut arrows = Vec::new();
    while rem != Weight::ZERO {
        let step = ArrowKind::ALL.into_iter().find(|&kind| {
            let wt = kind.weight();
            (0..4).all(|i| rem.0[i] >= wt.0[i]) && kind.exists_at(p, u)
        });
        match step {
            Some(kind) => {
                let target = u + kind.offset(p);
                arrows.push(Arrow { source: u, target, kind });
                rem = rem - kind.weight();
                u = target;
            }
            None => return Err(QuiverError::InternalError { vertex: u, remaining: rem }),
        }
    }
    debug_assert_eq!(u, end);
    Ok(Path { start, end, weight, arrows })
}

// ---------------------------------------------------------------------------
// Faces of the planar lift
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    fn opposite(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        }
    }
}

/// One face of the lift, up to translation; `arrows` walk the boundary in
/// cyclic order starting at the face's first corner of its square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub residue: i64,
    pub orientation: Orientation,
    pub arrows: Vec<Arrow>,
}

impl Face {
    pub fn boundary_weight(&self) -> Weight {
        self.arrows
            .iter()
            .fold(Weight::ZERO, |acc, ar| acc + ar.kind.weight())
    }
}

/// Which diagonal arrows cross the unit square whose lower-left label is v00.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SquareDiagonals {
    pub ne: bool,
    pub sw: bool,
    pub se: bool,
    pub nw: bool,
}

impl SquareDiagonals {
    pub fn count(&self) -> usize {
        usize::from(self.ne) + usize::from(self.sw) + usize::from(self.se) + usize::from(self.nw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareClass {
    Quad,
    Triangles,
    TrianglesAndDigon,
    NonPlanar,
}

/// Diagonals of a square from raw integers, without requiring valid parameters.
pub fn square_diagonals(a: i64, c: i64, n: i64, v00: i64) -> SquareDiagonals {
    let rep = |v: i64| (v - 1).rem_euclid(n) + 1;
    let (b, d) = (n - a, n - c);
    let v10 = rep(v00 + a);
    let v01 = rep(v00 + c);
    let v11 = rep(v00 + a + c);
    SquareDiagonals {
        ne: b < v00 && v00 <= d,
        sw: a < v11 && v11 <= c,
        se: b < v01 && v01 <= c,
        nw: a < v10 && v10 <= d,
    }
}

pub fn classify_square(a: i64, c: i64, n: i64, v00: i64) -> SquareClass {
    let diag = square_diagonals(a, c, n, v00);
    match (diag.count(), diag.ne && diag.sw, diag.se && diag.nw) {
        (0, _, _) => SquareClass::Quad,
        (1, _, _) => SquareClass::Triangles,
        (2, true, _) | (2, _, true) => SquareClass::TrianglesAndDigon,
        _ => SquareClass::NonPlanar,
    }
}

/// Corner order P00, P10, P11, P01; coordinates for orientation tests.
const CORNER_XY: [(i64, i64); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

/// Faces of the lift up to translation, one square orbit per residue 1..N.
///
/// Squares are read off the quiver's arrow list, so hand-built quivers with
/// extra diagonals exercise the digon and non-planar branches.
pub fn enumerate_faces(quiver: &Quiver) -> Result<Vec<Face>, QuiverError> {
    let p = quiver.params();
    let present: BTreeSet<(i64, ArrowKind)> = quiver
        .arrows()
        .iter()
        .map(|ar| (ar.source, ar.kind))
        .collect();
    let mut faces = Vec::new();
    for k in 1..=p.n {
        faces.extend(square_faces(p, &present, k)?);
    }
    Ok(faces)
}

/// Faces contributed by the square orbit with lower-left residue k.
fn square_faces(
    p: GRParams,
    present: &BTreeSet<(i64, ArrowKind)>,
    k: i64,
) -> Result<Vec<Face>, QuiverError> {
    let labels = [k, p.rep(k + p.a), p.rep(k + p.a + p.c), p.rep(k + p.c)];
    let arrow = |source: usize, target: usize, kind: ArrowKind| Arrow {
        source: labels[source],
        target: labels[target],
        kind,
    };
    // Directed side and diagonal edges as (from-corner, to-corner, arrow).
    let mut edges: Vec<(usize, usize, Arrow)> = Vec::new();
    let side = |out_corner: usize,
                    out_kind: ArrowKind,
                    in_corner: usize,
                    in_kind: ArrowKind,
                    edges: &mut Vec<(usize, usize, Arrow)>| {
        if present.contains(&(labels[out_corner], out_kind)) {
            edges.push((out_corner, in_corner, arrow(out_corner, in_corner, out_kind)));
        } else {
            assert!(
                present.contains(&(labels[in_corner], in_kind)),
                "square {k} is missing a side edge"
            );
            edges.push((in_corner, out_corner, arrow(in_corner, out_corner, in_kind)));
        }
    };
    side(0, East, 1, West, &mut edges);
    side(3, East, 2, West, &mut edges);
    side(0, North, 3, South, &mut edges);
    side(1, North, 2, South, &mut edges);
    let diag = SquareDiagonals {
        ne: present.contains(&(labels[0], Northeast)),
        sw: present.contains(&(labels[2], Southwest)),
        se: present.contains(&(labels[3], Southeast)),
        nw: present.contains(&(labels[1], Northwest)),
    };
    let mut diag_edges: Vec<(usize, usize, Arrow)> = Vec::new();
    if diag.ne {
        diag_edges.push((0, 2, arrow(0, 2, Northeast)));
    }
    if diag.sw {
        diag_edges.push((2, 0, arrow(2, 0, Southwest)));
    }
    if diag.se {
        diag_edges.push((3, 1, arrow(3, 1, Southeast)));
    }
    if diag.nw {
        diag_edges.push((1, 3, arrow(1, 3, Northwest)));
    }

    let on_main = diag.ne || diag.sw;
    let on_anti = diag.se || diag.nw;
    if on_main && on_anti {
        return Err(QuiverError::NonPlanarSquare { residue: k });
    }
    let triangle_corners: [[usize; 3]; 2] = if on_main {
        [[0, 1, 2], [0, 2, 3]]
    } else {
        [[0, 1, 3], [1, 2, 3]]
    };
    match diag.count() {
        0 => Ok(vec![close_face(k, &[0, 1, 2, 3], &edges)]),
        1 => {
            edges.extend(diag_edges);
            let t1 = close_face(k, &triangle_corners[0], &edges);
            let t2 = close_face(k, &triangle_corners[1], &edges);
            Ok(vec![t1, t2])
        }
        2 => {
            // Antiparallel pair: each triangle closes with whichever diagonal
            // direction completes its cycle; the pair itself forms a digon,
            // oriented opposite the first triangle by convention.
            let close_with_one_diagonal = |corners: &[usize]| {
                diag_edges
                    .iter()
                    .find_map(|diag| {
                        let mut chosen = edges.clone();
                        chosen.push(*diag);
                        try_close_face(k, corners, &chosen)
                    })
                    .unwrap_or_else(|| panic!("square {k}: triangle does not close"))
            };
            let t1 = close_with_one_diagonal(&triangle_corners[0]);
            let t2 = close_with_one_diagonal(&triangle_corners[1]);
            let first = if diag_edges[0].0 < diag_edges[1].0 { 0 } else { 1 };
            let digon = Face {
                residue: k,
                orientation: t1.orientation.opposite(),
                arrows: vec![diag_edges[first].2, diag_edges[1 - first].2],
            };
            Ok(vec![t1, t2, digon])
        }
        _ => Err(QuiverError::NonPlanarSquare { residue: k }),
    }
}

/// Walks the unique directed cycle on the given corners and orients it.
fn close_face(residue: i64, corners: &[usize], edges: &[(usize, usize, Arrow)]) -> Face {
    try_close_face(residue, corners, edges)
        .unwrap_or_else(|| panic!("square {residue}: boundary is not a directed cycle"))
}

fn try_close_face(residue: i64, corners: &[usize], edges: &[(usize, usize, Arrow)]) -> Option<Face> {
    let set: BTreeSet<usize> = corners.iter().copied().collect();
    let mut next: BTreeMap<usize, (usize, Arrow)> = BTreeMap::new();
    for &(from, to, ar) in edges {
        if set.contains(&from) && set.contains(&to) {
            if next.insert(from, (to, ar)).is_some() {
                return None;
            }
        }
    }
    let start = corners.iter().copied().min().unwrap();
    let mut arrows = Vec::new();
    let mut order = Vec::new();
    let mut at = start;
    for _ in 0..corners.len() {
        order.push(at);
        let &(to, ar) = next.get(&at)?;
        arrows.push(ar);
        at = to;
    }
    if at != start {
        return None;
    }
    let mut twice_area = 0;
    for i in 0..order.len() {
        let (x0, y0) = CORNER_XY[order[i]];
        let (x1, y1) = CORNER_XY[order[(i + 1) % order.len()]];
        twice_area += x0 * y1 - x1 * y0;
    }
    let orientation = if twice_area > 0 { Orientation::Ccw } else { Orientation::Cw };
    Some(Face { residue, orientation, arrows })
}

// ---------------------------------------------------------------------------
// Multigraph mutation
// ---------------------------------------------------------------------------

/// A multigraph on vertices 1..n; `mult` maps (source, target) to multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub n: i64,
    pub mult: BTreeMap<(i64, i64), u64>,
}

impl Multigraph {
    pub fn new(n: i64) -> Multigraph {
        Multigraph { n, mult: BTreeMap::new() }
    }

    /// Loops are allowed: label self-loops arise whenever a = c or a + c = N.
    pub fn add_arrows(&mut self, source: i64, target: i64, count: u64) {
        if count > 0 {
            *self.mult.entry((source, target)).or_insert(0) += count;
        }
    }

    pub fn mult(&self, source: i64, target: i64) -> u64 {
        self.mult.get(&(source, target)).copied().unwrap_or(0)
    }

    /// A loop at v counts: mutation is undefined there just as on a two-cycle.
    pub fn vertex_on_two_cycle(&self, v: i64) -> bool {
        (1..=self.n).any(|u| self.mult(v, u) > 0 && self.mult(u, v) > 0)
    }

    pub fn is_two_acyclic(&self) -> bool {
        (1..=self.n).all(|v| !self.vertex_on_two_cycle(v))
    }
}

/// Quiver mutation at vertex k on the kind-free multigraph: compose through k,
/// reverse at k, then cancel all antiparallel pairs.
pub fn classical_mutation(graph: &Multigraph, k: i64) -> Result<Multigraph, QuiverError> {
    if graph.vertex_on_two_cycle(k) {
        return Err(QuiverError::VertexInTwoCycle(k));
    }
    let mut out = Multigraph::new(graph.n);
    for (&(s, t), &m) in &graph.mult {
        if s == k {
            out.add_arrows(t, s, m);
        } else if t == k {
            out.add_arrows(t, s, m);
        } else {
            out.add_arrows(s, t, m);
        }
    }
    for i in 1..=graph.n {
        let into = graph.mult(i, k);
        if into == 0 {
            continue;
        }
        for j in 1..=graph.n {
            let outof = graph.mult(k, j);
            if outof > 0 {
                out.add_arrows(i, j, into * outof);
            }
        }
    }
    let pairs: Vec<(i64, i64)> = out
        .mult
        .keys()
        .copied()
        .filter(|&(s, t)| s < t)
        .collect();
    for (s, t) in pairs {
        let cancel = out.mult(s, t).min(out.mult(t, s));
        if cancel > 0 {
            for key in [(s, t), (t, s)] {
                let m = out.mult.get_mut(&key).unwrap();
                *m -= cancel;
                if *m == 0 {
                    out.mult.remove(&key);
                }
            }
        }
    }
    Ok(out)
}

/// Relabels v to v-1 (and 1 to n), the shift that follows mutation at vertex 1.
pub fn relabel_down(graph: &Multigraph) -> Multigraph {
    let shift = |v: i64| if v == 1 { graph.n } else { v - 1 };
    let mut out = Multigraph::new(graph.n);
    for (&(s, t), &m) in &graph.mult {
        out.add_arrows(shift(s), shift(t), m);
    }
    out
}

/// Graphviz rendering with one edge line per arrow, labelled by kind.
pub fn export_dot(quiver: &Quiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for ar in quiver.arrows() {
        out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", ar.source, ar.target, ar.kind));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quiver(a: i64, c: i64, n: i64) -> Quiver {
        build_quiver(a, c, n).unwrap()
    }

    fn arrow_triples(q: &Quiver) -> Vec<(i64, i64, ArrowKind)> {
        q.arrows().iter().map(|a| (a.source, a.target, a.kind)).collect()
    }

    #[test]
    fn conifold_arrows() {
        assert_eq!(
            arrow_triples(&quiver(1, 1, 2)),
            vec![(1, 2, East), (1, 2, West), (2, 1, South), (2, 1, North)]
        );
    }

    #[test]
    fn somos4_arrows() {
        assert_eq!(
            arrow_triples(&quiver(1, 2, 4)),
            vec![
                (1, 2, East),
                (1, 4, West),
                (2, 3, East),
                (2, 3, Southwest),
                (2, 3, Northwest),
                (3, 4, East),
                (3, 1, South),
                (3, 1, North),
                (4, 2, South),
                (4, 2, North),
            ]
        );
    }

    #[test]
    fn gr126_arrows() {
        let mut expected = vec![
            (1, 2, East),
            (2, 3, East),
            (3, 4, East),
            (4, 5, East),
            (5, 6, East),
            (1, 6, West),
            (3, 1, South),
            (4, 2, South),
            (5, 3, South),
            (6, 4, South),
            (5, 1, North),
            (6, 2, North),
            (2, 5, Southwest),
            (2, 3, Northwest),
            (3, 4, Northwest),
            (4, 5, Northwest),
        ];
        expected.sort();
        let mut got = arrow_triples(&quiver(1, 2, 6));
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 16);
    }

    #[test]
    fn census_matches_counting_formula() {
        for n in 2..=10 {
            for p in GRParams::all_with_n(n) {
                let q = Quiver::from_params(p);
                let census = q.census();
                let count = |k: ArrowKind| census.get(&k).copied().unwrap_or(0) as i64;
                let (a, b, c, d) = (p.a, p.b(), p.c, p.d());
                assert_eq!(count(East), b);
                assert_eq!(count(West), a);
                assert_eq!(count(South), d);
                assert_eq!(count(North), c);
                assert_eq!(count(Southeast), (c - b).max(0));
                assert_eq!(count(Northeast), (d - b).max(0));
                assert_eq!(count(Southwest), (c - a).max(0));
                assert_eq!(count(Northwest), (d - a).max(0));
            }
        }
    }

    #[test]
    fn arrow_labels_match_lift_geometry() {
        for n in 2..=10 {
            for p in GRParams::all_with_n(n) {
                for ar in Quiver::from_params(p).arrows() {
                    let (dx, dy) = ar.kind.displacement();
                    assert_eq!(p.rep(ar.source + p.a * dx + p.c * dy), ar.target);
                    assert_eq!(p.level(ar.kind.weight()), ar.kind.offset(p));
                    assert_eq!(ar.source + ar.kind.offset(p), ar.target);
                }
            }
        }
    }

    #[test]
    fn every_vertex_alternates_in_and_out_arrows() {
        // Cyclic slots around a lift vertex, 45 degrees apart; each slot is
        // occupied by an outgoing kind or the incoming kind pointing back.
        for n in 2..=10 {
            for p in GRParams::all_with_n(n) {
                let slots: [(ArrowKind, ArrowKind); 8] = [
                    (East, West),
                    (Northeast, Southwest),
                    (North, South),
                    (Northwest, Southeast),
                    (West, East),
                    (Southwest, Northeast),
                    (South, North),
                    (Southeast, Northwest),
                ];
                for u in 1..=n {
                    let mut marks = Vec::new();
                    for (out_kind, in_kind) in slots {
                        let has_out = out_kind.exists_at(p, u);
                        let source = u - in_kind.offset(p);
                        let has_in = (1..=n).contains(&source) && in_kind.exists_at(p, source);
                        assert!(
                            !(has_out && has_in),
                            "slot conflict at vertex {u} of {p}"
                        );
                        if has_out {
                            marks.push(true);
                        } else if has_in {
                            marks.push(false);
                        }
                    }
                    assert!(marks.len() >= 2 && marks.len() % 2 == 0);
                    for i in 0..marks.len() {
                        assert_ne!(
                            marks[i],
                            marks[(i + 1) % marks.len()],
                            "vertex {u} of {p} breaks alternation"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_one_has_degree_four() {
        for n in 2..=12 {
            for p in GRParams::all_with_n(n) {
                let q = Quiver::from_params(p);
                let outs: Vec<i64> = q
                    .arrows()
                    .iter()
                    .filter(|ar| ar.source == 1)
                    .map(|ar| ar.target)
                    .collect();
                let ins: Vec<i64> = q
                    .arrows()
                    .iter()
                    .filter(|ar| ar.target == 1)
                    .map(|ar| ar.source)
                    .collect();
                assert_eq!(outs, vec![1 + p.a, 1 + p.b()], "bad out-arrows for {p}");
                let mut expected_ins = vec![1 + p.c, 1 + p.d()];
                expected_ins.sort();
                let mut ins = ins;
                ins.sort();
                assert_eq!(ins, expected_ins, "bad in-arrows for {p}");
            }
        }
    }

    #[test]
    fn lift_vertex_examples() {
        let p = GRParams::new(1, 2, 6).unwrap();
        assert_eq!(lift_vertex(p, 0, 0), 6);
        assert_eq!(lift_vertex(p, 1, 0), 1);
        assert_eq!(lift_vertex(p, 0, 1), 2);
        assert_eq!(lift_vertex(p, -1, -1), 3);
    }

    #[test]
    fn greedy_path_example() {
        let q = quiver(1, 2, 6);
        let path = find_path(&q, 6, Weight::new(1, 0, 1, 0)).unwrap();
        assert_eq!(path.end, 5);
        assert_eq!(
            path.arrows,
            vec![
                Arrow { source: 6, target: 4, kind: South },
                Arrow { source: 4, target: 5, kind: East },
            ]
        );
    }

    #[test]
    fn path_rejects_bad_endpoint_or_negative_weight() {
        let q = quiver(1, 2, 6);
        // Level of (0,0,1,0) is -2, and 1 - 2 = -1 falls outside 1..6.
        assert_eq!(
            find_path(&q, 1, Weight::new(0, 0, 1, 0)),
            Err(QuiverError::NoPath { start: 1, weight: Weight::new(0, 0, 1, 0) })
        );
        assert!(matches!(
            find_path(&q, 3, Weight::new(-1, 0, 0, 0)),
            Err(QuiverError::NoPath { .. })
        ));
    }

    /// Depth-first search for any path of the exact weight, independent of the
    /// greedy construction.
    fn path_exists_search(q: &Quiver, start: i64, weight: Weight) -> bool {
        fn go(q: &Quiver, u: i64, rem: Weight) -> bool {
            if rem == Weight::ZERO {
                return true;
            }
            for ar in q.arrows().iter().filter(|ar| ar.source == u) {
                let wt = ar.kind.weight();
                if (0..4).all(|i| rem.0[i] >= wt.0[i]) && go(q, ar.target, rem - wt) {
                    return true;
                }
            }
            false
        }
        go(q, start, weight)
    }

    #[test]
    fn greedy_path_agrees_with_search() {
        for n in 2..=6 {
            for p in GRParams::all_with_n(n) {
                let q = Quiver::from_params(p);
                for start in 1..=n {
                    for w1 in 0..=2 {
                        for w2 in 0..=2 {
                            for w3 in 0..=2 {
                                for w4 in 0..=2 {
                                    let w = Weight::new(w1, w2, w3, w4);
                                    let found = find_path(&q, start, w);
                                    let exists = path_exists_search(&q, start, w);
                                    let end = start + p.level(w);
                                    if (1..=n).contains(&end) {
                                        let path = found.unwrap();
                                        assert!(exists);
                                        assert_eq!(path.end, end);
                                        let total = path
                                            .arrows
                                            .iter()
                                            .fold(Weight::ZERO, |acc, ar| acc + ar.kind.weight());
                                        assert_eq!(total, w);
                                        for pair in path.arrows.windows(2) {
                                            assert_eq!(pair[0].target, pair[1].source);
                                        }
                                    } else {
                                        assert!(!exists, "{p} start {start} weight {w}");
                                        assert!(matches!(found, Err(QuiverError::NoPath { .. })));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn square_diagonal_census() {
        // Somos-4 square 1 carries only the northwest diagonal at vertex 2.
        assert_eq!(
            square_diagonals(1, 2, 4, 1),
            SquareDiagonals { ne: false, sw: false, se: false, nw: true }
        );
        assert_eq!(classify_square(1, 2, 4, 1), SquareClass::Triangles);
        assert_eq!(classify_square(1, 1, 2, 1), SquareClass::Quad);
        for n in 2..=12 {
            for p in GRParams::all_with_n(n) {
                for v00 in 1..=n {
                    let diag = square_diagonals(p.a, p.c, p.n, v00);
                    assert!(diag.count() <= 1, "square {v00} of {p} has {diag:?}");
                }
            }
        }
    }

    #[test]
    fn conifold_faces_are_two_opposite_quads() {
        let faces = enumerate_faces(&quiver(1, 1, 2)).unwrap();
        assert_eq!(faces.len(), 2);
        assert_eq!(faces.iter().filter(|f| f.orientation == Orientation::Ccw).count(), 1);
        for f in &faces {
            assert_eq!(f.arrows.len(), 4);
            assert_eq!(f.boundary_weight(), Weight::new(1, 1, 1, 1));
        }
    }

    #[test]
    fn face_suite_over_small_parameters() {
        for n in 2..=12 {
            for p in GRParams::all_with_n(n) {
                let q = Quiver::from_params(p);
                let faces = enumerate_faces(&q).unwrap();
                let diagonals: usize = (1..=n)
                    .map(|k| square_diagonals(p.a, p.c, p.n, k).count())
                    .sum();
                assert_eq!(faces.len(), n as usize + diagonals);
                let v = n;
                let e = q.arrows().len() as i64;
                let f = faces.len() as i64;
                assert_eq!(v - e + f, 0, "Euler count fails for {p}");
                let ccw = faces.iter().filter(|f| f.orientation == Orientation::Ccw).count();
                assert_eq!(ccw * 2, faces.len(), "orientation split fails for {p}");
                for face in &faces {
                    assert_eq!(face.boundary_weight(), Weight::new(1, 1, 1, 1));
                    for pair in face.arrows.windows(2) {
                        assert_eq!(pair[0].target, pair[1].source);
                    }
                    assert_eq!(face.arrows.last().unwrap().target, face.arrows[0].source);
                }
                let mut uses: BTreeMap<(i64, ArrowKind), usize> = BTreeMap::new();
                for face in &faces {
                    for ar in &face.arrows {
                        *uses.entry((ar.source, ar.kind)).or_insert(0) += 1;
                    }
                }
                for ar in q.arrows() {
                    assert_eq!(
                        uses.get(&(ar.source, ar.kind)),
                        Some(&2),
                        "arrow {ar:?} of {p} is not on exactly two faces"
                    );
                }
            }
        }
    }

    #[test]
    fn hand_built_antiparallel_diagonal_yields_digon() {
        let mut q = quiver(1, 2, 4);
        // Square 1 already carries the northwest arrow 2 -> 3; adding the
        // antiparallel southeast arrow 3 -> 2 makes its diagonal two-way.
        q.arrows.push(Arrow { source: 3, target: 2, kind: Southeast });
        let faces = enumerate_faces(&q).unwrap();
        assert_eq!(faces.len(), 7);
        let digons: Vec<&Face> = faces.iter().filter(|f| f.arrows.len() == 2).collect();
        assert_eq!(digons.len(), 1);
        let digon = digons[0];
        assert_eq!(digon.residue, 1);
        assert_eq!(
            digon.arrows,
            vec![
                Arrow { source: 2, target: 3, kind: Northwest },
                Arrow { source: 3, target: 2, kind: Southeast },
            ]
        );
        let square_one: Vec<&Face> = faces.iter().filter(|f| f.residue == 1).collect();
        assert_eq!(square_one.len(), 3);
        let t1 = square_one.iter().find(|f| f.arrows.len() == 3).unwrap();
        assert_eq!(digon.orientation, t1.orientation.opposite());
    }

    #[test]
    fn hand_built_crossing_diagonals_are_rejected() {
        let mut q = quiver(1, 2, 4);
        q.arrows.push(Arrow { source: 1, target: 4, kind: Northeast });
        assert_eq!(
            enumerate_faces(&q),
            Err(QuiverError::NonPlanarSquare { residue: 1 })
        );
    }

    #[test]
    fn mutation_rejects_vertex_on_two_cycle() {
        let g = quiver(1, 1, 2).to_multigraph();
        assert_eq!(classical_mutation(&g, 1), Err(QuiverError::VertexInTwoCycle(1)));
    }

    #[test]
    fn mutation_then_relabel_fixes_two_acyclic_quivers() {
        let mut checked = 0;
        for n in 2..=12 {
            for p in GRParams::all_with_n(n) {
                let g = Quiver::from_params(p).to_multigraph();
                assert_eq!(
                    g.vertex_on_two_cycle(1),
                    p.a == p.c || p.a == p.d(),
                    "vertex-one two-cycle test fails for {p}"
                );
                if g.is_two_acyclic() {
                    let mutated = classical_mutation(&g, 1).unwrap();
                    assert_eq!(relabel_down(&mutated), g, "mutation periodicity fails for {p}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn conifold_dot_rendering() {
        let expected = "digraph quiver {\n  1 -> 2 [label=\"East\"];\n  1 -> 2 [label=\"West\"];\n  2 -> 1 [label=\"South\"];\n  2 -> 1 [label=\"North\"];\n}\n";
        assert_eq!(export_dot(&quiver(1, 1, 2)), expected);
    }

    #[test]
    fn quiver_json_round_trip() {
        let q = quiver(1, 2, 4);
        let text = serde_json::to_string(&q).unwrap();
        assert!(text.contains("\"N\":4"));
        assert!(text.contains("\"kind\":\"East\""));
        let back: Quiver = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
    }

    /// Signed-matrix mutation, the standard reference formula.
    fn matrix_mutate(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
        let n = b.len();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = if i == k || j == k {
                    -b[i][j]
                } else {
                    b[i][j] + b[i][k].max(0) * b[k][j].max(0) - (-b[i][k]).max(0) * (-b[k][j]).max(0)
                };
            }
        }
        out
    }

    fn from_b_matrix(b: &[Vec<i64>]) -> Multigraph {
        let mut g = Multigraph::new(b.len() as i64);
        for (i, row) in b.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    g.add_arrows(i as i64 + 1, j as i64 + 1, m as u64);
                }
            }
        }
        g
    }

    proptest! {
        #[test]
        fn multigraph_mutation_matches_matrix_rule(
            n in 2usize..=5,
            entries in proptest::collection::vec(-3i64..=3, 25),
            k in 0usize..5,
        ) {
            let k = k % n;
            let mut b = vec![vec![0i64; n]; n];
            let mut idx = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    b[i][j] = entries[idx];
                    b[j][i] = -entries[idx];
                    idx += 1;
                }
            }
            let g = from_b_matrix(&b);
            let mutated = classical_mutation(&g, k as i64 + 1).unwrap();
            prop_assert_eq!(&mutated, &from_b_matrix(&matrix_mutate(&b, k)));
            // Mutation at the same vertex is an involution on 2-acyclic graphs.
            let back = classical_mutation(&mutated, k as i64 + 1).unwrap();
            prop_assert_eq!(&back, &g);
        }
    }
}
