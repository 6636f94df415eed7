//! Calibrated degree sets: finite subsets of the weight lattice confined to a
//! level band, their poset structure, order ideals and filters, and the
//! F-polynomials they generate.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::params::{GRParams, ParamsError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeSetError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("point {point} has level {level} outside the band {}..={} for t={t}", t + 1, t + n)]
    OutOfBand { point: Weight, level: i64, t: i64, n: i64 },
    #[error("set is not closed under intervals at {point}")]
    InvalidDegreeSet { point: Weight },
    #[error("enumeration exceeded the point budget of {budget}")]
    InfiniteSet { budget: u64 },
}

/// A triple x <= y <= z with x, z in the set but the in-band y missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalWitness {
    pub lower: Weight,
    pub middle: Weight,
    pub upper: Weight,
}

impl fmt::Display for IntervalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {} <= {}", self.lower, self.middle, self.upper)
    }
}

/// Which subset family indexes the F-polynomial terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Filters,
    Ideals,
}

/// A finite set of weights inside the band t+1 <= level <= t+N, ordered
/// componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDegreeSet")]
pub struct DegreeSet {
    params: GRParams,
    t: i64,
    points: BTreeSet<Weight>,
}

#[derive(Deserialize)]
struct RawDegreeSet {
    params: GRParams,
    t: i64,
    points: Vec<Weight>,
}

impl TryFrom<RawDegreeSet> for DegreeSet {
    type Error = DegreeSetError;
    fn try_from(raw: RawDegreeSet) -> Result<DegreeSet, DegreeSetError> {
        DegreeSet::new(raw.params, raw.t, raw.points)
    }
}

impl DegreeSet {
    pub fn new(
        params: GRParams,
        t: i64,
        points: impl IntoIterator<Item = Weight>,
    ) -> Result<DegreeSet, DegreeSetError> {
        params.validate()?;
        let points: BTreeSet<Weight> = points.into_iter().collect();
        for &point in &points {
            let level = params.level(point);
            if level < t + 1 || level > t + params.n {
                return Err(DegreeSetError::OutOfBand { point, level, t, n: params.n });
            }
        }
        Ok(DegreeSet { params, t, points })
    }

    pub fn params(&self) -> GRParams {
        self.params
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn points(&self) -> &BTreeSet<Weight> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.points.contains(w)
    }

    pub fn in_band(&self, w: Weight) -> bool {
        let level = self.params.level(w);
        level >= self.t + 1 && level <= self.t + self.params.n
    }

    /// The vertex over which an in-band weight sits: level minus t.
    pub fn vertex_of(&self, w: Weight) -> Result<i64, DegreeSetError> {
        if self.in_band(w) {
            Ok(self.params.level(w) - self.t)
        } else {
            Err(DegreeSetError::OutOfBand {
                point: w,
                level: self.params.level(w),
                t: self.t,
                n: self.params.n,
            })
        }
    }

    /// Members sitting over the given vertex.
    pub fn slice(&self, vertex: i64) -> Vec<Weight> {
        self.points
            .iter()
            .copied()
            .filter(|&w| self.params.level(w) == self.t + vertex)
            .collect()
    }

    /// First missing in-band point of a box spanned by two members, if any.
    pub fn interval_witness(&self) -> Option<IntervalWitness> {
        for &x in &self.points {
            for &z in &self.points {
                if !x.le(&z) {
                    continue;
                }
                let mut y = x;
                loop {
                    if self.in_band(y) && !self.points.contains(&y) {
                        return Some(IntervalWitness { lower: x, middle: y, upper: z });
                    }
                    if !advance_in_box(&mut y, x, z) {
                        break;
                    }
                }
            }
        }
        None
    }

    pub fn is_interval_closed(&self) -> bool {
        self.interval_witness().is_none()
    }

    /// Connectivity of the graph on S whose edges are the covering relations
    /// of the ambient band poset between members.
    pub fn is_connected(&self) -> bool {
        let pts: Vec<Weight> = self.points.iter().copied().collect();
        if pts.len() <= 1 {
            return true;
        }
        let covers = |x: Weight, z: Weight| -> bool {
            // z covers x in X_t when no third in-band point sits between.
            let mut y = x;
            loop {
                if y != x && y != z && self.in_band(y) {
                    return false;
                }
                if !advance_in_box(&mut y, x, z) {
                    return true;
                }
            }
        };
        let mut adj = vec![Vec::new(); pts.len()];
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                if i != j && pts[i].le(&pts[j]) && pts[i] != pts[j] && covers(pts[i], pts[j]) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let mut seen = vec![false; pts.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == pts.len()
    }

    /// First bottom-level point forced by the sturdiness implications but
    /// missing from the set, if any.
    pub fn sturdy_witness(&self) -> Option<Weight> {
        let offsets = [
            Weight::new(-1, 0, 0, 0),
            Weight::new(0, -1, 0, 0),
            Weight::new(0, 0, 1, 0),
            Weight::new(0, 0, 0, 1),
        ];
        let mut candidates = BTreeSet::new();
        for &s in &self.points {
            for off in offsets {
                let lam = s + off;
                if self.params.level(lam) == self.t + 1 && !self.points.contains(&lam) {
                    candidates.insert(lam);
                }
            }
        }
        for lam in candidates {
            let east_west = self.points.contains(&(lam + Weight::new(1, 0, 0, 0)))
                && self.points.contains(&(lam + Weight::new(0, 1, 0, 0)));
            let south_north = self.points.contains(&(lam - Weight::new(0, 0, 1, 0)))
                && self.points.contains(&(lam - Weight::new(0, 0, 0, 1)));
            if east_west || south_north {
                return Some(lam);
            }
        }
        None
    }

    pub fn is_sturdy(&self) -> bool {
        self.sturdy_witness().is_none()
    }
}

/// Steps `y` through the integer box [lo, hi] in odometer order; false at end.
fn advance_in_box(y: &mut Weight, lo: Weight, hi: Weight) -> bool {
    for i in 0..4 {
        if y.0[i] < hi.0[i] {
            y.0[i] += 1;
            return true;
        }
        y.0[i] = lo.0[i];
    }
    false
}

// ---------------------------------------------------------------------------
// Order ideals and filters
// ---------------------------------------------------------------------------

/// The poset prepared for subset enumeration: a linear extension plus, for
/// each element, the bitmask of its predecessors.
struct Poset {
    elems: Vec<Weight>,
    preds: Vec<Vec<u64>>,
    words: usize,
}

fn poset_of(s: &DegreeSet) -> Poset {
    let mut elems: Vec<Weight> = s.points.iter().copied().collect();
    elems.sort_by_key(|w| (w.0.iter().sum::<i64>(), *w));
    let words = elems.len().div_ceil(64).max(1);
    let mut preds = vec![vec![0u64; words]; elems.len()];
    for i in 0..elems.len() {
        for j in 0..i {
            if elems[j].le(&elems[i]) {
                preds[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    Poset { elems, preds, words }
}

fn is_subset(sub: &[u64], of: &[u64]) -> bool {
    sub.iter().zip(of).all(|(a, b)| a & !b == 0)
}

fn visit_ideals(p: &Poset, idx: usize, chosen: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if idx == p.elems.len() {
        f(chosen);
        return;
    }
    visit_ideals(p, idx + 1, chosen, f);
    if is_subset(&p.preds[idx], chosen) {
        chosen[idx / 64] |= 1 << (idx % 64);
        visit_ideals(p, idx + 1, chosen, f);
        chosen[idx / 64] &= !(1 << (idx % 64));
    }
}

fn count_ideals_from(p: &Poset, idx: usize, chosen: &mut Vec<u64>) -> u128 {
    if idx == p.elems.len() {
        return 1;
    }
    let mut total = count_ideals_from(p, idx + 1, chosen);
    if is_subset(&p.preds[idx], chosen) {
        chosen[idx / 64] |= 1 << (idx % 64);
        total += count_ideals_from(p, idx + 1, chosen);
        chosen[idx / 64] &= !(1 << (idx % 64));
    }
    total
}

/// All down-closed subsets, in a fixed depth-first order.
pub fn order_ideals(s: &DegreeSet) -> Vec<Vec<Weight>> {
    let p = poset_of(s);
    let mut out = Vec::new();
    visit_ideals(&p, 0, &mut vec![0; p.words], &mut |chosen| {
        out.push(selected(&p, chosen, false));
    });
    out
}

/// All up-closed subsets: the complements of the ideals, in the same order.
pub fn order_filters(s: &DegreeSet) -> Vec<Vec<Weight>> {
    let p = poset_of(s);
    let mut out = Vec::new();
    visit_ideals(&p, 0, &mut vec![0; p.words], &mut |chosen| {
        out.push(selected(&p, chosen, true));
    });
    out
}

fn selected(p: &Poset, chosen: &[u64], complement: bool) -> Vec<Weight> {
    let mut out: Vec<Weight> = (0..p.elems.len())
        .filter(|&i| (chosen[i / 64] >> (i % 64) & 1 == 1) != complement)
        .map(|i| p.elems[i])
        .collect();
    out.sort();
    out
}

/// Number of order ideals (equally, of order filters), without materializing.
/// With `threads` > 1 the search is sharded over prefixes of the linear
/// extension; the result does not depend on the thread count.
pub fn count_order_ideals(s: &DegreeSet, threads: usize) -> u128 {
    let p = poset_of(s);
    let n = p.elems.len();
    let depth = if threads <= 1 { 0 } else { n.min(12) };
    if depth == 0 {
        return count_ideals_from(&p, 0, &mut vec![0; p.words]);
    }
    let mut prefixes: Vec<Vec<u64>> = Vec::new();
    collect_prefixes(&p, 0, depth, &mut vec![0; p.words], &mut prefixes);
    let chunk = prefixes.len().div_ceil(threads);
    let mut total = 0u128;
    std::thread::scope(|scope| {
        let handles: Vec<_> = prefixes
            .chunks(chunk.max(1))
            .map(|batch| {
                let p = &p;
                scope.spawn(move || {
                    batch
                        .iter()
                        .map(|prefix| count_ideals_from(p, depth, &mut prefix.clone()))
                        .sum::<u128>()
                })
            })
            .collect();
        for h in handles {
            total += h.join().unwrap();
        }
    });
    total
}

pub fn count_order_filters(s: &DegreeSet, threads: usize) -> u128 {
    count_order_ideals(s, threads)
}

fn collect_prefixes(p: &Poset, idx: usize, depth: usize, chosen: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if idx == depth {
        out.push(chosen.clone());
        return;
    }
    collect_prefixes(p, idx + 1, depth, chosen, out);
    if is_subset(&p.preds[idx], chosen) {
        chosen[idx / 64] |= 1 << (idx % 64);
        collect_prefixes(p, idx + 1, depth, chosen, out);
        chosen[idx / 64] &= !(1 << (idx % 64));
    }
}

// ---------------------------------------------------------------------------
// F-polynomials
// ---------------------------------------------------------------------------

/// Generating polynomial of the subset family: filters contribute y_{v(λ)}
/// per member, ideals contribute y_{N+1-v(λ)}. Requires interval closure.
pub fn f_polynomial(s: &DegreeSet, side: Side) -> Result<LaurentPoly, DegreeSetError> {
    if let Some(w) = s.interval_witness() {
        return Err(DegreeSetError::InvalidDegreeSet { point: w.middle });
    }
    let arity = s.params.n as usize;
    let p = poset_of(s);
    // Variable index (zero-based) each element contributes when counted.
    let var_idx: Vec<usize> = p
        .elems
        .iter()
        .map(|&w| {
            let v = s.params.level(w) - s.t;
            match side {
                Side::Filters => (v - 1) as usize,
                Side::Ideals => (s.params.n - v) as usize,
            }
        })
        .collect();
    // On the ideals side the monomial ranges over the ideal itself; on the
    // filters side over the complement of the ideal being enumerated.
    let count_chosen = matches!(side, Side::Ideals);
    let mut terms: std::collections::BTreeMap<Vec<i64>, BigInt> = Default::default();
    visit_ideals(&p, 0, &mut vec![0; p.words], &mut |chosen| {
        let mut exps = vec![0i64; arity];
        for (i, &vi) in var_idx.iter().enumerate() {
            let in_ideal = chosen[i / 64] >> (i % 64) & 1 == 1;
            if in_ideal == count_chosen {
                exps[vi] += 1;
            }
        }
        *terms.entry(exps).or_insert_with(|| 0.into()) += 1;
    });
    Ok(LaurentPoly::from_terms(arity, terms))
}

// ---------------------------------------------------------------------------
// Set constructions
// ---------------------------------------------------------------------------

/// The degree set S^(j): sign-restricted weights with j-N <= level <= j-1,
/// at t = j-N-1.
pub fn build_sj(params: GRParams, j: i64) -> DegreeSet {
    assert!(j >= 1, "S^(j) is defined for j >= 1");
    let t = j - params.n - 1;
    let m = j - 1;
    let (a, b, c, d) = (params.a, params.b(), params.c, params.d());
    let mut points = Vec::new();
    for l1 in 0..=m / a {
        for l2 in 0..=m / b {
            for l3 in -(m / c)..=0 {
                for l4 in -(m / d)..=0 {
                    let w = Weight::new(l1, l2, l3, l4);
                    let level = params.level(w);
                    if level >= j - params.n && level <= j - 1 {
                        points.push(w);
                    }
                }
            }
        }
    }
    DegreeSet::new(params, t, points).unwrap()
}

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

/// The cyclic-representation degree set: all λ >= μ in the band such that the
/// whole in-band box [μ, λ] sits over vertices of `vbar`; t = level(μ) - v.
pub fn build_cyclic(
    params: GRParams,
    v: i64,
    vbar: &BTreeSet<i64>,
    mu: Weight,
) -> Result<DegreeSet, DegreeSetError> {
    build_cyclic_with_budget(params, v, vbar, mu, DEFAULT_POINT_BUDGET)
}

pub fn build_cyclic_with_budget(
    params: GRParams,
    v: i64,
    vbar: &BTreeSet<i64>,
    mu: Weight,
    budget: u64,
) -> Result<DegreeSet, DegreeSetError> {
    assert!((1..=params.n).contains(&v), "vertex out of range");
    assert!(vbar.contains(&v), "vbar must contain the starting vertex");
    let t = params.level(mu) - v;
    let n = params.n;
    // Breadth-first search over unit up-steps. A node is alive when its box
    // down to μ contains no in-band point over a vertex outside vbar; levels
    // may leave the band by strictly less than N along a monotone path, so
    // the traversal window below is exhaustive.
    let (window_lo, window_hi) = (t + 1 - n, t + 2 * n);
    let violator = |w: Weight| -> bool {
        let level = params.level(w);
        level >= t + 1 && level <= t + n && !vbar.contains(&(level - t))
    };
    let mut spent: u64 = 1;
    let mut alive: BTreeSet<Weight> = BTreeSet::from([mu]);
    let mut dead: BTreeSet<Weight> = BTreeSet::new();
    let mut queue: VecDeque<Weight> = VecDeque::from([mu]);
    while let Some(nu) = queue.pop_front() {
        for i in 0..4 {
            let mut child = nu;
            child.0[i] += 1;
            if alive.contains(&child) || dead.contains(&child) {
                continue;
            }
            let level = params.level(child);
            if level < window_lo || level > window_hi {
                continue;
            }
            // The parent's box is clean, so only the new slice at coordinate
            // i = child_i needs scanning.
            let mut lam = mu;
            lam.0[i] = child.0[i];
            let mut clean = true;
            loop {
                spent += 1;
                if spent > budget {
                    return Err(DegreeSetError::InfiniteSet { budget });
                }
                if violator(lam) {
                    clean = false;
                    break;
                }
                let mut done = true;
                for j in 0..4 {
                    if j == i {
                        continue;
                    }
                    if lam.0[j] < child.0[j] {
                        lam.0[j] += 1;
                        done = false;
                        break;
                    }
                    lam.0[j] = mu.0[j];
                }
                if done {
                    break;
                }
            }
            if clean {
                spent += 1;
                if spent > budget {
                    return Err(DegreeSetError::InfiniteSet { budget });
                }
                alive.insert(child);
                queue.push_back(child);
            } else {
                dead.insert(child);
            }
        }
    }
    let band = |w: &&Weight| -> bool {
        let level = params.level(**w);
        level >= t + 1 && level <= t + n
    };
    DegreeSet::new(params, t, alive.iter().filter(band).copied())
}

/// Pointwise negation; the band maps to the one at t' = -(t+N+1).
pub fn negate(s: &DegreeSet) -> DegreeSet {
    let t = -(s.t + s.params.n + 1);
    DegreeSet::new(s.params, t, s.points.iter().map(|&w| -w)).unwrap()
}

/// Coordinate swap (1,2) <-> (3,4), landing in the opposite parameters at
/// t' = -(t+N+1).
pub fn sigma(s: &DegreeSet) -> DegreeSet {
    let t = -(s.t + s.params.n + 1);
    let swapped = s
        .points
        .iter()
        .map(|w| Weight::new(w.0[2], w.0[3], w.0[0], w.0[1]));
    DegreeSet::new(s.params.opposite(), t, swapped).unwrap()
}
