//! Independent oracles for the calibrated representation: explicit arrow
//! actions, path-consistency verification, graded premutation dimensions,
//! and exhaustive closed-subset enumeration.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::degreeset::DegreeSet;
use crate::laurent::LaurentPoly;
use crate::params::Weight;
use crate::quiver::{enumerate_faces, Arrow, ArrowKind, Path, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepCheckError {
    #[error("weight {0} is not a member of the degree set")]
    NotInSet(Weight),
    #[error("calibrated action is inconsistent: {0}")]
    ActionIllDefined(Box<ActionWitness>),
    #[error("point {point} has level {level}, expected the top level {expected}")]
    OutOfBand { point: Weight, level: i64, expected: i64 },
    #[error("degree set has {size} points, exceeding the exhaustive-scan cap of 24")]
    TooLarge { size: usize },
}

/// Two same-weight routes from one basis vector with different outcomes; a
/// route with no arrows stands for the direct membership expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionWitness {
    pub start: Weight,
    pub paths: [Path; 2],
    pub results: [Option<Weight>; 2],
}

impl fmt::Display for ActionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let route = |path: &Path| -> String {
            if path.arrows.is_empty() {
                return "direct".to_string();
            }
            path.arrows
                .iter()
                .map(|ar| format!("{} {}->{}", ar.kind, ar.source, ar.target))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let landing = |r: &Option<Weight>| match r {
            Some(w) => w.to_string(),
            None => "0".to_string(),
        };
        write!(
            f,
            "from {}: [{}] acts as {} but [{}] acts as {}",
            self.start,
            route(&self.paths[0]),
            landing(&self.results[0]),
            route(&self.paths[1]),
            landing(&self.results[1]),
        )
    }
}

/// Action of one arrow kind on the basis vector at λ: lands on λ + wt(kind)
/// when the arrow exists at λ's vertex and the target is in S; kills it
/// otherwise.
pub fn arrow_action(
    s: &DegreeSet,
    kind: ArrowKind,
    lambda: Weight,
) -> Result<Option<Weight>, RepCheckError> {
    if !s.contains(&lambda) {
        return Err(RepCheckError::NotInSet(lambda));
    }
    let vertex = s.vertex_of(lambda).expect("members sit in the band");
    let target = lambda + kind.weight();
    if kind.exists_at(s.params(), vertex) && s.contains(&target) {
        Ok(Some(target))
    } else {
        Ok(None)
    }
}

/// Applies a path one arrow at a time from λ; None once any partial image
/// leaves S.
fn path_action(s: &DegreeSet, arrows: &[Arrow], lambda: Weight) -> Option<Weight> {
    let mut current = lambda;
    for arrow in arrows {
        current = current + arrow.kind.weight();
        if !s.contains(&current) {
            return None;
        }
    }
    Some(current)
}

/// All quiver paths from `start` with the given total weight.
fn all_paths(quiver: &Quiver, start: i64, weight: Weight) -> Vec<Path> {
    fn extend(
        quiver: &Quiver,
        u: i64,
        rem: Weight,
        arrows: &mut Vec<Arrow>,
        out: &mut Vec<Path>,
        start: i64,
        weight: Weight,
    ) {
        if rem == Weight::ZERO {
            out.push(Path { start, end: u, weight, arrows: arrows.clone() });
            return;
        }
        let p = quiver.params();
        for kind in ArrowKind::ALL {
            let wt = kind.weight();
            if (0..4).all(|i| rem.0[i] >= wt.0[i]) && kind.exists_at(p, u) {
                let target = u + kind.offset(p);
                arrows.push(Arrow { source: u, target, kind });
                extend(quiver, target, rem - wt, arrows, out, start, weight);
                arrows.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(quiver, start, weight, &mut Vec::new(), &mut out, start, weight);
    out
}

/// Checks that the membership rule defines an actual representation: every
/// route between comparable members acts as the direct jump, and the two
/// boundary completions of each arrow act identically.
pub fn verify_action(s: &DegreeSet) -> Result<(), RepCheckError> {
    let quiver = Quiver::from_params(s.params());
    for &x in s.points() {
        let from = s.vertex_of(x).expect("members sit in the band");
        for &z in s.points() {
            if !x.le(&z) {
                continue;
            }
            let delta = z - x;
            let paths = all_paths(&quiver, from, delta);
            let expected = Some(z);
            if let Some(bad) = paths.iter().find(|path| path_action(s, &path.arrows, x) != expected) {
                let good = paths
                    .iter()
                    .find(|path| path_action(s, &path.arrows, x) == expected)
                    .cloned()
                    .unwrap_or(Path { start: from, end: bad.end, weight: delta, arrows: Vec::new() });
                return Err(RepCheckError::ActionIllDefined(Box::new(ActionWitness {
                    start: x,
                    paths: [bad.clone(), good],
                    results: [path_action(s, &bad.arrows, x), expected],
                })));
            }
        }
    }
    // Boundary relations: the two completions of each arrow have equal weight
    // and must act identically on every basis vector at the arrow's target.
    let faces = enumerate_faces(&quiver).expect("valid parameters have planar faces");
    let mut completions: BTreeMap<(i64, ArrowKind), Vec<Path>> = BTreeMap::new();
    for face in &faces {
        let m = face.arrows.len();
        for i in 0..m {
            let arrow = face.arrows[i];
            let rest: Vec<Arrow> = (1..m).map(|k| face.arrows[(i + k) % m]).collect();
            let weight = rest.iter().fold(Weight::ZERO, |acc, ar| acc + ar.kind.weight());
            completions.entry((arrow.source, arrow.kind)).or_default().push(Path {
                start: arrow.target,
                end: arrow.source,
                weight,
                arrows: rest,
            });
        }
    }
    for pair in completions.values() {
        for lambda in s.slice(pair[0].start) {
            let results: Vec<Option<Weight>> =
                pair.iter().map(|path| path_action(s, &path.arrows, lambda)).collect();
            if let Some(k) = (1..results.len()).find(|&k| results[k] != results[0]) {
                return Err(RepCheckError::ActionIllDefined(Box::new(ActionWitness {
                    start: lambda,
                    paths: [pair[0].clone(), pair[k].clone()],
                    results: [results[0], results[k]],
                })));
            }
        }
    }
    Ok(())
}

/// Graded data around one top-level point: chain space dimensions, the three
/// map ranks, and the resulting quotient dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PremutationDims {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub dim_d: usize,
    pub rank_alpha: usize,
    pub rank_beta: usize,
    pub rank_gamma: usize,
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
}

impl PremutationDims {
    /// Dimension over vertex N after mutation.
    pub fn total(&self) -> i64 {
        self.k1 + self.k2 + self.k3
    }
}

/// Rank by fraction-free elimination; entries stay integral throughout.
fn rank(mut m: Vec<Vec<i64>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        if let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) {
            m.swap(rank, pivot);
            for r in rank + 1..rows {
                if m[r][col] != 0 {
                    let (p, q) = (m[rank][col], m[r][col]);
                    for c in col..cols {
                        m[r][c] = m[r][c] * p - m[rank][c] * q;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Dimensions of the three summands (ker γ/im β, im γ, ker α/im γ) of the
/// new space over vertex N at λ, from explicit matrices over the membership
/// basis.
pub fn premutation_dims(s: &DegreeSet, lambda: Weight) -> Result<PremutationDims, RepCheckError> {
    let p = s.params();
    let expected = s.t() + p.n + 1;
    let level = p.level(lambda);
    if level != expected {
        return Err(RepCheckError::OutOfBand { point: lambda, level, expected });
    }
    let m = |w: Weight| s.contains(&w);
    let a_mem = m(lambda - Weight::new(1, 1, 0, 0));
    let b1 = m(lambda - Weight::new(0, 1, 0, 0));
    let b2 = m(lambda - Weight::new(1, 0, 0, 0));
    let c1 = m(lambda + Weight::new(0, 0, 0, 1));
    let c2 = m(lambda + Weight::new(0, 0, 1, 0));
    let d_mem = m(lambda + Weight::new(0, 0, 1, 1));
    let ind = |x: bool| i64::from(x);
    // β: A → B₁⊕B₂ along east and west; γ: B → C with signs [[+,−],[−,+]];
    // α: C₁⊕C₂ → D along south and north. Entries are membership indicators.
    let beta = vec![vec![ind(a_mem && b1)], vec![ind(a_mem && b2)]];
    let gamma = vec![
        vec![ind(b1 && c1), -ind(b2 && c1)],
        vec![-ind(b1 && c2), ind(b2 && c2)],
    ];
    let alpha = vec![vec![ind(c1 && d_mem), ind(c2 && d_mem)]];
    let gb = [
        gamma[0][0] * beta[0][0] + gamma[0][1] * beta[1][0],
        gamma[1][0] * beta[0][0] + gamma[1][1] * beta[1][0],
    ];
    let ag = [
        alpha[0][0] * gamma[0][0] + alpha[0][1] * gamma[1][0],
        alpha[0][0] * gamma[0][1] + alpha[0][1] * gamma[1][1],
    ];
    // The compositions vanish whenever S is interval-closed.
    debug_assert!(gb == [0, 0] && ag == [0, 0] || !s.is_interval_closed());
    let rank_beta = rank(beta);
    let rank_gamma = rank(gamma);
    let rank_alpha = rank(alpha);
    let dim_b = (ind(b1) + ind(b2)) as usize;
    let dim_c = (ind(c1) + ind(c2)) as usize;
    Ok(PremutationDims {
        dim_a: usize::from(a_mem),
        dim_b,
        dim_c,
        dim_d: usize::from(d_mem),
        rank_alpha,
        rank_beta,
        rank_gamma,
        k1: dim_b as i64 - rank_gamma as i64 - rank_beta as i64,
        k2: rank_gamma as i64,
        k3: dim_c as i64 - rank_alpha as i64 - rank_gamma as i64,
    })
}

/// One arrow-closed subset: its points and the dimension it carries over
/// each vertex (index v−1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRep {
    pub points: Vec<Weight>,
    pub dims: Vec<usize>,
}

/// All subsets of S closed under every arrow action, by exhaustive bitmask
/// scan.
pub fn subrep_bruteforce(s: &DegreeSet) -> Result<Vec<SubRep>, RepCheckError> {
    let size = s.len();
    if size > 24 {
        return Err(RepCheckError::TooLarge { size });
    }
    let p = s.params();
    let elems: Vec<Weight> = s.points().iter().copied().collect();
    let vertex: Vec<i64> = elems.iter().map(|&w| p.level(w) - s.t()).collect();
    let succ: Vec<u32> = elems
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut mask = 0u32;
            for kind in ArrowKind::ALL {
                if kind.exists_at(p, vertex[i]) {
                    if let Ok(j) = elems.binary_search(&(w + kind.weight())) {
                        mask |= 1 << j;
                    }
                }
            }
            mask
        })
        .collect();
    let mut out = Vec::new();
    for r in 0u32..1 << size {
        let closed = (0..size).all(|i| r >> i & 1 == 0 || succ[i] & !r == 0);
        if closed {
            let points: Vec<Weight> =
                (0..size).filter(|&i| r >> i & 1 == 1).map(|i| elems[i]).collect();
            let mut dims = vec![0usize; p.n as usize];
            for (i, &v) in vertex.iter().enumerate() {
                if r >> i & 1 == 1 {
                    dims[v as usize - 1] += 1;
                }
            }
            out.push(SubRep { points, dims });
        }
    }
    Ok(out)
}

/// F-polynomial assembled from the closed-subset scan: one monomial
/// y₁^{d₁}⋯y_N^{d_N} per subset.
pub fn f_polynomial_oracle(s: &DegreeSet) -> Result<LaurentPoly, RepCheckError> {
    let subs = subrep_bruteforce(s)?;
    let n = s.params().n as usize;
    let mut terms: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for sub in subs {
        let exps: Vec<i64> = sub.dims.iter().map(|&d| d as i64).collect();
        *terms.entry(exps).or_insert_with(|| 0.into()) += 1;
    }
    Ok(LaurentPoly::from_terms(n, terms))
}
