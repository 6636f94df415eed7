//! The mutate-then-relabel operator on degree sets: admission of new
//! top-level points through the eight local dimension profiles, the inverse
//! via duality, orbit iteration with failure diagnostics, and
//! mutation-sequence bookkeeping.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::degreeset::{negate, DegreeSet, IntervalWitness};
use crate::params::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("vertex 1 lies on a 2-cycle for these parameters")]
    TwoCycleAtVertexOne,
    #[error("the operator is undefined on the simple representation at vertex 1")]
    ThetaUndefined,
    #[error("input is not interval-closed: missing {}", .0.middle)]
    NotIntervalClosed(IntervalWitness),
    #[error("input is not connected")]
    NotConnected,
    #[error("input is not sturdy: missing {0}")]
    NotSturdy(Weight),
}

impl ThetaError {
    /// Predicate name used in failure reports.
    pub fn predicate(&self) -> &'static str {
        match self {
            ThetaError::TwoCycleAtVertexOne => "TwoCycleAtVertexOne",
            ThetaError::ThetaUndefined => "ThetaUndefined",
            ThetaError::NotIntervalClosed(_) => "NotIntervalClosed",
            ThetaError::NotConnected => "NotConnected",
            ThetaError::NotSturdy(_) => "NotSturdy",
        }
    }
}

/// The eight (dimA, dimB, dimC, dimD) profiles under which a candidate
/// top-level point carries a one-dimensional space after mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissionTable {
    pub columns: [[u8; 4]; 8],
}

pub const ADMISSION_TABLE: AdmissionTable = AdmissionTable {
    columns: [
        [0, 1, 0, 0],
        [1, 2, 0, 0],
        [0, 1, 1, 0],
        [0, 1, 2, 1],
        [1, 2, 1, 0],
        [1, 2, 2, 1],
        [0, 0, 1, 0],
        [0, 0, 2, 1],
    ],
};

impl AdmissionTable {
    /// 1-based index of the column matching the profile, if any.
    pub fn column_of(&self, dims: [u8; 4]) -> Option<u8> {
        self.columns.iter().position(|c| *c == dims).map(|i| i as u8 + 1)
    }
}

/// One admitted point together with the profile column that admitted it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Admission {
    pub point: Weight,
    pub column_index: u8,
}

/// A successful application: the shifted degree set plus, for each new
/// top-level point, the admitting column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaResult {
    #[serde(flatten)]
    pub output: DegreeSet,
    pub provenance: Vec<Admission>,
}

/// Candidate top-level points: the six slice translates that can carry a
/// basis vector over vertex N after mutation.
pub fn candidate_points(s: &DegreeSet) -> BTreeSet<Weight> {
    let p = s.params();
    let mut out = BTreeSet::new();
    let translates = [
        (1, Weight::new(1, 1, 0, 0)),
        (1 + p.a, Weight::new(0, 1, 0, 0)),
        (1 + p.b(), Weight::new(1, 0, 0, 0)),
        (1 + p.c, Weight::new(0, 0, 0, -1)),
        (1 + p.d(), Weight::new(0, 0, -1, 0)),
        (1, Weight::new(0, 0, -1, -1)),
    ];
    for (vertex, shift) in translates {
        for w in s.slice(vertex) {
            out.insert(w + shift);
        }
    }
    out
}

/// Local dimensions (dimA, dimB, dimC, dimD) of the premutation chain at a
/// top-level candidate, read off membership indicators.
pub fn neighbor_dims(s: &DegreeSet, lambda: Weight) -> [u8; 4] {
    let m = |w: Weight| u8::from(s.contains(&w));
    [
        m(lambda - Weight::new(1, 1, 0, 0)),
        m(lambda - Weight::new(0, 1, 0, 0)) + m(lambda - Weight::new(1, 0, 0, 0)),
        m(lambda + Weight::new(0, 0, 0, 1)) + m(lambda + Weight::new(0, 0, 1, 0)),
        m(lambda + Weight::new(0, 0, 1, 1)),
    ]
}

pub fn theta(s: &DegreeSet) -> Result<ThetaResult, ThetaError> {
    theta_with(s, &ADMISSION_TABLE, false)
}

pub fn theta_with(
    s: &DegreeSet,
    table: &AdmissionTable,
    allow_disconnected: bool,
) -> Result<ThetaResult, ThetaError> {
    let p = s.params();
    if p.a == p.c || p.a == p.d() {
        return Err(ThetaError::TwoCycleAtVertexOne);
    }
    if s.len() == 1 {
        let &only = s.points().iter().next().unwrap();
        if p.level(only) == s.t() + 1 {
            return Err(ThetaError::ThetaUndefined);
        }
    }
    if let Some(witness) = s.interval_witness() {
        return Err(ThetaError::NotIntervalClosed(witness));
    }
    if !allow_disconnected && !s.is_connected() {
        return Err(ThetaError::NotConnected);
    }
    if let Some(witness) = s.sturdy_witness() {
        return Err(ThetaError::NotSturdy(witness));
    }
    // Points over vertices 2..N carry over unchanged; the bottom slice drops.
    let mut points: Vec<Weight> = s
        .points()
        .iter()
        .copied()
        .filter(|&w| p.level(w) >= s.t() + 2)
        .collect();
    let mut provenance = Vec::new();
    for lambda in candidate_points(s) {
        if let Some(column_index) = table.column_of(neighbor_dims(s, lambda)) {
            provenance.push(Admission { point: lambda, column_index });
            points.push(lambda);
        }
    }
    let output = DegreeSet::new(p, s.t() + 1, points)
        .expect("carried and admitted points lie in the shifted band");
    Ok(ThetaResult { output, provenance })
}

pub fn theta_inverse(s: &DegreeSet) -> Result<ThetaResult, ThetaError> {
    theta_inverse_with(s, &ADMISSION_TABLE, false)
}

/// The inverse operator: negate, apply, negate back; witnesses are mapped
/// back into the input's coordinates.
pub fn theta_inverse_with(
    s: &DegreeSet,
    table: &AdmissionTable,
    allow_disconnected: bool,
) -> Result<ThetaResult, ThetaError> {
    match theta_with(&negate(s), table, allow_disconnected) {
        Ok(result) => {
            let output = negate(&result.output);
            let mut provenance: Vec<Admission> = result
                .provenance
                .into_iter()
                .map(|adm| Admission { point: -adm.point, column_index: adm.column_index })
                .collect();
            provenance.sort_by_key(|adm| adm.point);
            Ok(ThetaResult { output, provenance })
        }
        Err(e) => Err(negate_error(e)),
    }
}

fn negate_error(e: ThetaError) -> ThetaError {
    match e {
        ThetaError::NotIntervalClosed(w) => ThetaError::NotIntervalClosed(IntervalWitness {
            lower: -w.upper,
            middle: -w.middle,
            upper: -w.lower,
        }),
        ThetaError::NotSturdy(w) => ThetaError::NotSturdy(-w),
        other => other,
    }
}

/// The step (1-based) whose application was refused, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFailure {
    pub step: usize,
    pub error: ThetaError,
}

impl Serialize for OrbitFailure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("OrbitFailure", 3)?;
        st.serialize_field("step", &self.step)?;
        st.serialize_field("predicate", self.error.predicate())?;
        match &self.error {
            ThetaError::NotIntervalClosed(w) => st.serialize_field("witness", w)?,
            ThetaError::NotSturdy(w) => st.serialize_field("witness", w)?,
            _ => st.serialize_field("witness", &None::<Weight>)?,
        }
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaOrbit {
    pub steps: Vec<ThetaResult>,
    pub failure: Option<OrbitFailure>,
}

/// Iterates the operator |k| times (inverse direction for k < 0), validating
/// every intermediate set afresh and stopping at the first refusal.
pub fn theta_orbit(s: &DegreeSet, k: i64) -> ThetaOrbit {
    theta_orbit_with(s, k, &ADMISSION_TABLE, false)
}

pub fn theta_orbit_with(
    s: &DegreeSet,
    k: i64,
    table: &AdmissionTable,
    allow_disconnected: bool,
) -> ThetaOrbit {
    let mut steps: Vec<ThetaResult> = Vec::new();
    let mut current = s.clone();
    for step in 1..=k.unsigned_abs() as usize {
        let next = if k >= 0 {
            theta_with(&current, table, allow_disconnected)
        } else {
            theta_inverse_with(&current, table, allow_disconnected)
        };
        match next {
            Ok(result) => {
                current = result.output.clone();
                steps.push(result);
            }
            Err(error) => {
                return ThetaOrbit { steps, failure: Some(OrbitFailure { step, error }) };
            }
        }
    }
    ThetaOrbit { steps, failure: None }
}

/// A cluster mutation sequence: vertex labels in 1..=N, applied left to
/// right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSequence {
    labels: Vec<i64>,
    n: i64,
}

impl MutationSequence {
    pub fn new(n: i64, labels: impl IntoIterator<Item = i64>) -> MutationSequence {
        let labels: Vec<i64> = labels.into_iter().collect();
        assert!(
            labels.iter().all(|l| (1..=n).contains(l)),
            "labels must lie in 1..=N"
        );
        MutationSequence { labels, n }
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for label in &self.labels {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Theta,
    ThetaInverse,
}

/// One bookkeeping step: the forward direction prepends N and shifts every
/// earlier label down by one (1 wraps to N); the inverse prepends 1 and
/// shifts up (N wraps to 1).
pub fn track_mutation_sequence(seq: &MutationSequence, direction: Direction) -> MutationSequence {
    let n = seq.n;
    let (head, delta) = match direction {
        Direction::Theta => (n, -1),
        Direction::ThetaInverse => (1, 1),
    };
    let mut labels = vec![head];
    labels.extend(seq.labels.iter().map(|&l| (l - 1 + delta).rem_euclid(n) + 1));
    MutationSequence { labels, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degreeset::{build_sj, sigma};
    use crate::params::GRParams;
    use proptest::prelude::*;

    fn somos4() -> GRParams {
        GRParams::new(1, 2, 4).unwrap()
    }

    fn w(a: i64, b: i64, c: i64, d: i64) -> Weight {
        Weight::new(a, b, c, d)
    }

    #[test]
    fn first_steps_walk_up_the_canonical_family() {
        let step1 = theta(&build_sj(somos4(), 1)).unwrap();
        assert_eq!(step1.output, build_sj(somos4(), 2));
        assert_eq!(
            step1.provenance,
            vec![Admission { point: w(1, 0, 0, 0), column_index: 1 }]
        );
        let step2 = theta(&build_sj(somos4(), 2)).unwrap();
        assert_eq!(step2.output, build_sj(somos4(), 3));
        assert_eq!(
            step2.provenance,
            vec![
                Admission { point: w(0, 0, -1, 0), column_index: 7 },
                Admission { point: w(0, 0, 0, -1), column_index: 7 },
                Admission { point: w(2, 0, 0, 0), column_index: 1 },
            ]
        );
    }

    #[test]
    fn orbits_reach_every_canonical_set() {
        for p in [GRParams::new(1, 2, 4).unwrap(), GRParams::new(1, 2, 5).unwrap()] {
            let orbit = theta_orbit(&build_sj(p, 1), 7);
            assert!(orbit.failure.is_none());
            assert_eq!(orbit.steps.len(), 7);
            let mut input = build_sj(p, 1);
            for (i, step) in orbit.steps.iter().enumerate() {
                let j = i as i64 + 2;
                assert_eq!(step.output, build_sj(p, j), "step to S^({j}) of {p}");
                // Vertex-shift law: the carried points are exactly the input
                // points over vertices 2..N.
                let carried: BTreeSet<Weight> = step
                    .output
                    .points()
                    .iter()
                    .copied()
                    .filter(|&x| p.level(x) <= step.output.t() + p.n - 1)
                    .collect();
                let shifted: BTreeSet<Weight> = input
                    .points()
                    .iter()
                    .copied()
                    .filter(|&x| p.level(x) >= input.t() + 2)
                    .collect();
                assert_eq!(carried, shifted);
                for adm in &step.provenance {
                    assert_eq!(p.level(adm.point), input.t() + p.n + 1);
                }
                input = step.output.clone();
            }
        }
    }

    #[test]
    fn inverse_round_trips_and_steps_down() {
        for j in 1..=6 {
            let s = build_sj(somos4(), j);
            let up = theta(&s).unwrap();
            assert_eq!(theta_inverse(&up.output).unwrap().output, s, "round trip at j={j}");
        }
        for j in [1, 2] {
            let down = theta_inverse(&build_sj(somos4(), j + 1)).unwrap();
            assert_eq!(down.output, build_sj(somos4(), j));
        }
    }

    #[test]
    fn inverse_agrees_with_the_coordinate_swap_route() {
        for p in [GRParams::new(1, 2, 4).unwrap(), GRParams::new(1, 2, 5).unwrap()] {
            for j in 2..=5 {
                let s = build_sj(p, j);
                let direct = theta_inverse(&s).unwrap().output;
                let routed = sigma(&theta(&sigma(&s)).unwrap().output);
                assert_eq!(direct, routed, "j={j} {p}");
            }
        }
    }

    #[test]
    fn empty_set_maps_to_empty_set() {
        let empty = DegreeSet::new(somos4(), -2, []).unwrap();
        let result = theta(&empty).unwrap();
        assert!(result.output.is_empty());
        assert_eq!(result.output.t(), -1);
        assert!(result.provenance.is_empty());
    }

    #[test]
    fn undefined_on_the_vertex_one_simple() {
        let simple1 = DegreeSet::new(somos4(), -1, [w(0, 0, 0, 0)]).unwrap();
        assert_eq!(theta(&simple1), Err(ThetaError::ThetaUndefined));
        // The dual case: the inverse is undefined on the simple at vertex N.
        let simple4 = DegreeSet::new(somos4(), -4, [w(0, 0, 0, 0)]).unwrap();
        assert_eq!(theta_inverse(&simple4), Err(ThetaError::ThetaUndefined));
        assert!(theta(&simple4).is_ok());
    }

    #[test]
    fn two_cycle_parameters_are_rejected_first() {
        let conifold = GRParams::new(1, 1, 2).unwrap();
        let empty = DegreeSet::new(conifold, 0, []).unwrap();
        assert_eq!(theta(&empty), Err(ThetaError::TwoCycleAtVertexOne));
        let wrap = GRParams::new(1, 2, 3).unwrap();
        let empty = DegreeSet::new(wrap, 0, []).unwrap();
        assert_eq!(theta(&empty), Err(ThetaError::TwoCycleAtVertexOne));
    }

    #[test]
    fn validation_failures_carry_witnesses() {
        let gappy = DegreeSet::new(somos4(), -1, [w(0, 0, 0, 0), w(2, 0, 0, 0)]).unwrap();
        assert_eq!(
            theta(&gappy),
            Err(ThetaError::NotIntervalClosed(IntervalWitness {
                lower: w(0, 0, 0, 0),
                middle: w(1, 0, 0, 0),
                upper: w(2, 0, 0, 0),
            }))
        );
        // Interval-closed two-element antichain with no covers between.
        let split = DegreeSet::new(somos4(), -3, [w(0, 0, 0, 0), w(1, -1, 0, 0)]).unwrap();
        assert_eq!(theta(&split), Err(ThetaError::NotConnected));
        let forced = theta_with(&split, &ADMISSION_TABLE, true).unwrap();
        assert_eq!(
            forced.output.points().iter().copied().collect::<Vec<_>>(),
            vec![w(0, 0, -1, 0), w(0, 0, 0, -1), w(0, 0, 0, 0)]
        );
    }

    #[test]
    fn simple_at_two_orbit_matches_the_worked_trace() {
        let start = DegreeSet::new(somos4(), -5, [w(0, -1, 0, 0)]).unwrap();
        let orbit = theta_orbit(&start, 6);
        assert_eq!(orbit.steps.len(), 5);
        let theta4 = DegreeSet::new(
            somos4(),
            -1,
            [
                w(0, 0, 0, 0),
                w(0, 0, -1, 0),
                w(0, 0, 0, -1),
                w(1, 0, -1, 0),
                w(1, 0, 0, -1),
                w(0, 1, 0, 0),
            ],
        )
        .unwrap();
        assert_eq!(orbit.steps[3].output, theta4);
        let theta5 = DegreeSet::new(
            somos4(),
            0,
            [
                w(0, 0, -1, 0),
                w(0, 0, 0, -1),
                w(1, 0, -1, 0),
                w(1, 0, 0, -1),
                w(0, 1, 0, 0),
                w(2, 0, -1, 0),
                w(2, 0, 0, -1),
                w(0, 0, -1, -1),
                w(0, 0, 0, -2),
                w(0, 0, -2, 0),
            ],
        )
        .unwrap();
        assert_eq!(orbit.steps[4].output, theta5);
        assert_eq!(
            orbit.failure,
            Some(OrbitFailure { step: 6, error: ThetaError::NotSturdy(w(1, 0, 0, 0)) })
        );
    }

    #[test]
    fn orbit_with_zero_steps_is_empty() {
        let orbit = theta_orbit(&build_sj(somos4(), 3), 0);
        assert!(orbit.steps.is_empty());
        assert!(orbit.failure.is_none());
    }

    #[test]
    fn negative_steps_walk_backwards_until_undefined() {
        let orbit = theta_orbit(&build_sj(somos4(), 4), -4);
        assert_eq!(orbit.steps.len(), 3);
        for (i, step) in orbit.steps.iter().enumerate() {
            assert_eq!(step.output, build_sj(somos4(), 3 - i as i64));
        }
        assert_eq!(
            orbit.failure,
            Some(OrbitFailure { step: 4, error: ThetaError::ThetaUndefined })
        );
    }

    #[test]
    fn sequence_tracker_follows_the_worked_example() {
        let mut seq = MutationSequence::new(4, [2]);
        let expected = [
            "4,1",
            "4,3,4",
            "4,3,2,3",
            "4,3,2,1,2",
            "4,3,2,1,4,1",
            "4,3,2,1,4,3,4",
        ];
        for text in expected {
            seq = track_mutation_sequence(&seq, Direction::Theta);
            assert_eq!(seq.to_string(), text);
        }
        let back = track_mutation_sequence(&MutationSequence::new(4, [2]), Direction::ThetaInverse);
        assert_eq!(back.to_string(), "1,3");
    }

    #[test]
    fn result_and_failure_json_shapes() {
        let result = theta(&build_sj(somos4(), 1)).unwrap();
        assert_eq!(
            serde_json::to_string(&result).unwrap(),
            "{\"params\":{\"a\":1,\"c\":2,\"N\":4},\"t\":-3,\
             \"points\":[[0,0,0,0],[1,0,0,0]],\
             \"provenance\":[{\"point\":[1,0,0,0],\"column_index\":1}]}"
        );
        let sturdy = OrbitFailure { step: 6, error: ThetaError::NotSturdy(w(1, 0, 0, 0)) };
        assert_eq!(
            serde_json::to_string(&sturdy).unwrap(),
            "{\"step\":6,\"predicate\":\"NotSturdy\",\"witness\":[1,0,0,0]}"
        );
        let gap = OrbitFailure {
            step: 1,
            error: ThetaError::NotIntervalClosed(IntervalWitness {
                lower: w(0, 0, 0, 0),
                middle: w(1, 0, 0, 0),
                upper: w(2, 0, 0, 0),
            }),
        };
        assert_eq!(
            serde_json::to_string(&gap).unwrap(),
            "{\"step\":1,\"predicate\":\"NotIntervalClosed\",\
             \"witness\":{\"lower\":[0,0,0,0],\"middle\":[1,0,0,0],\"upper\":[2,0,0,0]}}"
        );
        let flat = OrbitFailure { step: 2, error: ThetaError::NotConnected };
        assert_eq!(
            serde_json::to_string(&flat).unwrap(),
            "{\"step\":2,\"predicate\":\"NotConnected\",\"witness\":null}"
        );
    }

    proptest! {
        #[test]
        fn simples_above_the_bottom_level_step_cleanly(n in 3i64..=8, a in 1i64..8, c in 1i64..8, v in 2i64..=8) {
            prop_assume!(a < n && c < n && v <= n);
            let Ok(p) = GRParams::new(a, c, n) else { return Ok(()) };
            prop_assume!(p.a != p.c && p.a != p.d());
            let s = DegreeSet::new(p, -v, [Weight::ZERO]).unwrap();
            let result = theta(&s).unwrap();
            prop_assert!(result.output.contains(&Weight::ZERO));
            prop_assert_eq!(result.output.vertex_of(Weight::ZERO).unwrap(), v - 1);
            for adm in &result.provenance {
                prop_assert_eq!(p.level(adm.point), -v + p.n + 1);
            }
        }
    }
}
