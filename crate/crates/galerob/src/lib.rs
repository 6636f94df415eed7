//! Cluster-algebra data for Gale-Robinson recurrences: the quiver and its
//! planar lift, Laurent sequences, calibrated degree sets with their
//! F-polynomials, the Theta mutation operator, and representation-theoretic
//! cross-checks.

pub mod degreeset;
pub mod laurent;
pub mod params;
pub mod quiver;
pub mod repcheck;
pub mod theta;

pub use degreeset::{
    build_cyclic, build_sj, count_order_ideals, f_polynomial, negate, order_filters,
    order_ideals, sigma, DegreeSet, DegreeSetError, IntervalWitness, Side,
};
pub use laurent::{
    gr_sequence, gr_values, gr_values_at, initial_seed, recover_g_vector, seed_mutate, yhat,
    LaurentError, LaurentPoly, Seed,
};
pub use params::{GRParams, ParamsError, Weight};
pub use quiver::{
    build_quiver, classical_mutation, enumerate_faces, export_dot, find_path, relabel_down, Arrow,
    ArrowKind, Face, Multigraph, Orientation, Path, Quiver, QuiverError,
};
pub use repcheck::{
    arrow_action, f_polynomial_oracle, premutation_dims, subrep_bruteforce, verify_action,
    PremutationDims, RepCheckError, SubRep,
};
pub use theta::{
    candidate_points, neighbor_dims, theta, theta_inverse, theta_orbit, track_mutation_sequence,
    Admission, AdmissionTable, Direction, MutationSequence, OrbitFailure, ThetaError, ThetaOrbit,
    ThetaResult, ADMISSION_TABLE,
};
