//! Schwartz seminorms on G and on ℝ^d, lattice interpolation by bumps, the
//! decay of per-type transforms, and changes of generating system.

mod bump;
mod change;
mod decay;
mod euclid;
mod group;

pub use bump::{
    bump_interpolate, bump_sample, interpolation_constant, lattice_weighted_sup, verify_interpolation, BumpProfile, BumpSpec, LatticeFunction,
    DEFAULT_BUMP_RADIUS, DEFAULT_SUBDIVISION,
};
pub use change::{augmented_system, change_of_generators, integer_exponent, Monomial, PolyMap, ROUND_TRIP_TOL};
pub use decay::{
    decay_from_spectrum, diagonal_select, fit_line, schwartz_extend, spectrum_slices, type_spectrum, verify_decay, verify_extension, DecayConstant,
    DecaySpec, DiagonalSelection, Extension, SeminormReport, TypeSeminorms, DECAY_MARGIN, MAX_DECAY_M, MAX_DECAY_N, TABLE_ORDER, TYPE_FLOOR,
    TYPE_TAIL_LIMIT,
};
pub use euclid::{euclid_seminorm, euclid_seminorms, EuclidAxis, EuclidFunction, MAX_ORDER, RESOLUTION_SHARE};
pub use group::{group_seminorm, weight};
