//! The pair abstraction and the four implemented Gelfand pairs.

mod convolution;
mod descriptor;
mod generators;
mod grid;
mod group;
mod spectrum;
mod spherical;

pub use convolution::{group_convolve, is_c4_symmetric};
pub use descriptor::{PairDescriptor, PairId};
pub use generators::{apply_generator, apply_generator_with, frame_derivative, frame_len, FdAccuracy, GeneratorOutput};
pub use grid::{Axis, AxisKind, Grid, Layout, SampledFunction, SampledFunctionDoc, Symmetry};
pub use group::{inverse, multiply, GroupPoint};
pub use spectrum::{
    eigenvalue_map, params_from_xi, spectrum_grid, validate_params, ParamRange, RangeRule, SpectrumBounds,
    SpectrumParams, SpectrumPoint,
};
pub use spherical::spherical;

pub(crate) use generators::{frame_apply, Field};
pub(crate) use group::wrap_angle;
pub(crate) use spherical::spherical_params;
