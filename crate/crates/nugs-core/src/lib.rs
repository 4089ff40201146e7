//! Stable reconstruction from nonuniform Fourier samples.
//!
//! The library builds nonuniform frequency sets, computes their geometry
//! (gap, separation, covering number, Voronoi weights in polar norms),
//! evaluates explicit frame and Bessel bounds, measures spectral
//! concentration and residuals of reconstruction spaces, and solves the
//! weighted least-squares reconstruction problem. The `experiments` module
//! reproduces the scaling laws that govern how many samples a polynomial
//! or wavelet space needs for stable recovery.

pub mod dd;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod nugs;
pub mod rng;
pub mod sampling;
pub mod special;
pub mod spaces;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, GapEstimate, NormChoice};
pub use sampling::{GeneratorMeta, SamplingSet};
pub use spaces::{QuadSpec, ReconstructionSpace, SpaceFamily};
pub use weights::{ProbeMethod, WeightMethod, WeightedSamples};
