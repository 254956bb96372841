//! Stokes data of pure Gaussian type.
//!
//! A connection on the affine line with exponential factors `-(c/2) z^2`,
//! `c` in a finite set `C`, is described up to isomorphism by four block
//! matrices (the Stokes multipliers) relative to a generic direction. This
//! crate represents such data, validates it, applies the explicit
//! Fourier-Laplace transformation rules (aligned parameters and the
//! two-parameter "heart" configuration) and checks the topological facts
//! behind those rules numerically:
//!
//! * [`geometry`]: Stokes directions, sectors and the dominance order on `C`.
//! * [`blockdata`]: block matrices, objects and morphisms of Stokes data,
//!   automorphism masks, monodromy and the transition-matrix factorization.
//! * [`expmodel`]: stalks of exponential enhanced sheaves on `C_w x R`.
//! * [`fourier`]: the transform rules, the tables of transformed exponentials
//!   and the stalkwise homological pipeline that recovers the gluing matrices.
//! * [`oracle`]: a grid-based brute-force count of compact components used to
//!   check the transform tables independently.
//! * [`cli`]: the `gauss-stokes` command line front end and file formats.

pub mod blockdata;
pub mod cli;
pub mod error;
pub mod expmodel;
pub mod fourier;
pub mod geometry;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
pub use geometry::{ComplexParam, Direction, GaussianParamSet, SectorSpec, DEFAULT_EPS};

pub use num_complex::Complex64;
