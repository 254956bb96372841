//! Fourier-Laplace transformation of Stokes data of pure Gaussian type.
//!
//! At the level of data the transform is explicit: parameters go to
//! `-1/c`, the generic direction to `pi - theta0`, and the four Stokes
//! matrices are kept. The tables in [`table`] list the transforms of the
//! exponential building blocks, and [`stalk`] recovers the gluing matrices of
//! the transform from those tables by stalkwise linear algebra.

pub mod stalk;
pub mod table;
pub mod verify;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::blockdata::StokesData;
use crate::error::{Error, Result};
use crate::geometry::{circle_distance, ComplexParam, Direction, GaussianParamSet};

pub use stalk::{
    build_stalk_sequences, gluing_probes, lf_stalk_dim, recover_gluing, StalkComplex,
    StalkSequences,
};
pub use table::{
    transform_table_aligned, transform_table_aligned_set, transform_table_heart, SourceId,
    TableMode, TransformTable,
};
pub use verify::{
    expected_stalk_dim, random_probes, verify_data, VerificationReport, VerifyConfig,
};

/// The heart condition: `c₁ > 0`, `c₂ >= 0`, `d₁ > c₁`, `d₂/d₁ >= c₂/c₁`.
pub fn check_heart(c: ComplexParam, d: ComplexParam, eps: f64) -> bool {
    let (c1, c2, d1, d2) = (c.re(), c.im(), d.re(), d.im());
    c1 > eps && c2 >= 0.0 && d1 > c1 + eps && d2 / d1 >= c2 / c1
}

fn congruent_mod_pi(a: f64, b: f64, eps: f64) -> bool {
    circle_distance(2.0 * a, 2.0 * b) <= 2.0 * eps
}

fn transformed(d: &StokesData) -> Result<StokesData> {
    let params = d
        .params()
        .params()
        .iter()
        .map(|(c, r)| Ok((ComplexParam::from_complex(-1.0 / c.value())?, *r)))
        .collect::<Result<Vec<_>>>()?;
    let set = GaussianParamSet::new(params, 0.0)?;
    d.with_params_raw(set, PI - d.theta0_raw())
}

/// Transform of data with all parameters on one ray from the origin.
///
/// The generic direction must be `-arg C / 2` modulo `pi`. Since the rule is
/// an involution, data already in the image (direction `-arg C / 2 + pi/2`
/// modulo `pi`) is accepted as well and mapped back.
pub fn transform_aligned(d: &StokesData, eps: f64) -> Result<StokesData> {
    let a = d.params().common_arg(eps).ok_or(Error::NotAligned)?;
    let th = d.theta0().radians();
    let expected = -a / 2.0;
    if !(congruent_mod_pi(th, expected, eps) || congruent_mod_pi(th, expected + FRAC_PI_2, eps)) {
        return Err(Error::WrongGenericDirection {
            expected,
            found: th,
        });
    }
    transformed(d)
}

/// Returns `(c, d)` as indices into the parameter list, if the pair
/// satisfies the heart condition in one of its two orders.
pub fn heart_pair(params: &GaussianParamSet, eps: f64) -> Result<(usize, usize)> {
    if params.len() != 2 {
        return Err(Error::UnsupportedParams(format!(
            "heart rule needs two parameters, got {}",
            params.len()
        )));
    }
    if params.ranks() != [1, 1] {
        return Err(Error::UnsupportedRanks(format!("{:?}", params.ranks())));
    }
    let (p, q) = (params.param(0), params.param(1));
    if check_heart(p, q, eps) {
        Ok((0, 1))
    } else if check_heart(q, p, eps) {
        Ok((1, 0))
    } else {
        Err(Error::HeartViolated(format!(
            "neither ({p}, {q}) nor ({q}, {p})"
        )))
    }
}

/// Transform of data over a pair `{c, d}` satisfying the heart condition,
/// with generic direction `-arg c / 2` modulo `pi`.
pub fn transform_heart(d: &StokesData, eps: f64) -> Result<StokesData> {
    let (ic, _) = heart_pair(d.params(), eps)?;
    let expected = -d.params().param(ic).arg() / 2.0;
    let th = d.theta0().radians();
    if !congruent_mod_pi(th, expected, eps) {
        return Err(Error::WrongGenericDirection {
            expected,
            found: th,
        });
    }
    transformed(d)
}

/// Complex value of `-1/c`.
pub fn dual_param(c: Complex64) -> Complex64 {
    -1.0 / c
}

/// `(theta0)^ = pi - theta0`, kept as a raw angle.
pub fn dual_direction(theta0: f64) -> Direction {
    Direction::new(PI - theta0)
}
