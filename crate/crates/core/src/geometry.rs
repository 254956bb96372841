//! Stokes directions, sectors and the dominance order on Gaussian parameters.
//!
//! A parameter `c` stands for the exponential factor `-(c/2) z^2`. For two
//! parameters `c != d` the sign of `Re((c - d) e^{2i theta})` decides which
//! exponential dominates along the direction `theta`; its zeros are the
//! Stokes directions of the pair.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global tolerance for geometric predicates.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Maps an angle to `[-pi, pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// A nonzero complex parameter `c = c1 + i c2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexParam {
    re: f64,
    im: f64,
}

impl ComplexParam {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) || (re == 0.0 && im == 0.0) {
            return Err(Error::ZeroParam { re, im });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl std::fmt::Display for ComplexParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

/// Finite family of distinct parameters with ranks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParamSet {
    params: Vec<(ComplexParam, usize)>,
}

impl GaussianParamSet {
    pub fn new(params: Vec<(ComplexParam, usize)>, eps: f64) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::InvalidParamSet("empty parameter set".into()));
        }
        for (i, (c, r)) in params.iter().enumerate() {
            if *r == 0 {
                return Err(Error::InvalidParamSet(format!("rank of {c} is zero")));
            }
            for (d, _) in &params[..i] {
                if (c.value() - d.value()).norm() <= eps {
                    return Err(Error::DegenerateParams(c.to_string(), d.to_string()));
                }
            }
        }
        Ok(Self { params })
    }

    /// Convenience constructor from complex values with given ranks.
    pub fn from_values(values: &[(Complex64, usize)]) -> Result<Self> {
        let params = values
            .iter()
            .map(|&(z, r)| Ok((ComplexParam::from_complex(z)?, r)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, DEFAULT_EPS)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[(ComplexParam, usize)] {
        &self.params
    }

    pub fn param(&self, i: usize) -> ComplexParam {
        self.params[i].0
    }

    pub fn rank(&self, i: usize) -> usize {
        self.params[i].1
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.params.iter().map(|p| p.1).collect()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.params.iter().map(|p| p.0.value()).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.params.iter().map(|p| p.1).sum()
    }

    /// Common argument of all parameters, if they lie on one ray from 0.
    pub fn common_arg(&self, eps: f64) -> Option<f64> {
        let a = self.params[0].0.arg();
        self.params
            .iter()
            .all(|(c, _)| circle_distance(c.arg(), a) <= eps)
            .then_some(a)
    }

    /// Returns the set reordered by `perm` (new position i holds old `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            params: perm.iter().map(|&i| self.params[i]).collect(),
        }
    }
}

/// A direction in `R / 2 pi Z`, stored in `[-pi, pi)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Direction(f64);

impl Direction {
    pub fn new(theta: f64) -> Self {
        Self(normalize_angle(theta))
    }

    pub fn radians(&self) -> f64 {
        self.0
    }

    pub fn distance(&self, other: Direction) -> f64 {
        circle_distance(self.0, other.0)
    }
}

/// Comparison of two parameters along one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Less,
    Greater,
    OnStokesLine,
}

/// Comparison of two parameters on a whole sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorOrder {
    Less,
    Greater,
    Incomparable,
}

/// Angular sector `{arg z in [lo, lo + width]}` at infinity.
///
/// `inv_radius` is the bound `R` of a sector `{|z| > R}`; `0` means all radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub lo: f64,
    pub width: f64,
    pub inv_radius: f64,
    pub closed: bool,
    pub includes_vertex: bool,
}

impl SectorSpec {
    /// Closed sector `arg z in [lo, hi]`, infinite radius, with vertex.
    pub fn closed(lo: f64, hi: f64) -> Self {
        assert!(hi >= lo && hi - lo <= TAU + 1e-12, "bad angle interval");
        Self {
            lo: normalize_angle(lo),
            width: (hi - lo).min(TAU),
            inv_radius: 0.0,
            closed: true,
            includes_vertex: true,
        }
    }

    pub fn half_line(theta: f64) -> Self {
        Self::closed(theta, theta)
    }

    pub fn whole_plane() -> Self {
        Self::closed(-PI, PI)
    }

    pub fn angle_lo(&self) -> Direction {
        Direction::new(self.lo)
    }

    pub fn angle_hi(&self) -> Direction {
        Direction::new(self.lo + self.width)
    }

    pub fn is_half_line(&self) -> bool {
        self.width == 0.0
    }

    /// Whether the direction lies in the angle interval (closed, up to `eps`).
    pub fn contains_direction(&self, theta: f64, eps: f64) -> bool {
        if self.width >= TAU - eps {
            return true;
        }
        let off = (theta - self.lo).rem_euclid(TAU);
        off <= self.width + eps || off >= TAU - eps
    }

    /// Whether the direction lies strictly inside the angle interval.
    pub fn contains_direction_interior(&self, theta: f64, eps: f64) -> bool {
        if self.width >= TAU - eps {
            return true;
        }
        let off = (theta - self.lo).rem_euclid(TAU);
        off > eps && off < self.width - eps
    }

    /// Membership of a point, honouring vertex and closedness flags.
    pub fn contains_point(&self, z: Complex64, eps: f64) -> bool {
        let r = z.norm();
        if r == 0.0 {
            return self.includes_vertex;
        }
        if self.inv_radius > 0.0 && r <= self.inv_radius {
            return false;
        }
        if self.closed {
            self.contains_direction(z.arg(), eps)
        } else {
            self.contains_direction_interior(z.arg(), eps)
        }
    }
}

fn check_pair(c: ComplexParam, d: ComplexParam, eps: f64) -> Result<Complex64> {
    let diff = c.value() - d.value();
    if diff.norm() <= eps {
        return Err(Error::DegenerateParams(c.to_string(), d.to_string()));
    }
    Ok(diff)
}

/// The four Stokes directions of the pair `(c, d)`.
pub fn stokes_directions_pair(
    c: ComplexParam,
    d: ComplexParam,
    eps: f64,
) -> Result<[Direction; 4]> {
    let diff = check_pair(c, d, eps)?;
    let base = FRAC_PI_4 - diff.arg() / 2.0;
    Ok(std::array::from_fn(|k| {
        Direction::new(base + k as f64 * FRAC_PI_2)
    }))
}

/// Union of the Stokes directions of all pairs, deduplicated and sorted.
pub fn all_stokes_directions(set: &GaussianParamSet, eps: f64) -> Vec<Direction> {
    let mut out: Vec<Direction> = Vec::new();
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let dirs = stokes_directions_pair(set.param(i), set.param(j), eps)
                .expect("parameter set entries are separated");
            for d in dirs {
                if out.iter().all(|e| e.distance(d) > eps) {
                    out.push(d);
                }
            }
        }
    }
    out.sort_by(|a, b| a.radians().total_cmp(&b.radians()));
    out
}

pub fn is_generic(theta: Direction, set: &GaussianParamSet, eps: f64) -> bool {
    all_stokes_directions(set, eps)
        .iter()
        .all(|d| d.distance(theta) > eps)
}

/// Compares `c` and `d` along `theta`: `Less` means `c <_theta d`.
pub fn order_at(theta: Direction, c: ComplexParam, d: ComplexParam, eps: f64) -> Result<Order> {
    let diff = check_pair(c, d, eps)?;
    let v = (diff * Complex64::from_polar(1.0, 2.0 * theta.radians())).re / diff.norm();
    Ok(if v < -eps {
        Order::Less
    } else if v > eps {
        Order::Greater
    } else {
        Order::OnStokesLine
    })
}

/// Indices of `set` sorted increasingly for the order at `theta0`.
pub fn numbering(set: &GaussianParamSet, theta0: Direction, eps: f64) -> Result<Vec<usize>> {
    if !is_generic(theta0, set, eps) {
        return Err(Error::NotGeneric(theta0.radians()));
    }
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by(|&a, &b| {
        match order_at(theta0, set.param(a), set.param(b), eps).expect("separated") {
            Order::Less => std::cmp::Ordering::Less,
            Order::Greater => std::cmp::Ordering::Greater,
            Order::OnStokesLine => unreachable!("generic direction"),
        }
    });
    Ok(idx)
}

/// Range of `cos(phi + 2 theta)` for `theta` in `[lo, lo + width]`.
pub(crate) fn cos_range(phi: f64, lo: f64, width: f64) -> (f64, f64) {
    if width >= PI {
        return (-1.0, 1.0);
    }
    let f = |t: f64| (phi + 2.0 * t).cos();
    let (mut mn, mut mx) = (f(lo).min(f(lo + width)), f(lo).max(f(lo + width)));
    // interior critical points: phi + 2 theta = m pi
    let m0 = ((phi + 2.0 * lo) / PI).ceil() as i64;
    let mut m = m0;
    while (m as f64 * PI - phi) / 2.0 <= lo + width {
        let v = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        mn = mn.min(v);
        mx = mx.max(v);
        m += 1;
    }
    (mn, mx)
}

/// Compares `c` and `d` on every direction of `s` at once.
pub fn order_on_sector(
    s: &SectorSpec,
    c: ComplexParam,
    d: ComplexParam,
    eps: f64,
) -> Result<SectorOrder> {
    let diff = check_pair(c, d, eps)?;
    let (mn, mx) = cos_range(diff.arg(), s.lo, s.width);
    Ok(if mx < -eps {
        SectorOrder::Less
    } else if mn > eps {
        SectorOrder::Greater
    } else {
        SectorOrder::Incomparable
    })
}

/// The sectors `S_k = [theta0 + (k-1) pi/2, theta0 + k pi/2]`, k = 1..4.
pub fn standard_sectors(theta0: Direction) -> [SectorSpec; 4] {
    let t = theta0.radians();
    std::array::from_fn(|i| {
        let lo = t + i as f64 * FRAC_PI_2;
        SectorSpec::closed(lo, lo + FRAC_PI_2)
    })
}

/// The sectors adapted to an aligned family with `arg C = a`: the z-plane
/// sectors `(S_1..S_4)` and the w-plane sectors `(Ŝ_1..Ŝ_4)`.
pub fn aligned_sectors(arg_c: f64) -> Result<([SectorSpec; 4], [SectorSpec; 4])> {
    if !(arg_c > -FRAC_PI_2 && arg_c < FRAC_PI_2) {
        return Err(Error::UnsupportedArgRange(arg_c));
    }
    let a = arg_c;
    let z = [
        SectorSpec::closed(0.0, FRAC_PI_2 - a),
        SectorSpec::closed(FRAC_PI_2 - a, PI),
        SectorSpec::closed(-PI, -FRAC_PI_2 - a),
        SectorSpec::closed(-FRAC_PI_2 - a, 0.0),
    ];
    let w = [
        SectorSpec::closed(-PI + a, -FRAC_PI_2),
        SectorSpec::closed(-FRAC_PI_2, a),
        SectorSpec::closed(a, FRAC_PI_2),
        SectorSpec::closed(FRAC_PI_2, PI + a),
    ];
    Ok((z, w))
}

/// Whether `s` and `s2` contain the same Stokes directions of `set`.
pub fn same_stokes_content(
    s: &SectorSpec,
    s2: &SectorSpec,
    set: &GaussianParamSet,
    eps: f64,
) -> bool {
    all_stokes_directions(set, eps)
        .iter()
        .all(|d| s.contains_direction(d.radians(), eps) == s2.contains_direction(d.radians(), eps))
}
