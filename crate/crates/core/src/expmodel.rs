//! Stalks of exponential enhanced sheaves `E^{φ⁺▷φ⁻}_Z` on `C_w x R`.
//!
//! The stalk of `E^{φ⁺▷φ⁻}_Z` at `(w, t)` is one-dimensional exactly when
//! `w ∈ Z` and `-φ⁺(w) <= t < -φ⁻(w)`; a one-sided `E^φ_Z` has a nonzero
//! stalk when `w ∈ Z` and `t + φ(w) >= 0`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::check_heart;
use crate::geometry::{SectorSpec, DEFAULT_EPS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// `φ±_{r,c}`
    AlignedRight,
    /// `φ±_{1,c}`
    AlignedLeft,
    /// `ψ±_r`
    HeartRight,
    /// `ψ±_1`
    HeartLeft,
    /// `Re(w²/2c)`
    PureQuadratic,
    /// `η_c(w) = -(c₂w₁ - c₁w₂)² / (2c₁|c|²)`
    Eta,
    /// `ζ(w) = -(c₂w₁ - c₁w₂)² / (2(c₁²d₁ + 2c₁c₂d₂ - c₂²d₁))`
    Zeta,
    Zero,
}

/// One of the piecewise-quadratic functions on `C_w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiProfile {
    pub kind: ProfileKind,
    pub sign: Sign,
    pub c: Complex64,
    pub d: Complex64,
}

fn re_quad(w: Complex64, c: Complex64) -> f64 {
    (w * w / (2.0 * c)).re
}

fn eta(w: Complex64, c: Complex64) -> f64 {
    let n = c.im * w.re - c.re * w.im;
    -n * n / (2.0 * c.re * c.norm_sqr())
}

fn zeta(w: Complex64, c: Complex64, d: Complex64) -> f64 {
    let n = c.im * w.re - c.re * w.im;
    let den = c.re * c.re * d.re + 2.0 * c.re * c.im * d.im - c.im * c.im * d.re;
    -n * n / (2.0 * den)
}

/// Left-hand side of the case split of `ψ⁻`: `(c₁d₂ - c₂d₁)w₂ + (c₁d₁ + c₂d₂)w₁`.
fn heart_case(w: Complex64, c: Complex64, d: Complex64) -> f64 {
    (c.re * d.im - c.im * d.re) * w.im + (c.re * d.re + c.im * d.im) * w.re
}

impl PhiProfile {
    fn mk(kind: ProfileKind, sign: Sign, c: Complex64, d: Complex64) -> Self {
        Self { kind, sign, c, d }
    }

    pub fn aligned_right(c: Complex64, sign: Sign) -> Self {
        Self::mk(ProfileKind::AlignedRight, sign, c, c)
    }

    pub fn aligned_left(c: Complex64, sign: Sign) -> Self {
        Self::mk(ProfileKind::AlignedLeft, sign, c, c)
    }

    pub fn heart_right(c: Complex64, d: Complex64, sign: Sign) -> Self {
        Self::mk(ProfileKind::HeartRight, sign, c, d)
    }

    pub fn heart_left(c: Complex64, d: Complex64, sign: Sign) -> Self {
        Self::mk(ProfileKind::HeartLeft, sign, c, d)
    }

    pub fn pure_quadratic(c: Complex64) -> Self {
        Self::mk(ProfileKind::PureQuadratic, Sign::Plus, c, c)
    }

    pub fn eta(c: Complex64) -> Self {
        Self::mk(ProfileKind::Eta, Sign::Minus, c, c)
    }

    pub fn zeta(c: Complex64, d: Complex64) -> Self {
        Self::mk(ProfileKind::Zeta, Sign::Minus, c, d)
    }

    pub fn zero() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::mk(ProfileKind::Zero, Sign::Plus, one, one)
    }

    /// Evaluates without checking the parameter preconditions.
    pub fn eval(&self, w: Complex64) -> f64 {
        let (c, d, w1) = (self.c, self.d, w.re);
        match (self.kind, self.sign) {
            (ProfileKind::AlignedRight, Sign::Plus) => {
                if w1 <= 0.0 {
                    w1 * w1 / (2.0 * c.re)
                } else {
                    0.0
                }
            }
            (ProfileKind::AlignedRight, Sign::Minus) => {
                if w1 <= 0.0 {
                    re_quad(w, c)
                } else {
                    eta(w, c)
                }
            }
            (ProfileKind::AlignedLeft, Sign::Plus) => {
                if w1 < 0.0 {
                    0.0
                } else {
                    w1 * w1 / (2.0 * c.re)
                }
            }
            (ProfileKind::AlignedLeft, Sign::Minus) => {
                if w1 < 0.0 {
                    eta(w, c)
                } else {
                    re_quad(w, c)
                }
            }
            (ProfileKind::HeartRight, Sign::Plus) => {
                if w1 <= 0.0 {
                    w1 * w1 / (2.0 * d.re)
                } else {
                    0.0
                }
            }
            (ProfileKind::HeartRight, Sign::Minus) => {
                if heart_case(w, c, d) <= 0.0 {
                    re_quad(w, d)
                } else {
                    zeta(w, c, d)
                }
            }
            (ProfileKind::HeartLeft, Sign::Plus) => {
                if w1 < 0.0 {
                    0.0
                } else {
                    w1 * w1 / (2.0 * d.re)
                }
            }
            (ProfileKind::HeartLeft, Sign::Minus) => {
                if heart_case(w, c, d) < 0.0 {
                    zeta(w, c, d)
                } else {
                    re_quad(w, d)
                }
            }
            (ProfileKind::PureQuadratic, _) => re_quad(w, c),
            (ProfileKind::Eta, _) => eta(w, c),
            (ProfileKind::Zeta, _) => zeta(w, c, d),
            (ProfileKind::Zero, _) => 0.0,
        }
    }

    /// Lines `a w₁ + b w₂ = 0` across which the case split changes.
    pub fn case_lines(&self) -> Vec<(f64, f64)> {
        match (self.kind, self.sign) {
            (ProfileKind::AlignedRight | ProfileKind::AlignedLeft, _) => vec![(1.0, 0.0)],
            (ProfileKind::HeartRight | ProfileKind::HeartLeft, Sign::Plus) => vec![(1.0, 0.0)],
            (ProfileKind::HeartRight | ProfileKind::HeartLeft, Sign::Minus) => {
                let (c, d) = (self.c, self.d);
                vec![(c.re * d.re + c.im * d.im, c.re * d.im - c.im * d.re)]
            }
            _ => Vec::new(),
        }
    }

    fn check(&self) -> Result<()> {
        match self.kind {
            ProfileKind::AlignedRight | ProfileKind::AlignedLeft | ProfileKind::Eta => {
                if self.c.re <= 0.0 {
                    return Err(Error::UnsupportedParams(format!(
                        "Re c = {} <= 0",
                        self.c.re
                    )));
                }
            }
            ProfileKind::HeartRight | ProfileKind::HeartLeft | ProfileKind::Zeta => {
                let c = crate::geometry::ComplexParam::from_complex(self.c)?;
                let d = crate::geometry::ComplexParam::from_complex(self.d)?;
                if !check_heart(c, d, DEFAULT_EPS) {
                    return Err(Error::UnsupportedParams(format!(
                        "({}, {}) violates the heart condition",
                        c, d
                    )));
                }
            }
            ProfileKind::PureQuadratic => {
                if self.c.norm() == 0.0 {
                    return Err(Error::UnsupportedParams("c = 0".into()));
                }
            }
            ProfileKind::Zero => {}
        }
        Ok(())
    }
}

/// Evaluates a profile after checking its parameter preconditions.
pub fn eval_profile(p: &PhiProfile, w: Complex64) -> Result<f64> {
    p.check()?;
    Ok(p.eval(w))
}

/// Closed regions of `C_w`, all cones with vertex 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RegionSpec {
    WholePlane,
    /// `Ĥ₋ = {c₂w₁ - c₁w₂ >= 0}`
    HalfPlaneMinus {
        c: Complex64,
    },
    /// `Ĥ₊ = {c₂w₁ - c₁w₂ <= 0}`
    HalfPlanePlus {
        c: Complex64,
    },
    /// `w₂ <= min(c₂w₁/c₁, d₂w₁/d₁)`
    Y1 {
        c: Complex64,
        d: Complex64,
    },
    /// `w₂ <= max(..)`
    Y2 {
        c: Complex64,
        d: Complex64,
    },
    /// `w₂ >= max(..)`
    Y3 {
        c: Complex64,
        d: Complex64,
    },
    /// `w₂ >= min(..)`
    Y4 {
        c: Complex64,
        d: Complex64,
    },
    Sector(SectorSpec),
    Point0,
}

fn slopes(c: Complex64, d: Complex64, w1: f64) -> (f64, f64) {
    let a = c.im * w1 / c.re;
    let b = d.im * w1 / d.re;
    (a.min(b), a.max(b))
}

/// Line through 0 in direction `theta`, as `(a, b)` with `a w₁ + b w₂ = 0`.
fn ray_line(theta: f64) -> (f64, f64) {
    (-theta.sin(), theta.cos())
}

impl RegionSpec {
    /// Lines through 0 containing the boundary of the region.
    pub fn boundary_lines(&self) -> Vec<(f64, f64)> {
        match *self {
            RegionSpec::WholePlane | RegionSpec::Point0 => Vec::new(),
            RegionSpec::HalfPlaneMinus { c } | RegionSpec::HalfPlanePlus { c } => {
                vec![(c.im, -c.re)]
            }
            RegionSpec::Y1 { c, d }
            | RegionSpec::Y2 { c, d }
            | RegionSpec::Y3 { c, d }
            | RegionSpec::Y4 { c, d } => {
                vec![(c.im / c.re, -1.0), (d.im / d.re, -1.0)]
            }
            RegionSpec::Sector(s) => {
                if s.width >= TAU {
                    Vec::new()
                } else {
                    vec![ray_line(s.lo), ray_line(s.lo + s.width)]
                }
            }
        }
    }
}

/// Closed-inequality membership.
pub fn in_region(r: &RegionSpec, w: Complex64) -> bool {
    let (w1, w2) = (w.re, w.im);
    match *r {
        RegionSpec::WholePlane => true,
        RegionSpec::HalfPlaneMinus { c } => c.im * w1 - c.re * w2 >= 0.0,
        RegionSpec::HalfPlanePlus { c } => c.im * w1 - c.re * w2 <= 0.0,
        RegionSpec::Y1 { c, d } => w2 <= slopes(c, d, w1).0,
        RegionSpec::Y2 { c, d } => w2 <= slopes(c, d, w1).1,
        RegionSpec::Y3 { c, d } => w2 >= slopes(c, d, w1).1,
        RegionSpec::Y4 { c, d } => w2 >= slopes(c, d, w1).0,
        RegionSpec::Sector(s) => s.contains_point(w, 1e-12),
        RegionSpec::Point0 => w1 == 0.0 && w2 == 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SummandKind {
    /// `E^{plus ▷ minus}`: support `-plus(w) <= t < -minus(w)`.
    Interval { plus: PhiProfile, minus: PhiProfile },
    /// `E^phi`: support `t + phi(w) >= 0`.
    OneSided { phi: PhiProfile },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpSummand {
    pub region: RegionSpec,
    pub kind: SummandKind,
    pub shift: i32,
}

impl ExpSummand {
    pub fn interval(region: RegionSpec, plus: PhiProfile, minus: PhiProfile) -> Self {
        Self {
            region,
            kind: SummandKind::Interval { plus, minus },
            shift: 1,
        }
    }

    pub fn one_sided(region: RegionSpec, phi: PhiProfile) -> Self {
        Self {
            region,
            kind: SummandKind::OneSided { phi },
            shift: 1,
        }
    }

    pub fn profiles(&self) -> Vec<PhiProfile> {
        match self.kind {
            SummandKind::Interval { plus, minus } => vec![plus, minus],
            SummandKind::OneSided { phi } => vec![phi],
        }
    }

    /// Values of `t` where the stalk can switch at `w`.
    pub fn thresholds(&self, w: Complex64) -> Vec<f64> {
        self.profiles().iter().map(|p| -p.eval(w)).collect()
    }
}

/// A point `(w, t)` of `C_w x R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StalkPoint {
    pub w: Complex64,
    pub t: f64,
}

impl StalkPoint {
    pub fn new(w1: f64, w2: f64, t: f64) -> Self {
        Self {
            w: Complex64::new(w1, w2),
            t,
        }
    }
}

pub fn stalk_dim(e: &ExpSummand, p: &StalkPoint) -> usize {
    if !in_region(&e.region, p.w) {
        return 0;
    }
    let on = match e.kind {
        SummandKind::Interval { plus, minus } => -plus.eval(p.w) <= p.t && p.t < -minus.eval(p.w),
        SummandKind::OneSided { phi } => p.t + phi.eval(p.w) >= 0.0,
    };
    usize::from(on)
}

/// Whether a scalar morphism `E^{φ_src}_Z -> E^{φ_dst}_{Z'}` exists, judged
/// at the probe points: it does iff `φ_src >= φ_dst` on the source region.
/// Where both stalks are nonzero the induced map is the identity scalar.
pub fn hom_allowed(src: &ExpSummand, dst: &ExpSummand, probes: &[Complex64]) -> Result<bool> {
    let (SummandKind::OneSided { phi: ps }, SummandKind::OneSided { phi: pd }) =
        (src.kind, dst.kind)
    else {
        return Err(Error::RegionMismatch(
            "only one-sided summands are compared".into(),
        ));
    };
    let mut ok = true;
    for &w in probes {
        if !in_region(&src.region, w) {
            continue;
        }
        if !in_region(&dst.region, w) {
            return Err(Error::RegionMismatch(format!(
                "probe {w} lies in the source region only"
            )));
        }
        if ps.eval(w) < pd.eval(w) {
            ok = false;
        }
    }
    Ok(ok)
}

fn sample_directions(z: &RegionSpec) -> Vec<f64> {
    match z {
        RegionSpec::Sector(s) => (0..=256)
            .map(|i| s.lo + s.width * i as f64 / 256.0)
            .collect(),
        _ => (0..1024).map(|i| -PI + TAU * i as f64 / 1024.0).collect(),
    }
}

fn sup_difference(
    phi: &PhiProfile,
    psi: &PhiProfile,
    z: &RegionSpec,
    radius: f64,
    dirs: &[f64],
) -> f64 {
    let mut sup = 0.0f64;
    for &th in dirs {
        for k in 1..=64 {
            let w = Complex64::from_polar(radius * k as f64 / 64.0, th);
            if in_region(z, w) {
                sup = sup.max((phi.eval(w) - psi.eval(w)).abs());
            }
        }
    }
    sup
}

/// Sampling test for boundedness of `φ - ψ` on `Z`: the supremum over
/// `|w| <= probe_radius` must not grow when the radius is multiplied by 4.
/// This is a semi-decision meant for tests.
pub fn bounded_difference(
    phi: &PhiProfile,
    psi: &PhiProfile,
    z: &RegionSpec,
    probe_radius: f64,
) -> bool {
    let dirs = sample_directions(z);
    let s1 = sup_difference(phi, psi, z, probe_radius, &dirs);
    let s2 = sup_difference(phi, psi, z, 4.0 * probe_radius, &dirs);
    s2 <= s1 * (1.0 + DEFAULT_EPS) + DEFAULT_EPS
}
