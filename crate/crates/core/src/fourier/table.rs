//! Transforms of the exponential building blocks `E^{-Re(c/2)z²}_{S}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blockdata::StokesData;
use crate::error::{Error, Result};
use crate::expmodel::{ExpSummand, PhiProfile, RegionSpec, Sign};
use crate::geometry::{aligned_sectors, ComplexParam, GaussianParamSet, SectorSpec};

use super::{check_heart, heart_pair};

/// The closed pieces of the z-plane cut out by the four aligned sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceId {
    S1,
    S2,
    S3,
    S4,
    S12,
    S23,
    S34,
    S41,
    Origin,
}

impl SourceId {
    pub const ALL: [SourceId; 9] = [
        SourceId::S1,
        SourceId::S2,
        SourceId::S3,
        SourceId::S4,
        SourceId::S12,
        SourceId::S23,
        SourceId::S34,
        SourceId::S41,
        SourceId::Origin,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            SourceId::S1 => "S1",
            SourceId::S2 => "S2",
            SourceId::S3 => "S3",
            SourceId::S4 => "S4",
            SourceId::S12 => "S12",
            SourceId::S23 => "S23",
            SourceId::S34 => "S34",
            SourceId::S41 => "S41",
            SourceId::Origin => "0",
        }
    }

    pub fn parse(s: &str) -> Option<SourceId> {
        let t = s.trim().to_ascii_uppercase();
        SourceId::ALL
            .into_iter()
            .find(|id| id.label() == t || (t == "ORIGIN" && *id == SourceId::Origin))
    }

    /// The piece of the z-plane, for parameters of argument `a`; `None`
    /// stands for the origin.
    pub fn z_sector(self, a: f64) -> Result<Option<SectorSpec>> {
        let (z, _) = aligned_sectors(a)?;
        Ok(match self {
            SourceId::S1 => Some(z[0]),
            SourceId::S2 => Some(z[1]),
            SourceId::S3 => Some(z[2]),
            SourceId::S4 => Some(z[3]),
            SourceId::S12 => Some(SectorSpec::half_line(FRAC_PI_2 - a)),
            SourceId::S23 => Some(SectorSpec::half_line(PI)),
            SourceId::S34 => Some(SectorSpec::half_line(-FRAC_PI_2 - a)),
            SourceId::S41 => Some(SectorSpec::half_line(0.0)),
            SourceId::Origin => None,
        })
    }
}

impl std::fmt::Display for SourceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    Aligned,
    Heart,
}

/// One entry per source piece and per parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformTable {
    pub mode: TableMode,
    /// Argument defining the sectors (`arg C`, or `arg c` for a heart pair).
    pub base_arg: f64,
    pub params: Vec<Complex64>,
    entries: Vec<[ExpSummand; 9]>,
}

impl TransformTable {
    pub fn get(&self, src: SourceId, param: usize) -> &ExpSummand {
        &self.entries[param][src.index()]
    }

    pub fn entries_for(&self, param: usize) -> &[ExpSummand; 9] {
        &self.entries[param]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SourceId, usize, &ExpSummand)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(i, row)| SourceId::ALL.iter().map(move |&s| (s, i, &row[s.index()])))
    }

    pub fn len(&self) -> usize {
        self.entries.len() * 9
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Table matching the parameter order of `d`.
    pub fn for_data(d: &StokesData, mode: TableMode, eps: f64) -> Result<TransformTable> {
        match mode {
            TableMode::Aligned => transform_table_aligned_set(d.params(), eps),
            TableMode::Heart => {
                let (ic, id) = heart_pair(d.params(), eps)?;
                let t = transform_table_heart(d.params().param(ic), d.params().param(id), eps)?;
                if ic == 0 {
                    Ok(t)
                } else {
                    Ok(TransformTable {
                        params: vec![t.params[1], t.params[0]],
                        entries: vec![t.entries[1], t.entries[0]],
                        ..t
                    })
                }
            }
        }
    }

    /// The w-plane sectors `Ŝ_1..Ŝ_4`.
    pub fn w_sectors(&self) -> [SectorSpec; 4] {
        aligned_sectors(self.base_arg)
            .expect("checked at construction")
            .1
    }

    /// Direction of the half-line `Ŝ_k ∩ Ŝ_{k+1}`, `k` in `1..=4`.
    pub fn w_boundary_direction(&self, k: usize) -> f64 {
        let a = self.base_arg;
        [-FRAC_PI_2, a, FRAC_PI_2, PI + a][k - 1]
    }
}

fn aligned_row(c: Complex64) -> [ExpSummand; 9] {
    let hm = RegionSpec::HalfPlaneMinus { c };
    let hp = RegionSpec::HalfPlanePlus { c };
    let r = |s| PhiProfile::aligned_right(c, s);
    let l = |s| PhiProfile::aligned_left(c, s);
    [
        ExpSummand::interval(hm, r(Sign::Plus), r(Sign::Minus)),
        ExpSummand::interval(hm, l(Sign::Plus), l(Sign::Minus)),
        ExpSummand::interval(hp, l(Sign::Plus), l(Sign::Minus)),
        ExpSummand::interval(hp, r(Sign::Plus), r(Sign::Minus)),
        ExpSummand::interval(hm, PhiProfile::zero(), PhiProfile::eta(c)),
        ExpSummand::one_sided(RegionSpec::WholePlane, l(Sign::Plus)),
        ExpSummand::interval(hp, PhiProfile::zero(), PhiProfile::eta(c)),
        ExpSummand::one_sided(RegionSpec::WholePlane, r(Sign::Plus)),
        ExpSummand::one_sided(RegionSpec::WholePlane, PhiProfile::zero()),
    ]
}

fn heart_row(c: Complex64, d: Complex64) -> [ExpSummand; 9] {
    let hm = RegionSpec::HalfPlaneMinus { c };
    let hp = RegionSpec::HalfPlanePlus { c };
    let r = |s| PhiProfile::heart_right(c, d, s);
    let l = |s| PhiProfile::heart_left(c, d, s);
    [
        ExpSummand::interval(RegionSpec::Y1 { c, d }, r(Sign::Plus), r(Sign::Minus)),
        ExpSummand::interval(RegionSpec::Y2 { c, d }, l(Sign::Plus), l(Sign::Minus)),
        ExpSummand::interval(RegionSpec::Y3 { c, d }, l(Sign::Plus), l(Sign::Minus)),
        ExpSummand::interval(RegionSpec::Y4 { c, d }, r(Sign::Plus), r(Sign::Minus)),
        ExpSummand::interval(hm, PhiProfile::zero(), PhiProfile::zeta(c, d)),
        ExpSummand::one_sided(RegionSpec::WholePlane, l(Sign::Plus)),
        ExpSummand::interval(hp, PhiProfile::zero(), PhiProfile::zeta(c, d)),
        ExpSummand::one_sided(RegionSpec::WholePlane, r(Sign::Plus)),
        ExpSummand::one_sided(RegionSpec::WholePlane, PhiProfile::zero()),
    ]
}

/// The nine transformed building blocks for one parameter with `Re c > 0`.
pub fn transform_table_aligned(c: ComplexParam) -> Result<TransformTable> {
    if c.re() <= 0.0 {
        return Err(Error::UnsupportedParams(format!("Re c = {} <= 0", c.re())));
    }
    Ok(TransformTable {
        mode: TableMode::Aligned,
        base_arg: c.arg(),
        params: vec![c.value()],
        entries: vec![aligned_row(c.value())],
    })
}

/// Table for an aligned family, in the order of `params`.
pub fn transform_table_aligned_set(params: &GaussianParamSet, eps: f64) -> Result<TransformTable> {
    let a = params.common_arg(eps).ok_or(Error::NotAligned)?;
    let mut rows = Vec::new();
    for (c, _) in params.params() {
        rows.push(transform_table_aligned(*c)?.entries.remove(0));
    }
    Ok(TransformTable {
        mode: TableMode::Aligned,
        base_arg: a,
        params: params.values(),
        entries: rows,
    })
}

/// Table for a heart pair: `c` as in the aligned case, `d` by the
/// `ψ, ζ, Y` entries. The `{0}` entry of `d` is `E^0` like that of `c`.
pub fn transform_table_heart(c: ComplexParam, d: ComplexParam, eps: f64) -> Result<TransformTable> {
    if !check_heart(c, d, eps) {
        return Err(Error::HeartViolated(format!("({c}, {d})")));
    }
    Ok(TransformTable {
        mode: TableMode::Heart,
        base_arg: c.arg(),
        params: vec![c.value(), d.value()],
        entries: vec![aligned_row(c.value()), heart_row(c.value(), d.value())],
    })
}
