//! Brute-force lattice computation of `H⁰_c` of the slices
//! `{z ∈ S : t - Re(zw + (c/2)z²) >= 0}` and comparison with the closed
//! stalk formulas.

mod components;
mod grid;

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmodel::{stalk_dim, ExpSummand, StalkPoint};
use crate::fourier::{SourceId, TransformTable};
use crate::geometry::SectorSpec;

pub use components::{component_analysis, ComponentReport};
pub use grid::{region_slice, Edges, Frame, GridField, ZRegion};

pub const DEFAULT_RESOLUTION: usize = 512;
pub const DEFAULT_DELTA: f64 = 1e-3;
pub const MAX_DOUBLINGS: usize = 4;

/// Environment variable capping the scan thread pool.
pub const THREADS_ENV: &str = "GAUSS_STOKES_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Cells per side of the initial box.
    pub resolution: usize,
    pub max_doublings: usize,
    /// Overrides the automatic initial extent.
    pub extent: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            resolution: DEFAULT_RESOLUTION,
            max_doublings: MAX_DOUBLINGS,
            extent: None,
        }
    }
}

/// Radius around the vertex that holds every bounded feature of the slice.
pub fn box_radius(c: Complex64, w: Complex64, t: f64) -> f64 {
    let c1 = if c.re > 0.0 { c.re } else { c.norm() };
    let vertex = t + (w * w / (2.0 * c)).re;
    4.0 * (1.0 + (2.0 * vertex.max(0.0) / c1).sqrt() + w.norm() / c1)
}

/// Field of the slice on a box of `2 extent` with `2 n` cells, and its
/// crop to the box of `extent` with `n` cells at the same spacing.
fn nested_fields(
    c: Complex64,
    region: &ZRegion,
    w: Complex64,
    t: f64,
    extent: f64,
    n: usize,
) -> (GridField, GridField) {
    let big = region_slice(c, region, w, t, 2.0 * extent, 2 * n);
    let small = match region {
        ZRegion::Origin => big.clone(),
        ZRegion::Ray { .. } => big.crop(0, n, 0, 0, big.open, extent),
        ZRegion::Wedge { .. } => big.crop(0, n, 0, n, big.open, extent),
        ZRegion::Wide(_) => {
            let m = big.ncols - 1;
            big.crop(m / 4, 3 * m / 4, m / 4, 3 * m / 4, big.open, extent)
        }
    };
    (small, big)
}

/// Number of compact components of the slice, with the box doubled until
/// the report no longer changes.
pub fn h0c_report(
    c: Complex64,
    sector: Option<&SectorSpec>,
    w: Complex64,
    t: f64,
    cfg: &OracleConfig,
) -> Result<ComponentReport> {
    let region = ZRegion::from_sector(sector);
    if region == ZRegion::Origin {
        return Ok(component_analysis(&region_slice(c, &region, w, t, 0.0, 1)));
    }
    let n = cfg.resolution.max(64);
    let mut extent = cfg
        .extent
        .unwrap_or_else(|| region.extent_for_radius(box_radius(c, w, t)));
    for _ in 0..cfg.max_doublings {
        let (small, big) = nested_fields(c, &region, w, t, extent, n);
        let a = component_analysis(&small);
        let b = component_analysis(&big);
        if a.same_counts(&b) {
            return Ok(a);
        }
        extent *= 2.0;
    }
    Err(Error::Unstable(cfg.max_doublings))
}

pub fn h0c(c: Complex64, sector: Option<&SectorSpec>, w: Complex64, t: f64) -> Result<usize> {
    h0c_report(c, sector, w, t, &OracleConfig::default()).map(|r| r.compact_count)
}

/// Recomputes the stability flag of a field produced by [`region_slice`].
pub fn stability_check(
    c: Complex64,
    sector: Option<&SectorSpec>,
    w: Complex64,
    t: f64,
    extent: f64,
    n: usize,
) -> ComponentReport {
    let region = ZRegion::from_sector(sector);
    let (small, big) = nested_fields(c, &region, w, t, extent, n);
    let mut a = component_analysis(&small);
    a.stable = a.same_counts(&component_analysis(&big));
    a
}

fn line_distance(w: Complex64, (a, b): (f64, f64)) -> f64 {
    let n = (a * a + b * b).sqrt();
    if n == 0.0 {
        f64::INFINITY
    } else {
        (a * w.re + b * w.im).abs() / n
    }
}

/// Whether `(w, t)` lies within the exclusion band of the target's case
/// boundaries: region edges, profile case lines, and the thresholds in `t`.
pub fn in_delta_band(target: &ExpSummand, p: &StalkPoint, delta: f64) -> bool {
    let band = delta * (1.0 + p.w.norm_sqr());
    let lines = target
        .region
        .boundary_lines()
        .into_iter()
        .chain(target.profiles().into_iter().flat_map(|q| q.case_lines()));
    for l in lines {
        if line_distance(p.w, l) < band {
            return true;
        }
    }
    target
        .thresholds(p.w)
        .iter()
        .any(|&th| (p.t - th).abs() < band)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub oracle: OracleConfig,
    pub delta: f64,
    pub w_range: (f64, f64),
    pub t_range: (f64, f64),
    pub w_steps: usize,
    pub t_steps: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            oracle: OracleConfig::default(),
            delta: DEFAULT_DELTA,
            w_range: (-3.0, 3.0),
            t_range: (-3.0, 3.0),
            w_steps: 41,
            t_steps: 21,
        }
    }
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl ScanConfig {
    /// Sample points in `w1`-major, then `w2`, then `t` order.
    pub fn samples(&self) -> Vec<StalkPoint> {
        let ws = linspace(self.w_range, self.w_steps);
        let ts = linspace(self.t_range, self.t_steps);
        let mut out = Vec::with_capacity(ws.len() * ws.len() * ts.len());
        for &w1 in &ws {
            for &w2 in &ws {
                for &t in &ts {
                    out.push(StalkPoint::new(w1, w2, t));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub w1: f64,
    pub w2: f64,
    pub t: f64,
    pub oracle: usize,
    pub closed_form: usize,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub total: usize,
    pub excluded: usize,
    /// Retained samples, in sample order.
    pub rows: Vec<ScanRow>,
    /// Retained samples at which the box never stabilized.
    pub unstable: Vec<StalkPoint>,
    pub max_compact: usize,
    /// Compact components whose Euler characteristic differs from 1.
    pub non_contractible: usize,
}

impl ScanReport {
    pub fn retained(&self) -> usize {
        self.rows.len() + self.unstable.len()
    }

    pub fn matches(&self) -> usize {
        self.rows.iter().filter(|r| r.matched).count()
    }

    pub fn mismatches(&self) -> Vec<&ScanRow> {
        self.rows.iter().filter(|r| !r.matched).collect()
    }

    /// Matching fraction of retained samples; unstable samples count as misses.
    pub fn match_rate(&self) -> f64 {
        let n = self.retained();
        if n == 0 {
            1.0
        } else {
            self.matches() as f64 / n as f64
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        for r in &self.rows {
            wtr.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        wtr.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}

/// Thread pool honoring [`THREADS_ENV`].
pub fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

enum Outcome {
    Excluded,
    Unstable,
    Done(ScanRow, ComponentReport),
}

/// Compares the oracle with `stalk_dim(target, ·)` on the samples.
pub fn scan(
    c: Complex64,
    sector: Option<&SectorSpec>,
    target: &ExpSummand,
    samples: &[StalkPoint],
    cfg: &ScanConfig,
) -> ScanReport {
    let run = |p: &StalkPoint| {
        if in_delta_band(target, p, cfg.delta) {
            return Outcome::Excluded;
        }
        match h0c_report(c, sector, p.w, p.t, &cfg.oracle) {
            Ok(rep) => {
                let closed = stalk_dim(target, p);
                let row = ScanRow {
                    w1: p.w.re,
                    w2: p.w.im,
                    t: p.t,
                    oracle: rep.compact_count,
                    closed_form: closed,
                    matched: rep.compact_count == closed,
                };
                Outcome::Done(row, rep)
            }
            Err(_) => Outcome::Unstable,
        }
    };
    let outcomes: Vec<Outcome> = thread_pool().install(|| samples.par_iter().map(run).collect());
    let mut report = ScanReport {
        total: samples.len(),
        ..ScanReport::default()
    };
    for (p, o) in samples.iter().zip(outcomes) {
        match o {
            Outcome::Excluded => report.excluded += 1,
            Outcome::Unstable => report.unstable.push(*p),
            Outcome::Done(row, rep) => {
                report.max_compact = report.max_compact.max(rep.compact_count);
                report.non_contractible +=
                    rep.euler_per_compact.iter().filter(|&&e| e != 1).count();
                report.rows.push(row);
            }
        }
    }
    report
}

/// Scan of one table entry: the slice uses the entry's parameter and the
/// z-sector of its source.
pub fn scan_entry(
    table: &TransformTable,
    src: SourceId,
    param: usize,
    cfg: &ScanConfig,
) -> Result<ScanReport> {
    let sector = src.z_sector(table.base_arg)?;
    let c = table.params[param];
    Ok(scan(
        c,
        sector.as_ref(),
        table.get(src, param),
        &cfg.samples(),
        cfg,
    ))
}
