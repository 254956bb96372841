//! Occupancy fields of `{z ∈ S : t - Re(zw + (c/2)z²) >= 0}` on lattices
//! adapted to the sector `S`.
//!
//! Lattice nodes are `origin + i·h·p + j·h·q`. For a sector of width below
//! `pi` the frame is oblique, `p` and `q` pointing along the two boundary
//! rays, so the closed sector is exactly the quadrant `i, j >= 0` and the
//! boundary rays are lattice lines. Along each lattice row the predicate is
//! a quadratic polynomial in `i`; rows are rasterized from its roots and
//! the run endpoints are then corrected by evaluating the same polynomial at
//! the nodes, so the result equals node-by-node sampling.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::SectorSpec;

/// Which sides of the lattice box are artificial cut-offs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edges {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

impl Edges {
    pub const ALL: Edges = Edges {
        left: true,
        right: true,
        bottom: true,
        top: true,
    };
    pub const NONE: Edges = Edges {
        left: false,
        right: false,
        bottom: false,
        top: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub origin: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub h: f64,
}

impl Frame {
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        self.origin + self.p * (i as f64 * self.h) + self.q * (j as f64 * self.h)
    }
}

/// Boolean lattice field stored as sorted runs `[a, b]` of occupied
/// column indices per row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub frame: Frame,
    /// Side length of the oblique box, or half-width of a Cartesian one.
    pub extent: f64,
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, u32)>>,
    pub open: Edges,
}

impl GridField {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.rows[j]
            .iter()
            .any(|&(a, b)| a as usize <= i && i <= b as usize)
    }

    pub fn count(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(|&(a, b)| (b - a + 1) as usize)
            .sum()
    }

    /// Field from an explicit mask, `mask[j][i]` for row `j`, column `i`.
    pub fn from_mask(mask: &[Vec<bool>], open: Edges) -> GridField {
        let ncols = mask.first().map_or(0, |r| r.len());
        let rows = mask.iter().map(|r| runs_from_bools(r)).collect();
        GridField {
            frame: Frame {
                origin: Complex64::new(0.0, 0.0),
                p: Complex64::new(1.0, 0.0),
                q: Complex64::new(0.0, 1.0),
                h: 1.0,
            },
            extent: ncols as f64,
            ncols,
            rows,
            open,
        }
    }

    /// Sub-field on columns `i0..=i1` and rows `j0..=j1`, with the given open edges.
    pub fn crop(
        &self,
        i0: usize,
        i1: usize,
        j0: usize,
        j1: usize,
        open: Edges,
        extent: f64,
    ) -> GridField {
        let rows = self.rows[j0..=j1]
            .iter()
            .map(|r| {
                r.iter()
                    .filter_map(|&(a, b)| {
                        let a = (a as usize).max(i0);
                        let b = (b as usize).min(i1);
                        (a <= b).then(|| ((a - i0) as u32, (b - i0) as u32))
                    })
                    .collect()
            })
            .collect();
        GridField {
            frame: Frame {
                origin: self.frame.node(i0, j0),
                ..self.frame
            },
            extent,
            ncols: i1 - i0 + 1,
            rows,
            open,
        }
    }
}

fn runs_from_bools(r: &[bool]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &b) in r.iter().enumerate() {
        match (b, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s as u32, (i - 1) as u32));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s as u32, (r.len() - 1) as u32));
    }
    out
}

/// Runs of `{i in 0..=n : a u² + b u + c0 >= 0}`, `u = i h`.
pub(crate) fn quad_runs(a: f64, b: f64, c0: f64, h: f64, n: usize, out: &mut Vec<(u32, u32)>) {
    out.clear();
    let pred = |i: usize| {
        let u = i as f64 * h;
        (a * u + b) * u + c0 >= 0.0
    };
    let umax = n as f64 * h;
    let scale = a.abs() * umax * umax + b.abs() * umax + c0.abs();
    let mut intervals: [(f64, f64); 2] = [(f64::NAN, f64::NAN); 2];
    let mut k = 0;
    let inf = f64::INFINITY;
    if a.abs() * umax * umax <= 1e-13 * scale {
        if b.abs() * umax <= 1e-13 * scale {
            if c0 >= 0.0 {
                intervals[0] = (-inf, inf);
                k = 1;
            }
        } else {
            let r = -c0 / b;
            intervals[0] = if b > 0.0 { (r, inf) } else { (-inf, r) };
            k = 1;
        }
    } else {
        let disc = b * b - 4.0 * a * c0;
        if disc < 0.0 {
            if a > 0.0 {
                intervals[0] = (-inf, inf);
                k = 1;
            }
        } else {
            let sq = disc.sqrt();
            let qq = -0.5 * (b + b.signum() * sq);
            let r1 = qq / a;
            let r2 = if qq != 0.0 { c0 / qq } else { r1 };
            let (lo, hi) = (r1.min(r2), r1.max(r2));
            if a > 0.0 {
                intervals[0] = (-inf, lo);
                intervals[1] = (hi, inf);
                k = 2;
            } else {
                intervals[0] = (lo, hi);
                k = 1;
            }
        }
    }
    for &(lo, hi) in &intervals[..k] {
        if hi < 0.0 || lo > umax {
            continue;
        }
        let mut i0 = if lo <= 0.0 {
            0
        } else {
            ((lo / h).ceil() as usize).min(n)
        };
        let mut i1 = if hi >= umax {
            n
        } else {
            (hi / h).floor().max(0.0) as usize
        };
        if i0 > i1 {
            // the interval holds no node unless rounding says otherwise
            if pred(i1.min(n)) {
                i0 = i1;
            } else if pred(i0.min(n)) {
                i1 = i0;
            } else {
                continue;
            }
        }
        while i0 <= i1 && !pred(i0) {
            i0 += 1;
        }
        while i1 >= i0 && !pred(i1) {
            if i1 == 0 {
                break;
            }
            i1 -= 1;
        }
        if i0 > i1 || !pred(i0) {
            continue;
        }
        while i0 > 0 && pred(i0 - 1) {
            i0 -= 1;
        }
        while i1 < n && pred(i1 + 1) {
            i1 += 1;
        }
        out.push((i0 as u32, i1 as u32));
    }
    out.sort_unstable();
    let mut merged: Vec<(u32, u32)> = Vec::with_capacity(out.len());
    for &(a0, b0) in out.iter() {
        match merged.last_mut() {
            Some(last) if a0 <= last.1 + 1 => last.1 = last.1.max(b0),
            _ => merged.push((a0, b0)),
        }
    }
    *out = merged;
}

/// The shape of the closed piece of the z-plane being sliced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ZRegion {
    Origin,
    Ray {
        theta: f64,
    },
    Wedge {
        lo: f64,
        width: f64,
    },
    /// Sector of width at least `pi` (possibly the whole plane).
    Wide(SectorSpec),
}

impl ZRegion {
    /// `None` stands for the vertex alone.
    pub fn from_sector(s: Option<&SectorSpec>) -> ZRegion {
        match s {
            None => ZRegion::Origin,
            Some(s) if s.width == 0.0 => ZRegion::Ray { theta: s.lo },
            Some(s) if s.width < std::f64::consts::PI => ZRegion::Wedge {
                lo: s.lo,
                width: s.width,
            },
            Some(s) => ZRegion::Wide(*s),
        }
    }

    /// Box extent covering the disk of radius `r` around the vertex.
    pub fn extent_for_radius(&self, r: f64) -> f64 {
        match *self {
            ZRegion::Wedge { width, .. } => r / width.sin(),
            _ => r,
        }
    }
}

/// Coefficients of `t - Re(zw) - Re(c z²)/2` along `z = z0 + u p`.
fn row_coeffs(c: Complex64, w: Complex64, t: f64, z0: Complex64, p: Complex64) -> (f64, f64, f64) {
    let a = -0.5 * (c * p * p).re;
    let b = -((p * w).re + (c * z0 * p).re);
    let c0 = t - (z0 * w).re - 0.5 * (c * z0 * z0).re;
    (a, b, c0)
}

/// Occupancy of the slice at `(w, t)` on an `n x n` cell lattice of the given extent.
pub fn region_slice(
    c: Complex64,
    region: &ZRegion,
    w: Complex64,
    t: f64,
    extent: f64,
    n: usize,
) -> GridField {
    let mut buf = Vec::new();
    match *region {
        ZRegion::Origin => GridField {
            frame: Frame {
                origin: Complex64::new(0.0, 0.0),
                p: Complex64::new(1.0, 0.0),
                q: Complex64::new(0.0, 1.0),
                h: 0.0,
            },
            extent: 0.0,
            ncols: 1,
            rows: vec![if t >= 0.0 { vec![(0, 0)] } else { Vec::new() }],
            open: Edges::NONE,
        },
        ZRegion::Ray { theta } => {
            let p = Complex64::from_polar(1.0, theta);
            let h = extent / n as f64;
            let (a, b, c0) = row_coeffs(c, w, t, Complex64::new(0.0, 0.0), p);
            quad_runs(a, b, c0, h, n, &mut buf);
            GridField {
                frame: Frame {
                    origin: Complex64::new(0.0, 0.0),
                    p,
                    q: p * Complex64::new(0.0, 1.0),
                    h,
                },
                extent,
                ncols: n + 1,
                rows: vec![buf],
                open: Edges {
                    right: true,
                    ..Edges::NONE
                },
            }
        }
        ZRegion::Wedge { lo, width } => {
            let p = Complex64::from_polar(1.0, lo);
            let q = Complex64::from_polar(1.0, lo + width);
            let h = extent / n as f64;
            let rows = (0..=n)
                .map(|j| {
                    let z0 = q * (j as f64 * h);
                    let (a, b, c0) = row_coeffs(c, w, t, z0, p);
                    quad_runs(a, b, c0, h, n, &mut buf);
                    buf.clone()
                })
                .collect();
            GridField {
                frame: Frame {
                    origin: Complex64::new(0.0, 0.0),
                    p,
                    q,
                    h,
                },
                extent,
                ncols: n + 1,
                rows,
                open: Edges {
                    right: true,
                    top: true,
                    ..Edges::NONE
                },
            }
        }
        ZRegion::Wide(s) => {
            let n = n + n % 2;
            let h = 2.0 * extent / n as f64;
            let origin = Complex64::new(-extent, -extent);
            let p = Complex64::new(1.0, 0.0);
            let q = Complex64::new(0.0, 1.0);
            let frame = Frame { origin, p, q, h };
            let full = s.width >= std::f64::consts::TAU;
            let rows = (0..=n)
                .map(|j| {
                    let z0 = origin + q * (j as f64 * h);
                    let (a, b, c0) = row_coeffs(c, w, t, z0, p);
                    quad_runs(a, b, c0, h, n, &mut buf);
                    if full {
                        return buf.clone();
                    }
                    let mut mask = vec![false; n + 1];
                    for &(a0, b0) in &buf {
                        for (i, m) in mask
                            .iter_mut()
                            .enumerate()
                            .take(b0 as usize + 1)
                            .skip(a0 as usize)
                        {
                            *m = s.contains_point(frame.node(i, j), 1e-12);
                        }
                    }
                    runs_from_bools(&mask)
                })
                .collect();
            GridField {
                frame,
                extent,
                ncols: n + 1,
                rows,
                open: Edges::ALL,
            }
        }
    }
}
