//! End-to-end check of the stalk pipeline on one Stokes datum: exactness
//! of every stalk sequence at random probes in each `Ŝ_k`, the stalk
//! dimension formula, and recovery of all four gluing matrices.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blockdata::StokesData;
use crate::error::Result;
use crate::expmodel::StalkPoint;
use crate::linalg;

use super::stalk::{build_stalk_sequences, gluing_probes, recover_gluing};
use super::table::TransformTable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub tolerance: f64,
    /// Random probes per sector `Ŝ_k`.
    pub probes: usize,
    /// Probes closer than this to a threshold in `t` are redrawn.
    pub margin: f64,
    pub gluing_probes: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tolerance: 1e-8,
            probes: 200,
            margin: 1e-6,
            gluing_probes: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeFailure {
    pub sector: usize,
    pub point: StalkPoint,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub probes_checked: [usize; 4],
    pub sequences_checked: usize,
    pub failures: Vec<ProbeFailure>,
    /// `max |σ̂_k - σ_k|` per `k`, `None` when recovery failed.
    pub gluing_error: [Option<f64>; 4],
    pub gluing_failures: Vec<(usize, String)>,
}

impl VerificationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.failures.is_empty()
            && self
                .gluing_error
                .iter()
                .all(|e| e.is_some_and(|e| e <= tol))
    }
}

/// `Σ_c r_c [t + Re(w²/2c) >= 0]`.
pub fn expected_stalk_dim(d: &StokesData, p: &StalkPoint) -> usize {
    d.params()
        .params()
        .iter()
        .map(|(c, r)| r * usize::from(p.t + (p.w * p.w / (2.0 * c.value())).re >= 0.0))
        .sum()
}

fn near_threshold(d: &StokesData, table: &TransformTable, p: &StalkPoint, margin: f64) -> bool {
    let entry = table
        .iter()
        .any(|(_, _, e)| e.thresholds(p.w).iter().any(|&x| (x - p.t).abs() < margin));
    let lf = d
        .params()
        .values()
        .iter()
        .any(|c| (p.t + (p.w * p.w / (2.0 * c)).re).abs() < margin);
    entry || lf
}

/// Random probes in `Ŝ_k` with `|w| <= 3`, `|t| <= 4`, away from thresholds.
pub fn random_probes<R: Rng>(
    d: &StokesData,
    table: &TransformTable,
    k: usize,
    count: usize,
    margin: f64,
    rng: &mut R,
) -> Vec<StalkPoint> {
    let s = table.w_sectors()[k - 1];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let th = s.lo + rng.gen_range(0.0..=1.0) * s.width;
        let w = Complex64::from_polar(rng.gen_range(0.01..3.0), th);
        let p = StalkPoint {
            w,
            t: rng.gen_range(-4.0..4.0),
        };
        if s.contains_point(w, 1e-12) && !near_threshold(d, table, &p, margin) {
            out.push(p);
        }
    }
    out
}

/// Runs every check and collects failures instead of stopping at the first.
pub fn verify_data<R: Rng>(
    d: &StokesData,
    table: &TransformTable,
    cfg: &VerifyConfig,
    rng: &mut R,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::default();
    for k in 1..=4 {
        for p in random_probes(d, table, k, cfg.probes, cfg.margin, rng) {
            rep.probes_checked[k - 1] += 1;
            let seq = build_stalk_sequences(d, table, &p, cfg.tolerance)?;
            rep.sequences_checked += seq.complexes.len();
            let mut fail = |reason: String| {
                rep.failures.push(ProbeFailure {
                    sector: k,
                    point: p,
                    reason,
                })
            };
            if let Some(c) = seq.complexes.iter().find(|c| !c.is_exact(cfg.tolerance)) {
                fail(format!(
                    "{} not exact: composition defect {:e}, homology {:?}",
                    c.name,
                    c.composition_defect(),
                    c.homology(cfg.tolerance)
                ));
            } else if !seq.connecting_injective() {
                fail("connecting map not injective".into());
            } else if seq.commutation_defect > cfg.tolerance {
                fail(format!(
                    "squares commute only up to {:e}",
                    seq.commutation_defect
                ));
            } else {
                let want = expected_stalk_dim(d, &p);
                if seq.lf_dim != want {
                    fail(format!("stalk dimension {} != {}", seq.lf_dim, want));
                }
            }
        }
    }
    for k in 1..=4 {
        match recover_gluing(
            d,
            table,
            k,
            &gluing_probes(table, k, cfg.gluing_probes),
            cfg.tolerance,
        ) {
            Ok(g) => {
                rep.gluing_error[k - 1] =
                    Some(linalg::max_abs_diff(g.entries(), d.sigma(k).entries()))
            }
            Err(e) => rep.gluing_failures.push((k, e.to_string())),
        }
    }
    Ok(rep)
}
