//! JSON persistence of Stokes data and run settings.

use serde::{Deserialize, Serialize};

use crate::blockdata::StokesData;
use crate::error::{Error, Result};
use crate::geometry::{ComplexParam, GaussianParamSet, DEFAULT_EPS};
use crate::linalg::CMat;
use num_complex::Complex64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamEntry {
    pub re: f64,
    pub im: f64,
    pub rank: usize,
}

/// On-disk form of [`StokesData`]. Matrices are row-major lists of rows,
/// each entry an `[re, im]` pair. Floats are written in the shortest form
/// that parses back to the same bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesDataFile {
    pub schema_version: u32,
    pub parameters: Vec<ParamEntry>,
    pub generic_direction: f64,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl StokesDataFile {
    pub fn from_data(d: &StokesData) -> Self {
        let parameters = d
            .params()
            .params()
            .iter()
            .map(|(c, r)| ParamEntry {
                re: c.re(),
                im: c.im(),
                rank: *r,
            })
            .collect();
        let matrices = d
            .sigmas()
            .iter()
            .map(|m| {
                let e = m.entries();
                (0..e.nrows())
                    .map(|i| {
                        (0..e.ncols())
                            .map(|j| [e[(i, j)].re, e[(i, j)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        StokesDataFile {
            schema_version: SCHEMA_VERSION,
            parameters,
            generic_direction: d.theta0_raw(),
            matrices,
        }
    }

    /// Rebuilds the data; shapes are checked, axioms are not.
    pub fn to_data(&self) -> Result<StokesData> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.matrices.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 matrices, found {}",
                self.matrices.len()
            )));
        }
        let params = self
            .parameters
            .iter()
            .map(|p| Ok((ComplexParam::new(p.re, p.im)?, p.rank)))
            .collect::<Result<Vec<_>>>()?;
        let set = GaussianParamSet::new(params, DEFAULT_EPS)?;
        let n = set.total_rank();
        let mut sig = Vec::with_capacity(4);
        for (k, m) in self.matrices.iter().enumerate() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {} is not {n}x{n}",
                    k + 1
                )));
            }
            sig.push(CMat::from_fn(n, n, |i, j| {
                Complex64::new(m[i][j][0], m[i][j][1])
            }));
        }
        let sig: [CMat; 4] = sig.try_into().expect("four matrices");
        StokesData::new_raw(set, self.generic_direction, sig)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn read_data(path: &std::path::Path) -> Result<StokesData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    StokesDataFile::parse(&text)?.to_data()
}

pub fn write_data(path: &std::path::Path, d: &StokesData) -> std::io::Result<()> {
    std::fs::write(path, StokesDataFile::from_data(d).to_json() + "\n")
}

/// Numeric settings shared by the commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub tolerance: f64,
    pub grid_resolution: usize,
    pub probe_count: usize,
    pub delta_band: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: 1e-8,
            grid_resolution: crate::oracle::DEFAULT_RESOLUTION,
            probe_count: 200,
            delta_band: crate::oracle::DEFAULT_DELTA,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        let ok = self.tolerance > 0.0
            && self.grid_resolution > 0
            && self.probe_count > 0
            && self.delta_band > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Parse("run settings must be positive".into()))
        }
    }
}
