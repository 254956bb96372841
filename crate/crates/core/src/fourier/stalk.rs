//! Stalkwise incarnation of the exact sequences describing the transform.
//!
//! At a point `p = (w, t)` every transformed building block has a stalk of
//! dimension 0 or 1, so each sheaf map between direct sums becomes a matrix:
//! the relevant block matrix restricted to rows and columns whose stalks are
//! nonzero. The kernels of
//!
//! * `H₊: (a₁, a₂) ↦ σ₁a₁ - a₂` on `S1 ⊕ S2 → S12`,
//! * `H₋: (a₄, a₃) ↦ a₄ - σ₃a₃` on `S4 ⊕ S3 → S34`,
//! * `L:  (a₄₁, a₂₃) ↦ a₄₁ - σ₄σ₃a₂₃` on `S41 ⊕ S23 → {0}`
//!
//! fit into a triangle `ker H₊ ⊕ ker H₋ → ker L → (LF)_p → +1` whose first
//! map is `(k₊, k₋) ↦ (k₊₁, σ₂k₊₂) - (σ₄k₋₄, k₋₃)`. The stalk of the
//! transform is the cokernel of that map.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blockdata::{BlockMatrix, BlockStructure, StokesData};
use crate::error::{Error, Result};
use crate::expmodel::{stalk_dim, StalkPoint};
use crate::linalg::{self, CMat};

use super::table::{SourceId, TransformTable};

/// Finite complex `0 → V₀ → V₁ → … → Vₙ → 0` of stalk spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StalkComplex {
    pub name: String,
    pub spaces: Vec<usize>,
    #[serde(skip)]
    pub maps: Vec<CMat>,
}

impl StalkComplex {
    pub fn new(name: impl Into<String>, spaces: Vec<usize>, maps: Vec<CMat>) -> Result<Self> {
        let name = name.into();
        if maps.len() + 1 != spaces.len() {
            return Err(Error::ShapeMismatch(format!(
                "{name}: {} spaces, {} maps",
                spaces.len(),
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.shape() != (spaces[i + 1], spaces[i]) {
                return Err(Error::ShapeMismatch(format!(
                    "{name}: map {i} is {:?}, expected {:?}",
                    m.shape(),
                    (spaces[i + 1], spaces[i])
                )));
            }
        }
        Ok(Self { name, spaces, maps })
    }

    /// Largest entry of any composite of two consecutive maps.
    pub fn composition_defect(&self) -> f64 {
        self.maps
            .windows(2)
            .map(|w| linalg::max_abs(&(&w[1] * &w[0])))
            .fold(0.0, f64::max)
    }

    /// Dimension of the homology at every spot, including the ends.
    pub fn homology(&self, tol: f64) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(|m| linalg::rank(m, tol)).collect();
        (0..self.spaces.len())
            .map(|i| {
                let out = if i < ranks.len() { ranks[i] } else { 0 };
                let inc = if i > 0 { ranks[i - 1] } else { 0 };
                (self.spaces[i] - out).saturating_sub(inc)
            })
            .collect()
    }

    pub fn is_exact(&self, tol: f64) -> bool {
        let scale = self.maps.iter().map(linalg::max_abs).fold(1.0, f64::max);
        self.composition_defect() <= tol * scale * scale
            && self.homology(tol).iter().all(|&h| h == 0)
    }
}

/// Everything computed at one stalk point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StalkSequences {
    pub point: StalkPoint,
    pub complexes: Vec<StalkComplex>,
    /// `dim ker H₊`, `dim ker H₋`, `dim ker L`.
    pub kernel_dims: [usize; 3],
    pub connecting_rank: usize,
    pub lf_dim: usize,
    /// Largest deviation from commutativity of the squares relating
    /// `H₊`, `H₋` to `L` (bottom maps `σ₁⁻¹` and `σ₄`).
    pub commutation_defect: f64,
}

impl StalkSequences {
    pub fn connecting_injective(&self) -> bool {
        self.connecting_rank == self.kernel_dims[0] + self.kernel_dims[1]
    }

    pub fn all_exact(&self, tol: f64) -> bool {
        self.complexes.iter().all(|c| c.is_exact(tol))
    }
}

/// Global indices whose building block at `src` has a nonzero stalk.
fn active(table: &TransformTable, s: &BlockStructure, src: SourceId, p: &StalkPoint) -> Vec<usize> {
    (0..s.n_blocks())
        .filter(|&j| stalk_dim(table.get(src, j), p) == 1)
        .flat_map(|j| s.range(j))
        .collect()
}

fn identity_sel(rows: &[usize], cols: &[usize]) -> CMat {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        if rows[i] == cols[j] {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

struct Active {
    s1: Vec<usize>,
    s2: Vec<usize>,
    s3: Vec<usize>,
    s4: Vec<usize>,
    s12: Vec<usize>,
    s23: Vec<usize>,
    s34: Vec<usize>,
    s41: Vec<usize>,
    o: Vec<usize>,
}

struct Maps {
    h_plus: CMat,
    h_minus: CMat,
    l: CMat,
    iota_plus: CMat,
    iota_minus: CMat,
    bottom_plus: CMat,
    bottom_minus: CMat,
}

fn check_table(d: &StokesData, table: &TransformTable) -> Result<()> {
    if table.params != d.params().values() {
        return Err(Error::ShapeMismatch(
            "table parameters differ from the data".into(),
        ));
    }
    Ok(())
}

fn maps_at(d: &StokesData, table: &TransformTable, p: &StalkPoint) -> Result<(Active, Maps)> {
    check_table(d, table)?;
    let s = d.structure();
    let a = Active {
        s1: active(table, s, SourceId::S1, p),
        s2: active(table, s, SourceId::S2, p),
        s3: active(table, s, SourceId::S3, p),
        s4: active(table, s, SourceId::S4, p),
        s12: active(table, s, SourceId::S12, p),
        s23: active(table, s, SourceId::S23, p),
        s34: active(table, s, SourceId::S34, p),
        s41: active(table, s, SourceId::S41, p),
        o: active(table, s, SourceId::Origin, p),
    };
    let sig = |k: usize| d.sigma(k).entries();
    let s43 = sig(4) * sig(3);
    let s1_inv = linalg::inverse(sig(1)).ok_or(Error::SingularDiagonalBlock(0))?;
    let sel = linalg::select;

    let h_plus = linalg::hstack(&[&sel(sig(1), &a.s12, &a.s1), &(-identity_sel(&a.s12, &a.s2))]);
    let h_minus = linalg::hstack(&[&identity_sel(&a.s34, &a.s4), &(-sel(sig(3), &a.s34, &a.s3))]);
    let l = linalg::hstack(&[&identity_sel(&a.o, &a.s41), &(-sel(&s43, &a.o, &a.s23))]);
    let iota_plus = linalg::block_diag(&identity_sel(&a.s41, &a.s1), &sel(sig(2), &a.s23, &a.s2));
    let iota_minus = linalg::block_diag(&sel(sig(4), &a.s41, &a.s4), &identity_sel(&a.s23, &a.s3));
    let bottom_plus = sel(&s1_inv, &a.o, &a.s12);
    let bottom_minus = sel(sig(4), &a.o, &a.s34);
    Ok((
        a,
        Maps {
            h_plus,
            h_minus,
            l,
            iota_plus,
            iota_minus,
            bottom_plus,
            bottom_minus,
        },
    ))
}

fn kernel_complex(name: &str, map: &CMat, tol: f64) -> Result<(StalkComplex, CMat)> {
    let k = linalg::nullspace(map, tol);
    let c = StalkComplex::new(
        name,
        vec![k.ncols(), map.ncols(), map.nrows()],
        vec![k.clone(), map.clone()],
    )?;
    Ok((c, k))
}

/// Section `y ↦ (f y, g y)` of a kernel, as the first map of a short sequence.
fn section_complex(name: String, f: CMat, g: CMat, map: &CMat) -> Result<StalkComplex> {
    let sec = linalg::vstack(&[&f, &g]);
    StalkComplex::new(
        name,
        vec![sec.ncols(), map.ncols(), map.nrows()],
        vec![sec, map.clone()],
    )
}

/// Builds the stalk complexes at `p`.
///
/// Besides the three kernel sequences and the triangle, the result contains
/// the section sequences of every sector `Ŝ_k` containing `w`: on `Ŝ_1`
/// the kernels are parametrized by `(1, σ₁)` and `(1, σ₂σ₁)`, on `Ŝ_2` by
/// `(σ₁⁻¹, 1)` and `(σ₁⁻¹σ₂⁻¹, 1)`, on `Ŝ_3` by `(σ₃, 1)` and `(σ₄σ₃, 1)`,
/// on `Ŝ_4` by `(1, σ₃⁻¹)` and `(1, σ₃⁻¹σ₄⁻¹)`.
pub fn build_stalk_sequences(
    d: &StokesData,
    table: &TransformTable,
    p: &StalkPoint,
    tol: f64,
) -> Result<StalkSequences> {
    let (a, m) = maps_at(d, table, p)?;
    let (cp, kp) = kernel_complex("ker(sigma_1 - 1)", &m.h_plus, tol)?;
    let (cm, km) = kernel_complex("ker(1 - sigma_3)", &m.h_minus, tol)?;
    let (cl, kl) = kernel_complex("ker(1 - sigma_4 sigma_3)", &m.l, tol)?;

    let conn = linalg::hstack(&[&(&m.iota_plus * &kp), &(-(&m.iota_minus * &km))]);
    let conn_rank = linalg::rank(&conn, tol);
    // coordinates in the orthonormal kernel basis of L
    let conn_k = kl.adjoint() * &conn;
    let quotient = linalg::cokernel_basis(&conn_k, tol).adjoint();
    let lf_dim = quotient.nrows();
    let tri = StalkComplex::new(
        "triangle",
        vec![conn.ncols(), kl.ncols(), lf_dim],
        vec![conn_k.clone(), quotient],
    )?;
    let mut complexes = vec![cp, cm, cl, tri];
    // the connecting map must land in ker L
    let landing = linalg::max_abs(&(&m.l * &conn));

    let com_plus = linalg::max_abs_diff(&(&m.l * &m.iota_plus), &(&m.bottom_plus * &m.h_plus));
    let com_minus = linalg::max_abs_diff(&(&m.l * &m.iota_minus), &(&m.bottom_minus * &m.h_minus));

    let sig = |k: usize| d.sigma(k).entries().clone();
    let inv = |x: &CMat| linalg::inverse(x).expect("valid data has invertible sigmas");
    let sel = linalg::select;
    let w_sec = table.w_sectors();
    for (k, sector) in w_sec.iter().enumerate() {
        if !sector.contains_point(p.w, 1e-12) {
            continue;
        }
        let (plus_or_minus, kernel_src, kernel_map, l_src, lf, lg) = match k {
            0 => {
                let s21 = sig(2) * sig(1);
                (
                    (identity_sel(&a.s1, &a.s1), sel(&sig(1), &a.s2, &a.s1)),
                    "ker(sigma_1 - 1)",
                    &m.h_plus,
                    &a.s41,
                    identity_sel(&a.s41, &a.s41),
                    sel(&s21, &a.s23, &a.s41),
                )
            }
            1 => {
                let s21i = inv(&(sig(2) * sig(1)));
                (
                    (sel(&inv(&sig(1)), &a.s1, &a.s2), identity_sel(&a.s2, &a.s2)),
                    "ker(sigma_1 - 1)",
                    &m.h_plus,
                    &a.s23,
                    sel(&s21i, &a.s41, &a.s23),
                    identity_sel(&a.s23, &a.s23),
                )
            }
            2 => {
                let s43 = sig(4) * sig(3);
                (
                    (sel(&sig(3), &a.s4, &a.s3), identity_sel(&a.s3, &a.s3)),
                    "ker(1 - sigma_3)",
                    &m.h_minus,
                    &a.s23,
                    sel(&s43, &a.s41, &a.s23),
                    identity_sel(&a.s23, &a.s23),
                )
            }
            _ => {
                let s43i = inv(&(sig(4) * sig(3)));
                (
                    (identity_sel(&a.s4, &a.s4), sel(&inv(&sig(3)), &a.s3, &a.s4)),
                    "ker(1 - sigma_3)",
                    &m.h_minus,
                    &a.s41,
                    identity_sel(&a.s41, &a.s41),
                    sel(&s43i, &a.s23, &a.s41),
                )
            }
        };
        let _ = l_src;
        let (f, g) = plus_or_minus;
        complexes.push(section_complex(
            format!("section of {kernel_src} on sector {}", k + 1),
            f,
            g,
            kernel_map,
        )?);
        complexes.push(section_complex(
            format!("section of ker(1 - sigma_4 sigma_3) on sector {}", k + 1),
            lf,
            lg,
            &m.l,
        )?);
    }

    Ok(StalkSequences {
        point: *p,
        complexes,
        kernel_dims: [kp.ncols(), km.ncols(), kl.ncols()],
        connecting_rank: conn_rank,
        lf_dim,
        commutation_defect: com_plus.max(com_minus).max(landing),
    })
}

/// Dimension of the stalk of the transform at `p`, for `p` in `Ŝ_k`.
pub fn lf_stalk_dim(
    d: &StokesData,
    table: &TransformTable,
    p: &StalkPoint,
    k: usize,
    tol: f64,
) -> Result<usize> {
    check_table(d, table)?;
    if !(1..=4).contains(&k) || !table.w_sectors()[k - 1].contains_point(p.w, 1e-12) {
        return Err(Error::OutsideSector(k));
    }
    Ok(build_stalk_sequences(d, table, p, tol)?.lf_dim)
}

/// Probe points on the half-line `Ŝ_k ∩ Ŝ_{k+1}` with `t` large enough for
/// every one-sided stalk to be nonzero and every interval stalk to vanish.
pub fn gluing_probes(table: &TransformTable, k: usize, count: usize) -> Vec<StalkPoint> {
    let th = table.w_boundary_direction(k);
    let far = Complex64::from_polar(2.0, th);
    let mut q = 0.0f64;
    let mut ph = 0.0f64;
    for c in &table.params {
        q = q.max((far * far / (2.0 * c)).re.abs());
    }
    for (_, _, e) in table.iter() {
        for prof in e.profiles() {
            ph = ph.max(prof.eval(far).abs());
        }
    }
    let t = 10.0 * (1.0 + q + ph);
    (0..count)
        .map(|i| StalkPoint {
            w: Complex64::from_polar(2.0 * (i + 1) as f64 / count as f64, th),
            t,
        })
        .collect()
}

/// Trivialization `α̂_k` of `ker L` at a full stalk, as a matrix on `(a₄₁, a₂₃)`.
fn trivialization(d: &StokesData, k: usize) -> Result<CMat> {
    let r = d.structure().total();
    let id = linalg::identity(r);
    let z = CMat::zeros(r, r);
    let inv = |m: &BlockMatrix| linalg::inverse(m.entries()).ok_or(Error::SingularDiagonalBlock(0));
    Ok(match k {
        1 => linalg::hstack(&[&id, &z]),
        2 => linalg::hstack(&[&z, &inv(d.sigma(2))?]),
        3 => linalg::hstack(&[&z, &id]),
        _ => linalg::hstack(&[&inv(d.sigma(4))?, &z]),
    })
}

/// Change of trivialization of the transform across `Ŝ_k ∩ Ŝ_{k+1}`.
///
/// On `Ŝ_k` the cokernel is identified with `k^r` through the component of
/// `ker L` in the piece the sector's source maps to (`S41` via `1` for
/// `k = 1`, `S23` via `σ₂` for `k = 2`, `S23` via `1` for `k = 3`, `S41` via
/// `σ₄` for `k = 4`). The result `α̂_{k+1} ∘ α̂_k⁻¹` is evaluated at every
/// probe; probes must agree.
pub fn recover_gluing(
    d: &StokesData,
    table: &TransformTable,
    k: usize,
    probes: &[StalkPoint],
    tol: f64,
) -> Result<BlockMatrix> {
    check_table(d, table)?;
    let r = d.structure().total();
    let a_k = trivialization(d, k)?;
    let a_next = trivialization(d, k % 4 + 1)?;
    let mut result: Option<CMat> = None;
    let mut worst = 0.0f64;
    for (i, p) in probes.iter().enumerate() {
        let (a, m) = maps_at(d, table, p)?;
        if a.s41.len() != r || a.s23.len() != r || a.o.len() != r {
            return Err(Error::StalkNotFull(i));
        }
        let seq = build_stalk_sequences(d, table, p, tol)?;
        if seq.connecting_rank != 0 || seq.lf_dim != r {
            return Err(Error::StalkNotFull(i));
        }
        let kl = linalg::nullspace(&m.l, tol);
        let src = &a_k * &kl;
        let src_inv = linalg::inverse(&src).ok_or(Error::StalkNotFull(i))?;
        let sig = &a_next * &kl * src_inv;
        match &result {
            None => result = Some(sig),
            Some(first) => {
                let dev = linalg::max_abs_diff(first, &sig) / linalg::max_abs(first).max(1.0);
                worst = worst.max(dev);
            }
        }
    }
    if worst > tol.max(1e-9) {
        return Err(Error::Inconsistent(worst));
    }
    let m = result.ok_or(Error::StalkNotFull(0))?;
    BlockMatrix::new(d.structure().clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockdata::random_stokes_data;
    use crate::fourier::table::{transform_table_aligned_set, transform_table_heart};
    use crate::geometry::{ComplexParam, Direction, GaussianParamSet, DEFAULT_EPS};
    use crate::linalg::real_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-9;

    fn set(v: &[(f64, f64)]) -> GaussianParamSet {
        GaussianParamSet::new(
            v.iter()
                .map(|&(a, b)| (ComplexParam::new(a, b).unwrap(), 1))
                .collect(),
            DEFAULT_EPS,
        )
        .unwrap()
    }

    fn example() -> StokesData {
        StokesData::new(
            set(&[(1.0, 0.0), (2.0, 0.0)]),
            Direction::new(0.0),
            [
                real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]),
                linalg::identity(2),
                real_matrix(&[&[1.0, -1.0], &[0.0, 1.0]]),
                linalg::identity(2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lf_dim_examples() {
        let d = example();
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        let w = Complex64::from_polar(2.0, -3.0 * PI / 4.0);
        assert_eq!(
            lf_stalk_dim(&d, &t, &StalkPoint { w, t: 10.0 }, 1, TOL).unwrap(),
            2
        );
        assert_eq!(
            lf_stalk_dim(&d, &t, &StalkPoint { w, t: -10.0 }, 1, TOL).unwrap(),
            0
        );
        assert!(matches!(
            lf_stalk_dim(&d, &t, &StalkPoint { w, t: 0.0 }, 3, TOL),
            Err(Error::OutsideSector(3))
        ));
    }

    #[test]
    fn empty_stalks() {
        let d = example();
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        let seq = build_stalk_sequences(&d, &t, &StalkPoint::new(-1.0, -1.0, -100.0), TOL).unwrap();
        assert!(seq
            .complexes
            .iter()
            .all(|c| c.spaces.iter().all(|&n| n == 0)));
    }

    #[test]
    fn single_param_indicator() {
        let d = StokesData::identity(set(&[(1.0, 0.0)]), Direction::new(0.0));
        let tb = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let w = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let t = rng.gen_range(-4.0..4.0);
            let thr = -(w * w / 2.0).re;
            if (t - thr).abs() < 1e-6 {
                continue;
            }
            let k = (0..4)
                .find(|&k| tb.w_sectors()[k].contains_point(w, 0.0))
                .unwrap()
                + 1;
            let got = lf_stalk_dim(&d, &tb, &StalkPoint { w, t }, k, TOL).unwrap();
            assert_eq!(got, usize::from(t >= thr), "w={w} t={t}");
        }
    }

    fn check_random_point(d: &StokesData, tb: &TransformTable, p: &StalkPoint) {
        let seq = build_stalk_sequences(d, tb, p, TOL).unwrap();
        for c in &seq.complexes {
            assert!(
                c.is_exact(1e-8),
                "{} not exact at {p:?}: {:?} {:?}",
                c.name,
                c.spaces,
                c.homology(1e-8)
            );
        }
        assert!(seq.connecting_injective(), "{p:?}");
        assert!(
            seq.commutation_defect < 1e-8,
            "{p:?} {}",
            seq.commutation_defect
        );
        let want: usize = tb
            .params
            .iter()
            .enumerate()
            .map(|(j, c)| d.params().rank(j) * usize::from(p.t + (p.w * p.w / (2.0 * c)).re >= 0.0))
            .sum();
        assert_eq!(seq.lf_dim, want, "{p:?}");
    }

    #[test]
    fn aligned_pipeline_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a: f64 = 0.5;
        let c = set(&[
            (a.cos(), a.sin()),
            (2.0 * a.cos(), 2.0 * a.sin()),
            (3.5 * a.cos(), 3.5 * a.sin()),
        ]);
        let d = random_stokes_data(&c, Direction::new(-a / 2.0), &mut rng, DEFAULT_EPS).unwrap();
        let tb = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        for _ in 0..400 {
            let w = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let t = rng.gen_range(-4.0..4.0);
            let near = tb
                .iter()
                .any(|(_, _, e)| e.thresholds(w).iter().any(|&x| (x - t).abs() < 1e-6));
            if near {
                continue;
            }
            check_random_point(&d, &tb, &StalkPoint { w, t });
        }
    }

    #[test]
    fn heart_pipeline_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (c, dd) in [
            ((1.0, 0.0), (2.0, 0.0)),
            ((1.0, 1.0), (2.0, 3.0)),
            ((1.0, 0.0), (3.0, 0.5)),
        ] {
            let ps = set(&[c, dd]);
            let th = Direction::new(-ps.param(0).arg() / 2.0);
            let d = random_stokes_data(&ps, th, &mut rng, DEFAULT_EPS).unwrap();
            let tb = transform_table_heart(ps.param(0), ps.param(1), DEFAULT_EPS).unwrap();
            for _ in 0..400 {
                let w = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let t = rng.gen_range(-4.0..4.0);
                let near = tb
                    .iter()
                    .any(|(_, _, e)| e.thresholds(w).iter().any(|&x| (x - t).abs() < 1e-6));
                if near {
                    continue;
                }
                check_random_point(&d, &tb, &StalkPoint { w, t });
            }
        }
    }

    #[test]
    fn gluing_identity_and_example() {
        let d = StokesData::identity(set(&[(1.0, 0.0), (2.0, 0.0)]), Direction::new(0.0));
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        for k in 1..=4 {
            let g = recover_gluing(&d, &t, k, &gluing_probes(&t, k, 5), TOL).unwrap();
            assert!(linalg::max_abs_diff(g.entries(), &linalg::identity(2)) < 1e-12);
        }
        let d = example();
        let g = recover_gluing(&d, &t, 1, &gluing_probes(&t, 1, 5), TOL).unwrap();
        assert!(
            linalg::max_abs_diff(g.entries(), &real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]])) < 1e-12
        );
    }

    #[test]
    fn gluing_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = GaussianParamSet::new(
            vec![
                (ComplexParam::new(1.0, 0.0).unwrap(), 2),
                (ComplexParam::new(2.0, 0.0).unwrap(), 1),
            ],
            DEFAULT_EPS,
        )
        .unwrap();
        let d = random_stokes_data(&c, Direction::new(0.0), &mut rng, DEFAULT_EPS).unwrap();
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        for k in 1..=4 {
            let g = recover_gluing(&d, &t, k, &gluing_probes(&t, k, 7), TOL).unwrap();
            assert!(
                linalg::max_abs_diff(g.entries(), d.sigma(k).entries()) < 1e-9,
                "k={k}"
            );
        }
    }

    #[test]
    fn low_probe_is_not_full() {
        let d = example();
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        let p = [StalkPoint::new(0.0, -1.0, -50.0)];
        assert!(matches!(
            recover_gluing(&d, &t, 1, &p, TOL),
            Err(Error::StalkNotFull(0))
        ));
    }

    #[test]
    fn minus_kernel_vanishes_on_s41() {
        let d = example();
        let t = transform_table_aligned_set(d.params(), DEFAULT_EPS).unwrap();
        for p in gluing_probes(&t, 4, 5).iter().map(|p| StalkPoint {
            t: p.t * 0.01 - 1.0,
            ..*p
        }) {
            let seq = build_stalk_sequences(&d, &t, &p, TOL).unwrap();
            assert_eq!(seq.kernel_dims[1], 0);
        }
    }
}
