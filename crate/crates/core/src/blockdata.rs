//! Block matrices and the category of Stokes data.
//!
//! Matrices are stored globally (`r x r`) together with a [`BlockStructure`]
//! listing the ranks in parameter order. Triangularity is always measured
//! against the numbering of the parameters at the generic direction, so the
//! storage order of the parameters is arbitrary.

use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    all_stokes_directions, cos_range, is_generic, numbering, Direction, GaussianParamSet,
    SectorSpec,
};
use crate::linalg::{self, c, CMat};

/// Diagonal blocks with a larger condition number count as singular.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    sizes: Vec<usize>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::ShapeMismatch(format!(
                "invalid block sizes {sizes:?}"
            )));
        }
        Ok(Self { sizes })
    }

    pub fn of(params: &GaussianParamSet) -> Self {
        Self {
            sizes: params.ranks(),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn offset(&self, j: usize) -> usize {
        self.sizes[..j].iter().sum()
    }

    pub fn range(&self, j: usize) -> Range<usize> {
        let o = self.offset(j);
        o..o + self.sizes[j]
    }

    /// Block containing the scalar index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (j, s) in self.sizes.iter().enumerate() {
            acc += s;
            if i < acc {
                return j;
            }
        }
        panic!("index {i} out of range")
    }

    /// Scalar indices listed block by block in the given block order.
    pub fn scalar_order(&self, block_order: &[usize]) -> Vec<usize> {
        block_order.iter().flat_map(|&j| self.range(j)).collect()
    }

    pub fn permuted(&self, block_order: &[usize]) -> Self {
        Self {
            sizes: block_order.iter().map(|&j| self.sizes[j]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    structure: BlockStructure,
    entries: CMat,
}

impl BlockMatrix {
    pub fn new(structure: BlockStructure, entries: CMat) -> Result<Self> {
        let r = structure.total();
        if entries.shape() != (r, r) {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, block structure needs {r}x{r}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { structure, entries })
    }

    pub fn identity(structure: &BlockStructure) -> Self {
        let r = structure.total();
        Self {
            structure: structure.clone(),
            entries: linalg::identity(r),
        }
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn block(&self, j: usize, k: usize) -> CMat {
        let (rj, rk) = (self.structure.range(j), self.structure.range(k));
        self.entries
            .view((rj.start, rk.start), (rj.len(), rk.len()))
            .into_owned()
    }

    pub fn set_block(&mut self, j: usize, k: usize, value: &CMat) {
        let (rj, rk) = (self.structure.range(j), self.structure.range(k));
        self.entries
            .view_mut((rj.start, rk.start), (rj.len(), rk.len()))
            .copy_from(value);
    }

    pub fn mul(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if self.structure != other.structure {
            return Err(Error::ShapeMismatch("block structures differ".into()));
        }
        Ok(Self {
            structure: self.structure.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    pub fn inverse(&self) -> Option<BlockMatrix> {
        linalg::inverse(&self.entries).map(|e| Self {
            structure: self.structure.clone(),
            entries: e,
        })
    }

    pub fn inf_norm(&self) -> f64 {
        linalg::inf_norm(&self.entries)
    }

    /// Rearranges the blocks so that new block `i` is old block `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let idx = self.structure.scalar_order(order);
        Self {
            structure: self.structure.permuted(order),
            entries: linalg::select(&self.entries, &idx, &idx),
        }
    }

    /// Inverse of [`BlockMatrix::permuted`].
    pub fn unpermuted(&self, order: &[usize]) -> Self {
        let mut inv = vec![0; order.len()];
        for (i, &o) in order.iter().enumerate() {
            inv[o] = i;
        }
        self.permuted(&inv)
    }
}

/// Block pattern of allowed entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularMask {
    allowed: Vec<Vec<bool>>,
}

impl TriangularMask {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Self {
            allowed: (0..n)
                .map(|j| (0..n).map(|k| j == k || f(j, k)).collect())
                .collect(),
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_fn(n, |_, _| false)
    }

    /// Upper block-triangular with respect to the block order `pos`
    /// (`pos[j]` is the rank of block `j`).
    pub fn upper(pos: &[usize]) -> Self {
        Self::from_fn(pos.len(), |j, k| pos[j] <= pos[k])
    }

    pub fn lower(pos: &[usize]) -> Self {
        Self::from_fn(pos.len(), |j, k| pos[j] >= pos[k])
    }

    pub fn n(&self) -> usize {
        self.allowed.len()
    }

    pub fn allowed(&self, j: usize, k: usize) -> bool {
        self.allowed[j][k]
    }

    pub fn as_rows(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    /// Pattern of products of a matrix allowed by `self` with one allowed by `other`.
    pub fn compose(&self, other: &TriangularMask) -> TriangularMask {
        let n = self.n();
        Self {
            allowed: (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| (0..n).any(|m| self.allowed[j][m] && other.allowed[m][k]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Forbidden blocks whose largest entry exceeds `tol`, with that entry size.
    pub fn violations(&self, m: &BlockMatrix, tol: f64) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for j in 0..n {
            for k in 0..n {
                if !self.allowed[j][k] {
                    let v = linalg::max_abs(&m.block(j, k));
                    if v > tol {
                        out.push((j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// Position of each parameter in the numbering at `theta0`.
pub fn numbering_positions(
    params: &GaussianParamSet,
    theta0: Direction,
    eps: f64,
) -> Result<Vec<usize>> {
    let order = numbering(params, theta0, eps)?;
    let mut pos = vec![0; order.len()];
    for (i, &j) in order.iter().enumerate() {
        pos[j] = i;
    }
    Ok(pos)
}

/// An object of the category of Stokes data. `sigma[k - 1]` is `σ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesData {
    params: GaussianParamSet,
    theta0: f64,
    sigma: [BlockMatrix; 4],
}

impl StokesData {
    pub fn new(params: GaussianParamSet, theta0: Direction, sigma: [CMat; 4]) -> Result<Self> {
        let s = BlockStructure::of(&params);
        let [a, b, cc, d] = sigma;
        let sigma = [
            BlockMatrix::new(s.clone(), a)?,
            BlockMatrix::new(s.clone(), b)?,
            BlockMatrix::new(s.clone(), cc)?,
            BlockMatrix::new(s, d)?,
        ];
        Ok(Self {
            params,
            theta0: theta0.radians(),
            sigma,
        })
    }

    /// Like [`StokesData::new`], keeping the angle `theta0` as given.
    pub fn new_raw(params: GaussianParamSet, theta0: f64, sigma: [CMat; 4]) -> Result<Self> {
        let mut d = Self::new(params, Direction::new(theta0), sigma)?;
        d.theta0 = theta0;
        Ok(d)
    }

    pub fn identity(params: GaussianParamSet, theta0: Direction) -> Self {
        let s = BlockStructure::of(&params);
        let id = BlockMatrix::identity(&s);
        Self {
            params,
            theta0: theta0.radians(),
            sigma: [id.clone(), id.clone(), id.clone(), id],
        }
    }

    pub fn params(&self) -> &GaussianParamSet {
        &self.params
    }

    pub fn theta0(&self) -> Direction {
        Direction::new(self.theta0)
    }

    /// The generic direction as stored, without renormalization.
    pub fn theta0_raw(&self) -> f64 {
        self.theta0
    }

    pub fn structure(&self) -> &BlockStructure {
        self.sigma[0].structure()
    }

    /// `σ_k` for `k` in `1..=4`.
    pub fn sigma(&self, k: usize) -> &BlockMatrix {
        &self.sigma[k - 1]
    }

    pub fn sigmas(&self) -> &[BlockMatrix; 4] {
        &self.sigma
    }

    /// Same matrices over new parameters and raw direction.
    pub fn with_params_raw(&self, params: GaussianParamSet, theta0: f64) -> Result<Self> {
        if params.ranks() != self.params.ranks() {
            return Err(Error::ShapeMismatch("ranks differ".into()));
        }
        Ok(Self {
            params,
            theta0,
            sigma: self.sigma.clone(),
        })
    }

    pub fn with_sigma(&self, k: usize, m: CMat) -> Result<Self> {
        let mut out = self.clone();
        out.sigma[k - 1] = BlockMatrix::new(self.structure().clone(), m)?;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Genericity,
    Triangularity,
    Invertibility,
    Monodromy,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::Genericity => "genericity",
            Axiom::Triangularity => "triangularity",
            Axiom::Invertibility => "invertibility",
            Axiom::Monodromy => "monodromy",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub axiom: Axiom,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut v: Vec<Axiom> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.axiom)
            .collect();
        v.dedup();
        v
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn sigma_mask(k: usize, pos: &[usize]) -> TriangularMask {
    if k % 2 == 1 {
        TriangularMask::upper(pos)
    } else {
        TriangularMask::lower(pos)
    }
}

/// Checks the four axioms of an object of Stokes data.
pub fn validate_object(d: &StokesData, eps: f64) -> ValidationReport {
    let mut checks = Vec::new();
    let th = d.theta0();
    let generic = is_generic(th, &d.params, eps);
    checks.push(CheckOutcome {
        axiom: Axiom::Genericity,
        passed: generic,
        detail: if generic {
            format!("direction {} is generic", d.theta0)
        } else {
            format!("direction {} is a Stokes direction", d.theta0)
        },
    });

    if let Ok(pos) = numbering_positions(&d.params, th, eps) {
        for k in 1..=4 {
            let m = d.sigma(k);
            let tol = eps * m.inf_norm().max(1.0);
            let bad = sigma_mask(k, &pos).violations(m, tol);
            let shape = if k % 2 == 1 { "upper" } else { "lower" };
            checks.push(CheckOutcome {
                axiom: Axiom::Triangularity,
                passed: bad.is_empty(),
                detail: match bad.first() {
                    None => format!("sigma_{k} is {shape} block-triangular"),
                    Some((j, l, v)) => format!("sigma_{k} must be {shape} block-triangular: block ({j},{l}) has entry {v:e}"),
                },
            });
        }
    }

    let s = d.structure();
    for k in 1..=4 {
        let worst = (0..s.n_blocks())
            .map(|j| (j, linalg::condition_number(&d.sigma(k).block(j, j))))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let ok = worst.1 <= INVERTIBILITY_THRESHOLD;
        checks.push(CheckOutcome {
            axiom: Axiom::Invertibility,
            passed: ok,
            detail: if ok {
                format!("sigma_{k} diagonal blocks invertible")
            } else {
                format!(
                    "sigma_{k} diagonal block {} has condition number {:e}",
                    worst.0, worst.1
                )
            },
        });
    }

    let mono = monodromy(d).into_entries();
    let r = s.total() as f64;
    let scale: f64 = d
        .sigma
        .iter()
        .map(|m| m.inf_norm())
        .product::<f64>()
        .max(1.0);
    let dev = linalg::max_abs_diff(&mono, &linalg::identity(s.total()));
    let ok = dev <= r * r * eps * scale;
    checks.push(CheckOutcome {
        axiom: Axiom::Monodromy,
        passed: ok,
        detail: format!("max |sigma_4 sigma_3 sigma_2 sigma_1 - 1| = {dev:e}"),
    });
    ValidationReport { checks }
}

/// `σ_4 σ_3 σ_2 σ_1`.
pub fn monodromy(d: &StokesData) -> BlockMatrix {
    let e =
        d.sigma(4).entries() * d.sigma(3).entries() * d.sigma(2).entries() * d.sigma(1).entries();
    BlockMatrix::new(d.structure().clone(), e).expect("same shape")
}

/// A morphism of Stokes data, `delta[k - 1] = δ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StokesMorphism {
    source: StokesData,
    target: StokesData,
    delta: [BlockMatrix; 4],
}

impl StokesMorphism {
    pub fn new(source: StokesData, target: StokesData, delta: [CMat; 4]) -> Result<Self> {
        if source.params != target.params
            || source.theta0() != target.theta0()
            || source.structure() != target.structure()
        {
            return Err(Error::ShapeMismatch(
                "source and target differ in parameters or direction".into(),
            ));
        }
        let s = source.structure().clone();
        let [a, b, cc, d] = delta;
        let delta = [
            BlockMatrix::new(s.clone(), a)?,
            BlockMatrix::new(s.clone(), b)?,
            BlockMatrix::new(s.clone(), cc)?,
            BlockMatrix::new(s, d)?,
        ];
        Ok(Self {
            source,
            target,
            delta,
        })
    }

    pub fn identity(d: &StokesData) -> Self {
        Self::scalar(d, c(1.0, 0.0))
    }

    pub fn scalar(d: &StokesData, lambda: num_complex::Complex64) -> Self {
        let e = linalg::identity(d.structure().total()) * lambda;
        Self::new(d.clone(), d.clone(), [e.clone(), e.clone(), e.clone(), e]).expect("same shape")
    }

    pub fn source(&self) -> &StokesData {
        &self.source
    }

    pub fn target(&self) -> &StokesData {
        &self.target
    }

    pub fn delta(&self, k: usize) -> &BlockMatrix {
        &self.delta[k - 1]
    }

    /// `self ∘ first`, defined when `first.target == self.source`.
    pub fn compose(&self, first: &StokesMorphism) -> Result<StokesMorphism> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("morphisms are not composable".into()));
        }
        let delta = std::array::from_fn(|k| self.delta[k].entries() * first.delta[k].entries());
        Self::new(first.source.clone(), self.target.clone(), delta)
    }

    pub fn inverse(&self) -> Option<StokesMorphism> {
        let mut delta = Vec::with_capacity(4);
        for d in &self.delta {
            delta.push(linalg::inverse(d.entries())?);
        }
        let delta: [CMat; 4] = delta.try_into().ok()?;
        Self::new(self.target.clone(), self.source.clone(), delta).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismReport {
    pub block_diagonal: [bool; 4],
    pub intertwining: [bool; 4],
    pub defects: [f64; 4],
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.block_diagonal.iter().all(|&b| b) && self.intertwining.iter().all(|&b| b)
    }

    /// Values of `k` (1-based) whose intertwining identity fails.
    pub fn failing_k(&self) -> Vec<usize> {
        (0..4)
            .filter(|&i| !self.intertwining[i])
            .map(|i| i + 1)
            .collect()
    }
}

/// Checks block-diagonality and `σ̃_k δ_k = δ_{k+1} σ_k` for all `k`.
pub fn validate_morphism(m: &StokesMorphism, eps: f64) -> Result<MorphismReport> {
    if m.source.structure() != m.target.structure() {
        return Err(Error::ShapeMismatch("structures differ".into()));
    }
    let n = m.source.structure().n_blocks();
    let diag = TriangularMask::diagonal(n);
    let mut rep = MorphismReport {
        block_diagonal: [true; 4],
        intertwining: [true; 4],
        defects: [0.0; 4],
    };
    for k in 0..4 {
        let dk = &m.delta[k];
        rep.block_diagonal[k] = diag.violations(dk, eps * dk.inf_norm().max(1.0)).is_empty();
        let lhs = m.target.sigma[k].entries() * dk.entries();
        let rhs = m.delta[(k + 1) % 4].entries() * m.source.sigma[k].entries();
        let scale = linalg::inf_norm(&lhs).max(linalg::inf_norm(&rhs)).max(1.0);
        rep.defects[k] = linalg::max_abs_diff(&lhs, &rhs);
        rep.intertwining[k] = rep.defects[k] <= 10.0 * eps * scale;
    }
    Ok(rep)
}

pub fn is_isomorphism(m: &StokesMorphism, eps: f64) -> Result<bool> {
    let rep = validate_morphism(m, eps)?;
    if !rep.is_valid() {
        return Err(Error::InvalidMorphism(format!(
            "intertwining fails for k in {:?}",
            rep.failing_k()
        )));
    }
    let n = m.source.structure().n_blocks();
    Ok(m.delta.iter().all(|d| {
        (0..n).all(|j| linalg::condition_number(&d.block(j, j)) <= INVERTIBILITY_THRESHOLD)
    }))
}

/// Blocks that an automorphism of the graded local system may occupy on `s`:
/// block `(j, k)` is allowed unless `c_j < c_k` somewhere on `s`.
pub fn automorphism_mask(
    s: &SectorSpec,
    params: &GaussianParamSet,
    eps: f64,
) -> Result<TriangularMask> {
    if s.is_half_line()
        && all_stokes_directions(params, eps)
            .iter()
            .any(|d| d.distance(Direction::new(s.lo)) <= eps)
    {
        return Err(Error::StokesHalfLine);
    }
    let vals = params.values();
    Ok(TriangularMask::from_fn(params.len(), |j, k| {
        let diff = vals[j] - vals[k];
        let (mn, _) = cos_range(diff.arg(), s.lo, s.width);
        mn >= -eps
    }))
}

/// Splits `A = A'' A'` with `A'` unipotent, its only off-diagonal block
/// `(lp, l)` equal to `A_{lp,lp}^{-1} A_{lp,l}`. Blocks are 0-based.
pub fn factor_transition(
    a: &BlockMatrix,
    l: usize,
    lp: usize,
) -> Result<(BlockMatrix, BlockMatrix)> {
    let n = a.structure().n_blocks();
    if l >= lp || lp >= n {
        return Err(Error::InvalidBlockPair(l, lp));
    }
    let dll = a.block(lp, lp);
    if linalg::condition_number(&dll) > INVERTIBILITY_THRESHOLD {
        return Err(Error::SingularDiagonalBlock(lp));
    }
    let x = linalg::inverse(&dll).ok_or(Error::SingularDiagonalBlock(lp))? * a.block(lp, l);
    let mut ap = BlockMatrix::identity(a.structure());
    ap.set_block(lp, l, &x);
    let mut ap_inv = BlockMatrix::identity(a.structure());
    ap_inv.set_block(lp, l, &(-x));
    let app = a.mul(&ap_inv)?;
    Ok((app, ap))
}

/// Block LU factorization `M = L U` without pivoting, `L` unit lower.
pub fn block_lu(m: &BlockMatrix) -> Option<(BlockMatrix, BlockMatrix)> {
    let s = m.structure();
    let n = s.n_blocks();
    let mut l = BlockMatrix::identity(s);
    let mut u = BlockMatrix::new(s.clone(), CMat::zeros(s.total(), s.total())).ok()?;
    for k in 0..n {
        for j in k..n {
            let mut acc = m.block(k, j);
            for p in 0..k {
                acc -= l.block(k, p) * u.block(p, j);
            }
            u.set_block(k, j, &acc);
        }
        let ukk = u.block(k, k);
        if linalg::condition_number(&ukk) > INVERTIBILITY_THRESHOLD {
            return None;
        }
        let ukk_inv = linalg::inverse(&ukk)?;
        for i in (k + 1)..n {
            let mut acc = m.block(i, k);
            for p in 0..k {
                acc -= l.block(i, p) * u.block(p, k);
            }
            l.set_block(i, k, &(acc * &ukk_inv));
        }
    }
    Some((l, u))
}

fn random_entry<R: Rng>(rng: &mut R) -> num_complex::Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_diag_block<R: Rng>(n: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, n, |i, j| {
        let e = random_entry(rng) * 0.3;
        if i == j {
            e + c(1.0, 0.0)
        } else {
            e
        }
    })
}

/// Random block-triangular matrix in block order (`upper` selects the side).
pub fn random_triangular<R: Rng>(s: &BlockStructure, upper: bool, rng: &mut R) -> BlockMatrix {
    let mut m = BlockMatrix::identity(s);
    let n = s.n_blocks();
    for j in 0..n {
        for k in 0..n {
            let (rj, rk) = (s.sizes()[j], s.sizes()[k]);
            if j == k {
                m.set_block(j, k, &random_diag_block(rj, rng));
            } else if (j < k) == upper {
                m.set_block(j, k, &CMat::from_fn(rj, rk, |_, _| random_entry(rng)));
            }
        }
    }
    m
}

/// Random block-diagonal matrix with well-conditioned blocks.
pub fn random_block_diagonal<R: Rng>(s: &BlockStructure, rng: &mut R) -> BlockMatrix {
    let mut m = BlockMatrix::identity(s);
    for j in 0..s.n_blocks() {
        m.set_block(j, j, &random_diag_block(s.sizes()[j], rng));
    }
    m
}

/// Random valid Stokes data: `σ_1`, `σ_2` are drawn, `(σ_2 σ_1)^{-1}` is
/// split by block LU into `σ_4 σ_3`, and a random block-diagonal gauge is
/// inserted between the two factors.
pub fn random_stokes_data<R: Rng>(
    params: &GaussianParamSet,
    theta0: Direction,
    rng: &mut R,
    eps: f64,
) -> Result<StokesData> {
    let order = numbering(params, theta0, eps)?;
    let sorted = BlockStructure::of(params).permuted(&order);
    loop {
        let s1 = random_triangular(&sorted, true, rng);
        let s2 = random_triangular(&sorted, false, rng);
        let m = s2.mul(&s1)?.inverse();
        let Some(m) = m else { continue };
        let Some((l, u)) = block_lu(&m) else { continue };
        let g = random_block_diagonal(&sorted, rng);
        let Some(g_inv) = g.inverse() else { continue };
        let s4 = l.mul(&g)?;
        let s3 = g_inv.mul(&u)?;
        if [&s3, &s4].iter().any(|x| x.inf_norm() > 1e3) {
            continue;
        }
        let sig = [s1, s2, s3, s4].map(|x| x.unpermuted(&order).into_entries());
        return StokesData::new(params.clone(), theta0, sig);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ComplexParam, DEFAULT_EPS};
    use crate::linalg::real_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(v: &[f64]) -> GaussianParamSet {
        GaussianParamSet::new(
            v.iter()
                .map(|&x| (ComplexParam::new(x, 0.0).unwrap(), 1))
                .collect(),
            DEFAULT_EPS,
        )
        .unwrap()
    }

    fn example() -> StokesData {
        StokesData::new(
            params(&[1.0, 2.0]),
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
    fn identity_data_valid() {
        let d = StokesData::identity(params(&[1.0, 2.0]), Direction::new(0.0));
        assert!(validate_object(&d, DEFAULT_EPS).is_valid());
    }

    #[test]
    fn example_valid() {
        let d = example();
        assert!(validate_object(&d, DEFAULT_EPS).is_valid());
        assert_eq!(monodromy(&d).into_entries(), linalg::identity(2));
    }

    #[test]
    fn lower_sigma1_rejected() {
        let d = example()
            .with_sigma(1, real_matrix(&[&[1.0, 0.0], &[1.0, 1.0]]))
            .unwrap();
        let rep = validate_object(&d, DEFAULT_EPS);
        assert!(rep.failed_axioms().contains(&Axiom::Triangularity));
        assert!(rep.failures().any(|c| c.detail.contains("sigma_1")));
    }

    #[test]
    fn storage_order_is_free() {
        // same data with parameters listed as {2, 1}: sigma_1 becomes lower in storage order
        let d = example();
        let swapped = d
            .sigmas()
            .clone()
            .map(|m| m.permuted(&[1, 0]).into_entries());
        let e = StokesData::new(params(&[2.0, 1.0]), Direction::new(0.0), swapped).unwrap();
        assert!(validate_object(&e, DEFAULT_EPS).is_valid());
    }

    #[test]
    fn monodromy_failure_flagged() {
        let d = StokesData::new(
            params(&[1.0, 2.0]),
            Direction::new(0.0),
            [
                real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]),
                linalg::identity(2),
                linalg::identity(2),
                linalg::identity(2),
            ],
        )
        .unwrap();
        assert_eq!(
            monodromy(&d).into_entries(),
            real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]])
        );
        assert_eq!(
            validate_object(&d, DEFAULT_EPS).failed_axioms(),
            vec![Axiom::Monodromy]
        );
    }

    #[test]
    fn nongeneric_direction_flagged() {
        let d = StokesData::identity(params(&[1.0, 2.0]), Direction::new(PI / 4.0));
        assert_eq!(
            validate_object(&d, DEFAULT_EPS).failed_axioms(),
            vec![Axiom::Genericity]
        );
    }

    #[test]
    fn morphism_examples() {
        let d = example();
        let id = StokesMorphism::identity(&d);
        assert!(validate_morphism(&id, DEFAULT_EPS).unwrap().is_valid());
        assert!(is_isomorphism(&id, DEFAULT_EPS).unwrap());
        let sc = StokesMorphism::scalar(&d, c(0.0, 3.0));
        assert!(validate_morphism(&sc, DEFAULT_EPS).unwrap().is_valid());

        // sigma~_1 delta_1 = delta_2 sigma_1 with delta = diag(2, 1)
        let s1 = real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let t1 = real_matrix(&[&[1.0, 2.0], &[0.0, 1.0]]);
        let dl = real_matrix(&[&[2.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(&t1 * &dl, &dl * &s1);

        // rescaling the second basis vector everywhere conjugates the data
        let t = StokesData::new(
            params(&[1.0, 2.0]),
            Direction::new(0.0),
            [
                t1,
                linalg::identity(2),
                real_matrix(&[&[1.0, -2.0], &[0.0, 1.0]]),
                linalg::identity(2),
            ],
        )
        .unwrap();
        let m =
            StokesMorphism::new(d.clone(), t, [dl.clone(), dl.clone(), dl.clone(), dl]).unwrap();
        let rep = validate_morphism(&m, DEFAULT_EPS).unwrap();
        assert!(rep.is_valid(), "{rep:?}");
        assert!(is_isomorphism(&m, DEFAULT_EPS).unwrap());
        let back = m.inverse().unwrap();
        let round = back.compose(&m).unwrap();
        assert!(validate_morphism(&round, DEFAULT_EPS).unwrap().is_valid());
    }

    #[test]
    fn singular_block_not_iso() {
        let d = example();
        let z = real_matrix(&[&[0.0, 0.0], &[0.0, 1.0]]);
        // valid morphism to itself? delta = diag(0,1) intertwines only if it commutes; use identity data
        let idd = StokesData::identity(params(&[1.0, 2.0]), Direction::new(0.0));
        let m =
            StokesMorphism::new(idd.clone(), idd, [z.clone(), z.clone(), z.clone(), z]).unwrap();
        assert!(!is_isomorphism(&m, DEFAULT_EPS).unwrap());
        let bad = StokesMorphism::new(
            d.clone(),
            d,
            [
                real_matrix(&[&[2.0, 0.0], &[0.0, 1.0]]),
                linalg::identity(2),
                linalg::identity(2),
                linalg::identity(2),
            ],
        )
        .unwrap();
        assert!(matches!(
            is_isomorphism(&bad, DEFAULT_EPS),
            Err(Error::InvalidMorphism(_))
        ));
    }

    #[test]
    fn diag_23_iso() {
        let d = StokesData::identity(params(&[1.0, 2.0]), Direction::new(0.0));
        let g = real_matrix(&[&[2.0, 0.0], &[0.0, 3.0]]);
        let m = StokesMorphism::new(d.clone(), d, [g.clone(), g.clone(), g.clone(), g]).unwrap();
        assert!(is_isomorphism(&m, DEFAULT_EPS).unwrap());
    }

    #[test]
    fn mask_examples() {
        let p = params(&[1.0, 2.0]);
        let m = automorphism_mask(&SectorSpec::closed(0.0, PI / 8.0), &p, DEFAULT_EPS).unwrap();
        assert_eq!(m.as_rows(), &[vec![true, false], vec![true, true]]);
        let m = automorphism_mask(&SectorSpec::closed(0.0, PI / 2.0), &p, DEFAULT_EPS).unwrap();
        assert_eq!(m, TriangularMask::diagonal(2));
        let m =
            automorphism_mask(&SectorSpec::closed(0.3, 2.0), &params(&[5.0]), DEFAULT_EPS).unwrap();
        assert_eq!(m.as_rows(), &[vec![true]]);
        assert!(matches!(
            automorphism_mask(&SectorSpec::half_line(PI / 4.0), &p, DEFAULT_EPS),
            Err(Error::StokesHalfLine)
        ));
    }

    #[test]
    fn factor_examples() {
        let s = BlockStructure::new(vec![1, 1]).unwrap();
        let a = BlockMatrix::new(s.clone(), real_matrix(&[&[2.0, 0.0], &[3.0, 4.0]])).unwrap();
        let (app, ap) = factor_transition(&a, 0, 1).unwrap();
        assert!(
            linalg::max_abs_diff(ap.entries(), &real_matrix(&[&[1.0, 0.0], &[0.75, 1.0]])) < 1e-15
        );
        assert!(
            linalg::max_abs_diff(app.entries(), &real_matrix(&[&[2.0, 0.0], &[0.0, 4.0]])) < 1e-15
        );

        let a = BlockMatrix::new(s.clone(), real_matrix(&[&[2.0, 0.0], &[0.0, 5.0]])).unwrap();
        let (app, ap) = factor_transition(&a, 0, 1).unwrap();
        assert_eq!(ap.entries(), &linalg::identity(2));
        assert_eq!(app, a);

        let a = BlockMatrix::new(s.clone(), real_matrix(&[&[1.0, 0.0], &[-7.0, 1.0]])).unwrap();
        let (app, ap) = factor_transition(&a, 0, 1).unwrap();
        assert_eq!(ap, a);
        assert!(linalg::max_abs_diff(app.entries(), &linalg::identity(2)) < 1e-15);

        let a = BlockMatrix::new(s, real_matrix(&[&[1.0, 0.0], &[1.0, 0.0]])).unwrap();
        assert!(matches!(
            factor_transition(&a, 0, 1),
            Err(Error::SingularDiagonalBlock(1))
        ));
        assert!(matches!(
            factor_transition(&a, 1, 0),
            Err(Error::InvalidBlockPair(1, 0))
        ));
    }

    #[test]
    fn random_data_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = GaussianParamSet::new(
            vec![
                (ComplexParam::new(1.0, 0.0).unwrap(), 2),
                (ComplexParam::new(3.0, 0.0).unwrap(), 1),
                (ComplexParam::new(2.0, 0.0).unwrap(), 2),
            ],
            DEFAULT_EPS,
        )
        .unwrap();
        for _ in 0..20 {
            let d = random_stokes_data(&p, Direction::new(0.0), &mut rng, DEFAULT_EPS).unwrap();
            let rep = validate_object(&d, DEFAULT_EPS);
            assert!(rep.is_valid(), "{rep:?}");
        }
    }

    #[test]
    fn block_lu_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = BlockStructure::new(vec![2, 1, 3]).unwrap();
        let a = random_triangular(&s, false, &mut rng)
            .mul(&random_triangular(&s, true, &mut rng))
            .unwrap();
        let (l, u) = block_lu(&a).unwrap();
        assert!(linalg::max_abs_diff(l.mul(&u).unwrap().entries(), a.entries()) < 1e-12);
        let pos = [0, 1, 2];
        assert!(TriangularMask::lower(&pos).violations(&l, 1e-14).is_empty());
        assert!(TriangularMask::upper(&pos).violations(&u, 1e-14).is_empty());
    }
}
