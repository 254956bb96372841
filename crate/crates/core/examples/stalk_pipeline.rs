//! Evaluates the stalk sequences of the transform at a few points and
//! recovers the gluing matrices on the four boundary half-lines.

use gauss_stokes::blockdata::random_stokes_data;
use gauss_stokes::expmodel::StalkPoint;
use gauss_stokes::fourier::{
    build_stalk_sequences, expected_stalk_dim, gluing_probes, recover_gluing, TableMode,
    TransformTable,
};
use gauss_stokes::geometry::Direction;
use gauss_stokes::linalg;
use gauss_stokes::{Complex64, GaussianParamSet, DEFAULT_EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gauss_stokes::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = GaussianParamSet::from_values(&[
        (Complex64::new(1.0, 0.0), 1),
        (Complex64::new(2.0, 0.0), 1),
    ])?;
    let d = random_stokes_data(&c, Direction::new(0.0), &mut rng, DEFAULT_EPS)?;
    let table = TransformTable::for_data(&d, TableMode::Aligned, DEFAULT_EPS)?;

    for p in [
        StalkPoint::new(-1.0, -1.0, -0.25),
        StalkPoint::new(-1.0, -1.0, 0.75),
        StalkPoint::new(2.0, 0.5, -2.0),
        StalkPoint::new(0.5, 2.5, 3.0),
    ] {
        let seq = build_stalk_sequences(&d, &table, &p, 1e-9)?;
        let exact = seq.complexes.iter().all(|c| c.is_exact(1e-8));
        println!(
            "w = {}, t = {}: stalk dim {} (formula {}), exact {}, connecting map injective {}",
            p.w,
            p.t,
            seq.lf_dim,
            expected_stalk_dim(&d, &p),
            exact,
            seq.connecting_injective()
        );
    }
    for k in 1..=4 {
        let g = recover_gluing(&d, &table, k, &gluing_probes(&table, k, 5), 1e-9)?;
        println!(
            "k = {k}: |recovered - sigma_{k}| = {:.2e}",
            linalg::max_abs_diff(g.entries(), d.sigma(k).entries())
        );
    }
    Ok(())
}
