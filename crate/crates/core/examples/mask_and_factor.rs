//! Automorphism masks on sectors and the one-block factorization of a
//! lower block-triangular transition matrix.

use gauss_stokes::blockdata::{
    automorphism_mask, factor_transition, random_triangular, BlockStructure,
};
use gauss_stokes::geometry::{standard_sectors, Direction, SectorSpec};
use gauss_stokes::linalg;
use gauss_stokes::{Complex64, GaussianParamSet, DEFAULT_EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(name: &str, rows: &[Vec<bool>]) {
    println!("{name}:");
    for r in rows {
        let line: String = r.iter().map(|&b| if b { '*' } else { '.' }).collect();
        println!("  {line}");
    }
}

fn main() -> gauss_stokes::Result<()> {
    let c = GaussianParamSet::from_values(&[
        (Complex64::new(1.0, 0.0), 1),
        (Complex64::new(2.0, 0.0), 1),
        (Complex64::new(0.5, 1.0), 1),
    ])?;
    for (k, s) in standard_sectors(Direction::new(0.3)).iter().enumerate() {
        show(
            &format!("standard sector {} mask", k + 1),
            automorphism_mask(s, &c, DEFAULT_EPS)?.as_rows(),
        );
    }
    for (lo, hi) in [(0.1, 0.3), (1.7, 2.0), (-0.6, -0.4)] {
        let s = SectorSpec::closed(lo, hi);
        show(
            &format!("mask on [{lo}, {hi}]"),
            automorphism_mask(&s, &c, DEFAULT_EPS)?.as_rows(),
        );
    }
    show(
        "whole plane mask",
        automorphism_mask(&SectorSpec::whole_plane(), &c, DEFAULT_EPS)?.as_rows(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = BlockStructure::new(vec![2, 1, 2])?;
    let a = random_triangular(&s, false, &mut rng);
    let (app, ap) = factor_transition(&a, 0, 2)?;
    let prod = app.mul(&ap)?;
    println!(
        "|A - A'' A'| = {:.2e}, |A''_(2,0)| = {:.2e}",
        linalg::max_abs_diff(prod.entries(), a.entries()),
        linalg::max_abs(&app.block(2, 0))
    );
    Ok(())
}
