//! Writes the sector figures of an aligned and of a heart example as SVG.

use gauss_stokes::blockdata::random_stokes_data;
use gauss_stokes::cli::svg::render;
use gauss_stokes::geometry::Direction;
use gauss_stokes::{Complex64, GaussianParamSet, DEFAULT_EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, Into::into);

    let aligned = GaussianParamSet::from_values(&[
        (Complex64::new(1.0, 0.0), 1),
        (Complex64::new(2.0, 0.0), 1),
    ])?;
    let d = random_stokes_data(&aligned, Direction::new(0.0), &mut rng, DEFAULT_EPS)?;
    let path = dir.join("aligned.svg");
    std::fs::write(&path, render(&d, DEFAULT_EPS))?;
    println!("wrote {}", path.display());

    let heart = GaussianParamSet::from_values(&[
        (Complex64::new(1.0, 1.0), 1),
        (Complex64::new(2.0, 3.0), 1),
    ])?;
    let th = Direction::new(-heart.param(0).arg() / 2.0);
    let d = random_stokes_data(&heart, th, &mut rng, DEFAULT_EPS)?;
    let path = dir.join("heart.svg");
    std::fs::write(&path, render(&d, DEFAULT_EPS))?;
    println!("wrote {}", path.display());
    Ok(())
}
