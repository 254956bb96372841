//! Builds Stokes data over `C = {1, 2}`, checks the axioms, then breaks the
//! monodromy relation and checks again.

use gauss_stokes::blockdata::{monodromy, random_stokes_data, validate_object, StokesData};
use gauss_stokes::geometry::{numbering, Direction};
use gauss_stokes::linalg::{self, real_matrix};
use gauss_stokes::{ComplexParam, GaussianParamSet, DEFAULT_EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gauss_stokes::Result<()> {
    let c = GaussianParamSet::new(
        vec![
            (ComplexParam::new(1.0, 0.0)?, 1),
            (ComplexParam::new(2.0, 0.0)?, 1),
        ],
        DEFAULT_EPS,
    )?;
    let theta0 = Direction::new(0.0);
    println!(
        "numbering at theta0 = 0: {:?}",
        numbering(&c, theta0, DEFAULT_EPS)?
    );

    let d = StokesData::new(
        c.clone(),
        theta0,
        [
            real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]),
            linalg::identity(2),
            real_matrix(&[&[1.0, -1.0], &[0.0, 1.0]]),
            linalg::identity(2),
        ],
    )?;
    let rep = validate_object(&d, DEFAULT_EPS);
    println!("hand-made data valid: {}", rep.is_valid());

    let bad = d.with_sigma(3, linalg::identity(2))?;
    let rep = validate_object(&bad, DEFAULT_EPS);
    println!("after replacing sigma_3: failed {:?}", rep.failed_axioms());
    println!("monodromy:\n{}", monodromy(&bad).entries());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let r = random_stokes_data(&c, theta0, &mut rng, DEFAULT_EPS)?;
    let m = monodromy(&r);
    println!(
        "random data valid: {}, |monodromy - 1| = {:.2e}",
        validate_object(&r, DEFAULT_EPS).is_valid(),
        linalg::max_abs_diff(m.entries(), &linalg::identity(2))
    );
    Ok(())
}
