//! Applies the aligned and heart transform rules and prints the transform
//! table of one parameter.

use gauss_stokes::blockdata::{random_stokes_data, validate_object};
use gauss_stokes::fourier::{
    transform_aligned, transform_heart, transform_table_aligned, SourceId,
};
use gauss_stokes::geometry::Direction;
use gauss_stokes::{Complex64, ComplexParam, GaussianParamSet, DEFAULT_EPS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gauss_stokes::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);

    let c = GaussianParamSet::from_values(&[
        (Complex64::new(1.0, 0.0), 1),
        (Complex64::new(2.0, 0.0), 1),
    ])?;
    let d = random_stokes_data(&c, Direction::new(0.0), &mut rng, DEFAULT_EPS)?;
    let t = transform_aligned(&d, DEFAULT_EPS)?;
    println!(
        "aligned: parameters {:?} -> {:?}",
        d.params().values(),
        t.params().values()
    );
    println!(
        "         direction {} -> {}",
        d.theta0_raw(),
        t.theta0_raw()
    );
    println!(
        "         transformed data valid: {}",
        validate_object(&t, DEFAULT_EPS).is_valid()
    );
    let back = transform_aligned(&t, DEFAULT_EPS)?;
    println!(
        "         transform twice gives back the data: {}",
        back.sigmas() == d.sigmas()
    );

    let pair = GaussianParamSet::new(
        vec![
            (ComplexParam::new(1.0, 1.0)?, 1),
            (ComplexParam::new(2.0, 3.0)?, 1),
        ],
        DEFAULT_EPS,
    )?;
    let th = Direction::new(-pair.param(0).arg() / 2.0);
    let d = random_stokes_data(&pair, th, &mut rng, DEFAULT_EPS)?;
    let t = transform_heart(&d, DEFAULT_EPS)?;
    println!(
        "heart:   parameters {:?} -> {:?}",
        d.params().values(),
        t.params().values()
    );
    println!(
        "         transformed data valid: {}",
        validate_object(&t, DEFAULT_EPS).is_valid()
    );

    let table = transform_table_aligned(ComplexParam::new(1.0, 0.0)?)?;
    println!("transform table for c = 1:");
    for src in SourceId::ALL {
        let e = table.get(src, 0);
        let kinds: Vec<String> = e
            .profiles()
            .iter()
            .map(|p| format!("{:?}{:?}", p.kind, p.sign))
            .collect();
        println!("  {:>3} -> {:?} on {:?}", src.label(), kinds, e.region);
    }
    Ok(())
}
