//! Compares the lattice oracle with the closed stalk formulas of a
//! transform table and writes the comparison as CSV.
//!
//! Usage: `cargo run --release --example oracle_scan -- [c_re c_im [d_re d_im]] [steps]`

use gauss_stokes::fourier::{transform_table_aligned, transform_table_heart, SourceId};
use gauss_stokes::oracle::{scan_entry, ScanConfig};
use gauss_stokes::{ComplexParam, DEFAULT_EPS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (table, param, steps) = match args.as_slice() {
        [cr, ci, dr, di, rest @ ..] => (
            transform_table_heart(
                ComplexParam::new(*cr, *ci)?,
                ComplexParam::new(*dr, *di)?,
                DEFAULT_EPS,
            )?,
            1,
            rest.first().copied(),
        ),
        [cr, ci, rest @ ..] => (
            transform_table_aligned(ComplexParam::new(*cr, *ci)?)?,
            0,
            rest.first().copied(),
        ),
        _ => (
            transform_table_aligned(ComplexParam::new(1.0, 0.0)?)?,
            0,
            None,
        ),
    };
    let mut cfg = ScanConfig::default();
    if let Some(n) = steps {
        cfg.w_steps = n as usize;
        cfg.t_steps = (n as usize / 2).max(2);
    }
    println!("params {:?}, mode {:?}", table.params, table.mode);
    for src in SourceId::ALL {
        let t0 = std::time::Instant::now();
        let r = scan_entry(&table, src, param, &cfg)?;
        println!(
            "{:>3}: retained {:>6}/{:>6}  match {:>6}  unstable {}  max compact {}  euler != 1: {}  ({:.1?})",
            src.label(),
            r.retained(),
            r.total,
            r.matches(),
            r.unstable.len(),
            r.max_compact,
            r.non_contractible,
            t0.elapsed()
        );
        for m in r.mismatches().iter().take(3) {
            println!(
                "     mismatch w=({}, {}) t={} oracle={} closed={}",
                m.w1, m.w2, m.t, m.oracle, m.closed_form
            );
        }
        if src == SourceId::S1 {
            let path = std::env::temp_dir().join("oracle_scan_s1.csv");
            r.write_csv(std::fs::File::create(&path)?)?;
            println!("     csv: {}", path.display());
        }
    }
    Ok(())
}
