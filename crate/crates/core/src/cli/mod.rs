//! `gauss-stokes` command line: validate, transform, verify, scan, plot.
//!
//! Exit codes: 0 success, 1 semantic failure, 2 parse failure, 3 unsupported input.

pub mod file;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blockdata::{validate_object, StokesData};
use crate::error::{Error, Result};
use crate::fourier::{
    heart_pair, transform_aligned, transform_heart, transform_table_aligned_set,
    transform_table_heart, verify_data, SourceId, TableMode, TransformTable, VerifyConfig,
};
use crate::geometry::{ComplexParam, GaussianParamSet, DEFAULT_EPS};
use crate::oracle::{scan_entry, OracleConfig, ScanConfig, ScanReport};

pub use file::{read_data, write_data, RunConfig, StokesDataFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::UnsupportedParams(_)
        | Error::UnsupportedArgRange(_)
        | Error::UnsupportedRanks(_) => EXIT_UNSUPPORTED,
        _ => EXIT_FAILURE,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gauss-stokes",
    version,
    about = "Stokes data of pure Gaussian type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Aligned,
    Heart,
}

#[derive(clap::Args, Debug, Clone, Default)]
struct ConfigArgs {
    /// JSON file with run settings; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.resolution {
            cfg.grid_resolution = v;
        }
        if let Some(v) = self.probes {
            cfg.probe_count = v;
        }
        if let Some(v) = self.delta {
            cfg.delta_band = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg.check()?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a Stokes data file
    Validate {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        tolerance: f64,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a transform rule and write the transformed data
    Transform {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the stalk pipeline and recover the gluing matrices
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[command(flatten)]
        config: ConfigArgs,
        /// Skip axiom checks on the input
        #[arg(long)]
        bypass_validation: bool,
    },
    /// Compare the lattice oracle with the closed stalk formulas
    Scan {
        /// Parameter as `re,im` or `re`; give two for a heart pair
        #[arg(long = "param", required = true, allow_hyphen_values = true)]
        params: Vec<String>,
        /// Source piece: S1..S4, S12, S23, S34, S41 or 0
        #[arg(long)]
        sector: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Restrict to one parameter of the table (0-based)
        #[arg(long)]
        entry: Option<usize>,
        /// Samples per axis of the w grid
        #[arg(long, default_value_t = 41)]
        steps: usize,
        /// Samples of t
        #[arg(long, default_value_t = 21)]
        t_steps: usize,
        #[command(flatten)]
        config: ConfigArgs,
        /// CSV output file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the sector decompositions as SVG
    Plot {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point of the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let res = match cli.command {
        Command::Validate {
            input,
            tolerance,
            out: o,
        } => cmd_validate(&input, tolerance, o.as_deref(), out),
        Command::Transform {
            input,
            mode,
            out: o,
        } => cmd_transform(&input, mode, o.as_deref(), out),
        Command::Verify {
            input,
            mode,
            config,
            bypass_validation,
        } => config
            .resolve()
            .and_then(|cfg| cmd_verify(&input, mode, &cfg, bypass_validation, out)),
        Command::Scan {
            params,
            sector,
            mode,
            entry,
            steps,
            t_steps,
            config,
            out: o,
        } => config.resolve().and_then(|cfg| {
            let opts = ScanOptions {
                mode,
                entry,
                steps,
                t_steps,
            };
            cmd_scan(&params, &sector, &opts, &cfg, o.as_deref(), out)
        }),
        Command::Plot { input, out: o } => cmd_plot(&input, o.as_deref(), out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    valid: bool,
    failed: Vec<String>,
    report: &'a crate::blockdata::ValidationReport,
}

fn cmd_validate(input: &Path, tol: f64, json: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let d = read_data(input)?;
    let rep = validate_object(&d, tol);
    for c in &rep.checks {
        let status = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(out, "{:<14} {status}  {}", c.axiom.to_string(), c.detail);
    }
    let valid = rep.is_valid();
    let _ = writeln!(out, "{}", if valid { "valid" } else { "invalid" });
    if let Some(p) = json {
        let j = ValidateJson {
            valid,
            failed: rep.failed_axioms().iter().map(|a| a.to_string()).collect(),
            report: &rep,
        };
        std::fs::write(
            p,
            serde_json::to_string_pretty(&j).expect("serializable") + "\n",
        )
        .map_err(|e| io_err(p, e))?;
    }
    Ok(if valid { EXIT_OK } else { EXIT_FAILURE })
}

fn require_valid(d: &StokesData, tol: f64, out: &mut dyn Write) -> Result<bool> {
    let rep = validate_object(d, tol);
    for c in rep.failures() {
        let _ = writeln!(out, "input fails {}: {}", c.axiom, c.detail);
    }
    Ok(rep.is_valid())
}

fn pick_mode(d: &StokesData, mode: ModeArg) -> TableMode {
    match mode {
        ModeArg::Aligned => TableMode::Aligned,
        ModeArg::Heart => TableMode::Heart,
        ModeArg::Auto => {
            if d.params().common_arg(DEFAULT_EPS).is_none()
                && heart_pair(d.params(), DEFAULT_EPS).is_ok()
            {
                TableMode::Heart
            } else {
                TableMode::Aligned
            }
        }
    }
}

fn apply_transform(d: &StokesData, mode: TableMode) -> Result<StokesData> {
    match mode {
        TableMode::Aligned => transform_aligned(d, DEFAULT_EPS),
        TableMode::Heart => transform_heart(d, DEFAULT_EPS),
    }
}

fn cmd_transform(
    input: &Path,
    mode: ModeArg,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let d = read_data(input)?;
    if !require_valid(&d, DEFAULT_EPS, out)? {
        return Ok(EXIT_FAILURE);
    }
    let mode = pick_mode(&d, mode);
    let t = apply_transform(&d, mode)?;
    let rep = validate_object(&t, DEFAULT_EPS);
    if !rep.is_valid() {
        for c in rep.failures() {
            let _ = writeln!(out, "transformed data fails {}: {}", c.axiom, c.detail);
        }
        return Ok(EXIT_FAILURE);
    }
    let file = StokesDataFile::from_data(&t);
    match dest {
        Some(p) => {
            write_data(p, &t).map_err(|e| io_err(p, e))?;
            let params: Vec<String> = t
                .params()
                .params()
                .iter()
                .map(|(c, r)| format!("{c} (rank {r})"))
                .collect();
            let _ = writeln!(out, "mode: {mode:?}");
            let _ = writeln!(out, "parameters: {}", params.join(", "));
            let _ = writeln!(out, "generic direction: {}", t.theta0_raw());
            let _ = writeln!(out, "transformed data revalidated: valid");
        }
        None => {
            let _ = writeln!(out, "{}", file.to_json());
        }
    }
    Ok(EXIT_OK)
}

fn table_for(d: &StokesData, mode: TableMode) -> Result<TransformTable> {
    apply_transform(d, mode)?;
    TransformTable::for_data(d, mode, DEFAULT_EPS)
}

fn cmd_verify(
    input: &Path,
    mode: ModeArg,
    cfg: &RunConfig,
    bypass: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let d = read_data(input)?;
    if !bypass && !require_valid(&d, DEFAULT_EPS, out)? {
        return Ok(EXIT_FAILURE);
    }
    let mode = pick_mode(&d, mode);
    let table = table_for(&d, mode)?;
    let vcfg = VerifyConfig {
        tolerance: cfg.tolerance,
        probes: cfg.probe_count,
        ..VerifyConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rep = verify_data(&d, &table, &vcfg, &mut rng)?;
    let _ = writeln!(out, "mode: {mode:?}");
    for k in 0..4 {
        let _ = writeln!(out, "sector {}: {} probes", k + 1, rep.probes_checked[k]);
    }
    let _ = writeln!(out, "sequences checked: {}", rep.sequences_checked);
    let _ = writeln!(out, "probe failures: {}", rep.failures.len());
    if let Some(f) = rep.failures.first() {
        let _ = writeln!(
            out,
            "first failing probe: sector {} w = {} t = {}: {}",
            f.sector, f.point.w, f.point.t, f.reason
        );
    }
    for (k, e) in rep.gluing_error.iter().enumerate() {
        match e {
            Some(e) => {
                let _ = writeln!(out, "sigma_{}: max deviation {e:.3e}", k + 1);
            }
            None => {
                let why = rep
                    .gluing_failures
                    .iter()
                    .find(|(kk, _)| *kk == k + 1)
                    .map_or("", |(_, s)| s.as_str());
                let _ = writeln!(out, "sigma_{}: recovery failed: {why}", k + 1);
            }
        }
    }
    if rep.passed(cfg.tolerance) {
        let _ = writeln!(out, "recovered σ̂ₖ = σₖ for k=1..4");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "verification failed");
        Ok(EXIT_FAILURE)
    }
}

/// Parses `re,im` or `re`.
pub fn parse_complex(s: &str) -> Result<ComplexParam> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{x}` in `{s}`")))
    };
    match parts.as_slice() {
        [re] => ComplexParam::new(num(re)?, 0.0),
        [re, im] => ComplexParam::new(num(re)?, num(im)?),
        _ => Err(Error::Parse(format!("expected re,im, got `{s}`"))),
    }
}

struct ScanOptions {
    mode: ModeArg,
    entry: Option<usize>,
    steps: usize,
    t_steps: usize,
}

fn cmd_scan(
    params: &[String],
    sector: &str,
    opts: &ScanOptions,
    cfg: &RunConfig,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let ps = params
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<Vec<_>>>()?;
    let src = SourceId::parse(sector)
        .ok_or_else(|| Error::Parse(format!("unknown sector `{sector}`")))?;
    let set = GaussianParamSet::new(ps.iter().map(|c| (*c, 1)).collect(), DEFAULT_EPS)?;
    let heart = match opts.mode {
        ModeArg::Heart => true,
        ModeArg::Aligned => false,
        ModeArg::Auto => set.len() == 2 && set.common_arg(DEFAULT_EPS).is_none(),
    };
    let table = if heart {
        let (ic, id) = heart_pair(&set, DEFAULT_EPS)?;
        transform_table_heart(set.param(ic), set.param(id), DEFAULT_EPS)?
    } else {
        if let Some((c, _)) = set.params().iter().find(|(c, _)| c.re() <= 0.0) {
            return Err(Error::UnsupportedParams(format!("Re c <= 0 for c = {c}")));
        }
        transform_table_aligned_set(&set, DEFAULT_EPS)?
    };
    let scfg = ScanConfig {
        oracle: OracleConfig {
            resolution: cfg.grid_resolution,
            ..OracleConfig::default()
        },
        delta: cfg.delta_band,
        w_steps: opts.steps,
        t_steps: opts.t_steps,
        ..ScanConfig::default()
    };
    let entries: Vec<usize> = match opts.entry {
        Some(i) if i < table.params.len() => vec![i],
        Some(i) => return Err(Error::Parse(format!("entry {i} out of range"))),
        None => (0..table.params.len()).collect(),
    };
    let mut all = ScanReport::default();
    for i in entries {
        let r = scan_entry(&table, src, i, &scfg)?;
        let _ = writeln!(
            out,
            "{} param {}: {} samples, {} retained, {} match, {} unstable",
            src.label(),
            table.params[i],
            r.total,
            r.retained(),
            r.matches(),
            r.unstable.len()
        );
        all.total += r.total;
        all.excluded += r.excluded;
        all.max_compact = all.max_compact.max(r.max_compact);
        all.non_contractible += r.non_contractible;
        all.rows.extend(r.rows);
        all.unstable.extend(r.unstable);
    }
    if let Some(p) = dest {
        let f = std::fs::File::create(p).map_err(|e| io_err(p, e))?;
        all.write_csv(std::io::BufWriter::new(f))?;
    }
    let _ = writeln!(out, "match rate: {:.6}", all.match_rate());
    if all.match_rate() == 1.0 {
        Ok(EXIT_OK)
    } else {
        for m in all.mismatches().iter().take(20) {
            let _ = writeln!(
                out,
                "mismatch w1={} w2={} t={} oracle={} closed_form={}",
                m.w1, m.w2, m.t, m.oracle, m.closed_form
            );
        }
        for p in all.unstable.iter().take(20) {
            let _ = writeln!(out, "unstable w={} t={}", p.w, p.t);
        }
        Ok(EXIT_FAILURE)
    }
}

fn cmd_plot(input: &Path, dest: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let d = read_data(input)?;
    let svg = svg::render(&d, DEFAULT_EPS);
    match dest {
        Some(p) => std::fs::write(p, svg).map_err(|e| io_err(p, e))?,
        None => {
            let _ = out.write_all(svg.as_bytes());
        }
    }
    Ok(EXIT_OK)
}
