//! The `stair` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench;
use crate::container::{Container, Manifest, StripeDamage};
use crate::error::Error;
use crate::reliability::{self, p_sec, p_str, ChunkFailureDist, Coverage, ReliabilityParams, Scenario, SectorModel};
use crate::sim::{monte_carlo_p_str, sample_pattern, simulate};
use crate::stair::{Cell, FailurePattern, Method, StairCode, StairConfig};

#[derive(Parser, Debug)]
#[command(name = "stair", version, about = "STAIR erasure codes: encode, damage, repair and analyse")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a file into a container.
    Encode {
        input: PathBuf,
        #[arg(short, long, required_unless_present = "devices")]
        output: Option<PathBuf>,
        /// Write one file per device into this directory instead.
        #[arg(long)]
        devices: Option<PathBuf>,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 512)]
        symbol_size: usize,
        /// Defaults to the cheapest method for the configuration.
        #[arg(long)]
        method: Option<Method>,
    },
    /// Extract the original file. With --devices, missing device files are
    /// rebuilt first.
    Decode {
        #[arg(required_unless_present = "devices")]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        devices: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Erase cells of a container and write a manifest of what was erased.
    Inject {
        input: PathBuf,
        /// e.g. "chunks=3,7;sectors=4:2,5:1;cells=0/2;stripes=all"
        #[arg(long, default_value = "")]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Restore a damaged container. Exits with 2 if it cannot be recovered.
    Repair {
        input: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Mult_XOR counts of the three encoders.
    Cost {
        #[command(flatten)]
        code: CodeArgs,
        /// Instead of --e, list every e vector with this sum.
        #[arg(long)]
        sweep_s: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Stripe-loss probabilities and MTTDL for a TOML scenario.
    Reliability {
        /// Defaults to the SATA array scenario.
        scenario: Option<PathBuf>,
        /// Cross-check each code against a Monte-Carlo run.
        #[arg(long)]
        validate: bool,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sector failure probability for --validate.
        #[arg(long, default_value_t = 1e-3)]
        p_sec: f64,
        /// Write the --validate outcome histogram here as CSV.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Encode and decode throughput per method.
    Bench {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 32)]
        stripe_mib: usize,
        #[arg(long, default_value_t = 5)]
        rounds: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Quick end-to-end consistency checks.
    Selftest {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Comma-separated sector tolerances, e.g. "1,1,2". Empty for none.
    #[arg(long, default_value = "1,1,2")]
    pub e: String,
    #[arg(long, default_value_t = 8)]
    pub w: u32,
}

impl CodeArgs {
    pub fn config(&self) -> crate::Result<StairConfig> {
        StairConfig::new(self.n, self.r, self.m, &parse_e(&self.e)?, self.w)
    }
}

pub fn parse_e(s: &str) -> crate::Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidConfig(format!("bad e entry {t:?}"))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Renders flat rows as CSV with a header, or as a JSON array.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

/// Applies `STAIR_THREADS`, runs the command and maps errors to exit codes:
/// 2 for an unrecoverable pattern, 1 for anything else.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let mut out = std::io::stdout().lock();
    match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Unrecoverable(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("STAIR_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("STAIR_THREADS={v:?}"))?;
        if n == 0 {
            bail!("STAIR_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Encode { input, output, devices, code, symbol_size, method } => {
            let data = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let code = StairCode::new(code.config()?)?;
            let method = method.unwrap_or_else(|| code.choose_method());
            let c = Container::encode(code, symbol_size, &data, method)?;
            if let Some(dir) = devices {
                c.write_devices(&dir)?;
            }
            if let Some(path) = output {
                write(&path, &c.to_bytes())?;
            }
            writeln!(out, "encoded {} bytes into {} stripes with {method}", data.len(), c.stripes())?;
        }
        Command::Decode { input, devices, output } => {
            let c = match (input, devices) {
                (Some(path), _) => Container::parse(&read(&path)?)?,
                (None, Some(dir)) => {
                    let (mut c, missing) = Container::read_devices(&dir)?;
                    if !missing.is_empty() {
                        c.repair(&whole_chunk_manifest(&c, &missing))?;
                        writeln!(out, "rebuilt devices {missing:?}")?;
                    }
                    c
                }
                (None, None) => bail!("give a container or --devices"),
            };
            write(&output, &c.extract()?)?;
        }
        Command::Inject { input, spec, seed, output, manifest } => {
            let mut c = Container::parse(&read(&input)?)?;
            let m = c.inject(&spec.parse()?, seed)?;
            write(&output, &c.to_bytes())?;
            write(&manifest, serde_json::to_string_pretty(&m)?.as_bytes())?;
            let cells: usize = m.stripes.iter().map(|s| s.cells.len()).sum();
            writeln!(
                out,
                "erased {cells} cells in {} stripes; within coverage: {}",
                m.stripes.len(),
                m.within_coverage
            )?;
        }
        Command::Repair { input, manifest, output } => {
            let mut c = Container::parse(&read(&input)?)?;
            let m: Manifest = serde_json::from_slice(&read(&manifest)?).context("parsing manifest")?;
            let n = c.repair(&m)?;
            write(&output, &c.to_bytes())?;
            writeln!(out, "repaired {n} stripes")?;
        }
        Command::Cost { code, sweep_s, format } => {
            let configs = match sweep_s {
                None => vec![code.config()?],
                Some(s) => e_sweep(code.n, code.r, code.m, s)
                    .into_iter()
                    .map(|e| StairConfig::new(code.n, code.r, code.m, &e, code.w))
                    .collect::<crate::Result<_>>()?,
            };
            let rows = configs.into_iter().map(cost_row).collect::<crate::Result<Vec<_>>>()?;
            out.write_all(render(&rows, format)?.as_bytes())?;
        }
        Command::Reliability { scenario, validate, trials, seed, p_sec, histogram, format } => {
            let sc = match scenario {
                Some(path) => Scenario::from_toml(&fs::read_to_string(&path)?)?,
                None => Scenario::default(),
            };
            if validate {
                let (rows, report) = validate_scenario(&sc, p_sec, trials, seed)?;
                if let Some(path) = histogram {
                    write(&path, report.histogram_csv().as_bytes())?;
                }
                out.write_all(render(&rows, format)?.as_bytes())?;
                if rows.iter().any(|r| !r.within_3sigma) {
                    return Ok(ExitCode::from(1));
                }
            } else {
                out.write_all(render(&sc.run()?, format)?.as_bytes())?;
            }
        }
        Command::Bench { code, stripe_mib, rounds, format } => {
            let code = StairCode::new(code.config()?)?;
            let symbol = bench::symbol_size_for(code.config(), stripe_mib << 20);
            let rows = bench::run(&code, symbol, rounds)?;
            out.write_all(render(&rows, format)?.as_bytes())?;
        }
        Command::Selftest { format } => {
            let rows = selftest();
            out.write_all(render(&rows, format)?.as_bytes())?;
            if rows.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn whole_chunk_manifest(c: &Container, cols: &[usize]) -> Manifest {
    let r = c.header.r as usize;
    let cells: Vec<Cell> = cols.iter().flat_map(|&col| (0..r).map(move |row| Cell::new(row, col))).collect();
    let within = cols.len() <= c.header.m as usize;
    Manifest {
        within_coverage: within,
        stripes: (0..c.stripes())
            .map(|stripe| StripeDamage {
                stripe,
                cells: cells.clone(),
                within_coverage: within,
                within_effective_coverage: within,
            })
            .collect(),
    }
}

/// Every ascending e vector summing to `s` that fits an `n`-chunk stripe
/// with `m` failed chunks and `r` rows.
pub fn e_sweep(n: usize, r: usize, m: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, min: usize, max: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for v in min..=left.min(max) {
            cur.push(v);
            go(left - v, v, max, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(s, 1, r, n.saturating_sub(m), &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostRow {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub e: String,
    pub m_prime: usize,
    pub s: usize,
    pub x_standard: usize,
    pub x_up: usize,
    pub x_down: usize,
    pub chosen: Method,
    pub update_penalty: f64,
}

pub fn cost_row(cfg: StairConfig) -> crate::Result<CostRow> {
    let code = StairCode::new(cfg)?;
    let cfg = code.config();
    let c = code.cost();
    Ok(CostRow {
        n: cfg.n(),
        r: cfg.r(),
        m: cfg.m(),
        e: cfg.e().iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        m_prime: cfg.m_prime(),
        s: cfg.s(),
        x_standard: c.x_standard,
        x_up: c.x_up,
        x_down: c.x_down,
        chosen: c.chosen,
        update_penalty: code.update_penalty(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationRow {
    pub code: String,
    pub p_sec: f64,
    pub trials: u64,
    pub analytic: f64,
    pub estimate: f64,
    pub sigma: f64,
    pub ci99_low: f64,
    pub ci99_high: f64,
    pub within_3sigma: bool,
}

/// Analytic stripe-loss probability of every scenario code against one
/// shared Monte-Carlo run at sector failure probability `p_sec`.
pub fn validate_scenario(
    sc: &Scenario,
    p_sec: f64,
    trials: u64,
    seed: u64,
) -> anyhow::Result<(Vec<ValidationRow>, crate::sim::SimReport)> {
    let codes: Vec<Coverage> = sc.code_specs()?.into_iter().map(|c| c.coverage).collect();
    let dist = match sc.model {
        SectorModel::Independent => ChunkFailureDist::independent(sc.r, p_sec)?,
        SectorModel::Correlated { b1, alpha } => ChunkFailureDist::correlated(sc.r, p_sec, b1, alpha)?.0,
    };
    let chunks = sc.n - sc.m;
    let report = simulate(&codes, chunks, &dist, trials, seed);
    let rows = codes
        .iter()
        .zip(&report.estimates)
        .map(|(cov, est)| {
            let analytic = p_str(cov, chunks, &dist);
            ValidationRow {
                code: cov.to_string(),
                p_sec,
                trials,
                analytic,
                estimate: est.p,
                sigma: est.sigma,
                ci99_low: est.ci99.0,
                ci99_high: est.ci99.1,
                within_3sigma: est.within_sigmas(analytic, 3.0),
            }
        })
        .collect();
    Ok((rows, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, f: impl FnOnce() -> anyhow::Result<String>) -> CheckRow {
    match f() {
        Ok(detail) => CheckRow { check: name.into(), passed: true, detail },
        Err(e) => CheckRow { check: name.into(), passed: false, detail: format!("{e:#}") },
    }
}

/// A fast subset of the acceptance checks.
pub fn selftest() -> Vec<CheckRow> {
    let configs = [
        (8, 4, 2, vec![1, 1, 2], 8),
        (6, 3, 1, vec![1, 2], 8),
        (10, 6, 3, vec![2, 3], 16),
        (7, 5, 1, vec![4], 32),
        (5, 4, 2, vec![], 8),
    ];
    let codes = || -> anyhow::Result<Vec<StairCode>> {
        configs
            .iter()
            .map(|(n, r, m, e, w)| Ok(StairCode::new(StairConfig::new(*n, *r, *m, e, *w)?)?))
            .collect()
    };
    vec![
        check("encoders-agree", || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for code in codes()? {
                let cfg = code.config();
                let mut base = code.new_stripe(16)?;
                base.randomize_data(cfg, &mut rng);
                let mut outs = Vec::new();
                for m in Method::ALL {
                    let mut s = base.clone();
                    code.encode(&mut s, m)?;
                    outs.push(s);
                }
                if outs[0] != outs[1] || outs[1] != outs[2] {
                    bail!("methods disagree on {cfg:?}");
                }
            }
            Ok(format!("{} configs", configs.len()))
        }),
        check("decode-roundtrip", || {
            let mut total = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(12);
            for code in codes()? {
                let cfg = code.config();
                let mut clean = code.new_stripe(8)?;
                clean.randomize_data(cfg, &mut rng);
                code.encode(&mut clean, code.choose_method())?;
                for seed in 0..300 {
                    let p = sample_pattern(cfg, seed, true);
                    let mut s = clean.clone();
                    s.erase(&p.lost_cells(cfg));
                    code.decode(&mut s, &p)?;
                    if s != clean {
                        bail!("pattern {seed} on {cfg:?} decoded wrongly");
                    }
                    total += 1;
                }
            }
            Ok(format!("{total} patterns"))
        }),
        check("container-repair", || {
            let code = StairCode::new(StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?)?;
            let data: Vec<u8> = (0..10_000u32).map(|i| (i * 7 + i / 256) as u8).collect();
            let clean = Container::encode(code, 32, &data, Method::Upstairs)?;
            let mut c = clean.clone();
            let m = c.inject(&"chunks=0,5;sectors=1:2,2:1,3:1".parse()?, 3)?;
            c.repair(&m)?;
            if c.body != clean.body || c.extract()? != data {
                bail!("repaired container differs");
            }
            let mut c = clean.clone();
            let m = c.inject(&"chunks=0,1,2".parse()?, 3)?;
            if m.within_coverage || c.repair(&m).is_ok() {
                bail!("three lost chunks were not reported");
            }
            Ok(format!("{} stripes", clean.stripes()))
        }),
        check("schedule-costs", || {
            for code in codes()? {
                let cfg = code.config();
                if code.upstairs_schedule().mult_xors() != cfg.upstairs_mult_xors()
                    || code.downstairs_schedule().mult_xors() != cfg.downstairs_mult_xors()
                {
                    bail!("schedule cost differs from the formula on {cfg:?}");
                }
                let deps: usize =
                    cfg.data_cells().iter().map(|&d| code.parity_dependents(d).map(<[Cell]>::len)).sum::<crate::Result<_>>()?;
                if deps != code.xor_count(Method::Standard) {
                    bail!("standard cost is not the dependent count on {cfg:?}");
                }
            }
            Ok("formulas hold".into())
        }),
        check("array-counts", || {
            let params = ReliabilityParams::sata(1e-14, SectorModel::Independent);
            let got: Vec<u64> = (0..13)
                .map(|s| reliability::num_arrays(&params, &reliability::CodeSpec::new(8, 16, 1, Coverage::Sd(s))))
                .collect::<crate::Result<_>>()?;
            if got.first() != Some(&4994) || got.last() != Some(&5593) {
                bail!("got {got:?}");
            }
            Ok(format!("{got:?}"))
        }),
        check("monte-carlo", || {
            let dist = ChunkFailureDist::independent(16, 1e-3)?;
            let mut worst: f64 = 0.0;
            for cov in [Coverage::Rs, Coverage::stair(&[1, 2]), Coverage::Sd(2)] {
                let est = monte_carlo_p_str(&cov, 7, &dist, 200_000, 7);
                let exact = p_str(&cov, 7, &dist);
                worst = worst.max((est.p - exact).abs() / est.sigma);
                if !est.within_sigmas(exact, 4.0) {
                    bail!("{cov}: {} vs {exact}", est.p);
                }
            }
            Ok(format!("max deviation {worst:.2} sigma, P_sec(1e-14) = {:.3e}", p_sec(1e-14, 512)))
        }),
        check("pattern-coverage", || {
            let cfg = StairConfig::new(8, 4, 2, &[1, 1, 2], 8)?;
            let mut p = FailurePattern::new();
            p.fail_chunk(0).fail_chunk(1).fail_chunk(2);
            if crate::stair::pattern_within_coverage(&cfg, &p) {
                bail!("m+1 chunks counted as covered");
            }
            Ok("m+1 chunks rejected".into())
        }),
    ]
}
