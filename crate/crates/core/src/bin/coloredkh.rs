use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coloredkh::jobs::{
    self, cache_dir_from, exit, to_csv, to_json, to_jsonl, Cache, CacheStatus, DimRow, Faults, Format, JobConfig,
    JobError, Orientation, PageRow, Subject, VerifyOptions, VerifyRecord, CACHE_ENV,
};

/// Reduced colored Khovanov homology of knots over GF(2).
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of each selected knot for each n.
    Compute(Common),
    /// Ranks, widths and Euler characteristic checks over a table.
    Sweep(Common),
    /// Widths with the ratios hw/(2(n-1)) and hw/(2(n-2)) next to the genus.
    WidthTable(Common),
    /// Structural, oracle and invariance checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest cable crossing count for exhaustive d∘d checks.
        #[arg(long, default_value_t = 12)]
        exhaustive_bound: usize,
        /// Largest cable crossing count for mirror/basepoint/diagram checks.
        #[arg(long, default_value_t = 12)]
        pair_bound: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one entry of the differential (fault injection).
        #[arg(long)]
        corrupt_edge: bool,
        /// Check Euler characteristics against a deliberately wrong convention map.
        #[arg(long)]
        flip_convention: bool,
    },
    /// Pages of the spectral sequence of the cube filtered by homological degree.
    SsPages {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
    },
    /// Per-state resolution data as JSON lines.
    Dump(Common),
}

#[derive(Args)]
struct Common {
    /// Table ids, comma lists, `table` or `all`.
    #[arg(long)]
    knot: Vec<String>,
    /// File of PD codes, one per line (`name: X(...)...` or JSON).
    #[arg(long)]
    pd_file: Option<PathBuf>,
    #[arg(long, conflicts_with = "n_range")]
    n: Option<usize>,
    /// Inclusive range such as `1..3`.
    #[arg(long)]
    n_range: Option<String>,
    /// Mirror input diagrams, so reports give Kh of the input knot itself.
    #[arg(long)]
    as_mirror: bool,
    /// `parallel`, `alternating`, or a +/- string with one sign per strand.
    #[arg(long, default_value = "parallel")]
    orientation_pattern: String,
    /// Overrides the COLOREDKH_CACHE environment variable.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = coloredkh::resolve::DEFAULT_CUBE_BOUND)]
    cube_bound: usize,
    #[arg(long, default_value_t = coloredkh::jonesoracle::DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
}

impl Common {
    fn subjects(&self) -> Result<Vec<Subject>, JobError> {
        let mut s = jobs::select_knots(&self.knot)?;
        if let Some(p) = &self.pd_file {
            s.extend(jobs::read_pd_file(p)?);
        }
        if s.is_empty() {
            return Err(JobError::Input("no knots selected; use --knot or --pd-file".into()));
        }
        Ok(s)
    }

    fn ns(&self) -> Result<Vec<usize>, JobError> {
        let ns = match (&self.n, &self.n_range) {
            (Some(n), _) => vec![*n],
            (None, Some(r)) => {
                let bad = || JobError::Input(format!("--n-range {r:?}: expected LO..HI"));
                let (lo, hi) = r.split_once("..").ok_or_else(bad)?;
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                (lo..=hi).collect()
            }
            (None, None) => vec![1],
        };
        if ns.is_empty() || ns.contains(&0) {
            return Err(JobError::Input("n must be at least 1".into()));
        }
        Ok(ns)
    }

    fn config(&self) -> Result<JobConfig, JobError> {
        Ok(JobConfig {
            as_mirror: self.as_mirror,
            orientation: Orientation::parse(&self.orientation_pattern)?,
            cube_bound: self.cube_bound,
            oracle_bound: self.oracle_bound,
            cache: cache_dir_from(self.cache_dir.clone(), std::env::var(CACHE_ENV).ok()).map(Cache::new),
        })
    }

    fn emit(&self, text: &str) -> Result<(), JobError> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|source| JobError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| JobError::Output(e.to_string())),
        }
    }
}

fn run(cli: Cli) -> Result<i32, JobError> {
    match cli.command {
        Command::Compute(c) => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let reports = jobs::with_threads(c.jobs, || {
                jobs::grid(&subjects, &ns)
                    .into_iter()
                    .map(|(k, n)| {
                        let (r, status) = jobs::compute(&subjects[k], n, &cfg)?;
                        if let CacheStatus::Corrupt(why) = status {
                            eprintln!(
                                "cache entry for {} n={n} was corrupt ({why}); recomputed",
                                subjects[k].id
                            );
                        }
                        Ok(r)
                    })
                    .collect::<Result<Vec<_>, JobError>>()
            })??;
            let text = match c.format {
                Format::Csv => to_csv(&DimRow::from_reports(&reports))?,
                Format::Json if reports.len() == 1 => to_json(&reports[0])?,
                Format::Json => to_json(&reports)?,
            };
            c.emit(&text)?;
            Ok(exit::SUCCESS)
        }
        Command::Sweep(c) => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let table = jobs::with_threads(c.jobs, || jobs::sweep(&subjects, &ns, &cfg))?;
            c.emit(&match c.format {
                Format::Csv => to_csv(&table.rows)?,
                Format::Json => to_json(&table.rows)?,
            })?;
            Ok(table.exit_code())
        }
        Command::WidthTable(c) => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let rows = jobs::with_threads(c.jobs, || jobs::width_table(&subjects, &ns, &cfg))?;
            c.emit(&match c.format {
                Format::Csv => to_csv(&rows)?,
                Format::Json => to_json(&rows)?,
            })?;
            Ok(exit::SUCCESS)
        }
        Command::Verify {
            common: c,
            exhaustive_bound,
            pair_bound,
            samples,
            seed,
            corrupt_edge,
            flip_convention,
        } => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let opts = VerifyOptions {
                exhaustive_bound,
                pair_bound,
                samples,
                seed,
                faults: Faults {
                    corrupt_edge,
                    flip_convention,
                },
            };
            let records = jobs::with_threads(c.jobs, || jobs::verify(&subjects, &ns, &cfg, &opts))?;
            c.emit(&match c.format {
                Format::Csv => to_csv(&records)?,
                Format::Json => to_json(&records)?,
            })?;
            Ok(VerifyRecord::exit_code(&records))
        }
        Command::SsPages { common: c, r_max } => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let reports = jobs::with_threads(c.jobs, || {
                jobs::grid(&subjects, &ns)
                    .into_iter()
                    .map(|(k, n)| jobs::ss_pages(&subjects[k], n, r_max, &cfg))
                    .collect::<Result<Vec<_>, _>>()
            })??;
            c.emit(&match c.format {
                Format::Csv => to_csv(&PageRow::from_reports(&reports))?,
                Format::Json => to_json(&reports)?,
            })?;
            Ok(exit::SUCCESS)
        }
        Command::Dump(c) => {
            let (subjects, ns, cfg) = (c.subjects()?, c.ns()?, c.config()?);
            let mut text = String::new();
            for (k, n) in jobs::grid(&subjects, &ns) {
                text.push_str(&to_jsonl(&jobs::dump(&subjects[k], n, &cfg)?)?);
            }
            c.emit(&text)?;
            Ok(exit::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(exit::INPUT_ERROR as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
