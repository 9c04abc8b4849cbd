//! The `bivar` command.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative
//! verdict, 2 for usage or input errors. Every command is a function of its
//! inputs and the run configuration, so reruns give identical bytes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bivar_core::canonical::{self, Verdict, WitnessLevel};
use bivar_core::matrixdist;
use bivar_core::purity;
use bivar_core::sjd;
use bivar_core::{Axis, Caps, StepFunction};

use crate::mm::{self, Metric};
use crate::text::{self, axis_name};
use crate::{format, read_file, write_file, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    Rows,
    Columns,
}

impl From<Variable> for Axis {
    fn from(v: Variable) -> Axis {
        match v {
            Variable::Rows => Axis::Rows,
            Variable::Columns => Axis::Columns,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Main,
    Diagonal,
    Skew,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    SquaredEuclidean,
    Euclidean,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Seed for every stochastic step; echoed into outputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Weight grid used by `reconstruct`.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_denominator: u64,
    /// Highest signature level built in full.
    #[arg(long, global = true, default_value_t = Caps::default().max_level)]
    pub cap_level: usize,
    /// Largest full signature table.
    #[arg(long, global = true, default_value_t = Caps::default().max_table_entries)]
    pub cap_table: u64,
    /// Largest `|X|^k * |Y|^l` for exact marginals.
    #[arg(long, global = true, default_value_t = Caps::default().max_assignments)]
    pub cap_assignments: u64,
    /// Largest `|X|! * |Y|!` for brute-force checks.
    #[arg(long, global = true, default_value_t = Caps::default().max_factorial_product)]
    pub cap_factorial: u64,
}

#[derive(Debug, Parser)]
#[command(name = "bivar", version, about = "Exact classification of step functions of two variables")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical image of the purified function.
    Canon {
        input: PathBuf,
        /// Writes PREFIX.json and PREFIX.sidecar.{txt,json} instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decides whether two functions are equivalent.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Main)]
        mode: Mode,
        /// Base variable for the skew mode.
        #[arg(long, value_enum, default_value_t = Variable::Rows)]
        variable: Variable,
    },
    /// Imports a metric measure space as a symmetric function.
    MmImport {
        input: PathBuf,
        /// The input is a distance matrix rather than a list of points.
        #[arg(long)]
        explicit: bool,
        #[arg(long, value_enum, default_value_t = MetricArg::SquaredEuclidean)]
        metric: MetricArg,
        /// Round distances to multiples of 1/Q.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Joint distributions of sections at one level.
    Sjd {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, value_enum, default_value_t = Variable::Rows)]
        variable: Variable,
        /// Sample this many tuples instead of building the full table.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples a random matrix from a function.
    Sample {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact probability of a corner pattern, or the whole k x l table.
    Marginal {
        input: PathBuf,
        /// Rows separated by `;`, e.g. "a b; b a".
        #[arg(long, conflicts_with_all = ["k", "l"])]
        pattern: Option<String>,
        #[arg(long, requires = "l")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        l: Option<usize>,
    },
    /// Rebuilds a function from a sampled matrix.
    Reconstruct {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetry group, purity and total purity.
    Symmetries {
        input: PathBuf,
        /// Only relabelings that preserve weights.
        #[arg(long)]
        weight_preserving: bool,
    },
}

/// Settings shared by all commands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub caps: Caps,
    pub max_denominator: u64,
    pub format: OutputFormat,
}

impl RunConfig {
    fn from_args(a: &ConfigArgs) -> Result<Self> {
        if a.cap_level == 0 || a.cap_table == 0 || a.cap_assignments == 0 || a.cap_factorial == 0 {
            return Err(Error::Usage("caps must be positive".into()));
        }
        if a.max_denominator == 0 {
            return Err(Error::Usage("--max-denominator must be positive".into()));
        }
        Ok(RunConfig {
            seed: a.seed,
            caps: Caps {
                max_level: a.cap_level,
                max_table_entries: a.cap_table,
                max_assignments: a.cap_assignments,
                max_factorial_product: a.cap_factorial,
            },
            max_denominator: a.max_denominator,
            format: a.format,
        })
    }

    fn structured(&self) -> bool {
        self.format == OutputFormat::Structured
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// What a command produced: text for stdout and an exit code.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn emit(out: &Option<PathBuf>, contents: &str, report: String) -> Result<Outcome> {
    match out {
        Some(path) => {
            write_file(path, contents)?;
            Ok(Outcome::ok(report))
        }
        None => Ok(Outcome::ok(contents.to_string())),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn verdict_output(cfg: &RunConfig, mode: &str, v: &Verdict) -> Outcome {
    let code = if v.equivalent { 0 } else { 1 };
    let level = |l: WitnessLevel| match l {
        WitnessLevel::Atoms => "atoms",
        WitnessLevel::Quotient => "quotient",
    };
    let stdout = if cfg.structured() {
        let witness = v.witness.as_ref().map(|w| {
            json!({ "rows": w.rows.images(), "cols": w.cols.images(), "level": level(w.level) })
        });
        pretty(&json!({ "mode": mode, "equivalent": v.equivalent, "witness": witness, "seed": cfg.seed }))
    } else {
        let mut s = format!("mode: {mode}\nseed: {}\n", cfg.seed);
        s.push_str(if v.equivalent { "equivalent\n" } else { "not equivalent\n" });
        if let Some(w) = &v.witness {
            s.push_str(&format!("witness level: {}\nrows: {}\ncols: {}\n", level(w.level), w.rows, w.cols));
        }
        s
    };
    Outcome { stdout, code }
}

fn canon(cfg: &RunConfig, input: &Path, out: &Option<PathBuf>) -> Result<Outcome> {
    let f = format::load(input)?;
    let form = canonical::canonical_form_purified(&f);
    let function = format::to_string(&form.image.function);
    let alphabet = f.alphabet();
    let sidecar = if cfg.structured() {
        pretty(&text::sidecar_to_json(&form, alphabet, cfg.seed))
    } else {
        text::sidecar_to_string(&form, alphabet, cfg.seed)
    };
    match out {
        Some(prefix) => {
            let ext = if cfg.structured() { ".sidecar.json" } else { ".sidecar.txt" };
            let (fp, sp) = (with_suffix(prefix, ".json"), with_suffix(prefix, ext));
            write_file(&fp, &function)?;
            write_file(&sp, &sidecar)?;
            Ok(Outcome::ok(format!("wrote {} and {}\n", fp.display(), sp.display())))
        }
        None => Ok(Outcome::ok(format!("{function}{sidecar}"))),
    }
}

fn equiv(cfg: &RunConfig, first: &Path, second: &Path, mode: Mode, variable: Variable) -> Result<Outcome> {
    let f = format::load(first)?;
    let g = format::load(second)?;
    match mode {
        Mode::Main => Ok(verdict_output(cfg, "main", &canonical::equivalent(&f, &g)?)),
        Mode::Diagonal => Ok(verdict_output(cfg, "diagonal", &canonical::diagonal_equivalent(&f, &g)?)),
        Mode::Skew => {
            let axis = Axis::from(variable);
            let equal = sjd::skew_equivalent(&f, &g, axis)?;
            let witness = if equal { sjd::skew_witness(&f, &g, axis)? } else { None };
            let code = if equal { 0 } else { 1 };
            let stdout = if cfg.structured() {
                let w = witness.as_ref().map(|w| {
                    json!({
                        "base": w.base.images(),
                        "fibers": w.fibers.iter().map(|p| p.images().to_vec()).collect::<Vec<_>>(),
                    })
                });
                pretty(&json!({
                    "mode": "skew", "variable": axis_name(axis), "equivalent": equal, "witness": w, "seed": cfg.seed,
                }))
            } else {
                let mut s = format!("mode: skew\nvariable: {}\nseed: {}\n", axis_name(axis), cfg.seed);
                s.push_str(if equal { "equivalent\n" } else { "not equivalent\n" });
                if let Some(w) = &witness {
                    s.push_str(&format!("base: {}\n", w.base));
                    for (x, p) in w.fibers.iter().enumerate() {
                        s.push_str(&format!("fiber {x}: {p}\n"));
                    }
                } else if equal {
                    s.push_str("no atom-level witness (atoms would have to be split)\n");
                }
                s
            };
            Ok(Outcome { stdout, code })
        }
    }
}

fn symmetries(cfg: &RunConfig, input: &Path, weight_preserving: bool) -> Result<Outcome> {
    let f = format::load(input)?;
    let group = purity::symmetry_group(&f, weight_preserving);
    let pure = purity::is_pure(&f);
    let totally_pure = purity::is_totally_pure(&f);
    let stdout = if cfg.structured() {
        let gens: Vec<serde_json::Value> = group
            .generators
            .iter()
            .map(|(r, c)| json!({ "rows": r.images(), "cols": c.images() }))
            .collect();
        pretty(&json!({
            "order": group.order.to_string(),
            "weight_preserving": weight_preserving,
            "pure": pure,
            "totally_pure": totally_pure,
            "generators": gens,
            "seed": cfg.seed,
        }))
    } else {
        let mut s = format!(
            "seed: {}\nweight preserving: {weight_preserving}\norder: {}\npure: {pure}\ntotally pure: {totally_pure}\n",
            cfg.seed, group.order
        );
        for (r, c) in &group.generators {
            s.push_str(&format!("generator rows [{r}] cols [{c}]\n"));
        }
        s
    };
    Ok(Outcome::ok(stdout))
}

fn marginal(cfg: &RunConfig, f: &StepFunction, pattern: Option<&str>, kl: Option<(usize, usize)>) -> Result<Outcome> {
    match (pattern, kl) {
        (Some(p), _) => {
            let p = text::pattern_from_str(p, f.alphabet())?;
            let prob = matrixdist::exact_pattern_marginal(f, &p, &cfg.caps)?;
            Ok(Outcome::ok(if cfg.structured() {
                pretty(&json!({ "probability": prob.to_string(), "seed": cfg.seed }))
            } else {
                format!("seed: {}\n{prob}\n", cfg.seed)
            }))
        }
        (None, Some((k, l))) => {
            let table = matrixdist::corner_table(f, k, l, &cfg.caps)?;
            let a = f.alphabet();
            let show = |cells: &[bivar_core::Symbol]| {
                cells
                    .chunks(l)
                    .map(|row| row.iter().map(|&s| a.name(s)).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            Ok(Outcome::ok(if cfg.structured() {
                let rows: Vec<serde_json::Value> =
                    table.iter().map(|(c, p)| json!({ "pattern": show(c), "probability": p.to_string() })).collect();
                pretty(&json!({ "k": k, "l": l, "table": rows, "seed": cfg.seed }))
            } else {
                let mut s = format!("# marginal k={k} l={l} seed={}\n", cfg.seed);
                for (c, p) in &table {
                    s.push_str(&format!("{}\t{p}\n", show(c)));
                }
                s
            }))
        }
        (None, None) => Err(Error::Usage("give --pattern or both --k and --l".into())),
    }
}

fn run_command(cfg: &RunConfig, command: &Command) -> Result<Outcome> {
    match command {
        Command::Canon { input, out } => canon(cfg, input, out),
        Command::Equiv { first, second, mode, variable } => equiv(cfg, first, second, *mode, *variable),
        Command::MmImport { input, explicit, metric, q, out } => {
            let body = read_file(input)?;
            let f = if *explicit {
                mm::import_matrix(&body, *q)?
            } else {
                let metric = match metric {
                    MetricArg::SquaredEuclidean => Metric::SquaredEuclidean,
                    MetricArg::Euclidean => Metric::Euclidean,
                };
                mm::import_points(&body, metric, *q)?
            };
            let report = format!("imported {} points with {} distinct distances\n", f.n_rows(), f.alphabet().len());
            emit(out, &format::to_string(&f), report)
        }
        Command::Sjd { input, level, variable, samples, out } => {
            let f = format::load(input)?;
            let axis = Axis::from(*variable);
            let sig = match samples {
                Some(n) => sjd::sjd_signature_sampled(&f, axis, *level, *n, cfg.seed)?,
                None => sjd::sjd_signature(&f, axis, *level, &cfg.caps)?,
            };
            let body = if cfg.structured() {
                let rows: Vec<serde_json::Value> = sig
                    .table
                    .iter()
                    .map(|(t, d)| json!({ "tuple": t, "distribution": d.display(f.alphabet()).to_string() }))
                    .collect();
                pretty(&json!({
                    "axis": axis_name(axis), "level": sig.level, "sampled": sig.sampled, "seed": cfg.seed, "table": rows,
                }))
            } else {
                text::signature_to_string(&sig, f.alphabet(), cfg.seed)
            };
            emit(out, &body, format!("wrote {} entries\n", sig.table.len()))
        }
        Command::Sample { input, k, l, out } => {
            if *k == 0 || *l == 0 {
                return Err(Error::Usage("--k and --l must be positive".into()));
            }
            let f = format::load(input)?;
            let r = matrixdist::sample_matrix_from(&f, *k, *l, cfg.seed, input.display().to_string())?;
            emit(out, &text::sampled_to_string(&r)?, format!("sampled {k}x{l} with seed {}\n", cfg.seed))
        }
        Command::Marginal { input, pattern, k, l } => {
            let f = format::load(input)?;
            marginal(cfg, &f, pattern.as_deref(), k.zip(*l))
        }
        Command::Reconstruct { input, out } => {
            let r = text::sampled_from_str(&read_file(input)?)?;
            let f = matrixdist::reconstruct(&r, cfg.max_denominator)?;
            let seed = r.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
            let report = format!(
                "reconstructed {}x{} from a {}x{} sample (sample seed {seed}, max denominator {})\n",
                f.n_rows(),
                f.n_cols(),
                r.n_rows(),
                r.n_cols(),
                cfg.max_denominator
            );
            emit(out, &format::to_string(&f), report)
        }
        Command::Symmetries { input, weight_preserving } => symmetries(cfg, input, *weight_preserving),
    }
}

/// Runs a parsed command, writing its report to `stdout`; returns the exit
/// code.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    let cfg = RunConfig::from_args(&cli.config)?;
    let outcome = run_command(&cfg, &cli.command)?;
    stdout
        .write_all(outcome.stdout.as_bytes())
        .map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
    Ok(outcome.code)
}

/// Entry point of the binary.
pub fn main() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
