//! walshlab: command-line driver for the Walsh analysis toolkit.
//!
//! Every subcommand generates its input deterministically from a function
//! spec and a seed, runs one experiment, and writes CSV and/or JSON reports
//! into the output directory. Identical commands produce byte-identical
//! files regardless of thread count; set SOURCE_DATE_EPOCH to also pin the
//! provenance timestamp across reruns.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or an experiment
//! cannot run), 2 on usage errors.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use serde_json::json;
use walsh_lab::{
    convergence_report, default_lambda_grid, diagonal_maximal, duality_check, dyadic_maximal,
    fwht_forward_2d, fwht_inverse_2d, hybrid_maximal, j_terms, mainest_ratio, standard_corpus,
    v_hybrid, v_hybrid_sup, verify_dyadic_dirichlet, verify_schipp_identity, weak_type_constant,
    Axis, Cell, DualCoefficients, DyadicPoint, ExperimentReport, FunctionSpec, Grid2, Spectrum2,
    WeakTypeOperator,
};

#[derive(Parser)]
#[command(name = "walshlab", version, about = "Walsh analysis experiments on the dyadic plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid resolution N; the plane is sampled on 2^N x 2^N cells.
    #[arg(long, global = true, default_value_t = 8)]
    resolution: u8,

    /// Seed for any randomness a subcommand needs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Which report renderings to write.
    #[arg(long, global = true, value_enum, default_value = "both")]
    output: OutputFormat,

    /// Output directory (default: $WALSHLAB_OUTDIR, then the current dir).
    #[arg(long, global = true)]
    outdir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the Dirichlet-kernel and three-term kernel identities
    /// brute-force in exact arithmetic.
    Identities {
        /// Largest block index n to check.
        #[arg(long, default_value_t = 8)]
        n_max: u32,
    },
    /// Transform a function to Walsh coefficients (or back) and write them.
    Transform {
        /// Function spec to generate, e.g. step:4:7 or walsh:3,5.
        #[arg(long)]
        function: Option<String>,
        /// Read the input grid from a CSV file instead of generating it.
        #[arg(long, conflicts_with = "function")]
        input: Option<PathBuf>,
        /// Treat the input values as coefficients and invert.
        #[arg(long)]
        inverse: bool,
    },
    /// Apply a maximal operator and write the output grid plus its L1 norm.
    Maximal {
        #[arg(long, value_enum)]
        op: MaximalOp,
        #[arg(long)]
        function: String,
    },
    /// Hybrid square function along one axis: a single level n, or the
    /// supremum over levels when --n is omitted. Writes the output grid
    /// and its distribution table on a log-lambda grid.
    Vop {
        /// 1 = square function in the first variable, 2 = second.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        axis: u8,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        function: String,
    },
    /// Convergence of centered strong p-means toward f over a list of
    /// block counts; reports sup/L1 errors and fitted decay slopes.
    StrongMeans {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        function: String,
        /// Comma-separated block counts, e.g. 16,64,256.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Inequality experiments: decomposition replay, main-estimate ratio,
    /// weak-type constants.
    Lab {
        #[command(subcommand)]
        experiment: LabExperiment,
    },
}

#[derive(Subcommand)]
enum LabExperiment {
    /// Evaluate the nine-term decomposition of the bilinear form at a
    /// seeded random point and check it sums back to the direct value.
    Decompose {
        /// Function spec (default: a seeded level-2 step).
        #[arg(long)]
        function: Option<String>,
        /// Dual block index n (coefficients alpha_0..alpha_{2^n-1}).
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Pointwise ratio of the strong-mean block norms to the dominating
    /// operator sum, per block index.
    Mainest {
        /// Single function spec; omit to sweep the standard corpus.
        #[arg(long)]
        function: Option<String>,
    },
    /// Weak-type constants over the standard corpus.
    WeakType {
        /// Hstar:<p>, V1, V2, M, M1, or M2.
        #[arg(long, default_value = "Hstar:2")]
        operator: String,
        /// Comma-separated threshold grid (default: 32 log-spaced points
        /// around the median of the operator output).
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaximalOp {
    #[value(name = "M", alias = "m")]
    Square,
    #[value(name = "M1", alias = "m1")]
    Hybrid1,
    #[value(name = "M2", alias = "m2")]
    Hybrid2,
    #[value(name = "A", alias = "a")]
    Diagonal,
}

impl MaximalOp {
    fn name(self) -> &'static str {
        match self {
            MaximalOp::Square => "M",
            MaximalOp::Hybrid1 => "M1",
            MaximalOp::Hybrid2 => "M2",
            MaximalOp::Diagonal => "A",
        }
    }

    fn apply(self, f: &Grid2) -> Grid2 {
        match self {
            MaximalOp::Square => dyadic_maximal(f),
            MaximalOp::Hybrid1 => hybrid_maximal(f, Axis::X),
            MaximalOp::Hybrid2 => hybrid_maximal(f, Axis::Y),
            MaximalOp::Diagonal => diagonal_maximal(f),
        }
    }
}

/// Argument problems detected after clap: bad spec strings, out-of-range
/// parameters. Reported like clap usage errors, with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// WALSHLAB_THREADS caps the rayon pool. Outputs do not depend on it; it
/// only trades latency for cores.
fn init_thread_pool() {
    if let Some(threads) = std::env::var("WALSHLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

struct Emitter {
    dir: PathBuf,
    format: OutputFormat,
}

impl Emitter {
    fn new(outdir: Option<PathBuf>, format: OutputFormat) -> Result<Self> {
        let dir = outdir
            .or_else(|| std::env::var_os("WALSHLAB_OUTDIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Emitter { dir, format })
    }

    fn want_csv(&self) -> bool {
        matches!(self.format, OutputFormat::Csv | OutputFormat::Both)
    }

    fn want_json(&self) -> bool {
        matches!(self.format, OutputFormat::Json | OutputFormat::Both)
    }

    fn write_file(&self, name: &str, mut contents: String) -> Result<()> {
        if !contents.ends_with('\n') {
            contents.push('\n');
        }
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    /// Tabular payload: CSV carries the rows, JSON the full report.
    fn emit_report(&self, base: &str, report: &ExperimentReport) -> Result<()> {
        if self.want_csv() {
            self.write_file(&format!("{base}.csv"), report.to_csv_string())?;
        }
        if self.want_json() {
            self.write_file(&format!("{base}.json"), report.to_json_string())?;
        }
        Ok(())
    }

    fn emit_json_value(&self, base: &str, value: &serde_json::Value) -> Result<()> {
        if self.want_json() {
            let text = serde_json::to_string_pretty(value).expect("JSON value serializes");
            self.write_file(&format!("{base}.json"), text)?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<bool> {
    let emitter = Emitter::new(cli.outdir.clone(), cli.output)?;
    let res = cli.resolution;
    match cli.command {
        Command::Identities { n_max } => run_identities(&emitter, n_max),
        Command::Transform {
            ref function,
            ref input,
            inverse,
        } => run_transform(&emitter, res, function.as_deref(), input.as_deref(), inverse),
        Command::Maximal { op, ref function } => run_maximal(&emitter, res, op, function),
        Command::Vop {
            axis,
            n,
            ref function,
        } => run_vop(&emitter, res, axis, n, function),
        Command::StrongMeans {
            p,
            ref function,
            ref n,
        } => run_strong_means(&emitter, res, p, function, n),
        Command::Lab { ref experiment } => match experiment {
            LabExperiment::Decompose { function, n } => {
                run_decompose(&emitter, res, cli.seed, function.as_deref(), *n)
            }
            LabExperiment::Mainest { function } => {
                run_mainest(&emitter, res, function.as_deref())
            }
            LabExperiment::WeakType { operator, lambdas } => {
                run_weak_type(&emitter, res, operator, lambdas.as_deref())
            }
        },
    }
}

/// Parses a spec and samples it at resolution N; both steps are argument
/// validation, so failures are usage errors.
fn make_function(text: &str, resolution: u8) -> Result<(FunctionSpec, Grid2)> {
    let spec =
        FunctionSpec::parse(text).map_err(|e| usage(format!("--function {text:?}: {e}")))?;
    let grid = spec
        .generate(resolution)
        .map_err(|e| usage(format!("--function {text:?} at resolution {resolution}: {e}")))?;
    Ok((spec, grid))
}

fn run_identities(emitter: &Emitter, n_max: u32) -> Result<bool> {
    let dirichlet = verify_dyadic_dirichlet(n_max).map_err(|e| usage(format!("--n-max: {e}")))?;
    let schipp = verify_schipp_identity(n_max).map_err(|e| usage(format!("--n-max: {e}")))?;
    let passed = dirichlet.all_passed() && schipp.all_passed();

    for r in [&dirichlet, &schipp] {
        println!(
            "{}: {}/{} checks passed",
            r.identity, r.passed, r.checked
        );
    }
    println!("identities: {}", if passed { "passed" } else { "FAILED" });

    if emitter.want_csv() {
        let mut table = ExperimentReport::new(
            "identities",
            vec![
                "identity".into(),
                "checked".into(),
                "passed".into(),
                "first_failure".into(),
            ],
            None,
        );
        for r in [&dirichlet, &schipp] {
            table.push_row(vec![
                Cell::Text(r.identity.clone()),
                Cell::Int(r.checked as i64),
                Cell::Int(r.passed as i64),
                Cell::Text(match &r.first_failure {
                    Some(f) => format!("{f:?}"),
                    None => "none".into(),
                }),
            ]);
        }
        emitter.write_file("identities.csv", table.to_csv_string())?;
    }
    emitter.emit_json_value(
        "identities",
        &json!({
            "n_max": n_max,
            "identities": [dirichlet, schipp],
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn run_transform(
    emitter: &Emitter,
    resolution: u8,
    function: Option<&str>,
    input: Option<&std::path::Path>,
    inverse: bool,
) -> Result<bool> {
    let (source, grid) = match (function, input) {
        (Some(spec), None) => {
            let (spec, grid) = make_function(spec, resolution)?;
            (spec.format(), grid)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let grid = Grid2::from_csv_str(&text)
                .map_err(|e| usage(format!("--input {}: {e}", path.display())))?;
            (path.display().to_string(), grid)
        }
        _ => return Err(usage("transform needs exactly one of --function or --input")),
    };

    let (payload, summary) = if inverse {
        let spec = Spectrum2::new(grid.resolution(), grid.values().to_vec())
            .expect("grid shape is already validated");
        let back = fwht_inverse_2d(&spec);
        println!("integral = {:.16e}", back.integral());
        let summary = json!({
            "direction": "inverse",
            "resolution": back.resolution(),
            "source": source,
            "integral": back.integral(),
        });
        (back.to_csv_string(), summary)
    } else {
        let spec = fwht_forward_2d(&grid);
        println!("energy = {:.16e}", spec.energy());
        let summary = json!({
            "direction": "forward",
            "resolution": grid.resolution(),
            "source": source,
            "energy": spec.energy(),
        });
        (spec.to_csv_string(), summary)
    };

    if emitter.want_csv() {
        emitter.write_file("transform.csv", payload)?;
    }
    emitter.emit_json_value("transform", &summary)?;
    Ok(true)
}

fn run_maximal(emitter: &Emitter, resolution: u8, op: MaximalOp, function: &str) -> Result<bool> {
    let (spec, f) = make_function(function, resolution)?;
    let out = op.apply(&f);
    let l1 = out.norm_p(1.0)?;
    println!("l1_norm = {l1:.16e}");

    let base = format!("maximal-{}", op.name());
    if emitter.want_csv() {
        emitter.write_file(&format!("{base}.csv"), out.to_csv_string())?;
    }
    emitter.emit_json_value(
        &base,
        &json!({
            "op": op.name(),
            "function": spec.format(),
            "resolution": resolution,
            "l1_norm": l1,
        }),
    )?;
    Ok(true)
}

fn run_vop(
    emitter: &Emitter,
    resolution: u8,
    axis: u8,
    n: Option<u32>,
    function: &str,
) -> Result<bool> {
    let (spec, f) = make_function(function, resolution)?;
    let axis_dir = if axis == 1 { Axis::X } else { Axis::Y };
    let out = match n {
        Some(level) => v_hybrid(&f, level, axis_dir)
            .map_err(|e| usage(format!("--n {level}: {e}")))?,
        None => v_hybrid_sup(&f, axis_dir),
    };
    println!("sup = {:.16e}", out.sup_norm());

    if emitter.want_csv() {
        emitter.write_file("vop-grid.csv", out.to_csv_string())?;
    }

    // Distribution table lambda -> mu{ out > lambda } on the default
    // log-spaced grid around the median.
    let mut report = ExperimentReport::new(
        "vop-distribution",
        vec!["lambda".into(), "measure".into()],
        Some(resolution as u32),
    )
    .with_config("axis", axis.to_string())
    .with_config(
        "n",
        n.map(|v| v.to_string()).unwrap_or_else(|| "sup".into()),
    )
    .with_config("function", spec.format());
    let cell = out.cell_measure();
    for lambda in default_lambda_grid(&out) {
        let count = out.values().iter().filter(|&&v| v > lambda).count();
        report.push_row(vec![
            Cell::float(lambda),
            Cell::float(count as f64 * cell),
        ]);
    }
    emitter.emit_report("vop-distribution", &report)?;
    Ok(true)
}

fn run_strong_means(
    emitter: &Emitter,
    resolution: u8,
    p: f64,
    function: &str,
    n_list: &[u64],
) -> Result<bool> {
    if !(p > 0.0) {
        return Err(usage(format!("--p must be positive, got {p}")));
    }
    if n_list.is_empty() {
        return Err(usage("--n needs at least one block count"));
    }
    let (_, f) = make_function(function, resolution)?;
    let report = convergence_report(&f, p, n_list).map_err(|e| usage(format!("--n: {e}")))?;
    for key in ["slope_sup", "slope_l1"] {
        if let Some(v) = report.config_value(key) {
            println!("{key} = {v}");
        }
    }
    emitter.emit_report("strong-means", &report)?;
    Ok(true)
}

fn run_decompose(
    emitter: &Emitter,
    resolution: u8,
    seed: u64,
    function: Option<&str>,
    n: u32,
) -> Result<bool> {
    if n > resolution as u32 {
        return Err(usage(format!(
            "--n {n} exceeds the resolution {resolution}"
        )));
    }
    let default_spec;
    let spec_text = match function {
        Some(s) => s,
        None => {
            default_spec = format!("step:2:{seed}");
            &default_spec
        }
    };
    let (spec, f) = make_function(spec_text, resolution)?;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let alpha = DualCoefficients::new(
        n,
        (0..1usize << n).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
    )
    .expect("freshly drawn coefficients are valid");
    let side = 1u32 << resolution;
    let x = DyadicPoint::new(rng.gen_range(0..side), resolution)?;
    let y = DyadicPoint::new(rng.gen_range(0..side), resolution)?;

    let breakdown = j_terms(&f, &alpha, x, y)?;
    let duality = duality_check(&f, n, x, y)?;
    let gap = (breakdown.sum - breakdown.bilinear).abs();
    let passed = gap <= 1e-9 * (1.0 + breakdown.bilinear.abs()) && duality.rel_err <= 1e-10;
    println!(
        "sum = {:.16e}, bilinear = {:.16e}, gap = {:.3e}",
        breakdown.sum, breakdown.bilinear, gap
    );
    println!(
        "decomposition: {}",
        if passed { "passed" } else { "FAILED" }
    );

    let mut report = ExperimentReport::new(
        "lab-decompose",
        vec!["term".into(), "value".into()],
        Some(resolution as u32),
    )
    .with_seed(seed)
    .with_config("function", spec.format())
    .with_config("n", n.to_string())
    .with_config("x", x.code().to_string())
    .with_config("y", y.code().to_string())
    .with_config("duality_rel_err", format!("{:.17e}", duality.rel_err));
    for (k, value) in breakdown.terms.iter().enumerate() {
        report.push_row(vec![
            Cell::Text(format!("J{}", k + 1)),
            Cell::float(*value),
        ]);
    }
    report.push_row(vec![Cell::Text("sum".into()), Cell::float(breakdown.sum)]);
    report.push_row(vec![
        Cell::Text("bilinear".into()),
        Cell::float(breakdown.bilinear),
    ]);
    emitter.emit_report("lab-decompose", &report)?;
    Ok(passed)
}

fn run_mainest(emitter: &Emitter, resolution: u8, function: Option<&str>) -> Result<bool> {
    match function {
        Some(text) => {
            let (spec, f) = make_function(text, resolution)?;
            let mut report = mainest_ratio(&f)?;
            report.set_config("function", spec.format());
            let overall = report.config_value("overall_max").unwrap_or("?").to_string();
            println!("overall_max = {overall}");
            emitter.emit_report("lab-mainest", &report)?;
        }
        None => {
            let corpus = standard_corpus(resolution)
                .map_err(|e| usage(format!("--resolution {resolution}: {e}")))?;
            let mut report = ExperimentReport::new(
                "lab-mainest-corpus",
                vec!["function".into(), "overall_max".into()],
                Some(resolution as u32),
            );
            let mut corpus_max = 0.0f64;
            for (spec, f) in &corpus {
                let single = mainest_ratio(f)?;
                let overall: f64 = single
                    .config_value("overall_max")
                    .expect("mainest_ratio always records overall_max")
                    .parse()
                    .expect("overall_max is a float");
                corpus_max = corpus_max.max(overall);
                report.push_row(vec![Cell::Text(spec.format()), Cell::float(overall)]);
            }
            report.set_config("corpus_max", format!("{corpus_max:.17e}"));
            println!("corpus_max = {corpus_max:.17e}");
            emitter.emit_report("lab-mainest", &report)?;
        }
    }
    Ok(true)
}

fn run_weak_type(
    emitter: &Emitter,
    resolution: u8,
    operator: &str,
    lambdas: Option<&[f64]>,
) -> Result<bool> {
    let op = WeakTypeOperator::parse(operator).map_err(|e| usage(format!("--operator: {e}")))?;
    let corpus = standard_corpus(resolution)
        .map_err(|e| usage(format!("--resolution {resolution}: {e}")))?;
    let report = weak_type_constant(op, &corpus, lambdas)
        .map_err(|e| usage(format!("--lambdas: {e}")))?;
    println!("corpus_max = {:.17e}", report.corpus_max);

    if emitter.want_csv() {
        emitter.write_file(
            "lab-weak-type.csv",
            report.to_experiment_report().to_csv_string(),
        )?;
    }
    if emitter.want_json() {
        emitter.write_file("lab-weak-type.json", report.to_json_string())?;
    }
    Ok(true)
}
