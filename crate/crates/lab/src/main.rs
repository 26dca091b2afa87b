use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lanczos_core::{bounds, spectra};
use lanczos_lab::runner::{RunConfig, RunOutputs};
use lanczos_lab::{formats, predict, runner, verify};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Numerical laboratory for the Lanczos method: spectrum generators,
/// randomized error experiments, uniform error bounds, asymptotic
/// predictors, and a self-verification suite.
#[derive(Parser)]
#[command(name = "lanczos-lab", version, disable_help_subcommand = true)]
struct Cli {
    /// Directory for output files given as bare names
    /// (default: $LANCZOS_LAB_OUT, else the current directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Worker threads for experiment trials. Results are independent of
    /// this value; trials currently run on the orchestrating thread.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a spectrum in the text format (value multiplicity per line).
    Spectrum(SpectrumArgs),
    /// Run a randomized relative-error experiment and emit CSV/JSON/SVG.
    Run(RunArgs),
    /// Evaluate a named error bound and print it as JSON.
    Bounds(BoundsArgs),
    /// Print the asymptotic error predictor (b - xi(m)) / (b - a) per m.
    Predict(PredictArgs),
    /// Run the self-check suite; non-zero exit on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// lap | unif | semi | log | legendre-hard | jacobi-hard
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Target iteration count for the hard instances.
    #[arg(long)]
    m: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Flat JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// lap | unif | semi | log | legendre-hard | jacobi-hard | file
    #[arg(long)]
    kind: Option<String>,
    /// Spectrum file for --kind file.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tracked eigenvalue, 1-based from the top.
    #[arg(long)]
    index: Option<usize>,
    /// matrix | measure | auto
    #[arg(long)]
    path: Option<String>,
    /// CSV output path for the per-m statistics.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON output path for the run manifest.
    #[arg(long)]
    json: Option<PathBuf>,
    /// SVG box-plot output path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// kps | kw-expected | kw-prob | dcm-pnorm | main-upper | main-lower |
    /// clustered | clustered-prob | arb-eig | arb-eig-prob | cond
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Eigenvalue index for the interior-eigenvalue bounds.
    #[arg(long)]
    index: Option<usize>,
    /// Normalized spectral gap delta for the interior-eigenvalue bounds.
    #[arg(long)]
    delta: Option<f64>,
    /// Condition-number ratio (kappa_1 + kappa_m) / kappa for cond.
    #[arg(long)]
    kappa_bar: Option<f64>,
    /// Chebyshev parameters for kps.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tan_angle_sq: Option<f64>,
}

#[derive(Args)]
struct PredictArgs {
    /// uniform | arcsine | semicircle
    #[arg(long)]
    density: Option<String>,
    /// Spectrum file; its empirical measure drives the predictor.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Support interval of the limiting density.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Single iteration count (table rows m..m if --m-max absent).
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    m_max: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// quick | full
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    /// Corrupt a Gauss-Legendre weight to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt_legendre: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // I/O failures exit 3; everything else is a usage/config error.
            if err.chain().any(|c| c.is::<std::io::Error>()) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var_os("LANCZOS_LAB_OUT").map(PathBuf::from));
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args, out_dir.as_deref()),
        Command::Run(args) => cmd_run(args, out_dir.as_deref()),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn resolve(out_dir: Option<&Path>, path: PathBuf) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path,
    }
}

fn cmd_spectrum(args: SpectrumArgs, out_dir: Option<&Path>) -> Result<ExitCode> {
    let spec = match args.kind.as_str() {
        "lap" => spectra::lap_spectrum(args.n),
        "unif" => spectra::unif_spectrum(args.n),
        "semi" => spectra::semi_spectrum(args.n),
        "log" => spectra::log_spectrum(args.n),
        "legendre-hard" => {
            let m = args.m.context("--kind legendre-hard requires --m")?;
            spectra::legendre_hard_instance(args.n, m)
        }
        "jacobi-hard" => {
            let m = args.m.context("--kind jacobi-hard requires --m")?;
            spectra::jacobi_hard_instance(args.n, m)
        }
        other => bail!("unknown spectrum kind {other:?}"),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let text = spec.to_text();
    match args.out {
        Some(path) => {
            let path = resolve(out_dir, path);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(args: RunArgs, out_dir: Option<&Path>) -> Result<ExitCode> {
    let command: Vec<String> = std::env::args().collect();
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<RunConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => RunConfig {
            kind: args.kind.clone().context("--kind (or --config) is required")?,
            n: args.n.context("--n (or --config) is required")?,
            m_max: args.m_max.context("--m-max (or --config) is required")?,
            trials: args.trials.unwrap_or(20),
            seed: args.seed.unwrap_or(0),
            index: args.index.unwrap_or(1),
            path: args.path.clone().unwrap_or_else(|| "auto".into()),
        },
    };
    if args.config.is_some() {
        if let Some(v) = args.kind {
            config.kind = v;
        }
        if let Some(v) = args.n {
            config.n = v;
        }
        if let Some(v) = args.m_max {
            config.m_max = v;
        }
        if let Some(v) = args.trials {
            config.trials = v;
        }
        if let Some(v) = args.seed {
            config.seed = v;
        }
        if let Some(v) = args.index {
            config.index = v;
        }
        if let Some(v) = args.path {
            config.path = v;
        }
    }
    let outputs = RunOutputs {
        csv: args.csv.map(|p| resolve(out_dir, p)),
        json: args.json.map(|p| resolve(out_dir, p)),
        svg: args.svg.map(|p| resolve(out_dir, p)),
    };
    let (stats, _) = runner::execute_run(&config, args.spectrum.as_deref(), &outputs, command)?;
    if outputs.csv.is_none() {
        print!("{}", formats::stats_csv(&stats));
    }
    Ok(ExitCode::SUCCESS)
}

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("{flag} is required for this bound"))
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    let p = args.p.unwrap_or(1.0);
    let report = match args.name.as_str() {
        "kps" => {
            let gamma = require(args.gamma, "--gamma")?;
            let tan = require(args.tan_angle_sq, "--tan-angle-sq")?;
            let m = require(args.m, "--m")?;
            let value = bounds::kps_bound(gamma, tan, m).map_err(|e| anyhow::anyhow!("{e}"))?;
            bounds::BoundReport {
                name: "kps",
                value,
                hypotheses: vec![],
                params: vec![("gamma", gamma), ("tan_angle_sq", tan), ("m", m as f64)],
            }
        }
        "kw-expected" => bounds::kw_expected_bound(require(args.n, "--n")?, require(args.m, "--m")?),
        "kw-prob" => bounds::kw_prob_bound(
            require(args.n, "--n")?,
            require(args.m, "--m")?,
            require(args.eps, "--eps")?,
        ),
        "dcm-pnorm" => bounds::dcm_pnorm_bound(require(args.n, "--n")?, require(args.m, "--m")?, p),
        "main-upper" => {
            bounds::main_upper_bound(require(args.n, "--n")?, require(args.m, "--m")?, p)
        }
        "main-lower" => {
            let reports = bounds::main_lower_bounds(require(args.n, "--n")?, require(args.m, "--m")?);
            println!("{}", serde_json::to_string_pretty(&reports.iter().map(report_json).collect::<Vec<_>>())?);
            return Ok(ExitCode::SUCCESS);
        }
        "clustered" => bounds::clustered_bound(require(args.m, "--m")?, p, require(args.alpha, "--alpha")?)
            .map_err(|e| anyhow::anyhow!("{e}"))?,
        "clustered-prob" => {
            bounds::clustered_prob_bound(require(args.m, "--m")?, require(args.alpha, "--alpha")?)
                .map_err(|e| anyhow::anyhow!("{e}"))?
        }
        "arb-eig" => bounds::arbitrary_eig_bound(
            require(args.n, "--n")?,
            require(args.m, "--m")?,
            p,
            require(args.index, "--index")?,
            require(args.delta, "--delta")?,
        )
        .map_err(|e| anyhow::anyhow!("{e}"))?,
        "arb-eig-prob" => bounds::arbitrary_eig_prob_bound(
            require(args.n, "--n")?,
            require(args.m, "--m")?,
            require(args.index, "--index")?,
            require(args.delta, "--delta")?,
        )
        .map_err(|e| anyhow::anyhow!("{e}"))?,
        "cond" => {
            let (upper, lower) = bounds::condition_bounds(
                require(args.kappa_bar, "--kappa-bar")?,
                require(args.n, "--n")?,
                require(args.m, "--m")?,
                p,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            println!(
                "{}",
                serde_json::to_string_pretty(&vec![report_json(&upper), report_json(&lower)])?
            );
            return Ok(ExitCode::SUCCESS);
        }
        other => bail!("unknown bound name {other:?}"),
    };
    println!("{}", serde_json::to_string_pretty(&report_json(&report))?);
    Ok(ExitCode::SUCCESS)
}

fn report_json(report: &bounds::BoundReport) -> serde_json::Value {
    serde_json::json!({
        "name": report.name,
        "value": report.value,
        "hypotheses": report
            .hypotheses
            .iter()
            .map(|h| serde_json::json!({ "name": h.name, "met": h.met }))
            .collect::<Vec<_>>(),
        "params": report.params,
    })
}

fn cmd_predict(args: PredictArgs) -> Result<ExitCode> {
    let m_max = args.m_max.unwrap_or(args.m);
    if m_max < args.m {
        bail!("--m-max must be at least --m");
    }
    let rec = match (&args.density, &args.spectrum) {
        (Some(name), None) => predict::density_recurrence(name, args.a, args.b, m_max + 1)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading spectrum {}", path.display()))?;
            let spec =
                spectra::Spectrum::from_text(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
            predict::spectrum_recurrence(&spec, m_max + 1)?
        }
        _ => bail!("exactly one of --density or --spectrum is required"),
    };
    println!("m,predictor");
    for (m, value) in predict::predictor_table(&rec, args.m, m_max, args.a, args.b)? {
        println!("{m},{value:.4}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let level = match args.level {
        LevelArg::Quick => verify::Level::Quick,
        LevelArg::Full => verify::Level::Full,
    };
    let fault = verify::Fault {
        corrupt_legendre: args.corrupt_legendre,
    };
    let checks = verify::run_checks(level, fault);
    for c in &checks {
        println!(
            "{} {} — {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if verify::all_passed(&checks) {
        println!("verify: all {} checks passed", checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        println!("verify: FAILED ({})", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
