mod config;
mod error;
mod grammar;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hardyops::verify::{rank_study, run_suite, Suite};
use hardyops::operators::assemble;
use hardyops::{CheckReport, CheckStatus, InnerFunction, OperatorKind};

use config::{ConfigArgs, Format, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hardyops", version, about = "Matrices and identity checks for restricted and truncated Toeplitz/Hankel operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble one operator matrix; writes CSV plus a JSON sidecar.
    Assemble {
        #[arg(long, value_parser = parse_kind)]
        kind: OperatorKind,
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run a check suite and emit one report per check.
    Verify {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Numerical rank and leading singular values over a window sequence.
    Study {
        #[arg(long, value_parser = parse_kind)]
        kind: OperatorKind,
        #[command(flatten)]
        inputs: Inputs,
        /// Ascending windows, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        windows: Vec<usize>,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Debug, clap::Args)]
struct Inputs {
    /// Symbol, e.g. "laurent: -1:1" or "rational: (1)/(z-2)".
    #[arg(long)]
    phi: String,
    /// Inner function η, e.g. "blaschke: 0"; defaults to the constant 1.
    #[arg(long, default_value = "blaschke:")]
    eta: String,
    /// Inner function θ, e.g. "blaschke: 0.5, atom@0:1".
    #[arg(long)]
    theta: String,
}

fn parse_kind(s: &str) -> Result<OperatorKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = OperatorKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|k| k.as_str()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

struct Parsed {
    phi: hardyops::Symbol,
    eta: InnerFunction,
    theta: InnerFunction,
}

impl Inputs {
    fn parse(&self) -> Result<Parsed, CliError> {
        let eta = grammar::parse_inner(&self.eta)?;
        let theta = grammar::parse_inner(&self.theta)?;
        let phi = grammar::parse_symbol(&self.phi, &eta, &theta)?;
        Ok(Parsed { phi, eta, theta })
    }
}

fn setup(args: &ConfigArgs) -> Result<RunConfig, CliError> {
    let cfg = args.resolve()?;
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Assembly(format!("thread pool: {e}")))?;
    }
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// Machine output goes to a file when `output_dir` is set, otherwise to stdout.
fn emit(cfg: &RunConfig, name: &str, contents: &str) -> Result<(), CliError> {
    match &cfg.output_dir {
        Some(dir) => {
            let path = write_file(dir, name, contents)?;
            println!("{}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn cmd_assemble(kind: OperatorKind, inputs: &Inputs, cfg: &RunConfig) -> Result<bool, CliError> {
    let p = inputs.parse()?;
    let acfg = hardyops::AssemblyConfig { window: cfg.window, expansion_factor: cfg.internal_expansion_factor };
    let m = assemble(kind, &p.phi, &p.eta, &p.theta, &acfg)?;
    let mut sidecar = m.sidecar();
    sidecar["kind"] = kind.as_str().into();
    sidecar["phi"] = inputs.phi.as_str().into();
    sidecar["eta"] = inputs.eta.as_str().into();
    sidecar["theta"] = inputs.theta.as_str().into();
    sidecar["window"] = cfg.window.into();
    sidecar["internal_expansion_factor"] = cfg.internal_expansion_factor.into();
    let sidecar = serde_json::to_string_pretty(&sidecar).map_err(|e| CliError::Assembly(e.to_string()))?;

    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let stem = format!("{}_N{}", kind.as_str(), cfg.window);
    let csv = write_file(&dir, &format!("{stem}.csv"), &m.to_csv())?;
    let json = write_file(&dir, &format!("{stem}.json"), &sidecar)?;
    println!("{}", csv.display());
    println!("{}", json.display());
    eprintln!(
        "{kind}: {}x{} matrix, entry error ≤ {:e}{}",
        m.rows(),
        m.cols(),
        m.entry_error,
        if m.heuristic { " (heuristic)" } else { "" }
    );
    Ok(true)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn reports_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("check_id,verdict,status,expect,residual,threshold,passed,seed\n");
    for r in reports {
        let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{:?},{:?},{:?},{:e},{:e},{},{}\n",
            csv_field(&r.check_id),
            r.verdict,
            r.status,
            r.expect,
            r.residual,
            r.threshold,
            r.passed,
            seed
        ));
    }
    out
}

fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<bool, CliError> {
    let reports = run_suite(suite, &cfg.verify(), cfg.seed);
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    let certified_fail = reports.iter().filter(|r| r.status == CheckStatus::Certified && !r.passed).count();
    let heuristic_fail = reports.iter().filter(|r| r.status == CheckStatus::Heuristic && !r.passed).count();
    let passed = reports.iter().filter(|r| r.passed).count();
    eprintln!(
        "suite {suite}: {} checks, {passed} passed, {certified_fail} certified failures, {heuristic_fail} heuristic warnings (N={}, seed={})",
        reports.len(),
        cfg.window,
        cfg.seed
    );
    let (name, body) = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&reports).map_err(|e| CliError::Assembly(e.to_string()))?;
            s.push('\n');
            (format!("verify_{suite}.json"), s)
        }
        Format::Csv => (format!("verify_{suite}.csv"), reports_csv(&reports)),
    };
    emit(cfg, &name, &body)?;
    Ok(certified_fail == 0)
}

fn cmd_study(kind: OperatorKind, inputs: &Inputs, windows: &[usize], cfg: &RunConfig) -> Result<bool, CliError> {
    if windows.is_empty() || windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input("--windows must be strictly ascending".into()));
    }
    let p = inputs.parse()?;
    let study = rank_study(kind, &p.phi, &p.eta, &p.theta, windows, cfg.tol_rank, cfg.internal_expansion_factor)?;
    eprintln!("{}", study.verdict_line());
    let stem = format!("study_{}", kind.as_str());
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(cfg, &format!("{stem}.csv"), &study.to_csv())?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&study).map_err(|e| CliError::Assembly(e.to_string()))?;
            s.push('\n');
            emit(cfg, &format!("{stem}.json"), &s)?
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Assemble { kind, inputs, config } => cmd_assemble(kind, &inputs, &setup(&config)?),
        Command::Verify { suite, config } => cmd_verify(suite, &setup(&config)?),
        Command::Study { kind, inputs, windows, config } => cmd_study(kind, &inputs, &windows, &setup(&config)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
