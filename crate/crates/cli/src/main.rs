use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gpfewshot::format::{fmt_g, to_json_string};
use gpfewshot::policy::Trajectory;
use gpfewshot::{bounds, figures, sim, validation};
use serde::Serialize;

mod config;
mod failure;

use config::{Plan, RunConfig};
use failure::{Failure, EXIT_VALIDATION};

/// Regret bounds and simulations for Gaussian-process optimization with
/// few evaluations.
#[derive(Debug, Parser)]
#[command(name = "gpfewshot", version)]
struct Cli {
    /// Master seed (overrides any seed in a config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; the GPFEWSHOT_THREADS variable takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one closed-form bound and print it as JSON.
    Bound(BoundArgs),
    /// Write the data behind a bound plot as CSV.
    Figure {
        #[arg(long)]
        figure: u8,
    },
    /// Run a Monte Carlo experiment described by a TOML or JSON file.
    Simulate {
        config: PathBuf,
        /// Also write every trajectory as CSV to this path.
        #[arg(long)]
        dump_trajectories: Option<PathBuf>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Validate {
        /// Reduced episode counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundCli {
    Thm1,
    Cor1,
    LowerIid,
    LowerPi,
    Thm2,
    Grunewalder,
    RequiredT,
}

#[derive(Debug, clap::Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    kind: BoundCli,
    /// Number of arms.
    #[arg(long)]
    n: Option<f64>,
    /// Evaluation budget.
    #[arg(long)]
    t: Option<f64>,
    /// Input dimension.
    #[arg(long)]
    d: Option<u32>,
    /// Lipschitz constant of the kernel.
    #[arg(long)]
    lk: Option<f64>,
    /// Prior standard deviation (default 1).
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    target_normreg: Option<f64>,
}

#[derive(Serialize)]
struct BoundOutput {
    kind: &'static str,
    inputs: BTreeMap<String, f64>,
    value: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let err = serde_json::json!({ "error": f.category(), "exit_code": f.code, "message": f.message });
            eprintln!("{err}");
            ExitCode::from(f.code)
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var("GPFEWSHOT_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Failure::config(format!("GPFEWSHOT_THREADS must be a non-negative integer, got {v:?}"))),
        _ => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(cli.threads)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::internal(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Bound(args) => cmd_bound(args, cli.out.as_deref()),
        Command::Figure { figure } => cmd_figure(*figure, cli.out.as_deref()),
        Command::Simulate { config, dump_trajectories } => {
            cmd_simulate(config, dump_trajectories.as_deref(), cli.seed, cli.out.as_deref())
        }
        Command::Validate { quick } => cmd_validate(*quick, cli.seed, cli.out.as_deref()),
    })
}

/// Writes `text` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::internal(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn required<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::config(format!("--{flag} is required for --kind {kind}")))
}

fn cmd_bound(a: &BoundArgs, out: Option<&Path>) -> Result<(), Failure> {
    let name = match a.kind {
        BoundCli::Thm1 => "thm1",
        BoundCli::Cor1 => "cor1",
        BoundCli::LowerIid => "lower-iid",
        BoundCli::LowerPi => "lower-pi",
        BoundCli::Thm2 => "thm2",
        BoundCli::Grunewalder => "grunewalder",
        BoundCli::RequiredT => "required-t",
    };
    let report = |r: bounds::BoundReport| (r.inputs, serde_json::json!(r.value));
    let (inputs, value) = match a.kind {
        BoundCli::Thm1 | BoundCli::Cor1 | BoundCli::LowerIid | BoundCli::LowerPi => {
            let n = required(a.n, "n", name)?;
            let t = required(a.t, "t", name)?;
            report(match a.kind {
                BoundCli::Thm1 => bounds::BoundReport::thm1(n, t)?,
                BoundCli::Cor1 => bounds::BoundReport::cor1(n, t)?,
                BoundCli::LowerIid => bounds::BoundReport::lower_iid(n, t)?,
                _ => bounds::BoundReport::lower_prior_independent(n, t)?,
            })
        }
        BoundCli::Thm2 => report(bounds::BoundReport::thm2(
            required(a.d, "d", name)?,
            required(a.t, "t", name)?,
            required(a.lk, "lk", name)?,
            a.sigma.unwrap_or(1.0),
        )?),
        BoundCli::Grunewalder => report(bounds::BoundReport::grunewalder(
            required(a.d, "d", name)?,
            required(a.t, "t", name)?,
            required(a.lk, "lk", name)?,
        )?),
        BoundCli::RequiredT => {
            let n = required(a.n, "n", name)?;
            let target = required(a.target_normreg, "target-normreg", name)?;
            let t = bounds::required_t_bisection(n, target)?;
            let inputs = BTreeMap::from([("n".to_string(), n), ("target_normreg".to_string(), target)]);
            (inputs, serde_json::json!(t))
        }
    };
    emit(out, &to_json_string(&BoundOutput { kind: name, inputs, value })?)
}

fn cmd_figure(figure: u8, out: Option<&Path>) -> Result<(), Failure> {
    let csv = match figure {
        1 => figures::figure1_csv(&figures::figure1()?),
        2 => figures::figure2_csv(&figures::figure2()?),
        3 => figures::figure3_csv(&figures::figure3()?),
        other => return Err(Failure::config(format!("unknown figure {other}; expected 1, 2 or 3"))),
    };
    emit(out, &csv)
}

fn trajectories_csv(trajs: &[Trajectory]) -> String {
    let mut s = String::from("episode,step,action,observation,running_max,running_min\n");
    for (e, tr) in trajs.iter().enumerate() {
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for (step, (&a, &y)) in tr.actions().iter().zip(tr.observations()).enumerate() {
            hi = hi.max(y);
            lo = lo.min(y);
            s.push_str(&format!("{e},{},{a},{},{},{}\n", step + 1, fmt_g(y), fmt_g(hi), fmt_g(lo)));
        }
    }
    s
}

fn cmd_simulate(path: &Path, dump: Option<&Path>, seed: Option<u64>, out: Option<&Path>) -> Result<(), Failure> {
    let cfg = RunConfig::load(path)?;
    let report_path = out.map(Path::to_path_buf).or_else(|| cfg.output.report.clone());
    let dump_path = dump.map(Path::to_path_buf).or_else(|| cfg.output.trajectories.clone());
    let (report, trajectories) = match cfg.plan(seed)? {
        Plan::Experiment(mut sc) => {
            sc.keep_trajectories = dump_path.is_some();
            let out = sim::run_experiment(&sc)?;
            (out.report, out.trajectories)
        }
        Plan::AdversarialSpike { n_arms, horizon, policy, episodes, seed } => {
            if dump_path.is_some() {
                return Err(Failure::config("trajectory dumps need an explicit instance.spike_index"));
            }
            (sim::adversarial_spike_demo(n_arms, horizon, policy, episodes, seed)?.report, None)
        }
    };
    if let (Some(p), Some(t)) = (&dump_path, &trajectories) {
        write_atomic(p, &trajectories_csv(t))?;
    }
    emit(report_path.as_deref(), &to_json_string(&report)?)
}

fn cmd_validate(quick: bool, seed: Option<u64>, out: Option<&Path>) -> Result<(), Failure> {
    let mode = if quick { validation::Mode::Quick } else { validation::Mode::Full };
    let seed = seed.unwrap_or(validation::DEFAULT_SEED);
    let report = validation::run_all(mode, seed, |r, elapsed| {
        eprintln!("{}", validation::format_line(r, elapsed));
    })?;
    if let Some(p) = out {
        write_atomic(p, &to_json_string(&report)?)?;
    }
    let failed = report.failed_ids();
    if failed.is_empty() {
        eprintln!("all {} criteria passed", report.criteria.len());
        Ok(())
    } else {
        let ids: Vec<String> = failed.iter().map(u32::to_string).collect();
        Err(Failure::new(EXIT_VALIDATION, format!("failed criteria: {}", ids.join(", "))))
    }
}
