use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use socmdp::harness::export::{trace_from_json, trace_to_csv, trace_to_json};
use socmdp::harness::oracle::compare_on_fixture;
use socmdp::harness::run::{default_jobs, run, RunManifest};
use socmdp::planner::Planner;
use socmdp::rollout::{replay, MODELS};
use socmdp::scenarios::{
    canonical_layout, canonical_scenario, enumerate_scenarios, load_scenario, scenario_to_json, ScenarioSpec,
};
use socmdp::{Error, Result, SocialGoal};

#[derive(Parser)]
#[command(name = "socmdp", version, about = "Social MDP planning and goal inference in a two-agent gridworld")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roll out scenarios and write one trace per (scenario, model).
    Run(RunArgs),
    /// Write the 72 canonical scenario files.
    Enumerate {
        #[arg(long, default_value = "scenarios")]
        out: PathBuf,
    },
    /// Re-run inference over the actions recorded in a trace.
    Infer(InferArgs),
    /// Compare the planner with brute-force expectimax on the 4x4 fixture.
    Oracle {
        #[arg(long, default_value_t = 1)]
        level: u8,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value = "cooperation")]
        social: String,
    },
}

#[derive(Args)]
struct Overrides {
    /// Models to export, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = MODELS.map(String::from))]
    models: Vec<String>,
    /// Reasoning level of the yellow agent.
    #[arg(long)]
    level: Option<u8>,
    /// Softmax temperature of every partner model.
    #[arg(long)]
    tau: Option<f64>,
    /// Reserved; every run is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, env = "SOCMDP_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario ids (S1..S72) or paths to scenario files, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    scenarios: Vec<String>,
    /// All 72 canonical scenarios.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    o: Overrides,
}

#[derive(Args)]
struct InferArgs {
    /// Trace file to replay.
    #[arg(long)]
    trace: PathBuf,
    /// Scenario file; defaults to the canonical scenario named in the trace.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    o: Overrides,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn resolve(item: &str) -> Result<ScenarioSpec> {
    if item.ends_with(".json") || Path::new(item).is_file() {
        load_scenario(&read(Path::new(item))?)
    } else {
        canonical_scenario(item)
    }
}

fn apply(spec: &mut ScenarioSpec, o: &Overrides) -> Result<()> {
    if let Some(l) = o.level {
        spec.agents[0].level = l;
    }
    if let Some(t) = o.tau {
        spec.config.tau = t;
    }
    spec.validate()
}

fn cmd_run(a: RunArgs) -> Result<bool> {
    let mut specs = if a.all {
        enumerate_scenarios(&canonical_layout())
    } else if a.scenarios.is_empty() {
        return Err(Error::Invalid("give --scenarios or --all".into()));
    } else {
        a.scenarios.iter().map(|s| resolve(s)).collect::<Result<Vec<_>>>()?
    };
    for s in &mut specs {
        apply(s, &a.o)?;
    }
    let manifest = RunManifest {
        scenarios: specs,
        models: a.o.models.clone(),
        out: a.o.out.clone(),
        jobs: a.o.jobs.unwrap_or_else(default_jobs),
    };
    let report = run(&manifest)?;
    for (id, e) in &report.failures {
        eprintln!("{id}: {e}");
    }
    println!(
        "{} traces written to {}, {} scenario(s) failed",
        report.rows.len(),
        manifest.out.display(),
        report.failures.len()
    );
    Ok(report.ok())
}

fn cmd_enumerate(out: &Path) -> Result<bool> {
    std::fs::create_dir_all(out).map_err(|source| Error::Io { path: out.display().to_string(), source })?;
    let specs = enumerate_scenarios(&canonical_layout());
    for s in &specs {
        let path = out.join(format!("{}.json", s.id));
        std::fs::write(&path, scenario_to_json(s))
            .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    }
    println!("{} scenarios written to {}", specs.len(), out.display());
    Ok(true)
}

fn cmd_infer(a: InferArgs) -> Result<bool> {
    let original = trace_from_json(&read(&a.trace)?)?;
    let mut spec = match &a.scenario {
        Some(p) => load_scenario(&read(p)?)?,
        None => canonical_scenario(&original.scenario)?,
    };
    apply(&mut spec, &a.o)?;
    let script: Vec<_> = original.steps.iter().map(|s| s.joint).collect();
    let planner = Planner::new(spec.grid().clone(), spec.config)?;
    let ep = replay(&planner, &spec, &script)?;
    std::fs::create_dir_all(&a.o.out).map_err(|source| Error::Io { path: a.o.out.display().to_string(), source })?;
    for m in &a.o.models {
        let mut tr = ep.trace(m).ok_or_else(|| Error::Invalid(format!("unknown model {m:?}")))?.clone();
        tr.terminated_reason = original.terminated_reason;
        for (ext, text) in [("json", trace_to_json(&tr)?), ("csv", trace_to_csv(&tr)?)] {
            let path = a.o.out.join(format!("{}.{m}.{ext}", spec.id));
            std::fs::write(&path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        }
    }
    println!("replayed {} steps of {}", script.len(), spec.id);
    Ok(true)
}

fn cmd_oracle(level: u8, depth: u32, social: &str) -> Result<bool> {
    let social = SocialGoal::parse(social).ok_or_else(|| Error::Invalid(format!("unknown social goal {social:?}")))?;
    let start = std::time::Instant::now();
    let c = compare_on_fixture(level, social, depth)?;
    println!(
        "level {level} {social} depth {depth}: {} states, max |planner - oracle| = {:.3e} ({:.1?})",
        c.states,
        c.max_abs_diff,
        start.elapsed()
    );
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Enumerate { out } => cmd_enumerate(&out),
        Command::Infer(a) => cmd_infer(a),
        Command::Oracle { level, depth, social } => cmd_oracle(level, depth, &social),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
