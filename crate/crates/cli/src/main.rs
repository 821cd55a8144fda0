//! Command-line front end: model/formula loading, single queries, and the
//! benchmark sweeps with CSV reports.

use anyhow::{Context, Result};
use atl_approx::exact::{self, ExactOptions, Semantics, VerdictValue};
use atl_approx::experiments::{
    counterexample_table, run_bridge, run_counterexamples, run_voting, BridgeVariant, LowerKind,
    SweepOptions, VotingFormula,
};
use atl_approx::logic::{self, Formula, Goal, StrategyKind};
use atl_approx::report::ExperimentReport;
use atl_approx::textfmt;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "atlapprox", version, about = "Fixpoint lower/upper approximation of strategic abilities under imperfect information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both approximations of a formula at a state of a model.
    Check(CheckArgs),
    /// Check a model file against the structural invariants.
    Validate { model: PathBuf },
    /// Print the lower/upper translations of a formula (and the
    /// reachability-only fixpoints when it has the shape <<A>> F goal).
    Translate { formula: String },
    /// Run a benchmark family and emit a report.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct CheckArgs {
    model: PathBuf,
    formula: String,
    /// State to evaluate at (default: first declared state).
    #[arg(long)]
    state: Option<String>,
    /// Also run the brute-force checker (budget-guarded).
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value = "subjective")]
    semantics: SemanticsArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Subjective,
    Objective,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Voting/coercion scenario with k voters and one coercer.
    Voting(VotingArgs),
    /// Bridge endplay, standard turn-based variant.
    Bridge(BridgeArgs),
    /// Bridge endplay with the absent-minded declarer.
    BridgeAm(BridgeArgs),
    /// The fixed verdict table for the counterexample structures.
    Counterexamples {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VotingArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "phi1")]
    formula: VotingFormulaArg,
    /// Also run the brute-force checker per instance.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VotingFormulaArg {
    Phi1,
    Phi2,
}

#[derive(Args)]
struct BridgeArgs {
    #[arg(long)]
    n: u8,
    #[arg(long)]
    k: u8,
    /// Number of seeded random instances.
    #[arg(long, default_value = "20")]
    seeds: u64,
    /// First seed of the range.
    #[arg(long, default_value = "0")]
    seed_base: u64,
    /// Also run the brute-force checker per instance.
    #[arg(long)]
    exact: bool,
    /// Additionally run the plain epistemic fixpoint lower bound for
    /// comparison against the steadfast one.
    #[arg(long)]
    compare_tr2: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for the sweep (0 = all cores).
    #[arg(long, default_value = "0")]
    jobs: usize,
}

fn sweep_options(run_exact: bool, jobs: usize) -> SweepOptions {
    let mut opts = SweepOptions {
        run_exact,
        jobs,
        ..Default::default()
    };
    if let Ok(v) = std::env::var("ATLAPPROX_BUDGET") {
        match v.parse::<u128>() {
            Ok(budget) => {
                opts.eval.assignment_budget = budget;
                opts.exact.strategy_budget = budget;
            }
            Err(_) => eprintln!("warning: ignoring unparseable ATLAPPROX_BUDGET `{v}`"),
        }
    }
    opts
}

fn write_report(report: &ExperimentReport, output: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = output {
        std::fs::write(path, report.to_csv())
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.model)
        .with_context(|| format!("reading {}", args.model.display()))?;
    let model = textfmt::parse_model(&text)?;
    let report = model.validate();
    if !report.is_ok() {
        eprintln!("model failed validation:\n{report}");
        return Ok(ExitCode::from(1));
    }
    let formula = logic::parse(&args.formula)?;
    let state = match &args.state {
        Some(name) => model.state_id(name)?,
        None => model.first_state(),
    };
    let opts = sweep_options(false, 1);
    let v = exact::verdict(&model, state, &formula, &opts.eval)?;
    println!("state: {}", model.state_name(state));
    println!(
        "lower (tr): {:<5}  ({} rounds, {:.3} ms)",
        v.lower,
        v.lower_rounds,
        v.lower_time.as_secs_f64() * 1e3
    );
    println!(
        "upper (TR): {:<5}  ({} rounds, {:.3} ms)",
        v.upper,
        v.upper_rounds,
        v.upper_time.as_secs_f64() * 1e3
    );
    println!("verdict: {}", v.value);
    if args.exact {
        let exact_opts = ExactOptions {
            semantics: match args.semantics {
                SemanticsArg::Subjective => Semantics::Subjective,
                SemanticsArg::Objective => Semantics::Objective,
            },
            strategy_budget: opts.exact.strategy_budget,
        };
        let t = std::time::Instant::now();
        match exact::check_ir(&model, &formula, &exact_opts) {
            Ok(set) => println!(
                "exact ({}): {}  ({:.3} ms)",
                match exact_opts.semantics {
                    Semantics::Subjective => "subjective",
                    Semantics::Objective => "objective",
                },
                set.contains(state),
                t.elapsed().as_secs_f64() * 1e3
            ),
            Err(exact::ExactError::BudgetExceeded { required, budget }) => {
                println!("exact: search budget exceeded ({required} strategies needed, budget {budget})")
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(match v.value {
        VerdictValue::Unknown => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

fn cmd_translate(text: &str) -> Result<()> {
    let formula = logic::parse(text)?;
    println!("tr:  {}", logic::lower(&formula)?);
    println!("TR:  {}", logic::upper(&formula)?);
    if let Formula::Strategic(coalition, StrategyKind::ImperfectInfo, Goal::Eventually(goal)) =
        &formula
    {
        let names: Vec<&str> = coalition.iter().map(|s| s.as_str()).collect();
        println!("tr1: {}", logic::tr1(&names, goal));
        println!("tr2: {}", logic::tr2(&names, goal));
        println!("tr3: {}", logic::tr3(&names, goal));
    }
    Ok(())
}

fn cmd_bench(cmd: &BenchCommand) -> Result<()> {
    match cmd {
        BenchCommand::Voting(args) => {
            let opts = sweep_options(args.exact, 1);
            let which = match args.formula {
                VotingFormulaArg::Phi1 => VotingFormula::Phi1,
                VotingFormulaArg::Phi2 => VotingFormula::Phi2,
            };
            let row = run_voting(args.k, which, &opts)?;
            let report = ExperimentReport { rows: vec![row] };
            print!("{}", report.table());
            write_report(&report, &args.output)?;
        }
        BenchCommand::Bridge(args) | BenchCommand::BridgeAm(args) => {
            let variant = match cmd {
                BenchCommand::Bridge(_) => BridgeVariant::Standard,
                _ => BridgeVariant::AbsentMinded,
            };
            let opts = sweep_options(args.exact, args.jobs);
            let seeds: Vec<u64> = (args.seed_base..args.seed_base + args.seeds).collect();
            let report = run_bridge(args.n, args.k, &seeds, variant, LowerKind::Translated, &opts)?;
            print!("{}", report.table());
            write_report(&report, &args.output)?;
            if args.compare_tr2 {
                println!("\nplain epistemic fixpoint (tr2) for comparison:");
                let report2 =
                    run_bridge(args.n, args.k, &seeds, variant, LowerKind::Tr2, &opts)?;
                print!("{}", report2.table());
                if let Some(path) = &args.output {
                    let mut p = path.clone();
                    p.set_extension("tr2.csv");
                    std::fs::write(&p, report2.to_csv())
                        .with_context(|| format!("writing {}", p.display()))?;
                    println!("wrote {}", p.display());
                }
            }
        }
        BenchCommand::Counterexamples { output } => {
            let opts = sweep_options(true, 1);
            let rows = run_counterexamples(&opts)?;
            print!("{}", counterexample_table(&rows));
            if let Some(path) = output {
                let mut csv = String::from("model,coalition,tr1,tr2,tr3,lower,exact,upper\n");
                for r in &rows {
                    csv.push_str(&format!(
                        "{},{{{}}},{},{},{},{},{},{}\n",
                        r.model,
                        r.coalition.join(" "),
                        r.tr1,
                        r.tr2,
                        r.tr3,
                        r.lower,
                        r.exact,
                        r.upper
                    ));
                }
                std::fs::write(path, csv)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<ExitCode> = match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Validate { model } => (|| {
            let text = std::fs::read_to_string(model)
                .with_context(|| format!("reading {}", model.display()))?;
            let m = textfmt::parse_model(&text)?;
            let report = m.validate();
            println!("{report}");
            Ok(if report.is_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        })(),
        Command::Translate { formula } => cmd_translate(formula).map(|_| ExitCode::SUCCESS),
        Command::Bench(cmd) => cmd_bench(cmd).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
