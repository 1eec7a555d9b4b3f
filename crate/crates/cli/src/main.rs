//! `iord` — solve, inspect, generate, and benchmark interval-ordering
//! instances from the command line.
//!
//! Exit codes: 0 success (including an in-band INFEASIBLE search outcome),
//! 1 unreadable or unparseable input, 2 violated precondition or invalid
//! parameters, 3 verification mismatch. Stdout carries only JSON or CSV;
//! diagnostics go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;

use interval_ordering::bsrp::brute_force_search;
use interval_ordering::costfn::CostFunction;
use interval_ordering::format::{
    instance_to_json, parse_bsrp_json, parse_instance_json, parse_rational, report_to_json,
    trace_to_json,
};
use interval_ordering::generators::{
    gen_agreeable, gen_general, gen_greedy_gap, gen_laminar, gen_partition_gadget,
    gen_sorting_family,
};
use interval_ordering::solvers::{
    auto_solve_with_cap, default_oracle_cap, oracle_bottleneck_with_cap, oracle_sum_with_cap,
    solve_agreeable, solve_agreeable_convex, solve_bottleneck_greedy, solve_greedy, solve_laminar,
    Objective, SolveReport, ORACLE_CAP_HARD,
};
use interval_ordering::structure::{detect_agreeable, detect_laminar, split_components, Laminarity};
use interval_ordering::{CostValue, Error, EvalMode, Instance};

/// Relative tolerance when verifying float-mode results against the oracle.
const VERIFY_REL_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "iord", version, about = "Interval ordering toolkit", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a JSON report.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Sum)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
        algo: AlgoArg,
        /// Re-solve with the exact oracle (when the instance fits under the
        /// oracle cap) and exit 3 if the values disagree.
        #[arg(long)]
        verify: bool,
    },
    /// Detect structure: agreeable order, laminar forest, components.
    Detect { file: PathBuf },
    /// Generate an instance file from a named family.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Run the brute-force reconstruction search on a triplet file.
    Bsrp {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Given)]
        order: OrderArg,
    },
    /// Time solvers across sizes; CSV (family,n,algo,median_ms) on stdout.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchFamily::Agreeable)]
        family: BenchFamily,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Sum,
    Bottleneck,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Sum => Objective::Sum,
            ObjectiveArg::Bottleneck => Objective::Bottleneck,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Auto,
    Agreeable,
    Convex,
    Laminar,
    Greedy,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Given,
    PlannedSum,
    PlannedBottleneck,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Agreeable,
    Laminar,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> EvalMode {
        match m {
            ModeArg::Exact => EvalMode::Exact,
            ModeArg::Float => EvalMode::Float,
        }
    }
}

/// Shared knobs for the seeded random families.
#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Cost function: pow2, p2free, linear:SLOPE,INTERCEPT, power:EXP, or
    /// table:B0,B1,..:V0,V1,.. (rational literals accepted everywhere).
    #[arg(long, default_value = "pow2")]
    cost: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Args)]
struct OutArg {
    /// Write the instance here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Random agreeable instance (left and right endpoints sorted alike).
    Agreeable {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        coord_max: i64,
        #[command(flatten)]
        random: RandomArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random laminar instance (nested or disjoint spans).
    Laminar {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        depth_max: usize,
        #[command(flatten)]
        random: RandomArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Unconstrained random instance.
    General {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        coord_max: i64,
        #[command(flatten)]
        random: RandomArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// The 2k-1 interval family separating smallest-first greedy from the
    /// optimum by a factor that grows linearly in k.
    GreedyGap {
        #[arg(long)]
        k: u32,
        /// Overhang fraction in (0, 1), e.g. 1/4.
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cardinality-constrained PARTITION gadget with the p2free cost.
    Partition {
        /// Comma-separated positive weights (at most 32, even total).
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Required subset size.
        #[arg(long)]
        k: usize,
        /// Dummy-interval exponent N; defaults to the smallest valid value.
        #[arg(long)]
        n_exp: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sorting-as-ordering family: nested prefixes, one per input length.
    Sorting {
        /// Comma-separated positive integer lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<i64>,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Failure carrying the process exit code.
enum Failure {
    /// Unreadable or unparseable input (exit 1).
    Input(String),
    /// Violated precondition or invalid parameters (exit 2).
    Precondition(String),
    /// Solver result disagrees with the oracle (exit 3).
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Verify(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) | Failure::Verify(m) => m,
        }
    }
}

/// Classifies core errors raised while loading input files.
fn input_error(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

/// Classifies core errors raised after input was accepted.
fn solve_error(e: Error) -> Failure {
    match e {
        Error::Parse(_) | Error::InvalidInstance(_) | Error::Mode(_) => Failure::Input(e.to_string()),
        Error::Precondition(_) | Error::TooLarge { .. } | Error::Params(_) => {
            Failure::Precondition(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve { file, objective, algo, verify } => {
            cmd_solve(&file, objective.into(), algo, verify)
        }
        Command::Detect { file } => cmd_detect(&file),
        Command::Gen { family } => cmd_gen(family),
        Command::Bsrp { file, order } => cmd_bsrp(&file, order),
        Command::Bench { family, sizes, repeat, seed } => cmd_bench(family, &sizes, repeat, seed),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance_json(&read_file(path)?).map_err(input_error)
}

/// Oracle size cap after the environment override, mirroring the solver's
/// own clamping.
fn oracle_cap_override() -> Result<Option<usize>, Failure> {
    match std::env::var("IO_ORACLE_CAP") {
        Ok(raw) => {
            let cap: usize = raw.trim().parse().map_err(|_| {
                Failure::Precondition(format!("IO_ORACLE_CAP must be a size, got {raw:?}"))
            })?;
            Ok(Some(cap))
        }
        Err(_) => Ok(None),
    }
}

fn cmd_solve(file: &Path, objective: Objective, algo: AlgoArg, verify: bool) -> Result<(), Failure> {
    let inst = load_instance(file)?;
    let cap = oracle_cap_override()?;
    let report = dispatch(&inst, objective, algo, cap)?;
    print!("{}", report_to_json(&report, &inst));
    if verify {
        verify_against_oracle(&inst, objective, &report, cap)?;
    }
    Ok(())
}

fn dispatch(
    inst: &Instance,
    objective: Objective,
    algo: AlgoArg,
    cap: Option<usize>,
) -> Result<SolveReport, Failure> {
    let sum_only = |rep: Result<SolveReport, Error>| -> Result<SolveReport, Failure> {
        if objective != Objective::Sum {
            return Err(Failure::Precondition(
                "this algorithm solves the sum objective only; use --algo auto, greedy, or oracle"
                    .into(),
            ));
        }
        rep.map_err(solve_error)
    };
    match algo {
        AlgoArg::Auto => auto_solve_with_cap(inst, objective, cap).map_err(solve_error),
        AlgoArg::Agreeable => sum_only(solve_agreeable(inst)),
        AlgoArg::Convex => sum_only(solve_agreeable_convex(inst)),
        AlgoArg::Laminar => sum_only(solve_laminar(inst)),
        AlgoArg::Greedy => match objective {
            Objective::Sum => solve_greedy(inst, Objective::Sum).map_err(solve_error),
            Objective::Bottleneck => solve_bottleneck_greedy(inst).map_err(solve_error),
        },
        AlgoArg::Oracle => match objective {
            Objective::Sum => oracle_sum_with_cap(inst, cap).map_err(solve_error),
            Objective::Bottleneck => oracle_bottleneck_with_cap(inst, cap).map_err(solve_error),
        },
    }
}

fn verify_against_oracle(
    inst: &Instance,
    objective: Objective,
    report: &SolveReport,
    cap: Option<usize>,
) -> Result<(), Failure> {
    let effective = cap
        .unwrap_or_else(|| default_oracle_cap(inst.mode))
        .min(ORACLE_CAP_HARD);
    if inst.n() > effective {
        eprintln!(
            "verify: skipped, {} intervals exceed the oracle cap {effective}",
            inst.n()
        );
        return Ok(());
    }
    let oracle = match objective {
        Objective::Sum => oracle_sum_with_cap(inst, cap),
        Objective::Bottleneck => oracle_bottleneck_with_cap(inst, cap),
    }
    .map_err(solve_error)?;
    let (got, want) = match objective {
        Objective::Sum => (&report.result.sum_cost, &oracle.result.sum_cost),
        Objective::Bottleneck => (&report.result.bottleneck_cost, &oracle.result.bottleneck_cost),
    };
    let agrees = match (got, want) {
        (CostValue::Exact(a), CostValue::Exact(b)) => a == b,
        (a, b) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            (a - b).abs() <= VERIFY_REL_TOL * b.abs().max(1.0)
        }
    };
    if agrees {
        eprintln!("verify: ok ({} matches the oracle)", report.algorithm.name());
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "{} {objective} cost {got} disagrees with oracle {want}",
            report.algorithm.name()
        )))
    }
}

fn cmd_detect(file: &Path) -> Result<(), Failure> {
    let inst = load_instance(file)?;
    let mut doc = serde_json::Map::new();
    match detect_agreeable(&inst) {
        Some(order) => {
            doc.insert("agreeable".into(), true.into());
            doc.insert("gamma".into(), order.gamma.into());
        }
        None => {
            doc.insert("agreeable".into(), false.into());
        }
    }
    match detect_laminar(&inst) {
        Laminarity::Forest(forest) => {
            doc.insert("laminar".into(), true.into());
            let parents: Vec<serde_json::Value> = forest
                .parent
                .iter()
                .map(|p| match p {
                    Some(id) => (*id).into(),
                    None => serde_json::Value::Null,
                })
                .collect();
            doc.insert("parents".into(), parents.into());
        }
        Laminarity::Violation(i, j) => {
            doc.insert("laminar".into(), false.into());
            doc.insert("violation".into(), vec![i, j].into());
        }
    }
    doc.insert("components".into(), split_components(&inst).len().into());
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
        .expect("detection report serializes");
    println!("{text}");
    Ok(())
}

fn parse_i64_rational(s: &str, what: &str) -> Result<(i64, i64), Failure> {
    let r = parse_rational(s).map_err(|e| Failure::Precondition(format!("{what}: {e}")))?;
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Failure::Precondition(format!("{what}: {s} does not fit i64"))),
    }
}

/// Parses the compact `--cost` syntax used by the generator verbs.
fn parse_cost_spec(spec: &str) -> Result<CostFunction, Failure> {
    let bad = |m: String| Failure::Precondition(format!("--cost {spec}: {m}"));
    let rationals = |csv: &str| -> Result<Vec<num::BigRational>, Failure> {
        csv.split(',')
            .map(|s| parse_rational(s.trim()).map_err(|e| bad(e.to_string())))
            .collect()
    };
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, Some(r)),
        None => (spec, None),
    };
    match (kind, rest) {
        ("pow2", None) => Ok(CostFunction::pow2()),
        ("p2free", None) => Ok(CostFunction::p2free()),
        ("linear", Some(r)) => {
            let parts = rationals(r)?;
            match <[num::BigRational; 2]>::try_from(parts) {
                Ok([slope, intercept]) => Ok(CostFunction::linear(slope, intercept)),
                Err(_) => Err(bad("expected linear:SLOPE,INTERCEPT".into())),
            }
        }
        ("power", Some(r)) => {
            let exponent =
                parse_rational(r.trim()).map_err(|e| bad(e.to_string()))?;
            CostFunction::power(exponent).map_err(|e| bad(e.to_string()))
        }
        ("table", Some(r)) => {
            let (bs, vs) = r
                .split_once(':')
                .ok_or_else(|| bad("expected table:B0,B1,..:V0,V1,..".into()))?;
            CostFunction::table(rationals(bs)?, rationals(vs)?).map_err(|e| bad(e.to_string()))
        }
        _ => Err(bad(
            "expected pow2, p2free, linear:S,C, power:E, or table:B..:V..".into(),
        )),
    }
}

fn emit_instance(inst: &Instance, out: &OutArg) -> Result<(), Failure> {
    let text = instance_to_json(inst);
    match &out.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Precondition(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(family: Family) -> Result<(), Failure> {
    match family {
        Family::Agreeable { n, coord_max, random, out } => {
            let cost = parse_cost_spec(&random.cost)?;
            let inst = gen_agreeable(n, coord_max, random.seed, cost, random.mode.into())
                .map_err(solve_error)?;
            emit_instance(&inst, &out)
        }
        Family::Laminar { n, depth_max, random, out } => {
            let cost = parse_cost_spec(&random.cost)?;
            let inst = gen_laminar(n, depth_max, random.seed, cost, random.mode.into())
                .map_err(solve_error)?;
            emit_instance(&inst, &out)
        }
        Family::General { n, coord_max, random, out } => {
            let cost = parse_cost_spec(&random.cost)?;
            let inst = gen_general(n, coord_max, random.seed, cost, random.mode.into())
                .map_err(solve_error)?;
            emit_instance(&inst, &out)
        }
        Family::GreedyGap { k, eps, out } => {
            let (num, den) = parse_i64_rational(&eps, "--eps")?;
            let inst = gen_greedy_gap(k, num, den).map_err(solve_error)?;
            emit_instance(&inst, &out)
        }
        Family::Partition { q, k, n_exp, out } => {
            let (inst, gadget) = gen_partition_gadget(&q, k, n_exp).map_err(solve_error)?;
            eprintln!(
                "partition gadget: target {}, yes bound {}, no bound {}",
                gadget.target,
                gadget.yes_bound(),
                gadget.no_bound()
            );
            emit_instance(&inst, &out)
        }
        Family::Sorting { x, out } => {
            let inst = gen_sorting_family(&x).map_err(solve_error)?;
            emit_instance(&inst, &out)
        }
    }
}

fn cmd_bsrp(file: &Path, order: OrderArg) -> Result<(), Failure> {
    let inst = parse_bsrp_json(&read_file(file)?).map_err(input_error)?;
    let order: Vec<u32> = match order {
        OrderArg::Given => (1..=inst.n() as u32).collect(),
        OrderArg::PlannedSum => plan(&inst, Objective::Sum)?,
        OrderArg::PlannedBottleneck => plan(&inst, Objective::Bottleneck)?,
    };
    let trace = brute_force_search(&inst, &order).map_err(solve_error)?;
    print!("{}", trace_to_json(&trace));
    Ok(())
}

fn plan(
    inst: &interval_ordering::bsrp::BsrpInstance,
    objective: Objective,
) -> Result<Vec<u32>, Failure> {
    interval_ordering::bsrp::plan_order(inst, objective)
        .map(|rep| rep.result.order)
        .map_err(solve_error)
}

type BenchRun<'a> = Box<dyn Fn() -> Result<SolveReport, Error> + 'a>;

fn cmd_bench(family: BenchFamily, sizes: &[usize], repeat: usize, seed: u64) -> Result<(), Failure> {
    if repeat == 0 {
        return Err(Failure::Precondition("--repeat must be at least 1".into()));
    }
    let cap = oracle_cap_override()?;
    println!("family,n,algo,median_ms");
    for &n in sizes {
        let (name, inst) = match family {
            BenchFamily::Agreeable => (
                "agreeable",
                gen_agreeable(n, 4 * n as i64 + 4, seed, CostFunction::pow2(), EvalMode::Float),
            ),
            BenchFamily::Laminar => (
                "laminar",
                gen_laminar(n, 12, seed, CostFunction::pow2(), EvalMode::Float),
            ),
            BenchFamily::General => (
                "general",
                gen_general(n, 4 * n as i64 + 4, seed, CostFunction::pow2(), EvalMode::Float),
            ),
        };
        let inst = inst.map_err(solve_error)?;
        let mut rows: Vec<(&str, BenchRun)> = Vec::new();
        match family {
            BenchFamily::Agreeable => {
                rows.push(("agreeable-dp", Box::new(|| solve_agreeable(&inst))));
                rows.push(("agreeable-convex-dp", Box::new(|| solve_agreeable_convex(&inst))));
            }
            BenchFamily::Laminar => {
                rows.push(("laminar-sort", Box::new(|| solve_laminar(&inst))));
            }
            BenchFamily::General => {
                rows.push(("greedy", Box::new(|| solve_bottleneck_greedy(&inst))));
            }
        }
        let effective = cap
            .unwrap_or_else(|| default_oracle_cap(inst.mode))
            .min(ORACLE_CAP_HARD);
        if inst.n() <= effective {
            rows.push(("oracle", Box::new(|| oracle_sum_with_cap(&inst, cap))));
        }
        for (algo, run) in rows {
            let mut times = Vec::with_capacity(repeat);
            for _ in 0..repeat {
                let started = Instant::now();
                run().map_err(solve_error)?;
                times.push(started.elapsed().as_secs_f64() * 1e3);
            }
            times.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
            println!("{name},{n},{algo},{:.3}", times[times.len() / 2]);
        }
    }
    Ok(())
}
