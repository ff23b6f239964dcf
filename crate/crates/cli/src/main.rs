mod input;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use foldhom::bubbling::{delta_family, infer_source_homology, Plan, ReebState};
use foldhom::chain::{Builtin, ChainComplex};
use foldhom::matrix::{IntMatrix, JsonInt};
use foldhom::planner::{
    check_prime_power_windows, check_subgroup_family, necessary_conditions_with, plan_free_bouquet,
    plan_free_spheres, plan_search, plan_single_torsion, plan_two_torsion, truncate_top,
    PlanFailure, PrimePowerPartition, Status, SubgroupFamily, SummandReading, TwoDegreeCase,
    Verdict,
};
use foldhom::subgroups::DEFAULT_ORDER_BOUND;
use foldhom::{
    canonicalize, smith_normal_form, Catalog, FGAbelianGroup, ManifoldProfile, ManifoldSpec,
    PlanDocument, TargetFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{read_json, InputError};
use crate::output::{render, to_value, Format};

/// Homology bookkeeping for Reeb spaces built by bubbling operations.
#[derive(Parser, Debug)]
#[command(name = "foldhom", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form of the group presented by a relation matrix.
    Canon(CanonArgs),
    /// Smith normal form of an integer matrix.
    Snf(SnfArgs),
    /// Necessary conditions on a target family.
    Check(CheckArgs),
    /// Build a bubbling plan that realizes a target family.
    Plan(PlanArgs),
    /// Replay a plan and report the final state, delta family and ledger.
    Bubble(BubbleArgs),
    /// Homology of a chain complex computed from its boundary matrices.
    Oracle(OracleArgs),
    /// Inspect or extend a manifold catalog.
    Catalog(CatalogArgs),
    /// Source-manifold homology read off a Reeb space in low degrees.
    Infer(InferArgs),
}

#[derive(Args, Debug)]
struct CanonArgs {
    /// Presentation file: `{"rows": g, "entries": [[...]]}` or a bare matrix.
    #[arg(required_unless_present = "group", conflicts_with = "group")]
    file: Option<PathBuf>,
    /// A group in text form, e.g. `Z_6 + Z_4`.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug)]
struct SnfArgs {
    /// Matrix file (JSON array of rows).
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    /// Random matrix of the given shape, e.g. `4x5`.
    #[arg(long, value_name = "RxC")]
    random: Option<String>,
    /// Largest absolute entry of a random matrix.
    #[arg(long, default_value_t = 100)]
    bound: i64,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    target: PathBuf,
    /// Prime-power partition for the windows check: `{"sets": [[2], [3, 9]]}`.
    #[arg(long, alias = "thm5", value_name = "FILE")]
    windows: Option<PathBuf>,
    /// Subgroup family: `{"pairs": [{"group": "Z_3^2", "degrees": [4]}]}`.
    #[arg(long, alias = "thm6", value_name = "FILE")]
    subgroups: Option<PathBuf>,
    /// Largest torsion order for which subgroups are enumerated.
    #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
    order_bound: u64,
    /// How "summand" is read in the two-degree check.
    #[arg(long, value_enum, default_value_t = Summand::Torsion)]
    summand: Summand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Summand {
    /// Compare torsion parts.
    Torsion,
    /// Compare whole groups; flags some realizable targets.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    /// Free target, one bouquet of spheres.
    #[value(alias = "prop3")]
    FreeBouquet,
    /// Free target, one sphere per operation.
    #[value(alias = "prop4")]
    FreeSpheres,
    /// Torsion in one degree from one carrier.
    #[value(alias = "thm2")]
    SingleTorsion,
    /// Torsion in two degrees from two carriers.
    #[value(alias = "thm4")]
    TwoTorsion,
    /// Search the catalog for carriers.
    Search,
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[arg(long)]
    target: PathBuf,
    #[arg(long, value_enum)]
    strategy: Strategy,
    /// Catalog file; the bundled catalog when absent.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Carrier manifold by name; repeat for two-degree plans.
    #[arg(long = "carrier")]
    carriers: Vec<String>,
    /// Two-degree arrangement: 1a, 1b, 2 or 3.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 3)]
    max_carriers: usize,
    /// Regroup the plan so the top degree has this rank.
    #[arg(long, value_name = "RANK")]
    truncate: Option<usize>,
}

#[derive(Args, Debug)]
struct BubbleArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// `point`, `sphere:d`, `lens:p`, or a product such as `sphere:2*lens:5`.
    #[arg(long, required_unless_present = "complex", conflicts_with = "complex")]
    builtin: Option<String>,
    /// Complex file: `{"dims": [...], "boundaries": [...]}`.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Report a single degree instead of all of them.
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
    /// Catalog file; the bundled catalog when absent.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    /// Check every entry against the duality laws.
    Validate,
    /// Print the catalog with one more entry.
    Add {
        /// Builtin family: `sphere:d`, `lens:p`, `barden5:T` or `crowley7:T`.
        #[arg(long, required_unless_present = "profile", conflicts_with = "profile")]
        spec: Option<String>,
        /// Profile file: `{"name", "dim", "homology", "embeds_in"}`.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Name for a `--spec` entry; defaults to the family's own name.
        #[arg(long, requires = "spec")]
        name: Option<String>,
        #[arg(long, requires = "spec")]
        embeds_in: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct InferArgs {
    /// Reeb space state: `{"n": 3, "homology": [...]}`.
    #[arg(long)]
    state: PathBuf,
    /// Dimension of the source manifold.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    special_generic: bool,
}

/// A finished command: the document to print and the exit code.
struct Outcome {
    value: Value,
    code: u8,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self { value, code: 0 }
    }
}

fn load_catalog(path: Option<&Path>) -> anyhow::Result<Catalog> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let c: Catalog = read_json(p)?;
            c.validate_all()
                .into_iter()
                .find_map(|(name, r)| {
                    r.err()
                        .map(|v| anyhow!("{}: entry {name:?}: {v}", p.display()))
                })
                .map_or(Ok(c), Err)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Presentation {
    Full { rows: usize, entries: IntMatrix },
    Bare(IntMatrix),
}

fn canon(args: &CanonArgs) -> anyhow::Result<Outcome> {
    let g = if let Some(text) = &args.group {
        text.parse::<FGAbelianGroup>()?
    } else {
        let path = args.file.as_deref().expect("clap requires a file");
        let m = match read_json::<Presentation>(path)? {
            Presentation::Bare(m) => m,
            Presentation::Full { rows, entries } if entries.rows() == 0 => {
                IntMatrix::zeros(rows, 0)
            }
            Presentation::Full { rows, entries } if entries.rows() == rows => entries,
            Presentation::Full { rows, entries } => {
                bail!(
                    "{}: {} generators but {} matrix rows",
                    path.display(),
                    rows,
                    entries.rows()
                )
            }
        };
        canonicalize(&m)?
    };
    Ok(Outcome::ok(to_value(&g)))
}

fn parse_shape(s: &str) -> anyhow::Result<(usize, usize)> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("shape {s:?} is not RxC"))?;
    Ok((r.trim().parse()?, c.trim().parse()?))
}

fn snf(args: &SnfArgs, seed: u64) -> anyhow::Result<Outcome> {
    let m = match &args.random {
        Some(shape) => {
            let (r, c) = parse_shape(shape)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = args.bound.abs();
            let mut m = IntMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = rng.gen_range(-b..=b).into();
                }
            }
            m
        }
        None => read_json(args.file.as_deref().expect("clap requires a file"))?,
    };
    let s = smith_normal_form(&m);
    let factors: Vec<JsonInt> = s.invariant_factors().into_iter().map(JsonInt).collect();
    Ok(Outcome::ok(json!({
        "matrix": to_value(&m),
        "u": to_value(&s.u),
        "d": to_value(&s.d),
        "v": to_value(&s.v),
        "invariant_factors": to_value(&factors),
    })))
}

/// Exit code for a list of verdicts: any Infeasible wins, then Unverifiable,
/// then HypothesisNotMet.
fn verdict_code(verdicts: &[Verdict]) -> u8 {
    let has = |s: Status| verdicts.iter().any(|v| v.status == s);
    if has(Status::Infeasible) {
        2
    } else if has(Status::Unverifiable) {
        3
    } else if has(Status::HypothesisNotMet) {
        2
    } else {
        0
    }
}

fn overall(verdicts: &[Verdict]) -> Status {
    let has = |s: Status| verdicts.iter().any(|v| v.status == s);
    [
        Status::Infeasible,
        Status::Unverifiable,
        Status::HypothesisNotMet,
    ]
    .into_iter()
    .find(|&s| has(s))
    .unwrap_or(Status::Consistent)
}

fn check(args: &CheckArgs) -> anyhow::Result<Outcome> {
    let t: TargetFamily = read_json(&args.target)?;
    let reading = match args.summand {
        Summand::Torsion => SummandReading::Torsion,
        Summand::Full => SummandReading::FullGroup,
    };
    let mut verdicts = necessary_conditions_with(&t, reading);
    if let Some(p) = &args.windows {
        let partition: PrimePowerPartition = read_json(p)?;
        verdicts.push(check_prime_power_windows(&t, &partition));
    }
    if let Some(p) = &args.subgroups {
        let family: SubgroupFamily = read_json(p)?;
        verdicts.push(check_subgroup_family(&t, &family, args.order_bound)?);
    }
    let code = verdict_code(&verdicts);
    Ok(Outcome {
        value: json!({"status": to_value(&overall(&verdicts)), "verdicts": to_value(&verdicts)}),
        code,
    })
}

fn failure(f: PlanFailure) -> anyhow::Result<Outcome> {
    let (status, witness) = match f {
        PlanFailure::HypothesisNotMet(w) => ("HypothesisNotMet", w),
        PlanFailure::Exhausted => ("Exhausted", PlanFailure::Exhausted.to_string()),
        PlanFailure::Invalid(e) => return Err(e.into()),
    };
    Ok(Outcome {
        value: json!({"status": status, "witness": witness}),
        code: 2,
    })
}

fn plan(args: &PlanArgs) -> anyhow::Result<Outcome> {
    let t: TargetFamily = read_json(&args.target)?;
    let catalog = load_catalog(args.catalog.as_deref())?;
    let carriers: Vec<ManifoldProfile> = args
        .carriers
        .iter()
        .map(|c| catalog.resolve(c))
        .collect::<Result<_, _>>()?;
    let want = |k: usize| -> anyhow::Result<()> {
        if carriers.len() != k {
            bail!(
                "strategy {:?} takes {k} --carrier, got {}",
                args.strategy,
                carriers.len()
            );
        }
        Ok(())
    };
    let result = match args.strategy {
        Strategy::FreeBouquet => {
            want(0)?;
            plan_free_bouquet(&t)
        }
        Strategy::FreeSpheres => {
            want(0)?;
            plan_free_spheres(&t)
        }
        Strategy::SingleTorsion => {
            want(1)?;
            plan_single_torsion(&t, &carriers[0])
        }
        Strategy::TwoTorsion => {
            want(2)?;
            let case: TwoDegreeCase = args
                .case
                .as_deref()
                .ok_or_else(|| anyhow!("two-torsion needs --case"))?
                .parse()?;
            plan_two_torsion(&t, &carriers[0], &carriers[1], case)
        }
        Strategy::Search => {
            want(0)?;
            plan_search(&t, &catalog, args.max_carriers)
        }
    };
    let mut plan = match result {
        Ok(p) => p,
        Err(f) => return failure(f),
    };
    if let Some(r) = args.truncate {
        plan = truncate_top(&plan, &FGAbelianGroup::free(r))?;
    }
    Ok(Outcome::ok(to_value(&PlanDocument::from_plan(
        &plan, &catalog,
    ))))
}

fn bubble(args: &BubbleArgs) -> anyhow::Result<Outcome> {
    let catalog = load_catalog(args.catalog.as_deref())?;
    let doc: PlanDocument = read_json(&args.plan)?;
    let plan: Plan = doc
        .to_plan(&catalog)
        .with_context(|| args.plan.display().to_string())?;
    let delta = delta_family(plan.initial(), plan.final_state());
    Ok(Outcome::ok(json!({
        "final_state": to_value(plan.final_state()),
        "delta": delta.map(|d| to_value(&d)),
        "ledger": to_value(plan.ledger()),
    })))
}

fn oracle_complex(spec: &str) -> anyhow::Result<ChainComplex> {
    let mut out: Option<ChainComplex> = None;
    for factor in spec.split('*') {
        let c = ChainComplex::builtin(factor.parse::<Builtin>()?)?;
        out = Some(match out {
            None => c,
            Some(acc) => acc.tensor(&c),
        });
    }
    Ok(out.expect("split yields at least one factor"))
}

fn oracle(args: &OracleArgs) -> anyhow::Result<Outcome> {
    let c = match (&args.builtin, &args.complex) {
        (Some(b), _) => oracle_complex(b)?,
        (None, Some(p)) => read_json(p)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let value = match args.degree {
        Some(k) => to_value(&c.homology(k)?),
        None => to_value(&c.homology_all()?),
    };
    Ok(Outcome::ok(value))
}

fn catalog_cmd(args: &CatalogArgs) -> anyhow::Result<Outcome> {
    match &args.action {
        CatalogAction::List => {
            let catalog = load_catalog(args.catalog.as_deref())?;
            Ok(Outcome::ok(to_value(&catalog)))
        }
        CatalogAction::Validate => {
            let catalog: Catalog = match &args.catalog {
                Some(p) => read_json(p)?,
                None => Catalog::builtin(),
            };
            let report: Vec<Value> = catalog
                .validate_all()
                .into_iter()
                .map(|(name, r)| match r {
                    Ok(()) => json!({"name": name, "valid": true}),
                    Err(v) => json!({"name": name, "valid": false, "violation": to_value(&v)}),
                })
                .collect();
            let code = if report.iter().all(|r| r["valid"] == true) {
                0
            } else {
                2
            };
            Ok(Outcome {
                value: Value::Array(report),
                code,
            })
        }
        CatalogAction::Add {
            spec,
            profile,
            name,
            embeds_in,
        } => {
            let mut catalog = load_catalog(args.catalog.as_deref())?;
            let entry = match (spec, profile) {
                (Some(s), _) => {
                    let mut p = s.parse::<ManifoldSpec>()?.profile()?;
                    if let Some(n) = name {
                        p.name = n.clone();
                    }
                    p.embeds_in = *embeds_in;
                    p
                }
                (None, Some(path)) => read_json(path)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            catalog.add(entry)?;
            Ok(Outcome::ok(to_value(&catalog)))
        }
    }
}

fn infer(args: &InferArgs) -> anyhow::Result<Outcome> {
    let state: ReebState = read_json(&args.state)?;
    Ok(Outcome::ok(to_value(&infer_source_homology(
        &state,
        args.m,
        args.special_generic,
    )?)))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Canon(a) => canon(a),
        Command::Snf(a) => snf(a, cli.seed),
        Command::Check(a) => check(a),
        Command::Plan(a) => plan(a),
        Command::Bubble(a) => bubble(a),
        Command::Oracle(a) => oracle(a),
        Command::Catalog(a) => catalog_cmd(a),
        Command::Infer(a) => infer(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let text = render(&out.value, cli.format);
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match e.downcast_ref::<InputError>() {
                Some(input) => eprintln!("error: {input}"),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(1)
        }
    }
}
