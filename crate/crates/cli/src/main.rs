use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sparse2dc_core::coloring::{chi2_exact, color_2distance, Chi2, SearchOutcome};
use sparse2dc_core::corpus::{fixture, format_ratio, generate_corpus, persist, CorpusRecord, CorpusSpec, Generator, Provenance};
use sparse2dc_core::discharging::{endgame_report, run_discharge_with, verify_ledger};
use sparse2dc_core::hunt::{hunt, persist_findings, HuntOptions, Mutant};
use sparse2dc_core::io::parse_auto;
use sparse2dc_core::potential::{mad_exact, rho, rho_star};
use sparse2dc_core::reductions::{constructive_color_with, detect_with, ConfigKind, ConstructiveError, ConstructiveOptions};
use sparse2dc_core::verify::{verify_theorem, Verdict};
use sparse2dc_core::{Graph, PotentialParams, VertexSet};

#[derive(Parser)]
#[command(name = "sparse2dc", version, about = "2-distance coloring of sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine mode: JSON on stdout only, no summary on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Node budget for exact searches.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    budget: u64,
}

#[derive(Args)]
struct Input {
    /// Edge list or graph6 file, `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated vertex ids.
    #[arg(long, value_delimiter = ',', default_value = "")]
    set: Vec<String>,
    /// Potential coefficients `a,b` in `a|A| - b|E(A)|`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [9, 7])]
    params: Vec<i64>,
}

#[derive(Args)]
struct MutantArgs {
    /// Detectors to switch off, comma-separated.
    #[arg(long, value_delimiter = ',')]
    disable: Vec<String>,
    /// Shift one rule amount, as `name=halves`.
    #[arg(long)]
    shift: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Standard,
    Skeleton,
    Tight,
    Extremal,
    TreeChords,
    Spider,
    K4,
    Fixture,
}

#[derive(Subcommand)]
enum Command {
    /// Exact maximum average degree.
    Mad(Input),
    /// Potential of a vertex set.
    Rho(SetArgs),
    /// Minimum potential over supersets of a vertex set.
    RhoStar(SetArgs),
    /// Chromatic number of the square.
    Chi2(Input),
    /// A 2-distance coloring with `--k` colors, or by reductions.
    Color {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        constructive: bool,
    },
    /// First reducible configuration in dispatch order.
    FindConfig {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        mutant: MutantArgs,
    },
    /// Charge ledger, its checks and the endgame report.
    Discharge {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        mutant: MutantArgs,
    },
    /// Check the coloring theorem on one graph.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Treat the graph as planar.
        #[arg(long)]
        planar: bool,
    },
    /// Generate a seeded corpus.
    Gen {
        #[arg(long, value_enum, default_value_t = Family::Standard)]
        family: Family,
        /// Records per family.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Required maximum degree.
        #[arg(long, default_value_t = 7)]
        delta: usize,
        /// Subdivisions for `k4`.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Fixture name for `fixture`.
        #[arg(long, default_value = "petersen")]
        name: String,
        /// Directory for `*.g6` and `*.json` records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search generated graphs for counterexamples.
    Hunt {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Directory for witness bundles.
        #[arg(long, default_value = "hunt-findings")]
        out: PathBuf,
        #[command(flatten)]
        mutant: MutantArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Exit {
    Ok = 0,
    Violation = 1,
    Budget = 3,
}

const INPUT_ERROR: u8 = 2;

struct Report {
    json: Value,
    summary: String,
    exit: Exit,
}

fn report(json: Value, summary: impl Into<String>) -> Report {
    Report { json, summary: summary.into(), exit: Exit::Ok }
}

fn read_graph(input: &Input) -> anyhow::Result<Graph> {
    let mut text = String::new();
    if input.input == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = std::fs::read_to_string(&input.input).with_context(|| format!("reading {}", input.input))?;
    }
    parse_auto(&text).map_err(|e| anyhow!("{}: {e}", input.input))
}

fn parse_set(g: &Graph, args: &SetArgs) -> anyhow::Result<(VertexSet, PotentialParams)> {
    let ids = args
        .set
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad vertex id {s:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let set = VertexSet::from_slice(g.n(), &ids)?;
    Ok((set, PotentialParams { vertex: args.params[0], edge: args.params[1] }))
}

fn parse_mutant(args: &MutantArgs) -> anyhow::Result<Option<Mutant>> {
    match (&args.shift, args.disable.is_empty()) {
        (Some(_), false) => bail!("--shift and --disable are exclusive"),
        (Some(s), true) => {
            let (name, halves) = s.split_once('=').ok_or_else(|| anyhow!("--shift expects name=halves"))?;
            let m = Mutant::ShiftAmount { amount: name.to_string(), halves: halves.parse().context("shift amount")? };
            m.amounts().ok_or_else(|| anyhow!("unknown rule amount {name:?}"))?;
            Ok(Some(m))
        }
        (None, false) => {
            let kinds = args
                .disable
                .iter()
                .map(|n| ConfigKind::from_name(n).ok_or_else(|| anyhow!("unknown detector {n:?}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            Ok(Some(Mutant::DisableDetectors { kinds }))
        }
        (None, true) => Ok(None),
    }
}

fn colors(c: &sparse2dc_core::Coloring) -> Value {
    json!(c.colors)
}

fn chi2_json(c: &Chi2) -> (Value, Exit) {
    match c {
        Chi2::Exact { value, witness } => (json!({ "value": value, "exact": true, "coloring": colors(witness) }), Exit::Ok),
        Chi2::Interval { lower, upper, witness } => (
            json!({ "lower": lower, "upper": upper, "exact": false, "coloring": colors(witness) }),
            Exit::Budget,
        ),
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let budget = cli.budget;
    Ok(match &cli.command {
        Command::Mad(input) => {
            let g = read_graph(input)?;
            let r = mad_exact(&g)?;
            let value = format_ratio(r.value);
            report(json!({ "value": value, "witness": r.witness.as_slice(), "iterations": r.iterations }), format!("mad = {value}"))
        }
        Command::Rho(set) => {
            let g = read_graph(&set.input)?;
            let (a, p) = parse_set(&g, set)?;
            let value = rho(&g, &a, p)?;
            report(json!({ "value": value, "witness": a.as_slice(), "params": [p.vertex, p.edge] }), format!("rho = {value}"))
        }
        Command::RhoStar(set) => {
            let g = read_graph(&set.input)?;
            let (a, p) = parse_set(&g, set)?;
            let r = rho_star(&g, &a, p)?;
            report(
                json!({ "value": r.value, "witness": r.witness.as_slice(), "params": [p.vertex, p.edge] }),
                format!("rho* = {} on {} vertices", r.value, r.witness.len()),
            )
        }
        Command::Chi2(input) => {
            let g = read_graph(input)?;
            let c = chi2_exact(&g, budget);
            let (j, exit) = chi2_json(&c);
            let (lo, hi) = c.bounds();
            let summary = if lo == hi { format!("chi2 = {lo}") } else { format!("{lo} <= chi2 <= {hi} (budget spent)") };
            Report { json: j, summary, exit }
        }
        Command::Color { input, k, constructive } => {
            let g = read_graph(input)?;
            if *constructive {
                color_constructive(&g, budget)?
            } else {
                let k = k.unwrap_or(g.max_degree() as u32 + 1);
                match color_2distance(&g, k, budget) {
                    SearchOutcome::Colored(c) => {
                        report(json!({ "k": k, "colorable": true, "coloring": colors(&c) }), format!("colored with {} of {k} colors", c.used()))
                    }
                    SearchOutcome::Impossible => report(json!({ "k": k, "colorable": false }), format!("no 2-distance {k}-coloring")),
                    SearchOutcome::BudgetExhausted => Report {
                        json: json!({ "k": k, "colorable": null }),
                        summary: "budget spent".into(),
                        exit: Exit::Budget,
                    },
                }
            }
        }
        Command::FindConfig { input, mutant } => {
            let g = read_graph(input)?;
            let enabled = parse_mutant(mutant)?.map_or_else(|| ConfigKind::DISPATCH.to_vec(), |m| m.enabled());
            match detect_with(&g, &enabled) {
                Some(cfg) => report(cfg.summary_json(), format!("found {}", cfg.kind)),
                None => report(Value::Null, "no configuration"),
            }
        }
        Command::Discharge { input, mutant } => {
            let g = read_graph(input)?;
            let amounts = parse_mutant(mutant)?.and_then(|m| m.amounts()).unwrap_or_default();
            let ledger = run_discharge_with(&g, &amounts)?;
            let checks = verify_ledger(&g, &ledger)?;
            let endgame = match endgame_report(&g, &ledger) {
                Ok(r) => serde_json::to_value(r)?,
                Err(e) => json!({ "error": e.to_string() }),
            };
            let ok = checks.ok();
            let summary = format!(
                "sum {}/2 (expected {}/2), {} below floor, ledger {}",
                checks.sum_halves,
                checks.expected_halves,
                checks.below_floor.len(),
                if ok { "ok" } else { "BROKEN" }
            );
            Report {
                json: json!({ "ledger": ledger, "report": checks, "endgame": endgame }),
                summary,
                exit: if ok { Exit::Ok } else { Exit::Violation },
            }
        }
        Command::Verify { input, planar } => {
            let g = read_graph(input)?;
            let v = verify_theorem(&g, *planar, budget);
            let exit = match v.verdict {
                Verdict::Violated => Exit::Violation,
                Verdict::Inconclusive => Exit::Budget,
                Verdict::Confirmed | Verdict::Silent => Exit::Ok,
            };
            let summary = format!(
                "{:?}: Δ = {}, mad = {}, chi2 in [{}, {}]",
                v.verdict, v.max_degree, v.mad, v.chi2_lower, v.chi2_upper
            );
            Report { json: serde_json::to_value(&v)?, summary, exit }
        }
        Command::Gen { family, count, seed, delta, k, name, out } => gen(*family, *count, *seed, *delta, *k, name, out.as_ref(), budget)?,
        Command::Hunt { seed, count, out, mutant } => {
            let mut opts = HuntOptions::new(*seed, *count, budget);
            opts.mutant = parse_mutant(mutant)?;
            let r = hunt(&opts);
            if !r.findings.is_empty() {
                persist_findings(out, &r.findings).with_context(|| format!("writing {}", out.display()))?;
            }
            let exit = if !r.findings.is_empty() {
                Exit::Violation
            } else if r.inconclusive > 0 {
                Exit::Budget
            } else {
                Exit::Ok
            };
            let summary = format!(
                "{} instances + {} crafted, {} findings, {} inconclusive",
                r.instances,
                r.crafted,
                r.findings.len(),
                r.inconclusive
            );
            Report { json: serde_json::to_value(&r)?, summary, exit }
        }
    })
}

fn color_constructive(g: &Graph, budget: u64) -> anyhow::Result<Report> {
    let opts = ConstructiveOptions { budget, ..ConstructiveOptions::default() };
    match constructive_color_with(g, &opts) {
        Ok(r) => {
            let c = r.coloring.as_ref().expect("set on success");
            let exit = if r.audit_failures.is_empty() { Exit::Ok } else { Exit::Violation };
            Ok(Report {
                json: json!({
                    "colorable": true,
                    "coloring": colors(c),
                    "colors_used": c.used(),
                    "reductions": r.reductions,
                    "fired": r.fired,
                    "routes": r.routes,
                    "base_cases": r.base_cases,
                    "exact_fallbacks": r.exact_fallbacks,
                    "max_depth": r.max_depth,
                    "audit_failures": r.audit_failures,
                }),
                summary: format!("{} colors after {} reductions", c.used(), r.reductions),
                exit,
            })
        }
        Err(e @ (ConstructiveError::DegreeTooLarge(_) | ConstructiveError::MadTooLarge)) => Err(e.into()),
        Err(e) => Ok(Report { json: json!({ "colorable": null, "error": e.to_string() }), summary: e.to_string(), exit: Exit::Violation }),
    }
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: Family,
    count: usize,
    seed: u64,
    delta: usize,
    k: usize,
    name: &str,
    out: Option<&PathBuf>,
    budget: u64,
) -> anyhow::Result<Report> {
    let one = |g: Generator| vec![CorpusSpec::new(g).with_max_degree(delta)];
    let specs = match family {
        Family::Standard => CorpusSpec::standard(delta),
        Family::Skeleton => one(Generator::Skeleton { min_vertices: 4, max_vertices: 14, max_subdivision: 3 }),
        Family::Tight => one(Generator::Tight { min_vertices: 3, max_vertices: 10 }),
        Family::Extremal => one(Generator::Extremal { min_vertices: 4, max_vertices: 12, fork_share: 40, max_star: 2 }),
        Family::TreeChords => one(Generator::TreeChords { min_vertices: 6, max_vertices: 30, chords: 6 }),
        Family::Spider => one(Generator::Spider { legs: delta }),
        Family::K4 => vec![CorpusSpec { max_degree: None, mad_at_most_threshold: false, ..CorpusSpec::new(Generator::SubdividedK4 { t: k }) }],
        Family::Fixture => {
            let g = fixture(name)?;
            let prov = Provenance { generator: format!("fixture-{name}"), seed, index: 0, attempts: 1 };
            let mut r = CorpusRecord::from_graph(&g, prov);
            r.compute_facts(budget)?;
            return finish_gen(vec![r], out);
        }
    };
    let mut records = Vec::new();
    for spec in &specs {
        records.extend(generate_corpus(spec, count, seed)?);
    }
    for r in &mut records {
        r.compute_facts(budget)?;
    }
    finish_gen(records, out)
}

fn finish_gen(records: Vec<CorpusRecord>, out: Option<&PathBuf>) -> anyhow::Result<Report> {
    if let Some(dir) = out {
        persist(dir, &records).with_context(|| format!("writing {}", dir.display()))?;
    }
    let summary = format!("{} records", records.len());
    Ok(report(serde_json::to_value(&records)?, summary))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            // A closed pipe downstream is not an error worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&r.json).expect("reports serialize"));
            if !cli.json {
                eprintln!("{}", r.summary);
            }
            ExitCode::from(r.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
