use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strobs_core::centrality::{pagerank, state_adjacency, PageRankConfig};
use strobs_core::colorability::{
    check_observability_with, color_with, combine_m, output_pattern, ColoringState, ForcingOrder, ForcingRule,
};
use strobs_core::dot::{to_dot, DotOptions};
use strobs_core::placement::{
    brute_force_minimum_with, normalize, place_sensors, CostOptions, CostTable, PlacementOptions, SuppliedCosts,
    DEFAULT_BRUTE_FORCE_LIMIT, DEFAULT_EPS,
};
use strobs_core::verify::{cross_validate, Conclusion, RealizationSampler};
use strobs_core::wdn::{derive_wdn_pattern, simulate_rk4, NetworkModel, DEFAULT_STEP};
use strobs_core::{Error, PatternMatrix};

#[derive(Parser)]
#[command(name = "strobs", version, about = "Strong structural observability and sensor placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Any,
    Seeded,
}

impl From<Rule> for ForcingRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Any => ForcingRule::AnyNode,
            Rule::Seeded => ForcingRule::Seeded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RankGraph {
    /// Physical pipe network (JSON input only).
    Network,
    /// `*` edges of the state graph.
    States,
}

#[derive(Subcommand)]
enum Command {
    /// Strong structural observability of a network or pattern with sensors.
    /// Exits 0 when observable, 1 when not.
    Check {
        #[arg(long)]
        network: PathBuf,
        /// 1-based states carrying a sensor, comma separated.
        #[arg(long, value_delimiter = ',')]
        sensors: Vec<usize>,
        #[arg(long, value_enum, default_value = "any")]
        rule: Rule,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Colorability of a combined pattern `M = [Aᵀ Cᵀ]` (rows are states).
    /// Exits 0 when colorable, 1 when not.
    Color {
        #[arg(long)]
        m: PathBuf,
        #[arg(long, value_enum, default_value = "any")]
        rule: Rule,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Heuristic sensor placement over cost groups.
    Place {
        #[arg(long)]
        network: PathBuf,
        /// CSV `state,c_out,c_in,c_pr,c_ind[,c_n]`; filled columns replace computed ones.
        #[arg(long)]
        costs: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "any")]
        rule: Rule,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graphviz rendering of `G(M)`.
    ExportDot {
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        network: Option<PathBuf>,
        /// Combined pattern `M` instead of a network.
        #[arg(long)]
        m: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        sensors: Vec<usize>,
        #[arg(long)]
        costs: Option<PathBuf>,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "any")]
        rule: Rule,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RK4 run of the hydraulic model from the network's `state`.
    Simulate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PageRank centrality and the derived cost.
    Pagerank {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = 0.85)]
        alpha: f64,
        /// Defaults to the pipe network for JSON input and the state graph otherwise.
        #[arg(long, value_enum)]
        graph: Option<RankGraph>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum sensor count.
    Oracle {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
        limit: usize,
        #[arg(long, value_enum, default_value = "any")]
        rule: Rule,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-test realizations of the pattern against the structural verdict.
    /// Exits 1 when an observable verdict is contradicted.
    Verify {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sensors: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(p, e) => ("io", format!("{}: {e}", p.display())),
            Failure::Core(e) => (e.kind(), e.to_string()),
        };
        format!("error: {kind}: {}", msg.replace('\n', " "))
    }
}

type Outcome = Result<(String, ExitCode), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// A network file is JSON; anything else is read as a state pattern `A`.
enum Input {
    Network(Box<NetworkModel>, PatternMatrix),
    Pattern(PatternMatrix),
}

impl Input {
    fn load(path: &Path) -> Result<Self, Failure> {
        let text = read(path)?;
        if text.trim_start().starts_with('{') {
            let net = NetworkModel::from_json(&text)?;
            let a = derive_wdn_pattern(&net)?;
            Ok(Input::Network(Box::new(net), a))
        } else {
            let a = PatternMatrix::parse_any(&text)?;
            if !a.is_square() {
                return Err(Error::NotSquare {
                    context: "state pattern",
                    rows: a.rows(),
                    cols: a.cols(),
                }
                .into());
            }
            Ok(Input::Pattern(a))
        }
    }

    fn pattern(&self) -> &PatternMatrix {
        match self {
            Input::Network(_, a) | Input::Pattern(a) => a,
        }
    }
}

fn sensors_zero_based(sensors: &[usize], states: usize) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::with_capacity(sensors.len());
    for &s in sensors {
        if s == 0 || s > states {
            return Err(Failure::Usage(format!("sensor {s} outside 1..={states}")));
        }
        if out.contains(&(s - 1)) {
            return Err(Failure::Usage(format!("sensor {s} listed twice")));
        }
        out.push(s - 1);
    }
    Ok(out)
}

fn require(format: Format, allowed: &[Format], command: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("format not supported by {command}")))
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn one_based(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()
}

fn set_list(sets: &[Vec<usize>]) -> String {
    sets.iter()
        .map(|s| format!("{{{}}}", s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn trace_json(state: &ColoringState) -> Value {
    Value::Array(
        state
            .trace
            .iter()
            .map(|e| json!({"forcer": e.forcer + 1, "forced": e.forced + 1, "round": e.round + 1}))
            .collect(),
    )
}

fn rule_name(rule: ForcingRule) -> &'static str {
    match rule {
        ForcingRule::AnyNode => "any",
        ForcingRule::Seeded => "seeded",
    }
}

fn exit_if(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cost_table(a: &PatternMatrix, costs: Option<&Path>, alpha: f64) -> Result<CostTable, Failure> {
    let opts = CostOptions {
        pagerank: PageRankConfig {
            alpha,
            ..Default::default()
        },
        ..Default::default()
    };
    let table = CostTable::compute(a, &opts, None)?;
    match costs {
        Some(path) => Ok(table.with_supplied(&SuppliedCosts::from_csv(&read(path)?)?)?),
        None => Ok(table),
    }
}

fn cost_rows(t: &CostTable) -> Value {
    let nz = &t.normalized;
    Value::Array(
        (0..t.len())
            .map(|i| {
                json!({
                    "state": i + 1,
                    "c_out": nz.c_out[i],
                    "c_in": nz.c_in[i],
                    "c_pr": nz.c_pr[i],
                    "c_ind": nz.c_ind[i],
                    "c_n": t.c_n[i],
                })
            })
            .collect(),
    )
}

fn run(command: Command) -> Result<(String, Option<PathBuf>, ExitCode), Failure> {
    let (out_path, result): (Option<PathBuf>, Outcome) = match command {
        Command::Check {
            network,
            sensors,
            rule,
            format,
            out,
        } => (out, check(&network, &sensors, rule.into(), format)),
        Command::Color { m, rule, format, out } => (out, color_cmd(&m, rule.into(), format)),
        Command::Place {
            network,
            costs,
            eps,
            alpha,
            rule,
            format,
            out,
        } => (out, place(&network, costs.as_deref(), eps, alpha, rule.into(), format)),
        Command::ExportDot {
            network,
            m,
            sensors,
            costs,
            alpha,
            rule,
            out,
        } => (
            out,
            export_dot(network.as_deref(), m.as_deref(), &sensors, costs.as_deref(), alpha, rule.into()),
        ),
        Command::Simulate { network, dt, steps, out } => (out, simulate(&network, dt, steps)),
        Command::Pagerank {
            network,
            alpha,
            graph,
            format,
            out,
        } => (out, pagerank_cmd(&network, alpha, graph, format)),
        Command::Oracle {
            network,
            limit,
            rule,
            format,
            out,
        } => (out, oracle(&network, limit, rule.into(), format)),
        Command::Verify {
            network,
            sensors,
            trials,
            seed,
            format,
            out,
        } => (out, verify(&network, &sensors, trials, seed, format)),
    };
    let (text, code) = result?;
    Ok((text, out_path, code))
}

fn check(network: &Path, sensors: &[usize], rule: ForcingRule, format: Format) -> Outcome {
    require(format, &[Format::Json, Format::Text], "check")?;
    let input = Input::load(network)?;
    let a = input.pattern();
    let s = sensors_zero_based(sensors, a.rows())?;
    let c = output_pattern(a.rows(), &s)?;
    let v = check_observability_with(a, &c, rule)?;
    let text = match format {
        Format::Json => pretty(&json!({
            "observable": v.observable,
            "colorable_m": v.colorable_m,
            "colorable_mbar": v.colorable_mbar,
            "rule": rule_name(rule),
            "sensors": sensors,
            "trace_m": trace_json(&v.trace_m),
            "trace_mbar": trace_json(&v.trace_mbar),
        })),
        _ => format!(
            "observable: {}\ncolorable M: {}\ncolorable Mbar: {}\nsensors: {}\ntrace M:\n{}trace Mbar:\n{}",
            v.observable,
            v.colorable_m,
            v.colorable_mbar,
            set_list(&[sensors.to_vec()]),
            v.trace_m.trace_jsonl(),
            v.trace_mbar.trace_jsonl()
        ),
    };
    Ok((text, exit_if(v.observable)))
}

fn color_cmd(m: &Path, rule: ForcingRule, format: Format) -> Outcome {
    require(format, &[Format::Json, Format::Text], "color")?;
    let m = PatternMatrix::parse_any(&read(m)?)?;
    let c = color_with(&m, rule, ForcingOrder::LowestIndex);
    let black: Vec<usize> = c.state.black_nodes().iter().map(|i| i + 1).collect();
    let text = match format {
        Format::Json => pretty(&json!({
            "colorable": c.colorable,
            "rule": rule_name(rule),
            "black": black,
            "trace": trace_json(&c.state),
        })),
        _ => format!(
            "colorable: {}\nblack: {}\ntrace:\n{}",
            c.colorable,
            set_list(&[black]),
            c.state.trace_jsonl()
        ),
    };
    Ok((text, exit_if(c.colorable)))
}

fn place(network: &Path, costs: Option<&Path>, eps: f64, alpha: f64, rule: ForcingRule, format: Format) -> Outcome {
    require(format, &[Format::Json, Format::Text, Format::Csv], "place")?;
    if !(eps >= 0.0) {
        return Err(Failure::Usage(format!("eps must be non-negative, got {eps}")));
    }
    let input = Input::load(network)?;
    let a = input.pattern();
    let table = cost_table(a, costs, alpha)?;
    let opts = PlacementOptions {
        eps,
        rule,
        ..Default::default()
    };
    let r = place_sensors(a, &table, &opts)?;
    let rep = r.report();
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Text => format!(
            "groups: {}\nterminating group: {}, k = {}\naccepted: {}\nevaluated: {}, rejected: {}\nfallback: {}\n",
            set_list(&rep.groups),
            rep.terminating_group,
            rep.subset_size,
            set_list(&rep.accepted),
            rep.combinations_evaluated,
            rep.rejected_count,
            rep.fallback
        ),
        _ => {
            let mut v = serde_json::to_value(&rep).expect("report serializes");
            v["rule"] = json!(rule_name(rule));
            v["costs"] = cost_rows(&table);
            v["cost_provenance"] = serde_json::to_value(table.provenance).expect("provenance serializes");
            pretty(&v)
        }
    };
    Ok((text, ExitCode::SUCCESS))
}

fn export_dot(
    network: Option<&Path>,
    m: Option<&Path>,
    sensors: &[usize],
    costs: Option<&Path>,
    alpha: f64,
    rule: ForcingRule,
) -> Outcome {
    let (m, states, fill) = match (network, m) {
        (_, Some(m)) => {
            let m = PatternMatrix::parse_any(&read(m)?)?;
            let states = m.rows();
            (m, states, None)
        }
        (Some(net), None) => {
            let input = Input::load(net)?;
            let a = input.pattern();
            let s = sensors_zero_based(sensors, a.rows())?;
            let fill = match costs {
                Some(p) => Some(normalize(&cost_table(a, Some(p), alpha)?.c_n)),
                None => None,
            };
            (combine_m(a, &output_pattern(a.rows(), &s)?)?, a.rows(), fill)
        }
        (None, None) => return Err(Failure::Usage("export-dot needs --network or --m".into())),
    };
    let coloring = color_with(&m, rule, ForcingOrder::LowestIndex);
    let opts = DotOptions {
        states: Some(states),
        costs: fill,
        black: Some((0..coloring.state.colors.len()).map(|v| coloring.state.is_black(v)).collect()),
    };
    Ok((to_dot(&m, &opts), ExitCode::SUCCESS))
}

fn simulate(network: &Path, dt: f64, steps: usize) -> Outcome {
    let net = match Input::load(network)? {
        Input::Network(net, _) => *net,
        Input::Pattern(_) => return Err(Failure::Usage("simulate needs a JSON network".into())),
    };
    let x0 = net.state().ok_or(Error::MissingParameter("state"))?.to_state();
    let traj = simulate_rk4(&net, &x0, dt, steps)?;
    Ok((traj.to_csv(net.edge_count()), ExitCode::SUCCESS))
}

fn pagerank_cmd(network: &Path, alpha: f64, graph: Option<RankGraph>, format: Format) -> Outcome {
    require(format, &[Format::Csv, Format::Json], "pagerank")?;
    let input = Input::load(network)?;
    let adj = match (&input, graph) {
        (Input::Network(net, _), None | Some(RankGraph::Network)) => net.adjacency(),
        (Input::Pattern(_), Some(RankGraph::Network)) => {
            return Err(Failure::Usage("--graph network needs a JSON network".into()))
        }
        (_, _) => state_adjacency(input.pattern(), false)?,
    };
    let cfg = PageRankConfig {
        alpha,
        ..Default::default()
    };
    let pr = pagerank(&adj, &cfg)?;
    let text = match format {
        Format::Json => pretty(&json!({ "alpha": alpha, "pagerank": pr })),
        _ => {
            let mut s = String::from("node,pagerank\n");
            for (i, p) in pr.iter().enumerate() {
                s.push_str(&format!("{},{}\n", i + 1, p));
            }
            s
        }
    };
    Ok((text, ExitCode::SUCCESS))
}

fn oracle(network: &Path, limit: usize, rule: ForcingRule, format: Format) -> Outcome {
    require(format, &[Format::Json, Format::Text], "oracle")?;
    let input = Input::load(network)?;
    let best = brute_force_minimum_with(input.pattern(), limit, rule)?;
    let sets = one_based(&best.all_min_sets);
    let text = match format {
        Format::Json => pretty(&json!({ "min_k": best.min_k, "all_min_sets": sets, "rule": rule_name(rule) })),
        _ => format!("min_k: {}\nminimum sets: {}\n", best.min_k, set_list(&sets)),
    };
    Ok((text, ExitCode::SUCCESS))
}

fn verify(network: &Path, sensors: &[usize], trials: usize, seed: u64, format: Format) -> Outcome {
    require(format, &[Format::Json], "verify")?;
    let input = Input::load(network)?;
    let a = input.pattern();
    let s = sensors_zero_based(sensors, a.rows())?;
    let c = output_pattern(a.rows(), &s)?;
    let report = cross_validate(a, &c, trials, &RealizationSampler::with_seed(seed))?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["sensors"] = json!(sensors);
    v["seed"] = json!(seed);
    Ok((pretty(&v), exit_if(report.conclusion != Conclusion::Violation)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let verbose = matches!(std::env::var("STROBS_LOG").as_deref(), Ok("info" | "debug"));
    let start = Instant::now();
    let code = match run(cli.command) {
        Ok((text, None, code)) => {
            print!("{text}");
            code
        }
        Ok((text, Some(path), code)) => match fs::write(&path, text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("{}", Failure::Io(path, e).line());
                ExitCode::from(2)
            }
        },
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(2)
        }
    };
    if verbose {
        eprintln!("info: wall time {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    code
}
