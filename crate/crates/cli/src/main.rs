//! Command-line front end over the metric toolkit.
//!
//! Every run reads at most one JSON document (a file via `--in`, stdin
//! otherwise), performs one operation, and writes a single report to
//! stdout: the argv echo, the resolved configuration with every tolerance
//! and scale the run actually used, the result payload, and the elapsed
//! time. Identical inputs and flags reproduce the report byte for byte
//! apart from the timing field.
//!
//! Exit codes: 0 for a positive answer, 1 for a clean run whose answer is
//! negative (no fixed point in budget, certificate fails, no equilibrium,
//! endpoints not connected), 2 for unusable input or a blown size cap.

mod render;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use metricfix_core::derived::{
    chain_metric, geodesic, path_length, path_metric, DerivedMetric,
};
use metricfix_core::doc::{DerivedDoc, GameDoc, MapDoc, SpaceDoc, SpaceRef};
use metricfix_core::error::{Error, Result};
use metricfix_core::games::{
    CertifyParams, CertifyCondition, DynamicsMetric, Game, DEFAULT_TIE_TOL,
};
use metricfix_core::gen::{cloud_space, contractive_instance, table_game};
use metricfix_core::hausdorff::MetricView;
use metricfix_core::setvalued::{
    discrete_slope, fixed_points_exhaustive, global_modulus, is_shrinking, local_certificate,
    periodic_point_search, pointwise_certificate, solve_fixed_point, NeighborhoodSpec,
    SetValuedMap,
};
use metricfix_core::space::{
    check_metric_convexity, components_at_scale, is_r_chainable, product_space, validate_metric,
    Caps, Combiner, FiniteMetricSpace, DEFAULT_TOL,
};

use render::{
    certificate_json, certificate_summary, components_json, convexity_json, certify_json,
    profile_label, trace_json, trace_summary, validation_json,
};

#[derive(Parser)]
#[command(name = "metricfix", version, about = "Finite metric spaces, set-valued self-maps, and metric games")]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the bare result payload (no report envelope) to a file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a space document and probe its structure at a scale.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Derived metric tables and geodesics.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Certificates and solvers for a set-valued self-map.
    #[command(subcommand)]
    Map(MapCmd),
    /// Best responses, equilibria, and contraction certificates for games.
    #[command(subcommand)]
    Game(GameCmd),
    /// Seeded instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Args)]
struct InputArg {
    /// Input document; stdin when absent.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Check the metric axioms; optionally components and chainability at a scale.
    Check {
        #[command(flatten)]
        input: InputArg,
        /// Triangle-inequality slack (the other axioms are exact).
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also report components and chainability at this scale.
        #[arg(long)]
        r: Option<f64>,
        /// Include the metric-convexity diagnostic.
        #[arg(long)]
        convexity: bool,
    },
    /// Combine factor spaces into one product space document.
    Product {
        /// Space documents, one per factor.
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
        /// How per-factor distances combine: max, sum, or euclidean.
        #[arg(long, default_value = "max")]
        combiner: String,
    },
}

#[derive(Subcommand)]
enum MetricCmd {
    /// Shortest-chain distances through gaps strictly below r.
    Chain {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        r: f64,
    },
    /// Shortest-path distances through hops strictly below eps.
    Path {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        eps: f64,
    },
    /// A minimum-length path between two points at scale eps.
    Geodesic {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        eps: f64,
        #[arg(long = "from", value_name = "LABEL")]
        start: String,
        #[arg(long = "to", value_name = "LABEL")]
        end: String,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Contraction certificates for the map under a chosen metric.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        /// Metric the certificates use: base, chain:<r>, or path:<eps>.
        #[arg(long, default_value = "base")]
        metric: MetricChoice,
        /// Adds a pointwise certificate over knn:<k> or radius:<x> neighborhoods.
        #[arg(long)]
        neighborhood: Option<NbhdArg>,
        /// Adds a uniform local certificate over closed balls of this radius.
        #[arg(long)]
        local_r: Option<f64>,
        /// Adds a discrete slope table with this window.
        #[arg(long)]
        slope_h: Option<f64>,
    },
    /// Exhaustive fixed-point scan.
    Fix {
        #[command(flatten)]
        input: InputArg,
    },
    /// Greedy minimizing run from a start point.
    Solve {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_name = "LABEL")]
        x0: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Metric the run steps under: base, chain:<r>, or path:<eps>.
        #[arg(long, default_value = "base")]
        metric: MetricChoice,
    },
    /// Smallest period whose iterated map has a fixed point.
    Periodic {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        max_period: usize,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Best-response sets and payoffs at one profile.
    Br {
        #[command(flatten)]
        input: InputArg,
        /// Comma-separated strategy labels, one per player.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Pure equilibria by enumeration or by best-response dynamics.
    Nash {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value_t = NashMode::Enumerate)]
        mode: NashMode,
        /// Start profile for dynamics mode, comma-separated labels.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
        /// Step budget for dynamics mode.
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Metric for dynamics steps: base or path:<eps>.
        #[arg(long, default_value = "base")]
        metric: DynMetricArg,
    },
    /// Check one sufficient condition for a contractive game.
    Certify {
        #[command(flatten)]
        input: InputArg,
        /// Which condition: a (local, chainable), b (pointwise, connected),
        /// or c (pointwise under the intrinsic metric).
        #[arg(long)]
        condition: CertifyCondition,
        /// Scale for conditions a and c.
        #[arg(long)]
        r: Option<f64>,
        /// Connectivity scale for condition b.
        #[arg(long)]
        eps: Option<f64>,
        /// Neighborhood for conditions b and c: knn:<k> or radius:<x>.
        #[arg(long)]
        neighborhood: Option<NbhdArg>,
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NashMode {
    Enumerate,
    Dynamics,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random points in the unit cube under the euclidean metric.
    Space {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// A star space with a contractive map toward its anchor.
    Map {
        #[arg(long)]
        seed: u64,
        /// Multi-point images instead of singletons.
        #[arg(long)]
        set_valued: bool,
    },
    /// A two-player game with random payoff tables.
    Game {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_strategies: usize,
    },
}

/// Which distance table an operation runs on.
#[derive(Clone, Copy, Debug)]
enum MetricChoice {
    Base,
    Chain(f64),
    Path(f64),
}

impl std::str::FromStr for MetricChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "base" {
            return Ok(MetricChoice::Base);
        }
        if let Some(v) = s.strip_prefix("chain:") {
            return v
                .parse()
                .map(MetricChoice::Chain)
                .map_err(|_| format!("bad chain scale in '{}'", s));
        }
        if let Some(v) = s.strip_prefix("path:") {
            return v
                .parse()
                .map(MetricChoice::Path)
                .map_err(|_| format!("bad path scale in '{}'", s));
        }
        Err(format!(
            "expected base, chain:<r>, or path:<eps>, got '{}'",
            s
        ))
    }
}

#[derive(Clone, Copy, Debug)]
struct NbhdArg(NeighborhoodSpec);

impl std::str::FromStr for NbhdArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(v) = s.strip_prefix("knn:") {
            return v
                .parse()
                .map(|k| NbhdArg(NeighborhoodSpec::Knn(k)))
                .map_err(|_| format!("bad neighbor count in '{}'", s));
        }
        if let Some(v) = s.strip_prefix("radius:") {
            return v
                .parse()
                .map(|r| NbhdArg(NeighborhoodSpec::Radius(r)))
                .map_err(|_| format!("bad radius in '{}'", s));
        }
        Err(format!("expected knn:<k> or radius:<x>, got '{}'", s))
    }
}

/// Metric for best-response dynamics; the chain table is not offered here
/// because the dynamics contract only covers base and path views.
#[derive(Clone, Copy, Debug)]
struct DynMetricArg(DynamicsMetric);

impl std::str::FromStr for DynMetricArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "base" {
            return Ok(DynMetricArg(DynamicsMetric::Base));
        }
        if let Some(v) = s.strip_prefix("path:") {
            return v
                .parse()
                .map(|eps| DynMetricArg(DynamicsMetric::Path { eps }))
                .map_err(|_| format!("bad path scale in '{}'", s));
        }
        Err(format!("expected base or path:<eps>, got '{}'", s))
    }
}

/// One finished run: the resolved configuration, the result payload, a
/// text summary, and whether the answer was negative (exit 1).
struct Outcome {
    config: Value,
    result: Value,
    summary: String,
    negative: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let caps = Caps::from_env();
    match dispatch(&cli.command, &caps) {
        Ok(outcome) => {
            if let Some(path) = &cli.out {
                let text = serde_json::to_string_pretty(&outcome.result).unwrap();
                if let Err(e) = std::fs::write(path, text + "\n") {
                    eprintln!("cannot write {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            let code = if outcome.negative { 1 } else { 0 };
            emit(cli.format, outcome, started);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{}", e);
            match e {
                Error::NoPath(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(format: Format, outcome: Outcome, started: Instant) {
    match format {
        Format::Json => {
            let report = json!({
                "command": std::env::args().skip(1).collect::<Vec<String>>(),
                "config": outcome.config,
                "result": outcome.result,
                "timing_ms": started.elapsed().as_secs_f64() * 1e3,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        Format::Text => println!("{}", outcome.summary),
    }
}

fn dispatch(cmd: &Cmd, caps: &Caps) -> Result<Outcome> {
    match cmd {
        Cmd::Space(SpaceCmd::Check { input, tol, r, convexity }) => {
            space_check(input, *tol, *r, *convexity, caps)
        }
        Cmd::Space(SpaceCmd::Product { files, combiner }) => {
            space_product(files, combiner, caps)
        }
        Cmd::Metric(MetricCmd::Chain { input, r }) => {
            metric_table(input, MetricChoice::Chain(*r), caps)
        }
        Cmd::Metric(MetricCmd::Path { input, eps }) => {
            metric_table(input, MetricChoice::Path(*eps), caps)
        }
        Cmd::Metric(MetricCmd::Geodesic { input, eps, start, end }) => {
            metric_geodesic(input, *eps, start, end, caps)
        }
        Cmd::Map(MapCmd::Analyze { input, metric, neighborhood, local_r, slope_h }) => {
            map_analyze(input, *metric, *neighborhood, *local_r, *slope_h, caps)
        }
        Cmd::Map(MapCmd::Fix { input }) => map_fix(input, caps),
        Cmd::Map(MapCmd::Solve { input, x0, max_iter, metric }) => {
            map_solve(input, x0, *max_iter, *metric, caps)
        }
        Cmd::Map(MapCmd::Periodic { input, max_period }) => {
            map_periodic(input, *max_period, caps)
        }
        Cmd::Game(GameCmd::Br { input, profile, tie_tol }) => {
            game_br(input, profile, *tie_tol, caps)
        }
        Cmd::Game(GameCmd::Nash { input, mode, x0, tie_tol, max_iter, metric }) => {
            game_nash(input, *mode, x0.as_deref(), *tie_tol, *max_iter, *metric, caps)
        }
        Cmd::Game(GameCmd::Certify { input, condition, r, eps, neighborhood, tie_tol }) => {
            game_certify(input, *condition, *r, *eps, *neighborhood, *tie_tol, caps)
        }
        Cmd::Gen(GenCmd::Space { seed, n, dim }) => gen_space(*seed, *n, *dim),
        Cmd::Gen(GenCmd::Map { seed, set_valued }) => gen_map(*seed, *set_valued),
        Cmd::Gen(GenCmd::Game { seed, max_strategies }) => gen_game(*seed, *max_strategies),
    }
}

fn read_document(input: &InputArg) -> Result<(String, Option<PathBuf>)> {
    match &input.input {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::input(format!("cannot read {}: {}", p.display(), e)))?;
            Ok((text, p.parent().map(|d| d.to_path_buf())))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::input(format!("cannot read stdin: {}", e)))?;
            Ok((text, None))
        }
    }
}

fn input_echo(input: &InputArg) -> Value {
    match &input.input {
        Some(p) => json!(p.display().to_string()),
        None => json!("stdin"),
    }
}

fn check_cap(space: &FiniteMetricSpace, caps: &Caps) -> Result<()> {
    if space.len() > caps.space_points {
        return Err(Error::resource(format!(
            "space has {} points, cap is {}",
            space.len(),
            caps.space_points
        )));
    }
    Ok(())
}

fn load_space(input: &InputArg, caps: &Caps) -> Result<FiniteMetricSpace> {
    let (text, _) = read_document(input)?;
    let space = SpaceDoc::parse(&text)?.to_space()?;
    check_cap(&space, caps)?;
    Ok(space)
}

/// Resolves the map document's space, reading a referenced space file
/// relative to the map file's directory (the working directory for stdin).
fn load_map(input: &InputArg, caps: &Caps) -> Result<(FiniteMetricSpace, SetValuedMap)> {
    let (text, dir) = read_document(input)?;
    let doc = MapDoc::parse(&text)?;
    let space = match &doc.space {
        SpaceRef::Inline(sd) => sd.to_space()?,
        SpaceRef::Path(rel) => {
            let full = dir.unwrap_or_default().join(rel);
            let text = std::fs::read_to_string(&full).map_err(|e| {
                Error::input(format!("cannot read space file {}: {}", full.display(), e))
            })?;
            SpaceDoc::parse(&text)?.to_space()?
        }
    };
    check_cap(&space, caps)?;
    let map = doc.to_map(&space)?;
    Ok((space, map))
}

fn load_game(input: &InputArg, caps: &Caps) -> Result<Game> {
    let (text, _) = read_document(input)?;
    let game = GameDoc::parse(&text)?.to_game()?;
    for s in game.strategy_spaces() {
        check_cap(s, caps)?;
    }
    Ok(game)
}

fn build_derived(space: &FiniteMetricSpace, m: MetricChoice) -> Result<Option<DerivedMetric>> {
    Ok(match m {
        MetricChoice::Base => None,
        MetricChoice::Chain(r) => Some(chain_metric(space, r)?),
        MetricChoice::Path(eps) => Some(path_metric(space, eps)?),
    })
}

fn metric_echo(m: MetricChoice) -> Value {
    match m {
        MetricChoice::Base => json!({"kind": "base"}),
        MetricChoice::Chain(r) => json!({"kind": "chain", "r": r}),
        MetricChoice::Path(eps) => json!({"kind": "path", "eps": eps}),
    }
}

fn metric_name(m: MetricChoice) -> String {
    match m {
        MetricChoice::Base => "base".to_string(),
        MetricChoice::Chain(r) => format!("chain:{}", r),
        MetricChoice::Path(eps) => format!("path:{}", eps),
    }
}

fn point_index(space: &FiniteMetricSpace, label: &str) -> Result<usize> {
    space
        .index_of(label)
        .ok_or_else(|| Error::input(format!("no point named '{}'", label)))
}

fn parse_profile(game: &Game, text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != game.players() {
        return Err(Error::input(format!(
            "profile '{}' has {} entries for {} players",
            text,
            parts.len(),
            game.players()
        )));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            game.strategy_space(i).index_of(part).ok_or_else(|| {
                Error::input(format!("player {} has no strategy '{}'", i + 1, part))
            })
        })
        .collect()
}

fn profile_labels(game: &Game, profile: &[usize]) -> Vec<String> {
    profile
        .iter()
        .enumerate()
        .map(|(i, &s)| game.strategy_space(i).label(s).to_string())
        .collect()
}

fn space_check(
    input: &InputArg,
    tol: f64,
    r: Option<f64>,
    convexity: bool,
    caps: &Caps,
) -> Result<Outcome> {
    let space = load_space(input, caps)?;
    let label = |i: usize| space.label(i).to_string();
    let report = validate_metric(&space, tol);

    let mut result = Map::new();
    result.insert("points".into(), json!(space.len()));
    result.insert("diameter".into(), json!(space.diameter()));
    result.insert("validation".into(), validation_json(&report, &label));
    let mut lines = vec![format!(
        "metric axioms: {} ({} point(s), triangle tol {})",
        if report.passed { "passed" } else { "failed" },
        space.len(),
        tol
    )];
    if let Some(v) = report.violations.first() {
        lines.push(format!(
            "  first violation: {:?} at [{}] by {:e}",
            v.axiom,
            v.witness
                .iter()
                .map(|&i| label(i))
                .collect::<Vec<_>>()
                .join(", "),
            v.magnitude
        ));
    }
    if let Some(r) = r {
        let classes = components_at_scale(&space, r)?;
        let (chainable, _) = is_r_chainable(&space, r)?;
        lines.push(format!(
            "at scale {}: {} component(s), chainable: {}",
            r,
            classes.len(),
            chainable
        ));
        result.insert("components".into(), components_json(&classes, &label));
        result.insert("chainable".into(), json!(chainable));
    }
    if convexity {
        let conv = check_metric_convexity(&space, tol);
        let passing = conv.pairs.iter().filter(|p| p.passed).count();
        lines.push(format!(
            "metric convexity: {}/{} pairs admit midpoints",
            passing,
            conv.pairs.len()
        ));
        result.insert("convexity".into(), convexity_json(&conv, &label));
    }

    let negative = !report.passed;
    Ok(Outcome {
        config: json!({
            "tol": tol,
            "r": r,
            "convexity": convexity,
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        result: Value::Object(result),
        summary: lines.join("\n"),
        negative,
    })
}

fn space_product(files: &[PathBuf], combiner: &str, caps: &Caps) -> Result<Outcome> {
    let combiner: Combiner = combiner.parse()?;
    let mut factors = Vec::with_capacity(files.len());
    for f in files {
        let text = std::fs::read_to_string(f)
            .map_err(|e| Error::input(format!("cannot read {}: {}", f.display(), e)))?;
        let space = SpaceDoc::parse(&text)?.to_space()?;
        check_cap(&space, caps)?;
        factors.push(space);
    }
    let refs: Vec<&FiniteMetricSpace> = factors.iter().collect();
    let product = product_space(&refs, combiner, caps.product_points)?;
    let doc = SpaceDoc::from_space(&product);
    Ok(Outcome {
        config: json!({
            "combiner": combiner.to_string(),
            "cap": caps.product_points,
            "factors": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        }),
        summary: format!(
            "product of {} factor(s) under {}: {} points, diameter {}",
            files.len(),
            combiner,
            product.len(),
            product.diameter()
        ),
        result: serde_json::to_value(&doc).unwrap(),
        negative: false,
    })
}

fn metric_table(input: &InputArg, choice: MetricChoice, caps: &Caps) -> Result<Outcome> {
    let space = load_space(input, caps)?;
    let derived = build_derived(&space, choice)?.expect("table commands always derive");
    let doc = DerivedDoc::from_derived(&derived);
    let unreachable = doc
        .distances
        .iter()
        .flatten()
        .filter(|e| e.is_none())
        .count();
    Ok(Outcome {
        config: json!({
            "metric": metric_echo(choice),
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        summary: format!(
            "{} metric at scale {} on {} points: {} unreachable ordered pair(s)",
            doc.kind, doc.scale, space.len(), unreachable
        ),
        result: serde_json::to_value(&doc).unwrap(),
        negative: false,
    })
}

fn metric_geodesic(
    input: &InputArg,
    eps: f64,
    start: &str,
    end: &str,
    caps: &Caps,
) -> Result<Outcome> {
    let space = load_space(input, caps)?;
    let from = point_index(&space, start)?;
    let to = point_index(&space, end)?;
    let path = geodesic(&space, eps, from, to)?;
    let length = path_length(&space, &path);
    let waypoints: Vec<String> = path
        .waypoints()
        .iter()
        .map(|&i| space.label(i).to_string())
        .collect();
    Ok(Outcome {
        config: json!({
            "eps": eps,
            "from": start,
            "to": end,
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        summary: format!(
            "geodesic '{}' to '{}': {} waypoint(s), length {}",
            start,
            end,
            waypoints.len(),
            length
        ),
        result: json!({
            "from": start,
            "to": end,
            "waypoints": waypoints,
            "params": path.params(),
            "length": length,
        }),
        negative: false,
    })
}

fn map_analyze(
    input: &InputArg,
    metric: MetricChoice,
    neighborhood: Option<NbhdArg>,
    local_r: Option<f64>,
    slope_h: Option<f64>,
    caps: &Caps,
) -> Result<Outcome> {
    let (space, map) = load_map(input, caps)?;
    let derived = build_derived(&space, metric)?;
    let view = match &derived {
        Some(d) => MetricView::Derived(d),
        None => MetricView::Base(&space),
    };
    let label = |i: usize| space.label(i).to_string();

    let mut certificates = Map::new();
    let mut lines = vec![format!("metric: {}", metric_name(metric))];
    let mut any_holds = false;

    let global = global_modulus(&map, &view);
    lines.push(certificate_summary("global", &global));
    any_holds |= global.holds;
    certificates.insert("global".into(), certificate_json(&global, &label));

    let shrinking = is_shrinking(&map, &view);
    lines.push(certificate_summary("shrinking", &shrinking));
    any_holds |= shrinking.holds;
    certificates.insert("shrinking".into(), certificate_json(&shrinking, &label));

    if let Some(NbhdArg(nbhd)) = neighborhood {
        let cert = pointwise_certificate(&map, &view, nbhd)?;
        lines.push(certificate_summary("pointwise", &cert));
        any_holds |= cert.holds;
        certificates.insert("pointwise".into(), certificate_json(&cert, &label));
    }
    if let Some(r) = local_r {
        let cert = local_certificate(&map, &view, r)?;
        lines.push(certificate_summary("local", &cert));
        any_holds |= cert.holds;
        certificates.insert("local".into(), certificate_json(&cert, &label));
    }

    let mut result = Map::new();
    result.insert("certificates".into(), Value::Object(certificates));
    if let Some(h) = slope_h {
        let slopes = discrete_slope(&map, &view, h)?;
        let peak = slopes.iter().cloned().fold(0.0, f64::max);
        lines.push(format!("slopes at window {}: max {}", h, peak));
        result.insert("slopes".into(), json!(slopes));
    }

    Ok(Outcome {
        config: json!({
            "metric": metric_echo(metric),
            "neighborhood": neighborhood.map(|n| serde_json::to_value(n.0).unwrap()),
            "local_r": local_r,
            "slope_h": slope_h,
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        result: Value::Object(result),
        summary: lines.join("\n"),
        negative: !any_holds,
    })
}

fn map_fix(input: &InputArg, caps: &Caps) -> Result<Outcome> {
    let (space, map) = load_map(input, caps)?;
    let fixed: Vec<String> = fixed_points_exhaustive(&map)
        .into_iter()
        .map(|i| space.label(i).to_string())
        .collect();
    let summary = if fixed.is_empty() {
        "no fixed points".to_string()
    } else {
        format!("{} fixed point(s): {}", fixed.len(), fixed.join(", "))
    };
    Ok(Outcome {
        config: json!({
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        summary,
        negative: fixed.is_empty(),
        result: json!({ "fixed_points": fixed }),
    })
}

fn map_solve(
    input: &InputArg,
    x0: &str,
    max_iter: usize,
    metric: MetricChoice,
    caps: &Caps,
) -> Result<Outcome> {
    let (space, map) = load_map(input, caps)?;
    let start = point_index(&space, x0)?;
    let derived = build_derived(&space, metric)?;
    let view = match &derived {
        Some(d) => MetricView::Derived(d),
        None => MetricView::Base(&space),
    };
    let trace = solve_fixed_point(&map, &view, start, max_iter)?;
    let label = |i: usize| space.label(i).to_string();
    let found = matches!(
        trace.outcome,
        metricfix_core::setvalued::SolveOutcome::FixedPoint { .. }
    );
    Ok(Outcome {
        config: json!({
            "x0": x0,
            "max_iter": max_iter,
            "metric": metric_echo(metric),
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        summary: trace_summary(&trace, &label),
        result: trace_json(&trace, &label),
        negative: !found,
    })
}

fn map_periodic(input: &InputArg, max_period: usize, caps: &Caps) -> Result<Outcome> {
    let (space, map) = load_map(input, caps)?;
    let found = periodic_point_search(&map, max_period)?;
    let (result, summary) = match found {
        Some(p) => (
            json!({
                "found": true,
                "point": space.label(p.point),
                "period": p.period,
            }),
            format!("period {} point: '{}'", p.period, space.label(p.point)),
        ),
        None => (
            json!({ "found": false, "point": null, "period": null }),
            format!("no periodic point up to period {}", max_period),
        ),
    };
    Ok(Outcome {
        config: json!({
            "max_period": max_period,
            "cap": caps.space_points,
            "input": input_echo(input),
        }),
        result,
        summary,
        negative: found.is_none(),
    })
}

fn game_br(input: &InputArg, profile: &str, tie_tol: f64, caps: &Caps) -> Result<Outcome> {
    let game = load_game(input, caps)?;
    let indices = parse_profile(&game, profile)?;
    let mut payoffs = Vec::with_capacity(game.players());
    let mut responses = Vec::with_capacity(game.players());
    for i in 0..game.players() {
        payoffs.push(game.evaluate_payoff(i, &indices)?);
        let br = game.best_response(i, &indices, tie_tol)?;
        responses.push(
            br.members()
                .iter()
                .map(|&s| game.strategy_space(i).label(s).to_string())
                .collect::<Vec<_>>(),
        );
    }
    let summary = responses
        .iter()
        .enumerate()
        .map(|(i, r)| format!("player {}: {{{}}}", i + 1, r.join(", ")))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome {
        config: json!({
            "profile": profile,
            "tie_tol": tie_tol,
            "cap": caps.product_points,
            "input": input_echo(input),
        }),
        result: json!({
            "profile": profile_labels(&game, &indices),
            "payoffs": payoffs,
            "responses": responses,
        }),
        summary: format!("best responses at ({}): {}", profile, summary),
        negative: false,
    })
}

fn game_nash(
    input: &InputArg,
    mode: NashMode,
    x0: Option<&str>,
    tie_tol: f64,
    max_iter: usize,
    metric: DynMetricArg,
    caps: &Caps,
) -> Result<Outcome> {
    let game = load_game(input, caps)?;
    match mode {
        NashMode::Enumerate => {
            let equilibria = game.nash_enumerate(tie_tol, caps.product_points)?;
            let labeled: Vec<Vec<String>> = equilibria
                .iter()
                .map(|p| profile_labels(&game, p))
                .collect();
            let summary = if labeled.is_empty() {
                "no pure equilibrium".to_string()
            } else {
                format!(
                    "{} pure equilibrium(s): {}",
                    labeled.len(),
                    labeled
                        .iter()
                        .map(|p| format!("({})", p.join(",")))
                        .collect::<Vec<_>>()
                        .join("; ")
                )
            };
            Ok(Outcome {
                config: json!({
                    "mode": "enumerate",
                    "tie_tol": tie_tol,
                    "cap": caps.product_points,
                    "input": input_echo(input),
                }),
                negative: labeled.is_empty(),
                result: json!({ "equilibria": labeled }),
                summary,
            })
        }
        NashMode::Dynamics => {
            let x0 = x0.ok_or_else(|| Error::input("dynamics mode needs --x0"))?;
            let start = parse_profile(&game, x0)?;
            let run =
                game.nash_via_dynamics(&start, tie_tol, max_iter, metric.0, caps.product_points)?;
            let label = |flat: usize| profile_label(&game, flat);
            let equilibrium = run.equilibrium.as_ref().map(|p| profile_labels(&game, p));
            let summary = match &equilibrium {
                Some(p) => format!(
                    "dynamics reached ({}) in {} step(s), deviation check {}",
                    p.join(","),
                    run.trace.steps(),
                    if run.verified { "passed" } else { "failed" }
                ),
                None => format!("dynamics found no equilibrium: {}", trace_summary(&run.trace, &label)),
            };
            let metric_echo = match metric.0 {
                DynamicsMetric::Base => json!({"kind": "base"}),
                DynamicsMetric::Path { eps } => json!({"kind": "path", "eps": eps}),
            };
            Ok(Outcome {
                config: json!({
                    "mode": "dynamics",
                    "x0": x0,
                    "tie_tol": tie_tol,
                    "max_iter": max_iter,
                    "metric": metric_echo,
                    "cap": caps.product_points,
                    "input": input_echo(input),
                }),
                negative: !(run.equilibrium.is_some() && run.verified),
                result: json!({
                    "trace": trace_json(&run.trace, &label),
                    "equilibrium": equilibrium,
                    "verified": run.verified,
                }),
                summary,
            })
        }
    }
}

fn game_certify(
    input: &InputArg,
    condition: CertifyCondition,
    r: Option<f64>,
    eps: Option<f64>,
    neighborhood: Option<NbhdArg>,
    tie_tol: f64,
    caps: &Caps,
) -> Result<Outcome> {
    let game = load_game(input, caps)?;
    let params = CertifyParams {
        r,
        eps,
        neighborhood: neighborhood.map(|n| n.0),
        tie_tol,
    };
    let report = game.certify_contractive(condition, &params, caps.product_points)?;
    let label = |flat: usize| profile_label(&game, flat);
    let mut lines = vec![format!(
        "condition {:?}: verdict {}",
        report.condition,
        if report.verdict { "holds" } else { "fails" }
    )];
    for check in &report.space_checks {
        lines.push(format!(
            "  {}: {} ({})",
            check.name,
            if check.passed { "passed" } else { "failed" },
            check.detail
        ));
    }
    lines.push(format!(
        "  {}",
        certificate_summary("best-response map", &report.br_certificate)
    ));
    Ok(Outcome {
        config: json!({
            "condition": condition,
            "r": r,
            "eps": eps,
            "neighborhood": neighborhood.map(|n| serde_json::to_value(n.0).unwrap()),
            "tie_tol": tie_tol,
            "cap": caps.product_points,
            "input": input_echo(input),
        }),
        negative: !report.verdict,
        result: certify_json(&report, &label),
        summary: lines.join("\n"),
    })
}

fn gen_space(seed: u64, n: usize, dim: usize) -> Result<Outcome> {
    let space = cloud_space(seed, n, dim)?;
    let doc = SpaceDoc::from_space(&space);
    Ok(Outcome {
        config: json!({"seed": seed, "n": n, "dim": dim}),
        result: serde_json::to_value(&doc).unwrap(),
        summary: format!("{}-point cloud in {} dimension(s) for seed {}", n, dim, seed),
        negative: false,
    })
}

fn gen_map(seed: u64, set_valued: bool) -> Result<Outcome> {
    let instance = contractive_instance(seed, set_valued);
    // generation metadata goes to stderr so the result stays a plain map
    // document that feeds straight back into `map analyze`
    eprintln!(
        "chain scale {}, modulus bound {}, anchor '{}'",
        instance.chain_scale,
        instance.modulus_bound,
        instance.space.label(instance.anchor)
    );
    let doc = MapDoc::from_map(&instance.space, &instance.map);
    Ok(Outcome {
        config: json!({"seed": seed, "set_valued": set_valued}),
        result: serde_json::to_value(&doc).unwrap(),
        summary: format!(
            "{}-point contractive instance for seed {}",
            instance.space.len(),
            seed
        ),
        negative: false,
    })
}

fn gen_game(seed: u64, max_strategies: usize) -> Result<Outcome> {
    let game = table_game(seed, max_strategies)?;
    let doc = GameDoc::from_game(&game);
    Ok(Outcome {
        config: json!({"seed": seed, "max_strategies": max_strategies}),
        result: serde_json::to_value(&doc).unwrap(),
        summary: format!(
            "2-player table game for seed {}: {} x {} strategies",
            seed,
            game.sizes()[0],
            game.sizes()[1]
        ),
        negative: false,
    })
}
