//! Command-line surface.
//!
//! Graph arguments accept either a family spec (`cycle:5`, `necklace:4`,
//! `star:3`, `path:2`, `matching:4`, `complete:5`,
//! `union:cycle:3,cycle:3`) or `@file.json` with
//! `{"n": int, "edges": [[i, j], ...]}`.
//!
//! Exit codes: 0 success, 2 usage/parse, 3 domain, 4 size cap, 5 capability,
//! 6 I/O.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{
    asymptotic_report, vol_closed_form, volume, AsymptoticFamily, PolytopeKind,
};
use crate::graph::{classify, cycle_edges, enumerate_cycles_cactus, Graph};
use crate::mc;
use crate::numbers::{decimal_string, rational_from_str, ExactRational};
use crate::polytope::{
    build_o, build_q, build_refinement, hrep_row_line, odd_subsets, simplex_w, HalfspaceSystem,
    RefinementKind,
};
use crate::poset::{count_linear_extensions, CountCaps, Engine};
use crate::separation::{separate, separate_exhaustive, ScanMode};

#[derive(Parser)]
#[command(
    name = "bqpvol",
    version,
    about = "Exact and Monte-Carlo volumes of boolean-quadric-polytope relaxations",
    long_about = "Volumes of the relaxations O(G), Q(G) and of the boolean quadric polytope \
P(G) for structured sparse graphs, via exact linear-extension counting and closed forms; \
facet geometry checks, odd-cycle separation, asymptotics and the necklace experiment."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolytopeArg {
    /// Order-polytope relaxation (F0–F2 + box)
    O,
    /// Basic relaxation (F0–F3 + x-box)
    Q,
    /// Q + all odd-cycle rows of the longest cycle
    R,
    /// Q + all odd-cycle rows of every triangle
    T,
    /// Q + all odd-cycle rows of every cycle (the integer hull for cacti)
    P,
    /// Set difference Q ∖ P (volume only)
    #[value(name = "Q-minus-P")]
    QMinusP,
}

impl PolytopeArg {
    fn name(self) -> &'static str {
        match self {
            PolytopeArg::O => "O",
            PolytopeArg::Q => "Q",
            PolytopeArg::R => "R",
            PolytopeArg::T => "T",
            PolytopeArg::P => "P",
            PolytopeArg::QMinusP => "Q-minus-P",
        }
    }

    fn exact_kind(self) -> Option<PolytopeKind> {
        match self {
            PolytopeArg::O => Some(PolytopeKind::O),
            PolytopeArg::Q => Some(PolytopeKind::Q),
            PolytopeArg::P => Some(PolytopeKind::P),
            PolytopeArg::QMinusP => Some(PolytopeKind::QMinusP),
            PolytopeArg::R | PolytopeArg::T => None,
        }
    }

    fn build_system(self, g: &Graph) -> Result<HalfspaceSystem> {
        match self {
            PolytopeArg::O => Ok(build_o(g)),
            PolytopeArg::Q => Ok(build_q(g)),
            PolytopeArg::R => build_refinement(g, RefinementKind::BigCycle),
            PolytopeArg::T => build_refinement(g, RefinementKind::Triangles),
            PolytopeArg::P => build_refinement(g, RefinementKind::AllCycles),
            PolytopeArg::QMinusP => Err(Error::capability(
                "Q-minus-P is a set difference, not a halfspace system; use an exact engine",
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// closed form → forest LE → ideal DP
    Auto,
    /// permutation brute force (d ≤ cap)
    Brute,
    /// order-ideal dynamic program
    Ideal,
    /// cover-forest profile merge (forests only)
    Forest,
    /// Monte-Carlo box rejection (approximation; needs --samples)
    Mc,
}

impl EngineArg {
    fn exact(self) -> Option<Engine> {
        match self {
            EngineArg::Auto => Some(Engine::Auto),
            EngineArg::Brute => Some(Engine::BruteForce),
            EngineArg::Ideal => Some(Engine::IdealDp),
            EngineArg::Forest => Some(Engine::Forest),
            EngineArg::Mc => None,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "pretty", ignore_case = true)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapArgs {
    /// Max dimension for the brute-force engine
    #[arg(long)]
    cap_bruteforce: Option<usize>,
    /// Max order-ideal count for the ideal-DP engine
    #[arg(long)]
    cap_ideals: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> CountCaps {
        let mut caps = CountCaps::default();
        if let Some(b) = self.cap_bruteforce {
            caps.brute_cap = b;
        }
        if let Some(i) = self.cap_ideals {
            caps.ideal_cap = i;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Volume of a polytope attached to a graph (exact where possible)
    Volume {
        /// Family spec or @file.json
        graph: String,
        #[arg(long, value_enum, default_value = "Q", ignore_case = true)]
        polytope: PolytopeArg,
        #[arg(long, value_enum, default_value = "auto", ignore_case = true)]
        engine: EngineArg,
        /// Sample count (only with --engine mc)
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// RNG seed (only with --engine mc)
        #[arg(long, default_value_t = mc::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Count linear extensions of the incidence poset
    Lecount {
        graph: String,
        #[arg(long, value_enum, default_value = "auto", ignore_case = true)]
        engine: EngineArg,
        /// Also print the poset cover relations
        #[arg(long)]
        dump_poset: bool,
        #[command(flatten)]
        caps: CapArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// d-th-root convergence table for a graph family
    Asymptotics {
        /// One of: star, path, cycle, complete, triangles
        family: String,
        /// Largest family index
        #[arg(long, default_value_t = 20)]
        to: u64,
        #[arg(long, value_enum, default_value = "Q", ignore_case = true)]
        polytope: PolytopeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Necklace relaxation comparison: exact Q + shared-stream MC for Q,R,T,P
    Necklace {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2_000_000)]
        samples: u64,
        #[arg(long, default_value_t = mc::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Verify the cut-off simplex W for every odd subset A of a cycle
    SimplexCheck {
        /// A cycle graph (cycle:m)
        graph: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Find a violated odd-cycle inequality at a Q-feasible point
    Separate {
        /// A cactus graph
        graph: String,
        /// Point as inline JSON or @file.json: {"x": [...], "y": [...]} with
        /// rational strings ("1/2") or numbers
        point: String,
        /// Report the largest violation instead of the first (canonical cycle order)
        #[arg(long)]
        most_violated: bool,
        /// Use exhaustive odd-subset enumeration instead of the F′ sweep
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export the H-representation (plain text rows + JSON manifest)
    ExportHrep {
        graph: String,
        #[arg(long, value_enum, default_value = "Q", ignore_case = true)]
        polytope: PolytopeArg,
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Parse argv, execute, and map errors to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version to stdout (exit 0) and usage errors
            // to stderr (exit 2).
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_graph(spec: &str) -> Result<Graph> {
    if let Some(path) = spec.strip_prefix('@') {
        Graph::from_json_str(&fs::read_to_string(path)?)
    } else {
        Graph::from_spec_str(spec)
    }
}

fn emit(common: &CommonArgs, text: String) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn graph_header(spec: &str, g: &Graph) -> String {
    let class = classify(&g);
    format!(
        "graph: {} ({}), n = {}, m = {}, d = {}\n",
        spec,
        class.tag,
        g.n(),
        g.m(),
        g.dim()
    )
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Volume { graph, polytope, engine, samples, seed, caps, common } => {
            cmd_volume(&graph, polytope, engine, samples, seed, caps.caps(), &common)
        }
        Cmd::Lecount { graph, engine, dump_poset, caps, common } => {
            cmd_lecount(&graph, engine, dump_poset, caps.caps(), &common)
        }
        Cmd::Asymptotics { family, to, polytope, common } => {
            cmd_asymptotics(&family, to, polytope, &common)
        }
        Cmd::Necklace { n, samples, seed, common } => cmd_necklace(n, samples, seed, &common),
        Cmd::SimplexCheck { graph, common } => cmd_simplex_check(&graph, &common),
        Cmd::Separate { graph, point, most_violated, exhaustive, common } => {
            cmd_separate(&graph, &point, most_violated, exhaustive, &common)
        }
        Cmd::ExportHrep { graph, polytope, common } => cmd_export_hrep(&graph, polytope, &common),
    }
}

// ---- volume ---------------------------------------------------------------------

#[derive(Serialize)]
struct McVolumeOut {
    polytope: String,
    dimension: usize,
    samples: u64,
    seed: u64,
    hits: u64,
    estimate: f64,
    std_error: f64,
    dth_root: f64,
    dth_root_std_error: f64,
    method: String,
}

fn cmd_volume(
    spec: &str,
    polytope: PolytopeArg,
    engine: EngineArg,
    samples: u64,
    seed: u64,
    caps: CountCaps,
    common: &CommonArgs,
) -> Result<()> {
    let g = load_graph(spec)?;
    match engine.exact() {
        Some(exact_engine) => {
            let kind = polytope.exact_kind().ok_or_else(|| {
                Error::capability(format!(
                    "no exact volume engine for refinement {}; use --engine mc \
                     or the necklace subcommand",
                    polytope.name()
                ))
            })?;
            let res = volume(&g, kind, exact_engine, caps).map_err(|e| match e {
                Error::Size { msg, reached } => Error::Size {
                    msg: format!("{msg}; consider --engine mc for an approximation"),
                    reached,
                },
                other => other,
            })?;
            let text = match common.format {
                Format::Json => to_json(&res)?,
                Format::Csv => format!(
                    "polytope,dimension,volume,volume_f64,dth_root,method\n{},{},{},{},{},{}\n",
                    res.polytope,
                    res.dimension,
                    res.value,
                    res.value_f64,
                    res.dth_root.map_or(String::new(), |r| r.to_string()),
                    csv_quote(&res.method),
                ),
                Format::Pretty => {
                    let mut s = graph_header(spec, &g);
                    let _ = writeln!(s, "polytope: {}", res.polytope);
                    let _ = writeln!(s, "volume   = {}  (exact rational)", res.value);
                    let _ = writeln!(
                        s,
                        "         ≈ {}  (approximation, 15 significant digits)",
                        decimal_string(&res.exact, 15)
                    );
                    if let Some(root) = res.dth_root {
                        let _ = writeln!(s, "d-th root ≈ {root:.15}  (approximation)");
                    }
                    let _ = writeln!(s, "method: {}", res.method);
                    s
                }
            };
            emit(common, text)
        }
        None => {
            let system = polytope.build_system(&g)?;
            let est = mc::estimate_volume(&system, samples, seed)?;
            let out = McVolumeOut {
                polytope: polytope.name().to_string(),
                dimension: est.dimension,
                samples: est.samples,
                seed: est.seed,
                hits: est.hits,
                estimate: est.estimate,
                std_error: est.std_error,
                dth_root: est.dth_root,
                dth_root_std_error: est.dth_root_std_error,
                method: "monte-carlo box rejection (approximation)".to_string(),
            };
            let text = match common.format {
                Format::Json => to_json(&out)?,
                Format::Csv => format!(
                    "polytope,dimension,samples,seed,hits,estimate,std_error,dth_root,dth_root_std_error\n{},{},{},{},{},{},{},{},{}\n",
                    out.polytope,
                    out.dimension,
                    out.samples,
                    out.seed,
                    out.hits,
                    out.estimate,
                    out.std_error,
                    out.dth_root,
                    out.dth_root_std_error,
                ),
                Format::Pretty => {
                    let mut s = graph_header(spec, &g);
                    let _ = writeln!(s, "polytope: {}", out.polytope);
                    let _ = writeln!(
                        s,
                        "volume ≈ {} ± {}  (MC approximation, {} samples, seed {})",
                        out.estimate, out.std_error, out.samples, out.seed
                    );
                    let _ = writeln!(
                        s,
                        "d-th root ≈ {} ± {}  (approximation)",
                        out.dth_root, out.dth_root_std_error
                    );
                    let _ = writeln!(s, "hits: {}", out.hits);
                    let _ = writeln!(s, "method: {}", out.method);
                    s
                }
            };
            emit(common, text)
        }
    }
}

// ---- lecount --------------------------------------------------------------------

#[derive(Serialize)]
struct LecountOut {
    n: usize,
    m: usize,
    d: usize,
    extensions: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    poset: Option<Vec<String>>,
}

fn poset_cover_lines(g: &Graph) -> Vec<String> {
    g.edges()
        .iter()
        .map(|&(i, j)| format!("y({i},{j}) < x{i}, x{j}"))
        .collect()
}

fn cmd_lecount(
    spec: &str,
    engine: EngineArg,
    dump_poset: bool,
    caps: CountCaps,
    common: &CommonArgs,
) -> Result<()> {
    let g = load_graph(spec)?;
    let engine = engine
        .exact()
        .ok_or_else(|| Error::capability("lecount is exact; --engine mc does not apply"))?;
    let count = count_linear_extensions(&g, engine, caps)?;
    let out = LecountOut {
        n: g.n(),
        m: g.m(),
        d: g.dim(),
        extensions: count.to_string(),
        poset: dump_poset.then(|| poset_cover_lines(&g)),
    };
    let text = match common.format {
        Format::Json => to_json(&out)?,
        Format::Csv => format!("n,m,d,extensions\n{},{},{},{}\n", out.n, out.m, out.d, out.extensions),
        Format::Pretty => {
            let mut s = graph_header(spec, &g);
            if let Some(lines) = &out.poset {
                let _ = writeln!(s, "incidence poset ({} elements):", g.dim());
                for line in lines {
                    let _ = writeln!(s, "  {line}");
                }
            }
            let _ = writeln!(s, "linear extensions e = {}", out.extensions);
            s
        }
    };
    emit(common, text)
}

// ---- asymptotics ----------------------------------------------------------------

fn cmd_asymptotics(family: &str, to: u64, polytope: PolytopeArg, common: &CommonArgs) -> Result<()> {
    let family: AsymptoticFamily = family.parse()?;
    let kind = polytope.exact_kind().ok_or_else(|| {
        Error::capability(format!(
            "asymptotics needs an exact volume; {} has none",
            polytope.name()
        ))
    })?;
    let start = match family {
        AsymptoticFamily::Cycle => 3,
        AsymptoticFamily::Complete => 2,
        _ => 1,
    };
    if to < start {
        return Err(Error::domain(format!(
            "--to {to} is below the family's smallest index {start}"
        )));
    }
    let indices: Vec<u64> = (start..=to).collect();
    let report = asymptotic_report(family, kind, &indices)?;
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("index,dimension,dth_root,normalized,gap_to_limit\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.index, r.dimension, r.dth_root, r.normalized, r.gap_to_limit
                );
            }
            s
        }
        Format::Pretty => {
            let mut s = format!(
                "family: {:?}, polytope: {}\nlimit: {}  ({})\n",
                report.family, report.polytope, report.limit, report.limit_description
            );
            if report.scaled_by_index {
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>22} {:>22} {:>14}",
                    "index", "dim", "d-th root", "index·root", "gap"
                );
                for r in &report.rows {
                    let _ = writeln!(
                        s,
                        "{:>6} {:>6} {:>22.15} {:>22.15} {:>14.6e}",
                        r.index, r.dimension, r.dth_root, r.normalized, r.gap_to_limit
                    );
                }
            } else {
                let _ = writeln!(
                    s,
                    "{:>6} {:>6} {:>22} {:>14}",
                    "index", "dim", "d-th root", "gap"
                );
                for r in &report.rows {
                    let _ = writeln!(
                        s,
                        "{:>6} {:>6} {:>22.15} {:>14.6e}",
                        r.index, r.dimension, r.dth_root, r.gap_to_limit
                    );
                }
            }
            s
        }
    };
    emit(common, text)
}

// ---- necklace -------------------------------------------------------------------

fn cmd_necklace(n: usize, samples: u64, seed: u64, common: &CommonArgs) -> Result<()> {
    let report = mc::necklace_experiment(n, samples, seed)?;
    let text = match common.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            // First five columns follow the reference table layout (roots).
            let root = |i: usize| report.rows[i].dth_root;
            format!(
                "n,Q,R,T,P,Q_table_norm,samples,seed\n{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}\n",
                report.n,
                root(0),
                root(1),
                root(2),
                root(3),
                report.table_q_root,
                report.samples,
                report.seed
            )
        }
        Format::Pretty => {
            let mut s = format!(
                "necklace N_{} (d = {}), {} samples, seed {}\n",
                report.n, report.dimension, report.samples, report.seed
            );
            let _ = writeln!(
                s,
                "exact vol Q = {}  (rational)\nexact Q root = {:.7}",
                report.exact_q_volume, report.exact_q_root
            );
            let _ = writeln!(
                s,
                "Q root under the reference-table normalization e/(2^n d!) = {:.7}",
                report.table_q_root
            );
            let _ = writeln!(
                s,
                "{:>4} {:>12} {:>14} {:>12} {:>12} {:>12}",
                "", "hits", "volume", "std error", "d-th root", "root σ"
            );
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>4} {:>12} {:>14.6e} {:>12.3e} {:>12.6} {:>12.2e}",
                    r.polytope, r.hits, r.estimate, r.std_error, r.dth_root, r.dth_root_std_error
                );
            }
            let _ = writeln!(s, "(volumes are MC approximations conditioned on exact vol Q)");
            s
        }
    };
    emit(common, text)
}

// ---- simplex-check --------------------------------------------------------------

#[derive(Serialize)]
struct SimplexCheckOut {
    cycle_length: usize,
    subsets: usize,
    rows: Vec<SimplexRowOut>,
    sum_of_volumes: String,
    q_minus_p_volume: String,
    sum_matches_q_minus_p: bool,
}

#[derive(Serialize)]
struct SimplexRowOut {
    a: Vec<(usize, usize)>,
    det_abs: String,
    volume: String,
}

fn cmd_simplex_check(spec: &str, common: &CommonArgs) -> Result<()> {
    let g = load_graph(spec)?;
    let cycles = enumerate_cycles_cactus(&g)?;
    if cycles.len() != 1 || classify(&g).components.len() != 1 {
        return Err(Error::domain(
            "simplex-check expects a single cycle graph (cycle:m)",
        ));
    }
    let edges = cycle_edges(&cycles[0]);
    let mut rows = Vec::new();
    let mut sum = ExactRational::from_integer(0.into());
    for a in odd_subsets(&edges) {
        let w = simplex_w(&g, &a)?;
        sum += &w.volume_exact;
        rows.push(SimplexRowOut {
            a: w.a.clone(),
            det_abs: w.det_abs.clone(),
            volume: w.volume.clone(),
        });
    }
    let qmp = vol_closed_form(&g, PolytopeKind::QMinusP)?;
    let out = SimplexCheckOut {
        cycle_length: edges.len(),
        subsets: rows.len(),
        sum_of_volumes: sum.to_string(),
        q_minus_p_volume: qmp.to_string(),
        sum_matches_q_minus_p: sum == qmp,
        rows,
    };
    let text = match common.format {
        Format::Json => to_json(&out)?,
        Format::Csv => {
            let mut s = String::from("a,det_abs,volume\n");
            for r in &out.rows {
                let a_str: Vec<String> =
                    r.a.iter().map(|(u, v)| format!("({u} {v})")).collect();
                let _ = writeln!(s, "{},{},{}", csv_quote(&a_str.join(" ")), r.det_abs, r.volume);
            }
            s
        }
        Format::Pretty => {
            let mut s = graph_header(spec, &g);
            for r in &out.rows {
                let a_str: Vec<String> = r.a.iter().map(|(u, v)| format!("({u},{v})")).collect();
                let _ = writeln!(
                    s,
                    "A = {{{}}}: |det| = {}, vol = {}",
                    a_str.join(", "),
                    r.det_abs,
                    r.volume
                );
            }
            let _ = writeln!(
                s,
                "sum of W volumes = {} ; vol Q - vol P = {} ; equal: {}",
                out.sum_of_volumes, out.q_minus_p_volume, out.sum_matches_q_minus_p
            );
            s
        }
    };
    emit(common, text)
}

// ---- separate -------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct PointInput {
    x: Vec<serde_json::Value>,
    y: Vec<serde_json::Value>,
}

fn parse_coordinate(v: &serde_json::Value) -> Result<ExactRational> {
    match v {
        serde_json::Value::String(s) => rational_from_str(s),
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(ExactRational::from_integer(i.into()))
            } else {
                let f = num
                    .as_f64()
                    .ok_or_else(|| Error::parse(format!("cannot parse coordinate {num}")))?;
                ExactRational::from_float(f)
                    .ok_or_else(|| Error::parse(format!("non-finite coordinate {num}")))
            }
        }
        other => Err(Error::parse(format!(
            "coordinate must be a rational string or number, got {other}"
        ))),
    }
}

fn parse_point(g: &Graph, raw: &str) -> Result<Vec<ExactRational>> {
    let body = if let Some(path) = raw.strip_prefix('@') {
        fs::read_to_string(path)?
    } else {
        raw.to_string()
    };
    let input: PointInput = serde_json::from_str(&body)
        .map_err(|e| Error::parse(format!("point must be {{\"x\": [...], \"y\": [...]}}: {e}")))?;
    if input.x.len() != g.n() || input.y.len() != g.m() {
        return Err(Error::domain(format!(
            "point has {} x and {} y coordinates, graph needs {} and {}",
            input.x.len(),
            input.y.len(),
            g.n(),
            g.m()
        )));
    }
    input
        .x
        .iter()
        .chain(input.y.iter())
        .map(parse_coordinate)
        .collect()
}

#[derive(Serialize)]
struct SeparateOut {
    cycles_checked: usize,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    row: Option<String>,
    violations_by_cycle: Vec<SeparateFindingOut>,
}

#[derive(Serialize)]
struct SeparateFindingOut {
    cycle: Vec<usize>,
    a: Vec<(usize, usize)>,
    violation: String,
}

fn cmd_separate(
    spec: &str,
    point_raw: &str,
    most_violated: bool,
    exhaustive: bool,
    common: &CommonArgs,
) -> Result<()> {
    let g = load_graph(spec)?;
    let point = parse_point(&g, point_raw)?;
    let result = if exhaustive {
        separate_exhaustive(&g, &point)?
    } else {
        separate(&g, &point)?
    };
    let mode = if most_violated {
        ScanMode::MostViolated
    } else {
        ScanMode::FirstViolated
    };
    let picked = result.outcome(mode);
    let out = SeparateOut {
        cycles_checked: result.cycles_checked,
        found: picked.is_some(),
        cycle: picked.map(|v| v.cycle.clone()),
        a: picked.map(|v| v.a.clone()),
        violation: picked.map(|v| v.violation.to_string()),
        row: picked.map(|v| hrep_row_line(&v.row, g.dim())),
        violations_by_cycle: result
            .findings
            .iter()
            .map(|f| SeparateFindingOut {
                cycle: f.cycle.clone(),
                a: f.a.clone(),
                violation: f.violation.to_string(),
            })
            .collect(),
    };
    let text = match common.format {
        Format::Json => to_json(&out)?,
        Format::Csv => {
            let mut s = String::from("cycle,a,violation\n");
            for f in &out.violations_by_cycle {
                let cyc: Vec<String> = f.cycle.iter().map(|v| v.to_string()).collect();
                let a_str: Vec<String> =
                    f.a.iter().map(|(u, v)| format!("({u} {v})")).collect();
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    csv_quote(&cyc.join(" ")),
                    csv_quote(&a_str.join(" ")),
                    f.violation
                );
            }
            s
        }
        Format::Pretty => {
            let mut s = graph_header(spec, &g);
            match picked {
                Some(v) => {
                    let a_str: Vec<String> =
                        v.a.iter().map(|(a, b)| format!("({a},{b})")).collect();
                    let _ = writeln!(
                        s,
                        "violated odd-cycle inequality on cycle {:?} with A = {{{}}}",
                        v.cycle,
                        a_str.join(", ")
                    );
                    let _ = writeln!(s, "violation = {}  (exact rational)", v.violation);
                    let _ = writeln!(s, "row: {}", hrep_row_line(&v.row, g.dim()));
                    if result.findings.len() > 1 {
                        let _ = writeln!(
                            s,
                            "({} of {} cycles violated; reported: {})",
                            result.findings.len(),
                            result.cycles_checked,
                            if most_violated { "largest violation" } else { "first in canonical order" }
                        );
                    }
                }
                None => {
                    let _ = writeln!(
                        s,
                        "no violated odd-cycle inequality ({} cycles checked)",
                        result.cycles_checked
                    );
                }
            }
            s
        }
    };
    emit(common, text)
}

// ---- export-hrep ----------------------------------------------------------------

#[derive(Serialize)]
struct HrepManifest {
    polytope: String,
    dimension: usize,
    row_count: usize,
    graph: GraphManifest,
    rows: Vec<HrepRowManifest>,
}

#[derive(Serialize)]
struct GraphManifest {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct HrepRowManifest {
    index: usize,
    tag: String,
    text: String,
}

fn cmd_export_hrep(spec: &str, polytope: PolytopeArg, common: &CommonArgs) -> Result<()> {
    let g = load_graph(spec)?;
    let system = polytope.build_system(&g)?;
    let manifest = HrepManifest {
        polytope: polytope.name().to_string(),
        dimension: system.dimension,
        row_count: system.rows.len(),
        graph: GraphManifest { n: g.n(), edges: g.edges().to_vec() },
        rows: system
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| HrepRowManifest {
                index: i,
                tag: row.tag.to_string(),
                text: hrep_row_line(row, system.dimension),
            })
            .collect(),
    };
    match common.format {
        Format::Json => emit(common, to_json(&manifest)?),
        Format::Csv => Err(Error::parse(
            "export-hrep supports --format pretty (text rows) or json (manifest)",
        )),
        Format::Pretty => {
            let text = system.to_hrep_text();
            match &common.out {
                Some(path) => {
                    fs::write(path, &text)?;
                    let mut manifest_path = path.as_os_str().to_owned();
                    manifest_path.push(".manifest.json");
                    let manifest_path = PathBuf::from(manifest_path);
                    fs::write(&manifest_path, to_json(&manifest)?)?;
                    println!(
                        "wrote {} rows to {} and manifest to {}",
                        system.rows.len(),
                        path.display(),
                        manifest_path.display()
                    );
                    Ok(())
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

// ---- shared helpers -------------------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::parse(format!("serialization failed: {e}")))
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
