use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;
use turmlab::oracle::{self, OracleConfig, OracleResult, ScanReport};
use turmlab::transforms::{redirect_traced, RewireStep};
use turmlab::turan::{build_turan_member, turan_class_sizes};
use turmlab::{
    build_member, canonical_form, compute_x, edit_count_labelled, find_kr_touching, g_value,
    is_member, largem_bound, peel, push, turm_number, FamilySpec, Instance, Rational, VertexSet,
};

use crate::document::{DocumentError, InstanceDocument};
use crate::dot::to_dot;
use crate::graph6;

pub const THREADS_VAR: &str = "TURMLAB_THREADS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RANGE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Core(#[from] turmlab::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use turmlab::Error as E;
        match self {
            CliError::Core(E::OracleRange { .. } | E::RatioOutOfRange { .. }) => EXIT_RANGE,
            CliError::Core(E::Precondition { .. } | E::ConclusionFailed { .. } | E::Seq(_)) => EXIT_VIOLATED,
            _ => EXIT_USAGE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "turmlab", version, about = "Graphs with no r-clique meeting a fixed vertex set M")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a member of the extremal family, or a Turán graph.
    Build(BuildArgs),
    /// Report edge count, deficiency, constraint status and membership.
    Check(CheckArgs),
    /// Apply push, redirect or peel and print the result with a trace.
    Transform(TransformArgs),
    /// Exhaustive maximum, extremal graphs and stability scans (n <= 10).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Clique order (defaults to parts + 1 with --turan).
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: usize,
    /// |M|; M is {0, ..., m-1}.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Vertices of M in each class, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub placement: Option<Vec<usize>>,
    /// 1-based indices of the sporadic vertices to keep.
    #[arg(long = "keep-sporadic", value_delimiter = ',')]
    pub keep_sporadic: Vec<usize>,
    /// Build the Turán graph T_parts(n) instead.
    #[arg(long, requires = "parts")]
    pub turan: bool,
    #[arg(long)]
    pub parts: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Instance document; `-` or absent reads stdin.
    pub doc: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("operation").required(true).args(["push", "redirect", "peel"])))]
pub struct TransformArgs {
    /// Instance document; `-` or absent reads stdin.
    pub doc: Option<PathBuf>,
    /// Push with the given mu in [0, 1) (`a/b` or decimal).
    #[arg(long, value_parser = parse_ratio)]
    pub push: Option<Rational>,
    #[arg(long)]
    pub redirect: bool,
    #[arg(long)]
    pub peel: bool,
    /// nu for the X-set reported after --redirect.
    #[arg(long, value_parser = parse_ratio, default_value = "0")]
    pub nu: Rational,
    /// Write the transformed document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Also list graphs within this many edges of the maximum (n <= 8).
    #[arg(long)]
    pub slack: Option<usize>,
    /// Distance scan up to --slack (default 0).
    #[arg(long)]
    pub scan: bool,
    /// Print JSON instead of tables.
    #[arg(long)]
    pub json: bool,
    /// Write oracle.json, extremal.g6 and, when requested, near_extremal.g6
    /// and scan.json here.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

/// Parses `a/b`, an integer, or a finite decimal into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: {s:?}");
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * den + frac;
        return Ok(Rational::new(if negative { -magnitude } else { magnitude }, den));
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Worker threads from `TURMLAB_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let stdout_err = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    let (text, code) = match cli.command {
        Command::Build(a) => (cmd_build(&a)?, EXIT_OK),
        Command::Check(a) => cmd_check(&a)?,
        Command::Transform(a) => (cmd_transform(&a)?, EXIT_OK),
        Command::Oracle(a) => {
            let cfg = OracleConfig {
                threads: threads_from_env()?,
                ..OracleConfig::default()
            };
            (cmd_oracle(&a, &cfg)?, EXIT_OK)
        }
    };
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    Ok(code)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn read_document(path: Option<&Path>) -> Result<Instance, CliError> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(io_err(p))?,
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(io_err(Path::new("<stdin>")))?;
            s
        }
    };
    Ok(InstanceDocument::parse(&text)?.to_instance()?)
}

/// Emits a document to `--out` (or returns it for stdout) and optional DOT.
fn emit_instance(inst: &Instance, out: Option<&Path>, dot: Option<&Path>) -> Result<Option<String>, CliError> {
    if let Some(p) = dot {
        write_file(p, &to_dot(inst))?;
    }
    let json = InstanceDocument::from_instance(inst).to_json() + "\n";
    match out {
        Some(p) => {
            write_file(p, &json)?;
            Ok(None)
        }
        None => Ok(Some(json)),
    }
}

/// Fills classes of the given sizes with `m` vertices, largest class first.
fn greedy_loads(sizes: &[usize], m: usize) -> Vec<usize> {
    let mut left = m;
    sizes
        .iter()
        .map(|&s| {
            let take = s.min(left);
            left -= take;
            take
        })
        .collect()
}

pub fn build_instance(a: &BuildArgs) -> Result<Instance, CliError> {
    if a.turan {
        let parts = a.parts.expect("clap enforces --parts");
        if parts == 0 {
            return Err(CliError::Usage("--parts must be at least 1".into()));
        }
        if !a.keep_sporadic.is_empty() {
            return Err(CliError::Usage("--keep-sporadic does not apply to --turan".into()));
        }
        let r = a.r.unwrap_or(parts + 1);
        if r != parts + 1 {
            return Err(CliError::Usage(format!("--turan --parts {parts} needs r = {}", parts + 1)));
        }
        let sizes = turan_class_sizes(parts, a.n);
        let loads = a.placement.clone().unwrap_or_else(|| greedy_loads(&sizes, a.m));
        let member = build_turan_member(r, a.n, &loads)?;
        if member.instance.m() != a.m {
            return Err(CliError::Usage(format!("placement sums to {}, not m = {}", member.instance.m(), a.m)));
        }
        return Ok(member.instance);
    }
    let r = a.r.ok_or_else(|| CliError::Usage("--r is required unless --turan is given".into()))?;
    if r < 3 {
        return Err(turmlab::Error::CliqueOrder(r).into());
    }
    if a.n <= (r - 1) * a.m {
        // every extremal graph is Turán; placement loads its classes
        if !a.keep_sporadic.is_empty() {
            return Err(turmlab::Error::InvalidSpec {
                invariant: "n > (r-1)m",
                detail: format!("sporadic vertices need n > (r-1)m; n = {}, (r-1)m = {}", a.n, (r - 1) * a.m),
            }
            .into());
        }
        let sizes = turan_class_sizes(r - 1, a.n);
        let loads = a.placement.clone().unwrap_or_else(|| greedy_loads(&sizes, a.m));
        let member = build_turan_member(r, a.n, &loads)?;
        if member.instance.m() != a.m {
            return Err(turmlab::Error::InvalidSpec {
                invariant: "placement sums to m",
                detail: format!("sum {} vs m = {}", member.instance.m(), a.m),
            }
            .into());
        }
        return Ok(member.instance);
    }
    let mut placement = vec![0; r - 1];
    placement[0] = a.m;
    let spec = FamilySpec {
        r,
        n: a.n,
        m: a.m,
        placement: a.placement.clone().unwrap_or(placement),
        kept_sporadic: a.keep_sporadic.clone(),
    };
    Ok(build_member(&spec)?.instance)
}

fn cmd_build(a: &BuildArgs) -> Result<String, CliError> {
    let inst = build_instance(a)?;
    Ok(emit_instance(&inst, a.out.as_deref(), a.dot.as_deref())?.unwrap_or_default())
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub edges: usize,
    pub turm: u64,
    pub deficiency: i64,
    pub constraint_holds: bool,
    pub witness: Option<Vec<usize>>,
    pub member: bool,
}

pub fn check_report(inst: &Instance) -> Result<CheckReport, CliError> {
    let turm = turm_number(inst.r(), inst.n(), inst.m())?;
    let witness = find_kr_touching(inst).map(|w| w.vertices.to_vec());
    Ok(CheckReport {
        r: inst.r(),
        n: inst.n(),
        m: inst.m(),
        edges: inst.edge_count(),
        turm,
        deficiency: turm as i64 - inst.edge_count() as i64,
        constraint_holds: witness.is_none(),
        member: witness.is_none() && is_member(inst),
        witness,
    })
}

fn cmd_check(a: &CheckArgs) -> Result<(String, u8), CliError> {
    let inst = read_document(a.doc.as_deref())?;
    let rep = check_report(&inst)?;
    let code = if rep.constraint_holds { EXIT_OK } else { EXIT_VIOLATED };
    let text = if a.json {
        serde_json::to_string_pretty(&rep).expect("report serialises") + "\n"
    } else {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!(
            "r = {}, n = {}, m = {}\nedges: {}\nturm: {}\ndeficiency: {}\n",
            rep.r, rep.n, rep.m, rep.edges, rep.turm, rep.deficiency
        );
        match &rep.witness {
            None => s.push_str("constraint: holds\n"),
            Some(w) => s.push_str(&format!("constraint: violated, witness {w:?}\n")),
        }
        s.push_str(&format!("member: {}\n", yes_no(rep.member)));
        s
    };
    Ok((text, code))
}

#[derive(Debug, Serialize)]
pub struct StepJson {
    pub vertex: usize,
    pub old: Vec<usize>,
    pub new: Vec<usize>,
}

impl From<&RewireStep> for StepJson {
    fn from(s: &RewireStep) -> Self {
        StepJson {
            vertex: s.vertex,
            old: s.old.to_vec(),
            new: s.new.to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct XSetJson {
    pub nu: String,
    pub members: Vec<usize>,
    pub size: usize,
    pub bound: String,
    pub certified: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "operation", rename_all = "snake_case")]
pub enum Trace {
    Push {
        mu: String,
        edges_before: usize,
        edges_after: usize,
        gain: usize,
        edits: usize,
        steps: Vec<StepJson>,
    },
    Redirect {
        edges_before: usize,
        edges_after: usize,
        edits: usize,
        steps: Vec<StepJson>,
        x_set: XSetJson,
    },
    Peel {
        edges: usize,
        sizes: Vec<usize>,
        cliques: Vec<Vec<usize>>,
        g_value: i64,
        /// Present only when n <= (r-1)m.
        largem_bound: Option<i64>,
    },
}

#[derive(Debug, Serialize)]
pub struct TransformOutput {
    pub document: InstanceDocument,
    pub trace: Trace,
}

pub fn transform(inst: &Instance, a: &TransformArgs) -> Result<(Instance, Trace), CliError> {
    if let Some(mu) = a.push {
        let t = push(inst, mu)?;
        let trace = Trace::Push {
            mu: mu.to_string(),
            edges_before: inst.edge_count(),
            edges_after: t.result.edge_count(),
            gain: t.gain,
            edits: t.edits,
            steps: t.steps.iter().map(StepJson::from).collect(),
        };
        Ok((t.result, trace))
    } else if a.redirect {
        let (out, steps) = redirect_traced(inst)?;
        let x = compute_x(&out, a.nu)?;
        let trace = Trace::Redirect {
            edges_before: inst.edge_count(),
            edges_after: out.edge_count(),
            edits: edit_count_labelled(inst.graph(), out.graph())?,
            steps: steps.iter().map(StepJson::from).collect(),
            x_set: XSetJson {
                nu: a.nu.to_string(),
                size: x.members.len(),
                members: x.members.to_vec(),
                bound: x.bound.to_string(),
                certified: x.certified,
            },
        };
        Ok((out, trace))
    } else {
        let p = peel(inst)?;
        let (n, m, r) = (inst.n(), inst.m(), inst.r());
        let sizes = p.sizes();
        let trace = Trace::Peel {
            edges: inst.edge_count(),
            g_value: g_value(n, m, r, &sizes)?,
            largem_bound: if inst.is_case_one() {
                Some(largem_bound(n, m, r, &sizes)?)
            } else {
                None
            },
            cliques: p.cliques.iter().map(VertexSet::to_vec).collect(),
            sizes,
        };
        Ok((inst.clone(), trace))
    }
}

fn cmd_transform(a: &TransformArgs) -> Result<String, CliError> {
    let inst = read_document(a.doc.as_deref())?;
    let (result, trace) = transform(&inst, a)?;
    emit_instance(&result, a.out.as_deref(), a.dot.as_deref())?;
    let output = TransformOutput {
        document: InstanceDocument::from_instance(&result),
        trace,
    };
    Ok(serde_json::to_string_pretty(&output).expect("trace serialises") + "\n")
}

#[derive(Debug, Serialize)]
pub struct OracleJson {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub mode: oracle::Mode,
    pub max_edges: usize,
    pub turm: u64,
    pub explored: u64,
    pub complete: bool,
    /// Classes up to isomorphisms fixing M.
    pub extremal_classes: usize,
    /// Classes once M is ignored.
    pub extremal_shapes: usize,
    pub extremal: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct NearExtremalJson {
    pub slack: usize,
    pub graphs: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct OracleOutput {
    pub oracle: OracleJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_extremal: Option<NearExtremalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanReport>,
}

fn oracle_json(res: &OracleResult, turm: u64) -> OracleJson {
    let empty = VertexSet::empty(res.n);
    let shapes: BTreeSet<_> = res.extremal.iter().map(|g| canonical_form(g, &empty)).collect();
    OracleJson {
        r: res.r,
        n: res.n,
        m: res.m,
        mode: res.mode,
        max_edges: res.max_edges,
        turm,
        explored: res.explored,
        complete: res.complete,
        extremal_classes: res.extremal.len(),
        extremal_shapes: shapes.len(),
        extremal: res.extremal.iter().map(graph6::encode).collect(),
    }
}

pub fn oracle_output(a: &OracleArgs, cfg: &OracleConfig) -> Result<OracleOutput, CliError> {
    let res = oracle::max_edges_with(a.r, a.n, a.m, cfg)?;
    let turm = turm_number(a.r, a.n, a.m)?;
    let scan = if a.scan {
        Some(oracle::stability_scan_with(a.r, a.n, a.m, a.slack.unwrap_or(0), cfg)?)
    } else {
        None
    };
    let near_extremal = match (a.slack, a.scan) {
        (Some(slack), false) => Some(NearExtremalJson {
            slack,
            graphs: oracle::near_extremal_with(a.r, a.n, a.m, slack, cfg)?
                .iter()
                .map(graph6::encode)
                .collect(),
        }),
        _ => None,
    };
    Ok(OracleOutput {
        oracle: oracle_json(&res, turm),
        near_extremal,
        scan,
    })
}

fn lines(items: &[String]) -> String {
    items.iter().map(|s| format!("{s}\n")).collect()
}

fn oracle_table(o: &OracleOutput) -> String {
    let x = &o.oracle;
    let mut s = format!("r = {}, n = {}, m = {}\n", x.r, x.n, x.m);
    s += &format!("{:<30}{}\n", "max edges", x.max_edges);
    s += &format!("{:<30}{}\n", "turm", x.turm);
    s += &format!("{:<30}{:?}\n", "mode", x.mode);
    s += &format!("{:<30}{}\n", "nodes explored", x.explored);
    s += &format!("{:<30}{}\n", "extremal classes (M fixed)", x.extremal_classes);
    s += &format!("{:<30}{}\n", "extremal shapes (M ignored)", x.extremal_shapes);
    if !x.complete {
        s += "extremal list truncated\n";
    }
    s += "extremal graphs (graph6):\n";
    for g in &x.extremal {
        s += &format!("  {g}\n");
    }
    if let Some(ne) = &o.near_extremal {
        s += &format!("graphs within {} edges of the maximum: {}\n", ne.slack, ne.graphs.len());
        for g in &ne.graphs {
            s += &format!("  {g}\n");
        }
    }
    if let Some(scan) = &o.scan {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |d| d.to_string());
        s += &format!("{:>4} {:>8} {:>8} {:>8}\n", "d", "graphs", "min", "max");
        for row in &scan.rows {
            s += &format!(
                "{:>4} {:>8} {:>8} {:>8}\n",
                row.deficiency,
                row.graph_count,
                opt(row.min_distance),
                opt(row.max_distance)
            );
        }
    }
    s
}

fn cmd_oracle(a: &OracleArgs, cfg: &OracleConfig) -> Result<String, CliError> {
    let o = oracle_output(a, cfg)?;
    let json = serde_json::to_string_pretty(&o).expect("oracle output serialises") + "\n";
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        write_file(&dir.join("oracle.json"), &json)?;
        write_file(&dir.join("extremal.g6"), &lines(&o.oracle.extremal))?;
        if let Some(ne) = &o.near_extremal {
            write_file(&dir.join("near_extremal.g6"), &lines(&ne.graphs))?;
        }
        if let Some(scan) = &o.scan {
            let text = serde_json::to_string_pretty(scan).expect("scan serialises") + "\n";
            write_file(&dir.join("scan.json"), &text)?;
        }
    }
    Ok(if a.json { json } else { oracle_table(&o) })
}
