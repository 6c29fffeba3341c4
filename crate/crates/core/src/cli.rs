//! Command dispatch for the `kpw` binary.
//!
//! Every command produces one [`Output`] record; text and JSON are two
//! renderings of it.

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::cycline::{self, Aperiodicity, CyclineError, CyclineStatus, Membership, DEFAULT_DEPTH};
use crate::diagonal::{self, DiagonalError};
use crate::format::{self, FormatError, ParsedGraph};
use crate::infpath::{EvPeriodicPath, InfPathError};
use crate::kgraph::{self, Degree, Grade, GraphError, KGraph};
use crate::kpalg::{KpAlgebra, KpElement, KpError};
use crate::matrix::Matrix;
use crate::representation::{self, MatrixKpFamily, Representation, Universal};
use crate::ring::RingSpec;
use crate::uniqueness::{self, CompressBounds, UniquenessError, UniquenessOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] KpError),
    #[error(transparent)]
    Cycline(#[from] CyclineError),
    #[error(transparent)]
    Diagonal(#[from] DiagonalError),
    #[error(transparent)]
    InfPath(#[from] InfPathError),
    #[error(transparent)]
    Uniqueness(#[from] UniquenessError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkbenchConfig {
    /// Replaces the ring named in the graph file.
    pub ring: Option<RingSpec>,
    pub depth: u32,
    pub bound: u32,
    pub output: OutputMode,
    pub seed: u64,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig {
            ring: None,
            depth: DEFAULT_DEPTH,
            bound: 8,
            output: OutputMode::Text,
            seed: 0,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kpw",
    version,
    about = "Exact computations in Kumjian-Pask algebras of k-graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Coefficient ring: Z, Q or Z/n.
    #[arg(long, global = true)]
    pub ring: Option<RingSpec>,
    /// Search depth for cycline verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,
    /// Search bound for compression.
    #[arg(long, global = true, default_value_t = 8)]
    pub bound: u32,
    /// Seed for sampled elements.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Cli {
    pub fn config(&self) -> WorkbenchConfig {
        WorkbenchConfig {
            ring: self.ring.clone(),
            depth: self.depth,
            bound: self.bound,
            output: if self.json {
                OutputMode::Json
            } else {
                OutputMode::Text
            },
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the k-graph axioms.
    Validate { graph: PathBuf },
    /// Print an element in canonical form.
    Eval {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Multiply elements left to right.
    Mul {
        graph: PathBuf,
        #[arg(short, long, required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Normal form with every ghost path of degree `m`.
    Nf {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
        /// `n` for `(n,…,n)` or a comma list; defaults to the least usable degree.
        #[arg(short)]
        m: Option<String>,
    },
    /// Graded components.
    Grade {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
        /// Only this component, as a comma list.
        #[arg(short, long, allow_hyphen_values = true)]
        n: Option<String>,
    },
    /// The involution `s_α s_{β*} ↦ s_β s_{α*}`.
    Star {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Membership in the diagonal subalgebra.
    InD {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Membership in the cycline subalgebra.
    InM {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Classify a pair of paths.
    Cycline {
        graph: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Classify every pair up to a degree bound.
    CyclinePairs {
        graph: PathBuf,
        /// `n` for `(n,…,n)` or a comma list.
        #[arg(long, default_value = "2")]
        max: String,
    },
    /// Aperiodicity of the graph.
    Aperiodic { graph: PathBuf },
    /// Compress a nonzero element into a nonzero element of the cycline subalgebra.
    Compress {
        graph: PathBuf,
        #[arg(short, long)]
        expr: String,
        /// Infinite path `prefix;cycle` to use instead of searching.
        #[arg(short)]
        x: Option<String>,
    },
    /// Check the Kumjian-Pask relations for a matrix family.
    RepValidate {
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
    },
    /// Image of an element under a matrix family.
    RepApply {
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(short, long)]
        expr: String,
    },
    /// Search for kernel elements and compress them.
    UniquenessCheck {
        graph: PathBuf,
        /// Matrix family; the identity representation if absent.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Extra elements to test.
        #[arg(short, long)]
        expr: Vec<String>,
        /// Number of seeded random elements.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Eval { .. } => "eval",
            Command::Mul { .. } => "mul",
            Command::Nf { .. } => "nf",
            Command::Grade { .. } => "grade",
            Command::Star { .. } => "star",
            Command::InD { .. } => "in-d",
            Command::InM { .. } => "in-m",
            Command::Cycline { .. } => "cycline",
            Command::CyclinePairs { .. } => "cycline-pairs",
            Command::Aperiodic { .. } => "aperiodic",
            Command::Compress { .. } => "compress",
            Command::RepValidate { .. } => "rep-validate",
            Command::RepApply { .. } => "rep-apply",
            Command::UniquenessCheck { .. } => "uniqueness-check",
        }
    }

    pub fn graph(&self) -> &FsPath {
        match self {
            Command::Validate { graph }
            | Command::Eval { graph, .. }
            | Command::Mul { graph, .. }
            | Command::Nf { graph, .. }
            | Command::Grade { graph, .. }
            | Command::Star { graph, .. }
            | Command::InD { graph, .. }
            | Command::InM { graph, .. }
            | Command::Cycline { graph, .. }
            | Command::CyclinePairs { graph, .. }
            | Command::Aperiodic { graph }
            | Command::Compress { graph, .. }
            | Command::RepValidate { graph, .. }
            | Command::RepApply { graph, .. }
            | Command::UniquenessCheck { graph, .. } => graph,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detail {
    Line(String),
    List(Vec<String>),
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub command: String,
    /// 0 success, 1 negative answer, 2 error or undecided.
    pub code: i32,
    pub result: String,
    pub details: Vec<(String, Detail)>,
}

impl Output {
    fn new(command: &str, code: i32, result: impl Into<String>) -> Self {
        Output {
            command: command.to_string(),
            code,
            result: result.into(),
            details: Vec::new(),
        }
    }

    fn line(mut self, key: &str, value: impl Into<String>) -> Self {
        self.details
            .push((key.to_string(), Detail::Line(value.into())));
        self
    }

    fn list(mut self, key: &str, items: Vec<String>) -> Self {
        self.details.push((key.to_string(), Detail::List(items)));
        self
    }

    fn list_nonempty(self, key: &str, items: Vec<String>) -> Self {
        if items.is_empty() {
            self
        } else {
            self.list(key, items)
        }
    }

    /// The result line, then `key: value` lines; lists are indented
    /// one item per line.
    pub fn text(&self) -> String {
        let mut out = self.result.clone();
        for (key, d) in &self.details {
            match d {
                Detail::Line(v) => out.push_str(&format!("\n{key}: {v}")),
                Detail::List(items) => {
                    out.push_str(&format!("\n{key}:"));
                    for item in items {
                        out.push_str(&format!("\n  {item}"));
                    }
                }
            }
        }
        out
    }

    pub fn json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command.clone()));
        obj.insert("exit".into(), Value::from(self.code));
        obj.insert("result".into(), Value::from(self.result.clone()));
        for (key, d) in &self.details {
            let v = match d {
                Detail::Line(v) => Value::from(v.clone()),
                Detail::List(items) => Value::from(items.clone()),
            };
            obj.insert(key.clone(), v);
        }
        Value::Object(obj)
    }

    pub fn render(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Text => self.text(),
            OutputMode::Json => self.json().to_string(),
        }
    }
}

/// Runs one command. Errors become an exit-2 record.
pub fn run(command: &Command, config: &WorkbenchConfig) -> Output {
    let name = command.name();
    match dispatch(command, config) {
        Ok(out) => out,
        Err(e) => Output::new(name, 2, format!("error: {e}")),
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_graph(path: &FsPath, config: &WorkbenchConfig) -> Result<ParsedGraph, CliError> {
    let mut parsed = format::parse_graph_file(&read(path)?)?;
    if let Some(r) = &config.ring {
        parsed.ring = r.clone();
    }
    Ok(parsed)
}

fn load_family(
    path: &FsPath,
    g: &KGraph,
    config: &WorkbenchConfig,
) -> Result<MatrixKpFamily, CliError> {
    let fam = format::parse_family(&read(path)?, g)?;
    if let Some(r) = &config.ring {
        if r != fam.ring() {
            return Err(CliError::Usage(format!(
                "family is over {}, --ring asks for {r}",
                fam.ring()
            )));
        }
    }
    Ok(fam)
}

/// `n` means `(n,…,n)`; otherwise one comma-separated entry per color.
pub fn parse_degree(text: &str, k: usize) -> Result<Degree, CliError> {
    let parts: Result<Vec<u32>, _> = text.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|_| CliError::Usage(format!("bad degree `{text}`")))?;
    match parts.len() {
        1 => Ok(Degree::diagonal(k, parts[0])),
        n if n == k => Ok(Degree(parts)),
        _ => Err(CliError::Usage(format!(
            "degree `{text}` needs 1 or {k} entries"
        ))),
    }
}

pub fn parse_grade(text: &str, k: usize) -> Result<Grade, CliError> {
    let parts: Result<Vec<i64>, _> = text
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect();
    let parts = parts.map_err(|_| CliError::Usage(format!("bad grade `{text}`")))?;
    if parts.len() != k {
        return Err(CliError::Usage(format!("grade `{text}` needs {k} entries")));
    }
    Ok(Grade(parts))
}

fn element(alg: &KpAlgebra, text: &str, warnings: &mut Vec<String>) -> Result<KpElement, CliError> {
    let (a, w) = format::parse_element(text, alg)?;
    warnings.extend(w);
    Ok(a)
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn matrix_rows(m: &Matrix) -> Vec<String> {
    m.rows()
        .map(|row| {
            row.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn dispatch(command: &Command, config: &WorkbenchConfig) -> Result<Output, CliError> {
    let name = command.name();
    if let Command::Validate { graph } = command {
        return validate(name, graph);
    }
    let parsed = load_graph(command.graph(), config)?;
    let g = &parsed.graph;
    let alg = KpAlgebra::new(g, parsed.ring.clone());
    let mut warnings = Vec::new();
    let out = match command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Eval { expr, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            Output::new(name, 0, alg.show(&a))
        }
        Command::Mul { expr, .. } => {
            let mut acc = alg.one();
            for e in expr {
                acc = alg.mul(&acc, &element(&alg, e, &mut warnings)?)?;
            }
            Output::new(name, 0, alg.show(&acc))
        }
        Command::Nf { expr, m, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            let m = match m {
                Some(m) => parse_degree(m, g.rank())?,
                None => alg.beta_join(&a),
            };
            Output::new(name, 0, alg.show(&alg.normal_form(&a, &m)?))
        }
        Command::Grade { expr, n, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            match n {
                Some(n) => Output::new(
                    name,
                    0,
                    alg.show(&alg.graded_component(&a, &parse_grade(n, g.rank())?)?),
                ),
                None => {
                    let grades: Vec<Grade> =
                        alg.graded_normal_form(&a)?.grades().into_iter().collect();
                    let mut items = Vec::new();
                    for n in &grades {
                        items.push(format!("{n}: {}", alg.show(&alg.graded_component(&a, n)?)));
                    }
                    let listed: Vec<String> = grades.iter().map(ToString::to_string).collect();
                    Output::new(name, 0, format!("grades [{}]", listed.join(", ")))
                        .list_nonempty("components", items)
                }
            }
        }
        Command::Star { expr, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            Output::new(name, 0, alg.show(&alg.star(&a)?))
        }
        Command::InD { expr, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            if diagonal::is_in_diagonal(&alg, &a)? {
                let f = diagonal::pi(&alg, &a)?;
                let shown = f.display(g).to_string();
                Output::new(name, 0, "yes").line("pi", shown)
            } else {
                Output::new(name, 1, "no")
            }
        }
        Command::InM { expr, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            let v = cycline::is_in_m(&alg, &a, config.depth)?;
            let code = match v.status {
                Membership::Yes => 0,
                Membership::No => 1,
                Membership::Unknown => 2,
            };
            let terms = v
                .terms
                .iter()
                .map(|(t, cv)| format!("{}: {}", alg.show_term(t), verdict_line(g, cv)))
                .collect();
            Output::new(name, code, v.status.to_string())
                .line("normal form", alg.show(&v.normal_form))
                .list_nonempty("terms", terms)
        }
        Command::Cycline { alpha, beta, .. } => {
            let a = g.parse_path(alpha)?;
            let b = g.parse_path(beta)?;
            let v = cycline::is_cycline(g, &a, &b, config.depth)?;
            let code = match v.status {
                CyclineStatus::Cycline => 0,
                CyclineStatus::NotCycline => 1,
                CyclineStatus::Unknown => 2,
            };
            Output::new(name, code, verdict_line(g, &v))
        }
        Command::CyclinePairs { max, .. } => {
            let bound = parse_degree(max, g.rank())?;
            let pairs = cycline::cycline_pairs_up_to(g, &bound, config.depth)?;
            let nontrivial = pairs
                .iter()
                .filter(|(a, b, v)| a != b && v.is_cycline())
                .count();
            let unknown = pairs
                .iter()
                .filter(|(_, _, v)| v.status == CyclineStatus::Unknown)
                .count();
            let items = pairs
                .iter()
                .map(|(a, b, v)| {
                    format!("({}, {}): {}", g.format_path(a), g.format_path(b), v.status)
                })
                .collect();
            Output::new(
                name,
                0,
                format!(
                    "{}, {} cycline off the diagonal, {} unknown",
                    plural(pairs.len(), "pair", "pairs"),
                    nontrivial,
                    unknown
                ),
            )
            .list("pairs", items)
        }
        Command::Aperiodic { .. } => {
            let v = cycline::is_aperiodic(g, config.depth)?;
            let code = match v.status {
                Aperiodicity::Aperiodic => 0,
                Aperiodicity::NotAperiodic => 1,
                Aperiodicity::Unknown => 2,
            };
            Output::new(name, code, v.status.to_string()).line("detail", v.detail)
        }
        Command::Compress { expr, x, .. } => {
            let a = element(&alg, expr, &mut warnings)?;
            let x = x
                .as_deref()
                .map(|x| EvPeriodicPath::parse(g, x))
                .transpose()?;
            let bounds = CompressBounds {
                depth: config.depth,
                bound: config.bound,
            };
            let c = uniqueness::compress_to_cycline(&alg, &a, x.as_ref(), bounds)?;
            let code = if c.membership.status == Membership::Yes {
                0
            } else {
                2
            };
            let (x, m0, u) = (
                c.x.display(g).to_string(),
                c.m0.display(g).to_string(),
                c.u.display(g).to_string(),
            );
            Output::new(name, code, alg.show(&c.m))
                .line("delta", g.format_path(&c.vertex_pair.delta))
                .line("epsilon", g.format_path(&c.vertex_pair.epsilon))
                .line("b", alg.show(&c.vertex_pair.b))
                .line("x", x)
                .list_nonempty(
                    "certificates",
                    c.certificates.iter().map(|p| p.describe(g)).collect(),
                )
                .line("left", alg.show(&c.left))
                .line("right", alg.show(&c.right))
                .line("in M", c.membership.status.to_string())
                .line("pi(m_0)", m0)
                .line("r", c.vertex_pair.r.to_string())
                .line("1_U", u)
        }
        Command::RepValidate { family, .. } => {
            let fam = load_family(family, g, config)?;
            let report = representation::validate_kp_family(&fam, g);
            if report.is_valid() {
                Output::new(name, 0, "valid")
            } else {
                Output::new(name, 1, "invalid").list("violations", report.violations)
            }
        }
        Command::RepApply { family, expr, .. } => {
            let fam = load_family(family, g, config)?;
            let alg = KpAlgebra::new(g, fam.ring().clone());
            let a = element(&alg, expr, &mut warnings)?;
            let m = fam.apply(&alg, &a)?;
            let result = if m.is_zero() { "zero" } else { "nonzero" };
            Output::new(name, 0, result).list("matrix", matrix_rows(&m))
        }
        Command::UniquenessCheck {
            family,
            expr,
            samples,
            ..
        } => {
            let fam = family
                .as_deref()
                .map(|f| load_family(f, g, config))
                .transpose()?;
            let ring = fam
                .as_ref()
                .map_or_else(|| parsed.ring.clone(), |f| f.ring().clone());
            let alg = KpAlgebra::new(g, ring);
            let mut extra = Vec::new();
            for e in expr {
                extra.push(element(&alg, e, &mut warnings)?);
            }
            let rep: &dyn Representation = match &fam {
                Some(f) => f,
                None => &Universal,
            };
            let opts = UniquenessOptions {
                bounds: CompressBounds {
                    depth: config.depth,
                    bound: config.bound,
                },
                random_samples: *samples,
                seed: config.seed,
                ..UniquenessOptions::default()
            };
            let report = uniqueness::uniqueness_check(rep, &alg, &extra, opts)?;
            let kernel = report
                .kernel
                .iter()
                .map(|k| match &k.compression {
                    Ok(c) => format!(
                        "{} -> m = {} ({})",
                        alg.show(&k.element),
                        alg.show(&c.m),
                        if k.confirmed {
                            "nonzero kernel element of M"
                        } else {
                            "unconfirmed"
                        }
                    ),
                    Err(e) => format!("{} -> compression failed: {e}", alg.show(&k.element)),
                })
                .collect();
            let confirmed = report.kernel.iter().filter(|k| k.confirmed).count();
            Output::new(
                name,
                if report.consistent { 0 } else { 1 },
                if report.consistent {
                    "consistent"
                } else {
                    "inconsistent"
                },
            )
            .line("representation", report.representation.clone())
            .line("seed", config.seed.to_string())
            .line("checked", report.checked.to_string())
            .line("kernel found", report.kernel.len().to_string())
            .line("confirmed in M", confirmed.to_string())
            .line(
                "graph",
                format!(
                    "{} ({})",
                    report.aperiodicity.status, report.aperiodicity.detail
                ),
            )
            .line(
                "r p_v never annihilated",
                report.vertex_images_nonzero.to_string(),
            )
            .list_nonempty("kernel", kernel)
        }
    };
    Ok(out.list_nonempty("warnings", warnings))
}

fn verdict_line(g: &KGraph, v: &cycline::CyclineVerdict) -> String {
    match v.status {
        CyclineStatus::Cycline => format!("cycline, {}", v.certificate),
        CyclineStatus::NotCycline => {
            let w = v
                .witness
                .as_ref()
                .map_or_else(String::new, |w| g.format_path(w));
            format!("not-cycline, witness γ={w}")
        }
        CyclineStatus::Unknown => format!("unknown, depth {}", v.depth),
    }
}

fn validate(name: &str, path: &FsPath) -> Result<Output, CliError> {
    let (p, _) = format::parse_presentation(&read(path)?)?;
    let report = kgraph::validate_presentation(&p);
    if !report.is_valid() {
        let items = report.violations.iter().map(ToString::to_string).collect();
        return Ok(Output::new(name, 1, "invalid").list("violations", items));
    }
    let g = KGraph::new(p)?;
    Ok(Output::new(
        name,
        0,
        format!(
            "valid (k={}, {}, {}, {})",
            g.rank(),
            plural(g.num_vertices(), "vertex", "vertices"),
            plural(g.num_edges(), "edge", "edges"),
            plural(g.num_squares(), "square", "squares")
        ),
    ))
}
