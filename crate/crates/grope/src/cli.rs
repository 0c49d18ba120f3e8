//! Command-line front end.
//!
//! Every invocation is resolved into a [`Plan`] of independent tasks
//! before anything is computed; `--dry-run` prints the plan and stops.
//! Tasks run on a bounded worker pool and their outputs are assembled in
//! task order, so the output does not depend on the worker count.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grope_core::enumerate::{enumerate, Diagrams, EnumSpec, Space};
use grope_core::spaces::ConjectureReading;
use grope_core::{
    Engine, EnumError, Flags, GradedAbelianGroup, Grading, LinalgError, Presentation, SpaceError, SpaceId, SpaceResult,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus;
use crate::format::{write_closed, write_graph};
use crate::record::{grading_name, Cache, SpaceRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "grope", version, about = "Diagram groups, their loop quotients and low degree knot invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the generators of a diagram space.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute a diagram group by Smith normal form.
    Group {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare the loop-quotient splitting in degrees 3, 4, 5 with the
    /// known groups of knots modulo grope cobordism.
    VerifyTable {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate c2, v3 and Arf on a corpus of Gauss codes.
    Knot {
        /// File with one `name: <tokens>` line per knot.
        corpus: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    /// Open diagrams; the grading comes from --grading.
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "Bv", alias = "bv")]
    Bv,
    #[value(name = "Bg", alias = "bg")]
    Bg,
    /// Closed diagrams.
    #[value(name = "A", alias = "a")]
    A,
    /// Indecomposable closed diagrams.
    #[value(name = "AI", alias = "ai")]
    AI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GradingArg {
    Vassiliev,
    Grope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresentationArg {
    Stu,
    Ihx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[value(name = "text-table", alias = "text")]
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceArg,
    #[arg(long, value_enum)]
    pub grading: Option<GradingArg>,
    /// A degree `k` or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_degrees)]
    pub degree: DegreeRange,
    /// Kill diagrams with at least this many loops.
    #[arg(long)]
    pub mod_loops: Option<usize>,
    /// With --mod-loops, kill diagrams with exactly that many loops.
    #[arg(long)]
    pub loops_exact: bool,
    /// Keep diagrams with isolated chords.
    #[arg(long)]
    pub framed: bool,
    /// Relations presenting A: STU, or STU together with IHX.
    #[arg(long, value_enum)]
    pub presentation: Option<PresentationArg>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "GROPE_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, env = "GROPE_CACHE_DIR", default_value = "cache")]
    pub cache_dir: PathBuf,
    /// Neither read nor write the result cache.
    #[arg(long)]
    pub no_cache: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Print the resolved plan without computing.
    #[arg(long)]
    pub dry_run: bool,
    /// Largest number of diagram classes in one enumeration level.
    #[arg(long)]
    pub max_classes: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: usize,
    pub hi: usize,
}

fn parse_degrees(s: &str) -> Result<DegreeRange, String> {
    let bad = || format!("expected a degree like 3 or a range like 2..5, found {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo > hi {
        return Err(format!("empty degree range {s:?}"));
    }
    Ok(DegreeRange { lo, hi })
}

/// One independent unit of work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Task {
    pub space: SpaceId,
    pub grading: Grading,
    pub degree: usize,
    pub flags: Flags,
}

impl Task {
    pub fn label(&self) -> String {
        grope_core::spaces::label(self.space, self.degree, &self.flags)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Enumerate,
    Group,
    VerifyTable,
    Knot,
}

/// A validated invocation.
#[derive(Clone, Debug)]
pub struct Plan {
    pub command: CommandKind,
    pub tasks: Vec<Task>,
    pub workers: usize,
    pub cache: Option<Cache>,
    pub format: OutputFormat,
    pub dry_run: bool,
    pub cap: Option<usize>,
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn resolve_tasks(a: &SpaceArgs) -> Result<Vec<Task>, UsageError> {
    let closed = matches!(a.space, SpaceArg::A | SpaceArg::AI);
    let grading = match (a.space, a.grading) {
        (SpaceArg::Bv, Some(GradingArg::Grope)) | (SpaceArg::Bg, Some(GradingArg::Vassiliev)) => {
            return Err(usage("--grading contradicts --space"));
        }
        (SpaceArg::Bg, _) | (SpaceArg::B, Some(GradingArg::Grope)) => Grading::Grope,
        (_, Some(GradingArg::Grope)) => return Err(usage("closed diagrams are graded by Vassiliev degree only")),
        _ => Grading::Vassiliev,
    };
    let space = match a.space {
        SpaceArg::B | SpaceArg::Bv | SpaceArg::Bg if grading == Grading::Grope => SpaceId::Bg,
        SpaceArg::B | SpaceArg::Bv | SpaceArg::Bg => SpaceId::Bv,
        SpaceArg::A => SpaceId::A,
        SpaceArg::AI => SpaceId::AI,
    };
    if !closed && (a.mod_loops.is_some() || a.loops_exact || a.framed || a.presentation.is_some()) {
        return Err(usage("--mod-loops, --loops-exact, --framed and --presentation apply to A and AI only"));
    }
    if a.loops_exact && a.mod_loops.is_none() {
        return Err(usage("--loops-exact needs --mod-loops"));
    }
    if a.mod_loops == Some(0) {
        return Err(usage("--mod-loops must be at least 1"));
    }
    let min = match space {
        SpaceId::Bv | SpaceId::Bg | SpaceId::AI => 2,
        SpaceId::A => 1,
    };
    if a.degree.lo < min {
        return Err(usage(format!("{} vanishes below degree {min}; got --degree {}", space.name(), a.degree.lo)));
    }
    let flags = Flags {
        framed: a.framed,
        loops_exact: a.loops_exact,
        mod_loops: a.mod_loops,
        presentation: match a.presentation {
            Some(PresentationArg::Ihx) => Presentation::Ihx,
            _ => Presentation::Stu,
        },
    };
    Ok((a.degree.lo..=a.degree.hi).map(|degree| Task { space, grading, degree, flags }).collect())
}

impl Plan {
    pub fn from_cli(cli: &Cli) -> Result<Plan, UsageError> {
        let (command, tasks, common, corpus, default_format) = match &cli.command {
            Command::Enumerate { space, common } => {
                (CommandKind::Enumerate, resolve_tasks(space)?, common, None, OutputFormat::Text)
            }
            Command::Group { space, common } => {
                (CommandKind::Group, resolve_tasks(space)?, common, None, OutputFormat::Json)
            }
            Command::VerifyTable { common } => (CommandKind::VerifyTable, Vec::new(), common, None, OutputFormat::Text),
            Command::Knot { corpus, common } => {
                (CommandKind::Knot, Vec::new(), common, Some(corpus.clone()), OutputFormat::Csv)
            }
        };
        let workers = match common.workers {
            Some(0) => return Err(usage("--workers must be at least 1")),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if common.max_classes == Some(0) {
            return Err(usage("--max-classes must be at least 1"));
        }
        let cache = (!common.no_cache && command == CommandKind::Group).then(|| Cache::new(&common.cache_dir));
        Ok(Plan {
            command,
            tasks,
            workers,
            cache,
            format: common.format.unwrap_or(default_format),
            dry_run: common.dry_run,
            cap: common.max_classes,
            corpus,
        })
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let name = match self.command {
            CommandKind::Enumerate => "enumerate",
            CommandKind::Group => "group",
            CommandKind::VerifyTable => "verify-table",
            CommandKind::Knot => "knot",
        };
        let _ = writeln!(s, "command: {name}");
        let _ = writeln!(s, "workers: {}", self.workers);
        match &self.cache {
            Some(c) => {
                let _ = writeln!(s, "cache: {}", c.root().display());
            }
            None => s.push_str("cache: off\n"),
        }
        if let Some(cap) = self.cap {
            let _ = writeln!(s, "max classes per level: {cap}");
        }
        if let Some(p) = &self.corpus {
            let _ = writeln!(s, "corpus: {}", p.display());
        }
        if self.command == CommandKind::VerifyTable {
            for row in TABLE {
                let _ = writeln!(s, "task: conjecture group k={} (expect {})", row.k, row.expected());
            }
        }
        for t in &self.tasks {
            let _ = write!(
                s,
                "task: {} space={} grading={} flags={}",
                t.label(),
                t.space.name(),
                grading_name(t.grading),
                t.flags.describe()
            );
            if let Some(c) = &self.cache {
                let hit = if c.load(t.space, &t.flags, t.degree).is_some() { "hit" } else { "miss" };
                let _ = write!(s, " cache={} ({hit})", c.path(t.space, &t.flags, t.degree).display());
            }
            s.push('\n');
        }
        s
    }
}

/// Failures of a run, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("resource cap reached: {0}")]
    Resource(String),
    #[error("{0}")]
    Failed(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Resource(_) => EXIT_RESOURCE,
            RunError::Failed(_) => EXIT_MISMATCH,
        }
    }
}

impl From<SpaceError> for RunError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::Enumeration(EnumError::CapExceeded { .. } | EnumError::TooLarge { .. })
            | SpaceError::Linalg(LinalgError::CapExceeded { .. } | LinalgError::TorsionTooLarge(_)) => {
                RunError::Resource(e.to_string())
            }
            SpaceError::DegreeTooSmall { .. } | SpaceError::BadLoopBound => RunError::Usage(e.to_string()),
            e => RunError::Failed(e.to_string()),
        }
    }
}

impl From<EnumError> for RunError {
    fn from(e: EnumError) -> Self {
        SpaceError::from(e).into()
    }
}

fn pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    let p = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RunError::Failed(format!("cannot start workers: {e}")))?;
    Ok(p.install(f))
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let plan = match Plan::from_cli(&cli) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&plan, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a validated plan; a verification mismatch is reported through
/// the returned exit code.
pub fn execute(plan: &Plan, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, RunError> {
    if plan.dry_run {
        write_out(out, &plan.describe())?;
        return Ok(EXIT_OK);
    }
    let text = match plan.command {
        CommandKind::Enumerate => run_enumerate(plan)?,
        CommandKind::Group => run_group(plan, err)?,
        CommandKind::VerifyTable => {
            let (text, ok) = run_verify(plan)?;
            write_out(out, &text)?;
            return Ok(if ok { EXIT_OK } else { EXIT_MISMATCH });
        }
        CommandKind::Knot => run_knot(plan)?,
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, s: &str) -> Result<(), RunError> {
    out.write_all(s.as_bytes()).and_then(|_| out.flush()).map_err(|e| RunError::Failed(format!("write failed: {e}")))
}

#[derive(Serialize)]
struct DiagramJson {
    degree: usize,
    key: String,
    v: usize,
    b1: usize,
    g: usize,
    e: usize,
    self_negative: bool,
    diagram: String,
}

/// Generators of one task before any quotient, in canonical key order.
/// `AI` drops the separated diagrams and `--mod-loops` the high-loop ones;
/// isolated chords are listed either way.
pub fn task_generators(t: &Task, cap: Option<usize>) -> Result<Vec<DiagramRecord>, RunError> {
    let (space, grading) = match t.space {
        SpaceId::Bv | SpaceId::Bg => (Space::B, t.grading),
        SpaceId::A | SpaceId::AI => (Space::A, Grading::Vassiliev),
    };
    let mut spec = EnumSpec::new(space, grading, t.degree);
    spec.cap = cap;
    let mut out: Vec<DiagramRecord> = match enumerate(&spec)? {
        Diagrams::Open(gs) => gs
            .into_iter()
            .map(|g| DiagramRecord {
                key: g.key.to_hex(),
                degrees: (g.degrees.v, g.degrees.b1, g.degrees.g, g.degrees.e),
                self_negative: g.self_negative,
                text: write_graph(&g.diagram),
            })
            .collect(),
        Diagrams::Closed(gs) => gs
            .into_iter()
            .filter(|g| {
                let d = &g.diagram;
                let killed_loops = match t.flags.mod_loops {
                    Some(m) if t.flags.loops_exact => g.degrees.b1 == m,
                    Some(m) => g.degrees.b1 >= m,
                    None => false,
                };
                !(killed_loops || t.space == SpaceId::AI && d.is_separated())
            })
            .map(|g| DiagramRecord {
                key: g.key.to_hex(),
                degrees: (g.degrees.v, g.degrees.b1, g.degrees.g, g.degrees.e),
                self_negative: g.self_negative,
                text: write_closed(&g.diagram),
            })
            .collect(),
    };
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramRecord {
    pub key: String,
    /// `(v, b1, g, e)`.
    pub degrees: (usize, usize, usize, usize),
    pub self_negative: bool,
    pub text: String,
}

fn run_enumerate(plan: &Plan) -> Result<String, RunError> {
    let cap = plan.cap;
    let results: Vec<Result<Vec<DiagramRecord>, RunError>> =
        pool(plan.workers, || plan.tasks.par_iter().map(|t| task_generators(t, cap)).collect())?;
    let mut per_task = Vec::with_capacity(results.len());
    for r in results {
        per_task.push(r?);
    }
    let mut s = String::new();
    match plan.format {
        OutputFormat::Text => {
            for (t, recs) in plan.tasks.iter().zip(&per_task) {
                for r in recs {
                    let (v, b1, g, e) = r.degrees;
                    let _ = writeln!(s, "# {} key={} v={v} b1={b1} g={g} e={e}", t.label(), r.key);
                    s.push_str(&r.text);
                    s.push('\n');
                }
            }
        }
        OutputFormat::Csv => {
            s.push_str("degree,key,v,b1,g,e,self_negative\n");
            for (t, recs) in plan.tasks.iter().zip(&per_task) {
                for r in recs {
                    let (v, b1, g, e) = r.degrees;
                    let _ = writeln!(s, "{},{},{v},{b1},{g},{e},{}", t.degree, r.key, r.self_negative);
                }
            }
        }
        OutputFormat::Json => {
            let all: Vec<DiagramJson> = plan
                .tasks
                .iter()
                .zip(&per_task)
                .flat_map(|(t, recs)| {
                    recs.iter().map(move |r| DiagramJson {
                        degree: t.degree,
                        key: r.key.clone(),
                        v: r.degrees.0,
                        b1: r.degrees.1,
                        g: r.degrees.2,
                        e: r.degrees.3,
                        self_negative: r.self_negative,
                        diagram: r.text.clone(),
                    })
                })
                .collect();
            s = serde_json::to_string_pretty(&all).expect("records always serialize");
            s.push('\n');
        }
    }
    Ok(s)
}

/// Computes one group, timing it.
pub fn compute_task(t: &Task, cap: Option<usize>) -> Result<SpaceResult, SpaceError> {
    let mut e = Engine::new().with_cap(cap);
    let start = Instant::now();
    let mut r = match t.space {
        SpaceId::Bv | SpaceId::Bg => e.compute_b(t.grading, t.degree)?,
        SpaceId::A => e.compute_a(t.degree, t.flags)?,
        SpaceId::AI => e.compute_a_indecomposable(t.degree, t.flags)?,
    };
    r.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

fn run_group(plan: &Plan, err: &mut dyn Write) -> Result<String, RunError> {
    let cap = plan.cap;
    let cache = plan.cache.as_ref();
    let results: Vec<Result<(SpaceRecord, bool), SpaceError>> = pool(plan.workers, || {
        plan.tasks
            .par_iter()
            .map(|t| match cache.and_then(|c| c.load(t.space, &t.flags, t.degree)) {
                Some(rec) => Ok((rec, true)),
                None => compute_task(t, cap).map(|r| (SpaceRecord::from(&r), false)),
            })
            .collect()
    })?;
    let mut recs = Vec::with_capacity(results.len());
    for (t, r) in plan.tasks.iter().zip(results) {
        let (rec, hit) = r?;
        if let (Some(c), false) = (cache, hit) {
            if let Err(e) = c.store(&rec, t.space, &t.flags) {
                let _ = writeln!(err, "warning: could not cache {}: {e}", t.label());
            }
        }
        recs.push(rec);
    }
    Ok(format_records(&recs, plan.format))
}

pub fn format_records(recs: &[SpaceRecord], format: OutputFormat) -> String {
    let mut s = String::new();
    match format {
        OutputFormat::Json => {
            s = if recs.len() == 1 {
                recs[0].to_json()
            } else {
                serde_json::to_string_pretty(recs).expect("records always serialize")
            };
            s.push('\n');
        }
        OutputFormat::Csv => {
            s.push_str("label,space,degree,grading,basis_size,rank,torsion,digest\n");
            for r in recs {
                let tors: Vec<String> = r.group.torsion.iter().map(u64::to_string).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.label,
                    r.space,
                    r.degree,
                    r.grading,
                    r.basis_size,
                    r.group.rank,
                    tors.join(";"),
                    r.digest
                );
            }
        }
        OutputFormat::Text => {
            let rows: Vec<[String; 4]> = recs
                .iter()
                .map(|r| {
                    let rels: Vec<String> = r.relation_counts.iter().map(|(t, n)| format!("{t}={n}")).collect();
                    [r.label.clone(), r.basis_size.to_string(), rels.join(" "), r.group_text()]
                })
                .collect();
            s = table(&["space", "basis", "relations", "group"], &rows);
        }
    }
    s
}

fn table<const N: usize>(head: &[&str; N], rows: &[[String; N]]) -> String {
    let mut w: Vec<usize> = head.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{c}{}", " ".repeat(w[i] - c.chars().count()))).collect();
        s.push_str(padded.join("  ").trim_end());
        s.push('\n');
    };
    line(&mut s, head.to_vec());
    for r in rows {
        line(&mut s, r.iter().map(String::as_str).collect());
    }
    s
}

/// A row of the table of knots modulo grope cobordism.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub k: usize,
    pub free_rank: usize,
    pub torsion: &'static [u64],
    pub claim: &'static str,
}

impl TableRow {
    pub fn expected(&self) -> GradedAbelianGroup {
        GradedAbelianGroup::from_cyclic(self.free_rank, self.torsion)
    }
}

pub const TABLE: [TableRow; 3] = [
    TableRow { k: 3, free_rank: 0, torsion: &[2], claim: "K/G_3 ≅ Z/2 (c_2 mod 2)" },
    TableRow { k: 4, free_rank: 1, torsion: &[], claim: "K/G_4 ≅ Z (c_2)" },
    TableRow { k: 5, free_rank: 1, torsion: &[2], claim: "K/G_5 ≅ Z(c_2) ⊕ Z/2(c_3)" },
];

/// The splitting `⊕_j A^I_{k-j}[j]` summand by summand, together with
/// the same sum read with `A` in place of `A^I`.
#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub row: TableRow,
    pub summands: Vec<(String, GradedAbelianGroup)>,
    pub computed: GradedAbelianGroup,
    pub full_reading: GradedAbelianGroup,
}

impl VerifyRow {
    pub fn matches(&self) -> bool {
        self.computed == self.row.expected()
    }
}

pub fn verify_rows(workers: usize, cap: Option<usize>) -> Result<Vec<VerifyRow>, RunError> {
    let results: Vec<Result<VerifyRow, SpaceError>> = pool(workers, || {
        TABLE
            .par_iter()
            .map(|row| {
                let mut e = Engine::new().with_cap(cap);
                let parts = e.conjecture_summands(row.k, ConjectureReading::Indecomposable)?;
                let full = e.conjecture_group_with(row.k, ConjectureReading::Full)?;
                let computed = parts.iter().fold(GradedAbelianGroup::zero(), |a, p| a.direct_sum(&p.group));
                let summands = parts.iter().map(|p| (p.label(), p.group.clone())).collect();
                Ok(VerifyRow { row: *row, summands, computed, full_reading: full })
            })
            .collect()
    })?;
    results.into_iter().map(|r| r.map_err(RunError::from)).collect()
}

#[derive(Serialize)]
struct VerifyJson {
    k: usize,
    claim: &'static str,
    expected: String,
    computed: String,
    full_reading: String,
    summands: Vec<(String, String)>,
    ok: bool,
}

fn run_verify(plan: &Plan) -> Result<(String, bool), RunError> {
    let rows = verify_rows(plan.workers, plan.cap)?;
    let ok = rows.iter().all(VerifyRow::matches);
    let s = match plan.format {
        OutputFormat::Json => {
            let j: Vec<VerifyJson> = rows
                .iter()
                .map(|r| VerifyJson {
                    k: r.row.k,
                    claim: r.row.claim,
                    expected: r.row.expected().to_string(),
                    computed: r.computed.to_string(),
                    full_reading: r.full_reading.to_string(),
                    summands: r.summands.iter().map(|(l, g)| (l.clone(), g.to_string())).collect(),
                    ok: r.matches(),
                })
                .collect();
            serde_json::to_string_pretty(&j).expect("rows always serialize") + "\n"
        }
        OutputFormat::Csv => {
            let mut s = String::from("k,expected,computed,full_reading,ok,claim\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},\"{}\"",
                    r.row.k,
                    r.row.expected(),
                    r.computed,
                    r.full_reading,
                    r.matches(),
                    r.row.claim
                );
            }
            s
        }
        OutputFormat::Text => {
            let body: Vec<[String; 6]> = rows
                .iter()
                .map(|r| {
                    let parts: Vec<String> = r.summands.iter().map(|(l, g)| format!("{l}={g}")).collect();
                    [
                        r.row.k.to_string(),
                        r.row.expected().to_string(),
                        r.computed.to_string(),
                        r.full_reading.to_string(),
                        if r.matches() { "✓".into() } else { "✗".into() },
                        format!("{}; {}", r.row.claim, parts.join(" ⊕ ")),
                    ]
                })
                .collect();
            let mut s = table(&["k", "expected", "computed", "with A", "", "claim; summands"], &body);
            for r in rows.iter().filter(|r| !r.matches()) {
                let _ = writeln!(s, "mismatch at k={}: {} but the summands give {}", r.row.k, r.row.claim, r.computed);
            }
            s
        }
    };
    Ok((s, ok))
}

fn run_knot(plan: &Plan) -> Result<String, RunError> {
    let path = plan.corpus.as_ref().expect("knot plans carry a corpus");
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
    let entries = corpus::parse_corpus(&text).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
    let rows = pool(plan.workers, || corpus::invariants(&entries))?;
    Ok(match plan.format {
        OutputFormat::Csv => corpus::to_csv(&rows),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                name: &'a str,
                c2: i64,
                v3: i64,
                arf: u8,
            }
            let j: Vec<Row> = rows.iter().map(|r| Row { name: &r.name, c2: r.c2, v3: r.v3, arf: r.arf }).collect();
            serde_json::to_string_pretty(&j).expect("rows always serialize") + "\n"
        }
        OutputFormat::Text => {
            let body: Vec<[String; 4]> =
                rows.iter().map(|r| [r.name.clone(), r.c2.to_string(), r.v3.to_string(), r.arf.to_string()]).collect();
            table(&["name", "c2", "v3", "arf"], &body)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(args: &[&str]) -> Result<Plan, UsageError> {
        let cli = Cli::try_parse_from(std::iter::once("grope").chain(args.iter().copied())).unwrap();
        Plan::from_cli(&cli)
    }

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("3"), Ok(DegreeRange { lo: 3, hi: 3 }));
        assert_eq!(parse_degrees("2..5"), Ok(DegreeRange { lo: 2, hi: 5 }));
        assert_eq!(parse_degrees("2..=5"), Ok(DegreeRange { lo: 2, hi: 5 }));
        assert!(parse_degrees("5..2").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn space_resolution() {
        let p = plan(&["group", "--space", "B", "--grading", "grope", "--degree", "2..3", "--no-cache"]).unwrap();
        assert_eq!(p.tasks.len(), 2);
        assert!(p.tasks.iter().all(|t| t.space == SpaceId::Bg));
        assert!(plan(&["group", "--space", "Bv", "--grading", "grope", "--degree", "2"]).is_err());
        assert!(plan(&["group", "--space", "B", "--degree", "1"]).is_err());
        assert!(plan(&["group", "--space", "A", "--grading", "grope", "--degree", "2"]).is_err());
        assert!(plan(&["group", "--space", "Bg", "--degree", "2", "--framed"]).is_err());
        assert!(plan(&["group", "--space", "AI", "--degree", "2", "--loops-exact"]).is_err());
        assert!(plan(&["group", "--space", "AI", "--degree", "2", "--mod-loops", "0"]).is_err());
        let p = plan(&["group", "--space", "ai", "--degree", "3", "--mod-loops", "2", "--workers", "2"]).unwrap();
        assert_eq!(p.tasks[0].label(), "A^I_3[2]");
        assert_eq!(p.workers, 2);
    }
}
