//! The `fskit` command line.
//!
//! Every command produces one [`Report`]: a list of checked items plus an
//! optional structured payload. Exit status is 0 when every item passes,
//! 1 when a check fails and 2 for unusable input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{check_fs_algebra, congruence_filter_bijection_check, UpsetAlgebra, DEFAULT_CONGRUENCE_BOUND};
use crate::amalgam::{
    chase_refute, check_coamalgam, check_pullback_properties, check_superamalgam, pullback, AmalgamError,
    AmalgamReport, ChaseConfig, ChaseOutcome, LogicClass, Mode,
};
use crate::counterexample::{render_table, run_paper_demo};
use crate::formula::parse;
use crate::frame::Frame;
use crate::io::{self, IoError};
use crate::semantics::{axiom_suite, is_valid, Logic, SemanticsError, Validity, DEFAULT_BUDGET};

#[derive(Debug, Parser)]
#[command(
    name = "fskit",
    version,
    about = "Finite-model toolkit for Fischer-Servi intuitionistic modal logics"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "table")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "FS", alias = "fs")]
    Fs,
    #[value(name = "IK", alias = "ik")]
    Ik,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fs => Mode::FS,
            ModeArg::Ik => Mode::IK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogicArg {
    #[value(name = "IK", alias = "ik")]
    Ik,
    #[value(name = "IKT", alias = "ikt")]
    Ikt,
    #[value(name = "IK4", alias = "ik4")]
    Ik4,
    #[value(name = "IS4", alias = "is4")]
    Is4,
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Ik => Logic::IK,
            LogicArg::Ikt => Logic::IKT,
            LogicArg::Ik4 => Logic::IK4,
            LogicArg::Is4 => Logic::IS4,
        }
    }
}

#[derive(Debug, Args)]
pub struct FrameInput {
    /// Frame document.
    #[arg(value_name = "FRAME")]
    pub path: Option<PathBuf>,
    /// Frame document (alternative to the positional argument).
    #[arg(long = "frame", value_name = "FILE", conflicts_with = "path")]
    pub flag: Option<PathBuf>,
}

impl FrameInput {
    fn path(&self) -> Result<&Path, CliError> {
        self.path
            .as_deref()
            .or(self.flag.as_deref())
            .ok_or_else(|| CliError::Usage("a frame is required (positional or --frame)".into()))
    }
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Assignment budget for validity sweeps.
    #[arg(long, env = "FSKIT_BUDGET", default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the frame conditions (F1, F2, MIXED, iK compatibility) and classify.
    CheckFrame {
        #[command(flatten)]
        frame: FrameInput,
        /// Which conditions decide the exit status.
        #[arg(long, value_enum, default_value = "FS")]
        mode: ModeArg,
        /// Write a DOT rendering of the frame to this path.
        #[arg(long, value_name = "FILE")]
        emit_dot: Option<PathBuf>,
    },
    /// Check a map between frames against the FS or iK morphism conditions.
    CheckMorphism {
        /// Self-contained map document.
        #[arg(value_name = "MORPHISM", conflicts_with_all = ["from", "to", "map"])]
        morphism: Option<PathBuf>,
        /// Source frame document.
        #[arg(long, requires_all = ["to", "map"])]
        from: Option<PathBuf>,
        /// Target frame document.
        #[arg(long, requires_all = ["from", "map"])]
        to: Option<PathBuf>,
        /// Bare map object `{"x": "y", ...}`.
        #[arg(long, requires_all = ["from", "to"])]
        map: Option<PathBuf>,
        /// Morphism conditions to check.
        #[arg(long, value_enum, default_value = "FS")]
        mode: ModeArg,
    },
    /// Build the dual algebra of upsets.
    DualAlgebra {
        #[command(flatten)]
        frame: FrameInput,
    },
    /// Check an algebra against the FS-algebra axioms and its filter/congruence correspondence.
    CheckAlgebra {
        /// Algebra document with operation tables.
        #[arg(value_name = "ALGEBRA")]
        algebra: PathBuf,
    },
    /// Decide frame validity of a formula.
    Validity {
        #[command(flatten)]
        frame: FrameInput,
        /// Formula to check, e.g. `box p -> p`.
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Check the axiom schemes of a logic on a frame.
    Axioms {
        #[command(flatten)]
        frame: FrameInput,
        /// Logic whose axiom schemes are checked.
        #[arg(long, value_enum)]
        logic: LogicArg,
        #[command(flatten)]
        budget: Budget,
    },
    /// Build the pullback of a formation and check it as a co-amalgam.
    Pullback {
        /// Formation document.
        #[arg(long)]
        formation: PathBuf,
        /// Overrides the formation's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// In IK mode, also require the class of IKT, IK4 or IS4 frames.
        #[arg(long, value_enum)]
        logic: Option<LogicArg>,
    },
    /// Try to refute the existence of any co-amalgam.
    Chase {
        /// Formation document.
        #[arg(long)]
        formation: PathBuf,
        /// Overrides the formation's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Stop after this many created elements.
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        max_elements: u64,
        /// Stop after this many case splits.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        max_splits: u64,
        /// Exit 0 only if a refutation certificate is produced.
        #[arg(long)]
        expect_refutation: bool,
    },
    /// Check a candidate co-amalgam `W` with maps `p1: W → left`, `p2: W → right`.
    CheckCoamalgam {
        /// Formation document.
        #[arg(long)]
        formation: PathBuf,
        /// The candidate frame W.
        #[arg(long)]
        frame: PathBuf,
        /// Bare map object W → left.
        #[arg(long)]
        p1: PathBuf,
        /// Bare map object W → right.
        #[arg(long)]
        p2: PathBuf,
        /// Overrides the formation's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Check the superamalgam clauses of an algebra diagram.
    Superamalgam {
        /// Diagram document: algebras `a`, `b1`, `b2`, `c` with maps `h1`, `h2`, `p1`, `p2`.
        #[arg(value_name = "DIAGRAM")]
        diagram: PathBuf,
    },
    /// Replay every claim about the embedded counterexample formation.
    PaperDemo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub item: String,
    pub status: Status,
    pub details: String,
}

/// Uniform output of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub lines: Vec<Line>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            status: Status::Pass,
            lines: Vec::new(),
            data: Value::Null,
        }
    }

    fn line(&mut self, item: impl Into<String>, status: Status, details: impl Into<String>) {
        self.lines.push(Line {
            item: item.into(),
            status,
            details: details.into(),
        });
    }

    fn check(&mut self, item: impl Into<String>, ok: bool, details: impl Into<String>) {
        self.line(item, Status::of(ok), details);
    }

    fn finish(mut self) -> Self {
        self.status = Status::of(self.lines.iter().all(|l| l.status != Status::Fail));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let rows = self
            .lines
            .iter()
            .map(|l| vec![l.item.clone(), l.status.label().to_string(), l.details.clone()])
            .collect();
        let mut out = render_table(&["item", "status", "details"], rows);
        let _ = writeln!(out, "{}: {}", self.command, self.status.label());
        out
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] IoError),
    #[error("{0}")]
    Formula(String),
    #[error("{0}")]
    Write(String),
}

/// Parses `args`, runs the command and writes the report. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                2
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Table => report.to_table(),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::CheckFrame { frame, mode, emit_dot } => {
            check_frame(frame.path()?, (*mode).into(), emit_dot.as_deref())
        }
        Command::CheckMorphism {
            morphism,
            from,
            to,
            map,
            mode,
        } => {
            let m = match (morphism, from, to, map) {
                (Some(p), ..) => io::load_morphism(p)?,
                (None, Some(f), Some(t), Some(m)) => io::load_map_between(f, t, m)?,
                _ => return Err(CliError::Usage("give a map document, or --from, --to and --map".into())),
            };
            Ok(check_morphism(&m, (*mode).into()))
        }
        Command::DualAlgebra { frame } => dual_algebra(&io::load_frame(frame.path()?)?),
        Command::CheckAlgebra { algebra } => Ok(check_algebra(&io::load_algebra(algebra)?)),
        Command::Validity { frame, formula, budget } => {
            validity(&io::load_frame(frame.path()?)?, formula, budget.budget)
        }
        Command::Axioms { frame, logic, budget } => {
            axioms(&io::load_frame(frame.path()?)?, (*logic).into(), budget.budget)
        }
        Command::Pullback { formation, mode, logic } => {
            let (c, doc_mode) = io::load_formation(formation)?;
            Ok(pullback_cmd(
                &c,
                mode.map(Mode::from).unwrap_or(doc_mode),
                logic.map(Logic::from),
            ))
        }
        Command::Chase {
            formation,
            mode,
            max_elements,
            max_splits,
            expect_refutation,
        } => {
            let (c, doc_mode) = io::load_formation(formation)?;
            let config = ChaseConfig {
                max_elements: *max_elements as usize,
                max_splits: *max_splits as usize,
            };
            Ok(chase(
                &c,
                mode.map(Mode::from).unwrap_or(doc_mode),
                config,
                *expect_refutation,
            ))
        }
        Command::CheckCoamalgam {
            formation,
            frame,
            p1,
            p2,
            mode,
        } => {
            let (c, doc_mode) = io::load_formation(formation)?;
            let w = std::sync::Arc::new(io::load_frame(frame)?);
            let load = |path: &Path, target| -> Result<_, CliError> {
                let origin = io::Origin::file(path);
                let doc: io::MapDoc = io::parse_json(&io::read_text(path)?, &origin)?;
                Ok(io::map_from_doc(w.clone(), target, &doc, &origin)?)
            };
            let p1 = load(p1, c.left().clone())?;
            let p2 = load(p2, c.right().clone())?;
            let mode = mode.map(Mode::from).unwrap_or(doc_mode);
            let mut report = Report::new("check-coamalgam");
            match check_coamalgam(&c, &w, &p1, &p2, mode) {
                Ok(rep) => amalgam_lines(&mut report, &rep),
                Err(e) => report.check("maps", false, e.to_string()),
            }
            Ok(report.finish())
        }
        Command::Superamalgam { diagram } => Ok(superamalgam(&io::load_diagram(diagram)?)),
        Command::PaperDemo => Ok(paper_demo()),
    }
}

fn witness_text(w: &Option<Vec<String>>) -> String {
    match w {
        None => "holds".into(),
        Some(w) => format!("fails at ({})", w.join(", ")),
    }
}

pub fn check_frame(path: &Path, mode: Mode, emit_dot: Option<&Path>) -> Result<Report, CliError> {
    let frame = io::load_frame(path)?;
    let mut report = Report::new("check-frame");
    let deciding: Vec<_> = mode.frame_checks(&frame);
    let mut others = match mode {
        Mode::FS => vec![frame.check_ik_compatibility()],
        Mode::IK => frame.check_fs_conditions(),
    };
    others.extend(frame.classify().reports());
    for c in &deciding {
        report.check(c.condition.to_string(), c.holds, witness_text(&c.witness));
    }
    for c in &others {
        report.line(c.condition.to_string(), Status::Info, witness_text(&c.witness));
    }
    if let Some(dot) = emit_dot {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("frame");
        std::fs::write(dot, frame.to_dot(name)).map_err(|e| CliError::Write(format!("{}: {e}", dot.display())))?;
    }
    report.data = json!({ "nodes": frame.len(), "mode": mode });
    Ok(report.finish())
}

pub fn check_morphism(m: &crate::morphism::FrameMap, mode: Mode) -> Report {
    let mut report = Report::new("check-morphism");
    for c in mode.morphism_checks(m).conditions {
        report.check(c.condition.to_string(), c.holds, witness_text(&c.witness));
    }
    let uncovered = m.uncovered();
    let details = if uncovered.is_empty() {
        "every target node is hit".to_string()
    } else {
        format!("misses {}", uncovered.join(", "))
    };
    report.line("SURJECTIVE", Status::Info, details);
    report.finish()
}

fn upset_text(alg: &UpsetAlgebra, i: usize) -> String {
    format!("{{{}}}", alg.element_names(i).join(", "))
}

pub fn dual_algebra(frame: &Frame) -> Result<Report, CliError> {
    let mut report = Report::new("dual-algebra");
    match UpsetAlgebra::dual_of(frame) {
        Ok(alg) => {
            report.line("elements", Status::Info, alg.len().to_string());
            match check_fs_algebra(&alg) {
                Ok(rep) => {
                    for a in &rep.axioms {
                        report.check(a.condition.to_string(), a.holds, witness_text(&a.witness));
                    }
                }
                Err(e) => report.check("FS-algebra", false, e.to_string()),
            }
            let elements: Vec<Vec<String>> = (0..alg.len()).map(|i| alg.element_names(i)).collect();
            report.data = json!({ "elements": elements, "algebra": alg.algebra() });
        }
        Err(e) => report.check("dual", false, e.to_string()),
    }
    Ok(report.finish())
}

pub fn check_algebra(a: &crate::algebra::FiniteAlgebra) -> Report {
    let mut report = Report::new("check-algebra");
    match check_fs_algebra(a) {
        Ok(rep) => {
            for ax in &rep.axioms {
                report.check(ax.condition.to_string(), ax.holds, witness_text(&ax.witness));
            }
            if rep.holds {
                match congruence_filter_bijection_check(a, DEFAULT_CONGRUENCE_BOUND) {
                    Ok(b) => {
                        let details = format!("{} modal filters, {} congruences", b.modal_filters, b.congruences);
                        report.check("FILTER_CONGRUENCE_BIJECTION", b.holds, details);
                    }
                    Err(e) => report.line("FILTER_CONGRUENCE_BIJECTION", Status::Info, e.to_string()),
                }
            }
        }
        Err(e) => report.check("tables", false, e.to_string()),
    }
    report.finish()
}

fn formula_error(text: &str, e: &crate::formula::ParseError) -> CliError {
    let caret = " ".repeat(text[..e.position.min(text.len())].chars().count());
    CliError::Formula(format!("{e}\n  {text}\n  {caret}^"))
}

fn semantics_line(
    report: &mut Report,
    item: &str,
    result: Result<Validity, SemanticsError>,
    alg: Option<&UpsetAlgebra>,
) {
    match result {
        Ok(Validity::Valid { assignments }) => {
            let plural = if assignments == 1 { "" } else { "s" };
            report.check(item, true, format!("valid ({assignments} assignment{plural})"))
        }
        Ok(Validity::Invalid { counter_assignment, .. }) => {
            let parts: Vec<String> = counter_assignment
                .iter()
                .map(|(v, &e)| match alg {
                    Some(alg) => format!("{v} = {}", upset_text(alg, e)),
                    None => format!("{v} = {e}"),
                })
                .collect();
            let details = if parts.is_empty() {
                "invalid".to_string()
            } else {
                format!("invalid at {}", parts.join(", "))
            };
            report.check(item, false, details);
        }
        Err(e) => report.check(item, false, e.to_string()),
    }
}

pub fn validity(frame: &Frame, text: &str, budget: u64) -> Result<Report, CliError> {
    let phi = parse(text).map_err(|e| formula_error(text, &e))?;
    let mut report = Report::new("validity");
    let alg = UpsetAlgebra::dual_of(frame).ok();
    let result = is_valid(&phi, frame, budget);
    if let Ok(Validity::Invalid {
        counter_assignment,
        value,
    }) = &result
    {
        report.data = json!({ "counter_assignment": counter_assignment, "value": value });
    }
    semantics_line(&mut report, &phi.render(), result, alg.as_ref());
    Ok(report.finish())
}

pub fn axioms(frame: &Frame, logic: Logic, budget: u64) -> Result<Report, CliError> {
    let mut report = Report::new("axioms");
    let alg = UpsetAlgebra::dual_of(frame).ok();
    match axiom_suite(frame, logic, budget) {
        Ok(rep) => {
            for r in rep.results {
                semantics_line(
                    &mut report,
                    &format!("{} {}", r.name, r.formula),
                    Ok(r.validity),
                    alg.as_ref(),
                );
            }
        }
        Err(e) => report.check(logic.to_string(), false, e.to_string()),
    }
    Ok(report.finish())
}

fn amalgam_lines(report: &mut Report, rep: &AmalgamReport) {
    for f in &rep.findings {
        report.check(
            format!("{} {}", f.subject, f.condition),
            f.holds,
            witness_text(&f.witness),
        );
    }
}

fn logic_class(logic: Logic) -> Option<LogicClass> {
    match logic {
        Logic::IK => None,
        Logic::IKT => Some(LogicClass::IT),
        Logic::IK4 => Some(LogicClass::IK4),
        Logic::IS4 => Some(LogicClass::IS4),
    }
}

pub fn pullback_cmd(c: &crate::amalgam::CoVFormation, mode: Mode, logic: Option<Logic>) -> Report {
    let mut report = Report::new("pullback");
    let pb = pullback(c);
    report.line("nodes", Status::Info, pb.frame.len().to_string());
    match (mode, logic.and_then(logic_class)) {
        (Mode::IK, Some(class)) => match check_pullback_properties(c, class) {
            Ok(rep) => amalgam_lines(&mut report, &rep),
            Err(AmalgamError::FormationInvalid(rep)) => {
                report.check("formation", false, rep.summary());
            }
            Err(e) => report.check("formation", false, e.to_string()),
        },
        _ => match check_coamalgam(c, &pb.frame, &pb.p1, &pb.p2, mode) {
            Ok(rep) => amalgam_lines(&mut report, &rep),
            Err(e) => report.check("maps", false, e.to_string()),
        },
    }
    report.data = json!({
        "frame": io::FrameDoc::of(&pb.frame),
        "p1": io::map_to_doc(&pb.p1),
        "p2": io::map_to_doc(&pb.p2),
    });
    report.finish()
}

pub fn chase(c: &crate::amalgam::CoVFormation, mode: Mode, config: ChaseConfig, expect_refutation: bool) -> Report {
    let mut report = Report::new("chase");
    match chase_refute(c, mode, config) {
        Ok(ChaseOutcome::Refuted(cert)) => {
            let replay = cert.replay(c);
            report.check(
                "certificate",
                replay.is_ok(),
                format!("{} elements, {} splits", cert.elements, cert.splits),
            );
            report.line("contradiction", Status::Info, cert.contradiction().to_string());
            if let Err(e) = replay {
                report.check("replay", false, e.to_string());
            }
            report.data = serde_json::to_value(&cert).expect("serializable");
        }
        Ok(ChaseOutcome::Inconclusive(inc)) => {
            let status = if expect_refutation { Status::Fail } else { Status::Info };
            let details = format!(
                "{:?} after {} elements, {} splits",
                inc.reason, inc.elements, inc.splits
            );
            report.line("inconclusive", status, details);
            report.data = serde_json::to_value(&inc).expect("serializable");
        }
        Err(AmalgamError::FormationInvalid(rep)) => {
            for f in rep.findings.iter().filter(|f| !f.holds) {
                report.check(
                    format!("{} {}", f.subject, f.condition),
                    false,
                    witness_text(&f.witness),
                );
            }
        }
        Err(e) => report.check("formation", false, e.to_string()),
    }
    report.finish()
}

pub fn superamalgam(d: &io::Diagram) -> Report {
    let mut report = Report::new("superamalgam");
    match check_superamalgam(&d.h1, &d.h2, &d.p1, &d.p2) {
        Ok(rep) => {
            for c in &rep.clauses {
                let details = match c.witness {
                    None => "holds".to_string(),
                    Some((b1, b2)) => format!("no interpolant for b1 = {b1}, b2 = {b2}"),
                };
                report.check(c.clause, c.holds, details);
            }
        }
        Err(e) => report.check("precondition", false, e.to_string()),
    }
    report.finish()
}

pub fn paper_demo() -> Report {
    let demo = run_paper_demo();
    let mut report = Report::new("paper-demo");
    for s in &demo.steps {
        report.check(&s.step, s.status == crate::counterexample::Status::Pass, &s.details);
    }
    report.data = serde_json::to_value(&demo).expect("serializable");
    report.finish()
}
