//! Command-line interface: argument parsing, document loading (bundled
//! names or file paths), dispatch, and deterministic JSON/SVG output.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 precondition
//! violation, 4 internal invariant failure.

use crate::bounds::flat_lower_bound;
use crate::bundled;
use crate::cells::PropertyCells;
use crate::error::{Error, Result};
use crate::flats::{certify_flat, SearchStatus};
use crate::indirect::{check_indirect_elicitation, IndirectVerdict};
use crate::io::{self, InequalityDoc, LossDoc};
use crate::linalg::RationalVector;
use crate::loss::{bayes_risk_constant_on, elicited_property, ConstancyOutcome, DiscreteLoss};
use crate::rational::format_rational;
use crate::recover::{recover_loss, RecoverOutcome};
use crate::render::render_simplex;
use crate::surrogate::{Link, PolyhedralSurrogate};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "surrodim",
    version,
    about = "Exact lower bounds on the prediction dimension of convex surrogates",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Either a loss document (`--target`) or a cells document (`--cells`),
/// by bundled name or file path.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Loss document: bundled name or JSON path.
    #[arg(long)]
    target: Option<String>,
    /// Cells document: bundled name or JSON path.
    #[arg(long)]
    cells: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a property: cell H-representations, vertices, and (for
    /// loss targets) a Bayes-risk summary per cell.
    Analyze {
        #[command(flatten)]
        input: TargetArgs,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bounds on prediction dimension at a probe distribution.
    Bound {
        #[command(flatten)]
        input: TargetArgs,
        /// Probe distribution as comma-separated rationals.
        #[arg(long)]
        p: String,
        /// Report whose cell is probed.
        #[arg(long)]
        r: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a cell family is elicited by some discrete loss.
    Elicitable {
        #[command(flatten)]
        input: TargetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a user-supplied flat against a report's cell.
    Flat {
        #[command(flatten)]
        input: TargetArgs,
        /// Flat document: JSON path with the functional rows.
        #[arg(long)]
        flat: String,
        /// Base point on the flat, as comma-separated rationals.
        #[arg(long)]
        p: String,
        /// Report whose cell should contain the flat.
        #[arg(long)]
        r: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check indirect elicitation of a target by a surrogate and link.
    Indirect {
        /// Surrogate document: bundled name or JSON path.
        #[arg(long)]
        surrogate: String,
        /// Link document: bundled name or JSON path.
        #[arg(long)]
        link: String,
        #[command(flatten)]
        input: TargetArgs,
        /// Probe cap for sampled (dimension three and up) checks.
        #[arg(long, default_value_t = 64)]
        probe_budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a three-outcome property as a deterministic SVG diagram.
    Render {
        #[command(flatten)]
        input: TargetArgs,
        /// Optional annotated point, as comma-separated rationals.
        #[arg(long)]
        p: Option<String>,
        /// SVG output path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Run the CLI, returning the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
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

/// The loaded target: always cells, plus the loss when one was given.
struct Target {
    description: String,
    cells: PropertyCells,
    loss: Option<DiscreteLoss>,
}

fn read_input(spec: &str) -> Result<String> {
    fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))
}

fn load_loss(spec: &str) -> Result<DiscreteLoss> {
    match bundled::loss_doc(spec) {
        Some(doc) => io::loss_from_doc(&doc),
        None => io::parse_loss(&read_input(spec)?),
    }
}

fn load_target(input: &TargetArgs) -> Result<Target> {
    if let Some(spec) = &input.target {
        let loss = load_loss(spec)?;
        let cells = elicited_property(&loss, None)?;
        return Ok(Target {
            description: spec.clone(),
            cells,
            loss: Some(loss),
        });
    }
    let spec = input.cells.as_ref().expect("clap enforces the group");
    let cells = match bundled::cells_doc(spec) {
        Some(doc) => io::cells_from_doc(&doc)?,
        None => io::parse_cells(&read_input(spec)?)?,
    };
    Ok(Target {
        description: spec.clone(),
        cells,
        loss: None,
    })
}

fn load_surrogate(spec: &str) -> Result<PolyhedralSurrogate> {
    match bundled::surrogate_doc(spec) {
        Some(doc) => io::surrogate_from_doc(&doc),
        None => io::parse_surrogate(&read_input(spec)?),
    }
}

fn load_link(spec: &str) -> Result<Link> {
    match bundled::link_doc(spec) {
        Some(doc) => io::link_from_doc(&doc),
        None => io::parse_link(&read_input(spec)?),
    }
}

fn parse_probe(text: &str, n: usize) -> Result<RationalVector> {
    crate::distribution::parse_distribution(text, n)
        .map_err(|e| Error::Parse(format!("--p: {e}")))
}

fn strings(v: &[crate::rational::Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn inequality_docs(rows: &[crate::polyhedron::Constraint]) -> Vec<InequalityDoc> {
    rows.iter()
        .map(|c| InequalityDoc {
            normal: strings(&c.normal),
            offset: format_rational(&c.offset),
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display()))),
    }
}

#[derive(Serialize)]
struct CellReport {
    report: String,
    inequalities: Vec<InequalityDoc>,
    equalities: Vec<InequalityDoc>,
    vertices: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct BayesSummary {
    report: String,
    constant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    low: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    high: Option<String>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    command: &'static str,
    target: String,
    outcomes: Vec<String>,
    reports: Vec<String>,
    cells: Vec<CellReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bayes_risk: Option<Vec<BayesSummary>>,
}

#[derive(Serialize)]
struct BoundReportDoc {
    command: &'static str,
    target: String,
    p: Vec<String>,
    report: String,
    fsd_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    flat_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flat_status: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_functionals: Option<Vec<Vec<String>>>,
    applied_rule: &'static str,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ElicitableReport {
    command: &'static str,
    target: String,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    loss: Option<LossDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_pair: Option<[String; 2]>,
}

#[derive(Serialize)]
struct FlatReport {
    command: &'static str,
    target: String,
    report: String,
    p: Vec<String>,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ViolationDoc {
    prediction: Vec<String>,
    distribution: Vec<String>,
    expected: Vec<String>,
    got: String,
}

#[derive(Serialize)]
struct IndirectReport {
    command: &'static str,
    surrogate: String,
    link: String,
    target: String,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<ViolationDoc>,
    probes: usize,
    provenance: &'static str,
    exhaustiveness: &'static str,
}

#[derive(Serialize)]
struct RenderReport {
    command: &'static str,
    target: String,
    out: String,
    bytes: usize,
}

fn status_label(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::CertifiedExhaustive => "certified-exhaustive",
        SearchStatus::Heuristic => "heuristic",
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Analyze { input, out } => {
            let target = load_target(&input)?;
            let mut cell_reports = Vec::new();
            for (i, cell) in target.cells.cells.iter().enumerate() {
                let mut vertices: Vec<RationalVector> = cell
                    .vertices()
                    .map_err(|_| Error::Invariant("a simplex cell came out unbounded".into()))?;
                vertices.sort();
                cell_reports.push(CellReport {
                    report: target.cells.reports[i].clone(),
                    inequalities: inequality_docs(&cell.inequalities),
                    equalities: inequality_docs(&cell.equalities),
                    vertices: vertices.iter().map(|v| strings(v)).collect(),
                });
            }
            let bayes_risk = match &target.loss {
                None => None,
                Some(loss) => {
                    let mut summaries = Vec::new();
                    for (i, cell) in target.cells.cells.iter().enumerate() {
                        let summary = match bayes_risk_constant_on(loss, cell)? {
                            ConstancyOutcome::Constant { value } => BayesSummary {
                                report: target.cells.reports[i].clone(),
                                constant: true,
                                value: Some(format_rational(&value)),
                                low: None,
                                high: None,
                            },
                            ConstancyOutcome::Witness { low, high, .. } => BayesSummary {
                                report: target.cells.reports[i].clone(),
                                constant: false,
                                value: None,
                                low: Some(format_rational(&low)),
                                high: Some(format_rational(&high)),
                            },
                        };
                        summaries.push(summary);
                    }
                    Some(summaries)
                }
            };
            let report = AnalyzeReport {
                command: "analyze",
                target: target.description,
                outcomes: target.cells.outcomes.clone(),
                reports: target.cells.reports.clone(),
                cells: cell_reports,
                bayes_risk,
            };
            emit(&out, &io::to_json(&report)?)
        }
        Command::Bound { input, p, r, out } => {
            let target = load_target(&input)?;
            let probe = parse_probe(&p, target.cells.n())?;
            let bound = flat_lower_bound(&target.cells, &probe, &r)?;
            let report = BoundReportDoc {
                command: "bound",
                target: target.description,
                p: strings(&probe),
                report: bound.report.clone(),
                fsd_bound: bound.fsd_bound,
                flat_bound: bound.flat.as_ref().map(|f| f.bound),
                flat_status: bound.flat.as_ref().map(|f| status_label(f.status)),
                witness_functionals: bound
                    .flat
                    .as_ref()
                    .map(|f| f.witness.functionals.iter().map(|w| strings(w)).collect()),
                applied_rule: bound.applied_rule.label(),
                notes: bound.notes.clone(),
            };
            emit(&out, &io::to_json(&report)?)
        }
        Command::Elicitable { input, out } => {
            let target = load_target(&input)?;
            let report = match recover_loss(&target.cells)? {
                RecoverOutcome::Found(loss) => ElicitableReport {
                    command: "elicitable",
                    target: target.description,
                    outcome: "found",
                    loss: Some(io::loss_to_doc(&loss)),
                    witness_pair: None,
                },
                RecoverOutcome::NotElicitable { report_a, report_b } => ElicitableReport {
                    command: "elicitable",
                    target: target.description,
                    outcome: "not-elicitable",
                    loss: None,
                    witness_pair: Some([report_a, report_b]),
                },
            };
            emit(&out, &io::to_json(&report)?)
        }
        Command::Flat {
            input,
            flat,
            p,
            r,
            out,
        } => {
            let target = load_target(&input)?;
            let flat = io::parse_flat(&read_input(&flat)?)?;
            let probe = parse_probe(&p, target.cells.n())?;
            let cell = target.cells.cell(&r).ok_or_else(|| {
                Error::Precondition(format!("unknown report {r:?}"))
            })?;
            let verdict = certify_flat(&flat, &probe, cell)?;
            let report = FlatReport {
                command: "flat",
                target: target.description,
                report: r,
                p: strings(&probe),
                certified: verdict.is_ok(),
                violation: verdict.err().map(|v| strings(&v.point)),
            };
            emit(&out, &io::to_json(&report)?)
        }
        Command::Indirect {
            surrogate,
            link,
            input,
            probe_budget,
            out,
        } => {
            let target = load_target(&input)?;
            let surrogate_doc = load_surrogate(&surrogate)?;
            let link_doc = load_link(&link)?;
            let outcome =
                check_indirect_elicitation(&surrogate_doc, &link_doc, &target.cells, probe_budget)?;
            let (verdict, violation) = match outcome.verdict {
                IndirectVerdict::NoViolationFound => ("no-violation-found", None),
                IndirectVerdict::Violation {
                    prediction,
                    distribution,
                    expected,
                    got,
                } => (
                    "violation",
                    Some(ViolationDoc {
                        prediction: strings(&prediction),
                        distribution: strings(&distribution),
                        expected,
                        got,
                    }),
                ),
            };
            let report = IndirectReport {
                command: "indirect",
                surrogate,
                link,
                target: target.description,
                verdict,
                violation,
                probes: outcome.probes,
                provenance: outcome.provenance,
                exhaustiveness: outcome.exhaustiveness.label(),
            };
            emit(&out, &io::to_json(&report)?)
        }
        Command::Render { input, p, out } => {
            let target = load_target(&input)?;
            let annotations = match p {
                None => Vec::new(),
                Some(text) => vec![(parse_probe(&text, target.cells.n())?, "p".to_string())],
            };
            let svg = render_simplex(&target.cells, &annotations, &[])?;
            fs::write(&out, &svg)
                .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", out.display())))?;
            let report = RenderReport {
                command: "render",
                target: target.description,
                out: out.display().to_string(),
                bytes: svg.len(),
            };
            print!("{}", io::to_json(&report)?);
            Ok(())
        }
    }
}
