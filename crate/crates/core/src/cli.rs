//! Command-line front end. Every command prints a single JSON object tagged
//! with `"v": 1`; human-readable notes go to stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::decompose::{theorem2_decompose, Decomposition, Theorem2Outcome};
use crate::h2::{theorem1_scan, Mat2, PuncturedTorusRep, Theorem1Scan};
use crate::search::{run_search, SearchOptions, SearchSummary, SCHEMA_VERSION};
use crate::tree::{axis_intersection, axis_of, axis_window, IntersectionResult, TreeVertex};
use crate::tripod::{tripod_config, TripodReport, WORKED_EXAMPLES};
use crate::word::{cyclic_reduce, CyclicWord, ReducedWord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "treeaxes", version, about = "Axes of conjugates in the free group F2 and their hyperbolic lifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Freely and cyclically reduce a word over x, y, X, Y.
    Reduce { word: String },
    /// Describe the axis of an element in the Cayley tree.
    Axis {
        #[arg(long)]
        word: String,
        /// Also list axis vertices within this distance of the base point's projection.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Intersect the axes of two elements.
    Intersect {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Overlaps of axis(W) with the axes of g1·W·g1⁻¹ and g2·W·g2⁻¹.
    Tripod {
        #[arg(long)]
        word: String,
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Reports for the four worked tripod configurations.
    Examples,
    /// Decompose W from an initial overlap of the given length.
    Decompose {
        #[arg(long)]
        word: String,
        #[arg(long)]
        u_len: usize,
    },
    /// Exhaustive search for covering, edge-disjoint overlap configurations.
    Search {
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// JSON Lines report, one record per word.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check edge lengths of triangles formed by lifts of a closed geodesic.
    H2Verify {
        #[arg(long)]
        word: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, allow_hyphen_values = true)]
        gen_x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gen_y: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceOutput {
    pub v: u32,
    pub reduced: ReducedWord,
    pub conjugator: ReducedWord,
    pub core: ReducedWord,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisOutput {
    pub v: u32,
    pub element: ReducedWord,
    pub conjugator: ReducedWord,
    pub core: CyclicWord,
    pub translation_length: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<Vec<TreeVertex>>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectOutput {
    pub v: u32,
    pub intersection: IntersectionResult,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripodOutput {
    pub v: u32,
    #[serde(flatten)]
    pub report: TripodReport,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedReport {
    pub name: String,
    pub report: TripodReport,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExamplesOutput {
    pub v: u32,
    pub examples: Vec<NamedReport>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecomposeOutput {
    Decomposed {
        v: u32,
        #[serde(flatten)]
        decomposition: Decomposition,
    },
    Inconclusive {
        v: u32,
        outcome: String,
        shift: usize,
        union_len: usize,
    },
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Output {
    pub v: u32,
    #[serde(flatten)]
    pub scan: Theorem1Scan,
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string(value)?;
    match out {
        Some(path) => {
            let mut f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            writeln!(f, "{text}")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn reduced(text: &str) -> Result<ReducedWord> {
    ReducedWord::parse_reducing(text).with_context(|| format!("bad word {text:?}"))
}

fn cyclic(text: &str) -> Result<CyclicWord> {
    text.parse::<CyclicWord>()
        .with_context(|| format!("{text:?} must be a cyclically reduced word"))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<u8> {
    let v = SCHEMA_VERSION;
    match cli.command {
        Command::Reduce { word } => {
            let r = reduced(&word)?;
            let c = cyclic_reduce(&r);
            emit(
                &ReduceOutput {
                    v,
                    reduced: r,
                    conjugator: c.conjugator,
                    core: c.core.into_word(),
                },
                None,
            )?;
        }
        Command::Axis { word, radius } => {
            let g = reduced(&word)?;
            let axis = axis_of(&g)?;
            emit(
                &AxisOutput {
                    v,
                    element: g,
                    conjugator: axis.conjugator().clone(),
                    core: axis.core().clone(),
                    translation_length: axis.translation_length(),
                    window: radius.map(|r| axis_window(&axis, r).into_iter().collect()),
                },
                None,
            )?;
        }
        Command::Intersect { a, b } => {
            let (a, b) = (axis_of(&reduced(&a)?)?, axis_of(&reduced(&b)?)?);
            let intersection = axis_intersection(&a, &b);
            eprintln!("intersection: {}", serde_json::to_string(&intersection)?);
            emit(&IntersectOutput { v, intersection }, None)?;
        }
        Command::Tripod { word, g1, g2 } => {
            let report = tripod_config(&cyclic(&word)?, &reduced(&g1)?, &reduced(&g2)?)?;
            eprintln!(
                "U = {}, V = {}, meet = {:?}, covers = {}",
                report.u, report.v, report.uv_meet, report.covers
            );
            emit(&TripodOutput { v, report }, None)?;
        }
        Command::Examples => {
            let examples = WORKED_EXAMPLES
                .iter()
                .map(|e| NamedReport {
                    name: e.name.to_string(),
                    report: e.report(),
                })
                .collect();
            emit(&ExamplesOutput { v, examples }, None)?;
        }
        Command::Decompose { word, u_len } => {
            let out = match theorem2_decompose(&cyclic(&word)?, u_len)? {
                Theorem2Outcome::Decomposed(decomposition) => DecomposeOutput::Decomposed { v, decomposition },
                Theorem2Outcome::Inconclusive { shift, union_len } => {
                    eprintln!("the overlap and its copy do not reach the end of W");
                    DecomposeOutput::Inconclusive {
                        v,
                        outcome: "inconclusive".into(),
                        shift,
                        union_len,
                    }
                }
            };
            emit(&out, None)?;
        }
        Command::Search {
            max_len,
            no_symmetry,
            jobs,
            out,
        } => {
            if jobs == Some(0) {
                bail!("--jobs must be positive");
            }
            let options = SearchOptions {
                min_len: 1,
                max_len,
                symmetry: !no_symmetry,
                jobs,
            };
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut sink = BufWriter::new(file);
            let summary: SearchSummary = run_search(&options, &mut sink)?;
            eprintln!(
                "scanned {} words, {} configs, {} decomposed, {} inconclusive, {} failures, {} counterexamples",
                summary.words_scanned,
                summary.configs_found,
                summary.theorem2_successes,
                summary.theorem2_inconclusive,
                summary.theorem2_failures,
                summary.counterexamples
            );
            emit(&summary, None)?;
            if summary.counterexamples > 0 {
                return Ok(EXIT_COUNTEREXAMPLE);
            }
        }
        Command::H2Verify {
            word,
            depth,
            tol,
            gen_x,
            gen_y,
            out,
        } => {
            let default = PuncturedTorusRep::default();
            let parse = |m: Option<String>, fallback: Mat2| -> Result<Mat2> {
                Ok(match m {
                    Some(s) => s.parse()?,
                    None => fallback,
                })
            };
            let rep = PuncturedTorusRep::new(parse(gen_x, default.gen_x)?, parse(gen_y, default.gen_y)?)?;
            let scan = theorem1_scan(&rep, &cyclic(&word)?.into_word(), depth, tol)?;
            eprintln!(
                "{} lifts, {} triangles, {} degenerate, {} violations",
                scan.lift_count,
                scan.triangles.len(),
                scan.degenerate,
                scan.violations.len()
            );
            let violated = !scan.violations.is_empty();
            emit(&H2Output { v, scan }, out.as_deref())?;
            if violated {
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    io::stdout().flush()?;
    Ok(EXIT_OK)
}

/// Parses `args` and runs; usage errors map to exit code 1.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
