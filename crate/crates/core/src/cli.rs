//! Command-line front end. [`run_command`] turns an argument vector into a
//! [`Report`] without touching stdout, so it is testable end to end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::conditions::{ConditionVerdict, SearchStrategy, Status, DEFAULT_BUDGET, DEFAULT_SEED};
use crate::error::Error;
use crate::exactnum::{parse_quad, QuadExt};
use crate::kkm::{default_delta, g_set, intersection_witness, verify_kkm, GKind};
use crate::mapdef;
use crate::mapping::MappingSpec;
use crate::plot::{write_plot, PlotFormat};
use crate::verdict::{run_corpus, run_theorem, CorpusResult, TheoremId, TheoremOptions, TheoremVerdict};

#[derive(Debug, Parser)]
#[command(name = "kkmfix", version, about = "Exact fixed-point hypothesis checks for piecewise-affine maps")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Number of subsets the falsifier checks.
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
    /// Seed of the falsifier.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Decide b-conditions exactly when the search finds no violation.
    #[arg(long)]
    exact: bool,
}

impl SearchArgs {
    fn options(&self) -> TheoremOptions {
        TheoremOptions {
            strategy: SearchStrategy {
                budget: self.budget.unwrap_or(DEFAULT_BUDGET),
                seed: self.seed.unwrap_or(DEFAULT_SEED),
                ..SearchStrategy::default()
            },
            exact_b: self.exact,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    G1,
    G2,
    G3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Svg,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the hypotheses of one theorem.
    Check {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        /// One of t1, cor3, t3, cor4, t5.
        #[arg(long, value_parser = parse_theorem)]
        theorem: TheoremId,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the exact fixed-point set.
    FixedPoints {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
    },
    /// Check KKM coverage of a finite point set.
    Kkm {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Gap for g3; defaults to twice the infimum of the residual.
        #[arg(long, value_parser = parse_number)]
        delta: Option<QuadExt>,
        /// Comma-separated points of C.
        #[arg(long, value_parser = parse_number, value_delimiter = ',', required = true, num_args = 1..)]
        points: Vec<QuadExt>,
    },
    /// Run the built-in corpus.
    Corpus {
        /// Run a single entry.
        #[arg(long, value_name = "N")]
        only: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Validate a map file.
    Parse {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
    },
    /// Write a CSV or SVG plot.
    Plot {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        #[arg(long, value_name = "N", default_value_t = 101)]
        samples: usize,
    },
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_number(s: &str) -> Result<QuadExt, String> {
    parse_quad(s.trim()).map_err(|e| e.to_string())
}

/// Outcome of one invocation. Exit code 0: every check favorable or
/// matching; 1: a falsification or mismatch; 2: usage, input or I/O error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: String,
    pub text: String,
    pub json: serde_json::Value,
    pub exit_code: i32,
    /// Whether `--json` was given.
    pub json_output: bool,
}

impl Report {
    /// What the binary prints: JSON or text, followed by a newline.
    pub fn output(&self) -> String {
        if self.json_output && self.exit_code != 2 {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = self.text.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

struct Outcome {
    text: String,
    result: serde_json::Value,
    exit_code: i32,
}

fn usage_error(message: String) -> Outcome {
    Outcome {
        result: json!({ "error": message }),
        text: format!("error: {message}"),
        exit_code: 2,
    }
}

/// One line of a clap error: the message without usage and help hints.
fn clap_message(e: &clap::Error) -> String {
    let rendered = e.render().to_string();
    let mut parts = Vec::new();
    for line in rendered.lines() {
        let line = line.trim();
        if line.starts_with("Usage:") || line.starts_with("For more information") {
            break;
        }
        if !line.is_empty() {
            parts.push(line.trim_start_matches("error: ").to_string());
        }
    }
    parts.join(" ")
}

pub fn run_command<I, S>(argv: I) -> Report
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let inputs = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let command = argv.get(1).cloned().unwrap_or_default();
            let json_output = argv.iter().any(|a| a == "--json");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Report {
                    command,
                    inputs,
                    text: e.render().to_string(),
                    json: serde_json::Value::Null,
                    exit_code: 0,
                    json_output: false,
                },
                _ => {
                    let o = usage_error(clap_message(&e));
                    Report {
                        command,
                        inputs,
                        text: o.text,
                        json: o.result,
                        exit_code: 2,
                        json_output,
                    }
                }
            };
        }
    };
    let command = match &cli.command {
        Command::Check { .. } => "check",
        Command::FixedPoints { .. } => "fixed-points",
        Command::Kkm { .. } => "kkm",
        Command::Corpus { .. } => "corpus",
        Command::Parse { .. } => "parse",
        Command::Plot { .. } => "plot",
    };
    let o = match &cli.command {
        Command::Check { map, theorem, search } => cmd_check(map, *theorem, search),
        Command::FixedPoints { map } => cmd_fixed_points(map),
        Command::Kkm {
            map,
            kind,
            delta,
            points,
        } => cmd_kkm(map, *kind, delta.as_ref(), points),
        Command::Corpus { only, search } => cmd_corpus(*only, search),
        Command::Parse { map } => cmd_parse(map),
        Command::Plot {
            map,
            out,
            format,
            samples,
        } => cmd_plot(map, out, *format, *samples),
    };
    Report {
        command: command.to_string(),
        json: json!({
            "command": command,
            "inputs": inputs,
            "exit_code": o.exit_code,
            "result": o.result,
        }),
        inputs,
        text: o.text,
        exit_code: o.exit_code,
        json_output: cli.json,
    }
}

fn load(path: &Path) -> Result<MappingSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    mapdef::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

macro_rules! load_or_exit {
    ($path:expr) => {
        match load($path) {
            Ok(spec) => spec,
            Err(message) => return usage_error(message),
        }
    };
}

fn list(items: &[QuadExt]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn fixed_point_text(v: &TheoremVerdict) -> String {
    match &v.fixed_point_list {
        Some(l) if l.is_empty() => "none".to_string(),
        Some(l) => list(l),
        None => v.fixed_points.to_string(),
    }
}

fn condition_lines(out: &mut String, name: &str, v: &ConditionVerdict) {
    let _ = writeln!(out, "  {name:<8} {:<14} {}", v.status.to_string(), v.detail);
    let pad = " ".repeat(26);
    if let Some(w) = &v.witness {
        let _ = writeln!(out, "{pad}witness: {w}");
    }
    if v.stats.subsets_checked > 0 {
        let _ = writeln!(
            out,
            "{pad}searched {} subsets over {} points",
            v.stats.subsets_checked, v.stats.points_tried
        );
    }
}

fn verdict_text(label: &str, v: &TheoremVerdict, options: &TheoremOptions) -> String {
    let mut out = String::new();
    let mode = if options.exact_b { "search, then exact decision" } else { "search" };
    let _ = writeln!(out, "{label} under {}", v.theorem);
    let _ = writeln!(
        out,
        "b-condition mode: {mode}; seed {}, budget {}",
        options.strategy.seed, options.strategy.budget
    );
    for name in v.theorem.conditions() {
        condition_lines(&mut out, name, &v.conditions[*name]);
    }
    let _ = writeln!(out, "fixed points: {}", fixed_point_text(v));
    let _ = writeln!(out, "consistent: {}", if v.consistent { "yes" } else { "no" });
    if !v.notes.is_empty() {
        let _ = writeln!(out, "notes: {}", v.notes);
    }
    out
}

fn cmd_check(map: &Path, theorem: TheoremId, search: &SearchArgs) -> Outcome {
    let spec = load_or_exit!(map);
    let options = search.options();
    let v = match run_theorem(&spec, theorem, &options) {
        Ok(v) => v,
        Err(e) => return usage_error(e.to_string()),
    };
    let failed = v.conditions.values().any(|c| c.status == Status::Falsified) || !v.consistent;
    Outcome {
        text: verdict_text(&spec.label, &v, &options),
        result: json!({ "label": spec.label, "options": options, "verdict": v }),
        exit_code: i32::from(failed),
    }
}

fn cmd_fixed_points(map: &Path) -> Outcome {
    let spec = load_or_exit!(map);
    let set = spec.fixed_points();
    let points = set.finite_points();
    let text = match &points {
        Some(l) if l.is_empty() => "none".to_string(),
        Some(l) => list(l),
        None => set.to_string(),
    };
    Outcome {
        text,
        result: json!({ "label": spec.label, "fixed_points": set, "list": points }),
        exit_code: 0,
    }
}

fn cmd_kkm(map: &Path, kind: KindArg, delta: Option<&QuadExt>, points: &[QuadExt]) -> Outcome {
    let spec = load_or_exit!(map);
    let kind = match kind {
        KindArg::G1 => GKind::G1,
        KindArg::G2 => GKind::G2,
        KindArg::G3 => {
            let d = match delta {
                Some(d) => Some(d.clone()),
                None => match default_delta(&spec) {
                    Ok(d) => d,
                    Err(e) => return usage_error(e.to_string()),
                },
            };
            match d {
                Some(d) => GKind::G3(d),
                None => return usage_error("--delta is required for g3: the residual has infimum 0".to_string()),
            }
        }
    };
    let run = || -> crate::Result<Outcome> {
        let check = verify_kkm(&kind, &spec, points)?;
        let common = intersection_witness(&kind, &spec, points)?;
        let mut text = String::new();
        let mut sets = Vec::new();
        let _ = writeln!(text, "{} on {}", kind, spec.label);
        for p in points {
            let s = g_set(&kind, &spec, p)?;
            let compact = s.is_compact();
            let _ = writeln!(text, "  G({p}) = {s}{}", if compact { "  (compact)" } else { "" });
            sets.push(json!({ "x": p, "set": s, "compact": compact }));
        }
        let lo = points.iter().min().expect("nonempty");
        let hi = points.iter().max().expect("nonempty");
        match &check.uncovered {
            None => {
                let _ = writeln!(text, "hull [{lo}, {hi}]: covered");
            }
            Some(u) => {
                let _ = writeln!(text, "hull [{lo}, {hi}]: NOT covered, e.g. at {u}");
            }
        }
        let _ = writeln!(
            text,
            "intersection: {common}{}",
            if common.is_compact() { "  (compact)" } else { "" }
        );
        Ok(Outcome {
            text,
            result: json!({
                "label": spec.label,
                "kind": kind,
                "points": points,
                "g_sets": sets,
                "kkm": check,
                "intersection": common,
            }),
            exit_code: i32::from(!check.holds),
        })
    };
    run().unwrap_or_else(|e| usage_error(e.to_string()))
}

fn corpus_text(results: &[CorpusResult], options: &TheoremOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>2}  {:<12} {:<64} {:<13} result", "#", "theorem", "conditions", "fixed points");
    for r in results {
        let conds: Vec<String> = r
            .entry
            .theorem
            .conditions()
            .iter()
            .map(|c| format!("{c} {}", r.verdict.conditions[*c].status))
            .collect();
        let _ = writeln!(
            out,
            "{:>2}  {:<12} {:<64} {:<13} {}",
            r.entry.index,
            r.entry.theorem.title(),
            conds.join(", "),
            r.verdict.fixed_points.to_string(),
            if r.matches { "MATCH" } else { "MISMATCH" }
        );
    }
    let matched = results.iter().filter(|r| r.matches).count();
    let _ = writeln!(
        out,
        "{matched}/{} entries match (seed {}, budget {})",
        results.len(),
        options.strategy.seed,
        options.strategy.budget
    );
    out
}

fn cmd_corpus(only: Option<usize>, search: &SearchArgs) -> Outcome {
    let options = search.options();
    let only_list = only.map(|n| vec![n]);
    let results = match run_corpus(&options, only_list.as_deref()) {
        Ok(r) => r,
        Err(e @ Error::IndexOutOfRange(_)) => return usage_error(format!("--only: {e}")),
        Err(e) => return usage_error(e.to_string()),
    };
    let all = results.iter().all(|r| r.matches);
    Outcome {
        text: corpus_text(&results, &options),
        result: json!({ "options": options, "entries": results, "all_match": all }),
        exit_code: i32::from(!all),
    }
}

fn cmd_parse(map: &Path) -> Outcome {
    let spec = load_or_exit!(map);
    let breakpoints = spec.breakpoints();
    let normalized = mapdef::serialize(&spec);
    let mut text = String::new();
    let _ = writeln!(text, "valid map: {}", spec.label);
    let _ = writeln!(text, "domain: {}", spec.domain);
    let _ = writeln!(text, "pieces: {}, overrides: {}", spec.pieces.len(), spec.overrides.len());
    let _ = writeln!(text, "breakpoints: {}", list(&breakpoints));
    let _ = writeln!(text, "normalized:");
    for line in normalized.lines() {
        let _ = writeln!(text, "  {line}");
    }
    Outcome {
        text,
        result: json!({
            "label": spec.label,
            "domain": spec.domain.to_string(),
            "pieces": spec.pieces.len(),
            "overrides": spec.overrides.len(),
            "breakpoints": breakpoints,
            "normalized": normalized,
        }),
        exit_code: 0,
    }
}

fn cmd_plot(map: &Path, out: &Path, format: FormatArg, samples: usize) -> Outcome {
    let spec = load_or_exit!(map);
    let (format, name) = match format {
        FormatArg::Svg => (PlotFormat::Svg, "svg"),
        FormatArg::Csv => (PlotFormat::Csv, "csv"),
    };
    match write_plot(&spec, format, samples, out) {
        Ok(()) => Outcome {
            text: format!("wrote {} ({name}, {samples} samples)", out.display()),
            result: json!({ "out": out.display().to_string(), "format": format, "samples": samples }),
            exit_code: 0,
        },
        Err(e) => usage_error(e.to_string()),
    }
}
