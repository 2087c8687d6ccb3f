//! Command-line surface: `check` runs the axiom and side-condition
//! checkers, `tree` exports a level coset tree, `hierarchy` runs the full
//! splitting pipeline. Exit codes: 0 all pass, 1 violation, 2 input error,
//! 3 inconclusive-only. Identical documents and flags produce byte-identical
//! reports.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use zntree::axioms::{properness_trend, AxiomChecker};
use zntree::doc;
use zntree::error::Error;
use zntree::report::{CheckReport, Verdict};
use zntree::splitting::build_hierarchy;
use zntree::tree::build_coset_tree;

#[derive(Parser)]
#[command(
    name = "zntree",
    version,
    about = "Z^n-valued hyperbolic length functions: axiom checking, coset trees, HNN hierarchies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Model document: a JSON file path or `builtin:NAME`
    #[arg(long)]
    model: String,
    /// Override the ball element cap
    #[arg(long)]
    cap: Option<usize>,
    /// Write the report to this path (atomically) as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run axiom and side-condition checks over a word ball
    Check {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(2..=64))]
        max_exp: i64,
        /// Comma-separated subset of: axioms, positivity, hyperbolicity,
        /// regularity, power-height, isolation, properness
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// First coordinate of the properness bound (k,0,...,0)
        #[arg(long, default_value_t = 1)]
        properness_k: i128,
        #[arg(long, default_value = "text")]
        format: String,
        /// Seed for sampled sub-checks (sampling only engages past the pair cap)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build and export the level coset tree
    Tree {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// dot, json, or text
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Run the full splitting pipeline and emit the hierarchy report
    Hierarchy {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(2..=64))]
        max_exp: i64,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the built-in model documents
    Builtins,
}

#[derive(Serialize)]
struct CheckRun {
    model: String,
    radius: u32,
    checks: Vec<CheckReport>,
}

impl CheckRun {
    fn render_text(&self) -> String {
        let mut out = format!("check run: {} at radius {}\n", self.model, self.radius);
        for c in &self.checks {
            out.push_str(&c.render_text());
        }
        let overall = overall_verdict(&self.checks);
        out.push_str(&format!("overall: {overall}\n"));
        out
    }
}

fn overall_verdict(checks: &[CheckReport]) -> Verdict {
    if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

fn exit_for(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Pass => ExitCode::from(0),
        Verdict::Fail => ExitCode::from(1),
        Verdict::Inconclusive => ExitCode::from(3),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    print!("{text}");
    if let Some(path) = out {
        write_atomic(path, text)?;
    }
    Ok(())
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Error> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "zntree-out".to_string())
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn apply_cap(doc: &mut doc::ModelDocument, cap: Option<usize>) {
    if let Some(cap) = cap {
        doc.caps = Some(doc::Caps {
            ball_cap: Some(cap),
        });
    }
}

fn run_check(
    common: CommonArgs,
    radius: u32,
    max_exp: i64,
    checks: Option<Vec<String>>,
    properness_k: i128,
    format: String,
    seed: u64,
) -> Result<ExitCode, Error> {
    let _ = seed; // sampled sub-checks live in the hierarchy pipeline
                  // the bare family name runs the properness trend across ranks
    if common.model == "builtin:Fm-uniform" {
        let family = doc::uniform_family();
        let compiled: Vec<_> = family
            .iter()
            .map(|(label, d)| d.compile().map(|(_, lf)| (label.clone(), lf)))
            .collect::<Result<_, _>>()?;
        let entries: Vec<(String, &zntree::LengthFunction)> = compiled
            .iter()
            .map(|(label, lf)| (label.clone(), lf))
            .collect();
        let report = properness_trend(&entries, radius, properness_k)?;
        let run = CheckRun {
            model: common.model.clone(),
            radius,
            checks: vec![report],
        };
        let text = render_run(&run, &format)?;
        emit(&text, &common.out)?;
        return Ok(exit_for(overall_verdict(&run.checks)));
    }

    let mut document = doc::load(&common.model)?;
    apply_cap(&mut document, common.cap);
    let (model, lf) = document.compile()?;
    let selected = checks.unwrap_or_else(|| {
        vec![
            "axioms".into(),
            "positivity".into(),
            "hyperbolicity".into(),
            "regularity".into(),
            "power-height".into(),
            "isolation".into(),
            "properness".into(),
        ]
    });
    for name in &selected {
        let known = [
            "axioms",
            "positivity",
            "hyperbolicity",
            "regularity",
            "power-height",
            "isolation",
            "properness",
        ];
        if !known.contains(&name.as_str()) {
            return Err(Error::InvalidArgument(format!("unknown check `{name}`")));
        }
    }

    let mut reports = Vec::new();
    match model.enumerate_ball(radius) {
        Ok(ball) => {
            let checker = AxiomChecker::new(&lf, &ball)?;
            let mut delta = None;
            if selected.iter().any(|s| s == "axioms") {
                reports.push(checker.length_axioms()?);
            }
            if selected.iter().any(|s| s == "positivity") {
                reports.push(checker.positivity()?);
            }
            if selected
                .iter()
                .any(|s| s == "hyperbolicity" || s == "regularity")
            {
                let (report, d) = checker.hyperbolicity_defect(0)?;
                delta = Some(d);
                if selected.iter().any(|s| s == "hyperbolicity") {
                    reports.push(report);
                }
            }
            if selected.iter().any(|s| s == "regularity") {
                let delta = delta.expect("defect computed above");
                reports.push(checker.regularity(&delta)?.report);
            }
            if selected.iter().any(|s| s == "power-height") {
                reports.push(checker.power_height(max_exp)?);
            }
            if selected.iter().any(|s| s == "isolation") {
                reports.push(checker.isolated_level(1, max_exp)?);
            }
            if selected.iter().any(|s| s == "properness") {
                reports.push(checker.properness(properness_k)?);
            }
        }
        Err(Error::BallCapExceeded { radius, cap }) => {
            reports.push(
                CheckReport::new("ball-enumeration", radius, Verdict::Inconclusive, "setup").note(
                    format!(
                        "ball of radius {radius} exceeds the element cap {cap}; \
                         raise --cap or lower --radius"
                    ),
                ),
            );
        }
        Err(e) => return Err(e),
    }

    let run = CheckRun {
        model: document.name.clone(),
        radius,
        checks: reports,
    };
    let text = render_run(&run, &format)?;
    emit(&text, &common.out)?;
    Ok(exit_for(overall_verdict(&run.checks)))
}

fn render_run(run: &CheckRun, format: &str) -> Result<String, Error> {
    match format {
        "text" => Ok(run.render_text()),
        "json" => Ok(format!("{}\n", serde_json::to_string_pretty(run)?)),
        other => Err(Error::InvalidArgument(format!(
            "unknown format `{other}` (expected text or json)"
        ))),
    }
}

fn run_tree(
    common: CommonArgs,
    level: usize,
    radius: u32,
    format: String,
) -> Result<ExitCode, Error> {
    let mut document = doc::load(&common.model)?;
    apply_cap(&mut document, common.cap);
    let (model, lf) = document.compile()?;
    if level == 0 || level >= lf.arity() {
        return Err(Error::InvalidArgument(format!(
            "tree level must be in 1..={} for this model",
            lf.arity().saturating_sub(1)
        )));
    }
    let ball = model.enumerate_ball(radius)?;
    match build_coset_tree(&lf, &ball, level) {
        Ok(tree) => {
            let text = match format.as_str() {
                "dot" => tree.to_dot(&model),
                "json" => format!("{}\n", serde_json::to_string_pretty(&tree.view(&model))?),
                "text" => {
                    let v = tree.view(&model);
                    let mut out = format!(
                        "coset tree: level {} radius {} — {} vertices ({} labeled, {} path points), {} edges\n",
                        v.level, v.radius, v.vertex_count, v.labeled_count, v.path_point_count, v.edge_count
                    );
                    for vertex in &v.vertices {
                        match &vertex.label {
                            Some(l) => out.push_str(&format!(
                                "  v{}: {}{}\n",
                                vertex.id,
                                l,
                                if vertex.id == v.base { " (base)" } else { "" }
                            )),
                            None => out.push_str(&format!("  v{}: (path point)\n", vertex.id)),
                        }
                    }
                    for (a, b) in &v.edges {
                        out.push_str(&format!("  v{a} -- v{b}\n"));
                    }
                    out
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown format `{other}` (expected dot, json, or text)"
                    )))
                }
            };
            emit(&text, &common.out)?;
            Ok(ExitCode::from(0))
        }
        Err(Error::TreeRefused { level, detail }) => {
            let report = CheckReport::new(
                &format!("tree-construction-level-{level}"),
                radius,
                Verdict::Fail,
                "coset tree construction",
            )
            .note(detail);
            emit(&report.render_text(), &common.out)?;
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e),
    }
}

fn run_hierarchy(
    common: CommonArgs,
    radius: u32,
    max_exp: i64,
    format: String,
    seed: u64,
) -> Result<ExitCode, Error> {
    let mut document = doc::load(&common.model)?;
    apply_cap(&mut document, common.cap);
    let (_, lf) = document.compile()?;
    let report = build_hierarchy(&document.name, &lf, radius, max_exp, seed)?;
    let text = match format.as_str() {
        "text" => report.render_text(),
        "json" => format!("{}\n", serde_json::to_string_pretty(&report)?),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown format `{other}` (expected text or json)"
            )))
        }
    };
    emit(&text, &common.out)?;
    if report.has_failure() {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::from(0))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            common,
            radius,
            max_exp,
            checks,
            properness_k,
            format,
            seed,
        } => run_check(common, radius, max_exp, checks, properness_k, format, seed),
        Command::Tree {
            common,
            level,
            radius,
            format,
        } => run_tree(common, level, radius, format),
        Command::Hierarchy {
            common,
            radius,
            max_exp,
            format,
            seed,
        } => run_hierarchy(common, radius, max_exp, format, seed),
        Command::Builtins => {
            for name in doc::builtin_names() {
                println!("{name}");
            }
            Ok(ExitCode::from(0))
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
