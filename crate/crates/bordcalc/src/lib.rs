//! Command-line front end for `bordcalc-core`.
//!
//! [`run`] takes the argument vector and returns the exit code together with
//! the text written to standard output and standard error, so the binary and
//! the tests share one code path.

use std::fmt::Write as _;
use std::fs;

use bordcalc_core::algebra::FrobAlgebra;
use bordcalc_core::eval::{evaluate, standard_assignment, verify_presentation};
use bordcalc_core::linear::{self, LinearMove};
use bordcalc_core::presentations::{by_name, Presentation};
use bordcalc_core::rewrite::{equivalent_bounded, Budget, Equivalence};
use bordcalc_core::surface::invariants;
use bordcalc_core::term::Cell;
use bordcalc_core::{algfile, parse};
use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes by error category.
pub mod exit {
    pub const OK: i32 = 0;
    /// A requested check ran and did not pass.
    pub const CHECK_FAILED: i32 = 1;
    /// Bad command line.
    pub const USAGE: i32 = 2;
    /// A file could not be read.
    pub const IO: i32 = 3;
    /// A file could not be parsed.
    pub const PARSE: i32 = 4;
    /// Input parsed but is ill-typed or lacks required structure.
    pub const INVALID: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "bordcalc", about = "Terms, surfaces and Frobenius evaluation for 2D bordisms")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a term file.
    Check {
        file: String,
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Evaluate a term with the standard assignment of an algebra.
    Eval {
        file: String,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Print the surface invariants of a term.
    Invariants {
        file: String,
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Search for a rewrite sequence between two terms.
    Rewrite {
        file: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        max_visited: usize,
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Check every relation of a presentation under an algebra.
    Verify {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "oriented")]
        presentation: String,
    },
    /// Print a presentation manifest.
    Presentation {
        #[arg(long)]
        dump: String,
    },
    /// Reconstruct a linear diagram, optionally after every applicable move.
    Linear {
        file: String,
        #[arg(long)]
        moves: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

type Res<T> = Result<T, Failure>;

fn fail<T>(code: i32, message: impl Into<String>) -> Res<T> {
    Err(Failure { code, message: message.into() })
}

fn read(path: &str) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure { code: exit::IO, message: format!("{path}: {e}") })
}

fn presentation(name: &str) -> Res<Presentation> {
    match by_name(name) {
        Some(p) => Ok(p),
        None => fail(exit::USAGE, format!("unknown presentation {name:?} (expected oriented or unoriented)")),
    }
}

/// A term file: `//` comment lines, an optional `// presentation: NAME` line,
/// and one 2-cell term.
struct TermFile {
    path: String,
    directive: Option<String>,
    term: Cell,
}

fn load_term(path: &str) -> Res<TermFile> {
    let text = read(path)?;
    let directive = text.lines().find_map(|l| {
        l.trim().strip_prefix("//").and_then(|r| r.trim().strip_prefix("presentation:")).map(|n| n.trim().to_string())
    });
    let body = parse::strip_comments(&text);
    let term = parse::cell(body.trim()).map_err(|e| Failure { code: exit::PARSE, message: format!("{path}: {e}") })?;
    Ok(TermFile { path: path.to_string(), directive, term })
}

/// Picks the presentation for a term: the flag, else the file directive, else
/// the first of oriented / unoriented under which the term is valid.
fn resolve(tf: &TermFile, flag: &Option<String>) -> Res<Presentation> {
    let chosen = flag.clone().or_else(|| tf.directive.clone());
    let candidates: Vec<Presentation> = match chosen {
        Some(n) => vec![presentation(&n)?],
        None => vec![presentation("oriented")?, presentation("unoriented")?],
    };
    let mut first_err = None;
    for p in candidates {
        let report = p.data.validate(&tf.term);
        if report.is_valid() {
            return Ok(p);
        }
        if first_err.is_none() {
            let lines: Vec<String> = report.issues.iter().map(|e| format!("{}: {e}", tf.path)).collect();
            first_err = Some(format!("invalid over {}:\n{}", p.name, lines.join("\n")));
        }
    }
    fail(exit::INVALID, first_err.unwrap_or_default())
}

fn load_algebra(path: &str) -> Res<FrobAlgebra> {
    let text = read(path)?;
    algfile::parse(&text).map_err(|e| Failure { code: exit::PARSE, message: format!("{path}: {e}") })
}

fn execute(cli: Cli, out: &mut String) -> Res<i32> {
    let lines = cli.format == Format::Lines;
    match cli.command {
        Command::Check { file, presentation: pf } => {
            let tf = load_term(&file)?;
            let p = resolve(&tf, &pf)?;
            let (s, t) = p.data.cell_boundary(&tf.term).map_err(|e| Failure { code: exit::INVALID, message: format!("{file}: {e}") })?;
            if lines {
                writeln!(out, "valid presentation={} source={s} target={t}", p.name).ok();
            } else {
                writeln!(out, "valid over {}: {s} => {t}", p.name).ok();
            }
            Ok(exit::OK)
        }
        Command::Eval { file, algebra, presentation: pf } => {
            let tf = load_term(&file)?;
            let p = resolve(&tf, &pf)?;
            let a = load_algebra(&algebra)?;
            let asg = standard_assignment(&a, &p).map_err(|e| Failure { code: exit::INVALID, message: format!("{algebra}: {e}") })?;
            let v = evaluate(&tf.term, &p, &asg).map_err(|e| Failure { code: exit::INVALID, message: format!("{file}: {e}") })?;
            if lines && v.scalar().is_none() {
                let m = v.to_matrix();
                writeln!(out, "shape {} {}", m.rows, m.cols).ok();
                for r in 0..m.rows {
                    for c in 0..m.cols {
                        let x = &m[(r, c)];
                        if *x != bordcalc_core::Q::from_integer(0.into()) {
                            writeln!(out, "entry {r} {c} {x}").ok();
                        }
                    }
                }
            } else {
                write!(out, "{v}").ok();
                if v.scalar().is_some() {
                    out.push('\n');
                }
            }
            Ok(exit::OK)
        }
        Command::Invariants { file, presentation: pf } => {
            let tf = load_term(&file)?;
            let p = resolve(&tf, &pf)?;
            let inv = invariants(&tf.term, &p).map_err(|e| Failure { code: exit::INVALID, message: format!("{file}: {e}") })?;
            if lines {
                writeln!(out, "components {}", inv.components.len()).ok();
                for c in &inv.components {
                    let extra = match (c.genus(), c.crosscaps()) {
                        (Some(g), _) => format!("genus={g}"),
                        (_, Some(k)) => format!("crosscaps={k}"),
                        _ => String::new(),
                    };
                    writeln!(out, "component chi={} orientable={} boundary={} {extra}", c.euler_characteristic, c.orientable, c.boundary_circles).ok();
                }
            } else {
                writeln!(out, "{inv}").ok();
            }
            Ok(exit::OK)
        }
        Command::Rewrite { file, to, depth, max_visited, presentation: pf } => {
            let a = load_term(&file)?;
            let b = load_term(&to)?;
            let p = resolve(&a, &pf)?;
            let res = equivalent_bounded(&a.term, &b.term, &p, Budget { depth, max_visited })
                .map_err(|e| Failure { code: exit::INVALID, message: e.to_string() })?;
            match res {
                Equivalence::Equivalent(steps) => {
                    writeln!(out, "EQUIVALENT {}", steps.len()).ok();
                    for (i, s) in steps.iter().enumerate() {
                        writeln!(out, "step {} {s}", i + 1).ok();
                    }
                    Ok(exit::OK)
                }
                Equivalence::Unknown => {
                    writeln!(out, "UNKNOWN").ok();
                    Ok(exit::CHECK_FAILED)
                }
            }
        }
        Command::Verify { algebra, presentation: pn } => {
            let p = presentation(&pn)?;
            let a = load_algebra(&algebra)?;
            let checks = verify_presentation(&a, &p).map_err(|e| Failure { code: exit::INVALID, message: format!("{algebra}: {e}") })?;
            let mut all = true;
            for c in &checks {
                let status = if c.holds { "PASS" } else { "FAIL" };
                all &= c.holds;
                if lines {
                    writeln!(out, "relation={} status={status}", c.name).ok();
                } else {
                    writeln!(out, "{status} {}", c.name).ok();
                }
            }
            let passed = checks.iter().filter(|c| c.holds).count();
            writeln!(out, "{passed}/{} relations hold for {} ({})", checks.len(), a.name, p.name).ok();
            Ok(if all { exit::OK } else { exit::CHECK_FAILED })
        }
        Command::Presentation { dump } => {
            let p = presentation(&dump)?;
            out.push_str(&p.manifest());
            Ok(exit::OK)
        }
        Command::Linear { file, moves } => {
            let text = read(&file)?;
            let body = parse::strip_comments(&text);
            let d = linear::parse(body.trim()).map_err(|e| Failure {
                code: if matches!(e, linear::LinearError::Parse(_)) { exit::PARSE } else { exit::INVALID },
                message: format!("{file}: {e}"),
            })?;
            let base = d.reconstruct_1manifold().map_err(|e| Failure { code: exit::INVALID, message: e.to_string() })?;
            writeln!(out, "diagram circles={} intervals={}", base.circles, base.intervals).ok();
            let mut all = true;
            if moves {
                for m in LinearMove::ALL {
                    for pos in d.applicable(m) {
                        let e = d.apply_move(m, pos).expect("applicable");
                        let c = e.reconstruct_1manifold().expect("moves keep diagrams valid");
                        all &= c == base;
                        writeln!(out, "{m:?}@{pos} circles={} intervals={} : {e}", c.circles, c.intervals).ok();
                    }
                }
            }
            Ok(if all { exit::OK } else { exit::CHECK_FAILED })
        }
    }
}

/// Runs the command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if code == exit::OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut stdout = String::new();
    match execute(cli, &mut stdout) {
        Ok(code) => Outcome { code, stdout, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout, stderr: format!("error: {}\n", f.message) },
    }
}
