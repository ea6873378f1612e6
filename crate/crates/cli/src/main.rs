use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ddl_core::bench;
use ddl_core::dsl::{emit_extension, parse_theory, serialize_theory, ExtensionFormat};
use ddl_core::engine::{reduct, Engine, EngineError, Parallelism, StageTrace, Verdict};
use ddl_core::gen::{generate, Family, FamilySpec};
use ddl_core::proof::checker::check_derivation;
use ddl_core::proof::witness::witness_derivation;
use ddl_core::theory::{Conjunction, Literal};
use ddl_core::{Derivation, TaggedExpression};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_STRICT: u8 = 3;
const EXIT_CYCLE: u8 = 4;

#[derive(Parser)]
#[command(name = "ddl", version, about = "Defeasible deontic logic engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args)]
struct TheoryArgs {
    /// Theory file.
    theory: PathBuf,
    /// Treat validation warnings as errors.
    #[arg(long)]
    strict: bool,
    /// Evaluate reducts one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and print the extension.
    Extension {
        #[command(flatten)]
        input: TheoryArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Dump the stage trace to stderr.
        #[arg(long)]
        trace: bool,
        /// Also decide this conjunction, e.g. "a & b". Repeatable.
        #[arg(long = "conj", value_name = "CONJUNCTION")]
        conj: Vec<String>,
    },
    /// Decide a goal: `d a`, `O a` or `O a & b`.
    Query {
        #[command(flatten)]
        input: TheoryArgs,
        goal: String,
        /// Ask for the negative tag of the goal.
        #[arg(long)]
        neg: bool,
        /// Print a checked derivation when the goal holds.
        #[arg(long)]
        witness: bool,
    },
    /// Check a derivation file step by step.
    Check {
        #[command(flatten)]
        input: TheoryArgs,
        derivation: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the theory with the given literals removed.
    Reduct {
        #[command(flatten)]
        input: TheoryArgs,
        /// Literals to remove, e.g. `~a b`.
        #[arg(required = true)]
        literals: Vec<String>,
    },
    /// Generate a theory of a benchmark family.
    Gen {
        family: String,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
    },
    /// Time extension computation over growing sizes; prints CSV.
    Bench {
        /// Families to run. Defaults to all.
        #[arg(long = "family")]
        families: Vec<String>,
        /// Comma-separated rule counts.
        #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
        sizes: Vec<usize>,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct SizeArgs {
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Error carrying its exit status.
struct Fail(u8, String);

impl From<EngineError> for Fail {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::Cycle(_) => EXIT_CYCLE,
            _ => EXIT_FAILURE,
        };
        Fail(code, format!("error: {e}"))
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path)
        .map_err(|e| Fail(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn load(args: &TheoryArgs) -> Result<Engine, Fail> {
    let src = read(&args.theory)?;
    let name = args.theory.display();
    let parsed = parse_theory(&src).map_err(|diags| {
        let text: Vec<String> = diags.iter().map(|d| format!("{name}:{d}")).collect();
        Fail(EXIT_PARSE, text.join("\n"))
    })?;
    for w in &parsed.warnings {
        eprintln!("{name}:{w}");
    }
    if args.strict && !parsed.warnings.is_empty() {
        return Err(Fail(
            EXIT_STRICT,
            format!("{name}: {} warning(s) under --strict", parsed.warnings.len()),
        ));
    }
    let p = if args.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    Ok(Engine::new(parsed.theory).with_parallelism(p))
}

fn render_trace(trace: &StageTrace) -> String {
    let mut out = String::new();
    for (n, stage) in trace.stages().iter().enumerate() {
        let _ = writeln!(out, "stage {n}:");
        for (e, why) in &stage.added {
            let _ = writeln!(out, "  {e:<20} {why}");
        }
    }
    out
}

fn parse_goal(goal: &str, neg: bool) -> Result<TaggedExpression, Fail> {
    let bad = || {
        Fail(
            EXIT_PARSE,
            format!("malformed goal `{goal}` (expected `d a`, `O a` or `O a & b`)"),
        )
    };
    let g = goal.trim();
    if g.starts_with(['+', '-']) {
        let e = TaggedExpression::parse(g).map_err(|_| bad())?;
        return Ok(if neg { e.negated() } else { e });
    }
    let (tag, rest) = g.split_once(char::is_whitespace).ok_or_else(bad)?;
    let rest = rest.trim();
    let e = match tag {
        "d" => TaggedExpression::plus_d(Literal::parse(rest).ok_or_else(bad)?),
        "O" if rest.contains('&') => {
            TaggedExpression::plus_and(Conjunction::parse(rest).ok_or_else(bad)?)
        }
        "O" => TaggedExpression::plus_o(Literal::parse(rest).ok_or_else(bad)?),
        _ => return Err(bad()),
    };
    Ok(if neg { e.negated() } else { e })
}

fn goal_atoms_known(engine: &Engine, goal: &TaggedExpression) -> bool {
    match goal {
        TaggedExpression::Factual(_, l) | TaggedExpression::Obligation(_, l) => {
            engine.knows_atom(l)
        }
        TaggedExpression::Conjunctive(_, c) => c.conjuncts().iter().all(|l| engine.knows_atom(l)),
    }
}

/// Output and exit status.
fn run(cli: Cli) -> Result<(String, u8), Fail> {
    let out = match cli.command {
        Command::Extension {
            input,
            format,
            trace,
            conj,
        } => {
            let engine = load(&input)?;
            let fp = engine.fixpoint()?;
            if trace {
                eprint!("{}", render_trace(&fp.trace));
            }
            let mut ext = fp.extension.clone();
            for c in &conj {
                let c = Conjunction::parse(c).ok_or_else(|| {
                    Fail(EXIT_PARSE, format!("malformed conjunction `{c}`"))
                })?;
                match engine.verdict(&TaggedExpression::plus_and(c.clone()))? {
                    Verdict::Proven => ext.conj_pos.insert(c),
                    Verdict::Refuted => ext.conj_neg.insert(c),
                    Verdict::Undecided => false,
                };
            }
            let f = match format {
                Format::Json => ExtensionFormat::Json,
                Format::Text => ExtensionFormat::Text,
            };
            emit_extension(&ext, f)
        }
        Command::Query {
            input,
            goal,
            neg,
            witness,
        } => {
            let engine = load(&input)?;
            let goal = parse_goal(&goal, neg)?;
            let mut out = if engine.query(&goal)? {
                "proven".to_string()
            } else if !goal_atoms_known(&engine, &goal) {
                "refuted (no rules)".to_string()
            } else {
                match engine.verdict(&goal)? {
                    Verdict::Undecided => "undecided".to_string(),
                    _ => "refuted".to_string(),
                }
            };
            out.push('\n');
            if witness && out == "proven\n" {
                let d = witness_derivation(&engine, &goal)
                    .map_err(|e| Fail(EXIT_FAILURE, format!("error: {e}")))?;
                out.push_str(&d.to_string());
            }
            out
        }
        Command::Check {
            input,
            derivation,
            format,
        } => {
            let engine = load(&input)?;
            let text = read(&derivation)?;
            let d = Derivation::parse(&text).map_err(|e| {
                Fail(EXIT_PARSE, format!("{}: {e}", derivation.display()))
            })?;
            let report = check_derivation(engine.theory(), &d);
            let out = match format {
                Format::Json => {
                    let mut s = report.to_json();
                    s.push('\n');
                    s
                }
                Format::Text => report.to_string(),
            };
            let code = if report.accepted { 0 } else { EXIT_FAILURE };
            return Ok((out, code));
        }
        Command::Reduct { input, literals } => {
            let engine = load(&input)?;
            let l = literals
                .iter()
                .map(|s| {
                    Literal::parse(s)
                        .ok_or_else(|| Fail(EXIT_PARSE, format!("malformed literal `{s}`")))
                })
                .collect::<Result<BTreeSet<_>, _>>()?;
            serialize_theory(&reduct(engine.theory(), &l))
        }
        Command::Gen { family, size, n, r } => {
            let family = parse_family(&family)?;
            let spec = FamilySpec::new(family, n, r, size.m, size.k, size.seed);
            serialize_theory(&generate(&spec))
        }
        Command::Bench {
            families,
            sizes,
            size,
            reps,
            sequential,
        } => {
            let families = if families.is_empty() {
                Family::ALL.to_vec()
            } else {
                families
                    .iter()
                    .map(|f| parse_family(f))
                    .collect::<Result<_, _>>()?
            };
            let p = if sequential {
                Parallelism::Sequential
            } else {
                Parallelism::Parallel
            };
            let mut rows = Vec::new();
            for family in families {
                let specs: Vec<FamilySpec> = sizes
                    .iter()
                    .map(|&s| {
                        let n = if family == Family::Layered { s / 2 } else { s };
                        FamilySpec::new(family, n, s, size.m, size.k, size.seed)
                    })
                    .collect();
                let part = bench::run(&specs, reps, p);
                if let Some(slope) = bench::rule_slope(&part) {
                    eprintln!("{family}: log-log slope {slope:.3}");
                }
                rows.extend(part);
            }
            bench::csv(&rows)
        }
    };
    Ok((out, 0))
}

fn parse_family(s: &str) -> Result<Family, Fail> {
    s.parse::<Family>().map_err(|e| Fail(EXIT_PARSE, e.to_string()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
