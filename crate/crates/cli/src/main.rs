use std::fmt::Write as _;
use std::fs;
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use popper_revision::audit::{
    exhaustive_small_space_audit, random_audit, AuditReport, GeneratorParams,
};
use popper_revision::cores::{cores_of, expects, fully_believes, innermost, outermost};
use popper_revision::fixtures::{coin, kennedy, DEFAULT_COIN_DEPTH};
use popper_revision::nmr::nm_follows;
use popper_revision::suppose::{accepts_conditional, suppose_formulas};
use popper_revision::{
    extension, is_apriori, is_normal, model_file, parse_formula, popper_eval, EpistemicState,
    Formula,
};

#[derive(Parser)]
#[command(
    name = "popper",
    version,
    about = "Conditional probability, probability cores and supposition over model files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model file and print its core system
    Check { model: PathBuf },
    /// Print P(B | A) as an exact rational
    Eval {
        model: PathBuf,
        b: String,
        a: String,
    },
    /// Suppose formulas in sequence and print each resulting state
    Suppose {
        model: PathBuf,
        #[arg(required = true)]
        formulas: Vec<String>,
    },
    /// Answer a query against a model
    Query {
        kind: QueryKind,
        model: PathBuf,
        #[arg(required = true)]
        formulas: Vec<String>,
    },
    /// Run the axiom audit; exits with status 3 on any failure
    Audit {
        mode: AuditMode,
        /// Seed count `N` (meaning 0..N) or range `A..B` for random audits
        #[arg(long, default_value = "0..1000", value_parser = parse_seeds)]
        seeds: Range<u64>,
        /// Random propositions per state
        #[arg(long, default_value_t = 32)]
        pool_size: usize,
        /// Largest universe: enumeration size for exhaustive audits (at most
        /// 5), universe cap for random ones
        #[arg(long)]
        max_worlds: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a bundled example model
    Examples {
        name: Example,
        /// Output path; defaults to `<name>.model`
        out: Option<PathBuf>,
        /// Truncation depth of the coin example
        #[arg(long, default_value_t = DEFAULT_COIN_DEPTH)]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryKind {
    /// `A B`: is the conditional "if A then B" accepted?
    Conditional,
    /// `F`: is F entailed by the innermost core?
    Expects,
    /// `F`: is F entailed by the outermost core?
    Believes,
    /// `F`: does F hold with probability 1 under every condition?
    Apriori,
    /// `A B`: does A nonmonotonically entail B?
    Nm,
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditMode {
    Random,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Kennedy,
    Coin,
}

const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_AUDIT_FAILURE: u8 = 3;
const MAX_EXHAUSTIVE_WORLDS: usize = 5;

enum Failure {
    Domain(String),
    Usage(String),
    Audit(String),
}

impl From<popper_revision::Error> for Failure {
    fn from(e: popper_revision::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn parse_seeds(text: &str) -> Result<Range<u64>, String> {
    let bad = || format!("expected `N` or `A..B`, got `{text}`");
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok(a..b)
        }
        None => Ok(0..text.parse().map_err(|_| bad())?),
    }
}

fn load(path: &PathBuf) -> Result<EpistemicState, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    model_file::parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn formula(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::Domain(format!("`{text}`: {e}")))
}

fn arity(kind: &str, formulas: &[Formula], n: usize) -> Result<(), Failure> {
    if formulas.len() == n {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "{kind} takes {n} formula(s), got {}",
            formulas.len()
        )))
    }
}

fn describe_state(s: &EpistemicState, indent: &str) -> String {
    let u = s.universe();
    let mut out = String::new();
    if s.is_abnormal() {
        let _ = writeln!(out, "{indent}no ranks (abnormal state)");
    }
    for (i, r) in s.ranks().iter().enumerate() {
        let weights: Vec<String> = r
            .weights()
            .iter()
            .map(|(w, p)| format!("{}={p}", u.worlds()[*w].id))
            .collect();
        let _ = writeln!(out, "{indent}rank {i}: {}", weights.join(" "));
    }
    let _ = writeln!(out, "{indent}innermost: {}", u.describe(innermost(s)));
    let _ = writeln!(out, "{indent}outermost: {}", u.describe(outermost(s)));
    let _ = writeln!(
        out,
        "{indent}{}",
        if s.is_abnormal() {
            "INCOHERENT"
        } else {
            "coherent"
        }
    );
    out
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Check { model } => {
            let s = load(&model)?;
            let u = s.universe();
            let cs = cores_of(&s);
            let mut out = format!(
                "valid: {} atoms, {} worlds, {} ranks\n{} cores\n",
                u.atoms().len(),
                u.len(),
                s.ranks().len(),
                cs.len()
            );
            for (i, c) in cs.cores().iter().enumerate() {
                let _ = writeln!(out, "core {i}: {}", u.describe(*c));
            }
            Ok(out)
        }
        Command::Eval { model, b, a } => {
            let s = load(&model)?;
            let (b, a) = (
                extension(&formula(&b)?, s.universe())?,
                extension(&formula(&a)?, s.universe())?,
            );
            if is_normal(&s, a) {
                Ok(format!("{}\n", popper_eval(&s, b, a)))
            } else {
                Ok("1 (antecedent abnormal)\n".into())
            }
        }
        Command::Suppose { model, formulas } => {
            let s = load(&model)?;
            let inputs = formulas
                .iter()
                .map(|f| formula(f))
                .collect::<Result<Vec<_>, _>>()?;
            let trace = suppose_formulas(&s, &inputs)?;
            let mut out = format!("initial:\n{}", describe_state(&trace.initial, "  "));
            for (i, step) in trace.steps.iter().enumerate() {
                let source = step
                    .source
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default();
                let _ = write!(
                    out,
                    "step {}: suppose {source}\n{}",
                    i + 1,
                    describe_state(&step.result, "  ")
                );
            }
            Ok(out)
        }
        Command::Query {
            kind,
            model,
            formulas,
        } => {
            let s = load(&model)?;
            let fs = formulas
                .iter()
                .map(|f| formula(f))
                .collect::<Result<Vec<_>, _>>()?;
            let line = match kind {
                QueryKind::Conditional => {
                    arity("conditional", &fs, 2)?;
                    let v = accepts_conditional(&s, &fs[0], &fs[1])?;
                    format!(
                        "{} ({})",
                        if v.accepted { "accepted" } else { "rejected" },
                        if v.coherent { "coherent" } else { "incoherent" }
                    )
                }
                QueryKind::Expects => {
                    arity("expects", &fs, 1)?;
                    expects(&s, &fs[0])?.to_string()
                }
                QueryKind::Believes => {
                    arity("believes", &fs, 1)?;
                    fully_believes(&s, &fs[0])?.to_string()
                }
                QueryKind::Apriori => {
                    arity("apriori", &fs, 1)?;
                    is_apriori(&s, extension(&fs[0], s.universe())?).to_string()
                }
                QueryKind::Nm => {
                    arity("nm", &fs, 2)?;
                    nm_follows(&s, &fs[0], &fs[1])?.to_string()
                }
            };
            Ok(line + "\n")
        }
        Command::Audit {
            mode,
            seeds,
            pool_size,
            max_worlds,
            format,
        } => {
            let report: AuditReport = match mode {
                AuditMode::Exhaustive => {
                    let n = max_worlds.unwrap_or(4);
                    if !(1..=MAX_EXHAUSTIVE_WORLDS).contains(&n) {
                        return Err(Failure::Domain(format!(
                            "--max-worlds must be between 1 and {MAX_EXHAUSTIVE_WORLDS} for exhaustive audits"
                        )));
                    }
                    exhaustive_small_space_audit(n)
                }
                AuditMode::Random => {
                    let params = GeneratorParams {
                        max_worlds,
                        ..GeneratorParams::default()
                    };
                    random_audit(&params, seeds, pool_size)?
                }
            };
            let text = match format {
                Format::Text => format!("{report}\n"),
                Format::Lines => report.to_lines(),
            };
            if report.passed() {
                Ok(text)
            } else {
                Err(Failure::Audit(text))
            }
        }
        Command::Examples { name, out, n } => {
            let (state, default) = match name {
                Example::Kennedy => (kennedy(), "kennedy.model"),
                Example::Coin => {
                    if !(1..=62).contains(&n) {
                        return Err(Failure::Domain("--n must be between 1 and 62".into()));
                    }
                    (coin(n), "coin.model")
                }
            };
            let path = out.unwrap_or_else(|| PathBuf::from(default));
            fs::write(&path, model_file::render(&state))
                .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Audit(report)) => {
            print!("{report}");
            ExitCode::from(EXIT_AUDIT_FAILURE)
        }
    }
}
