use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use permclass::decompose::{self, Factorization};
use permclass::verify::{CheckStatus, InclusionReport, SuiteResult, Verdict};
use permclass::{ClassExpr, Config, Engine, Error, Harness, Perm};
use serde_json::{json, Value};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "permclass", version, about = "Exact computations with permutation classes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Vkhk,
    Ikil,
    L4,
    Thm52,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a permutation belongs to a class.
    Member {
        #[arg(long)]
        class: String,
        #[arg(long)]
        perm: String,
    },
    /// List the members of a class of one order.
    Enumerate {
        #[arg(long)]
        class: String,
        #[arg(short = 'n', long = "order")]
        n: usize,
    },
    /// Count members of each order from 1 to max-n.
    Count {
        #[arg(long)]
        class: String,
        #[arg(long)]
        max_n: usize,
    },
    /// Minimal non-members up to a length.
    Basis {
        #[arg(long)]
        class: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Compose permutations left to right, (p ∘ q)(i) = p(q(i)).
    ComposePerms {
        #[arg(required = true)]
        perms: Vec<String>,
    },
    /// Factor a permutation with one of the constructive methods.
    Decompose {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        perm: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta_len: Option<usize>,
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Check lhs ⊆ rhs at every order up to max-n.
    Include {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Run named verification checks.
    Suite {
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        names: String,
        #[arg(long)]
        max_n: Option<usize>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

struct Outcome {
    code: u8,
    text: String,
    json: Value,
    /// Print a JSON array one element per line.
    json_lines: bool,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Outcome { code: 0, text: text.into(), json, json_lines: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => match &out.json {
                    Value::Array(items) if out.json_lines => {
                        for item in items {
                            println!("{item}");
                        }
                    }
                    other => println!("{other}"),
                },
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => EXIT_LIMIT,
        Error::ContractViolation(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn class(text: &str) -> Result<ClassExpr, Error> {
    text.parse()
}

fn perm(text: &str) -> Result<Perm, Error> {
    Ok(text.parse::<Perm>()?)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let config = Config::from_env()?;
    let env_cap = std::env::var(permclass::class::MAX_N_ENV).ok().and_then(|v| v.trim().parse().ok());
    match cli.command {
        Command::Member { class: c, perm: p } => {
            let (c, p) = (class(&c)?, perm(&p)?);
            let member = Engine::new(config).member(&c, &p)?;
            Ok(Outcome::ok(format!("{member}\n"), json!({ "class": c, "perm": p, "member": member })))
        }
        Command::Enumerate { class: c, n } => {
            let c = class(&c)?;
            let slice = Engine::new(config).enumerate(&c, n)?;
            let text: String = slice.iter().map(|p| format!("{p}\n")).collect();
            Ok(Outcome { json_lines: true, ..Outcome::ok(text, json!(slice.members)) })
        }
        Command::Count { class: c, max_n } => {
            let c = class(&c)?;
            let counts = Engine::new(config).count(&c, max_n)?;
            let text: String = counts.iter().enumerate().map(|(i, k)| format!("{} {k}\n", i + 1)).collect();
            Ok(Outcome::ok(text, json!({ "class": c, "counts": counts })))
        }
        Command::Basis { class: c, max_len } => {
            let c = class(&c)?;
            let basis = Engine::new(config).basis_up_to(&c, max_len)?;
            let text: String = basis.iter().map(|p| format!("{p}\n")).collect();
            Ok(Outcome::ok(text, json!({ "class": c, "max_len": max_len, "basis": basis })))
        }
        Command::ComposePerms { perms } => {
            let factors = perms.iter().map(|t| perm(t)).collect::<Result<Vec<_>, _>>()?;
            let mut product = Perm::identity(factors[0].len());
            for f in &factors {
                product = product.compose(f)?;
            }
            Ok(Outcome::ok(format!("{product}\n"), json!({ "factors": factors, "product": product })))
        }
        Command::Decompose { method, perm: p, k, l, alpha, beta_len, gamma } => {
            let p = perm(&p)?;
            let engine = Engine::new(config);
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| Error::Precondition(format!("--{name} is required for this method")))
            };
            let f = match method {
                Method::Vkhk => decompose::decompose_vk_hk(&engine, &p, need(k, "k")?)?,
                Method::Ikil => decompose::decompose_ik_il(&engine, &p, need(k, "k")?, need(l, "l")?)?,
                Method::L4 => decompose::decompose_l4(&engine, &p, need(k, "k")?)?,
                Method::Thm52 => {
                    let alpha = perm(alpha.as_deref().unwrap_or("1"))?;
                    let gamma = perm(gamma.as_deref().unwrap_or("1"))?;
                    decompose::decompose_thm52(&engine, &p, &alpha, beta_len.unwrap_or(1), &gamma)?
                }
            };
            Ok(Outcome::ok(factorization_text(&f), serde_json::to_value(&f).expect("json output")))
        }
        Command::Include { lhs, rhs, max_n, jobs } => {
            let (lhs, rhs) = (class(&lhs)?, class(&rhs)?);
            let harness = Harness::new(config, jobs)?.with_timings(cli.timings);
            let report = harness.check_inclusion(&lhs, &rhs, 1..=max_n);
            let code = if report.first_failure().is_some() {
                EXIT_FAILED
            } else if report.any_skipped() {
                EXIT_LIMIT
            } else {
                0
            };
            Ok(Outcome { code, ..Outcome::ok(inclusion_text(&report), serde_json::to_value(&report).expect("json output")) })
        }
        Command::Suite { names, max_n, jobs } => {
            let names: Vec<&str> = names.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let harness = Harness::new(config, jobs)?.with_timings(cli.timings);
            let results = harness.run_suite(&names, max_n.or(env_cap))?;
            let code = if results.iter().any(|r| r.status == CheckStatus::Fail) {
                EXIT_FAILED
            } else if results.iter().any(|r| r.details.get("skipped").is_some()) {
                EXIT_LIMIT
            } else {
                0
            };
            Ok(Outcome { code, ..Outcome::ok(suite_text(&results), serde_json::to_value(&results).expect("json output")) })
        }
    }
}

fn factorization_text(f: &Factorization) -> String {
    let mut out = format!("{}\n", f.target);
    for factor in &f.factors {
        out.push_str(&format!("  {}  {}\n", factor.perm, factor.class));
    }
    out
}

fn with_time(line: String, elapsed_ms: Option<f64>) -> String {
    match elapsed_ms {
        Some(ms) => format!("{line}  [{ms:.1} ms]\n"),
        None => format!("{line}\n"),
    }
}

fn inclusion_text(report: &InclusionReport) -> String {
    let mut out = format!("{} ⊆ {}\n", report.lhs, report.rhs);
    for r in &report.results {
        let line = match &r.verdict {
            Verdict::Holds => format!("n={} holds", r.n),
            Verdict::Fails { witness } => format!("n={} fails, witness {witness}", r.n),
            Verdict::Skipped { reason } => format!("n={} skipped: {reason}", r.n),
        };
        out.push_str(&with_time(line, r.elapsed_ms));
    }
    let summary = match (report.first_failure(), report.verified_up_to()) {
        (Some((n, w)), _) => format!("fails at n={n}, witness {w}"),
        (None, _) if report.any_skipped() => "no failure found; some orders skipped".to_string(),
        (None, Some(n)) => format!("holds, verified up to n={n}"),
        (None, None) => "nothing checked".to_string(),
    };
    out.push_str(&summary);
    out.push('\n');
    out
}

fn suite_text(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    for r in results {
        let status = match r.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
            CheckStatus::Inconclusive => "OPEN",
        };
        let mut line = format!("{status} {}", r.name);
        if let Some(first) = r.counterexamples.first() {
            line.push_str(&format!("  counterexample {first}"));
        }
        out.push_str(&with_time(line, r.elapsed_ms));
    }
    let count = |s: CheckStatus| results.iter().filter(|r| r.status == s).count();
    out.push_str(&format!(
        "{} passed, {} failed, {} skipped, {} inconclusive\n",
        count(CheckStatus::Pass),
        count(CheckStatus::Fail),
        count(CheckStatus::Skipped),
        count(CheckStatus::Inconclusive)
    ));
    out
}
