//! Command dispatch for the `pellgroup` binary.
//!
//! [`run`] never prints and never exits; `main` does both.

use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use pellgroup::classgroup::{certify_order_two, class_number, f_m_image, reduced_forms, represents};
use pellgroup::intkernel::FactorConfig;
use pellgroup::lambdasieve::{lambda_primes, lemma32_primes, triple_from_prime};
use pellgroup::pell::{cf_sqrt, convergents, least_pell};
use pellgroup::scan::{reproduce_table, scan_certified, CandidateRecord};
use pellgroup::triplegroup::{add, neg, normalize, order, scalar_mul, GroupContext, PrimitiveTriple, RawTriple};
use pellgroup::Error;

pub const TIMEOUT_ENV: &str = "PELLGROUP_FACTOR_TIMEOUT_MS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Invalid,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Invalid => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    None,
    Document(Value),
    Lines(Vec<Value>),
    Text(String),
}

impl Payload {
    /// Exactly what goes to stdout.
    pub fn render(&self) -> String {
        match self {
            Payload::None => String::new(),
            Payload::Document(v) => format!("{v}\n"),
            Payload::Lines(vs) => vs.iter().map(|v| format!("{v}\n")).collect(),
            Payload::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Payload,
    pub diagnostics: String,
}

impl CommandResult {
    fn ok(payload: Payload) -> Self {
        CommandResult {
            status: Status::Ok,
            payload,
            diagnostics: String::new(),
        }
    }

    fn failed(err: &Error) -> Self {
        let status = match err {
            Error::InvalidArgument(_) | Error::NotEligible(_) | Error::CertificateRefused(_) => Status::Invalid,
            _ => Status::Error,
        };
        CommandResult {
            status,
            payload: Payload::None,
            diagnostics: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

#[derive(Debug, Parser)]
#[command(name = "pellgroup", version, about = "Pell groups, class maps and order-2 certificates")]
struct Cli {
    /// Time budget for a single integer factorization.
    #[arg(long, global = true, env = TIMEOUT_ENV, value_name = "MS")]
    timeout_factor_ms: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Least solutions of X^2 - mY^2 = 1 and -1.
    Pell {
        m: BigInt,
        #[arg(long)]
        power: Option<u64>,
    },
    /// Continued fraction of sqrt(m).
    Cf {
        m: BigInt,
        #[arg(long, default_value_t = 0)]
        convergents: usize,
    },
    /// Arithmetic on primitive triples x,y,z with x^2 + my^2 = z^2.
    Group {
        op: GroupOp,
        m: BigInt,
        #[arg(required = true, allow_hyphen_values = true)]
        triples: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<BigInt>,
    },
    /// Primes of Lambda_m, one JSON object per line.
    Lambda {
        m: BigInt,
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = Criterion::Direct)]
        criterion: Criterion,
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Class group of Q(sqrt(-m)) and the map of triples into it.
    Class(ClassArgs),
    /// Order-2 certificates.
    Torsion {
        #[command(subcommand)]
        action: TorsionAction,
    },
    /// Search along the sqrt(2) convergents.
    Scan {
        #[command(subcommand)]
        action: ScanAction,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupOp {
    Add,
    Neg,
    Mul,
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Criterion {
    Direct,
    Lemma32,
}

#[derive(Debug, Args)]
struct ClassArgs {
    m: BigInt,
    #[arg(long, group = "mode")]
    number: bool,
    #[arg(long, group = "mode", value_name = "x,y,z", allow_hyphen_values = true)]
    map: Option<String>,
    #[arg(long, group = "mode", value_name = "c")]
    represents: Option<BigInt>,
}

#[derive(Debug, Subcommand)]
enum TorsionAction {
    Certify {
        m: BigInt,
        #[arg(allow_hyphen_values = true)]
        triple: String,
    },
}

#[derive(Debug, Subcommand)]
enum ScanAction {
    /// Certified rows with m > c.
    Table {
        #[arg(long)]
        max_s: u64,
    },
    /// Every candidate, certified or not.
    Candidates {
        #[arg(long)]
        max_s: u64,
    },
}

/// Parses and executes one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::ok(Payload::Text(text)),
                _ => CommandResult {
                    status: Status::Invalid,
                    payload: Payload::None,
                    diagnostics: text,
                },
            };
        }
    };
    let cfg = match cli.timeout_factor_ms {
        Some(ms) => FactorConfig {
            timeout: Duration::from_millis(ms),
        },
        None => FactorConfig::default(),
    };
    match dispatch(cli.command, &cfg) {
        Ok(p) => CommandResult::ok(p),
        Err(e) => CommandResult::failed(&e),
    }
}

fn s(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn parse_triple(ctx: &GroupContext, text: &str) -> pellgroup::Result<PrimitiveTriple> {
    let RawTriple(x, y, z) = text.parse()?;
    normalize(ctx, &x, &y, &z)
}

/// The triple list accepts leading hyphens (`-1,4,9`), so a trailing
/// `--k K` ends up inside it.
fn trailing_k(mut triples: Vec<String>, k: Option<BigInt>) -> pellgroup::Result<(Vec<String>, Option<BigInt>)> {
    let Some(pos) = triples.iter().position(|t| t == "--k" || t.starts_with("--k=")) else {
        return Ok((triples, k));
    };
    let rest = triples.split_off(pos);
    let value = match rest[0].strip_prefix("--k=") {
        Some(v) if rest.len() == 1 => v.to_string(),
        None if rest.len() == 2 => rest[1].clone(),
        _ => return Err(Error::InvalidArgument(format!("unexpected arguments {rest:?}"))),
    };
    if k.is_some() {
        return Err(Error::InvalidArgument("--k given twice".into()));
    }
    let k = value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{value:?} is not an integer")))?;
    Ok((triples, Some(k)))
}

fn dispatch(command: Command, cfg: &FactorConfig) -> pellgroup::Result<Payload> {
    match command {
        Command::Pell { m, power } => {
            let fund = least_pell(&m)?;
            let doc = match power {
                Some(0) => return Err(Error::InvalidArgument("--power must be >= 1".into())),
                Some(n) => {
                    let (a, b) = fund.power(n);
                    json!({ "n": n.to_string(), "a": s(&a), "b": s(&b) })
                }
                None => {
                    let negative = match &fund.negative_fundamental {
                        Some((x, y)) => json!({ "a": s(x), "b": s(y) }),
                        None => Value::Null,
                    };
                    json!({ "a": s(&fund.a), "b": s(&fund.b), "negative": negative })
                }
            };
            Ok(Payload::Document(doc))
        }
        Command::Cf { m, convergents: count } => {
            let cf = cf_sqrt(&m)?;
            let period: Vec<Value> = cf.period.iter().map(s).collect();
            let mut doc = json!({ "m": s(&cf.m), "u0": s(&cf.u0), "period": period });
            if count > 0 {
                let cs: Vec<Value> = convergents(&cf, count)
                    .iter()
                    .map(|c| json!({ "i": c.i.to_string(), "h": s(&c.h), "k": s(&c.k) }))
                    .collect();
                doc["convergents"] = Value::Array(cs);
            }
            Ok(Payload::Document(doc))
        }
        Command::Group { op, m, triples, k } => {
            let (triples, k) = trailing_k(triples, k)?;
            let ctx = GroupContext::with_config(&m, cfg)?;
            let ts = triples
                .iter()
                .map(|t| parse_triple(&ctx, t))
                .collect::<pellgroup::Result<Vec<_>>>()?;
            let arity = |want: usize| {
                if ts.len() == want {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!(
                        "expected {want} triple(s), got {}",
                        ts.len()
                    )))
                }
            };
            let doc = match op {
                GroupOp::Add => {
                    if ts.len() < 2 {
                        return Err(Error::InvalidArgument("add needs at least two triples".into()));
                    }
                    let sum = ts[1..].iter().fold(ts[0].clone(), |acc, t| add(&ctx, &acc, t));
                    json!({ "triple": to_value(&sum) })
                }
                GroupOp::Neg => {
                    arity(1)?;
                    json!({ "triple": to_value(&neg(&ctx, &ts[0])) })
                }
                GroupOp::Mul => {
                    arity(1)?;
                    let k = k.ok_or_else(|| Error::InvalidArgument("mul needs --k".into()))?;
                    json!({ "triple": to_value(&scalar_mul(&ctx, &k, &ts[0])) })
                }
                GroupOp::Order => {
                    arity(1)?;
                    json!({ "triple": to_value(&ts[0]), "order": order(&ctx, &ts[0]).to_string() })
                }
            };
            Ok(Payload::Document(doc))
        }
        Command::Lambda {
            m,
            limit,
            criterion,
            witness,
            jobs,
        } => {
            if jobs == 0 {
                return Err(Error::InvalidArgument("--jobs must be >= 1".into()));
            }
            let ctx = GroupContext::with_config(&m, cfg)?;
            let rows: Vec<(u64, Value)> = match criterion {
                Criterion::Direct => lambda_primes(&ctx, limit, jobs)?
                    .iter()
                    .map(|v| (v.p, to_value(v)))
                    .collect(),
                Criterion::Lemma32 => lemma32_primes(&ctx, limit, jobs)?
                    .into_iter()
                    .map(|p| (p, json!({ "p": p, "criterion": "lemma32" })))
                    .collect(),
            };
            let mut lines = Vec::with_capacity(rows.len());
            for (p, mut row) in rows {
                if witness {
                    row["witness"] = to_value(&triple_from_prime(&ctx, p)?);
                }
                lines.push(row);
            }
            Ok(Payload::Lines(lines))
        }
        Command::Class(args) => {
            let m = args.m;
            let ctx = GroupContext::with_config(&m, cfg)?;
            let doc = if let Some(text) = args.map {
                let t = parse_triple(&ctx, &text)?;
                let form = f_m_image(&ctx, &t)?;
                json!({
                    "triple": to_value(&t),
                    "form": to_value(&form),
                    "principal": form.is_principal(),
                })
            } else if let Some(c) = args.represents {
                if !c.is_positive() {
                    return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
                }
                let rep = represents(&c, &m).map(|(x, y)| json!([s(&x), s(&y)]));
                json!({ "c": s(&c), "representation": rep.unwrap_or(Value::Null) })
            } else if args.number {
                json!({ "m": s(&m), "classNumber": class_number(&m).to_string() })
            } else {
                let d = pellgroup::classgroup::discriminant(&m).d;
                let forms: Vec<Value> = reduced_forms(&d).iter().map(to_value).collect();
                json!({
                    "m": s(&m),
                    "discriminant": s(&d),
                    "classNumber": forms.len().to_string(),
                    "forms": forms,
                })
            };
            Ok(Payload::Document(doc))
        }
        Command::Torsion {
            action: TorsionAction::Certify { m, triple },
        } => {
            let ctx = GroupContext::with_config(&m, cfg)?;
            let t = parse_triple(&ctx, &triple)?;
            Ok(Payload::Document(to_value(&certify_order_two(&ctx, &t)?)))
        }
        Command::Scan { action } => {
            let rows = match action {
                ScanAction::Table { max_s } => reproduce_table(max_s, cfg)?,
                ScanAction::Candidates { max_s } => scan_certified(max_s, cfg)?,
            };
            Ok(Payload::Lines(
                rows.iter().map(|r| to_value(&CandidateRecord::from(r))).collect(),
            ))
        }
    }
}
