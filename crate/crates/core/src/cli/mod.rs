//! Command-line front end: argument handling, base loading and JSON reports.
//!
//! Exit codes: 0 success, 1 validation or domain error, 2 usage error.

pub mod parse;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::charclass::{KEBase, Provenance};
use crate::error::{Error, Result};
use crate::exact::{format_rational, to_decimal, LinearSolution, Rational};
use crate::family::{
    conjecture_coefficients, family_mu, family_partition_invariant, independence, leading_term_check,
};
use crate::invariants::{
    burns_epstein, complete_intersection_base, decompose_invariant, ensure_valid, invariant_of_polynomial,
    invariant_via_decomposition, partition_invariant, validate_base, Decomposition,
};
use crate::symfunc::{partitions, Partition};

pub use parse::{parse_expr, parse_invariant_poly, ExprAst, ParseError};

pub const SCHEMA: &str = "chern-cr/1";

#[derive(Debug, Parser)]
#[command(name = "chern-cr", version, about = "Exact CR invariants of Sasakian eta-Einstein circle bundles")]
struct Cli {
    /// Also render every rational as an approximate decimal with this many digits.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct BaseArgs {
    /// Complete intersection in CP^{2n} with hypersurface degrees d1,d2,…,dn.
    #[arg(long, value_name = "D1,D2,...")]
    ci: Option<String>,

    /// Characteristic-number table in JSON.
    #[arg(long, value_name = "FILE")]
    base: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// I_Phi for an invariant polynomial, or I_sigma for a partition, on one base.
    Compute {
        #[command(flatten)]
        base: BaseArgs,
        /// Invariant polynomial in c1.. / ch1..; `-` reads stdin.
        #[arg(long, conflicts_with = "partition", required_unless_present = "partition")]
        poly: Option<String>,
        /// Partition as a comma-separated tuple, e.g. 1,1,0.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Burns-Epstein invariant of the circle bundle.
    Mu {
        #[command(flatten)]
        base: BaseArgs,
    },
    /// Split Phi into ch1*Phi~ + sum C_sigma Phi_sigma.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: String,
    },
    /// Family invariants over all complete intersections as polynomials in power sums.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "mu")]
        partition: Option<String>,
        #[arg(long)]
        mu: bool,
    },
    /// Check the top-degree part of each family invariant.
    LeadingCheck {
        #[arg(long)]
        n: usize,
    },
    /// Transition-matrix determinant and family coefficient rank.
    Independence {
        #[arg(long)]
        n: usize,
    },
    /// Solve mu = sum C_sigma I_sigma over the complete-intersection family.
    Conjecture {
        #[arg(long)]
        n: usize,
    },
    /// Check a base for completeness and the Einstein condition.
    Validate {
        #[command(flatten)]
        base: BaseArgs,
    },
}

struct Output {
    report: Value,
    ok: bool,
}

struct Context<'a> {
    decimal: Option<usize>,
    stdin: &'a mut dyn Read,
    approx: Map<String, Value>,
}

impl Context<'_> {
    /// Serializes a rational and records its decimal rendering when requested.
    fn rational(&mut self, label: &str, value: &Rational) -> Value {
        if let Some(digits) = self.decimal {
            self.approx.insert(label.to_string(), Value::String(to_decimal(value, digits)));
        }
        Value::String(format_rational(value))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let mut ctx = Context {
        decimal: cli.decimal,
        stdin,
        approx: Map::new(),
    };
    match execute(cli.command, &mut ctx) {
        Ok(Output { report, ok }) => {
            let mut top = Map::new();
            top.insert("schema".into(), Value::String(SCHEMA.into()));
            if let Value::Object(fields) = report {
                top.extend(fields);
            }
            if let Some(digits) = ctx.decimal {
                top.insert(
                    "approximate".into(),
                    json!({ "note": format!("decimal approximations, {digits} digits"), "values": ctx.approx }),
                );
            }
            let text = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
            let _ = writeln!(stdout, "{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn load_base(args: &BaseArgs) -> Result<(KEBase, Value)> {
    if let Some(ci) = &args.ci {
        let d = ci
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::NonPositiveDegree)?;
        let base = complete_intersection_base(d.len(), &d)?;
        let info = json!({ "source": "complete-intersection", "d": d });
        Ok((base, info))
    } else {
        let path = args.base.as_ref().expect("clap enforces one base source");
        let base = KEBase::from_json(&std::fs::read_to_string(path)?)?;
        let info = json!({ "source": "file", "path": path.display().to_string() });
        Ok((base, info))
    }
}

fn describe_base(ctx: &mut Context<'_>, base: &KEBase, mut info: Value) -> Value {
    let lambda = ctx.rational("lambda", &base.lambda);
    let fields = info.as_object_mut().expect("base info is an object");
    fields.insert("n".into(), json!(base.n));
    fields.insert("lambda".into(), lambda);
    let warnings: Vec<String> = base.warnings().iter().map(ToString::to_string).collect();
    fields.insert("warnings".into(), json!(warnings));
    info
}

fn read_poly_arg(ctx: &mut Context<'_>, text: &str) -> Result<String> {
    if text == "-" {
        let mut buf = String::new();
        ctx.stdin.read_to_string(&mut buf)?;
        Ok(buf.trim().to_string())
    } else {
        Ok(text.to_string())
    }
}

fn partition_map(
    ctx: &mut Context<'_>,
    prefix: &str,
    entries: &[(Partition, Rational)],
) -> Map<String, Value> {
    entries
        .iter()
        .map(|(p, c)| {
            let key = p.to_string();
            let value = ctx.rational(&format!("{prefix}[{key}]"), c);
            (key, value)
        })
        .collect()
}

fn decomposition_json(ctx: &mut Context<'_>, dec: &Decomposition) -> Value {
    json!({
        "coefficients": partition_map(ctx, "C", &dec.coefficients),
        "remainder": dec.remainder.to_string(),
    })
}

fn execute(command: Command, ctx: &mut Context<'_>) -> Result<Output> {
    match command {
        Command::Compute { base, poly, partition } => {
            let (base, info) = load_base(&base)?;
            ensure_valid(&base)?;
            let base_json = describe_base(ctx, &base, info);
            if let Some(text) = partition {
                let sigma: Partition = text.parse()?;
                let value = partition_invariant(&base, &sigma)?;
                let value_json = ctx.rational("I", &value);
                return Ok(Output {
                    report: json!({
                        "command": "compute",
                        "base": base_json,
                        "partition": sigma.to_string(),
                        "I": value_json,
                    }),
                    ok: true,
                });
            }
            let text = read_poly_arg(ctx, poly.as_deref().expect("clap requires --poly or --partition"))?;
            let phi = parse_invariant_poly(&text, base.n)?;
            let direct = invariant_of_polynomial(&base, &phi)?;
            let decomposed = invariant_via_decomposition(&base, &phi)?;
            let dec = decompose_invariant(&phi)?;
            let routes_agree = direct == decomposed;
            let mut report = json!({
                "command": "compute",
                "base": base_json,
                "poly": phi.to_string(),
                "I": ctx.rational("I", &direct),
                "decomposition": decomposition_json(ctx, &dec),
                "routes_agree": routes_agree,
            });
            if !routes_agree {
                report["I_decomposed"] = ctx.rational("I_decomposed", &decomposed);
            }
            Ok(Output { report, ok: routes_agree })
        }
        Command::Mu { base } => {
            let (base, info) = load_base(&base)?;
            ensure_valid(&base)?;
            let base_json = describe_base(ctx, &base, info);
            let mu = burns_epstein(&base)?;
            Ok(Output {
                report: json!({ "command": "mu", "base": base_json, "mu": ctx.rational("mu", &mu) }),
                ok: true,
            })
        }
        Command::Decompose { n, poly } => {
            let text = read_poly_arg(ctx, &poly)?;
            let phi = parse_invariant_poly(&text, n)?;
            let dec = decompose_invariant(&phi)?;
            Ok(Output {
                report: json!({
                    "command": "decompose",
                    "n": n,
                    "poly": phi.to_string(),
                    "decomposition": decomposition_json(ctx, &dec),
                    "ch1_multiple": dec.is_ch1_multiple(),
                }),
                ok: true,
            })
        }
        Command::Family { n, partition, mu } => {
            let mut invariants = Map::new();
            let selected: Vec<Partition> = match (&partition, mu) {
                (Some(text), _) => vec![text.parse()?],
                (None, true) => Vec::new(),
                (None, false) => partitions(n)?,
            };
            for sigma in &selected {
                let f = family_partition_invariant(n, sigma)?;
                invariants.insert(sigma.to_string(), Value::String(f.q.to_string()));
            }
            let mut report = json!({
                "command": "family",
                "n": n,
                "factor": "E = d1*...*dn",
                "invariants": invariants,
            });
            if partition.is_none() {
                report["mu"] = Value::String(family_mu(n)?.q.to_string());
            }
            Ok(Output { report, ok: true })
        }
        Command::LeadingCheck { n } => {
            let report = leading_term_check(n)?;
            let entries: Vec<Value> = report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "partition": e.partition.to_string(),
                        "top_part": e.top_part.to_string(),
                        "expected": e.expected.to_string(),
                        "pass": e.pass,
                    })
                })
                .collect();
            let pass = report.all_pass();
            Ok(Output {
                report: json!({ "command": "leading-check", "n": n, "pass": pass, "entries": entries }),
                ok: pass,
            })
        }
        Command::Independence { n } => {
            let report = independence(n)?;
            let holds = report.holds();
            Ok(Output {
                report: json!({
                    "command": "independence",
                    "n": n,
                    "partitions": report.partition_count,
                    "transition_determinant": ctx.rational("transition_determinant", &report.transition_determinant),
                    "family_rank": report.family_rank,
                    "independent": holds,
                }),
                ok: holds,
            })
        }
        Command::Conjecture { n } => {
            let report = conjecture_coefficients(n)?;
            let status = match report.solution {
                LinearSolution::Unique(_) => "unique",
                LinearSolution::NoSolution => "no-solution",
                LinearSolution::NonUnique => "non-unique",
            };
            let coefficients = report
                .coefficients
                .as_ref()
                .map(|c| Value::Object(partition_map(ctx, "C", c)))
                .unwrap_or(Value::Null);
            let reference = report
                .reference
                .as_ref()
                .map(|r| Value::Object(r.iter().map(|(p, c)| (p.to_string(), json!(format_rational(c)))).collect()))
                .unwrap_or(Value::Null);
            let matches = report.matches_reference();
            let verification = match matches {
                Some(true) => "matches-reference",
                Some(false) => "differs-from-reference",
                None => "derived-unverified",
            };
            Ok(Output {
                report: json!({
                    "command": "conjecture",
                    "n": n,
                    "status": status,
                    "coefficients": coefficients,
                    "reference": reference,
                    "verification": verification,
                }),
                ok: status == "unique" && matches != Some(false),
            })
        }
        Command::Validate { base } => {
            let (base, info) = load_base(&base)?;
            let violations = validate_base(&base);
            let base_json = describe_base(ctx, &base, info);
            let valid = violations.is_empty();
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            let provenance = match &base.provenance {
                Provenance::CompleteIntersection(_) => "complete-intersection",
                Provenance::Custom => "custom",
            };
            Ok(Output {
                report: json!({
                    "command": "validate",
                    "base": base_json,
                    "provenance": provenance,
                    "valid": valid,
                    "violations": list,
                    "table": base.to_json(),
                }),
                ok: valid,
            })
        }
    }
}
