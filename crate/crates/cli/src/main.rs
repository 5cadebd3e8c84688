//! `hyperid`: evaluate a single series, verify catalog identities, list the
//! catalog.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hyperid_core::harness::{run_suite, OutputFormat, SuiteConfig};
use hyperid_core::identities::catalog;
use hyperid_core::qseries::{sum_q_series, QContext, QSeriesSpec};
use hyperid_core::series::{sum_series, SeriesResult, SeriesSpec};
use hyperid_core::{ComplexValue, Error, PrecisionContext};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperid", version, about = "Extended-precision hypergeometric and q-series evaluation and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one series.
    #[command(subcommand)]
    Eval(EvalKind),
    /// Verify catalog identities on seeded random samples.
    Verify(VerifyArgs),
    /// List the identity catalog.
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum EvalKind {
    /// Unilateral series 1+r F s.
    Pfq(SeriesArgs),
    /// Bilateral series r H r.
    Hseries(SeriesArgs),
    /// Basic series r phi s.
    Phi(QArgs),
    /// Bilateral basic series r psi r.
    Psi(QArgs),
}

#[derive(Args)]
struct Precision {
    /// Significant decimal digits of the result.
    #[arg(long, env = "HYPERID_DIGITS", default_value_t = 30)]
    digits: u32,
    /// Term budget per series.
    #[arg(long)]
    max_terms: Option<u64>,
}

impl Precision {
    fn context(&self) -> Result<PrecisionContext, Error> {
        let ctx = PrecisionContext::new(self.digits)?;
        match self.max_terms {
            Some(m) => ctx.with_max_terms(m),
            None => Ok(ctx),
        }
    }
}

#[derive(Args)]
struct SeriesArgs {
    /// Comma-separated upper parameters (`RE` or `RE+IMi`).
    #[arg(long, allow_hyphen_values = true)]
    upper: String,
    /// Comma-separated lower parameters; may be empty.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    lower: String,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[command(flatten)]
    precision: Precision,
}

#[derive(Args)]
struct QArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity IDs, comma-separated or repeated; `all` for the catalog.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    identity: Vec<String>,
    #[arg(long, default_value_t = 20)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    precision: Precision,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_config() { EXIT_USAGE } else { EXIT_FAILURE };
        Failure { code, message: e.to_string() }
    }
}

fn usage(e: Error) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

fn parse_list(text: &str, prec: u32) -> Result<Vec<ComplexValue>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| ComplexValue::parse(s, prec).map_err(usage))
        .collect()
}

fn print_result(r: &SeriesResult, digits: u32) {
    println!("value: {}", r.value.to_decimal(digits as usize));
    println!("err_estimate: {:.3e}", r.err_estimate);
    println!("terms_used: {}", r.terms_used);
    println!("method: {}", r.method.as_str());
}

fn eval(kind: &EvalKind) -> Result<(), Failure> {
    let (series, q) = match kind {
        EvalKind::Pfq(s) | EvalKind::Hseries(s) => (s, None),
        EvalKind::Phi(a) | EvalKind::Psi(a) => (&a.series, Some(&a.q)),
    };
    let ctx = series.precision.context().map_err(usage)?;
    let prec = ctx.bits();
    let uppers = parse_list(&series.upper, prec)?;
    let lowers = parse_list(&series.lower, prec)?;
    let z = ComplexValue::parse(&series.z, prec).map_err(usage)?;
    let result = match kind {
        EvalKind::Pfq(_) => sum_series(&SeriesSpec::unilateral(uppers, lowers, z)?, &ctx)?,
        EvalKind::Hseries(_) => sum_series(&SeriesSpec::bilateral(uppers, lowers, z)?, &ctx)?,
        EvalKind::Phi(_) | EvalKind::Psi(_) => {
            let q = ComplexValue::parse(q.expect("q argument"), prec).map_err(usage)?;
            let qc = QContext::new(q, ctx)?;
            let spec = if matches!(kind, EvalKind::Phi(_)) {
                QSeriesSpec::phi(uppers, lowers, z)?
            } else {
                QSeriesSpec::psi(uppers, lowers, z)?
            };
            sum_q_series(&spec, &qc)?
        }
    };
    print_result(&result, ctx.digits);
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let config = SuiteConfig {
        identities: args.identity.clone(),
        samples: args.samples,
        seed: args.seed,
        digits: args.precision.digits,
        format: if args.json { OutputFormat::Json } else { OutputFormat::Text },
        max_terms: args.precision.max_terms,
    };
    let report = run_suite(&config).map_err(usage)?;
    let mut text = report.render(config.format);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => emit(&text),
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILURE,
            message: format!("{} of {} samples failed", report.summary.failed, report.summary.total),
        })
    }
}

fn list(as_json: bool) {
    let cases = catalog();
    if as_json {
        let entries: Vec<_> = cases
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "title": c.title,
                    "formula": c.formula,
                    "schema": c.schema,
                    "constraints": c.constraints.iter().map(|k| k.text).collect::<Vec<_>>(),
                    "ranges": c.ranges,
                })
            })
            .collect();
        emit(&format!("{}\n", serde_json::to_string_pretty(&entries).expect("catalog serializes")));
        return;
    }
    let mut text = String::new();
    for c in &cases {
        let schema: Vec<String> = c.schema.iter().map(|p| format!("{}:{:?}", p.name, p.kind).to_lowercase()).collect();
        text += &format!("{}  {}\n", c.id, c.title);
        text += &format!("  params:      {}\n", schema.join(", "));
        text += &format!("  identity:    {}\n", c.formula);
        for k in c.constraints {
            text += &format!("  constraint:  {}\n", k.text);
        }
        text += &format!("  sampling:    {}\n\n", c.ranges);
    }
    emit(&text);
}

/// Writes to stdout, tolerating a reader that has gone away.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(kind) => eval(kind),
        Command::Verify(args) => verify(args),
        Command::List { json } => {
            list(*json);
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
