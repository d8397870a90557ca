//! JSON-in/JSON-out command-line front end.
//!
//! Every number crosses this boundary as a decimal string. Exit codes are
//! `0` on success, `2` for malformed input and `3` for well-formed input the
//! operation rejects (for example too few terms to infer a recurrence).

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::coring::{coproduct, hankel_det, hankel_rank, is_integral_coproduct};
use crate::exactla::{format_rational, parse_rational, Rational};
use crate::pointcount::{
    brute_force_count, closure_motive, counting_polynomial, kurokawa_zeta, manin_motive,
    CountError, CountMode, CountReport, CountingPolynomial, Kind, ZetaExpr,
};
use crate::seqcore::{infer_recurrence, LinRecSequence, SeqError};
use crate::systems::{realize, LinearSystem, SystemError};

/// Upper bound on term counts, indices and truncations accepted from the
/// command line.
pub const TERM_CAP: usize = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "biring",
    version,
    about = "Exact linear recursive sequences, their bi-ring structure, and control-system moduli"
)]
pub struct Cli {
    /// Output format; `text` prints one `path: value` line per JSON leaf.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Where JSON input comes from: `--spec` files and `--inline` documents
/// (both repeatable, files first) or, when neither is given, one or more
/// JSON documents on stdin.
#[derive(Debug, Args, Clone, Default)]
pub struct Input {
    #[arg(long = "spec", value_name = "PATH")]
    pub spec: Vec<PathBuf>,
    #[arg(long = "inline", value_name = "JSON")]
    pub inline: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal recurrence fitting the given terms. The result is a claim
    /// about the prefix only; at least 2r+1 terms are needed for order r.
    Infer {
        /// Comma-separated terms; without it a `prefix` output document is read.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        terms: Option<Vec<String>>,
        #[command(flatten)]
        input: Input,
    },
    /// The n-th term of a sequence.
    Term {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The first n terms of a sequence.
    Prefix {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Termwise sum of two sequences.
    Add {
        #[command(flatten)]
        input: Input,
    },
    /// Termwise (Hadamard) product of two sequences.
    Hadamard {
        #[command(flatten)]
        input: Input,
    },
    /// The shifted sequence n ↦ f_{n+i}.
    Shift {
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The subsampled sequence m ↦ f_{n·m}.
    Psi {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Hankel coproduct with integrality data.
    Coproduct {
        #[command(flatten)]
        input: Input,
    },
    /// Whether the coproduct has integer coefficients (Hankel determinant ±1).
    Integrality {
        #[command(flatten)]
        input: Input,
    },
    /// Canonical system realizing a nonzero sequence.
    Realize {
        #[command(flatten)]
        input: Input,
    },
    /// Markov parameters C Aⁱ B of a system (default 2n+1 of them).
    Markov {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Grassmannian point of a controllable or observable system.
    Grassmann {
        #[command(flatten)]
        input: Input,
    },
    /// The transposed system (Aᵗ, Cᵗ, Bᵗ).
    Transpose {
        #[command(flatten)]
        input: Input,
    },
    /// Orbit counts of cc/co/canonical/union systems over 𝔽_p.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = ModeArg::Brute)]
        mode: ModeArg,
        /// Permit enumerations larger than |V_2(𝔽_3)|.
        #[arg(long)]
        allow_large: bool,
    },
    /// Kurokawa zeta function of a counting polynomial.
    Zeta {
        #[command(flatten)]
        poly: PolySource,
    },
    /// Manin motive of a counting polynomial, or the truncated closure motive.
    Motive {
        #[command(flatten)]
        poly: PolySource,
        /// Use the closure motive Π_{k≤K} (s−k)/2π.
        #[arg(long, requires = "truncate", conflicts_with_all = ["kind", "poly"])]
        closure: bool,
        #[arg(long, requires = "closure")]
        truncate: Option<usize>,
    },
}

#[derive(Debug, Args, Clone)]
pub struct PolySource {
    #[arg(long, value_parser = parse_kind, requires = "n", conflicts_with = "poly")]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Ascending integer coefficients a_0,a_1,….
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Brute,
    Closed,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

#[derive(Debug)]
pub enum CliError {
    BadInput(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => EXIT_BAD_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::BadInput(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<SeqError> for CliError {
    fn from(e: SeqError) -> Self {
        match e {
            SeqError::InsufficientTerms { .. } => CliError::Domain(e.to_string()),
            SeqError::LengthMismatch { .. } | SeqError::PsiIndexZero => {
                CliError::BadInput(e.to_string())
            }
        }
    }
}

impl From<SystemError> for CliError {
    fn from(e: SystemError) -> Self {
        match e {
            SystemError::Dimension { .. } | SystemError::EmptyState => {
                CliError::BadInput(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::ZeroDimension | CountError::FieldTooSmall(_) => {
                CliError::BadInput(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn capped(name: &str, value: usize) -> Result<usize, CliError> {
    if value > TERM_CAP {
        return Err(CliError::BadInput(format!(
            "--{name} {value} exceeds the cap of {TERM_CAP}"
        )));
    }
    Ok(value)
}

fn read_documents(input: &Input, stdin: &mut dyn Read) -> Result<Vec<Value>, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::BadInput(e.to_string());
    if !input.spec.is_empty() || !input.inline.is_empty() {
        let files = input.spec.iter().map(|path| {
            let text =
                fs::read_to_string(path).map_err(|e| bad(&format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| bad(&format!("{}: {e}", path.display())))
        });
        let inline = input
            .inline
            .iter()
            .map(|text| serde_json::from_str(text).map_err(|e| bad(&format!("--inline: {e}"))));
        return files.chain(inline).collect();
    }
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(|e| bad(&e))?;
    let docs = serde_json::Deserializer::from_str(&text)
        .into_iter::<Value>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| bad(&e))?;
    // A single top-level array is a list of documents.
    match docs.as_slice() {
        [Value::Array(items)] => Ok(items.clone()),
        _ => Ok(docs),
    }
}

fn read_exactly<T: DeserializeOwned>(
    input: &Input,
    stdin: &mut dyn Read,
    count: usize,
) -> Result<Vec<T>, CliError> {
    let docs = read_documents(input, stdin)?;
    if docs.len() != count {
        return Err(CliError::BadInput(format!(
            "expected {count} input document(s), got {}",
            docs.len()
        )));
    }
    docs.into_iter()
        .map(|v| serde_json::from_value(v).map_err(|e| CliError::BadInput(e.to_string())))
        .collect()
}

fn read_one<T: DeserializeOwned>(input: &Input, stdin: &mut dyn Read) -> Result<T, CliError> {
    Ok(read_exactly(input, stdin, 1)?.pop().expect("one document"))
}

fn parse_rationals(items: &[String]) -> Result<Vec<Rational>, CliError> {
    items
        .iter()
        .map(|s| parse_rational(s).map_err(|e| CliError::BadInput(e.to_string())))
        .collect()
}

/// Terms from a `prefix` output document or a bare JSON array of terms.
fn prefix_terms(docs: Vec<Value>) -> Result<Vec<Rational>, CliError> {
    let items = match docs.as_slice() {
        [Value::Object(map)] => match map.get("terms") {
            Some(Value::Array(items)) => items.clone(),
            _ => return Err(CliError::BadInput("expected a `terms` array".into())),
        },
        [Value::Array(items)] => items.clone(),
        _ => docs,
    };
    let strings = items
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
            other => Err(CliError::BadInput(format!("invalid term {other}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    parse_rationals(&strings)
}

fn parse_poly(items: &[String]) -> Result<CountingPolynomial, CliError> {
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::BadInput(format!("invalid integer coefficient `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CountingPolynomial::new)
}

fn poly_from(source: &PolySource) -> Result<CountingPolynomial, CliError> {
    match (&source.poly, source.kind, source.n) {
        (Some(items), None, _) => parse_poly(items),
        (None, Some(kind), Some(n)) => Ok(counting_polynomial(kind, n)?),
        _ => Err(CliError::BadInput(
            "give either --poly or --kind with --n".into(),
        )),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn strings(v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| Value::String(format_rational(x)))
            .collect(),
    )
}

fn zeta_value(z: &ZetaExpr) -> Value {
    to_value(z)
}

/// Executes one parsed command and returns its JSON result.
pub fn execute(command: &Command, stdin: &mut dyn Read) -> Result<Value, CliError> {
    match command {
        Command::Infer { terms, input } => {
            let terms = match terms {
                Some(terms) => parse_rationals(terms)?,
                None => prefix_terms(read_documents(input, stdin)?)?,
            };
            Ok(to_value(&infer_recurrence(&terms)?))
        }
        Command::Term { n, input } => {
            let n = capped("n", *n)?;
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(json!({ "n": n.to_string(), "term": format_rational(&f.term(n)) }))
        }
        Command::Prefix { n, input } => {
            let n = capped("n", *n)?;
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(json!({ "terms": strings(&f.prefix(n).terms) }))
        }
        Command::Add { input } | Command::Hadamard { input } => {
            let pair: Vec<LinRecSequence> = read_exactly(input, stdin, 2)?;
            let out = if matches!(command, Command::Add { .. }) {
                pair[0].add(&pair[1])
            } else {
                pair[0].hadamard(&pair[1])
            };
            Ok(to_value(&out))
        }
        Command::Shift { i, input } => {
            let i = capped("i", *i)?;
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(to_value(&f.shift(i).minimize()))
        }
        Command::Psi { n, input } => {
            let n = capped("n", *n)?;
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(to_value(&f.psi(n)?))
        }
        Command::Coproduct { input } => {
            let f: LinRecSequence = read_one(input, stdin)?;
            let mut out = to_value(&coproduct(&f));
            let obj = out.as_object_mut().expect("tensor is an object");
            obj.insert("integral".into(), Value::Bool(is_integral_coproduct(&f)));
            obj.insert(
                "hankel_det".into(),
                Value::String(format_rational(&hankel_det(&f))),
            );
            obj.insert(
                "hankel_rank".into(),
                Value::String(hankel_rank(&f).to_string()),
            );
            Ok(out)
        }
        Command::Integrality { input } => {
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(json!({
                "integral": is_integral_coproduct(&f),
                "hankel_det": format_rational(&hankel_det(&f)),
                "hankel_rank": hankel_rank(&f).to_string(),
            }))
        }
        Command::Realize { input } => {
            let f: LinRecSequence = read_one(input, stdin)?;
            Ok(to_value(&realize(&f)?))
        }
        Command::Markov { n, input } => {
            let system: LinearSystem = read_one(input, stdin)?;
            let count = capped("n", n.unwrap_or(2 * system.state_dim() + 1))?;
            Ok(json!({
                "terms": strings(&system.markov(count).terms),
                "sequence": to_value(&system.markov_sequence()),
            }))
        }
        Command::Grassmann { input } => {
            let system: LinearSystem = read_one(input, stdin)?;
            Ok(to_value(&system.grassmann_embed()?))
        }
        Command::Transpose { input } => {
            let system: LinearSystem = read_one(input, stdin)?;
            Ok(to_value(&system.transpose()))
        }
        Command::Count {
            n,
            p,
            kind,
            mode,
            allow_large,
        } => {
            let report: CountReport = match mode {
                ModeArg::Brute => brute_force_count(*n, *p, *kind, *allow_large)?,
                ModeArg::Closed => CountReport::closed(*n, *p, *kind)?,
            };
            debug_assert_eq!(report.mode == CountMode::Brute, *mode == ModeArg::Brute);
            Ok(to_value(&report))
        }
        Command::Zeta { poly } => Ok(zeta_value(&kurokawa_zeta(&poly_from(poly)?)?)),
        Command::Motive {
            poly,
            closure,
            truncate,
        } => {
            if *closure {
                let k = capped("truncate", truncate.expect("clap enforces --truncate"))?;
                Ok(zeta_value(&closure_motive(k as u64)))
            } else {
                Ok(zeta_value(&manin_motive(&poly_from(poly)?)?))
            }
        }
    }
}

/// One `path: value` line per leaf; arrays of scalars share a line.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    text_lines("", value, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Null => Some("null".into()),
        _ => None,
    }
}

fn text_lines(path: &str, value: &Value, out: &mut String) {
    let join = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                text_lines(&join(k), v, out);
            }
        }
        Value::Array(items) if items.is_empty() => out.push_str(&format!("{path}: []\n")),
        Value::Array(items) => {
            if let Some(flat) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{path}: {}\n", flat.join(" ")));
            } else {
                for (i, v) in items.iter().enumerate() {
                    text_lines(&format!("{path}[{i}]"), v, out);
                }
            }
        }
        leaf => out.push_str(&format!("{path}: {}\n", scalar(leaf).expect("leaf"))),
    }
}

pub fn format_output(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(value),
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        execute(&cli.command, stdin)
    }))
    .unwrap_or_else(|_| Err(CliError::Domain("internal error".into())));
    match result {
        Ok(value) => {
            let _ = stdout.write_all(format_output(&value, cli.format).as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}
