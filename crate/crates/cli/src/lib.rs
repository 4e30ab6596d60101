//! Command-line front end: argument parsing, dispatch to the library and
//! rendering of results as JSON or CSV.
//!
//! Every run prints one result document on stdout. Numeric output depends
//! only on the command, its effective parameters, the tool version and the
//! embedded constants, all of which are echoed in the `manifest` object;
//! the wall-clock time goes to stderr so stdout stays byte-for-byte
//! reproducible.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use snumbers::density::DEFAULT_EPS;
use snumbers::verify::REPORT_DENSITY_TOLERANCE;
use snumbers::{
    audit_lemma1, constants_fingerprint, density_eq11, density_eq4, density_eq8_sum_form, density_per_prime,
    density_to_tolerance, density_zero_branch, envelope, gap_interval, verify_density, verify_powerful_asymptotic,
    DensityResult, Error, ExponentSet, FactorSieve, PerPrimeFamily, DEFAULT_SIEVE_CAP,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Residual envelope used for the powerful-number table; the asymptotic
/// statement carries no explicit constant, so this one is heuristic.
pub const POWERFUL_ENVELOPE_CONSTANT: f64 = 10.0;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "snumbers", version, about = "Count exponentially S-numbers and compute their densities")]
pub struct Cli {
    /// Largest sieve the run may allocate (one u32 per integer).
    #[arg(long, global = true, env = "EXPO_SIEVE_CAP", default_value_t = DEFAULT_SIEVE_CAP)]
    pub sieve_cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteChoice {
    Eq4,
    Eq11,
    Eq8,
    /// eq4, or the zero branch when 1 is not in S
    Auto,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Natural density of E(S) with a certified error bound.
    Density {
        set: String,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteChoice,
        #[arg(long, default_value_t = 1_000_000)]
        prime_limit: u64,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Summation limit for the eq8 route.
        #[arg(long, default_value_t = 1_000_000)]
        a_limit: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact count of E(S) up to x against the density main term.
    Count {
        set: String,
        #[arg(long)]
        x: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Density for a per-prime family of exponent sets.
    Family {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 50)]
        terms: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Count reports on a grid of x.
    Verify {
        set: String,
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        /// Write the rendered report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the explicit remainder bound for squarefree counts coprime to r.
    AuditLemma1 {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,5,6,7,10,30,210,2310")]
        rs: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000,1000000,10000000")]
        xs: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Powerful-number counts against the two-term main term.
    Powerful {
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The certified gap between densities of sets with and without 2.
    Gap {
        #[arg(long, default_value_t = 1_000_000)]
        prime_limit: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Resource(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Parse(_)) => exit::PARSE,
            CliError::Core(Error::SieveCap { .. }) | CliError::Resource(_) => exit::RESOURCE,
            CliError::Core(_) | CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Io { .. } => exit::FAILURE,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub tool_version: String,
    pub constants_fingerprint: String,
}

/// A command's result before rendering.
#[derive(Debug, Clone)]
pub struct Output {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub value: Option<Value>,
    pub error_bound: Option<f64>,
    pub rows: Vec<Value>,
    /// Command-specific summary fields placed after `rows`.
    pub extra: Map<String, Value>,
    /// CSV column order; each names a key of the row objects.
    pub columns: &'static [&'static str],
}

impl Output {
    fn new(command: &'static str, params: Map<String, Value>, columns: &'static [&'static str]) -> Self {
        Self {
            command,
            params,
            value: None,
            error_bound: None,
            rows: Vec::new(),
            extra: Map::new(),
            columns,
        }
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.to_string(),
            parameters: self.params.clone(),
            tool_version: TOOL_VERSION.to_string(),
            constants_fingerprint: constants_fingerprint(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("params".into(), Value::Object(self.params.clone()));
        if let Some(v) = &self.value {
            doc.insert("value".into(), v.clone());
        }
        if let Some(e) = self.error_bound {
            doc.insert("error_bound".into(), json!(e));
        }
        if !self.rows.is_empty() {
            doc.insert("rows".into(), Value::Array(self.rows.clone()));
        }
        doc.extend(self.extra.clone());
        doc.insert("manifest".into(), serde_json::to_value(self.manifest()).expect("manifest serializes"));
        let mut doc = Value::Object(doc);
        round_reals(&mut doc);
        doc
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json renders");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    /// The manifest as a leading `#` comment line, then the header and rows.
    fn to_csv(&self) -> String {
        let mut manifest = serde_json::to_value(self.manifest()).expect("manifest serializes");
        round_reals(&mut manifest);
        let mut s = format!("# {manifest}\n{}\n", self.columns.join(","));
        for row in &self.rows {
            let mut row = row.clone();
            round_reals(&mut row);
            let cells: Vec<String> = self.columns.iter().map(|c| csv_cell(row.get(*c))).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

/// Rounds a real to 12 significant digits; integers are untouched.
pub fn sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float reparses")
}

fn round_reals(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = sig12(n.as_f64().expect("f64 number"));
            *v = json!(r);
        }
        Value::Array(a) => a.iter_mut().for_each(round_reals),
        Value::Object(m) => m.values_mut().for_each(round_reals),
        _ => {}
    }
}

fn parse_set(text: &str) -> Result<ExponentSet, CliError> {
    Ok(text.parse::<ExponentSet>().map_err(Error::from)?)
}

fn density_row(d: &DensityResult) -> Value {
    json!({
        "value": d.value,
        "error_bound": d.error_bound,
        "route": d.route.as_str(),
        "prime_limit": d.prime_limit,
        "exponent_depth": d.exponent_depth,
        "sum_limit": d.sum_limit,
    })
}

const DENSITY_COLUMNS: &[&str] = &["value", "error_bound", "route", "prime_limit", "exponent_depth", "sum_limit"];
const COUNT_COLUMNS: &[&str] = &[
    "x",
    "exact_count",
    "density",
    "density_error_bound",
    "main_term",
    "residual",
    "envelope",
    "normalized_residual",
];
pub const VERIFY_COLUMNS: &[&str] =
    &["x", "exact_count", "density", "main_term", "residual", "envelope", "normalized_residual"];
const AUDIT_COLUMNS: &[&str] = &["r", "x", "count", "main_term", "residual", "bound", "ok"];
const POWERFUL_COLUMNS: &[&str] = &["x", "count", "main_term", "residual", "ratio", "within_envelope"];
const GAP_COLUMNS: &[&str] = &["name", "value", "error_bound", "lower", "upper", "prime_limit"];

fn sieve_for(limit: u64, cap: u64) -> Result<FactorSieve, CliError> {
    Ok(FactorSieve::with_cap(limit.max(2), cap)?)
}

fn cmd_density(
    set: &str,
    route: RouteChoice,
    prime_limit: u64,
    eps: f64,
    a_limit: u64,
) -> Result<Output, CliError> {
    let s = parse_set(set)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Precondition(format!("--eps must lie in (0, 1), got {eps}")));
    }
    let mut params = Map::new();
    params.insert("set".into(), json!(s.to_string()));
    params.insert("route".into(), json!(format!("{route:?}").to_lowercase()));
    let d = match route {
        RouteChoice::Auto if !s.contains_one() => density_zero_branch(&s)?,
        RouteChoice::Auto | RouteChoice::Eq4 => density_eq4(&s, prime_limit, eps)?,
        RouteChoice::Eq11 => density_eq11(&s, prime_limit, eps)?,
        RouteChoice::Eq8 => density_eq8_sum_form(&s, a_limit)?,
    };
    match route {
        RouteChoice::Eq8 => {
            params.insert("a_limit".into(), json!(a_limit));
        }
        _ => {
            params.insert("prime_limit".into(), json!(prime_limit));
            params.insert("eps".into(), json!(eps));
        }
    }
    let mut out = Output::new("density", params, DENSITY_COLUMNS);
    out.value = Some(json!(d.value));
    out.error_bound = Some(d.error_bound);
    out.rows.push(density_row(&d));
    Ok(out)
}

fn cmd_count(set: &str, x: u64, cap: u64) -> Result<Output, CliError> {
    let s = parse_set(set)?;
    if x < 1 {
        return Err(CliError::Precondition("--x must be at least 1".into()));
    }
    let sieve = sieve_for(x, cap)?;
    let count = sieve.count_members(x, &s)?;
    let d = density_to_tolerance(&s, REPORT_DENSITY_TOLERANCE)?;
    let main_term = d.value * x as f64;
    let residual = count as f64 - main_term;
    // the envelope needs ln ln x > 0
    let env = (x >= 16).then(|| envelope(x as f64));
    let mut params = Map::new();
    params.insert("set".into(), json!(s.to_string()));
    params.insert("x".into(), json!(x));
    params.insert("sieve_cap".into(), json!(cap));
    let mut out = Output::new("count", params, COUNT_COLUMNS);
    out.value = Some(json!(count));
    out.rows.push(json!({
        "x": x,
        "exact_count": count,
        "density": d.value,
        "density_error_bound": d.error_bound,
        "main_term": main_term,
        "residual": residual,
        "envelope": env,
        "normalized_residual": env.map(|e| residual.abs() / e),
    }));
    Ok(out)
}

fn cmd_family(rule: &str, terms: u64) -> Result<Output, CliError> {
    let family: PerPrimeFamily = rule.parse().map_err(Error::from)?;
    let d = density_per_prime(&family, terms)?;
    let mut params = Map::new();
    params.insert("rule".into(), json!(family.to_string()));
    params.insert("terms".into(), json!(terms));
    let mut out = Output::new("family", params, DENSITY_COLUMNS);
    out.value = Some(json!(d.value));
    out.error_bound = Some(d.error_bound);
    out.rows.push(density_row(&d));
    Ok(out)
}

fn cmd_verify(set: &str, xs: &[u64], cap: u64) -> Result<Output, CliError> {
    let s = parse_set(set)?;
    let max = *xs
        .iter()
        .max()
        .ok_or_else(|| CliError::Precondition("--xs must list at least one value".into()))?;
    let sieve = sieve_for(max, cap)?;
    let reports = verify_density(&sieve, &s, xs)?;
    let mut params = Map::new();
    params.insert("set".into(), json!(s.to_string()));
    params.insert("xs".into(), json!(xs));
    params.insert("sieve_cap".into(), json!(cap));
    let mut out = Output::new("verify", params, VERIFY_COLUMNS);
    if let Some(r) = reports.first() {
        out.value = Some(json!(r.density.value));
        out.error_bound = Some(r.density.error_bound);
    }
    out.rows = reports
        .iter()
        .map(|r| {
            json!({
                "x": r.x,
                "exact_count": r.exact_count,
                "density": r.density.value,
                "main_term": r.main_term,
                "residual": r.residual,
                "envelope": r.envelope,
                "normalized_residual": r.normalized_residual,
            })
        })
        .collect();
    Ok(out)
}

fn cmd_audit(rs: &[u64], xs: &[u64], cap: u64) -> Result<Output, CliError> {
    let max = xs.iter().copied().max().unwrap_or(2);
    let sieve = sieve_for(max, cap)?;
    let audit = audit_lemma1(&sieve, rs, xs)?;
    let mut params = Map::new();
    params.insert("rs".into(), json!(rs));
    params.insert("xs".into(), json!(xs));
    params.insert("sieve_cap".into(), json!(cap));
    let mut out = Output::new("audit-lemma1", params, AUDIT_COLUMNS);
    out.rows = audit
        .rows
        .iter()
        .map(|r| serde_json::to_value(r).expect("row serializes"))
        .collect();
    out.extra.insert("pass".into(), json!(audit.pass));
    Ok(out)
}

fn cmd_powerful(xs: &[u64], cap: u64) -> Result<Output, CliError> {
    // enumeration needs no sieve, but its output grows like 2.2 sqrt(x)
    if let Some(&big) = xs.iter().max() {
        let estimate = 2.2 * (big as f64).sqrt();
        if estimate > cap as f64 {
            return Err(CliError::Resource(format!(
                "enumerating powerful numbers up to {big} needs about {estimate:.0} entries, above the cap {cap}"
            )));
        }
    }
    let rows = verify_powerful_asymptotic(xs)?;
    let mut params = Map::new();
    params.insert("x".into(), json!(xs));
    let mut out = Output::new("powerful", params, POWERFUL_COLUMNS);
    if let [only] = rows.as_slice() {
        out.value = Some(json!(only.count));
    }
    out.rows = rows
        .iter()
        .map(|r| {
            json!({
                "x": r.x,
                "count": r.count,
                "main_term": r.main_term,
                "residual": r.residual,
                "ratio": r.ratio,
                "within_envelope": r.ratio <= POWERFUL_ENVELOPE_CONSTANT,
            })
        })
        .collect();
    out.extra.insert("envelope_constant".into(), json!(POWERFUL_ENVELOPE_CONSTANT));
    out.extra.insert("envelope_is_heuristic".into(), json!(true));
    Ok(out)
}

fn cmd_gap(prime_limit: u64) -> Result<Output, CliError> {
    let g = gap_interval(prime_limit)?;
    let mut params = Map::new();
    params.insert("prime_limit".into(), json!(prime_limit));
    let mut out = Output::new("gap", params, GAP_COLUMNS);
    for (name, d) in [("upper_no2", &g.upper_no2), ("lower_with2", &g.lower_with2)] {
        out.rows.push(json!({
            "name": name,
            "value": d.value,
            "error_bound": d.error_bound,
            "lower": d.lower(),
            "upper": d.upper(),
            "prime_limit": d.prime_limit,
        }));
    }
    out.extra.insert("certified".into(), json!(g.certified));
    Ok(out)
}

/// Runs one parsed invocation and returns its output and format.
pub fn execute(cli: &Cli) -> Result<(Output, Format), CliError> {
    let cap = cli.sieve_cap;
    Ok(match &cli.command {
        Command::Density {
            set,
            route,
            prime_limit,
            eps,
            a_limit,
            format,
        } => (cmd_density(set, *route, *prime_limit, *eps, *a_limit)?, *format),
        Command::Count { set, x, format } => (cmd_count(set, *x, cap)?, *format),
        Command::Family { rule, terms, format } => (cmd_family(rule, *terms)?, *format),
        Command::Verify { set, xs, format, .. } => (cmd_verify(set, xs, cap)?, *format),
        Command::AuditLemma1 { rs, xs, format } => (cmd_audit(rs, xs, cap)?, *format),
        Command::Powerful { x, format } => (cmd_powerful(x, cap)?, *format),
        Command::Gap { prime_limit, format } => (cmd_gap(*prime_limit)?, *format),
    })
}

/// Parses `args` (program name first), runs the command and writes the
/// result to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli).and_then(|(output, format)| {
        let text = output.render(format);
        match &cli.command {
            Command::Verify { out: Some(path), .. } => {
                std::fs::write(path, &text).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                let _ = writeln!(err, "wrote {} rows to {}", output.rows.len(), path.display());
            }
            _ => {
                let _ = out.write_all(text.as_bytes());
            }
        }
        Ok(())
    });
    let wall_time_ms = start.elapsed().as_millis();
    match result {
        Ok(()) => {
            let _ = writeln!(err, "{}", json!({ "wall_time_ms": wall_time_ms }));
            exit::OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
