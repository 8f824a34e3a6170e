use std::fmt;
use std::io::Read;

use gsi_core::analysis::GsiSystem;
use gsi_core::error::GsiError;
use gsi_core::exact::{parse_rational, Rational};
use gsi_core::group::{RatBox, TestFunction};
use gsi_core::lattice::Lattice;
use serde_json::{json, Value};

use crate::{Common, EXIT_ERROR, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(GsiError),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_ERROR,
        }
    }

    pub fn to_json(&self) -> Value {
        let (name, message) = match self {
            CliError::Usage(m) => ("UsageError", m.clone()),
            CliError::Core(e) => (e.name(), e.to_string()),
            CliError::Io(m) => ("IoError", m.clone()),
        };
        json!({"error": name, "message": message})
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl From<GsiError> for CliError {
    fn from(e: GsiError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Validated flags shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<String>,
    pub output: Option<String>,
    pub tolerance: f64,
    pub window: Option<u64>,
    pub exact: bool,
    pub table: bool,
}

impl RunConfig {
    pub fn from_common(c: &Common, verdicts: bool) -> CliResult<Self> {
        let tolerance = c.tolerance.unwrap_or(if verdicts { 1e-10 } else { 1e-9 });
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tolerance}")));
        }
        if let Some(w) = c.window {
            if w < 16 {
                return Err(CliError::Usage(format!("window must be at least 16, got {w}")));
            }
        }
        Ok(RunConfig {
            input: c.input.clone(),
            output: c.output.clone(),
            tolerance,
            window: c.window,
            exact: c.exact,
            table: c.table,
        })
    }

    pub fn read_input(&self) -> CliResult<Value> {
        let path = self.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
        };
        serde_json::from_str(&text).map_err(|e| CliError::Core(GsiError::InvalidInput(format!("{path}: {e}"))))
    }

    /// Writes `text` to `--output` or stdout.
    pub fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    pub fn emit_json(&self, v: &Value) -> CliResult<()> {
        self.emit(&pretty(v))
    }
}

/// Pretty JSON with a trailing newline. Object keys are sorted, so equal
/// values always print identically.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(GsiError::InvalidInput(msg.into()))
}

/// A system given bare or under the key `system`.
pub fn system_of(v: &Value) -> CliResult<GsiSystem> {
    Ok(GsiSystem::from_json(v.get("system").unwrap_or(v))?)
}

/// Test function under `f`, defaulting to `δ_0` (or the dense delta on ℤ_M).
pub fn test_function_of(v: &Value, system: &GsiSystem) -> CliResult<TestFunction> {
    match v.get("f") {
        Some(f) => Ok(TestFunction::from_json(f)?),
        None => Ok(TestFunction::new(match system.model.order() {
            Some(m) => gsi_core::group::Generator::dense_delta(m as usize, 0),
            None if system.model.dimension() == 1 && system.model.is_discrete() => gsi_core::group::Generator::delta(0),
            None => return Err(invalid("a test function `f` is required on ℝⁿ")),
        })),
    }
}

pub fn region_of(v: &Value) -> CliResult<Option<RatBox>> {
    Ok(v.get("region").map(RatBox::from_json).transpose()?)
}

pub fn lattices_of(v: &Value, key: &str) -> CliResult<Vec<Lattice>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| invalid(format!("missing `{key}`")))?
        .iter()
        .map(|l| Ok(Lattice::from_json(l)?))
        .collect()
}

pub fn rational_arg(s: &str) -> CliResult<Rational> {
    parse_rational(s.trim()).map_err(|_| CliError::Usage(format!("not a rational number: {s}")))
}

/// Comma separated rationals.
pub fn rationals_arg(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',').map(rational_arg).collect()
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => {
            if let Ok(x) = s.parse::<f64>() {
                return Some(x);
            }
            let r = parse_rational(s).ok()?;
            Some(gsi_core::exact::to_f64(&r))
        }
        _ => None,
    }
}

/// Differences between `actual` and `expected`: numbers (including numeric
/// strings and rationals) agree within `tol` relative to their size, all other
/// values must be equal.
pub fn json_diff(actual: &Value, expected: &Value, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    diff_at("$", actual, expected, tol, &mut out);
    out
}

fn diff_at(path: &str, a: &Value, e: &Value, tol: f64, out: &mut Vec<String>) {
    match (a, e) {
        (Value::Object(ma), Value::Object(me)) => {
            for k in ma.keys().chain(me.keys().filter(|k| !ma.contains_key(*k))) {
                let p = format!("{path}.{k}");
                match (ma.get(k), me.get(k)) {
                    (Some(x), Some(y)) => diff_at(&p, x, y, tol, out),
                    (Some(_), None) => out.push(format!("{p}: unexpected key")),
                    (None, _) => out.push(format!("{p}: missing")),
                }
            }
        }
        (Value::Array(xa), Value::Array(xe)) => {
            if xa.len() != xe.len() {
                out.push(format!("{path}: length {} != {}", xa.len(), xe.len()));
                return;
            }
            for (i, (x, y)) in xa.iter().zip(xe).enumerate() {
                diff_at(&format!("{path}[{i}]"), x, y, tol, out);
            }
        }
        _ if a == e => {}
        _ => match (as_number(a), as_number(e)) {
            (Some(x), Some(y)) if (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0) => {}
            _ => out.push(format!("{path}: {a} != {e}")),
        },
    }
}
