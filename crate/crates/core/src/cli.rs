//! `cnot-steer` command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::equivalence::{classify_with, cnot, cnot_weyl, ClassifyTolerance, Verdict};
use crate::linalg::max_norm_diff;
use crate::propagate::{area_sweep, propagate, tracking_sensitivity, PropagationConfig};
use crate::pulse::{solve_duration_numeric, table_gate_times, Family, PulseProfile};
use crate::steering::{cnot_residual, cnot_schedule, cnot_schedule_unchecked, lambda_coeffs, steered_evolution, K_MAX};
use crate::tol;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cnot-steer",
    version,
    about = "CNOT gates by Weyl chamber steering with tracked drives"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Relative drive-amplitude errors.
    Tracking,
    /// Pulse area relative to pi/2.
    Area,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    #[value(name = "1")]
    First,
    #[value(name = "2")]
    Second,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gate times t1, in units of pi*hbar/(2g), for the standard switching profiles.
    Table {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the steering identity and the four-step CNOT over a grid of k.
    Verify {
        #[arg(long, default_value_t = -K_MAX, allow_hyphen_values = true)]
        k_min: f64,
        #[arg(long, default_value_t = K_MAX, allow_hyphen_values = true)]
        k_max: f64,
        #[arg(long, default_value_t = 200)]
        n_points: usize,
        #[arg(long, default_value_t = tol::IDENTITY)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate the CNOT schedule numerically and report equivalence to CNOT.
    Simulate {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        /// Profile as JSON, a JSON file path, or `family[:param][,key=value...]`.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = tol::DEFAULT_STEPS)]
        steps: usize,
        /// Choose t1 so that the pulse area is pi/2.
        #[arg(long)]
        solve_t1: bool,
        /// Exact-up-to-phase threshold on 1 - fidelity.
        #[arg(long, default_value_t = tol::PROPAGATION)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fidelity of the propagated CNOT over a grid of tracking errors or pulse areas (CSV).
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value = "rectangular")]
        profile: String,
        #[arg(long, default_value_t = tol::DEFAULT_STEPS)]
        steps: usize,
        /// Grid start (delta for tracking, area scale for area). Default -0.1 / 0.9.
        #[arg(long, allow_hyphen_values = true)]
        min: Option<f64>,
        /// Grid end. Default 0.1 / 1.1.
        #[arg(long, allow_hyphen_values = true)]
        max: Option<f64>,
        #[arg(long, default_value_t = 21)]
        points: usize,
        /// Which drive the tracking error applies to.
        #[arg(long, value_enum, default_value = "1")]
        axis: SweepAxis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the four-step CNOT schedule as JSON.
    Schedule {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        solve_t1: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, carrying the exit code to report.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        usage(e)
    }
}

/// Command output plus the exit code it should produce.
struct Outcome {
    body: String,
    code: i32,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `stdout` unless `--out` is given. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let (out, result) = execute(&cli.command, stderr);
    match result {
        Ok(outcome) => match emit(out, &outcome.body, stdout) {
            Ok(()) => outcome.code,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => stdout.write_all(body.as_bytes()),
    }
}

fn execute<'a>(command: &'a Command, stderr: &mut dyn Write) -> (Option<&'a Path>, Result<Outcome, Failure>) {
    match command {
        Command::Table { format, out } => (out.as_deref(), cmd_table(*format)),
        Command::Verify {
            k_min,
            k_max,
            n_points,
            tol,
            format,
            out,
        } => (out.as_deref(), cmd_verify(*k_min, *k_max, *n_points, *tol, *format)),
        Command::Simulate {
            k,
            profile,
            steps,
            solve_t1,
            tol,
            format,
            out,
        } => (
            out.as_deref(),
            cmd_simulate(*k, profile, *steps, *solve_t1, *tol, *format, stderr),
        ),
        Command::Sweep {
            kind,
            k,
            profile,
            steps,
            min,
            max,
            points,
            axis,
            out,
        } => (
            out.as_deref(),
            cmd_sweep(*kind, *k, profile, *steps, *min, *max, *points, *axis),
        ),
        Command::Schedule {
            k,
            profile,
            solve_t1,
            out,
        } => (out.as_deref(), cmd_schedule(*k, profile, *solve_t1)),
    }
}

/// `x` with `sig` significant digits in positional notation.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", sig.saturating_sub(1), x);
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        return format!("{:.*e}", sig.saturating_sub(1), x);
    }
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cmd_table(format: Format) -> Result<Outcome, Failure> {
    let rows = table_gate_times(1.0)?;
    let mut body = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(
                body,
                "{:<28}{:<22}t1 x pi*hbar/(2g)",
                "Switching mechanism", "Pulse profile"
            );
            for r in &rows {
                let _ = writeln!(body, "{:<28}{:<22}{:.4}", r.mechanism, r.profile, r.t1_units);
            }
        }
        Format::Csv => {
            body.push_str("label,family,param,t1_units\n");
            for r in &rows {
                let param = r.family.param().map(|p| p.to_string()).unwrap_or_default();
                let _ = writeln!(body, "{},{},{},{}", r.label, r.family.name(), param, r.t1_units);
            }
        }
        Format::Json => {
            body = serde_json::to_string_pretty(&rows).map_err(usage)?;
            body.push('\n');
        }
    }
    Ok(Outcome { body, code: EXIT_OK })
}

fn k_grid(k_min: f64, k_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![k_min];
    }
    (0..n)
        .map(|i| k_min + (k_max - k_min) * i as f64 / (n - 1) as f64)
        .collect()
}

fn cmd_verify(k_min: f64, k_max: f64, n_points: usize, tol: f64, format: Format) -> Result<Outcome, Failure> {
    lambda_coeffs(k_min)?;
    lambda_coeffs(k_max)?;
    if k_min > k_max {
        return Err(usage(format!("--k-min {k_min} exceeds --k-max {k_max}")));
    }
    if n_points == 0 {
        return Err(usage("--n-points must be at least 1"));
    }
    let rectangular = PulseProfile::solved(Family::Rectangular, 1.0)?;
    let mut rows = Vec::with_capacity(n_points);
    for k in k_grid(k_min, k_max, n_points) {
        let params = lambda_coeffs(k)?;
        let steering = max_norm_diff(&steered_evolution(&params, FRAC_PI_2)?, &cnot_weyl());
        let schedule = cnot_residual(&cnot_schedule(&params, rectangular.clone())?.compose_analytic()?);
        rows.push((k, steering, schedule));
    }
    let worst = |pick: fn(&(f64, f64, f64)) -> f64| {
        rows.iter()
            .copied()
            .max_by(|a, b| pick(a).total_cmp(&pick(b)))
            .expect("non-empty grid")
    };
    let ws = worst(|r| r.1);
    let wc = worst(|r| r.2);
    let pass = ws.1 < tol && wc.2 < tol;
    let mut body = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(body, "k grid: {n_points} points in [{k_min}, {k_max}]");
            let _ = writeln!(body, "worst steering residual: {:e} (k = {})", ws.1, ws.0);
            let _ = writeln!(body, "worst schedule residual: {:e} (k = {})", wc.2, wc.0);
            let _ = writeln!(body, "tolerance: {tol:e}");
            let _ = writeln!(body, "{}", if pass { "PASS" } else { "FAIL" });
        }
        Format::Csv => {
            body.push_str("k,steering_residual,schedule_residual\n");
            for (k, s, c) in &rows {
                let _ = writeln!(body, "{k},{s:e},{c:e}");
            }
        }
        Format::Json => {
            let v = serde_json::json!({
                "k_min": k_min,
                "k_max": k_max,
                "n_points": n_points,
                "tolerance": tol,
                "worst_steering_residual": ws.1,
                "worst_steering_k": ws.0,
                "worst_schedule_residual": wc.2,
                "worst_schedule_k": wc.0,
                "pass": pass,
            });
            body = serde_json::to_string_pretty(&v).map_err(usage)? + "\n";
        }
    }
    Ok(Outcome {
        body,
        code: if pass { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

/// Parses a profile given as inline JSON, a JSON file, or the shorthand
/// `family[:param][,key=value...]` (e.g. `trapezoidal:0.2,g_peak=2`).
/// `g_peak` defaults to 1. With `solve_t1`, the duration is chosen so that the
/// area is pi/2 and any given `t1` is ignored.
pub fn parse_profile(spec: &str, solve_t1: bool) -> crate::Result<PulseProfile> {
    let spec = spec.trim();
    let invalid = |m: String| crate::Error::InvalidProfile(m);
    let mut value: Value = if spec.starts_with('{') {
        serde_json::from_str(spec).map_err(|e| invalid(e.to_string()))?
    } else if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| invalid(format!("{spec}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{spec}: {e}")))?
    } else {
        Value::Object(parse_inline(spec)?)
    };
    let obj = value
        .as_object_mut()
        .ok_or_else(|| invalid("profile must be a JSON object".into()))?;
    if obj.get("family").and_then(Value::as_str) != Some("sampled") {
        obj.entry("g_peak").or_insert(Value::from(1.0));
        if solve_t1 {
            obj.insert("t1".into(), Value::from(1.0));
        } else if !obj.contains_key("t1") {
            return Err(invalid("t1 is required unless --solve-t1 is given".into()));
        }
    }
    let profile: PulseProfile = serde_json::from_value(value).map_err(|e| invalid(e.to_string()))?;
    profile.validate()?;
    if !solve_t1 {
        return Ok(profile);
    }
    match profile.family() {
        Some(family) => PulseProfile::solved(family, profile.g_peak()),
        None => Ok(profile.with_duration(solve_duration_numeric(&profile)?)),
    }
}

fn parse_inline(spec: &str) -> crate::Result<Map<String, Value>> {
    let invalid = |m: String| crate::Error::InvalidProfile(m);
    let mut parts = spec.split(',').map(str::trim);
    let head = parts.next().unwrap_or_default();
    let (family, param) = match head.split_once(':') {
        Some((f, p)) => (f, Some(p)),
        None => (head, None),
    };
    let mut obj = Map::new();
    obj.insert("family".into(), Value::from(family));
    if let Some(p) = param {
        let key = match family {
            "trapezoidal" => "epsilon",
            "inverted_poly" => "n",
            _ => return Err(invalid(format!("family '{family}' takes no shorthand parameter"))),
        };
        obj.insert(key.into(), parse_number(p)?);
    }
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| invalid(format!("expected key=value, got '{kv}'")))?;
        obj.insert(k.trim().into(), parse_number(v.trim())?);
    }
    Ok(obj)
}

fn parse_number(s: &str) -> crate::Result<Value> {
    if let Ok(i) = s.parse::<u64>() {
        return Ok(Value::from(i));
    }
    s.parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map(Value::Number)
        .ok_or_else(|| crate::Error::InvalidProfile(format!("not a number: '{s}'")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    k: f64,
    profile: &str,
    steps: usize,
    solve_t1: bool,
    tol: f64,
    format: Format,
    stderr: &mut dyn Write,
) -> Result<Outcome, Failure> {
    let params = lambda_coeffs(k)?;
    let profile = parse_profile(profile, solve_t1)?;
    let config = PropagationConfig::with_steps(steps);
    config.validate()?;
    let area = profile.area()?;
    if (area - FRAC_PI_2).abs() > tol::AREA {
        let _ = writeln!(
            stderr,
            "warning: pulse area {area} differs from pi/2; the result will not be CNOT"
        );
    }
    let schedule = cnot_schedule_unchecked(&params, profile);
    let u = propagate(&schedule, &config)?;
    let report = classify_with(
        &u,
        &cnot(),
        ClassifyTolerance {
            fidelity: tol,
            ..Default::default()
        },
    )?;
    let code = if report.verdict == Verdict::ExactUpToPhase {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(usage)? + "\n",
        Format::Text | Format::Csv => {
            let [c1, c2, c3] = report.weyl_coords;
            let mut s = String::new();
            let _ = writeln!(s, "fidelity: {}", fmt_sig(report.fidelity, 12));
            let _ = writeln!(
                s,
                "makhlin G1: {} {:+}i",
                fmt_sig(report.makhlin_g1.re, 12),
                fmt_sig(report.makhlin_g1.im, 12)
            );
            let _ = writeln!(s, "makhlin G2: {}", fmt_sig(report.makhlin_g2, 12));
            let _ = writeln!(s, "weyl coordinates: ({c1:.12}, {c2:.12}, {c3:.12})");
            let _ = writeln!(
                s,
                "verdict: {}",
                serde_json::to_value(report.verdict)
                    .map_err(usage)?
                    .as_str()
                    .unwrap_or("")
            );
            s
        }
    };
    Ok(Outcome { body, code })
}

fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![min],
        _ => (0..n)
            .map(|i| (min * (n - 1 - i) as f64 + max * i as f64) / (n - 1) as f64)
            .collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    kind: SweepKind,
    k: f64,
    profile: &str,
    steps: usize,
    min: Option<f64>,
    max: Option<f64>,
    points: usize,
    axis: SweepAxis,
) -> Result<Outcome, Failure> {
    let params = lambda_coeffs(k)?;
    if points == 0 {
        return Err(usage("sweep grid is empty (--points 0)"));
    }
    let profile = parse_profile(profile, true)?;
    PropagationConfig::with_steps(steps).validate()?;
    let mut body = String::new();
    match kind {
        SweepKind::Tracking => {
            let grid = linspace(min.unwrap_or(-0.1), max.unwrap_or(0.1), points);
            let deltas: Vec<(f64, f64)> = grid
                .iter()
                .map(|&d| match axis {
                    SweepAxis::First => (d, 0.0),
                    SweepAxis::Second => (0.0, d),
                    SweepAxis::Both => (d, d),
                })
                .collect();
            body.push_str("delta1,delta2,fidelity\n");
            for p in tracking_sensitivity(&params, &profile, &deltas, steps)? {
                let _ = writeln!(
                    body,
                    "{},{},{}",
                    fmt_sig(p.delta1, 12),
                    fmt_sig(p.delta2, 12),
                    fmt_sig(p.fidelity, 12)
                );
            }
        }
        SweepKind::Area => {
            let scales = linspace(min.unwrap_or(0.9), max.unwrap_or(1.1), points);
            body.push_str("theta_scale,theta,fidelity\n");
            for p in area_sweep(&params, &profile, &scales, steps)? {
                let _ = writeln!(
                    body,
                    "{},{},{}",
                    fmt_sig(p.scale, 12),
                    fmt_sig(p.theta, 12),
                    fmt_sig(p.fidelity, 12)
                );
            }
        }
    }
    Ok(Outcome { body, code: EXIT_OK })
}

fn cmd_schedule(k: f64, profile: &str, solve_t1: bool) -> Result<Outcome, Failure> {
    let params = lambda_coeffs(k)?;
    let profile = parse_profile(profile, solve_t1)?;
    let schedule = cnot_schedule(&params, profile)?;
    Ok(Outcome {
        body: serde_json::to_string_pretty(&schedule).map_err(usage)? + "\n",
        code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.999999999870123, 12), "0.999999999870");
        assert_eq!(fmt_sig(-0.1, 12), "-0.100000000000");
        assert_eq!(fmt_sig(0.0, 12), "0.00000000000");
        assert_eq!(fmt_sig(-0.0, 4), "0.000");
        assert_eq!(fmt_sig(123.456, 4), "123.5");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_PI_2, 12), "1.57079632679");
        assert_eq!(fmt_sig(1.347e-26, 4), "1.347e-26");
        assert_eq!(fmt_sig(-2.5e20, 3), "-2.50e20");
    }

    #[test]
    fn inline_profiles() {
        let p = parse_profile("trapezoidal:0.2,g_peak=2,t1=3", false).unwrap();
        assert_eq!(
            p,
            PulseProfile::Trapezoidal {
                epsilon: 0.2,
                g_peak: 2.0,
                t1: 3.0
            }
        );
        let p = parse_profile("inverted_poly:3", true).unwrap();
        assert_eq!(p.family(), Some(Family::InvertedPoly { n: 3 }));
        assert!((p.area().unwrap() - FRAC_PI_2).abs() < 1e-15);
        let p = parse_profile("landau_hat,g_peak=0.5", true).unwrap();
        assert!((p.t1() - 15.0 / 8.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(parse_profile("sinusoidal", false).is_err());
        assert!(parse_profile("sinusoidal:3", true).is_err());
        assert!(parse_profile("hexagon", true).is_err());
        assert!(parse_profile("trapezoidal:0.7", true).is_err());
    }

    #[test]
    fn json_profiles() {
        let p = parse_profile(r#"{"family":"rectangular","g_peak":1.0,"t1":0.5}"#, false).unwrap();
        assert_eq!(p, PulseProfile::Rectangular { g_peak: 1.0, t1: 0.5 });
        let p = parse_profile(r#"{"family":"sampled","times":[0,1,2],"values":[0,1,0]}"#, true).unwrap();
        assert!((p.area().unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(parse_profile(r#"{"family":"sampled","times":[0],"values":[0]}"#, true).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(k_grid(0.0, 0.0, 1), vec![0.0]);
        assert_eq!(k_grid(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
