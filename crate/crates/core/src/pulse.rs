//! Coupling switching profiles `g(t)`, their areas, and gate-time solving.
//!
//! Every analytic family is peak-normalised (`0 <= g(t) <= g_peak`) and its
//! area `theta = ∫ g dt` (with ħ = 1) is linear in the duration `t1`, so the
//! gate time for a target area has a closed form. Measured traces enter as
//! [`PulseProfile::Sampled`] and go through quadrature and bisection instead.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::tol;

/// Shape family of an analytic switching profile, without amplitude or duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Rectangular,
    /// Linear ramps occupying a fraction `epsilon` of `t1` at each end.
    Trapezoidal {
        epsilon: f64,
    },
    /// `1 - (2t/t1 - 1)^(2n)`.
    InvertedPoly {
        n: u32,
    },
    /// `(1 - cos(2 pi t / t1)) / 2`.
    Sinusoidal,
    /// `1 + x^4 - 2x^2` with `x = 2t/t1 - 1`.
    LandauHat,
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Trapezoidal { epsilon } if !(0.0..=0.5).contains(&epsilon) => Err(Error::InvalidProfile(format!(
                "trapezoid ramp fraction {epsilon} not in [0, 1/2]"
            ))),
            Family::InvertedPoly { n: 0 } => {
                Err(Error::InvalidProfile("inverted polynomial order n must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// `theta / (g_peak * t1)`.
    pub fn area_factor(&self) -> f64 {
        match *self {
            Family::Rectangular => 1.0,
            Family::Trapezoidal { epsilon } => 1.0 - epsilon,
            Family::InvertedPoly { n } => 1.0 - 1.0 / (2.0 * n as f64 + 1.0),
            Family::Sinusoidal => 0.5,
            Family::LandauHat => 8.0 / 15.0,
        }
    }

    pub fn with(self, g_peak: f64, t1: f64) -> PulseProfile {
        match self {
            Family::Rectangular => PulseProfile::Rectangular { g_peak, t1 },
            Family::Trapezoidal { epsilon } => PulseProfile::Trapezoidal { epsilon, g_peak, t1 },
            Family::InvertedPoly { n } => PulseProfile::InvertedPoly { n, g_peak, t1 },
            Family::Sinusoidal => PulseProfile::Sinusoidal { g_peak, t1 },
            Family::LandauHat => PulseProfile::LandauHat { g_peak, t1 },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Rectangular => "rectangular",
            Family::Trapezoidal { .. } => "trapezoidal",
            Family::InvertedPoly { .. } => "inverted_poly",
            Family::Sinusoidal => "sinusoidal",
            Family::LandauHat => "landau_hat",
        }
    }

    /// Family parameter (`epsilon` or `n`), if any.
    pub fn param(&self) -> Option<f64> {
        match *self {
            Family::Trapezoidal { epsilon } => Some(epsilon),
            Family::InvertedPoly { n } => Some(n as f64),
            _ => None,
        }
    }

    /// Descriptive pulse shape name as used in gate-time tables.
    pub fn shape_name(&self) -> String {
        match *self {
            Family::Rectangular => "rectangular".into(),
            Family::Trapezoidal { epsilon: 0.0 } => "rectangular".into(),
            Family::Trapezoidal { epsilon: 0.5 } => "triangular".into(),
            Family::Trapezoidal { .. } => "trapezoidal".into(),
            Family::InvertedPoly { n } => match n {
                1 => "inverted quadratic".into(),
                2 => "inverted quartic".into(),
                3 => "inverted hexagonic".into(),
                4 => "inverted octagonic".into(),
                _ => format!("inverted degree-{}", 2 * n),
            },
            Family::Sinusoidal => "inverted cosine".into(),
            Family::LandauHat => "Landau's hat".into(),
        }
    }
}

/// A coupling switching profile on `[0, t1]`.
///
/// JSON form: `{"family":"trapezoidal","epsilon":0.2,"g_peak":1.0,"t1":1.96}`
/// or `{"family":"sampled","times":[...],"values":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PulseProfile {
    Rectangular {
        g_peak: f64,
        t1: f64,
    },
    Trapezoidal {
        epsilon: f64,
        g_peak: f64,
        t1: f64,
    },
    InvertedPoly {
        n: u32,
        g_peak: f64,
        t1: f64,
    },
    Sinusoidal {
        g_peak: f64,
        t1: f64,
    },
    LandauHat {
        g_peak: f64,
        t1: f64,
    },
    /// Measured trace, linearly interpolated. `times` starts at 0 and is strictly increasing.
    Sampled {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl PulseProfile {
    /// Analytic profile of the given family whose area is exactly pi/2.
    pub fn solved(family: Family, g_peak: f64) -> Result<Self> {
        Ok(family.with(g_peak, solve_gate_time(family, g_peak)?))
    }

    pub fn family(&self) -> Option<Family> {
        Some(match *self {
            PulseProfile::Rectangular { .. } => Family::Rectangular,
            PulseProfile::Trapezoidal { epsilon, .. } => Family::Trapezoidal { epsilon },
            PulseProfile::InvertedPoly { n, .. } => Family::InvertedPoly { n },
            PulseProfile::Sinusoidal { .. } => Family::Sinusoidal,
            PulseProfile::LandauHat { .. } => Family::LandauHat,
            PulseProfile::Sampled { .. } => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        self.family().map_or("sampled", |f| f.name())
    }

    pub fn g_peak(&self) -> f64 {
        match self {
            PulseProfile::Rectangular { g_peak, .. }
            | PulseProfile::Trapezoidal { g_peak, .. }
            | PulseProfile::InvertedPoly { g_peak, .. }
            | PulseProfile::Sinusoidal { g_peak, .. }
            | PulseProfile::LandauHat { g_peak, .. } => *g_peak,
            PulseProfile::Sampled { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn t1(&self) -> f64 {
        match self {
            PulseProfile::Rectangular { t1, .. }
            | PulseProfile::Trapezoidal { t1, .. }
            | PulseProfile::InvertedPoly { t1, .. }
            | PulseProfile::Sinusoidal { t1, .. }
            | PulseProfile::LandauHat { t1, .. } => *t1,
            PulseProfile::Sampled { times, .. } => times.last().copied().unwrap_or(0.0),
        }
    }

    /// Same shape stretched or compressed to last `t1`.
    pub fn with_duration(&self, t1: f64) -> Self {
        match (self.family(), self) {
            (Some(f), _) => f.with(self.g_peak(), t1),
            (None, PulseProfile::Sampled { times, values }) => {
                let scale = t1 / self.t1();
                PulseProfile::Sampled {
                    times: times.iter().map(|t| t * scale).collect(),
                    values: values.clone(),
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let PulseProfile::Sampled { times, values } = self {
            if times.len() < 2 || times.len() != values.len() {
                return Err(Error::InvalidProfile(
                    "sampled profile needs at least two (time, value) pairs of equal length".into(),
                ));
            }
            if times[0] != 0.0 {
                return Err(Error::InvalidProfile("sampled profile must start at t = 0".into()));
            }
            if times.windows(2).any(|w| !(w[1] > w[0])) || !times.iter().all(|t| t.is_finite()) {
                return Err(Error::InvalidProfile(
                    "sample times must be finite and strictly increasing".into(),
                ));
            }
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidProfile(
                    "sampled coupling values must be finite and non-negative".into(),
                ));
            }
            return Ok(());
        }
        let (g, t1) = (self.g_peak(), self.t1());
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "g_peak must be positive and finite, got {g}"
            )));
        }
        if !(t1 > 0.0 && t1.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "t1 must be positive and finite, got {t1}"
            )));
        }
        self.family().map_or(Ok(()), |f| f.validate())
    }

    /// `g(t)` for `t` in `[0, t1]`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let t1 = self.t1();
        if !(0.0..=t1).contains(&t) {
            return Err(Error::TimeOutOfRange { t, t1 });
        }
        Ok(self.value_at(t))
    }

    /// `g(t)` without the range check.
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        match self {
            PulseProfile::Rectangular { g_peak, .. } => *g_peak,
            PulseProfile::Trapezoidal { epsilon, g_peak, t1 } => {
                let ramp = epsilon * t1;
                if ramp == 0.0 {
                    *g_peak
                } else if t < ramp {
                    g_peak * t / ramp
                } else if t > t1 - ramp {
                    g_peak * (t1 - t) / ramp
                } else {
                    *g_peak
                }
            }
            PulseProfile::InvertedPoly { n, g_peak, t1 } => {
                let x = 2.0 * t / t1 - 1.0;
                g_peak * (1.0 - x.powi(2 * *n as i32))
            }
            PulseProfile::Sinusoidal { g_peak, t1 } => {
                0.5 * g_peak * (1.0 - (2.0 * std::f64::consts::PI * t / t1).cos())
            }
            PulseProfile::LandauHat { g_peak, t1 } => {
                let x2 = (2.0 * t / t1 - 1.0).powi(2);
                g_peak * (1.0 + x2 * x2 - 2.0 * x2)
            }
            PulseProfile::Sampled { times, values } => {
                let i = times.partition_point(|&s| s <= t);
                if i == 0 {
                    values[0]
                } else if i >= times.len() {
                    values[values.len() - 1]
                } else {
                    let (t0, t1) = (times[i - 1], times[i]);
                    let w = (t - t0) / (t1 - t0);
                    values[i - 1] + w * (values[i] - values[i - 1])
                }
            }
        }
    }

    /// Points at which `g(t)` may fail to be smooth, including both end points.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PulseProfile::Trapezoidal { epsilon, t1, .. } if *epsilon > 0.0 => {
                let ramp = epsilon * t1;
                let mut b = vec![0.0, ramp, t1 - ramp, *t1];
                b.dedup();
                b
            }
            PulseProfile::Sampled { times, .. } => times.clone(),
            _ => vec![0.0, self.t1()],
        }
    }

    /// Closed-form area `theta = ∫ g dt`; not available for sampled traces.
    pub fn area_analytic(&self) -> Result<f64> {
        let family = self.family().ok_or_else(|| {
            Error::InvalidProfile("sampled profiles have no closed-form area; use area_numeric".into())
        })?;
        self.validate()?;
        Ok(family.area_factor() * self.g_peak() * self.t1())
    }

    /// Quadrature estimate of the area with absolute error at most `tol`.
    pub fn area_numeric(&self, tol: f64) -> Result<f64> {
        self.validate()?;
        quad::piecewise_simpson(&|t| self.value_at(t), &self.breakpoints(), tol)
    }

    /// Analytic area when available, quadrature otherwise.
    pub fn area(&self) -> Result<f64> {
        match self {
            PulseProfile::Sampled { .. } => self.area_numeric(tol::QUADRATURE),
            _ => self.area_analytic(),
        }
    }
}

impl fmt::Display for PulseProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseProfile::Sampled { times, .. } => write!(f, "sampled ({} points, t1 = {})", times.len(), self.t1()),
            _ => {
                write!(f, "{}", self.name())?;
                if let Some(p) = self.family().and_then(|fam| fam.param()) {
                    write!(f, "({p})")?;
                }
                write!(f, ", g_peak = {}, t1 = {}", self.g_peak(), self.t1())
            }
        }
    }
}

/// Gate time `t1` at which a profile of this family reaches area pi/2.
pub fn solve_gate_time(family: Family, g_peak: f64) -> Result<f64> {
    family.validate()?;
    if !(g_peak > 0.0 && g_peak.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "g_peak must be positive and finite, got {g_peak}"
        )));
    }
    Ok(FRAC_PI_2 / (g_peak * family.area_factor()))
}

/// Solves `area(t1) = target` by bisection on `[lo, hi]`, for area functions
/// that increase monotonically with `t1`. Stops once the area is within
/// [`tol::BISECTION`] of the target.
pub fn solve_by_bisection<F>(area: F, target: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut f_lo, f_hi) = (area(lo)? - target, area(hi)? - target);
    if f_lo.abs() <= tol::BISECTION {
        return Ok(lo);
    }
    if f_hi.abs() <= tol::BISECTION {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = area(mid)? - target;
        if f_mid.abs() <= tol::BISECTION || hi - lo <= f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Duration to which `profile` must be stretched for its area to equal pi/2.
/// Works for any profile, including sampled traces.
pub fn solve_duration_numeric(profile: &PulseProfile) -> Result<f64> {
    profile.validate()?;
    let area_at = |t1: f64| profile.with_duration(t1).area_numeric(tol::QUADRATURE);
    let base = profile.t1();
    let base_area = area_at(base)?;
    if !(base_area > 0.0) {
        return Err(Error::InvalidProfile("profile has zero area".into()));
    }
    let guess = base * FRAC_PI_2 / base_area;
    solve_by_bisection(area_at, FRAC_PI_2, 0.5 * guess, 2.0 * guess)
}

/// One row of the gate-time summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    /// Short row label, e.g. `moderate` or `n=3`.
    pub label: String,
    /// Switching-mechanism column text.
    pub mechanism: String,
    /// Pulse-profile column text.
    pub profile: String,
    pub family: Family,
    /// Gate time in units of `pi ħ / (2 g_peak)`.
    pub t1_units: f64,
}

/// Gate times for the standard set of switching profiles, computed from the
/// closed-form areas.
pub fn table_gate_times(g_peak: f64) -> Result<Vec<TableRow>> {
    let unit = FRAC_PI_2 / g_peak;
    let mut rows = Vec::with_capacity(10);
    for (epsilon, speed) in [(0.0, "none"), (0.025, "fast"), (0.2, "moderate"), (0.5, "slow")] {
        let family = Family::Trapezoidal { epsilon };
        rows.push(TableRow {
            label: speed.into(),
            mechanism: format!("epsilon={epsilon:.4} ({speed})"),
            profile: family.shape_name(),
            family,
            t1_units: solve_gate_time(family, g_peak)? / unit,
        });
    }
    for n in 1..=4 {
        let family = Family::InvertedPoly { n };
        rows.push(TableRow {
            label: format!("n={n}"),
            mechanism: format!("n={n}"),
            profile: family.shape_name(),
            family,
            t1_units: solve_gate_time(family, g_peak)? / unit,
        });
    }
    for (family, label) in [(Family::Sinusoidal, "sinusoidal"), (Family::LandauHat, "soft quartic")] {
        rows.push(TableRow {
            label: label.into(),
            mechanism: label.into(),
            profile: family.shape_name(),
            family,
            t1_units: solve_gate_time(family, g_peak)? / unit,
        });
    }
    Ok(rows)
}
