//! Time-ordered numerical propagation of gate schedules.
//!
//! Each coupled segment is split into steps and evolved as the ordered
//! product of `exp(-i H(t_mid) dt)`, with `H` rebuilt from the full
//! rotating-frame Hamiltonian at every step midpoint. Nothing here relies on
//! the Hamiltonian commuting with itself at different times, so the result
//! is an independent check of the closed-form composition.
//!
//! Round-off in the step factors accumulates linearly in the product, so the
//! running unitary is re-orthonormalised every [`REORTHONORMALIZE_EVERY`] steps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::{cnot, phase_invariant_fidelity};
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, identity4, max_norm_diff, orthonormalize, Mat4};
use crate::pulse::PulseProfile;
use crate::steering::{
    cnot_schedule, cnot_schedule_unchecked, hamiltonian, CouplingParams, GateSchedule, Segment, Tracking,
};
use crate::tol;

pub const REORTHONORMALIZE_EVERY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact exponential of the Hamiltonian sampled at each step midpoint.
    #[default]
    MidpointExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    /// Steps per coupled segment.
    pub steps: usize,
    pub method: Method,
    /// Relative drive errors `(delta1, delta2)`: tracked drives become
    /// `Λ_i (1 + delta_i) g(t)`.
    pub tracking_perturbation: (f64, f64),
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            steps: tol::DEFAULT_STEPS,
            method: Method::MidpointExponential,
            tracking_perturbation: (0.0, 0.0),
        }
    }
}

impl PropagationConfig {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        let (d1, d2) = self.tracking_perturbation;
        if !(d1.is_finite() && d2.is_finite()) {
            return Err(Error::InvalidConfig("tracking perturbation must be finite".into()));
        }
        Ok(())
    }
}

/// Midpoints and widths of the integration steps for one coupled segment.
///
/// Steps are shared among the smooth pieces of `g(t)` in proportion to their
/// length, every piece getting at least one, so no step straddles a corner.
pub fn step_grid(profile: &PulseProfile, steps: usize) -> Vec<(f64, f64)> {
    let breaks = profile.breakpoints();
    let pieces: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).filter(|(a, b)| b > a).collect();
    let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    let mut counts: Vec<usize> = pieces
        .iter()
        .map(|(a, b)| ((steps as f64 * (b - a) / total).round() as usize).max(1))
        .collect();
    let assigned: usize = counts.iter().sum();
    if let Some((largest, _)) = pieces
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
    {
        if assigned < steps {
            counts[largest] += steps - assigned;
        } else {
            let surplus = assigned - steps;
            counts[largest] -= surplus.min(counts[largest] - 1);
        }
    }
    pieces
        .iter()
        .zip(&counts)
        .flat_map(|(&(a, b), &n)| {
            let dt = (b - a) / n as f64;
            (0..n).map(move |j| (a + (j as f64 + 0.5) * dt, dt))
        })
        .collect()
}

/// Propagates the full schedule step by step.
pub fn propagate(schedule: &GateSchedule, config: &PropagationConfig) -> Result<Mat4> {
    config.validate()?;
    schedule.validate()?;
    let params = schedule.params()?;
    let (d1, d2) = config.tracking_perturbation;
    let mut u = identity4();
    for seg in &schedule.segments {
        match seg {
            Segment::Local { qubit, axis, angle } => {
                u = Segment::local_unitary(*qubit, *axis, *angle)? * u;
            }
            Segment::Coupled { profile, tracking } => {
                let (s1, s2) = match tracking {
                    Tracking::Off => (0.0, 0.0),
                    t => {
                        let (s1, s2) = t.drive_scale();
                        (s1 * (1.0 + d1), s2 * (1.0 + d2))
                    }
                };
                for (i, (t, dt)) in step_grid(profile, config.steps).into_iter().enumerate() {
                    let g = profile.value_at(t);
                    let h = hamiltonian(s1 * params.lambda1 * g, s2 * params.lambda2 * g, g, params.k);
                    u = expm_hermitian(&h, dt)? * u;
                    if (i + 1) % REORTHONORMALIZE_EVERY == 0 {
                        u = orthonormalize(u);
                    }
                }
            }
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub steps: usize,
    pub error: f64,
}

/// Propagation error against the closed-form composition for each step count.
pub fn convergence_scan(schedule: &GateSchedule, steps_list: &[usize]) -> Result<Vec<ConvergencePoint>> {
    if steps_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("steps list must be strictly ascending".into()));
    }
    let exact = schedule.compose_analytic()?;
    steps_list
        .par_iter()
        .map(|&steps| {
            let u = propagate(schedule, &PropagationConfig::with_steps(steps))?;
            Ok(ConvergencePoint {
                steps,
                error: max_norm_diff(&u, &exact),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityPoint {
    pub delta1: f64,
    pub delta2: f64,
    pub fidelity: f64,
}

/// Fidelity to CNOT of the propagated CNOT schedule under relative drive
/// errors. `profile` must have area pi/2. Results follow the input order.
pub fn tracking_sensitivity(
    params: &CouplingParams,
    profile: &PulseProfile,
    deltas: &[(f64, f64)],
    steps: usize,
) -> Result<Vec<SensitivityPoint>> {
    let schedule = cnot_schedule(params, profile.clone())?;
    let target = cnot();
    deltas
        .par_iter()
        .map(|&(delta1, delta2)| {
            let config = PropagationConfig {
                steps,
                tracking_perturbation: (delta1, delta2),
                ..Default::default()
            };
            let u = propagate(&schedule, &config)?;
            Ok(SensitivityPoint {
                delta1,
                delta2,
                fidelity: phase_invariant_fidelity(&u, &target)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaPoint {
    /// Pulse area relative to pi/2.
    pub scale: f64,
    pub theta: f64,
    pub fidelity: f64,
}

/// Fidelity to CNOT when the pulse is stretched so that its area becomes
/// `scale * pi/2`, all else fixed. Results follow the input order.
pub fn area_sweep(
    params: &CouplingParams,
    profile: &PulseProfile,
    scales: &[f64],
    steps: usize,
) -> Result<Vec<AreaPoint>> {
    profile.validate()?;
    let base_area = profile.area()?;
    if !(base_area > 0.0) {
        return Err(Error::InvalidProfile("profile has zero area".into()));
    }
    let target = cnot();
    scales
        .par_iter()
        .map(|&scale| {
            let theta = scale * std::f64::consts::FRAC_PI_2;
            let stretched = profile.with_duration(profile.t1() * theta / base_area);
            let schedule = cnot_schedule_unchecked(params, stretched);
            let u = propagate(&schedule, &PropagationConfig::with_steps(steps))?;
            Ok(AreaPoint {
                scale,
                theta,
                fidelity: phase_invariant_fidelity(&u, &target)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{classify, Verdict};
    use crate::linalg::unitarity_defect;
    use crate::pulse::Family;
    use crate::steering::{lambda_coeffs, steered_evolution};
    use std::f64::consts::FRAC_PI_2;

    fn coupled_only(k: f64, profile: PulseProfile) -> GateSchedule {
        GateSchedule {
            k,
            segments: vec![Segment::Coupled {
                profile,
                tracking: Tracking::On,
            }],
        }
    }

    #[test]
    fn grid_respects_corners() {
        let p = PulseProfile::Trapezoidal {
            epsilon: 0.2,
            g_peak: 1.0,
            t1: 10.0,
        };
        let grid = step_grid(&p, 256);
        assert_eq!(grid.len(), 256);
        let mut t = 0.0;
        for &(mid, dt) in &grid {
            assert!((mid - (t + 0.5 * dt)).abs() < 1e-12);
            // No step crosses a corner.
            for corner in [2.0, 8.0] {
                assert!(!(t < corner - 1e-12 && t + dt > corner + 1e-12));
            }
            t += dt;
        }
        assert!((t - 10.0).abs() < 1e-12);
        assert_eq!(
            step_grid(&PulseProfile::Sinusoidal { g_peak: 1.0, t1: 1.0 }, 7).len(),
            7
        );
    }

    #[test]
    fn rejects_bad_config() {
        let s = coupled_only(0.0, PulseProfile::Rectangular { g_peak: 1.0, t1: 1.0 });
        assert!(propagate(&s, &PropagationConfig::with_steps(1)).is_err());
        let cfg = PropagationConfig {
            tracking_perturbation: (f64::NAN, 0.0),
            ..Default::default()
        };
        assert!(propagate(&s, &cfg).is_err());
        assert!(convergence_scan(&s, &[8, 4]).is_err());
    }

    #[test]
    fn rectangular_is_exact_at_any_step_count() {
        let p = lambda_coeffs(2.0).unwrap();
        let s = coupled_only(2.0, PulseProfile::Rectangular { g_peak: 0.7, t1: 1.3 });
        let exact = steered_evolution(&p, 0.7 * 1.3).unwrap();
        for steps in [2, 3, 64, 1000] {
            let u = propagate(&s, &PropagationConfig::with_steps(steps)).unwrap();
            assert!(max_norm_diff(&u, &exact) < 1e-12, "steps {steps}");
        }
    }

    #[test]
    fn sinusoidal_segment_matches_steered_evolution() {
        let p = lambda_coeffs(1.5).unwrap();
        let s = coupled_only(1.5, PulseProfile::solved(Family::Sinusoidal, 1.0).unwrap());
        let u = propagate(&s, &PropagationConfig::default()).unwrap();
        assert!(max_norm_diff(&u, &steered_evolution(&p, FRAC_PI_2).unwrap()) < 1e-8);
    }

    #[test]
    fn full_landau_schedule_gives_cnot() {
        let p = lambda_coeffs(0.0).unwrap();
        let s = cnot_schedule(&p, PulseProfile::solved(Family::LandauHat, 1.0).unwrap()).unwrap();
        let u = propagate(&s, &PropagationConfig::default()).unwrap();
        assert!(crate::steering::cnot_residual(&u) < 1e-7);
    }

    #[test]
    fn inverted_quadratic_converges_at_second_order() {
        let s = coupled_only(0.0, PulseProfile::solved(Family::InvertedPoly { n: 1 }, 1.0).unwrap());
        let scan = convergence_scan(&s, &[256, 512, 1024, 2048]).unwrap();
        for w in scan.windows(2) {
            let ratio = w[0].error / w[1].error;
            assert!((ratio - 4.0).abs() < 0.8, "{scan:?}");
        }
    }

    #[test]
    fn landau_converges_at_fourth_order() {
        // The hat's slope vanishes at both ends, so the h^2 term of the midpoint rule cancels.
        let s = coupled_only(0.0, PulseProfile::solved(Family::LandauHat, 1.0).unwrap());
        let scan = convergence_scan(&s, &[32, 64, 128]).unwrap();
        for w in scan.windows(2) {
            let ratio = w[0].error / w[1].error;
            assert!((ratio - 16.0).abs() < 3.2, "{scan:?}");
        }
    }

    #[test]
    fn sinusoidal_midpoint_is_exact() {
        // Midpoint sums of a full cosine period vanish identically.
        let s = coupled_only(0.0, PulseProfile::solved(Family::Sinusoidal, 1.0).unwrap());
        for pt in convergence_scan(&s, &[4, 16, 256]).unwrap() {
            assert!(pt.error < 1e-13, "{pt:?}");
        }
    }

    #[test]
    fn aligned_trapezoid_is_exact() {
        let s = coupled_only(
            3.0,
            PulseProfile::solved(Family::Trapezoidal { epsilon: 0.2 }, 1.0).unwrap(),
        );
        for pt in convergence_scan(&s, &[16, 64, 256]).unwrap() {
            assert!(pt.error < 1e-12, "{pt:?}");
        }
    }

    #[test]
    fn unitarity_over_long_runs() {
        let s = coupled_only(-3.0, PulseProfile::solved(Family::LandauHat, 0.5).unwrap());
        let u = propagate(&s, &PropagationConfig::with_steps(100_000)).unwrap();
        assert!(unitarity_defect(&u) < 1e-11);
    }

    #[test]
    fn tracking_off_is_not_cnot() {
        let p = lambda_coeffs(1.0).unwrap();
        let profile = PulseProfile::solved(Family::Sinusoidal, 1.0).unwrap();
        let mut s = cnot_schedule(&p, profile).unwrap();
        if let Segment::Coupled { tracking, .. } = &mut s.segments[1] {
            *tracking = Tracking::Off;
        }
        let u = propagate(&s, &PropagationConfig::default()).unwrap();
        assert_eq!(classify(&u, &cnot()).unwrap().verdict, Verdict::Inequivalent);
    }

    #[test]
    fn sensitivity_peaks_at_exact_tracking() {
        let p = lambda_coeffs(0.0).unwrap();
        let profile = PulseProfile::solved(Family::Rectangular, 1.0).unwrap();
        let deltas = [(0.0, 0.0), (0.01, 0.01), (0.02, 0.02), (0.04, 0.04)];
        let pts = tracking_sensitivity(&p, &profile, &deltas, 64).unwrap();
        assert!((1.0 - pts[0].fidelity) < 1e-7);
        let loss: Vec<f64> = pts.iter().map(|p| 1.0 - p.fidelity).collect();
        // Quadratic leading order: doubling delta quadruples the loss.
        assert!((loss[2] / loss[1] - 4.0).abs() < 0.4, "{loss:?}");
        assert!((loss[3] / loss[2] - 4.0).abs() < 0.4, "{loss:?}");
        assert_eq!(
            pts.iter().map(|p| p.delta1).collect::<Vec<_>>(),
            vec![0.0, 0.01, 0.02, 0.04]
        );
    }

    #[test]
    fn area_sweep_peaks_at_quarter_turn() {
        let p = lambda_coeffs(0.0).unwrap();
        let profile = PulseProfile::solved(Family::Sinusoidal, 1.0).unwrap();
        let scales: Vec<f64> = (0..=10).map(|i| 0.9 + 0.02 * i as f64).collect();
        let pts = area_sweep(&p, &profile, &scales, 256).unwrap();
        let best = pts.iter().max_by(|a, b| a.fidelity.total_cmp(&b.fidelity)).unwrap();
        assert!((best.scale - 1.0).abs() < 1e-12);
        assert!(1.0 - best.fidelity < 1e-10);
    }
}
