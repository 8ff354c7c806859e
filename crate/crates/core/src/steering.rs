//! Tracked-drive steering of the coupled two-qubit Hamiltonian onto the CNOT
//! local-equivalence class, and the four-step CNOT schedule built on it.
//!
//! Units have ħ = 1: Rabi frequencies and couplings are angular frequencies,
//! times are in the reciprocal unit. Single-qubit rotations follow
//! `R_a(phi) = exp(-i phi/2 sigma_a)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equivalence::cnot;
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, identity4, kron, on_qubit, pauli, pauli_pair, real, rotation, Axis, Mat4};
use crate::pulse::PulseProfile;
use crate::tol;

/// Largest |k| for which the tracking coefficients below are defined.
pub const K_MAX: f64 = 7.0;

/// Coupling anisotropy `k` and the drive-tracking coefficients derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub k: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Tracking coefficients for anisotropy `k`:
/// `Λ1,2 = sqrt(16 - ((k-1)/2)^2) ± sqrt(16 - ((k+1)/2)^2)`.
///
/// Λ2 is negative for `k < 0`; a negative coefficient is a phase-inverted drive.
pub fn lambda_coeffs(k: f64) -> Result<CouplingParams> {
    if !(k.abs() <= K_MAX) {
        return Err(Error::KOutOfRange(k));
    }
    // Clamp guards the k = ±7 end point, where one radicand is zero.
    let s_minus = (16.0 - (0.5 * (k - 1.0)).powi(2)).max(0.0).sqrt();
    let s_plus = (16.0 - (0.5 * (k + 1.0)).powi(2)).max(0.0).sqrt();
    Ok(CouplingParams {
        k,
        lambda1: s_minus + s_plus,
        lambda2: s_minus - s_plus,
    })
}

impl CouplingParams {
    pub fn new(k: f64) -> Result<Self> {
        lambda_coeffs(k)
    }
}

/// `(XX + YY + k ZZ) / 2`, the coupling operator per unit `g`.
pub fn coupling_operator(k: f64) -> Mat4 {
    (pauli_pair(Axis::X, Axis::X) + pauli_pair(Axis::Y, Axis::Y) + pauli_pair(Axis::Z, Axis::Z) * real(k)) * real(0.5)
}

/// Rotating-frame Hamiltonian
/// `(Ω1/2) X1 + (Ω2/2) X2 + (g/2)(XX + YY + k ZZ)`.
pub fn hamiltonian(omega1: f64, omega2: f64, g: f64, k: f64) -> Mat4 {
    let x = pauli(Axis::X);
    on_qubit(&x, 1) * real(0.5 * omega1) + on_qubit(&x, 2) * real(0.5 * omega2) + coupling_operator(k) * real(g)
}

/// The fixed Hermitian generator obtained when both drives track the coupling,
/// `Ω_i(t) = Λ_i g(t)`, so that `H(t) = g(t) * matrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringGenerator {
    pub matrix: Mat4,
    pub params: CouplingParams,
}

pub fn steering_generator(params: &CouplingParams) -> SteeringGenerator {
    SteeringGenerator {
        matrix: hamiltonian(params.lambda1, params.lambda2, 1.0, params.k),
        params: *params,
    }
}

/// `exp(-i theta H)` for the steering generator `H`; at `theta = pi/2` this is
/// `exp(-i pi/4 XX)` for every admissible `k`.
pub fn steered_evolution(params: &CouplingParams, theta: f64) -> Result<Mat4> {
    expm_hermitian(&steering_generator(params).matrix, theta)
}

/// Which qubit(s) a local rotation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Qubit {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
    #[serde(rename = "both")]
    Both,
}

/// Rotation angle(s) in radians: one value for a single qubit, a
/// `[qubit 1, qubit 2]` pair for simultaneous rotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Single(f64),
    Pair([f64; 2]),
}

/// How the Rabi drives follow the coupling during a coupled segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tracking {
    /// `Ω_i = Λ_i g`.
    On,
    /// `Ω_i = 0`.
    Off,
    /// `Ω_i = Λ_i (1 + delta_i) g`.
    Perturbed { delta1: f64, delta2: f64 },
}

impl Tracking {
    /// Drive multipliers `(1 + delta1, 1 + delta2)`, or zero when tracking is off.
    pub fn drive_scale(&self) -> (f64, f64) {
        match *self {
            Tracking::On => (1.0, 1.0),
            Tracking::Off => (0.0, 0.0),
            Tracking::Perturbed { delta1, delta2 } => (1.0 + delta1, 1.0 + delta2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Segment {
    /// Instantaneous ideal rotation with the coupling off.
    Local { qubit: Qubit, axis: Axis, angle: Angle },
    /// Coupling switched through `profile`, drives following `tracking`.
    Coupled { profile: PulseProfile, tracking: Tracking },
}

impl Segment {
    pub fn local(qubit: Qubit, axis: Axis, angle: f64) -> Self {
        Segment::Local {
            qubit,
            axis,
            angle: Angle::Single(angle),
        }
    }

    /// Exact unitary of a local segment.
    pub fn local_unitary(qubit: Qubit, axis: Axis, angle: Angle) -> Result<Mat4> {
        match (qubit, angle) {
            (Qubit::First, Angle::Single(a)) => Ok(kron(&rotation(axis, a), &crate::linalg::identity2())),
            (Qubit::Second, Angle::Single(a)) => Ok(kron(&crate::linalg::identity2(), &rotation(axis, a))),
            (Qubit::Both, Angle::Pair([a1, a2])) => Ok(kron(&rotation(axis, a1), &rotation(axis, a2))),
            (Qubit::Both, Angle::Single(_)) => Err(Error::InvalidSchedule(
                "a rotation on both qubits needs an angle pair".into(),
            )),
            (_, Angle::Pair(_)) => Err(Error::InvalidSchedule("a single-qubit rotation takes one angle".into())),
        }
    }
}

/// Ordered gate segments at fixed anisotropy `k`, executed first to last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSchedule {
    pub k: f64,
    pub segments: Vec<Segment>,
}

impl GateSchedule {
    pub fn params(&self) -> Result<CouplingParams> {
        lambda_coeffs(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.segments.is_empty() {
            return Err(Error::InvalidSchedule("schedule has no segments".into()));
        }
        for seg in &self.segments {
            match seg {
                Segment::Local { qubit, axis, angle } => {
                    Segment::local_unitary(*qubit, *axis, *angle)?;
                }
                Segment::Coupled { profile, .. } => profile.validate()?,
            }
        }
        Ok(())
    }

    /// Overall unitary from the closed-form evolution of each segment.
    ///
    /// A coupled segment has `H(t) = g(t) * G` with `G` fixed for any constant
    /// drive ratio, so it contributes `exp(-i theta G)` with `theta` its area.
    pub fn compose_analytic(&self) -> Result<Mat4> {
        self.validate()?;
        let params = self.params()?;
        self.segments.iter().try_fold(identity4(), |acc, seg| {
            let step = match seg {
                Segment::Local { qubit, axis, angle } => Segment::local_unitary(*qubit, *axis, *angle)?,
                Segment::Coupled { profile, tracking } => {
                    let (s1, s2) = tracking.drive_scale();
                    let generator = hamiltonian(s1 * params.lambda1, s2 * params.lambda2, 1.0, params.k);
                    expm_hermitian(&generator, profile.area()?)?
                }
            };
            Ok(step * acc)
        })
    }
}

/// The four-step CNOT schedule without checking the pulse area.
pub fn cnot_schedule_unchecked(params: &CouplingParams, profile: PulseProfile) -> GateSchedule {
    GateSchedule {
        k: params.k,
        segments: vec![
            Segment::local(Qubit::First, Axis::Y, -FRAC_PI_2),
            Segment::Coupled {
                profile,
                tracking: Tracking::On,
            },
            Segment::Local {
                qubit: Qubit::Both,
                axis: Axis::X,
                angle: Angle::Pair([-FRAC_PI_2, FRAC_PI_2]),
            },
            Segment::local(Qubit::First, Axis::Y, FRAC_PI_2),
        ],
    }
}

/// CNOT schedule: `R_y(-pi/2)_1`, tracked coupling pulse of area pi/2,
/// `R_x(-pi/2)_1 R_x(pi/2)_2`, `R_y(pi/2)_1`. Composes to `e^{-i pi/4} CNOT`.
pub fn cnot_schedule(params: &CouplingParams, profile: PulseProfile) -> Result<GateSchedule> {
    profile.validate()?;
    let area = profile.area()?;
    if (area - FRAC_PI_2).abs() > tol::AREA {
        return Err(Error::AreaMismatch {
            area,
            expected: FRAC_PI_2,
            tol: tol::AREA,
        });
    }
    Ok(cnot_schedule_unchecked(params, profile))
}

/// Global phase relating the composed CNOT schedule to CNOT: `phase * U = CNOT`.
pub fn cnot_phase() -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4)
}

/// `max |e^{i pi/4} U - CNOT|` for a composed schedule unitary `U`.
pub fn cnot_residual(u: &Mat4) -> f64 {
    crate::linalg::max_norm_diff(&(u * cnot_phase()), &cnot())
}
