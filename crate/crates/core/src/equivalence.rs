//! Gate equivalence: global-phase fidelity, Makhlin local invariants and
//! Weyl chamber coordinates.
//!
//! Weyl coordinates `(c1, c2, c3)` refer to the canonical gate
//! `exp(i (c1 XX + c2 YY + c3 ZZ))` and are folded into the chamber
//! `pi/2 > c1 >= c2 >= c3 >= 0`, `c1 + c2 <= pi/2`, with `c1 <= pi/4` on the
//! base face `c3 = 0`. In these units CNOT sits at `(pi/4, 0, 0)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, real, unitarity_defect, Mat4};
use crate::tol;

/// Canonical CNOT, control on qubit 1.
pub fn cnot() -> Mat4 {
    let (o, l) = (real(0.0), real(1.0));
    Mat4::new(l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o)
}

/// `exp(-i pi/4 XX)`, the Weyl chamber representative of the CNOT class.
pub fn cnot_weyl() -> Mat4 {
    let d = real(FRAC_1_SQRT_2);
    let m = c(0.0, -FRAC_1_SQRT_2);
    let o = real(0.0);
    Mat4::new(d, o, o, m, o, d, m, o, o, m, d, o, m, o, o, d)
}

/// Magic (Bell) basis: columns `(|00>+|11>)`, `i(|00>-|11>)`, `i(|01>+|10>)`,
/// `(|01>-|10>)`, each over sqrt 2. In this basis local gates are real
/// orthogonal and the canonical gate is diagonal.
pub fn magic_basis() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    let (o, r, i) = (real(0.0), real(s), c(0.0, s));
    Mat4::new(
        r, i, o, o, //
        o, o, i, r, //
        o, o, i, -r, //
        r, -i, o, o,
    )
}

fn check_unitary(u: &Mat4) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect < tol::REJECT_NON_UNITARY {
        Ok(())
    } else {
        Err(Error::NonUnitaryInput(defect))
    }
}

/// `|tr(v^dagger u)| / 4`; equals 1 exactly when `u = e^{i phi} v`.
pub fn phase_invariant_fidelity(u: &Mat4, v: &Mat4) -> Result<f64> {
    check_unitary(u)?;
    check_unitary(v)?;
    Ok((v.adjoint() * u).trace().norm() / 4.0)
}

/// Makhlin's local invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MakhlinInvariants {
    pub g1: Complex64,
    pub g2: f64,
}

impl MakhlinInvariants {
    pub fn distance(&self, other: &Self) -> f64 {
        (self.g1 - other.g1).norm().max((self.g2 - other.g2).abs())
    }
}

/// `m = u_B^T u_B` with `u_B` the operator in the magic basis.
fn magic_gram(u: &Mat4) -> Mat4 {
    let q = magic_basis();
    let ub = q.adjoint() * u * q;
    ub.transpose() * ub
}

/// `SU(4)` representative `u / det(u)^{1/4}` on the principal branch.
pub fn project_su4(u: &Mat4) -> Mat4 {
    let det = u.determinant();
    let root = Complex64::from_polar(det.norm().powf(0.25), det.arg() / 4.0);
    u / root
}

/// `G1 = tr^2(m) / (16 det u)`, `G2 = (tr^2(m) - tr(m^2)) / (4 det u)`.
pub fn makhlin_invariants(u: &Mat4) -> Result<MakhlinInvariants> {
    check_unitary(u)?;
    let su = project_su4(u);
    let m = magic_gram(&su);
    let det = su.determinant();
    let tr = m.trace();
    let tr_sq = (m * m).trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr_sq) / (det * 4.0);
    Ok(MakhlinInvariants { g1, g2: g2.re })
}

/// Eigenvalue phases of a complex symmetric unitary `m`.
///
/// Such an `m` factors as `O D O^T` with real orthogonal `O`, so its real and
/// imaginary parts are commuting real symmetric matrices. A generic real
/// combination of the two has the same eigenvectors.
fn symmetric_unitary_phases(m: &Mat4) -> [f64; 4] {
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let mut best: Option<(f64, [f64; 4])> = None;
    for mix in [
        0.618_033_988_749_894_9,
        1.324_717_957_244_746,
        -2.236_067_977_499_79,
        0.414_213_562_373_095,
    ] {
        let blend: Matrix4<f64> = (re + im * mix + (re + im * mix).transpose()) * 0.5;
        let o = SymmetricEigen::new(blend).eigenvectors;
        let oc = o.map(real);
        let d = oc.transpose() * m * oc;
        let off = (0..4)
            .flat_map(|r| (0..4).map(move |col| (r, col)))
            .filter(|(r, col)| r != col)
            .map(|(r, col)| d[(r, col)].norm())
            .fold(0.0, f64::max);
        let phases = [d[(0, 0)].arg(), d[(1, 1)].arg(), d[(2, 2)].arg(), d[(3, 3)].arg()];
        if best.is_none_or(|(b, _)| off < b) {
            best = Some((off, phases));
        }
        if off < 1e-12 {
            break;
        }
    }
    best.map(|(_, p)| p).unwrap_or_default()
}

/// Reduces `x` into `[0, pi/2)`, sending values within round-off of `pi/2` to 0.
fn wrap_quarter(x: f64) -> f64 {
    let r = x.rem_euclid(FRAC_PI_2);
    if FRAC_PI_2 - r < 1e-11 {
        0.0
    } else {
        r
    }
}

/// Folds an arbitrary class vector into the canonical chamber using the local
/// symmetries: shifts of any coordinate by pi/2, permutations, and sign flips
/// of coordinate pairs.
pub fn fold_into_chamber(coords: [f64; 3]) -> [f64; 3] {
    const EPS: f64 = 1e-11;
    let base = coords.map(wrap_quarter);
    let sorted = |mut v: [f64; 3]| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let mut candidates: Vec<[f64; 3]> = [
        [false; 3],
        [true, true, false],
        [true, false, true],
        [false, true, true],
    ]
    .iter()
    .map(|flip| {
        let mut v = base;
        for (x, f) in v.iter_mut().zip(flip) {
            if *f {
                *x = wrap_quarter(FRAC_PI_2 - *x);
            }
        }
        sorted(v)
    })
    .filter(|v| v[0] + v[1] <= FRAC_PI_2 + EPS)
    .map(|mut v| {
        if v[2] < EPS && v[0] > FRAC_PI_4 {
            v[0] = FRAC_PI_2 - v[0];
            v = sorted(v);
        }
        v
    })
    .collect();
    candidates.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    candidates.first().copied().unwrap_or(base)
}

/// Canonical class vector `(c1, c2, c3)` of the non-local part of `u`.
pub fn weyl_coordinates(u: &Mat4) -> Result<[f64; 3]> {
    check_unitary(u)?;
    let m = magic_gram(&project_su4(u));
    // m has eigenvalues exp(2 i lambda_j), lambda the eigenphases of the
    // canonical gate, with sum(lambda) = 0 mod pi.
    let mut lambda = symmetric_unitary_phases(&m).map(|p| 0.5 * p);
    let excess = (lambda.iter().sum::<f64>() / std::f64::consts::PI).round();
    lambda[3] -= excess * std::f64::consts::PI;
    // For exp(i(c1 XX + c2 YY + c3 ZZ)) the Bell-state phases are
    // (c1-c2+c3, -c1+c2+c3, c1+c2-c3, -c1-c2-c3).
    let raw = [
        0.5 * (lambda[0] + lambda[2]),
        0.5 * (lambda[1] + lambda[2]),
        0.5 * (lambda[0] + lambda[1]),
    ];
    Ok(fold_into_chamber(raw))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactUpToPhase,
    LocallyEquivalent,
    Inequivalent,
}

/// Thresholds used by [`classify_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyTolerance {
    /// Exact-up-to-phase when `fidelity > 1 - fidelity`.
    pub fidelity: f64,
    /// Locally equivalent when both invariant differences are below this.
    pub invariants: f64,
}

impl Default for ClassifyTolerance {
    fn default() -> Self {
        Self {
            fidelity: tol::FIDELITY_EXACT,
            invariants: tol::MAKHLIN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub fidelity: f64,
    pub makhlin_g1: Complex64,
    pub makhlin_g2: f64,
    pub weyl_coords: [f64; 3],
    pub verdict: Verdict,
}

pub fn classify(u: &Mat4, target: &Mat4) -> Result<EquivalenceReport> {
    classify_with(u, target, ClassifyTolerance::default())
}

pub fn classify_with(u: &Mat4, target: &Mat4, tol: ClassifyTolerance) -> Result<EquivalenceReport> {
    let fidelity = phase_invariant_fidelity(u, target)?;
    let inv = makhlin_invariants(u)?;
    let target_inv = makhlin_invariants(target)?;
    let verdict = if fidelity > 1.0 - tol.fidelity {
        Verdict::ExactUpToPhase
    } else if (inv.g1 - target_inv.g1).norm() < tol.invariants && (inv.g2 - target_inv.g2).abs() < tol.invariants {
        Verdict::LocallyEquivalent
    } else {
        Verdict::Inequivalent
    };
    Ok(EquivalenceReport {
        fidelity,
        makhlin_g1: inv.g1,
        makhlin_g2: inv.g2,
        weyl_coords: weyl_coordinates(u)?,
        verdict,
    })
}
