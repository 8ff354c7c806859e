//! Dense complex 2×2 and 4×4 operator algebra.
//!
//! Two-qubit operators act on the computational basis `|q1 q2>` ordered as
//! `{|00>, |01>, |10>, |11>}`. Qubit 1 is the left (slow) tensor factor, so
//! `kron(a, b)` places `a` on qubit 1 and `b` on qubit 2.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Single-qubit operator.
pub type Mat2 = Matrix2<Complex64>;
/// Two-qubit operator in the `|q1 q2>` basis.
pub type Mat4 = Matrix4<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Standard Pauli matrix.
pub fn pauli(axis: Axis) -> Mat2 {
    let o = real(0.0);
    let l = real(1.0);
    match axis {
        Axis::X => Mat2::new(o, l, l, o),
        Axis::Y => Mat2::new(o, -I, I, o),
        Axis::Z => Mat2::new(l, o, o, -l),
    }
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn identity4() -> Mat4 {
    Mat4::identity()
}

/// Kronecker product with `a` acting on qubit 1 (row/column index `2*i1 + i2`).
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `sigma^a_1 sigma^b_2`.
pub fn pauli_pair(a: Axis, b: Axis) -> Mat4 {
    kron(&pauli(a), &pauli(b))
}

/// Pauli `axis` on qubit 1 (`which == 1`) or qubit 2.
pub fn on_qubit(op: &Mat2, which: u8) -> Mat4 {
    match which {
        1 => kron(op, &identity2()),
        _ => kron(&identity2(), op),
    }
}

/// `max |a_ij - b_ij|`.
pub fn max_norm_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_norm(a: &Mat4) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `max |H - H^dagger|`.
pub fn hermiticity_defect(h: &Mat4) -> f64 {
    max_norm_diff(h, &h.adjoint())
}

/// `max |U^dagger U - I|`.
pub fn unitarity_defect(u: &Mat4) -> f64 {
    max_norm_diff(&(u.adjoint() * u), &identity4())
}

pub fn is_hermitian(h: &Mat4) -> bool {
    hermiticity_defect(h) < tol::HERMITIAN
}

pub fn is_unitary(u: &Mat4) -> bool {
    unitarity_defect(u) < tol::UNITARY
}

pub fn commutator(a: &Mat4, b: &Mat4) -> Mat4 {
    a * b - b * a
}

/// `exp(-i * angle * h)` for Hermitian `h`, built from the eigendecomposition
/// `h = V diag(w) V^dagger` so that the result is unitary to round-off.
pub fn expm_hermitian(h: &Mat4, angle: f64) -> Result<Mat4> {
    let defect = hermiticity_defect(h);
    if !(defect < tol::REJECT_NON_HERMITIAN) {
        return Err(Error::NonHermitianInput(defect));
    }
    if angle == 0.0 {
        return Ok(identity4());
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let v = orthonormalize(eig.eigenvectors);
    let phases = Mat4::from_diagonal(&eig.eigenvalues.map(|w| Complex64::from_polar(1.0, -angle * w)));
    Ok(v * phases * v.adjoint())
}

/// Two passes of modified Gram-Schmidt over the columns. Applied to a nearly
/// unitary matrix this removes its accumulated non-unitary part.
pub fn orthonormalize(mut v: Mat4) -> Mat4 {
    for _ in 0..2 {
        for j in 0..4 {
            for i in 0..j {
                let proj = v.column(i).dotc(&v.column(j));
                let ci = v.column(i).into_owned();
                v.column_mut(j).axpy(-proj, &ci, real(1.0));
            }
            let norm = v.column(j).norm();
            v.column_mut(j).unscale_mut(norm);
        }
    }
    v
}

/// `exp(-i * angle/2 * sigma_axis)`, i.e. the rotation `R_axis(angle)`.
pub fn rotation(axis: Axis, angle: f64) -> Mat2 {
    let (s, co) = (0.5 * angle).sin_cos();
    identity2() * real(co) - pauli(axis) * (I * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn mat4_close(a: &Mat4, b: &Mat4, eps: f64) -> bool {
        max_norm_diff(a, b) < eps
    }

    /// Independent route: truncated Taylor series with scaling and squaring.
    fn expm_taylor(h: &Mat4, angle: f64) -> Mat4 {
        let a = h.map(|x| x * (-I * angle));
        let norm = a.iter().map(|x| x.norm()).sum::<f64>();
        let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0) as u32;
        let scaled = a.unscale(2f64.powi(squarings as i32));
        let mut term = identity4();
        let mut sum = identity4();
        for n in 1..30 {
            term = term * scaled / real(n as f64);
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(Axis::X), Mat2::new(real(0.), real(1.), real(1.), real(0.)));
        assert_eq!(pauli(Axis::Y), Mat2::new(real(0.), c(0., -1.), c(0., 1.), real(0.)));
        assert_eq!(pauli(Axis::Z), Mat2::new(real(1.), real(0.), real(0.), real(-1.)));
        for ax in [Axis::X, Axis::Y, Axis::Z] {
            let p = pauli(ax);
            assert_eq!(p, p.adjoint());
            assert_eq!(p * p, identity2());
            assert_eq!(p.trace(), real(0.0));
        }
    }

    #[test]
    fn kron_layout() {
        assert_eq!(kron(&identity2(), &identity2()), identity4());

        let xi = kron(&pauli(Axis::X), &identity2());
        let expected = Mat4::from_fn(|r, col| if (r + 2) % 4 == col { real(1.) } else { real(0.) });
        assert_eq!(xi, expected);

        let xx = pauli_pair(Axis::X, Axis::X);
        let anti = Mat4::from_fn(|r, col| if r + col == 3 { real(1.) } else { real(0.) });
        assert_eq!(xx, anti);

        // Z on qubit 1 flips the sign of |10>, |11>.
        let zi = on_qubit(&pauli(Axis::Z), 1);
        assert_eq!(zi.diagonal().map(|x| x.re).as_slice(), &[1., 1., -1., -1.]);
        let iz = on_qubit(&pauli(Axis::Z), 2);
        assert_eq!(iz.diagonal().map(|x| x.re).as_slice(), &[1., -1., 1., -1.]);
    }

    #[test]
    fn expm_zero_angle() {
        let h = pauli_pair(Axis::Y, Axis::Z) + pauli_pair(Axis::X, Axis::X);
        assert_eq!(expm_hermitian(&h, 0.0).unwrap(), identity4());
    }

    #[test]
    fn expm_xx_quarter_turn_is_cnot_weyl() {
        let u = expm_hermitian(&pauli_pair(Axis::X, Axis::X), FRAC_PI_4).unwrap();
        let d = real(FRAC_1_SQRT_2);
        let o = real(0.0);
        let m = c(0.0, -FRAC_1_SQRT_2);
        let expected = Mat4::new(d, o, o, m, o, d, m, o, o, m, d, o, m, o, o, d);
        assert!(mat4_close(&u, &expected, 1e-15));
    }

    #[test]
    fn expm_diagonal_closed_form() {
        // exp(-i phi Z1) = diag(e^{-i phi}, e^{-i phi}, e^{i phi}, e^{i phi})
        let z1 = on_qubit(&pauli(Axis::Z), 1);
        let u = expm_hermitian(&z1, FRAC_PI_2).unwrap();
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(-I, -I, I, I));
        assert!(mat4_close(&u, &expected, 1e-15));
        let u = expm_hermitian(&z1, PI).unwrap();
        assert!(mat4_close(&u, &(-identity4()), 1e-15));
    }

    #[test]
    fn orthonormalize_repairs_drift() {
        let u = expm_hermitian(&pauli_pair(Axis::X, Axis::Y), 0.3).unwrap();
        let drifted = u * real(1.0 + 1e-9);
        assert!(unitarity_defect(&drifted) > 1e-9);
        let fixed = orthonormalize(drifted);
        assert!(unitarity_defect(&fixed) < 1e-15);
        assert!(mat4_close(&fixed, &u, 1e-14));
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut h = pauli_pair(Axis::X, Axis::Z);
        h[(0, 1)] += real(1e-6);
        assert!(matches!(expm_hermitian(&h, 1.0), Err(Error::NonHermitianInput(_))));
    }

    #[test]
    fn expm_matches_taylor_oracle() {
        let h = pauli_pair(Axis::X, Axis::X).scale(0.7)
            + pauli_pair(Axis::Y, Axis::Z).scale(-1.3)
            + on_qubit(&pauli(Axis::X), 1).scale(2.1)
            + on_qubit(&pauli(Axis::Y), 2).scale(0.4);
        for angle in [0.1, 1.0, -2.5, 7.0] {
            let a = expm_hermitian(&h, angle).unwrap();
            let b = expm_taylor(&h, angle);
            assert!(mat4_close(&a, &b, 1e-12), "angle {angle}");
        }
    }

    #[test]
    fn max_norm_diff_examples() {
        let id = identity4();
        assert_eq!(max_norm_diff(&id, &id), 0.0);
        assert_eq!(max_norm_diff(&id, &(-id)), 2.0);
        let rotated = id * Complex64::from_polar(1.0, FRAC_PI_2);
        assert!((max_norm_diff(&id, &rotated) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rotation_convention() {
        // R_y(-pi/2) = exp(+i pi/4 sigma_y)
        let r = rotation(Axis::Y, -FRAC_PI_2);
        let e = expm_hermitian(&on_qubit(&pauli(Axis::Y), 1), -FRAC_PI_4).unwrap();
        assert!(mat4_close(&on_qubit(&r, 1), &e, 1e-15));
        for ax in [Axis::X, Axis::Y, Axis::Z] {
            let r = rotation(ax, 0.37);
            assert!((r.adjoint() * r - identity2()).iter().all(|x| x.norm() < 1e-15));
        }
    }
}
