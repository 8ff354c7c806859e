#![allow(dead_code)]

use cnot_steering::linalg::{c, expm_hermitian, kron, real, Mat2, Mat4};
use rand::Rng;

/// Haar-random SU(2) element from a uniformly random unit quaternion.
pub fn random_su2<R: Rng>(rng: &mut R) -> Mat2 {
    let q: [f64; 4] = loop {
        let v = [0; 4].map(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            break v.map(|x| x / n);
        }
    };
    // q0 I - i (q1 X + q2 Y + q3 Z)
    Mat2::new(c(q[0], -q[3]), c(-q[2], -q[1]), c(q[2], -q[1]), c(q[0], q[3]))
}

pub fn random_local<R: Rng>(rng: &mut R) -> Mat4 {
    kron(&random_su2(rng), &random_su2(rng))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, scale: f64) -> Mat4 {
    let a = Mat4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (a + a.adjoint()) * real(0.5 * scale)
}

pub fn random_unitary<R: Rng>(rng: &mut R) -> Mat4 {
    expm_hermitian(&random_hermitian(rng, 3.0), 1.0).unwrap()
}

/// Canonical two-qubit gate `exp(i (c1 XX + c2 YY + c3 ZZ))`.
pub fn canonical_gate(coords: [f64; 3]) -> Mat4 {
    use cnot_steering::linalg::{pauli_pair, Axis};
    let h = pauli_pair(Axis::X, Axis::X) * real(coords[0])
        + pauli_pair(Axis::Y, Axis::Y) * real(coords[1])
        + pauli_pair(Axis::Z, Axis::Z) * real(coords[2]);
    expm_hermitian(&h, -1.0).unwrap()
}
