//! Numerical tolerances shared across the crate.

/// Maximum entrywise deviation of `H - H^dagger` for a matrix to count as Hermitian.
pub const HERMITIAN: f64 = 1e-13;

/// Maximum entrywise deviation of `U^dagger U - I` for a matrix to count as unitary.
pub const UNITARY: f64 = 1e-12;

/// Operator identities (steering identity, CNOT composition) are checked at this level.
pub const IDENTITY: f64 = 1e-10;

/// `expm_hermitian` rejects generators whose anti-Hermitian part exceeds this.
pub const REJECT_NON_HERMITIAN: f64 = 1e-10;

/// Equivalence routines reject inputs whose unitarity defect exceeds this.
pub const REJECT_NON_UNITARY: f64 = 1e-10;

/// Allowed deviation of a pulse area from the CNOT value pi/2.
pub const AREA: f64 = 1e-9;

/// Default absolute tolerance of the adaptive Simpson quadrature.
pub const QUADRATURE: f64 = 1e-12;

/// Tolerance on the pulse area when solving for gate times by bisection.
pub const BISECTION: f64 = 1e-12;

/// A gate is "exact up to phase" when its fidelity exceeds `1 - FIDELITY_EXACT`.
pub const FIDELITY_EXACT: f64 = 1e-9;

/// Makhlin invariants closer than this are treated as equal.
pub const MAKHLIN: f64 = 1e-8;

/// Accuracy expected from time-ordered propagation at the default step count.
pub const PROPAGATION: f64 = 1e-7;

/// Default number of steps per coupled segment.
pub const DEFAULT_STEPS: usize = 4096;
