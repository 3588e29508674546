//! Default numeric tolerances and search bounds.
//!
//! All equalities between floating-point quantities in this crate are
//! tolerance checks. The defaults below can be overridden per call through
//! the option structs of the individual modules; they are collected here so
//! that every threshold has one named home.

/// A coefficient with modulus at or below this is treated as zero
/// (germ invertibility test, leading-coefficient detection).
pub const TOL_ZERO: f64 = 1e-12;

/// Slack allowed when deciding whether a multiplier lies on the unit circle.
pub const TOL_UNIT: f64 = 1e-9;

/// Default residual bound for coefficient-wise identities between jets
/// (conjugacy checks, commutation tests, degeneracy tests).
pub const TOL_RES: f64 = 1e-8;

/// A Koenigs divisor `λ^n − λ` with modulus at or below this counts as a
/// resonance.
pub const TOL_DIV: f64 = 1e-10;

/// Largest denominator searched when recognising a rotation number as a
/// reduced fraction.
pub const Q_MAX: u64 = 1_000_000;

/// Tolerance used by continued-fraction rational recognition. A convergent
/// p/q is accepted only when |α − p/q| ≤ TOL_RECOG / q², i.e. when the
/// approximation is far better than a generic irrational admits.
pub const TOL_RECOG: f64 = 1e-9;

/// Pointwise tolerance for analytic-map identities (round trips,
/// equivariance, derivative audits).
pub const TOL_MAP: f64 = 1e-9;

/// Pointwise tolerance for cross-level identities in the tower construction.
pub const TOL_TOWER: f64 = 1e-7;

/// Separation threshold for the biaccessibility probe: two boundary limits
/// further apart than this certify a genuine two-sided boundary point.
pub const TOL_ACCESS: f64 = 1e-3;

/// Safety factor applied to the sampled inscribed-disk radius when
/// certifying the next tower level.
pub const DISK_SAFETY: f64 = 0.8;

/// Number of boundary samples used for inscribed-disk certification.
pub const BOUNDARY_SAMPLES: usize = 1 << 10;
