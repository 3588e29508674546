//! Closed-form conformal maps as composition trees.
//!
//! An [`AnalyticMap`] is a pair of expression trees (forward and inverse)
//! whose leaves are elementary maps with closed-form evaluation, derivative
//! and inverse: Möbius transformations, integer powers, principal roots,
//! real scalings, rigid rotations, disk automorphisms and truncated-jet
//! evaluation. A dedicated symmetrization node realizes the `q`-fold
//! equivariant construction `z ↦ [F((z/σ)^q)]^{1/q}` with per-sector branch
//! tracking, which keeps the result single-valued and exactly equivariant
//! under rotation by `2π/q`.
//!
//! Derivatives at a point are computed by the exact chain rule over leaf
//! derivatives along the evaluation orbit, never by finite differences.

mod slit;
mod tower;

pub use slit::{
    biaccessibility_probe, intrinsic_rotation, prop5_root, q_slit_uniformizer,
    single_slit_uniformizer, BiaccessProbe, ProbeOptions,
};
pub use tower::{
    mu_scaling_ratios, tower_build, tower_verify, LevelCheck, MuEstimate, MuScaling, TowerJson,
    TowerLevel, TowerLevelJson, TowerReport,
};

use crate::jet::{arg01, JetSeries};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConformalError {
    #[error("evaluation outside the nominal domain at z = {re} + {im}i: {reason}")]
    DomainViolation { re: f64, im: f64, reason: String },
    #[error("no consistent branch sector for z = {re} + {im}i")]
    BranchError { re: f64, im: f64 },
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("tower depth {requested} exceeds available chain length {available}")]
    DepthExceeded { requested: usize, available: usize },
    #[error("inscribed-disk certification failed at level {level}: {reason}")]
    CertificationFailure { level: usize, reason: String },
}

/// Geometric data of the slit disk `D(ε, q)`: the disk of radius `eps0`
/// minus the `q` radial slits `{ t·e^{2πij/q} : eps ≤ t < eps0 }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitDomain {
    pub eps0: f64,
    pub eps: f64,
    pub q: u32,
}

impl SlitDomain {
    pub fn new(eps: f64, eps0: f64, q: u32) -> Result<Self, ConformalError> {
        if !(eps > 0.0 && eps < eps0 && q >= 1) {
            return Err(ConformalError::InvalidConstruction(format!(
                "slit domain needs 0 < eps < eps0 and q ≥ 1, got eps = {eps}, eps0 = {eps0}, q = {q}"
            )));
        }
        Ok(Self { eps0, eps, q })
    }

    /// Distance from `z` to the nearest slit ray segment (0 when exactly on
    /// a slit).
    pub fn on_slit(&self, z: Complex64) -> bool {
        if z.is_zero() {
            return false;
        }
        let r = z.norm();
        if r < self.eps || r >= self.eps0 {
            return false;
        }
        let sector_angle = arg01(z) * self.q as f64;
        sector_angle.fract() == 0.0
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < self.eps0 && !self.on_slit(z)
    }
}

/// A Möbius transformation `(az + b)/(cz + d)`, `ad − bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, ConformalError> {
        if (a * d - b * c).norm() < 1e-14 {
            return Err(ConformalError::InvalidConstruction(
                "Möbius determinant vanishes".into(),
            ));
        }
        Ok(Self { a, b, c, d })
    }

    /// The Cayley-type involution `(1 − z)/(1 + z)` exchanging the unit
    /// disk and the right half-plane.
    pub fn disk_to_half_plane() -> Self {
        Self {
            a: -Complex64::one(),
            b: Complex64::one(),
            c: Complex64::one(),
            d: Complex64::one(),
        }
    }

    pub fn translation(b: Complex64) -> Self {
        Self {
            a: Complex64::one(),
            b,
            c: Complex64::zero(),
            d: Complex64::one(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// Leaf maps of the composition tree.
#[derive(Clone, Debug)]
pub enum ElementaryMap {
    Identity,
    Mobius(Mobius),
    /// `z^q`.
    Power(u32),
    /// Principal `q`-th root (branch cut on the negative real axis).
    PrincipalRoot(u32),
    /// Real scaling `z ↦ s·z`, `s > 0`.
    Scale(f64),
    /// Rigid rotation `z ↦ e^{2πiα} z`.
    Rotation(f64),
    /// Disk automorphism `z ↦ (z − b)/(1 − b̄ z)` fixing the unit circle.
    DiskAuto(Complex64),
    /// Evaluation of a truncated jet (polynomial); inverse is the reverted
    /// jet, valid near the origin to truncation accuracy.
    Jet(JetSeries<Complex64>),
}

impl ElementaryMap {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Identity => z,
            Self::Mobius(m) => m.eval(z),
            Self::Power(q) => z.powu(*q),
            Self::PrincipalRoot(q) => {
                if z.is_zero() {
                    Complex64::zero()
                } else {
                    let (r, theta) = z.to_polar();
                    Complex64::from_polar(r.powf(1.0 / *q as f64), theta / *q as f64)
                }
            }
            Self::Scale(s) => z * *s,
            Self::Rotation(alpha) => z * Complex64::from_polar(1.0, std::f64::consts::TAU * alpha),
            Self::DiskAuto(b) => (z - b) / (Complex64::one() - b.conj() * z),
            Self::Jet(jet) => {
                // Horner evaluation of c_1 z + … + c_N z^N.
                let mut acc = Complex64::zero();
                for c in jet.coeffs().iter().rev() {
                    acc = acc * z + c;
                }
                acc * z
            }
        }
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Identity => Complex64::one(),
            Self::Mobius(m) => m.derivative(z),
            Self::Power(q) => Complex64::new(*q as f64, 0.0) * z.powu(q - 1),
            Self::PrincipalRoot(q) => {
                // (z^{1/q})' = z^{1/q}/(q z); singular at 0.
                let root = self.eval(z);
                root / (Complex64::new(*q as f64, 0.0) * z)
            }
            Self::Scale(s) => Complex64::new(*s, 0.0),
            Self::Rotation(alpha) => Complex64::from_polar(1.0, std::f64::consts::TAU * alpha),
            Self::DiskAuto(b) => {
                let den = Complex64::one() - b.conj() * z;
                (Complex64::one() - b.norm_sqr()) / (den * den)
            }
            Self::Jet(jet) => {
                let mut acc = Complex64::zero();
                for (i, c) in jet.coeffs().iter().enumerate().rev() {
                    acc = acc * z + c * Complex64::new((i + 1) as f64, 0.0);
                }
                acc
            }
        }
    }

    fn inverse(&self) -> ElementaryMap {
        match self {
            Self::Identity => Self::Identity,
            Self::Mobius(m) => Self::Mobius(m.inverse()),
            Self::Power(q) => Self::PrincipalRoot(*q),
            Self::PrincipalRoot(q) => Self::Power(*q),
            Self::Scale(s) => Self::Scale(1.0 / s),
            Self::Rotation(alpha) => Self::Rotation(-alpha),
            Self::DiskAuto(b) => Self::DiskAuto(-b),
            Self::Jet(jet) => Self::Jet(jet.invert().expect("invertible jet leaf")),
        }
    }
}

/// Nominal-domain guard attached to an expression.
#[derive(Clone, Debug)]
pub enum DomainGuard {
    /// Open disk of the given radius (boundary allowed within slack for
    /// boundary-correspondence sampling).
    Disk { radius: f64 },
    /// Slit disk `D(ε, q)`.
    Slit(SlitDomain),
}

impl DomainGuard {
    fn check(&self, z: Complex64) -> Result<(), ConformalError> {
        const BOUNDARY_SLACK: f64 = 1e-9;
        match self {
            Self::Disk { radius } => {
                if z.norm() > radius * (1.0 + BOUNDARY_SLACK) {
                    return Err(ConformalError::DomainViolation {
                        re: z.re,
                        im: z.im,
                        reason: format!("outside the disk of radius {radius}"),
                    });
                }
                Ok(())
            }
            Self::Slit(d) => {
                if z.norm() > d.eps0 * (1.0 + BOUNDARY_SLACK) {
                    return Err(ConformalError::DomainViolation {
                        re: z.re,
                        im: z.im,
                        reason: format!("outside the disk of radius {}", d.eps0),
                    });
                }
                if d.on_slit(z) {
                    return Err(ConformalError::DomainViolation {
                        re: z.re,
                        im: z.im,
                        reason: "on a slit".into(),
                    });
                }
                Ok(())
            }
        }
    }
}

/// Expression tree of an analytic map.
#[derive(Clone, Debug)]
pub enum MapExpr {
    Elem(ElementaryMap),
    /// Composition applied left to right: `Chain([f, g]) = g ∘ f`.
    Chain(Vec<MapExpr>),
    /// `z ↦ post·[inner((z/pre)^q)]^{1/q}` with the root branch tracked per
    /// angular sector of `z`, making the map single-valued, analytic across
    /// the interior ray segments and exactly equivariant under rotation by
    /// `2π/q`. Branch selection: of the `q` roots, take the one nearest in
    /// angle to `z` itself. The map preserves each closed half-sector wedge
    /// between a slit ray and a mid-sector line (both are reflection
    /// symmetries of the domain), so the true value's direction is always
    /// within `π/q` of `z`'s — the nearest root is the right one.
    Symmetrized {
        q: u32,
        pre: f64,
        post: f64,
        inner: Box<MapExpr>,
    },
    /// Domain check before evaluating the inner expression.
    Guarded {
        guard: DomainGuard,
        inner: Box<MapExpr>,
    },
}

impl MapExpr {
    fn eval(&self, z: Complex64) -> Result<Complex64, ConformalError> {
        Ok(self.eval_with_derivative(z)?.0)
    }

    /// Returns `(value, derivative)` at `z` by the chain rule over leaves.
    fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64), ConformalError> {
        match self {
            Self::Elem(e) => Ok((e.eval(z), e.derivative(z))),
            Self::Chain(parts) => {
                let mut value = z;
                let mut deriv = Complex64::one();
                for part in parts {
                    let (v, d) = part.eval_with_derivative(value)?;
                    value = v;
                    deriv = deriv * d;
                }
                Ok((value, deriv))
            }
            Self::Symmetrized { q, pre, post, inner } => {
                let qf = *q as f64;
                if z.is_zero() {
                    let (_, d0) = inner.eval_with_derivative(Complex64::zero())?;
                    // Positive-real inner derivative by construction; take
                    // the principal real root.
                    let root = d0.norm().powf(1.0 / qf)
                        * Complex64::from_polar(1.0, d0.arg() / qf);
                    return Ok((Complex64::zero(), root * *post / *pre));
                }
                let u = (z / *pre).powu(*q);
                let (w, dw) = inner.eval_with_derivative(u)?;
                if w.is_zero() {
                    return Err(ConformalError::BranchError { re: z.re, im: z.im });
                }
                // The root nearest in angle to z's own direction.
                let target = arg01(z);
                let (r, theta) = w.to_polar();
                let base = theta / std::f64::consts::TAU / qf;
                let k = ((target - base) * qf).round();
                let value =
                    Complex64::from_polar(r.powf(1.0 / qf), std::f64::consts::TAU * (base + k / qf))
                        * *post;
                // dT/dz = T·u·W'(u)/(z·W(u)).
                let deriv = value * u * dw / (z * w);
                Ok((value, deriv))
            }
            Self::Guarded { guard, inner } => {
                guard.check(z)?;
                inner.eval_with_derivative(z)
            }
        }
    }
}

/// An evaluable conformal map with an explicit inverse tree and a nominal
/// domain description.
#[derive(Clone, Debug)]
pub struct AnalyticMap {
    forward: MapExpr,
    backward: MapExpr,
    /// Human-readable description of the nominal domain.
    pub domain: String,
}

impl AnalyticMap {
    pub fn identity() -> Self {
        Self {
            forward: MapExpr::Elem(ElementaryMap::Identity),
            backward: MapExpr::Elem(ElementaryMap::Identity),
            domain: "C".into(),
        }
    }

    pub fn rotation(alpha: f64) -> Self {
        Self {
            forward: MapExpr::Elem(ElementaryMap::Rotation(alpha)),
            backward: MapExpr::Elem(ElementaryMap::Rotation(-alpha)),
            domain: "C".into(),
        }
    }

    pub fn scale(s: f64) -> Self {
        Self {
            forward: MapExpr::Elem(ElementaryMap::Scale(s)),
            backward: MapExpr::Elem(ElementaryMap::Scale(1.0 / s)),
            domain: "C".into(),
        }
    }

    pub fn mobius(m: Mobius) -> Self {
        Self {
            forward: MapExpr::Elem(ElementaryMap::Mobius(m)),
            backward: MapExpr::Elem(ElementaryMap::Mobius(m.inverse())),
            domain: "C ∖ pole".into(),
        }
    }

    /// Wraps a truncated jet as an evaluable map; the inverse is the
    /// reverted jet (accurate to truncation order near 0).
    pub fn jet(jet: JetSeries<Complex64>) -> Result<Self, ConformalError> {
        let inverse = jet
            .invert()
            .map_err(|e| ConformalError::InvalidConstruction(e.to_string()))?;
        Ok(Self {
            forward: MapExpr::Elem(ElementaryMap::Jet(jet)),
            backward: MapExpr::Elem(ElementaryMap::Jet(inverse)),
            domain: "neighborhood of 0 (jet accuracy)".into(),
        })
    }

    pub(crate) fn from_parts(forward: MapExpr, backward: MapExpr, domain: String) -> Self {
        Self {
            forward,
            backward,
            domain,
        }
    }

    pub(crate) fn forward_expr(&self) -> &MapExpr {
        &self.forward
    }

    pub(crate) fn backward_expr(&self) -> &MapExpr {
        &self.backward
    }

    /// Composition `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &AnalyticMap) -> AnalyticMap {
        AnalyticMap {
            forward: MapExpr::Chain(vec![self.forward.clone(), other.forward.clone()]),
            backward: MapExpr::Chain(vec![other.backward.clone(), self.backward.clone()]),
            domain: self.domain.clone(),
        }
    }

    /// The inverse map (swapped trees).
    pub fn inverse(&self) -> AnalyticMap {
        AnalyticMap {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            domain: format!("image of ({})", self.domain),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, ConformalError> {
        self.forward.eval(z)
    }

    pub fn eval_inverse(&self, w: Complex64) -> Result<Complex64, ConformalError> {
        self.backward.eval(w)
    }

    /// Value and derivative at `z`, chain rule over leaf derivatives.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64), ConformalError> {
        self.forward.eval_with_derivative(z)
    }

    /// Derivative at the origin.
    pub fn derivative0(&self) -> Result<Complex64, ConformalError> {
        Ok(self.forward.eval_with_derivative(Complex64::zero())?.1)
    }

    /// `m`-fold forward iteration.
    pub fn iterate(&self, z: Complex64, m: u32) -> Result<Complex64, ConformalError> {
        let mut x = z;
        for _ in 0..m {
            x = self.eval(x)?;
        }
        Ok(x)
    }
}

/// Deterministic sunflower sampling of the disk of radius `r` (golden-angle
/// spiral), used by the verification sweeps.
pub fn disk_samples(r: f64, count: usize) -> Vec<Complex64> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (1..=count)
        .map(|k| {
            let rho = r * ((k as f64 - 0.5) / count as f64).sqrt();
            let theta = std::f64::consts::TAU * (k as f64 / golden).fract();
            Complex64::from_polar(rho, theta)
        })
        .collect()
}

/// Uniform samples of the circle of radius `r`.
pub fn circle_samples(r: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / count as f64))
        .collect()
}
