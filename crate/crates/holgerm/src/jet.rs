//! Truncated jets of holomorphic germs fixing the origin.
//!
//! A [`JetSeries`] stores the coefficients `c_1..c_N` of a formal series
//! `f(z) = c_1 z + c_2 z² + … + c_N z^N` (no constant term: the germ fixes
//! `0`). Jets with `c_1 ≠ 0` form a group under composition truncated at
//! order `N`; composition, reversion and iteration here are exact in the
//! truncated ring — the result's coefficients through order `N` depend only
//! on the inputs' coefficients through order `N`.

use crate::qz::QZRational;
use crate::scalar::Scalar;
use crate::tol;
use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("truncation order must be at least 1")]
    InvalidOrder,
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("jet is not invertible: |c1| = {magnitude:e} is at or below the zero tolerance")]
    NotInvertible { magnitude: f64 },
}

/// A truncated power series `Σ_{k=1..N} c_k z^k` over the scalar field `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSeries<S = Complex64> {
    coeffs: Vec<S>,
}

impl<S: Scalar> JetSeries<S> {
    /// Builds a jet from `c_1..c_N`. Order-0 truncations are rejected.
    pub fn new(coeffs: Vec<S>) -> Result<Self, JetError> {
        if coeffs.is_empty() {
            return Err(JetError::InvalidOrder);
        }
        Ok(Self { coeffs })
    }

    /// The identity germ `z` at the given order.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let mut coeffs = vec![S::zero(); order];
        coeffs[0] = S::one();
        Self { coeffs }
    }

    /// The linear germ `λz` at the given order.
    pub fn linear(lambda: S, order: usize) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let mut coeffs = vec![S::zero(); order];
        coeffs[0] = lambda;
        Self { coeffs }
    }

    /// Builds the jet of a monomial `c z^k`.
    pub fn monomial(c: S, k: usize, order: usize) -> Self {
        assert!(k >= 1 && k <= order);
        let mut coeffs = vec![S::zero(); order];
        coeffs[k - 1] = c;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `z^k`, `1 ≤ k ≤ N`.
    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k - 1]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// The multiplier `λ = c_1 = f'(0)`.
    pub fn multiplier(&self) -> &S {
        &self.coeffs[0]
    }

    /// Whether the jet represents a germ of diffeomorphism (`c_1 ≠ 0` up to
    /// the zero tolerance; exact fields test exactly).
    pub fn is_germ(&self) -> bool {
        if S::EXACT {
            !self.coeffs[0].is_zero()
        } else {
            self.coeffs[0].modulus() > tol::TOL_ZERO
        }
    }

    /// Truncates to a lower order `M ≤ N`.
    pub fn truncated(&self, m: usize) -> Self {
        assert!(m >= 1 && m <= self.order());
        Self {
            coeffs: self.coeffs[..m].to_vec(),
        }
    }

    /// Zero-pads to a higher order.
    pub fn extended(&self, m: usize) -> Self {
        assert!(m >= self.order());
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m, S::zero());
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self, JetError> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, JetError> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Truncated product of two jets (both without constant term, so the
    /// result vanishes to order 2; degrees above `N` are discarded).
    pub fn mul_truncated(&self, other: &Self) -> Result<Self, JetError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let deg_a = i + 1;
            for (j, b) in other.coeffs.iter().enumerate() {
                let deg = deg_a + j + 1;
                if deg > n {
                    break;
                }
                out[deg - 1] = out[deg - 1].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Termwise derivative as a raw polynomial `c_1 + 2c_2 z + … + N c_N z^{N−1}`
    /// (constant term allowed, degrees `0..N−1`).
    pub(crate) fn derivative_poly(&self) -> Vec<S> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * S::from_integer((i + 1) as i64))
            .collect()
    }

    /// Maximum coefficient modulus.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.modulus())
            .fold(0.0, f64::max)
    }

    /// Maximum coefficient modulus of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64, JetError> {
        Ok(self.sub(other)?.max_coeff_modulus())
    }

    fn check_order(&self, other: &Self) -> Result<(), JetError> {
        if self.order() != other.order() {
            return Err(JetError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Composition `f ∘ g` truncated to order `N`, by Horner evaluation of
    /// `f` at `g` in the truncated ring.
    pub fn compose(&self, g: &Self) -> Result<Self, JetError> {
        self.check_order(g)?;
        let n = self.order();
        // f(w) = w·(c_1 + w·(c_2 + … + w·c_N)); p runs through the inner
        // polynomial as a raw poly with constant term, capped at degree N−1.
        let mut p: Vec<S> = vec![self.coeffs[n - 1].clone()];
        for k in (1..n).rev() {
            p = raw_mul_trunc(&p, &g.coeffs, n - 1);
            if p.is_empty() {
                p.push(S::zero());
            }
            p[0] = p[0].clone() + self.coeffs[k - 1].clone();
        }
        // result = p(g)·g, degrees 1..N.
        let mut out = vec![S::zero(); n];
        for (i, a) in p.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                let deg = i + j + 1;
                if deg > n {
                    break;
                }
                out[deg - 1] = out[deg - 1].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Compositional inverse (series reversion): the jet `g` with
    /// `f∘g = g∘f = id` to order `N`.
    pub fn invert(&self) -> Result<Self, JetError> {
        if !self.is_germ() {
            return Err(JetError::NotInvertible {
                magnitude: self.coeffs[0].modulus(),
            });
        }
        let n = self.order();
        let c1 = self.coeffs[0].clone();
        let mut g = Self::linear(S::one() / c1.clone(), n);
        // Solve order by order: with g known through order m−1 the residual
        // r = f∘g − id has r_m = c_1·g_m + (terms free of g_m).
        for m in 2..=n {
            let r = self.compose(&g)?;
            let correction = r.coeffs[m - 1].clone();
            g.coeffs[m - 1] = g.coeffs[m - 1].clone() - correction / c1.clone();
        }
        Ok(g)
    }

    /// `m`-fold iterate under composition; `m = 0` yields the identity and
    /// negative `m` iterates the inverse.
    pub fn iterate(&self, m: i64) -> Result<Self, JetError> {
        let n = self.order();
        if m == 0 {
            return Ok(Self::identity(n));
        }
        let base = if m < 0 { self.invert()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        // Square-and-multiply in the composition group.
        let mut acc: Option<Self> = None;
        let mut pw = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => pw.clone(),
                    Some(a) => a.compose(&pw)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            pw = pw.compose(&pw)?;
        }
        Ok(acc.expect("m != 0"))
    }

    /// Commutation test: the maximum coefficient modulus of `f∘g − g∘f`
    /// and whether it is at or below `tolerance`.
    pub fn commutes_to_order(&self, g: &Self, tolerance: f64) -> Result<CommutationCheck, JetError> {
        let fg = self.compose(g)?;
        let gf = g.compose(self)?;
        let residual = fg.distance(&gf)?;
        Ok(CommutationCheck {
            residual,
            commutes: residual <= tolerance,
        })
    }
}

/// Product of raw polynomials (constant term allowed), truncated to
/// `max_deg`.
pub(crate) fn raw_mul_trunc<S: Scalar>(p: &[S], g_coeffs: &[S], max_deg: usize) -> Vec<S> {
    // g_coeffs holds degrees 1..; p holds degrees 0..
    let mut out = vec![S::zero(); max_deg + 1];
    for (i, a) in p.iter().enumerate() {
        if i > max_deg {
            break;
        }
        if a.is_zero() {
            continue;
        }
        for (j, b) in g_coeffs.iter().enumerate() {
            let deg = i + j + 1;
            if deg > max_deg {
                break;
            }
            out[deg] = out[deg].clone() + a.clone() * b.clone();
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationCheck {
    pub residual: f64,
    pub commutes: bool,
}

impl JetSeries<Complex64> {
    /// Converts coefficients exactly to Gaussian rationals (every finite
    /// double is dyadic).
    pub fn to_exact(&self) -> JetSeries<crate::scalar::GaussianRational> {
        JetSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| crate::scalar::GaussianRational::from_complex(*c))
                .collect(),
        }
    }

    /// The rotation number `ρ(f) = (1/2πi)·log f'(0)` as the representative
    /// with real part in `[0, 1)`; the imaginary part is `−log|λ|/(2π)`.
    pub fn rotation_number(&self) -> Result<Complex64, JetError> {
        if !self.is_germ() {
            return Err(JetError::NotInvertible {
                magnitude: self.coeffs[0].modulus(),
            });
        }
        let lambda = self.coeffs[0];
        Ok(Complex64::new(arg01(lambda), -lambda.norm().ln() / std::f64::consts::TAU))
    }
}

impl<S: Scalar> JetSeries<S> {
    /// Approximate complex image of the jet (identity on the float field).
    pub fn approx(&self) -> JetSeries<Complex64> {
        JetSeries {
            coeffs: self.coeffs.iter().map(|c| c.approx()).collect(),
        }
    }

    pub(crate) fn from_coeffs_unchecked(coeffs: Vec<S>) -> Self {
        Self { coeffs }
    }
}

/// Normalized argument `arg(z)/2π ∈ [0, 1)`.
pub fn arg01(z: Complex64) -> f64 {
    let mut a = z.arg() / std::f64::consts::TAU;
    if a < 0.0 {
        a += 1.0;
    }
    if a >= 1.0 {
        a -= 1.0;
    }
    a
}

/// Continued-fraction recognition of `alpha ∈ [0, 1)` as a reduced fraction
/// with denominator at most `q_max`. A convergent `p/q` is accepted only
/// when `|alpha − p/q| ≤ tol/q²`, which a generic irrational never achieves.
pub fn recognize_rational(alpha: f64, q_max: u64, tol: f64) -> Option<(u64, u64)> {
    let mut x = alpha.rem_euclid(1.0);
    // Convergents via the standard recurrence.
    let (mut p_prev, mut q_prev): (i128, i128) = (1, 0);
    let (mut p_cur, mut q_cur): (i128, i128) = (0, 1); // p/q = 0/1 (a0 = 0 for alpha in [0,1))
    for _ in 0..64 {
        let approx = p_cur as f64 / q_cur as f64;
        let err = (alpha.rem_euclid(1.0) - approx).abs();
        if q_cur as u64 <= q_max && err <= tol / (q_cur as f64 * q_cur as f64) {
            let p = (p_cur as u64) % (q_cur as u64).max(1);
            return Some((p, q_cur as u64));
        }
        if x == 0.0 {
            break;
        }
        x = 1.0 / x;
        let a = x.floor();
        if !a.is_finite() || a >= 1e18 {
            break;
        }
        x -= a;
        let a = a as i128;
        let p_next = a * p_cur + p_prev;
        let q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if q_cur as u64 > q_max {
            break;
        }
        // First step: x was alpha itself, a0 = 0 already consumed above.
    }
    None
}

/// Coarse dynamical type of a germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GermTag {
    Attracting,
    Repelling,
    IndifferentIrrational,
    ParabolicNondegenerate,
    ParabolicDegenerate,
    Undetermined,
}

/// Recognized rotation datum of a classified germ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rotation {
    Rational(QZRational),
    Angle(f64),
}

/// Classification of a germ: tag, multiplier and (when on the unit circle)
/// its rotation number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermClass {
    pub tag: GermTag,
    #[serde(with = "complex_pair")]
    pub multiplier: Complex64,
    pub rotation: Option<Rotation>,
}

/// Options for [`classify`].
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub tol_zero: f64,
    pub tol_unit: f64,
    pub tol_res: f64,
    pub tol_recog: f64,
    pub q_max: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol_zero: tol::TOL_ZERO,
            tol_unit: tol::TOL_UNIT,
            tol_res: tol::TOL_RES,
            tol_recog: tol::TOL_RECOG,
            q_max: tol::Q_MAX,
        }
    }
}

/// Classifies a germ by its multiplier and, on the unit circle, by rational
/// recognition of the rotation number with denominator bound `q_max`.
/// Irrationality is not certifiable numerically: when recognition fails the
/// tag is [`GermTag::Undetermined`] (the `IndifferentIrrational` tag is
/// reserved for externally asserted irrational rotations).
pub fn classify(f: &JetSeries<Complex64>, opts: &ClassifyOptions) -> Result<GermClass, JetError> {
    let lambda = *f.multiplier();
    if lambda.norm() <= opts.tol_zero {
        return Err(JetError::NotInvertible {
            magnitude: lambda.norm(),
        });
    }
    let r = lambda.norm();
    if r < 1.0 - opts.tol_unit {
        return Ok(GermClass {
            tag: GermTag::Attracting,
            multiplier: lambda,
            rotation: None,
        });
    }
    if r > 1.0 + opts.tol_unit {
        return Ok(GermClass {
            tag: GermTag::Repelling,
            multiplier: lambda,
            rotation: None,
        });
    }
    let alpha = arg01(lambda);
    match recognize_rational(alpha, opts.q_max, opts.tol_recog) {
        Some((p, q)) => {
            let rot = QZRational::new(p as i64, q).expect("reduced by recognition");
            let power = f.iterate(q as i64)?;
            let id = JetSeries::identity(f.order());
            let degenerate = power.distance(&id)? <= opts.tol_res;
            Ok(GermClass {
                tag: if degenerate {
                    GermTag::ParabolicDegenerate
                } else {
                    GermTag::ParabolicNondegenerate
                },
                multiplier: lambda,
                rotation: Some(Rotation::Rational(rot)),
            })
        }
        None => Ok(GermClass {
            tag: GermTag::Undetermined,
            multiplier: lambda,
            rotation: Some(Rotation::Angle(alpha)),
        }),
    }
}

/// Serde helpers for the shared `[re, im]` wire representation of complex
/// numbers.
pub mod complex_pair {
    use super::*;

    pub fn serialize<Ser: Serializer>(z: &Complex64, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let pair = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(pair[0], pair[1]))
    }
}

// JSON germ format shared by the CLI and every module:
// {"order": N, "coeffs": [[re, im], ...]} with index k−1 holding c_k.
impl Serialize for JetSeries<Complex64> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Wire {
            order: usize,
            coeffs: Vec<[f64; 2]>,
        }
        Wire {
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetSeries<Complex64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            order: usize,
            coeffs: Vec<[f64; 2]>,
        }
        let w = Wire::deserialize(d)?;
        if w.order == 0 || w.coeffs.len() != w.order {
            return Err(D::Error::custom(format!(
                "germ JSON needs order ≥ 1 with exactly `order` coefficients, got order {} with {}",
                w.order,
                w.coeffs.len()
            )));
        }
        Ok(JetSeries {
            coeffs: w.coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_traits::{One, Zero};

    fn jet(coeffs: &[(f64, f64)]) -> JetSeries<Complex64> {
        JetSeries::new(coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
    }

    fn real_jet(coeffs: &[f64]) -> JetSeries<Complex64> {
        JetSeries::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect()).unwrap()
    }

    #[test]
    fn compose_linear_left() {
        // λz ∘ (z + z²) scales coefficients.
        let lambda = Complex64::new(0.3, 0.4);
        let f = JetSeries::linear(lambda, 2);
        let g = real_jet(&[1.0, 1.0]);
        let h = f.compose(&g).unwrap();
        assert!((h.coeff(1) - lambda).norm() < 1e-15);
        assert!((h.coeff(2) - lambda).norm() < 1e-15);
    }

    #[test]
    fn compose_with_identity() {
        let f = real_jet(&[1.0, 1.0]);
        let id = JetSeries::identity(2);
        assert!(f.compose(&id).unwrap().distance(&f).unwrap() < 1e-15);
        assert!(id.compose(&f).unwrap().distance(&f).unwrap() < 1e-15);
    }

    #[test]
    fn compose_self_quadratic() {
        // (z+z²)∘(z+z²) = z + 2z² + 2z³ at order 3 (expand by hand).
        let f = real_jet(&[1.0, 1.0, 0.0]);
        let h = f.compose(&f).unwrap();
        let expected = real_jet(&[1.0, 2.0, 2.0]);
        assert!(h.distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn invert_examples() {
        let lambda = Complex64::new(2.0, -1.0);
        let f = JetSeries::linear(lambda, 4);
        let g = f.invert().unwrap();
        assert!((g.coeff(1) - 1.0 / lambda).norm() < 1e-15);

        // z+z² at order 3 reverts to z − z² + 2z³.
        let f = real_jet(&[1.0, 1.0, 0.0]);
        let g = f.invert().unwrap();
        assert!(g.distance(&real_jet(&[1.0, -1.0, 2.0])).unwrap() < 1e-14);
        let id = JetSeries::identity(3);
        assert!(f.compose(&g).unwrap().distance(&id).unwrap() < 1e-14);
        assert!(g.compose(&f).unwrap().distance(&id).unwrap() < 1e-14);

        assert!(id.invert().unwrap().distance(&id).unwrap() < 1e-15);
    }

    #[test]
    fn invert_rejects_zero_multiplier() {
        let f = real_jet(&[0.0, 1.0]);
        assert!(matches!(f.invert(), Err(JetError::NotInvertible { .. })));
    }

    #[test]
    fn iterate_examples() {
        // Rotation of order two squares to the identity.
        let r = JetSeries::linear(Complex64::new(-1.0, 0.0), 4);
        let sq = r.iterate(2).unwrap();
        assert!(sq.distance(&JetSeries::identity(4)).unwrap() < 1e-15);

        let f = real_jet(&[1.0, 1.0, 0.0]);
        assert!(f.iterate(2).unwrap().distance(&f.compose(&f).unwrap()).unwrap() < 1e-15);
        assert!(f.iterate(1).unwrap().distance(&f).unwrap() < 1e-15);
        assert!(f
            .iterate(-1)
            .unwrap()
            .distance(&f.invert().unwrap())
            .unwrap()
            < 1e-15);
    }

    #[test]
    fn order_mismatch_is_reported() {
        let f = real_jet(&[1.0, 1.0]);
        let g = real_jet(&[1.0, 1.0, 0.0]);
        assert!(matches!(
            f.compose(&g),
            Err(JetError::OrderMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn rotation_number_values() {
        let third = JetSeries::linear(Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0), 2);
        let rho = third.rotation_number().unwrap();
        assert!((rho.re - 1.0 / 3.0).abs() < 1e-12 && rho.im.abs() < 1e-12);

        let two = JetSeries::linear(Complex64::new(2.0, 0.0), 2);
        let rho = two.rotation_number().unwrap();
        assert!(rho.re.abs() < 1e-12);
        assert!((rho.im + 2.0f64.ln() / std::f64::consts::TAU).abs() < 1e-12);

        let id = JetSeries::identity(2);
        let rho = id.rotation_number().unwrap();
        assert!(rho.norm() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let opts = ClassifyOptions::default();
        let half = JetSeries::linear(Complex64::new(0.5, 0.0), 4);
        assert_eq!(classify(&half, &opts).unwrap().tag, GermTag::Attracting);

        let minus = JetSeries::linear(Complex64::new(-1.0, 0.0), 4);
        let c = classify(&minus, &opts).unwrap();
        assert_eq!(c.tag, GermTag::ParabolicDegenerate);
        assert_eq!(
            c.rotation,
            Some(Rotation::Rational(QZRational::new(1, 2).unwrap()))
        );

        let tangent = real_jet(&[1.0, 1.0, 0.0]);
        let c = classify(&tangent, &opts).unwrap();
        assert_eq!(c.tag, GermTag::ParabolicNondegenerate);
        assert_eq!(
            c.rotation,
            Some(Rotation::Rational(QZRational::new(0, 1).unwrap()))
        );
    }

    #[test]
    fn classify_golden_mean_is_undetermined() {
        let alpha = (5.0f64.sqrt() - 1.0) / 2.0;
        let f = JetSeries::linear(Complex64::from_polar(1.0, std::f64::consts::TAU * alpha), 8);
        let c = classify(&f, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.tag, GermTag::Undetermined);
    }

    #[test]
    fn classify_rational_rotation_iterate_is_identity_class() {
        let opts = ClassifyOptions::default();
        for &(p, q) in &[(1u64, 2u64), (1, 3), (2, 5)] {
            let r = JetSeries::linear(
                Complex64::from_polar(1.0, std::f64::consts::TAU * p as f64 / q as f64),
                6,
            );
            let power = r.iterate(q as i64).unwrap();
            let c = classify(&power, &opts).unwrap();
            let id_class = classify(&JetSeries::identity(6), &opts).unwrap();
            assert_eq!(c.tag, id_class.tag);
            assert_eq!(c.rotation, id_class.rotation);
        }
    }

    #[test]
    fn commutation_examples() {
        let f = JetSeries::linear(Complex64::new(0.5, 0.25), 5);
        let g = JetSeries::linear(Complex64::new(-2.0, 1.0), 5);
        let chk = f.commutes_to_order(&g, 1e-12).unwrap();
        assert!(chk.commutes && chk.residual == 0.0);

        let f = real_jet(&[1.0, 1.0, 0.0, 0.0]);
        let g = f.iterate(2).unwrap();
        let chk = f.commutes_to_order(&g, 1e-12).unwrap();
        assert!(chk.commutes);

        // Non-members: coefficient of z³ in the commutator of z+z² and
        // z+2z² is nonzero.
        let g = real_jet(&[1.0, 2.0, 0.0, 0.0]);
        let chk = f.commutes_to_order(&g, 1e-12).unwrap();
        assert!(!chk.commutes && chk.residual > 0.1);
    }

    #[test]
    fn exact_mode_matches_float() {
        let f = real_jet(&[1.0, 1.0, 0.0]);
        let exact = f.to_exact();
        let inv = exact.invert().unwrap();
        let expected: Vec<GaussianRational> = [1i64, -1, 2]
            .iter()
            .map(|&n| GaussianRational::from_integer(n))
            .collect();
        assert_eq!(inv.coeffs(), &expected[..]);
    }

    #[test]
    fn germ_json_round_trip() {
        let f = jet(&[(0.5, -0.25), (1.0, 2.0), (0.0, -3.5)]);
        let text = serde_json::to_string(&f).unwrap();
        let back: JetSeries<Complex64> = serde_json::from_str(&text).unwrap();
        assert_eq!(f, back);
        assert!(text.contains("\"order\":3"));
    }

    #[test]
    fn recognize_rejects_generic() {
        let golden = (5.0f64.sqrt() - 1.0) / 2.0;
        assert_eq!(recognize_rational(golden, 1_000_000, 1e-9), None);
        assert_eq!(recognize_rational(1.0 / 3.0, 1_000_000, 1e-9), Some((1, 3)));
        assert_eq!(recognize_rational(0.5, 10, 1e-9), Some((1, 2)));
        assert_eq!(recognize_rational(0.0, 10, 1e-9), Some((0, 1)));
    }
}
