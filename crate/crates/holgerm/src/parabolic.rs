//! Formal theory of nondegenerate parabolic germs.
//!
//! A germ with rotation number `p/q` and `f^q = z + a z^{n+1} + …`, `a ≠ 0`,
//! is formally conjugate to `e^{2πip/q}·exp(X_{n,τ})` where
//! `X_{n,τ} = z^{n+1}/(1 + τzⁿ) ∂/∂z` and `exp` is the time-1 flow. The
//! pair `(n, τ)` is a complete formal invariant beyond the rotation number;
//! the conjugating jet `φ` is produced by an order-by-order homological
//! solve whose single obstruction, at order `2n+1`, determines `τ`.
//!
//! The flow of `X_{n,τ}` is computed as a Lie series: each application of
//! the derivation raises the vanishing order by `n`, so the series is a
//! finite sum in the truncated ring and satisfies the group law exactly.

use crate::jet::{recognize_rational, JetError, JetSeries};
use crate::qz::QZRational;
use crate::scalar::Scalar;
use crate::tol;
use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParabolicError {
    #[error("germ is not parabolic: {reason}")]
    NotParabolic { reason: String },
    #[error("germ is degenerate parabolic (f^q = id to the truncation order): no vector-field normal form")]
    DegenerateParabolic,
    #[error("truncation order {got} is too small; the normal form needs order ≥ {required}")]
    InsufficientOrder { got: usize, required: usize },
    #[error("leading coefficient has no exact {n}-th root in this field")]
    ExactRootUnavailable { n: usize },
    #[error("homological obstruction at order {order} did not vanish (residual {residual:e}); input is not parabolic to this order")]
    ObstructionResidual { order: usize, residual: f64 },
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// The normal-form vector field `X_{n,τ} = z^{n+1}/(1 + τzⁿ) ∂/∂z`,
/// vanishing to order `n+1` at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldNF<S = Complex64> {
    pub n: usize,
    pub tau: S,
}

impl<S: Scalar> VectorFieldNF<S> {
    pub fn new(n: usize, tau: S) -> Self {
        assert!(n >= 1, "the zero order n must be at least 1");
        Self { n, tau }
    }

    /// The coefficient series of the field, `z^{n+1}·Σ_j (−τ)^j z^{jn}`,
    /// truncated at `order`.
    pub fn series(&self, order: usize) -> JetSeries<S> {
        let mut coeffs = vec![S::zero(); order];
        let mut c = S::one();
        let mut deg = self.n + 1;
        while deg <= order {
            coeffs[deg - 1] = c.clone();
            c = S::zero() - c * self.tau.clone();
            deg += self.n;
        }
        JetSeries::from_coeffs_unchecked(coeffs)
    }

    /// The action of the field as a derivation: `X·s = v·s'` with `v` the
    /// coefficient series. Applied to `z` repeatedly, the vanishing order
    /// grows by at least `n` per application.
    pub fn derivation(&self, s: &JetSeries<S>) -> JetSeries<S> {
        field_derivation(&self.series(s.order()), s)
    }

    /// Truncated time-`t` flow `exp(tX)` as the Lie series
    /// `Σ_k t^k (X^k·z)/k!` — a finite sum in the truncated ring.
    pub fn flow(&self, t: S, order: usize) -> JetSeries<S> {
        lie_flow(&self.series(order), t)
    }
}

/// `v·s'` truncated to the common order: the derivation attached to the
/// field `v(z)∂/∂z` applied to `s`.
pub fn field_derivation<S: Scalar>(v: &JetSeries<S>, s: &JetSeries<S>) -> JetSeries<S> {
    let n = s.order();
    let ds = s.derivative_poly(); // degrees 0..n−1
    let mut out = vec![S::zero(); n];
    for (i, a) in v.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let deg_v = i + 1;
        for (j, b) in ds.iter().enumerate() {
            let deg = deg_v + j;
            if deg > n {
                break;
            }
            if b.is_zero() {
                continue;
            }
            out[deg - 1] = out[deg - 1].clone() + a.clone() * b.clone();
        }
    }
    JetSeries::from_coeffs_unchecked(out)
}

/// Time-`t` Lie-series flow of a general field `v(z)∂/∂z` with `v`
/// vanishing to order ≥ 2: `Σ_k t^k (X^k·z)/k!`.
pub fn lie_flow<S: Scalar>(v: &JetSeries<S>, t: S) -> JetSeries<S> {
    let order = v.order();
    let mut result = JetSeries::identity(order);
    let mut term = JetSeries::identity(order); // X^k·z
    let mut factor = S::one(); // t^k / k!
    for k in 1..=order {
        term = field_derivation(v, &term);
        if term.coeffs().iter().all(|c| c.is_zero()) {
            break;
        }
        factor = factor * t.clone() / S::from_integer(k as i64);
        if factor.is_zero() {
            break;
        }
        result = result
            .add(&term.scale(&factor))
            .expect("orders agree");
    }
    result
}

/// The iterative logarithm of a tangent-to-identity jet `g = z + O(z²)`:
/// the unique field `v` with `exp(v) = g` to the truncation order, found by
/// the order-by-order solve `v_m = g_m − [z^m] exp(v_{<m})`.
pub fn iter_log<S: Scalar>(g: &JetSeries<S>) -> Result<JetSeries<S>, ParabolicError> {
    let order = g.order();
    let one = S::one();
    if (g.multiplier().clone() - one.clone()).modulus() > tol::TOL_RES && !S::EXACT {
        return Err(ParabolicError::NotParabolic {
            reason: "iterative logarithm needs a tangent-to-identity jet".into(),
        });
    }
    if S::EXACT && g.multiplier() != &one {
        return Err(ParabolicError::NotParabolic {
            reason: "iterative logarithm needs a tangent-to-identity jet".into(),
        });
    }
    let mut v = vec![S::zero(); order];
    for m in 2..=order {
        let exp_v = lie_flow(&JetSeries::from_coeffs_unchecked(v.clone()), S::one());
        v[m - 1] = v[m - 1].clone() + (g.coeff(m).clone() - exp_v.coeff(m).clone());
    }
    Ok(JetSeries::from_coeffs_unchecked(v))
}

/// Residue of the meromorphic 1-form `dz/v(z)` at the origin for a field
/// `v = a z^{n+1}(1 + w(z))`: the coefficient of `z^{-1}` in `1/v`, an
/// invariant of the field under changes of coordinate. For `X_{n,τ}` the
/// residue is exactly `τ`.
pub fn field_residue<S: Scalar>(v: &JetSeries<S>, n: usize) -> Result<S, ParabolicError> {
    let order = v.order();
    if order < 2 * n + 1 {
        return Err(ParabolicError::InsufficientOrder {
            got: order,
            required: 2 * n + 1,
        });
    }
    let a = v.coeff(n + 1).clone();
    if a.is_zero() {
        return Err(ParabolicError::NotParabolic {
            reason: format!("field does not vanish to order exactly {}", n + 1),
        });
    }
    // w_j = v_{n+1+j}/a for j = 1..n; residue = (1/a)·[z^n] 1/(1+w).
    let mut w = vec![S::zero(); n + 1]; // degrees 0..n of 1+w, w_0 = 1
    w[0] = S::one();
    for j in 1..=n {
        w[j] = v.coeff(n + 1 + j).clone() / a.clone();
    }
    // Invert the unit power series 1 + w.
    let mut inv = vec![S::zero(); n + 1];
    inv[0] = S::one();
    for m in 1..=n {
        let mut acc = S::zero();
        for k in 1..=m {
            if w[k].is_zero() {
                continue;
            }
            acc = acc + w[k].clone() * inv[m - k].clone();
        }
        inv[m] = S::zero() - acc;
    }
    Ok(inv[n].clone() / a)
}

/// Complete formal data of a nondegenerate parabolic germ under the
/// convention `f = φ ∘ (e^{2πip/q}·exp(X_{n,τ})) ∘ φ^{-1}`.
#[derive(Clone, Debug)]
pub struct ParabolicData<S = Complex64> {
    /// Rotation number `p/q` of `f`.
    pub rotation: QZRational,
    /// `f^q = z + a z^{n+1} + …` with `a ≠ 0`.
    pub n: usize,
    pub a: S,
    /// The formal invariant of the normal form.
    pub tau: S,
    /// The conjugating jet, linear part `(q/a)^{1/n}`.
    pub conjugator: JetSeries<S>,
}

#[derive(Clone, Copy, Debug)]
pub struct ParabolicOptions {
    pub tol_res: f64,
    pub tol_recog: f64,
    pub q_max: u64,
}

impl Default for ParabolicOptions {
    fn default() -> Self {
        Self {
            tol_res: tol::TOL_RES,
            tol_recog: tol::TOL_RECOG,
            q_max: tol::Q_MAX,
        }
    }
}

/// Recognizes the multiplier as a root of unity. Exact fields test small
/// orders exactly; floats use continued-fraction recognition plus a
/// unit-circle check.
fn recognize_root_of_unity<S: Scalar>(
    lambda: &S,
    opts: &ParabolicOptions,
) -> Option<QZRational> {
    if S::EXACT {
        // Roots of unity expressible in exact subfields of C have small
        // order; search directly.
        let mut pow = S::one();
        for q in 1..=24u64 {
            pow = pow * lambda.clone();
            if pow.is_one() {
                // λ^q = 1: find p from the approximate argument.
                let alpha = crate::jet::arg01(lambda.approx());
                let p = (alpha * q as f64).round() as i64;
                return QZRational::new(p, q).ok();
            }
        }
        None
    } else {
        let z = lambda.approx();
        if (z.norm() - 1.0).abs() > tol::TOL_UNIT {
            return None;
        }
        let (p, q) = recognize_rational(crate::jet::arg01(z), opts.q_max, opts.tol_recog)?;
        QZRational::new(p as i64, q).ok()
    }
}

fn residual_check<S: Scalar>(d: &S, scale: f64, opts: &ParabolicOptions) -> Option<f64> {
    if S::EXACT {
        if d.is_zero() {
            None
        } else {
            Some(d.modulus())
        }
    } else {
        let m = d.modulus();
        if m <= opts.tol_res * scale.max(1.0) {
            None
        } else {
            Some(m)
        }
    }
}

/// Conjugates `F` by the near-identity jet `u`: returns `u^{-1} ∘ F ∘ u`.
fn conjugate<S: Scalar>(
    f: &JetSeries<S>,
    u: &JetSeries<S>,
) -> Result<JetSeries<S>, JetError> {
    u.invert()?.compose(&f.compose(u)?)
}

/// Extracts `(p/q, n, a)` and solves the conjugacy `f∘φ = φ∘T`,
/// `T = e^{2πip/q}·exp(X_{n,τ})`, order by order:
///
/// * non-resonant orders `m ≢ 1 (mod q)` are killed by a conjugator
///   `z + u z^m` with `u = d/(λ^m − λ)`;
/// * resonant orders `m ≡ 1 (mod q)`, `m ≠ n+1, 2n+1`, are killed from the
///   shifted slot `z + u z^{m−n}` with `u = −d/(λ(2n+1−m))`;
/// * order `n+1` is matched by the linear gauge `c = (q/a)^{1/n}` and order
///   `2n+1` by the choice of `τ` — the solvability conditions of the
///   homological equation. The remaining resonant freedom of `φ` is fixed
///   by never applying a corrector in the `z^{n+1}` slot.
pub fn parabolic_normalize<S: Scalar>(
    f: &JetSeries<S>,
    opts: &ParabolicOptions,
) -> Result<ParabolicData<S>, ParabolicError> {
    let order = f.order();
    let lambda = f.multiplier().clone();
    let rotation = recognize_root_of_unity(&lambda, opts).ok_or_else(|| {
        ParabolicError::NotParabolic {
            reason: "multiplier is not a recognizable root of unity".into(),
        }
    })?;
    let q = rotation.order() as usize;

    let g = f.iterate(q as i64)?;
    // Leading coefficient of g − id beyond the linear term.
    let mut n_plus_1 = None;
    for m in 2..=order {
        let c = g.coeff(m);
        let significant = if S::EXACT {
            !c.is_zero()
        } else {
            c.modulus() > opts.tol_res
        };
        if significant {
            n_plus_1 = Some(m);
            break;
        }
    }
    let Some(np1) = n_plus_1 else {
        return Err(ParabolicError::DegenerateParabolic);
    };
    let n = np1 - 1;
    let a = g.coeff(np1).clone();
    if n % q != 0 {
        return Err(ParabolicError::NotParabolic {
            reason: format!("leading order n = {n} is not a multiple of the rotation order q = {q}"),
        });
    }
    if order < 2 * n + 1 {
        return Err(ParabolicError::InsufficientOrder {
            got: order,
            required: 2 * n + 1,
        });
    }

    let c = (S::from_integer(q as i64) / a.clone())
        .nth_root(n as u32)
        .ok_or(ParabolicError::ExactRootUnavailable { n })?;

    let mut phi = JetSeries::linear(c.clone(), order);
    let mut current = conjugate(f, &phi)?;
    let scale = current.max_coeff_modulus();

    // Target without τ: coefficients of R·exp(X_{n,τ}) below order 2n+1 are
    // τ-free.
    let mut tau: Option<S> = None;
    let mut target = {
        let field = VectorFieldNF::new(n, S::zero());
        field.flow(S::one(), order).scale(&lambda)
    };

    let mut lambda_pow = lambda.clone(); // λ^m
    for m in 2..=order {
        lambda_pow = lambda_pow * lambda.clone();
        if m == 2 * n + 1 {
            // Solvability condition: pick τ so the target matches.
            // [z^{2n+1}] R·exp(X_{n,τ}) = R·((n+1)/2 − τ).
            let t = S::from_integer((n + 1) as i64) / S::from_integer(2)
                - current.coeff(m).clone() / lambda.clone();
            let field = VectorFieldNF::new(n, t.clone());
            target = field.flow(S::one(), order).scale(&lambda);
            tau = Some(t);
            continue;
        }
        let d = current.coeff(m).clone() - target.coeff(m).clone();
        if d.is_zero() {
            continue;
        }
        let resonant = m % q == 1 % q;
        if !resonant {
            let u_coef = d / (lambda_pow.clone() - lambda.clone());
            let u = JetSeries::identity(order)
                .add(&JetSeries::monomial(u_coef, m, order))
                .expect("orders agree");
            current = conjugate(&current, &u)?;
            phi = phi.compose(&u)?;
        } else if m <= n + 1 {
            // Must already match: these orders are pinned by parabolicity
            // (below n+1) and by the linear gauge (at n+1).
            if let Some(res) = residual_check(&d, scale, opts) {
                return Err(ParabolicError::ObstructionResidual {
                    order: m,
                    residual: res,
                });
            }
        } else {
            // Shifted corrector in the z^{m−n} slot; its coefficient in the
            // order-m equation is λ(2n+1−m) ≠ 0 here.
            let denom = lambda.clone() * S::from_integer(2 * n as i64 + 1 - m as i64);
            let u_coef = S::zero() - d / denom;
            let u = JetSeries::identity(order)
                .add(&JetSeries::monomial(u_coef, m - n, order))
                .expect("orders agree");
            current = conjugate(&current, &u)?;
            phi = phi.compose(&u)?;
            let left = current.coeff(m).clone() - target.coeff(m).clone();
            if let Some(res) = residual_check(&left, scale, opts) {
                return Err(ParabolicError::ObstructionResidual {
                    order: m,
                    residual: res,
                });
            }
        }
    }

    let tau = tau.expect("order ≥ 2n+1 guarantees the τ step ran");
    Ok(ParabolicData {
        rotation,
        n,
        a,
        tau,
        conjugator: phi,
    })
}

impl<S: Scalar> ParabolicData<S> {
    /// The normal form `e^{2πip/q}·exp(X_{n,τ})` at the given order, using
    /// the stored multiplier data.
    pub fn normal_form(&self, multiplier: S, order: usize) -> JetSeries<S> {
        VectorFieldNF::new(self.n, self.tau.clone())
            .flow(S::one(), order)
            .scale(&multiplier)
    }

    /// Residual of the defining conjugacy
    /// `φ ∘ (R·exp(X_{n,τ})) ∘ φ^{-1} − f`.
    pub fn conjugacy_residual(&self, f: &JetSeries<S>) -> Result<f64, JetError> {
        let nf = self.normal_form(f.multiplier().clone(), f.order());
        let lhs = self
            .conjugator
            .compose(&nf)?
            .compose(&self.conjugator.invert()?)?;
        lhs.distance(f)
    }
}

/// An element `e^{2πik/n}·exp(tX_{n,τ})` of the centralizer of
/// `exp(X_{n,τ})`; every such element commutes with the time-1 flow.
pub fn parabolic_centralizer_element(
    n: usize,
    tau: Complex64,
    k: i64,
    t: Complex64,
    order: usize,
) -> JetSeries<Complex64> {
    let rot = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
    VectorFieldNF::new(n, tau).flow(t, order).scale(&rot)
}

/// Outcome of the parabolic centralizer membership test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MembershipOutcome {
    /// `(k, t)` with `φ^{-1}∘g∘φ = e^{2πik/n}·exp(tX_{n,τ})` when `g`
    /// commutes with `f`; `None` on refusal.
    pub member: Option<(usize, [f64; 2])>,
    pub residual: f64,
}

/// Tests whether `g` belongs to the centralizer of the normalized parabolic
/// germ: conjugates `g` into normal-form coordinates, reads `k` off the
/// multiplier and `t` off the order-`n+1` coefficient, and compares with
/// `e^{2πik/n}·exp(tX_{n,τ})` at the stated tolerance.
pub fn centralizer_membership_parabolic(
    f: &JetSeries<Complex64>,
    g: &JetSeries<Complex64>,
    opts: &ParabolicOptions,
) -> Result<MembershipOutcome, ParabolicError> {
    let data = parabolic_normalize(f, opts)?;
    let phi_inv = data.conjugator.invert()?;
    let g_hat = phi_inv.compose(&g.compose(&data.conjugator)?)?;

    let n = data.n;
    let mu = *g_hat.multiplier();
    if (mu.norm() - 1.0).abs() > 10.0 * opts.tol_res {
        return Ok(MembershipOutcome {
            member: None,
            residual: (mu.norm() - 1.0).abs(),
        });
    }
    let k = (crate::jet::arg01(mu) * n as f64).round() as i64 % n as i64;
    let rot = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
    let mis = (mu - rot).norm();
    if mis > 10.0 * opts.tol_res {
        return Ok(MembershipOutcome {
            member: None,
            residual: mis,
        });
    }
    let w = g_hat.scale(&(Complex64::one() / rot));
    let t = *w.coeff(n + 1);
    let expected = VectorFieldNF::new(n, data.tau).flow(t, f.order());
    let residual = w.distance(&expected)?;
    if residual <= opts.tol_res * w.max_coeff_modulus().max(1.0) {
        Ok(MembershipOutcome {
            member: Some(((k.rem_euclid(n as i64)) as usize, [t.re, t.im])),
            residual,
        })
    } else {
        Ok(MembershipOutcome {
            member: None,
            residual,
        })
    }
}
