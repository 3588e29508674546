//! Koenigs linearization and formal centralizers of non-resonant germs.
//!
//! For `f(z) = λz + O(z²)` with `λ` not a root of unity (to the truncation
//! order) there is a unique tangent-to-identity jet `h` with
//! `h∘f = L_λ∘h`; its coefficients come from the conjugacy equation solved
//! order by order, each step dividing by the small divisor `λ^n − λ`. The
//! formal centralizer of `f` is then `{ h^{-1} ∘ L_μ ∘ h : μ ≠ 0 }`.

use crate::jet::{JetError, JetSeries};
use crate::qz::QZRational;
use crate::scalar::Scalar;
use crate::tol;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinearizeError {
    #[error("multiplier is resonant: |λ^{n} − λ| = {magnitude:e} at order {n}")]
    ResonantMultiplier { n: usize, magnitude: f64 },
    #[error("centralizer elements need a nonzero multiplier")]
    ZeroMultiplier,
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Result of Koenigs linearization: the tangent-to-identity conjugator,
/// the multiplier and the divisors `λ^n − λ` for `2 ≤ n ≤ N`.
#[derive(Clone, Debug)]
pub struct Linearization<S> {
    pub h: JetSeries<S>,
    pub lambda: S,
    pub divisors: Vec<S>,
}

/// Options for resonance detection.
#[derive(Clone, Copy, Debug)]
pub struct LinearizeOptions {
    pub tol_div: f64,
}

impl Default for LinearizeOptions {
    fn default() -> Self {
        Self { tol_div: tol::TOL_DIV }
    }
}

fn divisor_is_resonant<S: Scalar>(d: &S, opts: &LinearizeOptions) -> bool {
    if S::EXACT {
        d.is_zero()
    } else {
        d.modulus() <= opts.tol_div
    }
}

/// Solves `h ∘ f = L_λ ∘ h` for the unique `h = z + h_2 z² + …` by
/// back-substitution in the coefficient equations
/// `h_n = (Σ_{k<n} h_k [z^n] f^k) / (λ − λ^n)`.
pub fn koenigs_linearize<S: Scalar>(
    f: &JetSeries<S>,
    opts: &LinearizeOptions,
) -> Result<Linearization<S>, LinearizeError> {
    let n = f.order();
    if !f.is_germ() {
        return Err(JetError::NotInvertible {
            magnitude: f.multiplier().modulus(),
        }
        .into());
    }
    let lambda = f.multiplier().clone();

    // Divisors λ^m − λ for m = 2..N, with resonance screening.
    let mut divisors = Vec::with_capacity(n.saturating_sub(1));
    let mut pow = lambda.clone();
    for m in 2..=n {
        pow = pow * lambda.clone();
        let d = pow.clone() - lambda.clone();
        if divisor_is_resonant(&d, opts) {
            return Err(LinearizeError::ResonantMultiplier {
                n: m,
                magnitude: d.modulus(),
            });
        }
        divisors.push(d);
    }

    // Multiplicative powers f^k truncated at N, k = 1..N.
    let mut powers: Vec<JetSeries<S>> = Vec::with_capacity(n);
    powers.push(f.clone());
    for _ in 2..=n {
        let next = powers.last().unwrap().mul_truncated(f)?;
        powers.push(next);
    }

    let mut h = vec![S::zero(); n];
    h[0] = S::one();
    for m in 2..=n {
        let mut num = S::zero();
        for k in 1..m {
            let fk_m = powers[k - 1].coeff(m).clone();
            if fk_m.is_zero() {
                continue;
            }
            num = num + h[k - 1].clone() * fk_m;
        }
        // h_m = num / (λ − λ^m)
        h[m - 1] = num / (S::zero() - divisors[m - 2].clone());
    }

    Ok(Linearization {
        h: JetSeries::new(h).expect("order preserved"),
        lambda,
        divisors,
    })
}

/// The unique formal centralizer element of `f` with multiplier `μ`:
/// `g = h^{-1} ∘ L_μ ∘ h` under the conjugacy `h∘f = L_λ∘h`, which makes
/// `g∘f = f∘g` hold to the truncation order.
pub fn centralizer_element<S: Scalar>(
    f: &JetSeries<S>,
    mu: S,
    opts: &LinearizeOptions,
) -> Result<JetSeries<S>, LinearizeError> {
    if mu.is_zero() || (!S::EXACT && mu.modulus() <= tol::TOL_ZERO) {
        return Err(LinearizeError::ZeroMultiplier);
    }
    let lin = koenigs_linearize(f, opts)?;
    let n = f.order();
    let h_inv = lin.h.invert()?;
    let scaled = lin.h.scale(&mu); // L_μ ∘ h
    let g = h_inv.compose(&scaled)?;
    debug_assert_eq!(g.order(), n);
    Ok(g)
}

/// Status of a coefficient `g_n` in the linear-centralizer system
/// `λ^n g_n = λ g_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientStatus {
    /// `λ^n ≠ λ`: the equation forces `g_n = 0`.
    Forced,
    /// `λ^n = λ`: the equation leaves `g_n` free.
    Free,
}

/// Solution space of `g ∘ L_λ = L_λ ∘ g` order by order: which coefficients
/// `g_n`, `2 ≤ n ≤ N`, are forced to zero. When every one is forced, the
/// centralizer of `L_λ` is linear to order `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCentralizer {
    /// `statuses[i]` is the status of `g_{i+2}`.
    pub statuses: Vec<CoefficientStatus>,
}

impl LinearCentralizer {
    pub fn status(&self, n: usize) -> CoefficientStatus {
        self.statuses[n - 2]
    }

    /// Indices `n` with `g_n` free.
    pub fn free_indices(&self) -> Vec<usize> {
        self.statuses
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == CoefficientStatus::Free)
            .map(|(i, _)| i + 2)
            .collect()
    }

    pub fn all_forced(&self) -> bool {
        self.statuses.iter().all(|s| *s == CoefficientStatus::Forced)
    }
}

/// Solves the linear-centralizer system for a multiplier given as a field
/// element. Exact fields compare `λ^n` with `λ` exactly; floats use the
/// resonance tolerance.
pub fn centralizer_solve_linear<S: Scalar>(
    lambda: &S,
    order: usize,
    opts: &LinearizeOptions,
) -> LinearCentralizer {
    let mut statuses = Vec::new();
    let mut pow = lambda.clone();
    for _ in 2..=order {
        pow = pow.clone() * lambda.clone();
        let d = pow.clone() - lambda.clone();
        statuses.push(if divisor_is_resonant(&d, opts) {
            CoefficientStatus::Free
        } else {
            CoefficientStatus::Forced
        });
    }
    LinearCentralizer { statuses }
}

/// Exact solution for a root-of-unity multiplier `λ = e^{2πip/q}` given by
/// its rotation number: `λ^n = λ ⟺ n ≡ 1 (mod q)`, pure integer
/// arithmetic, no tolerance.
pub fn centralizer_solve_linear_rotation(rotation: &QZRational, order: usize) -> LinearCentralizer {
    let q = rotation.order();
    let statuses = (2..=order)
        .map(|n| {
            if (n as u64) % q == 1 % q {
                CoefficientStatus::Free
            } else {
                CoefficientStatus::Forced
            }
        })
        .collect();
    LinearCentralizer { statuses }
}

/// Conjugacy residual `‖h∘f − L_λ∘h‖` of a linearization, for diagnostics
/// and tests.
pub fn conjugacy_residual<S: Scalar>(
    f: &JetSeries<S>,
    lin: &Linearization<S>,
) -> Result<f64, JetError> {
    let lhs = lin.h.compose(f)?;
    let rhs = lin.h.scale(&lin.lambda);
    lhs.distance(&rhs)
}
