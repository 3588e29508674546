//! The inductive tower of finite-order germs realizing a Q/Z subgroup.
//!
//! Level 1 is the rigid rotation by `1/q_1`; level `n+1` is the intrinsic
//! rotation of the slit domain `D(ε_n, q_n)` at angle `1/q_{n+1}`, pulled
//! back through the accumulated linearizer `h_n`. By construction
//! `ρ(f_n) = 1/q_n` and `f_n = f_{n+1}^{a_{n+1}}`; the slit endpoints are
//! almost rotation-symmetric singularities that pin down the rotation
//! number of anything commuting with the tower. The verification suite
//! measures all of this numerically: pointwise root identities, derivative
//! audits, the endpoint cyclic shift and the `O(ε)` multiplier estimate.

use super::{
    circle_samples, disk_samples, prop5_root, q_slit_uniformizer,
    AnalyticMap, ConformalError, SlitDomain,
};
use crate::qz::CyclicTower;
use crate::tol;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One stage of the tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    /// 1-based level index.
    pub index: usize,
    pub q: u64,
    /// `a` with `q_n = a · q_{n−1}` (absent at level 1).
    pub a: Option<u64>,
    /// Slit inner radius used at this level: `eps = σ·eps0`.
    pub eps: f64,
    /// Certified outer radius: `h_n^{-1}` is univalent on `D_{eps0}`.
    pub eps0: f64,
    /// Accumulated linearizer `h_n` (tangent to identity): `h_n∘f_n∘h_n^{-1}`
    /// is the rigid rotation by `1/q_n`.
    pub uniformizer: AnalyticMap,
    /// The germ `f_n`.
    pub germ: AnalyticMap,
    /// Slit endpoints `z_j = h_n^{-1}(eps·e^{2πij/q_n})`.
    pub endpoints: Vec<Complex64>,
}

/// Builds `depth` levels of the tower for the given chain of cyclic
/// subgroups, shrinking the slit radius by `sigma` at each level and
/// certifying the next outer radius by boundary sampling with the standard
/// safety factor.
pub fn tower_build(
    tower: &CyclicTower,
    sigma: f64,
    depth: usize,
) -> Result<Vec<TowerLevel>, ConformalError> {
    if depth == 0 || depth > tower.depth() {
        return Err(ConformalError::DepthExceeded {
            requested: depth,
            available: tower.depth(),
        });
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(ConformalError::InvalidConstruction(format!(
            "shrink factor must lie in (0, 1), got {sigma}"
        )));
    }
    let q1 = tower.qs[0];
    if q1 < 2 {
        return Err(ConformalError::InvalidConstruction(
            "tower must start at q_1 ≥ 2".into(),
        ));
    }

    let mut levels: Vec<TowerLevel> = Vec::with_capacity(depth);
    let mut h = AnalyticMap::identity();
    let mut eps0 = 1.0;

    for n in 1..=depth {
        let q = tower.qs[n - 1];
        let eps = sigma * eps0;
        let germ = if n == 1 {
            AnalyticMap::rotation(1.0 / q as f64)
        } else {
            // f_n = h_{n−1}^{-1} ∘ R_{D(ε_{n−1}, q_{n−1}), 1/q_n} ∘ h_{n−1},
            // i.e. the root construction applied to the previous level.
            let prev = &levels[n - 2];
            let a = tower.as_[n - 2] as u32;
            prop5_root(&prev.uniformizer, prev.q as u32, prev.eps, prev.eps0, a)?
        };
        let endpoints = (0..q)
            .map(|j| {
                let w = Complex64::from_polar(
                    eps,
                    std::f64::consts::TAU * j as f64 / q as f64,
                );
                h.eval_inverse(w)
            })
            .collect::<Result<Vec<_>, _>>()?;
        levels.push(TowerLevel {
            index: n,
            q,
            a: if n == 1 { None } else { Some(tower.as_[n - 2]) },
            eps,
            eps0,
            uniformizer: h.clone(),
            germ,
            endpoints,
        });

        if n == depth {
            break;
        }

        // Prepare the next linearizer: h_{n+1} = (1/c)·F_{D(ε_n,q_n)} ∘ h_n
        // with c the derivative at 0, so h_{n+1} stays tangent to identity.
        let domain = SlitDomain::new(eps, eps0, q as u32)?;
        let f_domain = q_slit_uniformizer(&domain)?;
        let raw_next = h.then(&f_domain);
        let c = raw_next.derivative0()?;
        if !(c.norm() > 0.0) || c.norm().is_nan() {
            return Err(ConformalError::CertificationFailure {
                level: n,
                reason: format!("degenerate linearizer derivative {c}"),
            });
        }
        let h_next = raw_next.then(&AnalyticMap::scale(1.0 / c.norm()));

        // Certify a disk inside the image of h_{n+1} by sampling the
        // boundary of its domain: the outer circle and both banks of each
        // slit.
        let mut min_mod = f64::INFINITY;
        let outer = tol::BOUNDARY_SAMPLES / 2;
        for w in circle_samples(eps0, outer) {
            if domain.on_slit(w) {
                continue;
            }
            let z = h.eval_inverse(w)?;
            let v = h_next.eval(z)?;
            min_mod = min_mod.min(v.norm());
        }
        let bank = tol::BOUNDARY_SAMPLES / 2 / (2 * q as usize);
        for j in 0..q {
            let ray = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / q as f64);
            for k in 0..bank {
                let t = eps + (eps0 - eps) * (k as f64 + 0.5) / bank as f64;
                for side in [1.0, -1.0] {
                    let w = ray * t * Complex64::from_polar(1.0, side * 1e-9);
                    let z = h.eval_inverse(w)?;
                    let v = h_next.eval(z)?;
                    min_mod = min_mod.min(v.norm());
                }
            }
        }
        if !min_mod.is_finite() || min_mod <= 1e-6 {
            return Err(ConformalError::CertificationFailure {
                level: n,
                reason: format!("sampled inscribed radius {min_mod:e} is degenerate"),
            });
        }
        h = h_next;
        eps0 = tol::DISK_SAFETY * min_mod;
    }
    Ok(levels)
}

/// Outcome of one named check of the verification suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelCheck {
    pub name: String,
    pub level: usize,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Per-level μ-estimate data: `max_j |f_n(z_j)/z_j − f_n'(0)| ≤ C·|z_j|`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuEstimate {
    pub level: usize,
    /// `max_j |f_n(z_j)/z_j − f_n'(0)|`.
    pub bound: f64,
    /// Largest endpoint modulus (the `ε`-scale of the level).
    pub endpoint_scale: f64,
    /// Empirical constant `bound / endpoint_scale`.
    pub c_empirical: f64,
}

/// Full verification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerReport {
    pub checks: Vec<LevelCheck>,
    pub mu_estimates: Vec<MuEstimate>,
    pub vacuous: bool,
    pub all_pass: bool,
}

/// Verifies a built tower: per adjacent pair the pointwise root identity
/// `f_{n+1}^{a_{n+1}} = f_n`, per level the derivative audit
/// `|f_n'(0) − e^{2πi/q_n}|`, the endpoint cyclic shift `z_j ↦ z_{j+1}`
/// (nearest-neighbor matching with a 2× ambiguity guard) and the
/// μ-estimate `|f_n(z_j)/z_j − f_n'(0)| ≤ C|z_j|`.
pub fn tower_verify(
    levels: &[TowerLevel],
    samples: usize,
    tolerance: f64,
) -> Result<TowerReport, ConformalError> {
    let mut checks = Vec::new();
    let mut mu_estimates = Vec::new();
    if levels.len() < 2 {
        return Ok(TowerReport {
            checks,
            mu_estimates,
            vacuous: true,
            all_pass: true,
        });
    }

    for pair in levels.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let a = hi.a.expect("level > 1 stores its jump") as u32;
        // Samples live in h_n^{-1}(D_{0.8 ε_n}): invariant under both germs.
        let mut max_res: f64 = 0.0;
        for w in disk_samples(0.8 * lo.eps, samples) {
            let z = lo.uniformizer.eval_inverse(w)?;
            let via_root = hi.germ.iterate(z, a)?;
            let direct = lo.germ.eval(z)?;
            max_res = max_res.max((via_root - direct).norm());
        }
        checks.push(LevelCheck {
            name: format!("iterate-match f{} = f{}^{}", lo.index, hi.index, a),
            level: hi.index,
            residual: max_res,
            threshold: tolerance,
            pass: max_res <= tolerance,
        });
    }

    for level in levels {
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU / level.q as f64);
        let d0 = level.germ.derivative0()?;
        let res = (d0 - expected).norm();
        checks.push(LevelCheck {
            name: format!("derivative-audit level {}", level.index),
            level: level.index,
            residual: res,
            threshold: 1e-10,
            pass: res <= 1e-10,
        });
    }

    for level in levels {
        // Endpoint permutation: f_n in h_n-coordinates is the rigid
        // rotation, so it must send z_j to z_{j+1}.
        let m = level.endpoints.len();
        let mut worst = 0.0f64;
        let mut matched = true;
        for (j, &z) in level.endpoints.iter().enumerate() {
            let image = level.germ.eval(z)?;
            let mut best = (f64::INFINITY, 0usize);
            let mut second = f64::INFINITY;
            for (k, &cand) in level.endpoints.iter().enumerate() {
                let dist = (image - cand).norm();
                if dist < best.0 {
                    second = best.0;
                    best = (dist, k);
                } else if dist < second {
                    second = dist;
                }
            }
            if m > 1 && second < 2.0 * best.0 {
                matched = false; // ambiguous assignment
            }
            if best.1 != (j + 1) % m {
                matched = false;
            }
            worst = worst.max(best.0);
        }
        checks.push(LevelCheck {
            name: format!("endpoint-shift level {}", level.index),
            level: level.index,
            residual: worst,
            threshold: tolerance,
            pass: matched && worst <= tolerance,
        });

        let d0 = level.germ.derivative0()?;
        let mut bound = 0.0f64;
        let mut scale = 0.0f64;
        for &z in &level.endpoints {
            let image = level.germ.eval(z)?;
            bound = bound.max((image / z - d0).norm());
            scale = scale.max(z.norm());
        }
        mu_estimates.push(MuEstimate {
            level: level.index,
            bound,
            endpoint_scale: scale,
            c_empirical: if scale > 0.0 { bound / scale } else { 0.0 },
        });
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(TowerReport {
        checks,
        mu_estimates,
        vacuous: false,
        all_pass,
    })
}

/// μ-estimate scaling probe: builds the tower at two shrink factors and
/// returns, per level ≥ 2, the ratio of μ-bounds against the ratio of the
/// actual endpoint scales (the bound is linear in ε, so the two ratios
/// agree up to a bounded factor).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuScaling {
    pub level: usize,
    pub bound_ratio: f64,
    pub eps_ratio: f64,
}

pub fn mu_scaling_ratios(
    tower: &CyclicTower,
    sigma_hi: f64,
    sigma_lo: f64,
    depth: usize,
    samples: usize,
) -> Result<Vec<MuScaling>, ConformalError> {
    let hi = tower_build(tower, sigma_hi, depth)?;
    let lo = tower_build(tower, sigma_lo, depth)?;
    let rep_hi = tower_verify(&hi, samples, tol::TOL_TOWER)?;
    let rep_lo = tower_verify(&lo, samples, tol::TOL_TOWER)?;
    Ok(rep_hi
        .mu_estimates
        .iter()
        .zip(&rep_lo.mu_estimates)
        .filter(|(a, _)| a.level >= 2)
        .map(|(a, b)| MuScaling {
            level: a.level,
            bound_ratio: if b.bound > 0.0 { a.bound / b.bound } else { f64::NAN },
            eps_ratio: if b.endpoint_scale > 0.0 {
                a.endpoint_scale / b.endpoint_scale
            } else {
                f64::NAN
            },
        })
        .collect())
}

/// Serialized form of a tower level (maps are reconstructed from the build
/// parameters, which are part of [`TowerJson`]).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerLevelJson {
    pub index: usize,
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    pub eps: f64,
    pub eps0: f64,
    pub endpoints: Vec<[f64; 2]>,
    pub derivative_at_0: [f64; 2],
}

/// On-disk tower document: build parameters plus per-level data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TowerJson {
    pub qs: Vec<u64>,
    pub sigma: f64,
    pub depth: usize,
    pub levels: Vec<TowerLevelJson>,
}

impl TowerJson {
    pub fn from_levels(
        tower: &CyclicTower,
        sigma: f64,
        levels: &[TowerLevel],
    ) -> Result<Self, ConformalError> {
        let mut out = Vec::with_capacity(levels.len());
        for level in levels {
            let d0 = level.germ.derivative0()?;
            out.push(TowerLevelJson {
                index: level.index,
                q: level.q,
                a: level.a,
                eps: level.eps,
                eps0: level.eps0,
                endpoints: level.endpoints.iter().map(|z| [z.re, z.im]).collect(),
                derivative_at_0: [d0.re, d0.im],
            });
        }
        Ok(Self {
            qs: tower.qs.clone(),
            sigma,
            depth: levels.len(),
            levels: out,
        })
    }
}
