//! Uniformizers of slit disks and intrinsic rotations.
//!
//! The one-slit disk `D ∖ [s, 1)` maps onto `D` by an explicit chain of
//! elementary maps; the `q`-slit disk `D(ε, q)` reduces to it by the
//! `q`-fold symmetrization `F_q(z) = [F_1((z/ε0)^q)]^{1/q}` with sector
//! branch tracking. Intrinsic rotations of `D(ε, q)` are conjugates of
//! rigid rotations by the uniformizer; at angle `1/q` they coincide with
//! the rigid rotation because the domain is invariant under it.

use super::{
    AnalyticMap, ConformalError, DomainGuard, ElementaryMap, MapExpr, Mobius, SlitDomain,
};
use crate::jet::arg01;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Conformal map `F : D ∖ [s, 1) → D` with `F(0) = 0`, `F'(0) > 0`, built
/// as the explicit composition: disk → right half-plane (slit becomes the
/// real segment `(0, c]`, `c = (1−s)/(1+s)`), square, translate by `−c²`,
/// principal square root, back to the disk, recenter the image of 0 by a
/// disk automorphism, and a final rotation making `F'(0)` positive real.
pub fn single_slit_uniformizer(s: f64) -> Result<AnalyticMap, ConformalError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(ConformalError::InvalidConstruction(format!(
            "slit start must satisfy 0 < s < 1, got {s}"
        )));
    }
    let c = (1.0 - s) / (1.0 + s);
    let c2 = c * c;
    // Image of 0 along the chain: 1 → 1 → 1 − c² → √(1−c²) → b.
    let root = (1.0 - c2).sqrt();
    let b = (1.0 - root) / (1.0 + root);

    let stages = vec![
        MapExpr::Elem(ElementaryMap::Mobius(Mobius::disk_to_half_plane())),
        MapExpr::Elem(ElementaryMap::Power(2)),
        MapExpr::Elem(ElementaryMap::Mobius(Mobius::translation(Complex64::new(
            -c2, 0.0,
        )))),
        MapExpr::Elem(ElementaryMap::PrincipalRoot(2)),
        MapExpr::Elem(ElementaryMap::Mobius(Mobius::disk_to_half_plane())),
        MapExpr::Elem(ElementaryMap::DiskAuto(Complex64::new(b, 0.0))),
    ];
    let unrotated = MapExpr::Chain(stages.clone());
    // The stage derivatives along the orbit of 0 multiply to a positive
    // real; compute the phase anyway and cancel it exactly.
    let (_, d0) = unrotated.eval_with_derivative(Complex64::zero())?;
    let alpha = -arg01(d0);

    let mut forward_stages = stages;
    forward_stages.push(MapExpr::Elem(ElementaryMap::Rotation(alpha)));
    let backward_stages: Vec<MapExpr> = forward_stages
        .iter()
        .rev()
        .map(|st| match st {
            MapExpr::Elem(e) => MapExpr::Elem(e.inverse()),
            _ => unreachable!("single-slit chain holds leaves only"),
        })
        .collect();

    let domain = SlitDomain::new(s, 1.0, 1)?;
    Ok(AnalyticMap::from_parts(
        MapExpr::Guarded {
            guard: DomainGuard::Slit(domain),
            inner: Box::new(MapExpr::Chain(forward_stages)),
        },
        MapExpr::Guarded {
            guard: DomainGuard::Disk { radius: 1.0 },
            inner: Box::new(MapExpr::Chain(backward_stages)),
        },
        format!("D ∖ [{s}, 1)"),
    ))
}

/// Uniformizer `F_q : D(ε, q) → D`, `F_q(0) = 0`, `F_q'(0) > 0`, via the
/// symmetrized reduction `F_q(z) = [F_1((z/ε0)^q)]^{1/q}` with
/// `F_1 = single_slit_uniformizer((ε/ε0)^q)` and per-sector root branches;
/// the construction commutes with rotation by `2π/q` exactly.
pub fn q_slit_uniformizer(d: &SlitDomain) -> Result<AnalyticMap, ConformalError> {
    let s = (d.eps / d.eps0).powi(d.q as i32);
    let f1 = single_slit_uniformizer(s)?;
    let forward = MapExpr::Guarded {
        guard: DomainGuard::Slit(*d),
        inner: Box::new(MapExpr::Symmetrized {
            q: d.q,
            pre: d.eps0,
            post: 1.0,
            inner: Box::new(f1.forward_expr().clone()),
        }),
    };
    let backward = MapExpr::Guarded {
        guard: DomainGuard::Disk { radius: 1.0 },
        inner: Box::new(MapExpr::Symmetrized {
            q: d.q,
            pre: 1.0,
            post: d.eps0,
            inner: Box::new(f1.backward_expr().clone()),
        }),
    };
    Ok(AnalyticMap::from_parts(
        forward,
        backward,
        format!("D(eps={}, eps0={}, q={})", d.eps, d.eps0, d.q),
    ))
}

/// The intrinsic rotation `R_{D,α} = F_q^{-1} ∘ R_α ∘ F_q`: the unique
/// automorphism of `D(ε, q)` fixing 0 with derivative `e^{2πiα}` (the
/// derivative is exact by chain-rule cancellation of `F_q'(0)`).
pub fn intrinsic_rotation(d: &SlitDomain, alpha: f64) -> Result<AnalyticMap, ConformalError> {
    let f = q_slit_uniformizer(d)?;
    let rot = AnalyticMap::rotation(alpha);
    Ok(f.then(&rot).then(&f.inverse()))
}

/// The root construction: given a linearizer `h` (tangent to identity) of a
/// finite-order germ `f = h^{-1}∘R_{1/q}∘h`, produces
/// `φ = h^{-1} ∘ R_{D(ε,q),1/(aq)} ∘ h` with `φ'(0) = e^{2πi/(aq)}` and
/// `φ^a = f` (the domain `D(ε, q)` is invariant under `R_{1/q}`, so the
/// intrinsic rotation at angle `1/q` is the rigid one).
pub fn prop5_root(
    h: &AnalyticMap,
    q: u32,
    eps: f64,
    eps0: f64,
    a: u32,
) -> Result<AnalyticMap, ConformalError> {
    if a < 2 || q < 2 {
        return Err(ConformalError::InvalidConstruction(format!(
            "the root construction needs integers q, a ≥ 2, got q = {q}, a = {a}"
        )));
    }
    let d0 = h.derivative0()?;
    if (d0 - Complex64::one()).norm() > 1e-8 {
        return Err(ConformalError::InvalidConstruction(format!(
            "h must be tangent to the identity, h'(0) = {d0}"
        )));
    }
    let domain = SlitDomain::new(eps, eps0, q)?;
    let rot = intrinsic_rotation(&domain, 1.0 / (a as f64 * q as f64))?;
    Ok(h.then(&rot).then(&h.inverse()))
}

/// Result of probing a slit point from both sides.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiaccessProbe {
    /// Uniformizer limits along the two normal approach paths, one pair per
    /// dyadic refinement (coarsest first).
    pub refinements: Vec<([f64; 2], [f64; 2])>,
    /// Final approximations of the two boundary prime-end images.
    pub side_a: [f64; 2],
    pub side_b: [f64; 2],
    /// |side_a − side_b|.
    pub separation: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeOptions {
    /// Initial normal offset, scaled by `eps0`.
    pub delta0: f64,
    /// Number of dyadic refinements.
    pub refinements: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            delta0: 1.6e-8,
            refinements: 3,
        }
    }
}

/// Evaluates the uniformizer of `D(ε, q)` along two approach paths normal
/// to a slit at `zstar` (interior slit points are biaccessible: the limits
/// are distinct boundary points of `D`; at the tip they coincide).
pub fn biaccessibility_probe(
    d: &SlitDomain,
    zstar: Complex64,
    opts: &ProbeOptions,
) -> Result<BiaccessProbe, ConformalError> {
    let t = zstar.norm();
    if !(t >= d.eps && t < d.eps0) {
        return Err(ConformalError::DomainViolation {
            re: zstar.re,
            im: zstar.im,
            reason: format!(
                "probe point must sit on a slit segment, radius {t} outside [{}, {})",
                d.eps, d.eps0
            ),
        });
    }
    // Snap to the nearest slit ray.
    let j = (arg01(zstar) * d.q as f64).round() % d.q as f64;
    let ray = Complex64::from_polar(1.0, std::f64::consts::TAU * j / d.q as f64);
    let point = ray * t;
    let normal = ray * Complex64::new(0.0, 1.0);

    let f = q_slit_uniformizer(d)?;
    let mut refinements = Vec::with_capacity(opts.refinements);
    let mut delta = opts.delta0 * d.eps0;
    let mut last = (Complex64::zero(), Complex64::zero());
    for _ in 0..opts.refinements {
        let plus = f.eval(point + normal * delta)?;
        let minus = f.eval(point - normal * delta)?;
        refinements.push(([plus.re, plus.im], [minus.re, minus.im]));
        last = (plus, minus);
        delta /= 2.0;
    }
    Ok(BiaccessProbe {
        refinements,
        side_a: [last.0.re, last.0.im],
        side_b: [last.1.re, last.1.im],
        separation: (last.0 - last.1).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{circle_samples, disk_samples};
    use crate::tol;

    #[test]
    fn single_slit_normalization() {
        let f = single_slit_uniformizer(0.5).unwrap();
        assert!(f.eval(Complex64::zero()).unwrap().norm() < 1e-14);
        let d0 = f.derivative0().unwrap();
        // Closed form F'(0) = 1/(1 − c²), real and ≥ 1 (Schwarz).
        let c = (1.0 - 0.5) / (1.0 + 0.5);
        assert!((d0 - Complex64::new(1.0 / (1.0 - c * c), 0.0)).norm() < 1e-12);
        assert!(d0.re >= 1.0 && d0.im.abs() < 1e-12);
    }

    #[test]
    fn single_slit_boundary_correspondence() {
        let f = single_slit_uniformizer(0.5).unwrap();
        for z in circle_samples(1.0, 64) {
            if (z - Complex64::new(-1.0, 0.0)).norm() < 1e-6 {
                continue; // pole of the half-plane chart
            }
            let w = f.eval(z).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-8, "boundary sample {z} -> {w}");
        }
    }

    #[test]
    fn single_slit_round_trip() {
        let f = single_slit_uniformizer(0.5).unwrap();
        let mut checked = 0;
        for z in disk_samples(0.97, 1000) {
            // Skip points on or next to the slit ray segment.
            if z.im.abs() < 1e-9 && z.re >= 0.5 {
                continue;
            }
            let w = f.eval(z).unwrap();
            assert!(w.norm() <= 1.0 + 1e-9);
            let back = f.eval_inverse(w).unwrap();
            assert!((back - z).norm() < 1e-10, "z = {z}, back = {back}");
            checked += 1;
        }
        assert!(checked > 900);
    }

    #[test]
    fn single_slit_short_slit_is_near_identity() {
        // s → 1 (empty slit): the map degenerates to the identity.
        let f = single_slit_uniformizer(0.999_999).unwrap();
        for z in disk_samples(0.9, 100) {
            let w = f.eval(z).unwrap();
            assert!((w - z).norm() < 1e-3, "z = {z}, w = {w}");
        }
        assert!((f.derivative0().unwrap() - Complex64::one()).norm() < 1e-5);
    }

    #[test]
    fn single_slit_rejects_slit_points() {
        let f = single_slit_uniformizer(0.5).unwrap();
        assert!(matches!(
            f.eval(Complex64::new(0.7, 0.0)),
            Err(ConformalError::DomainViolation { .. })
        ));
        assert!(matches!(
            f.eval(Complex64::new(1.5, 0.0)),
            Err(ConformalError::DomainViolation { .. })
        ));
    }

    #[test]
    fn q_slit_reduces_to_single_slit() {
        let d = SlitDomain::new(0.3, 1.0, 1).unwrap();
        let fq = q_slit_uniformizer(&d).unwrap();
        let f1 = single_slit_uniformizer(0.3).unwrap();
        for z in disk_samples(0.9, 200) {
            if z.im.abs() < 1e-9 && z.re >= 0.3 {
                continue;
            }
            let a = fq.eval(z).unwrap();
            let b = f1.eval(z).unwrap();
            assert!((a - b).norm() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn q_slit_equivariance() {
        let d = SlitDomain::new(0.1, 1.0, 3).unwrap();
        let f = q_slit_uniformizer(&d).unwrap();
        let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        for z in disk_samples(0.95, 300) {
            if !d.contains(z) || !d.contains(z * omega) {
                continue;
            }
            let lhs = f.eval(z * omega).unwrap();
            let rhs = f.eval(z).unwrap() * omega;
            assert!((lhs - rhs).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn q_slit_round_trip_and_continuity_across_interior_rays() {
        let d = SlitDomain::new(0.4, 1.0, 4).unwrap();
        let f = q_slit_uniformizer(&d).unwrap();
        for z in disk_samples(0.9, 500) {
            if !d.contains(z) {
                continue;
            }
            let w = f.eval(z).unwrap();
            let back = f.eval_inverse(w).unwrap();
            assert!((back - z).norm() < 1e-9, "z = {z}");
        }
        // Interior ray crossing: values from both sides agree.
        let x = Complex64::new(0.2, 0.0);
        let above = f.eval(x + Complex64::new(0.0, 1e-9)).unwrap();
        let below = f.eval(x - Complex64::new(0.0, 1e-9)).unwrap();
        assert!((above - below).norm() < 1e-6);
    }

    #[test]
    fn q_slit_derivative_formula() {
        // F_q'(0) = F_1'(0)^{1/q}/ε0 ≥ 1/ε0, strict with a genuine slit.
        let d = SlitDomain::new(0.2, 0.8, 3).unwrap();
        let f = q_slit_uniformizer(&d).unwrap();
        let d0 = f.derivative0().unwrap();
        let s = (0.2f64 / 0.8).powi(3);
        let c = (1.0 - s) / (1.0 + s);
        let expected = (1.0 / (1.0 - c * c)).powf(1.0 / 3.0) / 0.8;
        assert!((d0 - Complex64::new(expected, 0.0)).norm() < 1e-12);
        assert!(d0.re > 1.0 / 0.8);
    }

    #[test]
    fn intrinsic_rotation_basics() {
        let d = SlitDomain::new(0.1, 1.0, 2).unwrap();
        // α = 0 is the identity.
        let r0 = intrinsic_rotation(&d, 0.0).unwrap();
        for z in disk_samples(0.8, 100) {
            if !d.contains(z) {
                continue;
            }
            assert!((r0.eval(z).unwrap() - z).norm() < 1e-10);
        }
        // Derivative at 0 is e^{2πiα} by chain-rule cancellation.
        let r = intrinsic_rotation(&d, 0.137).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU * 0.137);
        assert!((r.derivative0().unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn intrinsic_rotation_at_symmetry_angle_is_rigid() {
        let d = SlitDomain::new(0.1, 1.0, 2).unwrap();
        let r = intrinsic_rotation(&d, 0.5).unwrap();
        for z in disk_samples(0.9, 1000) {
            if !d.contains(z) {
                continue;
            }
            let lhs = r.eval(z).unwrap();
            assert!((lhs + z).norm() < 1e-9, "z = {z}: {lhs} vs {}", -z);
        }
    }

    #[test]
    fn intrinsic_rotation_group_law() {
        let d = SlitDomain::new(0.2, 1.0, 3).unwrap();
        let (alpha, beta) = (0.21, 0.34);
        let ra = intrinsic_rotation(&d, alpha).unwrap();
        let rb = intrinsic_rotation(&d, beta).unwrap();
        let rab = intrinsic_rotation(&d, alpha + beta).unwrap();
        for z in disk_samples(0.7, 200) {
            if !d.contains(z) {
                continue;
            }
            let lhs = rb.eval(ra.eval(z).unwrap());
            let lhs = match lhs {
                Ok(v) => v,
                Err(_) => continue,
            };
            let rhs = rab.eval(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn prop5_root_identity_linearizer() {
        // h = id, q = 2, a = 3: φ'(0) = e^{2πi/6} and φ³ = R_{1/2}.
        let h = AnalyticMap::identity();
        let phi = prop5_root(&h, 2, 0.1, 1.0, 3).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU / 6.0);
        assert!((phi.derivative0().unwrap() - expected).norm() < 1e-10);
        let d = SlitDomain::new(0.1, 1.0, 2).unwrap();
        for z in disk_samples(0.9, 1000) {
            if !d.contains(z) {
                continue;
            }
            let cubed = phi.iterate(z, 3).unwrap();
            assert!((cubed + z).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn prop5_root_rejects_a_one() {
        let h = AnalyticMap::identity();
        assert!(matches!(
            prop5_root(&h, 2, 0.1, 1.0, 1),
            Err(ConformalError::InvalidConstruction(_))
        ));
    }

    #[test]
    fn prop5_root_mobius_linearizer() {
        // h = z/(1−z), q = 2, a = 2: φ'(0) = i, φ² = h^{-1}∘R_{1/2}∘h.
        let h = AnalyticMap::mobius(
            Mobius::new(
                Complex64::one(),
                Complex64::zero(),
                -Complex64::one(),
                Complex64::one(),
            )
            .unwrap(),
        );
        let phi = prop5_root(&h, 2, 0.05, 0.4, 2).unwrap();
        assert!((phi.derivative0().unwrap() - Complex64::new(0.0, 1.0)).norm() < 1e-10);
        let target = |z: Complex64| {
            let w = h.eval(z).unwrap();
            h.eval_inverse(-w).unwrap()
        };
        let mut checked = 0;
        for z in disk_samples(0.2, 500) {
            let w = h.eval(z).unwrap();
            if w.norm() >= 0.38 || SlitDomain::new(0.05, 0.4, 2).unwrap().on_slit(w) {
                continue;
            }
            let sq = phi.iterate(z, 2).unwrap();
            assert!((sq - target(z)).norm() < 1e-9, "z = {z}");
            checked += 1;
        }
        assert!(checked > 300);
    }

    #[test]
    fn biaccessibility_interior_and_tip() {
        let d = SlitDomain::new(0.1, 1.0, 2).unwrap();
        let probe = biaccessibility_probe(&d, Complex64::new(0.5, 0.0), &ProbeOptions::default())
            .unwrap();
        assert!(probe.separation > 0.1, "separation {}", probe.separation);
        for (p, m) in &probe.refinements {
            let pa = Complex64::new(p[0], p[1]).norm();
            let ma = Complex64::new(m[0], m[1]).norm();
            assert!((pa - 1.0).abs() < 1e-6 && (ma - 1.0).abs() < 1e-6);
        }

        let tip = biaccessibility_probe(&d, Complex64::new(0.1, 0.0), &ProbeOptions::default())
            .unwrap();
        assert!(tip.separation < tol::TOL_ACCESS, "tip separation {}", tip.separation);
    }
}
