//! Exact arithmetic in Q/Z and the cyclic structure of its subgroups.
//!
//! Every finite subgroup of Q/Z is cyclic, generated by `1/q` with `q` the
//! lcm of the element orders; infinite subgroups are increasing unions of
//! cyclic ones along a divisibility chain `q_n | q_{n+1}`. This module also
//! verifies, in exact rational interval arithmetic, the δ-neighborhood
//! intersection identity behind the tower construction:
//!
//! `∩_n ((1/q_n)Z + D_{δ_n})/Z = ((1/q_N)Z)/Z` with `δ_n = 1/(3 q_{n+1})`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QzError {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("integer overflow in exact Q/Z arithmetic (q would exceed u64)")]
    Overflow,
    #[error("tower must have at least {required} levels, got {got}")]
    TooShallow { required: usize, got: usize },
    #[error("tower index {index} out of range for depth {depth}")]
    IndexOutOfRange { index: usize, depth: usize },
    #[error("divisibility chain violated: {prev} does not divide {next}")]
    BrokenChain { prev: u64, next: u64 },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> Result<u64, QzError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(QzError::Overflow)
}

/// A reduced representative `p/q` of an element of Q/Z with `0 ≤ p < q`
/// and `gcd(p, q) = 1` (the zero element is `0/1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QZRational {
    pub p: u64,
    pub q: u64,
}

impl QZRational {
    /// Reduces `p/q` modulo 1; `p` may be negative.
    pub fn new(p: i64, q: u64) -> Result<Self, QzError> {
        if q == 0 {
            return Err(QzError::ZeroDenominator);
        }
        let p = p.rem_euclid(q as i64) as u64;
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if p == 0 {
            Ok(Self { p: 0, q: 1 })
        } else {
            Ok(Self { p, q })
        }
    }

    pub fn zero() -> Self {
        Self { p: 0, q: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    /// Order of the element in Q/Z: the reduced denominator.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn add(&self, other: &Self) -> Result<Self, QzError> {
        let q = lcm(self.q, other.q)?;
        let a = (self.p as u128) * ((q / self.q) as u128);
        let b = (other.p as u128) * ((q / other.q) as u128);
        let p = (a + b) % q as u128;
        Self::new(p as i64, q)
    }

    pub fn neg(&self) -> Self {
        if self.p == 0 {
            *self
        } else {
            Self {
                p: self.q - self.p,
                q: self.q,
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QzError> {
        self.add(&other.neg())
    }

    /// Exact value as a big rational in `[0, 1)`.
    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl std::fmt::Display for QZRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Generator `1/q` of the cyclic subgroup generated by a finite set:
/// `q` is the lcm of the element orders (the empty or all-zero set gives
/// the trivial subgroup `⟨0/1⟩`).
pub fn cyclic_generator(xs: &[QZRational]) -> Result<QZRational, QzError> {
    let mut q = 1u64;
    for x in xs {
        q = lcm(q, x.order())?;
    }
    if q == 1 {
        Ok(QZRational::zero())
    } else {
        QZRational::new(1, q)
    }
}

/// A strictly increasing chain of cyclic subgroups `⟨1/q_1⟩ ⊂ ⟨1/q_2⟩ ⊂ …`
/// with `q_n | q_{n+1}`; `as_[n]` holds the jump `a_{n+1} = q_{n+1}/q_n ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicTower {
    pub qs: Vec<u64>,
    #[serde(rename = "as")]
    pub as_: Vec<u64>,
}

impl CyclicTower {
    /// Validates the divisibility chain and strict growth.
    pub fn new(qs: Vec<u64>) -> Result<Self, QzError> {
        let mut as_ = Vec::new();
        for w in qs.windows(2) {
            if w[1] % w[0] != 0 || w[1] / w[0] < 2 {
                return Err(QzError::BrokenChain {
                    prev: w[0],
                    next: w[1],
                });
            }
            as_.push(w[1] / w[0]);
        }
        if qs.iter().any(|&q| q == 0) {
            return Err(QzError::ZeroDenominator);
        }
        Ok(Self { qs, as_ })
    }

    pub fn depth(&self) -> usize {
        self.qs.len()
    }
}

/// Decomposes an enumerated subgroup into its tower of cyclic subgroups:
/// `q_n` is the order of the subgroup generated by the shortest prefix
/// achieving the n-th strict growth. Stabilized enumerations yield a tower
/// shorter than `depth` (a finite subgroup).
pub fn tower_decompose(xs: &[QZRational], depth: usize) -> Result<CyclicTower, QzError> {
    let mut qs = Vec::new();
    let mut current = 1u64;
    for x in xs {
        if qs.len() >= depth {
            break;
        }
        current = lcm(current, x.order())?;
        if current > 1 && qs.last() != Some(&current) {
            qs.push(current);
        }
    }
    CyclicTower::new(qs)
}

/// The proof's neighborhood radii `δ_n = 1/(3 q_{n+1})`, one per adjacent
/// pair of levels.
pub fn delta_sequence(tower: &CyclicTower) -> Result<Vec<BigRational>, QzError> {
    if tower.depth() < 2 {
        return Err(QzError::TooShallow {
            required: 2,
            got: tower.depth(),
        });
    }
    Ok(tower.qs[1..]
        .iter()
        .map(|&q| BigRational::new(BigInt::one(), BigInt::from(3u64) * BigInt::from(q)))
        .collect())
}

/// An open interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

/// Intersection of two sorted disjoint open-interval unions.
fn intersect_unions(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = if a[i].lo >= b[j].lo { a[i].lo.clone() } else { b[j].lo.clone() };
        let hi = if a[i].hi <= b[j].hi { a[i].hi.clone() } else { b[j].hi.clone() };
        if lo < hi {
            out.push(Interval { lo, hi });
        }
        if a[i].hi <= b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// The neighborhood `((1/q)Z + D_δ) ∩ [−δ_pad, 1 + δ_pad)` as sorted open
/// intervals on the line; callers treat `[0, 1)` as the circle and the pad
/// keeps wrap-around components intact.
fn neighborhood_intervals(q: u64, delta: &BigRational) -> Vec<Interval> {
    let mut out = Vec::new();
    // Centers k/q for k = −1..=q so the unit window is fully covered.
    for k in -1..=(q as i64) {
        let center = BigRational::new(BigInt::from(k), BigInt::from(q));
        out.push(Interval {
            lo: center.clone() - delta.clone(),
            hi: center + delta.clone(),
        });
    }
    // δ < 1/(2q) keeps these disjoint and sorted; merge genuinely
    // overlapping intervals (open intervals that merely touch stay apart:
    // the shared endpoint is not covered).
    let mut merged: Vec<Interval> = Vec::new();
    for iv in out {
        if let Some(last) = merged.last_mut() {
            if iv.lo < last.hi {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        merged.push(iv);
    }
    merged
}

/// Simplest rational (smallest denominator) in the open interval
/// `(lo, hi)` via the continued-fraction walk.
fn simplest_in_open(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi, "empty interval");
    // Shift to nonnegative territory first.
    if lo.is_negative() {
        let shift = BigRational::one() - lo.floor();
        return simplest_in_open(&(lo + shift.clone()), &(hi + shift.clone())) - shift;
    }
    let fl = lo.floor();
    // Smallest integer strictly above lo (works whether or not lo is one).
    let candidate = fl.clone() + BigRational::one();
    if &candidate < hi {
        return candidate;
    }
    // No integer inside, so (lo, hi) ⊂ [fl, fl+1]. Write x = fl + 1/y; the
    // simplest x corresponds to the simplest y in the reciprocal interval.
    let frac_lo = lo - fl.clone();
    let frac_hi = hi - fl.clone();
    if frac_lo.is_zero() {
        // (fl, fl + f): the reciprocal interval is (1/f, ∞); its simplest
        // element is the smallest integer strictly above 1/f.
        let inv = BigRational::one() / frac_hi;
        let k = inv.floor() + BigRational::one();
        return fl + BigRational::one() / k;
    }
    let r = simplest_in_open(&(BigRational::one() / frac_hi), &(BigRational::one() / frac_lo));
    fl + BigRational::one() / r
}

/// Report of the δ-neighborhood intersection check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub holds: bool,
    pub vacuous: bool,
    pub component_count: usize,
    /// Simplest rationals (as `(p, q)` strings) found in offending
    /// components, empty when the identity holds.
    pub witnesses: Vec<String>,
}

/// Checks, over the available finite depth and in exact rational
/// arithmetic, that the intersection of the δ-neighborhoods of the lattices
/// `(1/q_n)Z` from level `n_start` on collapses onto `(1/q_{n_start})Z`:
///
/// * (⊇) every `k/q_{n_start}` lies in all the neighborhoods;
/// * (⊆) the intersection is a disjoint union of components, and the
///   simplest rational inside each component with denominator at most
///   `resolution` must be a multiple of `1/q_{n_start}`.
///
/// `n_start` is 1-based. Neighborhood radii come from `deltas` (one per
/// adjacent level pair, as produced by [`delta_sequence`]); a single-level
/// tower is vacuously true and flagged as such.
pub fn neighborhood_intersection_check_with_deltas(
    tower: &CyclicTower,
    n_start: usize,
    resolution: u64,
    deltas: &[BigRational],
) -> Result<IntersectionReport, QzError> {
    let depth = tower.depth();
    if n_start == 0 || n_start > depth {
        return Err(QzError::IndexOutOfRange {
            index: n_start,
            depth,
        });
    }
    // Levels with a defined δ: n = n_start .. depth−1 (1-based).
    let usable: Vec<(u64, &BigRational)> = (n_start..depth)
        .map(|n| (tower.qs[n - 1], &deltas[n - 1]))
        .collect();
    if usable.is_empty() {
        return Ok(IntersectionReport {
            holds: true,
            vacuous: true,
            component_count: 0,
            witnesses: Vec::new(),
        });
    }

    let mut inter = neighborhood_intervals(usable[0].0, usable[0].1);
    for &(q, delta) in &usable[1..] {
        inter = intersect_unions(&inter, &neighborhood_intervals(q, delta));
    }

    // Keep one circle's worth: components whose midpoint falls in [0, 1).
    let zero = BigRational::zero();
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let components: Vec<Interval> = inter
        .into_iter()
        .filter(|iv| {
            let mid = (iv.lo.clone() + iv.hi.clone()) / two.clone();
            mid >= zero && mid < one
        })
        .collect();

    let q_base = BigInt::from(tower.qs[n_start - 1]);
    let res = BigInt::from(resolution);
    let mut witnesses = Vec::new();

    // (⊇) every multiple of 1/q_base must be interior to some component.
    let mut containment_ok = true;
    for k in 0..tower.qs[n_start - 1] {
        let x = BigRational::new(BigInt::from(k), q_base.clone());
        if !components.iter().any(|iv| iv.lo < x && x < iv.hi) {
            containment_ok = false;
            witnesses.push(format!("missing {}/{}", k, q_base));
        }
    }

    // (⊆) per component, the simplest contained rational of denominator
    // ≤ resolution must be a multiple of 1/q_base.
    let mut collapse_ok = true;
    for iv in &components {
        let simplest = simplest_in_open(&iv.lo, &iv.hi);
        if simplest.denom() > &res {
            continue; // not decidable at this resolution
        }
        let scaled = simplest.clone() * BigRational::new(q_base.clone(), BigInt::one());
        if !scaled.is_integer() {
            collapse_ok = false;
            witnesses.push(format!("{}/{}", simplest.numer(), simplest.denom()));
        }
    }

    Ok(IntersectionReport {
        holds: containment_ok && collapse_ok,
        vacuous: false,
        component_count: components.len(),
        witnesses,
    })
}

/// [`neighborhood_intersection_check_with_deltas`] with the proof's radii
/// `δ_n = 1/(3 q_{n+1})`.
pub fn neighborhood_intersection_check(
    tower: &CyclicTower,
    n_start: usize,
    resolution: u64,
) -> Result<IntersectionReport, QzError> {
    if tower.depth() < 2 {
        return Ok(IntersectionReport {
            holds: true,
            vacuous: true,
            component_count: 0,
            witnesses: Vec::new(),
        });
    }
    let deltas = delta_sequence(tower)?;
    neighborhood_intersection_check_with_deltas(tower, n_start, resolution, &deltas)
}

/// The inflated radii `δ_n = 1/q_{n+1}` used as the deliberate failure
/// witness (neighborhoods wide enough to cover new points).
pub fn inflated_deltas(tower: &CyclicTower) -> Result<Vec<BigRational>, QzError> {
    if tower.depth() < 2 {
        return Err(QzError::TooShallow {
            required: 2,
            got: tower.depth(),
        });
    }
    Ok(tower.qs[1..]
        .iter()
        .map(|&q| BigRational::new(BigInt::one(), BigInt::from(q)))
        .collect())
}

/// Entry of a rotation set: a certified rational or an asserted-irrational
/// marker (irrationality is never inferred numerically).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationEntry {
    Rational(QZRational),
    Irrational { label: String },
}

/// The three kinds of rotation-number groups of maximal abelian subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupCase {
    /// Finite subgroup of Q/Z.
    CaseI,
    /// Infinite subgroup of Q/Z.
    CaseII,
    /// Contains an irrational rotation.
    CaseIII,
}

/// Classifies a rotation set by the trichotomy: all rational and finite,
/// all rational and infinite, or containing an irrational.
pub fn classify_subgroup(rotations: &[RotationEntry], finite: bool) -> SubgroupCase {
    if rotations
        .iter()
        .any(|r| matches!(r, RotationEntry::Irrational { .. }))
    {
        SubgroupCase::CaseIII
    } else if finite {
        SubgroupCase::CaseI
    } else {
        SubgroupCase::CaseII
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn r(p: i64, q: u64) -> QZRational {
        QZRational::new(p, q).unwrap()
    }

    #[test]
    fn group_ops() {
        assert_eq!(r(1, 2).add(&r(1, 2)).unwrap(), QZRational::zero());
        assert_eq!(r(1, 2).add(&r(1, 3)).unwrap(), r(5, 6));
        assert_eq!(r(3, 7).order(), 7);
        assert_eq!(r(-1, 3), r(2, 3));
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(1, 3).neg(), r(2, 3));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(cyclic_generator(&[r(1, 2), r(1, 3)]).unwrap(), r(1, 6));
        assert_eq!(cyclic_generator(&[QZRational::zero()]).unwrap(), QZRational::zero());
        assert_eq!(cyclic_generator(&[r(3, 8)]).unwrap(), r(1, 8));
    }

    /// Brute-force closure of a set under addition in Q/Z.
    fn closure(xs: &[QZRational]) -> BTreeSet<QZRational> {
        let mut set: BTreeSet<QZRational> = xs.iter().copied().collect();
        set.insert(QZRational::zero());
        loop {
            let mut grew = false;
            let snapshot: Vec<_> = set.iter().copied().collect();
            for a in &snapshot {
                for b in &snapshot {
                    if set.insert(a.add(b).unwrap()) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn generator_matches_bruteforce_closure() {
        let sets: Vec<Vec<QZRational>> = vec![
            vec![r(1, 2), r(1, 3)],
            vec![r(3, 8), r(5, 12)],
            vec![r(2, 9), r(1, 6), r(3, 10)],
            vec![QZRational::zero()],
        ];
        for xs in sets {
            let g = cyclic_generator(&xs).unwrap();
            let generated: BTreeSet<QZRational> = (0..g.order())
                .map(|k| QZRational::new((k as i64) * (g.p as i64), g.q).unwrap())
                .collect();
            assert_eq!(closure(&xs), generated, "set {:?}", xs);
        }
    }

    #[test]
    fn tower_examples() {
        let t = tower_decompose(&[r(1, 2), r(1, 4), r(1, 8)], 3).unwrap();
        assert_eq!(t.qs, vec![2, 4, 8]);
        assert_eq!(t.as_, vec![2, 2]);

        let t = tower_decompose(&[r(1, 2), r(1, 3), r(1, 5)], 3).unwrap();
        assert_eq!(t.qs, vec![2, 6, 30]);

        let t = tower_decompose(&[r(1, 2), r(1, 2), r(1, 2)], 3).unwrap();
        assert_eq!(t.qs, vec![2]);
    }

    #[test]
    fn delta_examples() {
        let t = CyclicTower::new(vec![2, 4, 8]).unwrap();
        let d = delta_sequence(&t).unwrap();
        assert_eq!(d[0], BigRational::new(1.into(), 12.into()));
        assert_eq!(d[1], BigRational::new(1.into(), 24.into()));

        let t = CyclicTower::new(vec![2, 6]).unwrap();
        let d = delta_sequence(&t).unwrap();
        assert_eq!(d[0], BigRational::new(1.into(), 18.into()));

        // δ_n < 1/(2 q_{n+1}) always.
        for (d_n, q_next) in d.iter().zip(&t.qs[1..]) {
            assert!(d_n < &BigRational::new(1.into(), BigInt::from(2 * q_next)));
        }
    }

    #[test]
    fn simplest_rational_walk() {
        let lo = BigRational::new(1.into(), 16.into());
        let hi = BigRational::new(1.into(), 8.into());
        let s = simplest_in_open(&lo, &hi);
        assert!(lo < s && s < hi);
        assert_eq!(s, BigRational::new(1.into(), 9.into()));

        let lo = BigRational::new(26.into(), 162.into());
        let hi = BigRational::new(28.into(), 162.into());
        assert_eq!(simplest_in_open(&lo, &hi), BigRational::new(1.into(), 6.into()));

        let lo = BigRational::new((-1).into(), 48.into());
        let hi = BigRational::new(1.into(), 48.into());
        assert_eq!(simplest_in_open(&lo, &hi), BigRational::zero());
    }

    #[test]
    fn intersection_power_tower() {
        let t = CyclicTower::new(vec![2, 4, 8]).unwrap();
        let rep = neighborhood_intersection_check(&t, 1, 10_000).unwrap();
        assert!(rep.holds && !rep.vacuous, "{:?}", rep);
        assert_eq!(rep.component_count, 2);
    }

    #[test]
    fn intersection_mixed_tower() {
        let t = CyclicTower::new(vec![2, 6, 18, 54]).unwrap();
        let rep = neighborhood_intersection_check(&t, 2, 10_000).unwrap();
        assert!(rep.holds, "{:?}", rep);
        assert_eq!(rep.component_count, 6);
    }

    #[test]
    fn intersection_single_level_vacuous() {
        let t = CyclicTower::new(vec![2]).unwrap();
        let rep = neighborhood_intersection_check(&t, 1, 100).unwrap();
        assert!(rep.holds && rep.vacuous);
    }

    #[test]
    fn inflated_deltas_fail() {
        let t = CyclicTower::new(vec![2, 4, 8, 16]).unwrap();
        let deltas = inflated_deltas(&t).unwrap();
        let rep = neighborhood_intersection_check_with_deltas(&t, 1, 10_000, &deltas).unwrap();
        assert!(!rep.holds, "{:?}", rep);
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn subgroup_cases() {
        let finite = vec![
            RotationEntry::Rational(QZRational::zero()),
            RotationEntry::Rational(r(1, 3)),
            RotationEntry::Rational(r(2, 3)),
        ];
        assert_eq!(classify_subgroup(&finite, true), SubgroupCase::CaseI);

        let prufer: Vec<RotationEntry> = (1..=4)
            .map(|k| RotationEntry::Rational(r(1, 1 << k)))
            .collect();
        assert_eq!(classify_subgroup(&prufer, false), SubgroupCase::CaseII);

        let irr = vec![RotationEntry::Irrational {
            label: "golden-mean".into(),
        }];
        assert_eq!(classify_subgroup(&irr, true), SubgroupCase::CaseIII);
    }
}
