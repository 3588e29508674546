//! Coefficient fields for jet arithmetic.
//!
//! Every jet operation is generic over a [`Scalar`]: a complex field with
//! enough structure to run the coefficient recursions. Two instances are
//! provided:
//!
//! * [`num_complex::Complex64`] — the working field for all numerics;
//! * [`GaussianRational`] — exact complex rationals `a + bi` with `a, b ∈ Q`,
//!   used by oracle cross-checks to separate roundoff from logic errors.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A complex field usable as the coefficient ring of truncated jets.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Whether arithmetic in this field is exact. Exact fields use equality
    /// where floating-point fields use tolerances.
    const EXACT: bool;

    /// Embeds an integer.
    fn from_integer(n: i64) -> Self;

    /// Approximate modulus, used for residual reporting and tolerance tests.
    fn modulus(&self) -> f64;

    /// Approximate complex value (for diagnostics and serialization).
    fn approx(&self) -> Complex64;

    /// A principal `n`-th root, when one is representable in the field.
    fn nth_root(&self, n: u32) -> Option<Self>;
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn approx(&self) -> Complex64 {
        *self
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if self.is_zero() {
            return Some(Complex64::zero());
        }
        let (r, theta) = self.to_polar();
        Some(Complex64::from_polar(r.powf(1.0 / n as f64), theta / n as f64))
    }
}

/// An exact complex rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// Builds `p/q` as a real rational.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    /// Exact conversion of an `f64` (every finite double is a dyadic
    /// rational). Panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        Self {
            re: BigRational::from_float(x).expect("finite float"),
            im: BigRational::zero(),
        }
    }

    /// Exact conversion of a complex double.
    pub fn from_complex(z: Complex64) -> Self {
        Self {
            re: BigRational::from_float(z.re).expect("finite float"),
            im: BigRational::from_float(z.im).expect("finite float"),
        }
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        assert!(!d.is_zero(), "division by zero GaussianRational");
        let num = self * rhs.conj();
        Self {
            re: num.re / d.clone(),
            im: num.im / d,
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

/// Exact `n`-th root of a rational, when the numerator and denominator are
/// perfect `n`-th powers (sign handled for odd `n`).
fn rational_nth_root(x: &BigRational, n: u32) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let negative = x.is_negative();
    if negative && n % 2 == 0 {
        return None;
    }
    let mag = x.abs();
    let num = num_integer::Roots::nth_root(mag.numer(), n);
    let den = num_integer::Roots::nth_root(mag.denom(), n);
    if num.pow(n) != *mag.numer() || den.pow(n) != *mag.denom() {
        return None;
    }
    let root = BigRational::new(num, den);
    Some(if negative { -root } else { root })
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_integer(n: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    fn modulus(&self) -> f64 {
        let n = self.norm_sqr();
        n.to_f64().map(f64::sqrt).unwrap_or(f64::INFINITY)
    }

    fn approx(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some(self.clone());
        }
        if self.im.is_zero() {
            // Real case: try an exact rational root. For negative reals and
            // even n fall through to the quartic units below.
            if let Some(r) = rational_nth_root(&self.re, n) {
                return Some(Self {
                    re: r,
                    im: BigRational::zero(),
                });
            }
        }
        // Roots that land back in Q(i): ±1, ±i times a real rational root.
        if self.re.is_zero() && !self.im.is_zero() && n == 2 {
            // sqrt(i·t) for t > 0 is not Gaussian rational; give up.
            return None;
        }
        if self.im.is_zero() && self.re.is_negative() && n % 2 == 0 && n % 4 != 0 {
            // (i·r)^2 = −r²: representable square root of a negative real.
            if let Some(r) = rational_nth_root(&(-self.re.clone()), n) {
                return Some(Self {
                    re: BigRational::zero(),
                    im: r,
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field_ops() {
        let a = GaussianRational::from_ratio(1, 2);
        let b = GaussianRational::i();
        let prod = a.clone() * b.clone();
        assert_eq!(prod, GaussianRational::new(BigRational::zero(), BigRational::new(1.into(), 2.into())));
        let q = prod / b;
        assert_eq!(q, a);
    }

    #[test]
    fn exact_roots() {
        let eight = GaussianRational::from_integer(8);
        assert_eq!(eight.nth_root(3), Some(GaussianRational::from_integer(2)));
        let minus_quarter = GaussianRational::from_ratio(-1, 4);
        let r = minus_quarter.nth_root(2).unwrap();
        assert_eq!(r.clone() * r, minus_quarter);
        assert_eq!(GaussianRational::from_integer(2).nth_root(2), None);
    }

    #[test]
    fn f64_conversion_is_exact() {
        let x = 0.1f64;
        let g = GaussianRational::from_f64(x);
        assert_eq!(g.re.to_f64().unwrap(), x);
    }
}
