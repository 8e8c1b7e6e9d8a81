//! Configurable-precision real and complex values.
//!
//! [`BigReal`] wraps an MPFR float and carries its precision explicitly. Binary
//! operations produce a result at the larger of the two operand precisions, so
//! no silent narrowing happens. [`BigComplex`] is a pair of such values sharing
//! one precision, with the elementary functions needed for contour work
//! (principal-branch logarithm, exponential, trigonometric nodes).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Extra bits carried through compound evaluations before the final rounding.
pub const GUARD_BITS: u32 = 32;

/// Smallest precision accepted by the public numeric entry points.
pub const MIN_PRECISION: u32 = 64;

/// Number of significant decimal digits that `bits` binary digits support.
pub fn decimal_digits_for_bits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn with_val<T>(precision_bits: u32, value: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        BigReal(Float::with_val(precision_bits, value))
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::with_val(precision_bits, 0)
    }

    pub fn from_rational(value: &Rational, precision_bits: u32) -> Self {
        Self::with_val(precision_bits, value)
    }

    pub fn from_integer(value: &Integer, precision_bits: u32) -> Self {
        Self::with_val(precision_bits, value)
    }

    pub fn from_float(value: Float) -> Self {
        BigReal(value)
    }

    /// Parse a decimal literal such as `0.5` or `1e-25`, correctly rounded.
    pub fn parse(text: &str, precision_bits: u32) -> crate::error::Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| crate::error::Error::Format(format!("cannot parse `{text}` as a number: {e}")))?;
        let value = Float::with_val(precision_bits, parsed);
        if value.is_finite() {
            Ok(BigReal(value))
        } else {
            Err(crate::error::Error::Format(format!("`{text}` is not a finite number")))
        }
    }

    pub fn pi(precision_bits: u32) -> Self {
        Self::with_val(precision_bits, Constant::Pi)
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Same value rounded (to nearest) to `precision_bits`.
    pub fn round_to(&self, precision_bits: u32) -> Self {
        Self::with_val(precision_bits, &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn ln_1p(&self) -> Self {
        BigReal(self.0.clone().ln_1p())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn square(&self) -> Self {
        BigReal(self.0.clone().square())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn powi(&self, exponent: i32) -> Self {
        BigReal(self.0.clone().pow(exponent))
    }

    /// Multiply by `2^shift` exactly (no rounding).
    pub fn mul_pow2(&self, shift: i32) -> Self {
        let mut v = self.0.clone();
        if shift >= 0 {
            v <<= shift as u32;
        } else {
            v >>= shift.unsigned_abs();
        }
        BigReal(v)
    }

    /// Binary exponent `e` such that `2^(e-1) <= |x| < 2^e`, or `None` for zero
    /// and non-finite values.
    pub fn binary_exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_scientific(&self, digits: usize) -> String {
        scientific(&self.0, digits)
    }

    /// Scientific notation with as many digits as the precision supports.
    pub fn to_scientific_full(&self) -> String {
        self.to_scientific(decimal_digits_for_bits(self.precision_bits()))
    }

    pub fn max(self, other: Self) -> Self {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

/// `d.ddd...e<exp>` with exactly `digits` significant digits, or `0`,
/// `inf`, `-inf`, `NaN`.
fn scientific(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        let sign = if x.is_sign_negative() { "-" } else { "" };
        let zeros = "0".repeat(digits - 1);
        return if zeros.is_empty() {
            format!("{sign}0e0")
        } else {
            format!("{sign}0.{zeros}e0")
        };
    }
    if !x.is_normal() {
        return x.to_string_radix(10, Some(digits));
    }
    let (negative, mantissa, exponent) = x.to_sign_string_exp(10, Some(digits));
    let exponent = exponent.expect("normal floats have an exponent") - 1;
    let (lead, rest) = mantissa.split_at(1);
    let sign = if negative { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{lead}e{exponent}")
    } else {
        format!("{sign}{lead}.{rest}e{exponent}")
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_scientific(20), self.precision_bits())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific_full())
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.precision_bits().max(rhs.precision_bits());
                BigReal(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

/// Complex value with both parts at the same precision.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    re: Float,
    im: Float,
}

impl BigComplex {
    pub fn new(re: &BigReal, im: &BigReal) -> Self {
        let prec = re.precision_bits().max(im.precision_bits());
        Self::from_floats(prec, re.as_float(), im.as_float())
    }

    pub fn with_val<R, I>(precision_bits: u32, re: R, im: I) -> Self
    where
        Float: rug::Assign<R> + rug::Assign<I>,
    {
        BigComplex {
            re: Float::with_val(precision_bits, re),
            im: Float::with_val(precision_bits, im),
        }
    }

    pub fn from_real(re: &BigReal) -> Self {
        let prec = re.precision_bits();
        Self::from_floats(prec, re.as_float(), &Float::new(prec))
    }

    fn from_floats(prec: u32, re: &Float, im: &Float) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    /// `radius * (cos(angle) + i sin(angle))`
    pub fn from_polar(radius: &BigReal, angle: &BigReal) -> Self {
        let prec = radius.precision_bits().max(angle.precision_bits());
        let (s, c) = Float::with_val(prec, angle.as_float()).sin_cos(Float::new(prec));
        BigComplex {
            re: Float::with_val(prec, &c * radius.as_float()),
            im: Float::with_val(prec, &s * radius.as_float()),
        }
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> BigReal {
        BigReal(self.re.clone())
    }

    pub fn im(&self) -> BigReal {
        BigReal(self.im.clone())
    }

    pub fn round_to(&self, precision_bits: u32) -> Self {
        Self::from_floats(precision_bits, &self.re, &self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when the value is real and `<= bound`.
    pub fn is_real_at_most(&self, bound: i32) -> bool {
        self.im.is_zero() && self.re <= bound
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn abs(&self) -> BigReal {
        BigReal(Float::with_val(self.precision_bits(), self.re.hypot_ref(&self.im)))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> BigReal {
        // MPFR: atan2(+-0, x<0) = +-pi; canonicalize -0 so the cut maps to +pi.
        let im = if self.im.is_zero() {
            Float::new(self.precision_bits())
        } else {
            self.im.clone()
        };
        BigReal(Float::with_val(self.precision_bits(), im.atan2_ref(&self.re)))
    }

    pub fn add_real(&self, x: &BigReal) -> Self {
        let prec = self.precision_bits().max(x.precision_bits());
        BigComplex {
            re: Float::with_val(prec, &self.re + x.as_float()),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn scale(&self, x: &BigReal) -> Self {
        let prec = self.precision_bits().max(x.precision_bits());
        BigComplex {
            re: Float::with_val(prec, &self.re * x.as_float()),
            im: Float::with_val(prec, &self.im * x.as_float()),
        }
    }

    pub fn recip(&self) -> Self {
        let prec = self.precision_bits();
        let norm = Float::with_val(prec, self.re.hypot_ref(&self.im)).square();
        BigComplex {
            re: Float::with_val(prec, &self.re / &norm),
            im: -Float::with_val(prec, &self.im / &norm),
        }
    }

    pub fn exp(&self) -> Self {
        let prec = self.precision_bits();
        let modulus = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(prec));
        BigComplex {
            re: Float::with_val(prec, &modulus * &c),
            im: Float::with_val(prec, &modulus * &s),
        }
    }

    /// Principal logarithm `ln|z| + i arg z`. Zero maps to `-inf`.
    pub fn ln(&self) -> Self {
        let prec = self.precision_bits();
        let modulus = Float::with_val(prec, self.re.hypot_ref(&self.im));
        BigComplex {
            re: modulus.ln(),
            im: self.arg().into_float(),
        }
    }

    /// `ln(1 + z)` without forming `1 + z` when `|z|` is small.
    pub fn ln_1p(&self) -> Self {
        let prec = self.precision_bits();
        if self.im.is_zero() {
            return BigComplex {
                re: self.re.clone().ln_1p(),
                im: Float::new(prec),
            };
        }
        // ln|1+z| = ln_1p(2 re + re^2 + im^2) / 2
        let wide = prec + GUARD_BITS;
        let re = Float::with_val(wide, &self.re);
        let im = Float::with_val(wide, &self.im);
        let t = Float::with_val(wide, &re * 2u32)
            + Float::with_val(wide, re.square_ref())
            + Float::with_val(wide, im.square_ref());
        let log_mod = t.ln_1p() / 2u32;
        let one_plus = Float::with_val(wide, &re + 1u32);
        let arg = im.atan2(&one_plus);
        BigComplex {
            re: Float::with_val(prec, log_mod),
            im: Float::with_val(prec, arg),
        }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigComplex({} + {}i, {} bits)",
            scientific(&self.re, 20),
            scientific(&self.im, 20),
            self.precision_bits()
        )
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.precision_bits().max(rhs.precision_bits());
        BigComplex {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.precision_bits().max(rhs.precision_bits());
        BigComplex {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.precision_bits().max(rhs.precision_bits());
        let wide = prec + GUARD_BITS;
        let rr = Float::with_val(wide, &self.re * &rhs.re);
        let ii = Float::with_val(wide, &self.im * &rhs.im);
        let ri = Float::with_val(wide, &self.re * &rhs.im);
        let ir = Float::with_val(wide, &self.im * &rhs.re);
        BigComplex {
            re: Float::with_val(prec, &rr - &ii),
            im: Float::with_val(prec, &ri + &ir),
        }
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let prec = self.precision_bits().max(rhs.precision_bits());
        let wide = rhs.round_to(prec + GUARD_BITS);
        (&self.round_to(prec + GUARD_BITS) * &wide.recip()).round_to(prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigReal, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn binary_ops_take_the_wider_precision() {
        let a = BigReal::with_val(64, 1);
        let b = BigReal::with_val(200, 3);
        assert_eq!((&a / &b).precision_bits(), 200);
        assert_eq!((&b - &a).precision_bits(), 200);
    }

    #[test]
    fn parse_decimal_literals() {
        let tenth = BigReal::parse("0.1", 200).unwrap();
        assert_eq!(tenth, BigReal::from_rational(&Rational::from((1, 10)), 200));
        assert_eq!(BigReal::parse("1e-25", 64).unwrap().to_f64(), 1e-25);
        assert!(BigReal::parse("half", 64).is_err());
        assert!(BigReal::parse("inf", 64).is_err());
    }

    #[test]
    fn principal_log_on_negative_axis_has_arg_pi() {
        let z = BigComplex::with_val(128, -2, 0);
        let l = z.ln();
        assert!(close(&l.re(), 2f64.ln(), 1e-15));
        assert!(close(&l.im(), std::f64::consts::PI, 1e-15));
        let zneg0 = BigComplex::with_val(128, -2, Float::with_val(128, -0.0));
        assert!(close(&zneg0.arg(), std::f64::consts::PI, 1e-15));
    }

    #[test]
    fn exp_inverts_ln() {
        let z = BigComplex::with_val(256, 0.3, -1.7);
        let back = z.ln().exp();
        assert!((&back - &z).abs() < 1e-70);
    }

    #[test]
    fn ln_1p_matches_ln_of_shifted_value() {
        let z = BigComplex::with_val(256, -0.25, 0.4);
        let direct = z.add_real(&BigReal::with_val(256, 1)).ln();
        assert!((&direct - &z.ln_1p()).abs() < 1e-70);
        let tiny = BigComplex::with_val(256, Float::with_val(256, 1e-30), Float::with_val(256, 1e-30));
        // ln(1+z) ~ z for tiny z: relative accuracy survives
        let l = tiny.ln_1p();
        assert!(((l.im().to_f64() - 1e-30) / 1e-30).abs() < 1e-12);
    }

    #[test]
    fn division_and_reciprocal() {
        let a = BigComplex::with_val(128, 1, 2);
        let b = BigComplex::with_val(128, 3, -4);
        let q = &a / &b;
        // (1+2i)/(3-4i) = (-5 + 10i)/25
        assert!(close(&q.re(), -0.2, 1e-30));
        assert!(close(&q.im(), 0.4, 1e-30));
    }

    #[test]
    fn mul_pow2_is_exact_scaling() {
        let x = BigReal::with_val(64, 3);
        assert_eq!(x.mul_pow2(-4), 0.1875);
        assert_eq!(x.mul_pow2(3), 24.0);
    }

    #[test]
    fn scientific_rendering_is_stable() {
        let x = BigReal::with_val(64, -1.5);
        assert_eq!(x.to_scientific(5), "-1.5000e0");
        assert_eq!(BigReal::zero(64).to_scientific(3), "0.00e0");
        assert_eq!(BigReal::zero(64).to_scientific(1), "0e0");
    }
}
