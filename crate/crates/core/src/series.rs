//! Direct and series evaluation of `g(x) = (1 + 1/x)^x`, and the e estimator
//! `e = g(x) / sum_j a_j x^-j`.

use rug::{Integer, Rational};

use crate::bignum::{BigReal, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{check_precision, CoefficientTable};

/// Coefficients beyond the summed prefix that must also satisfy `|a_j| <= 1`
/// before the tail model is trusted.
pub const PREFIX_MARGIN: usize = 8;

/// `e = sum_{k=0}^{K} 1/k!` with `K` chosen so the remainder, which is below
/// `2/(K+1)!`, is under `2^-(precision_bits + 8)`. The partial sum is formed
/// exactly by binary splitting and rounded once.
pub fn compute_e(precision_bits: u32) -> Result<BigReal> {
    check_precision(precision_bits)?;
    let terms = factorial_series_terms(precision_bits);
    let (p, q) = split_factorial_series(0, terms);
    let sum = Rational::from((p + &q, q));
    Ok(BigReal::from_rational(&sum, precision_bits))
}

/// Smallest `K` with `log2((K+1)!) > precision_bits + 9`.
fn factorial_series_terms(precision_bits: u32) -> u64 {
    // f64 log sums carry ~1e-12 relative error; one extra bit covers it.
    let target = precision_bits as f64 + 10.0;
    let mut log2_fact = 0.0f64;
    let mut k = 0u64;
    loop {
        log2_fact += ((k + 1) as f64).log2();
        if log2_fact > target {
            return k;
        }
        k += 1;
    }
}

/// `sum_{k=a+1}^{b} 1/((a+1)(a+2)...k) = p/q` with `q = (a+1)...b`.
fn split_factorial_series(a: u64, b: u64) -> (Integer, Integer) {
    if b <= a {
        return (Integer::new(), Integer::from(1));
    }
    if b - a == 1 {
        return (Integer::from(1), Integer::from(b));
    }
    let m = a + (b - a) / 2;
    let (p_left, q_left) = split_factorial_series(a, m);
    let (p_right, q_right) = split_factorial_series(m, b);
    (p_left * &q_right + p_right, q_left * q_right)
}

fn check_x(x: &BigReal) -> Result<()> {
    if *x > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must exceed 1 (got {})", x.to_scientific(12))))
    }
}

/// `g(x) = exp(x ln(1 + 1/x))` for `x > 1`.
pub fn g_direct(x: &BigReal, precision_bits: u32) -> Result<BigReal> {
    check_precision(precision_bits)?;
    check_x(x)?;
    let wide = precision_bits + GUARD_BITS;
    let x = x.round_to(wide.max(x.precision_bits()));
    let log = x.recip().ln_1p();
    Ok((&x * &log).exp().round_to(precision_bits))
}

/// `e * sum_{j=0}^{J} a_j x^-j`, the truncated expansion of `g(x)`.
pub fn g_partial_sum(table: &CoefficientTable, x: &BigReal, terms: usize, precision_bits: u32) -> Result<BigReal> {
    check_precision(precision_bits)?;
    check_x(x)?;
    table.require(terms)?;
    let wide = precision_bits + GUARD_BITS;
    let y = x.round_to(wide.max(x.precision_bits())).recip();
    let entries = table.entries();
    let mut acc = BigReal::from_rational(&entries[terms], wide);
    for a in entries[..terms].iter().rev() {
        acc = &(&acc * &y) + &BigReal::from_rational(a, wide);
    }
    let e = compute_e(wide)?;
    Ok((&acc * &e).round_to(precision_bits))
}

/// Result of [`estimate_e`].
#[derive(Clone, Debug)]
pub struct EEstimate {
    pub value: BigReal,
    pub x_used: Integer,
    pub terms_used: usize,
    /// Absolute error bound: the modeled series tail plus a rounding allowance.
    /// The tail model rests on `|a_j| <= 1`, checked on a finite prefix only,
    /// so the bound is empirically validated rather than proven.
    pub tail_bound: BigReal,
}

impl EEstimate {
    /// `floor(-log10(tail_bound / |value|))`.
    pub fn claimed_digits(&self) -> u64 {
        let rel = &self.tail_bound / &self.value.abs();
        let digits = -rel.ln().to_f64() / std::f64::consts::LN_10;
        if digits.is_finite() && digits > 0.0 {
            digits.floor() as u64
        } else {
            0
        }
    }
}

/// Estimate `e` as `g(x) / sum_{j=0}^{J} a_j x^-j` with `x` a power of two, so
/// every `x^-j` is exact.
///
/// The table must reach `J + PREFIX_MARGIN`; every `|a_j|` for
/// `1 <= j <= J + PREFIX_MARGIN` must be at most one.
pub fn estimate_e(table: &CoefficientTable, x: &Integer, terms: usize, precision_bits: u32) -> Result<EEstimate> {
    check_precision(precision_bits)?;
    if *x < 2 || !x.is_power_of_two() {
        return Err(Error::Domain(format!("x must be a power of two >= 2 (got {x})")));
    }
    table.require(terms + PREFIX_MARGIN)?;
    let entries = table.entries();
    let mut prefix_max = Rational::from(1);
    for (j, a) in entries.iter().enumerate().take(terms + PREFIX_MARGIN + 1).skip(1) {
        let magnitude = Rational::from(a.abs_ref());
        if magnitude > 1 {
            return Err(Error::PrefixBound { index: j });
        }
        if magnitude > prefix_max {
            prefix_max = magnitude;
        }
    }

    let shift = x.significant_bits() - 1;
    let mut series = Rational::from(&entries[terms]);
    for a in entries[..terms].iter().rev() {
        series >>= shift;
        series += a;
    }

    let wide = precision_bits + GUARD_BITS;
    let x_real = BigReal::from_integer(x, wide.max(shift + 1));
    let g = g_direct(&x_real, wide)?;
    let value = (&g / &BigReal::from_rational(&series, wide)).round_to(precision_bits);

    // M x^-(J+1) / (1 - 1/x) |value|
    let mut tail = prefix_max;
    tail >>= shift * (terms as u32 + 1);
    let one_minus = Rational::from(1) - Rational::from((1, Integer::from(x)));
    tail /= one_minus;
    let magnitude = value.abs();
    let model = &BigReal::from_rational(&tail, wide) * &magnitude;
    let rounding = magnitude.mul_pow2(2 - precision_bits as i32);
    let tail_bound = (&model + &rounding).round_to(precision_bits);

    Ok(EEstimate {
        value,
        x_used: Integer::from(x),
        terms_used: terms,
        tail_bound,
    })
}

/// Choice of `x = 2^x_log2`, `J`, and working precision for a digit target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EPlan {
    pub x_log2: u32,
    pub terms: usize,
    pub precision_bits: u32,
}

impl EPlan {
    /// A plan whose modeled tail and rounding both stay below `10^-(digits+1)`
    /// relative to `e`.
    pub fn for_digits(digits: u32) -> Self {
        let target_bits = Self::target_bits(digits);
        let precision_bits = (target_bits + 16).max(crate::bignum::MIN_PRECISION);
        let x_log2 = (target_bits / 64).max(16);
        let terms = Self::terms_for(x_log2, target_bits);
        EPlan {
            x_log2,
            terms,
            precision_bits,
        }
    }

    /// Bits of relative accuracy aimed for when `digits` decimals are wanted.
    pub fn target_bits(digits: u32) -> u32 {
        ((digits as f64 + 1.0) * std::f64::consts::LOG2_10).ceil() as u32 + 2
    }

    /// Smallest `J` with `2^-(x_log2 (J+1)) / (1 - 2^-x_log2) < 2^-target_bits`.
    pub fn terms_for(x_log2: u32, target_bits: u32) -> usize {
        // 1/(1 - 2^-m) < 2 for m >= 1, hence the extra bit.
        let needed = target_bits as usize + 1;
        needed.div_ceil(x_log2 as usize).saturating_sub(1)
    }

    pub fn x(&self) -> Integer {
        Integer::from(1) << self.x_log2
    }
}
