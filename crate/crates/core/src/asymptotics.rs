//! Large-`j` behavior `c_j = (-1)^j (1 + 1/j) + O(ln j / j^2)`.
//!
//! The two leading terms are the residues at `z = 0` of
//! `1/(z^{j+1}(1+z))` and `-ln(1+z)/z^{j+1}`, namely `(-1)^j` and `(-1)^j/j`.
//! What is left over, `eta_j`, is computed exactly from the rational table and
//! its scaled size `|eta_j| j^2 / ln j` is what the sweeps track.

use rug::Rational;

use crate::bignum::{BigComplex, BigReal, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{check_precision, CoefficientTable};
use crate::par;
use crate::quadrature::f_eval;
use crate::series::compute_e;

/// `(-1)^j (1 + 1/j)`.
pub fn leading_estimate(j: usize) -> Result<Rational> {
    if j == 0 {
        return Err(Error::Domain("the leading estimate needs j >= 1".into()));
    }
    let value = Rational::from((j as u64 + 1, j as u64));
    Ok(if j % 2 == 1 { -value } else { value })
}

/// `eta_j = c_j - (-1)^j (1 + 1/j)` and its scaled size.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRecord {
    pub j: usize,
    pub c: BigReal,
    pub eta: BigReal,
    /// `|eta_j| j^2 / ln j`; absent at `j = 1` where `ln j = 0`.
    pub scaled: Option<BigReal>,
}

impl ResidualRecord {
    pub fn leading(&self) -> Rational {
        leading_estimate(self.j).expect("records start at j = 1")
    }
}

/// Residual for `j` with a precomputed `e` of at least
/// `precision_bits + GUARD_BITS` bits.
fn record_with_e(table: &CoefficientTable, j: usize, e: &BigReal, precision_bits: u32) -> Result<ResidualRecord> {
    let leading = leading_estimate(j)?;
    let wide = precision_bits + GUARD_BITS;
    let c_wide = table.coefficient_c_with_e(j, e, wide)?;
    let eta_wide = &c_wide - &BigReal::from_rational(&leading, wide);
    let scaled = if j >= 2 {
        let jj = BigReal::with_val(wide, j as u64);
        let value = &(&eta_wide.abs() * &jj.square()) / &jj.ln();
        Some(value.round_to(precision_bits))
    } else {
        None
    };
    Ok(ResidualRecord {
        j,
        c: c_wide.round_to(precision_bits),
        eta: eta_wide.round_to(precision_bits),
        scaled,
    })
}

pub fn eta(table: &CoefficientTable, j: usize, precision_bits: u32) -> Result<ResidualRecord> {
    check_precision(precision_bits)?;
    if j == 0 {
        return Err(Error::Domain("eta is defined for j >= 1".into()));
    }
    table.require(j)?;
    let e = compute_e(precision_bits + 2 * GUARD_BITS)?;
    record_with_e(table, j, &e, precision_bits)
}

/// Records for every `j` in `[j_min, j_max]` with summary statistics of the
/// scaled residual.
#[derive(Clone, Debug)]
pub struct ResidualSweep {
    pub records: Vec<ResidualRecord>,
}

impl ResidualSweep {
    fn scaled_values(&self) -> Vec<&BigReal> {
        self.records.iter().filter_map(|r| r.scaled.as_ref()).collect()
    }

    pub fn max_scaled(&self) -> Option<BigReal> {
        self.scaled_values().into_iter().cloned().reduce(BigReal::max)
    }

    /// Lower median of the scaled residuals.
    pub fn median_scaled(&self) -> Option<BigReal> {
        let mut values = self.scaled_values();
        if values.is_empty() {
            return None;
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("scaled residuals are finite"));
        Some(values[(values.len() - 1) / 2].clone())
    }

    /// Largest scaled residual over records with `lo <= j <= hi`.
    pub fn max_scaled_in(&self, lo: usize, hi: usize) -> Option<BigReal> {
        self.records
            .iter()
            .filter(|r| (lo..=hi).contains(&r.j))
            .filter_map(|r| r.scaled.clone())
            .reduce(BigReal::max)
    }
}

pub fn residual_sweep(
    table: &CoefficientTable,
    j_min: usize,
    j_max: usize,
    precision_bits: u32,
) -> Result<ResidualSweep> {
    check_precision(precision_bits)?;
    if j_min < 2 || j_min > j_max {
        return Err(Error::Domain(format!(
            "sweep range must satisfy 2 <= j_min <= j_max (got [{j_min}, {j_max}])"
        )));
    }
    table.require(j_max)?;
    let e = compute_e(precision_bits + 2 * GUARD_BITS)?;
    let records = par::try_map_range(j_min..j_max + 1, |j| record_with_e(table, j, &e, precision_bits))?;
    Ok(ResidualSweep { records })
}

/// `R(z) = f(z) - 1/(1+z) + ln(1+z)`, the part of `f` left after removing its
/// two most singular terms at `z = -1`.
pub fn r_function(z: &BigComplex, precision_bits: u32) -> Result<BigComplex> {
    check_precision(precision_bits)?;
    if z.is_real_at_most(-1) {
        return Err(Error::BranchCut);
    }
    // f and 1/(1+z) both grow like 1/|1+z| and cancel; carry those bits too.
    let one = BigReal::with_val(z.precision_bits().max(precision_bits), 1);
    let shifted = z.add_real(&one);
    let lost = shifted.abs().binary_exponent().map_or(0, |e| (-e).max(0) as u32);
    let wide = precision_bits + GUARD_BITS + lost;
    let z = z.round_to(wide.max(z.precision_bits()));
    let shifted = z.add_real(&BigReal::with_val(wide, 1));
    let f = f_eval(&z, wide)?;
    let r = &(&f - &shifted.recip()) + &z.ln_1p();
    Ok(r.round_to(precision_bits))
}

/// `(ln^2(1+z)/2 - ln(1+z)) (1+z)`, the leading behavior of `R` at `z = -1`.
pub fn r_leading(z: &BigComplex, precision_bits: u32) -> Result<BigComplex> {
    check_precision(precision_bits)?;
    if z.is_real_at_most(-1) {
        return Err(Error::BranchCut);
    }
    let wide = precision_bits + GUARD_BITS;
    let z = z.round_to(wide.max(z.precision_bits()));
    let shifted = z.add_real(&BigReal::with_val(wide, 1));
    let log = z.ln_1p();
    let half_sq = (&log * &log).scale(&BigReal::with_val(wide, 0.5));
    Ok((&(&half_sq - &log) * &shifted).round_to(precision_bits))
}
