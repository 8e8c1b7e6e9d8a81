//! Taylor coefficients of `f(z) = (1+z)^(1/z)` from the Cauchy integral on a
//! circle `|z| = r < 1`, discretized by the trapezoidal rule:
//!
//! ```text
//! c_j ~ 1/(N r^j) sum_{k=0}^{N-1} f(r e^{i t_k}) e^{-i j t_k},  t_k = 2 pi k / N
//! ```
//!
//! The integrand is periodic and analytic, so the error decays geometrically
//! in `N` (aliasing from `c_{j+N} r^N`).

use rug::Rational;

use crate::bignum::{BigComplex, BigReal, GUARD_BITS, MIN_PRECISION};
use crate::error::{Error, Result};
use crate::exact::check_precision;
use crate::par;

/// Below this modulus `ln(1+z)/z` is summed as a power series.
pub const SMALL_Z_LOG2: i32 = -10;

pub const ADAPTIVE_START_NODES: usize = 32;
pub const ADAPTIVE_MAX_NODES: usize = 1 << 20;

/// A circle of radius `0 < r < 1` sampled at `N` equispaced nodes.
#[derive(Clone, Debug)]
pub struct ContourSpec {
    radius: BigReal,
    nodes: usize,
    precision_bits: u32,
}

impl ContourSpec {
    pub fn new(radius: BigReal, nodes: usize, precision_bits: u32) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::InvalidContour(format!(
                "radius must lie in (0, 1), got {}",
                radius.to_scientific(12)
            )));
        }
        if nodes < 4 || !nodes.is_multiple_of(2) {
            return Err(Error::InvalidContour(format!(
                "node count must be even and >= 4, got {nodes}"
            )));
        }
        check_precision(precision_bits)?;
        Ok(ContourSpec {
            radius,
            nodes,
            precision_bits,
        })
    }

    pub fn radius(&self) -> &BigReal {
        &self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }
}

/// Bits needed so that the `r^-j` factor leaves 64 good bits:
/// `ceil(j log2(1/r)) + 64`.
pub fn required_precision(j: usize, radius: &BigReal) -> u32 {
    let amplification = -(radius.ln().to_f64() / std::f64::consts::LN_2) * j as f64;
    amplification.max(0.0).ceil() as u32 + MIN_PRECISION
}

/// `f(z) = exp(ln(1+z)/z)` on the principal branch, with `f(0) = e`.
pub fn f_eval(z: &BigComplex, precision_bits: u32) -> Result<BigComplex> {
    check_precision(precision_bits)?;
    if z.is_real_at_most(-1) {
        return Err(Error::BranchCut);
    }
    let wide = precision_bits + GUARD_BITS;
    let z = z.round_to(wide.max(z.precision_bits()));
    let small = z.is_zero() || z.abs().binary_exponent().is_some_and(|e| e <= SMALL_Z_LOG2);
    let w = if small {
        log1p_over_z_series(&z, wide)
    } else {
        &z.ln_1p() / &z
    };
    Ok(w.exp().round_to(precision_bits))
}

/// `sum_{s>=0} (-z)^s / (s+1)`, stopped once a term drops below
/// `2^-(precision_bits + 16)`.
fn log1p_over_z_series(z: &BigComplex, precision_bits: u32) -> BigComplex {
    let neg_z = z.scale(&BigReal::with_val(precision_bits, -1));
    let cutoff = -(precision_bits as i32) - 16;
    let mut power = BigComplex::with_val(precision_bits, 1, 0);
    let mut sum = power.clone();
    for s in 1u64.. {
        power = &power * &neg_z;
        let term = power.scale(&BigReal::with_val(precision_bits, s + 1).recip());
        sum = &sum + &term;
        match term.abs().binary_exponent() {
            Some(e) if e >= cutoff => {}
            _ => break,
        }
    }
    sum
}

/// Trapezoid estimate of `c_j` together with the diagnostics of the node sum.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyEstimate {
    /// `Re(sum) / (N r^j)`.
    pub value: BigReal,
    /// `|Im(sum)| / N`; zero up to rounding since `f(conj z) = conj f(z)`.
    pub imag_residue: BigReal,
    pub nodes: usize,
}

/// `pi * num/den`, formed from the reduced fraction so equal angles from
/// different node counts round identically.
fn angle(num: usize, den: usize, pi: &BigReal) -> BigReal {
    let fraction = Rational::from((num as u64, den as u64));
    pi * &BigReal::from_rational(&fraction, pi.precision_bits())
}

/// `f(r e^{i t_k}) e^{-i j t_k}` for node `k` of `n`.
fn node_value(j: usize, k: usize, n: usize, radius: &BigReal, pi: &BigReal, wide: u32) -> Result<BigComplex> {
    let z = BigComplex::from_polar(radius, &angle(2 * k, n, pi));
    let fz = f_eval(&z, wide)?;
    let twist_index = ((j as u128 * k as u128) % n as u128) as usize;
    let twist = BigComplex::from_polar(&BigReal::with_val(wide, 1), &-angle(2 * twist_index, n, pi));
    Ok(&fz * &twist)
}

fn finish(j: usize, values: &[BigComplex], radius: &BigReal, precision_bits: u32) -> CauchyEstimate {
    let wide = values[0].precision_bits();
    let n = values.len();
    let mut sum = BigComplex::with_val(wide, 0, 0);
    for v in values {
        sum = &sum + v;
    }
    let n_real = BigReal::with_val(wide, n as u64);
    let scale = &n_real * &radius.round_to(wide).powi(j as i32);
    CauchyEstimate {
        value: (&sum.re() / &scale).round_to(precision_bits),
        imag_residue: (&sum.im().abs() / &n_real).round_to(precision_bits),
        nodes: n,
    }
}

fn check_amplification(j: usize, radius: &BigReal, precision_bits: u32) -> Result<()> {
    let required = required_precision(j, radius);
    if precision_bits < required {
        Err(Error::PrecisionInsufficient {
            required,
            given: precision_bits,
        })
    } else {
        Ok(())
    }
}

/// Trapezoid approximation of the Cauchy integral for `c_j`. Node values may
/// be computed in parallel; they are always summed in ascending `k`.
pub fn cauchy_coefficient(j: usize, spec: &ContourSpec) -> Result<CauchyEstimate> {
    check_amplification(j, &spec.radius, spec.precision_bits)?;
    let wide = spec.precision_bits + GUARD_BITS;
    let pi = BigReal::pi(wide);
    let radius = spec.radius.round_to(wide.max(spec.radius.precision_bits()));
    let n = spec.nodes;
    let values = par::try_map_range(0..n, |k| node_value(j, k, n, &radius, &pi, wide))?;
    Ok(finish(j, &values, &spec.radius, spec.precision_bits))
}

/// Result of [`adaptive_cauchy`].
#[derive(Clone, Debug)]
pub struct AdaptiveEstimate {
    pub estimate: CauchyEstimate,
    /// `|estimate(N) - estimate(N/2)|` at the accepted `N`.
    pub last_delta: BigReal,
}

impl AdaptiveEstimate {
    pub fn nodes(&self) -> usize {
        self.estimate.nodes
    }
}

/// Double `N` from 32 until successive estimates differ by less than `tol`.
///
/// Node values are reused across doublings; each estimate equals
/// [`cauchy_coefficient`] at the same node count bit for bit.
pub fn adaptive_cauchy(j: usize, radius: &BigReal, tol: &BigReal, precision_bits: u32) -> Result<AdaptiveEstimate> {
    adaptive_cauchy_capped(j, radius, tol, precision_bits, ADAPTIVE_MAX_NODES)
}

/// [`adaptive_cauchy`] with an explicit node cap.
pub fn adaptive_cauchy_capped(
    j: usize,
    radius: &BigReal,
    tol: &BigReal,
    precision_bits: u32,
    max_nodes: usize,
) -> Result<AdaptiveEstimate> {
    if tol.is_sign_negative() {
        return Err(Error::Domain("tolerance must be non-negative".into()));
    }
    let spec = ContourSpec::new(radius.clone(), ADAPTIVE_START_NODES, precision_bits)?;
    check_amplification(j, radius, precision_bits)?;
    let wide = precision_bits + GUARD_BITS;
    let pi = BigReal::pi(wide);
    let r_wide = spec.radius.round_to(wide.max(spec.radius.precision_bits()));

    let mut n = ADAPTIVE_START_NODES;
    let mut values = par::try_map_range(0..n, |k| node_value(j, k, n, &r_wide, &pi, wide))?;
    let mut previous = finish(j, &values, radius, precision_bits);
    let mut deltas = [f64::NAN, f64::NAN];
    while n < max_nodes {
        let doubled = 2 * n;
        let odd = par::try_map_range(0..n, |i| node_value(j, 2 * i + 1, doubled, &r_wide, &pi, wide))?;
        let mut merged = Vec::with_capacity(doubled);
        for (even, odd) in values.into_iter().zip(odd) {
            merged.push(even);
            merged.push(odd);
        }
        values = merged;
        n = doubled;
        let current = finish(j, &values, radius, precision_bits);
        let delta = (&current.value - &previous.value).abs();
        deltas = [deltas[1], delta.to_f64()];
        if delta < *tol {
            return Ok(AdaptiveEstimate {
                estimate: current,
                last_delta: delta,
            });
        }
        previous = current;
    }
    Err(Error::NonConvergence {
        nodes: n,
        last_deltas: deltas,
    })
}
