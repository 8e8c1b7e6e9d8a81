//! Exact rational coefficients `a_j = c_j / e`.
//!
//! The coefficients of `(1+z)^(1/z) = sum c_j z^j` obey
//! `(j+1) c_{j+1} = sum_{l=0}^{j} c_l d_{j-l}` with
//! `d_k = (-1)^(k+1) (k+1)/(k+2)`. The recursion is linear in the `c_l`, so
//! dividing by `e` gives the same recursion for `a_j` with seed `a_0 = 1`, and
//! every `a_j` is rational.
//!
//! Building the table row by row in canonical rationals costs a gcd on every
//! term. Instead the builder works over a fixed common denominator
//!
//! ```text
//! D_J = J! * prod_{p prime, p <= J+1} p^floor(J/(p-1))
//! ```
//!
//! which is divisible by the denominator of every `a_j`, `j <= J`. Each term of
//! the partition-sum form of `a_j`, multiplied by `j!`, is a set-partition
//! count times `prod_l (l!/(l+1))^{k_l}`, and `l!/(l+1)` only has a
//! denominator when `l+1` is prime (or `l+1 = 4`, contributing a 2). So the
//! scaled numerators `N_l = a_l D_J` are integers, and the only remaining
//! denominators in a row are the small `k+2` of the weights. Those are merged
//! with an lcm tree over aligned blocks of `k`, and the division by `(j+1)` is
//! checked to be exact on every row.

use std::borrow::Cow;

use rug::{Integer, Rational};

use crate::bignum::{BigReal, GUARD_BITS, MIN_PRECISION};
use crate::error::{Error, Result};
use crate::par;
use crate::series::compute_e;

/// Blocks with at least this many leaves split their two halves across
/// threads.
const PARALLEL_BLOCK_LEAVES: usize = 256;

/// Rows built between rescalings of the working numerators.
const DENOMINATOR_CHUNK: usize = 64;

fn rescale(values: &mut [Integer], factor: &Integer) {
    if values.len() >= 2 * PARALLEL_BLOCK_LEAVES {
        let (lo, hi) = values.split_at_mut(values.len() / 2);
        par::join(|| rescale(lo, factor), || rescale(hi, factor));
    } else {
        for v in values {
            *v *= factor;
        }
    }
}

/// The weight `d_j = (-1)^(j+1) (j+1)/(j+2)` in canonical form.
pub fn d_weight(j: usize) -> Rational {
    let magnitude = Rational::from((j as u64 + 1, j as u64 + 2));
    if j.is_multiple_of(2) {
        -magnitude
    } else {
        magnitude
    }
}

/// `D_J = J! * prod_{p <= J+1} p^floor(J/(p-1))`, a common denominator for
/// `a_0, ..., a_J`.
pub fn common_denominator(max_index: usize) -> Integer {
    let mut d = Integer::from(Integer::factorial(max_index as u32));
    for p in primes_up_to(max_index + 1) {
        let exponent = max_index / (p - 1);
        if exponent > 0 {
            d *= Integer::from(Integer::u_pow_u(p as u32, exponent as u32));
        }
    }
    d
}

fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    primes
}

/// The prefix `a_0, ..., a_J` of the rational coefficient sequence.
///
/// A finished table is immutable from the outside and safe to share across
/// threads; [`CoefficientTable::extend`] only appends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    entries: Vec<Rational>,
}

impl Default for CoefficientTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CoefficientTable {
    /// The table holding only `a_0 = 1`.
    pub fn new() -> Self {
        CoefficientTable {
            entries: vec![Rational::from(1)],
        }
    }

    pub fn with_max_index(max_index: usize) -> Self {
        let mut table = Self::new();
        table.extend(max_index);
        table
    }

    /// Rebuild a table from stored entries, checking `a_0 = 1` and that the
    /// entries satisfy the recursion.
    pub fn from_entries(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("a coefficient table needs at least a_0".into()));
        }
        let reference = Self::with_max_index(entries.len() - 1);
        if let Some(j) = (0..entries.len()).find(|&j| entries[j] != reference.entries[j]) {
            return Err(Error::Domain(format!("entry a_{j} does not satisfy the recursion")));
        }
        Ok(reference)
    }

    pub fn max_index(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> Result<&Rational> {
        self.entries.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            max: self.max_index(),
        })
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if needed > self.max_index() {
            Err(Error::TableTooShort {
                needed,
                available: self.max_index(),
            })
        } else {
            Ok(())
        }
    }

    /// Append entries up to `new_max`. Existing entries are untouched; a
    /// `new_max` at or below the current maximum is a no-op.
    pub fn extend(&mut self, new_max: usize) {
        let old_max = self.max_index();
        if new_max <= old_max {
            return;
        }
        self.entries.reserve(new_max - old_max);
        let tree = LcmTree::new(new_max);

        // Rows are built in chunks; within a chunk ending at index `end` the
        // numerators are scaled to D_end, so their size tracks the row index.
        let mut scaled: Vec<Integer> = Vec::with_capacity(new_max + 1);
        let mut denominator = Integer::from(1);
        let mut start = old_max;
        while start < new_max {
            let end = (start + DENOMINATOR_CHUNK).min(new_max);
            let next_denominator = common_denominator(end);
            if scaled.is_empty() {
                scaled.extend(self.entries.iter().map(|a| {
                    let (q, r) = Integer::from(&next_denominator).div_rem(Integer::from(a.denom()));
                    assert!(r == 0, "common denominator bound violated by an existing entry");
                    q * a.numer()
                }));
            } else {
                let lift = Integer::from(next_denominator.div_exact_ref(&denominator));
                rescale(&mut scaled, &lift);
            }
            denominator = next_denominator;

            for j in start..end {
                let (p, q) = tree.row_sum(&scaled, j);
                // p / q = (j+1) N_{j+1}
                let divisor = Integer::from(&*q * (j as u64 + 1));
                let (next, rem) = p.div_rem(divisor);
                assert!(rem == 0, "row {j}: scaled numerator is not an integer");
                self.entries
                    .push(Rational::from((Integer::from(&next), Integer::from(&denominator))));
                scaled.push(next);
            }
            start = end;
        }
    }

    /// `c_j = e * a_j` rounded to `precision_bits`, with `e` computed at
    /// `precision_bits + GUARD_BITS`.
    pub fn coefficient_c(&self, j: usize, precision_bits: u32) -> Result<BigReal> {
        check_precision(precision_bits)?;
        self.get(j)?;
        let e = compute_e(precision_bits + GUARD_BITS)?;
        self.coefficient_c_with_e(j, &e, precision_bits)
    }

    /// As [`coefficient_c`](Self::coefficient_c) with a caller-supplied `e`,
    /// which should carry at least `precision_bits + GUARD_BITS` bits.
    pub fn coefficient_c_with_e(&self, j: usize, e: &BigReal, precision_bits: u32) -> Result<BigReal> {
        let a = self.get(j)?;
        let wide = e.precision_bits().max(precision_bits + GUARD_BITS);
        let product = &BigReal::from_rational(a, wide) * e;
        Ok(product.round_to(precision_bits))
    }
}

/// Consume `table` and return it extended to `new_max`.
pub fn extend_table(mut table: CoefficientTable, new_max: usize) -> CoefficientTable {
    table.extend(new_max);
    table
}

pub(crate) fn check_precision(precision_bits: u32) -> Result<()> {
    if precision_bits < MIN_PRECISION {
        Err(Error::PrecisionInsufficient {
            required: MIN_PRECISION,
            given: precision_bits,
        })
    } else {
        Ok(())
    }
}

/// lcm of `k + 2` over aligned power-of-two blocks of `k`, with the cofactors
/// that lift each child's denominator to its parent's.
struct LcmTree {
    height: usize,
    /// For each aligned block of four `k`, the weight numerators of `d_k`
    /// lifted to the block's lcm, when they fit in an `i64`.
    quad_factors: Vec<Option<[i64; 4]>>,
    lcm: Vec<Vec<Integer>>,
    left_factor: Vec<Vec<Integer>>,
    right_factor: Vec<Vec<Integer>>,
}

impl LcmTree {
    /// Covers `k` in `0..max_terms`.
    fn new(max_terms: usize) -> Self {
        let width = max_terms.max(1).next_power_of_two();
        let height = width.trailing_zeros() as usize;
        let mut lcm = vec![(0..width).map(|k| Integer::from(k + 2)).collect::<Vec<_>>()];
        let mut left_factor = vec![Vec::new()];
        let mut right_factor = vec![Vec::new()];
        for t in 1..=height {
            let below = &lcm[t - 1];
            let mut level = Vec::with_capacity(below.len() / 2);
            let mut lf = Vec::with_capacity(below.len() / 2);
            let mut rf = Vec::with_capacity(below.len() / 2);
            for pair in below.chunks(2) {
                let q = Integer::from(pair[0].lcm_ref(&pair[1]));
                lf.push(Integer::from(q.div_exact_ref(&pair[0])));
                rf.push(Integer::from(q.div_exact_ref(&pair[1])));
                level.push(q);
            }
            lcm.push(level);
            left_factor.push(lf);
            right_factor.push(rf);
        }
        let quad_factors = if height >= 2 {
            lcm[2]
                .iter()
                .enumerate()
                .map(|(s, q)| {
                    let q = q.to_i64()?;
                    let mut factors = [0i64; 4];
                    for (i, f) in factors.iter_mut().enumerate() {
                        let k = 4 * s + i;
                        *f = (q / (k as i64 + 2)).checked_mul(Row::weight(k))?;
                    }
                    Some(factors)
                })
                .collect()
        } else {
            Vec::new()
        };
        LcmTree {
            height,
            quad_factors,
            lcm,
            left_factor,
            right_factor,
        }
    }

    /// `sum_{k=0}^{j} N_{j-k} d_k` as `p / q`.
    fn row_sum<'a>(&'a self, scaled: &[Integer], j: usize) -> (Integer, Cow<'a, Integer>) {
        let row = Row { tree: self, scaled, j };
        row.block(self.height, 0).expect("row has at least one term")
    }
}

struct Row<'a, 's> {
    tree: &'a LcmTree,
    scaled: &'s [Integer],
    j: usize,
}

impl<'a, 's> Row<'a, 's> {
    /// Signed numerator factor of `d_k`: `(-1)^(k+1) (k+1)`.
    fn weight(k: usize) -> i64 {
        let m = k as i64 + 1;
        if k.is_multiple_of(2) {
            -m
        } else {
            m
        }
    }

    fn term(&self, k: usize) -> &'s Integer {
        &self.scaled[self.j - k]
    }

    /// Sum over `k` in block `s` of level `t`, restricted to `k <= j`.
    fn block(&self, t: usize, s: usize) -> Option<(Integer, Cow<'a, Integer>)> {
        let lo = s << t;
        let terms = self.j + 1;
        if lo >= terms {
            return None;
        }
        if t == 0 {
            let p = Integer::from(self.term(lo) * Self::weight(lo));
            return Some((p, Cow::Borrowed(&self.tree.lcm[0][lo])));
        }
        let full = lo + (1 << t) <= terms;
        if full && t == 1 {
            // lcm(k+2, k+3) = (k+2)(k+3)
            let k = lo;
            let mut p = Integer::from(self.term(k) * (Self::weight(k) * (k as i64 + 3)));
            p += self.term(k + 1) * (Self::weight(k + 1) * (k as i64 + 2));
            return Some((p, Cow::Borrowed(&self.tree.lcm[1][s])));
        }
        if full && t == 2 {
            if let Some(factors) = self.tree.quad_factors[s] {
                let k = lo;
                let mut p = Integer::from(self.term(k) * factors[0]);
                for (i, f) in factors.iter().enumerate().skip(1) {
                    p += self.term(k + i) * *f;
                }
                return Some((p, Cow::Borrowed(&self.tree.lcm[2][s])));
            }
        }
        let (left, right) = if full && (1usize << t) >= PARALLEL_BLOCK_LEAVES {
            par::join(|| self.block(t - 1, 2 * s), || self.block(t - 1, 2 * s + 1))
        } else {
            (self.block(t - 1, 2 * s), self.block(t - 1, 2 * s + 1))
        };
        let (mut p_left, q_left) = left.expect("block start lies inside the row");
        let Some((p_right, q_right)) = right else {
            return Some((p_left, q_left));
        };
        if full {
            p_left *= &self.tree.left_factor[t][s];
            p_left += &p_right * &self.tree.right_factor[t][s];
            return Some((p_left, Cow::Borrowed(&self.tree.lcm[t][s])));
        }
        let q = Integer::from(q_left.lcm_ref(&q_right));
        p_left *= Integer::from(q.div_exact_ref(&q_left));
        p_left += p_right * Integer::from(q.div_exact_ref(&q_right));
        Some((p_left, Cow::Owned(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    /// Straight canonical-rational evaluation of the recursion.
    fn naive_table(max: usize) -> Vec<Rational> {
        let mut a = vec![Rational::from(1)];
        for j in 0..max {
            let mut s = Rational::new();
            for (l, al) in a.iter().enumerate() {
                s += Rational::from(al * &d_weight(j - l));
            }
            a.push(s / (j as u32 + 1));
        }
        a
    }

    #[test]
    fn d_weight_values() {
        assert_eq!(d_weight(0), q(-1, 2));
        assert_eq!(d_weight(1), q(2, 3));
        assert_eq!(d_weight(2), q(-3, 4));
    }

    #[test]
    fn small_table_values() {
        let t = CoefficientTable::with_max_index(4);
        assert_eq!(t.entries(), &[q(1, 1), q(-1, 2), q(11, 24), q(-7, 16), q(2447, 5760)]);
    }

    #[test]
    fn extend_to_zero_is_identity() {
        let t = extend_table(CoefficientTable::new(), 0);
        assert_eq!(t.max_index(), 0);
        assert_eq!(t.entries()[0], 1);
    }

    #[test]
    fn tree_builder_matches_naive_recursion() {
        let fast = CoefficientTable::with_max_index(70);
        assert_eq!(fast.entries(), naive_table(70).as_slice());
    }

    #[test]
    fn incremental_extension_matches_single_build() {
        let mut t = CoefficientTable::new();
        for step in [1, 2, 5, 17, 33, 64, 65, 100] {
            t.extend(step);
        }
        assert_eq!(t, CoefficientTable::with_max_index(100));
    }

    #[test]
    fn sequential_and_parallel_builds_agree() {
        let a = CoefficientTable::with_max_index(600);
        let b = par::sequential(|| CoefficientTable::with_max_index(600));
        assert_eq!(a, b);
    }

    #[test]
    fn denominators_divide_the_common_bound() {
        let t = CoefficientTable::with_max_index(120);
        for (j, a) in t.entries().iter().enumerate() {
            assert!(common_denominator(j).is_divisible(a.denom()), "j = {j}");
        }
    }

    #[test]
    fn common_denominator_small_cases() {
        assert_eq!(common_denominator(0), 1);
        // 1! * 2^1
        assert_eq!(common_denominator(1), 2);
        // 4! * 2^4 * 3^2 * 5^1 = 24 * 16 * 9 * 5
        assert_eq!(common_denominator(4), 17280);
    }

    #[test]
    fn coefficient_c_errors_past_the_table() {
        let t = CoefficientTable::with_max_index(3);
        assert_eq!(
            t.coefficient_c(4, 128),
            Err(Error::IndexOutOfRange { index: 4, max: 3 })
        );
        assert!(matches!(
            t.coefficient_c(1, 32),
            Err(Error::PrecisionInsufficient { .. })
        ));
    }

    #[test]
    fn coefficient_c_values() {
        let t = CoefficientTable::with_max_index(2);
        let c0 = t.coefficient_c(0, 128).unwrap();
        let c1 = t.coefficient_c(1, 128).unwrap();
        let c2 = t.coefficient_c(2, 128).unwrap();
        assert_eq!(c0.precision_bits(), 128);
        assert!((c0.to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!((c1.to_f64() + 1.359140914229522).abs() < 1e-15);
        assert!((c2.to_f64() - 1.245_879_171_377_062_4).abs() < 1e-15);
    }

    #[test]
    fn from_entries_validates() {
        let t = CoefficientTable::with_max_index(5);
        assert_eq!(CoefficientTable::from_entries(t.entries().to_vec()).unwrap(), t);
        let mut bad = t.entries().to_vec();
        bad[3] = q(1, 3);
        assert!(CoefficientTable::from_entries(bad).is_err());
    }
}
