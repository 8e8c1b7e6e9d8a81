//! Partition-sum oracle for `a_j` and the partition counting function.
//!
//! `a_j = (-1)^j sum prod_l (1/(l+1))^{k_l} / k_l!`, summed over multiplicity
//! vectors `(k_1, ..., k_j)` with `sum_l l k_l = j`. The number of vectors is
//! the partition number `P(j)`, which grows like `exp(pi sqrt(2j/3))`, so this
//! route is only usable for moderate `j`. It shares no code with the
//! recursion in [`crate::exact`] and serves as its oracle.

use rug::{Integer, Rational};

use crate::bignum::{BigReal, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::check_precision;

/// Largest `j` accepted by [`a_via_partitions`]; `P(80)` is about 1.6e7 terms.
pub const PARTITION_SUM_CEILING: usize = 80;

/// Default precision for [`hardy_ramanujan`] when the caller has no preference.
pub const HR_DEFAULT_PRECISION: u32 = 128;

/// Multiplicities `(k_1, ..., k_j)` of the parts `1..=j` of a partition of `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionVector {
    multiplicities: Vec<u32>,
}

impl PartitionVector {
    /// `k_l` for `l` in `1..=j`.
    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn weight(&self) -> usize {
        self.multiplicities.len()
    }

    /// `sum_l l k_l`, which equals [`weight`](Self::weight) for every emitted
    /// vector.
    pub fn weighted_sum(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, &k)| (i + 1) * k as usize)
            .sum()
    }

    /// Number of parts, `sum_l k_l`.
    pub fn parts(&self) -> usize {
        self.multiplicities.iter().map(|&k| k as usize).sum()
    }
}

/// Iterator over all multiplicity vectors of weight `j`.
///
/// Vectors come out in ascending order comparing `k_j` first, then
/// `k_{j-1}`, down to `k_1`; for `j = 3` that is `(3,0,0), (1,1,0), (0,0,1)`.
#[derive(Clone, Debug)]
pub struct Partitions {
    current: Vec<u32>,
    started: bool,
    done: bool,
}

/// Every partition of `j` as a multiplicity vector, each exactly once.
pub fn enumerate_partitions(j: usize) -> Partitions {
    let mut current = vec![0u32; j];
    if j > 0 {
        current[0] = j as u32;
    }
    Partitions {
        current,
        started: false,
        done: false,
    }
}

impl Partitions {
    /// Step to the successor: bump the least significant free digit `k_l`
    /// (`l >= 2`) that still fits, clear the digits below it, and let `k_1`
    /// absorb the remaining weight.
    fn advance(&mut self) -> bool {
        let j = self.current.len();
        // weight held by parts of size >= l, for the l being considered
        let mut upper: usize = (2..=j).map(|l| l * self.current[l - 1] as usize).sum();
        for l in 2..=j {
            let held = l * self.current[l - 1] as usize;
            // upper includes part sizes >= l
            if upper + l <= j {
                self.current[l - 1] += 1;
                for m in 2..l {
                    self.current[m - 1] = 0;
                }
                self.current[0] = (j - upper - l) as u32;
                return true;
            }
            upper -= held;
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = PartitionVector;

    fn next(&mut self) -> Option<PartitionVector> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(PartitionVector {
            multiplicities: self.current.clone(),
        })
    }
}

/// `0!, 1!, ..., n!`.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    values: Vec<Integer>,
}

impl FactorialTable {
    pub fn new(n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        values.push(Integer::from(1));
        for k in 1..=n {
            let next = Integer::from(&values[k - 1] * k as u64);
            values.push(next);
        }
        FactorialTable { values }
    }

    pub fn get(&self, k: usize) -> &Integer {
        &self.values[k]
    }
}

/// `a_j` by direct summation over all partitions of `j`.
pub fn a_via_partitions(j: usize) -> Result<Rational> {
    if j > PARTITION_SUM_CEILING {
        return Err(Error::CostLimit {
            j,
            limit: PARTITION_SUM_CEILING,
        });
    }
    let factorials = FactorialTable::new(j);
    let mut sum = Rational::new();
    for vector in enumerate_partitions(j) {
        let mut denominator = Integer::from(1);
        for (i, &k) in vector.multiplicities().iter().enumerate() {
            if k > 0 {
                denominator *= Integer::from(Integer::u_pow_u(i as u32 + 2, k));
                denominator *= factorials.get(k as usize);
            }
        }
        sum += Rational::from((1, denominator));
    }
    if j % 2 == 1 {
        sum = -sum;
    }
    Ok(sum)
}

/// `P(0), ..., P(n)` by Euler's pentagonal-number recurrence.
pub fn partition_counts(n: usize) -> Vec<Integer> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(Integer::from(1));
    for i in 1..=n {
        let mut acc = Integer::new();
        for k in 1usize.. {
            let first = k * (3 * k - 1) / 2;
            if first > i {
                break;
            }
            let second = k * (3 * k + 1) / 2;
            let mut pair = Integer::from(&p[i - first]);
            if second <= i {
                pair += &p[i - second];
            }
            if k % 2 == 1 {
                acc += pair;
            } else {
                acc -= pair;
            }
        }
        p.push(acc);
    }
    p
}

/// The partition number `P(j)`.
pub fn partition_count(j: usize) -> Integer {
    partition_counts(j).pop().expect("counts include index j")
}

/// Hardy-Ramanujan asymptotic `exp(pi sqrt(2j/3)) / (4 j sqrt 3)`.
pub fn hardy_ramanujan(j: usize, precision_bits: u32) -> Result<BigReal> {
    check_precision(precision_bits)?;
    if j == 0 {
        return Err(Error::Domain("the Hardy-Ramanujan formula needs j >= 1".into()));
    }
    let wide = precision_bits + GUARD_BITS;
    let two_j_thirds = BigReal::from_rational(&Rational::from((2 * j as u64, 3)), wide);
    let numerator = (&BigReal::pi(wide) * &two_j_thirds.sqrt()).exp();
    let denominator = &BigReal::with_val(wide, 4 * j as u64) * &BigReal::with_val(wide, 3).sqrt();
    Ok((&numerator / &denominator).round_to(precision_bits))
}

/// `P(j) / HR(j)`, given the exact count.
pub fn hr_ratio(count: &Integer, j: usize, precision_bits: u32) -> Result<BigReal> {
    let hr = hardy_ramanujan(j, precision_bits)?;
    Ok(&BigReal::from_integer(count, precision_bits) / &hr)
}
