//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gseries::asymptotics::residual_sweep;
use gseries::partition::{a_via_partitions, enumerate_partitions, hr_ratio, partition_counts};
use gseries::quadrature::adaptive_cauchy;
use gseries::series::{compute_e, estimate_e, g_partial_sum};
use gseries::{BigReal, CoefficientTable, Integer, Rational};

const TABLE_MAX: usize = 5000;

const ORACLE_MAX: usize = 35;
const CONVERGENCE_X: u32 = 2;
const CONVERGENCE_TOL: f64 = 1e-11;
const CONVERGENCE_J: usize = 40;
const RATIO_RANGE: (f64, f64) = (0.4, 0.6);
const RATIO_SPAN: (usize, usize) = (20, 60);
const SERIES_PRECISION: u32 = 256;
const SWEEP_PRECISION: u32 = 128;
const SCALED_GROWTH_LIMIT: f64 = 1.5;
const ENVELOPE_CONSTANT: f64 = 10.0;
const LIMIT_TOL: f64 = 3e-4;
const QUAD_PRECISION: u32 = 320;
const QUAD_TOL: f64 = 1e-25;
const QUAD_AGREEMENT: f64 = 1e-20;
const QUAD_MAX_J: usize = 50;
const RADIUS_AGREEMENT: f64 = 1e-18;
const RADIUS_MAX_J: usize = 30;
const E_X_LOG2: u32 = 16;
const E_TERMS: usize = 16;
const E_PRECISION: u32 = 512;
const E_MIN_DIGITS: f64 = 50.0;
const COUNT_MAX: usize = 40;
const HR_SAMPLES: [usize; 3] = [50, 500, 5000];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn real(value: f64, precision_bits: u32) -> BigReal {
    BigReal::with_val(precision_bits, value)
}

fn oracle_equivalence(table: &CoefficientTable) -> Outcome {
    for j in 0..=ORACLE_MAX {
        let oracle = a_via_partitions(j).map_err(|e| e.to_string())?;
        if &oracle != table.get(j).unwrap() {
            return Err(format!(
                "a_{j} differs: recursion {} vs partitions {oracle}",
                table.get(j).unwrap()
            ));
        }
    }
    Ok(format!("a_j equal for 0 <= j <= {ORACLE_MAX}"))
}

fn sign_alternation(table: &CoefficientTable) -> Outcome {
    for (j, a) in table.entries().iter().enumerate() {
        let expected = if j % 2 == 0 { 1 } else { -1 };
        if a.cmp0() as i32 != expected {
            return Err(format!("sign of a_{j} is wrong"));
        }
    }
    Ok(format!("sign(a_j) = (-1)^j for 0 <= j <= {}", table.max_index()))
}

fn convergence(table: &CoefficientTable) -> Outcome {
    let x = BigReal::with_val(SERIES_PRECISION, CONVERGENCE_X);
    let target = BigReal::from_rational(&Rational::from((9, 4)), SERIES_PRECISION);
    let error = |terms: usize| -> Result<BigReal, String> {
        let s = g_partial_sum(table, &x, terms, SERIES_PRECISION).map_err(|e| e.to_string())?;
        Ok((&s - &target).abs())
    };
    let at_j = error(CONVERGENCE_J)?.to_f64();
    if at_j > CONVERGENCE_TOL {
        return Err(format!("|S_{CONVERGENCE_J}(2) - 9/4| = {at_j:e}"));
    }
    let errors: Vec<f64> = (RATIO_SPAN.0..=RATIO_SPAN.1 + 1)
        .map(|j| error(j).map(|e| e.to_f64()))
        .collect::<Result<_, _>>()?;
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    check(
        lo >= RATIO_RANGE.0 && hi <= RATIO_RANGE.1,
        format!(
            "error at J={CONVERGENCE_J} is {at_j:.3e}; successive ratios over J in [{}, {}] lie in [{lo:.4}, {hi:.4}]",
            RATIO_SPAN.0, RATIO_SPAN.1
        ),
    )
}

fn asymptotic_law(table: &CoefficientTable) -> Outcome {
    let sweep = residual_sweep(table, 10, TABLE_MAX, SWEEP_PRECISION).map_err(|e| e.to_string())?;
    let early = sweep.max_scaled_in(10, 1000).unwrap().to_f64();
    let late = sweep.max_scaled_in(1000, TABLE_MAX).unwrap().to_f64();
    if late > SCALED_GROWTH_LIMIT * early {
        return Err(format!(
            "max scaled residual {late:.4} on [1000, 5000] vs {early:.4} on [10, 1000]"
        ));
    }
    let mut worst = 0.0f64;
    for record in sweep.records.iter().filter(|r| r.j >= 1000) {
        let j = record.j as f64;
        let one_plus = real(1.0 + 1.0 / j, SWEEP_PRECISION);
        let deviation = (&record.c.abs() - &one_plus).abs().to_f64();
        let envelope = ENVELOPE_CONSTANT * j.ln() / (j * j);
        if deviation > envelope {
            return Err(format!(
                "||c_{}| - 1 - 1/j| = {deviation:e} exceeds {envelope:e}",
                record.j
            ));
        }
        worst = worst.max(deviation / envelope);
    }
    Ok(format!(
        "max scaled residual {late:.4} on [1000, 5000] vs {early:.4} on [10, 1000]; worst envelope use {worst:.4}"
    ))
}

fn limit_one(table: &CoefficientTable) -> Outcome {
    let c = table
        .coefficient_c(TABLE_MAX, SWEEP_PRECISION)
        .map_err(|e| e.to_string())?;
    let deviation = (&c.abs() - &real(1.0, SWEEP_PRECISION)).abs().to_f64();
    check(
        deviation <= LIMIT_TOL,
        format!("||c_{TABLE_MAX}| - 1| = {deviation:.6e}"),
    )
}

fn quadrature_agreement(table: &CoefficientTable) -> Outcome {
    let tol = real(QUAD_TOL, QUAD_PRECISION);
    let e = compute_e(QUAD_PRECISION + 64).map_err(|e| e.to_string())?;
    let radius = |num: u64, den: u64| BigReal::from_rational(&Rational::from((num, den)), QUAD_PRECISION);
    let half = radius(1, 2);
    let mut worst = 0.0f64;
    for j in 0..=QUAD_MAX_J {
        let est = adaptive_cauchy(j, &half, &tol, QUAD_PRECISION).map_err(|e| e.to_string())?;
        let exact = table.coefficient_c_with_e(j, &e, QUAD_PRECISION).unwrap();
        let diff = (&est.estimate.value - &exact).abs().to_f64();
        if diff > QUAD_AGREEMENT {
            return Err(format!("j={j}: |quadrature - e a_j| = {diff:e}"));
        }
        worst = worst.max(diff);
    }
    let (inner, outer) = (radius(2, 5), radius(3, 5));
    let mut worst_radius = 0.0f64;
    for j in 0..=RADIUS_MAX_J {
        let a = adaptive_cauchy(j, &inner, &tol, QUAD_PRECISION).map_err(|e| e.to_string())?;
        let b = adaptive_cauchy(j, &outer, &tol, QUAD_PRECISION).map_err(|e| e.to_string())?;
        let diff = (&a.estimate.value - &b.estimate.value).abs().to_f64();
        if diff > RADIUS_AGREEMENT {
            return Err(format!("j={j}: r=0.4 and r=0.6 differ by {diff:e}"));
        }
        worst_radius = worst_radius.max(diff);
    }
    Ok(format!(
        "max error {worst:.3e} for j <= {QUAD_MAX_J}; max radius spread {worst_radius:.3e} for j <= {RADIUS_MAX_J}"
    ))
}

fn e_digits(table: &CoefficientTable) -> Outcome {
    let x = Integer::from(1) << E_X_LOG2;
    let est = estimate_e(table, &x, E_TERMS, E_PRECISION).map_err(|e| e.to_string())?;
    let oracle = compute_e(E_PRECISION + 64).map_err(|e| e.to_string())?;
    let error = (&est.value - &oracle).abs();
    let digits = if error.is_zero() {
        f64::INFINITY
    } else {
        -(&error / &oracle).ln().to_f64() / std::f64::consts::LN_10
    };
    let within = error.as_float() <= est.tail_bound.as_float();
    check(
        digits >= E_MIN_DIGITS && within,
        format!(
            "{digits:.1} digits agree; error {} vs tail bound {} ({} claimed digits)",
            error.to_scientific(4),
            est.tail_bound.to_scientific(4),
            est.claimed_digits()
        ),
    )
}

fn partition_growth() -> Outcome {
    let counts = partition_counts(*HR_SAMPLES.iter().max().unwrap());
    for (j, count) in counts.iter().enumerate().take(COUNT_MAX + 1) {
        let enumerated = enumerate_partitions(j).count();
        if *count != enumerated {
            return Err(format!("P({j}) = {count} but enumeration yields {enumerated}"));
        }
    }
    let gaps: Vec<f64> = HR_SAMPLES
        .iter()
        .map(|&j| {
            let ratio = hr_ratio(&counts[j], j, 128).map_err(|e| e.to_string())?;
            Ok((&ratio - &real(1.0, 128)).abs().to_f64())
        })
        .collect::<Result<_, String>>()?;
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.4e}")).collect();
    check(
        gaps.windows(2).all(|w| w[1] < w[0]),
        format!(
            "counts match enumeration for j <= {COUNT_MAX}; |P/HR - 1| at {HR_SAMPLES:?} = [{}]",
            shown.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let table = CoefficientTable::with_max_index(TABLE_MAX);
    println!("table built to j = {TABLE_MAX} in {:.1?}", start.elapsed());

    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("1 recursion equals partition sum", &|| oracle_equivalence(&table)),
        ("2 sign alternation", &|| sign_alternation(&table)),
        ("3 convergence at x = 2", &|| convergence(&table)),
        ("4 asymptotic residual law", &|| asymptotic_law(&table)),
        ("5 |c_j| tends to 1", &|| limit_one(&table)),
        ("6 quadrature agreement", &|| quadrature_agreement(&table)),
        ("7 digits of e", &|| e_digits(&table)),
        ("8 partition growth", &partition_growth),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{elapsed:.1?}]"),
            Err(detail) => {
                println!("FAIL  {name}: {detail} [{elapsed:.1?}]");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
