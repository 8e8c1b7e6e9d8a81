use gseries::series::{g_direct, g_partial_sum};
use gseries::{BigReal, CoefficientTable};

const PRECISION: u32 = 384;

/// Truncation errors of the partial sums shrink by a factor near `1/x` per term.
#[test]
fn error_ratio_tracks_one_over_x() {
    let table = CoefficientTable::with_max_index(61);
    for x in [2u32, 3, 10] {
        let xr = BigReal::with_val(PRECISION, x);
        let exact = g_direct(&xr, PRECISION).unwrap();
        let errors: Vec<f64> = (10..=61)
            .map(|j| {
                let s = g_partial_sum(&table, &xr, j, PRECISION).unwrap();
                (&s - &exact).abs().to_f64()
            })
            .collect();
        for (offset, pair) in errors.windows(2).enumerate() {
            let ratio = pair[1] / pair[0];
            assert!(
                (ratio - 1.0 / x as f64).abs() <= 0.15,
                "x = {x}, J = {}: ratio {ratio}",
                offset + 10
            );
        }
    }
}

#[test]
fn partial_sums_alternate_around_the_limit() {
    let table = CoefficientTable::with_max_index(30);
    let x = BigReal::with_val(PRECISION, 5);
    let exact = g_direct(&x, PRECISION).unwrap();
    for j in 1..30 {
        let s = g_partial_sum(&table, &x, j, PRECISION).unwrap();
        let above = !(&s - &exact).is_sign_negative();
        assert_eq!(above, j % 2 == 0, "J = {j}");
    }
}
