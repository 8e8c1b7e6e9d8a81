use std::io;

use gseries::asymptotics::{eta, residual_sweep, ResidualRecord};
use gseries::bignum::{decimal_digits_for_bits, GUARD_BITS, MIN_PRECISION};
use gseries::export::{table_to_json, TABLE_CSV_HEADER};
use gseries::partition::{
    a_via_partitions, hardy_ramanujan, hr_ratio, partition_counts, HR_DEFAULT_PRECISION, PARTITION_SUM_CEILING,
};
use gseries::quadrature::{adaptive_cauchy, cauchy_coefficient, ContourSpec};
use gseries::series::{compute_e, estimate_e, EPlan, PREFIX_MARGIN};
use gseries::{BigReal, CoefficientTable, Error, Integer};

use crate::report::{emit, Cell, Format, Report};

/// A command failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::PrefixBound { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

enum Body {
    Report(Report),
    Raw(String),
}

pub struct Output {
    body: Body,
    pub passed: bool,
}

impl Output {
    fn report(report: Report) -> Self {
        Output {
            body: Body::Report(report),
            passed: true,
        }
    }

    pub fn write(&self, format: Format) -> io::Result<()> {
        match &self.body {
            Body::Report(r) => emit(r, format),
            Body::Raw(text) => {
                use std::io::Write;
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()
            }
        }
    }
}

type Outcome = Result<Output, Failure>;

fn sci(value: &BigReal, precision_bits: u32) -> Cell {
    value.to_scientific(decimal_digits_for_bits(precision_bits)).into()
}

fn check_precision(precision_bits: u32) -> Result<(), Failure> {
    if precision_bits < MIN_PRECISION {
        Err(usage(format!("--precision-bits must be at least {MIN_PRECISION}")))
    } else {
        Ok(())
    }
}

pub fn coeffs(jmax: usize, precision_bits: u32, format: Format) -> Outcome {
    check_precision(precision_bits)?;
    let table = CoefficientTable::with_max_index(jmax);
    if format == Format::Json {
        return Ok(Output {
            body: Body::Raw(table_to_json(&table) + "\n"),
            passed: true,
        });
    }
    let e = compute_e(precision_bits + GUARD_BITS)?;
    let mut report = Report::table(&TABLE_CSV_HEADER);
    for (j, a) in table.entries().iter().enumerate() {
        let c = table.coefficient_c_with_e(j, &e, precision_bits)?;
        report.push(vec![
            j.into(),
            a.numer().to_string().into(),
            a.denom().to_string().into(),
            sci(&c, precision_bits),
        ]);
    }
    Ok(Output::report(report))
}

pub fn verify(jmax: usize) -> Outcome {
    if jmax > PARTITION_SUM_CEILING {
        return Err(usage(format!(
            "--jmax must be at most {PARTITION_SUM_CEILING} for the partition sum"
        )));
    }
    let table = CoefficientTable::with_max_index(jmax);
    let mut report = Report::table(&["j", "recursion", "partition_sum", "equal"]);
    let mut passed = true;
    for (j, a) in table.entries().iter().enumerate() {
        let oracle = a_via_partitions(j)?;
        let equal = &oracle == a;
        passed &= equal;
        report.push(vec![
            j.into(),
            a.to_string().into(),
            oracle.to_string().into(),
            equal.into(),
        ]);
    }
    Ok(Output {
        body: Body::Report(report),
        passed,
    })
}

pub fn asymptotic(jmin: usize, jmax: usize, precision_bits: u32) -> Outcome {
    check_precision(precision_bits)?;
    if jmin < 1 || jmin > jmax {
        return Err(usage(format!("need 1 <= --jmin <= --jmax (got {jmin}, {jmax})")));
    }
    let table = CoefficientTable::with_max_index(jmax);
    let mut records: Vec<ResidualRecord> = Vec::new();
    if jmin == 1 {
        records.push(eta(&table, 1, precision_bits)?);
    }
    if jmax >= 2 {
        records.extend(residual_sweep(&table, jmin.max(2), jmax, precision_bits)?.records);
    }
    let mut report = Report::table(&["j", "c_j", "leading", "eta", "scaled"]);
    for r in &records {
        let leading = BigReal::from_rational(&r.leading(), precision_bits);
        let scaled = r
            .scaled
            .as_ref()
            .map_or(Cell::Text(String::new()), |s| sci(s, precision_bits));
        report.push(vec![
            r.j.into(),
            sci(&r.c, precision_bits),
            sci(&leading, precision_bits),
            sci(&r.eta, precision_bits),
            scaled,
        ]);
    }
    Ok(Output::report(report))
}

pub fn quad(j: usize, radius: &str, nodes: Option<usize>, tol: Option<&str>, precision_bits: u32) -> Outcome {
    check_precision(precision_bits)?;
    let radius = BigReal::parse(radius, precision_bits).map_err(|e| usage(e.to_string()))?;
    let (value, used_nodes) = match (nodes, tol) {
        (Some(n), None) => {
            let spec = ContourSpec::new(radius, n, precision_bits)?;
            let est = cauchy_coefficient(j, &spec)?;
            (est.value, est.nodes)
        }
        (None, Some(t)) => {
            let tol = BigReal::parse(t, precision_bits).map_err(|e| usage(e.to_string()))?;
            let est = adaptive_cauchy(j, &radius, &tol, precision_bits)?;
            let nodes = est.nodes();
            (est.estimate.value, nodes)
        }
        _ => return Err(usage("exactly one of --nodes and --tol is required")),
    };
    let table = CoefficientTable::with_max_index(j);
    let exact = table.coefficient_c(j, precision_bits)?;
    let error = (&value - &exact).abs();
    let mut report = Report::table(&["j", "estimate", "exact", "abs_error", "N"]);
    report.push(vec![
        j.into(),
        sci(&value, precision_bits),
        sci(&exact, precision_bits),
        error.to_scientific(6).into(),
        used_nodes.into(),
    ]);
    Ok(Output::report(report))
}

pub fn partition(jmax: usize) -> Outcome {
    if jmax < 1 {
        return Err(usage("--jmax must be at least 1"));
    }
    let counts = partition_counts(jmax);
    let prec = HR_DEFAULT_PRECISION;
    let mut report = Report::table(&["j", "P_exact", "HR_approx", "ratio"]);
    for (j, count) in counts.iter().enumerate().skip(1) {
        let hr = hardy_ramanujan(j, prec)?;
        let ratio = hr_ratio(count, j, prec)?;
        report.push(vec![
            j.into(),
            count.to_string().into(),
            sci(&hr, prec),
            sci(&ratio, prec),
        ]);
    }
    Ok(Output::report(report))
}

pub fn e_digits(digits: u32, x: Option<&str>, terms: Option<usize>, check: bool) -> Outcome {
    if digits == 0 {
        return Err(usage("--digits must be at least 1"));
    }
    let plan = EPlan::for_digits(digits);
    let (x, x_log2) = match x {
        None => (plan.x(), plan.x_log2),
        Some(text) => {
            let x: Integer = text
                .parse()
                .map_err(|_| usage(format!("--x must be an integer power of two (got `{text}`)")))?;
            if x < 2 || !x.is_power_of_two() {
                return Err(usage(format!("--x must be a power of two >= 2 (got {x})")));
            }
            let bits = x.significant_bits() - 1;
            (x, bits)
        }
    };
    let terms = terms.unwrap_or_else(|| EPlan::terms_for(x_log2, EPlan::target_bits(digits)));
    let precision_bits = plan.precision_bits;
    let table = CoefficientTable::with_max_index(terms + PREFIX_MARGIN);
    let estimate = estimate_e(&table, &x, terms, precision_bits)?;
    let claimed = estimate.claimed_digits();
    if claimed < digits as u64 {
        eprintln!("warning: the tail bound supports only {claimed} of the {digits} requested digits");
    }

    let mut fields: Vec<(&'static str, Cell)> = vec![
        ("value", estimate.value.to_scientific(digits as usize + 1).into()),
        ("x", x.to_string().into()),
        ("terms", terms.into()),
        ("precision_bits", (precision_bits as usize).into()),
        ("claimed_digits", (claimed as usize).into()),
        ("tail_bound", estimate.tail_bound.to_scientific(6).into()),
        ("tail_bound_status", "validated-empirical".to_string().into()),
    ];
    let mut passed = true;
    if check {
        let oracle = compute_e(precision_bits + 64)?;
        let error = (&estimate.value - &oracle).abs();
        let agreeing = if error.is_zero() {
            decimal_digits_for_bits(precision_bits)
        } else {
            let rel = &error / &oracle;
            (-rel.ln().to_f64() / std::f64::consts::LN_10).floor().max(0.0) as usize
        };
        let within = error.as_float() <= estimate.tail_bound.as_float();
        passed = within;
        fields.push(("oracle_error", error.to_scientific(6).into()));
        fields.push(("oracle_digits", agreeing.into()));
        fields.push(("within_tail_bound", within.into()));
    }
    Ok(Output {
        body: Body::Report(Report::summary(fields)),
        passed,
    })
}
