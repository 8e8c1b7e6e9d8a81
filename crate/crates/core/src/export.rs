//! Table export formats.
//!
//! CSV: header `j,numerator,denominator,decimal`, where `decimal` is `c_j` in
//! scientific notation. JSON: an array of `{"j", "num", "den"}` objects with the
//! integers written as decimal strings so their size is unbounded.

use std::io::Write;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::bignum::{decimal_digits_for_bits, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::CoefficientTable;
use crate::series::compute_e;

pub const TABLE_CSV_HEADER: [&str; 4] = ["j", "numerator", "denominator", "decimal"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub j: usize,
    pub num: String,
    pub den: String,
}

pub fn write_table_csv<W: Write>(table: &CoefficientTable, precision_bits: u32, out: W) -> Result<()> {
    let e = compute_e(precision_bits + GUARD_BITS)?;
    let digits = decimal_digits_for_bits(precision_bits);
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TABLE_CSV_HEADER).map_err(io_error)?;
    for (j, a) in table.entries().iter().enumerate() {
        let c = table.coefficient_c_with_e(j, &e, precision_bits)?;
        writer
            .write_record([
                j.to_string(),
                a.numer().to_string(),
                a.denom().to_string(),
                c.to_scientific(digits),
            ])
            .map_err(io_error)?;
    }
    writer.flush().map_err(|e| Error::Format(e.to_string()))?;
    Ok(())
}

pub fn table_entries(table: &CoefficientTable) -> Vec<TableEntry> {
    table
        .entries()
        .iter()
        .enumerate()
        .map(|(j, a)| TableEntry {
            j,
            num: a.numer().to_string(),
            den: a.denom().to_string(),
        })
        .collect()
}

pub fn table_to_json(table: &CoefficientTable) -> String {
    serde_json::to_string(&table_entries(table)).expect("string fields always serialize")
}

/// Parse the JSON array back into canonical rationals. Indices must run
/// `0, 1, 2, ...` and denominators must be positive.
pub fn entries_from_json(text: &str) -> Result<Vec<Rational>> {
    let rows: Vec<TableEntry> = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            if row.j != i {
                return Err(Error::Format(format!("expected j = {i}, found {}", row.j)));
            }
            let num: Integer = row
                .num
                .parse()
                .map_err(|_| Error::Format(format!("bad numerator at j = {i}")))?;
            let den: Integer = row
                .den
                .parse()
                .map_err(|_| Error::Format(format!("bad denominator at j = {i}")))?;
            if den <= 0 {
                return Err(Error::Format(format!("non-positive denominator at j = {i}")));
            }
            Ok(Rational::from((num, den)))
        })
        .collect()
}

fn io_error(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}
