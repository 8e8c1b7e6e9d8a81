//! `gseries`: batch front end for the coefficient library.
//!
//! Exit status is 0 on success, 1 when a verification or computation check
//! fails, and 2 on a usage error.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "gseries", version, about = "Coefficients of (1 + 1/x)^x = sum c_j x^-j")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact table of a_j = c_j / e with c_j in decimal.
    Coeffs {
        #[arg(long)]
        jmax: usize,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// Compare the recursion with the partition-sum formula.
    Verify {
        #[arg(long)]
        jmax: usize,
    },
    /// Residuals eta_j = c_j - (-1)^j (1 + 1/j).
    Asymptotic {
        #[arg(long)]
        jmin: usize,
        #[arg(long)]
        jmax: usize,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// c_j from a trapezoid-rule Cauchy integral.
    #[command(group(ArgGroup::new("rule").required(true).args(["nodes", "tol"])))]
    Quad {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        radius: String,
        /// Fixed node count.
        #[arg(long)]
        nodes: Option<usize>,
        /// Double the node count until successive estimates agree to this.
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        precision_bits: u32,
    },
    /// Partition counts against the Hardy-Ramanujan estimate.
    Partition {
        #[arg(long)]
        jmax: usize,
    },
    /// Digits of e from g(x) and the coefficient table.
    EDigits {
        #[arg(long)]
        digits: u32,
        /// Power of two to evaluate at.
        #[arg(long)]
        x: Option<String>,
        /// Number of series terms J.
        #[arg(long)]
        terms: Option<usize>,
        /// Compare with the factorial series.
        #[arg(long)]
        check: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            let text = err.to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", summary.join(" "));
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Coeffs { jmax, precision_bits } => commands::coeffs(jmax, precision_bits, cli.format),
        Command::Verify { jmax } => commands::verify(jmax),
        Command::Asymptotic {
            jmin,
            jmax,
            precision_bits,
        } => commands::asymptotic(jmin, jmax, precision_bits),
        Command::Quad {
            j,
            radius,
            nodes,
            tol,
            precision_bits,
        } => commands::quad(j, &radius, nodes, tol.as_deref(), precision_bits),
        Command::Partition { jmax } => commands::partition(jmax),
        Command::EDigits {
            digits,
            x,
            terms,
            check,
        } => commands::e_digits(digits, x.as_deref(), terms, check),
    };
    match outcome {
        Ok(output) => {
            if let Err(e) = output.write(cli.format) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if output.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
