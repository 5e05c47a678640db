//! Builders that turn library results into tables.

use std::path::Path;
use std::time::Duration;

use collatz_descent::dynamics::{descent_trace_capped, full_trajectory};
use collatz_descent::pattern::{enumerate_minimal_patterns, feasibility_table, residue_for_pattern};
use collatz_descent::scanner::{cache_load, cache_store, classify_depth, record_search, sieve_scan};
use collatz_descent::{twin_check, BigClass, DescentPattern, Nat, Natural, ScanConfig, StepKind};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::table::{Report, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TraceMode {
    /// Up to the first value below the start.
    Descent,
    /// Down to 1.
    Full,
    /// Side by side with the start plus 2^j, with per-step adder terms.
    Twin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NamedReport {
    CycleLength,
    Length6,
    Length8,
    Seq27,
}

/// Six significant digits with a decimal comma and an `E+XX` exponent, the
/// way spreadsheet output shows large integers. Values of at most six digits
/// print unchanged.
pub fn scientific_cell(value: &BigUint) -> String {
    let digits = value.to_string();
    if digits.len() <= 6 {
        return digits;
    }
    let drop = (digits.len() - 6) as u32;
    let scale = BigUint::from(10u8).pow(drop);
    let (mut kept, rem) = (value / &scale, value % &scale);
    if rem * 2u8 >= scale {
        kept += 1u8;
    }
    let mut exponent = digits.len() - 1;
    if kept.to_string().len() > 6 {
        kept /= 10u8;
        exponent += 1;
    }
    let kept = kept.to_string();
    let fraction = kept[1..].trim_end_matches('0');
    if fraction.is_empty() {
        format!("{}E+{exponent:02}", &kept[..1])
    } else {
        format!("{},{fraction}E+{exponent:02}", &kept[..1])
    }
}

/// `(3^a n + c) / 2^b` written with plain integers, e.g. `(9n+5)/16`.
pub fn affine_formula(odd: u32, adder: &BigUint, even: u32) -> String {
    let coefficient = BigUint::from(3u8).pow(odd);
    let mut numerator = if coefficient.is_one() {
        "n".to_string()
    } else {
        format!("{coefficient}n")
    };
    if !adder.is_zero() {
        numerator = format!("({numerator}+{adder})");
    }
    if even == 0 {
        numerator
    } else {
        format!("{numerator}/{}", BigUint::from(1u8) << even)
    }
}

pub fn feasibility(max_length: u32) -> Report {
    let mut table = Table::new(["E ops", "O ops", "Result", "Cycle length", "Remark"]);
    for row in feasibility_table(max_length) {
        table.push([
            row.even_ops.to_string(),
            row.odd_ops.to_string(),
            row.margin.to_string(),
            row.length().to_string(),
            row.remark.to_string(),
        ]);
    }
    table.into()
}

fn class_headers() -> Table {
    Table::new(["Pattern", "Length", "i", "j", "m", "x", "Modulus", "y0", "Class"])
}

fn push_class(table: &mut Table, class: &BigClass) {
    table.push([
        class.pattern().to_string(),
        class.pattern().len().to_string(),
        class.odd_count().to_string(),
        class.even_count().to_string(),
        class.adder().to_string(),
        class.offset().to_string(),
        class.modulus().to_string(),
        class.first_lower().to_string(),
        format!("2^{}k+{}", class.even_count(), class.offset()),
    ]);
}

pub fn enumerate(length: usize) -> Result<Report, CliError> {
    let mut table = class_headers();
    for class in enumerate_minimal_patterns::<Nat>(length)? {
        push_class(&mut table, &class);
    }
    Ok(table.into())
}

pub fn class(pattern: &str) -> Result<Report, CliError> {
    let pattern: DescentPattern = pattern
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid pattern {pattern:?}: {e}")))?;
    let class = residue_for_pattern::<Nat>(&pattern)?;
    let mut table = class_headers();
    push_class(&mut table, &class);
    Ok(table.into())
}

pub fn trace(n: &Nat, mode: TraceMode, rounded: bool, cap: u64) -> Result<Report, CliError> {
    match mode {
        TraceMode::Descent => {
            let t = descent_trace_capped(n, cap)?;
            let mut table = Table::new(["Step", "Value", "Ops", "Next"]);
            for (idx, (input, step)) in t.inputs().zip(t.pattern.steps()).enumerate() {
                table.push([
                    (idx + 1).to_string(),
                    input.to_string(),
                    step.to_string(),
                    t.values[idx].to_string(),
                ]);
            }
            Ok(table.into())
        }
        TraceMode::Full => {
            if n < &Nat::two() {
                return Err(CliError::Domain(format!("trace needs n >= 2, got {n}")));
            }
            let values = full_trajectory(n, cap)?;
            let mut table = Table::new(["Step", "Value", "Ops", "Next"]);
            for (idx, pair) in values.windows(2).enumerate() {
                let step = pair[0].1.expect("every value but the last has a step");
                table.push([
                    (idx + 1).to_string(),
                    pair[0].0.to_string(),
                    step.to_string(),
                    pair[1].0.to_string(),
                ]);
            }
            Ok(table.into())
        }
        TraceMode::Twin => twin(n, rounded),
    }
}

fn twin(n: &Nat, rounded: bool) -> Result<Report, CliError> {
    let record = twin_check(n)?;
    let odd_total = record.odd_count();
    let format_adder = |v: &BigUint| {
        if rounded {
            scientific_cell(v)
        } else {
            v.to_string()
        }
    };

    let mut table = Table::new(["Step", "Value", "Ops", "Adder value", "Subsequent"]);
    let twin_inputs: Vec<&Nat> = record.twin_trace.inputs().collect();
    let (mut odd_seen, mut even_seen) = (0u32, 0u32);
    let mut adder_total = BigUint::zero();
    for (idx, (input, step)) in record.trace.inputs().zip(record.trace.pattern.steps()).enumerate() {
        let adder = match step {
            StepKind::Odd => {
                odd_seen += 1;
                let term = BigUint::from(3u8).pow(odd_total - odd_seen) << even_seen;
                adder_total += &term;
                format_adder(&term)
            }
            StepKind::Even => {
                even_seen += 1;
                String::new()
            }
        };
        let subsequent = twin_inputs.get(idx).map(|v| v.to_string()).unwrap_or_default();
        table.push([
            (idx + 1).to_string(),
            input.to_string(),
            step.to_string(),
            adder,
            subsequent,
        ]);
    }
    table.push([
        String::new(),
        record.trace.first_lower.to_string(),
        String::new(),
        String::new(),
        record.twin_trace.first_lower.to_string(),
    ]);

    let mut summary = Table::new(["Quantity", "Value"]).titled("Summary");
    summary.push(["Start".to_string(), n.to_string()]);
    summary.push(["Steps".to_string(), record.trace.len().to_string()]);
    summary.push(["O steps".to_string(), odd_total.to_string()]);
    summary.push(["E steps".to_string(), record.even_count().to_string()]);
    summary.push(["Adder".to_string(), format_adder(&adder_total)]);
    summary.push(["First lower".to_string(), record.trace.first_lower.to_string()]);
    summary.push(["Twin".to_string(), record.twin.to_string()]);
    summary.push([
        "Twin first lower".to_string(),
        record.twin_trace.first_lower.to_string(),
    ]);
    summary.push(["Twin law holds".to_string(), record.holds().to_string()]);

    Ok(Report {
        tables: vec![table.titled(format!("Sequence for {n} and subsequent number")), summary],
    })
}

/// Trajectory table for the class members with `k = 0, 1, 10`.
fn class_examples(pattern: &str) -> Result<Table, CliError> {
    let class = residue_for_pattern::<Nat>(&pattern.parse().expect("built-in pattern"))?;
    let starts: Vec<Nat> = [0u32, 1, 10]
        .iter()
        .map(|&k| class.member(&Nat::from(k)).expect("big integers do not overflow"))
        .collect();
    let traces = starts
        .iter()
        .map(|s| descent_trace_capped(s, u64::MAX))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(["N 1", "N 2", "N 3", "General", "Step", "Cycle"]).titled(format!(
        "Sequence 2^{}k+{}",
        class.even_count(),
        class.offset()
    ));
    let (mut odd, mut even) = (0u32, 0u32);
    let mut adder = BigUint::zero();
    for (idx, step) in class.pattern().steps().iter().enumerate() {
        let values: Vec<String> = traces
            .iter()
            .map(|t| t.inputs().nth(idx).unwrap().to_string())
            .collect();
        table.push([
            values[0].clone(),
            values[1].clone(),
            values[2].clone(),
            affine_formula(odd, &adder, even),
            (idx + 1).to_string(),
            step.to_string(),
        ]);
        match step {
            StepKind::Odd => {
                adder = adder * 3u8 + (BigUint::from(1u8) << even);
                odd += 1;
            }
            StepKind::Even => even += 1,
        }
    }
    table.push([
        traces[0].first_lower.to_string(),
        traces[1].first_lower.to_string(),
        traces[2].first_lower.to_string(),
        affine_formula(odd, &adder, even),
        String::new(),
        String::new(),
    ]);
    Ok(table)
}

pub fn named(name: NamedReport, rounded: bool) -> Result<Report, CliError> {
    match name {
        NamedReport::CycleLength => Ok(feasibility(37)),
        NamedReport::Length6 => Ok(class_examples("OEOEEE")?.into()),
        NamedReport::Length8 => Ok(Report {
            tables: vec![class_examples("OEOEEOEE")?, class_examples("OEOEOEEE")?],
        }),
        NamedReport::Seq27 => twin(&Nat::from(27u8), rounded),
    }
}

pub fn classify(depth: u32, cache: Option<&Path>, list_unresolved: bool) -> Result<Report, CliError> {
    let report = match cache {
        Some(path) if path.exists() => {
            let loaded = cache_load(path)?;
            if loaded.depth != depth {
                return Err(CliError::Domain(format!(
                    "cache {} holds depth {}, requested {depth}",
                    path.display(),
                    loaded.depth
                )));
            }
            loaded
        }
        Some(path) => {
            let fresh = classify_depth(depth)?;
            cache_store(&fresh, path)?;
            fresh
        }
        None => classify_depth(depth)?,
    };

    let mut summary = Table::new(["Depth", "Classes", "Resolved measure", "Unresolved residues"]).titled("Summary");
    summary.push([
        depth.to_string(),
        report.classes.len().to_string(),
        report.resolved_measure.to_string(),
        report.unresolved_residues.len().to_string(),
    ]);
    let mut classes = class_headers().titled("Classes");
    for class in &report.classes {
        push_class(&mut classes, class);
    }
    let mut tables = vec![summary, classes];
    if list_unresolved {
        let mut unresolved = Table::new(["Residue"]).titled(format!("Unresolved mod 2^{depth}"));
        for r in &report.unresolved_residues {
            unresolved.push([r.to_string()]);
        }
        tables.push(unresolved);
    }
    Ok(Report { tables })
}

/// The report plus the wall time, which is kept out of the table so output
/// is reproducible.
pub fn scan(lo: u128, hi: u128, config: &ScanConfig) -> Result<(Report, Duration), CliError> {
    let report = sieve_scan(&lo, &hi, config)?;
    let mut summary = Table::new([
        "Lo",
        "Hi",
        "Depth",
        "Verified",
        "Skipped",
        "Total",
        "Failures",
        "Max descent steps",
        "Max descent start",
    ])
    .titled("Scan");
    summary.push([
        lo.to_string(),
        hi.to_string(),
        config.depth.to_string(),
        report.verified_count.to_string(),
        report.skipped_count.to_string(),
        report.total().to_string(),
        report.failures.len().to_string(),
        report.max_descent_steps.to_string(),
        report.max_descent_start.map(|n| n.to_string()).unwrap_or_default(),
    ]);
    let mut tables = vec![summary];
    if !report.failures.is_empty() {
        let mut failures = Table::new(["n", "Error"]).titled("Failures");
        for f in &report.failures {
            failures.push([f.n.to_string(), f.error.to_string()]);
        }
        tables.push(failures);
    }
    Ok((Report { tables }, report.elapsed))
}

pub fn records(lo: u128, hi: u128, config: &ScanConfig) -> Result<Report, CliError> {
    let mut table = Table::new(["n", "Descent steps"]);
    for (n, steps) in record_search(&lo, &hi, config)? {
        table.push([n.to_string(), steps.to_string()]);
    }
    Ok(table.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_cells() {
        let cell = |s: &str| scientific_cell(&s.parse().unwrap());
        assert_eq!(cell("150094635296999121"), "1,50095E+17");
        assert_eq!(cell("88944969064888368"), "8,8945E+16");
        assert_eq!(cell("243"), "243");
        assert_eq!(cell("9999996"), "1E+07");
        assert_eq!(cell("1000000"), "1E+06");
    }

    #[test]
    fn formulas() {
        let f = |odd, adder: u32, even| affine_formula(odd, &BigUint::from(adder), even);
        assert_eq!(f(0, 0, 0), "n");
        assert_eq!(f(1, 1, 0), "(3n+1)");
        assert_eq!(f(1, 1, 1), "(3n+1)/2");
        assert_eq!(f(2, 5, 4), "(9n+5)/16");
    }

    #[test]
    fn feasibility_row_text() {
        let csv = feasibility(8).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "E ops,O ops,Result,Cycle length,Remark");
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[4], "4,2,7,6,Possible");
        assert_eq!(lines[6], "5,3,5,8,Possible");
    }

    #[test]
    fn length6_matches_published_columns() {
        let report = named(NamedReport::Length6, false).unwrap();
        let t = &report.tables[0];
        assert_eq!(t.column("N 1").unwrap(), ["3", "10", "5", "16", "8", "4", "2"]);
        assert_eq!(t.column("N 2").unwrap(), ["19", "58", "29", "88", "44", "22", "11"]);
        assert_eq!(
            t.column("N 3").unwrap(),
            ["163", "490", "245", "736", "368", "184", "92"]
        );
        assert_eq!(t.column("General").unwrap()[6], "(9n+5)/16");
    }

    #[test]
    fn length8_matches_appendix() {
        let report = named(NamedReport::Length8, false).unwrap();
        assert_eq!(
            report.tables[0].column("N 3").unwrap(),
            ["331", "994", "497", "1492", "746", "373", "1120", "560", "280"]
        );
        assert_eq!(
            report.tables[1].column("N 2").unwrap(),
            ["55", "166", "83", "250", "125", "376", "188", "94", "47"]
        );
    }
}
