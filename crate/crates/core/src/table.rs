//! Table of best known bounds on `d_m`, as aligned text or CSV.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::bounds::{best_bounds, BoundRecord, Method, UpperRecord};
use crate::hex::search_hex;
use crate::sat::SatBoundRecord;

pub const CSV_HEADER: &str = "m,lower,upper,lower_method,upper_method,gap";

/// Best hexagonal tiling for each `m ≥ 7` in `ms`, searched with coefficient
/// bound `bound`.
pub fn hex_upper_records(ms: impl IntoIterator<Item = u32>, bound: i64) -> Vec<UpperRecord> {
    ms.into_iter()
        .filter(|&m| m >= 7)
        .filter_map(|m| {
            search_hex::<BigRational>(m, bound).map(|o| UpperRecord { m, tau: o.tau, method: Method::Hex, certified: true })
        })
        .collect()
}

/// Parses `m,tau,method` lines (header and `#` comments allowed).
pub fn parse_upper_records(text: &str) -> Result<Vec<UpperRecord>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("m,") {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || format!("upper-bound record line {}: {line:?}", n + 1);
        if f.len() != 3 {
            return Err(bad());
        }
        out.push(UpperRecord {
            m: f[0].parse().map_err(|_| bad())?,
            tau: f[1].parse().map_err(|_| bad())?,
            method: Method::parse(f[2]).ok_or_else(bad)?,
            certified: true,
        });
    }
    Ok(out)
}

pub fn upper_record_line(r: &UpperRecord) -> String {
    format!("{},{:.17},{}", r.m, r.tau, r.method)
}

pub fn table1(m_max: u32, sat: &[SatBoundRecord], uppers: &[UpperRecord]) -> Vec<BoundRecord> {
    (1..=m_max).map(|m| best_bounds(m, sat, uppers)).collect()
}

fn gap_text(r: &BoundRecord) -> String {
    if r.gap().abs() < 1e-12 {
        "exact".into()
    } else {
        format!("{:.4}", r.gap())
    }
}

pub fn format_text(rows: &[BoundRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3}  {:>9}  {:>9}  {:<11} {:<11} {:>7}", "m", "lower", "upper", "lower by", "upper by", "gap");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>9.6}  {:>9.6}  {:<11} {:<11} {:>7}",
            r.m,
            r.lower,
            r.upper,
            r.lower_method.as_str(),
            r.upper_method.as_str(),
            gap_text(r)
        );
    }
    out
}

pub fn format_csv(rows: &[BoundRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.12},{:.12},{},{},{:.12}",
            r.m, r.lower, r.upper, r.lower_method, r.upper_method, r.gap()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::reported_sat_geometry_uppers;
    use crate::sat::published_unsat_records;

    #[test]
    fn small_rows() {
        let rows = table1(9, &published_unsat_records(), &reported_sat_geometry_uppers());
        assert_eq!(rows.len(), 9);
        assert!((rows[2].lower - 0.600925).abs() < 5e-7 && rows[2].gap() == 0.0);
        assert!((rows[3].lower - 0.556799).abs() < 5e-7);
        assert!((rows[6].upper - 0.511452).abs() < 5e-7);
        let csv = format_csv(&rows);
        assert_eq!(csv.lines().count(), 10);
        assert!(format_text(&rows).contains("exact"));
    }

    #[test]
    fn hex_record_m8() {
        let r = hex_upper_records([8], 5);
        assert!((r[0].tau - 0.441942).abs() < 5e-7);
    }

    #[test]
    fn upper_record_lines() {
        let r = UpperRecord { m: 9, tau: 0.42, method: Method::Globopt, certified: true };
        let parsed = parse_upper_records(&format!("m,tau,method\n{}\n", upper_record_line(&r))).unwrap();
        assert_eq!(parsed, vec![r]);
        assert!(parse_upper_records("9,x,globopt").is_err());
    }
}
