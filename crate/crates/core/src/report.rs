//! CSV and JSON writers.
//!
//! Numbers use `.` as decimal separator and the shortest representation that
//! round-trips, so identical inputs give byte-identical files.

use std::io::{self, Write};

use serde::Serialize;

use crate::quadrature::{BoundScan, LemmaScanReport};
use crate::simulation::{MartingaleScan, PathRecord};

pub const LEMMA_HEADER: &str = "t,integralI_left,integralI_mid,integralI_right,EalphaSq,bound_product,err_estimate";
pub const BOUND_HEADER: &str = "t,EalphaSq,product,running_sup";
pub const PATHS_HEADER: &str = "path,realized_l,log_wealth";
pub const MARTINGALE_HEADER: &str = "t,mean,standard_error,z_score";

/// Plain decimal in `[1e-4, 1e15)`, scientific otherwise.
pub fn number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn row<W: Write>(w: &mut W, cells: &[f64]) -> io::Result<()> {
    let line: Vec<String> = cells.iter().map(|&x| number(x)).collect();
    writeln!(w, "{}", line.join(","))
}

pub fn write_lemma_csv<W: Write>(w: &mut W, report: &LemmaScanReport) -> io::Result<()> {
    writeln!(w, "{LEMMA_HEADER}")?;
    for r in &report.rows {
        row(w, &[r.t, r.left, r.middle, r.right, r.e_alpha_sq, r.bound_product, r.abs_error])?;
    }
    Ok(())
}

pub fn write_bound_csv<W: Write>(w: &mut W, scan: &BoundScan) -> io::Result<()> {
    writeln!(w, "{BOUND_HEADER}")?;
    for r in &scan.rows {
        row(w, &[r.t, r.e_alpha_sq, r.product, r.running_sup])?;
    }
    Ok(())
}

pub fn write_martingale_csv<W: Write>(w: &mut W, scan: &MartingaleScan) -> io::Result<()> {
    writeln!(w, "{MARTINGALE_HEADER}")?;
    for r in &scan.rows {
        let z = r.z_score.map(number).unwrap_or_default();
        writeln!(w, "{},{},{},{z}", number(r.t), number(r.mean), number(r.standard_error))?;
    }
    Ok(())
}

/// One line per path; `realized_l` is `1`, `0` or empty.
pub fn write_paths_csv<W: Write>(w: &mut W, paths: &[PathRecord]) -> io::Result<()> {
    writeln!(w, "{PATHS_HEADER}")?;
    for p in paths {
        let l = match p.realized_l {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        writeln!(w, "{},{l},{}", p.path, number(p.log_wealth))?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{Anticipation, CoefficientSet};
    use crate::quadrature::bound_scan;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 0.5, 1.0 / 3.0, 6.259082532407683e-195, 1e20, -2.5e-7, 12345.678] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(number(0.25), "0.25");
        assert_eq!(number(1e-5), "1e-5");
    }

    #[test]
    fn bound_csv_layout() {
        let c = CoefficientSet::constant(0.0, 0.0, 1.0).unwrap();
        let scan = bound_scan(&c, &Anticipation::Terminal, &[0.5, 0.75]).unwrap();
        let mut out = Vec::new();
        write_bound_csv(&mut out, &scan).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], BOUND_HEADER);
        assert_eq!(lines[1], "0.5,2,1,1");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn paths_csv_layout() {
        let recs = [
            PathRecord { path: 0, realized_l: Some(true), log_wealth: 0.5 },
            PathRecord { path: 1, realized_l: None, log_wealth: -1.0 },
        ];
        let mut out = Vec::new();
        write_paths_csv(&mut out, &recs).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "path,realized_l,log_wealth\n0,1,0.5\n1,,-1\n");
    }
}
