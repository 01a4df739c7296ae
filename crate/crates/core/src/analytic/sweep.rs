use std::io::{self, Write};

use rayon::prelude::*;

use super::{Delivery, DeliveryChain, DeliveryResult};
use crate::{Error, LinkModel, Result};

pub const SWEEP_CSV_HEADER: &str = "n,r,lambda,alpha,d,kind,value,lower,upper";

/// Cartesian grid of scenario points. Rows are emitted with `n` outermost
/// and `d` innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub n: Vec<usize>,
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
    pub d: Vec<usize>,
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.n.len() * self.r.len() * self.lambda.len() * self.alpha.len() * self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub r: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub d: usize,
    pub outcome: Result<DeliveryResult>,
}

/// Evaluates every grid point. A failing point yields an error row and the
/// sweep carries on.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::domain("grid", "sweep grid has an empty axis"));
    }
    let mut series = Vec::new();
    for &n in &grid.n {
        for &r in &grid.r {
            for &lambda in &grid.lambda {
                for &alpha in &grid.alpha {
                    series.push((n, r, lambda, alpha));
                }
            }
        }
    }
    let d_max = grid.d.iter().copied().max().unwrap_or(0);
    let rows = series
        .into_par_iter()
        .map(|(n, r, lambda, alpha)| {
            let curve = LinkModel::new(r, lambda)
                .and_then(|m| DeliveryChain::new(n, &m, alpha))
                .map(|chain| chain.curve(d_max));
            grid.d
                .iter()
                .map(|&d| {
                    let outcome = match &curve {
                        Err(e) => Err(e.clone()),
                        Ok(_) if d == 0 => Err(Error::domain("d", "d must be >= 1")),
                        Ok(c) => Ok(c[d - 1]),
                    };
                    SweepRow {
                        n,
                        r,
                        lambda,
                        alpha,
                        d,
                        outcome,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    Ok(rows.into_iter().flatten().collect())
}

/// Writes the header and one line per row. Error rows have kind `error` and
/// empty value columns.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        let (kind, value, lower, upper) = match &row.outcome {
            Ok(DeliveryResult {
                delivery: Delivery::Exact(v),
                ..
            }) => ("exact", v.to_string(), v.to_string(), v.to_string()),
            Ok(DeliveryResult {
                delivery: Delivery::Interval { lower, upper },
                ..
            }) => (
                "interval",
                String::new(),
                lower.to_string(),
                upper.to_string(),
            ),
            Err(_) => ("error", String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{kind},{value},{lower},{upper}",
            row.n, row.r, row.lambda, row.alpha, row.d
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SweepGrid {
        SweepGrid {
            n: vec![20],
            r: vec![2.0],
            lambda: vec![10.0],
            alpha: vec![1.0],
            d: (1..=30).collect(),
        }
    }

    fn values(rows: &[SweepRow]) -> Vec<f64> {
        rows.iter()
            .map(|r| r.outcome.as_ref().unwrap().lower())
            .collect()
    }

    #[test]
    fn delay_column_is_monotone() {
        let rows = sweep(&base()).unwrap();
        assert_eq!(rows.len(), 30);
        let v = values(&rows);
        assert!(v.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(
            rows.iter().map(|r| r.d).collect::<Vec<_>>(),
            (1..=30).collect::<Vec<_>>()
        );
    }

    #[test]
    fn smaller_packets_deliver_more() {
        let grid = SweepGrid {
            alpha: vec![0.125, 0.25, 0.5, 1.0],
            d: vec![4],
            ..base()
        };
        let v = values(&sweep(&grid).unwrap());
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "{v:?}");
    }

    #[test]
    fn more_nodes_deliver_more() {
        let grid = SweepGrid {
            n: (2..=40).collect(),
            d: vec![5],
            ..base()
        };
        let v = values(&sweep(&grid).unwrap());
        assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
    }

    #[test]
    fn bad_points_become_error_rows() {
        let grid = SweepGrid {
            r: vec![0.5, 2.0],
            d: vec![3, 0],
            ..base()
        };
        let rows = sweep(&grid).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].outcome.is_err() && rows[1].outcome.is_err());
        assert!(rows[2].outcome.is_ok() && rows[3].outcome.is_err());
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines[1], "20,0.5,10,1,3,error,,,");
        assert!(lines[3].starts_with("20,2,10,1,3,exact,"));
    }

    #[test]
    fn interval_rows_leave_value_empty() {
        let grid = SweepGrid {
            alpha: vec![2.0],
            d: vec![8],
            ..base()
        };
        let mut buf = Vec::new();
        write_sweep_csv(&sweep(&grid).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let fields: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[5], "interval");
        assert_eq!(fields[6], "");
        assert!(fields[7].parse::<f64>().unwrap() <= fields[8].parse::<f64>().unwrap());
    }

    #[test]
    fn empty_axis_is_rejected() {
        assert!(sweep(&SweepGrid {
            d: vec![],
            ..base()
        })
        .is_err());
    }
}
