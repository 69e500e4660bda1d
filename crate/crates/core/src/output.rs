//! CSV output for trajectories and energy series.
//!
//! One table holds every body of a run: a `t` column, then per body its
//! position coordinates `<id>.x<k>` and velocity coordinates `<id>.v<k>`.
//! Values are written with 17 significant digits so parsing them back
//! reproduces the exact bit pattern, and two identical runs produce
//! byte-identical files.

use std::io::Write;

use crate::dynamics::{EnergyBreakdown, Trajectory};
use crate::error::{Error, Result};

/// Writes trajectories sharing one time grid as a single CSV table.
pub fn write_trajectory_csv<W: Write>(mut w: W, trajectories: &[Trajectory]) -> Result<()> {
    let (header, rows) = tabulate(trajectories)?;
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// [`write_trajectory_csv`] into a `String`.
pub fn trajectory_csv_string(trajectories: &[Trajectory]) -> Result<String> {
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, trajectories)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

fn tabulate(trajectories: &[Trajectory]) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    if trajectories.is_empty() {
        return Err(Error::InvalidParameter {
            name: "trajectories".into(),
            reason: "nothing to write".into(),
        });
    }
    let samples = trajectories[0].samples.len();
    for tr in trajectories {
        if tr.body_id.contains([',', '\n', '\r']) {
            return Err(Error::InvalidParameter {
                name: "body id".into(),
                reason: format!("`{}` cannot name a CSV column", tr.body_id),
            });
        }
        if tr.samples.len() != samples {
            return Err(Error::InvalidParameter {
                name: "trajectories".into(),
                reason: "bodies were sampled different numbers of times".into(),
            });
        }
        for (a, b) in trajectories[0].samples.iter().zip(&tr.samples) {
            if a.t != b.t {
                return Err(Error::InvalidParameter {
                    name: "trajectories".into(),
                    reason: "bodies do not share a time grid".into(),
                });
            }
        }
    }

    let mut header = vec!["t".to_string()];
    for tr in trajectories {
        let dim = tr.samples.first().map_or(0, |s| s.position.dimension());
        for k in 0..dim {
            header.push(format!("{}.x{k}", tr.body_id));
        }
        for k in 0..dim {
            header.push(format!("{}.v{k}", tr.body_id));
        }
    }

    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let mut row = vec![trajectories[0].samples[i].t];
        for tr in trajectories {
            let s = &tr.samples[i];
            row.extend_from_slice(s.position.as_slice());
            row.extend_from_slice(s.velocity.as_slice());
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// A parsed CSV table: header names plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TrajectoryTable {
    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownId { id: name.into() })
    }

    /// All values of one column, top to bottom.
    pub fn column(&self, index: usize) -> Result<Vec<f64>> {
        if index >= self.columns.len() {
            return Err(Error::OutOfRange {
                quantity: "column index".into(),
                value: index as f64,
                min: 0.0,
                max: self.columns.len() as f64 - 1.0,
            });
        }
        Ok(self.rows.iter().map(|r| r[index]).collect())
    }

    /// (t, value) pairs for one column, ready for spectral analysis.
    pub fn series(&self, index: usize) -> Result<Vec<(f64, f64)>> {
        let values = self.column(index)?;
        Ok(self
            .rows
            .iter()
            .map(|r| r[0])
            .zip(values)
            .collect())
    }
}

/// Parses a table written by [`write_trajectory_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<TrajectoryTable> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if columns.is_empty() || columns[0] != "t" {
        return Err(Error::Parse {
            line: 1,
            message: "first column must be `t`".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(columns.len());
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("bad number `{}`: {e}", field.trim()),
            })?;
            row.push(v);
        }
        if row.len() != columns.len() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {} fields, found {}", columns.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok(TrajectoryTable { columns, rows })
}

/// Energy series as CSV: `t,kinetic,potential,total`.
pub fn energy_csv_string(series: &[(f64, EnergyBreakdown)]) -> String {
    let mut out = String::from("t,kinetic,potential,total\n");
    for (t, e) in series {
        out.push_str(&format!(
            "{t:.16e},{:.16e},{:.16e},{:.16e}\n",
            e.kinetic,
            e.potential,
            e.total()
        ));
    }
    out
}
