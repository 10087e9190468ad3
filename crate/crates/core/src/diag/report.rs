//! Named residual statistics and their CSV / JSON forms.

use crate::error::{Error, Result};
use crate::field::Field2;
use crate::diag::fields::{Mesh, Region};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "time,name,max,l1,l2,region";

/// max, L¹ and L² of one quantity over the selected cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub time: f64,
    pub name: String,
    pub max: f64,
    pub l1: f64,
    pub l2: f64,
    /// Mean of |f| over the selection.
    pub mean: f64,
    pub region: String,
    pub cells: usize,
}

impl Stat {
    /// Statistics of `f` on `sel`; `Err(EmptyRegion)` when nothing is selected.
    pub fn of(name: &str, f: &Field2<f64>, sel: &[bool], mesh: &Mesh, time: f64, region: &Region) -> Result<Self> {
        let (mut max, mut s1, mut s2, mut n) = (0.0f64, 0.0, 0.0, 0usize);
        for (k, &on) in sel.iter().enumerate() {
            if on {
                let a = f.data[k].abs();
                if a.is_nan() {
                    return Err(Error::Data(format!("{name} is NaN inside region {}", region.name)));
                }
                max = max.max(a);
                s1 += a;
                s2 += a * a;
                n += 1;
            }
        }
        if n == 0 {
            return Err(Error::EmptyRegion(format!("{name}: region {} selects no cells at t = {time}", region.name)));
        }
        let area = mesh.area();
        Ok(Self {
            time,
            name: name.into(),
            max,
            l1: s1 * area,
            l2: (s2 * area).sqrt(),
            mean: s1 / n as f64,
            region: region.name.clone(),
            cells: n,
        })
    }

    pub fn csv_row(&self) -> String {
        format!("{:?},{},{:?},{:?},{:?},{}", self.time, self.name, self.max, self.l1, self.l2, self.region)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub rows: Vec<Stat>,
}

impl DiagnosticsReport {
    pub fn push(&mut self, s: Stat) {
        self.rows.push(s);
    }

    pub fn extend(&mut self, other: DiagnosticsReport) {
        self.rows.extend(other.rows);
    }

    pub fn get(&self, name: &str) -> Option<&Stat> {
        self.rows.iter().find(|s| s.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`to_csv`](Self::to_csv); `mean` and `cells` are not carried.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Data("diagnostics CSV header mismatch".into()));
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(Error::Data(format!("row {}: expected 6 fields", n + 2)));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Data(format!("row {}: {e}", n + 2)));
            rows.push(Stat {
                time: num(f[0])?,
                name: f[1].into(),
                max: num(f[2])?,
                l1: num(f[3])?,
                l2: num(f[4])?,
                mean: f64::NAN,
                region: f[5].into(),
                cells: 0,
            });
        }
        Ok(Self { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mesh = Mesh { nx: 3, ny: 3, dx1: 0.1, dx2: 0.2, x1_min: 0.0 };
        let f = Field2::from_fn(3, 3, |i, j| (i + j) as f64 * 0.1);
        let sel = vec![true; 9];
        let s = Stat::of("q", &f, &sel, &mesh, 0.5, &Region::all()).unwrap();
        assert!((s.max - 0.4).abs() < 1e-15);
        let rep = DiagnosticsReport { rows: vec![s.clone()] };
        let back = DiagnosticsReport::from_csv(&rep.to_csv()).unwrap();
        assert_eq!(back.rows[0].l2, s.l2);
        assert_eq!(back.rows[0].name, "q");
        assert!(matches!(Stat::of("q", &f, &[false; 9], &mesh, 0.5, &Region::all()), Err(Error::EmptyRegion(_))));
    }
}
