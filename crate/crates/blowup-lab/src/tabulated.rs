//! Profiles read back from trajectory CSV files.

use crate::error::LabError;
use radial_core::grid::Parity;
use radial_core::{Grading, JetState, RadialField, RadialGrid, RadialProfile};
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

pub const JET_COLUMNS: [&str; 7] = ["r", "u", "du", "lap_u", "dlap_u", "bilap_u", "dbilap_u"];

/// A jet tabulated on a grid, one interpolated field per component.
#[derive(Clone, Debug)]
pub struct TabulatedProfile {
    fields: Vec<RadialField>,
}

impl TabulatedProfile {
    pub fn read_csv<R: Read>(rdr: R) -> Result<Self, LabError> {
        let mut rdr = csv::Reader::from_reader(rdr);
        let headers = rdr.headers()?.clone();
        let idx: Vec<usize> = JET_COLUMNS
            .iter()
            .map(|c| {
                headers.iter().position(|h| h.trim() == *c).ok_or_else(|| {
                    LabError::InvalidInput(format!("trajectory CSV lacks column \"{c}\""))
                })
            })
            .collect::<Result<_, _>>()?;
        let mut cols = vec![Vec::new(); JET_COLUMNS.len()];
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            for (c, &i) in idx.iter().enumerate() {
                let s = rec.get(i).unwrap_or("");
                let x = s.trim().parse::<f64>().map_err(|e| {
                    LabError::InvalidInput(format!("row {}: bad number {s:?}: {e}", line + 2))
                })?;
                cols[c].push(x);
            }
        }
        if cols[0].len() < crate::rescale::MIN_NODES {
            return Err(LabError::InvalidInput(format!(
                "trajectory CSV has {} rows",
                cols[0].len()
            )));
        }
        let grid = Arc::new(RadialGrid::new(cols[0].clone(), Grading::Custom)?);
        let fields = cols[1..]
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let f = RadialField::new(grid.clone(), v.clone())?;
                Ok(if k % 2 == 1 { f.with_parity(Parity::None) } else { f })
            })
            .collect::<Result<_, LabError>>()?;
        Ok(TabulatedProfile { fields })
    }

    pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<Self, LabError> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.fields[0].grid()
    }

    /// The `u` column as a field.
    pub fn field(&self) -> &RadialField {
        &self.fields[0]
    }
}

impl RadialProfile for TabulatedProfile {
    fn jet(&self, r: f64) -> JetState {
        let mut w = [f64::NAN; 6];
        for (k, f) in self.fields.iter().enumerate() {
            w[k] = f.eval(r).unwrap_or(f64::NAN);
        }
        JetState::new(r, w)
    }

    fn value(&self, r: f64) -> f64 {
        self.fields[0].eval(r).unwrap_or(f64::NAN)
    }

    fn support(&self) -> f64 {
        self.grid().r_max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ode_shooter::{integrate_ivp, IvpSpec};

    #[test]
    fn roundtrip_of_spherical_trajectory() {
        let traj = integrate_ivp(&IvpSpec::spherical(5.0)).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let tab = TabulatedProfile::read_csv(buf.as_slice()).unwrap();
        assert_eq!(tab.u0(), traj.u0());
        for r in [0.01, 0.5, 1.3, 4.0] {
            let (a, b) = (tab.jet(r), traj.jet(r));
            for k in 0..6 {
                assert!((a.w[k] - b.w[k]).abs() < 1e-5 * (1.0 + b.w[k].abs()), "r={r} k={k}");
            }
        }
        assert!(tab.value(6.0).is_nan());
    }

    #[test]
    fn missing_column_is_named() {
        let err = TabulatedProfile::read_csv("r,u\n0,1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("du"), "{err}");
    }
}
