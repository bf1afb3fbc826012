use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::TripartiteScenario;
use crate::dynamics::JumpOperator;
use crate::error::{Error, Result};
use crate::quantum::{CMatrix, CVector, DensityMatrix, MeasurementBasis, SystemDims};

/// Complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

fn to_rows(m: &CMatrix) -> ComplexRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_rows(rows: &ComplexRows, what: &str) -> Result<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidScenario(format!("{what} is not square")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub subsystem: String,
    pub matrix: ComplexRows,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    #[serde(default = "label_a")]
    pub subsystem: String,
    /// Basis vectors, each a list of `[re, im]` amplitudes.
    pub vectors: Vec<Vec<[f64; 2]>>,
}

fn label_a() -> String {
    "A".into()
}

fn abc_labels() -> Vec<String> {
    vec!["A".into(), "B".into(), "C".into()]
}

/// On-disk form of a [`TripartiteScenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub dims: Vec<usize>,
    #[serde(default = "abc_labels")]
    pub labels: Vec<String>,
    pub rho0: ComplexRows,
    pub h_ac: ComplexRows,
    pub h_bc: ComplexRows,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
    #[serde(default)]
    pub breaking_basis: Option<BasisSpec>,
    pub sample_times: Vec<f64>,
}

impl From<&TripartiteScenario> for ScenarioFile {
    fn from(s: &TripartiteScenario) -> Self {
        Self {
            name: s.name.clone(),
            dims: s.dims().dims().to_vec(),
            labels: s.dims().labels().to_vec(),
            rho0: to_rows(s.rho0.matrix()),
            h_ac: to_rows(&s.h_ac),
            h_bc: to_rows(&s.h_bc),
            jumps: s
                .jumps
                .iter()
                .map(|j| JumpSpec {
                    subsystem: j.subsystem.clone(),
                    matrix: to_rows(&j.operator),
                    rate: j.rate,
                })
                .collect(),
            breaking_basis: s.breaking_basis.as_ref().map(|b| BasisSpec {
                subsystem: b.subsystem().to_string(),
                vectors: b
                    .vectors()
                    .iter()
                    .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            }),
            sample_times: s.sample_times.clone(),
        }
    }
}

impl ScenarioFile {
    /// Builds and validates the scenario.
    pub fn into_scenario(self) -> Result<TripartiteScenario> {
        let dims = SystemDims::new(self.dims, self.labels)?;
        let rho0 = DensityMatrix::new(from_rows(&self.rho0, "rho0")?, dims)?;
        let jumps = self
            .jumps
            .iter()
            .map(|j| Ok(JumpOperator::new(&j.subsystem, from_rows(&j.matrix, "jump")?, j.rate)))
            .collect::<Result<Vec<_>>>()?;
        let breaking_basis = self
            .breaking_basis
            .map(|b| {
                let vectors = b
                    .vectors
                    .iter()
                    .map(|v| CVector::from_iterator(v.len(), v.iter().map(|p| Complex64::new(p[0], p[1]))))
                    .collect();
                MeasurementBasis::new(b.subsystem, vectors)
            })
            .transpose()?;
        let s = TripartiteScenario {
            name: self.name,
            rho0,
            h_ac: from_rows(&self.h_ac, "h_ac")?,
            h_bc: from_rows(&self.h_bc, "h_bc")?,
            jumps,
            breaking_basis,
            sample_times: self.sample_times,
        };
        s.validate()?;
        Ok(s)
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<TripartiteScenario> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<ScenarioFile>(&text)?.into_scenario()
}

pub fn save_scenario(s: &TripartiteScenario, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&ScenarioFile::from(s))? + "\n";
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::scenario_counterexample;
    use crate::quantum::pauli::z;

    #[test]
    fn scenario_round_trips_through_json() {
        let mut s = scenario_counterexample();
        s.jumps.push(JumpOperator::new("C", z(), 0.25));
        s.breaking_basis = Some(MeasurementBasis::computational("A", 2));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        save_scenario(&s, &path).unwrap();
        let back = load_scenario(&path).unwrap();
        assert_eq!(back.name, s.name);
        assert_eq!(back.rho0, s.rho0);
        assert_eq!(back.h_ac, s.h_ac);
        assert_eq!(back.jumps, s.jumps);
        assert_eq!(back.breaking_basis, s.breaking_basis);
        assert_eq!(back.sample_times, s.sample_times);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_states() {
        let mut v = serde_json::to_value(ScenarioFile::from(&scenario_counterexample())).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(serde_json::from_value::<ScenarioFile>(v.clone()).is_err());
        v.as_object_mut().unwrap().remove("extra");
        v["rho0"][0][0] = serde_json::json!([2.0, 0.0]);
        let f: ScenarioFile = serde_json::from_value(v).unwrap();
        assert!(matches!(f.into_scenario(), Err(Error::BadTrace { .. })));
    }
}
