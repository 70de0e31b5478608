//! JSON state files.
//!
//! ```json
//! {"kind":"pure","num_sites":2,"amplitudes":[[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}
//! {"kind":"density","matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState, C64, CONSTRUCTION_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateFile {
    Pure {
        num_sites: usize,
        amplitudes: Vec<[f64; 2]>,
    },
    Density {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num_sites: Option<usize>,
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn num_sites(&self) -> usize {
        match self {
            LoadedState::Pure(p) => p.num_sites(),
            LoadedState::Density(d) => d.num_sites(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(p) => p.density(),
            LoadedState::Density(d) => d.clone(),
        }
    }
}

impl StateFile {
    /// Validates and converts. Pure amplitudes must already be normalized within 1e-9.
    pub fn into_state(self) -> Result<LoadedState> {
        match self {
            StateFile::Pure { num_sites, amplitudes } => {
                let amps: Vec<C64> = amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                if (norm_sqr - 1.0).abs() > CONSTRUCTION_TOL {
                    return Err(Error::NotNormalized(norm_sqr));
                }
                Ok(LoadedState::Pure(PureState::new(amps, num_sites)?))
            }
            StateFile::Density { num_sites, matrix } => {
                let side = matrix.len();
                if matrix.iter().any(|row| row.len() != side) {
                    return Err(Error::Parse("density matrix rows must all have length equal to the row count".into()));
                }
                let m = DMatrix::from_fn(side, side, |i, j| C64::new(matrix[i][j][0], matrix[i][j][1]));
                let rho = match num_sites {
                    Some(n) => DensityMatrix::new(m, n)?,
                    None => DensityMatrix::from_matrix(m)?,
                };
                Ok(LoadedState::Density(rho))
            }
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        StateFile::Pure {
            num_sites: psi.num_sites(),
            amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        StateFile::Density {
            num_sites: Some(rho.num_sites()),
            matrix: (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
        }
    }
}

/// Parses a state file from JSON text.
pub fn parse_state_file(text: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

pub fn state_file_json(file: &StateFile) -> String {
    serde_json::to_string(file).expect("state files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_round_trip() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(r#"{{"kind":"pure","num_sites":2,"amplitudes":[[{s},0],[0,0],[0,0],[{s},0]]}}"#);
        let LoadedState::Pure(psi) = parse_state_file(&text).unwrap() else { panic!("expected pure") };
        assert_eq!(psi.num_sites(), 2);
        let again = parse_state_file(&state_file_json(&StateFile::from_pure(&psi))).unwrap();
        assert_eq!(again, LoadedState::Pure(psi));
    }

    #[test]
    fn density_without_num_sites() {
        let text = r#"{"kind":"density","matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
        let state = parse_state_file(text).unwrap();
        assert_eq!(state.num_sites(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let unnorm = r#"{"kind":"pure","num_sites":1,"amplitudes":[[1,0],[1,0]]}"#;
        assert!(matches!(parse_state_file(unnorm), Err(Error::NotNormalized(_))));
        let non_herm = r#"{"kind":"density","matrix":[[[0.5,0],[0.2,0]],[[0,0],[0.5,0]]]}"#;
        assert!(matches!(parse_state_file(non_herm), Err(Error::NotHermitian(_))));
        assert!(matches!(parse_state_file("{"), Err(Error::Parse(_))));
        let ragged = r#"{"kind":"density","matrix":[[[1,0]],[[0,0],[0,0]]]}"#;
        assert!(matches!(parse_state_file(ragged), Err(Error::Parse(_))));
    }
}
