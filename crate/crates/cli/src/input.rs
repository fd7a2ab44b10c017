//! System files: a name plus exactly one of a state-space, rational or
//! pole/residue description.

use std::path::Path;

use nalgebra::DMatrix;
use passive_spectra::synth::{pole_residue_from_rational, realize_rational, symmetric_from_pole_residue};
use passive_spectra::{PoleResidue, RationalFunction, Realization};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub name: String,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<f64>>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residues: Option<Vec<f64>>,
}

/// A validated system description.
#[derive(Debug, Clone)]
pub enum System {
    StateSpace(Realization),
    Rational(RationalFunction),
    PoleResidue(PoleResidue),
}

#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub name: String,
    pub system: System,
}

pub fn matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CliError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(CliError::Input(format!("matrix {what} is empty")));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Input(format!("matrix {what} is not rectangular")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("matrix {what} has non-finite entries")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl SystemFile {
    pub fn into_system(self) -> Result<LoadedSystem, CliError> {
        let state_space = [&self.a, &self.b, &self.c, &self.d].map(Option::is_some);
        let rational = [self.num.is_some(), self.den.is_some()];
        let pole_residue = [self.g_inf.is_some(), self.poles.is_some(), self.residues.is_some()];

        let groups = [
            ("A, B, C, D", state_space.iter().filter(|&&x| x).count(), 4),
            ("num, den", rational.iter().filter(|&&x| x).count(), 2),
            ("g_inf, poles, residues", pole_residue.iter().filter(|&&x| x).count(), 3),
        ];
        if let Some((fields, _, _)) = groups.iter().find(|(_, k, all)| *k > 0 && k < all) {
            return Err(CliError::Input(format!(
                "incomplete representation: need all of {fields}"
            )));
        }
        let present = groups.iter().filter(|(_, k, _)| *k > 0).count();
        if present != 1 {
            return Err(CliError::Input(format!(
                "expected exactly one system representation, found {present}"
            )));
        }

        let system = if let (Some(a), Some(b), Some(c), Some(d)) = (&self.a, &self.b, &self.c, &self.d) {
            System::StateSpace(Realization::new(
                matrix(a, "A")?,
                matrix(b, "B")?,
                matrix(c, "C")?,
                matrix(d, "D")?,
            )?)
        } else if let (Some(num), Some(den)) = (self.num, self.den) {
            System::Rational(RationalFunction::new(num, den)?)
        } else {
            let (g_inf, poles, residues) = (self.g_inf.unwrap(), self.poles.unwrap(), self.residues.unwrap());
            System::PoleResidue(PoleResidue::new(g_inf, poles, residues)?)
        };
        Ok(LoadedSystem {
            name: self.name,
            system,
        })
    }
}

impl LoadedSystem {
    pub fn realization(&self) -> Result<Realization, CliError> {
        Ok(match &self.system {
            System::StateSpace(r) => r.clone(),
            System::Rational(f) => realize_rational(f)?,
            System::PoleResidue(pr) => symmetric_from_pole_residue(pr),
        })
    }

    /// The scalar transfer function; state-space input must be SISO.
    pub fn rational(&self) -> Result<RationalFunction, CliError> {
        Ok(match &self.system {
            System::StateSpace(r) => {
                if !r.is_siso() {
                    return Err(passive_spectra::Error::NotSiso { m: r.m() }.into());
                }
                r.transfer_function()?
            }
            System::Rational(f) => f.clone(),
            System::PoleResidue(pr) => pr.to_rational()?,
        })
    }

    pub fn pole_residue(&self) -> Result<PoleResidue, CliError> {
        match &self.system {
            System::PoleResidue(pr) => Ok(pr.clone()),
            _ => Ok(pole_residue_from_rational(&self.rational()?)?),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<LoadedSystem, CliError> {
    read_json::<SystemFile>(path)?.into_system()
}

/// A bare row-major matrix, e.g. `[[1, 0], [0, 1]]`.
pub fn load_matrix(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let rows: Vec<Vec<f64>> = read_json(path)?;
    matrix(&rows, &path.display().to_string())
}
