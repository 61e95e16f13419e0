//! JSON-facing representations of points, tensors and scenarios. Matrices are row-major.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::complex_norden::ComplexNordenPoint;
use crate::contact_norden::{ClassTag, ContactNordenPoint, FTensor};
use crate::error::{Error, Result};
use crate::hypersurface::{HyperScalars, TimelikeNormalFrame};
use crate::main_class::{MainClassData, NuPair, SolverBranch};
use crate::multilinear::{BilinearForm, Endomorphism, MultilinearForm, Vector};
use crate::tolerance::Tolerance;

pub type Matrix = Vec<Vec<f64>>;

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::DimensionMismatch {
            expected: c,
            got: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Matrix {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

fn expect_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn square(rows: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    let m = matrix_from_rows(rows)?;
    expect_dim(dim, m.nrows())?;
    expect_dim(dim, m.ncols())?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactPointJson {
    pub n: usize,
    pub g: Matrix,
    pub phi: Matrix,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
}

impl ContactPointJson {
    pub fn to_point(&self) -> Result<ContactNordenPoint> {
        let d = 2 * self.n + 1;
        expect_dim(d, self.xi.len())?;
        expect_dim(d, self.eta.len())?;
        ContactNordenPoint::new(
            self.n,
            BilinearForm::new(square(&self.g, d)?)?,
            Endomorphism::new(square(&self.phi, d)?)?,
            Vector::from_vec(self.xi.clone()),
            Vector::from_vec(self.eta.clone()),
        )
    }

    pub fn from_point(p: &ContactNordenPoint) -> Self {
        Self {
            n: p.n(),
            g: matrix_to_rows(p.g().matrix()),
            phi: matrix_to_rows(p.phi().matrix()),
            xi: p.xi().iter().copied().collect(),
            eta: p.eta().iter().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPointJson {
    pub n_prime: usize,
    pub g: Matrix,
    #[serde(rename = "J")]
    pub j: Matrix,
}

impl ComplexPointJson {
    pub fn to_point(&self) -> Result<ComplexNordenPoint> {
        let d = 2 * self.n_prime;
        ComplexNordenPoint::new(
            self.n_prime,
            BilinearForm::new(square(&self.g, d)?)?,
            Endomorphism::new(square(&self.j, d)?)?,
        )
    }

    pub fn from_point(p: &ComplexNordenPoint) -> Self {
        Self {
            n_prime: p.n_prime(),
            g: matrix_to_rows(p.g_prime().matrix()),
            j: matrix_to_rows(p.j().matrix()),
        }
    }
}

/// `F[i][j][k] = F(e_i, e_j, e_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FTensorJson {
    #[serde(rename = "F")]
    pub f: Vec<Matrix>,
}

impl FTensorJson {
    pub fn to_tensor(&self, dim: usize) -> Result<FTensor> {
        expect_dim(dim, self.f.len())?;
        let mut entries = Vec::with_capacity(dim * dim * dim);
        for slab in &self.f {
            let m = square(slab, dim)?;
            for j in 0..dim {
                for k in 0..dim {
                    entries.push(m[(j, k)]);
                }
            }
        }
        FTensor::new(MultilinearForm::from_entries(3, dim, entries)?)
    }

    pub fn from_tensor(f: &FTensor) -> Self {
        let d = f.dim();
        Self {
            f: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| f.get(i, j, k)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// Ambient point, time-like normal, class and scalars of a hypersurface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceScenario {
    pub ambient: ComplexPointJson,
    #[serde(rename = "N")]
    pub normal: Vec<f64>,
    pub class: ClassTag,
    pub scalars: HyperScalars,
    pub nu: f64,
    pub nu_tilde: f64,
}

impl HypersurfaceScenario {
    pub fn frame(&self, tol: &Tolerance) -> Result<TimelikeNormalFrame> {
        TimelikeNormalFrame::new(
            self.ambient.to_point()?,
            Vector::from_vec(self.normal.clone()),
            tol,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainClassScenario {
    pub n: usize,
    pub t: f64,
    #[serde(default)]
    pub dt_xi: f64,
    #[serde(default)]
    pub theta_xi: f64,
    #[serde(default)]
    pub theta_star_xi: f64,
    #[serde(default)]
    pub xi_theta_xi: f64,
    #[serde(default)]
    pub xi_theta_star_xi: f64,
    #[serde(default)]
    pub nu: f64,
    #[serde(default)]
    pub nu_tilde: f64,
    #[serde(default = "plus")]
    pub epsilon: i64,
}

fn plus() -> i64 {
    1
}

impl MainClassScenario {
    pub fn nupair(&self) -> NuPair {
        NuPair {
            nu: self.nu,
            nu_tilde: self.nu_tilde,
        }
    }

    pub fn branch(&self) -> Result<SolverBranch> {
        SolverBranch::from_epsilon(self.epsilon)
    }

    pub fn scalars(&self) -> Result<HyperScalars> {
        Ok(HyperScalars::new(self.t)?
            .with_dt(self.dt_xi)
            .with_thetas(self.theta_xi, self.theta_star_xi)
            .with_xi_derivatives(self.xi_theta_xi, self.xi_theta_star_xi))
    }

    /// Data on the standard point of dimension `2n + 1`.
    pub fn data(&self) -> Result<MainClassData> {
        if self.n == 0 {
            return Err(Error::UnsupportedDimension(1));
        }
        MainClassData::new(ContactNordenPoint::standard(self.n), self.scalars()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_point_round_trip() {
        let p = ContactNordenPoint::standard(2);
        let json = serde_json::to_string(&ContactPointJson::from_point(&p)).unwrap();
        let back: ContactPointJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_point().unwrap(), p);
    }

    #[test]
    fn complex_point_round_trip() {
        let p = ComplexNordenPoint::standard(2);
        let json = serde_json::to_value(ComplexPointJson::from_point(&p)).unwrap();
        assert!(json.get("J").is_some());
        let back: ComplexPointJson = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_point().unwrap(), p);
    }

    #[test]
    fn f_tensor_layout() {
        let d = 3;
        let form =
            MultilinearForm::from_fn(3, d, |ix| (ix[0] * 100 + ix[1] * 10 + ix[2]) as f64).unwrap();
        let f = FTensor::new(form).unwrap();
        let json = FTensorJson::from_tensor(&f);
        assert_eq!(json.f[1][2][0], 120.0);
        assert_eq!(json.to_tensor(d).unwrap(), f);
        assert!(json.to_tensor(5).is_err());
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        assert!(matches!(
            matrix_from_rows(&[vec![1.0, 0.0], vec![1.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn main_class_defaults() {
        let s: MainClassScenario =
            serde_json::from_str(r#"{"n": 1, "t": 0.0, "nu": 1.0}"#).unwrap();
        assert_eq!(s.epsilon, 1);
        assert_eq!(s.branch().unwrap(), SolverBranch::Plus);
        assert!(MainClassScenario { epsilon: 0, ..s }.branch().is_err());
    }

    #[test]
    fn hypersurface_scenario_parses_class_names() {
        let amb = ComplexPointJson::from_point(&ComplexNordenPoint::standard(2));
        let v = serde_json::json!({
            "ambient": amb, "N": [0.0, 0.0, 1.0, 0.0], "class": "F4+F5",
            "scalars": {"t": 0.0, "theta_xi": 1.0}, "nu": 1.0, "nu_tilde": 0.0
        });
        let s: HypersurfaceScenario = serde_json::from_value(v).unwrap();
        assert_eq!(s.class, ClassTag::F4F5);
        assert!(s.frame(&Tolerance::default()).is_ok());
    }
}
