//! The fundamental tensor `F(x, y, z) = g((nabla_x phi) y, z)`, its 1-forms and class forms.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ContactNordenPoint;
use crate::error::{Error, Result};
use crate::multilinear::{MultilinearForm, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    F0,
    F4,
    F5,
    F6,
    F11,
    #[serde(rename = "F4+F5", alias = "F4⊕F5", alias = "F45")]
    F4F5,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::F0 => "F0",
            ClassTag::F4 => "F4",
            ClassTag::F5 => "F5",
            ClassTag::F6 => "F6",
            ClassTag::F11 => "F11",
            ClassTag::F4F5 => "F4+F5",
        };
        f.write_str(s)
    }
}

impl ClassTag {
    pub const ALL: [ClassTag; 6] = [
        ClassTag::F0,
        ClassTag::F4,
        ClassTag::F5,
        ClassTag::F6,
        ClassTag::F11,
        ClassTag::F4F5,
    ];
}

/// Rank-3 tensor symmetric in its last two slots.
#[derive(Debug, Clone, PartialEq)]
pub struct FTensor(MultilinearForm);

impl FTensor {
    /// Wraps a rank-3 form. Symmetry is not enforced; see [`FTensor::symmetry_residual`].
    pub fn new(form: MultilinearForm) -> Result<Self> {
        if form.rank() != 3 {
            return Err(Error::UnsupportedRank(form.rank()));
        }
        Ok(Self(form))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Ok(Self(MultilinearForm::zeros(3, dim)?))
    }

    pub fn form(&self) -> &MultilinearForm {
        &self.0
    }

    pub fn into_form(self) -> MultilinearForm {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.0.get(&[x, y, z])
    }

    pub fn symmetry_residual(&self) -> f64 {
        (&self.0 - &self.0.permuted(&[0, 2, 1])).max_abs()
    }

    /// Matrix of `F(e_a, e_b, v)`.
    pub fn contract_last(&self, v: &Vector) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |a, b| (0..d).map(|k| self.get(a, b, k) * v[k]).sum())
    }
}

impl std::ops::Add for &FTensor {
    type Output = FTensor;
    fn add(self, rhs: &FTensor) -> FTensor {
        FTensor(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &FTensor {
    type Output = FTensor;
    fn sub(self, rhs: &FTensor) -> FTensor {
        FTensor(&self.0 - &rhs.0)
    }
}

/// Components of `theta`, `theta*`, `omega` together with `theta(xi)` and `theta*(xi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneForms {
    pub theta: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub omega: Vec<f64>,
    pub theta_xi: f64,
    pub theta_star_xi: f64,
}

impl OneForms {
    /// Parameters of the class forms: `theta = theta(xi) eta`, `theta* = theta*(xi) eta`
    /// and the given `omega`.
    pub fn from_scalars(
        point: &ContactNordenPoint,
        theta_xi: f64,
        theta_star_xi: f64,
        omega: &Vector,
    ) -> Self {
        let eta = point.eta();
        Self {
            theta: (eta * theta_xi).iter().copied().collect(),
            theta_star: (eta * theta_star_xi).iter().copied().collect(),
            omega: omega.iter().copied().collect(),
            theta_xi,
            theta_star_xi,
        }
    }

    pub fn zero(point: &ContactNordenPoint) -> Self {
        Self::from_scalars(point, 0.0, 0.0, &Vector::zeros(point.dim()))
    }

    pub fn omega_vec(&self) -> Vector {
        Vector::from_column_slice(&self.omega)
    }
}

pub fn one_forms(f: &FTensor, point: &ContactNordenPoint) -> OneForms {
    let d = point.dim();
    let gi = point.g_inv().matrix();
    let phi = point.phi().matrix();
    let xi = point.xi();
    let mut theta = vec![0.0; d];
    let mut theta_star = vec![0.0; d];
    let mut omega = vec![0.0; d];
    for z in 0..d {
        for i in 0..d {
            for j in 0..d {
                theta[z] += gi[(i, j)] * f.get(i, j, z);
                // F(e_i, phi e_j, z) = sum_k phi[k, j] F(e_i, e_k, z)
                let fphi: f64 = (0..d).map(|k| phi[(k, j)] * f.get(i, k, z)).sum();
                theta_star[z] += gi[(i, j)] * fphi;
                omega[z] += xi[i] * xi[j] * f.get(i, j, z);
            }
        }
    }
    let theta_xi = (0..d).map(|k| theta[k] * xi[k]).sum();
    let theta_star_xi = (0..d).map(|k| theta_star[k] * xi[k]).sum();
    OneForms {
        theta,
        theta_star,
        omega,
        theta_xi,
        theta_star_xi,
    }
}

/// `h(x, y) eta(z) + h(x, z) eta(y)` for a bilinear matrix `h`.
fn symmetrized_with_eta(h: &DMatrix<f64>, eta: &Vector) -> MultilinearForm {
    MultilinearForm::from_fn(3, h.nrows(), |ix| {
        h[(ix[0], ix[1])] * eta[ix[2]] + h[(ix[0], ix[2])] * eta[ix[1]]
    })
    .expect("supported dimension")
}

fn f4(point: &ContactNordenPoint, theta_xi: f64) -> MultilinearForm {
    let c = -theta_xi / (2.0 * point.n() as f64);
    c * symmetrized_with_eta(&point.g_phi_phi(), point.eta())
}

fn f5(point: &ContactNordenPoint, theta_star_xi: f64) -> MultilinearForm {
    let c = -theta_star_xi / (2.0 * point.n() as f64);
    c * symmetrized_with_eta(&point.g_phi(), point.eta())
}

fn f11(point: &ContactNordenPoint, omega: &Vector) -> MultilinearForm {
    let eta = point.eta();
    MultilinearForm::from_fn(3, point.dim(), |ix| {
        eta[ix[0]] * (eta[ix[1]] * omega[ix[2]] + eta[ix[2]] * omega[ix[1]])
    })
    .expect("supported dimension")
}

/// Closed-form representative of `tag` with the given parameters.
pub fn class_form(tag: ClassTag, point: &ContactNordenPoint, params: &OneForms) -> Result<FTensor> {
    let d = point.dim();
    if params.omega.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: params.omega.len(),
        });
    }
    let form = match tag {
        ClassTag::F0 => MultilinearForm::zeros(3, d)?,
        ClassTag::F4 => f4(point, params.theta_xi),
        ClassTag::F5 => f5(point, params.theta_star_xi),
        ClassTag::F11 => f11(point, &params.omega_vec()),
        ClassTag::F4F5 => f4(point, params.theta_xi) + f5(point, params.theta_star_xi),
        ClassTag::F6 => return Err(Error::NotConstructive(tag)),
    };
    Ok(FTensor(form))
}

/// Max-norm distance from `F` to the class; zero (within tolerance) iff `F` is in the class.
pub fn class_residual(f: &FTensor, point: &ContactNordenPoint, tag: ClassTag) -> f64 {
    if f.dim() != point.dim() {
        return f64::INFINITY;
    }
    if tag == ClassTag::F6 {
        return f6_residual(f, point);
    }
    let params = one_forms(f, point);
    let rep = class_form(tag, point, &params).expect("constructive tag");
    f.form().max_abs_diff(rep.form())
}

fn f6_residual(f: &FTensor, point: &ContactNordenPoint) -> f64 {
    let d = point.dim();
    let params = one_forms(f, point);
    let traces = params.theta_xi.abs().max(params.theta_star_xi.abs());

    let fxi = f.contract_last(point.xi());
    let sym = crate::multilinear::max_abs(&(&fxi - fxi.transpose()));
    let phi = point.phi().matrix();
    let anti = crate::multilinear::max_abs(&(phi.transpose() * &fxi * phi + &fxi));

    let xi = point.xi();
    let eta = point.eta();
    let mut split: f64 = 0.0;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let f_x_xi_z: f64 = (0..d).map(|k| xi[k] * f.get(x, k, z)).sum();
                let rhs = fxi[(x, y)] * eta[z] + f_x_xi_z * eta[y];
                split = split.max((f.get(x, y, z) - rhs).abs());
            }
        }
    }
    traces.max(sym).max(anti).max(split)
}
