use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::contact_norden::{ClassTag, ContactNordenPoint, FTensor};
use crate::error::{Error, Result};
use crate::multilinear::{max_abs, Endomorphism, MultilinearForm, Vector};
use crate::tolerance::Tolerance;

/// Scalar data of a hypersurface at a point. `omega` holds the components of `Omega`
/// in the tangent basis; an empty vector means zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperScalars {
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
    #[serde(default, rename = "Omega")]
    pub omega: Vec<f64>,
}

impl HyperScalars {
    pub fn new(t: f64) -> Result<Self> {
        let s = Self {
            t,
            dt_xi: 0.0,
            theta_xi: 0.0,
            theta_star_xi: 0.0,
            xi_theta_xi: 0.0,
            xi_theta_star_xi: 0.0,
            omega: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t.is_nan() || self.t.abs() >= FRAC_PI_2 || self.t.cos() <= 0.0 {
            return Err(Error::InvalidAngle(self.t));
        }
        Ok(())
    }

    pub fn with_dt(mut self, dt_xi: f64) -> Self {
        self.dt_xi = dt_xi;
        self
    }

    pub fn with_thetas(mut self, theta_xi: f64, theta_star_xi: f64) -> Self {
        self.theta_xi = theta_xi;
        self.theta_star_xi = theta_star_xi;
        self
    }

    pub fn with_xi_derivatives(mut self, xi_theta_xi: f64, xi_theta_star_xi: f64) -> Self {
        self.xi_theta_xi = xi_theta_xi;
        self.xi_theta_star_xi = xi_theta_star_xi;
        self
    }

    pub fn with_omega(mut self, omega: &Vector) -> Self {
        self.omega = omega.iter().copied().collect();
        self
    }

    pub fn omega_vec(&self, dim: usize) -> Result<Vector> {
        match self.omega.len() {
            0 => Ok(Vector::zeros(dim)),
            len if len == dim => Ok(Vector::from_column_slice(&self.omega)),
            got => Err(Error::DimensionMismatch { expected: dim, got }),
        }
    }
}

/// A `g`-self-adjoint endomorphism of the tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeOperator(Endomorphism);

impl ShapeOperator {
    pub fn new(point: &ContactNordenPoint, a: Endomorphism, tol: &Tolerance) -> Result<Self> {
        if a.dim() != point.dim() {
            return Err(Error::DimensionMismatch {
                expected: point.dim(),
                got: a.dim(),
            });
        }
        let ga = point.g().matrix() * a.matrix();
        let res = max_abs(&(&ga - ga.transpose()));
        if res > tol.threshold(max_abs(&ga)) {
            return Err(Error::NotSelfAdjoint(res));
        }
        Ok(Self(a))
    }

    pub fn zero(dim: usize) -> Self {
        Self(Endomorphism::zeros(dim))
    }

    pub fn endo(&self) -> &Endomorphism {
        &self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.0.apply(v)
    }
}

/// Shape operator of the given class at a point with the given scalars.
pub fn shape_from_class(
    point: &ContactNordenPoint,
    tag: ClassTag,
    scalars: &HyperScalars,
    tol: &Tolerance,
) -> Result<ShapeOperator> {
    scalars.validate()?;
    let (s, c) = scalars.t.sin_cos();
    let n2 = 2.0 * point.n() as f64;
    let phi = point.phi();
    let phi2 = point.phi2();
    let base = point.eta_xi().scale(-scalars.dt_xi / (2.0 * c));
    let f4 = || (&phi.scale(s) - &phi2.scale(c)).scale(-scalars.theta_xi / n2);
    let f5 = || (&phi.scale(c) + &phi2.scale(s)).scale(scalars.theta_star_xi / n2);
    let a = match tag {
        ClassTag::F0 => base,
        ClassTag::F4 => &base + &f4(),
        ClassTag::F5 => &base + &f5(),
        ClassTag::F4F5 => &(&base + &f4()) + &f5(),
        ClassTag::F11 => {
            let omega_v = scalars.omega_vec(point.dim())?;
            let omega = point.g().lower(&omega_v);
            let phi_omega = phi.apply(&omega_v);
            let omega_phi = phi.matrix().transpose() * &omega;
            let cos_part = &Endomorphism::outer(&omega_v, point.eta())
                + &Endomorphism::outer(point.xi(), &omega);
            let sin_part = &Endomorphism::outer(&phi_omega, point.eta())
                + &Endomorphism::outer(point.xi(), &omega_phi);
            &(&base - &cos_part.scale(c)) - &sin_part.scale(s)
        }
        ClassTag::F6 => return Err(Error::NotConstructive(tag)),
    };
    ShapeOperator::new(point, a, tol)
}

/// Max residual of `A phi = phi A`, `tr A - dt(xi) / (2 cos t) = 0` and `tr(A phi) = 0`.
pub fn validate_f6_shape(
    point: &ContactNordenPoint,
    a: &ShapeOperator,
    scalars: &HyperScalars,
) -> f64 {
    let am = a.endo().matrix();
    let phi = point.phi().matrix();
    let commute = max_abs(&(am * phi - phi * am));
    let trace = (am.trace() - scalars.dt_xi / (2.0 * scalars.t.cos())).abs();
    let trace_phi = (am * phi).trace().abs();
    commute.max(trace).max(trace_phi)
}

/// `F(x, y, z) = sin t {g(Ax, phi y) eta(z) + g(Ax, phi z) eta(y)}
///   - cos t {g(Ax, y) eta(z) + g(Ax, z) eta(y) - 2 eta(Ax) eta(y) eta(z)}`.
pub fn f_from_a(point: &ContactNordenPoint, a: &ShapeOperator, t: f64) -> FTensor {
    let (s, c) = t.sin_cos();
    let am = a.endo().matrix();
    // ga[(x, y)] = g(A e_x, e_y), gap[(x, y)] = g(A e_x, phi e_y)
    let ga = am.transpose() * point.g().matrix();
    let gap = am.transpose() * point.g_phi();
    let eta = point.eta();
    let eta_a = am.transpose() * eta;
    let form = MultilinearForm::from_fn(3, point.dim(), |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        s * (gap[(x, y)] * eta[z] + gap[(x, z)] * eta[y])
            - c * (ga[(x, y)] * eta[z] + ga[(x, z)] * eta[y] - 2.0 * eta_a[x] * eta[y] * eta[z])
    })
    .expect("supported dimension");
    FTensor::new(form).expect("rank 3")
}
