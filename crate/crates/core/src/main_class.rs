//! The main class F4 ⊕ F5 of real time-like hypersurfaces: curvature in closed
//! form, the canonical curvature, the relations fixing the ambient totally real
//! sectional curvatures and their inversion for constant `t`.

use serde::{Deserialize, Serialize};

use crate::contact_norden::{ContactNordenPoint, PiTensors};
use crate::error::{Error, Result};
use crate::hypersurface::{scalar_curvatures, HyperScalars, ScalarCurvatures, ShapeOperator};
use crate::multilinear::{MultilinearForm, Vector, VectorMap};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct MainClassData {
    pub point: ContactNordenPoint,
    pub scalars: HyperScalars,
}

impl MainClassData {
    pub fn new(point: ContactNordenPoint, scalars: HyperScalars) -> Result<Self> {
        scalars.validate()?;
        Ok(Self { point, scalars })
    }

    fn n(&self) -> f64 {
        self.point.n() as f64
    }

    /// `theta(xi) cos t + theta*(xi) sin t`.
    fn p(&self) -> f64 {
        let (s, c) = self.scalars.t.sin_cos();
        self.scalars.theta_xi * c + self.scalars.theta_star_xi * s
    }

    /// `theta(xi) sin t - theta*(xi) cos t`.
    fn q(&self) -> f64 {
        let (s, c) = self.scalars.t.sin_cos();
        self.scalars.theta_xi * s - self.scalars.theta_star_xi * c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuPair {
    pub nu: f64,
    pub nu_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaMu {
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverBranch {
    Plus,
    Minus,
}

impl SolverBranch {
    pub fn from_epsilon(epsilon: i64) -> Result<Self> {
        match epsilon {
            1 => Ok(SolverBranch::Plus),
            -1 => Ok(SolverBranch::Minus),
            other => Err(Error::BadIndex(other.unsigned_abs() as usize)),
        }
    }

    pub fn epsilon(self) -> f64 {
        match self {
            SolverBranch::Plus => 1.0,
            SolverBranch::Minus => -1.0,
        }
    }
}

/// Reading of the constant coefficient of `pi1 - pi2` in the closed form of the canonical
/// curvature: `nu' + theta*(xi) / 4n^2` or `nu' + theta*(xi)^2 / 4n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cor32Reading {
    Literal,
    Squared,
}

impl Cor32Reading {
    pub const ALL: [Cor32Reading; 2] = [Cor32Reading::Literal, Cor32Reading::Squared];

    pub fn name(self) -> &'static str {
        match self {
            Cor32Reading::Literal => "literal",
            Cor32Reading::Squared => "squared",
        }
    }
}

/// `A = -dt(xi)/(2 cos t) eta ⊗ xi - 1/2n {[theta sin t - theta* cos t] phi - [theta cos t + theta* sin t] phi^2}`.
pub fn shape_f45(data: &MainClassData, tol: &Tolerance) -> Result<ShapeOperator> {
    let p = &data.point;
    let c = data.scalars.t.cos();
    let n2 = 2.0 * data.n();
    let base = p.eta_xi().scale(-data.scalars.dt_xi / (2.0 * c));
    let rest = &p.phi().scale(data.q()) - &p.phi2().scale(data.p());
    ShapeOperator::new(p, &base - &rest.scale(1.0 / n2), tol)
}

/// `(tr A, tr(A o phi))` in closed form.
pub fn shape_f45_traces(data: &MainClassData) -> (f64, f64) {
    let c = data.scalars.t.cos();
    (-data.scalars.dt_xi / (2.0 * c) - data.p(), data.q())
}

#[derive(Debug, Clone)]
pub struct CurvatureF45 {
    pub r: MultilinearForm,
    pub scalars: ScalarCurvatures,
    pub k_phi_hol: f64,
    pub k_totally_real: f64,
}

/// Curvature tensor, scalar curvatures and the special sectional curvatures of an F4 ⊕ F5
/// hypersurface in closed form.
pub fn curvature_f45(data: &MainClassData, nupair: NuPair) -> CurvatureF45 {
    let pis = PiTensors::new(&data.point);
    let sc = &data.scalars;
    let (s, c) = sc.t.sin_cos();
    let tan = sc.t.tan();
    let n = data.n();
    let (th, ths, dt) = (sc.theta_xi, sc.theta_star_xi, sc.dt_xi);
    let (p, q) = (data.p(), data.q());
    let (nu, nut) = (nupair.nu, nupair.nu_tilde);
    let nn4 = 4.0 * n * n;

    let ambient =
        nu * (&(&pis.p1 - &pis.p2) - &pis.p5.scaled(tan)) + nut * (&pis.p3 - &pis.p4.scaled(tan));
    let dt_part = (th * (s * &pis.p5 + c * &pis.p4) + ths * (s * &pis.p4 - c * &pis.p5))
        .scaled(dt / (4.0 * n * c));
    let r = ambient
        - dt_part
        - pis.p2.scaled((th * th + ths * ths) / nn4)
        - pis.kaehler_a().scaled(p * p / nn4)
        + pis.kaehler_b().scaled(p * q / nn4);

    let tau = 4.0 * n * (n * nu - nut * tan)
        - dt * th
        - dt * ths * tan
        - (n - 1.0) / n * p * p
        - (th * th + ths * ths) / (2.0 * n);
    let tau_tilde = 2.0 * n * (2.0 * n - 1.0) * nut + 2.0 * n * nu * tan + dt * th / 2.0 * tan
        - dt * ths / 2.0
        + (n - 1.0) / n * q * p;
    CurvatureF45 {
        r,
        scalars: ScalarCurvatures { tau, tau_tilde },
        k_phi_hol: -(th * th + ths * ths) / nn4,
        k_totally_real: nu - p * p / nn4,
    }
}

/// `T(x, y) = theta/2n {g(x, phi y) xi - eta(y) phi x} - theta*/2n {g(phi x, phi y) xi - eta(y) phi^2 x}`.
pub fn canonical_difference_f45(data: &MainClassData) -> VectorMap {
    let p = &data.point;
    let n2 = 2.0 * data.n();
    let (th, ths) = (data.scalars.theta_xi / n2, data.scalars.theta_star_xi / n2);
    let gp = p.g_phi();
    let gpp = p.g_phi_phi();
    let phi = p.phi().matrix();
    let phi2 = p.phi2();
    let phi2 = phi2.matrix();
    let (xi, eta) = (p.xi(), p.eta());
    VectorMap::from_fn(p.dim(), |k, i, j| {
        th * (gp[(i, j)] * xi[k] - eta[j] * phi[(k, i)])
            - ths * (gpp[(i, j)] * xi[k] - eta[j] * phi2[(k, i)])
    })
}

/// Canonical curvature of an F4⁰ ⊕ F5⁰ hypersurface from its curvature tensor `r`.
pub fn k_f45_0(data: &MainClassData, r: &MultilinearForm) -> MultilinearForm {
    let pis = PiTensors::new(&data.point);
    let sc = &data.scalars;
    let n = data.n();
    let nn4 = 4.0 * n * n;
    let (th, ths) = (sc.theta_xi, sc.theta_star_xi);
    r + &(pis.p5.scaled(sc.xi_theta_xi / (2.0 * n))
        + pis.p4.scaled(sc.xi_theta_star_xi / (2.0 * n))
        + (&pis.p2 - &pis.p4).scaled(th * th / nn4)
        + pis.p1.scaled(ths * ths / nn4)
        - (&pis.p3 - &pis.p5).scaled(th * ths / nn4))
}

/// Closed form of the canonical curvature in terms of `nu'`, `nu~'` and the scalars.
pub fn k_cor32(data: &MainClassData, nupair: NuPair, reading: Cor32Reading) -> MultilinearForm {
    let pis = PiTensors::new(&data.point);
    let sc = &data.scalars;
    let tan = sc.t.tan();
    let n = data.n();
    let nn4 = 4.0 * n * n;
    let (th, ths, dt) = (sc.theta_xi, sc.theta_star_xi, sc.dt_xi);
    let (xth, xths) = (sc.xi_theta_xi, sc.xi_theta_star_xi);
    let (p, q) = (data.p(), data.q());
    let (nu, nut) = (nupair.nu, nupair.nu_tilde);
    let first = match reading {
        Cor32Reading::Literal => nu + ths / nn4,
        Cor32Reading::Squared => nu + ths * ths / nn4,
    };
    let c4 = nut * tan + dt * th / (4.0 * n) + dt * ths / (4.0 * n) * tan - xths / (2.0 * n)
        + th * th / nn4;
    let c5 = nu * tan + dt * th / (4.0 * n) * tan
        - dt * ths / (4.0 * n)
        - xth / (2.0 * n)
        - th * ths / nn4;
    (&pis.p1 - &pis.p2).scaled(first) + pis.p3.scaled(nut - th * ths / nn4)
        - pis.p4.scaled(c4)
        - pis.p5.scaled(c5)
        - pis.kaehler_a().scaled(p * p / nn4)
        + pis.kaehler_b().scaled(q * p / nn4)
}

/// `nu'` and `nu~'` determined by the scalars of an F4 ⊕ F5 hypersurface.
pub fn nu_from_scalars(data: &MainClassData) -> NuPair {
    let sc = &data.scalars;
    let (s, c) = sc.t.sin_cos();
    let n = data.n();
    let nn4 = 4.0 * n * n;
    let (th, ths, dt) = (sc.theta_xi, sc.theta_star_xi, sc.dt_xi);
    let (xth, xths) = (sc.xi_theta_xi, sc.xi_theta_star_xi);
    let nu = -dt * th / (4.0 * n)
        + c / (2.0 * n) * (xth * s - xths * c)
        + c * c / nn4 * (th * th - ths * ths)
        + s * c / (2.0 * n * n) * th * ths
        + dt / (2.0 * n) * c * data.p();
    let nu_tilde = -dt * ths / (4.0 * n)
        + c / (2.0 * n) * (xth * c + xths * s)
        + s * c / nn4 * (ths * ths - th * th)
        + c * c / (2.0 * n * n) * th * ths
        - dt / (2.0 * n) * c * data.q();
    NuPair { nu, nu_tilde }
}

pub fn lambda_mu(data: &MainClassData) -> LambdaMu {
    let sc = &data.scalars;
    let (s, c) = sc.t.sin_cos();
    let n = data.n();
    let (th, ths, dt) = (sc.theta_xi, sc.theta_star_xi, sc.dt_xi);
    let (xth, xths) = (sc.xi_theta_xi, sc.xi_theta_star_xi);
    LambdaMu {
        lambda: -dt * th / (4.0 * n)
            + dt / (2.0 * n) * c * data.p()
            + c / (2.0 * n) * (xth * s - xths * c),
        mu: -dt * ths / (4.0 * n) - dt / (2.0 * n) * c * data.q()
            + c / (2.0 * n) * (xth * c + xths * s),
    }
}

/// `lambda [pi1 - pi2 - pi4] + mu [pi3 + pi5]`.
pub fn k_lambda_mu(data: &MainClassData) -> MultilinearForm {
    let pis = PiTensors::new(&data.point);
    let lm = lambda_mu(data);
    pis.kaehler_a().scaled(lm.lambda) + pis.kaehler_b().scaled(lm.mu)
}

/// Curvature tensor in terms of `lambda`, `mu` and the scalars.
pub fn r_lambda_mu(data: &MainClassData) -> MultilinearForm {
    let pis = PiTensors::new(&data.point);
    let sc = &data.scalars;
    let n = data.n();
    let nn4 = 4.0 * n * n;
    let (th, ths) = (sc.theta_xi, sc.theta_star_xi);
    k_lambda_mu(data)
        - pis.p4.scaled(sc.xi_theta_star_xi / (2.0 * n))
        - pis.p5.scaled(sc.xi_theta_xi / (2.0 * n))
        - pis.p1.scaled(ths * ths / nn4)
        - (&pis.p2 - &pis.p4).scaled(th * th / nn4)
        + (&pis.p3 - &pis.p5).scaled(th * ths / nn4)
}

/// `nu' cos t - nu~' sin t + sqrt(nu'^2 + nu~'^2)`, never negative.
pub fn solver_radicand(nupair: NuPair, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    nupair.nu * c - nupair.nu_tilde * s + nupair.nu.hypot(nupair.nu_tilde)
}

/// `(theta(xi), theta*(xi))` of an F4 ⊕ F5 hypersurface with constant `t` over an ambient
/// with the given totally real sectional curvatures.
pub fn solve_theta(
    nupair: NuPair,
    t: f64,
    branch: SolverBranch,
    n: usize,
    tol: &Tolerance,
) -> Result<(f64, f64)> {
    HyperScalars::new(t)?;
    if n == 0 {
        return Err(Error::UnsupportedDimension(1));
    }
    let rad = solver_radicand(nupair, t);
    if rad.is_nan() || rad <= 100.0 * tol.abs_tol {
        let flat = nupair.nu.abs() <= tol.abs_tol && nupair.nu_tilde.abs() <= tol.abs_tol;
        return Err(Error::DegenerateFlat {
            radicand: rad,
            resolution: flat.then_some((0.0, 0.0)),
        });
    }
    let c = t.cos();
    let scale = 2.0 * branch.epsilon() * n as f64;
    let theta = scale * (rad / (2.0 * c)).sqrt();
    let theta_star =
        scale * c.sqrt() * (nupair.nu * t.tan() + nupair.nu_tilde) / (2.0 * rad).sqrt();
    Ok((theta, theta_star))
}

/// The curvature data of an F4⁰ ⊕ F5⁰ hypersurface with constant `t`.
#[derive(Debug, Clone)]
pub struct Theorem31 {
    pub theta_xi: f64,
    pub theta_star_xi: f64,
    /// Max-norm of the canonical curvature built from the relations with vanishing derivatives.
    pub k_residual: f64,
    pub r: MultilinearForm,
    pub tau: f64,
    pub tau_tilde: f64,
    pub tau_contracted: ScalarCurvatures,
    pub k_phi_hol: f64,
    pub k_totally_real: f64,
    n: usize,
    point: ContactNordenPoint,
}

impl Theorem31 {
    /// `k(xi, x) = (theta^2 - theta*^2)/4n^2 + 2 theta theta*/4n^2 g(x, phi x)/g(phi x, phi x)`.
    pub fn k_xi(&self, x: &Vector, tol: &Tolerance) -> Result<f64> {
        let phix = self.point.phi().apply(x);
        let den = self.point.g().apply(&phix, &phix);
        if den.abs() <= tol.abs_tol {
            return Err(Error::DegenerateSection(den));
        }
        let nn4 = 4.0 * (self.n * self.n) as f64;
        let (th, ths) = (self.theta_xi, self.theta_star_xi);
        Ok((th * th - ths * ths) / nn4
            + 2.0 * th * ths / nn4 * self.point.g().apply(x, &phix) / den)
    }
}

/// Evaluates the constant-`t` curvature data. `tau~ = theta(xi) theta*(xi)` is the value
/// obtained by contraction of `R`.
pub fn theorem31(
    point: &ContactNordenPoint,
    t: f64,
    theta_xi: f64,
    theta_star_xi: f64,
    reading: Cor32Reading,
) -> Result<Theorem31> {
    let scalars = HyperScalars::new(t)?.with_thetas(theta_xi, theta_star_xi);
    let data = MainClassData::new(point.clone(), scalars)?;
    let nupair = nu_from_scalars(&data);
    let k_residual = k_cor32(&data, nupair, reading).max_abs();

    let pis = PiTensors::new(point);
    let n = point.n() as f64;
    let nn4 = 4.0 * n * n;
    let (th, ths) = (theta_xi, theta_star_xi);
    let r = (&pis.p4 - &pis.p2).scaled(th * th / nn4) - pis.p1.scaled(ths * ths / nn4)
        + (&pis.p3 - &pis.p5).scaled(th * ths / nn4);
    let tau_contracted = scalar_curvatures(&r, point)?;
    Ok(Theorem31 {
        theta_xi,
        theta_star_xi,
        k_residual,
        tau: th * th / (2.0 * n) - (2.0 * n + 1.0) * ths * ths / (2.0 * n),
        tau_tilde: th * ths,
        tau_contracted,
        k_phi_hol: -(th * th + ths * ths) / nn4,
        k_totally_real: -ths * ths / nn4,
        r,
        n: point.n(),
        point: point.clone(),
    })
}
