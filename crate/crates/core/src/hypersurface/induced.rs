use nalgebra::DMatrix;

use super::HyperScalars;
use crate::complex_norden::{pi_prime, ComplexNordenPoint};
use crate::contact_norden::{validate_contact_axioms, ContactNordenPoint, PiTensors};
use crate::error::{Error, Result};
use crate::multilinear::{
    independent, invert_metric, max_abs, BilinearForm, Endomorphism, MultilinearForm, Vector,
};
use crate::report::{Check, ValidationReport};
use crate::tolerance::Tolerance;

/// Ambient point with a unit time-like normal, `g'(N, N) = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelikeNormalFrame {
    ambient: ComplexNordenPoint,
    normal: Vector,
}

impl TimelikeNormalFrame {
    pub fn new(ambient: ComplexNordenPoint, normal: Vector, tol: &Tolerance) -> Result<Self> {
        if normal.len() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                got: normal.len(),
            });
        }
        let nn = ambient.g_prime().apply(&normal, &normal);
        if (nn + 1.0).abs() > tol.threshold(1.0) {
            return Err(Error::NotTimelike(nn));
        }
        Ok(Self { ambient, normal })
    }

    pub fn ambient(&self) -> &ComplexNordenPoint {
        &self.ambient
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    /// `J N`.
    pub fn jn(&self) -> Vector {
        self.ambient.j().apply(&self.normal)
    }

    /// `t = arctan g'(N, JN)`.
    pub fn angle(&self) -> f64 {
        self.ambient
            .g_prime()
            .apply(&self.normal, &self.jn())
            .atan()
    }
}

/// The almost contact structure induced on the tangent space of the hypersurface.
///
/// `tangent_basis` holds the ambient coordinates of the tangent basis as columns,
/// and `point` is the structure expressed in that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedStructure {
    pub frame: TimelikeNormalFrame,
    pub t: f64,
    pub tangent_basis: DMatrix<f64>,
    pub point: ContactNordenPoint,
}

impl InducedStructure {
    /// Ambient coordinates of a tangent vector.
    pub fn embed(&self, v: &Vector) -> Vector {
        &self.tangent_basis * v
    }

    pub fn xi_ambient(&self) -> Vector {
        self.embed(self.point.xi())
    }

    /// Invariant checks: tangency, the angle, the ambient form of `xi` and the contact axioms.
    pub fn validate(&self, tol: &Tolerance) -> ValidationReport {
        let g = self.frame.ambient.g_prime().matrix();
        let n = &self.frame.normal;
        let mut report = ValidationReport::default();
        let tangency = (self.tangent_basis.transpose() * g * n).amax();
        report.push(Check::new(
            "tangent_orthogonal_to_normal",
            tangency,
            tol.threshold(1.0),
        ));
        report.push(Check::new(
            "angle",
            (self.t - self.frame.angle()).abs(),
            tol.threshold(self.t),
        ));
        let want = n * self.t.sin() + self.frame.jn() * self.t.cos();
        report.push(Check::new(
            "xi_ambient",
            (self.xi_ambient() - want).amax(),
            tol.threshold(1.0),
        ));
        for c in validate_contact_axioms(&self.point, tol).checks {
            report.push(Check {
                name: format!("contact.{}", c.name),
                ..c
            });
        }
        report
    }
}

/// Builds the tangent basis by projecting the ambient basis onto `N`-perp and keeping a
/// linearly independent subset, then expresses `phi`, `xi`, `eta`, `g` in it.
pub fn induce(frame: &TimelikeNormalFrame, tol: &Tolerance) -> Result<InducedStructure> {
    let ambient = &frame.ambient;
    let dp = ambient.dim();
    if ambient.n_prime() < 2 {
        return Err(Error::UnsupportedDimension(dp));
    }
    let d = dp - 1;
    let gp = ambient.g_prime().matrix();
    let nvec = &frame.normal;
    let jn = frame.jn();
    let t = frame.angle();
    let (s, c) = t.sin_cos();

    let mut chosen: Vec<Vector> = Vec::with_capacity(d);
    for k in 0..dp {
        let e = Vector::from_fn(dp, |i, _| (i == k) as u8 as f64);
        let proj = &e + nvec * (e.transpose() * gp * nvec)[0];
        let mut trial: Vec<&Vector> = chosen.iter().collect();
        trial.push(&proj);
        if independent(&trial, 1e-8) {
            chosen.push(proj);
        }
        if chosen.len() == d {
            break;
        }
    }
    if chosen.len() != d {
        return Err(Error::DegenerateTangentMetric);
    }
    let b = DMatrix::from_fn(dp, d, |i, j| chosen[j][i]);
    let gram = b.transpose() * gp * &b;
    let gram_form = BilinearForm::new(gram.clone())?;
    let gram_inv = invert_metric(&gram_form, tol).map_err(|_| Error::DegenerateTangentMetric)?;
    // coordinates of a tangent ambient vector v: G^{-1} B^T g' v
    let coords = gram_inv.matrix() * b.transpose() * gp;

    let gjn = gp * &jn;
    let correction = (nvec * c - &jn * s) * c;
    let phi_amb = ambient.j().matrix() + &correction * gjn.transpose();
    let phi = &coords * phi_amb * &b;
    let xi_amb = nvec * s + &jn * c;
    let xi = &coords * xi_amb;
    let eta = b.transpose() * &gjn * c;
    let n = ambient.n_prime() - 1;
    let point = ContactNordenPoint::new(n, gram_form, Endomorphism::new(phi)?, xi, eta)?;
    Ok(InducedStructure {
        frame: frame.clone(),
        t,
        tangent_basis: b,
        point,
    })
}

/// Max relative residual of the relations between the ambient tensors restricted to the
/// hypersurface and the hypersurface tensors:
/// `g'(y, Jz) = g(y, phi z) + tan t eta(y) eta(z)`, `pi'_1 = pi_1`,
/// `pi'_2 = pi_2 + tan t pi_5`, `pi'_3 = pi_3 - tan t pi_4`.
pub fn pi_relations_residual(structure: &InducedStructure) -> f64 {
    let ambient = structure.frame.ambient();
    let b = &structure.tangent_basis;
    let p = &structure.point;
    let tan = structure.t.tan();
    let pis = PiTensors::new(p);
    let lhs = b.transpose() * ambient.g_j() * b;
    let rhs = p.g_phi() + p.eta() * p.eta().transpose() * tan;
    let mut worst = max_abs(&(&lhs - &rhs)) / 1f64.max(max_abs(&lhs)).max(max_abs(&rhs));
    let rel = |i: usize, want: &MultilinearForm| {
        let got = pi_prime(i, ambient)
            .expect("valid index")
            .pullback(b)
            .expect("matching dimension");
        got.max_abs_diff(want) / 1f64.max(got.max_abs()).max(want.max_abs())
    };
    worst = worst.max(rel(1, &pis.p1));
    worst = worst.max(rel(2, &(&pis.p2 + &pis.p5.scaled(tan))));
    worst = worst.max(rel(3, &(&pis.p3 - &pis.p4.scaled(tan))));
    worst
}

/// Fails with `AngleMismatch` when the structure and the scalars disagree on `t`.
pub fn check_angle(
    structure: &InducedStructure,
    scalars: &HyperScalars,
    tol: &Tolerance,
) -> Result<()> {
    if (structure.t - scalars.t).abs() > tol.threshold(structure.t) {
        return Err(Error::AngleMismatch {
            structure: structure.t,
            scalars: scalars.t,
        });
    }
    Ok(())
}
