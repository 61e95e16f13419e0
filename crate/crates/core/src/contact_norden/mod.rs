//! Almost contact structures with Norden metric at a point.
//!
//! A [`ContactNordenPoint`] is a `(2n+1)`-dimensional tangent space with a
//! metric `g`, an endomorphism `phi`, a vector `xi` and a covector `eta`. The
//! constructor only checks shapes and invertibility of `g`; the structure
//! axioms are reported by [`validate_contact_axioms`] so that deliberately
//! corrupted structures can still be built and inspected.
//!
//! The metric has `n + 1` positive and `n` negative directions: `eta(xi) = 1`
//! and `eta = g(., xi)` force `g(xi, xi) = 1`.

mod classes;
mod connection;

pub use classes::{class_form, class_residual, one_forms, ClassTag, FTensor, OneForms};
pub use connection::{canonical_difference, nabla_phi_from_f, nabla_xi_from_f};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::complex_norden::{pi1_from, pi2_from, pi3_from};
use crate::error::{Error, Result};
use crate::multilinear::{
    independent, invert_metric, max_abs, signature, span_residual, BilinearForm, Endomorphism,
    MultilinearForm, Vector,
};
use crate::report::{Check, ValidationReport};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct ContactNordenPoint {
    n: usize,
    g: BilinearForm,
    g_inv: BilinearForm,
    phi: Endomorphism,
    xi: Vector,
    eta: Vector,
}

impl ContactNordenPoint {
    pub fn new(
        n: usize,
        g: BilinearForm,
        phi: Endomorphism,
        xi: Vector,
        eta: Vector,
    ) -> Result<Self> {
        let d = 2 * n + 1;
        for got in [g.dim(), phi.dim(), xi.len(), eta.len()] {
            if got != d {
                return Err(Error::DimensionMismatch { expected: d, got });
            }
        }
        let g_inv = invert_metric(&g, &Tolerance::default())?;
        Ok(Self {
            n,
            g,
            g_inv,
            phi,
            xi,
            eta,
        })
    }

    /// Standard point in the basis `{e_1, phi e_1, e_3, phi e_3, .., xi}` with
    /// `g = diag(1, -1, .., 1, -1, 1)`, `phi e_{2k-1} = e_{2k}`, `phi e_{2k} = -e_{2k-1}`.
    pub fn standard(n: usize) -> Self {
        let d = 2 * n + 1;
        let diag: Vec<f64> = (0..d)
            .map(|i| if i == d - 1 || i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let mut phi = DMatrix::zeros(d, d);
        for k in 0..n {
            phi[(2 * k + 1, 2 * k)] = 1.0;
            phi[(2 * k, 2 * k + 1)] = -1.0;
        }
        let xi = Vector::from_fn(d, |i, _| (i == d - 1) as u8 as f64);
        Self::new(
            n,
            BilinearForm::diagonal(&diag),
            Endomorphism::new(phi).expect("square"),
            xi.clone(),
            xi,
        )
        .expect("standard point is nondegenerate")
    }

    /// Re-expresses the structure in the basis given by the columns of `s`.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<Self> {
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or(Error::Degenerate(s.determinant().abs()))?;
        let g = s.transpose() * self.g.matrix() * s;
        let phi = &s_inv * self.phi.matrix() * s;
        let xi = &s_inv * &self.xi;
        let eta = s.transpose() * &self.eta;
        Self::new(
            self.n,
            BilinearForm::new(g)?,
            Endomorphism::new(phi)?,
            xi,
            eta,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn g(&self) -> &BilinearForm {
        &self.g
    }

    pub fn g_inv(&self) -> &BilinearForm {
        &self.g_inv
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    pub fn xi(&self) -> &Vector {
        &self.xi
    }

    pub fn eta(&self) -> &Vector {
        &self.eta
    }

    pub fn eta_of(&self, v: &Vector) -> f64 {
        self.eta.dot(v)
    }

    /// `phi^2`.
    pub fn phi2(&self) -> Endomorphism {
        self.phi.compose(&self.phi)
    }

    /// Matrix of `g(e_a, phi e_b)`.
    pub fn g_phi(&self) -> DMatrix<f64> {
        self.g.matrix() * self.phi.matrix()
    }

    /// Matrix of `g(phi e_a, phi e_b)`.
    pub fn g_phi_phi(&self) -> DMatrix<f64> {
        self.phi.matrix().transpose() * self.g.matrix() * self.phi.matrix()
    }

    /// `eta ⊗ xi` as the endomorphism `x -> eta(x) xi`.
    pub fn eta_xi(&self) -> Endomorphism {
        Endomorphism::outer(&self.xi, &self.eta)
    }

    /// The basis vector `e_i` in coordinates.
    pub fn basis(&self, i: usize) -> Vector {
        Vector::from_fn(self.dim(), |k, _| (k == i) as u8 as f64)
    }
}

pub fn validate_contact_axioms(point: &ContactNordenPoint, tol: &Tolerance) -> ValidationReport {
    let d = point.dim();
    let g = point.g.matrix();
    let phi = point.phi.matrix();
    let xi = &point.xi;
    let eta = &point.eta;
    let scale = max_abs(g).max(max_abs(phi)).max(1.0);
    let th = tol.threshold(scale * scale);
    let eta_xi = xi * eta.transpose();
    let eta_eta = eta * eta.transpose();
    let g_phi = g * phi;

    let mut report = ValidationReport::default();
    report.push(Check::new(
        "metric_symmetric",
        point.g.symmetry_residual(),
        th,
    ));
    report.push(Check::new(
        "phi_squared",
        max_abs(&(phi * phi + DMatrix::identity(d, d) - &eta_xi)),
        th,
    ));
    report.push(Check::new("eta_xi_unit", (eta.dot(xi) - 1.0).abs(), th));
    report.push(Check::new(
        "norden_compatibility",
        max_abs(&(phi.transpose() * g * phi + g - &eta_eta)),
        th,
    ));
    report.push(Check::new(
        "eta_phi_zero",
        (phi.transpose() * eta).amax(),
        th,
    ));
    report.push(Check::new("phi_xi_zero", (phi * xi).amax(), th));
    report.push(Check::new("eta_is_g_xi", (g * xi - eta).amax(), th));
    report.push(Check::new(
        "phi_self_adjoint",
        max_abs(&(&g_phi - g_phi.transpose())),
        th,
    ));
    let sig = signature(&point.g, tol);
    report.push(Check::flag("signature", sig == Ok((point.n + 1, point.n))));
    report
}

/// `g~(x, y) = g(x, phi y) + eta(x) eta(y)`.
pub fn associated_metric(point: &ContactNordenPoint) -> BilinearForm {
    let m = point.g_phi() + &point.eta * point.eta.transpose();
    BilinearForm::new(m).expect("square")
}

pub(crate) fn pi4_from(g: &DMatrix<f64>, eta: &Vector) -> MultilinearForm {
    let d = g.nrows();
    MultilinearForm::from_fn(4, d, |ix| {
        let (x, y, z, u) = (ix[0], ix[1], ix[2], ix[3]);
        eta[y] * eta[z] * g[(x, u)] - eta[x] * eta[z] * g[(y, u)] + eta[x] * eta[u] * g[(y, z)]
            - eta[y] * eta[u] * g[(x, z)]
    })
    .expect("supported dimension")
}

/// The five curvature-like tensors of the contact structure.
#[derive(Debug, Clone)]
pub struct PiTensors {
    pub p1: MultilinearForm,
    pub p2: MultilinearForm,
    pub p3: MultilinearForm,
    pub p4: MultilinearForm,
    pub p5: MultilinearForm,
}

impl PiTensors {
    pub fn new(point: &ContactNordenPoint) -> Self {
        let g = point.g.matrix();
        let gp = point.g_phi();
        Self {
            p1: pi1_from(g),
            p2: pi2_from(&gp),
            p3: pi3_from(g, &gp),
            p4: pi4_from(g, &point.eta),
            // pi5 has the shape of pi4 with g(., phi .) in place of g
            p5: pi4_from(&gp, &point.eta),
        }
    }

    /// `pi1 - pi2 - pi4`.
    pub fn kaehler_a(&self) -> MultilinearForm {
        &(&self.p1 - &self.p2) - &self.p4
    }

    /// `pi3 + pi5`.
    pub fn kaehler_b(&self) -> MultilinearForm {
        &self.p3 + &self.p5
    }
}

pub fn pi(i: usize, point: &ContactNordenPoint) -> Result<MultilinearForm> {
    if !(1..=5).contains(&i) {
        return Err(Error::BadIndex(i));
    }
    let all = PiTensors::new(point);
    Ok(match i {
        1 => all.p1,
        2 => all.p2,
        3 => all.p3,
        4 => all.p4,
        _ => all.p5,
    })
}

/// Max residual over antisymmetry in both pairs, pair symmetry and the first Bianchi identity.
pub fn is_curvature_like(l: &MultilinearForm) -> f64 {
    let anti12 = (l + &l.permuted(&[1, 0, 2, 3])).max_abs();
    let anti34 = (l + &l.permuted(&[0, 1, 3, 2])).max_abs();
    let pair = (l - &l.permuted(&[2, 3, 0, 1])).max_abs();
    let bianchi = (&(l + &l.permuted(&[1, 2, 0, 3])) + &l.permuted(&[2, 0, 1, 3])).max_abs();
    anti12.max(anti34).max(pair).max(bianchi)
}

/// `max |L(x, y, z, u) + L(x, y, phi z, phi u)|` over basis tuples.
pub fn kaehler_residual(l: &MultilinearForm, point: &ContactNordenPoint) -> f64 {
    (l + &l.substitute(&[2, 3], &point.phi)).max_abs()
}

fn section_denominator(g: &BilinearForm, x: &Vector, y: &Vector) -> (f64, f64) {
    let gxx = g.apply(x, x);
    let gyy = g.apply(y, y);
    let gxy = g.apply(x, y);
    (gyy * gxx - gxy * gxy, (gxx * gyy).abs() + gxy * gxy)
}

/// `k(x, y) = L(x, y, y, x) / pi1(x, y, y, x)`.
pub fn sectional_curvature(
    l: &MultilinearForm,
    point: &ContactNordenPoint,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<f64> {
    let (den, scale) = section_denominator(&point.g, x, y);
    if den.abs() <= tol.threshold(scale) {
        return Err(Error::DegenerateSection(den));
    }
    Ok(l.evaluate(&[x, y, y, x])? / den)
}

/// `k~(x, y) = L(x, y, y, phi x) / pi1(x, y, y, x)`.
pub fn assoc_sectional_curvature(
    l: &MultilinearForm,
    point: &ContactNordenPoint,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<f64> {
    let (den, scale) = section_denominator(&point.g, x, y);
    if den.abs() <= tol.threshold(scale) {
        return Err(Error::DegenerateSection(den));
    }
    let phix = point.phi.apply(x);
    Ok(l.evaluate(&[x, y, y, &phix])? / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKind {
    XiSection,
    PhiHolomorphic,
    TotallyReal,
    Generic,
    Degenerate,
}

/// Classification with precedence Degenerate > XiSection > PhiHolomorphic > TotallyReal > Generic.
pub fn classify_section(
    point: &ContactNordenPoint,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<SectionKind> {
    if !independent(&[x, y], tol.abs_tol) {
        return Err(Error::DependentVectors);
    }
    let (den, scale) = section_denominator(&point.g, x, y);
    if den.abs() <= tol.threshold(scale) {
        return Ok(SectionKind::Degenerate);
    }
    let span = [x, y];
    if span_residual(&span, &point.xi) <= tol.abs_tol {
        return Ok(SectionKind::XiSection);
    }
    let phix = point.phi.apply(x);
    let phiy = point.phi.apply(y);
    if span_residual(&span, &phix) <= tol.abs_tol && span_residual(&span, &phiy) <= tol.abs_tol {
        return Ok(SectionKind::PhiHolomorphic);
    }
    let g = &point.g;
    let pairings = [
        g.apply(x, &phix),
        g.apply(x, &phiy),
        g.apply(y, &phix),
        g.apply(y, &phiy),
    ];
    if pairings.iter().all(|p| p.abs() <= tol.abs_tol) {
        return Ok(SectionKind::TotallyReal);
    }
    Ok(SectionKind::Generic)
}

#[cfg(test)]
mod tests;
