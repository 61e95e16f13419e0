//! Almost complex structures with Norden metric at a point, the curvature-like
//! tensors built from them and the ambient model of constant totally real
//! sectional curvatures.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multilinear::{
    independent, max_abs, signature, span_residual, BilinearForm, Endomorphism, MultilinearForm,
    Vector,
};
use crate::report::{Check, ValidationReport};
use crate::tolerance::Tolerance;

/// Tangent space of dimension `2 n'` carrying `g'` and `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexNordenPoint {
    n_prime: usize,
    g_prime: BilinearForm,
    j: Endomorphism,
}

impl ComplexNordenPoint {
    pub fn new(n_prime: usize, g_prime: BilinearForm, j: Endomorphism) -> Result<Self> {
        let d = 2 * n_prime;
        for got in [g_prime.dim(), j.dim()] {
            if got != d {
                return Err(Error::DimensionMismatch { expected: d, got });
            }
        }
        Ok(Self {
            n_prime,
            g_prime,
            j,
        })
    }

    /// Flat model in the basis `{a_1, .., a_n', Ja_1, .., Ja_n'}` with
    /// `g' = diag(1, .., 1, -1, .., -1)`.
    pub fn standard(n_prime: usize) -> Self {
        let d = 2 * n_prime;
        let diag: Vec<f64> = (0..d)
            .map(|i| if i < n_prime { 1.0 } else { -1.0 })
            .collect();
        let mut j = DMatrix::zeros(d, d);
        for i in 0..n_prime {
            j[(n_prime + i, i)] = 1.0;
            j[(i, n_prime + i)] = -1.0;
        }
        Self {
            n_prime,
            g_prime: BilinearForm::diagonal(&diag),
            j: Endomorphism::new(j).expect("square"),
        }
    }

    /// Re-expresses the structure in the basis given by the columns of `s`
    /// (old coordinates of the new basis vectors).
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<Self> {
        let s_inv = s
            .clone()
            .try_inverse()
            .ok_or(Error::Degenerate(s.determinant().abs()))?;
        let g = s.transpose() * self.g_prime.matrix() * s;
        let j = &s_inv * self.j.matrix() * s;
        Self::new(self.n_prime, BilinearForm::new(g)?, Endomorphism::new(j)?)
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    pub fn dim(&self) -> usize {
        2 * self.n_prime
    }

    pub fn g_prime(&self) -> &BilinearForm {
        &self.g_prime
    }

    pub fn j(&self) -> &Endomorphism {
        &self.j
    }

    /// Matrix of `g'(e_a, J e_b)`.
    pub fn g_j(&self) -> DMatrix<f64> {
        self.g_prime.matrix() * self.j.matrix()
    }
}

/// Ambient model with totally real sectional curvatures `nu'` and `nu~'`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientModel {
    pub point: ComplexNordenPoint,
    pub nu_prime: f64,
    pub nu_tilde_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKindPrime {
    Holomorphic,
    TotallyReal,
    Generic,
    Degenerate,
}

pub fn validate_complex_norden(point: &ComplexNordenPoint, tol: &Tolerance) -> ValidationReport {
    let g = point.g_prime.matrix();
    let j = point.j.matrix();
    let d = point.dim();
    let scale = max_abs(g);
    let mut report = ValidationReport::default();
    report.push(Check::new(
        "metric_symmetric",
        point.g_prime.symmetry_residual(),
        tol.threshold(scale),
    ));
    report.push(Check::new(
        "j_squared_minus_identity",
        max_abs(&(j * j + DMatrix::identity(d, d))),
        tol.threshold(1.0),
    ));
    report.push(Check::new(
        "norden_compatibility",
        max_abs(&(j.transpose() * g * j + g)),
        tol.threshold(scale),
    ));
    let sig = signature(&point.g_prime, tol);
    report.push(Check::flag(
        "signature_neutral",
        sig == Ok((point.n_prime, point.n_prime)),
    ));
    report
}

/// `g~'(x, y) = g'(x, J y)`.
pub fn associated_metric_prime(point: &ComplexNordenPoint) -> BilinearForm {
    BilinearForm::new(point.g_j()).expect("square")
}

pub(crate) fn pi1_from(g: &DMatrix<f64>) -> MultilinearForm {
    let d = g.nrows();
    MultilinearForm::from_fn(4, d, |ix| {
        let (x, y, z, u) = (ix[0], ix[1], ix[2], ix[3]);
        g[(y, z)] * g[(x, u)] - g[(x, z)] * g[(y, u)]
    })
    .expect("supported dimension")
}

/// `gs[(a, b)] = g(e_a, S e_b)` for the structure endomorphism S.
pub(crate) fn pi2_from(gs: &DMatrix<f64>) -> MultilinearForm {
    pi1_from(gs)
}

pub(crate) fn pi3_from(g: &DMatrix<f64>, gs: &DMatrix<f64>) -> MultilinearForm {
    let d = g.nrows();
    MultilinearForm::from_fn(4, d, |ix| {
        let (x, y, z, u) = (ix[0], ix[1], ix[2], ix[3]);
        -g[(y, z)] * gs[(x, u)] + g[(x, z)] * gs[(y, u)] - gs[(y, z)] * g[(x, u)]
            + gs[(x, z)] * g[(y, u)]
    })
    .expect("supported dimension")
}

/// The curvature-like tensors `pi'_1, pi'_2, pi'_3`.
pub fn pi_prime(i: usize, point: &ComplexNordenPoint) -> Result<MultilinearForm> {
    let g = point.g_prime.matrix();
    match i {
        1 => Ok(pi1_from(g)),
        2 => Ok(pi2_from(&point.g_j())),
        3 => Ok(pi3_from(g, &point.g_j())),
        _ => Err(Error::BadIndex(i)),
    }
}

/// `R' = nu' (pi'_1 - pi'_2) + nu~' pi'_3`.
pub fn model_curvature(model: &AmbientModel) -> MultilinearForm {
    let p = &model.point;
    let g = p.g_prime.matrix();
    let gj = p.g_j();
    let p1 = pi1_from(g);
    let p2 = pi2_from(&gj);
    let p3 = pi3_from(g, &gj);
    model.nu_prime * (&p1 - &p2) + model.nu_tilde_prime * &p3
}

/// `R~'(x, y, z, u) = R'(x, y, z, J u)`.
pub fn associated_curvature(r: &MultilinearForm, j: &Endomorphism) -> MultilinearForm {
    r.substitute(&[3], j)
}

fn section_denominator(g: &BilinearForm, x: &Vector, y: &Vector) -> (f64, f64) {
    let gxx = g.apply(x, x);
    let gyy = g.apply(y, y);
    let gxy = g.apply(x, y);
    (gyy * gxx - gxy * gxy, (gxx * gyy).abs() + gxy * gxy)
}

/// `k'(x, y) = R'(x, y, y, x) / pi'_1(x, y, y, x)`.
pub fn sectional_curvature_prime(
    r: &MultilinearForm,
    g_prime: &BilinearForm,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<f64> {
    let (den, scale) = section_denominator(g_prime, x, y);
    if den.abs() <= tol.threshold(scale) {
        return Err(Error::DegenerateSection(den));
    }
    Ok(r.evaluate(&[x, y, y, x])? / den)
}

pub fn classify_section_prime(
    point: &ComplexNordenPoint,
    x: &Vector,
    y: &Vector,
    tol: &Tolerance,
) -> Result<SectionKindPrime> {
    if !independent(&[x, y], tol.abs_tol) {
        return Err(Error::DependentVectors);
    }
    let (den, scale) = section_denominator(&point.g_prime, x, y);
    if den.abs() <= tol.threshold(scale) {
        return Ok(SectionKindPrime::Degenerate);
    }
    let jx = point.j.apply(x);
    let jy = point.j.apply(y);
    let span = [x, y];
    if span_residual(&span, &jx) <= tol.abs_tol && span_residual(&span, &jy) <= tol.abs_tol {
        return Ok(SectionKindPrime::Holomorphic);
    }
    let g = &point.g_prime;
    let pairings = [
        g.apply(&jx, x),
        g.apply(&jx, y),
        g.apply(&jy, x),
        g.apply(&jy, y),
    ];
    if pairings.iter().all(|p| p.abs() <= tol.abs_tol) {
        return Ok(SectionKindPrime::TotallyReal);
    }
    Ok(SectionKindPrime::Generic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn basis(d: usize, i: usize) -> Vector {
        Vector::from_fn(d, |k, _| (k == i) as u8 as f64)
    }

    fn mixing() -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                2.0
            } else {
                0.3 * (i as f64 - j as f64) + 0.1
            }
        })
    }

    #[test]
    fn standard_model_is_norden() {
        let p = ComplexNordenPoint::standard(2);
        assert!(validate_complex_norden(&p, &tol()).passed());
    }

    #[test]
    fn riemannian_metric_fails_with_residual_two() {
        let s = ComplexNordenPoint::standard(2);
        let p = ComplexNordenPoint::new(2, BilinearForm::identity(4), s.j().clone()).unwrap();
        let report = validate_complex_norden(&p, &tol());
        assert!(!report.passed());
        assert!((report.get("norden_compatibility").unwrap().residual - 2.0).abs() < 1e-15);
    }

    #[test]
    fn congruence_keeps_axioms() {
        let p = ComplexNordenPoint::standard(2)
            .congruence(&mixing())
            .unwrap();
        assert!(validate_complex_norden(&p, &tol()).passed());
    }

    #[test]
    fn associated_metric_of_standard_model() {
        let p = ComplexNordenPoint::standard(2);
        let gt = associated_metric_prime(&p);
        let m = gt.matrix();
        assert_eq!(m[(0, 2)], -1.0);
        assert_eq!(m[(1, 3)], -1.0);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], 0.0);
                assert_eq!(m[(2 + i, 2 + j)], 0.0);
            }
        }
        assert_eq!(signature(&gt, &tol()).unwrap(), (2, 2));
        let jm = p.j().matrix();
        assert!(max_abs(&(jm.transpose() * m * jm + m)) < 1e-15);
    }

    #[test]
    fn pi_prime_values() {
        let p = ComplexNordenPoint::standard(2);
        let (a1, a2) = (basis(4, 0), basis(4, 1));
        let p1 = pi_prime(1, &p).unwrap();
        assert_eq!(p1.evaluate(&[&a1, &a2, &a2, &a1]).unwrap(), 1.0);
        assert_eq!(pi_prime(4, &p), Err(Error::BadIndex(4)));
        let x = Vector::from_vec(vec![0.2, -1.0, 0.7, 0.4]);
        let z = Vector::from_vec(vec![1.0, 0.1, -0.3, 0.9]);
        let u = Vector::from_vec(vec![-0.5, 0.6, 0.2, 1.1]);
        for i in 1..=3 {
            let t = pi_prime(i, &p).unwrap();
            assert!(t.evaluate(&[&x, &x, &z, &u]).unwrap().abs() < 1e-14);
        }
        let p3 = pi_prime(3, &p).unwrap();
        assert!(
            (p3.evaluate(&[&x, &z, &u, &a1]).unwrap() - p3.evaluate(&[&u, &a1, &x, &z]).unwrap())
                .abs()
                < 1e-14
        );
    }

    #[test]
    fn model_sections() {
        let model = AmbientModel {
            point: ComplexNordenPoint::standard(2),
            nu_prime: 3.0,
            nu_tilde_prime: -1.0,
        };
        let r = model_curvature(&model);
        let g = model.point.g_prime();
        let (a1, a2, ja1) = (basis(4, 0), basis(4, 1), basis(4, 2));
        let k = sectional_curvature_prime(&r, g, &a1, &a2, &tol()).unwrap();
        assert!((k - 3.0).abs() < 1e-14);
        let kh = sectional_curvature_prime(&r, g, &a1, &ja1, &tol()).unwrap();
        assert!(kh.abs() < 1e-14);
        assert!(matches!(
            sectional_curvature_prime(&r, g, &a1, &a1, &tol()),
            Err(Error::DegenerateSection(_))
        ));
        let flat = AmbientModel {
            nu_prime: 0.0,
            nu_tilde_prime: 0.0,
            ..model.clone()
        };
        assert_eq!(model_curvature(&flat).max_abs(), 0.0);
    }

    #[test]
    fn associated_curvature_values() {
        let p = ComplexNordenPoint::standard(2);
        let model = AmbientModel {
            point: p.clone(),
            nu_prime: 0.0,
            nu_tilde_prime: 1.0,
        };
        let rt = associated_curvature(&model_curvature(&model), p.j());
        let (a1, a2) = (basis(4, 0), basis(4, 1));
        let ja1 = p.j().apply(&a1);
        let p3 = pi_prime(3, &p).unwrap();
        let expected = p3.evaluate(&[&a1, &a2, &a2, &ja1]).unwrap();
        assert!((rt.evaluate(&[&a1, &a2, &a2, &a1]).unwrap() - expected).abs() < 1e-14);
        let zero = MultilinearForm::zeros(4, 4).unwrap();
        assert_eq!(associated_curvature(&zero, p.j()).max_abs(), 0.0);
        let general = AmbientModel {
            point: p.clone(),
            nu_prime: 2.0,
            nu_tilde_prime: 0.5,
        };
        let r = model_curvature(&general);
        let twice = associated_curvature(&associated_curvature(&r, p.j()), p.j());
        assert!((&twice + &r).max_abs() < 1e-14);
    }

    #[test]
    fn section_classes() {
        let p = ComplexNordenPoint::standard(2);
        let (a1, a2, ja1) = (basis(4, 0), basis(4, 1), basis(4, 2));
        let t = tol();
        assert_eq!(
            classify_section_prime(&p, &a1, &ja1, &t).unwrap(),
            SectionKindPrime::Holomorphic
        );
        assert_eq!(
            classify_section_prime(&p, &a1, &a2, &t).unwrap(),
            SectionKindPrime::TotallyReal
        );
        let y = &ja1 * 2.0 + &a2;
        assert_eq!(
            classify_section_prime(&p, &a1, &y, &t).unwrap(),
            SectionKindPrime::Generic
        );
        let ja2 = basis(4, 3);
        assert_eq!(
            classify_section_prime(&p, &a1, &(&a1 + &ja2), &t).unwrap(),
            SectionKindPrime::TotallyReal
        );
        // a2 + Ja1 is null and orthogonal to a1
        let null = &a2 + &ja1;
        assert_eq!(
            classify_section_prime(&p, &a1, &null, &t).unwrap(),
            SectionKindPrime::Degenerate
        );
        assert_eq!(
            classify_section_prime(&p, &a1, &(&a1 * 2.0), &t),
            Err(Error::DependentVectors)
        );
    }
}
