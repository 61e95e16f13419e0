//! Seeded generators of random valid structures for property batteries.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex_norden::ComplexNordenPoint;
use crate::contact_norden::{ContactNordenPoint, FTensor};
use crate::hypersurface::{HyperScalars, ShapeOperator, TimelikeNormalFrame};
use crate::multilinear::{Endomorphism, MultilinearForm, Vector};
use crate::tolerance::Tolerance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vector(rng: &mut impl Rng, d: usize) -> Vector {
    Vector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0))
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    sv.max() / sv.min()
}

/// Random change of basis `U(-1, 1) + 2 I`, redrawn until its condition number is below 50.
pub fn random_congruence(rng: &mut impl Rng, d: usize) -> DMatrix<f64> {
    loop {
        let s = DMatrix::from_fn(d, d, |i, j| {
            rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }
        });
        if condition_number(&s) < 50.0 {
            return s;
        }
    }
}

/// Standard contact point seen in a random basis, together with the basis matrix.
pub fn random_contact_point(rng: &mut impl Rng, n: usize) -> (ContactNordenPoint, DMatrix<f64>) {
    let s = random_congruence(rng, 2 * n + 1);
    let point = ContactNordenPoint::standard(n)
        .congruence(&s)
        .expect("well-conditioned congruence");
    (point, s)
}

pub fn random_complex_point(
    rng: &mut impl Rng,
    n_prime: usize,
) -> (ComplexNordenPoint, DMatrix<f64>) {
    let s = random_congruence(rng, 2 * n_prime);
    let point = ComplexNordenPoint::standard(n_prime)
        .congruence(&s)
        .expect("well-conditioned congruence");
    (point, s)
}

/// Random vector of `ker eta`.
pub fn random_horizontal(rng: &mut impl Rng, point: &ContactNordenPoint) -> Vector {
    let v = uniform_vector(rng, point.dim());
    let e = point.eta_of(&v);
    v - point.xi() * e
}

/// Random element of F6: `F(x, y, z) = h(x, y) eta(z) + h(x, z) eta(y)` with `h` symmetric,
/// vanishing on `xi`, anti-invariant under `phi` and with both traces removed.
/// Only the zero tensor exists for `n = 1`.
pub fn random_f6(rng: &mut impl Rng, point: &ContactNordenPoint) -> FTensor {
    let d = point.dim();
    let n = point.n() as f64;
    let h0 = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let h0 = &h0 + h0.transpose();
    // projector onto ker eta along xi
    let p = DMatrix::identity(d, d) - point.xi() * point.eta().transpose();
    let h1 = p.transpose() * h0 * &p;
    let phi = point.phi().matrix();
    let mut h = (&h1 - phi.transpose() * &h1 * phi) * 0.5;
    let g = point.g().matrix();
    let gi = point.g_inv().matrix();
    let g_horizontal = g - point.eta() * point.eta().transpose();
    let g_phi = point.g_phi();
    // trace_g h and tr(h o phi); g_horizontal has (2n, 0) and g_phi has (0, -2n)
    let tr = (gi * &h).trace();
    let tr_phi = (gi * &h * phi).trace();
    h = h - g_horizontal * (tr / (2.0 * n)) + g_phi * (tr_phi / (2.0 * n));
    let eta = point.eta();
    let form = MultilinearForm::from_fn(3, d, |ix| {
        h[(ix[0], ix[1])] * eta[ix[2]] + h[(ix[0], ix[2])] * eta[ix[1]]
    })
    .expect("supported dimension");
    FTensor::new(form).expect("rank 3")
}

/// Random unit time-like vector of the ambient space.
pub fn random_timelike_normal(rng: &mut impl Rng, ambient: &ComplexNordenPoint) -> Vector {
    loop {
        let v = uniform_vector(rng, ambient.dim()) * 2.0;
        let nn = ambient.g_prime().apply(&v, &v);
        if nn < -0.1 {
            return v / (-nn).sqrt();
        }
    }
}

/// `N = sinh(s) a_1 + cosh(s) J a_1` in the standard ambient basis.
pub fn sinh_normal(n_prime: usize, s: f64) -> Vector {
    let mut v = Vector::zeros(2 * n_prime);
    v[0] = s.sinh();
    v[n_prime] = s.cosh();
    v
}

/// Random ambient basis with a random time-like normal.
pub fn random_frame(rng: &mut impl Rng, n_prime: usize) -> TimelikeNormalFrame {
    let (ambient, _) = random_complex_point(rng, n_prime);
    let normal = random_timelike_normal(rng, &ambient);
    TimelikeNormalFrame::new(ambient, normal, &Tolerance::default()).expect("unit time-like normal")
}

/// Random scalars with `|t| < 1.2` and the remaining values in `(-1.5, 1.5)`; `Omega` is left empty.
pub fn random_scalars(rng: &mut impl Rng) -> HyperScalars {
    let mut u = || rng.gen_range(-1.5..1.5);
    let (dt, th, ths, xth, xths) = (u(), u(), u(), u(), u());
    HyperScalars::new(rng.gen_range(-1.2..1.2))
        .expect("angle in range")
        .with_dt(dt)
        .with_thetas(th, ths)
        .with_xi_derivatives(xth, xths)
}

/// Random `g`-self-adjoint endomorphism `g^{-1} S` with `S` symmetric.
pub fn random_shape(rng: &mut impl Rng, point: &ContactNordenPoint) -> ShapeOperator {
    let d = point.dim();
    let s = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let s = (&s + s.transpose()) * 0.5;
    let a = point.g_inv().matrix() * s;
    ShapeOperator::new(
        point,
        Endomorphism::new(a).expect("square"),
        &Tolerance::default(),
    )
    .expect("self-adjoint")
}
