use serde::{Deserialize, Serialize};

use super::{HyperScalars, ShapeOperator};
use crate::contact_norden::{classify_section, ContactNordenPoint, PiTensors, SectionKind};
use crate::error::{Error, Result};
use crate::multilinear::{ricci_contract, scalar_contract, MultilinearForm, Vector, VectorMap};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarCurvatures {
    pub tau: f64,
    pub tau_tilde: f64,
}

/// `nu' [pi1 - pi2 - tan t pi5] + nu~' [pi3 - tan t pi4] - pi1(Ax, Ay, z, u)`.
pub fn gauss_induced_r(
    point: &ContactNordenPoint,
    a: &ShapeOperator,
    scalars: &HyperScalars,
    nu: f64,
    nu_tilde: f64,
) -> MultilinearForm {
    let p = PiTensors::new(point);
    let tan = scalars.t.tan();
    let ambient =
        nu * (&(&p.p1 - &p.p2) - &p.p5.scaled(tan)) + nu_tilde * (&p.p3 - &p.p4.scaled(tan));
    ambient - p.p1.substitute(&[0, 1], a.endo())
}

/// `L(x, y)xi`: the third slot set to `xi` and the fourth raised with `g^{-1}`.
pub fn raise_xi(l: &MultilinearForm, point: &ContactNordenPoint) -> VectorMap {
    let d = point.dim();
    let xi = point.xi();
    let gi = point.g_inv().matrix();
    let lower: Vec<f64> = (0..d * d * d)
        .map(|idx| {
            let (x, y, u) = (idx / (d * d), (idx / d) % d, idx % d);
            (0..d).map(|k| xi[k] * l.get(&[x, y, k, u])).sum()
        })
        .collect();
    VectorMap::from_fn(d, |k, x, y| {
        (0..d)
            .map(|u| gi[(k, u)] * lower[(x * d + y) * d + u])
            .sum()
    })
}

/// Max residual of the two identities satisfied by the curvature of the hypersurface:
/// the `phi`-rotated form of `R` and the expression for `R(x, y)xi`.
pub fn gauss_identities_residual(
    point: &ContactNordenPoint,
    r: &MultilinearForm,
    a: &ShapeOperator,
    scalars: &HyperScalars,
    nu: f64,
    nu_tilde: f64,
) -> f64 {
    let p = PiTensors::new(point);
    let tan = scalars.t.tan();
    let m = &p.p4 - &p.p5.scaled(tan);
    let w = &p.p5 + &p.p4.scaled(tan);
    let pa = |l: &MultilinearForm| l.substitute(&[0, 1], a.endo());

    let rotated = r.substitute(&[2, 3], point.phi());
    let bracket = &(r - &m.scaled(nu)) + &w.scaled(nu_tilde);
    let first = &(&rotated + &bracket) + &pa(&(&p.p1 + &p.p2));

    let rhs = &(&m.scaled(nu) - &w.scaled(nu_tilde)) - &pa(&p.p1);
    let second = raise_xi(r, point).max_abs_diff(&raise_xi(&rhs, point));
    first.max_abs().max(second)
}

/// `1 / cos t [nu' pi5 + nu~' pi4](x, y)xi`.
pub fn codazzi_rhs(
    point: &ContactNordenPoint,
    nu: f64,
    nu_tilde: f64,
    t: f64,
    x: &Vector,
    y: &Vector,
) -> Result<Vector> {
    HyperScalars::new(t)?;
    let d = point.dim();
    for v in [x, y] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    let p = PiTensors::new(point);
    let l = (nu * &p.p5 + nu_tilde * &p.p4).scaled(1.0 / t.cos());
    Ok(raise_xi(&l, point).apply(x, y))
}

/// `tau` and `tau~` by contraction with `rho(y, z) = g^{ij} R(e_i, y, z, e_j)`,
/// where `R~(x, y, z, u) = R(x, y, z, phi u)`.
pub fn scalar_curvatures(
    r: &MultilinearForm,
    point: &ContactNordenPoint,
) -> Result<ScalarCurvatures> {
    let gi = point.g_inv();
    let tau = scalar_contract(&ricci_contract(r, gi)?, gi)?;
    let r_tilde = r.substitute(&[3], point.phi());
    let tau_tilde = scalar_contract(&ricci_contract(&r_tilde, gi)?, gi)?;
    Ok(ScalarCurvatures { tau, tau_tilde })
}

struct Traces {
    tr_a: f64,
    tr_a2: f64,
    tr_aphi: f64,
    tr_a2phi: f64,
    tr_aphi_sq: f64,
    eta_axi: f64,
    g_axi_axi: f64,
    g_phiaxi_axi: f64,
}

impl Traces {
    fn new(point: &ContactNordenPoint, a: &ShapeOperator) -> Self {
        let am = a.endo().matrix();
        let phi = point.phi().matrix();
        let aphi = am * phi;
        let axi = a.apply(point.xi());
        Self {
            tr_a: am.trace(),
            tr_a2: (am * am).trace(),
            tr_aphi: aphi.trace(),
            tr_a2phi: (am * am * phi).trace(),
            tr_aphi_sq: (&aphi * &aphi).trace(),
            eta_axi: point.eta_of(&axi),
            g_axi_axi: point.g().apply(&axi, &axi),
            g_phiaxi_axi: point.g().apply(&point.phi().apply(&axi), &axi),
        }
    }
}

/// Closed forms `tau = 4n^2 nu' - 4n nu~' tan t - (tr A)^2 + tr A^2` and
/// `tau~ = 2n nu' tan t + 2n(2n - 1) nu~' - tr A tr(A phi) + tr(A^2 phi)`.
pub fn closed_form_scalars(
    a: &ShapeOperator,
    scalars: &HyperScalars,
    nu: f64,
    nu_tilde: f64,
    point: &ContactNordenPoint,
) -> ScalarCurvatures {
    let n = point.n() as f64;
    let tan = scalars.t.tan();
    let tr = Traces::new(point, a);
    ScalarCurvatures {
        tau: 4.0 * n * n * nu - 4.0 * n * nu_tilde * tan - tr.tr_a * tr.tr_a + tr.tr_a2,
        tau_tilde: 2.0 * n * nu * tan + 2.0 * n * (2.0 * n - 1.0) * nu_tilde - tr.tr_a * tr.tr_aphi
            + tr.tr_a2phi,
    }
}

/// Special sections with closed-form sectional curvature.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecialSection {
    /// `{xi, x}`
    Xi(Vector),
    /// `{phi x, phi^2 x}`
    PhiHolomorphic(Vector),
    /// `{x, y}` totally real and orthogonal to `xi`
    TotallyReal(Vector, Vector),
}

impl SpecialSection {
    /// The two vectors spanning the section.
    pub fn basis(&self, point: &ContactNordenPoint) -> (Vector, Vector) {
        match self {
            SpecialSection::Xi(x) => (point.xi().clone(), x.clone()),
            SpecialSection::PhiHolomorphic(x) => {
                let u = point.phi().apply(x);
                let v = point.phi().apply(&u);
                (u, v)
            }
            SpecialSection::TotallyReal(x, y) => (x.clone(), y.clone()),
        }
    }
}

/// Closed-form sectional curvature of a special section of the hypersurface.
pub fn special_sectional(
    point: &ContactNordenPoint,
    a: &ShapeOperator,
    scalars: &HyperScalars,
    nu: f64,
    nu_tilde: f64,
    section: &SpecialSection,
    tol: &Tolerance,
) -> Result<f64> {
    let p1 = PiTensors::new(point).p1;
    let g = point.g();
    let tan = scalars.t.tan();
    match section {
        SpecialSection::Xi(x) => {
            let ex = point.eta_of(x);
            let gxx = g.apply(x, x);
            let den = gxx - ex * ex;
            if den.abs() <= tol.threshold(gxx.abs() + ex * ex) {
                return Err(Error::DegenerateSection(den));
            }
            let xi = point.xi();
            let gxphix = g.apply(x, &point.phi().apply(x));
            let shape = p1.evaluate(&[&a.apply(xi), &a.apply(x), x, xi])?;
            Ok(nu - nu_tilde * tan - (nu * tan + nu_tilde) * gxphix / den - shape / den)
        }
        SpecialSection::PhiHolomorphic(x) => {
            let u = point.phi().apply(x);
            let v = point.phi().apply(&u);
            let den = p1.evaluate(&[&u, &v, &v, &u])?;
            let scale = g.apply(&u, &u).abs() * g.apply(&v, &v).abs() + g.apply(&u, &v).powi(2);
            if den.abs() <= tol.threshold(scale) {
                return Err(Error::DegenerateSection(den));
            }
            Ok(-p1.evaluate(&[&a.apply(&u), &a.apply(&v), &v, &u])? / den)
        }
        SpecialSection::TotallyReal(x, y) => {
            let horizontal =
                point.eta_of(x).abs() <= tol.abs_tol && point.eta_of(y).abs() <= tol.abs_tol;
            let kind = classify_section(point, x, y, tol).map_err(|_| Error::WrongSectionKind)?;
            if kind == SectionKind::Degenerate {
                return Err(Error::DegenerateSection(p1.evaluate(&[x, y, y, x])?));
            }
            if kind != SectionKind::TotallyReal || !horizontal {
                return Err(Error::WrongSectionKind);
            }
            let den = p1.evaluate(&[x, y, y, x])?;
            Ok(nu - p1.evaluate(&[&a.apply(x), &a.apply(y), y, x])? / den)
        }
    }
}

/// `K = R(x, y, phi^2 z, phi^2 u) + pi1(Ax, Ay, phi z, phi u)
///   + sin t {sin t [pi1 - pi2 - pi4] - cos t [pi3 + pi5]}(Ax, Ay, z, u)`.
pub fn canonical_k_from_r(
    point: &ContactNordenPoint,
    r: &MultilinearForm,
    a: &ShapeOperator,
    t: f64,
) -> MultilinearForm {
    let p = PiTensors::new(point);
    let (s, c) = t.sin_cos();
    let phi2 = point.phi2();
    let first = r.substitute(&[2, 3], &phi2);
    let second =
        p.p1.substitute(&[2, 3], point.phi())
            .substitute(&[0, 1], a.endo());
    let inner = (p.kaehler_a().scaled(s) - p.kaehler_b().scaled(c)).scaled(s);
    let third = inner.substitute(&[0, 1], a.endo());
    &(&first + &second) + &third
}

/// Canonical curvature in closed form with its scalar curvatures, both from the
/// closed-form expressions and from contraction.
#[derive(Debug, Clone)]
pub struct CanonicalCurvature {
    pub k: MultilinearForm,
    pub a: f64,
    pub b: f64,
    pub closed: ScalarCurvatures,
    pub contracted: ScalarCurvatures,
}

/// `K = nu' [pi1 - pi2 - pi4] + nu~' [pi3 + pi5]
///   - cos t {cos t [pi1 - pi2 - pi4] + sin t [pi3 + pi5]}(Ax, Ay, z, u)`.
pub fn canonical_k_model(
    point: &ContactNordenPoint,
    a: &ShapeOperator,
    scalars: &HyperScalars,
    nu: f64,
    nu_tilde: f64,
) -> Result<CanonicalCurvature> {
    let p = PiTensors::new(point);
    let (s, c) = scalars.t.sin_cos();
    let ka = p.kaehler_a();
    let kb = p.kaehler_b();
    let shape = (ka.scaled(c) + kb.scaled(s))
        .scaled(c)
        .substitute(&[0, 1], a.endo());
    let k = &(nu * &ka + nu_tilde * &kb) - &shape;

    let n = point.n() as f64;
    let tr = Traces::new(point, a);
    // tr(A o phi)^2 is read as tr((A o phi)^2)
    let av = tr.tr_a * tr.tr_a - tr.tr_a2 - tr.tr_aphi * tr.tr_aphi + tr.tr_aphi_sq
        - 2.0 * tr.eta_axi * tr.tr_a
        + 2.0 * tr.g_axi_axi;
    let bv = tr.tr_a2phi - tr.tr_a * tr.tr_aphi + tr.eta_axi * tr.tr_aphi - tr.g_phiaxi_axi;
    let base = 4.0 * n * (n - 1.0);
    let closed = ScalarCurvatures {
        tau: base * nu - c * (av * c + 2.0 * bv * s),
        tau_tilde: base * nu_tilde - c * (av * s - 2.0 * bv * c),
    };
    let contracted = scalar_curvatures(&k, point)?;
    Ok(CanonicalCurvature {
        k,
        a: av,
        b: bv,
        closed,
        contracted,
    })
}
