//! Reconstruction of `nabla phi`, `nabla xi` from `F` and the canonical connection difference.

use nalgebra::DMatrix;

use super::{ContactNordenPoint, FTensor};
use crate::error::{Error, Result};
use crate::multilinear::{Endomorphism, Vector, VectorMap};
use crate::tolerance::Tolerance;

/// `(nabla_x phi) y` from `g((nabla_x phi) y, z) = F(x, y, z)`.
pub fn nabla_phi_from_f(f: &FTensor, point: &ContactNordenPoint) -> VectorMap {
    let d = point.dim();
    let gi = point.g_inv().matrix();
    VectorMap::from_fn(d, |k, i, j| {
        (0..d).map(|l| gi[(k, l)] * f.get(i, j, l)).sum()
    })
}

/// Column `i` is `nabla_{e_i} xi`, the least-squares solution of
/// `eta(v) = 0`, `g(v, phi e_k) = -F(e_i, xi, e_k)`.
pub fn nabla_xi_from_f(
    f: &FTensor,
    point: &ContactNordenPoint,
    tol: &Tolerance,
) -> Result<Endomorphism> {
    let d = point.dim();
    let gp = point.g_phi();
    let eta = point.eta();
    let xi = point.xi();
    let m = DMatrix::from_fn(
        d + 1,
        d,
        |r, a| if r == 0 { eta[a] } else { gp[(a, r - 1)] },
    );
    let svd = m.clone().svd(true, true);
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        let b = Vector::from_fn(d + 1, |r, _| {
            if r == 0 {
                0.0
            } else {
                -(0..d).map(|l| xi[l] * f.get(i, l, r - 1)).sum::<f64>()
            }
        });
        let v = svd
            .solve(&b, 1e-13)
            .map_err(|_| Error::Inconsistent(f64::NAN))?;
        let residual = (&m * &v - &b).amax();
        if residual > tol.threshold(b.amax()) {
            return Err(Error::Inconsistent(residual));
        }
        out.set_column(i, &v);
    }
    Endomorphism::new(out)
}

/// `T(x, y) = D_x y - nabla_x y = 1/2 (nabla_x phi) phi y + 1/2 g(nabla_x xi, y) xi - eta(y) nabla_x xi`.
pub fn canonical_difference(
    f: &FTensor,
    point: &ContactNordenPoint,
    tol: &Tolerance,
) -> Result<VectorMap> {
    let d = point.dim();
    let nphi = nabla_phi_from_f(f, point);
    let nxi = nabla_xi_from_f(f, point, tol)?;
    let nxi = nxi.matrix();
    let phi = point.phi().matrix();
    let xi = point.xi();
    let eta = point.eta();
    // g_nxi[(j, i)] = g(e_j, nabla_{e_i} xi)
    let g_nxi = point.g().matrix() * nxi;
    Ok(VectorMap::from_fn(d, |k, i, j| {
        let first: f64 = (0..d).map(|m| nphi.component(k, i, m) * phi[(m, j)]).sum();
        0.5 * first + 0.5 * g_nxi[(j, i)] * xi[k] - eta[j] * nxi[(k, i)]
    }))
}
