//! Real time-like hypersurfaces of Kähler manifolds with Norden metric.
//!
//! A hypersurface is described at one point: [`induce`] builds the almost
//! contact structure on the tangent space from a time-like unit normal, and
//! the remaining operations work on a [`ContactNordenPoint`] together with a
//! shape operator and the scalar data of [`HyperScalars`].

mod curvature;
mod induced;
mod shape;

pub use curvature::{
    canonical_k_from_r, canonical_k_model, closed_form_scalars, codazzi_rhs,
    gauss_identities_residual, gauss_induced_r, raise_xi, scalar_curvatures, special_sectional,
    CanonicalCurvature, ScalarCurvatures, SpecialSection,
};
pub use induced::{
    check_angle, induce, pi_relations_residual, InducedStructure, TimelikeNormalFrame,
};
pub use shape::{f_from_a, shape_from_class, validate_f6_shape, HyperScalars, ShapeOperator};
