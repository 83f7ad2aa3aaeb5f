//! Exterior algebra on time-extended space `(t, x, y, z)`.
//!
//! Forms and multivectors are sparse maps from sorted multi-indices to
//! symbolic coefficients. All signs follow from the single index order
//! `t < x < y < z`, and every contraction acts on the first slot.

mod blade;
mod form;
mod grid;
pub mod linalg;
mod multivector;
mod vector;

pub use blade::Blade;
pub use form::Form;
pub use grid::{
    multivector_residual, periodic_axis, residual_norm, scalar_residual, vector_residual, PointSet, ResidualNorm,
    SampleGrid,
};
pub use multivector::{Bivector, Multivector, Trivector};
pub use vector::{musical_flat, VectorField};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::Real;

/// `i(W)(vol)` for a spatial field and a spatial volume form.
pub fn vector_by_volume(w: &VectorField, vol: &Form) -> Form {
    vol.interior(w)
}

/// Inverse of [`vector_by_volume`]: recovers `W` from `i(W)(ρ dx∧dy∧dz)`.
/// The density must be nonzero at every point of `points`.
pub fn two_form_to_vector<T: Real>(omega: &Form, vol: &Form, points: &PointSet<T>) -> Result<VectorField> {
    if omega.degree() != 2 || vol.degree() != 3 {
        return Err(Error::Invalid("two_form_to_vector needs a 2-form and a 3-form".into()));
    }
    let rho = vol.get(Blade::SPATIAL_VOLUME);
    let values = points.evaluate(std::slice::from_ref(&rho), "volume density")?;
    for (p, v) in points.points().iter().zip(&values) {
        if v[0] == T::zero() || !v[0].is_finite() {
            return Err(Error::DegenerateVolume { point: p.to_f64() });
        }
    }
    use crate::expr::Coord::{X, Y, Z};
    let comp = |a, b| omega.component(&[a, b]).div(&rho);
    Ok(VectorField::spatial([comp(Y, Z), comp(Z, X), comp(X, Y)]))
}

/// Spatial 2-form `i(W)(dx∧dy∧dz)` written through the components of `W`.
pub fn curl_two_form(w: &VectorField) -> Form {
    Form::spatial_two_form(w.spatial_components())
}

/// Scalar `ρ` of a spatial volume form `ρ dx∧dy∧dz`.
pub fn volume_density(vol: &Form) -> Expr {
    vol.get(Blade::SPATIAL_VOLUME)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, Coord};

    #[test]
    fn interior_of_volume() {
        let vol = Form::spatial_volume(1.0);
        let got = vector_by_volume(&VectorField::coordinate(Coord::Z), &vol);
        assert_eq!(got, Form::dx().wedge(&Form::dy()));
    }

    #[test]
    fn volume_round_trip() {
        let w = VectorField::spatial(["x*y", "sin(z)", "t+x^2"].map(|s| parse_expression(s).unwrap()));
        let vol = Form::spatial_volume(parse_expression("2+cos(x)").unwrap());
        let pts = SampleGrid::<f64>::uniform(4).points().unwrap();
        let back = two_form_to_vector(&vector_by_volume(&w, &vol), &vol, &pts).unwrap();
        let r = vector_residual(&(&back - &w), &pts).unwrap();
        assert!(r.max < 1e-14);
    }

    #[test]
    fn degenerate_volume_is_reported() {
        let vol = Form::spatial_volume(Expr::x());
        let pts = SampleGrid::<f64>::uniform(4).points().unwrap();
        let err = two_form_to_vector(&Form::zero(2), &vol, &pts).unwrap_err();
        assert!(matches!(err, Error::DegenerateVolume { .. }));
    }

    #[test]
    fn beltrami_curl_matches_volume_contraction() {
        let v = VectorField::spatial(
            ["sin(z) + cos(y)", "sin(x) + cos(z)", "sin(y) + cos(x)"].map(|s| parse_expression(s).unwrap()),
        );
        let curl_form = v.flat().d_spatial();
        let via_volume = vector_by_volume(&v.curl(), &Form::spatial_volume(1.0));
        let pts = SampleGrid::<f64>::default().points().unwrap();
        assert!(residual_norm(&(&curl_form - &via_volume), &pts).unwrap().max < 1e-12);
        // Beltrami: curl v = v
        assert!(vector_residual(&(&v.curl() - &v), &pts).unwrap().max < 1e-12);
    }
}
