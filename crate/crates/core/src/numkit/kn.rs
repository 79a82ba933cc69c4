//! Kulkarni-Nomizu products turning pairs of bilinear forms into
//! curvature-type (0,4) tensors.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Evaluates the bilinear form given by `h` on `(x, y)` without conjugation.
fn form<T: ComplexField>(h: &DMatrix<T>, x: &DVector<T>, y: &DVector<T>) -> T {
    x.dot(&(h * y))
}

/// Kulkarni-Nomizu product of two symmetric bilinear forms:
///
/// `(h1 @ h2)(X,Y,Z,W) = 1/2 * (h1(X,W)h2(Y,Z) + h2(X,W)h1(Y,Z)
///                              - h1(X,Z)h2(Y,W) - h2(X,Z)h1(Y,W))`.
///
/// The result has the symmetries of a curvature tensor; for `h1 = h2 = g`
/// it is the curvature tensor of the unit sphere of `(V, g)`.
pub fn kn_sym<T: ComplexField>(
    h1: &DMatrix<T>,
    h2: &DMatrix<T>,
    x: &DVector<T>,
    y: &DVector<T>,
    z: &DVector<T>,
    w: &DVector<T>,
) -> T {
    let half = T::from_subset(&0.5);
    half * (form(h1, x, w) * form(h2, y, z) + form(h2, x, w) * form(h1, y, z)
        - form(h1, x, z) * form(h2, y, w)
        - form(h2, x, z) * form(h1, y, w))
}

/// Kulkarni-Nomizu square of a 2-form:
///
/// `(w @ w)(X,Y,Z,W) = w(X,W)w(Y,Z) - w(X,Z)w(Y,W) - 2 w(X,Y)w(Z,W)`.
pub fn kn_skew<T: ComplexField>(
    om: &DMatrix<T>,
    x: &DVector<T>,
    y: &DVector<T>,
    z: &DVector<T>,
    w: &DVector<T>,
) -> T {
    let two = T::from_subset(&2.0);
    form(om, x, w) * form(om, y, z) - form(om, x, z) * form(om, y, w)
        - two * form(om, x, y) * form(om, z, w)
}
