//! Central finite-difference differential operators on the group.

use super::linalg::{expm, C64, CMat};
use super::OrthonormalBasis;

/// Default step for group-direction derivatives: balances the O(h^2)
/// truncation against roundoff at double precision.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// d/ds f(a e^{sX}): the left-invariant derivative.
    Left,
    /// d/ds f(e^{sX} a): the right-invariant derivative.
    Right,
}

fn shift(a: &CMat, x: &CMat, s: f64, side: Side) -> CMat {
    let e = expm(&(x * C64::new(s, 0.0)));
    match side {
        Side::Left => a.dot(&e),
        Side::Right => e.dot(a),
    }
}

/// Directional derivative of f at a along X by central differences.
pub fn grad_fd<F: Fn(&CMat) -> C64>(f: F, a: &CMat, x: &CMat, side: Side, h: f64) -> C64 {
    assert!(h > 0.0);
    (f(&shift(a, x, h, side)) - f(&shift(a, x, -h, side))) / C64::new(2.0 * h, 0.0)
}

/// Laplacian of f at a: sum over the orthonormal basis of second central
/// differences along each direction.
pub fn laplacian_fd<F: Fn(&CMat) -> C64>(f: F, a: &CMat, basis: &OrthonormalBasis, h: f64) -> C64 {
    assert!(h > 0.0);
    let f0 = f(a);
    let mut acc = C64::new(0.0, 0.0);
    for x in basis.elements() {
        let plus = f(&shift(a, x, h, Side::Left));
        let minus = f(&shift(a, x, -h, Side::Left));
        acc += (plus - f0 * C64::new(2.0, 0.0) + minus) / C64::new(h * h, 0.0);
    }
    acc
}

/// Mixed second derivative sum_X d/ds d/dt f(a e^{sX}, b e^{tX}) for two
/// independent variables, by the four-point central stencil.
pub fn grad_dot_fd<F: Fn(&CMat, &CMat) -> C64>(
    f: F,
    a: &CMat,
    b: &CMat,
    basis: &OrthonormalBasis,
    h: f64,
) -> C64 {
    assert!(h > 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for x in basis.elements() {
        let app = f(&shift(a, x, h, Side::Left), &shift(b, x, h, Side::Left));
        let apm = f(&shift(a, x, h, Side::Left), &shift(b, x, -h, Side::Left));
        let amp = f(&shift(a, x, -h, Side::Left), &shift(b, x, h, Side::Left));
        let amm = f(&shift(a, x, -h, Side::Left), &shift(b, x, -h, Side::Left));
        acc += (app - apm - amp + amm) / C64::new(4.0 * h * h, 0.0);
    }
    acc
}

/// The coincident-edge form of the mixed derivative: the two insertions act
/// on the same variable, a -> e^{-tX} a e^{sX}.
pub fn grad_dot_same_edge_fd<F: Fn(&CMat) -> C64>(
    f: F,
    a: &CMat,
    basis: &OrthonormalBasis,
    h: f64,
) -> C64 {
    assert!(h > 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for x in basis.elements() {
        let sub = |s: f64, t: f64| {
            let left = expm(&(x * C64::new(-t, 0.0)));
            let right = expm(&(x * C64::new(s, 0.0)));
            left.dot(a).dot(&right)
        };
        let app = f(&sub(h, h));
        let apm = f(&sub(h, -h));
        let amp = f(&sub(-h, h));
        let amm = f(&sub(-h, -h));
        acc += (app - apm - amp + amm) / C64::new(4.0 * h * h, 0.0);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::heat::random_matrix;
    use super::super::linalg::{eye, ntrace, trace};
    use super::super::{unitary_basis, GroupSpec};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_of_trace_at_identity() {
        let spec = GroupSpec::new(3);
        let basis = unitary_basis(&spec);
        let id = eye(3);
        for x in basis.elements() {
            let d = grad_fd(|m| ntrace(m), &id, x, Side::Left, DEFAULT_FD_STEP);
            let want = ntrace(x);
            assert!((d - want).norm() < 1e-8);
        }
    }

    #[test]
    fn laplacian_of_wilson_word_is_minus_itself() {
        // f = tr(beta a gamma): Laplacian^a f = sum_X tr(beta a X^2 gamma) = -f.
        let spec = GroupSpec::new(2);
        let basis = unitary_basis(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let beta = random_matrix(&spec, &mut rng);
        let gamma = random_matrix(&spec, &mut rng);
        let a = random_matrix(&spec, &mut rng);
        let f = |m: &CMat| ntrace(&beta.dot(m).dot(&gamma));
        let lap = laplacian_fd(f, &a, &basis, 1e-4);
        let want = -f(&a);
        assert!((lap - want).norm() < 1e-6, "{lap} vs {want}");
    }

    #[test]
    fn central_differences_are_second_order() {
        // Richardson: error(h) / error(h/2) close to 4 on a trace polynomial.
        let spec = GroupSpec::new(2);
        let basis = unitary_basis(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_matrix(&spec, &mut rng);
        let x = &basis.elements()[1];
        let f = |m: &CMat| {
            let m2 = m.dot(m);
            trace(&m2.dot(m))
        };
        // Exact derivative: d/ds tr((a e^{sX})^3) = 3 tr(a X a a) at s=0 by cyclicity.
        let exact = trace(&a.dot(x).dot(&a).dot(&a)) * C64::new(3.0, 0.0);
        let e1 = (grad_fd(f, &a, x, Side::Left, 1e-2) - exact).norm();
        let e2 = (grad_fd(f, &a, x, Side::Left, 5e-3) - exact).norm();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }
}
