//! U(N) numerics: the scaled inner product <X,Y> = N trace(X* Y), orthonormal
//! Lie-algebra bases, heat-kernel sampling by geodesic random walk, the trace
//! contraction identities, and finite-difference operators on the group.

pub mod fd;
pub mod heat;
pub mod linalg;

pub use linalg::{dagger, expm, eye, max_abs, ntrace, trace, C64, CMat};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("matrix size {0} does not match group size {1}")]
    SizeMismatch(usize, usize),
    #[error("heat-kernel density needs t > 0, got {0}")]
    NonpositiveTime(f64),
}

/// The unitary group U(N) with metric <X,Y> = N trace(X* Y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    n: usize,
}

impl GroupSpec {
    pub fn new(n: usize) -> GroupSpec {
        assert!(n >= 1, "group size must be at least 1");
        GroupSpec { n }
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn identity(&self) -> CMat {
        eye(self.n)
    }
    pub fn dim(&self) -> usize {
        self.n * self.n
    }
}

/// A unitary matrix with drift control: re-unitarized once the deviation of
/// U* U from the identity exceeds 1e-10.
#[derive(Debug, Clone)]
pub struct GroupElement {
    m: CMat,
}

const UNITARITY_TOL: f64 = 1e-10;

impl GroupElement {
    pub fn new(m: CMat) -> GroupElement {
        let mut g = GroupElement { m };
        g.renormalize_if_needed();
        g
    }
    pub fn identity(spec: &GroupSpec) -> GroupElement {
        GroupElement { m: spec.identity() }
    }
    pub fn matrix(&self) -> &CMat {
        &self.m
    }
    pub fn into_matrix(self) -> CMat {
        self.m
    }
    pub fn unitarity_drift(&self) -> f64 {
        max_abs(&(dagger(&self.m).dot(&self.m) - eye(self.m.nrows())))
    }
    pub fn renormalize_if_needed(&mut self) {
        if self.unitarity_drift() > UNITARITY_TOL {
            // One Newton-Schulz step toward the polar factor: U (3I - U*U)/2.
            let n = self.m.nrows();
            let g = dagger(&self.m).dot(&self.m);
            let corr = (eye(n) * C64::new(3.0, 0.0) - g) * C64::new(0.5, 0.0);
            self.m = self.m.dot(&corr);
        }
    }
}

/// Orthonormal basis of the Lie algebra u(N) under <X,Y> = N trace(X* Y):
/// the diagonal family i E_kk / sqrt(N) together with
/// (E_jk - E_kj) / sqrt(2N) and i (E_jk + E_kj) / sqrt(2N) for j < k.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    spec: GroupSpec,
    elements: Vec<CMat>,
}

impl OrthonormalBasis {
    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Gram matrix deviation from the identity, in max norm.
    pub fn gram_defect(&self) -> f64 {
        let n = self.spec.n as f64;
        let mut worst: f64 = 0.0;
        for (i, x) in self.elements.iter().enumerate() {
            for (j, y) in self.elements.iter().enumerate() {
                let ip = (trace(&dagger(x).dot(y)) * C64::new(n, 0.0)).re
                    - if i == j { 1.0 } else { 0.0 };
                let im = (trace(&dagger(x).dot(y)) * C64::new(n, 0.0)).im;
                worst = worst.max(ip.abs()).max(im.abs());
            }
        }
        worst
    }
}

pub fn unitary_basis(spec: &GroupSpec) -> OrthonormalBasis {
    let n = spec.n;
    let sn = (n as f64).sqrt();
    let s2n = (2.0 * n as f64).sqrt();
    let mut elements = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut m = CMat::zeros((n, n));
        m[[k, k]] = C64::new(0.0, 1.0 / sn);
        elements.push(m);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut re = CMat::zeros((n, n));
            re[[j, k]] = C64::new(1.0 / s2n, 0.0);
            re[[k, j]] = C64::new(-1.0 / s2n, 0.0);
            elements.push(re);
            let mut im = CMat::zeros((n, n));
            im[[j, k]] = C64::new(0.0, 1.0 / s2n);
            im[[k, j]] = C64::new(0.0, 1.0 / s2n);
            elements.push(im);
        }
    }
    OrthonormalBasis { spec: *spec, elements }
}

/// Sum over the orthonormal basis of X C X, computed by direct summation.
/// Equals -tr(C) I with tr the normalized trace.
pub fn contract_basis(spec: &GroupSpec, c: &CMat) -> Result<CMat, GroupError> {
    if c.nrows() != spec.n || c.ncols() != spec.n {
        return Err(GroupError::SizeMismatch(c.nrows(), spec.n));
    }
    let basis = unitary_basis(spec);
    let mut acc = CMat::zeros((spec.n, spec.n));
    for x in basis.elements() {
        acc = acc + x.dot(c).dot(x);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_size_and_gram() {
        for n in 1..=4 {
            let spec = GroupSpec::new(n);
            let b = unitary_basis(&spec);
            assert_eq!(b.len(), n * n);
            assert!(b.gram_defect() < 1e-12, "gram defect at n={n}: {}", b.gram_defect());
        }
    }

    #[test]
    fn n1_basis_is_i() {
        let b = unitary_basis(&GroupSpec::new(1));
        assert_eq!(b.len(), 1);
        assert!((b.elements()[0][[0, 0]] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sum_of_squares_is_minus_identity() {
        for n in [1, 2, 4] {
            let spec = GroupSpec::new(n);
            let id = contract_basis(&spec, &eye(n)).unwrap();
            assert!(max_abs(&(id + eye(n))) < 1e-12);
        }
    }

    #[test]
    fn contraction_of_e11() {
        let spec = GroupSpec::new(3);
        let mut c = CMat::zeros((3, 3));
        c[[0, 0]] = C64::new(1.0, 0.0);
        let got = contract_basis(&spec, &c).unwrap();
        let want = eye(3) * C64::new(-1.0 / 3.0, 0.0);
        assert!(max_abs(&(got - want)) < 1e-12);
    }

    #[test]
    fn contraction_of_random_matrix() {
        let spec = GroupSpec::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = heat::random_matrix(&spec, &mut rng);
        let got = contract_basis(&spec, &c).unwrap();
        let want = eye(4) * (-ntrace(&c));
        assert!(max_abs(&(got - want)) < 1e-12);
    }

    #[test]
    fn size_mismatch_rejected() {
        let spec = GroupSpec::new(2);
        assert!(contract_basis(&spec, &eye(3)).is_err());
    }
}
