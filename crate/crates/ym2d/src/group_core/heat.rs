//! Heat-kernel sampling on U(N) and the exact circle-case density.
//!
//! The sampler is a geodesic random walk: a product of m group exponentials
//! of independent Gaussian Lie-algebra increments of variance t/m. The walk
//! has the exact law for N = 1 and weak bias of order t^2/m in the defining
//! representation otherwise; the default step count is calibrated so the
//! resulting bias is far below the Monte Carlo tolerances used here.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{expm, C64, CMat};
use super::{GroupElement, GroupError, GroupSpec};

/// Default walk steps for sampling the time-t heat kernel.
pub fn default_steps(t: f64) -> usize {
    (64.0 * t).ceil().max(8.0) as usize
}

/// Coarser step rule for very large N, where each step costs an N^3 matrix
/// exponential; the defining-representation bias t^2/(24 m) stays inside the
/// documented 0.02 budget of the large-N oracle.
pub fn coarse_steps(t: f64) -> usize {
    (8.0 * t).ceil().max(4.0) as usize
}

/// A standard Gaussian element of u(N) in the orthonormal basis, drawn
/// entry-wise: diagonal entries i g / sqrt(N); off-diagonal pairs
/// (a + i b)/sqrt(2N) and (-a + i b)/sqrt(2N).
pub fn gaussian_algebra<R: Rng>(spec: &GroupSpec, rng: &mut R) -> CMat {
    let n = spec.n();
    let sn = (n as f64).sqrt();
    let s2n = (2.0 * n as f64).sqrt();
    let mut m = CMat::zeros((n, n));
    for k in 0..n {
        let g: f64 = rng.sample(StandardNormal);
        m[[k, k]] = C64::new(0.0, g / sn);
    }
    for j in 0..n {
        for k in j + 1..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            m[[j, k]] = C64::new(a / s2n, b / s2n);
            m[[k, j]] = C64::new(-a / s2n, b / s2n);
        }
    }
    m
}

/// A Ginibre-style random matrix, used as generic test input.
pub fn random_matrix<R: Rng>(spec: &GroupSpec, rng: &mut R) -> CMat {
    let n = spec.n();
    let mut m = CMat::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            m[[i, j]] = C64::new(a, b);
        }
    }
    m
}

/// Haar-distributed unitary, obtained by running the walk to large time.
pub fn haar_sample<R: Rng>(spec: &GroupSpec, rng: &mut R) -> GroupElement {
    heat_sample(spec, 32.0, 64, rng)
}

/// Sample the heat kernel at time t with an m-step geodesic random walk:
/// the product of exp(sqrt(t/m) xi_j) over i.i.d. standard Gaussian xi_j.
/// t = 0 returns the identity exactly.
pub fn heat_sample<R: Rng>(spec: &GroupSpec, t: f64, steps: usize, rng: &mut R) -> GroupElement {
    assert!(t >= 0.0, "heat-kernel time must be nonnegative");
    assert!(steps >= 1);
    if t == 0.0 {
        return GroupElement::identity(spec);
    }
    let scale = C64::new((t / steps as f64).sqrt(), 0.0);
    let mut u = spec.identity();
    for _ in 0..steps {
        let xi = gaussian_algebra(spec, rng) * scale;
        u = u.dot(&expm(&xi));
    }
    GroupElement::new(u)
}

/// Sample the circle heat kernel exactly: a centered Gaussian angle of
/// variance t, reduced mod 2 pi.
pub fn u1_heat_sample<R: Rng>(t: f64, rng: &mut R) -> f64 {
    assert!(t >= 0.0);
    if t == 0.0 {
        return 0.0;
    }
    let g: f64 = rng.sample(StandardNormal);
    (g * t.sqrt()).rem_euclid(2.0 * PI)
}

/// Circle heat-kernel density with respect to the normalized Haar measure
/// d(theta)/(2 pi): the wrapped Gaussian series scaled by 2 pi, with terms
/// dropped once they fall below 1e-16. `deriv` in {0,1,2} selects the
/// density or its first or second angular derivative.
pub fn u1_heat_density_deriv(t: f64, theta: f64, deriv: usize) -> Result<f64, GroupError> {
    if t <= 0.0 {
        return Err(GroupError::NonpositiveTime(t));
    }
    assert!(deriv <= 2);
    let pref = 2.0 * PI / (2.0 * PI * t).sqrt();
    let mut total = 0.0;
    let term = |x: f64| -> f64 {
        let g = pref * (-x * x / (2.0 * t)).exp();
        match deriv {
            0 => g,
            1 => -x / t * g,
            2 => (x * x / (t * t) - 1.0 / t) * g,
            _ => unreachable!(),
        }
    };
    // k = 0 term plus symmetric tails until negligible.
    total += term(theta);
    let mut k = 1;
    loop {
        let a = term(theta + 2.0 * PI * k as f64);
        let b = term(theta - 2.0 * PI * k as f64);
        total += a + b;
        let tail = (theta.abs() + 2.0 * PI * k as f64).powi(2 * deriv as i32)
            / t.powi(deriv as i32)
            * pref
            * (-(2.0 * PI * (k as f64) - theta.abs()).max(0.0).powi(2) / (2.0 * t)).exp();
        if tail < 1e-16 && k > 1 {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    Ok(total)
}

pub fn u1_heat_density(t: f64, theta: f64) -> Result<f64, GroupError> {
    u1_heat_density_deriv(t, theta, 0)
}

#[cfg(test)]
mod tests {
    use super::super::{dagger, eye, max_abs, ntrace};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_time_is_identity() {
        let spec = GroupSpec::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = heat_sample(&spec, 0.0, 8, &mut rng);
        assert!(max_abs(&(u.matrix() - &eye(3))) == 0.0);
    }

    #[test]
    fn samples_are_unitary() {
        let spec = GroupSpec::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let u = heat_sample(&spec, 1.5, default_steps(1.5), &mut rng);
            assert!(u.unitarity_drift() < 1e-10);
        }
    }

    #[test]
    fn mean_trace_decays_like_exp_minus_half_t() {
        // E tr(sample) = e^{-t/2} in the defining representation for any N.
        let spec = GroupSpec::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = 1.0;
        let m = default_steps(t);
        let samples = 4000;
        let mut acc = 0.0;
        for _ in 0..samples {
            acc += ntrace(heat_sample(&spec, t, m, &mut rng).matrix()).re;
        }
        let mean = acc / samples as f64;
        let want = (-t / 2.0f64).exp();
        assert!(
            (mean - want).abs() < 0.02,
            "mean {mean} vs {want}"
        );
    }

    #[test]
    fn u1_walk_matches_exact_sampler() {
        // Kolmogorov-Smirnov two-sample test of the N=1 walk against the
        // wrapped Gaussian sampler.
        let spec = GroupSpec::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = 0.8;
        let n = 2000;
        let mut a: Vec<f64> = (0..n)
            .map(|_| {
                let u = heat_sample(&spec, t, 8, &mut rng);
                u.matrix()[[0, 0]].arg().rem_euclid(2.0 * PI)
            })
            .collect();
        let mut b: Vec<f64> = (0..n).map(|_| u1_heat_sample(t, &mut rng)).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        let (mut i, mut j) = (0, 0);
        while i < n && j < n {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 - j as f64).abs() / n as f64);
        }
        // alpha = 0.001 threshold for equal sample sizes.
        let threshold = 1.95 * (2.0 / n as f64).sqrt();
        assert!(d < threshold, "KS statistic {d} over threshold {threshold}");
    }

    #[test]
    fn u1_density_normalizes() {
        for &t in &[0.2, 1.0, 4.0] {
            let n = 4000;
            let mut acc = 0.0;
            for k in 0..n {
                let theta = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                acc += u1_heat_density(t, theta).unwrap();
            }
            let integral = acc / n as f64; // against d(theta)/(2 pi)
            assert!((integral - 1.0).abs() < 1e-10, "t={t}: integral {integral}");
        }
    }

    #[test]
    fn u1_density_first_moment() {
        // E[e^{i theta}] = e^{-t/2} by quadrature.
        let t = 0.7;
        let n = 4000;
        let mut acc = 0.0;
        for k in 0..n {
            let theta = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            acc += theta.cos() * u1_heat_density(t, theta).unwrap();
        }
        let got = acc / n as f64;
        assert!((got - (-t / 2.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn density_rejects_nonpositive_time() {
        assert!(u1_heat_density(0.0, 0.3).is_err());
    }

    #[test]
    fn conjugation_invariance_of_moments() {
        // Statistics of u S u^-1 match S for fixed Haar u: check tr and tr^2.
        let spec = GroupSpec::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = haar_sample(&spec, &mut rng);
        let samples = 3000;
        let t = 0.9;
        let (mut m1, mut m1c, mut m2, mut m2c) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..samples {
            let s = heat_sample(&spec, t, default_steps(t), &mut rng);
            let conj = u.matrix().dot(s.matrix()).dot(&dagger(u.matrix()));
            m1 += ntrace(s.matrix()).re;
            m1c += ntrace(&conj).re;
            m2 += ntrace(&s.matrix().dot(s.matrix())).re;
            m2c += ntrace(&conj.dot(&conj)).re;
        }
        let n = samples as f64;
        assert!((m1 / n - m1c / n).abs() < 0.04);
        assert!((m2 / n - m2c / n).abs() < 0.04);
    }

    #[test]
    fn convolution_of_heat_samples() {
        // sample(s) * sample(s') has the law of sample(s + s'): first moment.
        let spec = GroupSpec::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (s, sp) = (0.4, 0.9);
        let samples = 4000;
        let mut acc = 0.0;
        for _ in 0..samples {
            let a = heat_sample(&spec, s, default_steps(s), &mut rng);
            let b = heat_sample(&spec, sp, default_steps(sp), &mut rng);
            acc += ntrace(&a.matrix().dot(b.matrix())).re;
        }
        let mean = acc / samples as f64;
        let want = (-(s + sp) / 2.0f64).exp();
        assert!((mean - want).abs() < 0.03, "{mean} vs {want}");
    }
}
