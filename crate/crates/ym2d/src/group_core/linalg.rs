//! Dense complex linear algebra helpers: conjugate transpose, LU solve, and
//! the scaling-and-squaring Pade matrix exponential.

use ndarray::Array2;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = Array2<C64>;

pub fn eye(n: usize) -> CMat {
    Array2::eye(n)
}

pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn trace(a: &CMat) -> C64 {
    a.diag().sum()
}

/// Normalized trace tr = trace / N.
pub fn ntrace(a: &CMat) -> C64 {
    trace(a) / C64::new(a.nrows() as f64, 0.0)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solve A X = B by LU with partial pivoting. A and B are consumed.
pub fn lu_solve(mut a: CMat, mut b: CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.nrows(), n);
    for k in 0..n {
        let mut p = k;
        let mut best = a[[k, k]].norm();
        for i in k + 1..n {
            let v = a[[i, k]].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                let t = a[[k, j]];
                a[[k, j]] = a[[p, j]];
                a[[p, j]] = t;
            }
            for j in 0..b.ncols() {
                let t = b[[k, j]];
                b[[k, j]] = b[[p, j]];
                b[[p, j]] = t;
            }
        }
        let piv = a[[k, k]];
        for i in k + 1..n {
            let m = a[[i, k]] / piv;
            if m.norm() == 0.0 {
                continue;
            }
            a[[i, k]] = m;
            for j in k + 1..n {
                let akj = a[[k, j]];
                a[[i, j]] -= m * akj;
            }
        }
    }
    // Forward substitution with the stored multipliers.
    for k in 0..n {
        for i in k + 1..n {
            let m = a[[i, k]];
            if m.norm() == 0.0 {
                continue;
            }
            for j in 0..b.ncols() {
                let bkj = b[[k, j]];
                b[[i, j]] -= m * bkj;
            }
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        let piv = a[[k, k]];
        for j in 0..b.ncols() {
            b[[k, j]] /= piv;
        }
        for i in 0..k {
            let m = a[[i, k]];
            if m.norm() == 0.0 {
                continue;
            }
            for j in 0..b.ncols() {
                let bkj = b[[k, j]];
                b[[i, j]] -= m * bkj;
            }
        }
    }
    b
}

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

fn pade_uv(a: &CMat, b: &[f64]) -> (CMat, CMat) {
    // Degrees 3..9: U = A (b3 A2 + b1 I) style even/odd split.
    let n = a.nrows();
    let a2 = a.dot(a);
    let mut even = eye(n) * C64::new(b[0], 0.0);
    let mut odd = eye(n) * C64::new(b[1], 0.0);
    let mut pow = eye(n);
    let mut k = 2;
    while k < b.len() {
        pow = pow.dot(&a2);
        even = even + &pow * C64::new(b[k], 0.0);
        if k + 1 < b.len() {
            odd = odd + &pow * C64::new(b[k + 1], 0.0);
        }
        k += 2;
    }
    (a.dot(&odd), even)
}

/// Matrix exponential by scaling and squaring with Pade approximants.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = one_norm(a);
    let coeffs_3: [f64; 4] = [120., 60., 12., 1.];
    let coeffs_5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
    let coeffs_7: [f64; 8] = [17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.];
    let coeffs_9: [f64; 10] =
        [17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160., 110880., 3960., 90., 1.];
    let coeffs_13: [f64; 14] = [
        64764752532480000.,
        32382376266240000.,
        7771770303897600.,
        1187353796428800.,
        129060195264000.,
        10559470521600.,
        670442572800.,
        33522128640.,
        1323241920.,
        40840800.,
        960960.,
        16380.,
        182.,
        1.,
    ];
    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade_uv(a, &coeffs_3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = pade_uv(a, &coeffs_5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade_uv(a, &coeffs_7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade_uv(a, &coeffs_9);
        (u, v, 0)
    } else {
        let s = ((norm / THETA_13).log2().ceil() as i32).max(0);
        let scaled = a * C64::new((0.5f64).powi(s), 0.0);
        let b = &coeffs_13;
        let a2 = scaled.dot(&scaled);
        let a4 = a2.dot(&a2);
        let a6 = a2.dot(&a4);
        let u_inner = &a6 * C64::new(b[13], 0.0)
            + &a4 * C64::new(b[11], 0.0)
            + &a2 * C64::new(b[9], 0.0);
        let u_rest = &a6 * C64::new(b[7], 0.0)
            + &a4 * C64::new(b[5], 0.0)
            + &a2 * C64::new(b[3], 0.0)
            + &(eye(n) * C64::new(b[1], 0.0));
        let u = scaled.dot(&(a6.dot(&u_inner) + u_rest));
        let v_inner = &a6 * C64::new(b[12], 0.0)
            + &a4 * C64::new(b[10], 0.0)
            + &a2 * C64::new(b[8], 0.0);
        let v = a6.dot(&v_inner)
            + &a6 * C64::new(b[6], 0.0)
            + &a4 * C64::new(b[4], 0.0)
            + &a2 * C64::new(b[2], 0.0)
            + &(eye(n) * C64::new(b[0], 0.0));
        (u, v, s)
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = lu_solve(q, p);
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_exp(a: &CMat, terms: usize) -> CMat {
        let mut acc = eye(a.nrows());
        let mut term = eye(a.nrows());
        for k in 1..=terms {
            term = term.dot(a) / C64::new(k as f64, 0.0);
            acc = acc + &term;
        }
        acc
    }

    #[test]
    fn expm_matches_taylor_small_norm() {
        let a = ndarray::arr2(&[
            [C64::new(0.0, 0.2), C64::new(0.1, 0.05)],
            [C64::new(-0.1, 0.05), C64::new(0.0, -0.3)],
        ]);
        let e = expm(&a);
        let t = taylor_exp(&a, 30);
        assert!(max_abs(&(&e - &t)) < 1e-13);
    }

    #[test]
    fn expm_scaling_branch() {
        let a = ndarray::arr2(&[
            [C64::new(0.0, 7.0), C64::new(3.0, 1.0)],
            [C64::new(-3.0, 1.0), C64::new(0.0, -5.0)],
        ]);
        let e = expm(&a);
        // exp(A/16)^16 via Taylor as an independent route.
        let small = &a / C64::new(16.0, 0.0);
        let mut t = taylor_exp(&small, 40);
        for _ in 0..4 {
            t = t.dot(&t);
        }
        assert!(max_abs(&(&e - &t)) < 1e-11);
    }

    #[test]
    fn skew_hermitian_exponentiates_to_unitary() {
        let a = ndarray::arr2(&[
            [C64::new(0.0, 1.3), C64::new(0.7, 0.2)],
            [C64::new(-0.7, 0.2), C64::new(0.0, -0.4)],
        ]);
        let u = expm(&a);
        let drift = max_abs(&(dagger(&u).dot(&u) - eye(2)));
        assert!(drift < 1e-13);
    }

    #[test]
    fn lu_solves_identity() {
        let a = ndarray::arr2(&[
            [C64::new(2.0, 1.0), C64::new(0.5, 0.0)],
            [C64::new(0.0, -1.0), C64::new(1.5, 0.5)],
        ]);
        let x = lu_solve(a.clone(), eye(2));
        assert!(max_abs(&(a.dot(&x) - eye(2))) < 1e-13);
    }
}
