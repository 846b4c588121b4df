//! Independent reference computations for tests.
//!
//! Nothing here shares a code path with the production solvers: Sylvester
//! equations go through Kronecker vectorization, H2 norms through frequency
//! quadrature, derivatives through central differences.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{CMat, Mat};
use crate::lti::StateSpace;

pub fn random_matrix(seed: u64, rows: usize, cols: usize) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// `(A, E)` with `E` well conditioned and `E^{-1} A` Hurwitz.
pub fn random_stable_pencil(seed: u64, n: usize) -> (Mat, Mat) {
    let d = random_matrix(seed, n, n);
    let shift = d.norm() + 0.2;
    let a0 = d - Mat::identity(n, n) * shift;
    let e = Mat::identity(n, n) + random_matrix(seed.wrapping_mul(31).wrapping_add(1), n, n) * (0.3 / n as f64);
    let a = &e * a0;
    (a, e)
}

/// Random stable descriptor system of order `n`.
pub fn random_system(seed: u64, n: usize, m: usize, p: usize) -> StateSpace {
    let (a, e) = random_stable_pencil(seed, n);
    let b = random_matrix(seed ^ 0x5151, n, m);
    let c = random_matrix(seed ^ 0xA2A2, p, n);
    StateSpace::new(e, a, b, c).expect("valid random system")
}

fn kron(x: &Mat, y: &Mat) -> Mat {
    let (xr, xc) = x.shape();
    let (yr, yc) = y.shape();
    Mat::from_fn(xr * yr, xc * yc, |i, j| x[(i / yr, j / yc)] * y[(i % yr, j % yc)])
}

/// `(Ehat (x) A + Ahat (x) E) vec(X) = -vec(M)`.
pub fn sylvester_kronecker(a: &Mat, e: &Mat, ahat: &Mat, ehat: &Mat, m: &Mat) -> Mat {
    let op = kron(ehat, a) + kron(ahat, e);
    let rhs = -DMatrix::from_column_slice(m.len(), 1, m.as_slice());
    let v = op.lu().solve(&rhs).expect("nonsingular Kronecker operator");
    Mat::from_column_slice(m.nrows(), m.ncols(), v.as_slice())
}

/// Largest sine of the principal angles between the column spans of `x` and `y`
/// (symmetric: the larger of the two one-sided distances).
pub fn principal_angle_sin(x: &Mat, y: &Mat) -> f64 {
    let qx = x.clone().svd(true, false).u.unwrap().columns(0, x.ncols()).into_owned();
    let qy = y.clone().svd(true, false).u.unwrap().columns(0, y.ncols()).into_owned();
    let dx = (&qy - &qx * (qx.transpose() * &qy)).norm();
    let dy = (&qx - &qy * (qy.transpose() * &qx)).norm();
    dx.max(dy)
}

/// `C (sE - A)^{-1} B` with a plain LU, independent of the crate's solvers.
pub fn eval_direct(sys: &StateSpace, s: Complex64) -> CMat {
    let to_c = |m: &Mat| m.map(|x| Complex64::new(x, 0.0));
    let pencil = to_c(sys.e()) * s - to_c(sys.a());
    let x = pencil.lu().solve(&to_c(sys.b())).expect("s is not a pole");
    to_c(sys.c()) * x
}

/// Central finite difference of the transfer function, step `h`.
pub fn derivative_fd(sys: &StateSpace, s: Complex64, h: f64) -> CMat {
    (eval_direct(sys, s + h) - eval_direct(sys, s - h)) / Complex64::new(2.0 * h, 0.0)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        // deep levels keep the tolerance fixed: integrands of nearly cancelling
        // differences carry rounding noise that a shrinking target would chase
        let next = if depth > 18 { 0.5 * tol } else { tol };
        simpson(f, a, m, fa, flm, fm, left, next, depth - 1) + simpson(f, m, b, fm, frm, fb, right, next, depth - 1)
    }
}

/// `(1/2pi) int ||H(i w)||_F^2 dw` by adaptive Simpson after `w = tan(theta)`.
///
/// The map sends `[0, inf)` to `[0, pi/2)`; the transformed integrand stays
/// bounded for strictly proper systems, so no tail truncation is needed.
/// Realness gives the symmetric half-line doubling.
pub fn h2_norm_squared_quadrature(sys: &StateSpace, rel_tol: f64) -> f64 {
    quadrature(sys, rel_tol, 0.0)
}

/// Tolerance is `max(rel_tol * integral, abs_tol)`, in units of the integral
/// over `theta` (before the `1/pi` factor).
fn quadrature(sys: &StateSpace, rel_tol: f64, abs_tol: f64) -> f64 {
    let f = |theta: f64| {
        if theta >= std::f64::consts::FRAC_PI_2 {
            // limit of ||H(i w)||^2 (1 + w^2) as w -> inf is ||C E^{-1} B||^2
            let ceb = sys.c() * sys.e().clone().lu().solve(sys.b()).unwrap();
            return ceb.norm_squared();
        }
        let w = theta.tan();
        let h = eval_direct(sys, Complex64::new(0.0, w));
        h.iter().map(|z| z.norm_sqr()).sum::<f64>() * (1.0 + w * w)
    };
    let (a, b) = (0.0, std::f64::consts::FRAC_PI_2);
    // coarse first pass fixes the absolute tolerance scale
    let pieces = 64;
    let width = (b - a) / pieces as f64;
    let mut coarse = 0.0;
    for k in 0..pieces {
        let x0 = a + k as f64 * width;
        coarse += width / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * width) + f(x0 + width));
    }
    let tol = (rel_tol * coarse.abs()).max(abs_tol).max(f64::MIN_POSITIVE) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let x0 = a + k as f64 * width;
        let x1 = x0 + width;
        let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
        let whole = width / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson(&f, x0, x1, f0, fm, f1, whole, tol, 30);
    }
    total / std::f64::consts::PI
}

/// `||x - y||_H2 / ||y||_H2` by quadrature of the pointwise difference.
///
/// Unlike the Gramian of the difference realization, whose trace cancels down
/// to about `sqrt(eps)` relative accuracy, pointwise differences keep full
/// precision, so distances near `1e-8` are resolved reliably.
pub fn h2_distance(x: &StateSpace, y: &StateSpace) -> f64 {
    let diff = x.difference(y).expect("same input/output sizes");
    let den = h2_norm_squared_quadrature(y, 1e-8);
    // distances below 1e-11 relative are not resolved
    let num = quadrature(&diff, 1e-6, 1e-22 * den * std::f64::consts::PI);
    (num / den).sqrt()
}

/// Largest relative transfer-function gap at a few sample points off the
/// imaginary axis and on it.
pub fn sample_gap(x: &StateSpace, y: &StateSpace) -> f64 {
    let points = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.7),
        Complex64::new(0.3, 2.0),
        Complex64::new(1.5, -0.4),
        Complex64::new(0.0, 10.0),
    ];
    points
        .iter()
        .map(|&s| {
            let (a, b) = (eval_direct(x, s), eval_direct(y, s));
            (a - &b).norm() / b.norm()
        })
        .fold(0.0, f64::max)
}
