//! Dense matrix kernels.
//!
//! Everything here works on small to medium dense matrices: linear solves with an
//! explicit singularity check, generalized eigendecomposition of a regular pencil,
//! condition numbers, shifted solves `(sigma E - A) X = R` and the generalized
//! Sylvester equation `A X Ehat^T + E X Ahat^T + M = 0` that houses every Gramian
//! and projection basis in the crate.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

/// Relative pivot threshold for [`solve_linear`].
pub const PIVOT_TOL: f64 = 1e-14;

/// Above this size on both sides the Sylvester solver switches from column sweeps
/// with shifted LU solves to a two-sided Schur (Bartels-Stewart) reduction.
const COLUMN_SWEEP_MAX: usize = 24;

const SCHUR_MAX_ITER: usize = 0; // 0 lets nalgebra pick its default

/// Eigendecomposition of a regular pencil `(Ahat, Ehat)`.
#[derive(Debug, Clone)]
pub struct GeneralizedEig {
    /// Sorted by real part, then imaginary part descending; conjugate pairs are adjacent.
    pub eigenvalues: Vec<Complex64>,
    /// Column `i` satisfies `Ahat x = lambda_i Ehat x`, unit 2-norm.
    pub right_vectors: CMat,
    /// Column `i` satisfies `y^H Ahat = lambda_i y^H Ehat`; scaled so that
    /// `left^H Ehat right = I`.
    pub left_vectors: CMat,
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> Mat {
    m.map(|z| z.re)
}

fn check_finite(m: &Mat, what: &str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} has non-finite entries")))
    }
}

/// Solves `M X = RHS` by LU with partial pivoting.
///
/// Fails with [`Error::SingularMatrix`] when the smallest pivot is at or below
/// `1e-14 * ||M||_F`.
pub fn solve_linear<T>(m: &DMatrix<T>, rhs: &DMatrix<T>) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "solve_linear: matrix is {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if rhs.nrows() != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve_linear: matrix has {} rows, right-hand side {}",
            m.nrows(),
            rhs.nrows()
        )));
    }
    let threshold = PIVOT_TOL * m.norm();
    let lu = m.clone().lu();
    let pivot = lu
        .u()
        .diagonal()
        .iter()
        .map(|d| d.clone().modulus())
        .fold(f64::INFINITY, f64::min);
    if !(pivot > threshold) {
        return Err(Error::SingularMatrix { pivot, threshold });
    }
    lu.solve(rhs).ok_or(Error::SingularMatrix { pivot, threshold })
}

/// Solves `(sigma E - A) X = RHS` in complex arithmetic.
pub fn solve_shifted(sigma: Complex64, e: &Mat, a: &Mat, rhs: &CMat) -> Result<CMat> {
    let shifted = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        sigma * e[(i, j)] - Complex64::new(a[(i, j)], 0.0)
    });
    solve_linear(&shifted, rhs)
}

/// Ratio of extreme singular values, `f64::INFINITY` when the matrix is
/// numerically rank deficient (smallest singular value at or below
/// `dim * eps * largest`).
pub fn condition_number(m: &Mat) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if max == 0.0 || min <= max * f64::EPSILON * m.nrows().max(m.ncols()) as f64 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Orthonormal basis for the column span of `v` (thin QR).
///
/// Fails when the smallest singular value is at or below `1e-12` times the largest.
pub fn orthonormalize(v: &Mat) -> Result<Mat> {
    let sv = v.clone().svd(false, false).singular_values;
    let ratio = sv.min() / sv.max();
    if !(ratio > 1e-12) {
        return Err(Error::RankDeficient(ratio));
    }
    let q = v.clone().qr().q();
    Ok(q.columns(0, v.ncols()).into_owned())
}

fn real_schur_eigenvalues(m: &Mat) -> Result<Vec<Complex64>> {
    if m.nrows() == 1 {
        return Ok(vec![Complex64::new(m[(0, 0)], 0.0)]);
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

fn is_identity(m: &Mat) -> bool {
    m.is_square() && m.iter().enumerate().all(|(k, &x)| {
        let (i, j) = (k % m.nrows(), k / m.nrows());
        x == if i == j { 1.0 } else { 0.0 }
    })
}

/// Eigenvalues of the pencil `(A, E)`, i.e. of `E^{-1} A`, without eigenvectors.
///
/// For real input the spectrum is exactly closed under conjugation.
pub fn generalized_eigenvalues(a: &Mat, e: &Mat) -> Result<Vec<Complex64>> {
    check_finite(a, "A")?;
    check_finite(e, "E")?;
    if is_identity(e) {
        real_schur_eigenvalues(a)
    } else {
        real_schur_eigenvalues(&solve_linear(e, a)?)
    }
}

fn eig_order(x: &Complex64, y: &Complex64) -> std::cmp::Ordering {
    x.re.total_cmp(&y.re).then(y.im.total_cmp(&x.im))
}

/// Scale `v` to unit norm with its largest-modulus entry real positive.
fn normalize_phase(v: &mut DVector<Complex64>) {
    let (idx, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let pivot = v[idx];
    let scale = pivot.conj() / (pivot.norm() * v.norm());
    *v *= scale;
}

/// Eigenvector of `m` for the (already computed) eigenvalue `lambda` by shifted
/// inverse iteration.
fn inverse_iteration(m: &CMat, lambda: Complex64) -> Result<DVector<Complex64>> {
    let n = m.nrows();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut delta = 1e-12 * scale;
    // deterministic, generic start vector
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.5 / (i + 1) as f64, 0.1 * i as f64));
    for _attempt in 0..4 {
        let shifted =
            DMatrix::from_fn(n, n, |i, j| if i == j { m[(i, j)] - lambda - delta } else { m[(i, j)] });
        let lu = shifted.lu();
        let mut ok = true;
        for _ in 0..3 {
            match lu.solve(&v) {
                Some(w) if w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && w.norm() > 0.0 => {
                    v = w.unscale(w.norm());
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let residual = (m * &v - &v * lambda).norm();
            if residual <= 1e-9 * scale {
                normalize_phase(&mut v);
                return Ok(v);
            }
        }
        delta *= 100.0;
    }
    Err(Error::NoConvergence)
}

/// Eigendecomposition of the pencil `(Ahat, Ehat)` with `Ehat` invertible.
///
/// Eigenvalues come from a real Schur form, so the spectrum of a real pencil is
/// closed under conjugation exactly and conjugate eigenvalues carry conjugate
/// eigenvectors. Left vectors are obtained from the inverse of the right
/// eigenvector matrix and therefore require a non-defective pencil.
pub fn generalized_eig(ahat: &Mat, ehat: &Mat) -> Result<GeneralizedEig> {
    let r = ahat.nrows();
    if !ahat.is_square() || ehat.shape() != ahat.shape() || r == 0 {
        return Err(Error::DimensionMismatch(format!(
            "generalized_eig: A is {:?}, E is {:?}",
            ahat.shape(),
            ehat.shape()
        )));
    }
    let m = solve_linear(ehat, ahat)?;
    let mut eigenvalues = real_schur_eigenvalues(&m)?;
    eigenvalues.sort_by(eig_order);

    let mc = to_complex(&m);
    let mut right = CMat::zeros(r, r);
    let mut done: Vec<Option<DVector<Complex64>>> = vec![None; r];
    for i in 0..r {
        let lambda = eigenvalues[i];
        // reuse the conjugate partner's vector when available
        let partner = (0..i).find(|&j| eigenvalues[j].im > 0.0 && eigenvalues[j].conj() == lambda);
        let v = match partner.and_then(|j| done[j].clone()) {
            Some(w) if lambda.im < 0.0 => w.map(|z| z.conj()),
            _ => inverse_iteration(&mc, lambda)?,
        };
        right.set_column(i, &v);
        done[i] = Some(v);
    }

    // left^H = right^{-1} Ehat^{-1}
    let inv_right = solve_linear(&right, &CMat::identity(r, r)).map_err(|_| Error::NoConvergence)?;
    let left = solve_linear(&to_complex(&ehat.transpose()), &inv_right.adjoint())?;

    Ok(GeneralizedEig {
        eigenvalues,
        right_vectors: right,
        left_vectors: left,
    })
}

/// Solves the generalized Sylvester equation
/// `A X Ehat^T + E X Ahat^T + M = 0` for real `X` (`n x r`).
///
/// The smaller pencil is reduced to complex Schur form and the equation is
/// swept column by column with shifted solves on the larger side; when both
/// sides are large the larger pencil is reduced as well (Bartels-Stewart).
/// Fails with [`Error::SpectrumCollision`] when some `mu + nu = 0` with `mu` an
/// eigenvalue of `(A, E)` and `nu` of `(Ahat, Ehat)`.
pub fn solve_sylvester(a: &Mat, e: &Mat, ahat: &Mat, ehat: &Mat, m: &Mat) -> Result<Mat> {
    let n = a.nrows();
    let r = ahat.nrows();
    if !a.is_square() || e.shape() != a.shape() {
        return Err(Error::DimensionMismatch(format!(
            "sylvester: A is {:?}, E is {:?}",
            a.shape(),
            e.shape()
        )));
    }
    if !ahat.is_square() || ehat.shape() != ahat.shape() {
        return Err(Error::DimensionMismatch(format!(
            "sylvester: Ahat is {:?}, Ehat is {:?}",
            ahat.shape(),
            ehat.shape()
        )));
    }
    if m.shape() != (n, r) {
        return Err(Error::DimensionMismatch(format!(
            "sylvester: right-hand side is {:?}, expected {:?}",
            m.shape(),
            (n, r)
        )));
    }
    for (mat, name) in [(a, "A"), (e, "E"), (ahat, "Ahat"), (ehat, "Ehat"), (m, "M")] {
        check_finite(mat, name)?;
    }
    if r > n {
        // transpose: Ahat X^T E^T + Ehat X^T A^T + M^T = 0
        return Ok(solve_sylvester(ahat, ehat, a, e, &m.transpose())?.transpose());
    }
    if r > COLUMN_SWEEP_MAX {
        bartels_stewart(a, e, ahat, ehat, m)
    } else {
        column_sweep(a, e, ahat, ehat, m)
    }
}

fn complex_schur(m: &Mat) -> Result<(CMat, CMat)> {
    let mc = to_complex(m);
    if m.nrows() == 1 {
        return Ok((CMat::identity(1, 1), mc));
    }
    let schur = mc
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    Ok(schur.unpack())
}

fn collision(err: Error) -> Error {
    match err {
        Error::SingularMatrix { .. } => Error::SpectrumCollision,
        other => other,
    }
}

/// `A X + E X N + G = 0` with `N = (Ehat^{-1} Ahat)^T = Q T Q^H`; unknown `Y = X Q`.
fn column_sweep(a: &Mat, e: &Mat, ahat: &Mat, ehat: &Mat, m: &Mat) -> Result<Mat> {
    let n = a.nrows();
    let r = ahat.nrows();
    let n_mat = solve_linear(ehat, ahat)?.transpose();
    let g = solve_linear(ehat, &m.transpose())?.transpose();
    let (q, t) = complex_schur(&n_mat)?;
    let gq = to_complex(&g) * &q;

    let ac = to_complex(a);
    let ec = to_complex(e);
    let mut y = CMat::zeros(n, r);
    for j in 0..r {
        let mut rhs = -gq.column(j).into_owned();
        if j > 0 {
            let coupling = y.columns(0, j) * t.view((0, j), (j, 1));
            rhs -= &ec * coupling;
        }
        let lhs = &ac + &ec * t[(j, j)];
        let col = solve_linear(&lhs, &DMatrix::from_column_slice(n, 1, rhs.as_slice()))
            .map_err(collision)?;
        y.set_column(j, &col.column(0));
    }
    Ok(real_part(&(y * q.adjoint())))
}

/// `L X + X N + F = 0` with `L = E^{-1} A = U S U^H`, `N = (Ehat^{-1} Ahat)^T = Q T Q^H`.
fn bartels_stewart(a: &Mat, e: &Mat, ahat: &Mat, ehat: &Mat, m: &Mat) -> Result<Mat> {
    let n = a.nrows();
    let r = ahat.nrows();
    let l = solve_linear(e, a)?;
    let n_mat = solve_linear(ehat, ahat)?.transpose();
    let f = solve_linear(ehat, &solve_linear(e, m)?.transpose())?.transpose();
    let (u, s) = complex_schur(&l)?;
    let (q, t) = complex_schur(&n_mat)?;
    let fh = u.adjoint() * to_complex(&f) * &q;

    let scale = s.norm() + t.norm();
    let mut y = CMat::zeros(n, r);
    for j in 0..r {
        let mut rhs: DVector<Complex64> = -fh.column(j).into_owned();
        if j > 0 {
            rhs -= y.columns(0, j) * t.view((0, j), (j, 1));
        }
        let shift = t[(j, j)];
        // upper-triangular back substitution with S + shift I
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for k in i + 1..n {
                acc -= s[(i, k)] * y[(k, j)];
            }
            let d = s[(i, i)] + shift;
            if d.norm() <= PIVOT_TOL * scale {
                return Err(Error::SpectrumCollision);
            }
            y[(i, j)] = acc / d;
        }
    }
    Ok(real_part(&(u * y * q.adjoint())))
}

/// Relative residual `||A X Ehat^T + E X Ahat^T + M||_F / max(1, ||M||_F)`.
pub fn sylvester_residual(a: &Mat, e: &Mat, ahat: &Mat, ehat: &Mat, m: &Mat, x: &Mat) -> f64 {
    let res = a * x * ehat.transpose() + e * x * ahat.transpose() + m;
    res.norm() / m.norm().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use proptest::prelude::*;

    fn m1(x: f64) -> Mat {
        Mat::from_element(1, 1, x)
    }

    #[test]
    fn solve_linear_identity_and_diagonal() {
        let x = solve_linear(&Mat::identity(2, 2), &Mat::from_column_slice(2, 1, &[3.0, 4.0])).unwrap();
        assert_eq!(x.as_slice(), &[3.0, 4.0]);
        let d = Mat::from_diagonal(&DVector::from_vec(vec![2.0, 4.0]));
        let x = solve_linear(&d, &Mat::from_column_slice(2, 1, &[2.0, 4.0])).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn solve_linear_zero_matrix_is_singular() {
        let err = solve_linear(&Mat::zeros(2, 2), &Mat::from_element(2, 1, 1.0)).unwrap_err();
        assert!(matches!(err, Error::SingularMatrix { .. }));
    }

    #[test]
    fn solve_linear_near_singular_is_rejected() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-15]);
        assert!(solve_linear(&m, &Mat::from_element(2, 1, 1.0)).is_err());
    }

    #[test]
    fn sylvester_scalar_cases() {
        let x = solve_sylvester(&m1(-1.0), &m1(1.0), &m1(-2.0), &m1(1.0), &m1(1.0)).unwrap();
        assert!((x[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        let x = solve_sylvester(&m1(-1.0), &m1(1.0), &m1(-1.0), &m1(1.0), &m1(1.0)).unwrap();
        assert!((x[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sylvester_spectrum_collision() {
        let err = solve_sylvester(&m1(1.0), &m1(1.0), &m1(-1.0), &m1(1.0), &m1(1.0)).unwrap_err();
        assert_eq!(err, Error::SpectrumCollision);
    }

    #[test]
    fn sylvester_rejects_bad_shapes() {
        let err = solve_sylvester(&Mat::identity(2, 2), &Mat::identity(2, 2), &m1(-1.0), &m1(1.0), &m1(1.0));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn sylvester_repeated_small_eigenvalues() {
        // Jordan block on the small side: the Schur sweep does not need simple eigenvalues
        let a = Mat::from_row_slice(3, 3, &[-1.0, 0.3, 0.0, 0.0, -2.0, 0.5, 0.1, 0.0, -3.0]);
        let ahat = Mat::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -1.0]);
        let m = Mat::from_fn(3, 2, |i, j| (i + 2 * j) as f64 - 1.5);
        let x = solve_sylvester(&a, &Mat::identity(3, 3), &ahat, &Mat::identity(2, 2), &m).unwrap();
        assert!(sylvester_residual(&a, &Mat::identity(3, 3), &ahat, &Mat::identity(2, 2), &m, &x) < 1e-12);
    }

    #[test]
    fn sylvester_large_paths_agree_with_kronecker() {
        // both sides above the sweep threshold and the transposed branch
        for (seed, n, r) in [(3u64, 27usize, 26usize), (4, 6, 9)] {
            let (a, e) = oracles::random_stable_pencil(seed, n);
            let (ah, eh) = oracles::random_stable_pencil(seed + 100, r);
            let m = oracles::random_matrix(seed + 200, n, r);
            let x = solve_sylvester(&a, &e, &ah, &eh, &m).unwrap();
            let xo = oracles::sylvester_kronecker(&a, &e, &ah, &eh, &m);
            assert!((&x - &xo).norm() <= 1e-9 * xo.norm());
            assert!(sylvester_residual(&a, &e, &ah, &eh, &m, &x) <= 1e-10);
        }
    }

    #[test]
    fn generalized_eig_diagonal_pencil() {
        let a = Mat::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0]));
        let g = generalized_eig(&a, &Mat::identity(2, 2)).unwrap();
        assert_eq!(g.eigenvalues, vec![Complex64::new(-2.0, 0.0), Complex64::new(-1.0, 0.0)]);
        // permuted identity columns
        assert!((g.right_vectors[(1, 0)].re - 1.0).abs() < 1e-14);
        assert!((g.right_vectors[(0, 1)].re - 1.0).abs() < 1e-14);
        assert!(g.right_vectors[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn generalized_eig_complex_pair() {
        let a = Mat::from_row_slice(2, 2, &[-1.0, 1.0, -1.0, -1.0]);
        let g = generalized_eig(&a, &Mat::identity(2, 2)).unwrap();
        assert!((g.eigenvalues[0] - Complex64::new(-1.0, 1.0)).norm() < 1e-14);
        assert!((g.eigenvalues[1] - Complex64::new(-1.0, -1.0)).norm() < 1e-14);
        let conj = g.right_vectors.column(0).map(|z| z.conj());
        assert_eq!(conj, g.right_vectors.column(1).into_owned());
    }

    #[test]
    fn generalized_eig_scalar_pencil() {
        let g = generalized_eig(&m1(-3.0), &m1(2.0)).unwrap();
        assert!((g.eigenvalues[0].re + 1.5).abs() < 1e-15);
    }

    #[test]
    fn generalized_eig_relations_and_biorthogonality() {
        for seed in 0..20 {
            let (a, e) = oracles::random_stable_pencil(seed, 5);
            let g = generalized_eig(&a, &e).unwrap();
            let (ac, ec) = (to_complex(&a), to_complex(&e));
            let lam = CMat::from_diagonal(&DVector::from_vec(g.eigenvalues.clone()));
            let right = &ac * &g.right_vectors - &ec * &g.right_vectors * &lam;
            let left = g.left_vectors.adjoint() * &ac - &lam * g.left_vectors.adjoint() * &ec;
            let scale = a.norm() + e.norm();
            assert!(right.norm() <= 1e-10 * scale, "right residual {}", right.norm());
            assert!(left.norm() <= 1e-10 * scale * g.left_vectors.norm());
            let bi = g.left_vectors.adjoint() * &ec * &g.right_vectors - CMat::identity(5, 5);
            assert!(bi.norm() < 1e-10);
            for x in g.right_vectors.column_iter() {
                assert!((x.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn condition_number_examples() {
        assert!((condition_number(&Mat::identity(3, 3)) - 1.0).abs() < 1e-15);
        let d = Mat::from_diagonal(&DVector::from_vec(vec![1.0, 1e-6]));
        assert!((condition_number(&d) - 1e6).abs() < 1e-6);
        assert_eq!(condition_number(&Mat::from_element(2, 2, 1.0)), f64::INFINITY);
    }

    #[test]
    fn solve_shifted_examples() {
        let b = CMat::from_column_slice(2, 1, &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let x = solve_shifted(Complex64::new(0.0, 0.0), &Mat::identity(2, 2), &(-Mat::identity(2, 2)), &b).unwrap();
        assert_eq!(x, b);
        let one = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
        let x = solve_shifted(Complex64::new(1.0, 0.0), &m1(1.0), &m1(-1.0), &one).unwrap();
        assert!((x[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(solve_shifted(Complex64::new(-1.0, 0.0), &m1(1.0), &m1(-1.0), &one).is_err());
    }

    #[test]
    fn orthonormalize_preserves_span_and_rejects_rank_loss() {
        let v = Mat::from_row_slice(3, 2, &[1.0, 2.0, 0.0, 1.0, 1.0, 0.0]);
        let q = orthonormalize(&v).unwrap();
        assert!((q.transpose() * &q - Mat::identity(2, 2)).norm() < 1e-14);
        assert!(oracles::principal_angle_sin(&q, &v) < 1e-12);
        let dep = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(orthonormalize(&dep), Err(Error::RankDeficient(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn sylvester_matches_kronecker(seed in 0u64..10_000, n in 1usize..=8, r in 1usize..=4) {
            let (a, e) = oracles::random_stable_pencil(seed, n);
            let (ah, eh) = oracles::random_stable_pencil(seed ^ 0xABCD, r);
            let m = oracles::random_matrix(seed.wrapping_add(7), n, r);
            let x = solve_sylvester(&a, &e, &ah, &eh, &m).unwrap();
            let xo = oracles::sylvester_kronecker(&a, &e, &ah, &eh, &m);
            prop_assert!((&x - &xo).norm() <= 1e-9 * xo.norm().max(1e-300));
            prop_assert!(sylvester_residual(&a, &e, &ah, &eh, &m, &x) <= 1e-10);
        }

        #[test]
        fn condition_number_is_scale_invariant(seed in 0u64..10_000, c in prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64]) {
            let m = oracles::random_matrix(seed, 4, 4) + Mat::identity(4, 4) * 3.0;
            let k0 = condition_number(&m);
            let k1 = condition_number(&(m * c));
            prop_assert!((k0 - k1).abs() <= 1e-12 * k0);
        }

        #[test]
        fn real_pencil_spectrum_is_conjugation_closed(seed in 0u64..10_000, n in 1usize..=7) {
            let (a, e) = oracles::random_stable_pencil(seed, n);
            let eig = generalized_eigenvalues(&a, &e).unwrap();
            for z in &eig {
                let hit = eig.iter().any(|w| (w - z.conj()).norm() <= 1e-10 * z.norm().max(1.0));
                prop_assert!(hit);
            }
        }
    }
}
