//! Bitangential Hermite interpolation by Petrov-Galerkin projection.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat};
use crate::lti::{PoleResidue, StateSpace};

/// Interpolation points with right (`b`) and left (`c`) tangential directions.
#[derive(Debug, Clone)]
pub struct InterpolationData {
    pub sigmas: Vec<Complex64>,
    pub b_dirs: Vec<DVector<Complex64>>,
    pub c_dirs: Vec<DVector<Complex64>>,
}

/// Relative tolerance for matching conjugate interpolation points.
const PAIR_TOL: f64 = 1e-8;

impl InterpolationData {
    /// Reflected poles `-conj(lambda_i)` with the residue directions of `pr`.
    pub fn from_pole_residue(pr: &PoleResidue) -> Self {
        Self {
            sigmas: pr.poles.iter().map(|l| -l.conj()).collect(),
            b_dirs: pr.b_dirs.clone(),
            c_dirs: pr.c_dirs.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// Groups points into real singletons and conjugate pairs; returns the
    /// representative index of each group (the one with positive imaginary
    /// part for pairs) and whether it is a pair.
    fn conjugate_groups(&self) -> Result<Vec<(usize, bool)>> {
        let r = self.len();
        if self.b_dirs.len() != r || self.c_dirs.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "interpolation data: {r} points, {} right and {} left directions",
                self.b_dirs.len(),
                self.c_dirs.len()
            )));
        }
        let mut used = vec![false; r];
        let mut groups = Vec::with_capacity(r);
        for i in 0..r {
            if used[i] {
                continue;
            }
            used[i] = true;
            let s = self.sigmas[i];
            let tol = PAIR_TOL * s.norm().max(1.0);
            if s.im.abs() <= tol {
                groups.push((i, false));
                continue;
            }
            let partner = (0..r).find(|&j| !used[j] && (self.sigmas[j] - s.conj()).norm() <= tol);
            match partner {
                Some(j) => {
                    used[j] = true;
                    groups.push((if s.im > 0.0 { i } else { j }, true));
                }
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "interpolation point {s} has no conjugate partner"
                    )))
                }
            }
        }
        Ok(groups)
    }
}

/// Real projection matrices `V`, `W` (both `n x r`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub v: Mat,
    pub w: Mat,
}

impl ProjectionPair {
    /// Span-preserving orthonormalization of both bases.
    pub fn orthonormalized(&self) -> Result<Self> {
        Ok(Self {
            v: linalg::orthonormalize(&self.v)?,
            w: linalg::orthonormalize(&self.w)?,
        })
    }
}

fn check_rank(m: &Mat) -> Result<()> {
    let sv = m.clone().svd(false, false).singular_values;
    let ratio = sv.min() / sv.max();
    if ratio > 1e-12 {
        Ok(())
    } else {
        Err(Error::RankDeficient(ratio))
    }
}

/// Rational Krylov bases: `V` spans `(s_i E - A)^{-1} B b_i`, `W` spans
/// `(s_i E - A)^{-H} C^T c_i`. Conjugate pairs contribute the real and imaginary
/// parts of one solve, so both bases are real.
pub fn projection_bases(h: &StateSpace, data: &InterpolationData) -> Result<ProjectionPair> {
    let groups = data.conjugate_groups()?;
    let n = h.order();
    let r = data.len();
    let bc = linalg::to_complex(h.b());
    let ct = linalg::to_complex(&h.c().transpose());
    let (et, at) = (h.e().transpose(), h.a().transpose());
    let mut v = Mat::zeros(n, r);
    let mut w = Mat::zeros(n, r);
    let mut col = 0;
    for (i, pair) in groups {
        let s = data.sigmas[i];
        let (b, c) = (&data.b_dirs[i], &data.c_dirs[i]);
        if b.len() != h.inputs() || c.len() != h.outputs() {
            return Err(Error::DimensionMismatch("tangential direction sizes".into()));
        }
        let rhs_v = CMat::from_column_slice(n, 1, (&bc * b).as_slice());
        let rhs_w = CMat::from_column_slice(n, 1, (&ct * c).as_slice());
        let vi = linalg::solve_shifted(s, h.e(), h.a(), &rhs_v)?;
        let wi = linalg::solve_shifted(s.conj(), &et, &at, &rhs_w)?;
        v.set_column(col, &vi.column(0).map(|z| z.re));
        w.set_column(col, &wi.column(0).map(|z| z.re));
        col += 1;
        if pair {
            v.set_column(col, &vi.column(0).map(|z| z.im));
            w.set_column(col, &wi.column(0).map(|z| z.im));
            col += 1;
        }
    }
    check_rank(&v)?;
    check_rank(&w)?;
    Ok(ProjectionPair { v, w })
}

/// Bases from Sylvester equations against the reduced model `hk`:
/// `A V Ek^T + E V Ak^T + B Bk^T = 0` and `A^T W Ek + E^T W Ak + C^T Ck = 0`.
///
/// When `hk` has simple poles these span the same spaces as
/// [`projection_bases`] at the reflected poles of `hk` in its residue directions.
pub fn projection_bases_sylvester(h: &StateSpace, hk: &StateSpace) -> Result<ProjectionPair> {
    if h.inputs() != hk.inputs() || h.outputs() != hk.outputs() {
        return Err(Error::DimensionMismatch("projection_bases_sylvester: input/output sizes differ".into()));
    }
    let v = linalg::solve_sylvester(h.a(), h.e(), hk.a(), hk.e(), &(h.b() * hk.b().transpose()))?;
    let w = linalg::solve_sylvester(
        &h.a().transpose(),
        &h.e().transpose(),
        &hk.a().transpose(),
        &hk.e().transpose(),
        &(h.c().transpose() * hk.c()),
    )?;
    Ok(ProjectionPair { v, w })
}

/// `(W^T E V, W^T A V, W^T B, C V)`.
///
/// Fails when `W^T E V` has condition number above `1e12`.
pub fn petrov_galerkin(h: &StateSpace, pair: &ProjectionPair) -> Result<StateSpace> {
    let (v, w) = (&pair.v, &pair.w);
    if v.nrows() != h.order() || w.shape() != v.shape() {
        return Err(Error::DimensionMismatch(format!(
            "petrov_galerkin: V is {:?}, W is {:?}, order {}",
            v.shape(),
            w.shape(),
            h.order()
        )));
    }
    let wt = w.transpose();
    let e = &wt * h.e() * v;
    let cond = linalg::condition_number(&e);
    if !(cond <= 1e12) {
        return Err(Error::SingularProjection(cond));
    }
    StateSpace::new(e, &wt * h.a() * v, &wt * h.b(), h.c() * v)
}

/// Hermite interpolant of `h` at the reflected poles of `hk` in its residue
/// directions: one classical IRKA step.
pub fn hermite_interpolant(h: &StateSpace, hk: &StateSpace) -> Result<StateSpace> {
    let pair = projection_bases_sylvester(h, hk)?.orthonormalized()?;
    petrov_galerkin(h, &pair)
}

/// Hermite interpolant of `h` for explicit interpolation data.
pub fn interpolant_from_data(h: &StateSpace, data: &InterpolationData) -> Result<StateSpace> {
    let pair = projection_bases(h, data)?.orthonormalized()?;
    petrov_galerkin(h, &pair)
}
