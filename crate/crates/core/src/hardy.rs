//! H2 geometry: norms, inner products, the tangent space at a reduced model and
//! interpolatory optimality residuals.
//!
//! All inner products are evaluated through Gramians, i.e. Sylvester and
//! Lyapunov solves; pairings against tangent directions use the closed forms
//! `<c b^H/(s - l), G> = c^H G(-conj l) b` and
//! `<c b^H/(s - l)^2, G> = -c^H G'(-conj l) b`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interp::InterpolationData;
use crate::linalg::{self, CMat};
use crate::lti::{PoleResidue, StateSpace};

fn require_stable(sys: &StateSpace) -> Result<()> {
    let (stable, abscissa) = sys.is_stable()?;
    if stable {
        Ok(())
    } else {
        Err(Error::Unstable(abscissa))
    }
}

fn inner_unchecked(h: &StateSpace, g: &StateSpace) -> Result<f64> {
    let m = h.b() * g.b().transpose();
    let x = linalg::solve_sylvester(h.a(), h.e(), g.a(), g.e(), &m)?;
    Ok((h.c() * x * g.c().transpose()).trace())
}

/// `||H||_H2^2 = tr(C P C^T)` with `A P E^T + E P A^T + B B^T = 0`.
pub fn h2_norm_squared(sys: &StateSpace) -> Result<f64> {
    require_stable(sys)?;
    Ok(inner_unchecked(sys, sys)?.max(0.0))
}

pub fn h2_norm(sys: &StateSpace) -> Result<f64> {
    h2_norm_squared(sys).map(f64::sqrt)
}

/// `<H, G>_H2 = tr(C_H X C_G^T)` with `A_H X E_G^T + E_H X A_G^T + B_H B_G^T = 0`.
pub fn h2_inner(h: &StateSpace, g: &StateSpace) -> Result<f64> {
    if h.inputs() != g.inputs() || h.outputs() != g.outputs() {
        return Err(Error::DimensionMismatch(format!(
            "h2_inner: {}x{} versus {}x{}",
            h.outputs(),
            h.inputs(),
            g.outputs(),
            g.inputs()
        )));
    }
    require_stable(h)?;
    require_stable(g)?;
    inner_unchecked(h, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Fingerprint {
    n: usize,
    m: usize,
    p: usize,
    hash: u64,
}

impl Fingerprint {
    fn of(sys: &StateSpace) -> Self {
        let mut hasher = DefaultHasher::new();
        for mat in [sys.e(), sys.a(), sys.b(), sys.c()] {
            mat.shape().hash(&mut hasher);
            for x in mat.iter() {
                x.to_bits().hash(&mut hasher);
            }
        }
        Self {
            n: sys.order(),
            m: sys.inputs(),
            p: sys.outputs(),
            hash: hasher.finish(),
        }
    }
}

/// `||H||_H2^2` of a full-order model, computed once and reused for error
/// evaluations of many reduced models.
#[derive(Debug, Clone)]
pub struct H2Cache {
    norm_h_squared: f64,
    valid_for: Fingerprint,
}

impl H2Cache {
    pub fn new(h: &StateSpace) -> Result<Self> {
        Ok(Self {
            norm_h_squared: h2_norm_squared(h)?,
            valid_for: Fingerprint::of(h),
        })
    }

    pub fn norm_squared(&self) -> f64 {
        self.norm_h_squared
    }

    pub fn norm(&self) -> f64 {
        self.norm_h_squared.sqrt()
    }

    pub fn is_valid_for(&self, h: &StateSpace) -> bool {
        self.valid_for == Fingerprint::of(h)
    }
}

/// `||H - Hhat||^2 = ||H||^2 - 2 <H, Hhat> + ||Hhat||^2`, clamped at zero.
///
/// Needs one `n x r` Sylvester solve and one `r x r` Lyapunov solve; the `n x n`
/// term comes from the cache.
pub fn h2_error_squared(cache: &H2Cache, h: &StateSpace, hhat: &StateSpace) -> Result<f64> {
    if !cache.is_valid_for(h) {
        return Err(Error::CacheMismatch);
    }
    if h.inputs() != hhat.inputs() || h.outputs() != hhat.outputs() {
        return Err(Error::DimensionMismatch("h2_error_squared: input/output sizes differ".into()));
    }
    require_stable(hhat)?;
    let cross = inner_unchecked(h, hhat)?;
    let own = inner_unchecked(hhat, hhat)?;
    Ok((cache.norm_h_squared - 2.0 * cross + own).max(0.0))
}

pub fn h2_error(cache: &H2Cache, h: &StateSpace, hhat: &StateSpace) -> Result<f64> {
    h2_error_squared(cache, h, hhat).map(f64::sqrt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleOrder {
    Simple,
    Double,
}

/// Rational tangent direction `c b^H / (s - pole)^k`, `k` = 1 or 2.
#[derive(Debug, Clone)]
pub struct TangentElement {
    pub pole: Complex64,
    pub c: DVector<Complex64>,
    pub b: DVector<Complex64>,
    pub kind: PoleOrder,
}

impl TangentElement {
    pub fn residue(&self) -> CMat {
        &self.c * self.b.adjoint()
    }

    /// Closed-form value at `s`.
    pub fn eval(&self, s: Complex64) -> CMat {
        let d = s - self.pole;
        match self.kind {
            PoleOrder::Simple => self.residue() / d,
            PoleOrder::Double => self.residue() / (d * d),
        }
    }

    /// Complex realization `(A, B, C)` with `E = I`: order one for simple
    /// elements, a 2x2 Jordan block for double ones.
    pub fn realization(&self) -> (CMat, CMat, CMat) {
        let bh = CMat::from_row_slice(1, self.b.len(), self.b.conjugate().as_slice());
        match self.kind {
            PoleOrder::Simple => (
                CMat::from_element(1, 1, self.pole),
                bh,
                CMat::from_column_slice(self.c.len(), 1, self.c.as_slice()),
            ),
            PoleOrder::Double => {
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                let a = CMat::from_row_slice(2, 2, &[self.pole, one, zero, self.pole]);
                let mut b = CMat::zeros(2, bh.ncols());
                b.row_mut(1).copy_from(&bh);
                let mut c = CMat::zeros(self.c.len(), 2);
                c.column_mut(0).copy_from(&self.c);
                (a, b, c)
            }
        }
    }

    /// `C (sI - A)^{-1} B` of [`realization`](Self::realization).
    pub fn eval_realization(&self, s: Complex64) -> Result<CMat> {
        let (a, b, c) = self.realization();
        let k = a.nrows();
        let pencil = CMat::identity(k, k) * s - a;
        Ok(c * linalg::solve_linear(&pencil, &b)?)
    }
}

/// Spanning set of the tangent space at a reduced model with simple poles:
/// for each pole `e_j b_i^H/(s-l_i)` (j over outputs), `c_i e_l^H/(s-l_i)`
/// (l over inputs) and `c_i b_i^H/(s-l_i)^2`, in that order.
#[derive(Debug, Clone)]
pub struct TangentBasis {
    pub elements: Vec<TangentElement>,
}

fn unit(len: usize, k: usize) -> DVector<Complex64> {
    DVector::from_fn(len, |i, _| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
}

fn check_simple_stable(pr: &PoleResidue) -> Result<()> {
    let scale = pr.poles.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..pr.order() {
        for j in i + 1..pr.order() {
            let gap = (pr.poles[i] - pr.poles[j]).norm();
            if gap <= 1e-8 * scale {
                return Err(Error::RepeatedPoles { gap });
            }
        }
    }
    if let Some(z) = pr.poles.iter().find(|z| z.re >= 0.0) {
        return Err(Error::Unstable(z.re));
    }
    Ok(())
}

pub fn tangent_basis(pr: &PoleResidue) -> Result<TangentBasis> {
    check_simple_stable(pr)?;
    let (m, p) = (pr.inputs(), pr.outputs());
    let mut elements = Vec::with_capacity(pr.order() * (p + m + 1));
    for i in 0..pr.order() {
        let (pole, b, c) = (pr.poles[i], &pr.b_dirs[i], &pr.c_dirs[i]);
        for j in 0..p {
            elements.push(TangentElement { pole, c: unit(p, j), b: b.clone(), kind: PoleOrder::Simple });
        }
        for l in 0..m {
            elements.push(TangentElement { pole, c: c.clone(), b: unit(m, l), kind: PoleOrder::Simple });
        }
        elements.push(TangentElement { pole, c: c.clone(), b: b.clone(), kind: PoleOrder::Double });
    }
    Ok(TangentBasis { elements })
}

/// Inner products of `Hhat - H` with every tangent basis element at `Hhat`
/// (`pr` must be the pole-residue form of `Hhat`), flattened as
/// `[re_0, im_0, re_1, im_1, ...]` in [`tangent_basis`] order.
///
/// Zero exactly when `H - Hhat` is orthogonal to the tangent space, i.e. at
/// first-order critical points of the H2 error.
pub fn riemannian_gradient_pairings(h: &StateSpace, hhat: &StateSpace, pr: &PoleResidue) -> Result<Vec<f64>> {
    if h.inputs() != hhat.inputs() || h.outputs() != hhat.outputs() {
        return Err(Error::DimensionMismatch("pairings: input/output sizes differ".into()));
    }
    let basis = tangent_basis(pr)?;
    let mut out = Vec::with_capacity(2 * basis.elements.len());
    let (m, p) = (pr.inputs(), pr.outputs());
    for i in 0..pr.order() {
        let point = -pr.poles[i].conj();
        let g = hhat.eval(point)? - h.eval(point)?;
        let dg = hhat.eval_derivative(point)? - h.eval_derivative(point)?;
        let (b, c) = (&pr.b_dirs[i], &pr.c_dirs[i]);
        let gb = &g * b;
        let cg = c.adjoint() * &g;
        let hermite = -(c.adjoint() * &dg * b)[(0, 0)];
        let values = (0..p).map(|j| gb[j]).chain((0..m).map(|l| cg[l])).chain(std::iter::once(hermite));
        for z in values {
            out.push(z.re);
            out.push(z.im);
        }
    }
    Ok(out)
}

/// Residuals of the three bitangential Hermite conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityResidual {
    /// `||F(s_i) b_i||`
    pub right_res: Vec<f64>,
    /// `||c_i^H F(s_i)||`
    pub left_res: Vec<f64>,
    /// `|c_i^H F'(s_i) b_i|`
    pub hermite_res: Vec<f64>,
    /// Max of all entries, each divided by `||c_i|| ||b_i|| * scale`.
    pub aggregate: f64,
}

/// Residuals of `F = H - Hhat` at the interpolation data, normalized by `scale`.
pub fn interpolation_residual(
    h: &StateSpace,
    hhat: &StateSpace,
    data: &InterpolationData,
    scale: f64,
) -> Result<OptimalityResidual> {
    if h.inputs() != hhat.inputs() || h.outputs() != hhat.outputs() {
        return Err(Error::DimensionMismatch("residual: input/output sizes differ".into()));
    }
    let r = data.sigmas.len();
    let mut out = OptimalityResidual {
        right_res: Vec::with_capacity(r),
        left_res: Vec::with_capacity(r),
        hermite_res: Vec::with_capacity(r),
        aggregate: 0.0,
    };
    for i in 0..r {
        let s = data.sigmas[i];
        let (b, c) = (&data.b_dirs[i], &data.c_dirs[i]);
        let f = h.eval(s)? - hhat.eval(s)?;
        let df = h.eval_derivative(s)? - hhat.eval_derivative(s)?;
        let right = (&f * b).norm();
        let left = (c.adjoint() * &f).norm();
        let hermite = (c.adjoint() * df * b)[(0, 0)].norm();
        let denom = c.norm() * b.norm() * scale;
        if denom > 0.0 {
            out.aggregate = out.aggregate.max(right.max(left).max(hermite) / denom);
        }
        out.right_res.push(right);
        out.left_res.push(left);
        out.hermite_res.push(hermite);
    }
    Ok(out)
}

/// First-order H2 optimality residual of `Hhat` for `H`: the Hermite
/// conditions of `F = H - Hhat` at the reflected poles of `Hhat` in its
/// residue directions, normalized by `||H||_H2`.
pub fn optimality_residual(h: &StateSpace, hhat: &StateSpace) -> Result<OptimalityResidual> {
    optimality_residual_scaled(h, hhat, h2_norm(h)?)
}

/// As [`optimality_residual`] with a precomputed normalization.
pub fn optimality_residual_scaled(h: &StateSpace, hhat: &StateSpace, norm_h: f64) -> Result<OptimalityResidual> {
    let pr = hhat.pole_residue()?;
    let data = InterpolationData::from_pole_residue(&pr);
    interpolation_residual(h, hhat, &data, norm_h)
}
