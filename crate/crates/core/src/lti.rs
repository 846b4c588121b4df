//! Descriptor state-space models `H(s) = C (sE - A)^{-1} B`.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat};

/// Real descriptor realization `(E, A, B, C)`; used for both full and reduced models.
#[derive(Clone, PartialEq)]
pub struct StateSpace {
    e: Mat,
    a: Mat,
    b: Mat,
    c: Mat,
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateSpace")
            .field("order", &self.order())
            .field("inputs", &self.inputs())
            .field("outputs", &self.outputs())
            .finish()
    }
}

impl StateSpace {
    /// Builds a realization after checking dimensions and finiteness.
    ///
    /// Invertibility of `E` is checked lazily by the operations that need it.
    pub fn new(e: Mat, a: Mat, b: Mat, c: Mat) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("system order must be at least 1".into()));
        }
        if a.ncols() != n || e.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "A is {:?} and E is {:?}; both must be {n}x{n}",
                a.shape(),
                e.shape()
            )));
        }
        if b.nrows() != n || b.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!("B is {:?}, expected {n} rows", b.shape())));
        }
        if c.ncols() != n || c.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!("C is {:?}, expected {n} columns", c.shape())));
        }
        for (m, name) in [(&e, "E"), (&a, "A"), (&b, "B"), (&c, "C")] {
            if !m.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} has non-finite entries")));
            }
        }
        Ok(Self { e, a, b, c })
    }

    /// Realization with `E = I`.
    pub fn standard(a: Mat, b: Mat, c: Mat) -> Result<Self> {
        let n = a.nrows();
        Self::new(Mat::identity(n, n), a, b, c)
    }

    pub fn e(&self) -> &Mat {
        &self.e
    }
    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn c(&self) -> &Mat {
        &self.c
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }
    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }
    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }
    pub fn is_siso(&self) -> bool {
        self.inputs() == 1 && self.outputs() == 1
    }

    pub fn into_parts(self) -> (Mat, Mat, Mat, Mat) {
        (self.e, self.a, self.b, self.c)
    }

    /// `H(s) = C (sE - A)^{-1} B`.
    pub fn eval(&self, s: Complex64) -> Result<CMat> {
        let x = linalg::solve_shifted(s, &self.e, &self.a, &linalg::to_complex(&self.b))?;
        Ok(linalg::to_complex(&self.c) * x)
    }

    /// `H'(s) = -C (sE - A)^{-1} E (sE - A)^{-1} B`.
    pub fn eval_derivative(&self, s: Complex64) -> Result<CMat> {
        let x = linalg::solve_shifted(s, &self.e, &self.a, &linalg::to_complex(&self.b))?;
        let y = linalg::solve_shifted(s, &self.e, &self.a, &(linalg::to_complex(&self.e) * x))?;
        Ok(-(linalg::to_complex(&self.c) * y))
    }

    /// Generalized eigenvalues of `(A, E)`.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        linalg::generalized_eigenvalues(&self.a, &self.e)
    }

    /// Largest real part over the poles.
    pub fn spectral_abscissa(&self) -> Result<f64> {
        Ok(self.poles()?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }

    /// `(stable, spectral_abscissa)`; stable means every pole has negative real part.
    pub fn is_stable(&self) -> Result<(bool, f64)> {
        let abscissa = self.spectral_abscissa()?;
        Ok((abscissa < 0.0, abscissa))
    }

    /// Simple-pole decomposition `sum_i c_i b_i^H / (s - lambda_i)`.
    ///
    /// Each rank-one residue is split with `||b_i|| = ||c_i||` and the first
    /// nonzero entry of `c_i` real positive.
    pub fn pole_residue(&self) -> Result<PoleResidue> {
        let spectrum = self.poles()?;
        let gap = min_pairwise_gap(&spectrum);
        let scale = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if spectrum.len() > 1 && gap <= 1e-8 * scale {
            return Err(Error::RepeatedPoles { gap });
        }
        let eig = linalg::generalized_eig(&self.a, &self.e)?;
        let poles = eig.eigenvalues;
        let cc = linalg::to_complex(&self.c);
        let bt = linalg::to_complex(&self.b.transpose());
        let mut b_dirs = Vec::with_capacity(poles.len());
        let mut c_dirs = Vec::with_capacity(poles.len());
        for i in 0..poles.len() {
            let mut c = &cc * eig.right_vectors.column(i);
            let mut b = &bt * eig.left_vectors.column(i);
            balance_factors(&mut c, &mut b);
            c_dirs.push(c);
            b_dirs.push(b);
        }
        Ok(PoleResidue { poles, b_dirs, c_dirs })
    }

    /// Equivalent realization `(I, E^{-1} A, E^{-1} B, C)`.
    pub fn to_identity_e(&self) -> Result<Self> {
        let n = self.order();
        let m = self.inputs();
        let mut ab = Mat::zeros(n, n + m);
        ab.columns_mut(0, n).copy_from(&self.a);
        ab.columns_mut(n, m).copy_from(&self.b);
        let x = linalg::solve_linear(&self.e, &ab)?;
        Self::new(
            Mat::identity(n, n),
            x.columns(0, n).into_owned(),
            x.columns(n, m).into_owned(),
            self.c.clone(),
        )
    }

    /// State-space transformation `(T_l E T_r, T_l A T_r, T_l B, C T_r)`.
    pub fn transformed(&self, left: &Mat, right: &Mat) -> Result<Self> {
        Self::new(left * &self.e * right, left * &self.a * right, left * &self.b, &self.c * right)
    }

    fn check_io(&self, other: &Self, what: &str) -> Result<()> {
        if self.inputs() != other.inputs() || self.outputs() != other.outputs() {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} versus {}x{} transfer functions",
                self.outputs(),
                self.inputs(),
                other.outputs(),
                other.inputs()
            )));
        }
        Ok(())
    }

    /// Block-diagonal realization of `wa * self + wb * other`, with the weights
    /// split over the descriptor blocks as `(w E, w A, w B, C)`.
    fn weighted_sum(&self, wa: f64, other: &Self, wb: f64, out_weights: bool) -> Result<Self> {
        let (n1, n2) = (self.order(), other.order());
        let n = n1 + n2;
        let block = |x: &Mat, y: &Mat, sx: f64, sy: f64| {
            let mut z = Mat::zeros(n, n);
            z.view_mut((0, 0), (n1, n1)).copy_from(&(x * sx));
            z.view_mut((n1, n1), (n2, n2)).copy_from(&(y * sy));
            z
        };
        let (bx, by, cx, cy) = if out_weights { (1.0, 1.0, wa, wb) } else { (wa, wb, wa, wb) };
        let (ex, ey) = if out_weights { (1.0, 1.0) } else { (wa, wb) };
        let e = block(&self.e, &other.e, ex, ey);
        let a = block(&self.a, &other.a, ex, ey);
        let mut b = Mat::zeros(n, self.inputs());
        b.rows_mut(0, n1).copy_from(&(&self.b * bx));
        b.rows_mut(n1, n2).copy_from(&(&other.b * by));
        let mut c = Mat::zeros(self.outputs(), n);
        c.columns_mut(0, n1).copy_from(&(&self.c * cx));
        c.columns_mut(n1, n2).copy_from(&(&other.c * cy));
        Self::new(e, a, b, c)
    }

    /// Realization of `self - other` (parallel connection).
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_io(other, "difference")?;
        self.weighted_sum(1.0, other, -1.0, true)
    }

    /// Realization of `self + other` (parallel connection).
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_io(other, "sum")?;
        self.weighted_sum(1.0, other, 1.0, true)
    }
}

fn min_pairwise_gap(z: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            gap = gap.min((z[i] - z[j]).norm());
        }
    }
    gap
}

/// Rescale `c -> g c`, `b -> b / conj(g)` (product unchanged).
fn balance_factors(c: &mut DVector<Complex64>, b: &mut DVector<Complex64>) {
    let (nc, nb) = (c.norm(), b.norm());
    if nc == 0.0 || nb == 0.0 {
        return;
    }
    let tiny = 1e-12 * c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = c.iter().find(|z| z.norm() > tiny).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let g = lead.conj() / lead.norm() * (nb / nc).sqrt();
    *c *= g;
    *b /= g.conj();
}

/// `H(s) = alpha H(s) + (1 - alpha) Hk(s)` realized block-diagonally with the
/// weights on the descriptor blocks: `E = diag(alpha E, (1-alpha) Ek)` and
/// likewise for `A`, `B = [alpha B; (1-alpha) Bk]`, `C = [alpha C, (1-alpha) Ck]`.
pub fn affine_combination(h: &StateSpace, hk: &StateSpace, alpha: f64) -> Result<StateSpace> {
    if !(alpha > 0.0) || !alpha.is_finite() || alpha == 1.0 {
        return Err(Error::InvalidArgument(format!(
            "affine combination needs 0 < alpha != 1, got {alpha}"
        )));
    }
    h.check_io(hk, "affine_combination")?;
    h.weighted_sum(alpha, hk, 1.0 - alpha, false)
}

/// Simple-pole form `sum_i c_i b_i^H / (s - lambda_i)` of a transfer function.
#[derive(Debug, Clone)]
pub struct PoleResidue {
    pub poles: Vec<Complex64>,
    pub b_dirs: Vec<DVector<Complex64>>,
    pub c_dirs: Vec<DVector<Complex64>>,
}

impl PoleResidue {
    pub fn order(&self) -> usize {
        self.poles.len()
    }
    pub fn inputs(&self) -> usize {
        self.b_dirs.first().map_or(0, |b| b.len())
    }
    pub fn outputs(&self) -> usize {
        self.c_dirs.first().map_or(0, |c| c.len())
    }

    /// `c_i b_i^H`.
    pub fn residue(&self, i: usize) -> CMat {
        &self.c_dirs[i] * self.b_dirs[i].adjoint()
    }

    /// Re-summation of the partial fractions at `s`.
    pub fn eval(&self, s: Complex64) -> CMat {
        let mut out = CMat::zeros(self.outputs(), self.inputs());
        for i in 0..self.order() {
            out += self.residue(i) / (s - self.poles[i]);
        }
        out
    }

    /// Signed count over real poles of the residue signs; SISO only.
    ///
    /// A pole counts as real when `|Im lambda| <= 1e-8 max(1, |lambda|)`; its
    /// residue must then be real to the same relative tolerance.
    pub fn cauchy_index(&self) -> Result<CauchyIndex> {
        if self.inputs() != 1 || self.outputs() != 1 {
            return Err(Error::NotSiso {
                inputs: self.inputs(),
                outputs: self.outputs(),
            });
        }
        let mut index = 0;
        for (i, &pole) in self.poles.iter().enumerate() {
            if pole.im.abs() > REAL_POLE_TOL * pole.norm().max(1.0) {
                continue;
            }
            let residue = self.c_dirs[i][0] * self.b_dirs[i][0].conj();
            if residue.im.abs() > REAL_POLE_TOL * residue.norm().max(1.0) {
                return Err(Error::AmbiguousPole { pole, residue });
            }
            if residue.re > 0.0 {
                index += 1;
            } else if residue.re < 0.0 {
                index -= 1;
            }
        }
        Ok(CauchyIndex(index))
    }
}

/// Relative tolerance for classifying a pole as real.
pub const REAL_POLE_TOL: f64 = 1e-8;

/// Cauchy index of a real SISO rational function; labels the connected
/// components of the manifold of stable SISO systems of fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CauchyIndex(pub i32);

impl CauchyIndex {
    pub fn value(self) -> i32 {
        self.0
    }
}

impl fmt::Display for CauchyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
