//! Built-in models.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::Mat;
use crate::lti::StateSpace;

/// Third-order SISO benchmark
/// `H(s) = (-s^2 + 7/4 s + 5/4) / (s^3 + 2 s^2 + 17/16 s + 15/32)`
/// in controllable companion form.
pub fn example1() -> StateSpace {
    let a = Mat::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -15.0 / 32.0, -17.0 / 16.0, -2.0]);
    let b = Mat::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
    let c = Mat::from_row_slice(1, 3, &[5.0 / 4.0, 7.0 / 4.0, -1.0]);
    StateSpace::standard(a, b, c).expect("example1 is well formed")
}

/// `E = I`, `A = diag(poles)`, `B` and `C` all ones.
pub fn diagonal_rom(poles: &[f64], inputs: usize, outputs: usize) -> StateSpace {
    let r = poles.len();
    StateSpace::standard(
        Mat::from_diagonal(&DVector::from_column_slice(poles)),
        Mat::from_element(r, inputs, 1.0),
        Mat::from_element(outputs, r, 1.0),
    )
    .expect("diagonal_rom is well formed")
}

/// Default initial reduced model: `A = diag(-1, ..., -r)`, unit `B`, `C`.
pub fn default_rom0(r: usize, inputs: usize, outputs: usize) -> StateSpace {
    let poles: Vec<f64> = (1..=r).map(|k| -(k as f64)).collect();
    diagonal_rom(&poles, inputs, outputs)
}

/// Random stable standard system: `A = D - q I` with `D` uniform in `[-1, 1)`
/// and `q` chosen so that the spectral abscissa is exactly `-0.5`.
pub fn random_stable(seed: u64, n: usize, inputs: usize, outputs: usize) -> Result<StateSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows, cols| Mat::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0));
    let d = draw(n, n);
    let b = draw(n, inputs);
    let c = draw(outputs, n);
    let probe = StateSpace::standard(d.clone(), b.clone(), c.clone())?;
    let q = probe.spectral_abscissa()? + 0.5;
    StateSpace::standard(d - Mat::identity(n, n) * q, b, c)
}
