//! Conditional layer of the protocol: the distribution of the sender's
//! homodyne outcome pair, the conditional state of the receiver's mode,
//! and a seeded Monte-Carlo reconstruction of the averaged output.
//!
//! For a Gaussian-family input everything is Gaussian. With entangled-state
//! coefficients `(S, C1, C2, N)`:
//!
//! - the outcome density is the input Wigner function smeared with a kernel
//!   of variance `N C1 / 4`;
//! - the conditional state at outcome `g'` is the product of a broad
//!   envelope `exp(-2|b|^2 / (C2 N))` with the input smeared by variance
//!   `1/(4 C2)` and evaluated at the affine point `g' + (S*/C2) b`.
//!
//! Averaging the conditional states displaced by `e^{i phi} lambda g'` over
//! the outcome density reproduces the closed-form averaged channel; the
//! Monte-Carlo estimator here checks exactly that.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::EntangledState;
use crate::error::{Error, Result};
use crate::gaussian::GaussianWigner;
use crate::scalar::Scalar;
use crate::teleport::{InputState, TeleportSetting};

/// Gaussian distribution of the rescaled homodyne outcome pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution<T> {
    mean: Complex<T>,
    covariance: [[T; 2]; 2],
    density: GaussianWigner<T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    pub fn mean(&self) -> Complex<T> {
        self.mean
    }

    /// Covariance over `(Re g', Im g')`.
    pub fn covariance(&self) -> [[T; 2]; 2] {
        self.covariance
    }

    /// Probability density at an outcome value.
    pub fn density(&self, gamma_prime: Complex<T>) -> T {
        self.density.evaluate(gamma_prime)
    }

    /// Draw one outcome using two standard normals.
    fn draw(&self, z1: T, z2: T) -> Complex<T> {
        let sxx = self.covariance[0][0];
        let sxy = self.covariance[0][1];
        let syy = self.covariance[1][1];
        let l11 = sxx.sqrt();
        let l21 = sxy / l11;
        let l22 = (syy - l21 * l21).max(T::zero()).sqrt();
        Complex::new(self.mean.re + l11 * z1, self.mean.im + l21 * z1 + l22 * z2)
    }
}

/// Exact outcome distribution for a Gaussian-family input.
pub fn outcome_distribution<T: Scalar>(
    input: &InputState<T>,
    e: &EntangledState<T>,
) -> Result<OutcomeDistribution<T>> {
    let g = input.to_gaussian().ok_or_else(|| {
        Error::Domain("outcome_distribution requires a Gaussian-family input".into())
    })?;
    let smear = e.normalization * e.c1 / T::four();
    let density = g.teleport(smear, T::one())?;
    Ok(OutcomeDistribution { mean: density.mean(), covariance: density.covariance(), density })
}

/// Conditional state of the receiver's mode after outcome `g'`
/// (pre-displacement).
pub fn conditional_state<T: Scalar>(
    input: &InputState<T>,
    e: &EntangledState<T>,
    gamma_prime: Complex<T>,
) -> Result<GaussianWigner<T>> {
    let g = input.to_gaussian().ok_or_else(|| {
        Error::Domain("conditional_state requires a Gaussian-family input".into())
    })?;
    let smeared = g.teleport(T::one() / (T::four() * e.c2), T::one())?;
    let kappa = e.s.conj() / e.c2;
    let a = smeared.a() * kappa.norm_sqr() + T::two() / (e.c2 * e.normalization);
    let b = smeared.b() * kappa.conj() * kappa.conj();
    let c = kappa.conj()
        * (smeared.c() - gamma_prime * smeared.a() - gamma_prime.conj() * smeared.b() * T::two());
    GaussianWigner::new(a, b, c)
}

/// Sample statistics of the Monte-Carlo reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate<T> {
    /// Estimated teleportation fidelity (mean of per-outcome overlaps).
    pub fidelity: T,
    /// Standard error of the fidelity estimate.
    pub std_err: T,
    /// Estimated first moment of the output state.
    pub mean: Complex<T>,
    /// Estimated `<|b|^2>` of the output state.
    pub second_abs: T,
    /// Estimated `<b^2>` of the output state.
    pub second_sq: Complex<T>,
    pub n_samples: usize,
}

/// Reconstruct the averaged output by sampling outcomes, conditioning,
/// displacing by `e^{i phi} lambda g'` and averaging. The smearing variance
/// of the averaged channel is not an input here; it emerges from the
/// sampled statistics, which is what makes this an end-to-end check.
pub fn monte_carlo_output<T: Scalar>(
    input: &InputState<T>,
    e: &EntangledState<T>,
    s: &TeleportSetting<T>,
    n_samples: usize,
    seed: Option<u64>,
) -> Result<MonteCarloEstimate<T>> {
    let seed = seed.ok_or(Error::SeedRequired)?;
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be positive".into()));
    }
    let g_in = input.to_gaussian().ok_or_else(|| {
        Error::Domain("monte_carlo_output requires a Gaussian-family input".into())
    })?;
    let dist = outcome_distribution(input, e)?;
    let gain = Complex::from_polar(s.lambda, s.phi_tilde);

    // conditional covariance does not depend on the outcome; fetch it once
    let template = conditional_state(input, e, Complex::new(T::zero(), T::zero()))?;
    let cov = template.covariance();
    let tr = cov[0][0] + cov[1][1];
    let sq = Complex::new(cov[0][0] - cov[1][1], T::two() * cov[0][1]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum_f = T::zero();
    let mut sum_f2 = T::zero();
    let mut sum_mean = Complex::new(T::zero(), T::zero());
    let mut sum_abs = T::zero();
    let mut sum_sq = Complex::new(T::zero(), T::zero());
    let tau = T::real(std::f64::consts::TAU);
    for _ in 0..n_samples {
        let u1 = T::one() - T::real(rng.random::<f64>());
        let u2 = T::real(rng.random::<f64>());
        let r = (-T::two() * u1.ln()).sqrt();
        let (z1, z2) = ((tau * u2).cos() * r, (tau * u2).sin() * r);
        let gp = dist.draw(z1, z2);
        let displaced = conditional_state(input, e, gp)?.displaced(gain * gp);
        let f = g_in.overlap(&displaced)?;
        sum_f = sum_f + f;
        sum_f2 = sum_f2 + f * f;
        let m = displaced.mean();
        sum_mean = sum_mean + m;
        sum_abs = sum_abs + m.norm_sqr() + tr;
        sum_sq = sum_sq + m * m + sq;
    }
    let nf = T::real(n_samples as f64);
    let mean_f = sum_f / nf;
    let var_f = ((sum_f2 - nf * mean_f * mean_f) / (nf - T::one()).max(T::one())).max(T::zero());
    Ok(MonteCarloEstimate {
        fidelity: mean_f,
        std_err: (var_f / nf).sqrt(),
        mean: sum_mean / nf,
        second_abs: sum_abs / nf,
        second_sq: sum_sq / nf,
        n_samples,
    })
}
