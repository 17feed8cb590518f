//! Optimization and limit analysis on top of the closed-form fidelities:
//! gain scans, regularized average fidelity over coherent amplitudes,
//! source placement, classical levels and maximum-distance estimates.

use num_complex::Complex;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::gauss_hermite;
use crate::teleport::{fidelity, fidelity_squeezed, InputState, TeleportSetting};

/// Squeezing regime of the TMSV source for figure-style scans. `Infinite`
/// substitutes the analytic limit `sigma -> sigma_inf` (valid at the
/// loss-matched gain); finite magnitudes evaluate the full expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing<T> {
    Finite(T),
    Infinite,
}

/// Regularized-average-fidelity parameters: Gaussian cutoff photon number
/// and quadrature order per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageFidelitySpec<T> {
    pub n_coh: T,
    pub order: usize,
}

impl<T: Scalar> AverageFidelitySpec<T> {
    pub fn new(n_coh: T) -> Result<Self> {
        if !(n_coh > T::zero()) {
            return Err(Error::Domain("cutoff photon number must be positive".into()));
        }
        Ok(Self { n_coh, order: 40 })
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order.max(4);
        self
    }
}

/// Noise budget and distance estimate for one input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget<T> {
    /// Smearing variance at the solved distance (equals the target level).
    pub sigma: T,
    /// Infinite-squeezing kernel variance at the solved distance.
    pub sigma_inf: T,
    /// Phase-space feature scale of the state.
    pub delta_w: T,
    /// Per-arm transmission length, units of the absorption length.
    pub l_t: T,
    /// Sender-receiver distance for symmetric placement, `2 l_t`.
    pub l_12: T,
}

/// Golden-section maximization with best-seen tracking.
fn golden_max<T: Scalar>(f: &impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> (T, T) {
    let inv_phi = T::real(0.618_033_988_749_894_9);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut best_x, mut best_f) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    while hi - lo > tol {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        let (x, fx) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f)
}

/// Maximize a scalar function on `[lo, hi]`: coarse scan, then
/// golden-section refinement around the best coarse brackets. The
/// multi-bracket start guards against plateaus where a single
/// golden-section run could stall.
fn maximize_scalar<T: Scalar>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T) -> (T, T) {
    const COARSE: usize = 64;
    let step = (hi - lo) / T::real(COARSE as f64);
    let mut samples = Vec::with_capacity(COARSE + 1);
    for i in 0..=COARSE {
        let x = lo + step * T::real(i as f64);
        samples.push((x, f(x)));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[b].1.partial_cmp(&samples[a].1).unwrap());

    let mut best = (samples[order[0]].0, samples[order[0]].1);
    let mut seeds = Vec::new();
    for &i in order.iter() {
        if seeds.len() >= 3 {
            break;
        }
        if seeds.iter().all(|&j: &usize| (j as isize - i as isize).unsigned_abs() > 1) {
            seeds.push(i);
        }
    }
    for &i in &seeds {
        let a = if i == 0 { lo } else { samples[i - 1].0 };
        let b = if i == samples.len() - 1 { hi } else { samples[i + 1].0 };
        let (x, fx) = golden_max(&f, a, b, tol);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

fn closed_fidelity<T: Scalar>(input: &InputState<T>, lambda: T, sigma: T) -> T {
    match TeleportSetting::new(lambda, sigma) {
        Ok(s) => fidelity(input, &s).map(|r| r.fidelity).unwrap_or(T::zero()),
        Err(_) => T::zero(),
    }
}

/// Fidelity as a function of the displacement gain, with the smearing
/// variance tracking the gain through the channel.
pub fn fidelity_at_gain<T: Scalar>(
    input: &InputState<T>,
    p: &ChannelParams<T>,
    lambda: T,
    squeezing: Squeezing<T>,
) -> Result<T> {
    // the zero-noise limit is represented by the smallest admissible sigma
    let floor = T::real(1e-12);
    let sigma = match squeezing {
        Squeezing::Finite(z) => p.at_zeta(z).sigma(lambda)?.max(floor),
        Squeezing::Infinite => p.sigma_infinity()?.max(floor),
    };
    let s = TeleportSetting::new(lambda, sigma)?;
    Ok(fidelity(input, &s)?.fidelity)
}

/// Gain maximizing the single-state fidelity over
/// `lambda in [1e-4, max(2, 4 |T2/T1|)]`; returns `(lambda_opt, f_max)`.
pub fn optimize_lambda<T: Scalar>(
    input: &InputState<T>,
    p: &ChannelParams<T>,
) -> Result<(T, T)> {
    let hi = T::two().max(T::four() * p.lambda_star()?);
    let obj = |lambda: T| match p.sigma(lambda) {
        Ok(sigma) => closed_fidelity(input, lambda, sigma),
        Err(_) => T::zero(),
    };
    Ok(maximize_scalar(obj, T::real(1e-4), hi, T::real(1e-6)))
}

/// Regularized average fidelity over coherent amplitudes,
/// `(pi n_coh)^-1 int F(a0) exp(-|a0|^2 / n_coh) d^2 a0`,
/// by two-dimensional Gauss-Hermite quadrature with nodes rescaled to the
/// measured decay of `F` along each axis. Fails if doubling the order moves
/// the value by more than the tolerance.
pub fn average_fidelity<T: Scalar>(
    spec: &AverageFidelitySpec<T>,
    p: &ChannelParams<T>,
    lambda: T,
    zeta0: T,
) -> Result<T> {
    let sigma = p.sigma(lambda)?;
    let value = average_fidelity_at(spec.n_coh, spec.order, sigma, lambda, zeta0)?;
    let check = average_fidelity_at(spec.n_coh, spec.order + 24, sigma, lambda, zeta0)?;
    let tol = T::real(1e-8);
    if (value - check).abs() > tol * value.abs().max(T::real(1e-30)) {
        return Err(Error::Quadrature(format!(
            "average fidelity did not converge: {value} vs {check} at orders {} and {}",
            spec.order,
            spec.order + 24
        )));
    }
    Ok(value)
}

fn average_fidelity_at<T: Scalar>(
    n_coh: T,
    order: usize,
    sigma: T,
    lambda: T,
    zeta0: T,
) -> Result<T> {
    let s = TeleportSetting::new(lambda, sigma)?;
    let f = |alpha: Complex<T>| -> Result<T> {
        Ok(fidelity_squeezed(&InputState::squeezed(zeta0, alpha), &s)?.fidelity)
    };
    let f00 = f(Complex::new(T::zero(), T::zero()))?;
    if f00 <= T::zero() {
        return Ok(T::zero());
    }
    // probe the Gaussian decay rate of F along each axis so the quadrature
    // nodes match the integrand width exactly
    let probe = |re: bool| -> Result<T> {
        let mut x = n_coh.sqrt().max(T::real(0.25));
        for _ in 0..60 {
            let a = if re {
                Complex::new(x, T::zero())
            } else {
                Complex::new(T::zero(), x)
            };
            let fx = f(a)?;
            if fx > f00 * T::real(1e-12) {
                return Ok(((f00 / fx).ln() / (x * x)).max(T::zero()));
            }
            x = x * T::half();
        }
        Ok(T::zero())
    };
    let u = probe(true)?;
    let v = probe(false)?;
    let (nodes, weights) = gauss_hermite::<T>(order);
    let su = (u + T::one() / n_coh).sqrt();
    let sv = (v + T::one() / n_coh).sqrt();
    let mut total = T::zero();
    for (i, &ti) in nodes.iter().enumerate() {
        let x = ti / su;
        let gx = u * x * x;
        for (j, &tj) in nodes.iter().enumerate() {
            let y = tj / sv;
            let fx = f(Complex::new(x, y))?;
            let corr = (gx + v * y * y).exp();
            total = total + weights[i] * weights[j] * fx * corr;
        }
    }
    Ok(total / (T::PI() * n_coh * su * sv))
}

/// Gain maximizing the average fidelity for each cutoff photon number.
pub fn optimal_lambda_vs_ncoh<T: Scalar>(
    p: &ChannelParams<T>,
    zeta0: T,
    n_coh_grid: &[T],
    order: usize,
) -> Result<Vec<(T, T)>> {
    let hi = T::two().max(T::four() * p.lambda_star()?);
    let mut out = Vec::with_capacity(n_coh_grid.len());
    for &n_coh in n_coh_grid {
        let obj = |lambda: T| match p.sigma(lambda) {
            Ok(sigma) => average_fidelity_at(n_coh, order, sigma, lambda, zeta0)
                .unwrap_or(T::zero()),
            Err(_) => T::zero(),
        };
        let (lam, _f) = maximize_scalar(obj, T::real(1e-4), hi, T::real(1e-6));
        out.push((n_coh, lam));
    }
    Ok(out)
}

/// Fidelity for a source placed `l1` absorption lengths from the sender on
/// a total sender-receiver distance `l12`, with the loss-matched gain
/// `lambda = exp((l1 - l2)/l_a)`.
pub fn fidelity_at_position<T: Scalar>(
    input: &InputState<T>,
    l1: T,
    l12: T,
    l_a: T,
    squeezing: Squeezing<T>,
) -> Result<T> {
    let l2 = l12 - l1;
    let zeta = match squeezing {
        Squeezing::Finite(z) => z,
        Squeezing::Infinite => T::one(), // placeholder magnitude; sigma_inf ignores it
    };
    let p = ChannelParams::from_lengths(
        l1,
        l2,
        l_a,
        l_a,
        zeta,
        T::zero(),
        T::zero(),
        T::zero(),
    )?;
    let lambda = p.lambda_star()?;
    fidelity_at_gain(input, &p, lambda, squeezing)
}

/// Source position in `[0, l12]` maximizing the fidelity; returns
/// `(l1_opt, f_max)`.
pub fn optimize_source_position<T: Scalar>(
    input: &InputState<T>,
    l12: T,
    l_a: T,
    squeezing: Squeezing<T>,
) -> Result<(T, T)> {
    if !(l12 >= T::zero() && l_a > T::zero()) {
        return Err(Error::Domain("distances must be nonnegative, l_a positive".into()));
    }
    if l12 == T::zero() {
        let f = fidelity_at_position(input, T::zero(), T::zero(), l_a, squeezing)?;
        return Ok((T::zero(), f));
    }
    let obj = |l1: T| fidelity_at_position(input, l1, l12, l_a, squeezing).unwrap_or(T::zero());
    let tol = l12 * T::real(1e-8);
    Ok(maximize_scalar(obj, T::zero(), l12, tol))
}

/// Fidelity of the zero-entanglement channel (the classical level) at the
/// given gain, including any thermal terms of the arms.
pub fn classical_level<T: Scalar>(
    input: &InputState<T>,
    p: &ChannelParams<T>,
    lambda: T,
) -> Result<T> {
    let p0 = p.at_zeta(T::zero());
    let s = TeleportSetting::new(lambda, p0.sigma(lambda)?)?;
    Ok(fidelity(input, &s)?.fidelity)
}

/// Largest teleportation distance estimate: solve
/// `sigma_inf = margin * delta_w^2` for symmetric arms
/// `|T| = exp(-l / l_a)`, so `l_t = -(1/2) ln(1 - 2 margin delta_w^2)` in
/// units of the absorption length.
pub fn max_distance<T: Scalar>(input: &InputState<T>, margin: T) -> Result<NoiseBudget<T>> {
    if !(margin > T::zero() && margin < T::one()) {
        return Err(Error::Domain(format!("margin must lie in (0, 1), got {margin}")));
    }
    let delta_w = input.delta_w();
    let target = margin * delta_w * delta_w;
    let arg = T::one() - T::two() * target;
    if !(arg > T::zero()) {
        return Err(Error::Domain(
            "margin level exceeds the symmetric-arm noise ceiling of 1/2".into(),
        ));
    }
    let l_t = -arg.ln() * T::half();
    Ok(NoiseBudget {
        sigma: target,
        sigma_inf: target,
        delta_w,
        l_t,
        l_12: T::two() * l_t,
    })
}
