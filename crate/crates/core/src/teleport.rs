//! Teleported output states and closed-form fidelities.
//!
//! Input states are squeezed coherent states (real squeezing `zeta0`,
//! complex amplitude `alpha0`) or number states `|N>`. The averaged
//! teleportation channel smears the input Wigner function with a Gaussian
//! of variance `sigma` and rescales the output coordinate by the
//! displacement gain `lambda`; both closed-form families stay closed under
//! that map and admit explicit fidelities.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gaussian::GaussianWigner;
use crate::scalar::Scalar;
use crate::special::laguerre;

/// Largest Fock number accepted by the closed forms; bounds polynomial
/// degrees in the recurrences.
pub const MAX_FOCK: u32 = 64;

/// State to be teleported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputState<T> {
    /// Squeezed coherent state with real squeezing parameter and complex
    /// amplitude.
    Gaussian { zeta0: T, alpha0: Complex<T> },
    /// Number state `|N>`.
    Fock { n: u32 },
}

impl<T: Scalar> InputState<T> {
    pub fn vacuum() -> Self {
        Self::Gaussian { zeta0: T::zero(), alpha0: Complex::new(T::zero(), T::zero()) }
    }

    pub fn coherent(alpha0: Complex<T>) -> Self {
        Self::Gaussian { zeta0: T::zero(), alpha0 }
    }

    pub fn squeezed(zeta0: T, alpha0: Complex<T>) -> Self {
        Self::Gaussian { zeta0, alpha0 }
    }

    pub fn fock(n: u32) -> Result<Self> {
        if n > MAX_FOCK {
            return Err(Error::Domain(format!("Fock number {n} exceeds the cap {MAX_FOCK}")));
        }
        Ok(Self::Fock { n })
    }

    /// The Gaussian-family representation, if this is not a number state.
    pub fn to_gaussian(&self) -> Option<GaussianWigner<T>> {
        match *self {
            Self::Gaussian { zeta0, alpha0 } => {
                let ch = (T::two() * zeta0).cosh();
                let sh = (T::two() * zeta0).sinh();
                let a = T::two() * ch;
                let b = Complex::new(sh, T::zero());
                let c = (alpha0 * ch + alpha0.conj() * sh) * T::two();
                Some(GaussianWigner::new(a, b, c).expect("cosh > |sinh| guarantees validity"))
            }
            Self::Fock { .. } => None,
        }
    }

    /// Input Wigner function value at `gamma`.
    pub fn wigner_value(&self, gamma: Complex<T>) -> T {
        match *self {
            Self::Gaussian { .. } => self.to_gaussian().unwrap().evaluate(gamma),
            Self::Fock { n } => {
                let r2 = gamma.norm_sqr();
                let sign = if n % 2 == 0 { T::one() } else { -T::one() };
                sign * T::two() / T::PI()
                    * (-T::two() * r2).exp()
                    * laguerre(n, T::four() * r2)
            }
        }
    }

    /// Smallest phase-space feature scale: `exp(-|zeta0|)` for the Gaussian
    /// family, `N^{-1/2}` for number states (1 for the vacuum).
    pub fn delta_w(&self) -> T {
        match *self {
            Self::Gaussian { zeta0, .. } => (-zeta0.abs()).exp(),
            Self::Fock { n } => {
                if n == 0 {
                    T::one()
                } else {
                    T::one() / T::real(n as f64).sqrt()
                }
            }
        }
    }

    /// Mean photon number; used for automatic grid sizing.
    pub fn mean_photon(&self) -> T {
        match *self {
            Self::Gaussian { zeta0, alpha0 } => zeta0.sinh() * zeta0.sinh() + alpha0.norm_sqr(),
            Self::Fock { n } => T::real(n as f64),
        }
    }
}

/// Parameters of the averaged teleportation channel seen by one input
/// state: displacement gain, smearing variance, and the output rotation
/// phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportSetting<T> {
    pub lambda: T,
    pub sigma: T,
    pub phi_tilde: T,
}

impl<T: Scalar> TeleportSetting<T> {
    pub fn new(lambda: T, sigma: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(sigma > T::zero()) {
            return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { lambda, sigma, phi_tilde: T::zero() })
    }

    pub fn with_phase(mut self, phi_tilde: T) -> Self {
        self.phi_tilde = phi_tilde;
        self
    }
}

/// Fidelity of a teleportation run next to the classical benchmark at the
/// same gain (zero entanglement, cold arms: `sigma = (1 + lambda^2) /
/// (4 lambda^2)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport<T> {
    pub fidelity: T,
    pub classical_level: T,
    pub exceeded_classical: bool,
}

impl<T: Scalar> FidelityReport<T> {
    fn new(fidelity: T, classical_level: T) -> Self {
        Self { fidelity, classical_level, exceeded_classical: fidelity > classical_level }
    }
}

/// Smearing variance of the zero-entanglement channel at gain `lambda`
/// with cold arms.
pub fn classical_sigma<T: Scalar>(lambda: T) -> T {
    (T::one() + lambda * lambda) / (T::four() * lambda * lambda)
}

/// Teleported state for a Gaussian-family input: coefficients of the
/// output Gaussian in closed form.
pub fn output_state_gaussian<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
) -> Result<GaussianWigner<T>> {
    let InputState::Gaussian { zeta0, alpha0 } = *input else {
        return Err(Error::Domain("output_state_gaussian requires a Gaussian-family input".into()));
    };
    let ch = (T::two() * zeta0).cosh();
    let sh = (T::two() * zeta0).sinh();
    let (sig, lam) = (s.sigma, s.lambda);
    if !(sig > T::zero() && lam > T::zero()) {
        return Err(Error::Domain("invalid teleport setting".into()));
    }
    let h = T::one() + T::real(8.0) * sig * ch + T::real(16.0) * sig * sig;
    let a = T::two() * (ch + T::four() * sig) / (lam * lam * h);
    let b = Complex::new(sh / (lam * lam * h), T::zero());
    let c = (alpha0 * (ch + T::four() * sig) + alpha0.conj() * sh) * T::two() / (lam * h);
    let out = GaussianWigner::new(a, b, c)?;
    Ok(if s.phi_tilde == T::zero() { out } else { out.rotated(-s.phi_tilde) })
}

/// Teleported Wigner function of a number state, evaluable at any point.
///
/// For `sigma < 1/4` the function oscillates and keeps negative regions;
/// at `sigma = 1/4` exactly the Laguerre argument is singular and only the
/// vacuum is accepted.
#[derive(Debug, Clone, Copy)]
pub struct FockTeleported<T> {
    n: u32,
    sigma: T,
    lambda: T,
}

impl<T: Scalar> FockTeleported<T> {
    pub fn value(&self, beta: Complex<T>) -> T {
        let g = T::four() * self.sigma - T::one();
        let yp = T::four() * self.sigma + T::one();
        let l2 = self.lambda * self.lambda;
        let u = -T::four() * beta.norm_sqr() / l2;
        // scaled recurrence M_k = (4 sigma - 1)^k L_k(u / (16 sigma^2 - 1)),
        // finite through the sigma = 1/4 line
        let m = scaled_laguerre(self.n, g, u / yp);
        T::two() / (T::PI() * l2) * m / yp.powi(self.n as i32 + 1)
            * (-T::two() * beta.norm_sqr() / (l2 * yp)).exp()
    }
}

/// `(4s-1)^n L_n(u / ((4s-1)(4s+1)))` through the scaled three-term
/// recurrence; `w = u / (4s+1)` must be supplied as the second argument.
fn scaled_laguerre<T: Scalar>(n: u32, g: T, w: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = g - w;
    for k in 1..n {
        let kf = T::real(k as f64);
        let next = (((T::two() * kf + T::one()) * g - w) * cur - kf * g * g * prev)
            / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Teleported state of `|N>` under setting `s`.
pub fn output_state_fock<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
) -> Result<FockTeleported<T>> {
    let InputState::Fock { n } = *input else {
        return Err(Error::Domain("output_state_fock requires a number-state input".into()));
    };
    if s.sigma == T::one() / T::four() && n >= 1 {
        return Err(Error::Domain(
            "sigma = 1/4 makes the Laguerre argument singular for N >= 1".into(),
        ));
    }
    Ok(FockTeleported { n, sigma: s.sigma, lambda: s.lambda })
}

fn squeezed_fidelity_value<T: Scalar>(zeta0: T, alpha0: Complex<T>, sig: T, lam: T) -> T {
    let ch = (T::two() * zeta0).cosh();
    let l2 = lam * lam;
    let bracket = T::one()
        + T::two() * l2
        + l2 * l2 * (T::one() + T::real(16.0) * sig * sig)
        + T::real(8.0) * l2 * (T::one() + l2) * sig * ch;
    let f0 = T::two() / bracket.sqrt();
    if alpha0.norm_sqr() == T::zero() || lam == T::one() {
        return f0;
    }
    let e2z = (T::two() * zeta0).exp();
    let d1 = T::one() + l2 * (T::one() + T::four() * e2z * sig);
    let d2 = (T::one() + l2) * e2z + T::four() * l2 * sig;
    let re2 = alpha0.re * alpha0.re;
    let im2 = alpha0.im * alpha0.im;
    let suppression = (T::one() - lam) * (T::one() - lam) * T::half()
        * (T::four() * re2 * e2z / d1 + T::four() * im2 / d2);
    f0 * (-suppression).exp()
}

/// Closed-form fidelity for a squeezed coherent input. Requires
/// `phi_tilde = 0`; the amplitude dependence vanishes at `lambda = 1`.
pub fn fidelity_squeezed<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
) -> Result<FidelityReport<T>> {
    let InputState::Gaussian { zeta0, alpha0 } = *input else {
        return Err(Error::Domain("fidelity_squeezed requires a Gaussian-family input".into()));
    };
    if s.phi_tilde != T::zero() {
        return Err(Error::Domain(
            "closed-form fidelity requires phi_tilde = 0; rotate the input first".into(),
        ));
    }
    let f = squeezed_fidelity_value(zeta0, alpha0, s.sigma, s.lambda);
    let fc = squeezed_fidelity_value(zeta0, alpha0, classical_sigma(s.lambda), s.lambda);
    Ok(FidelityReport::new(f, fc))
}

fn fock_fidelity_value<T: Scalar>(n: u32, sig: T, lam: T) -> T {
    let l2 = lam * lam;
    let x = l2 * (T::four() * sig - T::one()) - T::one();
    let y = l2 * (T::four() * sig + T::one()) + T::one();
    // R_k = (x/y)^k P_k(1 + 8 lam^2/(x y)); the recurrence keeps the
    // combination x * z finite, so the removable singularity at x = 0 needs
    // no special casing.
    let xz_over_y = (x + T::real(8.0) * l2 / y) / y;
    let q2 = (x / y) * (x / y);
    let mut prev = T::one();
    let mut cur = xz_over_y;
    if n == 0 {
        return T::two() / y;
    }
    for k in 1..n {
        let kf = T::real(k as f64);
        let next = ((T::two() * kf + T::one()) * xz_over_y * cur - kf * q2 * prev)
            / (kf + T::one());
        prev = cur;
        cur = next;
    }
    T::two() * cur / y
}

/// Closed-form fidelity for a number-state input; finite on the whole
/// parameter range including the line `lambda^2 (4 sigma - 1) = 1`.
pub fn fidelity_fock<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
) -> Result<FidelityReport<T>> {
    let InputState::Fock { n } = *input else {
        return Err(Error::Domain("fidelity_fock requires a number-state input".into()));
    };
    if n > MAX_FOCK {
        return Err(Error::Domain(format!("Fock number {n} exceeds the cap {MAX_FOCK}")));
    }
    // number states are rotation-invariant, so phi_tilde drops out
    let f = fock_fidelity_value(n, s.sigma, s.lambda);
    let fc = fock_fidelity_value(n, classical_sigma(s.lambda), s.lambda);
    Ok(FidelityReport::new(f, fc))
}

/// Closed-form fidelity for either input family.
pub fn fidelity<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
) -> Result<FidelityReport<T>> {
    match input {
        InputState::Gaussian { .. } => fidelity_squeezed(input, s),
        InputState::Fock { .. } => fidelity_fock(input, s),
    }
}

/// Fidelity through the grid oracle (rasterize, convolve, overlap); the
/// public cross-check entry point. The classical benchmark in the report
/// comes from the closed form.
pub fn fidelity_numeric<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
    spec: Option<crate::grid::GridSpec<T>>,
) -> Result<FidelityReport<T>> {
    let f = crate::grid::fidelity_grid(input, s, spec)?;
    let s_cl = TeleportSetting::new(s.lambda, classical_sigma(s.lambda))?;
    let fc = match input {
        InputState::Gaussian { .. } => fidelity_squeezed(input, &s_cl)?.fidelity,
        InputState::Fock { .. } => fidelity_fock(input, &s_cl)?.fidelity,
    };
    Ok(FidelityReport::new(f, fc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C64 = Complex<f64>;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    fn setting(lambda: f64, sigma: f64) -> TeleportSetting<f64> {
        TeleportSetting::new(lambda, sigma).unwrap()
    }

    #[test]
    fn fock_cap_is_enforced() {
        assert!(InputState::<f64>::fock(64).is_ok());
        assert!(InputState::<f64>::fock(65).is_err());
    }

    #[test]
    fn gaussian_output_reference_points() {
        // vacuum through the classical channel: A = 2/3 (variance 3/4)
        let out = output_state_gaussian(&InputState::vacuum(), &setting(1.0, 0.5)).unwrap();
        assert_relative_eq!(out.a(), 2.0 / 3.0, epsilon = 1e-14);
        assert_eq!(out.b().norm(), 0.0);
        assert_eq!(out.c().norm(), 0.0);

        // identity limit recovers the input
        let input = InputState::squeezed(0.5, c(0.0, 0.0));
        let out = output_state_gaussian(&input, &setting(1.0, 1e-12)).unwrap();
        let g = input.to_gaussian().unwrap();
        assert_abs_diff_eq!(out.a(), g.a(), epsilon = 1e-9);
        assert_abs_diff_eq!(out.b().re, g.b().re, epsilon = 1e-9);

        // linear coefficient at lambda = 1/2: 2*1*(1+2) / (0.5*(1+4+4)) = 4/3
        let input = InputState::coherent(c(1.0, 0.0));
        let out = output_state_gaussian(&input, &setting(0.5, 0.5)).unwrap();
        assert_relative_eq!(out.c().re, 4.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_output_matches_general_map() {
        // section-level closed form vs the general Gaussian teleport map
        for &zeta0 in &[0.0, 0.5, 1.2] {
            for &(lam, sig) in &[(1.0, 0.5), (0.9, 0.1), (0.45, 0.8)] {
                for &alpha in &[c(0.0, 0.0), c(1.3, -0.4)] {
                    let input = InputState::squeezed(zeta0, alpha);
                    let direct = output_state_gaussian(&input, &setting(lam, sig)).unwrap();
                    let mapped = input.to_gaussian().unwrap().teleport(sig, lam).unwrap();
                    assert_relative_eq!(direct.a(), mapped.a(), epsilon = 1e-12);
                    assert_relative_eq!(direct.b().re, mapped.b().re, epsilon = 1e-12);
                    assert_abs_diff_eq!(direct.c().re, mapped.c().re, epsilon = 1e-12);
                    assert_abs_diff_eq!(direct.c().im, mapped.c().im, epsilon = 1e-12);
                    assert_abs_diff_eq!(direct.d(), mapped.d(), epsilon = 1e-12);
                    assert_relative_eq!(direct.n(), mapped.n(), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn fock_output_reference_points() {
        let one = InputState::<f64>::fock(1).unwrap();
        let w = output_state_fock(&one, &setting(1.0, 0.5)).unwrap();
        assert_relative_eq!(w.value(c(0.0, 0.0)), 2.0 / (9.0 * std::f64::consts::PI), epsilon = 1e-13);

        let w0 = output_state_fock(&InputState::fock(0).unwrap(), &setting(1.0, 0.5)).unwrap();
        assert_relative_eq!(
            w0.value(c(0.0, 0.0)),
            2.0 / (3.0 * std::f64::consts::PI),
            epsilon = 1e-13
        );

        // identity limit at the origin: -2/pi for N = 1
        let wi = output_state_fock(&one, &setting(1.0, 1e-12)).unwrap();
        assert_abs_diff_eq!(wi.value(c(0.0, 0.0)), -2.0 / std::f64::consts::PI, epsilon = 1e-6);

        // the sigma = 1/4 singular line is rejected for N >= 1 only
        assert!(output_state_fock(&one, &setting(1.0, 0.25)).is_err());
        assert!(output_state_fock(&InputState::fock(0).unwrap(), &setting(1.0, 0.25)).is_ok());
    }

    #[test]
    fn fock_output_sign_structure() {
        let one = InputState::<f64>::fock(1).unwrap();
        let neg = output_state_fock(&one, &setting(1.0, 0.1)).unwrap();
        assert!(neg.value(c(0.0, 0.0)) < -0.1);
        let pos = output_state_fock(&one, &setting(1.0, 0.5)).unwrap();
        for i in 0..40 {
            let r = i as f64 * 0.15;
            assert!(pos.value(c(r, 0.3 * r)) >= 0.0);
        }
    }

    #[test]
    fn squeezed_fidelity_reference_points() {
        let rep = fidelity_squeezed(&InputState::squeezed(0.7, c(0.0, 0.0)), &setting(1.0, 1e-12))
            .unwrap();
        assert_abs_diff_eq!(rep.fidelity, 1.0, epsilon = 1e-9);

        let rep = fidelity_squeezed(&InputState::vacuum(), &setting(1.0, 0.5)).unwrap();
        assert_relative_eq!(rep.fidelity, 0.5, epsilon = 1e-14);
        assert_relative_eq!(rep.classical_level, 0.5, epsilon = 1e-14);
        assert!(!rep.exceeded_classical);

        // closed form agrees with the overlap of input and output Gaussians
        let input = InputState::squeezed(0.0, c(1.0, 0.0));
        let s = setting(0.5, 0.5);
        let rep = fidelity_squeezed(&input, &s).unwrap();
        let overlap = input
            .to_gaussian()
            .unwrap()
            .overlap(&output_state_gaussian(&input, &s).unwrap())
            .unwrap();
        assert_abs_diff_eq!(rep.fidelity, overlap, epsilon = 1e-12);
    }

    #[test]
    fn fock_fidelity_reference_points() {
        let f0 = fidelity_fock(&InputState::fock(0).unwrap(), &setting(1.0, 1e-12)).unwrap();
        assert_abs_diff_eq!(f0.fidelity, 1.0, epsilon = 1e-9);
        let f1 = fidelity_fock(&InputState::fock(1).unwrap(), &setting(1.0, 0.5)).unwrap();
        assert_relative_eq!(f1.fidelity, 0.25, epsilon = 1e-13);
        let f1p = fidelity_fock(&InputState::fock(1).unwrap(), &setting(1.0, 1e-12)).unwrap();
        assert_abs_diff_eq!(f1p.fidelity, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn fock_fidelity_is_smooth_through_the_singular_line() {
        // x = lambda^2 (4 sigma - 1) - 1 = 0 at sigma = 1/2, lambda = 1
        let n = InputState::<f64>::fock(3).unwrap();
        let f_at = fidelity_fock(&n, &setting(1.0, 0.5)).unwrap().fidelity;
        let f_near = fidelity_fock(&n, &setting(1.0, 0.5 + 1e-9)).unwrap().fidelity;
        assert_abs_diff_eq!(f_at, f_near, epsilon = 1e-7);
        // explicit classical levels binom(2N, N) / (2 4^N)
        for (n, expect) in [(0, 0.5), (1, 0.25), (2, 0.1875), (3, 0.15625)] {
            let f = fidelity_fock(&InputState::fock(n).unwrap(), &setting(1.0, 0.5)).unwrap();
            assert_relative_eq!(f.fidelity, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn classical_levels_decrease_with_fock_number() {
        let mut prev = f64::INFINITY;
        for n in 0..=5 {
            let f = fidelity_fock(&InputState::fock(n).unwrap(), &setting(1.0, 0.5)).unwrap();
            assert!(f.fidelity < prev);
            prev = f.fidelity;
        }
    }

    #[test]
    fn unit_gain_ignores_the_coherent_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = setting(1.0, 0.37);
        let base = fidelity_squeezed(&InputState::squeezed(0.6, c(0.0, 0.0)), &s)
            .unwrap()
            .fidelity;
        for _ in 0..100 {
            let alpha = c(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0);
            let f = fidelity_squeezed(&InputState::squeezed(0.6, alpha), &s).unwrap().fidelity;
            assert_abs_diff_eq!(f, base, epsilon = 1e-12);
        }
    }

    #[test]
    fn amplitude_direction_suppresses_faster_than_phase() {
        let s = setting(0.8, 0.2);
        let r = 1.1;
        let f_re = fidelity_squeezed(&InputState::squeezed(0.5, c(r, 0.0)), &s).unwrap().fidelity;
        let f_im = fidelity_squeezed(&InputState::squeezed(0.5, c(0.0, r)), &s).unwrap().fidelity;
        assert!(f_re < f_im);
    }

    #[test]
    fn closed_form_rejects_wrong_family_and_phase() {
        let s = setting(1.0, 0.5);
        assert!(fidelity_squeezed(&InputState::<f64>::fock(1).unwrap(), &s).is_err());
        assert!(fidelity_fock(&InputState::<f64>::vacuum(), &s).is_err());
        let rotated = s.with_phase(0.3);
        assert!(fidelity_squeezed(&InputState::<f64>::vacuum(), &rotated).is_err());
        // number states are rotation-invariant, any phase is accepted
        assert!(fidelity_fock(&InputState::<f64>::fock(1).unwrap(), &rotated).is_ok());
    }
}
