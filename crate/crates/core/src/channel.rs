//! Two-mode squeezed vacuum distributed through lossy arms.
//!
//! The resource state is a TMSV with squeezing `zeta = |zeta| e^{i phi}`.
//! Mode 1 travels to the sender, mode 2 to the receiver, through arms with
//! complex amplitude transmissions `T1`, `T2` (optionally with reflections
//! `R1`, `R2` and thermal occupations). The module exposes the coefficients
//! `S`, `C1`, `C2` and the normalization of the shared Gaussian state, the
//! smearing variance `sigma(lambda)` of the averaged teleportation channel,
//! its infinite-squeezing limit, and the loss-matched displacement gain
//! `lambda = |T2/T1|`.
//!
//! Large squeezing makes the naive coefficient expressions cancel
//! catastrophically (`cosh` and `sinh` of `2|zeta|` agree to machine
//! precision at `|zeta| = 20`), so everything here is arranged around
//! `cosh(2 zeta) - 1 = 2 sinh^2(zeta)` and `expm1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Physical description of the TMSV source and the two transmission arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    zeta_mag: T,
    phi: T,
    t1: Complex<T>,
    t2: Complex<T>,
    r1: Complex<T>,
    r2: Complex<T>,
    nth1: T,
    nth2: T,
}

/// Coefficients of the Gaussian two-mode state actually shared after
/// transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledState<T> {
    /// Cross-correlation coefficient `S`.
    pub s: Complex<T>,
    /// Sender-arm quadratic coefficient `C1`.
    pub c1: T,
    /// Receiver-arm quadratic coefficient `C2`.
    pub c2: T,
    /// Normalization factor of the shared Gaussian.
    pub normalization: T,
}

impl<T: Scalar> ChannelParams<T> {
    /// Lossless-reflection channel with explicit complex transmissions.
    pub fn new(zeta_mag: T, phi: T, t1: Complex<T>, t2: Complex<T>) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        let p = Self { zeta_mag, phi, t1, t2, r1: zero, r2: zero, nth1: T::zero(), nth2: T::zero() };
        p.validate()?;
        Ok(p)
    }

    /// Channel with real transmission magnitudes and zero phases.
    pub fn with_magnitudes(zeta_mag: T, phi: T, t1: T, t2: T) -> Result<Self> {
        Self::new(zeta_mag, phi, Complex::new(t1, T::zero()), Complex::new(t2, T::zero()))
    }

    /// Geometric description: `|T_i| = exp(-l_i / la_i)` with arm lengths
    /// `l1`, `l2` and absorption lengths `la1`, `la2`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_lengths(
        l1: T,
        l2: T,
        la1: T,
        la2: T,
        zeta_mag: T,
        phi: T,
        nth1: T,
        nth2: T,
    ) -> Result<Self> {
        if !(l1 >= T::zero() && l2 >= T::zero()) {
            return Err(Error::Domain("arm lengths must be nonnegative".into()));
        }
        if !(la1 > T::zero() && la2 > T::zero()) {
            return Err(Error::Domain("absorption lengths must be positive".into()));
        }
        let t1 = (-l1 / la1).exp();
        let t2 = (-l2 / la2).exp();
        Self::with_magnitudes(zeta_mag, phi, t1, t2)?.with_thermal(nth1, nth2)
    }

    /// Add reflection coefficients; requires `|T_i|^2 + |R_i|^2 <= 1`.
    pub fn with_reflections(mut self, r1: Complex<T>, r2: Complex<T>) -> Result<Self> {
        self.r1 = r1;
        self.r2 = r2;
        self.validate()?;
        Ok(self)
    }

    /// Add thermal occupations of the arm environments.
    pub fn with_thermal(mut self, nth1: T, nth2: T) -> Result<Self> {
        self.nth1 = nth1;
        self.nth2 = nth2;
        self.validate()?;
        Ok(self)
    }

    /// The same arms with a different TMSV squeezing magnitude; used for
    /// classical-level references at `zeta = 0`.
    pub fn at_zeta(&self, zeta_mag: T) -> Self {
        Self { zeta_mag, ..*self }
    }

    fn validate(&self) -> Result<()> {
        let tol = T::real(1e-12);
        if !(self.zeta_mag >= T::zero()) {
            return Err(Error::Domain("squeezing magnitude must be nonnegative".into()));
        }
        for (t, r, label) in [(self.t1, self.r1, "arm 1"), (self.t2, self.r2, "arm 2")] {
            if t.norm() > T::one() + tol {
                return Err(Error::Domain(format!("|T| must lie in [0,1] for {label}")));
            }
            if t.norm_sqr() + r.norm_sqr() > T::one() + tol {
                return Err(Error::Domain(format!(
                    "|T|^2 + |R|^2 must not exceed 1 for {label}"
                )));
            }
        }
        if !(self.nth1 >= T::zero() && self.nth2 >= T::zero()) {
            return Err(Error::Domain("thermal occupations must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn zeta_mag(&self) -> T {
        self.zeta_mag
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn t1(&self) -> Complex<T> {
        self.t1
    }

    pub fn t2(&self) -> Complex<T> {
        self.t2
    }

    /// Phase `phi + arg T1 + arg T2` picked up by the corrective
    /// displacement.
    pub fn phi_tilde(&self) -> T {
        self.phi + self.t1.arg() + self.t2.arg()
    }

    /// Effective thermal terms `2 n_th (1 - |T|^2 - |R|^2)` per arm.
    fn thermal_terms(&self) -> (T, T) {
        let u1 = T::two() * self.nth1 * (T::one() - self.t1.norm_sqr() - self.r1.norm_sqr());
        let u2 = T::two() * self.nth2 * (T::one() - self.t2.norm_sqr() - self.r2.norm_sqr());
        (u1.max(T::zero()), u2.max(T::zero()))
    }

    /// Coefficients of the shared entangled state after transmission.
    pub fn shared_state(&self) -> EntangledState<T> {
        let c1m = T::two() * self.zeta_mag.sinh() * self.zeta_mag.sinh(); // cosh(2z) - 1
        let s = (T::two() * self.zeta_mag).sinh();
        let (tt1, tt2) = (self.t1.norm_sqr(), self.t2.norm_sqr());
        let (u1, u2) = self.thermal_terms();
        let a1 = tt1 * c1m + u1;
        let a2 = tt2 * c1m + u2;
        // (1+a1)(1+a2) - tt1 tt2 sinh^2(2z), expanded so no O(cosh^2) terms
        // are subtracted.
        let norm = T::one() + a1 + a2 - T::two() * tt1 * tt2 * c1m
            + c1m * (tt1 * u2 + tt2 * u1)
            + u1 * u2;
        let phase = Complex::from_polar(T::one(), self.phi);
        EntangledState {
            s: phase * self.t1 * self.t2 * s / norm,
            c1: (T::one() + a1) / norm,
            c2: (T::one() + a2) / norm,
            normalization: norm,
        }
    }

    /// Wigner function of the shared two-mode state at `(alpha, beta)`.
    /// Reduces pointwise to the source TMSV for unit transmissions and
    /// cold arms.
    pub fn tmsv_wigner_value(&self, alpha: Complex<T>, beta: Complex<T>) -> T {
        let e = self.shared_state();
        let exponent = -T::two()
            * (e.c2 * alpha.norm_sqr()
                + e.c1 * beta.norm_sqr()
                + T::two() * (e.s.conj() * alpha * beta).re);
        T::four() / (T::PI() * T::PI() * e.normalization) * exponent.exp()
    }

    /// Smearing variance of the averaged teleportation channel at
    /// displacement gain `lambda`,
    /// `sigma = N/(4 lambda^2) (C2 + lambda^2 C1 - 2 lambda |S|)`.
    pub fn sigma(&self, lambda: T) -> Result<T> {
        if !(lambda > T::zero()) {
            return Err(Error::Domain(format!("sigma requires lambda > 0, got {lambda}")));
        }
        let c1m = T::two() * self.zeta_mag.sinh() * self.zeta_mag.sinh();
        let (u1, u2) = self.thermal_terms();
        let p = self.t2.norm();
        let q = lambda * self.t1.norm();
        // sinh - (cosh - 1) = 1 - exp(-2z), evaluated without cancellation.
        let one_minus_exp = -(-T::two() * self.zeta_mag).exp_m1();
        let bracket = T::one() + lambda * lambda + u2 + lambda * lambda * u1
            + (p - q) * (p - q) * c1m
            - T::two() * p * q * one_minus_exp;
        Ok(bracket / (T::four() * lambda * lambda))
    }

    /// Infinite-squeezing limit of the conditional-kernel variance,
    /// `sigma_inf = (|T1|^2 + |T2|^2 - 2|T1 T2|^2) / (4 |T2|^2)`.
    pub fn sigma_infinity(&self) -> Result<T> {
        let tt1 = self.t1.norm_sqr();
        let tt2 = self.t2.norm_sqr();
        if !(tt2 > T::zero()) {
            return Err(Error::Domain("sigma_infinity requires T2 != 0".into()));
        }
        Ok((tt1 + tt2 - T::two() * tt1 * tt2) / (T::four() * tt2))
    }

    /// Loss-matched displacement gain `|T2 / T1|`.
    pub fn lambda_star(&self) -> Result<T> {
        let t1 = self.t1.norm();
        if !(t1 > T::zero()) {
            return Err(Error::Domain("lambda_star requires T1 != 0".into()));
        }
        Ok(self.t2.norm() / t1)
    }
}

/// Mean thermal occupation `1/(exp(x) - 1)` for `x = hbar omega / (k theta)`.
pub fn thermal_occupation<T: Scalar>(hbar_omega_over_kt: T) -> Result<T> {
    if !(hbar_omega_over_kt > T::zero()) {
        return Err(Error::Domain("thermal occupation requires a positive frequency/temperature ratio".into()));
    }
    Ok(T::one() / hbar_omega_over_kt.exp_m1())
}
