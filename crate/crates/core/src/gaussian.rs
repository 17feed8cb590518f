//! Single-mode Gaussian Wigner functions.
//!
//! A state is stored in the exponential parameterization
//!
//! ```text
//! W(g) = (N/pi) exp(-A|g|^2 - B g*^2 - B* g^2 + C g* + C* g - D)
//! ```
//!
//! with `A > 2|B|`. The prefactor `N = sqrt(A^2 - 4|B|^2)` and the offset
//! `D = [A|C|^2 - 2 Re(B* C^2)] / N^2` make the plane integral exactly one,
//! so every constructed value is a normalized quasi-probability density.
//! The teleportation map (Gaussian smearing with variance `sigma` followed
//! by a rescale of the output coordinate by `lambda`) and the overlap
//! functional `pi * int W1 W2` stay inside this family.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Normalized single-mode Gaussian Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWigner<T> {
    a: T,
    b: Complex<T>,
    c: Complex<T>,
    d: T,
    n: T,
}

impl<T: Scalar> GaussianWigner<T> {
    /// Build the normalized Gaussian with quadratic coefficients `a`, `b`
    /// and linear coefficient `c`.
    pub fn new(a: T, b: Complex<T>, c: Complex<T>) -> Result<Self> {
        if !(a > T::two() * b.norm()) || !a.is_finite() {
            return Err(Error::Domain(format!(
                "non-normalizable Gaussian: require A > 2|B|, got A = {a}, |B| = {}",
                b.norm()
            )));
        }
        let n = (a * a - T::four() * b.norm_sqr()).sqrt();
        let d = offset(a, b, c, n);
        Ok(Self { a, b, c, d, n })
    }

    /// The vacuum state `(2/pi) exp(-2|g|^2)`.
    pub fn vacuum() -> Self {
        Self {
            a: T::two(),
            b: Complex::new(T::zero(), T::zero()),
            c: Complex::new(T::zero(), T::zero()),
            d: T::zero(),
            n: T::two(),
        }
    }

    /// Coherent state of amplitude `alpha`.
    pub fn coherent(alpha: Complex<T>) -> Self {
        let two = T::two();
        Self::new(
            two,
            Complex::new(T::zero(), T::zero()),
            alpha * two,
        )
        .expect("coherent state is always valid")
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> Complex<T> {
        self.b
    }

    pub fn c(&self) -> Complex<T> {
        self.c
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// Normalization prefactor `N`.
    pub fn n(&self) -> T {
        self.n
    }

    /// Evaluate the Wigner function at phase-space point `gamma`.
    pub fn evaluate(&self, gamma: Complex<T>) -> T {
        let exponent = -self.a * gamma.norm_sqr()
            - T::two() * (self.b.conj() * gamma * gamma).re
            + T::two() * (self.c * gamma.conj()).re
            - self.d;
        self.n / T::PI() * exponent.exp()
    }

    /// Purity `pi * int W^2 = N/2`.
    pub fn purity(&self) -> T {
        self.n * T::half()
    }

    /// Whether the Gaussian respects the single-mode uncertainty bound
    /// (purity at most one). Normalized Gaussians sharper than the vacuum
    /// are valid densities but not quantum states.
    pub fn is_physical(&self) -> bool {
        self.n <= T::two() + T::real(1e-9)
    }

    /// First moment of the density.
    pub fn mean(&self) -> Complex<T> {
        let det = self.n * self.n;
        let (br, bi) = (self.b.re, self.b.im);
        let (cr, ci) = (self.c.re, self.c.im);
        let mx = ((self.a - T::two() * br) * cr - T::two() * bi * ci) / det;
        let my = ((self.a + T::two() * br) * ci - T::two() * bi * cr) / det;
        Complex::new(mx, my)
    }

    /// Covariance matrix over `(Re g, Im g)`.
    pub fn covariance(&self) -> [[T; 2]; 2] {
        let det = self.n * self.n;
        let (br, bi) = (self.b.re, self.b.im);
        let sxx = (self.a - T::two() * br) / (T::two() * det);
        let syy = (self.a + T::two() * br) / (T::two() * det);
        let sxy = -bi / det;
        [[sxx, sxy], [sxy, syy]]
    }

    /// Teleportation map: smear with a Gaussian kernel of variance `sigma`
    /// and rescale the output coordinate by `lambda`,
    ///
    /// ```text
    /// W_out(b) = (2 pi sigma lambda^2)^-1 int W(g) exp(-|g - b/lambda|^2 / 2 sigma) d^2 g.
    /// ```
    ///
    /// `sigma = 0` is excluded; the identity limit is reached smoothly for
    /// `sigma >= 1e-12`.
    pub fn teleport(&self, sigma: T, lambda: T) -> Result<Self> {
        if !(sigma > T::zero()) {
            return Err(Error::Domain(format!("teleport map requires sigma > 0, got {sigma}")));
        }
        if !(lambda > T::zero()) {
            return Err(Error::Domain(format!("teleport map requires lambda > 0, got {lambda}")));
        }
        let u = self.a + T::one() / (T::two() * sigma);
        let e = u * u - T::four() * self.b.norm_sqr();
        let l2 = lambda * lambda;
        // A_out in the cancellation-free form (A u - 4|B|^2) / (2 lambda^2 sigma E),
        // algebraically equal to [2 sigma - u/E] / (2 lambda sigma)^2.
        let a_out = (self.a * u - T::four() * self.b.norm_sqr()) / (T::two() * l2 * sigma * e);
        let b_out = self.b / (T::four() * l2 * sigma * sigma * e);
        let c_out = (self.c * u - self.b * self.c.conj() * T::two())
            / (T::two() * lambda * sigma * e);
        let n_out = self.n / (T::two() * l2 * sigma * e.sqrt());
        let d_out = self.d
            - (u * self.c.norm_sqr() - T::two() * (self.b.conj() * self.c * self.c).re) / e;
        Ok(Self { a: a_out, b: b_out, c: c_out, d: d_out, n: n_out })
    }

    /// Overlap functional `pi * int W1 W2`; the teleportation fidelity when
    /// one argument is the pure input state.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        let a = self.a + other.a;
        let b = self.b + other.b;
        let c = self.c + other.c;
        let d = self.d + other.d;
        let den = a * a - T::four() * b.norm_sqr();
        if !(den > T::zero()) {
            return Err(Error::Domain(
                "overlap of non-normalizable Gaussian combination".into(),
            ));
        }
        let lam = (a * c.norm_sqr() - T::two() * (b.conj() * c * c).re) / den;
        Ok(self.n * other.n * (lam - d).exp() / den.sqrt())
    }

    /// The state with rotated argument, `W'(g) = W(g e^{i theta})`.
    pub fn rotated(&self, theta: T) -> Self {
        let r1 = Complex::from_polar(T::one(), -theta);
        let r2 = Complex::from_polar(T::one(), -(theta + theta));
        Self { a: self.a, b: self.b * r2, c: self.c * r1, d: self.d, n: self.n }
    }

    /// The state displaced by `delta`, `W'(g) = W(g - delta)`.
    pub fn displaced(&self, delta: Complex<T>) -> Self {
        let c = self.c + delta * self.a + self.b * delta.conj() * T::two();
        let d = offset(self.a, self.b, c, self.n);
        Self { a: self.a, b: self.b, c, d, n: self.n }
    }
}

fn offset<T: Scalar>(a: T, b: Complex<T>, c: Complex<T>, n: T) -> T {
    (a * c.norm_sqr() - T::two() * (b.conj() * c * c).re) / (n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    type G = GaussianWigner<f64>;
    type C64 = Complex<f64>;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn vacuum_is_normalized_with_zero_offset() {
        let v = G::new(2.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(v.n(), 2.0);
        assert_eq!(v.d(), 0.0);
        assert_relative_eq!(v.evaluate(c(0.0, 0.0)), 2.0 / std::f64::consts::PI);
        assert_relative_eq!(
            v.evaluate(c(1.0, 0.0)),
            2.0 / std::f64::consts::PI * (-2.0_f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn squeezed_vacuum_has_prefactor_two() {
        let zeta0 = 0.5_f64;
        let g = G::new((2.0 * zeta0).cosh() * 2.0, c((2.0 * zeta0).sinh(), 0.0), c(0.0, 0.0))
            .unwrap();
        assert_relative_eq!(g.n(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(g.d(), 0.0);
    }

    #[test]
    fn rejects_non_normalizable_coefficients() {
        assert!(G::new(2.0, c(1.1, 0.0), c(0.0, 0.0)).is_err());
        assert!(G::new(2.0, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn coherent_state_peaks_at_displacement() {
        let g = G::coherent(c(1.0, 0.0));
        assert_relative_eq!(g.evaluate(c(1.0, 0.0)), 2.0 / std::f64::consts::PI, epsilon = 1e-13);
        assert_relative_eq!(g.mean().re, 1.0, epsilon = 1e-13);
        assert_relative_eq!(g.mean().im, 0.0);
    }

    #[test]
    fn near_zero_noise_is_identity() {
        let v = G::vacuum();
        let out = v.teleport(1e-12, 1.0).unwrap();
        assert_abs_diff_eq!(out.a(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.n(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.b().norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(out.d(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn classical_noise_doubles_vacuum_spread() {
        // sigma = 1/2, lambda = 1: variance 1/4 -> 3/4, so A = N = 2/3.
        let out = G::vacuum().teleport(0.5, 1.0).unwrap();
        assert_relative_eq!(out.a(), 2.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(out.n(), 2.0 / 3.0, epsilon = 1e-14);
        assert_eq!(out.b().norm(), 0.0);
        assert_relative_eq!(out.covariance()[0][0], 0.75, epsilon = 1e-13);
    }

    #[test]
    fn teleport_rejects_bad_parameters() {
        assert!(G::vacuum().teleport(0.0, 1.0).is_err());
        assert!(G::vacuum().teleport(-0.5, 1.0).is_err());
        assert!(G::vacuum().teleport(0.5, 0.0).is_err());
    }

    #[test]
    fn overlap_anchors() {
        let v = G::vacuum();
        assert_relative_eq!(v.overlap(&v).unwrap(), 1.0, epsilon = 1e-14);
        let coh = G::coherent(c(1.0, 0.0));
        assert_relative_eq!(v.overlap(&coh).unwrap(), (-1.0_f64).exp(), epsilon = 1e-13);
        // squeezed vacuum vs vacuum: 1/cosh(zeta0)
        let z = 0.88_f64;
        let sq = G::new(2.0 * (2.0 * z).cosh(), c((2.0 * z).sinh(), 0.0), c(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.overlap(&sq).unwrap(), 1.0 / z.cosh(), epsilon = 1e-13);
        assert_relative_eq!(sq.overlap(&v).unwrap(), v.overlap(&sq).unwrap());
    }

    #[test]
    fn displacement_moves_mean_only() {
        let g = G::new(2.2, c(0.3, -0.1), c(0.4, 0.6)).unwrap();
        let d = c(0.7, -1.3);
        let moved = g.displaced(d);
        let m0 = g.mean();
        let m1 = moved.mean();
        assert_relative_eq!(m1.re, m0.re + d.re, epsilon = 1e-12);
        assert_relative_eq!(m1.im, m0.im + d.im, epsilon = 1e-12);
        assert_eq!(moved.n(), g.n());
        // pointwise: W'(g) = W(g - delta)
        let p = c(0.2, 0.9);
        assert_relative_eq!(moved.evaluate(p), g.evaluate(p - d), epsilon = 1e-12);
    }

    #[test]
    fn rotation_rotates_argument() {
        let g = G::new(2.5, c(0.4, 0.2), c(-0.3, 0.8)).unwrap();
        let theta = 0.77_f64;
        let rot = g.rotated(theta);
        let p = c(0.6, -0.4);
        let rotated_arg = p * Complex::from_polar(1.0, theta);
        assert_relative_eq!(rot.evaluate(p), g.evaluate(rotated_arg), epsilon = 1e-12);
    }

    proptest! {
        // Random valid states: N and D obey the closure identities and the
        // self-overlap equals the purity, bounded by one for physical states.
        #[test]
        fn normalization_identities(
            a in 0.5_f64..6.0,
            bmag in 0.0_f64..0.45,
            bph in 0.0_f64..std::f64::consts::TAU,
            cre in -2.0_f64..2.0,
            cim in -2.0_f64..2.0,
        ) {
            let b = Complex::from_polar(a * bmag, bph);
            let g = G::new(a, b, c(cre, cim)).unwrap();
            prop_assert!((g.n() - (a * a - 4.0 * b.norm_sqr()).sqrt()).abs() <= 1e-12 * g.n());
            let self_overlap = g.overlap(&g).unwrap();
            prop_assert!((self_overlap - g.purity()).abs() <= 1e-10);
            if g.is_physical() {
                prop_assert!(self_overlap <= 1.0 + 1e-9);
            }
            if (g.n() - 2.0).abs() < 1e-12 {
                prop_assert!((self_overlap - 1.0).abs() <= 1e-10);
            }
        }

        // Composing two maps equals a single map with lambda = l1 l2 and
        // sigma = s1 + s2 / l1^2 (kernel variances measured in input
        // coordinates; the second smear is shrunk back through the first
        // rescale).
        #[test]
        fn teleport_composition(
            a in 1.0_f64..4.0,
            bmag in 0.0_f64..0.4,
            cre in -1.5_f64..1.5,
            cim in -1.5_f64..1.5,
            s1 in 0.05_f64..1.0,
            s2 in 0.05_f64..1.0,
            l1 in 0.4_f64..1.8,
            l2 in 0.4_f64..1.8,
        ) {
            let g = G::new(a, c(a * bmag, 0.0), c(cre, cim)).unwrap();
            let two_step = g.teleport(s1, l1).unwrap().teleport(s2, l2).unwrap();
            let one_step = g.teleport(s1 + s2 / (l1 * l1), l1 * l2).unwrap();
            prop_assert!((two_step.a() - one_step.a()).abs() <= 1e-10 * one_step.a().abs().max(1.0));
            prop_assert!((two_step.b() - one_step.b()).norm() <= 1e-10);
            prop_assert!((two_step.c() - one_step.c()).norm() <= 1e-10);
            prop_assert!((two_step.d() - one_step.d()).abs() <= 1e-10 * one_step.d().abs().max(1.0));
            prop_assert!((two_step.n() - one_step.n()).abs() <= 1e-10 * one_step.n().abs().max(1.0));
        }

        // The teleport output stays normalized: N and D keep satisfying the
        // closure identities.
        #[test]
        fn teleport_preserves_normalization(
            a in 1.0_f64..4.0,
            bmag in 0.0_f64..0.4,
            cre in -1.5_f64..1.5,
            sigma in 0.01_f64..2.0,
            lambda in 0.2_f64..2.0,
        ) {
            let g = G::new(a, c(a * bmag, 0.0), c(cre, 0.4)).unwrap();
            let out = g.teleport(sigma, lambda).unwrap();
            let n_expect = (out.a() * out.a() - 4.0 * out.b().norm_sqr()).sqrt();
            prop_assert!((out.n() - n_expect).abs() <= 1e-12 * n_expect);
            let d_expect = (out.a() * out.c().norm_sqr()
                - 2.0 * (out.b().conj() * out.c() * out.c()).re)
                / (n_expect * n_expect);
            prop_assert!((out.d() - d_expect).abs() <= 1e-12 * d_expect.abs().max(1.0));
        }
    }
}
