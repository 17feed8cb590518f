//! Brute-force phase-space numerics on uniform grids.
//!
//! This module is the independent cross-check for every closed form in the
//! crate: states are sampled on a square grid over `[-L, L)^2`, the
//! teleportation channel is applied as an explicit separable Gaussian
//! quadrature evaluated at the rescaled output points, and fidelities are
//! overlap sums. Nothing here reuses the Gaussian coefficient algebra.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gaussian::GaussianWigner;
use crate::scalar::Scalar;
use crate::special::pairwise_sum;
use crate::teleport::{InputState, TeleportSetting};
use std::io::Write;

/// Sampled Wigner function. Values are stored row-major: the row index runs
/// over `Im g`, the column index over `Re g`, both on the uniform grid
/// `x_i = -L + i * (2L/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWigner<T> {
    half_width: T,
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> GridWigner<T> {
    /// Sample an arbitrary function on the grid.
    pub fn from_fn(f: impl Fn(Complex<T>) -> T, half_width: T, n: usize) -> Result<Self> {
        check_geometry(half_width, n)?;
        let dx = T::two() * half_width / T::real(n as f64);
        let mut values = Vec::with_capacity(n * n);
        for iy in 0..n {
            let y = -half_width + dx * T::real(iy as f64);
            for ix in 0..n {
                let x = -half_width + dx * T::real(ix as f64);
                values.push(f(Complex::new(x, y)));
            }
        }
        Ok(Self { half_width, n, values })
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Grid spacing `2L/n`.
    pub fn dx(&self) -> T {
        T::two() * self.half_width / T::real(self.n as f64)
    }

    /// Coordinate of sample `(ix, iy)`.
    pub fn point(&self, ix: usize, iy: usize) -> Complex<T> {
        let dx = self.dx();
        Complex::new(
            -self.half_width + dx * T::real(ix as f64),
            -self.half_width + dx * T::real(iy as f64),
        )
    }

    /// Trapezoidal plane integral. States of interest decay to the edge, so
    /// the half-weight boundary corrections are applied but negligible.
    pub fn mass(&self) -> T {
        let n = self.n;
        let mut weighted: Vec<T> = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                let mut v = self.values[iy * n + ix];
                if ix == 0 {
                    v = v * T::half();
                }
                if iy == 0 {
                    v = v * T::half();
                }
                weighted.push(v);
            }
        }
        pairwise_sum(&weighted) * self.dx() * self.dx()
    }

    /// Minimum sampled value.
    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// Sup-norm distance to another grid of the same geometry.
    pub fn sup_distance(&self, other: &Self) -> Result<T> {
        self.check_same_geometry(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max))
    }

    fn check_same_geometry(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.half_width != other.half_width {
            return Err(Error::GridMismatch(format!(
                "grids differ: (L = {}, n = {}) vs (L = {}, n = {})",
                self.half_width, self.n, other.half_width, other.n
            )));
        }
        Ok(())
    }

    /// Dump as CSV: a `L,n` header line, then one row of samples per line.
    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{},{}", self.half_width, self.n)?;
        for iy in 0..self.n {
            let row = &self.values[iy * self.n..(iy + 1) * self.n];
            let line: Vec<String> =
                row.iter().map(|v| format!("{:.12e}", v.to_f64().unwrap())).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Dump as flat little-endian binary: `f64 L`, `u64 n`, then row-major
    /// `f64` values.
    pub fn write_binary(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(&self.half_width.to_f64().unwrap().to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_f64().unwrap().to_le_bytes())?;
        }
        Ok(())
    }
}

fn check_geometry<T: Scalar>(half_width: T, n: usize) -> Result<()> {
    if !(half_width > T::zero()) {
        return Err(Error::Domain("grid half-width must be positive".into()));
    }
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("grid size must be a power of two, got {n}")));
    }
    Ok(())
}

/// Sample an input state on the grid.
pub fn rasterize_state<T: Scalar>(
    input: &InputState<T>,
    half_width: T,
    n: usize,
) -> Result<GridWigner<T>> {
    let dx = T::two() * half_width / T::real(n as f64);
    if dx > input.delta_w() / T::real(2.5) {
        return Err(Error::GridResolution(format!(
            "grid spacing {dx} cannot resolve the state feature scale {}",
            input.delta_w()
        )));
    }
    GridWigner::from_fn(|g| input.wigner_value(g), half_width, n)
}

/// Sample a Gaussian Wigner function on the grid.
pub fn rasterize_gaussian<T: Scalar>(
    g: &GaussianWigner<T>,
    half_width: T,
    n: usize,
) -> Result<GridWigner<T>> {
    GridWigner::from_fn(|p| g.evaluate(p), half_width, n)
}

/// Apply the teleportation channel on the grid:
/// `W_out(b) = (2 pi sigma lambda^2)^-1 int W(g) exp(-|g - b/lambda|^2 / 2 sigma) d^2 g`.
///
/// The kernel is separable, so the quadrature is two one-dimensional passes
/// evaluated directly at the rescaled output coordinates; no interpolation
/// is involved. Samples outside the grid are treated as zero.
pub fn convolve_teleport<T: Scalar>(
    g: &GridWigner<T>,
    sigma: T,
    lambda: T,
) -> Result<GridWigner<T>> {
    if !(sigma > T::zero() && lambda > T::zero()) {
        return Err(Error::Domain("convolution requires sigma > 0 and lambda > 0".into()));
    }
    let n = g.n;
    let dx = g.dx();
    if sigma.sqrt() < T::two() * dx {
        return Err(Error::GridResolution(format!(
            "kernel width sqrt(sigma) = {} under-resolved by grid spacing {dx}",
            sigma.sqrt()
        )));
    }
    // weights out to 6.5 standard deviations; the truncated kernel mass is
    // below 1e-9, well under the grid tolerances
    let reach = (T::real(6.5) * sigma.sqrt() / dx).to_f64().unwrap().ceil() as usize;
    let norm = dx / (T::two() * T::PI() * sigma).sqrt();
    let inv_two_sigma = T::one() / (T::two() * sigma);

    // per output index: first input index and kernel weights along one axis
    let mut windows: Vec<(usize, Vec<T>)> = Vec::with_capacity(n);
    for j in 0..n {
        let target = (-g.half_width + dx * T::real(j as f64)) / lambda;
        let center = ((target + g.half_width) / dx).to_f64().unwrap().round() as isize;
        let lo = (center - reach as isize).max(0) as usize;
        let hi = ((center + reach as isize) as usize).min(n.saturating_sub(1));
        if lo > hi || center < -(reach as isize) || center >= (n + reach) as isize {
            windows.push((0, Vec::new()));
            continue;
        }
        let mut w = Vec::with_capacity(hi - lo + 1);
        for p in lo..=hi {
            let xp = -g.half_width + dx * T::real(p as f64);
            let d = xp - target;
            w.push((-d * d * inv_two_sigma).exp() * norm);
        }
        windows.push((lo, w));
    }

    // pass 1: smear along Re for every output column j and input row q
    let mut mid = vec![T::zero(); n * n];
    for q in 0..n {
        let row = &g.values[q * n..(q + 1) * n];
        for (j, (lo, w)) in windows.iter().enumerate() {
            let mut acc = T::zero();
            for (k, &wk) in w.iter().enumerate() {
                acc = acc + row[lo + k] * wk;
            }
            mid[q * n + j] = acc;
        }
    }
    // pass 2: smear along Im for every output row k
    let inv_l2 = T::one() / (lambda * lambda);
    let mut out = vec![T::zero(); n * n];
    for (k, (lo, w)) in windows.iter().enumerate() {
        for j in 0..n {
            let mut acc = T::zero();
            for (m, &wm) in w.iter().enumerate() {
                acc = acc + mid[(lo + m) * n + j] * wm;
            }
            out[k * n + j] = acc * inv_l2;
        }
    }
    Ok(GridWigner { half_width: g.half_width, n, values: out })
}

/// Overlap functional `pi * sum W1 W2 dx^2` on identical grids.
pub fn overlap<T: Scalar>(g1: &GridWigner<T>, g2: &GridWigner<T>) -> Result<T> {
    g1.check_same_geometry(g2)?;
    let products: Vec<T> = g1.values.iter().zip(&g2.values).map(|(&a, &b)| a * b).collect();
    Ok(T::PI() * pairwise_sum(&products) * g1.dx() * g1.dx())
}

/// Grid geometry chosen for one fidelity cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub half_width: T,
    pub n: usize,
}

/// Pick a grid that resolves both the input state and the teleported
/// output. The half-width covers the input support (the overlap integrand
/// vanishes outside it); the spacing resolves the narrowest feature of
/// input and output and the smearing kernel.
pub fn auto_grid<T: Scalar>(
    input: &InputState<T>,
    setting: Option<&TeleportSetting<T>>,
) -> Result<GridSpec<T>> {
    let (extent, narrow_in) = match *input {
        InputState::Gaussian { zeta0, alpha0 } => (
            T::real(2.2) * zeta0.abs().exp() + alpha0.norm() + T::two(),
            (-zeta0.abs()).exp() * T::half(),
        ),
        InputState::Fock { n } => {
            let nf = T::real(n as f64);
            (
                (T::two() * nf + T::one()).sqrt() + T::real(5.0),
                T::half() / nf.max(T::one()).sqrt(),
            )
        }
    };
    let half_width = extent.max(T::real(6.0));
    // 1.5 samples per feature standard deviation: the uniform-grid
    // quadrature error of near-Gaussian integrands falls off like
    // exp(-2 pi^2 s^2 / dx^2), already ~1e-19 at this spacing
    let mut dx_req = narrow_in / T::real(1.5);
    if let Some(s) = setting {
        let narrow_out = s.lambda * (narrow_in * narrow_in + s.sigma).sqrt();
        dx_req = dx_req.min(narrow_out / T::real(1.5)).min(s.sigma.sqrt() / T::real(2.2));
    }
    let needed = (T::two() * half_width / dx_req).to_f64().unwrap();
    let mut n = 256usize;
    while (n as f64) < needed {
        n *= 2;
        if n > 4096 {
            return Err(Error::GridResolution(format!(
                "state requires more than 4096 samples per axis (needed {needed:.0})"
            )));
        }
    }
    Ok(GridSpec { half_width, n })
}

/// Fidelity through the grid oracle: rasterize, convolve, overlap. The
/// returned value is `pi * int W_in W_out` with everything done by
/// quadrature.
pub fn fidelity_grid<T: Scalar>(
    input: &InputState<T>,
    s: &TeleportSetting<T>,
    spec: Option<GridSpec<T>>,
) -> Result<T> {
    let spec = match spec {
        Some(spec) => spec,
        None => auto_grid(input, Some(s))?,
    };
    let g_in = rasterize_state(input, spec.half_width, spec.n)?;
    let g_out = convolve_teleport(&g_in, s.sigma, s.lambda)?;
    if s.phi_tilde != T::zero() {
        if let Some(gauss) = input.to_gaussian() {
            let rotated = rasterize_gaussian(&gauss.rotated(s.phi_tilde), spec.half_width, spec.n)?;
            return overlap(&rotated, &g_out);
        }
    }
    overlap(&g_in, &g_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn geometry_validation() {
        assert!(GridWigner::from_fn(|_| 1.0_f64, 6.0, 100).is_err());
        assert!(GridWigner::from_fn(|_| 1.0_f64, -1.0, 128).is_err());
        assert!(GridWigner::from_fn(|_| 1.0_f64, 6.0, 128).is_ok());
    }

    #[test]
    fn vacuum_mass_is_one() {
        let v = rasterize_state(&InputState::vacuum(), 6.0, 512).unwrap();
        assert_abs_diff_eq!(v.mass(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn fock_masses_and_origin_values() {
        let f1 = rasterize_state(&InputState::fock(1).unwrap(), 6.0, 512).unwrap();
        assert_abs_diff_eq!(f1.mass(), 1.0, epsilon = 1e-5);
        let mid = 256;
        assert_relative_eq!(
            f1.values()[mid * 512 + mid],
            -2.0 / std::f64::consts::PI,
            epsilon = 1e-12
        );
        let f3 = rasterize_state(&InputState::fock(3).unwrap(), 6.0, 512).unwrap();
        assert_abs_diff_eq!(f3.mass(), 1.0, epsilon = 1e-5);
    }

    #[test]
    fn under_resolved_states_are_rejected() {
        // Fock N = 10 on a 128-point grid: spacing too coarse
        let r = rasterize_state(&InputState::fock(10).unwrap(), 19.9, 128);
        assert!(matches!(r, Err(Error::GridResolution(_))));
    }

    #[test]
    fn near_identity_convolution() {
        // the first-order change of the vacuum peak is ~ 4 sigma / pi
        let v = rasterize_state(&InputState::vacuum(), 6.0, 2048).unwrap();
        let out = convolve_teleport(&v, 2e-4, 1.0).unwrap();
        assert!(out.sup_distance(&v).unwrap() < 1e-3);
        assert_abs_diff_eq!(out.mass(), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn kernel_resolution_guard() {
        let v = rasterize_state(&InputState::vacuum(), 6.0, 256).unwrap();
        assert!(matches!(
            convolve_teleport(&v, 1e-4, 1.0),
            Err(Error::GridResolution(_))
        ));
    }

    #[test]
    fn convolved_vacuum_matches_analytic_map() {
        let v = rasterize_state(&InputState::vacuum(), 6.0, 512).unwrap();
        let out = convolve_teleport(&v, 0.5, 1.0).unwrap();
        let expect = rasterize_gaussian(
            &GaussianWigner::vacuum().teleport(0.5, 1.0).unwrap(),
            6.0,
            512,
        )
        .unwrap();
        assert!(out.sup_distance(&expect).unwrap() < 1e-6);
        assert_abs_diff_eq!(out.mass(), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn rescale_only_shrinks_coordinates() {
        // lambda != 1 with a narrow kernel: W_out(b) ~ W(b/lambda)/lambda^2,
        // and exactly the analytic output Gaussian at quadrature precision
        let v = rasterize_state(&InputState::vacuum(), 6.0, 512).unwrap();
        let out = convolve_teleport(&v, 0.004, 0.5).unwrap();
        let (ix, iy) = (269, 247);
        let node = out.point(ix, iy);
        let got = out.values()[iy * 512 + ix];
        let analytic = GaussianWigner::vacuum().teleport(0.004, 0.5).unwrap().evaluate(node);
        assert_abs_diff_eq!(got, analytic, epsilon = 1e-6);
        let rescaled = InputState::vacuum().wigner_value(node / 0.5) / 0.25;
        assert_abs_diff_eq!(got, rescaled, epsilon = 5e-3);
    }

    #[test]
    fn overlap_anchors() {
        let v = rasterize_state(&InputState::vacuum(), 6.0, 512).unwrap();
        assert_abs_diff_eq!(overlap(&v, &v).unwrap(), 1.0, epsilon = 1e-6);
        let f0 = v.clone();
        let f1 = rasterize_state(&InputState::fock(1).unwrap(), 6.0, 512).unwrap();
        assert_abs_diff_eq!(overlap(&f0, &f1).unwrap(), 0.0, epsilon = 1e-6);
        let coh = rasterize_state(&InputState::coherent(c(1.0, 0.0)), 6.0, 512).unwrap();
        assert_abs_diff_eq!(overlap(&v, &coh).unwrap(), (-1.0_f64).exp(), epsilon = 1e-5);
    }

    #[test]
    fn overlap_requires_identical_grids() {
        let a = rasterize_state(&InputState::vacuum(), 6.0, 256).unwrap();
        let b = rasterize_state(&InputState::vacuum(), 6.0, 512).unwrap();
        assert!(matches!(overlap(&a, &b), Err(Error::GridMismatch(_))));
        let c_ = rasterize_state(&InputState::vacuum(), 5.0, 256).unwrap();
        assert!(matches!(overlap(&a, &c_), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn doubling_resolution_is_converged() {
        let s = TeleportSetting::new(1.0, 0.3).unwrap();
        let input = InputState::squeezed(0.5, c(0.7, 0.0));
        let f1 = fidelity_grid(&input, &s, Some(GridSpec { half_width: 8.0, n: 512 })).unwrap();
        let f2 = fidelity_grid(&input, &s, Some(GridSpec { half_width: 8.0, n: 1024 })).unwrap();
        assert_abs_diff_eq!(f1, f2, epsilon = 1e-6);
    }

    #[test]
    fn grid_semigroup_matches_analytic_composition() {
        let input = InputState::squeezed(0.4, c(0.5, 0.0));
        let g = rasterize_state(&input, 8.0, 512).unwrap();
        let two_step = convolve_teleport(&convolve_teleport(&g, 0.3, 0.8).unwrap(), 0.2, 1.1)
            .unwrap();
        let one_step = convolve_teleport(&g, 0.3 + 0.2 / (0.8 * 0.8), 0.8 * 1.1).unwrap();
        assert!(two_step.sup_distance(&one_step).unwrap() < 1e-3);
    }

    #[test]
    fn negativity_follows_the_kernel_width() {
        let f1 = rasterize_state(&InputState::fock(1).unwrap(), 6.0, 512).unwrap();
        let narrow = convolve_teleport(&f1, 0.1, 1.0).unwrap();
        assert!(narrow.min_value() < -0.01);
        let wide = convolve_teleport(&f1, 0.5, 1.0).unwrap();
        assert!(wide.min_value() > -1e-9);
    }

    #[test]
    fn csv_and_binary_dumps_round_trip_header() {
        let v = rasterize_state(&InputState::vacuum(), 6.0, 256).unwrap();
        let mut csv = Vec::new();
        v.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("6,256\n"));
        assert_eq!(text.lines().count(), 257);
        let mut bin = Vec::new();
        v.write_binary(&mut bin).unwrap();
        assert_eq!(bin.len(), 8 + 8 + 256 * 256 * 8);
    }
}
