//! Orthogonal polynomials and quadrature rules.
//!
//! Laguerre and Legendre polynomials are evaluated by their three-term
//! recurrences, which is exact for the moderate degrees used here
//! (Fock numbers are capped at 64). Gauss-Hermite and Gauss-Legendre
//! rules are built from scratch by root bracketing plus Newton
//! refinement on the orthonormal recurrences.

use crate::scalar::Scalar;

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre<T: Scalar>(n: u32, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = T::one() - x;
    for k in 1..n {
        let kf = T::real(k as f64);
        let next = ((T::two() * kf + T::one() - x) * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial `P_n(x)` for arbitrary real argument.
pub fn legendre<T: Scalar>(n: u32, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = x;
    for k in 1..n {
        let kf = T::real(k as f64);
        let next = ((T::two() * kf + T::one()) * x * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite value `h_n(x)` (weight `exp(-x^2)`), together with
/// `h_{n-1}(x)` for derivative and weight formulas.
fn hermite_pair<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut prev = T::zero();
    let mut cur = T::real(std::f64::consts::PI.powf(-0.25));
    for k in 0..n {
        let kf = T::real(k as f64);
        let next = x * (T::two() / (kf + T::one())).sqrt() * cur
            - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss-Hermite nodes and weights for `int f(x) exp(-x^2) dx`.
///
/// Roots are located by a sign scan over `[0, sqrt(2n+1)]` followed by
/// Newton iteration; weights use the orthonormal-recurrence identity
/// `w_i = 1 / (n * h_{n-1}(x_i)^2)`.
pub fn gauss_hermite<T: Scalar>(order: usize) -> (Vec<T>, Vec<T>) {
    assert!(order >= 1, "quadrature order must be positive");
    let bound = T::real((2.0 * order as f64 + 1.0).sqrt()) + T::one();
    let step = T::real(0.5 / (order as f64).sqrt().max(1.0));
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);

    let mut push = |x: T| {
        let (_, hm1) = hermite_pair(order, x);
        let w = T::one() / (T::real(order as f64) * hm1 * hm1);
        nodes.push(x);
        weights.push(w);
    };

    if order % 2 == 1 {
        push(T::zero());
    }
    // Scan the positive half-axis for sign changes of h_n.
    let mut x = if order % 2 == 1 { step } else { T::zero() };
    let mut f_prev = hermite_pair(order, x).0;
    let mut found = Vec::new();
    while x < bound {
        let x_next = x + step;
        let f_next = hermite_pair(order, x_next).0;
        if f_prev * f_next < T::zero() {
            let mut root = (x + x_next) * T::half();
            for _ in 0..60 {
                let (h, hm1) = hermite_pair(order, root);
                let deriv = (T::two() * T::real(order as f64)).sqrt() * hm1;
                let delta = h / deriv;
                root = root - delta;
                if delta.abs() < T::real(1e-15) * root.abs().max(T::one()) {
                    break;
                }
            }
            found.push(root);
        }
        x = x_next;
        f_prev = f_next;
    }
    for &r in &found {
        push(r);
        push(-r);
    }
    (nodes, weights)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Scalar>(order: usize) -> (Vec<T>, Vec<T>) {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order as f64;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for i in 1..=order {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = T::real((std::f64::consts::PI * (i as f64 - 0.25) / (n + 0.5)).cos());
        for _ in 0..100 {
            let p = legendre(order as u32, x);
            let pm1 = legendre(order as u32 - 1, x);
            // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
            let deriv = T::real(n) * (x * p - pm1) / (x * x - T::one());
            let delta = p / deriv;
            x = x - delta;
            if delta.abs() < T::real(1e-16) {
                break;
            }
        }
        let pm1 = legendre(order as u32 - 1, x);
        let deriv = T::real(n) * (x * legendre(order as u32, x) - pm1) / (x * x - T::one());
        nodes.push(x);
        weights.push(T::two() / ((T::one() - x * x) * deriv * deriv));
    }
    (nodes, weights)
}

/// Pairwise (cascade) summation; deterministic and accurate for the
/// grid reductions used by the oracle.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    if xs.len() <= 8 {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
