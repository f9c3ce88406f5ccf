//! Gauss-Legendre quadrature with cached node tables.

use nalgebra::DMatrix;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

static TABLES: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// from the eigendecomposition of the Jacobi matrix (Golub-Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let beta = kf / (4.0 * kf * kf - 1.0).sqrt();
        jac[(k - 1, k)] = beta;
        jac[(k, k - 1)] = beta;
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], 2.0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    cache
        .lock()
        .unwrap()
        .insert(n, (nodes.clone(), weights.clone()));
    (nodes, weights)
}

/// `n`-point Gauss-Legendre approximation of the integral of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(half * x + mid);
    }
    half * acc
}

/// Adaptive bisection around a fixed-order rule: the value on a panel is
/// accepted when it agrees with the sum over its two halves to `rel_tol`,
/// otherwise the halves are refined (bounded depth).
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    order: usize,
    rel_tol: f64,
) -> f64 {
    fn go<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        order: usize,
        rel_tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = integrate(&mut *f, a, m, order);
        let right = integrate(&mut *f, m, b, order);
        let refined = left + right;
        if (refined - whole).abs() <= rel_tol * refined.abs().max(1.0) || depth >= 24 {
            refined
        } else {
            go(f, a, m, left, order, rel_tol, depth + 1)
                + go(f, m, b, right, order, rel_tol, depth + 1)
        }
    }
    let whole = integrate(&mut *f, a, b, order);
    go(f, a, b, whole, order, rel_tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // 5-point rule integrates degree 9 exactly
        let val = integrate(|x| x.powi(9) + 3.0 * x.powi(4), -1.0, 1.0, 5);
        assert!((val - 6.0 / 5.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_length() {
        for n in [1, 2, 8, 64] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "order {n}: {s}");
        }
    }

    #[test]
    fn smooth_integral() {
        let val = integrate(|x: f64| x.exp(), 0.0, 1.0, 32);
        assert!((val - (1.0f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kink_free_integrand() {
        let mut f = |x: f64| (5.0 * x).cos() * (-x).exp();
        let got = integrate_adaptive(&mut f, 0.0, 2.0, 16, 1e-12);
        // antiderivative of cos(5x)e^{-x}: e^{-x}(5 sin 5x - cos 5x)/26
        let exact = |x: f64| (-x).exp() * (5.0 * (5.0 * x).sin() - (5.0 * x).cos()) / 26.0;
        assert!((got - (exact(2.0) - exact(0.0))).abs() < 1e-12);
    }
}
