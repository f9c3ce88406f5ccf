//! Logarithmic-capacity estimation through monic extremal polynomials:
//! `t_N^{1/N}` from the minimax solver and `||P_N||_{L2}^{1/N}` from the
//! L2-minimal (orthogonal) route, linked by a two-sided inequality used as
//! a cross check.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cheb::{Basis, ChebPoly};
use crate::first_kind::{solve_first_kind, FirstKindError};
use crate::interval::IntervalUnion;
use crate::weight::RationalWeight;

#[derive(Debug, Error)]
pub enum CapacityError {
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("degree {0} exceeds the supported cap of 60")]
    DegreeTooLarge(usize),
    #[error("Gram matrix factorization failed (numerical breakdown)")]
    GramSingular,
    #[error(transparent)]
    FirstKind(#[from] FirstKindError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMethod {
    /// `raw = t_N`, the minimal sup norm of a monic degree-N polynomial.
    SupNorm,
    /// `raw = ||P_N||_{L2(K)}`, the minimal L2 norm of a monic polynomial.
    L2Norm,
}

#[derive(Debug, Clone)]
pub struct CapacityEstimate {
    pub n: usize,
    pub method: CapacityMethod,
    pub raw_value: f64,
    /// `raw_value^{1/N}`, the capacity estimate.
    pub estimate: f64,
    /// For the L2 route: the interval `[lo, hi]` that `raw_value` must lie
    /// in, derived from `t_N` and the interval lengths.
    pub bounds: Option<(f64, f64)>,
    /// Normal equations become ill-conditioned for large degrees.
    pub conditioning_warning: bool,
}

/// Minimizes `||P||_{L2(K)}` over monic polynomials of degree `n` through
/// the normal equations with exact Gram integrals, returning the minimizer
/// (T basis) and its L2 norm.
pub fn l2_monic_min(
    k: &IntervalUnion,
    n: usize,
) -> Result<(ChebPoly, f64), CapacityError> {
    if n == 0 {
        return Err(CapacityError::InvalidDegree);
    }
    if n > 60 {
        return Err(CapacityError::DegreeTooLarge(n));
    }
    // exact integrals of T_m over K via the antiderivative
    let mut t_int = vec![0.0f64; 2 * n + 1];
    for (m, v) in t_int.iter_mut().enumerate() {
        let anti = ChebPoly::basis_element(Basis::T, m).antiderivative();
        *v = k
            .intervals()
            .iter()
            .map(|&(a, b)| anti.eval(b) - anti.eval(a))
            .sum();
    }
    // G[i][j] = int_K T_i T_j = (I_{i+j} + I_{|i-j|}) / 2
    let gram = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        0.5 * (t_int[i + j] + t_int[i.abs_diff(j)])
    });

    let monic = 0.5f64.powi(n as i32 - 1);
    let g_qq = gram.view((0, 0), (n, n)).into_owned();
    let g_qf = gram.view((0, n), (n, 1)).into_owned();
    let chol = g_qq.cholesky().ok_or(CapacityError::GramSingular)?;
    let q = chol.solve(&(-&g_qf * monic));

    let mut coeffs: Vec<f64> = q.iter().copied().collect();
    coeffs.push(monic);
    let poly = ChebPoly::new(Basis::T, coeffs);

    let p = DVector::from_column_slice(poly.coeffs());
    let l2_sq = (&gram * &p).dot(&p);
    Ok((poly, l2_sq.max(0.0).sqrt()))
}

/// Runs the chosen minimization and returns `raw^{1/N}`.
pub fn capacity_estimate(
    k: &IntervalUnion,
    n: usize,
    method: CapacityMethod,
) -> Result<CapacityEstimate, CapacityError> {
    let raw_value = match method {
        CapacityMethod::SupNorm => solve_first_kind(k, &RationalWeight::one(), n)?.t_value,
        CapacityMethod::L2Norm => l2_monic_min(k, n)?.1,
    };
    Ok(CapacityEstimate {
        n,
        method,
        raw_value,
        estimate: raw_value.powf(1.0 / n as f64),
        bounds: None,
        conditioning_warning: n > 30,
    })
}

/// Both estimates at the same degree, with the inequality chain
/// `min_len^{1/2} t_N / (N+1) <= ||P_N||_{L2} <= total_len^{1/2} t_N`
/// evaluated as a cross check.
#[derive(Debug, Clone)]
pub struct CapacityReport {
    pub sup: CapacityEstimate,
    pub l2: CapacityEstimate,
    pub chain_lower: f64,
    pub chain_upper: f64,
}

impl CapacityReport {
    /// Whether the chain holds up to `slack` (absolute).
    pub fn chain_holds(&self, slack: f64) -> bool {
        self.chain_lower <= self.l2.raw_value + slack
            && self.l2.raw_value <= self.chain_upper + slack
    }
}

pub fn capacity_report(k: &IntervalUnion, n: usize) -> Result<CapacityReport, CapacityError> {
    let sup = capacity_estimate(k, n, CapacityMethod::SupNorm)?;
    let mut l2 = capacity_estimate(k, n, CapacityMethod::L2Norm)?;
    let t_n = sup.raw_value;
    let chain_lower = k.min_length().sqrt() * t_n / (n as f64 + 1.0);
    let chain_upper = k.total_length().sqrt() * t_n;
    l2.bounds = Some((chain_lower, chain_upper));
    Ok(CapacityReport { sup, l2, chain_lower, chain_upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn unit() -> IntervalUnion {
        IntervalUnion::segment(-1.0, 1.0).unwrap()
    }

    #[test]
    fn l2_minimal_linear_and_quadratic() {
        let (p, v) = l2_monic_min(&unit(), 1).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 1.0]);
        assert_close(v, (2.0 / 3.0f64).sqrt(), 1e-14);

        // monic Legendre x^2 - 1/3 with norm sqrt(8/45)
        let (p, v) = l2_monic_min(&unit(), 2).unwrap();
        let mono = p.to_monomial();
        assert_close(mono[2], 1.0, 1e-14);
        assert_close(mono[0], -1.0 / 3.0, 1e-13);
        assert_close(v, (8.0 / 45.0f64).sqrt(), 1e-14);
    }

    #[test]
    fn l2_minimum_is_local_minimum() {
        let k = IntervalUnion::new(&[(-1.0, -0.3), (0.1, 1.0)]).unwrap();
        let (p, v) = l2_monic_min(&k, 4).unwrap();
        // perturbing any free coefficient cannot shrink the norm (convex)
        let gram_norm = |q: &ChebPoly| {
            let anti: Vec<f64> = (0..=8)
                .map(|m| {
                    let a = ChebPoly::basis_element(Basis::T, m).antiderivative();
                    k.intervals().iter().map(|&(x, y)| a.eval(y) - a.eval(x)).sum()
                })
                .collect();
            let mut s = 0.0;
            for i in 0..=4 {
                for j in 0..=4 {
                    s += q.coeff(i) * q.coeff(j) * 0.5 * (anti[i + j] + anti[i.abs_diff(j)]);
                }
            }
            s.sqrt()
        };
        for m in 0..4 {
            for delta in [-1e-4, 1e-4] {
                let mut c = p.coeffs().to_vec();
                c[m] += delta;
                let q = ChebPoly::new(Basis::T, c);
                assert!(gram_norm(&q) >= v - 1e-12, "coeff {m} perturbation");
            }
        }
    }

    #[test]
    fn classical_sup_norm_estimate() {
        let e = capacity_estimate(&unit(), 10, CapacityMethod::SupNorm).unwrap();
        assert_close(e.raw_value, 0.5f64.powi(9), 1e-7);
        assert_close(e.estimate, 0.5f64.powf(0.9), 1e-6);
    }

    #[test]
    fn capacity_trend_on_unit_interval() {
        // estimates approach cap([-1,1]) = 1/2 from above, monotonically
        let mut prev = f64::INFINITY;
        for n in [2usize, 4, 8, 16] {
            let e = capacity_estimate(&unit(), n, CapacityMethod::SupNorm).unwrap();
            assert!(e.estimate < prev);
            assert!(e.estimate > 0.5);
            prev = e.estimate;
        }
        assert!(prev - 0.5 < 0.05);
    }

    #[test]
    fn capacity_affine_scaling() {
        // for K = [a, b] the capacity is (b - a) / 4; estimates trend there
        let k = IntervalUnion::segment(-0.25, 0.75).unwrap();
        let e = capacity_estimate(&k, 12, CapacityMethod::L2Norm).unwrap();
        assert!((e.estimate - 0.25).abs() < 0.03, "{}", e.estimate);
    }

    #[test]
    fn two_interval_closed_form() {
        // K_c = [-1,-c] u [c,1]: t_{2m} = 2 ((1-c^2)/4)^m
        let c = 0.6;
        let k = IntervalUnion::new(&[(-1.0, -c), (c, 1.0)]).unwrap();
        for m in [1usize, 2] {
            let e = capacity_estimate(&k, 2 * m, CapacityMethod::SupNorm).unwrap();
            let want = 2.0 * ((1.0 - c * c) / 4.0).powi(m as i32);
            assert_close(e.raw_value, want, 1e-5 * want);
        }
    }

    #[test]
    fn chain_holds_on_union() {
        let k = IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap();
        for n in [2usize, 4, 8] {
            let rep = capacity_report(&k, n).unwrap();
            assert!(rep.chain_holds(1e-9), "chain at n = {n}: {rep:?}");
        }
    }

    #[test]
    fn degree_limits() {
        assert!(matches!(
            l2_monic_min(&unit(), 0),
            Err(CapacityError::InvalidDegree)
        ));
        assert!(matches!(
            l2_monic_min(&unit(), 61),
            Err(CapacityError::DegreeTooLarge(61))
        ));
        let e = capacity_estimate(&unit(), 31, CapacityMethod::L2Norm).unwrap();
        assert!(e.conditioning_warning);
    }
}
