//! Weighted minimax (first-kind) Chebyshev polynomials on interval unions,
//! computed by certifying `c Sigma +- Omega P >= 0` on each interval through
//! Hermitian PSD blocks, plus the restricted variant that forces all roots
//! into the set by searching the 2^(L-1) gap sign patterns.

use num_complex::Complex64;

use crate::cheb::{mult_matrix, Basis, ChebPoly};
use crate::interval::IntervalUnion;
use crate::norms::{sup_norm_on_union, NormError};
use crate::sdp::{
    BlockCoeff, BlockField, ConicProblem, Constraint, Residuals, SdpError, SolveStatus,
    SolverOptions,
};
use crate::weight::{RationalWeight, WeightError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FirstKindError {
    #[error("degree must be at least 1 (the monic degree-0 polynomial is constant)")]
    InvalidDegree,
    #[error("endpoints must satisfy -1 <= a < b <= 1; normalize the set first")]
    DomainError,
    #[error("weight invalid on K: {0}")]
    WeightInvalid(#[from] WeightError),
    #[error("SDP solver failed with status {0:?}")]
    SolverFailure(SolveStatus),
    #[error("every gap sign pattern is infeasible")]
    AllPatternsInfeasible,
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// `alpha = exp(i (arccos a + arccos b) / 2) / 2` and
/// `beta = cos((arccos a - arccos b) / 2)` for a subinterval of `[-1, 1]`;
/// `|alpha| = 1/2` and `beta` lies in `[0, 1)`.
pub fn alpha_beta(a: f64, b: f64) -> Result<(Complex64, f64), FirstKindError> {
    if !((-1.0..1.0).contains(&a) && a < b && b <= 1.0) {
        return Err(FirstKindError::DomainError);
    }
    let (ta, tb) = (a.acos(), b.acos());
    let alpha = 0.5 * Complex64::new(0.0, 0.5 * (ta + tb)).exp();
    let beta = (0.5 * (ta - tb)).cos();
    Ok((alpha, beta))
}

/// Affine expression `sum coeff * var + constant` over the SDP free
/// variables; the per-degree coefficient targets of a nonnegativity block.
#[derive(Debug, Clone, Default)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn var(idx: usize, coeff: f64) -> Self {
        Self { terms: vec![(idx, coeff)], constant: 0.0 }
    }
}

/// Registers the Hermitian certificate pair (Q, R) and the degree-wise
/// equalities making `sum_m expr_m T_m >= 0` on `[a, b]`: each complex
/// equality contributes its real part tied to the target (`expr_0` at
/// `m = 0`, `expr_m / 2` for `m >= 1`) and a vanishing imaginary part.
pub fn nonneg_block(
    prob: &mut ConicProblem,
    exprs: &[LinExpr],
    a: f64,
    b: f64,
) -> Result<(), FirstKindError> {
    let m_deg = exprs.len() - 1;
    let (alpha, beta) = alpha_beta(a, b)?;
    let q_blk = prob.add_block(m_deg + 1, BlockField::ComplexHermitian);
    let r_blk = if m_deg >= 1 {
        Some(prob.add_block(m_deg, BlockField::ComplexHermitian))
    } else {
        None
    };

    // entries of Q and R entering the degree-m equation, scaled by `mult`
    let band = |mult: Complex64, m: usize| -> Vec<(usize, BlockCoeff)> {
        let mut q_entries = Vec::new();
        for i in m..=m_deg {
            q_entries.push((i, i - m, mult));
        }
        let mut out = vec![(q_blk, BlockCoeff::complex(q_entries))];
        if let Some(r_blk) = r_blk {
            let mut r_entries = Vec::new();
            let r_dim = m_deg;
            // alpha * sum_{i-j = m-1}, -beta * sum_{i-j = m},
            // conj(alpha) * sum_{i-j = m+1}
            let mut push_diag = |offset: isize, coeff: Complex64| {
                for j in 0..r_dim {
                    let i = j as isize + offset;
                    if (0..r_dim as isize).contains(&i) {
                        r_entries.push((i as usize, j, mult * coeff));
                    }
                }
            };
            push_diag(m as isize - 1, alpha);
            push_diag(m as isize, Complex64::new(-beta, 0.0));
            push_diag(m as isize + 1, alpha.conj());
            out.push((r_blk, BlockCoeff::complex(r_entries)));
        }
        out
    };

    for m in 0..=m_deg {
        let scale = if m == 0 { 1.0 } else { 0.5 };
        // real part equals the (scaled) target coefficient
        let free: Vec<(usize, f64)> = exprs[m]
            .terms
            .iter()
            .map(|&(idx, c)| (idx, -scale * c))
            .collect();
        prob.add_constraint(Constraint {
            free,
            blocks: band(Complex64::new(1.0, 0.0), m),
            rhs: scale * exprs[m].constant,
        });
        // imaginary part vanishes; at m = 0 it is identically zero on
        // Hermitian blocks, so no equation is emitted
        if m >= 1 {
            prob.add_constraint(Constraint {
                free: Vec::new(),
                blocks: band(Complex64::new(0.0, -1.0), m),
                rhs: 0.0,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct FirstKindResult {
    /// Monic minimax polynomial (T basis, leading coefficient `2^{1-N}`).
    pub poly: ChebPoly,
    /// The optimum `c = max_K |Omega P / Sigma|`.
    pub t_value: f64,
    /// Alternation points `(x, sign)` where `|P/w|` attains the optimum.
    pub equioscillation: Vec<(f64, i8)>,
    /// `poly / t_value`, sup-norm one on `K`.
    pub normalized: ChebPoly,
    pub residuals: Residuals,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct RestrictedResult {
    pub result: FirstKindResult,
    /// Chosen sign of `P` on each gap, length `L - 1`.
    pub sign_pattern: Vec<i8>,
    /// Whether the relaxed optimizer satisfies the original root
    /// constraint (no root strictly inside an open gap).
    pub verified: bool,
}

fn check_inputs(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
) -> Result<(), FirstKindError> {
    if n == 0 {
        return Err(FirstKindError::InvalidDegree);
    }
    if !k.within_unit() {
        return Err(FirstKindError::DomainError);
    }
    w.validate_on(k)?;
    Ok(())
}

/// Indices of the free variables in the assembled SDP.
struct VarLayout {
    c: usize,
    p0: usize,
    n: usize,
}

fn assemble_base(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
) -> Result<(ConicProblem, VarLayout), FirstKindError> {
    let mut prob = ConicProblem::new();
    let c = prob.add_free_vars(1);
    let p0 = prob.add_free_vars(n + 1);
    let layout = VarLayout { c, p0, n };

    // monic normalization p_N = 2^{1-N}
    prob.add_constraint(Constraint {
        free: vec![(p0 + n, 1.0)],
        blocks: Vec::new(),
        rhs: 0.5f64.powi(n as i32 - 1),
    });

    let sigma = w.sigma();
    let omega = w.omega();
    let m_deg = sigma
        .degree()
        .unwrap_or(0)
        .max(omega.degree().unwrap_or(0) + n);
    let wm = mult_matrix(omega, n);

    for &(a, b) in k.intervals() {
        for sign in [1.0, -1.0] {
            // coefficients of c*Sigma +- Omega*P
            let exprs: Vec<LinExpr> = (0..=m_deg)
                .map(|m| {
                    let mut e = LinExpr::var(c, sigma.coeff(m));
                    if m < wm.nrows() {
                        for j in 0..=n {
                            let v = wm[(m, j)];
                            if v != 0.0 {
                                e.terms.push((p0 + j, sign * v));
                            }
                        }
                    }
                    e
                })
                .collect();
            nonneg_block(&mut prob, &exprs, a, b)?;
        }
    }
    prob.set_objective_free(c, 1.0);
    Ok((prob, layout))
}

fn result_from_solution(
    sol: &crate::sdp::ConicSolution,
    layout: &VarLayout,
    k: &IntervalUnion,
    w: &RationalWeight,
) -> FirstKindResult {
    let n = layout.n;
    let mut coeffs: Vec<f64> = (0..=n).map(|j| sol.free_values[layout.p0 + j]).collect();
    coeffs[n] = 0.5f64.powi(n as i32 - 1); // the constraint pins it; store exactly
    let poly = ChebPoly::new(Basis::T, coeffs);
    let t_value = sol.free_values[layout.c];
    let equioscillation = equioscillation_points(&poly, w, k, t_value);
    let normalized = poly.scaled(1.0 / t_value);
    FirstKindResult {
        poly,
        t_value,
        equioscillation,
        normalized,
        residuals: sol.residuals,
        iterations: sol.iterations,
    }
}

/// Minimizes `max_K |P / w|` over monic degree-`N` polynomials.
pub fn solve_first_kind(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
) -> Result<FirstKindResult, FirstKindError> {
    solve_first_kind_with(k, w, n, &SolverOptions::default())
}

pub fn solve_first_kind_with(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
    opts: &SolverOptions,
) -> Result<FirstKindResult, FirstKindError> {
    check_inputs(k, w, n)?;
    let (prob, layout) = assemble_base(k, w, n)?;
    let sol = prob.solve(opts)?;
    if sol.status != SolveStatus::Optimal {
        return Err(FirstKindError::SolverFailure(sol.status));
    }
    Ok(result_from_solution(&sol, &layout, k, w))
}

/// The restricted variant: additionally requires `P` not to change sign on
/// any closed gap (relaxation of "no root in the open gap"), solved by
/// taking the best of the `2^(L-1)` sign-pattern programs enumerated in
/// Gray-code order. The returned flag reports whether the minimizer
/// actually satisfies the original root-location constraint.
pub fn solve_first_kind_restricted(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
) -> Result<RestrictedResult, FirstKindError> {
    solve_first_kind_restricted_with(k, w, n, &SolverOptions::default())
}

pub fn solve_first_kind_restricted_with(
    k: &IntervalUnion,
    w: &RationalWeight,
    n: usize,
    opts: &SolverOptions,
) -> Result<RestrictedResult, FirstKindError> {
    check_inputs(k, w, n)?;
    let gaps = k.gaps();
    if gaps.is_empty() {
        let result = solve_first_kind_with(k, w, n, opts)?;
        return Ok(RestrictedResult { result, sign_pattern: Vec::new(), verified: true });
    }

    let mut best: Option<(f64, Vec<i8>, crate::sdp::ConicSolution, VarLayout)> = None;
    for idx in 0u32..(1u32 << gaps.len()) {
        let gray = idx ^ (idx >> 1);
        let pattern: Vec<i8> = (0..gaps.len())
            .map(|l| if gray >> l & 1 == 0 { 1 } else { -1 })
            .collect();
        let (mut prob, layout) = assemble_base(k, w, n)?;
        for (l, &(ga, gb)) in gaps.iter().enumerate() {
            // epsilon_l * P >= 0 on the closed gap, with certificate degree N
            let exprs: Vec<LinExpr> = (0..=n)
                .map(|m| LinExpr::var(layout.p0 + m, f64::from(pattern[l])))
                .collect();
            nonneg_block(&mut prob, &exprs, ga, gb)?;
        }
        let sol = prob.solve(opts)?;
        if sol.status != SolveStatus::Optimal {
            continue;
        }
        let t = sol.free_values[layout.c];
        // ties within 1e-9 go to the pattern found first
        if best.as_ref().is_none_or(|(bt, ..)| t < bt - 1e-9) {
            best = Some((t, pattern, sol, layout));
        }
    }
    let (t_best, sign_pattern, sol, layout) =
        best.ok_or(FirstKindError::AllPatternsInfeasible)?;
    let mut result = result_from_solution(&sol, &layout, k, w);
    let mut verified = roots_avoid_gaps(&result.poly, k);
    if !verified {
        // a constrained optimum often places a root exactly on a gap
        // endpoint; numerically it lands within solver accuracy on either
        // side. Pin every near-endpoint root with the linear equality
        // P(endpoint) = 0 and re-solve the winning pattern: if the optimum
        // is unchanged, this selects the optimal-face point that satisfies
        // the root constraint exactly.
        let pins = near_endpoint_pins(&result.poly, &gaps, 1e-6);
        if !pins.is_empty() {
            let (mut prob, layout) = assemble_base(k, w, n)?;
            for (l, &(ga, gb)) in gaps.iter().enumerate() {
                let exprs: Vec<LinExpr> = (0..=n)
                    .map(|m| LinExpr::var(layout.p0 + m, f64::from(sign_pattern[l])))
                    .collect();
                nonneg_block(&mut prob, &exprs, ga, gb)?;
            }
            for &pin in &pins {
                let free: Vec<(usize, f64)> = (0..=n)
                    .map(|m| {
                        (layout.p0 + m, ChebPoly::basis_element(Basis::T, m).eval(pin))
                    })
                    .collect();
                prob.add_constraint(Constraint { free, blocks: Vec::new(), rhs: 0.0 });
            }
            let pinned = prob.solve(opts)?;
            if pinned.status == SolveStatus::Optimal
                && pinned.free_values[layout.c] <= t_best * (1.0 + 1e-6)
            {
                result = result_from_solution(&pinned, &layout, k, w);
                verified = roots_avoid_gaps(&result.poly, k);
            }
        }
    }
    Ok(RestrictedResult { result, sign_pattern, verified })
}

/// Gap endpoints that have a real root of `poly` within `tol`.
fn near_endpoint_pins(poly: &ChebPoly, gaps: &[(f64, f64)], tol: f64) -> Vec<f64> {
    let roots = match poly.roots() {
        Ok(r) => r,
        Err(_) => return Vec::new(),
    };
    let mut pins = Vec::new();
    for z in roots {
        if z.im != 0.0 {
            continue;
        }
        for &(ga, gb) in gaps {
            for endpoint in [ga, gb] {
                if (z.re - endpoint).abs() <= tol && !pins.contains(&endpoint) {
                    pins.push(endpoint);
                }
            }
        }
    }
    pins.sort_by(f64::total_cmp);
    pins
}

/// True when no real root lies strictly inside an open gap; roots within
/// 1e-9 of a gap endpoint count as outside.
pub fn roots_avoid_gaps(poly: &ChebPoly, k: &IntervalUnion) -> bool {
    let roots = match poly.roots() {
        Ok(r) => r,
        Err(_) => return true,
    };
    for z in roots {
        if z.im != 0.0 {
            continue;
        }
        for &(ga, gb) in &k.gaps() {
            if z.re > ga + 1e-9 && z.re < gb - 1e-9 {
                return false;
            }
        }
    }
    true
}

/// Alternation points of `P / w` at level `t`: stationary points and
/// endpoints where `|Omega P / Sigma| >= t (1 - 1e-6)`, compressed to a
/// strictly sign-alternating list (same-sign neighbors keep the larger
/// magnitude; points closer than 1e-7 merge).
pub fn equioscillation_points(
    poly: &ChebPoly,
    w: &RationalWeight,
    k: &IntervalUnion,
    t: f64,
) -> Vec<(f64, i8)> {
    let num = w.omega().multiply(poly);
    let stat = num
        .derivative()
        .multiply(w.sigma())
        .add_scaled(&num.multiply(&w.sigma().derivative()), -1.0);
    let phi = |x: f64| num.eval(x) / w.sigma().eval(x);
    let threshold = t * (1.0 - 1e-6);

    let mut candidates = Vec::new();
    for &(a, b) in k.intervals() {
        candidates.push(a);
        if stat.degree().unwrap_or(0) >= 1 {
            candidates.extend(stat.real_roots_in(a, b, 1e-12));
        }
        candidates.push(b);
    }
    candidates.sort_by(f64::total_cmp);

    let mut points: Vec<(f64, i8)> = Vec::new();
    for x in candidates {
        let v = phi(x);
        if v.abs() < threshold {
            continue;
        }
        let s: i8 = if v > 0.0 { 1 } else { -1 };
        match points.last().copied() {
            Some((xl, sl)) if (x - xl).abs() < 1e-7 || sl == s => {
                if v.abs() > phi(xl).abs() {
                    *points.last_mut().unwrap() = (x, s);
                }
            }
            _ => points.push((x, s)),
        }
    }
    points
}

/// Convenience: the sup-norm cross check `max_K |P/w|` for result sanity.
pub fn sup_norm_check(
    poly: &ChebPoly,
    w: &RationalWeight,
    k: &IntervalUnion,
) -> Result<f64, FirstKindError> {
    Ok(sup_norm_on_union(poly, w, k)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::example_weight;

    fn unit() -> IntervalUnion {
        IntervalUnion::segment(-1.0, 1.0).unwrap()
    }

    fn k1() -> IntervalUnion {
        IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap()
    }

    fn k2() -> IntervalUnion {
        IntervalUnion::new(&[(-1.0, -0.5), (0.1, 0.2), (2.0 / 3.0, 1.0)]).unwrap()
    }

    #[test]
    fn alpha_beta_examples() {
        let (a, b) = alpha_beta(-1.0, 1.0).unwrap();
        assert!((a - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(b.abs() < 1e-15);

        let (a, b) = alpha_beta(0.0, 1.0).unwrap();
        let expect = 0.5 * Complex64::new(0.0, std::f64::consts::FRAC_PI_4).exp();
        assert!((a - expect).norm() < 1e-15);
        assert!((b - 0.5f64.sqrt()).abs() < 1e-15);

        // beta -> 1 as the interval shrinks
        let (_, b) = alpha_beta(0.299, 0.301).unwrap();
        assert!(b > 0.999_999);

        for (a, b) in [(0.5, 0.5), (-1.5, 0.0), (0.0, 1.5), (0.7, 0.2)] {
            assert!(alpha_beta(a, b).is_err(), "({a}, {b})");
        }
        // |alpha| = 1/2 always
        for (a, b) in [(-1.0, -0.3), (-0.9, 0.9), (0.2, 0.25)] {
            let (al, be) = alpha_beta(a, b).unwrap();
            assert!((al.norm() - 0.5).abs() < 1e-14);
            assert!((0.0..1.0).contains(&be));
        }
    }

    #[test]
    fn nonneg_block_constant_signs() {
        // constant 1 on [-1, 1]: feasible
        let mut prob = ConicProblem::new();
        nonneg_block(&mut prob, &[LinExpr { terms: vec![], constant: 1.0 }], -1.0, 1.0)
            .unwrap();
        let sol = prob.solve(&SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);

        // constant -1 on [0.2, 0.9]: infeasible
        let mut prob = ConicProblem::new();
        nonneg_block(&mut prob, &[LinExpr { terms: vec![], constant: -1.0 }], 0.2, 0.9)
            .unwrap();
        let sol = prob.solve(&SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::PrimalInfeasible);
    }

    #[test]
    fn nonneg_block_linear_signs() {
        // x >= 0 on [0, 1]: feasible; on [-1, 0]: infeasible
        for (a, b, feasible) in [(0.0, 1.0, true), (-1.0, 0.0, false)] {
            let mut prob = ConicProblem::new();
            let exprs = [
                LinExpr { terms: vec![], constant: 0.0 },
                LinExpr { terms: vec![], constant: 1.0 },
            ];
            nonneg_block(&mut prob, &exprs, a, b).unwrap();
            let sol = prob.solve(&SolverOptions::default()).unwrap();
            assert_eq!(
                sol.status == SolveStatus::Optimal,
                feasible,
                "x on [{a}, {b}]"
            );
        }
    }

    #[test]
    fn classical_chebyshev_degree_5() {
        let r = solve_first_kind(&unit(), &RationalWeight::one(), 5).unwrap();
        assert!((r.t_value - 0.0625).abs() < 1e-7 * 0.0625, "{}", r.t_value);
        let want = ChebPoly::classical_first_kind_monic(5);
        for m in 0..=5 {
            assert!(
                (r.poly.coeff(m) - want.coeff(m)).abs() < 1e-6,
                "coeff {m}: {} vs {}",
                r.poly.coeff(m),
                want.coeff(m)
            );
        }
        assert!(r.equioscillation.len() >= 6);
    }

    #[test]
    fn two_intervals_even_degree() {
        // K = [-1,-c] u [c,1], N = 2: t = (1 - c^2)/2, poly = x^2 - (1+c^2)/2
        let c = 0.5;
        let k = IntervalUnion::new(&[(-1.0, -c), (c, 1.0)]).unwrap();
        let r = solve_first_kind(&k, &RationalWeight::one(), 2).unwrap();
        assert!((r.t_value - 0.375).abs() < 1e-6, "{}", r.t_value);
        let mono = r.poly.to_monomial();
        assert!((mono[2] - 1.0).abs() < 1e-9);
        assert!((mono[0] + (1.0 + c * c) / 2.0).abs() < 1e-6);
        assert!(mono[1].abs() < 1e-6);
    }

    #[test]
    fn fig1_equioscillation_counts() {
        for k in [k1(), k2()] {
            let w = example_weight(&k);
            let r = solve_first_kind(&k, &w, 5).unwrap();
            assert_eq!(r.equioscillation.len(), 6, "weighted on {:?}", k);
            let r = solve_first_kind(&k, &RationalWeight::one(), 5).unwrap();
            assert_eq!(r.equioscillation.len(), 6, "unweighted on {:?}", k);
        }
    }

    #[test]
    fn unrestricted_k2_has_gap_root() {
        let r = solve_first_kind(&k2(), &RationalWeight::one(), 5).unwrap();
        assert!(!roots_avoid_gaps(&r.poly, &k2()));
    }

    #[test]
    fn restricted_on_single_interval_reduces() {
        let r = solve_first_kind_restricted(&unit(), &RationalWeight::one(), 4).unwrap();
        assert!(r.sign_pattern.is_empty());
        assert!(r.verified);
        assert!((r.result.t_value - 0.125).abs() < 1e-6);
    }

    #[test]
    fn restricted_k2_verified() {
        let r = solve_first_kind_restricted(&k2(), &RationalWeight::one(), 5).unwrap();
        assert!(r.verified);
        let roots = r.result.poly.roots().unwrap();
        for z in &roots {
            assert!(z.im == 0.0, "complex root {z}");
            assert!(k2().contains(z.re, 1e-7), "root {} outside K", z.re);
        }
        // restriction can only increase the minimax value
        let free = solve_first_kind(&k2(), &RationalWeight::one(), 5).unwrap();
        assert!(r.result.t_value >= free.t_value - 1e-9);
    }

    #[test]
    fn sup_norm_matches_t_value() {
        let k = k1();
        let w = example_weight(&k);
        let r = solve_first_kind(&k, &w, 5).unwrap();
        let sup = sup_norm_check(&r.poly, &w, &k).unwrap();
        assert!(
            (sup - r.t_value).abs() < 1e-6 * r.t_value,
            "{sup} vs {}",
            r.t_value
        );
    }

    #[test]
    fn envelope_bound_on_dense_samples() {
        let k = k1();
        let w = example_weight(&k);
        let r = solve_first_kind(&k, &w, 5).unwrap();
        assert!(r.t_value > 0.0);
        let bound = r.t_value * (1.0 + 1e-7);
        for &(a, b) in k.intervals() {
            for i in 0..1000 {
                let x = a + (b - a) * i as f64 / 999.0;
                let v = (r.poly.eval(x) * w.omega().eval(x) / w.sigma().eval(x)).abs();
                assert!(v <= bound, "|P/w|({x}) = {v} exceeds {bound}");
            }
        }
    }

    #[test]
    fn monotone_in_set_inclusion() {
        let small = IntervalUnion::new(&[(-0.8, -0.2), (0.3, 0.7)]).unwrap();
        let big = unit();
        let w = RationalWeight::one();
        let ts = solve_first_kind(&small, &w, 3).unwrap().t_value;
        let tb = solve_first_kind(&big, &w, 3).unwrap().t_value;
        assert!(ts <= tb + 1e-8, "{ts} vs {tb}");
    }

    #[test]
    fn affine_covariance() {
        // raw K inside [-1,1] vs normalized-and-mapped-back
        let raw = IntervalUnion::new(&[(-0.5, -0.1), (0.2, 0.6)]).unwrap();
        let n = 4;
        let direct = solve_first_kind(&raw, &RationalWeight::one(), n).unwrap();
        let (knorm, map) = raw.normalize();
        let normed = solve_first_kind(&knorm, &RationalWeight::one(), n).unwrap();
        // monic pullback: P_raw(x) = s^N P_norm(map(x)) with s = 1/map.scale
        let s = 1.0 / map.scale;
        let factor = s.powi(n as i32);
        for &x in &[-0.45, -0.3, -0.15, 0.25, 0.4, 0.55] {
            let a = direct.poly.eval(x);
            let b = factor * normed.poly.eval(map.apply(x));
            assert!((a - b).abs() < 1e-8, "{a} vs {b} at {x}");
        }
        assert!((direct.t_value - factor * normed.t_value).abs() < 1e-8);
    }

    #[test]
    fn degenerate_degree_rejected() {
        assert!(matches!(
            solve_first_kind(&unit(), &RationalWeight::one(), 0),
            Err(FirstKindError::InvalidDegree)
        ));
    }
}
