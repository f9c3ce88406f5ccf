//! Ersatz second-kind Chebyshev polynomials: minimal weighted L1 norm on an
//! interval union, approached from below through truncated trigonometric
//! moment problems with Toeplitz PSD constraints, plus the a-posteriori
//! sandwich bounds and the relative error delta.
//!
//! The moment programs are assembled in Lagrangian-dual form (PSD
//! multiplier blocks with diagonal-sum constraints); the moment vectors
//! y^{l,+-} and the polynomial coefficients are recovered exactly from the
//! equality multipliers. Both sides are strictly feasible, so there is no
//! duality gap.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cheb::{second_kind_matrix, Basis, ChebPoly};
use crate::interval::IntervalUnion;
use crate::norms::{l1_norm_weighted, signed_integral, NormError};
use crate::quad::integrate;
use crate::sdp::{
    BlockCoeff, BlockField, ConicProblem, Constraint, Residuals, SdpError, SolveStatus,
    SolverOptions,
};
use crate::weight::WeightFn;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SecondKindError {
    #[error("degree must be at least 1")]
    InvalidDegree,
    #[error("moment degree d = {d} must be at least the polynomial degree {n}")]
    MomentDegreeTooSmall { d: usize, n: usize },
    #[error("the set must lie within [-1, 1]; normalize it first")]
    DomainError,
    #[error("quadrature for a J-matrix entry did not converge (k = {k}, n = {n})")]
    QuadratureNonConvergence { k: usize, n: usize },
    #[error("SDP solver failed with status {0:?}")]
    SolverFailure(SolveStatus),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// `J[k][n] = int_0^pi cos(k t) sin((n+1) t) / w_l(cos t) dt` for the
/// weight transplanted from `[a, b]` onto `[-1, 1]`; shape `(d+1) x (n+1)`.
///
/// For the unit weight the closed form is used: zero when `k` and `n` have
/// different parities, `2(n+1) / ((n+1)^2 - k^2)` otherwise. General
/// weights are integrated by Gauss-Legendre panels sized to the oscillation
/// (at least `4(k+n+2)` nodes), with the panel count doubled until two
/// consecutive levels agree to 1e-11 absolute.
pub fn build_j<W: WeightFn + ?Sized>(
    a: f64,
    b: f64,
    d: usize,
    n: usize,
    w: &W,
) -> Result<DMatrix<f64>, SecondKindError> {
    let mut j = DMatrix::<f64>::zeros(d + 1, n + 1);
    if w.is_unit() {
        for k in 0..=d {
            for nn in 0..=n {
                if (k + nn) % 2 == 0 {
                    let np1 = (nn + 1) as f64;
                    j[(k, nn)] = 2.0 * np1 / (np1 * np1 - (k * k) as f64);
                }
            }
        }
        return Ok(j);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for k in 0..=d {
        for nn in 0..=n {
            let f = |theta: f64| {
                let x = theta.cos();
                (k as f64 * theta).cos() * ((nn + 1) as f64 * theta).sin()
                    / w.weight(half * x + mid)
            };
            let min_nodes = 4 * (k + nn + 2);
            let mut panels = min_nodes.div_ceil(16).max(2);
            let mut prev = panel_integrate(&f, panels);
            let mut converged = false;
            for _ in 0..8 {
                panels *= 2;
                let cur = panel_integrate(&f, panels);
                if (cur - prev).abs() <= 1e-11 {
                    prev = cur;
                    converged = true;
                    break;
                }
                prev = cur;
            }
            if !converged {
                return Err(SecondKindError::QuadratureNonConvergence { k, n: nn });
            }
            j[(k, nn)] = prev;
        }
    }
    Ok(j)
}

fn panel_integrate<F: Fn(f64) -> f64>(f: &F, panels: usize) -> f64 {
    let h = std::f64::consts::PI / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        acc += integrate(f, p as f64 * h, (p + 1) as f64 * h, 16);
    }
    acc
}

/// The `(d+1) x (d+1)` Toeplitz matrix of `y`.
pub fn toeplitz_matrix(y: &[f64]) -> DMatrix<f64> {
    let d = y.len();
    DMatrix::from_fn(d, d, |i, j| y[i.abs_diff(j)])
}

/// Per-interval data shared by the moment programs: the interval, its
/// half-length weight, and `J^{l,d} W^l`.
struct IntervalData {
    half_length: f64,
    jw: DMatrix<f64>,
}

fn interval_data<W: WeightFn + ?Sized>(
    k: &IntervalUnion,
    w: &W,
    n: usize,
    d: usize,
    js: Option<&[DMatrix<f64>]>,
) -> Result<Vec<IntervalData>, SecondKindError> {
    let mut out = Vec::with_capacity(k.count());
    for (l, &(a, b)) in k.intervals().iter().enumerate() {
        let j = match js {
            Some(js) => js[l].clone(),
            None => build_j(a, b, d, n, w)?,
        };
        let wl = second_kind_matrix(a, b, n);
        out.push(IntervalData {
            half_length: 0.5 * (b - a),
            jw: j * wl,
        })
    }
    Ok(out)
}

/// Adds the diagonal-sum functional `<Theta, Toep(e_k)>` on `block`.
fn diag_sum_coeff(dim: usize, k: usize) -> BlockCoeff {
    let mut entries = Vec::with_capacity(dim - k);
    if k == 0 {
        for i in 0..dim {
            entries.push((i, i, 1.0));
        }
    } else {
        for j in 0..dim - k {
            entries.push((j + k, j, 2.0));
        }
    }
    BlockCoeff::real(entries)
}

struct MomentProgram {
    prob: ConicProblem,
    /// Constraint index of `(l, +-, k)`, laid out `l`-major then sign.
    row_of: Vec<[usize; 2]>,
    d: usize,
    intervals: usize,
}

impl MomentProgram {
    /// The dualized truncation-`d` moment program over `L` intervals;
    /// the coupling right-hand side enters through the objective on the
    /// free multiplier variables `v`.
    fn new(data: &[IntervalData], d: usize, g: impl Fn(usize, usize) -> f64) -> Self {
        let ll = data.len();
        let mut prob = ConicProblem::new();
        let v0 = prob.add_free_vars(ll * (d + 1));
        let mut row_of = vec![[0usize; 2]; ll * (d + 1)];
        for (l, item) in data.iter().enumerate() {
            let theta_plus = prob.add_block(d + 1, BlockField::RealSymmetric);
            let theta_minus = prob.add_block(d + 1, BlockField::RealSymmetric);
            for k in 0..=d {
                let v = v0 + l * (d + 1) + k;
                let rhs = if k == 0 { item.half_length } else { 0.0 };
                let rp = prob.add_constraint(Constraint {
                    free: vec![(v, 1.0)],
                    blocks: vec![(theta_plus, diag_sum_coeff(d + 1, k))],
                    rhs,
                });
                let rm = prob.add_constraint(Constraint {
                    free: vec![(v, -1.0)],
                    blocks: vec![(theta_minus, diag_sum_coeff(d + 1, k))],
                    rhs,
                });
                row_of[l * (d + 1) + k] = [rp, rm];
                let gv = g(l, k);
                if gv != 0.0 {
                    prob.set_objective_free(v, -gv);
                }
            }
        }
        MomentProgram { prob, row_of, d, intervals: ll }
    }

    fn moment_vectors(&self, multipliers: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
        (0..self.intervals)
            .map(|l| {
                let mut plus = Vec::with_capacity(self.d + 1);
                let mut minus = Vec::with_capacity(self.d + 1);
                for k in 0..=self.d {
                    let [rp, rm] = self.row_of[l * (self.d + 1) + k];
                    plus.push(-multipliers[rp]);
                    minus.push(-multipliers[rm]);
                }
                (plus, minus)
            })
            .collect()
    }
}

/// The truncated-moment lower bound of the weighted L1 norm of a fixed
/// polynomial (a norm in its coefficients for every `d >= deg P`), together
/// with the optimal moment vectors `y^{l,+-}`.
pub fn ersatz_norm<W: WeightFn + ?Sized>(
    p: &ChebPoly,
    k: &IntervalUnion,
    w: &W,
    d: usize,
) -> Result<(f64, Vec<(Vec<f64>, Vec<f64>)>), SecondKindError> {
    ersatz_norm_with(p, k, w, d, &SolverOptions::default(), None)
}

pub fn ersatz_norm_with<W: WeightFn + ?Sized>(
    p: &ChebPoly,
    k: &IntervalUnion,
    w: &W,
    d: usize,
    opts: &SolverOptions,
    js: Option<&[DMatrix<f64>]>,
) -> Result<(f64, Vec<(Vec<f64>, Vec<f64>)>), SecondKindError> {
    if p.is_zero() {
        let zero = vec![(vec![0.0; d + 1], vec![0.0; d + 1]); k.count()];
        return Ok((0.0, zero));
    }
    let n = p.degree().unwrap_or(0);
    if d < n {
        return Err(SecondKindError::MomentDegreeTooSmall { d, n });
    }
    if !k.within_unit() {
        return Err(SecondKindError::DomainError);
    }
    let pt = match p.basis() {
        Basis::T => p.clone(),
        Basis::U => p.to_t(),
    };
    let data = interval_data(k, w, n, d, js)?;
    let coeffs = nalgebra::DVector::from_column_slice(pt.coeffs());
    let g: Vec<nalgebra::DVector<f64>> = data.iter().map(|it| &it.jw * &coeffs).collect();
    let program = MomentProgram::new(&data, d, |l, k| g[l][k]);
    let sol = program.prob.solve(opts)?;
    if sol.status != SolveStatus::Optimal {
        return Err(SecondKindError::SolverFailure(sol.status));
    }
    Ok((-sol.objective_value, program.moment_vectors(&sol.multipliers)))
}

/// Location report for the roots of a computed polynomial.
#[derive(Debug, Clone)]
pub struct RootsReport {
    pub roots: Vec<Complex64>,
    pub real_count: usize,
    /// Minimal pairwise distance between roots (infinite when fewer than
    /// two); small values flag a multiple root.
    pub min_separation: f64,
    /// Membership of each root in `K` (tolerance 1e-7 past endpoints);
    /// complex roots are never inside.
    pub inside: Vec<bool>,
}

impl RootsReport {
    pub fn all_inside(&self) -> bool {
        self.inside.iter().all(|&b| b)
    }
}

/// Reports how the roots of `poly` sit relative to `K`.
pub fn check_roots(poly: &ChebPoly, k: &IntervalUnion) -> RootsReport {
    let roots = poly.roots().unwrap_or_default();
    let real_count = roots.iter().filter(|z| z.im == 0.0).count();
    let mut min_separation = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            min_separation = min_separation.min((roots[i] - roots[j]).norm());
        }
    }
    let inside = roots
        .iter()
        .map(|z| z.im == 0.0 && k.contains(z.re, 1e-7))
        .collect();
    RootsReport { roots, real_count, min_separation, inside }
}

#[derive(Debug, Clone)]
pub struct SecondKindResult {
    /// Monic polynomial minimizing the ersatz norm (T basis).
    pub poly: ChebPoly,
    /// The ersatz optimum: a lower bound for the minimal weighted L1 norm.
    pub ersatz_value: f64,
    /// Weighted L1 norm of `poly`: an upper bound for the same minimum.
    pub l1_value: f64,
    /// `1 - ersatz_value / l1_value`, the certified relative error.
    pub delta: f64,
    pub d: usize,
    /// Optimal moment vectors `(y^{l,+}, y^{l,-})` per interval.
    pub moment_vectors: Vec<(Vec<f64>, Vec<f64>)>,
    pub roots_report: RootsReport,
    /// Uniqueness of the true minimizer is not certified; the solver
    /// returns one optimizer of the truncated program.
    pub residuals: Residuals,
    pub iterations: usize,
}

/// Minimizes the ersatz norm of truncation `d` over monic degree-`N`
/// polynomials and assesses it against the true weighted L1 norm.
pub fn solve_second_kind<W: WeightFn + ?Sized>(
    k: &IntervalUnion,
    w: &W,
    n: usize,
    d: usize,
) -> Result<SecondKindResult, SecondKindError> {
    solve_second_kind_with(k, w, n, d, &SolverOptions::default(), None)
}

pub fn solve_second_kind_with<W: WeightFn + ?Sized>(
    k: &IntervalUnion,
    w: &W,
    n: usize,
    d: usize,
    opts: &SolverOptions,
    js: Option<&[DMatrix<f64>]>,
) -> Result<SecondKindResult, SecondKindError> {
    if n == 0 {
        return Err(SecondKindError::InvalidDegree);
    }
    if d < n {
        return Err(SecondKindError::MomentDegreeTooSmall { d, n });
    }
    if !k.within_unit() {
        return Err(SecondKindError::DomainError);
    }
    let data = interval_data(k, w, n, d, js)?;
    let mut program = MomentProgram::new(&data, d, |_, _| 0.0);
    let t_var = program.prob.add_free_vars(1);
    let monic = 0.5f64.powi(n as i32 - 1);
    program.prob.set_objective_free(t_var, -monic);
    // couplings: for each polynomial coefficient index, the multipliers of
    // these rows are the Chebyshev coefficients of the minimizer
    let mut coeff_rows = Vec::with_capacity(n + 1);
    for nn in 0..=n {
        let mut free: Vec<(usize, f64)> = Vec::new();
        for (l, item) in data.iter().enumerate() {
            for kk in 0..=d {
                let v = item.jw[(kk, nn)];
                if v != 0.0 {
                    free.push((l * (d + 1) + kk, v));
                }
            }
        }
        if nn == n {
            free.push((t_var, -1.0));
        }
        let row = program.prob.add_constraint(Constraint {
            free,
            blocks: Vec::new(),
            rhs: 0.0,
        });
        coeff_rows.push(row);
    }

    let sol = program.prob.solve(opts)?;
    if sol.status != SolveStatus::Optimal {
        return Err(SecondKindError::SolverFailure(sol.status));
    }
    let mut coeffs: Vec<f64> = coeff_rows
        .iter()
        .map(|&r| sol.multipliers[r])
        .collect();
    coeffs[n] = monic; // pinned by the program; store exactly
    let poly = ChebPoly::new(Basis::T, coeffs);
    let ersatz_value = -sol.objective_value;
    let l1_value = l1_norm_weighted(&poly, w, k)?;
    let delta = 1.0 - ersatz_value / l1_value;
    let moment_vectors = program.moment_vectors(&sol.multipliers);
    let roots_report = check_roots(&poly, k);
    Ok(SecondKindResult {
        poly,
        ersatz_value,
        l1_value,
        delta,
        d,
        moment_vectors,
        roots_report,
        residuals: sol.residuals,
        iterations: sol.iterations,
    })
}

#[derive(Debug, Clone)]
pub struct AutoDegreeResult {
    pub result: SecondKindResult,
    /// Whether `delta <= delta_target` was reached within `d_max`.
    pub target_reached: bool,
    /// The escalation trace `(d, delta)`.
    pub history: Vec<(usize, f64)>,
}

/// Doubles the truncation degree from `d0` until `delta <= delta_target`
/// or the next degree would exceed `d_max`; returns the last result and
/// the achieved deltas.
pub fn auto_degree<W: WeightFn + ?Sized>(
    k: &IntervalUnion,
    w: &W,
    n: usize,
    delta_target: f64,
    d0: usize,
    d_max: usize,
) -> Result<AutoDegreeResult, SecondKindError> {
    auto_degree_with(k, w, n, delta_target, d0, d_max, &SolverOptions::default())
}

pub fn auto_degree_with<W: WeightFn + ?Sized>(
    k: &IntervalUnion,
    w: &W,
    n: usize,
    delta_target: f64,
    d0: usize,
    d_max: usize,
    opts: &SolverOptions,
) -> Result<AutoDegreeResult, SecondKindError> {
    assert!(delta_target > 0.0, "delta_target must be positive");
    let mut d = d0.max(n).min(d_max.max(n));
    let mut history = Vec::new();
    loop {
        let result = solve_second_kind_with(k, w, n, d, opts, None)?;
        history.push((d, result.delta));
        if result.delta <= delta_target {
            return Ok(AutoDegreeResult { result, target_reached: true, history });
        }
        if d * 2 > d_max {
            return Ok(AutoDegreeResult { result, target_reached: false, history });
        }
        d *= 2;
    }
}

/// Default truncation degree for a given polynomial degree.
pub fn default_moment_degree(n: usize) -> usize {
    (4 * n).max(40)
}

/// The optimality certificate of the minimal-L1 characterization: the
/// integrals `int_K sgn(P) T_j / w dx` for `j < deg P`, which vanish at a
/// true minimizer.
pub fn orthogonality_certificate<W: WeightFn + ?Sized>(
    poly: &ChebPoly,
    k: &IntervalUnion,
    w: &W,
) -> Result<Vec<f64>, SecondKindError> {
    let n = poly.degree().unwrap_or(0);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let t_j = ChebPoly::basis_element(Basis::T, j);
        out.push(signed_integral(poly, &t_j, w, k)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{RationalWeight, UnitWeight};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn unit() -> IntervalUnion {
        IntervalUnion::segment(-1.0, 1.0).unwrap()
    }

    fn k1() -> IntervalUnion {
        IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap()
    }

    #[test]
    fn j_matrix_unit_weight_values() {
        let j = build_j(-1.0, 1.0, 2, 1, &UnitWeight).unwrap();
        assert_close(j[(0, 0)], 2.0, 1e-15);
        assert_close(j[(1, 0)], 0.0, 1e-15);
        assert_close(j[(1, 1)], 4.0 / 3.0, 1e-15);
        assert_close(j[(2, 0)], -2.0 / 3.0, 1e-15);
    }

    #[test]
    fn j_matrix_quadrature_agrees_with_closed_form() {
        // integrate the unit weight numerically by hiding it behind a closure
        let not_unit = |_: f64| 1.0;
        let jq = build_j(-0.3, 0.8, 6, 3, &not_unit).unwrap();
        let jc = build_j(-0.3, 0.8, 6, 3, &UnitWeight).unwrap();
        for k in 0..=6 {
            for n in 0..=3 {
                assert_close(jq[(k, n)], jc[(k, n)], 1e-11);
            }
        }
    }

    #[test]
    fn ersatz_norm_zero_polynomial() {
        let (v, ys) = ersatz_norm(&ChebPoly::zero(Basis::T), &unit(), &UnitWeight, 5).unwrap();
        assert_eq!(v, 0.0);
        assert!(ys[0].0.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn ersatz_norm_constant_one() {
        // || 1 ||_d = int_{-1}^{1} 1 = 2 for any d >= 0 (single sign)
        let p = ChebPoly::constant(1.0);
        for d in [0, 1, 4, 10] {
            let (v, ys) = ersatz_norm(&p, &unit(), &UnitWeight, d).unwrap();
            assert_close(v, 2.0, 1e-6);
            // optimal y^+ are the cosine moments of sin(theta) d theta
            assert_close(ys[0].0[0], 2.0, 1e-5);
            assert!(ys[0].1[0].abs() < 1e-5);
        }
    }

    #[test]
    fn ersatz_norm_monotone_in_d_and_below_l1() {
        let p = ChebPoly::t(vec![0.12, -0.4, 0.2, 0.125]);
        let k = k1();
        let l1 = l1_norm_weighted(&p, &UnitWeight, &k).unwrap();
        let mut prev = 0.0;
        for d in [3, 8, 13, 18] {
            let (v, _) = ersatz_norm(&p, &k, &UnitWeight, d).unwrap();
            assert!(v >= prev - 1e-8, "not monotone: {v} after {prev}");
            assert!(v <= l1 + 1e-8, "{v} above l1 {l1}");
            prev = v;
        }
    }

    #[test]
    fn moment_vectors_are_toeplitz_feasible() {
        let p = ChebPoly::t(vec![0.3, -0.2, 0.25]);
        let (_, ys) = ersatz_norm(&p, &k1(), &UnitWeight, 8).unwrap();
        for (plus, minus) in &ys {
            for y in [plus, minus] {
                let t = toeplitz_matrix(y);
                let emin = t.symmetric_eigenvalues().min();
                assert!(emin > -1e-7, "moment vector not feasible: {emin}");
                // |y_k| <= y_0
                for &v in y.iter() {
                    assert!(v.abs() <= y[0] + 1e-7);
                }
            }
        }
    }

    #[test]
    fn classical_minimal_l1_degree_3() {
        let r = solve_second_kind(&unit(), &UnitWeight, 3, 30).unwrap();
        let want = ChebPoly::classical_second_kind_monic(3).to_t();
        // the truncated optimum has a nearly flat face around the true
        // minimizer: the value converges much faster than the coefficients
        for m in 0..=3 {
            assert_close(r.poly.coeff(m), want.coeff(m), 1e-2);
        }
        assert_close(r.l1_value, 0.25, 1e-3);
        assert!(r.ersatz_value <= r.l1_value + 1e-9);
        assert!(r.delta >= -1e-9 && r.delta < 1.0);
        // roots of the classical solution: 3 simple real roots inside
        assert_eq!(r.roots_report.real_count, 3);
        assert!(r.roots_report.all_inside());
    }

    #[test]
    fn two_interval_linear_l1() {
        // minimal L1 monic linear polynomials on [-1,-c] u [c,1] all have
        // value 1 - c^2; the minimizer is not unique
        let c = 0.5;
        let k = IntervalUnion::new(&[(-1.0, -c), (c, 1.0)]).unwrap();
        let r = solve_second_kind(&k, &UnitWeight, 1, 30).unwrap();
        assert_close(r.l1_value, 0.75, 2e-3);
        assert!(r.ersatz_value <= r.l1_value + 1e-9);
        // any root in [-c, c] is an acceptable minimizer
        let root = -r.poly.coeff(0) / r.poly.coeff(1);
        assert!(root.abs() <= c + 1e-6, "root {root}");
    }

    #[test]
    fn auto_degree_trivial_target() {
        let r = auto_degree(&unit(), &UnitWeight, 2, 1.0, 4, 64).unwrap();
        assert!(r.target_reached);
        assert_eq!(r.result.d, 4);
        assert_eq!(r.history.len(), 1);
    }

    #[test]
    fn auto_degree_reaches_target() {
        // delta decays roughly like d^{-1.65} here; 5e-3 is hit by d = 64
        let r = auto_degree(&unit(), &UnitWeight, 2, 5e-3, 16, 64).unwrap();
        assert!(r.target_reached, "history: {:?}", r.history);
        assert!(r.result.delta <= 5e-3);
        // deltas were recorded for every escalation step
        assert!(r.history.len() > 1);
        assert!(r.history.windows(2).all(|w| w[1].0 == 2 * w[0].0));
    }

    #[test]
    fn check_roots_reports() {
        let p = ChebPoly::classical_second_kind_monic(3).to_t();
        let rep = check_roots(&p, &unit());
        assert_eq!(rep.real_count, 3);
        assert!(rep.all_inside());
        let s = 0.5f64.sqrt();
        assert_close(rep.roots[0].re, -s, 1e-9);
        assert_close(rep.roots[1].re, 0.0, 1e-9);
        assert_close(rep.roots[2].re, s, 1e-9);

        // x^2 + 1 has no real roots
        let q = ChebPoly::from_monomial(&[1.0, 0.0, 1.0]);
        let rep = check_roots(&q, &unit());
        assert_eq!(rep.real_count, 0);
        assert!(!rep.all_inside());
    }

    #[test]
    fn orthogonality_certificate_shrinks_with_d() {
        // the certificate residual tracks the distance to the true
        // minimizer, which decays with the truncation degree
        let certs: Vec<f64> = [10usize, 40]
            .iter()
            .map(|&d| {
                let r = solve_second_kind(&unit(), &UnitWeight, 3, d).unwrap();
                orthogonality_certificate(&r.poly, &unit(), &UnitWeight)
                    .unwrap()
                    .iter()
                    .fold(0.0f64, |a, v| a.max(v.abs()))
            })
            .collect();
        assert!(certs[1] < 0.5 * certs[0], "{certs:?}");
        assert!(certs[1] <= 5e-2 * 0.25, "{certs:?}");
        // the exact minimizer itself passes the certificate to quadrature
        // accuracy
        let exact = ChebPoly::classical_second_kind_monic(3).to_t();
        let cert = orthogonality_certificate(&exact, &unit(), &UnitWeight).unwrap();
        for v in cert {
            assert!(v.abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn norm_axioms_spot_checks() {
        let k = k1();
        let d = 12;
        let p = ChebPoly::t(vec![0.2, -0.7, 0.05, 0.5]);
        let q = ChebPoly::t(vec![-0.1, 0.3, 0.6, -0.2]);
        let (np, _) = ersatz_norm(&p, &k, &UnitWeight, d).unwrap();
        let (nq, _) = ersatz_norm(&q, &k, &UnitWeight, d).unwrap();
        // homogeneity
        let (n3p, _) = ersatz_norm(&p.scaled(-3.0), &k, &UnitWeight, d).unwrap();
        assert_close(n3p, 3.0 * np, 1e-6);
        // triangle inequality
        let (npq, _) = ersatz_norm(&p.add_scaled(&q, 1.0), &k, &UnitWeight, d).unwrap();
        assert!(npq <= np + nq + 1e-8);
        // definiteness scale
        assert!(np > 1e-3);
    }

    #[test]
    fn weighted_solve_runs() {
        let k = k1();
        let w = crate::weight::example_weight(&k);
        let r = solve_second_kind(&k, &w, 3, 20).unwrap();
        assert!(r.ersatz_value > 0.0);
        assert!(r.ersatz_value <= r.l1_value + 1e-9);
        let _ = RationalWeight::one();
    }

    #[test]
    fn errors_on_bad_degrees() {
        assert!(matches!(
            solve_second_kind(&unit(), &UnitWeight, 0, 5),
            Err(SecondKindError::InvalidDegree)
        ));
        assert!(matches!(
            solve_second_kind(&unit(), &UnitWeight, 5, 3),
            Err(SecondKindError::MomentDegreeTooSmall { .. })
        ));
    }
}
