//! Primal-dual path-following interior-point method for the lowered real
//! form: Nesterov-Todd scaling on dense symmetric blocks, Mehrotra
//! predictor-corrector, homogeneous self-dual embedding for infeasibility
//! detection, and a direct dense factorization of the Schur complement.
//!
//! The lowered problem is
//!
//! ```text
//! minimize    c_u . u + sum_j <C_j, X_j>
//! subject to  a_i . u + sum_j <A_ij, X_j> = b_i,      X_j >= 0,
//! ```
//!
//! embedded self-dually with scalars (tau, kappa); the status is decided
//! from the tau/kappa ratio together with certificate residuals.

use nalgebra::{DMatrix, DVector};

use super::{Residuals, SolveStatus};

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative tolerance for accepting an infeasibility certificate.
    pub infeas_tol: f64,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_frac: f64,
    /// Print per-iteration convergence metrics to stderr.
    pub trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
            infeas_tol: 1e-8,
            step_frac: 0.98,
            trace: false,
        }
    }
}

/// One equality row of the lowered problem. Block coefficient entries list
/// the full (symmetric) matrix, so `<A, X> = sum v * X[i, j]` literally.
pub(super) struct RowCoeff {
    pub free: Vec<(usize, f64)>,
    pub blocks: Vec<(usize, Vec<(usize, usize, f64)>)>,
}

pub(super) struct RealConic {
    pub free: usize,
    pub dims: Vec<usize>,
    pub c_u: DVector<f64>,
    pub c_blocks: Vec<DMatrix<f64>>,
    pub rows: Vec<RowCoeff>,
    pub b: DVector<f64>,
}

pub(super) struct RawSolution {
    pub free_values: Vec<f64>,
    pub block_values: Vec<DMatrix<f64>>,
    pub multipliers: Vec<f64>,
    pub objective_value: f64,
    pub status: SolveStatus,
    pub residuals: Residuals,
    pub iterations: usize,
}

struct Scaling {
    /// `r^T Z r = diag(lambda) = r^{-1} X r^{-T}`.
    r: DMatrix<f64>,
    rinv: DMatrix<f64>,
    lambda: DVector<f64>,
    /// `p = r r^T`, the positive-definite congruence kernel.
    p: DMatrix<f64>,
}

struct Direction {
    du: DVector<f64>,
    dx: Vec<DMatrix<f64>>,
    dy: DVector<f64>,
    dz: Vec<DMatrix<f64>>,
    dtau: f64,
    dkappa: f64,
}

pub(super) fn solve_real(prob: &RealConic, opts: &SolverOptions) -> RawSolution {
    assert!(!prob.dims.is_empty(), "at least one PSD block is required");
    let m = prob.rows.len();
    let nf = prob.free;
    let nu: f64 = prob.dims.iter().map(|&d| d as f64).sum();

    // per-block constraint lists
    let mut block_rows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); prob.dims.len()];
    for (i, row) in prob.rows.iter().enumerate() {
        for (bi, (j, _)) in row.blocks.iter().enumerate() {
            block_rows[*j].push((i, bi));
        }
    }

    let norm_b = prob.b.norm();
    let norm_c = {
        let mut s = prob.c_u.norm_squared();
        for c in &prob.c_blocks {
            s += c.norm_squared();
        }
        s.sqrt()
    };

    // iterate
    let mut u = DVector::<f64>::zeros(nf);
    let mut x: Vec<DMatrix<f64>> = prob.dims.iter().map(|&d| DMatrix::identity(d, d)).collect();
    let mut y = DVector::<f64>::zeros(m);
    let mut z: Vec<DMatrix<f64>> = prob.dims.iter().map(|&d| DMatrix::identity(d, d)).collect();
    let mut tau = 1.0f64;
    let mut kappa = 1.0f64;

    let mut last_metrics = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut stall_count = 0usize;
    let mut status = SolveStatus::NumericalFailure;
    let mut iterations = 0usize;

    // best iterate seen, by the worst of the three convergence metrics;
    // restored when the iteration stalls past its numerical floor
    type Snapshot = (DVector<f64>, Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>, f64);
    let mut best_worst = f64::INFINITY;
    let mut best_state: Option<Snapshot> = None;

    for iter in 0..opts.max_iter {
        iterations = iter;

        // residuals of the self-dual system
        let ax = apply_a(prob, &u, &x);
        let rp = &ax - &prob.b * tau;
        let aty = at_free(prob, &y);
        let rf = &aty - &prob.c_u * tau;
        let at_blocks: Vec<DMatrix<f64>> = (0..prob.dims.len())
            .map(|j| at_block(prob, &block_rows, &y, j))
            .collect();
        let rd: Vec<DMatrix<f64>> = (0..prob.dims.len())
            .map(|j| &at_blocks[j] + &z[j] - &prob.c_blocks[j] * tau)
            .collect();
        let cx = prob.c_u.dot(&u) + dot_blocks(&prob.c_blocks, &x);
        let by = prob.b.dot(&y);
        let rg = by - cx - kappa;

        let gap_inner: f64 = x.iter().zip(&z).map(|(xj, zj)| xj.dot(zj)).sum();
        let mu = (gap_inner + tau * kappa) / (nu + 1.0);

        // convergence metrics (scaled back by tau)
        let pobj = cx / tau;
        let dobj = by / tau;
        let pres = rp.norm() / (tau * norm_b.max(1.0));
        let dres = {
            let mut s = rf.norm_squared();
            for r in &rd {
                s += r.norm_squared();
            }
            s.sqrt() / (tau * norm_c.max(1.0))
        };
        let relgap = (gap_inner / (tau * tau)) / pobj.abs().max(1.0);

        if opts.trace {
            eprintln!(
                "it {iter:3}  pres {pres:9.2e}  dres {dres:9.2e}  relgap {relgap:9.2e}  \
                 pobj {pobj:13.6e}  dobj {dobj:13.6e}  tau {tau:8.2e}  kappa {kappa:8.2e}  mu {mu:8.2e}"
            );
        }

        // the equality polish at exit repairs pres, so the iterate quality
        // is judged by the dual residual and the gap alone; for pure
        // feasibility problems (zero objective) only pres matters, since
        // every feasible point is optimal
        let worst = if norm_c == 0.0 { pres } else { dres.max(relgap) };
        if worst < best_worst {
            best_worst = worst;
            best_state = Some((u.clone(), x.clone(), y.clone(), z.clone(), tau));
        }

        if pres <= opts.tol && dres <= opts.tol && relgap <= opts.tol {
            status = SolveStatus::Optimal;
            break;
        }

        // infeasibility certificates (scale-invariant tests)
        if by > 0.0 {
            let mut hz = aty.norm_squared();
            for j in 0..prob.dims.len() {
                hz += (&at_blocks[j] + &z[j]).norm_squared();
            }
            let hz = hz.sqrt();
            if hz * norm_b.max(1.0) <= opts.infeas_tol * by {
                status = SolveStatus::PrimalInfeasible;
                break;
            }
        }
        if cx < 0.0 {
            let axn = ax.norm();
            if axn * norm_c.max(1.0) <= opts.infeas_tol * (-cx) {
                status = SolveStatus::DualInfeasible;
                break;
            }
        }

        // stall detection
        let metrics = (pres, dres, relgap);
        let improved = metrics.0 < 0.9 * last_metrics.0
            || metrics.1 < 0.9 * last_metrics.1
            || metrics.2 < 0.9 * last_metrics.2;
        if improved {
            stall_count = 0;
        } else {
            stall_count += 1;
            if stall_count >= 6 {
                break;
            }
        }
        last_metrics = metrics;

        // Nesterov-Todd scalings
        let scalings = match compute_scalings(&x, &z) {
            Some(s) => s,
            None => break,
        };

        // Schur complement S and the objective congruences
        let mut s_mat = DMatrix::<f64>::zeros(m, m);
        let mut h = DVector::<f64>::zeros(m);
        for (j, sc) in scalings.iter().enumerate() {
            let d = prob.dims[j];
            let touching = &block_rows[j];
            for (pos, &(i, bi)) in touching.iter().enumerate() {
                let entries = &prob.rows[i].blocks[bi].1;
                let bm = sparse_to_dense(entries, d);
                let v = &sc.p * (&bm * &sc.p);
                for &(k, bk) in touching.iter().take(pos + 1) {
                    let ek = &prob.rows[k].blocks[bk].1;
                    let val = dot_sparse(ek, &v);
                    s_mat[(i, k)] += val;
                    if i != k {
                        s_mat[(k, i)] += val;
                    }
                }
            }
            if prob.c_blocks[j].amax() > 0.0 {
                let pc = &sc.p * (&prob.c_blocks[j] * &sc.p);
                for &(i, bi) in touching {
                    h[i] += dot_sparse(&prob.rows[i].blocks[bi].1, &pc);
                }
            }
        }

        // KKT matrix [[S, A_u], [A_u^T, -reg]]
        let reg = 1e-13 * (1.0 + s_mat.diagonal().amax());
        let mut mkkt = DMatrix::<f64>::zeros(m + nf, m + nf);
        mkkt.view_mut((0, 0), (m, m)).copy_from(&s_mat);
        for i in 0..m {
            mkkt[(i, i)] += reg;
            for &(k, v) in &prob.rows[i].free {
                mkkt[(i, m + k)] = v;
                mkkt[(m + k, i)] = v;
            }
        }
        for k in 0..nf {
            mkkt[(m + k, m + k)] = -reg;
        }
        let lu = mkkt.clone().lu();
        // two rounds of iterative refinement: the scaling makes the KKT
        // matrix increasingly ill-conditioned as mu shrinks, and the lost
        // digits otherwise put a floor under the attainable residuals
        let solve_refined = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            let mut sol = lu.solve(rhs)?;
            for _ in 0..2 {
                let resid = rhs - &mkkt * &sol;
                let corr = lu.solve(&resid)?;
                sol += corr;
            }
            Some(sol)
        };

        // first solve: RHS [b + h; c_u]
        let mut rhs1 = DVector::<f64>::zeros(m + nf);
        rhs1.rows_mut(0, m).copy_from(&(&prob.b + &h));
        rhs1.rows_mut(m, nf).copy_from(&prob.c_u);
        let sol1 = match solve_refined(&rhs1) {
            Some(s) => s,
            None => break,
        };
        let y1 = sol1.rows(0, m).into_owned();
        let u1 = sol1.rows(m, nf).into_owned();
        let x1: Vec<DMatrix<f64>> = (0..prob.dims.len())
            .map(|j| {
                let w = at_block(prob, &block_rows, &y1, j) - &prob.c_blocks[j];
                &scalings[j].p * (w * &scalings[j].p)
            })
            .collect();
        let denom =
            kappa / tau + prob.b.dot(&y1) - prob.c_u.dot(&u1) - dot_blocks(&prob.c_blocks, &x1);
        if denom.abs() < 1e-300 {
            break;
        }

        let solve_dir = |f1: &DVector<f64>,
                         f2u: &DVector<f64>,
                         f2b: &[DMatrix<f64>],
                         f3: f64,
                         d4: &[DMatrix<f64>],
                         f5: f64|
         -> Option<Direction> {
            // fold the complementarity RHS into the dual-block residual
            let f2t: Vec<DMatrix<f64>> = (0..prob.dims.len())
                .map(|j| {
                    let sc = &scalings[j];
                    let li = lambda_inv_apply(&sc.lambda, &d4[j]);
                    &f2b[j] - &(sc.rinv.transpose() * (li * &sc.rinv))
                })
                .collect();
            let mut g = DVector::<f64>::zeros(m);
            let t: Vec<DMatrix<f64>> = (0..prob.dims.len())
                .map(|j| &scalings[j].p * (&f2t[j] * &scalings[j].p))
                .collect();
            for (j, tj) in t.iter().enumerate() {
                for &(i, bi) in &block_rows[j] {
                    g[i] += dot_sparse(&prob.rows[i].blocks[bi].1, tj);
                }
            }
            let mut rhs2 = DVector::<f64>::zeros(m + nf);
            rhs2.rows_mut(0, m).copy_from(&(f1 + &g));
            rhs2.rows_mut(m, nf).copy_from(f2u);
            let sol2 = solve_refined(&rhs2)?;
            let y2 = sol2.rows(0, m).into_owned();
            let u2 = sol2.rows(m, nf).into_owned();
            let x2: Vec<DMatrix<f64>> = (0..prob.dims.len())
                .map(|j| {
                    let w = at_block(prob, &block_rows, &y2, j);
                    &scalings[j].p * (w * &scalings[j].p) - &t[j]
                })
                .collect();
            let numer = f3 - prob.b.dot(&y2) + prob.c_u.dot(&u2)
                + dot_blocks(&prob.c_blocks, &x2)
                + f5 / tau;
            let dtau = numer / denom;
            let dy = &y2 + &y1 * dtau;
            let du = &u2 + &u1 * dtau;
            let dx: Vec<DMatrix<f64>> = (0..prob.dims.len())
                .map(|j| &x2[j] + &x1[j] * dtau)
                .collect();
            let dz: Vec<DMatrix<f64>> = (0..prob.dims.len())
                .map(|j| {
                    &f2b[j] - at_block(prob, &block_rows, &dy, j) + &prob.c_blocks[j] * dtau
                })
                .collect();
            let dkappa = (f5 - kappa * dtau) / tau;
            Some(Direction { du, dx, dy, dz, dtau, dkappa })
        };

        // predictor (affine) direction
        let f1_aff = -&rp;
        let f2u_aff = -&rf;
        let f2b_aff: Vec<DMatrix<f64>> = rd.iter().map(|r| -r).collect();
        let d4_aff: Vec<DMatrix<f64>> = scalings
            .iter()
            .map(|sc| {
                let d = sc.lambda.len();
                let mut mm = DMatrix::<f64>::zeros(d, d);
                for a in 0..d {
                    mm[(a, a)] = -sc.lambda[a] * sc.lambda[a];
                }
                mm
            })
            .collect();
        let aff = match solve_dir(&f1_aff, &f2u_aff, &f2b_aff, -rg, &d4_aff, -tau * kappa) {
            Some(d) => d,
            None => break,
        };

        let alpha_aff = max_step(&scalings, &aff, tau, kappa).min(1.0);
        let mu_aff = {
            let mut g = 0.0;
            for j in 0..prob.dims.len() {
                let xs = &x[j] + &aff.dx[j] * alpha_aff;
                let zs = &z[j] + &aff.dz[j] * alpha_aff;
                g += xs.dot(&zs);
            }
            let ts = tau + alpha_aff * aff.dtau;
            let ks = kappa + alpha_aff * aff.dkappa;
            (g + ts * ks) / (nu + 1.0)
        };
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // combined direction with Mehrotra correction
        let eta = 1.0 - sigma;
        let f1 = -&rp * eta;
        let f2u = -&rf * eta;
        let f2b: Vec<DMatrix<f64>> = rd.iter().map(|r| -r * eta).collect();
        let d4: Vec<DMatrix<f64>> = scalings
            .iter()
            .enumerate()
            .map(|(j, sc)| {
                let d = sc.lambda.len();
                let qx = &sc.rinv * (&aff.dx[j] * sc.rinv.transpose());
                let qz = sc.r.transpose() * (&aff.dz[j] * &sc.r);
                let mut mm = -(&qx * &qz + &qz * &qx) * 0.5;
                for a in 0..d {
                    mm[(a, a)] += sigma * mu - sc.lambda[a] * sc.lambda[a];
                }
                mm
            })
            .collect();
        let f5 = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
        let dir = match solve_dir(&f1, &f2u, &f2b, -rg * eta, &d4, f5) {
            Some(d) => d,
            None => break,
        };

        let alpha = (opts.step_frac * max_step(&scalings, &dir, tau, kappa)).min(1.0);
        if alpha < 1e-10 {
            break;
        }

        u += &dir.du * alpha;
        y += &dir.dy * alpha;
        for j in 0..prob.dims.len() {
            x[j] += &dir.dx[j] * alpha;
            z[j] += &dir.dz[j] * alpha;
            symmetrize(&mut x[j]);
            symmetrize(&mut z[j]);
        }
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
        if tau <= 0.0 || kappa <= 0.0 {
            break;
        }
    }

    if status == SolveStatus::NumericalFailure {
        if let Some((bu, bx, by, bz, btau)) = best_state {
            u = bu;
            x = bx;
            y = by;
            z = bz;
            tau = btau;
        }
    }
    if !matches!(
        status,
        SolveStatus::PrimalInfeasible | SolveStatus::DualInfeasible
    ) {
        // least-norm projection of (u, X) onto the equality constraints:
        // the iteration's primal residual floors around sqrt(eps) because
        // the scaling congruences amplify rounding, while the PSD blocks
        // retain enough interior margin to absorb the tiny correction
        equality_polish(prob, &block_rows, &mut u, &mut x, tau);
        if status == SolveStatus::NumericalFailure && norm_c == 0.0 {
            // zero objective: exhibiting a feasible point settles the
            // problem even when the central path lacks an interior
            let pres = (apply_a(prob, &u, &x) - &prob.b * tau).norm() / (tau * norm_b.max(1.0));
            let min_eig = x
                .iter()
                .map(|xj| (xj / tau).symmetric_eigenvalues().min())
                .fold(f64::INFINITY, f64::min);
            if pres <= opts.tol && min_eig >= -opts.tol {
                status = SolveStatus::Optimal;
            }
        } else if status == SolveStatus::NumericalFailure {
            let pres = (apply_a(prob, &u, &x) - &prob.b * tau).norm() / (tau * norm_b.max(1.0));
            let dres = {
                let mut s = (at_free(prob, &y) - &prob.c_u * tau).norm_squared();
                for j in 0..prob.dims.len() {
                    s += (at_block(prob, &block_rows, &y, j) + &z[j]
                        - &prob.c_blocks[j] * tau)
                        .norm_squared();
                }
                s.sqrt() / (tau * norm_c.max(1.0))
            };
            let cx = prob.c_u.dot(&u) + dot_blocks(&prob.c_blocks, &x);
            let gap_inner: f64 = x.iter().zip(&z).map(|(xj, zj)| xj.dot(zj)).sum();
            let relgap = (gap_inner / (tau * tau)) / (cx / tau).abs().max(1.0);
            if opts.trace {
                eprintln!(
                    "post-polish  pres {pres:9.2e}  dres {dres:9.2e}  relgap {relgap:9.2e}"
                );
            }
            if pres <= opts.tol && dres <= opts.tol && relgap <= opts.tol {
                status = SolveStatus::Optimal;
            }
        }
    }
    extract(prob, status, &u, &x, &y, &z, tau, iterations, norm_b, norm_c)
}

/// Least-norm correction of the block variables so the equalities hold at
/// the working precision: solves the Gram system over the block parts of
/// the rows that touch blocks and adds the adjoint correction to `x` only.
/// The free variables carry the polynomial data and must not be disturbed
/// (rows touching only free variables are already converged to the IPM
/// accuracy and the assemblies pin their values exactly on extraction).
fn equality_polish(
    prob: &RealConic,
    block_rows: &[Vec<(usize, usize)>],
    u: &mut DVector<f64>,
    x: &mut [DMatrix<f64>],
    tau: f64,
) {
    // stage 1: rows with no block part can only be repaired through the
    // free variables; their least-norm correction is tiny and independent
    // of the block stage
    let free_only: Vec<usize> = (0..prob.rows.len())
        .filter(|&i| prob.rows[i].blocks.is_empty() && !prob.rows[i].free.is_empty())
        .collect();
    if !free_only.is_empty() {
        let mf = free_only.len();
        let mut gram = DMatrix::<f64>::zeros(mf, mf);
        for (pi, &i) in free_only.iter().enumerate() {
            for (pk, &k) in free_only.iter().enumerate().take(pi + 1) {
                let mut g = 0.0;
                for &(vi, ci) in &prob.rows[i].free {
                    for &(vk, ck) in &prob.rows[k].free {
                        if vi == vk {
                            g += ci * ck;
                        }
                    }
                }
                gram[(pi, pk)] = g;
                gram[(pk, pi)] = g;
            }
        }
        let resid = DVector::from_fn(mf, |p, _| {
            let i = free_only[p];
            let mut v = 0.0;
            for &(k, c) in &prob.rows[i].free {
                v += c * u[k];
            }
            prob.b[i] * tau - v
        });
        if let Some(chol) = gram.cholesky() {
            let lam = chol.solve(&resid);
            for (p, &i) in free_only.iter().enumerate() {
                for &(k, c) in &prob.rows[i].free {
                    u[k] += lam[p] * c;
                }
            }
        }
    }

    // stage 2: rows touching blocks are repaired through the blocks alone,
    // leaving the free variables (the polynomial data) untouched
    let rows: Vec<usize> = (0..prob.rows.len())
        .filter(|&i| !prob.rows[i].blocks.is_empty())
        .collect();
    let mm = rows.len();
    if mm == 0 {
        return;
    }
    let pos_of: std::collections::HashMap<usize, usize> =
        rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut gram = DMatrix::<f64>::zeros(mm, mm);
    for (j, rows_j) in block_rows.iter().enumerate() {
        let d = prob.dims[j];
        for (pos, &(i, bi)) in rows_j.iter().enumerate() {
            let bi_dense = sparse_to_dense(&prob.rows[i].blocks[bi].1, d);
            let pi = pos_of[&i];
            for &(k, bk) in rows_j.iter().take(pos + 1) {
                let g = dot_sparse(&prob.rows[k].blocks[bk].1, &bi_dense);
                let pk = pos_of[&k];
                gram[(pi, pk)] += g;
                if pi != pk {
                    gram[(pk, pi)] += g;
                }
            }
        }
    }
    let full_resid = &prob.b * tau - apply_a(prob, u, x);
    let resid = DVector::from_fn(mm, |p, _| full_resid[rows[p]]);
    // rows can be nearly dependent; a graded jitter keeps the Gram factorable
    let mut chol = gram.clone().cholesky();
    if chol.is_none() {
        let bump = 1e-12 * (1.0 + gram.diagonal().amax());
        for i in 0..mm {
            gram[(i, i)] += bump;
        }
        chol = gram.cholesky();
    }
    let Some(chol) = chol else { return };
    let lam = chol.solve(&resid);
    for (p, &i) in rows.iter().enumerate() {
        let li = lam[p];
        if li == 0.0 {
            continue;
        }
        for (j, entries) in &prob.rows[i].blocks {
            for &(a, b2, v) in entries {
                x[*j][(a, b2)] += li * v;
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extract(
    prob: &RealConic,
    status: SolveStatus,
    u: &DVector<f64>,
    x: &[DMatrix<f64>],
    y: &DVector<f64>,
    z: &[DMatrix<f64>],
    tau: f64,
    iterations: usize,
    norm_b: f64,
    norm_c: f64,
) -> RawSolution {
    // infeasibility certificates are returned normalized by the certifying
    // functional instead of tau (which tends to zero there)
    let scale = match status {
        SolveStatus::PrimalInfeasible => prob.b.dot(y).max(1e-300),
        SolveStatus::DualInfeasible => {
            (-(prob.c_u.dot(u) + dot_blocks(&prob.c_blocks, x))).max(1e-300)
        }
        _ => tau.max(1e-300),
    };
    let free_values: Vec<f64> = u.iter().map(|v| v / scale).collect();
    let block_values: Vec<DMatrix<f64>> = x.iter().map(|xj| xj / scale).collect();
    let multipliers: Vec<f64> = y.iter().map(|v| v / scale).collect();
    let objective_value = prob.c_u.dot(u) / scale
        + prob
            .c_blocks
            .iter()
            .zip(&block_values)
            .map(|(c, xv)| c.dot(xv))
            .sum::<f64>();

    // residual report for the returned point
    let ax = apply_a(prob, u, x);
    let rp = (&ax / scale) - &prob.b;
    let primal = rp.norm() / norm_b.max(1.0);
    let mut block_rows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); prob.dims.len()];
    for (i, row) in prob.rows.iter().enumerate() {
        for (bi, (j, _)) in row.blocks.iter().enumerate() {
            block_rows[*j].push((i, bi));
        }
    }
    let dual = {
        let mut s = (at_free(prob, y) / scale - &prob.c_u).norm_squared();
        for j in 0..prob.dims.len() {
            let rdj =
                (at_block(prob, &block_rows, y, j) + &z[j]) / scale - &prob.c_blocks[j];
            s += rdj.norm_squared();
        }
        s.sqrt() / norm_c.max(1.0)
    };
    let dobj = prob.b.dot(y) / scale;
    let gap = (objective_value - dobj).abs();
    let min_eigenvalue = block_values
        .iter()
        .map(|xv| xv.symmetric_eigenvalues().min())
        .fold(f64::INFINITY, f64::min);

    RawSolution {
        free_values,
        block_values,
        multipliers,
        objective_value,
        status,
        residuals: Residuals { primal, dual, gap, min_eigenvalue },
        iterations,
    }
}

fn compute_scalings(x: &[DMatrix<f64>], z: &[DMatrix<f64>]) -> Option<Vec<Scaling>> {
    let mut out = Vec::with_capacity(x.len());
    for (xj, zj) in x.iter().zip(z) {
        let lx = cholesky_with_bump(xj)?;
        let lz = cholesky_with_bump(zj)?;
        let w = lz.transpose() * &lx;
        let svd = w.svd(false, true);
        let vt = svd.v_t.as_ref()?;
        let d = xj.nrows();
        let mut sig_isqrt = DMatrix::<f64>::zeros(d, d);
        let mut lambda = DVector::<f64>::zeros(d);
        for i in 0..d {
            let s = svd.singular_values[i];
            if s <= 0.0 {
                return None;
            }
            sig_isqrt[(i, i)] = 1.0 / s.sqrt();
            lambda[i] = s;
        }
        // r = Lx V Sigma^{-1/2};  r^{-1} = Sigma^{1/2} V^T Lx^{-1}
        let r = &lx * (vt.transpose() * &sig_isqrt);
        let lx_inv = invert_lower_triangular(&lx)?;
        let mut sig_sqrt = DMatrix::<f64>::zeros(d, d);
        for i in 0..d {
            sig_sqrt[(i, i)] = lambda[i].sqrt();
        }
        let rinv = &sig_sqrt * (vt * &lx_inv);
        let p = &r * r.transpose();
        out.push(Scaling { r, rinv, lambda, p });
    }
    Some(out)
}

fn cholesky_with_bump(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.l());
    }
    let bump = 1e-14 * (1.0 + m.diagonal().amax());
    let mut mm = m.clone();
    for i in 0..mm.nrows() {
        mm[(i, i)] += bump;
    }
    mm.cholesky().map(|ch| ch.l())
}

fn invert_lower_triangular(l: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let d = l.nrows();
    let mut inv = DMatrix::<f64>::identity(d, d);
    for col in 0..d {
        let mut colv = inv.column_mut(col);
        if !l.solve_lower_triangular_mut(&mut colv) {
            return None;
        }
    }
    Some(inv)
}

/// Entrywise inverse of the scaled Jordan product: returns `V` with
/// `(Lambda V + V Lambda) / 2 = D`.
fn lambda_inv_apply(lambda: &DVector<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
    let n = lambda.len();
    let mut v = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            v[(a, b)] = 2.0 * d[(a, b)] / (lambda[a] + lambda[b]);
        }
    }
    v
}

/// Largest `alpha` keeping every cone variable in the interior along the
/// direction (up to the boundary itself).
fn max_step(scalings: &[Scaling], dir: &Direction, tau: f64, kappa: f64) -> f64 {
    let mut alpha = f64::INFINITY;
    for (j, sc) in scalings.iter().enumerate() {
        let qx = &sc.rinv * (&dir.dx[j] * sc.rinv.transpose());
        alpha = alpha.min(psd_boundary_step(&qx, &sc.lambda));
        let qz = sc.r.transpose() * (&dir.dz[j] * &sc.r);
        alpha = alpha.min(psd_boundary_step(&qz, &sc.lambda));
    }
    if dir.dtau < 0.0 {
        alpha = alpha.min(-tau / dir.dtau);
    }
    if dir.dkappa < 0.0 {
        alpha = alpha.min(-kappa / dir.dkappa);
    }
    alpha
}

fn psd_boundary_step(q: &DMatrix<f64>, lambda: &DVector<f64>) -> f64 {
    let n = lambda.len();
    let mut scaled = q.clone();
    for a in 0..n {
        for b in 0..n {
            scaled[(a, b)] /= (lambda[a] * lambda[b]).sqrt();
        }
    }
    symmetrize(&mut scaled);
    let emin = scaled.symmetric_eigenvalues().min();
    if emin >= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (-emin)
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn sparse_to_dense(entries: &[(usize, usize, f64)], d: usize) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(d, d);
    for &(i, j, v) in entries {
        m[(i, j)] += v;
    }
    m
}

fn dot_sparse(entries: &[(usize, usize, f64)], m: &DMatrix<f64>) -> f64 {
    entries.iter().map(|&(i, j, v)| v * m[(i, j)]).sum()
}

fn dot_blocks(cs: &[DMatrix<f64>], xs: &[DMatrix<f64>]) -> f64 {
    cs.iter().zip(xs).map(|(c, x)| c.dot(x)).sum()
}

fn apply_a(prob: &RealConic, u: &DVector<f64>, x: &[DMatrix<f64>]) -> DVector<f64> {
    let mut out = DVector::<f64>::zeros(prob.rows.len());
    for (i, row) in prob.rows.iter().enumerate() {
        let mut v = 0.0;
        for &(k, c) in &row.free {
            v += c * u[k];
        }
        for (j, entries) in &row.blocks {
            v += dot_sparse(entries, &x[*j]);
        }
        out[i] = v;
    }
    out
}

fn at_free(prob: &RealConic, y: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::<f64>::zeros(prob.free);
    for (i, row) in prob.rows.iter().enumerate() {
        let yi = y[i];
        if yi == 0.0 {
            continue;
        }
        for &(k, c) in &row.free {
            out[k] += yi * c;
        }
    }
    out
}

fn at_block(
    prob: &RealConic,
    block_rows: &[Vec<(usize, usize)>],
    y: &DVector<f64>,
    j: usize,
) -> DMatrix<f64> {
    let d = prob.dims[j];
    let mut out = DMatrix::<f64>::zeros(d, d);
    for &(i, bi) in &block_rows[j] {
        let yi = y[i];
        if yi == 0.0 {
            continue;
        }
        for &(a, b, v) in &prob.rows[i].blocks[bi].1 {
            out[(a, b)] += yi * v;
        }
    }
    out
}
