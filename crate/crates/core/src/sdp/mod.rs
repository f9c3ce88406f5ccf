//! Self-contained semidefinite programming layer: a problem builder over
//! free scalar variables and Hermitian-PSD matrix blocks under real linear
//! equality constraints, and a primal-dual interior-point solver.
//!
//! Complex-Hermitian blocks are lowered to real symmetric blocks of doubled
//! dimension via `[[Re, -Im], [Im, Re]]` and de-embedded on return; every
//! constraint functional must be Hermitian-consistent, which makes the
//! lowered problem invariant under the embedding symmetry.

mod solver;

pub use solver::SolverOptions;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockField {
    RealSymmetric,
    ComplexHermitian,
}

#[derive(Debug, Clone, Copy)]
pub struct BlockSpec {
    pub dim: usize,
    pub field: BlockField,
}

/// Sparse real-linear functional on one block.
///
/// For a real symmetric block, `entries` lists `(i, j, v)` and the
/// functional is `sum v * X[i, j]` (an off-diagonal coefficient reads the
/// single symmetric entry `X[i, j] = X[j, i]`, not twice). For a complex
/// Hermitian block the functional is `Re( sum c * Q[i, j] )`.
#[derive(Debug, Clone, Default)]
pub struct BlockCoeff {
    pub real_entries: Vec<(usize, usize, f64)>,
    pub complex_entries: Vec<(usize, usize, Complex64)>,
}

impl BlockCoeff {
    pub fn real(entries: Vec<(usize, usize, f64)>) -> Self {
        Self { real_entries: entries, complex_entries: Vec::new() }
    }

    pub fn complex(entries: Vec<(usize, usize, Complex64)>) -> Self {
        Self { real_entries: Vec::new(), complex_entries: entries }
    }
}

/// One equality constraint: `sum coeff * u[idx] + sum <A_j, X_j> = rhs`.
#[derive(Debug, Clone, Default)]
pub struct Constraint {
    pub free: Vec<(usize, f64)>,
    pub blocks: Vec<(usize, BlockCoeff)>,
    pub rhs: f64,
}

/// A conic problem in standard equality form:
/// minimize a linear objective over free scalars and PSD blocks subject to
/// real linear equality constraints.
#[derive(Debug, Clone, Default)]
pub struct ConicProblem {
    free_vars: usize,
    blocks: Vec<BlockSpec>,
    obj_free: Vec<(usize, f64)>,
    obj_blocks: Vec<(usize, BlockCoeff)>,
    constraints: Vec<Constraint>,
}

impl ConicProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `n` free scalar variables, returning the index of the first.
    pub fn add_free_vars(&mut self, n: usize) -> usize {
        let first = self.free_vars;
        self.free_vars += n;
        first
    }

    pub fn free_var_count(&self) -> usize {
        self.free_vars
    }

    pub fn add_block(&mut self, dim: usize, field: BlockField) -> usize {
        assert!(dim >= 1, "blocks must have positive dimension");
        self.blocks.push(BlockSpec { dim, field });
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_objective_free(&mut self, idx: usize, coeff: f64) {
        self.obj_free.push((idx, coeff));
    }

    pub fn set_objective_block(&mut self, block: usize, coeff: BlockCoeff) {
        self.obj_blocks.push((block, coeff));
    }

    pub fn add_constraint(&mut self, c: Constraint) -> usize {
        self.constraints.push(c);
        self.constraints.len() - 1
    }

    /// Registers one real symmetric `(d+1) x (d+1)` block whose `(i, j)`
    /// entry is tied by equality constraints to the free variable
    /// `y[|i - j|]`, so the block equals the Toeplitz matrix of `y` and its
    /// positive semidefiniteness is exactly the truncated trigonometric
    /// moment condition on `y`. Returns the block index.
    pub fn toeplitz_constraint(&mut self, y: &[usize]) -> usize {
        assert!(!y.is_empty());
        let dim = y.len();
        let block = self.add_block(dim, BlockField::RealSymmetric);
        for i in 0..dim {
            for j in i..dim {
                self.add_constraint(Constraint {
                    free: vec![(y[j - i], -1.0)],
                    blocks: vec![(block, BlockCoeff::real(vec![(i, j, 1.0)]))],
                    rhs: 0.0,
                });
            }
        }
        block
    }

    /// Checks index ranges and lowers complex blocks to their real
    /// embedding, producing the internal real form.
    fn lower(&self) -> Result<solver::RealConic, SdpError> {
        let mut dims = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            dims.push(match b.field {
                BlockField::RealSymmetric => b.dim,
                BlockField::ComplexHermitian => 2 * b.dim,
            });
        }
        let lower_coeff = |block: usize, c: &BlockCoeff| -> Result<Vec<(usize, usize, f64)>, SdpError> {
            let spec = self.blocks.get(block).ok_or_else(|| {
                SdpError::DimensionMismatch(format!("block index {block} out of range"))
            })?;
            let mut acc: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
            let mut add = |i: usize, j: usize, v: f64| {
                if v != 0.0 {
                    *acc.entry((i, j)).or_insert(0.0) += v;
                }
            };
            match spec.field {
                BlockField::RealSymmetric => {
                    if !c.complex_entries.is_empty() {
                        return Err(SdpError::DimensionMismatch(
                            "complex coefficient on a real block".into(),
                        ));
                    }
                    for &(i, j, v) in &c.real_entries {
                        if i.max(j) >= spec.dim {
                            return Err(SdpError::DimensionMismatch(format!(
                                "entry ({i}, {j}) outside block of dim {}",
                                spec.dim
                            )));
                        }
                        if i == j {
                            add(i, i, v);
                        } else {
                            add(i.min(j), i.max(j), 0.5 * v);
                            add(i.max(j), i.min(j), 0.5 * v);
                        }
                    }
                }
                BlockField::ComplexHermitian => {
                    if !c.real_entries.is_empty() {
                        return Err(SdpError::DimensionMismatch(
                            "real coefficient list on a complex block".into(),
                        ));
                    }
                    let d = spec.dim;
                    for &(i, j, v) in &c.complex_entries {
                        if i.max(j) >= d {
                            return Err(SdpError::DimensionMismatch(format!(
                                "entry ({i}, {j}) outside block of dim {d}"
                            )));
                        }
                        // Re(c Q_ij) = re(c) Re Q_ij - im(c) Im Q_ij, with the
                        // embedding-symmetric extraction of each part
                        let (re, im) = (v.re, v.im);
                        if re != 0.0 {
                            if i == j {
                                add(i, i, 0.5 * re);
                                add(d + i, d + i, 0.5 * re);
                            } else {
                                add(i, j, 0.25 * re);
                                add(j, i, 0.25 * re);
                                add(d + i, d + j, 0.25 * re);
                                add(d + j, d + i, 0.25 * re);
                            }
                        }
                        if im != 0.0 && i != j {
                            add(d + i, j, -0.25 * im);
                            add(j, d + i, -0.25 * im);
                            add(i, d + j, 0.25 * im);
                            add(d + j, i, 0.25 * im);
                        }
                    }
                }
            }
            Ok(acc.into_iter().map(|((i, j), v)| (i, j, v)).collect())
        };

        let mut c_u = vec![0.0; self.free_vars];
        for &(idx, v) in &self.obj_free {
            if idx >= self.free_vars {
                return Err(SdpError::DimensionMismatch(format!(
                    "objective references free var {idx} of {}",
                    self.free_vars
                )));
            }
            c_u[idx] += v;
        }
        let mut c_blocks: Vec<DMatrix<f64>> =
            dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for (block, coeff) in &self.obj_blocks {
            for (i, j, v) in lower_coeff(*block, coeff)? {
                c_blocks[*block][(i, j)] += v;
            }
        }

        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut b = Vec::with_capacity(self.constraints.len());
        for con in &self.constraints {
            for &(idx, _) in &con.free {
                if idx >= self.free_vars {
                    return Err(SdpError::DimensionMismatch(format!(
                        "constraint references free var {idx} of {}",
                        self.free_vars
                    )));
                }
            }
            let mut blocks = Vec::with_capacity(con.blocks.len());
            for (block, coeff) in &con.blocks {
                let entries = lower_coeff(*block, coeff)?;
                if !entries.is_empty() {
                    blocks.push((*block, entries));
                }
            }
            rows.push(solver::RowCoeff {
                free: con.free.clone(),
                blocks,
            });
            b.push(con.rhs);
        }

        Ok(solver::RealConic {
            free: self.free_vars,
            dims,
            c_u: nalgebra::DVector::from_vec(c_u),
            c_blocks,
            rows,
            b: nalgebra::DVector::from_vec(b),
        })
    }

    /// Runs the built-in interior-point solver.
    pub fn solve(&self, opts: &SolverOptions) -> Result<ConicSolution, SdpError> {
        self.solve_with(&InteriorPoint, opts)
    }

    /// Runs an arbitrary backend behind the same interface.
    pub fn solve_with(
        &self,
        backend: &dyn SdpBackend,
        opts: &SolverOptions,
    ) -> Result<ConicSolution, SdpError> {
        backend.solve(self, opts)
    }

    /// De-embeds the real solution back to the declared block fields.
    fn lift(&self, raw: solver::RawSolution) -> ConicSolution {
        let mut block_values = Vec::with_capacity(self.blocks.len());
        for (spec, xe) in self.blocks.iter().zip(&raw.block_values) {
            match spec.field {
                BlockField::RealSymmetric => block_values.push(BlockValue::Real(xe.clone())),
                BlockField::ComplexHermitian => {
                    let d = spec.dim;
                    let mut q = DMatrix::<Complex64>::zeros(d, d);
                    for i in 0..d {
                        for j in 0..d {
                            let re = 0.5 * (xe[(i, j)] + xe[(d + i, d + j)]);
                            let im = 0.5 * (xe[(d + i, j)] - xe[(i, d + j)]);
                            q[(i, j)] = Complex64::new(re, im);
                        }
                    }
                    block_values.push(BlockValue::Complex(q));
                }
            }
        }
        ConicSolution {
            free_values: raw.free_values,
            block_values,
            multipliers: raw.multipliers,
            objective_value: raw.objective_value,
            status: raw.status,
            residuals: raw.residuals,
            iterations: raw.iterations,
        }
    }
}

/// Solver backend seam: the built-in interior-point method is the
/// reference implementation; alternatives can be swapped in behind the
/// same problem/solution types.
pub trait SdpBackend {
    fn solve(&self, prob: &ConicProblem, opts: &SolverOptions)
        -> Result<ConicSolution, SdpError>;
}

/// The built-in primal-dual interior-point method.
#[derive(Debug, Clone, Copy, Default)]
pub struct InteriorPoint;

impl SdpBackend for InteriorPoint {
    fn solve(
        &self,
        prob: &ConicProblem,
        opts: &SolverOptions,
    ) -> Result<ConicSolution, SdpError> {
        let real = prob.lower()?;
        let raw = solver::solve_real(&real, opts);
        Ok(prob.lift(raw))
    }
}

#[derive(Debug, Clone)]
pub enum BlockValue {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Certificate of primal infeasibility found.
    PrimalInfeasible,
    /// Certificate of dual infeasibility (primal unboundedness) found.
    DualInfeasible,
    /// Iteration limit or numerical breakdown; best iterate returned.
    NumericalFailure,
}

/// Residual summary of a returned solution.
#[derive(Debug, Clone, Copy)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub free_values: Vec<f64>,
    pub block_values: Vec<BlockValue>,
    /// Equality-constraint multipliers (the dual vector `y`).
    pub multipliers: Vec<f64>,
    pub objective_value: f64,
    pub status: SolveStatus,
    pub residuals: Residuals,
    pub iterations: usize,
}

impl ConicSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}
