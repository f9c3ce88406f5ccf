//! Command-line front end: parses problem documents, dispatches to the
//! library, and emits canonical result documents, certificates and
//! plot-ready sample grids.

pub mod cache;
pub mod docfmt;
pub mod sample;
pub mod spec;

use docfmt::{Document, Value};
use spec::{ProblemSpec, Task};

use chebk_core::capacity::capacity_report;
use chebk_core::first_kind::{
    solve_first_kind_restricted_with, solve_first_kind_with, FirstKindResult,
};
use chebk_core::sdp::{Residuals, SolverOptions};
use chebk_core::second_kind::{
    check_roots, default_moment_degree, orthogonality_certificate, solve_second_kind_with,
    SecondKindResult,
};
use chebk_core::{
    sup_norm_on_union, AffineMap, Basis, ChebPoly, IntervalUnion, RationalWeight, UnitWeight,
};

use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default)]
pub struct RunFlags {
    /// Overrides the task named in the problem document.
    pub task: Option<String>,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
    pub delta_target: Option<f64>,
    pub d: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub verify: bool,
}

#[derive(Debug)]
pub enum RunError {
    /// Malformed input: exit code 1.
    Parse(String),
    /// Infeasible instance or solver breakdown: exit code 2.
    Solver(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Parse(m) => write!(f, "parse error: {m}"),
            RunError::Solver(m) => write!(f, "solver error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

pub struct Execution {
    pub document: Document,
    pub samples_csv: Option<String>,
    /// Post-hoc check violations; non-empty means exit code 3.
    pub verify_failures: Vec<String>,
}

fn parse_err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, RunError> {
    r.map_err(|e| RunError::Parse(e.to_string()))
}

fn solver_err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, RunError> {
    r.map_err(|e| RunError::Solver(e.to_string()))
}

/// The solved problem after optional affine normalization onto `[-1, 1]`.
struct Normalized {
    raw: IntervalUnion,
    k: IntervalUnion,
    /// raw -> normalized; identity when the hull is already `[-1, 1]`.
    map: AffineMap,
    normalized: bool,
    /// Weight on the normalized set (what the solvers see).
    w: RationalWeight,
    /// Weight on the raw set (for envelopes and echoes).
    w_raw: RationalWeight,
    has_weight: bool,
}

impl Normalized {
    fn build(spec: &ProblemSpec) -> Result<Normalized, RunError> {
        let raw = spec.intervals.clone();
        let hull = raw.hull();
        let (k, map, normalized) = if hull == (-1.0, 1.0) {
            (raw.clone(), AffineMap::identity(), false)
        } else {
            let (k, map) = raw.normalize();
            (k, map, true)
        };
        let (w, w_raw, has_weight) = match &spec.weight {
            None => (RationalWeight::one(), RationalWeight::one(), false),
            Some((sigma, omega)) => {
                let w_raw = parse_err(RationalWeight::new(sigma.clone(), omega.clone(), &raw))?;
                let w = if normalized {
                    let (a, b) = hull;
                    parse_err(RationalWeight::new(
                        sigma.transplant(a, b),
                        omega.transplant(a, b),
                        &k,
                    ))?
                } else {
                    w_raw.clone()
                };
                (w, w_raw, true)
            }
        };
        Ok(Normalized { raw, k, map, normalized, w, w_raw, has_weight })
    }

    /// Pulls a monic polynomial on the normalized set back to the raw set.
    fn pull_back(&self, poly: &ChebPoly, n: usize) -> ChebPoly {
        if !self.normalized {
            return poly.clone();
        }
        let s = 1.0 / self.map.scale;
        poly.transplant(self.map.shift - self.map.scale, self.map.shift + self.map.scale)
            .scaled(s.powi(n as i32))
    }

    /// Scale factor carrying sup-norm style values of monic degree-`n`
    /// output back to the raw set.
    fn value_scale(&self, n: usize) -> f64 {
        if self.normalized {
            (1.0 / self.map.scale).powi(n as i32)
        } else {
            1.0
        }
    }

    fn x_back(&self, x: f64) -> f64 {
        if self.normalized {
            self.map.inverse().apply(x)
        } else {
            x
        }
    }
}

fn floats(values: impl IntoIterator<Item = f64>) -> Value {
    Value::List(values.into_iter().map(Value::Float).collect())
}

fn residuals_value(r: &Residuals) -> Value {
    Value::Map(vec![
        ("primal".into(), Value::Float(r.primal)),
        ("dual".into(), Value::Float(r.dual)),
        ("gap".into(), Value::Float(r.gap)),
        ("min_eig".into(), Value::Float(r.min_eigenvalue)),
    ])
}

fn doc_header(doc: &mut Document, task: Task, spec: &ProblemSpec, norm: &Normalized) {
    doc.push("task", Value::Str(task.name().into()));
    doc.push(
        "intervals",
        Value::List(
            norm.raw
                .intervals()
                .iter()
                .map(|&(a, b)| floats([a, b]))
                .collect(),
        ),
    );
    doc.push("degree", Value::Int(spec.degree as i64));
    if spec.rationals_rounded {
        doc.push("rational_rounding", Value::Bool(true));
    }
    if norm.normalized {
        doc.push(
            "normalization",
            Value::Map(vec![
                ("scale".into(), Value::Float(norm.map.scale)),
                ("shift".into(), Value::Float(norm.map.shift)),
            ]),
        );
        doc.push(
            "normalized_intervals",
            Value::List(
                norm.k
                    .intervals()
                    .iter()
                    .map(|&(a, b)| floats([a, b]))
                    .collect(),
            ),
        );
    }
    if norm.has_weight {
        doc.push(
            "weight",
            Value::Map(vec![
                ("sigma_t".into(), floats(norm.w_raw.sigma().coeffs().iter().copied())),
                ("omega_t".into(), floats(norm.w_raw.omega().coeffs().iter().copied())),
            ]),
        );
    }
}

fn push_poly(doc: &mut Document, poly: &ChebPoly) {
    doc.push("coeffs_t", floats(poly.coeffs().iter().copied()));
    doc.push("coeffs_monomial", floats(poly.to_monomial()));
}

fn push_first_kind(
    doc: &mut Document,
    result: &FirstKindResult,
    norm: &Normalized,
    n: usize,
) -> (ChebPoly, f64) {
    let poly_raw = norm.pull_back(&result.poly, n);
    let t_raw = result.t_value * norm.value_scale(n);
    doc.push("t_value", Value::Float(t_raw));
    push_poly(doc, &poly_raw);
    doc.push(
        "normalized_t",
        floats(poly_raw.scaled(1.0 / t_raw).coeffs().iter().copied()),
    );
    doc.push(
        "equioscillation_x",
        floats(result.equioscillation.iter().map(|&(x, _)| norm.x_back(x))),
    );
    doc.push(
        "equioscillation_sign",
        Value::List(
            result
                .equioscillation
                .iter()
                .map(|&(_, s)| Value::Int(s as i64))
                .collect(),
        ),
    );
    doc.push("residuals", residuals_value(&result.residuals));
    doc.push("iterations", Value::Int(result.iterations as i64));
    (poly_raw, t_raw)
}

fn push_second_kind(
    doc: &mut Document,
    result: &SecondKindResult,
    norm: &Normalized,
    n: usize,
) -> ChebPoly {
    let poly_raw = norm.pull_back(&result.poly, n);
    // integrals over the raw set scale with one extra power of the length
    let vscale = norm.value_scale(n)
        * if norm.normalized {
            1.0 / norm.map.scale
        } else {
            1.0
        };
    doc.push("d", Value::Int(result.d as i64));
    doc.push("ersatz_value", Value::Float(result.ersatz_value * vscale));
    doc.push("l1_value", Value::Float(result.l1_value * vscale));
    doc.push("delta", Value::Float(result.delta));
    push_poly(doc, &poly_raw);
    let head = result.d.min(10);
    doc.push(
        "moments",
        Value::List(
            result
                .moment_vectors
                .iter()
                .enumerate()
                .map(|(l, (plus, minus))| {
                    Value::Map(vec![
                        ("interval".into(), Value::Int(l as i64)),
                        ("plus".into(), floats(plus.iter().copied().take(head + 1))),
                        ("minus".into(), floats(minus.iter().copied().take(head + 1))),
                    ])
                })
                .collect(),
        ),
    );
    let report = check_roots(&poly_raw, &norm.raw);
    doc.push("roots_re", floats(report.roots.iter().map(|z| z.re)));
    doc.push("roots_im", floats(report.roots.iter().map(|z| z.im)));
    doc.push(
        "roots_inside",
        Value::List(report.inside.iter().map(|&b| Value::Bool(b)).collect()),
    );
    doc.push("roots_real_count", Value::Int(report.real_count as i64));
    if report.min_separation.is_finite() {
        doc.push(
            "roots_min_separation",
            Value::Float(report.min_separation),
        );
    }
    doc.push("residuals", residuals_value(&result.residuals));
    doc.push("iterations", Value::Int(result.iterations as i64));
    poly_raw
}

fn j_matrices(
    norm: &Normalized,
    n: usize,
    d: usize,
) -> Result<Vec<nalgebra::DMatrix<f64>>, RunError> {
    let dir = cache::cache_dir();
    let fp = cache::weight_fingerprint(&norm.w);
    let mut out = Vec::with_capacity(norm.k.count());
    for &(a, b) in norm.k.intervals() {
        let key = cache::JCacheKey { a, b, d, n, fingerprint: fp };
        if let Some(dir) = dir.as_deref() {
            if let Some(m) = cache::load(dir, &key) {
                out.push(m);
                continue;
            }
        }
        let m = if norm.w.is_unit() {
            solver_err(chebk_core::second_kind::build_j(a, b, d, n, &UnitWeight))?
        } else {
            solver_err(chebk_core::second_kind::build_j(a, b, d, n, &norm.w))?
        };
        if let Some(dir) = dir.as_deref() {
            cache::store(dir, &key, &m);
        }
        out.push(m);
    }
    Ok(out)
}

/// Runs a problem document through the library; pure except for the
/// J-matrix cache. The returned document is deterministic.
pub fn execute(input: &str, flags: &RunFlags) -> Result<Execution, RunError> {
    let input_doc = parse_err(Document::parse(input))?;
    // the --task flag overrides the task named in the document; the
    // document itself is left alone so a sample run can still see which
    // task produced its input
    let task = match &flags.task {
        Some(name) => Task::parse(name)
            .ok_or_else(|| RunError::Parse(format!("unknown task '{name}'")))?,
        None => Task::parse(
            input_doc
                .get("task")
                .and_then(Value::as_str)
                .ok_or(RunError::Parse("missing 'task'".into()))?,
        )
        .ok_or(RunError::Parse("unknown task".into()))?,
    };

    if task == Task::Sample {
        return execute_sample(&input_doc, flags);
    }

    let spec = parse_err(ProblemSpec::from_document(&input_doc))?;
    let norm = Normalized::build(&spec)?;
    let mut opts = SolverOptions::default();
    if let Some(tol) = flags.tol {
        opts.tol = tol;
        opts.infeas_tol = tol;
    }
    if let Some(mi) = flags.max_iter {
        opts.max_iter = mi;
    }

    let mut doc = Document::new();
    let mut verify_failures = Vec::new();
    let mut grid_inputs: Option<(ChebPoly, Option<f64>)> = None;
    let n = spec.degree;

    match task {
        Task::Cheb1 => {
            let r = solver_err(solve_first_kind_with(&norm.k, &norm.w, n, &opts))?;
            doc_header(&mut doc, task, &spec, &norm);
            let (poly_raw, t_raw) = push_first_kind(&mut doc, &r, &norm, n);
            if flags.verify {
                verify_first_kind(&poly_raw, t_raw, &norm, n, &r, &mut verify_failures);
            }
            grid_inputs = Some((poly_raw, Some(t_raw)));
        }
        Task::Cheb1Restricted => {
            let r = solver_err(solve_first_kind_restricted_with(&norm.k, &norm.w, n, &opts))?;
            doc_header(&mut doc, task, &spec, &norm);
            let (poly_raw, t_raw) = push_first_kind(&mut doc, &r.result, &norm, n);
            doc.push(
                "sign_pattern",
                Value::List(
                    r.sign_pattern.iter().map(|&s| Value::Int(s as i64)).collect(),
                ),
            );
            doc.push("verified", Value::Bool(r.verified));
            if !r.verified {
                verify_failures.push(
                    "restricted solution has a root strictly inside a gap (verified = false)"
                        .into(),
                );
            }
            if flags.verify {
                // the (N+1)-alternation characterization applies to the
                // unconstrained optimum, so only the norm cross-check and
                // monicity are enforced here
                verify_minimax_value(&poly_raw, t_raw, &norm, &mut verify_failures);
            }
            grid_inputs = Some((poly_raw, Some(t_raw)));
        }
        Task::Cheb2 => {
            let (result, history) = run_cheb2(&spec, &norm, flags, &opts)?;
            doc_header(&mut doc, task, &spec, &norm);
            let poly_raw = push_second_kind(&mut doc, &result, &norm, n);
            if let Some((ds, deltas, reached)) = history {
                doc.push(
                    "delta_history_d",
                    Value::List(ds.into_iter().map(|d| Value::Int(d as i64)).collect()),
                );
                doc.push("delta_history", floats(deltas));
                doc.push("target_reached", Value::Bool(reached));
                if !reached {
                    verify_failures.push("delta target not reached within d_max".into());
                }
            }
            if flags.verify {
                verify_second_kind(&result, &poly_raw, &norm, &mut verify_failures);
            }
            grid_inputs = Some((poly_raw, None));
        }
        Task::Capacity => {
            let rep = solver_err(capacity_report(&norm.k, n))?;
            doc_header(&mut doc, task, &spec, &norm);
            let s = 1.0 / norm.map.scale;
            doc.push(
                "t_value",
                Value::Float(rep.sup.raw_value * norm.value_scale(n)),
            );
            doc.push("l2_value", Value::Float(rep.l2.raw_value));
            let scale_est = if norm.normalized { s } else { 1.0 };
            doc.push("estimate_sup", Value::Float(rep.sup.estimate * scale_est));
            doc.push("estimate_l2", Value::Float(rep.l2.estimate * scale_est));
            doc.push("chain_lower", Value::Float(rep.chain_lower));
            doc.push("chain_upper", Value::Float(rep.chain_upper));
            doc.push("chain_holds", Value::Bool(rep.chain_holds(1e-9)));
            doc.push(
                "conditioning_warning",
                Value::Bool(rep.sup.conditioning_warning),
            );
            if flags.verify && !rep.chain_holds(1e-9) {
                verify_failures.push("capacity inequality chain violated".into());
            }
        }
        Task::Sample => unreachable!(),
    }

    let samples_csv = match (flags.samples.or(spec.samples), grid_inputs) {
        (Some(m), Some((poly, t))) if m > 0 => {
            let envelope = t.map(|t| (t, &norm.w_raw));
            Some(sample::sample_grid(&norm.raw, &poly, envelope, m))
        }
        _ => None,
    };

    Ok(Execution { document: doc, samples_csv, verify_failures })
}

type Cheb2History = Option<(Vec<usize>, Vec<f64>, bool)>;

fn run_cheb2(
    spec: &ProblemSpec,
    norm: &Normalized,
    flags: &RunFlags,
    opts: &SolverOptions,
) -> Result<(SecondKindResult, Cheb2History), RunError> {
    let n = spec.degree;
    let delta_target = flags.delta_target.or(spec.delta_target);
    let d0 = flags
        .d
        .or(spec.moment_degree)
        .unwrap_or_else(|| default_moment_degree(n))
        .max(n);
    match delta_target {
        None => {
            let js = j_matrices(norm, n, d0)?;
            let r = solver_err(solve_second_kind_with(
                &norm.k,
                &norm.w,
                n,
                d0,
                opts,
                Some(&js),
            ))?;
            Ok((r, None))
        }
        Some(target) => {
            // escalation by doubling, with the J matrices cached per degree
            let d_max = 200;
            let mut d = d0.min(d_max);
            let mut ds = Vec::new();
            let mut deltas = Vec::new();
            loop {
                let js = j_matrices(norm, n, d)?;
                let r = solver_err(solve_second_kind_with(
                    &norm.k,
                    &norm.w,
                    n,
                    d,
                    opts,
                    Some(&js),
                ))?;
                ds.push(d);
                deltas.push(r.delta);
                if r.delta <= target {
                    return Ok((r, Some((ds, deltas, true))));
                }
                if d * 2 > d_max {
                    return Ok((r, Some((ds, deltas, false))));
                }
                d *= 2;
            }
        }
    }
}

fn execute_sample(result_doc: &Document, flags: &RunFlags) -> Result<Execution, RunError> {
    let source_task = result_doc
        .get("source_task")
        .or_else(|| result_doc.get("task"))
        .and_then(Value::as_str)
        .ok_or(RunError::Parse("result document missing 'task'".into()))?;
    // the input to a `sample` invocation is a completed result document
    let envelope_kind = match source_task {
        "cheb1" | "cheb1-restricted" => true,
        "cheb2" => false,
        other => {
            return Err(RunError::Parse(format!(
                "cannot sample a '{other}' document; need cheb1, cheb1-restricted or cheb2"
            )))
        }
    };
    let intervals = result_doc
        .get("intervals")
        .and_then(Value::as_list)
        .ok_or(RunError::Parse("result document missing 'intervals'".into()))?;
    let mut pairs = Vec::new();
    for p in intervals {
        let p = p
            .as_list()
            .filter(|p| p.len() == 2)
            .ok_or(RunError::Parse("bad interval in result document".into()))?;
        pairs.push((
            p[0].as_f64().ok_or(RunError::Parse("bad endpoint".into()))?,
            p[1].as_f64().ok_or(RunError::Parse("bad endpoint".into()))?,
        ));
    }
    let k = parse_err(IntervalUnion::new(&pairs))?;
    let coeffs = result_doc
        .get("coeffs_t")
        .and_then(Value::as_list)
        .ok_or(RunError::Parse("result document missing 'coeffs_t'".into()))?;
    let coeffs: Option<Vec<f64>> = coeffs.iter().map(Value::as_f64).collect();
    let poly = ChebPoly::new(
        Basis::T,
        coeffs.ok_or(RunError::Parse("bad coeffs_t".into()))?,
    );
    let weight = match result_doc.get("weight") {
        None => RationalWeight::one(),
        Some(v) => {
            let get = |key: &str| -> Result<ChebPoly, RunError> {
                let list = v
                    .get(key)
                    .and_then(Value::as_list)
                    .ok_or(RunError::Parse(format!("weight missing '{key}'")))?;
                let c: Option<Vec<f64>> = list.iter().map(Value::as_f64).collect();
                Ok(ChebPoly::new(
                    Basis::T,
                    c.ok_or(RunError::Parse("bad weight coeffs".into()))?,
                ))
            };
            parse_err(RationalWeight::new(get("sigma_t")?, get("omega_t")?, &k))?
        }
    };
    let envelope = if envelope_kind {
        let t = result_doc
            .get("t_value")
            .and_then(Value::as_f64)
            .ok_or(RunError::Parse("result document missing 't_value'".into()))?;
        Some((t, &weight))
    } else {
        None
    };
    let m = flags.samples.unwrap_or(200).max(1);
    let csv = sample::sample_grid(&k, &poly, envelope, m);

    let mut doc = Document::new();
    doc.push("task", Value::Str("sample".into()));
    doc.push("source_task", Value::Str(source_task.into()));
    doc.push("points_per_interval", Value::Int(m as i64));
    doc.push("rows", Value::Int((k.count() * m) as i64));
    Ok(Execution { document: doc, samples_csv: Some(csv), verify_failures: Vec::new() })
}

fn verify_minimax_value(
    poly_raw: &ChebPoly,
    t_raw: f64,
    norm: &Normalized,
    failures: &mut Vec<String>,
) {
    match sup_norm_on_union(poly_raw, &norm.w_raw, &norm.raw) {
        Ok((sup, _)) => {
            if (sup - t_raw).abs() > 1e-6 * t_raw {
                failures.push(format!(
                    "sup norm cross-check failed: {sup} vs t_value {t_raw}"
                ));
            }
        }
        Err(e) => failures.push(format!("sup norm cross-check errored: {e}")),
    }
    let mono = poly_raw.to_monomial();
    if (mono.last().copied().unwrap_or(0.0) - 1.0).abs() > 1e-9 {
        failures.push("result polynomial is not monic".into());
    }
}

fn verify_first_kind(
    poly_raw: &ChebPoly,
    t_raw: f64,
    norm: &Normalized,
    n: usize,
    result: &FirstKindResult,
    failures: &mut Vec<String>,
) {
    verify_minimax_value(poly_raw, t_raw, norm, failures);
    if result.equioscillation.len() < n + 1 {
        failures.push(format!(
            "only {} alternation points, expected at least {}",
            result.equioscillation.len(),
            n + 1
        ));
    }
}

fn verify_second_kind(
    result: &SecondKindResult,
    poly_raw: &ChebPoly,
    norm: &Normalized,
    failures: &mut Vec<String>,
) {
    if result.ersatz_value > result.l1_value + 1e-9 {
        failures.push(format!(
            "sandwich violated: ersatz {} > l1 {}",
            result.ersatz_value, result.l1_value
        ));
    }
    if !(-1e-9..1.0).contains(&result.delta) {
        failures.push(format!("delta out of range: {}", result.delta));
    }
    if result.delta <= 1e-4 {
        match orthogonality_certificate(poly_raw, &norm.raw, &norm.w_raw) {
            Ok(cert) => {
                let bound = 10.0 * result.delta * result.l1_value;
                for (j, v) in cert.iter().enumerate() {
                    if v.abs() > bound {
                        failures.push(format!(
                            "orthogonality certificate {j} = {v} exceeds {bound}"
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("certificate integration failed: {e}")),
        }
    }
    let mono = poly_raw.to_monomial();
    if (mono.last().copied().unwrap_or(0.0) - 1.0).abs() > 1e-9 {
        failures.push("result polynomial is not monic".into());
    }
}

/// File-level driver: reads the problem document, writes the result (and the
/// sample grid when requested) and returns the process exit code.
pub fn run_file(spec_path: &Path, flags: &RunFlags) -> i32 {
    let started = std::time::Instant::now();
    let input = match std::fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", spec_path.display());
            return 1;
        }
    };
    match execute(&input, flags) {
        Err(e @ RunError::Parse(_)) => {
            eprintln!("error: {e}");
            1
        }
        Err(e @ RunError::Solver(_)) => {
            eprintln!("error: {e}");
            2
        }
        Ok(mut exec) => {
            exec.document
                .comment(&format!("elapsed_ms = {}", started.elapsed().as_millis()));
            let out_path = flags
                .out
                .clone()
                .unwrap_or_else(|| spec_path.with_extension("result.txt"));
            if let Err(e) = std::fs::write(&out_path, exec.document.to_text()) {
                eprintln!("error: cannot write {}: {e}", out_path.display());
                return 1;
            }
            println!("wrote {}", out_path.display());
            if let Some(csv) = &exec.samples_csv {
                let sample_path = out_path.with_extension("samples.csv");
                if let Err(e) = std::fs::write(&sample_path, csv) {
                    eprintln!("error: cannot write {}: {e}", sample_path.display());
                    return 1;
                }
                println!("wrote {}", sample_path.display());
            }
            if exec.verify_failures.is_empty() {
                0
            } else {
                for f in &exec.verify_failures {
                    eprintln!("verification: {f}");
                }
                3
            }
        }
    }
}
