//! Problem specifications: parsing and validation of input documents.

use crate::docfmt::{Document, Value};
use chebk_core::{Basis, ChebPoly, IntervalUnion, RationalWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Cheb1,
    Cheb1Restricted,
    Cheb2,
    Capacity,
    Sample,
}

impl Task {
    pub fn parse(s: &str) -> Option<Task> {
        match s {
            "cheb1" => Some(Task::Cheb1),
            "cheb1-restricted" => Some(Task::Cheb1Restricted),
            "cheb2" => Some(Task::Cheb2),
            "capacity" => Some(Task::Capacity),
            "sample" => Some(Task::Sample),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Cheb1 => "cheb1",
            Task::Cheb1Restricted => "cheb1-restricted",
            Task::Cheb2 => "cheb2",
            Task::Capacity => "capacity",
            Task::Sample => "sample",
        }
    }
}

/// A parsed and validated problem, ready for dispatch.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub task: Task,
    /// The set as given (possibly not normalized to hull [-1, 1]).
    pub intervals: IntervalUnion,
    /// Weight in T coefficients; `None` means the unit weight.
    pub weight: Option<(ChebPoly, ChebPoly)>,
    pub degree: usize,
    pub moment_degree: Option<usize>,
    pub delta_target: Option<f64>,
    pub samples: Option<usize>,
    /// Whether any endpoint or coefficient was given as a rational and
    /// rounded to binary floating point at ingestion.
    pub rationals_rounded: bool,
}

#[derive(Debug)]
pub struct SpecError(pub String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError(msg.into()))
}

impl ProblemSpec {
    pub fn from_document(doc: &Document) -> Result<ProblemSpec, SpecError> {
        let task_name = doc
            .get("task")
            .and_then(Value::as_str)
            .ok_or(SpecError("missing 'task'".into()))?;
        let task = Task::parse(task_name)
            .ok_or_else(|| SpecError(format!("unknown task '{task_name}'")))?;

        let intervals_v = doc
            .get("intervals")
            .ok_or(SpecError("missing 'intervals'".into()))?;
        let mut rationals_rounded = intervals_v.contains_rational();
        let mut pairs = Vec::new();
        for item in intervals_v
            .as_list()
            .ok_or(SpecError("'intervals' must be a list".into()))?
        {
            let pair = item
                .as_list()
                .filter(|p| p.len() == 2)
                .ok_or(SpecError("each interval must be a pair [a, b]".into()))?;
            let a = pair[0]
                .as_f64()
                .ok_or(SpecError("interval endpoint must be numeric".into()))?;
            let b = pair[1]
                .as_f64()
                .ok_or(SpecError("interval endpoint must be numeric".into()))?;
            pairs.push((a, b));
        }
        let intervals =
            IntervalUnion::new(&pairs).map_err(|e| SpecError(format!("invalid intervals: {e}")))?;

        let weight = match doc.get("weight") {
            None => None,
            Some(v) => {
                rationals_rounded |= v.contains_rational();
                let basis = v
                    .get("basis")
                    .and_then(Value::as_str)
                    .unwrap_or("monomial");
                let parse_poly = |key: &str| -> Result<ChebPoly, SpecError> {
                    let list = v
                        .get(key)
                        .and_then(Value::as_list)
                        .ok_or_else(|| SpecError(format!("weight needs '{key}' list")))?;
                    let coeffs: Option<Vec<f64>> = list.iter().map(Value::as_f64).collect();
                    let coeffs =
                        coeffs.ok_or_else(|| SpecError(format!("non-numeric '{key}'")))?;
                    Ok(match basis {
                        "monomial" => ChebPoly::from_monomial(&coeffs),
                        "chebyshev" => ChebPoly::new(Basis::T, coeffs),
                        other => return err(format!("unknown weight basis '{other}'")),
                    })
                };
                Some((parse_poly("sigma")?, parse_poly("omega")?))
            }
        };

        let degree = match task {
            Task::Sample => doc
                .get("degree")
                .and_then(Value::as_usize)
                .unwrap_or(1),
            _ => doc
                .get("degree")
                .and_then(Value::as_usize)
                .ok_or(SpecError("missing 'degree'".into()))?,
        };

        let moment_degree = doc.get("d").and_then(Value::as_usize);
        let delta_target = doc.get("delta_target").and_then(Value::as_f64);
        let samples = doc.get("samples").and_then(Value::as_usize);

        Ok(ProblemSpec {
            task,
            intervals,
            weight,
            degree,
            moment_degree,
            delta_target,
            samples,
            rationals_rounded,
        })
    }

    /// Builds the validated rational weight on the given (normalized) set;
    /// `None` means the unit weight.
    pub fn weight_on(
        &self,
        k: &IntervalUnion,
    ) -> Result<Option<RationalWeight>, SpecError> {
        match &self.weight {
            None => Ok(None),
            Some((sigma, omega)) => RationalWeight::new(sigma.clone(), omega.clone(), k)
                .map(Some)
                .map_err(|e| SpecError(format!("invalid weight: {e}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_spec() {
        let doc = Document::parse(
            "task = cheb1\nintervals = [[-1, 1]]\ndegree = 5\n",
        )
        .unwrap();
        let spec = ProblemSpec::from_document(&doc).unwrap();
        assert_eq!(spec.task, Task::Cheb1);
        assert_eq!(spec.degree, 5);
        assert!(spec.weight.is_none());
        assert!(!spec.rationals_rounded);
    }

    #[test]
    fn parses_rationals_and_weight() {
        let doc = Document::parse(
            "task = cheb2\nintervals = [[-1, -1/2], [-1/5, 1/5], [1/2, 1]]\ndegree = 5\nweight = { sigma = [1, 0, 1], omega = [2, 0, -1], basis = monomial }\nd = 40\n",
        )
        .unwrap();
        let spec = ProblemSpec::from_document(&doc).unwrap();
        assert_eq!(spec.task, Task::Cheb2);
        assert!(spec.rationals_rounded);
        assert_eq!(spec.intervals.count(), 3);
        assert_eq!(spec.moment_degree, Some(40));
        let (sigma, _) = spec.weight.as_ref().unwrap();
        // 1 + x^2 = 1.5 T_0 + 0.5 T_2
        assert!((sigma.coeff(0) - 1.5).abs() < 1e-15);
        assert!((sigma.coeff(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            "intervals = [[-1, 1]]\ndegree = 3\n",
            "task = cheb1\ndegree = 3\n",
            "task = cheb1\nintervals = [[-1, 1]]\n",
            "task = wat\nintervals = [[-1, 1]]\ndegree = 3\n",
            "task = cheb1\nintervals = [[0.5, 0.2]]\ndegree = 3\n",
        ] {
            let doc = Document::parse(text).unwrap();
            assert!(ProblemSpec::from_document(&doc).is_err(), "{text}");
        }
    }
}
