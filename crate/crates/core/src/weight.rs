//! Weight functions: a trait for anything evaluable and the rational
//! weight `w = Sigma / Omega` used by the minimax solver.

use crate::cheb::{Basis, ChebPoly};
use crate::interval::IntervalUnion;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight numerator vanishes on K near x = {0}")]
    SigmaVanishes(f64),
    #[error("weight denominator vanishes on K near x = {0}")]
    OmegaVanishes(f64),
    #[error("weight is not positive on K (value {value} at x = {x})")]
    NotPositive { x: f64, value: f64 },
    #[error("weight numerator and denominator must be nonzero polynomials")]
    ZeroPart,
}

/// A positive, continuous weight evaluable pointwise.
pub trait WeightFn {
    fn weight(&self, x: f64) -> f64;

    /// Exactly the constant weight 1; enables closed-form shortcuts.
    fn is_unit(&self) -> bool {
        false
    }
}

impl<F: Fn(f64) -> f64> WeightFn for F {
    fn weight(&self, x: f64) -> f64 {
        self(x)
    }
}

/// The constant weight `w = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitWeight;

impl WeightFn for UnitWeight {
    fn weight(&self, _x: f64) -> f64 {
        1.0
    }

    fn is_unit(&self) -> bool {
        true
    }
}

/// `w = Sigma / Omega` with both polynomials positive on each interval
/// of the set; checked at construction by rootfinding and sign sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalWeight {
    sigma: ChebPoly,
    omega: ChebPoly,
}

impl RationalWeight {
    pub fn new(
        sigma: ChebPoly,
        omega: ChebPoly,
        k: &IntervalUnion,
    ) -> Result<Self, WeightError> {
        assert_eq!(sigma.basis(), Basis::T);
        assert_eq!(omega.basis(), Basis::T);
        if sigma.is_zero() || omega.is_zero() {
            return Err(WeightError::ZeroPart);
        }
        for &(a, b) in k.intervals() {
            check_positive(&sigma, a, b, true)?;
            check_positive(&omega, a, b, false)?;
        }
        Ok(Self { sigma, omega })
    }

    pub fn one() -> Self {
        Self {
            sigma: ChebPoly::constant(1.0),
            omega: ChebPoly::constant(1.0),
        }
    }

    /// Re-checks positivity of both parts on a (possibly different) set.
    pub fn validate_on(&self, k: &IntervalUnion) -> Result<(), WeightError> {
        for &(a, b) in k.intervals() {
            check_positive(&self.sigma, a, b, true)?;
            check_positive(&self.omega, a, b, false)?;
        }
        Ok(())
    }

    pub fn is_unit(&self) -> bool {
        self.sigma.coeffs() == [1.0] && self.omega.coeffs() == [1.0]
    }

    pub fn sigma(&self) -> &ChebPoly {
        &self.sigma
    }

    pub fn omega(&self) -> &ChebPoly {
        &self.omega
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sigma.eval(x) / self.omega.eval(x)
    }
}

impl WeightFn for RationalWeight {
    fn weight(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn is_unit(&self) -> bool {
        RationalWeight::is_unit(self)
    }
}

fn check_positive(p: &ChebPoly, a: f64, b: f64, is_sigma: bool) -> Result<(), WeightError> {
    let vanish = |x: f64| {
        if is_sigma {
            WeightError::SigmaVanishes(x)
        } else {
            WeightError::OmegaVanishes(x)
        }
    };
    if p.degree().unwrap_or(0) >= 1 {
        if let Some(&x) = p.real_roots_in(a, b, 1e-12).first() {
            return Err(vanish(x));
        }
    }
    // sign sampling; roots inside are already excluded, so any nonpositive
    // sample means the polynomial is nonpositive on the whole interval
    for i in 0..=16 {
        let x = a + (b - a) * i as f64 / 16.0;
        let v = p.eval(x);
        if v <= 0.0 {
            return Err(WeightError::NotPositive { x, value: v });
        }
    }
    Ok(())
}

/// The example weight used throughout the tests,
/// `w(x) = (1 + x^2) / (2 - x^2)`.
pub fn example_weight(k: &IntervalUnion) -> RationalWeight {
    let sigma = ChebPoly::from_monomial(&[1.0, 0.0, 1.0]);
    let omega = ChebPoly::from_monomial(&[2.0, 0.0, -1.0]);
    RationalWeight::new(sigma, omega, k).expect("example weight is positive on [-1, 1]")
}
