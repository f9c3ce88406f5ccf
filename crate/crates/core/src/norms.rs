//! Weighted sup and L1 norms of polynomials on interval unions.

use crate::cheb::ChebPoly;
use crate::interval::IntervalUnion;
use crate::quad::integrate_adaptive;
use crate::weight::{RationalWeight, WeightFn};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("weight vanishes or changes sign on the integration domain near x = {0}")]
    WeightVanishes(f64),
}

/// Maximum of `|Omega P / Sigma|` over `[a, b]` together with its argmax,
/// located through the stationary points of the quotient (real roots of
/// `(Omega P)' Sigma - (Omega P) Sigma'`) plus the endpoints.
pub fn sup_norm_weighted(
    p: &ChebPoly,
    w: &RationalWeight,
    a: f64,
    b: f64,
) -> Result<(f64, f64), NormError> {
    if w.sigma().degree().unwrap_or(0) >= 1 {
        if let Some(&x) = w.sigma().real_roots_in(a, b, 1e-12).first() {
            return Err(NormError::WeightVanishes(x));
        }
    }
    let num = w.omega().multiply(p);
    let d = num
        .derivative()
        .multiply(w.sigma())
        .add_scaled(&num.multiply(&w.sigma().derivative()), -1.0);
    let mut candidates = vec![a, b];
    if d.degree().unwrap_or(0) >= 1 {
        candidates.extend(d.real_roots_in(a, b, 1e-12));
    }
    let phi = |x: f64| num.eval(x) / w.sigma().eval(x);
    let mut best = (0.0f64, a);
    for x in candidates {
        let v = phi(x).abs();
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// `max_{x in K} |P(x) / w(x)|` over the whole union.
pub fn sup_norm_on_union(
    p: &ChebPoly,
    w: &RationalWeight,
    k: &IntervalUnion,
) -> Result<(f64, f64), NormError> {
    let mut best = (0.0f64, k.intervals()[0].0);
    for &(a, b) in k.intervals() {
        let (v, x) = sup_norm_weighted(p, w, a, b)?;
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Splits each interval of `K` at the real roots of `p` lying inside it,
/// so integrands involving `|p|` or `sgn(p)` are smooth per piece.
pub fn smooth_pieces(p: &ChebPoly, k: &IntervalUnion) -> Vec<(f64, f64)> {
    let mut pieces = Vec::new();
    for &(a, b) in k.intervals() {
        let mut cuts = vec![a];
        if p.degree().unwrap_or(0) >= 1 {
            for r in p.real_roots_in(a, b, 0.0) {
                if r > *cuts.last().unwrap() + 1e-14 && r < b - 1e-14 {
                    cuts.push(r);
                }
            }
        }
        cuts.push(b);
        for w in cuts.windows(2) {
            pieces.push((w[0], w[1]));
        }
    }
    pieces
}

const L1_ORDER: usize = 64;
const L1_REL_TOL: f64 = 1e-10;

/// `sum_l int_{a_l}^{b_l} |P(t)| / w(t) dt` with root splitting and
/// Gauss-Legendre panels refined by bisection where two levels disagree.
pub fn l1_norm_weighted<W: WeightFn + ?Sized>(
    p: &ChebPoly,
    w: &W,
    k: &IntervalUnion,
) -> Result<f64, NormError> {
    check_weight_positive(w, k)?;
    let mut total = 0.0;
    for (a, b) in smooth_pieces(p, k) {
        let mut f = |x: f64| p.eval(x).abs() / w.weight(x);
        total += integrate_adaptive(&mut f, a, b, L1_ORDER, L1_REL_TOL);
    }
    Ok(total)
}

/// `int_K sgn(P(x)) Q(x) / w(x) dx`, sharing the root-splitting machinery
/// of the L1 norm (the integrand is smooth on each piece).
pub fn signed_integral<W: WeightFn + ?Sized>(
    p: &ChebPoly,
    q: &ChebPoly,
    w: &W,
    k: &IntervalUnion,
) -> Result<f64, NormError> {
    check_weight_positive(w, k)?;
    let mut total = 0.0;
    for (a, b) in smooth_pieces(p, k) {
        let sign = p.eval(0.5 * (a + b)).signum();
        let mut f = |x: f64| sign * q.eval(x) / w.weight(x);
        total += integrate_adaptive(&mut f, a, b, L1_ORDER, L1_REL_TOL);
    }
    Ok(total)
}

fn check_weight_positive<W: WeightFn + ?Sized>(
    w: &W,
    k: &IntervalUnion,
) -> Result<(), NormError> {
    for &(a, b) in k.intervals() {
        for i in 0..=32 {
            let x = a + (b - a) * i as f64 / 32.0;
            let v = w.weight(x);
            if v <= 0.0 || v.is_nan() {
                return Err(NormError::WeightVanishes(x));
            }
        }
    }
    Ok(())
}
