//! Plot-ready sample grids: equispaced points per interval with the
//! polynomial values and, for minimax results, the `+-c w(x)` envelope.

use crate::docfmt::format_f64;
use chebk_core::{ChebPoly, IntervalUnion, RationalWeight};

/// Rows `x, p` (plus `upper, lower` when an envelope is given), `m` points
/// per interval including both endpoints; deterministic and reproducible
/// bit-for-bit from the same inputs.
pub fn sample_grid(
    k: &IntervalUnion,
    poly: &ChebPoly,
    envelope: Option<(f64, &RationalWeight)>,
    m: usize,
) -> String {
    let mut out = String::new();
    out.push_str(if envelope.is_some() {
        "x,p,upper,lower\n"
    } else {
        "x,p\n"
    });
    for &(a, b) in k.intervals() {
        for i in 0..m {
            let x = if m == 1 {
                a
            } else {
                a + (b - a) * i as f64 / (m - 1) as f64
            };
            out.push_str(&format_f64(x));
            out.push(',');
            out.push_str(&format_f64(poly.eval(x)));
            if let Some((c, w)) = envelope {
                let wx = w.eval(x);
                out.push(',');
                out.push_str(&format_f64(c * wx));
                out.push(',');
                out.push_str(&format_f64(-c * wx));
            }
            out.push('\n');
        }
    }
    out
}
