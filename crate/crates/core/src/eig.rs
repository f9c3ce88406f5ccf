//! Eigenvalues of a real upper-Hessenberg matrix by the Francis
//! double-shift QR iteration with exceptional shifts (classic EISPACK
//! `hqr`). Used for colleague-matrix rootfinding, where the exceptional
//! shifts matter: symmetric spectra like {-1, 0, 1} cycle forever under
//! plain double shifts.

use num_complex::Complex64;

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of the upper-Hessenberg matrix `a` (row-major, `n x n`).
/// Returns `None` if the iteration fails to converge.
pub(crate) fn hessenberg_eigenvalues(mut a: Vec<f64>, n: usize) -> Option<Vec<Complex64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Some(Vec::new());
    }
    // 1-based indexing to mirror the reference algorithm
    macro_rules! at {
        ($i:expr, $j:expr) => {
            a[($i - 1) * n + ($j - 1)]
        };
    }

    let mut wr = vec![0.0f64; n + 1];
    let mut wi = vec![0.0f64; n + 1];

    let mut anorm = 0.0f64;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += at!(i, j).abs();
        }
    }
    if anorm == 0.0 {
        return Some(vec![Complex64::new(0.0, 0.0); n]);
    }

    let mut nn = n;
    let mut t = 0.0f64;
    #[allow(unused_assignments)]
    let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
    while nn >= 1 {
        let mut its = 0usize;
        let mut l;
        loop {
            // look for a single small subdiagonal element
            l = nn;
            while l >= 2 {
                let mut s = at!(l - 1, l - 1).abs() + at!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at!(l, l - 1).abs() <= f64::EPSILON * s {
                    at!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let x = at!(nn, nn);
            if l == nn {
                // one root found
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                let y = at!(nn - 1, nn - 1);
                let w = at!(nn, nn - 1) * at!(nn - 1, nn);
                if l == nn - 1 {
                    // two roots found
                    let pp = 0.5 * (y - x);
                    let qq = pp * pp + w;
                    let mut z = qq.abs().sqrt();
                    let x = x + t;
                    if qq >= 0.0 {
                        z = pp + sign(z, pp);
                        wr[nn - 1] = x + z;
                        wr[nn] = wr[nn - 1];
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + pp;
                        wr[nn] = wr[nn - 1];
                        wi[nn] = z;
                        wi[nn - 1] = -z;
                    }
                    nn -= 2;
                } else {
                    // no roots found; continue the iteration
                    if its == 40 {
                        return None;
                    }
                    let mut x = x;
                    let y;
                    let w;
                    if its > 0 && its.is_multiple_of(10) {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            at!(i, i) -= x;
                        }
                        let s = at!(nn, nn - 1).abs() + at!(nn - 1, nn - 2).abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    } else {
                        y = at!(nn - 1, nn - 1);
                        w = at!(nn, nn - 1) * at!(nn - 1, nn);
                    }
                    its += 1;
                    // form shifted Householder seed and look for two
                    // consecutive small subdiagonals
                    let mut m = nn - 2;
                    loop {
                        let z = at!(m, m);
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / at!(m + 1, m) + at!(m, m + 1);
                        q = at!(m + 1, m + 1) - z - rr - ss;
                        r = at!(m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = at!(m, m - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs()
                            * (at!(m - 1, m - 1).abs() + z.abs() + at!(m + 1, m + 1).abs());
                        if u <= f64::EPSILON * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        at!(i, i - 2) = 0.0;
                        if i != m + 2 {
                            at!(i, i - 3) = 0.0;
                        }
                    }
                    // double QR step on rows l..nn, columns m..nn
                    for k in m..=nn - 1 {
                        let mut scale = 0.0;
                        if k != m {
                            p = at!(k, k - 1);
                            q = at!(k + 1, k - 1);
                            r = 0.0;
                            if k != nn - 1 {
                                r = at!(k + 2, k - 1);
                            }
                            scale = p.abs() + q.abs() + r.abs();
                            if scale != 0.0 {
                                p /= scale;
                                q /= scale;
                                r /= scale;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    at!(k, k - 1) = -at!(k, k - 1);
                                }
                            } else {
                                at!(k, k - 1) = -s * scale;
                            }
                            p += s;
                            let x2 = p / s;
                            let y2 = q / s;
                            let z2 = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                let mut pp = at!(k, j) + q * at!(k + 1, j);
                                if k != nn - 1 {
                                    pp += r * at!(k + 2, j);
                                    at!(k + 2, j) -= pp * z2;
                                }
                                at!(k + 1, j) -= pp * y2;
                                at!(k, j) -= pp * x2;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x2 * at!(i, k) + y2 * at!(i, k + 1);
                                if k != nn - 1 {
                                    pp += z2 * at!(i, k + 2);
                                    at!(i, k + 2) -= pp * r;
                                }
                                at!(i, k + 1) -= pp * q;
                                at!(i, k) -= pp;
                            }
                        }
                    }
                }
            }
            if !(l < nn.wrapping_sub(1) && nn >= 1) {
                break;
            }
        }
        if nn == 0 {
            break;
        }
    }

    Some((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig_sorted(a: Vec<f64>, n: usize) -> Vec<Complex64> {
        let mut e = hessenberg_eigenvalues(a, n).unwrap();
        e.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        e
    }

    #[test]
    fn symmetric_spectrum_converges() {
        // the case that cycles under plain double shifts: eigenvalues -1, 0, 1
        let a = vec![0.0, 1.0, 0.0, 0.5, 0.0, 0.5, 0.0, 1.0, 0.0];
        let e = eig_sorted(a, 3);
        assert!((e[0].re + 1.0).abs() < 1e-12 && e[0].im == 0.0);
        assert!(e[1].re.abs() < 1e-12);
        assert!((e[2].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn companion_of_quadratic() {
        // x^2 - 3x + 2: companion [[3, -2], [1, 0]], roots 1 and 2
        let a = vec![3.0, -2.0, 1.0, 0.0];
        let e = eig_sorted(a, 2);
        assert!((e[0].re - 1.0).abs() < 1e-12);
        assert!((e[1].re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_pair() {
        // x^2 + 1: companion [[0, -1], [1, 0]], roots +-i
        let a = vec![0.0, -1.0, 1.0, 0.0];
        let e = eig_sorted(a, 2);
        assert!((e[0].im + 1.0).abs() < 1e-12 && e[0].re.abs() < 1e-12);
        assert!((e[1].im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn larger_hessenberg() {
        // companion matrix of prod (x - k/7), k = 1..6
        let roots: Vec<f64> = (1..=6).map(|k| k as f64 / 7.0).collect();
        let mut coeffs = vec![1.0f64];
        for r in &roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        // coeffs low-to-high, monic degree 6; companion (top row form)
        let n = 6;
        let mut a = vec![0.0; n * n];
        for j in 0..n {
            a[j] = -coeffs[n - 1 - j] / coeffs[n];
        }
        for i in 1..n {
            a[i * n + i - 1] = 1.0;
        }
        let e = eig_sorted(a, n);
        for (got, want) in e.iter().zip(&roots) {
            assert!(got.im.abs() < 1e-9);
            assert!((got.re - want).abs() < 1e-9, "{} vs {}", got.re, want);
        }
    }
}
