//! Polynomial arithmetic in the Chebyshev T and U bases: evaluation,
//! products, basis changes, affine transplantation and rootfinding.
//!
//! Everything internal works in T/U coefficients; the monomial basis only
//! appears at the I/O boundary.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChebError {
    #[error("rootfinding requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("eigenvalue iteration failed to converge")]
    EigenFailure,
    #[error("operation requires the {expected:?} basis, got {got:?}")]
    BasisMismatch { expected: Basis, got: Basis },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// First kind, `T_n(cos t) = cos(n t)`.
    T,
    /// Second kind, `U_n(cos t) = sin((n+1) t) / sin(t)`.
    U,
}

/// A polynomial stored as a coefficient vector in the T or U basis.
/// Trailing zero coefficients are trimmed; the zero polynomial has an
/// empty coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebPoly {
    basis: Basis,
    coeffs: Vec<f64>,
}

impl ChebPoly {
    pub fn new(basis: Basis, mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { basis, coeffs }
    }

    pub fn t(coeffs: Vec<f64>) -> Self {
        Self::new(Basis::T, coeffs)
    }

    pub fn u(coeffs: Vec<f64>) -> Self {
        Self::new(Basis::U, coeffs)
    }

    pub fn zero(basis: Basis) -> Self {
        Self { basis, coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Basis::T, vec![c])
    }

    /// The basis element `T_n` (or `U_n`).
    pub fn basis_element(basis: Basis, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { basis, coeffs }
    }

    /// The monic minimax polynomial on `[-1, 1]`: `2^{1-N} T_N` for `N >= 1`,
    /// the constant 1 for `N = 0`.
    pub fn classical_first_kind_monic(n: usize) -> Self {
        if n == 0 {
            return Self::constant(1.0);
        }
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 0.5f64.powi(n as i32 - 1);
        Self { basis: Basis::T, coeffs }
    }

    /// The monic minimal-L1 polynomial on `[-1, 1]`: `2^{-N} U_N`.
    pub fn classical_second_kind_monic(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 0.5f64.powi(n as i32);
        Self { basis: Basis::U, coeffs }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() { None } else { Some(self.coeffs.len() - 1) }
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Coefficient of index `n`, zero beyond the stored degree.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Clenshaw recurrence; valid for any real `x`, backward stable on
    /// `[-1, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let a = &self.coeffs;
        match a.len() {
            0 => 0.0,
            1 => a[0],
            n => {
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for k in (1..n).rev() {
                    let b = 2.0 * x * b1 - b2 + a[k];
                    b2 = b1;
                    b1 = b;
                }
                match self.basis {
                    Basis::T => a[0] - b2 + x * b1,
                    Basis::U => a[0] - b2 + 2.0 * x * b1,
                }
            }
        }
    }

    pub fn scaled(&self, s: f64) -> ChebPoly {
        ChebPoly::new(self.basis, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `self + s * other` (same basis).
    pub fn add_scaled(&self, other: &ChebPoly, s: f64) -> ChebPoly {
        assert_eq!(self.basis, other.basis, "basis mismatch in add_scaled");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, v) in out.iter_mut().enumerate() {
            *v = self.coeff(i) + s * other.coeff(i);
        }
        ChebPoly::new(self.basis, out)
    }

    /// Product of two T-basis polynomials via
    /// `T_m T_n = (T_{m+n} + T_{|m-n|}) / 2`.
    pub fn multiply(&self, other: &ChebPoly) -> ChebPoly {
        assert_eq!(self.basis, Basis::T, "multiply is defined on the T basis");
        assert_eq!(other.basis, Basis::T, "multiply is defined on the T basis");
        if self.is_zero() || other.is_zero() {
            return ChebPoly::zero(Basis::T);
        }
        let (p, q) = (&self.coeffs, &other.coeffs);
        let mut out = vec![0.0; p.len() + q.len() - 1];
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, &qj) in q.iter().enumerate() {
                let v = 0.5 * pi * qj;
                out[i + j] += v;
                out[i.abs_diff(j)] += v;
            }
        }
        ChebPoly::new(Basis::T, out)
    }

    /// Derivative of a T-basis polynomial, returned in the T basis.
    pub fn derivative(&self) -> ChebPoly {
        assert_eq!(self.basis, Basis::T, "derivative is defined on the T basis");
        let a = &self.coeffs;
        if a.len() <= 1 {
            return ChebPoly::zero(Basis::T);
        }
        let n = a.len() - 1;
        let mut b = vec![0.0; n];
        for k in (0..n).rev() {
            let up = if k + 2 < n { b[k + 2] } else { 0.0 };
            b[k] = up + 2.0 * (k as f64 + 1.0) * a[k + 1];
        }
        b[0] *= 0.5;
        ChebPoly::new(Basis::T, b)
    }

    /// An antiderivative with zero constant term.
    pub fn antiderivative(&self) -> ChebPoly {
        assert_eq!(self.basis, Basis::T, "antiderivative is defined on the T basis");
        let a = &self.coeffs;
        if a.is_empty() {
            return ChebPoly::zero(Basis::T);
        }
        let n = a.len() - 1;
        let mut b = vec![0.0; n + 2];
        if n >= 1 || a[0] != 0.0 {
            b[1] = a[0] - self.coeff(2) / 2.0;
        }
        for k in 2..=n + 1 {
            b[k] = (self.coeff(k - 1) - self.coeff(k + 1)) / (2.0 * k as f64);
        }
        ChebPoly::new(Basis::T, b)
    }

    /// Definite integral over `[a, b]` (plain Lebesgue measure), via the
    /// antiderivative; exact up to rounding.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    /// Re-expands a T-basis polynomial in the U basis using
    /// `T_0 = U_0`, `T_1 = U_1 / 2`, `T_n = (U_n - U_{n-2}) / 2`.
    pub fn to_u(&self) -> ChebPoly {
        assert_eq!(self.basis, Basis::T, "to_u takes a T-basis polynomial");
        if self.is_zero() {
            return ChebPoly::zero(Basis::U);
        }
        let mut out = vec![0.0; self.coeffs.len()];
        for (n, &c) in self.coeffs.iter().enumerate() {
            match n {
                0 => out[0] += c,
                1 => out[1] += 0.5 * c,
                _ => {
                    out[n] += 0.5 * c;
                    out[n - 2] -= 0.5 * c;
                }
            }
        }
        ChebPoly::new(Basis::U, out)
    }

    /// Re-expands a U-basis polynomial in the T basis using
    /// `U_n = 2(T_n + T_{n-2} + ...) `, ending at `T_1` (odd) or `T_0`
    /// counted once (even).
    pub fn to_t(&self) -> ChebPoly {
        assert_eq!(self.basis, Basis::U, "to_t takes a U-basis polynomial");
        if self.is_zero() {
            return ChebPoly::zero(Basis::T);
        }
        let mut out = vec![0.0; self.coeffs.len()];
        for (n, &c) in self.coeffs.iter().enumerate() {
            let mut k = n as isize;
            while k >= 0 {
                let w = if k == 0 { 1.0 } else { 2.0 };
                out[k as usize] += w * c;
                k -= 2;
            }
        }
        ChebPoly::new(Basis::T, out)
    }

    /// Restriction to `[a, b]` transplanted onto `[-1, 1]`:
    /// `P_t(x) = P(((b - a) x + a + b) / 2)`, as a T-basis polynomial of the
    /// same degree. Computed by interpolation at Chebyshev extremum points,
    /// which is exact for polynomials.
    pub fn transplant(&self, a: f64, b: f64) -> ChebPoly {
        assert_eq!(self.basis, Basis::T, "transplant takes a T-basis polynomial");
        assert!(a < b, "transplant requires a < b");
        let n = match self.degree() {
            None => return ChebPoly::zero(Basis::T),
            Some(0) => return self.clone(),
            Some(n) => n,
        };
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let values: Vec<f64> = (0..=n)
            .map(|k| {
                let x = (k as f64 * std::f64::consts::PI / n as f64).cos();
                self.eval(half * x + mid)
            })
            .collect();
        ChebPoly::new(Basis::T, cheb_coeffs_from_extrema(&values))
    }

    /// All `deg P` roots from the colleague-matrix eigenvalues. Eigenvalues
    /// with imaginary part at most `1e-10` in magnitude are collapsed to the
    /// real axis.
    pub fn roots(&self) -> Result<Vec<Complex64>, ChebError> {
        let p = match self.basis {
            Basis::T => self.clone(),
            Basis::U => self.to_t(),
        };
        let n = match p.degree() {
            None | Some(0) => return Err(ChebError::ZeroPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(vec![Complex64::new(-p.coeffs[0] / p.coeffs[1], 0.0)]);
        }
        let lead = p.coeffs[n];
        let mut m = DMatrix::<f64>::zeros(n, n);
        m[(0, 1)] = 1.0;
        for k in 1..n - 1 {
            m[(k, k - 1)] = 0.5;
            m[(k, k + 1)] = 0.5;
        }
        m[(n - 1, n - 2)] += 0.5;
        for j in 0..n {
            m[(n - 1, j)] -= 0.5 * p.coeffs[j] / lead;
        }
        balance(&mut m);
        // the colleague matrix has a full last row; its transpose is upper
        // Hessenberg with the same spectrum, which is what hqr wants
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                rows[i * n + j] = m[(j, i)];
            }
        }
        let eig = crate::eig::hessenberg_eigenvalues(rows, n).ok_or(ChebError::EigenFailure)?;
        let mut roots: Vec<Complex64> = eig
            .iter()
            .map(|z| {
                if z.im.abs() <= 1e-10 {
                    Complex64::new(z.re, 0.0)
                } else {
                    *z
                }
            })
            .collect();
        roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        Ok(roots)
    }

    /// Real roots inside `[a - tol, b + tol]`, clamped to `[a, b]`, sorted.
    pub fn real_roots_in(&self, a: f64, b: f64, tol: f64) -> Vec<f64> {
        let roots = match self.roots() {
            Ok(r) => r,
            Err(_) => return Vec::new(),
        };
        let mut xs: Vec<f64> = roots
            .into_iter()
            .filter(|z| z.im == 0.0 && z.re >= a - tol && z.re <= b + tol)
            .map(|z| z.re.clamp(a, b))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// Expansion of `sum m_k x^k` in the T basis.
    pub fn from_monomial(mono: &[f64]) -> ChebPoly {
        let mut acc = ChebPoly::zero(Basis::T);
        // cheb coefficients of x^k, built by repeated multiplication by x
        let mut xk = ChebPoly::constant(1.0);
        let x = ChebPoly::t(vec![0.0, 1.0]);
        for (k, &c) in mono.iter().enumerate() {
            if k > 0 {
                xk = xk.multiply(&x);
            }
            if c != 0.0 {
                acc = acc.add_scaled(&xk, c);
            }
        }
        acc
    }

    /// Monomial coefficients (low to high) of a T-basis polynomial.
    pub fn to_monomial(&self) -> Vec<f64> {
        assert_eq!(self.basis, Basis::T, "to_monomial takes a T-basis polynomial");
        if self.is_zero() {
            return Vec::new();
        }
        let n = self.coeffs.len() - 1;
        // monomial coefficient rows for T_0 .. T_n by the three-term recurrence
        let mut prev = vec![0.0; n + 1];
        let mut cur = vec![0.0; n + 1];
        prev[0] = 1.0;
        if n >= 1 {
            cur[1] = 1.0;
        }
        let mut out = vec![0.0; n + 1];
        out[0] += self.coeffs[0] * prev[0];
        if n >= 1 {
            for (o, c) in out.iter_mut().zip(&cur) {
                *o += self.coeffs[1] * c;
            }
        }
        for k in 2..=n {
            let mut next = vec![0.0; n + 1];
            for i in 0..n {
                next[i + 1] += 2.0 * cur[i];
            }
            for i in 0..=n {
                next[i] -= prev[i];
            }
            for (o, c) in out.iter_mut().zip(&next) {
                *o += self.coeffs[k] * c;
            }
            prev = cur;
            cur = next;
        }
        while out.last() == Some(&0.0) {
            out.pop();
        }
        out
    }
}

/// Chebyshev coefficients of the degree-`n` interpolant through values at
/// the `n + 1` extremum points `cos(k pi / n)` (DCT-I).
fn cheb_coeffs_from_extrema(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    let mut coeffs = vec![0.0; n + 1];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut s = 0.5 * (values[0] + if j % 2 == 0 { values[n] } else { -values[n] });
        for (k, &v) in values.iter().enumerate().take(n).skip(1) {
            s += v * ((j * k) as f64 * std::f64::consts::PI / n as f64).cos();
        }
        *c = 2.0 * s / n as f64;
    }
    coeffs[0] *= 0.5;
    coeffs[n] *= 0.5;
    coeffs
}

/// Matrix of `p -> coeffs(Omega * P)` on T coefficients, of shape
/// `(deg Omega + n + 1) x (n + 1)`; column `j` holds the coefficients of
/// `Omega * T_j`.
pub fn mult_matrix(omega: &ChebPoly, n: usize) -> DMatrix<f64> {
    assert_eq!(omega.basis(), Basis::T);
    let dw = omega.degree().expect("mult_matrix requires a nonzero multiplier");
    let rows = dw + n + 1;
    let mut w = DMatrix::<f64>::zeros(rows, n + 1);
    for j in 0..=n {
        let col = omega.multiply(&ChebPoly::basis_element(Basis::T, j));
        for (i, &c) in col.coeffs().iter().enumerate() {
            w[(i, j)] = c;
        }
    }
    w
}

/// Matrix taking T coefficients of `P` to the U coefficients of the
/// restriction of `P` to `[a, b]` transplanted onto `[-1, 1]`; shape
/// `(n + 1) x (n + 1)`, invertible.
pub fn second_kind_matrix(a: f64, b: f64, n: usize) -> DMatrix<f64> {
    let mut w = DMatrix::<f64>::zeros(n + 1, n + 1);
    for j in 0..=n {
        let col = ChebPoly::basis_element(Basis::T, j).transplant(a, b).to_u();
        for i in 0..=n {
            w[(i, j)] = col.coeff(i);
        }
    }
    w
}

/// Parlett-Reinsch balancing: similarity scaling by powers of two so row
/// and column norms agree, improving eigenvalue conditioning.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix: f64 = 2.0;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / radix {
                f *= radix;
                c *= radix * radix;
            }
            while c > r * radix {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eval_examples() {
        // T_3(0.5) = 4 * 0.125 - 1.5 = -1
        assert_close(ChebPoly::t(vec![0.0, 0.0, 0.0, 1.0]).eval(0.5), -1.0, 1e-15);
        // U_1(0.5) = 2 * 0.5 = 1
        assert_close(ChebPoly::u(vec![0.0, 1.0]).eval(0.5), 1.0, 1e-15);
        // constants
        assert_close(ChebPoly::t(vec![1.0]).eval(0.3), 1.0, 1e-15);
        assert_close(ChebPoly::t(vec![1.0]).eval(7.5), 1.0, 1e-15);
    }

    #[test]
    fn eval_outside_unit_interval() {
        // T_4(2) via cosh identity: cosh(4 * acosh 2)
        let t4 = ChebPoly::basis_element(Basis::T, 4);
        let expect = (4.0 * 2.0f64.acosh()).cosh();
        assert_close(t4.eval(2.0), expect, 1e-9);
    }

    #[test]
    fn multiply_examples() {
        let t1 = ChebPoly::basis_element(Basis::T, 1);
        let p = t1.multiply(&t1);
        assert_eq!(p.coeffs(), &[0.5, 0.0, 0.5]);

        let q = ChebPoly::t(vec![0.3, -0.7, 0.1]);
        assert_eq!(q.multiply(&ChebPoly::constant(1.0)), q);

        // x * x^2 = x^3 = (1/4) T_3 + (3/4) T_1, via the monomial oracle
        let x = ChebPoly::from_monomial(&[0.0, 1.0]);
        let x2 = ChebPoly::from_monomial(&[0.0, 0.0, 1.0]);
        let x3 = x.multiply(&x2);
        assert_close(x3.coeff(3), 0.25, 1e-15);
        assert_close(x3.coeff(1), 0.75, 1e-15);
        assert_close(x3.coeff(0), 0.0, 1e-15);
        assert_close(x3.coeff(2), 0.0, 1e-15);
    }

    #[test]
    fn multiply_matches_pointwise() {
        let p = ChebPoly::t(vec![0.2, -1.0, 0.4, 0.9]);
        let q = ChebPoly::t(vec![-0.5, 0.3, 1.1]);
        let pq = p.multiply(&q);
        for i in 0..=20 {
            let x = -1.0 + 0.1 * i as f64;
            assert_close(pq.eval(x), p.eval(x) * q.eval(x), 1e-12);
        }
    }

    #[test]
    fn mult_matrix_examples() {
        let w = mult_matrix(&ChebPoly::constant(1.0), 3);
        assert_eq!(w, DMatrix::identity(4, 4));

        let w = mult_matrix(&ChebPoly::basis_element(Basis::T, 1), 1);
        // columns: T_1 * T_0 = T_1, T_1 * T_1 = T_0/2 + T_2/2
        let expect = DMatrix::from_row_slice(3, 2, &[0.0, 0.5, 1.0, 0.0, 0.0, 0.5]);
        assert_eq!(w, expect);
    }

    #[test]
    fn mult_matrix_matches_multiply() {
        let omega = ChebPoly::t(vec![1.7, -0.3, 0.08, 0.55]);
        let p = ChebPoly::t(vec![0.2, 0.9, -1.4, 0.0, 0.31]);
        let w = mult_matrix(&omega, 4);
        let v = nalgebra::DVector::from_column_slice(p.coeffs());
        let prod = &w * v;
        let direct = omega.multiply(&p);
        for i in 0..w.nrows() {
            assert_close(prod[i], direct.coeff(i), 1e-13);
        }
    }

    #[test]
    fn transplant_examples() {
        let x = ChebPoly::t(vec![0.0, 1.0]);
        assert_eq!(x.transplant(-1.0, 1.0), x);

        // P = x on [0, 1]: (x + 1)/2
        let t = x.transplant(0.0, 1.0);
        assert_close(t.coeff(0), 0.5, 1e-15);
        assert_close(t.coeff(1), 0.5, 1e-15);

        let t2 = ChebPoly::basis_element(Basis::T, 2);
        let tr = t2.transplant(0.0, 1.0);
        for &x in &[-0.9, -0.4, 0.05, 0.3, 0.99] {
            let pullback = 0.5 * x + 0.5;
            assert_close(tr.eval(x), t2.eval(pullback), 1e-13);
        }
    }

    #[test]
    fn t_to_u_examples() {
        assert_eq!(ChebPoly::t(vec![1.0]).to_u().coeffs(), &[1.0]);
        let u = ChebPoly::basis_element(Basis::T, 2).to_u();
        assert_eq!(u.coeffs(), &[-0.5, 0.0, 0.5]);
    }

    #[test]
    fn u_t_round_trip() {
        let p = ChebPoly::t(vec![0.7, -0.2, 1.1, 0.0, -0.9, 0.33]);
        let back = p.to_u().to_t();
        for i in 0..6 {
            assert_close(back.coeff(i), p.coeff(i), 1e-12);
        }
        for &x in &[-0.95, -0.3, 0.12, 0.78] {
            assert_close(p.to_u().eval(x), p.eval(x), 1e-13);
        }
    }

    #[test]
    fn second_kind_matrix_examples() {
        let w = second_kind_matrix(-1.0, 1.0, 1);
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]);
        assert_eq!(w, expect);

        // action agrees with transplant + to_u
        let p = ChebPoly::t(vec![0.4, -1.2, 0.9, 0.05]);
        let (a, b) = (-0.7, 0.25);
        let w = second_kind_matrix(a, b, 3);
        let v = nalgebra::DVector::from_column_slice(p.coeffs());
        let got = &w * v;
        let want = p.transplant(a, b).to_u();
        for i in 0..4 {
            assert_close(got[i], want.coeff(i), 1e-13);
        }
    }

    #[test]
    fn second_kind_matrix_invertible() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = -1.0 + 1.6 * rnd();
            let b = (a + 0.2 + (1.0 - a - 0.2) * rnd()).min(1.0);
            let w = second_kind_matrix(a, b, 6);
            let sv = w.singular_values();
            // scale-free invertibility: det alone shrinks like ((b-a)/2)^21
            assert!(
                sv.min() > 1e-12 * sv.max(),
                "singular for [{a}, {b}]: {:?}",
                sv
            );
        }
    }

    #[test]
    fn roots_examples() {
        let r = ChebPoly::basis_element(Basis::T, 2).roots().unwrap();
        let s = 0.5f64.sqrt();
        assert_close(r[0].re, -s, 1e-12);
        assert_close(r[1].re, s, 1e-12);

        // x^3 - x
        let p = ChebPoly::from_monomial(&[0.0, -1.0, 0.0, 1.0]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 3);
        assert_close(r[0].re, -1.0, 1e-10);
        assert_close(r[1].re, 0.0, 1e-10);
        assert_close(r[2].re, 1.0, 1e-10);

        assert!(ChebPoly::zero(Basis::T).roots().is_err());
        assert!(ChebPoly::constant(3.0).roots().is_err());
    }

    #[test]
    fn roots_residual_small() {
        let p = ChebPoly::t(vec![0.31, -0.77, 0.2, 1.3, -0.44, 0.12, 0.8]);
        let norm: f64 = p.coeffs().iter().map(|c| c.abs()).sum();
        for z in p.roots().unwrap() {
            // complex Clenshaw via Horner on monomial form for the residual
            let mono = p.to_monomial();
            let mut v = Complex64::new(0.0, 0.0);
            for &c in mono.iter().rev() {
                v = v * z + c;
            }
            assert!(v.norm() <= 1e-8 * norm, "residual {} at {}", v.norm(), z);
        }
    }

    #[test]
    fn roots_of_product_union() {
        let p = ChebPoly::from_monomial(&[0.5, 1.0]); // x + 0.5
        let q = ChebPoly::from_monomial(&[-0.06, 0.1, 1.0]); // (x+0.3)(x-0.2)
        let mut all: Vec<f64> = p
            .multiply(&q)
            .roots()
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        all.sort_by(f64::total_cmp);
        let expect = [-0.5, -0.3, 0.2];
        for (got, want) in all.iter().zip(expect) {
            assert_close(*got, want, 1e-7);
        }
    }

    #[test]
    fn derivative_and_antiderivative() {
        let p = ChebPoly::t(vec![0.2, -1.0, 0.4, 0.9, -0.3]);
        let dp = p.derivative();
        for &x in &[-0.8, -0.1, 0.33, 0.9] {
            let h = 1e-6;
            let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
            assert_close(dp.eval(x), fd, 1e-7);
        }
        let back = p.antiderivative().derivative();
        for i in 0..5 {
            assert_close(back.coeff(i), p.coeff(i), 1e-13);
        }
        // integral of T_0 over [-1,1] is 2; of T_1 is 0; of T_2 is -2/3
        assert_close(ChebPoly::constant(1.0).integral(-1.0, 1.0), 2.0, 1e-15);
        assert_close(ChebPoly::basis_element(Basis::T, 1).integral(-1.0, 1.0), 0.0, 1e-15);
        assert_close(
            ChebPoly::basis_element(Basis::T, 2).integral(-1.0, 1.0),
            -2.0 / 3.0,
            1e-14,
        );
    }

    #[test]
    fn monomial_round_trip() {
        // x^3 = (1/4) T_3 + (3/4) T_1
        let p = ChebPoly::from_monomial(&[0.0, 0.0, 0.0, 1.0]);
        assert_close(p.coeff(3), 0.25, 1e-15);
        assert_close(p.coeff(1), 0.75, 1e-15);

        // T_2 = 2x^2 - 1
        let m = ChebPoly::basis_element(Basis::T, 2).to_monomial();
        assert_eq!(m, vec![-1.0, 0.0, 2.0]);

        let mono: Vec<f64> = (0..=10).map(|k| ((k * k) as f64).sin()).collect();
        let round = ChebPoly::from_monomial(&mono).to_monomial();
        for (got, want) in round.iter().zip(&mono) {
            assert_close(*got, *want, 1e-12);
        }
    }

    #[test]
    fn classical_monic_polynomials() {
        let p = ChebPoly::classical_first_kind_monic(5);
        let mono = p.to_monomial();
        // x^5 - (5/4) x^3 + (5/16) x
        assert_close(mono[5], 1.0, 1e-15);
        assert_close(mono[3], -1.25, 1e-15);
        assert_close(mono[1], 0.3125, 1e-15);

        let u = ChebPoly::classical_second_kind_monic(3).to_t();
        let mono = u.to_monomial();
        // x^3 - x/2
        assert_close(mono[3], 1.0, 1e-15);
        assert_close(mono[1], -0.5, 1e-15);
    }
}
