//! Dense complex linear algebra for the small interpolation systems.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::sqrt;

/// LU factorization with partial pivoting of a row-major `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl Lu {
    /// `None` when a pivot is exactly zero.
    pub fn new(mut a: Vec<Complex64>, n: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm_sqr().total_cmp(&a[j * n + col].norm_sqr()))
                .unwrap_or(col);
            if a[p * n + col].norm_sqr() == 0.0 {
                return None;
            }
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
            }
            pivots.push(p);
            let inv = a[col * n + col].inv();
            for r in col + 1..n {
                let f = a[r * n + col] * inv;
                a[r * n + col] = f;
                for c in col + 1..n {
                    let u = a[col * n + c];
                    a[r * n + c] -= f * u;
                }
            }
        }
        Some(Self { n, lu: a, pivots })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = b.to_vec();
        for (col, &p) in self.pivots.iter().enumerate() {
            x.swap(col, p);
        }
        for r in 0..n {
            for c in 0..r {
                let v = x[c];
                x[r] -= self.lu[r * n + c] * v;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let v = x[c];
                x[r] -= self.lu[r * n + c] * v;
            }
            x[r] /= self.lu[r * n + r];
        }
        x
    }
}

/// Singular values of a row-major `rows × cols` matrix (`rows ≥ cols`) by
/// one-sided Jacobi rotations on the columns, in no particular order.
pub fn singular_values(a: &[Complex64], rows: usize, cols: usize) -> Vec<f64> {
    // column-major copy so each column is contiguous
    let mut m: Vec<Complex64> = (0..cols)
        .flat_map(|c| (0..rows).map(move |r| (r, c)))
        .map(|(r, c)| a[r * cols + c])
        .collect();
    const EPS: f64 = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    let (x, y) = (m[p * rows + r], m[q * rows + r]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = sqrt(gamma.norm_sqr());
                if g <= EPS * sqrt(alpha * beta) || g == 0.0 {
                    continue;
                }
                rotated = true;
                // phase so that a_p^H (e^{−iφ} a_q) is real and positive
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                for r in 0..rows {
                    let x = m[p * rows + r];
                    let y = m[q * rows + r] * phase;
                    m[p * rows + r] = x * c - y * s;
                    m[q * rows + r] = (x * s + y * c) * phase.conj();
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..cols)
        .map(|c| sqrt(m[c * rows..(c + 1) * rows].iter().map(|v| v.norm_sqr()).sum()))
        .collect()
}

/// `σ_max / σ_min` in the spectral norm; infinite when singular.
pub fn condition_number(a: &[Complex64], n: usize) -> f64 {
    let s = singular_values(a, n, n);
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
