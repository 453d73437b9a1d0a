//! Eigenvalues of a dense real symmetric matrix.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson shifts (the eigenvalue-only halves of the classic
//! `tred2` / `tql1` pair). No eigenvectors are accumulated.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 50;

/// Reduce the row-major symmetric matrix `a` (overwritten) to tridiagonal
/// form. Returns `(diagonal, subdiagonal)` with `sub[i]` coupling `i` and
/// `i + 1`; `sub[n - 1]` is zero.
pub fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        if l > 0 {
            let scale: f64 = a[i * n..i * n + l + 1].iter().map(|v| v.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                let mut h = 0.0;
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    // shift so that e[i] couples i and i + 1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `d` is replaced by
/// the (unsorted) eigenvalues.
pub fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], tol: f64) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let anorm = (0..n)
        .map(|i| d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let floor = f64::EPSILON * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= tol * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_ITERATIONS {
                return Err(Error::SolverFailure { index: l, iterations: iter });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// All eigenvalues of the row-major symmetric `n x n` matrix, ascending.
pub fn symmetric_eigenvalues(entries: &[f64], n: usize, tol: f64) -> Result<Vec<f64>> {
    if entries.len() != n * n {
        return Err(Error::invalid(format!("expected {} entries, got {}", n * n, entries.len())));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let mut a = entries.to_vec();
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e, tol)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(rows: &[&[f64]]) -> Vec<f64> {
        let n = rows.len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        symmetric_eigenvalues(&flat, n, DEFAULT_TOL).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn diagonal() {
        assert!(close(&eig(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]), &[1.0, 2.0, 3.0], 1e-14));
    }

    #[test]
    fn all_ones_rank_one() {
        let row = [1.0; 4];
        let ev = eig(&[&row, &row, &row, &row]);
        assert!(close(&ev, &[0.0, 0.0, 0.0, 4.0], 1e-13), "{ev:?}");
    }

    #[test]
    fn exchange_two_by_two() {
        assert!(close(&eig(&[&[0.0, 1.0], &[1.0, 0.0]]), &[-1.0, 1.0], 1e-15));
    }

    #[test]
    fn one_by_one_and_empty() {
        assert_eq!(eig(&[&[-7.5]]), vec![-7.5]);
        assert!(symmetric_eigenvalues(&[], 0, DEFAULT_TOL).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(symmetric_eigenvalues(&[0.0; 9], 3, DEFAULT_TOL).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn known_tridiagonal_spectrum() {
        // second-difference matrix: 2 - 2 cos(k pi / (n + 1))
        let n = 12;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let ev = symmetric_eigenvalues(&a, n, DEFAULT_TOL).unwrap();
        let exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        assert!(close(&ev, &exact, 1e-13));
    }

    #[test]
    fn bad_arguments() {
        assert!(symmetric_eigenvalues(&[1.0, 2.0], 2, DEFAULT_TOL).is_err());
        assert!(symmetric_eigenvalues(&[1.0], 1, 0.0).is_err());
    }
}
