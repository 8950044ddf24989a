//! Dense linear-algebra kernels used across the crate.
//!
//! Everything here targets desk-scale problems (matrices up to a few
//! thousand rows), so the implementations favour simplicity and
//! reproducibility over asymptotics: cyclic Jacobi rotations for symmetric
//! eigenproblems, normal equations with a small ridge for least squares,
//! and an unblocked Cholesky for Hermitian solves.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Frobenius norm of a real matrix.
pub fn frobenius(a: &ArrayView2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_frobenius(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[[p, q]] * a[[p, q]];
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps row by row, annihilating each off-diagonal entry in turn, until
/// the off-diagonal Frobenius norm drops below `tol * ||a||_F` or
/// `max_sweeps` is reached. Returns `(eigenvalues, eigenvectors)` with
/// eigenvectors as columns, in no particular order.
pub fn sym_eigen_jacobi(
    a: &ArrayView2<f64>,
    tol: f64,
    max_sweeps: usize,
) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let mut a = a.to_owned();
    let mut v = Array2::<f64>::eye(n);
    let norm = frobenius(&a.view());
    if n < 2 || norm == 0.0 {
        return Ok((a.diag().to_owned(), v));
    }

    for _ in 0..max_sweeps {
        if off_diagonal_frobenius(&a) <= tol * norm {
            return Ok((a.diag().to_owned(), v));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- G' A G, updating only the two touched rows/columns.
                for j in 0..n {
                    let ajp = a[[j, p]];
                    let ajq = a[[j, q]];
                    a[[j, p]] = c * ajp - s * ajq;
                    a[[j, q]] = s * ajp + c * ajq;
                }
                for j in 0..n {
                    let apj = a[[p, j]];
                    let aqj = a[[q, j]];
                    a[[p, j]] = c * apj - s * aqj;
                    a[[q, j]] = s * apj + c * aqj;
                }
                // Symmetrize the annihilated pair against roundoff drift.
                let mean = 0.5 * (a[[p, q]] + a[[q, p]]);
                a[[p, q]] = mean;
                a[[q, p]] = mean;
                for j in 0..n {
                    let vjp = v[[j, p]];
                    let vjq = v[[j, q]];
                    v[[j, p]] = c * vjp - s * vjq;
                    v[[j, q]] = s * vjp + c * vjq;
                }
            }
        }
    }

    let residual = off_diagonal_frobenius(&a) / norm;
    if residual <= tol {
        return Ok((a.diag().to_owned(), v));
    }
    Err(Error::Convergence(format!(
        "Jacobi sweeps exhausted after {max_sweeps} sweeps, relative off-diagonal residual {residual:.3e}"
    )))
}

/// Solve the symmetric positive definite system `a x = b` in place via
/// Cholesky. `a` is consumed as workspace.
fn solve_spd(mut a: Array2<f64>, b: &ArrayView1<f64>) -> Result<Array1<f64>> {
    let n = a.nrows();
    // Factorize: lower triangle of `a` becomes L.
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= a[[j, k]] * a[[j, k]];
        }
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::Singular(format!(
                "non-positive pivot {d:.3e} at row {j} in Cholesky"
            )));
        }
        let ljj = d.sqrt();
        a[[j, j]] = ljj;
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= a[[i, k]] * a[[j, k]];
            }
            a[[i, j]] = s / ljj;
        }
    }
    // Forward then backward substitution.
    let mut x = b.to_owned();
    for i in 0..n {
        for k in 0..i {
            let lik = a[[i, k]];
            x[i] -= lik * x[k];
        }
        x[i] /= a[[i, i]];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let lki = a[[k, i]];
            x[i] -= lki * x[k];
        }
        x[i] /= a[[i, i]];
    }
    Ok(x)
}

/// Least squares `min ||design * x - rhs||` via normal equations.
///
/// A small ridge proportional to `trace(Z'Z)` keeps rank-deficient designs
/// from aborting a fit; the ridge is escalated twice before giving up.
pub fn lstsq(design: &ArrayView2<f64>, rhs: &ArrayView1<f64>) -> Result<Array1<f64>> {
    let d = design.ncols();
    if design.nrows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} rows but rhs has {}",
            design.nrows(),
            rhs.len()
        )));
    }
    if d == 0 {
        return Ok(Array1::zeros(0));
    }
    let gram = design.t().dot(design);
    let b = design.t().dot(rhs);
    let trace: f64 = gram.diag().sum();
    if trace == 0.0 {
        return Ok(Array1::zeros(d));
    }
    for ridge_scale in [1e-12, 1e-8, 1e-4] {
        let mut g = gram.clone();
        let ridge = ridge_scale * trace / d as f64;
        for i in 0..d {
            g[[i, i]] += ridge;
        }
        match solve_spd(g, &b.view()) {
            Ok(x) if x.iter().all(|v| v.is_finite()) => return Ok(x),
            _ => continue,
        }
    }
    Err(Error::Singular(
        "normal equations unsolvable even with ridge".into(),
    ))
}

/// Cholesky factorization of a Hermitian positive definite complex matrix.
/// Returns the lower factor `L` with `a = L L^H`.
pub fn cholesky_hermitian(a: &ArrayView2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Cholesky requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let mut l = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]].re;
        for k in 0..j {
            d -= l[[j, k]].norm_sqr();
        }
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::Singular(format!(
                "non-positive pivot {d:.3e} at row {j} in Hermitian Cholesky"
            )));
        }
        let ljj = d.sqrt();
        l[[j, j]] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / ljj;
        }
    }
    Ok(l)
}

/// Solve `a X = B` for Hermitian positive definite `a` and multiple
/// right-hand-side columns.
pub fn solve_hermitian(
    a: &ArrayView2<Complex64>,
    b: &ArrayView2<Complex64>,
) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but rhs has {} rows",
            n,
            a.ncols(),
            b.nrows()
        )));
    }
    let l = cholesky_hermitian(a)?;
    let mut x = b.to_owned();
    let m = x.ncols();
    for col in 0..m {
        for i in 0..n {
            let mut s = x[[i, col]];
            for k in 0..i {
                s -= l[[i, k]] * x[[k, col]];
            }
            x[[i, col]] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = x[[i, col]];
            for k in i + 1..n {
                s -= l[[k, i]].conj() * x[[k, col]];
            }
            x[[i, col]] = s / l[[i, i]];
        }
    }
    Ok(x)
}

/// Roots of the polynomial `1 + c[0] z + c[1] z^2 + ... + c[q-1] z^q`
/// by Durand-Kerner iteration. Trailing zero coefficients reduce the
/// effective degree; an empty or all-zero `c` has no roots.
pub fn poly_roots_unit_constant(c: &[f64]) -> Result<Vec<Complex64>> {
    let max_abs = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs == 0.0 {
        return Ok(Vec::new());
    }
    let degree = c
        .iter()
        .rposition(|v| v.abs() > 1e-14 * max_abs)
        .map(|i| i + 1)
        .unwrap_or(0);
    if degree == 0 {
        return Ok(Vec::new());
    }
    // Coefficients low to high: [1, c0, c1, ...].
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    coeffs.extend(c[..degree].iter().map(|&v| Complex64::new(v, 0.0)));

    let eval = |z: Complex64| -> Complex64 {
        let mut acc = coeffs[degree];
        for k in (0..degree).rev() {
            acc = acc * z + coeffs[k];
        }
        acc
    };

    // Standard (0.4 + 0.9i)^k starting points, scaled to the root bound.
    let bound = 1.0 + coeffs[..degree]
        .iter()
        .map(|v| (v / coeffs[degree]).norm())
        .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| seed.powu(k as u32 + 1) * bound / seed.norm())
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = coeffs[degree];
            for j in 0..degree {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Collided guesses: nudge apart and retry next iteration.
                z[i] += Complex64::new(1e-6, 1e-6);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-13 * bound.max(1.0) {
            return Ok(z);
        }
    }
    Err(Error::Convergence(
        "Durand-Kerner root finding did not converge".into(),
    ))
}
