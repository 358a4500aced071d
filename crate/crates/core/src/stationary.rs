//! Stationary-distribution solving and the left-eigenvector sign property.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::kernel::TransitionKernel;
use crate::structure::check_irreducible;
use crate::util::neumaier_sum;
use crate::STATIONARY_RESIDUAL_TOL;

/// Entries of the raw solution in `[-NEGATIVE_CLAMP, 0)` are solver noise and
/// get clamped to zero; anything more negative is treated as a failure.
const NEGATIVE_CLAMP: f64 = 1e-12;

/// A solved stationary distribution.
#[derive(Debug, Clone)]
pub struct StationaryResult {
    /// The invariant distribution: `pi^t k = pi^t`.
    pub pi: Distribution,
    /// Max-norm of `pi^t k - pi^t` after clamping and renormalization.
    pub residual: f64,
    /// Irreducibility guarantees a one-dimensional fixed space, hence a
    /// unique invariant distribution; always true for a successful solve.
    pub unique: bool,
}

/// Gaussian elimination with partial pivoting on the augmented system.
/// Returns the solution or the pivot index where the system degenerated.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> std::result::Result<Vec<f64>, usize> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(1.0f64, f64::max);
    let pivot_tol = 1e-13 * scale;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col].abs() <= pivot_tol {
            return Err(col);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                let update = factor * a[col][c];
                a[row][c] -= update;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for col in row + 1..n {
            acc -= a[row][col] * x[col];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Rank of a matrix under elimination with the same pivot threshold the
/// solver uses. Test instrumentation for the uniqueness claim.
#[cfg(test)]
fn eliminate_rank(mut a: Vec<Vec<f64>>) -> usize {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(1.0f64, f64::max);
    let pivot_tol = 1e-10 * scale;
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        let pivot_row = (row..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()));
        let pivot_row = match pivot_row {
            Some(r) if a[r][col].abs() > pivot_tol => r,
            _ => continue,
        };
        a.swap(row, pivot_row);
        for r in row + 1..n {
            let factor = a[r][col] / a[row][col];
            for c in col..n {
                let update = factor * a[row][c];
                a[r][c] -= update;
            }
        }
        rank += 1;
        row += 1;
        if row == n {
            break;
        }
    }
    rank
}

/// Builds `kappa^t - I` with the last row replaced by all ones.
fn balance_system(k: &TransitionKernel) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = k.size();
    let mut a = vec![vec![0.0; n]; n];
    for z in 0..n {
        for s in 0..n {
            a[s][z] = k.entry(z, s);
        }
    }
    for (s, row) in a.iter_mut().enumerate() {
        row[s] -= 1.0;
    }
    a[n - 1] = vec![1.0; n];
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    (a, b)
}

/// Solve `pi^t k = pi^t` for an irreducible kernel.
///
/// The balance equations `(kappa^t - I) x = 0` are closed by replacing the
/// last equation with the normalization `sum x = 1`, then solved directly
/// with partial pivoting. This handles periodic irreducible kernels too,
/// where power iteration would oscillate. Entries in `[-1e-12, 0)` are
/// clamped to zero and the vector renormalized; anything worse reports a
/// singular system.
pub fn solve_stationary(k: &TransitionKernel) -> Result<StationaryResult> {
    if !check_irreducible(k) {
        return Err(Error::NotIrreducible);
    }
    let (a, b) = balance_system(k);
    let mut x = solve_linear(a, b).map_err(|col| Error::SingularSystem {
        detail: format!("zero pivot at column {col}"),
    })?;
    for (s, value) in x.iter_mut().enumerate() {
        if *value < 0.0 {
            if *value < -NEGATIVE_CLAMP {
                return Err(Error::SingularSystem {
                    detail: format!("solution entry {s} is {value}, below the clamp threshold"),
                });
            }
            *value = 0.0;
        }
    }
    let total = neumaier_sum(x.iter().copied());
    if !(total > 0.0) {
        return Err(Error::SingularSystem {
            detail: format!("solution sums to {total}"),
        });
    }
    for value in x.iter_mut() {
        *value /= total;
    }
    let pi = Distribution::new(k.space().clone(), x)?;
    let pushed = pi.push_forward(k)?;
    let residual = pi
        .mass()
        .iter()
        .zip(pushed.mass())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::SingularSystem {
            detail: format!("stationary residual {residual} exceeds {STATIONARY_RESIDUAL_TOL}"),
        });
    }
    Ok(StationaryResult {
        pi,
        residual,
        unique: true,
    })
}

/// Check the sign structure of a left 1-eigenvector: entries above the noise
/// tolerance must all share one sign. For irreducible kernels every left
/// 1-eigenvector has this property; a mixed-sign eigenvector certifies
/// reducibility.
///
/// `x` must actually be a left 1-eigenvector: if `max_s |(x^t k)_s - x_s|`
/// exceeds `tol`, or all of `x` is below noise, this returns
/// [`Error::NotAnEigenvector`].
pub fn left_eigenvector_sign_check(k: &TransitionKernel, x: &[f64], tol: f64) -> Result<bool> {
    if x.len() != k.size() {
        return Err(Error::SpaceMismatch {
            left: k.size(),
            right: x.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance {
            value: tol,
            requirement: "must be > 0",
        });
    }
    let n = k.size();
    let mut residual = 0.0f64;
    for s in 0..n {
        let mut pushed = 0.0;
        for z in 0..n {
            pushed += x[z] * k.entry(z, s);
        }
        residual = residual.max((pushed - x[s]).abs());
    }
    if !(residual <= tol) {
        return Err(Error::NotAnEigenvector { residual, tol });
    }
    if x.iter().all(|v| v.abs() <= tol) {
        return Err(Error::NotAnEigenvector { residual, tol });
    }
    let has_positive = x.iter().any(|&v| v > tol);
    let has_negative = x.iter().any(|&v| v < -tol);
    Ok(!(has_positive && has_negative))
}
