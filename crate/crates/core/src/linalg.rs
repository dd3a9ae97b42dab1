//! Dense Gaussian elimination with partial pivoting on row-major `n x n`
//! matrices.

pub(crate) struct Lu {
    n: usize,
    /// Unit-lower `L` below the diagonal, `U` on and above it.
    lu: Vec<f64>,
    /// Row `i` of the factorization is row `perm[i]` of the input.
    perm: Vec<usize>,
    sign: f64,
}

/// Factorizes `a`. A column whose best pivot magnitude is `<= pivot_tol` is
/// reported as `Err(column)`.
pub(crate) fn decompose(a: &[f64], n: usize, pivot_tol: f64) -> Result<Lu, usize> {
    debug_assert_eq!(a.len(), n * n);
    let mut lu = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, lu[r * n + col].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot_abs > pivot_tol) {
            return Err(col);
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
            sign = -sign;
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            lu[r * n + col] = factor;
            if factor != 0.0 {
                for j in col + 1..n {
                    lu[r * n + j] -= factor * lu[col * n + j];
                }
            }
        }
    }
    Ok(Lu { n, lu, perm, sign })
}

impl Lu {
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }

    pub(crate) fn determinant(&self) -> f64 {
        (0..self.n).map(|i| self.lu[i * self.n + i]).product::<f64>() * self.sign
    }
}

/// Determinant by elimination. Exactly singular input yields `0.0`.
pub(crate) fn determinant(a: &[f64], n: usize) -> f64 {
    match decompose(a, n, 0.0) {
        Ok(lu) => lu.determinant(),
        Err(_) => 0.0,
    }
}

/// Numerical rank by elimination with full pivoting.
pub(crate) fn rank(a: &[f64], n: usize, tol: f64) -> usize {
    let mut m = a.to_vec();
    let mut rank = 0;
    let mut used_rows = vec![false; n];
    let mut used_cols = vec![false; n];
    for _ in 0..n {
        let mut best = (0, 0, 0.0f64);
        for r in (0..n).filter(|&r| !used_rows[r]) {
            for c in (0..n).filter(|&c| !used_cols[c]) {
                if m[r * n + c].abs() > best.2 {
                    best = (r, c, m[r * n + c].abs());
                }
            }
        }
        let (pr, pc, mag) = best;
        if mag <= tol {
            break;
        }
        used_rows[pr] = true;
        used_cols[pc] = true;
        rank += 1;
        for r in (0..n).filter(|&r| !used_rows[r]) {
            let f = m[r * n + pc] / m[pr * n + pc];
            for c in 0..n {
                m[r * n + c] -= f * m[pr * n + c];
            }
        }
    }
    rank
}
