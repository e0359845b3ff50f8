//! Dense helpers: symmetry/PSD validation and a lazily-evaluated pivoted
//! Cholesky factorization used for sampling and low-rank priors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance for symmetry checks.
pub const SYMMETRY_RTOL: f64 = 1e-10;

/// Relative tolerance for the PSD check: smallest eigenvalue must be at
/// least `-PSD_RTOL * trace / n`.
pub const PSD_RTOL: f64 = 1e-8;

pub fn check_square_symmetric(c: &DMatrix<f64>, what: &str) -> Result<()> {
    if c.nrows() != c.ncols() {
        return Err(Error::domain(format!(
            "{what} must be square, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    let scale = c.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let n = c.nrows();
    for i in 0..n {
        let d = c[(i, i)];
        if !d.is_finite() {
            return Err(Error::domain(format!("{what} has non-finite entry at ({i}, {i})")));
        }
        if d < 0.0 {
            return Err(Error::domain(format!("{what} has negative diagonal {d} at {i}")));
        }
        for j in 0..i {
            let (a, b) = (c[(i, j)], c[(j, i)]);
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::domain(format!("{what} has non-finite entry at ({i}, {j})")));
            }
            if (a - b).abs() > SYMMETRY_RTOL * scale {
                return Err(Error::domain(format!(
                    "{what} is not symmetric: ({i}, {j}) = {a} vs ({j}, {i}) = {b}"
                )));
            }
        }
    }
    Ok(())
}

/// Checks that the smallest eigenvalue of `c` is at least
/// `-PSD_RTOL * trace(c) / n`, by attempting a Cholesky factorization of
/// `c + tol * I`.
pub fn check_psd(c: &DMatrix<f64>, what: &str) -> Result<()> {
    check_square_symmetric(c, what)?;
    let n = c.nrows();
    if n == 0 {
        return Ok(());
    }
    let trace = c.trace();
    if trace == 0.0 {
        // A PSD matrix with zero diagonal is the zero matrix.
        return if c.iter().all(|&x| x == 0.0) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} has zero diagonal but nonzero off-diagonal entries; not PSD"
            )))
        };
    }
    let tol = PSD_RTOL * trace / n as f64;
    let mut shifted = c.clone();
    for i in 0..n {
        shifted[(i, i)] += tol;
    }
    // Symmetrize so the factorization only sees the lower triangle's intent.
    let shifted = (&shifted + shifted.transpose()) * 0.5;
    match shifted.cholesky() {
        Some(_) => Ok(()),
        None => Err(Error::domain(format!(
            "{what} is not positive semidefinite (smallest eigenvalue below -{tol:e})"
        ))),
    }
}

/// Dot product with four independent accumulators.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// A factor `L` (n x rank, row-major) with `L Lᵀ` approximating a PSD matrix.
#[derive(Debug, Clone)]
pub struct LowRankFactor {
    n: usize,
    rank: usize,
    rows: Vec<f64>,
}

impl LowRankFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.rank..(i + 1) * self.rank]
    }

    /// `(L Lᵀ)[i][i]`.
    pub fn diag(&self, i: usize) -> f64 {
        self.row(i).iter().map(|x| x * x).sum()
    }

    /// Column `a` of `L Lᵀ`.
    pub fn product_column(&self, a: usize) -> Vec<f64> {
        let ra = self.row(a);
        (0..self.n).map(|i| dot(self.row(i), ra)).collect()
    }

    /// `L z` for `z` of length `rank`.
    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        debug_assert_eq!(z.len(), self.rank);
        (0..self.n)
            .map(|i| dot(self.row(i), z))
            .collect()
    }

    /// Keeps only the first `m` rows.
    pub fn truncate_rows(&self, m: usize) -> LowRankFactor {
        let m = m.min(self.n);
        LowRankFactor {
            n: m,
            rank: self.rank,
            rows: self.rows[..m * self.rank].to_vec(),
        }
    }

    pub fn to_dense_product(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }
}

/// Outcome of a pivoted Cholesky run.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    pub factor: LowRankFactor,
    /// Order in which rows were pivoted.
    pub pivots: Vec<usize>,
    /// Smallest residual diagonal left after stopping.
    pub min_residual: f64,
    /// Largest residual diagonal left after stopping.
    pub max_residual: f64,
}

/// Pivoted Cholesky of an implicitly given PSD matrix.
///
/// `diag(i)` returns the matrix diagonal and `column(p, out)` fills column
/// `p`. Stops once every residual diagonal is at most `stop_tol` or the rank
/// reaches `n`. `max_entries` bounds the size of the factor.
pub fn pivoted_cholesky<D, C>(
    n: usize,
    diag: D,
    mut column: C,
    stop_tol: f64,
    max_entries: usize,
) -> Result<PivotedCholesky>
where
    D: Fn(usize) -> f64,
    C: FnMut(usize, &mut [f64]),
{
    let mut residual: Vec<f64> = (0..n).map(&diag).collect();
    let mut pivoted = vec![false; n];
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut pivots = Vec::new();
    let mut buf = vec![0.0; n];

    loop {
        if cols.len() == n {
            break;
        }
        let mut p = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for (i, &r) in residual.iter().enumerate() {
            if !pivoted[i] && r > best {
                best = r;
                p = i;
            }
        }
        if p == usize::MAX || best <= stop_tol {
            break;
        }
        if (cols.len() + 1).saturating_mul(n) > max_entries {
            return Err(Error::Resource(format!(
                "pivoted Cholesky factor exceeds {max_entries} entries (n = {n}, rank > {})",
                cols.len()
            )));
        }
        column(p, &mut buf);
        for l in &cols {
            let lp = l[p];
            if lp != 0.0 {
                for (b, &x) in buf.iter_mut().zip(l.iter()) {
                    *b -= lp * x;
                }
            }
        }
        let s = best.sqrt();
        let mut l = vec![0.0; n];
        for i in 0..n {
            if !pivoted[i] && i != p {
                l[i] = buf[i] / s;
            }
        }
        l[p] = s;
        pivoted[p] = true;
        for i in 0..n {
            if !pivoted[i] {
                residual[i] -= l[i] * l[i];
            }
        }
        residual[p] = 0.0;
        pivots.push(p);
        cols.push(l);
    }

    let (mut min_residual, mut max_residual) = (0.0_f64, 0.0_f64);
    for i in 0..n {
        if !pivoted[i] {
            min_residual = min_residual.min(residual[i]);
            max_residual = max_residual.max(residual[i]);
        }
    }

    let rank = cols.len();
    let mut rows = vec![0.0; n * rank];
    for (k, l) in cols.iter().enumerate() {
        for i in 0..n {
            rows[i * rank + k] = l[i];
        }
    }
    Ok(PivotedCholesky {
        factor: LowRankFactor { n, rank, rows },
        pivots,
        min_residual,
        max_residual,
    })
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(c: &DMatrix<f64>) -> f64 {
    if c.nrows() == 0 {
        return 0.0;
    }
    let sym = (c + c.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |m, &x| m.min(x))
}
