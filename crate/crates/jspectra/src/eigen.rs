//! Implicit-shift QL iteration for symmetric tridiagonal matrices, with
//! eigenvector accumulation.
//!
//! Derived from the Algol procedure tql2 (Bowdler, Martin, Reinsch, Wilkinson)
//! via the EISPACK/JAMA lineage. The input is already tridiagonal, so no
//! Householder reduction is required; the iteration is O(N²) per sweep with
//! vector accumulation and converges in a handful of sweeps per eigenvalue.

use crate::spectral::SpectralError;

/// Total QL iteration budget is `MAX_SWEEPS_PER_ROW · N`.
const MAX_SWEEPS_PER_ROW: usize = 30;

/// Eigenvalues in ascending order; `vectors[j]` is the unit eigenvector
/// belonging to `values[j]`.
pub(crate) struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

#[allow(clippy::needless_range_loop)] // index arithmetic mirrors the published algorithm
pub(crate) fn decompose(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen, SpectralError> {
    let n = diag.len();
    debug_assert_eq!(off.len() + 1, n.max(1));

    let mut d = diag.to_vec();
    // e[i] couples rows i and i+1; the trailing entry is a workspace zero.
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    // v[r][c]: accumulated rotations, column c becomes eigenvector c.
    let mut v = vec![vec![0.0; n]; n];
    for (r, row) in v.iter_mut().enumerate() {
        row[r] = 1.0;
    }

    let eps = f64::EPSILON;
    let max_iterations = MAX_SWEEPS_PER_ROW * n;
    let mut iterations = 0usize;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m >= n {
            m = n - 1;
        }

        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iterations {
                    return Err(SpectralError::IterationFailure {
                        limit: max_iterations,
                    });
                }

                // Implicit shift from the leading 2x2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // One QL sweep, rotating rows m-1..l and accumulating into v.
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for row in v.iter_mut() {
                        h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort ascending, swapping eigenvector columns along.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in v.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    let vectors = (0..n).map(|j| (0..n).map(|r| v[r][j]).collect()).collect();
    Ok(TridiagonalEigen { values: d, vectors })
}
