use num_complex::Complex64;

use crate::error::{Error, Result};

/// Orthonormal basis of the null space of the row vector `g_s`, stored
/// column-major as an `n_t x (n_t - 1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JammingBasis {
    n_rows: usize,
    cols: Vec<Vec<Complex64>>,
}

impl JammingBasis {
    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.cols[j][i]
    }

    /// Row vector times basis: `x T`, length `n_t - 1`.
    pub fn project_row(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.cols
            .iter()
            .map(|c| x.iter().zip(c).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn remove_component(v: &mut [Complex64], q: &[Complex64]) {
    let p = inner(q, v);
    for (vi, qi) in v.iter_mut().zip(q) {
        *vi -= p * qi;
    }
}

/// Null-space basis of `g_s` (so that `g_s T = 0`) by two-pass Gram-Schmidt.
///
/// The candidate set is the coordinate axes minus the one on which `g_s`
/// has the largest magnitude (lowest index on ties), processed in index order,
/// which keeps the result deterministic and well conditioned.
pub fn null_space_basis(g_s: &[Complex64]) -> Result<JammingBasis> {
    let n = g_s.len();
    let norm = g_s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm >= 1e-14) {
        return Err(Error::ZeroVector(norm));
    }
    // g_s z = <conj(g_s), z>, so the null space is the complement of conj(g_s).
    let u: Vec<Complex64> = g_s.iter().map(|z| z.conj() / norm).collect();
    let skip = g_s
        .iter()
        .enumerate()
        .fold(
            (0, -1.0),
            |(bi, bm), (i, z)| {
                if z.norm_sqr() > bm {
                    (i, z.norm_sqr())
                } else {
                    (bi, bm)
                }
            },
        )
        .0;

    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n.saturating_sub(1));
    for axis in (0..n).filter(|&i| i != skip) {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[axis] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            remove_component(&mut v, &u);
            for q in &cols {
                remove_component(&mut v, q);
            }
        }
        let vn = inner(&v, &v).re.sqrt();
        for x in v.iter_mut() {
            *x /= vn;
        }
        cols.push(v);
    }
    Ok(JammingBasis { n_rows: n, cols })
}
