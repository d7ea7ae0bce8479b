//! Eigenvalue routines.
//!
//! `eigenvalues_general` handles small non-Hermitian matrices (the Wootters
//! product is one) by Householder reduction to upper Hessenberg form followed
//! by single-shift complex QR with deflation. `eigh` handles Hermitian
//! matrices of any size the simulator produces using cyclic Jacobi sweeps,
//! which keeps eigenvectors orthonormal to working precision.

#![allow(clippy::needless_range_loop)]

use super::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Largest dimension accepted by [`eigenvalues_general`].
pub const MAX_GENERAL_EIG_DIM: usize = 8;

const QR_ITERATIONS_PER_EIGENVALUE: usize = 60;
const JACOBI_MAX_SWEEPS: usize = 64;

/// All eigenvalues of a square matrix, with multiplicity, in deflation order.
pub fn eigenvalues_general(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = m.dim()?;
    if n > MAX_GENERAL_EIG_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_GENERAL_EIG_DIM,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut h: Vec<Vec<C64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    reduce_to_hessenberg(&mut h);

    let scale = h
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let underflow = scale * 1e-300;

    let budget = QR_ITERATIONS_PER_EIGENVALUE * n;
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }

        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let neighbours = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if sub <= f64::EPSILON * neighbours || sub <= underflow {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { iterations: total });
        }

        let shift = if iter.is_multiple_of(11) {
            exceptional_shift(&h, lo, hi)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_sweep(&mut h, lo, hi, shift);
    }

    Ok(eig)
}

fn reduce_to_hessenberg(h: &mut [Vec<C64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| h[i][k].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let norm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;

        let mut v: Vec<C64> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }

        // P = I - 2 v v^H / |v|^2 applied from the left ...
        for j in 0..n {
            let w: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[k + 1 + i][j])
                .sum();
            let f = w * (2.0 / vnorm2);
            for (i, vi) in v.iter().enumerate() {
                h[k + 1 + i][j] -= vi * f;
            }
        }
        // ... and from the right.
        for row in h.iter_mut() {
            let w: C64 = v.iter().enumerate().map(|(j, vj)| row[k + 1 + j] * vj).sum();
            let f = w * (2.0 / vnorm2);
            for (j, vj) in v.iter().enumerate() {
                row[k + 1 + j] -= f * vj.conj();
            }
        }

        h[k + 1][k] = alpha;
        for row in h.iter_mut().skip(k + 2) {
            row[k] = ZERO;
        }
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(h: &[Vec<C64>], hi: usize) -> C64 {
    let a = h[hi - 1][hi - 1];
    let b = h[hi - 1][hi];
    let c = h[hi][hi - 1];
    let d = h[hi][hi];
    let t = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (t * t + bc).sqrt();
    if (t.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let denom = t + disc;
    if denom == ZERO {
        d
    } else {
        d - bc / denom
    }
}

fn exceptional_shift(h: &[Vec<C64>], lo: usize, hi: usize) -> C64 {
    let mut s = h[hi][hi - 1].re.abs();
    if hi >= lo + 2 {
        s += h[hi - 1][hi - 2].re.abs();
    }
    h[hi][hi] + C64::new(s, 0.0)
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` that zeroes `b`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, ONE);
    }
    let an = a.norm();
    let r = an.hypot(b.norm());
    (an / r, (a / an) * b.conj() / r)
}

/// One explicit shifted QR step on the active block `lo..=hi`.
fn qr_sweep(h: &mut [Vec<C64>], lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for j in k..=hi {
            let a = h[k][j];
            let b = h[k + 1][j];
            h[k][j] = a * c + s * b;
            h[k + 1][j] = -s.conj() * a + b * c;
        }
        h[k + 1][k] = ZERO;
        rotations.push((k, c, s));
    }
    for (k, c, s) in rotations {
        for row in h.iter_mut().take((k + 1).min(hi) + 1).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = x * c + y * s.conj();
            row[k + 1] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> super::Ket {
        let n = self.vectors.rows();
        super::Ket::new((0..n).map(|i| self.vectors[(i, k)]).collect())
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// The input is replaced by its Hermitian part `(M + M^H) / 2` first.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.dim()?;
    let sym = m.hermitize();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| sym.row(i).to_vec()).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect();

    let total: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = total * f64::EPSILON * 1e-2;

    let off = |a: &[Vec<C64>]| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for z in &row[i + 1..] {
                s += z.norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            if off(&a) <= total * 1e-12 {
                break;
            }
            return Err(Error::NoConvergence {
                iterations: sweeps * n * n.saturating_sub(1) / 2,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag <= target * 1e-3 || mag == 0.0 {
                    continue;
                }
                let e = apq / mag;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;

                // G acts on columns p, q: A <- G^H A G.
                let gpp = C64::new(cs, 0.0);
                let gpq = C64::new(sn, 0.0);
                let gqp = -e.conj() * sn;
                let gqq = e.conj() * cs;

                for row in a.iter_mut() {
                    let x = row[p];
                    let y = row[q];
                    row[p] = x * gpp + y * gqp;
                    row[q] = x * gpq + y * gqq;
                }
                for k in 0..n {
                    let x = a[p][k];
                    let y = a[q][k];
                    a[p][k] = gpp.conj() * x + gqp.conj() * y;
                    a[q][k] = gpq.conj() * x + gqq.conj() * y;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = C64::new(a[p][p].re, 0.0);
                a[q][q] = C64::new(a[q][q].re, 0.0);

                for row in v.iter_mut() {
                    let x = row[p];
                    let y = row[q];
                    row[p] = x * gpp + y * gqp;
                    row[q] = x * gpq + y * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let values = order.iter().map(|&i| a[i][i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for (i, row) in v.iter().enumerate() {
            vectors[(i, col)] = row[k];
        }
    }
    Ok(HermitianEigen { values, vectors })
}
