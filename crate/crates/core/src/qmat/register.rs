//! Operations on density matrices of multipartite registers.

use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept subsystems appear in the output in ascending index order
/// regardless of the order of `keep`.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = rho.dim()?;
    let total: usize = dims.iter().product();
    if total != n {
        return Err(Error::DimensionMismatch {
            context: "partial trace",
            expected: total,
            found: n,
        });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: dims.len(),
        });
    }

    let st = strides(dims);
    let kept: Vec<usize> = (0..dims.len()).filter(|k| keep.contains(k)).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();

    // Flat offsets contributed by each kept / traced multi-index.
    let offsets = |subs: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize];
        for &s in subs {
            let mut next = Vec::with_capacity(out.len() * dims[s]);
            for &base in &out {
                for v in 0..dims[s] {
                    next.push(base + v * st[s]);
                }
            }
            out = next;
        }
        out
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let m = kept_off.len();
    let mut out = ComplexMatrix::zeros(m, m);
    for (a, &ra) in kept_off.iter().enumerate() {
        for (b, &rb) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += rho[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Applies `rho -> sum_k K_k rho K_k^dagger` with each `K_k` acting on
/// subsystem `target` only.
///
/// The operators may be rectangular (`out x dims[target]`), which changes the
/// dimension of that subsystem; the new dimension list is returned alongside
/// the result.
pub fn apply_local(
    rho: &ComplexMatrix,
    dims: &[usize],
    target: usize,
    ops: &[ComplexMatrix],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    let n = rho.dim()?;
    let total: usize = dims.iter().product();
    if total != n {
        return Err(Error::DimensionMismatch {
            context: "local operator application",
            expected: total,
            found: n,
        });
    }
    if target >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: target,
            len: dims.len(),
        });
    }
    let d_in = dims[target];
    let d_out = match ops.first() {
        Some(op) => op.rows(),
        None => return Err(Error::EmptyChannel),
    };
    for op in ops {
        if op.cols() != d_in || op.rows() != d_out {
            return Err(Error::DimensionMismatch {
                context: "local operator application",
                expected: d_in,
                found: op.cols(),
            });
        }
    }

    let before: usize = dims[..target].iter().product();
    let after: usize = dims[target + 1..].iter().product();
    let n_out = before * d_out * after;
    let mut out_dims = dims.to_vec();
    out_dims[target] = d_out;

    let idx_in = |a: usize, t: usize, b: usize| (a * d_in + t) * after + b;
    let idx_out = |a: usize, t: usize, b: usize| (a * d_out + t) * after + b;

    let mut out = ComplexMatrix::zeros(n_out, n_out);
    let mut left = vec![ZERO; n_out * n];
    for op in ops {
        // left = (I (x) K (x) I) rho
        left.iter_mut().for_each(|z| *z = ZERO);
        for a in 0..before {
            for u in 0..d_out {
                for t in 0..d_in {
                    let k = op[(u, t)];
                    if k == ZERO {
                        continue;
                    }
                    for b in 0..after {
                        let src = rho.row(idx_in(a, t, b));
                        let dst = &mut left[idx_out(a, u, b) * n..(idx_out(a, u, b) + 1) * n];
                        for (d, &s) in dst.iter_mut().zip(src) {
                            *d += k * s;
                        }
                    }
                }
            }
        }
        // out += left (I (x) K^dagger (x) I)
        for r in 0..n_out {
            let lrow = &left[r * n..(r + 1) * n];
            for a in 0..before {
                for b in 0..after {
                    for u in 0..d_out {
                        let mut acc: C64 = ZERO;
                        for t in 0..d_in {
                            let k = op[(u, t)];
                            if k != ZERO {
                                acc += lrow[idx_in(a, t, b)] * k.conj();
                            }
                        }
                        out[(r, idx_out(a, u, b))] += acc;
                    }
                }
            }
        }
    }
    Ok((out, out_dims))
}
