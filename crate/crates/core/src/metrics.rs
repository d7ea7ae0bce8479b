//! Concurrence and fidelity of two-qubit states.

use serde::{Deserialize, Serialize};

use crate::channels::ErrorProbability;
use crate::error::{Error, Result};
use crate::pipeline::TwoQubitState;
use crate::qmat::{eigenvalues_general, eigh, pauli, ComplexMatrix, ALGEBRAIC_TOL};

/// Spurious negative eigenvalue parts tolerated in `rho` and `rho rho~`.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Eigenvalues of `rho` this far below its largest are treated as exact
/// zeros when factoring `rho = W W^dagger`.
const RANK_CUTOFF: f64 = 16.0 * f64::EPSILON;

/// Noise floor for [`concurrence_from_product`]; see there.
const PRODUCT_FLOOR: f64 = 64.0 * f64::EPSILON;

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    let d = rho.dim()?;
    if d != 4 {
        return Err(Error::DimensionMismatch {
            context: "two-qubit metric",
            expected: 4,
            found: d,
        });
    }
    Ok(())
}

/// `sigma_y (x) sigma_y`
fn yy() -> ComplexMatrix {
    pauli::y().tensor(&pauli::y())
}

fn wootters(lambdas: &mut [f64]) -> f64 {
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = lambdas.iter().skip(1).sum();
    (lambdas.first().copied().unwrap_or(0.0) - rest).clamp(0.0, 1.0)
}

/// Wootters concurrence.
///
/// The values `lambda_i` (square roots of the eigenvalues of `rho rho~`) are
/// computed as singular values of `tau = W^T (Y (x) Y) W` with
/// `rho = W W^dagger`, read off the Hermitian dilation `[[0, tau], [tau^H, 0]]`.
/// This keeps their absolute error at rounding level; taking square roots of
/// the eigenvalues of `rho rho~` would turn a 1e-17 error into 3e-9.
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let spec = eigh(rho)?;
    if spec.min_value() < -EIGEN_CLAMP {
        return Err(Error::NotPositive {
            min_eigenvalue: spec.min_value(),
        });
    }
    let top = spec.values.last().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..4).filter(|&k| spec.values[k] > RANK_CUTOFF * top).collect();
    let r = kept.len();
    if r == 0 {
        return Ok(0.0);
    }
    let mut w = ComplexMatrix::zeros(4, r);
    for (col, &k) in kept.iter().enumerate() {
        let s = spec.values[k].sqrt();
        for i in 0..4 {
            w[(i, col)] = spec.vectors[(i, k)] * s;
        }
    }
    let tau = &(&w.transpose() * &yy()) * &w;
    let mut dilation = ComplexMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            dilation[(i, r + j)] = tau[(i, j)];
            dilation[(r + j, i)] = tau[(i, j)].conj();
        }
    }
    // Eigenvalues come in +-sigma pairs; the top half are the singular values.
    let mut sigmas: Vec<f64> = eigh(&dilation)?.values[r..].iter().map(|v| v.max(0.0)).collect();
    Ok(wootters(&mut sigmas))
}

/// Concurrence from the eigenvalues of the non-Hermitian product `rho rho~`.
///
/// Same quantity as [`concurrence`] by a different route, kept as a
/// cross-check. Eigenvalues below `64 eps |rho rho~|` are dropped as
/// rounding residue, which limits accuracy to about 1e-8 when `rho rho~` has
/// genuinely tiny eigenvalues.
pub fn concurrence_from_product(rho: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let yy = yy();
    let tilde = &(&yy * &rho.conj()) * &yy;
    let r = rho * &tilde;
    let floor = PRODUCT_FLOOR * r.frobenius_norm().max(f64::MIN_POSITIVE);
    let mus = eigenvalues_general(&r)?;
    if let Some(bad) = mus.iter().find(|mu| mu.re < -EIGEN_CLAMP) {
        return Err(Error::NotPositive {
            min_eigenvalue: bad.re,
        });
    }
    let mut lambdas: Vec<f64> = mus
        .into_iter()
        .map(|mu| if mu.re <= floor { 0.0 } else { mu.re.sqrt() })
        .collect();
    Ok(wootters(&mut lambdas))
}

/// Concurrence of a state whose only nonzero entries sit on the diagonal and
/// anti-diagonal.
pub fn concurrence_xstate(rho: &ComplexMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let mut off = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                off = off.max(rho[(i, j)].norm());
            }
        }
    }
    if off > ALGEBRAIC_TOL {
        return Err(Error::NotXState { magnitude: off });
    }
    let d = |i: usize| rho[(i, i)].re.max(0.0);
    let a = rho[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let b = rho[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    Ok((2.0 * a.max(b).max(0.0)).min(1.0))
}

/// `<psi_0| rho |psi_0>` against the initial pure state.
pub fn fidelity_with_initial(rho: &ComplexMatrix, initial: &TwoQubitState) -> Result<f64> {
    check_two_qubit(rho)?;
    let f = rho.sandwich(&initial.ket, &initial.ket)?;
    Ok(f.re.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricPoint {
    pub p: f64,
    pub concurrence: f64,
    pub fidelity: f64,
}

impl MetricPoint {
    pub fn evaluate(p: ErrorProbability, rho: &ComplexMatrix, initial: &TwoQubitState) -> Result<Self> {
        Ok(Self {
            p: p.value(),
            concurrence: concurrence(rho)?,
            fidelity: fidelity_with_initial(rho, initial)?,
        })
    }
}

/// `(C_corrected - C_uncorrected, F_corrected - F_uncorrected)`
pub fn deltas(corrected: &MetricPoint, uncorrected: &MetricPoint) -> Result<(f64, f64)> {
    if corrected.p != uncorrected.p {
        return Err(Error::MismatchedProbability(corrected.p, uncorrected.p));
    }
    Ok((
        corrected.concurrence - uncorrected.concurrence,
        corrected.fidelity - uncorrected.fidelity,
    ))
}
