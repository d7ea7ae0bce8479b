//! Kraus-operator noise channels.
//!
//! Every channel here is parametrized directly by an error probability; no
//! rate constants or physical times appear. Two channels are considered equal
//! when their Choi matrices agree, since a Kraus decomposition is only unique
//! up to a unitary remixing of its operators.

use std::fmt;

use crate::error::{Error, Result};
use crate::qmat::{eigh, pauli, re, tensor_all, ComplexMatrix, ALGEBRAIC_TOL};

/// Tolerance on `sum_k E_k^dagger E_k = I` accepted at construction.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are treated as a construction failure.
pub const CHOI_NEGATIVITY_LIMIT: f64 = -1e-8;

/// A probability in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct ErrorProbability(f64);

impl ErrorProbability {
    pub const ZERO: ErrorProbability = ErrorProbability(0.0);
    pub const ONE: ErrorProbability = ErrorProbability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`
    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for ErrorProbability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl fmt::Display for ErrorProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A CPTP map on a `dim`-dimensional space given by its Kraus operators.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    /// Validates shapes and trace preservation (within [`COMPLETENESS_TOL`]).
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyChannel)?;
        let dim = first.dim()?;
        for op in &operators {
            let d = op.dim()?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator list",
                    expected: dim,
                    found: d,
                });
            }
        }
        let ch = Self {
            dim,
            operators,
            label: label.into(),
        };
        let defect = ch.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::Incomplete { defect });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
            label: "I".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Largest entry of `sum_k E_k^dagger E_k - I` in magnitude.
    pub fn completeness_defect(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            acc = &acc + &(&op.adjoint() * op);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply_channel(rho, self)
    }

    pub fn choi(&self) -> ComplexMatrix {
        choi_matrix(self)
    }
}

/// Amplitude damping: `|1> -> |0>` with probability `p`.
pub fn ad_kraus(p: ErrorProbability) -> KrausChannel {
    let p = p.value();
    let e0 = ComplexMatrix::from_real_diag(&[1.0, (1.0 - p).sqrt()]);
    let e1 = ComplexMatrix::from_real_rows(&[[0.0, p.sqrt()], [0.0, 0.0]]);
    KrausChannel {
        dim: 2,
        operators: vec![e0, e1],
        label: "AD".into(),
    }
}

/// Phase damping; populations are untouched and coherences shrink by `sqrt(1 - p)`.
pub fn pd_kraus(p: ErrorProbability) -> KrausChannel {
    let p = p.value();
    let e0 = ComplexMatrix::from_real_diag(&[1.0, (1.0 - p).sqrt()]);
    let e1 = ComplexMatrix::from_real_diag(&[0.0, p.sqrt()]);
    KrausChannel {
        dim: 2,
        operators: vec![e0, e1],
        label: "PD".into(),
    }
}

/// Phase damping as a random phase flip: `{sqrt(b) I, sqrt(1 - b) Z}` with
/// `b = (1 + sqrt(1 - p)) / 2`.
pub fn pd_kraus_recombined(p: ErrorProbability) -> KrausChannel {
    let beta = (1.0 + p.complement().sqrt()) / 2.0;
    KrausChannel {
        dim: 2,
        operators: vec![
            pauli::identity().scale_real(beta.sqrt()),
            pauli::z().scale_real((1.0 - beta).sqrt()),
        ],
        label: "PD(flip)".into(),
    }
}

/// Simultaneous amplitude and phase damping as a three-operator set.
///
/// The middle operator carries a zero in its upper-left entry so that the
/// set is trace preserving and collapses to [`ad_kraus`] / [`pd_kraus`] when
/// the other probability vanishes.
pub fn combined_kraus(p_ad: ErrorProbability, p_pd: ErrorProbability) -> KrausChannel {
    let (a, d) = (p_ad.value(), p_pd.value());
    let e0 = ComplexMatrix::from_real_diag(&[1.0, ((1.0 - a) * (1.0 - d)).sqrt()]);
    let e1 = ComplexMatrix::from_real_diag(&[0.0, ((1.0 - a) * d).sqrt()]);
    let e2 = ComplexMatrix::from_real_rows(&[[0.0, a.sqrt()], [0.0, 0.0]]);
    KrausChannel {
        dim: 2,
        operators: vec![e0, e1, e2],
        label: "AD+PD".into(),
    }
}

/// The combined channel rewritten so that its second operator is a pure
/// phase flip and its third a pure decay.
pub fn combined_kraus_primed(p_ad: ErrorProbability, p_pd: ErrorProbability) -> KrausChannel {
    let (a, d) = (p_ad.value(), p_pd.value());
    let x = 1.0 + ((1.0 - a) * (1.0 - d)).sqrt();
    let y = ((1.0 - a) * d).sqrt();
    let n = (x * x + y * y).sqrt();
    let e0 = ComplexMatrix::from_real_diag(&[1.0, x + y * y / x - 1.0]).scale_real(x / n);
    let e1 = pauli::z().scale_real(y / n);
    let e2 = ComplexMatrix::from_real_rows(&[[0.0, a.sqrt()], [0.0, 0.0]]);
    KrausChannel {
        dim: 2,
        operators: vec![e0, e1, e2],
        label: "AD+PD'".into(),
    }
}

/// `rho -> sum_k E_k rho E_k^dagger`
pub fn apply_channel(rho: &ComplexMatrix, ch: &KrausChannel) -> Result<ComplexMatrix> {
    let n = rho.dim()?;
    if n != ch.dim {
        return Err(Error::DimensionMismatch {
            context: "channel application",
            expected: ch.dim,
            found: n,
        });
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for op in &ch.operators {
        out.add_scaled(re(1.0), &op.conjugate(rho)?)?;
    }
    Ok(out)
}

/// Embeds a single-qubit channel on qubit `target` of an `n_qubits` register.
pub fn lift_to_register(ch: &KrausChannel, n_qubits: usize, target: usize) -> Result<KrausChannel> {
    if ch.dim != 2 {
        return Err(Error::DimensionMismatch {
            context: "register lift (single-qubit channel expected)",
            expected: 2,
            found: ch.dim,
        });
    }
    if target >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index: target,
            len: n_qubits,
        });
    }
    let id = pauli::identity();
    let operators = ch
        .operators
        .iter()
        .map(|op| {
            let factors: Vec<&ComplexMatrix> = (0..n_qubits)
                .map(|q| if q == target { op } else { &id })
                .collect();
            tensor_all(factors)
        })
        .collect();
    Ok(KrausChannel {
        dim: 1 << n_qubits,
        operators,
        label: format!("{}@q{}", ch.label, target),
    })
}

/// `a` after `b`: the operator list is every product `A_i B_j`.
pub fn compose(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            context: "channel composition",
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut operators = Vec::with_capacity(a.len() * b.len());
    for x in &a.operators {
        for y in &b.operators {
            operators.push(x * y);
        }
    }
    Ok(KrausChannel {
        dim: a.dim,
        operators,
        label: format!("{}*{}", a.label, b.label),
    })
}

/// `sum_ij |i><j| (x) L(|i><j|)`, a `d^2 x d^2` matrix.
pub fn choi_matrix(ch: &KrausChannel) -> ComplexMatrix {
    let d = ch.dim;
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    let mut v = vec![re(0.0); d * d];
    for op in &ch.operators {
        for i in 0..d {
            for a in 0..d {
                v[i * d + a] = op[(a, i)];
            }
        }
        for r in 0..d * d {
            if v[r] == re(0.0) {
                continue;
            }
            for s in 0..d * d {
                choi[(r, s)] += v[r] * v[s].conj();
            }
        }
    }
    choi
}

/// Largest entrywise difference of the two Choi matrices.
pub fn choi_distance(a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            context: "Choi comparison",
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(choi_matrix(a).max_abs_diff(&choi_matrix(b)))
}

/// Recovers a Kraus set from a Choi matrix through its eigendecomposition.
///
/// Eigenvalues in `[CHOI_NEGATIVITY_LIMIT, 0]` are dropped as rounding noise;
/// anything more negative means the map is not completely positive.
pub fn kraus_from_choi(choi: &ComplexMatrix, dim: usize, label: impl Into<String>) -> Result<KrausChannel> {
    let n = choi.dim()?;
    if n != dim * dim {
        return Err(Error::DimensionMismatch {
            context: "Choi matrix",
            expected: dim * dim,
            found: n,
        });
    }
    let eig = eigh(choi)?;
    if eig.min_value() < CHOI_NEGATIVITY_LIMIT {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.min_value(),
        });
    }
    let mut operators = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let w = lambda.sqrt();
        let mut op = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for a in 0..dim {
                op[(a, i)] = eig.vectors[(i * dim + a, k)] * w;
            }
        }
        operators.push(op);
    }
    if operators.is_empty() {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.min_value(),
        });
    }
    KrausChannel::new(operators, label)
}

/// PD probability reached at the same instant as `p_ad` when the phase
/// damping rate is `kappa` times the amplitude damping rate:
/// `1 - (1 - p_ad)^kappa`.
pub fn kappa_pair(p_ad: ErrorProbability, kappa: f64) -> Result<ErrorProbability> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kappa must be a finite non-negative number, got {kappa}"
        )));
    }
    let v = 1.0 - p_ad.complement().powf(kappa);
    ErrorProbability::new(v.clamp(0.0, 1.0))
}

/// Smallest eigenvalue of the Choi matrix; non-negative for CP maps.
pub fn choi_min_eigenvalue(ch: &KrausChannel) -> Result<f64> {
    Ok(eigh(&choi_matrix(ch))?.min_value())
}

/// True when both the completeness defect is below `ALGEBRAIC_TOL` and the
/// Choi matrix has no eigenvalue below [`CHOI_NEGATIVITY_LIMIT`].
pub fn is_cptp(ch: &KrausChannel) -> Result<bool> {
    Ok(ch.completeness_defect() <= ALGEBRAIC_TOL && choi_min_eigenvalue(ch)? >= CHOI_NEGATIVITY_LIMIT)
}
