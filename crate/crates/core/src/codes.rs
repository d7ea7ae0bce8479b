//! Error-correcting codes as data: codewords, correctable single-qubit
//! errors, and the syndrome/recovery structure derived from them.
//!
//! Qubit positions are counted from 0 at the most significant bit of the
//! basis index, so `|0111>` has qubit 0 in state 0.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qmat::{pauli, re, tensor_all, ComplexMatrix, Ket, ALGEBRAIC_TOL, SPECTRAL_TOL};

/// One syndrome class: the two normalized images `|r_0>, |r_1>` of the
/// codewords, the projector `M` onto their span and the recovery `R` mapping
/// them back onto `|0_L>, |1_L>`.
#[derive(Clone, Debug)]
pub struct Syndrome {
    pub label: String,
    pub vectors: [Ket; 2],
    /// Norms of the raw images before normalization.
    pub norms: [f64; 2],
    pub projector: ComplexMatrix,
    pub recovery: ComplexMatrix,
}

impl Syndrome {
    /// `|0><r_0| + |1><r_1|`, the measurement-plus-recovery branch followed
    /// by decoding to a bare qubit.
    pub fn decoder(&self) -> ComplexMatrix {
        let n = self.vectors[0].dim();
        let mut d = ComplexMatrix::zeros(2, n);
        for (row, v) in self.vectors.iter().enumerate() {
            for (col, a) in v.amplitudes().iter().enumerate() {
                d[(row, col)] = a.conj();
            }
        }
        d
    }
}

/// Output of [`build_syndromes`].
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    /// Entry 0 is the codespace itself.
    pub syndromes: Vec<Syndrome>,
    pub residual_projector: ComplexMatrix,
    /// Orthonormal basis of the residual subspace.
    pub residual_basis: Vec<Ket>,
}

#[derive(Clone, Debug)]
pub struct QecCode {
    name: String,
    n_physical: usize,
    logical0: Ket,
    logical1: Ket,
    error_generators: Vec<(String, ComplexMatrix)>,
    table: SyndromeTable,
}

impl QecCode {
    pub fn new(
        name: impl Into<String>,
        logical0: Ket,
        logical1: Ket,
        error_generators: Vec<(String, ComplexMatrix)>,
    ) -> Result<Self> {
        let n_physical = qubit_count(logical0.dim())?;
        let table = build_syndromes(&logical0, &logical1, &error_generators)?;
        Ok(Self {
            name: name.into(),
            n_physical,
            logical0,
            logical1,
            error_generators,
            table,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    /// `2^n_physical`
    pub fn block_dim(&self) -> usize {
        1 << self.n_physical
    }

    pub fn logical0(&self) -> &Ket {
        &self.logical0
    }

    pub fn logical1(&self) -> &Ket {
        &self.logical1
    }

    pub fn error_generators(&self) -> &[(String, ComplexMatrix)] {
        &self.error_generators
    }

    pub fn syndromes(&self) -> &[Syndrome] {
        &self.table.syndromes
    }

    pub fn residual_projector(&self) -> &ComplexMatrix {
        &self.table.residual_projector
    }

    pub fn residual_basis(&self) -> &[Ket] {
        &self.table.residual_basis
    }

    pub fn residual_rank(&self) -> usize {
        self.table.residual_basis.len()
    }

    /// `|0_L><0| + |1_L><1|`, a `2^n x 2` isometry.
    pub fn encoder(&self) -> ComplexMatrix {
        let n = self.block_dim();
        let mut v = ComplexMatrix::zeros(n, 2);
        for r in 0..n {
            v[(r, 0)] = self.logical0.amplitudes()[r];
            v[(r, 1)] = self.logical1.amplitudes()[r];
        }
        v
    }

    /// Kraus operators (`2 x 2^n`) of the whole correct-and-decode step.
    ///
    /// One operator per syndrome class, plus `|i><u|/sqrt 2` for every
    /// residual basis vector `u`, which replaces residual weight by `I/2`.
    pub fn decoder_kraus(&self) -> Vec<ComplexMatrix> {
        let mut ops: Vec<ComplexMatrix> = self.syndromes().iter().map(Syndrome::decoder).collect();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for u in self.residual_basis() {
            for i in 0..2 {
                let mut op = ComplexMatrix::zeros(2, u.dim());
                for (col, a) in u.amplitudes().iter().enumerate() {
                    op[(i, col)] = a.conj() * h;
                }
                ops.push(op);
            }
        }
        ops
    }
}

fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "codeword dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn embed(op: &ComplexMatrix, n: usize, position: usize) -> ComplexMatrix {
    let id = pauli::identity();
    tensor_all((0..n).map(|q| if q == position { op } else { &id }))
}

fn pair_projector(a: &Ket, b: &Ket) -> ComplexMatrix {
    &ComplexMatrix::projector(a) + &ComplexMatrix::projector(b)
}

/// Derives syndrome classes from codewords and single-qubit error generators.
///
/// Every generator is applied at every position. Images are normalized and
/// must be orthogonal to everything found so far, except that a pair spanning
/// exactly the same subspace as an earlier class (with a consistent recovery)
/// is merged into it.
pub fn build_syndromes(
    logical0: &Ket,
    logical1: &Ket,
    generators: &[(String, ComplexMatrix)],
) -> Result<SyndromeTable> {
    let dim = logical0.dim();
    let n = qubit_count(dim)?;
    if logical1.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "codewords",
            expected: dim,
            found: logical1.dim(),
        });
    }
    for (name, k) in [("|0_L>", logical0), ("|1_L>", logical1)] {
        if (k.norm() - 1.0).abs() > SPECTRAL_TOL {
            return Err(Error::InvalidArgument(format!(
                "codeword {name} is not normalized"
            )));
        }
    }
    let overlap = logical0.inner(logical1).norm();
    if overlap > SPECTRAL_TOL {
        return Err(Error::NonOrthogonalSyndromes {
            first: "|0_L>".into(),
            second: "|1_L>".into(),
            overlap,
        });
    }

    let recovery_for =
        |r0: &Ket, r1: &Ket| &ComplexMatrix::outer(logical0, r0) + &ComplexMatrix::outer(logical1, r1);
    let mut syndromes = vec![Syndrome {
        label: "none".into(),
        vectors: [logical0.clone(), logical1.clone()],
        norms: [1.0, 1.0],
        projector: pair_projector(logical0, logical1),
        recovery: recovery_for(logical0, logical1),
    }];
    // Every accepted vector with a printable name, for overlap reporting.
    let mut family: Vec<(String, Ket)> = vec![
        ("none/0".into(), logical0.clone()),
        ("none/1".into(), logical1.clone()),
    ];

    for (glabel, g) in generators {
        if g.rows() != 2 || g.cols() != 2 {
            return Err(Error::DimensionMismatch {
                context: "error generator",
                expected: 2,
                found: g.rows().max(g.cols()),
            });
        }
        for pos in 0..n {
            let label = format!("{glabel}[{pos}]");
            let big = embed(g, n, pos);
            let mut vectors = Vec::with_capacity(2);
            let mut norms = [0.0; 2];
            for (b, cw) in [logical0, logical1].into_iter().enumerate() {
                let (v, nrm) = big
                    .apply(cw)?
                    .normalized()
                    .map_err(|_| Error::ZeroVector(format!("{label}/{b}")))?;
                vectors.push(v);
                norms[b] = nrm;
            }
            let [v0, v1]: [Ket; 2] = vectors.try_into().expect("two images");

            let projector = pair_projector(&v0, &v1);
            if let Some(existing) = syndromes
                .iter()
                .find(|s| s.projector.approx_eq(&projector, SPECTRAL_TOL))
            {
                // Same subspace: only harmless if the existing recovery maps
                // these images to the codewords with a common phase.
                let a = existing.recovery.apply(&v0)?.inner(logical0);
                let b = existing.recovery.apply(&v1)?.inner(logical1);
                if (a.norm() - 1.0).abs() < SPECTRAL_TOL && (a - b).norm() < SPECTRAL_TOL {
                    continue;
                }
                return Err(Error::NonOrthogonalSyndromes {
                    first: existing.label.clone(),
                    second: label,
                    overlap: 1.0,
                });
            }

            let inner = v0.inner(&v1).norm();
            if inner > SPECTRAL_TOL {
                return Err(Error::NonOrthogonalSyndromes {
                    first: format!("{label}/0"),
                    second: format!("{label}/1"),
                    overlap: inner,
                });
            }
            for (b, v) in [&v0, &v1].into_iter().enumerate() {
                for (fname, f) in &family {
                    let ov = f.inner(v).norm();
                    if ov > SPECTRAL_TOL {
                        return Err(Error::NonOrthogonalSyndromes {
                            first: fname.clone(),
                            second: format!("{label}/{b}"),
                            overlap: ov,
                        });
                    }
                }
            }
            family.push((format!("{label}/0"), v0.clone()));
            family.push((format!("{label}/1"), v1.clone()));
            syndromes.push(Syndrome {
                recovery: recovery_for(&v0, &v1),
                label,
                vectors: [v0, v1],
                norms,
                projector,
            });
        }
    }

    let mut residual_projector = ComplexMatrix::identity(dim);
    for s in &syndromes {
        residual_projector = &residual_projector - &s.projector;
    }
    let residual_basis = complete_basis(family.iter().map(|(_, k)| k), dim);
    Ok(SyndromeTable {
        syndromes,
        residual_projector,
        residual_basis,
    })
}

/// Orthonormal basis of the complement of `taken`, by Gram-Schmidt over the
/// computational basis (two passes for stability).
fn complete_basis<'a>(taken: impl Iterator<Item = &'a Ket>, dim: usize) -> Vec<Ket> {
    let mut basis: Vec<Ket> = taken.cloned().collect();
    let skip = basis.len();
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = Ket::basis(dim, i);
        for _ in 0..2 {
            for b in &basis {
                let w = b.inner(&v);
                v = v.add(&b.scale(-w));
            }
        }
        if v.norm() > 1e-6 {
            basis.push(v.normalized().expect("nonzero").0);
        }
    }
    basis.split_off(skip)
}

/// Maps a qubit density matrix into the code block: `V rho V^dagger`.
pub fn encode_qubit(state: &ComplexMatrix, code: &QecCode) -> Result<ComplexMatrix> {
    let d = state.dim()?;
    if d != 2 {
        return Err(Error::DimensionMismatch {
            context: "qubit encoding",
            expected: 2,
            found: d,
        });
    }
    code.encoder().conjugate(state)
}

/// Syndrome measurement, recovery and decoding of a block state.
///
/// Weight landing in the residual subspace comes back as `I/2`.
pub fn recover(rho_err: &ComplexMatrix, code: &QecCode) -> Result<ComplexMatrix> {
    let d = rho_err.dim()?;
    if d != code.block_dim() {
        return Err(Error::DimensionMismatch {
            context: "recovery",
            expected: code.block_dim(),
            found: d,
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for s in code.syndromes() {
        out.add_scaled(re(1.0), &s.decoder().conjugate(rho_err)?)?;
    }
    let lost = code.residual_projector().try_mul(rho_err)?.trace().re;
    out.add_scaled(re(lost / 2.0), &ComplexMatrix::identity(2))?;
    Ok(out)
}

/// Recovery kept on the physical block: `sum_k R_k M_k rho M_k R_k^dagger`,
/// plus residual weight spread evenly over the two codewords.
pub fn correct(rho_err: &ComplexMatrix, code: &QecCode) -> Result<ComplexMatrix> {
    let logical = recover(rho_err, code)?;
    encode_qubit(&logical, code)
}

fn build_fixed(
    name: &str,
    logical0: Ket,
    logical1: Ket,
    generators: Vec<(String, ComplexMatrix)>,
) -> QecCode {
    QecCode::new(name, logical0, logical1, generators)
        .unwrap_or_else(|e| panic!("built-in code {name} is inconsistent: {e}"))
}

/// Four-qubit amplitude-damping code.
pub fn leung4_code() -> QecCode {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    build_fixed(
        "leung4",
        Ket::superposition(&[(h, "0000"), (h, "1111")]),
        Ket::superposition(&[(h, "0011"), (h, "1100")]),
        vec![("A".into(), pauli::lowering())],
    )
}

/// Three-qubit phase-flip code on the `|+>, |->` basis.
pub fn phase3_code() -> QecCode {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = Ket::from_real(&[h, h]);
    let minus = Ket::from_real(&[h, -h]);
    let triple = |k: &Ket| k.tensor(k).tensor(k);
    build_fixed(
        "phase3",
        triple(&minus),
        triple(&plus),
        vec![("Z".into(), pauli::z())],
    )
}

/// Five-qubit code correcting one phase flip or one decay.
pub fn laflamme5_code() -> QecCode {
    let w = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let zero = Ket::superposition(&[
        (w, "00000"),
        (w, "11100"),
        (-w, "10011"),
        (-w, "01111"),
        (w, "11010"),
        (w, "00110"),
        (w, "01001"),
        (w, "10101"),
    ]);
    let one = Ket::superposition(&[
        (-w, "00011"),
        (w, "11111"),
        (-w, "10000"),
        (w, "01100"),
        (w, "11001"),
        (-w, "00101"),
        (-w, "01010"),
        (w, "10110"),
    ]);
    build_fixed(
        "laflamme5",
        zero,
        one,
        vec![("Z".into(), pauli::z()), ("A".into(), pauli::lowering())],
    )
}

/// Shared instance of [`leung4_code`].
pub fn leung4() -> &'static QecCode {
    static CODE: OnceLock<QecCode> = OnceLock::new();
    CODE.get_or_init(leung4_code)
}

/// Shared instance of [`phase3_code`].
pub fn phase3() -> &'static QecCode {
    static CODE: OnceLock<QecCode> = OnceLock::new();
    CODE.get_or_init(phase3_code)
}

/// Shared instance of [`laflamme5_code`].
pub fn laflamme5() -> &'static QecCode {
    static CODE: OnceLock<QecCode> = OnceLock::new();
    CODE.get_or_init(laflamme5_code)
}

/// Checks `M_j M_k = delta_jk M_j` and `sum M_k + residual = I`; returns the
/// worst deviation found.
pub fn projector_defect(code: &QecCode) -> f64 {
    let s = code.syndromes();
    let mut worst: f64 = 0.0;
    let mut sum = code.residual_projector().clone();
    for (j, a) in s.iter().enumerate() {
        sum = &sum + &a.projector;
        for (k, b) in s.iter().enumerate() {
            let prod = &a.projector * &b.projector;
            let want = if j == k {
                a.projector.clone()
            } else {
                ComplexMatrix::zeros(prod.rows(), prod.cols())
            };
            worst = worst.max(prod.max_abs_diff(&want));
        }
    }
    worst.max(sum.max_abs_diff(&ComplexMatrix::identity(code.block_dim())))
}

/// Whether every decoder-branch operator set sums to the identity.
pub fn decoder_is_complete(code: &QecCode) -> bool {
    let mut acc = ComplexMatrix::zeros(code.block_dim(), code.block_dim());
    for d in code.decoder_kraus() {
        acc = &acc + &(&d.adjoint() * &d);
    }
    acc.approx_eq(&ComplexMatrix::identity(code.block_dim()), ALGEBRAIC_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let a = ComplexMatrix::new(n, n, data).unwrap();
        let g = &a * &a.adjoint();
        let t = g.trace().re;
        g.scale_real(1.0 / t)
    }

    fn random_qubit_ket(rng: &mut ChaCha8Rng) -> Ket {
        let k = Ket::new(vec![
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ]);
        k.normalized().unwrap().0
    }

    fn all_codes() -> [&'static QecCode; 3] {
        [leung4(), phase3(), laflamme5()]
    }

    fn gram_defect(code: &QecCode) -> f64 {
        let vs: Vec<&Ket> = code.syndromes().iter().flat_map(|s| s.vectors.iter()).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - re(want)).norm());
            }
        }
        worst
    }

    #[test]
    fn leung4_single_damp_on_first_qubit() {
        let code = leung4();
        let s = &code.syndromes()[1];
        assert_eq!(s.label, "A[0]");
        assert!(s.vectors[0].add(&Ket::from_bits("0111").scale(re(-1.0))).norm() < 1e-15);
        assert!(s.vectors[1].add(&Ket::from_bits("0100").scale(re(-1.0))).norm() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.norms[0] - h).abs() < 1e-15 && (s.norms[1] - h).abs() < 1e-15);

        let m1 = pair_projector(&Ket::from_bits("0111"), &Ket::from_bits("0100"));
        assert!(s.projector.approx_eq(&m1, 1e-15));
        let r1 = &ComplexMatrix::outer(code.logical0(), &Ket::from_bits("0111"))
            + &ComplexMatrix::outer(code.logical1(), &Ket::from_bits("0100"));
        assert!(s.recovery.approx_eq(&r1, 1e-15));
    }

    #[test]
    fn class_counts_and_residual_ranks() {
        assert_eq!(leung4().syndromes().len(), 5);
        assert_eq!(phase3().syndromes().len(), 4);
        assert_eq!(laflamme5().syndromes().len(), 11);
        assert_eq!(laflamme5().syndromes().len() - 1, 10);

        assert_eq!(leung4().residual_rank(), 6);
        assert_eq!(phase3().residual_rank(), 0);
        assert_eq!(laflamme5().residual_rank(), 10);
        assert!(phase3().residual_projector().max_abs() < 1e-12);
        for code in all_codes() {
            let tr = code.residual_projector().trace().re;
            assert!((tr - code.residual_rank() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn syndrome_vectors_are_orthonormal() {
        for (code, count) in [(leung4(), 10), (phase3(), 8), (laflamme5(), 22)] {
            assert_eq!(code.syndromes().len() * 2, count);
            assert!(gram_defect(code) < 1e-12, "{}", code.name());
        }
    }

    #[test]
    fn projectors_partition_the_block() {
        for code in all_codes() {
            assert!(projector_defect(code) < 1e-12, "{}", code.name());
            assert!(decoder_is_complete(code), "{}", code.name());
            for u in code.residual_basis() {
                let v = code.residual_projector().apply(u).unwrap();
                assert!(v.add(&u.scale(re(-1.0))).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_flip_images() {
        let code = phase3();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::from_real(&[h, h]);
        let minus = Ket::from_real(&[h, -h]);
        let want = plus.tensor(&minus).tensor(&minus);
        let got = embed(&pauli::z(), 3, 0).apply(code.logical0()).unwrap();
        assert!(got.add(&want.scale(re(-1.0))).norm() < 1e-15);
        assert!(got.inner(code.logical0()).norm() < 1e-15);
        assert!(got.inner(code.logical1()).norm() < 1e-15);
    }

    #[test]
    fn noiseless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for code in all_codes() {
            for _ in 0..5 {
                let rho = random_density(&mut rng, 2);
                let back = recover(&encode_qubit(&rho, code).unwrap(), code).unwrap();
                assert!(back.approx_eq(&rho, 1e-12), "{}", code.name());
            }
        }
    }

    #[test]
    fn encoding_examples() {
        let code = leung4();
        let zero = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let enc = encode_qubit(&zero, code).unwrap();
        assert!(enc.approx_eq(&ComplexMatrix::projector(code.logical0()), 1e-15));

        let mixed = encode_qubit(&ComplexMatrix::identity(2).scale_real(0.5), code).unwrap();
        let want = pair_projector(code.logical0(), code.logical1()).scale_real(0.5);
        assert!(mixed.approx_eq(&want, 1e-15));

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let k = random_qubit_ket(&mut rng);
        let enc = encode_qubit(&ComplexMatrix::projector(&k), laflamme5()).unwrap();
        assert!(((&enc * &enc).trace().re - 1.0).abs() < 1e-12);
        assert!((enc.trace().re - 1.0).abs() < 1e-12);
        assert!(encode_qubit(&ComplexMatrix::identity(4), code).is_err());
    }

    #[test]
    fn every_correctable_error_is_undone() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for code in all_codes() {
            let n = code.n_physical();
            for _ in 0..3 {
                let k = random_qubit_ket(&mut rng);
                let rho = ComplexMatrix::projector(&k);
                let enc = encode_qubit(&rho, code).unwrap();
                for (_, g) in code.error_generators() {
                    for pos in 0..n {
                        let hit = embed(g, n, pos).conjugate(&enc).unwrap();
                        let tr = hit.trace().re;
                        let back = recover(&hit.scale_real(1.0 / tr), code).unwrap();
                        let fid = ComplexMatrix::outer(&k, &k).try_mul(&back).unwrap().trace().re;
                        assert!((fid - 1.0).abs() < 1e-10, "{} at {pos}", code.name());
                    }
                }
            }
        }
    }

    #[test]
    fn single_damp_leaves_superposition_intact() {
        let code = leung4();
        let (a, b) = (0.6, 0.8);
        let enc = code.logical0().scale(re(a)).add(&code.logical1().scale(re(b)));
        let hit = embed(&pauli::lowering(), 4, 0).apply(&enc).unwrap();
        let s = &code.syndromes()[1];
        let fixed = s.recovery.apply(&s.projector.apply(&hit).unwrap()).unwrap();
        let fixed = fixed.normalized().unwrap().0;
        assert!(fixed.add(&enc.scale(re(-1.0))).norm() < 1e-14);
    }

    #[test]
    fn triple_damp_is_miscorrected() {
        let code = leung4();
        let mut k = code.logical0().clone();
        for pos in [0, 2, 3] {
            k = embed(&pauli::lowering(), 4, pos).apply(&k).unwrap();
        }
        let (k, _) = k.normalized().unwrap();
        let rho = ComplexMatrix::projector(&k);
        let m1 = &code.syndromes()[1].projector;
        assert!(((m1 * &rho).trace().re - 1.0).abs() < 1e-14);
        let back = recover(&rho, code).unwrap();
        assert!(back.approx_eq(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), 1e-14));
    }

    #[test]
    fn double_phase_flip_is_miscorrected() {
        let code = phase3();
        let zz = &embed(&pauli::z(), 3, 0) * &embed(&pauli::z(), 3, 1);
        let rho = zz.conjugate(&ComplexMatrix::projector(code.logical0())).unwrap();
        let back = recover(&rho, code).unwrap();
        assert!(back.approx_eq(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), 1e-14));
    }

    #[test]
    fn recovery_is_a_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for code in all_codes() {
            let rho = random_density(&mut rng, code.block_dim());
            let out = recover(&rho, code).unwrap();
            assert!((out.trace().re - 1.0).abs() < 1e-12);
            assert!(out.is_hermitian(1e-14));
            assert!(crate::qmat::eigh(&out).unwrap().min_value() >= -1e-12);

            let mut via_kraus = ComplexMatrix::zeros(2, 2);
            for d in code.decoder_kraus() {
                via_kraus = &via_kraus + &d.conjugate(&rho).unwrap();
            }
            assert!(via_kraus.approx_eq(&out, 1e-12));

            let phys = correct(&rho, code).unwrap();
            assert!((phys.trace().re - 1.0).abs() < 1e-12);
        }
        assert!(recover(&ComplexMatrix::identity(4), leung4()).is_err());
    }

    #[test]
    fn residual_weight_becomes_maximally_mixed() {
        let code = leung4();
        let u = &code.residual_basis()[0];
        let out = recover(&ComplexMatrix::projector(u), code).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::identity(2).scale_real(0.5), 1e-14));
    }

    #[test]
    fn overlapping_images_are_reported() {
        let err = QecCode::new(
            "bad",
            Ket::from_bits("00"),
            Ket::from_bits("11"),
            vec![("X".into(), pauli::x())],
        )
        .unwrap_err();
        match err {
            Error::NonOrthogonalSyndromes { first, second, .. } => {
                assert_eq!(first, "X[0]");
                assert_eq!(second, "X[1]");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn coincident_classes_are_merged() {
        let code = QecCode::new(
            "rep3",
            Ket::from_bits("000"),
            Ket::from_bits("111"),
            vec![
                ("X".into(), pauli::x()),
                ("-X".into(), pauli::x().scale_real(-1.0)),
            ],
        )
        .unwrap();
        assert_eq!(code.syndromes().len(), 4);
        assert_eq!(code.residual_rank(), 0);
    }

    #[test]
    fn annihilated_codeword_is_an_error() {
        let err = QecCode::new(
            "dead",
            Ket::from_bits("00"),
            Ket::from_bits("11"),
            vec![("A".into(), pauli::lowering())],
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroVector(_)));
    }
}
