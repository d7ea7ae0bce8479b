//! Two-qubit evolution: encode each half, apply local noise, correct.
//!
//! Encoding, noise and correction all act on one station at a time, so the
//! corrected evolution of the pair is `L (x) L` for a single-qubit channel
//! `L`. [`effective_logical_channel`] computes that `L`; [`brute_force_pair`]
//! skips the reduction and simulates the whole register as a cross-check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::channels::{
    ad_kraus, choi_matrix, combined_kraus, kappa_pair, kraus_from_choi, pd_kraus, ErrorProbability,
    KrausChannel,
};
use crate::codes::{self, encode_qubit, recover, QecCode};
use crate::error::{Error, Result};
use crate::qmat::{apply_local, ComplexMatrix, Ket};

/// Which generalized Bell state is prepared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `cos a |11> + sin a |00>`
    Phi,
    /// `cos a |10> + sin a |01>`
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Ad,
    Pd,
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    None,
    Leung4,
    Phase3,
    Laflamme5,
}

impl CodeKind {
    /// Shared code instance, `None` for unprotected qubits.
    pub fn code(self) -> Option<&'static QecCode> {
        match self {
            CodeKind::None => None,
            CodeKind::Leung4 => Some(codes::leung4()),
            CodeKind::Phase3 => Some(codes::phase3()),
            CodeKind::Laflamme5 => Some(codes::laflamme5()),
        }
    }
}

macro_rules! names {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    _ => Err(Error::InvalidArgument(format!(concat!("unknown ", $what, " '{}'"), s))),
                }
            }
        }
    };
}

names!(Family, "family", Family::Phi => "phi", Family::Psi => "psi");
names!(ChannelKind, "channel", ChannelKind::Ad => "ad", ChannelKind::Pd => "pd", ChannelKind::Combined => "combined");
names!(CodeKind, "code", CodeKind::None => "none", CodeKind::Leung4 => "leung4", CodeKind::Phase3 => "phase3", CodeKind::Laflamme5 => "laflamme5");

/// A pure two-qubit state from one of the two families.
#[derive(Clone, Debug)]
pub struct TwoQubitState {
    pub rho: ComplexMatrix,
    pub ket: Ket,
    pub alpha: f64,
    pub family: Family,
}

impl TwoQubitState {
    pub fn new(family: Family, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let ket = match family {
            Family::Phi => Ket::superposition(&[(c, "11"), (s, "00")]),
            Family::Psi => Ket::superposition(&[(c, "10"), (s, "01")]),
        };
        Self {
            rho: ComplexMatrix::projector(&ket),
            ket,
            alpha,
            family,
        }
    }
}

pub fn make_phi(alpha: f64) -> TwoQubitState {
    TwoQubitState::new(Family::Phi, alpha)
}

pub fn make_psi(alpha: f64) -> TwoQubitState {
    TwoQubitState::new(Family::Psi, alpha)
}

/// Noise model and protection applied identically at both stations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scenario {
    pub channel_kind: ChannelKind,
    pub code: CodeKind,
    pub p_ad: ErrorProbability,
    pub p_pd: ErrorProbability,
    /// When set, a combined scenario derives `p_pd` from `p_ad` on every
    /// [`Scenario::with_p`].
    pub kappa: Option<f64>,
}

impl Scenario {
    pub fn ad(code: CodeKind, p: ErrorProbability) -> Self {
        Self {
            channel_kind: ChannelKind::Ad,
            code,
            p_ad: p,
            p_pd: ErrorProbability::ZERO,
            kappa: None,
        }
    }

    pub fn pd(code: CodeKind, p: ErrorProbability) -> Self {
        Self {
            channel_kind: ChannelKind::Pd,
            code,
            p_ad: ErrorProbability::ZERO,
            p_pd: p,
            kappa: None,
        }
    }

    pub fn combined(code: CodeKind, p_ad: ErrorProbability, p_pd: ErrorProbability) -> Self {
        Self {
            channel_kind: ChannelKind::Combined,
            code,
            p_ad,
            p_pd,
            kappa: None,
        }
    }

    /// Combined noise with `p_pd = 1 - (1 - p_ad)^kappa`.
    pub fn combined_kappa(code: CodeKind, p_ad: ErrorProbability, kappa: f64) -> Result<Self> {
        Ok(Self {
            channel_kind: ChannelKind::Combined,
            code,
            p_ad,
            p_pd: kappa_pair(p_ad, kappa)?,
            kappa: Some(kappa),
        })
    }

    /// Generic constructor used by the command line; `kappa` only matters
    /// for combined noise.
    pub fn from_parts(
        channel_kind: ChannelKind,
        code: CodeKind,
        p: ErrorProbability,
        kappa: Option<f64>,
    ) -> Result<Self> {
        match channel_kind {
            ChannelKind::Ad => Ok(Self::ad(code, p)),
            ChannelKind::Pd => Ok(Self::pd(code, p)),
            ChannelKind::Combined => Self::combined_kappa(code, p, kappa.unwrap_or(1.0)),
        }
    }

    /// The probability a sweep moves along.
    pub fn p(&self) -> ErrorProbability {
        match self.channel_kind {
            ChannelKind::Pd => self.p_pd,
            _ => self.p_ad,
        }
    }

    /// Same scenario at a different sweep probability.
    pub fn with_p(&self, p: ErrorProbability) -> Result<Self> {
        let mut out = *self;
        match self.channel_kind {
            ChannelKind::Ad => out.p_ad = p,
            ChannelKind::Pd => out.p_pd = p,
            ChannelKind::Combined => {
                out.p_ad = p;
                if let Some(k) = self.kappa {
                    out.p_pd = kappa_pair(p, k)?;
                }
            }
        }
        Ok(out)
    }

    pub fn with_code(&self, code: CodeKind) -> Self {
        Self { code, ..*self }
    }

    /// The single-qubit channel acting on every physical qubit.
    pub fn physical_channel(&self) -> KrausChannel {
        match self.channel_kind {
            ChannelKind::Ad => ad_kraus(self.p_ad),
            ChannelKind::Pd => pd_kraus(self.p_pd),
            ChannelKind::Combined => combined_kraus(self.p_ad, self.p_pd),
        }
    }

    fn key(&self) -> CacheKey {
        let (a, d) = match self.channel_kind {
            ChannelKind::Ad => (self.p_ad.value(), 0.0),
            ChannelKind::Pd => (0.0, self.p_pd.value()),
            ChannelKind::Combined => (self.p_ad.value(), self.p_pd.value()),
        };
        (self.channel_kind, self.code, a.to_bits(), d.to_bits())
    }
}

/// Noise on every qubit of a code block, one qubit at a time.
fn noisy_block(rho: &ComplexMatrix, n_qubits: usize, noise: &KrausChannel) -> Result<ComplexMatrix> {
    let dims = vec![2; n_qubits];
    let mut out = rho.clone();
    for q in 0..n_qubits {
        out = apply_local(&out, &dims, q, noise.operators())?.0;
    }
    Ok(out)
}

/// The logical single-qubit map `decode . recover . noise . encode`.
///
/// Built by pushing each `|i><j|` through the block, assembling the Choi
/// matrix and reading a Kraus set off its eigendecomposition. With no code
/// this is just the physical channel.
pub fn effective_logical_channel(scenario: &Scenario) -> Result<KrausChannel> {
    let noise = scenario.physical_channel();
    let Some(code) = scenario.code.code() else {
        return Ok(noise);
    };
    let mut choi = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let block = encode_qubit(&ComplexMatrix::unit(2, i, j), code)?;
            let block = noisy_block(&block, code.n_physical(), &noise)?;
            let out = recover(&block, code)?;
            for a in 0..2 {
                for b in 0..2 {
                    choi[(2 * i + a, 2 * j + b)] = out[(a, b)];
                }
            }
        }
    }
    kraus_from_choi(&choi.hermitize(), 2, format!("{}/{}", noise.label(), code.name()))
}

type CacheKey = (ChannelKind, CodeKind, u64, u64);

/// Memoized effective channels, safe to share between sweep workers.
#[derive(Default)]
pub struct EffectiveChannelCache {
    map: RwLock<HashMap<CacheKey, Arc<KrausChannel>>>,
}

impl EffectiveChannelCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, scenario: &Scenario) -> Result<Arc<KrausChannel>> {
        let key = scenario.key();
        if let Some(ch) = self.map.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(ch));
        }
        let ch = Arc::new(effective_logical_channel(scenario)?);
        let mut map = self.map.write().expect("cache lock");
        Ok(Arc::clone(map.entry(key).or_insert(ch)))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().expect("cache lock").clear();
    }
}

/// Process-wide cache used by [`evolve_pair_cached`].
pub fn global_cache() -> &'static EffectiveChannelCache {
    static CACHE: OnceLock<EffectiveChannelCache> = OnceLock::new();
    CACHE.get_or_init(EffectiveChannelCache::new)
}

/// `(L (x) L)(rho)`.
pub fn apply_pair_channel(rho: &ComplexMatrix, ch: &KrausChannel) -> Result<ComplexMatrix> {
    let once = apply_local(rho, &[2, 2], 0, ch.operators())?.0;
    Ok(apply_local(&once, &[2, 2], 1, ch.operators())?.0)
}

/// Evolves both halves of the pair through the scenario.
pub fn evolve_pair(state: &TwoQubitState, scenario: &Scenario) -> Result<ComplexMatrix> {
    apply_pair_channel(&state.rho, &effective_logical_channel(scenario)?)
}

/// [`evolve_pair`] through [`global_cache`].
pub fn evolve_pair_cached(state: &TwoQubitState, scenario: &Scenario) -> Result<ComplexMatrix> {
    apply_pair_channel(&state.rho, &*global_cache().get(scenario)?)
}

/// Full-register simulation of the pair.
///
/// Both qubits are encoded into a single `2^(2n)` register, the physical
/// channel hits each of the `2n` qubits, and each block is then measured,
/// recovered and decoded. Cost grows as `4^(2n)`; the five-qubit code needs
/// a 1024-dimensional register.
pub fn brute_force_pair(state: &TwoQubitState, scenario: &Scenario) -> Result<ComplexMatrix> {
    let noise = scenario.physical_channel();
    let Some(code) = scenario.code.code() else {
        let ops: Vec<ComplexMatrix> = noise
            .operators()
            .iter()
            .flat_map(|a| noise.operators().iter().map(move |b| a.tensor(b)))
            .collect();
        let mut out = ComplexMatrix::zeros(4, 4);
        for op in &ops {
            out = &out + &op.conjugate(&state.rho)?;
        }
        return Ok(out);
    };
    let n = code.n_physical();
    let enc = [code.encoder()];
    let (rho, dims) = apply_local(&state.rho, &[2, 2], 0, &enc)?;
    let (rho, _) = apply_local(&rho, &dims, 1, &enc)?;
    let rho = noisy_block(&rho, 2 * n, &noise)?;
    let dec = code.decoder_kraus();
    let bd = code.block_dim();
    let (rho, dims) = apply_local(&rho, &[bd, bd], 0, &dec)?;
    let (rho, _) = apply_local(&rho, &dims, 1, &dec)?;
    Ok(rho)
}

/// Choi matrix of the effective channel; handy for comparing scenarios.
pub fn effective_choi(scenario: &Scenario) -> Result<ComplexMatrix> {
    Ok(choi_matrix(&effective_logical_channel(scenario)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::choi_distance;
    use crate::qmat::{c, eigh};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn p(v: f64) -> ErrorProbability {
        ErrorProbability::new(v).unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let a = ComplexMatrix::new(n, n, data).unwrap();
        let g = &a * &a.adjoint();
        let t = g.trace().re;
        g.scale_real(1.0 / t)
    }

    fn assert_density(rho: &ComplexMatrix) {
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_hermitian(1e-12));
        assert!(eigh(rho).unwrap().min_value() >= -1e-10);
    }

    #[test]
    fn state_constructors() {
        let s = make_phi(PI / 4.0);
        let h = 0.5;
        assert!((s.rho[(0, 0)].re - h).abs() < 1e-15);
        assert!((s.rho[(0, 3)].re - h).abs() < 1e-15);
        let s = make_psi(0.0);
        assert!(s
            .rho
            .approx_eq(&ComplexMatrix::projector(&Ket::from_bits("10")), 1e-15));
        let s = make_phi(0.0);
        assert!(s
            .rho
            .approx_eq(&ComplexMatrix::projector(&Ket::from_bits("11")), 1e-15));
        assert_density(&make_psi(0.3).rho);
    }

    #[test]
    fn names_round_trip() {
        for k in [ChannelKind::Ad, ChannelKind::Pd, ChannelKind::Combined] {
            assert_eq!(k.as_str().parse::<ChannelKind>().unwrap(), k);
        }
        for k in [
            CodeKind::None,
            CodeKind::Leung4,
            CodeKind::Phase3,
            CodeKind::Laflamme5,
        ] {
            assert_eq!(k.to_string().parse::<CodeKind>().unwrap(), k);
        }
        assert_eq!("PSI".parse::<Family>().unwrap(), Family::Psi);
        assert!("shor9".parse::<CodeKind>().is_err());
    }

    #[test]
    fn with_p_follows_kappa() {
        let s = Scenario::combined_kappa(CodeKind::None, p(0.1), 10.0).unwrap();
        let t = s.with_p(p(0.19)).unwrap();
        assert_eq!(t.p_ad.value(), 0.19);
        assert!((t.p_pd.value() - (1.0 - 0.81f64.powi(10))).abs() < 1e-15);
        let u = Scenario::combined(CodeKind::None, p(0.1), p(0.3))
            .with_p(p(0.5))
            .unwrap();
        assert_eq!(u.p_pd.value(), 0.3);
        let v = Scenario::pd(CodeKind::Phase3, p(0.1)).with_p(p(0.4)).unwrap();
        assert_eq!(v.p().value(), 0.4);
        assert_eq!(v.p_ad.value(), 0.0);
    }

    #[test]
    fn noiseless_effective_channel_is_identity() {
        let id = KrausChannel::identity(2);
        for code in [CodeKind::Leung4, CodeKind::Phase3, CodeKind::Laflamme5] {
            for sc in [
                Scenario::ad(code, p(0.0)),
                Scenario::pd(code, p(0.0)),
                Scenario::combined(code, p(0.0), p(0.0)),
            ] {
                let ch = effective_logical_channel(&sc).unwrap();
                assert!(choi_distance(&ch, &id).unwrap() < 1e-12, "{code}");
            }
        }
    }

    #[test]
    fn effective_channels_are_cptp() {
        for code in [CodeKind::Leung4, CodeKind::Phase3, CodeKind::Laflamme5] {
            for v in [0.05, 0.3, 0.7, 1.0] {
                for sc in [
                    Scenario::ad(code, p(v)),
                    Scenario::pd(code, p(v)),
                    Scenario::combined(code, p(v), p(1.0 - v)),
                ] {
                    let ch = effective_logical_channel(&sc).unwrap();
                    assert!(ch.completeness_defect() < 1e-12);
                    assert!(crate::channels::choi_min_eigenvalue(&ch).unwrap() >= -1e-8);
                }
            }
        }
    }

    #[test]
    fn leung4_suppresses_first_order_decay() {
        let one = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let dev = |v: f64| {
            let ch = effective_logical_channel(&Scenario::ad(CodeKind::Leung4, p(v))).unwrap();
            ch.apply(&one).unwrap().max_abs_diff(&one)
        };
        let (a, b) = (dev(1e-2), dev(1e-3));
        let ratio = a / b;
        assert!((60.0..160.0).contains(&ratio), "ratio {ratio}");
        // Unprotected decay is first order.
        let bare = ad_kraus(p(1e-3)).apply(&one).unwrap().max_abs_diff(&one);
        assert!(bare > 50.0 * b);
    }

    #[test]
    fn phase3_effective_channel_matches_block_simulation() {
        let sc = Scenario::pd(CodeKind::Phase3, p(0.5));
        let ch = effective_logical_channel(&sc).unwrap();
        let code = codes::phase3();
        let noise = sc.physical_channel();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..20 {
            let rho = random_density(&mut rng, 2);
            let block = noisy_block(&encode_qubit(&rho, code).unwrap(), 3, &noise).unwrap();
            let direct = recover(&block, code).unwrap();
            assert!(ch.apply(&rho).unwrap().approx_eq(&direct, 1e-10));
        }
    }

    #[test]
    fn identity_scenario_returns_input() {
        let s = make_phi(0.7);
        for code in [CodeKind::None, CodeKind::Leung4, CodeKind::Phase3] {
            let out = evolve_pair(&s, &Scenario::ad(code, p(0.0))).unwrap();
            assert!(out.approx_eq(&s.rho, 1e-12));
            let out = brute_force_pair(&s, &Scenario::pd(code, p(0.0))).unwrap();
            assert!(out.approx_eq(&s.rho, 1e-12));
        }
    }

    #[test]
    fn full_decay_ends_in_ground_state() {
        let ground = ComplexMatrix::projector(&Ket::from_bits("00"));
        for s in [make_phi(0.4), make_psi(1.1)] {
            let out = evolve_pair(&s, &Scenario::ad(CodeKind::None, p(1.0))).unwrap();
            assert!(out.approx_eq(&ground, 1e-15));
        }
    }

    #[test]
    fn unprotected_ad_keeps_x_form() {
        let s = make_phi(0.9);
        let out = evolve_pair(&s, &Scenario::ad(CodeKind::None, p(0.35))).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                if !on_x {
                    assert_eq!(out[(i, j)].norm(), 0.0);
                }
            }
        }
        assert_eq!(out[(1, 2)].norm(), 0.0);
        assert!(out[(0, 3)].norm() > 0.1);
    }

    #[test]
    fn brute_force_without_code_is_tensor_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..5 {
            let rho = random_density(&mut rng, 4);
            let st = TwoQubitState {
                rho: rho.clone(),
                ket: Ket::from_bits("00"),
                alpha: 0.0,
                family: Family::Phi,
            };
            let sc = Scenario::combined(CodeKind::None, p(rng.gen()), p(rng.gen()));
            let a = brute_force_pair(&st, &sc).unwrap();
            let b = evolve_pair(&st, &sc).unwrap();
            assert!(a.approx_eq(&b, 1e-12));
        }
    }

    #[test]
    fn leung4_brute_force_agrees() {
        let s = make_phi(PI / 4.0);
        let sc = Scenario::ad(CodeKind::Leung4, p(0.3));
        let a = evolve_pair(&s, &sc).unwrap();
        let b = brute_force_pair(&s, &sc).unwrap();
        assert!(a.approx_eq(&b, 1e-10), "{}", a.max_abs_diff(&b));
        assert_density(&a);
    }

    #[test]
    fn phase3_brute_force_agrees() {
        let s = make_psi(PI / 7.0);
        let sc = Scenario::pd(CodeKind::Phase3, p(0.6));
        let a = evolve_pair(&s, &sc).unwrap();
        let b = brute_force_pair(&s, &sc).unwrap();
        assert!(a.approx_eq(&b, 1e-10));
    }

    #[test]
    fn cache_reuses_channels() {
        let cache = EffectiveChannelCache::new();
        let sc = Scenario::ad(CodeKind::Leung4, p(0.2));
        let a = cache.get(&sc).unwrap();
        let b = cache.get(&sc).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        // p_pd is irrelevant to AD and must not split the cache.
        let mut other = sc;
        other.p_pd = p(0.9);
        let c_ = cache.get(&other).unwrap();
        assert!(Arc::ptr_eq(&a, &c_));
        assert_eq!(cache.len(), 1);
        cache.get(&sc.with_p(p(0.3)).unwrap()).unwrap();
        assert_eq!(cache.len(), 2);
        cache.clear();
        assert!(cache.is_empty());

        let s = make_phi(0.3);
        let x = evolve_pair_cached(&s, &sc).unwrap();
        let y = evolve_pair(&s, &sc).unwrap();
        assert!(x.approx_eq(&y, 0.0));
    }

    #[test]
    fn evolved_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let alpha = rng.gen_range(0.0..PI / 2.0);
            let fam = if rng.gen() { Family::Phi } else { Family::Psi };
            let code = [
                CodeKind::None,
                CodeKind::Leung4,
                CodeKind::Phase3,
                CodeKind::Laflamme5,
            ][rng.gen_range(0..4)];
            let sc = Scenario::combined(code, p(rng.gen()), p(rng.gen()));
            assert_density(&evolve_pair(&TwoQubitState::new(fam, alpha), &sc).unwrap());
        }
    }
}
