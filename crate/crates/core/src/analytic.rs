//! Closed-form results for unprotected pairs, sudden-death onsets, and code
//! success probabilities.

use serde::{Deserialize, Serialize};

use crate::channels::ErrorProbability;
use crate::error::{Error, Result};
use crate::metrics::concurrence;
use crate::pipeline::{evolve_pair, evolve_pair_cached, ChannelKind, Family, Scenario, TwoQubitState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Concurrence,
    Fidelity,
}

/// Selects one closed-form expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    pub family: Family,
    pub channel_kind: ChannelKind,
    pub quantity: Quantity,
}

impl ClosedForm {
    pub fn new(family: Family, channel_kind: ChannelKind, quantity: Quantity) -> Self {
        Self {
            family,
            channel_kind,
            quantity,
        }
    }
}

/// Concurrence or fidelity of the unprotected pair after local noise.
///
/// AD forms read only `p_ad`, PD forms only `p_pd`.
pub fn closed_form_eval(cf: ClosedForm, alpha: f64, p_ad: ErrorProbability, p_pd: ErrorProbability) -> f64 {
    let (s, c) = alpha.sin_cos();
    let (s, c) = (s.abs(), c.abs());
    let (a, d) = match cf.channel_kind {
        ChannelKind::Ad => (p_ad.value(), 0.0),
        ChannelKind::Pd => (0.0, p_pd.value()),
        ChannelKind::Combined => (p_ad.value(), p_pd.value()),
    };
    // With a or d pinned to zero the combined expressions reduce to the pure
    // AD and PD ones, so one formula per family and quantity suffices.
    match (cf.family, cf.quantity) {
        (Family::Phi, Quantity::Concurrence) => (2.0 * (1.0 - a) * c * (s * (1.0 - d) - c * a)).max(0.0),
        (Family::Phi, Quantity::Fidelity) => {
            1.0 - 2.0 * a * c * c + a * a * c * c - 2.0 * d * (1.0 - a) * s * s * c * c
        }
        (Family::Psi, Quantity::Concurrence) => 2.0 * s * c * (1.0 - a) * (1.0 - d),
        (Family::Psi, Quantity::Fidelity) => 1.0 - a - 2.0 * d * (1.0 - a) * s * s * c * c,
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`. `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidArgument(format!("no sign change on [{lo}, {hi}]")));
    }
    let neg_low = flo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn degenerate(alpha: f64) -> bool {
    (2.0 * alpha).sin().abs() < 1e-15
}

/// Probability at which the unprotected pair's concurrence first vanishes.
///
/// `Ok(None)` means no sudden death. `Some(1)` from the AD branch means the
/// concurrence only reaches zero at full decay. Combined noise needs `kappa`
/// to tie `p_pd` to `p_ad`.
pub fn esd_onset_analytic(
    family: Family,
    channel_kind: ChannelKind,
    alpha: f64,
    kappa: Option<f64>,
) -> Result<Option<ErrorProbability>> {
    if degenerate(alpha) || family == Family::Psi {
        return Ok(None);
    }
    let t = alpha.tan().abs();
    match channel_kind {
        ChannelKind::Pd => Ok(None),
        ChannelKind::Ad => Ok(Some(ErrorProbability::new(t.min(1.0))?)),
        ChannelKind::Combined => {
            let kappa =
                kappa.ok_or_else(|| Error::InvalidArgument("combined-noise onset needs kappa".into()))?;
            if !(kappa >= 0.0 && kappa.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "kappa must be a finite non-negative number, got {kappa}"
                )));
            }
            if kappa == 0.0 {
                return Ok(Some(ErrorProbability::new(t.min(1.0))?));
            }
            let g = |p: f64| {
                let survive = (1.0 - p).powf(kappa);
                if survive == 0.0 {
                    f64::INFINITY
                } else {
                    p / survive - t
                }
            };
            let root = bisect(g, 0.0, 1.0, 1e-12)?;
            Ok(Some(ErrorProbability::new(root.clamp(0.0, 1.0))?))
        }
    }
}

/// Concurrence below this counts as zero.
pub const ZERO_CONCURRENCE: f64 = 1e-12;
/// Coarse scan step for numeric onsets.
pub const ONSET_GRID_STEP: f64 = 1e-3;
/// Grid points that must stay at zero after a candidate onset.
pub const ONSET_PROBE: usize = 10;
/// Final bracket width of the onset refinement.
pub const ONSET_TOL: f64 = 1e-7;

/// Onset of sudden death located on the simulated concurrence curve.
///
/// Scans `p = k * 1e-3` for `k = 1..999`, accepts the first point where the
/// concurrence is zero and stays zero for the next [`ONSET_PROBE`] points,
/// then bisects against the preceding point. The returned value is the
/// upper end of the final bracket. Product states (`sin 2a = 0`) give `None`.
pub fn esd_onset_numeric(
    scenario: &Scenario,
    family: Family,
    alpha: f64,
) -> Result<Option<ErrorProbability>> {
    if degenerate(alpha) {
        return Ok(None);
    }
    let state = TwoQubitState::new(family, alpha);
    let conc_cached = |p: f64| -> Result<f64> {
        let sc = scenario.with_p(ErrorProbability::new(p)?)?;
        concurrence(&evolve_pair_cached(&state, &sc)?)
    };
    let conc = |p: f64| -> Result<f64> {
        let sc = scenario.with_p(ErrorProbability::new(p)?)?;
        concurrence(&evolve_pair(&state, &sc)?)
    };

    let steps = (1.0 / ONSET_GRID_STEP).round() as usize;
    let grid: Vec<f64> = (1..steps).map(|k| k as f64 * ONSET_GRID_STEP).collect();
    let mut values: Vec<Option<f64>> = vec![None; grid.len()];
    let mut value_at = |i: usize| -> Result<f64> {
        if let Some(v) = values[i] {
            return Ok(v);
        }
        let v = conc_cached(grid[i])?;
        values[i] = Some(v);
        Ok(v)
    };

    let mut hit = None;
    for i in 0..grid.len() {
        if value_at(i)? >= ZERO_CONCURRENCE {
            continue;
        }
        let end = (i + ONSET_PROBE).min(grid.len() - 1);
        let mut stays = true;
        for j in i + 1..=end {
            if value_at(j)? >= ZERO_CONCURRENCE {
                stays = false;
                break;
            }
        }
        if stays {
            hit = Some(i);
            break;
        }
    }
    let Some(i) = hit else {
        return Ok(None);
    };

    let mut lo = if i == 0 { 0.0 } else { grid[i - 1] };
    let mut hi = grid[i];
    while hi - lo > ONSET_TOL {
        let mid = 0.5 * (lo + hi);
        if conc(mid)? < ZERO_CONCURRENCE {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(ErrorProbability::new(hi)?))
}

/// Probability that at most `t_correctable` of `n_bits` independent bits
/// fail, each with probability `p`.
pub fn code_success_probability(n_bits: u32, t_correctable: u32, p: ErrorProbability) -> Result<f64> {
    if t_correctable > n_bits {
        return Err(Error::InvalidArgument(format!(
            "cannot correct {t_correctable} errors on {n_bits} bits"
        )));
    }
    let p = p.value();
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=t_correctable {
        if k > 0 {
            binom *= f64::from(n_bits - k + 1) / f64::from(k);
        }
        total += binom * p.powi(k as i32) * (1.0 - p).powi((n_bits - k) as i32);
    }
    Ok(total.min(1.0))
}
