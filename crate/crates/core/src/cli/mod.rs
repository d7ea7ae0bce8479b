//! Sweeps, onset tables and figure data behind the `qec-esd` binary.

mod figures;
pub mod format;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{esd_onset_analytic, esd_onset_numeric};
use crate::channels::ErrorProbability;
use crate::error::{Error, Result};
use crate::metrics::{concurrence, fidelity_with_initial};
use crate::pipeline::{evolve_pair, ChannelKind, CodeKind, Family, Scenario, TwoQubitState};

pub use figures::{run_figure, FIGURE_IDS};
use format::{fmt_g, fmt_opt, round_sig, CsvWriter};

/// Overrides the default directory for figure files.
pub const OUT_DIR_ENV: &str = "QEC_ESD_OUT_DIR";

/// Discrepancy threshold between analytic and numeric onsets.
pub const ONSET_DISCREPANCY: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Onset,
    Figure(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidArgument(format!("unknown format '{s}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// The code each channel is usually paired with.
pub fn default_code(kind: ChannelKind) -> CodeKind {
    match kind {
        ChannelKind::Ad => CodeKind::Leung4,
        ChannelKind::Pd => CodeKind::Phase3,
        ChannelKind::Combined => CodeKind::Laflamme5,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub channel_kind: ChannelKind,
    pub family: Family,
    pub alpha: f64,
    pub kappa: f64,
    pub code: CodeKind,
    pub grid_size: usize,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn sweep(channel_kind: ChannelKind, family: Family, alpha: f64, code: CodeKind) -> Self {
        Self {
            command: Command::Sweep,
            channel_kind,
            family,
            alpha,
            kappa: 1.0,
            code,
            grid_size: 101,
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn onset(channel_kind: ChannelKind, family: Family, code: CodeKind) -> Self {
        Self {
            command: Command::Onset,
            alpha: std::f64::consts::FRAC_PI_4,
            grid_size: 15,
            ..Self::sweep(channel_kind, family, 0.0, code)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be at least 2, got {}",
                self.grid_size
            )));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "kappa must be a finite non-negative number, got {}",
                self.kappa
            )));
        }
        if self.command == Command::Sweep && !(self.alpha > 0.0 && self.alpha < FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie strictly between 0 and pi/2, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Unprotected scenario at probability `p`.
    pub fn scenario(&self, p: ErrorProbability) -> Result<Scenario> {
        Scenario::from_parts(self.channel_kind, CodeKind::None, p, Some(self.kappa))
    }

    fn kappa_opt(&self) -> Option<f64> {
        (self.channel_kind == ChannelKind::Combined).then_some(self.kappa)
    }

    fn comments(&self, w: &mut CsvWriter) {
        w.comment("channel", self.channel_kind);
        w.comment("family", self.family);
        if self.command == Command::Sweep {
            w.comment("alpha", fmt_g(self.alpha));
        }
        if let Some(k) = self.kappa_opt() {
            w.comment("kappa", fmt_g(k));
        }
        w.comment("code", self.code);
        w.comment("grid", self.grid_size);
    }
}

/// `grid_size` evenly spaced probabilities from 0 to 1 inclusive.
pub fn p_grid(grid_size: usize) -> Vec<f64> {
    let last = (grid_size.max(2) - 1) as f64;
    (0..grid_size.max(2)).map(|k| k as f64 / last).collect()
}

/// `grid_size` mixing angles strictly inside `(0, pi/2)`.
pub fn alpha_grid(grid_size: usize) -> Vec<f64> {
    let step = FRAC_PI_2 / (grid_size + 1) as f64;
    (1..=grid_size).map(|k| k as f64 * step).collect()
}

/// One point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub p: f64,
    pub c_unc: f64,
    pub c_cor: f64,
    pub f_unc: f64,
    pub f_cor: f64,
}

impl SweepRecord {
    pub fn delta_c(&self) -> f64 {
        self.c_cor - self.c_unc
    }

    pub fn delta_f(&self) -> f64 {
        self.f_cor - self.f_unc
    }
}

/// Uncorrected and corrected metrics at a single probability.
pub fn sweep_point(state: &TwoQubitState, base: &Scenario, code: CodeKind, p: f64) -> Result<SweepRecord> {
    let sc = base.with_p(ErrorProbability::new(p)?)?;
    let unc = evolve_pair(state, &sc.with_code(CodeKind::None))?;
    let cor = evolve_pair(state, &sc.with_code(code))?;
    Ok(SweepRecord {
        p,
        c_unc: concurrence(&unc)?,
        c_cor: concurrence(&cor)?,
        f_unc: fidelity_with_initial(&unc, state)?,
        f_cor: fidelity_with_initial(&cor, state)?,
    })
}

/// Evaluates both pipelines over [`p_grid`], in parallel, ordered by `p`.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let state = TwoQubitState::new(config.family, config.alpha);
    let base = config.scenario(ErrorProbability::ZERO)?;
    p_grid(config.grid_size)
        .into_par_iter()
        .map(|p| sweep_point(&state, &base, config.code, p))
        .collect()
}

/// One row of an onset table. `None` means no sudden death was found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OnsetRow {
    pub alpha: f64,
    pub analytic: Option<f64>,
    pub numeric_uncorrected: Option<f64>,
    pub numeric_corrected: Option<f64>,
    /// Analytic and uncorrected numeric onsets differ by more than
    /// [`ONSET_DISCREPANCY`] (a missing onset counts as 1).
    pub discrepancy: bool,
}

pub fn onset_row(
    channel_kind: ChannelKind,
    family: Family,
    code: CodeKind,
    kappa: f64,
    alpha: f64,
) -> Result<OnsetRow> {
    let kappa_opt = (channel_kind == ChannelKind::Combined).then_some(kappa);
    let base = Scenario::from_parts(channel_kind, CodeKind::None, ErrorProbability::ZERO, Some(kappa))?;
    let analytic = esd_onset_analytic(family, channel_kind, alpha, kappa_opt)?.map(|p| p.value());
    let unc = esd_onset_numeric(&base, family, alpha)?.map(|p| p.value());
    let cor = esd_onset_numeric(&base.with_code(code), family, alpha)?.map(|p| p.value());
    let discrepancy = (analytic.unwrap_or(1.0) - unc.unwrap_or(1.0)).abs() > ONSET_DISCREPANCY;
    Ok(OnsetRow {
        alpha,
        analytic,
        numeric_uncorrected: unc,
        numeric_corrected: cor,
        discrepancy,
    })
}

/// Onset probabilities over [`alpha_grid`].
pub fn run_onset_table(config: &RunConfig) -> Result<Vec<OnsetRow>> {
    config.validate()?;
    alpha_grid(config.grid_size)
        .into_par_iter()
        .map(|a| onset_row(config.channel_kind, config.family, config.code, config.kappa, a))
        .collect()
}

#[derive(Serialize)]
struct JsonConfig<'a> {
    command: &'a str,
    channel: ChannelKind,
    family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    code: CodeKind,
    grid: usize,
}

impl<'a> JsonConfig<'a> {
    fn new(config: &RunConfig, command: &'a str) -> Self {
        Self {
            command,
            channel: config.channel_kind,
            family: config.family,
            alpha: (config.command == Command::Sweep).then(|| round_sig(config.alpha)),
            kappa: config.kappa_opt().map(round_sig),
            code: config.code,
            grid: config.grid_size,
        }
    }
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    config: JsonConfig<'a>,
    records: Vec<T>,
}

fn to_json<T: Serialize>(doc: &JsonDoc<'_, T>) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

pub fn render_sweep(config: &RunConfig, records: &[SweepRecord]) -> String {
    match config.format {
        OutputFormat::Csv => {
            let mut w = CsvWriter::new();
            w.comment("command", "sweep");
            config.comments(&mut w);
            w.header(&["p", "c_unc", "c_cor", "f_unc", "f_cor"]);
            for r in records {
                w.row(&[r.p, r.c_unc, r.c_cor, r.f_unc, r.f_cor].map(fmt_g));
            }
            w.finish()
        }
        OutputFormat::Json => to_json(&JsonDoc {
            config: JsonConfig::new(config, "sweep"),
            records: records
                .iter()
                .map(|r| SweepRecord {
                    p: round_sig(r.p),
                    c_unc: round_sig(r.c_unc),
                    c_cor: round_sig(r.c_cor),
                    f_unc: round_sig(r.f_unc),
                    f_cor: round_sig(r.f_cor),
                })
                .collect(),
        }),
    }
}

pub fn render_onset_table(config: &RunConfig, rows: &[OnsetRow]) -> String {
    match config.format {
        OutputFormat::Csv => {
            let mut w = CsvWriter::new();
            w.comment("command", "onset");
            config.comments(&mut w);
            w.comment("none", "no sudden death found for p < 1");
            onset_csv(&mut w, rows, &[], true);
            w.finish()
        }
        OutputFormat::Json => to_json(&JsonDoc {
            config: JsonConfig::new(config, "onset"),
            records: rows
                .iter()
                .map(|r| OnsetRow {
                    alpha: round_sig(r.alpha),
                    analytic: r.analytic.map(round_sig),
                    numeric_uncorrected: r.numeric_uncorrected.map(round_sig),
                    numeric_corrected: r.numeric_corrected.map(round_sig),
                    discrepancy: r.discrepancy,
                })
                .collect(),
        }),
    }
}

/// Writes onset rows, each prefixed by the fixed `lead` cells.
pub(crate) fn onset_csv(w: &mut CsvWriter, rows: &[OnsetRow], lead: &[(&str, String)], header: bool) {
    if header {
        let mut cols: Vec<&str> = lead.iter().map(|(k, _)| *k).collect();
        cols.extend([
            "alpha",
            "analytic",
            "numeric_uncorrected",
            "numeric_corrected",
            "discrepancy",
        ]);
        w.header(&cols);
    }
    for r in rows {
        let mut cells: Vec<String> = lead.iter().map(|(_, v)| v.clone()).collect();
        cells.extend([
            fmt_g(r.alpha),
            fmt_opt(r.analytic),
            fmt_opt(r.numeric_uncorrected),
            fmt_opt(r.numeric_corrected),
            u8::from(r.discrepancy).to_string(),
        ]);
        w.row(&cells);
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, text).map_err(io)
}

/// Runs a sweep or onset command and returns its rendered text, also
/// writing it to `config.output_path` when set.
pub fn execute(config: &RunConfig) -> Result<String> {
    let text = match config.command {
        Command::Sweep => render_sweep(config, &run_sweep(config)?),
        Command::Onset => render_onset_table(config, &run_onset_table(config)?),
        Command::Figure(id) => {
            let dir = config.output_path.clone().unwrap_or_else(default_out_dir);
            let files = run_figure(id, &dir, Some(config.grid_size))?;
            return Ok(files.iter().map(|f| format!("{}\n", f.display())).collect());
        }
    };
    if let Some(path) = &config.output_path {
        write_output(path, &text)?;
    }
    Ok(text)
}

/// `$QEC_ESD_OUT_DIR`, or the working directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Parses an angle in radians: a float, or `pi`, `pi/N`, `kpi/N`, `k*pi/N`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let bad = || Error::InvalidArgument(format!("cannot parse angle '{s}'"));
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let Some(idx) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    };
    let (head, tail) = (&t[..idx], &t[idx + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    let v = coef * std::f64::consts::PI / denom;
    v.is_finite().then_some(v).ok_or_else(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle(" PI/12 ").unwrap(), PI / 12.0);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("3*pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        for bad in ["", "pi/0", "pi/x", "abc", "2pi4", "nan"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        let g = p_grid(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[50], 0.5);
        assert_eq!(g[100], 1.0);
        let a = alpha_grid(15);
        for (k, x) in a.iter().enumerate() {
            assert!((x - (k + 1) as f64 * PI / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::sweep(ChannelKind::Ad, Family::Phi, PI / 4.0, CodeKind::Leung4);
        assert!(c.validate().is_ok());
        c.grid_size = 1;
        assert!(c.validate().is_err());
        c.grid_size = 10;
        c.alpha = 0.0;
        assert!(matches!(c.validate(), Err(Error::InvalidArgument(_))));
        c.alpha = FRAC_PI_2;
        assert!(c.validate().is_err());
        c.alpha = 0.3;
        c.kappa = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn sweep_examples() {
        let c = RunConfig::sweep(ChannelKind::Ad, Family::Phi, PI / 4.0, CodeKind::Leung4);
        let recs = run_sweep(&c).unwrap();
        assert_eq!(recs.len(), 101);
        let r0 = recs[0];
        for v in [r0.c_unc, r0.c_cor, r0.f_unc, r0.f_cor] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert_eq!(recs[50].p, 0.5);
        assert!((recs[50].c_unc - 0.25).abs() < 1e-10);
        let text = render_sweep(&c, &recs);
        assert!(text.starts_with("# command: sweep\n"));
        assert!(text.contains("\np,c_unc,c_cor,f_unc,f_cor\n0,1,1,1,1\n"));
    }

    #[test]
    fn json_sweep_parses() {
        let mut c = RunConfig::sweep(ChannelKind::Pd, Family::Psi, PI / 12.0, CodeKind::Phase3);
        c.grid_size = 5;
        c.format = OutputFormat::Json;
        let text = render_sweep(&c, &run_sweep(&c).unwrap());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["config"]["code"], "phase3");
        assert_eq!(v["records"].as_array().unwrap().len(), 5);
        assert_eq!(v["records"][4]["p"], 1.0);
    }

    #[test]
    fn onset_rows() {
        let mut c = RunConfig::onset(ChannelKind::Pd, Family::Psi, CodeKind::None);
        c.grid_size = 3;
        let rows = run_onset_table(&c).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.analytic.is_none() && r.numeric_uncorrected.is_none()));
        assert!(rows.iter().all(|r| !r.discrepancy));
        let text = render_onset_table(&c, &rows);
        assert!(text.contains(",NONE,NONE,NONE,0\n"));
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = write_output(&blocker.join("child.csv"), "y").unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("file"));
    }
}
