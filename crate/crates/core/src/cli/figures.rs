//! Data series behind each figure, one CSV file per figure.
//!
//! | id | content |
//! |----|---------|
//! | 1  | success probability of the (4,1) and (9,2) codes vs p |
//! | 2  | Phi under AD, leung4 |
//! | 3  | Psi under AD, leung4 |
//! | 4  | PD, phase3 |
//! | 5  | corrected minus uncorrected, AD, leung4 |
//! | 6  | corrected minus uncorrected, PD, phase3 |
//! | 7  | onset vs alpha, AD (leung4) and PD (phase3) |
//! | 8  | onset vs alpha, combined noise (laflamme5), kappa 1 and 10 |
//!
//! Curves 2-6 use alpha = pi/4 and pi/12.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::format::{fmt_g, CsvWriter};
use super::{alpha_grid, onset_csv, onset_row, p_grid, sweep_point, write_output, SweepRecord};
use crate::analytic::code_success_probability;
use crate::channels::ErrorProbability;
use crate::error::{Error, Result};
use crate::pipeline::{ChannelKind, CodeKind, Family, Scenario, TwoQubitState};

pub const FIGURE_IDS: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

const P_POINTS: usize = 101;
const ALPHA_POINTS: usize = 31;
const ALPHAS: [(f64, &str); 2] = [(PI / 4.0, "pi/4"), (PI / 12.0, "pi/12")];

/// Writes `fig{id}.csv` into `out_dir`. `grid` overrides the number of
/// probabilities (figures 1-6) or angles (7-8).
pub fn run_figure(fig_id: u32, out_dir: &Path, grid: Option<usize>) -> Result<Vec<PathBuf>> {
    if let Some(g) = grid {
        if g < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be at least 2, got {g}"
            )));
        }
    }
    let p_points = grid.unwrap_or(P_POINTS);
    let a_points = grid.unwrap_or(ALPHA_POINTS);
    let text = match fig_id {
        1 => success_figure(p_points)?,
        2 => curve_figure(
            2,
            ChannelKind::Ad,
            CodeKind::Leung4,
            &[Family::Phi],
            false,
            p_points,
        )?,
        3 => curve_figure(
            3,
            ChannelKind::Ad,
            CodeKind::Leung4,
            &[Family::Psi],
            false,
            p_points,
        )?,
        4 => curve_figure(
            4,
            ChannelKind::Pd,
            CodeKind::Phase3,
            &[Family::Phi, Family::Psi],
            false,
            p_points,
        )?,
        5 => curve_figure(
            5,
            ChannelKind::Ad,
            CodeKind::Leung4,
            &[Family::Phi, Family::Psi],
            true,
            p_points,
        )?,
        6 => curve_figure(
            6,
            ChannelKind::Pd,
            CodeKind::Phase3,
            &[Family::Phi, Family::Psi],
            true,
            p_points,
        )?,
        7 => onset_figure(a_points)?,
        8 => combined_onset_figure(a_points)?,
        other => return Err(Error::UnknownFigure(other)),
    };
    let path = out_dir.join(format!("fig{fig_id}.csv"));
    write_output(&path, &text)?;
    Ok(vec![path])
}

fn success_figure(points: usize) -> Result<String> {
    let mut w = CsvWriter::new();
    w.comment("figure", 1);
    w.comment("content", "probability that every error is correctable");
    w.comment("success_4_1", "4 bits, up to 1 error");
    w.comment("success_9_2", "9 bits, up to 2 errors");
    w.header(&["p", "success_4_1", "success_9_2"]);
    for p in p_grid(points) {
        let q = ErrorProbability::new(p)?;
        w.row(&[
            fmt_g(p),
            fmt_g(code_success_probability(4, 1, q)?),
            fmt_g(code_success_probability(9, 2, q)?),
        ]);
    }
    Ok(w.finish())
}

fn curve_figure(
    id: u32,
    kind: ChannelKind,
    code: CodeKind,
    families: &[Family],
    deltas: bool,
    points: usize,
) -> Result<String> {
    let mut w = CsvWriter::new();
    w.comment("figure", id);
    w.comment("channel", kind);
    w.comment("code", code);
    w.comment("grid", points);
    if deltas {
        w.comment("delta_c", "c_cor - c_unc");
        w.comment("delta_f", "f_cor - f_unc");
        w.header(&["family", "alpha", "p", "delta_c", "delta_f"]);
    } else {
        w.header(&["family", "alpha", "p", "c_unc", "c_cor", "f_unc", "f_cor"]);
    }
    let base = Scenario::from_parts(kind, CodeKind::None, ErrorProbability::ZERO, None)?;
    let grid = p_grid(points);
    for &family in families {
        for (alpha, label) in ALPHAS {
            let state = TwoQubitState::new(family, alpha);
            let recs: Vec<SweepRecord> = grid
                .par_iter()
                .map(|&p| sweep_point(&state, &base, code, p))
                .collect::<Result<_>>()?;
            for r in recs {
                let mut cells = vec![family.to_string(), label.to_string(), fmt_g(r.p)];
                if deltas {
                    cells.extend([fmt_g(r.delta_c()), fmt_g(r.delta_f())]);
                } else {
                    cells.extend([r.c_unc, r.c_cor, r.f_unc, r.f_cor].map(fmt_g));
                }
                w.row(&cells);
            }
        }
    }
    Ok(w.finish())
}

fn onset_figure(points: usize) -> Result<String> {
    let mut w = CsvWriter::new();
    w.comment("figure", 7);
    w.comment("content", "sudden-death onset p vs alpha");
    w.comment("none", "no sudden death found for p < 1");
    let alphas = alpha_grid(points);
    let mut blocks = Vec::new();
    for (kind, code) in [
        (ChannelKind::Ad, CodeKind::Leung4),
        (ChannelKind::Pd, CodeKind::Phase3),
    ] {
        for family in [Family::Phi, Family::Psi] {
            let rows = alphas
                .par_iter()
                .map(|&a| onset_row(kind, family, code, 1.0, a))
                .collect::<Result<Vec<_>>>()?;
            blocks.push((kind, code, family, rows));
        }
    }
    for (i, (kind, code, family, rows)) in blocks.into_iter().enumerate() {
        let lead = [
            ("channel", kind.to_string()),
            ("code", code.to_string()),
            ("family", family.to_string()),
        ];
        onset_csv(&mut w, &rows, &lead, i == 0);
    }
    Ok(w.finish())
}

fn combined_onset_figure(points: usize) -> Result<String> {
    let mut w = CsvWriter::new();
    w.comment("figure", 8);
    w.comment("content", "sudden-death onset p_ad vs alpha under combined noise");
    w.comment("channel", ChannelKind::Combined);
    w.comment("code", CodeKind::Laflamme5);
    w.comment("coupling", "p_pd = 1 - (1 - p_ad)^kappa");
    w.comment("none", "no sudden death found for p < 1");
    w.comment(
        "zero",
        "concurrence below 1e-12; psi at kappa 10 decays as (1-p)^11 and crosses it near p = 0.9",
    );
    let alphas = alpha_grid(points);
    let mut header = true;
    for kappa in [1.0, 10.0] {
        for family in [Family::Phi, Family::Psi] {
            let rows = alphas
                .par_iter()
                .map(|&a| onset_row(ChannelKind::Combined, family, CodeKind::Laflamme5, kappa, a))
                .collect::<Result<Vec<_>>>()?;
            let lead = [("kappa", fmt_g(kappa)), ("family", family.to_string())];
            onset_csv(&mut w, &rows, &lead, header);
            header = false;
        }
    }
    Ok(w.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_figure() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            run_figure(9, dir.path(), None),
            Err(Error::UnknownFigure(9))
        ));
        assert!(matches!(
            run_figure(0, dir.path(), None),
            Err(Error::UnknownFigure(0))
        ));
    }

    #[test]
    fn figure_one_layout() {
        let dir = tempfile::tempdir().unwrap();
        let files = run_figure(1, dir.path(), Some(11)).unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "p,success_4_1,success_9_2");
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[2], "0.1,0.9477,0.947027862");
    }

    #[test]
    fn onset_figure_has_one_header() {
        let text = onset_figure(2).unwrap();
        let headers = text.lines().filter(|l| l.starts_with("channel,")).count();
        assert_eq!(headers, 1);
        let rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows, 1 + 2 * 2 * 2);
    }
}
