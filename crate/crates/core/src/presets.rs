//! Named experiment presets.
//!
//! Each preset expands to a family of runs (one CSV per curve) plus a
//! manifest. Step counts follow the source experiments' pace of 10000
//! steps per unit time, capped at 40000 by default so a full preset runs
//! at desk scale; the substitution is recorded in the CSV note line and
//! `paper_scale` lifts the cap.

use crate::error::{Error, Result};
use crate::output::{csv_text, svg_line_plot, Curve};
use crate::run::{execute, BasisTag, RunConfig, RunOutcome};
use crate::scheme::{FluxKind, VolumeForm};
use crate::solutions::{CaseId, CaseVariant};
use std::fmt::Write as _;
use std::path::Path;

pub const PRESET_NAMES: [&str; 9] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fd_cos",
];

#[derive(Debug)]
pub struct PresetCurve {
    pub filename: String,
    pub label: String,
    pub config: RunConfig,
    pub note: Option<String>,
}

#[derive(Debug)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub curves: Vec<PresetCurve>,
}

/// Step count for a preset run, with a note when capped.
fn steps_for(t_final: f64, paper_scale: bool) -> (usize, Option<String>) {
    let full = (10000.0 * t_final).round() as usize;
    if paper_scale || full <= 40000 {
        (full, None)
    } else {
        (40000, Some(format!("steps capped at 40000 (full scale {full})")))
    }
}

fn base_config(case: CaseId, variant: CaseVariant) -> RunConfig {
    let mut cfg = RunConfig::default_for(case);
    cfg.variant = variant;
    cfg
}

const SPLIT_FLUXES: [(FluxKind, &str); 2] = [
    (FluxKind::SplitCentral, "central"),
    (FluxKind::SplitUpwind, "upwind"),
];
const UNSPLIT_FLUXES: [(FluxKind, &str); 2] = [
    (FluxKind::UnsplitCentral, "central"),
    (FluxKind::UnsplitUpwind, "upwind"),
];
const BASES: [(BasisTag, &str); 2] = [
    (BasisTag::GaussLegendre, "gl"),
    (BasisTag::GaussLobatto, "gll"),
];

/// a(x) = x, every basis/form/flux pairing, degrees 3 and 4.
fn fig1(paper_scale: bool) -> Preset {
    let (steps, note) = steps_for(20.0, paper_scale);
    let mut curves = Vec::new();
    for &n in &[3usize, 4] {
        for &(basis, basis_name) in &BASES {
            for &(form, fluxes) in &[
                (VolumeForm::Split, SPLIT_FLUXES),
                (VolumeForm::Unsplit, UNSPLIT_FLUXES),
            ] {
                for &(flux, kind) in &fluxes {
                    let mut cfg = base_config(CaseId::AX, CaseVariant::Standard);
                    cfg.basis = basis;
                    cfg.degree = n;
                    cfg.elements = 40;
                    cfg.flux = flux;
                    cfg.form = form;
                    cfg.t_final = 20.0;
                    cfg.steps = Some(steps);
                    let filename = format!("fig1_N{n}_{basis_name}_{}_{kind}.csv", form.label());
                    cfg.output = filename.clone();
                    curves.push(PresetCurve {
                        filename,
                        label: format!("N{n} {basis_name} {} {kind}", form.label()),
                        config: cfg,
                        note: note.clone(),
                    });
                }
            }
        }
    }
    Preset {
        name: "fig1".into(),
        description: "a(x)=x long-time error, bases x forms x central/upwind".into(),
        curves,
    }
}

/// a(x) = x on Gauss nodes with the split volume form, pairing it with
/// matching (true) and non-matching (false) numerical fluxes.
fn fig2(paper_scale: bool) -> Preset {
    let (steps, note) = steps_for(20.0, paper_scale);
    let mut curves = Vec::new();
    for &n in &[3usize, 4] {
        for &(flux, kind, matched) in &[
            (FluxKind::SplitCentral, "central", "true"),
            (FluxKind::UnsplitCentral, "central", "false"),
            (FluxKind::SplitUpwind, "upwind", "true"),
            (FluxKind::UnsplitUpwind, "upwind", "false"),
        ] {
            let mut cfg = base_config(CaseId::AX, CaseVariant::Standard);
            cfg.basis = BasisTag::GaussLegendre;
            cfg.degree = n;
            cfg.elements = 40;
            cfg.flux = flux;
            cfg.form = VolumeForm::Split;
            cfg.t_final = 20.0;
            cfg.steps = Some(steps);
            let filename = format!("fig2_N{n}_{kind}_{matched}.csv");
            cfg.output = filename.clone();
            curves.push(PresetCurve {
                filename,
                label: format!("N{n} {kind} {matched}"),
                config: cfg,
                note: note.clone(),
            });
        }
    }
    Preset {
        name: "fig2".into(),
        description: "a(x)=x, split volume form with matched vs unmatched fluxes".into(),
        curves,
    }
}

/// a(x) = x^2 on [0.1, 1], all four flux kinds on both bases.
fn quadratic(name: &str, t_final: f64, paper_scale: bool) -> Preset {
    let (steps, note) = steps_for(t_final, paper_scale);
    let mut curves = Vec::new();
    for &(basis, basis_name) in &BASES {
        for &flux in &[
            FluxKind::SplitCentral,
            FluxKind::SplitUpwind,
            FluxKind::UnsplitCentral,
            FluxKind::UnsplitUpwind,
        ] {
            let mut cfg = base_config(CaseId::AX2, CaseVariant::Standard);
            cfg.basis = basis;
            cfg.degree = 3;
            cfg.elements = 40;
            cfg.flux = flux;
            cfg.form = VolumeForm::Split;
            cfg.t_final = t_final;
            cfg.steps = Some(steps);
            let filename = format!("{name}_{basis_name}_{}.csv", flux.label());
            cfg.output = filename.clone();
            curves.push(PresetCurve {
                filename,
                label: format!("{basis_name} {}", flux.label()),
                config: cfg,
                note: note.clone(),
            });
        }
    }
    Preset {
        name: name.into(),
        description: format!("a(x)=x^2 on [0.1,1], all flux kinds, t={t_final}"),
        curves,
    }
}

/// Pole variants of a(x) = x^2 on [-0.1, 1]: the exact solution leaves
/// every polynomial space in finite time, so errors must grow.
fn pole(name: &str, variant: CaseVariant, paper_scale: bool) -> Preset {
    let (steps, note) = steps_for(9.9, paper_scale);
    let mut curves = Vec::new();
    for &(basis, basis_name) in &BASES {
        for &(flux, kind) in &SPLIT_FLUXES {
            let mut cfg = base_config(CaseId::AX2, variant);
            cfg.basis = basis;
            cfg.degree = 3;
            cfg.elements = 40;
            cfg.flux = flux;
            cfg.form = VolumeForm::Split;
            cfg.t_final = 9.9;
            cfg.steps = Some(steps);
            let filename = format!("{name}_{basis_name}_{kind}.csv");
            cfg.output = filename.clone();
            curves.push(PresetCurve {
                filename,
                label: format!("{basis_name} {kind}"),
                config: cfg,
                note: note.clone(),
            });
        }
    }
    Preset {
        name: name.into(),
        description: format!(
            "a(x)=x^2 on [-0.1,1] ({}), solution blows up at t=10",
            variant.label()
        ),
        curves,
    }
}

/// a(x) = cos(x) on [0.1, pi/3]: a' < 0 everywhere, the sharp case for
/// the boundedness condition.
fn cosine(name: &str, t_final: f64, paper_scale: bool) -> Preset {
    let (steps, note) = steps_for(t_final, paper_scale);
    let mut curves = Vec::new();
    for &(basis, basis_name) in &BASES {
        for &(flux, kind) in &SPLIT_FLUXES {
            let mut cfg = base_config(CaseId::ACos, CaseVariant::Standard);
            cfg.basis = basis;
            cfg.degree = 3;
            cfg.elements = 30;
            cfg.flux = flux;
            cfg.form = VolumeForm::Split;
            cfg.t_final = t_final;
            cfg.steps = Some(steps);
            let filename = format!("{name}_{basis_name}_{kind}.csv");
            cfg.output = filename.clone();
            curves.push(PresetCurve {
                filename,
                label: format!("{basis_name} {kind}"),
                config: cfg,
                note: note.clone(),
            });
        }
    }
    Preset {
        name: name.into(),
        description: format!("a(x)=cos(x), negative a', t={t_final}"),
        curves,
    }
}

/// Single-element finite-difference run with and without artificial
/// dissipation. No source step count exists for this experiment, so both
/// scales use 40000 steps (also required for dissipation stability).
fn fd_cos() -> Preset {
    let mut curves = Vec::new();
    for &(dissipation, stem, label) in &[
        (None, "none", "no dissipation"),
        (Some(1.0), "diss", "dissipation strength 1"),
    ] {
        let mut cfg = base_config(CaseId::ACos, CaseVariant::Standard);
        cfg.basis = BasisTag::FiniteDifference;
        cfg.fd_order = 4;
        cfg.fd_nodes = 100;
        cfg.elements = 1;
        cfg.flux = FluxKind::SplitCentral;
        cfg.form = VolumeForm::Split;
        cfg.t_final = 100.0;
        cfg.steps = Some(40000);
        cfg.dissipation = dissipation;
        let filename = format!("fd_cos_{stem}.csv");
        cfg.output = filename.clone();
        curves.push(PresetCurve {
            filename,
            label: label.into(),
            config: cfg,
            note: Some("fixed 40000 steps (no source count; dissipation stability)".into()),
        });
    }
    Preset {
        name: "fd_cos".into(),
        description: "a(x)=cos(x) with an FD-SBP operator, dissipation on/off".into(),
        curves,
    }
}

pub fn build_preset(name: &str, paper_scale: bool) -> Result<Preset> {
    match name {
        "fig1" => Ok(fig1(paper_scale)),
        "fig2" => Ok(fig2(paper_scale)),
        "fig3" => Ok(quadratic("fig3", 50.0, paper_scale)),
        "fig4" => Ok(quadratic("fig4", 200.0, paper_scale)),
        "fig5" => Ok(pole("fig5", CaseVariant::NegativeDomainCos, paper_scale)),
        "fig6" => Ok(pole("fig6", CaseVariant::NegativeDomainExp, paper_scale)),
        "fig7" => Ok(cosine("fig7", 100.0, paper_scale)),
        "fig8" => Ok(cosine("fig8", 40.0, paper_scale)),
        "fd_cos" => Ok(fd_cos()),
        _ => Err(Error::Config(format!(
            "unknown preset '{name}' (available: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub struct CurveReport {
    pub filename: String,
    pub label: String,
    pub outcome: RunOutcome,
}

pub struct PresetReport {
    pub curves: Vec<CurveReport>,
}

/// Execute every curve of a preset, writing one CSV per curve, a
/// manifest, and optionally an SVG overview plot. A blow-up aborts only
/// that curve; its CSV is truncated and carries the abort trailer.
pub fn run_preset(preset: &Preset, out_dir: &Path, svg: bool) -> Result<PresetReport> {
    std::fs::create_dir_all(out_dir)?;
    let mut reports = Vec::new();
    let mut plot_curves = Vec::new();
    for curve in &preset.curves {
        let out = execute(&curve.config)?;
        std::fs::write(
            out_dir.join(&curve.filename),
            csv_text(&out, curve.note.as_deref()),
        )?;
        if svg {
            plot_curves.push(Curve {
                label: curve.label.clone(),
                points: out.records.iter().map(|r| (r.time, r.total_error)).collect(),
            });
        }
        reports.push(CurveReport {
            filename: curve.filename.clone(),
            label: curve.label.clone(),
            outcome: out.outcome,
        });
    }
    let mut manifest = String::new();
    for r in &reports {
        let status = match r.outcome {
            RunOutcome::Completed => "completed".to_string(),
            RunOutcome::Aborted { t } => format!("aborted t={t:.6}"),
        };
        let _ = writeln!(manifest, "{},{},{}", r.filename, r.label, status);
    }
    std::fs::write(out_dir.join("manifest.txt"), manifest)?;
    if svg {
        let plot = svg_line_plot(
            &preset.name,
            "time",
            "total error",
            true,
            &plot_curves,
        );
        std::fs::write(out_dir.join(format!("{}.svg", preset.name)), plot)?;
    }
    Ok(PresetReport { curves: reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts_match_the_experiments() {
        let counts = [
            ("fig1", 16),
            ("fig2", 8),
            ("fig3", 8),
            ("fig4", 8),
            ("fig5", 4),
            ("fig6", 4),
            ("fig7", 4),
            ("fig8", 4),
            ("fd_cos", 2),
        ];
        for (name, expected) in counts {
            let p = build_preset(name, false).unwrap();
            assert_eq!(p.curves.len(), expected, "{name}");
            // Filenames are unique within a preset.
            let mut names: Vec<_> = p.curves.iter().map(|c| &c.filename).collect();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), expected, "{name}");
        }
    }

    #[test]
    fn desk_scale_caps_steps_and_records_a_note() {
        let p = build_preset("fig1", false).unwrap();
        for c in &p.curves {
            assert_eq!(c.config.steps, Some(40000));
            assert!(c.note.as_deref().unwrap().contains("40000"));
            assert!(c.note.as_deref().unwrap().contains("200000"));
        }
        let p = build_preset("fig1", true).unwrap();
        for c in &p.curves {
            assert_eq!(c.config.steps, Some(200000));
            assert!(c.note.is_none());
        }
        // The pole runs pace 99000 steps at full scale.
        let p = build_preset("fig5", false).unwrap();
        for c in &p.curves {
            assert_eq!(c.config.steps, Some(40000));
            assert!(c.note.as_deref().unwrap().contains("99000"));
            assert_eq!(c.config.t_final, 9.9);
        }
        let p = build_preset("fig5", true).unwrap();
        for c in &p.curves {
            assert_eq!(c.config.steps, Some(99000));
            assert!(c.note.is_none());
        }
    }

    #[test]
    fn fig2_uses_true_false_filenames_on_gauss_nodes() {
        let p = build_preset("fig2", false).unwrap();
        assert!(p.curves.iter().all(|c| c.config.basis == BasisTag::GaussLegendre));
        assert!(p.curves.iter().all(|c| c.config.form == VolumeForm::Split));
        assert_eq!(
            p.curves.iter().filter(|c| c.filename.ends_with("_true.csv")).count(),
            4
        );
        assert_eq!(
            p.curves.iter().filter(|c| c.filename.ends_with("_false.csv")).count(),
            4
        );
    }

    #[test]
    fn unknown_preset_lists_the_available_names() {
        let e = build_preset("fig9", false).unwrap_err().to_string();
        for name in PRESET_NAMES {
            assert!(e.contains(name), "{e}");
        }
    }

    #[test]
    fn run_preset_writes_csv_manifest_and_svg() {
        // A hand-built miniature preset keeps this test fast; one curve
        // completes and one hits the pole.
        let mut quick = base_config(CaseId::AX, CaseVariant::Standard);
        quick.degree = 2;
        quick.elements = 4;
        quick.t_final = 0.2;
        quick.steps = Some(100);
        quick.samples = 4;
        let mut aborting = base_config(CaseId::AX2, CaseVariant::NegativeDomainCos);
        aborting.degree = 2;
        aborting.elements = 6;
        aborting.t_final = 10.0;
        aborting.steps = Some(1500);
        aborting.samples = 10;
        let preset = Preset {
            name: "mini".into(),
            description: "test preset".into(),
            curves: vec![
                PresetCurve {
                    filename: "mini_ok.csv".into(),
                    label: "ok".into(),
                    config: quick,
                    note: Some("test note".into()),
                },
                PresetCurve {
                    filename: "mini_abort.csv".into(),
                    label: "abort".into(),
                    config: aborting,
                    note: None,
                },
            ],
        };
        let dir = tempfile::tempdir().unwrap();
        let report = run_preset(&preset, dir.path(), true).unwrap();
        assert_eq!(report.curves.len(), 2);
        assert_eq!(report.curves[0].outcome, RunOutcome::Completed);
        assert!(matches!(report.curves[1].outcome, RunOutcome::Aborted { .. }));

        let ok_text = std::fs::read_to_string(dir.path().join("mini_ok.csv")).unwrap();
        assert!(ok_text.contains("# note: test note"));
        assert!(!ok_text.contains("ABORTED"));
        let abort_text = std::fs::read_to_string(dir.path().join("mini_abort.csv")).unwrap();
        assert!(abort_text.trim_end().ends_with("e1")); // trailer with t=10
        assert!(abort_text.contains("# ABORTED t="));
        let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains("mini_ok.csv,ok,completed"));
        assert!(manifest.contains("mini_abort.csv,abort,aborted t="));
        assert!(dir.path().join("mini.svg").exists());
    }
}
