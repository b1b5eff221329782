//! CSV output, metadata round-tripping, and SVG plots.
//!
//! Every CSV is self-describing: the metadata block holds the full
//! resolved configuration in the same key=value syntax the config parser
//! reads, so `parse_metadata` on a result file reproduces the run.

use crate::error::{Error, Result};
use crate::run::{RunConfig, RunOutcome, RunOutput, RunRecord};
use std::fmt::Write as _;
use std::path::Path;

pub const CSV_HEADER: &str = "time,total_error,eps1_error,oversampled_error,energy,\
                              BTs,Int_d,Theta2,eta,eta_running_mean,sufficiency_flag";

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_value(v),
        None => "nan".to_string(),
    }
}

fn record_line(r: &RunRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_value(r.time),
        fmt_value(r.total_error),
        fmt_value(r.eps1_error),
        fmt_value(r.oversampled_error),
        fmt_value(r.energy),
        fmt_value(r.bts),
        fmt_value(r.int_d),
        fmt_value(r.theta2),
        fmt_opt(r.eta),
        fmt_opt(r.eta_running_mean),
        if r.sufficiency { 1 } else { 0 },
    )
}

/// Render a run as CSV text. Identical inputs give identical bytes.
pub fn csv_text(output: &RunOutput, note: Option<&str>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# linadv {}", crate::VERSION);
    for line in output.config.canonical_text().lines() {
        let _ = writeln!(s, "# {line}");
    }
    if let Some(note) = note {
        let _ = writeln!(s, "# note: {note}");
    }
    let _ = writeln!(s, "{CSV_HEADER}");
    for r in &output.records {
        let _ = writeln!(s, "{}", record_line(r));
    }
    if let RunOutcome::Aborted { t } = output.outcome {
        let _ = writeln!(s, "# ABORTED t={}", fmt_value(t));
    }
    s
}

pub fn write_csv(path: &Path, output: &RunOutput, note: Option<&str>) -> Result<()> {
    std::fs::write(path, csv_text(output, note))?;
    Ok(())
}

/// Recover the configuration from a CSV metadata block.
pub fn parse_metadata(text: &str) -> Result<RunConfig> {
    let mut config_text = String::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix('#') else {
            break; // metadata block ends at the column header
        };
        let rest = rest.trim();
        if rest.starts_with("linadv") || rest.starts_with("note:") || rest.starts_with("ABORTED") {
            continue;
        }
        config_text.push_str(rest);
        config_text.push('\n');
    }
    if config_text.is_empty() {
        return Err(Error::Config("no metadata block found in CSV".into()));
    }
    RunConfig::parse(&config_text)
}

/// Fully parsed CSV: metadata, data rows, and the abort trailer if any.
pub struct ParsedCsv {
    pub config: RunConfig,
    pub note: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub aborted: Option<f64>,
}

pub fn parse_csv(text: &str) -> Result<ParsedCsv> {
    let config = parse_metadata(text)?;
    let mut note = None;
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    let mut aborted = None;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(n) = rest.strip_prefix("note:") {
                note = Some(n.trim().to_string());
            } else if let Some(t) = rest.strip_prefix("ABORTED t=") {
                aborted = Some(
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad abort trailer '{line}'")))?,
                );
            }
            continue;
        }
        if columns.is_empty() {
            columns = line.split(',').map(|c| c.to_string()).collect();
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|v| {
                if v == "nan" {
                    Ok(f64::NAN)
                } else {
                    v.parse()
                        .map_err(|_| Error::Config(format!("bad value '{v}' in CSV row")))
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != columns.len() {
            return Err(Error::Config(format!(
                "row has {} fields, header has {}",
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    if columns.is_empty() {
        return Err(Error::Config("CSV has no column header".into()));
    }
    Ok(ParsedCsv {
        config,
        note,
        columns,
        rows,
        aborted,
    })
}

/// One labelled polyline for `svg_line_plot`.
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Minimal deterministic SVG line plot. With `log_y` the y axis is
/// log10 and nonpositive or non-finite samples are dropped.
pub fn svg_line_plot(title: &str, x_label: &str, y_label: &str, log_y: bool, curves: &[Curve]) -> String {
    const W: f64 = 860.0;
    const H: f64 = 520.0;
    const ML: f64 = 70.0;
    const MR: f64 = 160.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;

    let mapped: Vec<(usize, Vec<(f64, f64)>)> = curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let pts = c
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite() && (!log_y || *y > 0.0))
                .map(|&(x, y)| (x, if log_y { y.log10() } else { y }))
                .collect();
            (i, pts)
        })
        .collect();

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in &mapped {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_max - x_min < 1e-300 {
        x_max = x_min + 1.0;
    }
    if y_max - y_min < 1e-300 {
        y_max = y_min + 1.0;
    }

    let px = |x: f64| ML + (x - x_min) / (x_max - x_min) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - y_min) / (y_max - y_min) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
        (ML + W - MR) / 2.0,
        title
    );
    // Axes.
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB
    );
    // Ticks and labels.
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let _ = writeln!(
            s,
            "<line x1=\"{0:.1}\" y1=\"{1}\" x2=\"{0:.1}\" y2=\"{2}\" stroke=\"black\"/>",
            px(xv),
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.3}</text>",
            px(xv),
            H - MB + 18.0,
            xv
        );
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{1:.1}\" x2=\"{ML}\" y2=\"{1:.1}\" stroke=\"black\"/>",
            ML - 5.0,
            py(yv)
        );
        let ylab = if log_y {
            format!("1e{yv:.1}")
        } else {
            format!("{yv:.3e}")
        };
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>",
            ML - 8.0,
            py(yv) + 4.0,
            ylab
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        (ML + W - MR) / 2.0,
        H - 12.0,
        x_label
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{}</text>",
        (MT + H - MB) / 2.0,
        y_label
    );
    // Curves and legend.
    for (i, pts) in &mapped {
        let colour = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let mut points = String::new();
            for &(x, y) in pts {
                let _ = write!(points, "{:.2},{:.2} ", px(x), py(y));
            }
            let _ = writeln!(
                s,
                "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>",
                points.trim_end()
            );
        }
        let ly = MT + 16.0 * (*i as f64);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{ly:.1}\" x2=\"{}\" y2=\"{ly:.1}\" stroke=\"{colour}\" stroke-width=\"2\"/>",
            W - MR + 10.0,
            W - MR + 34.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            W - MR + 40.0,
            ly + 4.0,
            curves[*i].label
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::{BasisTag, RunConfig};
    use crate::solutions::CaseId;

    fn fake_output(aborted: bool) -> RunOutput {
        let mut config = RunConfig::default_for(CaseId::AX);
        config.steps = Some(100);
        config.basis = BasisTag::GaussLegendre;
        let rec = |t: f64, e: f64, eta: Option<f64>| RunRecord {
            time: t,
            total_error: e,
            eps1_error: e,
            oversampled_error: e * 1.5,
            energy: 3.0,
            bts: 0.25,
            int_d: 0.5 * e * e,
            theta2: 0.0,
            eta: eta,
            eta_running_mean: eta,
            sufficiency: eta.is_some(),
        };
        RunOutput {
            config,
            records: vec![rec(0.0, 0.0, None), rec(0.5, 1e-3, Some(0.75))],
            outcome: if aborted {
                RunOutcome::Aborted { t: 0.75 }
            } else {
                RunOutcome::Completed
            },
        }
    }

    #[test]
    fn csv_layout_and_formatting() {
        let text = csv_text(&fake_output(false), Some("hand-built record"));
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("# linadv {}", crate::VERSION));
        assert!(text.contains("# case=a_x\n"));
        assert!(text.contains("# steps=100\n"));
        assert!(text.contains("# note: hand-built record\n"));
        let header = text
            .lines()
            .find(|l| !l.starts_with('#'))
            .unwrap();
        assert_eq!(
            header,
            "time,total_error,eps1_error,oversampled_error,energy,BTs,Int_d,Theta2,eta,eta_running_mean,sufficiency_flag"
        );
        assert_eq!(header, CSV_HEADER);
        let first_row = text.lines().nth(header_row_index(&text) + 1).unwrap();
        assert!(first_row.starts_with("0.0000000000000000e0,"));
        assert!(first_row.ends_with(",nan,nan,0"));
        let second_row = text.lines().nth(header_row_index(&text) + 2).unwrap();
        assert!(second_row.contains("7.5000000000000000e-1"));
        assert!(second_row.ends_with(",1"));
        assert!(!text.contains("ABORTED"));
    }

    fn header_row_index(text: &str) -> usize {
        text.lines().position(|l| !l.starts_with('#')).unwrap()
    }

    #[test]
    fn csv_is_byte_deterministic() {
        let a = csv_text(&fake_output(false), None);
        let b = csv_text(&fake_output(false), None);
        assert_eq!(a, b);
    }

    #[test]
    fn abort_trailer_round_trips() {
        let text = csv_text(&fake_output(true), None);
        assert!(text.ends_with("# ABORTED t=7.5000000000000000e-1\n"));
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.aborted, Some(0.75));
        assert_eq!(parsed.rows.len(), 2);
    }

    #[test]
    fn metadata_block_reproduces_config() {
        let out = fake_output(false);
        let text = csv_text(&out, Some("a note, ignored by the parser"));
        let config = parse_metadata(&text).unwrap();
        assert_eq!(config, out.config);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.config, out.config);
        assert_eq!(parsed.note.as_deref(), Some("a note, ignored by the parser"));
        assert_eq!(parsed.columns.len(), 11);
        assert!(parsed.rows[0][8].is_nan());
        assert_eq!(parsed.rows[1][10], 1.0);
    }

    #[test]
    fn truncated_csv_still_parses() {
        let text = csv_text(&fake_output(true), None);
        // Drop the last data row but keep the trailer, as an abort that
        // lands between samples would.
        let lines: Vec<&str> = text.lines().collect();
        let n = lines.len();
        let truncated = format!("{}\n{}\n", lines[..n - 2].join("\n"), lines[n - 1]);
        let parsed = parse_csv(&truncated).unwrap();
        assert_eq!(parsed.rows.len(), 1);
        assert_eq!(parsed.aborted, Some(0.75));
    }

    #[test]
    fn svg_plot_contains_each_curve() {
        let curves = vec![
            Curve {
                label: "upwind".into(),
                points: vec![(0.0, 1e-3), (1.0, 2e-3), (2.0, 1.5e-3)],
            },
            Curve {
                label: "central".into(),
                points: vec![(0.0, 1e-3), (1.0, 0.0), (2.0, 4e-1)],
            },
        ];
        let svg = svg_line_plot("demo", "time", "error", true, &curves);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">upwind<"));
        assert!(svg.contains(">central<"));
        assert!(!svg.contains("NaN"));
        // The zero sample is dropped on a log axis, not plotted.
        assert!(svg.contains("demo"));
    }
}
