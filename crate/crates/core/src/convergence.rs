//! Mesh-refinement studies.

use crate::error::{Error, Result};
use crate::run::{execute, RunConfig, RunOutcome};

/// One refinement level: error at `t_eval` and the order observed
/// against the previous level (absent on the first).
#[derive(Clone, Copy, Debug)]
pub struct ConvergencePoint {
    pub elements: usize,
    pub error: f64,
    pub observed_order: Option<f64>,
}

/// Run `base` on each mesh in `k_list` up to `t_eval` and report the
/// oversampled error with observed orders log(e_i/e_{i+1}) / log(K_{i+1}/K_i).
pub fn convergence_study(
    base: &RunConfig,
    k_list: &[usize],
    t_eval: f64,
) -> Result<Vec<ConvergencePoint>> {
    if k_list.len() < 2 {
        return Err(Error::Config(format!(
            "a convergence study needs at least two mesh sizes, got {}",
            k_list.len()
        )));
    }
    for w in k_list.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Config(format!(
                "mesh sizes must be strictly increasing, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    if !(t_eval > 0.0) || !t_eval.is_finite() {
        return Err(Error::Config(format!(
            "evaluation time must be positive and finite, got {t_eval}"
        )));
    }

    let mut points = Vec::with_capacity(k_list.len());
    let mut prev: Option<(usize, f64)> = None;
    for &k in k_list {
        let mut cfg = base.clone();
        cfg.elements = k;
        cfg.t_final = t_eval;
        cfg.steps = None; // CFL-scaled so time error refines with the mesh
        cfg.samples = 1;
        cfg.diagnostics = false;
        let out = execute(&cfg)?;
        if let RunOutcome::Aborted { t } = out.outcome {
            return Err(Error::BlowUp { t });
        }
        let error = out.records.last().expect("completed run has records").oversampled_error;
        let observed_order = prev.map(|(kp, ep)| {
            (ep / error).ln() / ((k as f64) / (kp as f64)).ln()
        });
        points.push(ConvergencePoint {
            elements: k,
            error,
            observed_order,
        });
        prev = Some((k, error));
    }
    Ok(points)
}
