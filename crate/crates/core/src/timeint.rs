//! Time integration: the ten-stage, fourth-order strong-stability-preserving
//! Runge-Kutta method in its two-register form, plus a driver that lands
//! exactly on requested sample times.

use crate::error::{Error, Result};
use crate::semidisc::{State, BLOWUP_LIMIT};

/// One SSPRK(10,4) step from t to t + dt.
///
/// Two-register form: five forward-Euler substeps of length dt/6, a register
/// combination, four more substeps, and a final combination whose last
/// right-hand-side evaluation happens exactly at t + dt. That last property
/// matters: when dt is computed as t_final - t the closing stage is evaluated
/// at t_final itself, not a rounding neighbour of it.
pub fn ssprk_10_4_step<F>(u: &State, t: f64, dt: f64, f: &mut F) -> Result<State>
where
    F: FnMut(&State, f64) -> Result<State>,
{
    let sixth = dt / 6.0;
    let mut q1 = u.clone();
    let mut q2 = u.clone();
    for i in 0..5u32 {
        let k = f(&q1, t + f64::from(i) * sixth)?;
        q1.scaled_add(sixth, &k);
    }
    q2.zip_mut_with(&q1, |b, &a| *b = *b / 25.0 + (9.0 / 25.0) * a);
    q1.zip_mut_with(&q2, |a, &b| *a = 15.0 * b - 5.0 * *a);
    for i in 2..6u32 {
        let k = f(&q1, t + f64::from(i) * sixth)?;
        q1.scaled_add(sixth, &k);
    }
    let k = f(&q1, t + dt)?;
    let mut out = q2;
    out.scaled_add(3.0 / 5.0, &q1);
    out.scaled_add(dt / 10.0, &k);
    Ok(out)
}

/// Step/sample schedule on [0, t_final]: the union of a uniform step grid
/// with the requested sample times, each time flagged when output is due.
pub struct TimeSchedule {
    pub times: Vec<f64>,
    pub is_sample: Vec<bool>,
}

impl TimeSchedule {
    pub fn build(t_final: f64, n_steps: usize, sample_times: &[f64]) -> Result<TimeSchedule> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::Config(format!(
                "final time must be positive and finite, got {t_final}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Config("need at least one time step".into()));
        }
        for w in sample_times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Config("sample times must be strictly increasing".into()));
            }
        }
        if let (Some(&first), Some(&last)) = (sample_times.first(), sample_times.last()) {
            if first < 0.0 || last > t_final {
                return Err(Error::Config(format!(
                    "sample times must lie in [0, {t_final}]"
                )));
            }
        }

        let tol = t_final * 1e-13;
        let n = n_steps as f64;
        let mut times = Vec::with_capacity(n_steps + 1 + sample_times.len());
        let mut is_sample = Vec::with_capacity(times.capacity());
        let mut si = 0;
        for i in 0..=n_steps {
            let tg = t_final * (i as f64 / n);
            while si < sample_times.len() && sample_times[si] < tg - tol {
                times.push(sample_times[si]);
                is_sample.push(true);
                si += 1;
            }
            if si < sample_times.len() && (sample_times[si] - tg).abs() <= tol {
                // Keep the requested value so observers see the exact time.
                times.push(sample_times[si]);
                is_sample.push(true);
                si += 1;
            } else {
                times.push(tg);
                is_sample.push(false);
            }
        }
        debug_assert_eq!(si, sample_times.len());
        Ok(TimeSchedule { times, is_sample })
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }
}

/// How a time integration ended.
pub enum IntegrationOutcome {
    Completed { state: State },
    /// The right-hand side or the state stopped being representable at time t.
    Aborted { t: f64 },
}

/// Advance `initial` through the schedule, invoking `observer` at every
/// flagged time (including t = 0 when flagged). Blow-up, signalled either by
/// the right-hand side or by a post-step magnitude check, ends the run early
/// with an `Aborted` outcome rather than an error; genuine configuration or
/// I/O failures propagate as errors.
pub fn integrate<F, O>(
    initial: State,
    schedule: &TimeSchedule,
    mut rhs: F,
    mut observer: O,
) -> Result<IntegrationOutcome>
where
    F: FnMut(&State, f64) -> Result<State>,
    O: FnMut(f64, &State) -> Result<()>,
{
    let mut state = initial;
    if schedule.is_sample[0] {
        observer(schedule.times[0], &state)?;
    }
    for i in 0..schedule.n_steps() {
        let t = schedule.times[i];
        let dt = schedule.times[i + 1] - t;
        state = match ssprk_10_4_step(&state, t, dt, &mut rhs) {
            Ok(s) => s,
            Err(Error::BlowUp { t }) => return Ok(IntegrationOutcome::Aborted { t }),
            Err(e) => return Err(e),
        };
        let t_next = schedule.times[i + 1];
        if state.iter().any(|v| !v.is_finite() || v.abs() > BLOWUP_LIMIT) {
            return Ok(IntegrationOutcome::Aborted { t: t_next });
        }
        if schedule.is_sample[i + 1] {
            observer(t_next, &state)?;
        }
    }
    Ok(IntegrationOutcome::Completed { state })
}
