//! The four benchmark transport problems, their closed-form solutions, and
//! an independent characteristics-based oracle.
//!
//! Each case fixes a coefficient a(x), a domain, initial data and the exact
//! solution of u_t + (a u)_x = 0 with inflow data read off from that exact
//! solution at the left boundary. The oracle recomputes u(t, x) by tracing
//! the characteristic through (t, x) backwards and then integrating the
//! amplitude equation z' = -a'(x(s)) z along it, so closed forms and oracle
//! share no code path.

use crate::error::{Error, Result};

/// Coefficient selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    /// a(x) = x on [0, 2pi]
    AX,
    /// a(x) = x^2 on [0.1, 1] (variants move the domain to [-0.1, 1])
    AX2,
    /// a(x) = 1 - x^2 on [-1, 0.9]
    A1mX2,
    /// a(x) = cos(x) on [0.1, pi/3]
    ACos,
}

/// Sub-case selector for AX2; the other cases only support `Standard`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseVariant {
    Standard,
    /// Domain [-0.1, 1], cosine initial data; the solution develops a pole
    /// at t = 10.
    NegativeDomainCos,
    /// Domain [-0.1, 1], exp(-x^4) initial data; stays bounded.
    NegativeDomainExp,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::AX, CaseId::AX2, CaseId::A1mX2, CaseId::ACos];

    pub fn label(self) -> &'static str {
        match self {
            CaseId::AX => "a_x",
            CaseId::AX2 => "a_x2",
            CaseId::A1mX2 => "a_1mx2",
            CaseId::ACos => "a_cos",
        }
    }

    pub fn parse(s: &str) -> Result<CaseId> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown case '{s}'")))
    }
}

impl CaseVariant {
    pub const ALL: [CaseVariant; 3] = [
        CaseVariant::Standard,
        CaseVariant::NegativeDomainCos,
        CaseVariant::NegativeDomainExp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseVariant::Standard => "std",
            CaseVariant::NegativeDomainCos => "neg_cos",
            CaseVariant::NegativeDomainExp => "neg_exp",
        }
    }

    pub fn parse(s: &str) -> Result<CaseVariant> {
        CaseVariant::ALL
            .into_iter()
            .find(|v| v.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown case variant '{s}'")))
    }
}

/// A fully specified benchmark problem.
#[derive(Clone, Copy)]
pub struct TestCase {
    pub id: CaseId,
    pub variant: CaseVariant,
    pub x_left: f64,
    pub x_right: f64,
    /// Time at which the exact solution stops existing, if finite.
    pub life_span: Option<f64>,
    a: fn(f64) -> f64,
    a_prime: fn(f64) -> f64,
    u0: fn(f64) -> f64,
    exact: fn(f64, f64) -> f64,
}

fn coeff_x(x: f64) -> f64 {
    x
}
fn coeff_x_prime(_: f64) -> f64 {
    1.0
}
fn coeff_x2(x: f64) -> f64 {
    x * x
}
fn coeff_x2_prime(x: f64) -> f64 {
    2.0 * x
}
fn coeff_1mx2(x: f64) -> f64 {
    1.0 - x * x
}
fn coeff_1mx2_prime(x: f64) -> f64 {
    -2.0 * x
}
fn coeff_cos(x: f64) -> f64 {
    x.cos()
}
fn coeff_cos_prime(x: f64) -> f64 {
    -x.sin()
}

fn u0_ax(x: f64) -> f64 {
    (12.0 * (x - 0.1)).sin()
}
fn u0_ax2(x: f64) -> f64 {
    (std::f64::consts::FRAC_PI_2 * x).cos()
}
fn u0_ax2_exp(x: f64) -> f64 {
    (-x.powi(4)).exp()
}
fn u0_a1mx2(x: f64) -> f64 {
    (std::f64::consts::PI * x).sin()
}
fn u0_acos(x: f64) -> f64 {
    (5.0 * x).sin()
}

fn exact_ax(t: f64, x: f64) -> f64 {
    let e = (-t).exp();
    e * u0_ax(x * e)
}

fn exact_ax2(t: f64, x: f64) -> f64 {
    let d = 1.0 + t * x;
    u0_ax2(x / d) / (d * d)
}

fn exact_ax2_exp(t: f64, x: f64) -> f64 {
    let d = 1.0 + t * x;
    u0_ax2_exp(x / d) / (d * d)
}

fn exact_a1mx2(t: f64, x: f64) -> f64 {
    let (sh, ch) = (t.sinh(), t.cosh());
    let x0 = (-x * ch + sh) / (x * sh - ch);
    let d = ch - x * sh;
    u0_a1mx2(x0) / (d * d)
}

fn exact_acos(t: f64, x: f64) -> f64 {
    // Domain [0.1, pi/3] keeps tan(x/2) < 1, so artanh is defined.
    let x0 = -2.0 * (0.5 * t - (0.5 * x).tan().atanh()).tanh().atan();
    u0_acos(x0) * x0.cos() / x.cos()
}

/// Construct a benchmark case. Variants other than `Standard` exist only
/// for the x^2 coefficient.
pub fn make_case(id: CaseId, variant: CaseVariant) -> Result<TestCase> {
    if variant != CaseVariant::Standard && id != CaseId::AX2 {
        return Err(Error::Config(format!(
            "case '{}' has no '{}' variant",
            id.label(),
            variant.label()
        )));
    }
    Ok(match (id, variant) {
        (CaseId::AX, _) => TestCase {
            id,
            variant,
            x_left: 0.0,
            x_right: std::f64::consts::TAU,
            life_span: None,
            a: coeff_x,
            a_prime: coeff_x_prime,
            u0: u0_ax,
            exact: exact_ax,
        },
        (CaseId::AX2, CaseVariant::Standard) => TestCase {
            id,
            variant,
            x_left: 0.1,
            x_right: 1.0,
            life_span: None,
            a: coeff_x2,
            a_prime: coeff_x2_prime,
            u0: u0_ax2,
            exact: exact_ax2,
        },
        (CaseId::AX2, CaseVariant::NegativeDomainCos) => TestCase {
            id,
            variant,
            x_left: -0.1,
            x_right: 1.0,
            life_span: Some(10.0),
            a: coeff_x2,
            a_prime: coeff_x2_prime,
            u0: u0_ax2,
            exact: exact_ax2,
        },
        (CaseId::AX2, CaseVariant::NegativeDomainExp) => TestCase {
            id,
            variant,
            x_left: -0.1,
            x_right: 1.0,
            life_span: None,
            a: coeff_x2,
            a_prime: coeff_x2_prime,
            u0: u0_ax2_exp,
            exact: exact_ax2_exp,
        },
        (CaseId::A1mX2, _) => TestCase {
            id,
            variant,
            x_left: -1.0,
            x_right: 0.9,
            life_span: None,
            a: coeff_1mx2,
            a_prime: coeff_1mx2_prime,
            u0: u0_a1mx2,
            exact: exact_a1mx2,
        },
        (CaseId::ACos, _) => TestCase {
            id,
            variant,
            x_left: 0.1,
            x_right: std::f64::consts::FRAC_PI_3,
            life_span: None,
            a: coeff_cos,
            a_prime: coeff_cos_prime,
            u0: u0_acos,
            exact: exact_acos,
        },
    })
}

impl TestCase {
    pub fn a(&self, x: f64) -> f64 {
        (self.a)(x)
    }
    pub fn a_prime(&self, x: f64) -> f64 {
        (self.a_prime)(x)
    }
    pub fn u0(&self, x: f64) -> f64 {
        (self.u0)(x)
    }
    pub fn exact(&self, t: f64, x: f64) -> f64 {
        (self.exact)(t, x)
    }
    /// Inflow datum: the exact solution traced at the left boundary.
    pub fn inflow(&self, t: f64) -> f64 {
        (self.exact)(t, self.x_left)
    }
    pub fn a_fn(&self) -> fn(f64) -> f64 {
        self.a
    }
    pub fn a_prime_fn(&self) -> fn(f64) -> f64 {
        self.a_prime
    }
    pub fn label(&self) -> String {
        if self.variant == CaseVariant::Standard {
            self.id.label().to_string()
        } else {
            format!("{}_{}", self.id.label(), self.variant.label())
        }
    }

    /// Exact solution recomputed through the method of characteristics.
    pub fn oracle(&self, t: f64, x: f64) -> Result<f64> {
        characteristics_oracle(
            self.a,
            self.a_prime,
            self.u0,
            t,
            x,
            (self.x_left - 1.0, self.x_right + 1.0),
        )
    }
}

/// Evaluate u(t, x) for u_t + (a u)_x = 0, u(0, .) = u0, by tracing the
/// characteristic through (t, x) backwards to its foot x0 and integrating
/// u' = -a'(x(s)) u along the forward characteristic. `window` bounds the
/// excursion of the traced characteristic; leaving it is reported as a
/// failure rather than extrapolated.
pub fn characteristics_oracle(
    a: impl Fn(f64) -> f64,
    a_prime: impl Fn(f64) -> f64,
    u0: impl Fn(f64) -> f64,
    t: f64,
    x: f64,
    window: (f64, f64),
) -> Result<f64> {
    let fail = |reason: &str| Error::CharacteristicsFailure {
        t,
        x,
        reason: reason.to_string(),
    };
    if !(t >= 0.0) || !t.is_finite() {
        return Err(fail("time must be finite and nonnegative"));
    }
    if t == 0.0 {
        return Ok(u0(x));
    }
    let inside = |y: [f64; 2]| y[0] >= window.0 && y[0] <= window.1;

    // Backward pass: x'(s) = -a(x), x(0) = x; the foot is x(t).
    let back = dopri5(|_, y| [-a(y[0]), 0.0], [x, 0.0], t, inside)
        .map_err(|r| fail(&r))?;
    let x0 = back[0];
    // Forward pass: characteristic position and amplitude together.
    let fwd = dopri5(
        |_, y| [a(y[0]), -a_prime(y[0]) * y[1]],
        [x0, u0(x0)],
        t,
        inside,
    )
    .map_err(|r| fail(&r))?;
    Ok(fwd[1])
}

/// Dormand-Prince 5(4) with standard PI-free step control, fixed tolerance
/// 1e-11, on a two-component system. Deterministic: no randomness, step
/// decisions depend only on the inputs.
fn dopri5(
    f: impl Fn(f64, [f64; 2]) -> [f64; 2],
    y0: [f64; 2],
    s_end: f64,
    inside: impl Fn([f64; 2]) -> bool,
) -> std::result::Result<[f64; 2], String> {
    const TOL: f64 = 1e-11;
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    // b - b*: difference between the 5th- and 4th-order weights.
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    let mut s = 0.0;
    let mut y = y0;
    let mut k = [[0.0f64; 2]; 7];
    k[0] = f(s, y);
    let mut h = (s_end / 100.0).min(0.1).max(1e-6);
    let mut steps = 0usize;
    while s < s_end {
        steps += 1;
        if steps > 200_000 {
            return Err("step limit exceeded".into());
        }
        if h < 1e-14 * s_end.max(1.0) {
            return Err("step size underflow".into());
        }
        h = h.min(s_end - s);
        for i in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi[0] += h * A[i][j] * kj[0];
                yi[1] += h * A[i][j] * kj[1];
            }
            k[i + 1] = f(s + C[i] * h, yi);
        }
        // k[6] is the derivative at the 5th-order solution (FSAL).
        let mut ynew = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            ynew[0] += h * A[5][j] * kj[0];
            ynew[1] += h * A[5][j] * kj[1];
        }
        let mut err_sq = 0.0;
        for c in 0..2 {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[c];
            }
            let scale = TOL + TOL * y[c].abs().max(ynew[c].abs());
            let r = h * e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / 2.0).sqrt();
        if !err.is_finite() {
            return Err("non-finite error estimate".into());
        }
        if err <= 1.0 {
            s += h;
            y = ynew;
            k[0] = k[6];
            if !inside(y) {
                return Err("characteristic left the tracking window".into());
            }
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Ok(y)
}
