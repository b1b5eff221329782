//! Error norms and the theoretical diagnostic quantities that govern
//! long-time error boundedness: interface dissipation (BTs), the
//! coefficient-derivative volume term (Int_d), the Gauss-node commutation
//! defect (Theta2), their ratio eta to the squared error norm, and the
//! sufficiency condition on that ratio.

use crate::error::Result;
use crate::quadrature::{self, build_rule};
use crate::scheme::BasisKind;
use crate::semidisc::{SemiDiscretization, State};
use ndarray::{Array1, Array2};

/// eps1 norms at or below this are treated as zero in ratios.
pub const EPS1_FLOOR: f64 = 1e-14;

/// Discrete error norms at one sample time.
#[derive(Clone, Copy, Debug)]
pub struct ErrorSample {
    /// Broken norm of exact-minus-numerical sampled at the solution nodes.
    pub total: f64,
    /// Norm of eps1 = interpolant-of-exact minus numerical. Nodal sampling
    /// makes this coincide with `total` on spectral bases; kept separate
    /// because the FD basis has no interpolation operator.
    pub eps1: f64,
    /// Error of the reconstructed interpolant measured with a 5(N+1)-point
    /// Gauss rule per element; equals `total` for the FD basis.
    pub oversampled: f64,
}

/// Precomputed oversampling data for a discretisation.
pub struct ErrorSampler {
    /// Evaluation matrix from basis nodes to fine quadrature points
    /// (spectral bases only).
    fine_eval: Option<Array2<f64>>,
    fine_weights: Array1<f64>,
    /// Physical coordinates of the fine points, one row per element.
    fine_nodes_phys: Array2<f64>,
}

impl ErrorSampler {
    pub fn new(disc: &SemiDiscretization) -> Result<ErrorSampler> {
        match disc.scheme.basis {
            BasisKind::FiniteDifference { .. } => Ok(ErrorSampler {
                fine_eval: None,
                fine_weights: Array1::zeros(0),
                fine_nodes_phys: Array2::zeros((0, 0)),
            }),
            _ => {
                let n = disc.ops.n_nodes();
                let fine = quadrature::fine_gauss_rule(5 * n)?;
                let basis = build_rule(
                    disc.scheme.basis.node_family().unwrap(),
                    disc.scheme.degree,
                )?;
                let mut eval = Array2::zeros((fine.nodes.len(), n));
                for (j, &x) in fine.nodes.iter().enumerate() {
                    eval.row_mut(j)
                        .assign(&quadrature::evaluation_row(&basis.nodes, &basis.bary, x));
                }
                let k_total = disc.n_elements();
                let mut phys = Array2::zeros((k_total, fine.nodes.len()));
                for k in 0..k_total {
                    for (j, &x) in fine.nodes.iter().enumerate() {
                        phys[(k, j)] = disc.mesh.to_physical(k, x);
                    }
                }
                Ok(ErrorSampler {
                    fine_eval: Some(eval),
                    fine_weights: fine.weights,
                    fine_nodes_phys: phys,
                })
            }
        }
    }

    /// All three error norms of `state` against `exact` (a function of x at
    /// the current time).
    pub fn errors(
        &self,
        disc: &SemiDiscretization,
        state: &State,
        exact: impl Fn(f64) -> f64,
    ) -> ErrorSample {
        let eps1_field = eps1_field(disc, state, &exact);
        let nodal = disc.broken_norm_sq(&eps1_field).sqrt();
        let oversampled = match &self.fine_eval {
            None => nodal,
            Some(eval) => {
                let mut sum = 0.0;
                for k in 0..disc.n_elements() {
                    let numeric = eval.dot(&state.row(k));
                    let mut s = 0.0;
                    for (j, &w) in self.fine_weights.iter().enumerate() {
                        let d = exact(self.fine_nodes_phys[(k, j)]) - numeric[j];
                        s += w * d * d;
                    }
                    sum += 0.5 * disc.mesh.dx(k) * s;
                }
                sum.sqrt()
            }
        };
        ErrorSample {
            total: nodal,
            eps1: nodal,
            oversampled,
        }
    }
}

/// eps1 = nodal samples of the exact solution minus the numerical state.
pub fn eps1_field(disc: &SemiDiscretization, state: &State, exact: impl Fn(f64) -> f64) -> State {
    let mut out = disc.nodes().mapv(&exact);
    out -= state;
    out
}

/// Interface dissipation terms. `eps1_left`/`eps1_right` are element-edge
/// traces of eps1, `edge_a` the exact coefficient at the K+1 interfaces,
/// sigma the flux family's dissipation switch (1 upwind, 0 central):
///
///   BTs = sigma/2 [ a(x_R) eR_K^2 + a(x_L) eL_1^2
///                   + sum_interfaces a_edge (eR_{k-1} - eL_k)^2 ].
pub fn compute_bts(eps1_left: &[f64], eps1_right: &[f64], edge_a: &[f64], sigma: f64) -> f64 {
    let k_total = eps1_left.len();
    let mut s = edge_a[k_total] * eps1_right[k_total - 1] * eps1_right[k_total - 1]
        + edge_a[0] * eps1_left[0] * eps1_left[0];
    for k in 1..k_total {
        let jump = eps1_right[k - 1] - eps1_left[k];
        s += edge_a[k] * jump * jump;
    }
    0.5 * sigma * s
}

/// Volume term 1/2 sum_k (dx_k/2) (eps1 o eps1, a')_N with the exact
/// derivative sampled at the nodes.
pub fn compute_int_d(disc: &SemiDiscretization, eps1: &State) -> f64 {
    let mut total = 0.0;
    for k in 0..disc.n_elements() {
        let mut s = 0.0;
        for i in 0..disc.ops.n_nodes() {
            let e = eps1[(k, i)];
            s += disc.ops.mass[i] * e * e * disc.coeff.d_nodal[(k, i)];
        }
        total += 0.5 * disc.mesh.dx(k) * s;
    }
    0.5 * total
}

/// Commutation defect of the interface coupling on Gauss nodes:
/// Theta2 = 1/2 sum_k (dx_k/2) eps2_k with
///
///   eps2_k = 1/2 (a_R Iu_R e_R - a_L Iu_L e_L)
///            - [ e_R (f_R - 1/2 (Ra)_R Iu_R) - e_L (f_L - 1/2 (Ra)_L Iu_L) ]
///
/// where Iu are interpolant traces of the exact solution, e the eps1 traces,
/// a_L/a_R the exact interface coefficient, (Ra) the restriction of the
/// nodal coefficient, and f the configured numerical flux evaluated on the
/// interpolant traces. Identically zero when the nodes include the element
/// boundaries (interpolant traces are continuous there), so GLL and FD
/// bases return exactly 0.
pub fn compute_theta2(
    disc: &SemiDiscretization,
    exact_nodal: &State,
    eps1: &State,
    inflow_value: f64,
) -> f64 {
    if disc.ops.includes_boundary {
        return 0.0;
    }
    let interp = disc.element_traces(exact_nodal);
    let eps = disc.element_traces(eps1);
    let fluxes = disc.interface_fluxes(&interp, inflow_value);
    let mut total = 0.0;
    for k in 0..disc.n_elements() {
        let [iu_l, iu_r, _, _] = interp[k];
        let [e_l, e_r, _, _] = eps[k];
        let a_l = disc.coeff.edge[k];
        let a_r = disc.coeff.edge[k + 1];
        let (ra_l, ra_r) = disc.nodal_coeff_edges(k);
        let first = 0.5 * (a_r * iu_r * e_r - a_l * iu_l * e_l);
        let second = e_r * (fluxes[k + 1] - 0.5 * ra_r * iu_r)
            - e_l * (fluxes[k] - 0.5 * ra_l * iu_l);
        total += 0.5 * disc.mesh.dx(k) * (first - second);
    }
    0.5 * total
}

/// eta = (BTs + Int_d + Theta2) / ||eps1||^2, absent for vanishing eps1.
pub fn compute_eta(bts: f64, int_d: f64, theta2: f64, eps1_norm: f64) -> Option<f64> {
    if eps1_norm > EPS1_FLOOR {
        Some((bts + int_d + theta2) / (eps1_norm * eps1_norm))
    } else {
        None
    }
}

/// Sufficient condition for a positive eta: trivially satisfied when a' >= 0
/// everywhere; otherwise requires (BTs + Theta2)/||eps1||^2 > max|a'|/2,
/// which an eps1 below the floor cannot establish.
pub fn check_sufficiency(
    bts: f64,
    theta2: f64,
    eps1_norm: f64,
    min_a_prime: f64,
    max_abs_a_prime: f64,
) -> bool {
    if min_a_prime >= 0.0 {
        return true;
    }
    eps1_norm > EPS1_FLOOR && (bts + theta2) / (eps1_norm * eps1_norm) > max_abs_a_prime / 2.0
}

/// All theory diagnostics at one sample time.
#[derive(Clone, Copy, Debug)]
pub struct TheoryDiagnostics {
    pub bts: f64,
    pub int_d: f64,
    pub theta2: f64,
    pub eps1_norm: f64,
    pub eta: Option<f64>,
    pub sufficiency: bool,
}

/// Assemble BTs/Int_d/Theta2/eta/sufficiency from the numerical state and
/// the nodal samples of the exact solution.
pub fn theory_diagnostics(
    disc: &SemiDiscretization,
    state: &State,
    exact_nodal: &State,
    inflow_value: f64,
) -> TheoryDiagnostics {
    let eps1 = exact_nodal - state;
    let traces = disc.element_traces(&eps1);
    let left: Vec<f64> = traces.iter().map(|t| t[0]).collect();
    let right: Vec<f64> = traces.iter().map(|t| t[1]).collect();
    let bts = compute_bts(&left, &right, &disc.coeff.edge, disc.scheme.flux.sigma());
    let int_d = compute_int_d(disc, &eps1);
    let theta2 = compute_theta2(disc, exact_nodal, &eps1, inflow_value);
    let eps1_norm = disc.broken_norm_sq(&eps1).sqrt();
    TheoryDiagnostics {
        bts,
        int_d,
        theta2,
        eps1_norm,
        eta: compute_eta(bts, int_d, theta2, eps1_norm),
        sufficiency: check_sufficiency(
            bts,
            theta2,
            eps1_norm,
            disc.coeff.min_derivative(),
            disc.coeff.max_abs_derivative(),
        ),
    }
}
