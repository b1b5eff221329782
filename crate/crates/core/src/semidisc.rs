//! Semidiscretisation of u_t + (a(x) u)_x = 0 on a mesh of reference
//! elements.
//!
//! Per element (reference coordinates, physical scale 2/Δx_k) the right-hand
//! side is volume term plus surface correction:
//!
//!   split form     -1/2 (D a∘u + a∘(D u) + u∘(D a)) - M^{-1} R' B (f* - s)
//!   unsplit form   -(D a∘u)                          - M^{-1} R' B (f* - s)
//!
//! where f* are the interface fluxes and s is the interior surface flux:
//! R(a∘u) when the nodes include the element edges or the form is unsplit,
//! and the symmetrised 1/2 R(a∘u) + 1/2 (Ra)∘(Ru) for the split form on
//! Gauss nodes.
//!
//! Interface coupling always evaluates the coefficient exactly at the edge;
//! the left boundary receives inflow data through the flux's u- slot, the
//! right boundary always uses the upwind member of the configured flux
//! family.

use crate::error::{Error, Result};
use crate::mesh::{sample_coefficient, CoefficientField, Mesh1D, SamplingMode};
use crate::operators::{
    build_dissipation, build_fd_sbp, build_spectral_sbp, DissipationOperator, SbpOperatorSet,
};
use crate::scheme::{interface_flux, BasisKind, InterfaceTraces, SchemeConfig, VolumeForm};
use ndarray::{Array1, Array2};

/// Nodal solution values, one row per element.
pub type State = Array2<f64>;

/// Threshold beyond which a state is treated as blown up.
pub const BLOWUP_LIMIT: f64 = 1e100;

/// Mesh, operators and coefficient data assembled for right-hand-side
/// evaluation.
pub struct SemiDiscretization {
    pub mesh: Mesh1D,
    pub scheme: SchemeConfig,
    pub ops: SbpOperatorSet,
    pub coeff: CoefficientField,
    pub dissipation: Option<DissipationOperator>,
    /// Physical node coordinates, K x n.
    nodes_phys: Array2<f64>,
    /// D applied to the nodal coefficient, per element.
    d_a: Array2<f64>,
    /// Restriction of the nodal coefficient to the element edges.
    ra: Vec<(f64, f64)>,
}

impl SemiDiscretization {
    pub fn new(
        mesh: Mesh1D,
        scheme: SchemeConfig,
        a: impl Fn(f64) -> f64,
        a_prime: impl Fn(f64) -> f64,
        mode: SamplingMode,
    ) -> Result<Self> {
        let ops = match scheme.basis {
            BasisKind::GaussLegendre | BasisKind::GaussLobatto => {
                build_spectral_sbp(scheme.basis.node_family().unwrap(), scheme.degree)?
            }
            BasisKind::FiniteDifference {
                order,
                nodes_per_element,
            } => build_fd_sbp(order, nodes_per_element, 2.0)?,
        };
        let dissipation = match (scheme.basis, scheme.dissipation) {
            (_, None) => None,
            (BasisKind::FiniteDifference { order, nodes_per_element }, Some(s)) => {
                Some(build_dissipation(order, nodes_per_element, s)?)
            }
            _ => {
                return Err(Error::Config(
                    "artificial dissipation is only available for the FD basis".into(),
                ))
            }
        };
        let coeff = sample_coefficient(&a, &a_prime, &mesh, &ops, mode)?;

        let k_total = mesh.n_elements();
        let n = ops.n_nodes();
        let mut nodes_phys = Array2::zeros((k_total, n));
        for k in 0..k_total {
            for (i, &xi) in ops.nodes.iter().enumerate() {
                nodes_phys[(k, i)] = mesh.to_physical(k, xi);
            }
        }
        let mut d_a = Array2::zeros((k_total, n));
        let mut ra = Vec::with_capacity(k_total);
        for k in 0..k_total {
            let a_row = coeff.nodal.row(k).to_owned();
            d_a.row_mut(k).assign(&ops.d.dot(&a_row));
            ra.push(ops.restrict(&a_row));
        }

        Ok(SemiDiscretization {
            mesh,
            scheme,
            ops,
            coeff,
            dissipation,
            nodes_phys,
            d_a,
            ra,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements()
    }

    pub fn nodes(&self) -> &Array2<f64> {
        &self.nodes_phys
    }

    /// Sample a function at all physical nodes.
    pub fn project(&self, f: impl Fn(f64) -> f64) -> State {
        self.nodes_phys.mapv(f)
    }

    /// Solution and product traces of every element:
    /// (u(-1), u(+1), (au)(-1), (au)(+1)).
    pub fn element_traces(&self, state: &State) -> Vec<[f64; 4]> {
        let k_total = self.n_elements();
        let mut out = Vec::with_capacity(k_total);
        for k in 0..k_total {
            let u = state.row(k).to_owned();
            let au = &u * &self.coeff.nodal.row(k);
            let (ul, ur) = self.ops.restrict(&u);
            let (aul, aur) = self.ops.restrict(&au);
            out.push([ul, ur, aul, aur]);
        }
        out
    }

    /// Interface value pairs (u-, u+) at all K+1 interfaces. The exterior
    /// trace at the left boundary is the inflow datum; the one at the right
    /// boundary is never consumed (the outflow flux is upwind) and is NaN.
    pub fn interface_traces(&self, state: &State, inflow_value: f64) -> Vec<(f64, f64)> {
        let tr = self.element_traces(state);
        let k_total = self.n_elements();
        let mut out = Vec::with_capacity(k_total + 1);
        out.push((inflow_value, tr[0][0]));
        for k in 1..k_total {
            out.push((tr[k - 1][1], tr[k][0]));
        }
        out.push((tr[k_total - 1][1], f64::NAN));
        out
    }

    /// Restriction of the nodal coefficient to the edges of element k, as
    /// used by the split interior surface flux.
    pub fn nodal_coeff_edges(&self, k: usize) -> (f64, f64) {
        self.ra[k]
    }

    /// Interface fluxes at all K+1 interfaces for the configured scheme,
    /// given element traces and the inflow datum g.
    pub fn interface_fluxes(&self, traces: &[[f64; 4]], g: f64) -> Vec<f64> {
        let k_total = self.n_elements();
        let flux = self.scheme.flux;
        let mut f = Vec::with_capacity(k_total + 1);
        let a0 = self.coeff.edge[0];
        f.push(interface_flux(
            flux,
            &InterfaceTraces {
                u_minus: g,
                u_plus: traces[0][0],
                au_minus: a0 * g,
                au_plus: traces[0][2],
                a_edge: a0,
            },
        ));
        for k in 1..k_total {
            f.push(interface_flux(
                flux,
                &InterfaceTraces {
                    u_minus: traces[k - 1][1],
                    u_plus: traces[k][0],
                    au_minus: traces[k - 1][3],
                    au_plus: traces[k][2],
                    a_edge: self.coeff.edge[k],
                },
            ));
        }
        f.push(interface_flux(
            flux.upwind_member(),
            &InterfaceTraces {
                u_minus: traces[k_total - 1][1],
                u_plus: f64::NAN,
                au_minus: traces[k_total - 1][3],
                au_plus: f64::NAN,
                a_edge: self.coeff.edge[k_total],
            },
        ));
        f
    }

    /// Semidiscrete right-hand side at time t. Signals blow-up if any output
    /// entry is non-finite.
    pub fn rhs(&self, state: &State, t: f64, inflow: &dyn Fn(f64) -> f64) -> Result<State> {
        let k_total = self.n_elements();
        let n = self.ops.n_nodes();
        if state.dim() != (k_total, n) {
            return Err(Error::DimensionMismatch(format!(
                "state is {:?}, discretisation needs ({k_total}, {n})",
                state.dim()
            )));
        }

        let traces = self.element_traces(state);
        let fluxes = self.interface_fluxes(&traces, inflow(t));
        let split_surface = !self.ops.includes_boundary && self.scheme.form == VolumeForm::Split;

        let mut out = Array2::zeros((k_total, n));
        for k in 0..k_total {
            let u = state.row(k).to_owned();
            let a = self.coeff.nodal.row(k);
            let au = &u * &a;
            let d_au = self.ops.d.dot(&au);

            let mut r: Array1<f64> = match self.scheme.form {
                VolumeForm::Split => {
                    let d_u = self.ops.d.dot(&u);
                    let mut v = d_au;
                    for i in 0..n {
                        v[i] = -0.5 * (v[i] + a[i] * d_u[i] + u[i] * self.d_a[(k, i)]);
                    }
                    v
                }
                VolumeForm::Unsplit => -d_au,
            };

            let [ul, ur, aul, aur] = traces[k];
            let (s_left, s_right) = if split_surface {
                let (ra_l, ra_r) = self.ra[k];
                (0.5 * aul + 0.5 * ra_l * ul, 0.5 * aur + 0.5 * ra_r * ur)
            } else {
                (aul, aur)
            };
            let jump_left = fluxes[k] - s_left;
            let jump_right = fluxes[k + 1] - s_right;
            for i in 0..n {
                r[i] += (self.ops.restrict_left[i] * jump_left
                    - self.ops.restrict_right[i] * jump_right)
                    / self.ops.mass[i];
            }

            if let Some(diss) = &self.dissipation {
                r += &diss.matrix.dot(&u);
            }

            let scale = 2.0 / self.mesh.dx(k);
            for i in 0..n {
                let v = scale * r[i];
                if !v.is_finite() {
                    return Err(Error::BlowUp { t });
                }
                out[(k, i)] = v;
            }
        }
        Ok(out)
    }

    /// Squared broken norm sum_k (Δx_k/2) v^k' M v^k.
    pub fn broken_norm_sq(&self, v: &State) -> f64 {
        let mut total = 0.0;
        for k in 0..self.n_elements() {
            let mut s = 0.0;
            for i in 0..self.ops.n_nodes() {
                s += self.ops.mass[i] * v[(k, i)] * v[(k, i)];
            }
            total += 0.5 * self.mesh.dx(k) * s;
        }
        total
    }

    /// Discrete energy of a state.
    pub fn energy(&self, state: &State) -> f64 {
        self.broken_norm_sq(state)
    }

    /// d/dt ||u||^2 = 2 (u, du/dt)_M, assembled from a state and its RHS.
    pub fn energy_rate(&self, state: &State, rhs: &State) -> f64 {
        let mut total = 0.0;
        for k in 0..self.n_elements() {
            let mut s = 0.0;
            for i in 0..self.ops.n_nodes() {
                s += self.ops.mass[i] * state[(k, i)] * rhs[(k, i)];
            }
            total += self.mesh.dx(k) * s;
        }
        total
    }

    /// CFL-style step suggestion: dt = cfl Δx_min / (max|a| (2N+1)) for
    /// spectral bases, dt = cfl h_min / max|a| for FD (h = node spacing).
    /// Artificial dissipation stiffens the FD operator by roughly
    /// 4^p strength / h, so its step bound is taken into account too.
    pub fn suggested_steps(&self, t_final: f64, cfl: f64) -> usize {
        let a_max = self.coeff.max_abs().max(1e-12);
        let dt = match self.scheme.basis {
            BasisKind::FiniteDifference {
                nodes_per_element,
                order,
            } => {
                let h = self.mesh.min_dx() / (nodes_per_element as f64 - 1.0);
                let mut dt = cfl * h / a_max;
                if let Some(strength) = self.scheme.dissipation {
                    if strength > 0.0 {
                        let p = (order / 2) as i32;
                        dt = dt.min(3.0 * h / (4f64.powi(p) * strength));
                    }
                }
                dt
            }
            _ => {
                let n = self.scheme.degree as f64;
                cfl * self.mesh.min_dx() / (a_max * (2.0 * n + 1.0))
            }
        };
        (t_final / dt).ceil().max(1.0) as usize
    }
}
