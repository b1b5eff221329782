//! Summation-by-parts operator sets on the reference element [-1, 1].
//!
//! A set consists of a derivative matrix D, a diagonal mass (norm) matrix M,
//! and boundary restriction rows r_L, r_R picking out interpolated values at
//! -1 and +1. Together they satisfy the SBP identity
//!
//!   M D + D' M = r_R r_R' - r_L r_L'
//!
//! which is the discrete analogue of integration by parts. Spectral sets are
//! collocation operators on Gauss or Gauss-Lobatto nodes; finite-difference
//! sets are the classical diagonal-norm central blocks with boundary closures
//! of half the interior order.

use crate::error::{Error, Result};
use crate::quadrature::{self, NodeFamily, QuadratureRule};
use ndarray::{Array1, Array2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Spectral(NodeFamily),
    FiniteDifference { order: usize },
}

/// One SBP operator set. `nodes` are reference coordinates; for spectral sets
/// they are the collocation nodes, for FD sets an equispaced grid.
#[derive(Debug, Clone)]
pub struct SbpOperatorSet {
    pub kind: OperatorKind,
    pub nodes: Array1<f64>,
    /// Derivative matrix, dense row-major.
    pub d: Array2<f64>,
    /// Diagonal of the mass matrix.
    pub mass: Array1<f64>,
    /// Restriction (interpolation) row to x = -1.
    pub restrict_left: Array1<f64>,
    /// Restriction row to x = +1.
    pub restrict_right: Array1<f64>,
    /// Whether ±1 are themselves nodes, making the restriction rows unit
    /// vectors and letting restriction commute with pointwise products.
    pub includes_boundary: bool,
}

impl SbpOperatorSet {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Restrict nodal values to the element edges: (value at -1, value at +1).
    pub fn restrict(&self, v: &Array1<f64>) -> (f64, f64) {
        (self.restrict_left.dot(v), self.restrict_right.dot(v))
    }

    /// Matrices in plain text, one row per line, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let rows = |out: &mut String, label: &str, m: &Array2<f64>| {
            out.push_str(label);
            out.push('\n');
            for r in m.rows() {
                let line: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        };
        let row = |out: &mut String, label: &str, v: &Array1<f64>| {
            out.push_str(label);
            out.push('\n');
            let line: Vec<String> = v.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        };
        row(&mut out, "nodes", &self.nodes);
        row(&mut out, "mass", &self.mass);
        rows(&mut out, "D", &self.d);
        row(&mut out, "restrict_left", &self.restrict_left);
        row(&mut out, "restrict_right", &self.restrict_right);
        out
    }
}

/// Collocation SBP set on the degree-N spectral rule.
pub fn build_spectral_sbp(kind: NodeFamily, degree: usize) -> Result<SbpOperatorSet> {
    let rule = quadrature::build_rule(kind, degree)?;
    let d = quadrature::differentiation_matrix(&rule);
    let (rl, rr) = restriction_rows(&rule);
    Ok(SbpOperatorSet {
        kind: OperatorKind::Spectral(kind),
        nodes: rule.nodes,
        d,
        mass: rule.weights,
        restrict_left: rl,
        restrict_right: rr,
        includes_boundary: kind.includes_boundary(),
    })
}

fn restriction_rows(rule: &QuadratureRule) -> (Array1<f64>, Array1<f64>) {
    (
        quadrature::evaluation_row(&rule.nodes, &rule.bary, -1.0),
        quadrature::evaluation_row(&rule.nodes, &rule.bary, 1.0),
    )
}

/// Classical diagonal-norm central FD-SBP block with `n_nodes` points on an
/// element of length `element_length`. `order` is the interior accuracy; the
/// boundary closure has order/2.
pub fn build_fd_sbp(order: usize, n_nodes: usize, element_length: f64) -> Result<SbpOperatorSet> {
    let min = match order {
        2 => 4,
        4 => 8,
        _ => return Err(Error::UnsupportedFdOrder(order)),
    };
    if n_nodes < min {
        return Err(Error::TooFewFdNodes {
            order,
            nodes: n_nodes,
            min,
        });
    }
    let n = n_nodes;
    let h = element_length / (n as f64 - 1.0);
    let half = element_length / 2.0;
    let nodes = Array1::from_iter((0..n).map(|i| -half + i as f64 * h));

    let mut d = Array2::<f64>::zeros((n, n));
    let mut m = Array1::from_elem(n, h);
    match order {
        2 => {
            m[0] = 0.5 * h;
            m[n - 1] = 0.5 * h;
            d[(0, 0)] = -1.0 / h;
            d[(0, 1)] = 1.0 / h;
            d[(n - 1, n - 2)] = -1.0 / h;
            d[(n - 1, n - 1)] = 1.0 / h;
            for i in 1..n - 1 {
                d[(i, i - 1)] = -0.5 / h;
                d[(i, i + 1)] = 0.5 / h;
            }
        }
        4 => {
            // Standard order-(2,4) diagonal-norm block: norm 17/48, 59/48,
            // 43/48, 49/48 and the matching four closure rows.
            let hb = [17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0];
            for i in 0..4 {
                m[i] = hb[i] * h;
                m[n - 1 - i] = hb[i] * h;
            }
            #[rustfmt::skip]
            let closure: [[f64; 6]; 4] = [
                [-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0, 0.0, 0.0],
                [-1.0 / 2.0, 0.0, 1.0 / 2.0, 0.0, 0.0, 0.0],
                [4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0, 0.0],
                [3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0],
            ];
            for (i, row) in closure.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    d[(i, j)] = c / h;
                    // Lower-right closure is the upper-left one rotated with
                    // flipped sign.
                    d[(n - 1 - i, n - 1 - j)] = -c / h;
                }
            }
            let interior = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
            for i in 4..n - 4 {
                for (o, &c) in interior.iter().enumerate() {
                    d[(i, i + o - 2)] = c / h;
                }
            }
        }
        _ => unreachable!(),
    }

    let mut rl = Array1::zeros(n);
    rl[0] = 1.0;
    let mut rr = Array1::zeros(n);
    rr[n - 1] = 1.0;
    Ok(SbpOperatorSet {
        kind: OperatorKind::FiniteDifference { order },
        nodes,
        d,
        mass: m,
        restrict_left: rl,
        restrict_right: rr,
        includes_boundary: true,
    })
}

/// Artificial dissipation operator A = -strength h^(2p-1) M^{-1} Dp' M Dp
/// built from the narrow p-th difference Dp (p = order/2), on the reference
/// element. Negative semidefinite with respect to M by construction and
/// consistent with zero at the dissipation design order.
#[derive(Debug, Clone)]
pub struct DissipationOperator {
    pub order: usize,
    pub strength: f64,
    pub matrix: Array2<f64>,
}

pub fn build_dissipation(order: usize, n_nodes: usize, strength: f64) -> Result<DissipationOperator> {
    if !(strength >= 0.0) {
        return Err(Error::NegativeDissipation(strength));
    }
    let base = build_fd_sbp(order, n_nodes, 2.0)?;
    let n = n_nodes;
    let h = 2.0 / (n as f64 - 1.0);
    let p = order / 2;
    let mut dp = Array2::<f64>::zeros((n, n));
    match p {
        1 => {
            for i in 0..n - 1 {
                dp[(i, i)] = -1.0 / h;
                dp[(i, i + 1)] = 1.0 / h;
            }
        }
        2 => {
            let h2 = h * h;
            for i in 1..n - 1 {
                dp[(i, i - 1)] = 1.0 / h2;
                dp[(i, i)] = -2.0 / h2;
                dp[(i, i + 1)] = 1.0 / h2;
            }
        }
        _ => unreachable!(),
    }
    let scale = strength * h.powi(2 * p as i32 - 1);
    // -scale M^{-1} Dp' M Dp, assembled column by column.
    let mut a = Array2::<f64>::zeros((n, n));
    if scale > 0.0 {
        let mdp = &dp * &base.mass.view().insert_axis(ndarray::Axis(1));
        a = dp.t().dot(&mdp);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] *= -scale / base.mass[i];
            }
        }
    }
    Ok(DissipationOperator {
        order,
        strength,
        matrix: a,
    })
}

/// Max-norm residual of the SBP identity M D + D' M - (r_R r_R' - r_L r_L').
pub fn verify_sbp(ops: &SbpOperatorSet) -> f64 {
    let n = ops.n_nodes();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let md = ops.mass[i] * ops.d[(i, j)] + ops.d[(j, i)] * ops.mass[j];
            let rbr = ops.restrict_right[i] * ops.restrict_right[j]
                - ops.restrict_left[i] * ops.restrict_left[j];
            worst = worst.max((md - rbr).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn spectral_sbp_identity_holds() {
        for kind in [NodeFamily::GaussLegendre, NodeFamily::GaussLobatto] {
            for n in 1..=10 {
                let ops = build_spectral_sbp(kind, n).unwrap();
                let res = verify_sbp(&ops);
                assert!(res <= 1e-12, "{kind:?} N={n}: residual {res:e}");
            }
        }
    }

    #[test]
    fn lobatto_two_node_set_is_exact() {
        let ops = build_spectral_sbp(NodeFamily::GaussLobatto, 1).unwrap();
        assert_eq!(ops.mass.to_vec(), vec![1.0, 1.0]);
        assert_eq!(ops.d[(0, 0)], -0.5);
        assert_eq!(ops.d[(0, 1)], 0.5);
        assert_eq!(ops.d[(1, 0)], -0.5);
        assert_eq!(ops.d[(1, 1)], 0.5);
        assert_eq!(verify_sbp(&ops), 0.0);
    }

    #[test]
    fn lobatto_restriction_is_boundary_pickout() {
        let ops = build_spectral_sbp(NodeFamily::GaussLobatto, 2).unwrap();
        assert_eq!(ops.restrict_left.to_vec(), vec![1.0, 0.0, 0.0]);
        assert_eq!(ops.restrict_right.to_vec(), vec![0.0, 0.0, 1.0]);
        // r_R r_R' - r_L r_L' = diag(-1, 0, 1) for boundary-including nodes.
        for i in 0..3 {
            for j in 0..3 {
                let v = ops.restrict_right[i] * ops.restrict_right[j]
                    - ops.restrict_left[i] * ops.restrict_left[j];
                let want = match (i, j) {
                    (0, 0) => -1.0,
                    (2, 2) => 1.0,
                    _ => 0.0,
                };
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn gauss_restriction_extrapolates_polynomials() {
        let ops = build_spectral_sbp(NodeFamily::GaussLegendre, 3).unwrap();
        let f = ops.nodes.mapv(|x| 1.0 + 2.0 * x - x * x * x);
        let (fl, fr) = ops.restrict(&f);
        assert!((fl - (1.0 - 2.0 + 1.0)).abs() < 1e-13);
        assert!((fr - (1.0 + 2.0 - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn mass_matrix_integrates_polynomial_products() {
        // u = x, v = x^2 on a degree-3 Gauss rule: (u, v)_M = int x^3 = 0,
        // (u, u)_M = int x^2 = 2/3.
        let ops = build_spectral_sbp(NodeFamily::GaussLegendre, 3).unwrap();
        let u = ops.nodes.mapv(|x| x);
        let v = ops.nodes.mapv(|x| x * x);
        let uv: f64 = (0..4).map(|i| ops.mass[i] * u[i] * v[i]).sum();
        let uu: f64 = (0..4).map(|i| ops.mass[i] * u[i] * u[i]).sum();
        assert!(uv.abs() < 1e-15);
        assert!((uu - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn perturbed_operator_fails_verification() {
        let mut ops = build_spectral_sbp(NodeFamily::GaussLobatto, 3).unwrap();
        ops.d[(1, 2)] += 1e-3;
        assert!(verify_sbp(&ops) >= 1e-4);
    }

    #[test]
    fn fd_sbp_identity_holds() {
        for order in [2, 4] {
            for n in [8, 20, 33, 50, 100] {
                for len in [2.0, 0.7] {
                    let ops = build_fd_sbp(order, n, len).unwrap();
                    let res = verify_sbp(&ops);
                    assert!(res <= 1e-12, "order {order} n={n} len={len}: {res:e}");
                }
            }
        }
    }

    #[test]
    fn fd_rejects_bad_configurations() {
        assert!(build_fd_sbp(6, 20, 2.0).is_err());
        assert!(build_fd_sbp(4, 7, 2.0).is_err());
        assert!(build_fd_sbp(2, 3, 2.0).is_err());
    }

    #[test]
    fn fd4_interior_rows_differentiate_x4() {
        let ops = build_fd_sbp(4, 20, 2.0).unwrap();
        let f = ops.nodes.mapv(|x| x.powi(4));
        let df = ops.d.dot(&f);
        for i in 4..16 {
            let want = 4.0 * ops.nodes[i].powi(3);
            assert!((df[i] - want).abs() < 1e-10, "row {i}: {} vs {want}", df[i]);
        }
    }

    #[test]
    fn fd2_differentiates_linears_everywhere() {
        let ops = build_fd_sbp(2, 15, 2.0).unwrap();
        let f = ops.nodes.mapv(|x| 3.0 * x - 1.0);
        let df = ops.d.dot(&f);
        for i in 0..15 {
            assert!((df[i] - 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn dissipation_zero_strength_is_zero_matrix() {
        let a = build_dissipation(4, 20, 0.0).unwrap();
        assert!(a.matrix.iter().all(|&v| v == 0.0));
        assert!(build_dissipation(4, 20, -1.0).is_err());
    }

    #[test]
    fn dissipation_is_negative_semidefinite_in_m() {
        let mut rng = StdRng::seed_from_u64(11);
        for order in [2, 4] {
            let n = 30;
            let a = build_dissipation(order, n, 1.0).unwrap();
            let m = build_fd_sbp(order, n, 2.0).unwrap().mass;
            for _ in 0..100 {
                let v = Array1::from_iter((0..n).map(|_| rng.random_range(-1.0..1.0)));
                let av = a.matrix.dot(&v);
                let q: f64 = (0..n).map(|i| v[i] * m[i] * av[i]).sum();
                assert!(q <= 1e-12, "order {order}: v'MAv = {q:e}");
            }
        }
    }

    #[test]
    fn dissipation_annihilates_low_polynomials() {
        for order in [2, 4] {
            let a = build_dissipation(order, 25, 1.0).unwrap();
            let ones = Array1::from_elem(25, 1.0);
            let r = a.matrix.dot(&ones);
            assert!(r.iter().all(|v| v.abs() < 1e-12), "order {order}: A 1 != 0");
        }
        // The second difference also kills linears exactly.
        let a = build_dissipation(4, 25, 1.0).unwrap();
        let lin = build_fd_sbp(4, 25, 2.0).unwrap().nodes;
        let r = a.matrix.dot(&lin);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }
}
