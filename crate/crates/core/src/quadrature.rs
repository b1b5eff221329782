//! Legendre polynomials, Gauss quadrature rules and barycentric interpolation
//! on the reference interval [-1, 1].
//!
//! Two node families are supported:
//!
//! * Gauss-Legendre (`GaussLegendre`): the N+1 roots of P_{N+1}. Exact for
//!   polynomials up to degree 2N+1. Endpoints are not nodes.
//! * Gauss-Lobatto (`GaussLobatto`): ±1 together with the N-1 roots of P'_N.
//!   Exact up to degree 2N-1. Endpoints are nodes.
//!
//! Nodes are found by Newton iteration from cosine-spaced initial guesses and
//! then symmetrised about the origin, so mirror pairs match exactly. Weights
//! come from the closed forms w_i = 2/((1-x_i^2) P'_{N+1}(x_i)^2) (Gauss) and
//! w_i = 2/(N(N+1) P_N(x_i)^2) (Lobatto).

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};

/// Hard cap on the polynomial degree of a rule. Newton node-finding and the
/// barycentric weight products are comfortably accurate below this.
pub const MAX_DEGREE: usize = 32;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-14;

/// Node family of a quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeFamily {
    GaussLegendre,
    GaussLobatto,
}

impl NodeFamily {
    pub fn includes_boundary(self) -> bool {
        matches!(self, NodeFamily::GaussLobatto)
    }

    /// Highest polynomial degree integrated exactly by a degree-N rule.
    pub fn exactness(self, n: usize) -> usize {
        match self {
            NodeFamily::GaussLegendre => 2 * n + 1,
            NodeFamily::GaussLobatto => 2 * n - 1,
        }
    }
}

/// Nodes, quadrature weights and barycentric weights of a collocation rule
/// with N+1 points on [-1, 1].
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: NodeFamily,
    pub degree: usize,
    pub nodes: Array1<f64>,
    pub weights: Array1<f64>,
    /// Barycentric weights of the node set, normalised to max |w| = 1.
    pub bary: Array1<f64>,
}

/// Evaluate (P_n(x), P_n'(x)) by the three-term recurrence
/// k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2} and its derivative.
pub fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut pm, mut p) = (1.0, x);
    let (mut dm, mut d) = (0.0, 1.0);
    for k in 2..=n {
        let kf = k as f64;
        let pn = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * pm) / kf;
        let dn = dm + (2.0 * kf - 1.0) * p;
        pm = p;
        p = pn;
        dm = d;
        d = dn;
    }
    (p, d)
}

/// Build the degree-N rule of the given family.
pub fn build_rule(kind: NodeFamily, degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_DEGREE {
        return Err(Error::InvalidDegree {
            kind: "quadrature",
            degree,
            reason: "exceeds MAX_DEGREE",
        });
    }
    let nodes = match kind {
        NodeFamily::GaussLegendre => gauss_nodes(degree),
        NodeFamily::GaussLobatto => {
            if degree == 0 {
                return Err(Error::InvalidDegree {
                    kind: "Gauss-Lobatto",
                    degree,
                    reason: "needs at least two nodes",
                });
            }
            lobatto_nodes(degree)
        }
    };
    let weights = match kind {
        NodeFamily::GaussLegendre => {
            let np = degree + 1;
            nodes.mapv(|x| {
                let (_, d) = legendre_eval(np, x);
                2.0 / ((1.0 - x * x) * d * d)
            })
        }
        NodeFamily::GaussLobatto => {
            let nf = (degree * (degree + 1)) as f64;
            nodes.mapv(|x| {
                let (p, _) = legendre_eval(degree, x);
                2.0 / (nf * p * p)
            })
        }
    };
    let bary = barycentric_weights(&nodes);
    Ok(QuadratureRule {
        kind,
        degree,
        nodes,
        weights,
        bary,
    })
}

/// Gauss-Legendre rule with an arbitrary point count, for measuring errors
/// against non-polynomial reference solutions. Solution bases stay capped at
/// MAX_DEGREE; quadrature used purely for integration does not need the cap.
pub fn fine_gauss_rule(n_points: usize) -> Result<QuadratureRule> {
    if n_points == 0 {
        return Err(Error::InvalidDegree {
            kind: "fine quadrature",
            degree: 0,
            reason: "needs at least one point",
        });
    }
    let degree = n_points - 1;
    let nodes = gauss_nodes(degree);
    let weights = nodes.mapv(|x| {
        let (_, d) = legendre_eval(n_points, x);
        2.0 / ((1.0 - x * x) * d * d)
    });
    let bary = barycentric_weights(&nodes);
    Ok(QuadratureRule {
        kind: NodeFamily::GaussLegendre,
        degree,
        nodes,
        weights,
        bary,
    })
}

/// Roots of P_{N+1} by Newton from Chebyshev-like guesses.
fn gauss_nodes(degree: usize) -> Array1<f64> {
    let n = degree + 1;
    let mut x = Array1::zeros(n);
    for i in 0..n {
        let mut xi = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_eval(n, xi);
            xi -= p / d;
            if p.abs() < NEWTON_TOL {
                break;
            }
        }
        x[i] = xi;
    }
    symmetrise(&mut x);
    x
}

/// ±1 plus the roots of P'_N. The interior update is Newton applied to
/// f = (1-x^2) P'_N, for which f' = -N(N+1) P_N.
fn lobatto_nodes(degree: usize) -> Array1<f64> {
    let n = degree + 1;
    let mut x = Array1::zeros(n);
    x[0] = -1.0;
    x[n - 1] = 1.0;
    let nf = (degree * (degree + 1)) as f64;
    for j in 1..degree {
        let mut xj = -(std::f64::consts::PI * j as f64 / degree as f64).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_eval(degree, xj);
            let f = (1.0 - xj * xj) * d;
            xj += f / (nf * p);
            if f.abs() < NEWTON_TOL {
                break;
            }
        }
        x[j] = xj;
    }
    symmetrise(&mut x);
    x
}

/// Force exact mirror symmetry; Newton leaves pairs within ~1 ulp of it.
fn symmetrise(x: &mut Array1<f64>) {
    let n = x.len();
    for i in 0..n / 2 {
        let m = 0.5 * (x[i] - x[n - 1 - i]);
        x[i] = m;
        x[n - 1 - i] = -m;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
}

fn barycentric_weights(nodes: &Array1<f64>) -> Array1<f64> {
    let n = nodes.len();
    let mut w = Array1::from_elem(n, 1.0);
    for j in 0..n {
        for i in 0..n {
            if i != j {
                w[j] /= nodes[j] - nodes[i];
            }
        }
    }
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    w / scale
}

/// Collocation derivative matrix D_{kj} = l_j'(x_k) in barycentric form with
/// the negative-sum trick on the diagonal, so D annihilates constants exactly.
pub fn differentiation_matrix(rule: &QuadratureRule) -> Array2<f64> {
    let n = rule.nodes.len();
    let mut d = Array2::zeros((n, n));
    for k in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if j != k {
                let v = (rule.bary[j] / rule.bary[k]) / (rule.nodes[k] - rule.nodes[j]);
                d[(k, j)] = v;
                diag -= v;
            }
        }
        d[(k, k)] = diag;
    }
    d
}

/// Evaluate the interpolating polynomial through (nodes, values) at `x` using
/// the second barycentric form. Exact node hits return the nodal value.
pub fn interpolate(nodes: &Array1<f64>, bary: &Array1<f64>, values: &[f64], x: f64) -> f64 {
    debug_assert_eq!(nodes.len(), values.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..nodes.len() {
        let dx = x - nodes[j];
        if dx == 0.0 {
            return values[j];
        }
        let c = bary[j] / dx;
        num += c * values[j];
        den += c;
    }
    num / den
}

/// Row vector r with r . f = interpolant(f)(x); used to build restriction and
/// oversampling operators.
pub fn evaluation_row(nodes: &Array1<f64>, bary: &Array1<f64>, x: f64) -> Array1<f64> {
    let n = nodes.len();
    let mut r = Array1::zeros(n);
    for j in 0..n {
        if x - nodes[j] == 0.0 {
            r.fill(0.0);
            r[j] = 1.0;
            return r;
        }
        r[j] = bary[j] / (x - nodes[j]);
    }
    let s: f64 = r.sum();
    r / s
}
