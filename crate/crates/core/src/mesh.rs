//! Uniform 1-D meshes and nodal sampling of the advection coefficient.

use crate::error::{Error, Result};
use crate::operators::SbpOperatorSet;
use crate::quadrature::{self, NodeFamily};
use ndarray::Array2;

/// Partition of [x_left, x_right] into K equal elements.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    pub x_left: f64,
    pub x_right: f64,
    /// K+1 element boundaries, ascending; first and last equal the domain ends.
    pub boundaries: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(x_left: f64, x_right: f64, elements: usize) -> Result<Self> {
        if !(x_left < x_right) {
            return Err(Error::InvalidMesh(format!(
                "need x_left < x_right, got [{x_left}, {x_right}]"
            )));
        }
        if elements == 0 {
            return Err(Error::InvalidMesh("need at least one element".into()));
        }
        let k = elements;
        let dx = (x_right - x_left) / k as f64;
        let mut boundaries: Vec<f64> = (0..=k).map(|i| x_left + i as f64 * dx).collect();
        // Endpoints must be exact so boundary data is evaluated at the true
        // domain ends.
        boundaries[0] = x_left;
        boundaries[k] = x_right;
        Ok(Mesh1D {
            x_left,
            x_right,
            boundaries,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn dx(&self, k: usize) -> f64 {
        self.boundaries[k + 1] - self.boundaries[k]
    }

    pub fn min_dx(&self) -> f64 {
        (0..self.n_elements()).map(|k| self.dx(k)).fold(f64::INFINITY, f64::min)
    }

    /// Physical coordinate of reference point `xi` in element `k`.
    pub fn to_physical(&self, k: usize, xi: f64) -> f64 {
        0.5 * (self.boundaries[k] + self.boundaries[k + 1]) + 0.5 * self.dx(k) * xi
    }
}

/// How nodal coefficient values are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// a evaluated directly at the collocation nodes.
    DirectEvaluation,
    /// a interpolated through the N+1 Gauss-Lobatto points of each element and
    /// evaluated at the scheme's nodes. On boundary-including node sets this
    /// coincides with direct evaluation; on Gauss nodes it makes the
    /// restriction of the nodal coefficient reproduce the edge values.
    LobattoInterpolant,
}

/// Nodal and edge data of the coefficient a(x) on a mesh.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    /// K x n nodal values.
    pub nodal: Array2<f64>,
    /// K x n nodal values of a'(x), from the exact derivative closure.
    pub d_nodal: Array2<f64>,
    /// K+1 exact values a(x_k) at the element boundaries. Interface coupling
    /// always uses these, never extrapolations from element interiors.
    pub edge: Vec<f64>,
    pub mode: SamplingMode,
}

impl CoefficientField {
    pub fn max_abs(&self) -> f64 {
        let nodal = self.nodal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.edge.iter().fold(nodal, |m, v| m.max(v.abs()))
    }

    pub fn min_derivative(&self) -> f64 {
        self.d_nodal.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max_abs_derivative(&self) -> f64 {
        self.d_nodal.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Sample a and a' on every element of the mesh for the node set of `ops`.
pub fn sample_coefficient(
    a: impl Fn(f64) -> f64,
    a_prime: impl Fn(f64) -> f64,
    mesh: &Mesh1D,
    ops: &SbpOperatorSet,
    mode: SamplingMode,
) -> Result<CoefficientField> {
    let k_total = mesh.n_elements();
    let n = ops.n_nodes();
    let mut nodal = Array2::zeros((k_total, n));
    let mut d_nodal = Array2::zeros((k_total, n));
    let check = |v: f64, x: f64| -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteCoefficient { x })
        }
    };

    let lobatto_base = if mode == SamplingMode::LobattoInterpolant && !ops.includes_boundary {
        let degree = n - 1;
        Some(quadrature::build_rule(NodeFamily::GaussLobatto, degree.max(1))?)
    } else {
        None
    };

    for k in 0..k_total {
        match &lobatto_base {
            Some(rule) => {
                let mut samples = Vec::with_capacity(rule.nodes.len());
                for &xi in rule.nodes.iter() {
                    let x = mesh.to_physical(k, xi);
                    samples.push(check(a(x), x)?);
                }
                for (i, &xi) in ops.nodes.iter().enumerate() {
                    nodal[(k, i)] = quadrature::interpolate(&rule.nodes, &rule.bary, &samples, xi);
                }
            }
            None => {
                for (i, &xi) in ops.nodes.iter().enumerate() {
                    let x = mesh.to_physical(k, xi);
                    nodal[(k, i)] = check(a(x), x)?;
                }
            }
        }
        for (i, &xi) in ops.nodes.iter().enumerate() {
            let x = mesh.to_physical(k, xi);
            d_nodal[(k, i)] = check(a_prime(x), x)?;
        }
    }

    let mut edge = Vec::with_capacity(mesh.boundaries.len());
    for &x in &mesh.boundaries {
        edge.push(check(a(x), x)?);
    }

    Ok(CoefficientField {
        nodal,
        d_nodal,
        edge,
        mode,
    })
}
