//! Scheme configuration: node basis, volume form and the six interface flux
//! variants.
//!
//! At an interface with left trace u- and right trace u+, coefficient traces
//! a-/a+ and the pointwise coefficient value a(x) =: a_e, the fluxes are
//!
//!   edge central      a_e (u- + u+)/2        edge upwind      a_e u-
//!   split central     (a- u- + a+ u+)/2      split upwind     a- u-
//!   unsplit central   ((au)- + (au)+)/2      unsplit upwind   (au)-
//!
//! The unsplit variants act on traces of the nodal product a∘u; callers pass
//! those products through the u-/u+ slots.

use crate::error::{Error, Result};
use crate::quadrature::NodeFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    GaussLegendre,
    GaussLobatto,
    FiniteDifference { order: usize, nodes_per_element: usize },
}

impl BasisKind {
    pub fn includes_boundary(self) -> bool {
        !matches!(self, BasisKind::GaussLegendre)
    }

    pub fn node_family(self) -> Option<NodeFamily> {
        match self {
            BasisKind::GaussLegendre => Some(NodeFamily::GaussLegendre),
            BasisKind::GaussLobatto => Some(NodeFamily::GaussLobatto),
            BasisKind::FiniteDifference { .. } => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisKind::GaussLegendre => "gl",
            BasisKind::GaussLobatto => "gll",
            BasisKind::FiniteDifference { .. } => "fd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    EdgeCentral,
    SplitCentral,
    UnsplitCentral,
    EdgeUpwind,
    SplitUpwind,
    UnsplitUpwind,
}

impl FluxKind {
    pub const ALL: [FluxKind; 6] = [
        FluxKind::EdgeCentral,
        FluxKind::SplitCentral,
        FluxKind::UnsplitCentral,
        FluxKind::EdgeUpwind,
        FluxKind::SplitUpwind,
        FluxKind::UnsplitUpwind,
    ];

    pub fn is_upwind(self) -> bool {
        matches!(
            self,
            FluxKind::EdgeUpwind | FluxKind::SplitUpwind | FluxKind::UnsplitUpwind
        )
    }

    /// Sigma in the boundary-term diagnostics: 1 for upwind, 0 for central.
    pub fn sigma(self) -> f64 {
        if self.is_upwind() {
            1.0
        } else {
            0.0
        }
    }

    /// Whether the flux acts on traces of the nodal product a∘u.
    pub fn uses_product_traces(self) -> bool {
        matches!(self, FluxKind::UnsplitCentral | FluxKind::UnsplitUpwind)
    }

    /// The upwind flux of the same family; used at the outflow boundary.
    pub fn upwind_member(self) -> FluxKind {
        match self {
            FluxKind::EdgeCentral | FluxKind::EdgeUpwind => FluxKind::EdgeUpwind,
            FluxKind::SplitCentral | FluxKind::SplitUpwind => FluxKind::SplitUpwind,
            FluxKind::UnsplitCentral | FluxKind::UnsplitUpwind => FluxKind::UnsplitUpwind,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FluxKind::EdgeCentral => "edge_central",
            FluxKind::SplitCentral => "split_central",
            FluxKind::UnsplitCentral => "unsplit_central",
            FluxKind::EdgeUpwind => "edge_upwind",
            FluxKind::SplitUpwind => "split_upwind",
            FluxKind::UnsplitUpwind => "unsplit_upwind",
        }
    }

    pub fn parse(s: &str) -> Result<FluxKind> {
        FluxKind::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown flux '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeForm {
    Split,
    Unsplit,
}

impl VolumeForm {
    pub fn label(self) -> &'static str {
        match self {
            VolumeForm::Split => "split",
            VolumeForm::Unsplit => "unsplit",
        }
    }

    pub fn parse(s: &str) -> Result<VolumeForm> {
        match s {
            "split" => Ok(VolumeForm::Split),
            "unsplit" => Ok(VolumeForm::Unsplit),
            _ => Err(Error::Config(format!("unknown volume form '{s}'"))),
        }
    }
}

/// Full spatial scheme description.
#[derive(Debug, Clone, Copy)]
pub struct SchemeConfig {
    pub basis: BasisKind,
    /// Polynomial degree for spectral bases; ignored for FD.
    pub degree: usize,
    pub flux: FluxKind,
    pub form: VolumeForm,
    /// Artificial dissipation strength (FD only); None disables it.
    pub dissipation: Option<f64>,
}

/// Pointwise numerical flux. For the unsplit variants the caller must pass
/// the product traces (au)-/(au)+ in the u-/u+ slots (see `interface_flux`).
pub fn numerical_flux(
    kind: FluxKind,
    u_minus: f64,
    u_plus: f64,
    a_minus: f64,
    a_plus: f64,
    a_edge: f64,
) -> f64 {
    match kind {
        FluxKind::EdgeCentral => a_edge * 0.5 * (u_minus + u_plus),
        FluxKind::SplitCentral => 0.5 * (a_minus * u_minus + a_plus * u_plus),
        FluxKind::UnsplitCentral => 0.5 * (u_minus + u_plus),
        FluxKind::EdgeUpwind => a_edge * u_minus,
        FluxKind::SplitUpwind => a_minus * u_minus,
        FluxKind::UnsplitUpwind => u_minus,
    }
}

/// Trace data available at one interface.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceTraces {
    pub u_minus: f64,
    pub u_plus: f64,
    pub au_minus: f64,
    pub au_plus: f64,
    /// Exact coefficient value at the interface point.
    pub a_edge: f64,
}

/// Numerical flux at an interface, routing product traces to the unsplit
/// variants. Coefficient traces equal the exact edge value by construction.
pub fn interface_flux(kind: FluxKind, tr: &InterfaceTraces) -> f64 {
    if kind.uses_product_traces() {
        numerical_flux(kind, tr.au_minus, tr.au_plus, tr.a_edge, tr.a_edge, tr.a_edge)
    } else {
        numerical_flux(kind, tr.u_minus, tr.u_plus, tr.a_edge, tr.a_edge, tr.a_edge)
    }
}
