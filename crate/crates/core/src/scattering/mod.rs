//! Scattering diagrams: the truncated quantum torus, walls and path-ordered
//! products, and King stability by enumeration over small prime fields.

pub mod stability;
pub mod torus;
pub mod walls;

pub use stability::{
    default_eta_grid, eta_check, extended_eta_grid, eta_embed, hn_filtration, king_semistable_exists, wall_support_scan, EtaSample, FpRep, HnFactor,
    Kappa, WallScan,
};
pub use torus::{LPoly, QuantumTorus, TorusElement};
pub use walls::{format_point, Cone, GComplex, PathSpec, Wall};
