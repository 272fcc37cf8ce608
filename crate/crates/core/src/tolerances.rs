//! Numerical thresholds shared by the verification routines.

use serde::{Deserialize, Serialize};

/// Every tolerance used by the numerical checks, in one record. The
/// eigensolver's degeneracy threshold is fixed at
/// [`crate::linalg::DEGENERACY_TOL`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual `|f(ρ)| / Σ|terms|` accepted at eigenstate points.
    pub variety: f64,
    /// Residual that random (non-eigen) states are expected to exceed.
    pub separation: f64,
    /// Fraction of random states that must exceed `separation`.
    pub separation_fraction: f64,
    /// Normalized collinearity defect between `∇f` and the tilted parameter.
    pub normal_vector: f64,
    /// Gradients below this norm mark singular points and are skipped.
    pub singular_gradient: f64,
    /// Allowed variational-bound violation relative to the energy scale.
    pub variational_bound: f64,
    /// Error allowed in `Δx²Δp² = (k + 1/2)²` for oscillator eigenstates.
    pub uncertainty_eigen: f64,
    /// Slack on the bound `Δx²Δp² ≥ 1/4` for random states.
    pub uncertainty_bound: f64,
    /// Ground-state saturation of `Δx²Δp² = 1/4`.
    pub uncertainty_saturation: f64,
    /// Relative smallest singular value of the substituted Jacobian at eigenstates.
    pub cokernel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            variety: 1e-8,
            separation: 1e-4,
            separation_fraction: 0.99,
            normal_vector: 1e-6,
            singular_gradient: 1e-10,
            variational_bound: 1e-9,
            uncertainty_eigen: 1e-6,
            uncertainty_bound: 1e-9,
            uncertainty_saturation: 1e-10,
            cokernel: 1e-9,
        }
    }
}
