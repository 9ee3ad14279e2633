//! Checks of the spectral-triple axioms on a truncated lattice, plus the
//! Hochschild machinery and a few numerical diagnostics.

mod checks;
mod hochschild;
mod spectral;

use num_complex::Complex64;
use serde::Serialize;

pub use checks::{
    check_equivariance, check_first_order, check_hochschild, check_signs, check_zeroth_order,
    SignCheck, EQUIVARIANCE_TOL, FIRST_ORDER_TOL, HOCHSCHILD_TOL, SIGN_TOL,
};
pub use hochschild::{
    boundary, build_cycle, hochschild_representative, proportionality, ChainTerm, HochschildChain,
    Representative, MAX_CYCLE_DIMENSION,
};
pub use spectral::{
    check_pencil, counting_function, dirichlet_approx, pencil_matrix, pencil_minimum,
    spectral_dimension, sphere_samples, DirichletApprox, FitWindow, PencilMinimum,
    DEFAULT_PENCIL_SAMPLES,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedConstant {
    pub name: String,
    pub re: f64,
    pub im: f64,
}

impl NamedConstant {
    pub fn new(name: impl Into<String>, value: Complex64) -> Self {
        Self {
            name: name.into(),
            re: value.re,
            im: value.im,
        }
    }

    pub fn real(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            re: value,
            im: 0.0,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Outcome of one check. `pass` requires the residual to be within tolerance
/// and at least `min_interior` sites to have been examined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub constants: Vec<NamedConstant>,
    pub interior_sites: usize,
    pub min_interior: usize,
}

impl VerificationReport {
    pub fn new(
        name: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
        interior_sites: usize,
        min_interior: usize,
    ) -> Self {
        let pass = max_residual <= tolerance && interior_sites >= min_interior;
        Self {
            name: name.into(),
            pass,
            max_residual,
            tolerance,
            constants: Vec::new(),
            interior_sites,
            min_interior,
        }
    }

    pub fn with_constant(mut self, c: NamedConstant) -> Self {
        self.constants.push(c);
        self
    }

    pub fn constant(&self, name: &str) -> Option<Complex64> {
        self.constants
            .iter()
            .find(|c| c.name == name)
            .map(NamedConstant::value)
    }

    /// Forces a failure for reasons other than the residual.
    pub fn fail(mut self) -> Self {
        self.pass = false;
        self
    }
}
