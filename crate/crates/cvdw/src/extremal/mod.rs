//! Optimization and theorem-verification core: class configurations,
//! randomized class members, knot-norm minimization, first-order residuals
//! and the randomized inequality suites.

mod knots;
mod lagrange;
mod member;
mod suites;

pub use knots::{minimize_knot_norm, KnotSearch};
pub use lagrange::{lagrange_residual, LagrangeResidual};
pub use member::{random_class_member, ClassMember, SourceMode};
pub use suites::{
    comparison_search, landau_kolmogorov_check, rearrangement_theorem_check, taikov_check,
    theorem22_check, TaikovReport, VerificationOutcome,
};

use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, LinkFunction};
use crate::spline::KnotVector;
use crate::standard::{standard_function, StandardFunction};

/// The three instantiated function classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    /// Bounded r-th derivative on the line (β = 0).
    Sobolev,
    /// Analytic in a strip with bounded real part of the r-th derivative;
    /// identity link.
    Achieser,
    /// Analytic in a strip with bounded r-th derivative; tangent link.
    Hardy,
}

/// A concrete class: smoothing width, derivative order and link choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassConfig {
    pub kind: ClassKind,
    pub r: u32,
    pub beta: f64,
}

impl ClassConfig {
    pub fn new(kind: ClassKind, r: u32, beta: f64) -> Result<Self> {
        let cfg = ClassConfig { kind, r, beta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sobolev(r: u32) -> Result<Self> {
        Self::new(ClassKind::Sobolev, r, 0.0)
    }

    pub fn achieser(r: u32, beta: f64) -> Result<Self> {
        Self::new(ClassKind::Achieser, r, beta)
    }

    pub fn hardy(r: u32, beta: f64) -> Result<Self> {
        Self::new(ClassKind::Hardy, r, beta)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ClassKind::Sobolev => {
                if self.beta != 0.0 {
                    return Err(Error::Config(
                        "the Sobolev class has no smoothing width (β must be 0)".into(),
                    ));
                }
                if self.r < 1 {
                    return Err(Error::Config("the Sobolev class needs r ≥ 1".into()));
                }
            }
            ClassKind::Achieser | ClassKind::Hardy => {
                if !(self.beta.is_finite() && self.beta > 0.0) {
                    return Err(Error::Config(
                        "analytic classes need a positive smoothing width β".into(),
                    ));
                }
            }
        }
        self.kernel().validate()
    }

    /// Outer convolution kernel: `D_r`, or the identity when r = 0.
    pub fn kernel(&self) -> KernelSpec {
        if self.r == 0 {
            KernelSpec::Identity
        } else {
            KernelSpec::bernoulli(self.r)
        }
    }

    pub fn link(&self) -> LinkFunction {
        match self.kind {
            ClassKind::Hardy => LinkFunction::Phi0,
            _ => LinkFunction::Phi1,
        }
    }

    /// Whether the class contains the constants (the outer kernel is one of
    /// the oscillation-diminishing polynomial kernels, r ≥ 1). When true,
    /// sources must keep `φ(K_β∗u)` orthogonal to constants.
    pub fn constants_allowed(&self) -> bool {
        self.r >= 1
    }

    /// The standard function `Φ_n` of this class.
    pub fn standard(&self, n: u32, n_grid: usize) -> Result<StandardFunction> {
        standard_function(
            self.kernel(),
            self.link(),
            self.beta,
            KnotVector::uniform(n),
            n_grid,
        )
    }

    /// The standard function of the integrated outer kernel.
    pub fn standard_integrated(&self, n: u32, n_grid: usize) -> Result<StandardFunction> {
        standard_function(
            self.kernel().integrated(),
            self.link(),
            self.beta,
            KnotVector::uniform(n),
            n_grid,
        )
    }

    pub fn label(&self) -> String {
        match self.kind {
            ClassKind::Sobolev => format!("sobolev(r={})", self.r),
            ClassKind::Achieser => format!("achieser(r={}, beta={})", self.r, self.beta),
            ClassKind::Hardy => format!("hardy(r={}, beta={})", self.r, self.beta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(ClassConfig::sobolev(0).is_err());
        assert!(ClassConfig::sobolev(1).is_ok());
        assert!(ClassConfig::achieser(0, 1.0).is_ok());
        assert!(ClassConfig::achieser(1, 0.0).is_err());
        assert!(ClassConfig::hardy(2, -1.0).is_err());
        assert!(ClassConfig::new(ClassKind::Sobolev, 1, 0.5).is_err());
    }

    #[test]
    fn class_table_matches_kernel_and_link() {
        let s = ClassConfig::sobolev(2).unwrap();
        assert_eq!(s.kernel(), KernelSpec::bernoulli(2));
        let a = ClassConfig::achieser(0, 1.0).unwrap();
        assert_eq!(a.kernel(), KernelSpec::Identity);
        assert_eq!(a.link(), LinkFunction::Phi1);
        assert!(!a.constants_allowed());
        let h = ClassConfig::hardy(1, 0.5).unwrap();
        assert_eq!(h.link(), LinkFunction::Phi0);
        assert!(h.constants_allowed());
    }
}
