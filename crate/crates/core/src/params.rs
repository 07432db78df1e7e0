//! Dimensionless chain parameters.
//!
//! Lengths are measured in units of the short tunnel `b`. The energy enters
//! through `beta = kappa * b` (negative energy, `E = -(hbar^2 / 2 m b^2) beta^2`)
//! or `beta = k * b` (positive energy, `E = +(hbar^2 / 2 m b^2) beta^2`); the
//! delta strength through `gamma = u * b`, positive for attractive wells.

use crate::error::{Error, Result};

/// Golden mean, the length ratio of the long cell in a Fibonacci chain.
pub const TAU: f64 = 1.618_033_988_749_895;

/// Largest exponent accepted before a typed overflow error is raised.
pub const OVERFLOW_EXPONENT: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Negative energy: growing and decaying exponentials, real matrices.
    Bound,
    /// Positive energy: plane waves, matrices of SU(1,1) form.
    Scattering,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Bound => "bound",
            Regime::Scattering => "scattering",
        }
    }
}

/// Energy, strength and geometry of a chain of equal delta wells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    beta: f64,
    gamma: f64,
    q: f64,
    regime: Regime,
}

impl ChainParams {
    pub fn new(beta: f64, gamma: f64, q: f64, regime: Regime) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {beta}")));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma must be finite, got {gamma}")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParams(format!("q must be positive, got {q}")));
        }
        Ok(Self { beta, gamma, q, regime })
    }

    pub fn bound(beta: f64, gamma: f64, q: f64) -> Result<Self> {
        Self::new(beta, gamma, q, Regime::Bound)
    }

    pub fn scattering(beta: f64, gamma: f64, q: f64) -> Result<Self> {
        Self::new(beta, gamma, q, Regime::Scattering)
    }

    /// Same chain at another energy.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(beta, self.gamma, self.q, self.regime)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.beta, gamma, self.q, self.regime)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `delta = gamma / beta`; the cell matrices are linear in it.
    pub fn delta(&self) -> f64 {
        self.gamma / self.beta
    }
}

/// Chain description without an energy, for scans over `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chain {
    pub gamma: f64,
    pub q: f64,
    pub regime: Regime,
}

impl Chain {
    pub fn new(gamma: f64, q: f64, regime: Regime) -> Self {
        Self { gamma, q, regime }
    }

    pub fn bound(gamma: f64, q: f64) -> Self {
        Self::new(gamma, q, Regime::Bound)
    }

    pub fn scattering(gamma: f64, q: f64) -> Self {
        Self::new(gamma, q, Regime::Scattering)
    }

    pub fn at(&self, beta: f64) -> Result<ChainParams> {
        ChainParams::new(beta, self.gamma, self.q, self.regime)
    }
}

impl From<ChainParams> for Chain {
    fn from(p: ChainParams) -> Self {
        Chain::new(p.gamma, p.q, p.regime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_is_golden() {
        assert!((TAU * TAU - TAU - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ChainParams::bound(0.0, 1.0, 1.0).is_err());
        assert!(ChainParams::bound(-1.0, 1.0, 1.0).is_err());
        assert!(ChainParams::bound(1.0, f64::NAN, 1.0).is_err());
        assert!(ChainParams::bound(1.0, 1.0, 0.0).is_err());
        let p = ChainParams::scattering(2.0, -3.0, TAU).unwrap();
        assert_eq!(p.delta(), -1.5);
    }
}
