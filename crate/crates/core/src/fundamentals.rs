//! Greenshields fundamental diagram and the demand/supply functions derived
//! from it.
//!
//! The velocity law is linear, `V(rho) = v_max (1 - rho / rho_max)`, so the
//! flux `f(rho) = rho V(rho)` is a concave parabola with its vertex at the
//! critical density `rho_max / 2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Round-off slack accepted on density bounds before reporting a domain error.
pub const DENSITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalDiagram {
    v_max: f64,
    rho_max: f64,
}

impl FundamentalDiagram {
    pub fn new(v_max: f64, rho_max: f64) -> Result<Self> {
        if !(v_max.is_finite() && v_max > 0.0) {
            return Err(Error::config(format!("v_max must be positive, got {v_max}")));
        }
        if !(rho_max.is_finite() && rho_max > 0.0) {
            return Err(Error::config(format!("rho_max must be positive, got {rho_max}")));
        }
        Ok(Self { v_max, rho_max })
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    /// Density at which the flux is maximal.
    pub fn critical_density(&self) -> f64 {
        0.5 * self.rho_max
    }

    /// Maximal flux of the road, attained at the critical density.
    pub fn capacity(&self) -> f64 {
        0.25 * self.v_max * self.rho_max
    }

    /// Slope `v_max / rho_max` of the velocity law; `-f''/2` of the flux.
    pub fn stiffness(&self) -> f64 {
        self.v_max / self.rho_max
    }

    pub fn check(&self, rho: f64) -> Result<()> {
        if rho.is_finite() && rho >= -DENSITY_SLACK && rho <= self.rho_max + DENSITY_SLACK {
            Ok(())
        } else {
            Err(Error::Domain {
                value: rho,
                rho_max: self.rho_max,
            })
        }
    }

    pub fn velocity(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(self.velocity_unchecked(rho))
    }

    pub fn flux(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(self.flux_unchecked(rho))
    }

    pub fn flux_derivative(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(self.flux_derivative_unchecked(rho))
    }

    /// Largest flux the road can send downstream.
    pub fn demand(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(if rho <= self.critical_density() {
            self.flux_unchecked(rho)
        } else {
            self.capacity()
        })
    }

    /// Largest flux the road can absorb from upstream.
    pub fn supply(&self, rho: f64) -> Result<f64> {
        self.check(rho)?;
        Ok(if rho <= self.critical_density() {
            self.capacity()
        } else {
            self.flux_unchecked(rho)
        })
    }

    /// The polynomial extension of the velocity law, valid for any real
    /// density. Coupling states of the relaxation solver may leave the
    /// physical range, so their residuals are measured with this.
    pub fn velocity_unchecked(&self, rho: f64) -> f64 {
        self.v_max * (1.0 - rho / self.rho_max)
    }

    pub fn flux_unchecked(&self, rho: f64) -> f64 {
        rho * self.velocity_unchecked(rho)
    }

    pub fn flux_derivative_unchecked(&self, rho: f64) -> f64 {
        self.v_max * (1.0 - 2.0 * rho / self.rho_max)
    }
}
