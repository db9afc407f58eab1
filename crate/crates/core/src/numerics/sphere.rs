//! Surface integrals over zones of the unit sphere.
//!
//! The polar integral runs in `t = sqrt(|cos θ|)`, so `sin θ dθ = 2t dt` and the
//! aplanatic factor `sqrt(cos θ)` becomes the polynomial `t`.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use super::quadrature::{Integrator, Quadrable};
use crate::error::{domain, Error, Result};
use crate::vector::SphericalFrame;

/// A direction on the unit sphere with its trigonometric values precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (sin_theta, cos_theta) = theta.sin_cos();
        let (sin_phi, cos_phi) = phi.sin_cos();
        Self {
            theta,
            phi,
            cos_theta,
            sin_theta,
            cos_phi,
            sin_phi,
        }
    }

    fn from_cos_theta(cos_theta: f64, phi: f64) -> Self {
        let sin_theta = ((1.0 - cos_theta) * (1.0 + cos_theta)).max(0.0).sqrt();
        let (sin_phi, cos_phi) = phi.sin_cos();
        Self {
            theta: sin_theta.atan2(cos_theta),
            phi,
            cos_theta,
            sin_theta,
            cos_phi,
            sin_phi,
        }
    }

    pub fn frame(&self) -> SphericalFrame {
        SphericalFrame::from_trig(self.cos_theta, self.sin_theta, self.cos_phi, self.sin_phi)
    }

    pub fn r_hat(&self) -> [f64; 3] {
        [
            self.sin_theta * self.cos_phi,
            self.sin_theta * self.sin_phi,
            self.cos_theta,
        ]
    }
}

/// Nested polar/azimuthal integrator for `∫∫ f(θ, φ) sin θ dθ dφ`.
#[derive(Debug, Clone)]
pub struct SphereIntegrator {
    polar: Integrator,
    azimuthal: Integrator,
}

impl Default for SphereIntegrator {
    fn default() -> Self {
        Self::with_tolerance(super::quadrature::DEFAULT_REL_TOL).expect("default tolerance is valid")
    }
}

fn cos_clamped(theta: f64) -> f64 {
    if (theta - FRAC_PI_2).abs() < 1e-15 {
        0.0
    } else {
        theta.cos()
    }
}

impl SphereIntegrator {
    pub fn new(polar: Integrator, azimuthal: Integrator) -> Self {
        Self { polar, azimuthal }
    }

    pub fn with_tolerance(rel_tol: f64) -> Result<Self> {
        Ok(Self {
            polar: Integrator::with_tolerance(rel_tol)?,
            azimuthal: Integrator::with_tolerance(rel_tol)?.initial_panels(4),
        })
    }

    pub fn polar(&self) -> &Integrator {
        &self.polar
    }

    /// Integral over the zone `lo <= θ <= hi`, all azimuths.
    pub fn zone<T: Quadrable>(&self, f: impl Fn(&SpherePoint) -> T, lo: f64, hi: f64) -> Result<T> {
        if !(0.0..=PI).contains(&lo) || !(0.0..=PI).contains(&hi) || lo > hi {
            return Err(domain(format!("invalid polar zone [{lo}, {hi}]")));
        }
        if lo < FRAC_PI_2 && hi > FRAC_PI_2 {
            let upper = self.hemisphere_zone(&f, lo, FRAC_PI_2, true)?;
            let lower = self.hemisphere_zone(&f, FRAC_PI_2, hi, false)?;
            return Ok(upper + lower);
        }
        let forward = hi <= FRAC_PI_2;
        self.hemisphere_zone(&f, lo, hi, forward)
    }

    /// Forward cap `θ <= alpha` around `+z`.
    pub fn cap<T: Quadrable>(&self, f: impl Fn(&SpherePoint) -> T, alpha: f64) -> Result<T> {
        self.zone(f, 0.0, alpha)
    }

    /// Backward cap of half-angle `beta` around `−z`.
    pub fn backward_cap<T: Quadrable>(&self, f: impl Fn(&SpherePoint) -> T, beta: f64) -> Result<T> {
        self.zone(f, PI - beta, PI)
    }

    fn hemisphere_zone<T: Quadrable>(
        &self,
        f: &impl Fn(&SpherePoint) -> T,
        lo: f64,
        hi: f64,
        forward: bool,
    ) -> Result<T> {
        let sign = if forward { 1.0 } else { -1.0 };
        let (ta, tb) = if forward {
            (cos_clamped(hi).max(0.0).sqrt(), cos_clamped(lo).max(0.0).sqrt())
        } else {
            ((-cos_clamped(lo)).max(0.0).sqrt(), (-cos_clamped(hi)).max(0.0).sqrt())
        };
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let ring = |t: f64| -> T {
            let cos_theta = sign * t * t;
            let inner = self.azimuthal.integrate(
                |phi| f(&SpherePoint::from_cos_theta(cos_theta, phi)),
                0.0,
                2.0 * PI,
            );
            match inner {
                Ok(v) => v * (2.0 * t),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        };
        let total = self.polar.integrate(ring, ta, tb)?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }
}
