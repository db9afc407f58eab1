//! Complex 3-vectors and the local spherical basis on the far-field sphere.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Vec3 = [f64; 3];

/// A complex field value `(x, y, z)` in Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec3(pub [Complex64; 3]);

impl ComplexVec3 {
    pub fn zero() -> Self {
        Self([Complex64::new(0.0, 0.0); 3])
    }

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self([x, y, z])
    }

    pub fn from_real(v: Vec3) -> Self {
        Self(v.map(|c| Complex64::new(c, 0.0)))
    }

    pub fn x(&self) -> Complex64 {
        self.0[0]
    }

    pub fn y(&self) -> Complex64 {
        self.0[1]
    }

    pub fn z(&self) -> Complex64 {
        self.0[2]
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// Bilinear product `Σ a_i b_i` with a real vector.
    pub fn dot_real(&self, v: Vec3) -> Complex64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }

    /// Hermitian product `Σ conj(a_i) b_i`.
    pub fn hdot(&self, other: &Self) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `v × self` for a real vector `v`.
    pub fn crossed_by(&self, v: Vec3) -> Self {
        let [a, b, c] = self.0;
        Self([v[1] * c - v[2] * b, v[2] * a - v[0] * c, v[0] * b - v[1] * a])
    }

    /// Component perpendicular to the unit vector `n`: `self − (self·n) n`.
    pub fn transverse_to(&self, n: Vec3) -> Self {
        let along = self.dot_real(n);
        Self([
            self.0[0] - along * n[0],
            self.0[1] - along * n[1],
            self.0[2] - along * n[2],
        ])
    }

    /// Real part of `conj(self) × other`, used for time-averaged Poynting vectors.
    pub fn re_conj_cross(&self, other: &Self) -> Vec3 {
        let [a, b, c] = self.0.map(|v| v.conj());
        let [d, e, f] = other.0;
        [(b * f - c * e).re, (c * d - a * f).re, (a * e - b * d).re]
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|c| c * rhs))
    }
}

/// Unit vectors `(ê_r, ê_θ, ê_φ)` at polar angle θ and azimuth φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalFrame {
    pub r_hat: Vec3,
    pub theta_hat: Vec3,
    pub phi_hat: Vec3,
}

impl SphericalFrame {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::from_trig(ct, st, cp, sp)
    }

    pub fn from_trig(cos_theta: f64, sin_theta: f64, cos_phi: f64, sin_phi: f64) -> Self {
        Self {
            r_hat: [sin_theta * cos_phi, sin_theta * sin_phi, cos_theta],
            theta_hat: [cos_theta * cos_phi, cos_theta * sin_phi, -sin_theta],
            phi_hat: [-sin_phi, cos_phi, 0.0],
        }
    }

    /// Cartesian vector from `(ê_r, ê_θ, ê_φ)` components.
    pub fn to_cartesian(&self, r: Complex64, theta: Complex64, phi: Complex64) -> ComplexVec3 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = r * self.r_hat[i] + theta * self.theta_hat[i] + phi * self.phi_hat[i];
        }
        ComplexVec3(out)
    }

    pub fn components(&self, v: &ComplexVec3) -> FarFieldComponents {
        FarFieldComponents {
            r: v.dot_real(self.r_hat),
            theta: v.dot_real(self.theta_hat),
            phi: v.dot_real(self.phi_hat),
        }
    }
}

/// Field resolved on the local spherical basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldComponents {
    pub r: Complex64,
    pub theta: Complex64,
    pub phi: Complex64,
}

/// A transverse field value on the far-field sphere, `(ê_θ, ê_φ)` components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldSample {
    pub theta: f64,
    pub phi: f64,
    pub e_theta: Complex64,
    pub e_phi: Complex64,
}

impl FarFieldSample {
    pub fn to_cartesian(&self) -> ComplexVec3 {
        SphericalFrame::new(self.theta, self.phi).to_cartesian(
            Complex64::new(0.0, 0.0),
            self.e_theta,
            self.e_phi,
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.e_theta.norm_sqr() + self.e_phi.norm_sqr()
    }
}
