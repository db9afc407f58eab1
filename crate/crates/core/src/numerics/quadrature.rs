//! Gauss–Legendre rules and a composite, panel-doubling integrator.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Error, Result};
use crate::vector::ComplexVec3;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 4096;

/// Relative size of `∫|f|` below which panel gaps count as rounding noise.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Values that can be accumulated by a quadrature rule.
pub trait Quadrable: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    /// Norm used by the convergence test.
    fn magnitude(&self) -> f64;
}

impl Quadrable for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Quadrable for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Quadrable for ComplexVec3 {
    fn zero() -> Self {
        ComplexVec3::zero()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-size bundles of real integrands share one set of nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bundle<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Bundle<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Bundle<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Bundle(self.0.map(|v| v * rhs))
    }
}

impl<const N: usize> Quadrable for Bundle<N> {
    fn zero() -> Self {
        Bundle([0.0; N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `order`-point rule by Newton iteration on `P_order`.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(config(format!(
                "quadrature order {order} outside {MIN_ORDER}..={MAX_ORDER}"
            )));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // node i is the i-th largest; store ascending and mirror
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self {
            order,
            nodes,
            weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel estimate of `∫_a^b f`.
    pub fn apply<T: Quadrable>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + f(mid + half * x) * (w * half))
    }

    /// Estimate together with `∫|f|`, the scale of rounding noise in the sum.
    fn apply_with_mass<T: Quadrable>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold((T::zero(), 0.0), |(acc, mass), (&x, &w)| {
                let v = f(mid + half * x);
                (acc + v * (w * half), mass + v.magnitude() * (w * half).abs())
            })
    }

    /// Composite estimate over `panels` equal sub-intervals.
    pub fn composite<T: Quadrable>(
        &self,
        f: &impl Fn(f64) -> T,
        a: f64,
        b: f64,
        panels: usize,
    ) -> T {
        let h = (b - a) / panels as f64;
        (0..panels).fold(T::zero(), |acc, i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == panels { b } else { lo + h };
            acc + self.apply(f, lo, hi)
        })
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre integration with local panel bisection.
///
/// The interval is first cut into `initial_panels` equal panels. A panel is
/// accepted when its one-panel and two-half-panel estimates differ by no more
/// than its share (by width) of `max(rel_tol * |I|, abs_tol)`; otherwise it is
/// bisected. Endpoint singularities such as `sqrt(cos θ)` at `θ = π/2` are
/// resolved by geometric grading.
#[derive(Debug, Clone)]
pub struct Integrator {
    rule: QuadratureRule,
    rel_tol: f64,
    abs_tol: f64,
    initial_panels: usize,
    max_depth: u32,
}

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-15;

impl Default for Integrator {
    fn default() -> Self {
        Self::new(QuadratureRule::gauss_legendre(16).expect("order 16 is valid"), DEFAULT_REL_TOL)
            .expect("default tolerance is valid")
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    coarse: T,
    depth: u32,
}

impl Integrator {
    pub fn new(rule: QuadratureRule, rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(config(format!("relative tolerance {rel_tol} outside (0, 1)")));
        }
        Ok(Self {
            rule,
            rel_tol,
            abs_tol: DEFAULT_ABS_TOL,
            initial_panels: 1,
            max_depth: 40,
        })
    }

    pub fn with_tolerance(rel_tol: f64) -> Result<Self> {
        Self::new(QuadratureRule::gauss_legendre(16)?, rel_tol)
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn initial_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    /// Maximum number of bisections of any initial panel.
    pub fn max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// `∫_a^b f(x) dx`. An empty interval (`a == b`) integrates to zero.
    pub fn integrate<T: Quadrable>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> Result<T> {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(domain(format!("invalid integration interval [{a}, {b}]")));
        }
        if a == b {
            return Ok(T::zero());
        }
        let n = self.initial_panels;
        let h = (b - a) / n as f64;
        let mut mass = 0.0;
        let mut stack: Vec<Panel<T>> = (0..n)
            .rev()
            .map(|i| {
                let lo = a + h * i as f64;
                let hi = if i + 1 == n { b } else { lo + h };
                let (coarse, m) = self.rule.apply_with_mass(&f, lo, hi);
                mass += m;
                Panel {
                    a: lo,
                    b: hi,
                    coarse,
                    depth: 0,
                }
            })
            .collect();
        let scale = stack
            .iter()
            .fold(T::zero(), |acc, p| acc + p.coarse)
            .magnitude();
        // integrals that cancel to zero would otherwise chase rounding noise
        let floor = (self.abs_tol).max(NOISE_FLOOR * mass);
        let budget = (self.rel_tol * scale).max(floor);
        let mut total = T::zero();
        let mut unresolved = 0.0;
        while let Some(panel) = stack.pop() {
            let mid = 0.5 * (panel.a + panel.b);
            let left = self.rule.apply(&f, panel.a, mid);
            let right = self.rule.apply(&f, mid, panel.b);
            let fine = left + right;
            let gap = (fine + panel.coarse * -1.0).magnitude();
            if !gap.is_finite() {
                return Err(Error::Accuracy {
                    estimate: f64::NAN,
                    gap,
                    context: format!("non-finite integrand on [{}, {}]", panel.a, panel.b),
                });
            }
            let share = budget * (panel.b - panel.a) / (b - a);
            if gap <= share {
                total = total + fine;
            } else if panel.depth >= self.max_depth {
                total = total + fine;
                unresolved += gap;
            } else {
                stack.push(Panel {
                    a: mid,
                    b: panel.b,
                    coarse: right,
                    depth: panel.depth + 1,
                });
                stack.push(Panel {
                    a: panel.a,
                    b: mid,
                    coarse: left,
                    depth: panel.depth + 1,
                });
            }
        }
        if unresolved > (self.rel_tol * total.magnitude()).max(floor) {
            return Err(Error::Accuracy {
                estimate: total.magnitude(),
                gap: unresolved,
                context: format!("no convergence on [{a}, {b}] at depth {}", self.max_depth),
            });
        }
        Ok(total)
    }
}

/// Adaptive composite Gauss–Legendre estimate of `∫_a^b f` using `rule` per panel.
pub fn integrate_1d<T: Quadrable>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
    rel_tol: f64,
) -> Result<T> {
    Integrator::new(rule.clone(), rel_tol)?.integrate(f, a, b)
}
