//! Bessel functions of the first kind for orders 0, 1 and 2.
//!
//! Three regimes: the ascending power series below `SERIES_LIMIT`, Miller's
//! backward recurrence normalized by `J0 + 2 Σ J_2k = 1` up to
//! `ASYMPTOTIC_LIMIT`, and the Hankel asymptotic expansion above it.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{domain, Result};

const SERIES_LIMIT: f64 = 12.0;
const ASYMPTOTIC_LIMIT: f64 = 30.0;

/// `J_n(x)` for `n` in `0..=2` and finite `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    if n > 2 {
        return Err(domain(format!("bessel order {n} not supported (0..=2)")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(domain(format!("bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(bessel_j012(x)[n as usize])
}

/// `[J0(x), J1(x), J2(x)]` for finite `x >= 0`; unchecked.
pub(crate) fn bessel_j012(x: f64) -> [f64; 3] {
    if x < SERIES_LIMIT {
        [series(0, x), series(1, x), series(2, x)]
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        let j0 = hankel_asymptotic(0, x);
        let j1 = hankel_asymptotic(1, x);
        // upward recurrence is stable for n < x
        [j0, j1, 2.0 * j1 / x - j0]
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn miller(x: f64) -> [f64; 3] {
    let start = 2 * ((x as usize + 40) / 2);
    let mut next = 0.0; // J_{m+1}
    let mut cur = 1e-30; // J_m
    let mut norm = 0.0;
    let mut out = [0.0; 3];
    let mut m = start;
    loop {
        if m <= 2 {
            out[m] = cur;
        }
        if m.is_multiple_of(2) {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let prev = 2.0 * m as f64 / x * cur - next;
        next = cur;
        cur = prev;
        m -= 1;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            for v in &mut out {
                *v *= 1e-250;
            }
        }
    }
    out.map(|v| v / norm)
}

fn hankel_asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n * n);
    let eight_x = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60u32 {
        let odd = f64::from(2 * k - 1);
        a *= (mu - odd * odd) / (f64::from(k) * eight_x);
        if a.abs() >= last || a == 0.0 {
            break;
        }
        last = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (2.0 * f64::from(n) + 1.0) * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
