//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use vk_core::ParticleEnsemble;

/// Periodic trapezoid rule on `[-pi, pi)` with `n` panels.
pub fn periodic_trapezoid(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(-PI + k as f64 * h)).sum::<f64>() * h
}

/// Mean of `cos(theta)` under the von Mises density, both integrals by
/// brute force.
pub fn c1_oracle(kappa: f64) -> f64 {
    let n = 1_000_000;
    let z = periodic_trapezoid(n, |t| (kappa * t.cos()).exp());
    periodic_trapezoid(n, |t| t.cos() * (kappa * t.cos()).exp()) / z
}

/// Composite Simpson on `[0, pi]` with `n` (even) panels for the outer
/// integrals; the inner integral of `g` is accumulated by Simpson on a grid
/// twice as fine so that it is available at every outer node.
pub fn k_oracle(kappa: f64, n: usize) -> (f64, f64) {
    assert!(n % 2 == 0);
    let h = PI / n as f64;
    let hf = h / 2.0;
    let e = |phi: f64| (-kappa * phi.cos()).exp();
    let mut inner = vec![0.0; n + 1];
    for m in 1..=n {
        let a = (m - 1) as f64 * h;
        inner[m] = inner[m - 1] + hf / 3.0 * (e(a) + 4.0 * e(a + hf) + e(a + h));
    }
    let total = inner[n];
    let g = |m: usize| {
        let gamma = m as f64 * h;
        gamma / kappa - PI / kappa * inner[m] / total
    };
    let z = periodic_trapezoid(200_000, |t| (kappa * t.cos()).exp());
    let (mut s1, mut s2) = (0.0, 0.0);
    for m in 0..=n {
        let t = m as f64 * h;
        let w = if m == 0 || m == n {
            1.0
        } else if m % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let base = w * g(m) * (kappa * t.cos()).exp() / z;
        s1 += base * t.sin();
        s2 += base * t.sin() * t.cos();
    }
    // Both integrands are even in theta, so the full-circle value is twice
    // the half-circle one.
    (2.0 * s1 * h / 3.0, 2.0 * s2 * h / 3.0)
}

/// O(N^2) neighbourhood sums with the minimum-image convention.
pub fn brute_force(ens: &ParticleEnsemble, radius: f64) -> (Vec<[f64; 2]>, Vec<f64>) {
    let l = ens.length;
    let n = ens.len();
    let peak = 1.0 / (PI * radius * radius);
    let wrap = |d: f64| {
        if d > l / 2.0 {
            d - l
        } else if d < -l / 2.0 {
            d + l
        } else {
            d
        }
    };
    let mut j = vec![[0.0; 2]; n];
    let mut wbar = vec![0.0; n];
    for a in 0..n {
        let (mut w, mut ws) = (0.0, 0.0);
        for b in 0..n {
            let dx = wrap(ens.pos[b][0] - ens.pos[a][0]);
            let dy = wrap(ens.pos[b][1] - ens.pos[a][1]);
            if dx * dx + dy * dy <= radius * radius {
                j[a][0] += peak * ens.theta[b].cos() / n as f64;
                j[a][1] += peak * ens.theta[b].sin() / n as f64;
                w += peak;
                ws += peak * ens.omega[b];
            }
        }
        wbar[a] = ws / w;
    }
    (j, wbar)
}
