//! Roe solver for one direction of the conservative sub-system.
//!
//! Unknowns in the frame of the sweep are `q = (rho, rho w, rho u, rho v)`
//! with `u` the component of the direction field normal to the interface,
//! `v` the tangential one and `w` the mean angular velocity. The flux is
//!
//! ```text
//! F(q) = (c1 rho u, c1 rho w u, c2 rho u^2 + lambda rho, c2 rho u v).
//! ```
//!
//! Its Jacobian is block triangular with eigenvalues `c2 u +- a`,
//! `a^2 = c1 lambda + c2 (c2 - c1) u^2`, together with `c1 u` (carrying `w`)
//! and `c2 u` (carrying `v`). Every flux entry is quadratic in
//! `(sqrt(rho), sqrt(rho) u, sqrt(rho) v, sqrt(rho) w)`, so the Jacobian at
//! square-root-weighted averages satisfies the Roe property exactly.

use crate::scalar::Real;

/// Relative width of the Harten entropy fix.
pub const ENTROPY_FIX: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxConstants<T> {
    pub c1: T,
    pub c2: T,
    pub lambda: T,
}

pub type Cons<T> = [T; 4];
pub type Matrix<T> = [[T; 4]; 4];

#[inline]
fn velocities<T: Real>(q: &Cons<T>) -> (T, T, T) {
    let inv = T::one() / q[0];
    (q[1] * inv, q[2] * inv, q[3] * inv)
}

pub fn physical_flux<T: Real>(k: &FluxConstants<T>, q: &Cons<T>) -> Cons<T> {
    let (_w, u, v) = velocities(q);
    let rho = q[0];
    [
        k.c1 * q[2],
        k.c1 * q[1] * u,
        k.c2 * rho * u * u + k.lambda * rho,
        k.c2 * rho * u * v,
    ]
}

/// Flux Jacobian expressed through the velocities `(w, u, v)`.
pub fn jacobian_at<T: Real>(k: &FluxConstants<T>, w: T, u: T, v: T) -> Matrix<T> {
    let z = T::zero();
    [
        [z, z, k.c1, z],
        [-k.c1 * w * u, k.c1 * u, k.c1 * w, z],
        [k.lambda - k.c2 * u * u, z, T::two() * k.c2 * u, z],
        [-k.c2 * u * v, z, k.c2 * v, k.c2 * u],
    ]
}

pub fn jacobian<T: Real>(k: &FluxConstants<T>, q: &Cons<T>) -> Matrix<T> {
    let (w, u, v) = velocities(q);
    jacobian_at(k, w, u, v)
}

/// Square-root density weighted averages `(w, u, v)`.
pub fn roe_average<T: Real>(ql: &Cons<T>, qr: &Cons<T>) -> (T, T, T) {
    let (zl, zr) = (ql[0].sqrt(), qr[0].sqrt());
    let inv = T::one() / (zl + zr);
    // sqrt(rho) * velocity = momentum / sqrt(rho)
    (
        (ql[1] / zl + qr[1] / zr) * inv,
        (ql[2] / zl + qr[2] / zr) * inv,
        (ql[3] / zl + qr[3] / zr) * inv,
    )
}

/// The Roe matrix `A(ql, qr)`.
pub fn roe_matrix<T: Real>(k: &FluxConstants<T>, ql: &Cons<T>, qr: &Cons<T>) -> Matrix<T> {
    let (w, u, v) = roe_average(ql, qr);
    jacobian_at(k, w, u, v)
}

/// `a^2`; negative when the system is not hyperbolic at `u`.
#[inline]
pub fn acoustic_sq<T: Real>(k: &FluxConstants<T>, u: T) -> T {
    k.c1 * k.lambda + k.c2 * (k.c2 - k.c1) * u * u
}

/// Largest characteristic speed at normal velocity `u`.
#[inline]
pub fn max_speed<T: Real>(k: &FluxConstants<T>, u: T) -> T {
    let a = acoustic_sq(k, u).abs().sqrt();
    (k.c2 * u).abs().max((k.c1 * u).abs()) + a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux<T> {
    pub flux: Cons<T>,
    pub max_speed: T,
    /// The acoustic pair was (nearly) degenerate and the Rusanov flux was
    /// used instead of the Roe flux.
    pub fallback: bool,
}

#[inline]
fn harten<T: Real>(lam: T, delta: T) -> T {
    let a = lam.abs();
    if a < delta {
        (lam * lam + delta * delta) / (T::two() * delta)
    } else {
        a
    }
}

/// Numerical flux between left state `ql` and right state `qr`.
///
/// Roe flux with a Harten entropy fix of width `ENTROPY_FIX` times the
/// largest wave speed. Where `a` is below that width the Roe matrix has no
/// complete eigenbasis (for `c2 = lambda = 0` it is nilpotent in the
/// `(rho, rho u)` block); those interfaces use the local Lax-Friedrichs flux.
pub fn roe_flux<T: Real>(k: &FluxConstants<T>, ql: &Cons<T>, qr: &Cons<T>) -> InterfaceFlux<T> {
    let fl = physical_flux(k, ql);
    let fr = physical_flux(k, qr);
    let (w, u, v) = roe_average(ql, qr);
    let a2 = acoustic_sq(k, u);
    let a = a2.max(T::zero()).sqrt();
    let (mu_p, mu_m, mu_w, mu_v) = (k.c2 * u + a, k.c2 * u - a, k.c1 * u, k.c2 * u);
    let smax = mu_p.abs().max(mu_m.abs()).max(mu_w.abs()).max(mu_v.abs());
    let delta = T::lit(ENTROPY_FIX) * smax;
    let d: Cons<T> = [qr[0] - ql[0], qr[1] - ql[1], qr[2] - ql[2], qr[3] - ql[3]];

    if a2 <= delta * delta || a <= T::zero() {
        let (_, ul, _) = velocities(ql);
        let (_, ur, _) = velocities(qr);
        let s = max_speed(k, ul).max(max_speed(k, ur)).max(smax);
        let mut flux = [T::zero(); 4];
        for c in 0..4 {
            flux[c] = T::half() * (fl[c] + fr[c]) - T::half() * s * d[c];
        }
        return InterfaceFlux { flux, max_speed: s, fallback: true };
    }

    // Right eigenvectors r+- = (c1, c1 w, mu, c2 v (c1 u - mu) / (c2 u - mu)),
    // e2 for c1 u and e4 for c2 u.
    let r4 = |mu: T| k.c2 * v * (k.c1 * u - mu) / (k.c2 * u - mu);
    let (r4p, r4m) = (r4(mu_p), r4(mu_m));
    let alpha_p = (d[2] - mu_m * d[0] / k.c1) / (T::two() * a);
    let alpha_m = d[0] / k.c1 - alpha_p;
    let alpha_w = d[1] - w * d[0];
    let alpha_v = d[3] - alpha_p * r4p - alpha_m * r4m;

    let (lp, lm, lw, lv) = if delta > T::zero() {
        (harten(mu_p, delta), harten(mu_m, delta), harten(mu_w, delta), harten(mu_v, delta))
    } else {
        (mu_p.abs(), mu_m.abs(), mu_w.abs(), mu_v.abs())
    };
    let (sp, sm) = (lp * alpha_p, lm * alpha_m);
    let diss = [
        k.c1 * (sp + sm),
        k.c1 * w * (sp + sm) + lw * alpha_w,
        mu_p * sp + mu_m * sm,
        r4p * sp + r4m * sm + lv * alpha_v,
    ];
    let mut flux = [T::zero(); 4];
    for c in 0..4 {
        flux[c] = T::half() * (fl[c] + fr[c]) - T::half() * diss[c];
    }
    InterfaceFlux { flux, max_speed: smax, fallback: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k8() -> FluxConstants<f64> {
        // c1, c2 at kappa = 8 and lambda = 1/8.
        FluxConstants { c1: 0.935_235_493_529_438_2, c2: 0.810_240_609_415_439_4, lambda: 0.125 }
    }

    fn state(rho: f64, w: f64, u: f64, v: f64) -> Cons<f64> {
        [rho, rho * w, rho * u, rho * v]
    }

    fn matvec(m: &Matrix<f64>, x: &Cons<f64>) -> Cons<f64> {
        let mut y = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                y[i] += m[i][j] * x[j];
            }
        }
        y
    }

    #[test]
    fn roe_property() {
        let k = k8();
        let ql = state(1.3, 0.4, 0.6, -0.8);
        let qr = state(0.7, -1.1, -0.28, 0.96);
        let a = roe_matrix(&k, &ql, &qr);
        let d = [qr[0] - ql[0], qr[1] - ql[1], qr[2] - ql[2], qr[3] - ql[3]];
        let jump = matvec(&a, &d);
        let (fl, fr) = (physical_flux(&k, &ql), physical_flux(&k, &qr));
        for c in 0..4 {
            assert!((jump[c] - (fr[c] - fl[c])).abs() < 1e-14, "component {c}");
        }
    }

    #[test]
    fn consistent_flux() {
        let k = k8();
        let q = state(1.7, 0.3, 0.28, 0.96);
        let f = roe_flux(&k, &q, &q);
        assert!(!f.fallback);
        let exact = physical_flux(&k, &q);
        for c in 0..4 {
            assert!((f.flux[c] - exact[c]).abs() < 1e-15);
        }
    }

    #[test]
    fn eigen_decomposition_reproduces_jump() {
        // With |lambda| replaced by lambda the dissipation term equals A dq,
        // so the flux collapses to the upwind-free average plus A dq / 2.
        let k = k8();
        let ql = state(1.0, 0.2, 1.0, 0.0);
        let qr = state(1.2, -0.3, 0.6, 0.8);
        let f = roe_flux(&k, &ql, &qr);
        assert!(!f.fallback);
        // All speeds are positive here: the Roe flux is the left flux.
        let (w, u, _v) = roe_average(&ql, &qr);
        let a = acoustic_sq(&k, u).sqrt();
        assert!(k.c2 * u - a > 0.0 && k.c1 * u > 0.0 && w.is_finite());
        let delta = ENTROPY_FIX * (k.c2 * u + a);
        if k.c2 * u - a > delta {
            let fl = physical_flux(&k, &ql);
            for c in 0..4 {
                assert!((f.flux[c] - fl[c]).abs() < 1e-13, "component {c}: {} vs {}", f.flux[c], fl[c]);
            }
        }
    }

    #[test]
    fn degenerate_pair_uses_rusanov() {
        let k = FluxConstants { c1: 0.9, c2: 0.0, lambda: 0.0 };
        let ql = state(1.0, 0.0, 1.0, 0.0);
        let qr = state(2.0, 0.0, 1.0, 0.0);
        let f = roe_flux(&k, &ql, &qr);
        assert!(f.fallback);
        // Upwind mass flux c1 rho_L for unit direction.
        assert!((f.flux[0] - 0.9).abs() < 1e-15, "{:?}", f);
    }
}
