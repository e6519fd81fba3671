//! The three stages of one macroscopic time step.

use rayon::prelude::*;

use super::params::MacroParams;
use super::roe::{max_speed, roe_flux, Cons, FluxConstants};
use super::state::MacroState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest `|rho Omega|` that still defines a direction.
pub const MIN_DIRECTION_NORM: f64 = 1e-14;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepStats {
    /// Interfaces that used the Rusanov fallback.
    pub fallbacks: usize,
}

/// `dt * max characteristic speed / min(dx, dy)` for the current state.
pub fn cfl_number<T: Real>(s: &MacroState<T>, p: &MacroParams<T>) -> T {
    let k = p.flux_constants();
    let smax = (0..s.cells())
        .into_par_iter()
        .map(|c| {
            let [u, v] = s.direction(c);
            max_speed(&k, u).max(max_speed(&k, v))
        })
        .reduce(T::zero, T::max);
    p.dt * smax / s.dx.min(s.dy)
}

fn sweep_line<T: Real>(k: &FluxConstants<T>, line: &mut [Cons<T>], ratio: T, flux: &mut Vec<Cons<T>>) -> usize {
    let n = line.len();
    flux.clear();
    let mut fallbacks = 0;
    for i in 0..n {
        let f = roe_flux(k, &line[i], &line[(i + 1) % n]);
        fallbacks += f.fallback as usize;
        flux.push(f.flux);
    }
    for i in 0..n {
        let left = &flux[(i + n - 1) % n];
        let right = &flux[i];
        for c in 0..4 {
            line[i][c] -= ratio * (right[c] - left[c]);
        }
    }
    fallbacks
}

fn sweep_all<T: Real>(k: &FluxConstants<T>, buf: &mut [Cons<T>], line_len: usize, ratio: T) -> usize {
    buf.par_chunks_mut(line_len)
        .map_init(Vec::new, |flux, line| sweep_line(k, line, ratio, flux))
        .sum()
}

/// Advances the conservative sub-system by `p.dt` with the splitting
/// x(dt/2), y(dt), x(dt/2). Fails when the CFL bound is exceeded or a
/// density becomes non-positive.
pub fn conservative_step<T: Real>(s: &mut MacroState<T>, p: &MacroParams<T>) -> Result<SweepStats> {
    let cfl = cfl_number(s, p);
    if !(cfl <= p.cfl_max) {
        return Err(Error::numerical(
            f64::NAN,
            format!("CFL number {cfl} exceeds cfl_max = {}", p.cfl_max),
        ));
    }
    let k = p.flux_constants();
    let (nx, ny) = (s.nx, s.ny);
    let half_x = T::half() * p.dt / s.dx;
    let full_y = p.dt / s.dy;

    // Rows: index j * nx + i, momentum normal to x first.
    let mut rows: Vec<Cons<T>> = (0..s.cells())
        .map(|c| [s.rho[c], s.m_omega[c], s.m_dir[c][0], s.m_dir[c][1]])
        .collect();
    let mut fallbacks = sweep_all(&k, &mut rows, nx, half_x);

    // Columns: index i * ny + j, momentum normal to y first.
    let mut cols: Vec<Cons<T>> = vec![[T::zero(); 4]; s.cells()];
    cols.par_chunks_mut(ny).enumerate().for_each(|(i, col)| {
        for (j, q) in col.iter_mut().enumerate() {
            let r = rows[j * nx + i];
            *q = [r[0], r[1], r[3], r[2]];
        }
    });
    fallbacks += sweep_all(&k, &mut cols, ny, full_y);
    rows.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        for (i, q) in row.iter_mut().enumerate() {
            let r = cols[i * ny + j];
            *q = [r[0], r[1], r[3], r[2]];
        }
    });
    fallbacks += sweep_all(&k, &mut rows, nx, half_x);

    for (c, q) in rows.iter().enumerate() {
        s.rho[c] = q[0];
        s.m_omega[c] = q[1];
        s.m_dir[c] = [q[2], q[3]];
    }
    s.check()?;
    Ok(SweepStats { fallbacks })
}

/// Projects `rho Omega` back onto `|Omega| = 1`; `rho` and `rho omega_bar`
/// are left untouched.
pub fn relaxation_step<T: Real>(s: &mut MacroState<T>) -> Result<()> {
    let tiny = T::lit(MIN_DIRECTION_NORM);
    let bad = s
        .m_dir
        .par_iter_mut()
        .zip(s.rho.par_iter())
        .enumerate()
        .filter_map(|(c, (m, &r))| {
            let norm = (m[0] * m[0] + m[1] * m[1]).sqrt();
            if !(norm >= tiny) {
                return Some(c);
            }
            let f = r / norm;
            *m = [m[0] * f, m[1] * f];
            None
        })
        .min();
    match bad {
        Some(c) => Err(Error::numerical(
            f64::NAN,
            format!("direction undefined in cell ({}, {})", c % s.nx, c / s.nx),
        )),
        None => Ok(()),
    }
}

/// Rotates `Omega` by `omega_bar * dt` in every cell.
pub fn source_step<T: Real>(s: &mut MacroState<T>, dt: T) {
    s.m_dir
        .par_iter_mut()
        .zip(s.rho.par_iter().zip(s.m_omega.par_iter()))
        .for_each(|(m, (&r, &mw))| {
            let (sin, cos) = (mw / r * dt).sin_cos();
            *m = [cos * m[0] - sin * m[1], sin * m[0] + cos * m[1]];
        });
}

/// One full step: conservative, relaxation, source.
pub fn full_step<T: Real>(s: &mut MacroState<T>, p: &MacroParams<T>) -> Result<SweepStats> {
    let stats = conservative_step(s, p)?;
    relaxation_step(s)?;
    source_step(s, p.dt);
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> MacroParams<f64> {
        let mut p = MacroParams::new(8.0).unwrap();
        p.nx = n;
        p.ny = n;
        p
    }

    #[test]
    fn constant_state_is_fixed_by_transport() {
        let p = params(16);
        let mut s = MacroState::<f64>::uniform(16, 16, 1.0, 1.3, 0.7, 0.4);
        let before = s.clone();
        conservative_step(&mut s, &p).unwrap();
        for c in 0..s.cells() {
            assert!((s.rho[c] - before.rho[c]).abs() < 1e-14);
            assert!((s.m_omega[c] - before.m_omega[c]).abs() < 1e-14);
            assert!((s.m_dir[c][0] - before.m_dir[c][0]).abs() < 1e-14);
            assert!((s.m_dir[c][1] - before.m_dir[c][1]).abs() < 1e-14);
        }
    }

    #[test]
    fn normalizes_three_four_five() {
        let mut s = MacroState::<f64>::uniform(3, 3, 1.0, 2.0, 0.1, 0.0);
        for m in &mut s.m_dir {
            *m = [2.0 * 3.0, 2.0 * 4.0];
        }
        let (rho, mw) = (s.rho.clone(), s.m_omega.clone());
        relaxation_step(&mut s).unwrap();
        assert_eq!(s.rho, rho);
        assert_eq!(s.m_omega, mw);
        for m in &s.m_dir {
            assert!((m[0] - 1.2).abs() < 1e-15 && (m[1] - 1.6).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_direction_aborts() {
        let mut s = MacroState::<f64>::uniform(3, 3, 1.0, 1.0, 0.0, 0.0);
        s.m_dir[5] = [0.0, 0.0];
        let e = relaxation_step(&mut s).unwrap_err();
        assert!(e.to_string().contains("(2, 1)"), "{e}");
    }

    #[test]
    fn rotation_returns_after_one_period() {
        let w = 0.5;
        let dt = 1e-3;
        let mut s = MacroState::<f64>::from_fn(4, 4, 1.0, |x, y| (1.0 + x, w, 3.0 * y));
        let start = s.clone();
        let steps = (std::f64::consts::TAU / w / dt).round() as usize;
        let dt = std::f64::consts::TAU / w / steps as f64;
        for _ in 0..steps {
            source_step(&mut s, dt);
        }
        for c in 0..s.cells() {
            for d in 0..2 {
                assert!((s.m_dir[c][d] - start.m_dir[c][d]).abs() < 1e-10);
            }
        }
        assert!(s.max_unit_defect() < 1e-12);
    }

    #[test]
    fn cfl_breach_aborts() {
        let mut p = params(8);
        p.dt = 1.0;
        let mut s = MacroState::<f64>::uniform(8, 8, 1.0, 1.0, 0.0, 0.0);
        assert!(conservative_step(&mut s, &p).unwrap_err().to_string().contains("CFL"));
    }
}
