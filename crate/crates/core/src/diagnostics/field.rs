//! Coarse-grained fields on a square grid of bins.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::scalar::Real;

/// Binned mass, direction and angular velocity at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSample<T> {
    pub t: T,
    pub bins: usize,
    pub length: T,
    /// Per-bin mass (particle count, or `rho` times cell area).
    pub mass: Vec<T>,
    /// Per-bin mass-weighted sum of unit headings.
    pub dir_sum: Vec<[T; 2]>,
    /// Per-bin mass-weighted sum of angular velocities.
    pub omega_sum: Vec<T>,
    /// Masses are particle counts, so Poisson noise is subtracted from the
    /// density variance.
    pub counts: bool,
}

impl<T: Real> FieldSample<T> {
    pub fn empty(t: T, bins: usize, length: T, counts: bool) -> Self {
        let n = bins * bins;
        Self {
            t,
            bins,
            length,
            mass: vec![T::zero(); n],
            dir_sum: vec![[T::zero(); 2]; n],
            omega_sum: vec![T::zero(); n],
            counts,
        }
    }

    /// Bins particles; positions must lie in `[0, length)`.
    pub fn from_particles(t: T, bins: usize, length: T, pos: &[[T; 2]], theta: &[T], omega: &[T]) -> Self {
        let mut f = Self::empty(t, bins, length, true);
        let scale = T::from_usize_lossy(bins) / length;
        let idx = |x: T| (x * scale).to_usize().unwrap_or(0).min(bins - 1);
        for ((p, &th), &w) in pos.iter().zip(theta).zip(omega) {
            let b = idx(p[1]) * bins + idx(p[0]);
            f.mass[b] += T::one();
            f.dir_sum[b][0] += th.cos();
            f.dir_sum[b][1] += th.sin();
            f.omega_sum[b] += w;
        }
        f
    }

    /// Grid field with `bins x bins` cells: density, unit direction and
    /// angular velocity per cell.
    pub fn from_grid(t: T, bins: usize, length: T, rho: &[T], dir: &[[T; 2]], omega: &[T]) -> Self {
        let mut f = Self::empty(t, bins, length, false);
        let area = (length / T::from_usize_lossy(bins)).powi(2);
        for b in 0..bins * bins {
            let m = rho[b] * area;
            let n = dir[b][0].hypot(dir[b][1]);
            let u = if n > T::zero() { [dir[b][0] / n, dir[b][1] / n] } else { [T::zero(); 2] };
            f.mass[b] = m;
            f.dir_sum[b] = [m * u[0], m * u[1]];
            f.omega_sum[b] = m * omega[b];
        }
        f
    }

    /// `var(m) / mean(m)^2`, minus the Poisson contribution `1 / mean(m)`
    /// for particle counts, floored at zero. A uniform random scatter scores
    /// about zero at any density.
    pub fn density_variance(&self) -> T {
        let n = T::from_usize_lossy(self.mass.len());
        let mean = self.mass.iter().copied().sum::<T>() / n;
        if mean <= T::zero() {
            return T::zero();
        }
        let var = self.mass.iter().map(|&m| (m - mean) * (m - mean)).sum::<T>() / n;
        let v = var / (mean * mean);
        if self.counts {
            (v - T::one() / mean).max(T::zero())
        } else {
            v
        }
    }

    /// Fraction of the spectral energy of the binned mean-direction field
    /// `e^{i theta(x)}` carried by the strongest nonzero wavevector. Empty
    /// bins contribute zero.
    pub fn wave_fraction(&self) -> T {
        let b = self.bins;
        let mut data: Vec<Complex<f64>> = self
            .mass
            .iter()
            .zip(&self.dir_sum)
            .map(|(&m, d)| {
                if m > T::zero() {
                    let n = d[0].hypot(d[1]);
                    if n > T::zero() {
                        return Complex::new((d[0] / n).as_f64(), (d[1] / n).as_f64());
                    }
                }
                Complex::new(0.0, 0.0)
            })
            .collect();
        fft2(&mut data, b);
        let energy: Vec<f64> = data.iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = energy.iter().sum();
        if total <= 0.0 {
            return T::zero();
        }
        let best = energy[1..].iter().copied().fold(0.0, f64::max);
        T::lit(best / total)
    }

    /// Polar order of the whole sample.
    pub fn polar_order(&self) -> T {
        let m: T = self.mass.iter().copied().sum();
        if m <= T::zero() {
            return T::zero();
        }
        let sx: T = self.dir_sum.iter().map(|d| d[0]).sum();
        let sy: T = self.dir_sum.iter().map(|d| d[1]).sum();
        (sx.hypot(sy) / m).min(T::one())
    }

    /// Mass-weighted mean of `|local mean omega|` over occupied bins.
    pub fn local_rotation(&self) -> T {
        let m: T = self.mass.iter().copied().sum();
        if m <= T::zero() {
            return T::zero();
        }
        self.mass
            .iter()
            .zip(&self.omega_sum)
            .filter(|(&mb, _)| mb > T::zero())
            .map(|(&mb, &ws)| (ws / mb).abs() * mb)
            .sum::<T>()
            / m
    }
}

/// In-place 2-D DFT of a row-major `n x n` array.
fn fft2(data: &mut [Complex<f64>], n: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        fft.process(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plane_wave_concentrates_in_one_mode() {
        let bins = 16;
        let l = 16.0_f64;
        let mut pos = Vec::new();
        let mut theta = Vec::new();
        for j in 0..bins {
            for i in 0..bins {
                pos.push([i as f64 + 0.5, j as f64 + 0.5]);
                theta.push(2.0 * std::f64::consts::PI * 3.0 * (i as f64) / bins as f64);
            }
        }
        let omega = vec![0.0; pos.len()];
        let f = FieldSample::from_particles(0.0, bins, l, &pos, &theta, &omega);
        assert!((f.wave_fraction() - 1.0).abs() < 1e-12);
        assert!(f.polar_order() < 1e-12);
        assert_eq!(f.density_variance(), 0.0);
    }

    #[test]
    fn uniform_direction_has_no_wave() {
        let f = FieldSample::from_particles(0.0, 8, 8.0, &[[0.5, 0.5], [3.5, 6.5]], &[1.0, 1.0], &[0.0, 0.0]);
        assert!(f.wave_fraction() < 0.5);
    }

    #[test]
    fn poisson_scatter_has_small_density_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let l = 64.0;
        let pos: Vec<[f64; 2]> = (0..15_000).map(|_| [rng.random::<f64>() * l, rng.random::<f64>() * l]).collect();
        let zeros = vec![0.0; pos.len()];
        let f = FieldSample::from_particles(0.0, 32, l, &pos, &zeros, &zeros);
        assert!(f.density_variance() < 0.02, "{}", f.density_variance());
    }

    #[test]
    fn translation_by_whole_bins_preserves_density_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = 64.0;
        let pos: Vec<[f64; 2]> = (0..3000)
            .map(|_| [(rng.random::<f64>() * 20.0 + 3.0), rng.random::<f64>() * l])
            .collect();
        let zeros = vec![0.0; pos.len()];
        let base = FieldSample::from_particles(0.0, 32, l, &pos, &zeros, &zeros).density_variance();
        for shift in [2.0, 10.0, 50.0] {
            let moved: Vec<[f64; 2]> = pos.iter().map(|p| [(p[0] + shift).wrap_periodic(l), (p[1] + 2.0 * shift).wrap_periodic(l)]).collect();
            let v = FieldSample::from_particles(0.0, 32, l, &moved, &zeros, &zeros).density_variance();
            assert!((v - base).abs() < 1e-12, "{shift}: {v} vs {base}");
        }
        assert!(base > 0.3);
    }
}
