//! Kernel-weighted neighbourhood averages via a periodic cell list.

use rayon::prelude::*;

use super::ensemble::ParticleEnsemble;
use super::params::KernelSpec;
use crate::scalar::Real;

/// Per-particle neighbourhood sums.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMeans<T> {
    /// `J_i = (1/N) sum_j K(|x_i - x_j|) tau(theta_j)`.
    pub j: Vec<[T; 2]>,
    /// `sum_j K omega_j / sum_j K`.
    pub omega_bar: Vec<T>,
    /// `sum_j K`; never zero since `j = i` contributes `K(0)`.
    pub weight: Vec<T>,
}

/// Minimum-image displacement along one axis.
#[inline]
pub fn min_image<T: Real>(mut d: T, length: T) -> T {
    let half = length * T::half();
    if d > half {
        d -= length;
    } else if d < -half {
        d += length;
    }
    d
}

/// Square grid of cells at least `radius` wide, particles bucketed by cell.
#[derive(Debug, Clone)]
pub struct CellList {
    ncell: usize,
    /// `start[c]..start[c + 1]` indexes `order` for cell `c`.
    start: Vec<usize>,
    order: Vec<usize>,
    cell_of: Vec<usize>,
}

impl CellList {
    /// `None` when fewer than three cells fit per side; neighbour cells would
    /// then alias across the periodic boundary. Sparse systems get wider
    /// cells, at most about four per particle.
    pub fn build<T: Real>(pos: &[[T; 2]], length: T, radius: T) -> Option<Self> {
        let fit = (length / radius).floor().to_usize()?;
        let cap = 2 * (pos.len() as f64).sqrt().ceil() as usize;
        let ncell = fit.min(cap.max(3));
        if ncell < 3 {
            return None;
        }
        let scale = T::from_usize_lossy(ncell) / length;
        let cell_index = |x: T| (x * scale).to_usize().unwrap_or(0).min(ncell - 1);
        let cell_of: Vec<usize> = pos.iter().map(|p| cell_index(p[1]) * ncell + cell_index(p[0])).collect();
        let mut start = vec![0usize; ncell * ncell + 1];
        for &c in &cell_of {
            start[c + 1] += 1;
        }
        for c in 0..ncell * ncell {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0usize; pos.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            order[fill[c]] = i;
            fill[c] += 1;
        }
        Some(Self {
            ncell,
            start,
            order,
            cell_of,
        })
    }

    pub fn cells_per_side(&self) -> usize {
        self.ncell
    }

    /// The 3x3 block of cells around the cell of particle `i`, row-major.
    pub fn neighbour_cells(&self, i: usize) -> [usize; 9] {
        let n = self.ncell;
        let c = self.cell_of[i];
        let (cy, cx) = (c / n, c % n);
        let mut out = [0; 9];
        let mut k = 0;
        for dy in [n - 1, 0, 1] {
            for dx in [n - 1, 0, 1] {
                out[k] = ((cy + dy) % n) * n + (cx + dx) % n;
                k += 1;
            }
        }
        out
    }

    /// As [`Self::neighbour_cells`], paired with the offset that maps
    /// positions in each cell to their periodic image next to particle `i`.
    /// Inside the block that image is the minimum image for every pair
    /// closer than one cell width.
    pub fn shifted_neighbour_cells<T: Real>(&self, i: usize, length: T) -> [(usize, [T; 2]); 9] {
        let n = self.ncell;
        let c = self.cell_of[i];
        let (cy, cx) = (c / n, c % n);
        let shift = |k: usize, d: usize| {
            if d == n - 1 && k == 0 {
                -length
            } else if d == 1 && k == n - 1 {
                length
            } else {
                T::zero()
            }
        };
        let mut out = [(0, [T::zero(); 2]); 9];
        let mut k = 0;
        for dy in [n - 1, 0, 1] {
            for dx in [n - 1, 0, 1] {
                out[k] = (((cy + dy) % n) * n + (cx + dx) % n, [shift(cx, dx), shift(cy, dy)]);
                k += 1;
            }
        }
        out
    }

    pub fn members(&self, cell: usize) -> &[usize] {
        &self.order[self.start[cell]..self.start[cell + 1]]
    }
}

/// Neighbourhood averages for every particle, self term included.
///
/// Uses a cell list when at least three cells fit per side and falls back to
/// the all-pairs sum otherwise. The sum order for each particle is fixed, so
/// the result does not depend on the number of worker threads.
pub fn local_means<T: Real>(ens: &ParticleEnsemble<T>, kernel: &KernelSpec<T>) -> LocalMeans<T> {
    let n = ens.len();
    // Particle data permuted into cell order for locality.
    let cells = CellList::build(&ens.pos, ens.length, kernel.radius);
    let perm: Vec<usize> = match &cells {
        Some(c) => c.order.clone(),
        None => (0..n).collect(),
    };
    let packed: Vec<Packed<T>> = perm
        .iter()
        .map(|&j| {
            let (s, c) = ens.theta[j].sin_cos();
            Packed {
                x: ens.pos[j][0],
                y: ens.pos[j][1],
                cos: c,
                sin: s,
                omega: ens.omega[j],
            }
        })
        .collect();
    // Sums use K / K(0); the peak is restored once per particle.
    let peak = kernel.peak();
    let scale = peak / T::from_usize_lossy(n);
    let length = ens.length;

    let accumulate = |xi: [T; 2], shift: [T; 2], range: &[Packed<T>], acc: &mut Acc<T>| {
        for p in range {
            let dx = (p.x - xi[0]) + shift[0];
            let dy = (p.y - xi[1]) + shift[1];
            let w = kernel.profile(dx * dx + dy * dy);
            acc.jx += w * p.cos;
            acc.jy += w * p.sin;
            acc.omega += w * p.omega;
            acc.weight += w;
        }
    };

    let sums: Vec<Acc<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = ens.pos[i];
            let mut acc = Acc::default();
            match &cells {
                Some(c) => {
                    for (cell, shift) in c.shifted_neighbour_cells(i, length) {
                        accumulate(xi, shift, &packed[c.start[cell]..c.start[cell + 1]], &mut acc);
                    }
                }
                None => {
                    for p in &packed {
                        let dx = min_image(p.x - xi[0], length);
                        let dy = min_image(p.y - xi[1], length);
                        let w = kernel.profile(dx * dx + dy * dy);
                        acc.jx += w * p.cos;
                        acc.jy += w * p.sin;
                        acc.omega += w * p.omega;
                        acc.weight += w;
                    }
                }
            }
            acc
        })
        .collect();

    let mut out = LocalMeans {
        j: Vec::with_capacity(n),
        omega_bar: Vec::with_capacity(n),
        weight: Vec::with_capacity(n),
    };
    for a in sums {
        out.j.push([a.jx * scale, a.jy * scale]);
        out.omega_bar.push(a.omega / a.weight);
        out.weight.push(a.weight * peak);
    }
    out
}

#[derive(Clone, Copy)]
struct Packed<T> {
    x: T,
    y: T,
    cos: T,
    sin: T,
    omega: T,
}

#[derive(Clone, Copy, Default)]
struct Acc<T> {
    jx: T,
    jy: T,
    omega: T,
    weight: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(pos: Vec<[f64; 2]>, theta: Vec<f64>, omega: Vec<f64>, l: f64) -> ParticleEnsemble<f64> {
        ParticleEnsemble::new(l, pos, theta, omega).unwrap()
    }

    #[test]
    fn isolated_pair_sees_only_itself() {
        let e = ens(vec![[1.0, 1.0], [5.0, 5.0]], vec![0.3, -2.0], vec![1.5, -0.5], 10.0);
        let k = KernelSpec::indicator(1.0);
        let m = local_means(&e, &k);
        for i in 0..2 {
            let expect = [k.peak() * e.theta[i].cos() / 2.0, k.peak() * e.theta[i].sin() / 2.0];
            assert!((m.j[i][0] - expect[0]).abs() < 1e-16);
            assert!((m.j[i][1] - expect[1]).abs() < 1e-16);
            assert_eq!(m.omega_bar[i], e.omega[i]);
            assert_eq!(m.weight[i], k.peak());
        }
    }

    #[test]
    fn neighbours_across_the_periodic_edge() {
        let e = ens(vec![[0.1, 5.0], [9.9, 5.0]], vec![0.0, 0.0], vec![1.0, 3.0], 10.0);
        let m = local_means(&e, &KernelSpec::indicator(1.0));
        assert_eq!(m.omega_bar, vec![2.0, 2.0]);
    }

    #[test]
    fn coincident_aligned_gives_unit_direction() {
        let th = 2.2_f64;
        let e = ens(vec![[3.0, 3.0]; 50], vec![th; 50], vec![0.0; 50], 10.0);
        let m = local_means(&e, &KernelSpec::indicator(1.0));
        for j in &m.j {
            let norm = j[0].hypot(j[1]);
            assert!((j[0] / norm - th.cos()).abs() < 1e-15);
            assert!((j[1] / norm - th.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn small_box_uses_all_pairs() {
        assert!(CellList::build(&[[0.5_f64, 0.5]], 1.0, 0.4).is_none());
        let c = CellList::build(&[[0.5_f64, 0.5], [2.9, 0.1]], 3.0, 1.0).unwrap();
        assert_eq!(c.cells_per_side(), 3);
        assert_eq!(c.members(0), &[0]);
        assert_eq!(c.members(2), &[1]);
    }
}
