use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cell-centred fields on a uniform periodic grid.
///
/// Cell `(i, j)` has centre `((i + 1/2) dx, (j + 1/2) dy)` and is stored at
/// index `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroState<T> {
    pub nx: usize,
    pub ny: usize,
    pub dx: T,
    pub dy: T,
    pub rho: Vec<T>,
    /// `rho * omega_bar`.
    pub m_omega: Vec<T>,
    /// `rho * Omega`.
    pub m_dir: Vec<[T; 2]>,
}

impl<T: Real> MacroState<T> {
    /// Builds a state on `[0, length)^2` from `f(x, y) = (rho, omega_bar, theta)`
    /// evaluated at the cell centres.
    pub fn from_fn(nx: usize, ny: usize, length: T, mut f: impl FnMut(T, T) -> (T, T, T)) -> Self {
        let dx = length / T::from_usize_lossy(nx);
        let dy = length / T::from_usize_lossy(ny);
        let cells = nx * ny;
        let mut rho = Vec::with_capacity(cells);
        let mut m_omega = Vec::with_capacity(cells);
        let mut m_dir = Vec::with_capacity(cells);
        for j in 0..ny {
            for i in 0..nx {
                let x = (T::from_usize_lossy(i) + T::half()) * dx;
                let y = (T::from_usize_lossy(j) + T::half()) * dy;
                let (r, w, th) = f(x, y);
                rho.push(r);
                m_omega.push(r * w);
                m_dir.push([r * th.cos(), r * th.sin()]);
            }
        }
        Self { nx, ny, dx, dy, rho, m_omega, m_dir }
    }

    pub fn uniform(nx: usize, ny: usize, length: T, rho: T, omega_bar: T, theta: T) -> Self {
        Self::from_fn(nx, ny, length, |_, _| (rho, omega_bar, theta))
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Side of the (square) domain along x.
    pub fn length(&self) -> T {
        self.dx * T::from_usize_lossy(self.nx)
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [T; 2] {
        [
            (T::from_usize_lossy(i) + T::half()) * self.dx,
            (T::from_usize_lossy(j) + T::half()) * self.dy,
        ]
    }

    #[inline]
    pub fn omega_bar(&self, c: usize) -> T {
        self.m_omega[c] / self.rho[c]
    }

    #[inline]
    pub fn direction(&self, c: usize) -> [T; 2] {
        let inv = T::one() / self.rho[c];
        [self.m_dir[c][0] * inv, self.m_dir[c][1] * inv]
    }

    pub fn directions(&self) -> Vec<[T; 2]> {
        (0..self.cells()).map(|c| self.direction(c)).collect()
    }

    pub fn omega_bars(&self) -> Vec<T> {
        (0..self.cells()).map(|c| self.omega_bar(c)).collect()
    }

    fn cell_area(&self) -> T {
        self.dx * self.dy
    }

    /// `sum rho dx dy`.
    pub fn total_mass(&self) -> T {
        self.rho.iter().copied().sum::<T>() * self.cell_area()
    }

    /// `sum rho omega_bar dx dy`.
    pub fn total_angular_momentum(&self) -> T {
        self.m_omega.iter().copied().sum::<T>() * self.cell_area()
    }

    /// Mass-weighted mean of `omega_bar`.
    pub fn mean_omega(&self) -> T {
        self.m_omega.iter().copied().sum::<T>() / self.rho.iter().copied().sum::<T>()
    }

    /// `max | |Omega| - 1 |`.
    pub fn max_unit_defect(&self) -> T {
        self.rho
            .par_iter()
            .zip(self.m_dir.par_iter())
            .map(|(&r, m)| ((m[0] * m[0] + m[1] * m[1]).sqrt() / r - T::one()).abs())
            .reduce(T::zero, T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.rho.iter().all(|v| v.is_finite())
            && self.m_omega.iter().all(|v| v.is_finite())
            && self.m_dir.iter().all(|m| m[0].is_finite() && m[1].is_finite())
    }

    /// Checks shapes, finiteness and positivity.
    pub fn check(&self) -> Result<()> {
        let cells = self.cells();
        if self.rho.len() != cells || self.m_omega.len() != cells || self.m_dir.len() != cells {
            return Err(Error::validation("state", format!("field lengths differ from nx*ny = {cells}")));
        }
        if !self.is_finite() {
            return Err(Error::numerical(f64::NAN, "non-finite macroscopic state"));
        }
        if let Some(c) = self.rho.iter().position(|&r| !(r > T::zero())) {
            return Err(Error::numerical(
                f64::NAN,
                format!("density {} <= 0 in cell ({}, {})", self.rho[c], c % self.nx, c / self.nx),
            ));
        }
        Ok(())
    }

    /// Mirror image under `x -> L - x`, `Omega_1 -> -Omega_1`,
    /// `omega_bar -> -omega_bar`.
    pub fn reflect_x(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.ny {
            for i in 0..self.nx {
                let src = self.idx(i, j);
                let dst = self.idx(self.nx - 1 - i, j);
                out.rho[dst] = self.rho[src];
                out.m_omega[dst] = -self.m_omega[src];
                out.m_dir[dst] = [-self.m_dir[src][0], self.m_dir[src][1]];
            }
        }
        out
    }
}
