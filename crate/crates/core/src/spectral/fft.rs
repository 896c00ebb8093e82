//! Centered three-dimensional DFT.
//!
//! With k_m = (m − n/2)dk and x_j = (j − n/2)dx one has
//! k_m·x_j = 2π(m − n/2)(j − n/2)/n, so the centered transform is the
//! standard one wrapped in (−1)^index phases.

use super::grid::GridSpec;
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

/// Planned centered transforms for one grid size.
pub struct CenteredFft<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> CenteredFft<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft(n, FftDirection::Forward),
            inverse: planner.plan_fft(n, FftDirection::Inverse),
        }
    }

    pub fn for_grid(grid: &GridSpec<T>) -> Self {
        Self::new(grid.n())
    }

    /// In place: out[j] = Σ_m data[m]·e^{sign·i·k_m·x_j} (unnormalized).
    /// `sign > 0` maps momentum samples to positions; `sign < 0` is the
    /// adjoint direction. The roles of m and j are symmetric.
    pub fn transform(&self, data: &mut [Complex<T>], sign: T) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "buffer does not match the grid");
        let plan = if sign > T::zero() { &self.inverse } else { &self.forward };
        checkerboard(data, n);
        // z: contiguous lines
        data.par_chunks_mut(n * n).for_each(|slab| plan.process(slab));
        // y: transpose within each x-slab
        data.par_chunks_mut(n * n).for_each(|slab| {
            let mut buf = transpose(slab, n);
            plan.process(&mut buf);
            let back = transpose(&buf, n);
            slab.copy_from_slice(&back);
        });
        // x: gather lines with stride n²
        let nn = n * n;
        let mut lines = vec![Complex::new(T::zero(), T::zero()); n * nn];
        lines.par_chunks_mut(n * n).enumerate().for_each(|(iy, block)| {
            for iz in 0..n {
                let line = &mut block[iz * n..(iz + 1) * n];
                for (ix, v) in line.iter_mut().enumerate() {
                    *v = data[ix * nn + iy * n + iz];
                }
            }
            plan.process(block);
        });
        data.par_chunks_mut(nn).enumerate().for_each(|(ix, slab)| {
            for iy in 0..n {
                for iz in 0..n {
                    slab[iy * n + iz] = lines[iy * nn + iz * n + ix];
                }
            }
        });
        checkerboard(data, n);
        if (3 * n / 2) % 2 == 1 {
            data.par_iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn checkerboard<T: Real>(data: &mut [Complex<T>], n: usize) {
    data.par_chunks_mut(n).enumerate().for_each(|(row, line)| {
        let (ix, iy) = (row / n, row % n);
        let base = (ix + iy) % 2;
        for (iz, v) in line.iter_mut().enumerate() {
            if (base + iz) % 2 == 1 {
                *v = -*v;
            }
        }
    });
}

fn transpose<T: Real>(a: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = a[r * n + c];
        }
    }
    out
}
