//! Uniform quadrature grids over one or two complex planes.

use crate::error::{Error, Result};
use crate::C64;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axes {
    /// One complex plane, axes `(re, im)`.
    Two,
    /// Two complex planes, axes `(first.re, first.im, second.re, second.im)`.
    Four,
}

impl Axes {
    pub fn count(self) -> usize {
        match self {
            Axes::Two => 2,
            Axes::Four => 4,
        }
    }
}

/// Symmetric box `[-L, L]` per axis with `G` nodes per axis, `G` odd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGrid {
    axes: Axes,
    points: usize,
    extent: f64,
}

impl ComplexGrid {
    pub fn new(axes: Axes, points: usize, extent: f64) -> Result<Self> {
        if points < 5 || points % 2 == 0 {
            return Err(Error::invalid("grid points per axis must be odd and at least 5"));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::invalid("grid extent must be positive and finite"));
        }
        Ok(ComplexGrid { axes, points, extent })
    }

    pub fn plane(points: usize, extent: f64) -> Result<Self> {
        Self::new(Axes::Two, points, extent)
    }

    pub fn planes(points: usize, extent: f64) -> Result<Self> {
        Self::new(Axes::Four, points, extent)
    }

    pub fn axes(&self) -> Axes {
        self.axes
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.points - 1) as f64
    }

    /// Coordinate of node `i`; nodes are exactly symmetric about zero.
    pub fn node(&self, i: usize) -> f64 {
        let c = (self.points / 2) as f64;
        (i as f64 - c) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Total node count, `G^axes`.
    pub fn len(&self) -> usize {
        self.points.pow(self.axes.count() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight per node, `spacing^axes`.
    pub fn weight(&self) -> f64 {
        self.spacing().powi(self.axes.count() as i32)
    }

    /// Node of a single complex plane at flat index `re * G + im`.
    pub fn plane_point(&self, index: usize) -> C64 {
        C64::new(self.node(index / self.points), self.node(index % self.points))
    }

    /// All nodes of a single complex plane, in flat order.
    pub fn plane_points(&self) -> Vec<C64> {
        (0..self.points * self.points).map(|k| self.plane_point(k)).collect()
    }

    /// Whether node `i` lies in the central two-thirds of its axis.
    pub fn is_interior(&self, i: usize) -> bool {
        self.node(i).abs() <= 2.0 * self.extent / 3.0 + 1e-12 * self.extent
    }

    /// The single-plane grid with the same per-axis layout.
    pub fn plane_grid(&self) -> ComplexGrid {
        ComplexGrid { axes: Axes::Two, ..*self }
    }

    /// Per-axis node indices of a flat index, most significant first.
    pub fn unflatten(&self, mut index: usize) -> [usize; 4] {
        let mut out = [0; 4];
        let n = self.axes.count();
        for k in (0..n).rev() {
            out[k] = index % self.points;
            index /= self.points;
        }
        out
    }

    fn is_boundary(&self, index: usize) -> bool {
        let idx = self.unflatten(index);
        idx[..self.axes.count()].iter().any(|&i| i == 0 || i == self.points - 1)
    }

    fn is_interior_flat(&self, index: usize) -> bool {
        let idx = self.unflatten(index);
        idx[..self.axes.count()].iter().all(|&i| self.is_interior(i))
    }
}

/// Complex samples on every node of a [`ComplexGrid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: ComplexGrid,
    samples: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: ComplexGrid, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::invalid("sample count differs from the grid size"));
        }
        Ok(GridFunction { grid, samples })
    }

    /// Samples `f(z)` on a one-plane grid.
    pub fn from_plane_fn(grid: ComplexGrid, f: impl Fn(C64) -> C64) -> Result<Self> {
        if grid.axes() != Axes::Two {
            return Err(Error::invalid("expected a one-plane grid"));
        }
        let samples = (0..grid.len()).map(|k| f(grid.plane_point(k))).collect();
        Ok(GridFunction { grid, samples })
    }

    /// Samples `f(first, second)` on a two-plane grid.
    pub fn from_planes_fn(grid: ComplexGrid, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if grid.axes() != Axes::Four {
            return Err(Error::invalid("expected a two-plane grid"));
        }
        let n = grid.points * grid.points;
        let mut samples = Vec::with_capacity(grid.len());
        for a in 0..n {
            let first = grid.plane_point(a);
            for b in 0..n {
                samples.push(f(first, grid.plane_point(b)));
            }
        }
        Ok(GridFunction { grid, samples })
    }

    /// The constant 1, hard-windowed to the grid.
    pub fn ones(grid: ComplexGrid) -> Self {
        GridFunction { grid, samples: alloc::vec![C64::new(1.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> ComplexGrid {
        self.grid
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn scale(&self, s: C64) -> GridFunction {
        GridFunction { grid: self.grid, samples: self.samples.iter().map(|v| v * s).collect() }
    }

    /// Largest modulus on the boundary shell (any axis index at an edge).
    pub fn boundary_decay(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, v) in self.samples.iter().enumerate() {
            if self.grid.is_boundary(k) {
                worst = worst.max(v.norm());
            }
        }
        worst
    }

    /// `sum |f|^2 * weight`.
    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.weight()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    fn check_same(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.samples.iter().zip(&other.samples).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Largest difference over nodes in the central two-thirds of every axis.
    pub fn interior_max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_same(other)?;
        let mut worst: f64 = 0.0;
        for (k, (a, b)) in self.samples.iter().zip(&other.samples).enumerate() {
            if self.grid.is_interior_flat(k) {
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(GridFunction { grid: self.grid, samples })
    }
}
