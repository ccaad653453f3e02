//! Uniform periodic mesh and nodal fields living on it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest node count accepted by the finite-difference operators.
pub const MIN_NODES: usize = 8;

/// Uniform periodic grid on `[0, L)` with nodes `ξᵢ = i·h`, `h = L/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    length: f64,
    nodes: usize,
}

impl PeriodicGrid {
    pub fn new(length: f64, nodes: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositive { quantity: "domain length", value: length });
        }
        if nodes < MIN_NODES {
            return Err(Error::InvalidParameter(alloc::format!(
                "grid needs at least {MIN_NODES} nodes, got {nodes}"
            )));
        }
        Ok(Self { length, nodes })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes == 0
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.length / self.nodes as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (0..self.nodes).map(move |i| i as f64 * h)
    }

    /// Index `i + offset` wrapped into `0..N`.
    #[inline]
    pub fn wrap(&self, i: usize, offset: isize) -> usize {
        let n = self.nodes as isize;
        (((i as isize + offset) % n + n) % n) as usize
    }

    /// Same node count, different period.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(length, self.nodes)
    }
}

/// Nodal film position `v(ξᵢ)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FilmProfile {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl FilmProfile {
    /// Wraps nodal values; every value must be finite and strictly positive.
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("value count differs from node count"));
        }
        if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositive { quantity: "film position", value: bad });
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: PeriodicGrid, value: f64) -> Result<Self> {
        Self::new(grid, alloc::vec![value; grid.len()])
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmin(&self) -> usize {
        argext(&self.values, |a, b| a < b)
    }

    pub fn argmax(&self) -> usize {
        argext(&self.values, |a, b| a > b)
    }

    /// Cyclic shift so that node `k` of `self` becomes node 0.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.values.len();
        let values = (0..n).map(|i| self.values[(i + k) % n]).collect();
        Self { grid: self.grid, values }
    }

    /// Same nodal values on a grid of a different period (pure stretch).
    pub fn stretched(&self, length: f64) -> Result<Self> {
        Ok(Self { grid: self.grid.with_length(length)?, values: self.values.clone() })
    }

    /// Multiplies every value by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    /// Trigonometric interpolation onto `target` (same period assumed, node count may differ).
    pub fn resampled(&self, target: PeriodicGrid) -> Result<Self> {
        let values = resample_periodic(&self.values, target.len());
        Self::new(target, values)
    }
}

fn argext(values: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if better(v, values[best]) {
            best = i;
        }
    }
    best
}

/// Periodic resampling by exact trigonometric interpolation (naive DFT; grids are small).
pub fn resample_periodic(values: &[f64], target_len: usize) -> Vec<f64> {
    #[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
    use num_traits::Float;


    let n = values.len();
    if n == target_len {
        return values.to_vec();
    }
    let kmax = n / 2;
    let mut re = alloc::vec![0.0; kmax + 1];
    let mut im = alloc::vec![0.0; kmax + 1];
    for k in 0..=kmax {
        let (mut sr, mut si) = (0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let arg = 2.0 * PI * (k * j % n) as f64 / n as f64;
            sr += v * arg.cos();
            si -= v * arg.sin();
        }
        re[k] = sr / n as f64;
        im[k] = si / n as f64;
    }
    (0..target_len)
        .map(|j| {
            let x = j as f64 / target_len as f64;
            let mut s = re[0];
            for k in 1..=kmax {
                // Nyquist mode of an even-length input is split evenly.
                let w = if n % 2 == 0 && k == kmax { 1.0 } else { 2.0 };
                let arg = 2.0 * PI * k as f64 * x;
                s += w * (re[k] * arg.cos() - im[k] * arg.sin());
            }
            s
        })
        .collect()
}

/// Nodal pressure-type field (`J`, `λ(ξ)`, `F(ξ)`); values may have any sign.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl PressureField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("value count differs from node count"));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_times_count_is_length() {
        let g = PeriodicGrid::new(10.79, 512).unwrap();
        assert!((g.spacing() * 512.0 - 10.79).abs() < 1e-14);
        assert_eq!(g.wrap(0, -1), 511);
        assert_eq!(g.wrap(511, 2), 1);
    }

    #[test]
    fn rejects_small_grids_and_bad_values() {
        assert!(PeriodicGrid::new(1.0, 4).is_err());
        assert!(PeriodicGrid::new(0.0, 16).is_err());
        let g = PeriodicGrid::new(1.0, 8).unwrap();
        assert!(FilmProfile::new(g, alloc::vec![1.0; 7]).is_err());
        let mut v = alloc::vec![1.0; 8];
        v[3] = -0.1;
        assert!(FilmProfile::new(g, v).is_err());
    }

    #[test]
    fn resampling_is_exact_for_band_limited_data() {
        #[allow(unused_imports)] // shadowed by std's inherent methods when std is linked
        use num_traits::Float;
        let g = PeriodicGrid::new(3.0, 32).unwrap();
        let f = |x: f64| 2.0 + 0.3 * (2.0 * PI * x / 3.0).sin() - 0.1 * (6.0 * PI * x / 3.0).cos();
        let p = FilmProfile::from_fn(g, f).unwrap();
        let fine = PeriodicGrid::new(3.0, 80).unwrap();
        let q = p.resampled(fine).unwrap();
        for (x, v) in fine.nodes().zip(q.values()) {
            assert!((f(x) - v).abs() < 1e-12);
        }
    }
}
