//! The discrete flat unit 4-torus: grids, scalar fields, Fourier transforms,
//! trigonometric interpolation and ball-restricted quadrature.
//!
//! The period is fixed at 1 on every axis so the total volume is exactly 1;
//! every constant downstream relies on that normalization.

pub mod ball;
pub mod fft;
pub mod interp;

use crate::{Error, Result};

pub use ball::BallSpec;
pub use fft::Spectrum;

/// Uniform lattice on `[0,1)^4` with an even number of nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    n: usize,
}

impl TorusGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::Config(format!("n must be even, got {n}")));
        }
        if !(8..=64).contains(&n) {
            return Err(Error::Config(format!("n must be in [8, 64], got {n}")));
        }
        Ok(TorusGrid { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Total volume of the torus (period^4 with unit period).
    #[inline]
    pub fn volume(&self) -> f64 {
        1.0
    }

    /// Number of lattice nodes, `n^4`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer frequency of FFT bin `i`, in `[-n/2, n/2]` (Nyquist mapped to `+n/2`).
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    #[inline]
    pub fn index_of(&self, i: [usize; 4]) -> usize {
        let n = self.n;
        ((i[0] * n + i[1]) * n + i[2]) * n + i[3]
    }

    #[inline]
    pub fn multi_index(&self, idx: usize) -> [usize; 4] {
        let n = self.n;
        let i3 = idx % n;
        let r = idx / n;
        let i2 = r % n;
        let r = r / n;
        let i1 = r % n;
        let i0 = r / n;
        [i0, i1, i2, i3]
    }

    #[inline]
    pub fn node(&self, i: [usize; 4]) -> [f64; 4] {
        let h = self.spacing();
        [i[0] as f64 * h, i[1] as f64 * h, i[2] as f64 * h, i[3] as f64 * h]
    }

    /// Nearest lattice node to a point of `[0,1)^4`.
    pub fn nearest_node(&self, x: [f64; 4]) -> [usize; 4] {
        let n = self.n;
        let mut out = [0usize; 4];
        for a in 0..4 {
            let j = (x[a] * n as f64).round().rem_euclid(n as f64) as usize;
            out[a] = j % n;
        }
        out
    }

    /// Minimal-image Euclidean distance between two points of the torus.
    pub fn distance(&self, x: [f64; 4], y: [f64; 4]) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            let d = min_image(x[a] - y[a]);
            s += d * d;
        }
        s.sqrt()
    }
}

/// Signed representative of `t` modulo 1 in `[-1/2, 1/2)`.
#[inline]
pub fn min_image(t: f64) -> f64 {
    let mut d = t - t.round();
    if d < -0.5 {
        d += 1.0;
    } else if d >= 0.5 {
        d -= 1.0;
    }
    d
}

/// Real scalar function sampled at the lattice nodes.
#[derive(Debug, Clone)]
pub struct Field {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: TorusGrid) -> Self {
        Field { grid, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: TorusGrid, c: f64) -> Self {
        Field { grid, values: vec![c; grid.len()] }
    }

    pub fn from_values(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "value buffer length {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, values })
    }

    /// Sample a function of torus coordinates at every node.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 4]) -> f64 + Sync) -> Self {
        use rayon::prelude::*;
        let n = grid.n();
        let h = grid.spacing();
        let mut values = vec![0.0; grid.len()];
        values
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(row, chunk)| {
                let i2 = row % n;
                let r = row / n;
                let i1 = r % n;
                let i0 = r / n;
                let x0 = i0 as f64 * h;
                let x1 = i1 as f64 * h;
                let x2 = i2 as f64 * h;
                for (i3, v) in chunk.iter_mut().enumerate() {
                    *v = f([x0, x1, x2, i3 as f64 * h]);
                }
            });
        Field { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `∫ f dv` over the unit-volume torus (the lattice mean).
    pub fn integrate(&self) -> f64 {
        self.mean()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_index(&self) -> usize {
        let mut best = 0;
        let mut bv = f64::NEG_INFINITY;
        for (i, &v) in self.values.iter().enumerate() {
            if v > bv {
                bv = v;
                best = i;
            }
        }
        best
    }

    /// `(∫ f^2 dv)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `∫ f g dv`.
    pub fn inner(&self, other: &Field) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        s / self.values.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Field {
        use rayon::prelude::*;
        let mut out = self.clone();
        out.values.par_iter_mut().for_each(|v| *v = f(*v));
        out
    }

    pub fn zip(&self, other: &Field, f: impl Fn(f64, f64) -> f64 + Sync) -> Field {
        use rayon::prelude::*;
        debug_assert_eq!(self.grid, other.grid);
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, &b)| *a = f(*a, b));
        out
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &Field) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn shift(&mut self, c: f64) {
        for v in &mut self.values {
            *v += c;
        }
    }

    /// `e^{4u}` evaluated in overflow-safe shifted form.
    pub fn exp4(&self) -> Field {
        let m = self.max();
        let scale = (4.0 * m).exp();
        self.map(move |v| (4.0 * (v - m)).exp() * scale)
    }

    /// `log ∫ e^{4u} dv` via the shifted (log-sum-exp) form.
    pub fn log_int_exp4(&self) -> f64 {
        let m = self.max();
        let s: f64 = self.values.iter().map(|&v| (4.0 * (v - m)).exp()).sum();
        4.0 * m + (s / self.values.len() as f64).ln()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = TorusGrid::new(16).unwrap();
        assert_eq!(g.spacing(), 0.0625);
        assert_eq!(g.len(), 65536);
        assert_eq!(g.volume(), 1.0);
        let g8 = TorusGrid::new(8).unwrap();
        assert_eq!(g8.volume(), 1.0);
    }

    #[test]
    fn odd_n_rejected() {
        let err = TorusGrid::new(7).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("even"));
        assert!(TorusGrid::new(6).is_err());
        assert!(TorusGrid::new(66).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let g = TorusGrid::new(8).unwrap();
        for idx in [0usize, 1, 4095, 777, 2048] {
            assert_eq!(g.index_of(g.multi_index(idx)), idx);
        }
    }

    #[test]
    fn min_image_wraps() {
        assert!((min_image(0.9) - (-0.1)).abs() < 1e-15);
        assert!((min_image(-0.9) - 0.1).abs() < 1e-15);
        assert_eq!(min_image(0.25), 0.25);
        // exactly half a period maps into [-1/2, 1/2)
        assert_eq!(min_image(0.5), -0.5);
    }

    #[test]
    fn constant_integrates_to_one() {
        let g = TorusGrid::new(8).unwrap();
        let f = Field::constant(g, 1.0);
        assert!((f.integrate() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exp4_matches_direct() {
        let g = TorusGrid::new(8).unwrap();
        let u = Field::from_fn(g, |x| 0.3 * (2.0 * std::f64::consts::PI * x[0]).sin());
        let e = u.exp4();
        for (a, b) in e.values().iter().zip(u.values()) {
            assert!((a - (4.0 * b).exp()).abs() < 1e-13);
        }
        let log_direct = e.integrate().ln();
        assert!((u.log_int_exp4() - log_direct).abs() < 1e-13);
    }
}
