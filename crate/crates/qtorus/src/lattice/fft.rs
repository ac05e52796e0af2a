//! Four-dimensional discrete Fourier transforms, axis by axis on top of 1-D
//! FFT plans. Plans are cached per grid size and shared read-only.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{Field, TorusGrid};

#[derive(Clone)]
struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans_for(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

/// Unnormalized complex Fourier coefficients of a real field.
///
/// The zero-frequency coefficient equals `n^4 *` mean; `from_spectral`
/// applies the `1/n^4` normalization on the way back.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    #[inline]
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Multiply each coefficient by a function of the squared integer
    /// frequency `|k|^2`.
    pub fn apply_radial_symbol(&mut self, sym: impl Fn(f64) -> f64 + Sync) {
        let grid = self.grid;
        let n = grid.n();
        self.coeffs
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(row, chunk)| {
                let i2 = row % n;
                let r = row / n;
                let i1 = r % n;
                let i0 = r / n;
                let k0 = grid.freq(i0) as f64;
                let k1 = grid.freq(i1) as f64;
                let k2 = grid.freq(i2) as f64;
                let base = k0 * k0 + k1 * k1 + k2 * k2;
                for (i3, c) in chunk.iter_mut().enumerate() {
                    let k3 = grid.freq(i3) as f64;
                    *c *= sym(base + k3 * k3);
                }
            });
    }

    /// Sum of `w(|k|^2) * |c_k|^2 / n^8`, i.e. a Parseval-normalized
    /// quadratic form in the amplitude coefficients.
    pub fn quadratic_form(&self, w: impl Fn(f64) -> f64 + Sync) -> f64 {
        let grid = self.grid;
        let n = grid.n();
        let norm = (grid.len() as f64) * (grid.len() as f64);
        let total: f64 = self
            .coeffs
            .par_chunks(n)
            .enumerate()
            .map(|(row, chunk)| {
                let i2 = row % n;
                let r = row / n;
                let i1 = r % n;
                let i0 = r / n;
                let k0 = grid.freq(i0) as f64;
                let k1 = grid.freq(i1) as f64;
                let k2 = grid.freq(i2) as f64;
                let base = k0 * k0 + k1 * k1 + k2 * k2;
                let mut s = 0.0;
                for (i3, c) in chunk.iter().enumerate() {
                    let k3 = grid.freq(i3) as f64;
                    s += w(base + k3 * k3) * c.norm_sqr();
                }
                s
            })
            .sum();
        total / norm
    }

    /// Largest coefficient magnitude over bins with `max_i |k_i| = n/2`
    /// (the Nyquist shell), relative to the largest magnitude overall.
    pub fn nyquist_tail_ratio(&self) -> f64 {
        let grid = self.grid;
        let n = grid.n();
        let ny = (n / 2) as i64;
        let mut max_all = 0.0f64;
        let mut max_ny = 0.0f64;
        for (idx, c) in self.coeffs.iter().enumerate() {
            let mi = grid.multi_index(idx);
            let m = c.norm();
            max_all = max_all.max(m);
            let on_shell = mi.iter().any(|&i| grid.freq(i).abs() == ny);
            if on_shell {
                max_ny = max_ny.max(m);
            }
        }
        if max_all == 0.0 {
            0.0
        } else {
            max_ny / max_all
        }
    }
}

fn transform_axes(buf: &mut [Complex64], n: usize, fft: &Arc<dyn Fft<f64>>) {
    // Axis 3: contiguous lanes.
    let scratch_len = fft.get_inplace_scratch_len();
    buf.par_chunks_mut(n).for_each_init(
        || vec![Complex64::default(); scratch_len],
        |scratch, lane| fft.process_with_scratch(lane, scratch),
    );
    // Axes 2, 1, 0: strided lanes, gathered into a scratch lane.
    for axis in (0..3).rev() {
        let stride = n.pow(3 - axis as u32);
        let lanes: Vec<usize> = lane_starts(n, stride);
        let ptr = SendPtr(buf.as_mut_ptr());
        lanes.par_iter().for_each_init(
            || {
                (
                    vec![Complex64::default(); n],
                    vec![Complex64::default(); fft.get_outofplace_scratch_len().max(scratch_len)],
                )
            },
            |(lane, scratch), &start| {
                let p = ptr.0;
                unsafe {
                    for j in 0..n {
                        *lane.get_unchecked_mut(j) = *p.add(start + j * stride);
                    }
                }
                fft.process_with_scratch(lane, scratch);
                unsafe {
                    for j in 0..n {
                        *p.add(start + j * stride) = *lane.get_unchecked(j);
                    }
                }
            },
        );
    }
}

// Non-overlapping strided lanes are written from distinct rayon tasks.
#[derive(Clone, Copy)]
struct SendPtr(*mut Complex64);
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

fn lane_starts(n: usize, stride: usize) -> Vec<usize> {
    // idx = outer * (stride * n) + inner, inner in [0, stride)
    let outer_count = n.pow(4) / (stride * n);
    let mut starts = Vec::with_capacity(outer_count * stride);
    for outer in 0..outer_count {
        let base = outer * stride * n;
        for inner in 0..stride {
            starts.push(base + inner);
        }
    }
    starts
}

/// Forward DFT of a real field (unnormalized sums).
pub fn to_spectral(f: &Field) -> Spectrum {
    let grid = f.grid();
    let n = grid.n();
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let plans = plans_for(n);
    transform_axes(&mut buf, n, &plans.forward);
    Spectrum { grid, coeffs: buf }
}

/// Inverse DFT, taking the real part and applying the `1/n^4` normalization.
pub fn from_spectral(s: &Spectrum) -> Field {
    let grid = s.grid;
    let n = grid.n();
    let mut buf = s.coeffs.clone();
    let plans = plans_for(n);
    transform_axes(&mut buf, n, &plans.inverse);
    let norm = 1.0 / grid.len() as f64;
    let values: Vec<f64> = buf.into_iter().map(|c| c.re * norm).collect();
    Field { grid, values }
}

/// Circular convolution `(f * g)(x) = ∫ f(y) g(x - y) dv(y)`.
pub fn convolve(f: &Field, g: &Field) -> Field {
    debug_assert_eq!(f.grid(), g.grid());
    let grid = f.grid();
    let mut a = to_spectral(f);
    let b = to_spectral(g);
    for (ca, cb) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
        *ca *= cb;
    }
    let mut out = from_spectral(&a);
    // one factor of the lattice measure from the inner sum
    let scale = 1.0 / grid.len() as f64;
    out.scale(scale);
    out
}
