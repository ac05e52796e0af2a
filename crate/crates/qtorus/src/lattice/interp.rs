//! Exact trigonometric (band-limited) interpolation off the lattice.
//!
//! Uses the even-order Dirichlet kernel `sin(nπδ) / (n tan(πδ))`, which
//! reproduces every resolved Fourier mode exactly and the Nyquist mode in
//! its cosine form.

use std::f64::consts::PI;

use super::{min_image, Field};

/// Periodic cardinal weight of a node at signed offset `delta` (torus units).
#[inline]
pub fn dirichlet_weight(n: usize, delta: f64) -> f64 {
    let d = min_image(delta);
    if d.abs() < 1e-15 {
        return 1.0;
    }
    let nf = n as f64;
    (nf * PI * d).sin() / (nf * (PI * d).tan())
}

fn axis_weights(n: usize, x: f64) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..n).map(|j| dirichlet_weight(n, x - j as f64 * h)).collect()
}

/// Evaluate the trigonometric interpolant of `f` at one point.
pub fn interpolate(f: &Field, x: [f64; 4]) -> f64 {
    let n = f.grid().n();
    let w: [Vec<f64>; 4] = [
        axis_weights(n, x[0]),
        axis_weights(n, x[1]),
        axis_weights(n, x[2]),
        axis_weights(n, x[3]),
    ];
    let mut dims = [n, n, n, n];
    let mut data = f.values().to_vec();
    for axis in 0..4 {
        data = contract_leading(&data, &mut dims, axis, &w[axis], 1);
    }
    data[0]
}

/// Evaluate on a separable set of coordinates: the tensor grid
/// `axes[0] × axes[1] × axes[2] × axes[3]`, returned row-major.
pub fn interpolate_grid(f: &Field, axes: &[Vec<f64>; 4]) -> Vec<f64> {
    let n = f.grid().n();
    let mut dims = [n, n, n, n];
    let mut data = f.values().to_vec();
    for axis in 0..4 {
        let m = axes[axis].len();
        let mut w = Vec::with_capacity(m * n);
        let h = 1.0 / n as f64;
        for &x in &axes[axis] {
            for j in 0..n {
                w.push(dirichlet_weight(n, x - j as f64 * h));
            }
        }
        data = contract_leading(&data, &mut dims, axis, &w, m);
    }
    data
}

/// Contract dimension `axis` (all earlier axes already contracted, so the
/// layout is `[m_0 .. m_{axis-1}, n, suffix]`) against an `m × n` weight
/// matrix.
fn contract_leading(
    data: &[f64],
    dims: &mut [usize; 4],
    axis: usize,
    w: &[f64],
    m: usize,
) -> Vec<f64> {
    let n = dims[axis];
    let prefix: usize = dims[..axis].iter().product();
    let suffix: usize = dims[axis + 1..].iter().product();
    let mut out = vec![0.0; prefix * m * suffix];
    for p in 0..prefix {
        let in_base = p * n * suffix;
        let out_base = p * m * suffix;
        for a in 0..m {
            let row = &w[a * n..(a + 1) * n];
            let dst = &mut out[out_base + a * suffix..out_base + (a + 1) * suffix];
            for (j, &wj) in row.iter().enumerate() {
                if wj == 0.0 {
                    continue;
                }
                let src = &data[in_base + j * suffix..in_base + (j + 1) * suffix];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += wj * s;
                }
            }
        }
    }
    dims[axis] = m;
    out
}
