//! Ball-restricted quadrature on the lattice: indicator-weighted cell sums
//! with 3^4 subcell refinement near the boundary.
//!
//! Balls are metric balls in the minimal-image distance and must have radius
//! below 1/2 so they embed as Euclidean balls.

use crate::{Error, Result};

use super::{min_image, Field, TorusGrid};

/// A metric ball on the torus.
#[derive(Debug, Clone, Copy)]
pub struct BallSpec {
    pub center: [f64; 4],
    pub radius: f64,
}

impl BallSpec {
    pub fn new(center: [f64; 4], radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.5) {
            return Err(Error::Domain(format!(
                "ball radius must lie in (0, 1/2), got {radius}"
            )));
        }
        Ok(BallSpec { center, radius })
    }
}

const SUBCELL_OFFSETS: [f64; 3] = [-1.0 / 3.0, 0.0, 1.0 / 3.0];

/// Fraction of the cell centered at `node` that lies inside the ball,
/// resolved to a 3^4 subcell split when the cell straddles the boundary.
#[inline]
fn cell_weight(dist: f64, radius: f64, h: f64, offset: [f64; 4]) -> f64 {
    // half-diagonal of a 4-cube of side h is exactly h
    if dist <= radius - h {
        return 1.0;
    }
    if dist >= radius + h {
        return 0.0;
    }
    let mut inside = 0u32;
    for &o0 in &SUBCELL_OFFSETS {
        for &o1 in &SUBCELL_OFFSETS {
            for &o2 in &SUBCELL_OFFSETS {
                for &o3 in &SUBCELL_OFFSETS {
                    let d0 = offset[0] + o0 * h;
                    let d1 = offset[1] + o1 * h;
                    let d2 = offset[2] + o2 * h;
                    let d3 = offset[3] + o3 * h;
                    let d2sum = d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
                    if d2sum <= radius * radius {
                        inside += 1;
                    }
                }
            }
        }
    }
    inside as f64 / 81.0
}

/// Sparse list of `(node index, weight)` pairs covering the ball.
pub fn ball_weights(grid: TorusGrid, ball: &BallSpec) -> Vec<(usize, f64)> {
    let n = grid.n() as i64;
    let h = grid.spacing();
    let reach = ((ball.radius + h) / h).ceil() as i64;
    let base: [i64; 4] = {
        let mut b = [0i64; 4];
        for a in 0..4 {
            b[a] = (ball.center[a] / h).round() as i64;
        }
        b
    };
    let mut out = Vec::new();
    for j0 in -reach..=reach {
        for j1 in -reach..=reach {
            for j2 in -reach..=reach {
                for j3 in -reach..=reach {
                    let idx4 = [base[0] + j0, base[1] + j1, base[2] + j2, base[3] + j3];
                    let mut offset = [0.0; 4];
                    for a in 0..4 {
                        offset[a] = min_image(idx4[a] as f64 * h - ball.center[a]);
                    }
                    let dist =
                        (offset.iter().map(|d| d * d).sum::<f64>()).sqrt();
                    if dist >= ball.radius + h {
                        continue;
                    }
                    let w = cell_weight(dist, ball.radius, h, offset);
                    if w > 0.0 {
                        let mi = [
                            idx4[0].rem_euclid(n) as usize,
                            idx4[1].rem_euclid(n) as usize,
                            idx4[2].rem_euclid(n) as usize,
                            idx4[3].rem_euclid(n) as usize,
                        ];
                        out.push((grid.index_of(mi), w));
                    }
                }
            }
        }
    }
    out
}

/// `∫_B f dv` by the weighted cell sum.
pub fn integrate_ball(f: &Field, ball: &BallSpec) -> Result<f64> {
    if ball.radius >= 0.5 {
        return Err(Error::Domain(format!(
            "ball radius {} exceeds the injectivity bound 1/2",
            ball.radius
        )));
    }
    let grid = f.grid();
    let h4 = grid.spacing().powi(4);
    let vals = f.values();
    let s: f64 = ball_weights(grid, ball)
        .iter()
        .map(|&(i, w)| w * vals[i])
        .sum();
    Ok(s * h4)
}

/// Weight field of a ball centered at node 0, as used by the convolution
/// form of ball sums. `convolve(f, weight_field)` evaluates
/// `∫_{B_r(x)} f dv` at every node `x` simultaneously.
pub fn ball_weight_field(grid: TorusGrid, radius: f64) -> Result<Field> {
    if !(radius > 0.0 && radius < 0.5) {
        return Err(Error::Domain(format!(
            "ball radius must lie in (0, 1/2), got {radius}"
        )));
    }
    let ball = BallSpec { center: [0.0; 4], radius };
    let mut f = Field::zeros(grid);
    for (i, w) in ball_weights(grid, &ball) {
        f.values_mut()[i] = w;
    }
    Ok(f)
}
