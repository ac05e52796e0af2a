//! The Paneitz operator on the flat torus, where it reduces to the
//! bi-Laplacian: spectral application and inversion, the quadratic energy,
//! lattice Green's function, and the Adams-inequality diagnostic.

use std::f64::consts::PI;

use crate::lattice::{fft, Field, TorusGrid};
use crate::{Error, Result};

/// Energy value `E(u) = 2 <Pu, u> = 2 ∫ (Δu)^2 dv`, always nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EnergyValue(pub f64);

/// One column of the Green's function: `G(·, source)`.
#[derive(Debug, Clone)]
pub struct GreenColumn {
    pub source: [usize; 4],
    pub values: Field,
}

#[inline]
fn biharmonic_symbol(k2: f64) -> f64 {
    let w = (2.0 * PI) * (2.0 * PI) * k2;
    w * w
}

/// `Δ^2 u`, computed spectrally. The result has exactly zero mean.
pub fn apply_p(u: &Field) -> Field {
    let mut s = fft::to_spectral(u);
    s.apply_radial_symbol(biharmonic_symbol);
    fft::from_spectral(&s)
}

/// `Δ u`, computed spectrally.
pub fn laplacian(u: &Field) -> Field {
    let mut s = fft::to_spectral(u);
    s.apply_radial_symbol(|k2| -(2.0 * PI) * (2.0 * PI) * k2);
    fft::from_spectral(&s)
}

/// Mean-zero solution of `Δ^2 w = rhs`; requires a compatible (mean-zero)
/// right-hand side.
pub fn solve_p(rhs: &Field) -> Result<Field> {
    let mean = rhs.mean();
    if mean.abs() >= 1e-10 * rhs.linf_norm().max(1.0) {
        return Err(Error::Solvability(format!(
            "right-hand side has nonzero mean {mean:e}"
        )));
    }
    let mut s = fft::to_spectral(rhs);
    s.apply_radial_symbol(|k2| {
        if k2 == 0.0 {
            0.0
        } else {
            1.0 / biharmonic_symbol(k2)
        }
    });
    // mean-zero gauge: additive constants are fixed elsewhere
    s.coeffs_mut()[0] = rustfft::num_complex::Complex64::new(0.0, 0.0);
    Ok(fft::from_spectral(&s))
}

/// `E(u) = 2 ∫ (Δu)^2 dv`, evaluated in spectral form.
pub fn energy(u: &Field) -> EnergyValue {
    let s = fft::to_spectral(u);
    EnergyValue(2.0 * s.quadratic_form(biharmonic_symbol))
}

/// `<Pu, u> = ∫ (Δu)^2 dv`.
pub fn pairing(u: &Field) -> f64 {
    energy(u).0 / 2.0
}

/// Green column at a lattice source: solves `Δ^2 G = δ_source - 1`.
pub fn green_column(grid: TorusGrid, source: [usize; 4]) -> GreenColumn {
    let mut rhs = Field::constant(grid, -1.0);
    let idx = grid.index_of(source);
    rhs.values_mut()[idx] += grid.len() as f64;
    let values = solve_p(&rhs).expect("delta minus one has zero mean");
    GreenColumn { source, values }
}

/// Least-squares slope of `G` against `log(1/d)` over a distance window.
/// Near the source this is the log-singularity coefficient `1/(8π^2)`.
pub fn green_log_coefficient(col: &GreenColumn, d_min: f64, d_max: f64) -> Result<f64> {
    let grid = col.values.grid();
    let src = grid.node(col.source);
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut m = 0.0;
    for (idx, &g) in col.values.values().iter().enumerate() {
        let x = grid.node(grid.multi_index(idx));
        let d = grid.distance(x, src);
        if d < d_min || d > d_max {
            continue;
        }
        let l = (1.0 / d).ln();
        sx += l;
        sy += g;
        sxx += l * l;
        sxy += l * g;
        m += 1.0;
    }
    if m < 8.0 {
        return Err(Error::Domain(format!(
            "log-fit window [{d_min}, {d_max}] holds fewer than 8 lattice points"
        )));
    }
    let det = m * sxx - sx * sx;
    Ok((m * sxy - sx * sy) / det)
}

/// `∫ exp(32π^2 (u - ū)^2 / <Pu, u>) dv` — the Adams-inequality ratio.
pub fn adams_ratio(u: &Field) -> Result<f64> {
    let q = pairing(u);
    if q <= 0.0 || !q.is_finite() {
        return Err(Error::Degenerate(
            "Adams ratio needs a non-constant field".into(),
        ));
    }
    let mean = u.mean();
    let c = 32.0 * PI * PI / q;
    let s: f64 = u
        .values()
        .iter()
        .map(|&v| {
            let d = v - mean;
            (c * d * d).exp()
        })
        .sum();
    Ok(s / u.values().len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: TorusGrid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Field::from_values(grid, (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn cosine_eigenfunction() {
        let g = TorusGrid::new(16).unwrap();
        let u = Field::from_fn(g, |x| (2.0 * PI * x[0]).cos());
        let pu = apply_p(&u);
        let factor = (2.0 * PI).powi(4);
        for (a, b) in pu.values().iter().zip(u.values()) {
            assert!((a - factor * b).abs() < 1e-9 * factor);
        }
    }

    #[test]
    fn constants_in_kernel() {
        let g = TorusGrid::new(8).unwrap();
        let u = Field::constant(g, 2.5);
        assert!(apply_p(&u).linf_norm() < 1e-10);
        assert_eq!(energy(&u).0, 0.0);
    }

    #[test]
    fn p_equals_laplacian_twice() {
        let g = TorusGrid::new(12).unwrap();
        let u = random_field(g, 5);
        let twice = laplacian(&laplacian(&u));
        let direct = apply_p(&u);
        let scale = direct.linf_norm();
        let err = direct
            .values()
            .iter()
            .zip(twice.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-10 * scale);
    }

    #[test]
    fn solve_roundtrip_and_compatibility() {
        let g = TorusGrid::new(12).unwrap();
        let mut rhs = random_field(g, 9);
        let m = rhs.mean();
        rhs.shift(-m);
        let w = solve_p(&rhs).unwrap();
        assert!(w.mean().abs() < 1e-12);
        let back = apply_p(&w);
        let scale = rhs.linf_norm();
        let err = back
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-10 * scale);

        let biased = Field::constant(g, 0.1);
        assert!(matches!(solve_p(&biased), Err(Error::Solvability(_))));
        // zero in, zero out
        let z = solve_p(&Field::zeros(g)).unwrap();
        assert_eq!(z.linf_norm(), 0.0);
    }

    #[test]
    fn eigenmode_inverse() {
        let g = TorusGrid::new(8).unwrap();
        let factor = (2.0 * PI).powi(4);
        let rhs = Field::from_fn(g, |x| factor * (2.0 * PI * x[0]).cos());
        let w = solve_p(&rhs).unwrap();
        for (idx, &v) in w.values().iter().enumerate() {
            let x = g.node(g.multi_index(idx));
            assert!((v - (2.0 * PI * x[0]).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_of_cosine() {
        let g = TorusGrid::new(16).unwrap();
        for a in [1.0, 0.3, 2.0] {
            let u = Field::from_fn(g, |x| a * (2.0 * PI * x[0]).cos());
            let want = a * a * (2.0 * PI).powi(4);
            assert!((energy(&u).0 - want).abs() < 1e-10 * want);
        }
        // orthogonal modes add
        let u1 = Field::from_fn(g, |x| (2.0 * PI * x[0]).cos());
        let u2 = Field::from_fn(g, |x| 0.5 * (2.0 * PI * 2.0 * x[1]).sin());
        let mut sum = u1.clone();
        sum.axpy(1.0, &u2);
        let lhs = energy(&sum).0;
        let rhs = energy(&u1).0 + energy(&u2).0;
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }

    #[test]
    fn self_adjoint_and_nonnegative() {
        let g = TorusGrid::new(8).unwrap();
        for seed in 0..100 {
            let u = random_field(g, 100 + seed);
            let v = random_field(g, 200 + seed);
            let pu = apply_p(&u);
            let pv = apply_p(&v);
            let a = pu.inner(&v);
            let b = u.inner(&pv);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
            assert!(pu.inner(&u) >= -1e-10);
        }
    }

    #[test]
    fn green_column_properties() {
        let g = TorusGrid::new(16).unwrap();
        let c0 = green_column(g, [0, 0, 0, 0]);
        assert!(c0.values.mean().abs() < 1e-12);
        // discrete equation: P G = n^4 * delta - 1
        let pg = apply_p(&c0.values);
        let idx0 = g.index_of([0, 0, 0, 0]);
        for (i, &v) in pg.values().iter().enumerate() {
            let want = if i == idx0 { g.len() as f64 - 1.0 } else { -1.0 };
            assert!((v - want).abs() < 1e-6 * g.len() as f64);
        }
        // symmetry under source exchange
        let y = [3usize, 7, 1, 12];
        let cy = green_column(g, y);
        let g_xy = c0.values.values()[g.index_of(y)];
        let g_yx = cy.values.values()[idx0];
        assert!((g_xy - g_yx).abs() < 1e-9);
    }

    #[test]
    fn adams_ratio_behaviour() {
        let g = TorusGrid::new(8).unwrap();
        // small-amplitude field: ratio ~ 1 + O(amplitude^2)
        let u = Field::from_fn(g, |x| 1e-3 * (2.0 * PI * x[0]).cos());
        let r = adams_ratio(&u).unwrap();
        assert!(r > 1.0 && r < 1.5);
        // scale invariance of the exponent keeps the ratio bounded in c
        let base = Field::from_fn(g, |x| (2.0 * PI * x[1]).cos() + 0.3 * (2.0 * PI * x[2]).sin());
        let r1 = adams_ratio(&base).unwrap();
        for c in [0.1, 0.5, 2.0, 10.0] {
            let mut scaled = base.clone();
            scaled.scale(c);
            let rc = adams_ratio(&scaled).unwrap();
            assert!((rc - r1).abs() < 1e-8 * r1, "ratio changed under scaling");
        }
        assert!(adams_ratio(&Field::constant(g, 1.0)).is_err());
    }
}
