//! Seeded random inputs. Every generator takes the RNG explicitly so one
//! `--seed` reproduces a whole run.

use std::f64::consts::PI;

use bisph_core::grid::GridFunction;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::Result;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `2 + Re Σ_j c_j e^{2πi k_j·x/L}` with `|k_j|_∞ ≤ max_mode` and
/// `Σ|c_j| ≤ 1`, so the function is real, positive and exactly
/// band-limited on the grid.
pub fn band_limited_positive(rng: &mut impl Rng, d: usize, n: usize, box_length: f64, max_mode: i64, terms: usize) -> Result<GridFunction> {
    let mut modes = Vec::with_capacity(terms);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum::<f64>() / rng.gen_range(0.5..1.0);
    weights.iter_mut().for_each(|w| *w /= total);
    for w in weights {
        let k: Vec<f64> = (0..d).map(|_| rng.gen_range(-max_mode..=max_mode) as f64).collect();
        let phase = rng.gen_range(0.0..2.0 * PI);
        modes.push((k, w, phase));
    }
    Ok(GridFunction::from_real_fn(d, n, box_length, |x| {
        2.0 + modes
            .iter()
            .map(|(k, w, phase)| w * (2.0 * PI * (0..d).map(|a| k[a] * x[a]).sum::<f64>() / box_length + phase).cos())
            .sum::<f64>()
    })?)
}

/// Nonnegative random values on the grid points inside a ball.
pub fn nonnegative_blob(rng: &mut impl Rng, d: usize, n: usize, box_length: f64, center: &[f64], radius: f64) -> Result<GridFunction> {
    let mut vals = Vec::with_capacity(n.pow(d as u32));
    let probe = GridFunction::constant(d, n, box_length, 0.0)?;
    for i in 0..probe.len() {
        let x = probe.node(i);
        let r2: f64 = (0..d).map(|a| (x[a] - center[a]).powi(2)).sum();
        let v: f64 = rng.gen_range(0.0..1.0);
        vals.push(if r2 < radius * radius { v } else { 0.0 });
    }
    Ok(GridFunction::from_real(d, n, box_length, &vals)?)
}

/// Independent complex Gaussian-ish values at every node.
pub fn random_complex(rng: &mut impl Rng, d: usize, n: usize, box_length: f64) -> Result<GridFunction> {
    let values = (0..n.pow(d as u32)).map(|_| bisph_core::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Ok(GridFunction::new(d, n, box_length, values)?)
}

/// Real trigonometric polynomial with `terms` random modes in `|k|_∞ ≤ max_mode`.
pub fn sparse_trig(rng: &mut impl Rng, d: usize, n: usize, box_length: f64, max_mode: i64, terms: usize) -> Result<GridFunction> {
    let modes: Vec<(Vec<f64>, f64, f64)> = (0..terms)
        .map(|_| {
            let k = (0..d).map(|_| rng.gen_range(-max_mode..=max_mode) as f64).collect();
            (k, rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    Ok(GridFunction::from_real_fn(d, n, box_length, |x| {
        modes
            .iter()
            .map(|(k, w, ph)| w * (2.0 * PI * (0..d).map(|a| k[a] * x[a]).sum::<f64>() / box_length + ph).cos())
            .sum()
    })?)
}

pub fn uniform_point(rng: &mut impl Rng, d: usize, half_width: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_limited_is_positive_and_reproducible() {
        let a = band_limited_positive(&mut rng(7, 1), 2, 16, 8.0, 3, 6).unwrap();
        let b = band_limited_positive(&mut rng(7, 1), 2, 16, 8.0, 3, 6).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.values().iter().all(|v| v.re >= 1.0 - 1e-12 && v.im == 0.0));
        let c = band_limited_positive(&mut rng(7, 2), 2, 16, 8.0, 3, 6).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn blob_is_supported_in_ball() {
        let f = nonnegative_blob(&mut rng(1, 0), 2, 16, 8.0, &[0.5, 0.0], 1.0).unwrap();
        for i in 0..f.len() {
            let x = f.node(i);
            if (x[0] - 0.5).powi(2) + x[1] * x[1] >= 1.0 {
                assert_eq!(f.values()[i].re, 0.0);
            }
            assert!(f.values()[i].re >= 0.0);
        }
    }
}
