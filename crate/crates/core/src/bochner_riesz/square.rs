//! `L²`-in-parameter square functions built from the thin-annulus
//! multipliers `φ((t - |λξ|²)/δ)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::profile::BumpProfile;
use super::sq;
use crate::grid::GridFunction;
use crate::{Error, Result};

/// Minimum `t`-samples on `[1/2, 2]` is `LO_SAMPLES_PER_INV_DELTA/δ`.
pub const LO_SAMPLES_PER_INV_DELTA: f64 = 8.0;
/// Minimum `λ`-samples on `[1, 2]` is `MIXED_SAMPLES_PER_INV_DELTA/δ`.
pub const MIXED_SAMPLES_PER_INV_DELTA: f64 = 32.0;

/// Uniform nodes and trapezoid weights on `[a, b]`.
fn trapezoid(a: f64, b: f64, count: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let w = if i == 0 || i + 1 == count { h / 2.0 } else { h };
            (a + h * i as f64, w)
        })
        .collect()
}

fn min_samples(per_inv_delta: f64, delta: f64) -> usize {
    (libm::ceil(per_inv_delta / delta) as usize).max(2)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 0.25) {
        return Err(Error::InvalidParameter(alloc::format!("δ = {delta} outside (0, 1/4]")));
    }
    Ok(())
}

/// `𝔖^φ_δ f(x) = (∫_{1/2}^2 |φ((t - |D|²)/δ) f(x)|² dt)^{1/2}` with a
/// trapezoid rule in `t`.
pub fn lo_square_function(f: &GridFunction, phi: &BumpProfile, delta: f64, t_samples: usize) -> Result<GridFunction> {
    phi.require_unit_class(0)?;
    check_delta(delta)?;
    if t_samples < min_samples(LO_SAMPLES_PER_INV_DELTA, delta) {
        return Err(Error::UnderResolved(delta));
    }
    let spec = f.fourier_transform();
    let sqn: Vec<f64> = (0..spec.coeffs.len()).map(|i| sq(&spec.frequency(i)[..f.d()])).collect();
    let mut acc = alloc::vec![0.0f64; f.len()];
    for (t, w) in trapezoid(0.5, 2.0, t_samples) {
        let mut s = spec.clone();
        let mut any = false;
        for (c, q) in s.coeffs.iter_mut().zip(&sqn) {
            let m = phi.eval((t - q) / delta);
            any |= m != 0.0 && *c != Complex64::new(0.0, 0.0);
            *c *= m;
        }
        if !any {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(s.inverse().values()) {
            *a += w * v.norm_sqr();
        }
    }
    GridFunction::from_real(f.d(), f.n(), f.box_length(), &acc.iter().map(|v| libm::sqrt(*v)).collect::<Vec<_>>())
}

/// `‖𝔖^φ_δ f‖₂²` computed on the frequency side with the same `t` rule:
/// `Σ_t w_t L^{-d} Σ_ξ φ((t-|ξ|²)/δ)² |f̂(ξ)|²`.
pub fn lo_square_energy(f: &GridFunction, phi: &BumpProfile, delta: f64, t_samples: usize) -> Result<f64> {
    check_delta(delta)?;
    if t_samples < min_samples(LO_SAMPLES_PER_INV_DELTA, delta) {
        return Err(Error::UnderResolved(delta));
    }
    let spec = f.fourier_transform();
    let nodes = trapezoid(0.5, 2.0, t_samples);
    let mut total = 0.0;
    for (i, c) in spec.coeffs.iter().enumerate() {
        let q = sq(&spec.frequency(i)[..f.d()]);
        let weight: f64 = nodes.iter().map(|(t, w)| { let v = phi.eval((t - q) / delta); w * v * v }).sum();
        total += weight * c.norm_sqr();
    }
    Ok(total / libm::pow(f.box_length(), f.d() as f64))
}

/// The `sup_k` mixed square function together with each `𝔇^φ_{δ,k}`.
#[derive(Clone, Debug)]
pub struct MixedSquare {
    pub sup: GridFunction,
    pub slices: Vec<(i32, GridFunction)>,
    /// Fourier modes actually carried (sparse evaluation).
    pub modes: usize,
}

/// Indices `i` with `|iδ - u| < δ` and `iδ ∈ [0, 2]`.
pub fn active_rho_indices(u: f64, delta: f64) -> impl Iterator<Item = usize> {
    let top = libm::floor(2.0 / delta + 1e-9) as i64;
    let c = u / delta;
    let lo = (libm::floor(c) as i64 - 1).max(0);
    let hi = (libm::ceil(c) as i64 + 1).min(top);
    (lo..=hi).filter(move |i| (*i as f64 - c).abs() < 1.0).map(|i| i as usize)
}

/// `sup_{k} 𝔇^φ_{δ,k} f(x)` where
/// `𝔇^φ_{δ,k} f(x)² = Σ_{ρ∈δℤ∩[0,2]} ∫_1^2 |S^φ_{ρ,δ,2^kλ} f(x)|² dλ`.
///
/// Evaluation is mode-sparse: only Fourier modes of `f` above `1e-13·max`
/// are kept, and for each `(k, λ)` only the `ρ` within `δ` of some
/// `|2^kλξ|²` are visited.
pub fn mixed_square_function(
    f: &GridFunction,
    phi: &BumpProfile,
    delta: f64,
    k_range: (i32, i32),
    lambda_samples: usize,
) -> Result<MixedSquare> {
    phi.require_unit_class(0)?;
    check_delta(delta)?;
    if lambda_samples < min_samples(MIXED_SAMPLES_PER_INV_DELTA, delta) {
        return Err(Error::UnderResolved(delta));
    }
    if k_range.0 > k_range.1 {
        return Err(Error::InvalidParameter(alloc::format!("empty k range {k_range:?}")));
    }
    let (d, n, l) = (f.d(), f.n(), f.box_length());
    let spec = f.fourier_transform();
    let max = spec.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = 1.0 / libm::pow(l, d as f64);
    // (|ξ|², samples of f̂(ξ) e^{2πix·ξ}/L^d on the grid)
    let mut modes: Vec<(f64, Vec<Complex64>)> = Vec::new();
    for (i, c) in spec.coeffs.iter().enumerate() {
        if c.norm() <= 1e-13 * max || max == 0.0 {
            continue;
        }
        let xi = spec.frequency(i);
        let wave = (0..f.len())
            .map(|p| {
                let x = f.node(p);
                let ph = 2.0 * PI * (0..d).map(|a| x[a] * xi[a]).sum::<f64>();
                c * scale * Complex64::new(libm::cos(ph), libm::sin(ph))
            })
            .collect();
        modes.push((sq(&xi[..d]), wave));
    }
    let nodes = trapezoid(1.0, 2.0, lambda_samples);
    let mut slices = Vec::new();
    let mut sup = alloc::vec![0.0f64; f.len()];
    let mut field = alloc::vec![Complex64::new(0.0, 0.0); f.len()];
    for k in k_range.0..=k_range.1 {
        let mut acc = alloc::vec![0.0f64; f.len()];
        let scale_k = libm::ldexp(1.0, 2 * k);
        // Groups of (ρ index, mode, multiplier value) for one λ.
        let mut hits: Vec<(usize, usize, f64)> = Vec::new();
        for (lambda, w) in &nodes {
            hits.clear();
            for (m, (q, _)) in modes.iter().enumerate() {
                let u = scale_k * lambda * lambda * q;
                for i in active_rho_indices(u, delta) {
                    let v = phi.eval(i as f64 - u / delta);
                    if v != 0.0 {
                        hits.push((i, m, v));
                    }
                }
            }
            hits.sort_unstable_by_key(|h| (h.0, h.1));
            let mut start = 0;
            while start < hits.len() {
                let rho = hits[start].0;
                let end = start + hits[start..].iter().take_while(|h| h.0 == rho).count();
                field.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
                for &(_, m, v) in &hits[start..end] {
                    for (slot, e) in field.iter_mut().zip(&modes[m].1) {
                        *slot += e * v;
                    }
                }
                for (a, v) in acc.iter_mut().zip(&field) {
                    *a += w * v.norm_sqr();
                }
                start = end;
            }
        }
        let vals: Vec<f64> = acc.iter().map(|v| libm::sqrt(*v)).collect();
        for (s, v) in sup.iter_mut().zip(&vals) {
            *s = s.max(*v);
        }
        slices.push((k, GridFunction::from_real(d, n, l, &vals)?));
    }
    Ok(MixedSquare { sup: GridFunction::from_real(d, n, l, &sup)?, slices, modes: modes.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bochner_riesz::profile_corpus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mode(n: usize, l: f64, k: [i32; 2]) -> GridFunction {
        GridFunction::from_fn(2, n, l, |x| {
            let ph = 2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1]) / l;
            Complex64::new(libm::cos(ph), libm::sin(ph))
        })
        .unwrap()
    }

    fn random(seed: u64, n: usize, l: f64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<Complex64> = (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        GridFunction::new(2, n, l, vals).unwrap()
    }

    #[test]
    fn lo_square_single_mode_is_constant() {
        let phi = profile_corpus().unwrap()[1].clone();
        let (n, l) = (16, 8.0);
        let e = mode(n, l, [5, 4]);
        let s = 41.0 / 64.0;
        let delta = 0.125;
        let count = 129;
        let out = lo_square_function(&e, &phi, delta, count).unwrap();
        let expect: f64 = trapezoid(0.5, 2.0, count).iter().map(|(t, w)| w * phi.eval((t - s) / delta).powi(2)).sum();
        for v in out.values() {
            assert!((v.re * v.re - expect).abs() < 1e-12);
        }
        let zero = GridFunction::constant(2, n, l, 0.0).unwrap();
        assert!(lo_square_function(&zero, &phi, delta, count).unwrap().values().iter().all(|v| v.re == 0.0));
        assert!(matches!(lo_square_function(&e, &phi, delta, 10), Err(Error::UnderResolved(_))));
    }

    #[test]
    fn lo_square_plancherel_bound() {
        let (n, l) = (16, 8.0);
        for (pi, phi) in profile_corpus().unwrap().iter().enumerate() {
            let f = random(pi as u64, n, l);
            for j in 2..=5 {
                let delta = libm::ldexp(1.0, -j);
                let count = min_samples(LO_SAMPLES_PER_INV_DELTA, delta) + 1;
                let sf = lo_square_function(&f, phi, delta, count).unwrap();
                let lhs = sf.lp_norm(0.5);
                let freq = libm::sqrt(lo_square_energy(&f, phi, delta, count).unwrap());
                assert!((lhs - freq).abs() < 1e-10 * freq.max(1e-300));
                assert!(lhs <= libm::sqrt(2.0 * delta) * f.lp_norm(0.5));
            }
        }
    }

    #[test]
    fn rho_windows() {
        for u in [0.0, 0.3, 0.5, 1.99, 2.0, 2.3] {
            let c = active_rho_indices(u, 0.125).count();
            assert!(c <= 3);
        }
        assert_eq!(active_rho_indices(0.5, 0.125).collect::<Vec<_>>(), [4]);
        assert_eq!(active_rho_indices(5.0, 0.125).count(), 0);
    }

    #[test]
    fn mixed_square_basics() {
        let phi = profile_corpus().unwrap()[0].clone();
        let (n, l) = (8, 8.0);
        let zero = GridFunction::constant(2, n, l, 0.0).unwrap();
        let out = mixed_square_function(&zero, &phi, 0.125, (0, 1), 256).unwrap();
        assert!(out.sup.values().iter().all(|v| v.re == 0.0));
        let e = mode(n, l, [3, 1]);
        let out = mixed_square_function(&e, &phi, 0.125, (-1, 2), 256).unwrap();
        assert_eq!(out.modes, 1);
        let first = out.sup.values()[0].re;
        assert!(first > 0.0);
        assert!(out.sup.values().iter().all(|v| (v.re - first).abs() < 1e-12));
        for (_, s) in &out.slices {
            assert!(s.values().iter().zip(out.sup.values()).all(|(a, b)| a.re <= b.re));
        }
        assert!(matches!(mixed_square_function(&e, &phi, 0.125, (0, 0), 100), Err(Error::UnderResolved(_))));
    }
}
