//! Linear and bilinear Bochner-Riesz means on the frequency lattice, their
//! dyadic annular pieces, square functions, and the multiplier identities
//! behind them.
//!
//! Bilinear operators are applied by direct pair summation
//! `ĥ(ζ) = Σ_{ξ+η≡ζ} m(ξ,η) f̂(ξ) ĝ(η)`: the sum `ξ + η` is wrapped onto the
//! lattice, which is exact at grid points because every aliased exponential
//! agrees there (n even).

pub mod checks;
pub mod jet;
pub mod profile;
pub mod square;

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::grid::{split_index, GridFunction, Spectrum};
use crate::maximal::RadiusGrid;
use crate::{Error, Result};

pub use profile::{dyadic_profile_decomposition, profile_corpus, riesz_profile, BumpProfile, ProfileDecomposition, Shape};

/// Largest admissible `n^{2d}` for pair summation.
pub const PAIR_BUDGET: u64 = 1 << 24;

/// Where a bilinear multiplier can be nonzero, in terms of `s = |ξ|² + |η|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MultiplierSupport {
    Everywhere,
    /// `s ≤ max`.
    Ball { max: f64 },
    /// `min ≤ s ≤ max`.
    Shell { min: f64, max: f64 },
}

impl MultiplierSupport {
    fn contains(&self, s: f64) -> bool {
        match *self {
            Self::Everywhere => true,
            Self::Ball { max } => s <= max,
            Self::Shell { min, max } => (min..=max).contains(&s),
        }
    }
}

type PairFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// A real multiplier on pairs of physical frequencies.
#[derive(Clone)]
pub struct BilinearMultiplier {
    eval: Arc<PairFn>,
    /// `m(ξ, η) = m(η, ξ)`.
    pub symmetric: bool,
    pub support: MultiplierSupport,
}

impl core::fmt::Debug for BilinearMultiplier {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BilinearMultiplier").field("symmetric", &self.symmetric).field("support", &self.support).finish()
    }
}

fn sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

impl BilinearMultiplier {
    pub fn new(eval: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static, symmetric: bool, support: MultiplierSupport) -> Self {
        Self { eval: Arc::new(eval), symmetric, support }
    }

    pub fn eval(&self, xi: &[f64], eta: &[f64]) -> f64 {
        if !self.support.contains(sq(xi) + sq(eta)) {
            return 0.0;
        }
        (self.eval)(xi, eta)
    }

    /// `(1 - |λξ|² - |λη|²)^α_+`.
    pub fn bochner_riesz(alpha: f64, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        Self::new(move |x, y| riesz_profile(alpha, l2 * (sq(x) + sq(y))), true, MultiplierSupport::Ball { max: 1.0 / l2 })
    }

    /// `ψ((1 - |λξ|² - |λη|²)/δ)` for `ψ` supported in `[1/2, 2]`.
    pub fn annular(psi: &BumpProfile, delta: f64, lambda: f64) -> Result<Self> {
        check_annular_profile(psi, delta)?;
        let l2 = lambda * lambda;
        let p = psi.clone();
        Ok(Self::new(
            move |x, y| p.eval((1.0 - l2 * (sq(x) + sq(y))) / delta),
            true,
            MultiplierSupport::Shell { min: (1.0 - 2.0 * delta) / l2, max: (1.0 - 0.5 * delta) / l2 },
        ))
    }

    /// `∂_t` of the annular multiplier at `λ = t`:
    /// `-2/(tδ) · (|tξ|² + |tη|²) · ψ'((1 - |tξ|² - |tη|²)/δ)`.
    pub fn annular_derivative(psi: &BumpProfile, delta: f64, t: f64) -> Result<Self> {
        check_annular_profile(psi, delta)?;
        let t2 = t * t;
        let p = psi.clone();
        Ok(Self::new(
            move |x, y| {
                let u = t2 * (sq(x) + sq(y));
                -2.0 / (t * delta) * u * p.derivative((1.0 - u) / delta)
            },
            true,
            MultiplierSupport::Shell { min: (1.0 - 2.0 * delta) / t2, max: (1.0 - 0.5 * delta) / t2 },
        ))
    }

    /// `ψ₀(|λξ|² + |λη|²)`, the smooth part left by the dyadic decomposition.
    pub fn smooth_part(psi0: &BumpProfile, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        let p = psi0.clone();
        Self::new(move |x, y| p.eval(l2 * (sq(x) + sq(y))), true, MultiplierSupport::Ball { max: psi0.support.1 / l2 })
    }
}

fn check_annular_profile(psi: &BumpProfile, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 0.25) {
        return Err(Error::InvalidParameter(alloc::format!("δ = {delta} outside (0, 1/4]")));
    }
    if psi.support.0 < 0.5 || psi.support.1 > 2.0 {
        return Err(Error::SupportViolation(alloc::format!("annular profile support {:?} not inside [1/2, 2]", psi.support)));
    }
    Ok(())
}

/// Error unless `n^{2d}` pairs fit the budget.
pub fn check_pair_budget(d: usize, n: usize) -> Result<()> {
    let pairs = (n as u64).checked_pow(2 * d as u32);
    if pairs.is_none_or(|p| p > PAIR_BUDGET) {
        return Err(Error::BudgetExceeded { n, d });
    }
    Ok(())
}

fn same_grid(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if !f.same_grid(g) {
        return Err(Error::IncompatibleGrids("bilinear inputs must share a grid".into()));
    }
    Ok(())
}

/// Lattice frequencies of every FFT slot.
pub(crate) fn frequencies(spec: &Spectrum) -> Vec<[f64; 3]> {
    (0..spec.coeffs.len()).map(|i| spec.frequency(i)).collect()
}

/// Pair-summed spectrum `Σ_{ξ+η≡ζ} m(ξ,η) f̂(ξ) ĝ(η)` (slot order), before
/// any normalization.
pub fn bilinear_spectrum(f: &GridFunction, g: &GridFunction, m: &BilinearMultiplier) -> Result<Spectrum> {
    same_grid(f, g)?;
    let (d, n) = (f.d(), f.n());
    check_pair_budget(d, n)?;
    let fs = f.fourier_transform();
    let gs = g.fourier_transform();
    let freq = frequencies(&fs);
    let mut multi = alloc::vec![[0usize; 3]; fs.coeffs.len()];
    for (i, slot) in multi.iter_mut().enumerate() {
        split_index(d, n, i, slot);
    }
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); fs.coeffs.len()];
    for (i, fc) in fs.coeffs.iter().enumerate() {
        if *fc == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, gc) in gs.coeffs.iter().enumerate() {
            if *gc == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = m.eval(&freq[i][..d], &freq[j][..d]);
            if w == 0.0 {
                continue;
            }
            let mut z = 0usize;
            for a in 0..d {
                z = z * n + (multi[i][a] + multi[j][a]) % n;
            }
            out[z] += fc * gc * w;
        }
    }
    Ok(Spectrum { d, n, box_length: f.box_length(), coeffs: out })
}

/// `T_m(f, g)(x) = ∬ e^{2πix·(ξ+η)} m(ξ,η) f̂(ξ) ĝ(η) dξ dη` on the grid.
pub fn apply_bilinear(f: &GridFunction, g: &GridFunction, m: &BilinearMultiplier) -> Result<GridFunction> {
    let mut spec = bilinear_spectrum(f, g, m)?;
    let scale = 1.0 / libm::pow(f.box_length(), f.d() as f64);
    spec.coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(spec.inverse())
}

/// `ℛ^α_λ f`, multiplier `(1 - |λξ|²)^α_+`.
pub fn br_linear(f: &GridFunction, alpha: f64, lambda: f64) -> Result<GridFunction> {
    check_alpha_lambda(alpha, lambda)?;
    let l2 = lambda * lambda;
    Ok(f.apply_real_multiplier(|xi| riesz_profile(alpha, l2 * sq(xi))))
}

fn check_alpha_lambda(alpha: f64, lambda: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite() && lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("α = {alpha}, λ = {lambda}")));
    }
    Ok(())
}

/// `𝓑^α_λ(f, g)`.
pub fn br_bilinear(f: &GridFunction, g: &GridFunction, alpha: f64, lambda: f64) -> Result<GridFunction> {
    check_alpha_lambda(alpha, lambda)?;
    apply_bilinear(f, g, &BilinearMultiplier::bochner_riesz(alpha, lambda))
}

/// Pointwise `sup_λ |𝓑^α_λ(f, g)|` over the grid, with the maximizing `λ`.
pub fn br_bilinear_maximal(f: &GridFunction, g: &GridFunction, alpha: f64, lambdas: &RadiusGrid) -> Result<(GridFunction, Vec<f64>)> {
    same_grid(f, g)?;
    check_pair_budget(f.d(), f.n())?;
    let mut best = alloc::vec![0.0f64; f.len()];
    let mut arg = alloc::vec![f64::NAN; f.len()];
    for lambda in lambdas.radii() {
        let out = br_bilinear(f, g, alpha, lambda)?;
        for (i, v) in out.values().iter().enumerate() {
            let a = v.norm();
            if arg[i].is_nan() || a > best[i] {
                best[i] = a;
                arg[i] = lambda;
            }
        }
    }
    let vals = best.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    Ok((GridFunction::new(f.d(), f.n(), f.box_length(), vals)?, arg))
}

/// `𝔅^δ_λ(f, g)`: the bilinear operator with multiplier
/// `ψ((1 - |λξ|² - |λη|²)/δ)`.
pub fn annular_bilinear(f: &GridFunction, g: &GridFunction, delta: f64, lambda: f64, psi: &BumpProfile) -> Result<GridFunction> {
    apply_bilinear(f, g, &BilinearMultiplier::annular(psi, delta, lambda)?)
}

/// `S^φ_{ρ,δ,λ} f`, multiplier `φ((ρ - |λξ|²)/δ)`; `φ` must be certified in
/// `𝒞^N([-1,1])`.
pub fn s_op(f: &GridFunction, phi: &BumpProfile, rho: f64, delta: f64, lambda: f64) -> Result<GridFunction> {
    phi.require_unit_class(0)?;
    if !(delta > 0.0 && lambda > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("δ = {delta}, λ = {lambda}")));
    }
    let l2 = lambda * lambda;
    Ok(f.apply_real_multiplier(|xi| phi.eval((rho - l2 * sq(xi)) / delta)))
}
