//! Periodic sampled functions on `[-L/2, L/2)^d`, their norms, off-grid
//! sampling, dyadic rescaling and Fourier multipliers.
//!
//! Transform convention: `f̂(ξ) = h^d Σ_x f(x) e^{-2πi x·ξ}` on the lattice
//! `ξ ∈ (1/L)·{-n/2, …, n/2-1}^d`, inverted by `f(x) = L^{-d} Σ_ξ f̂(ξ) e^{2πi x·ξ}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::{transform_nd, Fft};
use crate::sum::{pairwise_map, PairwiseAcc};
use crate::{Error, Result};

/// Where a grid function can be nonzero, as seen by the off-grid sampler.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Support {
    /// Nonzero data reaches the box boundary; treated as genuinely periodic.
    Periodic,
    /// Identically zero.
    Empty,
    /// Contained in the closed annulus `r_min ≤ |x - center| ≤ r_max`.
    Annulus { center: [f64; 3], r_min: f64, r_max: f64 },
}

/// A complex-valued function sampled on a uniform periodic grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    d: usize,
    n: usize,
    box_length: f64,
    values: Vec<Complex64>,
    support: Support,
}

fn check_shape(d: usize, n: usize, box_length: f64) -> Result<()> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if !(box_length.is_finite() && box_length > 0.0) {
        return Err(Error::InvalidParameter(format!("box length {box_length}")));
    }
    Ok(())
}

/// Signed frequency index for FFT slot `i` on an `n`-point axis.
pub fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl GridFunction {
    pub fn new(d: usize, n: usize, box_length: f64, values: Vec<Complex64>) -> Result<Self> {
        check_shape(d, n, box_length)?;
        let expected = n.pow(d as u32);
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, got: values.len() });
        }
        let mut g = Self { d, n, box_length, values, support: Support::Periodic };
        g.support = g.compute_support();
        Ok(g)
    }

    pub fn from_real(d: usize, n: usize, box_length: f64, values: &[f64]) -> Result<Self> {
        Self::new(d, n, box_length, values.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    /// Sample a closure at every node.
    pub fn from_fn(d: usize, n: usize, box_length: f64, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        check_shape(d, n, box_length)?;
        let len = n.pow(d as u32);
        let h = box_length / n as f64;
        let mut x = [0.0; 3];
        let values = (0..len)
            .map(|idx| {
                node_coords(d, n, box_length, h, idx, &mut x);
                f(&x[..d])
            })
            .collect();
        Self::new(d, n, box_length, values)
    }

    pub fn from_real_fn(d: usize, n: usize, box_length: f64, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(d, n, box_length, |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(d: usize, n: usize, box_length: f64, c: f64) -> Result<Self> {
        Self::new(d, n, box_length, vec![Complex64::new(c, 0.0); n.pow(d as u32)])
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn box_length(&self) -> f64 {
        self.box_length
    }
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }
    pub fn cell_volume(&self) -> f64 {
        libm::pow(self.spacing(), self.d as f64)
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn support(&self) -> Support {
        self.support
    }
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Physical coordinates of node `idx` (row-major, last axis fastest).
    pub fn node(&self, idx: usize) -> [f64; 3] {
        let mut x = [0.0; 3];
        node_coords(self.d, self.n, self.box_length, self.spacing(), idx, &mut x);
        x
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.box_length == other.box_length
    }

    /// Apply a pointwise map to the stored values.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = self.values.iter().map(|v| f(*v)).collect();
        Self::new(self.d, self.n, self.box_length, values).expect("shape preserved")
    }

    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    /// `a·self + b·other` on a shared grid.
    pub fn axpby(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::IncompatibleGrids(format!("{}^{} vs {}^{}", self.n, self.d, other.n, other.d)));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Self::new(self.d, self.n, self.box_length, values)
    }

    /// Cyclic shift by whole cells: the result at node `i` is the input at `i - shift`.
    pub fn roll(&self, shift: &[isize]) -> Self {
        let n = self.n as isize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.values.len()];
        let mut multi = [0usize; 3];
        for (idx, v) in self.values.iter().enumerate() {
            split_index(self.d, self.n, idx, &mut multi);
            let mut target = 0usize;
            for a in 0..self.d {
                let s = shift.get(a).copied().unwrap_or(0);
                target = target * self.n + (multi[a] as isize + s).rem_euclid(n) as usize;
            }
            out[target] = *v;
        }
        Self::new(self.d, self.n, self.box_length, out).expect("shape preserved")
    }

    fn compute_support(&self) -> Support {
        let (d, n) = (self.d, self.n);
        let h = self.spacing();
        let mut lo = [usize::MAX; 3];
        let mut hi = [0usize; 3];
        let mut any = false;
        let mut multi = [0usize; 3];
        for (idx, v) in self.values.iter().enumerate() {
            if *v == Complex64::new(0.0, 0.0) {
                continue;
            }
            any = true;
            split_index(d, n, idx, &mut multi);
            for a in 0..d {
                lo[a] = lo[a].min(multi[a]);
                hi[a] = hi[a].max(multi[a]);
            }
        }
        if !any {
            return Support::Empty;
        }
        if (0..d).any(|a| lo[a] == 0 || hi[a] == n - 1) {
            return Support::Periodic;
        }
        let mut center = [0.0; 3];
        for a in 0..d {
            center[a] = -self.box_length / 2.0 + h * (lo[a] + hi[a]) as f64 / 2.0;
        }
        let (mut r_min, mut r_max) = (f64::INFINITY, 0.0f64);
        for (idx, v) in self.values.iter().enumerate() {
            if *v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let x = self.node(idx);
            let r = libm::sqrt((0..d).map(|a| (x[a] - center[a]) * (x[a] - center[a])).sum::<f64>());
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        // The interpolant is nonzero at most one cell diagonal beyond a nonzero node.
        let margin = h * libm::sqrt(d as f64) * (1.0 + 1e-9);
        Support::Annulus { center, r_min: (r_min - margin).max(0.0), r_max: r_max + margin }
    }

    /// Discrete `L^p` norm with `up = 1/p`; `up = 0` is the sup norm.
    pub fn lp_norm(&self, up: f64) -> f64 {
        lp_norm_of(self.values.iter().map(|v| v.norm()), self.cell_volume(), up)
    }

    /// Discrete Lorentz quasinorm `‖f‖_{L^{p,s}}` with `up = 1/p`, `us = 1/s`,
    /// evaluated exactly on the step-function rearrangement.
    pub fn lorentz_norm(&self, up: f64, us: f64) -> Result<f64> {
        lorentz_norm_of(self.values.iter().map(|v| v.norm()).collect(), self.cell_volume(), up, us)
    }

    /// Periodic multilinear interpolation at an arbitrary point.
    pub fn sample(&self, x: &[f64]) -> Complex64 {
        let n = self.n;
        let inv_h = n as f64 / self.box_length;
        let half = self.box_length / 2.0;
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..self.d {
            let u = (x[a] + half) * inv_h;
            let fl = libm::floor(u);
            frac[a] = u - fl;
            base[a] = (fl as i64).rem_euclid(n as i64) as usize;
        }
        let next = |i: usize| if i + 1 == n { 0 } else { i + 1 };
        match self.d {
            2 => {
                let (i0, j0) = (base[0], base[1]);
                let (i1, j1) = (next(i0), next(j0));
                let (fx, fy) = (frac[0], frac[1]);
                let v = &self.values;
                let a = v[i0 * n + j0] * (1.0 - fy) + v[i0 * n + j1] * fy;
                let b = v[i1 * n + j0] * (1.0 - fy) + v[i1 * n + j1] * fy;
                a * (1.0 - fx) + b * fx
            }
            _ => {
                let idx = [base[0], next(base[0]), base[1], next(base[1]), base[2], next(base[2])];
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..8usize {
                    let (bi, bj, bk) = (c >> 2 & 1, c >> 1 & 1, c & 1);
                    let w = (if bi == 1 { frac[0] } else { 1.0 - frac[0] })
                        * (if bj == 1 { frac[1] } else { 1.0 - frac[1] })
                        * (if bk == 1 { frac[2] } else { 1.0 - frac[2] });
                    if w != 0.0 {
                        let flat = (idx[bi] * n + idx[2 + bj]) * n + idx[4 + bk];
                        acc += self.values[flat] * w;
                    }
                }
                acc
            }
        }
    }

    /// Grid representation of `x ↦ f(2^m x)`: same values on a box of side `L/2^m`.
    pub fn rescale(&self, m: i32) -> Result<Self> {
        if m.abs() > 60 {
            return Err(Error::InvalidParameter(format!("dyadic power {m} breaks commensurability")));
        }
        let l = self.box_length / libm::ldexp(1.0, m);
        if !(l.is_normal() && l > 0.0) {
            return Err(Error::InvalidParameter(format!("rescaled box length {l}")));
        }
        Self::new(self.d, self.n, l, self.values.clone())
    }

    /// Forward transform in the physical convention.
    pub fn fourier_transform(&self) -> Spectrum {
        let plan = Fft::new(self.n).expect("validated at construction");
        let mut coeffs = self.values.clone();
        transform_nd(&plan, self.d, &mut coeffs, false);
        let hd = self.cell_volume();
        let mut multi = [0usize; 3];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            split_index(self.d, self.n, idx, &mut multi);
            // e^{-2πi(-L/2)ξ} = (-1)^k per axis.
            let parity: usize = multi[..self.d].iter().sum();
            *c *= if parity.is_multiple_of(2) { hd } else { -hd };
        }
        Spectrum { d: self.d, n: self.n, box_length: self.box_length, coeffs }
    }

    /// `T_m f = F^{-1}[m F f]` for a complex multiplier on physical frequencies.
    pub fn apply_fourier_multiplier(&self, m: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut spec = self.fourier_transform();
        spec.multiply(m);
        spec.inverse()
    }

    /// Real-multiplier shortcut for [`Self::apply_fourier_multiplier`].
    pub fn apply_real_multiplier(&self, m: impl Fn(&[f64]) -> f64) -> Self {
        self.apply_fourier_multiplier(|xi| Complex64::new(m(xi), 0.0))
    }
}

/// Fourier coefficients on the lattice `(1/L)·{-n/2..n/2-1}^d`, stored in
/// FFT slot order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub d: usize,
    pub n: usize,
    pub box_length: f64,
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Physical frequency of slot `idx`.
    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let mut multi = [0usize; 3];
        split_index(self.d, self.n, idx, &mut multi);
        let mut xi = [0.0; 3];
        for a in 0..self.d {
            xi[a] = signed_index(multi[a], self.n) as f64 / self.box_length;
        }
        xi
    }

    pub fn multiply(&mut self, m: impl Fn(&[f64]) -> Complex64) {
        for idx in 0..self.coeffs.len() {
            let xi = self.frequency(idx);
            self.coeffs[idx] *= m(&xi[..self.d]);
        }
    }

    /// `L^{-d} Σ |f̂|²`, equal to `h^d Σ |f|²` by Parseval.
    pub fn energy(&self) -> f64 {
        pairwise_map(self.coeffs.iter(), |c| c.norm_sqr()) / libm::pow(self.box_length, self.d as f64)
    }

    pub fn inverse(&self) -> GridFunction {
        let plan = Fft::new(self.n).expect("power of two");
        let mut vals = self.coeffs.clone();
        let mut multi = [0usize; 3];
        let scale = 1.0 / libm::pow(self.box_length, self.d as f64);
        for (idx, c) in vals.iter_mut().enumerate() {
            split_index(self.d, self.n, idx, &mut multi);
            let parity: usize = multi[..self.d].iter().sum();
            *c *= if parity.is_multiple_of(2) { scale } else { -scale };
        }
        transform_nd(&plan, self.d, &mut vals, true);
        GridFunction::new(self.d, self.n, self.box_length, vals).expect("shape preserved")
    }
}

/// Reciprocal-exponent description of a Lebesgue/Lorentz estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentPoint {
    pub d: usize,
    pub up: f64,
    pub uq: f64,
    pub ur: f64,
    /// Secondary Lorentz index of the first input, as a reciprocal.
    pub lorentz_s: Option<f64>,
    pub lorentz_t: Option<f64>,
    pub lorentz_u: Option<f64>,
    pub holder: bool,
}

/// Tolerance for treating exponent relations as equalities.
pub const EXPONENT_TOL: f64 = 1e-12;

impl ExponentPoint {
    pub fn new(d: usize, up: f64, uq: f64, ur: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&up) || !(0.0..=1.0).contains(&uq) || !(ur >= 0.0 && ur.is_finite()) {
            return Err(Error::InvalidParameter(format!("exponents ({up}, {uq}, {ur}) out of range")));
        }
        if d < 2 {
            return Err(Error::UnsupportedDimension(d));
        }
        let holder = (up + uq - ur).abs() <= EXPONENT_TOL;
        Ok(Self { d, up, uq, ur, lorentz_s: None, lorentz_t: None, lorentz_u: None, holder })
    }

    pub fn with_lorentz(mut self, us: Option<f64>, ut: Option<f64>, uu: Option<f64>) -> Self {
        self.lorentz_s = us;
        self.lorentz_t = ut;
        self.lorentz_u = uu;
        self
    }

    /// `1/r - 1/p - 1/q`.
    pub fn holder_defect(&self) -> f64 {
        self.ur - self.up - self.uq
    }

    pub fn swapped(&self) -> Self {
        let mut s = *self;
        core::mem::swap(&mut s.up, &mut s.uq);
        core::mem::swap(&mut s.lorentz_s, &mut s.lorentz_t);
        s
    }
}

pub(crate) fn split_index(d: usize, n: usize, mut idx: usize, out: &mut [usize; 3]) {
    for a in (0..d).rev() {
        out[a] = idx % n;
        idx /= n;
    }
}

fn node_coords(d: usize, n: usize, box_length: f64, h: f64, idx: usize, out: &mut [f64; 3]) {
    let mut multi = [0usize; 3];
    split_index(d, n, idx, &mut multi);
    for a in 0..d {
        out[a] = -box_length / 2.0 + h * multi[a] as f64;
    }
}

/// `L^p` norm of nonnegative cell values each carrying measure `cell`.
pub fn lp_norm_of(abs_values: impl Iterator<Item = f64>, cell: f64, up: f64) -> f64 {
    if up == 0.0 {
        return abs_values.fold(0.0, f64::max);
    }
    let p = 1.0 / up;
    let mut acc = PairwiseAcc::new();
    for v in abs_values {
        acc.push(if p == 1.0 { v } else if p == 2.0 { v * v } else { libm::pow(v, p) });
    }
    libm::pow(cell * acc.total(), up)
}

/// Lorentz quasinorm of nonnegative cell values.
pub fn lorentz_norm_of(mut abs_values: Vec<f64>, cell: f64, up: f64, us: f64) -> Result<f64> {
    if !(up > 0.0 && up <= 1.0) {
        return Err(Error::InvalidParameter(format!("Lorentz norm needs 0 < 1/p ≤ 1, got {up}")));
    }
    if !(us >= 0.0 && us.is_finite()) {
        return Err(Error::InvalidParameter(format!("secondary index 1/s = {us}")));
    }
    abs_values.sort_unstable_by(|a, b| b.total_cmp(a));
    if us == 0.0 {
        let mut best = 0.0f64;
        for (k, v) in abs_values.iter().enumerate() {
            best = best.max(libm::pow(cell * (k + 1) as f64, up) * v);
        }
        return Ok(best);
    }
    // ∫ (t^{1/p} f*(t))^s dt/t over each step = f*_k^s (p/s)(μ_k^{s/p} - μ_{k-1}^{s/p}).
    let s = 1.0 / us;
    let e = s * up;
    let mut acc = PairwiseAcc::new();
    let mut prev = 0.0;
    for (k, v) in abs_values.iter().enumerate() {
        if *v == 0.0 {
            break;
        }
        let next = libm::pow(cell * (k + 1) as f64, e);
        acc.push(libm::pow(*v, s) * (next - prev));
        prev = next;
    }
    Ok(libm::pow(acc.total() / e, us))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(seed: u64, d: usize, n: usize, l: f64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n.pow(d as u32)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        GridFunction::from_real(d, n, l, &vals).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(GridFunction::constant(4, 8, 1.0, 1.0).unwrap_err(), Error::UnsupportedDimension(4));
        assert_eq!(GridFunction::constant(2, 12, 1.0, 1.0).unwrap_err(), Error::NotPowerOfTwo(12));
        assert!(matches!(
            GridFunction::new(2, 4, 1.0, vec![Complex64::new(0.0, 0.0); 15]),
            Err(Error::LengthMismatch { expected: 16, got: 15 })
        ));
    }

    #[test]
    fn lp_norm_examples() {
        let one = GridFunction::constant(2, 16, 1.0, 1.0).unwrap();
        assert!((one.lp_norm(0.5) - 1.0).abs() < 1e-14);
        let half = GridFunction::from_real_fn(2, 16, 1.0, |x| if x[0] < 0.0 { 1.0 } else { 0.0 }).unwrap();
        assert!((half.lp_norm(1.0) - 0.5).abs() < 1e-14);
        assert_eq!(half.lp_norm(0.0), 1.0);
    }

    #[test]
    fn lp_norm_matches_sorted_resummation() {
        let f = random_grid(3, 2, 32, 2.0);
        let mut sq: Vec<f64> = f.values().iter().map(|v| v.norm_sqr()).collect();
        sq.sort_by(|a, b| a.total_cmp(b));
        let mut s = 0.0;
        for v in sq {
            s += v;
        }
        let oracle = libm::sqrt(s * f.cell_volume());
        assert!((f.lp_norm(0.5) - oracle).abs() / oracle < 1e-12);
    }

    #[test]
    fn lorentz_indicator_and_diagonal() {
        let f = GridFunction::from_real_fn(2, 16, 2.0, |x| if x[0] * x[0] + x[1] * x[1] < 0.4 { 1.0 } else { 0.0 })
            .unwrap();
        let m = f.values().iter().filter(|v| v.re == 1.0).count() as f64 * f.cell_volume();
        assert!((f.lorentz_norm(0.5, 0.0).unwrap() - libm::sqrt(m)).abs() < 1e-14);
        assert!((f.lorentz_norm(0.5, 0.5).unwrap() - libm::sqrt(m)).abs() < 1e-12);
        let g = random_grid(5, 2, 16, 3.0);
        for up in [1.0, 0.5, 0.25] {
            let a = g.lorentz_norm(up, up).unwrap();
            let b = g.lp_norm(up);
            assert!((a - b).abs() / b < 1e-10, "{up}: {a} vs {b}");
        }
        assert!(g.lorentz_norm(0.0, 0.5).is_err());
    }

    #[test]
    fn sample_reproduces_nodes_and_constants() {
        let f = random_grid(7, 2, 16, 4.0);
        for idx in [0usize, 5, 100, 255] {
            let x = f.node(idx);
            assert!((f.sample(&x[..2]) - f.values()[idx]).norm() < 1e-14);
        }
        let c = GridFunction::constant(3, 8, 2.0, 2.5).unwrap();
        assert!((c.sample(&[0.123, -0.77, 0.9]).re - 2.5).abs() < 1e-14);
        let f3 = random_grid(8, 3, 8, 2.0);
        let x = f3.node(77);
        assert!((f3.sample(&x[..3]) - f3.values()[77]).norm() < 1e-14);
    }

    #[test]
    fn sample_error_is_second_order() {
        let gauss = |x: &[f64]| libm::exp(-PI * (x[0] * x[0] + x[1] * x[1]));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pts: Vec<[f64; 2]> = (0..200).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let err = |n: usize| {
            let f = GridFunction::from_real_fn(2, n, 4.0, gauss).unwrap();
            pts.iter().map(|p| (f.sample(p).re - gauss(p)).abs()).fold(0.0, f64::max)
        };
        let ratio = err(64) / err(128);
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rescale_norm_law_and_composition() {
        let f = random_grid(11, 2, 16, 4.0);
        let g = f.rescale(1).unwrap();
        assert!((g.lp_norm(0.5) / f.lp_norm(0.5) - 0.5).abs() < 1e-12);
        let box_ind = GridFunction::from_real_fn(2, 16, 4.0, |x| {
            if x[0].abs() < 0.6 && x[1].abs() < 0.6 { 1.0 } else { 0.0 }
        })
        .unwrap();
        assert!((box_ind.rescale(1).unwrap().lp_norm(1.0) / box_ind.lp_norm(1.0) - 0.25).abs() < 1e-14);
        let twice = f.rescale(1).unwrap().rescale(1).unwrap();
        let direct = f.rescale(2).unwrap();
        assert_eq!(twice.box_length(), direct.box_length());
        assert_eq!(twice.values(), direct.values());
        assert_eq!(f.rescale(0).unwrap().values(), f.values());
        assert!(f.rescale(100).is_err());
    }

    #[test]
    fn multiplier_identity_mean_and_parseval() {
        let f = random_grid(13, 2, 16, 3.0);
        let same = f.apply_real_multiplier(|_| 1.0);
        for (a, b) in same.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        let mean = f.values().iter().map(|v| v.re).sum::<f64>() / f.len() as f64;
        let proj = f.apply_real_multiplier(|xi| if xi.iter().all(|v| *v == 0.0) { 1.0 } else { 0.0 });
        assert!(proj.values().iter().all(|v| (v.re - mean).abs() < 1e-12 && v.im.abs() < 1e-12));
        let e_space = f.lp_norm(0.5).powi(2);
        let e_freq = f.fourier_transform().energy();
        assert!((e_space - e_freq).abs() / e_space < 1e-12);
    }

    #[test]
    fn gaussian_heat_multiplier_at_origin() {
        let f = GridFunction::from_real_fn(2, 64, 16.0, |x| libm::exp(-PI * (x[0] * x[0] + x[1] * x[1]))).unwrap();
        let out = f.apply_real_multiplier(|xi| libm::exp(-(xi[0] * xi[0] + xi[1] * xi[1])));
        // Origin is node (n/2, n/2).
        let v = out.values()[32 * 64 + 32].re;
        let exact = PI / (PI + 1.0);
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
    }

    #[test]
    fn support_detection() {
        let f = GridFunction::from_real_fn(2, 32, 4.0, |x| if x[0] * x[0] + x[1] * x[1] < 0.25 { 1.0 } else { 0.0 })
            .unwrap();
        match f.support() {
            Support::Annulus { center, r_min, r_max } => {
                assert!(center[0].abs() < 1e-12 && center[1].abs() < 1e-12);
                assert_eq!(r_min, 0.0);
                assert!(r_max > 0.5 && r_max < 0.5 + 2.0 * f.spacing());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(GridFunction::constant(2, 8, 1.0, 1.0).unwrap().support(), Support::Periodic);
        assert_eq!(GridFunction::constant(2, 8, 1.0, 0.0).unwrap().support(), Support::Empty);
    }

    #[test]
    fn exponent_point_holder_flag() {
        let e = ExponentPoint::new(2, 0.5, 0.5, 1.0).unwrap();
        assert!(e.holder);
        let e = ExponentPoint::new(2, 0.5, 0.25, 1.0).unwrap();
        assert!(!e.holder);
        assert!((e.holder_defect() - 0.25).abs() < 1e-15);
        assert!(ExponentPoint::new(2, 1.5, 0.0, 1.0).is_err());
    }
}
