//! Smooth compactly supported profiles and their certified `C^N` norms.

use alloc::vec::Vec;

use super::jet::{Jet, Scalar, JET_LEN};
use crate::{Error, Result};

/// Sample count for sup-norm certification.
pub const CERT_SAMPLES: usize = 1 << 14;
/// Default derivative order certified for every profile.
pub const DEFAULT_CN: usize = 4;
/// Truncation level used when none is given.
pub const DEFAULT_TRUNCATION: u32 = 10;

/// `e^{-1/u}` for `u > 0`, zero otherwise (flat at 0 to every order).
fn flat_exp<T: Scalar>(u: T) -> T {
    // Below 1/700 the value and all derivatives underflow to zero.
    if u.value() <= 1.0 / 700.0 {
        T::cst(0.0)
    } else {
        (-(T::cst(1.0) / u)).exp()
    }
}

/// Smooth step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, and `S(u) + S(1-u) = 1`.
pub fn smooth_step<T: Scalar>(u: T) -> T {
    let v = u.value();
    if v <= 0.0 {
        T::cst(0.0)
    } else if v >= 1.0 {
        T::cst(1.0)
    } else {
        let a = flat_exp(u);
        let b = flat_exp(T::cst(1.0) - u);
        a / (a + b)
    }
}

/// `Θ(s) = S(2 - s)`: 1 on `s ≤ 1`, 0 on `s ≥ 2`.
fn cutoff<T: Scalar>(s: T) -> T {
    smooth_step(T::cst(2.0) - s)
}

/// Dyadic partition piece `Θ(s) - Θ(2s)`, supported in `[1/2, 2]`, with
/// `Σ_{j∈ℤ} χ(2^j s) = 1` for `s > 0`.
fn dyadic_piece<T: Scalar>(s: T) -> T {
    cutoff(s) - cutoff(s.scale(2.0))
}

fn bump<T: Scalar>(t: T) -> T {
    if t.value().abs() >= 1.0 {
        return T::cst(0.0);
    }
    let q = T::cst(1.0) - t * t;
    if q.value() <= 1.0 / 700.0 {
        return T::cst(0.0);
    }
    (T::cst(1.0) - T::cst(1.0) / q).exp()
}

/// Named profile shapes; evaluation is generic over [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Shape {
    /// `S(1 - |t|)`: integer translates sum to one.
    Partition,
    /// `exp(1 - 1/(1-t²))`.
    Bump,
    /// 1 on `|t| ≤ 1/2`, 0 on `|t| ≥ 1`.
    FlatTop,
    /// `Bump(2t)`.
    Narrow,
    /// `t·Bump(t)`.
    OddBump,
    /// `s^α χ(s)` on `[1/2, 2]`.
    DyadicPiece { alpha: f64 },
    /// Smooth remainder `(1-t)^α (1 - Θ(4(1-t)))`, cut off smoothly on
    /// `[-3/4, 0]` so it is compactly supported in `[-3/4, 3/4]`.
    Remainder { alpha: f64 },
}

impl Shape {
    pub fn eval<T: Scalar>(&self, t: T) -> T {
        match *self {
            Shape::Partition => smooth_step(T::cst(1.0) - t.abs()),
            Shape::Bump => bump(t),
            Shape::FlatTop => smooth_step((T::cst(1.0) - t.abs()).scale(2.0)),
            Shape::Narrow => bump(t.scale(2.0)),
            Shape::OddBump => t * bump(t),
            Shape::DyadicPiece { alpha } => {
                if t.value() <= 0.5 || t.value() >= 2.0 {
                    T::cst(0.0)
                } else {
                    t.powf(alpha) * dyadic_piece(t)
                }
            }
            Shape::Remainder { alpha } => {
                let v = t.value();
                if v >= 0.75 || v <= -0.75 {
                    return T::cst(0.0);
                }
                let s = T::cst(1.0) - t;
                let left = smooth_step((t + T::cst(0.75)).scale(4.0 / 3.0));
                s.powf(alpha) * (T::cst(1.0) - cutoff(s.scale(4.0))) * left
            }
        }
    }

    /// Closed interval outside which the shape vanishes identically.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Shape::Narrow => (-0.5, 0.5),
            Shape::DyadicPiece { .. } => (0.5, 2.0),
            Shape::Remainder { .. } => (-0.75, 0.75),
            _ => (-1.0, 1.0),
        }
    }
}

/// A shape times an amplitude, with certified derivative sup-norms.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BumpProfile {
    pub shape: Shape,
    pub amplitude: f64,
    pub support: (f64, f64),
    /// `max |φ^{(k)}|` for `k = 0..=N`, over the certification samples.
    pub certified_cn: Vec<f64>,
}

impl BumpProfile {
    pub fn new(shape: Shape, order: usize) -> Result<Self> {
        Self::with_amplitude(shape, 1.0, order)
    }

    pub fn with_amplitude(shape: Shape, amplitude: f64, order: usize) -> Result<Self> {
        if order >= JET_LEN {
            return Err(Error::InvalidParameter(alloc::format!("C^{order} exceeds the jet length {JET_LEN}")));
        }
        let support = shape.support();
        let mut cn = alloc::vec![0.0f64; order + 1];
        let (lo, hi) = support;
        for i in 0..=CERT_SAMPLES {
            let t = lo + (hi - lo) * i as f64 / CERT_SAMPLES as f64;
            let j = shape.eval(Jet::var(t));
            for (k, slot) in cn.iter_mut().enumerate() {
                *slot = slot.max((amplitude * j.derivative(k)).abs());
            }
        }
        Ok(Self { shape, amplitude, support, certified_cn: cn })
    }

    /// Same shape rescaled so the certified `C^N` norm is exactly 1.
    pub fn normalized(&self) -> Self {
        let norm = self.cn_norm();
        let s = if norm > 0.0 { 1.0 / norm } else { 1.0 };
        Self {
            shape: self.shape,
            amplitude: self.amplitude * s,
            support: self.support,
            certified_cn: self.certified_cn.iter().map(|v| v * s).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.certified_cn.len() - 1
    }

    pub fn cn_norm(&self) -> f64 {
        self.certified_cn.iter().copied().fold(0.0, f64::max)
    }

    /// Member of `𝒞^N([-1,1])`: support inside `[-1,1]` and `‖φ‖_{C^N} ≤ 1`.
    pub fn in_unit_class(&self) -> bool {
        self.support.0 >= -1.0 && self.support.1 <= 1.0 && self.cn_norm() <= 1.0 + 1e-12
    }

    pub fn require_unit_class(&self, min_order: usize) -> Result<()> {
        if !self.in_unit_class() || self.order() < min_order {
            return Err(Error::Uncertified(alloc::format!(
                "{:?}: support {:?}, C^{} norm {}",
                self.shape,
                self.support,
                self.order(),
                self.cn_norm()
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.support.0 || t >= self.support.1 {
            return 0.0;
        }
        self.amplitude * self.shape.eval(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        if t <= self.support.0 || t >= self.support.1 {
            return 0.0;
        }
        self.amplitude * self.shape.eval(Jet::var(t)).derivative(1)
    }

    /// `∫ φ²`, by the trapezoid rule on the certification samples.
    pub fn l2_squared(&self) -> f64 {
        let (lo, hi) = self.support;
        let h = (hi - lo) / CERT_SAMPLES as f64;
        (0..=CERT_SAMPLES).map(|i| { let v = self.eval(lo + h * i as f64); v * v }).sum::<f64>() * h
    }
}

/// Five normalized `𝒞^4([-1,1])` profiles of different shapes.
pub fn profile_corpus() -> Result<Vec<BumpProfile>> {
    [Shape::Partition, Shape::Bump, Shape::FlatTop, Shape::Narrow, Shape::OddBump]
        .into_iter()
        .map(|s| Ok(BumpProfile::new(s, DEFAULT_CN)?.normalized()))
        .collect()
}

/// Outcome of the dyadic decomposition of `(1-t)^α_+`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionReport {
    pub alpha: f64,
    pub truncation: u32,
    /// Sup residual over all sampled `t ∈ [0, 1]`.
    pub residual: f64,
    /// Sup residual over sampled `t` with `1 - t ≥ 2^{-J}`.
    pub residual_resolved: f64,
    /// `2^{-Jα}`.
    pub bound: f64,
    pub samples: usize,
}

/// Decomposition pieces for one `α`.
#[derive(Clone, Debug)]
pub struct ProfileDecomposition {
    pub psi: BumpProfile,
    pub psi0: BumpProfile,
    pub report: DecompositionReport,
}

impl ProfileDecomposition {
    /// `Σ_{j=2}^{J} 2^{-jα} ψ(2^j (1-t)) + ψ₀(t)`.
    pub fn partial_sum(&self, t: f64, truncation: u32) -> f64 {
        partial_sum(&self.psi, &self.psi0, self.report.alpha, truncation, t)
    }
}

fn partial_sum(psi: &BumpProfile, psi0: &BumpProfile, alpha: f64, truncation: u32, t: f64) -> f64 {
    let s = 1.0 - t;
    let mut acc = psi0.eval(t);
    for j in 2..=truncation as i32 {
        acc += libm::pow(2.0, -(j as f64) * alpha) * psi.eval(libm::ldexp(s, j));
    }
    acc
}

/// `(1-t)^α_+` for `t ≥ 0`.
pub fn riesz_profile(alpha: f64, t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else {
        libm::pow(1.0 - t, alpha)
    }
}

/// Build `ψ = s^α χ(s)` and `ψ₀`, then measure the truncation residual on a
/// dense sample of `[0, 1]` (uniform plus geometric toward `t = 1`).
pub fn dyadic_profile_decomposition(alpha: f64, truncation: u32) -> Result<ProfileDecomposition> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("α = {alpha} must be positive")));
    }
    if !(4..=60).contains(&truncation) {
        return Err(Error::InvalidParameter(alloc::format!("truncation J = {truncation} outside [4, 60]")));
    }
    let psi = BumpProfile::new(Shape::DyadicPiece { alpha }, DEFAULT_CN)?;
    let psi0 = BumpProfile::new(Shape::Remainder { alpha }, DEFAULT_CN)?;
    let bound = libm::pow(2.0, -(truncation as f64) * alpha);
    let floor = libm::ldexp(1.0, -(truncation as i32));
    let mut ts: Vec<f64> = (0..=4096).map(|i| i as f64 / 4096.0).collect();
    for i in 0..=4096 {
        ts.push(1.0 - libm::pow(2.0, -(truncation as f64 + 4.0) * i as f64 / 4096.0));
    }
    let (mut residual, mut resolved) = (0.0f64, 0.0f64);
    for &t in &ts {
        let r = (riesz_profile(alpha, t) - partial_sum(&psi, &psi0, alpha, truncation, t)).abs();
        residual = residual.max(r);
        if 1.0 - t >= floor {
            resolved = resolved.max(r);
        }
    }
    let report = DecompositionReport { alpha, truncation, residual, residual_resolved: resolved, bound, samples: ts.len() };
    if residual > bound * (1.0 + 1e-12) || resolved > 1e-10 {
        return Err(Error::CheckFailed(alloc::format!("decomposition residual {residual} (resolved {resolved}) vs {bound}")));
    }
    Ok(ProfileDecomposition { psi, psi0, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_symmetry() {
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            assert!((smooth_step(u) + smooth_step(1.0 - u) - 1.0).abs() < 1e-15);
        }
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.1), 1.0);
    }

    #[test]
    fn partition_of_unity() {
        let p = Shape::Partition;
        for i in 0..=1000 {
            let t = -3.0 + 6.0 * i as f64 / 1000.0;
            let s: f64 = (-5..=5).map(|k| if (t + k as f64).abs() < 1.0 { p.eval(t + k as f64) } else { 0.0 }).sum();
            assert!((s - 1.0).abs() < 1e-12, "{t} {s}");
        }
    }

    #[test]
    fn supports_vanish_exactly() {
        for shape in [Shape::Partition, Shape::Bump, Shape::FlatTop, Shape::Narrow, Shape::OddBump, Shape::DyadicPiece { alpha: 0.5 }, Shape::Remainder { alpha: 1.0 }] {
            let p = BumpProfile::new(shape, 4).unwrap();
            let (lo, hi) = p.support;
            for t in [lo, hi, lo - 0.3, hi + 0.3] {
                assert_eq!(p.eval(t), 0.0);
                assert_eq!(shape.eval(t), 0.0, "{shape:?} at {t}");
            }
        }
    }

    #[test]
    fn corpus_is_certified() {
        let corpus = profile_corpus().unwrap();
        assert_eq!(corpus.len(), 5);
        for p in &corpus {
            assert!(p.in_unit_class());
            assert!((p.cn_norm() - 1.0).abs() < 1e-12);
            assert!(p.certified_cn[0] > 0.0);
        }
        let raw = BumpProfile::new(Shape::Bump, 4).unwrap();
        assert_eq!(raw.certified_cn[0], 1.0);
        assert!(raw.require_unit_class(4).is_err());
    }

    #[test]
    fn derivative_certificate_matches_differences() {
        let p = BumpProfile::new(Shape::Bump, 2).unwrap();
        let h = 1e-4;
        let mut fd = 0.0f64;
        for i in 1..2000 {
            let t = -1.0 + 2.0 * i as f64 / 2000.0;
            fd = fd.max(((p.eval(t + h) - p.eval(t - h)) / (2.0 * h)).abs());
        }
        assert!((fd - p.certified_cn[1]).abs() < 1e-3 * p.certified_cn[1]);
    }

    #[test]
    fn decomposition_examples() {
        let dec = dyadic_profile_decomposition(1.0, 12).unwrap();
        assert!((dec.partial_sum(0.0, 12) - 1.0).abs() <= libm::pow(2.0, -12.0));
        assert_eq!(dec.partial_sum(1.0, 12), 0.0);
        let half = dyadic_profile_decomposition(0.5, 10).unwrap();
        assert!((riesz_profile(0.5, 0.3) - half.partial_sum(0.3, 10)).abs() <= libm::pow(2.0, -5.0));
        for alpha in [0.5, 1.0, 2.0] {
            let r = dyadic_profile_decomposition(alpha, 10).unwrap().report;
            assert!(r.residual <= 2.0 * r.bound);
            assert!(r.residual_resolved <= 1e-10);
        }
        assert!(dyadic_profile_decomposition(0.0, 10).is_err());
        assert!(dyadic_profile_decomposition(1.0, 3).is_err());
    }
}
