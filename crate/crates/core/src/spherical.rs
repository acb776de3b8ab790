//! Linear, bilinear and k-linear spherical averages at a fixed radius.
//!
//! The bilinear average over `S^{2d-1}` is computed either directly with a
//! rule on `S^{2d-1}` or by slicing: a ball integral over the first factor of
//! sphere integrals over the second, with the density `(1-|y|²)^{(d-2)/2}`
//! folded into the ball weights. Inner sphere integrals depend on `|y|` only,
//! so the sliced sum is organized shell by shell.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::{GridFunction, Spectrum, Support};
use crate::quadrature::{self, BallRule, SphereRule};
use crate::sum::PairwiseAcc;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Anything that can be evaluated at an arbitrary point of `ℝ^d`.
pub trait PointEval {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Complex64;
    /// Region outside which `eval` is exactly zero.
    fn support(&self) -> Support {
        Support::Periodic
    }
    /// Period of the underlying box, when evaluation wraps.
    fn period(&self) -> Option<f64> {
        None
    }
}

impl PointEval for GridFunction {
    fn dim(&self) -> usize {
        self.d()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        self.sample(x)
    }
    fn support(&self) -> Support {
        GridFunction::support(self)
    }
    fn period(&self) -> Option<f64> {
        Some(self.box_length())
    }
}

/// Closed-form function, evaluated exactly (no grid, no wrap).
pub struct Analytic<F> {
    d: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> Analytic<F> {
    pub fn new(d: usize, f: F) -> Self {
        Self { d, f }
    }
}

impl<F: Fn(&[f64]) -> f64> PointEval for Analytic<F> {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        Complex64::new((self.f)(x), 0.0)
    }
}

/// Exact trigonometric interpolant of a band-limited grid function: the
/// nonzero Fourier modes are kept and summed at the requested point.
#[derive(Clone, Debug)]
pub struct SpectralInterpolant {
    d: usize,
    box_length: f64,
    modes: Vec<([f64; 3], Complex64)>,
}

impl SpectralInterpolant {
    /// Keep modes with `|f̂| > rel_tol·max|f̂|`.
    pub fn from_grid(f: &GridFunction, rel_tol: f64) -> Self {
        Self::from_spectrum(&f.fourier_transform(), rel_tol)
    }

    pub fn from_spectrum(spec: &Spectrum, rel_tol: f64) -> Self {
        let max = spec.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let scale = 1.0 / libm::pow(spec.box_length, spec.d as f64);
        let modes = spec
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > rel_tol * max)
            .map(|(idx, c)| (spec.frequency(idx), c * scale))
            .collect();
        Self { d: spec.d, box_length: spec.box_length, modes }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }
}

impl PointEval for SpectralInterpolant {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut acc = PairwiseAcc::new();
        for (xi, c) in &self.modes {
            let phase: f64 = 2.0 * PI * (0..self.d).map(|a| x[a] * xi[a]).sum::<f64>();
            acc.push(c * Complex64::new(libm::cos(phase), libm::sin(phase)));
        }
        acc.total()
    }
    fn period(&self) -> Option<f64> {
        Some(self.box_length)
    }
}

/// Whether integrands see `f` itself or `|f|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Signed,
    Abs,
}

#[inline]
fn value<F: PointEval + ?Sized>(f: &F, x: &[f64], mode: Mode) -> Complex64 {
    let v = f.eval(x);
    match mode {
        Mode::Signed => v,
        Mode::Abs => Complex64::new(v.norm(), 0.0),
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>())
}

/// Error unless the closed ball `B(x, radius)` misses every nonzero periodic
/// image of the support of `f`.
pub fn check_wrap<F: PointEval + ?Sized>(f: &F, x: &[f64], radius: f64) -> Result<()> {
    let (Some(l), Support::Annulus { center, r_max, .. }) = (f.period(), f.support()) else {
        return Ok(());
    };
    let d = f.dim();
    let reach = radius + r_max;
    let k_max = libm::ceil((reach + dist(&x[..d], &center[..d])) / l) as i64;
    let side = (2 * k_max + 1) as usize;
    let mut shift = [0.0; 3];
    for code in 0..side.pow(d as u32) {
        let mut c = code;
        let mut home = true;
        for s in shift.iter_mut().take(d) {
            let k = (c % side) as i64 - k_max;
            c /= side;
            home &= k == 0;
            *s = k as f64 * l;
        }
        if home {
            continue;
        }
        let img: Vec<f64> = (0..d).map(|a| center[a] + shift[a]).collect();
        if dist(&x[..d], &img) < reach {
            return Err(Error::WrapAround { radius });
        }
    }
    Ok(())
}

/// Cheap exact-zero tests derived from a support annulus.
#[derive(Clone, Copy)]
pub(crate) struct Pruner {
    support: Support,
}

impl Pruner {
    pub(crate) fn of<F: PointEval + ?Sized>(f: &F) -> Self {
        Self { support: f.support() }
    }

    /// False only if the sphere `|p - x| = rho` misses the support.
    fn sphere_may_hit(&self, x: &[f64], rho: f64) -> bool {
        match self.support {
            Support::Periodic => true,
            Support::Empty => false,
            Support::Annulus { center, r_min, r_max } => {
                let dd = dist(x, &center[..x.len()]);
                rho + dd >= r_min && (rho - dd).abs() <= r_max
            }
        }
    }

    fn point_may_hit(&self, p: &[f64]) -> bool {
        match self.support {
            Support::Periodic => true,
            Support::Empty => false,
            Support::Annulus { center, r_min, r_max } => {
                let r2: f64 = p.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
                r2 <= r_max * r_max && r2 >= r_min * r_min
            }
        }
    }
}

pub(crate) fn check_dims<F: PointEval + ?Sized>(f: &F, x: &[f64], t: f64) -> Result<()> {
    let d = f.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if x.len() < d {
        return Err(Error::InvalidParameter(alloc::format!("point has {} coordinates, need {d}", x.len())));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("radius {t}")));
    }
    Ok(())
}

/// `Σ_i v_i f(x - t z_i)` over a rule on `S^{d-1}`.
pub fn linear_spherical_average<F: PointEval + ?Sized>(
    f: &F,
    x: &[f64],
    t: f64,
    sphere: &SphereRule,
    mode: Mode,
) -> Result<Complex64> {
    check_dims(f, x, t)?;
    quadrature::expect_sphere_dim(sphere, f.dim())?;
    check_wrap(f, x, t)?;
    Ok(sphere_sum(f, &x[..f.dim()], t, sphere, mode, Pruner::of(f)))
}

pub(crate) fn sphere_sum<F: PointEval + ?Sized>(
    f: &F,
    x: &[f64],
    t: f64,
    sphere: &SphereRule,
    mode: Mode,
    pruner: Pruner,
) -> Complex64 {
    if !pruner.sphere_may_hit(x, t) {
        return ZERO;
    }
    let d = x.len();
    let mut p = [0.0; 3];
    let mut acc = PairwiseAcc::new();
    for i in 0..sphere.len() {
        let z = sphere.node(i);
        for a in 0..d {
            p[a] = x[a] - t * z[a];
        }
        if pruner.point_may_hit(&p[..d]) {
            acc.push(value(f, &p[..d], mode) * sphere.weights()[i]);
        }
    }
    acc.total()
}

/// `Σ_i w_i f(x - t y_i) g(x - t z_i)` with `(y_i, z_i)` the two halves of
/// each node of a rule on `S^{2d-1}`.
pub fn direct_bilinear_average<F, G>(f: &F, g: &G, x: &[f64], t: f64, rule: &SphereRule, mode: Mode) -> Result<Complex64>
where
    F: PointEval,
    G: PointEval,
{
    direct_multilinear_average(&[f as &dyn PointEval, g as &dyn PointEval], x, t, rule, mode)
}

/// Direct quadrature over `S^{kd-1}`, splitting each node into `k` blocks of
/// `d` coordinates.
pub fn direct_multilinear_average(
    fs: &[&dyn PointEval],
    x: &[f64],
    t: f64,
    rule: &SphereRule,
    mode: Mode,
) -> Result<Complex64> {
    let d = fs.first().ok_or_else(|| Error::InvalidParameter("no functions".into()))?.dim();
    for f in fs {
        check_dims(*f, x, t)?;
        if f.dim() != d {
            return Err(Error::IncompatibleGrids("mixed dimensions".into()));
        }
        check_wrap(*f, x, t)?;
    }
    quadrature::expect_sphere_dim(rule, fs.len() * d)?;
    let mut p = [0.0; 3];
    let mut acc = PairwiseAcc::new();
    'nodes: for i in 0..rule.len() {
        let node = rule.node(i);
        let mut prod = Complex64::new(rule.weights()[i], 0.0);
        for (b, f) in fs.iter().enumerate() {
            for a in 0..d {
                p[a] = x[a] - t * node[b * d + a];
            }
            let v = value(*f, &p[..d], mode);
            if v == ZERO {
                continue 'nodes;
            }
            prod *= v;
        }
        acc.push(prod);
    }
    Ok(acc.total())
}

/// Sliced evaluation of the bilinear average: a ball rule carrying the
/// slicing density for `f`, a rule on `S^{d-1}` for `g` at the inner radius
/// `t√(1-|y|²)`.
pub fn sliced_bilinear_average<F, G>(
    f: &F,
    g: &G,
    x: &[f64],
    t: f64,
    ball: &BallRule,
    sphere: &SphereRule,
    mode: Mode,
) -> Result<Complex64>
where
    F: PointEval + ?Sized,
    G: PointEval + ?Sized,
{
    check_dims(f, x, t)?;
    check_dims(g, x, t)?;
    let d = f.dim();
    if g.dim() != d || ball.d() != d {
        return Err(Error::IncompatibleGrids("mixed dimensions".into()));
    }
    quadrature::expect_sphere_dim(sphere, d)?;
    check_wrap(f, x, t)?;
    check_wrap(g, x, t)?;
    let x = &x[..d];
    let (pf, pg) = (Pruner::of(f), Pruner::of(g));
    Ok(slice_level(f, x, t, ball, mode, pf, |c| sphere_sum(g, x, t * c, sphere, mode, pg)))
}

/// `Σ_shells radial_weight · inner(co_radius) · Σ_angular v f(x - t r ω)`;
/// shells whose sphere misses the support of `f` are skipped.
pub(crate) fn slice_level<F: PointEval + ?Sized>(
    f: &F,
    x: &[f64],
    t: f64,
    ball: &BallRule,
    mode: Mode,
    pruner: Pruner,
    mut inner: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    let d = x.len();
    let angular = ball.angular();
    let mut p = [0.0; 3];
    let mut total = PairwiseAcc::new();
    for shell in ball.shells() {
        let rho = t * shell.radius;
        if !pruner.sphere_may_hit(x, rho) {
            continue;
        }
        let mut acc = PairwiseAcc::new();
        for i in 0..angular.len() {
            let w = angular.node(i);
            for a in 0..d {
                p[a] = x[a] - rho * w[a];
            }
            if pruner.point_may_hit(&p[..d]) {
                acc.push(value(f, &p[..d], mode) * angular.weights()[i]);
            }
        }
        let outer = acc.total();
        if outer == ZERO {
            continue;
        }
        let g_part = inner(shell.co_radius);
        total.push(outer * g_part * shell.radial_weight);
    }
    total.total()
}

/// `Σ_j w_j f(x - t y_j)` over a ball rule.
pub fn ball_sum<F: PointEval + ?Sized>(f: &F, x: &[f64], t: f64, ball: &BallRule, mode: Mode) -> Result<Complex64> {
    check_dims(f, x, t)?;
    if ball.d() != f.dim() {
        return Err(Error::IncompatibleGrids("mixed dimensions".into()));
    }
    check_wrap(f, x, t)?;
    Ok(slice_level(f, &x[..f.dim()], t, ball, mode, Pruner::of(f), |_| Complex64::new(1.0, 0.0)))
}

/// Rules for the recursive k-linear slicing: one ball rule per peeled factor
/// (factor `j` carries the density `(1-|y|²)^{((k-j)d-2)/2}`) and a final
/// sphere rule on `S^{d-1}`.
#[derive(Clone, Debug)]
pub struct MultilinearRules {
    pub balls: Vec<BallRule>,
    pub sphere: SphereRule,
}

impl MultilinearRules {
    pub fn new(d: usize, k: usize, order: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(alloc::format!("k = {k} < 2")));
        }
        let mut balls = Vec::with_capacity(k - 1);
        for j in 1..k {
            let remaining = (k - j) * d;
            let exponent = (remaining as f64 - 2.0) / 2.0;
            balls.push(if j == k - 1 {
                quadrature::ball_rule(d, order, true)?
            } else {
                quadrature::ball_rule_with_exponent(d, order, exponent)?
            });
        }
        Ok(Self { balls, sphere: quadrature::sphere_rule(d, order)? })
    }
}

/// k-linear spherical average by peeling one `B^d` factor per level; with
/// `k = 2` this is the same computation as [`sliced_bilinear_average`].
pub fn multilinear_average(
    fs: &[&dyn PointEval],
    x: &[f64],
    t: f64,
    rules: &MultilinearRules,
    mode: Mode,
) -> Result<Complex64> {
    let d = fs.first().ok_or_else(|| Error::InvalidParameter("no functions".into()))?.dim();
    if fs.len() < 2 || rules.balls.len() != fs.len() - 1 {
        return Err(Error::InvalidParameter(alloc::format!(
            "{} functions but rules for {} factors",
            fs.len(),
            rules.balls.len() + 1
        )));
    }
    for f in fs {
        check_dims(*f, x, t)?;
        if f.dim() != d {
            return Err(Error::IncompatibleGrids("mixed dimensions".into()));
        }
        check_wrap(*f, x, t)?;
    }
    quadrature::expect_sphere_dim(&rules.sphere, d)?;
    let pruners: Vec<Pruner> = fs.iter().map(|f| Pruner::of(*f)).collect();
    Ok(peel(fs, &pruners, &x[..d], t, rules, 0, mode))
}

fn peel(fs: &[&dyn PointEval], pr: &[Pruner], x: &[f64], t: f64, rules: &MultilinearRules, level: usize, mode: Mode) -> Complex64 {
    if level + 1 == fs.len() {
        return sphere_sum(fs[level], x, t, &rules.sphere, mode, pr[level]);
    }
    slice_level(fs[level], x, t, &rules.balls[level], mode, pr[level], |c| {
        peel(fs, pr, x, t * c, rules, level + 1, mode)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{ball_rule, sphere_area, sphere_rule};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(c: [f64; 2], a: f64) -> impl Fn(&[f64]) -> f64 {
        move |x: &[f64]| libm::exp(-a * ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)))
    }

    fn bump_grid(seed: u64, n: usize, l: f64, radius: f64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let g = GridFunction::from_real(2, n, l, &vals).unwrap();
        let h = g.spacing();
        let mut out = Vec::with_capacity(n * n);
        for (idx, v) in vals.iter().enumerate() {
            let x = [-l / 2.0 + h * (idx / n) as f64, -l / 2.0 + h * (idx % n) as f64];
            out.push(if x[0] * x[0] + x[1] * x[1] < radius * radius { *v } else { 0.0 });
        }
        GridFunction::from_real(2, n, l, &out).unwrap()
    }

    #[test]
    fn constants_give_sphere_areas() {
        let one = GridFunction::constant(2, 16, 8.0, 1.0).unwrap();
        let s3 = sphere_rule(4, 8).unwrap();
        let v = direct_bilinear_average(&one, &one, &[0.3, 0.1], 1.3, &s3, Mode::Signed).unwrap();
        assert!((v.re - 2.0 * PI * PI).abs() < 1e-10);
        let ball = ball_rule(2, 8, true).unwrap();
        let s1 = sphere_rule(2, 8).unwrap();
        let v = sliced_bilinear_average(&one, &one, &[0.3, 0.1], 1.3, &ball, &s1, Mode::Abs).unwrap();
        assert!((v.re - sphere_area(4)).abs() / sphere_area(4) < 1e-10);
        let g = GridFunction::constant(2, 16, 8.0, 0.7).unwrap();
        let v = direct_bilinear_average(&one, &g, &[0.0, 0.0], 0.5, &s3, Mode::Signed).unwrap();
        assert!((v.re - 2.0 * PI * PI * 0.7).abs() < 1e-10);
        let lin = linear_spherical_average(&one, &[0.0, 0.0], 2.0, &s1, Mode::Abs).unwrap();
        assert!((lin.re - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sliced_with_unit_g_is_weighted_ball_average_of_f() {
        let f = bump_grid(1, 32, 8.0, 1.5);
        let one = GridFunction::constant(2, 32, 8.0, 1.0).unwrap();
        let ball = ball_rule(2, 10, true).unwrap();
        let s1 = sphere_rule(2, 10).unwrap();
        let x = [0.2, -0.1];
        let t = 1.1;
        let v = sliced_bilinear_average(&f, &one, &x, t, &ball, &s1, Mode::Signed).unwrap();
        let ball_avg = ball.integrate(|y| f.sample(&[x[0] - t * y[0], x[1] - t * y[1]]).re);
        assert!((v.re - 2.0 * PI * ball_avg).abs() < 1e-10 * v.re.abs().max(1.0));
    }

    #[test]
    fn radial_gaussian_on_circle() {
        let f = Analytic::new(2, |x: &[f64]| libm::exp(-PI * (x[0] * x[0] + x[1] * x[1])));
        let s1 = sphere_rule(2, 8).unwrap();
        for t in [0.3, 1.0, 1.7] {
            let v = linear_spherical_average(&f, &[0.0, 0.0], t, &s1, Mode::Abs).unwrap().re;
            let exact = 2.0 * PI * libm::exp(-PI * t * t);
            assert!((v - exact).abs() / exact < 1e-8);
        }
    }

    #[test]
    fn direct_and_sliced_agree_on_gaussians() {
        let f = Analytic::new(2, gaussian([0.1, -0.2], 1.0));
        let g = Analytic::new(2, gaussian([-0.3, 0.2], 0.7));
        let s3 = sphere_rule(4, 12).unwrap();
        let ball = ball_rule(2, 12, true).unwrap();
        let s1 = sphere_rule(2, 12).unwrap();
        let a = direct_bilinear_average(&f, &g, &[0.0, 0.0], 1.0, &s3, Mode::Signed).unwrap();
        let b = sliced_bilinear_average(&f, &g, &[0.0, 0.0], 1.0, &ball, &s1, Mode::Signed).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn multilinear_k2_is_bit_exact_with_sliced() {
        let f = bump_grid(2, 32, 8.0, 1.2);
        let g = bump_grid(3, 32, 8.0, 1.0);
        let rules = MultilinearRules::new(2, 2, 10).unwrap();
        let x = [0.25, 0.5];
        let a = multilinear_average(&[&f, &g], &x, 1.4, &rules, Mode::Signed).unwrap();
        let b = sliced_bilinear_average(&f, &g, &x, 1.4, &rules.balls[0], &rules.sphere, Mode::Signed).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn trilinear_matches_direct_s5() {
        let fs = [
            Analytic::new(2, gaussian([0.1, 0.0], 1.0)),
            Analytic::new(2, gaussian([0.0, -0.2], 0.8)),
            Analytic::new(2, gaussian([-0.1, 0.1], 1.2)),
        ];
        let refs: [&dyn PointEval; 3] = [&fs[0], &fs[1], &fs[2]];
        let rules = MultilinearRules::new(2, 3, 12).unwrap();
        let s5 = sphere_rule(6, 12).unwrap();
        let x = [0.05, 0.1];
        let a = multilinear_average(&refs, &x, 0.9, &rules, Mode::Signed).unwrap();
        let b = direct_multilinear_average(&refs, &x, 0.9, &s5, Mode::Signed).unwrap();
        assert!((a - b).norm() / b.norm() < 1e-5, "{a} vs {b}");
        let ones: [&dyn PointEval; 3] = [&Analytic::new(2, |_: &[f64]| 1.0), &Analytic::new(2, |_: &[f64]| 1.0), &Analytic::new(2, |_: &[f64]| 1.0)];
        let v = multilinear_average(&ones, &x, 0.9, &rules, Mode::Signed).unwrap();
        assert!((v.re - sphere_area(6)).abs() / sphere_area(6) < 1e-8);
    }

    #[test]
    fn wrap_is_detected() {
        let f = bump_grid(4, 32, 4.0, 0.5);
        let s1 = sphere_rule(2, 8).unwrap();
        assert!(linear_spherical_average(&f, &[0.0, 0.0], 1.0, &s1, Mode::Abs).is_ok());
        assert!(matches!(
            linear_spherical_average(&f, &[1.5, 0.0], 2.2, &s1, Mode::Abs),
            Err(Error::WrapAround { .. })
        ));
    }

    #[test]
    fn translation_and_bilinearity() {
        let f = bump_grid(5, 32, 8.0, 1.0);
        let f2 = bump_grid(6, 32, 8.0, 1.0);
        let g = bump_grid(7, 32, 8.0, 1.2);
        let ball = ball_rule(2, 10, true).unwrap();
        let s1 = sphere_rule(2, 10).unwrap();
        let x = [0.1, -0.3];
        let base = sliced_bilinear_average(&f, &g, &x, 1.2, &ball, &s1, Mode::Signed).unwrap();
        let shift = [3isize, -2];
        let h = f.spacing();
        let xs = [x[0] + 3.0 * h, x[1] - 2.0 * h];
        let moved = sliced_bilinear_average(&f.roll(&shift), &g.roll(&shift), &xs, 1.2, &ball, &s1, Mode::Signed).unwrap();
        assert!((base - moved).norm() < 1e-12 * base.norm().max(1.0));
        let (a, b) = (Complex64::new(2.0, 0.0), Complex64::new(-0.5, 0.0));
        let comb = f.axpby(a, &f2, b).unwrap();
        let lhs = sliced_bilinear_average(&comb, &g, &x, 1.2, &ball, &s1, Mode::Signed).unwrap();
        let rhs = a * base + b * sliced_bilinear_average(&f2, &g, &x, 1.2, &ball, &s1, Mode::Signed).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn spectral_interpolant_is_exact_for_trig_polynomials() {
        let wave = |x: &[f64]| 1.0 + 0.3 * libm::cos(2.0 * PI * (x[0] - 2.0 * x[1]) / 8.0);
        let f = GridFunction::from_real_fn(2, 16, 8.0, wave).unwrap();
        let s = SpectralInterpolant::from_grid(&f, 1e-12);
        assert_eq!(s.mode_count(), 3);
        let p = [0.377, -1.91];
        assert!((s.eval(&p).re - wave(&p)).abs() < 1e-13);
    }
}
