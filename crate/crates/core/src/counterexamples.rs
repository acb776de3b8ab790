//! Indicator families that witness sharp exponents, the sweep driver that
//! turns them into records, and the log-log slope fit.
//!
//! Probe statistics are `min_{x ∈ probes} sup_{t} 𝓜(f,g)(x)` over a radius
//! grid; a positive lower bound at every probe is what the necessity
//! arguments consume.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::grid::{ExponentPoint, GridFunction};
use crate::maximal::{bilinear_maximal, bilinear_maximal_at, MaximalRules, RadiusGrid};
use crate::quadrature::ball_volume;
use crate::{Error, Result};

/// Smallest admissible `δ/h`.
pub const MIN_CELLS_PER_DELTA: f64 = 4.0;
/// Knapp scans use quadrature order `⌈KNAPP_ORDER_FACTOR/δ⌉`.
pub const KNAPP_ORDER_FACTOR: f64 = 16.0;
pub const ANNULUS_ORDER_FACTOR: f64 = 8.0;
/// Width of the Knapp probe annulus beyond `1/√2`.
pub const DEFAULT_EPS0: f64 = 0.1;
/// Largest Knapp scale; kept apart from the probe width so `δ = 1/8` is usable.
pub const KNAPP_MAX_DELTA: f64 = 0.125;
/// Ratio of the `g` ball radius to `δ` in the Knapp pair.
pub const KNAPP_C1: f64 = 4.0;
pub const DEFAULT_ANNULUS_EPS: f64 = 0.125;

/// Box and resolution shared by every member of a family.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridConfig {
    pub n: usize,
    pub box_length: f64,
}

impl GridConfig {
    /// `L = 4`; `n = 1024` at `d = 2` resolves `δ = 1/64` with four cells.
    pub fn default_for(d: usize) -> Self {
        Self { n: if d == 2 { 1024 } else { 128 }, box_length: 4.0 }
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyMeta {
    pub name: String,
    pub d: usize,
    pub delta: f64,
    /// Ratio between the two support scales.
    pub c1: f64,
    /// Probe-set width parameter (`ε₀` or `ε`).
    pub eps: f64,
    pub grid: GridConfig,
    /// Quadrature order used for this member.
    pub rule_order: usize,
    /// Lebesgue measure of the continuous probe set.
    pub probe_measure: f64,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub f: GridFunction,
    pub g: GridFunction,
    pub probes: Vec<[f64; 3]>,
    pub meta: FamilyMeta,
}

fn check_resolved(delta: f64, grid: &GridConfig) -> Result<()> {
    if !(delta > 0.0) || delta < MIN_CELLS_PER_DELTA * grid.spacing() {
        return Err(Error::UnderResolved(delta));
    }
    Ok(())
}

fn indicator(d: usize, grid: &GridConfig, inside: impl Fn(f64) -> bool) -> Result<GridFunction> {
    GridFunction::from_real_fn(d, grid.n, grid.box_length, |x| {
        let r = libm::sqrt(x[..d].iter().map(|v| v * v).sum());
        if inside(r) { 1.0 } else { 0.0 }
    })
}

/// Directions used to place probes; generic so no probe sits on a grid axis.
const PROBE_ANGLES: [f64; 3] = [0.3, 1.3, 2.9];

fn direction(d: usize, angle: f64) -> [f64; 3] {
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    if d == 2 { [c, s, 0.0] } else { [c * 0.8, s * 0.8, 0.6] }
}

fn order_for(factor: f64, delta: f64) -> usize {
    (libm::ceil(factor / delta) as usize).max(8)
}

/// `f = χ_{B(0,δ)}`, `g = χ_{B(0,C₁δ)}`; probes at `|x| = t_j/√2` for the
/// first local-grid radii `t_j = 1 + j/32`, so `t = √2|x|` is on the grid.
pub fn knapp_family(d: usize, delta: f64, grid: &GridConfig) -> Result<Family> {
    if !(delta > 0.0 && delta <= KNAPP_MAX_DELTA) {
        return Err(Error::InvalidParameter(alloc::format!("δ = {delta} outside (0, {KNAPP_MAX_DELTA}]")));
    }
    check_resolved(delta, grid)?;
    let f = indicator(d, grid, |r| r < delta)?;
    let g = indicator(d, grid, |r| r < KNAPP_C1 * delta)?;
    let mut probes = Vec::new();
    for j in 0..5 {
        let radius = (1.0 + j as f64 / 32.0) * FRAC_1_SQRT_2;
        for a in PROBE_ANGLES {
            let u = direction(d, a);
            probes.push([radius * u[0], radius * u[1], radius * u[2]]);
        }
    }
    let vol = ball_volume(d);
    let probe_measure = vol * (libm::pow(FRAC_1_SQRT_2 + DEFAULT_EPS0, d as f64) - libm::pow(FRAC_1_SQRT_2, d as f64));
    Ok(Family {
        f,
        g,
        probes,
        meta: FamilyMeta {
            name: "knapp".into(),
            d,
            delta,
            c1: KNAPP_C1,
            eps: DEFAULT_EPS0,
            grid: *grid,
            rule_order: order_for(KNAPP_ORDER_FACTOR, delta),
            probe_measure,
        },
    })
}

/// Thin annuli of half-widths `2δ` and `C₁δ` around `|x| = 1/√2`, probed on
/// `|x| ≤ δ`.
pub fn annulus_family(d: usize, delta: f64, eps: f64, grid: &GridConfig) -> Result<Family> {
    if !(eps > 0.0 && delta > 0.0 && delta <= eps) {
        return Err(Error::InvalidParameter(alloc::format!("need 0 < δ ≤ ε, got δ = {delta}, ε = {eps}")));
    }
    let c1_max = libm::pow(2.0, -1.5) / eps;
    if c1_max <= 1.0 {
        return Err(Error::InvalidParameter(alloc::format!("ε = {eps} leaves no room for C₁ in (1, {c1_max})")));
    }
    check_resolved(delta, grid)?;
    let c1 = 2.5f64.min((1.0 + c1_max) / 2.0);
    let f = indicator(d, grid, |r| (r - FRAC_1_SQRT_2).abs() < 2.0 * delta)?;
    let g = indicator(d, grid, |r| (r - FRAC_1_SQRT_2).abs() < c1 * delta)?;
    let mut probes = alloc::vec![[0.0; 3]];
    for frac in [0.5, 1.0] {
        for a in PROBE_ANGLES {
            let u = direction(d, a);
            probes.push([frac * delta * u[0], frac * delta * u[1], frac * delta * u[2]]);
        }
    }
    Ok(Family {
        f,
        g,
        probes,
        meta: FamilyMeta {
            name: "annulus".into(),
            d,
            delta,
            c1,
            eps,
            grid: *grid,
            rule_order: order_for(ANNULUS_ORDER_FACTOR, delta),
            probe_measure: ball_volume(d) * libm::pow(delta, d as f64),
        },
    })
}

/// `min_{x ∈ probes} sup_{t ∈ radii} 𝓜(f,g)(x)`.
pub fn probe_statistic(family: &Family, radii: &RadiusGrid, rules: &MaximalRules) -> Result<f64> {
    let rs = radii.radii();
    let d = family.meta.d;
    let mut stat = f64::INFINITY;
    for p in &family.probes {
        let (v, _) = bilinear_maximal_at(&family.f, &family.g, &p[..d], &rs, rules)?;
        stat = stat.min(v);
    }
    Ok(if family.probes.is_empty() { 0.0 } else { stat })
}

/// `(f(·/2^{-m}), g(·/2^{-m}))` for each `m`, i.e. `f_R(x) = f(2^m x)`.
pub fn scaling_family(f: &GridFunction, g: &GridFunction, m_list: &[i32]) -> Result<Vec<(GridFunction, GridFunction)>> {
    if !f.same_grid(g) {
        return Err(Error::IncompatibleGrids("scaling pair must share a grid".into()));
    }
    m_list.iter().map(|&m| Ok((f.rescale(m)?, g.rescale(m)?))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScanOperator {
    /// Probe statistic of the localized bilinear maximal function.
    LocalProbe,
    /// Norm quotient `‖T(f,g)‖_{r,(u)} / (‖f‖_{p,(s)} ‖g‖_{q,(t)})`. For
    /// probe families the numerator is the lower bound
    /// `|probe set|^{1/r}·statistic`.
    NormQuotient,
}

impl ScanOperator {
    pub fn tag(self) -> &'static str {
        match self {
            Self::LocalProbe => "local-probe",
            Self::NormQuotient => "norm-quotient",
        }
    }
}

/// What to sweep. Probe families take `δ` as the parameter; the scaling
/// family takes `R` (a power of two) and uses `f_R = f(·/R)` with the radius
/// grid scaled by `R`.
#[derive(Clone, Debug)]
pub enum ScanFamily {
    Knapp { d: usize, grid: GridConfig },
    Annulus { d: usize, eps: f64, grid: GridConfig },
    Scaling { f: GridFunction, g: GridFunction, radii: RadiusGrid, order: usize },
}

impl ScanFamily {
    fn name(&self) -> &'static str {
        match self {
            Self::Knapp { .. } => "knapp",
            Self::Annulus { .. } => "annulus",
            Self::Scaling { .. } => "scaling",
        }
    }
}

/// Parameters shared by every record of one scan.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanMeta {
    pub family: String,
    pub operator: String,
    pub exponents: ExponentPoint,
    pub n: usize,
    /// Box side at parameter 1.
    pub box_length: f64,
    /// Probe families: `order·δ`; scaling: the fixed order.
    pub order_factor: f64,
    pub c1: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanRecord {
    pub parameter: f64,
    pub ratio: f64,
    pub meta: ScanMeta,
}

fn norm(f: &GridFunction, up: f64, lorentz: Option<f64>) -> Result<f64> {
    match lorentz {
        Some(us) => f.lorentz_norm(up, us),
        None => Ok(f.lp_norm(up)),
    }
}

fn input_norms(f: &GridFunction, g: &GridFunction, e: &ExponentPoint) -> Result<f64> {
    Ok(norm(f, e.up, e.lorentz_s)? * norm(g, e.uq, e.lorentz_t)?)
}

fn dyadic_exponent(r: f64) -> Result<i32> {
    let m = libm::log2(r);
    let mi = libm::round(m);
    if !(r > 0.0) || (m - mi).abs() > 1e-12 || mi.abs() > 60.0 {
        return Err(Error::InvalidParameter(alloc::format!("scale {r} is not a power of two")));
    }
    Ok(mi as i32)
}

/// One record per parameter, in order; the first error aborts the scan.
pub fn run_scan(family: &ScanFamily, op: ScanOperator, exponents: &ExponentPoint, params: &[f64]) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::with_capacity(params.len());
    let mut meta = ScanMeta {
        family: family.name().into(),
        operator: op.tag().into(),
        exponents: *exponents,
        n: 0,
        box_length: 0.0,
        order_factor: 0.0,
        c1: None,
        eps: None,
    };
    for &p in params {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!("scan parameter {p}")));
        }
        let ratio = match family {
            ScanFamily::Knapp { d, grid } | ScanFamily::Annulus { d, grid, .. } => {
                let (fam, factor) = match family {
                    ScanFamily::Knapp { .. } => (knapp_family(*d, p, grid)?, KNAPP_ORDER_FACTOR),
                    ScanFamily::Annulus { eps, .. } => (annulus_family(*d, p, *eps, grid)?, ANNULUS_ORDER_FACTOR),
                    ScanFamily::Scaling { .. } => unreachable!(),
                };
                meta.n = grid.n;
                meta.box_length = grid.box_length;
                meta.order_factor = factor;
                meta.c1 = Some(fam.meta.c1);
                meta.eps = Some(fam.meta.eps);
                let rules = MaximalRules::new(*d, fam.meta.rule_order)?;
                let stat = probe_statistic(&fam, &RadiusGrid::default_local(), &rules)?;
                match op {
                    ScanOperator::LocalProbe => stat,
                    ScanOperator::NormQuotient => {
                        libm::pow(fam.meta.probe_measure, exponents.ur) * stat / input_norms(&fam.f, &fam.g, exponents)?
                    }
                }
            }
            ScanFamily::Scaling { f, g, radii, order } => {
                meta.n = f.n();
                meta.box_length = f.box_length();
                meta.order_factor = *order as f64;
                let m = dyadic_exponent(p)?;
                let pair = scaling_family(f, g, &[-m])?;
                let (fr, gr) = &pair[0];
                let rules = MaximalRules::new(f.d(), *order)?;
                let out = bilinear_maximal(fr, gr, &radii.scaled(m), &rules)?.values;
                match op {
                    ScanOperator::LocalProbe => out.lp_norm(0.0),
                    ScanOperator::NormQuotient => norm(&out, exponents.ur, exponents.lorentz_u)? / input_norms(fr, gr, exponents)?,
                }
            }
        };
        out.push(ScanRecord { parameter: p, ratio, meta: meta.clone() });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope; zero for an exact fit.
    pub slope_stderr: f64,
    pub points: usize,
}

/// Least squares of `ln(ratio)` on `ln(parameter)`.
pub fn fit_scaling_exponent(records: &[ScanRecord]) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.parameter, r.ratio)).collect();
    fit_log_log(&pts)
}

/// Least squares of `ln y` on `ln x` over positive pairs `(x, y)`.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::TooFewRecords { needed: 3, got: points.len() });
    }
    if let Some(p) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::NonpositiveRatio(p.1));
    }
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0)) {
        return Err(Error::InvalidParameter(alloc::format!("parameter {} must be positive", p.0)));
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|p| (libm::log(p.0), libm::log(p.1))).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all scan parameters coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    let sse = (syy - slope * sxy).max(0.0);
    let slope_stderr = libm::sqrt(sse / (n - 2.0) / sxx);
    Ok(SlopeFit { slope, intercept, r_squared, slope_stderr, points: pts.len() })
}

/// `vol(B^d(0, a))`, the exact measure the rasterized indicators approximate.
pub fn ball_measure(d: usize, a: f64) -> f64 {
    ball_volume(d) * libm::pow(a, d as f64)
}

/// Area of the annulus `|r - 1/√2| < w` at `d = 2`.
pub fn annulus_area_2d(w: f64) -> f64 {
    // (a + w)² - (a - w)² = 4aw.
    PI * 4.0 * FRAC_1_SQRT_2 * w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> GridConfig {
        GridConfig { n, box_length: 4.0 }
    }

    fn synthetic(params: &[f64], f: impl Fn(f64) -> f64) -> Vec<ScanRecord> {
        let meta = ScanMeta {
            family: "synthetic".into(),
            operator: "none".into(),
            exponents: ExponentPoint::new(2, 0.5, 0.5, 1.0).unwrap(),
            n: 0,
            box_length: 0.0,
            order_factor: 0.0,
            c1: None,
            eps: None,
        };
        params.iter().map(|&p| ScanRecord { parameter: p, ratio: f(p), meta: meta.clone() }).collect()
    }

    #[test]
    fn fit_exact_power() {
        let recs = synthetic(&[0.5, 0.25, 0.125, 0.0625], |p| 7.0 * p * p * p);
        let fit = fit_scaling_exponent(&recs).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit_scaling_exponent(&recs[..2]).unwrap_err(), Error::TooFewRecords { needed: 3, got: 2 });
        let bad = synthetic(&[1.0, 2.0, 3.0], |p| p - 2.0);
        assert!(matches!(fit_scaling_exponent(&bad), Err(Error::NonpositiveRatio(_))));
    }

    #[test]
    fn knapp_measures_and_support() {
        let fam = knapp_family(2, 0.125, &grid(256)).unwrap();
        let area = fam.f.lp_norm(1.0);
        let h = grid(256).spacing();
        assert!((area - ball_measure(2, 0.125)).abs() < 2.0 * PI * 0.125 * h);
        assert!(fam.f.values().iter().all(|v| v.re == 0.0 || v.re == 1.0));
        assert_eq!(fam.probes.len(), 15);
        assert!(matches!(knapp_family(2, 1.0 / 256.0, &grid(256)), Err(Error::UnderResolved(_))));
        assert!(knapp_family(2, 0.2, &grid(256)).is_err());
    }

    #[test]
    fn knapp_positive_at_probes() {
        let fam = knapp_family(2, 0.125, &grid(256)).unwrap();
        let rules = MaximalRules::new(2, fam.meta.rule_order).unwrap();
        let rs = RadiusGrid::default_local().radii();
        for p in &fam.probes {
            let (v, _) = bilinear_maximal_at(&fam.f, &fam.g, &p[..2], &rs, &rules).unwrap();
            assert!(v > 1e-3 * 0.125f64.powi(3), "{v}");
        }
    }

    #[test]
    fn annulus_measure_and_probe() {
        let g = grid(256);
        let fam = annulus_family(2, 0.125, DEFAULT_ANNULUS_EPS, &g).unwrap();
        let area = fam.f.lp_norm(1.0);
        assert!((area - annulus_area_2d(0.25)).abs() < 0.05 * area);
        assert!(fam.meta.c1 > 1.0 && fam.meta.c1 < libm::pow(2.0, -1.5) / DEFAULT_ANNULUS_EPS);
        let rules = MaximalRules::new(2, fam.meta.rule_order).unwrap();
        let (v, _) = bilinear_maximal_at(&fam.f, &fam.g, &[0.0, 0.0], &RadiusGrid::default_local().radii(), &rules).unwrap();
        assert!(v > 0.0);
        assert!(annulus_family(2, 0.125, 0.5, &g).is_err());
    }

    #[test]
    fn translation_covariance() {
        let g = grid(256);
        let fam = knapp_family(2, 0.125, &g).unwrap();
        let shift = [5isize, -3];
        let h = g.spacing();
        let moved = Family {
            f: fam.f.roll(&shift),
            g: fam.g.roll(&shift),
            probes: fam.probes.iter().map(|p| [p[0] + 5.0 * h, p[1] - 3.0 * h, 0.0]).collect(),
            meta: fam.meta.clone(),
        };
        let rules = MaximalRules::new(2, 64).unwrap();
        let radii = RadiusGrid::local(4).unwrap();
        let a = probe_statistic(&fam, &radii, &rules).unwrap();
        let b = probe_statistic(&moved, &radii, &rules).unwrap();
        assert!((a - b).abs() <= 1e-12 * a, "{a} {b}");
    }

    #[test]
    fn scaling_scan_exact() {
        let f = GridFunction::from_real_fn(2, 16, 8.0, |x| libm::exp(-(x[0] * x[0] + 2.0 * x[1] * x[1]))).unwrap();
        let g = GridFunction::from_real_fn(2, 16, 8.0, |x| libm::exp(-((x[0] - 0.5).powi(2) + x[1] * x[1]))).unwrap();
        assert_eq!(scaling_family(&f, &g, &[0]).unwrap()[0].0.values(), f.values());
        let fam = ScanFamily::Scaling { f, g, radii: RadiusGrid::global(-2, -1, 2).unwrap(), order: 6 };
        let holder = ExponentPoint::new(2, 0.5, 0.5, 1.0).unwrap();
        let recs = run_scan(&fam, ScanOperator::NormQuotient, &holder, &[1.0, 2.0, 4.0]).unwrap();
        for r in &recs[1..] {
            assert!((r.ratio / recs[0].ratio - 1.0).abs() < 1e-10);
        }
        let off = ExponentPoint::new(2, 0.5, 0.25, 0.5).unwrap();
        let recs = run_scan(&fam, ScanOperator::NormQuotient, &off, &[1.0, 2.0]).unwrap();
        let slope = libm::log2(recs[1].ratio / recs[0].ratio);
        assert!((slope - 2.0 * off.holder_defect()).abs() < 1e-6, "{slope}");
        assert!(run_scan(&fam, ScanOperator::NormQuotient, &off, &[]).unwrap().is_empty());
        assert!(run_scan(&fam, ScanOperator::NormQuotient, &off, &[3.0]).is_err());
    }
}
