//! Maximal operators as suprema over finite radius grids, with the maximizing
//! radius recorded per point, and the per-point domination check
//! `𝓜(f,g)(x) ≤ vol(B^d)·M̄f(x)·𝒮g(x)`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::grid::GridFunction;
use crate::quadrature::{ball_rule, ball_volume, sphere_rule, BallRule, SphereRule};
use crate::spherical::{
    ball_sum, check_dims, check_wrap, linear_spherical_average, slice_level, sphere_sum, Mode, PointEval, Pruner,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RadiusKind {
    GlobalDyadic,
    LocalUnit,
}

/// Radii `scale·2^k(1 + j/n_local)`, `k_min ≤ k ≤ k_max`, `0 ≤ j < n_local`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusGrid {
    pub kind: RadiusKind,
    pub k_min: i32,
    pub k_max: i32,
    pub n_local: usize,
    /// Power-of-two factor applied to every radius (used by dyadic rescaling).
    pub scale: f64,
}

impl RadiusGrid {
    pub fn global(k_min: i32, k_max: i32, n_local: usize) -> Result<Self> {
        if k_min > k_max || n_local == 0 {
            return Err(Error::InvalidParameter(alloc::format!("radius grid k ∈ [{k_min}, {k_max}], n = {n_local}")));
        }
        Ok(Self { kind: RadiusKind::GlobalDyadic, k_min, k_max, n_local, scale: 1.0 })
    }

    pub fn local(n_local: usize) -> Result<Self> {
        if n_local == 0 {
            return Err(Error::InvalidParameter("n_local = 0".into()));
        }
        Ok(Self { kind: RadiusKind::LocalUnit, k_min: 0, k_max: 0, n_local, scale: 1.0 })
    }

    pub fn default_global() -> Self {
        Self::global(-6, 2, 16).expect("valid")
    }

    pub fn default_local() -> Self {
        Self::local(32).expect("valid")
    }

    /// Same grid with every radius multiplied by `2^m`.
    pub fn scaled(&self, m: i32) -> Self {
        Self { scale: self.scale * libm::ldexp(1.0, m), ..self.clone() }
    }

    /// Strictly increasing radii.
    pub fn radii(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for k in self.k_min..=self.k_max {
            let base = libm::ldexp(self.scale, k);
            for j in 0..self.n_local {
                out.push(base * (1.0 + j as f64 / self.n_local as f64));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize * self.n_local
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_radius(&self) -> f64 {
        libm::ldexp(self.scale, self.k_max) * (1.0 + (self.n_local - 1) as f64 / self.n_local as f64)
    }
}

/// Quadrature used by every maximal operator of one dimension.
#[derive(Clone, Debug)]
pub struct MaximalRules {
    /// Ball rule with the slicing density (bilinear averages).
    pub ball: BallRule,
    /// Same nodes, plain Lebesgue weights (ball averages).
    pub ball_plain: BallRule,
    pub sphere: SphereRule,
}

impl MaximalRules {
    pub fn new(d: usize, order: usize) -> Result<Self> {
        Ok(Self { ball: ball_rule(d, order, true)?, ball_plain: ball_rule(d, order, false)?, sphere: sphere_rule(d, order)? })
    }

    pub fn d(&self) -> usize {
        self.ball.d()
    }
}

/// A maximal function on a grid plus the maximizing radius at every node.
#[derive(Clone, Debug)]
pub struct MaximalOutput {
    pub values: GridFunction,
    pub argmax: Vec<f64>,
}

/// Supremum of `avg(t)` over `radii`; ties keep the smallest radius.
fn sup_over<E>(radii: &[f64], mut avg: impl FnMut(f64) -> core::result::Result<f64, E>) -> core::result::Result<(f64, f64), E> {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &t in radii {
        let v = avg(t)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    if radii.is_empty() {
        best = (0.0, f64::NAN);
    }
    Ok(best)
}

fn on_grid(template: &GridFunction, mut at: impl FnMut(&[f64]) -> Result<(f64, f64)>) -> Result<MaximalOutput> {
    let d = template.d();
    let mut vals = Vec::with_capacity(template.len());
    let mut argmax = Vec::with_capacity(template.len());
    for idx in 0..template.len() {
        let x = template.node(idx);
        let (v, t) = at(&x[..d])?;
        vals.push(Complex64::new(v, 0.0));
        argmax.push(t);
    }
    Ok(MaximalOutput {
        values: GridFunction::new(d, template.n(), template.box_length(), vals)?,
        argmax,
    })
}

/// Normalized Hardy-Littlewood maximal value at one point.
pub fn hl_maximal_at<F: PointEval + ?Sized>(f: &F, x: &[f64], radii: &[f64], rules: &MaximalRules) -> Result<(f64, f64)> {
    let vol = ball_volume(f.dim());
    sup_over(radii, |t| Ok(ball_sum(f, x, t, &rules.ball_plain, Mode::Abs)?.re / vol))
}

pub fn hl_maximal(f: &GridFunction, radii: &RadiusGrid, rules: &MaximalRules) -> Result<MaximalOutput> {
    let rs = radii.radii();
    on_grid(f, |x| hl_maximal_at(f, x, &rs, rules))
}

pub fn spherical_maximal_at<F: PointEval + ?Sized>(f: &F, x: &[f64], radii: &[f64], sphere: &SphereRule) -> Result<(f64, f64)> {
    sup_over(radii, |t| Ok(linear_spherical_average(f, x, t, sphere, Mode::Abs)?.re))
}

pub fn spherical_maximal(f: &GridFunction, radii: &RadiusGrid, rules: &MaximalRules) -> Result<MaximalOutput> {
    let rs = radii.radii();
    on_grid(f, |x| spherical_maximal_at(f, x, &rs, &rules.sphere))
}

/// Sliced bilinear average of `|f|, |g|` with the inner sphere at radius
/// `s·√(1-|y|²)`; `s = t` is the bilinear spherical average.
fn split_radius_average<F, G>(f: &F, g: &G, x: &[f64], t: f64, s: f64, rules: &MaximalRules) -> Result<f64>
where
    F: PointEval + ?Sized,
    G: PointEval + ?Sized,
{
    check_dims(f, x, t)?;
    check_dims(g, x, s)?;
    check_wrap(f, x, t)?;
    check_wrap(g, x, s)?;
    let d = f.dim();
    let (pf, pg) = (Pruner::of(f), Pruner::of(g));
    let x = &x[..d];
    Ok(slice_level(f, x, t, &rules.ball, Mode::Abs, pf, |c| sphere_sum(g, x, s * c, &rules.sphere, Mode::Abs, pg)).re)
}

pub fn bilinear_maximal_at<F, G>(f: &F, g: &G, x: &[f64], radii: &[f64], rules: &MaximalRules) -> Result<(f64, f64)>
where
    F: PointEval + ?Sized,
    G: PointEval + ?Sized,
{
    sup_over(radii, |t| split_radius_average(f, g, x, t, t, rules))
}

pub fn bilinear_maximal(f: &GridFunction, g: &GridFunction, radii: &RadiusGrid, rules: &MaximalRules) -> Result<MaximalOutput> {
    same_grid(f, g)?;
    let rs = radii.radii();
    on_grid(f, |x| bilinear_maximal_at(f, g, x, &rs, rules))
}

/// Supremum over independent radii for the two factors; returns
/// `(value, t*, s*)`.
pub fn strong_bilinear_maximal_at<F, G>(
    f: &F,
    g: &G,
    x: &[f64],
    radii_t: &[f64],
    radii_s: &[f64],
    rules: &MaximalRules,
) -> Result<(f64, f64, f64)>
where
    F: PointEval + ?Sized,
    G: PointEval + ?Sized,
{
    let mut best = (0.0, f64::NAN, f64::NAN);
    let mut first = true;
    for &t in radii_t {
        for &s in radii_s {
            let v = split_radius_average(f, g, x, t, s, rules)?;
            if first || v > best.0 {
                best = (v, t, s);
                first = false;
            }
        }
    }
    Ok(best)
}

pub fn strong_bilinear_maximal(
    f: &GridFunction,
    g: &GridFunction,
    radii_t: &RadiusGrid,
    radii_s: &RadiusGrid,
    rules: &MaximalRules,
) -> Result<GridFunction> {
    same_grid(f, g)?;
    let (rt, rs) = (radii_t.radii(), radii_s.radii());
    Ok(on_grid(f, |x| strong_bilinear_maximal_at(f, g, x, &rt, &rs, rules).map(|(v, t, _)| (v, t)))?.values)
}

fn same_grid(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if !f.same_grid(g) {
        return Err(Error::IncompatibleGrids(alloc::format!(
            "n={} L={} vs n={} L={}",
            f.n(),
            f.box_length(),
            g.n(),
            g.box_length()
        )));
    }
    Ok(())
}

/// One grid point of the domination check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DominationRow {
    pub index: usize,
    /// `𝓜(f,g)(x)`.
    pub value: f64,
    pub argmax_t: f64,
    /// `M̄f(x)`, normalized ball-average maximal function.
    pub hl: f64,
    /// `𝒮g(x)` over the induced radius set.
    pub spherical: f64,
    /// `value / (vol(B^d)·hl·spherical)`, zero when the left side vanishes.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DominationReport {
    pub rows: Vec<DominationRow>,
    /// The same check with the roles of `f` and `g` interchanged.
    pub swapped_rows: Vec<DominationRow>,
    pub max_ratio: f64,
    pub swapped_max_ratio: f64,
    pub induced_radii: usize,
}

impl DominationReport {
    /// True when both directions satisfy `ratio ≤ 1 + tol` everywhere.
    pub fn holds(&self, tol: f64) -> bool {
        self.max_ratio <= 1.0 + tol && self.swapped_max_ratio <= 1.0 + tol
    }

    /// `index,value,argmax_t,ratio,variant` rows.
    pub fn write_csv(&self, out: &mut impl fmt::Write) -> fmt::Result {
        writeln!(out, "variant,index,value,argmax_t,hl,spherical,ratio")?;
        for (name, rows) in [("fg", &self.rows), ("gf", &self.swapped_rows)] {
            for r in rows {
                writeln!(out, "{name},{},{:e},{:e},{:e},{:e},{:e}", r.index, r.value, r.argmax_t, r.hl, r.spherical, r.ratio)?;
            }
        }
        Ok(())
    }
}

/// Sorted, deduplicated `{t·√(1-|y_j|²)}` over radii and ball shells.
pub fn induced_radii(radii: &[f64], ball: &BallRule) -> Vec<f64> {
    let mut out: Vec<f64> = radii.iter().flat_map(|t| ball.shells().iter().map(move |s| t * s.co_radius)).collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup();
    out
}

/// Per-point check of `𝓜(f,g) ≤ vol(B^d)·M̄f·𝒮g` where `𝒮` runs over the
/// inner radii the bilinear average actually uses; both role assignments.
pub fn pointwise_domination_report(
    f: &GridFunction,
    g: &GridFunction,
    radii: &RadiusGrid,
    rules: &MaximalRules,
) -> Result<DominationReport> {
    same_grid(f, g)?;
    let rs = radii.radii();
    let induced = induced_radii(&rs, &rules.ball);
    let rows = domination_rows(f, g, &rs, &induced, rules)?;
    let swapped_rows = domination_rows(g, f, &rs, &induced, rules)?;
    let max_of = |rows: &[DominationRow]| rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(DominationReport {
        max_ratio: max_of(&rows),
        swapped_max_ratio: max_of(&swapped_rows),
        rows,
        swapped_rows,
        induced_radii: induced.len(),
    })
}

fn domination_rows(
    f: &GridFunction,
    g: &GridFunction,
    radii: &[f64],
    induced: &[f64],
    rules: &MaximalRules,
) -> Result<Vec<DominationRow>> {
    let d = f.dim();
    let vol = ball_volume(d);
    let (pf, pg) = (Pruner::of(f), Pruner::of(g));
    let mut table = alloc::vec![0.0; induced.len()];
    let mut rows = Vec::with_capacity(f.len());
    for index in 0..f.len() {
        let node = f.node(index);
        let x = &node[..d];
        if let Some(t_max) = radii.last() {
            check_wrap(f, x, *t_max)?;
            check_wrap(g, x, *t_max)?;
        }
        for (slot, rho) in table.iter_mut().zip(induced) {
            *slot = sphere_sum(g, x, *rho, &rules.sphere, Mode::Abs, pg).re;
        }
        let spherical = table.iter().copied().fold(0.0, f64::max);
        let mut missing = None;
        let (value, argmax_t) = sup_over(radii, |t| {
            let v = slice_level(f, x, t, &rules.ball, Mode::Abs, pf, |c| {
                let rho = t * c;
                match induced.binary_search_by(|r| r.total_cmp(&rho)) {
                    Ok(i) => Complex64::new(table[i], 0.0),
                    Err(_) => {
                        missing = Some(rho);
                        Complex64::new(f64::NAN, 0.0)
                    }
                }
            });
            Ok::<f64, Error>(v.re)
        })?;
        if let Some(rho) = missing {
            return Err(Error::InducedRadiusMissing(rho));
        }
        let (hl, _) = sup_over(radii, |t| {
            Ok::<f64, Error>(slice_level(f, x, t, &rules.ball_plain, Mode::Abs, pf, |_| Complex64::new(1.0, 0.0)).re / vol)
        })?;
        let bound = vol * hl * spherical;
        let ratio = if value == 0.0 { 0.0 } else { value / bound };
        rows.push(DominationRow { index, value, argmax_t, hl, spherical, ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::sphere_area;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn blob(seed: u64, n: usize, l: f64, c: [f64; 2], radius: f64) -> GridFunction {
        let rng = core::cell::RefCell::new(ChaCha8Rng::seed_from_u64(seed));
        GridFunction::from_real_fn(2, n, l, |x| {
            let r2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
            let v: f64 = rng.borrow_mut().gen_range(0.0..1.0);
            if r2 < radius * radius { v } else { 0.0 }
        })
        .unwrap()
    }

    fn small_radii() -> RadiusGrid {
        RadiusGrid::global(-2, 0, 4).unwrap()
    }

    #[test]
    fn radius_grid_layout() {
        let g = RadiusGrid::default_global();
        let r = g.radii();
        assert_eq!(r.len(), 9 * 16);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(r[0], 1.0 / 64.0);
        assert_eq!(*r.last().unwrap(), g.max_radius());
        let l = RadiusGrid::default_local().radii();
        assert_eq!((l.len(), l[0], l[31]), (32, 1.0, 1.0 + 31.0 / 32.0));
        assert_eq!(g.scaled(-1).radii()[0], 1.0 / 128.0);
    }

    #[test]
    fn constants() {
        let one = GridFunction::constant(2, 8, 8.0, 1.0).unwrap();
        let rules = MaximalRules::new(2, 8).unwrap();
        let radii = small_radii();
        let m = hl_maximal(&one, &radii, &rules).unwrap();
        assert!(m.values.values().iter().all(|v| (v.re - 1.0).abs() < 1e-12));
        let s = spherical_maximal(&one, &radii, &rules).unwrap();
        assert!(s.values.values().iter().all(|v| (v.re - 2.0 * PI).abs() < 1e-12));
        let b = bilinear_maximal(&one, &one, &radii, &rules).unwrap();
        assert!(b.values.values().iter().all(|v| (v.re - sphere_area(4)).abs() < 1e-9));
        let st = strong_bilinear_maximal(&one, &one, &radii, &radii, &rules).unwrap();
        assert!(st.values().iter().all(|v| (v.re - sphere_area(4)).abs() < 1e-9));
        let rep = pointwise_domination_report(&one, &one, &radii, &rules).unwrap();
        assert!(rep.rows.iter().all(|r| (r.ratio - 1.0).abs() < 1e-12));
    }

    #[test]
    fn hl_of_disk_indicator() {
        let a = 0.5;
        let f = GridFunction::from_real_fn(2, 64, 8.0, |x| if x[0] * x[0] + x[1] * x[1] < a * a { 1.0 } else { 0.0 }).unwrap();
        let rules = MaximalRules::new(2, 16).unwrap();
        let radii = [0.05, 0.1, 0.2];
        let (v, _) = hl_maximal_at(&f, &[0.0, 0.0], &radii, &rules).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let (v, t) = hl_maximal_at(&f, &[3.0 * a, 0.0], &[0.5, 1.0, 1.5, 2.0], &rules).unwrap();
        assert!(v > 0.0 && v < 1.0, "{v} at {t}");
    }

    #[test]
    fn radial_gaussian_maximizes_at_smallest_radius() {
        let f = GridFunction::from_real_fn(2, 64, 8.0, |x| libm::exp(-PI * (x[0] * x[0] + x[1] * x[1]))).unwrap();
        let rules = MaximalRules::new(2, 8).unwrap();
        let r = small_radii().radii();
        let (_, t) = spherical_maximal_at(&f, &[0.0, 0.0], &r, &rules.sphere).unwrap();
        assert_eq!(t, r[0]);
    }

    #[test]
    fn chains_and_monotonicity() {
        let f = blob(1, 16, 8.0, [0.0, 0.0], 1.0);
        let g = blob(2, 16, 8.0, [0.3, 0.0], 1.0);
        let rules = MaximalRules::new(2, 6).unwrap();
        let global = RadiusGrid::global(-1, 0, 4).unwrap();
        let local = RadiusGrid::local(4).unwrap();
        let mg = bilinear_maximal(&f, &g, &global, &rules).unwrap();
        let ml = bilinear_maximal(&f, &g, &local, &rules).unwrap();
        let st = strong_bilinear_maximal(&f, &g, &global, &global, &rules).unwrap();
        for i in 0..f.len() {
            assert!(ml.values.values()[i].re <= mg.values.values()[i].re);
            assert!(mg.values.values()[i].re <= st.values()[i].re);
        }
        let sl = spherical_maximal(&f, &local, &rules).unwrap();
        let sg = spherical_maximal(&f, &global, &rules).unwrap();
        for i in 0..f.len() {
            assert!(sl.values.values()[i].re <= sg.values.values()[i].re);
        }
    }

    #[test]
    fn strong_exceeds_diagonal_for_separated_bumps() {
        let f = blob(3, 32, 8.0, [0.5, 0.0], 0.3);
        let g = blob(4, 32, 8.0, [-1.5, 0.0], 0.3);
        let rules = MaximalRules::new(2, 12).unwrap();
        let radii = RadiusGrid::global(-2, 1, 8).unwrap().radii();
        let mut found = false;
        for x in [[0.0, 0.0], [0.2, 0.1], [-0.3, 0.2]] {
            let (diag, _) = bilinear_maximal_at(&f, &g, &x, &radii, &rules).unwrap();
            let (strong, _, _) = strong_bilinear_maximal_at(&f, &g, &x, &radii, &radii, &rules).unwrap();
            assert!(strong >= diag);
            found |= strong > diag * (1.0 + 1e-6);
        }
        assert!(found);
    }

    #[test]
    fn domination_on_random_pairs() {
        let rules = MaximalRules::new(2, 6).unwrap();
        for seed in 0..3 {
            let f = blob(10 + seed, 16, 8.0, [0.0, 0.2], 1.2);
            let g = blob(20 + seed, 16, 8.0, [0.1, 0.0], 1.4);
            let rep = pointwise_domination_report(&f, &g, &small_radii(), &rules).unwrap();
            assert!(rep.holds(1e-12), "{} {}", rep.max_ratio, rep.swapped_max_ratio);
            let direct = bilinear_maximal(&f, &g, &small_radii(), &rules).unwrap();
            for r in &rep.rows {
                assert_eq!(r.value, direct.values.values()[r.index].re);
            }
        }
        let zero = GridFunction::constant(2, 16, 8.0, 0.0).unwrap();
        let f = blob(5, 16, 8.0, [0.0, 0.0], 1.0);
        let rep = pointwise_domination_report(&f, &zero, &small_radii(), &rules).unwrap();
        assert!(rep.rows.iter().all(|r| r.value == 0.0 && r.ratio == 0.0));
    }

    #[test]
    fn sublinearity() {
        let rules = MaximalRules::new(2, 6).unwrap();
        let f1 = blob(30, 16, 8.0, [0.0, 0.0], 1.0);
        let f2 = blob(31, 16, 8.0, [0.5, 0.0], 1.0);
        let sum = f1.axpby(Complex64::new(1.0, 0.0), &f2, Complex64::new(1.0, 0.0)).unwrap();
        let r = small_radii();
        let (a, b, c) = (hl_maximal(&sum, &r, &rules).unwrap(), hl_maximal(&f1, &r, &rules).unwrap(), hl_maximal(&f2, &r, &rules).unwrap());
        for i in 0..sum.len() {
            assert!(a.values.values()[i].re <= b.values.values()[i].re + c.values.values()[i].re + 1e-12);
        }
    }
}
