//! Every check and scan the CLI exposes. Each returns an [`Outcome`] whose
//! table rows carry the grid and rule parameters that produced them.
//!
//! Work is parallel over independent items only; results are collected in
//! input order and reduced sequentially, so output does not depend on the
//! thread count.

use std::time::Instant;

use bisph_core::bochner_riesz::checks::{
    kernel_decay_sweep, multiplier_partition_check, multiplier_reconstruction_check, partition_of_unity_defect, KernelGrid,
    PartitionSetup,
};
use bisph_core::bochner_riesz::profile::{dyadic_profile_decomposition, profile_corpus, BumpProfile, Shape, DEFAULT_CN};
use bisph_core::bochner_riesz::square::{
    lo_square_energy, lo_square_function, mixed_square_function, LO_SAMPLES_PER_INV_DELTA, MIXED_SAMPLES_PER_INV_DELTA,
};
use bisph_core::bochner_riesz::br_bilinear;
use bisph_core::counterexamples::{fit_log_log, fit_scaling_exponent, run_scan, GridConfig, ScanFamily, ScanOperator, SlopeFit};
use bisph_core::exponents::{
    self, alpha_star, global_region, localized_region, p_s, q, ExactExponents, RegionVerdict, Status,
};
use bisph_core::grid::{ExponentPoint, GridFunction};
use bisph_core::maximal::{pointwise_domination_report, MaximalRules, RadiusGrid};
use bisph_core::quadrature::{ball_rule, sphere_rule, BallRule, SphereRule};
use bisph_core::spherical::{direct_multilinear_average, sliced_bilinear_average, Analytic, Mode, PointEval, SpectralInterpolant};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::config::{
    DominationParams, ExponentGridParams, FamilyKind, KernelParams, OperatorKind, OracleParams, PartitionParams,
    ReconstructParams, ScanParams, SlicingParams, SqfnParams,
};
use crate::corpus;
use crate::io::{num, Outcome, Table};
use crate::oracle::{self, Expect};
use crate::{LabError, Result};

fn s(v: impl Into<String>) -> Value {
    Value::String(v.into())
}

fn fmt_point(x: &[f64]) -> Value {
    s(x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
}

fn shape_name(p: &BumpProfile) -> String {
    format!("{:?}", p.shape).to_lowercase()
}

fn worst(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a })
}

// ------------------------------------------------------------ slicing

type BoxedFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Positive closed-form pairs: Gaussians with different centres and
/// anisotropy, a polynomial-weighted Gaussian and a modulated one. Widths
/// stay at or above one so an order-12 rule resolves every integrand; a
/// `e^{-3|x|²}` factor already costs two digits at that order.
fn analytic_pairs() -> Vec<(&'static str, BoxedFn, BoxedFn)> {
    let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    vec![
        ("gauss-gauss", Box::new(move |x: &[f64]| (-r2(x)).exp()), Box::new(move |x: &[f64]| (-(r2(x) - x[0] + 0.25) / 2.0).exp())),
        (
            "anisotropic",
            Box::new(|x: &[f64]| (-(0.5 * x[0] * x[0] + x[1] * x[1])).exp()),
            Box::new(|x: &[f64]| (-(x[0] * x[0] + 0.5 * (x[1] - 0.3).powi(2))).exp()),
        ),
        ("poly-gauss", Box::new(move |x: &[f64]| (1.0 + x[0] * x[0]) * (-r2(x)).exp()), Box::new(move |x: &[f64]| (-r2(x) / 3.0).exp())),
        (
            "modulated",
            Box::new(move |x: &[f64]| (1.5 + (2.0 * x[0]).cos()) * (-r2(x) / 2.0).exp()),
            Box::new(move |x: &[f64]| 1.0 + 0.5 * (x[1] + 0.2 * x[0]).sin()),
        ),
        ("shifted", Box::new(move |x: &[f64]| (-(r2(x) + x[1] + 0.25)).exp()), Box::new(move |x: &[f64]| 1.0 / (1.0 + r2(x)))),
    ]
}

struct SliceRow {
    pair: usize,
    kind: String,
    x: Vec<f64>,
    t: f64,
    direct: f64,
    sliced: f64,
}

#[allow(clippy::too_many_arguments)]
fn slice_points(
    p: &SlicingParams,
    pair: usize,
    kind: &str,
    f: &dyn PointEval,
    g: &dyn PointEval,
    rng: &mut rand_chacha::ChaCha8Rng,
    direct_rule: &SphereRule,
    ball: &BallRule,
    inner: &SphereRule,
) -> Result<Vec<SliceRow>> {
    (0..p.points_per_pair)
        .map(|k| {
            let x = corpus::uniform_point(rng, p.d, 1.0);
            let t = p.radii[k % p.radii.len()];
            let a = direct_multilinear_average(&[f, g], &x, t, direct_rule, Mode::Signed)?;
            let b = sliced_bilinear_average(f, g, &x, t, ball, inner, Mode::Signed)?;
            Ok(SliceRow { pair, kind: kind.into(), x, t, direct: a.re, sliced: b.re })
        })
        .collect()
}

/// Direct `S^{2d-1}` quadrature against the sliced ball × sphere evaluation.
pub fn slice_check(p: &SlicingParams, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let d = p.d;
    if p.radii.is_empty() || p.points_per_pair == 0 {
        return Err(LabError::Config("slice-check needs radii and points".into()));
    }
    let direct_rule = sphere_rule(2 * d, p.order)?;
    let ball = ball_rule(d, p.order, true)?;
    let inner = sphere_rule(d, p.order)?;
    let eval_pair = |pair: usize, kind: &str, f: &dyn PointEval, g: &dyn PointEval, rng: &mut rand_chacha::ChaCha8Rng| {
        slice_points(p, pair, kind, f, g, rng, &direct_rule, &ball, &inner)
    };
    let random: Vec<Vec<SliceRow>> = (0..p.random_pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = corpus::rng(seed, 100 + i as u64);
            let f = corpus::band_limited_positive(&mut rng, d, p.n, p.box_length, p.max_mode, p.terms)?;
            let g = corpus::band_limited_positive(&mut rng, d, p.n, p.box_length, p.max_mode, p.terms)?;
            let (fi, gi) = (SpectralInterpolant::from_grid(&f, 1e-12), SpectralInterpolant::from_grid(&g, 1e-12));
            eval_pair(i, "band-limited", &fi, &gi, &mut rng)
        })
        .collect::<Result<_>>()?;
    let pairs = analytic_pairs();
    if p.analytic_pairs > pairs.len() {
        return Err(LabError::Config(format!("at most {} analytic pairs", pairs.len())));
    }
    let analytic: Vec<Vec<SliceRow>> = pairs
        .into_par_iter()
        .take(p.analytic_pairs)
        .enumerate()
        .map(|(i, (name, f, g))| {
            let mut rng = corpus::rng(seed, 150 + i as u64);
            eval_pair(p.random_pairs + i, name, &Analytic::new(d, f), &Analytic::new(d, g), &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["pair", "kind", "x", "t", "direct", "sliced", "rel_err", "d", "n", "box_length", "order"]);
    let mut max_rel = 0.0f64;
    for r in random.iter().chain(&analytic).flatten() {
        let rel = (r.direct - r.sliced).abs() / r.direct.abs();
        max_rel = worst([max_rel, rel].into_iter());
        table.push(vec![
            json!(r.pair),
            s(&r.kind),
            fmt_point(&r.x),
            num(r.t),
            num(r.direct),
            num(r.sliced),
            num(rel),
            json!(d),
            json!(p.n),
            num(p.box_length),
            json!(p.order),
        ]);
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome {
        check: "slice-check".into(),
        passed: max_rel <= p.tolerance && elapsed <= p.time_limit_s,
        measured: max_rel,
        threshold: format!("max rel err <= {:e}, runtime <= {} s", p.tolerance, p.time_limit_s),
        summary: json!({
            "max_rel_err": num(max_rel),
            "evaluations": table.rows.len(),
            "random_pairs": p.random_pairs,
            "analytic_pairs": p.analytic_pairs,
            "d": d, "n": p.n, "box_length": num(p.box_length), "order": p.order,
            "direct_nodes": direct_rule.len(),
        }),
        table,
        elapsed_s: elapsed,
    })
}

// --------------------------------------------------------- domination

pub fn domination(p: &DominationParams, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let d = p.d;
    let radii = RadiusGrid::global(p.k_min, p.k_max, p.n_local)?;
    let rules = MaximalRules::new(d, p.order)?;
    let reports: Vec<(f64, f64, usize)> = (0..p.pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = corpus::rng(seed, 200 + i as u64);
            let blob = |rng: &mut rand_chacha::ChaCha8Rng| {
                let c = corpus::uniform_point(rng, d, 0.2);
                let radius = rng.gen_range(p.support_radius / 2.0..=p.support_radius);
                corpus::nonnegative_blob(rng, d, p.n, p.box_length, &c, radius)
            };
            let f = blob(&mut rng)?;
            let g = blob(&mut rng)?;
            let rep = pointwise_domination_report(&f, &g, &radii, &rules)?;
            Ok((rep.max_ratio, rep.swapped_max_ratio, rep.induced_radii))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["pair", "max_ratio", "swapped_max_ratio", "induced_radii", "d", "n", "box_length", "order", "k_min", "k_max", "n_local"]);
    for (i, (a, b, k)) in reports.iter().enumerate() {
        table.push(vec![
            json!(i),
            num(*a),
            num(*b),
            json!(k),
            json!(d),
            json!(p.n),
            num(p.box_length),
            json!(p.order),
            json!(p.k_min),
            json!(p.k_max),
            json!(p.n_local),
        ]);
    }
    let max_ratio = worst(reports.iter().flat_map(|r| [r.0, r.1]));
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome {
        check: "domination".into(),
        passed: max_ratio <= 1.0 + p.tolerance && elapsed <= p.time_limit_s,
        measured: max_ratio,
        threshold: format!("ratio <= 1 + {:e} at every grid point, runtime <= {} s", p.tolerance, p.time_limit_s),
        summary: json!({"max_ratio": num(max_ratio), "pairs": p.pairs, "grid_points": p.n.pow(d as u32), "radii": radii.len()}),
        table,
        elapsed_s: elapsed,
    })
}

// --------------------------------------------------------------- scans

/// Two Gaussians on a 16² grid of side 8; the scaling scan rescales them.
pub fn scaling_pair(d: usize) -> Result<(GridFunction, GridFunction)> {
    let f = GridFunction::from_real_fn(d, 16, 8.0, |x| (-(x[0] * x[0] + 2.0 * x[1..].iter().map(|v| v * v).sum::<f64>())).exp())?;
    let g = GridFunction::from_real_fn(d, 16, 8.0, |x| (-((x[0] - 0.5).powi(2) + x[1..].iter().map(|v| v * v).sum::<f64>())).exp())?;
    Ok((f, g))
}

/// 95% Student-t interval for the fitted slope.
pub fn slope_interval(fit: &SlopeFit) -> (f64, f64) {
    if fit.points < 3 || fit.slope_stderr == 0.0 {
        return (fit.slope, fit.slope);
    }
    let t = StudentsT::new(0.0, 1.0, (fit.points - 2) as f64).expect("positive dof").inverse_cdf(0.975);
    (fit.slope - t * fit.slope_stderr, fit.slope + t * fit.slope_stderr)
}

fn exponent_point(d: usize, p: &ScanParams) -> Result<ExponentPoint> {
    let e = ExactExponents::parse(d, &p.p, &p.q, &p.r)?;
    Ok(ExponentPoint::new(d, exponents::to_f64(e.up), exponents::to_f64(e.uq), exponents::to_f64(e.ur))?)
}

pub fn scan(p: &ScanParams) -> Result<Outcome> {
    let start = Instant::now();
    let d = p.d;
    let params = p.params.clone().unwrap_or_else(|| p.default_params());
    let op = match (p.operator, p.family) {
        (Some(OperatorKind::LocalProbe), _) => ScanOperator::LocalProbe,
        (Some(OperatorKind::NormQuotient), _) | (None, FamilyKind::Scaling) => ScanOperator::NormQuotient,
        (None, _) => ScanOperator::LocalProbe,
    };
    let mut grid = GridConfig::default_for(d);
    grid.n = p.n.unwrap_or(grid.n);
    grid.box_length = p.box_length.unwrap_or(grid.box_length);
    let family = match p.family {
        FamilyKind::Knapp => ScanFamily::Knapp { d, grid },
        FamilyKind::Annulus => ScanFamily::Annulus { d, eps: p.eps, grid },
        FamilyKind::Scaling => {
            let (f, g) = scaling_pair(d)?;
            ScanFamily::Scaling { f, g, radii: RadiusGrid::global(-2, -1, 2)?, order: 6 }
        }
    };
    let e = exponent_point(d, p)?;
    // One family member per parameter; independent, so scan them in parallel.
    let records: Vec<_> = params
        .par_iter()
        .map(|&x| run_scan(&family, op, &e, &[x]).map(|mut v| v.remove(0)))
        .collect::<std::result::Result<_, _>>()?;
    let fit = fit_scaling_exponent(&records)?;
    let (lo, hi) = slope_interval(&fit);
    // The check each family witnesses.
    let (expected, tol, measured, threshold): (Option<f64>, f64, f64, String) = match (p.family, op) {
        (FamilyKind::Knapp, ScanOperator::LocalProbe) => {
            let target = 2.0 * d as f64 - 1.0;
            (Some(target), p.knapp_slope_tol, fit.slope, format!("|slope - {target}| <= {}", p.knapp_slope_tol))
        }
        (FamilyKind::Annulus, ScanOperator::LocalProbe) if d == 2 => {
            (Some(1.0), p.annulus_slope_tol, fit.slope, format!("|slope - 1| <= {}", p.annulus_slope_tol))
        }
        (FamilyKind::Scaling, ScanOperator::NormQuotient) if e.holder => {
            let r0 = records[0].ratio;
            let spread = worst(records.iter().map(|r| (r.ratio / r0 - 1.0).abs()));
            (Some(0.0), p.holder_rel_tol, spread, format!("max |ratio/ratio_0 - 1| <= {:e}", p.holder_rel_tol))
        }
        (FamilyKind::Scaling, ScanOperator::NormQuotient) => {
            let target = d as f64 * e.holder_defect();
            (Some(target), p.slope_tol, fit.slope, format!("|slope - {target}| <= {:e}", p.slope_tol))
        }
        _ => (None, 0.0, fit.slope, "none (report only)".into()),
    };
    let passed = match (p.family, expected) {
        (_, None) => true,
        (FamilyKind::Scaling, Some(_)) if e.holder => measured <= tol,
        (_, Some(target)) => (measured - target).abs() <= tol,
    };
    let mut table = Table::new(&[
        "family", "d", "param", "statistic", "norm_p", "norm_q", "norm_r", "operator", "n", "box_length", "order_factor", "c1", "eps",
    ]);
    for r in &records {
        let m = &r.meta;
        table.push(vec![
            s(&m.family),
            json!(d),
            num(r.parameter),
            num(r.ratio),
            s(&p.p),
            s(&p.q),
            s(&p.r),
            s(&m.operator),
            json!(m.n),
            num(m.box_length),
            num(m.order_factor),
            m.c1.map(num).unwrap_or(Value::Null),
            m.eps.map(num).unwrap_or(Value::Null),
        ]);
    }
    let table = table
        .with_constant("slope", num(fit.slope))
        .with_constant("slope_ci_lo", num(lo))
        .with_constant("slope_ci_hi", num(hi))
        .with_constant("r_squared", num(fit.r_squared));
    Ok(Outcome {
        check: format!("scan-{}", records[0].meta.family),
        passed,
        measured,
        threshold,
        summary: json!({
            "slope": num(fit.slope),
            "slope_ci95": [num(lo), num(hi)],
            "r_squared": num(fit.r_squared),
            "expected": expected.map(num),
            "operator": op.tag(),
            "holder": e.holder,
            "points": records.len(),
        }),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// -------------------------------------------------- profile reconstruction

pub fn br_reconstruct(p: &ReconstructParams) -> Result<Outcome> {
    let start = Instant::now();
    let rows: Vec<_> = p
        .alphas
        .par_iter()
        .map(|&alpha| {
            let dec = dyadic_profile_decomposition(alpha, p.truncation)?;
            let lattice = multiplier_reconstruction_check(&dec, p.d, p.n, p.box_length, p.lambda, p.factor)?;
            Ok((alpha, dec.report, lattice))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "alpha", "truncation", "profile_residual", "bound", "ratio", "lattice_residual", "lattice_passed", "d", "n", "box_length", "lambda", "samples",
    ]);
    let mut passed = true;
    let mut measured = 0.0f64;
    for (alpha, rep, lat) in &rows {
        let ratio = rep.residual / rep.bound;
        passed &= rep.residual <= p.factor * rep.bound && lat.passed;
        measured = worst([measured, ratio].into_iter());
        table.push(vec![
            num(*alpha),
            json!(p.truncation),
            num(rep.residual),
            num(rep.bound),
            num(ratio),
            num(lat.sup_error),
            json!(lat.passed),
            json!(p.d),
            json!(p.n),
            num(p.box_length),
            num(p.lambda),
            json!(rep.samples),
        ]);
    }
    Ok(Outcome {
        check: "br-reconstruct".into(),
        passed,
        measured,
        threshold: format!("residual / 2^(-J alpha) <= {}", p.factor),
        summary: json!({"worst_ratio": num(measured), "alphas": p.alphas.iter().map(|a| num(*a)).collect::<Vec<_>>(), "truncation": p.truncation}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// ----------------------------------------------------- square functions

fn samples(per_inv_delta: f64, delta: f64) -> usize {
    (per_inv_delta / delta).ceil() as usize + 1
}

/// `‖𝔖^φ_δ f‖₂ ≤ √(2δ)‖f‖₂` over the profile corpus, random inputs and a
/// `δ` sweep.
pub fn sqfn_plancherel(p: &SqfnParams, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let profiles = profile_corpus()?;
    let inputs: Vec<GridFunction> = (0..p.functions)
        .map(|i| corpus::random_complex(&mut corpus::rng(seed, 600 + i as u64), p.d, p.n, p.box_length))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize, f64)> = (0..profiles.len())
        .flat_map(|a| (0..inputs.len()).flat_map(move |b| p.deltas.iter().map(move |&dl| (a, b, dl))))
        .collect();
    // `sharp_ratio` divides by `√(δ∫φ²)‖f‖₂` instead, the exact constant
    // for frequencies well inside the `t` range; it shows how much of the
    // bound the certified (small-amplitude) profiles actually use.
    let results: Vec<(f64, f64, f64)> = jobs
        .par_iter()
        .map(|&(a, b, delta)| {
            let (phi, f) = (&profiles[a], &inputs[b]);
            let t = samples(LO_SAMPLES_PER_INV_DELTA, delta);
            let sq = lo_square_function(f, phi, delta, t)?;
            let energy = lo_square_energy(f, phi, delta, t)?;
            let bound = (2.0 * delta).sqrt() * f.lp_norm(0.5);
            let sharp = (delta * phi.l2_squared()).sqrt() * f.lp_norm(0.5);
            Ok((sq.lp_norm(0.5) / bound, energy.sqrt() / bound, sq.lp_norm(0.5) / sharp))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["profile", "input", "delta", "t_samples", "ratio", "frequency_ratio", "sharp_ratio", "d", "n", "box_length"]);
    let mut violations = 0usize;
    for (&(a, b, delta), &(ratio, freq, sharp)) in jobs.iter().zip(&results) {
        // NaN counts as a violation.
        violations += usize::from(ratio.is_nan() || ratio > 1.0);
        table.push(vec![
            s(shape_name(&profiles[a])),
            json!(b),
            num(delta),
            json!(samples(LO_SAMPLES_PER_INV_DELTA, delta)),
            num(ratio),
            num(freq),
            num(sharp),
            json!(p.d),
            json!(p.n),
            num(p.box_length),
        ]);
    }
    let max_ratio = worst(results.iter().map(|r| r.0));
    let max_sharp = worst(results.iter().map(|r| r.2));
    Ok(Outcome {
        check: "sqfn-plancherel".into(),
        passed: violations == 0,
        measured: violations as f64,
        threshold: "zero violations of ||S f||_2 <= sqrt(2 delta) ||f||_2".into(),
        summary: json!({"violations": violations, "max_ratio": num(max_ratio), "max_sharp_ratio": num(max_sharp), "cases": jobs.len()}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// δ-slope of `‖sup_k 𝔇^φ_{δ,k} f‖₂ / ‖f‖₂` for each corpus profile.
pub fn sqfn_mixed(p: &SqfnParams, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let profiles = profile_corpus()?;
    let f = corpus::sparse_trig(&mut corpus::rng(seed, 700), p.d, p.mixed_n, p.mixed_box_length, p.mixed_max_mode, p.mixed_terms)?;
    let f_norm = f.lp_norm(0.5);
    let jobs: Vec<(usize, f64)> = (0..profiles.len()).flat_map(|a| p.mixed_deltas.iter().map(move |&dl| (a, dl))).collect();
    let values: Vec<(f64, usize)> = jobs
        .par_iter()
        .map(|&(a, delta)| {
            let ms = mixed_square_function(&f, &profiles[a], delta, (p.k_min, p.k_max), samples(MIXED_SAMPLES_PER_INV_DELTA, delta))?;
            Ok((ms.sup.lp_norm(0.5) / f_norm, ms.modes))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["profile", "delta", "lambda_samples", "normalized_sup", "modes", "k_min", "k_max", "d", "n", "box_length"]);
    for (&(a, delta), &(v, modes)) in jobs.iter().zip(&values) {
        table.push(vec![
            s(shape_name(&profiles[a])),
            num(delta),
            json!(samples(MIXED_SAMPLES_PER_INV_DELTA, delta)),
            num(v),
            json!(modes),
            json!(p.k_min),
            json!(p.k_max),
            json!(p.d),
            json!(p.mixed_n),
            num(p.mixed_box_length),
        ]);
    }
    let mut slopes = serde_json::Map::new();
    let mut min_slope = f64::INFINITY;
    for (a, phi) in profiles.iter().enumerate() {
        let pts: Vec<(f64, f64)> = jobs.iter().zip(&values).filter(|(j, _)| j.0 == a).map(|(j, v)| (j.1, v.0)).collect();
        let fit = fit_log_log(&pts)?;
        min_slope = min_slope.min(fit.slope);
        slopes.insert(shape_name(phi), num(fit.slope));
    }
    Ok(Outcome {
        check: "sqfn-mixed".into(),
        passed: min_slope >= p.slope_floor,
        measured: min_slope,
        threshold: format!("delta-slope >= {}", p.slope_floor),
        summary: json!({"min_slope": num(min_slope), "slopes": slopes}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// ------------------------------------------------------------ partition

/// The unnormalized partition profile: its integer translates sum to one.
pub fn partition_profile() -> Result<BumpProfile> {
    Ok(BumpProfile::new(Shape::Partition, DEFAULT_CN)?)
}

pub fn partition(p: &PartitionParams) -> Result<Outcome> {
    let start = Instant::now();
    let psi = dyadic_profile_decomposition(p.alpha, 10)?.psi;
    let phi = partition_profile()?;
    let setup = PartitionSetup { d: p.d, n: p.n, box_length: p.box_length, delta: p.delta, eps: p.eps, lambda: p.lambda };
    let rep = multiplier_partition_check(&setup, &psi, &phi)?;
    let mut table = Table::new(&["check", "delta", "eps", "lambda", "sup_error", "passed", "d", "n", "box_length"]);
    table.push(vec![s(&rep.check), num(p.delta), num(p.eps), num(p.lambda), num(rep.sup_error), json!(rep.passed), json!(p.d), json!(p.n), num(p.box_length)]);
    let mut constants: serde_json::Map<String, Value> = rep.constants.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    constants.insert("unity_defect".into(), num(partition_of_unity_defect(&phi, 4096)));
    Ok(Outcome {
        check: "partition".into(),
        passed: rep.passed,
        measured: rep.sup_error,
        threshold: "lattice sup error <= 1e-10 and cell counts within bounds".into(),
        summary: json!({"sup_error": num(rep.sup_error), "constants": constants}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// --------------------------------------------------------------- kernel

pub fn kernel_grid(p: &KernelParams) -> KernelGrid {
    let mut g = KernelGrid::default_for(p.d);
    g.n = p.n.unwrap_or(g.n);
    g.box_length = p.box_length.unwrap_or(g.box_length);
    g
}

pub fn kernel(p: &KernelParams) -> Result<Outcome> {
    let start = Instant::now();
    let grid = kernel_grid(p);
    let sweeps: Vec<_> = profile_corpus()?
        .into_par_iter()
        .map(|phi| kernel_decay_sweep(&phi, p.rho_factor, &p.deltas, &grid).map(|r| (shape_name(&phi), r)))
        .collect::<std::result::Result<_, _>>()?;
    let mut table = Table::new(&["profile", "delta", "rho", "constant", "radial_defect", "tail_ratio", "d", "n", "box_length"]);
    let mut ratios = serde_json::Map::new();
    let mut worst_ratio = 0.0f64;
    for (name, (reports, ratio)) in &sweeps {
        worst_ratio = worst([worst_ratio, *ratio].into_iter());
        ratios.insert(name.clone(), num(*ratio));
        for r in reports {
            let c = |k: &str| r.constant(k).map(num).unwrap_or(Value::Null);
            table.push(vec![
                s(name),
                r.delta.map(num).unwrap_or(Value::Null),
                c("rho"),
                c("constant"),
                c("radial_rel"),
                c("tail_ratio"),
                json!(grid.d),
                json!(grid.n),
                num(grid.box_length),
            ]);
        }
    }
    Ok(Outcome {
        check: "kernel".into(),
        passed: worst_ratio <= p.max_ratio,
        measured: worst_ratio,
        threshold: format!("consecutive-delta constant ratio <= {}", p.max_ratio),
        summary: json!({"worst_ratio": num(worst_ratio), "ratios": ratios}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// ------------------------------------------------------------ exponents

fn status_name(v: &RegionVerdict) -> &'static str {
    match v.status {
        Status::Bounded => "Bounded",
        Status::Unbounded => "Unbounded",
        Status::WeakLorentz => "WeakLorentz",
        Status::Open => "Open",
    }
}

/// Exact exponent identities plus a rational-grid audit of the global and
/// localized classifiers against the theorem oracle.
pub fn exponent_audit(p: &ExponentGridParams) -> Result<Outcome> {
    let start = Instant::now();
    let half = q(1, 2);
    let mut identity_failures = Vec::new();
    for d in 2..=p.max_alpha_star_dim {
        let nu = p_s(d)?.recip();
        let a = alpha_star(half, half, nu, d)?;
        if a.value != exponents::qi(1) {
            identity_failures.push(format!("alpha*(2,2) at d = {d} is {}", exponents::format_rational(a.value)));
        }
    }
    for (d, want) in [(2, q(4, 1)), (3, q(10, 3)), (4, q(3, 1))] {
        if p_s(d)? != want {
            identity_failures.push(format!("p_s({d})"));
        }
    }
    let den = p.denominator;
    let mut table = Table::new(&["d", "p", "q", "r", "global", "global_expected", "localized", "localized_expected"]);
    let (mut points, mut contradictions, mut mismatches, mut asymmetric, mut inconsistent) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let expect_name = |e: Expect| match e {
        Expect::Bounded => "Bounded",
        Expect::Unbounded => "Unbounded",
        Expect::Silent => "",
    };
    for &d in &p.dims {
        for a in 0..=den {
            for b in 0..=den {
                for c in 0..=2 * den {
                    let e = ExactExponents::new(d, q(a, den), q(b, den), q(c, den))?;
                    let (g, l) = (global_region(&e), localized_region(&e));
                    let (ge, le) = (oracle::expected_global(d, den, a, b, c), oracle::expected_localized(d, den, a, b, c));
                    points += 1;
                    let clash = |v: &RegionVerdict, x: Expect| {
                        matches!((v.status, x), (Status::Bounded, Expect::Unbounded) | (Status::Unbounded, Expect::Bounded))
                    };
                    contradictions += usize::from(clash(&g, ge)) + usize::from(clash(&l, le));
                    let g_ok = match ge {
                        Expect::Bounded => g.status == Status::Bounded,
                        _ => matches!(g.status, Status::Unbounded | Status::WeakLorentz),
                    };
                    let l_ok = match le {
                        Expect::Bounded => l.status == Status::Bounded,
                        Expect::Unbounded => l.status == Status::Unbounded,
                        Expect::Silent => l.status == Status::Open,
                    };
                    mismatches += usize::from(!g_ok) + usize::from(!l_ok);
                    let sw = e.swapped();
                    asymmetric += usize::from(global_region(&sw).status != g.status) + usize::from(localized_region(&sw).status != l.status);
                    inconsistent += usize::from(g.status == Status::Bounded && l.status != Status::Bounded);
                    table.push(vec![
                        json!(d),
                        s(exponents::format_exponent(e.up)),
                        s(exponents::format_exponent(e.uq)),
                        s(exponents::format_exponent(e.ur)),
                        s(status_name(&g)),
                        s(expect_name(ge)),
                        s(status_name(&l)),
                        s(expect_name(le)),
                    ]);
                }
            }
        }
    }
    let passed = identity_failures.is_empty() && points >= 200 && contradictions == 0 && mismatches == 0 && asymmetric == 0 && inconsistent == 0;
    Ok(Outcome {
        check: "exponents".into(),
        passed,
        measured: contradictions as f64,
        threshold: "exact identities hold; >= 200 grid points; zero contradictions, mismatches, asymmetries".into(),
        summary: json!({
            "points": points,
            "contradictions": contradictions,
            "mismatches": mismatches,
            "asymmetric": asymmetric,
            "global_not_implying_localized": inconsistent,
            "identity_failures": identity_failures,
        }),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

// --------------------------------------------------------- BR oracle

/// FFT pair-summed `𝓑^α_λ(f, g)` against the direct double sum at random
/// grid points.
pub fn br_oracle(p: &OracleParams, seed: u64) -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = corpus::rng(seed, 800);
    let f = corpus::random_complex(&mut rng, p.d, p.n, p.box_length)?;
    let g = corpus::random_complex(&mut rng, p.d, p.n, p.box_length)?;
    let idx: Vec<usize> = (0..p.points).map(|_| rng.gen_range(0..f.len())).collect();
    let (fh, gh) = rayon::join(|| oracle::direct_dft(&f), || oracle::direct_dft(&g));
    let fast: Vec<GridFunction> = p.lambdas.iter().map(|&l| br_bilinear(&f, &g, p.alpha, l)).collect::<std::result::Result<_, _>>()?;
    let jobs: Vec<(usize, usize)> = (0..p.lambdas.len()).flat_map(|a| idx.iter().map(move |&i| (a, i))).collect();
    let slow: Vec<_> = jobs
        .par_iter()
        .map(|&(a, i)| {
            let x = f.node(i);
            oracle::bilinear_sum_at(&fh, &gh, p.box_length, &x[..p.d], oracle::bochner_riesz_symbol(p.alpha, p.lambdas[a]))
        })
        .collect();
    let mut table = Table::new(&["lambda", "index", "x", "fast_re", "fast_im", "oracle_re", "oracle_im", "rel_err", "alpha", "d", "n", "box_length"]);
    let mut max_rel = 0.0f64;
    for (&(a, i), o) in jobs.iter().zip(&slow) {
        let v = fast[a].values()[i];
        let rel = (v - o).norm() / o.norm();
        max_rel = worst([max_rel, rel].into_iter());
        let x = f.node(i);
        table.push(vec![
            num(p.lambdas[a]),
            json!(i),
            fmt_point(&x[..p.d]),
            num(v.re),
            num(v.im),
            num(o.re),
            num(o.im),
            num(rel),
            num(p.alpha),
            json!(p.d),
            json!(p.n),
            num(p.box_length),
        ]);
    }
    Ok(Outcome {
        check: "br-oracle".into(),
        passed: max_rel <= p.tolerance,
        measured: max_rel,
        threshold: format!("max rel err <= {:e}", p.tolerance),
        summary: json!({"max_rel_err": num(max_rel), "points": jobs.len()}),
        table,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}
