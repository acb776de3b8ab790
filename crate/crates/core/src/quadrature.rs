//! Positive-weight product rules on spheres `S^{k-1}` and balls `B^d`.
//!
//! Spheres are built by recursive slicing `ω = (u, √(1-u²) ω')`: the height
//! `u` carries the weight `(1-u²)^{(k-3)/2}` and is integrated by Gauss-Jacobi
//! (plain Gauss-Legendre when `k = 3`), the circle by the trapezoid rule.
//! Balls use `r = sin φ` with Gauss-Legendre in `φ ∈ [0, π/2]`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::sum::PairwiseAcc;
use crate::{Error, Result};

/// Gauss-Jacobi nodes and weights for the symmetric weight `(1-x²)^a` on
/// `[-1, 1]`, in ascending node order. `a = 0` is Gauss-Legendre.
pub fn gauss_jacobi_symmetric(m: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let nf = m as f64;
    let ab = 2.0 * a;
    let log_norm = 2.0 * libm::lgamma(a + nf) - libm::lgamma(nf + 1.0) - libm::lgamma(nf + ab + 1.0);
    for i in 1..=m {
        // Asymptotic guess for the i-th largest zero, refined by Newton.
        let mut z = libm::cos(PI * (i as f64 - 0.25 + 0.5 * a) / (nf + 0.5 + a));
        for _ in 0..100 {
            let (p1, _, pp, _) = jacobi_eval(m, a, z);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-16 * (1.0 + z.abs()) {
                break;
            }
        }
        let (_, p2, pp, temp) = jacobi_eval(m, a, z);
        let w = libm::exp(log_norm) * temp * libm::pow(2.0, ab) / (pp * p2);
        nodes.push(z);
        weights.push(w);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// `(P_m, P_{m-1}, P_m', 2m + 2a)` for the symmetric Jacobi family at `z`.
fn jacobi_eval(m: usize, a: f64, z: f64) -> (f64, f64, f64, f64) {
    let ab = 2.0 * a;
    let mut temp = 2.0 + ab;
    let mut p1 = temp * z / 2.0;
    let mut p2 = 1.0;
    for j in 2..=m {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        temp = 2.0 * jf + ab;
        let aa = 2.0 * jf * (jf + ab) * (temp - 2.0);
        let bb = (temp - 1.0) * temp * (temp - 2.0) * z;
        let cc = 2.0 * (jf - 1.0 + a) * (jf - 1.0 + a) * temp;
        p1 = (bb * p2 - cc * p3) / aa;
    }
    let nf = m as f64;
    let pp = (nf * (-temp * z) * p1 + 2.0 * (nf + a) * (nf + a) * p2) / (temp * (1.0 - z * z));
    (p1, p2, pp, temp)
}

/// Gauss-Legendre on `[lo, hi]`.
pub fn gauss_legendre(m: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi_symmetric(m, 0.0);
    let (c, s) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
    (x.iter().map(|t| c + s * t).collect(), w.iter().map(|v| v * s).collect())
}

/// `|S^{k-1}| = 2π^{k/2}/Γ(k/2)`.
pub fn sphere_area(k: usize) -> f64 {
    2.0 * libm::pow(PI, k as f64 / 2.0) / libm::tgamma(k as f64 / 2.0)
}

/// `vol(B^d) = |S^{d-1}|/d`.
pub fn ball_volume(d: usize) -> f64 {
    sphere_area(d) / d as f64
}

/// Nodes and positive weights on `S^{k-1} ⊂ ℝ^k`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    k: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl SphereRule {
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.k..(i + 1) * self.k]
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn weight_sum(&self) -> f64 {
        let mut acc = PairwiseAcc::new();
        self.weights.iter().for_each(|w| acc.push(*w));
        acc.total()
    }

    /// `Σ w_i F(node_i)`.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let mut acc = PairwiseAcc::new();
        for i in 0..self.len() {
            acc.push(self.weights[i] * f(self.node(i)));
        }
        acc.total()
    }

    /// One `x1,…,xk,weight` row per node.
    pub fn write_csv(&self, out: &mut impl fmt::Write) -> fmt::Result {
        write_rule_csv(out, self.k, &self.nodes, &self.weights)
    }
}

fn write_rule_csv(out: &mut impl fmt::Write, dim: usize, nodes: &[f64], weights: &[f64]) -> fmt::Result {
    for a in 0..dim {
        write!(out, "x{},", a + 1)?;
    }
    writeln!(out, "weight")?;
    for (i, w) in weights.iter().enumerate() {
        for a in 0..dim {
            write!(out, "{:e},", nodes[i * dim + a])?;
        }
        writeln!(out, "{w:e}")?;
    }
    Ok(())
}

/// Rule on `S^{k-1}` exact for polynomials of total degree `≤ order`;
/// `k ∈ {2, 3, 4, 6}`.
pub fn sphere_rule(k: usize, order: usize) -> Result<SphereRule> {
    if ![2, 3, 4, 6].contains(&k) {
        return Err(Error::UnsupportedDimension(k));
    }
    if order < 4 {
        return Err(Error::OrderTooLow(order));
    }
    Ok(sphere_rule_any(k, order))
}

fn sphere_rule_any(k: usize, order: usize) -> SphereRule {
    if k == 2 {
        let m = order + 1;
        let mut nodes = Vec::with_capacity(2 * m);
        for j in 0..m {
            let a = 2.0 * PI * j as f64 / m as f64;
            nodes.push(libm::cos(a));
            nodes.push(libm::sin(a));
        }
        let weights = alloc::vec![2.0 * PI / m as f64; m];
        return SphereRule { k, nodes, weights, order };
    }
    let sub = sphere_rule_any(k - 1, order);
    let (us, uw) = gauss_jacobi_symmetric(order / 2 + 1, (k as f64 - 3.0) / 2.0);
    let mut nodes = Vec::with_capacity(us.len() * sub.len() * k);
    let mut weights = Vec::with_capacity(us.len() * sub.len());
    for (u, wu) in us.iter().zip(&uw) {
        let c = libm::sqrt(1.0 - u * u);
        for i in 0..sub.len() {
            nodes.push(*u);
            nodes.extend(sub.node(i).iter().map(|v| c * v));
            weights.push(wu * sub.weights[i]);
        }
    }
    SphereRule { k, nodes, weights, order }
}

/// One radial level of a [`BallRule`]: nodes `radius·ω_i` for every node of
/// the angular rule.
#[derive(Clone, Copy, Debug)]
pub struct Shell {
    pub radius: f64,
    /// `√(1 - radius²)`, the scale of the inner sphere in the slicing identity.
    pub co_radius: f64,
    /// Weight of the shell before multiplication by angular weights.
    pub radial_weight: f64,
}

/// Product rule on `B^d(0,1)`, optionally with the slicing density
/// `(1-|y|²)^{(d-2)/2}` folded into the weights.
#[derive(Clone, Debug)]
pub struct BallRule {
    d: usize,
    shells: Vec<Shell>,
    angular: SphereRule,
    embedded_weight_exponent: Option<f64>,
}

impl BallRule {
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }
    pub fn angular(&self) -> &SphereRule {
        &self.angular
    }
    pub fn embedded_weight_exponent(&self) -> Option<f64> {
        self.embedded_weight_exponent
    }
    pub fn len(&self) -> usize {
        self.shells.len() * self.angular.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `j` in shell-major order.
    pub fn node(&self, j: usize, out: &mut [f64]) {
        let (s, i) = (j / self.angular.len(), j % self.angular.len());
        let r = self.shells[s].radius;
        for (o, w) in out.iter_mut().zip(self.angular.node(i)) {
            *o = r * w;
        }
    }

    pub fn weight(&self, j: usize) -> f64 {
        let (s, i) = (j / self.angular.len(), j % self.angular.len());
        self.shells[s].radial_weight * self.angular.weights[i]
    }

    pub fn weight_sum(&self) -> f64 {
        let mut acc = PairwiseAcc::new();
        (0..self.len()).for_each(|j| acc.push(self.weight(j)));
        acc.total()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let mut y = [0.0; 3];
        let mut acc = PairwiseAcc::new();
        for j in 0..self.len() {
            self.node(j, &mut y[..self.d]);
            acc.push(self.weight(j) * f(&y[..self.d]));
        }
        acc.total()
    }

    pub fn write_csv(&self, out: &mut impl fmt::Write) -> fmt::Result {
        let mut nodes = Vec::with_capacity(self.len() * self.d);
        let mut y = [0.0; 3];
        for j in 0..self.len() {
            self.node(j, &mut y[..self.d]);
            nodes.extend_from_slice(&y[..self.d]);
        }
        let weights: Vec<f64> = (0..self.len()).map(|j| self.weight(j)).collect();
        write_rule_csv(out, self.d, &nodes, &weights)
    }
}

/// Number of Gauss-Legendre points in `φ` used by [`ball_rule`].
pub fn ball_radial_points(order: usize) -> usize {
    order / 2 + 6
}

/// Ball rule; with `with_slicing_weight` the weights include `(1-|y|²)^{(d-2)/2}`.
pub fn ball_rule(d: usize, order: usize, with_slicing_weight: bool) -> Result<BallRule> {
    build_ball(d, order, with_slicing_weight.then_some((d as f64 - 2.0) / 2.0))
}

/// Ball rule with the density `(1-|y|²)^exponent` folded into the weights.
pub fn ball_rule_with_exponent(d: usize, order: usize, exponent: f64) -> Result<BallRule> {
    build_ball(d, order, Some(exponent))
}

fn build_ball(d: usize, order: usize, exponent: Option<f64>) -> Result<BallRule> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if order < 4 {
        return Err(Error::OrderTooLow(order));
    }
    let angular = sphere_rule_any(d, order);
    let (phis, ws) = gauss_legendre(ball_radial_points(order), 0.0, PI / 2.0);
    let shells = phis
        .iter()
        .zip(&ws)
        .map(|(phi, w)| {
            let (s, c) = (libm::sin(*phi), libm::cos(*phi));
            // dy = r^{d-1} dr dσ with dr = cos φ dφ; (1-r²)^e = cos^{2e} φ.
            let mut radial_weight = w * libm::pow(s, d as f64 - 1.0) * c;
            if let Some(e) = exponent.filter(|e| *e != 0.0) {
                radial_weight *= libm::pow(c, 2.0 * e);
            }
            Shell { radius: s, co_radius: c, radial_weight }
        })
        .collect();
    Ok(BallRule { d, shells, angular, embedded_weight_exponent: exponent })
}

/// Order check used by callers that take an explicit rule.
pub(crate) fn expect_sphere_dim(rule: &SphereRule, k: usize) -> Result<()> {
    if rule.k() != k {
        return Err(Error::InvalidParameter(format!("rule lives on S^{} but S^{} is needed", rule.k() - 1, k - 1)));
    }
    Ok(())
}
