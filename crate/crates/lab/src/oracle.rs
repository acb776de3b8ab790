//! Reference implementations kept deliberately naive and independent of the
//! core code paths they check.

use std::f64::consts::PI;

use bisph_core::grid::GridFunction;
use bisph_core::Complex64;

/// Verdict a stated theorem forces at a point, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Bounded,
    Unbounded,
    Silent,
}

/// Reciprocal exponents `a/den, b/den, c/den` scaled by `den·d`, so every
/// threshold below is an integer comparison.
struct Scaled {
    d: i64,
    den: i64,
    p: i64,
    q: i64,
    r: i64,
}

impl Scaled {
    fn new(d: usize, den: i64, a: i64, b: i64, c: i64) -> Self {
        let d = d as i64;
        Self { d, den, p: a * d, q: b * d, r: c * d }
    }
    fn one(&self) -> i64 {
        self.den * self.d
    }
    /// `(2d-1)/d`.
    fn crit(&self) -> i64 {
        self.den * (2 * self.d - 1)
    }
}

/// Strong-type `L^p × L^q → L^r` for the full maximal operator: Hölder,
/// `r > d/(2d-1)`, and not `(1, ∞, 1)` or `(∞, 1, 1)`.
pub fn expected_global(d: usize, den: i64, a: i64, b: i64, c: i64) -> Expect {
    let s = Scaled::new(d, den, a, b, c);
    let one = s.one();
    let excluded = s.r == one && ((s.p == one && s.q == 0) || (s.p == 0 && s.q == one));
    if s.p + s.q == s.r && s.r < s.crit() && !excluded {
        Expect::Bounded
    } else {
        Expect::Unbounded
    }
}

/// Localized operator: necessity region, sufficiency region with its
/// equality cases, and the complete answer at `r = ∞`.
pub fn expected_localized(d: usize, den: i64, a: i64, b: i64, c: i64) -> Expect {
    let s = Scaled::new(d, den, a, b, c);
    let (one, crit, sum, r, dd) = (s.one(), s.crit(), s.p + s.q, s.r, s.d);
    let necessary = r <= sum && sum <= crit.min(one + dd * r);
    if !necessary {
        return Expect::Unbounded;
    }
    if r == 0 {
        return if sum <= one { Expect::Bounded } else { Expect::Unbounded };
    }
    let sufficient = if dd == 2 {
        (r < crit && sum < (one + r).min(crit)) || (sum == one + r && 2 * r < one)
    } else {
        r < crit && sum < (one + dd * r).min(crit).min(r + 2 * den * (dd - 1))
    };
    if sufficient {
        Expect::Bounded
    } else {
        Expect::Silent
    }
}

/// Direct `O(N²)` transform `f̂(ξ) = h^d Σ_y f(y) e^{-2πi y·ξ}` over
/// `ξ = k/L`, `k ∈ [-n/2, n/2)^d`. Returns `(ξ, f̂(ξ))`.
pub fn direct_dft(f: &GridFunction) -> Vec<(Vec<f64>, Complex64)> {
    let (d, n, l) = (f.d(), f.n(), f.box_length());
    let h = l / n as f64;
    let half = n as i64 / 2;
    // table[j][k] = e^{-2πi x_j ξ_k} in one dimension.
    let table: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let x = -l / 2.0 + j as f64 * h;
            (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * PI * x * (k as i64 - half) as f64 / l)).collect()
        })
        .collect();
    let total = f.len();
    let digits = |mut i: usize| {
        let mut out = vec![0usize; d];
        for a in (0..d).rev() {
            out[a] = i % n;
            i /= n;
        }
        out
    };
    let cell = h.powi(d as i32);
    (0..total)
        .map(|kk| {
            let k = digits(kk);
            let mut acc = Complex64::new(0.0, 0.0);
            for (yy, v) in f.values().iter().enumerate() {
                let y = digits(yy);
                let mut ph = Complex64::new(1.0, 0.0);
                for a in 0..d {
                    ph *= table[y[a]][k[a]];
                }
                acc += v * ph;
            }
            let xi = k.iter().map(|&ka| (ka as i64 - half) as f64 / l).collect();
            (xi, acc * cell)
        })
        .collect()
}

/// `L^{-2d} Σ_ξ Σ_η m(ξ,η) f̂(ξ) ĝ(η) e^{2πi x·(ξ+η)}` with frequencies
/// left unwrapped.
pub fn bilinear_sum_at(
    fh: &[(Vec<f64>, Complex64)],
    gh: &[(Vec<f64>, Complex64)],
    box_length: f64,
    x: &[f64],
    m: impl Fn(&[f64], &[f64]) -> f64,
) -> Complex64 {
    let d = x.len();
    let wave = |xi: &[f64]| Complex64::from_polar(1.0, 2.0 * PI * (0..d).map(|a| x[a] * xi[a]).sum::<f64>());
    let gw: Vec<Complex64> = gh.iter().map(|(eta, c)| c * wave(eta)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, fc) in fh {
        let fw = fc * wave(xi);
        let mut inner = Complex64::new(0.0, 0.0);
        for ((eta, _), g) in gh.iter().zip(&gw) {
            let w = m(xi, eta);
            if w != 0.0 {
                inner += g * w;
            }
        }
        acc += fw * inner;
    }
    acc / box_length.powi(2 * d as i32)
}

/// `(1 - λ²|ξ|² - λ²|η|²)^α_+`.
pub fn bochner_riesz_symbol(alpha: f64, lambda: f64) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |xi, eta| {
        let s = lambda * lambda * (xi.iter().map(|v| v * v).sum::<f64>() + eta.iter().map(|v| v * v).sum::<f64>());
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - s).powf(alpha)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_of_a_single_mode() {
        let (n, l) = (8, 4.0);
        let f = GridFunction::from_fn(2, n, l, |x| Complex64::from_polar(1.0, 2.0 * PI * (2.0 * x[0] - x[1]) / l)).unwrap();
        let fh = direct_dft(&f);
        for (xi, c) in &fh {
            let expect = if (xi[0] - 0.5).abs() < 1e-12 && (xi[1] + 0.25).abs() < 1e-12 { l * l } else { 0.0 };
            assert!((c.norm() - expect).abs() < 1e-12, "{xi:?} {c}");
        }
    }

    #[test]
    fn global_oracle_examples() {
        // (2,2,1) at d = 2; (1,∞,1) excluded; r below d/(2d-1).
        assert_eq!(expected_global(2, 6, 3, 3, 6), Expect::Bounded);
        assert_eq!(expected_global(2, 6, 6, 0, 6), Expect::Unbounded);
        assert_eq!(expected_global(2, 6, 6, 5, 11), Expect::Unbounded);
        assert_eq!(expected_global(2, 6, 3, 3, 5), Expect::Unbounded);
    }

    #[test]
    fn localized_oracle_examples() {
        assert_eq!(expected_localized(2, 6, 6, 6, 6), Expect::Unbounded);
        assert_eq!(expected_localized(2, 6, 3, 3, 3), Expect::Bounded);
        // 1/p + 1/q = 3/2 at r = 1: necessity allows it, sufficiency does not.
        assert_eq!(expected_localized(2, 6, 6, 3, 6), Expect::Silent);
        assert_eq!(expected_localized(3, 6, 3, 3, 0), Expect::Bounded);
        assert_eq!(expected_localized(3, 6, 4, 3, 0), Expect::Unbounded);
    }
}
