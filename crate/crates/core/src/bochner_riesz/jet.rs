//! Truncated Taylor arithmetic. A [`Jet`] carries `f(t), f'(t)/1!, …,
//! f^{(5)}(t)/5!`, so profile derivatives come out exactly instead of from
//! finite differences.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub const JET_LEN: usize = 6;

/// Values the profile shapes are generic over: plain `f64` for fast
/// evaluation, [`Jet`] for certified derivatives.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self> {
    fn cst(c: f64) -> Self;
    fn value(self) -> f64;
    fn exp(self) -> Self;
    /// `self^a` for `value > 0`.
    fn powf(self, a: f64) -> Self;
    fn scale(self, c: f64) -> Self;

    fn abs(self) -> Self {
        if self.value() < 0.0 { -self } else { self }
    }
}

impl Scalar for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn value(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        libm::exp(self)
    }
    fn powf(self, a: f64) -> Self {
        libm::pow(self, a)
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

impl Jet {
    /// The identity `t ↦ t` expanded at `t`.
    pub fn var(t: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = t;
        c[1] = 1.0;
        Self { c }
    }

    /// `k`-th derivative.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    fn recip(self) -> Self {
        let a = self.c;
        let mut b = [0.0; JET_LEN];
        b[0] = 1.0 / a[0];
        for k in 1..JET_LEN {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s * b[0];
        }
        Self { c: b }
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Self { c }
    }
    fn value(self) -> f64 {
        self.c[0]
    }
    fn exp(self) -> Self {
        let a = self.c;
        let mut e = [0.0; JET_LEN];
        e[0] = libm::exp(a[0]);
        for k in 1..JET_LEN {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Self { c: e }
    }
    fn powf(self, alpha: f64) -> Self {
        let a = self.c;
        let mut p = [0.0; JET_LEN];
        p[0] = libm::pow(a[0], alpha);
        for k in 1..JET_LEN {
            let s: f64 = (1..=k).map(|j| (alpha * j as f64 - (k - j) as f64) * a[j] * p[k - j]).sum();
            p[k] = s / (k as f64 * a[0]);
        }
        Self { c: p }
    }
    fn scale(self, s: f64) -> Self {
        Self { c: self.c.map(|v| v * s) }
    }
}

impl Add for Jet {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a += b);
        Self { c }
    }
}

impl Sub for Jet {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [0.0; JET_LEN];
        for (k, slot) in c.iter_mut().enumerate() {
            *slot = (0..=k).map(|j| self.c[j] * o.c[k - j]).sum();
        }
        Self { c }
    }
}

impl Div for Jet {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}
