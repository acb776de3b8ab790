//! Exponent calculus and boundedness classifiers.
//!
//! Everything is parametrized by reciprocals (`up = 1/p`, `p = ∞ ↦ 0`) and
//! evaluated in exact rational arithmetic, so boundary points are never
//! misclassified by rounding.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Exact reciprocal exponent.
pub type Q = Rational64;

/// `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

fn qd(d: usize) -> Q {
    qi(d as i64)
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses an exponent (`"2"`, `"3/2"`, `"1.25"`, `"inf"`) and returns its
/// reciprocal.
pub fn parse_exponent(s: &str) -> Result<Q> {
    let t = s.trim();
    if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
        return Ok(Q::zero());
    }
    let v = parse_rational(t)?;
    if v <= Q::zero() {
        return Err(Error::InvalidParameter(alloc::format!("exponent {t} must be positive")));
    }
    Ok(v.recip())
}

/// Parses `"a/b"`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidParameter(alloc::format!("cannot parse {s:?} as a rational"));
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs().checked_mul(scale).and_then(|w| w.checked_add(f)).ok_or_else(bad)?;
        return Ok(Q::new(if neg { -mag } else { mag }, scale));
    }
    t.parse::<Q>().map_err(|_| bad())
}

/// Formats a reciprocal back as an exponent string (`0 ↦ "inf"`).
pub fn format_exponent(u: Q) -> String {
    if u.is_zero() {
        "inf".to_string()
    } else {
        format_rational(u.recip())
    }
}

pub fn format_rational(x: Q) -> String {
    if x.is_integer() {
        alloc::format!("{}", x.numer())
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

fn check_unit(name: &str, u: Q, hi: Q) -> Result<()> {
    if u < Q::zero() || u > hi {
        return Err(Error::InvalidParameter(alloc::format!("{name} = {} outside [0, {}]", format_rational(u), format_rational(hi))));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if !(2..=1 << 20).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}

/// `α(p) = max(d|1/p - 1/2| - 1/2, 0)`.
pub fn alpha_critical(up: Q, d: usize) -> Result<Q> {
    check_dim(d)?;
    check_unit("1/p", up, qi(1))?;
    Ok((qd(d) * (up - q(1, 2)).abs() - q(1, 2)).max(Q::zero()))
}

// ----------------------------------------------------------------- α*

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AlphaRegion {
    /// Both reciprocals `≤ ν`.
    D1,
    /// Both `≥ ν`.
    D2,
    /// One strictly below `ν`, the other strictly above.
    D3,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlphaStar {
    pub value: Q,
    pub region: AlphaRegion,
    /// At `u = v = ν` both the first and second branch apply; their values
    /// are reported here (they agree whenever `ν ≤ (d-1)/(2d)`).
    pub tie: Option<(Q, Q)>,
}

/// Every branch formula evaluated at `(u, v)` regardless of membership,
/// in the order `D1, D2, D3`.
pub fn alpha_star_branches(up: Q, uq: Q, nu: Q, d: usize) -> Result<[Q; 3]> {
    check_alpha_star_args(up, uq, nu, d)?;
    let one = qi(1);
    let a_nu = alpha_critical(nu, d)?;
    let (ap, aq) = (alpha_critical(up, d)?, alpha_critical(uq, d)?);
    let d1 = qd(d) * (one - up - uq);
    let d2 = one + qi(2) * (one - up - uq) / (one - qi(2) * nu) * a_nu;
    let d3 = one + ap.max(aq) + a_nu * ((one - qi(2) * up) / (one - qi(2) * nu)).min((one - qi(2) * uq) / (one - qi(2) * nu));
    Ok([d1, d2, d3])
}

fn check_alpha_star_args(up: Q, uq: Q, nu: Q, d: usize) -> Result<()> {
    check_dim(d)?;
    check_unit("1/p", up, q(1, 2))?;
    check_unit("1/q", uq, q(1, 2))?;
    check_unit("ν", nu, q(d as i64 - 1, 2 * d as i64))
}

/// The three-branch threshold `α*_{1/ν}` on `[0, 1/2]²`.
pub fn alpha_star(up: Q, uq: Q, nu: Q, d: usize) -> Result<AlphaStar> {
    let [d1, d2, d3] = alpha_star_branches(up, uq, nu, d)?;
    let in1 = up <= nu && uq <= nu;
    let in2 = up >= nu && uq >= nu;
    Ok(match (in1, in2) {
        (true, true) => AlphaStar { value: d1, region: AlphaRegion::D1, tie: Some((d1, d2)) },
        (true, false) => AlphaStar { value: d1, region: AlphaRegion::D1, tie: None },
        (false, true) => AlphaStar { value: d2, region: AlphaRegion::D2, tie: None },
        (false, false) => AlphaStar { value: d3, region: AlphaRegion::D3, tie: None },
    })
}

/// `p_s(d) = min(p₀(d), 2(d+2)/d)` with `p₀(d) = 2 + 12/(4d - 6 - k)`,
/// `k = d mod 3`, and `p₀ = ∞` when the denominator is not positive.
pub fn p_s(d: usize) -> Result<Q> {
    check_dim(d)?;
    let k = (d % 3) as i64;
    let den = 4 * d as i64 - 6 - k;
    let restriction = q(2 * (d as i64 + 2), d as i64);
    if den <= 0 {
        return Ok(restriction);
    }
    Ok((qi(2) + q(12, den)).min(restriction))
}

/// `min(α*_{p_s(d)}(p, q), d - 1/2)`: the implemented sufficient smoothing
/// order for the bilinear Bochner-Riesz maximal estimate.
pub fn sufficient_alpha(up: Q, uq: Q, d: usize) -> Result<Q> {
    let nu = p_s(d)?.recip();
    Ok(alpha_star(up, uq, nu, d)?.value.min(qd(d) - q(1, 2)))
}

// ---------------------------------------------------------- verdicts

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Status {
    Bounded,
    Unbounded,
    /// A Lorentz-space (weak or restricted weak) estimate holds; the strong
    /// estimate fails or is not settled, see the note.
    WeakLorentz,
    Open,
}

/// Reciprocal Lorentz indices of an `L^{p,s} × L^{q,t} → L^{r,u}` bound.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LorentzIndices {
    pub us: Option<Q>,
    pub ut: Option<Q>,
    pub uu: Q,
    /// When `s, t` are only constrained by `1/s + 1/t = sum`.
    pub st_sum: Option<Q>,
}

impl LorentzIndices {
    fn swapped(&self) -> Self {
        Self { us: self.ut, ut: self.us, uu: self.uu, st_sum: self.st_sum }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegionVerdict {
    pub status: Status,
    pub case_tag: Option<String>,
    pub citation: String,
    pub lorentz: Option<LorentzIndices>,
    pub note: Option<String>,
}

impl RegionVerdict {
    fn new(status: Status, citation: &str) -> Self {
        Self { status, case_tag: None, citation: citation.to_string(), lorentz: None, note: None }
    }

    fn tag(mut self, t: &str) -> Self {
        self.case_tag = Some(t.to_string());
        self
    }

    fn note(mut self, n: &str) -> Self {
        self.note = Some(n.to_string());
        self
    }

    fn lorentz(mut self, l: LorentzIndices) -> Self {
        self.lorentz = Some(l);
        self
    }

    /// The verdict for the triple with the two inputs interchanged.
    pub fn swapped(&self) -> Self {
        let mut v = self.clone();
        v.lorentz = self.lorentz.as_ref().map(LorentzIndices::swapped);
        v
    }
}

pub const CITE_GLOBAL: &str = "global characterization of the bilinear spherical maximal function";
pub const CITE_SCALING: &str = "scaling necessity of the Hölder relation";
pub const CITE_LOCAL_SUFFICIENT: &str = "localized sufficiency via slicing";
pub const CITE_LOCAL_NECESSARY: &str = "localized necessity via Knapp and annulus examples";
pub const CITE_LOCAL_SUP: &str = "localized endpoint r = ∞";
pub const CITE_LOCAL_SPHERICAL: &str = "L^p-improving region of the local spherical maximal function";
pub const CITE_BR_NECESSITY: &str = "bilinear Bochner-Riesz maximal necessity via the Knapp example";

/// Exponents of a bilinear estimate in exact reciprocal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactExponents {
    pub d: usize,
    pub up: Q,
    pub uq: Q,
    pub ur: Q,
}

impl ExactExponents {
    pub fn new(d: usize, up: Q, uq: Q, ur: Q) -> Result<Self> {
        check_dim(d)?;
        check_unit("1/p", up, qi(1))?;
        check_unit("1/q", uq, qi(1))?;
        if ur < Q::zero() {
            return Err(Error::InvalidParameter(alloc::format!("1/r = {} is negative", format_rational(ur))));
        }
        Ok(Self { d, up, uq, ur })
    }

    /// From exponent strings such as `"2"`, `"3/2"`, `"inf"`.
    pub fn parse(d: usize, p: &str, q: &str, r: &str) -> Result<Self> {
        Self::new(d, parse_exponent(p)?, parse_exponent(q)?, parse_exponent(r)?)
    }

    pub fn swapped(&self) -> Self {
        Self { up: self.uq, uq: self.up, ..*self }
    }

    pub fn holder(&self) -> bool {
        self.up + self.uq == self.ur
    }
}

/// Global `L^p × L^q → L^r` verdict for the full bilinear spherical
/// maximal function.
pub fn global_region(e: &ExactExponents) -> RegionVerdict {
    let d = e.d;
    let one = qi(1);
    let crit = q(2 * d as i64 - 1, d as i64);
    if !e.holder() {
        return RegionVerdict::new(Status::Unbounded, CITE_SCALING).tag("holder");
    }
    // (1, ∞, 1) and its mirror.
    if e.ur == one && ((e.up == one && e.uq.is_zero()) || (e.up.is_zero() && e.uq == one)) {
        let l = LorentzIndices { us: Some(one), ut: Some(Q::zero()), uu: Q::zero(), st_sum: None };
        let l = if e.up == one { l } else { l.swapped() };
        return RegionVerdict::new(Status::WeakLorentz, CITE_GLOBAL).tag("a").lorentz(l).note("strong type fails at this triple");
    }
    if e.ur < crit {
        return RegionVerdict::new(Status::Bounded, CITE_GLOBAL);
    }
    if e.ur > crit {
        return RegionVerdict::new(Status::Unbounded, CITE_GLOBAL).tag("r below d/(2d-1)");
    }
    // Critical line 1/r = (2d-1)/d.
    let strong_fails = RegionVerdict::new(Status::Unbounded, CITE_GLOBAL).tag("r = d/(2d-1)");
    if d == 2 {
        return strong_fails.note("strong type fails; weak type on this line is not settled");
    }
    let edge = q(d as i64 - 1, d as i64);
    let (lo, hi, swapped) = if e.up >= e.uq { (e.uq, e.up, false) } else { (e.up, e.uq, true) };
    let verdict = if hi == one && lo == edge {
        let l = LorentzIndices { us: Some(one), ut: Some(one), uu: Q::zero(), st_sum: None };
        RegionVerdict::new(Status::WeakLorentz, CITE_GLOBAL).tag("b").lorentz(l)
    } else if hi > edge && hi < one {
        let l = LorentzIndices { us: None, ut: None, uu: Q::zero(), st_sum: Some(crit) };
        RegionVerdict::new(Status::WeakLorentz, CITE_GLOBAL).tag("c").lorentz(l)
    } else {
        // Unreachable with 1/p, 1/q ≤ 1, kept for total coverage.
        return strong_fails;
    };
    let verdict = verdict.note("strong type fails on the critical line");
    if swapped {
        verdict.swapped()
    } else {
        verdict
    }
}

/// Verdict for the maximal function localized to radii in `[1, 2]`.
pub fn localized_region(e: &ExactExponents) -> RegionVerdict {
    let d = e.d;
    let dq = qd(d);
    let one = qi(1);
    let s = e.up + e.uq;
    let crit = q(2 * d as i64 - 1, d as i64);
    let necessary = e.ur <= s && s <= crit.min(one + dq * e.ur);
    if !necessary {
        return RegionVerdict::new(Status::Unbounded, CITE_LOCAL_NECESSARY);
    }
    if e.ur.is_zero() {
        // Complete answer at r = ∞.
        return if s <= one {
            RegionVerdict::new(Status::Bounded, CITE_LOCAL_SUP)
        } else {
            RegionVerdict::new(Status::Unbounded, CITE_LOCAL_SUP)
        };
    }
    let sufficient = if d == 2 {
        e.ur < q(3, 2) && s < (one + e.ur).min(q(3, 2)) || (s == one + e.ur && e.ur < q(1, 2))
    } else {
        e.ur < crit && s < (one + dq * e.ur).min(crit).min(e.ur + q(2 * (d as i64 - 1), d as i64))
    };
    if sufficient {
        RegionVerdict::new(Status::Bounded, CITE_LOCAL_SUFFICIENT)
    } else {
        RegionVerdict::new(Status::Open, CITE_LOCAL_SUFFICIENT).note("between the sufficient and necessary regions")
    }
}

/// Vertices `V₁..V₄` of the `L^p → L^q` region of the local spherical
/// maximal function.
pub fn delta_vertices(d: usize) -> Result<[(Q, Q); 4]> {
    check_dim(d)?;
    let (di, d2) = (d as i64, (d * d) as i64);
    Ok([(Q::zero(), Q::zero()), (q(di - 1, di), q(di - 1, di)), (q(di - 1, di), q(1, di)), (q(d2 - di, d2 + 1), q(di - 1, d2 + 1))])
}

fn cross(o: (Q, Q), a: (Q, Q), b: (Q, Q)) -> Q {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Closed convex polygon `V₁ V₄ V₃ V₂` (counter-clockwise).
fn in_delta(d: usize, pt: (Q, Q)) -> Result<bool> {
    let [v1, v2, v3, v4] = delta_vertices(d)?;
    let mut ring: Vec<(Q, Q)> = alloc::vec![v1, v4, v3, v2];
    ring.dedup();
    Ok((0..ring.len()).all(|i| cross(ring[i], ring[(i + 1) % ring.len()], pt) >= Q::zero()))
}

/// `L^p → L^q` verdict for the local spherical maximal function at
/// `(u, v) = (1/p, 1/q)`.
pub fn delta_region(d: usize, u: Q, v: Q) -> Result<RegionVerdict> {
    check_unit("1/p", u, qi(1))?;
    check_unit("1/q", v, qi(1))?;
    let [_, v2, v3, v4] = delta_vertices(d)?;
    let pt = (u, v);
    if !in_delta(d, pt)? {
        return Ok(RegionVerdict::new(Status::Unbounded, CITE_LOCAL_SPHERICAL));
    }
    let rwt = |tag: &str| {
        RegionVerdict::new(Status::WeakLorentz, CITE_LOCAL_SPHERICAL)
            .tag(tag)
            .lorentz(LorentzIndices { us: Some(qi(1)), ut: None, uu: Q::zero(), st_sum: None })
    };
    if pt == v2 {
        return Ok(if d == 2 {
            RegionVerdict::new(Status::Unbounded, CITE_LOCAL_SPHERICAL).tag("V2").note("strong type fails; restricted weak type not settled")
        } else {
            rwt("V2").note("restricted weak type; strong type fails")
        });
    }
    if pt == v3 || pt == v4 {
        let tag = if pt == v3 { "V3" } else { "V4" };
        return Ok(rwt(tag).note("restricted weak type; strong type not settled"));
    }
    Ok(RegionVerdict::new(Status::Bounded, CITE_LOCAL_SPHERICAL).tag("Delta(d)"))
}

/// Necessity side for the bilinear Bochner-Riesz maximal operator:
/// unbounded into `L^r` when `α < (2d-1)/(2r) - (2d-1)/2`.
pub fn br_maximal_necessity(alpha: Q, ur: Q, d: usize) -> Result<RegionVerdict> {
    check_dim(d)?;
    if ur <= Q::zero() {
        return Err(Error::InvalidParameter("1/r must be positive".into()));
    }
    let k = qi(2 * d as i64 - 1);
    let threshold = k * ur / qi(2) - k / qi(2);
    Ok(if alpha < threshold {
        RegionVerdict::new(Status::Unbounded, CITE_BR_NECESSITY)
    } else {
        RegionVerdict::new(Status::Open, CITE_BR_NECESSITY).note("only the necessary condition is encoded")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(d: usize, p: &str, qq: &str, r: &str) -> ExactExponents {
        ExactExponents::parse(d, p, qq, r).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_exponent("inf").unwrap(), Q::zero());
        assert_eq!(parse_exponent("3/2").unwrap(), q(2, 3));
        assert_eq!(parse_exponent("1.25").unwrap(), q(4, 5));
        assert_eq!(parse_exponent("2").unwrap(), q(1, 2));
        assert!(parse_exponent("0").is_err());
        assert!(parse_exponent("abc").is_err());
        assert_eq!(format_exponent(q(2, 3)), "3/2");
        assert_eq!(format_exponent(Q::zero()), "inf");
    }

    #[test]
    fn critical_index() {
        assert_eq!(alpha_critical(q(1, 2), 2).unwrap(), Q::zero());
        assert_eq!(alpha_critical(Q::zero(), 2).unwrap(), q(1, 2));
        assert_eq!(alpha_critical(qi(1), 3).unwrap(), qi(1));
    }

    #[test]
    fn p_s_values() {
        assert_eq!(p_s(2).unwrap(), qi(4));
        assert_eq!(p_s(3).unwrap(), q(10, 3));
        assert_eq!(p_s(4).unwrap(), qi(3));
    }

    #[test]
    fn alpha_star_examples() {
        for d in 2..=8 {
            let nu = p_s(d).unwrap().recip();
            let a = alpha_star(q(1, 2), q(1, 2), nu, d).unwrap();
            assert_eq!(a.value, qi(1));
            assert_eq!(a.region, AlphaRegion::D2);
        }
        let a = alpha_star(Q::zero(), Q::zero(), q(1, 4), 2).unwrap();
        assert_eq!((a.value, a.region), (qi(2), AlphaRegion::D1));
        for d in 2..=8 {
            let nu = q(d as i64 - 1, 2 * d as i64);
            let a = alpha_star(nu, nu, nu, d).unwrap();
            let (t1, t2) = a.tie.unwrap();
            assert_eq!(t1, t2);
            assert_eq!(t1, qd(d) * (qi(1) - qi(2) * nu));
        }
        assert!(alpha_star(q(1, 2), q(1, 2), q(1, 2), 2).is_err());
    }

    #[test]
    fn alpha_star_continuous_on_interfaces() {
        for d in 2..=6 {
            let nu = p_s(d).unwrap().recip();
            for i in 0..=20 {
                let w = q(i, 40);
                let [d1, _, d3] = alpha_star_branches(nu, w.min(nu), nu, d).unwrap();
                assert_eq!(d1, d3, "D1/D3 at d={d}");
                let v = (nu + w).min(q(1, 2));
                let [_, d2b, d3b] = alpha_star_branches(nu, v, nu, d).unwrap();
                assert_eq!(d2b, d3b, "D2/D3 at d={d}");
            }
        }
    }

    #[test]
    fn sufficient_alpha_examples() {
        assert_eq!(sufficient_alpha(q(1, 2), q(1, 2), 2).unwrap(), qi(1));
        assert_eq!(sufficient_alpha(Q::zero(), Q::zero(), 2).unwrap(), q(3, 2));
        assert_eq!(sufficient_alpha(q(1, 2), q(1, 2), 3).unwrap(), qi(1));
        // Monotone in d on the first branch.
        for d in 2..8 {
            let a = sufficient_alpha(q(1, 10), q(1, 10), d).unwrap();
            let b = sufficient_alpha(q(1, 10), q(1, 10), d + 1).unwrap();
            assert!(b >= a);
        }
    }

    #[test]
    fn global_examples() {
        assert_eq!(global_region(&ex(2, "2", "2", "1")).status, Status::Bounded);
        assert_eq!(global_region(&ex(2, "1", "inf", "1")).status, Status::WeakLorentz);
        assert_eq!(global_region(&ex(2, "1", "inf", "1")).case_tag.as_deref(), Some("a"));
        let v = global_region(&ex(3, "1", "3/2", "3/5"));
        assert_eq!((v.status, v.case_tag.as_deref()), (Status::WeakLorentz, Some("b")));
        let l = v.lorentz.unwrap();
        assert_eq!((l.uu, l.us, l.ut), (Q::zero(), Some(qi(1)), Some(qi(1))));
        let v = global_region(&ex(3, "6/5", "6/5", "3/5"));
        assert_eq!(v.case_tag.as_deref(), Some("c"));
        assert_eq!(v.lorentz.unwrap().st_sum, Some(q(5, 3)));
        assert_eq!(global_region(&ex(2, "2", "2", "2")).status, Status::Unbounded);
        assert_eq!(global_region(&ex(2, "1", "1", "1/2")).status, Status::Unbounded);
        assert_eq!(global_region(&ex(2, "4/3", "4/3", "2/3")).status, Status::Unbounded);
    }

    #[test]
    fn localized_examples() {
        assert_eq!(localized_region(&ex(2, "1", "1", "1")).status, Status::Unbounded);
        assert_eq!(localized_region(&ex(2, "2", "2", "2")).status, Status::Bounded);
        assert_eq!(localized_region(&ex(2, "4/3", "4/3", "1")).status, Status::Open);
        assert_eq!(localized_region(&ex(3, "2", "2", "inf")).status, Status::Bounded);
        assert_eq!(localized_region(&ex(3, "1", "2", "inf")).status, Status::Unbounded);
        // L^p-improving: p = q = 2 into L^4.
        assert_eq!(localized_region(&ex(2, "2", "2", "4")).status, Status::Bounded);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_region(2, Q::zero(), Q::zero()).unwrap().status, Status::Bounded);
        let v = delta_region(3, q(2, 3), q(2, 3)).unwrap();
        assert_eq!(v.status, Status::WeakLorentz);
        assert_eq!(delta_region(2, qi(1), qi(1)).unwrap().status, Status::Unbounded);
        assert_eq!(delta_region(2, q(1, 2), q(1, 2)).unwrap().status, Status::Unbounded);
        assert_eq!(delta_region(2, q(2, 5), q(1, 5)).unwrap().status, Status::WeakLorentz);
        assert_eq!(delta_region(3, q(1, 3), q(1, 4)).unwrap().status, Status::Bounded);
        assert_eq!(delta_region(3, q(1, 4), q(1, 3)).unwrap().status, Status::Unbounded);
    }

    #[test]
    fn br_necessity() {
        assert_eq!(br_maximal_necessity(q(-1, 10), qi(1), 2).unwrap().status, Status::Unbounded);
        assert_eq!(br_maximal_necessity(Q::zero(), qi(1), 2).unwrap().status, Status::Open);
        assert_eq!(br_maximal_necessity(qi(2), qi(2), 3).unwrap().status, Status::Unbounded);
    }

    fn grid_q() -> impl Strategy<Value = Q> {
        (0i64..=12).prop_map(|k| q(k, 12))
    }

    proptest! {
        #[test]
        fn classifiers_are_symmetric(d in 2usize..6, up in grid_q(), uq in grid_q(), ur in (0i64..=30).prop_map(|k| q(k, 12))) {
            let e = ExactExponents::new(d, up, uq, ur).unwrap();
            prop_assert_eq!(global_region(&e.swapped()), global_region(&e).swapped());
            prop_assert_eq!(localized_region(&e.swapped()), localized_region(&e).swapped());
        }

        #[test]
        fn global_bounded_implies_localized_bounded(d in 2usize..6, up in grid_q(), uq in grid_q()) {
            let e = ExactExponents::new(d, up, uq, up + uq).unwrap();
            if global_region(&e).status == Status::Bounded {
                prop_assert_eq!(localized_region(&e).status, Status::Bounded);
            }
        }

        #[test]
        fn delta_region_below_diagonal(d in 2usize..6, u in grid_q(), v in grid_q()) {
            let r = delta_region(d, u, v).unwrap();
            if r.status == Status::Bounded {
                prop_assert!(u >= v || u.is_zero());
            }
        }
    }
}
