//! The tower of bound functions of the Euler genus `g`, evaluated exactly
//! where the values are integers of reasonable size and as certified
//! `log2` intervals otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::interval::Interval;
use crate::log::{floor_log, floor_log_4_3, log2_int, Floor};

/// `q = 9073 / 9072`.
pub const Q: (u64, u64) = (9073, 9072);

pub const DEFAULT_PREC: u32 = 256;

/// Values with `log2` below this many bits are also given exactly.
pub const DEFAULT_EXACT_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundsError {
    /// A floor of a logarithm could not be settled at the largest precision.
    AmbiguousFloor { what: &'static str, interval: Interval },
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::AmbiguousFloor { what, interval } => {
                write!(f, "floor of {what} unresolved: [{}, {}]", interval.decimal(20, false), interval.decimal(20, true))
            }
        }
    }
}

impl std::error::Error for BoundsError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub exact: Option<BigInt>,
    pub log2: Interval,
    pub provenance: &'static str,
}

impl BoundValue {
    fn from_exact(x: BigInt, prec: u32, provenance: &'static str) -> BoundValue {
        BoundValue { log2: log2_int(&x, prec), exact: Some(x), provenance }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub prec: u32,
    pub exact_cap_bits: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { prec: DEFAULT_PREC, exact_cap_bits: DEFAULT_EXACT_CAP }
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn floor_log_q(x: &BigInt, what: &'static str) -> Result<BigInt, BoundsError> {
    match floor_log(x, &big(Q.0), &big(Q.1), 64) {
        Floor::Certified(f) => Ok(f),
        Floor::Ambiguous(interval) => Err(BoundsError::AmbiguousFloor { what, interval }),
    }
}

/// `m = 2(⌊log_q(3g+4)⌋ + 2)`.
pub fn m_of(g: u64) -> Result<BigInt, BoundsError> {
    Ok((floor_log_q(&(big(3) * g + 4), "log_q(3g+4)")? + 2) * 2)
}

/// `m' = ⌊log_{4/3}(3(4m²(3g+3) + 1))⌋`.
pub fn m_prime_of(g: u64, m: &BigInt) -> BigInt {
    let y = (BigInt::from(4) * m * m * (big(3) * g + 3) + 1) * 3;
    big(floor_log_4_3(&y))
}

/// `T = 264(g+2)(m+1) - 1`.
pub fn t_of(g: u64, m: &BigInt) -> BigInt {
    BigInt::from(264) * (g + 2) * (m + 1) - 1
}

/// `A = 6(⌊log_{4/3}(3(3(T+1)m' + 1))⌋ (12m + 8) + 3)`.
pub fn a_of(m: &BigInt, m_prime: &BigInt, t: &BigInt) -> BigInt {
    let y = ((t + 1) * m_prime * 3 + 1) * 3;
    (big(floor_log_4_3(&y)) * (m * 12 + 8) + 3) * 6
}

/// `m̃ = 2(⌊log_q(60A + 180)⌋ + 2)`.
pub fn m_tilde_of(a: &BigInt) -> Result<BigInt, BoundsError> {
    Ok((floor_log_q(&(a * 60 + 180), "log_q(60A+180)")? + 2) * 2)
}

/// `Q = 3(4m²(3g+3) + 1) · 3((T+1)m' + g) · 2m(3g+3)`.
pub fn q_of(g: u64, m: &BigInt, m_prime: &BigInt, t: &BigInt) -> BigInt {
    let g3 = big(3) * g + 3;
    (BigInt::from(4) * m * m * &g3 + 1) * 3 * (((t + 1) * m_prime + g) * 3) * (m * 2 * g3)
}

fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// The integer factor of `R` in front of `P`:
/// `3(3(T+1)m' + 1) · Σ_{a=0}^{3} C((T+1)m', a) · 5A/6`.
pub fn r_prefactor(m_prime: &BigInt, t: &BigInt, a: &BigInt) -> BigInt {
    let n = (t + 1) * m_prime;
    let sum: BigInt = (0..=3).map(|k| binomial(&n, k)).sum();
    assert!((a % 6u32).is_zero());
    (&n * 3 + 1) * 3 * sum * 5 * (a / 6u32)
}

/// `2^{2-t}` in units of `2^-prec`, rounded up: a bound on
/// `-log2(1 - 2^-x)` for every `x >= t >= 1`.
fn tail_ulps(t: &BigInt, prec: u32) -> BigInt {
    let e: BigInt = BigInt::from(prec) + 2 - t;
    match e.to_u32() {
        Some(e) => BigInt::one() << e,
        None if e < BigInt::zero() => BigInt::one(),
        None => panic!("tail exponent out of range"),
    }
}

/// `Δ`, the base of `f` and `P` from the integers `A` and `m̃`.
#[derive(Clone, Debug)]
pub struct Upper {
    /// `log2(4 sqrt(2A(2m̃+1)^4 m̃^3))`.
    pub f_base_log2: Interval,
    /// `2A(2m̃+1)^4 m̃^3`.
    pub f_radicand: BigInt,
    pub delta: BoundValue,
    pub p: BoundValue,
}

/// `Δ = (4 sqrt(2A(2m̃+1)^4 m̃^3))^{m̃²}` and
/// `P = Δ(Δ^{2m̃} - 1)/(Δ - 1) · A`.
pub fn upper_tower(a: &BigInt, m_tilde: &BigInt, opt: Options) -> Upper {
    let prec = opt.prec;
    let mt = m_tilde;
    // products below multiply the error by up to 2 m̃^3
    let w = prec + 3 * mt.bits() as u32 + 16;
    let radicand: BigInt = a * 2u32 * (mt * 2u32 + 1u32).pow(4u32) * mt.pow(3u32);
    let base = log2_int(&radicand, w).div_int(&big(2)).add(&Interval::from_i64(2, w));
    let d = base.mul_int(&(mt * mt));
    let cap = Interval::point(&big(opt.exact_cap_bits), w);
    let exact_delta = (d.certainly_lt(&cap) && (mt % 2u32).is_zero()).then(|| {
        let half: u32 = (mt * mt / 2u32).to_u32().expect("small m̃ in exact mode");
        (&radicand * 16u32).pow(half)
    });
    let two_m: BigInt = mt * 2u32;
    let dlo_floor = d.certain_floor().unwrap_or_else(|| d.lo.clone() >> w);
    let (a_log2, cd) = (log2_int(a, w), d.mul_int(&two_m));
    // log2 P = log2 A + log2 Δ + log2(Δ^{2m̃} - 1) - log2(Δ - 1)
    let mut p = a_log2.add(&cd);
    p.lo -= tail_ulps(&(&dlo_floor * &two_m), w);
    p.hi += tail_ulps(&dlo_floor, w);
    let exact_p = match &exact_delta {
        Some(delta) if p.certainly_lt(&cap) => {
            let mut sum = BigInt::zero();
            let mut pw = BigInt::one();
            let top = two_m.to_u64().unwrap();
            for _ in 0..top {
                pw *= delta;
                sum += &pw;
            }
            Some(a * sum)
        }
        _ => None,
    };
    Upper {
        f_base_log2: base.at_prec(prec),
        f_radicand: radicand,
        delta: BoundValue { exact: exact_delta, log2: d.at_prec(prec), provenance: "Δ = (4·sqrt(2A(2m̃+1)^4·m̃^3))^(m̃^2)" },
        p: BoundValue { exact: exact_p, log2: p.at_prec(prec), provenance: "P = Δ(Δ^(2m̃) − 1)/(Δ − 1)·A" },
    }
}

#[derive(Clone, Debug)]
pub struct Constants {
    pub g: u64,
    pub prec: u32,
    pub m: BigInt,
    pub m_prime: BigInt,
    pub t: BigInt,
    pub a: BigInt,
    pub m_tilde: BigInt,
    pub upper: Upper,
    pub q_bound: BoundValue,
    pub r: BoundValue,
    pub u: BoundValue,
}

pub fn constants(g: u64) -> Result<Constants, BoundsError> {
    constants_with(g, Options::default())
}

pub fn constants_with(g: u64, opt: Options) -> Result<Constants, BoundsError> {
    let prec = opt.prec;
    let m = m_of(g)?;
    let m_prime = m_prime_of(g, &m);
    let t = t_of(g, &m);
    let a = a_of(&m, &m_prime, &t);
    let m_tilde = m_tilde_of(&a)?;
    let upper = upper_tower(&a, &m_tilde, opt);
    let q_bound = BoundValue::from_exact(q_of(g, &m, &m_prime, &t), prec, "Q = 3(4m^2(3g+3)+1)·3((T+1)m'+g)·2m(3g+3)");
    let k = r_prefactor(&m_prime, &t, &a);
    let cap = Interval::point(&big(opt.exact_cap_bits), prec);
    let r_log2 = log2_int(&k, prec).add(&upper.p.log2);
    let r_exact = upper.p.exact.as_ref().filter(|_| r_log2.certainly_lt(&cap)).map(|p| &k * p);
    let r = BoundValue {
        exact: r_exact,
        log2: r_log2,
        provenance: "R = 3(3(T+1)m'+1)·Σ_{a=0}^{3} C((T+1)m', a)·(5/6)·A·P",
    };
    let u_log2 = q_bound.log2.add(&r.log2);
    let u_exact = r.exact.as_ref().filter(|_| u_log2.certainly_lt(&cap)).map(|r| r * q_bound.exact.as_ref().unwrap());
    let u = BoundValue { exact: u_exact, log2: u_log2, provenance: "U = Q·R" };
    Ok(Constants { g, prec, m, m_prime, t, a, m_tilde, upper, q_bound, r, u })
}

/// `f(g, i) = (4 sqrt(2A(2m̃+1)^4 m̃^3))^{i²}`; exact for even `i` when small.
pub fn f_of(c: &Constants, i: u64, exact_cap_bits: u64) -> BoundValue {
    let sq = big(i) * i;
    let log2 = c.upper.f_base_log2.mul_int(&sq);
    let cap = Interval::point(&big(exact_cap_bits), c.prec);
    let exact = (i.is_multiple_of(2) && log2.certainly_lt(&cap) || i == 0).then(|| {
        let half = (i * i / 2) as u32;
        (&c.upper.f_radicand * 16u32).pow(half)
    });
    BoundValue { exact, log2, provenance: "f(g,i) = (4·sqrt(2A(2m̃+1)^4·m̃^3))^(i^2)" }
}

/// The identities tying the tower together, each evaluated along a second
/// route and compared.
#[derive(Clone, Debug)]
pub struct Identities {
    /// `T + 1 = 264(g+2)(m+1)`, exactly.
    pub t: bool,
    /// `log2 U` from the exact product `Q · prefactor(R)` meets `log2 Q + log2 R`.
    pub u: bool,
    /// `log2 P` as `log2 A + log2 Σ_{j=1}^{2m̃} Δ^j` meets the closed form.
    pub p: bool,
    /// Largest `log2` of an interval width among `Δ`, `P`, `R`, `U`.
    pub max_log2_width: f64,
}

pub fn identities(c: &Constants) -> Identities {
    let prec = c.prec;
    let t = &c.t + 1 == BigInt::from(264) * (c.g + 2) * (&c.m + 1);
    let qk = c.q_bound.exact.as_ref().unwrap() * r_prefactor(&c.m_prime, &c.t, &c.a);
    let u_alt = log2_int(&qk, prec).add(&c.upper.p.log2);
    let u = u_alt.intersect(&c.u.log2).is_some();
    // geometric sum: Δ^{2m̃} ≤ Σ ≤ Δ^{2m̃} / (1 - 1/Δ)
    let d = &c.upper.delta.log2;
    let mut p_alt = log2_int(&c.a, prec).add(&d.mul_int(&(&c.m_tilde * 2)));
    p_alt.hi += tail_ulps(&(d.lo.clone() >> prec), prec);
    let p = p_alt.intersect(&c.upper.p.log2).is_some();
    let max_log2_width = [&c.upper.delta, &c.upper.p, &c.r, &c.u]
        .iter()
        .filter_map(|b| b.log2.log2_width())
        .fold(f64::NEG_INFINITY, f64::max);
    Identities { t, u, p, max_log2_width }
}

/// A positive number by its `log2` interval, with addition and the
/// comparisons the interval settles.
#[derive(Clone, Debug)]
pub struct Log2Value(pub Interval);

fn pow2_neg_ulps(k: &BigInt, prec: u32, up: bool) -> BigInt {
    // 2^{-k} for integer k >= 0, in ulps
    match (BigInt::from(prec) - k).to_u32() {
        Some(e) => BigInt::one() << e,
        None => BigInt::from(up as u8),
    }
}

impl Add for Log2Value {
    type Output = Log2Value;
    /// `log2(2^a + 2^b) = max(a, b) + log2(1 + 2^{-|a-b|})`, with
    /// `x <= log2(1 + x) <= min(2x, 1)` on `[0, 1]`.
    fn add(self, o: Log2Value) -> Log2Value {
        let p = self.0.prec.max(o.0.prec);
        let (a, b) = (self.0.at_prec(p), o.0.at_prec(p));
        let (hi_side, lo_side) = if a.lo >= b.hi {
            (a, b)
        } else if b.lo >= a.hi {
            (b, a)
        } else {
            // 2^a + 2^b >= 2 * 2^min(a, b)
            let lo = a.lo.clone().max(b.lo.clone()).max(a.lo.clone().min(b.lo.clone()) + (BigInt::one() << p));
            let hi = a.hi.clone().max(b.hi.clone()) + (BigInt::one() << p);
            return Log2Value(Interval { lo, hi, prec: p });
        };
        let diff = hi_side.sub(&lo_side);
        let dlo = diff.lo.clone() >> p;
        let dhi = -((-diff.hi.clone()) >> p);
        let add_lo = pow2_neg_ulps(&dhi, p, false);
        let add_hi: BigInt = (pow2_neg_ulps(&dlo, p, true) * 2u32).min(BigInt::one() << p);
        Log2Value(Interval { lo: &hi_side.lo + add_lo, hi: &hi_side.hi + add_hi, prec: p })
    }
}

impl PartialEq for Log2Value {
    fn eq(&self, o: &Log2Value) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Log2Value {
    fn partial_cmp(&self, o: &Log2Value) -> Option<Ordering> {
        if self.0.certainly_lt(&o.0) {
            Some(Ordering::Less)
        } else if o.0.certainly_lt(&self.0) {
            Some(Ordering::Greater)
        } else if self.0.lo == self.0.hi && self.0 == o.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub g: u64,
    pub log2_u_lo: String,
    pub log2_u_hi: String,
    pub log2_u: f64,
    /// `Δ log2 U / Δ log2 g` against the previous row (both `g >= 1`).
    pub slope: Option<f64>,
    /// `U` strictly above the previous row, as certified by the intervals.
    pub increasing: Option<bool>,
}

pub fn asymptotic_report(gs: &[u64]) -> Result<Vec<ReportRow>, BoundsError> {
    let mut rows: Vec<ReportRow> = Vec::new();
    let mut prev: Option<(u64, Interval)> = None;
    for &g in gs {
        let c = constants(g)?;
        let iv = c.u.log2.clone();
        let mid = iv.mid_f64();
        let (slope, increasing) = match &prev {
            Some((pg, piv)) => {
                let s = (*pg >= 1 && g > *pg).then(|| (mid - piv.mid_f64()) / ((g as f64).log2() - (*pg as f64).log2()));
                (s, Some(piv.certainly_lt(&iv)))
            }
            None => (None, None),
        };
        rows.push(ReportRow { g, log2_u_lo: iv.decimal(6, false), log2_u_hi: iv.decimal(6, true), log2_u: mid, slope, increasing });
        prev = Some((g, iv));
    }
    Ok(rows)
}

/// One line of the constants table.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub exact: Option<String>,
    pub log2_lo: String,
    pub log2_hi: String,
    pub provenance: &'static str,
}

impl Constants {
    pub fn rows(&self, digits: u32) -> Vec<Row> {
        let prec = self.prec;
        let int_row = |name, x: &BigInt, provenance| Row {
            name,
            exact: Some(x.to_string()),
            log2_lo: log2_int(x, prec).decimal(digits, false),
            log2_hi: log2_int(x, prec).decimal(digits, true),
            provenance,
        };
        let val_row = |name, b: &BoundValue| Row {
            name,
            exact: b.exact.as_ref().map(|x| x.to_string()),
            log2_lo: b.log2.decimal(digits, false),
            log2_hi: b.log2.decimal(digits, true),
            provenance: b.provenance,
        };
        let q_log2 = crate::log::ln_ratio(&big(Q.0), &big(Q.1), prec + 32).div(&crate::log::ln2(prec + 32)).at_prec(prec);
        vec![
            Row {
                name: "q",
                exact: Some(format!("{}/{}", Q.0, Q.1)),
                log2_lo: q_log2.decimal(digits, false),
                log2_hi: q_log2.decimal(digits, true),
                provenance: "q = 9073/9072",
            },
            int_row("m", &self.m, "m = 2(floor(log_q(3g+4)) + 2)"),
            int_row("m'", &self.m_prime, "m' = floor(log_{4/3}(3(4m^2(3g+3)+1)))"),
            int_row("T", &self.t, "T = 264(g+2)(m+1) − 1"),
            int_row("A", &self.a, "A = 6(floor(log_{4/3}(3(3(T+1)m'+1)))·(12m+8) + 3)"),
            int_row("m~", &self.m_tilde, "m̃ = 2(floor(log_q(60A+180)) + 2)"),
            Row {
                name: "f_base",
                exact: None,
                log2_lo: self.upper.f_base_log2.decimal(digits, false),
                log2_hi: self.upper.f_base_log2.decimal(digits, true),
                provenance: "f(g,1) = 4·sqrt(2A(2m̃+1)^4·m̃^3)",
            },
            val_row("Delta", &self.upper.delta),
            val_row("P", &self.upper.p),
            val_row("Q", &self.q_bound),
            val_row("R", &self.r),
            val_row("U", &self.u),
        ]
    }
}
