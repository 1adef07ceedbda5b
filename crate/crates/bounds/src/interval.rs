//! Closed intervals of dyadic fixed-point numbers: `[lo, hi] / 2^prec`,
//! rounded outward after every operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    floor_div(a, &(BigInt::one() << k))
}

fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    ceil_div(a, &(BigInt::one() << k))
}

impl Interval {
    pub fn point(x: &BigInt, prec: u32) -> Interval {
        let v = x << prec;
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn from_i64(x: i64, prec: u32) -> Interval {
        Interval::point(&BigInt::from(x), prec)
    }

    /// The rational `p / q` (with `q > 0`), rounded outward.
    pub fn ratio(p: &BigInt, q: &BigInt, prec: u32) -> Interval {
        assert!(q.is_positive());
        let s = p << prec;
        Interval { lo: floor_div(&s, q), hi: ceil_div(&s, q), prec }
    }

    /// Smallest interval holding both endpoints.
    pub fn hull(a: &BigInt, b: &BigInt, prec: u32) -> Interval {
        Interval { lo: a.min(b).clone(), hi: a.max(b).clone(), prec }
    }

    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// `log2` of the width, or `None` for a point interval.
    pub fn log2_width(&self) -> Option<f64> {
        let w = self.width_ulps();
        if w.is_zero() {
            return None;
        }
        Some(w.bits() as f64 - 1.0 - self.prec as f64)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        Interval::hull(&a, &b, self.prec)
    }

    /// Exact division by a positive integer, rounded outward.
    pub fn div_int(&self, k: &BigInt) -> Interval {
        assert!(k.is_positive());
        Interval { lo: floor_div(&self.lo, k), hi: ceil_div(&self.hi, k), prec: self.prec }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap();
        let hi = c.iter().max().unwrap();
        Interval { lo: shr_floor(lo, self.prec), hi: shr_ceil(hi, self.prec), prec: self.prec }
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        assert!(o.lo.is_positive() || o.hi.is_negative(), "divisor interval contains zero");
        let s = self.prec;
        let q = |a: &BigInt, b: &BigInt, up: bool| {
            let n = a << s;
            if up {
                ceil_div(&n, b)
            } else {
                floor_div(&n, b)
            }
        };
        let cands_lo = [q(&self.lo, &o.lo, false), q(&self.lo, &o.hi, false), q(&self.hi, &o.lo, false), q(&self.hi, &o.hi, false)];
        let cands_hi = [q(&self.lo, &o.lo, true), q(&self.lo, &o.hi, true), q(&self.hi, &o.lo, true), q(&self.hi, &o.hi, true)];
        Interval { lo: cands_lo.iter().min().unwrap().clone(), hi: cands_hi.iter().max().unwrap().clone(), prec: s }
    }

    /// Widen each side by `ulps` units in the last place.
    pub fn widen(&self, ulps: u32) -> Interval {
        Interval { lo: &self.lo - ulps, hi: &self.hi + ulps, prec: self.prec }
    }

    /// The floor of every point in the interval, if they agree.
    pub fn certain_floor(&self) -> Option<BigInt> {
        let a = shr_floor(&self.lo, self.prec);
        let b = shr_floor(&self.hi, self.prec);
        (a == b).then_some(a)
    }

    pub fn contains_ratio(&self, p: &BigInt, q: &BigInt) -> bool {
        // lo / 2^prec <= p / q <= hi / 2^prec
        let s = p << self.prec;
        &self.lo * q <= s && s <= &self.hi * q
    }

    /// Every point is at most every point of `o`.
    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.common(o, |a, b| a.hi <= b.lo)
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.common(o, |a, b| a.hi < b.lo)
    }

    fn common(&self, o: &Interval, f: impl Fn(&Interval, &Interval) -> bool) -> bool {
        let p = self.prec.max(o.prec);
        f(&self.at_prec(p), &o.at_prec(p))
    }

    /// Same interval at another precision (rounded outward when reducing).
    pub fn at_prec(&self, p: u32) -> Interval {
        if p >= self.prec {
            let k = p - self.prec;
            Interval { lo: &self.lo << k, hi: &self.hi << k, prec: p }
        } else {
            let k = self.prec - p;
            Interval { lo: shr_floor(&self.lo, k), hi: shr_ceil(&self.hi, k), prec: p }
        }
    }

    /// Intersection, or `None` if disjoint.
    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let p = self.prec.max(o.prec);
        let (a, b) = (self.at_prec(p), o.at_prec(p));
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        (lo <= hi).then_some(Interval { lo, hi, prec: p })
    }

    pub fn mid_f64(&self) -> f64 {
        let s = &self.lo + &self.hi;
        // keep 60 significant bits before converting
        let shift = s.bits().saturating_sub(60) as u32;
        let top = (&s >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.prec as i32 - 1)
    }

    /// Decimal rendering of the lower (`up = false`) or upper endpoint,
    /// rounded outward to `digits` fractional digits.
    pub fn decimal(&self, digits: u32, up: bool) -> String {
        let x = if up { &self.hi } else { &self.lo };
        let scaled = x * BigInt::from(10u32).pow(digits);
        let v = if up { shr_ceil(&scaled, self.prec) } else { shr_floor(&scaled, self.prec) };
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let d = digits as usize;
        let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}
