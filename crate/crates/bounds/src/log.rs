//! Natural and base-2 logarithms of positive rationals as certified
//! intervals, and floors of logarithms in rational bases.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;

// working bits beyond the requested precision
const GUARD: u32 = 32;

/// Largest precision tried before a floor is reported as ambiguous.
pub const MAX_PREC: u32 = 1 << 14;

/// `2 atanh(a / b)` for `0 <= a / b <= 1/3`, at `w` fractional bits.
fn two_atanh(a: &BigInt, b: &BigInt, w: u32) -> Interval {
    assert!(!a.is_negative() && BigInt::from(3) * a <= *b);
    let (a2, b2) = (a * a, b * b);
    // z^(2j+1) scaled by 2^w, bracketed
    let mut pl = (a << w) / b;
    let mut ph = if &pl * b == (a << w) { pl.clone() } else { &pl + 1 };
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let d = BigInt::from(2 * j + 1);
        lo += &pl / &d;
        hi += (&ph + &d - 1) / &d;
        if ph <= BigInt::one() {
            // tail: sum_{i>j} z^(2i+1)/(2i+1) <= ph (z^2 / (1 - z^2)) <= ph / 8
            hi += 1;
            break;
        }
        pl = &pl * &a2 / &b2;
        ph = (&ph * &a2 + &b2 - 1) / &b2;
        j += 1;
    }
    Interval { lo: lo << 1, hi: hi << 1, prec: w }
}

/// `ln 2` at `prec` fractional bits.
pub fn ln2(prec: u32) -> Interval {
    two_atanh(&BigInt::one(), &BigInt::from(3), prec + GUARD).at_prec(prec)
}

/// `ln(p / q)` for positive integers `p`, `q`.
pub fn ln_ratio(p: &BigInt, q: &BigInt, prec: u32) -> Interval {
    assert!(p.is_positive() && q.is_positive());
    let w = prec + GUARD;
    // p / q = 2^k y with y in [1, 2)
    let mut k = p.bits() as i64 - q.bits() as i64;
    let scaled = |k: i64| if k >= 0 { (p.clone(), q << k as u64) } else { (p << (-k) as u64, q.clone()) };
    let (mut num, mut den) = scaled(k);
    if num < den {
        k -= 1;
        (num, den) = scaled(k);
    }
    let frac = two_atanh(&(&num - &den), &(&num + &den), w);
    let l2 = two_atanh(&BigInt::one(), &BigInt::from(3), w);
    l2.mul_int(&BigInt::from(k)).add(&frac).at_prec(prec)
}

pub fn ln_int(x: &BigInt, prec: u32) -> Interval {
    ln_ratio(x, &BigInt::one(), prec)
}

/// `log2 x` for a positive integer.
pub fn log2_int(x: &BigInt, prec: u32) -> Interval {
    let w = prec + GUARD;
    ln_int(x, w).div(&ln2(w)).at_prec(prec)
}

/// `log_{p/q} x` for an integer `x >= 1` and a base `p / q > 1`.
pub fn log_base(x: &BigInt, p: &BigInt, q: &BigInt, prec: u32) -> Interval {
    let w = prec + GUARD;
    ln_int(x, w).div(&ln_ratio(p, q, w)).at_prec(prec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Floor {
    Certified(BigInt),
    /// No precision up to [`MAX_PREC`] settled the floor.
    Ambiguous(Interval),
}

/// `⌊log_{p/q} x⌋`, doubling the precision until the interval has one floor.
pub fn floor_log(x: &BigInt, p: &BigInt, q: &BigInt, start_prec: u32) -> Floor {
    let mut prec = start_prec.max(32);
    loop {
        let iv = log_base(x, p, q, prec);
        if let Some(f) = iv.certain_floor() {
            return Floor::Certified(f);
        }
        if prec >= MAX_PREC {
            return Floor::Ambiguous(iv);
        }
        prec *= 2;
    }
}

/// `⌊log_{4/3} y⌋` for `y >= 1`, exactly: the largest `n` with `4^n <= y 3^n`.
pub fn floor_log_4_3(y: &BigInt) -> u64 {
    assert!(y.is_positive());
    let (mut four, mut three) = (BigInt::from(4), y * 3);
    let mut n = 0;
    while four <= three {
        n += 1;
        four *= 4;
        three *= 3;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn ln2_digits() {
        assert_eq!(ln2(200).decimal(30, false), "0.693147180559945309417232121458");
        assert!(ln2(64).width_ulps() <= b(2));
    }

    #[test]
    fn ln_of_powers_of_two_is_multiple_of_ln2() {
        let l = ln_int(&b(1 << 20), 128);
        let twenty = ln2(128).mul_int(&b(20));
        assert!(l.intersect(&twenty).is_some());
        assert!(log2_int(&b(1 << 20), 128).contains_ratio(&b(20), &b(1)));
        assert_eq!(log2_int(&b((1 << 20) - 1), 128).certain_floor(), Some(b(19)));
    }

    #[test]
    fn small_ratio() {
        let l = ln_ratio(&b(9073), &b(9072), 128);
        assert_eq!(l.decimal(15, false), "0.000110223202095");
    }

    #[test]
    fn floors() {
        assert_eq!(floor_log(&b(999), &b(10), &b(1), 64), Floor::Certified(b(2)));
        // an exact power never separates from the integer
        assert!(matches!(floor_log(&b(1000), &b(10), &b(1), 64), Floor::Ambiguous(_)));
        assert_eq!(floor_log_4_3(&b(1)), 0);
        assert_eq!(floor_log_4_3(&b(6)), 6);
        assert_eq!(floor_log_4_3(&b(3)), 3);
    }
}
