//! Rigorous enclosures of pi, ln, exp and sin.
//!
//! Series are summed in interval arithmetic at a few guard bits above the
//! requested precision, and the truncation remainder is added as a symmetric
//! error term.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::dyadic::{Dyadic, Round};
use super::enclosure::Enclosure;
use super::ScalarError;

const GUARD: u32 = 24;

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// Sum of `sign^k / ((2k+1) n^(2k+1))`, i.e. atan(1/n) or atanh(1/n).
fn arc_series(n: u64, alternating: bool, prec: u32) -> Enclosure {
    let w = prec + GUARD;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut pow = BigInt::from(n);
    let mut sum = Enclosure::from_int(0, w);
    let mut k: u64 = 0;
    loop {
        let term = Enclosure::from_rational(&rat(BigInt::one(), BigInt::from(2 * k + 1) * &pow), w);
        sum = if alternating && k % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        k += 1;
        pow *= &n2;
        if pow.bits() as u32 > w + 4 {
            break;
        }
    }
    // The first omitted term bounds the tail (geometric with ratio < 1/2 for n >= 2).
    let tail = Enclosure::from_rational(&rat(BigInt::from(2), BigInt::from(2 * k + 1) * &pow), w);
    let tail = Enclosure::new(tail.hi().neg(), tail.hi().clone(), w);
    sum.add(&tail)
}

static PI: Mutex<Option<HashMap<u32, Enclosure>>> = Mutex::new(None);
static LN2: Mutex<Option<HashMap<u32, Enclosure>>> = Mutex::new(None);

fn memo(slot: &Mutex<Option<HashMap<u32, Enclosure>>>, prec: u32, make: impl FnOnce(u32) -> Enclosure) -> Enclosure {
    {
        let guard = slot.lock().unwrap();
        if let Some(v) = guard.as_ref().and_then(|m| m.get(&prec)) {
            return v.clone();
        }
    }
    let v = make(prec);
    slot.lock().unwrap().get_or_insert_with(HashMap::new).insert(prec, v.clone());
    v
}

pub fn pi(prec: u32) -> Enclosure {
    memo(&PI, prec, |p| {
        let a = arc_series(5, true, p + 8).mul_pow2(4);
        let b = arc_series(239, true, p + 8).mul_pow2(2);
        a.sub(&b).with_prec(p)
    })
}

pub fn ln2(prec: u32) -> Enclosure {
    memo(&LN2, prec, |p| arc_series(3, false, p + 8).mul_pow2(1).with_prec(p))
}

/// Enclosure of `ln x` for a positive dyadic point.
fn ln_point(x: &Dyadic, prec: u32) -> Enclosure {
    let w = prec + GUARD;
    let mut t = x.top();
    let mut y = x.mul_pow2(-t);
    if y < Dyadic::new(BigInt::from(3), -2) {
        y = y.mul_pow2(1);
        t -= 1;
    }
    let one = Dyadic::from_int(1);
    let u = Enclosure::point(y.sub(&one), w).div(&Enclosure::point(y.add(&one), w)).unwrap();
    let u2 = u.sqr();
    let mut pow = u.clone();
    let mut sum = Enclosure::from_int(0, w);
    let mut k: i64 = 0;
    loop {
        sum = sum.add(&pow.div(&Enclosure::from_int(2 * k + 1, w)).unwrap());
        pow = pow.mul(&u2);
        k += 1;
        let mag = pow.abs();
        if mag.hi().is_zero() || mag.hi().top() < -(w as i64) - 4 {
            break;
        }
    }
    // |u| <= 1/5, so the tail is at most 2|u|^(2k+1).
    let r = pow.abs().hi().mul_pow2(1);
    let sum = sum.add(&Enclosure::new(r.neg(), r, w)).mul_pow2(1);
    let scale = ln2(w).mul(&Enclosure::from_int(t, w));
    sum.add(&scale).with_prec(prec)
}

/// Enclosure of `exp x` for a dyadic point.
fn exp_point(x: &Dyadic, prec: u32) -> Enclosure {
    let r = (x.top() + 1).max(0);
    let w = prec + GUARD + r as u32;
    let y = Enclosure::point(x.mul_pow2(-r), w);
    let mut term = Enclosure::from_int(1, w);
    let mut sum = Enclosure::from_int(1, w);
    let mut k: i64 = 1;
    loop {
        term = term.mul(&y).div(&Enclosure::from_int(k, w)).unwrap();
        sum = sum.add(&term);
        k += 1;
        let mag = term.abs();
        if mag.hi().is_zero() || mag.hi().top() < -(w as i64) - 4 {
            break;
        }
    }
    let rem = term.abs().hi().mul_pow2(1);
    let mut out = sum.add(&Enclosure::new(rem.neg(), rem, w));
    for _ in 0..r {
        out = out.sqr();
    }
    out.with_prec(prec)
}

pub fn ln(x: &Enclosure) -> Result<Enclosure, ScalarError> {
    if x.lo().signum() <= 0 {
        return Err(ScalarError::Domain(x.to_string(), "ln"));
    }
    let p = x.prec();
    let lo = ln_point(x.lo(), p);
    let hi = if x.is_point() { lo.clone() } else { ln_point(x.hi(), p) };
    Ok(Enclosure::new(lo.lo().clone(), hi.hi().clone(), p))
}

pub fn exp(x: &Enclosure) -> Enclosure {
    let p = x.prec();
    let lo = exp_point(x.lo(), p);
    let hi = if x.is_point() { lo.clone() } else { exp_point(x.hi(), p) };
    Enclosure::new(lo.lo().clone(), hi.hi().clone(), p)
}

pub fn sin(x: &Enclosure) -> Enclosure {
    let p = x.prec();
    let unit = Enclosure::new(Dyadic::from_int(-1), Dyadic::from_int(1), p);
    if x.width() > Dyadic::from_int(4) {
        return unit;
    }
    let w = p + GUARD;
    let c = x.mid();
    let rho = x.width().mul_pow2(-1);
    let two_pi = pi(w).mul_pow2(1);
    let turns = (c.to_f64() / std::f64::consts::TAU).round() as i64;
    let y = Enclosure::point(c, w).sub(&two_pi.mul(&Enclosure::from_int(turns, w)));
    let y2 = y.sqr();
    let mut term = y.clone();
    let mut sum = Enclosure::from_int(0, w);
    let mut k: i64 = 0;
    loop {
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        term = term.mul(&y2).div(&Enclosure::from_int((2 * k + 2) * (2 * k + 3), w)).unwrap();
        k += 1;
        let mag = term.abs();
        if k > 4 && (mag.hi().is_zero() || mag.hi().top() < -(w as i64) - 4) {
            break;
        }
    }
    let rem = term.abs().hi().add(&rho);
    let out = sum.add(&Enclosure::new(rem.neg(), rem, w)).with_prec(p);
    out.intersect(&unit).unwrap_or(unit)
}

/// `sqrt(n)` for a non-negative integer.
pub fn sqrt_int(n: u64, prec: u32) -> Enclosure {
    let d = Dyadic::from_int(n as i64);
    Enclosure::new(d.sqrt(prec, Round::Down), d.sqrt(prec, Round::Up), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(e: &Enclosure, v: f64, tol: f64) -> bool {
        (e.to_f64() - v).abs() < tol && e.width().to_f64() < 1e-30
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!(approx(&p, std::f64::consts::PI, 1e-15));
        let lo = BigRational::new(BigInt::from(314159265358979323u64), BigInt::from(100000000000000000u64));
        let hi = BigRational::new(BigInt::from(314159265358979324u64), BigInt::from(100000000000000000u64));
        assert!(p.lo().cmp_rational(&lo).is_gt() && p.hi().cmp_rational(&hi).is_lt());
    }

    #[test]
    fn ln_and_exp_are_inverse() {
        for v in [0.001f64, 0.3, 1.0, 2.5, 1000.0] {
            let x = Enclosure::from_rational(&BigRational::from_float(v).unwrap(), 160);
            let l = ln(&x).unwrap();
            assert!(approx(&l, v.ln(), 1e-12));
            let back = exp(&l);
            assert!(back.contains(&x));
        }
    }

    #[test]
    fn sin_values() {
        for v in [-20.0f64, -3.0, 0.5, 1.0, 7.0, 100.0] {
            let x = Enclosure::from_rational(&BigRational::from_float(v).unwrap(), 160);
            assert!(approx(&sin(&x), f64::sin(v), 1e-12), "sin({v})");
        }
    }

    #[test]
    fn sin_of_pi_contains_zero() {
        assert!(sin(&pi(128)).contains_zero());
    }
}
