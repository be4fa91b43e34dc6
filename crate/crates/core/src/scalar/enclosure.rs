//! Outward-rounded intervals `[lo, hi]` with dyadic endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};
use super::ScalarError;

static DEFAULT_PRECISION: AtomicU32 = AtomicU32::new(128);

/// Working precision in bits used when exact values are first widened.
pub fn default_precision() -> u32 {
    DEFAULT_PRECISION.load(AtomicOrdering::Relaxed)
}

pub fn set_default_precision(bits: u32) {
    DEFAULT_PRECISION.store(bits.max(16), AtomicOrdering::Relaxed);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "enclosure with lo > hi");
        Enclosure { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Enclosure { lo: x.clone(), hi: x, prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_int(n), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Enclosure {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    fn make(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        Enclosure { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn hull(&self, other: &Enclosure) -> Self {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Enclosure { lo, hi, prec: self.prec.max(other.prec) })
    }

    pub fn neg(&self) -> Self {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            Enclosure { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn add(&self, other: &Enclosure) -> Self {
        Enclosure::make(self.lo.add(&other.lo), self.hi.add(&other.hi), self.prec.max(other.prec))
    }

    pub fn sub(&self, other: &Enclosure) -> Self {
        Enclosure::make(self.lo.sub(&other.hi), self.hi.sub(&other.lo), self.prec.max(other.prec))
    }

    pub fn mul(&self, other: &Enclosure) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_point() && other.is_point() {
            let p = self.lo.mul(&other.lo);
            return Enclosure::make(p.clone(), p, prec);
        }
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure::make(lo, hi, prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Enclosure::make(self.lo.mul_pow2(k), self.hi.mul_pow2(k), self.prec)
    }

    pub fn sqr(&self) -> Self {
        let a = self.abs();
        Enclosure::make(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    pub fn powi(&self, n: u32) -> Self {
        if n % 2 == 0 {
            let a = self.abs();
            let mut out = Enclosure::from_int(1, self.prec);
            for _ in 0..n {
                out = out.mul(&a);
            }
            out
        } else {
            // Odd powers are monotone: evaluate each endpoint with its own rounding.
            let mut lo = self.lo.clone();
            let mut hi = self.hi.clone();
            for _ in 1..n {
                lo = lo.mul(&self.lo).round(self.prec + 8, Round::Down);
                hi = hi.mul(&self.hi).round(self.prec + 8, Round::Up);
            }
            Enclosure::make(lo, hi, self.prec)
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.contains_zero() {
            return Err(ScalarError::StraddlesZero);
        }
        let one = Dyadic::from_int(1);
        Ok(Enclosure {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &Enclosure) -> Result<Self, ScalarError> {
        if other.contains_zero() {
            return Err(ScalarError::StraddlesZero);
        }
        let prec = self.prec.max(other.prec);
        let q = |a: &Dyadic, b: &Dyadic, d: Round| a.div(b, prec, d);
        let lows = [
            q(&self.lo, &other.lo, Round::Down),
            q(&self.lo, &other.hi, Round::Down),
            q(&self.hi, &other.lo, Round::Down),
            q(&self.hi, &other.hi, Round::Down),
        ];
        let highs = [
            q(&self.lo, &other.lo, Round::Up),
            q(&self.lo, &other.hi, Round::Up),
            q(&self.hi, &other.lo, Round::Up),
            q(&self.hi, &other.hi, Round::Up),
        ];
        Ok(Enclosure {
            lo: lows.iter().min().unwrap().clone(),
            hi: highs.iter().max().unwrap().clone(),
            prec,
        })
    }

    pub fn sqrt(&self) -> Result<Self, ScalarError> {
        if self.lo.signum() < 0 {
            return Err(ScalarError::Domain(self.to_string(), "sqrt"));
        }
        Ok(Enclosure {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Widen by `2^e` on both sides.
    pub fn inflate(&self, e: i64) -> Self {
        let r = Dyadic::pow2(e);
        Enclosure::make(self.lo.sub(&r), self.hi.add(&r), self.prec)
    }

    /// `Less` if every point of `self` is below every point of `other`, `None` if undecided.
    pub fn cmp(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn square_of_sqrt2_bracket_contains_two() {
        let x = Enclosure::new(
            Dyadic::from_rational(&r(141, 100), 64, Round::Down),
            Dyadic::from_rational(&r(142, 100), 64, Round::Up),
            64,
        );
        assert!(x.mul(&x).contains_rational(&r(2, 1)));
    }

    #[test]
    fn overlapping_enclosures_are_unordered() {
        let a = Enclosure::new(
            Dyadic::from_rational(&r(30, 100), 64, Round::Down),
            Dyadic::from_rational(&r(31, 100), 64, Round::Up),
            64,
        );
        let b = Enclosure::new(
            Dyadic::from_rational(&r(305, 1000), 64, Round::Down),
            Dyadic::from_rational(&r(32, 100), 64, Round::Up),
            64,
        );
        assert_eq!(a.cmp(&b), None);
    }

    #[test]
    fn division_contains_quotient() {
        let a = Enclosure::from_rational(&r(1, 3), 100);
        let b = Enclosure::from_rational(&r(-7, 11), 100);
        assert!(a.div(&b).unwrap().contains_rational(&r(-11, 21)));
        assert!(a.div(&Enclosure::from_rational(&r(0, 1), 100)).is_err());
    }

    #[test]
    fn odd_power_of_straddling_interval() {
        let x = Enclosure::new(Dyadic::from_int(-2), Dyadic::from_int(1), 64);
        let c = x.powi(3);
        assert_eq!(c.lo(), &Dyadic::from_int(-8));
        assert_eq!(c.hi(), &Dyadic::from_int(1));
        let s = x.powi(2);
        assert!(s.lo().is_zero() && s.hi() == &Dyadic::from_int(4));
    }
}
