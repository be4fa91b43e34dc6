//! Binary floating values `m * 2^e` with arbitrary-size mantissa.
//!
//! Every rounding entry point takes an explicit direction so that enclosures can
//! round their lower bound down and their upper bound up.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponents below this are flushed outward to zero or to `±2^MIN_EXP`.
/// Keeps iterated cubes near zero from overflowing the exponent.
pub const MIN_EXP: i64 = -(1 << 40);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position of the leading bit: `|x|` lies in `[2^(t-1), 2^t)`.
    pub fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits() as i64;
        let prec = prec.max(2) as i64;
        let mut out = if bits <= prec {
            self.clone()
        } else {
            let shift = (bits - prec) as usize;
            let floor = &self.mant >> shift;
            let exact = (&floor << shift) == self.mant;
            let m = match dir {
                Round::Down => floor,
                Round::Up if exact => floor,
                Round::Up => floor + 1,
            };
            Dyadic::new(m, self.exp + shift as i64)
        };
        out.flush(dir);
        out
    }

    fn flush(&mut self, dir: Round) {
        if self.is_zero() || self.exp >= MIN_EXP {
            return;
        }
        // Magnitude far below 2^MIN_EXP: replace by the adjacent bound.
        let positive = self.signum() > 0;
        *self = match (dir, positive) {
            (Round::Down, true) | (Round::Up, false) => Dyadic::zero(),
            (Round::Down, false) => Dyadic::pow2(MIN_EXP).neg(),
            (Round::Up, true) => Dyadic::pow2(MIN_EXP),
        };
    }

    /// Directed rounding of `self / other` to `prec` bits.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let k = k.max(0);
        let num = &self.mant << k as usize;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = if dir == Round::Up && !r.is_zero() { q + 1 } else { q };
        Dyadic::new(q, self.exp - other.exp - k).round(prec, dir)
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let n = r.numer();
        let d = r.denom();
        if d.is_one() {
            return Dyadic::new(n.clone(), 0).round(prec, dir);
        }
        let k = prec as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let (q, rem, e) = if k >= 0 {
            let (q, rem) = (n << k as usize).div_mod_floor(d);
            (q, rem, -k)
        } else {
            let (q, rem) = n.div_mod_floor(&(d << (-k) as usize));
            (q, rem, -k)
        };
        let q = if dir == Round::Up && !rem.is_zero() { q + 1 } else { q };
        Dyadic::new(q, e).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.to_rational().cmp(r)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = &self.mant >> shift as usize;
        let m: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(0.0);
        let e = self.exp + shift;
        if e < -2000 {
            return 0.0 * m;
        }
        if e > 2000 {
            return m * f64::INFINITY;
        }
        m * 2f64.powi(e as i32)
    }

    /// Floor of `sqrt(self)` or its ceiling, at `prec` bits. Requires `self >= 0`.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the mantissa has about 2*prec bits and an even exponent.
        let mut k = 2 * prec as i64 + 4 - self.mant.bits() as i64;
        if k < 0 {
            k = 0;
        }
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = &self.mant << k as usize;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = if dir == Round::Up && !exact { s + 1 } else { s };
        Dyadic::new(s, (self.exp - k) / 2).round(prec, dir)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes via leading-bit position first.
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}

impl std::str::FromStr for Dyadic {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let s = s.trim();
        match s.split_once("*2^") {
            Some((m, e)) => {
                let m: BigInt = m.trim().parse().map_err(|_| ())?;
                let e: i64 = e.trim().parse().map_err(|_| ())?;
                Ok(Dyadic::new(m, e))
            }
            None => Ok(Dyadic::new(s.parse().map_err(|_| ())?, 0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_brackets_rationals() {
        for (n, d) in [(1, 3), (-1, 3), (22, 7), (-355, 113), (1, 1024), (5, 1)] {
            let r = q(n, d);
            let lo = Dyadic::from_rational(&r, 40, Round::Down);
            let hi = Dyadic::from_rational(&r, 40, Round::Up);
            assert!(lo.to_rational() <= r && r <= hi.to_rational());
            assert!(hi.sub(&lo).to_rational() <= r.abs() * q(1, 1 << 38) + q(1, 1 << 40));
        }
    }

    #[test]
    fn negative_shift_floors() {
        let x = Dyadic::from_int(-7);
        assert_eq!(x.round(2, Round::Down).to_rational(), q(-8, 1));
        assert_eq!(x.round(2, Round::Up).to_rational(), q(-6, 1));
    }

    #[test]
    fn sqrt_two_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Round::Down);
        let hi = two.sqrt(64, Round::Up);
        assert!(lo.mul(&lo) <= two && hi.mul(&hi) >= two);
        assert!(lo < hi);
    }

    #[test]
    fn tiny_values_flush_outward() {
        let t = Dyadic::pow2(MIN_EXP - 5);
        assert!(t.round(64, Round::Down).is_zero());
        assert_eq!(t.round(64, Round::Up), Dyadic::pow2(MIN_EXP));
        assert_eq!(t.neg().round(64, Round::Down), Dyadic::pow2(MIN_EXP).neg());
    }

    #[test]
    fn text_round_trip() {
        let d = Dyadic::new(BigInt::from(-12345), -77);
        assert_eq!(d.to_string().parse::<Dyadic>().unwrap(), d);
    }

    #[test]
    fn ordering_matches_rationals() {
        let xs = [q(1, 3), q(-2, 5), q(7, 2), q(-9, 4), q(0, 1), q(1, 1 << 20)];
        for a in &xs {
            for b in &xs {
                let da = Dyadic::from_rational(a, 80, Round::Down);
                let db = Dyadic::from_rational(b, 80, Round::Down);
                if a != b {
                    assert_eq!(da.cmp(&db), a.cmp(b));
                }
            }
        }
    }
}
