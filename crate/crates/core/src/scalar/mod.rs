//! Numbers used by every geometric computation in the crate.
//!
//! A [`Scalar`] is an exact rational, an exact element `p + q*sqrt(D)` of a real
//! quadratic field, or an outward-rounded [`Enclosure`]. Exact values compare
//! exactly; enclosures compare three-valued.

mod dyadic;
mod enclosure;
pub mod transcendental;

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use dyadic::{Dyadic, Round, MIN_EXP};
pub use enclosure::{default_precision, set_default_precision, Enclosure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor enclosure contains zero")]
    StraddlesZero,
    #[error("cannot mix sqrt({0}) with sqrt({1})")]
    MixedFields(u64, u64),
    #[error("comparison unresolved at {0} bits")]
    Unresolved(u32),
    #[error("radicand {0} must be square-free and greater than 1")]
    BadRadicand(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is outside the domain of {1}")]
    Domain(String, &'static str),
}

/// Result of a comparison that may be undecidable for enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp3 {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl Cmp3 {
    pub fn known(self) -> Option<Ordering> {
        match self {
            Cmp3::Less => Some(Ordering::Less),
            Cmp3::Equal => Some(Ordering::Equal),
            Cmp3::Greater => Some(Ordering::Greater),
            Cmp3::Unknown => None,
        }
    }
}

impl From<Ordering> for Cmp3 {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Cmp3::Less,
            Ordering::Equal => Cmp3::Equal,
            Ordering::Greater => Cmp3::Greater,
        }
    }
}

/// `p + q*sqrt(d)` with `q != 0` and `d` square-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quadratic {
    p: BigRational,
    q: BigRational,
    d: u64,
}

impl Quadratic {
    pub fn p(&self) -> &BigRational {
        &self.p
    }
    pub fn q(&self) -> &BigRational {
        &self.q
    }
    pub fn radicand(&self) -> u64 {
        self.d
    }

    fn sign(&self) -> Ordering {
        sign_of(&self.p, &self.q, self.d)
    }

    fn to_enclosure(&self, prec: u32) -> Enclosure {
        let w = prec + 16;
        let root = transcendental::sqrt_int(self.d, w);
        let p = Enclosure::from_rational(&self.p, w);
        let q = Enclosure::from_rational(&self.q, w);
        p.add(&q.mul(&root)).with_prec(prec)
    }
}

/// Exact sign of `p + q*sqrt(d)`.
fn sign_of(p: &BigRational, q: &BigRational, d: u64) -> Ordering {
    let sp = p.cmp(&BigRational::zero());
    let sq = q.cmp(&BigRational::zero());
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // Opposite signs: compare p^2 with q^2 d.
    let p2 = p * p;
    let q2d = q * q * BigRational::from_integer(BigInt::from(d));
    match p2.cmp(&q2d) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(Quadratic),
    Enclosure(Enclosure),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        let one = BigInt::one();
        if k >= 0 {
            Scalar::Rational(BigRational::from_integer(one << k as usize))
        } else {
            Scalar::Rational(BigRational::new(one.clone(), one << (-k) as usize))
        }
    }

    /// `p + q*sqrt(d)`; demotes to a rational when `q = 0`.
    pub fn quadratic(p: BigRational, q: BigRational, d: u64) -> Result<Self, ScalarError> {
        if !is_square_free(d) {
            return Err(ScalarError::BadRadicand(d));
        }
        Ok(Scalar::quad_unchecked(p, q, d))
    }

    fn quad_unchecked(p: BigRational, q: BigRational, d: u64) -> Self {
        if q.is_zero() {
            Scalar::Rational(p)
        } else {
            Scalar::Quadratic(Quadratic { p, q, d })
        }
    }

    /// The golden ratio `(1 + sqrt 5)/2`.
    pub fn golden() -> Self {
        let h = BigRational::new(1.into(), 2.into());
        Scalar::quad_unchecked(h.clone(), h, 5)
    }

    pub fn enclosure(e: Enclosure) -> Self {
        Scalar::Enclosure(e)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Enclosure(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_enclosure(&self) -> Option<&Enclosure> {
        match self {
            Scalar::Enclosure(e) => Some(e),
            _ => None,
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Quadratic(q) => Some(q.d),
            _ => None,
        }
    }

    /// Working precision of an enclosure; `None` for exact values.
    pub fn precision(&self) -> Option<u32> {
        self.as_enclosure().map(Enclosure::prec)
    }

    /// Enclosure of this value at `prec` bits (enclosures keep their own bounds).
    pub fn to_enclosure(&self, prec: u32) -> Enclosure {
        match self {
            Scalar::Rational(r) => Enclosure::from_rational(r, prec),
            Scalar::Quadratic(q) => q.to_enclosure(prec),
            Scalar::Enclosure(e) => e.clone(),
        }
    }

    pub fn widen(&self, prec: u32) -> Scalar {
        Scalar::Enclosure(self.to_enclosure(prec))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or_else(|| Dyadic::from_rational(r, 64, Round::Down).to_f64()),
            Scalar::Quadratic(q) => q.to_enclosure(64).to_f64(),
            Scalar::Enclosure(e) => e.to_f64(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(Quadratic { p: -&q.p, q: -&q.q, d: q.d }),
            Scalar::Enclosure(e) => Scalar::Enclosure(e.neg()),
        }
    }

    /// Field element pair `(p, q, d)` of an exact value; rationals have `q = 0`.
    fn parts(&self) -> Option<(BigRational, BigRational, Option<u64>)> {
        match self {
            Scalar::Rational(r) => Some((r.clone(), BigRational::zero(), None)),
            Scalar::Quadratic(q) => Some((q.p.clone(), q.q.clone(), Some(q.d))),
            Scalar::Enclosure(_) => None,
        }
    }

    fn common_field(a: Option<u64>, b: Option<u64>) -> Result<u64, ScalarError> {
        match (a, b) {
            (Some(x), Some(y)) if x != y => Err(ScalarError::MixedFields(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(x),
            (None, None) => Ok(0),
        }
    }

    fn enclosure_pair(&self, other: &Scalar) -> (Enclosure, Enclosure) {
        let prec = match (self.precision(), other.precision()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => default_precision(),
        };
        (self.to_enclosure(prec), other.to_enclosure(prec))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a + b));
        }
        match (self.parts(), other.parts()) {
            (Some((p1, q1, d1)), Some((p2, q2, d2))) => {
                let d = Scalar::common_field(d1, d2)?;
                Ok(Scalar::quad_unchecked(p1 + p2, q1 + q2, d))
            }
            _ => {
                let (a, b) = self.enclosure_pair(other);
                Ok(Scalar::Enclosure(a.add(&b)))
            }
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a * b));
        }
        match (self.parts(), other.parts()) {
            (Some((p1, q1, d1)), Some((p2, q2, d2))) => {
                let d = Scalar::common_field(d1, d2)?;
                let dd = BigRational::from_integer(BigInt::from(d));
                let p = &p1 * &p2 + &q1 * &q2 * dd;
                let q = p1 * q2 + q1 * p2;
                Ok(Scalar::quad_unchecked(p, q, d))
            }
            _ => {
                let (a, b) = self.enclosure_pair(other);
                Ok(Scalar::Enclosure(a.mul(&b)))
            }
        }
    }

    pub fn try_recip(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Quadratic(x) => {
                let dd = BigRational::from_integer(BigInt::from(x.d));
                let norm = &x.p * &x.p - &x.q * &x.q * dd;
                Ok(Scalar::quad_unchecked(&x.p / &norm, -(&x.q / &norm), x.d))
            }
            Scalar::Enclosure(e) => Ok(Scalar::Enclosure(e.recip()?)),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            if b.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            return Ok(Scalar::Rational(a / b));
        }
        if self.is_exact() && other.is_exact() {
            return self.try_mul(&other.try_recip()?);
        }
        let (a, b) = self.enclosure_pair(other);
        Ok(Scalar::Enclosure(a.div(&b)?))
    }

    pub fn mul_int(&self, k: i64) -> Scalar {
        self * &Scalar::int(k)
    }

    pub fn powi(&self, n: u32) -> Scalar {
        match self {
            Scalar::Enclosure(e) => Scalar::Enclosure(e.powi(n)),
            _ => {
                let mut out = Scalar::one();
                for _ in 0..n {
                    out = &out * self;
                }
                out
            }
        }
    }

    /// Sign of the value: `Some(-1|0|1)`, `None` for an enclosure containing zero but not equal to it.
    pub fn signum(&self) -> Option<i32> {
        let o = match self {
            Scalar::Rational(r) => r.cmp(&BigRational::zero()),
            Scalar::Quadratic(q) => q.sign(),
            Scalar::Enclosure(e) => {
                if e.lo().signum() > 0 {
                    Ordering::Greater
                } else if e.hi().signum() < 0 {
                    Ordering::Less
                } else if e.lo().is_zero() && e.hi().is_zero() {
                    Ordering::Equal
                } else {
                    return None;
                }
            }
        };
        Some(o as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Some(0)
    }

    /// Three-valued comparison.
    pub fn cmp3(&self, other: &Scalar) -> Cmp3 {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return a.cmp(b).into();
        }
        match (self.parts(), other.parts()) {
            (Some((p1, q1, d1)), Some((p2, q2, d2))) => match Scalar::common_field(d1, d2) {
                Ok(d) => sign_of(&(p1 - p2), &(q1 - q2), d).into(),
                // Different fields: values are unequal unless both are rational,
                // and the enclosures eventually separate.
                Err(_) => {
                    let mut prec = 64;
                    loop {
                        let a = self.to_enclosure(prec);
                        let b = other.to_enclosure(prec);
                        if let Some(o) = a.cmp(&b) {
                            return o.into();
                        }
                        prec *= 2;
                    }
                }
            },
            _ => {
                let (a, b) = self.enclosure_pair(other);
                a.cmp(&b).map_or(Cmp3::Unknown, Cmp3::from)
            }
        }
    }

    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        self.cmp3(other).known().ok_or_else(|| {
            let prec = self.precision().or(other.precision()).unwrap_or_else(default_precision);
            ScalarError::Unresolved(prec)
        })
    }

    pub fn try_lt(&self, other: &Scalar) -> Result<bool, ScalarError> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn try_le(&self, other: &Scalar) -> Result<bool, ScalarError> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    /// `self <= other` is proven (never true on an undecided overlap).
    pub fn certainly_le(&self, other: &Scalar) -> bool {
        match self.cmp3(other) {
            Cmp3::Less | Cmp3::Equal => true,
            Cmp3::Greater => false,
            Cmp3::Unknown => {
                let (a, b) = self.enclosure_pair(other);
                a.hi() <= b.lo()
            }
        }
    }

    pub fn try_min(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(if self.try_le(other)? { self.clone() } else { other.clone() })
    }

    pub fn try_max(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(if self.try_le(other)? { other.clone() } else { self.clone() })
    }

    /// Enclosure-aware min: hull of lower bounds for undecided pairs.
    pub fn min_bound(&self, other: &Scalar) -> Scalar {
        match self.try_min(other) {
            Ok(v) => v,
            Err(_) => {
                let (a, b) = self.enclosure_pair(other);
                let lo = a.lo().clone().min(b.lo().clone());
                let hi = a.hi().clone().min(b.hi().clone());
                Scalar::Enclosure(Enclosure::new(lo, hi, a.prec()))
            }
        }
    }

    /// Enclosure-aware max.
    pub fn max_bound(&self, other: &Scalar) -> Scalar {
        match self.try_max(other) {
            Ok(v) => v,
            Err(_) => {
                let (a, b) = self.enclosure_pair(other);
                let lo = a.lo().clone().max(b.lo().clone());
                let hi = a.hi().clone().max(b.hi().clone());
                Scalar::Enclosure(Enclosure::new(lo, hi, a.prec()))
            }
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Enclosure(e) => Scalar::Enclosure(e.abs()),
            _ => {
                if self.signum() == Some(-1) {
                    self.neg()
                } else {
                    self.clone()
                }
            }
        }
    }

    /// `|self - other|`
    pub fn dist(&self, other: &Scalar) -> Scalar {
        (self - other).abs()
    }

    /// Exact for nonnegative rationals whose root lies in `Q` or `Q(sqrt D)` with a
    /// small radicand; an enclosure otherwise.
    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        if let Scalar::Rational(r) = self {
            if r.is_negative() {
                return Err(ScalarError::Domain(self.to_string(), "sqrt"));
            }
            if let Some(root) = exact_rational_sqrt(r) {
                return Ok(root);
            }
        }
        let e = self.to_enclosure(self.precision().unwrap_or_else(default_precision));
        Ok(Scalar::Enclosure(e.sqrt()?))
    }
}

/// `sqrt(n/d) = k/d * sqrt(D)` with `n d = k^2 D` and `D` square-free, when `n d` fits in 48 bits.
fn exact_rational_sqrt(r: &BigRational) -> Option<Scalar> {
    let nd = (r.numer() * r.denom()).to_u64()?;
    if nd >= 1 << 48 {
        return None;
    }
    let (mut k, mut rest, mut f) = (1u64, nd, 2u64);
    while f * f <= rest {
        while rest % (f * f) == 0 {
            rest /= f * f;
            k *= f;
        }
        f += 1;
    }
    let q = BigRational::new(BigInt::from(k), r.denom().clone());
    Some(if rest == 1 || nd == 0 {
        Scalar::Rational(if nd == 0 { BigRational::zero() } else { q })
    } else {
        Scalar::quad_unchecked(BigRational::zero(), q, rest)
    })
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($method)),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Quadratic(q) => {
                let sign = if q.q.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*sqrt({})", fmt_rational(&q.p), sign, fmt_rational(&q.q.abs()), q.d)
            }
            Scalar::Enclosure(e) => write!(f, "{e}"),
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip = ip.trim().trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() && ip.is_empty() {
            return None;
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Accepts `n`, `n/d`, decimals, `p+q*sqrt(D)` variants and `[lo,hi]` dyadic enclosures.
    fn from_str(s: &str) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (lo, hi) = inner.split_once(',').ok_or_else(err)?;
            let lo: Dyadic = lo.parse().map_err(|_| err())?;
            let hi: Dyadic = hi.parse().map_err(|_| err())?;
            if lo > hi {
                return Err(err());
            }
            return Ok(Scalar::Enclosure(Enclosure::new(lo, hi, default_precision())));
        }
        let Some(pos) = t.find("sqrt(") else {
            return parse_rational(&t).map(Scalar::Rational).ok_or_else(err);
        };
        let rest = &t[pos + 5..];
        let d: u64 = rest.strip_suffix(')').ok_or_else(err)?.parse().map_err(|_| err())?;
        let head = &t[..pos];
        // head is "[p](+|-)[q*]" or "[q*]" or "-"
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head.char_indices().rev().find(|&(i, c)| (c == '+' || c == '-') && i > 0 && {
            let prev = head.as_bytes()[i - 1];
            prev != b'/' && prev != b'e'
        });
        let (p, qs) = match split {
            Some((i, _)) => (parse_rational(&head[..i]).ok_or_else(err)?, &head[i..]),
            None => (BigRational::zero(), head),
        };
        let q = match qs {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.trim_start_matches('+')).ok_or_else(err)?,
        };
        Scalar::quadratic(p, q, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(s("1/3") + s("1/6"), s("1/2"));
    }

    #[test]
    fn golden_squared_is_golden_plus_one() {
        let g = Scalar::golden();
        assert_eq!(&g * &g, &g + &Scalar::one());
    }

    #[test]
    fn golden_exceeds_eight_fifths() {
        assert_eq!(Scalar::golden().cmp3(&s("8/5")), Cmp3::Greater);
    }

    #[test]
    fn mixed_radicands_rejected() {
        let a = s("sqrt(2)");
        let b = s("sqrt(3)");
        assert_eq!(a.try_add(&b), Err(ScalarError::MixedFields(2, 3)));
        assert_eq!(a.cmp3(&b), Cmp3::Less);
    }

    #[test]
    fn zero_divisor_errors() {
        assert_eq!(s("1").try_div(&s("0")), Err(ScalarError::DivisionByZero));
        let straddle = s("[-1,1]");
        assert_eq!(s("1").try_div(&straddle), Err(ScalarError::StraddlesZero));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(s("0.3"), Scalar::ratio(3, 10));
        assert_eq!(s("-1.25"), Scalar::ratio(-5, 4));
        assert_eq!(s("1/2+1/2*sqrt(5)"), Scalar::golden());
        assert_eq!(s("sqrt(2)") * s("sqrt(2)"), Scalar::int(2));
        assert_eq!(s("-sqrt(2)") + s("sqrt(2)"), Scalar::zero());
        assert_eq!(s("3-2*sqrt(7)").to_string(), "3-2*sqrt(7)");
        assert_eq!(s("-1/3+sqrt(5)").to_string(), "-1/3+1*sqrt(5)");
        assert!("sqrt(4)".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for x in ["7", "-3/8", "1/2+1/2*sqrt(5)", "0-5/3*sqrt(13)", "[3*2^-2,1]"] {
            assert_eq!(s(&s(x).to_string()), s(x));
        }
    }

    #[test]
    fn enclosure_overlap_unknown() {
        assert_eq!(s("[3*2^-4,5*2^-4]").cmp3(&s("[1*2^-2,1]")), Cmp3::Unknown);
    }

    #[test]
    fn quadratic_promotes_to_enclosure() {
        let g = Scalar::golden();
        let e = g.widen(100);
        let sum = &e + &g;
        assert!(!sum.is_exact());
        assert!((sum.to_f64() - 3.2360679774997896).abs() < 1e-15);
    }

    #[test]
    fn min_max_exact() {
        assert_eq!(s("1/3").try_min(&s("1/4")).unwrap(), s("1/4"));
        assert_eq!(Scalar::golden().try_max(&s("2")).unwrap(), s("2"));
    }
}
