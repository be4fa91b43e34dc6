//! One-sided shift spaces on eventually periodic sequences: subshifts of
//! finite type with diagonal shadowing, and the ladder system built from the
//! nested spaces `X_k`.
//!
//! Symbols are small integers written as decimal digits. The metric is
//! `d(ξ, η) = 2^{-i}` with `i` the first index where the sequences differ.

mod ladder;
mod sft;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::scalar::Scalar;

pub use ladder::{
    closedness_neighborhood, ict_chain, ladder_delta, ladder_omega, ladder_shadow, nearest_distance_to_layers,
    projection_pi, random_ladder_pseudo_orbit, verify_ladder_pseudo_orbit, verify_projection_properties, LadderPoint,
    LadderShadow, Level, Neighborhood, ProjectionReport,
};
pub use sft::{random_point, random_pseudo_orbit, random_sft, walters_delta, walters_shadow, SftSpec, WaltersCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("cannot parse sequence {0:?}")]
    Parse(String),
    #[error("the periodic part is empty")]
    EmptyCycle,
    #[error("{0} is not in the space")]
    NotInSpace(String),
    #[error("step {0} is not a {1}-pseudo-orbit step")]
    NotPseudoOrbit(usize, String),
    #[error("shadowing certificate failed at index {0}")]
    Certificate(usize),
    #[error("{0}")]
    Invalid(String),
}

/// `prefix` followed by `cycle` repeated forever, kept in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymSeq {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl SymSeq {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self, SymbolicError> {
        if cycle.is_empty() {
            return Err(SymbolicError::EmptyCycle);
        }
        let mut s = SymSeq { prefix, cycle };
        s.canonicalize();
        Ok(s)
    }

    /// `s^∞`.
    pub fn constant(s: u8) -> Self {
        SymSeq { prefix: Vec::new(), cycle: vec![s] }
    }

    pub fn zeros() -> Self {
        Self::constant(0)
    }

    /// `0^m 1 0^∞`.
    pub fn single_one(m: usize) -> Self {
        let mut prefix = vec![0; m];
        prefix.push(1);
        SymSeq { prefix, cycle: vec![0] }
    }

    pub fn periodic(cycle: Vec<u8>) -> Result<Self, SymbolicError> {
        Self::new(Vec::new(), cycle)
    }

    fn canonicalize(&mut self) {
        let n = self.cycle.len();
        for p in 1..=n {
            if n % p == 0 && (p..n).all(|i| self.cycle[i] == self.cycle[i - p]) {
                self.cycle.truncate(p);
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.cycle.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn at(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` symbols.
    pub fn window(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.at(i)).collect()
    }

    pub fn shift(&self) -> SymSeq {
        self.shift_by(1)
    }

    pub fn shift_by(&self, k: usize) -> SymSeq {
        if k <= self.prefix.len() {
            return SymSeq { prefix: self.prefix[k..].to_vec(), cycle: self.cycle.clone() };
        }
        let mut cycle = self.cycle.clone();
        cycle.rotate_left((k - self.prefix.len()) % self.cycle.len());
        SymSeq { prefix: Vec::new(), cycle }
    }

    /// `w` followed by this sequence.
    pub fn prepend(&self, w: &[u8]) -> SymSeq {
        let mut prefix = w.to_vec();
        prefix.extend_from_slice(&self.prefix);
        let mut s = SymSeq { prefix, cycle: self.cycle.clone() };
        s.canonicalize();
        s
    }

    /// Index of the first difference, `None` when equal.
    pub fn first_difference(&self, other: &SymSeq) -> Option<usize> {
        let horizon = self.prefix.len().max(other.prefix.len()) + self.cycle.len().lcm(&other.cycle.len());
        (0..horizon).find(|&i| self.at(i) != other.at(i))
    }

    pub fn dist(&self, other: &SymSeq) -> Scalar {
        match self.first_difference(other) {
            None => Scalar::zero(),
            Some(i) => Scalar::pow2(-(i as i64)),
        }
    }

    /// Largest symbol used.
    pub fn max_symbol(&self) -> u8 {
        self.prefix.iter().chain(&self.cycle).copied().max().unwrap_or(0)
    }

    /// Every sequence `σ^k(self)` for `k >= 0`, without repeats.
    pub fn forward_orbit(&self) -> Vec<SymSeq> {
        (0..self.prefix.len() + self.cycle.len()).map(|k| self.shift_by(k)).collect()
    }
}

/// Agreement length needed for `d <= delta`: the least `p` with `2^{-p} <= delta`.
pub fn agreement_for(delta: &Scalar) -> Result<usize, SymbolicError> {
    if delta.signum() != Some(1) {
        return Err(SymbolicError::Invalid(format!("delta must be positive, got {delta}")));
    }
    let mut p = 0usize;
    while !Scalar::pow2(-(p as i64)).certainly_le(delta) {
        p += 1;
        if p > 4096 {
            return Err(SymbolicError::Invalid(format!("delta {delta} too small")));
        }
    }
    Ok(p)
}

fn digits(s: &str) -> Result<Vec<u8>, SymbolicError> {
    s.chars()
        .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| SymbolicError::Parse(s.to_string())))
        .collect()
}

impl FromStr for SymSeq {
    type Err = SymbolicError;

    /// `001(10)` is `0 0 1 1 0 1 0 ...`; `01*` is `0 1 1 1 ...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SymbolicError::Parse(s.to_string());
        if let Some(body) = s.strip_suffix(')') {
            let (prefix, cycle) = body.split_once('(').ok_or_else(bad)?;
            return SymSeq::new(digits(prefix)?, digits(cycle)?);
        }
        if let Some(body) = s.strip_suffix('*') {
            let mut all = digits(body)?;
            let last = all.pop().ok_or_else(bad)?;
            return SymSeq::new(all, vec![last]);
        }
        Err(bad())
    }
}

impl fmt::Display for SymSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.prefix {
            write!(f, "{s}")?;
        }
        write!(f, "(")?;
        for s in &self.cycle {
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> SymSeq {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q("0010(10)"), q("00(10)"));
        assert_eq!(q("(1010)"), q("(10)"));
        assert_eq!(q("000*"), SymSeq::zeros());
        assert_eq!(q("01*").to_string(), "0(1)");
        assert_eq!(SymSeq::single_one(2).to_string(), "001(0)");
    }

    #[test]
    fn metric_examples() {
        assert_eq!(q("(0)").dist(&q("(0)")), Scalar::zero());
        assert_eq!(q("(0)").dist(&SymSeq::single_one(5)), Scalar::ratio(1, 32));
        assert_eq!(q("1(0)").dist(&q("(0)")), Scalar::one());
        assert_eq!(q("(01)").dist(&q("(0110)")), Scalar::ratio(1, 4));
    }

    #[test]
    fn shifts() {
        let x = q("01(100)");
        assert_eq!(x.shift(), q("1(100)"));
        assert_eq!(x.shift_by(2), q("(100)"));
        assert_eq!(x.shift_by(3), q("(001)"));
        assert_eq!(x.forward_orbit().len(), 5);
        assert_eq!(x.window(6), vec![0, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn agreement_lengths() {
        assert_eq!(agreement_for(&Scalar::ratio(1, 8)).unwrap(), 3);
        assert_eq!(agreement_for(&Scalar::ratio(1, 10)).unwrap(), 4);
        assert_eq!(agreement_for(&Scalar::int(2)).unwrap(), 0);
    }
}
