//! The ladder system `X = ⋃_k {2^{-k}} × X_k ∪ {0} × X_∞` under `(a, ξ) ↦ (a, σξ)`.
//!
//! `X_k` has every pair of 1s separated by at least `k + 1` zeros, and `X_∞`
//! allows at most one 1. Distances are `max(|a - b|, d(ξ, η))`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{agreement_for, walters_delta, walters_shadow, SftSpec, SymSeq, SymbolicError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    /// `2^{-k}`, or 0 at infinity.
    pub fn a(self) -> Scalar {
        match self {
            Level::Finite(k) => Scalar::pow2(-(k as i64)),
            Level::Infinite => Scalar::zero(),
        }
    }

    /// Whether `w` can be extended to a point of this level's space.
    pub fn allows_word(self, w: &[u8]) -> bool {
        match self {
            Level::Finite(k) => SftSpec::ladder(k as usize).word_allowed(w),
            Level::Infinite => w.iter().all(|&s| s <= 1) && w.iter().filter(|&&s| s == 1).count() <= 1,
        }
    }

    pub fn contains(self, x: &SymSeq) -> bool {
        match self {
            Level::Finite(k) => SftSpec::ladder(k as usize).contains(x),
            Level::Infinite => x.cycle() == [0] && self.allows_word(x.prefix()),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Level {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Level::Infinite),
            t => t.parse().map(Level::Finite).map_err(|_| SymbolicError::Parse(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LadderPoint {
    pub level: Level,
    pub seq: SymSeq,
}

impl LadderPoint {
    pub fn new(level: Level, seq: SymSeq) -> Result<Self, SymbolicError> {
        if !level.contains(&seq) {
            return Err(SymbolicError::NotInSpace(format!("{seq} at level {level}")));
        }
        Ok(LadderPoint { level, seq })
    }

    pub fn a(&self) -> Scalar {
        self.level.a()
    }

    pub fn apply(&self) -> LadderPoint {
        LadderPoint { level: self.level, seq: self.seq.shift() }
    }

    pub fn dist(&self, other: &LadderPoint) -> Scalar {
        max(self.a().dist(&other.a()), self.seq.dist(&other.seq))
    }
}

impl fmt::Display for LadderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.seq)
    }
}

impl FromStr for LadderPoint {
    type Err = SymbolicError;

    /// `level:sequence`, e.g. `2:001(0)` or `inf:(0)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (l, q) = s.split_once(':').ok_or_else(|| SymbolicError::Parse(s.to_string()))?;
        LadderPoint::new(l.parse()?, q.parse()?)
    }
}

fn max(a: Scalar, b: Scalar) -> Scalar {
    if a.certainly_le(&b) {
        b
    } else {
        a
    }
}

fn min(a: Scalar, b: Scalar) -> Scalar {
    if a.certainly_le(&b) {
        a
    } else {
        b
    }
}

fn lt(a: &Scalar, b: &Scalar) -> bool {
    a.try_cmp(b).map(|o| o == Ordering::Less).unwrap_or(false)
}

/// `k` with `ε/2 <= 2^{-k} < ε`, and `δ = min(ε/4, δ_0(ε), ..., δ_k(ε))` with `δ_j` the modulus of `X_j`.
pub fn ladder_delta(eps: &Scalar) -> Result<(Scalar, u32), SymbolicError> {
    if !(lt(&Scalar::zero(), eps) && lt(eps, &Scalar::one())) {
        return Err(SymbolicError::Invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let mut k = 0u32;
    while !lt(&Scalar::pow2(-(k as i64)), eps) {
        k += 1;
    }
    let mut delta = eps * &Scalar::ratio(1, 4);
    for j in 0..=k {
        delta = min(delta, walters_delta(&SftSpec::ladder(j as usize), eps));
    }
    Ok((delta, k))
}

/// Every step satisfies `d(f(p_i), p_{i+1}) <= delta`.
pub fn verify_ladder_pseudo_orbit(po: &[LadderPoint], delta: &Scalar) -> Result<(), SymbolicError> {
    for (i, w) in po.windows(2).enumerate() {
        if !w[0].apply().dist(&w[1]).certainly_le(delta) {
            return Err(SymbolicError::NotPseudoOrbit(i, delta.to_string()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderShadow {
    pub point: LadderPoint,
    /// 1 when the pseudo-orbit sits at one level above `ε/2`, 2 when it stays at or below `ε/2`.
    pub case: u8,
    pub k: u32,
    pub delta: Scalar,
    /// `max_i d(f^i(point), p_i)`, checked to be below `ε`.
    pub max_dist: Scalar,
}

/// Shadows a `δ`-pseudo-orbit, `δ` from [`ladder_delta`], by a true orbit within `ε`.
pub fn ladder_shadow(po: &[LadderPoint], eps: &Scalar) -> Result<LadderShadow, SymbolicError> {
    let (delta, k) = ladder_delta(eps)?;
    let first = po.first().ok_or_else(|| SymbolicError::Invalid("empty pseudo-orbit".into()))?;
    verify_ladder_pseudo_orbit(po, &delta)?;
    let half = eps * &Scalar::ratio(1, 2);
    let seqs: Vec<SymSeq> = po.iter().map(|p| p.seq.clone()).collect();
    let (case, level) = if lt(&half, &first.a()) {
        if let Some(i) = po.iter().position(|p| p.level != first.level) {
            return Err(SymbolicError::NotPseudoOrbit(i.saturating_sub(1), delta.to_string()));
        }
        (1, first.level)
    } else {
        (2, Level::Finite(k))
    };
    let Level::Finite(j) = level else {
        return Err(SymbolicError::Invalid("case 1 at level infinity".into()));
    };
    let cert = walters_shadow(&SftSpec::ladder(j as usize), &seqs, &delta)?;
    let point = LadderPoint::new(level, cert.z)?;
    let mut max_dist = Scalar::zero();
    let mut x = point.clone();
    for (i, p) in po.iter().enumerate() {
        let d = x.dist(p);
        if !lt(&d, eps) {
            return Err(SymbolicError::Certificate(i));
        }
        max_dist = max(max_dist, d);
        x = x.apply();
    }
    Ok(LadderShadow { point, case, k, delta, max_dist })
}

/// Appends random symbols allowed at `level`, then a periodic tail.
fn extend_at_level<R: Rng>(level: Level, mut word: Vec<u8>, rng: &mut R) -> SymSeq {
    let gap_ok = |w: &[u8]| match level {
        Level::Finite(k) => w.iter().rev().take(k as usize + 1).all(|&s| s == 0),
        Level::Infinite => !w.contains(&1),
    };
    for _ in 0..rng.gen_range(0..6) {
        let s = if gap_ok(&word) && rng.gen_bool(1.0 / 3.0) { 1 } else { 0 };
        word.push(s);
    }
    match level {
        Level::Finite(k) if rng.gen_bool(0.5) => {
            while !gap_ok(&word) {
                word.push(0);
            }
            let mut cycle = vec![1];
            cycle.extend(std::iter::repeat_n(0, rng.gen_range(k as usize + 1..=k as usize + 4)));
            SymSeq::new(word, cycle).expect("nonempty cycle")
        }
        _ => SymSeq::new(word, vec![0]).expect("nonempty cycle"),
    }
}

/// A random δ-pseudo-orbit for the `δ` of [`ladder_delta`], `len + 1` points long.
///
/// The starting level is drawn from `0..=k+6` and infinity. Later levels jump
/// whenever a neighbouring level lies within δ.
pub fn random_ladder_pseudo_orbit<R: Rng>(
    eps: &Scalar,
    len: usize,
    rng: &mut R,
) -> Result<Vec<LadderPoint>, SymbolicError> {
    let (delta, k) = ladder_delta(eps)?;
    let p = agreement_for(&delta)?;
    let mut levels: Vec<Level> = (0..=k + 6).map(Level::Finite).collect();
    levels.push(Level::Infinite);
    let start = levels[rng.gen_range(0..levels.len())];
    let mut out = vec![LadderPoint::new(start, extend_at_level(start, Vec::new(), rng))?];
    for _ in 0..len {
        let prev = out.last().unwrap().apply();
        let word = prev.seq.window(p);
        let options: Vec<Level> = levels
            .iter()
            .copied()
            .filter(|l| l.a().dist(&prev.a()).certainly_le(&delta) && l.allows_word(&word))
            .collect();
        let level = options[rng.gen_range(0..options.len())];
        let seq = if rng.gen_bool(0.5) && level == prev.level {
            prev.seq.clone()
        } else {
            extend_at_level(level, word, rng)
        };
        out.push(LadderPoint::new(level, seq)?);
    }
    verify_ladder_pseudo_orbit(&out, &delta)?;
    Ok(out)
}

/// δ-chain from `ξ` to `η` inside `X_∞`: run `ξ` to `0^∞`, jump to `ζ = 0^n 1 0^∞`
/// with `n > m` and `2^{-n} < δ`, then shift `ζ` down to `η = 0^m 1 0^∞`.
pub fn ict_chain(xi: &SymSeq, eta: &SymSeq, delta: &Scalar) -> Result<Vec<SymSeq>, SymbolicError> {
    for x in [xi, eta] {
        if !Level::Infinite.contains(x) {
            return Err(SymbolicError::NotInSpace(format!("{x} in X_inf")));
        }
    }
    if delta.signum() != Some(1) {
        return Err(SymbolicError::Invalid(format!("delta must be positive, got {delta}")));
    }
    if Scalar::one().certainly_le(delta) {
        return Ok(vec![xi.clone(), eta.clone()]);
    }
    let mut chain = xi.forward_orbit();
    let zero = SymSeq::zeros();
    if chain.last() != Some(&zero) {
        chain.push(zero.clone());
    }
    if let Some(m) = eta.prefix().iter().position(|&s| s == 1) {
        let mut n = m + 1;
        while !lt(&Scalar::pow2(-(n as i64)), delta) {
            n += 1;
        }
        let zeta = SymSeq::single_one(n);
        chain.extend((0..=n - m).map(|i| zeta.shift_by(i)));
    } else if chain.len() == 1 {
        chain.push(zero);
    }
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].shift().dist(&w[1]).certainly_le(delta) || !Level::Infinite.contains(&w[1]) {
            return Err(SymbolicError::NotPseudoOrbit(i, delta.to_string()));
        }
    }
    Ok(chain)
}

/// The ω-limit set: `(0, 0^∞)` at level infinity, else the cycle of the periodic tail.
pub fn ladder_omega(p: &LadderPoint) -> Vec<LadderPoint> {
    match p.level {
        Level::Infinite => vec![LadderPoint { level: Level::Infinite, seq: SymSeq::zeros() }],
        level => {
            let cycle = p.seq.cycle();
            (0..cycle.len())
                .map(|r| {
                    let mut c = cycle.to_vec();
                    c.rotate_left(r);
                    LadderPoint { level, seq: SymSeq::periodic(c).expect("nonempty cycle") }
                })
                .collect()
        }
    }
}

/// `π_n(a, ξ) = (max(a, 2^{-(n-1)}), ξ)`.
pub fn projection_pi(n: u32, p: &LadderPoint) -> Result<LadderPoint, SymbolicError> {
    if n == 0 {
        return Err(SymbolicError::Invalid("projection index must be at least 1".into()));
    }
    LadderPoint::new(p.level.min(Level::Finite(n - 1)), p.seq.clone())
}

/// `inf { d(ξ, ζ) : ζ ∈ X_j }`: zero inside, else `2^{-i}` for the longest allowed prefix length `i`.
fn seq_dist_to_level(x: &SymSeq, level: Level) -> Scalar {
    if level.contains(x) {
        return Scalar::zero();
    }
    let mut i = 0;
    while level.allows_word(&x.window(i + 1)) {
        i += 1;
    }
    Scalar::pow2(-(i as i64))
}

/// Distance from `(a, ξ)` to `F_n = ⋃_{j<n} {2^{-j}} × X_j`.
pub fn nearest_distance_to_layers(n: u32, a: &Scalar, x: &SymSeq) -> Scalar {
    (0..n)
        .map(|j| {
            let l = Level::Finite(j);
            max(a.dist(&l.a()), seq_dist_to_level(x, l))
        })
        .reduce(min)
        .unwrap_or_else(Scalar::one)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProjectionReport {
    pub points: usize,
    pub pairs: usize,
    pub non_expanding: bool,
    pub commuting: bool,
    pub nearest: bool,
    pub failures: Vec<String>,
}

/// Checks non-expansion over all pairs, `π∘f = f∘π`, and that `π` realises the distance to `F_n`.
pub fn verify_projection_properties(n: u32, sample: &[LadderPoint]) -> Result<ProjectionReport, SymbolicError> {
    let proj: Vec<LadderPoint> = sample.iter().map(|p| projection_pi(n, p)).collect::<Result<_, _>>()?;
    let mut r = ProjectionReport {
        points: sample.len(),
        pairs: 0,
        non_expanding: true,
        commuting: true,
        nearest: true,
        failures: Vec::new(),
    };
    for (i, (x, px)) in sample.iter().zip(&proj).enumerate() {
        if projection_pi(n, &x.apply())? != px.apply() {
            r.commuting = false;
            r.failures.push(format!("commuting fails at {x}"));
        }
        if x.dist(px) != nearest_distance_to_layers(n, &x.a(), &x.seq) {
            r.nearest = false;
            r.failures.push(format!("nearest point fails at {x}"));
        }
        for (y, py) in sample[i + 1..].iter().zip(&proj[i + 1..]) {
            r.pairs += 1;
            if !px.dist(py).certainly_le(&x.dist(y)) {
                r.non_expanding = false;
                r.failures.push(format!("expands between {x} and {y}"));
            }
        }
    }
    Ok(r)
}

/// An open box `(lo, hi) × [cylinder]` in `[0, 1] × Σ₂`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub lo: Scalar,
    pub hi: Scalar,
    pub cylinder: Vec<u8>,
}

impl Neighborhood {
    pub fn contains(&self, a: &Scalar, x: &SymSeq) -> bool {
        lt(&self.lo, a) && lt(a, &self.hi) && x.window(self.cylinder.len()) == self.cylinder
    }

    /// No level whose `a` lies in `(lo, hi)` allows the cylinder word.
    ///
    /// Finitely many levels are checked directly. When the interval reaches 0
    /// the deepest checked level also stands in for all later ones and for
    /// infinity, since the spaces are nested.
    pub fn misses_ladder(&self) -> bool {
        let deep = self.cylinder.len() as u32 + 2;
        let mut last_checked = None;
        for j in 0..=deep.max(64) {
            let a = Level::Finite(j).a();
            if lt(&self.lo, &a) && lt(&a, &self.hi) {
                if Level::Finite(j).allows_word(&self.cylinder) {
                    return false;
                }
                last_checked = Some(j);
            }
        }
        if lt(&self.lo, &Scalar::zero()) && lt(&Scalar::zero(), &self.hi) {
            return last_checked.is_some() && !Level::Infinite.allows_word(&self.cylinder);
        }
        true
    }
}

/// A neighbourhood of `(a, ξ)` disjoint from the ladder, or `None` when the point lies in it.
pub fn closedness_neighborhood(a: &Scalar, x: &SymSeq) -> Result<Option<Neighborhood>, SymbolicError> {
    if x.max_symbol() > 1 {
        return Err(SymbolicError::Invalid(format!("{x} is not binary")));
    }
    let zero = Scalar::zero();
    let one = Scalar::one();
    let nb = |lo: Scalar, hi: Scalar, cylinder: Vec<u8>| Ok(Some(Neighborhood { lo, hi, cylinder }));
    if a.is_zero() {
        let ones: Vec<usize> = (0..x.prefix().len() + 2 * x.period() + 1).filter(|&i| x.at(i) == 1).take(2).collect();
        if ones.len() < 2 {
            return Ok(None);
        }
        let l = ones[1] - ones[0] - 1;
        let pad = Scalar::pow2(-(l as i64 + 1));
        return nb(pad.neg(), &Scalar::pow2(-(l as i64)) + &pad, x.window(ones[1] + 1));
    }
    if lt(a, &zero) {
        return nb(a - &one, a * &Scalar::ratio(1, 2), Vec::new());
    }
    if lt(&one, a) {
        return nb((a + &one) * Scalar::ratio(1, 2), a + &one, Vec::new());
    }
    let mut k = 0u32;
    while lt(a, &Level::Finite(k + 1).a()) || *a == Level::Finite(k + 1).a() {
        k += 1;
    }
    let top = Level::Finite(k).a();
    if *a != top {
        return nb(Level::Finite(k + 1).a(), top, Vec::new());
    }
    let level = Level::Finite(k);
    if level.contains(x) {
        return Ok(None);
    }
    let mut len = 1;
    while level.allows_word(&x.window(len)) {
        len += 1;
    }
    let pad = Scalar::pow2(-(k as i64 + 2));
    nb(&top - &pad, &top + &pad, x.window(len))
}
