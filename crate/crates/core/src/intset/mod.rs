//! Finite unions of closed intervals with exact endpoints, and their images and
//! preimages under piecewise-linear maps.
//!
//! All intervals are closed. Differences return the closure of the set
//! difference. A comparison between enclosure endpoints that cannot be decided
//! surfaces as [`SetError::Unresolved`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::cell::Cell;

use thiserror::Error;

use crate::plmap::{MapError, PLMap};
use crate::scalar::{Scalar, ScalarError};

thread_local! {
    static COMPONENT_CAP: Cell<usize> = const { Cell::new(1_000_000) };
}

/// Largest number of components any operation on this thread may produce.
pub fn component_cap() -> usize {
    COMPONENT_CAP.with(Cell::get)
}

pub fn set_component_cap(n: usize) {
    COMPONENT_CAP.with(|c| c.set(n.max(1)));
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("endpoint comparison unresolved at {0} bits")]
    Unresolved(u32),
    #[error("{0} components exceed the cap of {1}")]
    TooManyComponents(usize, usize),
    #[error("interval [{0}, {1}] has its endpoints reversed")]
    Reversed(String, String),
    #[error("cannot parse interval set: {0}")]
    Parse(String),
    #[error(transparent)]
    Scalar(ScalarError),
    #[error(transparent)]
    Map(MapError),
}

impl From<ScalarError> for SetError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::Unresolved(p) => SetError::Unresolved(p),
            other => SetError::Scalar(other),
        }
    }
}

impl From<MapError> for SetError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Scalar(s) => s.into(),
            other => SetError::Map(other),
        }
    }
}

fn cmp(a: &Scalar, b: &Scalar) -> Result<Ordering, SetError> {
    Ok(a.try_cmp(b)?)
}

fn le(a: &Scalar, b: &Scalar) -> Result<bool, SetError> {
    Ok(cmp(a, b)? != Ordering::Greater)
}

fn min(a: &Scalar, b: &Scalar) -> Result<Scalar, SetError> {
    Ok(if le(a, b)? { a.clone() } else { b.clone() })
}

fn max(a: &Scalar, b: &Scalar) -> Result<Scalar, SetError> {
    Ok(if le(a, b)? { b.clone() } else { a.clone() })
}

/// A closed interval `[lo, hi]`; `lo == hi` is a single point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self, SetError> {
        if !le(&lo, &hi)? {
            return Err(SetError::Reversed(lo.to_string(), hi.to_string()));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: &Scalar) -> Result<bool, SetError> {
        Ok(le(&self.lo, x)? && le(x, &self.hi)?)
    }

    pub fn length(&self) -> Scalar {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint, non-touching closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn interval(lo: Scalar, hi: Scalar) -> Result<Self, SetError> {
        Ok(IntervalSet { parts: vec![Interval::new(lo, hi)?] })
    }

    pub fn point(x: Scalar) -> Self {
        IntervalSet { parts: vec![Interval { lo: x.clone(), hi: x }] }
    }

    /// Closed ball `[x - r, x + r]` clipped to `[lo, hi]`.
    pub fn ball(x: &Scalar, r: &Scalar, lo: &Scalar, hi: &Scalar) -> Result<Self, SetError> {
        let a = max(&(x - r), lo)?;
        let b = min(&(x + r), hi)?;
        if le(&a, &b)? {
            Ok(IntervalSet { parts: vec![Interval { lo: a, hi: b }] })
        } else {
            Ok(IntervalSet::empty())
        }
    }

    /// Normalizes an arbitrary list of intervals.
    pub fn from_intervals(parts: Vec<Interval>) -> Result<Self, SetError> {
        normalize(parts)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn leftmost(&self) -> Option<&Scalar> {
        self.parts.first().map(|i| &i.lo)
    }

    pub fn rightmost(&self) -> Option<&Scalar> {
        self.parts.last().map(|i| &i.hi)
    }

    pub fn contains_point(&self, x: &Scalar) -> Result<bool, SetError> {
        // binary search on left endpoints
        let (mut a, mut b) = (0usize, self.parts.len());
        while a < b {
            let mid = (a + b) / 2;
            if le(&self.parts[mid].lo, x)? {
                a = mid + 1;
            } else {
                b = mid;
            }
        }
        if a == 0 {
            return Ok(false);
        }
        le(x, &self.parts[a - 1].hi)
    }

    /// Total length.
    pub fn measure(&self) -> Scalar {
        self.parts.iter().fold(Scalar::zero(), |acc, i| &acc + &i.length())
    }

    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        normalize(parts)
    }

    pub fn intersect(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        let (a, b) = (&self.parts, &other.parts);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = max(&a[i].lo, &b[j].lo)?;
            let hi = min(&a[i].hi, &b[j].hi)?;
            if le(&lo, &hi)? {
                out.push(Interval { lo, hi });
            }
            if le(&a[i].hi, &b[j].hi)? {
                i += 1;
            } else {
                j += 1;
            }
        }
        check_cap(out.len())?;
        // pieces of disjoint inputs are disjoint, but may touch only if inputs touched
        normalize_sorted(out)
    }

    /// Closure of `self \ other`.
    pub fn difference(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        let mut out = Vec::new();
        let mut j = 0;
        for iv in &self.parts {
            let mut cur = iv.lo.clone();
            let mut alive = true;
            while j < other.parts.len() && cmp(&other.parts[j].hi, &iv.lo)? == Ordering::Less {
                j += 1;
            }
            let mut k = j;
            while k < other.parts.len() && le(&other.parts[k].lo, &iv.hi)? {
                let b = &other.parts[k];
                if cmp(&cur, &b.lo)? == Ordering::Less {
                    out.push(Interval { lo: cur.clone(), hi: b.lo.clone() });
                }
                if cmp(&b.hi, &iv.hi)? == Ordering::Less {
                    cur = max(&cur, &b.hi)?;
                } else {
                    alive = false;
                    break;
                }
                k += 1;
            }
            if alive {
                out.push(Interval { lo: cur, hi: iv.hi.clone() });
            }
        }
        normalize(out)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &IntervalSet) -> Result<bool, SetError> {
        let mut j = 0;
        for iv in &self.parts {
            while j < other.parts.len() && cmp(&other.parts[j].hi, &iv.lo)? == Ordering::Less {
                j += 1;
            }
            if j == other.parts.len() {
                return Ok(false);
            }
            let b = &other.parts[j];
            if !(le(&b.lo, &iv.lo)? && le(&iv.hi, &b.hi)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn clip(&self, lo: &Scalar, hi: &Scalar) -> Result<IntervalSet, SetError> {
        self.intersect(&IntervalSet::interval(lo.clone(), hi.clone())?)
    }
}

fn check_cap(n: usize) -> Result<(), SetError> {
    let cap = component_cap();
    if n > cap {
        Err(SetError::TooManyComponents(n, cap))
    } else {
        Ok(())
    }
}

fn normalize(mut parts: Vec<Interval>) -> Result<IntervalSet, SetError> {
    check_cap(parts.len())?;
    let mut err = None;
    parts.sort_by(|a, b| match a.lo.try_cmp(&b.lo) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    normalize_sorted(parts)
}

fn normalize_sorted(parts: Vec<Interval>) -> Result<IntervalSet, SetError> {
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for iv in parts {
        if let Some(last) = out.last_mut() {
            if le(&iv.lo, &last.hi)? {
                if cmp(&last.hi, &iv.hi)? == Ordering::Less {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        out.push(iv);
    }
    Ok(IntervalSet { parts: out })
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{iv}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for IntervalSet {
    type Err = SetError;

    /// Parses `[[l,r],[l,r],...]`; enclosure endpoints are not accepted.
    fn from_str(s: &str) -> Result<Self, SetError> {
        let bad = || SetError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let mut parts = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(bad)?;
            let close = body.find(']').ok_or_else(bad)?;
            let (l, r) = body[..close].split_once(',').ok_or_else(bad)?;
            let lo: Scalar = l.parse().map_err(|_| bad())?;
            let hi: Scalar = r.parse().map_err(|_| bad())?;
            parts.push(Interval::new(lo, hi)?);
            rest = &body[close + 1..];
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        normalize(parts)
    }
}

/// Endpoint value on lap `i`, reusing stored values at breakpoints.
fn lap_value(m: &PLMap, i: usize, x: &Scalar) -> Scalar {
    if x == &m.points()[i] {
        m.values()[i].clone()
    } else if x == &m.points()[i + 1] {
        m.values()[i + 1].clone()
    } else {
        m.eval_on_lap(i, x)
    }
}

/// Laps whose closure meets `[lo, hi]`.
pub(crate) fn laps_meeting(m: &PLMap, lo: &Scalar, hi: &Scalar) -> Result<std::ops::Range<usize>, SetError> {
    let p = m.points();
    let n = m.laps();
    let first = {
        let (mut a, mut b) = (0usize, n);
        // first lap whose right end is >= lo
        while a < b {
            let mid = (a + b) / 2;
            if cmp(&p[mid + 1], lo)? == Ordering::Less {
                a = mid + 1;
            } else {
                b = mid;
            }
        }
        a
    };
    let mut last = first;
    while last < n && le(&p[last], hi)? {
        last += 1;
    }
    Ok(first..last)
}

/// Exact image `m(S)`.
pub fn image(m: &PLMap, s: &IntervalSet) -> Result<IntervalSet, SetError> {
    let p = m.points();
    let mut out = Vec::new();
    for iv in &s.parts {
        for i in laps_meeting(m, &iv.lo, &iv.hi)? {
            let a = max(&iv.lo, &p[i])?;
            let b = min(&iv.hi, &p[i + 1])?;
            if !le(&a, &b)? {
                continue;
            }
            let ya = lap_value(m, i, &a);
            let yb = lap_value(m, i, &b);
            let (lo, hi) = if le(&ya, &yb)? { (ya, yb) } else { (yb, ya) };
            out.push(Interval { lo, hi });
            check_cap(out.len())?;
        }
    }
    normalize(out)
}

/// `m^n(S)`.
pub fn image_n(m: &PLMap, s: &IntervalSet, n: usize) -> Result<IntervalSet, SetError> {
    let mut cur = s.clone();
    for _ in 0..n {
        cur = image(m, &cur)?;
    }
    Ok(cur)
}

/// Exact full preimage `m^{-1}(S)`.
pub fn preimage(m: &PLMap, s: &IntervalSet) -> Result<IntervalSet, SetError> {
    preimage_within(m, s, m.lo(), m.hi())
}

/// `m^{-1}(S) ∩ [lo, hi]`, visiting only the laps that meet `[lo, hi]`.
pub fn preimage_within(m: &PLMap, s: &IntervalSet, lo: &Scalar, hi: &Scalar) -> Result<IntervalSet, SetError> {
    let (p, v) = (m.points(), m.values());
    let mut out = Vec::new();
    if s.is_empty() {
        return Ok(IntervalSet::empty());
    }
    for i in laps_meeting(m, lo, hi)? {
        let slope = &m.slopes()[i];
        if slope.is_zero() {
            if s.contains_point(&v[i])? {
                out.push(Interval { lo: p[i].clone(), hi: p[i + 1].clone() });
            }
            continue;
        }
        let increasing = slope.signum() == Some(1);
        let (rlo, rhi) = if increasing { (&v[i], &v[i + 1]) } else { (&v[i + 1], &v[i]) };
        for iv in &s.parts {
            if cmp(&iv.hi, rlo)? == Ordering::Less {
                continue;
            }
            if cmp(rhi, &iv.lo)? == Ordering::Less {
                continue;
            }
            let c = max(&iv.lo, rlo)?;
            let d = min(&iv.hi, rhi)?;
            let back = |y: &Scalar| -> Result<Scalar, SetError> {
                if y == &v[i] {
                    Ok(p[i].clone())
                } else if y == &v[i + 1] {
                    Ok(p[i + 1].clone())
                } else {
                    Ok(m.lap_inverse(i, y)?)
                }
            };
            let (xc, xd) = (back(&c)?, back(&d)?);
            let (a, b) = if increasing { (xc, xd) } else { (xd, xc) };
            out.push(Interval { lo: a, hi: b });
            check_cap(out.len())?;
        }
    }
    let set = normalize(out)?;
    if lo == m.lo() && hi == m.hi() {
        Ok(set)
    } else {
        set.clip(lo, hi)
    }
}

/// Points whose orbit stays in the balls `B(centers[i], radii[i])` for every `i`.
pub fn tube(m: &PLMap, centers: &[Scalar], radii: &[Scalar]) -> Result<IntervalSet, SetError> {
    assert_eq!(centers.len(), radii.len(), "one radius per center");
    let (lo, hi) = (m.lo(), m.hi());
    let n = centers.len();
    if n == 0 {
        return IntervalSet::interval(lo.clone(), hi.clone());
    }
    let mut s = IntervalSet::ball(&centers[n - 1], &radii[n - 1], lo, hi)?;
    for i in (0..n - 1).rev() {
        if s.is_empty() {
            return Ok(s);
        }
        let ball = IntervalSet::ball(&centers[i], &radii[i], lo, hi)?;
        let Some(b) = ball.intervals().first() else {
            return Ok(ball);
        };
        s = preimage_within(m, &s, &b.lo, &b.hi)?;
    }
    Ok(s)
}

/// Closed Bowen ball `{y : |m^i(y) - m^i(x)| <= eps, 0 <= i <= k}`.
pub fn bowen_ball(m: &PLMap, x: &Scalar, eps: &Scalar, k: usize) -> Result<IntervalSet, SetError> {
    let orbit = crate::plmap::IntervalMap::orbit(m, x, k)?;
    tube(m, &orbit, &vec![eps.clone(); k + 1])
}

/// The image of `m`.
pub fn range(m: &PLMap) -> Result<IntervalSet, SetError> {
    image(m, &IntervalSet::interval(m.lo().clone(), m.hi().clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::make_tent;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn set(x: &str) -> IntervalSet {
        x.parse().unwrap()
    }

    #[test]
    fn tent_images() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        assert_eq!(image(&t, &set("[[0,1/2]]")).unwrap(), set("[[0,1]]"));
        assert_eq!(image(&t, &set("[[1/4,3/4]]")).unwrap(), set("[[1/2,1]]"));
        let g = make_tent(&Scalar::golden()).unwrap();
        let c = IntervalSet::point(s("1/2"));
        assert_eq!(image(&g, &c).unwrap(), IntervalSet::point(&Scalar::golden() / &Scalar::int(2)));
    }

    #[test]
    fn tent_preimages() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        assert_eq!(preimage(&t, &set("[[0,1/2]]")).unwrap(), set("[[0,1/4],[3/4,1]]"));
        assert_eq!(preimage(&t, &IntervalSet::point(s("1"))).unwrap(), IntervalSet::point(s("1/2")));
        assert_eq!(preimage(&t, &set("[[0,1]]")).unwrap(), set("[[0,1]]"));
    }

    #[test]
    fn bowen_balls() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        assert_eq!(bowen_ball(&t, &s("1/3"), &s("1/8"), 0).unwrap(), set("[[5/24,11/24]]"));
        assert_eq!(bowen_ball(&t, &s("1/2"), &s("1/8"), 1).unwrap(), set("[[7/16,9/16]]"));
    }

    #[test]
    fn set_algebra() {
        assert_eq!(set("[[0,1/2]]").intersect(&set("[[1/4,1]]")).unwrap(), set("[[1/4,1/2]]"));
        assert_eq!(set("[[0,1/4],[3/4,1]]").union(&set("[[1/4,3/4]]")).unwrap(), set("[[0,1]]"));
        assert_eq!(set("[[0,1/4],[1/2,1]]").measure(), s("3/4"));
        assert_eq!(set("[[0,1]]").difference(&set("[[1/4,1/2]]")).unwrap(), set("[[0,1/4],[1/2,1]]"));
        assert_eq!(set("[[0,1]]").difference(&set("[[0,1]]")).unwrap(), IntervalSet::empty());
        assert_eq!(set("[[0,1]]").difference(&IntervalSet::point(s("1/2"))).unwrap(), set("[[0,1]]"));
        assert!(set("[[0,1/4],[1/2,1]]").contains_point(&s("1/2")).unwrap());
        assert!(!set("[[0,1/4],[1/2,1]]").contains_point(&s("1/3")).unwrap());
        assert!(set("[[1/8,1/4]]").is_subset(&set("[[0,1/4],[1/2,1]]")).unwrap());
        assert!(!set("[[1/8,1/2]]").is_subset(&set("[[0,1/4],[1/2,1]]")).unwrap());
    }

    #[test]
    fn normalization_merges_touching() {
        let a = IntervalSet::from_intervals(vec![
            Interval::new(s("1/2"), s("1")).unwrap(),
            Interval::new(s("0"), s("1/2")).unwrap(),
        ])
        .unwrap();
        assert_eq!(a, set("[[0,1]]"));
        assert_eq!(a.to_string(), "[[0,1]]");
    }

    #[test]
    fn component_cap_is_enforced() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        set_component_cap(8);
        let mut cur = set("[[0,1/1000]]");
        let mut res = Ok(());
        for _ in 0..6 {
            match preimage(&t, &cur) {
                Ok(n) => cur = n,
                Err(e) => {
                    res = Err(e);
                    break;
                }
            }
        }
        set_component_cap(1_000_000);
        assert!(matches!(res, Err(SetError::TooManyComponents(_, 8))));
    }
}
