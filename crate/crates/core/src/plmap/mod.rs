//! Interval maps: continuous piecewise-linear maps given by breakpoints and
//! values, and three smooth circle homeomorphisms evaluated with enclosures.

mod cycle;
mod families;
mod smooth;
pub mod spec;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Cmp3, Enclosure, Scalar, ScalarError};

pub use cycle::{detect_critical_cycle, CriticalOrbit, CycleVerdict, OrbitState};
pub use families::{
    core, double_tent, golden_core, golden_d, golden_restriction, make_nucleus_family, make_tent, make_two_sided,
    nucleus_family_at, nucleus_parameters, two_sided_at, NucleusParameters,
};
pub use smooth::{circle_dist, SmoothKind, SmoothMap1D};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("slope {0} outside the allowed range")]
    SlopeOutOfRange(String),
    #[error("a map needs at least two breakpoints and one value per breakpoint")]
    Shape,
    #[error("breakpoints must be strictly increasing (at index {0})")]
    NotIncreasing(usize),
    #[error("value {0} leaves the domain")]
    NotSelfMap(String),
    #[error("[{0}, {1}] is not invariant")]
    NotInvariant(String, String),
    #[error("{0} lies outside the domain")]
    OutOfDomain(String),
    #[error("root bracket lost while solving for the nucleus parameters")]
    RootFinding,
    #[error("not a tent map")]
    NotTent,
    #[error("bad map spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Anything that can be iterated on an interval of the line.
pub trait IntervalMap {
    fn domain(&self) -> (Scalar, Scalar);
    fn eval(&self, x: &Scalar) -> Result<Scalar, MapError>;
    /// Upper bound on the Lipschitz constant.
    fn lipschitz(&self) -> f64;

    fn iterate(&self, x: &Scalar, n: usize) -> Result<Scalar, MapError> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.eval(&y)?;
        }
        Ok(y)
    }

    /// `x, f(x), ..., f^n(x)`
    fn orbit(&self, x: &Scalar, n: usize) -> Result<Vec<Scalar>, MapError> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.clone());
        for i in 0..n {
            let y = self.eval(&out[i])?;
            out.push(y);
        }
        Ok(out)
    }
}

/// The `n`-th iterate of a map.
pub struct Power<'a, M: IntervalMap + ?Sized> {
    pub map: &'a M,
    pub n: usize,
}

impl<M: IntervalMap + ?Sized> IntervalMap for Power<'_, M> {
    fn domain(&self) -> (Scalar, Scalar) {
        self.map.domain()
    }
    fn eval(&self, x: &Scalar) -> Result<Scalar, MapError> {
        self.map.iterate(x, self.n)
    }
    fn lipschitz(&self) -> f64 {
        self.map.lipschitz().powi(self.n as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PLMap {
    points: Vec<Scalar>,
    values: Vec<Scalar>,
    slopes: Vec<Scalar>,
    value_refs: Vec<Option<usize>>,
    constant_slope: Option<Scalar>,
    exact: bool,
    index: HashMap<Scalar, usize>,
}

impl Eq for PLMap {}

impl PLMap {
    /// Map interpolating `values` linearly between consecutive `points`.
    /// Collinear neighbouring laps are merged when this is decidable.
    pub fn new(points: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self, MapError> {
        let refs = vec![None; points.len()];
        PLMap::build(points, values, refs)
    }

    /// Map whose value at breakpoint `i` is breakpoint `refs[i]`.
    pub fn with_value_refs(points: Vec<Scalar>, refs: Vec<usize>) -> Result<Self, MapError> {
        if refs.len() != points.len() || refs.iter().any(|&j| j >= points.len()) {
            return Err(MapError::Shape);
        }
        let values = refs.iter().map(|&j| points[j].clone()).collect();
        PLMap::build(points, values, refs.into_iter().map(Some).collect())
    }

    fn build(mut points: Vec<Scalar>, mut values: Vec<Scalar>, mut refs: Vec<Option<usize>>) -> Result<Self, MapError> {
        if points.len() < 2 || points.len() != values.len() {
            return Err(MapError::Shape);
        }
        for i in 1..points.len() {
            if points[i - 1].cmp3(&points[i]) != Cmp3::Less {
                return Err(MapError::NotIncreasing(i));
            }
        }
        let exact = points.iter().chain(values.iter()).all(Scalar::is_exact);
        let (lo, hi) = (points[0].clone(), points[points.len() - 1].clone());
        for (v, r) in values.iter().zip(&refs) {
            if r.is_none() && !(lo.certainly_le(v) && v.certainly_le(&hi)) {
                return Err(MapError::NotSelfMap(v.to_string()));
            }
        }
        let slope = |p: &[Scalar], v: &[Scalar], i: usize| -> Result<Scalar, MapError> {
            Ok((&v[i + 1] - &v[i]).try_div(&(&p[i + 1] - &p[i]))?)
        };
        if exact {
            let mut i = 1;
            while i + 1 < points.len() {
                if slope(&points, &values, i - 1)? == slope(&points, &values, i)? {
                    points.remove(i);
                    values.remove(i);
                    refs.remove(i);
                } else {
                    i += 1;
                }
            }
        }
        let slopes = (0..points.len() - 1).map(|i| slope(&points, &values, i)).collect::<Result<Vec<_>, _>>()?;
        let mut index = HashMap::new();
        if exact {
            for (i, p) in points.iter().enumerate() {
                index.insert(p.clone(), i);
            }
            for (r, v) in refs.iter_mut().zip(&values) {
                *r = index.get(v).copied();
            }
        } else {
            // Refs survive merging only if their targets were kept: rebuild by identity.
            let pos: HashMap<String, usize> = points.iter().enumerate().map(|(i, p)| (p.to_string(), i)).collect();
            for (r, v) in refs.iter_mut().zip(&values) {
                *r = r.and_then(|_| pos.get(&v.to_string()).copied());
            }
        }
        let constant_slope = if exact {
            let m0 = slopes[0].abs();
            slopes.iter().all(|b| b.abs() == m0).then_some(m0)
        } else {
            None
        };
        Ok(PLMap { points, values, slopes, value_refs: refs, constant_slope, exact, index })
    }

    /// Declare the constant slope magnitude of an enclosure-mode map.
    pub fn with_constant_slope(mut self, s: Scalar) -> Self {
        self.constant_slope = Some(s);
        self
    }

    pub fn lo(&self) -> &Scalar {
        &self.points[0]
    }

    pub fn hi(&self) -> &Scalar {
        &self.points[self.points.len() - 1]
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Signed slope of each lap.
    pub fn slopes(&self) -> &[Scalar] {
        &self.slopes
    }

    pub fn laps(&self) -> usize {
        self.slopes.len()
    }

    pub fn value_ref(&self, i: usize) -> Option<usize> {
        self.value_refs[i]
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn constant_slope(&self) -> Option<&Scalar> {
        self.constant_slope.as_ref()
    }

    /// Index of the breakpoint equal to `x`, when that is decidable.
    pub fn breakpoint_index(&self, x: &Scalar) -> Option<usize> {
        if let Some(&i) = self.index.get(x) {
            return Some(i);
        }
        if self.exact && x.is_exact() {
            return None;
        }
        self.points.iter().position(|p| p == x)
    }

    /// Domain endpoints and every interior breakpoint (each is a turning point or a slope change).
    pub fn critical_points(&self) -> Vec<Scalar> {
        self.points.clone()
    }

    pub fn in_domain(&self, x: &Scalar) -> bool {
        self.lo().certainly_le(x) && x.certainly_le(self.hi())
    }

    /// Value on the affine extension of lap `i`.
    pub fn eval_on_lap(&self, i: usize, x: &Scalar) -> Scalar {
        &self.values[i] + &(&self.slopes[i] * &(x - &self.points[i]))
    }

    /// The point of lap `i` mapped to `y` (lap must not be flat).
    pub fn lap_inverse(&self, i: usize, y: &Scalar) -> Result<Scalar, MapError> {
        Ok(&self.points[i] + &(y - &self.values[i]).try_div(&self.slopes[i])?)
    }

    /// Lap containing an exact `x` (the left one at a breakpoint).
    pub fn lap_of(&self, x: &Scalar) -> Result<usize, MapError> {
        let n = self.points.len();
        if x.try_lt(self.lo())? || self.hi().try_lt(x)? {
            return Err(MapError::OutOfDomain(x.to_string()));
        }
        let (mut a, mut b) = (0usize, n - 1);
        while b - a > 1 {
            let mid = (a + b) / 2;
            if x.try_le(&self.points[mid])? {
                b = mid;
            } else {
                a = mid;
            }
        }
        Ok(a)
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar, MapError> {
        if let Some(i) = self.breakpoint_index(x) {
            return Ok(self.values[i].clone());
        }
        if self.exact && x.is_exact() {
            let i = self.lap_of(x)?;
            return Ok(self.eval_on_lap(i, x));
        }
        self.eval_enclosure(x)
    }

    fn eval_enclosure(&self, x: &Scalar) -> Result<Scalar, MapError> {
        let prec = x.precision().unwrap_or_else(|| self.precision());
        let xe = x.to_enclosure(prec);
        let dom = self.lo().to_enclosure(prec).hull(&self.hi().to_enclosure(prec));
        let xe = xe.intersect(&dom).ok_or_else(|| MapError::OutOfDomain(x.to_string()))?;
        let mut out: Option<Enclosure> = None;
        // first lap whose right end can reach xe
        let (mut a, mut b) = (0usize, self.laps());
        while a < b {
            let mid = (a + b) / 2;
            if self.points[mid + 1].to_enclosure(prec).hi() < xe.lo() {
                a = mid + 1;
            } else {
                b = mid;
            }
        }
        for i in a..self.laps() {
            let p0 = self.points[i].to_enclosure(prec);
            let p1 = self.points[i + 1].to_enclosure(prec);
            if xe.hi() < p0.lo() {
                break;
            }
            if xe.lo() > p1.hi() {
                continue;
            }
            let lap = Enclosure::new(p0.lo().clone(), p1.hi().clone(), prec);
            let Some(part) = xe.intersect(&lap) else { continue };
            let y = self.eval_on_lap(i, &Scalar::Enclosure(part)).to_enclosure(prec);
            out = Some(match out {
                Some(o) => o.hull(&y),
                None => y,
            });
        }
        let y = out.ok_or_else(|| MapError::OutOfDomain(x.to_string()))?;
        Ok(Scalar::Enclosure(y.intersect(&dom).unwrap_or(y)))
    }

    /// Precision of the stored enclosures, or the global default for exact maps.
    pub fn precision(&self) -> u32 {
        self.points
            .iter()
            .filter_map(Scalar::precision)
            .max()
            .unwrap_or_else(crate::scalar::default_precision)
    }

    /// Restriction to an invariant interval `[lo, hi]`.
    pub fn restrict(&self, lo: &Scalar, hi: &Scalar) -> Result<PLMap, MapError> {
        let bad = || MapError::NotInvariant(lo.to_string(), hi.to_string());
        if !(self.lo().certainly_le(lo) && lo.certainly_le(hi) && hi.certainly_le(self.hi())) || lo == hi {
            return Err(bad());
        }
        let mut points = vec![lo.clone()];
        for p in &self.points {
            if lo.cmp3(p) == Cmp3::Less && p.cmp3(hi) == Cmp3::Less {
                points.push(p.clone());
            }
        }
        points.push(hi.clone());
        let values = points.iter().map(|p| self.eval(p)).collect::<Result<Vec<_>, _>>()?;
        if values.iter().any(|v| !(lo.certainly_le(v) && v.certainly_le(hi))) {
            return Err(bad());
        }
        let mut m = PLMap::new(points, values)?;
        if m.constant_slope.is_none() {
            m.constant_slope = self.constant_slope.clone();
        }
        Ok(m)
    }

    /// Largest slope magnitude, as an upper bound.
    pub fn max_slope(&self) -> f64 {
        self.slopes
            .iter()
            .map(|b| match b.abs() {
                Scalar::Enclosure(e) => e.hi().to_f64(),
                v => v.to_f64(),
            })
            .fold(0.0, f64::max)
    }
}

impl IntervalMap for PLMap {
    fn domain(&self) -> (Scalar, Scalar) {
        (self.lo().clone(), self.hi().clone())
    }
    fn eval(&self, x: &Scalar) -> Result<Scalar, MapError> {
        PLMap::eval(self, x)
    }
    fn lipschitz(&self) -> f64 {
        self.max_slope() * (1.0 + 1e-12)
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        let vals: Vec<String> = self.values.iter().map(|p| p.to_string()).collect();
        write!(f, "breakpoints [{}] values [{}]", pts.join(", "), vals.join(", "))
    }
}
