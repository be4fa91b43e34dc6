//! Pseudo-orbits, exact shadow sets, linking, and the s-limit tracing
//! construction for piecewise-linear maps.
//!
//! Inequalities are closed throughout: a δ-pseudo-orbit has step errors
//! `<= δ` and a shadowing point stays within `<= ε`.

mod branches;
mod chain;
mod circle;
mod slimit;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::intset::{self, IntervalSet, SetError};
use crate::plmap::{detect_critical_cycle, CycleVerdict, IntervalMap, MapError, OrbitState, PLMap};
use crate::scalar::{Scalar, ScalarError};

use branches::Branches;

pub use chain::{chain_connect, side_invariance, two_sided_depth, ChainOutcome, SideReport};
pub use circle::{circle_slimit_failure_demo, CircleReport};
pub use slimit::{
    check_inclusion_dagger, limit_shadow_via_projection, return_time, slimit_trace, Ladders, ProjectionReport,
    SLimitConfig, Stage, TraceCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Map(MapError),
    #[error("step {0} has error {1}, above the allowed {2}")]
    NotPseudoOrbit(usize, String, String),
    #[error("the map has no constant slope above 1")]
    NoConstantSlope,
    #[error("no return time up to {1} for the point {0}")]
    NoReturnTime(String, usize),
    #[error("tracing set W_{0} is empty")]
    EmptyStage(usize),
    #[error("recorded bound fails at index {0}")]
    BoundViolated(usize),
    #[error("{0}")]
    Invalid(String),
}

impl From<MapError> for ShadowError {
    fn from(e: MapError) -> Self {
        ShadowError::Set(e.into())
    }
}

impl From<ScalarError> for ShadowError {
    fn from(e: ScalarError) -> Self {
        ShadowError::Set(e.into())
    }
}

/// Allowed error at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepBound {
    Uniform(Scalar),
    /// `schedule[i]` bounds `d(f(x_i), x_{i+1})`.
    Schedule(Vec<Scalar>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoOrbit {
    pub points: Vec<Scalar>,
    pub bound: StepBound,
}

impl PseudoOrbit {
    pub fn uniform(points: Vec<Scalar>, delta: Scalar) -> Self {
        PseudoOrbit { points, bound: StepBound::Uniform(delta) }
    }

    pub fn scheduled(points: Vec<Scalar>, schedule: Vec<Scalar>) -> Self {
        PseudoOrbit { points, bound: StepBound::Schedule(schedule) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bound_at(&self, i: usize) -> Scalar {
        match &self.bound {
            StepBound::Uniform(d) => d.clone(),
            StepBound::Schedule(s) => s.get(i).or(s.last()).cloned().unwrap_or_else(Scalar::zero),
        }
    }

    /// `d(f(x_i), x_{i+1})` for each step.
    pub fn step_errors(&self, m: &dyn IntervalMap) -> Result<Vec<Scalar>, MapError> {
        (0..self.points.len().saturating_sub(1))
            .map(|i| Ok(m.eval(&self.points[i])?.dist(&self.points[i + 1])))
            .collect()
    }

    /// Index of the first step whose error exceeds its bound.
    pub fn first_violation(&self, m: &dyn IntervalMap) -> Result<Option<usize>, MapError> {
        let errs = self.step_errors(m)?;
        Ok(errs.iter().enumerate().position(|(i, e)| !e.certainly_le(&self.bound_at(i))))
    }

    pub fn verify(&self, m: &dyn IntervalMap) -> Result<bool, MapError> {
        Ok(self.first_violation(m)?.is_none())
    }

    /// Suffix starting at index `k`, with the schedule shifted along.
    pub fn tail(&self, k: usize) -> PseudoOrbit {
        let bound = match &self.bound {
            StepBound::Uniform(d) => StepBound::Uniform(d.clone()),
            StepBound::Schedule(s) => StepBound::Schedule(s.iter().skip(k).cloned().collect()),
        };
        PseudoOrbit { points: self.points[k.min(self.points.len())..].to_vec(), bound }
    }

    /// Text form: a header line then one point per line.
    pub fn to_text(&self, map_spec: &str) -> String {
        let mut out = format!("map: {map_spec}\n");
        match &self.bound {
            StepBound::Uniform(d) => out += &format!("mode: uniform\ndelta: {d}\n"),
            StepBound::Schedule(s) => {
                let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
                out += &format!("mode: schedule\nschedule: {}\n", parts.join(" "));
            }
        }
        for p in &self.points {
            out += &format!("{p}\n");
        }
        out
    }

    /// Parses [`PseudoOrbit::to_text`]; returns the map spec line too.
    pub fn from_text(text: &str) -> Result<(Option<String>, PseudoOrbit), ShadowError> {
        let bad = |m: &str| ShadowError::Invalid(format!("pseudo-orbit file: {m}"));
        let mut map = None;
        let mut mode = None;
        let mut delta = None;
        let mut schedule = None;
        let mut points = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some((k, v)) = line.split_once(':') {
                let v = v.trim();
                match k.trim() {
                    "map" => map = Some(v.to_string()),
                    "mode" => mode = Some(v.to_string()),
                    "delta" => delta = Some(v.parse::<Scalar>().map_err(|_| bad("delta"))?),
                    "schedule" => {
                        schedule = Some(
                            v.split_whitespace()
                                .map(|t| t.parse::<Scalar>().map_err(|_| bad("schedule")))
                                .collect::<Result<Vec<_>, _>>()?,
                        )
                    }
                    other => return Err(bad(&format!("unknown key {other}"))),
                }
            } else {
                points.push(line.parse::<Scalar>().map_err(|_| bad(line))?);
            }
        }
        let bound = match mode.as_deref() {
            Some("uniform") | None if delta.is_some() => StepBound::Uniform(delta.unwrap()),
            Some("schedule") => StepBound::Schedule(schedule.ok_or_else(|| bad("missing schedule"))?),
            _ => return Err(bad("missing delta")),
        };
        Ok((map, PseudoOrbit { points, bound }))
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Scalar {
    const RES: i64 = 1 << 20;
    Scalar::ratio(rng.gen_range(-RES..=RES), RES)
}

fn clamp(m: &PLMap, x: Scalar) -> Scalar {
    if x.certainly_le(m.lo()) {
        m.lo().clone()
    } else if m.hi().certainly_le(&x) {
        m.hi().clone()
    } else {
        x
    }
}

fn noisy_orbit(m: &PLMap, x0: &Scalar, n: usize, bounds: &[Scalar], seed: u64) -> Result<Vec<Scalar>, MapError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![x0.clone()];
    for b in bounds.iter().take(n) {
        let fx = m.eval(pts.last().unwrap())?;
        let next = if b.is_zero() { fx } else { clamp(m, &fx + &(b * &random_unit(&mut rng))) };
        pts.push(next);
    }
    Ok(pts)
}

/// `x_{i+1} = clamp(f(x_i) + u_i)` with `|u_i| <= delta`, deterministic in `seed`.
pub fn perturbed_orbit(m: &PLMap, x0: &Scalar, n: usize, delta: &Scalar, seed: u64) -> Result<PseudoOrbit, MapError> {
    let pts = noisy_orbit(m, x0, n, &vec![delta.clone(); n], seed)?;
    Ok(PseudoOrbit::uniform(pts, delta.clone()))
}

/// As [`perturbed_orbit`] with per-step bounds.
pub fn asymptotic_orbit(
    m: &PLMap,
    x0: &Scalar,
    n: usize,
    schedule: &[Scalar],
    seed: u64,
) -> Result<PseudoOrbit, MapError> {
    assert!(schedule.len() >= n, "schedule shorter than the horizon");
    let pts = noisy_orbit(m, x0, n, schedule, seed)?;
    Ok(PseudoOrbit::scheduled(pts, schedule[..n].to_vec()))
}

/// `scale * 2^{-i}` for `i < n`.
pub fn halving_schedule(scale: &Scalar, n: usize) -> Vec<Scalar> {
    (0..n).map(|i| scale * &Scalar::pow2(-(i as i64))).collect()
}

/// `{z : |f^i(z) - x_i| <= eps for all i}`.
pub fn shadow_set(m: &PLMap, po: &PseudoOrbit, eps: &Scalar) -> Result<IntervalSet, SetError> {
    intset::tube(m, &po.points, &vec![eps.clone(); po.len()])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkOutcome {
    /// `witness` holds every `z` within `eps` of the orbit of `x` for `m` steps with `f^m(z) = y`.
    Linked { m: usize, witness: IntervalSet },
    NotLinkedUpTo(usize),
}

impl LinkOutcome {
    pub fn is_linked(&self) -> bool {
        matches!(self, LinkOutcome::Linked { .. })
    }
}

/// Searches `m = 1..=m_max` for `z` with `f^m(z) = y` and `|f^j(x) - f^j(z)| <= eps` for `j <= m`.
pub fn eps_linked(m: &PLMap, x: &Scalar, y: &Scalar, eps: &Scalar, m_max: usize) -> Result<LinkOutcome, SetError> {
    let orbit = m.orbit(x, m_max)?;
    // the Bowen ball of x, grown one step at a time
    let mut ball = Branches::new(&IntervalSet::ball(x, eps, m.lo(), m.hi())?);
    for k in 1..=m_max {
        ball.advance(m, k)?;
        ball = ball.restrict(&IntervalSet::ball(&orbit[k], eps, m.lo(), m.hi())?)?;
        if ball.is_empty() {
            break;
        }
        if !orbit[k].dist(y).certainly_le(eps) {
            continue;
        }
        let witness = ball.solutions(y)?;
        if !witness.is_empty() {
            return Ok(LinkOutcome::Linked { m: k, witness });
        }
    }
    Ok(LinkOutcome::NotLinkedUpTo(m_max))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkingVerdict {
    /// Every critical point lands exactly on a critical point, so it is linked for every ε.
    YesCertified,
    /// Every critical point was linked at every ε of the ladder.
    YesUpToLadder,
    /// The critical point at `point` is provably not `eps`-linked to any critical point.
    No { point: usize, eps: Scalar },
    Undecided,
}

impl LinkingVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            LinkingVerdict::YesCertified => "yes-certified",
            LinkingVerdict::YesUpToLadder => "yes-up-to-ladder",
            LinkingVerdict::No { .. } => "no",
            LinkingVerdict::Undecided => "undecided",
        }
    }
}

impl fmt::Display for LinkingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct LinkingReport {
    pub verdict: LinkingVerdict,
    /// One line per critical point.
    pub notes: Vec<String>,
}

/// Step at which the orbit of breakpoint `i` first lands on a breakpoint.
fn exact_landing(orbit: &[OrbitState], verdict: &CycleVerdict) -> Option<(usize, usize)> {
    let found = orbit.iter().enumerate().skip(1).find_map(|(n, s)| match s {
        OrbitState::Breakpoint(j) => Some((n, *j)),
        OrbitState::Value(_) => None,
    });
    // the cycle closes back onto orbit[preperiod] at step orbit.len()
    match (found, verdict) {
        (None, CycleVerdict::EventuallyPeriodic { preperiod, .. }) => match &orbit[*preperiod] {
            OrbitState::Breakpoint(j) => Some((orbit.len(), *j)),
            OrbitState::Value(_) => None,
        },
        (found, _) => found,
    }
}

/// For an eventually periodic orbit, every point after the start is farther than `eps` from all targets.
fn provably_unlinked(m: &PLMap, orbit: &[OrbitState], verdict: &CycleVerdict, eps: &Scalar) -> bool {
    let targets = m.critical_points();
    // the point reached after the last stored step is orbit[preperiod], already covered unless preperiod is 0
    let CycleVerdict::EventuallyPeriodic { preperiod, .. } = verdict else { return false };
    let closing = orbit.get(*preperiod).filter(|_| *preperiod == 0);
    orbit.iter().skip(1).chain(closing).all(|s| {
        let v = s.value(m);
        targets.iter().all(|t| {
            let d = v.dist(t);
            eps.cmp3(&d) == crate::scalar::Cmp3::Less
        })
    })
}

/// Decides the linking property of the critical set (all breakpoints, ends included).
pub fn has_linking(m: &PLMap, ladder: &[Scalar], m_max: usize) -> Result<LinkingReport, SetError> {
    let crit = m.critical_points();
    let orbits = detect_critical_cycle(m, 1000)?;
    let mut notes = Vec::new();
    let mut pending = Vec::new();
    for o in &orbits {
        match exact_landing(&o.orbit, &o.verdict) {
            Some((n, j)) => notes.push(format!("critical {} lands on critical {} after {} steps", o.point, j, n)),
            None => pending.push(o),
        }
    }
    if pending.is_empty() {
        return Ok(LinkingReport { verdict: LinkingVerdict::YesCertified, notes });
    }
    let mut all_linked = true;
    for eps in ladder {
        for o in &pending {
            if provably_unlinked(m, &o.orbit, &o.verdict, eps) {
                notes.push(format!("critical {} stays farther than {} from every critical point", o.point, eps));
                return Ok(LinkingReport { verdict: LinkingVerdict::No { point: o.point, eps: eps.clone() }, notes });
            }
        }
        for o in &pending {
            let x = &crit[o.point];
            let mut found = None;
            for (j, y) in crit.iter().enumerate() {
                if let LinkOutcome::Linked { m: k, .. } = eps_linked(m, x, y, eps, m_max)? {
                    found = Some((j, k));
                    break;
                }
            }
            match found {
                Some((j, k)) => notes.push(format!("eps {}: critical {} linked to {} at m = {}", eps, o.point, j, k)),
                None => {
                    notes.push(format!("eps {}: critical {} not linked up to m = {}", eps, o.point, m_max));
                    all_linked = false;
                }
            }
        }
    }
    let verdict = if all_linked { LinkingVerdict::YesUpToLadder } else { LinkingVerdict::Undecided };
    Ok(LinkingReport { verdict, notes })
}

/// Default ε ladder `1/10, 1/100, 1/1000`.
pub fn default_ladder() -> Vec<Scalar> {
    vec![Scalar::ratio(1, 10), Scalar::ratio(1, 100), Scalar::ratio(1, 1000)]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusEstimate {
    /// Largest tested `2^{-j}` for which every sample was shadowed; an estimate, not a certificate.
    pub delta: Option<Scalar>,
    pub exponent: Option<u32>,
    pub samples_per_level: usize,
}

/// Dyadic search for a shadowing modulus using random and critical-point-straddling pseudo-orbits.
pub fn modulus_estimate(
    m: &PLMap,
    eps: &Scalar,
    len: usize,
    trials: usize,
    max_exponent: u32,
    seed: u64,
) -> Result<ModulusEstimate, SetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crit = m.critical_points();
    let width = m.hi() - m.lo();
    for j in 1..=max_exponent {
        let delta = Scalar::pow2(-(j as i64));
        let mut ok = true;
        let mut samples = Vec::new();
        for _ in 0..trials {
            let t = Scalar::ratio(rng.gen_range(0..=1 << 20), 1 << 20);
            let x0 = m.lo() + &(&width * &t);
            samples.push(perturbed_orbit(m, &x0, len, &delta, rng.gen())?);
        }
        for c in &crit {
            // hop across the turning point at every step
            let mut pts = vec![c.clone()];
            for i in 0..len {
                let fx = m.eval(pts.last().unwrap())?;
                let sign = if i % 2 == 0 { delta.clone() } else { delta.neg() };
                pts.push(clamp(m, &fx + &sign));
            }
            samples.push(PseudoOrbit::uniform(pts, delta.clone()));
        }
        for po in &samples {
            if shadow_set(m, po, eps)?.is_empty() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(ModulusEstimate { delta: Some(delta), exponent: Some(j), samples_per_level: samples.len() });
        }
    }
    Ok(ModulusEstimate { delta: None, exponent: None, samples_per_level: trials + crit.len() })
}
