//! Return times, the inclusion test behind s-limit shadowing, and the
//! construction of a point tracing an asymptotic pseudo-orbit.

use std::fmt::Write as _;

use crate::intset::{self, IntervalSet, SetError};
use crate::plmap::{golden_core, golden_restriction, IntervalMap, PLMap};
use crate::scalar::Scalar;

use super::branches::Branches;
use super::{PseudoOrbit, ShadowError};

/// Constants of the tracing construction. `eta(g) = eta_factor * g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SLimitConfig {
    pub lambda: Scalar,
    pub eps_hat: Scalar,
    pub n_max: usize,
    pub eta_factor: Scalar,
}

impl SLimitConfig {
    /// `lambda = s^2`, `eta(g) = (s - 1) g`.
    pub fn for_slope(s: &Scalar, n_max: usize) -> Self {
        SLimitConfig { lambda: s * s, eps_hat: Scalar::one(), n_max, eta_factor: s - &Scalar::one() }
    }

    pub fn for_map(m: &PLMap, n_max: usize) -> Result<Self, ShadowError> {
        let s = m.constant_slope().ok_or(ShadowError::NoConstantSlope)?;
        if s.cmp3(&Scalar::one()) != crate::scalar::Cmp3::Greater {
            return Err(ShadowError::NoConstantSlope);
        }
        Ok(SLimitConfig::for_slope(s, n_max))
    }

    pub fn eta(&self, g: &Scalar) -> Scalar {
        &self.eta_factor * g
    }
}

/// `A(x, n, g) = {y : |x - y| <= g, |f^i(x) - f^i(y)| <= lambda g, 1 <= i <= n}`.
fn a_set(m: &PLMap, cfg: &SLimitConfig, x: &Scalar, n: usize, g: &Scalar) -> Result<IntervalSet, SetError> {
    let orbit = m.orbit(x, n)?;
    let mut radii = vec![&cfg.lambda * g; n + 1];
    radii[0] = g.clone();
    intset::tube(m, &orbit, &radii)
}

/// `f(B(f^n(x), g + eta)) ⊆ f^{n+1}(A(x, n, g))`, decided exactly.
pub fn check_inclusion_dagger(m: &PLMap, cfg: &SLimitConfig, x: &Scalar, g: &Scalar, n: usize) -> Result<bool, SetError> {
    let fnx = m.iterate(x, n)?;
    let r = g + &cfg.eta(g);
    let lhs = intset::image(m, &IntervalSet::ball(&fnx, &r, m.lo(), m.hi())?)?;
    let a = a_set(m, cfg, x, n, g)?;
    let rhs = intset::image_n(m, &a, n + 1)?;
    lhs.is_subset(&rhs)
}

/// Least `n` in `1..=n_max` passing [`check_inclusion_dagger`].
pub fn return_time(m: &PLMap, cfg: &SLimitConfig, x: &Scalar, g: &Scalar, n_max: usize) -> Result<Option<usize>, SetError> {
    for n in 1..=n_max {
        if check_inclusion_dagger(m, cfg, x, g, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `eps_j = eps_0 / 2^j`, `eta_j = min(eta(eps_j), eps_j)` and `delta_j`, chosen so that any
/// `delta_j`-pseudo-orbit of length at most `n_max` stays within `eta_j / 2` of the true orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladders {
    pub slope: Scalar,
    pub eps0: Scalar,
    pub lambda: Scalar,
    eta_factor: Scalar,
    growth: Scalar,
}

impl Ladders {
    pub fn new(eps: &Scalar, slope: &Scalar, cfg: &SLimitConfig) -> Result<Self, ShadowError> {
        let eps0 = eps.try_div(&cfg.lambda.mul_int(3))?;
        let one = Scalar::one();
        // sum of s^i for i < n_max
        let growth = (&slope.powi(cfg.n_max as u32) - &one).try_div(&(slope - &one))?;
        let eta_factor = cfg.eta_factor.min_bound(&one);
        Ok(Ladders { slope: slope.clone(), eps0, lambda: cfg.lambda.clone(), eta_factor, growth })
    }

    pub fn eps(&self, j: usize) -> Scalar {
        &self.eps0 * &Scalar::pow2(-(j as i64))
    }

    pub fn eta(&self, j: usize) -> Scalar {
        &self.eta_factor * &self.eps(j)
    }

    pub fn delta(&self, j: usize) -> Scalar {
        (&self.eta(j) * &Scalar::ratio(1, 2)).try_div(&self.growth).expect("growth is positive")
    }

    /// `2 lambda eps_j`.
    pub fn envelope(&self, j: usize) -> Scalar {
        &self.lambda.mul_int(2) * &self.eps(j)
    }
}

/// One step of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub m: usize,
    pub n: usize,
    pub j: usize,
    pub w: IntervalSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceCertificate {
    pub map_spec: Option<String>,
    pub eps: Scalar,
    pub lambda: Scalar,
    pub n_max: usize,
    pub points: Vec<Scalar>,
    pub stages: Vec<Stage>,
    pub z: Scalar,
    /// `bounds[i]` bounds `|f^i(z) - x_i|` for `i <= covered`.
    pub bounds: Vec<Scalar>,
    pub errors: Vec<Scalar>,
}

impl TraceCertificate {
    /// Last index the recorded bounds reach.
    pub fn covered(&self) -> usize {
        self.bounds.len().saturating_sub(1)
    }

    pub fn max_level(&self) -> usize {
        self.stages.iter().map(|s| s.j).max().unwrap_or(0)
    }

    /// True when no stage was promoted past `j = 0`: the certificate then says only
    /// that `z` shadows the pseudo-orbit within `2 lambda eps_0`.
    pub fn degenerate(&self) -> bool {
        self.max_level() == 0
    }

    /// Recomputes every bound, the nesting of the `W_k` and the envelope.
    pub fn verify(&self, m: &PLMap) -> Result<(), ShadowError> {
        let s = m.constant_slope().ok_or(ShadowError::NoConstantSlope)?;
        let cfg = SLimitConfig { lambda: self.lambda.clone(), ..SLimitConfig::for_slope(s, self.n_max) };
        let lad = Ladders::new(&self.eps, s, &cfg)?;
        let bad = |msg: String| ShadowError::Invalid(msg);
        if self.stages.is_empty() {
            return Err(bad("no stages".into()));
        }
        for w in self.stages.windows(2) {
            if !w[1].w.is_subset(&w[0].w)? {
                return Err(bad(format!("W at m = {} is not nested", w[1].m)));
            }
            if w[1].m != w[0].m + w[0].n || w[1].j < w[0].j || w[1].j > w[0].j + 1 {
                return Err(bad(format!("stage indices break at m = {}", w[1].m)));
            }
        }
        let last = self.stages.last().unwrap();
        if !last.w.contains_point(&self.z)? {
            return Err(bad("z is not in the last W".into()));
        }
        if self.covered() != last.m + last.n || self.covered() >= self.points.len() {
            return Err(bad("bounds do not match the stages".into()));
        }
        let orbit = m.orbit(&self.z, self.covered())?;
        for (i, b) in self.bounds.iter().enumerate() {
            let k = self.stages.iter().rposition(|st| st.m < i || st.m == 0).unwrap_or(0);
            if b != &lad.envelope(self.stages[k].j) {
                return Err(bad(format!("bound {i} is not on the envelope")));
            }
            if !orbit[i].dist(&self.points[i]).certainly_le(b) {
                return Err(ShadowError::BoundViolated(i));
            }
        }
        Ok(())
    }

    /// Structured text; [`TraceCertificate::from_text`] reads it back.
    pub fn to_text(&self) -> String {
        let mut out = String::from("certificate: slimit-trace\n");
        if let Some(spec) = &self.map_spec {
            let _ = writeln!(out, "map: {spec}");
        }
        let _ = writeln!(out, "eps: {}", self.eps);
        let _ = writeln!(out, "lambda: {}", self.lambda);
        let _ = writeln!(out, "n_max: {}", self.n_max);
        let _ = writeln!(out, "z: {}", self.z);
        for p in &self.points {
            let _ = writeln!(out, "point: {p}");
        }
        for st in &self.stages {
            let _ = writeln!(out, "stage: m={} n={} j={} W={}", st.m, st.n, st.j, st.w);
        }
        for (i, b) in self.bounds.iter().enumerate() {
            let _ = writeln!(out, "bound: {} {} {}", i, b, self.errors[i]);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ShadowError> {
        let bad = |m: String| ShadowError::Invalid(format!("certificate: {m}"));
        let sc = |v: &str| v.trim().parse::<Scalar>().map_err(|_| bad(format!("bad scalar {v:?}")));
        let mut cert = TraceCertificate {
            map_spec: None,
            eps: Scalar::zero(),
            lambda: Scalar::one(),
            n_max: 0,
            points: vec![],
            stages: vec![],
            z: Scalar::zero(),
            bounds: vec![],
            errors: vec![],
        };
        let mut kind_ok = false;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once(':').ok_or_else(|| bad(format!("line {line:?}")))?;
            let v = v.trim();
            match k.trim() {
                "certificate" => kind_ok = v == "slimit-trace",
                "map" => cert.map_spec = Some(v.to_string()),
                "eps" => cert.eps = sc(v)?,
                "lambda" => cert.lambda = sc(v)?,
                "n_max" => cert.n_max = v.parse().map_err(|_| bad("n_max".into()))?,
                "z" => cert.z = sc(v)?,
                "point" => cert.points.push(sc(v)?),
                "stage" => {
                    let mut st = Stage { m: 0, n: 0, j: 0, w: IntervalSet::empty() };
                    let (head, w) = v.split_once("W=").ok_or_else(|| bad("stage".into()))?;
                    for kv in head.split_whitespace() {
                        let (a, b) = kv.split_once('=').ok_or_else(|| bad("stage".into()))?;
                        let n: usize = b.parse().map_err(|_| bad("stage".into()))?;
                        match a {
                            "m" => st.m = n,
                            "n" => st.n = n,
                            "j" => st.j = n,
                            _ => return Err(bad(format!("stage key {a}"))),
                        }
                    }
                    st.w = w.parse()?;
                    cert.stages.push(st);
                }
                "bound" => {
                    let parts: Vec<&str> = v.split_whitespace().collect();
                    if parts.len() != 3 || parts[0].parse::<usize>() != Ok(cert.bounds.len()) {
                        return Err(bad(format!("bound line {v:?}")));
                    }
                    cert.bounds.push(sc(parts[1])?);
                    cert.errors.push(sc(parts[2])?);
                }
                other => return Err(bad(format!("unknown key {other}"))),
            }
        }
        if !kind_ok {
            return Err(bad("not an slimit-trace certificate".into()));
        }
        Ok(cert)
    }
}

/// Builds the nested sets `W_k` for an asymptotic pseudo-orbit and returns the
/// leftmost point of the last one together with its verified error profile.
pub fn slimit_trace(m: &PLMap, po: &PseudoOrbit, eps: &Scalar, cfg: &SLimitConfig) -> Result<TraceCertificate, ShadowError> {
    let s = m.constant_slope().ok_or(ShadowError::NoConstantSlope)?.clone();
    let lad = Ladders::new(eps, &s, cfg)?;
    let x = &po.points;
    let h = x.len().saturating_sub(1);
    let errs = po.step_errors(m)?;
    let d0 = lad.delta(0);
    if let Some(i) = errs.iter().position(|e| !e.certainly_le(&d0)) {
        return Err(ShadowError::NotPseudoOrbit(i, errs[i].to_string(), d0.to_string()));
    }
    // tail_max[i] = max step error from i on
    let mut tail_max = vec![Scalar::zero(); h + 1];
    for i in (0..h).rev() {
        tail_max[i] = errs[i].max_bound(&tail_max[i + 1]);
    }
    let rt = |xm: &Scalar, j: usize| -> Result<usize, ShadowError> {
        return_time(m, cfg, xm, &lad.eps(j), cfg.n_max)?
            .ok_or_else(|| ShadowError::NoReturnTime(xm.to_string(), cfg.n_max))
    };
    let n0 = rt(&x[0], 0)?;
    if n0 > h {
        return Err(ShadowError::Invalid(format!("horizon {h} shorter than the first return time {n0}")));
    }
    let w0 = a_set(m, cfg, &x[0], n0, &lad.eps(0))?;
    if w0.is_empty() {
        return Err(ShadowError::EmptyStage(0));
    }
    let mut branches = Branches::new(&w0);
    let mut stages = vec![Stage { m: 0, n: n0, j: 0, w: w0 }];
    loop {
        let prev = stages.last().unwrap();
        let mk = prev.m + prev.n;
        if mk >= h {
            break;
        }
        let j = if tail_max[mk].certainly_le(&lad.delta(prev.j + 1)) { prev.j + 1 } else { prev.j };
        let nk = rt(&x[mk], j)?;
        if mk + nk > h {
            break;
        }
        let target = intset::image(m, &a_set(m, cfg, &x[mk], nk, &lad.eps(j))?)?;
        branches.advance(m, mk + 1)?;
        branches = branches.restrict(&target)?;
        let w = branches.set()?;
        if w.is_empty() {
            return Err(ShadowError::EmptyStage(stages.len()));
        }
        stages.push(Stage { m: mk, n: nk, j, w });
    }
    let last = stages.last().unwrap();
    let covered = last.m + last.n;
    let z = last.w.leftmost().expect("nonempty").clone();
    let orbit = m.orbit(&z, covered)?;
    let mut bounds = Vec::with_capacity(covered + 1);
    let mut errors = Vec::with_capacity(covered + 1);
    for i in 0..=covered {
        let k = stages.iter().rposition(|st| st.m < i || st.m == 0).unwrap_or(0);
        let b = lad.envelope(stages[k].j);
        let e = orbit[i].dist(&x[i]);
        if !e.certainly_le(&b) {
            return Err(ShadowError::BoundViolated(i));
        }
        bounds.push(b);
        errors.push(e);
    }
    Ok(TraceCertificate {
        map_spec: None,
        eps: eps.clone(),
        lambda: cfg.lambda.clone(),
        n_max: cfg.n_max,
        points: x.clone(),
        stages,
        z,
        bounds,
        errors,
    })
}

#[derive(Debug, Clone)]
pub struct ProjectionReport {
    /// The sequence with every point left of `f^2(c)` replaced by `f^2(c)`.
    pub projected: Vec<Scalar>,
    /// First index from which the projected sequence is a `delta_0`-pseudo-orbit of the core map.
    pub tail_start: usize,
    pub certificate: TraceCertificate,
    /// Tracing point in the core for the whole original sequence.
    pub z: Scalar,
    /// `|f^i(z) - x_i|` against the original sequence, up to the covered horizon.
    pub errors: Vec<Scalar>,
    pub verified: bool,
}

/// Traces an asymptotic pseudo-orbit of the golden tent on `[d, f(c)]` by
/// projecting it into the core `[f^2(c), f(c)]`.
pub fn limit_shadow_via_projection(po: &PseudoOrbit, eps: &Scalar, n_max: usize) -> Result<ProjectionReport, ShadowError> {
    let whole = golden_restriction();
    let core = golden_core();
    for p in &po.points {
        if !whole.in_domain(p) {
            return Err(ShadowError::Invalid(format!("{p} is outside [d, f(c)]")));
        }
    }
    let f2c = core.lo().clone();
    let projected: Vec<Scalar> =
        po.points.iter().map(|p| if p.try_lt(&f2c).unwrap_or(false) { f2c.clone() } else { p.clone() }).collect();
    let cfg = SLimitConfig::for_map(&core, n_max)?;
    let lad = Ladders::new(eps, core.constant_slope().unwrap(), &cfg)?;
    let d0 = lad.delta(0);
    let proj = PseudoOrbit::uniform(projected.clone(), d0.clone());
    let errs = proj.step_errors(&core)?;
    let tail_start = errs.iter().rposition(|e| !e.certainly_le(&d0)).map_or(0, |i| i + 1);
    let cert = slimit_trace(&core, &proj.tail(tail_start), eps, &cfg)?;
    // pull the tracing point back along the core map, staying near the projected sequence
    let mut z = cert.z.clone();
    for i in (0..tail_start).rev() {
        let pre = intset::preimage(&core, &IntervalSet::point(z.clone()))?;
        z = pre
            .intervals()
            .iter()
            .map(|iv| iv.lo.clone())
            .min_by(|a, b| a.dist(&projected[i]).try_cmp(&b.dist(&projected[i])).unwrap_or(std::cmp::Ordering::Equal))
            .ok_or_else(|| ShadowError::Invalid("core map is not onto".into()))?;
    }
    let covered = tail_start + cert.covered();
    let orbit = core.orbit(&z, covered)?;
    let errors: Vec<Scalar> = (0..=covered).map(|i| orbit[i].dist(&po.points[i])).collect();
    let mut verified = true;
    for i in tail_start..=covered {
        let allowed = &cert.bounds[i - tail_start] + &po.points[i].dist(&projected[i]);
        if !errors[i].certainly_le(&allowed) {
            verified = false;
        }
    }
    Ok(ProjectionReport { projected, tail_start, certificate: cert, z, errors, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::{golden_core, make_tent};
    use crate::shadow::{asymptotic_orbit, halving_schedule};

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn pullback_oracle(m: &PLMap, w: &IntervalSet, k: usize, target: &IntervalSet) -> Result<IntervalSet, SetError> {
        let mut images = vec![w.clone()];
        for _ in 0..k {
            let next = intset::image(m, images.last().unwrap())?;
            images.push(next);
        }
        let mut r = images[k].intersect(target)?;
        for i in (0..k).rev() {
            if r.is_empty() {
                break;
            }
            let (lo, hi) = match (images[i].leftmost(), images[i].rightmost()) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                _ => return Ok(IntervalSet::empty()),
            };
            r = intset::preimage_within(m, &r, &lo, &hi)?.intersect(&images[i])?;
        }
        Ok(r)
    }

    #[test]
    fn branches_match_stepwise_pullback() {
        for m in [make_tent(&Scalar::int(2)).unwrap(), golden_core()] {
            let w = IntervalSet::from_intervals(vec![
                intset::Interval { lo: s("3/10"), hi: s("7/20") },
                intset::Interval { lo: s("1/2"), hi: s("13/20") },
            ])
            .unwrap()
            .clip(m.lo(), m.hi())
            .unwrap();
            let target = IntervalSet::interval(s("2/5"), s("9/20")).unwrap();
            let mut br = Branches::new(&w);
            for k in 1..8 {
                br.advance(&m, k).unwrap();
                assert_eq!(br.restrict(&target).unwrap().set().unwrap(), pullback_oracle(&m, &w, k, &target).unwrap());
            }
        }
    }

    #[test]
    fn full_tent_returns_quickly() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        let cfg = SLimitConfig::for_map(&t, 12).unwrap();
        let n = return_time(&t, &cfg, &s("1/4"), &s("1/100"), 12).unwrap();
        assert!(n.is_some());
    }

    #[test]
    fn exact_orbit_traces_itself() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        let cfg = SLimitConfig::for_map(&t, 8).unwrap();
        let po = PseudoOrbit::uniform(t.orbit(&s("1/7"), 30).unwrap(), Scalar::zero());
        let cert = slimit_trace(&t, &po, &s("1/10"), &cfg).unwrap();
        assert!(cert.stages.iter().all(|st| st.w.contains_point(&s("1/7")).unwrap()));
        cert.verify(&t).unwrap();
        let back = TraceCertificate::from_text(&cert.to_text()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn noisy_orbit_promotes() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        let cfg = SLimitConfig::for_map(&t, 8).unwrap();
        let eps = s("1/10");
        let lad = Ladders::new(&eps, &Scalar::int(2), &cfg).unwrap();
        let sch = halving_schedule(&lad.delta(0), 60);
        let po = asymptotic_orbit(&t, &s("3/10"), 60, &sch, 11).unwrap();
        let cert = slimit_trace(&t, &po, &eps, &cfg).unwrap();
        cert.verify(&t).unwrap();
        assert!(cert.max_level() >= 3, "{}", cert.max_level());
    }
}
