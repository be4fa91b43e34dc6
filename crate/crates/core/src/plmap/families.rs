//! Named maps: tent maps and their cores, the golden-ratio restriction, the
//! double tent, and the countably-piecewise linking example truncated at finite
//! depth together with its two-sided extension.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::scalar::{default_precision, Cmp3, Dyadic, Enclosure, Round, Scalar};

use super::{MapError, PLMap};

/// `f_s(x) = s x` on `[0, 1/2]` and `s (1 - x)` on `[1/2, 1]`, for `1 < s <= 2`.
pub fn make_tent(s: &Scalar) -> Result<PLMap, MapError> {
    let ok = s.cmp3(&Scalar::one()) == Cmp3::Greater && s.certainly_le(&Scalar::int(2));
    if !ok {
        return Err(MapError::SlopeOutOfRange(s.to_string()));
    }
    let half = Scalar::ratio(1, 2);
    let m = PLMap::new(vec![Scalar::zero(), half.clone(), Scalar::one()], vec![Scalar::zero(), s * &half, Scalar::zero()])?;
    Ok(m.with_constant_slope(s.clone()))
}

fn tent_slope(m: &PLMap) -> Option<Scalar> {
    let p = m.points();
    let v = m.values();
    let shape = p.len() == 3
        && p[0] == Scalar::zero()
        && p[1] == Scalar::ratio(1, 2)
        && p[2] == Scalar::one()
        && v[0] == Scalar::zero()
        && v[2] == Scalar::zero();
    shape.then(|| v[1].mul_int(2))
}

/// The core `[f^2(c), f(c)] = [s - s^2/2, s/2]` of a tent map with `s > sqrt 2`.
pub fn core(m: &PLMap) -> Result<(Scalar, Scalar), MapError> {
    let s = tent_slope(m).ok_or(MapError::NotTent)?;
    let s2 = &s * &s;
    if s2.cmp3(&Scalar::int(2)) != Cmp3::Greater {
        return Err(MapError::SlopeOutOfRange(s.to_string()));
    }
    let half = Scalar::ratio(1, 2);
    Ok((&s - &(&s2 * &half), &s * &half))
}

/// `d = 1/(s + s^2)` for the golden slope: the second preimage of the interior fixed point.
pub fn golden_d() -> Scalar {
    let s = Scalar::golden();
    (&s + &(&s * &s)).try_recip().expect("nonzero")
}

/// Golden tent restricted to its core.
pub fn golden_core() -> PLMap {
    let t = make_tent(&Scalar::golden()).expect("golden slope in range");
    let (lo, hi) = core(&t).expect("golden core");
    t.restrict(&lo, &hi).expect("core is invariant")
}

/// Golden tent restricted to `[d, f(c)]`; has limit shadowing but not linking.
pub fn golden_restriction() -> PLMap {
    let t = make_tent(&Scalar::golden()).expect("golden slope in range");
    let hi = Scalar::golden() * Scalar::ratio(1, 2);
    t.restrict(&golden_d(), &hi).expect("[d, f(c)] is invariant")
}

/// Odd extension of the full tent to `[-1, 1]`.
pub fn double_tent() -> PLMap {
    let pts = ["-1", "-1/2", "1/2", "1"].map(|x| x.parse::<Scalar>().unwrap());
    let vals = ["0", "-1", "1", "0"].map(|x| x.parse::<Scalar>().unwrap());
    PLMap::new(pts.to_vec(), vals.to_vec()).expect("double tent")
}

/// Certified enclosures of the three nucleus parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NucleusParameters {
    pub a: Scalar,
    pub mu: Scalar,
    pub s: Scalar,
}

impl NucleusParameters {
    /// Residuals of `s a = 1 + mu (1 - a)`, `s mu a = mu + a`, `4 s a = s + 1`.
    pub fn residuals(&self) -> [Scalar; 3] {
        let (a, mu, s) = (&self.a, &self.mu, &self.s);
        let one = Scalar::one();
        [
            &(s * a) - &(&one + &(mu * &(&one - a))),
            &(&(s * mu) * a) - &(mu + a),
            &(s * a).mul_int(4) - &(s + &one),
        ]
    }
}

static NUCLEUS: Mutex<Option<HashMap<u32, NucleusParameters>>> = Mutex::new(None);

fn cubic(a: &Dyadic) -> Dyadic {
    // 8a^3 - 8a^2 + 5a - 1
    let a2 = a.mul(a);
    let a3 = a2.mul(a);
    a3.mul_pow2(3).sub(&a2.mul_pow2(3)).add(&a.mul(&Dyadic::from_int(5))).sub(&Dyadic::from_int(1))
}

/// Solve the nucleus system at `prec` bits.
///
/// Eliminating `s = 1/(4a - 1)` and `mu = a(4a - 1)/(1 - 3a)` leaves
/// `(2a - 1)(8a^3 - 8a^2 + 5a - 1) = 0`; the cubic is increasing with a single
/// root in `(1/4, 3/8)`, found by exact bisection.
pub fn nucleus_parameters(prec: u32) -> Result<NucleusParameters, MapError> {
    if let Some(p) = NUCLEUS.lock().unwrap().as_ref().and_then(|m| m.get(&prec)) {
        return Ok(p.clone());
    }
    let mut lo = Dyadic::pow2(-2);
    let mut hi = Dyadic::new(3.into(), -3);
    if cubic(&lo).signum() >= 0 || cubic(&hi).signum() <= 0 {
        return Err(MapError::RootFinding);
    }
    for _ in 0..prec + 16 {
        let mid = lo.add(&hi).mul_pow2(-1);
        match cubic(&mid).signum() {
            0 => {
                lo = mid.clone();
                hi = mid;
                break;
            }
            x if x < 0 => lo = mid,
            _ => hi = mid,
        }
    }
    let w = prec + 32;
    let a = Enclosure::new(lo.round(w, Round::Down), hi.round(w, Round::Up), w);
    let four_a_1 = a.mul_pow2(2).sub(&Enclosure::from_int(1, w));
    let s = four_a_1.recip()?;
    let one_3a = Enclosure::from_int(1, w).sub(&a.mul(&Enclosure::from_int(3, w)));
    let mu = a.mul(&four_a_1).div(&one_3a)?;
    let params = NucleusParameters {
        a: Scalar::Enclosure(a.with_prec(prec)),
        mu: Scalar::Enclosure(mu.with_prec(prec)),
        s: Scalar::Enclosure(s.with_prec(prec)),
    };
    NUCLEUS.lock().unwrap().get_or_insert_with(HashMap::new).insert(prec, params.clone());
    Ok(params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    /// Left end of right copy `k` (the nucleus is copy 0); fixed.
    Fix(usize),
    C1(usize),
    C2(usize),
    Tail,
    End,
    Mirror(NodeRight),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum NodeRight {
    Fix(usize),
    C1(usize),
    C2(usize),
    Tail,
    End,
}

impl Node {
    fn right(self) -> Option<NodeRight> {
        Some(match self {
            Node::Fix(k) => NodeRight::Fix(k),
            Node::C1(k) => NodeRight::C1(k),
            Node::C2(k) => NodeRight::C2(k),
            Node::Tail => NodeRight::Tail,
            Node::End => NodeRight::End,
            Node::Mirror(_) => return None,
        })
    }

    fn from_right(r: NodeRight) -> Node {
        match r {
            NodeRight::Fix(k) => Node::Fix(k),
            NodeRight::C1(k) => Node::C1(k),
            NodeRight::C2(k) => Node::C2(k),
            NodeRight::Tail => Node::Tail,
            NodeRight::End => Node::End,
        }
    }

    /// Reflection `x -> 1 - x`, normalized so the nucleus points stay right nodes.
    fn mirror(self) -> Node {
        match self {
            Node::Mirror(r) => Node::from_right(r),
            Node::Fix(0) => Node::Fix(1),
            Node::Fix(1) => Node::Fix(0),
            Node::C1(0) => Node::C2(0),
            Node::C2(0) => Node::C1(0),
            n => Node::Mirror(n.right().unwrap()),
        }
    }

    fn image(self, top: usize) -> Node {
        match self {
            Node::Fix(k) => Node::Fix(k),
            Node::C1(k) if k < top => Node::C2(k + 1),
            Node::C1(_) => Node::Tail,
            Node::C2(0) => Node::C2(1).mirror(),
            Node::C2(k) => Node::C2(k - 1),
            Node::Tail => Node::C2(top),
            Node::End => Node::End,
            Node::Mirror(r) => Node::from_right(r).image(top).mirror(),
        }
    }
}

/// Truncated countably-piecewise map on `[0, 1]`.
///
/// Copies of the nucleus scaled by `mu^k`, `k = 1..=depth+1`, are glued on both
/// sides; each copy meets its neighbour along a single straight lap. Past the last copy a two-lap tail returns to the fixed endpoint: its
/// turning point sits where the next copy's `C2` would be and maps to the last
/// copy's `C2`, so every breakpoint is still pre-periodic.
pub fn make_nucleus_family(depth: usize) -> Result<PLMap, MapError> {
    nucleus_family_at(depth, default_precision())
}

pub fn nucleus_family_at(depth: usize, prec: u32) -> Result<PLMap, MapError> {
    let (points, refs) = nucleus_nodes(depth, prec)?;
    PLMap::with_value_refs(points, refs)
}

fn nucleus_nodes(depth: usize, prec: u32) -> Result<(Vec<Scalar>, Vec<usize>), MapError> {
    let w = prec + 32;
    let p = nucleus_parameters(w)?;
    let top = depth + 1;
    let (a, mu) = (p.a.clone(), p.mu.clone());
    let one = Scalar::one().widen(w);
    let one_a = &one - &a;
    // E_k and mu^k for k = 0..=top+1
    let mut e = vec![Scalar::zero().widen(w)];
    let mut muk = vec![one.clone()];
    for k in 0..=top {
        e.push(&e[k] + &muk[k]);
        muk.push(&muk[k] * &mu);
    }
    let big_l = mu.try_div(&(&one - &mu))?;
    let pos_right = |n: NodeRight| -> Scalar {
        match n {
            NodeRight::Fix(k) => e[k].clone(),
            NodeRight::C1(k) => &e[k] + &(&muk[k] * &a),
            NodeRight::C2(k) => &e[k] + &(&muk[k] * &one_a),
            NodeRight::Tail => &e[top + 1] + &(&muk[top + 1] * &one_a),
            NodeRight::End => &one + &big_l,
        }
    };
    let pos = |n: Node| -> Scalar {
        match n {
            Node::Mirror(r) => &one - &pos_right(r),
            n => pos_right(n.right().unwrap()),
        }
    };
    // Junctions between copies are collinear, so only the outermost one is a breakpoint.
    let mut nodes: Vec<Node> = vec![Node::Fix(top + 1)];
    for k in 0..=top {
        nodes.push(Node::C1(k));
        nodes.push(Node::C2(k));
    }
    nodes.push(Node::Tail);
    nodes.push(Node::End);
    let right: Vec<Node> = nodes.clone();
    for n in right {
        let m = n.mirror();
        if !nodes.contains(&m) {
            nodes.push(m);
        }
    }
    let scale = (&one + &big_l.mul_int(2)).try_recip()?;
    let mut located: Vec<(Node, Scalar)> = nodes.iter().map(|&n| (n, &(&pos(n) + &big_l) * &scale)).collect();
    located.sort_by(|x, y| x.1.to_f64().partial_cmp(&y.1.to_f64()).unwrap());
    let index: HashMap<Node, usize> = located.iter().enumerate().map(|(i, (n, _))| (*n, i)).collect();
    let refs = located.iter().map(|(n, _)| index[&n.image(top)]).collect();
    let mut points: Vec<Scalar> =
        located.into_iter().map(|(_, x)| Scalar::Enclosure(x.to_enclosure(w).with_prec(prec))).collect();
    // The fixed ends rescale to exactly 0 and 1.
    let last = points.len() - 1;
    points[0] = Scalar::zero();
    points[last] = Scalar::one();
    Ok((points, refs))
}

/// `g(x) = -f(x)` for `x >= 0` and `f(-x)` for `x < 0`, with `f` the nucleus family.
///
/// Both sides have the same slope at the origin, so `0` is not a breakpoint of `g`.
pub fn make_two_sided(depth: usize) -> Result<PLMap, MapError> {
    two_sided_at(depth, default_precision())
}

pub fn two_sided_at(depth: usize, prec: u32) -> Result<PLMap, MapError> {
    let (p, r) = nucleus_nodes(depth, prec)?;
    let n = p.len();
    // index of -p[i] is n-1-i (i >= 1); index of +p[i] is n-2+i
    let neg_idx = |i: usize| n - 1 - i;
    let pos_idx = |i: usize| n - 2 + i;
    if r.iter().skip(1).any(|&j| j == 0) {
        return Err(MapError::Spec("a nonzero breakpoint maps to the origin".into()));
    }
    let mut points = Vec::with_capacity(2 * n - 2);
    let mut refs = Vec::with_capacity(2 * n - 2);
    for i in (1..n).rev() {
        points.push(p[i].neg());
        refs.push(pos_idx(r[i]));
    }
    for i in 1..n {
        points.push(p[i].clone());
        refs.push(neg_idx(r[i]));
    }
    PLMap::with_value_refs(points, refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::IntervalMap;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn tent_values() {
        let t = make_tent(&s("2")).unwrap();
        assert_eq!(t.eval(&s("1/2")).unwrap(), s("1"));
        assert_eq!(t.eval(&s("1")).unwrap(), s("0"));
        let t = make_tent(&s("3/2")).unwrap();
        assert_eq!(t.orbit(&s("1/2"), 3).unwrap(), vec![s("1/2"), s("3/4"), s("3/8"), s("9/16")]);
        assert!(matches!(make_tent(&s("1")), Err(MapError::SlopeOutOfRange(_))));
        assert!(matches!(make_tent(&s("5/2")), Err(MapError::SlopeOutOfRange(_))));
    }

    #[test]
    fn golden_three_cycle() {
        let t = make_tent(&Scalar::golden()).unwrap();
        let c = s("1/2");
        assert_eq!(t.orbit(&c, 3).unwrap()[3], c);
    }

    #[test]
    fn cores() {
        assert_eq!(core(&make_tent(&s("2")).unwrap()).unwrap(), (s("0"), s("1")));
        assert_eq!(core(&make_tent(&s("3/2")).unwrap()).unwrap(), (s("3/8"), s("3/4")));
        let g = Scalar::golden();
        let (lo, hi) = core(&make_tent(&g).unwrap()).unwrap();
        assert_eq!(lo, (&g - &Scalar::one()) * Scalar::ratio(1, 2));
        assert_eq!(hi, &g * &Scalar::ratio(1, 2));
        assert!(matches!(core(&make_tent(&s("7/5")).unwrap()), Err(MapError::SlopeOutOfRange(_))));
    }

    #[test]
    fn golden_d_lands_on_fixed_point() {
        let t = make_tent(&Scalar::golden()).unwrap();
        let g = Scalar::golden();
        let fixed = &g / &(&g + &Scalar::one());
        assert_eq!(t.orbit(&golden_d(), 2).unwrap()[2], fixed);
        assert_eq!(t.eval(&fixed).unwrap(), fixed);
    }

    #[test]
    fn critical_sets() {
        let gc = golden_core();
        assert_eq!(gc.critical_points().len(), 3);
        let dt = double_tent();
        assert_eq!(dt.critical_points(), vec![s("-1"), s("-1/2"), s("1/2"), s("1")]);
        assert_eq!(dt.constant_slope(), Some(&s("2")));
    }

    #[test]
    fn nucleus_published_values() {
        let p = nucleus_parameters(128).unwrap();
        for (v, want) in [(&p.a, 0.301696), (&p.mu, 0.657298), (&p.s, 4.83598)] {
            assert!((v.to_f64() - want).abs() < 1e-5);
        }
        for r in p.residuals() {
            let e = r.to_enclosure(128);
            assert!(e.contains_zero());
            assert!(e.width().to_f64() < 1e-30);
        }
    }

    #[test]
    fn nucleus_interior_laps_have_slope_s() {
        for depth in 0..3 {
            let m = make_nucleus_family(depth).unwrap();
            let sv = nucleus_parameters(128).unwrap().s.to_f64();
            let n = m.laps();
            // two tail laps at each end have other slopes
            for (i, b) in m.slopes().iter().enumerate() {
                if i >= 2 && i + 2 < n {
                    assert!((b.abs().to_f64() - sv).abs() < 1e-20, "lap {i} depth {depth}");
                }
            }
            assert_eq!(m.lo().to_f64(), 0.0);
            assert!((m.hi().to_f64() - 1.0).abs() < 1e-30);
            assert_eq!(n, 4 * depth + 11);
        }
    }

    #[test]
    fn two_sided_is_odd_on_breakpoints() {
        let g = make_two_sided(1).unwrap();
        let n = g.points().len();
        for i in 0..n {
            assert_eq!(g.points()[i], g.points()[n - 1 - i].neg());
            assert_eq!(g.values()[i], g.values()[n - 1 - i].neg());
        }
        assert!((g.eval(&s("1")).unwrap().to_f64() + 1.0).abs() < 1e-30);
    }
}
