//! δ-chains found on a grid, and side invariance of true orbits.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plmap::{two_sided_at, IntervalMap, MapError, PLMap};
use crate::scalar::{Enclosure, Scalar};

use super::{PseudoOrbit, ShadowError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainOutcome {
    /// A certified δ-pseudo-orbit from `a` to `b`.
    Found(PseudoOrbit),
    /// Nothing found at this resolution; not a proof that no chain exists.
    NotFound { cells: usize },
}

fn f64_bounds(e: &Enclosure) -> (f64, f64) {
    let (lo, hi) = (e.lo().to_f64(), e.hi().to_f64());
    let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    (lo - pad, hi + pad)
}

/// Breadth-first search over grid cells of width at most `resolution`.
///
/// Cell `i` links to cell `k` when the image of cell `i`, inflated by
/// `delta - w (2L + 1)/2`, meets cell `k` (`w` the cell width, `L` the Lipschitz
/// bound); this forces `|f(c_i) - c_k| <= delta` between centers. The chain
/// `a, c_{i_1}, ..., c_{i_n}, b` is re-verified before it is returned.
pub fn chain_connect(
    m: &dyn IntervalMap,
    a: &Scalar,
    b: &Scalar,
    delta: &Scalar,
    resolution: &Scalar,
) -> Result<ChainOutcome, ShadowError> {
    let lip = m.lipschitz();
    let (dlo, dhi) = m.domain();
    let (df, rf) = (delta.to_f64(), resolution.to_f64());
    if !(rf > 0.0 && rf * (lip + 1.0) < df) {
        return Err(ShadowError::Invalid(format!("resolution must be below delta/(L + 1) with L = {lip}")));
    }
    let direct = PseudoOrbit::uniform(vec![a.clone(), b.clone()], delta.clone());
    if direct.verify(m)? {
        return Ok(ChainOutcome::Found(direct));
    }
    let span = &dhi - &dlo;
    let cells = (span.to_f64() / rf).ceil() as usize;
    let w = span.try_div(&Scalar::int(cells as i64))?;
    let (lof, wf) = (dlo.to_f64(), w.to_f64());
    let rho = df - wf * (2.0 * lip + 1.0) / 2.0;
    let center = |i: usize| &dlo + &(&w * &Scalar::ratio(2 * i as i64 + 1, 2));
    let prec = crate::scalar::default_precision();
    let cell_image = |i: usize| -> Result<(f64, f64), MapError> {
        let l = (&dlo + &(&w * &Scalar::int(i as i64))).to_enclosure(prec);
        let r = (&dlo + &(&w * &Scalar::int(i as i64 + 1))).to_enclosure(prec);
        let cell = Enclosure::new(l.lo().clone(), r.hi().clone(), prec);
        let y = m.eval(&Scalar::Enclosure(cell))?.to_enclosure(prec);
        Ok(f64_bounds(&y))
    };
    let clamp_cell = |t: f64| -> usize { (t.floor().max(0.0) as usize).min(cells - 1) };
    let close = |x: &Scalar, y: &Scalar| -> Result<bool, MapError> { Ok(m.eval(x)?.dist(y).certainly_le(delta)) };
    let mut parent: Vec<Option<usize>> = vec![None; cells];
    let mut seen = vec![false; cells];
    let mut queue = VecDeque::new();
    let (flo, fhi) = f64_bounds(&m.eval(a)?.to_enclosure(prec));
    let start_lo = clamp_cell((flo - df - lof) / wf - 0.5);
    let start_hi = clamp_cell((fhi + df - lof) / wf + 0.5);
    for k in start_lo..=start_hi {
        if close(a, &center(k))? {
            seen[k] = true;
            queue.push_back(k);
        }
    }
    while let Some(i) = queue.pop_front() {
        if close(&center(i), b)? {
            let mut path = vec![i];
            while let Some(p) = parent[*path.last().unwrap()] {
                path.push(p);
            }
            let mut points = vec![a.clone()];
            points.extend(path.iter().rev().map(|&k| center(k)));
            points.push(b.clone());
            let po = PseudoOrbit::uniform(points, delta.clone());
            if let Some(bad) = po.first_violation(m)? {
                return Err(ShadowError::Invalid(format!("grid chain fails verification at step {bad}")));
            }
            return Ok(ChainOutcome::Found(po));
        }
        let (ylo, yhi) = cell_image(i)?;
        let k0 = clamp_cell((ylo - rho - lof) / wf);
        let k1 = clamp_cell((yhi + rho - lof) / wf);
        for k in k0..=k1 {
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some(i);
                queue.push_back(k);
            }
        }
    }
    Ok(ChainOutcome::NotFound { cells })
}

/// Smallest nucleus depth whose two-sided map has its innermost breakpoint within `delta/2` of 0.
///
/// A truncated map only lets δ-chains reach the origin once its copies shrink below δ.
pub fn two_sided_depth(delta: &Scalar, max_depth: usize) -> Result<usize, ShadowError> {
    let half = delta * &Scalar::ratio(1, 2);
    for depth in 0..=max_depth {
        let g = two_sided_at(depth, 128)?;
        let inner = g.points().iter().filter(|p| p.signum() == Some(1)).fold(Scalar::one(), |a, p| {
            if p.certainly_le(&a) {
                p.clone()
            } else {
                a
            }
        });
        if inner.certainly_le(&half) {
            return Ok(depth);
        }
    }
    Err(ShadowError::Invalid(format!("no depth up to {max_depth} reaches {delta}")))
}

const WIDE: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideReport {
    pub orbits: usize,
    pub steps: usize,
    /// Orbits whose sign provably changed.
    pub sign_changes: usize,
    /// Orbits whose sign could not be decided even at the precision cap.
    pub unresolved: usize,
    /// Highest working precision used.
    pub precision: u32,
}

/// Follows `orbits` random true orbits of `m^power` for `steps` steps and checks
/// that none changes sign. `build(prec)` constructs the map at a given precision;
/// precision doubles whenever a sign becomes undecidable, or an orbit point's
/// enclosure grows wider than `2^-20` while `max_prec` allows it.
pub fn side_invariance(
    build: &dyn Fn(u32) -> Result<PLMap, MapError>,
    power: usize,
    orbits: usize,
    steps: usize,
    seed: u64,
    max_prec: u32,
) -> Result<SideReport, ShadowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prec = 256u32;
    let mut map = build(prec)?;
    let mut report = SideReport { orbits, steps, sign_changes: 0, unresolved: 0, precision: prec };
    for _ in 0..orbits {
        let mut k: i64 = 0;
        while k == 0 {
            k = rng.gen_range(-(1i64 << 30)..=(1i64 << 30));
        }
        let x0 = Scalar::ratio(k, 1 << 30);
        let sign = x0.signum();
        'retry: loop {
            let mut x = x0.clone();
            for _ in 0..steps {
                x = map.iterate(&x, power)?;
                if prec * 2 <= max_prec && x.as_enclosure().is_some_and(|e| e.width().to_f64() > WIDE) {
                    prec *= 2;
                    map = build(prec)?;
                    report.precision = prec;
                    continue 'retry;
                }
                match x.signum() {
                    s if s == sign => {}
                    None => {
                        if prec * 2 > max_prec {
                            report.unresolved += 1;
                            break 'retry;
                        }
                        prec *= 2;
                        map = build(prec)?;
                        report.precision = prec;
                        continue 'retry;
                    }
                    Some(_) => {
                        report.sign_changes += 1;
                        break 'retry;
                    }
                }
            }
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::{make_tent, Power};

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn fixed_point_chain() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        let p = s("2/3");
        match chain_connect(&t, &p, &p, &s("1/100"), &s("1/1000")).unwrap() {
            ChainOutcome::Found(po) => assert_eq!(po.points, vec![p.clone(), p]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tent_chain_is_certified() {
        let t = make_tent(&Scalar::int(2)).unwrap();
        match chain_connect(&t, &s("1/10"), &s("3/10"), &s("1/100"), &s("1/400")).unwrap() {
            ChainOutcome::Found(po) => assert!(po.verify(&t).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_sided_square_crosses_origin() {
        let depth = two_sided_depth(&s("1/100"), 40).unwrap();
        assert_eq!(depth, 9);
        let g = two_sided_at(depth, 128).unwrap();
        let g2 = Power { map: &g, n: 2 };
        let out = chain_connect(&g2, &s("-1/2"), &s("1/3"), &s("1/100"), &s("1/4000")).unwrap();
        match out {
            ChainOutcome::Found(po) => {
                assert!(po.verify(&g2).unwrap());
                assert!(po.points.iter().any(|p| p.signum() == Some(1)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn short_two_sided_orbits_keep_their_side() {
        let r = side_invariance(&|p| two_sided_at(0, p), 2, 5, 40, 1, 1 << 12).unwrap();
        assert_eq!((r.sign_changes, r.unresolved), (0, 0));
    }
}
