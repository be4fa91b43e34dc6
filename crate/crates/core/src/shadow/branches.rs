//! Sets tracked together with the affine branches of an iterate.

use crate::intset::{self, IntervalSet, SetError};
use crate::plmap::PLMap;
use crate::scalar::Scalar;

/// A closed piece `[lo, hi]` on which `f^level(z) = a z + b`.
#[derive(Debug, Clone)]
pub(super) struct Branch {
    lo: Scalar,
    hi: Scalar,
    a: Scalar,
    b: Scalar,
}

impl Branch {
    fn at(&self, z: &Scalar) -> Scalar {
        &(&self.a * z) + &self.b
    }

    fn solve(&self, y: &Scalar) -> Result<Scalar, SetError> {
        Ok((y - &self.b).try_div(&self.a)?)
    }
}

/// A set split into affine branches of `f^level`, so that pulling a target back
/// from `level` costs one affine inverse per branch.
#[derive(Debug, Clone)]
pub(super) struct Branches {
    level: usize,
    parts: Vec<Branch>,
}

impl Branches {
    pub(super) fn new(w: &IntervalSet) -> Self {
        let parts = w
            .intervals()
            .iter()
            .map(|iv| Branch { lo: iv.lo.clone(), hi: iv.hi.clone(), a: Scalar::one(), b: Scalar::zero() })
            .collect();
        Branches { level: 0, parts }
    }

    pub(super) fn advance(&mut self, m: &PLMap, level: usize) -> Result<(), SetError> {
        let (p, v, sl) = (m.points(), m.values(), m.slopes());
        while self.level < level {
            let mut next = Vec::with_capacity(self.parts.len());
            for br in &self.parts {
                let (ya, yb) = (br.at(&br.lo), br.at(&br.hi));
                let (ylo, yhi) = if ya.try_le(&yb)? { (ya, yb) } else { (yb, ya) };
                let point = ylo == yhi;
                for i in intset::laps_meeting(m, &ylo, &yhi)? {
                    let c = if ylo.try_le(&p[i])? { p[i].clone() } else { ylo.clone() };
                    let d = if p[i + 1].try_le(&yhi)? { p[i + 1].clone() } else { yhi.clone() };
                    if !c.try_le(&d)? || (c == d && !point) {
                        continue;
                    }
                    let (lo, hi) = if point || br.a.is_zero() {
                        (br.lo.clone(), br.hi.clone())
                    } else {
                        let (zc, zd) = (br.solve(&c)?, br.solve(&d)?);
                        if zc.try_le(&zd)? {
                            (zc, zd)
                        } else {
                            (zd, zc)
                        }
                    };
                    let a = &sl[i] * &br.a;
                    let b = &v[i] + &(&sl[i] * &(&br.b - &p[i]));
                    next.push(Branch { lo, hi, a, b });
                    if point {
                        break;
                    }
                }
            }
            self.parts = next;
            self.level += 1;
        }
        Ok(())
    }

    /// Points whose image at `level` lies in `target`.
    pub(super) fn restrict(&self, target: &IntervalSet) -> Result<Branches, SetError> {
        let mut parts = Vec::new();
        for br in &self.parts {
            for iv in target.intervals() {
                if br.a.is_zero() {
                    if iv.contains(&br.b)? {
                        parts.push(br.clone());
                    }
                    continue;
                }
                let (z1, z2) = (br.solve(&iv.lo)?, br.solve(&iv.hi)?);
                let (z1, z2) = if z1.try_le(&z2)? { (z1, z2) } else { (z2, z1) };
                let lo = if br.lo.try_le(&z1)? { z1 } else { br.lo.clone() };
                let hi = if z2.try_le(&br.hi)? { z2 } else { br.hi.clone() };
                if lo.try_le(&hi)? {
                    parts.push(Branch { lo, hi, a: br.a.clone(), b: br.b.clone() });
                }
            }
        }
        Ok(Branches { level: self.level, parts })
    }

    pub(super) fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Points whose image at `level` equals `y`.
    pub(super) fn solutions(&self, y: &Scalar) -> Result<IntervalSet, SetError> {
        self.restrict(&IntervalSet::point(y.clone()))?.set()
    }

    pub(super) fn set(&self) -> Result<IntervalSet, SetError> {
        IntervalSet::from_intervals(
            self.parts.iter().map(|br| intset::Interval { lo: br.lo.clone(), hi: br.hi.clone() }).collect(),
        )
    }
}
