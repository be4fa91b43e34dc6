//! Three increasing homeomorphisms of `[-1, 1]` fixing `-1, 0, 1`, treated as
//! circle maps by identifying the endpoints. All are `x^3` on `[0, 1]`.
//!
//! Evaluation is enclosure-only. Each branch is increasing, so the image of an
//! interval is bracketed by the images of its endpoints. For the oscillating
//! branch the derivative is `1 + k (sin t + 2 pi cos t)` with
//! `k = 1/(2 pi sqrt 2)`, and `k sqrt(1 + 4 pi^2) < 1`.

use crate::scalar::{default_precision, transcendental, Dyadic, Enclosure, Scalar};

use super::{IntervalMap, MapError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothKind {
    /// `x^3` everywhere.
    Cube,
    /// `((2x + 1)^3 - 1)/2` on `[-1, 0)`.
    PiecewiseCubic,
    /// `x + x sin(2 pi ln|x|)/(2 pi sqrt 2)` on `[-1, 0)`.
    LogOscillation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothMap1D {
    pub kind: SmoothKind,
    pub prec: u32,
}

/// Distance on `[-1, 1]` with `-1` and `1` identified.
pub fn circle_dist(x: &Scalar, y: &Scalar) -> Scalar {
    let d = x.dist(y);
    let wrap = &Scalar::int(2) - &d;
    d.min_bound(&wrap)
}

impl SmoothMap1D {
    pub fn new(kind: SmoothKind) -> Self {
        SmoothMap1D { kind, prec: default_precision() }
    }

    pub fn with_prec(kind: SmoothKind, prec: u32) -> Self {
        SmoothMap1D { kind, prec }
    }

    fn left_point(&self, x: &Dyadic) -> Enclosure {
        let p = self.prec;
        let xe = Enclosure::point(x.clone(), p);
        match self.kind {
            SmoothKind::Cube => xe.powi(3),
            SmoothKind::PiecewiseCubic => {
                let one = Enclosure::from_int(1, p);
                xe.mul_pow2(1).add(&one).powi(3).sub(&one).mul_pow2(-1)
            }
            SmoothKind::LogOscillation => {
                if x.is_zero() {
                    return xe;
                }
                let w = p + 16;
                let xw = Enclosure::point(x.clone(), w);
                let two_pi = transcendental::pi(w).mul_pow2(1);
                let arg = two_pi.mul(&transcendental::ln(&xw.neg()).expect("x < 0"));
                let k = two_pi.mul(&transcendental::sqrt_int(2, w));
                let osc = xw.mul(&transcendental::sin(&arg)).div(&k).expect("k > 0");
                xw.add(&osc).with_prec(p)
            }
        }
    }

    /// Image of the enclosure `x`, clipped to `[-1, 1]`.
    pub fn eval_enclosure(&self, x: &Enclosure) -> Result<Enclosure, MapError> {
        let p = self.prec.max(x.prec());
        let dom = Enclosure::new(Dyadic::from_int(-1), Dyadic::from_int(1), p);
        let x = x.intersect(&dom).ok_or_else(|| MapError::OutOfDomain(x.to_string()))?;
        let zero = Dyadic::zero();
        let mut parts: Vec<Enclosure> = Vec::new();
        if x.lo().signum() < 0 {
            let hi = x.hi().clone().min(zero.clone());
            let a = self.left_point(x.lo());
            let b = if &hi == x.lo() { a.clone() } else { self.left_point(&hi) };
            parts.push(Enclosure::new(a.lo().clone(), b.hi().clone(), p));
        }
        if x.hi().signum() >= 0 {
            let lo = x.lo().clone().max(zero);
            parts.push(Enclosure::new(lo, x.hi().clone(), p).powi(3));
        }
        let mut out = parts[0].clone();
        for q in &parts[1..] {
            out = out.hull(q);
        }
        Ok(out.intersect(&dom).unwrap_or(out))
    }
}

impl IntervalMap for SmoothMap1D {
    fn domain(&self) -> (Scalar, Scalar) {
        (Scalar::int(-1), Scalar::int(1))
    }

    fn eval(&self, x: &Scalar) -> Result<Scalar, MapError> {
        let e = x.to_enclosure(self.prec.max(x.precision().unwrap_or(0)));
        Ok(Scalar::Enclosure(self.eval_enclosure(&e)?))
    }

    fn lipschitz(&self) -> f64 {
        3.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn cube_branch_at_half() {
        for kind in [SmoothKind::Cube, SmoothKind::PiecewiseCubic, SmoothKind::LogOscillation] {
            let m = SmoothMap1D::new(kind);
            let y = m.eval(&s("1/2")).unwrap();
            assert!(y.to_enclosure(128).contains_rational(&BigRational::new(1.into(), 8.into())));
        }
    }

    #[test]
    fn fixed_points() {
        for kind in [SmoothKind::Cube, SmoothKind::PiecewiseCubic, SmoothKind::LogOscillation] {
            let m = SmoothMap1D::new(kind);
            for x in ["-1", "0", "1"] {
                let y = m.eval(&s(x)).unwrap().to_enclosure(128);
                assert!(y.contains_rational(s(x).as_rational().unwrap()), "{kind:?} at {x}");
            }
        }
    }

    #[test]
    fn increasing_on_a_grid() {
        for kind in [SmoothKind::Cube, SmoothKind::PiecewiseCubic, SmoothKind::LogOscillation] {
            let m = SmoothMap1D::new(kind);
            let mut prev: Option<Enclosure> = None;
            for i in -400..=400 {
                let y = m.eval(&Scalar::ratio(i, 400)).unwrap().to_enclosure(128);
                if let Some(p) = &prev {
                    assert!(p.hi() < y.lo() || (i == 0 || i == 1), "{kind:?} at {i}");
                }
                prev = Some(y);
            }
        }
    }

    #[test]
    fn oscillation_fixed_points_on_the_left() {
        let m = SmoothMap1D::new(SmoothKind::LogOscillation);
        let x = Scalar::Enclosure(transcendental::exp(&Enclosure::from_int(-3, 160)).neg());
        let y = m.eval(&x).unwrap();
        assert!((y.to_f64() - x.to_f64()).abs() < 1e-30);
    }

    #[test]
    fn circle_metric_wraps() {
        assert_eq!(circle_dist(&s("-9/10"), &s("9/10")), s("1/5"));
        assert_eq!(circle_dist(&s("0"), &s("1/2")), s("1/2"));
    }
}
