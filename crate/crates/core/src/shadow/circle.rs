//! A pseudo-orbit of the oscillating circle map that is δ-close to true orbits
//! at every step but is not asymptotically traced by any of them.
//!
//! The left branch fixes `-e^{-k/2}` for every `k`, and these accumulate at 0.
//! The pseudo-orbit follows the orbit of `1/2` down towards 0, jumps to 0, then
//! to a left fixed point `x_δ` within δ of 0 and stays there. A point that
//! `1/2`-shadows the head must start in `[0, 1)`, where `x^3` drives it to 0.

use crate::plmap::{circle_dist, IntervalMap, SmoothKind, SmoothMap1D};
use crate::scalar::{transcendental, Scalar};

use super::ShadowError;

#[derive(Debug, Clone)]
pub struct CircleReport {
    pub delta: Scalar,
    /// `x_δ = -e^{-k/2}`.
    pub k: u32,
    pub x_delta: Scalar,
    /// Length of the head: the pseudo-orbit starts with `1/2, ..., φ^head(1/2)`.
    pub head: usize,
    pub horizon: usize,
    /// Largest step error of the displayed sequence (upper bound).
    pub max_step_error: f64,
    pub is_pseudo_orbit: bool,
    /// Grid points tested and those not ruled out as `1/2`-shadows of the head.
    pub grid: usize,
    pub candidates: usize,
    pub candidates_in_unit: bool,
    /// `1/2` itself shadows the head.
    pub head_shadowed: bool,
    /// Lower bound on `d(φ^i(z), x_δ)` over candidates `z` and `horizon/2 <= i <= horizon`.
    pub tail_floor: f64,
    pub holds: bool,
}

impl CircleReport {
    pub fn to_text(&self) -> String {
        format!(
            "delta: {}\nk: {}\nx_delta: {:.6e}\nhead: {}\nhorizon: {}\nmax_step_error: {:.3e}\npseudo_orbit: {}\n\
             grid: {}\ncandidates: {}\ncandidates_in_unit: {}\nhead_shadowed: {}\ntail_floor: {:.6e}\nholds: {}\n",
            self.delta,
            self.k,
            self.x_delta.to_f64(),
            self.head,
            self.horizon,
            self.max_step_error,
            self.is_pseudo_orbit,
            self.grid,
            self.candidates,
            self.candidates_in_unit,
            self.head_shadowed,
            self.tail_floor,
            self.holds
        )
    }
}

fn lower(x: &Scalar, prec: u32) -> f64 {
    x.to_enclosure(prec).lo().to_f64()
}

fn upper(x: &Scalar, prec: u32) -> f64 {
    x.to_enclosure(prec).hi().to_f64()
}

/// Builds the pseudo-orbit for `delta` out to `horizon` and tests `grid` starting points.
pub fn circle_slimit_failure_demo(delta: &Scalar, horizon: usize, grid: usize) -> Result<CircleReport, ShadowError> {
    let prec = 192;
    let phi = SmoothMap1D::with_prec(SmoothKind::LogOscillation, prec);
    let half = Scalar::ratio(1, 2);
    // x_delta = -e^{-k/2} with e^{-k/2} < delta
    let mut k = 1u32;
    let x_delta = loop {
        let e = transcendental::exp(&Scalar::ratio(-(k as i64), 2).to_enclosure(prec));
        if Scalar::Enclosure(e.clone()).cmp3(delta) == crate::scalar::Cmp3::Less {
            break Scalar::Enclosure(e.neg());
        }
        k += 1;
        if k > 400 {
            return Err(ShadowError::Invalid(format!("no left fixed point within {delta}")));
        }
    };
    let xd = x_delta.abs();
    let xd_f = lower(&xd, prec);
    // head: 1/2, φ(1/2), ..., φ^N(1/2) with φ^{N+1}(1/2) < delta
    let mut head = vec![half.clone()];
    loop {
        let next = phi.eval(head.last().unwrap())?;
        if next.certainly_le(delta) && next.cmp3(delta) == crate::scalar::Cmp3::Less {
            break;
        }
        head.push(next);
    }
    let n = head.len() - 1;
    let mut seq = head.clone();
    seq.push(Scalar::zero());
    while seq.len() <= horizon {
        seq.push(x_delta.clone());
    }
    seq.truncate(horizon + 1);
    let mut max_err = 0.0f64;
    let mut is_po = true;
    for i in 0..seq.len().min(n + 4) - 1 {
        let e = circle_dist(&phi.eval(&seq[i])?, &seq[i + 1]);
        max_err = max_err.max(upper(&e, prec));
        if !e.certainly_le(delta) {
            is_po = false;
        }
    }
    // the tail is constant at a fixed point, so its step error is the same at every later step
    let tail_err = circle_dist(&phi.eval(&x_delta)?, &x_delta);
    max_err = max_err.max(upper(&tail_err, prec));
    is_po &= tail_err.certainly_le(delta);

    let shadows_head = |z: &Scalar| -> Result<Option<bool>, ShadowError> {
        let mut y = z.clone();
        for (t, h) in head.iter().enumerate() {
            if t > 0 {
                y = phi.eval(&y)?;
            }
            let d = circle_dist(&y, h);
            if !d.certainly_le(&half) {
                if half.cmp3(&d) == crate::scalar::Cmp3::Less {
                    return Ok(Some(false));
                }
                return Ok(None);
            }
        }
        Ok(Some(true))
    };
    let head_shadowed = shadows_head(&half)? == Some(true);
    let mut candidates = 0;
    let mut in_unit = true;
    let mut floor = f64::INFINITY;
    let from = (horizon / 2).max(n + 2);
    for g in 0..grid {
        let z = Scalar::ratio(2 * g as i64 - grid as i64, grid as i64);
        if shadows_head(&z)? == Some(false) {
            continue;
        }
        candidates += 1;
        let nonneg = z.signum().is_some_and(|s| s >= 0);
        if !(nonneg && z.certainly_le(&Scalar::one()) && z != Scalar::one()) {
            in_unit = false;
            continue;
        }
        // on [0, 1) the orbit decreases; once below |x_δ|/2 it stays there
        let mut y = z.clone();
        let mut i = 0;
        let mut local = f64::INFINITY;
        while i < horizon {
            if upper(&y, prec) < xd_f / 2.0 {
                if i <= horizon {
                    local = local.min(xd_f - upper(&y, prec));
                }
                break;
            }
            if i >= from {
                local = local.min(lower(&circle_dist(&y, &x_delta), prec));
            }
            y = phi.eval(&y)?;
            i += 1;
        }
        floor = floor.min(local);
    }
    let holds = is_po && in_unit && head_shadowed && floor >= xd_f / 2.0;
    Ok(CircleReport {
        delta: delta.clone(),
        k,
        x_delta,
        head: n,
        horizon,
        max_step_error: max_err,
        is_pseudo_orbit: is_po,
        grid,
        candidates,
        candidates_in_unit: in_unit,
        head_shadowed,
        tail_floor: floor,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_demo_holds() {
        let r = circle_slimit_failure_demo(&Scalar::ratio(1, 10), 200, 200).unwrap();
        assert!(r.is_pseudo_orbit, "{}", r.to_text());
        assert!(r.candidates_in_unit && r.head_shadowed, "{}", r.to_text());
        assert!(r.holds, "{}", r.to_text());
        assert_eq!(r.k, 5);
    }
}
