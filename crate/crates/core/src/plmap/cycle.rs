//! Critical orbits: exact recurrence detection.

use std::collections::HashMap;

use crate::scalar::Scalar;

use super::{MapError, PLMap};

/// A point of a critical orbit: either a named breakpoint or a bare value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrbitState {
    Breakpoint(usize),
    Value(Scalar),
}

impl OrbitState {
    pub fn value(&self, m: &PLMap) -> Scalar {
        match self {
            OrbitState::Breakpoint(i) => m.points()[*i].clone(),
            OrbitState::Value(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleVerdict {
    EventuallyPeriodic { preperiod: usize, period: usize },
    /// No recurrence within the step budget.
    Escaped { steps: usize },
    /// An enclosure-valued orbit point made recurrence undecidable.
    Undecided { steps: usize },
}

#[derive(Debug, Clone)]
pub struct CriticalOrbit {
    pub point: usize,
    pub verdict: CycleVerdict,
    /// States visited, starting at the critical point itself.
    pub orbit: Vec<OrbitState>,
}

fn step(m: &PLMap, s: &OrbitState) -> Result<OrbitState, MapError> {
    let v = match s {
        OrbitState::Breakpoint(i) => {
            if let Some(j) = m.value_ref(*i) {
                return Ok(OrbitState::Breakpoint(j));
            }
            m.values()[*i].clone()
        }
        OrbitState::Value(x) => m.eval(x)?,
    };
    Ok(match m.breakpoint_index(&v) {
        Some(j) => OrbitState::Breakpoint(j),
        None => OrbitState::Value(v),
    })
}

/// Follow every critical point for up to `max_steps` steps.
pub fn detect_critical_cycle(m: &PLMap, max_steps: usize) -> Result<Vec<CriticalOrbit>, MapError> {
    let mut out = Vec::new();
    for point in 0..m.points().len() {
        let mut seen: HashMap<OrbitState, usize> = HashMap::new();
        let mut orbit = vec![OrbitState::Breakpoint(point)];
        let mut verdict = None;
        let mut blurred = false;
        for n in 0..=max_steps {
            let cur = &orbit[n];
            let certain = match cur {
                OrbitState::Breakpoint(_) => true,
                OrbitState::Value(v) => v.is_exact(),
            };
            if certain {
                if let Some(&k) = seen.get(cur) {
                    verdict = Some(CycleVerdict::EventuallyPeriodic { preperiod: k, period: n - k });
                    orbit.pop();
                    break;
                }
                seen.insert(cur.clone(), n);
            } else {
                blurred = true;
            }
            if n == max_steps {
                break;
            }
            let next = step(m, cur)?;
            orbit.push(next);
        }
        let verdict = verdict.unwrap_or(if blurred {
            CycleVerdict::Undecided { steps: max_steps }
        } else {
            CycleVerdict::Escaped { steps: max_steps }
        });
        out.push(CriticalOrbit { point, verdict, orbit });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plmap::{make_nucleus_family, make_tent};

    fn verdict_at_half(s: Scalar) -> CycleVerdict {
        let m = make_tent(&s).unwrap();
        detect_critical_cycle(&m, 200).unwrap()[1].verdict.clone()
    }

    #[test]
    fn full_tent_critical_orbit() {
        assert_eq!(verdict_at_half(Scalar::int(2)), CycleVerdict::EventuallyPeriodic { preperiod: 2, period: 1 });
    }

    #[test]
    fn golden_three_cycle() {
        assert_eq!(verdict_at_half(Scalar::golden()), CycleVerdict::EventuallyPeriodic { preperiod: 0, period: 3 });
    }

    #[test]
    fn three_halves_never_recurs() {
        // numerators stay odd while denominators double
        assert_eq!(verdict_at_half(Scalar::ratio(3, 2)), CycleVerdict::Escaped { steps: 200 });
    }

    #[test]
    fn nucleus_orbits_are_symbolic() {
        let m = make_nucleus_family(0).unwrap();
        for o in detect_critical_cycle(&m, 100).unwrap() {
            assert!(matches!(o.verdict, CycleVerdict::EventuallyPeriodic { .. }), "{o:?}");
        }
    }
}
