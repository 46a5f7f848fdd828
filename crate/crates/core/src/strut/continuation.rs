use serde::{Deserialize, Serialize};

use super::StrutProfile;
use crate::error::Result;

/// A converged state that a continuation can follow.
pub trait PathState {
    fn load(&self) -> f64;
    fn amplitude(&self) -> f64;
    fn energy(&self) -> f64;
}

impl PathState for StrutProfile {
    fn load(&self) -> f64 {
        self.load
    }
    fn amplitude(&self) -> f64 {
        StrutProfile::amplitude(self)
    }
    fn energy(&self) -> f64 {
        self.energy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub initial: f64,
    pub min: f64,
    pub max: f64,
    /// Step multiplier after a successful solve.
    pub growth: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            initial: 0.02,
            min: 1e-4,
            max: 0.05,
            growth: 1.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub load: f64,
    pub amplitude: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason")]
pub enum Termination {
    Completed,
    /// The amplitude steepened without bound in the load: the path turns
    /// back near `load`.
    Fold {
        load: f64,
        amplitude: f64,
    },
    MinStep {
        load: f64,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationPath<S> {
    pub states: Vec<S>,
    pub points: Vec<PathPoint>,
    pub termination: Termination,
}

impl<S> ContinuationPath<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("a path holds at least its start")
    }
}

fn point<S: PathState>(s: &S) -> PathPoint {
    PathPoint {
        load: s.load(),
        amplitude: s.amplitude(),
        energy: s.energy(),
    }
}

/// Natural-parameter continuation from a converged `start` to `target`.
/// `solve(load, previous)` refines the previous state at a new load; failed
/// steps are halved down to `control.min`.
pub fn continue_path<S, F>(
    start: S,
    target: f64,
    control: &StepControl,
    mut solve: F,
) -> ContinuationPath<S>
where
    S: PathState,
    F: FnMut(f64, &S) -> Result<S>,
{
    let mut points = vec![point(&start)];
    let mut states = vec![start];
    let mut step = control.initial.min(control.max);
    let mut slopes: Vec<f64> = Vec::new();
    loop {
        let here = states.last().expect("non-empty").load();
        let remaining = target - here;
        if remaining.abs() <= 1e-14 * target.abs().max(1.0) {
            return ContinuationPath {
                states,
                points,
                termination: Termination::Completed,
            };
        }
        let trial = if remaining.abs() <= step {
            target
        } else {
            here + step * remaining.signum()
        };
        match solve(trial, states.last().expect("non-empty")) {
            Ok(next) => {
                let prev = points.last().expect("non-empty");
                let pt = point(&next);
                slopes.push(((pt.amplitude - prev.amplitude) / (pt.load - prev.load)).abs());
                points.push(pt);
                states.push(next);
                step = (step * control.growth).min(control.max);
            }
            Err(e) => {
                step *= 0.5;
                if step < control.min {
                    let last = points.last().expect("non-empty");
                    let steepened = slopes.len() >= 2 && {
                        let mut sorted = slopes.clone();
                        sorted.sort_by(f64::total_cmp);
                        let median = sorted[sorted.len() / 2];
                        slopes[slopes.len() - 1] > 4.0 * median
                    };
                    let termination = if steepened {
                        Termination::Fold {
                            load: last.load,
                            amplitude: last.amplitude,
                        }
                    } else {
                        Termination::MinStep {
                            load: last.load,
                            message: e.to_string(),
                        }
                    };
                    return ContinuationPath {
                        states,
                        points,
                        termination,
                    };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[derive(Debug, Clone, PartialEq)]
    struct Toy {
        p: f64,
        x: f64,
    }

    impl PathState for Toy {
        fn load(&self) -> f64 {
            self.p
        }
        fn amplitude(&self) -> f64 {
            self.x
        }
        fn energy(&self) -> f64 {
            0.0
        }
    }

    /// Newton on `x² + p − 1 = 0` from the previous root; the branch folds
    /// at `p = 1`.
    fn toy_solve(p: f64, prev: &Toy) -> Result<Toy> {
        let mut x = prev.x;
        for _ in 0..30 {
            let f = x * x + p - 1.0;
            if f.abs() < 1e-14 {
                return Ok(Toy { p, x });
            }
            x -= f / (2.0 * x);
        }
        Err(Error::NewtonDivergence {
            iterations: 30,
            residual: (x * x + p - 1.0).abs(),
        })
    }

    #[test]
    fn completes_without_fold() {
        let path = continue_path(
            Toy { p: 0.0, x: 1.0 },
            0.5,
            &StepControl::default(),
            toy_solve,
        );
        assert_eq!(path.termination, Termination::Completed);
        assert_eq!(path.last().p, 0.5);
        assert!((path.last().x - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reports_fold_location() {
        let control = StepControl {
            min: 1e-7,
            ..Default::default()
        };
        let path = continue_path(Toy { p: 0.0, x: 1.0 }, 2.0, &control, toy_solve);
        match path.termination {
            Termination::Fold { load, amplitude } => {
                assert!((load - 1.0).abs() < 1e-4, "fold at {load}");
                assert!(amplitude < 1e-2);
            }
            other => panic!("expected a fold, got {other:?}"),
        }
    }

    #[test]
    fn reports_min_step_without_steepening() {
        let path = continue_path(
            Toy { p: 0.0, x: 1.0 },
            0.5,
            &StepControl::default(),
            |p, prev| {
                if p > 0.2 {
                    Err(Error::NewtonDivergence {
                        iterations: 1,
                        residual: 1.0,
                    })
                } else {
                    toy_solve(p, prev)
                }
            },
        );
        assert!(matches!(path.termination, Termination::MinStep { .. }));
        assert!(path.last().p <= 0.2);
    }
}
