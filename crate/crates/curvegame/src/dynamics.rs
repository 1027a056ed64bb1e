//! Iterated extremal best-response dynamics. Seeded from the all-ones
//! (greatest) or all-zeros (least) profile, the synchronous iteration is
//! coordinatewise monotone and converges to the extremal pure Nash
//! equilibria, bracketing every equilibrium of the game.

use crate::game::{GameError, GameParams, Profile};
use crate::response::{best_response, ResponseError};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("no convergence after {iterations} iterations; last two steps {previous:?} -> {last:?}")]
    NonConvergence {
        previous: Profile,
        last: Profile,
        iterations: usize,
    },
    #[error("default-seeded trajectory lost monotonicity at step {step}")]
    OrderViolation { step: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Which selection of the set-valued reply to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    Greatest,
    Least,
}

/// Update schedule for one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// All players update simultaneously (the tested default).
    Synchronous,
    /// Players update one at a time in index order within each iteration.
    RoundRobin,
}

/// A recorded iteration path.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Seed followed by one profile per iteration (the last one is `limit`).
    pub steps: Vec<Profile>,
    pub converged: bool,
    pub limit: Profile,
    pub iterations: usize,
}

fn select(params: &GameParams, i: usize, xbar: f64, which: Extremal) -> Result<f64, DynamicsError> {
    let br = best_response(params, i, xbar)?;
    Ok(match which {
        Extremal::Greatest => br.greatest(),
        Extremal::Least => br.least(),
    })
}

fn max_norm(a: &Profile, b: &Profile) -> f64 {
    a.efforts()
        .iter()
        .zip(b.efforts())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Extremal iteration with the default seed, schedule, tolerance, and cap.
pub fn iterate_extremal(params: &GameParams, which: Extremal) -> Result<Trajectory, DynamicsError> {
    iterate_extremal_with(
        params,
        which,
        None,
        Schedule::Synchronous,
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
    )
}

/// Extremal iteration with full control. When `seed` is `None`, the default
/// extremal seed is used (all ones for `Greatest`, all zeros for `Least`)
/// and the trajectory is additionally checked for coordinatewise
/// monotonicity, which the default seeds guarantee.
pub fn iterate_extremal_with(
    params: &GameParams,
    which: Extremal,
    seed: Option<Profile>,
    schedule: Schedule,
    tol: f64,
    max_iter: usize,
) -> Result<Trajectory, DynamicsError> {
    params.require_multiplayer()?;
    if !(tol > 0.0) {
        return Err(DynamicsError::BadTolerance(tol));
    }
    let enforce_monotone = seed.is_none();
    let current = match seed {
        Some(p) => {
            if p.len() != params.n() {
                return Err(GameError::ProfileLengthMismatch {
                    len: p.len(),
                    n: params.n(),
                }
                .into());
            }
            p
        }
        None => Profile::constant(
            params.n(),
            match which {
                Extremal::Greatest => 1.0,
                Extremal::Least => 0.0,
            },
        )?,
    };
    let mut steps = vec![current];
    for iteration in 1..=max_iter {
        let current = steps.last().unwrap();
        let next = match schedule {
            Schedule::Synchronous => {
                let mut efforts = Vec::with_capacity(params.n());
                for i in 0..params.n() {
                    efforts.push(select(params, i, current.opposing_mean(i)?, which)?);
                }
                Profile::new(efforts)?
            }
            Schedule::RoundRobin => {
                let mut efforts = current.efforts().to_vec();
                for i in 0..params.n() {
                    let scratch = Profile::new(efforts.clone())?;
                    efforts[i] = select(params, i, scratch.opposing_mean(i)?, which)?;
                }
                Profile::new(efforts)?
            }
        };
        if enforce_monotone {
            let ordered = next
                .efforts()
                .iter()
                .zip(current.efforts())
                .all(|(&new, &old)| match which {
                    Extremal::Greatest => new <= old + 1e-12,
                    Extremal::Least => new >= old - 1e-12,
                });
            if !ordered {
                return Err(DynamicsError::OrderViolation { step: iteration });
            }
        }
        let distance = max_norm(&next, current);
        steps.push(next);
        if distance <= tol {
            let limit = steps.last().unwrap().clone();
            return Ok(Trajectory {
                steps,
                converged: true,
                limit,
                iterations: iteration,
            });
        }
    }
    let last = steps.pop().unwrap();
    let previous = steps.pop().unwrap();
    Err(DynamicsError::NonConvergence {
        previous,
        last,
        iterations: max_iter,
    })
}

/// Greatest and least rationalizable profiles: the limits of the two
/// default-seeded extremal iterations. Every pure Nash equilibrium lies
/// coordinatewise inside the returned bracket.
pub fn rationalizable_bounds(params: &GameParams) -> Result<(Profile, Profile), DynamicsError> {
    let low = iterate_extremal(params, Extremal::Least)?.limit;
    let high = iterate_extremal(params, Extremal::Greatest)?.limit;
    Ok((low, high))
}
