//! Solver library for the n-player "curved exam" effort game.
//!
//! Each of the `n` students picks an effort level in `[0, 1]`. If the class
//! mean falls short of the instructor's target `m`, everyone gets the same
//! top-up so the mean lands exactly on `m`; curved grades above 100% are not
//! truncated. Preferences are Cobb-Douglas over (grade, leisure) with each
//! student's grade elasticity `alpha_i` doubling as their uncurved grade.
//!
//! The game has strategic complements and a jump discontinuity in every
//! player's best reply, so there can be up to `n + 2` pure Nash equilibria:
//! the no-curve ("try-hard") profile, the curved interior profile, and the
//! "k-don't-care" profiles in which the k weakest students skip the exam.
//! This crate computes all of them in closed form, verifies them as fixed
//! points of the exact best-response correspondence, and cross-checks the
//! analytic solutions against brute-force grid oracles.
//!
//! Modules:
//! - [`game`]: parameters, profiles, grades, payoffs, the hardness order.
//! - [`response`]: region decomposition and the exact set-valued best reply.
//! - [`equilibrium`]: closed-form candidates, existence tests, enumeration.
//! - [`dynamics`]: iterated extremal best responses with trajectory capture.
//! - [`oracle`]: grid-search reference implementations used for verification.
//!
//! The grid oracles are data-parallel via rayon when the default `parallel`
//! feature is enabled; `*_seq` variants always run single-threaded.

pub mod dynamics;
pub mod equilibrium;
pub mod game;
pub mod oracle;
pub mod response;

pub use dynamics::{iterate_extremal, rationalizable_bounds, Extremal, Trajectory};
pub use equilibrium::{enumerate_equilibria, EquilibriumKind, EquilibriumRecord};
pub use game::{GameError, GameParams, Profile};
pub use response::{best_response, BestResponse, RegionTag};
