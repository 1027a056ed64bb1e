//! Best-response analysis: region decomposition of the opposing mean,
//! dominated-strategy bounds, the indifference point `J_i`, and the exact
//! set-valued reply correspondence.

use crate::game::{GameError, GameParams};
use thiserror::Error;

/// Opposing means within this distance of `J_i` produce the two-valued reply.
pub const JUMP_TOL: f64 = 1e-9;

/// Errors raised by best-response computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResponseError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("opposing mean {0} lies outside [0, 1]")]
    OpposingMeanOutOfRange(f64),
    #[error("curve cutoff is only defined in the make-or-break region; opposing mean {xbar} is tagged {region:?}")]
    OutsideMakeOrBreak { xbar: f64, region: RegionTag },
    #[error("indifference function undefined at z = {z}: non-positive base")]
    NonPositiveBase { z: f64 },
    #[error("jump point self-check failed for player {player}: J = {jump}, residual {residual}")]
    JumpInconsistent {
        player: usize,
        jump: f64,
        residual: f64,
    },
    #[error("jump point {jump} escapes its bracketing interval [{lo}, {hi}]")]
    JumpOutsideBracket { jump: f64, lo: f64, hi: f64 },
}

/// Where an opposing mean lands relative to player `i`'s incentives.
///
/// `NoShowSub` is the low sub-interval where the reply is exactly 0; it is
/// carved out of `CurveMade` (and can reach into `MakeOrBreak` for very low
/// abilities). Some tags are unreachable for some parameters because their
/// intervals, intersected with `[0, 1]`, are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    /// The curve is broken no matter what player `i` does.
    CurveBroken,
    /// Player `i`'s own effort decides whether the curve activates.
    MakeOrBreak,
    /// The curve is active no matter what player `i` does.
    CurveMade,
    /// So little opposing effort that player `i`'s best reply is no effort.
    NoShowSub,
}

/// The reply set at one opposing mean: one effort level, or two at the
/// indifference point `J_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    /// One or two replies, sorted ascending. Always a subset of
    /// `{0, x_low, alpha_i}` and never above `alpha_i`.
    pub replies: Vec<f64>,
    pub region: RegionTag,
    /// `Some(J_i)` when the opposing mean sits at the indifference point.
    pub jump: Option<f64>,
}

impl BestResponse {
    /// Largest element of the reply set.
    pub fn greatest(&self) -> f64 {
        *self.replies.last().unwrap()
    }

    /// Smallest element of the reply set.
    pub fn least(&self) -> f64 {
        self.replies[0]
    }
}

fn check_xbar(xbar: f64) -> Result<(), ResponseError> {
    if (0.0..=1.0).contains(&xbar) {
        Ok(())
    } else {
        Err(ResponseError::OpposingMeanOutOfRange(xbar))
    }
}

/// Opposing mean below which player `i`'s reply is exactly zero:
/// `nm/(n-1) - alpha_i/(1-alpha_i)`. May be negative (unreachable).
pub fn no_show_bound(params: &GameParams, i: usize) -> Result<f64, ResponseError> {
    params.require_multiplayer()?;
    let alpha = params.ability(i)?;
    let n = params.n() as f64;
    let m = params.target_mean();
    Ok(n * m / (n - 1.0) - alpha / (1.0 - alpha))
}

/// Tags the opposing mean per the interval decomposition. The no-show
/// sub-interval is checked before the curve-made test because for small
/// abilities it can extend past the curve-made boundary.
pub fn classify_opposing_mean(
    params: &GameParams,
    i: usize,
    xbar_minus_i: f64,
) -> Result<RegionTag, ResponseError> {
    params.require_multiplayer()?;
    params.check_player(i)?;
    check_xbar(xbar_minus_i)?;
    let n = params.n() as f64;
    let m = params.target_mean();
    let broken_above = n * m / (n - 1.0);
    let made_below = (n * m - 1.0) / (n - 1.0);
    if xbar_minus_i > broken_above {
        Ok(RegionTag::CurveBroken)
    } else if xbar_minus_i <= no_show_bound(params, i)? {
        Ok(RegionTag::NoShowSub)
    } else if xbar_minus_i < made_below {
        Ok(RegionTag::CurveMade)
    } else {
        Ok(RegionTag::MakeOrBreak)
    }
}

/// The effort level that lands the class mean exactly on the target:
/// `nm - (n-1) * xbar_minus_i`. Only meaningful in the make-or-break region.
pub fn curve_cutoff(params: &GameParams, i: usize, xbar_minus_i: f64) -> Result<f64, ResponseError> {
    let region = classify_opposing_mean(params, i, xbar_minus_i)?;
    if region != RegionTag::MakeOrBreak {
        return Err(ResponseError::OutsideMakeOrBreak {
            xbar: xbar_minus_i,
            region,
        });
    }
    let n = params.n() as f64;
    Ok(n * params.target_mean() - (n - 1.0) * xbar_minus_i)
}

/// Indifference function whose unique zero is the jump point:
/// `phi(z) = (m + ((n-1)/n)(1-z))^a * (1 + nm/(n-1) - z)^(1-a) - 1`.
/// Strictly decreasing on its domain.
pub fn phi(params: &GameParams, i: usize, z: f64) -> Result<f64, ResponseError> {
    params.require_multiplayer()?;
    let alpha = params.ability(i)?;
    let n = params.n() as f64;
    let m = params.target_mean();
    let base_low = m + (n - 1.0) / n * (1.0 - z);
    let base_high = 1.0 + n * m / (n - 1.0) - z;
    if base_low <= 0.0 || base_high <= 0.0 {
        return Err(ResponseError::NonPositiveBase { z });
    }
    Ok(base_low.powf(alpha) * base_high.powf(1.0 - alpha) - 1.0)
}

/// Bracketing interval guaranteed to contain the jump point.
pub fn jump_bracket(params: &GameParams, i: usize) -> Result<(f64, f64), ResponseError> {
    params.require_multiplayer()?;
    let alpha = params.ability(i)?;
    let n = params.n() as f64;
    let m = params.target_mean();
    Ok((
        (n * m - alpha) / (n - 1.0),
        n * m / (n - 1.0) - alpha / (n - alpha),
    ))
}

/// The opposing mean at which player `i` is indifferent between making the
/// curve with low effort and breaking it with effort `alpha_i`.
///
/// The two bases of `phi` differ by the constant factor `(n-1)/n`, so
/// `phi(z) = ((n-1)/n)^a * (1 + nm/(n-1) - z) - 1` and the zero is
/// `J_i = 1 + nm/(n-1) - (n/(n-1))^a` in closed form. The residual and the
/// bracketing interval are re-checked on every call.
pub fn jump_point(params: &GameParams, i: usize) -> Result<f64, ResponseError> {
    params.require_multiplayer()?;
    let alpha = params.ability(i)?;
    let n = params.n() as f64;
    let m = params.target_mean();
    let jump = 1.0 + n * m / (n - 1.0) - (n / (n - 1.0)).powf(alpha);
    let residual = phi(params, i, jump)?;
    if residual.abs() > 1e-10 {
        return Err(ResponseError::JumpInconsistent {
            player: i,
            jump,
            residual,
        });
    }
    let (lo, hi) = jump_bracket(params, i)?;
    if jump < lo - 1e-12 || jump > hi + 1e-12 {
        return Err(ResponseError::JumpOutsideBracket { jump, lo, hi });
    }
    Ok(jump)
}

/// The interior critical point: the curve-making effort level
/// `alpha_i - (1 - alpha_i)(nm/(n-1) - xbar_minus_i)`.
fn low_reply(params: &GameParams, i: usize, xbar_minus_i: f64) -> f64 {
    let alpha = params.abilities()[i];
    let n = params.n() as f64;
    alpha - (1.0 - alpha) * (n * params.target_mean() / (n - 1.0) - xbar_minus_i)
}

/// Exact set-valued best reply of player `i` to an opposing mean.
pub fn best_response(
    params: &GameParams,
    i: usize,
    xbar_minus_i: f64,
) -> Result<BestResponse, ResponseError> {
    let region = classify_opposing_mean(params, i, xbar_minus_i)?;
    let alpha = params.abilities()[i];
    let jump = jump_point(params, i)?;
    let (replies, at_jump) = if (xbar_minus_i - jump).abs() <= JUMP_TOL {
        (vec![low_reply(params, i, jump), alpha], true)
    } else if xbar_minus_i > jump {
        (vec![alpha], false)
    } else if xbar_minus_i > no_show_bound(params, i)? {
        (vec![low_reply(params, i, xbar_minus_i)], false)
    } else {
        (vec![0.0], false)
    };
    debug_assert!(replies.iter().all(|&r| (0.0..=alpha + 1e-12).contains(&r)));
    Ok(BestResponse {
        replies,
        region,
        jump: at_jump.then_some(jump),
    })
}

/// Limiting (large-class) best reply: `alpha` when the mean meets the
/// target, the linear interior branch below it, and 0 once the mean drops
/// to `m - alpha/(1-alpha)`.
pub fn asymptotic_best_response(alpha: f64, m: f64, xbar: f64) -> f64 {
    if xbar >= m {
        alpha
    } else {
        (alpha - (1.0 - alpha) * (m - xbar)).max(0.0)
    }
}

/// Serially undominated effort bounds: every reply lies in
/// `[max(0, alpha - (1-alpha) nm/(n-1)), alpha]`.
pub fn dominated_bounds(params: &GameParams, i: usize) -> Result<(f64, f64), ResponseError> {
    params.require_multiplayer()?;
    let alpha = params.ability(i)?;
    Ok((low_reply(params, i, 0.0).max(0.0), alpha))
}
