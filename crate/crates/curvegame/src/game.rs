//! Core model types: game parameters, effort profiles, grades, payoffs,
//! and the hardness partial order on parameter vectors.

use thiserror::Error;

/// Errors raised by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("class has no students")]
    EmptyClass,
    #[error("ability parameter {index} is {value}; must lie strictly inside (0, 1)")]
    AbilityOutOfRange { index: usize, value: f64 },
    #[error("target mean {0} must lie strictly inside (0, 1)")]
    TargetOutOfRange(f64),
    #[error("player index {index} out of range for {n} players")]
    PlayerOutOfRange { index: usize, n: usize },
    #[error("effort {value} at position {index} lies outside [0, 1]")]
    EffortOutOfRange { index: usize, value: f64 },
    #[error("profile has {len} entries but the game has {n} players")]
    ProfileLengthMismatch { len: usize, n: usize },
    #[error("operation requires at least two players")]
    TooFewPlayers,
    #[error("player counts differ: {0} vs {1}")]
    MismatchedPlayerCount(usize, usize),
    #[error("effort increment {dx} overflows the action set from {x}")]
    IncrementOverflow { x: f64, dx: f64 },
    #[error("effort increment must be positive, got {0}")]
    NonPositiveIncrement(f64),
}

/// A validated model instance: ability vector `alpha` in (0,1)^n and the
/// instructor's target mean `m` in (0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct GameParams {
    alpha: Vec<f64>,
    m: f64,
}

impl GameParams {
    /// Validates and builds a parameter vector. Boundary values are
    /// rejected, not clamped: the parameter space is the open cube.
    pub fn new(alpha: Vec<f64>, m: f64) -> Result<Self, GameError> {
        if alpha.is_empty() {
            return Err(GameError::EmptyClass);
        }
        for (index, &value) in alpha.iter().enumerate() {
            if !(value > 0.0 && value < 1.0) {
                return Err(GameError::AbilityOutOfRange { index, value });
            }
        }
        if !(m > 0.0 && m < 1.0) {
            return Err(GameError::TargetOutOfRange(m));
        }
        Ok(GameParams { alpha, m })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn abilities(&self) -> &[f64] {
        &self.alpha
    }

    pub fn ability(&self, i: usize) -> Result<f64, GameError> {
        self.check_player(i)?;
        Ok(self.alpha[i])
    }

    pub fn target_mean(&self) -> f64 {
        self.m
    }

    pub fn mean_ability(&self) -> f64 {
        self.alpha.iter().sum::<f64>() / self.n() as f64
    }

    pub(crate) fn check_player(&self, i: usize) -> Result<(), GameError> {
        if i >= self.n() {
            Err(GameError::PlayerOutOfRange {
                index: i,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_multiplayer(&self) -> Result<(), GameError> {
        if self.n() < 2 {
            Err(GameError::TooFewPlayers)
        } else {
            Ok(())
        }
    }

    /// Player `i`'s curved grade: raw effort plus the uniform top-up
    /// `max(m - mean, 0)`. Grades above 1 are never truncated.
    pub fn grade(&self, x: &Profile, i: usize) -> Result<f64, GameError> {
        self.check_player(i)?;
        x.check_len(self.n())?;
        let mean = x.mean();
        let g = x.efforts()[i] + (self.m - mean).max(0.0);
        if cfg!(debug_assertions) && self.n() >= 2 {
            // Both printed forms of the grade must agree.
            let n = self.n() as f64;
            let alt =
                (self.m + (n - 1.0) / n * (x.efforts()[i] - x.opposing_mean(i)?)).max(x.efforts()[i]);
            debug_assert!((g - alt).abs() <= 1e-12, "grade forms disagree: {g} vs {alt}");
        }
        Ok(g)
    }

    /// Cobb-Douglas payoff `G^alpha * (1 - x_i)^(1 - alpha)`, normalized so
    /// a grade of 1 with full leisure is worth exactly 1.
    pub fn utility(&self, x: &Profile, i: usize) -> Result<f64, GameError> {
        let g = self.grade(x, i)?;
        let alpha = self.alpha[i];
        Ok(g.powf(alpha) * (1.0 - x.efforts()[i]).powf(1.0 - alpha))
    }

    /// Grade and leisure bundle generated by profile `x` for player `i`.
    pub fn allocation(&self, x: &Profile, i: usize) -> Result<Allocation, GameError> {
        Ok(Allocation {
            grade: self.grade(x, i)?,
            leisure: 1.0 - x.efforts()[i],
        })
    }

    /// Log-payoff gain from raising player `i`'s effort by `dx`:
    /// `log U_i(x_i + dx, x_-i) - log U_i(x)`. Returns `-inf` when the
    /// bumped effort hits 1 (zero leisure, zero utility).
    pub fn log_utility_gain(&self, x: &Profile, i: usize, dx: f64) -> Result<f64, GameError> {
        self.check_player(i)?;
        x.check_len(self.n())?;
        if dx <= 0.0 {
            return Err(GameError::NonPositiveIncrement(dx));
        }
        let xi = x.efforts()[i];
        if xi + dx > 1.0 + 1e-15 {
            return Err(GameError::IncrementOverflow { x: xi, dx });
        }
        let mut bumped = x.efforts().to_vec();
        bumped[i] = (xi + dx).min(1.0);
        let bumped = Profile::new(bumped)?;
        let log_u = |p: &Profile| -> Result<f64, GameError> {
            let g = self.grade(p, i)?;
            let alpha = self.alpha[i];
            Ok(alpha * g.ln() + (1.0 - alpha) * (1.0 - p.efforts()[i]).ln())
        };
        Ok(log_u(&bumped)? - log_u(x)?)
    }
}

/// An effort/action vector in `[0,1]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    efforts: Vec<f64>,
}

impl Profile {
    pub fn new(efforts: Vec<f64>) -> Result<Self, GameError> {
        if efforts.is_empty() {
            return Err(GameError::EmptyClass);
        }
        for (index, &value) in efforts.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(GameError::EffortOutOfRange { index, value });
            }
        }
        Ok(Profile { efforts })
    }

    /// All-constant profile, e.g. the seeds `1` and `0` for extremal dynamics.
    pub fn constant(n: usize, value: f64) -> Result<Self, GameError> {
        Profile::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.efforts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.efforts.is_empty()
    }

    pub fn efforts(&self) -> &[f64] {
        &self.efforts
    }

    pub fn mean(&self) -> f64 {
        self.efforts.iter().sum::<f64>() / self.efforts.len() as f64
    }

    /// Mean effort of everyone except player `i`; defined for n >= 2.
    pub fn opposing_mean(&self, i: usize) -> Result<f64, GameError> {
        if self.efforts.len() < 2 {
            return Err(GameError::TooFewPlayers);
        }
        if i >= self.efforts.len() {
            return Err(GameError::PlayerOutOfRange {
                index: i,
                n: self.efforts.len(),
            });
        }
        let total: f64 = self.efforts.iter().sum();
        Ok((total - self.efforts[i]) / (self.efforts.len() - 1) as f64)
    }

    fn check_len(&self, n: usize) -> Result<(), GameError> {
        if self.efforts.len() != n {
            Err(GameError::ProfileLengthMismatch {
                len: self.efforts.len(),
                n,
            })
        } else {
            Ok(())
        }
    }
}

/// A (grade, leisure) consumption bundle. Grades may exceed 1 under a curve;
/// the model caps them at `2 - 1/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub grade: f64,
    pub leisure: f64,
}

/// Outcome of comparing two parameter vectors under the hardness order:
/// `a >= b` iff every ability in `a` is at least the matching ability in `b`
/// and `a`'s target mean is no larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hardness {
    Equal,
    Harder,
    Easier,
    Incomparable,
}

/// Compares `a` against `b` under the hardness order.
pub fn harder_than(a: &GameParams, b: &GameParams) -> Result<Hardness, GameError> {
    if a.n() != b.n() {
        return Err(GameError::MismatchedPlayerCount(a.n(), b.n()));
    }
    let mut geq = a.m <= b.m;
    let mut leq = a.m >= b.m;
    for (&x, &y) in a.alpha.iter().zip(&b.alpha) {
        geq &= x >= y;
        leq &= x <= y;
    }
    Ok(match (geq, leq) {
        (true, true) => Hardness::Equal,
        (true, false) => Hardness::Harder,
        (false, true) => Hardness::Easier,
        (false, false) => Hardness::Incomparable,
    })
}

/// Least upper bound: coordinate-wise max of abilities, min of target means.
pub fn join(a: &GameParams, b: &GameParams) -> Result<GameParams, GameError> {
    if a.n() != b.n() {
        return Err(GameError::MismatchedPlayerCount(a.n(), b.n()));
    }
    let alpha = a
        .alpha
        .iter()
        .zip(&b.alpha)
        .map(|(&x, &y)| x.max(y))
        .collect();
    GameParams::new(alpha, a.m.min(b.m))
}

/// Greatest lower bound: coordinate-wise min of abilities, max of target means.
pub fn meet(a: &GameParams, b: &GameParams) -> Result<GameParams, GameError> {
    if a.n() != b.n() {
        return Err(GameError::MismatchedPlayerCount(a.n(), b.n()));
    }
    let alpha = a
        .alpha
        .iter()
        .zip(&b.alpha)
        .map(|(&x, &y)| x.min(y))
        .collect();
    GameParams::new(alpha, a.m.max(b.m))
}
