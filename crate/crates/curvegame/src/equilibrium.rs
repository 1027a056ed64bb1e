//! Closed-form equilibrium candidates, exact existence conditions on the
//! parameter vector, full enumeration with fixed-point verification, and
//! Pareto/chain structure reports.

use crate::game::{Allocation, GameError, GameParams, Profile};
use crate::response::{best_response, jump_point, ResponseError};
use thiserror::Error;

/// Absolute effort tolerance for fixed-point verification.
pub const VERIFY_TOL: f64 = 1e-9;

/// Existence margins within this distance of zero set the `marginal` flag.
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("no-show count {k} out of range for {n} players")]
    KOutOfRange { k: usize, n: usize },
    #[error("existence condition for {kind:?} says {exists} but fixed-point verification says {verified}")]
    ExistenceMismatch {
        kind: EquilibriumKind,
        exists: bool,
        verified: bool,
    },
    #[error("enumerated equilibria are not coordinatewise comparable")]
    IncomparableEquilibria,
    #[error("records belong to different games")]
    MismatchedRecords,
}

/// Class-ability summary `n - HarmonicMean(n - alpha_1, ..., n - alpha_n)`:
/// the sufficient statistic behind the curved interior equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbilityIndex {
    pub value: f64,
    pub n: usize,
}

pub fn ability_index(params: &GameParams) -> AbilityIndex {
    let n = params.n() as f64;
    let s2: f64 = params.abilities().iter().map(|&a| 1.0 / (n - a)).sum();
    AbilityIndex {
        value: n * (1.0 - 1.0 / s2),
        n: params.n(),
    }
}

/// A closed-form candidate profile before validation/verification. Efforts
/// are raw formula values and may leave `[0, 1]` when no equilibrium of the
/// requested type exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub efforts: Vec<f64>,
    pub mean: f64,
}

fn interior_effort(alpha: f64, n: f64, m: f64, mean: f64) -> f64 {
    ((n - 1.0) * alpha - n * (1.0 - alpha) * (m - mean)) / (n - alpha)
}

/// The all-show curved equilibrium candidate with mean
/// `1 - (nm/(n-1)) (1/ability_index - 1)`.
pub fn curved_interior_candidate(params: &GameParams) -> Result<Candidate, EquilibriumError> {
    params.require_multiplayer()?;
    let n = params.n() as f64;
    let m = params.target_mean();
    let hat = ability_index(params).value;
    let mean = 1.0 - n * m / (n - 1.0) * (1.0 / hat - 1.0);
    let efforts = params
        .abilities()
        .iter()
        .map(|&a| interior_effort(a, n, m, mean))
        .collect();
    Ok(Candidate { efforts, mean })
}

/// Player indices sorted ascending by (ability, original index).
fn ability_order(params: &GameParams) -> Vec<usize> {
    let mut order: Vec<usize> = (0..params.n()).collect();
    order.sort_by(|&i, &j| {
        params.abilities()[i]
            .partial_cmp(&params.abilities()[j])
            .unwrap()
            .then(i.cmp(&j))
    });
    order
}

/// Candidate in which the `k` lowest-ability players exert zero effort and
/// the rest play the interior formula at the k-don't-care mean. `k = 0`
/// reproduces the curved interior candidate; `k = n` is the zero profile.
pub fn k_dont_care_candidate(params: &GameParams, k: usize) -> Result<Candidate, EquilibriumError> {
    params.require_multiplayer()?;
    if k > params.n() {
        return Err(EquilibriumError::KOutOfRange { k, n: params.n() });
    }
    let n = params.n() as f64;
    let m = params.target_mean();
    let order = ability_order(params);
    let s2: f64 = order[k..]
        .iter()
        .map(|&i| 1.0 / (n - params.abilities()[i]))
        .sum();
    let mean = ((n - 1.0) * (m + 1.0) * s2 - (n - k as f64) * (m + 1.0 - 1.0 / n))
        / ((n - 1.0) * (s2 - 1.0) + k as f64);
    let mut efforts = vec![0.0; params.n()];
    for &i in &order[k..] {
        efforts[i] = interior_effort(params.abilities()[i], n, m, mean);
    }
    debug_assert!(
        (efforts.iter().sum::<f64>() / n - mean).abs() <= 1e-9 * (1.0 + mean.abs()),
        "candidate mean identity failed at k = {k}"
    );
    Ok(Candidate { efforts, mean })
}

/// Existence report for the no-curve (try-hard) equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoCurveReport {
    pub exists: bool,
    /// `(1/n) max_i [(n-1) J_i + alpha_i]`; the equilibrium exists when the
    /// mean ability reaches it.
    pub threshold: f64,
    /// Mean ability minus the threshold.
    pub margin: f64,
    pub marginal: bool,
}

pub fn exists_no_curve(params: &GameParams) -> Result<NoCurveReport, EquilibriumError> {
    params.require_multiplayer()?;
    let n = params.n() as f64;
    let mut threshold = f64::NEG_INFINITY;
    for i in 0..params.n() {
        let j = jump_point(params, i)?;
        threshold = threshold.max(((n - 1.0) * j + params.abilities()[i]) / n);
    }
    let margin = params.mean_ability() - threshold;
    Ok(NoCurveReport {
        exists: margin >= 0.0,
        threshold,
        margin,
        marginal: margin.abs() <= MARGIN_TOL,
    })
}

/// The strictly decreasing ability cutoff `delta(z) = 1 - (1 + (n/(n-1))(m-z))^{-1}`
/// used by the k-don't-care existence interval.
pub fn delta(params: &GameParams, z: f64) -> f64 {
    let n = params.n() as f64;
    let denom = 1.0 + n / (n - 1.0) * (params.target_mean() - z);
    if denom <= 0.0 {
        f64::NEG_INFINITY
    } else {
        1.0 - 1.0 / denom
    }
}

/// Existence report for a k-don't-care equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdcReport {
    pub k: usize,
    pub exists: bool,
    /// The k-don't-care mean from the closed form.
    pub mean: f64,
    /// `delta(mean)`; must separate the k-th and (k+1)-st ability order
    /// statistics.
    pub delta: f64,
    /// k-th order statistic (None at k = 0).
    pub lower_ability: Option<f64>,
    /// (k+1)-st order statistic (None at k = n).
    pub upper_ability: Option<f64>,
    /// Slack of the active players' jump-side condition
    /// `n(m - mean) - max_i [(n - alpha_i)(nm/(n-1) - J_i) - alpha_i]`
    /// over the showing players (None at k = n). Nonnegative slack means no
    /// active player prefers to break the curve.
    pub jump_slack: Option<f64>,
    pub marginal: bool,
}

/// Tests whether the parameters support an equilibrium with exactly `k`
/// no-shows. Three conditions are combined: the k-th order statistic lies
/// weakly below `delta(mean)` (vacuous at k = 0), the (k+1)-st lies strictly
/// above it (vacuous at k = n), and every showing player weakly prefers
/// making the curve to breaking it (the jump-side condition; vacuous at
/// k = n). The first two are the published interval; the jump-side condition
/// also binds for k >= 1, not just for the interior case (see the ledger).
pub fn exists_k_dont_care(params: &GameParams, k: usize) -> Result<KdcReport, EquilibriumError> {
    params.require_multiplayer()?;
    if k > params.n() {
        return Err(EquilibriumError::KOutOfRange { k, n: params.n() });
    }
    let n = params.n() as f64;
    let m = params.target_mean();
    let order = ability_order(params);
    let mean = k_dont_care_candidate(params, k)?.mean;
    let d = delta(params, mean);
    let lower_ability = (k >= 1).then(|| params.abilities()[order[k - 1]]);
    let upper_ability = (k < params.n()).then(|| params.abilities()[order[k]]);
    let jump_slack = if k < params.n() {
        let mut worst = f64::NEG_INFINITY;
        for &i in &order[k..] {
            let a = params.abilities()[i];
            let j = jump_point(params, i)?;
            worst = worst.max((n - a) * (n * m / (n - 1.0) - j) - a);
        }
        Some(n * (m - mean) - worst)
    } else {
        None
    };
    let low_ok = lower_ability.map_or(true, |a| a <= d);
    let high_ok = upper_ability.map_or(true, |a| d < a);
    let jump_ok = jump_slack.map_or(true, |s| s >= 0.0);
    let marginal = lower_ability.is_some_and(|a| (a - d).abs() <= MARGIN_TOL)
        || upper_ability.is_some_and(|a| (a - d).abs() <= MARGIN_TOL)
        || jump_slack.is_some_and(|s| s.abs() <= MARGIN_TOL);
    Ok(KdcReport {
        k,
        exists: low_ok && high_ok && jump_ok,
        mean,
        delta: d,
        lower_ability,
        upper_ability,
        jump_slack,
        marginal,
    })
}

/// Which family an enumerated equilibrium belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// Everyone plays their ability; no curve activates.
    NoCurve,
    /// The k lowest-ability players exert zero effort; k = 0 is the curved
    /// interior equilibrium.
    KDontCare(usize),
}

/// A verified pure Nash equilibrium with its per-player outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumRecord {
    pub kind: EquilibriumKind,
    pub profile: Profile,
    pub mean: f64,
    pub allocations: Vec<Allocation>,
    pub utilities: Vec<f64>,
    pub verified: bool,
    /// Set when the existence condition sat within `MARGIN_TOL` of a knife
    /// edge, so the boolean is floating-point fragile.
    pub marginal: bool,
}

impl EquilibriumRecord {
    pub fn grades(&self) -> Vec<f64> {
        self.allocations.iter().map(|a| a.grade).collect()
    }
}

/// Direct fixed-point check: every player's effort lies within `VERIFY_TOL`
/// of some element of their exact best-reply set.
pub fn is_equilibrium(params: &GameParams, x: &Profile) -> Result<bool, EquilibriumError> {
    params.require_multiplayer()?;
    if x.len() != params.n() {
        return Err(GameError::ProfileLengthMismatch {
            len: x.len(),
            n: params.n(),
        }
        .into());
    }
    for i in 0..params.n() {
        let br = best_response(params, i, x.opposing_mean(i)?)?;
        if !br
            .replies
            .iter()
            .any(|&r| (r - x.efforts()[i]).abs() <= VERIFY_TOL)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn candidate_profile(candidate: &Candidate) -> Option<Profile> {
    let snapped: Vec<f64> = candidate
        .efforts
        .iter()
        .map(|&e| e.clamp(0.0, 1.0))
        .collect();
    if candidate
        .efforts
        .iter()
        .zip(&snapped)
        .all(|(&raw, &s)| (raw - s).abs() <= 1e-12)
    {
        Profile::new(snapped).ok()
    } else {
        None
    }
}

fn build_record(
    params: &GameParams,
    kind: EquilibriumKind,
    profile: Profile,
    marginal: bool,
) -> Result<EquilibriumRecord, EquilibriumError> {
    let mut allocations = Vec::with_capacity(params.n());
    let mut utilities = Vec::with_capacity(params.n());
    for i in 0..params.n() {
        allocations.push(params.allocation(&profile, i)?);
        utilities.push(params.utility(&profile, i)?);
    }
    Ok(EquilibriumRecord {
        kind,
        mean: profile.mean(),
        profile,
        allocations,
        utilities,
        verified: true,
        marginal,
    })
}

fn reconcile(
    params: &GameParams,
    kind: EquilibriumKind,
    candidate: Option<Profile>,
    exists: bool,
    marginal: bool,
    out: &mut Vec<EquilibriumRecord>,
) -> Result<(), EquilibriumError> {
    let verified = match &candidate {
        Some(p) => is_equilibrium(params, p)?,
        None => false,
    };
    if exists != verified && !marginal {
        return Err(EquilibriumError::ExistenceMismatch {
            kind,
            exists,
            verified,
        });
    }
    if verified {
        let profile = candidate.unwrap();
        let duplicate = out.iter().any(|r| {
            r.profile
                .efforts()
                .iter()
                .zip(profile.efforts())
                .all(|(&a, &b)| (a - b).abs() <= 1e-12)
        });
        if !duplicate {
            out.push(build_record(params, kind, profile, marginal)?);
        }
    }
    Ok(())
}

/// Enumerates every pure Nash equilibrium by testing the `n + 2` closed-form
/// candidates: the no-curve profile and the k-don't-care family. Each
/// positive existence condition is cross-checked by direct fixed-point
/// verification; off-knife-edge disagreement is an error. Output is sorted
/// descending by effort (the equilibria form a chain).
pub fn enumerate_equilibria(
    params: &GameParams,
) -> Result<Vec<EquilibriumRecord>, EquilibriumError> {
    params.require_multiplayer()?;
    let mut out = Vec::new();
    let nc = exists_no_curve(params)?;
    let y = Profile::new(params.abilities().to_vec())?;
    reconcile(
        params,
        EquilibriumKind::NoCurve,
        Some(y),
        nc.exists,
        nc.marginal,
        &mut out,
    )?;
    for k in 0..=params.n() {
        let report = exists_k_dont_care(params, k)?;
        let candidate = candidate_profile(&k_dont_care_candidate(params, k)?);
        reconcile(
            params,
            EquilibriumKind::KDontCare(k),
            candidate,
            report.exists,
            report.marginal,
            &mut out,
        )?;
    }
    out.sort_by(|a, b| b.mean.partial_cmp(&a.mean).unwrap());
    for pair in out.windows(2) {
        let dominates = pair[0]
            .profile
            .efforts()
            .iter()
            .zip(pair[1].profile.efforts())
            .all(|(&hi, &lo)| hi >= lo - VERIFY_TOL);
        if !dominates {
            return Err(EquilibriumError::IncomparableEquilibria);
        }
    }
    Ok(out)
}

/// How record `a`'s efforts compare to `b`'s, coordinatewise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileOrder {
    Equal,
    Lower,
    Higher,
}

/// Welfare comparison of two equilibria of the same game. All `*_diffs`
/// are `a` minus `b` per player.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoReport {
    pub order: ProfileOrder,
    pub utility_diffs: Vec<f64>,
    pub grade_diffs: Vec<f64>,
    pub leisure_diffs: Vec<f64>,
    /// True when the lower-effort record gives every player weakly higher
    /// utility (strictly when efforts differ).
    pub lower_pareto_dominates: bool,
}

pub fn pareto_compare(
    params: &GameParams,
    a: &EquilibriumRecord,
    b: &EquilibriumRecord,
) -> Result<ParetoReport, EquilibriumError> {
    if a.profile.len() != params.n() || b.profile.len() != params.n() {
        return Err(EquilibriumError::MismatchedRecords);
    }
    let mut leq = true;
    let mut geq = true;
    for (&x, &y) in a.profile.efforts().iter().zip(b.profile.efforts()) {
        leq &= x <= y + VERIFY_TOL;
        geq &= x >= y - VERIFY_TOL;
    }
    let order = match (leq, geq) {
        (true, true) => ProfileOrder::Equal,
        (true, false) => ProfileOrder::Lower,
        (false, true) => ProfileOrder::Higher,
        (false, false) => return Err(EquilibriumError::IncomparableEquilibria),
    };
    let utility_diffs: Vec<f64> = a
        .utilities
        .iter()
        .zip(&b.utilities)
        .map(|(x, y)| x - y)
        .collect();
    let grade_diffs = a
        .allocations
        .iter()
        .zip(&b.allocations)
        .map(|(x, y)| x.grade - y.grade)
        .collect();
    let leisure_diffs = a
        .allocations
        .iter()
        .zip(&b.allocations)
        .map(|(x, y)| x.leisure - y.leisure)
        .collect();
    let lower_pareto_dominates = match order {
        ProfileOrder::Equal => true,
        ProfileOrder::Lower => utility_diffs.iter().all(|&d| d > -VERIFY_TOL),
        ProfileOrder::Higher => utility_diffs.iter().all(|&d| d < VERIFY_TOL),
    };
    Ok(ParetoReport {
        order,
        utility_diffs,
        grade_diffs,
        leisure_diffs,
        lower_pareto_dominates,
    })
}

/// One student's limiting outcome in the large-class curved equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEntry {
    pub ability: f64,
    pub effort: f64,
    pub grade: f64,
    pub leisure: f64,
}

/// Large-class inflation summary: with limiting ability index below the
/// target mean, every grade and leisure allocation is scaled by `m / hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub alpha_hat: f64,
    pub m: f64,
    /// `m / alpha_hat` when the limit is curved, else 1.
    pub factor: f64,
    pub curved: bool,
    pub entries: Vec<AsymptoticEntry>,
}

impl AsymptoticReport {
    /// Recovers a student's true ability from their inflated limiting grade.
    pub fn infer_ability(&self, grade: f64) -> f64 {
        grade / self.factor
    }
}

pub fn asymptotic_report(
    alpha_hat: f64,
    m: f64,
    abilities: &[f64],
) -> Result<AsymptoticReport, EquilibriumError> {
    if !(alpha_hat > 0.0 && alpha_hat < 1.0) {
        return Err(GameError::AbilityOutOfRange {
            index: 0,
            value: alpha_hat,
        }
        .into());
    }
    if !(m > 0.0 && m < 1.0) {
        return Err(GameError::TargetOutOfRange(m).into());
    }
    let curved = alpha_hat <= m;
    let factor = if curved { m / alpha_hat } else { 1.0 };
    let entries = abilities
        .iter()
        .map(|&a| AsymptoticEntry {
            ability: a,
            effort: a - (1.0 - a) * (factor - 1.0),
            grade: a * factor,
            leisure: (1.0 - a) * factor,
        })
        .collect();
    Ok(AsymptoticReport {
        alpha_hat,
        m,
        factor,
        curved,
        entries,
    })
}

/// The one-student game: the reply to the professor's stand-alone offer of
/// `m` is bang-bang with cutoff `m = alpha (1 - alpha)^((1-alpha)/alpha)`.
pub fn solve_single_student(alpha: f64, m: f64) -> Result<Vec<f64>, EquilibriumError> {
    GameParams::new(vec![alpha], m)?;
    let cutoff = alpha * (1.0 - alpha).powf((1.0 - alpha) / alpha);
    if (m - cutoff).abs() <= 1e-12 {
        Ok(vec![0.0, alpha])
    } else if m < cutoff {
        Ok(vec![alpha])
    } else {
        Ok(vec![0.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: &[f64], m: f64) -> GameParams {
        GameParams::new(alpha.to_vec(), m).unwrap()
    }

    fn ten_student() -> GameParams {
        params(
            &[0.38, 0.39, 0.42, 0.45, 0.5, 0.51, 0.55, 0.62, 0.65, 0.8],
            0.85,
        )
    }

    #[test]
    fn ability_index_diagonal_and_bounds() {
        for &z in &[0.1, 0.5, 0.9] {
            let p = params(&[z, z, z], 0.5);
            assert!((ability_index(&p).value - z).abs() < 1e-12);
        }
        let p = params(&[0.6, 0.9], 0.5);
        let hat = ability_index(&p).value;
        assert!((hat - 0.768).abs() < 1e-12);
        assert!((0.6..=0.9).contains(&hat));
    }

    #[test]
    fn two_person_interior_candidate() {
        let p = params(&[0.75, 0.75], 0.70);
        let c = curved_interior_candidate(&p).unwrap();
        assert!((c.efforts[0] - 1.6 / 3.0).abs() < 1e-3);
        assert!((c.efforts[1] - 1.6 / 3.0).abs() < 1e-3);
        assert!((c.efforts.iter().sum::<f64>() / 2.0 - c.mean).abs() < 1e-12);
    }

    #[test]
    fn k_zero_matches_interior_and_k_n_is_zero() {
        let p = ten_student();
        let interior = curved_interior_candidate(&p).unwrap();
        let k0 = k_dont_care_candidate(&p, 0).unwrap();
        for (a, b) in interior.efforts.iter().zip(&k0.efforts) {
            assert!((a - b).abs() < 1e-12);
        }
        let kn = k_dont_care_candidate(&p, 10).unwrap();
        assert_eq!(kn.mean, 0.0);
        assert!(kn.efforts.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn three_dont_care_delta_value() {
        let p = ten_student();
        let c = k_dont_care_candidate(&p, 3).unwrap();
        let d = delta(&p, c.mean);
        assert!((d - 0.4248).abs() < 5e-4);
    }

    #[test]
    fn no_curve_existence_two_person() {
        let p = params(&[0.75, 0.75], 0.70);
        let report = exists_no_curve(&p).unwrap();
        assert!(report.exists);
        assert!((report.threshold - 0.734).abs() < 1e-3);
        assert!(report.margin > 0.0 && !report.marginal);
    }

    #[test]
    fn no_curve_needs_mean_ability_at_target() {
        let p = params(&[0.5, 0.5], 0.70);
        assert!(!exists_no_curve(&p).unwrap().exists);
    }

    #[test]
    fn no_curve_threshold_approaches_target_mean() {
        let p = GameParams::new(vec![0.9; 10_000], 0.70).unwrap();
        assert!((exists_no_curve(&p).unwrap().threshold - 0.70).abs() < 1e-3);
    }

    #[test]
    fn interior_existence_two_person() {
        let p = params(&[0.75, 0.75], 0.70);
        let r = exists_k_dont_care(&p, 0).unwrap();
        assert!(r.exists);
        // Jump-side slack = 2(m - mean) - max term = 1/3 - 0.10224.
        let max_term = 1.25 * (2.0f64.powf(0.75) - 1.0) - 0.75;
        assert!((max_term - 0.10224).abs() < 1e-5);
        assert!((r.jump_slack.unwrap() - (1.0 / 3.0 - max_term)).abs() < 1e-9);
        assert!((r.delta - 0.25).abs() < 1e-12);
        assert_eq!(r.lower_ability, None);
        assert_eq!(r.upper_ability, Some(0.75));
    }

    #[test]
    fn three_dont_care_exists_in_ten_student_course() {
        let r = exists_k_dont_care(&ten_student(), 3).unwrap();
        assert!(r.exists);
        assert_eq!(r.lower_ability, Some(0.42));
        assert_eq!(r.upper_ability, Some(0.45));
        assert!(0.42 <= r.delta && r.delta < 0.45);
    }

    #[test]
    fn nobody_cares_condition() {
        let p = params(&[0.3, 0.3], 0.9);
        let r = exists_k_dont_care(&p, 2).unwrap();
        assert!(r.exists);
        // At k = n the cutoff reduces to m/(m + 1 - 1/n) = 0.9/1.4.
        assert!((r.delta - 0.9 / 1.4).abs() < 1e-12);
        assert!(0.3 <= r.delta);
        let q = params(&[0.8, 0.8], 0.5);
        assert!(!exists_k_dont_care(&q, 2).unwrap().exists);
    }

    #[test]
    fn interval_alone_is_not_sufficient_for_one_no_show() {
        // The published two-sided interval holds here, but the strong
        // student strictly prefers breaking the curve, so no 1-no-show
        // equilibrium exists. The jump-side condition catches it.
        let p = params(&[0.02, 0.935], 0.45);
        let r = exists_k_dont_care(&p, 1).unwrap();
        assert!(r.lower_ability.unwrap() <= r.delta && r.delta < r.upper_ability.unwrap());
        assert!(r.jump_slack.unwrap() < 0.0);
        assert!(!r.exists);
        let c = k_dont_care_candidate(&p, 1).unwrap();
        let profile = Profile::new(c.efforts).unwrap();
        assert!(!is_equilibrium(&p, &profile).unwrap());
    }

    #[test]
    fn two_person_enumeration() {
        let p = params(&[0.75, 0.75], 0.70);
        let eqs = enumerate_equilibria(&p).unwrap();
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs[0].kind, EquilibriumKind::NoCurve);
        assert_eq!(eqs[0].profile.efforts(), &[0.75, 0.75]);
        assert_eq!(eqs[1].kind, EquilibriumKind::KDontCare(0));
        assert!((eqs[1].profile.efforts()[0] - 0.5333).abs() < 1e-3);
        assert!((eqs[1].utilities[0] - 0.633).abs() < 1e-3);
        assert!((eqs[0].utilities[0] - 0.57).abs() < 1e-3);
        assert!((eqs[1].allocations[0].grade - 0.70).abs() < 1e-3);
    }

    #[test]
    fn ten_student_enumeration_includes_three_no_shows() {
        let eqs = enumerate_equilibria(&ten_student()).unwrap();
        assert!(eqs
            .iter()
            .any(|r| r.kind == EquilibriumKind::KDontCare(3) && r.verified));
    }

    #[test]
    fn low_effort_equilibrium_pareto_dominates() {
        let p = params(&[0.75, 0.75], 0.70);
        let eqs = enumerate_equilibria(&p).unwrap();
        let report = pareto_compare(&p, &eqs[1], &eqs[0]).unwrap();
        assert_eq!(report.order, ProfileOrder::Lower);
        assert!(report.lower_pareto_dominates);
        assert!(report.utility_diffs.iter().all(|&d| d > 0.0));
        assert!(report.grade_diffs.iter().all(|&d| d < 0.0));
        let refl = pareto_compare(&p, &eqs[0], &eqs[0]).unwrap();
        assert_eq!(refl.order, ProfileOrder::Equal);
    }

    #[test]
    fn asymptotic_inflation_factor() {
        let r = asymptotic_report(0.70, 0.80, &[0.90, 0.70]).unwrap();
        assert!((r.factor - 8.0 / 7.0).abs() < 1e-12);
        assert!((r.entries[0].grade - 1.0286).abs() < 1e-3);
        assert!((r.entries[1].grade - 0.80).abs() < 1e-12);
        assert!((r.infer_ability(r.entries[0].grade) - 0.90).abs() < 1e-12);
        let flat = asymptotic_report(0.80, 0.80, &[0.5]).unwrap();
        assert_eq!(flat.factor, 1.0);
        assert_eq!(flat.entries[0].effort, 0.5);
    }

    #[test]
    fn single_student_bang_bang() {
        let cutoff = 3.0 / 4.0f64.powf(4.0 / 3.0);
        let both = solve_single_student(0.75, cutoff).unwrap();
        assert_eq!(both, vec![0.0, 0.75]);
        let u = |x: f64| {
            let p = params(&[0.75], cutoff);
            p.utility(&Profile::new(vec![x]).unwrap(), 0).unwrap()
        };
        assert!((u(0.0) - u(0.75)).abs() <= 1e-12);
        assert_eq!(solve_single_student(0.75, 0.3).unwrap(), vec![0.75]);
        assert_eq!(solve_single_student(0.75, 0.6).unwrap(), vec![0.0]);
    }
}
