//! Brute-force grid oracles used only for verification. Everything here
//! evaluates raw payoffs on effort grids and never calls the analytic
//! response or equilibrium code, so agreement between the two is evidence,
//! not circularity.

use crate::game::{GameError, GameParams, Profile};
use std::collections::{BTreeMap, HashSet, VecDeque};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("grid search supports 2 or 3 players, got {0}")]
    UnsupportedPlayerCount(usize),
    #[error("step {step} outside the supported range [{min}, {max}]")]
    StepOutOfRange { step: f64, min: f64, max: f64 },
    #[error("step {0} does not evenly divide the unit interval")]
    StepNotUnitDivisor(f64),
    #[error("opposing fragment has {len} efforts, expected {expected}")]
    OpposingLengthMismatch { len: usize, expected: usize },
}

/// Reply of the grid oracle at one opposing profile.
#[derive(Debug, Clone, PartialEq)]
pub struct GridReply {
    /// Lowest grid point attaining the maximum utility.
    pub best: f64,
    /// All grid points within the near-tie utility slack of the maximum,
    /// sorted ascending. Captures both branches near a jump.
    pub near_ties: Vec<f64>,
}

/// Utility slack corresponding to one grid step under the payoff's local
/// Lipschitz bound of 2 (valid once `x_i = 1` is excluded).
fn slack(step: f64) -> f64 {
    2.0 * step * (1.0 + 1e-9)
}

fn raw_utility(alpha: f64, m: f64, n: f64, own: f64, others_sum: f64) -> f64 {
    let mean = (own + others_sum) / n;
    let grade = own + (m - mean).max(0.0);
    grade.powf(alpha) * (1.0 - own).powf(1.0 - alpha)
}

/// Brute-force best reply of player `i` to a fixed opposing effort
/// fragment: utility is evaluated on the grid `{0, step, ..., 1}`.
pub fn grid_best_response(
    params: &GameParams,
    i: usize,
    opposing: &[f64],
    step: f64,
) -> Result<GridReply, OracleError> {
    params.require_multiplayer()?;
    params.check_player(i)?;
    if !(step > 0.0 && step <= 0.01) {
        return Err(OracleError::StepOutOfRange {
            step,
            min: f64::MIN_POSITIVE,
            max: 0.01,
        });
    }
    if opposing.len() != params.n() - 1 {
        return Err(OracleError::OpposingLengthMismatch {
            len: opposing.len(),
            expected: params.n() - 1,
        });
    }
    for (index, &value) in opposing.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(GameError::EffortOutOfRange { index, value }.into());
        }
    }
    let alpha = params.abilities()[i];
    let m = params.target_mean();
    let n = params.n() as f64;
    let others_sum: f64 = opposing.iter().sum();
    let mut points: Vec<f64> = (0..)
        .map(|k| k as f64 * step)
        .take_while(|&x| x <= 1.0 + 1e-12)
        .map(|x| x.min(1.0))
        .collect();
    if 1.0 - points.last().unwrap() > 1e-12 {
        points.push(1.0);
    }
    let utilities: Vec<f64> = points
        .iter()
        .map(|&x| raw_utility(alpha, m, n, x, others_sum))
        .collect();
    let max = utilities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best = points[utilities.iter().position(|&u| u == max).unwrap()];
    let near_ties = points
        .iter()
        .zip(&utilities)
        .filter(|(_, &u)| u >= max - slack(step))
        .map(|(&x, _)| x)
        .collect();
    Ok(GridReply { best, near_ties })
}

/// A connected blob of approximate-equilibrium grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCluster {
    /// Member with the smallest worst-case improvement available to any
    /// player (ties broken lexicographically).
    pub representative: Profile,
    pub size: usize,
    pub min_corner: Profile,
    pub max_corner: Profile,
}

struct GridTables {
    q: usize,
    step: f64,
    n: usize,
    /// Per player: utility indexed by `own * (smax + 1) + others_sum_index`.
    utility: Vec<Vec<f64>>,
    /// Per player: best deviation utility per opposing sum index, with the
    /// full-effort point excluded (its payoff is zero and the Lipschitz
    /// bound fails there).
    br_max: Vec<Vec<f64>>,
}

fn check_grid_step(n: usize, step: f64) -> Result<usize, OracleError> {
    let min = match n {
        2 => 1e-3,
        3 => 5e-3,
        _ => return Err(OracleError::UnsupportedPlayerCount(n)),
    };
    if !(step >= min && step <= 0.1) {
        return Err(OracleError::StepOutOfRange { step, min, max: 0.1 });
    }
    let q = (1.0 / step).round() as usize;
    if (q as f64 * step - 1.0).abs() > 1e-6 {
        return Err(OracleError::StepNotUnitDivisor(step));
    }
    Ok(q)
}

fn build_tables(params: &GameParams, step: f64) -> Result<GridTables, OracleError> {
    let n = params.n();
    let q = check_grid_step(n, step)?;
    let nf = n as f64;
    let m = params.target_mean();
    let smax = (n - 1) * q;
    let mut utility = Vec::with_capacity(n);
    let mut br_max = Vec::with_capacity(n);
    for p in 0..n {
        let alpha = params.abilities()[p];
        let mut table = vec![0.0; (q + 1) * (smax + 1)];
        for own in 0..=q {
            let x = (own as f64 * step).min(1.0);
            for s in 0..=smax {
                table[own * (smax + 1) + s] =
                    raw_utility(alpha, m, nf, x, s as f64 * step);
            }
        }
        let mut best = vec![f64::NEG_INFINITY; smax + 1];
        for own in 0..q {
            for s in 0..=smax {
                let u = table[own * (smax + 1) + s];
                if u > best[s] {
                    best[s] = u;
                }
            }
        }
        utility.push(table);
        br_max.push(best);
    }
    Ok(GridTables {
        q,
        step,
        n,
        utility,
        br_max,
    })
}

impl GridTables {
    fn u(&self, player: usize, own: usize, others_sum: usize) -> f64 {
        self.utility[player][own * ((self.n - 1) * self.q + 1) + others_sum]
    }

    /// Worst-case utility a player could gain by deviating; nonpositive
    /// within floating error at an exact equilibrium.
    fn regret(&self, idx: &[usize]) -> f64 {
        let total: usize = idx.iter().sum();
        let mut worst = f64::NEG_INFINITY;
        for p in 0..self.n {
            let s = total - idx[p];
            worst = worst.max(self.br_max[p][s] - self.u(p, idx[p], s));
        }
        worst
    }

    fn is_hit(&self, idx: &[usize], eps: f64) -> bool {
        let total: usize = idx.iter().sum();
        (0..self.n).all(|p| {
            let s = total - idx[p];
            self.u(p, idx[p], s) >= self.br_max[p][s] - eps
        })
    }
}

fn scan_row(tables: &GridTables, a: usize, eps: f64) -> Vec<[usize; 3]> {
    let q = tables.q;
    let mut hits = Vec::new();
    if tables.n == 2 {
        for b in 0..=q {
            if tables.is_hit(&[a, b], eps) {
                hits.push([a, b, 0]);
            }
        }
    } else {
        for b in 0..=q {
            for c in 0..=q {
                if tables.is_hit(&[a, b, c], eps) {
                    hits.push([a, b, c]);
                }
            }
        }
    }
    hits
}

fn cluster_hits(tables: &GridTables, hits: Vec<[usize; 3]>) -> Vec<GridCluster> {
    let n = tables.n;
    let step = tables.step;
    let hit_set: HashSet<[usize; 3]> = hits.iter().cloned().collect();
    let mut visited: HashSet<[usize; 3]> = HashSet::new();
    let mut clusters = Vec::new();
    for &start in &hits {
        if visited.contains(&start) {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        visited.insert(start);
        while let Some(cell) = queue.pop_front() {
            members.push(cell);
            // Chebyshev-2 neighborhood keeps adjacent hits in one blob.
            let mut offsets = vec![[0i64; 3]];
            for d in 0..n {
                let mut next = Vec::new();
                for o in offsets {
                    for shift in -2i64..=2 {
                        let mut v = o;
                        v[d] = shift;
                        next.push(v);
                    }
                }
                offsets = next;
            }
            for o in offsets {
                let mut neighbor = [0usize; 3];
                let mut ok = true;
                for d in 0..3 {
                    let v = cell[d] as i64 + o[d];
                    if v < 0 || v > tables.q as i64 {
                        ok = false;
                        break;
                    }
                    neighbor[d] = v as usize;
                }
                if ok && hit_set.contains(&neighbor) && visited.insert(neighbor) {
                    queue.push_back(neighbor);
                }
            }
        }
        members.sort_unstable();
        let mut best_idx = members[0];
        let mut best_regret = f64::INFINITY;
        let mut min_corner = [usize::MAX; 3];
        let mut max_corner = [0usize; 3];
        for &cell in &members {
            for d in 0..n {
                min_corner[d] = min_corner[d].min(cell[d]);
                max_corner[d] = max_corner[d].max(cell[d]);
            }
            let r = tables.regret(&cell[..n]);
            if r < best_regret {
                best_regret = r;
                best_idx = cell;
            }
        }
        let to_profile = |cell: &[usize; 3]| {
            Profile::new(
                cell[..n]
                    .iter()
                    .map(|&i| (i as f64 * step).min(1.0))
                    .collect(),
            )
            .unwrap()
        };
        clusters.push(GridCluster {
            representative: to_profile(&best_idx),
            size: members.len(),
            min_corner: to_profile(&min_corner),
            max_corner: to_profile(&max_corner),
        });
    }
    clusters.sort_by(|a, b| {
        b.representative
            .mean()
            .partial_cmp(&a.representative.mean())
            .unwrap()
            .then_with(|| {
                a.representative.efforts()[0]
                    .partial_cmp(&b.representative.efforts()[0])
                    .unwrap()
            })
    });
    clusters
}

fn nash_impl(params: &GameParams, step: f64, parallel: bool) -> Result<Vec<GridCluster>, OracleError> {
    let tables = build_tables(params, step)?;
    let eps = slack(step);
    let rows: Vec<usize> = (0..=tables.q).collect();
    let hits: Vec<[usize; 3]> = if parallel {
        #[cfg(feature = "parallel")]
        {
            rows.par_iter()
                .map(|&a| scan_row(&tables, a, eps))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            unreachable!("parallel scan requested without the parallel feature")
        }
    } else {
        rows.iter().flat_map(|&a| scan_row(&tables, a, eps)).collect()
    };
    Ok(cluster_hits(&tables, hits))
}

/// Exhaustive approximate-Nash scan over the full profile grid for 2 or 3
/// players. Clusters of hits are returned in descending order of the
/// representative's mean effort; they match the closed-form enumeration
/// one-to-one within one grid step.
pub fn grid_nash_search(params: &GameParams, step: f64) -> Result<Vec<GridCluster>, OracleError> {
    nash_impl(params, step, cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`grid_nash_search`]; available regardless of
/// the `parallel` feature and byte-identical in output.
pub fn grid_nash_search_seq(
    params: &GameParams,
    step: f64,
) -> Result<Vec<GridCluster>, OracleError> {
    nash_impl(params, step, false)
}

/// One utility-undominated grid profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub utilities: Vec<f64>,
    pub profile: Profile,
}

/// Enumerates grid profiles and keeps the utility-undominated ones
/// (duplicated utility vectors are kept once). Every efficient profile has
/// a zero-effort coordinate, up to grid resolution.
pub fn pareto_frontier(params: &GameParams, step: f64) -> Result<Vec<ParetoPoint>, OracleError> {
    let n = params.n();
    let q = check_grid_step(n, step)?;
    let nf = n as f64;
    let m = params.target_mean();
    let value = |k: usize| (k as f64 * step).min(1.0);
    let utilities_at = |idx: &[usize]| -> Vec<f64> {
        let total: f64 = idx.iter().map(|&k| value(k)).sum();
        (0..n)
            .map(|p| {
                let own = value(idx[p]);
                raw_utility(params.abilities()[p], m, nf, own, total - own)
            })
            .collect()
    };
    fn advance(idx: &mut [usize], q: usize) -> bool {
        for d in (0..idx.len()).rev() {
            if idx[d] < q {
                idx[d] += 1;
                for e in &mut idx[d + 1..] {
                    *e = 0;
                }
                return true;
            }
            idx[d] = 0;
        }
        false
    }
    let mut points: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        points.push((utilities_at(&idx), idx.clone()));
        if !advance(&mut idx, q) {
            break;
        }
    }
    points.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then_with(|| a.1.cmp(&b.1))
    });
    let mut frontier = Vec::new();
    if n == 2 {
        let mut max_u2 = f64::NEG_INFINITY;
        for (u, idx) in points {
            if u[1] > max_u2 {
                max_u2 = u[1];
                frontier.push((u, idx));
            }
        }
    } else {
        // Staircase over (u2, u3): keys ascending, values descending, so the
        // smallest key >= x carries the running maximum of u3 beyond x.
        // Utilities are nonnegative, making to_bits order-preserving.
        let mut stairs: BTreeMap<u64, f64> = BTreeMap::new();
        for (u, idx) in points {
            let key = u[1].to_bits();
            if let Some((_, &v)) = stairs.range(key..).next() {
                if v >= u[2] {
                    continue;
                }
            }
            let dead: Vec<u64> = stairs
                .range(..=key)
                .rev()
                .take_while(|(_, &v)| v <= u[2])
                .map(|(&k, _)| k)
                .collect();
            for k in dead {
                stairs.remove(&k);
            }
            stairs.insert(key, u[2]);
            frontier.push((u, idx));
        }
    }
    let out: Vec<ParetoPoint> = frontier
        .into_iter()
        .map(|(utilities, idx)| ParetoPoint {
            utilities,
            profile: Profile::new(idx.iter().map(|&k| value(k)).collect()).unwrap(),
        })
        .collect();
    for point in &out {
        debug_assert!(
            point
                .profile
                .efforts()
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b))
                <= step + 1e-12,
            "efficient profile without a zero coordinate: {:?}",
            point.profile
        );
    }
    Ok(out)
}
