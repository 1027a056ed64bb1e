//! The five subcommands: solve, br, sweep, dynamics, verify.

use crate::io::{
    json_escape, num_array, read_instance, read_sweep, sig12, validation, AxisKind, CliError,
    Instance,
};
use curvegame::dynamics::{
    iterate_extremal_with, DynamicsError, Extremal, Schedule, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use curvegame::equilibrium::{
    ability_index, asymptotic_report, enumerate_equilibria, exists_k_dont_care, exists_no_curve,
    solve_single_student, EquilibriumKind,
};
use curvegame::game::GameParams;
use curvegame::oracle::{grid_best_response, grid_nash_search};
use curvegame::response::{best_response, jump_point, RegionTag};
use rayon::prelude::*;
use std::env;
use std::fs;
use std::path::{Path, PathBuf};

fn load_params(path: &Path) -> Result<(Instance, GameParams), CliError> {
    let instance = read_instance(path)?;
    let params = GameParams::new(instance.alpha.clone(), instance.m).map_err(validation)?;
    Ok((instance, params))
}

fn params_json(instance: &Instance) -> String {
    let mut out = format!(
        "{{\"n\":{},\"m\":{},\"alpha\":{}",
        instance.alpha.len(),
        sig12(instance.m),
        num_array(&instance.alpha)
    );
    if let Some(label) = &instance.label {
        out.push_str(&format!(",\"label\":\"{}\"", json_escape(label)));
    }
    out.push('}');
    out
}

fn kind_label(kind: EquilibriumKind) -> String {
    match kind {
        EquilibriumKind::NoCurve => "no_curve".to_owned(),
        EquilibriumKind::KDontCare(k) => format!("k_dont_care:{k}"),
    }
}

fn region_label(region: RegionTag) -> &'static str {
    match region {
        RegionTag::CurveBroken => "curve_broken",
        RegionTag::MakeOrBreak => "make_or_break",
        RegionTag::CurveMade => "curve_made",
        RegionTag::NoShowSub => "no_show",
    }
}

pub fn cmd_solve(path: &Path) -> Result<(), CliError> {
    let instance = read_instance(path)?;
    let mut out = format!("{{\"params\":{}", params_json(&instance));
    if instance.alpha.len() == 1 {
        let replies =
            solve_single_student(instance.alpha[0], instance.m).map_err(validation)?;
        out.push_str(&format!(",\"replies\":{}", num_array(&replies)));
    } else {
        let params = GameParams::new(instance.alpha.clone(), instance.m).map_err(validation)?;
        let records = enumerate_equilibria(&params).map_err(validation)?;
        out.push_str(",\"equilibria\":[");
        for (idx, record) in records.iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"kind\":\"{}\",\"profile\":{},\"mean\":{},\"grades\":{},\"utilities\":{}}}",
                kind_label(record.kind),
                num_array(record.profile.efforts()),
                sig12(record.mean),
                num_array(&record.grades()),
                num_array(&record.utilities),
            ));
        }
        out.push(']');
    }
    out.push('}');
    println!("{out}");
    Ok(())
}

pub fn cmd_br(
    path: &Path,
    player: usize,
    mean: Option<f64>,
    grid: Option<f64>,
) -> Result<(), CliError> {
    let (_, params) = load_params(path)?;
    if player >= params.n() {
        return Err(validation(format!(
            "player {player} out of range for {} players",
            params.n()
        )));
    }
    let xbars = match (mean, grid) {
        (Some(x), None) => {
            if !(0.0..=1.0).contains(&x) {
                return Err(validation(format!("--mean must lie in [0, 1], got {x}")));
            }
            vec![x]
        }
        (None, Some(step)) => {
            if !(step > 0.0 && step <= 1.0) {
                return Err(validation(format!("--grid step must lie in (0, 1], got {step}")));
            }
            let mut xs = Vec::new();
            let mut i = 0u64;
            loop {
                let v = (i as f64) * step;
                if v >= 1.0 - 1e-12 {
                    break;
                }
                xs.push(v);
                i += 1;
            }
            xs.push(1.0);
            xs
        }
        _ => return Err(validation("provide exactly one of --mean and --grid")),
    };
    let jump = jump_point(&params, player).map_err(validation)?;
    let mut out = format!("# player={player} jump={}\n", sig12(jump));
    out.push_str("xbar_minus_i,region,reply_low,reply_high,jump\n");
    for xbar in xbars {
        let br = best_response(&params, player, xbar).map_err(validation)?;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(xbar),
            region_label(br.region),
            sig12(br.least()),
            sig12(br.greatest()),
            br.jump.map(sig12).unwrap_or_default(),
        ));
    }
    print!("{out}");
    Ok(())
}

pub fn cmd_sweep(spec_path: &Path, out_path: &Path) -> Result<(), CliError> {
    let sweep = read_sweep(spec_path)?;
    GameParams::new(sweep.fixed.alpha.clone(), sweep.fixed.m).map_err(validation)?;
    let n = sweep.fixed.alpha.len();
    let outer = sweep.axes[0].values();
    let inner = sweep.axes[1].values();
    let cells: Vec<(f64, f64)> = outer
        .iter()
        .flat_map(|&a| inner.iter().map(move |&b| (a, b)))
        .collect();
    let fixed = sweep.fixed.clone();
    let kinds = (sweep.axes[0].kind, sweep.axes[1].kind);
    let row = move |&(a, b): &(f64, f64)| -> Result<String, CliError> {
        let mut alpha = fixed.alpha.clone();
        let mut m = fixed.m;
        for (kind, value) in [(kinds.0, a), (kinds.1, b)] {
            match kind {
                AxisKind::Alpha(i) => alpha[i] = value,
                AxisKind::M => m = value,
            }
        }
        let params = GameParams::new(alpha, m).map_err(validation)?;
        let mut cols = vec![sig12(a), sig12(b)];
        cols.push(exists_no_curve(&params).map_err(validation)?.exists.to_string());
        for k in 0..=n {
            cols.push(exists_k_dont_care(&params, k).map_err(validation)?.exists.to_string());
        }
        Ok(cols.join(","))
    };
    let compute = || cells.par_iter().map(&row).collect::<Result<Vec<String>, CliError>>();
    let rows = match env::var("CURVEGAME_THREADS") {
        Ok(raw) => {
            let threads: usize = raw
                .trim()
                .parse()
                .ok()
                .filter(|&t| t >= 1)
                .ok_or_else(|| {
                    validation(format!("CURVEGAME_THREADS must be a positive integer, got {raw:?}"))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(validation)?
                .install(compute)?
        }
        Err(_) => compute()?,
    };
    let mut header = vec![sweep.axes[0].name(), sweep.axes[1].name(), "no_curve".to_owned()];
    header.extend((0..=n).map(|k| format!("k{k}")));
    let mut data = header.join(",");
    data.push('\n');
    for row in &rows {
        data.push_str(row);
        data.push('\n');
    }
    let mut tmp_name = out_path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, &data).map_err(|e| CliError::Malformed(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, out_path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", out_path.display())))?;
    Ok(())
}

pub fn cmd_dynamics(
    path: &Path,
    which: Extremal,
    trace: Option<&Path>,
    max_iter: Option<usize>,
) -> Result<(), CliError> {
    let (_, params) = load_params(path)?;
    let cap = max_iter.unwrap_or(DEFAULT_MAX_ITER);
    if cap == 0 {
        return Err(validation("--max-iter must be at least 1"));
    }
    let result = iterate_extremal_with(
        &params,
        which,
        None,
        Schedule::Synchronous,
        DEFAULT_TOL,
        cap,
    );
    match result {
        Ok(trajectory) => {
            if let Some(trace_path) = trace {
                let mut data = String::from("iteration");
                for i in 0..params.n() {
                    data.push_str(&format!(",x{i}"));
                }
                data.push('\n');
                for (iteration, profile) in trajectory.steps.iter().enumerate() {
                    data.push_str(&iteration.to_string());
                    for &x in profile.efforts() {
                        data.push(',');
                        data.push_str(&sig12(x));
                    }
                    data.push('\n');
                }
                fs::write(trace_path, data)
                    .map_err(|e| CliError::Malformed(format!("{}: {e}", trace_path.display())))?;
            }
            println!(
                "{{\"limit\":{},\"iterations\":{},\"converged\":true}}",
                num_array(trajectory.limit.efforts()),
                trajectory.iterations
            );
            Ok(())
        }
        Err(DynamicsError::NonConvergence {
            previous,
            last,
            iterations,
        }) => {
            println!(
                "{{\"error\":\"non_convergence\",\"iterations\":{},\"previous\":{},\"last\":{},\"converged\":false}}",
                iterations,
                num_array(previous.efforts()),
                num_array(last.efforts())
            );
            Err(CliError::NonConvergence(format!(
                "no convergence after {iterations} iterations"
            )))
        }
        Err(other) => Err(validation(other)),
    }
}

pub fn cmd_verify(path: &Path, step: Option<f64>, inflation: bool) -> Result<(), CliError> {
    let (_, params) = load_params(path)?;
    if inflation {
        let index = ability_index(&params);
        let report = asymptotic_report(index.value, params.target_mean(), params.abilities())
            .map_err(validation)?;
        println!(
            "{{\"alpha_hat\":{},\"factor\":{},\"curved\":{}}}",
            sig12(index.value),
            sig12(report.factor),
            report.curved
        );
        return Ok(());
    }
    let step = step.ok_or_else(|| validation("provide --step for grid verification or --inflation"))?;
    if !(params.n() == 2 || params.n() == 3) {
        return Err(validation(format!(
            "grid verification supports 2 or 3 players, got {}",
            params.n()
        )));
    }
    let clusters = grid_nash_search(&params, step).map_err(validation)?;
    let records = enumerate_equilibria(&params).map_err(validation)?;
    let slack = step + 1e-9;
    let mut used = vec![false; clusters.len()];
    let mut max_deviation: f64 = 0.0;
    let mut profiles_matched = records.len() == clusters.len();
    for record in &records {
        let mut best: Option<(usize, f64)> = None;
        for (c, cluster) in clusters.iter().enumerate() {
            if used[c] {
                continue;
            }
            let dist = record
                .profile
                .efforts()
                .iter()
                .zip(cluster.representative.efforts())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            if best.map_or(true, |(_, d)| dist < d) {
                best = Some((c, dist));
            }
        }
        match best {
            Some((c, dist)) if dist <= slack => {
                used[c] = true;
                max_deviation = max_deviation.max(dist);
            }
            _ => profiles_matched = false,
        }
    }
    let br_step = step.min(0.01);
    let mut br_checks = 0usize;
    let mut br_mismatches = 0usize;
    for i in 0..params.n() {
        let jump = jump_point(&params, i).map_err(validation)?;
        for xbar in [0.0, 0.25, 0.5, 0.75, 1.0] {
            if (xbar - jump).abs() <= 2.0 * br_step {
                continue;
            }
            let opposing = vec![xbar; params.n() - 1];
            let grid = grid_best_response(&params, i, &opposing, br_step).map_err(validation)?;
            let analytic = best_response(&params, i, xbar).map_err(validation)?;
            br_checks += 1;
            let hit = analytic
                .replies
                .iter()
                .any(|r| (r - grid.best).abs() <= br_step + 1e-12);
            if !hit {
                br_mismatches += 1;
            }
        }
    }
    let agreement = profiles_matched && br_mismatches == 0;
    println!(
        "{{\"equilibria\":{},\"clusters\":{},\"profiles_matched\":{},\"max_deviation\":{},\"br_checks\":{},\"br_mismatches\":{},\"agreement\":{}}}",
        records.len(),
        clusters.len(),
        profiles_matched,
        sig12(max_deviation),
        br_checks,
        br_mismatches,
        agreement
    );
    if agreement {
        Ok(())
    } else {
        Err(CliError::Mismatch(
            "grid oracle disagreed with the analytic solver beyond one grid step".to_owned(),
        ))
    }
}
