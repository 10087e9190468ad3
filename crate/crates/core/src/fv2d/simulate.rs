use super::config::RunConfig;
use super::dump::write_snapshot;
use super::grid::Grid2D;
use super::init::init_perturbed;
use super::step::{stable_dt, step_dt, StepInfo, StepParams, DT_MIN};
use crate::error::{Error, Result};
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Snapshots at the scheduled times, in increasing time order.
    pub snapshots: Vec<Grid2D>,
    pub ledger: Vec<StepInfo>,
    /// Largest relative ledger mismatch over all steps.
    pub max_ledger_residual: f64,
    pub final_grid: Grid2D,
}

#[derive(Debug, Clone, Default)]
pub struct SimOptions {
    /// Snapshot times; times beyond t_end are ignored.
    pub schedule: Vec<f64>,
    /// Where to write the last good grid if a step fails.
    pub abort_dump: Option<PathBuf>,
}

/// Times t − δ, t, t + δ for each centre, for centred time derivatives.
pub fn triple_schedule(centres: &[f64], delta: f64) -> Vec<f64> {
    let mut out: Vec<f64> = centres.iter().flat_map(|&t| [t - delta, t, t + delta]).filter(|&t| t >= 0.0).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

const TIME_TOL: f64 = 1e-12;

/// Advances `grid` to `t_end`, hitting every scheduled time exactly.
pub fn run_grid(
    mut grid: Grid2D,
    params: &StepParams,
    t_end: f64,
    opts: &SimOptions,
    probe: &mut dyn FnMut(&Grid2D) -> Result<()>,
) -> Result<RunRecord> {
    let mut schedule: Vec<f64> = opts.schedule.iter().copied().filter(|&t| t <= t_end + TIME_TOL && t >= grid.time - TIME_TOL).collect();
    schedule.sort_by(|a, b| a.partial_cmp(b).unwrap());
    schedule.dedup();
    let mut snapshots = Vec::new();
    let mut ledger = Vec::new();
    let mut worst: f64 = 0.0;
    let mut next = 0;
    let mut take = |grid: &Grid2D, next: &mut usize, snaps: &mut Vec<Grid2D>| -> Result<()> {
        while *next < schedule.len() && (schedule[*next] - grid.time).abs() <= TIME_TOL {
            snaps.push(grid.clone());
            probe(grid)?;
            *next += 1;
        }
        Ok(())
    };
    take(&grid, &mut next, &mut snapshots)?;
    while grid.time < t_end - TIME_TOL {
        let target = if next < schedule.len() { schedule[next].min(t_end) } else { t_end };
        let dt_cfl = stable_dt(&grid, params.cfl);
        if !(dt_cfl >= DT_MIN) {
            let err = Error::DtUnderflow { dt: dt_cfl, time: grid.time };
            return Err(dump_on_abort(&grid, opts, err));
        }
        let hit = grid.time + dt_cfl >= target - TIME_TOL;
        let dt = if hit { target - grid.time } else { dt_cfl };
        let (mut g2, info) = match step_dt(&grid, params, dt) {
            Ok(x) => x,
            Err(e) => return Err(dump_on_abort(&grid, opts, e)),
        };
        if hit {
            g2.time = target;
        }
        worst = worst.max(info.ledger_residual(g2.totals()));
        ledger.push(info);
        grid = g2;
        take(&grid, &mut next, &mut snapshots)?;
    }
    Ok(RunRecord { snapshots, ledger, max_ledger_residual: worst, final_grid: grid })
}

fn dump_on_abort(grid: &Grid2D, opts: &SimOptions, err: Error) -> Error {
    match &opts.abort_dump {
        Some(p) => match write_snapshot(p, grid) {
            Ok(()) => Error::Data(format!("{err}; last good state written to {}", p.display())),
            Err(e2) => Error::Data(format!("{err}; abort dump failed: {e2}")),
        },
        None => err,
    }
}

/// Deterministic run from a configuration.
pub fn simulate(cfg: &RunConfig, opts: &SimOptions) -> Result<RunRecord> {
    simulate_with(cfg, opts, &mut |_| Ok(()))
}

pub fn simulate_with(cfg: &RunConfig, opts: &SimOptions, probe: &mut dyn FnMut(&Grid2D) -> Result<()>) -> Result<RunRecord> {
    let grid = init_perturbed(cfg)?;
    run_grid(grid, &StepParams::from(cfg), cfg.t_end, opts, probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv2d::config::{PerturbationKind, RunConfig};

    #[test]
    fn reruns_are_bit_identical() {
        let cfg = RunConfig { nx: 32, ny: 8, epsilon: 0.02, perturbation: PerturbationKind::Full, t_end: 0.2, order: 2, seed: 7, ..Default::default() };
        let opts = SimOptions { schedule: vec![0.1, 0.2], ..Default::default() };
        let a = simulate(&cfg, &opts).unwrap();
        let b = simulate(&cfg, &opts).unwrap();
        assert_eq!(a.snapshots.len(), 2);
        for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
            assert_eq!(x.cells, y.cells);
            assert_eq!(x.time, y.time);
        }
        assert_eq!(a.snapshots[0].time, 0.1);
    }

    #[test]
    fn zero_end_time_echoes_initial_data() {
        let cfg = RunConfig { nx: 8, ny: 4, t_end: 0.0, x1_extent: Some(1.0), ..Default::default() };
        let r = simulate(&cfg, &SimOptions { schedule: vec![0.0], ..Default::default() }).unwrap();
        assert_eq!(r.snapshots.len(), 1);
        assert_eq!(r.final_grid, init_perturbed(&cfg).unwrap());
        assert!(r.ledger.is_empty());
    }

    #[test]
    fn triples_are_sorted() {
        assert_eq!(triple_schedule(&[0.5, 0.25], 0.01), vec![0.24, 0.25, 0.26, 0.49, 0.5, 0.51]);
    }
}
