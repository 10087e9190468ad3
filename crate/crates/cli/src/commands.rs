use crate::settings::{config_json, num, parse_list, write_text, CliError, CliResult, EXIT_NUMERICAL, EXIT_OK};
use clap::ArgMatches;
use eulerfan::diag::*;
use eulerfan::fv2d::dump::{read_snapshot, write_snapshot};
use eulerfan::fv2d::init::auto_extent;
use eulerfan::fv2d::{simulate, triple_schedule, Grid2D, RunConfig, SimOptions};
use eulerfan::jets::{first_jets_point, ode_oracle, trace_point, RightBoundaryTrace};
use eulerfan::pattern::{build_rvr, build_sr, supersonic_predicate};
use eulerfan::riemann::{classify_and_solve, WaveKind};
use eulerfan::{Data, Fan, Gas, Prim};
use serde_json::json;
use std::path::{Path, PathBuf};

const TIME_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;

fn emit(path: Option<&String>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json(path: Option<&String>, v: &serde_json::Value) -> CliResult<()> {
    if let Some(p) = path {
        write_text(p, &(serde_json::to_string_pretty(v).unwrap() + "\n"))?;
    }
    Ok(())
}

fn samples(m: &ArgMatches) -> CliResult<usize> {
    let n = *m.get_one::<usize>("samples").unwrap();
    if n < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    Ok(n)
}

/// Sampling window covering every finite wave edge.
fn xi_window(m: &ArgMatches, edges: &[f64]) -> (f64, f64) {
    let finite: Vec<f64> = edges.iter().copied().filter(|e| e.is_finite()).collect();
    let (lo, hi) = if finite.is_empty() {
        (-1.0, 1.0)
    } else {
        let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pad = 0.25 * (hi - lo).max(0.5);
        (lo - pad, hi + pad)
    };
    (m.get_one::<f64>("xi_min").copied().unwrap_or(lo), m.get_one::<f64>("xi_max").copied().unwrap_or(hi))
}

fn profile_csv(n: usize, (lo, hi): (f64, f64), g: &Gas, f: impl Fn(f64) -> Prim) -> String {
    let mut out = String::from("xi,rho,v1,v2,c\n");
    for k in 0..n {
        let xi = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let s = f(xi);
        let c = if s.rho > 0.0 { s.c(g) } else { 0.0 };
        out.push_str(&format!("{},{},{},{},{}\n", num(xi), num(s.rho), num(s.v1), num(s.v2), num(c)));
    }
    out
}

fn state_line(name: &str, g: &Gas, s: &Prim) -> String {
    format!("{name:<10} rho = {}  v1 = {}  v2 = {}  c = {}", s.rho, s.v1, s.v2, s.c(g))
}

fn fan_json(fan: &Fan) -> serde_json::Value {
    json!({
        "pattern": fan.pattern.name(),
        "middles": fan.middles(),
        "left_wave": fan.left_wave,
        "right_wave": fan.right_wave,
        "contact": fan.contact,
        "vacuum_interval": fan.vacuum_interval,
        "speeds": fan.speeds(),
        "iterations": fan.iterations,
    })
}

pub fn solve1d(m: &ArgMatches, cfg: &RunConfig) -> CliResult<i32> {
    let data = cfg.base()?;
    let fan = classify_and_solve(&data).map_err(|e| CliError::numerical(format!("solver failure: {e}")))?;
    let g = data.g;
    println!("pattern {}", fan.pattern);
    for (k, s) in fan.middles().iter().enumerate() {
        let name = if fan.middles().len() == 2 { ["mid_left", "mid_right"][k] } else { "mid" };
        println!("{}", state_line(name, &g, s));
    }
    for w in [fan.left_wave, fan.right_wave].into_iter().flatten() {
        let kind = if w.kind == WaveKind::Shock { "shock" } else { "rarefaction" };
        println!("wave       {:?} {kind}  head = {}  tail = {}", w.family, w.head, w.tail);
    }
    if let Some(s) = fan.contact {
        println!("contact    speed = {s}");
    }
    if let Some((a, b)) = fan.vacuum_interval {
        println!("vacuum     [{a}, {b}]");
    }
    let n = samples(m)?;
    let window = xi_window(m, &fan.edges());
    if let Some(p) = m.get_one::<String>("csv") {
        write_text(p, &profile_csv(n, window, &g, |xi| fan.sample(xi)))?;
    }
    write_json(m.get_one::<String>("json"), &json!({ "config": config_json(cfg), "solution": fan_json(&fan) }))?;
    Ok(EXIT_OK)
}

pub fn construct(m: &ArgMatches, cfg: &RunConfig) -> CliResult<i32> {
    let data = cfg.base()?;
    let g = data.g;
    let kind = m.get_one::<String>("kind").unwrap().as_str();
    let n = samples(m)?;
    let (value, csv) = match kind {
        "sr" => {
            let bg = build_sr(&data)?;
            let edges = [bg.shock_speed, bg.fan_inner_slope, bg.fan_outer_slope];
            let csv = profile_csv(n, xi_window(m, &edges), &g, |xi| bg.sample(xi));
            (serde_json::to_value(&bg).unwrap(), csv)
        }
        _ => {
            let bg = build_rvr(&data)?;
            let edges = [bg.left_fan.0, bg.left_fan.1, bg.vortex_speed, bg.right_fan.0, bg.right_fan.1];
            let csv = profile_csv(n, xi_window(m, &edges), &g, |xi| bg.sample(xi));
            let sup = supersonic_predicate(&g, &data.left, &data.right)?;
            let mut v = serde_json::to_value(&bg).unwrap();
            v["supersonic"] = json!({ "holds": sup.holds, "margin": sup.margin });
            (v, csv)
        }
    };
    let out = json!({ "config": config_json(cfg), "construction": kind, "background": value });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    if let Some(p) = m.get_one::<String>("csv") {
        write_text(p, &csv)?;
    }
    Ok(EXIT_OK)
}

fn effective_extent(cfg: &RunConfig) -> CliResult<f64> {
    Ok(match cfg.x1_extent {
        Some(x) => x,
        None => auto_extent(cfg)?,
    })
}

pub fn simulate_cmd(m: &ArgMatches, cfg: &RunConfig) -> CliResult<i32> {
    cfg.validate()?;
    let dir = PathBuf::from(m.get_one::<String>("out").unwrap());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::data(format!("{}: {e}", dir.display())))?;
    let centres = match m.get_one::<String>("times") {
        Some(s) => parse_list(s)?,
        None => vec![cfg.t_end],
    };
    let schedule = match m.get_one::<f64>("delta") {
        Some(&d) if d > 0.0 => triple_schedule(&centres, d),
        Some(_) => return Err(CliError::usage("--delta must be positive")),
        None => centres.clone(),
    };
    if let Some(t) = schedule.iter().find(|&&t| t < 0.0 || t > cfg.t_end + TIME_TOL) {
        return Err(CliError::usage(format!("snapshot time {t} outside [0, t_end = {}]", cfg.t_end)));
    }
    let extent = effective_extent(cfg)?;
    let (snapshots, steps, ledger) = if m.get_flag("exact") {
        let data = cfg.base()?;
        let grids: CliResult<Vec<Grid2D>> =
            schedule.iter().map(|&t| Ok(analytic_grid(&data, cfg.nx, cfg.ny, extent, t)?)).collect();
        (grids?, 0, 0.0)
    } else {
        let opts = SimOptions { schedule: schedule.clone(), abort_dump: Some(dir.join("abort.snap")) };
        let run = simulate(&RunConfig { x1_extent: Some(extent), ..cfg.clone() }, &opts)?;
        (run.snapshots, run.ledger.len(), run.max_ledger_residual)
    };
    let mut files = Vec::new();
    for (k, g) in snapshots.iter().enumerate() {
        let name = format!("snap_{k:04}.snap");
        write_snapshot(&dir.join(&name), g)?;
        files.push(json!({ "file": name, "time": g.time }));
    }
    let summary = json!({
        "config": config_json(cfg),
        "x1_extent": extent,
        "exact": m.get_flag("exact"),
        "steps": steps,
        "max_ledger_residual": ledger,
        "snapshots": files,
    });
    let text = serde_json::to_string_pretty(&summary).unwrap() + "\n";
    write_text(dir.join("summary.json").to_str().unwrap(), &text)?;
    println!("wrote {} snapshots to {}", snapshots.len(), dir.display());
    Ok(EXIT_OK)
}

const CHECKS: [&str; 5] = ["fan", "z", "wave_transport", "frame", "omega"];

fn region_of(spec: &str, data: &Data, margin: usize) -> CliResult<Region> {
    match spec {
        "all" => Ok(Region::all()),
        "fan" => Ok(Region::right_fan(&classify_and_solve(data)?, margin)?),
        s => {
            let parts: Vec<&str> = s.split(':').collect();
            match parts.as_slice() {
                ["xi", a, b] => {
                    let a = a.parse::<f64>().map_err(|_| CliError::usage(format!("bad region '{s}'")))?;
                    let b = b.parse::<f64>().map_err(|_| CliError::usage(format!("bad region '{s}'")))?;
                    Ok(Region::slopes(s, a, b, margin))
                }
                _ => Err(CliError::usage(format!("region '{s}': expected all, fan or xi:MIN:MAX"))),
            }
        }
    }
}

/// Centres of equally spaced snapshot triples.
fn triple_centres(grids: &[Grid2D]) -> Vec<f64> {
    grids
        .windows(3)
        .filter(|w| ((w[2].time - w[1].time) - (w[1].time - w[0].time)).abs() <= TIME_TOL && w[2].time > w[1].time)
        .map(|w| w[1].time)
        .collect()
}

struct Verdict {
    check: String,
    time: f64,
    value: f64,
    tol: f64,
}

pub fn diagnose(m: &ArgMatches) -> CliResult<i32> {
    let checks: Vec<String> = m
        .get_one::<String>("checks")
        .map(|s| s.split(',').map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect())
        .unwrap_or_default();
    if let Some(c) = checks.iter().find(|c| !CHECKS.contains(&c.as_str())) {
        return Err(CliError::usage(format!("unknown check '{c}'; known: {}", CHECKS.join(", "))));
    }
    if checks.is_empty() {
        return Ok(EXIT_OK);
    }
    let paths: Vec<&String> = m.get_many::<String>("snapshots").map(|v| v.collect()).unwrap_or_default();
    if paths.is_empty() {
        return Err(CliError::usage("no snapshot files given"));
    }
    let mut grids = paths.iter().map(|p| read_snapshot(Path::new(p.as_str()))).collect::<Result<Vec<_>, _>>()?;
    grids.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap());
    let data = grids[0].base;
    let margin = *m.get_one::<usize>("margin").unwrap();
    let region = region_of(m.get_one::<String>("region").unwrap(), &data, margin)?;
    let requested = m.get_one::<String>("times").map(|s| parse_list(s)).transpose()?;
    let tol = |name: &str| *m.get_one::<f64>(name).unwrap();
    let mut report = DiagnosticsReport::default();
    let mut verdicts = Vec::new();
    let snapshot_times = |want: &Option<Vec<f64>>| -> CliResult<Vec<&Grid2D>> {
        match want {
            None => Ok(grids.iter().filter(|g| g.time > 0.0).collect()),
            Some(ts) => ts
                .iter()
                .map(|&t| grids.iter().find(|g| (g.time - t).abs() <= TIME_TOL).ok_or_else(|| CliError::data(format!("no snapshot at t = {t}"))))
                .collect(),
        }
    };
    let centres = match &requested {
        Some(ts) => ts.clone(),
        None => triple_centres(&grids),
    };
    for check in &checks {
        match check.as_str() {
            "fan" | "z" => {
                for g in snapshot_times(&requested)? {
                    let (name, rep, limit) = if check == "fan" {
                        ("fan_slope_dev", fan_profile_check(g, &region)?, tol("tol_fan"))
                    } else {
                        let limit = m.get_one::<f64>("tol_z").copied().unwrap_or(0.05 + 2.0 * g.dx1);
                        ("z", mathring_quantities(g, &region)?.1, limit)
                    };
                    verdicts.push(Verdict { check: check.clone(), time: g.time, value: rep.get(name).unwrap().max, tol: limit });
                    report.extend(rep);
                }
            }
            _ => {
                if centres.is_empty() {
                    return Err(CliError::data(format!("check {check} needs a snapshot triple t - d, t, t + d")));
                }
                for &t in &centres {
                    let tr = SnapshotTriple::find(&grids, t)?;
                    let (rep, limit) = match check.as_str() {
                        "wave_transport" => (wave_transport_residual(&tr, &region)?, tol("tol_wave")),
                        "frame" => (vorticity_frame_identity(&tr, &region)?, tol("tol_frame")),
                        _ => (transport_residual_omega(&tr, &region)?, tol("tol_omega")),
                    };
                    let value = rep.rows.iter().filter(|r| r.name != "sup_Omega").map(|r| r.max).fold(0.0f64, f64::max);
                    verdicts.push(Verdict { check: check.clone(), time: t, value, tol: limit });
                    report.extend(rep);
                }
            }
        }
    }
    emit(m.get_one::<String>("csv"), &report.to_csv())?;
    let pass = verdicts.iter().all(|v| v.value <= v.tol);
    let summary = json!({
        "region": region.name,
        "pass": pass,
        "checks": verdicts.iter().map(|v| json!({
            "check": v.check, "time": v.time, "value": v.value, "tol": v.tol, "pass": v.value <= v.tol
        })).collect::<Vec<_>>(),
        "rows": report.rows,
    });
    write_json(m.get_one::<String>("json"), &summary)?;
    for v in verdicts.iter().filter(|v| v.value > v.tol) {
        eprintln!("check {} failed at t = {}: {} > {}", v.check, v.time, v.value, v.tol);
    }
    Ok(if pass { EXIT_OK } else { EXIT_NUMERICAL })
}

const TRACE_COLUMNS: [&str; 9] = ["theta", "c_r", "v1_r", "v2_r", "omega_r", "d2v2_r", "l_w_r", "l_psi2_r", "l_omega_r"];

pub fn read_trace(text: &str) -> CliResult<RightBoundaryTrace<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| CliError::data("empty trace file"))?.split(',').map(str::trim).collect();
    let idx: Vec<usize> = TRACE_COLUMNS
        .iter()
        .map(|c| header.iter().position(|h| h == c).ok_or_else(|| CliError::data(format!("trace is missing column '{c}'"))))
        .collect::<CliResult<_>>()?;
    let mut cols = vec![Vec::new(); TRACE_COLUMNS.len()];
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != header.len() {
            return Err(CliError::data(format!("trace row {}: expected {} fields", n + 2, header.len())));
        }
        for (col, &i) in cols.iter_mut().zip(&idx) {
            col.push(f[i].parse::<f64>().map_err(|_| CliError::data(format!("trace row {}: bad number '{}'", n + 2, f[i])))?);
        }
    }
    let mut it = cols.into_iter();
    let mut next = || it.next().unwrap();
    let tr = RightBoundaryTrace {
        theta: next(),
        c_r: next(),
        v1_r: next(),
        v2_r: next(),
        omega_r: next(),
        d2v2_r: next(),
        l_w_r: next(),
        l_psi2_r: next(),
        l_omega_r: next(),
    };
    tr.validate()?;
    Ok(tr)
}

pub fn trace_csv(tr: &RightBoundaryTrace<f64>) -> String {
    let mut out = TRACE_COLUMNS.join(",") + "\n";
    for k in 0..tr.len() {
        let p = tr.node(k);
        let row = [tr.theta[k], p.c_r, p.v1_r, p.v2_r, p.omega_r, p.d2v2_r, p.l_w_r, p.l_psi2_r, p.l_omega_r];
        out.push_str(&row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn jets(m: &ArgMatches, cfg: &RunConfig) -> CliResult<i32> {
    let g = cfg.gas()?;
    let tr = match m.get_one::<String>("trace") {
        Some(p) => read_trace(&std::fs::read_to_string(p).map_err(|e| CliError::data(format!("{p}: {e}")))?)?,
        None => {
            let base = cfg.base()?.right;
            let nodes = *m.get_one::<usize>("nodes").unwrap();
            if nodes < 4 {
                return Err(CliError::usage("--nodes must be at least 4"));
            }
            RightBoundaryTrace::random(base.c(&g), base.v1, base.v2, nodes, *m.get_one::<f64>("amp").unwrap(), cfg.seed)
        }
    };
    if let Some(p) = m.get_one::<String>("write_trace") {
        write_text(p, &trace_csv(&tr))?;
    }
    let u_bar = tr.u_bar(&g);
    let u_max = m.get_one::<f64>("u_max").copied().unwrap_or(0.9 * u_bar);
    if !(u_max > 0.0 && u_max < u_bar / 0.95) {
        return Err(CliError::usage(format!("--u-max must lie in (0, {}) to stay off vacuum", u_bar / 0.95)));
    }
    let points = *m.get_one::<usize>("u_points").unwrap();
    if points < 2 {
        return Err(CliError::usage("--u-points must be at least 2"));
    }
    let mut out = String::from("u,theta,c,wbar,w,psi2,omega,l_wbar,l_w,l_psi2,l_omega\n");
    for k in 0..tr.len() {
        let p = tr.node(k);
        for i in 0..points {
            let u = u_max * i as f64 / (points - 1) as f64;
            let s = trace_point(&g, &p, u)?;
            let j = first_jets_point(&g, &p, u)?;
            let row = [u, tr.theta[k], s.c, s.wbar, s.w, s.psi2, s.omega, j.l_wbar, j.l_w, j.l_psi2, j.l_omega];
            out.push_str(&row.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
    }
    emit(m.get_one::<String>("csv"), &out)?;
    if m.get_flag("oracle") {
        let or = ode_oracle(&tr, &g, u_max, u_max * 1e-4)?;
        let mut worst: f64 = 0.0;
        for k in 0..tr.len() {
            let p = tr.node(k);
            for (i, &u) in or.u.iter().enumerate() {
                let j = first_jets_point(&g, &p, u)?;
                let o = or.jets[k][i];
                for (a, b) in [(j.l_wbar, o.l_wbar), (j.l_w, o.l_w), (j.l_psi2, o.l_psi2), (j.l_omega, o.l_omega)] {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        eprintln!("oracle max |closed form - RK4| = {worst:e} (tolerance {ORACLE_TOL:e})");
        if !(worst <= ORACLE_TOL) {
            return Ok(EXIT_NUMERICAL);
        }
    }
    Ok(EXIT_OK)
}

/// Errors at or below this are reported as exact; their order is `NA`.
const EXACT_ERROR: f64 = 1e-13;

pub fn converge(m: &ArgMatches, cfg: &RunConfig) -> CliResult<i32> {
    if cfg.epsilon != 0.0 {
        return Err(CliError::usage("converge compares against the exact solution and needs epsilon = 0"));
    }
    cfg.validate()?;
    let levels = *m.get_one::<usize>("levels").unwrap();
    if levels < 3 {
        return Err(CliError::usage("--levels must be at least 3"));
    }
    let extent = effective_extent(cfg)?;
    let data = cfg.base()?;
    let fan = classify_and_solve(&data)?;
    let margin = *m.get_one::<usize>("margin").unwrap();
    let region = region_of(m.get_one::<String>("region").unwrap(), &data, margin)?;
    let t = cfg.t_end;
    if !(t > 0.0) {
        return Err(CliError::usage("converge needs t_end > 0"));
    }
    let mut rows: Vec<(f64, usize, f64)> = Vec::new();
    for k in 0..levels {
        let nx = cfg.nx << k;
        let run_cfg = RunConfig { nx, x1_extent: Some(extent), ..cfg.clone() };
        let run = simulate(&run_cfg, &SimOptions { schedule: vec![t], ..Default::default() })?;
        let grid = run.snapshots.last().ok_or_else(|| CliError::numerical("run produced no snapshot"))?;
        let mesh = Mesh::of_grid(grid);
        let sel = region.select(&mesh, t, None);
        let (mut err, mut area) = (0.0, 0.0);
        for i in 0..grid.nx {
            let exact = fan.sample(grid.x1(i) / t).rho;
            for j in 0..grid.ny {
                let k = grid.idx(i, j);
                if sel[k] {
                    err += (grid.cells[k].q0 - exact).abs() * mesh.area();
                    area += mesh.area();
                }
            }
        }
        if area == 0.0 {
            return Err(CliError::data(format!("region {} selects no cells", region.name)));
        }
        rows.push((grid.dx1, nx, err / area));
    }
    let mut out = String::from("h,nx,l1_error,order\n");
    let mut monotone = true;
    for (k, &(h, nx, e)) in rows.iter().enumerate() {
        let order = if k == 0 {
            "NA".to_string()
        } else {
            let prev = rows[k - 1].2;
            if e > prev {
                monotone = false;
            }
            if prev <= EXACT_ERROR || e <= EXACT_ERROR {
                "NA".to_string()
            } else {
                num((prev / e).ln() / (rows[k - 1].0 / h).ln())
            }
        };
        out.push_str(&format!("{},{nx},{},{order}\n", num(h), num(e)));
    }
    emit(m.get_one::<String>("csv"), &out)?;
    write_json(m.get_one::<String>("json"), &json!({ "config": config_json(cfg), "region": region.name, "monotone": monotone }))?;
    if !monotone {
        eprintln!("warning: errors are not monotone under refinement");
        if m.get_flag("strict") {
            return Ok(EXIT_NUMERICAL);
        }
    }
    Ok(EXIT_OK)
}
