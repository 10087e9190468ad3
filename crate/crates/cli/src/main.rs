//! Command-line driver: exact Riemann solutions, background constructions,
//! perturbed simulations, diagnostics, singularity jets and refinement studies.
//!
//! Exit codes: 0 pass, 1 numerical failure, 2 usage error, 3 data error.

mod commands;
mod settings;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use eulerfan::fv2d::config::CONFIG_KEYS;
use settings::{CliResult, EXIT_USAGE};

/// `--config FILE` plus one `--<key> VALUE` flag per configuration key.
fn with_config(cmd: Command) -> Command {
    let cmd = cmd.arg(Arg::new("config").long("config").value_name("FILE").help("key = value settings file"));
    CONFIG_KEYS.iter().fold(cmd, |c, &k| c.arg(Arg::new(k).long(k).value_name("VALUE").allow_negative_numbers(true).help_heading("Configuration")))
}

fn sampling(cmd: Command) -> Command {
    cmd.arg(Arg::new("samples").long("samples").value_parser(value_parser!(usize)).default_value("201"))
        .arg(Arg::new("xi_min").long("xi-min").value_parser(value_parser!(f64)).allow_negative_numbers(true))
        .arg(Arg::new("xi_max").long("xi-max").value_parser(value_parser!(f64)).allow_negative_numbers(true))
        .arg(Arg::new("csv").long("csv").value_name("PATH").help("profile U(xi) as CSV"))
}

fn cli() -> Command {
    let f64_arg = |name: &'static str, long: &'static str, default: &'static str| {
        Arg::new(name).long(long).value_parser(value_parser!(f64)).default_value(default)
    };
    Command::new("eulerfan")
        .about("Centred waves, vortex sheets and acoustical diagnostics for 2-D isentropic Euler")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(with_config(sampling(
            Command::new("solve1d")
                .about("Exact Riemann solution: pattern, middle states, speeds and a sampled profile")
                .arg(Arg::new("json").long("json").value_name("PATH")),
        )))
        .subcommand(with_config(sampling(
            Command::new("construct")
                .about("Background S-R or R-V-R construction")
                .arg(Arg::new("kind").required(true).value_parser(["sr", "rvr"])),
        )))
        .subcommand(with_config(
            Command::new("simulate")
                .about("Finite-volume run writing snapshot files and summary.json")
                .arg(Arg::new("out").long("out").required(true).value_name("DIR"))
                .arg(Arg::new("times").long("times").value_name("T1,T2,..").help("snapshot times (default t_end)"))
                .arg(Arg::new("delta").long("delta").value_parser(value_parser!(f64)).help("also write t - delta and t + delta"))
                .arg(Arg::new("exact").long("exact").action(ArgAction::SetTrue).help("write the exact self-similar solution instead")),
        ))
        .subcommand(
            Command::new("diagnose")
                .about("Residual and identity checks on snapshot files")
                .arg(Arg::new("snapshots").num_args(0..).value_name("SNAPSHOT"))
                .arg(Arg::new("checks").long("checks").value_name("LIST").help("comma list of fan, z, wave_transport, frame, omega"))
                .arg(Arg::new("region").long("region").default_value("fan").help("all, fan or xi:MIN:MAX"))
                .arg(Arg::new("margin").long("margin").value_parser(value_parser!(usize)).default_value("3"))
                .arg(Arg::new("times").long("times").value_name("T1,T2,.."))
                .arg(f64_arg("tol_fan", "tol-fan", "0.1"))
                .arg(Arg::new("tol_z").long("tol-z").value_parser(value_parser!(f64)).help("default 0.05 + 2 dx1"))
                .arg(f64_arg("tol_wave", "tol-wave", "0.01"))
                .arg(f64_arg("tol_frame", "tol-frame", "0.01"))
                .arg(f64_arg("tol_omega", "tol-omega", "0.01"))
                .arg(Arg::new("csv").long("csv").value_name("PATH").help("rows as CSV (default stdout)"))
                .arg(Arg::new("json").long("json").value_name("PATH")),
        )
        .subcommand(with_config(
            Command::new("jets")
                .about("Traces and first L-jets on the initial singularity")
                .arg(Arg::new("trace").long("trace").value_name("CSV").help("right boundary trace; default a seeded random one"))
                .arg(Arg::new("nodes").long("nodes").value_parser(value_parser!(usize)).default_value("16"))
                .arg(f64_arg("amp", "amp", "0.1"))
                .arg(Arg::new("write_trace").long("write-trace").value_name("CSV"))
                .arg(Arg::new("u_max").long("u-max").value_parser(value_parser!(f64)))
                .arg(Arg::new("u_points").long("u-points").value_parser(value_parser!(usize)).default_value("11"))
                .arg(Arg::new("oracle").long("oracle").action(ArgAction::SetTrue).help("compare with the RK4 oracle"))
                .arg(Arg::new("csv").long("csv").value_name("PATH")),
        ))
        .subcommand(with_config(
            Command::new("converge")
                .about("Refinement ladder against the exact solution")
                .arg(Arg::new("levels").long("levels").value_parser(value_parser!(usize)).default_value("3"))
                .arg(Arg::new("region").long("region").default_value("all"))
                .arg(Arg::new("margin").long("margin").value_parser(value_parser!(usize)).default_value("3"))
                .arg(Arg::new("strict").long("strict").action(ArgAction::SetTrue).help("exit 1 on non-monotone errors"))
                .arg(Arg::new("csv").long("csv").value_name("PATH"))
                .arg(Arg::new("json").long("json").value_name("PATH")),
        ))
}

fn dispatch(name: &str, m: &ArgMatches) -> CliResult<i32> {
    if name == "diagnose" {
        return commands::diagnose(m);
    }
    let cfg = settings::load(m)?;
    match name {
        "solve1d" => commands::solve1d(m, &cfg),
        "construct" => commands::construct(m, &cfg),
        "simulate" => commands::simulate_cmd(m, &cfg),
        "jets" => commands::jets(m, &cfg),
        _ => commands::converge(m, &cfg),
    }
}

fn main() {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let code = match dispatch(name, sub) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    std::process::exit(code);
}
