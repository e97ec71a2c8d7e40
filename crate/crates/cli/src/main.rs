//! `pony`: solve, report, and plot message-delivery instances from JSON files.
//!
//! Exit codes: 0 success, 2 input error, 3 solver error, 4 resource guard.

use clap::{Parser, Subcommand, ValueEnum};
use pony_core::geometry::distance;
use pony_core::offline_multi::solve_multi;
use pony_core::offline_two::solve_two;
use pony_core::online::{
    build_relay_construction, lb_position_search, lb_speed_search, run_online,
};
use pony_core::oracle::{oracle_two_robot, OracleConfig};
use pony_core::{io, svg, Error, Robot, TOL_SPEED};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pony", version, about = "Minimum-time message delivery planning")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute an offline delivery plan and print it as JSON
    Solve {
        /// Exact two-robot solver or sqrt(2)-approximate grid solver
        #[arg(long, value_enum)]
        mode: Mode,
        /// Additive overhead budget of the grid solver
        #[arg(long, default_value_t = 0.05)]
        eps_prime: f64,
        /// Instance file; `-` reads stdin
        file: String,
    },
    /// Report the online strategy's delivery time and competitive ratio
    Online {
        /// Instance file; `-` reads stdin
        file: String,
    },
    /// Emit the n-robot adversarial relay construction as an instance file
    Adversary {
        /// Number of robots in the chain (at least 3)
        #[arg(long)]
        n: usize,
    },
    /// Run a competitive-ratio lower-bound sweep and print the bound as JSON
    Lowerbound {
        /// Adversary family: speed-blind or position-blind
        #[arg(long, value_enum)]
        kind: Kind,
        /// Sweep resolution per axis (at least 64)
        #[arg(long, default_value_t = 256)]
        res: usize,
    },
    /// Render an instance and its plan as a standalone SVG on stdout
    Plot {
        /// Instance file; `-` reads stdin
        file: String,
        /// Plan file produced by `solve`
        plan: String,
    },
    /// Cross-check a two-robot instance against the brute-force oracle
    Oracle {
        /// Instance file; `-` reads stdin
        file: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Two,
    Multi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Speed,
    Position,
}

enum Failure {
    Input(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInstance(msg) => Failure::Input(msg),
            other => Failure::Solver(other),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e:?}");
            match e {
                Error::GridTooLarge { .. } => ExitCode::from(4),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    check_thread_cap()?;
    match cli.cmd {
        Cmd::Solve { mode, eps_prime, file } => cmd_solve(mode, eps_prime, &file),
        Cmd::Online { file } => cmd_online(&file),
        Cmd::Adversary { n } => cmd_adversary(n),
        Cmd::Lowerbound { kind, res } => cmd_lowerbound(kind, res),
        Cmd::Plot { file, plan } => cmd_plot(&file, &plan),
        Cmd::Oracle { file } => cmd_oracle(&file),
    }
}

// The solvers are single-threaded; the cap is validated so scripts relying on
// it fail loudly rather than silently oversubscribe (0 = auto).
fn check_thread_cap() -> Result<(), Failure> {
    match std::env::var("PONY_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Failure::Input("PONY_THREADS must be a non-negative integer".into()))
        }
        Ok(raw) => raw.parse::<usize>().map(|_| ()).map_err(|_| {
            Failure::Input(format!("PONY_THREADS must be a non-negative integer, got {raw:?}"))
        }),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

fn cmd_solve(mode: Mode, eps_prime: f64, file: &str) -> Result<(), Failure> {
    let instance = io::parse_instance(&read_input(file)?)?;
    let plan = match mode {
        Mode::Two => {
            if instance.robots.len() != 2 {
                return Err(Failure::Input("mode two requires exactly 2 robots".into()));
            }
            solve_two(&instance)?.plan
        }
        Mode::Multi => solve_multi(&instance, eps_prime)?,
    };
    println!("{}", io::plan_to_json(&plan));
    Ok(())
}

fn cmd_online(file: &str) -> Result<(), Failure> {
    let instance = io::parse_instance(&read_input(file)?)?;
    let outcome = run_online(&instance)?;
    println!("online time: {:.12}", outcome.delivery_time);
    println!("winning robot: {}", outcome.winning_robot);
    match instance.robots.len() {
        // a lone robot has no strategy other than the online one
        1 => {
            println!("offline time: {:.12}", outcome.delivery_time);
            println!("ratio: {:.12}", 1.0);
        }
        2 => {
            let offline = solve_two(&instance)?.total_time();
            println!("offline time: {:.12}", offline);
            println!("ratio: {:.12}", outcome.delivery_time / offline);
        }
        _ => {
            let eps = 0.05;
            let grid = solve_multi(&instance, eps)?.total_time;
            let lo = grid / std::f64::consts::SQRT_2 - eps;
            println!("offline time in: [{:.12}, {:.12}]", lo.max(0.0), grid);
            if lo > 0.0 {
                println!(
                    "ratio in: [{:.12}, {:.12}]",
                    outcome.delivery_time / grid,
                    outcome.delivery_time / lo
                );
            } else {
                println!("ratio in: [{:.12}, inf)", outcome.delivery_time / grid);
            }
        }
    }
    Ok(())
}

fn cmd_adversary(n: usize) -> Result<(), Failure> {
    let chain = build_relay_construction(n).map_err(|e| match e {
        Error::InvalidN => Failure::Input("n must be at least 3".into()),
        other => Failure::Solver(other),
    })?;
    println!("{}", io::instance_to_json(&chain.as_instance()));
    Ok(())
}

fn cmd_lowerbound(kind: Kind, res: usize) -> Result<(), Failure> {
    if res < 64 {
        return Err(Failure::Input("res must be at least 64".into()));
    }
    let report = match kind {
        Kind::Speed => {
            let (bound, at) = lb_speed_search(res, res, res);
            serde_json::json!({
                "kind": "speed",
                "bound": bound,
                "argmax": { "v": at.v, "alpha": at.alpha, "beta": at.beta },
            })
        }
        Kind::Position => {
            let (bound, (v, alpha)) = lb_position_search(res, res);
            serde_json::json!({
                "kind": "position",
                "bound": bound,
                "argmax": { "v": v, "alpha": alpha },
            })
        }
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serialization"));
    Ok(())
}

fn cmd_plot(file: &str, plan_path: &str) -> Result<(), Failure> {
    let instance = io::parse_instance(&read_input(file)?)?;
    let plan = io::parse_plan(&read_input(plan_path)?)?;
    if plan.trajectories.len() != instance.robots.len() {
        return Err(Failure::Input(format!(
            "plan has {} trajectories for {} robots",
            plan.trajectories.len(),
            instance.robots.len()
        )));
    }
    println!("{}", svg::render(&instance, &plan));
    Ok(())
}

fn cmd_oracle(file: &str) -> Result<(), Failure> {
    let instance = io::parse_instance(&read_input(file)?)?;
    if instance.robots.len() != 2 {
        return Err(Failure::Input("oracle requires exactly 2 robots".into()));
    }
    let (r0, r1) = (instance.robots[0], instance.robots[1]);
    let (slow, fast) = if r0.speed <= r1.speed { (r0, r1) } else { (r1, r0) };
    let time = if fast.speed / slow.speed <= 1.0 + TOL_SPEED {
        // equal speeds: a handover cannot help, report the better solo
        let solo = |r: Robot| {
            (distance(r.start, instance.source) + distance(instance.source, instance.destination))
                / r.speed
        };
        solo(r0).min(solo(r1))
    } else {
        let v = fast.speed / slow.speed;
        oracle_two_robot(
            slow.start,
            fast.start,
            instance.source,
            instance.destination,
            v,
            &OracleConfig::default(),
        ) / slow.speed
    };
    println!("oracle time: {time:.12}");
    Ok(())
}
