//! `edss`: runs, sweeps and checks for the separable-carrier simulator.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical invariant violation.

mod output;

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use edss_core::channels::{ChannelKind, NoiseScenario};
use edss_core::correlations::discord;
use edss_core::protocols::{
    adversary_scan, alpha_initial_state, beta_memory_state, distribution_audit, random_two_qubit_state,
    run_alpha, run_beta, run_ded, run_edss_via_zalm, seeded_rng, zalm_map, EdssProtocol, Measurement,
    ProtocolOutcome, MAX_STUDIED_ITERATIONS,
};
use edss_core::sweeps::{
    nominal_success_probability, probability_curves, sweep_grid_delta, sweep_multichannel_uniform,
    sweep_single_channel, unit_grid, MeasurementPolicy, ProtocolTag,
};
use edss_core::{BlochProjector, Error};

use output::{fmt_g, CsvOut};

const ZALM_TOLERANCE: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "edss", version, about = "Entanglement distribution with separable carriers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one protocol and print its outcome.
    Run(RunArgs),
    /// Discord of a protocol's initial A:B resource.
    Discord(DiscordArgs),
    /// Eavesdropper scan: outcome-averaged A:B discord over (theta, phi).
    Adversary(AdversaryArgs),
    /// Negativity against noise strength for several protocols.
    Sweep(SweepArgs),
    /// Dissimilar-strength (p1, p2) grid at fixed carrier strength p3.
    Grid(GridArgs),
    /// Simulated and closed-form success probability of the nominal outcome.
    Probcurves(ProbArgs),
    /// Photon-to-spin transfer on seeded random two-qubit states.
    ZalmCheck(ZalmArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RunProtocol {
    Alpha,
    Beta,
    Ded,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Single,
    Multi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Channel {
    Depolarizing,
    Dephasing,
    AmplitudeDamping,
    Identity,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Depolarizing => ChannelKind::Depolarizing,
            Channel::Dephasing => ChannelKind::Dephasing,
            Channel::AmplitudeDamping => ChannelKind::AmplitudeDamping,
            Channel::Identity => ChannelKind::Identity,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EdssChoice {
    Alpha,
    Beta,
}

impl From<EdssChoice> for EdssProtocol {
    fn from(c: EdssChoice) -> Self {
        match c {
            EdssChoice::Alpha => EdssProtocol::Alpha,
            EdssChoice::Beta => EdssProtocol::Beta,
        }
    }
}

fn strength(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

#[derive(Args, Debug)]
struct NoiseArgs {
    #[arg(long, value_enum, default_value = "single")]
    model: Model,
    /// Carrier channel (single model: also the DED channel).
    #[arg(long, value_enum, default_value = "identity")]
    carrier_noise: Channel,
    /// Memory channel (multi model only).
    #[arg(long, value_enum, default_value = "identity")]
    memory_noise: Channel,
    /// Re-apply memory noise before every beta iteration.
    #[arg(long)]
    reexpose_memories: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "alpha")]
    protocol: RunProtocol,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    iterations: u32,
    /// Permit more beta iterations than were studied.
    #[arg(long)]
    allow_extended: bool,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Uniform strength; overridden per channel by --p1/--p2/--p3.
    #[arg(long, default_value = "0", value_parser = strength)]
    p: f64,
    #[arg(long, value_parser = strength)]
    p1: Option<f64>,
    #[arg(long, value_parser = strength)]
    p2: Option<f64>,
    #[arg(long, value_parser = strength)]
    p3: Option<f64>,
    /// Re-optimise the carrier measurement instead of using the nominal outcome.
    #[arg(long, conflicts_with = "theta")]
    optimal: bool,
    /// Explicit carrier projector polar angle (requires --phi).
    #[arg(long, requires = "phi")]
    theta: Option<f64>,
    #[arg(long, requires = "theta")]
    phi: Option<f64>,
    /// Load the memory resource through the photon-to-spin transfer first.
    #[arg(long)]
    via_zalm: bool,
}

#[derive(Args, Debug)]
struct DiscordArgs {
    /// Resource state: alpha (A,B marginal) or beta (memory state).
    #[arg(long, value_enum, default_value = "alpha")]
    state: EdssChoice,
    #[arg(long, default_value = "B", value_parser = ["A", "B"])]
    measured: String,
}

#[derive(Args, Debug)]
struct AdversaryArgs {
    #[arg(long, value_enum, default_value = "beta")]
    protocol: EdssChoice,
    #[arg(long, default_value_t = 33, value_parser = clap::value_parser!(u32).range(2..))]
    theta_steps: u32,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(2..))]
    phi_steps: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
    steps: u32,
    /// Comma-separated subset of alpha, beta-1..beta-4, ded.
    #[arg(long, value_delimiter = ',', default_value = "alpha,beta-1,beta-2,beta-3,beta-4,ded")]
    protocols: Vec<String>,
    /// Use the nominal outcome at every point instead of re-optimising.
    #[arg(long)]
    fixed_basis: bool,
    #[arg(long)]
    allow_extended: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct GridArgs {
    #[arg(long, value_enum, default_value = "dephasing")]
    memory_noise: Channel,
    #[arg(long, value_enum, default_value = "depolarizing")]
    carrier_noise: Channel,
    #[arg(long, default_value = "0.1", value_parser = strength)]
    p3: f64,
    #[arg(long, default_value_t = 51, value_parser = clap::value_parser!(u32).range(2..))]
    steps: u32,
    #[arg(long)]
    fixed_basis: bool,
    /// Append n_alpha, n_beta and n_ded columns.
    #[arg(long)]
    with_negativities: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProbArgs {
    #[arg(long, value_enum, default_value = "alpha")]
    protocol: EdssChoice,
    #[arg(long, value_enum, default_value = "depolarizing")]
    channel: Channel,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
    steps: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ZalmArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    samples: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
    Invariant(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::IncompleteKraus { .. } => Failure::Invariant(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(flag: &str, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for '{flag}': {message}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("EDSS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Worker count only changes speed; results are reduced in index order.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            Cli::command().error(ErrorKind::ValueValidation, msg).exit();
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: numerical invariant violated: {msg}");
            ExitCode::from(4)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(a) => cmd_run(a),
        Command::Discord(a) => cmd_discord(a),
        Command::Adversary(a) => cmd_adversary(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Probcurves(a) => cmd_probcurves(a),
        Command::ZalmCheck(a) => cmd_zalm(a),
    }
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn scenario_config(s: &NoiseScenario) -> Vec<(String, String)> {
    let (p1, p2) = s.memory_strengths();
    vec![
        kv("model", format!("{:?}", s.model)),
        kv("memory_noise", s.memory),
        kv("carrier_noise", s.carrier),
        kv("p1", fmt_g(p1)),
        kv("p2", fmt_g(p2)),
        kv("p3", fmt_g(s.carrier_strength())),
        kv("reexpose_memories", s.reexpose_memories),
        kv("studied_combination", s.is_studied_combination()),
    ]
}

fn check_iterations(n: usize, allow_extended: bool, flag: &str) -> Result<(), Failure> {
    if n > MAX_STUDIED_ITERATIONS && !allow_extended {
        return Err(usage(flag, format!("{n} exceeds {MAX_STUDIED_ITERATIONS}; pass --allow-extended")));
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<(), Failure> {
    let iterations = a.iterations as usize;
    check_iterations(iterations, a.allow_extended, "--iterations")?;
    let scenario = match a.noise.model {
        Model::Single => NoiseScenario::single(a.noise.carrier_noise.into(), a.p3.unwrap_or(a.p)),
        Model::Multi => NoiseScenario::dissimilar(
            a.noise.memory_noise.into(),
            a.noise.carrier_noise.into(),
            a.p1.unwrap_or(a.p),
            a.p2.unwrap_or(a.p),
            a.p3.unwrap_or(a.p),
        ),
    }
    .with_reexposure(a.noise.reexpose_memories);
    let measurement = match (a.theta, a.phi) {
        (Some(t), Some(p)) => Measurement::Projector(BlochProjector::new(t, p).map_err(|e| usage("--theta", e))?),
        _ if a.optimal => Measurement::Optimal,
        _ => Measurement::Nominal,
    };
    let protocol = match a.protocol {
        RunProtocol::Alpha => Some(EdssProtocol::Alpha),
        RunProtocol::Beta => Some(EdssProtocol::Beta),
        RunProtocol::Ded => None,
    };
    let out = match protocol {
        None => run_ded(&scenario)?,
        Some(p) if a.via_zalm => run_edss_via_zalm(p, &scenario, iterations, measurement)?,
        Some(EdssProtocol::Alpha) => run_alpha(&scenario, measurement)?,
        Some(EdssProtocol::Beta) => run_beta(&scenario, iterations, measurement)?,
    };
    out.final_state.check_invariants()?;
    print_outcome(&format!("{:?}", a.protocol).to_lowercase(), &scenario, &out)
}

fn print_outcome(name: &str, scenario: &NoiseScenario, out: &ProtocolOutcome) -> Result<(), Failure> {
    let config: Vec<String> = scenario_config(scenario).into_iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("# edss run protocol={name} {}", config.join(" "));
    println!("negativity_ab = {}", fmt_g(out.negativity_ab));
    println!("success_probability = {}", fmt_g(out.success_probability));
    if let Some(m) = out.measurement {
        println!("measurement = theta {} phi {}", fmt_g(m.theta()), fmt_g(m.phi()));
    }
    if out.iteration_measurements.len() > 1 {
        for (i, (n, p)) in out.iteration_negativities.iter().zip(&out.iteration_probabilities).enumerate() {
            println!("iteration {} : negativity {} probability {}", i + 1, fmt_g(*n), fmt_g(*p));
        }
    }
    if out.extended {
        println!("note: more iterations than were studied");
    }
    for stage in &out.carrier_negativity_trace {
        println!("stage {} : N(K:AB) = {}", stage.name, fmt_g(stage.carrier_negativity));
    }
    for audit in distribution_audit(out)? {
        println!(
            "transmission {} : N(A:BK) - N(AK:B) = {} , D(K|AB) = {} , bound {}",
            audit.transmission,
            fmt_g(audit.e_final - audit.e_initial),
            fmt_g(audit.d_comm),
            if audit.holds { "holds" } else { "violated" }
        );
    }
    Ok(())
}

fn cmd_discord(a: DiscordArgs) -> Result<(), Failure> {
    let rho = match a.state {
        EdssChoice::Alpha => alpha_initial_state().partial_trace(&["A", "B"])?,
        EdssChoice::Beta => beta_memory_state(),
    };
    let d = discord(&rho, &a.measured)?;
    println!("discord = {}", fmt_g(d.value));
    println!("measurement = theta {} phi {}", fmt_g(d.measurement.theta()), fmt_g(d.measurement.phi()));
    Ok(())
}

fn cmd_adversary(a: AdversaryArgs) -> Result<(), Failure> {
    let nt = a.theta_steps as usize;
    let np = a.phi_steps as usize;
    let thetas: Vec<f64> = (0..nt).map(|i| PI * i as f64 / (nt - 1) as f64).collect();
    let phis: Vec<f64> = (0..np).map(|j| TAU * j as f64 / np as f64).collect();
    let scan = adversary_scan(a.protocol.into(), &thetas, &phis)?;
    let config = vec![
        kv("command", "adversary"),
        kv("protocol", EdssProtocol::from(a.protocol)),
        kv("theta_steps", nt),
        kv("phi_steps", np),
    ];
    let mut csv = CsvOut::create(a.out.as_deref(), &config, &["theta", "phi", "discord"])?;
    for (i, t) in thetas.iter().enumerate() {
        for (j, p) in phis.iter().enumerate() {
            csv.row([fmt_g(*t), fmt_g(*p), fmt_g(scan.get(i, j))])?;
        }
    }
    csv.finish()?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let protocols = a
        .protocols
        .iter()
        .map(|s| s.parse::<ProtocolTag>().map_err(|e| usage("--protocols", e)))
        .collect::<Result<Vec<_>, _>>()?;
    for tag in &protocols {
        if let ProtocolTag::Beta(n) = tag {
            check_iterations(*n as usize, a.allow_extended, "--protocols")?;
        }
    }
    let policy = if a.fixed_basis { MeasurementPolicy::Nominal } else { MeasurementPolicy::Optimal };
    let grid = unit_grid(a.steps as usize);
    let (records, reference) = match a.noise.model {
        Model::Single => {
            let kind = a.noise.carrier_noise.into();
            (sweep_single_channel(kind, &grid, &protocols, policy)?, NoiseScenario::single(kind, 0.0))
        }
        Model::Multi => {
            let (m, c) = (a.noise.memory_noise.into(), a.noise.carrier_noise.into());
            (
                sweep_multichannel_uniform(m, c, &grid, &protocols, policy, a.noise.reexpose_memories)?,
                NoiseScenario::uniform(m, c, 0.0).with_reexposure(a.noise.reexpose_memories),
            )
        }
    };
    let mut config = vec![kv("command", "sweep")];
    config.extend(scenario_config(&reference).into_iter().filter(|(k, _)| !k.starts_with('p')));
    config.push(kv("steps", a.steps));
    config.push(kv("protocols", a.protocols.join(",")));
    config.push(kv("measurement", if a.fixed_basis { "nominal" } else { "optimal" }));

    let mut csv = CsvOut::create(
        a.out.as_deref(),
        &config,
        &["p", "protocol", "negativity", "probability", "theta", "phi"],
    )?;
    for r in &records {
        csv.row([
            fmt_g(r.p),
            r.protocol.to_string(),
            fmt_g(r.negativity),
            fmt_g(r.success_probability),
            fmt_g(r.optimal_theta),
            fmt_g(r.optimal_phi),
        ])?;
    }
    csv.finish()?;
    Ok(())
}

fn cmd_grid(a: GridArgs) -> Result<(), Failure> {
    let policy = if a.fixed_basis { MeasurementPolicy::Nominal } else { MeasurementPolicy::Optimal };
    let grid = unit_grid(a.steps as usize);
    let (m, c) = (a.memory_noise.into(), a.carrier_noise.into());
    let records = sweep_grid_delta(m, c, &grid, &grid, a.p3, policy)?;
    let reference = NoiseScenario::dissimilar(m, c, 0.0, 0.0, a.p3);
    let mut config = vec![kv("command", "grid")];
    config.extend(scenario_config(&reference).into_iter().filter(|(k, _)| k != "p1" && k != "p2"));
    config.push(kv("steps", a.steps));
    config.push(kv("measurement", if a.fixed_basis { "nominal" } else { "optimal" }));
    config.push(kv("beta_iterations", 1));

    let mut header = vec!["p1", "p2", "p3", "delta_alpha_beta", "delta_alpha_ded", "delta_beta_ded"];
    if a.with_negativities {
        header.extend(["n_alpha", "n_beta", "n_ded"]);
    }
    let mut csv = CsvOut::create(a.out.as_deref(), &config, &header)?;
    for r in &records {
        let mut row = vec![
            fmt_g(r.p1),
            fmt_g(r.p2),
            fmt_g(r.p3),
            fmt_g(r.delta_alpha_beta),
            fmt_g(r.delta_alpha_ded),
            fmt_g(r.delta_beta_ded),
        ];
        if a.with_negativities {
            row.extend([fmt_g(r.n_alpha), fmt_g(r.n_beta), fmt_g(r.n_ded)]);
        }
        csv.row(row)?;
    }
    csv.finish()?;
    Ok(())
}

fn cmd_probcurves(a: ProbArgs) -> Result<(), Failure> {
    let protocol: EdssProtocol = a.protocol.into();
    let kind: ChannelKind = a.channel.into();
    let grid = unit_grid(a.steps as usize);
    let curve = probability_curves(protocol, kind, &grid)?;
    let config = vec![
        kv("command", "probcurves"),
        kv("protocol", protocol),
        kv("channel", kind),
        kv("steps", a.steps),
    ];
    let mut csv = CsvOut::create(a.out.as_deref(), &config, &["p", "simulated", "closed_form"])?;
    for (p, sim) in curve {
        let closed = nominal_success_probability(protocol, kind, p).map_or_else(String::new, fmt_g);
        csv.row([fmt_g(p), fmt_g(sim), closed])?;
    }
    csv.finish()?;
    Ok(())
}

fn cmd_zalm(a: ZalmArgs) -> Result<(), Failure> {
    let mut rng = seeded_rng(a.seed);
    let mut max_error: f64 = 0.0;
    let mut max_prob_dev: f64 = 0.0;
    for _ in 0..a.samples {
        let rho = random_two_qubit_state(&mut rng);
        for r in zalm_map(&rho)? {
            max_error = max_error.max(r.transfer_error);
            max_prob_dev = max_prob_dev.max((r.probability - 0.25).abs());
        }
    }
    println!("samples = {}", a.samples);
    println!("seed = {}", a.seed);
    println!("max_transfer_error = {max_error:.3e}");
    println!("max_probability_deviation = {max_prob_dev:.3e}");
    if max_error >= ZALM_TOLERANCE || max_prob_dev > 1e-12 {
        return Err(Failure::Invariant(format!("transfer error {max_error:.3e} exceeds {ZALM_TOLERANCE:e}")));
    }
    Ok(())
}
