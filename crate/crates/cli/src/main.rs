//! Command-line front end: run scenario files, analyze trajectory CSVs,
//! validate configs, and compare runs against closed-form solutions.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::{Parser, Subcommand};

use leosim::{
    detect_oscillator, dominant_frequency, energy, energy_csv_string, fit_harmonic, load_scenario,
    parse_trajectory_csv, simulate, stability_class, step, write_trajectory_csv, distance, Error,
    ExpectedConfig, ForceModel, LoadedScenario, OutputKind, Result,
};

#[derive(Parser)]
#[command(
    name = "leosim",
    version,
    about = "Deterministic social-body dynamics in assessment space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files and write trajectory CSVs.
    Simulate {
        /// Scenario config (TOML); repeat to run several.
        #[arg(long = "scenario", required = true, num_args = 1..)]
        scenarios: Vec<PathBuf>,
        /// Directory for output CSVs.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads for multiple scenarios.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Estimate frequency and harmonic amplitudes from a trajectory CSV.
    Analyze {
        /// Trajectory CSV written by `simulate`.
        #[arg(long)]
        trajectory: PathBuf,
        /// Column to analyze: header name (`crowd.x0`) or 0-based index
        /// among the data columns.
        #[arg(long, default_value = "0")]
        column: String,
    },
    /// Check a scenario file and describe what it sets up.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Print the closed-form solution for a scenario, if one is known,
    /// and the simulation's deviation from it.
    Oracle {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(cause) = source {
            eprintln!("  caused by: {cause}");
            source = cause.source();
        }
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 3,
        Error::Runtime { .. } | Error::Singularity { .. } | Error::OutsideLayer { .. } => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            scenarios,
            out,
            jobs,
        } => simulate_command(&scenarios, &out, jobs),
        Command::Analyze { trajectory, column } => analyze_command(&trajectory, &column),
        Command::Validate { scenario } => validate_command(&scenario),
        Command::Oracle { scenario } => oracle_command(&scenario),
    }
}

fn simulate_command(scenarios: &[PathBuf], out: &Path, jobs: Option<usize>) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let workers = jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .clamp(1, scenarios.len().max(1));

    let results: Mutex<Vec<Option<Result<String>>>> =
        Mutex::new((0..scenarios.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for w in 0..workers {
            let results = &results;
            scope.spawn(move || {
                for (i, path) in scenarios.iter().enumerate() {
                    if i % workers != w {
                        continue;
                    }
                    let outcome = run_scenario(path, out);
                    results.lock().expect("no panics hold this lock")[i] = Some(outcome);
                }
            });
        }
    });

    let mut first_err = None;
    for outcome in results.into_inner().expect("workers joined") {
        match outcome.expect("every scenario was assigned a worker") {
            Ok(line) => println!("{line}"),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn run_scenario(path: &Path, out: &Path) -> Result<String> {
    let LoadedScenario { config, state } = load_scenario(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());

    if let Some(osc) = detect_oscillator(&state) {
        let coarse = osc.solution.period / 100.0;
        if config.integrator.dt > coarse {
            eprintln!(
                "warning: {}: dt {} is coarser than a hundredth of the oscillation period {}; \
                 expect visible integration error",
                path.display(),
                config.integrator.dt,
                osc.solution.period
            );
        }
    }

    let trajectories = simulate(&state, &config.integrator)?;
    let csv_path = out.join(format!("{stem}.csv"));
    let file = File::create(&csv_path)?;
    write_trajectory_csv(BufWriter::new(file), &trajectories)?;
    let mut written = vec![csv_path.display().to_string()];

    if config.outputs.contains(&OutputKind::Energy) {
        let series = energy_series(&state, &config.integrator)?;
        let energy_path = out.join(format!("{stem}_energy.csv"));
        std::fs::write(&energy_path, energy_csv_string(&series))?;
        written.push(energy_path.display().to_string());
    }

    Ok(format!(
        "wrote {} ({} samples, {} {})",
        written.join(" and "),
        trajectories[0].samples.len(),
        trajectories.len(),
        if trajectories.len() == 1 { "body" } else { "bodies" },
    ))
}

fn energy_series(
    state: &leosim::SimulationState,
    cfg: &leosim::IntegratorConfig,
) -> Result<Vec<(f64, leosim::EnergyBreakdown)>> {
    let mut work = state.clone();
    work.t = 0.0;
    let steps = cfg.steps();
    let mut series = vec![(work.t, energy(&work)?)];
    for k in 1..=steps {
        work = step(&work, cfg)?;
        if k % cfg.record_every as u64 == 0 {
            series.push((work.t, energy(&work)?));
        }
    }
    Ok(series)
}

fn analyze_command(trajectory: &Path, column: &str) -> Result<()> {
    let text = std::fs::read_to_string(trajectory)?;
    let table = parse_trajectory_csv(&text)?;
    let index = match column.parse::<usize>() {
        Ok(i) => i + 1, // skip the leading `t` column
        Err(_) => table.column_index(column)?,
    };
    if index == 0 {
        return Err(Error::InvalidParameter {
            name: "column".into(),
            reason: "the time column cannot be analyzed against itself".into(),
        });
    }
    let series = table.series(index)?;
    let span = series.last().map(|s| s.0).unwrap_or(0.0) - series.first().map(|s| s.0).unwrap_or(0.0);
    println!(
        "column {}: {} samples over {span:.6} time units",
        table.columns[index],
        series.len()
    );

    let nu = dominant_frequency(&series)?;
    let omega = 2.0 * std::f64::consts::PI * nu;
    println!(
        "dominant frequency ν ≈ {nu:.6}  (ω ≈ {omega:.6}, period ≈ {:.6})",
        1.0 / nu
    );
    let (a, b) = fit_harmonic(&series, omega)?;
    println!(
        "harmonic fit x(t) ≈ A sin(ωt) + B cos(ωt): A ≈ {a:.6}, B ≈ {b:.6} (amplitude {:.6})",
        a.hypot(b)
    );
    Ok(())
}

fn validate_command(scenario: &Path) -> Result<()> {
    let LoadedScenario { config, state } = load_scenario(scenario)?;
    if let Some(name) = &config.name {
        println!("scenario: {name}");
    }
    println!("dimension: {}", state.dimension);

    println!("bodies: {}", state.bodies.len());
    for b in &state.bodies {
        println!(
            "  {}  mass {}  position {:?}  velocity {:?}",
            b.id,
            b.mass,
            b.position.as_slice(),
            b.velocity.as_slice()
        );
    }

    println!("complexes: {}", state.complexes.len());
    for c in &state.complexes {
        let leaves = leosim::leaf_members(c, &state.complexes)?;
        println!(
            "  {}  radius {}  public layer ({}, {}]  {} leaf member{}",
            c.id,
            c.radius,
            c.radius,
            c.radius + c.layer_thickness,
            leaves.len(),
            if leaves.len() == 1 { "" } else { "s" }
        );
        for b in &state.bodies {
            let d = distance(&b.position, &c.center)?;
            let class = leosim::classify_layer(d, c)?;
            println!("    {} at distance {d:.6}: {class} layer", b.id);
        }
    }

    println!("forces: {}", state.forces.len());
    for f in &state.forces {
        println!("  {}", describe_force(f));
    }
    if !state.constraints.is_empty() {
        println!("constraints: {}", state.constraints.len());
        for c in &state.constraints {
            match c.axis() {
                Some(d) => println!("  {}: coordinate {d} floored at {}", c.body, c.offset),
                None => println!(
                    "  {}: half-space {:?}·x ≥ {}",
                    c.body,
                    c.normal().as_slice(),
                    c.offset
                ),
            }
        }
    }

    for b in &state.bodies {
        if let Some((k_e, k_c)) = stiffness_on(&state, &b.id) {
            println!(
                "stability of {}: {} (k_e {k_e}, k_c {k_c})",
                b.id,
                stability_class(k_e, k_c)
            );
        }
    }

    match &config.expected {
        Some(ExpectedConfig::Oscillator { omega, a, b }) => {
            println!("expected: oscillator ω = {omega}, A = {a}, B = {b}");
        }
        Some(ExpectedConfig::Ratio { acceleration_ratio }) => {
            println!("expected: acceleration ratio {acceleration_ratio}");
        }
        None => {}
    }
    println!("ok");
    Ok(())
}

fn describe_force(f: &ForceModel) -> String {
    match f {
        ForceModel::Attraction {
            first,
            second,
            params,
        } => format!(
            "attraction between {first} and {second} (γ {}, softening {})",
            params.gamma, params.softening
        ),
        ForceModel::Elasticity { body, params } => {
            format!("elasticity on {body} (k_e {})", params.k_e)
        }
        ForceModel::Change { body, params } => format!("change on {body} (k_c {})", params.k_c),
        ForceModel::Driving { body, spec } => format!(
            "driving on {body} (benefits/costs {} → transaction {}likely)",
            spec.ratio(),
            if spec.transaction_likely() { "" } else { "un" }
        ),
        ForceModel::SurfaceGravity { body, complex, params, .. } => {
            format!("surface gravity of {complex} on {body} (γ {})", params.gamma)
        }
    }
}

/// Summed stiffnesses acting on one body when all its elastic/change
/// bindings share an equilibrium.
fn stiffness_on(state: &leosim::SimulationState, body: &str) -> Option<(f64, f64)> {
    let mut k_e = 0.0;
    let mut k_c = 0.0;
    let mut equilibrium = None;
    let mut found = false;
    for f in &state.forces {
        let (id, eq, is_elastic) = match f {
            ForceModel::Elasticity { body, params } => (body, &params.equilibrium, true),
            ForceModel::Change { body, params } => (body, &params.equilibrium, false),
            _ => continue,
        };
        if id != body {
            continue;
        }
        match &equilibrium {
            None => equilibrium = Some(eq.clone()),
            Some(e) if e == eq => {}
            Some(_) => return None,
        }
        found = true;
        if is_elastic {
            k_e += f_stiffness(f);
        } else {
            k_c += f_stiffness(f);
        }
    }
    found.then_some((k_e, k_c))
}

fn f_stiffness(f: &ForceModel) -> f64 {
    match f {
        ForceModel::Elasticity { params, .. } => params.k_e,
        ForceModel::Change { params, .. } => params.k_c,
        _ => 0.0,
    }
}

fn oracle_command(scenario: &Path) -> Result<()> {
    let LoadedScenario { config, state } = load_scenario(scenario)?;
    let Some(osc) = detect_oscillator(&state) else {
        println!("no analytic oracle for this scenario");
        return Ok(());
    };
    let s = &osc.solution;
    println!("closed form along {}: x(t) = A sin(ωt) + B cos(ωt)", osc.body);
    println!(
        "  ω = {:.6}  period = {:.6}  ν = {:.6}",
        s.omega, s.period, s.frequency
    );
    println!(
        "  A = {:.6}  B = {:.6}  amplitude = {:.6}",
        s.a,
        s.b,
        s.amplitude()
    );

    let trajectories = simulate(&state, &config.integrator)?;
    let tr = trajectories
        .iter()
        .find(|t| t.body_id == osc.body)
        .expect("detected body is simulated");
    let max_dev = tr
        .samples
        .iter()
        .map(|sample| {
            let (x, _) = s.evaluate(sample.t);
            (osc.project(&sample.position) - x).abs()
        })
        .fold(0.0, f64::max);
    let t_end = tr.samples.last().map(|s| s.t).unwrap_or(0.0);
    println!("simulated max deviation over t ∈ [0, {t_end:.4}]: {max_dev:.3e}");
    Ok(())
}
