use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qcharge::applications::{
    power_report, qsl_t_cd, qsl_t_mcd, verify_achievability, DriveProtocol,
};
use qcharge::distance::{brute_force_distance, distance_general, DistanceOptions};
use qcharge::experiment::{charging_race, random_couples};
use qcharge::matcore::{haar_unitary, seeded_rng, Hermitian};
use qcharge::metrics::bound_interval;
use qcharge::states::{isospectral, random_isospectral_couple, random_pure_state, Spectrum};
use qcharge::Tolerances;
use rand::Rng;
use serde::Serialize;

use crate::args::{GenKind, OptimizerArgs};
use crate::error::CliError;
use crate::files::{
    load_operator, load_protocol, load_state, operator_file, protocol_file, state_file, to_raw,
    write_json, RawMatrix,
};
use crate::number::sig12;

pub const FIG3_HEADER: [&str; 9] = [
    "index",
    "seed",
    "dim",
    "distance",
    "lower_bures",
    "lower_tight",
    "upper",
    "converged",
    "wall_time_ms",
];

pub const RACE_HEADER: [&str; 4] = ["protocol", "time", "fidelity", "entanglement_entropy"];

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn options(opt: &OptimizerArgs) -> DistanceOptions {
    DistanceOptions {
        group_tol: opt.group_tol.unwrap_or(Tolerances::current().group),
        starts: opt.starts,
        max_iter: opt.max_iter,
        seed: opt.seed,
        ..DistanceOptions::default()
    }
}

#[derive(Serialize)]
struct BoundsView {
    lower_bures: f64,
    lower_tight: f64,
    upper: f64,
}

#[derive(Serialize)]
struct AchievabilityView {
    deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct DistanceView {
    value: f64,
    method: String,
    converged: bool,
    starts: usize,
    best_per_start: Vec<f64>,
    bounds: BoundsView,
    achievability: AchievabilityView,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    optimal_unitary: RawMatrix,
    optimal_hamiltonian: Option<RawMatrix>,
}

pub fn distance(
    rho: &Path,
    sigma: &Path,
    opt: &OptimizerArgs,
    oracle_samples: usize,
    json: bool,
    drive_out: Option<&Path>,
) -> Result<(), CliError> {
    let rho_s = load_state(rho)?;
    let sigma_s = load_state(sigma)?;
    let r = distance_general(&rho_s, &sigma_s, &options(opt))?;
    let b = bound_interval(&rho_s, &sigma_s)?;
    let a = verify_achievability(&r, &rho_s, &sigma_s);
    let oracle = if oracle_samples > 0 {
        Some(brute_force_distance(
            &rho_s,
            &sigma_s,
            oracle_samples,
            opt.seed,
        )?)
    } else {
        None
    };
    if json {
        print_json(&DistanceView {
            value: r.value,
            method: r.method.to_string(),
            converged: r.diagnostics.converged,
            starts: r.diagnostics.starts,
            best_per_start: r.diagnostics.best_per_start.clone(),
            bounds: BoundsView {
                lower_bures: b.lower_bures,
                lower_tight: b.lower_tight,
                upper: b.upper,
            },
            achievability: AchievabilityView {
                deviation: a.deviation,
                pass: a.pass,
            },
            oracle,
            optimal_unitary: to_raw(r.optimal_unitary.matrix()),
            optimal_hamiltonian: r.optimal_hamiltonian.as_ref().map(|v| to_raw(v.matrix())),
        });
    } else {
        println!("distance       {}", sig12(r.value));
        println!("method         {}", r.method);
        println!("lower_bures    {}", sig12(b.lower_bures));
        println!("lower_tight    {}", sig12(b.lower_tight));
        println!("upper          {}", sig12(b.upper));
        println!(
            "achievability  {} ({})",
            sig12(a.deviation),
            if a.pass { "pass" } else { "fail" }
        );
        println!("converged      {}", r.diagnostics.converged);
        if let Some(o) = oracle {
            println!("oracle         {}", sig12(o));
        }
    }
    if let Some(path) = drive_out {
        let protocol = match &r.optimal_hamiltonian {
            Some(v) => DriveProtocol::single(v.clone(), r.value)?,
            None => DriveProtocol::empty(),
        };
        write_json(
            path,
            &protocol_file(&protocol, rho_s.dim(), Some("optimal drive".into())),
        )?;
    }
    if r.diagnostics.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

pub fn fig3(
    n: usize,
    dim: usize,
    seed: u64,
    starts: usize,
    timing: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let opts = DistanceOptions {
        starts,
        ..DistanceOptions::default()
    };
    let rows = random_couples(n, dim, seed, &opts);
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(FIG3_HEADER)?;
    for r in &rows {
        w.write_record([
            r.index.to_string(),
            r.seed.to_string(),
            r.dim.to_string(),
            sig12(r.distance),
            sig12(r.lower_bures),
            sig12(r.lower_tight),
            sig12(r.upper),
            r.converged.to_string(),
            sig12(if timing { r.wall_time_ms } else { 0.0 }),
        ])?;
    }
    w.flush()?;
    if rows.iter().all(|r| r.converged) {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

pub fn race(n_qubits: usize, steps: usize, out: Option<&Path>) -> Result<(), CliError> {
    let samples = charging_race(n_qubits, steps)?;
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(RACE_HEADER)?;
    for s in &samples {
        w.write_record([
            s.protocol.as_str().to_string(),
            sig12(s.time),
            sig12(s.fidelity),
            sig12(s.entanglement),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn gen(
    kind: GenKind,
    dim: usize,
    seed: u64,
    spectrum: Option<Vec<f64>>,
    out: Option<&Path>,
    out_sigma: Option<&Path>,
) -> Result<(), CliError> {
    let spectrum = spectrum.map_or(Spectrum::Random, Spectrum::Given);
    let label = |name: &str| Some(format!("{name} dim={dim} seed={seed}"));
    let emit = |file: &crate::files::MatrixFile, path: Option<&Path>| -> Result<(), CliError> {
        match path {
            Some(p) => write_json(p, file),
            None => {
                print_json(file);
                Ok(())
            }
        }
    };
    match kind {
        GenKind::Pure => emit(
            &state_file(&random_pure_state(dim, seed)?, label("pure")),
            out,
        ),
        GenKind::Mixed => {
            let (rho, _) = random_isospectral_couple(dim, &spectrum, seed)?;
            emit(&state_file(&rho, label("mixed")), out)
        }
        GenKind::Hamiltonian => {
            let h = random_unit_hamiltonian(dim, seed)?;
            emit(&operator_file(&h, label("hamiltonian")), out)
        }
        GenKind::Couple => {
            let (Some(a), Some(b)) = (out, out_sigma) else {
                return Err(CliError::Parse(
                    "gen couple needs --out and --out-sigma".into(),
                ));
            };
            let (rho, sigma) = random_isospectral_couple(dim, &spectrum, seed)?;
            isospectral(&rho, &sigma, Tolerances::current().group)?;
            write_json(a, &state_file(&rho, label("couple rho")))?;
            write_json(b, &state_file(&sigma, label("couple sigma")))
        }
    }
}

/// `W diag(λ) W†` with Haar `W`, `λ` uniform in [-1, 1] rescaled so the largest |λ| is 1.
fn random_unit_hamiltonian(dim: usize, seed: u64) -> Result<Hermitian, CliError> {
    let w = haar_unitary(dim, seed)?;
    let mut rng = seeded_rng(seed.wrapping_add(1));
    let mut values: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let top = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if top > 0.0 {
        values.iter_mut().for_each(|v| *v /= top);
    }
    Ok(Hermitian::diagonal(&values).conjugate(&w))
}

pub fn bounds(rho: &Path, sigma: &Path, json: bool) -> Result<(), CliError> {
    let b = bound_interval(&load_state(rho)?, &load_state(sigma)?)?;
    if json {
        print_json(&BoundsView {
            lower_bures: b.lower_bures,
            lower_tight: b.lower_tight,
            upper: b.upper,
        });
    } else {
        println!("lower_bures    {}", sig12(b.lower_bures));
        println!("lower_tight    {}", sig12(b.lower_tight));
        println!("upper          {}", sig12(b.upper));
    }
    Ok(())
}

#[derive(Serialize)]
struct PowerView {
    energy_gap: f64,
    distance: f64,
    trace_dist: f64,
    bound_new: f64,
    bound_old: f64,
    ratio: f64,
}

pub fn power(h: &Path, rho: &Path, sigma: &Path, json: bool) -> Result<(), CliError> {
    let r = power_report(&load_operator(h)?, &load_state(rho)?, &load_state(sigma)?)?;
    let view = PowerView {
        energy_gap: r.energy_gap,
        distance: r.distance,
        trace_dist: r.trace_dist,
        bound_new: r.bound_new,
        bound_old: r.bound_old,
        ratio: r.ratio,
    };
    if json {
        print_json(&view);
    } else {
        println!("energy_gap     {}", sig12(view.energy_gap));
        println!("distance       {}", sig12(view.distance));
        println!("trace_dist     {}", sig12(view.trace_dist));
        println!("bound_new      {}", sig12(view.bound_new));
        println!("bound_old      {}", sig12(view.bound_old));
        println!("ratio          {}", sig12(view.ratio));
    }
    Ok(())
}

#[derive(Serialize)]
struct QslView {
    total_time: f64,
    distance: f64,
    t_cd: f64,
    v_cd: f64,
    t_mcd: f64,
    v_mcd: f64,
    converged: bool,
}

pub fn qsl(protocol: &Path, rho: &Path, json: bool) -> Result<(), CliError> {
    let p = load_protocol(protocol)?;
    let state = load_state(rho)?;
    let cd = qsl_t_cd(&p, &state)?;
    let mcd = qsl_t_mcd(&p, &state)?;
    let view = QslView {
        total_time: cd.total_time,
        distance: cd.distance,
        t_cd: cd.time,
        v_cd: cd.speed,
        t_mcd: mcd.time,
        v_mcd: mcd.speed,
        converged: cd.converged && mcd.converged,
    };
    if json {
        print_json(&view);
    } else {
        println!("total_time     {}", sig12(view.total_time));
        println!("distance       {}", sig12(view.distance));
        println!("t_cd           {}", sig12(view.t_cd));
        println!("v_cd           {}", sig12(view.v_cd));
        println!("t_mcd          {}", sig12(view.t_mcd));
        println!("v_mcd          {}", sig12(view.v_mcd));
        println!("converged      {}", view.converged);
    }
    if view.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged)
    }
}

pub fn path_ref(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
