//! Command-line surface for the blister energy toolkit: evaluate the
//! explicit constructions, run sweeps and exponent fits, drive the 1D
//! minimization oracle, calibrate the bound constants and emit the phase
//! diagram, all as reproducible JSON/CSV files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use blisterlab::construct1d::{
    best_integer_cells, flat_profile, optimal_cell_length, periodic_array, single_blister,
};
use blisterlab::construct2d::{assemble_lattice, cell_assembly, lattice_scale, BoundConstants2D};
use blisterlab::energy::{energy_1d, EnergyBreakdown, QuadSpec};
use blisterlab::error::BlisterError;
use blisterlab::field::energy_field;
use blisterlab::geometry::BondedSet1D;
use blisterlab::minimize::{best_over_blister_count, minimize_profile, MinimizeOpts};
use blisterlab::params::Params;
use blisterlab::scaling::{
    calibrate_constants, classify_phase, fit_exponent, sweep_with_workers, CalibratedConstants,
    Family, SweepSpec,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "blisterlab",
    version,
    about = "Blister pattern energies and scaling laws"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Non-dimensional film thickness
    #[arg(long)]
    h: Option<f64>,
    /// Mismatch strain
    #[arg(long)]
    eta: Option<f64>,
    /// Substrate/film compliance ratio
    #[arg(long = "alpha-s")]
    alpha_s: Option<f64>,
    /// Membrane coefficient
    #[arg(long = "alpha-m")]
    alpha_m: Option<f64>,
    /// Bonded area fraction
    #[arg(long)]
    theta: Option<f64>,
    /// Configuration family (flat | single | periodic | lattice | minimized | step1)
    #[arg(long)]
    family: Option<String>,
    /// Parameter to vary in sweeps (h | eta | alpha_s | alpha_m | theta)
    #[arg(long)]
    vary: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Phase grid, e.g. 64x64
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: BLISTERLAB_WORKERS or 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key-value config file; explicit flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cell length (1/l integer); defaults to the optimal scale
    #[arg(long)]
    l: Option<f64>,
    /// Grid points for the 1D minimizer
    #[arg(long)]
    n: Option<usize>,
    /// Blister count for the 1D minimizer (0 = search over counts)
    #[arg(long)]
    blisters: Option<usize>,
    /// Search limit for --blisters 0
    #[arg(long)]
    nmax: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a 1D construction and print its energy breakdown
    #[command(name = "eval-1d")]
    Eval1d(Common),
    /// Evaluate a 2D construction and print its energy breakdown
    #[command(name = "eval-2d")]
    Eval2d(Common),
    /// Sweep one parameter and emit a CSV table
    Sweep(Common),
    /// Sweep one parameter and fit the energy exponent
    Fit(Common),
    /// Run the 1D direct-minimization oracle
    Minimize(Common),
    /// Classify the (alpha_s, eta) phase diagram into a CSV grid
    Phase(Common),
    /// Calibrate the bound-formula prefactors from standard sweeps
    Calibrate(Common),
}

/// Resolved run configuration: config-file values overridden by flags,
/// embedded verbatim in every output.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    command: String,
    h: f64,
    eta: f64,
    alpha_s: f64,
    alpha_m: f64,
    theta: f64,
    family: String,
    vary: String,
    from: f64,
    to: f64,
    points: usize,
    grid: String,
    seed: u64,
    workers: usize,
    l: f64,
    n: usize,
    blisters: usize,
    nmax: usize,
}

fn parse_config_file(path: &PathBuf) -> Result<std::collections::HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = std::collections::HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or(format!("config line {} is not `key = value`", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn resolve(common: &Common, command: &str) -> Result<RunConfig, String> {
    let file = match &common.config {
        Some(p) => parse_config_file(p)?,
        None => Default::default(),
    };
    let get_f64 = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match file.get(key) {
            Some(s) => s.parse().map_err(|e| format!("config key {key}: {e}")),
            None => Ok(default),
        }
    };
    let get_usize = |flag: Option<usize>, key: &str, default: usize| -> Result<usize, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match file.get(key) {
            Some(s) => s.parse().map_err(|e| format!("config key {key}: {e}")),
            None => Ok(default),
        }
    };
    let get_str = |flag: &Option<String>, key: &str, default: &str| -> String {
        flag.clone()
            .or_else(|| file.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    };
    let get_u64 = |flag: Option<u64>, key: &str, default: u64| -> Result<u64, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match file.get(key) {
            Some(s) => s.parse().map_err(|e| format!("config key {key}: {e}")),
            None => Ok(default),
        }
    };
    let env_workers = std::env::var("BLISTERLAB_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(1);
    Ok(RunConfig {
        command: command.to_string(),
        h: get_f64(common.h, "h", 1e-3)?,
        eta: get_f64(common.eta, "eta", 0.01)?,
        alpha_s: get_f64(common.alpha_s, "alpha-s", 0.1)?,
        alpha_m: get_f64(common.alpha_m, "alpha-m", 1.0)?,
        theta: get_f64(common.theta, "theta", 0.5)?,
        family: get_str(&common.family, "family", "periodic"),
        vary: get_str(&common.vary, "vary", "h"),
        from: get_f64(common.from, "from", 0.0)?,
        to: get_f64(common.to, "to", 0.0)?,
        points: get_usize(common.points, "points", 8)?,
        grid: get_str(&common.grid, "grid", "64x64"),
        seed: get_u64(common.seed, "seed", 1)?,
        workers: get_usize(common.workers, "workers", env_workers)?,
        l: get_f64(common.l, "l", 0.0)?,
        n: get_usize(common.n, "n", 512)?,
        blisters: get_usize(common.blisters, "blisters", 1)?,
        nmax: get_usize(common.nmax, "nmax", 12)?,
    })
}

impl RunConfig {
    fn params(&self) -> Result<Params, BlisterError> {
        Params::new(self.h, self.eta, self.alpha_s, self.alpha_m, self.theta)
    }

    fn header_lines(&self) -> String {
        let mut s = format!("# version = {VERSION}\n");
        for (k, v) in [
            ("command", self.command.clone()),
            ("h", self.h.to_string()),
            ("eta", self.eta.to_string()),
            ("alpha-s", self.alpha_s.to_string()),
            ("alpha-m", self.alpha_m.to_string()),
            ("theta", self.theta.to_string()),
            ("family", self.family.clone()),
            ("vary", self.vary.clone()),
            ("from", self.from.to_string()),
            ("to", self.to.to_string()),
            ("points", self.points.to_string()),
            ("grid", self.grid.clone()),
            ("seed", self.seed.to_string()),
            ("workers", self.workers.to_string()),
            ("l", self.l.to_string()),
            ("n", self.n.to_string()),
            ("blisters", self.blisters.to_string()),
            ("nmax", self.nmax.to_string()),
        ] {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s
    }
}

#[derive(Serialize)]
struct EnergyOut {
    membrane: f64,
    bending: f64,
    substrate: f64,
    total: f64,
    params: ParamsOut,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct ParamsOut {
    h: f64,
    eta: f64,
    alpha_s: f64,
    alpha_m: f64,
    theta: f64,
}

impl From<&Params> for ParamsOut {
    fn from(p: &Params) -> Self {
        Self {
            h: p.h,
            eta: p.eta,
            alpha_s: p.alpha_s,
            alpha_m: p.alpha_m,
            theta: p.theta,
        }
    }
}

#[derive(Serialize)]
struct JsonEnvelope<T: Serialize> {
    version: String,
    config: RunConfig,
    result: T,
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write output: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_out<T: Serialize>(cfg: &RunConfig, out: &Option<PathBuf>, result: T) -> Result<(), String> {
    let envelope = JsonEnvelope {
        version: VERSION.to_string(),
        config: cfg.clone(),
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(|e| e.to_string())?;
    text.push('\n');
    write_output(out, &text)
}

fn energy_flags(cfg: &RunConfig, p: &Params) -> Vec<String> {
    let mut flags = Vec::new();
    if !blisterlab::construct1d::cond_1d(p, 1.0) {
        flags.push("one-period-condition-fails".to_string());
    }
    let b = blisterlab::construct2d::bounds_2d(p, &BoundConstants2D::default())
        .expect("default constants valid");
    if !b.cond_2d1a {
        flags.push("lattice-exceeds-unit-square".to_string());
    }
    if !b.cond_2d2 {
        flags.push("small-slope-condition-fails".to_string());
    }
    let _ = cfg;
    flags
}

fn run_eval_1d(cfg: &RunConfig) -> Result<(EnergyBreakdown, Params), BlisterError> {
    let p = cfg.params()?;
    let quad = QuadSpec::default();
    let (profile, omega) = match cfg.family.as_str() {
        "flat" => flat_profile(p.theta)?,
        "single" => single_blister(&p)?,
        "periodic" | "periodic1d" => {
            let l = if cfg.l > 0.0 {
                cfg.l
            } else {
                best_integer_cells(&p, optimal_cell_length(&p)).1
            };
            periodic_array(&p, l)?
        }
        other => {
            return Err(BlisterError::InvalidParams(format!(
                "unknown 1D family `{other}`"
            )))
        }
    };
    Ok((energy_1d(&profile, &omega, &p, &quad)?, p))
}

fn run_eval_2d(cfg: &RunConfig) -> Result<(EnergyBreakdown, Params), BlisterError> {
    let p = cfg.params()?;
    let quad = QuadSpec::default();
    let pick_l = |scale: f64| -> f64 {
        if cfg.l > 0.0 {
            cfg.l
        } else {
            let n = (1.0 / scale).round().max(1.0);
            1.0 / n
        }
    };
    match cfg.family.as_str() {
        "flat" => {
            let field = blisterlab::field::TileField {
                cell: 1.0,
                tiles: 1,
                pieces: vec![blisterlab::field::LinearPiece {
                    poly: vec![
                        blisterlab::geometry::Vec2::new(0.0, 0.0),
                        blisterlab::geometry::Vec2::new(1.0, 0.0),
                        blisterlab::geometry::Vec2::new(1.0, 1.0),
                        blisterlab::geometry::Vec2::new(0.0, 1.0),
                    ],
                    anchor: blisterlab::geometry::Vec2::new(0.0, 0.0),
                    w_anchor: blisterlab::geometry::Vec2::new(0.0, 0.0),
                    u_anchor: 0.0,
                    grad_w1: blisterlab::geometry::Vec2::new(0.0, 0.0),
                    grad_w2: blisterlab::geometry::Vec2::new(0.0, 0.0),
                    grad_u: blisterlab::geometry::Vec2::new(0.0, 0.0),
                }],
            };
            let omega = blisterlab::geometry::BondedSet2D::new(
                vec![blisterlab::geometry::Rect {
                    x0: 0.0,
                    y0: 0.0,
                    x1: p.theta,
                    y1: 1.0,
                }],
                p.theta,
            )?;
            Ok((energy_field(&field, &omega, &p, &quad)?, p))
        }
        "step1" => {
            let l = pick_l(lattice_scale(&p));
            let (cell, omega) = cell_assembly(&p, l)?;
            Ok((energy_field(&cell.field, &omega, &p, &quad)?, p))
        }
        "lattice" | "lattice2d" => {
            let l = pick_l(lattice_scale(&p));
            let (field, omega) = assemble_lattice(&p, l)?;
            Ok((energy_field(&field, &omega, &p, &quad)?, p))
        }
        other => Err(BlisterError::InvalidParams(format!(
            "unknown 2D family `{other}`"
        ))),
    }
}

fn sweep_csv(cfg: &RunConfig, rows: &[blisterlab::scaling::SweepRow]) -> String {
    let mut s = cfg.header_lines();
    s.push_str(&format!(
        "{},h,eta,alpha_s,alpha_m,theta,membrane,bending,substrate,total,flags\n",
        cfg.vary
    ));
    for r in rows {
        let flag = if r.excluded {
            format!("excluded:{}", r.note.replace(',', ";"))
        } else if !r.note.is_empty() {
            format!("flagged:{}", r.note.replace(',', ";"))
        } else {
            String::new()
        };
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.value,
            r.params.h,
            r.params.eta,
            r.params.alpha_s,
            r.params.alpha_m,
            r.params.theta,
            r.energy.membrane,
            r.energy.bending,
            r.energy.substrate,
            r.energy.total,
            flag
        ));
    }
    s
}

fn build_sweep_spec(cfg: &RunConfig) -> Result<SweepSpec, BlisterError> {
    let family = Family::parse(&cfg.family)?;
    if !(cfg.from > 0.0 && cfg.to > cfg.from) {
        return Err(BlisterError::InvalidParams(
            "sweep requires --from and --to with 0 < from < to".into(),
        ));
    }
    let mut spec = SweepSpec::geometric(
        family,
        cfg.params()?,
        &cfg.vary,
        cfg.from,
        cfg.to,
        cfg.points,
    )?;
    spec.seed = cfg.seed;
    spec.n_grid = cfg.n;
    Ok(spec)
}

fn geometric_grid(from: f64, to: f64, n: usize) -> Vec<f64> {
    let ratio = (to / from).powf(1.0 / (n as f64 - 1.0));
    (0..n).map(|i| from * ratio.powi(i as i32)).collect()
}

#[derive(Serialize)]
struct FitOut {
    exponent: f64,
    prefactor: f64,
    r_squared: f64,
    excluded_rows: Vec<usize>,
}

#[derive(Serialize)]
struct MinimizeOut {
    membrane: f64,
    bending: f64,
    substrate: f64,
    total: f64,
    iterations: usize,
    converged: bool,
    gradient_norm: f64,
    blisters: usize,
}

#[derive(Serialize)]
struct CalibrateOut {
    k1: f64,
    k2: f64,
    k3: f64,
    k4: f64,
    k5: f64,
    k6: f64,
    c_ridge: f64,
}

fn dispatch(cmd: &Cmd) -> Result<(), (u8, String)> {
    let (cfg, common) = match cmd {
        Cmd::Eval1d(c) => (resolve(c, "eval-1d").map_err(|e| (1, e))?, c),
        Cmd::Eval2d(c) => (resolve(c, "eval-2d").map_err(|e| (1, e))?, c),
        Cmd::Sweep(c) => (resolve(c, "sweep").map_err(|e| (1, e))?, c),
        Cmd::Fit(c) => (resolve(c, "fit").map_err(|e| (1, e))?, c),
        Cmd::Minimize(c) => (resolve(c, "minimize").map_err(|e| (1, e))?, c),
        Cmd::Phase(c) => (resolve(c, "phase").map_err(|e| (1, e))?, c),
        Cmd::Calibrate(c) => (resolve(c, "calibrate").map_err(|e| (1, e))?, c),
    };
    let fail = |e: BlisterError| -> (u8, String) {
        match e {
            BlisterError::InvalidParams(_) => (1, e.to_string()),
            other => (2, other.to_string()),
        }
    };
    match cmd {
        Cmd::Eval1d(_) => {
            let (energy, p) = run_eval_1d(&cfg).map_err(fail)?;
            let out = EnergyOut {
                membrane: energy.membrane,
                bending: energy.bending,
                substrate: energy.substrate,
                total: energy.total,
                params: (&p).into(),
                flags: energy_flags(&cfg, &p),
            };
            json_out(&cfg, &common.out, out).map_err(|e| (1, e))
        }
        Cmd::Eval2d(_) => {
            let (energy, p) = run_eval_2d(&cfg).map_err(fail)?;
            let out = EnergyOut {
                membrane: energy.membrane,
                bending: energy.bending,
                substrate: energy.substrate,
                total: energy.total,
                params: (&p).into(),
                flags: energy_flags(&cfg, &p),
            };
            json_out(&cfg, &common.out, out).map_err(|e| (1, e))
        }
        Cmd::Sweep(_) => {
            let spec = build_sweep_spec(&cfg).map_err(fail)?;
            let rows = sweep_with_workers(&spec, cfg.workers).map_err(fail)?;
            write_output(&common.out, &sweep_csv(&cfg, &rows)).map_err(|e| (1, e))
        }
        Cmd::Fit(_) => {
            let spec = build_sweep_spec(&cfg).map_err(fail)?;
            let rows = sweep_with_workers(&spec, cfg.workers).map_err(fail)?;
            let fit = fit_exponent(&rows).map_err(fail)?;
            json_out(
                &cfg,
                &common.out,
                FitOut {
                    exponent: fit.exponent,
                    prefactor: fit.prefactor,
                    r_squared: fit.r_squared,
                    excluded_rows: fit.excluded,
                },
            )
            .map_err(|e| (1, e))
        }
        Cmd::Minimize(_) => {
            let p = cfg.params().map_err(fail)?;
            let (count, result) = if cfg.blisters == 0 {
                best_over_blister_count(&p, cfg.n, cfg.nmax, cfg.seed, &MinimizeOpts::default())
                    .map_err(fail)?
            } else {
                let omega = BondedSet1D::equispaced(cfg.blisters, p.theta).map_err(fail)?;
                (
                    cfg.blisters,
                    minimize_profile(&p, &omega, cfg.n, cfg.seed, &MinimizeOpts::default())
                        .map_err(fail)?,
                )
            };
            if !result.converged && result.energy.total.is_nan() {
                return Err((2, "minimization diverged".into()));
            }
            json_out(
                &cfg,
                &common.out,
                MinimizeOut {
                    membrane: result.energy.membrane,
                    bending: result.energy.bending,
                    substrate: result.energy.substrate,
                    total: result.energy.total,
                    iterations: result.iterations,
                    converged: result.converged,
                    gradient_norm: result.gradient_norm,
                    blisters: count,
                },
            )
            .map_err(|e| (1, e))
        }
        Cmd::Phase(_) => {
            let (nx, ny) = cfg
                .grid
                .split_once('x')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or((1, format!("bad --grid `{}` (expected WxH)", cfg.grid)))?;
            if nx < 2 || ny < 2 {
                return Err((1, "phase grid must be at least 2x2".into()));
            }
            let p = cfg.params().map_err(fail)?;
            // Wide logarithmic window so all three regions are visible with
            // calibrated constants; override through --from/--to for alpha_s.
            let (als_from, als_to) = if cfg.from > 0.0 && cfg.to > cfg.from {
                (cfg.from, cfg.to)
            } else {
                (1e-12, 1.0)
            };
            let als = geometric_grid(als_from, als_to, nx);
            let eta = geometric_grid(1e-12, 0.99, ny);
            let consts = CalibratedConstants::default();
            let pts = classify_phase(&als, &eta, &p, &consts, &BoundConstants2D::default())
                .map_err(fail)?;
            let mut s = cfg.header_lines();
            s.push_str("alpha_s,eta,winner,region,above_lower_curve,below_upper_curve,cond_2d1a,cond_2d1b,cond_2d2\n");
            for pt in &pts {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    pt.alpha_s,
                    pt.eta,
                    pt.winner.as_str(),
                    pt.region.as_str(),
                    pt.above_lower_curve,
                    pt.below_upper_curve,
                    pt.cond_2d1a,
                    pt.cond_2d1b,
                    pt.cond_2d2
                ));
            }
            write_output(&common.out, &s).map_err(|e| (1, e))
        }
        Cmd::Calibrate(_) => {
            let p = cfg.params().map_err(fail)?;
            let single = sweep_with_workers(
                &SweepSpec::geometric(Family::Single, p, "h", p.h / 10.0, p.h, 5).map_err(fail)?,
                cfg.workers,
            )
            .map_err(fail)?;
            let periodic = sweep_with_workers(
                &SweepSpec::geometric(Family::Periodic1d, p, "eta", 1e-3, 1e-1, 8).map_err(fail)?,
                cfg.workers,
            )
            .map_err(fail)?;
            let mut mspec =
                SweepSpec::geometric(Family::Minimized, p, "eta", 1e-2, 1e-1, 4).map_err(fail)?;
            mspec.n_grid = cfg.n.min(256);
            mspec.seed = cfg.seed;
            let minimized = sweep_with_workers(&mspec, cfg.workers).map_err(fail)?;
            let consts =
                calibrate_constants(&single, &periodic, &[], &minimized, None).map_err(fail)?;
            json_out(
                &cfg,
                &common.out,
                CalibrateOut {
                    k1: consts.k1,
                    k2: consts.k2,
                    k3: consts.k3,
                    k4: consts.k4,
                    k5: consts.k5,
                    k6: consts.k6,
                    c_ridge: consts.c_ridge,
                },
            )
            .map_err(|e| (1, e))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage and validation problems exit 1
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
