//! `dephase`: phase diagrams, trajectories, and oracle checks for a
//! dephasing two-qubit X state in a thermal oscillator bath.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use dephase_core::{
    trajectory, BathModel, Bipartition, Error as CoreError, GridSpec, OracleConfig, Qubit,
    Verdict, WernerParams, XState,
};
use output::OutputPaths;

#[derive(Parser)]
#[command(
    name = "dephase",
    version,
    about = "Dephasing two-qubit X states in a thermal bath: reduced dynamics, \
             system-environment separability/entanglement diagrams, and oracle checks"
)]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateArgs {
    /// Werner purity parameter c in [0, 1].
    #[arg(long)]
    werner_c: Option<f64>,

    /// Path to an X-state JSON file
    /// {"rho11":..,"rho22":..,"rho33":..,"rho44":..,"rho14":[re,im],"rho23":[re,im]}.
    #[arg(long)]
    state: Option<PathBuf>,
}

impl StateArgs {
    fn load(&self) -> Result<XState, AppError> {
        if let Some(c) = self.werner_c {
            return Ok(WernerParams::new(c)?.to_x_state());
        }
        let path = self.state.as_ref().expect("clap group guarantees one");
        let file = std::fs::File::open(path)
            .map_err(|e| AppError::Config(format!("cannot open {}: {e}", path.display())))?;
        serde_json::from_reader(file)
            .map_err(|e| AppError::Config(format!("invalid X state in {}: {e}", path.display())))
    }

    fn describe(&self) -> serde_json::Value {
        match (self.werner_c, &self.state) {
            (Some(c), _) => json!({ "werner_c": c }),
            (None, Some(p)) => json!({ "state_file": p.display().to_string() }),
            _ => unreachable!(),
        }
    }
}

#[derive(Args)]
struct ThetaGrid {
    #[arg(long, default_value_t = 0.05)]
    theta_min: f64,
    #[arg(long, default_value_t = 0.3)]
    theta_max: f64,
    #[arg(long, default_value_t = 100)]
    theta_steps: usize,
}

#[derive(Args)]
struct TauGrid {
    #[arg(long, default_value_t = 0.0)]
    tau_min: f64,
    #[arg(long, default_value_t = 50.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 200)]
    tau_steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a (theta, tau) grid and classify each point as separable,
    /// entangled, or undetermined; writes CSV, metadata, and a plot script.
    PhaseDiagram {
        #[arg(long, default_value_t = 1e-3)]
        kappa: f64,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        theta: ThetaGrid,
        #[command(flatten)]
        tau: TauGrid,
        /// Overlay the decoherence-time curve.
        #[arg(long)]
        overlay_dec: bool,
        /// Overlay the sudden-death curve.
        #[arg(long)]
        overlay_sd: bool,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the decoherence-time and sudden-death curves over theta.
    Curves {
        #[arg(long, default_value_t = 1e-3)]
        kappa: f64,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        theta: ThetaGrid,
        #[arg(long)]
        out: PathBuf,
    },
    /// Critical temperature of a Werner state for the given coupling.
    Tcrit {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        werner_c: f64,
    },
    /// Concurrence trajectories over tau, one block per theta grid value.
    Concurrence {
        #[arg(long, default_value_t = 1e-3)]
        kappa: f64,
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.1)]
        theta_min: f64,
        #[arg(long, default_value_t = 0.3)]
        theta_max: f64,
        #[arg(long, default_value_t = 3)]
        theta_steps: usize,
        #[command(flatten)]
        tau: TauGrid,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve the exact total state for a discrete bath described by a JSON
    /// config and report reduced-dynamics and Peres-criterion comparisons.
    OracleCheck {
        /// OracleConfig JSON path.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 5.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 6)]
        tau_steps: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the partial-transpose spectra of the pure and mixed dilations
    /// of the single-qubit dephasing channel as JSON.
    DilationDemo {
        /// Dephasing parameter p in [0, 1].
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.5)]
        rho00: f64,
        #[arg(long, default_value_t = 0.5)]
        rho01_re: f64,
        #[arg(long, default_value_t = 0.0)]
        rho01_im: f64,
    },
}

enum AppError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match &e {
            CoreError::Trace { .. }
            | CoreError::Negativity { .. }
            | CoreError::Range(_)
            | CoreError::Dimension(_)
            | CoreError::Truncation { .. } => AppError::Config(e.to_string()),
            _ => AppError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("dephase: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(msg)) => {
            eprintln!("dephase: configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Numerical(msg)) => {
            eprintln!("dephase: numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(AppError::Io(msg)) => {
            eprintln!("dephase: io error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::PhaseDiagram {
            kappa,
            state,
            theta,
            tau,
            overlay_dec,
            overlay_sd,
            out,
        } => {
            let x0 = state.load()?;
            let bath = BathModel::continuum(kappa)?;
            let grid = GridSpec {
                theta_min: theta.theta_min,
                theta_max: theta.theta_max,
                theta_steps: theta.theta_steps,
                tau_min: tau.tau_min,
                tau_max: tau.tau_max,
                tau_steps: tau.tau_steps,
            };
            let rows = dephase_core::sweep_grid(&x0, &bath, &grid)?;
            let paths = OutputPaths::new(&out);
            output::write_grid_csv(&paths.grid_csv, &rows)?;
            let with_curves = overlay_dec || overlay_sd;
            if with_curves {
                let pts = dephase_core::overlay_curves(&x0, &bath, &grid.thetas())?;
                output::write_curves_csv(&paths.curves_csv, &pts, overlay_dec, overlay_sd)?;
            }
            let counts = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
            let meta = json!({
                "tool": "dephase",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "phase-diagram",
                "kappa": kappa,
                "state": state.describe(),
                "grid": grid,
                "overlay_dec": overlay_dec,
                "overlay_sd": overlay_sd,
                "rows": rows.len(),
                "counts": {
                    "separable": counts(Verdict::Separable),
                    "entangled": counts(Verdict::Entangled),
                    "undetermined": counts(Verdict::Undetermined),
                },
            });
            output::write_meta_json(&paths.meta_json, &meta)?;
            output::write_phase_plot_script(
                &paths,
                &format!("kappa = {kappa}"),
                overlay_dec,
                overlay_sd,
            )?;
            println!(
                "phase-diagram: {} rows -> {}",
                rows.len(),
                paths.grid_csv.display()
            );
            Ok(())
        }
        Command::Curves {
            kappa,
            state,
            theta,
            out,
        } => {
            let x0 = state.load()?;
            let bath = BathModel::continuum(kappa)?;
            let thetas: Vec<f64> = GridSpec {
                theta_min: theta.theta_min,
                theta_max: theta.theta_max,
                theta_steps: theta.theta_steps,
                tau_min: 0.0,
                tau_max: 1.0,
                tau_steps: 2,
            }
            .thetas();
            let pts = dephase_core::overlay_curves(&x0, &bath, &thetas)?;
            let paths = OutputPaths::new(&out);
            output::write_curves_csv(&paths.curves_csv, &pts, true, true)?;
            let meta = json!({
                "tool": "dephase",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "curves",
                "kappa": kappa,
                "state": state.describe(),
                "theta_min": theta.theta_min,
                "theta_max": theta.theta_max,
                "theta_steps": theta.theta_steps,
            });
            output::write_meta_json(&paths.meta_json, &meta)?;
            output::write_curves_plot_script(&paths, &format!("kappa = {kappa}"))?;
            println!("curves: {} points -> {}", pts.len(), paths.curves_csv.display());
            Ok(())
        }
        Command::Tcrit { kappa, werner_c } => {
            let theta_crit = dephase_core::tcrit_query(kappa, werner_c)?;
            let threshold = ((1.0 + werner_c) / (2.0 * werner_c)).ln();
            println!(
                "{}",
                json!({
                    "kappa": kappa,
                    "werner_c": werner_c,
                    "threshold": threshold,
                    "theta_crit": theta_crit,
                })
            );
            Ok(())
        }
        Command::Concurrence {
            kappa,
            state,
            theta_min,
            theta_max,
            theta_steps,
            tau,
            out,
        } => {
            let x0 = state.load()?;
            let bath = BathModel::continuum(kappa)?;
            if theta_steps == 0 {
                return Err(AppError::Config("theta-steps must be positive".into()));
            }
            let thetas: Vec<f64> = if theta_steps == 1 {
                vec![theta_min]
            } else {
                (0..theta_steps)
                    .map(|i| {
                        theta_min + (theta_max - theta_min) * i as f64 / (theta_steps - 1) as f64
                    })
                    .collect()
            };
            let taus: Vec<f64> = (0..tau.tau_steps.max(2))
                .map(|i| {
                    tau.tau_min
                        + (tau.tau_max - tau.tau_min) * i as f64 / (tau.tau_steps.max(2) - 1) as f64
                })
                .collect();
            let mut rows = Vec::new();
            for &theta in &thetas {
                let traj = trajectory(&x0, &bath, theta, &taus, 0.0, 0.0)?;
                rows.extend(traj.into_iter().map(|p| (theta, p)));
            }
            let paths = OutputPaths::new(&out);
            output::write_trajectory_csv(&paths.grid_csv, &rows)?;
            let meta = json!({
                "tool": "dephase",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "concurrence",
                "kappa": kappa,
                "state": state.describe(),
                "thetas": thetas,
                "tau_min": tau.tau_min,
                "tau_max": tau.tau_max,
                "tau_steps": tau.tau_steps,
            });
            output::write_meta_json(&paths.meta_json, &meta)?;
            output::write_concurrence_plot_script(&paths, &format!("kappa = {kappa}"))?;
            println!(
                "concurrence: {} rows -> {}",
                rows.len(),
                paths.grid_csv.display()
            );
            Ok(())
        }
        Command::OracleCheck {
            config,
            tau_min,
            tau_max,
            tau_steps,
            out,
        } => {
            let file = std::fs::File::open(&config).map_err(|e| {
                AppError::Config(format!("cannot open {}: {e}", config.display()))
            })?;
            let cfg: OracleConfig = serde_json::from_reader(file).map_err(|e| {
                AppError::Config(format!("invalid oracle config {}: {e}", config.display()))
            })?;
            let report = oracle_report(&cfg, tau_min, tau_max, tau_steps)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match out {
                Some(path) => {
                    std::fs::write(&path, text + "\n")?;
                    println!("oracle-check -> {}", path.display());
                }
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::DilationDemo {
            p,
            rho00,
            rho01_re,
            rho01_im,
        } => {
            let q = Qubit::new(rho00, 1.0 - rho00, Complex64::new(rho01_re, rho01_im))?;
            let pure = dephase_core::pure_dilation_total(&q, p)?;
            let mixed = dephase_core::mixed_dilation_total(&q, p)?;
            let pure_pt = dephase_core::partial_transpose(&pure, 2, 2)?;
            let mixed_pt = dephase_core::partial_transpose(&mixed, 2, 2)?;
            let out = dephase_core::dephase_channel(&q, p)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "p": p,
                    "qubit": { "rho00": rho00, "rho11": 1.0 - rho00,
                               "rho01": [rho01_re, rho01_im] },
                    "channel_output": {
                        "rho00": out.rho00(), "rho11": out.rho11(),
                        "rho01": [out.rho01().re, out.rho01().im],
                    },
                    "pure_dilation": {
                        "pt_eigenvalues": pure_pt.eigenvalues(),
                        "pt_determinant": pure_pt.determinant().re,
                        "pt_determinant_closed_form":
                            dephase_core::pure_dilation_pt_determinant(&q, p)?,
                    },
                    "mixed_dilation": {
                        "pt_eigenvalues": mixed_pt.eigenvalues(),
                        "pt_min_eigenvalue": mixed_pt.min_eigenvalue(),
                    },
                }))
                .expect("report serializes")
            );
            Ok(())
        }
    }
}

fn oracle_report(
    cfg: &OracleConfig,
    tau_min: f64,
    tau_max: f64,
    tau_steps: usize,
) -> Result<serde_json::Value, AppError> {
    if tau_steps < 1 {
        return Err(AppError::Config("tau-steps must be positive".into()));
    }
    let bath = BathModel::discrete(cfg.modes.clone())?;
    let taus: Vec<f64> = if tau_steps == 1 {
        vec![tau_min]
    } else {
        (0..tau_steps)
            .map(|i| tau_min + (tau_max - tau_min) * i as f64 / (tau_steps - 1) as f64)
            .collect()
    };
    let mut samples = Vec::new();
    let mut max_coherence_error = 0.0f64;
    let mut peres_consistent = true;
    for &tau in &taus {
        let total = dephase_core::evolve_total(cfg, tau)?;
        let red = dephase_core::reduced_from_total(&total);
        let gamma = dephase_core::decoherence_exponent(&bath, cfg.theta, tau)?;
        let mag = (-gamma).exp();
        let err14 = (red.entry(0, 3).norm() - cfg.x0.rho14().norm() * mag).abs();
        let err23 = (red.entry(1, 2).norm() - cfg.x0.rho23().norm() * mag).abs();
        let coh_err = err14.max(err23);
        max_coherence_error = max_coherence_error.max(coh_err);

        let pt_sys = dephase_core::pt_min_eigenvalue(&total, Bipartition::SystemVsEnv)?;
        let pt_a = dephase_core::pt_min_eigenvalue(&total, Bipartition::AVsRest)?;
        let pt_b = dephase_core::pt_min_eigenvalue(&total, Bipartition::BVsRest)?;
        let env_pair = if cfg.modes.len() >= 2 {
            Some(dephase_core::env_pair_pt_min(&total, (0, 1))?)
        } else {
            None
        };
        let verdict = dephase_core::classify(&cfg.x0, &bath, cfg.theta, tau)?.verdict;
        // The criteria certifying entanglement must be confirmed by a
        // negative partial transpose; the converse need not hold.
        let consistent = verdict != Verdict::Entangled || pt_sys < 0.0;
        peres_consistent &= consistent;
        samples.push(json!({
            "tau": tau,
            "coherence_abs_error": coh_err,
            "decoherence_exponent": gamma,
            "pt_min": {
                "system_vs_env": pt_sys,
                "a_vs_rest": pt_a,
                "b_vs_rest": pt_b,
                "env_pair": env_pair,
            },
            "criteria_verdict": verdict.label(),
            "peres_consistent": consistent,
        }));
    }
    Ok(json!({
        "config": cfg,
        "samples": samples,
        "summary": {
            "max_coherence_abs_error": max_coherence_error,
            "peres_consistent": peres_consistent,
        },
    }))
}
