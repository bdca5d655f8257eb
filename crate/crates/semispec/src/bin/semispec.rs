//! Command-line front end: dispatches the library's verification routines
//! over a problem config and emits JSON/CSV artifacts.
//!
//! Exit codes: 0 = PASS (or plain success), 1 = FAIL verdict,
//! 2 = config/schema error, 3 = numerical failure.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use semispec::bargmann::{check_unitarity, quant_mult_check, RealSymbol};
use semispec::config::{load_config, write_atomic, write_atomic_bytes, ProblemConfig};
use semispec::dynamics::{check_dyn_conditions, check_gronwall};
use semispec::operator::{discretize, low_eigenvalues, GridSpec};
use semispec::quadmodel::{quad_spectrum, quadratic_model};
use semispec::resolvent::{pseudospectrum, scaling_study};
use semispec::symbols::{annulus_samples, check_assumptions, flatten_symbol, SampleBox, SymbolSpec};
use semispec::weight::{verify_cohomology, verify_ellipticity, WeightParams};
use semispec::{Result, SemiError};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "semispec", about = "desk-scale spectral verification for -h²Δ + V + iW")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; falls back to SEMISPEC_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the standing assumptions on a sampled box.
    CheckAssumptions {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 3.0)]
        box_half_width: f64,
        #[arg(long, default_value_t = 9)]
        points_per_axis: usize,
    },
    /// Check the dynamical conditions on the flow average.
    CheckDynamics {
        #[arg(long)]
        config: String,
        #[arg(long = "T")]
        t_window: Option<f64>,
    },
    /// Build the weight G_ε and verify cohomology + four-region ellipticity.
    BuildWeight {
        #[arg(long)]
        config: String,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "T")]
        t_window: Option<f64>,
    },
    /// Eigenvalue lattice of the quadratic model at the origin.
    QuadSpectrum {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Low-lying eigenvalues of the discretized operator.
    Eigs {
        #[arg(long)]
        config: String,
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long = "N")]
        n_points: Option<usize>,
        #[arg(long = "L")]
        l: Option<f64>,
    },
    /// σ_min sweep over a rectangular λ-grid, written as CSV.
    Pseudospectrum {
        #[arg(long)]
        config: String,
        #[arg(long)]
        h: f64,
        /// "re_min,re_max,im_min,im_max"
        #[arg(long = "box")]
        bounds: String,
        #[arg(long, default_value_t = 64)]
        res: usize,
    },
    /// h-scaling study of sup h·resolvent norm on D(0,Ch) \ hΩ.
    ScalingStudy {
        #[arg(long)]
        config: String,
        #[arg(long = "h-list", value_delimiter = ',')]
        h_list: Option<Vec<f64>>,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
    },
    /// FBI unitarity and quantization-multiplication slopes.
    FbiVerify {
        #[arg(long = "h-list", value_delimiter = ',')]
        h_list: Option<Vec<f64>>,
    },
}

fn flattened(cfg: &ProblemConfig) -> Result<SymbolSpec> {
    match cfg.spec.flatten_radius {
        Some(r) => flatten_symbol(&cfg.spec, r),
        None => Ok(cfg.spec.clone()),
    }
}

fn cvec(v: &[Complex64]) -> Vec<(f64, f64)> {
    v.iter().map(|z| (z.re, z.im)).collect()
}

/// None = informational command, no verdict.
fn run(cmd: &Cmd) -> Result<(serde_json::Value, Option<bool>)> {
    match cmd {
        Cmd::CheckAssumptions { config, box_half_width, points_per_axis } => {
            let cfg = load_config(config)?;
            let sample_box =
                SampleBox { half_width: *box_half_width, points_per_axis: *points_per_axis };
            let report = check_assumptions(&cfg.spec, &sample_box)?;
            let pass = report.all_ok();
            Ok((json!({ "problem": cfg.name, "report": report, "pass": pass }), Some(pass)))
        }
        Cmd::CheckDynamics { config, t_window } => {
            let cfg = load_config(config)?;
            let t = t_window.unwrap_or(cfg.study.t_window);
            let spec = flattened(&cfg)?;
            let qm = quadratic_model(&cfg.spec)?;
            let r_max = 2.0 * cfg.spec.flatten_radius.unwrap_or(4.0);
            let report = check_dyn_conditions(&spec, &qm, t, &[0.5, 1.0, 2.0], r_max, 16)?;
            let gronwall =
                check_gronwall(&spec, t, &annulus_samples(spec.n, 0.1, 3.0, 30), 10)?;
            let pass = report.pass;
            Ok((
                json!({
                    "problem": cfg.name,
                    "report": report,
                    "gronwall_constant": gronwall,
                    "pass": pass,
                }),
                Some(pass),
            ))
        }
        Cmd::BuildWeight { config, epsilon, delta, t_window } => {
            let cfg = load_config(config)?;
            let mut params: WeightParams = cfg.weight.clone();
            if let Some(e) = epsilon {
                params.epsilon = *e;
            }
            if let Some(d) = delta {
                params.delta = *d;
            }
            if let Some(t) = t_window {
                params.t_window = *t;
            }
            params.validate()?;
            let spec = flattened(&cfg)?;
            let r_max = 2.0 * cfg.spec.flatten_radius.unwrap_or(4.0);
            let ellipticity = verify_ellipticity(&spec, &params, r_max, 16)?;
            let samples = annulus_samples(spec.n, 1e-2, 1.0, 12);
            let residual = verify_cohomology(&spec, &params, &samples[..50.min(samples.len())])?;
            let pass = ellipticity.pass && residual <= 1e-5;
            Ok((
                json!({
                    "problem": cfg.name,
                    "params": params,
                    "ellipticity": ellipticity,
                    "cohomology_residual": residual,
                    "pass": pass,
                }),
                Some(pass),
            ))
        }
        Cmd::QuadSpectrum { config, count } => {
            let cfg = load_config(config)?;
            let qm = quadratic_model(&cfg.spec)?;
            let lattice = quad_spectrum(&qm, *count)?;
            Ok((
                json!({
                    "problem": cfg.name,
                    "eigenvalues": cvec(&lattice.eigenvalues()),
                    "sector_angle": lattice.sector_angle,
                }),
                None,
            ))
        }
        Cmd::Eigs { config, h, k, n_points, l } => {
            let cfg = load_config(config)?;
            let mut grid: GridSpec = cfg.grid.clone();
            if let Some(n) = n_points {
                grid.n_points = *n;
            }
            if let Some(l) = l {
                grid.l = *l;
            }
            let op = discretize(&cfg.spec, *h, &grid)?;
            let eigs = low_eigenvalues(&op, *k)?;
            Ok((
                json!({ "problem": cfg.name, "h": h, "eigenvalues": cvec(&eigs) }),
                None,
            ))
        }
        Cmd::Pseudospectrum { config, h, bounds, res } => {
            let cfg = load_config(config)?;
            let parts: Vec<f64> = bounds
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| SemiError::Config {
                    field: "box".into(),
                    message: format!("expected re_min,re_max,im_min,im_max: {e}"),
                })?;
            if parts.len() != 4 {
                return Err(SemiError::Config {
                    field: "box".into(),
                    message: format!("expected 4 comma-separated numbers, got {}", parts.len()),
                });
            }
            let op = discretize(&cfg.spec, *h, &cfg.grid)?;
            let field = pseudospectrum(&op, (parts[0], parts[1]), (parts[2], parts[3]), *res)?;
            let mut csv = Vec::new();
            field.write_csv(&mut csv)?;
            Ok((
                json!({ "csv": String::from_utf8_lossy(&csv), "points": field.sigma_min.len() }),
                None,
            ))
        }
        Cmd::ScalingStudy { config, h_list, c, rho } => {
            let cfg = load_config(config)?;
            let hs = h_list.clone().unwrap_or_else(|| cfg.study.h_list.clone());
            let report = scaling_study(
                &cfg.spec,
                &cfg.grid,
                &hs,
                c.unwrap_or(cfg.study.c),
                rho.unwrap_or(cfg.study.rho),
            )?;
            let pass = report.pass;
            Ok((json!({ "problem": cfg.name, "report": report, "pass": pass }), Some(pass)))
        }
        Cmd::FbiVerify { h_list } => {
            let hs = h_list.clone().unwrap_or_else(|| vec![0.4, 0.2, 0.1, 0.05]);
            let unitarity = check_unitarity(&[0.5, 0.25], 5)?;
            let slope_x2 = quant_mult_check(&RealSymbol::x_squared(), &hs)?;
            let slope_harmonic = quant_mult_check(&RealSymbol::harmonic(), &hs)?;
            let pass = unitarity <= 1e-5 && slope_x2 >= 0.9 && slope_harmonic >= 0.9;
            Ok((
                json!({
                    "unitarity_deviation": unitarity,
                    "slope_x_squared": slope_x2,
                    "slope_harmonic": slope_harmonic,
                    "pass": pass,
                }),
                Some(pass),
            ))
        }
    }
}

fn is_config_error(e: &SemiError) -> bool {
    matches!(
        e,
        SemiError::Config { .. }
            | SemiError::Json(_)
            | SemiError::Io(_)
            | SemiError::DimensionMismatch { .. }
    )
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("SEMISPEC_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not set thread pool size: {e}");
        }
    }

    match run(&cli.cmd) {
        Ok((report, verdict)) => {
            let emit = if let (Cmd::Pseudospectrum { .. }, Some(csv)) =
                (&cli.cmd, report.get("csv").and_then(|v| v.as_str()))
            {
                // CSV artifact goes to --out verbatim; JSON wrapper to stdout
                if let Some(out) = &cli.out {
                    write_atomic_bytes(out, csv.as_bytes())
                } else {
                    println!("{csv}");
                    Ok(())
                }
            } else if let Some(out) = &cli.out {
                write_atomic(out, &report)
            } else {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
                Ok(())
            };
            if let Err(e) = emit {
                eprintln!("error writing output: {e}");
                std::process::exit(2);
            }
            match verdict {
                Some(true) | None => std::process::exit(0),
                Some(false) => {
                    eprintln!("verdict: FAIL");
                    std::process::exit(1);
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if is_config_error(&e) { 2 } else { 3 });
        }
    }
}
