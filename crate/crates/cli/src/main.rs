//! Command-line front end: estimators, critical-point sweeps, invariant
//! verification, SVG rendering and configuration snapshots.

mod config_file;
mod render;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config_file::ConfigFile;
use holeperc::config::{sample_configuration, Configuration, SimulationParams};
use holeperc::estimators::{
    estimate_average_hole_size, estimate_kappa, estimate_theta_bond, estimate_theta_face,
    estimate_theta_hole, estimate_uniqueness, estimate_vertex_density, trifurcation_density,
    two_point_hole, EstimateReport,
};
use holeperc::lattice::{Dim, DualVertex};
use holeperc::sweep::{sweep_pc, SweepSpec};
use holeperc::verify::{run_verification, VerifyOptions};

const FORMAT_VERSION: &str = "holeperc csv v1";

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "holeperc",
    version,
    about = "Hole percolation on the d-dimensional cubical lattice"
)]
struct Cli {
    /// Worker threads (fallback: HOLEPERC_JOBS, then all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// key=value defaults file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one Monte Carlo estimator and emit a report row.
    Estimate(EstimateArgs),
    /// Coupled spanning-probability sweep with critical-point extraction.
    Sweep(SweepArgs),
    /// Run the randomized invariant suites.
    Verify(VerifyArgs),
    /// Render a d=2 configuration with its hole graph as SVG.
    Render(RenderArgs),
    /// Save or load configuration snapshot files.
    Snapshot(SnapshotArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// theta_hole | theta_bond | theta_face | kappa | vertex_density |
    /// avg_hole_size | two_point_hole | spanning_hole_clusters |
    /// trifurcation_density
    #[arg(long)]
    quantity: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Dual-bond probability (kappa only).
    #[arg(long)]
    dual_p: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Dual vertex "c1,c2,..." (two_point_hole only).
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated window radii, e.g. "16,32,64".
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    /// Explicit comma-separated grid; overrides p-min/p-max/p-step.
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to one dimension (default: 2 and 3).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    max_n: Option<usize>,
    /// Randomized cases per check.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Negative control: corrupt one face so the identity check must fail.
    #[arg(long)]
    inject_fault: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicate: Option<usize>,
    /// Render a saved snapshot instead of sampling.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnapshotArgs {
    #[command(subcommand)]
    action: SnapshotAction,
}

#[derive(Subcommand)]
enum SnapshotAction {
    /// Sample a configuration and write it to a snapshot file.
    Save {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        replicate: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read a snapshot, print its header, optionally re-serialize it.
    Load {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let jobs = cli.jobs.or_else(|| {
        std::env::var("HOLEPERC_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    let config = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(c) => c,
            Err(e) => return usage_error(&e),
        },
        None => ConfigFile::default(),
    };

    match cli.command {
        Command::Estimate(args) => cmd_estimate(args, &config),
        Command::Sweep(args) => cmd_sweep(args, &config),
        Command::Verify(args) => cmd_verify(args, &config),
        Command::Render(args) => cmd_render(args, &config),
        Command::Snapshot(args) => cmd_snapshot(args, &config),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn run_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_FAILURE)
}

fn parse_coords(text: &str) -> Result<DualVertex, String> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|t| t.trim().parse()).collect();
    coords
        .map(|coords| DualVertex { coords })
        .map_err(|_| format!("cannot parse dual vertex {text:?}; expected e.g. \"0,0\""))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            let mut file =
                File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            file.write_all(content.as_bytes())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

struct EstimateSpec {
    quantity: String,
    params: SimulationParams,
    dual_p: Option<f64>,
    x: Option<String>,
    y: Option<String>,
    format: String,
}

fn cmd_estimate(args: EstimateArgs, config: &ConfigFile) -> ExitCode {
    let resolved = (|| -> Result<EstimateSpec, String> {
        let quantity: String = config.resolve(args.quantity, "quantity", None)?;
        let d: usize = config.resolve(args.d, "d", None)?;
        let n: usize = config.resolve(args.n, "n", None)?;
        let needs_p = quantity != "kappa";
        let p: f64 = if needs_p {
            config.resolve(args.p, "p", None)?
        } else {
            config.resolve(args.p, "p", Some(0.0))?
        };
        let reps: usize = config.resolve(args.reps, "reps", None)?;
        let seed: u64 = config.resolve(args.seed, "seed", Some(0))?;
        let format: String = config.resolve(args.format, "format", Some("csv".into()))?;
        let dual_p = match args.dual_p {
            Some(v) => Some(v),
            None => config.get("dual_p").map(|s| s.parse::<f64>()).transpose()
                .map_err(|_| "config key dual_p: not a number".to_string())?,
        };
        let x = args.x.or_else(|| config.get("x").map(String::from));
        let y = args.y.or_else(|| config.get("y").map(String::from));
        let d = Dim::new(d).map_err(|e| e.to_string())?;
        Ok(EstimateSpec {
            quantity,
            params: SimulationParams { p, d, n, replicates: reps, seed },
            dual_p,
            x,
            y,
            format,
        })
    })();
    let EstimateSpec { quantity, params, dual_p, x, y, format } = match resolved {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };

    let report: Result<EstimateReport, String> = match quantity.as_str() {
        "theta_hole" => estimate_theta_hole(&params).map_err(|e| e.to_string()),
        "theta_bond" => estimate_theta_bond(&params).map_err(|e| e.to_string()),
        "theta_face" => estimate_theta_face(&params).map_err(|e| e.to_string()),
        "vertex_density" => estimate_vertex_density(&params).map_err(|e| e.to_string()),
        "spanning_hole_clusters" => estimate_uniqueness(&params).map_err(|e| e.to_string()),
        "trifurcation_density" => trifurcation_density(&params).map_err(|e| e.to_string()),
        "avg_hole_size" => {
            estimate_average_hole_size(&params).map(|est| est.lhs).map_err(|e| e.to_string())
        }
        "kappa" => match dual_p {
            Some(q) => estimate_kappa(q, &params).map_err(|e| e.to_string()),
            None => return usage_error("kappa requires --dual-p"),
        },
        "two_point_hole" => {
            let (Some(x), Some(y)) = (x, y) else {
                return usage_error("two_point_hole requires --x and --y");
            };
            let (x, y) = match (parse_coords(&x), parse_coords(&y)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => return usage_error(&e),
            };
            two_point_hole(&params, &x, &y).map_err(|e| e.to_string())
        }
        other => return usage_error(&format!("unknown quantity {other:?}")),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return run_error(&e),
    };

    let p_note = match report.quantity {
        holeperc::estimators::Quantity::Kappa => format!("dual_p={}", report.params.p),
        _ => format!("p={}", params.p),
    };
    let content = match format.as_str() {
        "csv" => format!(
            "# {FORMAT_VERSION}\n# command=estimate quantity={} d={} n={} {} reps={} seed={}\n{}\n{}\n",
            quantity,
            params.d.get(),
            params.n,
            p_note,
            params.replicates,
            params.seed,
            EstimateReport::CSV_HEADER,
            report.csv_row()
        ),
        "json" => {
            let doc = serde_json::json!({
                "format": FORMAT_VERSION,
                "command": "estimate",
                "reports": [report.to_json()],
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        other => return usage_error(&format!("unknown format {other:?}")),
    };
    match write_output(&args.out, &content) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => run_error(&e),
    }
}

fn cmd_sweep(args: SweepArgs, config: &ConfigFile) -> ExitCode {
    let resolved = (|| -> Result<(SweepSpec, String), String> {
        let d: usize = config.resolve(args.d, "d", None)?;
        let n_list_text: String = config.resolve(args.n_list, "n_list", None)?;
        let n_list: Result<Vec<usize>, _> =
            n_list_text.split(',').map(|t| t.trim().parse()).collect();
        let n_list = n_list.map_err(|_| format!("cannot parse n-list {n_list_text:?}"))?;
        let grid_text = args.p_grid.or_else(|| config.get("p_grid").map(String::from));
        let p_grid = match grid_text {
            Some(text) => {
                let grid: Result<Vec<f64>, _> =
                    text.split(',').map(|t| t.trim().parse()).collect();
                grid.map_err(|_| format!("cannot parse p-grid {text:?}"))?
            }
            None => {
                let p_min: f64 = config.resolve(args.p_min, "p_min", None)?;
                let p_max: f64 = config.resolve(args.p_max, "p_max", None)?;
                let p_step: f64 = config.resolve(args.p_step, "p_step", None)?;
                if p_step <= 0.0 {
                    return Err("p-step must be positive".into());
                }
                let count = ((p_max - p_min) / p_step).round() as usize + 1;
                (0..count).map(|k| p_min + k as f64 * p_step).collect()
            }
        };
        let reps: usize = config.resolve(args.reps, "reps", None)?;
        let seed: u64 = config.resolve(args.seed, "seed", Some(0))?;
        let format: String = config.resolve(args.format, "format", Some("csv".into()))?;
        let d = Dim::new(d).map_err(|e| e.to_string())?;
        Ok((
            SweepSpec {
                d,
                n_list,
                p_grid,
                replicates: reps,
                seed,
            },
            format,
        ))
    })();
    let (spec, format) = match resolved {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };

    let result = match sweep_pc(&spec) {
        Ok(r) => r,
        Err(e) => return run_error(&e.to_string()),
    };
    let content = match format.as_str() {
        "csv" => {
            let mut out = format!(
                "# {FORMAT_VERSION}\n# command=sweep d={} n_list={:?} points={} reps={} seed={}\n{}\n",
                spec.d.get(),
                spec.n_list,
                spec.p_grid.len(),
                spec.replicates,
                spec.seed,
                EstimateReport::CSV_HEADER
            );
            for row in result.csv_rows() {
                out.push_str(&row);
                out.push('\n');
            }
            out
        }
        "json" => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "format": FORMAT_VERSION,
                "command": "sweep",
                "result": result.to_json(),
            }))
            .unwrap()
        ),
        other => return usage_error(&format!("unknown format {other:?}")),
    };
    match write_output(&args.out, &content) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => run_error(&e),
    }
}

fn cmd_verify(args: VerifyArgs, config: &ConfigFile) -> ExitCode {
    let defaults = VerifyOptions::default();
    let resolved = (|| -> Result<VerifyOptions, String> {
        let dims = match config.resolve::<usize>(args.d, "d", Some(0))? {
            0 => defaults.dims.clone(),
            d if d >= 2 => vec![d],
            d => return Err(format!("dimension must be >= 2, got {d}")),
        };
        Ok(VerifyOptions {
            dims,
            max_n: config.resolve(args.max_n, "max_n", Some(defaults.max_n))?,
            seeds: config.resolve(args.seeds, "seeds", Some(defaults.seeds))?,
            base_seed: config.resolve(args.seed, "seed", Some(defaults.base_seed))?,
            inject_fault: args.inject_fault,
        })
    })();
    let opts = match resolved {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };

    let report = run_verification(&opts);
    for check in &report.checks {
        match &check.failure {
            None => println!("ok   {} ({} cases)", check.name, check.cases),
            Some(msg) => println!("FAIL {}: {msg}", check.name),
        }
    }
    if report.all_passed() {
        println!("verify: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("verify: FAILED");
        ExitCode::from(EXIT_FAILURE)
    }
}

fn cmd_render(args: RenderArgs, config: &ConfigFile) -> ExitCode {
    let cfg = if let Some(path) = &args.snapshot {
        match File::open(path)
            .map_err(|e| e.to_string())
            .and_then(|f| Configuration::read_snapshot(f).map_err(|e| e.to_string()))
        {
            Ok(cfg) => cfg,
            Err(e) => return run_error(&format!("cannot load snapshot: {e}")),
        }
    } else {
        let resolved = (|| -> Result<(SimulationParams, usize), String> {
            let d: usize = config.resolve(args.d, "d", Some(2))?;
            let n: usize = config.resolve(args.n, "n", None)?;
            let p: f64 = config.resolve(args.p, "p", None)?;
            let seed: u64 = config.resolve(args.seed, "seed", Some(0))?;
            let replicate: usize = config.resolve(args.replicate, "replicate", Some(0))?;
            let d = Dim::new(d).map_err(|e| e.to_string())?;
            Ok((
                SimulationParams {
                    p,
                    d,
                    n,
                    replicates: replicate + 1,
                    seed,
                },
                replicate,
            ))
        })();
        match resolved {
            Ok((params, replicate)) => sample_configuration(&params, replicate),
            Err(e) => return usage_error(&e),
        }
    };

    let svg = match render::render_svg(&cfg) {
        Ok(svg) => svg,
        Err(e) => return usage_error(&e),
    };
    match write_output(&args.out, &svg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => run_error(&e),
    }
}

fn cmd_snapshot(args: SnapshotArgs, config: &ConfigFile) -> ExitCode {
    match args.action {
        SnapshotAction::Save {
            d,
            n,
            p,
            seed,
            replicate,
            out,
        } => {
            let resolved = (|| -> Result<(SimulationParams, usize), String> {
                let d: usize = config.resolve(d, "d", None)?;
                let n: usize = config.resolve(n, "n", None)?;
                let p: f64 = config.resolve(p, "p", None)?;
                let seed: u64 = config.resolve(seed, "seed", Some(0))?;
                let replicate: usize = config.resolve(replicate, "replicate", Some(0))?;
                let d = Dim::new(d).map_err(|e| e.to_string())?;
                Ok((
                    SimulationParams {
                        p,
                        d,
                        n,
                        replicates: replicate + 1,
                        seed,
                    },
                    replicate,
                ))
            })();
            let (params, replicate) = match resolved {
                Ok(v) => v,
                Err(e) => return usage_error(&e),
            };
            let cfg = sample_configuration(&params, replicate);
            let file = match File::create(&out) {
                Ok(f) => f,
                Err(e) => return run_error(&format!("cannot create {}: {e}", out.display())),
            };
            match cfg.write_snapshot(file) {
                Ok(()) => {
                    println!(
                        "saved d={} n={} p={} seed={} replicate={} open_faces={} -> {}",
                        params.d.get(),
                        params.n,
                        params.p,
                        params.seed,
                        replicate,
                        cfg.open_count(),
                        out.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => run_error(&e.to_string()),
            }
        }
        SnapshotAction::Load { input, out } => {
            let cfg = match File::open(&input)
                .map_err(|e| e.to_string())
                .and_then(|f| Configuration::read_snapshot(f).map_err(|e| e.to_string()))
            {
                Ok(cfg) => cfg,
                Err(e) => return run_error(&format!("cannot load snapshot: {e}")),
            };
            let summary = serde_json::json!({
                "d": cfg.window.d(),
                "n": cfg.window.n(),
                "p_label": cfg.p_label,
                "seed_label": cfg.seed_label,
                "faces": cfg.window.face_count(),
                "open_faces": cfg.open_count(),
            });
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            if let Some(out) = out {
                let file = match File::create(&out) {
                    Ok(f) => f,
                    Err(e) => return run_error(&format!("cannot create {}: {e}", out.display())),
                };
                if let Err(e) = cfg.write_snapshot(file) {
                    return run_error(&e.to_string());
                }
            }
            ExitCode::SUCCESS
        }
    }
}
