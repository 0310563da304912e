//! Command-line front end: convergence sweeps, the lemma verification suite,
//! single-point operator evaluation, and the one-time envelope-constant
//! calibration.

use clap::{Args, Parser, Subcommand};
use qlandau::harness::{
    calibrate, field_by_name, potential_by_name, run_lemma_suite, run_sweep, AlphaSchedule,
    Constants, LemmaId, SweepConfig,
};
use qlandau::operators::eight::{decompose_8d, remainder_terms_8d};
use qlandau::operators::semi::{limit_targets, main_terms_semi};
use qlandau::operators::{ScalingParams, TermBreakdown};
use qlandau::quadrature::Scheme;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qlandau",
    about = "Weak-form quantum collision operators and their grazing-collision limit: \
             sweeps, lemma checks, evaluation, calibration"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON sweep configuration file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Frozen envelope constants file.
    #[arg(long, default_value = "constants.json")]
    constants: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread cap (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    pair_nodes: Option<usize>,
    #[arg(long)]
    sphere_nodes: Option<usize>,
    #[arg(long)]
    radial_nodes: Option<usize>,
    /// Quadrature scheme: tensor_gauss_hermite | qmc_sobol_like | sphere_product.
    #[arg(long)]
    scheme: Option<String>,
    /// Comma-separated descending ladder, e.g. 0.4,0.2,0.1,0.05.
    #[arg(long)]
    eps_ladder: Option<String>,
    /// constant | affine | classical.
    #[arg(long)]
    alpha_schedule: Option<String>,
    #[arg(long)]
    alpha0: Option<f64>,
    /// +1 (enhancement) or -1 (blocking).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// gaussian | indicator | power_law.
    #[arg(long)]
    potential: Option<String>,
    /// Distribution profile name.
    #[arg(long)]
    f: Option<String>,
    /// Test function name.
    #[arg(long)]
    psi: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the ε-ladder convergence sweep; writes report.csv and report.json.
    Sweep,
    /// Run the lemma verification suite; writes lemmas.json.
    Lemmas {
        /// Comma-separated selection, e.g. "A.1,L2.2a"; default: all.
        #[arg(long)]
        select: Option<String>,
    },
    /// Evaluate every named term at a single (ε, α) point; prints JSON.
    Eval {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// One-time envelope-constant calibration; writes constants.json.
    Calibrate,
}

fn build_config(common: &Common) -> Result<SweepConfig, String> {
    let mut cfg: SweepConfig = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str(&text)
                .map_err(|e| format!("malformed config {}: {e}", path.display()))?
        }
        None => SweepConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.quadrature.seed = seed;
    }
    if let Some(n) = common.pair_nodes {
        cfg.quadrature.pair_nodes = n;
    }
    if let Some(n) = common.sphere_nodes {
        cfg.quadrature.sphere_nodes = n;
    }
    if let Some(n) = common.radial_nodes {
        cfg.quadrature.radial_u_nodes = n;
    }
    if let Some(s) = &common.scheme {
        cfg.quadrature.scheme = match s.as_str() {
            "tensor_gauss_hermite" => Scheme::TensorGaussHermite,
            "qmc_sobol_like" => Scheme::QmcSobolLike,
            "sphere_product" => Scheme::SphereProduct,
            other => return Err(format!("unknown scheme '{other}'")),
        };
    }
    if let Some(s) = &common.eps_ladder {
        cfg.eps_ladder = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad eps '{t}': {e}")))
            .collect::<Result<_, _>>()?;
    }
    if let Some(s) = &common.alpha_schedule {
        let alpha0 = common.alpha0.unwrap_or(cfg.alpha_schedule.alpha0());
        cfg.alpha_schedule = match s.as_str() {
            "constant" => AlphaSchedule::Constant { alpha0 },
            "affine" => AlphaSchedule::Affine { alpha0, c: 1.0, beta: 1.0 },
            "classical" => AlphaSchedule::Classical,
            other => return Err(format!("unknown alpha schedule '{other}'")),
        };
    } else if let Some(a0) = common.alpha0 {
        cfg.alpha_schedule = match cfg.alpha_schedule {
            AlphaSchedule::Constant { .. } => AlphaSchedule::Constant { alpha0: a0 },
            AlphaSchedule::Affine { c, beta, .. } => {
                AlphaSchedule::Affine { alpha0: a0, c, beta }
            }
            AlphaSchedule::Classical => AlphaSchedule::Classical,
        };
    }
    if let Some(t) = common.theta {
        cfg.theta = t;
    }
    if let Some(e) = common.eta {
        cfg.eta = e;
    }
    if let Some(p) = &common.potential {
        cfg.potential = p.clone();
    }
    if let Some(f) = &common.f {
        cfg.f = f.clone();
    }
    if let Some(p) = &common.psi {
        cfg.psi = p.clone();
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn load_constants(path: &Path) -> Constants {
    match Constants::load(path) {
        Ok(c) => c,
        Err(_) => {
            eprintln!(
                "warning: constants file {} not found or unreadable; \
                 envelope checks run without frozen constants (run `calibrate` first)",
                path.display()
            );
            Constants::default()
        }
    }
}

fn write_with_sidecar(dir: &Path, name: &str, body: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), body)?;
    // Timestamps live only in the sidecar so report bodies stay byte-stable.
    let meta = serde_json::json!({
        "file": name,
        "written_unix_ms": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
    });
    std::fs::write(
        dir.join(format!("{}.meta.json", name.trim_end_matches(".json").trim_end_matches(".csv"))),
        serde_json::to_string_pretty(&meta).unwrap() + "\n",
    )
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }

    match &cli.cmd {
        Cmd::Sweep => {
            let cfg = build_config(&cli.common)?;
            let constants = load_constants(&cli.common.constants);
            let report = run_sweep(&cfg, &constants).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| e.to_string())?
                + "\n";
            write_with_sidecar(&cli.common.out, "report.json", &json)
                .map_err(|e| e.to_string())?;
            write_with_sidecar(&cli.common.out, "report.csv", &report.to_csv())
                .map_err(|e| e.to_string())?;
            if report.degenerate {
                println!("sweep degenerate: all gaps identically zero");
                return Ok(0);
            }
            let rate = report.fitted_rate.unwrap_or(f64::NAN);
            println!(
                "sweep: fitted rate {:.3}, theorem constant {:.4e}, envelope {}",
                rate,
                report.theorem_constant,
                if report.envelope_pass { "pass" } else { "FAIL" }
            );
            Ok(if report.envelope_pass && rate >= 0.8 { 0 } else { 2 })
        }
        Cmd::Lemmas { select } => {
            let cfg = build_config(&cli.common)?;
            let constants = load_constants(&cli.common.constants);
            let selection: Vec<LemmaId> = match select {
                Some(s) if !s.trim().is_empty() => s
                    .split(',')
                    .map(|t| LemmaId::parse(t.trim()).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
                _ => LemmaId::all().to_vec(),
            };
            let rows = run_lemma_suite(&selection, &constants, &cfg.quadrature)
                .map_err(|e| e.to_string())?;
            let json =
                serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())? + "\n";
            write_with_sidecar(&cli.common.out, "lemmas.json", &json)
                .map_err(|e| e.to_string())?;
            let mut all_pass = true;
            for row in &rows {
                println!(
                    "{} {}: max ratio {:.4e}{}",
                    if row.pass { "pass" } else { "FAIL" },
                    row.id,
                    row.max_ratio,
                    if row.monotone_ok { "" } else { " (ratio grew as eps shrank)" }
                );
                all_pass &= row.pass;
            }
            Ok(if all_pass { 0 } else { 2 })
        }
        Cmd::Eval { eps, alpha } => {
            let cfg = build_config(&cli.common)?;
            let f = field_by_name(&cfg.f).map_err(|e| e.to_string())?;
            let psi = field_by_name(&cfg.psi).map_err(|e| e.to_string())?;
            let pot = potential_by_name(&cfg.potential).map_err(|e| e.to_string())?;
            let params =
                ScalingParams::new(*eps, *alpha, cfg.alpha_schedule.alpha0(), cfg.theta)
                    .map_err(|e| e.to_string())?;
            let spec = &cfg.quadrature;
            let main =
                main_terms_semi(&f, &psi, &pot, &params, spec).map_err(|e| e.to_string())?;
            let rem = remainder_terms_8d(&f, &psi, &pot, &params, &spec.coarse())
                .map_err(|e| e.to_string())?;
            let dec = decompose_8d(&f, &psi, &pot, &params, &spec.coarse())
                .map_err(|e| e.to_string())?;
            let targets =
                limit_targets(&f, &psi, &pot, &params, spec).map_err(|e| e.to_string())?;
            let breakdown = TermBreakdown {
                t2: main.t2.value,
                t3: main.t3.value,
                t4: rem.t4.value,
                t2p: main.t2p.value,
                t3ap: main.t3ap.value,
                t3bp: main.t3bp.value,
                t4p: rem.t4p.value,
                t5p: rem.t5p.value,
                t6p: rem.t6p.value,
                qb_binary: dec.binary.value,
                qb_ternary: dec.ternary.value,
                cross_binary: dec.cross_binary.value,
                cross_ternary: dec.cross_ternary.value,
                l2: targets[0].value,
                l3a: targets[1].value,
                l3b: targets[2].value,
                ql_weak: targets[3].value,
                qb_weak_raw: Some(dec.raw.value),
                quad_err: main.t2.error_estimate
                    + main.t3.error_estimate
                    + rem.total_err()
                    + dec.raw.error_estimate
                    + targets[3].error_estimate,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&breakdown).map_err(|e| e.to_string())?
            );
            Ok(0)
        }
        Cmd::Calibrate => {
            let cfg = build_config(&cli.common)?;
            let constants = calibrate(&cfg.quadrature).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&cli.common.out).map_err(|e| e.to_string())?;
            constants
                .save(&cli.common.out.join("constants.json"))
                .map_err(|e| e.to_string())?;
            println!("calibrated {} constants", constants.c_impl.len());
            for (k, v) in &constants.c_impl {
                println!("  {k} = {v:.6e}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
