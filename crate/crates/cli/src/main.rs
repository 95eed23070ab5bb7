//! `abflux` — deficiency indices, self-adjoint extensions, and bound
//! states of the planar flux-line Hamiltonian with an inverse-square
//! potential, from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;

use abflux::extensions::{boundary_ratio, deficiency_element, make_extension, BoundaryRatio, Sign};
use abflux::spectral::{bound_states_closed_form, shooting_eigenvalues, BoundState};
use abflux::weyl::{default_window, sector_survey, WeylVerdict};
use abflux::{
    contributing_sectors, deficiency_indices, phase_structure, sector_channel, FluxConfig,
    L2Norm,
};

mod config;
mod sweep;
mod verify;

use config::FileConfig;
use sweep::GridAxis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "abflux",
    version,
    about = "Deficiency indices and self-adjoint extensions of the planar flux-line Hamiltonian with an inverse-square potential"
)]
struct Cli {
    /// Optional key=value configuration file (tolerances, grid defaults);
    /// command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads for sweeps and verification (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deficiency indices and phase case at one parameter point.
    Indices(IndicesArgs),
    /// Sweep the (kappa, alpha) plane into per-cell records.
    PhaseDiagram(PhaseDiagramArgs),
    /// Sample a deficiency element on a radial grid.
    Element(ElementArgs),
    /// Bound states of a sector-diagonal self-adjoint extension.
    Spectrum(SpectrumArgs),
    /// Run the oracle and property verification suites.
    Verify(VerifyArgs),
    /// Indices with a Coulomb term, cross-checked by the numeric oracle
    /// (shorthand for `indices <kappa> <alpha> <beta> --numeric`).
    CoulombCheck(CoulombArgs),
}

#[derive(Args)]
struct IndicesArgs {
    #[arg(allow_negative_numbers = true)]
    kappa: f64,
    #[arg(allow_negative_numbers = true)]
    alpha: f64,
    /// Coulomb coupling (numeric oracle only; the closed form is for beta = 0).
    #[arg(allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Also classify every sector with the numeric endpoint oracle.
    #[arg(long)]
    numeric: bool,
    /// Oracle integration tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Duplicate the report into a file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    /// Flux axis MIN:MAX:STEPS (inclusive).
    #[arg(long, value_name = "MIN:MAX:STEPS", allow_hyphen_values = true)]
    kappa: Option<GridAxis>,
    /// Coupling axis MIN:MAX:STEPS (inclusive).
    #[arg(long, value_name = "MIN:MAX:STEPS", allow_hyphen_values = true)]
    alpha: Option<GridAxis>,
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<OutputFormat>,
    /// Output path (standard output when absent).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ElementArgs {
    #[arg(allow_negative_numbers = true)]
    kappa: f64,
    #[arg(allow_negative_numbers = true)]
    alpha: f64,
    #[arg(allow_negative_numbers = true)]
    m: i64,
    /// Which deficiency element.
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    #[arg(long, default_value_t = 0.01)]
    r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    r_max: f64,
    /// Sample count on a logarithmic grid.
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, value_name = "FMT")]
    format: Option<OutputFormat>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(allow_negative_numbers = true)]
    kappa: f64,
    #[arg(allow_negative_numbers = true)]
    alpha: f64,
    #[arg(allow_negative_numbers = true)]
    m: i64,
    /// Boundary phase theta in radians (sector-diagonal extension).
    #[arg(allow_negative_numbers = true)]
    theta: Option<f64>,
    /// JSON file with a full d x d unitary as a flat row-major array of
    /// [re, im] pairs; must be diagonal to define per-sector spectra.
    #[arg(long, value_name = "PATH", conflicts_with = "theta")]
    unitary: Option<PathBuf>,
    /// Also run the shooting oracle and print deviations.
    #[arg(long)]
    shooting: bool,
    /// Dirichlet wall radius used when no closed-form state guides the scan.
    #[arg(long, default_value_t = 40.0)]
    wall: f64,
    #[arg(long, default_value_t = 8)]
    max_count: usize,
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Generator seed; identical seeds give byte-identical output.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Case count for the oracle-equality suite (the other suites scale
    /// from it).
    #[arg(long, value_name = "K")]
    cases: Option<usize>,
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Bias the closed-form index by one (harness sensitivity check).
    #[arg(long, hide = true)]
    inject_index_fault: bool,
}

#[derive(Args)]
struct CoulombArgs {
    #[arg(allow_negative_numbers = true)]
    kappa: f64,
    #[arg(allow_negative_numbers = true)]
    alpha: f64,
    #[arg(allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("thread pool")?;
    }
    let file_cfg = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Indices(args) => cmd_indices(&file_cfg, args),
        Command::PhaseDiagram(args) => cmd_phase_diagram(&file_cfg, args),
        Command::Element(args) => cmd_element(&file_cfg, args),
        Command::Spectrum(args) => cmd_spectrum(&file_cfg, args),
        Command::Verify(args) => cmd_verify(&file_cfg, args),
        Command::CoulombCheck(args) => cmd_indices(
            &file_cfg,
            IndicesArgs {
                kappa: args.kappa,
                alpha: args.alpha,
                beta: Some(args.beta),
                numeric: true,
                tol: args.tol,
                out: args.out,
            },
        ),
    }
}

/// Sink that tees the report to stdout and an optional file.
fn report_sinks(out: Option<&PathBuf>) -> Result<Vec<Box<dyn Write>>> {
    let mut sinks: Vec<Box<dyn Write>> = vec![Box::new(std::io::stdout())];
    if let Some(path) = out {
        let file = std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        sinks.push(Box::new(file));
    }
    Ok(sinks)
}

fn cmd_indices(file_cfg: &FileConfig, args: IndicesArgs) -> Result<ExitCode> {
    let tol = file_cfg.resolve(args.tol, "tol", 1e-10)?;
    let beta = args.beta.unwrap_or(0.0);
    let config = FluxConfig::with_beta(args.kappa, args.alpha, beta)?;
    let report = deficiency_indices(&config);

    let mut text = String::new();
    text += &format!("kappa = {}, alpha = {}, beta = {}\n", config.kappa, config.alpha, beta);
    text += &format!("n+/n- = {}\n", report.n_plus);
    text += &format!("Gamma = {:?}\n", report.gamma);
    text += &format!("boundary_flag = {}\n", report.boundary_flag);
    match phase_structure(config.alpha) {
        Ok(ps) => {
            let k0 = ps.kappa0.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            text += &format!(
                "phase: p = {}, case {}, kappa0 = {k0}, index inside/outside = {}/{}\n",
                ps.p, ps.case_label, ps.index_inside, ps.index_outside
            );
        }
        Err(_) => text += "phase: alpha >= 1, essentially self-adjoint (no case applies)\n",
    }

    if args.numeric {
        let survey = sector_survey(&config, default_window(&config), tol)?;
        let mut numeric_n = 0usize;
        let mut inconclusive = Vec::new();
        text += "numeric endpoint oracle (lambda = i, with beta):\n";
        for s in &survey {
            let closed = if s.nu_squared < 1.0 { "LC" } else { "LP" };
            let (numeric, mark) = match s.report.verdict {
                WeylVerdict::LimitCircle => {
                    numeric_n += 1;
                    ("LC", if s.nu_squared < 1.0 { "agree" } else { "DISAGREE" })
                }
                WeylVerdict::LimitPoint => {
                    ("LP", if s.nu_squared < 1.0 { "DISAGREE" } else { "agree" })
                }
                WeylVerdict::Inconclusive => {
                    inconclusive.push(s.m);
                    ("??", "inconclusive")
                }
            };
            text += &format!(
                "  m = {:>3}: nu^2 = {:>12.6}, closed-form {closed}, numeric {numeric} ({mark})\n",
                s.m, s.nu_squared
            );
        }
        let verdict = if !inconclusive.is_empty() {
            format!("INCONCLUSIVE sectors {inconclusive:?}")
        } else if numeric_n == report.n_plus {
            "AGREE".into()
        } else {
            "DISAGREE".into()
        };
        text += &format!(
            "closed-form {} (beta = 0), numeric {} (beta = {}), {}\n",
            report.n_plus, numeric_n, beta, verdict
        );
    }

    for sink in &mut report_sinks(args.out.as_ref())? {
        sink.write_all(text.as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_phase_diagram(file_cfg: &FileConfig, args: PhaseDiagramArgs) -> Result<ExitCode> {
    let kappa = match args.kappa {
        Some(axis) => axis,
        None => file_cfg
            .get::<String>("kappa")?
            .map(|s| s.parse())
            .transpose()?
            .ok_or_else(|| anyhow!("missing --kappa MIN:MAX:STEPS"))?,
    };
    let alpha = match args.alpha {
        Some(axis) => axis,
        None => file_cfg
            .get::<String>("alpha")?
            .map(|s| s.parse())
            .transpose()?
            .ok_or_else(|| anyhow!("missing --alpha MIN:MAX:STEPS"))?,
    };
    let format = resolve_format(file_cfg, args.format)?;
    let records = sweep::run_sweep(kappa, alpha);
    match args.out {
        Some(path) => {
            let file = std::fs::File::create(&path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            let mut buf = std::io::BufWriter::new(file);
            sweep::write_records(&records, format, &mut buf)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = std::io::stdout();
            sweep::write_records(&records, format, &mut stdout.lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_format(file_cfg: &FileConfig, flag: Option<OutputFormat>) -> Result<OutputFormat> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match file_cfg.get::<String>("format")?.as_deref() {
        None => Ok(OutputFormat::Csv),
        Some("csv") => Ok(OutputFormat::Csv),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => bail!("config format = {other}: expected csv or json"),
    }
}

fn cmd_element(file_cfg: &FileConfig, args: ElementArgs) -> Result<ExitCode> {
    if !(args.r_min > 0.0 && args.r_max > args.r_min) {
        bail!("need 0 < r-min < r-max");
    }
    if args.points < 2 {
        bail!("need at least 2 points");
    }
    let format = resolve_format(file_cfg, args.format)?;
    let config = FluxConfig::new(args.kappa, args.alpha)?;
    let channel = sector_channel(&config, args.m);
    let element = deficiency_element(&channel, args.sign.into())?;

    let norm = match element.l2_norm {
        L2Norm::Finite(n) => format!("{}", n.sqrt()),
        L2Norm::Infinite => "inf".into(),
    };
    eprintln!(
        "sector m = {}: nu^2 = {}, order = {}, limit {}",
        channel.m,
        channel.nu_squared,
        channel.order,
        if channel.is_limit_circle() { "circle" } else { "point" }
    );
    eprintln!("psi_{:?}: L2 norm = {norm}, boundary data {:?}", element.sign, element.boundary);

    let ratio = args.r_max / args.r_min;
    let mut rows = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let r = args.r_min * ratio.powf(i as f64 / (args.points - 1) as f64);
        let v = element.evaluate(r)?;
        rows.push((r, v));
    }

    let mut sinks = report_sinks(args.out.as_ref())?;
    let out = sinks.last_mut().expect("at least stdout");
    match format {
        OutputFormat::Csv => {
            writeln!(out, "r,re,im,abs")?;
            for (r, v) in &rows {
                writeln!(out, "{r},{},{},{}", v.re, v.im, v.norm())?;
            }
        }
        OutputFormat::Json => {
            for (r, v) in &rows {
                writeln!(
                    out,
                    "{}",
                    serde_json::json!({"r": r, "re": v.re, "im": v.im, "abs": v.norm()})
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn spectrum_boundary_ratio(
    config: &FluxConfig,
    m: i64,
    theta: Option<f64>,
    unitary_path: Option<&PathBuf>,
) -> Result<BoundaryRatio> {
    let channel = sector_channel(config, m);
    match (theta, unitary_path) {
        (Some(theta), None) => Ok(boundary_ratio(&channel, theta)?),
        (None, Some(path)) => {
            let report = deficiency_indices(config);
            let d = report.n_plus;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
                .context("unitary file must be a flat row-major array of [re, im] pairs")?;
            if pairs.len() != d * d {
                bail!("unitary file has {} entries, expected {} for d = {d}", pairs.len(), d * d);
            }
            let matrix =
                DMatrix::from_fn(d, d, |i, j| {
                    let [re, im] = pairs[i * d + j];
                    Complex64::new(re, im)
                });
            let ext = make_extension(config, &report, matrix)?;
            let ratios = ext.diagonal_ratios.ok_or_else(|| {
                anyhow!("the unitary is not diagonal; sector-mixing extensions have no per-sector spectrum")
            })?;
            let idx = ext
                .sector_order
                .iter()
                .position(|&mm| mm == m)
                .ok_or_else(|| anyhow!("sector {m} not in Gamma {:?}", ext.sector_order))?;
            Ok(ratios[idx])
        }
        _ => bail!("provide exactly one of <theta> or --unitary FILE"),
    }
}

fn cmd_spectrum(file_cfg: &FileConfig, args: SpectrumArgs) -> Result<ExitCode> {
    let tol = file_cfg.resolve(args.tol, "tol", 1e-11)?;
    let config = FluxConfig::new(args.kappa, args.alpha)?;
    let gamma: Vec<i64> = contributing_sectors(&config).iter().map(|c| c.m).collect();
    if !gamma.contains(&args.m) {
        bail!(
            "sector m = {} is not a contributing sector at kappa = {}, alpha = {}; Gamma = {gamma:?}",
            args.m, config.kappa, config.alpha
        );
    }
    let channel = sector_channel(&config, args.m);
    let lambda = spectrum_boundary_ratio(&config, args.m, args.theta, args.unitary.as_ref())?;
    let states = bound_states_closed_form(&channel, &lambda)?;

    println!(
        "# sector m = {}: nu^2 = {}, lambda = {lambda}, {} closed-form state(s)",
        args.m,
        channel.nu_squared,
        states.len().min(args.max_count)
    );
    if args.shooting {
        println!("idx,mu,energy,shooting_energy,rel_deviation");
    } else {
        println!("idx,mu,energy");
    }
    for (idx, state) in states.iter().take(args.max_count).enumerate() {
        if args.shooting {
            let wall = 25.0 / state.mu;
            let shot = shooting_eigenvalues(&channel, &lambda, wall, 4, tol)?;
            let nearest: Option<&BoundState> = shot.iter().min_by(|a, b| {
                (a.mu - state.mu)
                    .abs()
                    .partial_cmp(&(b.mu - state.mu).abs())
                    .unwrap()
            });
            match nearest {
                Some(s) => {
                    let dev = ((s.energy - state.energy) / state.energy).abs();
                    println!("{idx},{},{},{},{:e}", state.mu, state.energy, s.energy, dev);
                }
                None => println!("{idx},{},{},not-found,", state.mu, state.energy),
            }
        } else {
            println!("{idx},{},{}", state.mu, state.energy);
        }
    }
    if states.is_empty() {
        let shot = shooting_eigenvalues(&channel, &lambda, args.wall, args.max_count, tol)?;
        println!("# no closed-form states; shooting oracle found {}", shot.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(file_cfg: &FileConfig, args: VerifyArgs) -> Result<ExitCode> {
    let opts = verify::VerifyOptions {
        seed: file_cfg.resolve(args.seed, "seed", 42)?,
        cases: file_cfg.resolve(args.cases, "cases", 10_000)?,
        tolerance: file_cfg.resolve(args.tol, "tol", 1e-10)?,
        inject_index_fault: args.inject_index_fault,
    };
    let stdout = std::io::stdout();
    let ok = verify::run(&opts, &mut stdout.lock())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
