use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use semihilbert::io::{to_json, Mat, ProblemFile};
use semihilbert::propsuite::{self, SuiteOptions};
use semihilbert::{classify, numrange, spectra, tensorprod};
use semihilbert::{operator, Error, Exec, Result, SemiOperator, SpectrumMethod, ToleranceConfig};

const EXIT_VALIDATION: u8 = 2;
const EXIT_CONDITIONING: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "semihilbert",
    version,
    about = "Operator calculus and spectra relative to a positive semidefinite weight"
)]
struct Cli {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Base radius for spectrum matching and residual tests.
    #[arg(long, global = true)]
    tol_set: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank, memberships, A-norm, reduced minimum modulus, radii and classes.
    Info { path: PathBuf },
    /// A-spectrum, A-point spectrum or A-approximate point spectrum.
    Spectrum {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "a")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "compressed")]
        method: Method,
    },
    /// Boundary of the A-numerical range as CSV rows theta,re,im.
    Numrange {
        path: PathBuf,
        #[arg(long, default_value_t = numrange::DEFAULT_ANGLES, value_parser = parse_angles)]
        angles: usize,
        /// Write the CSV here and print a JSON summary on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run registered theorem properties on random instances.
    Verify {
        /// A theorem id, or `all`.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inclusive ambient dimension range lo:hi.
        #[arg(long, default_value = "2:6", value_parser = parse_dims)]
        dims: (usize, usize),
        /// Ill-conditioned weights with tolerances relaxed to 1e-4.
        #[arg(long)]
        stress: bool,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered theorems.
    Theorems,
    /// Spectral inclusions for T₁⊗T₂ on the tensor product space.
    Tensor {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "product")]
        check: TensorKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    A,
    Point,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Compressed,
    Definitional,
}

#[derive(Clone, Copy, ValueEnum)]
enum TensorKind {
    Product,
    Factor,
}

fn parse_angles(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < numrange::MIN_ANGLES {
        return Err(format!("at least {} angles are required", numrange::MIN_ANGLES));
    }
    Ok(n)
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("invalid dimension range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig> {
    let d = ToleranceConfig::default();
    ToleranceConfig::new(cli.tol_rank.unwrap_or(d.rank_rel), cli.tol_set.unwrap_or(d.set_match), d.psd_slack)
}

fn load_op(path: &Path, cfg: ToleranceConfig) -> Result<(ProblemFile, SemiOperator)> {
    let pf = ProblemFile::load(path)?;
    let op = operator(&pf.a.0, pf.require_t()?, cfg)?;
    Ok((pf, op))
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn emit(value: &impl serde::Serialize) -> Result<()> {
    let text = to_json(value)?;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))
}

fn cmd_info(path: &Path, cfg: ToleranceConfig) -> Result<u8> {
    let (pf, op) = load_op(path, cfg)?;
    let sp = op.space();
    let bounded = op.class().in_ba_half;
    let (a_norm, gamma, r_a, w_a) = if bounded {
        (
            Some(op.a_norm()?),
            Some(spectra::gamma_a_definitional(&op)?),
            Some(spectra::spectral_radius_a(&op)?),
            Some(numrange::a_numerical_radius(&op)?),
        )
    } else {
        (None, None, None, None)
    };
    let report = json!({
        "dim": sp.n(),
        "rank": sp.rank(),
        "weight_eigenvalues": sp.sigma(),
        "memberships": op.class(),
        "a_norm": a_norm,
        "gamma_A": gamma,
        "r_A": r_a,
        "w_A": w_a,
        "classification": classify::classify(&op)?,
        "A": pf.a,
        "T": Mat(op.t().clone()),
        "compression": op.compress().ok().map(|m| Mat(m.clone())),
        "sharp": op.sharp().ok().map(Mat),
        "diamond": op.diamond().ok().map(Mat),
    });
    emit(&report)?;
    Ok(0)
}

fn cmd_spectrum(path: &Path, kind: Kind, method: Method, cfg: ToleranceConfig) -> Result<u8> {
    let (_, op) = load_op(path, cfg)?;
    let (set, kind_name) = match kind {
        Kind::A => {
            let m = match method {
                Method::Compressed => SpectrumMethod::Compressed,
                Method::Definitional => SpectrumMethod::Definitional,
            };
            (spectra::a_spectrum(&op, m)?, "a")
        }
        Kind::Point => (spectra::a_point_spectrum(&op)?, "point"),
        Kind::Approx => (spectra::a_approx_spectrum(&op)?, "approx"),
    };
    let method_name = match method {
        Method::Compressed => "compressed",
        Method::Definitional => "definitional",
    };
    emit(&json!({
        "kind": kind_name,
        "method": method_name,
        "match_tolerance": set.tol,
        "spectrum": pairs(&set.sorted()),
    }))?;
    Ok(0)
}

fn cmd_numrange(path: &Path, angles: usize, out: Option<&Path>, cfg: ToleranceConfig) -> Result<u8> {
    let (_, op) = load_op(path, cfg)?;
    let res = numrange::numrange(&op, angles, Exec::default())?;
    let mut csv = String::from("theta,re,im\n");
    for (theta, z) in res.thetas.iter().zip(&res.boundary) {
        csv.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", theta, z.re, z.im));
    }
    match out {
        Some(p) => {
            std::fs::write(p, csv).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            emit(&json!({
                "angles": angles,
                "w_A": numrange::a_numerical_radius(&op)?,
                "sampled_radius": res.radius,
                "hull_vertices": res.hull.vertices.len(),
                "csv": p.display().to_string(),
            }))?;
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: &str,
    trials: usize,
    seed: u64,
    dims: (usize, usize),
    stress: bool,
    sequential: bool,
    out: Option<&Path>,
    cfg: ToleranceConfig,
) -> Result<u8> {
    let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
    let mut opts = SuiteOptions { trials, seed, dims, exec, cfg, ..Default::default() };
    if stress {
        opts = opts.stress();
    }
    let (report, failures): (Value, usize) = if theorem == "all" {
        let reports = propsuite::check_all(&opts)?;
        let failures = reports.iter().map(|r| r.failures).sum();
        (serde_json::to_value(&reports).map_err(|e| Error::Parse(e.to_string()))?, failures)
    } else {
        let r = propsuite::check_theorem(theorem, &opts)?;
        let failures = r.failures;
        (serde_json::to_value(&r).map_err(|e| Error::Parse(e.to_string()))?, failures)
    };
    let text = to_json(&report)?;
    if let Some(p) = out {
        std::fs::write(p, &text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(if failures == 0 { 0 } else { EXIT_VIOLATION })
}

fn cmd_tensor(path: &Path, check: TensorKind, cfg: ToleranceConfig) -> Result<u8> {
    let pf = ProblemFile::load(path)?;
    let t2 = pf.t2.as_ref().ok_or_else(|| Error::InvalidArgument("tensor problems need T2".into()))?;
    let op1 = operator(&pf.a.0, pf.require_t()?, cfg)?;
    let a2 = pf.a2.as_ref().unwrap_or(&pf.a);
    let op2 = operator(&a2.0, &t2.0, cfg)?;
    let ti = tensorprod::tensor_instance(&op1, &op2)?;
    let (name, checks) = match check {
        TensorKind::Product => ("product", vec![tensorprod::check_product_inclusion(&ti)?]),
        TensorKind::Factor => ("factor", tensorprod::check_factor_inclusions(&ti)?),
    };
    let passed = checks.iter().all(|c| c.passed);
    emit(&json!({
        "check": name,
        "passed": passed,
        "results": checks,
        "spectrum_1": pairs(&spectra::a_approx_spectrum(&op1)?.sorted()),
        "spectrum_2": pairs(&spectra::a_approx_spectrum(&op2)?.sorted()),
        "spectrum_product": pairs(&spectra::a_approx_spectrum(&ti.op_k)?.sorted()),
    }))?;
    Ok(if passed { 0 } else { EXIT_VIOLATION })
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = tolerances(cli)?;
    match &cli.cmd {
        Cmd::Info { path } => cmd_info(path, cfg),
        Cmd::Spectrum { path, kind, method } => cmd_spectrum(path, *kind, *method, cfg),
        Cmd::Numrange { path, angles, out } => cmd_numrange(path, *angles, out.as_deref(), cfg),
        Cmd::Verify { theorem, trials, seed, dims, stress, sequential, out } => {
            cmd_verify(theorem, *trials, *seed, *dims, *stress, *sequential, out.as_deref(), cfg)
        }
        Cmd::Theorems => {
            emit(&propsuite::list_theorems())?;
            Ok(0)
        }
        Cmd::Tensor { path, check } => cmd_tensor(path, *check, cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_conditioning() { EXIT_CONDITIONING } else { EXIT_VALIDATION })
        }
    }
}
