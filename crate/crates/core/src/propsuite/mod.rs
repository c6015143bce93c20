//! Seeded property suite: every registered theorem is run as a pass/fail
//! property over random instances, and failing instances are kept as
//! serializable counterexamples.
//!
//! Each trial draws its own RNG stream from sha256(base_seed, theorem_id,
//! trial, redraw), so reports are identical whether trials run in parallel
//! or not.

pub mod gen;
pub mod registry;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::Mat;
use crate::linalg::{CMatrix, ToleranceConfig};
use crate::opcalc::{self, Monomial, SemiOperator};
use crate::par::Exec;

pub use gen::{GenSpec, OpClass};
pub use registry::{list_theorems, Theorem, TheoremInfo};

/// Redraws allowed when a trial lands near a hypothesis threshold.
pub const MAX_REDRAWS: u32 = 3;
/// Defect recorded for trials whose evaluation errored.
pub const ERROR_DEFECT: f64 = 1e300;

/// A concrete trial input. Everything a theorem needs is stored here, so a
/// serialized instance re-evaluates to the same defect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(rename = "A")]
    pub a: Mat,
    #[serde(rename = "T")]
    pub t: Mat,
    #[serde(rename = "T_prime", default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<Mat>,
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<Mat>,
    #[serde(rename = "T2", default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<Mat>,
    /// Polynomial coefficients in ascending degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<Complex64>>,
    /// Two-variable polynomials q(x, y) as monomial lists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<Vec<Monomial>>>,
}

impl Instance {
    pub fn new(a: &CMatrix, t: CMatrix) -> Self {
        Instance { a: Mat(a.clone()), t: Mat(t), t_prime: None, a2: None, t2: None, poly: None, monomials: None }
    }

    pub fn op(&self, cfg: &ToleranceConfig) -> Result<SemiOperator> {
        opcalc::operator(&self.a.0, &self.t.0, *cfg)
    }

    pub fn t_prime(&self) -> Result<&CMatrix> {
        self.t_prime.as_ref().map(|m| &m.0).ok_or_else(|| Error::InvalidArgument("instance has no T_prime".into()))
    }

    pub fn t2(&self) -> Result<&CMatrix> {
        self.t2.as_ref().map(|m| &m.0).ok_or_else(|| Error::InvalidArgument("instance has no T2".into()))
    }
}

/// Result of evaluating one instance: the normalized defect and whether the
/// instance sits near one of the theorem's hypothesis thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub defect: f64,
    pub near: bool,
}

impl Outcome {
    pub fn clear(defect: f64) -> Self {
        Outcome { defect, near: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub defect: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub instance: Instance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub theorem_id: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    /// Inclusive range for the ambient dimension n.
    pub dims: (usize, usize),
    pub cond_cap: f64,
    pub exec: Exec,
    pub cfg: ToleranceConfig,
    /// Lower bound applied to every theorem tolerance; 0 for the default profile.
    pub tol_floor: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            trials: 200,
            seed: 0,
            dims: (2, 6),
            cond_cap: gen::DEFAULT_COND_CAP,
            exec: Exec::Parallel,
            cfg: ToleranceConfig::default(),
            tol_floor: 0.0,
        }
    }
}

/// Condition cap of the stress profile.
pub const STRESS_COND_CAP: f64 = 1e7;
/// Tolerance floor of the stress profile.
pub const STRESS_TOL_FLOOR: f64 = 1e-4;

impl SuiteOptions {
    /// Ill-conditioned weights with relaxed tolerances. Not part of acceptance.
    pub fn stress(self) -> Self {
        SuiteOptions { cond_cap: STRESS_COND_CAP, tol_floor: STRESS_TOL_FLOOR, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.dims;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidArgument(format!("invalid dimension range {lo}:{hi}")));
        }
        if !(self.cond_cap >= 1.0) || !(self.tol_floor >= 0.0) {
            return Err(Error::InvalidArgument(
                "condition cap must be at least 1 and the tolerance floor non-negative".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        Ok(())
    }
}

/// Dimension and rank drawn for one trial.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub n: usize,
    pub r: usize,
    pub trial: usize,
    pub dims: (usize, usize),
    pub cond_cap: f64,
}

pub fn trial_seed(base_seed: u64, theorem_id: &str, trial: usize, redraw: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(base_seed.to_le_bytes());
    h.update((theorem_id.len() as u64).to_le_bytes());
    h.update(theorem_id.as_bytes());
    h.update((trial as u64).to_le_bytes());
    h.update(redraw.to_le_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

struct TrialResult {
    defect: f64,
    error: Option<String>,
    instance: Option<Instance>,
}

fn run_trial(th: &Theorem, opts: &SuiteOptions, trial: usize) -> TrialResult {
    let mut last = TrialResult { defect: ERROR_DEFECT, error: Some("no draw".into()), instance: None };
    for redraw in 0..=MAX_REDRAWS {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(opts.seed, th.id, trial, redraw));
        let n = rng.random_range(opts.dims.0..=opts.dims.1);
        let r = rng.random_range(1..=n);
        let draw = Draw { n, r, trial, dims: opts.dims, cond_cap: opts.cond_cap };
        let inst = match (th.generate)(&mut rng, &draw, &opts.cfg) {
            Ok(inst) => inst,
            Err(e) => {
                last = TrialResult { defect: ERROR_DEFECT, error: Some(format!("generation: {e}")), instance: None };
                continue;
            }
        };
        match (th.evaluate)(&inst, &opts.cfg) {
            Ok(out) if out.near && redraw < MAX_REDRAWS => {
                last = TrialResult { defect: out.defect, error: None, instance: Some(inst) };
            }
            Ok(out) => return TrialResult { defect: out.defect, error: None, instance: Some(inst) },
            Err(e) => return TrialResult { defect: ERROR_DEFECT, error: Some(e.to_string()), instance: Some(inst) },
        }
    }
    last
}

/// Run one registered property.
pub fn check_theorem(theorem_id: &str, opts: &SuiteOptions) -> Result<PropertyReport> {
    opts.validate()?;
    let th = registry::find(theorem_id)?;
    let tolerance = th.tolerance.max(opts.tol_floor);
    let results = opts.exec.map(opts.trials, |i| run_trial(th, opts, i));
    let mut worst = 0.0f64;
    let mut counterexamples = Vec::new();
    for (trial, res) in results.into_iter().enumerate() {
        let failed = res.error.is_some() || !(res.defect <= tolerance);
        worst = if res.defect.is_nan() { ERROR_DEFECT } else { worst.max(res.defect) };
        if failed {
            let instance = res.instance.unwrap_or_else(|| Instance::new(&CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)));
            counterexamples.push(Counterexample { trial, defect: res.defect, error: res.error, instance });
        }
    }
    Ok(PropertyReport {
        theorem_id: theorem_id.to_string(),
        trials: opts.trials,
        failures: counterexamples.len(),
        worst_residual: worst,
        tolerance,
        counterexamples,
    })
}

/// Every listed (non-fixture) theorem, in registry order.
pub fn check_all(opts: &SuiteOptions) -> Result<Vec<PropertyReport>> {
    list_theorems().iter().map(|t| check_theorem(t.id, opts)).collect()
}

/// Re-evaluate a stored instance against a theorem.
pub fn evaluate_instance(theorem_id: &str, inst: &Instance, cfg: &ToleranceConfig) -> Result<f64> {
    let th = registry::find(theorem_id)?;
    Ok((th.evaluate)(inst, cfg)?.defect)
}
