//! The theorem registry.
//!
//! Each entry pairs a generator with an evaluator. Evaluators return a
//! dimensionless defect compared against the entry's fixed tolerance; for
//! equivalence statements the defect is 0 (verdicts agree) or 1 (they do not).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gen::{self, GenSpec, OpClass};
use super::{Draw, Instance, Outcome};
use crate::classify;
use crate::error::{Error, Result};
use crate::io::Mat;
use crate::linalg::{self, c, CMatrix, ToleranceConfig};
use crate::numrange;
use crate::opcalc::{self, Monomial, SemiOperator};
use crate::par::Exec;
use crate::semispace::{self, SemiSpace};
use crate::spectra::{self, SpectralFn, SpectrumMethod, SpectrumSet};
use crate::tensorprod;

type GenFn = fn(&mut ChaCha8Rng, &Draw, &ToleranceConfig) -> Result<Instance>;
type EvalFn = fn(&Instance, &ToleranceConfig) -> Result<Outcome>;

pub struct Theorem {
    pub id: &'static str,
    pub anchor: &'static str,
    pub generator: &'static str,
    pub tolerance: f64,
    /// Harness self-test entries are runnable by id but never listed.
    pub fixture: bool,
    pub generate: GenFn,
    pub evaluate: EvalFn,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    pub generator: &'static str,
    pub tolerance: f64,
}

pub fn list_theorems() -> Vec<TheoremInfo> {
    REGISTRY
        .iter()
        .filter(|t| !t.fixture)
        .map(|t| TheoremInfo { id: t.id, anchor: t.anchor, generator: t.generator, tolerance: t.tolerance })
        .collect()
}

pub fn find(id: &str) -> Result<&'static Theorem> {
    REGISTRY.iter().find(|t| t.id == id).ok_or_else(|| Error::UnknownTheorem(id.to_string()))
}

const HULL_ANGLES: usize = numrange::DEFAULT_ANGLES;
const SEARCH_GRID: usize = 8;
const RELATIVE: f64 = 1e-7;

macro_rules! theorem {
    ($id:expr, $anchor:expr, $gen_name:expr, $tol:expr, $g:expr, $e:expr) => {
        Theorem {
            id: $id,
            anchor: $anchor,
            generator: $gen_name,
            tolerance: $tol,
            fixture: false,
            generate: $g,
            evaluate: $e,
        }
    };
}

static REGISTRY: &[Theorem] = &[
    theorem!("douglas-reduced-solution", "R(T*A^{1/2}) ⊂ R(A^{1/2}) iff A^{1/2}X = T*A^{1/2} is solvable; the reduced solution lies in R(A) and equals T◇", "generic", 1e-9, g_generic, e_douglas),
    theorem!("sharp-defining-identity", "T*A = A·T♯ and R(T♯) ⊂ R(A) for T♯ = A†T*A", "in_BA", 1e-9, g_in_ba, e_sharp_identity),
    theorem!("double-sharp-PTP", "(T♯)♯ = PTP and ((T♯)♯)♯ = T♯", "in_BA", 1e-9, g_in_ba, e_double_sharp),
    theorem!("product-sharp", "(TW)♯ = W♯T♯ for T, W in B_A", "in_BA", 1e-9, g_pair_in_ba, e_product_sharp),
    theorem!("norm-identities", "‖T‖_A = ‖T♯‖_A = ‖T♯T‖_A^{1/2}", "in_BA", RELATIVE, g_in_ba, e_norm_identities),
    theorem!("poly-norm-identity", "‖q(T, T♯)‖_A = ‖q(Tₐ*, Tₐ)‖ for two-variable polynomials q", "a_normal", 1e-6, g_normal_poly2, e_poly_norm),
    theorem!("gamma-diamond", "γ_A(T) = γ(T◇)", "in_BA", RELATIVE, g_in_ba, e_gamma_diamond),
    theorem!("gamma-sharp", "γ_A(T) = γ_A(T♯)", "in_BA", RELATIVE, g_in_ba, e_gamma_sharp),
    theorem!("gamma-invertible-lower-bound", "γ_A(T) ≥ 1/‖S‖_A > 0 for an A-inverse S of T", "a_invertible", 1e-6, g_invertible, e_gamma_lower),
    theorem!("radius-chain", "r_A(T) ≤ w_A(T) ≤ ‖T‖_A", "in_BA", RELATIVE, g_in_ba, e_radius_chain),
    theorem!("wA-convexity", "W_A(T) is convex", "in_BA", 1e-9, g_in_ba, e_wa_convexity),
    theorem!("app-in-closure-WA", "σ_{A_app}(T) ⊂ closure of W_A(T)", "in_BA", 1.0, g_in_ba, e_app_in_closure),
    theorem!("app-in-sigmaA", "σ_{A_app}(T) ⊂ σ_A(T)", "in_BA", RELATIVE, g_in_ba, e_app_in_sigma),
    theorem!("finite-dim-equality", "σ_A(T) = σ_{A_app}(T) = σ_{A_p}(T) in finite dimension", "in_BA", RELATIVE, g_in_ba, e_finite_dim),
    theorem!("PT-TP-spectra", "σ_{A_app}(T) = σ_{A_app}(PT) = σ_{A_app}(TP)", "in_BA", RELATIVE, g_in_ba, e_pt_tp),
    theorem!("inverse-reciprocal-spectrum", "σ_{A_app}(S) = {1/λ : λ ∈ σ_{A_app}(T)} for an A-inverse S", "a_invertible", RELATIVE, g_invertible, e_inverse_reciprocal),
    theorem!("power-inclusion", "λ ∈ σ_{A_app}(T) implies λⁿ ∈ σ_{A_app}(Tⁿ), n = 2, 3, 4", "in_BA", RELATIVE, g_in_ba, e_power),
    theorem!("conjugate-diamond-spectrum", "σ_A(T◇)* = σ_A(T) and σ_A(T♯)* = σ_A(T)", "in_BA", RELATIVE, g_in_ba, e_conj_diamond),
    theorem!("double-diamond-app", "σ_{A_app}((T◇)◇) = σ_{A_app}(T)", "in_BA", RELATIVE, g_in_ba, e_double_diamond),
    theorem!("boundary-inclusion", "∂σ_A(T) ⊂ σ_{A_app}(T) ∪ σ_{A_app}(T◇)*", "in_BA", RELATIVE, g_in_ba, e_boundary),
    theorem!("nonempty-spectrum", "σ_A(T) is nonempty", "in_BA", 0.5, g_in_ba, e_nonempty),
    theorem!("product-invertibility-commuting-sharps", "for T, T′ with commuting A-adjoints: T and T′ A-invertible iff TT′ A-invertible", "commuting_pair", 0.5, g_commuting_pair, e_product_invertibility),
    theorem!("selfadjoint-iff-real-range", "T is A-selfadjoint iff W_A(T) ⊂ ℝ iff T̃ is selfadjoint", "a_selfadjoint|in_BA", 0.5, g_mixed_selfadjoint, e_selfadjoint_real),
    theorem!("inverse-selfadjoint", "an A-invertible T is A-selfadjoint iff its A-inverse is", "a_selfadjoint|a_invertible", 0.5, g_inverse_selfadjoint, e_inverse_selfadjoint),
    theorem!("normal-iff-Ta-normal", "‖Tx‖_A = ‖T♯x‖_A for all x iff Tₐ is normal iff T◇ is normal", "a_normal|in_BA", 0.5, g_mixed_normal, e_normal_iff),
    theorem!("normal-sigma-equals-Ta-star", "σ_A(T) = σ(Tₐ*) for A-normal T", "a_normal", RELATIVE, g_normal, e_normal_sigma_ta),
    theorem!("normal-app-equals-sigma", "σ_A(T) = σ_{A_app}(T) for A-normal T", "a_normal", RELATIVE, g_normal, e_normal_app),
    theorem!("spectral-mapping-polynomial", "f(σ_A(T)) = σ_A((A^{1/2})†f(Tₐ*)A^{1/2}) for polynomials f", "a_normal", 1e-6, g_normal_poly, e_spectral_map),
    theorem!("Tc-spectrum-inclusion", "σ(T_c) ⊂ σ_A(T)", "in_BA", RELATIVE, g_in_ba, e_tc_inclusion),
    theorem!("normal-hull-equality", "closure of W_A(T) = conv σ_A(T) for A-normal T commuting with A", "commuting_with_A", 1.0, g_commuting, e_normal_hull),
    theorem!("hyponormal-iff-tilde", "T is A-hyponormal iff T̃ is hyponormal (and, in finite dimension, iff A-normal)", "a_normal|in_BA", 0.5, g_mixed_normal, e_hyponormal_iff),
    theorem!("hyponormal-hull-equality", "closure of W_A(T) = conv σ_A(T) for A-hyponormal T", "a_normal", 1.0, g_normal, e_hyponormal_hull),
    theorem!("tensor-product-inclusion", "σ_{A₁app}(T₁)·σ_{A₂app}(T₂) ⊂ σ_{(A₁⊗A₂)app}(T₁⊗T₂)", "in_BA⊗in_BA", RELATIVE, g_tensor_pair, e_tensor_product),
    theorem!("tensor-factor-inclusion", "σ_{A₁⊗A₂}(T₁⊗I) ⊂ σ_{A₁}(T₁) and σ_{A₁⊗A₂}(I⊗T₂) ⊂ σ_{A₂}(T₂)", "in_BA⊗in_BA", RELATIVE, g_tensor_pair, e_tensor_factor),
    theorem!("tensor-factor-equality", "σ_{(A⊗A)app}(T₁⊗I) = σ_{A_app}(T₁)", "in_BA⊗in_BA (shared A)", RELATIVE, g_tensor_same, e_tensor_equality),
    theorem!("dominant-point-spectrum", "λ ∈ W_A(T) with |λ| = ‖T‖_A implies λ ∈ σ_{A_p}(T)", "dominant_eigen", RELATIVE, g_dominant, e_dominant),
    theorem!("rA-equals-norm-commuting", "w_A(T) = ‖T‖_A and TA^{1/2} = A^{1/2}T imply r_A(T) = ‖T‖_A", "commuting_with_A", 1e-6, g_commuting, e_radius_equals_norm),
    Theorem {
        id: "selftest-inverted-radius-chain",
        anchor: "deliberately false: ‖T‖_A ≤ w_A(T)",
        generator: "in_BA",
        tolerance: RELATIVE,
        fixture: true,
        generate: g_in_ba,
        evaluate: e_inverted_chain,
    },
];

// ---------------------------------------------------------------- generators

fn spec_for(rng: &mut ChaCha8Rng, n: usize, r: usize, cond_cap: f64, class: OpClass) -> GenSpec {
    GenSpec { seed: rng.random(), n, r, cond_cap, op_class: class }
}

fn single(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig, class: OpClass) -> Result<Instance> {
    let spec = spec_for(rng, d.n, d.r, d.cond_cap, class);
    let mut srng = spec.rng();
    let sp = gen::gen_space_with(&mut srng, &spec, *cfg)?;
    let t = gen::gen_operator_matrix(&mut srng, &sp, class);
    Ok(Instance::new(sp.a(), t))
}

fn g_generic(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::Generic)
}
fn g_in_ba(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::InBa)
}
fn g_commuting(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::CommutingWithA)
}
fn g_normal(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::ANormal)
}
fn g_invertible(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::AInvertible)
}
fn g_dominant(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    single(rng, d, cfg, OpClass::DominantEigen)
}

/// Even trials draw from `even`, odd trials from `odd`.
fn alternating(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig, even: OpClass, odd: OpClass) -> Result<Instance> {
    single(rng, d, cfg, if d.trial % 2 == 0 { even } else { odd })
}

fn g_mixed_selfadjoint(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    alternating(rng, d, cfg, OpClass::ASelfadjoint, OpClass::InBa)
}
fn g_inverse_selfadjoint(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    alternating(rng, d, cfg, OpClass::ASelfadjoint, OpClass::AInvertible)
}
fn g_mixed_normal(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    alternating(rng, d, cfg, OpClass::ANormal, OpClass::InBa)
}

fn g_pair_in_ba(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let spec = spec_for(rng, d.n, d.r, d.cond_cap, OpClass::InBa);
    let mut srng = spec.rng();
    let sp = gen::gen_space_with(&mut srng, &spec, *cfg)?;
    let t = gen::gen_operator_matrix(&mut srng, &sp, OpClass::InBa);
    let w = gen::gen_operator_matrix(&mut srng, &sp, OpClass::InBa);
    let mut inst = Instance::new(sp.a(), t);
    inst.t_prime = Some(Mat(w));
    Ok(inst)
}

fn random_monomials(rng: &mut ChaCha8Rng) -> Vec<Monomial> {
    let terms = rng.random_range(1..=4);
    (0..terms)
        .map(|_| {
            let deg = rng.random_range(0..=3);
            let x = rng.random_range(0..=deg);
            Monomial::new(gen::gaussian(rng), x, deg - x)
        })
        .collect()
}

fn g_normal_poly2(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let mut inst = single(rng, d, cfg, OpClass::ANormal)?;
    inst.monomials = Some((0..5).map(|_| random_monomials(rng)).collect());
    Ok(inst)
}

fn g_normal_poly(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let mut inst = single(rng, d, cfg, OpClass::ANormal)?;
    let len = rng.random_range(1..=5);
    inst.poly = Some((0..len).map(|_| gen::gaussian(rng)).collect());
    Ok(inst)
}

/// M = VDV⁻¹ and M′ = VD′V⁻¹ share an eigenbasis, so M and M′ commute and
/// so do T♯ and T′♯. A third of the draws zero one eigenvalue of D, a third
/// one of D′.
fn g_commuting_pair(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let spec = spec_for(rng, d.n, d.r, d.cond_cap, OpClass::InBa);
    let mut srng = spec.rng();
    let sp = gen::gen_space_with(&mut srng, &spec, *cfg)?;
    let r = sp.rank();
    let v = gen::gaussian_matrix(&mut srng, r, r);
    let v_inv = v.clone().try_inverse().ok_or(Error::NoSolution)?;
    let draw_diag = |rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        (0..r)
            .map(|_| {
                let z = gen::gaussian(rng);
                z * ((0.5 + rng.random::<f64>()) / z.norm().max(1e-300))
            })
            .collect()
    };
    let mut d1 = draw_diag(&mut srng);
    let mut d2 = draw_diag(&mut srng);
    match srng.random_range(0..3) {
        1 => d1[0] = c(0.0, 0.0),
        2 => d2[r - 1] = c(0.0, 0.0),
        _ => {}
    }
    let mk = |dv: &[Complex64]| {
        let dm = CMatrix::from_fn(r, r, |i, j| if i == j { dv[i] } else { c(0.0, 0.0) });
        &v * dm * &v_inv
    };
    let t = gen::assemble(&mut srng, &sp, &mk(&d1), false);
    let t_prime = gen::assemble(&mut srng, &sp, &mk(&d2), false);
    let mut inst = Instance::new(sp.a(), t);
    inst.t_prime = Some(Mat(t_prime));
    Ok(inst)
}

fn tensor_dims(rng: &mut ChaCha8Rng, d: &Draw) -> (usize, usize) {
    let lo = d.dims.0.clamp(2, 4);
    let hi = d.dims.1.clamp(2, 4).max(lo);
    let n = rng.random_range(lo..=hi);
    (n, rng.random_range(1..=n))
}

fn g_tensor_pair(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let (n1, r1) = tensor_dims(rng, d);
    let (n2, r2) = tensor_dims(rng, d);
    let cond_cap = d.cond_cap.sqrt();
    let d1 = Draw { n: n1, r: r1, cond_cap, ..*d };
    let d2 = Draw { n: n2, r: r2, cond_cap, ..*d };
    let mut inst = single(rng, &d1, cfg, OpClass::InBa)?;
    let second = single(rng, &d2, cfg, OpClass::InBa)?;
    inst.a2 = Some(second.a);
    inst.t2 = Some(second.t);
    Ok(inst)
}

fn g_tensor_same(rng: &mut ChaCha8Rng, d: &Draw, cfg: &ToleranceConfig) -> Result<Instance> {
    let (n, r) = tensor_dims(rng, d);
    let mut inst = g_pair_in_ba(rng, &Draw { n, r, cond_cap: d.cond_cap.sqrt(), ..*d }, cfg)?;
    inst.t2 = inst.t_prime.take();
    Ok(inst)
}

// ------------------------------------------------------------------ helpers

fn mnorm(op: &SemiOperator) -> Result<f64> {
    Ok(linalg::norm2(op.compress()?))
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn agree(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Within a factor 10 of the threshold on either side.
fn near(resid: f64, threshold: f64) -> bool {
    resid > threshold / 10.0 && resid < threshold * 10.0
}

fn vacuous() -> Outcome {
    Outcome { defect: 0.0, near: true }
}

fn sigma(op: &SemiOperator) -> Result<SpectrumSet> {
    spectra::a_spectrum(op, SpectrumMethod::Compressed)
}

/// Restriction of an n×n matrix to R(A) in the orthonormal range basis.
fn on_range(sp: &SemiSpace, x: &CMatrix) -> CMatrix {
    let q = sp.range_basis();
    q.adjoint() * x * &q
}

fn hull_inflation(m_norm: f64) -> f64 {
    1e-6f64.max(2.0 * PI * m_norm / HULL_ANGLES as f64)
}

fn kappa(sp: &SemiSpace) -> f64 {
    sp.sigma()[0] / sp.sigma()[sp.rank() - 1]
}

// --------------------------------------------------------------- evaluators

fn e_douglas(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let sp = SemiSpace::new(&inst.a.0, *cfg)?;
    let t = &inst.t.0;
    let member = sp.membership(t)?.in_ba_half;
    let e1 = sp.a_half();
    let e2 = t.adjoint() * sp.a_half();
    let defect = match (member, semispace::reduced_solution(e1, &e2, cfg)) {
        (true, Ok(d)) => {
            let diamond = sp.a_half_dag() * t.adjoint() * sp.a_half();
            let solves = linalg::norm2(&(e1 * &d - &e2)) / (1.0 + linalg::norm2(&e2));
            let in_range = linalg::norm2(&(&d - sp.projector() * &d)) / (1.0 + linalg::norm2(&d));
            let is_diamond = linalg::norm2(&(&d - diamond)) / (1.0 + linalg::norm2(&d));
            solves.max(in_range).max(is_diamond)
        }
        (false, Err(Error::NoSolution)) => 0.0,
        (_, Err(e)) if e != Error::NoSolution => return Err(e),
        _ => 1.0,
    };
    Ok(Outcome::clear(defect))
}

fn e_sharp_identity(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let sp = op.space();
    let t = op.t();
    let ts = op.sharp()?;
    let d1 = linalg::norm2(&(t.adjoint() * sp.a() - sp.a() * &ts)) / (1.0 + sp.a_norm() * op.t_norm());
    let d2 = linalg::norm2(&(&ts - sp.projector() * &ts)) / (1.0 + linalg::norm2(&ts));
    Ok(Outcome::clear(d1.max(d2)))
}

/// Normalized by κ(A)·‖·‖: forming A†X*A loses up to κ(A) in relative accuracy.
fn e_double_sharp(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let sp = op.space();
    let k = kappa(sp);
    let p = sp.projector();
    let ts = op.sharp()?;
    let tss = op.double_sharp()?;
    let tsss = op.sibling(tss.clone())?.sharp()?;
    let d1 = linalg::norm2(&(&tss - p * op.t() * p)) / (k * (1.0 + op.t_norm()));
    let d2 = linalg::norm2(&(&tsss - &ts)) / (k * (1.0 + linalg::norm2(&ts)));
    Ok(Outcome::clear(d1.max(d2)))
}

fn e_product_sharp(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let w = op.sibling(inst.t_prime()?.clone())?;
    let tw = op.sibling(op.t() * w.t())?.sharp()?;
    let (ts, ws) = (op.sharp()?, w.sharp()?);
    let d = linalg::norm2(&(tw - &ws * &ts)) / (kappa(op.space()) * (1.0 + linalg::norm2(&ts) * linalg::norm2(&ws)));
    Ok(Outcome::clear(d))
}

fn e_norm_identities(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let a = op.a_norm()?;
    let ts = op.sibling(op.sharp()?)?;
    let b = ts.a_norm()?;
    let c2 = op.sibling(ts.t() * op.t())?.a_norm()?.sqrt();
    Ok(Outcome::clear(rel_diff(a, b).max(rel_diff(a, c2))))
}

fn e_poly_norm(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let ts = op.sharp()?;
    let m = op.compress()?;
    let nm = linalg::norm2(m);
    let polys = inst.monomials.as_ref().ok_or_else(|| Error::InvalidArgument("instance has no polynomials".into()))?;
    let mut worst = 0.0f64;
    for q in polys {
        let lhs = op.sibling(opcalc::eval_two_variable(op.t(), &ts, q)?)?.a_norm()?;
        let rhs = linalg::norm2(&opcalc::eval_two_variable(m, &m.adjoint(), q)?);
        let scale = 1.0 + q.iter().map(|t| t.coeff.norm() * nm.powi(t.x_pow + t.y_pow)).sum::<f64>();
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(Outcome::clear(worst))
}

fn gamma_near(op: &SemiOperator) -> Result<bool> {
    let s = linalg::singular_values(op.compress()?);
    let cut = op.space().cfg().rank_rel * s[0];
    Ok(s.iter().any(|&v| near(v, cut)))
}

fn e_gamma_diamond(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let d = rel_diff(spectra::gamma_a(&op)?, spectra::gamma_a_definitional(&op)?);
    Ok(Outcome { defect: d, near: gamma_near(&op)? })
}

fn e_gamma_sharp(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let ts = op.sibling(op.sharp()?)?;
    let d = rel_diff(spectra::gamma_a_definitional(&op)?, spectra::gamma_a_definitional(&ts)?);
    Ok(Outcome { defect: d, near: gamma_near(&op)? })
}

fn e_gamma_lower(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let inv = match spectra::a_invert(&op) {
        Ok(inv) => inv,
        Err(Error::NotAInvertible(_)) => return Ok(vacuous()),
        Err(e) => return Err(e),
    };
    let g = spectra::gamma_a(&op)?;
    let s_norm = op.sibling(inv.s)?.a_norm()?;
    let defect = if g > 0.0 { (1.0 - g * s_norm).max(0.0) } else { 1.0 };
    Ok(Outcome::clear(defect))
}

fn e_radius_chain(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let r = spectra::spectral_radius_a(&op)?;
    let w = numrange::a_numerical_radius(&op)?;
    let n = op.a_norm()?;
    Ok(Outcome::clear((r - w).max(w - n).max(0.0) / (1.0 + n)))
}

fn e_inverted_chain(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let w = numrange::a_numerical_radius(&op)?;
    let n = op.a_norm()?;
    Ok(Outcome::clear((n - w).max(0.0) / (1.0 + n)))
}

fn e_wa_convexity(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let m = op.compress()?;
    let nm = linalg::norm2(m);
    let res = numrange::numrange(&op, HULL_ANGLES, Exec::Sequential)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let r = m.nrows();
    let mut outer = 0.0f64;
    let mut inner = 0.0f64;
    for _ in 0..1000 {
        let y = gen::gaussian_matrix(&mut rng, r, 1).column(0).into_owned();
        let y = y.unscale(y.norm());
        let z = y.dotc(&(m * &y));
        outer = outer.max(res.outer_excess(z));
        inner = inner.max(res.hull.distance(z) - hull_inflation(nm));
    }
    let k = res.boundary.len();
    for _ in 0..200 {
        let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
        let mid = (res.boundary[i] + res.boundary[j]) * 0.5;
        outer = outer.max(res.outer_excess(mid));
        inner = inner.max(res.hull.distance(mid) - hull_inflation(nm));
    }
    let d = outer.max(inner).max(0.0) / (1.0 + nm);
    Ok(Outcome::clear(d.max(agree(res.hull.is_convex()))))
}

fn e_app_in_closure(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let app = spectra::a_approx_spectrum(&op)?;
    let res = numrange::numrange(&op, HULL_ANGLES, Exec::Sequential)?;
    let infl = hull_inflation(mnorm(&op)?);
    let d = app.values.iter().map(|&z| res.hull.distance(z) / infl).fold(0.0, f64::max);
    Ok(Outcome::clear(d))
}

fn e_app_in_sigma(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let found = spectra::approx_spectrum_search(&op, SEARCH_GRID)?;
    let d = found.excess_over(&sigma(&op)?) / (1.0 + mnorm(&op)?);
    Ok(Outcome::clear(d.max(agree(!found.is_empty()))))
}

fn e_finite_dim(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let r = op.space().rank();
    let s = sigma(&op)?;
    let point = spectra::a_point_spectrum(&op)?;
    let app = spectra::approx_spectrum_search(&op, SEARCH_GRID)?;
    let def = spectra::a_spectrum(&op, SpectrumMethod::Definitional)?;
    let h = s.hausdorff(&point).max(s.hausdorff(&app)).max(s.hausdorff(&def));
    let counts = point.len() == r && def.len() == r && s.len() == r;
    Ok(Outcome::clear((h / (1.0 + mnorm(&op)?)).max(agree(counts))))
}

fn e_pt_tp(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let p = op.space().projector();
    let s = spectra::a_approx_spectrum(&op)?;
    let spt = spectra::a_approx_spectrum(&op.sibling(p * op.t())?)?;
    let stp = spectra::a_approx_spectrum(&op.sibling(op.t() * p)?)?;
    Ok(Outcome::clear(s.hausdorff(&spt).max(s.hausdorff(&stp)) / (1.0 + mnorm(&op)?)))
}

fn e_inverse_reciprocal(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let inv = match spectra::a_invert(&op) {
        Ok(inv) => inv,
        Err(Error::NotAInvertible(_)) => return Ok(vacuous()),
        Err(e) => return Err(e),
    };
    let s_app = spectra::a_approx_spectrum(&op.sibling(inv.s)?)?;
    let recip = spectra::a_approx_spectrum(&op)?.map(|z| c(1.0, 0.0) / z);
    Ok(Outcome::clear(s_app.hausdorff(&recip) / (1.0 + inv.a_norm_s)))
}

fn e_power(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let app = spectra::a_approx_spectrum(&op)?;
    let nm = mnorm(&op)?;
    let mut worst = 0.0f64;
    for k in 2..=4u32 {
        let tk = op.sibling(linalg::mat_pow(op.t(), k))?;
        let sk = spectra::a_approx_spectrum(&tk)?;
        for &z in &app.values {
            worst = worst.max(sk.min_distance(z.powu(k)) / (1.0 + nm.powi(k as i32)));
        }
    }
    Ok(Outcome::clear(worst))
}

fn e_conj_diamond(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let s = sigma(&op)?;
    let nm = mnorm(&op)?;
    let mut worst = 0.0f64;
    for adj in [op.diamond()?, op.sharp()?] {
        let other = op.sibling(adj)?;
        let h = sigma(&other)?.conj().hausdorff(&s);
        worst = worst.max(h / (1.0 + nm + mnorm(&other)?));
    }
    Ok(Outcome::clear(worst))
}

fn e_double_diamond(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let dd = op.sibling(op.sibling(op.diamond()?)?.diamond()?)?;
    let h = spectra::a_approx_spectrum(&dd)?.hausdorff(&spectra::a_approx_spectrum(&op)?);
    Ok(Outcome::clear(h / (1.0 + mnorm(&op)?)))
}

fn e_boundary(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let d = op.sibling(op.diamond()?)?;
    let union = spectra::a_approx_spectrum(&op)?.union(&spectra::a_approx_spectrum(&d)?.conj());
    Ok(Outcome::clear(sigma(&op)?.excess_over(&union) / (1.0 + mnorm(&op)?)))
}

fn e_nonempty(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let s = sigma(&op)?;
    let def = spectra::a_spectrum(&op, SpectrumMethod::Definitional)?;
    Ok(Outcome::clear(agree(!s.is_empty() && !def.is_empty() && s.len() == op.space().rank())))
}

fn invertible_near(op: &SemiOperator) -> Result<bool> {
    Ok(near(linalg::sigma_min(op.compress()?), op.m_tol()))
}

fn e_product_invertibility(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let op2 = op.sibling(inst.t_prime()?.clone())?;
    let (s1, s2) = (op.sharp()?, op2.sharp()?);
    let comm =
        linalg::norm2(&(&s1 * &s2 - &s2 * &s1)) / (kappa(op.space()) * (1.0 + linalg::norm2(&s1) * linalg::norm2(&s2)));
    if comm > 1e-9 {
        return Ok(vacuous());
    }
    let prod = op.sibling(op.t() * op2.t())?;
    let i1 = classify::is_a_invertible(&op)?.0;
    let i2 = classify::is_a_invertible(&op2)?.0;
    let i12 = classify::is_a_invertible(&prod)?.0;
    let near = invertible_near(&op)? || invertible_near(&op2)? || invertible_near(&prod)?;
    Ok(Outcome { defect: agree((i1 && i2) == i12), near })
}

fn e_selfadjoint_real(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let thr = cfg.set_match;
    let (sa, r1) = classify::is_a_selfadjoint(&op)?;
    let hr = classify::compression_hermitian_residual(&op)?;
    let herm = hr <= thr;
    let real = match numrange::is_real_range(&op, thr) {
        Ok(b) => b,
        Err(Error::Inconsistent(_)) => !sa,
        Err(e) => return Err(e),
    };
    Ok(Outcome { defect: agree(sa == herm && herm == real), near: near(r1, thr) || near(hr, thr) })
}

fn e_inverse_selfadjoint(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let inv = match classify::is_a_invertible(&op)? {
        (true, Some(inv)) => inv,
        _ => return Ok(vacuous()),
    };
    let thr = cfg.set_match;
    let (sa, r1) = classify::is_a_selfadjoint(&op)?;
    let (ssa, r2) = classify::is_a_selfadjoint(&op.sibling(inv.s)?)?;
    Ok(Outcome { defect: agree(sa == ssa), near: near(r1, thr) || near(r2, thr) || invertible_near(&op)? })
}

fn e_normal_iff(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let thr = cfg.set_match;
    let (v1, r1) = classify::is_a_normal(&op)?;
    let r2 = classify::norm_gap_residual(&op)?;
    let r3 = classify::diamond_normal_residual(&op)?;
    let mut defect = agree(v1 == (r2 <= thr) && v1 == (r3 <= thr));
    if v1 && classify::sampled_norm_gap(&op, 1000, 7)? > 1e-6 {
        defect = 1.0;
    }
    Ok(Outcome { defect, near: near(r1, thr) || near(r2, thr) || near(r3, thr) })
}

fn e_normal_sigma_ta(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let def = spectra::a_spectrum(&op, SpectrumMethod::Definitional)?;
    let ta_star = on_range(op.space(), &op.t_a_full()?.adjoint());
    let classical = SpectrumSet::new(linalg::eigvals(&ta_star), op.tol());
    let h = def.hausdorff(&classical) / (1.0 + mnorm(&op)?);
    Ok(Outcome::clear(h.max(agree(def.len() == classical.len()))))
}

fn e_normal_app(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let app = spectra::approx_spectrum_search(&op, SEARCH_GRID)?;
    Ok(Outcome::clear(sigma(&op)?.hausdorff(&app) / (1.0 + mnorm(&op)?)))
}

fn e_spectral_map(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let poly = inst.poly.as_ref().ok_or_else(|| Error::InvalidArgument("instance has no polynomial".into()))?;
    let (_, mapped) = spectra::spectral_map(&op, &SpectralFn::Polynomial(poly))?;
    let image = sigma(&op)?.map(|z| linalg::poly_eval_scalar(z, poly));
    let scale = 1.0 + linalg::norm2(&linalg::poly_eval(op.compress()?, poly));
    Ok(Outcome::clear((mapped.hausdorff(&image) / scale).max(agree(mapped.len() == image.len()))))
}

fn e_tc_inclusion(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let tc = on_range(op.space(), &op.t_c_full()?);
    let classical = SpectrumSet::new(linalg::eigvals(&tc), op.tol());
    Ok(Outcome::clear(classical.hausdorff(&sigma(&op)?) / (1.0 + mnorm(&op)?)))
}

fn hull_gap(op: &SemiOperator) -> Result<f64> {
    let res = numrange::numrange(op, HULL_ANGLES, Exec::Sequential)?;
    let conv = numrange::conv_hull(&sigma(op)?.values)?;
    Ok(res.hull.hausdorff(&conv) / hull_inflation(mnorm(op)?))
}

fn e_normal_hull(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let sp = op.space();
    let comm = linalg::norm2(&(op.t() * sp.a() - sp.a() * op.t())) / (1.0 + sp.a_norm() * op.t_norm());
    if !classify::is_a_normal(&op)?.0 || comm > cfg.set_match {
        return Ok(vacuous());
    }
    Ok(Outcome::clear(hull_gap(&op)?))
}

fn e_hyponormal_hull(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    if !classify::is_a_hyponormal(&op)?.0 {
        return Ok(vacuous());
    }
    Ok(Outcome::clear(hull_gap(&op)?))
}

fn e_hyponormal_iff(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let thr = cfg.set_match;
    let (v1, r1) = classify::is_a_hyponormal(&op)?;
    let r2 = classify::norm_gap_negativity(&op)?;
    let (v3, r3) = classify::is_a_normal(&op)?;
    Ok(Outcome { defect: agree(v1 == (r2 <= thr) && v1 == v3), near: near(r1, thr) || near(r2, thr) || near(r3, thr) })
}

fn tensor_of(inst: &Instance, cfg: &ToleranceConfig) -> Result<tensorprod::TensorInstance> {
    let op1 = inst.op(cfg)?;
    let op2 = match &inst.a2 {
        Some(a2) => opcalc::operator(&a2.0, inst.t2()?, *cfg)?,
        None => SemiOperator::new(Arc::clone(op1.space_arc()), inst.t2()?.clone())?,
    };
    tensorprod::tensor_instance(&op1, &op2)
}

fn factor_scale(ti: &tensorprod::TensorInstance) -> Result<f64> {
    Ok(1.0 + mnorm(&ti.op1)?.max(mnorm(&ti.op2)?))
}

fn e_tensor_product(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let ti = tensor_of(inst, cfg)?;
    let chk = tensorprod::check_product_inclusion(&ti)?;
    let d = chk.defect / (1.0 + mnorm(&ti.op1)? * mnorm(&ti.op2)?);
    Ok(Outcome::clear(d.max(agree(ti.structure_defect()? <= 1e-9))))
}

fn e_tensor_factor(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let ti = tensor_of(inst, cfg)?;
    let checks = tensorprod::check_factor_inclusions(&ti)?;
    let worst = checks.iter().filter(|c| c.check.ends_with("inclusion")).map(|c| c.defect).fold(0.0, f64::max);
    Ok(Outcome::clear(worst / factor_scale(&ti)?))
}

fn e_tensor_equality(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let ti = tensor_of(inst, cfg)?;
    let checks = tensorprod::check_factor_inclusions(&ti)?;
    let eq: Vec<_> = checks.iter().filter(|c| c.check.ends_with("equality")).collect();
    if eq.is_empty() {
        return Err(Error::InvalidArgument("factor equality needs A₁ = A₂".into()));
    }
    let worst = eq.iter().map(|c| c.defect).fold(0.0, f64::max);
    Ok(Outcome::clear(worst / factor_scale(&ti)?))
}

fn e_dominant(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let nm = op.a_norm()?;
    let s = sigma(&op)?;
    let lambda = s.values.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).ok_or(Error::NoSolution)?;
    if rel_diff(lambda.norm(), nm) > 1e-9 {
        return Ok(vacuous());
    }
    let sp = op.space();
    let in_range = numrange::numrange(&op, HULL_ANGLES, Exec::Sequential)?.outer_excess(lambda).max(0.0) / (1.0 + nm);
    let resid = spectra::approx_residual(&op, lambda)? / (1.0 + nm);
    let x = spectra::lift_eigenvector(&op, lambda)?;
    let xa = sp.a_seminorm(&x)?;
    let n = sp.n();
    let lift = (sp.a_half() * (linalg::identity(n) * lambda - op.t()) * &x).norm() / (xa * (1.0 + nm));
    let member = spectra::point_membership_general(sp, op.t(), lambda)?;
    Ok(Outcome::clear(in_range.max(resid).max(lift).max(agree(member))))
}

fn e_radius_equals_norm(inst: &Instance, cfg: &ToleranceConfig) -> Result<Outcome> {
    let op = inst.op(cfg)?;
    let sp = op.space();
    let comm = linalg::norm2(&(op.t() * sp.a_half() - sp.a_half() * op.t())) / (1.0 + op.t_norm() * sp.a_norm().sqrt());
    let n = op.a_norm()?;
    let w = numrange::a_numerical_radius(&op)?;
    if comm > cfg.set_match || rel_diff(w, n) > 1e-6 {
        return Ok(vacuous());
    }
    Ok(Outcome::clear(rel_diff(spectra::spectral_radius_a(&op)?, n)))
}
