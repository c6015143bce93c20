//! Operator classes relative to A: A-selfadjoint, A-normal, A-hyponormal,
//! A-invertible.
//!
//! Every predicate returns its residual next to the verdict. Thresholds are
//! scale-normalized so the verdicts are invariant under A ↦ cA, T ↦ cT.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::opcalc::SemiOperator;
use crate::spectra::{self, AInverseResult};

/// Residual ‖T*A − AT‖₂/(1 + ‖A‖‖T‖).
pub fn is_a_selfadjoint(op: &SemiOperator) -> Result<(bool, f64)> {
    op.require_ba()?;
    let sp = op.space();
    let t = op.t();
    let d = t.adjoint() * sp.a() - sp.a() * t;
    let resid = linalg::norm2(&d) / (1.0 + sp.a_norm() * op.t_norm());
    Ok((resid <= sp.cfg().set_match, resid))
}

/// ‖M − M*‖₂/(1 + ‖M‖₂): selfadjointness of T̃.
pub fn compression_hermitian_residual(op: &SemiOperator) -> Result<f64> {
    let m = op.compress()?;
    Ok(linalg::norm2(&(m - m.adjoint())) / (1.0 + linalg::norm2(m)))
}

fn commutator(m: &CMatrix) -> CMatrix {
    m.adjoint() * m - m * m.adjoint()
}

/// Residual ‖M*M − MM*‖₂/(1 + ‖M‖₂²): normality of Tₐ = M*.
pub fn is_a_normal(op: &SemiOperator) -> Result<(bool, f64)> {
    op.require_ba()?;
    let m = op.compress()?;
    let nm = linalg::norm2(m);
    let resid = linalg::norm2(&commutator(m)) / (1.0 + nm * nm);
    Ok((resid <= op.space().cfg().set_match, resid))
}

/// Hyponormal iff λ_min(M*M − MM*) ≥ −set_match·(1 + ‖M‖₂²). The residual
/// is the normalized negative part of that eigenvalue.
pub fn is_a_hyponormal(op: &SemiOperator) -> Result<(bool, f64)> {
    op.require_ba()?;
    let m = op.compress()?;
    let nm = linalg::norm2(m);
    let (vals, _) = linalg::herm_eig(&linalg::symmetrize(&commutator(m)))?;
    let lo = vals.first().copied().unwrap_or(0.0);
    let resid = (-lo).max(0.0) / (1.0 + nm * nm);
    Ok((resid <= op.space().cfg().set_match, resid))
}

/// σ_min(M) > tol, with the canonical inverse S₀ as witness. For T in B_A the
/// witness is also checked against T♯: S₀♯ must A-invert T♯.
pub fn is_a_invertible(op: &SemiOperator) -> Result<(bool, Option<AInverseResult>)> {
    op.require_ba_half()?;
    match spectra::a_invert(op) {
        Ok(inv) => {
            if op.class().in_ba {
                let ts = op.sharp()?;
                let ss = op.sibling(inv.s.clone())?.sharp()?;
                let resid = spectra::a_inverse_residual(op.space(), &ts, &ss);
                if resid > 1e-6 {
                    return Err(Error::Inconsistent(format!("S₀♯ fails to A-invert T♯ (residual {resid:.3e})")));
                }
            }
            Ok((true, Some(inv)))
        }
        Err(Error::NotAInvertible(_)) => Ok((false, None)),
        Err(e) => Err(e),
    }
}

/// The Hermitian form F = T*AT − T♯*AT♯, so x*Fx = ‖Tx‖²_A − ‖T♯x‖²_A.
/// A-normal means F = 0 and A-hyponormal means F ≥ 0.
pub fn norm_gap_form(op: &SemiOperator) -> Result<CMatrix> {
    let a = op.space().a();
    let t = op.t();
    let ts = op.sharp()?;
    Ok(linalg::symmetrize(&(t.adjoint() * a * t - ts.adjoint() * a * &ts)))
}

fn norm_gap_scale(op: &SemiOperator) -> Result<f64> {
    let na = op.a_norm()?;
    Ok(op.space().a_norm() * (1.0 + na * na))
}

/// ‖F‖₂/(‖A‖(1 + ‖T‖²_A)) for the form above; |x*Fx| ≤ ‖T‖²_A‖A‖‖x‖².
pub fn norm_gap_residual(op: &SemiOperator) -> Result<f64> {
    let f = norm_gap_form(op)?;
    Ok(linalg::norm2(&f) / norm_gap_scale(op)?)
}

/// Normalized negative part of λ_min(F): zero exactly when
/// ‖Tx‖_A ≥ ‖T♯x‖_A for every x.
pub fn norm_gap_negativity(op: &SemiOperator) -> Result<f64> {
    let (vals, _) = linalg::herm_eig(&norm_gap_form(op)?)?;
    let lo = vals.first().copied().unwrap_or(0.0);
    Ok((-lo).max(0.0) / norm_gap_scale(op)?)
}

/// max over `samples` random x of |‖Tx‖_A − ‖T♯x‖_A| / (‖T‖_A·‖x‖_A), with
/// x drawn from a fixed-seed stream. Vectors with negligible A-seminorm are skipped.
pub fn sampled_norm_gap(op: &SemiOperator, samples: usize, seed: u64) -> Result<f64> {
    let sp = op.space();
    let ts = op.sharp()?;
    let na = op.a_norm()?;
    let n = sp.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = CVector::from_fn(n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let xa = sp.a_seminorm(&x)?;
        if xa <= 1e-8 * x.norm() * sp.a_norm().sqrt() {
            continue;
        }
        let gap = (sp.a_seminorm(&(op.t() * &x))? - sp.a_seminorm(&(&ts * &x))?).abs();
        worst = worst.max(gap / ((1.0 + na) * xa));
    }
    Ok(worst)
}

/// Classical normality residual of T◇ as an n×n matrix.
pub fn diamond_normal_residual(op: &SemiOperator) -> Result<f64> {
    let d = op.diamond()?;
    let nd = linalg::norm2(&d);
    Ok(linalg::norm2(&commutator(&d)) / (1.0 + nd * nd))
}

/// ‖TT♯ − T♯T‖₂/(1 + ‖T‖‖T♯‖): the commuting-sharp variant of A-normality
/// found in part of the literature. Diagnostic only.
pub fn sharp_commutator_residual(op: &SemiOperator) -> Result<f64> {
    let t = op.t();
    let ts = op.sharp()?;
    Ok(linalg::norm2(&(t * &ts - &ts * t)) / (1.0 + op.t_norm() * linalg::norm2(&ts)))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassWitnesses {
    pub a_selfadjoint: Option<f64>,
    pub a_normal: Option<f64>,
    pub a_hyponormal: Option<f64>,
    /// σ_min(M).
    pub a_invertible: f64,
    pub sharp_commutator: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub a_selfadjoint: bool,
    pub a_normal: bool,
    pub a_hyponormal: bool,
    pub a_invertible: bool,
    pub witnesses: ClassWitnesses,
}

/// Full classification. Operators outside B_A have no A-adjoint, so the
/// three adjoint-based classes are reported false with no residual.
pub fn classify(op: &SemiOperator) -> Result<ClassReport> {
    let smin = linalg::sigma_min(op.compress()?);
    let (a_invertible, _) = is_a_invertible(op)?;
    if !op.class().in_ba {
        return Ok(ClassReport {
            a_selfadjoint: false,
            a_normal: false,
            a_hyponormal: false,
            a_invertible,
            witnesses: ClassWitnesses {
                a_selfadjoint: None,
                a_normal: None,
                a_hyponormal: None,
                a_invertible: smin,
                sharp_commutator: None,
            },
        });
    }
    let (sa, sa_r) = is_a_selfadjoint(op)?;
    let (no, no_r) = is_a_normal(op)?;
    let (hy, hy_r) = is_a_hyponormal(op)?;
    Ok(ClassReport {
        a_selfadjoint: sa,
        a_normal: no,
        a_hyponormal: hy,
        a_invertible,
        witnesses: ClassWitnesses {
            a_selfadjoint: Some(sa_r),
            a_normal: Some(no_r),
            a_hyponormal: Some(hy_r),
            a_invertible: smin,
            sharp_commutator: Some(sharp_commutator_residual(op)?),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, identity, real_matrix, ToleranceConfig};
    use crate::opcalc::operator;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn selfadjoint_examples() {
        let a = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(is_a_selfadjoint(&operator(&a, &a, cfg()).unwrap()).unwrap().0);
        let op = operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[1.0, 1.0], &[4.0, 2.0]]), cfg()).unwrap();
        // direct oracle: T*A = [[1,4],[1,2]]·diag(4,1) = [[4,4],[4,2]] = AT
        let (ok, r) = is_a_selfadjoint(&op).unwrap();
        assert!(ok && r < 1e-15);
        assert!(compression_hermitian_residual(&op).unwrap() < 1e-15);
        let op = operator(&identity(2), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        assert!(!is_a_selfadjoint(&op).unwrap().0);
    }

    #[test]
    fn normal_examples() {
        let op = operator(&identity(2), &real_matrix(&[&[0.0, 1.0], &[-1.0, 0.0]]), cfg()).unwrap();
        assert!(is_a_normal(&op).unwrap().0);
        let nil = operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        // M = [[0,2],[0,0]]: M*M − MM* = diag(−4, 4), ‖·‖ = 4, ‖M‖² = 4
        let (ok, r) = is_a_normal(&nil).unwrap();
        assert!(!ok && (r - 0.8).abs() < 1e-14);
        let a = diag(&[3.0, 1.0, 0.0]);
        assert!(is_a_normal(&operator(&a, &a, cfg()).unwrap()).unwrap().0);
    }

    #[test]
    fn hyponormal_examples() {
        let nil = operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        let (ok, r) = is_a_hyponormal(&nil).unwrap();
        assert!(!ok && (r - 0.8).abs() < 1e-14);
        let op = operator(&identity(2), &real_matrix(&[&[0.0, 1.0], &[-1.0, 0.0]]), cfg()).unwrap();
        assert!(is_a_hyponormal(&op).unwrap().0);
        let a = diag(&[3.0, 1.0]);
        assert!(is_a_hyponormal(&operator(&a, &a, cfg()).unwrap()).unwrap().0);
    }

    #[test]
    fn invertible_examples() {
        let op = operator(&identity(2), &identity(2), cfg()).unwrap();
        let (ok, w) = is_a_invertible(&op).unwrap();
        assert!(ok && (w.unwrap().s - identity(2)).norm() < 1e-15);
        let op = operator(&diag(&[1.0, 0.0]), &diag(&[2.0, 3.0]), cfg()).unwrap();
        let (ok, w) = is_a_invertible(&op).unwrap();
        assert!(ok && (w.unwrap().s - diag(&[0.5, 0.0])).norm() < 1e-15);
        let nil = operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        assert!(!is_a_invertible(&nil).unwrap().0);
    }

    #[test]
    fn definitional_forms_agree_with_compression() {
        let nil = operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        assert!(norm_gap_residual(&nil).unwrap() > 0.1);
        assert!(norm_gap_negativity(&nil).unwrap() > 0.1);
        assert!(sampled_norm_gap(&nil, 1000, 1).unwrap() > 0.1);
        assert!(diamond_normal_residual(&nil).unwrap() > 0.1);

        let op = operator(
            &diag(&[4.0, 1.0, 0.0]),
            &real_matrix(&[&[1.0, 0.0, 0.0], &[0.0, -2.0, 0.0], &[1.0, 5.0, 7.0]]),
            cfg(),
        )
        .unwrap();
        assert!(is_a_normal(&op).unwrap().0);
        assert!(norm_gap_residual(&op).unwrap() < 1e-14);
        assert!(norm_gap_negativity(&op).unwrap() < 1e-14);
        assert!(sampled_norm_gap(&op, 1000, 1).unwrap() < 1e-12);
        assert!(diamond_normal_residual(&op).unwrap() < 1e-14);
    }

    #[test]
    fn report_hierarchy_and_outside_ba() {
        let a = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let rep = classify(&operator(&a, &a, cfg()).unwrap()).unwrap();
        assert!(rep.a_selfadjoint && rep.a_normal && rep.a_hyponormal && rep.a_invertible);

        // T in B_{A^{1/2}} \ B_A does not exist at finite dimension: both
        // classes coincide, so a T outside B_A is also outside B_{A^{1/2}}.
        let op = operator(&diag(&[1.0, 0.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        assert!(classify(&op).is_err());
    }
}
