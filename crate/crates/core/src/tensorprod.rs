//! Tensor products of semi-Hilbertian operators, realized with Kronecker products.
//!
//! The eigenbasis of A₁⊗A₂ is taken as kron(U₁, U₂) with the columns
//! reordered so that the range columns (i < r₁, j < r₂) come first in
//! lexicographic order. With that convention compress(T₁⊗T₂) is exactly
//! kron(M₁, M₂).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::opcalc::SemiOperator;
use crate::semispace::SemiSpace;
use crate::spectra::{self, SpectrumMethod, SpectrumSet};

pub use crate::linalg::kron;

/// Two factors and their tensor product over A₁⊗A₂.
#[derive(Debug, Clone)]
pub struct TensorInstance {
    pub op1: SemiOperator,
    pub op2: SemiOperator,
    pub sp_k: Arc<SemiSpace>,
    /// T₁⊗T₂.
    pub op_k: SemiOperator,
    /// T₁⊗I.
    pub op_left: SemiOperator,
    /// I⊗T₂.
    pub op_right: SemiOperator,
}

/// SemiSpace for A₁⊗A₂ built from the factor eigenbases.
pub fn kron_space(sp1: &SemiSpace, sp2: &SemiSpace) -> Result<SemiSpace> {
    let (n1, n2) = (sp1.n(), sp2.n());
    let (r1, r2) = (sp1.rank(), sp2.rank());
    let u = kron(sp1.eigenbasis(), sp2.eigenbasis());
    let mut order = Vec::with_capacity(n1 * n2);
    let mut sigma = Vec::with_capacity(r1 * r2);
    for i in 0..r1 {
        for j in 0..r2 {
            order.push(i * n2 + j);
            sigma.push(sp1.sigma()[i] * sp2.sigma()[j]);
        }
    }
    for i in 0..n1 {
        for j in 0..n2 {
            if i >= r1 || j >= r2 {
                order.push(i * n2 + j);
            }
        }
    }
    let u = CMatrix::from_fn(n1 * n2, n1 * n2, |i, j| u[(i, order[j])]);
    let cfg = *sp1.cfg();
    SemiSpace::from_eigenbasis(kron(sp1.a(), sp2.a()), u, sigma, cfg)
}

pub fn tensor_instance(op1: &SemiOperator, op2: &SemiOperator) -> Result<TensorInstance> {
    op1.require_ba_half()?;
    op2.require_ba_half()?;
    let sp_k = Arc::new(kron_space(op1.space(), op2.space())?);
    let op_k = SemiOperator::new(sp_k.clone(), kron(op1.t(), op2.t()))?;
    op_k.require_ba_half()?;
    let op_left = SemiOperator::new(sp_k.clone(), kron(op1.t(), &linalg::identity(op2.space().n())))?;
    let op_right = SemiOperator::new(sp_k.clone(), kron(&linalg::identity(op1.space().n()), op2.t()))?;
    Ok(TensorInstance { op1: op1.clone(), op2: op2.clone(), sp_k, op_k, op_left, op_right })
}

impl TensorInstance {
    /// Largest of: ‖(A₁⊗A₂)^{1/2} − A₁^{1/2}⊗A₂^{1/2}‖, rank mismatch (as 1.0),
    /// and ‖compress(T₁⊗T₂) − kron(M₁, M₂)‖, each relative to the natural scale.
    pub fn structure_defect(&self) -> Result<f64> {
        let (s1, s2) = (self.op1.space(), self.op2.space());
        let root = kron(s1.a_half(), s2.a_half());
        let d_root = (self.sp_k.a_half() - &root).norm() / (1.0 + root.norm());
        let d_rank = if self.sp_k.rank() == s1.rank() * s2.rank() { 0.0 } else { 1.0 };
        let mk = kron(self.op1.compress()?, self.op2.compress()?);
        let d_comp = (self.op_k.compress()? - &mk).norm() / (1.0 + mk.norm());
        Ok(d_root.max(d_rank).max(d_comp))
    }
}

/// Outcome of a tensor spectral check: the worst excess distance against the
/// matching radius.
#[derive(Debug, Clone, Serialize)]
pub struct TensorCheck {
    pub check: &'static str,
    pub defect: f64,
    pub tol: f64,
    pub passed: bool,
}

impl TensorCheck {
    fn new(check: &'static str, defect: f64, tol: f64) -> Self {
        TensorCheck { check, defect, tol, passed: defect <= tol }
    }
}

/// σ_{A₁app}(T₁)·σ_{A₂app}(T₂) ⊂ σ_{(A₁⊗A₂)app}(T₁⊗T₂).
pub fn check_product_inclusion(ti: &TensorInstance) -> Result<TensorCheck> {
    let s1 = spectra::a_approx_spectrum(&ti.op1)?;
    let s2 = spectra::a_approx_spectrum(&ti.op2)?;
    let sk = spectra::a_approx_spectrum(&ti.op_k)?;
    let products: Vec<_> = s1.values.iter().flat_map(|&a| s2.values.iter().map(move |&b| a * b)).collect();
    let prod = SpectrumSet::new(products, 0.0);
    Ok(TensorCheck::new("product-inclusion", prod.excess_over(&sk), ti.op_k.tol()))
}

/// σ_{A₁⊗A₂}(T₁⊗I) ⊂ σ_{A₁}(T₁) and σ_{A₁⊗A₂}(I⊗T₂) ⊂ σ_{A₂}(T₂); when
/// A₁ = A₂ both approximate-spectrum inclusions are strengthened to equality.
pub fn check_factor_inclusions(ti: &TensorInstance) -> Result<Vec<TensorCheck>> {
    let same_space = ti.op1.space().a() == ti.op2.space().a();
    let mut out = Vec::new();
    for (name_inc, name_eq, factor, lifted) in [
        ("left-factor-inclusion", "left-factor-equality", &ti.op1, &ti.op_left),
        ("right-factor-inclusion", "right-factor-equality", &ti.op2, &ti.op_right),
    ] {
        let tol = lifted.tol().max(factor.tol());
        let lifted_a = spectra::a_spectrum(lifted, SpectrumMethod::Compressed)?;
        let factor_a = spectra::a_spectrum(factor, SpectrumMethod::Compressed)?;
        out.push(TensorCheck::new(name_inc, lifted_a.excess_over(&factor_a), tol));
        if same_space {
            let lifted_app = spectra::a_approx_spectrum(lifted)?;
            let factor_app = spectra::a_approx_spectrum(factor)?;
            out.push(TensorCheck::new(name_eq, lifted_app.hausdorff(&factor_app), tol));
        }
    }
    Ok(out)
}

/// Both factor checks plus the product check; errors if any check fails.
pub fn require_all(checks: &[TensorCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(Error::Inconsistent(format!("{} defect {:.3e} exceeds {:.3e}", c.check, c.defect, c.tol))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, identity, real_matrix, ToleranceConfig};
    use crate::opcalc::operator;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        assert_eq!(kron(&diag(&[1.0, 0.0]), &diag(&[1.0, 0.0])), diag(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(kron(&diag(&[2.0, 5.0]), &diag(&[3.0, 7.0])), diag(&[6.0, 14.0, 15.0, 35.0]));
    }

    #[test]
    fn diagonal_worked_instance() {
        let op1 = operator(&diag(&[1.0, 0.0]), &diag(&[2.0, 5.0]), cfg()).unwrap();
        let op2 = operator(&diag(&[1.0, 0.0]), &diag(&[3.0, 7.0]), cfg()).unwrap();
        let ti = tensor_instance(&op1, &op2).unwrap();
        assert_eq!(ti.sp_k.rank(), 1);
        assert_eq!(ti.op_k.compress().unwrap(), &real_matrix(&[&[6.0]]));
        assert!(ti.structure_defect().unwrap() < 1e-15);
        let p = check_product_inclusion(&ti).unwrap();
        assert!(p.passed && p.defect == 0.0);
        let f = check_factor_inclusions(&ti).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|c| c.passed && c.defect == 0.0));
        let sk = spectra::a_approx_spectrum(&ti.op_left).unwrap();
        assert_eq!(sk.values, vec![c(2.0, 0.0)]);
    }

    #[test]
    fn classical_and_identity_factors() {
        let t1 = real_matrix(&[&[1.0, 2.0], &[0.0, -1.0]]);
        let t2 = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let op1 = operator(&identity(2), &t1, cfg()).unwrap();
        let op2 = operator(&identity(2), &t2, cfg()).unwrap();
        let ti = tensor_instance(&op1, &op2).unwrap();
        require_all(&[check_product_inclusion(&ti).unwrap()]).unwrap();
        require_all(&check_factor_inclusions(&ti).unwrap()).unwrap();

        let a = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let op1 = operator(&a, &t1, cfg()).unwrap();
        let op2 = operator(&a, &identity(2), cfg()).unwrap();
        let ti = tensor_instance(&op1, &op2).unwrap();
        let mk = kron(op1.compress().unwrap(), &identity(2));
        assert!((ti.op_k.compress().unwrap() - mk).norm() < 1e-13);
    }

    #[test]
    fn nilpotent_factor() {
        let op1 = operator(&identity(2), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap();
        let op2 = operator(&diag(&[3.0, 1.0, 0.0]), &diag(&[2.0, -1.0, 4.0]), cfg()).unwrap();
        let ti = tensor_instance(&op1, &op2).unwrap();
        assert!(ti.structure_defect().unwrap() < 1e-14);
        assert!(check_product_inclusion(&ti).unwrap().passed);
        assert!(check_factor_inclusions(&ti).unwrap().iter().all(|c| c.passed));
    }
}
