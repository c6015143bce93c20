//! Adjoint calculus relative to A.
//!
//! For T in B_{A^{1/2}}, write T in A's eigenbasis as [[T₁₁, 0], [T₂₁, T₂₂]].
//! The compression M = Σ^{1/2}·T₁₁·Σ^{−1/2} is the matrix of T̃ (and of T_c)
//! in the orthonormal basis of R(A), and Tₐ = M*. Every A-quantity (norm,
//! spectrum, numerical range) reduces to a classical quantity of M.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::semispace::{self, MembershipClass, SemiSpace};

/// An operator T on a semi-Hilbertian space, with its membership class and
/// compression computed eagerly.
#[derive(Debug, Clone)]
pub struct SemiOperator {
    space: Arc<SemiSpace>,
    t: CMatrix,
    cls: MembershipClass,
    m: Option<CMatrix>,
    t_norm: f64,
    tol: f64,
    m_tol: f64,
}

/// One term a·x^r·y^s of a polynomial q(x, y) in T and T♯.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: Complex64,
    pub x_pow: i32,
    pub y_pow: i32,
}

impl Monomial {
    pub fn new(coeff: Complex64, x_pow: i32, y_pow: i32) -> Self {
        Monomial { coeff, x_pow, y_pow }
    }
}

impl SemiOperator {
    pub fn new(space: Arc<SemiSpace>, t: CMatrix) -> Result<Self> {
        linalg::check_finite(&t)?;
        let cls = space.membership(&t)?;
        let m = cls.in_ba_half.then(|| {
            let b = space.to_eigenbasis(&t);
            let r = space.rank();
            space.weight_similarity(&b.view((0, 0), (r, r)).into_owned(), 0.5)
        });
        let t_norm = linalg::norm2(&t);
        let tol = space.cfg().match_radius(space.a_norm(), t_norm);
        let m_tol = space.cfg().set_match * (1.0 + m.as_ref().map_or(0.0, linalg::norm2));
        Ok(SemiOperator { space, t, cls, m, t_norm, tol, m_tol })
    }

    /// Another operator over the same space.
    pub fn sibling(&self, t: CMatrix) -> Result<Self> {
        SemiOperator::new(self.space.clone(), t)
    }

    pub fn space(&self) -> &SemiSpace {
        &self.space
    }
    pub fn space_arc(&self) -> &Arc<SemiSpace> {
        &self.space
    }
    pub fn t(&self) -> &CMatrix {
        &self.t
    }
    pub fn class(&self) -> MembershipClass {
        self.cls
    }
    /// ‖T‖₂ (classical norm).
    pub fn t_norm(&self) -> f64 {
        self.t_norm
    }
    /// Spectrum matching radius for this operator.
    pub fn tol(&self) -> f64 {
        self.tol
    }
    /// Radius for residual decisions made on the compression (singularity of
    /// M − λ, A-invertibility): set_match·(1 + ‖M‖₂).
    pub fn m_tol(&self) -> f64 {
        self.m_tol
    }

    pub(crate) fn require_ba_half(&self) -> Result<()> {
        if self.cls.in_ba_half {
            Ok(())
        } else {
            Err(Error::Class("B_{A^{1/2}}(H)"))
        }
    }

    pub(crate) fn require_ba(&self) -> Result<()> {
        if self.cls.in_ba {
            Ok(())
        } else {
            Err(Error::Class("B_A(H)"))
        }
    }

    /// The r×r compression M (matrix of T̃ and T_c; Tₐ = M*).
    pub fn compress(&self) -> Result<&CMatrix> {
        self.m.as_ref().ok_or(Error::Class("B_{A^{1/2}}(H)"))
    }

    /// T♯ = A†T*A.
    pub fn sharp(&self) -> Result<CMatrix> {
        self.require_ba()?;
        let sp = &self.space;
        Ok(sp.a_dag() * self.t.adjoint() * sp.a())
    }

    /// T◇ = (A^{1/2})†T*A^{1/2}, the reduced solution of A^{1/2}X = T*A^{1/2}.
    pub fn diamond(&self) -> Result<CMatrix> {
        self.require_ba_half()?;
        let sp = &self.space;
        Ok(sp.a_half_dag() * self.t.adjoint() * sp.a_half())
    }

    /// ‖T‖_A = ‖A^{1/2}T(A^{1/2})†‖ = ‖M‖₂.
    pub fn a_norm(&self) -> Result<f64> {
        Ok(linalg::norm2(self.compress()?))
    }

    /// (T♯)♯, which equals PTP.
    pub fn double_sharp(&self) -> Result<CMatrix> {
        self.sibling(self.sharp()?)?.sharp()
    }

    /// T_c as an n×n matrix: A^{1/2}T(A^{1/2})†.
    pub fn t_c_full(&self) -> Result<CMatrix> {
        self.require_ba_half()?;
        let sp = &self.space;
        Ok(sp.a_half() * &self.t * sp.a_half_dag())
    }

    /// Tₐ as an n×n matrix: (A^{1/2})†T*A^{1/2}.
    pub fn t_a_full(&self) -> Result<CMatrix> {
        self.diamond()
    }

    /// a₀·I + Σ a_k·T^{r_k}·(T♯)^{s_k}.
    pub fn poly_in_t_tsharp(&self, q: &[Monomial]) -> Result<CMatrix> {
        self.require_ba()?;
        let ts = self.sharp()?;
        eval_two_variable(&self.t, &ts, q)
    }
}

/// Σ a_k·X^{r_k}·Y^{s_k}, X powers applied before Y powers.
pub fn eval_two_variable(x: &CMatrix, y: &CMatrix, q: &[Monomial]) -> Result<CMatrix> {
    let n = x.nrows();
    let mut out = CMatrix::zeros(n, n);
    for mono in q {
        if mono.x_pow < 0 || mono.y_pow < 0 {
            return Err(Error::NegativeExponent);
        }
        let term = linalg::mat_pow(x, mono.x_pow as u32) * linalg::mat_pow(y, mono.y_pow as u32);
        out += term * mono.coeff;
    }
    Ok(out)
}

/// Convenience: build a space and an operator in one go.
pub fn operator(a: &CMatrix, t: &CMatrix, cfg: linalg::ToleranceConfig) -> Result<SemiOperator> {
    SemiOperator::new(Arc::new(SemiSpace::new(a, cfg)?), t.clone())
}

/// Diamond adjoint computed through the generic reduced-solution route.
pub fn diamond_by_reduced_solution(op: &SemiOperator) -> Result<CMatrix> {
    op.require_ba_half()?;
    let sp = op.space();
    semispace::reduced_solution(sp.a_half(), &(op.t().adjoint() * sp.a_half()), sp.cfg())
}
