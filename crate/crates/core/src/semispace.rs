//! The semi-Hilbertian structure induced by a positive semidefinite weight A.
//!
//! A [`SemiSpace`] caches everything derived from A once: its eigenbasis
//! (range columns first), the positive eigenvalues, A^{1/2}, A†, (A^{1/2})†
//! and the orthogonal projector P onto R(A). At finite dimension
//! R(A) = R(A^{1/2}), so P projects onto both.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ToleranceConfig};

/// Largest admissible condition number of A restricted to its range.
pub const MAX_RANGE_CONDITION: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct SemiSpace {
    n: usize,
    r: usize,
    a: CMatrix,
    /// Unitary eigenbasis; the first `r` columns span R(A).
    u: CMatrix,
    /// Positive eigenvalues, matching the first `r` columns of `u`.
    sigma: Vec<f64>,
    a_half: CMatrix,
    a_dag: CMatrix,
    a_half_dag: CMatrix,
    p: CMatrix,
    a_norm: f64,
    cfg: ToleranceConfig,
}

/// Operator-class membership of T with respect to A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct MembershipClass {
    /// B^A(H): always true at finite dimension.
    pub in_ba_upper: bool,
    /// B_{A^{1/2}}(H).
    pub in_ba_half: bool,
    /// B_A(H).
    pub in_ba: bool,
}

impl SemiSpace {
    /// Validate A and derive the cached structure.
    pub fn new(a: &CMatrix, cfg: ToleranceConfig) -> Result<Self> {
        linalg::check_square(a, "A")?;
        linalg::check_finite(a)?;
        let (vals, vecs) = linalg::herm_eig(a)?;
        let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lo = vals.first().copied().unwrap_or(0.0);
        if lo < -cfg.psd_slack * top {
            return Err(Error::NotPsd(lo));
        }
        let lmax = vals.last().copied().unwrap_or(0.0);
        if lmax <= 0.0 {
            return Err(Error::ZeroOperator);
        }
        // descending positive eigenvalues first, then the null space
        let n = vals.len();
        let mut desc: Vec<usize> = (0..n).collect();
        desc.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
        let pos: Vec<usize> = desc.iter().copied().filter(|&i| vals[i] > cfg.rank_rel * lmax).collect();
        let null: Vec<usize> = desc.iter().copied().filter(|&i| vals[i] <= cfg.rank_rel * lmax).collect();
        let order: Vec<usize> = pos.iter().chain(null.iter()).copied().collect();
        let u = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
        let sigma: Vec<f64> = pos.iter().map(|&i| vals[i]).collect();
        Self::from_eigenbasis(linalg::symmetrize(a), u, sigma, cfg)
    }

    /// Assemble a space from a known eigenbasis whose first `sigma.len()`
    /// columns span R(A).
    pub fn from_eigenbasis(a: CMatrix, u: CMatrix, sigma: Vec<f64>, cfg: ToleranceConfig) -> Result<Self> {
        let n = a.nrows();
        let r = sigma.len();
        if u.shape() != (n, n) || r == 0 || r > n {
            return Err(Error::Dimension("eigenbasis does not match A".into()));
        }
        let smax = sigma.iter().fold(0.0f64, |m, &s| m.max(s));
        let smin = sigma.iter().fold(f64::INFINITY, |m, &s| m.min(s));
        if !(smin > 0.0) {
            return Err(Error::ZeroOperator);
        }
        let cond = smax / smin;
        if cond > MAX_RANGE_CONDITION {
            return Err(Error::IllConditioned(cond));
        }
        let pad =
            |f: &dyn Fn(f64) -> f64| -> Vec<f64> { (0..n).map(|i| if i < r { f(sigma[i]) } else { 0.0 }).collect() };
        let a_half = linalg::conjugate_diag(&u, &pad(&|s| s.sqrt()));
        let a_dag = linalg::conjugate_diag(&u, &pad(&|s| 1.0 / s));
        let a_half_dag = linalg::conjugate_diag(&u, &pad(&|s| 1.0 / s.sqrt()));
        let p = linalg::conjugate_diag(&u, &pad(&|_| 1.0));
        Ok(SemiSpace { n, r, a, u, sigma, a_half, a_dag, a_half_dag, p, a_norm: smax, cfg })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn a(&self) -> &CMatrix {
        &self.a
    }
    pub fn eigenbasis(&self) -> &CMatrix {
        &self.u
    }
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
    pub fn a_half(&self) -> &CMatrix {
        &self.a_half
    }
    pub fn a_dag(&self) -> &CMatrix {
        &self.a_dag
    }
    pub fn a_half_dag(&self) -> &CMatrix {
        &self.a_half_dag
    }
    pub fn projector(&self) -> &CMatrix {
        &self.p
    }
    /// ‖A‖₂.
    pub fn a_norm(&self) -> f64 {
        self.a_norm
    }
    pub fn cfg(&self) -> &ToleranceConfig {
        &self.cfg
    }

    /// Orthonormal basis of R(A) (n×r).
    pub fn range_basis(&self) -> CMatrix {
        self.u.columns(0, self.r).into_owned()
    }

    /// Orthonormal basis of N(A) (n×(n−r)).
    pub fn null_basis(&self) -> CMatrix {
        self.u.columns(self.r, self.n - self.r).into_owned()
    }

    /// Express T in the eigenbasis: U*·T·U.
    pub fn to_eigenbasis(&self, t: &CMatrix) -> CMatrix {
        self.u.adjoint() * t * &self.u
    }

    /// Σ^{1/2}·X·Σ^{−1/2} for an r×r block X.
    pub(crate) fn weight_similarity(&self, x: &CMatrix, power: f64) -> CMatrix {
        let r = self.r;
        CMatrix::from_fn(r, r, |i, j| x[(i, j)] * (self.sigma[i] / self.sigma[j]).powf(power))
    }

    /// Map an r×r compressed operator X back to the n×n operator
    /// U·[[Σ^{−1/2}XΣ^{1/2}, 0], [0, 0]]·U*, which vanishes on N(A) and
    /// compresses to X.
    pub fn embed(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.r, self.r) {
            return Err(Error::Dimension(format!("expected {}x{} block", self.r, self.r)));
        }
        let block = self.weight_similarity(x, -0.5);
        let ur = self.u.columns(0, self.r);
        Ok(&ur * block * ur.adjoint())
    }

    fn check_vec(&self, x: &CVector) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("vector length {} != {}", x.len(), self.n)));
        }
        Ok(())
    }

    /// ⟨x, y⟩_A = ⟨Ax, y⟩ = y*Ax.
    pub fn a_inner(&self, x: &CVector, y: &CVector) -> Result<Complex64> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(y.dotc(&(&self.a * x)))
    }

    /// ‖x‖_A.
    pub fn a_seminorm(&self, x: &CVector) -> Result<f64> {
        Ok(self.a_inner(x, x)?.re.max(0.0).sqrt())
    }

    /// Scale x to unit A-seminorm; vectors (numerically) in N(A) are rejected.
    pub fn a_normalize(&self, x: &CVector) -> Result<CVector> {
        let s = self.a_seminorm(x)?;
        if s <= self.cfg.rank_rel * x.norm() * self.a_norm.sqrt() || s == 0.0 {
            return Err(Error::InvalidArgument("vector lies in N(A) and cannot be A-normalized".into()));
        }
        Ok(x.unscale(s))
    }

    /// Membership of T in B_A / B_{A^{1/2}} / B^A.
    pub fn membership(&self, t: &CMatrix) -> Result<MembershipClass> {
        if t.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!("T must be {}x{}", self.n, self.n)));
        }
        let ts = t.adjoint();
        let in_ba = self.projector_residual_ok(&(&ts * &self.a));
        let in_ba_half = self.projector_residual_ok(&(&ts * &self.a_half));
        Ok(MembershipClass { in_ba_upper: true, in_ba_half, in_ba })
    }

    fn projector_residual_ok(&self, x: &CMatrix) -> bool {
        let resid = x - &self.p * x;
        linalg::norm2(&resid) <= self.cfg.set_match * (1.0 + linalg::norm2(x))
    }
}

/// R(X) ⊂ R(Y), decided by the residual ‖(I − YY†)X‖₂ ≤ set_match·(1 + ‖X‖₂).
pub fn range_included(x: &CMatrix, y: &CMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    if x.nrows() != y.nrows() {
        return Err(Error::Dimension(format!("row counts differ: {} vs {}", x.nrows(), y.nrows())));
    }
    let proj = y * linalg::pinv(y, cfg);
    let resid = x - proj * x;
    Ok(linalg::norm2(&resid) <= cfg.set_match * (1.0 + linalg::norm2(x)))
}

/// The reduced solution D = E1†E2 of E1·X = E2.
pub fn reduced_solution(e1: &CMatrix, e2: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    if !range_included(e2, e1, cfg)? {
        return Err(Error::NoSolution);
    }
    Ok(linalg::pinv(e1, cfg) * e2)
}
