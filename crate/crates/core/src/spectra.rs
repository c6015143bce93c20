//! A-spectra, A-inverses, the A-reduced minimum modulus and the A-spectral radius.
//!
//! At finite dimension σ_A(T) = σ_{A_app}(T) = σ_{A_p}(T) = σ(M). The
//! functions here compute each set through its own route (compression
//! eigenvalues, definitional A-inverse failure, eigenvector lifting,
//! residual minimization) so the equalities can be checked rather than assumed.

use num_complex::Complex64;
use serde::Serialize;

use crate::classify;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::opcalc::SemiOperator;
use crate::semispace::SemiSpace;

/// Finite multiset of complex values with the radius used to compare it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSet {
    pub values: Vec<Complex64>,
    pub tol: f64,
}

impl SpectrumSet {
    pub fn new(values: Vec<Complex64>, tol: f64) -> Self {
        SpectrumSet { values, tol }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values sorted by (re, im), with negative zeros normalized.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.values.iter().map(|z| c(z.re + 0.0, z.im + 0.0)).collect();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    pub fn conj(&self) -> SpectrumSet {
        SpectrumSet::new(self.values.iter().map(|z| z.conj()).collect(), self.tol)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SpectrumSet {
        SpectrumSet::new(self.values.iter().map(|&z| f(z)).collect(), self.tol)
    }

    pub fn union(&self, other: &SpectrumSet) -> SpectrumSet {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        SpectrumSet::new(values, self.tol.max(other.tol))
    }

    pub fn min_distance(&self, z: Complex64) -> f64 {
        self.values.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.min_distance(z) <= self.tol
    }

    /// sup over self of the distance to `other` (∞ if `other` is empty and self is not).
    pub fn excess_over(&self, other: &SpectrumSet) -> f64 {
        self.values.iter().map(|&z| other.min_distance(z)).fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &SpectrumSet) -> f64 {
        self.excess_over(other).max(other.excess_over(self))
    }

    pub fn is_subset_of(&self, other: &SpectrumSet) -> bool {
        self.excess_over(other) <= self.tol.max(other.tol)
    }

    /// Multiset equality via greedy nearest-neighbour matching within the
    /// larger of the two radii; ties go to the smallest index.
    pub fn matches(&self, other: &SpectrumSet) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let tol = self.tol.max(other.tol);
        let mut used = vec![false; other.len()];
        for &z in &self.values {
            let mut best: Option<(usize, f64)> = None;
            for (j, &w) in other.values.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = (z - w).norm();
                if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, _)) => used[j] = true,
                None => return false,
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// Eigenvalues of the compression M.
    Compressed,
    /// Candidates from the range-restricted T_c, each confirmed by failure of
    /// the canonical A-inverse of λ − T.
    Definitional,
}

/// σ_A(T).
pub fn a_spectrum(op: &SemiOperator, method: SpectrumMethod) -> Result<SpectrumSet> {
    let m = op.compress()?;
    match method {
        SpectrumMethod::Compressed => Ok(SpectrumSet::new(linalg::eigvals(m), op.tol())),
        SpectrumMethod::Definitional => {
            let q = op.space().range_basis();
            let tc = q.adjoint() * op.t_c_full()? * &q;
            let n = op.space().n();
            let mut confirmed = Vec::new();
            for lambda in linalg::eigvals(&tc) {
                let shifted = op.sibling(linalg::identity(n) * lambda - op.t())?;
                match a_invert(&shifted) {
                    Err(Error::NotAInvertible(_)) => confirmed.push(lambda),
                    Ok(_) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(SpectrumSet::new(confirmed, op.tol()))
        }
    }
}

/// A unit-A-norm vector x ∈ R(A) with A^{1/2}(λ − T)x ≈ 0, lifted from the
/// smallest right singular vector of M − λ.
pub fn lift_eigenvector(op: &SemiOperator, lambda: Complex64) -> Result<CVector> {
    let m = op.compress()?;
    let r = m.nrows();
    let dec = linalg::svd(&(m - linalg::identity(r) * lambda));
    let y = dec.v.column(r - 1).into_owned();
    let sp = op.space();
    let scaled = CVector::from_fn(r, |i, _| y[i] / sp.sigma()[i].sqrt());
    Ok(sp.range_basis() * scaled)
}

/// σ_{A_p}(T): eigenvalues of M whose lifted eigenvectors satisfy the
/// definition (‖x‖_A = 1 and A^{1/2}(λ − T)x ≈ 0).
pub fn a_point_spectrum(op: &SemiOperator) -> Result<SpectrumSet> {
    let m = op.compress()?;
    let sp = op.space();
    let n = sp.n();
    let mut values = Vec::new();
    for lambda in linalg::eigvals(m) {
        let x = lift_eigenvector(op, lambda)?;
        let norm_a = sp.a_seminorm(&x)?;
        let defect = (sp.a_half() * (linalg::identity(n) * lambda - op.t()) * &x).norm();
        if norm_a > 0.0 && defect <= op.m_tol() * norm_a {
            values.push(lambda);
        }
    }
    Ok(SpectrumSet::new(values, op.tol()))
}

/// inf over ‖x‖_A = 1 of ‖(T − λ)x‖_A, i.e. σ_min(M − λ).
pub fn approx_residual(op: &SemiOperator, lambda: Complex64) -> Result<f64> {
    let m = op.compress()?;
    Ok(linalg::sigma_min(&(m - linalg::identity(m.nrows()) * lambda)))
}

/// σ_{A_app}(T): the A-spectrum, cross-checked against the residual both at
/// the returned points and on a coarse grid away from them.
pub fn a_approx_spectrum(op: &SemiOperator) -> Result<SpectrumSet> {
    let spec = a_spectrum(op, SpectrumMethod::Compressed)?;
    for &z in &spec.values {
        let res = approx_residual(op, z)?;
        if res > op.m_tol() {
            return Err(Error::Inconsistent(format!("residual {res:.3e} at spectral point {z}")));
        }
    }
    let radius = 1.0 + linalg::norm2(op.compress()?);
    let k = 7;
    for i in 0..k {
        for j in 0..k {
            let z = c(
                -radius + 2.0 * radius * i as f64 / (k - 1) as f64,
                -radius + 2.0 * radius * j as f64 / (k - 1) as f64,
            );
            if spec.min_distance(z) > 0.1 * radius && approx_residual(op, z)? <= op.m_tol() {
                return Err(Error::Inconsistent(format!("grid point {z} has vanishing residual")));
            }
        }
    }
    Ok(spec)
}

/// Zeros of λ ↦ σ_min(M − λ) found by two-sided Rayleigh-quotient iteration
/// started from a `k`×`k` grid covering the disc of radius ‖M‖. Only
/// converged points (residual ≤ m_tol) are returned, deduplicated.
pub fn approx_spectrum_search(op: &SemiOperator, k: usize) -> Result<SpectrumSet> {
    let m = op.compress()?.clone();
    let r = m.nrows();
    let radius = linalg::norm2(&m).max(1e-300);
    let tol = op.m_tol();
    let k = k.max(2);
    let starts: Vec<Complex64> = (0..k * k)
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            c(radius * (-1.0 + 2.0 * i as f64 / (k - 1) as f64), radius * (-1.0 + 2.0 * j as f64 / (k - 1) as f64))
        })
        .collect();
    let mut found: Vec<Complex64> = Vec::new();
    let accept = |z: Complex64, found: &mut Vec<Complex64>| -> Result<()> {
        if approx_residual(op, z)? <= tol && found.iter().all(|w| (w - z).norm() > 1e-9 * radius) {
            found.push(z);
        }
        Ok(())
    };
    for &z0 in &starts {
        let z = descend_sigma_min(&m, z0, radius);
        accept(z, &mut found)?;
    }
    // small basins can hold no grid start; deflate what was found and retry
    for &z0 in &starts {
        if found.len() >= r {
            break;
        }
        if let Some(z) = deflated_newton(&m, z0, &found, radius) {
            let z = descend_sigma_min(&m, z, radius);
            accept(z, &mut found)?;
        }
    }
    Ok(SpectrumSet::new(found, op.tol()))
}

/// Newton-type descent of σ_min(M − z).
fn descend_sigma_min(m: &CMatrix, mut z: Complex64, radius: f64) -> Complex64 {
    let r = m.nrows();
    let eps = 4.0 * f64::EPSILON * radius;
    for _ in 0..100 {
        let dec = linalg::svd(&(m - linalg::identity(r) * z));
        let s = dec.s[r - 1];
        if s <= eps {
            break;
        }
        let u = dec.u.column(r - 1);
        let v = dec.v.column(r - 1);
        let uv = u.dotc(&v);
        let step = if uv.norm() > 1e-12 { c(s, 0.0) / uv } else { c(s, 0.0) };
        let step = if step.norm() > radius { step * (radius / step.norm()) } else { step };
        z += step;
        if step.norm() <= eps {
            break;
        }
    }
    z
}

/// Newton on det(z − M)/Π(z − λₖ) over the points already found.
fn deflated_newton(m: &CMatrix, mut z: Complex64, found: &[Complex64], radius: f64) -> Option<Complex64> {
    let r = m.nrows();
    for _ in 0..100 {
        let resolvent = (linalg::identity(r) * z - m).try_inverse()?;
        let mut g = resolvent.trace();
        for &w in found {
            g -= c(1.0, 0.0) / (z - w);
        }
        if !g.is_finite() || g.norm() == 0.0 {
            return None;
        }
        let step = c(1.0, 0.0) / g;
        z -= step;
        if !z.is_finite() || z.norm() > 4.0 * radius {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * radius {
            break;
        }
    }
    Some(z)
}

/// λ ∈ σ_{A_p}(T) for arbitrary T: N(A^{1/2}(λ − T)) ⊄ N(A).
pub fn point_membership_general(sp: &SemiSpace, t: &CMatrix, lambda: Complex64) -> Result<bool> {
    let n = sp.n();
    if t.shape() != (n, n) {
        return Err(Error::Dimension(format!("T must be {n}x{n}")));
    }
    let cfg = sp.cfg();
    let k = sp.a_half() * (linalg::identity(n) * lambda - t);
    let scale = sp.a_norm().sqrt() * (lambda.norm() + linalg::norm2(t)) + f64::MIN_POSITIVE;
    let k = k.unscale(scale);
    let a = sp.a().unscale(sp.a_norm());
    let nullity_k = linalg::null_space(&k, cfg.rank_rel).ncols();
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&k);
    stacked.view_mut((n, 0), (n, n)).copy_from(&a);
    let nullity_both = linalg::null_space(&stacked, cfg.rank_rel).ncols();
    Ok(nullity_k > nullity_both)
}

/// Canonical A-inverse (vanishing on N(A)) and its A-norm.
#[derive(Debug, Clone)]
pub struct AInverseResult {
    pub s: CMatrix,
    pub a_norm_s: f64,
}

/// max(‖ATS − A‖, ‖AST − A‖) / (1 + ‖A‖‖T‖‖S‖).
pub fn a_inverse_residual(sp: &SemiSpace, t: &CMatrix, s: &CMatrix) -> f64 {
    let a = sp.a();
    let r1 = linalg::norm2(&(a * t * s - a));
    let r2 = linalg::norm2(&(a * s * t - a));
    r1.max(r2) / (1.0 + sp.a_norm() * linalg::norm2(t) * linalg::norm2(s))
}

pub fn a_invert(op: &SemiOperator) -> Result<AInverseResult> {
    let m = op.compress()?;
    let smin = linalg::sigma_min(m);
    if smin <= op.m_tol() {
        return Err(Error::NotAInvertible(smin));
    }
    let m_inv = m.clone().try_inverse().ok_or(Error::NotAInvertible(smin))?;
    let sp = op.space();
    let s = sp.embed(&m_inv)?;
    // PTS = PST = P
    let p = sp.projector();
    let scale = 1.0 + linalg::norm2(op.t()) * linalg::norm2(&s);
    let d1 = linalg::norm2(&(p * op.t() * &s - p));
    let d2 = linalg::norm2(&(p * &s * op.t() - p));
    if d1.max(d2) > 1e-6 * scale {
        return Err(Error::Inconsistent(format!("canonical A-inverse defect {:.3e}", d1.max(d2))));
    }
    Ok(AInverseResult { s, a_norm_s: linalg::norm2(&m_inv) })
}

/// Smallest singular value above the relative rank cutoff (0 for the zero matrix).
pub fn reduced_min_modulus(x: &CMatrix, rank_rel: f64) -> f64 {
    let s = linalg::singular_values(x);
    let Some(&smax) = s.first() else { return 0.0 };
    if smax == 0.0 {
        return 0.0;
    }
    s.iter().rev().copied().find(|&v| v > rank_rel * smax).unwrap_or(0.0)
}

/// γ_A(T) = γ(T◇).
pub fn gamma_a(op: &SemiOperator) -> Result<f64> {
    op.require_ba()?;
    Ok(reduced_min_modulus(&op.diamond()?, op.space().cfg().rank_rel))
}

/// γ_A(T) from its definition: the infimum of ‖Tξ‖_A over unit ξ that are
/// A-orthogonal to N(A^{1/2}T). In range coordinates this is the smallest
/// nonzero singular value of M.
pub fn gamma_a_definitional(op: &SemiOperator) -> Result<f64> {
    op.require_ba()?;
    Ok(reduced_min_modulus(op.compress()?, op.space().cfg().rank_rel))
}

/// r_A(T) = max |λ| over σ(M).
pub fn spectral_radius_a(op: &SemiOperator) -> Result<f64> {
    let m = op.compress()?;
    Ok(linalg::eigvals(m).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// (‖T^k‖_A)^{1/k}, computed from the full power T^k.
pub fn power_radius_estimate(op: &SemiOperator, k: u32) -> Result<f64> {
    let tk = linalg::mat_pow(op.t(), k);
    let norm = op.sibling(tk)?.a_norm()?;
    Ok(norm.powf(1.0 / k as f64))
}

/// A function to push through the spectral mapping.
pub enum SpectralFn<'a> {
    /// Coefficients in ascending degree.
    Polynomial(&'a [Complex64]),
    /// Pointwise function applied through the spectral decomposition; needs A-normal T.
    Point(&'a dyn Fn(Complex64) -> Complex64),
}

impl SpectralFn<'_> {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            SpectralFn::Polynomial(coeffs) => linalg::poly_eval_scalar(z, coeffs),
            SpectralFn::Point(f) => f(z),
        }
    }
}

/// G = (A^{1/2})†·f(Tₐ*)·A^{1/2} together with σ_A(G).
pub fn spectral_map(op: &SemiOperator, f: &SpectralFn) -> Result<(CMatrix, SpectrumSet)> {
    let m = op.compress()?;
    let fm = match f {
        SpectralFn::Polynomial(coeffs) => linalg::poly_eval(m, coeffs),
        SpectralFn::Point(func) => {
            let (normal, resid) = classify::is_a_normal(op)?;
            if !normal {
                return Err(Error::NotNormal(resid));
            }
            let r = m.nrows();
            let (q, tri) = nalgebra::Schur::new(m.clone()).unpack();
            let d = CMatrix::from_fn(r, r, |i, j| if i == j { func(tri[(i, i)]) } else { c(0.0, 0.0) });
            &q * d * q.adjoint()
        }
    };
    let g = op.space().embed(&fm)?;
    let gop = op.sibling(g.clone())?;
    let spec = a_spectrum(&gop, SpectrumMethod::Compressed)?;
    Ok((g, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, identity, real_matrix, ToleranceConfig};
    use crate::opcalc::operator;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn rank_one() -> SemiOperator {
        operator(&diag(&[1.0, 0.0]), &real_matrix(&[&[2.0, 0.0], &[1.0, 3.0]]), cfg()).unwrap()
    }
    fn nilpotent() -> SemiOperator {
        operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]), cfg()).unwrap()
    }
    fn sa() -> SemiOperator {
        operator(&diag(&[4.0, 1.0]), &real_matrix(&[&[1.0, 1.0], &[4.0, 2.0]]), cfg()).unwrap()
    }
    fn set(v: &[(f64, f64)]) -> SpectrumSet {
        SpectrumSet::new(v.iter().map(|&(a, b)| c(a, b)).collect(), 1e-9)
    }

    #[test]
    fn a_spectrum_examples_both_methods() {
        let cl = operator(&identity(2), &diag(&[1.0, 2.0]), cfg()).unwrap();
        for method in [SpectrumMethod::Compressed, SpectrumMethod::Definitional] {
            assert!(a_spectrum(&cl, method).unwrap().matches(&set(&[(1.0, 0.0), (2.0, 0.0)])));
            assert!(a_spectrum(&nilpotent(), method).unwrap().matches(&set(&[(0.0, 0.0), (0.0, 0.0)])));
            assert!(a_spectrum(&rank_one(), method).unwrap().matches(&set(&[(2.0, 0.0)])));
        }
    }

    #[test]
    fn point_spectrum_examples() {
        assert!(a_point_spectrum(&rank_one()).unwrap().matches(&set(&[(2.0, 0.0)])));
        let s17 = 17f64.sqrt();
        let expect = set(&[((3.0 + s17) / 2.0, 0.0), ((3.0 - s17) / 2.0, 0.0)]);
        assert!(a_point_spectrum(&sa()).unwrap().matches(&expect));
        let cl = operator(&identity(2), &diag(&[-1.0, 5.0]), cfg()).unwrap();
        assert!(a_point_spectrum(&cl).unwrap().matches(&set(&[(-1.0, 0.0), (5.0, 0.0)])));
    }

    #[test]
    fn approx_residual_examples() {
        let cl = operator(&identity(2), &diag(&[1.0, 2.0]), cfg()).unwrap();
        assert!(approx_residual(&cl, c(1.0, 0.0)).unwrap() < 1e-15);
        // σ_min([[-1,2],[0,-1]]) = sqrt(3 - 2√2)
        let expect = (3.0 - 2.0 * 2f64.sqrt()).sqrt();
        assert!((approx_residual(&nilpotent(), c(1.0, 0.0)).unwrap() - expect).abs() < 1e-14);
        assert!((approx_residual(&rank_one(), c(3.0, 0.0)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn approx_spectrum_matches_a_spectrum() {
        for op in [rank_one(), nilpotent(), sa()] {
            let app = a_approx_spectrum(&op).unwrap();
            assert!(app.matches(&a_spectrum(&op, SpectrumMethod::Compressed).unwrap()));
        }
        let found = approx_spectrum_search(&sa(), 5).unwrap();
        let s17 = 17f64.sqrt();
        assert!(found.hausdorff(&set(&[((3.0 + s17) / 2.0, 0.0), ((3.0 - s17) / 2.0, 0.0)])) < 1e-9);
    }

    #[test]
    fn point_membership_general_examples() {
        let sp = SemiSpace::new(&identity(2), cfg()).unwrap();
        let t = diag(&[1.0, 2.0]);
        assert!(point_membership_general(&sp, &t, c(2.0, 0.0)).unwrap());
        assert!(!point_membership_general(&sp, &t, c(1.5, 0.0)).unwrap());

        let sp = SemiSpace::new(&diag(&[1.0, 0.0]), cfg()).unwrap();
        let nil = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(point_membership_general(&sp, &nil, c(0.0, 0.0)).unwrap());
        let t = real_matrix(&[&[2.0, 0.0], &[1.0, 3.0]]);
        assert!(!point_membership_general(&sp, &t, c(5.0, 0.0)).unwrap());
        // the N(A)-block eigenvalue is invisible
        assert!(!point_membership_general(&sp, &t, c(3.0, 0.0)).unwrap());
        assert!(point_membership_general(&sp, &t, c(2.0, 0.0)).unwrap());
    }

    #[test]
    fn a_invert_examples() {
        let t = real_matrix(&[&[2.0, 1.0], &[1.0, 3.0]]);
        let op = operator(&identity(2), &t, cfg()).unwrap();
        let inv = a_invert(&op).unwrap();
        assert!((&inv.s - t.try_inverse().unwrap()).norm() < 1e-14);

        let op = operator(&diag(&[1.0, 0.0]), &diag(&[2.0, 3.0]), cfg()).unwrap();
        let inv = a_invert(&op).unwrap();
        assert!((&inv.s - diag(&[0.5, 0.0])).norm() < 1e-15);
        assert!(a_inverse_residual(op.space(), op.t(), &inv.s) < 1e-15);

        assert!(matches!(a_invert(&nilpotent()), Err(Error::NotAInvertible(_))));
    }

    #[test]
    fn gamma_examples() {
        let op = operator(&identity(2), &diag(&[3.0, 0.0]), cfg()).unwrap();
        assert!((gamma_a(&op).unwrap() - 3.0).abs() < 1e-14);
        assert!((gamma_a(&rank_one()).unwrap() - 2.0).abs() < 1e-14);
        let zero = operator(&identity(2), &CMatrix::zeros(2, 2), cfg()).unwrap();
        assert_eq!(gamma_a(&zero).unwrap(), 0.0);
    }

    #[test]
    fn spectral_radius_examples() {
        let cl = operator(&identity(2), &diag(&[1.0, 2.0]), cfg()).unwrap();
        assert!((spectral_radius_a(&cl).unwrap() - 2.0).abs() < 1e-14);
        assert!(spectral_radius_a(&nilpotent()).unwrap() < 1e-15);
        assert!((spectral_radius_a(&rank_one()).unwrap() - 2.0).abs() < 1e-14);
        let est = power_radius_estimate(&sa(), 32).unwrap();
        let rho = spectral_radius_a(&sa()).unwrap();
        assert!((est - rho).abs() <= 0.1 * rho);
    }

    #[test]
    fn spectral_map_examples() {
        let op = sa();
        let id = [c(0.0, 0.0), c(1.0, 0.0)];
        let (_, spec) = spectral_map(&op, &SpectralFn::Polynomial(&id)).unwrap();
        assert!(spec.matches(&a_spectrum(&op, SpectrumMethod::Compressed).unwrap()));

        let sq = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let (_, spec) = spectral_map(&op, &SpectralFn::Polynomial(&sq)).unwrap();
        let s17 = 17f64.sqrt();
        let expect = set(&[(((3.0 + s17) / 2.0).powi(2), 0.0), (((3.0 - s17) / 2.0).powi(2), 0.0)]);
        assert!(spec.hausdorff(&expect) < 1e-12);

        let konst = [c(2.0, -1.0)];
        let (_, spec) = spectral_map(&op, &SpectralFn::Polynomial(&konst)).unwrap();
        assert!(spec.matches(&set(&[(2.0, -1.0), (2.0, -1.0)])));

        // pointwise exp on an A-selfadjoint (hence A-normal) operator
        let expf = |z: Complex64| z.exp();
        let (_, spec) = spectral_map(&op, &SpectralFn::Point(&expf)).unwrap();
        let expect = a_spectrum(&op, SpectrumMethod::Compressed).unwrap().map(|z| z.exp());
        assert!(spec.hausdorff(&expect) < 1e-10 * (1.0 + expect.values.iter().map(|z| z.norm()).fold(0.0, f64::max)));

        assert!(matches!(spectral_map(&nilpotent(), &SpectralFn::Point(&expf)), Err(Error::NotNormal(_))));
    }

    #[test]
    fn spectrum_set_matching_respects_multiplicity() {
        let a = set(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let b = set(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        assert!(!a.matches(&b));
        assert!(a.hausdorff(&b) < 1e-15);
        assert!(a.matches(&set(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])));
        assert_eq!(set(&[(0.0, -0.0)]).sorted()[0].im.to_bits(), 0.0f64.to_bits());
    }
}
