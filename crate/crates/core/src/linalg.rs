//! Dense complex numeric kernel.
//!
//! Everything downstream is built out of four primitives: a Hermitian
//! eigendecomposition with reproducible ordering and phases, a sorted SVD,
//! the Moore–Penrose pseudoinverse, and the PSD square root. Rank decisions
//! are always relative to the largest singular value.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Asymmetry (relative, Frobenius) above which a "Hermitian" input is rejected.
pub const HERMITIAN_REPAIR_LIMIT: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Build a complex matrix from real rows.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| c(rows[i][j], 0.0))
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { c(0.0, 0.0) })
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Tolerances shared by every rank, membership and matching decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff.
    pub rank_rel: f64,
    /// Base radius for spectrum matching and residual tests.
    pub set_match: f64,
    /// Allowed negative-eigenvalue magnitude for PSD inputs, relative to ‖M‖₂.
    pub psd_slack: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { rank_rel: 1e-10, set_match: 1e-7, psd_slack: 1e-10 }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel: f64, set_match: f64, psd_slack: f64) -> Result<Self> {
        for (name, v) in [("rank_rel", rank_rel), ("set_match", set_match), ("psd_slack", psd_slack)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(ToleranceConfig { rank_rel, set_match, psd_slack })
    }

    /// Matching radius for spectra of T over the weight A.
    pub fn match_radius(&self, a_norm: f64, t_norm: f64) -> f64 {
        self.set_match * (1.0 + a_norm * (1.0 + t_norm))
    }
}

pub fn check_square(m: &CMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("{what} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(m.nrows())
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Singular value decomposition with singular values in descending order.
pub struct SortedSvd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    /// Right singular vectors as columns.
    pub v: CMatrix,
}

pub fn svd(m: &CMatrix) -> SortedSvd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return SortedSvd { u: CMatrix::zeros(rows, 0), s: vec![], v: CMatrix::zeros(cols, 0) };
    }
    let (fu, sv, fv) = thin_svd_any(m);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let s = order.iter().map(|&i| sv[i]).collect();
    let u = CMatrix::from_fn(rows, k, |i, j| fu[(i, order[j])]);
    let v = CMatrix::from_fn(cols, k, |i, j| fv[(i, order[j])]);
    SortedSvd { u, s, v }
}

fn thin_svd_of(m: &CMatrix) -> Option<(CMatrix, Vec<f64>, CMatrix)> {
    let dec = to_faer(m).thin_svd().ok()?;
    let (u, v) = (dec.U(), dec.V());
    let s = dec.S().column_vector().iter().map(|z| z.re).collect();
    Some((
        CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s,
        CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    ))
}

// faer occasionally reports NoConvergence on tightly clustered singular values;
// the adjoint or a row permutation of the same matrix converges.
fn thin_svd_any(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    if let Some(d) = thin_svd_of(m) {
        return d;
    }
    if let Some((u, s, v)) = thin_svd_of(&m.adjoint()) {
        return (v, s, u);
    }
    let rows = m.nrows();
    let flipped = CMatrix::from_fn(rows, m.ncols(), |i, j| m[(rows - 1 - i, j)]);
    if let Some((u, s, v)) = thin_svd_of(&flipped) {
        let u = CMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(rows - 1 - i, j)]);
        return (u, s, v);
    }
    panic!("SVD failed to converge on a {}x{} matrix", m.nrows(), m.ncols())
}

/// Descending singular values.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let mut s = to_faer(m)
        .singular_values()
        .or_else(|_| to_faer(&m.adjoint()).singular_values())
        .unwrap_or_else(|_| jordan_wielandt_singular_values(m));
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Singular values as the nonnegative eigenvalues of [[0, M], [M*, 0]].
fn jordan_wielandt_singular_values(m: &CMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let mut h = CMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(m);
    h.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(r.min(c));
    ev.into_iter().map(|x| x.max(0.0)).collect()
}

fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Spectral norm ‖M‖₂.
pub fn norm2(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn sigma_min(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Number of singular values above `rank_rel·σ_max`.
pub fn rank_of(m: &CMatrix, cfg: &ToleranceConfig) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > cfg.rank_rel * smax).count(),
        _ => 0,
    }
}

/// Relative Frobenius asymmetry ‖M − M*‖ / ‖M‖.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / scale
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Make the largest-magnitude component of each column real and positive.
/// Ties go to the smallest index.
pub fn canonicalize_phases(v: &mut CMatrix) {
    for mut col in v.column_iter_mut() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, z) in col.iter().enumerate() {
            let a = z.norm();
            if a > best_abs * (1.0 + 1e-12) {
                best = i;
                best_abs = a;
            }
        }
        if best_abs > 0.0 {
            let phase = col[best] / best_abs;
            let rot = phase.conj();
            for z in col.iter_mut() {
                *z *= rot;
            }
        }
    }
}

/// Hermitian eigendecomposition: ascending eigenvalues, unitary eigenvectors
/// (as columns) with canonical phases.
pub fn herm_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = check_square(m, "herm_eig input")?;
    check_finite(m)?;
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_REPAIR_LIMIT {
        return Err(Error::NotHermitian(defect));
    }
    if n == 0 {
        return Ok((vec![], CMatrix::zeros(0, 0)));
    }
    let dec = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |i, j| dec.eigenvectors[(i, order[j])]);
    canonicalize_phases(&mut vectors);
    Ok((values, vectors))
}

/// Largest eigenvalue and a unit eigenvector of an exactly Hermitian matrix.
pub(crate) fn herm_top(m: &CMatrix) -> (f64, CVector) {
    let dec = SymmetricEigen::new(m.clone());
    let (mut best, mut val) = (0, f64::NEG_INFINITY);
    for (i, &v) in dec.eigenvalues.iter().enumerate() {
        if v > val {
            best = i;
            val = v;
        }
    }
    (val, dec.eigenvectors.column(best).into_owned())
}

/// Moore–Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pinv(m: &CMatrix, cfg: &ToleranceConfig) -> CMatrix {
    let (rows, cols) = m.shape();
    let dec = svd(m);
    let mut out = CMatrix::zeros(cols, rows);
    let Some(&smax) = dec.s.first() else { return out };
    if smax == 0.0 {
        return out;
    }
    for (k, &s) in dec.s.iter().enumerate() {
        if s > cfg.rank_rel * smax {
            let vk = dec.v.column(k);
            let uk = dec.u.column(k);
            out += (vk * uk.adjoint()).unscale(s);
        }
    }
    out
}

/// Hermitian PSD square root; eigenvalues down to `-psd_slack·‖M‖₂` are clamped to zero.
pub fn sqrt_psd(m: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let (vals, vecs) = herm_eig(m)?;
    let scale = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if let Some(&lo) = vals.first() {
        if lo < -cfg.psd_slack * scale {
            return Err(Error::NotPsd(lo));
        }
    }
    let roots: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok(conjugate_diag(&vecs, &roots))
}

/// V·diag(d)·V*.
pub fn conjugate_diag(v: &CMatrix, d: &[f64]) -> CMatrix {
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col.scale_mut(d[j]);
    }
    scaled * v.adjoint()
}

/// Eigenvalues of a general complex square matrix.
pub fn eigvals(m: &CMatrix) -> Vec<Complex64> {
    match m.nrows() {
        0 => vec![],
        1 => vec![m[(0, 0)]],
        _ => to_faer(m)
            .eigenvalues()
            .or_else(|_| to_faer(&m.transpose()).eigenvalues())
            .expect("eigenvalue iteration converges for finite input"),
    }
}

/// Orthonormal basis (as columns) of the numerical null space, with the
/// cutoff `threshold` applied to absolute singular values.
pub fn null_space(m: &CMatrix, threshold: f64) -> CMatrix {
    let cols = m.ncols();
    if m.nrows() < cols {
        // pad so the thin SVD yields a full right basis
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        return null_space(&padded, threshold);
    }
    let dec = svd(m);
    let keep: Vec<usize> = (0..cols).filter(|&k| dec.s[k] <= threshold).collect();
    CMatrix::from_fn(cols, keep.len(), |i, j| dec.v[(i, keep[j])])
}

/// Kronecker product with row-major block convention.
pub fn kron(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.kronecker(y)
}

/// Horner evaluation of Σ coeffs[k]·Mᵏ.
pub fn poly_eval(m: &CMatrix, coeffs: &[Complex64]) -> CMatrix {
    let n = m.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for &a in coeffs.iter().rev() {
        acc = &acc * m + identity(n) * a;
    }
    acc
}

pub fn poly_eval_scalar(z: Complex64, coeffs: &[Complex64]) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

pub fn mat_pow(m: &CMatrix, k: u32) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).norm() <= tol
    }

    #[test]
    fn svd_survives_clustered_singular_values() {
        // column-major; faer's direct SVD reports NoConvergence here
        let entries: [(f64, f64); 81] = [
            (1.815208972681658, -1.6307074264762913),
            (-8.471871757119223e-18, 0.0),
            (-5.795387298011019e-17, 7.244234122513774e-18),
            (-0.29050527805130133, -0.9187346489337735),
            (3.103057002874472e-17, 0.0),
            (4.8645681607062925e-17, 1.76893387662047e-17),
            (-0.6088897700123836, 0.058680121772822176),
            (8.84466938310235e-18, -5.527918364438969e-18),
            (2.6470537036579958e-17, -2.6470537036579958e-17),
            (1.8186582607498105e-16, -4.546645651874526e-16),
            (1.815208972681658, -1.6307074264762913),
            (-7.713415106128147e-17, -3.560037741289914e-17),
            (-1.1102230246251565e-16, 2.220446049250313e-16),
            (-0.29050527805130133, -0.9187346489337735),
            (2.0283855543038567e-16, 1.5937315069530303e-16),
            (2.848030193031931e-16, 3.560037741289914e-17),
            (-0.6088897700123835, 0.0586801217728222),
            (1.1769531704444957e-16, -8.672286519064706e-17),
            (0.0, -6.380566652538606e-16),
            (-1.7852532131232563e-16, -4.625428779455709e-16),
            (1.8152089726816585, -1.6307074264762909),
            (-3.89509791954165e-16, 7.7901958390833e-16),
            (-1.5852079842868252e-16, 3.0713404695557236e-16),
            (-0.29050527805130144, -0.9187346489337741),
            (4.996003610813204e-16, 3.885780586188048e-16),
            (2.3721240919933825e-16, 1.101343328425499e-16),
            (-0.6088897700123841, 0.05868012177282221),
            (0.10918527779844109, 0.3123555525399253),
            (2.0816681711721685e-17, 6.938893903907228e-18),
            (-7.120075482579828e-17, -9.493433976773104e-17),
            (0.7104708578947809, -1.4199345935558552),
            (-4.2359358785596114e-17, -3.388748702847689e-17),
            (-2.8976936490055096e-17, -2.8976936490055096e-17),
            (-0.15406883033298693, -0.6769462640703511),
            (2.1732702367541322e-17, -1.8110585306284435e-18),
            (4.336143259532353e-17, 1.8583471112281512e-17),
            (1.4895736244121938e-16, 4.468720873236582e-16),
            (0.1091852777984415, 0.31235555253992575),
            (-2.3326815975426103e-16, -1.1663407987713052e-16),
            (2.273322825937263e-16, 3.637316521499621e-16),
            (0.7104708578947807, -1.4199345935558554),
            (-7.120075482579828e-17, -2.1360226447739483e-16),
            (-4.665363195085221e-16, -7.775605325142035e-17),
            (-0.15406883033298702, -0.6769462640703512),
            (2.0294410823847505e-16, 9.132484870731378e-17),
            (-3.4840057638635184e-16, -1.0016516571107615e-15),
            (-5.3171388771155055e-17, -2.6585694385577526e-16),
            (0.10918527779844135, 0.31235555253992575),
            (8.507422203384809e-16, -4.2537111016924044e-16),
            (4.2196894128367876e-16, -2.9213234396562374e-16),
            (0.7104708578947807, -1.4199345935558547),
            (9.093291303749052e-17, 6.819968477811789e-16),
            (-1.942890293094024e-16, 2.3592239273284576e-16),
            (-0.1540688303329869, -0.6769462640703513),
            (-1.0775110746815577, -1.2262360031861164),
            (1.1360702265329814e-16, 6.49182986590275e-17),
            (8.326672684688674e-17, 6.938893903907228e-18),
            (-1.0924588325823628, 0.5938870091449397),
            (0.0, -9.907549901792658e-18),
            (3.388748702847689e-17, -1.1860620459966913e-16),
            (0.73721403119521, -3.0755284281181),
            (1.6943743514238446e-17, 2.541561527135767e-17),
            (2.8976936490055096e-17, 3.622117061256887e-17),
            (-8.710014409658796e-16, -4.355007204829398e-17),
            (-1.0775110746815582, -1.226236003186117),
            (2.0459905433435368e-16, -1.0229952716717684e-16),
            (4.2537111016924044e-16, -4.2537111016924044e-16),
            (-1.0924588325823625, 0.5938870091449395),
            (2.0816681711721685e-16, -3.0531133177191805e-16),
            (-2.7279873911247157e-16, 4.546645651874526e-17),
            (0.73721403119521, -3.0755284281181003),
            (1.7800188706449567e-16, 1.5426830212256292e-16),
            (4.074419674094376e-16, 2.3427913126042662e-15),
            (3.1091015226661616e-17, 7.461843654398787e-16),
            (-1.0775110746815588, -1.2262360031861173),
            (1.4923687308797575e-15, -1.2436406090664646e-16),
            (5.314373391857755e-16, 1.8979904970920553e-16),
            (-1.0924588325823632, 0.5938870091449402),
            (-4.2537111016924044e-16, 1.1697705529654111e-15),
            (-1.6229574664756876e-16, 2.1098447064183938e-16),
            (0.7372140311952096, -3.0755284281181003),
        ];
        let m = CMatrix::from_fn(9, 9, |i, j| {
            let (re, im) = entries[j * 9 + i];
            Complex64::new(re, im)
        });
        let s = singular_values(&m);
        assert_eq!(s.len(), 9);
        assert!((s[0] - 3.9632962373777).abs() < 1e-9 && (s[8] - 1.3677570966499).abs() < 1e-9);
        let d = svd(&m);
        let rebuilt = &d.u
            * CMatrix::from_diagonal(&DVector::from_iterator(9, d.s.iter().map(|&x| Complex64::new(x, 0.0))))
            * d.v.adjoint();
        assert!((rebuilt - &m).norm() < 1e-12);
    }

    #[test]
    fn eigvals_terminates_on_near_scalar_matrix() {
        // column-major; a plain shifted QR iteration stalls on this one
        let entries: [(f64, f64); 25] = [
            (0.8457468462539299, -0.8897912989262555),
            (-5.3480855264944576e-17, -1.3098631348093849e-16),
            (4.6680280607834156e-18, -5.601633672940099e-17),
            (-6.080267898060712e-17, -7.370021694619046e-18),
            (7.311772928439818e-18, -1.3100259830121342e-17),
            (2.852116908748302e-15, 5.76185234090566e-16),
            (0.8457468462539303, -0.8897912989262559),
            (4.360716546419552e-16, -3.488573237135642e-16),
            (-4.589886083618596e-17, -1.3769658250855788e-16),
            (3.03574002912618e-17, 8.253418204186802e-17),
            (1.6503156530417385e-15, -3.300631306083477e-16),
            (5.167357270178936e-16, -9.83785326437913e-16),
            (0.8457468462539304, -0.8897912989262561),
            (-1.3694165379511864e-16, 2.1910664607218983e-16),
            (1.0868747132464799e-17, 1.63031206986972e-16),
            (-1.2543333135380376e-15, 4.207242989158835e-15),
            (3.0211415592815346e-16, 2.0140943728543563e-16),
            (-1.4063872393922314e-16, 2.636976073860434e-16),
            (0.8457468462539287, -0.8897912989262542),
            (2.0652157633517306e-17, -1.3768105089011537e-17),
            (3.792977636286351e-14, -2.0229214060193872e-14),
            (-1.1700265061756794e-14, -4.1110325389824605e-15),
            (-9.356101473729397e-15, 5.315966746437157e-16),
            (8.393006584142098e-16, -2.0982516460355246e-16),
            (0.8457468462539305, -0.8897912989262561),
        ];
        let m = CMatrix::from_iterator(5, 5, entries.iter().map(|&(re, im)| c(re, im)));
        let ev = eigvals(&m);
        assert_eq!(ev.len(), 5);
        for z in ev {
            assert!((z - c(0.8457468462539299, -0.8897912989262555)).norm() < 1e-6);
        }
    }

    #[test]
    fn herm_eig_diagonal_and_identity() {
        let (vals, vecs) = herm_eig(&diag(&[1.0, 0.0])).unwrap();
        assert_eq!(vals, vec![0.0, 1.0]);
        assert!(close(&vecs, &real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]), 1e-15));

        let (vals, vecs) = herm_eig(&identity(3)).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(close(&(vecs.adjoint() * &vecs), &identity(3), 1e-14));
    }

    #[test]
    fn herm_eig_two_by_two_roots() {
        // det([[2-x,1],[1,2-x]]) = (2-x)^2 - 1 → x ∈ {1, 3}
        let m = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let (vals, vecs) = herm_eig(&m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let resid = &m * &vecs - &vecs * diag(&vals);
        assert!(resid.norm() < 1e-13);
        // canonical phase: largest component real positive
        for col in vecs.column_iter() {
            let top = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let big = col.iter().find(|z| z.norm() >= top * (1.0 - 1e-12)).unwrap();
            assert!(big.im.abs() < 1e-15 && big.re > 0.0);
        }
    }

    #[test]
    fn herm_eig_rejects_non_square_and_asymmetric() {
        assert!(matches!(herm_eig(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
        let m = real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn pinv_examples() {
        assert!(close(&pinv(&diag(&[2.0, 0.0]), &cfg()), &diag(&[0.5, 0.0]), 1e-15));
        assert!(close(&pinv(&identity(3), &cfg()), &identity(3), 1e-14));
        assert_eq!(pinv(&CMatrix::zeros(2, 3), &cfg()), CMatrix::zeros(3, 2));

        let m = real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let p = pinv(&m, &cfg());
        assert!(close(&p, &m.scale(0.25), 1e-14));
        // Penrose axioms as an independent check
        assert!(close(&(&m * &p * &m), &m, 1e-13));
        assert!(close(&(&p * &m * &p), &p, 1e-13));
        assert!(close(&(&m * &p).adjoint(), &(&m * &p), 1e-13));
        assert!(close(&(&p * &m).adjoint(), &(&p * &m), 1e-13));
    }

    #[test]
    fn sqrt_psd_examples() {
        assert!(close(&sqrt_psd(&diag(&[4.0, 1.0]), &cfg()).unwrap(), &diag(&[2.0, 1.0]), 1e-14));
        assert_eq!(sqrt_psd(&CMatrix::zeros(2, 2), &cfg()).unwrap(), CMatrix::zeros(2, 2));
        let m = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = sqrt_psd(&m, &cfg()).unwrap();
        assert!(close(&(&s * &s), &m, 1e-13));
        assert!(matches!(sqrt_psd(&diag(&[1.0, -0.5]), &cfg()), Err(Error::NotPsd(_))));
    }

    #[test]
    fn sqrt_psd_clamps_tiny_negative_eigenvalues() {
        let s = sqrt_psd(&diag(&[1.0, -1e-12]), &cfg()).unwrap();
        assert!(close(&s, &diag(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&diag(&[1.0, 0.0]), &cfg()), 1);
        assert_eq!(rank_of(&identity(4), &cfg()), 4);
        assert_eq!(rank_of(&real_matrix(&[&[1.0, 1.0], &[1.0, 1.0]]), &cfg()), 1);
        assert_eq!(rank_of(&CMatrix::zeros(3, 3), &cfg()), 0);
        // relative cutoff: scaling does not change rank
        assert_eq!(rank_of(&diag(&[1e-20, 0.0]), &cfg()), 1);
    }

    #[test]
    fn tolerance_config_validation() {
        assert!(ToleranceConfig::new(1e-10, 1e-7, 1e-10).is_ok());
        assert!(ToleranceConfig::new(0.0, 1e-7, 1e-10).is_err());
        assert!(ToleranceConfig::new(1e-10, 1.0, 1e-10).is_err());
    }

    #[test]
    fn eigvals_and_kron() {
        let mut ev = eigvals(&real_matrix(&[&[0.0, 2.0], &[0.0, 0.0]]));
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!(ev.iter().all(|z| z.norm() < 1e-15));
        let k = kron(&diag(&[2.0, 5.0]), &diag(&[3.0, 7.0]));
        assert_eq!(k, diag(&[6.0, 14.0, 15.0, 35.0]));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = real_matrix(&[&[1.0, 0.0, 0.0]]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!((&m * &ns).norm() < 1e-15);
    }
}
