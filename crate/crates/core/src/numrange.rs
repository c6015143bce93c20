//! A-numerical range W_A(T) = W(M) via a support-function sweep.
//!
//! For each angle θ the top eigenvector y of Re(e^{−iθ}M) gives the boundary
//! point ⟨My, y⟩ extreme in direction e^{iθ}; the top eigenvalue is the
//! support value, so the half-planes {Re(e^{−iθ}z) ≤ h(θ)} form a certified
//! outer bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::classify;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::opcalc::SemiOperator;
use crate::par::Exec;

pub const DEFAULT_ANGLES: usize = 720;
pub const MIN_ANGLES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct NumRangeResult {
    pub thetas: Vec<f64>,
    /// One boundary point per angle, in angle order.
    pub boundary: Vec<Complex64>,
    /// Support value h(θ) per angle.
    pub support: Vec<f64>,
    /// max |boundary point|.
    pub radius: f64,
    pub hull: Polygon,
}

impl NumRangeResult {
    /// Largest violation of the supporting half-planes by z (≤ 0 when z is
    /// inside the outer approximation).
    pub fn outer_excess(&self, z: Complex64) -> f64 {
        self.thetas
            .iter()
            .zip(&self.support)
            .map(|(&th, &h)| (c(th.cos(), -th.sin()) * z).re - h)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn rotated_hermitian_part(m: &CMatrix, theta: f64) -> CMatrix {
    let rot = c(theta.cos(), -theta.sin());
    (m * rot + m.adjoint() * rot.conj()).scale(0.5)
}

/// Support value and boundary point of W(M) in direction θ.
pub fn support_point(m: &CMatrix, theta: f64) -> (f64, Complex64) {
    if m.nrows() == 1 {
        let z = m[(0, 0)];
        return ((c(theta.cos(), -theta.sin()) * z).re, z);
    }
    let (h, y) = linalg::herm_top(&rotated_hermitian_part(m, theta));
    let z = y.dotc(&(m * &y));
    (h, z)
}

/// Boundary sweep of W(M) for a compressed matrix.
pub fn numrange_of_matrix(m: &CMatrix, n_angles: usize, exec: Exec) -> Result<NumRangeResult> {
    if n_angles < MIN_ANGLES {
        return Err(Error::InvalidArgument(format!("n_angles must be at least {MIN_ANGLES}")));
    }
    let thetas: Vec<f64> = (0..n_angles).map(|k| 2.0 * PI * k as f64 / n_angles as f64).collect();
    let pts = exec.map(n_angles, |k| support_point(m, thetas[k]));
    let support: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let boundary: Vec<Complex64> = pts.iter().map(|p| p.1).collect();
    let radius = boundary.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let hull = conv_hull(&boundary)?;
    Ok(NumRangeResult { thetas, boundary, support, radius, hull })
}

pub fn numrange(op: &SemiOperator, n_angles: usize, exec: Exec) -> Result<NumRangeResult> {
    numrange_of_matrix(op.compress()?, n_angles, exec)
}

/// w(M) = max_θ λ_max(Re(e^{−iθ}M)), refined by golden-section search around
/// the best grid angles so the result does not depend on the grid.
pub fn numerical_radius_of_matrix(m: &CMatrix) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    let h = |th: f64| linalg::herm_top(&rotated_hermitian_part(m, th)).0;
    let k = 256;
    let step = 2.0 * PI / k as f64;
    let grid: Vec<f64> = (0..k).map(|i| h(i as f64 * step)).collect();
    let mut best = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // refine every local maximum of the sampled support function
    for i in 0..k {
        let prev = grid[(i + k - 1) % k];
        let next = grid[(i + 1) % k];
        if grid[i] >= prev && grid[i] >= next {
            let (mut lo, mut hi) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = hi - g * (hi - lo);
            let mut x2 = lo + g * (hi - lo);
            let (mut f1, mut f2) = (h(x1), h(x2));
            for _ in 0..60 {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = h(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = h(x1);
                }
            }
            best = best.max(f1).max(f2);
        }
    }
    best.max(0.0)
}

/// w_A(T).
pub fn a_numerical_radius(op: &SemiOperator) -> Result<f64> {
    Ok(numerical_radius_of_matrix(op.compress()?))
}

/// W_A(T) ⊂ ℝ, decided by max |Im| over boundary points ≤ tol·(1 + ‖M‖₂).
/// The answer is cross-checked against A-selfadjointness.
pub fn is_real_range(op: &SemiOperator, tol: f64) -> Result<bool> {
    op.require_ba()?;
    let m = op.compress()?;
    let res = numrange_of_matrix(m, DEFAULT_ANGLES, Exec::Sequential)?;
    let imag = res.boundary.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let real = imag <= tol * (1.0 + linalg::norm2(m));
    let (sa, resid) = classify::is_a_selfadjoint(op)?;
    if real != sa {
        return Err(Error::Inconsistent(format!(
            "real-range test ({real}, max |Im| {imag:.3e}) disagrees with A-selfadjointness ({sa}, residual {resid:.3e})"
        )));
    }
    Ok(real)
}

/// Convex polygon, counter-clockwise. Degenerate inputs keep one vertex
/// (point) or two (segment).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    pub vertices: Vec<Complex64>,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Monotone-chain convex hull.
pub fn conv_hull(points: &[Complex64]) -> Result<Polygon> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("convex hull of an empty set".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(Polygon { vertices: pts });
    }
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-14 * scale * scale;
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(Polygon { vertices: lower })
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

impl Polygon {
    /// Distance from z to the polygon (0 inside).
    pub fn distance(&self, z: Complex64) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => (z - v[0]).norm(),
            2 => segment_distance(z, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| cross(v[i], v[(i + 1) % n], z) >= 0.0);
                if inside {
                    0.0
                } else {
                    (0..n).map(|i| segment_distance(z, v[i], v[(i + 1) % n])).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Strict convexity of the vertex chain (every turn is a left turn).
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        n <= 2 || (0..n).all(|i| cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0.0)
    }

    /// Hausdorff distance between two convex polygons; attained at vertices.
    pub fn hausdorff(&self, other: &Polygon) -> f64 {
        let a = self.vertices.iter().map(|&z| other.distance(z)).fold(0.0, f64::max);
        let b = other.vertices.iter().map(|&z| self.distance(z)).fold(0.0, f64::max);
        a.max(b)
    }
}
