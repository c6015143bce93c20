//! Seeded generators for weights A and operators T of a prescribed class.
//!
//! Operators are assembled in the eigenbasis U of the generated space, as
//! T = U·[[T₁₁, 0], [T₂₁, T₂₂]]·U* with T₁₁ = Σ^{−1/2}·M·Σ^{1/2}, so the
//! compression of T is the M that was drawn.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ToleranceConfig};
use crate::semispace::SemiSpace;

pub const DEFAULT_COND_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpClass {
    /// Dense T in the standard basis; may leave B_{A^{1/2}}.
    Generic,
    InBa,
    /// T₁₂ = T₂₁ = 0 and T₁₁ commuting with Σ. Each equal-σ block of T₁₁ is
    /// drawn normal, so the compression is normal as well.
    CommutingWithA,
    ASelfadjoint,
    ANormal,
    AInvertible,
    DominantEigen,
}

impl OpClass {
    pub fn name(self) -> &'static str {
        match self {
            OpClass::Generic => "generic",
            OpClass::InBa => "in_BA",
            OpClass::CommutingWithA => "commuting_with_A",
            OpClass::ASelfadjoint => "a_selfadjoint",
            OpClass::ANormal => "a_normal",
            OpClass::AInvertible => "a_invertible",
            OpClass::DominantEigen => "dominant_eigen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub r: usize,
    pub cond_cap: f64,
    pub op_class: OpClass,
}

impl GenSpec {
    pub fn new(seed: u64, n: usize, r: usize, op_class: OpClass) -> Self {
        GenSpec { seed, n, r, cond_cap: DEFAULT_COND_CAP, op_class }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.r == 0 || self.r > self.n {
            return Err(Error::InvalidArgument(format!("need 1 <= r <= n, got r={} n={}", self.r, self.n)));
        }
        if !(self.cond_cap >= 1.0 && self.cond_cap.is_finite()) {
            return Err(Error::InvalidArgument("cond_cap must be finite and >= 1".into()));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases
/// moved into Q.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// A = QΛQ* with Haar Q and r log-uniform eigenvalues in [1, cond_cap].
pub fn gen_weight(rng: &mut impl Rng, n: usize, r: usize, cond_cap: f64) -> CMatrix {
    let q = haar_unitary(rng, n);
    let lmax = cond_cap.ln();
    let lam: Vec<f64> = (0..n).map(|i| if i < r { (rng.random::<f64>() * lmax).exp() } else { 0.0 }).collect();
    linalg::symmetrize(&linalg::conjugate_diag(&q, &lam))
}

pub fn gen_space_with(rng: &mut impl Rng, spec: &GenSpec, cfg: ToleranceConfig) -> Result<SemiSpace> {
    spec.validate()?;
    SemiSpace::new(&gen_weight(rng, spec.n, spec.r, spec.cond_cap), cfg)
}

pub fn gen_space(spec: &GenSpec) -> Result<SemiSpace> {
    gen_space_with(&mut spec.rng(), spec, ToleranceConfig::default())
}

/// V·diag(d)·V* with Haar V.
pub fn normal_with_eigenvalues(rng: &mut impl Rng, d: &[Complex64]) -> CMatrix {
    let r = d.len();
    let v = haar_unitary(rng, r);
    let dm = CMatrix::from_fn(r, r, |i, j| if i == j { d[i] } else { c(0.0, 0.0) });
    &v * dm * v.adjoint()
}

fn eigen_draw(rng: &mut impl Rng, min_modulus: f64) -> Complex64 {
    loop {
        let z = gaussian(rng) * std::f64::consts::SQRT_2;
        if z.norm() >= min_modulus {
            return z;
        }
        if min_modulus > 0.0 && z.norm() > 0.0 {
            // push outward along the same ray
            return z * (min_modulus / z.norm()) * (1.0 + rng.random::<f64>());
        }
    }
}

/// The r×r compression for the requested class.
pub fn gen_compression(rng: &mut impl Rng, sp: &SemiSpace, class: OpClass) -> CMatrix {
    let r = sp.rank();
    match class {
        OpClass::Generic | OpClass::InBa => gaussian_matrix(rng, r, r),
        OpClass::CommutingWithA => {
            let mut m = CMatrix::zeros(r, r);
            let s = sp.sigma();
            let mut start = 0;
            while start < r {
                let mut end = start + 1;
                while end < r && (s[end] - s[start]).abs() <= 1e-12 * s[start] {
                    end += 1;
                }
                let d: Vec<Complex64> = (start..end).map(|_| eigen_draw(rng, 0.0)).collect();
                let block = normal_with_eigenvalues(rng, &d);
                m.view_mut((start, start), (end - start, end - start)).copy_from(&block);
                start = end;
            }
            m
        }
        OpClass::ASelfadjoint => {
            let d: Vec<Complex64> = (0..r)
                .map(|_| {
                    let mag = 0.1 + 1.9 * rng.random::<f64>();
                    c(if rng.random::<bool>() { mag } else { -mag }, 0.0)
                })
                .collect();
            linalg::symmetrize(&normal_with_eigenvalues(rng, &d))
        }
        OpClass::ANormal => {
            let d: Vec<Complex64> = (0..r).map(|_| eigen_draw(rng, 0.0)).collect();
            normal_with_eigenvalues(rng, &d)
        }
        OpClass::AInvertible => {
            let d: Vec<Complex64> = (0..r).map(|_| eigen_draw(rng, 0.1)).collect();
            normal_with_eigenvalues(rng, &d)
        }
        OpClass::DominantEigen => {
            let top = c(0.0, rng.random::<f64>() * std::f64::consts::TAU).exp() * (1.5 + 0.5 * rng.random::<f64>());
            let d: Vec<Complex64> = (0..r)
                .map(|i| {
                    if i == 0 {
                        top
                    } else {
                        c(0.0, rng.random::<f64>() * std::f64::consts::TAU).exp() * rng.random::<f64>()
                    }
                })
                .collect();
            normal_with_eigenvalues(rng, &d)
        }
    }
}

/// T = U·[[Σ^{−1/2}MΣ^{1/2}, 0], [T₂₁, T₂₂]]·U*, with T₂₁ = 0 when T must
/// commute with A.
pub fn assemble(rng: &mut impl Rng, sp: &SemiSpace, m: &CMatrix, commuting: bool) -> CMatrix {
    let (n, r) = (sp.n(), sp.rank());
    let mut b = CMatrix::zeros(n, n);
    b.view_mut((0, 0), (r, r)).copy_from(&sp.weight_similarity(m, -0.5));
    if n > r {
        if !commuting {
            b.view_mut((r, 0), (n - r, r)).copy_from(&gaussian_matrix(rng, n - r, r));
        }
        b.view_mut((r, r), (n - r, n - r)).copy_from(&gaussian_matrix(rng, n - r, n - r));
    }
    let u = sp.eigenbasis();
    u * b * u.adjoint()
}

pub fn gen_operator_matrix(rng: &mut impl Rng, sp: &SemiSpace, class: OpClass) -> CMatrix {
    if class == OpClass::Generic {
        return gaussian_matrix(rng, sp.n(), sp.n());
    }
    let m = gen_compression(rng, sp, class);
    assemble(rng, sp, &m, class == OpClass::CommutingWithA)
}

/// Space and operator for a spec, drawn from one stream.
pub fn gen_instance(spec: &GenSpec) -> Result<(SemiSpace, CMatrix)> {
    let mut rng = spec.rng();
    let sp = gen_space_with(&mut rng, spec, ToleranceConfig::default())?;
    let t = gen_operator_matrix(&mut rng, &sp, spec.op_class);
    Ok((sp, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;
    use crate::opcalc::SemiOperator;
    use std::sync::Arc;

    fn op_for(spec: &GenSpec) -> SemiOperator {
        let (sp, t) = gen_instance(spec).unwrap();
        SemiOperator::new(Arc::new(sp), t).unwrap()
    }

    #[test]
    fn space_examples() {
        let sp = gen_space(&GenSpec::new(1, 2, 2, OpClass::InBa)).unwrap();
        assert_eq!(sp.rank(), 2);
        let (vals, _) = linalg::herm_eig(sp.a()).unwrap();
        assert!(vals[0] >= 1.0 - 1e-9);
        let sp = gen_space(&GenSpec::new(1, 3, 1, OpClass::InBa)).unwrap();
        assert_eq!(sp.rank(), 1);
        assert_eq!(linalg::rank_of(sp.a(), sp.cfg()), 1);
        let mut spec = GenSpec::new(5, 3, 3, OpClass::InBa);
        spec.cond_cap = 1.0;
        let sp = gen_space(&spec).unwrap();
        assert!((sp.a() - linalg::identity(3)).norm() < 1e-13);
        assert!(gen_space(&GenSpec::new(1, 2, 3, OpClass::InBa)).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(99, 5, 3, OpClass::ANormal);
        let (s1, t1) = gen_instance(&spec).unwrap();
        let (s2, t2) = gen_instance(&spec).unwrap();
        assert_eq!(s1.a(), s2.a());
        assert_eq!(t1, t2);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = haar_unitary(&mut rng, 5);
        assert!((q.adjoint() * &q - linalg::identity(5)).norm() < 1e-13);
    }

    #[test]
    fn classes_meet_their_predicates() {
        for seed in 0..20 {
            for (n, r) in [(2, 1), (3, 3), (5, 2), (6, 4)] {
                let op = op_for(&GenSpec::new(seed, n, r, OpClass::ASelfadjoint));
                let (ok, res) = classify::is_a_selfadjoint(&op).unwrap();
                assert!(ok && res < 1e-10, "{res}");
                let op = op_for(&GenSpec::new(seed, n, r, OpClass::ANormal));
                let (ok, res) = classify::is_a_normal(&op).unwrap();
                assert!(ok && res < 1e-10, "{res}");
                let op = op_for(&GenSpec::new(seed, n, r, OpClass::AInvertible));
                assert!(linalg::sigma_min(op.compress().unwrap()) >= 0.1 - 1e-9);
                let op = op_for(&GenSpec::new(seed, n, r, OpClass::CommutingWithA));
                let sp = op.space();
                let comm = op.t() * sp.a() - sp.a() * op.t();
                assert!(linalg::norm2(&comm) <= 1e-9 * (1.0 + sp.a_norm() * op.t_norm()));
                let op = op_for(&GenSpec::new(seed, n, r, OpClass::InBa));
                assert!(op.class().in_ba);
                let op = op_for(&GenSpec::new(seed, n, n, OpClass::Generic));
                assert!(op.class().in_ba);
            }
        }
    }

    #[test]
    fn compression_is_the_drawn_matrix() {
        let spec = GenSpec::new(11, 5, 3, OpClass::InBa);
        let mut rng = spec.rng();
        let sp = gen_space_with(&mut rng, &spec, ToleranceConfig::default()).unwrap();
        let m = gen_compression(&mut rng, &sp, OpClass::InBa);
        let t = assemble(&mut rng, &sp, &m, false);
        let op = SemiOperator::new(Arc::new(sp), t).unwrap();
        assert!((op.compress().unwrap() - &m).norm() < 1e-10 * (1.0 + m.norm()));
    }
}
