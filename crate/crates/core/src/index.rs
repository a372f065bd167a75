//! Stability index of a stationary configuration.
//!
//! The Jacobian J(θ) splits as −D + v⊗v + w⊗w with Dᵢᵢ = κᵢ = Σⱼcos(θⱼ−θᵢ),
//! and for invertible D with τ = Σᵢ 1/κᵢ ≠ 2 the number of unstable
//! directions is n₊(J) = #{κᵢ < 0} + [τ > 2]. A dense eigensolver provides
//! the independent oracle, and the spanning-tree identity
//! Σ_T Πₑ cos(θₑ) = (2Πκᵢ − ΣₖΠ_{i≠k}κᵢ) / Σκᵢ cross-checks the algebra.

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::model::{jacobian, order_parameter, phasor_sums, PhaseConfig};
use crate::scalar::Real;

/// |κᵢ| ≤ KAPPA_TOL·N counts as a singular D (degenerate for the formula route).
pub const KAPPA_TOL: f64 = 1e-8;
/// |τ − 2| ≤ TAU_TOL is marginal (degenerate for the formula route).
pub const TAU_TOL: f64 = 1e-8;
/// Eigenvalues with |λ| < EIGEN_ZERO_TOL·N are classified as zero by the oracle.
pub const EIGEN_ZERO_TOL: f64 = 1e-9;

/// Per-oscillator cosine sums κᵢ and their total S = Σκᵢ.
///
/// On the stable branch of the fixed-point system all κᵢ are positive
/// (in fact > ½ when τ < 2); general configurations can have any signs.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaVector<R> {
    kappa: Vec<R>,
    s: R,
}

impl<R: Real> KappaVector<R> {
    pub(crate) fn from_parts(kappa: Vec<R>, s: R) -> Self {
        Self { kappa, s }
    }

    pub fn kappa(&self) -> &[R] {
        &self.kappa
    }

    /// S = Σᵢκᵢ = Σᵢⱼ cos(θᵢ−θⱼ) = N²R².
    pub fn s(&self) -> R {
        self.s
    }

    pub fn n(&self) -> usize {
        self.kappa.len()
    }
}

/// Signature of the Jacobian spectrum: counts of positive, zero, and
/// negative eigenvalues (n₊ is the dimension of the unstable manifold).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexCount {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

/// τ = Σᵢ 1/κᵢ together with the κ it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct TauValue<R> {
    pub tau: R,
    pub kappa: KappaVector<R>,
}

/// κᵢ = Σⱼ cos(θⱼ−θᵢ), in O(N) via the phasor sums (κᵢ = N·R·cos(θᵢ−ψ)).
pub fn kappa_of<R: Real>(theta: &PhaseConfig<R>) -> KappaVector<R> {
    let (sin_sum, cos_sum) = phasor_sums(theta);
    let kappa: Vec<R> = theta
        .angles()
        .iter()
        .map(|&t| cos_sum * t.cos() + sin_sum * t.sin())
        .collect();
    let s = kappa.iter().fold(R::zero(), |acc, &k| acc + k);
    KappaVector::from_parts(kappa, s)
}

/// #{i : κᵢ < 0} = n₊(−D), the diagonal part's contribution to the index.
pub fn n_plus_neg_d<R: Real>(theta: &PhaseConfig<R>) -> Result<usize> {
    let kv = kappa_of(theta);
    let tol = R::lit(KAPPA_TOL) * R::of_usize(theta.n());
    for (i, &k) in kv.kappa().iter().enumerate() {
        if k.abs() <= tol {
            return Err(Error::SingularD {
                index: i,
                value: k.as_f64(),
            });
        }
    }
    Ok(kv.kappa().iter().filter(|&&k| k < R::zero()).count())
}

/// τ = Σᵢ 1/κᵢ = ⟨1, D⁻¹1⟩; requires D invertible.
pub fn tau<R: Real>(theta: &PhaseConfig<R>) -> Result<TauValue<R>> {
    let kv = kappa_of(theta);
    let tol = R::lit(KAPPA_TOL) * R::of_usize(theta.n());
    let mut t = R::zero();
    for (i, &k) in kv.kappa().iter().enumerate() {
        if k.abs() <= tol {
            return Err(Error::SingularD {
                index: i,
                value: k.as_f64(),
            });
        }
        t += k.recip();
    }
    #[cfg(debug_assertions)]
    {
        // Same quantity through the rank-two vectors: ⟨v,D⁻¹v⟩ + ⟨w,D⁻¹w⟩.
        let parts = crate::model::rank2_parts(theta);
        let alt = parts
            .v
            .iter()
            .zip(&parts.w)
            .zip(kv.kappa())
            .fold(R::zero(), |acc, ((&v, &w), &k)| acc + (v * v + w * w) / k);
        debug_assert!(
            (alt - t).abs() <= R::lit(1e-10) * (R::one() + t.abs()),
            "quadratic-form route disagrees with Σ1/κ"
        );
    }
    Ok(TauValue { tau: t, kappa: kv })
}

/// The index formula: n₊(J) = #{κᵢ < 0} + [τ > 2], n₀ = 1 generically.
///
/// Errors with `Degenerate` when some κᵢ ≈ 0 or τ ≈ 2; callers needing an
/// answer there must fall back to [`index_oracle`].
pub fn unstable_dim<R: Real>(theta: &PhaseConfig<R>) -> Result<IndexCount> {
    let n = theta.n();
    let tv = tau(theta).map_err(|e| match e {
        Error::SingularD { index, value } => Error::Degenerate {
            reason: format!("κ_{index} = {value:.3e} ≈ 0"),
        },
        other => other,
    })?;
    if (tv.tau - R::lit(2.0)).abs() <= R::lit(TAU_TOL) {
        return Err(Error::Degenerate {
            reason: format!("τ = {} ≈ 2", tv.tau),
        });
    }
    let negatives = tv.kappa.kappa().iter().filter(|&&k| k < R::zero()).count();
    let n_plus = negatives + usize::from(tv.tau > R::lit(2.0));
    Ok(IndexCount {
        n_plus,
        n_zero: 1,
        n_minus: n - n_plus - 1,
    })
}

/// Independent spectral count: diagonalize J(θ) and classify eigenvalues
/// with the absolute threshold `EIGEN_ZERO_TOL`·N.
pub fn index_oracle<R: Real>(theta: &PhaseConfig<R>) -> IndexCount {
    let eig = symmetric_eigenvalues(&jacobian(theta));
    let thr = R::lit(EIGEN_ZERO_TOL) * R::of_usize(theta.n());
    let mut count = IndexCount {
        n_plus: 0,
        n_zero: 0,
        n_minus: 0,
    };
    for l in eig {
        if l.abs() < thr {
            count.n_zero += 1;
        } else if l > R::zero() {
            count.n_plus += 1;
        } else {
            count.n_minus += 1;
        }
    }
    count
}

/// Evaluate both sides of the spanning-tree identity: the enumerated sum
/// Σ_T Πₑ cos(θᵤ−θᵥ) over all N^{N−2} labeled trees, and the closed form
/// (2·Πᵢκᵢ − Σₖ Π_{i≠k}κᵢ) / S. Returns (lhs, rhs).
pub fn kirchhoff_identity_check<R: Real>(theta: &PhaseConfig<R>) -> Result<(R, R)> {
    let n = theta.n();
    if n > 7 {
        return Err(Error::InvalidParameter(format!(
            "tree enumeration needs N ≤ 7 (N^(N−2) terms), got N = {n}"
        )));
    }
    let kv = kappa_of(theta);
    let s = kv.s();
    if s.abs() <= R::lit(1e-12) * R::of_usize(n * n) {
        return Err(Error::DegenerateDenominator);
    }

    let a = theta.angles();
    let mut lhs = R::zero();
    for_each_labeled_tree(n, |edges| {
        let mut prod = R::one();
        for &(u, v) in edges {
            prod *= (a[u] - a[v]).cos();
        }
        lhs += prod;
    });

    let kappa = kv.kappa();
    let full: R = kappa.iter().fold(R::one(), |acc, &k| acc * k);
    let mut drop_one_sum = R::zero();
    for k in 0..n {
        let mut prod = R::one();
        for (i, &ki) in kappa.iter().enumerate() {
            if i != k {
                prod *= ki;
            }
        }
        drop_one_sum += prod;
    }
    let rhs = (R::lit(2.0) * full - drop_one_sum) / s;
    Ok((lhs, rhs))
}

/// Visit every labeled spanning tree of the complete graph Kₙ exactly once
/// by decoding all n^{n−2} Prüfer sequences.
fn for_each_labeled_tree(n: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    assert!(n >= 2);
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        visit(&tree_from_prufer(&seq, n));
        // Increment the base-n counter.
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Decode one Prüfer sequence into its n−1 tree edges.
fn tree_from_prufer(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n)
            .find(|&i| degree[i] == 1)
            .expect("a leaf always exists");
        edges.push((leaf, x));
        degree[leaf] = 0;
        degree[x] -= 1;
    }
    let mut rest = (0..n).filter(|&i| degree[i] == 1);
    let u = rest.next().expect("two final nodes");
    let v = rest.next().expect("two final nodes");
    edges.push((u, v));
    edges
}

/// Consistency check exposed for tests: κᵢ = N·R·cos(θᵢ−ψ).
pub fn kappa_order_parameter_residual<R: Real>(theta: &PhaseConfig<R>) -> R {
    let kv = kappa_of(theta);
    let op = order_parameter(theta);
    let nr = R::of_usize(theta.n()) * op.r;
    theta
        .angles()
        .iter()
        .zip(kv.kappa())
        .fold(R::zero(), |acc, (&t, &k)| {
            acc.max((k - nr * (t - op.psi).cos()).abs())
        })
}
