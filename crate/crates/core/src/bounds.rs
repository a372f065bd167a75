//! Closed-form critical couplings and synchronization-probability bounds.
//!
//! γ_min(N) is the reciprocal of the farthest boundary point of S_ω: exactly
//! 2N^{−3/2} for even N, and for odd N the reciprocal of the slightly larger
//! "two groups plus one straggler" maximum. γ_max(N) — the coupling above
//! which *every* unit-spread... rather, the coupling that synchronizes the
//! worst direction — is pinned between 1/√(N(N−1)) and √2/√(N(N−1)), with
//! the lower end conjectured exact. For Gaussian frequencies the probability
//! of synchronization is bracketed by erf-power bounds whose transition
//! happens at couplings of size φ(N) = √(2 ln N)/(N+1).

pub use crate::special::{chi_cdf, erf, erfc};
use crate::scalar::Real;

/// Critical-coupling summary for one system size.
///
/// `gamma_min` is exact for even N; for odd N it evaluates a closed form the
/// source analysis believes exact but does not prove (`gamma_min_is_conjecture`).
/// `gamma_max_conjecture` repeats `gamma_max_lo`, which is believed to be the
/// true γ_max; the proven statement is only the (lo, hi) bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingBounds<R> {
    pub n: usize,
    pub gamma_min: R,
    pub gamma_min_is_conjecture: bool,
    pub gamma_max_lo: R,
    pub gamma_max_hi: R,
    pub gamma_max_conjecture: R,
}

/// Smallest coupling at which *some* mean-zero direction still synchronizes
/// at the outermost boundary point: 2N^{−3/2} for even N; for odd N the
/// reciprocal of
/// ω* = (√(8N²−16N+9) + 3)·√(4N²−8N+3 + √(8N²−16N+9)) / (8√(2(N−1))).
///
/// Panics if N < 2.
pub fn gamma_min<R: Real>(n: usize) -> R {
    assert!(n >= 2, "need at least two oscillators, got {n}");
    let nf = R::of_usize(n);
    if n % 2 == 0 {
        R::lit(2.0) / (nf * nf.sqrt())
    } else {
        let inner = (R::lit(8.0) * nf * nf - R::lit(16.0) * nf + R::lit(9.0)).sqrt();
        let omega_star = (inner + R::lit(3.0))
            * (R::lit(4.0) * nf * nf - R::lit(8.0) * nf + R::lit(3.0) + inner).sqrt()
            / (R::lit(8.0) * (R::lit(2.0) * (nf - R::one())).sqrt());
        omega_star.recip()
    }
}

/// Proven bracket for the coupling that synchronizes the hardest direction:
/// 1/√(N(N−1)) ≤ γ_max(N) ≤ √2/√(N(N−1)). Panics if N < 2.
pub fn gamma_max_bounds<R: Real>(n: usize) -> (R, R) {
    assert!(n >= 2, "need at least two oscillators, got {n}");
    let lo = (R::of_usize(n) * R::of_usize(n - 1)).sqrt().recip();
    (lo, R::lit(2.0).sqrt() * lo)
}

/// All critical-coupling numbers for one N, with conjecture flags.
pub fn coupling_bounds<R: Real>(n: usize) -> CouplingBounds<R> {
    let (lo, hi) = gamma_max_bounds(n);
    CouplingBounds {
        n,
        gamma_min: gamma_min(n),
        gamma_min_is_conjecture: n % 2 == 1,
        gamma_max_lo: lo,
        gamma_max_hi: hi,
        gamma_max_conjecture: lo,
    }
}

/// The anomalous transition scale φ(N) = √(2 ln N)/(N + 1): couplings below
/// ≈ φ(N) almost never synchronize, couplings above ≈ 2φ(N) almost always do.
pub fn phi<R: Real>(n: usize) -> R {
    assert!(n >= 2, "need at least two oscillators, got {n}");
    (R::lit(2.0) * R::of_usize(n).ln()).sqrt() / R::of_usize(n + 1)
}

/// ln erf(x) evaluated through the complement, so that N-th powers of
/// near-one erf values keep full precision.
fn ln_erf<R: Real>(x: R) -> R {
    (-erfc(x)).ln_1p()
}

/// Upper bound min(1, √N·erf(γN/√2)^{N−1}) on the synchronization
/// probability under i.i.d. standard Gaussian frequencies.
pub fn psync_upper<R: Real>(gamma: R, n: usize) -> R {
    assert!(n >= 2, "need at least two oscillators, got {n}");
    assert!(gamma > R::zero(), "coupling must be positive, got {gamma}");
    let nf = R::of_usize(n);
    let log_val = R::lit(0.5) * nf.ln() + R::of_usize(n - 1) * ln_erf(gamma * nf / R::lit(2.0).sqrt());
    log_val.exp().min(R::one())
}

/// Lower bound erf(γN/(2√2))^N on the same probability.
pub fn psync_lower<R: Real>(gamma: R, n: usize) -> R {
    assert!(n >= 2, "need at least two oscillators, got {n}");
    assert!(gamma > R::zero(), "coupling must be positive, got {gamma}");
    let nf = R::of_usize(n);
    (nf * ln_erf(gamma * nf / (R::lit(2.0) * R::lit(2.0).sqrt()))).exp()
}
