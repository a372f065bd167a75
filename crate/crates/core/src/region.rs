//! Membership in the fully-synchronizable frequency region.
//!
//! A mean-zero ω admits a stable phase-locked state at unit coupling iff the
//! scalar equation g(S) = Σᵢ√(S − ωᵢ²) − S has a root with g′(S) ≤ 0, i.e.
//! τ = Σ1/κᵢ ≤ 2 at κᵢ = +√(S − ωᵢ²). g is concave on [maxᵢωᵢ², N²], so the
//! relevant root is the **largest** one, found by maximizing g first and then
//! running safeguarded Newton on the right-hand branch. The region S_ω is
//! convex and contains the origin, which makes membership along any ray
//! monotone and boundary distances bisectable.

use crate::error::{Error, Result};
use crate::index::{KappaVector, TauValue};
use crate::model::{check_gamma, coupling_map, FrequencyVector, PhaseConfig};
use crate::scalar::Real;

/// |τ − 2| ≤ TOL_MARGIN is reported as `Marginal` rather than either boolean.
pub const TOL_MARGIN: f64 = 1e-9;
/// Relative tolerance for the consistency requirement κᵢ² + ωᵢ² = S.
pub const KO_RTOL: f64 = 1e-9;

/// Three-way synchronizability verdict; the boundary gets its own state
/// because the index theorem is silent at τ = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncStatus {
    Synchronizable,
    Marginal,
    NotSynchronizable,
}

/// Outcome of a membership test, with the witnesses when they exist.
///
/// κ, τ, θ describe the unit-coupling system with frequencies ω/γ; θ is
/// nevertheless the phase-locked state of the original system, since
/// ω + γf(θ) = 0 ⇔ f(θ) = −ω/γ.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncDecision<R> {
    pub status: SyncStatus,
    pub kappa: Option<KappaVector<R>>,
    pub tau: Option<R>,
    pub theta: Option<PhaseConfig<R>>,
}

impl<R> SyncDecision<R> {
    /// Strict membership: `Marginal` does not count.
    pub fn synchronizable(&self) -> bool {
        self.status == SyncStatus::Synchronizable
    }
}

/// Boundary crossing along a ray: s*·direction sits on ∂S_ω.
///
/// `tolerance` is the relative half-width of the final bisection bracket, so
/// s*(1 − tolerance)·direction tested synchronizable and
/// s*(1 + tolerance)·direction tested not.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDistance<R> {
    pub direction: FrequencyVector<R>,
    pub s_star: R,
    pub tolerance: R,
}

/// g(S) = Σᵢ√(S − ωᵢ²) − S and its slope g′(S) = τ(S)/2 − 1.
fn g_and_slope<R: Real>(omega: &[R], s: R) -> (R, R) {
    let mut sum = R::zero();
    let mut tau = R::zero();
    for &w in omega {
        let d = s - w * w;
        let k = if d > R::zero() { d.sqrt() } else { R::zero() };
        sum += k;
        tau += k.max(R::lit(1e-300)).recip();
    }
    (sum - s, R::lit(0.5) * tau - R::one())
}

/// g″(S) = −¼ Σᵢ (S − ωᵢ²)^{−3/2}, for the Newton polish of the peak.
fn g_curvature<R: Real>(omega: &[R], s: R) -> R {
    let mut acc = R::zero();
    for &w in omega {
        let d = (s - w * w).max(R::lit(1e-300));
        acc += (d * d.sqrt()).recip();
    }
    -R::lit(0.25) * acc
}

/// Solve the stable-branch system κᵢ = +√(S − ωᵢ²), Σκᵢ = S for the largest
/// root S* ∈ [maxᵢωᵢ², N²]; `None` when sup g < 0 (no locked state exists).
///
/// The returned vector stores s = S*, so κᵢ² + ωᵢ² = s is exact by
/// construction up to the root residual |g(S*)| ≲ ε·S*.
pub fn solve_kappa<R: Real>(omega: &FrequencyVector<R>) -> Option<KappaVector<R>> {
    let n = omega.n();
    let w = omega.omega();
    let lo = w
        .iter()
        .fold(R::zero(), |acc, &x| acc.max(x * x));
    let hi = R::of_usize(n * n);
    if lo >= hi {
        // Beyond S = N² the bound g(S) ≤ √S(N − √S) < 0 leaves no root.
        return None;
    }

    // Golden-section maximization of the concave g on [lo, hi].
    let inv_phi = R::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut gc = g_and_slope(w, c).0;
    let mut gd = g_and_slope(w, d).0;
    for _ in 0..60 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g_and_slope(w, c).0;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g_and_slope(w, d).0;
        }
    }
    let mut peak = (a + b) * R::lit(0.5);
    // Newton polish on g′ sharpens the peak to machine precision, which is
    // what separates tangency (τ = 2) from a genuine sign change.
    for _ in 0..5 {
        let (_, slope) = g_and_slope(w, peak);
        let curv = g_curvature(w, peak);
        if !curv.is_finite() || curv == R::zero() {
            break;
        }
        let next = peak - slope / curv;
        if next > lo && next < hi {
            peak = next;
        } else {
            break;
        }
    }

    let g_peak = g_and_slope(w, peak).0;
    let eps_exist = R::lit(1e-12) * (R::one() + peak);
    if g_peak < -eps_exist {
        return None;
    }
    let root = if g_peak.abs() <= eps_exist {
        // Tangency: the two roots coincide at the peak (τ = 2, boundary).
        peak
    } else {
        // Largest root lies right of the peak; keep a sign bracket around
        // Newton so a wild step can never escape.
        let (mut a, mut b) = (peak, hi);
        if g_and_slope(w, b).0 >= R::zero() {
            b
        } else {
            let mut x = (a + b) * R::lit(0.5);
            for _ in 0..200 {
                let (gx, slope) = g_and_slope(w, x);
                if gx >= R::zero() {
                    a = x;
                } else {
                    b = x;
                }
                if b - a <= R::epsilon() * (R::one() + b) * R::lit(4.0) {
                    break;
                }
                let newton = x - gx / slope;
                x = if slope < R::zero() && newton > a && newton < b {
                    newton
                } else {
                    (a + b) * R::lit(0.5)
                };
            }
            (a + b) * R::lit(0.5)
        }
    };

    let kappa: Vec<R> = w
        .iter()
        .map(|&x| (root - x * x).max(R::zero()).sqrt())
        .collect();
    Some(KappaVector::from_parts(kappa, root))
}

/// τ = Σ1/κᵢ for a solved stable-branch κ (all entries > 0).
fn tau_of_kappa<R: Real>(kv: &KappaVector<R>) -> R {
    kv.kappa()
        .iter()
        .fold(R::zero(), |acc, &k| acc + k.max(R::lit(1e-300)).recip())
}

/// Membership verdict without reconstructing θ — the hot path for bisection.
pub(crate) fn classify<R: Real>(omega: &FrequencyVector<R>) -> SyncStatus {
    match solve_kappa(omega) {
        None => SyncStatus::NotSynchronizable,
        Some(kv) => {
            let t = tau_of_kappa(&kv);
            if (t - R::lit(2.0)).abs() <= R::lit(TOL_MARGIN) {
                SyncStatus::Marginal
            } else if t < R::lit(2.0) {
                SyncStatus::Synchronizable
            } else {
                SyncStatus::NotSynchronizable
            }
        }
    }
}

/// Does ω lie in γ·S_ω? Decided by solving at the rescaled frequencies ω/γ
/// and testing τ < 2; on success (and on the marginal boundary) the decision
/// carries κ, τ, and the reconstructed locked state.
pub fn is_synchronizable<R: Real>(
    omega: &FrequencyVector<R>,
    gamma: R,
) -> Result<SyncDecision<R>> {
    check_gamma(gamma)?;
    let scaled = omega.scaled(gamma.recip());
    let Some(kv) = solve_kappa(&scaled) else {
        return Ok(SyncDecision {
            status: SyncStatus::NotSynchronizable,
            kappa: None,
            tau: None,
            theta: None,
        });
    };
    let t = tau_of_kappa(&kv);
    let status = if (t - R::lit(2.0)).abs() <= R::lit(TOL_MARGIN) {
        SyncStatus::Marginal
    } else if t < R::lit(2.0) {
        SyncStatus::Synchronizable
    } else {
        SyncStatus::NotSynchronizable
    };
    if status == SyncStatus::NotSynchronizable {
        return Ok(SyncDecision {
            status,
            kappa: None,
            tau: None,
            theta: None,
        });
    }
    let theta = reconstruct_theta(&kv, &scaled)?;
    Ok(SyncDecision {
        status,
        kappa: Some(kv),
        tau: Some(t),
        theta: Some(theta),
    })
}

/// Invert (κ, ω) into phases: θᵢ = atan2(ωᵢ, κᵢ) in the ψ = 0 gauge, where
/// κᵢ = N·R·cosθᵢ and ωᵢ = N·R·sinθᵢ. Verifies both the κᵢ² + ωᵢ² = S input
/// consistency and, on the output, f(θ) = −ω and kappa_of(θ) = κ.
pub fn reconstruct_theta<R: Real>(
    kappa: &KappaVector<R>,
    omega: &FrequencyVector<R>,
) -> Result<PhaseConfig<R>> {
    let n = omega.n();
    if kappa.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: kappa.n(),
        });
    }
    let s = kappa.s();
    if !(s > R::zero()) {
        return Err(Error::InconsistentInput {
            reason: format!("S = {s} must be positive"),
        });
    }
    let ko_tol = R::lit(KO_RTOL) * s;
    for (i, (&k, &w)) in kappa.kappa().iter().zip(omega.omega()).enumerate() {
        let resid = (k * k + w * w - s).abs();
        if resid > ko_tol {
            return Err(Error::InconsistentInput {
                reason: format!(
                    "κ_{i}² + ω_{i}² − S = {:.3e} exceeds {KO_RTOL:.0e}·S",
                    resid.as_f64()
                ),
            });
        }
    }
    let theta = PhaseConfig::new(
        kappa
            .kappa()
            .iter()
            .zip(omega.omega())
            .map(|(&k, &w)| w.atan2(k))
            .collect(),
    )?;

    let check_tol = R::lit(1e-8) * R::of_usize(n);
    let f = coupling_map(&theta);
    let worst_f = f
        .iter()
        .zip(omega.omega())
        .fold(R::zero(), |acc, (&fi, &wi)| acc.max((fi + wi).abs()));
    let back = crate::index::kappa_of(&theta);
    let worst_k = back
        .kappa()
        .iter()
        .zip(kappa.kappa())
        .fold(R::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
    if worst_f > check_tol || worst_k > check_tol {
        return Err(Error::InconsistentInput {
            reason: format!(
                "reconstruction residuals |f(θ)+ω| = {:.3e}, |κ(θ)−κ| = {:.3e}",
                worst_f.as_f64(),
                worst_k.as_f64()
            ),
        });
    }
    Ok(theta)
}

/// Distance to ∂S_ω along a unit mean-zero direction at unit coupling, by
/// bisection on [0, N^{3/2}/2] (every synchronizable ω fits in that sphere).
pub fn boundary_distance<R: Real>(
    direction: &FrequencyVector<R>,
    tol: R,
) -> Result<BoundaryDistance<R>> {
    if !(tol > R::zero()) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bisection tolerance must be positive and finite, got {tol}"
        )));
    }
    let norm = direction.norm();
    if (norm - R::one()).abs() > R::lit(1e-9) {
        return Err(Error::InvalidParameter(format!(
            "direction must be unit length, got ‖u‖ = {norm}"
        )));
    }
    let n = direction.n();
    let mut a = R::zero();
    let mut b = R::of_usize(n) * R::of_usize(n).sqrt() * R::lit(0.5);
    while b - a > tol {
        let mid = (a + b) * R::lit(0.5);
        if classify(&direction.scaled(mid)) == SyncStatus::Synchronizable {
            a = mid;
        } else {
            b = mid;
        }
    }
    let s_star = (a + b) * R::lit(0.5);
    Ok(BoundaryDistance {
        direction: direction.clone(),
        s_star,
        tolerance: (b - a) / (R::lit(2.0) * s_star),
    })
}

/// Cheap necessary conditions: synchronization is impossible when
/// maxᵢ|ωᵢ| > γN or maxᵢωᵢ − minᵢωᵢ > 2γN. `true` only means "not excluded".
pub fn necessary_filters<R: Real>(omega: &FrequencyVector<R>, gamma: R) -> bool {
    let gn = gamma * R::of_usize(omega.n());
    let max_abs = omega
        .omega()
        .iter()
        .fold(R::zero(), |acc, &w| acc.max(w.abs()));
    max_abs <= gn && omega.spread() <= gn + gn
}

/// Test convexity of γ·S_ω on one chord: both endpoints must already be
/// synchronizable, and the verdict is membership of the midpoint (which the
/// convexity theorem predicts always true). A marginal midpoint surfaces as
/// `Degenerate` rather than a boolean.
pub fn convexity_probe<R: Real>(
    omega_a: &FrequencyVector<R>,
    omega_b: &FrequencyVector<R>,
    gamma: R,
) -> Result<bool> {
    check_gamma(gamma)?;
    if omega_a.n() != omega_b.n() {
        return Err(Error::DimensionMismatch {
            expected: omega_a.n(),
            got: omega_b.n(),
        });
    }
    for (name, omega) in [("a", omega_a), ("b", omega_b)] {
        if classify(&omega.scaled(gamma.recip())) != SyncStatus::Synchronizable {
            return Err(Error::InconsistentInput {
                reason: format!("endpoint ω_{name} is not synchronizable at γ = {gamma}"),
            });
        }
    }
    let mid = FrequencyVector::new(
        omega_a
            .omega()
            .iter()
            .zip(omega_b.omega())
            .map(|(&x, &y)| (x + y) * R::lit(0.5))
            .collect(),
    )?;
    match classify(&mid.scaled(gamma.recip())) {
        SyncStatus::Synchronizable => Ok(true),
        SyncStatus::NotSynchronizable => Ok(false),
        SyncStatus::Marginal => Err(Error::Degenerate {
            reason: "midpoint is marginal (τ ≈ 2)".to_string(),
        }),
    }
}

/// Reference τ for a decision reconstructed elsewhere (used by tests and the
/// command layer to avoid re-deriving it from the κ entries).
pub fn tau_of_solution<R: Real>(kv: &KappaVector<R>) -> TauValue<R> {
    TauValue {
        tau: tau_of_kappa(kv),
        kappa: kv.clone(),
    }
}
