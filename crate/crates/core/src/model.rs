//! The Kuramoto substrate: phase configurations, co-rotating frequency
//! vectors, the coupling map f, the Jacobian and its rank-two split, the
//! order parameter, and the gradient-flow energy.
//!
//! The model is dθᵢ/dt = ωᵢ + γ·fᵢ(θ) with fᵢ(θ) = Σⱼ sin(θⱼ−θᵢ).
//! Angles live on the covering space ℝᴺ (no wrapping); the frequency
//! vector is taken mean-zero, i.e. in the co-rotating frame.

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

/// Relative tolerance for the mean-zero check on frequency vectors.
pub const MEAN_ZERO_RTOL: f64 = 1e-12;

/// A configuration of N oscillator phases (radians, unconstrained reals).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig<R> {
    angles: Vec<R>,
}

impl<R: Real> PhaseConfig<R> {
    /// Validates n ≥ 2 and finiteness.
    pub fn new(angles: Vec<R>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::TooFewOscillators(angles.len()));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { angles })
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[R] {
        &self.angles
    }
}

/// A mean-zero frequency vector (co-rotating frame).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector<R> {
    omega: Vec<R>,
}

impl<R: Real> FrequencyVector<R> {
    /// Validates n ≥ 2, finiteness, and Σωᵢ = 0 within `MEAN_ZERO_RTOL`·N·max|ωᵢ|.
    pub fn new(omega: Vec<R>) -> Result<Self> {
        if omega.len() < 2 {
            return Err(Error::TooFewOscillators(omega.len()));
        }
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        let sum: R = omega.iter().fold(R::zero(), |acc, &w| acc + w);
        let max_abs = omega
            .iter()
            .fold(R::zero(), |acc, &w| acc.max(w.abs()));
        let tol = R::lit(MEAN_ZERO_RTOL) * R::of_usize(omega.len()) * max_abs;
        if sum.abs() > tol {
            return Err(Error::NotMeanZero {
                sum_abs: sum.abs().as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(Self { omega })
    }

    /// The zero vector (center of the synchronizable region).
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![R::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &[R] {
        &self.omega
    }

    /// Euclidean norm.
    pub fn norm(&self) -> R {
        self.omega
            .iter()
            .fold(R::zero(), |acc, &w| acc + w * w)
            .sqrt()
    }

    /// max ωᵢ − min ωᵢ, the quantity deciding Voronoi-cell membership.
    pub fn spread(&self) -> R {
        let mut lo = R::infinity();
        let mut hi = R::neg_infinity();
        for &w in &self.omega {
            lo = lo.min(w);
            hi = hi.max(w);
        }
        hi - lo
    }

    /// Componentwise scaling; mean-zero is preserved exactly.
    pub fn scaled(&self, c: R) -> Self {
        Self {
            omega: self.omega.iter().map(|&w| w * c).collect(),
        }
    }
}

/// The rank-two split of the Jacobian: J = −diag(d) + v⊗v + w⊗w with
/// dᵢ = Σₖ cos(θₖ−θᵢ), v = sin θ, w = cos θ.
///
/// Note d includes the k=i term (value 1), while the Jacobian diagonal
/// excludes it; the +1 from w⊗w + v⊗v on the diagonal reconciles the two.
#[derive(Debug, Clone)]
pub struct Rank2Parts<R> {
    pub d: Vec<R>,
    pub v: Vec<R>,
    pub w: Vec<R>,
}

/// The complex order parameter R·e^{iψ} = (1/N)·Σₙ e^{iθₙ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameter<R> {
    /// Coherence magnitude in [0, 1].
    pub r: R,
    /// Mean phase in (−π, π]; set to 0 when r < 1e−14 (undefined direction).
    pub psi: R,
}

/// Σⱼ sin θⱼ and Σⱼ cos θⱼ — the phasor sums everything O(N) here reduces to.
pub(crate) fn phasor_sums<R: Real>(theta: &PhaseConfig<R>) -> (R, R) {
    phasor_sums_raw(theta.angles())
}

/// Slice-level phasor sums, shared with the integrator's inner loop where
/// intermediate stages are not valid `PhaseConfig`s yet.
pub(crate) fn phasor_sums_raw<R: Real>(angles: &[R]) -> (R, R) {
    let mut sin_sum = R::zero();
    let mut cos_sum = R::zero();
    for &t in angles {
        sin_sum += t.sin();
        cos_sum += t.cos();
    }
    (sin_sum, cos_sum)
}

/// The coupling map fᵢ(θ) = Σⱼ sin(θⱼ−θᵢ), evaluated in O(N) via
/// sin(θⱼ−θᵢ) = sin θⱼ cos θᵢ − cos θⱼ sin θᵢ; Σᵢ fᵢ = 0 up to rounding.
pub fn coupling_map<R: Real>(theta: &PhaseConfig<R>) -> Vec<R> {
    let (sin_sum, cos_sum) = phasor_sums(theta);
    theta
        .angles()
        .iter()
        .map(|&t| sin_sum * t.cos() - cos_sum * t.sin())
        .collect()
}

/// dθ/dt = ω + γ·f(θ).
pub fn velocity_field<R: Real>(
    theta: &PhaseConfig<R>,
    omega: &FrequencyVector<R>,
    gamma: R,
) -> Result<Vec<R>> {
    check_gamma(gamma)?;
    if theta.n() != omega.n() {
        return Err(Error::DimensionMismatch {
            expected: theta.n(),
            got: omega.n(),
        });
    }
    let f = coupling_map(theta);
    Ok(omega
        .omega()
        .iter()
        .zip(f)
        .map(|(&w, fi)| w + gamma * fi)
        .collect())
}

/// The Jacobian of f: off-diagonal (i,j) = cos(θᵢ−θⱼ), diagonal
/// −Σ_{k≠i} cos(θₖ−θᵢ). Symmetric with zero row sums.
pub fn jacobian<R: Real>(theta: &PhaseConfig<R>) -> SquareMatrix<R> {
    let n = theta.n();
    let a = theta.angles();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        let mut diag = R::zero();
        for j in 0..n {
            if i != j {
                let c = (a[i] - a[j]).cos();
                m.set(i, j, c);
                diag -= c;
            }
        }
        m.set(i, i, diag);
    }
    m
}

/// The rank-two split of the Jacobian (see [`Rank2Parts`]).
pub fn rank2_parts<R: Real>(theta: &PhaseConfig<R>) -> Rank2Parts<R> {
    let (sin_sum, cos_sum) = phasor_sums(theta);
    let mut d = Vec::with_capacity(theta.n());
    let mut v = Vec::with_capacity(theta.n());
    let mut w = Vec::with_capacity(theta.n());
    for &t in theta.angles() {
        let (s, c) = (t.sin(), t.cos());
        // Σₖ cos(θₖ−θᵢ) expanded over the phasor sums.
        d.push(cos_sum * c + sin_sum * s);
        v.push(s);
        w.push(c);
    }
    Rank2Parts { d, v, w }
}

/// The order parameter (R, ψ).
pub fn order_parameter<R: Real>(theta: &PhaseConfig<R>) -> OrderParameter<R> {
    let (sin_sum, cos_sum) = phasor_sums(theta);
    let n = R::of_usize(theta.n());
    let r = (sin_sum * sin_sum + cos_sum * cos_sum).sqrt() / n;
    let r = r.min(R::one());
    let psi = if r < R::lit(1e-14) {
        R::zero()
    } else {
        sin_sum.atan2(cos_sum)
    };
    OrderParameter { r, psi }
}

/// The energy L(θ) = ⟨ω,θ⟩ + (γ/2)·Σᵢⱼ cos(θᵢ−θⱼ), whose gradient is
/// exactly the velocity field (the ½ makes ∂L/∂θₖ = ωₖ + γ·fₖ).
///
/// The double sum collapses to (Σcos θ)² + (Σsin θ)² = N²R².
pub fn energy<R: Real>(
    theta: &PhaseConfig<R>,
    omega: &FrequencyVector<R>,
    gamma: R,
) -> Result<R> {
    check_gamma(gamma)?;
    if theta.n() != omega.n() {
        return Err(Error::DimensionMismatch {
            expected: theta.n(),
            got: omega.n(),
        });
    }
    let (sin_sum, cos_sum) = phasor_sums(theta);
    let dot = omega
        .omega()
        .iter()
        .zip(theta.angles())
        .fold(R::zero(), |acc, (&w, &t)| acc + w * t);
    Ok(dot + gamma / R::lit(2.0) * (cos_sum * cos_sum + sin_sum * sin_sum))
}

/// Project onto the mean-zero hyperplane: ωᵢ = χᵢ − (1/N)Σχⱼ.
pub fn project_mean_zero<R: Real>(chi: &[R]) -> Result<FrequencyVector<R>> {
    if chi.len() < 2 {
        return Err(Error::TooFewOscillators(chi.len()));
    }
    if chi.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mean = chi.iter().fold(R::zero(), |acc, &x| acc + x) / R::of_usize(chi.len());
    FrequencyVector::new(chi.iter().map(|&x| x - mean).collect())
}

pub(crate) fn check_gamma<R: Real>(gamma: R) -> Result<()> {
    if !(gamma.is_finite() && gamma > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "coupling γ must be a positive finite real, got {gamma}"
        )));
    }
    Ok(())
}
