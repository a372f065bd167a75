//! Polytope geometry of the synchronizable region.
//!
//! The image of the cube-vertex configurations (angles split between 0 and
//! π/2) consists of the 2^N − 2 frequency vectors with i entries equal to
//! N−i and N−i entries equal to −i; these lie on ∂S_ω with τ = 2. The region
//! contains the projection of the cube [−N/2, N/2]^N onto the mean-zero
//! hyperplane — the Voronoi cell V(A_N) — whose membership test is the 1-D
//! fiber condition maxᵢωᵢ − minᵢωᵢ ≤ N.

use crate::error::{Error, Result};
use crate::model::{FrequencyVector, PhaseConfig};
use crate::scalar::Real;

/// One permutation class of boundary vertices: i angles at 0 and j = N−i at
/// π/2 map to the frequency vector (j,…,j, −i,…,−i) of squared norm i·j·N.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass<R> {
    pub i: usize,
    pub j: usize,
    pub canonical_omega: FrequencyVector<R>,
    pub norm_sq: R,
}

impl<R: Real> VertexClass<R> {
    /// The configuration θ* = (0,…,0, π/2,…,π/2) with f(θ*) = canonical_omega.
    /// The stationary configuration *for* canonical_omega (where f = −ω) is
    /// −θ*; both carry the same cosine sums and the same Jacobian.
    pub fn generating_theta(&self) -> PhaseConfig<R> {
        let mut angles = vec![R::zero(); self.i];
        angles.extend(std::iter::repeat(R::FRAC_PI_2()).take(self.j));
        PhaseConfig::new(angles).expect("vertex classes have N ≥ 2 finite angles")
    }
}

/// The vertex class with i zero angles, 1 ≤ i ≤ N−1.
pub fn vertex_class<R: Real>(n: usize, i: usize) -> Result<VertexClass<R>> {
    if n < 2 {
        return Err(Error::TooFewOscillators(n));
    }
    if i == 0 || i >= n {
        return Err(Error::InvalidParameter(format!(
            "vertex class needs 1 ≤ i ≤ N−1, got i = {i} at N = {n}"
        )));
    }
    let j = n - i;
    let mut entries = vec![R::of_usize(j); i];
    entries.extend(std::iter::repeat(-R::of_usize(i)).take(j));
    let canonical_omega = FrequencyVector::new(entries)
        .expect("i·j − j·i = 0: class vectors are mean-zero by construction");
    Ok(VertexClass {
        i,
        j,
        canonical_omega,
        norm_sq: R::of_usize(i * j * n),
    })
}

/// All 2^N − 2 boundary vertices (every permutation of every class), indexed
/// by the nonempty proper subsets of positions holding the zero angles.
pub fn enumerate_vertices<R: Real>(n: usize) -> Result<Vec<FrequencyVector<R>>> {
    if n < 2 {
        return Err(Error::TooFewOscillators(n));
    }
    if n > 12 {
        return Err(Error::InvalidParameter(format!(
            "vertex enumeration is 2^N − 2 vectors; capped at N = 12, got {n}"
        )));
    }
    let mut out = Vec::with_capacity((1usize << n) - 2);
    for mask in 1..(1u32 << n) - 1 {
        let i = mask.count_ones() as usize;
        let j = n - i;
        let entries: Vec<R> = (0..n)
            .map(|pos| {
                if mask & (1 << pos) != 0 {
                    R::of_usize(j)
                } else {
                    -R::of_usize(i)
                }
            })
            .collect();
        out.push(FrequencyVector::new(entries).expect("mean-zero by construction"));
    }
    Ok(out)
}

/// The shortest vertex ±(1,…,1,−(N−1)), with ‖·‖² = N(N−1).
pub fn omega_min<R: Real>(n: usize) -> Result<FrequencyVector<R>> {
    Ok(vertex_class(n, n - 1)?.canonical_omega)
}

/// The longest vertex: the balanced split for even N (‖·‖² = N³/4), the
/// near-balanced split i = (N−1)/2 for odd N (‖·‖² = N(N²−1)/4).
pub fn omega_max<R: Real>(n: usize) -> Result<FrequencyVector<R>> {
    let i = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
    Ok(vertex_class(n, i)?.canonical_omega)
}

/// Membership of ω in the projection of [−side/2, side/2]^N onto the
/// mean-zero hyperplane: the fiber ω + t·1 meets the cube iff the spread
/// maxᵢωᵢ − minᵢωᵢ is at most `side` (inclusive). Side N gives V(A_N).
pub fn voronoi_contains<R: Real>(omega: &FrequencyVector<R>, side: R) -> bool {
    omega.spread() <= side
}

/// Radius of the sphere inscribed in V(A_N): the unit cube's 1/√2 scaled by
/// the side N.
pub fn inscribed_radius<R: Real>(n: usize) -> R {
    R::of_usize(n) / R::lit(2.0).sqrt()
}

/// A vertex ω_N·(1,0,…,0,−1) of the dual polytope to V(A_N), together with
/// the magnitude
/// ω_N = (1/(16√2))(√(32+m²) + 3m)·√(16 + m√(32+m²) − m²), m = N−1,
/// which equals maxₓ[(N−1)sin x + sin 2x] (the generating configuration
/// holds N−2 angles at 0 with the outer two offset to ±x).
///
/// Whether these points actually lie inside S_ω is *reported* by tests, not
/// assumed: at N = 3 the magnitude 2.598 already exceeds the measured
/// boundary crossing 2.4893 along the same direction.
pub fn dual_polytope_vertex<R: Real>(n: usize) -> Result<(FrequencyVector<R>, R)> {
    if n < 3 {
        return Err(Error::TooFewOscillators(n));
    }
    let m = R::of_usize(n - 1);
    let root = (R::lit(32.0) + m * m).sqrt();
    let magnitude = (root + R::lit(3.0) * m) / (R::lit(16.0) * R::lit(2.0).sqrt())
        * (R::lit(16.0) + m * root - m * m).sqrt();
    let mut entries = vec![R::zero(); n];
    entries[0] = magnitude;
    entries[n - 1] = -magnitude;
    Ok((FrequencyVector::new(entries)?, magnitude))
}
