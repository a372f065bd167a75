//! The two special functions the probability bounds need: erf and the
//! chi-distribution CDF, both built on one kernel — the regularized lower
//! incomplete gamma P(a,x) — evaluated by its series for x < a+1 and by a
//! Lentz continued fraction for the complement elsewhere. Absolute error is
//! well under 1e−12 in double precision across the tested range.

use crate::scalar::Real;

/// ln Γ(z) for z > 0 by the Lanczos approximation (g = 7, 9 terms).
fn ln_gamma<R: Real>(z: R) -> R {
    debug_assert!(z > R::zero(), "ln_gamma needs z > 0");
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let z = z - R::one();
    let mut acc = R::lit(0.999_999_999_999_809_93);
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += R::lit(c) / (z + R::of_usize(i + 1));
    }
    let t = z + R::lit(7.5);
    R::lit(0.5) * (R::lit(2.0) * R::PI()).ln() + (z + R::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Series for P(a,x) = γ(a,x)/Γ(a), convergent (and used) for x < a + 1.
fn lower_gamma_series<R: Real>(a: R, x: R) -> R {
    let mut term = a.recip();
    let mut sum = term;
    let mut denom = a;
    for _ in 0..500 {
        denom += R::one();
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * R::epsilon() {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Lentz continued fraction for Q(a,x) = 1 − P(a,x), used for x ≥ a + 1.
fn upper_gamma_cf<R: Real>(a: R, x: R) -> R {
    let tiny = R::lit(1e-300);
    let mut b = x + R::one() - a;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..500 {
        let an = -R::of_usize(i) * (R::of_usize(i) - a);
        b += R::lit(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h *= delta;
        if (delta - R::one()).abs() < R::epsilon() {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized lower incomplete gamma P(a,x), a > 0, x ≥ 0.
pub(crate) fn reg_lower_gamma<R: Real>(a: R, x: R) -> R {
    if x <= R::zero() {
        return R::zero();
    }
    if x < a + R::one() {
        lower_gamma_series(a, x)
    } else {
        (R::one() - upper_gamma_cf(a, x)).max(R::zero()).min(R::one())
    }
}

/// Error function, via erf(x) = sign(x)·P(½, x²); the complement path keeps
/// full precision when |erf| is close to 1.
pub fn erf<R: Real>(x: R) -> R {
    if x == R::zero() {
        return R::zero();
    }
    let mag = if x.abs() < R::lit(2.0) {
        reg_lower_gamma(R::lit(0.5), x * x)
    } else {
        R::one() - upper_gamma_cf(R::lit(0.5), x * x)
    };
    if x > R::zero() {
        mag
    } else {
        -mag
    }
}

/// Complementary error function; computed directly from the continued
/// fraction for x ≥ 2 so that values like erfc(10) ≈ 2·10⁻⁴⁵ keep full
/// relative precision instead of cancelling against 1.
pub fn erfc<R: Real>(x: R) -> R {
    if x < R::zero() {
        return R::lit(2.0) - erfc(-x);
    }
    if x >= R::lit(2.0) {
        upper_gamma_cf(R::lit(0.5), x * x)
    } else {
        R::one() - erf(x)
    }
}

/// CDF of the chi distribution with k degrees of freedom:
/// P(‖Z‖ ≤ x) = P(k/2, x²/2) for a standard k-dimensional Gaussian Z.
pub fn chi_cdf<R: Real>(k: usize, x: R) -> R {
    assert!(k >= 1, "chi distribution needs at least one degree of freedom");
    if x <= R::zero() {
        return R::zero();
    }
    reg_lower_gamma(R::of_usize(k) * R::lit(0.5), x * x * R::lit(0.5))
}
