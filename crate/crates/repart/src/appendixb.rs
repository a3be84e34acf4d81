//! High-precision study of the sine-power sums
//! `f(β) = Σ_{k=1}^s sin^s((−β + kπ)/s)`:
//! the finite Fourier expansion, the periodic approximation with
//! double-factorial coefficients, the residual cascade and its `27^{−s/2}`
//! asymptotic.
//!
//! For even `s` the sum is the constant `2/B(1/2, s/2)`. For odd `s` it
//! exceeds that constant by the tiny amounts this module quantifies, with
//! cancellations of 70+ digits at `s = 99`; every operation here runs under
//! an explicit [`PrecisionCtx`].

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial, double_factorial, factorial, pow2};
use crate::precision::{BigReal, PrecisionCtx};

/// The sum parameters: odd `s = 2m+1` and the offset β.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SumSpec {
    pub s: u64,
    pub beta: f64,
}

impl SumSpec {
    pub fn new(s: u64, beta: f64) -> Result<Self> {
        if s < 3 || s % 2 == 0 {
            return Err(Error::domain(format!("s must be odd and >= 3, got {s}")));
        }
        Ok(Self { s, beta })
    }

    pub fn m(&self) -> u64 {
        (self.s - 1) / 2
    }
}

/// Evaluation point for the residual cascade, in the `x = β − π/2`
/// coordinate of the even extension `g(x) = f(x + π/2)`.
#[derive(Debug, Clone, Copy)]
pub enum CascadePoint {
    /// The parity-appropriate maximum: `x = 0` (β = π/2) for even `m`,
    /// `x = ±π/2` (β = 0) for odd `m`.
    MaximumPoint,
    Beta(f64),
}

/// `Σ_{k=1}^s sin^s((−β + kπ)/s)` for any `s ≥ 2` at an exact big-float β.
pub fn sine_power_sum(s: u64, beta: &BigReal, ctx: &PrecisionCtx) -> BigReal {
    let pi = BigReal::pi(ctx);
    let s_t = BigReal::from_u64(s, ctx);
    let mut acc = BigReal::zero(ctx);
    for k in 1..=s {
        let arg = pi.mul(&BigReal::from_u64(k, ctx)).sub(beta).div(&s_t);
        acc = acc.add(&arg.sin().powi(s as i64));
    }
    acc
}

/// `f(β)` for the odd-`s` spec, at working precision.
pub fn f_sum(spec: &SumSpec, ctx: &PrecisionCtx) -> BigReal {
    sine_power_sum(spec.s, &BigReal::from_f64(spec.beta, ctx), ctx)
}

/// `g₀ = 2/B(1/2, s/2)` with an exact integer core.
///
/// Odd `s = 2m+1`: `2^{m+1} m! / (π (2m−1)!!)`.
/// Even `s = 2v`:  `(s−1)!! / (2^{v−1} (v−1)!)`, the constant value of the
/// sum for even `s`.
pub fn g0(s: u64, ctx: &PrecisionCtx) -> Result<BigReal> {
    if s < 2 {
        return Err(Error::domain("s must be >= 2"));
    }
    if s % 2 == 1 {
        let m = (s - 1) / 2;
        let num = pow2(m + 1) * factorial(m);
        let den = if m == 0 {
            BigInt::from(1u32)
        } else {
            double_factorial(2 * m - 1)?
        };
        Ok(BigReal::from_bigint(&num, ctx)
            .div(&BigReal::from_bigint(&den, ctx))
            .div(&BigReal::pi(ctx)))
    } else {
        let v = s / 2;
        let num = double_factorial(s - 1)?;
        let den = pow2(v - 1) * factorial(v - 1);
        Ok(BigReal::from_bigint(&num, ctx).div(&BigReal::from_bigint(&den, ctx)))
    }
}

/// Fourier coefficient of the periodic approximation:
/// `g_l = (−1)^{m+l−1} (4/π) s! ((2l−1)s)!! / ((2l−1)((2l+1)s)!!)`.
pub fn gl(s: u64, l: u64, ctx: &PrecisionCtx) -> Result<BigReal> {
    if s < 3 || s % 2 == 0 {
        return Err(Error::domain(format!("s must be odd and >= 3, got {s}")));
    }
    if l == 0 {
        return Err(Error::domain("l must be >= 1; the constant term is g0"));
    }
    let m = (s - 1) / 2;
    let num = BigInt::from(4u32) * factorial(s) * double_factorial((2 * l - 1) * s)?;
    let den = BigInt::from(2 * l - 1) * double_factorial((2 * l + 1) * s)?;
    let mut v = BigReal::from_bigint(&num, ctx)
        .div(&BigReal::from_bigint(&den, ctx))
        .div(&BigReal::pi(ctx));
    if (m + l - 1) % 2 == 1 {
        v = v.neg();
    }
    Ok(v)
}

fn cascade_beta(s: u64, point: CascadePoint, ctx: &PrecisionCtx) -> BigReal {
    match point {
        CascadePoint::Beta(b) => BigReal::from_f64(b, ctx),
        CascadePoint::MaximumPoint => {
            let m = (s - 1) / 2;
            if m % 2 == 0 {
                BigReal::pi(ctx).mul_f64(0.5)
            } else {
                BigReal::zero(ctx)
            }
        }
    }
}

/// Successive residuals `f − g₀`, `f − g₀ − g₁ cos 2x`, … at the requested
/// point, `x = β − π/2`.
///
/// Errors with `PrecisionInsufficient` once cancellation has consumed all
/// but 10 of the context digits.
pub fn residual_cascade(
    s: u64,
    point: CascadePoint,
    levels: u32,
    ctx: &PrecisionCtx,
) -> Result<Vec<BigReal>> {
    if levels < 1 {
        return Err(Error::domain("levels must be >= 1"));
    }
    let beta = cascade_beta(s, point, ctx);
    let x = beta.sub(&BigReal::pi(ctx).mul_f64(0.5));
    let f = sine_power_sum(s, &beta, ctx);
    let f_mag = f.log10_magnitude().unwrap_or(0.0);
    let mut out = Vec::with_capacity(levels as usize);
    let mut resid = f.sub(&g0(s, ctx)?);
    for level in 1..=levels {
        let consumed = match resid.log10_magnitude() {
            Some(mag) => (f_mag - mag).max(0.0),
            None => f64::INFINITY,
        };
        if consumed as u32 + 10 > ctx.digits() {
            return Err(Error::PrecisionInsufficient {
                needed: consumed as u32 + 10,
                available: ctx.digits(),
            });
        }
        out.push(resid.clone());
        if level < levels {
            let c = x.mul_f64(2.0 * level as f64).cos();
            resid = resid.sub(&gl(s, level as u64, ctx)?.mul(&c));
        }
    }
    Ok(out)
}

/// Difference between the finite Fourier expansion
/// `(−1)^m 2^{−s} Σ_{j=0}^s (−1)^j C(s,j) cos(tX)/sin(πt/2s)`, `t = s−2j`,
/// `X = x/s`, and the even extension `g(x) = f(x + π/2)` it represents.
pub fn fourier_expansion_check(s: u64, x: f64, ctx: &PrecisionCtx) -> Result<BigReal> {
    if s < 3 || s % 2 == 0 {
        return Err(Error::domain(format!("s must be odd and >= 3, got {s}")));
    }
    let m = (s - 1) / 2;
    let pi = BigReal::pi(ctx);
    let x_t = BigReal::from_f64(x, ctx);
    let cap_x = x_t.div(&BigReal::from_u64(s, ctx));
    let two_s_inv = BigReal::one(ctx).div(&BigReal::from_bigint(&pow2(s), ctx));

    let mut acc = BigReal::zero(ctx);
    for j in 0..=s {
        let t = s as i64 - 2 * j as i64;
        let t_t = BigReal::from_f64(t as f64, ctx);
        let num = cap_x.mul(&t_t).cos();
        let den = pi
            .mul(&t_t)
            .div(&BigReal::from_u64(2 * s, ctx))
            .sin();
        let term = BigReal::from_bigint(&binomial(s, j), ctx)
            .mul(&num)
            .div(&den);
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    let mut expansion = acc.mul(&two_s_inv);
    if m % 2 == 1 {
        expansion = expansion.neg();
    }

    let beta = x_t.add(&pi.mul_f64(0.5));
    let g = sine_power_sum(s, &beta, ctx);
    Ok(expansion.sub(&g).abs())
}

/// Residual of the shift identity `f(β) − f(β+π) = 2 sin^s(β/s)`.
pub fn shift_identity_check(s: u64, beta: f64, ctx: &PrecisionCtx) -> Result<BigReal> {
    if s < 3 || s % 2 == 0 {
        return Err(Error::domain(format!("s must be odd and >= 3, got {s}")));
    }
    let pi = BigReal::pi(ctx);
    let beta_t = BigReal::from_f64(beta, ctx);
    let lhs = sine_power_sum(s, &beta_t, ctx).sub(&sine_power_sum(s, &beta_t.add(&pi), ctx));
    let rhs = beta_t
        .div(&BigReal::from_u64(s, ctx))
        .sin()
        .powi(s as i64)
        .mul_f64(2.0);
    Ok(lhs.sub(&rhs).abs())
}

/// For each odd `s`, the decay base `((4/π) s! s!!/(3s)!!)^{−2/s}`, which
/// approaches 27 as `s` grows.
pub fn asymptotic_probe(s_list: &[u64], ctx: &PrecisionCtx) -> Result<Vec<(u64, f64)>> {
    let mut out = Vec::with_capacity(s_list.len());
    let mut prev = 0u64;
    for &s in s_list {
        if s % 2 == 0 || s < 3 {
            return Err(Error::domain(format!("s must be odd and >= 3, got {s}")));
        }
        if s <= prev {
            return Err(Error::domain("s_list must be strictly ascending"));
        }
        prev = s;
        let magnitude = gl(s, 1, ctx)?.abs();
        let rate = magnitude
            .ln()
            .mul_f64(-2.0 / s as f64)
            .exp()
            .to_f64();
        out.push((s, rate));
    }
    Ok(out)
}

/// Precision suggested for an `s`, `levels` residual run: the cascade at
/// level `l` cancels roughly `0.72·s·(1 + (l−1)/2)` digits.
pub fn suggested_digits(s: u64, levels: u32) -> u32 {
    let cancel = 0.72 * s as f64 * (1.0 + 0.5 * levels.saturating_sub(1) as f64);
    (25.0 + cancel).ceil() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_s_sum_is_constant() {
        // s=4: f(β) = 2/B(1/2, 2) = 3/2 at any β
        let ctx = PrecisionCtx::new(60);
        let g = g0(4, &ctx).unwrap();
        assert!((g.to_f64() - 1.5).abs() < 1e-15);
        for beta in [0.0, 0.37, 1.9, 3.0] {
            let f = sine_power_sum(4, &BigReal::from_f64(beta, &ctx), &ctx);
            let diff = f.sub(&g).abs().to_f64();
            assert!(diff < 1e-55, "beta={beta}: {diff:e}");
        }
    }

    #[test]
    fn small_odd_values() {
        let ctx = PrecisionCtx::new(60);
        // s=3, β=0: sin³(π/3)+sin³(2π/3)+sin³(π) = 3√3/4
        let f = f_sum(&SumSpec::new(3, 0.0).unwrap(), &ctx);
        assert!((f.to_f64() - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-15);
        // g0(3) = 4/π via the Beta identity
        let g = g0(3, &ctx).unwrap();
        assert!((g.to_f64() - 4.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SumSpec::new(4, 0.0).is_err());
        assert!(SumSpec::new(1, 0.0).is_err());
        let ctx = PrecisionCtx::new(40);
        assert!(gl(4, 1, &ctx).is_err());
        assert!(gl(5, 0, &ctx).is_err());
        assert!(fourier_expansion_check(6, 0.0, &ctx).is_err());
    }

    #[test]
    fn fourier_expansion_represents_the_shifted_sum() {
        let ctx = PrecisionCtx::new(60);
        for (s, x) in [(3u64, 0.0), (3, 0.3), (7, 0.3), (7, 1.1)] {
            let diff = fourier_expansion_check(s, x, &ctx).unwrap().to_f64();
            assert!(diff < 1e-45, "s={s} x={x}: {diff:e}");
        }
    }

    #[test]
    fn shift_identity_small_cases() {
        let ctx = PrecisionCtx::new(60);
        for (s, beta) in [(3u64, 0.0), (5, 1.1), (7, 2.0)] {
            let diff = shift_identity_check(s, beta, &ctx).unwrap().to_f64();
            assert!(diff < 1e-45, "s={s} beta={beta}: {diff:e}");
        }
    }

    #[test]
    fn g_extension_symmetries() {
        // g(−x) = g(x) and g(x + sπ) = −g(x) for g(x) = f(x + π/2)
        let ctx = PrecisionCtx::new(60);
        let s = 5u64;
        let pi = BigReal::pi(&ctx);
        let g = |x: &BigReal| sine_power_sum(s, &x.add(&pi.mul_f64(0.5)), &ctx);
        for xv in [0.21, 0.9, 2.2] {
            let x = BigReal::from_f64(xv, &ctx);
            let even_diff = g(&x).sub(&g(&x.neg())).abs().to_f64();
            assert!(even_diff < 1e-50, "{even_diff:e}");
            let shifted = g(&x.add(&pi.mul_f64(s as f64)));
            let anti_diff = shifted.add(&g(&x)).abs().to_f64();
            assert!(anti_diff < 1e-50, "{anti_diff:e}");
        }
    }

    #[test]
    fn s5_first_residual_is_tiny_and_positive_structure() {
        // m=2 even: maximum at β=π/2; residual after g0 of order g1
        let ctx = PrecisionCtx::new(40);
        let resid = residual_cascade(5, CascadePoint::Beta(0.0), 1, &ctx).unwrap();
        let g1 = gl(5, 1, &ctx).unwrap();
        // at β=0 (x=−π/2) the cosine factor is cos(−π)=−1
        let predicted = g1.neg();
        let ratio = resid[0].div(&predicted).to_f64();
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn cascade_reports_insufficient_precision() {
        let ctx = PrecisionCtx::new(40);
        match residual_cascade(99, CascadePoint::MaximumPoint, 1, &ctx) {
            Err(Error::PrecisionInsufficient { needed, available }) => {
                assert!(needed > available);
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn suggested_digits_are_conservative() {
        assert!(suggested_digits(99, 3) >= 190);
        assert!(suggested_digits(5, 1) >= 25);
    }

    #[test]
    fn probe_rates_climb_toward_27() {
        let ctx = PrecisionCtx::new(40);
        let rates = asymptotic_probe(&[19, 49, 99], &ctx).unwrap();
        assert!(rates.windows(2).all(|w| w[1].1 > w[0].1));
        let last = rates.last().unwrap().1;
        assert!((last - 27.0).abs() / 27.0 < 0.10, "{last}");
        assert!(asymptotic_probe(&[9, 7], &ctx).is_err());
    }
}
