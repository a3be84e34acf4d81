//! Closed and semi-closed forms for the profile integral and the sharp
//! constants at the special exponents `q ∈ {1, 2, ∞}`.
//!
//! All values carry exact integer cores (factorials, double factorials,
//! binomials); π and square roots are the only big-float steps.
//!
//! Normalization: this module fixes `F_q(β) = ∫_0^π |φ_β|^q dv` as the
//! canonical scaling. The classical section-4 profile for even `n` is
//! `2^{(n+1)/2}` times that, exposed via [`fq1_even_sum_scaled`].

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial, double_factorial, factorial, pow2};
use crate::params::Angle;
use crate::precision::{BigReal, PrecisionCtx};

/// Which closed form produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FormulaId {
    Q1Odd,
    Q1EvenSplit,
    Q1EvenSalt,
    Q2,
    QInf,
    AppBG0,
    AppBGl,
}

/// A closed-form value at context precision, tagged with its formula.
#[derive(Debug, Clone)]
pub struct ClosedFormValue {
    pub value: BigReal,
    pub formula_id: FormulaId,
}

impl ClosedFormValue {
    fn new(value: BigReal, formula_id: FormulaId) -> Self {
        Self { value, formula_id }
    }
}

fn require_odd(n: u32) -> Result<u64> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::domain(format!("expected positive odd n, got {n}")));
    }
    Ok(n as u64)
}

fn require_even(n: u32) -> Result<u64> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::domain(format!("expected positive even n, got {n}")));
    }
    Ok(n as u64)
}

fn ratio(num: &BigInt, den: &BigInt, ctx: &PrecisionCtx) -> BigReal {
    BigReal::from_bigint(num, ctx).div(&BigReal::from_bigint(den, ctx))
}

/// Sharp constant for odd `n = 2m−1` and `p = ∞`:
/// `C_n = ((2m)!)² / (n π (m!)²)`.
pub fn c_q1_odd(n: u32, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    let n64 = require_odd(n)?;
    let m = (n64 + 1) / 2;
    let num = factorial(2 * m).pow(2);
    let den = BigInt::from(n64) * factorial(m).pow(2);
    let v = ratio(&num, &den, ctx).div(&BigReal::pi(ctx));
    Ok(ClosedFormValue::new(v, FormulaId::Q1Odd))
}

/// β-independent value of `F_1(β)` for odd `n = 2m−1`:
/// `4m·C(2m,m) / (n·4^m)`.
pub fn fq1_fbeta_odd(n: u32, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    let n64 = require_odd(n)?;
    let m = (n64 + 1) / 2;
    let num = BigInt::from(4 * m) * binomial(2 * m, m);
    let den = BigInt::from(n64) * pow2(2 * m);
    Ok(ClosedFormValue::new(
        ratio(&num, &den, ctx),
        FormulaId::Q1Odd,
    ))
}

/// `F_1(β)` for even `n = 2m` via the finite sine-power sum:
/// `(1/m) Σ_{k=1}^{n+1} sin^{n+1}((kπ − β)/(n+1))`.
pub fn fq1_even_sum(n: u32, beta: Angle, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    let n64 = require_even(n)?;
    let m = n64 / 2;
    let pi = BigReal::pi(ctx);
    let beta_t = BigReal::from_f64(beta.radians, ctx);
    let np1 = BigReal::from_u64(n64 + 1, ctx);
    let mut acc = BigReal::zero(ctx);
    for k in 1..=(n64 + 1) {
        let arg = pi.mul(&BigReal::from_u64(k, ctx)).sub(&beta_t).div(&np1);
        acc = acc.add(&arg.sin().powi(n64 as i64 + 1));
    }
    let v = acc.div(&BigReal::from_u64(m, ctx));
    Ok(ClosedFormValue::new(v, FormulaId::Q1EvenSplit))
}

/// Section-4 scaling of the even-`n` profile, `2^{(n+1)/2} F_1(β)`.
pub fn fq1_even_sum_scaled(n: u32, beta: Angle, ctx: &PrecisionCtx) -> Result<BigReal> {
    let v = fq1_even_sum(n, beta, ctx)?;
    Ok(scale_section4(n, ctx).mul(&v.value))
}

/// `2^{(n+1)/2}` at context precision.
pub fn scale_section4(n: u32, ctx: &PrecisionCtx) -> BigReal {
    BigReal::from_f64(2.0, ctx).powf(&BigReal::from_f64((n as f64 + 1.0) / 2.0, ctx))
}

/// `F_1(β)` for even `n = 2m` via the cosine expansion valid for
/// `γ = β + π/2 ∈ [π/2, π]`:
///
/// `m·F(β) = Σ_{j=0}^m (−1)^j 2^{−n} C(n+1, m−j) cos((1+2j)γ/(n+1)) / sin((1+2j)π/(2(n+1)))
///           + 2 sin^{n+1}((γ − π/2)/(n+1))`.
pub fn fq1_even_salt(n: u32, beta: Angle, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    let n64 = require_even(n)?;
    let m = n64 / 2;
    let gamma_f = beta.radians + std::f64::consts::FRAC_PI_2;
    if !(std::f64::consts::FRAC_PI_2 - 1e-12..=std::f64::consts::PI + 1e-12).contains(&gamma_f) {
        return Err(Error::domain(format!(
            "cosine-expansion route needs γ = β + π/2 in [π/2, π]; got γ = {gamma_f}"
        )));
    }
    let pi = BigReal::pi(ctx);
    let half_pi = pi.mul_f64(0.5);
    let beta_t = BigReal::from_f64(beta.radians, ctx);
    let gamma = beta_t.add(&half_pi);
    let np1 = BigReal::from_u64(n64 + 1, ctx);
    let inv_2n = BigReal::one(ctx).div(&BigReal::from_bigint(&pow2(n64), ctx));

    let mut acc = BigReal::zero(ctx);
    for j in 0..=m {
        let odd = BigReal::from_u64(2 * j + 1, ctx);
        let coef = BigReal::from_bigint(&binomial(n64 + 1, m - j), ctx).mul(&inv_2n);
        let c = gamma.mul(&odd).div(&np1).cos();
        let s = pi.mul(&odd).div(&np1.mul_f64(2.0)).sin();
        let term = coef.mul(&c).div(&s);
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    // + 2 sin^{n+1}((γ − π/2)/(n+1)) = 2 sin^{n+1}(β/(n+1))
    let tail = beta_t.div(&np1).sin().powi(n64 as i64 + 1).mul_f64(2.0);
    acc = acc.add(&tail);
    let v = acc.div(&BigReal::from_u64(m, ctx));
    Ok(ClosedFormValue::new(v, FormulaId::Q1EvenSalt))
}

/// β-independent Hilbert-case profile value `F_2 = π·C(2n,n)/2^{2n+1}`.
pub fn fq2_value(n: u32, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let n64 = n as u64;
    let v = BigReal::pi(ctx).mul(&ratio(&binomial(2 * n64, n64), &pow2(2 * n64 + 1), ctx));
    Ok(ClosedFormValue::new(v, FormulaId::Q2))
}

/// Sharp constant for `p = 2`: `C_{2,n} = n!·√(C(2n,n)/π)`.
pub fn c_q2(n: u32, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let n64 = n as u64;
    let inner = BigReal::from_bigint(&binomial(2 * n64, n64), ctx).div(&BigReal::pi(ctx));
    let v = BigReal::from_bigint(&factorial(n64), ctx).mul(&inner.sqrt());
    Ok(ClosedFormValue::new(v, FormulaId::Q2))
}

/// The Hilbert-case expression `(2^n/π^{3/4})·√(Γ(n+1/2)/Γ(n+1))`, recorded
/// as `C_{2,n}/n!`. Algebraically equal to `√(C(2n,n)/π)`; evaluated here
/// through Γ ratios as an independent route.
pub fn hilbert_case_ratio(n: u32, ctx: &PrecisionCtx) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let n64 = n as u64;
    let pi = BigReal::pi(ctx);
    // Γ(n+1/2) = (2n−1)!! √π / 2^n, Γ(n+1) = n!
    let dfac = double_factorial(2 * n64 - 1)?;
    let gamma_ratio = ratio(&dfac, &(pow2(n64) * factorial(n64)), ctx).mul(&pi.sqrt());
    let pi_34 = pi.div(&pi.sqrt().sqrt());
    Ok(BigReal::from_bigint(&pow2(n64), ctx)
        .div(&pi_34)
        .mul(&gamma_ratio.sqrt()))
}

/// Sharp constant for `p = 1` (`q = ∞`): `C_{1,n} = n!·2^{n+1}/π`.
///
/// `F^{1/q}` degenerates as `q → ∞`; the value comes from
/// `sup_{β,v} |φ_β(v)| = 1`, attained in the limit at `v = π/2` with the
/// cosine factor aligned (β = 0).
pub fn c_q_infty(n: u32, ctx: &PrecisionCtx) -> Result<ClosedFormValue> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let n64 = n as u64;
    let v = BigReal::from_bigint(&(factorial(n64) * pow2(n64 + 1)), ctx).div(&BigReal::pi(ctx));
    Ok(ClosedFormValue::new(v, FormulaId::QInf))
}

/// Diagnostic only: the even-`n` constant read literally from the
/// oscillation-form theorem, `(n!/π)·max_β F_1(β)`. It sits a factor `2^n`
/// below the assembled sharp constant; both are reported, never merged.
pub fn c_q1_even_literal(n: u32, beta_star: Angle, ctx: &PrecisionCtx) -> Result<BigReal> {
    let n64 = require_even(n)?;
    let f = fq1_even_sum(n, beta_star, ctx)?;
    Ok(BigReal::from_bigint(&factorial(n64), ctx)
        .div(&BigReal::pi(ctx))
        .mul(&f.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fq_beta;
    use crate::params::{Exponent, Params};

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50)
    }

    #[test]
    fn odd_constants_match_known_values() {
        let pi = std::f64::consts::PI;
        assert!((c_q1_odd(1, &ctx()).unwrap().value.to_f64() - 4.0 / pi).abs() < 1e-15);
        assert!((c_q1_odd(3, &ctx()).unwrap().value.to_f64() - 48.0 / pi).abs() < 1e-13);
        // ((6)!)²/(5π(3!)²) = 2880/π
        assert!((c_q1_odd(5, &ctx()).unwrap().value.to_f64() - 2880.0 / pi).abs() < 1e-11);
        assert!(c_q1_odd(2, &ctx()).is_err());
    }

    #[test]
    fn odd_profile_values() {
        assert!((fq1_fbeta_odd(1, &ctx()).unwrap().value.to_f64() - 2.0).abs() < 1e-15);
        assert!((fq1_fbeta_odd(3, &ctx()).unwrap().value.to_f64() - 1.0).abs() < 1e-15);
        assert!((fq1_fbeta_odd(5, &ctx()).unwrap().value.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn odd_profile_is_flat_against_quadrature() {
        for n in [1u32, 3, 5] {
            let closed = fq1_fbeta_odd(n, &ctx()).unwrap().value.to_f64();
            let p = Params::from_n_q(n, Exponent::Finite(1.0)).unwrap();
            for beta in [0.0, 0.5, 1.1, std::f64::consts::FRAC_PI_2] {
                let q = fq_beta(&p, Angle::new(beta), 1e-12).unwrap().value;
                assert!(
                    (q - closed).abs() < 1e-10,
                    "n={n} beta={beta}: {q} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn even_sum_reproduces_section4_values() {
        let c = ctx();
        // n=2: F(0) scaled = 3√6/2, F(π/2) = 5/4 plain, 5√2/2 scaled
        let f0 = fq1_even_sum(2, Angle::new(0.0), &c).unwrap().value.to_f64();
        assert!((f0 - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-14);
        let fpi2 = fq1_even_sum(2, Angle::new(std::f64::consts::FRAC_PI_2), &c)
            .unwrap()
            .value
            .to_f64();
        assert!((fpi2 - 1.25).abs() < 1e-14);
        let scaled0 = fq1_even_sum_scaled(2, Angle::new(0.0), &c).unwrap().to_f64();
        assert!((scaled0 - 3.0 * 6f64.sqrt() / 2.0).abs() < 1e-13);
        let scaled_pi2 = fq1_even_sum_scaled(2, Angle::new(std::f64::consts::FRAC_PI_2), &c)
            .unwrap()
            .to_f64();
        assert!((scaled_pi2 - 5.0 * 2f64.sqrt() / 2.0).abs() < 1e-13);
        // n=4: scaled endpoints from the worked special case
        let s0 = fq1_even_sum_scaled(4, Angle::new(0.0), &c).unwrap().to_f64();
        assert!((s0 - 1.25 * (12.5 + 5f64.sqrt()).sqrt()).abs() < 1e-12, "{s0}");
        assert!((s0 - 4.79845).abs() < 1e-4);
    }

    #[test]
    fn even_sum_matches_quadrature() {
        let c = ctx();
        for n in [2u32, 4] {
            let p = Params::from_n_q(n, Exponent::Finite(1.0)).unwrap();
            for beta in [0.0, 0.4, 1.0, 1.5] {
                let sum = fq1_even_sum(n, Angle::new(beta), &c)
                    .unwrap()
                    .value
                    .to_f64();
                let quad = fq_beta(&p, Angle::new(beta), 1e-12).unwrap().value;
                assert!((sum - quad).abs() < 1e-10, "n={n} beta={beta}");
            }
        }
    }

    #[test]
    fn salt_route_agrees_with_split_route() {
        let c = PrecisionCtx::new(60);
        for n in [2u32, 4, 6] {
            for beta in [
                0.0,
                0.3,
                std::f64::consts::FRAC_PI_4,
                1.2,
                std::f64::consts::FRAC_PI_2,
            ] {
                let a = fq1_even_sum(n, Angle::new(beta), &c).unwrap().value;
                let b = fq1_even_salt(n, Angle::new(beta), &c).unwrap().value;
                let diff = a.sub(&b).abs().to_f64();
                assert!(diff < 1e-12, "n={n} beta={beta}: diff {diff:e}");
            }
        }
        // The worked n=4 value at β=π/2 via the cosine expansion
        let s = scale_section4(4, &c)
            .mul(
                &fq1_even_salt(4, Angle::new(std::f64::consts::FRAC_PI_2), &c)
                    .unwrap()
                    .value,
            )
            .to_f64();
        assert!((s - (381.0 / 32.0 + 5.0 * 5f64.sqrt()).sqrt()).abs() < 1e-12);
        assert!((s - 4.80485).abs() < 1e-4);
    }

    #[test]
    fn salt_rejects_gamma_outside_range() {
        assert!(fq1_even_salt(2, Angle::new(-0.3), &ctx()).is_err());
        assert!(fq1_even_salt(2, Angle::new(2.0), &ctx()).is_err());
    }

    #[test]
    fn hilbert_profile_and_constant() {
        let c = ctx();
        let pi = std::f64::consts::PI;
        assert!((fq2_value(1, &c).unwrap().value.to_f64() - pi / 4.0).abs() < 1e-15);
        assert!((fq2_value(2, &c).unwrap().value.to_f64() - 3.0 * pi / 16.0).abs() < 1e-15);
        // quadrature cross-check at q=2
        let p = Params::from_n_q(2, Exponent::Finite(2.0)).unwrap();
        let q = fq_beta(&p, Angle::new(0.83), 1e-12).unwrap().value;
        assert!((q - 3.0 * pi / 16.0).abs() < 1e-11);
    }

    #[test]
    fn hilbert_remark_expression_matches_ratio() {
        // (2^n/π^{3/4})√(Γ(n+1/2)/Γ(n+1)) = C_{2,n}/n! for n = 1..8 at 30+ digits
        let c = PrecisionCtx::new(40);
        for n in 1..=8u32 {
            let lhs = hilbert_case_ratio(n, &c).unwrap();
            let cq2 = c_q2(n, &c).unwrap().value;
            let nfac = BigReal::from_bigint(&factorial(n as u64), &c);
            let rhs = cq2.div(&nfac);
            let rel = lhs.sub(&rhs).div(&rhs).abs().to_f64();
            assert!(rel < 1e-30, "n={n}: rel {rel:e}");
        }
    }

    #[test]
    fn q_infinity_constants() {
        let pi = std::f64::consts::PI;
        assert!((c_q_infty(1, &ctx()).unwrap().value.to_f64() - 4.0 / pi).abs() < 1e-15);
        assert!((c_q_infty(2, &ctx()).unwrap().value.to_f64() - 16.0 / pi).abs() < 1e-14);
        assert!((c_q_infty(3, &ctx()).unwrap().value.to_f64() - 96.0 / pi).abs() < 1e-13);
    }

    #[test]
    fn even_literal_diagnostic_sits_2n_below() {
        let c = ctx();
        let lit = c_q1_even_literal(2, Angle::new(0.0), &c).unwrap();
        let assembled = BigReal::from_f64(2.0, &c)
            .div(&BigReal::pi(&c))
            .mul(&BigReal::from_f64(4.0, &c))
            .mul(&fq1_even_sum(2, Angle::new(0.0), &c).unwrap().value);
        let ratio = assembled.div(&lit).to_f64();
        assert!((ratio - 4.0).abs() < 1e-12);
    }
}
