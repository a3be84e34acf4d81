//! Working-precision context and an arbitrary-precision real wrapper.
//!
//! Every big-float evaluation in the crate is governed by a [`PrecisionCtx`]
//! giving the number of decimal digits to carry. [`BigReal`] wraps
//! `astro_float::BigFloat` with the context's bit precision, a shared
//! per-thread constants cache, and the handful of operations the numeric
//! modules need.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = 3.321928094887362;
/// Guard bits beyond the requested decimal digits.
const GUARD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Decimal-digit precision setting governing all big-float evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrecisionCtx {
    digits: u32,
}

impl PrecisionCtx {
    /// A context carrying `digits` decimal digits (at least 1).
    pub fn new(digits: u32) -> Self {
        Self {
            digits: digits.max(1),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits used for computations under this context.
    pub fn bits(&self) -> usize {
        (self.digits as f64 * LOG2_10).ceil() as usize + GUARD_BITS
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        Self::new(50)
    }
}

/// An arbitrary-precision real number tied to a [`PrecisionCtx`] bit width.
///
/// Binary operations carry the larger precision of the two operands.
#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    p: usize,
}

impl BigReal {
    pub fn from_f64(x: f64, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits();
        Self {
            v: BigFloat::from_f64(x, p),
            p,
        }
    }

    pub fn zero(ctx: &PrecisionCtx) -> Self {
        Self::from_f64(0.0, ctx)
    }

    pub fn one(ctx: &PrecisionCtx) -> Self {
        Self::from_f64(1.0, ctx)
    }

    pub fn from_u64(x: u64, ctx: &PrecisionCtx) -> Self {
        if x <= (1u64 << 53) {
            Self::from_f64(x as f64, ctx)
        } else {
            Self::parse_dec(&x.to_string(), ctx)
        }
    }

    /// Exact integer converted with a single rounding to context precision.
    pub fn from_bigint(x: &BigInt, ctx: &PrecisionCtx) -> Self {
        Self::parse_dec(&x.to_string(), ctx)
    }

    /// Parses a decimal-string literal (scientific notation accepted).
    pub fn parse_dec(s: &str, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits();
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        Self { v, p }
    }

    pub fn pi(ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits();
        Self {
            v: with_consts(|cc| cc.pi(p, RM)),
            p,
        }
    }

    fn lift(&self, v: BigFloat, p: usize) -> Self {
        let _ = self;
        Self { v, p }
    }

    fn join(&self, o: &Self) -> usize {
        self.p.max(o.p)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.join(o);
        self.lift(self.v.add(&o.v, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.join(o);
        self.lift(self.v.sub(&o.v, p, RM), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.join(o);
        self.lift(self.v.mul(&o.v, p, RM), p)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.join(o);
        self.lift(self.v.div(&o.v, p, RM), p)
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        self.lift(self.v.mul(&BigFloat::from_f64(x, self.p), self.p, RM), self.p)
    }

    pub fn neg(&self) -> Self {
        self.lift(self.v.neg(), self.p)
    }

    pub fn abs(&self) -> Self {
        self.lift(self.v.abs(), self.p)
    }

    pub fn sin(&self) -> Self {
        self.lift(with_consts(|cc| self.v.sin(self.p, RM, cc)), self.p)
    }

    pub fn cos(&self) -> Self {
        self.lift(with_consts(|cc| self.v.cos(self.p, RM, cc)), self.p)
    }

    pub fn exp(&self) -> Self {
        self.lift(with_consts(|cc| self.v.exp(self.p, RM, cc)), self.p)
    }

    pub fn ln(&self) -> Self {
        self.lift(with_consts(|cc| self.v.ln(self.p, RM, cc)), self.p)
    }

    pub fn sqrt(&self) -> Self {
        self.lift(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn sinh(&self) -> Self {
        self.lift(with_consts(|cc| self.v.sinh(self.p, RM, cc)), self.p)
    }

    pub fn cosh(&self) -> Self {
        self.lift(with_consts(|cc| self.v.cosh(self.p, RM, cc)), self.p)
    }

    pub fn tanh(&self) -> Self {
        self.lift(with_consts(|cc| self.v.tanh(self.p, RM, cc)), self.p)
    }

    /// Integer power; `powi(0)` is 1 (including for a zero base).
    pub fn powi(&self, k: i64) -> Self {
        if k == 0 {
            return self.lift(BigFloat::from_f64(1.0, self.p), self.p);
        }
        let raised = self.v.powi(k.unsigned_abs() as usize, self.p, RM);
        if k > 0 {
            self.lift(raised, self.p)
        } else {
            self.lift(raised.reciprocal(self.p, RM), self.p)
        }
    }

    /// Real power of a non-negative base; `0^0 = 1`, `0^e = 0` for `e > 0`.
    pub fn powf(&self, e: &Self) -> Self {
        if self.v.is_zero() {
            return if e.v.is_zero() {
                self.lift(BigFloat::from_f64(1.0, self.p), self.p)
            } else {
                self.lift(BigFloat::from_f64(0.0, self.p), self.p)
            };
        }
        let p = self.join(e);
        self.lift(with_consts(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Nearest double; values beyond f64 range collapse to 0 or infinity.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.exponent() {
            Some(e) if e > 1090 => {
                if self.v.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Some(e) if e < -1090 => 0.0,
            _ => f64::from_str(&format!("{}", self.v)).unwrap_or(f64::NAN),
        }
    }

    /// Decimal string rounded to `digits` significant digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let mut v = self.v.clone();
        let p = ((digits as f64) * LOG2_10).ceil() as usize + 4;
        if p < self.p {
            let _ = v.set_precision(p, RM);
        }
        format!("{v}")
    }

    /// Base-10 order of magnitude, or `None` for zero/non-finite values.
    pub fn log10_magnitude(&self) -> Option<f64> {
        if self.v.is_zero() || !self.is_finite() {
            return None;
        }
        self.v.exponent().map(|e| e as f64 / LOG2_10)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.v.cmp(&other.v), Some(0))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|s| s.cmp(&0))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_decimal_string(20))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_round_trips_through_f64() {
        let ctx = PrecisionCtx::new(50);
        let pi = BigReal::pi(&ctx);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn high_precision_cancellation_survives() {
        let ctx = PrecisionCtx::new(120);
        let tiny = BigReal::parse_dec("1e-100", &ctx);
        let a = BigReal::pi(&ctx);
        let b = a.add(&tiny);
        let d = b.sub(&a);
        let rel = d.sub(&tiny).div(&tiny).abs().to_f64();
        assert!(rel < 1e-15, "rel = {rel}");
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let ctx = PrecisionCtx::new(40);
        let x = BigReal::from_f64(1.7, &ctx);
        let direct = x.mul(&x).mul(&x);
        assert!((x.powi(3).sub(&direct)).abs().to_f64() < 1e-38);
        assert!((x.powi(-2).to_f64() - 1.7f64.powi(-2)).abs() < 1e-15);
    }

    #[test]
    fn zero_powers_follow_convention() {
        let ctx = PrecisionCtx::new(40);
        let z = BigReal::zero(&ctx);
        let e = BigReal::from_f64(2.5, &ctx);
        assert_eq!(z.powf(&e).to_f64(), 0.0);
        assert_eq!(z.powf(&BigReal::zero(&ctx)).to_f64(), 1.0);
        assert_eq!(z.powi(0).to_f64(), 1.0);
    }

    #[test]
    fn bigint_conversion_is_faithful() {
        let ctx = PrecisionCtx::new(80);
        let n = BigInt::from(3u32).pow(100);
        let x = BigReal::from_bigint(&n, &ctx);
        let back = x.ln().div(&BigReal::from_f64(3.0, &ctx).ln()).to_f64();
        assert!((back - 100.0).abs() < 1e-12);
    }
}
