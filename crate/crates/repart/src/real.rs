//! Scalar abstraction letting quadrature and kernel code run in either
//! double precision or big-float precision.

use crate::precision::{BigReal, PrecisionCtx};

/// Operations the numeric kernels need from a real scalar type.
///
/// `f64` ignores the precision context; [`BigReal`] is seeded from it.
pub trait Real: Clone + PartialOrd + std::fmt::Debug {
    fn of(x: f64, ctx: &PrecisionCtx) -> Self;
    fn pi(ctx: &PrecisionCtx) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;

    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn tanh(&self) -> Self;

    /// Real power of a non-negative base with `0^0 = 1`, `0^e = 0`.
    fn powf(&self, e: &Self) -> Self;
    fn powi(&self, k: i64) -> Self;

    fn to_f64(&self) -> f64;
    fn is_finite_val(&self) -> bool;

    /// True for the double-precision scalar; ill-conditioned regimes are
    /// refused there and require a big-float context instead.
    fn is_double() -> bool;

    fn half(&self) -> Self {
        self.mul(&Self::of(0.5, &PrecisionCtx::default()))
    }
}

impl Real for f64 {
    fn of(x: f64, _ctx: &PrecisionCtx) -> Self {
        x
    }

    fn pi(_ctx: &PrecisionCtx) -> Self {
        std::f64::consts::PI
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn sub(&self, o: &Self) -> Self {
        self - o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn div(&self, o: &Self) -> Self {
        self / o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }

    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }

    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }

    fn powf(&self, e: &Self) -> Self {
        if *self == 0.0 {
            return if *e == 0.0 { 1.0 } else { 0.0 };
        }
        f64::powf(*self, *e)
    }

    fn powi(&self, k: i64) -> Self {
        f64::powi(*self, k as i32)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite_val(&self) -> bool {
        self.is_finite()
    }

    fn is_double() -> bool {
        true
    }

    fn half(&self) -> Self {
        0.5 * self
    }
}

impl Real for BigReal {
    fn of(x: f64, ctx: &PrecisionCtx) -> Self {
        BigReal::from_f64(x, ctx)
    }

    fn pi(ctx: &PrecisionCtx) -> Self {
        BigReal::pi(ctx)
    }

    fn add(&self, o: &Self) -> Self {
        BigReal::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        BigReal::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        BigReal::mul(self, o)
    }

    fn div(&self, o: &Self) -> Self {
        BigReal::div(self, o)
    }

    fn neg(&self) -> Self {
        BigReal::neg(self)
    }

    fn abs(&self) -> Self {
        BigReal::abs(self)
    }

    fn sin(&self) -> Self {
        BigReal::sin(self)
    }

    fn cos(&self) -> Self {
        BigReal::cos(self)
    }

    fn exp(&self) -> Self {
        BigReal::exp(self)
    }

    fn sqrt(&self) -> Self {
        BigReal::sqrt(self)
    }

    fn sinh(&self) -> Self {
        BigReal::sinh(self)
    }

    fn cosh(&self) -> Self {
        BigReal::cosh(self)
    }

    fn tanh(&self) -> Self {
        BigReal::tanh(self)
    }

    fn powf(&self, e: &Self) -> Self {
        BigReal::powf(self, e)
    }

    fn powi(&self, k: i64) -> Self {
        BigReal::powi(self, k)
    }

    fn to_f64(&self) -> f64 {
        BigReal::to_f64(self)
    }

    fn is_finite_val(&self) -> bool {
        self.is_finite()
    }

    fn is_double() -> bool {
        false
    }

    fn half(&self) -> Self {
        self.mul_f64(0.5)
    }
}
