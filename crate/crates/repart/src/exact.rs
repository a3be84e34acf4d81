//! Exact big-integer combinatorics: factorials, double factorials and
//! binomial coefficients.
//!
//! `u!!` is used only for positive odd `u` and means the product of all odd
//! integers in `[1, u]`, i.e. `u!! = u!/(2^v v!)` with `u = 2v + 1`.

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Product of all odd integers in `[1, u]` for odd `u ≥ 1`.
pub fn double_factorial(u: u64) -> Result<BigInt> {
    if u == 0 || u % 2 == 0 {
        return Err(Error::domain(format!(
            "double factorial is defined here only for positive odd arguments, got {u}"
        )));
    }
    let mut acc = BigInt::from(1u32);
    let mut k = u;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0u32);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1u32);
    for i in 0..k {
        num *= n - i;
        num /= i + 1;
    }
    num
}

/// 2^k as an exact integer.
pub fn pow2(k: u64) -> BigInt {
    BigInt::from(1u32) << k
}
