//! Problem parameters: the derivative order and the conjugate exponent pair.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An extended real in `[1, ∞]` used for the Hardy exponent `p` and its
/// conjugate `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Finite value, or `None` for `∞`.
    pub fn finite(&self) -> Option<f64> {
        match self {
            Exponent::Finite(x) => Some(*x),
            Exponent::Infinity => None,
        }
    }

    /// `1/x` with the convention `1/∞ = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Exponent::Finite(x) => 1.0 / x,
            Exponent::Infinity => 0.0,
        }
    }

    /// Conjugate exponent: `1/p + 1/q = 1`, `1 ↔ ∞`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(x) if *x == 1.0 => Exponent::Infinity,
            Exponent::Finite(x) => Exponent::Finite(x / (x - 1.0)),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match self {
            Exponent::Infinity => Ok(()),
            Exponent::Finite(x) if x.is_finite() && *x >= 1.0 => Ok(()),
            Exponent::Finite(x) => Err(Error::domain(format!("{name} = {x} must lie in [1, inf]"))),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(x) => write!(f, "{x}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// An angle in radians. The canonical range depends on the role: `β ∈ [0, π]`
/// for profile work, `v ∈ [0, π]` for the integration variable, and
/// `α ∈ [0, 2π)` for the boundary-kernel integral.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle {
    pub radians: f64,
}

impl Angle {
    pub fn new(radians: f64) -> Self {
        Self { radians }
    }
}

impl From<f64> for Angle {
    fn from(radians: f64) -> Self {
        Self { radians }
    }
}

/// The problem triple `(n, p, q)` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    n: u32,
    p: Exponent,
    q: Exponent,
}

impl Params {
    /// Builds the triple from the derivative order and the Hardy exponent.
    pub fn from_n_p(n: u32, p: Exponent) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("derivative order n must be >= 1"));
        }
        p.validate("p")?;
        Ok(Self {
            n,
            p,
            q: p.conjugate(),
        })
    }

    /// Builds the triple from the derivative order and the conjugate
    /// exponent of the kernel integral.
    pub fn from_n_q(n: u32, q: Exponent) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("derivative order n must be >= 1"));
        }
        q.validate("q")?;
        Ok(Self {
            n,
            p: q.conjugate(),
            q,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn q(&self) -> Exponent {
        self.q
    }

    /// Sine exponent `α = (n+1) − 2/q`; for `q = ∞` this is `n+1`.
    pub fn alpha(&self) -> f64 {
        (self.n as f64 + 1.0) - 2.0 * self.q.reciprocal()
    }

    /// Finite `q` or a domain error for the `q = ∞` paths that cannot take a
    /// power mean.
    pub fn finite_q(&self) -> Result<f64> {
        self.q
            .finite()
            .ok_or_else(|| Error::domain("operation requires q < inf (p > 1)"))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, p={}, q={})", self.n, self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugacy_conventions() {
        let a = Params::from_n_p(1, Exponent::Infinity).unwrap();
        assert_eq!(a.q(), Exponent::Finite(1.0));
        let b = Params::from_n_p(1, Exponent::Finite(1.0)).unwrap();
        assert!(b.q().is_infinite());
        let c = Params::from_n_p(3, Exponent::Finite(2.0)).unwrap();
        assert_eq!(c.q(), Exponent::Finite(2.0));
        let d = Params::from_n_q(2, Exponent::Finite(4.0)).unwrap();
        assert!((d.p().finite().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_stays_above_n_minus_one() {
        for n in 1..=6 {
            for q in [1.0, 1.25, 2.0, 10.0] {
                let prm = Params::from_n_q(n, Exponent::Finite(q)).unwrap();
                assert!(prm.alpha() >= n as f64 - 1.0 - 1e-12);
            }
            let prm = Params::from_n_p(n, Exponent::Finite(1.0)).unwrap();
            assert!((prm.alpha() - (n as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Params::from_n_p(0, Exponent::Infinity).is_err());
        assert!(Params::from_n_p(1, Exponent::Finite(0.5)).is_err());
        assert!(Params::from_n_q(1, Exponent::Finite(f64::NAN)).is_err());
    }
}
