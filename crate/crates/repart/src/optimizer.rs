//! Maximization of `F_q` over `β ∈ [0, π/2]`, endpoint stationarity checks
//! and the monotonicity scanner for the conjecture grid.
//!
//! `F_q(β) = F_q(π−β)` makes `[0, π/2]` the full search domain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{fq_beta, fq_beta_in, golden_max_f64};
use crate::params::{Angle, Params};
use crate::precision::{BigReal, PrecisionCtx};

/// Relative spread below which a profile is reported flat.
pub const FLATNESS_THRESHOLD: f64 = 1e-9;
/// β-tolerance of the golden-section refinement.
pub const BETA_XTOL: f64 = 1e-10;
/// Default β-grid size.
pub const DEFAULT_GRID: usize = 257;

/// Sampled map `β ↦ F_q(β)` over `[0, π/2]` with its refined argmax.
#[derive(Debug, Clone, Serialize)]
pub struct BetaProfile {
    pub params: Params,
    /// Strictly increasing β grid covering both endpoints, with F values.
    pub grid: Vec<(f64, f64)>,
    pub argmax_bracket: (f64, f64),
    pub max_value: f64,
    /// Refined argmax; 0 by convention when the profile is flat.
    pub beta_star: f64,
    pub flat: bool,
    /// Set when the two endpoint values agree to within the flatness scale
    /// but the profile is not flat; both endpoints are then of interest.
    pub endpoint_tie: bool,
}

/// Direction classification of a sampled profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Increasing,
    Decreasing,
    Flat,
    NonMonotone,
}

/// Direction the conjecture predicts for a `(n, q)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Prediction {
    NonDecreasing,
    NonIncreasing,
    Decreasing,
    /// `(n+1)q/2` is an integer, where the parity rule's intent is
    /// ambiguous; both readings are reported.
    AmbiguousParity,
}

/// Scanner verdict for one `(n, q)` pair.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub params: Params,
    pub classification: Classification,
    pub resolution: usize,
    /// Present iff the classification is `NonMonotone`: a β pair bracketing
    /// opposite significant steps.
    pub witness: Option<(f64, f64)>,
    pub predicted: Prediction,
    /// `None` when the prediction is ambiguous or the profile is flat.
    pub observed_matches_prediction: Option<bool>,
    /// Refined argmax (0 for flat profiles).
    pub argmax_beta: f64,
    pub f_at_zero: f64,
    pub f_at_half_pi: f64,
}

/// Evaluates `F_q` on a uniform grid over `[0, π/2]` and refines the best
/// bracket by golden section.
pub fn profile(params: &Params, gridsize: usize, tol: f64) -> Result<BetaProfile> {
    if gridsize < 3 {
        return Err(Error::domain("profile grid needs at least 3 points"));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut grid = Vec::with_capacity(gridsize);
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..gridsize {
        let beta = half_pi * i as f64 / (gridsize - 1) as f64;
        let v = fq_beta(params, Angle::new(beta), tol)?.value;
        if v > best.1 {
            best = (i, v);
        }
        grid.push((beta, v));
    }
    let fmax = best.1;
    let fmin = grid.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    let scale = fmax.abs().max(1e-300);
    let flat = (fmax - fmin) <= FLATNESS_THRESHOLD * scale;
    let endpoint_tie = !flat && (grid[0].1 - grid[gridsize - 1].1).abs() <= 10.0 * tol * scale;

    if flat {
        return Ok(BetaProfile {
            params: *params,
            grid,
            argmax_bracket: (0.0, 0.0),
            max_value: fmax,
            beta_star: 0.0,
            flat,
            endpoint_tie: false,
        });
    }

    let lo = if best.0 == 0 { 0.0 } else { grid[best.0 - 1].0 };
    let hi = if best.0 + 1 == gridsize {
        half_pi
    } else {
        grid[best.0 + 1].0
    };
    let failure = std::cell::Cell::new(false);
    let f = |beta: f64| match fq_beta(params, Angle::new(beta.clamp(0.0, half_pi)), tol) {
        Ok(r) => r.value,
        Err(_) => {
            failure.set(true);
            f64::NEG_INFINITY
        }
    };
    let refined = golden_max_f64(&f, lo, hi, BETA_XTOL).clamp(0.0, half_pi);
    if failure.get() {
        return Err(Error::Convergence {
            achieved: f64::NAN,
            requested: tol,
            panels: 0,
        });
    }
    let f_refined = fq_beta(params, Angle::new(refined), tol)?.value;
    // Refinement never reports below the best grid value.
    let (beta_star, max_value) = if f_refined >= fmax {
        (refined, f_refined)
    } else {
        (grid[best.0].0, fmax)
    };
    Ok(BetaProfile {
        params: *params,
        grid,
        argmax_bracket: (lo, hi),
        max_value,
        beta_star,
        flat,
        endpoint_tie,
    })
}

/// Central-difference estimates of `F_q'` at `β = 0` and `β = π/2`.
///
/// The `β = 0` stencil uses the symmetry extension `F_q(−β) = F_q(β)`
/// implied by `F_q(β) = F_q(π−β)` together with π-periodicity in β.
pub fn stationarity_check(params: &Params, h: f64, tol: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::domain("step h must lie in (0, 1e-3]"));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let fp = fq_beta(params, Angle::new(h), tol)?.value;
    let fm = fq_beta(params, Angle::new(-h), tol)?.value;
    let d0 = (fp - fm) / (2.0 * h);
    let gp = fq_beta(params, Angle::new(half_pi + h), tol)?.value;
    let gm = fq_beta(params, Angle::new(half_pi - h), tol)?.value;
    let dh = (gp - gm) / (2.0 * h);
    Ok((d0, dh))
}

fn predict(n: u32, q: f64) -> Prediction {
    if q > 2.0 {
        return Prediction::Decreasing;
    }
    let x = (n as f64 + 1.0) * q / 2.0;
    if (x - x.round()).abs() < 1e-9 {
        return Prediction::AmbiguousParity;
    }
    if (x.floor() as i64) % 2 == 0 {
        Prediction::NonDecreasing
    } else {
        Prediction::NonIncreasing
    }
}

/// Classifies monotonicity of each `(n, q)` profile at the given grid
/// resolution, attaching the conjectured direction for comparison.
/// Discrepancies are reported, never asserted.
pub fn scan_conjecture(
    n_list: &[u32],
    q_list: &[f64],
    resolution: usize,
    tol: f64,
) -> Result<Vec<MonotonicityReport>> {
    if resolution < 16 {
        return Err(Error::domain("scan resolution must be at least 16"));
    }
    let mut out = Vec::with_capacity(n_list.len() * q_list.len());
    for &n in n_list {
        for &q in q_list {
            let params = Params::from_n_q(n, crate::params::Exponent::Finite(q))?;
            let prof = profile(&params, resolution, tol)?;
            let values: Vec<f64> = prof.grid.iter().map(|&(_, v)| v).collect();
            let scale = values.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
            // Per-step noise allowance: 10 × quadrature tolerance.
            let noise = 10.0 * tol * scale;
            let classification = if prof.flat {
                Classification::Flat
            } else {
                let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
                let any_up = diffs.iter().any(|&d| d > noise);
                let any_down = diffs.iter().any(|&d| d < -noise);
                match (any_up, any_down) {
                    (true, false) => Classification::Increasing,
                    (false, true) => Classification::Decreasing,
                    (true, true) => Classification::NonMonotone,
                    (false, false) => Classification::Flat,
                }
            };
            let witness = if classification == Classification::NonMonotone {
                let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
                let up = diffs
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(i, _)| i)
                    .unwrap();
                let down = diffs
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(i, _)| i)
                    .unwrap();
                let (a, b) = (up.min(down), up.max(down) + 1);
                Some((prof.grid[a].0, prof.grid[b].0))
            } else {
                None
            };
            let predicted = predict(n, q);
            let observed_matches_prediction = match (classification, predicted) {
                (_, Prediction::AmbiguousParity) | (Classification::Flat, _) => None,
                (Classification::Increasing, Prediction::NonDecreasing) => Some(true),
                (Classification::Decreasing, Prediction::NonIncreasing)
                | (Classification::Decreasing, Prediction::Decreasing) => Some(true),
                _ => Some(false),
            };
            out.push(MonotonicityReport {
                params,
                classification,
                resolution,
                witness,
                predicted,
                observed_matches_prediction,
                argmax_beta: prof.beta_star,
                f_at_zero: prof.grid[0].1,
                f_at_half_pi: prof.grid[prof.grid.len() - 1].1,
            });
        }
    }
    Ok(out)
}

/// Maximizes `F_q` over `[0, π/2]` in big-float arithmetic. Returns
/// `(β*, F(β*))`; for flat profiles β* is 0.
pub fn max_fq_big(
    params: &Params,
    gridsize: usize,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<(BigReal, BigReal)> {
    if gridsize < 3 {
        return Err(Error::domain("profile grid needs at least 3 points"));
    }
    let half_pi = BigReal::pi(ctx).mul_f64(0.5);
    let eval = |beta: &BigReal| -> Result<BigReal> {
        Ok(fq_beta_in::<BigReal>(params, beta, tol, ctx)?.0)
    };
    let mut best: Option<(usize, BigReal, BigReal)> = None;
    let mut grid = Vec::with_capacity(gridsize);
    let mut fmin: Option<BigReal> = None;
    for i in 0..gridsize {
        let beta = half_pi.mul_f64(i as f64 / (gridsize - 1) as f64);
        let v = eval(&beta)?;
        if best.as_ref().map_or(true, |(_, _, bv)| v > *bv) {
            best = Some((i, beta.clone(), v.clone()));
        }
        if fmin.as_ref().map_or(true, |m| v < *m) {
            fmin = Some(v.clone());
        }
        grid.push((beta, v));
    }
    let (bi, _, fmax) = best.unwrap();
    let spread = fmax.sub(fmin.as_ref().unwrap()).to_f64().abs();
    if spread <= FLATNESS_THRESHOLD * fmax.to_f64().abs().max(1e-300) {
        return Ok((BigReal::zero(ctx), grid[0].1.clone()));
    }

    // Golden-section refinement in big-float β.
    let inv_phi = BigReal::from_f64(5.0, ctx)
        .sqrt()
        .sub(&BigReal::one(ctx))
        .mul_f64(0.5);
    let mut lo = if bi == 0 {
        BigReal::zero(ctx)
    } else {
        grid[bi - 1].0.clone()
    };
    let mut hi = if bi + 1 == gridsize {
        half_pi.clone()
    } else {
        grid[bi + 1].0.clone()
    };
    let mut x1 = hi.sub(&hi.sub(&lo).mul(&inv_phi));
    let mut x2 = lo.add(&hi.sub(&lo).mul(&inv_phi));
    let mut f1 = eval(&x1)?;
    let mut f2 = eval(&x2)?;
    while hi.sub(&lo).to_f64() > BETA_XTOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2.clone();
            f1 = f2.clone();
            x2 = lo.add(&hi.sub(&lo).mul(&inv_phi));
            f2 = eval(&x2)?;
        } else {
            hi = x2;
            x2 = x1.clone();
            f2 = f1.clone();
            x1 = hi.sub(&hi.sub(&lo).mul(&inv_phi));
            f1 = eval(&x1)?;
        }
    }
    let mid = lo.add(&hi).mul_f64(0.5);
    let fm = eval(&mid)?;
    if fm >= fmax {
        Ok((mid, fm))
    } else {
        let (_, b, v) = best_entry(&grid);
        Ok((b, v))
    }
}

fn best_entry(grid: &[(BigReal, BigReal)]) -> (usize, BigReal, BigReal) {
    let mut bi = 0usize;
    for i in 1..grid.len() {
        if grid[i].1 > grid[bi].1 {
            bi = i;
        }
    }
    (bi, grid[bi].0.clone(), grid[bi].1.clone())
}
