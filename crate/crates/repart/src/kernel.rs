//! The kernel profile `φ_β`, its kinks, the profile integral `F_q(β)`, the
//! boundary-kernel integral `I_α(r)` and the pointwise sharp factor
//! `H_{n,p}(r)`.
//!
//! `φ_β(v) = sin^{(n+1)−2/q} v · cos[v(n+1) + β − (π/2)(n−1)]` on `[0, π]`.
//! `F_q(β)` is its `q`-th power integral, computed per panel between
//! consecutive cosine-factor zeros so the quadrature never crosses a kink
//! of `|φ_β|^q`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Angle, Params};
use crate::precision::PrecisionCtx;
use crate::quad::{integrate_panels, QuadResult};
use crate::real::Real;

/// Largest radius accepted by the double-precision `i_alpha`; the
/// `(1−r²)^{1−(1+n)q}` growth destroys its error estimates beyond this.
pub const MAX_DOUBLE_RADIUS: f64 = 0.999;

/// Evaluates `φ_β(v)`.
///
/// For `q = ∞` the sine exponent degenerates to `n+1` (the sup form).
pub fn phi_eval(params: &Params, beta: Angle, v: Angle) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&v.radians) {
        return Err(Error::domain(format!(
            "integration variable v = {} outside [0, pi]",
            v.radians
        )));
    }
    let n = params.n() as f64;
    let alpha = params.alpha();
    let s = v.radians.sin().max(0.0);
    let shift = beta.radians - std::f64::consts::FRAC_PI_2 * (n - 1.0);
    Ok(Real::powf(&s, &alpha) * (v.radians * (n + 1.0) + shift).cos())
}

/// Zeros of the cosine factor of `φ_β` strictly inside `(0, π)`, sorted
/// ascending. These are exactly the points where `|φ_β|^q` loses smoothness
/// for non-even `q`.
pub fn kink_points(params: &Params, beta: Angle) -> Vec<Angle> {
    let n = params.n() as f64;
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    // v_j = (π/2 + jπ + (π/2)(n−1) − β) / (n+1)
    let jmin = -2 - 2 * params.n() as i64;
    let jmax = 2 + 2 * params.n() as i64;
    for j in jmin..=jmax {
        let v = (pi / 2.0 + j as f64 * pi + pi / 2.0 * (n - 1.0) - beta.radians) / (n + 1.0);
        if v > 1e-14 && v < pi - 1e-14 {
            out.push(Angle::new(v));
        }
    }
    out.sort_by(|a, b| a.radians.partial_cmp(&b.radians).unwrap());
    out.dedup_by(|a, b| (a.radians - b.radians).abs() < 1e-13);
    out
}

/// `|φ_β(v)|^q` as a scalar-generic closure ingredient.
fn phi_abs_pow<T: Real>(n: f64, q: f64, shift: &T, v: &T, ctx: &PrecisionCtx) -> T {
    // |φ|^q = sin^{(n+1)q−2} v · |cos(v(n+1) + shift)|^q
    let e = T::of((n + 1.0) * q - 2.0, ctx);
    let qt = T::of(q, ctx);
    let np1 = T::of(n + 1.0, ctx);
    let s = v.sin().abs();
    let c = v.mul(&np1).add(shift).cos().abs();
    s.powf(&e).mul(&c.powf(&qt))
}

/// Panel edges for `F_q(β)`: `{0, kinks, π}` plus pre-splits at the interior
/// peak of `|φ_β|` when `q` is large enough that `|φ|^q` spikes.
fn fq_edges<T: Real>(params: &Params, beta: &T, q: f64, ctx: &PrecisionCtx) -> Vec<T> {
    let n = params.n() as f64;
    let pi_t = T::pi(ctx);
    let np1 = T::of(n + 1.0, ctx);
    let beta_f = beta.to_f64();

    let mut edges_f: Vec<f64> = vec![0.0];
    edges_f.extend(kink_points(params, Angle::new(beta_f)).iter().map(|a| a.radians));
    edges_f.push(std::f64::consts::PI);

    if q >= 16.0 {
        // |φ|^q concentrates in O(1/√q) neighborhoods of the per-panel peaks
        // of |φ|; splitting there puts each spike at a panel edge, where the
        // double-exponential nodes cluster.
        let shift = beta_f - std::f64::consts::FRAC_PI_2 * (n - 1.0);
        let phi_abs = |v: f64| {
            let s = v.sin().max(0.0);
            Real::powf(&s, &params.alpha()) * ((n + 1.0) * v + shift).cos().abs()
        };
        let mut extra = Vec::new();
        for w in edges_f.windows(2) {
            let (a, b) = (w[0], w[1]);
            let peak = golden_max_f64(&phi_abs, a, b, 1e-10);
            if peak > a + 1e-9 && peak < b - 1e-9 {
                extra.push(peak);
            }
        }
        edges_f.extend(extra);
        edges_f.sort_by(|x, y| x.partial_cmp(y).unwrap());
        edges_f.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    }

    // Rebuild the analytically known edges exactly in T; peak splits stay
    // at double accuracy, which only moves a panel boundary.
    let mut edges: Vec<T> = Vec::with_capacity(edges_f.len());
    for (i, &ef) in edges_f.iter().enumerate() {
        if i == 0 {
            edges.push(T::of(0.0, ctx));
        } else if i + 1 == edges_f.len() {
            edges.push(pi_t.clone());
        } else if let Some(j) = kink_index(params, beta_f, ef) {
            // v_j = (π/2 + jπ + (π/2)(n−1) − β)/(n+1)
            let half = T::of(0.5, ctx);
            let num = pi_t
                .mul(&half)
                .add(&pi_t.mul(&T::of(j as f64, ctx)))
                .add(&pi_t.mul(&half).mul(&T::of(n - 1.0, ctx)))
                .sub(beta);
            edges.push(num.div(&np1));
        } else {
            edges.push(T::of(ef, ctx));
        }
    }
    edges
}

fn kink_index(params: &Params, beta_f: f64, v: f64) -> Option<i64> {
    let n = params.n() as f64;
    let pi = std::f64::consts::PI;
    let j = ((v * (n + 1.0) - pi / 2.0 - pi / 2.0 * (n - 1.0) + beta_f) / pi).round();
    let vj = (pi / 2.0 + j * pi + pi / 2.0 * (n - 1.0) - beta_f) / (n + 1.0);
    ((vj - v).abs() < 1e-9).then_some(j as i64)
}

/// Golden-section maximizer on `[a, b]` (unimodal assumption; best effort).
pub(crate) fn golden_max_f64(f: &impl Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > xtol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// `F_q(β) = ∫_0^π |φ_β(v)|^q dv` in the requested scalar type.
pub fn fq_beta_in<T: Real>(
    params: &Params,
    beta: &T,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<(T, f64, usize)> {
    let q = params.finite_q()?;
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let n = params.n() as f64;
    let pi_t = T::pi(ctx);
    // shift = β − (π/2)(n−1), built from the exact π of the context
    let shift = beta.sub(
        &pi_t
            .mul(&T::of(0.5, ctx))
            .mul(&T::of(n - 1.0, ctx)),
    );
    let edges = fq_edges::<T>(params, beta, q, ctx);
    let integrand = |v: &T| phi_abs_pow(n, q, &shift, v, ctx);
    let sum = integrate_panels(&integrand, &edges, ctx, tol)?;
    Ok((sum.value, sum.err, sum.panels))
}

/// `F_q(β)` with double-precision quadrature and panel diagnostics.
pub fn fq_beta(params: &Params, beta: Angle, tol: f64) -> Result<QuadResult> {
    let ctx = PrecisionCtx::default();
    let (value, err, panels) = fq_beta_in::<f64>(params, &beta.radians, tol, &ctx)?;
    Ok(QuadResult {
        value,
        err_estimate: err,
        panels,
        kinks: kink_points(params, beta).iter().map(|a| a.radians).collect(),
    })
}

/// `F_q(β)` under a big-float precision context.
pub fn fq_beta_ctx(
    params: &Params,
    beta: Angle,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<crate::precision::BigReal> {
    let beta_t = crate::precision::BigReal::from_f64(beta.radians, ctx);
    Ok(fq_beta_in(params, &beta_t, tol, ctx)?.0)
}

/// Boundary-kernel integrand `Re(e^{i(α+t)} / (r − e^{it})^{n+1})`.
fn kernel_re<T: Real>(n: u32, alpha: &T, r: &T, t: &T) -> T {
    // den = (r − e^{it})^{n+1}; Re(num/den) = Re(num·conj(den))/|den|²
    let (ct, st) = (t.cos(), t.sin());
    let mut dre = r.sub(&ct);
    let mut dim = st.neg();
    let (bre, bim) = (dre.clone(), dim.clone());
    for _ in 0..n {
        let nre = dre.mul(&bre).sub(&dim.mul(&bim));
        let nim = dre.mul(&bim).add(&dim.mul(&bre));
        dre = nre;
        dim = nim;
    }
    let at = alpha.add(t);
    let (nre, nim) = (at.cos(), at.sin());
    let den2 = dre.mul(&dre).add(&dim.mul(&dim));
    nre.mul(&dre).add(&nim.mul(&dim)).div(&den2)
}

/// `I_α(r) = ∫_0^{2π} |Re(e^{i(α+t)}/(r − e^{it})^{n+1})|^q dt` in the
/// requested scalar type. Kinks of `|·|^q` are located by a sign scan and
/// refined by bisection before panel splitting.
pub fn i_alpha_in<T: Real>(
    params: &Params,
    alpha: &T,
    r: &T,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<(T, f64, usize, Vec<f64>)> {
    let q = params.finite_q()?;
    let rf = r.to_f64();
    if !(0.0..1.0).contains(&rf) {
        return Err(Error::domain(format!("radius r = {rf} must lie in [0, 1)")));
    }
    if T::is_double() && rf > MAX_DOUBLE_RADIUS {
        return Err(Error::domain(format!(
            "r = {rf} > {MAX_DOUBLE_RADIUS} is ill-conditioned in double precision; use a big-float context"
        )));
    }
    let n = params.n();
    let two_pi = 2.0 * std::f64::consts::PI;
    let alpha_f = alpha.to_f64();

    // Sign scan for the zeros of the kernel's real part.
    let g = |t: f64| kernel_re::<f64>(n, &alpha_f, &rf, &t);
    let scan = 2048 * (n as usize + 1);
    let mut zeros_f = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_v = g(0.0);
    for i in 1..=scan {
        let t = two_pi * i as f64 / scan as f64;
        let v = g(t);
        if prev_v == 0.0 {
            zeros_f.push(prev_t);
        } else if prev_v.signum() != v.signum() && v != 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_t, t, prev_v);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = g(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo.signum() == fm.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros_f.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_v = v;
    }
    zeros_f.retain(|z| *z > 1e-13 && *z < two_pi - 1e-13);
    zeros_f.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zeros_f.dedup_by(|a, b| (*a - *b).abs() < 1e-11);

    let mut edges: Vec<T> = Vec::with_capacity(zeros_f.len() + 2);
    edges.push(T::of(0.0, ctx));
    for &z in &zeros_f {
        if T::is_double() {
            edges.push(T::of(z, ctx));
        } else {
            // Polish the double-precision bracket down to context precision.
            let gt = |t: &T| kernel_re(n, alpha, r, t);
            let mut lo = T::of(z - 1e-9, ctx);
            let mut hi = T::of(z + 1e-9, ctx);
            let mut flo = gt(&lo);
            if flo.mul(&gt(&hi)).to_f64() > 0.0 {
                edges.push(T::of(z, ctx));
                continue;
            }
            for _ in 0..(ctx.bits() + 8) {
                let mid = lo.add(&hi).half();
                let fm = gt(&mid);
                if (flo.to_f64() >= 0.0) == (fm.to_f64() >= 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            edges.push(lo.add(&hi).half());
        }
    }
    edges.push(T::pi(ctx).mul(&T::of(2.0, ctx)));

    let qt = T::of(q, ctx);
    let integrand = |t: &T| kernel_re(n, alpha, r, t).abs().powf(&qt);
    let sum = integrate_panels(&integrand, &edges, ctx, tol)?;
    Ok((sum.value, sum.err, sum.panels, zeros_f))
}

/// `I_α(r)` with double-precision quadrature.
pub fn i_alpha(params: &Params, alpha: Angle, r: f64, tol: f64) -> Result<QuadResult> {
    let ctx = PrecisionCtx::default();
    let (value, err, panels, kinks) = i_alpha_in::<f64>(params, &alpha.radians, &r, tol, &ctx)?;
    Ok(QuadResult {
        value,
        err_estimate: err,
        panels,
        kinks,
    })
}

fn factorial_f64(n: u32) -> f64 {
    (2..=n as u64).map(|k| k as f64).product()
}

/// Sharp pointwise factor `H_{n,p}(r) = (n!/π) sup_α I_α(r)^{1/q}`.
///
/// For `p = 1` (`q = ∞`) the power mean degenerates to the essential sup of
/// the kernel, `(1−r)^{−(n+1)}`.
pub fn h_factor(params: &Params, r: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius r = {r} must lie in [0, 1)")));
    }
    let n = params.n();
    let nf = factorial_f64(n);
    let pi = std::f64::consts::PI;
    if params.q().is_infinite() {
        return Ok(nf / pi * (1.0 - r).powi(-(n as i32 + 1)));
    }
    let q = params.finite_q()?;
    if r > MAX_DOUBLE_RADIUS {
        return Err(Error::domain(format!(
            "r = {r} > {MAX_DOUBLE_RADIUS} is ill-conditioned in double precision"
        )));
    }
    // I_{α+π} = I_α, so the sup over [0, 2π) reduces to [0, π).
    let ctx = PrecisionCtx::default();
    let eval = |alpha: f64| -> Result<f64> {
        Ok(i_alpha_in::<f64>(params, &alpha, &r, tol, &ctx)?.0)
    };
    let grid = 48usize;
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(grid);
    for i in 0..grid {
        let a = pi * i as f64 / grid as f64;
        let v = eval(a)?;
        if v > best.1 {
            best = (i, v);
        }
        values.push(v);
    }
    let lo = pi * (best.0 as f64 - 1.0) / grid as f64;
    let hi = pi * (best.0 as f64 + 1.0) / grid as f64;
    let failed = std::cell::Cell::new(false);
    let refined = golden_max_f64(
        &|a| match eval(a.rem_euclid(pi)) {
            Ok(v) => v,
            Err(_) => {
                failed.set(true);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        1e-9,
    );
    if failed.get() {
        return Err(Error::Convergence {
            achieved: f64::NAN,
            requested: tol,
            panels: 0,
        });
    }
    let sup = eval(refined.rem_euclid(pi))?.max(best.1);
    Ok(nf / pi * Real::powf(&sup, &(1.0 / q)))
}

/// `f_α(z, e^{is}) = |Re[e^{i(α+s)}(z−e^{is})^{n−1}]|^q · |z−e^{is}|^{2q−2}`.
pub fn f_alpha_point(params: &Params, alpha: f64, z: Complex64, s: f64) -> Result<f64> {
    let q = params.finite_q()?;
    let n = params.n();
    let e = Complex64::from_polar(1.0, s);
    let w = z - e;
    let rot = Complex64::from_polar(1.0, alpha + s);
    let pw = w.powi(n as i32 - 1);
    let re = (rot * pw).re.abs();
    Ok(Real::powf(&re, &q) * Real::powf(&w.norm(), &(2.0 * q - 2.0)))
}

/// `∫_0^{2π} f_α(z, e^{is}) ds` by a periodic trapezoid rule.
///
/// The integrand is continuous with at worst `|·|^q` kinks, so the uniform
/// rule converges; `grid` around 8192 gives ~1e-8 accuracy for the spot
/// checks this feeds.
pub fn f_alpha_disk_integral(
    params: &Params,
    alpha: f64,
    z: Complex64,
    grid: usize,
) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut acc = 0.0;
    for i in 0..grid {
        let s = two_pi * i as f64 / grid as f64;
        acc += f_alpha_point(params, alpha, z, s)?;
    }
    Ok(acc * two_pi / grid as f64)
}
