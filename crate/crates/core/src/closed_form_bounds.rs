//! Closed form GRH bounds for `T_e(K)`, and the cap `T_0` used by the
//! multistep search.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numberfield::{FieldInvariants, NormTable};
use crate::special_functions::Constants;

/// `2πe^γ`.
pub fn two_pi_e_gamma() -> f64 {
    2.0 * std::f64::consts::PI * Constants::EULER_GAMMA.exp()
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} must exceed 1")));
    }
    Ok(())
}

/// `γ + log 2π - log t/(t-1) + log(1 - 1/t)`.
fn correction(t: f64) -> f64 {
    Constants::gamma_log_2pi() - t.ln() / (t - 1.0) + (-1.0 / t).ln_1p()
}

/// `r(L, n, t) = 2/(1 - 1/t) · (L + log t - (γ + log 2π - log t/(t-1) + log(1 - 1/t)) n)`.
pub fn r_bound(l: f64, n: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(2.0 / (1.0 - 1.0 / t) * (l + t.ln() - correction(t) * n as f64))
}

/// `ℓ(n, t)`, the value of `L` for which `r(L, n, t) = √t`.
pub fn ell_inverse_scale(n: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(0.5 * (t.sqrt() - 1.0 / t.sqrt()) - t.ln() + correction(t) * n as f64)
}

/// The `t > 1` with `ℓ(n, t) = log_disc`, by bisection on `log t`.
pub fn solve_ell(log_disc: f64, n: usize) -> Result<f64> {
    if !log_disc.is_finite() {
        return Err(Error::Domain(format!("log Δ = {log_disc} is not finite")));
    }
    let (mut lo, mut hi) = (1e-12f64, 1.0f64);
    while ell_inverse_scale(n, hi.exp())? < log_disc {
        lo = hi;
        hi *= 2.0;
        if hi > 700.0 {
            return Err(Error::Domain(format!("ℓ(n, t) = {log_disc} has no solution in range")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ell_inverse_scale(n, mid.exp())? < log_disc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}

fn check_log_disc_teasynt(log_disc: f64) -> Result<()> {
    if !(log_disc > 1.0) || !log_disc.is_finite() {
        return Err(Error::Domain(format!("log Δ = {log_disc} must exceed 1")));
    }
    Ok(())
}

/// Square roots of the two asymptotic bounds before squaring: the general
/// one, and the one valid when `log Δ >= n 2^n`.
pub fn teasynt_roots(log_disc: f64, n: usize) -> Result<(f64, Option<f64>)> {
    check_log_disc_teasynt(log_disc)?;
    let nf = n as f64;
    let base = log_disc + log_disc.ln() - Constants::gamma_log_2pi() * nf + 1.0;
    let general = 2.0 * (base + (nf + 1.0) * (7.0 * log_disc).ln() / log_disc);
    let large = (log_disc >= nf * 2f64.powi(n as i32)).then_some(2.0 * base);
    Ok((general, large))
}

pub fn teasynt_bounds(log_disc: f64, n: usize) -> Result<(f64, Option<f64>)> {
    let (g, l) = teasynt_roots(log_disc, n)?;
    Ok((g * g, l.map(|v| v * v)))
}

/// `4(1 + (2πe^γ)^{-n})² log²Δ`, and whether `log Δ <= (2πe^γ)^n / e` so that
/// `4 log²Δ` holds.
pub fn coro2_bound(log_disc: f64, n: usize) -> (f64, bool) {
    let c = two_pi_e_gamma().powi(n as i32);
    let k = 1.0 + 1.0 / c;
    (4.0 * k * k * log_disc * log_disc, log_disc <= c / std::f64::consts::E)
}

/// Closed forms for the two and three step searches.
pub fn multistep_closed_bounds(log_disc: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let two = (2.456 * log_disc - 5.623 * nf + 14.0).max(13f64.sqrt());
    let three = (2.193 * log_disc - 6.19 * nf + 16.0).max(32f64.sqrt());
    (two * two, three * three)
}

pub fn bach401(log_disc: f64) -> f64 {
    4.01 * log_disc * log_disc
}

/// `Σ_{N𝔭^m <= t} (1/N𝔭^m - 1/t) log N𝔭`.
fn phielong_sum(norms: &NormTable, t: f64) -> Result<f64> {
    let floor = t.floor();
    if floor >= norms.t_max() {
        return Err(Error::Coverage { needed: floor + 1.0, available: norms.t_max() });
    }
    let k = norms.count_norm_below(floor as u64 + 1);
    Ok(norms.sum_lp_inv(k) - norms.sum_lp(k) / t)
}

/// `max(√T_0, r(log Δ, n, T_0) - 4/(1 - 1/T_0)² Σ_{N𝔭^m <= T_0} (1/N𝔭^m - 1/T_0) log N𝔭)`,
/// an upper bound for `√T_e(K)`.
pub fn phielong_rhs(inv: &FieldInvariants, norms: &NormTable, t0: f64) -> Result<f64> {
    let r = r_bound(inv.log_disc, inv.n, t0)?;
    let s = phielong_sum(norms, t0)?;
    let c = 1.0 - 1.0 / t0;
    Ok(t0.sqrt().max(r - 4.0 / (c * c) * s))
}

/// `f_K(n, t)`, chosen so that the bound above reads
/// `max(√T_0, 2/(1 - 1/T_0) (log Δ + f_K(n, T_0)))`.
pub fn phielong_aux(n: usize, t: f64, norms: &NormTable) -> Result<f64> {
    check_t(t)?;
    let s = phielong_sum(norms, t)?;
    Ok(t.ln() - correction(t) * n as f64 - 2.0 / (1.0 - 1.0 / t) * s)
}

/// The cap `T_0` from the preamble of the multistep search: the general
/// asymptotic bound when `log Δ < n 2^n`, the large discriminant one
/// otherwise, then the minimum with `4.01 log²Δ`. A non-positive root means
/// the asymptotic bound says nothing and only `4.01 log²Δ` is used.
pub fn bound_cap_t0(log_disc: f64, n: usize) -> Result<f64> {
    let (general, large) = teasynt_roots(log_disc, n)?;
    let root = large.unwrap_or(general);
    let b = bach401(log_disc);
    Ok(if root > 0.0 { (root * root).min(b) } else { b })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub teasynt_general: f64,
    pub teasynt_large_disc: Option<f64>,
    pub coro2: f64,
    pub bach401: f64,
    pub two_step: f64,
    pub three_step: f64,
    #[serde(rename = "cap_T0")]
    pub cap_t0: f64,
}

impl BoundReport {
    pub fn new(log_disc: f64, n: usize) -> Result<Self> {
        let (teasynt_general, teasynt_large_disc) = teasynt_bounds(log_disc, n)?;
        let (two_step, three_step) = multistep_closed_bounds(log_disc, n);
        Ok(BoundReport {
            teasynt_general,
            teasynt_large_disc,
            coro2: coro2_bound(log_disc, n).0,
            bach401: bach401(log_disc),
            two_step,
            three_step,
            cap_t0: bound_cap_t0(log_disc, n)?,
        })
    }
}
