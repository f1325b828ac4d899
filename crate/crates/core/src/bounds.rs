//! Closed-form learning-quality bounds.
//!
//! `psi = 2 d (e D / r)^r` bounds the chance that some designated friend's
//! realized subnetwork escapes its own neighborhood, and
//! `delta = psi + 18 / (sqrt(d - 1) (2p - 1 - psi))` is the resulting error
//! bound, meaningful when `p >= (1 + psi) / 2`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Length;

/// `2 d (e D / r)^r`, with `psi = 2d` at `r = 0`.
pub fn psi(d: u64, r: u64, cap_d: u64) -> f64 {
    if r == 0 {
        return 2.0 * d as f64;
    }
    2.0 * d as f64 * (E * cap_d as f64 / r as f64).powf(r as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    pub d: u64,
    pub r: u64,
    pub cap_d: u64,
    pub psi: f64,
    /// The formula value. Meaningless unless `valid`.
    pub delta: f64,
    /// `2p - 1 - psi > 0`.
    pub valid: bool,
    /// Invalid, or `delta >= 1`.
    pub vacuous: bool,
}

impl BoundReport {
    /// The certified lower bound `1 - delta` on learning quality, if any.
    pub fn quality_floor(&self) -> Option<f64> {
        (!self.vacuous).then(|| 1.0 - self.delta)
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::validation(format!("precision {p} must lie in (1/2, 1]")));
    }
    Ok(())
}

pub fn delta_bound(p: f64, d: u64, r: u64, cap_d: u64) -> Result<BoundReport> {
    check_p(p)?;
    if d < 2 {
        return Err(Error::validation(format!("delta needs d >= 2, got {d}")));
    }
    let psi = psi(d, r, cap_d);
    let gap = 2.0 * p - 1.0 - psi;
    let delta = psi + 18.0 / (((d - 1) as f64).sqrt() * gap);
    let valid = gap > 0.0;
    Ok(BoundReport { p, d, r, cap_d, psi, delta, valid, vacuous: !valid || delta >= 1.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationBound {
    pub r: u64,
    pub cap_d: u64,
    /// `2 (e D / r)^r`: bound on the probability that the realized subnetwork
    /// leaves the ball of radius `r - 1`.
    pub failure: f64,
    pub vacuous: bool,
}

pub fn localization_bound(r: u64, cap_d: u64) -> Result<LocalizationBound> {
    if r == 0 {
        return Err(Error::validation("localization bound needs r >= 1"));
    }
    let failure = 2.0 * (E * cap_d as f64 / r as f64).powf(r as f64);
    Ok(LocalizationBound { r, cap_d, failure, vacuous: failure >= 1.0 })
}

/// Radius of the girth route, `floor((g - 3) / 2)`. Acyclic graphs get an
/// unbounded radius, where `psi` vanishes.
pub fn girth_radius(girth: Length) -> u64 {
    match girth {
        Length::Finite(g) => g.saturating_sub(3) as u64 / 2,
        Length::Infinite => u64::from(u32::MAX),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub alpha: f64,
    pub lambda2_abs: f64,
    /// `2 / sqrt(alpha) + (1 - alpha) lambda^2 / (alpha^3 D^(3/2))`.
    pub factor: f64,
    /// `delta(p, D, floor((g - 3) / 2), D)`.
    pub inner: BoundReport,
    /// `1 - factor * delta`, unclamped.
    pub raw: f64,
    /// `raw` clamped at 0.
    pub value: f64,
    pub vacuous: bool,
}

/// Learning-quality floor for an induced subnetwork on an `alpha` fraction of
/// a `D`-regular graph with girth `g` and second eigenvalue `lambda2_abs`.
pub fn lemma3_bound(alpha: f64, cap_d: u64, girth: Length, lambda2_abs: f64, p: f64) -> Result<Lemma3Report> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::validation(format!("alpha {alpha} must lie in (0, 1]")));
    }
    if !(lambda2_abs >= 0.0) || !lambda2_abs.is_finite() {
        return Err(Error::validation(format!("|lambda2| = {lambda2_abs} must be finite and non-negative")));
    }
    let inner = delta_bound(p, cap_d, girth_radius(girth), cap_d)?;
    let dd = cap_d as f64;
    let factor = 2.0 / alpha.sqrt() + (1.0 - alpha) * lambda2_abs * lambda2_abs / (alpha.powi(3) * dd.powf(1.5));
    let raw = 1.0 - factor * inner.delta;
    let vacuous = inner.vacuous || !(raw > 0.0);
    Ok(Lemma3Report { alpha, lambda2_abs, factor, inner, raw, value: raw.max(0.0), vacuous })
}

/// `sqrt(delta / alpha)`.
pub fn theorem4_bound(delta: f64, alpha: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::validation(format!("delta {delta} must be non-negative")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::validation(format!("alpha {alpha} must lie in (0, 1)")));
    }
    Ok((delta / alpha).sqrt())
}
