//! Occupation numbers, the mono-energetic state and fugacity bookkeeping.
//!
//! A mono-energetic gas has every particle at momentum `p0`, so `kT = p0²/2m`,
//! `βε = 1` and `λ = (4π)^{1/2} ħ / p0`. These are taken as exact
//! definitions here. The condensate fraction `⟨n0⟩/N` is fixed at zero,
//! which makes the Bose branch obey `z' = g_{3/2}(z)`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regime::{Branch, FermiSeries};
use crate::special_functions::{self, Fugacity, SeriesParams};

/// Physical constants in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalUnits {
    hbar: f64,
    mass: f64,
    boltzmann: f64,
}

impl NaturalUnits {
    pub fn new(hbar: f64, mass: f64, boltzmann: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("boltzmann", boltzmann)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            mass,
            boltzmann,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }
}

impl Default for NaturalUnits {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            boltzmann: 1.0,
        }
    }
}

/// Thermodynamic bundle for a gas whose particles all carry momentum `p0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonoEnergeticState {
    pub p0: f64,
    pub temperature: f64,
    /// Thermal de Broglie wavelength.
    pub lambda: f64,
    /// `β ε_{p0}`, identically 1.
    pub beta_eps: f64,
}

impl MonoEnergeticState {
    /// `(2πħ²/(m k T))^{1/2}`, the general thermal-wavelength formula.
    pub fn thermal_wavelength(units: &NaturalUnits, temperature: f64) -> f64 {
        (2.0 * PI * units.hbar * units.hbar / (units.mass * units.boltzmann * temperature)).sqrt()
    }
}

/// Fugacity `z`, reduced fugacity `z' = λ³/v` and their ratio `b = z'/z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FugacityPair {
    pub z: f64,
    pub z_prime: f64,
    pub b: f64,
}

impl FugacityPair {
    /// Builds the pair on the given branch with zero condensate fraction:
    /// `z'` is the branch's polylogarithm at `z`.
    ///
    /// At `z = 0` the pair is `(0, 0, 1)`, using the small-`z` limit of `b`.
    pub fn on_branch(z: f64, branch: Branch, params: &SeriesParams) -> Result<Self> {
        let z = Fugacity::new(z)?.get();
        if z == 0.0 {
            return Ok(Self::dilute_limit());
        }
        let z_prime = branch_series(z, branch, params)?;
        Ok(Self {
            z,
            z_prime,
            b: z_prime / z,
        })
    }

    pub fn dilute_limit() -> Self {
        Self {
            z: 0.0,
            z_prime: 0.0,
            b: 1.0,
        }
    }
}

/// Particle count, volume and specific volume `v = V/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationScenario {
    pub total_count: f64,
    pub volume: f64,
    pub specific_volume: f64,
}

impl NormalizationScenario {
    pub fn new(total_count: f64, volume: f64) -> Result<Self> {
        if !(total_count > 0.0 && volume > 0.0) {
            return Err(Error::domain("particle count and volume must be positive"));
        }
        Ok(Self {
            total_count,
            volume,
            specific_volume: volume / total_count,
        })
    }
}

fn check_unit_fugacity(z: f64) -> Result<f64> {
    Fugacity::new(z).map(Fugacity::get)
}

/// Bose occupation `1 / (z^{-1} e^{βε} - 1)`.
///
/// Diverges at `z = 1, βε = 0`, which is reported as [`Error::Singularity`].
pub fn occupation_bose(z: f64, beta_eps: f64) -> Result<f64> {
    let z = check_unit_fugacity(z)?;
    if !(beta_eps >= 0.0) {
        return Err(Error::domain(format!("beta_eps = {beta_eps} must be >= 0")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    // z^{-1} e^{βε} - 1 = expm1(βε - ln z), accurate near the singularity.
    let denom = (beta_eps - z.ln()).exp_m1();
    if denom <= 0.0 {
        return Err(Error::Singularity { z, beta_eps });
    }
    Ok(1.0 / denom)
}

/// Fermi occupation `1 / (z^{-1} e^{βε} + 1)`, always in `[0, 1)`.
pub fn occupation_fermi(z: f64, beta_eps: f64) -> Result<f64> {
    if !(z >= 0.0) || z.is_infinite() {
        return Err(Error::domain(format!("fugacity z = {z} must be >= 0")));
    }
    if beta_eps.is_nan() {
        return Err(Error::domain("beta_eps is NaN"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / ((beta_eps - z.ln()).exp() + 1.0))
}

/// Temperature, thermal wavelength and `βε` of a gas at momentum `p0`.
pub fn mono_energetic_state(p0: f64, units: &NaturalUnits) -> Result<MonoEnergeticState> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::domain(format!(
            "momentum p0 = {p0} must be positive"
        )));
    }
    Ok(MonoEnergeticState {
        p0,
        temperature: p0 * p0 / (2.0 * units.mass * units.boltzmann),
        lambda: (4.0 * PI).sqrt() * units.hbar / p0,
        beta_eps: 1.0,
    })
}

/// `z' = λ³ / v`.
pub fn reduced_fugacity(lambda: f64, specific_volume: f64) -> Result<f64> {
    if !(lambda > 0.0 && specific_volume > 0.0) {
        return Err(Error::domain(format!(
            "lambda = {lambda} and specific volume = {specific_volume} must be positive"
        )));
    }
    Ok(lambda.powi(3) / specific_volume)
}

fn branch_series(z: f64, branch: Branch, params: &SeriesParams) -> Result<f64> {
    match branch {
        Branch::Bose => special_functions::bose_g32(z, params),
        Branch::Fermi(FermiSeries::Full) => special_functions::fermi_f32_full(z, params),
        Branch::Fermi(FermiSeries::Truncated) => special_functions::fermi_f32_truncated(z),
    }
}

/// `b = z'/z` with `z'` the branch's series at `z`, for `0 < z <= 1`.
///
/// `b` tends to 1 as `z -> 0` on every branch, but `z = 0` itself is rejected.
pub fn b_factor(z: f64, branch: Branch, params: &SeriesParams) -> Result<f64> {
    let z = check_unit_fugacity(z)?;
    if z == 0.0 {
        return Err(Error::domain(
            "b is undefined at z = 0 (its limit there is 1)",
        ));
    }
    Ok(branch_series(z, branch, params)? / z)
}

/// Specific volume that satisfies the mono-energetic normalization
/// `1 = (4π v p0² / ħ³) ⟨n_{p0}⟩` with `βε = 1`:
/// `v = (z^{-1} e - 1) ħ³ / (4π p0²)`.
pub fn specific_volume_from_constraint(p0: f64, z: f64, units: &NaturalUnits) -> Result<f64> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::domain(format!(
            "momentum p0 = {p0} must be positive"
        )));
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!("fugacity z = {z} must be positive")));
    }
    let excess = E / z - 1.0;
    if !(excess > 0.0) {
        return Err(Error::domain(format!(
            "z = {z} >= e leaves no positive occupation"
        )));
    }
    Ok(excess * units.hbar.powi(3) / (4.0 * PI * p0 * p0))
}
