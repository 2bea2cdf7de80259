//! Order-3/2 Bose and Fermi polylogarithms on the unit fugacity interval.
//!
//! `g32(z) = Σ z^k / k^{3/2}` and `f32(z) = Σ (-1)^{k+1} z^k / k^{3/2}`, both
//! for `0 <= z <= 1`. Near `z = 1` the Bose terms decay only like `k^{-3/2}`,
//! so a plain term cutoff would stop far too early; above
//! [`NEAR_UNIT_FUGACITY`] the series is summed to `max_terms` instead. Either
//! way an estimate of the omitted tail is added at the stopping index.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature;

/// `ζ(3/2)`, the value of `g32(1)`.
pub const ZETA_3_2: f64 = 2.612_375_348_685_488;

/// `η(3/2) = (1 - 2^{-1/2}) ζ(3/2)`, the value of `f32(1)`.
pub const ETA_3_2: f64 = 0.765_147_024_625_408_4;

/// Fugacities above this switch from the term cutoff to full summation plus
/// a tail estimate.
pub const NEAR_UNIT_FUGACITY: f64 = 0.999;

/// Truncation controls for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesParams {
    tolerance: f64,
    max_terms: usize,
}

impl SeriesParams {
    pub fn new(tolerance: f64, max_terms: usize) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::invalid(format!(
                "series tolerance must be positive, got {tolerance}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::invalid("max_terms must be at least 1"));
        }
        Ok(Self {
            tolerance,
            max_terms,
        })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_terms: 100_000,
        }
    }
}

/// A fugacity in the convergence domain `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Fugacity(f64);

impl Fugacity {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::domain(format!(
                "fugacity z = {value} outside [0, 1]"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<Fugacity> for f64 {
    fn from(z: Fugacity) -> f64 {
        z.0
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn inv_k32(k: usize) -> f64 {
    let k = k as f64;
    1.0 / (k * k.sqrt())
}

/// `Σ_{k>n} z^k k^{-3/2}` by the midpoint rule: `∫_{a}^∞ f + f'(a)/24` with
/// `f(x) = z^x x^{-3/2}` and `a = n + 1/2`.
fn bose_tail(z: f64, n: usize) -> f64 {
    let a = n as f64 + 0.5;
    let c = -z.ln();
    let f_a = (-c * a).exp() / (a * a.sqrt());
    let slope = -f_a * (c + 1.5 / a);
    let integral = if c <= 0.0 {
        2.0 / a.sqrt()
    } else {
        let ca = c * a;
        2.0 * (-ca).exp() / a.sqrt() - 2.0 * (PI * c).sqrt() * libm::erfc(ca.sqrt())
    };
    integral + slope / 24.0
}

/// `Σ_{k>n} (-1)^{k+1} z^k k^{-3/2}` via the leading Euler–Boole term.
fn fermi_tail(z: f64, n: usize) -> f64 {
    let x = n as f64 + 0.5;
    let half_term = 0.5 * z.powf(x) / (x * x.sqrt());
    if n.is_multiple_of(2) {
        half_term
    } else {
        -half_term
    }
}

fn polylog32(z: f64, params: &SeriesParams, alternating: bool) -> Result<f64> {
    let z = Fugacity::new(z)?.get();
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::default();
    let mut zk = 1.0;
    let mut stop = params.max_terms;
    for k in 1..=params.max_terms {
        zk *= z;
        let term = zk * inv_k32(k);
        acc.add(if alternating && k % 2 == 0 {
            -term
        } else {
            term
        });
        if z > NEAR_UNIT_FUGACITY {
            continue;
        }
        if term < params.tolerance {
            stop = k;
            break;
        }
        if k == params.max_terms {
            return Err(Error::Truncation {
                terms: k,
                partial_sum: acc.value(),
                last_term: term,
            });
        }
    }
    acc.add(if alternating {
        fermi_tail(z, stop)
    } else {
        bose_tail(z, stop)
    });
    Ok(acc.value())
}

/// Bose function `g_{3/2}(z) = Σ_{k>=1} z^k / k^{3/2}` for `0 <= z <= 1`.
///
/// The result lies in `[z, z·ζ(3/2)]` and equals `ζ(3/2)` at `z = 1`.
pub fn bose_g32(z: f64, params: &SeriesParams) -> Result<f64> {
    polylog32(z, params, false)
}

/// Fermi function `f_{3/2}(z) = Σ_{k>=1} (-1)^{k+1} z^k / k^{3/2}` for
/// `0 <= z <= 1`, summed to convergence.
pub fn fermi_f32_full(z: f64, params: &SeriesParams) -> Result<f64> {
    polylog32(z, params, true)
}

/// The three-term Fermi expansion `z - z²/2^{3/2} + z³/3^{3/2}`.
pub fn fermi_f32_truncated(z: f64) -> Result<f64> {
    let z = Fugacity::new(z)?.get();
    Ok(z - z * z / 8f64.sqrt() + z * z * z / 27f64.sqrt())
}

/// `g_{3/2}` by quadrature of its integral representation
///
/// `g32(z) = (2/√π) ∫_0^∞ √x / (z^{-1} e^x - 1) dx`.
///
/// With `x = t²` the integrand becomes `(4/√π) t² / (e^{t² - ln z} - 1)`,
/// which stays bounded at `t = 0` even for `z = 1`. The range is cut at
/// `t = 8`; the dropped tail is below `1e-25`. Independent of the series
/// path and intended as a cross-check.
pub fn bose_g32_quadrature(z: f64) -> Result<f64> {
    let z = Fugacity::new(z)?.get();
    if z == 0.0 {
        return Ok(0.0);
    }
    let c = -z.ln();
    let integrand = |t: f64| {
        let t2 = t * t;
        t2 / (t2 + c).exp_m1()
    };
    let est = quadrature::integrate(integrand, 0.0, 8.0, 1e-12)?;
    Ok(4.0 / PI.sqrt() * est.value)
}
