//! Self-consistency between fugacity and momentum, threshold momenta, and
//! the two regime classifiers.
//!
//! With `K = (4π)^{5/2} / p0` the Bose normalization reads `z' = e·b - K`.
//! Substituting `z' = g32(z)` and `b = g32(z)/z` gives `H(z) = K` with
//!
//! ```text
//! H(z) = e·g32(z)/z - g32(z)
//! ```
//!
//! and the Fermi analog `z' = K - e·b` gives `Φ(z) = K` with
//! `Φ(z) = e·f32(z)/z + f32(z)`. Both tend to `e` as `z -> 0`.
//!
//! `Φ` is increasing on `(0, 1]`. `H` is not: its slope at the origin is
//! `e/2^{3/2} - 1 < 0`, it bottoms out near `z ≈ 0.100` at `H ≈ 2.71624` and
//! climbs back through `e` at `z ≈ 0.1918`. For `K > e` the Bose root is
//! still unique, which is the only window [`solve_bose`] reports.

use std::collections::BTreeSet;
use std::f64::consts::E;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas_statistics::FugacityPair;
use crate::special_functions::{self, Fugacity, SeriesParams};

/// `(4π)^{5/2} = 32 π^{5/2}`.
pub const FOUR_PI_POW_5_2: f64 = 559.789_386_483_995_6;

/// Lower end of the bracket used by the fugacity solvers.
pub const MIN_BRACKET_FUGACITY: f64 = 1e-9;

/// Iteration cap for bisection.
pub const MAX_BISECTION_STEPS: usize = 200;

/// `b` inserted into the condensation threshold by the rounded fixed point.
pub const PAPER_CONDENSATION_B: f64 = 1.4;

/// `b` in the dilute limit.
pub const DILUTE_B: f64 = 1.0;

/// Default relative half-width of the threshold windows.
pub const DEFAULT_WINDOW: f64 = 0.01;

/// The dimensionless coupling `K = (4π)^{5/2} / p0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CouplingK(f64);

impl CouplingK {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::domain(format!(
                "coupling K = {value} must be positive"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum FermiSeries {
    /// Alternating series summed to convergence.
    Full,
    /// Three-term expansion `z - z²/2^{3/2} + z³/3^{3/2}`.
    #[default]
    Truncated,
}

impl std::str::FromStr for FermiSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "truncated" => Ok(Self::Truncated),
            other => Err(Error::invalid(format!(
                "unknown Fermi series '{other}' (expected full or truncated)"
            ))),
        }
    }
}

/// Statistics branch used to build `z'` from `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Bose,
    Fermi(FermiSeries),
}

/// Branch recorded in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchTag {
    Bose,
    Fermi,
    None,
}

impl BranchTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchTag::Bose => "bose",
            BranchTag::Fermi => "fermi",
            BranchTag::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeLabel {
    Condensation,
    Dilution,
    AnomalousFermionic,
    NormalBose,
    AboveDilution,
    OutOfModelRange,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Condensation => "Condensation",
            RegimeLabel::Dilution => "Dilution",
            RegimeLabel::AnomalousFermionic => "AnomalousFermionic",
            RegimeLabel::NormalBose => "NormalBose",
            RegimeLabel::AboveDilution => "AboveDilution",
            RegimeLabel::OutOfModelRange => "OutOfModelRange",
        }
    }
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeFlag {
    /// The condensation momentum also satisfies the Fermionic inequality.
    OverlapsFermionicRange,
    NoBoseRoot,
    NoFermiRoot,
    NearThreshold,
    /// The literal and self-consistent classifiers disagree.
    LabelsDisagree,
}

impl RegimeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeFlag::OverlapsFermionicRange => "overlaps_fermionic_range",
            RegimeFlag::NoBoseRoot => "no_bose_root",
            RegimeFlag::NoFermiRoot => "no_fermi_root",
            RegimeFlag::NearThreshold => "near_threshold",
            RegimeFlag::LabelsDisagree => "labels_disagree",
        }
    }
}

/// Classification of one momentum by either or both classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub p0: f64,
    #[serde(rename = "K")]
    pub coupling: CouplingK,
    pub paper_label: Option<RegimeLabel>,
    pub selfconsistent_label: Option<RegimeLabel>,
    pub branch: Option<BranchTag>,
    pub fugacity: Option<FugacityPair>,
    pub flags: BTreeSet<RegimeFlag>,
}

impl RegimeReport {
    fn new(p0: f64, coupling: CouplingK) -> Self {
        Self {
            p0,
            coupling,
            paper_label: None,
            selfconsistent_label: None,
            branch: None,
            fugacity: None,
            flags: BTreeSet::new(),
        }
    }
}

/// Which side of the solvable window an unsolvable `K` falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootSide {
    /// `K <= e`.
    BelowWindow,
    /// `K` exceeds the branch's value at `z = 1`.
    AboveWindow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootOutcome {
    Root(f64),
    NoRoot(RootSide),
}

impl RootOutcome {
    pub fn root(self) -> Option<f64> {
        match self {
            RootOutcome::Root(z) => Some(z),
            RootOutcome::NoRoot(_) => None,
        }
    }
}

pub fn coupling_from_momentum(p0: f64) -> Result<CouplingK> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::domain(format!(
            "momentum p0 = {p0} must be positive"
        )));
    }
    CouplingK::new(FOUR_PI_POW_5_2 / p0)
}

fn open_unit_fugacity(z: f64) -> Result<f64> {
    let z = Fugacity::new(z)?.get();
    if z == 0.0 {
        return Err(Error::domain("z must be strictly positive"));
    }
    Ok(z)
}

/// `H(z) = e·g32(z)/z - g32(z)` for `0 < z <= 1`.
pub fn bose_lhs(z: f64, params: &SeriesParams) -> Result<f64> {
    let z = open_unit_fugacity(z)?;
    let g = special_functions::bose_g32(z, params)?;
    Ok(E * g / z - g)
}

/// `Φ(z) = e·f32(z)/z + f32(z)` for `0 < z <= 1`.
pub fn fermi_lhs(z: f64, series: FermiSeries, params: &SeriesParams) -> Result<f64> {
    let z = open_unit_fugacity(z)?;
    let f = match series {
        FermiSeries::Full => special_functions::fermi_f32_full(z, params)?,
        FermiSeries::Truncated => special_functions::fermi_f32_truncated(z)?,
    };
    Ok(E * f / z + f)
}

pub fn bose_residual(z: f64, k: CouplingK, params: &SeriesParams) -> Result<f64> {
    Ok(bose_lhs(z, params)? - k.value())
}

pub fn fermi_residual(
    z: f64,
    k: CouplingK,
    series: FermiSeries,
    params: &SeriesParams,
) -> Result<f64> {
    Ok(fermi_lhs(z, series, params)? - k.value())
}

/// `H(1) = (e - 1) ζ(3/2)` at default series settings is worth caching: it
/// takes the full 10^5-term sum.
fn bose_lhs_at_one(params: &SeriesParams) -> Result<f64> {
    static DEFAULT: OnceLock<f64> = OnceLock::new();
    if *params == SeriesParams::default() {
        if let Some(v) = DEFAULT.get() {
            return Ok(*v);
        }
        let v = bose_lhs(1.0, params)?;
        return Ok(*DEFAULT.get_or_init(|| v));
    }
    bose_lhs(1.0, params)
}

fn fermi_lhs_at_one(series: FermiSeries, params: &SeriesParams) -> Result<f64> {
    static DEFAULT_FULL: OnceLock<f64> = OnceLock::new();
    if series == FermiSeries::Full && *params == SeriesParams::default() {
        if let Some(v) = DEFAULT_FULL.get() {
            return Ok(*v);
        }
        let v = fermi_lhs(1.0, series, params)?;
        return Ok(*DEFAULT_FULL.get_or_init(|| v));
    }
    fermi_lhs(1.0, series, params)
}

/// Bisection for an increasing sign change: `f(lo) < 0 <= f(hi)`.
/// Returns the midpoint of the final bracket, whose width is below `tol`.
fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo < tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo < tol {
        return Ok(0.5 * (lo + hi));
    }
    Err(Error::NonConvergence {
        lo,
        hi,
        tol,
        iterations: MAX_BISECTION_STEPS,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "solver tolerance {tol} must be positive"
        )))
    }
}

/// Solves `H(z) = K` for `z ∈ (0, 1]` with default series settings.
pub fn solve_bose(k: CouplingK, tol: f64) -> Result<RootOutcome> {
    solve_bose_with(k, tol, &SeriesParams::default())
}

/// Solves `H(z) = K`. Roots are reported only for `e < K <= H(1)`, where
/// the root is unique; `K <= e` is [`RootSide::BelowWindow`] even though
/// `H` dips slightly below `e` for small `z`.
pub fn solve_bose_with(k: CouplingK, tol: f64, params: &SeriesParams) -> Result<RootOutcome> {
    check_tol(tol)?;
    let k = k.value();
    if k <= E {
        return Ok(RootOutcome::NoRoot(RootSide::BelowWindow));
    }
    if k > bose_lhs_at_one(params)? {
        return Ok(RootOutcome::NoRoot(RootSide::AboveWindow));
    }
    bisect(
        |z| Ok(bose_lhs(z, params)? - k),
        MIN_BRACKET_FUGACITY,
        1.0,
        tol,
    )
    .map(RootOutcome::Root)
}

/// Solves `Φ(z) = K` for `z ∈ (0, 1]` with default series settings.
pub fn solve_fermi(k: CouplingK, series: FermiSeries, tol: f64) -> Result<RootOutcome> {
    solve_fermi_with(k, series, tol, &SeriesParams::default())
}

pub fn solve_fermi_with(
    k: CouplingK,
    series: FermiSeries,
    tol: f64,
    params: &SeriesParams,
) -> Result<RootOutcome> {
    check_tol(tol)?;
    let k = k.value();
    if k <= E {
        return Ok(RootOutcome::NoRoot(RootSide::BelowWindow));
    }
    if k > fermi_lhs_at_one(series, params)? {
        return Ok(RootOutcome::NoRoot(RootSide::AboveWindow));
    }
    bisect(
        |z| Ok(fermi_lhs(z, series, params)? - k),
        MIN_BRACKET_FUGACITY,
        1.0,
        tol,
    )
    .map(RootOutcome::Root)
}

/// The Bose state with `z' = g32(z) = 1`, i.e. `λ³ = v`.
pub fn condensation_onset(tol: f64, params: &SeriesParams) -> Result<FugacityPair> {
    check_tol(tol)?;
    let z = bisect(
        |z| Ok(special_functions::bose_g32(z, params)? - 1.0),
        0.0,
        1.0,
        tol,
    )?;
    let z_prime = special_functions::bose_g32(z, params)?;
    Ok(FugacityPair {
        z,
        z_prime,
        b: z_prime / z,
    })
}

/// Condensation momentum `(4π)^{5/2} / (e·b - 1)`.
pub fn threshold_condensation(b: f64) -> Result<f64> {
    let denom = E * b - 1.0;
    if !(denom > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!(
            "condensation threshold needs e·b > 1, got b = {b}"
        )));
    }
    Ok(FOUR_PI_POW_5_2 / denom)
}

/// Dilution momentum `(4π)^{5/2} / (e·b)`.
pub fn threshold_dilution(b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!(
            "dilution threshold needs b > 0, got b = {b}"
        )));
    }
    Ok(FOUR_PI_POW_5_2 / (E * b))
}

/// Momentum at which the self-consistent Bose branch reaches `z' = 1`.
pub fn selfconsistent_condensation_momentum(tol: f64, params: &SeriesParams) -> Result<f64> {
    threshold_condensation(condensation_onset(tol, params)?.b)
}

fn check_p0(p0: f64) -> Result<()> {
    if p0 > 0.0 && p0.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "momentum p0 = {p0} must be positive"
        )))
    }
}

/// Labels `p0` by the literal rules: the dilution point `P_dil` (`b = 1`),
/// the condensation point `P_cond` (`b = 1.4`), each matched within a
/// relative `window`, and the Fermionic inequality `p0 < P_dil` otherwise.
///
/// Named points take precedence over the inequality. `P_cond < P_dil`, so
/// every Condensation also carries `overlaps_fermionic_range`.
pub fn classify_paper(p0: f64, window: f64) -> Result<RegimeReport> {
    check_p0(p0)?;
    if !(window > 0.0) || !window.is_finite() {
        return Err(Error::domain(format!("window {window} must be positive")));
    }
    let coupling = coupling_from_momentum(p0)?;
    let p_dil = threshold_dilution(DILUTE_B)?;
    let p_cond = threshold_condensation(PAPER_CONDENSATION_B)?;
    let within = |target: f64, w: f64| (p0 - target).abs() <= w * target;

    let mut report = RegimeReport::new(p0, coupling);
    let label = if within(p_cond, window) {
        report.flags.insert(RegimeFlag::OverlapsFermionicRange);
        RegimeLabel::Condensation
    } else if within(p_dil, window) {
        RegimeLabel::Dilution
    } else if p0 < p_dil {
        RegimeLabel::AnomalousFermionic
    } else {
        RegimeLabel::AboveDilution
    };
    let near = |target: f64| !within(target, window) && within(target, 2.0 * window);
    let matched = match label {
        RegimeLabel::Condensation => Some(p_cond),
        RegimeLabel::Dilution => Some(p_dil),
        _ => None,
    };
    if [p_cond, p_dil]
        .into_iter()
        .any(|t| Some(t) != matched && near(t))
    {
        report.flags.insert(RegimeFlag::NearThreshold);
    }
    report.paper_label = Some(label);
    Ok(report)
}

/// Classifies `p0` by solving the self-consistency relation, with default
/// series settings.
pub fn classify_selfconsistent(p0: f64, series: FermiSeries, tol: f64) -> Result<RegimeReport> {
    classify_selfconsistent_with(p0, series, tol, &SeriesParams::default())
}

/// Solves the Bose branch first: `z' >= 1` is Condensation, `z' <= tol` (or
/// `|K - e| <= tol`) is Dilution, anything between is NormalBose. When `K`
/// is too large for the Bose branch the Fermi branch is tried; when `K` is
/// below `e` the point lies above the dilution momentum.
pub fn classify_selfconsistent_with(
    p0: f64,
    series: FermiSeries,
    tol: f64,
    params: &SeriesParams,
) -> Result<RegimeReport> {
    check_p0(p0)?;
    check_tol(tol)?;
    let coupling = coupling_from_momentum(p0)?;
    let mut report = RegimeReport::new(p0, coupling);

    if (coupling.value() - E).abs() <= tol {
        report.selfconsistent_label = Some(RegimeLabel::Dilution);
        report.branch = Some(BranchTag::Bose);
        report.fugacity = Some(FugacityPair::dilute_limit());
        return Ok(report);
    }

    match solve_bose_with(coupling, tol, params)? {
        RootOutcome::Root(z) => {
            let pair = FugacityPair::on_branch(z, Branch::Bose, params)?;
            let label = if pair.z_prime >= 1.0 {
                RegimeLabel::Condensation
            } else if pair.z_prime <= tol {
                RegimeLabel::Dilution
            } else {
                RegimeLabel::NormalBose
            };
            report.selfconsistent_label = Some(label);
            report.branch = Some(BranchTag::Bose);
            report.fugacity = Some(pair);
        }
        RootOutcome::NoRoot(RootSide::BelowWindow) => {
            report.flags.insert(RegimeFlag::NoBoseRoot);
            report.selfconsistent_label = Some(RegimeLabel::AboveDilution);
            report.branch = Some(BranchTag::None);
        }
        RootOutcome::NoRoot(RootSide::AboveWindow) => {
            report.flags.insert(RegimeFlag::NoBoseRoot);
            match solve_fermi_with(coupling, series, tol, params)? {
                RootOutcome::Root(z) => {
                    let pair = FugacityPair::on_branch(z, Branch::Fermi(series), params)?;
                    report.selfconsistent_label = Some(RegimeLabel::AnomalousFermionic);
                    report.branch = Some(BranchTag::Fermi);
                    report.fugacity = Some(pair);
                }
                RootOutcome::NoRoot(_) => {
                    report.flags.insert(RegimeFlag::NoFermiRoot);
                    report.selfconsistent_label = Some(RegimeLabel::OutOfModelRange);
                    report.branch = Some(BranchTag::None);
                }
            }
        }
    }
    Ok(report)
}

pub fn classify_both(p0: f64, window: f64, series: FermiSeries, tol: f64) -> Result<RegimeReport> {
    classify_both_with(p0, window, series, tol, &SeriesParams::default())
}

/// Runs both classifiers and merges their reports. Disagreeing labels are
/// flagged with `labels_disagree`.
pub fn classify_both_with(
    p0: f64,
    window: f64,
    series: FermiSeries,
    tol: f64,
    params: &SeriesParams,
) -> Result<RegimeReport> {
    let paper = classify_paper(p0, window)?;
    let mut merged = classify_selfconsistent_with(p0, series, tol, params)?;
    merged.paper_label = paper.paper_label;
    merged.flags.extend(paper.flags);
    if merged.paper_label != merged.selfconsistent_label {
        merged.flags.insert(RegimeFlag::LabelsDisagree);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn p() -> SeriesParams {
        SeriesParams::default()
    }

    fn k(v: f64) -> CouplingK {
        CouplingK::new(v).unwrap()
    }

    /// Grid scan for a sign change of `f`, then plain bisection; independent
    /// of the solver's bracket choice.
    fn scan_root(f: impl Fn(f64) -> f64) -> f64 {
        let n = 10_000;
        let mut prev = (1e-6, f(1e-6));
        for i in 1..=n {
            let z = i as f64 / n as f64;
            let v = f(z);
            if prev.1 < 0.0 && v >= 0.0 {
                let (mut lo, mut hi) = (prev.0, z);
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    if f(m) < 0.0 {
                        lo = m
                    } else {
                        hi = m
                    }
                }
                return 0.5 * (lo + hi);
            }
            prev = (z, v);
        }
        panic!("no sign change");
    }

    #[test]
    fn constant_matches_closed_form() {
        assert!((FOUR_PI_POW_5_2 - 32.0 * PI.powf(2.5)).abs() < 1e-12);
        assert!((FOUR_PI_POW_5_2 - (4.0 * PI).powf(2.5)).abs() < 1e-11);
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(
            coupling_from_momentum(FOUR_PI_POW_5_2).unwrap().value(),
            1.0
        );
        assert!((coupling_from_momentum(559.7896).unwrap().value() - 1.0).abs() < 1e-6);
        assert!((coupling_from_momentum(205.93).unwrap().value() - 2.71835).abs() < 1e-4);
        assert!((coupling_from_momentum(100.0).unwrap().value() - 5.597896).abs() < 1e-5);
        assert!(coupling_from_momentum(0.0).is_err());
        assert!(coupling_from_momentum(-5.0).is_err());
    }

    #[test]
    fn bose_residual_examples() {
        assert!(bose_residual(1e-12, k(E), &p()).unwrap().abs() < 1e-10);
        let h1 = (E - 1.0) * special_functions::ZETA_3_2;
        assert!((h1 - 4.48880).abs() < 1e-4);
        assert!(bose_residual(1.0, k(h1), &p()).unwrap().abs() < 1e-10);
        assert!(bose_residual(0.6986, k(2.8911), &p()).unwrap().abs() < 1e-3);
        assert!(bose_residual(0.0, k(E), &p()).is_err());
        assert!(bose_residual(1.01, k(E), &p()).is_err());
    }

    #[test]
    fn bose_lhs_dips_below_e_near_origin() {
        let h = |z| bose_lhs(z, &p()).unwrap();
        assert!(h(0.1) < E && h(0.19) < E && h(0.2) > E);
        assert!((h(0.100_181_6) - 2.716_243_588).abs() < 1e-8);
        let mut prev = h(0.2);
        for i in 41..=200 {
            let v = h(i as f64 * 0.005);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn fermi_residual_examples() {
        for series in [FermiSeries::Full, FermiSeries::Truncated] {
            assert!(fermi_residual(1e-12, k(E), series, &p()).unwrap().abs() < 1e-10);
        }
        let trunc = fermi_residual(1.0, k(3.11925), FermiSeries::Truncated, &p()).unwrap();
        assert!(trunc.abs() < 1e-4);
        let full = fermi_residual(1.0, k(2.84503), FermiSeries::Full, &p()).unwrap();
        assert!(full.abs() < 1e-4);
        assert!(fermi_residual(0.0, k(E), FermiSeries::Full, &p()).is_err());
    }

    #[test]
    fn solve_bose_examples() {
        let z = solve_bose(k(2.8911), TOL).unwrap().root().unwrap();
        assert!((z - 0.6986).abs() < 1e-3);
        assert!((z - scan_root(|z| bose_lhs(z, &p()).unwrap() - 2.8911)).abs() < 1e-9);
        let g = special_functions::bose_g32(z, &p()).unwrap();
        assert!((g - 1.0).abs() < 1e-3);

        let z = solve_bose(k(4.48866), TOL).unwrap().root().unwrap();
        assert!((z - 1.0).abs() < 1e-4);

        assert_eq!(
            solve_bose(k(2.0), TOL).unwrap(),
            RootOutcome::NoRoot(RootSide::BelowWindow)
        );
        assert_eq!(
            solve_bose(k(5.0), TOL).unwrap(),
            RootOutcome::NoRoot(RootSide::AboveWindow)
        );
    }

    #[test]
    fn solve_bose_round_trip_above_dip() {
        for z in [0.25, 0.5, 0.9, 1.0] {
            let target = bose_lhs(z, &p()).unwrap();
            let got = solve_bose(k(target), 1e-10).unwrap().root().unwrap();
            assert!((got - z).abs() < 1e-10, "{z} -> {got}");
        }
    }

    #[test]
    fn solve_fermi_examples() {
        let z = solve_fermi(k(E + 0.001), FermiSeries::Truncated, TOL)
            .unwrap()
            .root()
            .unwrap();
        let zp = special_functions::fermi_f32_truncated(z).unwrap();
        assert!(z < 0.05 && zp < 0.05, "z = {z}, z' = {zp}");

        let z = solve_fermi(k(3.11925), FermiSeries::Truncated, TOL)
            .unwrap()
            .root()
            .unwrap();
        assert!((z - 1.0).abs() < 1e-4);

        for series in [FermiSeries::Full, FermiSeries::Truncated] {
            assert_eq!(
                solve_fermi(k(5.6), series, TOL).unwrap(),
                RootOutcome::NoRoot(RootSide::AboveWindow)
            );
        }
    }

    #[test]
    fn solver_rejects_bad_tolerance() {
        assert!(solve_bose(k(3.0), 0.0).is_err());
        assert!(solve_fermi(k(3.0), FermiSeries::Full, -1.0).is_err());
    }

    #[test]
    fn solver_reports_non_convergence() {
        assert!(matches!(
            solve_bose(k(3.0), 1e-300),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        assert!((threshold_condensation(1.4).unwrap() - 199.53).abs() < 0.01);
        assert!((threshold_condensation(1.4315).unwrap() - 193.61).abs() < 0.05);
        assert!((threshold_condensation(2.0 / E).unwrap() - 559.7896).abs() < 1e-3);
        assert!(threshold_condensation(1.0 / E).is_err());
        assert!(threshold_condensation(0.0).is_err());

        assert!((threshold_dilution(1.0).unwrap() - 205.93).abs() < 0.01);
        assert!((threshold_dilution(2.6).unwrap() - 79.20).abs() < 0.01);
        let half = threshold_dilution(2.0).unwrap() / threshold_dilution(1.0).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        assert!(threshold_dilution(0.0).is_err());
        assert!(threshold_dilution(-1.0).is_err());
    }

    #[test]
    fn condensation_point_precedes_dilution_point() {
        assert!(threshold_condensation(1.4).unwrap() < threshold_dilution(1.0).unwrap());
    }

    #[test]
    fn onset_fixed_point() {
        let onset = condensation_onset(TOL, &p()).unwrap();
        assert!((onset.z - 0.698_614_359).abs() < 1e-8);
        assert!((onset.b - 1.431_404_876).abs() < 1e-8);
        let p0 = selfconsistent_condensation_momentum(TOL, &p()).unwrap();
        assert!((p0 - 193.634_303_4).abs() < 1e-5);
    }

    #[test]
    fn classify_paper_examples() {
        let r = classify_paper(205.93, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::Dilution));
        assert!(r.flags.is_empty());

        let r = classify_paper(199.53, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::Condensation));
        assert!(r.flags.contains(&RegimeFlag::OverlapsFermionicRange));

        let r = classify_paper(100.0, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::AnomalousFermionic));

        let r = classify_paper(300.0, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::AboveDilution));

        assert!(classify_paper(0.0, DEFAULT_WINDOW).is_err());
        assert!(classify_paper(200.0, 0.0).is_err());
    }

    #[test]
    fn classify_paper_near_threshold() {
        // 1.5% above the dilution point: outside the 1% window, inside 2%.
        let r = classify_paper(205.93 * 1.015, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::AboveDilution));
        assert!(r.flags.contains(&RegimeFlag::NearThreshold));
        // Between the two windows, near both.
        let r = classify_paper(202.8, DEFAULT_WINDOW).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::AnomalousFermionic));
        assert!(r.flags.contains(&RegimeFlag::NearThreshold));
        let r = classify_paper(150.0, DEFAULT_WINDOW).unwrap();
        assert!(!r.flags.contains(&RegimeFlag::NearThreshold));
    }

    #[test]
    fn classify_selfconsistent_examples() {
        let r = classify_selfconsistent(193.61, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::Condensation));
        let f = r.fugacity.unwrap();
        assert!((f.z - 0.6986).abs() < 0.002);
        assert!((f.b - 1.4315).abs() < 0.005);
        assert_eq!(r.branch, Some(BranchTag::Bose));

        // Just below the dilution momentum the Bose root sits past the dip of
        // H, near z ≈ 0.33, not at z ≈ 0.
        let r = classify_selfconsistent(205.0, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::NormalBose));
        let f = r.fugacity.unwrap();
        assert!((f.z - 0.327_046).abs() < 1e-5);
        assert!((f.z_prime - 0.373_472).abs() < 1e-5);

        for series in [FermiSeries::Full, FermiSeries::Truncated] {
            let r = classify_selfconsistent(100.0, series, TOL).unwrap();
            assert_eq!(r.selfconsistent_label, Some(RegimeLabel::OutOfModelRange));
            assert!(r.flags.contains(&RegimeFlag::NoFermiRoot));
            assert!(r.flags.contains(&RegimeFlag::NoBoseRoot));
            assert_eq!(r.branch, Some(BranchTag::None));
            assert!(r.fugacity.is_none());
        }

        let r = classify_selfconsistent(300.0, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::AboveDilution));
        assert!(r.flags.contains(&RegimeFlag::NoBoseRoot));

        // Just past H(1): Bose fails, and K already exceeds Φ(1).
        let p0 = FOUR_PI_POW_5_2 / 4.6;
        let r = classify_selfconsistent(p0, FermiSeries::Full, TOL).unwrap();
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::OutOfModelRange));
        let r = classify_selfconsistent(FOUR_PI_POW_5_2 / E, FermiSeries::Full, 1e-9).unwrap();
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::Dilution));
        assert_eq!(r.fugacity, Some(FugacityPair::dilute_limit()));

        assert!(classify_selfconsistent(-1.0, FermiSeries::Full, TOL).is_err());
        assert!(classify_selfconsistent(100.0, FermiSeries::Full, 0.0).is_err());
    }

    #[test]
    fn fermi_branch_is_unreachable_through_bose_failure() {
        // Bose fails only for K > H(1) ≈ 4.489, while Φ(1) < 3.2 in both modes.
        assert!(fermi_lhs(1.0, FermiSeries::Truncated, &p()).unwrap() < 3.2);
        assert!(bose_lhs(1.0, &p()).unwrap() > 4.48);
    }

    #[test]
    fn classify_both_examples() {
        let r = classify_both(205.93, DEFAULT_WINDOW, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::Dilution));
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::NormalBose));
        assert!(r.flags.contains(&RegimeFlag::LabelsDisagree));

        let r = classify_both(199.53, DEFAULT_WINDOW, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::Condensation));
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::NormalBose));
        let zp = r.fugacity.unwrap().z_prime;
        assert!(zp < 1.0 && zp > 0.7, "{zp}");
        assert!(r.flags.contains(&RegimeFlag::OverlapsFermionicRange));
        assert!(r.flags.contains(&RegimeFlag::LabelsDisagree));

        let r = classify_both(300.0, DEFAULT_WINDOW, FermiSeries::Truncated, TOL).unwrap();
        assert_eq!(r.paper_label, Some(RegimeLabel::AboveDilution));
        assert_eq!(r.selfconsistent_label, Some(RegimeLabel::AboveDilution));
        assert!(!r.flags.contains(&RegimeFlag::LabelsDisagree));
    }
}
