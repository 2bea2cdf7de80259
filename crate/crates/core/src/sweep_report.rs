//! Momentum sweeps and occupation curves, with CSV and JSON emitters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas_statistics::{occupation_bose, occupation_fermi};
use crate::regime::{self, BranchTag, FermiSeries, RegimeFlag, RegimeLabel, RegimeReport};
use crate::special_functions::SeriesParams;

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 9] = [
    "p0",
    "K",
    "paper_label",
    "selfconsistent_label",
    "branch",
    "z",
    "z_prime",
    "b",
    "flags",
];

/// Which classifier(s) to run per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum SweepMode {
    Paper,
    #[value(name = "self")]
    SelfConsistent,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub mode: SweepMode,
    pub series: FermiSeries,
    pub window: f64,
    pub tol: f64,
    pub params: SeriesParams,
}

impl SweepSpec {
    pub fn new(p_min: f64, p_max: f64, steps: usize, mode: SweepMode) -> Result<Self> {
        let spec = Self {
            p_min,
            p_max,
            steps,
            mode,
            series: FermiSeries::default(),
            window: regime::DEFAULT_WINDOW,
            tol: 1e-12,
            params: SeriesParams::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_min.is_finite() && self.p_max.is_finite()) {
            return Err(Error::invalid("momentum bounds must be finite"));
        }
        if !(self.p_min < self.p_max) {
            return Err(Error::invalid(format!(
                "p_min ({}) must be below p_max ({})",
                self.p_min, self.p_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::invalid(format!(
                "a sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(self.p_min > 0.0) {
            return Err(Error::domain(format!(
                "momenta must be positive, got p_min = {}",
                self.p_min
            )));
        }
        if !(self.window > 0.0 && self.tol > 0.0) {
            return Err(Error::invalid("window and tolerance must be positive"));
        }
        Ok(())
    }

    /// The `i`-th grid point; the last one is exactly `p_max`.
    pub fn momentum(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.p_max
        } else {
            self.p_min + (self.p_max - self.p_min) * i as f64 / (self.steps - 1) as f64
        }
    }

    /// Classifies a single momentum the way [`run_sweep`] does.
    pub fn classify(&self, p0: f64) -> Result<RegimeReport> {
        match self.mode {
            SweepMode::Paper => regime::classify_paper(p0, self.window),
            SweepMode::SelfConsistent => {
                regime::classify_selfconsistent_with(p0, self.series, self.tol, &self.params)
            }
            SweepMode::Both => {
                regime::classify_both_with(p0, self.window, self.series, self.tol, &self.params)
            }
        }
    }
}

/// One sweep record. Absent values serialize as `null` in JSON and as
/// empty cells in CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p0: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub paper_label: Option<RegimeLabel>,
    pub selfconsistent_label: Option<RegimeLabel>,
    pub branch: Option<BranchTag>,
    pub z: Option<f64>,
    pub z_prime: Option<f64>,
    pub b: Option<f64>,
    pub flags: Vec<RegimeFlag>,
}

impl From<RegimeReport> for SweepRow {
    fn from(r: RegimeReport) -> Self {
        Self {
            p0: r.p0,
            k: r.coupling.value(),
            paper_label: r.paper_label,
            selfconsistent_label: r.selfconsistent_label,
            branch: r.branch,
            z: r.fugacity.map(|f| f.z),
            z_prime: r.fugacity.map(|f| f.z_prime),
            b: r.fugacity.map(|f| f.b),
            flags: r.flags.into_iter().collect(),
        }
    }
}

/// Classifies every grid point, in parallel, returning rows in ascending `p0`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let p0 = spec.momentum(i);
            spec.classify(p0)
                .map(SweepRow::from)
                .map_err(|e| Error::AtMomentum {
                    p0,
                    source: Box::new(e),
                })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OccupationBranch {
    Bose,
    Fermi,
}

/// Tabulates the occupation number over a linear `βε` grid.
///
/// A grid point on the Bose singularity (`z = 1`, `βε = 0`) fails the whole
/// curve with [`Error::Singularity`] naming that point.
pub fn occupation_curve(
    z: f64,
    beta_eps_min: f64,
    beta_eps_max: f64,
    steps: usize,
    branch: OccupationBranch,
) -> Result<Vec<(f64, f64)>> {
    if !(beta_eps_min < beta_eps_max) {
        return Err(Error::invalid(format!(
            "empty beta_eps range [{beta_eps_min}, {beta_eps_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let span = beta_eps_max - beta_eps_min;
    (0..steps)
        .map(|i| {
            let be = if i + 1 == steps {
                beta_eps_max
            } else {
                beta_eps_min + span * i as f64 / (steps - 1) as f64
            };
            let occ = match branch {
                OccupationBranch::Bose => occupation_bose(z, be)?,
                OccupationBranch::Fermi => occupation_fermi(z, be)?,
            };
            Ok((be, occ))
        })
        .collect()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with header [`CSV_HEADER`], LF line endings, flags joined by `|`.
pub fn emit_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
        w.write_record([
            r.p0.to_string(),
            r.k.to_string(),
            r.paper_label
                .map(|l| l.as_str())
                .unwrap_or_default()
                .to_owned(),
            r.selfconsistent_label
                .map(|l| l.as_str())
                .unwrap_or_default()
                .to_owned(),
            r.branch.map(|b| b.as_str()).unwrap_or_default().to_owned(),
            opt_num(r.z),
            opt_num(r.z_prime),
            opt_num(r.b),
            flags.join("|"),
        ])
        .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("ascii output")
}

/// JSON array of row objects keyed like the CSV header.
pub fn emit_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}
