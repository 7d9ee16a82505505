//! Δ-sweeps: per-point records, one-sided derivative estimates, and
//! detection of the two quantum phase transitions.
//!
//! Each grid point carries the ground-state energy, the per-separation
//! correlators with their concurrence, maximal CHSH value and region label,
//! and one-sided derivative estimates of the nearest-neighbor concurrence
//! and Bell measure. Per-point failures are recorded as flags instead of
//! aborting the sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bethe;
use crate::correlations::{self, CorrelationSet};
use crate::ed::{self, EdConfig};
use crate::error::{Error, Result};
use crate::measures;
use crate::output::OutputFormat;
use crate::pair_state::{classify_region, RegionLabel};
use crate::quad::QuadratureConfig;

/// Which branch of the symmetric CHSH maximum is selected.
///
/// `Transverse` is the `2 sqrt(2 txx^2)` branch (`|txx| > |tzz|`, the
/// gapless phase); `TransverseLongitudinal` is `2 sqrt(txx^2 + tzz^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellBranch {
    Transverse,
    TransverseLongitudinal,
}

/// Quantities of one separation at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborRecord {
    pub r: usize,
    pub txx: f64,
    pub tzz: f64,
    pub concurrence: f64,
    pub bell: f64,
    pub region: RegionLabel,
    pub bell_branch: BellBranch,
    pub low_confidence: bool,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub delta: f64,
    pub e0: Option<f64>,
    pub neighbors: Vec<NeighborRecord>,
    /// One-sided derivative estimates of the nearest-neighbor Bell measure
    /// and concurrence, with their half-step noise estimates.
    pub d_bell_left: Option<f64>,
    pub d_bell_right: Option<f64>,
    pub d_bell_noise: Option<f64>,
    pub d_conc_left: Option<f64>,
    pub d_conc_right: Option<f64>,
    pub d_conc_noise: Option<f64>,
    /// Failure markers and low-confidence notes.
    pub flags: Vec<String>,
}

impl SweepRecord {
    pub fn neighbor(&self, r: usize) -> Option<&NeighborRecord> {
        self.neighbors.iter().find(|n| n.r == r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub delta_min: f64,
    pub delta_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    /// Separations to evaluate, a subset of {1, 2, 3}.
    pub neighbors: Vec<usize>,
    pub format: OutputFormat,
    pub ed: EdConfig,
    pub quad: QuadratureConfig,
    /// Step of the one-sided derivative stencils.
    pub derivative_step: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            delta_min: -1.5,
            delta_max: 3.0,
            steps: 451,
            neighbors: vec![1, 2, 3],
            format: OutputFormat::Csv,
            ed: EdConfig::default(),
            quad: QuadratureConfig::default(),
            derivative_step: 1e-3,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(Error::Domain("sweep range must be finite".into()));
        }
        if self.delta_min >= self.delta_max {
            return Err(Error::Domain(format!(
                "delta_min {} must be below delta_max {}",
                self.delta_min, self.delta_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.neighbors.is_empty() || self.neighbors.iter().any(|r| !(1..=3).contains(r)) {
            return Err(Error::Domain(format!(
                "neighbors must be a nonempty subset of {{1, 2, 3}}, got {:?}",
                self.neighbors
            )));
        }
        if self.derivative_step.is_nan() || self.derivative_step <= 0.0 {
            return Err(Error::Domain(format!(
                "derivative_step must be positive, got {}",
                self.derivative_step
            )));
        }
        self.quad.validate()?;
        self.ed.validate()
    }

    /// Uniform grid inclusive of both endpoints. The arithmetic keeps
    /// representable interior points (like Δ = ±1 on the default grids)
    /// exact, so branch-boundary handling engages.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.delta_max - self.delta_min;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.delta_max
                } else {
                    self.delta_min + (i as f64 * span) / (self.steps - 1) as f64
                }
            })
            .collect()
    }

    pub fn grid_step(&self) -> f64 {
        (self.delta_max - self.delta_min) / (self.steps - 1) as f64
    }
}

fn bell_branch(txx: f64, tzz: f64) -> BellBranch {
    if txx.abs() > tzz.abs() {
        BellBranch::Transverse
    } else {
        BellBranch::TransverseLongitudinal
    }
}

fn neighbor_record(corr: &CorrelationSet) -> NeighborRecord {
    NeighborRecord {
        r: corr.r,
        txx: corr.txx,
        tzz: corr.tzz,
        concurrence: measures::concurrence_symmetric(corr),
        bell: measures::bell_measure_symmetric(corr),
        region: classify_region(corr.txx, corr.tzz),
        bell_branch: bell_branch(corr.txx, corr.tzz),
        low_confidence: corr.low_confidence,
    }
}

/// Concurrence and Bell measure of the nearest-neighbor pair at `delta`.
fn conc_bell_at(delta: f64, quad: &QuadratureConfig) -> Result<(f64, f64)> {
    let corr = correlations::nn_correlations(delta, quad)?;
    Ok((
        measures::concurrence_symmetric(&corr),
        measures::bell_measure_symmetric(&corr),
    ))
}

/// One-sided 3-point stencil with one Richardson level.
///
/// Returns `((d_conc, d_bell), noise_conc, noise_bell)` where the noise is
/// the distance between the extrapolated and the half-step estimate. The
/// step shrinks so no evaluation crosses a branch boundary at Δ = ±1.
fn sided_stencil(
    delta: f64,
    side: bethe::Side,
    step: f64,
    quad: &QuadratureConfig,
    f0: (f64, f64),
) -> Result<((f64, f64), (f64, f64))> {
    let sign = match side {
        bethe::Side::Left => -1.0,
        bethe::Side::Right => 1.0,
    };
    let mut h = step;
    for boundary in [-1.0, 1.0] {
        let offset = (boundary - delta) * sign;
        if offset > 0.0 && offset < 2.0 * h {
            h = offset / 2.0;
        }
    }
    let f_half = conc_bell_at(delta + sign * h * 0.5, quad)?;
    let f_one = conc_bell_at(delta + sign * h, quad)?;
    let f_two = conc_bell_at(delta + sign * 2.0 * h, quad)?;

    let estimate = |q0: f64, qh2: f64, qh: f64, q2h: f64| {
        let d_h = (-3.0 * q0 + 4.0 * qh - q2h) / (2.0 * sign * h);
        let d_h2 = (-3.0 * q0 + 4.0 * qh2 - qh) / (sign * h);
        let r = (4.0 * d_h2 - d_h) / 3.0;
        (r, (r - d_h2).abs())
    };
    let (d_conc, n_conc) = estimate(f0.0, f_half.0, f_one.0, f_two.0);
    let (d_bell, n_bell) = estimate(f0.1, f_half.1, f_one.1, f_two.1);
    Ok(((d_conc, d_bell), (n_conc, n_bell)))
}

fn build_record(delta: f64, cfg: &SweepConfig) -> SweepRecord {
    let mut record = SweepRecord {
        delta,
        e0: None,
        neighbors: Vec::new(),
        d_bell_left: None,
        d_bell_right: None,
        d_bell_noise: None,
        d_conc_left: None,
        d_conc_right: None,
        d_conc_noise: None,
        flags: Vec::new(),
    };

    match bethe::ground_energy_at(delta, &cfg.quad) {
        Ok(e0) => record.e0 = Some(e0),
        Err(e) => record.flags.push(format!("e0:error:{e}")),
    }

    let mut nn: Option<CorrelationSet> = None;
    if cfg.neighbors.contains(&1) {
        match correlations::nn_correlations(delta, &cfg.quad) {
            Ok(corr) => {
                record.neighbors.push(neighbor_record(&corr));
                nn = Some(corr);
            }
            Err(e) => record.flags.push(format!("r1:error:{e}")),
        }
    }

    let far: Vec<usize> = cfg.neighbors.iter().copied().filter(|&r| r > 1).collect();
    if !far.is_empty() {
        match ed::diagonalize(delta, &cfg.ed) {
            Ok(results) => {
                for &r in &far {
                    match correlations::correlations_from_results(&results, r, &cfg.ed) {
                        Ok(corr) => {
                            if corr.low_confidence {
                                record.flags.push(format!("r{r}:low_confidence"));
                            }
                            record.neighbors.push(neighbor_record(&corr));
                        }
                        Err(e) => record.flags.push(format!("r{r}:error:{e}")),
                    }
                }
            }
            Err(e) => record.flags.push(format!("ed:error:{e}")),
        }
    }
    record.neighbors.sort_by_key(|n| n.r);

    if let Some(corr) = nn {
        let f0 = (
            measures::concurrence_symmetric(&corr),
            measures::bell_measure_symmetric(&corr),
        );
        let mut noise: (f64, f64) = (0.0, 0.0);
        match sided_stencil(delta, bethe::Side::Left, cfg.derivative_step, &cfg.quad, f0) {
            Ok(((dc, db), (nc, nb))) => {
                record.d_conc_left = Some(dc);
                record.d_bell_left = Some(db);
                noise = (nc, nb);
            }
            Err(e) => record.flags.push(format!("d_left:error:{e}")),
        }
        match sided_stencil(delta, bethe::Side::Right, cfg.derivative_step, &cfg.quad, f0) {
            Ok(((dc, db), (nc, nb))) => {
                record.d_conc_right = Some(dc);
                record.d_bell_right = Some(db);
                record.d_conc_noise = Some(noise.0.max(nc));
                record.d_bell_noise = Some(noise.1.max(nb));
            }
            Err(e) => record.flags.push(format!("d_right:error:{e}")),
        }
    }

    record
}

/// Evaluate every configured quantity on the Δ grid. Failures are recorded
/// per point; the sweep itself only fails on an invalid configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let grid = cfg.grid();
    Ok(grid
        .par_iter()
        .map(|&delta| build_record(delta, cfg))
        .collect())
}

// ---------------------------------------------------------------------------
// Transition detection
// ---------------------------------------------------------------------------

/// First-order candidate: a jump of `tzz` between adjacent grid points with
/// derivative magnitudes growing toward the transition from the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderCandidate {
    pub bracket: (f64, f64),
    pub tzz_jump: f64,
    pub offsets: [f64; 3],
    pub conc_derivative_magnitudes: [f64; 3],
    pub bell_derivative_magnitudes: [f64; 3],
}

/// Kosterlitz-Thouless candidate: the Bell measure's one-sided derivatives
/// disagree far beyond the estimator noise while the concurrence's agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KtCandidate {
    pub delta: f64,
    pub bell_kink: f64,
    pub bell_noise: f64,
    pub conc_mismatch: f64,
    pub conc_noise: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub first_order: Vec<FirstOrderCandidate>,
    pub kt: Vec<KtCandidate>,
}

impl TransitionReport {
    pub fn is_empty(&self) -> bool {
        self.first_order.is_empty() && self.kt.is_empty()
    }
}

const JUMP_THRESHOLD: f64 = 0.1;
const GROWTH_OFFSETS: [f64; 3] = [1e-1, 1e-2, 1e-3];
const KT_KINK_FACTOR: f64 = 10.0;
const CONC_NOISE_FLOOR: f64 = 1e-9;
const MIN_SIDE_POINTS: usize = 50;

/// Scan a sweep for the first-order and Kosterlitz-Thouless signatures.
///
/// A grid that straddles a known boundary (Δ = ±1) must carry at least 50
/// points on each side of it; grids that stay clear of a boundary simply
/// skip it (a sweep of the gapless interior reports nothing).
pub fn detect_transitions(
    records: &[SweepRecord],
    quad: &QuadratureConfig,
    derivative_step: f64,
) -> Result<TransitionReport> {
    if records.len() < 2 {
        return Err(Error::InsufficientData(
            "transition detection needs at least 2 records".into(),
        ));
    }
    for boundary in [-1.0, 1.0] {
        let below = records.iter().filter(|r| r.delta < boundary).count();
        let above = records.iter().filter(|r| r.delta > boundary).count();
        if below > 0 && above > 0 && (below < MIN_SIDE_POINTS || above < MIN_SIDE_POINTS) {
            return Err(Error::GridCoverage(format!(
                "boundary {boundary} straddled with {below}/{above} points; need {MIN_SIDE_POINTS} per side"
            )));
        }
    }

    let mut report = TransitionReport::default();
    let valid: Vec<(&SweepRecord, &NeighborRecord)> = records
        .iter()
        .filter_map(|rec| rec.neighbor(1).map(|n| (rec, n)))
        .collect();

    for pair in valid.windows(2) {
        let (rec_a, nn_a) = pair[0];
        let (rec_b, nn_b) = pair[1];
        let jump = (nn_b.tzz - nn_a.tzz).abs();
        if jump > JUMP_THRESHOLD {
            // Confirm by derivative growth approaching from the right.
            let anchor = rec_a.delta;
            let mut conc_mags = [0.0; 3];
            let mut bell_mags = [0.0; 3];
            let mut ok = true;
            for (slot, &offset) in GROWTH_OFFSETS.iter().enumerate() {
                let x = anchor + offset;
                match conc_bell_at(x, quad).and_then(|f0| {
                    sided_stencil(x, bethe::Side::Right, derivative_step, quad, f0)
                }) {
                    Ok(((dc, db), _)) => {
                        conc_mags[slot] = dc.abs();
                        bell_mags[slot] = db.abs();
                    }
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            let monotone = |m: &[f64; 3]| m[0] < m[1] && m[1] < m[2];
            if ok && monotone(&conc_mags) && monotone(&bell_mags) {
                report.first_order.push(FirstOrderCandidate {
                    bracket: (rec_a.delta, rec_b.delta),
                    tzz_jump: jump,
                    offsets: GROWTH_OFFSETS,
                    conc_derivative_magnitudes: conc_mags,
                    bell_derivative_magnitudes: bell_mags,
                });
            }
        }
    }

    for pair in valid.windows(2) {
        let (rec_a, nn_a) = pair[0];
        let (rec_b, nn_b) = pair[1];
        if nn_a.bell_branch == nn_b.bell_branch {
            continue;
        }
        // Anchor at the point closest to the branch crossing |txx| = |tzz|.
        let gap_a = (nn_a.txx.abs() - nn_a.tzz.abs()).abs();
        let gap_b = (nn_b.txx.abs() - nn_b.tzz.abs()).abs();
        let anchor = if gap_a <= gap_b { rec_a } else { rec_b };
        let (Some(dbl), Some(dbr), Some(nb), Some(dcl), Some(dcr), Some(nc)) = (
            anchor.d_bell_left,
            anchor.d_bell_right,
            anchor.d_bell_noise,
            anchor.d_conc_left,
            anchor.d_conc_right,
            anchor.d_conc_noise,
        ) else {
            continue;
        };
        let bell_kink = (dbl - dbr).abs();
        let conc_mismatch = (dcl - dcr).abs();
        if bell_kink > KT_KINK_FACTOR * nb && conc_mismatch <= nc.max(CONC_NOISE_FLOOR) {
            report.kt.push(KtCandidate {
                delta: anchor.delta,
                bell_kink,
                bell_noise: nb,
                conc_mismatch,
                conc_noise: nc,
            });
        }
    }

    Ok(report)
}
