//! CSV and JSON emission of sweep results.
//!
//! Four files per run: the sweep table (one row per Δ), the `(txx, tzz)`
//! trajectory per separation with the four marked anisotropies, the region
//! boundary polylines, and the derivative table. CSV uses a `.` decimal
//! separator and 17 significant digits; JSON mirrors the same data with
//! explicit field names and parses back field-for-field.

use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::correlations;
use crate::ed;
use crate::error::{Error, Result};
use crate::pair_state::BoundaryPolyline;
use crate::sweep::{SweepConfig, SweepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}; use csv or json")),
        }
    }
}

/// One point of the `(txx, tzz)` trajectory of a separation `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub r: usize,
    pub delta: f64,
    pub txx: f64,
    pub tzz: f64,
    /// Marker name for the four highlighted anisotropies, empty otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker: Option<String>,
}

/// The four marked anisotropies of the trajectory plot.
pub const TRAJECTORY_MARKERS: [(f64, &str); 4] = [
    (-1.0, "circle"),
    (-0.999, "square"),
    (0.0, "triangle"),
    (1.0, "diamond"),
];

/// Assemble trajectory points from sweep records and evaluate the marker
/// anisotropies that fall inside the sweep range (they need not be grid
/// points). Markers that fail to evaluate are skipped with a warning note.
pub fn build_trajectory(
    cfg: &SweepConfig,
    records: &[SweepRecord],
) -> (Vec<TrajectoryPoint>, Vec<String>) {
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    let mut rs: Vec<usize> = cfg.neighbors.clone();
    rs.sort_unstable();

    for &r in &rs {
        for rec in records {
            if let Some(n) = rec.neighbor(r) {
                points.push(TrajectoryPoint {
                    r,
                    delta: rec.delta,
                    txx: n.txx,
                    tzz: n.tzz,
                    marker: None,
                });
            }
        }
    }

    for (delta, name) in TRAJECTORY_MARKERS {
        if delta < cfg.delta_min || delta > cfg.delta_max {
            continue;
        }
        let far_results = if rs.iter().any(|&r| r > 1) {
            match ed::diagonalize(delta, &cfg.ed) {
                Ok(res) => Some(res),
                Err(e) => {
                    warnings.push(format!("marker {name} at delta {delta}: {e}"));
                    None
                }
            }
        } else {
            None
        };
        for &r in &rs {
            let corr = if r == 1 {
                correlations::nn_correlations(delta, &cfg.quad)
            } else if let Some(results) = &far_results {
                correlations::correlations_from_results(results, r, &cfg.ed)
            } else {
                continue;
            };
            match corr {
                Ok(c) => points.push(TrajectoryPoint {
                    r,
                    delta,
                    txx: c.txx,
                    tzz: c.tzz,
                    marker: Some(name.to_string()),
                }),
                Err(e) => warnings.push(format!("marker {name} r={r} at delta {delta}: {e}")),
            }
        }
    }

    points.sort_by(|a, b| {
        a.r.cmp(&b.r)
            .then(a.delta.total_cmp(&b.delta))
            .then(a.marker.is_some().cmp(&b.marker.is_some()))
    });
    (points, warnings)
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

/// 17 significant digits, enough to reproduce any f64 exactly.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(BufWriter::new(file))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path.display().to_string(), e)
}

/// Wrapper giving the sweep JSON a stable top-level shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub records: Vec<SweepRecord>,
}

fn write_sweep_csv(path: &Path, records: &[SweepRecord], rs: &[usize]) -> Result<()> {
    let mut w = create(path)?;
    let mut header = vec!["delta".to_string(), "e0".to_string()];
    for r in rs {
        for col in [
            "txx", "tzz", "concurrence", "bell", "region", "bell_branch", "low_confidence",
        ] {
            header.push(format!("{col}_r{r}"));
        }
    }
    header.extend(
        [
            "d_bell_left",
            "d_bell_right",
            "d_bell_noise",
            "d_conc_left",
            "d_conc_right",
            "d_conc_noise",
            "flags",
        ]
        .map(str::to_string),
    );
    writeln!(w, "{}", header.join(",")).map_err(io_err(path))?;

    for rec in records {
        let mut row = vec![fmt(rec.delta), fmt_opt(rec.e0)];
        for &r in rs {
            match rec.neighbor(r) {
                Some(n) => {
                    row.push(fmt(n.txx));
                    row.push(fmt(n.tzz));
                    row.push(fmt(n.concurrence));
                    row.push(fmt(n.bell));
                    row.push(n.region.to_string());
                    row.push(format!("{:?}", n.bell_branch));
                    row.push(n.low_confidence.to_string());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 7)),
            }
        }
        row.push(fmt_opt(rec.d_bell_left));
        row.push(fmt_opt(rec.d_bell_right));
        row.push(fmt_opt(rec.d_bell_noise));
        row.push(fmt_opt(rec.d_conc_left));
        row.push(fmt_opt(rec.d_conc_right));
        row.push(fmt_opt(rec.d_conc_noise));
        row.push(rec.flags.join(";"));
        writeln!(w, "{}", row.join(",")).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_trajectory_csv(path: &Path, points: &[TrajectoryPoint]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "r,delta,txx,tzz,marker").map_err(io_err(path))?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.r,
            fmt(p.delta),
            fmt(p.txx),
            fmt(p.tzz),
            p.marker.as_deref().unwrap_or("")
        )
        .map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_boundaries_csv(path: &Path, boundaries: &[BoundaryPolyline]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "name,point_index,txx,tzz").map_err(io_err(path))?;
    for poly in boundaries {
        for (i, p) in poly.points.iter().enumerate() {
            writeln!(w, "{},{},{},{}", poly.name, i, fmt(p[0]), fmt(p[1])).map_err(io_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

fn write_derivatives_csv(path: &Path, records: &[SweepRecord]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "delta,d_conc_left,d_conc_right,d_conc_noise,d_bell_left,d_bell_right,d_bell_noise"
    )
    .map_err(io_err(path))?;
    for rec in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt(rec.delta),
            fmt_opt(rec.d_conc_left),
            fmt_opt(rec.d_conc_right),
            fmt_opt(rec.d_conc_noise),
            fmt_opt(rec.d_bell_left),
            fmt_opt(rec.d_bell_right),
            fmt_opt(rec.d_bell_noise),
        )
        .map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::io(path.display().to_string(), e.into()))?;
    w.flush().map_err(io_err(path))
}

/// Write the four output files in the requested format. Returns the paths
/// written, in a deterministic order.
pub fn emit(
    records: &[SweepRecord],
    trajectory: &[TrajectoryPoint],
    boundaries: &[BoundaryPolyline],
    format: OutputFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Domain("no records to emit".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let mut rs: Vec<usize> = records
        .iter()
        .flat_map(|rec| rec.neighbors.iter().map(|n| n.r))
        .collect();
    rs.sort_unstable();
    rs.dedup();

    let mut written = Vec::new();
    match format {
        OutputFormat::Csv => {
            let sweep = out_dir.join("sweep.csv");
            write_sweep_csv(&sweep, records, &rs)?;
            let traj = out_dir.join("trajectory.csv");
            write_trajectory_csv(&traj, trajectory)?;
            let bounds = out_dir.join("region_boundaries.csv");
            write_boundaries_csv(&bounds, boundaries)?;
            let derivs = out_dir.join("derivatives.csv");
            write_derivatives_csv(&derivs, records)?;
            written.extend([sweep, traj, bounds, derivs]);
        }
        OutputFormat::Json => {
            let sweep = out_dir.join("sweep.json");
            write_json(
                &sweep,
                &SweepTable {
                    records: records.to_vec(),
                },
            )?;
            let traj = out_dir.join("trajectory.json");
            write_json(&traj, &trajectory)?;
            let bounds = out_dir.join("region_boundaries.json");
            write_json(&bounds, &boundaries)?;
            #[derive(Serialize)]
            struct DerivativeRow {
                delta: f64,
                d_conc_left: Option<f64>,
                d_conc_right: Option<f64>,
                d_conc_noise: Option<f64>,
                d_bell_left: Option<f64>,
                d_bell_right: Option<f64>,
                d_bell_noise: Option<f64>,
            }
            let rows: Vec<DerivativeRow> = records
                .iter()
                .map(|rec| DerivativeRow {
                    delta: rec.delta,
                    d_conc_left: rec.d_conc_left,
                    d_conc_right: rec.d_conc_right,
                    d_conc_noise: rec.d_conc_noise,
                    d_bell_left: rec.d_bell_left,
                    d_bell_right: rec.d_bell_right,
                    d_bell_noise: rec.d_bell_noise,
                })
                .collect();
            let derivs = out_dir.join("derivatives.json");
            write_json(&derivs, &rows)?;
            written.extend([sweep, traj, bounds, derivs]);
        }
    }
    Ok(written)
}
