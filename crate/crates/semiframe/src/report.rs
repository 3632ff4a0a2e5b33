//! Run reports and their JSON / CSV encodings.
//!
//! Field order is fixed by the struct definitions. Floats are printed with
//! 17 significant digits so reports are byte-identical for identical runs.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{RunError, RunResult};
use crate::scenario::{GeneratorSpec, GridSpec, RunConfig, SCHEMA_VERSION};

/// Name of the pseudo-random generator that drives every stochastic draw:
/// `rand_chacha::ChaCha8Rng` seeded with `SeedableRng::seed_from_u64(seed)`.
pub const PRNG_NAME: &str = "chacha8-seed_from_u64-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub scenario: ScenarioEcho,
    /// One row per truncation in the sweep.
    pub rows: Vec<SweepRow>,
    pub equivalence: Option<EquivalenceSection>,
    pub conditions: Option<ConditionsSection>,
    pub discretization: Option<DiscretizationSection>,
    pub reconstruction: Option<ReconstructionSection>,
    /// Failures of individual stages; the other stages still ran.
    pub stage_errors: Vec<StageError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(command: &str, scenario: ScenarioEcho) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            scenario,
            rows: Vec::new(),
            equivalence: None,
            conditions: None,
            discretization: None,
            reconstruction: None,
            stage_errors: Vec::new(),
            timing: None,
        }
    }

    pub fn row_mut(&mut self, n: usize) -> Option<&mut SweepRow> {
        self.rows.iter_mut().find(|r| r.n == n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub seed: u64,
    pub prng: String,
    pub noise_sigma: f64,
    pub dimension: usize,
    pub sweep: Vec<usize>,
    pub trials: usize,
    /// Number of sampling vectors.
    pub m: usize,
    pub generator: Option<GeneratorSpec>,
    pub grid: Option<GridSpec>,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    /// Continuous frame bounds at truncation `n`.
    pub lower: f64,
    pub upper: f64,
    pub min_eigenvalue: f64,
    pub numerically_zero: bool,
    /// Cayley equivalence residual.
    pub residual: Option<f64>,
    pub structural: Option<bool>,
    pub riemann_consistent: Option<bool>,
    pub reconstruction_ok: Option<bool>,
}

impl SweepRow {
    pub fn flags(&self) -> String {
        let mut f = vec![if self.lower > 0.0 && !self.numerically_zero {
            "frame"
        } else {
            "not_frame"
        }];
        if self.numerically_zero {
            f.push("numerically_zero");
        }
        let mut tag = |v: Option<bool>, yes: &'static str, no: &'static str| {
            if let Some(b) = v {
                f.push(if b { yes } else { no });
            }
        };
        tag(self.structural, "structural_pass", "structural_fail");
        tag(self.riemann_consistent, "riemann_ok", "riemann_off");
        tag(self.reconstruction_ok, "reconstruction_ok", "reconstruction_violation");
        f.join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub n: usize,
    pub cayley_residual: f64,
    /// Largest `|quadrature - closed form|` over the random test vectors.
    pub continuous_oracle_error: Option<f64>,
    /// Largest `|power sum - closed form|` over the random test vectors.
    pub discrete_oracle_error: Option<f64>,
    pub oracle_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceSection {
    pub rows: Vec<EquivalenceRow>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub n: usize,
    pub c_bound: f64,
    pub c_bound_ok: bool,
    pub carleson_constant: f64,
    pub carleson_witness: usize,
    pub carleson_box_estimate: f64,
    pub is_carleson: bool,
    pub beta: Option<f64>,
    pub max_count: usize,
    pub separation_ok: bool,
    pub gamma: Option<f64>,
    pub min_sigma_sq: Option<f64>,
    pub cluster_ok: bool,
    pub structural: bool,
    pub numerical_frame: bool,
    pub agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCurvePoint {
    pub n: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolatingSection {
    pub curve: Vec<EigenCurvePoint>,
    pub floor: f64,
    pub interpolating: bool,
    pub plateau_ratio: Option<f64>,
    pub carleson_constant: f64,
    pub separated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionsSection {
    pub rows: Vec<ConditionRow>,
    /// Present when `m = 1` and the points are distinct.
    pub interpolating: Option<InterpolatingSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub delta: f64,
    pub delta0: f64,
    pub epsilon: f64,
    /// `None` for unbounded grids.
    pub horizon: Option<f64>,
    pub bessel_k: f64,
    pub m: f64,
    pub omega: f64,
    pub c: f64,
    pub upper: f64,
    pub lambda_max: f64,
    pub lhs: f64,
    pub guaranteed_lower: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonDto {
    pub horizon: f64,
    pub step: f64,
    pub guaranteed_lower: f64,
    /// Exact `[0, L]` lower bound.
    pub exact_lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDto {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub step: Option<f64>,
    pub scaled_lower: Option<f64>,
    pub scaled_upper: Option<f64>,
    pub lower_deviation: Option<f64>,
    pub upper_deviation: Option<f64>,
    pub band: f64,
    pub riemann_consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DichotomyDto {
    pub margin: f64,
    pub stable: bool,
    pub horizon: Option<f64>,
    pub horizon_lower: Option<f64>,
    pub finite_horizon_frame: bool,
    pub grid_points: Option<usize>,
    pub grid_lower: Option<f64>,
    pub finite_grid_frame: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationRow {
    pub n: usize,
    pub certificate: Option<CertificateDto>,
    pub horizon: Option<HorizonDto>,
    pub grid: Option<GridDto>,
    pub dichotomy: Option<DichotomyDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginPoint {
    pub n: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationSection {
    pub rows: Vec<DiscretizationRow>,
    /// `margin(N)` over the sweep when the spectrum is generated.
    pub margin_trend: Vec<MarginPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionRow {
    pub n: usize,
    pub samples: usize,
    /// Smallest eigenvalue of `S^* S` for the sampled analysis operator `S`.
    pub c_est: f64,
    pub upper_est: f64,
    pub method: String,
    pub noise_free_relative_error: f64,
    pub trials: usize,
    /// Trials with `||f̂ - f|| > ||e|| / sqrt(c_est)`.
    pub violations: usize,
    /// Largest `||f̂ - f|| / (||e|| / sqrt(c_est))`.
    pub max_bound_ratio: f64,
    pub mean_relative_error: f64,
    /// Last trial: error norm and its bound.
    pub last_error: f64,
    pub last_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSection {
    pub rows: Vec<ReconstructionRow>,
    pub noise_sigma: f64,
    pub prng: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub n: Option<usize>,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Pretty JSON with every float in `{:.16e}` form.
struct FullPrecision(PrettyFormatter<'static>);

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: [&str; 5] = ["n", "lower", "upper", "residual", "flags"];

pub fn emit_report(report: &RunReport, format: Format) -> RunResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = Vec::new();
            let mut ser = Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::new()));
            report
                .serialize(&mut ser)
                .map_err(|e| RunError::Serialize(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| RunError::Serialize(e.to_string());
            w.write_record(CSV_HEADER).map_err(err)?;
            for row in &report.rows {
                w.write_record([
                    row.n.to_string(),
                    float(row.lower),
                    float(row.upper),
                    row.residual.map(float).unwrap_or_default(),
                    row.flags(),
                ])
                .map_err(err)?;
            }
            w.into_inner().map_err(|e| RunError::Serialize(e.to_string()))
        }
    }
}

pub fn parse_json_report(bytes: &[u8]) -> RunResult<RunReport> {
    serde_json::from_slice(bytes).map_err(|e| RunError::Serialize(e.to_string()))
}
