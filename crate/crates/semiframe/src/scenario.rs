//! Scenario files.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! schema_version = 1
//! name = "geometric"
//! seed = 7
//! noise_sigma = 0.0
//! sweep = [4, 8, 12, 16]
//! trials = 50
//!
//! [spectrum]
//! dimension = 16
//! generator = { kind = "geometric", ratio = 0.5 }
//! # or: values = [[1.0, 0.0], [2.0, 0.5]]
//!
//! [vectors]
//! kind = "canonical"            # g_j = sqrt(Re λ_j)
//! # or: kind = "explicit", rows = [[[1.0, 0.0], [0.5, 0.0]]]
//!
//! [grid]
//! kind = "uniform"
//! step = 0.05
//! cap = 400
//! # or: kind = "finite", points = [0.0, 0.1, 0.3]
//!
//! [signal]
//! kind = "random"               # or kind = "explicit", values = [[re, im], ...]
//!
//! [config]
//! carleson_threshold = 50.0
//! ```
//!
//! Complex scalars are two-element `[re, im]` arrays. Generators produce
//! `λ_j` for `j = 1, 2, ...` (`offset` and `slope` are complex):
//!
//! | kind | `λ_j` |
//! |------|-------|
//! | `geometric` | `scale · ratio^j` |
//! | `harmonic` | `scale / j` |
//! | `linear` | `offset + slope · j` |
//! | `custom` | `re_scale · j^re_power + i · im_scale · j^im_power` |

use serde::{Deserialize, Serialize};

use semiframe_core::conditions::{DEFAULT_CARLESON_THRESHOLD, DEFAULT_INTERPOLATING_FLOOR};
use semiframe_core::discretization::{TimeGrid, DEFAULT_HORIZON_STEP, DEFAULT_RIEMANN_BAND};
use semiframe_core::frame::VectorKind;
use semiframe_core::{Error as CoreError, Spectrum, VectorSet, C64};

use crate::error::{RunError, RunResult};

/// Version of the scenario and report schemas.
pub const SCHEMA_VERSION: u32 = 1;

/// A complex scalar written as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "[f64; 2]")]
pub struct ComplexValue(pub C64);

impl TryFrom<Vec<f64>> for ComplexValue {
    type Error = String;

    fn try_from(v: Vec<f64>) -> Result<Self, String> {
        match v.as_slice() {
            [re, im] => Ok(ComplexValue(C64::new(*re, *im))),
            _ => Err(format!(
                "complex scalar must be a two-element [re, im] array, found {} element(s)",
                v.len()
            )),
        }
    }
}

impl From<ComplexValue> for [f64; 2] {
    fn from(c: ComplexValue) -> Self {
        [c.0.re, c.0.im]
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Geometric {
        ratio: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Harmonic {
        #[serde(default = "one")]
        scale: f64,
    },
    Linear {
        offset: ComplexValue,
        slope: ComplexValue,
    },
    Custom {
        re_scale: f64,
        re_power: f64,
        #[serde(default)]
        im_scale: f64,
        #[serde(default)]
        im_power: f64,
    },
}

impl GeneratorSpec {
    /// `λ_j`, `j >= 1`.
    pub fn lambda(&self, j: usize) -> C64 {
        let jf = j as f64;
        match *self {
            GeneratorSpec::Geometric { ratio, scale } => C64::new(scale * ratio.powi(j as i32), 0.0),
            GeneratorSpec::Harmonic { scale } => C64::new(scale / jf, 0.0),
            GeneratorSpec::Linear { offset, slope } => offset.0 + slope.0 * jf,
            GeneratorSpec::Custom {
                re_scale,
                re_power,
                im_scale,
                im_power,
            } => C64::new(re_scale * jf.powf(re_power), im_scale * jf.powf(im_power)),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    dimension: Option<usize>,
    generator: Option<GeneratorSpec>,
    values: Option<Vec<ComplexValue>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VectorSpec {
    Canonical,
    Explicit { rows: Vec<Vec<ComplexValue>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Uniform { step: f64, cap: Option<usize> },
    Finite { points: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    /// Complex Gaussian coordinates drawn from the scenario seed.
    Random,
    Explicit {
        values: Vec<ComplexValue>,
    },
}

/// Thresholds and tolerances; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub carleson_threshold: f64,
    pub interpolating_floor: f64,
    pub c_bound_threshold: f64,
    pub cluster_floor: f64,
    pub riemann_band: f64,
    pub oracle_tol: f64,
    /// Number of random test vectors per truncation in the oracle checks.
    pub oracle_samples: usize,
    pub horizon_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            carleson_threshold: DEFAULT_CARLESON_THRESHOLD,
            interpolating_floor: DEFAULT_INTERPOLATING_FLOOR,
            c_bound_threshold: 10.0,
            cluster_floor: 1e-10,
            riemann_band: DEFAULT_RIEMANN_BAND,
            oracle_tol: 1e-10,
            oracle_samples: 3,
            horizon_step: DEFAULT_HORIZON_STEP,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: u32,
    name: String,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    noise_sigma: f64,
    sweep: Option<Vec<usize>>,
    trials: Option<usize>,
    spectrum: RawSpectrum,
    vectors: Option<VectorSpec>,
    grid: Option<GridSpec>,
    signal: Option<SignalSpec>,
    #[serde(default)]
    config: RunConfig,
}

/// Where the eigenvalues come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    Generator(GeneratorSpec),
    Values(Vec<ComplexValue>),
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub noise_sigma: f64,
    pub dimension: usize,
    pub sweep: Vec<usize>,
    pub trials: usize,
    pub spectrum: SpectrumSource,
    pub vectors: VectorSpec,
    pub grid: Option<GridSpec>,
    pub signal: SignalSpec,
    pub config: RunConfig,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> RunResult<Scenario> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => {
                let (l, c) = line_col(text, span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        RunError::Parse {
            message: e.message().to_string(),
            line,
            column,
        }
    })?;
    validate(raw)
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &std::path::Path) -> RunResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

fn finite_positive(field: &str, x: f64) -> RunResult<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(RunError::validation(field, "must be finite and > 0"));
    }
    Ok(())
}

fn validate(raw: RawScenario) -> RunResult<Scenario> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(RunError::validation(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", raw.schema_version),
        ));
    }
    if !(raw.noise_sigma >= 0.0 && raw.noise_sigma.is_finite()) {
        return Err(RunError::validation("noise_sigma", "must be finite and >= 0"));
    }
    let c = &raw.config;
    finite_positive("config.carleson_threshold", c.carleson_threshold)?;
    finite_positive("config.interpolating_floor", c.interpolating_floor)?;
    finite_positive("config.c_bound_threshold", c.c_bound_threshold)?;
    finite_positive("config.cluster_floor", c.cluster_floor)?;
    finite_positive("config.riemann_band", c.riemann_band)?;
    finite_positive("config.oracle_tol", c.oracle_tol)?;
    finite_positive("config.horizon_step", c.horizon_step)?;

    let (spectrum, available) = match (raw.spectrum.generator, raw.spectrum.values) {
        (Some(_), Some(_)) => {
            return Err(RunError::validation(
                "spectrum",
                "give either `generator` or `values`, not both",
            ));
        }
        (None, None) => return Err(RunError::validation("spectrum", "needs `generator` or `values`")),
        (Some(g), None) => (SpectrumSource::Generator(g), None),
        (None, Some(v)) => {
            if v.is_empty() {
                return Err(RunError::validation("spectrum.values", "at least one eigenvalue"));
            }
            for (i, z) in v.iter().enumerate() {
                if !(z.0.re > 0.0) || !z.0.im.is_finite() || !z.0.re.is_finite() {
                    return Err(RunError::validation(format!("spectrum.values[{i}]"), "Re(λ) > 0"));
                }
            }
            let n = v.len();
            (SpectrumSource::Values(v), Some(n))
        }
    };
    let dimension = match (raw.spectrum.dimension, available) {
        (Some(d), Some(n)) if d != n => {
            return Err(RunError::validation(
                "spectrum.dimension",
                format!("{d} does not match the {n} listed eigenvalues"),
            ));
        }
        (Some(d), _) => d,
        (None, Some(n)) => n,
        (None, None) => return Err(RunError::validation("spectrum.dimension", "required with a generator")),
    };
    if dimension == 0 {
        return Err(RunError::validation("spectrum.dimension", "must be >= 1"));
    }

    let vectors = raw.vectors.unwrap_or(VectorSpec::Canonical);
    let signal = raw.signal.unwrap_or(SignalSpec::Random);
    let trials = raw.trials.unwrap_or(1);
    if trials == 0 {
        return Err(RunError::validation("trials", "must be >= 1"));
    }
    if let Some(grid) = &raw.grid {
        grid_from_spec(grid)?;
    }
    let mut scenario = Scenario {
        name: raw.name,
        seed: raw.seed,
        noise_sigma: raw.noise_sigma,
        dimension,
        sweep: Vec::new(),
        trials,
        spectrum,
        vectors,
        grid: raw.grid,
        signal,
        config: raw.config,
    };
    scenario.set_sweep(raw.sweep.unwrap_or_else(|| vec![dimension]))?;
    Ok(scenario)
}

fn grid_from_spec(spec: &GridSpec) -> RunResult<TimeGrid> {
    let grid = match spec {
        GridSpec::Uniform { step, cap } => TimeGrid::uniform(*step, *cap),
        GridSpec::Finite { points } => TimeGrid::finite(points.clone()),
    };
    grid.map_err(|e| RunError::validation("grid", e))
}

impl Scenario {
    /// Largest truncation the scenario data supports, `None` if unbounded.
    pub fn capacity(&self) -> Option<usize> {
        let mut cap: Option<usize> = match &self.spectrum {
            SpectrumSource::Values(v) => Some(v.len()),
            SpectrumSource::Generator(_) => None,
        };
        let mut tighten = |n: usize| cap = Some(cap.map_or(n, |c| c.min(n)));
        if let VectorSpec::Explicit { rows } = &self.vectors {
            tighten(rows.iter().map(Vec::len).min().unwrap_or(0));
        }
        if let SignalSpec::Explicit { values } = &self.signal {
            tighten(values.len());
        }
        cap
    }

    /// Replaces the sweep, checking every entry against the data.
    pub fn set_sweep(&mut self, sweep: Vec<usize>) -> RunResult<()> {
        if sweep.is_empty() {
            return Err(RunError::validation("sweep", "at least one truncation"));
        }
        let cap = self.capacity();
        for (i, &n) in sweep.iter().enumerate() {
            if n == 0 {
                return Err(RunError::validation(format!("sweep[{i}]"), "N >= 1"));
            }
            if let Some(c) = cap {
                if n > c {
                    return Err(RunError::validation(
                        format!("sweep[{i}]"),
                        format!("N = {n} exceeds the {c} available coordinates"),
                    ));
                }
            }
        }
        let max_n = *sweep.iter().max().unwrap_or(&1);
        if let VectorSpec::Explicit { rows } = &self.vectors {
            if rows.is_empty() {
                return Err(RunError::validation("vectors.rows", "at least one vector"));
            }
            let width = rows[0].len();
            if rows.iter().any(|r| r.len() != width) {
                return Err(RunError::validation("vectors.rows", "all vectors have the same length"));
            }
        }
        // eigenvalue validity for generated spectra
        self.spectrum(max_n)?;
        self.sweep = sweep;
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        self.sweep.iter().copied().max().unwrap_or(self.dimension)
    }

    /// First `n` eigenvalues.
    pub fn spectrum(&self, n: usize) -> RunResult<Spectrum> {
        let result = match &self.spectrum {
            SpectrumSource::Generator(g) => Spectrum::generate(&|j: usize| g.lambda(j), n),
            SpectrumSource::Values(v) => {
                if n > v.len() {
                    return Err(RunError::validation(
                        "sweep",
                        format!("N = {n} exceeds {} eigenvalues", v.len()),
                    ));
                }
                Spectrum::new(&v[..n].iter().map(|z| z.0).collect::<Vec<_>>())
            }
        };
        result.map_err(|e| match e {
            CoreError::DomainViolation { index, invariant } => RunError::validation(
                "spectrum.generator",
                format!("{invariant} violated at j = {}", index + 1),
            ),
            other => RunError::validation("spectrum", other),
        })
    }

    /// Sampling vectors restricted to the first `spec.dim()` coordinates.
    pub fn vectors(&self, spec: &Spectrum) -> RunResult<VectorSet> {
        match &self.vectors {
            VectorSpec::Canonical => Ok(VectorSet::canonical(spec)),
            VectorSpec::Explicit { rows } => {
                let n = spec.dim();
                let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().take(n).map(|z| z.0).collect()).collect();
                VectorSet::from_rows(&rows, VectorKind::ContinuousG)
                    .map_err(|e| RunError::validation("vectors.rows", e))
            }
        }
    }

    /// Number of sampling vectors `m`.
    pub fn vector_count(&self) -> usize {
        match &self.vectors {
            VectorSpec::Canonical => 1,
            VectorSpec::Explicit { rows } => rows.len(),
        }
    }

    pub fn grid(&self) -> Option<TimeGrid> {
        self.grid
            .as_ref()
            .map(|g| grid_from_spec(g).expect("grid validated at parse time"))
    }

    /// Truncation-`n` signal for explicit signals.
    pub fn explicit_signal(&self, n: usize) -> Option<Vec<C64>> {
        match &self.signal {
            SignalSpec::Explicit { values } => Some(values.iter().take(n).map(|z| z.0).collect()),
            SignalSpec::Random => None,
        }
    }

    /// Generator of the spectrum, if any.
    pub fn generator(&self) -> Option<&GeneratorSpec> {
        match &self.spectrum {
            SpectrumSource::Generator(g) => Some(g),
            SpectrumSource::Values(_) => None,
        }
    }
}
