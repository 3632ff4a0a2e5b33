//! Scenario runs. Each stage runs per truncation; a failing stage is
//! recorded in `stage_errors` and the remaining stages still run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semiframe_core::conditions::{full_theorem_check, interpolating_test_m1, ConditionConfig};
use semiframe_core::discretization::{
    finite_horizon, finite_horizon_quadform, search_delta, stability_dichotomy, verify_grid_frame,
    DiscretizationCertificate, GridFrameReport,
};
use semiframe_core::frame::{
    cayley_residual, cayley_transform_vectors, frame_bounds, oracle_continuous, oracle_discrete, quadform_continuous,
    quadform_discrete, FrameBounds, OracleOptions,
};
use semiframe_core::operators::{stability, StabilityReport};
use semiframe_core::{Spectrum, VectorSet, C64};

use crate::error::{ExitStatus, RunError, RunResult};
use crate::reconstruct::{complex_gaussian, reconstruct_trials};
use crate::report::{
    CertificateDto, ConditionRow, ConditionsSection, DichotomyDto, DiscretizationRow, DiscretizationSection,
    EigenCurvePoint, EquivalenceRow, EquivalenceSection, GridDto, HorizonDto, InterpolatingSection, MarginPoint,
    ReconstructionSection, RunReport, ScenarioEcho, StageError, SweepRow, PRNG_NAME,
};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Equivalence,
    Discretize,
    Conditions,
    Reconstruct,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Equivalence => "equivalence",
            Command::Discretize => "discretize",
            Command::Conditions => "conditions",
            Command::Reconstruct => "reconstruct",
        }
    }
}

pub fn echo(s: &Scenario) -> ScenarioEcho {
    ScenarioEcho {
        name: s.name.clone(),
        seed: s.seed,
        prng: PRNG_NAME.to_string(),
        noise_sigma: s.noise_sigma,
        dimension: s.dimension,
        sweep: s.sweep.clone(),
        trials: s.trials,
        m: s.vector_count(),
        generator: s.generator().cloned(),
        grid: s.grid.clone(),
        config: s.config.clone(),
    }
}

/// One truncation of a scenario.
struct Truncation {
    n: usize,
    spec: Spectrum,
    g: VectorSet,
    bounds: FrameBounds,
}

fn error_kind(e: &RunError) -> &'static str {
    match e {
        RunError::Parse { .. } => "parse",
        RunError::Validation { .. } => "validation",
        RunError::Io { .. } => "io",
        RunError::Serialize(_) => "serialize",
        RunError::Core(c) => match ExitStatus::for_core(c) {
            ExitStatus::Invariant => "invariant",
            ExitStatus::Numerical => "numerical",
            _ => "domain",
        },
    }
}

fn record<T>(report: &mut RunReport, stage: &str, n: Option<usize>, r: RunResult<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            report.stage_errors.push(StageError {
                stage: stage.to_string(),
                n,
                kind: error_kind(&e).to_string(),
                message: e.to_string(),
            });
            None
        }
    }
}

fn prepare(s: &Scenario, n: usize) -> RunResult<Truncation> {
    let spec = s.spectrum(n)?;
    let g = s.vectors(&spec)?;
    let bounds = frame_bounds(&quadform_continuous(&spec, &g)?)?;
    Ok(Truncation { n, spec, g, bounds })
}

fn rng_for(s: &Scenario, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    rng.set_stream(stream);
    rng
}

/// Runs `command` on a validated scenario. Never fails as a whole: stage
/// failures are listed in the report.
pub fn run(command: Command, s: &Scenario) -> RunReport {
    let mut report = RunReport::new(command.name(), echo(s));
    let mut truncations = Vec::new();
    for &n in &s.sweep {
        if let Some(t) = record(&mut report, "frame_bounds", Some(n), prepare(s, n)) {
            report.rows.push(SweepRow {
                n,
                lower: t.bounds.lower,
                upper: t.bounds.upper,
                min_eigenvalue: t.bounds.min_eigenvalue,
                numerically_zero: t.bounds.numerically_zero,
                residual: None,
                structural: None,
                riemann_consistent: None,
                reconstruction_ok: None,
            });
            truncations.push(t);
        }
    }

    match command {
        Command::Analyze => {
            equivalence_stage(&mut report, s, &truncations, false);
            conditions_stage(&mut report, s, &truncations);
            if s.grid.is_some() {
                discretization_stage(&mut report, s, &truncations);
            }
        }
        Command::Equivalence => equivalence_stage(&mut report, s, &truncations, true),
        Command::Discretize => discretization_stage(&mut report, s, &truncations),
        Command::Conditions => conditions_stage(&mut report, s, &truncations),
        Command::Reconstruct => reconstruction_stage(&mut report, s, &truncations),
    }
    report
}

/// Exit status implied by the recorded stage errors.
pub fn report_status(report: &RunReport) -> ExitStatus {
    let mut status = ExitStatus::Success;
    for e in &report.stage_errors {
        let s = match e.kind.as_str() {
            "invariant" | "serialize" => ExitStatus::Invariant,
            "parse" | "validation" | "io" | "domain" => ExitStatus::Usage,
            _ => ExitStatus::Numerical,
        };
        if (s as i32) > (status as i32) {
            status = s;
        }
    }
    status
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng, 1.0)).collect()
}

fn equivalence_row(
    t: &Truncation,
    s: &Scenario,
    with_oracles: bool,
    rng: &mut ChaCha8Rng,
) -> RunResult<EquivalenceRow> {
    let qc = quadform_continuous(&t.spec, &t.g)?;
    let (etas, a) = cayley_transform_vectors(&t.spec, &t.g)?;
    let qd = quadform_discrete(&etas, &a)?;
    let residual = cayley_residual(&qc, &qd)?;
    let (mut cont, mut disc) = (None, None);
    let samples = if with_oracles { s.config.oracle_samples } else { 0 };
    for _ in 0..samples {
        let c = random_vector(rng, t.n);
        let closed = qc.value(&c)?;
        let opts = OracleOptions {
            t_max: None,
            tol: s.config.oracle_tol,
        };
        let quad = oracle_continuous(&t.spec, &t.g, &c, opts)?;
        cont = Some(cont.unwrap_or(0.0f64).max((quad - closed).abs()));
        let power = oracle_discrete(&etas, &a, &c, s.config.oracle_tol)?;
        disc = Some(disc.unwrap_or(0.0f64).max((power - qd.value(&c)?).abs()));
    }
    Ok(EquivalenceRow {
        n: t.n,
        cayley_residual: residual,
        continuous_oracle_error: cont,
        discrete_oracle_error: disc,
        oracle_samples: samples,
    })
}

fn equivalence_stage(report: &mut RunReport, s: &Scenario, ts: &[Truncation], with_oracles: bool) {
    let mut rows = Vec::new();
    for t in ts {
        let mut rng = rng_for(s, t.n as u64);
        if let Some(row) = record(
            report,
            "equivalence",
            Some(t.n),
            equivalence_row(t, s, with_oracles, &mut rng),
        ) {
            if let Some(r) = report.row_mut(t.n) {
                r.residual = Some(row.cayley_residual);
            }
            rows.push(row);
        }
    }
    let max_residual = rows.iter().map(|r| r.cayley_residual).fold(0.0, f64::max);
    report.equivalence = Some(EquivalenceSection { rows, max_residual });
}

fn condition_config(s: &Scenario) -> ConditionConfig {
    ConditionConfig {
        carleson_threshold: s.config.carleson_threshold,
        c_bound_threshold: s.config.c_bound_threshold,
        cluster_floor: s.config.cluster_floor,
        ..ConditionConfig::default()
    }
}

fn conditions_stage(report: &mut RunReport, s: &Scenario, ts: &[Truncation]) {
    let config = condition_config(s);
    let mut rows = Vec::new();
    for t in ts {
        let r = full_theorem_check(&t.spec, &t.g, &config).map_err(RunError::from);
        if let Some(c) = record(report, "conditions", Some(t.n), r) {
            if let Some(row) = report.row_mut(t.n) {
                row.structural = Some(c.structural_verdict);
            }
            rows.push(ConditionRow {
                n: t.n,
                c_bound: c.factorization.c_bound,
                c_bound_ok: c.c_bound_ok,
                carleson_constant: c.carleson.constant_estimate,
                carleson_witness: c.carleson.witness,
                carleson_box_estimate: c.carleson.box_estimate,
                is_carleson: c.carleson.is_carleson,
                beta: c.separation.beta,
                max_count: c.separation.max_count,
                separation_ok: c.separation.satisfied,
                gamma: c.cluster.as_ref().map(|x| x.gamma),
                min_sigma_sq: c.cluster.as_ref().map(|x| x.min_sigma_sq),
                cluster_ok: c.cluster_ok,
                structural: c.structural_verdict,
                numerical_frame: c.numerical_frame,
                agreement: c.agreement,
            });
        }
    }
    // Repeated points already fail separation; the kernel curve needs distinct points.
    let largest = ts.iter().max_by_key(|t| t.n).filter(|t| {
        let v = t.spec.values();
        v.iter().enumerate().all(|(j, a)| v[j + 1..].iter().all(|b| a != b))
    });
    let interpolating = match largest {
        Some(t) if s.vector_count() == 1 => {
            let mut ns: Vec<usize> = ts.iter().map(|t| t.n).collect();
            ns.sort_unstable();
            ns.dedup();
            let r = interpolating_test_m1(
                t.spec.points(),
                &ns,
                s.config.interpolating_floor,
                s.config.carleson_threshold,
            )
            .map_err(RunError::from);
            record(report, "interpolating", None, r).map(|ir| InterpolatingSection {
                curve: ir
                    .curve
                    .iter()
                    .map(|&(n, min, max)| EigenCurvePoint { n, min, max })
                    .collect(),
                floor: ir.floor,
                interpolating: ir.interpolating,
                plateau_ratio: ir.plateau_ratio,
                carleson_constant: ir.carleson.constant_estimate,
                separated: ir.separation.satisfied,
            })
        }
        _ => None,
    };
    report.conditions = Some(ConditionsSection { rows, interpolating });
}

fn certificate_dto(c: &DiscretizationCertificate) -> CertificateDto {
    CertificateDto {
        delta: c.delta,
        delta0: c.delta0,
        epsilon: c.epsilon,
        horizon: c.horizon.is_finite().then_some(c.horizon),
        bessel_k: c.constants.k,
        m: c.constants.m,
        omega: c.constants.omega,
        c: c.constants.c,
        upper: c.constants.upper,
        lambda_max: c.constants.lambda_max,
        lhs: c.lhs(),
        guaranteed_lower: c.guaranteed_lower,
        holds: c.holds(),
    }
}

fn grid_dto(g: &GridFrameReport) -> GridDto {
    GridDto {
        lower: g.bounds.lower,
        upper: g.bounds.upper,
        is_frame: g.is_frame,
        step: g.step,
        scaled_lower: g.scaled.map(|x| x.0),
        scaled_upper: g.scaled.map(|x| x.1),
        lower_deviation: g.lower_deviation,
        upper_deviation: g.upper_deviation,
        band: g.band,
        riemann_consistent: g.riemann_consistent,
    }
}

fn discretization_stage(report: &mut RunReport, s: &Scenario, ts: &[Truncation]) {
    let grid = s.grid();
    let mut rows = Vec::new();
    for t in ts {
        let n = Some(t.n);
        let cert = record(
            report,
            "certificate",
            n,
            t.g.bessel_constant()
                .and_then(|k| search_delta(&t.spec, &t.g, &t.bounds, k))
                .map_err(RunError::from),
        );
        let st = stability(&t.spec);
        let horizon = record(
            report,
            "finite_horizon",
            n,
            finite_horizon(&t.bounds, StabilityReport::M, st.omega, s.config.horizon_step)
                .and_then(|fh| {
                    let exact = frame_bounds(&finite_horizon_quadform(&t.spec, &t.g, fh.horizon)?)?.lower;
                    Ok(HorizonDto {
                        horizon: fh.horizon,
                        step: fh.step,
                        guaranteed_lower: fh.guaranteed_lower,
                        exact_lower: exact,
                    })
                })
                .map_err(RunError::from),
        );
        let grid_report = grid.as_ref().and_then(|gr| {
            let r = verify_grid_frame(&t.spec, &t.g, gr, &t.bounds, s.config.riemann_band).map_err(RunError::from);
            record(report, "grid", n, r)
        });
        if let (Some(gr), Some(row)) = (&grid_report, report.row_mut(t.n)) {
            row.riemann_consistent = gr.riemann_consistent;
        }
        let dichotomy = record(
            report,
            "dichotomy",
            n,
            stability_dichotomy(&t.spec, &t.g, &t.bounds, None).map_err(RunError::from),
        )
        .map(|d| DichotomyDto {
            margin: d.margin,
            stable: d.stable,
            horizon: d.horizon,
            horizon_lower: d.horizon_lower,
            finite_horizon_frame: d.finite_horizon_frame,
            grid_points: d.grid_points,
            grid_lower: d.grid_lower,
            finite_grid_frame: d.finite_grid_frame,
            consistent: d.consistent,
        });
        rows.push(DiscretizationRow {
            n: t.n,
            certificate: cert.as_ref().map(certificate_dto),
            horizon,
            grid: grid_report.as_ref().map(grid_dto),
            dichotomy,
        });
    }
    let margin_trend = if s.generator().is_some() {
        ts.iter()
            .map(|t| MarginPoint {
                n: t.n,
                margin: t.spec.margin(),
            })
            .collect()
    } else {
        Vec::new()
    };
    report.discretization = Some(DiscretizationSection { rows, margin_trend });
}

fn reconstruction_stage(report: &mut RunReport, s: &Scenario, ts: &[Truncation]) {
    let mut rows = Vec::new();
    match s.grid() {
        None => {
            record::<()>(
                report,
                "reconstruction",
                None,
                Err(RunError::validation("grid", "reconstruction needs a time grid")),
            );
        }
        Some(grid) => {
            for t in ts {
                let mut rng = rng_for(s, t.n as u64);
                let f = s.explicit_signal(t.n).unwrap_or_else(|| random_vector(&mut rng, t.n));
                let r = reconstruct_trials(&t.spec, &t.g, &grid, &f, s.noise_sigma, s.trials, &mut rng);
                if let Some(row) = record(report, "reconstruction", Some(t.n), r) {
                    if let Some(sr) = report.row_mut(t.n) {
                        sr.reconstruction_ok = Some(row.violations == 0);
                    }
                    rows.push(row);
                }
            }
        }
    }
    report.reconstruction = Some(ReconstructionSection {
        rows,
        noise_sigma: s.noise_sigma,
        prng: PRNG_NAME.to_string(),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    const GEOMETRIC: &str = r#"
schema_version = 1
name = "interpolating"
seed = 5
sweep = [4, 8, 12]

[spectrum]
dimension = 12
generator = { kind = "geometric", ratio = 0.5 }

[vectors]
kind = "canonical"
"#;

    #[test]
    fn geometric_scenario_passes_conditions() {
        let s = parse_scenario(GEOMETRIC).unwrap();
        let r = run(Command::Analyze, &s);
        assert!(r.stage_errors.is_empty(), "{:?}", r.stage_errors);
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.iter().all(|row| row.lower > 0.0 && row.structural == Some(true)));
        let interp = r.conditions.as_ref().unwrap().interpolating.as_ref().unwrap();
        assert!(interp.interpolating && interp.separated);
        assert!(r.equivalence.as_ref().unwrap().max_residual <= 1e-12);
        assert_eq!(report_status(&r), ExitStatus::Success);
    }

    #[test]
    fn duplicated_eigenvalue_flags_zero_and_condition_one() {
        let text = r#"
schema_version = 1
name = "duplicate"
[spectrum]
values = [[1.0, 0.0], [2.0, 0.0], [2.0, 0.0], [3.0, 0.0]]
"#;
        let r = run(Command::Analyze, &parse_scenario(text).unwrap());
        let row = &r.rows[0];
        assert!(row.numerically_zero && row.structural == Some(false));
        let c = &r.conditions.as_ref().unwrap().rows[0];
        assert!(!c.separation_ok && c.agreement);
    }

    #[test]
    fn runs_are_deterministic() {
        let s = parse_scenario(GEOMETRIC).unwrap();
        let a = run(Command::Equivalence, &s);
        let b = run(Command::Equivalence, &s);
        assert_eq!(a, b);
        let eq = a.equivalence.unwrap();
        assert!(eq.rows.iter().all(|r| r.continuous_oracle_error.unwrap() <= 2e-8));
    }

    #[test]
    fn reconstruct_without_grid_is_a_stage_error() {
        let s = parse_scenario(GEOMETRIC).unwrap();
        let r = run(Command::Reconstruct, &s);
        assert_eq!(r.stage_errors.len(), 1);
        assert_eq!(report_status(&r), ExitStatus::Usage);
    }

    #[test]
    fn too_few_samples_exit_numerical() {
        let text = r#"
schema_version = 1
name = "rank"
noise_sigma = 0.1
[spectrum]
values = [[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]
[grid]
kind = "finite"
points = [0.0, 0.5]
"#;
        let r = run(Command::Reconstruct, &parse_scenario(text).unwrap());
        assert_eq!(r.stage_errors[0].kind, "numerical");
        assert_eq!(report_status(&r), ExitStatus::Numerical);
    }
}
