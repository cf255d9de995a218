//! `clock verify`: seeded property suite over generated cases. Every failed
//! property carries the first failing case so it can be replayed.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use clock_core::fringe::{
    fit_fringe, linear_grid, model_from_params, predicted_ratios, scan_fringe, shape_metrics,
    FringeSource,
};
use clock_core::lindblad::fixtures::{
    raising_operator, random_diagonal_jump_generator, random_generator, random_stable_model,
};
use clock_core::lindblad::superop::{
    choi_psd_check_superoperator, negated_dissipator_superoperator,
};
use clock_core::lindblad::{
    analytic_propagate, coherence_decay_matrix, liouvillian_superoperator, propagate,
    stability_check, LindbladGenerator,
};
use clock_core::numerics::random::{random_density, seeded, DetRng};
use clock_core::numerics::{von_neumann_entropy, ComplexMatrix, DensityMatrix};
use clock_core::ramsey::{
    analytic_pe, ramsey_sequence, ClockTransition, FringeParams, RamseyConfig,
};
use clock_core::SCHEMA_VERSION;

use super::Context;
use crate::config::{check_schema, default_schema, read_json};
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, Outcome};

pub const DEFAULT_CASES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Closed-form vs superoperator propagation, max-norm.
    pub analytic_equivalence: f64,
    /// Composed sequence vs closed-form fringe.
    pub fringe_equivalence: f64,
    /// Largest tolerated entropy drop along a trajectory.
    pub entropy_violation: f64,
    /// Smallest entropy drop the counterexample must exhibit.
    pub entropy_counterexample: f64,
    /// Choi spectrum floor.
    pub complete_positivity: f64,
    /// Shape ratios vs their closed forms at `ΓT = 1`.
    pub golden: f64,
    /// Noiseless fit, relative.
    pub fit_relative: f64,
    /// Extracted vs direct coherence decay matrix.
    pub stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic_equivalence: 1e-8,
            fringe_equivalence: 1e-10,
            entropy_violation: 1e-9,
            entropy_counterexample: 1e-3,
            complete_positivity: 1e-8,
            golden: 5e-3,
            fit_relative: 1e-8,
            stability: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    /// Liouvillian with the dissipator's sign flipped; not completely positive.
    NegatedDissipator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Injection {
    pub fixture: FixtureKind,
    /// Generator to corrupt; a seeded random one when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<LindbladGenerator>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub cases: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub inject: Option<Injection>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            schema_version: default_schema(),
            cases: None,
            seed: 0,
            tolerances: Tolerances::default(),
            inject: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedVerify {
    pub cases: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub inject: Option<Injection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// Worst observed value of the property's metric.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
    pub failing_case: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema_version: u32,
    pub command: String,
    pub config: ResolvedVerify,
    pub all_passed: bool,
    pub properties: Vec<PropertyResult>,
}

pub fn run(ctx: &Context) -> CliResult<Outcome> {
    let cfg: VerifyConfig = match &ctx.config_path {
        Some(p) => read_json(p)?,
        None => VerifyConfig::default(),
    };
    check_schema(cfg.schema_version)?;
    let cases = ctx.points.or(cfg.cases).unwrap_or(DEFAULT_CASES);
    if cases == 0 {
        return Err(CliError::input("cases must be positive"));
    }
    let resolved = ResolvedVerify {
        cases,
        seed: ctx.seed.unwrap_or(cfg.seed),
        tolerances: cfg.tolerances,
        inject: cfg.inject,
    };
    let output = verify(resolved)?;
    for p in output.properties.iter().filter(|p| !p.passed) {
        log::error!("property {} failed: {}", p.name, p.detail);
    }

    ensure_dir(&ctx.out_dir)?;
    let mut files = vec![write_json(&ctx.out_dir, "verify.json", &output)?];
    let failures: Vec<_> = output
        .properties
        .iter()
        .filter(|p| !p.passed)
        .map(|p| json!({ "property": p.name, "case": p.failing_case }))
        .collect();
    if !failures.is_empty() {
        files.push(write_json(&ctx.out_dir, "verify_failures.json", &failures)?);
    }
    let failed: Vec<&str> = output
        .properties
        .iter()
        .filter(|p| !p.passed)
        .map(|p| p.name.as_str())
        .collect();
    Ok(Outcome::new(output.all_passed)
        .with("passed", output.properties.len() - failed.len())
        .with("failed", failed)
        .with_files(&files))
}

pub fn verify(config: ResolvedVerify) -> CliResult<VerifyOutput> {
    let (n, seed, tol) = (config.cases, config.seed, config.tolerances);
    // Each property draws from its own stream so adding cases to one leaves
    // the others unchanged.
    let stream = |k: u64| seeded(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    let properties = vec![
        analytic_equivalence(n, &mut stream(1), tol.analytic_equivalence)?,
        entropy_monotonicity(n, &mut stream(2), tol.entropy_violation)?,
        entropy_counterexample(tol.entropy_counterexample)?,
        complete_positivity(
            n,
            &mut stream(3),
            tol.complete_positivity,
            config.inject.as_ref(),
        )?,
        fringe_equivalence(n, &mut stream(4), tol.fringe_equivalence)?,
        stability_extraction(n, &mut stream(5), tol.stability)?,
        golden_numbers(tol.golden)?,
        fit_round_trip(n.min(10), &mut stream(6), tol.fit_relative)?,
    ];
    Ok(VerifyOutput {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        all_passed: properties.iter().all(|p| p.passed),
        config,
        properties,
    })
}

/// Tracks the worst case and the first case beyond tolerance.
struct Tracker {
    worst: f64,
    tolerance: f64,
    failing: Option<serde_json::Value>,
}

impl Tracker {
    fn new(tolerance: f64) -> Self {
        Self {
            worst: 0.0,
            tolerance,
            failing: None,
        }
    }

    /// Records `value`; `bad` decides failure, `case` is built only when needed.
    fn record(&mut self, value: f64, bad: bool, case: impl FnOnce() -> serde_json::Value) {
        self.worst = self.worst.max(value);
        if bad && self.failing.is_none() {
            self.failing = Some(case());
        }
    }

    fn finish(self, name: &str, cases: usize, detail: String) -> PropertyResult {
        PropertyResult {
            name: name.into(),
            passed: self.failing.is_none(),
            cases,
            worst: self.worst,
            tolerance: self.tolerance,
            detail,
            failing_case: self.failing,
        }
    }
}

fn analytic_equivalence(n: usize, rng: &mut DetRng, tol: f64) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    for k in 0..n {
        let d = [2, 3, 4][k % 3];
        let jumps = rng.random_range(1..=3);
        let model = random_stable_model(rng, d, jumps, 2.0);
        let rho0 = random_density(rng, d);
        let lmax = coherence_decay_matrix(&model)?.max_abs();
        let gen = model.to_generator();
        for scale in [0.1, 1.0, 10.0] {
            let time = scale / lmax;
            let a = analytic_propagate(&model, &rho0, time)?;
            let b = propagate(&gen, &rho0, time)?;
            let dev = (a.matrix() - b.matrix()).max_abs();
            t.record(
                dev,
                dev > tol,
                || json!({ "model": model, "rho0": rho0, "t": time, "deviation": dev }),
            );
        }
    }
    let detail = format!(
        "max-norm deviation {:.3e} over {n} models × 3 times",
        t.worst
    );
    Ok(t.finish("analytic_equivalence", n, detail))
}

fn entropy_monotonicity(n: usize, rng: &mut DetRng, tol: f64) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    for k in 0..n {
        let d = [2, 3, 4][k % 3];
        let jumps = rng.random_range(1..=3);
        let gen = random_diagonal_jump_generator(rng, d, jumps, 1.0);
        let rho0 = random_density(rng, d);
        let mut prev = von_neumann_entropy(&rho0)?;
        for step in 1..=40 {
            let time = 0.125 * step as f64;
            let s = von_neumann_entropy(&propagate(&gen, &rho0, time)?)?;
            let drop = prev - s;
            t.record(
                drop,
                drop > tol,
                || json!({ "generator": gen, "rho0": rho0, "t": time, "entropy_drop": drop }),
            );
            prev = s;
        }
    }
    let detail = format!(
        "largest entropy drop {:.3e} over {n} diagonal-jump generators",
        t.worst
    );
    Ok(t.finish("entropy_monotonicity", n, detail))
}

fn entropy_counterexample(min_drop: f64) -> CliResult<PropertyResult> {
    let gen = LindbladGenerator::new(ComplexMatrix::zeros(2), vec![raising_operator()])?;
    let mixed = DensityMatrix::maximally_mixed(2);
    let s0 = von_neumann_entropy(&mixed)?;
    let s1 = von_neumann_entropy(&propagate(&gen, &mixed, 1.0)?)?;
    let drop = s0 - s1;
    let failing =
        (drop <= min_drop).then(|| json!({ "generator": gen, "t": 1.0, "entropy_drop": drop }));
    Ok(PropertyResult {
        name: "entropy_counterexample".into(),
        passed: failing.is_none(),
        cases: 1,
        worst: drop,
        tolerance: min_drop,
        detail: format!("raising operator lowers entropy of the mixed state by {drop:.4} at t = 1"),
        failing_case: failing,
    })
}

fn complete_positivity(
    n: usize,
    rng: &mut DetRng,
    tol: f64,
    inject: Option<&Injection>,
) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    let times = [0.1, 1.0, 10.0];
    let check = |t: &mut Tracker,
                 liouvillian: &ComplexMatrix,
                 gen: &LindbladGenerator,
                 label: &str|
     -> CliResult<()> {
        for time in times {
            let r = choi_psd_check_superoperator(liouvillian, time)?;
            let violation = -r.min_eigenvalue;
            t.record(violation, violation > tol, || {
                json!({ "fixture": label, "generator": gen, "t": time, "min_eigenvalue": r.min_eigenvalue })
            });
        }
        Ok(())
    };
    for k in 0..n {
        let d = [2, 3][k % 2];
        let jumps = rng.random_range(1..=3);
        let gen = random_generator(rng, d, jumps, 1.0);
        check(&mut t, &liouvillian_superoperator(&gen), &gen, "lindblad")?;
    }
    let mut cases = n;
    if let Some(inj) = inject {
        let gen = match &inj.generator {
            Some(g) => g.clone(),
            None => random_generator(rng, 2, 1, 1.0),
        };
        let corrupted = match inj.fixture {
            FixtureKind::NegatedDissipator => negated_dissipator_superoperator(&gen),
        };
        check(&mut t, &corrupted, &gen, "negated_dissipator")?;
        cases += 1;
    }
    let detail = format!(
        "largest Choi eigenvalue violation {:.3e} over {cases} generators × 3 times",
        t.worst
    );
    Ok(t.finish("complete_positivity", cases, detail))
}

fn fringe_equivalence(n: usize, rng: &mut DetRng, tol: f64) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    for _ in 0..n {
        let time = rng.random_range(0.5..20.0);
        let area = rng.random_range(0.2..3.0);
        let tau = time * rng.random_range(1e-4..1e-2);
        let omega = area / tau;
        let delta = omega * rng.random_range(-0.05..0.05);
        let gamma = rng.random_range(1e-3..3.0) / time;
        let eshift = rng.random_range(-1.0..1.0) / time;
        let cfg = RamseyConfig::new(tau, time, omega, delta)?;
        let params = FringeParams::new(gamma, eshift, area)?;
        let model = model_from_params(1e3 * omega, gamma, eshift)?;
        let pe = ramsey_sequence(&model, ClockTransition::default(), &cfg)?.pe;
        let dev = (pe - analytic_pe(&params, delta, time)).abs();
        t.record(
            dev,
            dev > tol,
            || json!({ "ramsey": cfg, "params": params, "model": model, "deviation": dev }),
        );
    }
    let detail = format!("max |ΔP_e| {:.3e} over {n} random tuples", t.worst);
    Ok(t.finish("fringe_equivalence", n, detail))
}

fn stability_extraction(n: usize, rng: &mut DetRng, tol: f64) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    for k in 0..n {
        let d = [2, 3, 4][k % 3];
        let jumps = rng.random_range(1..=3);
        let model = random_stable_model(rng, d, jumps, 2.0);
        let gen = model.to_generator();
        let reports = (0..d)
            .map(|m| stability_check(&gen, m))
            .collect::<Result<Vec<_>, _>>()?;
        let unstable = reports.iter().position(|r| !r.stable);
        let dev = match unstable {
            Some(_) => f64::INFINITY,
            None => {
                let energies = reports
                    .iter()
                    .map(|r| r.energy.unwrap_or(f64::NAN))
                    .collect();
                let ells = (0..jumps)
                    .map(|a| {
                        reports
                            .iter()
                            .map(|r| {
                                r.jump_eigenvalues
                                    .as_ref()
                                    .map_or(f64::NAN.into(), |v| v[a])
                            })
                            .collect()
                    })
                    .collect();
                let extracted = clock_core::lindblad::StableBasisModel::new(energies, ells)?;
                (coherence_decay_matrix(&extracted)?.matrix()
                    - coherence_decay_matrix(&model)?.matrix())
                .max_abs()
            }
        };
        t.record(
            dev,
            !(dev <= tol),
            || json!({ "model": model, "unstable_state": unstable, "deviation": dev }),
        );
    }
    let detail = format!(
        "every basis state stable; decay matrices agree to {:.3e} over {n} models",
        t.worst
    );
    Ok(t.finish("stability_extraction", n, detail))
}

fn golden_numbers(tol: f64) -> CliResult<PropertyResult> {
    let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0)?;
    let params = FringeParams::new(1.0, 0.0, FRAC_PI_2)?;
    let grid = linear_grid(0.0, 4.0 * PI, 2001)?;
    let m = shape_metrics(&scan_fringe(
        &FringeSource::Params(params),
        &cfg,
        &grid,
        None,
    )?)?;
    let (mm, sp) = predicted_ratios(1.0);
    let dev = (m.min_max_ratio - mm)
        .abs()
        .max((m.slope_point_ratio - sp).abs());
    let failing = (dev > tol).then(|| json!({ "params": params, "ramsey": cfg, "shape": m }));
    Ok(PropertyResult {
        name: "golden_numbers".into(),
        passed: failing.is_none(),
        cases: 1,
        worst: dev,
        tolerance: tol,
        detail: format!(
            "ΓT = 1: min/max {:.4} (closed form {mm:.4}), slope/peak {:.4} (closed form {sp:.4})",
            m.min_max_ratio, m.slope_point_ratio
        ),
        failing_case: failing,
    })
}

fn fit_round_trip(n: usize, rng: &mut DetRng, tol: f64) -> CliResult<PropertyResult> {
    let mut t = Tracker::new(tol);
    let cfg = RamseyConfig::with_pulse_area(FRAC_PI_2, 1.0, 1e-3, 0.0)?;
    let grid = linear_grid(0.0, 4.0 * PI, 401)?;
    for _ in 0..n {
        let gamma = rng.random_range(0.05..3.0);
        let eshift = rng.random_range(-1.0..1.0);
        let params = FringeParams::new(gamma, eshift, FRAC_PI_2)?;
        let fit = fit_fringe(
            &scan_fringe(&FringeSource::Params(params), &cfg, &grid, None)?,
            None,
        )?;
        let dev = ((fit.gamma_rad_s - gamma).abs() / gamma)
            .max((fit.eshift_rad_s - eshift).abs() / eshift.abs().max(1.0));
        t.record(
            dev,
            !(dev <= tol) || !fit.converged,
            || json!({ "params": params, "ramsey": cfg, "fit": fit }),
        );
    }
    let detail = format!(
        "largest relative parameter error {:.3e} over {n} noiseless scans",
        t.worst
    );
    Ok(t.finish("fit_round_trip", n, detail))
}
