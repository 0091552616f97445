//! Subcommand implementations.

use std::path::Path;

use jspectra::{
    apply_perturbation, classify_readings, family, from_jacobi, m_quotient, physical_delta,
    quotient_from_spectra_real, riccati_residual, solve_disjoint, solve_shared_by_alpha,
    solve_shared_by_h, solve_shared_by_theta, solve_with_known_theta, tau_weights, to_jacobi,
    upsilon_weights, Complex64, InverseSolution, JacobiMatrix, MassSpringSystem,
    PerturbationParams, Regime, TwoSpectraProblem,
};

use crate::error::CliError;
use crate::io::{
    fmt_f64, json_array, json_opt_f64, json_string, read_json, write_output, MatrixFile,
    ParamsFile, SpectraFile, SystemFile,
};

pub enum Input {
    System(std::path::PathBuf),
    Matrix(std::path::PathBuf),
}

impl Input {
    pub fn from_flags(
        system: Option<std::path::PathBuf>,
        matrix: Option<std::path::PathBuf>,
    ) -> Result<Input, CliError> {
        match (system, matrix) {
            (Some(s), None) => Ok(Input::System(s)),
            (None, Some(m)) => Ok(Input::Matrix(m)),
            _ => Err(CliError::Schema(
                "provide exactly one of --system or --matrix".into(),
            )),
        }
    }

    /// The matrix, plus the chain when the input was physical.
    pub fn load(&self) -> Result<(JacobiMatrix, Option<MassSpringSystem>), CliError> {
        match self {
            Input::System(path) => {
                let file: SystemFile = read_json(path)?;
                let system = MassSpringSystem::new(file.masses, file.springs)?;
                let j = to_jacobi(&system);
                Ok((j, Some(system)))
            }
            Input::Matrix(path) => {
                let file: MatrixFile = read_json(path)?;
                Ok((JacobiMatrix::new(file.q, file.b)?, None))
            }
        }
    }
}

fn load_params(path: &Path) -> Result<PerturbationParams, CliError> {
    let file: ParamsFile = read_json(path)?;
    Ok(PerturbationParams::new(file.theta, file.h)?)
}

fn solution_json(sol: &InverseSolution) -> String {
    let gamma = sol.params.gamma().ok();
    format!(
        "{{\"q\":{},\"b\":{},\"theta\":{},\"h\":{},\"gamma\":{},\"weights\":{}}}",
        json_array(sol.matrix.diagonal()),
        json_array(sol.matrix.off_diagonal()),
        fmt_f64(sol.params.theta()),
        fmt_f64(sol.params.h()),
        json_opt_f64(gamma),
        json_array(&sol.weights),
    )
}

fn classification_json(p: &TwoSpectraProblem) -> String {
    format!(
        "{{\"regime\":{},\"k0\":{},\"shared_value\":{}}}",
        json_string(p.regime().as_str()),
        p.k0(),
        json_opt_f64(p.shared_value()),
    )
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_output(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// --- forward ---------------------------------------------------------------

pub fn run_forward(
    input: &Input,
    params: Option<&Path>,
    out: &Path,
    format: &str,
) -> Result<(), CliError> {
    let (j, _) = input.load()?;
    let spectrum = j.eigendecompose()?;

    let Some(params_path) = params else {
        // Eigendecomposition only: spectral-data schema.
        let content = match format {
            "json" => format!(
                "{{\"lambda\":{},\"weights\":{}}}\n",
                json_array(spectrum.eigenvalues()),
                json_array(spectrum.weights()),
            ),
            "csv" => {
                let mut s = String::from("lambda,weight\n");
                for (l, w) in spectrum.eigenvalues().iter().zip(spectrum.weights()) {
                    s.push_str(&format!("{},{}\n", fmt_f64(*l), fmt_f64(*w)));
                }
                s
            }
            other => return Err(CliError::Schema(format!("unknown format {other:?}"))),
        };
        return write_output(out, &content);
    };

    let p = load_params(params_path)?;
    // γ is part of the output schema, so this command needs θ ≠ 1.
    let gamma = p.gamma().map_err(|_| {
        CliError::Schema(
            "gamma = theta^2*h/(1-theta^2) is undefined at theta = 1; \
             the forward spectra pair requires theta != 1"
                .into(),
        )
    })?;
    let perturbed = apply_perturbation(&j, &p).eigendecompose()?;

    let content = match format {
        "json" => format!(
            "{{\"lambda\":{},\"mu\":{},\"weights\":{},\"gamma\":{}}}\n",
            json_array(spectrum.eigenvalues()),
            json_array(perturbed.eigenvalues()),
            json_array(spectrum.weights()),
            fmt_f64(gamma),
        ),
        "csv" => {
            let mut s = String::from("index,lambda,mu,weight\n");
            for (i, ((l, m), w)) in spectrum
                .eigenvalues()
                .iter()
                .zip(perturbed.eigenvalues())
                .zip(spectrum.weights())
                .enumerate()
            {
                s.push_str(&format!(
                    "{i},{},{},{}\n",
                    fmt_f64(*l),
                    fmt_f64(*m),
                    fmt_f64(*w)
                ));
            }
            s
        }
        other => return Err(CliError::Schema(format!("unknown format {other:?}"))),
    };
    write_output(out, &content)
}

// --- perturb ---------------------------------------------------------------

pub fn run_perturb(input: &Input, params: &Path, out: &Path) -> Result<(), CliError> {
    let (j, _) = input.load()?;
    let p = load_params(params)?;
    let jt = apply_perturbation(&j, &p);
    let content = format!(
        "{{\"q\":{},\"b\":{}}}\n",
        json_array(jt.diagonal()),
        json_array(jt.off_diagonal()),
    );
    write_output(out, &content)
}

// --- invert ----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Disjoint,
    SharedTheta,
    SharedH,
    SharedAlpha,
    KnownTheta,
}

impl Mode {
    fn parse(s: &str) -> Result<Mode, CliError> {
        match s {
            "disjoint" => Ok(Mode::Disjoint),
            "shared-theta" => Ok(Mode::SharedTheta),
            "shared-h" => Ok(Mode::SharedH),
            "shared-alpha" => Ok(Mode::SharedAlpha),
            "known-theta" => Ok(Mode::KnownTheta),
            other => Err(CliError::Schema(format!(
                "unknown mode {other:?} (expected disjoint, shared-theta, shared-h, \
                 shared-alpha, or known-theta)"
            ))),
        }
    }
}

/// Pick the reading a given mode and parameter can act on. One-sided
/// boundary data admits two readings; the parameter disambiguates — an ω
/// lies in exactly one of the two gaps, a θ names its orientation.
fn select_reading(
    readings: Vec<TwoSpectraProblem>,
    mode: Mode,
    parameter: Option<f64>,
) -> Result<TwoSpectraProblem, CliError> {
    let describe = |rs: &[TwoSpectraProblem]| {
        rs.iter()
            .map(|r| format!("{}@k0={}", r.regime(), r.k0()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut candidates: Vec<TwoSpectraProblem> = match mode {
        Mode::SharedTheta | Mode::SharedH | Mode::SharedAlpha => readings
            .into_iter()
            .filter(|r| r.regime() == Regime::SharedGamma)
            .collect(),
        Mode::Disjoint | Mode::KnownTheta => {
            let disjoint: Vec<TwoSpectraProblem> = readings
                .into_iter()
                .filter(|r| r.regime() != Regime::SharedGamma)
                .collect();
            match (mode, parameter) {
                (Mode::Disjoint, Some(omega)) if disjoint.len() > 1 => disjoint
                    .into_iter()
                    .filter(|r| {
                        let (lo, hi) = r.gap_interval().expect("disjoint reading");
                        lo < omega && omega < hi
                    })
                    .collect(),
                (Mode::KnownTheta, Some(theta)) if disjoint.len() > 1 => {
                    let want = if theta > 1.0 {
                        Regime::DisjointThetaGt1
                    } else {
                        Regime::DisjointThetaLt1
                    };
                    disjoint
                        .into_iter()
                        .filter(|r| r.regime() == want)
                        .collect()
                }
                _ => disjoint,
            }
        }
    };
    match candidates.len() {
        0 => Err(CliError::Classification(
            "no reading of the spectra supports the requested mode and parameter".into(),
        )),
        1 => Ok(candidates.pop().expect("one")),
        _ => Err(CliError::Classification(format!(
            "the spectra admit several readings ({}) and the parameter does not single one out",
            describe(&candidates)
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_invert(
    spectra: &Path,
    mode: Option<String>,
    omega: Option<f64>,
    theta: Option<f64>,
    h: Option<f64>,
    alpha: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let file: SpectraFile = read_json(spectra)?;
    let mode_name = mode
        .or(file.mode.clone())
        .ok_or_else(|| CliError::Schema("no --mode given and none in the spectra file".into()))?;
    let mode = Mode::parse(&mode_name)?;

    let require = |flag: Option<f64>, name: &str| {
        flag.ok_or_else(|| CliError::Schema(format!("mode {mode_name} requires --{name}")))
    };

    let readings = classify_readings(&file.lambda, &file.mu)?;
    let (reading, solutions): (TwoSpectraProblem, Vec<InverseSolution>) = match mode {
        Mode::Disjoint => {
            let omega = require(omega.or(file.omega), "omega")?;
            let reading = select_reading(readings, mode, Some(omega))?;
            let sols = vec![solve_disjoint(&reading, omega)?];
            (reading, sols)
        }
        Mode::SharedTheta => {
            let omega = require(omega.or(file.omega), "omega")?;
            let reading = select_reading(readings, mode, Some(omega))?;
            let sols = vec![solve_shared_by_theta(&reading, omega)?];
            (reading, sols)
        }
        Mode::SharedH => {
            let omega = require(h.or(omega).or(file.omega), "h")?;
            let reading = select_reading(readings, mode, Some(omega))?;
            let sols = vec![solve_shared_by_h(&reading, omega)?];
            (reading, sols)
        }
        Mode::SharedAlpha => {
            let alpha = require(alpha, "alpha")?;
            let reading = select_reading(readings, mode, Some(alpha))?;
            let sols = vec![solve_shared_by_alpha(&reading, alpha)?];
            (reading, sols)
        }
        Mode::KnownTheta => {
            let theta = require(theta, "theta")?;
            let reading = select_reading(readings, mode, Some(theta))?;
            let sols = solve_with_known_theta(&reading, theta)?;
            (reading, sols)
        }
    };

    let body: Vec<String> = solutions.iter().map(solution_json).collect();
    let content = format!(
        "{{\"classification\":{},\"solutions\":[{}]}}\n",
        classification_json(&reading),
        body.join(",")
    );
    emit(out, &content)
}

// --- family ----------------------------------------------------------------

pub fn run_family(spectra: &Path, omegas: &[f64], out: Option<&Path>) -> Result<(), CliError> {
    if omegas.is_empty() {
        return Err(CliError::Schema(
            "family requires at least one --omega".into(),
        ));
    }
    let file: SpectraFile = read_json(spectra)?;
    let readings = classify_readings(&file.lambda, &file.mu)?;
    let reading = if readings.len() == 1 {
        readings.into_iter().next().expect("one")
    } else if readings
        .iter()
        .filter(|r| r.regime() == Regime::SharedGamma)
        .count()
        == 1
    {
        readings
            .into_iter()
            .find(|r| r.regime() == Regime::SharedGamma)
            .expect("counted")
    } else {
        // Boundary pair: keep members whose gap holds every requested ω.
        readings
            .into_iter()
            .find(|r| {
                r.gap_interval()
                    .map(|(lo, hi)| omegas.iter().all(|&w| lo < w && w < hi))
                    .unwrap_or(false)
            })
            .ok_or_else(|| {
                CliError::Classification(
                    "the spectra admit several readings and the omegas do not single one out"
                        .into(),
                )
            })?
    };

    let members = family(&reading, omegas);
    let body: Vec<String> = members
        .iter()
        .map(|m| match &m.result {
            Ok(sol) => format!(
                "{{\"omega\":{},\"solution\":{}}}",
                fmt_f64(m.omega),
                solution_json(sol)
            ),
            Err(e) => format!(
                "{{\"omega\":{},\"error\":{}}}",
                fmt_f64(m.omega),
                json_string(&e.to_string())
            ),
        })
        .collect();
    let content = format!(
        "{{\"classification\":{},\"family\":[{}]}}\n",
        classification_json(&reading),
        body.join(",")
    );
    emit(out, &content)
}

// --- masses ----------------------------------------------------------------

pub fn run_masses(
    system: Option<&Path>,
    matrix: Option<&Path>,
    params: Option<&Path>,
    m1: Option<f64>,
    k1: Option<f64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match (system, matrix, params) {
        // Chain → matrix.
        (Some(path), None, None) => {
            let file: SystemFile = read_json(path)?;
            let sys = MassSpringSystem::new(file.masses, file.springs)?;
            let j = to_jacobi(&sys);
            let content = format!(
                "{{\"q\":{},\"b\":{}}}\n",
                json_array(j.diagonal()),
                json_array(j.off_diagonal()),
            );
            emit(out, &content)
        }
        // Matrix → chain, seeded by m1 and k1.
        (None, Some(path), None) => {
            let file: MatrixFile = read_json(path)?;
            let j = JacobiMatrix::new(file.q, file.b)?;
            let m1 = m1.ok_or_else(|| CliError::Schema("matrix input requires --m1".into()))?;
            let k1 = k1.ok_or_else(|| CliError::Schema("matrix input requires --k1".into()))?;
            let sys = from_jacobi(&j, m1, k1)?;
            let content = format!(
                "{{\"masses\":{},\"springs\":{}}}\n",
                json_array(sys.masses()),
                json_array(sys.springs()),
            );
            emit(out, &content)
        }
        // (θ, h) → physical (Δm, Δk) on the first cell.
        (None, None, Some(path)) => {
            let p = load_params(path)?;
            let m1 = m1.ok_or_else(|| CliError::Schema("params input requires --m1".into()))?;
            if !(m1.is_finite() && m1 > 0.0) {
                return Err(CliError::Schema(format!("--m1 must be positive, got {m1}")));
            }
            let (dm, dk) = physical_delta(&p, m1);
            let content = format!(
                "{{\"delta_m\":{},\"delta_k\":{}}}\n",
                fmt_f64(dm),
                fmt_f64(dk),
            );
            emit(out, &content)
        }
        _ => Err(CliError::Schema(
            "provide exactly one of --system, --matrix (with --m1/--k1), or --params (with --m1)"
                .into(),
        )),
    }
}

// --- verify ----------------------------------------------------------------

struct Check {
    name: &'static str,
    residual: f64,
    threshold: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.threshold
    }
}

fn report(mut checks: Vec<Check>) -> Result<(), CliError> {
    checks.sort_by(|a, b| a.name.cmp(b.name));
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failed = 0usize;
    for c in &checks {
        let status = if c.pass() { "ok" } else { "FAIL" };
        if !c.pass() {
            failed += 1;
        }
        println!(
            "{:<width$}  {:>12.5e}  (<= {:.5e})  {status}",
            c.name, c.residual, c.threshold
        );
    }
    println!("verify: {} checks, {failed} failed", checks.len());
    if failed > 0 {
        Err(CliError::VerifyFailed(failed))
    } else {
        Ok(())
    }
}

/// Deterministic non-real probe points scaled to the spectrum hull.
fn probes(lambdas: &[f64]) -> Vec<Complex64> {
    let lo = lambdas.first().copied().unwrap_or(0.0);
    let hi = lambdas.last().copied().unwrap_or(1.0);
    let center = 0.5 * (lo + hi);
    let radius = (hi - lo).max(1.0);
    (0..10)
        .map(|k| {
            let angle = 0.7 + 0.55 * k as f64;
            Complex64::new(
                center + 1.4 * radius * angle.cos(),
                radius * (0.3 + 1.1 * angle.sin().abs()),
            )
        })
        .collect()
}

pub fn run_verify_system(input: &Input, params: &Path, tolerance: f64) -> Result<(), CliError> {
    let (j, _) = input.load()?;
    let p = load_params(params)?;
    let spectrum = j.eigendecompose()?;
    let perturbed = apply_perturbation(&j, &p).eigendecompose()?;
    let n = j.dim();
    let q1 = j.diagonal()[0];
    let b1 = j.off_diagonal().first().copied().unwrap_or(0.0);

    type CheckFn<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;
    let mut tasks: Vec<CheckFn> = Vec::new();

    let s = &spectrum;
    tasks.push(Box::new(move || Check {
        name: "moment-normalization",
        residual: (s.weights().iter().sum::<f64>() - 1.0).abs(),
        threshold: tolerance,
    }));
    tasks.push(Box::new(move || {
        let m1: f64 = s
            .weights()
            .iter()
            .zip(s.eigenvalues())
            .map(|(w, l)| w * l)
            .sum();
        Check {
            name: "moment-first",
            residual: (m1 - q1).abs() / q1.abs().max(1.0),
            threshold: tolerance,
        }
    }));
    tasks.push(Box::new(move || {
        let m2: f64 = s
            .weights()
            .iter()
            .zip(s.eigenvalues())
            .map(|(w, l)| w * l * l)
            .sum();
        let want = q1 * q1 + b1 * b1;
        Check {
            name: "moment-second",
            residual: (m2 - want).abs() / want.abs().max(1.0),
            threshold: tolerance,
        }
    }));

    let jj = &j;
    if n >= 2 {
        tasks.push(Box::new(move || {
            let l = s.eigenvalues();
            let eta = jj
                .truncate()
                .expect("n >= 2")
                .eigendecompose()
                .map(|t| t.eigenvalues().to_vec())
                .unwrap_or_default();
            let scale = l.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
            let mut worst: f64 = 0.0;
            for (k, &e) in eta.iter().enumerate() {
                worst = worst.max(l[k] - e).max(e - l[k + 1]);
            }
            Check {
                name: "interlacing-truncation",
                residual: worst.max(0.0) / scale,
                threshold: 1e-12,
            }
        }));
        tasks.push(Box::new(move || {
            let worst = probes(s.eigenvalues())
                .into_iter()
                .map(|z| {
                    let res = riccati_residual(jj, z)
                        .map(|r| r.norm())
                        .unwrap_or(f64::NAN);
                    let m = s.weyl_m(z).expect("non-real probe");
                    let scale = (q1 - z - 1.0 / m).norm().max(1e-300);
                    res / scale
                })
                .fold(0.0f64, f64::max);
            Check {
                name: "riccati",
                residual: worst,
                threshold: tolerance,
            }
        }));
    }

    tasks.push(Box::new(move || {
        let worst = probes(s.eigenvalues())
            .into_iter()
            .map(|z| {
                let m = s.weyl_m(z).expect("non-real probe");
                let a = m * jj.char_poly(z);
                let b = jj.char_poly_truncated(z);
                (a + b).norm() / a.norm().max(b.norm()).max(1e-300)
            })
            .fold(0.0f64, f64::max);
        Check {
            name: "m-product-form",
            residual: worst,
            threshold: tolerance,
        }
    }));

    let pp = &p;
    let mus = &perturbed;
    tasks.push(Box::new(move || {
        let lambda_sum: f64 = s.eigenvalues().iter().sum();
        let mu_sum: f64 = mus.eigenvalues().iter().sum();
        let t2 = pp.theta() * pp.theta();
        let expected = q1 * (t2 - 1.0) + t2 * pp.h();
        let scale = q1.abs().max(pp.h().abs()).max(1.0);
        Check {
            name: "trace-identity",
            residual: (mu_sum - lambda_sum - expected).abs() / (n as f64 * scale),
            threshold: tolerance * 10.0,
        }
    }));

    if !p.is_rank_one() {
        let gamma = p.gamma().expect("theta != 1");
        tasks.push(Box::new(move || {
            let readings = classify_readings(s.eigenvalues(), mus.eigenvalues());
            let hit = readings.map(|rs| {
                rs.iter().any(|r| match r.regime() {
                    Regime::SharedGamma => r
                        .shared_value()
                        .map(|v| (v - gamma).abs() <= 1e-9 * gamma.abs().max(1.0))
                        .unwrap_or(false),
                    _ => r
                        .gap_interval()
                        .map(|(lo, hi)| lo < gamma && gamma < hi)
                        .unwrap_or(false),
                })
            });
            Check {
                name: "classification",
                residual: if hit.unwrap_or(false) { 0.0 } else { 1.0 },
                threshold: 0.5,
            }
        }));
        tasks.push(Box::new(move || {
            let worst = probes(s.eigenvalues())
                .into_iter()
                .map(|z| {
                    let q = m_quotient(jj, pp, z).expect("non-real probe");
                    let mut prod = Complex64::new(1.0, 0.0);
                    for (mu, lam) in mus.eigenvalues().iter().zip(s.eigenvalues()) {
                        prod *= (z - mu) / (z - lam);
                    }
                    (q - prod).norm() / q.norm().max(1e-300)
                })
                .fold(0.0f64, f64::max);
            Check {
                name: "quotient-product",
                residual: worst,
                threshold: tolerance,
            }
        }));
        tasks.push(Box::new(move || {
            let outcome = verify_roundtrip(jj, pp, s.eigenvalues(), mus.eigenvalues(), gamma);
            Check {
                name: "parameter-roundtrip",
                residual: outcome.unwrap_or(f64::INFINITY),
                threshold: tolerance * 10.0,
            }
        }));
        tasks.push(Box::new(move || {
            let residual = weight_formula_residual(s, mus.eigenvalues(), gamma, pp);
            Check {
                name: "weight-formula",
                residual: residual.unwrap_or(f64::INFINITY),
                threshold: tolerance * 10.0,
            }
        }));
    }

    let checks = jspectra::par::map_vec(tasks, |task| task());
    report(checks)
}

/// Solve back at the true γ and compare (q, b, θ, h); worst relative error.
fn verify_roundtrip(
    j: &JacobiMatrix,
    p: &PerturbationParams,
    lambdas: &[f64],
    mus: &[f64],
    gamma: f64,
) -> Option<f64> {
    let readings = classify_readings(lambdas, mus).ok()?;
    let sol = readings.iter().find_map(|r| match r.regime() {
        Regime::SharedGamma => solve_shared_by_theta(r, p.theta() * p.theta()).ok(),
        _ => {
            let (lo, hi) = r.gap_interval().ok()?;
            (lo < gamma && gamma < hi)
                .then(|| solve_disjoint(r, gamma).ok())
                .flatten()
        }
    })?;
    let rel = |got: &[f64], want: &[f64]| {
        got.iter()
            .zip(want)
            .map(|(g, w)| (g - w).abs() / w.abs().max(1.0))
            .fold(0.0f64, f64::max)
    };
    let eq = rel(sol.matrix.diagonal(), j.diagonal());
    let eb = rel(sol.matrix.off_diagonal(), j.off_diagonal());
    let et = (sol.params.theta() - p.theta()).abs() / p.theta();
    let eh = (sol.params.h() - p.h()).abs() / p.h().abs().max(1.0);
    Some(eq.max(eb).max(et).max(eh))
}

/// τ(γ) or υ(θ²) against the eigenvector weights; relative with a floor
/// below which weights carry no relative information.
fn weight_formula_residual(
    s: &jspectra::SpectralData,
    mus: &[f64],
    gamma: f64,
    p: &PerturbationParams,
) -> Option<f64> {
    let readings = classify_readings(s.eigenvalues(), mus).ok()?;
    let computed = readings.iter().find_map(|r| match r.regime() {
        Regime::SharedGamma => upsilon_weights(r, p.theta() * p.theta()).ok(),
        _ => {
            let (lo, hi) = r.gap_interval().ok()?;
            (lo < gamma && gamma < hi)
                .then(|| tau_weights(r, gamma).ok())
                .flatten()
        }
    })?;
    Some(
        computed
            .iter()
            .zip(s.weights())
            .map(|(c, w)| (c - w).abs() / w.max(1e-6))
            .fold(0.0f64, f64::max),
    )
}

/// Verify a spectra file. With measure weights present (as `forward` writes
/// them), the matrix is pinned by (λ, w) and the corner parameters follow
/// from the two trace identities, so a corrupted μ (or a corrupted γ) shows
/// up as a reproduction residual. Without weights every validly-interlacing
/// pair is realizable at finite size; only pattern- and solver-level checks
/// apply.
pub fn run_verify_spectra(spectra: &Path, tolerance: f64) -> Result<(), CliError> {
    let file: SpectraFile = read_json(spectra)?;
    let readings = classify_readings(&file.lambda, &file.mu)?;
    let reading = readings.first().expect("classify_readings is non-empty");
    let scale = file
        .lambda
        .iter()
        .chain(&file.mu)
        .fold(1.0f64, |a, &v| a.max(v.abs()));

    let mut checks = vec![Check {
        name: "classification",
        residual: 0.0,
        threshold: 0.5,
    }];

    if let Some(weights) = &file.weights {
        let sum: f64 = weights.iter().sum();
        let negative = weights.iter().any(|&w| w <= 0.0) || weights.len() != file.lambda.len();
        checks.push(Check {
            name: "weight-normalization",
            residual: if negative {
                f64::INFINITY
            } else {
                (sum - 1.0).abs()
            },
            threshold: tolerance * 10.0,
        });

        match verify_pair_against_weights(&file, scale) {
            Ok((lambda_res, mu_res, gamma_res)) => {
                checks.push(Check {
                    name: "lambda-reproduction",
                    residual: lambda_res,
                    threshold: tolerance * 1e3,
                });
                checks.push(Check {
                    name: "mu-reproduction",
                    residual: mu_res,
                    threshold: tolerance * 1e3,
                });
                if let Some(g) = gamma_res {
                    checks.push(Check {
                        name: "gamma-consistency",
                        residual: g,
                        threshold: tolerance * 1e3,
                    });
                }
            }
            Err(_) => {
                checks.push(Check {
                    name: "mu-reproduction",
                    residual: f64::INFINITY,
                    threshold: tolerance * 1e3,
                });
            }
        }
    } else {
        // No weights: pick a probe ω in the working region and check the
        // solver route end to end.
        let omega = match reading.regime() {
            Regime::SharedGamma => {
                let gamma = reading.shared_value().expect("shared value");
                let mg = quotient_from_spectra_real(reading, gamma)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                if mg > 1.0 {
                    2.0 * mg
                } else {
                    0.5 * mg
                }
            }
            _ => {
                let (lo, hi) = reading.gap_interval().expect("disjoint reading");
                match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => lo + lo.abs().max(1.0),
                    (false, true) => hi - hi.abs().max(1.0),
                    (false, false) => unreachable!("a gap has at least one finite endpoint"),
                }
            }
        };
        let weights = match reading.regime() {
            Regime::SharedGamma => upsilon_weights(reading, omega),
            _ => tau_weights(reading, omega),
        }?;
        let negative = weights.iter().any(|&x| x <= 0.0);
        let sum: f64 = weights.iter().sum();
        checks.push(Check {
            name: "product-normalization",
            residual: if negative {
                f64::INFINITY
            } else {
                (sum - 1.0).abs()
            },
            threshold: tolerance * 10.0,
        });
        let solution = match reading.regime() {
            Regime::SharedGamma => solve_shared_by_theta(reading, omega),
            _ => solve_disjoint(reading, omega),
        };
        let residual = match solution {
            Ok(sol) => spectra_mismatch(&sol, &file.lambda, &file.mu, scale)?,
            Err(_) => f64::INFINITY,
        };
        checks.push(Check {
            name: "spectra-reproduction",
            residual,
            threshold: tolerance * 1e3,
        });
    }

    report(checks)
}

/// Reconstruct the matrix from (λ, weights); read the corner parameters off
/// the two trace identities; return the reproduction residuals for λ, μ and
/// the γ consistency residual when the file carries γ.
fn verify_pair_against_weights(
    file: &SpectraFile,
    scale: f64,
) -> Result<(f64, f64, Option<f64>), CliError> {
    let weights = file.weights.as_ref().expect("caller checked");
    let total: f64 = weights.iter().sum();
    let normalized: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let measure = jspectra::DiscreteMeasure::new(file.lambda.clone(), normalized)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let j = jspectra::reconstruct_jacobi(&measure).map_err(CliError::from)?;

    let lam = j.eigendecompose()?;
    let mut lambda_res: f64 = 0.0;
    for (got, want) in lam.eigenvalues().iter().zip(&file.lambda) {
        lambda_res = lambda_res.max((got - want).abs() / scale);
    }

    // Corner parameters from Σμ−Σλ and Σμ²−Σλ².
    let q1 = j.diagonal()[0];
    let b1 = j.off_diagonal().first().copied().unwrap_or(0.0);
    let sum_l: f64 = file.lambda.iter().sum();
    let sum_m: f64 = file.mu.iter().sum();
    let sq_l: f64 = file.lambda.iter().map(|x| x * x).sum();
    let sq_m: f64 = file.mu.iter().map(|x| x * x).sum();
    let q1_tilde = q1 + (sum_m - sum_l);
    let b1_tilde_sq = b1 * b1 + 0.5 * (sq_m - sq_l - q1_tilde * q1_tilde + q1 * q1);
    if j.dim() >= 2 && b1_tilde_sq <= 0.0 {
        return Err(CliError::Numerical(
            "trace identities give a non-positive first coupling".into(),
        ));
    }
    let theta = if j.dim() >= 2 {
        (b1_tilde_sq / (b1 * b1)).sqrt()
    } else if q1_tilde / q1 > 0.0 {
        // 1x1: only the corner scale is visible; take h = 0.
        (q1_tilde / q1).sqrt()
    } else {
        return Err(CliError::Numerical(
            "trace identities give a non-positive corner ratio".into(),
        ));
    };
    let h = q1_tilde / (theta * theta) - q1;
    let params = PerturbationParams::new(theta, h).map_err(CliError::from)?;
    let perturbed = apply_perturbation(&j, &params).eigendecompose()?;
    let mut mu_res: f64 = 0.0;
    for (got, want) in perturbed.eigenvalues().iter().zip(&file.mu) {
        mu_res = mu_res.max((got - want).abs() / scale);
    }

    let gamma_res = file.gamma.map(|g| match params.gamma() {
        Ok(derived) => (derived - g).abs() / g.abs().max(1.0),
        Err(_) => f64::INFINITY,
    });
    Ok((lambda_res, mu_res, gamma_res))
}

fn spectra_mismatch(
    sol: &InverseSolution,
    lambda: &[f64],
    mu: &[f64],
    scale: f64,
) -> Result<f64, CliError> {
    let lam = sol.matrix.eigendecompose().map_err(CliError::from)?;
    let mut worst: f64 = 0.0;
    for (got, want) in lam.eigenvalues().iter().zip(lambda) {
        worst = worst.max((got - want).abs() / scale);
    }
    let mus = apply_perturbation(&sol.matrix, &sol.params)
        .eigendecompose()
        .map_err(CliError::from)?;
    for (got, want) in mus.eigenvalues().iter().zip(mu) {
        worst = worst.max((got - want).abs() / scale);
    }
    Ok(worst)
}
