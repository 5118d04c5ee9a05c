//! Execution of a validated job.

use std::collections::BTreeMap;

use heattrace::assembly::{
    eval_expansion, gamma_k, omega, radial_integral_series, trace_expansion_capped, CoeffValue,
    TraceExpansion,
};
use heattrace::exactalg::{to_f64, Rational};
use heattrace::oracles::{
    harmonic_trace_eval, harmonic_trace_series, quadrature_i_with, remainder_order_probe, spectral_traces,
    QuadConfig,
};
use heattrace::parametrix::build_parametrix_capped;
use heattrace::{Error, Result};

use crate::job::{Command, Format, JobSpec};
use crate::report::{
    Check, DiagRecord, EvalRecord, ExponentFit, JobRecord, NumericRow, QuadratureRow, Report, SpectralUsed,
    Verification,
};

/// A finished job: the report plus the expansion it was built from, if any.
pub struct Outcome {
    pub report: Report,
    pub expansion: Option<TraceExpansion>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Csv => self.report.to_csv().unwrap_or_default(),
            Format::Human => self.report.to_human(self.expansion.as_ref()),
        }
    }
}

fn job_record(job: &JobSpec) -> JobRecord {
    let spectral = job.command == Command::VerifyNumeric;
    JobRecord {
        command: job.command.name().to_owned(),
        dim: job.dim,
        potential: job.potential.to_string(),
        order: job.order,
        t: job.t_values.clone(),
        case: job.case.map(|c| c.name().to_owned()),
        max_k: job.max_k,
        grid_n: spectral.then(|| job.spectral.config().grid),
        rmax: job.spectral.rmax,
        lmax: spectral.then(|| job.spectral.config().l_max),
        tol: (job.command != Command::Expand && job.command != Command::Coeff).then_some(job.tol),
        oracle_tol: (spectral && job.potential.harmonic_coupling().is_some()).then_some(job.oracle_tol),
    }
}

fn expansion(job: &JobSpec) -> Result<TraceExpansion> {
    trace_expansion_capped(&job.potential, job.order, job.max_k)
}

fn base_report(job: &JobSpec) -> Report {
    let mut report = Report::new(job_record(job));
    let probe_radius = job.potential.radius_for_level(1.0).max(1.0) * 4.0;
    if let Some(min) = job.potential.negative_minimum(probe_radius, 4001) {
        report.warnings.push(format!(
            "V dips to {min:.6} below zero; the expansion is formal there"
        ));
    }
    report
}

pub fn run(job: &JobSpec) -> Result<Outcome> {
    match job.command {
        Command::Expand => run_expand(job),
        Command::Coeff => run_coeff(job),
        _ => run_verify(job),
    }
}

pub fn run_expand(job: &JobSpec) -> Result<Outcome> {
    let exp = expansion(job)?;
    let mut report = base_report(job);
    report.set_expansion(&exp);
    for &t in &job.t_values {
        report.eval.push(EvalRecord {
            t,
            value: eval_expansion(&exp, t)?,
        });
    }
    Ok(Outcome {
        report,
        expansion: Some(exp),
    })
}

pub fn run_coeff(job: &JobSpec) -> Result<Outcome> {
    let set = build_parametrix_capped(&job.potential, job.order, job.max_k)?;
    let q = job.potential.degree();
    let mut report = base_report(job);
    for (k, a) in set.diag().iter().enumerate() {
        let gamma = gamma_k(k, q);
        report.diagonal.push(DiagRecord {
            k,
            gamma,
            polynomial: a.to_string(),
            omegas: omega(a, gamma)?.iter().map(Rational::to_string).collect(),
        });
    }
    Ok(Outcome {
        report,
        expansion: None,
    })
}

pub fn run_verify(job: &JobSpec) -> Result<Outcome> {
    match job.command {
        Command::VerifyHarmonic => verify_harmonic(job),
        Command::VerifyPaper => verify_paper(job),
        Command::VerifyNumeric => verify_numeric(job),
        Command::OracleQuadrature => oracle_quadrature(job),
        other => Err(Error::InvalidConfig(format!(
            "{} is not a verification",
            other.name()
        ))),
    }
}

fn rel_diff(computed: f64, expected: f64) -> f64 {
    if computed == expected {
        0.0
    } else {
        (computed - expected).abs() / expected.abs()
    }
}

fn finish(mut report: Report, mut v: Verification, exp: Option<TraceExpansion>) -> Outcome {
    v.passed = v.first_failure.is_none();
    report.verification = Some(v);
    Outcome {
        report,
        expansion: exp,
    }
}

fn verification(kind: &str, tolerance: Option<f64>) -> Verification {
    Verification {
        kind: kind.to_owned(),
        passed: false,
        tolerance,
        first_failure: None,
        checks: Vec::new(),
        numeric: Vec::new(),
        quadrature: Vec::new(),
        exponent: None,
        spectral: None,
    }
}

fn record_failure(v: &mut Verification, what: String) {
    if v.first_failure.is_none() {
        v.first_failure = Some(what);
    }
}

fn verify_harmonic(job: &JobSpec) -> Result<Outcome> {
    let c = job
        .potential
        .harmonic_coupling()
        .cloned()
        .ok_or_else(|| Error::InvalidConfig("not a harmonic potential".into()))?;
    let exp = expansion(job)?;
    let d = job.dim as i64;
    let laurent = harmonic_trace_series(job.dim, c.clone(), job.order / 4);
    let mut report = base_report(job);
    report.set_expansion(&exp);
    let mut v = verification("verify-harmonic", None);
    for j in 0..=job.order {
        let got = exp.combined(j).collapse_cq(&c);
        // t-power of term j is -d + j/2; the closed form only has -d + 2m
        let want = if j % 4 == 0 {
            laurent.coefficient(-d + (j / 2) as i64).collapse_cq(&c)
        } else {
            CoeffValue::zero()
        };
        let passed = got == want;
        if !passed {
            record_failure(&mut v, format!("j = {j} (t^{}): {got} != {want}", exp.t_power(j)));
        }
        v.checks.push(Check {
            name: format!("t^({})", exp.t_power(j)),
            passed,
            computed: got.to_string(),
            expected: want.to_string(),
            rel_diff: None,
        });
    }
    Ok(finish(report, v, Some(exp)))
}

fn verify_paper(job: &JobSpec) -> Result<Outcome> {
    let case = job
        .case
        .ok_or_else(|| Error::InvalidConfig("verify-paper needs a case".into()))?;
    let exp = expansion(job)?;
    let cq = exp.cq_f64();
    let printed = case.printed(&job.potential);
    let mut report = base_report(job);
    report.set_expansion(&exp);
    let mut v = verification("verify-paper", Some(job.tol));
    for (j, &want) in printed.iter().enumerate().take(job.order + 1) {
        let a = &exp.coefficients()[j];
        let got = a.eval(cq);
        let (passed, rel) = if want == 0.0 {
            (a.is_zero(), None)
        } else {
            let r = rel_diff(got, want);
            (r <= job.tol, Some(r))
        };
        if !passed {
            record_failure(&mut v, format!("a_{j}: computed {got:e}, printed {want:e}"));
        }
        v.checks.push(Check {
            name: format!("a_{j}"),
            passed,
            computed: format!("{got:e}"),
            expected: format!("{want:e}"),
            rel_diff: rel,
        });
    }
    Ok(finish(report, v, Some(exp)))
}

fn verify_numeric(job: &JobSpec) -> Result<Outcome> {
    let exp = expansion(job)?;
    let cfg = job.spectral.config();
    let traces = spectral_traces(&job.potential, &job.t_values, &cfg)?;
    let coupling = job.potential.harmonic_coupling().map(to_f64);

    let mut report = base_report(job);
    report.set_expansion(&exp);
    let mut v = verification("verify-numeric", Some(job.tol));
    v.spectral = traces.first().map(|s| SpectralUsed {
        radius: s.radius,
        grid_n: cfg.grid,
        channels: s.channels,
    });

    // keyed by bit pattern so the probe can look traces up by t
    let by_t: BTreeMap<u64, (f64, f64)> = traces
        .iter()
        .map(|s| (s.t.to_bits(), (s.value, s.error_estimate)))
        .collect();
    let mut order: Vec<f64> = job.t_values.clone();
    order.sort_by(|a, b| b.total_cmp(a));
    let pairs: Vec<(f64, f64)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    let probe = if pairs.is_empty() {
        None
    } else {
        Some(remainder_order_probe(&exp, |t| Ok(by_t[&t.to_bits()]), &pairs)?)
    };

    for s in &traces {
        let e = eval_expansion(&exp, s.t)?;
        let rel = rel_diff(e, s.value);
        if !(rel <= job.tol) {
            record_failure(
                &mut v,
                format!("t = {}: expansion vs spectral rel diff {rel:.3e}", s.t),
            );
        }
        let closed = coupling.map(|c| harmonic_trace_eval(job.dim, c, s.t));
        let closed_rel = closed.map(|c| rel_diff(s.value, c));
        if let Some(r) = closed_rel.filter(|r| !(*r <= job.oracle_tol)) {
            record_failure(
                &mut v,
                format!("t = {}: spectral vs closed form rel diff {r:.3e}", s.t),
            );
        }
        let exponent = probe
            .as_ref()
            .and_then(|p| p.pairs.iter().find(|pp| pp.t.1 == s.t))
            .map(|pp| pp.exponent);
        v.numeric.push(NumericRow {
            t: s.t,
            expansion: e,
            spectral: s.value,
            spectral_error: s.error_estimate,
            rel_diff: rel,
            closed_form: closed,
            closed_rel_diff: closed_rel,
            exponent,
        });
    }

    if let Some(p) = probe {
        let predicted = exp.remainder_power().clone();
        if let Some(w) = job.exponent_window {
            match p.exponent {
                Some(a) if (a - to_f64(&predicted)).abs() <= w => {}
                Some(a) => record_failure(
                    &mut v,
                    format!("fitted remainder exponent {a:.4} is not within {w} of {predicted}"),
                ),
                None => record_failure(&mut v, "every probe pair is at the oracle noise floor".into()),
            }
        }
        v.exponent = Some(ExponentFit {
            fitted: p.exponent,
            remainder_power: predicted.to_string(),
            window: job.exponent_window,
            noise_floor: p.noise_floor,
        });
    }
    Ok(finish(report, v, Some(exp)))
}

fn oracle_quadrature(job: &JobSpec) -> Result<Outcome> {
    let set = build_parametrix_capped(&job.potential, job.order, job.max_k)?;
    let cfg = QuadConfig {
        rel_tol: (job.tol * 1e-4).max(1e-13),
        ..QuadConfig::default()
    };
    let report = base_report(job);
    let mut v = verification("oracle-quadrature", Some(job.tol));
    for k in 0..=job.order {
        let diag = &set.diag()[k];
        for &t in &job.t_values {
            let quad = quadrature_i_with(&job.potential, diag, t, &cfg)?;
            let series = radial_integral_series(&job.potential, k, diag, t, job.terms)?;
            let rel = rel_diff(series, quad.value);
            if !(rel <= job.tol) {
                record_failure(&mut v, format!("k = {k}, t = {t}: rel diff {rel:.3e}"));
            }
            v.quadrature.push(QuadratureRow {
                k,
                t,
                quadrature: quad.value,
                quadrature_error: quad.error,
                series,
                rel_diff: rel,
            });
        }
    }
    Ok(finish(report, v, None))
}
