//! Serializable report and its human / CSV renderings.

use std::fmt::Write as _;

use heattrace::assembly::{Atom, AtomKey, CoeffValue, TraceExpansion};
use heattrace::exactalg::Rational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub rational: String,
    pub pi_half_power: i64,
    pub gamma_residue: String,
    pub cq_exponent: String,
}

impl From<&Atom> for AtomRecord {
    fn from(a: &Atom) -> Self {
        Self {
            rational: a.rational.to_string(),
            pi_half_power: a.key.pi_half_power,
            gamma_residue: a.key.gamma_residue.to_string(),
            cq_exponent: a.key.cq_exponent.to_string(),
        }
    }
}

impl AtomRecord {
    pub fn to_atom(&self) -> Result<Atom, String> {
        let parse = |field: &str, s: &str| -> Result<Rational, String> {
            s.parse().map_err(|_| format!("{field}: '{s}' is not a rational"))
        };
        Ok(Atom {
            rational: parse("rational", &self.rational)?,
            key: AtomKey {
                pi_half_power: self.pi_half_power,
                gamma_residue: parse("gamma_residue", &self.gamma_residue)?,
                cq_exponent: parse("cq_exponent", &self.cq_exponent)?,
            },
        })
    }
}

pub fn atoms_of(value: &CoeffValue) -> Vec<AtomRecord> {
    value.atoms().map(|a| AtomRecord::from(&a)).collect()
}

pub fn coeff_from_records(records: &[AtomRecord]) -> Result<CoeffValue, String> {
    let atoms = records
        .iter()
        .map(AtomRecord::to_atom)
        .collect::<Result<Vec<_>, _>>()?;
    CoeffValue::from_atoms(atoms).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub j: usize,
    pub t_power: String,
    pub atoms: Vec<AtomRecord>,
    pub float: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagRecord {
    pub k: usize,
    pub gamma: u32,
    pub polynomial: String,
    pub omegas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub command: String,
    pub dim: usize,
    pub potential: String,
    pub order: usize,
    pub t: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub max_k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub computed: String,
    pub expected: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericRow {
    pub t: f64,
    pub expansion: f64,
    pub spectral: f64,
    pub spectral_error: f64,
    pub rel_diff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_rel_diff: Option<f64>,
    /// Exponent fitted between this row and the previous one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRow {
    pub k: usize,
    pub t: f64,
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub series: f64,
    pub rel_diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted: Option<f64>,
    pub remainder_power: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    pub noise_floor: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralUsed {
    pub radius: f64,
    pub grid_n: usize,
    pub channels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub kind: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub numeric: Vec<NumericRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quadrature: Vec<QuadratureRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralUsed>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub job: JobRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading_power: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefactor: Vec<AtomRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eval: Vec<EvalRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagonal: Vec<DiagRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    /// Non-fatal notes, e.g. a potential that dips below zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(job: JobRecord) -> Self {
        Self {
            job,
            leading_power: None,
            prefactor: Vec::new(),
            terms: Vec::new(),
            eval: Vec::new(),
            diagonal: Vec::new(),
            verification: None,
            warnings: Vec::new(),
        }
    }

    pub fn set_expansion(&mut self, exp: &TraceExpansion) {
        let cq = exp.cq_f64();
        self.leading_power = Some(exp.leading_power().to_string());
        self.prefactor = atoms_of(exp.prefactor());
        self.terms = exp
            .coefficients()
            .iter()
            .enumerate()
            .map(|(j, a)| TermRecord {
                j,
                t_power: exp.t_power(j).to_string(),
                atoms: atoms_of(a),
                float: a.eval(cq),
            })
            .collect();
    }

    /// Symbolic `a_j` rebuilt from the serialized atoms.
    pub fn coefficients(&self) -> Result<Vec<CoeffValue>, String> {
        self.terms.iter().map(|t| coeff_from_records(&t.atoms)).collect()
    }

    pub fn prefactor_value(&self) -> Result<CoeffValue, String> {
        coeff_from_records(&self.prefactor)
    }

    pub fn passed(&self) -> bool {
        self.verification.as_ref().is_none_or(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// CSV of the numeric table, if this report has one.
    pub fn to_csv(&self) -> Option<String> {
        let v = self.verification.as_ref()?;
        let mut out = String::new();
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        if !v.numeric.is_empty() {
            out.push_str(
                "t,expansion,spectral,spectral_error,rel_diff,closed_form,closed_rel_diff,exponent\n",
            );
            for r in &v.numeric {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.t,
                    r.expansion,
                    r.spectral,
                    r.spectral_error,
                    r.rel_diff,
                    opt(r.closed_form),
                    opt(r.closed_rel_diff),
                    opt(r.exponent)
                );
            }
            return Some(out);
        }
        if !v.quadrature.is_empty() {
            out.push_str("k,t,quadrature,quadrature_error,series,rel_diff\n");
            for r in &v.quadrature {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.k, r.t, r.quadrature, r.quadrature_error, r.series, r.rel_diff
                );
            }
            return Some(out);
        }
        None
    }

    pub fn to_human(&self, exp: Option<&TraceExpansion>) -> String {
        let mut out = String::new();
        let j = &self.job;
        let _ = writeln!(out, "{}: V(r) = {} on R^{}", j.command, j.potential, j.dim);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(exp) = exp {
            write_expansion(&mut out, exp);
            for e in &self.eval {
                let _ = writeln!(out, "K({}) ~ {:.12e}", e.t, e.value);
            }
        }
        if !self.diagonal.is_empty() {
            let _ = writeln!(out, "{:>3}  {:>5}  A_k(r)", "k", "gamma");
            for d in &self.diagonal {
                let _ = writeln!(out, "{:>3}  {:>5}  {}", d.k, d.gamma, d.polynomial);
            }
        }
        if let Some(v) = &self.verification {
            write_verification(&mut out, v);
        }
        out
    }
}

fn write_expansion(out: &mut String, exp: &TraceExpansion) {
    let cq = exp.cq_f64();
    let terms: Vec<usize> = (0..=exp.order())
        .filter(|&j| !exp.coefficients()[j].is_zero())
        .collect();
    let _ = writeln!(
        out,
        "K(t) ~ prefactor * t^({}) * sum_j a_j t^(j/{}),  prefactor = {} = {:.12e}",
        exp.leading_power(),
        exp.q(),
        exp.prefactor(),
        exp.prefactor().eval(cq)
    );
    if exp.order() == 0 {
        let c = exp.combined(0).collapse_cq(exp.potential().leading());
        let _ = writeln!(out, "leading term: ({c}) * t^({})", exp.t_power(0));
        return;
    }
    let _ = writeln!(
        out,
        "{:>3}  {:>8}  {:<48}  {:>22}  combined coefficient",
        "j", "t-power", "a_j", "value"
    );
    for j in terms {
        let a = &exp.coefficients()[j];
        let combined = exp.combined(j).collapse_cq(exp.potential().leading());
        let _ = writeln!(
            out,
            "{:>3}  {:>8}  {:<48}  {:>22.15e}  {}",
            j,
            exp.t_power(j).to_string(),
            a.to_string(),
            a.eval(cq),
            combined
        );
    }
    let _ = writeln!(out, "remainder O(t^({}))", exp.remainder_power());
}

fn write_verification(out: &mut String, v: &Verification) {
    let _ = writeln!(out, "{} {}", v.kind, if v.passed { "PASS" } else { "FAIL" });
    for c in &v.checks {
        let rel = c.rel_diff.map(|r| format!("  rel {r:.2e}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "  [{}] {}: {} vs {}{}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.computed,
            c.expected,
            rel
        );
    }
    if !v.numeric.is_empty() {
        let _ = writeln!(
            out,
            "  {:>8}  {:>20}  {:>20}  {:>10}  {:>10}  {:>8}",
            "t", "expansion", "spectral", "oracle err", "rel diff", "exponent"
        );
        for r in &v.numeric {
            let _ = writeln!(
                out,
                "  {:>8}  {:>20.12e}  {:>20.12e}  {:>10.2e}  {:>10.2e}  {:>8}",
                r.t,
                r.expansion,
                r.spectral,
                r.spectral_error,
                r.rel_diff,
                r.exponent.map(|e| format!("{e:.3}")).unwrap_or_default()
            );
            if let (Some(c), Some(d)) = (r.closed_form, r.closed_rel_diff) {
                let _ = writeln!(
                    out,
                    "  {:>8}  closed form {:.12e}, spectral rel diff {:.2e}",
                    "", c, d
                );
            }
        }
    }
    if !v.quadrature.is_empty() {
        let _ = writeln!(
            out,
            "  {:>3}  {:>8}  {:>20}  {:>20}  {:>10}",
            "k", "t", "quadrature", "series", "rel diff"
        );
        for r in &v.quadrature {
            let _ = writeln!(
                out,
                "  {:>3}  {:>8}  {:>20.12e}  {:>20.12e}  {:>10.2e}",
                r.k, r.t, r.quadrature, r.series, r.rel_diff
            );
        }
    }
    if let Some(e) = &v.exponent {
        let fitted = e
            .fitted
            .map(|f| format!("{f:.4}"))
            .unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            out,
            "  fitted remainder exponent {fitted} (expected {}){}",
            e.remainder_power,
            if e.noise_floor {
                ", some pairs at the oracle noise floor"
            } else {
                ""
            }
        );
    }
    if let Some(f) = &v.first_failure {
        let _ = writeln!(out, "  first failure: {f}");
    }
}
