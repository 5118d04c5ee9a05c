use crate::assembly::{eval_expansion, TraceExpansion};
use crate::error::{Error, Result};

/// One `(t, t')` comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePair {
    pub t: (f64, f64),
    pub error: (f64, f64),
    /// Reference uncertainty at each point.
    pub noise: (f64, f64),
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    /// Mean fitted exponent over the usable pairs; `None` when every pair is at the noise floor.
    pub exponent: Option<f64>,
    pub pairs: Vec<ProbePair>,
    /// True if some pair had an error below the reference's own uncertainty.
    pub noise_floor: bool,
}

/// Fit `alpha` in `|reference(t) - expansion(t)| ~ C t^alpha` from
/// `ln(e1/e2) / ln(t1/t2)` averaged over the pairs.
///
/// `reference` returns `(value, uncertainty)`. Pairs whose error does not exceed
/// twice the uncertainty are reported as noise-limited and left out of the mean.
pub fn remainder_order_probe<F>(
    exp: &TraceExpansion,
    reference: F,
    pairs: &[(f64, f64)],
) -> Result<ProbeReport>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let err_at = |t: f64| -> Result<(f64, f64)> {
        let (value, noise) = reference(t)?;
        Ok(((value - eval_expansion(exp, t)?).abs(), noise))
    };
    let mut out = Vec::with_capacity(pairs.len());
    let mut noise_floor = false;
    let mut fitted = Vec::new();
    for &(t1, t2) in pairs {
        if t1 == t2 {
            return Err(Error::InvalidConfig(format!(
                "degenerate probe pair ({t1}, {t2})"
            )));
        }
        let (e1, n1) = err_at(t1)?;
        let (e2, n2) = err_at(t2)?;
        let exponent = (e1 / e2).ln() / (t1 / t2).ln();
        if e1 <= 2.0 * n1 || e2 <= 2.0 * n2 || e1 == 0.0 || e2 == 0.0 {
            noise_floor = true;
        } else {
            fitted.push(exponent);
        }
        out.push(ProbePair {
            t: (t1, t2),
            error: (e1, e2),
            noise: (n1, n2),
            exponent,
        });
    }
    let exponent = (!fitted.is_empty()).then(|| fitted.iter().sum::<f64>() / fitted.len() as f64);
    Ok(ProbeReport {
        exponent,
        pairs: out,
        noise_floor,
    })
}
