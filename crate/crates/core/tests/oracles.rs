use heattrace::assembly::{eval_expansion, radial_integral_series, trace_expansion};
use heattrace::exactalg::int;
use heattrace::oracles::{
    harmonic_trace_eval, quadrature_i, remainder_order_probe, spectral_trace, spectral_traces, SpectralConfig,
};
use heattrace::parametrix::{build_parametrix, PotentialSpec};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn one_dimensional_oscillator_spectrum() {
    let v = PotentialSpec::harmonic(1, int(1)).unwrap();
    let ts = [0.5, 1.0, 2.0];
    for s in spectral_traces(&v, &ts, &SpectralConfig::default()).unwrap() {
        let exact = harmonic_trace_eval(1, 1.0, s.t);
        assert!(rel(s.value, exact) <= 1e-6, "t = {}: {} vs {exact}", s.t, s.value);
    }
}

#[test]
fn scaled_oscillator_spectrum() {
    // c = 4 doubles the level spacing
    let v = PotentialSpec::harmonic(1, int(4)).unwrap();
    let s = spectral_trace(&v, 0.7, &SpectralConfig::default()).unwrap();
    assert!(rel(s.value, harmonic_trace_eval(1, 4.0, 0.7)) <= 1e-6);
}

#[test]
fn richardson_estimate_shrinks_with_grid() {
    let v = PotentialSpec::harmonic(3, int(1)).unwrap();
    let at = |grid| {
        let cfg = SpectralConfig {
            grid,
            ..SpectralConfig::default()
        };
        spectral_trace(&v, 0.5, &cfg).unwrap().error_estimate
    };
    let (coarse, fine) = (at(256), at(512));
    assert!(coarse / fine >= 3.5, "{coarse} / {fine}");
}

#[test]
fn quadrature_matches_series_on_quartic() {
    let v = PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3))]).unwrap();
    let set = build_parametrix(&v, 4).unwrap();
    for k in [0, 2, 3, 4] {
        for t in [0.02, 0.05, 0.1] {
            let quad = quadrature_i(&v, &set.diag()[k], t).unwrap();
            let series = radial_integral_series(&v, k, &set.diag()[k], t, 40).unwrap();
            assert!(rel(series, quad) <= 1e-8, "k = {k}, t = {t}: {series} vs {quad}");
        }
    }
}

#[test]
fn oscillator_expansion_tracks_closed_form() {
    let v = PotentialSpec::harmonic(3, int(1)).unwrap();
    let exp = trace_expansion(&v, 12).unwrap();
    for t in [0.05, 0.1, 0.2] {
        let e = eval_expansion(&exp, t).unwrap();
        let c = harmonic_trace_eval(3, 1.0, t);
        // the first omitted term is t^5, i.e. t^8 relative to the leading t^-3
        assert!(rel(e, c) <= 2.0 * t.powi(6), "t = {t}: {e} vs {c}");
    }
    let probe = remainder_order_probe(
        &exp,
        |t| Ok((harmonic_trace_eval(3, 1.0, t), 1e-15 * t.powi(-3))),
        &[(0.4, 0.2), (0.2, 0.1)],
    )
    .unwrap();
    let alpha = probe.exponent.unwrap();
    assert!((alpha - 5.0).abs() < 0.2, "{alpha}");
}
