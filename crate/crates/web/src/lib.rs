//! Browser demo bindings. Every export returns a flat `Float64Array` of
//! fixed-width rows so the page can plot it without any parsing.

use fkg_poisson::field::decay_diagnostic;
use fkg_poisson::limit::{limit_charfn, newman_bound, product_charfn};
use fkg_poisson::stats::{count_experiment, fit_summary, reference_pmf, FitSummary};
use fkg_poisson::{BoxRegion, Error, FieldSpec, TestFunction};
use wasm_bindgen::prelude::*;

/// `"or"`, or a comma-separated list of one-dimensional pattern offsets.
fn parse_spec(pattern: &str, n: u32, lambda: f64) -> Result<FieldSpec, Error> {
    let pattern = pattern.trim();
    if pattern.eq_ignore_ascii_case("or") {
        return FieldSpec::or_field(n as u64, lambda);
    }
    let g = pattern
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map(|x| vec![x])
                .map_err(|_| Error::InvalidSpec(format!("`{}` is not an integer offset", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FieldSpec::pattern(1, n as u64, lambda, g)
}

fn bump() -> TestFunction {
    TestFunction::trapezoid(0.0, 0.25, 0.75, 1.0, 1.0).expect("valid profile")
}

/// Rows `[n, sigma, n·sigma]` for n = 2, 4, 8, …, n_max.
pub fn sigma_rows(pattern: &str, lambda: f64, n_max: u32) -> Result<Vec<f64>, Error> {
    let spec = parse_spec(pattern, 2, lambda)?;
    let ns: Vec<u64> = std::iter::successors(Some(2u64), |n| Some(n * 2))
        .take_while(|&n| n <= n_max.max(2) as u64)
        .collect();
    Ok(decay_diagnostic(&spec, &ns)?
        .into_iter()
        .flat_map(|r| [r.n as f64, r.sigma, r.scaled_sigma])
        .collect())
}

/// Rows `[t, |I1 − φ₁|, |I1 − φ₂|, bound, Re I1, Im I1, Re φ₁, Im φ₁, Re φ₂, Im φ₂]`
/// for `points` values of t in `[0, t_max]`, with the bump test function on [0, 1].
pub fn charfn_rows(pattern: &str, n: u32, lambda: f64, t_max: f64, points: u32) -> Result<Vec<f64>, Error> {
    let spec = parse_spec(pattern, n, lambda)?;
    let f = bump();
    let steps = points.max(2) - 1;
    let mut out = Vec::with_capacity(10 * (steps as usize + 1));
    for i in 0..=steps {
        let t = t_max * i as f64 / steps as f64;
        let i1 = product_charfn(t, &f, &spec)?;
        let p1 = limit_charfn(t, &f, lambda, 1)?;
        let p2 = limit_charfn(t, &f, lambda, 2)?;
        let nb = newman_bound(t, &f, &spec)?;
        out.extend([t, (i1 - p1).norm(), (i1 - p2).norm(), nb.tight, i1.re, i1.im, p1.re, p1.im, p2.re, p2.im]);
    }
    Ok(out)
}

/// Header `[λ_eff, TV, odd fraction]` followed by rows `[k, empirical, reference]`
/// for the count in `[0, 1]`; the reference is Poisson for patterns and
/// mass-2 compound Poisson for the or-field.
pub fn count_rows(pattern: &str, n: u32, lambda: f64, replicates: u32, seed: u32) -> Result<Vec<f64>, Error> {
    let spec = parse_spec(pattern, n, lambda)?;
    let region = BoxRegion::interval(0.0, 1.0)?;
    let hist = count_experiment(&spec, &region, replicates.max(2) as u64, seed as u64)?;
    let fit = fit_summary(&hist, &spec, &region)?;
    let reference = FitSummary::natural_reference(&spec);
    let tv = match reference {
        fkg_poisson::stats::Reference::Poisson => fit.tv_poisson,
        fkg_poisson::stats::Reference::Compound2 => fit.tv_compound2,
    };
    let mut out = vec![fit.lambda_eff, tv, fit.parity_fraction];
    let k_max = hist.max_count().unwrap_or(0).max(8);
    for k in 0..=k_max {
        out.extend([k as f64, hist.empirical(k), reference_pmf(reference, fit.lambda_eff, k)]);
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn sigma_sweep(pattern: &str, lambda: f64, n_max: u32) -> Result<Vec<f64>, JsError> {
    sigma_rows(pattern, lambda, n_max).map_err(js)
}

#[wasm_bindgen]
pub fn charfn_curves(pattern: &str, n: u32, lambda: f64, t_max: f64, points: u32) -> Result<Vec<f64>, JsError> {
    charfn_rows(pattern, n, lambda, t_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn count_histogram(pattern: &str, n: u32, lambda: f64, replicates: u32, seed: u32) -> Result<Vec<f64>, JsError> {
    count_rows(pattern, n, lambda, replicates, seed).map_err(js)
}
