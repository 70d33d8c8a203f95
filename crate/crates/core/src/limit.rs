//! Characteristic functions of `∫ f dμ_n`: the independent product `I_1(n)`,
//! the Poisson limit `φ(t)`, the covariance bound on `I_2(n)`, exact values by
//! enumeration and Monte Carlo estimates.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{sample_field, Enumerator, FieldKind, FieldSpec};
use crate::measure::{quadrature, weighted_sum, LatticeWeights, TestFunction};
use crate::rng::{map_chunks, replicate_seed};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dims(f: &TestFunction, spec: &FieldSpec) -> Result<()> {
    if f.d() != spec.d() {
        return Err(Error::InvalidFunction(format!(
            "test function has dimension {}, field has {}",
            f.d(),
            spec.d()
        )));
    }
    Ok(())
}

/// `I_1(n) = ∏_j (1 + p_n (e^{i t f(j/n)} − 1))` over `Z^d ∩ n supp f`.
pub fn product_charfn(t: f64, f: &TestFunction, spec: &FieldSpec) -> Result<Complex64> {
    check_dims(f, spec)?;
    let p = spec.marginal_prob();
    let weights = LatticeWeights::new(f, spec.n());
    Ok(weights
        .weights
        .iter()
        .filter(|&&w| w != 0.0)
        .fold(ONE, |acc, &w| {
            let (s, c) = (t * w).sin_cos();
            acc * (ONE + Complex64::new(c - 1.0, s) * p)
        }))
}

/// `exp(λ ∫ (e^{i t·mass·f(x)} − 1) dx)`: the Poisson limit for `mass = 1`,
/// the compound limit with deterministic atom mass 2 for `mass = 2`.
pub fn limit_charfn(t: f64, f: &TestFunction, lambda: f64, mass: u32) -> Result<Complex64> {
    if !(1..=2).contains(&mass) {
        return Err(Error::Domain(format!("atom mass must be 1 or 2, got {mass}")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("intensity must be positive, got {lambda}")));
    }
    Ok((quadrature(f, t, mass as f64)? * lambda).exp())
}

/// Both covariance bounds on `I_2(n) = |E e^{it∫f dμ_n} − I_1(n)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NewmanBound {
    /// `(t²/2) Σ_{j1≠j2} f(j1/n) f(j2/n) cov(X_j1, X_j2)`
    pub tight: f64,
    /// `(t² ‖f‖²_∞ / 2) |Z^d ∩ n supp f| σ(n)`
    pub coarse: f64,
}

pub fn newman_bound(t: f64, f: &TestFunction, spec: &FieldSpec) -> Result<NewmanBound> {
    check_dims(f, spec)?;
    let weights = LatticeWeights::new(f, spec.n());
    let support = &weights.support;
    let half_t2 = 0.5 * t * t;
    let coarse = half_t2 * f.sup_norm().powi(2) * support.len() as f64 * spec.sigma();
    let Some(window) = &support.window else {
        return Ok(NewmanBound { tight: 0.0, coarse });
    };
    let lags: Vec<(Vec<i64>, f64)> = spec
        .lag_set()
        .into_iter()
        .map(|l| {
            let c = spec.exact_cov(&l)?;
            Ok((l, c))
        })
        .collect::<Result<_>>()?;
    let mut pair_sum = 0.0;
    let mut other = vec![0i64; spec.d()];
    for (site, &w1) in support.sites.iter().zip(&weights.weights) {
        if w1 == 0.0 {
            continue;
        }
        for (lag, cov) in &lags {
            for (o, (s, l)) in other.iter_mut().zip(site.iter().zip(lag)) {
                *o = s + l;
            }
            if let Some(k) = window.index_of(&other) {
                pair_sum += w1 * weights.weights[k] * cov;
            }
        }
    }
    Ok(NewmanBound {
        tight: half_t2 * pair_sum,
        coarse,
    })
}

/// `E e^{i t ∫ f dμ_n}` by enumerating every configuration of the underlying
/// Bernoulli sites that the lattice support depends on.
pub fn exact_charfn(t: f64, f: &TestFunction, spec: &FieldSpec) -> Result<Complex64> {
    check_dims(f, spec)?;
    let weights = LatticeWeights::new(f, spec.n());
    let enumerator = Enumerator::new(spec, &weights.support.sites)?;
    let w = &weights.weights;
    let mut sum = Complex64::new(0.0, 0.0);
    enumerator.for_each(|p, bits| {
        let value = w
            .iter()
            .enumerate()
            .fold(0.0, |acc, (i, &wi)| if bits >> i & 1 == 1 { acc + wi } else { acc });
        let (s, c) = (t * value).sin_cos();
        sum += Complex64::new(c, s) * p;
    });
    Ok(sum)
}

/// Monte Carlo mean of a complex observable with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    /// Euclidean combination of the real and imaginary standard errors.
    pub std_error: f64,
    pub replicates: u64,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    re: f64,
    im: f64,
    re2: f64,
    im2: f64,
}

/// Monte Carlo estimate of `E e^{i t ∫ f dμ_n}`; replicate `r` is the sample
/// drawn with seed `replicate_seed(seed, r)`.
pub fn mc_charfn(
    t: f64,
    f: &TestFunction,
    spec: &FieldSpec,
    replicates: u64,
    seed: u64,
) -> Result<ComplexEstimate> {
    check_dims(f, spec)?;
    if replicates < 2 {
        return Err(Error::Domain("at least two replicates are required".into()));
    }
    let weights = LatticeWeights::new(f, spec.n());
    let Some(window) = weights.support.window.clone() else {
        return Ok(ComplexEstimate {
            value: ONE,
            std_error: 0.0,
            replicates,
        });
    };
    let bound = weights.bind(&window)?;
    // fail fast on oversized windows before fanning out
    spec.y_window(&window)?.checked_len("padded sample window")?;

    let chunks = map_chunks(replicates, |range| -> Result<Moments> {
        let mut m = Moments::default();
        for r in range {
            let sample = sample_field(spec, &window, replicate_seed(seed, r))?;
            let value = weighted_sum(&bound, sample.x_values());
            let (s, c) = (t * value).sin_cos();
            m.re += c;
            m.im += s;
            m.re2 += c * c;
            m.im2 += s * s;
        }
        Ok(m)
    });
    let mut total = Moments::default();
    for chunk in chunks {
        let m = chunk?;
        total.re += m.re;
        total.im += m.im;
        total.re2 += m.re2;
        total.im2 += m.im2;
    }
    let r = replicates as f64;
    let mean = Complex64::new(total.re / r, total.im / r);
    let var = |s2: f64, mu: f64| ((s2 - r * mu * mu) / (r - 1.0)).max(0.0);
    let var_re = var(total.re2, mean.re);
    let var_im = var(total.im2, mean.im);
    Ok(ComplexEstimate {
        value: mean,
        std_error: ((var_re + var_im) / r).sqrt(),
        replicates,
    })
}

/// The decomposition `E e^{it∫f dμ_n} = I_1(n) + I_2(n)` at one `(t, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharfnReport {
    pub t: f64,
    pub n: u64,
    pub i1: Complex64,
    pub phi: Complex64,
    pub newman_bound: NewmanBound,
    pub mc_estimate: ComplexEstimate,
    pub exact_value: Option<Complex64>,
    pub replicates: u64,
}

pub fn charfn_report(
    t: f64,
    f: &TestFunction,
    spec: &FieldSpec,
    replicates: u64,
    seed: u64,
) -> Result<CharfnReport> {
    let exact_value = match exact_charfn(t, f, spec) {
        Ok(v) => Some(v),
        Err(Error::Feasibility { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CharfnReport {
        t,
        n: spec.n(),
        i1: product_charfn(t, f, spec)?,
        phi: limit_charfn(t, f, spec.lambda(), 1)?,
        newman_bound: newman_bound(t, f, spec)?,
        mc_estimate: mc_charfn(t, f, spec, replicates, seed)?,
        exact_value,
        replicates,
    })
}

fn require_or_field(spec: &FieldSpec) -> Result<()> {
    if *spec.kind() != FieldKind::OrField {
        return Err(Error::Domain("only defined for the or-field".into()));
    }
    Ok(())
}

/// For the or-field, `∫ f dμ_n = Σ_k (f(k/n) + f((k−1)/n)) Y_k − Σ_j f(j/n) Y_j Y_{j+1}`.
/// Returns the exact characteristic function of the first (independent) sum.
pub fn pair_product_charfn(t: f64, f: &TestFunction, spec: &FieldSpec) -> Result<Complex64> {
    require_or_field(spec)?;
    check_dims(f, spec)?;
    let weights = LatticeWeights::new(f, spec.n());
    let Some(window) = &weights.support.window else {
        return Ok(ONE);
    };
    let (lo, hi) = (window.lo()[0], window.hi()[0]);
    let w = |k: i64| {
        if (lo..=hi).contains(&k) {
            weights.weights[(k - lo) as usize]
        } else {
            0.0
        }
    };
    let q = spec.q();
    Ok((lo..=hi + 1).fold(ONE, |acc, k| {
        let (s, c) = (t * (w(k) + w(k - 1))).sin_cos();
        acc * (ONE + Complex64::new(c - 1.0, s) * q)
    }))
}

/// `|t| E Σ_j f(j/n) Y_j Y_{j+1} = |t| q² Σ_j f(j/n)`, which bounds the
/// characteristic-function error from dropping the overlap term.
pub fn overlap_bound(t: f64, f: &TestFunction, spec: &FieldSpec) -> Result<f64> {
    require_or_field(spec)?;
    check_dims(f, spec)?;
    let q = spec.q();
    let total: f64 = LatticeWeights::new(f, spec.n()).weights.iter().sum();
    Ok(t.abs() * q * q * total)
}

/// Or-field comparison against the unit-mass and mass-2 limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompoundCheck {
    pub t: f64,
    pub n: u64,
    pub mc_estimate: ComplexEstimate,
    pub phi_unit: Complex64,
    pub phi_double: Complex64,
    pub pair_product: Complex64,
    pub overlap_bound: f64,
}

impl CompoundCheck {
    /// `|pair_product − φ_2| + overlap_bound`: every deterministic gap between
    /// the exact characteristic function and the mass-2 limit.
    pub fn finite_n_slack(&self) -> f64 {
        (self.pair_product - self.phi_double).norm() + self.overlap_bound
    }

    /// Monte Carlo estimate is consistent with the mass-2 limit.
    pub fn matches_double(&self, sigmas: f64) -> bool {
        (self.mc_estimate.value - self.phi_double).norm()
            <= sigmas * self.mc_estimate.std_error + self.finite_n_slack()
    }

    /// Monte Carlo estimate is separated from the unit-mass limit by more
    /// than the same error budget.
    pub fn rejects_unit(&self, sigmas: f64) -> bool {
        (self.mc_estimate.value - self.phi_unit).norm()
            > sigmas * self.mc_estimate.std_error + self.finite_n_slack()
    }
}

pub fn compound_check(
    t: f64,
    f: &TestFunction,
    spec: &FieldSpec,
    replicates: u64,
    seed: u64,
) -> Result<CompoundCheck> {
    require_or_field(spec)?;
    Ok(CompoundCheck {
        t,
        n: spec.n(),
        mc_estimate: mc_charfn(t, f, spec, replicates, seed)?,
        phi_unit: limit_charfn(t, f, spec.lambda(), 1)?,
        phi_double: limit_charfn(t, f, spec.lambda(), 2)?,
        pair_product: pair_product_charfn(t, f, spec)?,
        overlap_bound: overlap_bound(t, f, spec)?,
    })
}
