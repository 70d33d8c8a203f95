//! Brute-force reference computations, written directly from the field
//! definitions and independent of the library's enumeration code.

#![allow(dead_code)]

use std::collections::HashMap;

use fkg_poisson::Site;

/// How `X_k` is built from the i.i.d. `Y` field.
#[derive(Clone, Debug)]
pub enum Rule {
    /// `X_k = 1` iff `Y_{k+g} = 1` for every `g`.
    All(Vec<Site>),
    /// `X_k = Y_k ∨ Y_{k+1}` in one dimension.
    Or,
}

impl Rule {
    pub fn deps(&self, k: &[i64]) -> Vec<Site> {
        match self {
            Rule::All(g) => g
                .iter()
                .map(|o| k.iter().zip(o).map(|(a, b)| a + b).collect())
                .collect(),
            Rule::Or => vec![vec![k[0]], vec![k[0] + 1]],
        }
    }

    pub fn x(&self, k: &[i64], y: &HashMap<Site, u8>) -> u8 {
        let vals = self.deps(k).into_iter().map(|s| y[&s]);
        match self {
            Rule::All(_) => vals.fold(1, |a, b| a & b),
            Rule::Or => vals.fold(0, |a, b| a | b),
        }
    }
}

/// `E h(Y)` over every configuration of the listed `Y` sites.
pub fn expectation(q: f64, y_sites: &[Site], mut h: impl FnMut(&HashMap<Site, u8>) -> f64) -> f64 {
    let mut sites = y_sites.to_vec();
    sites.sort();
    sites.dedup();
    let k = sites.len();
    assert!(k <= 22, "oracle window too large");
    let mut total = 0.0;
    let mut y = HashMap::new();
    for config in 0u64..1 << k {
        let mut p = 1.0;
        for (i, s) in sites.iter().enumerate() {
            let bit = (config >> i & 1) as u8;
            p *= if bit == 1 { q } else { 1.0 - q };
            y.insert(s.clone(), bit);
        }
        total += p * h(&y);
    }
    total
}

/// Complex version of [`expectation`], as `(re, im)`.
pub fn expectation_c(
    q: f64,
    y_sites: &[Site],
    mut h: impl FnMut(&HashMap<Site, u8>) -> (f64, f64),
) -> (f64, f64) {
    let re = expectation(q, y_sites, |y| h(y).0);
    let im = expectation(q, y_sites, |y| h(y).1);
    (re, im)
}

pub fn union_deps(rule: &Rule, xs: &[Site]) -> Vec<Site> {
    xs.iter().flat_map(|k| rule.deps(k)).collect()
}

/// `cov(X_0, X_lag)` by enumeration.
pub fn covariance(rule: &Rule, q: f64, lag: &[i64]) -> f64 {
    let zero = vec![0; lag.len()];
    let ys = union_deps(rule, &[zero.clone(), lag.to_vec()]);
    let e0 = expectation(q, &ys, |y| rule.x(&zero, y) as f64);
    let ej = expectation(q, &ys, |y| rule.x(lag, y) as f64);
    let e0j = expectation(q, &ys, |y| (rule.x(&zero, y) * rule.x(lag, y)) as f64);
    e0j - e0 * ej
}

pub fn marginal(rule: &Rule, q: f64, d: usize) -> f64 {
    let zero = vec![0; d];
    let ys = rule.deps(&zero);
    expectation(q, &ys, |y| rule.x(&zero, y) as f64)
}

/// `E exp(i t Σ_j w_j X_j)`.
pub fn charfn(rule: &Rule, q: f64, t: f64, xs: &[Site], w: &[f64]) -> (f64, f64) {
    let ys = union_deps(rule, xs);
    expectation_c(q, &ys, |y| {
        let s: f64 = xs.iter().zip(w).map(|(k, wi)| wi * rule.x(k, y) as f64).sum();
        ((t * s).cos(), (t * s).sin())
    })
}

/// Trapezoid profile evaluated from its definition.
pub fn trapezoid(a: f64, b: f64, c: f64, e: f64, x: f64) -> f64 {
    if x <= a || x >= e {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else if x <= c {
        1.0
    } else {
        (e - x) / (e - c)
    }
}

/// `∫ exp(i θ (α + β x)) dx` over `[lo, hi]`, as `(re, im)`.
pub fn linear_phase_integral(theta: f64, alpha: f64, beta: f64, lo: f64, hi: f64) -> (f64, f64) {
    if theta * beta == 0.0 {
        let (s, c) = (theta * alpha).sin_cos();
        return (c * (hi - lo), s * (hi - lo));
    }
    // antiderivative: exp(iθ(α+βx)) / (iθβ)
    let k = theta * beta;
    let at = |x: f64| {
        let (s, c) = (theta * (alpha + beta * x)).sin_cos();
        // (c + i s) / (i k) = (s - i c) / k
        (s / k, -c / k)
    };
    let (ur, ui) = at(hi);
    let (lr, li) = at(lo);
    (ur - lr, ui - li)
}
