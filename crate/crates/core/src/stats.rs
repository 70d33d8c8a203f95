//! Box-count histograms and their fit against Poisson and mass-2 compound
//! Poisson references.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{sample_field, FieldKind, FieldSpec};
use crate::measure::BoxRegion;
use crate::rng::{map_chunks, replicate_seed};

/// Replicates per jackknife block.
pub const JACKKNIFE_BLOCK: u64 = 1000;
/// Largest factorial-moment order.
pub const MAX_MOMENT_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// Poisson(λ).
    Poisson,
    /// `2N` with `N ~ Poisson(λ)`.
    Compound2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramMeta {
    pub spec: Option<FieldSpec>,
    pub region: Option<BoxRegion>,
    pub seed: Option<u64>,
}

/// Occurrence counts of `μ_n(A)` over replicates, kept per block of
/// [`JACKKNIFE_BLOCK`] consecutive replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountHistogram {
    counts: BTreeMap<u64, u64>,
    blocks: Vec<BTreeMap<u64, u64>>,
    replicates: u64,
    pub meta: HistogramMeta,
}

impl CountHistogram {
    /// Histogram of a sequence of observations, in order.
    pub fn from_observations(values: impl IntoIterator<Item = u64>) -> Self {
        let mut h = CountHistogram {
            counts: BTreeMap::new(),
            blocks: Vec::new(),
            replicates: 0,
            meta: HistogramMeta {
                spec: None,
                region: None,
                seed: None,
            },
        };
        for v in values {
            if h.replicates.is_multiple_of(JACKKNIFE_BLOCK) {
                h.blocks.push(BTreeMap::new());
            }
            *h.blocks.last_mut().expect("pushed").entry(v).or_default() += 1;
            *h.counts.entry(v).or_default() += 1;
            h.replicates += 1;
        }
        h
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn replicates(&self) -> u64 {
        self.replicates
    }

    pub fn max_count(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn empirical(&self, k: u64) -> f64 {
        self.counts.get(&k).copied().unwrap_or(0) as f64 / self.replicates as f64
    }

    pub fn mean(&self) -> f64 {
        self.counts.iter().map(|(&k, &c)| k as f64 * c as f64).sum::<f64>() / self.replicates as f64
    }

    /// Fraction of replicates with an odd count.
    pub fn odd_fraction(&self) -> f64 {
        self.counts
            .iter()
            .filter(|(k, _)| *k % 2 == 1)
            .map(|(_, &c)| c)
            .sum::<u64>() as f64
            / self.replicates as f64
    }
}

/// `μ_n(A)` over independent replicates; replicate `r` uses seed
/// `replicate_seed(seed, r)`.
pub fn count_experiment(
    spec: &FieldSpec,
    region: &BoxRegion,
    replicates: u64,
    seed: u64,
) -> Result<CountHistogram> {
    if replicates == 0 {
        return Err(Error::Domain("at least one replicate is required".into()));
    }
    if region.d() != spec.d() {
        return Err(Error::InvalidRegion("region and field differ in dimension".into()));
    }
    let mut h = match region.lattice_window(spec.n()) {
        None => CountHistogram::from_observations(std::iter::repeat_n(0, replicates as usize)),
        Some(window) => {
            spec.y_window(&window)?.checked_len("padded sample window")?;
            let chunks = map_chunks(replicates, |range| -> Result<Vec<u64>> {
                range
                    .map(|r| {
                        let s = sample_field(spec, &window, replicate_seed(seed, r))?;
                        Ok(s.x_values().iter().map(|&x| x as u64).sum())
                    })
                    .collect()
            });
            let mut values = Vec::with_capacity(replicates as usize);
            for c in chunks {
                values.extend(c?);
            }
            CountHistogram::from_observations(values)
        }
    };
    h.meta = HistogramMeta {
        spec: Some(spec.clone()),
        region: Some(region.clone()),
        seed: Some(seed),
    };
    Ok(h)
}

fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

pub fn reference_pmf(kind: Reference, lambda_eff: f64, k: u64) -> f64 {
    match kind {
        Reference::Poisson => poisson_pmf(lambda_eff, k),
        Reference::Compound2 if k.is_multiple_of(2) => poisson_pmf(lambda_eff, k / 2),
        Reference::Compound2 => 0.0,
    }
}

/// Half the L1 distance between the histogram and the reference, with the
/// reference mass beyond the largest observed count included.
pub fn tv_distance(hist: &CountHistogram, kind: Reference, lambda_eff: f64) -> f64 {
    let Some(max) = hist.max_count() else {
        return 1.0;
    };
    let mut l1 = 0.0;
    let mut covered = 0.0;
    for k in 0..=max {
        let r = reference_pmf(kind, lambda_eff, k);
        covered += r;
        l1 += (hist.empirical(k) - r).abs();
    }
    (0.5 * (l1 + (1.0 - covered).max(0.0))).clamp(0.0, 1.0)
}

/// Total variation distance between two pmfs given on `0..len`.
pub fn tv_between(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|k| (at(p, k) - at(q, k)).abs()).sum::<f64>()
}

/// `N(N−1)…(N−r+1)`.
fn falling(k: u64, r: usize) -> f64 {
    (0..r as u64).map(|i| k as f64 - i as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorialMoment {
    pub order: usize,
    pub value: f64,
    pub std_error: f64,
}

/// Empirical factorial moments for orders `1..=r_max` with jackknife standard
/// errors (leave one block out; single-replicate deletion when there is only
/// one block).
pub fn factorial_moments(hist: &CountHistogram, r_max: usize) -> Result<Vec<FactorialMoment>> {
    if r_max == 0 || r_max > MAX_MOMENT_ORDER {
        return Err(Error::Domain(format!("order must be in 1..={MAX_MOMENT_ORDER}")));
    }
    if hist.replicates < 2 {
        return Err(Error::Domain("at least two replicates are required".into()));
    }
    let total_n = hist.replicates as f64;
    let sum_of = |counts: &BTreeMap<u64, u64>, r: usize| {
        counts.iter().map(|(&k, &c)| falling(k, r) * c as f64).sum::<f64>()
    };
    Ok((1..=r_max)
        .map(|r| {
            let total = sum_of(&hist.counts, r);
            let value = total / total_n;
            let std_error = if hist.blocks.len() >= 2 {
                let b = hist.blocks.len() as f64;
                let loo: Vec<f64> = hist
                    .blocks
                    .iter()
                    .map(|blk| {
                        let size: u64 = blk.values().sum();
                        (total - sum_of(blk, r)) / (total_n - size as f64)
                    })
                    .collect();
                let mean = loo.iter().sum::<f64>() / b;
                ((b - 1.0) / b * loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>()).sqrt()
            } else {
                // delete-one jackknife of a mean reduces to s / sqrt(R)
                let var = hist
                    .counts
                    .iter()
                    .map(|(&k, &c)| (falling(k, r) - value).powi(2) * c as f64)
                    .sum::<f64>()
                    / (total_n - 1.0);
                (var / total_n).sqrt()
            };
            FactorialMoment {
                order: r,
                value,
                std_error,
            }
        })
        .collect())
}

/// Fit of a box-count histogram against its reference laws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub replicates: u64,
    pub lattice_count: u64,
    /// `λ |Z^d ∩ nA| / n^d`
    pub lambda_eff: f64,
    /// `λ vol(A)`
    pub lambda_vol: f64,
    pub mean: f64,
    pub tv_poisson: f64,
    pub tv_poisson_doubled: f64,
    pub tv_compound2: f64,
    pub tv_poisson_vol: f64,
    pub tv_compound2_vol: f64,
    pub parity_fraction: f64,
    pub moments: Vec<FactorialMoment>,
}

impl FitSummary {
    /// Reference law matching the field family: Poisson for pattern fields,
    /// mass-2 compound Poisson for the or-field.
    pub fn natural_reference(spec: &FieldSpec) -> Reference {
        match spec.kind() {
            FieldKind::Pattern(_) => Reference::Poisson,
            FieldKind::OrField => Reference::Compound2,
        }
    }
}

pub fn fit_summary(hist: &CountHistogram, spec: &FieldSpec, region: &BoxRegion) -> Result<FitSummary> {
    let lattice_count = region.lattice_count(spec.n()) as u64;
    let lambda_eff = spec.lambda() * lattice_count as f64 / spec.volume_scale();
    let lambda_vol = spec.lambda() * region.volume();
    Ok(FitSummary {
        replicates: hist.replicates(),
        lattice_count,
        lambda_eff,
        lambda_vol,
        mean: hist.mean(),
        tv_poisson: tv_distance(hist, Reference::Poisson, lambda_eff),
        tv_poisson_doubled: tv_distance(hist, Reference::Poisson, 2.0 * lambda_eff),
        tv_compound2: tv_distance(hist, Reference::Compound2, lambda_eff),
        tv_poisson_vol: tv_distance(hist, Reference::Poisson, lambda_vol),
        tv_compound2_vol: tv_distance(hist, Reference::Compound2, lambda_vol),
        parity_fraction: hist.odd_fraction(),
        moments: factorial_moments(hist, MAX_MOMENT_ORDER)?,
    })
}
