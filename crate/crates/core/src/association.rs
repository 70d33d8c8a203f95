//! Checks of the association (FKG) inequality `cov(f(X), g(X)) ≥ 0` for
//! coordinatewise nondecreasing `f`, `g`.
//!
//! For 0/1 coordinates every bounded nondecreasing function is a constant plus
//! a nonnegative combination of up-set indicators (write it as a sum of
//! `(c_{k+1} − c_k)·1{f ≥ c_{k+1}}` over its sorted values; each level set is an
//! up-set). Covariance is bilinear and ignores constants, so nonnegativity
//! over all pairs of up-set indicators is equivalent to association.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{sample_field, Enumerator, FieldSpec, MAX_ENUMERATED_SITES};
use crate::lattice::{LatticeWindow, Site};
use crate::rng::{map_chunks, replicate_seed, rng_from_seed};

/// Largest dimension for exact up-set enumeration.
pub const MAX_UPSET_DIM: usize = 4;
/// Tolerance for certifying nonnegative covariance.
pub const FKG_TOL: f64 = 1e-12;

/// Law of a binary vector; `probs[x]` is the probability of the bit pattern `x`
/// (bit `i` is coordinate `i`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    m: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(m: usize, probs: Vec<f64>) -> Result<Self> {
        if m == 0 || m > MAX_ENUMERATED_SITES {
            return Err(Error::Domain(format!("m = {m} must be in 1..={MAX_ENUMERATED_SITES}")));
        }
        if probs.len() != 1 << m {
            return Err(Error::Domain(format!("expected {} atoms, got {}", 1 << m, probs.len())));
        }
        if probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::Domain("probabilities must be nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        Ok(JointDistribution { m, probs })
    }

    /// Independent coordinates with the given marginals.
    pub fn product(marginals: &[f64]) -> Result<Self> {
        let m = marginals.len();
        let probs = (0..1usize << m)
            .map(|x| {
                marginals
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| if x >> i & 1 == 1 { p } else { 1.0 - p })
                    .product()
            })
            .collect();
        Self::new(m, probs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, pattern: usize) -> f64 {
        self.probs[pattern]
    }
}

/// Exact law of `(X_s)_{s ∈ sites}`.
pub fn window_distribution(spec: &FieldSpec, sites: &[Site]) -> Result<JointDistribution> {
    if sites.is_empty() {
        return Err(Error::Domain("at least one site is required".into()));
    }
    let e = Enumerator::new(spec, sites)?;
    let mut probs = vec![0.0; 1 << sites.len()];
    e.for_each(|w, bits| probs[bits as usize] += w);
    JointDistribution::new(sites.len(), probs)
}

/// An up-set of `{0,1}^m` stored as a membership mask over the `2^m` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UpSet {
    pub m: usize,
    pub members: u32,
}

impl UpSet {
    pub fn contains(&self, point: usize) -> bool {
        self.members >> point & 1 == 1
    }

    pub fn points(&self) -> Vec<usize> {
        (0..1usize << self.m).filter(|&x| self.contains(x)).collect()
    }

    /// `{x : x_i = 1}`.
    pub fn coordinate(m: usize, i: usize) -> Self {
        let members = (0..1usize << m)
            .filter(|x| x >> i & 1 == 1)
            .fold(0, |acc, x| acc | 1 << x);
        UpSet { m, members }
    }

    fn probability(&self, dist: &JointDistribution) -> f64 {
        (0..1usize << self.m)
            .filter(|&x| self.contains(x))
            .map(|x| dist.prob(x))
            .sum()
    }
}

fn is_upward_closed(m: usize, members: u32) -> bool {
    (0..1usize << m).filter(|x| members >> x & 1 == 1).all(|x| {
        (0..m).all(|i| members >> (x | 1 << i) & 1 == 1)
    })
}

/// All up-sets of `{0,1}^m` (their count is the Dedekind number of `m`).
pub fn enumerate_upsets(m: usize) -> Result<Vec<UpSet>> {
    if m == 0 || m > MAX_UPSET_DIM {
        return Err(Error::Feasibility {
            what: "up-set enumeration",
            size: m,
            limit: MAX_UPSET_DIM,
        });
    }
    let points = 1u32 << m;
    let subsets: u64 = 1 << points;
    Ok((0..subsets)
        .map(|s| s as u32)
        .filter(|&s| is_upward_closed(m, s))
        .map(|members| UpSet { m, members })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FkgVerdict {
    /// Minimum of `cov(1_U, 1_V)` over ordered pairs of up-sets.
    pub min_cov: f64,
    /// A pair attaining `min_cov` when it is below `-FKG_TOL`.
    pub witness: Option<(UpSet, UpSet)>,
}

impl FkgVerdict {
    pub fn associated(&self) -> bool {
        self.min_cov >= -FKG_TOL
    }
}

pub fn exact_fkg_check(dist: &JointDistribution) -> Result<FkgVerdict> {
    let upsets = enumerate_upsets(dist.m())?;
    let probs: Vec<f64> = upsets.iter().map(|u| u.probability(dist)).collect();
    let mut min_cov = f64::INFINITY;
    let mut argmin = (upsets[0], upsets[0]);
    for (a, (u, pu)) in upsets.iter().zip(&probs).enumerate() {
        for (v, pv) in upsets[a..].iter().zip(&probs[a..]) {
            let joint = UpSet {
                m: u.m,
                members: u.members & v.members,
            };
            let cov = joint.probability(dist) - pu * pv;
            if cov < min_cov {
                min_cov = cov;
                argmin = (*u, *v);
            }
        }
    }
    Ok(FkgVerdict {
        min_cov,
        witness: (min_cov < -FKG_TOL).then_some(argmin),
    })
}

/// Indicator of the up-set generated by `generators`: `x` belongs iff it
/// dominates some generator coordinatewise. Works for up to 64 coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneIndicator {
    pub generators: Vec<u64>,
}

impl MonotoneIndicator {
    pub fn coordinate(i: usize) -> Self {
        MonotoneIndicator { generators: vec![1 << i] }
    }

    /// Always 1.
    pub fn full() -> Self {
        MonotoneIndicator { generators: vec![0] }
    }

    /// Always 0.
    pub fn empty() -> Self {
        MonotoneIndicator { generators: vec![] }
    }

    pub fn eval(&self, x: u64) -> bool {
        self.generators.iter().any(|&g| g & !x == 0)
    }

    /// Upward closure of 1 to 3 random seed points of `{0,1}^m`.
    pub fn random(m: usize, rng: &mut impl Rng) -> Self {
        let count = rng.random_range(1..=3);
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let mut generators: Vec<u64> = (0..count).map(|_| rng.random::<u64>() & mask).collect();
        generators.sort_unstable();
        generators.dedup();
        MonotoneIndicator { generators }
    }

    /// Generator bitmasks joined by `|`, e.g. `01|10`.
    pub fn describe(&self, m: usize) -> String {
        if self.generators.is_empty() {
            return "empty".into();
        }
        self.generators
            .iter()
            .map(|g| (0..m).map(|i| if g >> i & 1 == 1 { '1' } else { '0' }).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCovRow {
    pub pair: usize,
    pub f: MonotoneIndicator,
    pub g: MonotoneIndicator,
    pub cov: f64,
    pub std_error: f64,
}

/// Draws `count` random pairs of monotone indicators on `m` coordinates.
pub fn random_pairs(m: usize, count: usize, seed: u64) -> Vec<(MonotoneIndicator, MonotoneIndicator)> {
    let mut rng = rng_from_seed(replicate_seed(seed, u64::MAX));
    (0..count)
        .map(|_| (MonotoneIndicator::random(m, &mut rng), MonotoneIndicator::random(m, &mut rng)))
        .collect()
}

/// Bit patterns of `(X_s)` over `replicates` independent samples.
pub fn sample_patterns(spec: &FieldSpec, sites: &[Site], replicates: u64, seed: u64) -> Result<Vec<u64>> {
    if sites.is_empty() || sites.len() > 64 {
        return Err(Error::Domain("between 1 and 64 sites are required".into()));
    }
    let window = LatticeWindow::bounding(sites).expect("nonempty")?;
    spec.y_window(&window)?.checked_len("padded sample window")?;
    let indices: Vec<usize> = sites.iter().map(|s| window.index_of(s).expect("bounded")).collect();
    let chunks = map_chunks(replicates, |range| -> Result<Vec<u64>> {
        range
            .map(|r| {
                let sample = sample_field(spec, &window, replicate_seed(seed, r))?;
                let x = sample.x_values();
                Ok(indices
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &k)| acc | (x[k] as u64) << i))
            })
            .collect()
    });
    let mut out = Vec::with_capacity(replicates as usize);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Unbiased covariance of two indicators over sampled patterns, with the
/// standard error of the mean centred product.
pub fn pattern_covariance(patterns: &[u64], f: &MonotoneIndicator, g: &MonotoneIndicator) -> (f64, f64) {
    let r = patterns.len() as f64;
    let fv: Vec<f64> = patterns.iter().map(|&x| f.eval(x) as u8 as f64).collect();
    let gv: Vec<f64> = patterns.iter().map(|&x| g.eval(x) as u8 as f64).collect();
    let fm = fv.iter().sum::<f64>() / r;
    let gm = gv.iter().sum::<f64>() / r;
    let prods: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| (a - fm) * (b - gm)).collect();
    let sum: f64 = prods.iter().sum();
    let mean = sum / r;
    let var = prods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (sum / (r - 1.0), (var / r).sqrt())
}

/// Monte Carlo covariance estimates for the given indicator pairs.
pub fn mc_fkg_check_pairs(
    spec: &FieldSpec,
    sites: &[Site],
    pairs: &[(MonotoneIndicator, MonotoneIndicator)],
    replicates: u64,
    seed: u64,
) -> Result<Vec<McCovRow>> {
    if replicates < 100 {
        return Err(Error::Domain("at least 100 replicates are required".into()));
    }
    let patterns = sample_patterns(spec, sites, replicates, seed)?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(pair, (f, g))| {
            let (cov, std_error) = pattern_covariance(&patterns, f, g);
            McCovRow {
                pair,
                f: f.clone(),
                g: g.clone(),
                cov,
                std_error,
            }
        })
        .collect())
}

/// Monte Carlo check over `pairs` random pairs of monotone indicators.
pub fn mc_fkg_check(
    spec: &FieldSpec,
    sites: &[Site],
    pairs: usize,
    replicates: u64,
    seed: u64,
) -> Result<Vec<McCovRow>> {
    let pairs = random_pairs(sites.len(), pairs, seed);
    mc_fkg_check_pairs(spec, sites, &pairs, replicates, seed)
}
