//! Field families, finite-window sampling and closed-form moments.
//!
//! Both families are monotone transforms of an i.i.d. Bernoulli(q) field `Y`:
//!
//! * `Pattern(G)`: `X_k = ∏_{g∈G} Y_{k+g}` with `q = (λ/n^d)^{1/|G|}`;
//! * `OrField` (d = 1): `X_k = Y_k ∨ Y_{k+1}` with `q = λ/n`.

use std::collections::BTreeSet;

use rand::distr::{Bernoulli, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeWindow, Site};
use crate::rng::rng_from_seed;

/// Largest number of underlying Bernoulli sites enumerated exactly.
pub const MAX_ENUMERATED_SITES: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Pattern(Vec<Site>),
    OrField,
}

/// One member `X^{(n)}` of a field family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRecord", into = "FieldSpecRecord")]
pub struct FieldSpec {
    d: usize,
    n: u64,
    lambda: f64,
    kind: FieldKind,
}

/// Flat key/value form used in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpecRecord {
    pub d: usize,
    pub n: u64,
    pub lambda: f64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Site>>,
}

impl TryFrom<FieldSpecRecord> for FieldSpec {
    type Error = Error;

    fn try_from(r: FieldSpecRecord) -> Result<Self> {
        match (r.kind.as_str(), r.g) {
            ("pattern", Some(g)) => FieldSpec::pattern(r.d, r.n, r.lambda, g),
            ("pattern", None) => Err(Error::InvalidSpec("pattern field needs `g`".into())),
            ("or", None) => {
                if r.d != 1 {
                    return Err(Error::InvalidSpec(format!("or-field needs d = 1, got {}", r.d)));
                }
                FieldSpec::or_field(r.n, r.lambda)
            }
            ("or", Some(_)) => Err(Error::InvalidSpec("or-field takes no `g`".into())),
            (other, _) => Err(Error::InvalidSpec(format!(
                "unknown kind `{other}`, expected `pattern` or `or`"
            ))),
        }
    }
}

impl From<FieldSpec> for FieldSpecRecord {
    fn from(s: FieldSpec) -> Self {
        let (kind, g) = match s.kind {
            FieldKind::Pattern(g) => ("pattern", Some(g)),
            FieldKind::OrField => ("or", None),
        };
        FieldSpecRecord {
            d: s.d,
            n: s.n,
            lambda: s.lambda,
            kind: kind.into(),
            g,
        }
    }
}

fn check_scale(n: u64, lambda: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSpec("scale n must be positive".into()));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidSpec(format!("intensity must be positive, got {lambda}")));
    }
    Ok(())
}

impl FieldSpec {
    pub fn pattern(d: usize, n: u64, lambda: f64, g: Vec<Site>) -> Result<Self> {
        check_scale(n, lambda)?;
        if d == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if g.is_empty() {
            return Err(Error::InvalidSpec("pattern set G is empty".into()));
        }
        if let Some(bad) = g.iter().find(|p| p.len() != d) {
            return Err(Error::InvalidSpec(format!("point {bad:?} is not in Z^{d}")));
        }
        let distinct: BTreeSet<&Site> = g.iter().collect();
        if distinct.len() != g.len() {
            return Err(Error::InvalidSpec("pattern set G has repeated points".into()));
        }
        let spec = FieldSpec {
            d,
            n,
            lambda,
            kind: FieldKind::Pattern(g),
        };
        spec.check_probability()?;
        Ok(spec)
    }

    pub fn or_field(n: u64, lambda: f64) -> Result<Self> {
        check_scale(n, lambda)?;
        let spec = FieldSpec {
            d: 1,
            n,
            lambda,
            kind: FieldKind::OrField,
        };
        spec.check_probability()?;
        Ok(spec)
    }

    fn check_probability(&self) -> Result<()> {
        let q = self.q();
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "underlying probability q = {q} is outside (0, 1]"
            )));
        }
        Ok(())
    }

    /// Same family at another scale.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        check_scale(n, self.lambda)?;
        let spec = FieldSpec { n, ..self.clone() };
        spec.check_probability()?;
        Ok(spec)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// `n^d` as a float.
    pub fn volume_scale(&self) -> f64 {
        (self.n as f64).powi(self.d as i32)
    }

    /// Single-site probability of the underlying i.i.d. field.
    pub fn q(&self) -> f64 {
        match &self.kind {
            FieldKind::Pattern(g) => {
                let base = self.lambda / self.volume_scale();
                match g.len() {
                    1 => base,
                    2 => base.sqrt(),
                    m => base.powf(1.0 / m as f64),
                }
            }
            FieldKind::OrField => self.lambda / self.n as f64,
        }
    }

    /// `P{X_0 = 1}`.
    pub fn marginal_prob(&self) -> f64 {
        match &self.kind {
            // q^m = λ/n^d, evaluated without the root round trip
            FieldKind::Pattern(_) => self.lambda / self.volume_scale(),
            FieldKind::OrField => {
                let q = self.q();
                2.0 * q - q * q
            }
        }
    }

    /// Offsets `o` such that `X_k` depends on `Y_{k+o}`.
    pub fn footprint(&self) -> Vec<Site> {
        match &self.kind {
            FieldKind::Pattern(g) => g.clone(),
            FieldKind::OrField => vec![vec![0], vec![1]],
        }
    }

    /// Coordinatewise (min, max) of the footprint.
    fn footprint_bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let fp = self.footprint();
        let mut lo = fp[0].clone();
        let mut hi = fp[0].clone();
        for p in &fp[1..] {
            for i in 0..self.d {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    }

    /// Window of `Y` sites that determines every `X` in `window`.
    pub fn y_window(&self, window: &LatticeWindow) -> Result<LatticeWindow> {
        if window.dim() != self.d {
            return Err(Error::InvalidWindow(format!(
                "window has dimension {}, field has {}",
                window.dim(),
                self.d
            )));
        }
        let (lo, hi) = self.footprint_bounds();
        let below: Vec<i64> = lo.iter().map(|x| -x).collect();
        window.padded(&below, &hi)
    }

    /// Nonzero lags at which `cov(X_0, X_j)` can be positive.
    pub fn lag_set(&self) -> Vec<Site> {
        match &self.kind {
            FieldKind::Pattern(g) => {
                let mut lags = BTreeSet::new();
                for a in g {
                    for b in g {
                        let lag: Site = a.iter().zip(b).map(|(x, y)| x - y).collect();
                        if lag.iter().any(|&c| c != 0) {
                            lags.insert(lag);
                        }
                    }
                }
                lags.into_iter().collect()
            }
            FieldKind::OrField => vec![vec![-1], vec![1]],
        }
    }

    fn check_lag(&self, lag: &[i64]) -> Result<()> {
        if lag.len() != self.d {
            return Err(Error::Domain(format!("lag {lag:?} is not in Z^{}", self.d)));
        }
        if lag.iter().all(|&c| c == 0) {
            return Err(Error::Domain("lag must be nonzero".into()));
        }
        Ok(())
    }

    /// `cov(X_0, X_lag)` in closed form.
    pub fn exact_cov(&self, lag: &[i64]) -> Result<f64> {
        self.check_lag(lag)?;
        let q = self.q();
        Ok(match &self.kind {
            FieldKind::Pattern(g) => {
                let union = union_size(g, lag)?;
                let m = g.len() as i32;
                if union == 2 * g.len() {
                    0.0
                } else {
                    q.powi(union as i32) - q.powi(2 * m)
                }
            }
            FieldKind::OrField => {
                if lag[0].abs() == 1 {
                    q * (1.0 - q).powi(3)
                } else {
                    0.0
                }
            }
        })
    }

    /// `σ(n) = Σ_{j≠0} cov(X_0, X_j)`.
    pub fn sigma(&self) -> f64 {
        self.lag_set()
            .iter()
            .map(|lag| self.exact_cov(lag).expect("lag set excludes zero"))
            .sum()
    }
}

/// `|G ∪ (j + G)|`.
pub fn union_size(g: &[Site], j: &[i64]) -> Result<usize> {
    if j.iter().all(|&c| c == 0) {
        return Err(Error::Domain("translation must be nonzero".into()));
    }
    let mut set: BTreeSet<Site> = g.iter().cloned().collect();
    for p in g {
        if p.len() != j.len() {
            return Err(Error::Domain(format!("point {p:?} and lag {j:?} differ in dimension")));
        }
        set.insert(p.iter().zip(j).map(|(a, b)| a + b).collect());
    }
    Ok(set.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: u64,
    pub sigma: f64,
    /// `n^d σ(n)`
    pub scaled_sigma: f64,
}

/// `n^d σ(n)` along a sequence of scales for the family of `spec`.
pub fn decay_diagnostic(spec: &FieldSpec, n_values: &[u64]) -> Result<Vec<DecayRow>> {
    n_values
        .iter()
        .map(|&n| {
            let s = spec.with_n(n)?;
            let sigma = s.sigma();
            Ok(DecayRow {
                n,
                sigma,
                scaled_sigma: s.volume_scale() * sigma,
            })
        })
        .collect()
}

/// Calls `f(x_index, y_base)` for each window site in row-major order, where
/// `y_base` is the flat position of the same site relative to `y_window`. The
/// site itself may lie outside `y_window` (when every offset is positive), so
/// the position is signed; adding a footprint offset lands inside.
pub(crate) fn for_each_aligned(
    window: &LatticeWindow,
    y_window: &LatticeWindow,
    mut f: impl FnMut(usize, isize),
) {
    let d = window.dim();
    let ystrides: Vec<isize> = y_window.strides().iter().map(|&s| s as isize).collect();
    let extents: Vec<i64> = (0..d).map(|i| window.extent(i) as i64).collect();
    let mut counter = vec![0i64; d];
    let mut base: isize = (0..d)
        .map(|i| (window.lo()[i] - y_window.lo()[i]) as isize * ystrides[i])
        .sum();
    let total = window.cardinality() as usize;
    for idx in 0..total {
        f(idx, base);
        // odometer increment, last axis fastest
        let mut axis = d;
        while axis > 0 {
            axis -= 1;
            counter[axis] += 1;
            base += ystrides[axis];
            if counter[axis] < extents[axis] {
                break;
            }
            base -= ystrides[axis] * extents[axis] as isize;
            counter[axis] = 0;
        }
    }
}

/// A finite-window realization of `X` together with the `Y` values it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    spec: FieldSpec,
    window: LatticeWindow,
    y_window: LatticeWindow,
    x_values: Vec<u8>,
    y_values: Vec<u8>,
    seed: u64,
}

impl FieldSample {
    /// Builds a sample from explicit `Y` values on the padded window.
    pub fn from_y(
        spec: &FieldSpec,
        window: LatticeWindow,
        y_values: Vec<u8>,
        seed: u64,
    ) -> Result<Self> {
        let y_window = spec.y_window(&window)?;
        let len = y_window.checked_len("padded sample window")?;
        if y_values.len() != len {
            return Err(Error::InvalidWindow(format!(
                "expected {len} y values, got {}",
                y_values.len()
            )));
        }
        if y_values.iter().any(|&y| y > 1) {
            return Err(Error::InvalidWindow("y values must be 0 or 1".into()));
        }
        let x_values = derive_x(spec, &window, &y_window, &y_values);
        Ok(FieldSample {
            spec: spec.clone(),
            window,
            y_window,
            x_values,
            y_values,
            seed,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn y_window(&self) -> &LatticeWindow {
        &self.y_window
    }

    /// `X` values in row-major window order.
    pub fn x_values(&self) -> &[u8] {
        &self.x_values
    }

    pub fn y_values(&self) -> &[u8] {
        &self.y_values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn x_at(&self, site: &[i64]) -> Option<u8> {
        self.window.index_of(site).map(|i| self.x_values[i])
    }

    pub fn y_at(&self, site: &[i64]) -> Option<u8> {
        self.y_window.index_of(site).map(|i| self.y_values[i])
    }

    /// Recomputes `X` from the stored `Y` values.
    pub fn recompute_x(&self) -> Vec<u8> {
        derive_x(&self.spec, &self.window, &self.y_window, &self.y_values)
    }
}

fn derive_x(
    spec: &FieldSpec,
    window: &LatticeWindow,
    y_window: &LatticeWindow,
    y_values: &[u8],
) -> Vec<u8> {
    let ystrides = y_window.strides();
    let offsets: Vec<isize> = spec
        .footprint()
        .iter()
        .map(|o| o.iter().zip(&ystrides).map(|(c, s)| *c as isize * *s as isize).sum())
        .collect();
    let mut x = vec![0u8; window.cardinality() as usize];
    let and = matches!(spec.kind, FieldKind::Pattern(_));
    for_each_aligned(window, y_window, |i, base| {
        let mut it = offsets.iter().map(|&o| y_values[(base + o) as usize]);
        x[i] = if and {
            it.all(|y| y == 1) as u8
        } else {
            it.any(|y| y == 1) as u8
        };
    });
    x
}

/// Draws `Y` i.i.d. Bernoulli(q) on the padded window (row-major order) and
/// derives `X`. Identical inputs give identical samples.
pub fn sample_field(spec: &FieldSpec, window: &LatticeWindow, seed: u64) -> Result<FieldSample> {
    let y_window = spec.y_window(window)?;
    let len = y_window.checked_len("padded sample window")?;
    let bernoulli = Bernoulli::new(spec.q()).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let y_values: Vec<u8> = (0..len).map(|_| bernoulli.sample(&mut rng) as u8).collect();
    let x_values = derive_x(spec, window, &y_window, &y_values);
    Ok(FieldSample {
        spec: spec.clone(),
        window: window.clone(),
        y_window,
        x_values,
        y_values,
        seed,
    })
}

/// Exact enumeration over the `Y` sites that determine a list of `X` sites.
#[derive(Debug, Clone)]
pub struct Enumerator {
    y_sites: Vec<Site>,
    masks: Vec<u32>,
    and: bool,
    weights_by_ones: Vec<f64>,
}

impl Enumerator {
    pub fn new(spec: &FieldSpec, x_sites: &[Site]) -> Result<Self> {
        let fp = spec.footprint();
        let mut y_set = BTreeSet::new();
        for x in x_sites {
            if x.len() != spec.d() {
                return Err(Error::Domain(format!("site {x:?} is not in Z^{}", spec.d())));
            }
            for o in &fp {
                y_set.insert(x.iter().zip(o).map(|(a, b)| a + b).collect::<Site>());
            }
        }
        let k = y_set.len();
        if k > MAX_ENUMERATED_SITES {
            return Err(Error::Feasibility {
                what: "exact enumeration of underlying sites",
                size: k,
                limit: MAX_ENUMERATED_SITES,
            });
        }
        let y_sites: Vec<Site> = y_set.into_iter().collect();
        let masks = x_sites
            .iter()
            .map(|x| {
                fp.iter().fold(0u32, |m, o| {
                    let y: Site = x.iter().zip(o).map(|(a, b)| a + b).collect();
                    m | 1 << y_sites.binary_search(&y).expect("dependency recorded")
                })
            })
            .collect();
        let q = spec.q();
        let weights_by_ones = (0..=k)
            .map(|c| q.powi(c as i32) * (1.0 - q).powi((k - c) as i32))
            .collect();
        Ok(Enumerator {
            y_sites,
            masks,
            and: matches!(spec.kind(), FieldKind::Pattern(_)),
            weights_by_ones,
        })
    }

    pub fn y_sites(&self) -> &[Site] {
        &self.y_sites
    }

    pub fn configurations(&self) -> u64 {
        1u64 << self.y_sites.len()
    }

    /// Probability of a `Y` configuration (bit `i` is the value at `y_sites[i]`).
    pub fn weight(&self, config: u32) -> f64 {
        self.weights_by_ones[config.count_ones() as usize]
    }

    /// `X` values for a configuration; bit `i` belongs to `x_sites[i]`.
    pub fn x_bits(&self, config: u32) -> u64 {
        self.masks.iter().enumerate().fold(0u64, |acc, (i, &m)| {
            let on = if self.and { config & m == m } else { config & m != 0 };
            acc | (on as u64) << i
        })
    }

    /// Calls `f(weight, x_bits)` for every configuration.
    pub fn for_each(&self, mut f: impl FnMut(f64, u64)) {
        for config in 0..self.configurations() as u32 {
            f(self.weight(config), self.x_bits(config));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g01() -> Vec<Site> {
        vec![vec![0], vec![1]]
    }

    #[test]
    fn pattern_marginal_is_inverse_volume() {
        for d in 1..=3 {
            for n in [1u64, 2, 7, 16] {
                let g: Vec<Site> = vec![vec![0; d], (0..d as i64).collect()];
                let g = if d == 1 { vec![vec![0], vec![2]] } else { g };
                let s = FieldSpec::pattern(d, n, 1.0, g).unwrap();
                assert_eq!(s.marginal_prob(), 1.0 / (n as f64).powi(d as i32));
            }
        }
        let s = FieldSpec::pattern(1, 10, 1.0, vec![vec![0]]).unwrap();
        assert_eq!(s.marginal_prob(), 0.1);
    }

    #[test]
    fn or_field_marginal() {
        let s = FieldSpec::or_field(4, 1.0).unwrap();
        assert_eq!(s.marginal_prob(), 7.0 / 16.0);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(FieldSpec::pattern(1, 4, 1.0, vec![]).is_err());
        assert!(FieldSpec::pattern(1, 4, 1.0, vec![vec![0], vec![0]]).is_err());
        assert!(FieldSpec::pattern(2, 4, 1.0, vec![vec![0]]).is_err());
        assert!(FieldSpec::pattern(1, 0, 1.0, vec![vec![0]]).is_err());
        assert!(FieldSpec::pattern(1, 4, -1.0, vec![vec![0]]).is_err());
        // q = 2 > 1
        assert!(FieldSpec::pattern(1, 1, 2.0, vec![vec![0]]).is_err());
        assert!(FieldSpec::or_field(1, 1.5).is_err());
        // q = 1 is allowed
        assert_eq!(FieldSpec::or_field(1, 1.0).unwrap().q(), 1.0);
    }

    #[test]
    fn union_size_examples() {
        assert_eq!(union_size(&g01(), &[1]).unwrap(), 3);
        assert_eq!(union_size(&[vec![0]], &[5]).unwrap(), 2);
        assert!(matches!(union_size(&g01(), &[0]), Err(Error::Domain(_))));
    }

    #[test]
    fn covariance_examples() {
        let s = FieldSpec::pattern(1, 16, 1.0, g01()).unwrap();
        assert_eq!(s.q(), 0.25);
        assert!((s.exact_cov(&[1]).unwrap() - 0.01171875).abs() < 1e-15);
        assert_eq!(s.exact_cov(&[2]).unwrap(), 0.0);
        assert!((s.sigma() - 0.0234375).abs() < 1e-15);

        let iid = FieldSpec::pattern(2, 5, 1.0, vec![vec![0, 0]]).unwrap();
        assert_eq!(iid.exact_cov(&[1, -3]).unwrap(), 0.0);
        assert_eq!(iid.sigma(), 0.0);
        assert!(iid.lag_set().is_empty());

        let or = FieldSpec::or_field(4, 1.0).unwrap();
        assert!((or.exact_cov(&[1]).unwrap() - 27.0 / 256.0).abs() < 1e-15);
        assert!((or.exact_cov(&[-1]).unwrap() - 27.0 / 256.0).abs() < 1e-15);
        assert_eq!(or.exact_cov(&[3]).unwrap(), 0.0);
        assert!((or.sigma() - 0.2109375).abs() < 1e-15);

        assert!(or.exact_cov(&[0]).is_err());
        assert!(s.exact_cov(&[1, 1]).is_err());
    }

    #[test]
    fn lag_set_of_pattern() {
        let s = FieldSpec::pattern(1, 4, 1.0, vec![vec![0], vec![1], vec![3]]).unwrap();
        let lags: Vec<i64> = s.lag_set().into_iter().map(|l| l[0]).collect();
        assert_eq!(lags, vec![-3, -2, -1, 1, 2, 3]);
    }

    #[test]
    fn decay_rows() {
        let s = FieldSpec::pattern(1, 4, 1.0, g01()).unwrap();
        let rows = decay_diagnostic(&s, &[4, 16, 64]).unwrap();
        for r in rows {
            let x = (r.n as f64).powf(-0.5);
            assert!((r.scaled_sigma - 2.0 * x * (1.0 - x)).abs() < 1e-14);
        }
        let iid = FieldSpec::pattern(1, 4, 1.0, vec![vec![0]]).unwrap();
        assert!(decay_diagnostic(&iid, &[10, 100]).unwrap().iter().all(|r| r.scaled_sigma == 0.0));
    }

    #[test]
    fn degenerate_probability_gives_all_ones() {
        let s = FieldSpec::pattern(1, 1, 1.0, vec![vec![0]]).unwrap();
        let w = LatticeWindow::interval(-3, 12).unwrap();
        let sample = sample_field(&s, &w, 99).unwrap();
        assert!(sample.y_values().iter().all(|&y| y == 1));
        assert!(sample.x_values().iter().all(|&x| x == 1));
    }

    #[test]
    fn product_identity_site_by_site() {
        let s = FieldSpec::pattern(1, 16, 1.0, g01()).unwrap();
        let w = LatticeWindow::interval(0, 63).unwrap();
        let sample = sample_field(&s, &w, 3).unwrap();
        assert_eq!(sample.y_window().lo(), &[0]);
        assert_eq!(sample.y_window().hi(), &[64]);
        for k in 0..=63i64 {
            let y0 = sample.y_at(&[k]).unwrap();
            let y1 = sample.y_at(&[k + 1]).unwrap();
            assert_eq!(sample.x_at(&[k]).unwrap(), y0 * y1);
        }
    }

    #[test]
    fn negative_pattern_offsets_are_padded() {
        let s = FieldSpec::pattern(2, 3, 1.0, vec![vec![-1, 0], vec![0, 2], vec![1, -1]]).unwrap();
        let w = LatticeWindow::new(vec![0, 0], vec![4, 5]).unwrap();
        let sample = sample_field(&s, &w, 11).unwrap();
        assert_eq!(sample.y_window().lo(), &[-1, -1]);
        assert_eq!(sample.y_window().hi(), &[5, 7]);
        for site in w.sites() {
            let want = s
                .footprint()
                .iter()
                .all(|o| sample.y_at(&[site[0] + o[0], site[1] + o[1]]) == Some(1));
            assert_eq!(sample.x_at(&site), Some(want as u8));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = FieldSpec::or_field(5, 1.0).unwrap();
        let w = LatticeWindow::interval(0, 200).unwrap();
        let a = sample_field(&s, &w, 17).unwrap();
        let b = sample_field(&s, &w, 17).unwrap();
        let c = sample_field(&s, &w, 18).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.y_values(), c.y_values());
    }

    #[test]
    fn from_y_validates_length() {
        let s = FieldSpec::or_field(5, 1.0).unwrap();
        let w = LatticeWindow::interval(0, 3).unwrap();
        assert!(FieldSample::from_y(&s, w.clone(), vec![0; 4], 0).is_err());
        let sample = FieldSample::from_y(&s, w, vec![0, 1, 0, 0, 0], 0).unwrap();
        assert_eq!(sample.x_values(), &[1, 1, 0, 0]);
    }

    #[test]
    fn enumerator_feasibility_cap() {
        let s = FieldSpec::pattern(1, 4, 1.0, vec![vec![0]]).unwrap();
        let sites: Vec<Site> = (0..25).map(|i| vec![i]).collect();
        assert!(matches!(Enumerator::new(&s, &sites), Err(Error::Feasibility { .. })));
        let e = Enumerator::new(&s, &sites[..24]).unwrap();
        assert_eq!(e.configurations(), 1 << 24);
    }

    #[test]
    fn enumerator_weights_sum_to_one() {
        let s = FieldSpec::or_field(3, 1.0).unwrap();
        let e = Enumerator::new(&s, &[vec![0], vec![2]]).unwrap();
        assert_eq!(e.y_sites().len(), 4);
        let mut total = 0.0;
        e.for_each(|w, _| total += w);
        assert!((total - 1.0).abs() < 1e-14);
    }
}
