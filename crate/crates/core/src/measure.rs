//! The rescaled random measure `μ_n(A) = Σ_{j ∈ Z^d ∩ nA} X_j` and integrals
//! `∫ f dμ_n = Σ_j f(j/n) X_j` against tensor-product trapezoid test functions.
//!
//! Lattice membership always uses closed boxes: `j` belongs to `nA` iff
//! `lo_i ≤ j_i / n ≤ hi_i` for every axis, evaluated in floating point exactly
//! as the test function itself is evaluated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSample;
use crate::lattice::{LatticeWindow, Site};

/// Absolute tolerance between successive quadrature refinements.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Panel cap per axis.
pub const MAX_PANELS: usize = 1 << 20;

/// Piecewise-linear bump: 0 up to `a`, rising to 1 on `[a, b]`, flat on
/// `[b, c]`, falling back to 0 on `[c, e]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    a: f64,
    b: f64,
    c: f64,
    e: f64,
}

impl TryFrom<[f64; 4]> for Trapezoid {
    type Error = Error;
    fn try_from([a, b, c, e]: [f64; 4]) -> Result<Self> {
        Trapezoid::new(a, b, c, e)
    }
}

impl From<Trapezoid> for [f64; 4] {
    fn from(t: Trapezoid) -> Self {
        [t.a, t.b, t.c, t.e]
    }
}

impl Trapezoid {
    /// Requires `a < b ≤ c < e`; zero-width ramps would make `f` discontinuous.
    pub fn new(a: f64, b: f64, c: f64, e: f64) -> Result<Self> {
        if ![a, b, c, e].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidFunction("break points must be finite".into()));
        }
        if !(a < b && b <= c && c < e) {
            return Err(Error::InvalidFunction(format!(
                "break points ({a}, {b}, {c}, {e}) must satisfy a < b <= c < e"
            )));
        }
        Ok(Trapezoid { a, b, c, e })
    }

    pub fn breaks(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.e]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.e {
            0.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else {
            (self.e - x) / (self.e - self.c)
        }
    }

    /// Pieces `[a, b]`, `[b, c]`, `[c, e]`, dropping an empty plateau.
    fn pieces(&self) -> Vec<(f64, f64)> {
        let mut v = vec![(self.a, self.b)];
        if self.c > self.b {
            v.push((self.b, self.c));
        }
        v.push((self.c, self.e));
        v
    }
}

/// `f(x) = amplitude · ∏_i profile_i(x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TestFunctionRecord", into = "TestFunctionRecord")]
pub struct TestFunction {
    axes: Vec<Trapezoid>,
    amplitude: f64,
}

/// Per-axis break points `[a, b, c, e]` and the global amplitude.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionRecord {
    pub axes: Vec<[f64; 4]>,
    pub amplitude: f64,
}

impl TryFrom<TestFunctionRecord> for TestFunction {
    type Error = Error;
    fn try_from(r: TestFunctionRecord) -> Result<Self> {
        let axes = r.axes.into_iter().map(Trapezoid::try_from).collect::<Result<_>>()?;
        TestFunction::new(axes, r.amplitude)
    }
}

impl From<TestFunction> for TestFunctionRecord {
    fn from(f: TestFunction) -> Self {
        TestFunctionRecord {
            axes: f.axes.into_iter().map(Into::into).collect(),
            amplitude: f.amplitude,
        }
    }
}

impl TestFunction {
    pub fn new(axes: Vec<Trapezoid>, amplitude: f64) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidFunction("at least one axis is required".into()));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::InvalidFunction(format!(
                "amplitude must be finite and nonnegative, got {amplitude}"
            )));
        }
        Ok(TestFunction { axes, amplitude })
    }

    /// One-dimensional trapezoid.
    pub fn trapezoid(a: f64, b: f64, c: f64, e: f64, amplitude: f64) -> Result<Self> {
        Self::new(vec![Trapezoid::new(a, b, c, e)?], amplitude)
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Trapezoid] {
        &self.axes
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// `‖f‖_∞`; every profile reaches 1.
    pub fn sup_norm(&self) -> f64 {
        self.amplitude
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.axes.clone(), self.amplitude * factor)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.d());
        self.axes
            .iter()
            .zip(x)
            .fold(self.amplitude, |acc, (p, &xi)| acc * p.eval(xi))
    }

    /// `f(j/n)`.
    pub fn eval_lattice(&self, site: &[i64], n: u64) -> f64 {
        let x: Vec<f64> = site.iter().map(|&j| j as f64 / n as f64).collect();
        self.eval(&x)
    }

    pub fn support(&self) -> BoxRegion {
        BoxRegion {
            lo: self.axes.iter().map(|t| t.a).collect(),
            hi: self.axes.iter().map(|t| t.e).collect(),
        }
    }

    /// Lebesgue measure of the support box.
    pub fn support_volume(&self) -> f64 {
        self.axes.iter().map(|t| t.e - t.a).product()
    }

    /// The constant `K = ∏ (e_i − a_i + 1)` bounding `|Z^d ∩ n supp f| / n^d`.
    pub fn lattice_constant(&self) -> f64 {
        self.axes.iter().map(|t| t.e - t.a + 1.0).product()
    }
}

/// Closed box `[lo, hi]` of R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoxRecord", into = "BoxRecord")]
pub struct BoxRegion {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxRecord {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl TryFrom<BoxRecord> for BoxRegion {
    type Error = Error;
    fn try_from(r: BoxRecord) -> Result<Self> {
        BoxRegion::new(r.lo, r.hi)
    }
}

impl From<BoxRegion> for BoxRecord {
    fn from(b: BoxRegion) -> Self {
        BoxRecord { lo: b.lo, hi: b.hi }
    }
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidRegion("corner dimensions must agree".into()));
        }
        if !lo.iter().chain(&hi).all(|x| x.is_finite()) {
            return Err(Error::InvalidRegion("corners must be finite".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
            return Err(Error::InvalidRegion(format!("need lo < hi, got {lo:?} and {hi:?}")));
        }
        Ok(BoxRegion { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn d(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    /// Lattice box of `Z^d ∩ nA`, or `None` when it is empty.
    pub fn lattice_window(&self, n: u64) -> Option<LatticeWindow> {
        let nf = n as f64;
        let mut lo = Vec::with_capacity(self.d());
        let mut hi = Vec::with_capacity(self.d());
        for (&l, &h) in self.lo.iter().zip(&self.hi) {
            let (a, b) = axis_range(l, h, nf)?;
            lo.push(a);
            hi.push(b);
        }
        LatticeWindow::new(lo, hi).ok()
    }

    /// `|Z^d ∩ nA|`.
    pub fn lattice_count(&self, n: u64) -> u128 {
        self.lattice_window(n).map_or(0, |w| w.cardinality())
    }
}

/// Integers `j` with `lo ≤ j/n ≤ hi`.
fn axis_range(lo: f64, hi: f64, n: f64) -> Option<(i64, i64)> {
    let inside = |j: i64| {
        let x = j as f64 / n;
        lo <= x && x <= hi
    };
    let mut a = (lo * n).ceil() as i64 - 1;
    while !inside(a) && (a as f64) <= hi * n + 1.0 {
        a += 1;
    }
    if !inside(a) {
        return None;
    }
    let mut b = (hi * n).floor() as i64 + 1;
    while !inside(b) {
        b -= 1;
    }
    Some((a, b))
}

/// `Z^d ∩ n supp f` and its cardinality.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSupport {
    pub window: Option<LatticeWindow>,
    pub sites: Vec<Site>,
}

impl LatticeSupport {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

pub fn lattice_support(f: &TestFunction, n: u64) -> LatticeSupport {
    let window = f.support().lattice_window(n);
    let sites = window.as_ref().map_or_else(Vec::new, |w| w.sites().collect());
    LatticeSupport { window, sites }
}

/// Lattice weights `f(j/n)` over `Z^d ∩ n supp f`, in row-major order.
#[derive(Debug, Clone)]
pub struct LatticeWeights {
    pub support: LatticeSupport,
    pub weights: Vec<f64>,
}

impl LatticeWeights {
    pub fn new(f: &TestFunction, n: u64) -> Self {
        let support = lattice_support(f, n);
        let weights = support.sites.iter().map(|s| f.eval_lattice(s, n)).collect();
        LatticeWeights { support, weights }
    }

    /// Pairs `(flat index in window, weight)` for nonzero weights.
    pub fn bind(&self, window: &LatticeWindow) -> Result<Vec<(usize, f64)>> {
        if let Some(w) = &self.support.window {
            if !window.contains_window(w) {
                return Err(Error::Coverage(format!(
                    "sample window [{:?}, {:?}] does not contain [{:?}, {:?}]",
                    window.lo(),
                    window.hi(),
                    w.lo(),
                    w.hi()
                )));
            }
        }
        Ok(self
            .support
            .sites
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(s, &w)| (window.index_of(s).expect("covered"), w))
            .collect())
    }
}

/// `Σ_i w_i x_i` in the order given.
pub(crate) fn weighted_sum(bound: &[(usize, f64)], x: &[u8]) -> f64 {
    bound
        .iter()
        .fold(0.0, |acc, &(i, w)| if x[i] == 1 { acc + w } else { acc })
}

/// `μ_n(A)` for a sample.
pub fn measure_of_box(sample: &FieldSample, region: &BoxRegion) -> Result<u64> {
    if region.d() != sample.window().dim() {
        return Err(Error::InvalidRegion("region and sample differ in dimension".into()));
    }
    let Some(lattice) = region.lattice_window(sample.spec().n()) else {
        return Ok(0);
    };
    if !sample.window().contains_window(&lattice) {
        return Err(Error::Coverage(format!(
            "sample window [{:?}, {:?}] does not contain nA = [{:?}, {:?}]",
            sample.window().lo(),
            sample.window().hi(),
            lattice.lo(),
            lattice.hi()
        )));
    }
    Ok(lattice
        .sites()
        .filter(|s| sample.x_at(s) == Some(1))
        .count() as u64)
}

/// `∫ f dμ_n = Σ_j f(j/n) X_j`.
pub fn integral(f: &TestFunction, sample: &FieldSample) -> Result<f64> {
    if f.d() != sample.window().dim() {
        return Err(Error::InvalidFunction("function and sample differ in dimension".into()));
    }
    let weights = LatticeWeights::new(f, sample.spec().n());
    let bound = weights.bind(sample.window())?;
    Ok(weighted_sum(&bound, sample.x_values()))
}

/// Simpson nodes and weights over a list of pieces with `panels` (even) panels each.
fn simpson_rule(pieces: &[(f64, f64)], panels: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(pieces.len() * (panels + 1));
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &(lo, hi) in pieces {
        let h = (hi - lo) / panels as f64;
        for k in 0..=panels {
            let c = if k == 0 || k == panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            nodes.push(lo + k as f64 * h);
            weights.push(c * h / 3.0);
        }
    }
    (nodes, weights)
}

fn simpson_estimate(f: &TestFunction, theta: f64, panels: usize) -> Complex64 {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = f
        .axes
        .iter()
        .map(|t| {
            let (nodes, w) = simpson_rule(&t.pieces(), panels);
            let vals = nodes.iter().map(|&x| t.eval(x)).collect();
            (vals, w)
        })
        .collect();
    let d = rules.len();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut counter = vec![0usize; d];
    loop {
        let mut value = f.amplitude;
        let mut weight = 1.0;
        for (axis, &k) in counter.iter().enumerate() {
            value *= rules[axis].0[k];
            weight *= rules[axis].1[k];
        }
        let (s, c) = (theta * value).sin_cos();
        sum += Complex64::new(c - 1.0, s) * weight;

        let mut axis = d;
        loop {
            if axis == 0 {
                return sum;
            }
            axis -= 1;
            counter[axis] += 1;
            if counter[axis] < rules[axis].0.len() {
                break;
            }
            counter[axis] = 0;
        }
    }
}

/// `∫_{R^d} (exp(i·t·scale·f(x)) − 1) dx` by tensor-product composite Simpson.
///
/// Each axis is split at the trapezoid break points so the integrand is smooth
/// on every panel; panel counts double until two successive estimates agree
/// to [`QUADRATURE_TOL`].
pub fn quadrature(f: &TestFunction, t: f64, scale: f64) -> Result<Complex64> {
    if !(t.is_finite() && scale.is_finite()) {
        return Err(Error::Domain("t and scale must be finite".into()));
    }
    let theta = t * scale;
    if theta == 0.0 || f.amplitude == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let max_pieces = f.axes.iter().map(|t| t.pieces().len()).max().unwrap_or(1);
    let mut panels = 2;
    let mut previous = simpson_estimate(f, theta, panels);
    loop {
        panels *= 2;
        let current = simpson_estimate(f, theta, panels);
        if (current - previous).norm() < QUADRATURE_TOL {
            return Ok(current);
        }
        if panels * max_pieces >= MAX_PANELS {
            return Err(Error::NonConvergence {
                last: current,
                previous,
            });
        }
        previous = current;
    }
}
