mod common;

use common::{charfn, covariance, linear_phase_integral, marginal, Rule};
use fkg_poisson::association::window_distribution;
use fkg_poisson::field::union_size;
use fkg_poisson::limit::{exact_charfn, newman_bound, product_charfn};
use fkg_poisson::measure::{lattice_support, quadrature};
use fkg_poisson::{FieldKind, FieldSpec, Site, TestFunction};

fn rule_of(spec: &FieldSpec) -> Rule {
    match spec.kind() {
        FieldKind::Pattern(g) => Rule::All(g.clone()),
        FieldKind::OrField => Rule::Or,
    }
}

fn specs_1d() -> Vec<FieldSpec> {
    let mut out = Vec::new();
    for n in [2u64, 3, 4, 16] {
        out.push(FieldSpec::or_field(n, 1.0).unwrap());
        for g in [vec![0], vec![0, 1], vec![0, 2, 3], vec![-1, 1]] {
            let g: Vec<Site> = g.into_iter().map(|x| vec![x]).collect();
            out.push(FieldSpec::pattern(1, n, 1.0, g).unwrap());
        }
    }
    out.push(FieldSpec::pattern(1, 5, 2.5, vec![vec![0], vec![1]]).unwrap());
    out
}

#[test]
fn covariances_match_enumeration() {
    for spec in specs_1d() {
        let rule = rule_of(&spec);
        let q = spec.q();
        for j in -5i64..=5 {
            if j == 0 {
                continue;
            }
            let got = spec.exact_cov(&[j]).unwrap();
            let want = covariance(&rule, q, &[j]);
            assert!(got >= 0.0);
            assert!((got - want).abs() < 1e-12, "{spec:?} lag {j}: {got} vs {want}");
        }
        assert!((spec.marginal_prob() - marginal(&rule, q, 1)).abs() < 1e-12);
    }
}

#[test]
fn covariances_match_enumeration_in_two_dimensions() {
    let g: Vec<Site> = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    let spec = FieldSpec::pattern(2, 3, 1.0, g.clone()).unwrap();
    let rule = Rule::All(g);
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if (a, b) == (0, 0) {
                continue;
            }
            let got = spec.exact_cov(&[a, b]).unwrap();
            let want = covariance(&rule, spec.q(), &[a, b]);
            assert!((got - want).abs() < 1e-12);
        }
    }
    let sigma: f64 = spec.lag_set().iter().map(|l| covariance(&rule, spec.q(), l)).sum();
    assert!((spec.sigma() - sigma).abs() < 1e-12);
    assert!((spec.marginal_prob() - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn covariance_vanishes_outside_the_lag_set() {
    for spec in specs_1d() {
        let lags = spec.lag_set();
        let rule = rule_of(&spec);
        for j in -6i64..=6 {
            if j != 0 && !lags.contains(&vec![j]) {
                assert_eq!(spec.exact_cov(&[j]).unwrap(), 0.0);
                assert!(covariance(&rule, spec.q(), &[j]).abs() < 1e-15);
            }
        }
        let total: f64 = lags.iter().map(|l| spec.exact_cov(l).unwrap()).sum();
        assert_eq!(spec.sigma(), total);
    }
}

#[test]
fn documented_covariance_values() {
    let s = FieldSpec::pattern(1, 16, 1.0, vec![vec![0], vec![1]]).unwrap();
    let oracle = covariance(&Rule::All(vec![vec![0], vec![1]]), 0.25, &[1]);
    assert!((oracle - 0.01171875).abs() < 1e-15);
    assert!((s.exact_cov(&[1]).unwrap() - oracle).abs() < 1e-15);
    let or = FieldSpec::or_field(4, 1.0).unwrap();
    let oracle = covariance(&Rule::Or, 0.25, &[1]);
    assert!((oracle - 27.0 / 256.0).abs() < 1e-15);
    assert!((or.sigma() - 2.0 * oracle).abs() < 1e-15);
}

fn subsets_up_to(points: &[Site], max: usize) -> Vec<Vec<Site>> {
    let mut out = vec![vec![]];
    for p in points {
        let mut grown = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(p.clone());
                grown.push(t);
            }
        }
        out.extend(grown);
    }
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

#[test]
fn translates_always_add_a_point() {
    for d in [1usize, 2] {
        let grid: Vec<Site> = if d == 1 {
            (0..=4).map(|x| vec![x]).collect()
        } else {
            (0..=4).flat_map(|x| (0..=4).map(move |y| vec![x, y])).collect()
        };
        for g in subsets_up_to(&grid, 4) {
            let mut lags: Vec<Site> = Vec::new();
            for a in &g {
                for b in &g {
                    lags.push(a.iter().zip(b).map(|(x, y)| x - y).collect());
                }
            }
            lags.push(vec![7; d]);
            for j in lags.into_iter().filter(|j| j.iter().any(|&c| c != 0)) {
                let mut union: Vec<Site> = g.clone();
                union.extend(g.iter().map(|p| p.iter().zip(&j).map(|(a, b)| a + b).collect()));
                union.sort();
                union.dedup();
                let got = union_size(&g, &j).unwrap();
                assert_eq!(got, union.len());
                assert!(got > g.len());
            }
        }
    }
}

#[test]
fn window_distributions_match_enumeration() {
    let cases = [
        (FieldSpec::pattern(1, 4, 1.0, vec![vec![0], vec![1]]).unwrap(), vec![0i64, 1]),
        (FieldSpec::pattern(1, 3, 1.0, vec![vec![0], vec![2]]).unwrap(), vec![0, 1, 2]),
        (FieldSpec::or_field(2, 1.0).unwrap(), vec![0]),
        (FieldSpec::or_field(3, 1.0).unwrap(), vec![-1, 0, 2]),
    ];
    for (spec, sites) in cases {
        let sites: Vec<Site> = sites.into_iter().map(|x| vec![x]).collect();
        let dist = window_distribution(&spec, &sites).unwrap();
        let rule = rule_of(&spec);
        let ys = common::union_deps(&rule, &sites);
        for pattern in 0..1usize << sites.len() {
            let want = common::expectation(spec.q(), &ys, |y| {
                sites
                    .iter()
                    .enumerate()
                    .all(|(i, s)| rule.x(s, y) as usize == pattern >> i & 1) as u8 as f64
            });
            assert!((dist.prob(pattern) - want).abs() < 1e-14);
        }
    }
    // q = 1/2 pattern pair: the documented law
    let spec = FieldSpec::pattern(1, 4, 1.0, vec![vec![0], vec![1]]).unwrap();
    let d = window_distribution(&spec, &[vec![0], vec![1]]).unwrap();
    assert_eq!(d.probs(), &[5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0]);
}

fn weights(f: &TestFunction, n: u64) -> (Vec<Site>, Vec<f64>) {
    let s = lattice_support(f, n);
    let w = s.sites.iter().map(|j| f.eval_lattice(j, n)).collect();
    (s.sites, w)
}

#[test]
fn exact_charfn_matches_enumeration() {
    let fs = [
        TestFunction::trapezoid(0.0, 0.25, 0.75, 1.0, 1.0).unwrap(),
        TestFunction::trapezoid(-0.5, 0.0, 0.5, 1.0, 2.0).unwrap(),
    ];
    for spec in specs_1d().into_iter().filter(|s| s.n() <= 4) {
        let rule = rule_of(&spec);
        for f in &fs {
            let (xs, w) = weights(f, spec.n());
            for t in [0.5, 1.0, -2.0, std::f64::consts::PI] {
                let got = exact_charfn(t, f, &spec).unwrap();
                let (re, im) = charfn(&rule, spec.q(), t, &xs, &w);
                assert!((got.re - re).abs() < 1e-12 && (got.im - im).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn independent_product_matches_brute_force() {
    // G = {0}, n = 4: five Bernoulli(1/4) sites j = 0..4
    let spec = FieldSpec::pattern(1, 4, 1.0, vec![vec![0]]).unwrap();
    let f = TestFunction::trapezoid(0.0, 0.25, 0.75, 1.0, 1.0).unwrap();
    let (xs, w) = weights(&f, 4);
    assert_eq!(xs.len(), 5);
    let (re, im) = charfn(&Rule::All(vec![vec![0]]), 0.25, 1.0, &xs, &w);
    let i1 = product_charfn(1.0, &f, &spec).unwrap();
    assert!((i1.re - re).abs() < 1e-12 && (i1.im - im).abs() < 1e-12);
}

#[test]
fn pair_pattern_at_small_scale_respects_the_bound() {
    // G = {0, 1}, n = 2: support sites 0, 1, 2 depend on Y_0..Y_3
    let spec = FieldSpec::pattern(1, 2, 1.0, vec![vec![0], vec![1]]).unwrap();
    let f = TestFunction::trapezoid(0.0, 0.25, 0.75, 1.0, 1.0).unwrap();
    let (xs, w) = weights(&f, 2);
    let (re, im) = charfn(&Rule::All(vec![vec![0], vec![1]]), spec.q(), 1.0, &xs, &w);
    let exact = exact_charfn(1.0, &f, &spec).unwrap();
    assert!((exact.re - re).abs() < 1e-12 && (exact.im - im).abs() < 1e-12);
    let gap = (exact - product_charfn(1.0, &f, &spec).unwrap()).norm();
    let nb = newman_bound(1.0, &f, &spec).unwrap();
    assert!(gap <= nb.tight + 1e-9);
}

#[test]
fn or_field_bounds_by_direct_summation() {
    let spec = FieldSpec::or_field(4, 1.0).unwrap();
    let f = TestFunction::trapezoid(0.0, 0.25, 0.75, 1.0, 1.0).unwrap();
    let (xs, w) = weights(&f, 4);
    let nb = newman_bound(1.0, &f, &spec).unwrap();
    let mut tight = 0.0;
    for (a, wa) in xs.iter().zip(&w) {
        for (b, wb) in xs.iter().zip(&w) {
            if a != b {
                tight += wa * wb * covariance(&Rule::Or, 0.25, &[b[0] - a[0]]);
            }
        }
    }
    let coarse = 0.5 * xs.len() as f64 * 27.0 / 128.0;
    assert!((nb.tight - 0.5 * tight).abs() < 1e-12);
    assert!((nb.coarse - coarse).abs() < 1e-12);
    assert!(nb.tight <= nb.coarse);
}

#[test]
fn simpson_matches_segment_antiderivatives() {
    let (a, b, c, e) = (0.0, 0.1, 0.9, 1.0);
    for (t, amp) in [(std::f64::consts::PI, 1.0), (2.0, 1.5), (-0.7, 3.0), (9.0, 1.0)] {
        let f = TestFunction::trapezoid(a, b, c, e, amp).unwrap();
        let theta = t * amp;
        // on each segment f/amp = alpha + beta x
        let segs = [
            (-a / (b - a), 1.0 / (b - a), a, b),
            (1.0, 0.0, b, c),
            (e / (e - c), -1.0 / (e - c), c, e),
        ];
        let (mut re, mut im) = (0.0, 0.0);
        for (alpha, beta, lo, hi) in segs {
            let (r, i) = linear_phase_integral(theta, alpha, beta, lo, hi);
            re += r;
            im += i;
        }
        re -= e - a;
        let got = quadrature(&f, t, 1.0).unwrap();
        assert!((got.re - re).abs() < 1e-8 && (got.im - im).abs() < 1e-8, "t={t}");
        // mass scaling
        let doubled = quadrature(&f, t / 2.0, 2.0).unwrap();
        assert!((doubled - got).norm() < 1e-10);
        assert!(common::trapezoid(a, b, c, e, 0.5) == 1.0);
    }
}

#[test]
fn simpson_on_a_product_matches_nested_closed_forms() {
    // f(x, y) = g(x) h(y); compare against a fine midpoint rule over the closed-form inner integral
    let g = [0.0, 0.3, 0.6, 1.0];
    let h = [-1.0, -0.5, 0.5, 2.0];
    let f = TestFunction::new(
        vec![
            fkg_poisson::Trapezoid::new(g[0], g[1], g[2], g[3]).unwrap(),
            fkg_poisson::Trapezoid::new(h[0], h[1], h[2], h[3]).unwrap(),
        ],
        1.0,
    )
    .unwrap();
    let t = 1.3;
    // For fixed x the inner integrand is piecewise linear in y with amplitude g(x).
    let inner = |x: f64| {
        let amp = common::trapezoid(g[0], g[1], g[2], g[3], x);
        let segs = [
            (-h[0] / (h[1] - h[0]), 1.0 / (h[1] - h[0]), h[0], h[1]),
            (1.0, 0.0, h[1], h[2]),
            (h[3] / (h[3] - h[2]), -1.0 / (h[3] - h[2]), h[2], h[3]),
        ];
        let (mut re, mut im) = (0.0, 0.0);
        for (alpha, beta, lo, hi) in segs {
            let (r, i) = linear_phase_integral(t * amp, alpha, beta, lo, hi);
            re += r;
            im += i;
        }
        (re - (h[3] - h[0]), im)
    };
    let m = 200_000;
    let dx = (g[3] - g[0]) / m as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..m {
        let (r, s) = inner(g[0] + (i as f64 + 0.5) * dx);
        re += r * dx;
        im += s * dx;
    }
    let got = quadrature(&f, t, 1.0).unwrap();
    assert!((got.re - re).abs() < 1e-8 && (got.im - im).abs() < 1e-8);
}
