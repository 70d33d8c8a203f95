//! Experiment runner: evaluates a config and writes CSV/JSON artifacts plus a
//! manifest. All aggregation is deterministic, so reruns of one config are
//! byte-identical whatever the thread count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::association::{
    exact_fkg_check, mc_fkg_check, window_distribution, MonotoneIndicator, UpSet,
};
use crate::config::{ExperimentConfig, ExperimentKind, DEFAULT_FKG_PAIRS};
use crate::error::{Error, Result};
use crate::field::{decay_diagnostic, FieldKind};
use crate::limit::{
    exact_charfn, limit_charfn, mc_charfn, newman_bound, overlap_bound, pair_product_charfn,
    product_charfn,
};
use crate::stats::{count_experiment, fit_summary, reference_pmf, FitSummary};

/// Real numbers in CSV output: 17 significant digits, scientific notation.
/// Negative zero prints as zero.
pub fn fmt_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Minimal CSV table with LF line endings.
struct Table {
    text: String,
    rows: usize,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            text: header.join(",") + "\n",
            rows: 0,
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
        self.rows += 1;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub name: String,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub config_sha256: String,
    pub master_seed: u64,
    pub replicates: u64,
    /// Replicate `r` of every Monte Carlo cell draws from `replicate_seed(master_seed, r)`.
    pub replicate_range: [u64; 2],
    pub artifacts: Vec<ArtifactRecord>,
}

/// Files produced by a run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
}

struct Writer {
    dir: PathBuf,
    artifacts: Vec<ArtifactRecord>,
}

impl Writer {
    fn write(&mut self, name: &str, text: &str, rows: usize) -> Result<()> {
        fs::write(self.dir.join(name), text)?;
        self.artifacts.push(ArtifactRecord {
            name: name.into(),
            sha256: sha256_hex(text.as_bytes()),
            rows,
        });
        Ok(())
    }

    fn table(&mut self, name: &str, t: Table) -> Result<()> {
        self.write(name, &t.text, t.rows)
    }
}

/// Runs `kind` with `config`, writing into `out_dir` (created if needed).
pub fn run(kind: ExperimentKind, config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    config.validate(kind)?;
    fs::create_dir_all(out_dir)?;
    let mut w = Writer {
        dir: out_dir.to_path_buf(),
        artifacts: Vec::new(),
    };
    match kind {
        ExperimentKind::SigmaSweep => sigma_sweep(config, &mut w)?,
        ExperimentKind::Charfn => charfn(config, &mut w)?,
        ExperimentKind::CountFit => count_fit(config, &mut w)?,
        ExperimentKind::FkgCheck => fkg_check(config, &mut w)?,
    }
    let manifest = Manifest {
        tool: "fkg-poisson",
        version: env!("CARGO_PKG_VERSION"),
        experiment: kind.name(),
        config_sha256: sha256_hex(config.canonical_json().as_bytes()),
        master_seed: config.master_seed,
        replicates: config.replicates,
        replicate_range: [0, config.replicates],
        artifacts: w.artifacts.clone(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(out_dir.join("manifest.json"), text)?;
    Ok(RunOutput {
        out_dir: out_dir.to_path_buf(),
        manifest,
    })
}

fn sigma_sweep(c: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let rows = decay_diagnostic(&c.spec, c.n_values.as_deref().unwrap_or_default())?;
    let mut t = Table::new(&["n", "sigma", "scaled_sigma"]);
    for r in rows {
        t.row(vec![r.n.to_string(), fmt_real(r.sigma), fmt_real(r.scaled_sigma)]);
    }
    w.table("sigma_sweep.csv", t)
}

fn charfn(c: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let f = c.f.as_ref().expect("validated");
    let ts = c.t_values.as_deref().expect("validated");
    let ns = c.n_values.clone().unwrap_or_else(|| vec![c.spec.n()]);
    let or_field = *c.spec.kind() == FieldKind::OrField;
    let mut main = Table::new(&[
        "t", "n", "i1_re", "i1_im", "phi_re", "phi_im", "bound_tight", "bound_coarse", "mc_re",
        "mc_im", "mc_se", "exact_re", "exact_im",
    ]);
    let mut compound = Table::new(&[
        "t", "n", "mc_re", "mc_im", "mc_se", "phi2_re", "phi2_im", "pair_re", "pair_im",
        "overlap_bound", "dist_phi1", "dist_phi2",
    ]);
    for &n in &ns {
        let spec = c.spec.with_n(n)?;
        for &t in ts {
            let i1 = product_charfn(t, f, &spec)?;
            let phi = limit_charfn(t, f, spec.lambda(), 1)?;
            let nb = newman_bound(t, f, &spec)?;
            let mc = mc_charfn(t, f, &spec, c.replicates, c.master_seed)?;
            let exact = match exact_charfn(t, f, &spec) {
                Ok(v) => Some(v),
                Err(Error::Feasibility { .. }) => None,
                Err(e) => return Err(e),
            };
            main.row(vec![
                fmt_real(t),
                n.to_string(),
                fmt_real(i1.re),
                fmt_real(i1.im),
                fmt_real(phi.re),
                fmt_real(phi.im),
                fmt_real(nb.tight),
                fmt_real(nb.coarse),
                fmt_real(mc.value.re),
                fmt_real(mc.value.im),
                fmt_real(mc.std_error),
                fmt_opt(exact.map(|z| z.re)),
                fmt_opt(exact.map(|z| z.im)),
            ]);
            if or_field {
                let phi2 = limit_charfn(t, f, spec.lambda(), 2)?;
                let pair = pair_product_charfn(t, f, &spec)?;
                compound.row(vec![
                    fmt_real(t),
                    n.to_string(),
                    fmt_real(mc.value.re),
                    fmt_real(mc.value.im),
                    fmt_real(mc.std_error),
                    fmt_real(phi2.re),
                    fmt_real(phi2.im),
                    fmt_real(pair.re),
                    fmt_real(pair.im),
                    fmt_real(overlap_bound(t, f, &spec)?),
                    fmt_real((mc.value - phi).norm()),
                    fmt_real((mc.value - phi2).norm()),
                ]);
            }
        }
    }
    w.table("charfn.csv", main)?;
    if or_field {
        w.table("compound.csv", compound)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    kind: &'static str,
    n: u64,
    #[serde(flatten)]
    fit: &'a FitSummary,
}

fn count_fit(c: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let region = c.region.as_ref().expect("validated");
    let hist = count_experiment(&c.spec, region, c.replicates, c.master_seed)?;
    let fit = fit_summary(&hist, &c.spec, region)?;
    let reference = FitSummary::natural_reference(&c.spec);
    let mut t = Table::new(&["k", "count", "empirical_p", "reference_p"]);
    for k in 0..=hist.max_count().unwrap_or(0) {
        t.row(vec![
            k.to_string(),
            hist.counts().get(&k).copied().unwrap_or(0).to_string(),
            fmt_real(hist.empirical(k)),
            fmt_real(reference_pmf(reference, fit.lambda_eff, k)),
        ]);
    }
    w.table("histogram.csv", t)?;
    let kind = match c.spec.kind() {
        FieldKind::Pattern(_) => "pattern",
        FieldKind::OrField => "or",
    };
    let record = SummaryRecord {
        kind,
        n: c.spec.n(),
        fit: &fit,
    };
    let text = serde_json::to_string_pretty(&record).expect("summary serializes") + "\n";
    w.write("summary.json", &text, 1)
}

fn points(u: &UpSet) -> String {
    u.points().iter().map(|p| format!("{p:0width$b}", width = u.m)).collect::<Vec<_>>().join("|")
}

fn indicator_cov(
    probs: &[f64],
    f: &MonotoneIndicator,
    g: &MonotoneIndicator,
) -> f64 {
    let (mut pf, mut pg, mut pfg) = (0.0, 0.0, 0.0);
    for (x, &p) in probs.iter().enumerate() {
        let (a, b) = (f.eval(x as u64), g.eval(x as u64));
        if a {
            pf += p;
        }
        if b {
            pg += p;
        }
        if a && b {
            pfg += p;
        }
    }
    pfg - pf * pg
}

fn fkg_check(c: &ExperimentConfig, w: &mut Writer) -> Result<()> {
    let sites = c.sites.as_deref().expect("validated");
    let m = sites.len();
    let mut t = Table::new(&["source", "pair", "f", "g", "cov", "se", "exact_cov", "verdict"]);
    let dist = match window_distribution(&c.spec, sites) {
        Ok(d) => Some(d),
        Err(Error::Feasibility { .. } | Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(d) = dist.as_ref().filter(|d| d.m() <= crate::association::MAX_UPSET_DIM) {
        let v = exact_fkg_check(d)?;
        let (f, g) = v.witness.map(|(a, b)| (points(&a), points(&b))).unwrap_or_default();
        t.row(vec![
            "exact".into(),
            "min".into(),
            f,
            g,
            fmt_real(v.min_cov),
            String::new(),
            fmt_real(v.min_cov),
            if v.associated() { "associated" } else { "violated" }.into(),
        ]);
    }
    let rows = mc_fkg_check(
        &c.spec,
        sites,
        c.pairs.unwrap_or(DEFAULT_FKG_PAIRS),
        c.replicates,
        c.master_seed,
    )?;
    for r in rows {
        let exact = dist.as_ref().map(|d| indicator_cov(d.probs(), &r.f, &r.g));
        let verdict = if r.cov >= -4.0 * r.std_error { "consistent" } else { "violated" };
        t.row(vec![
            "mc".into(),
            r.pair.to_string(),
            r.f.describe(m),
            r.g.describe(m),
            fmt_real(r.cov),
            fmt_real(r.std_error),
            fmt_opt(exact),
            verdict.into(),
        ]);
    }
    w.table("fkg.csv", t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_format_has_seventeen_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_real(-0.0), "0.0000000000000000e0");
        let x = 0.1f64 + 0.2;
        assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn upset_points_are_bit_strings() {
        let u = UpSet::coordinate(2, 0);
        assert_eq!(points(&u), "01|11");
    }
}
