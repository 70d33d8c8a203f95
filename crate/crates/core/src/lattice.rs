use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Z^d.
pub type Site = Vec<i64>;

/// Largest number of sites a single window may hold.
pub const MAX_WINDOW_SITES: u128 = 1 << 26;

/// Closed axis-aligned box `[lo, hi]` of Z^d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWindow {
    lo: Site,
    hi: Site,
}

impl LatticeWindow {
    pub fn new(lo: Site, hi: Site) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidWindow(format!(
                "corner dimensions {} and {} must agree and be positive",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidWindow(format!("lo {lo:?} exceeds hi {hi:?}")));
        }
        let w = LatticeWindow { lo, hi };
        if w.cardinality() > u64::MAX as u128 {
            return Err(Error::InvalidWindow("cardinality overflows u64".into()));
        }
        Ok(w)
    }

    /// One-dimensional window `[lo, hi]`.
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    /// Smallest window containing every site, or `None` for an empty list.
    pub fn bounding(sites: &[Site]) -> Option<Result<Self>> {
        let first = sites.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for s in &sites[1..] {
            if s.len() != lo.len() {
                return Some(Err(Error::InvalidWindow("sites of mixed dimension".into())));
            }
            for i in 0..lo.len() {
                lo[i] = lo[i].min(s[i]);
                hi[i] = hi[i].max(s[i]);
            }
        }
        Some(Self::new(lo, hi))
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn extent(&self, axis: usize) -> u128 {
        (self.hi[axis] as i128 - self.lo[axis] as i128 + 1) as u128
    }

    pub fn cardinality(&self) -> u128 {
        (0..self.dim()).map(|i| self.extent(i)).product()
    }

    /// Like [`cardinality`](Self::cardinality), but fails past [`MAX_WINDOW_SITES`].
    pub fn checked_len(&self, what: &'static str) -> Result<usize> {
        let size = self.cardinality();
        if size > MAX_WINDOW_SITES {
            return Err(Error::Resource {
                what,
                size,
                limit: MAX_WINDOW_SITES,
            });
        }
        Ok(size as usize)
    }

    pub fn contains(&self, site: &[i64]) -> bool {
        site.len() == self.dim()
            && site
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn contains_window(&self, other: &LatticeWindow) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let d = self.dim();
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.extent(i + 1) as usize;
        }
        strides
    }

    /// Flat row-major index of a site inside the window.
    pub fn index_of(&self, site: &[i64]) -> Option<usize> {
        if !self.contains(site) {
            return None;
        }
        let strides = self.strides();
        Some(
            site.iter()
                .zip(&self.lo)
                .zip(&strides)
                .map(|((x, l), s)| (x - l) as usize * s)
                .sum(),
        )
    }

    pub fn site_at(&self, mut index: usize) -> Site {
        let strides = self.strides();
        let mut site = vec![0; self.dim()];
        for i in 0..self.dim() {
            site[i] = self.lo[i] + (index / strides[i]) as i64;
            index %= strides[i];
        }
        site
    }

    /// Sites in row-major order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        let n = self.cardinality() as usize;
        (0..n).map(move |i| self.site_at(i))
    }

    /// Grows the window by `below` on the low side and `above` on the high side.
    pub fn padded(&self, below: &[i64], above: &[i64]) -> Result<Self> {
        let lo = self.lo.iter().zip(below).map(|(l, b)| l - b).collect();
        let hi = self.hi.iter().zip(above).map(|(h, a)| h + a).collect();
        Self::new(lo, hi)
    }
}
