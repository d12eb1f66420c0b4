//! Sorted table of prime-power norms with prefix sums for the explicit
//! formula.

use rayon::prelude::*;

use super::cache::SplittingCache;
use super::sieve::{primes_below, DEFAULT_SEGMENT};
use super::{LocalSplitting, SplittingContext};
use crate::error::{Error, Result};

/// Largest supported `t_max`; primes must fit the word-sized F_p routines
/// and norms must stay exact in binary64.
pub const T_MAX_LIMIT: f64 = 2_147_483_648.0;

/// One term `(𝔭, m)` of the prime sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEntry {
    /// `m log N𝔭`
    pub x: f64,
    /// `log N𝔭`
    pub logp_f: f64,
    /// `N𝔭^{-m/2}`
    pub inv_norm_half: f64,
    /// `N𝔭^{-m}`
    pub inv_norm: f64,
    /// `N𝔭^m`
    pub norm: u64,
    pub p: u64,
    pub f: u32,
    pub m: u32,
}

/// A prime ideal, recorded by the prime below it and its residue degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal {
    pub norm: u64,
    pub p: u64,
    pub f: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    t_max: f64,
    entries: Vec<NormEntry>,
    ideals: Vec<Ideal>,
    splits: Vec<LocalSplitting>,
    sum_w: Vec<f64>,
    sum_xw: Vec<f64>,
    sum_lp: Vec<f64>,
    sum_xlp: Vec<f64>,
    sum_lp_inv: Vec<f64>,
}

fn check_limit(t_max: f64) -> Result<()> {
    if !(t_max < T_MAX_LIMIT) {
        return Err(Error::Resource(format!(
            "norm table up to {t_max:.6e} exceeds the supported limit 2^31"
        )));
    }
    Ok(())
}

impl NormTable {
    /// Enumerates every `N𝔭^m < t_max`.
    pub fn build(ctx: &SplittingContext, t_max: f64) -> Result<Self> {
        Self::build_with_cache(ctx, t_max, None)
    }

    pub fn build_with_cache(
        ctx: &SplittingContext,
        t_max: f64,
        cache: Option<&mut SplittingCache>,
    ) -> Result<Self> {
        check_limit(t_max)?;
        let primes = primes_below(t_max.ceil() as u64, DEFAULT_SEGMENT);
        let splits = split_all(ctx, &primes, Vec::new(), cache);
        Ok(Self::from_splits(t_max, splits))
    }

    /// Same table for a larger `t_max`, reusing the splitting data already
    /// computed.
    pub fn extend(&self, ctx: &SplittingContext, t_max: f64) -> Result<Self> {
        self.extend_with_cache(ctx, t_max, None)
    }

    pub fn extend_with_cache(
        &self,
        ctx: &SplittingContext,
        t_max: f64,
        cache: Option<&mut SplittingCache>,
    ) -> Result<Self> {
        check_limit(t_max)?;
        let primes = primes_below(t_max.ceil() as u64, DEFAULT_SEGMENT);
        let splits = split_all(ctx, &primes, self.splits.clone(), cache);
        Ok(Self::from_splits(t_max.max(self.t_max), splits))
    }

    /// A table from explicit prime ideals `(p, f)`, for synthetic fields.
    pub fn from_ideals(ideals: &[(u64, u32)], t_max: f64) -> Self {
        let mut splits: Vec<LocalSplitting> = Vec::new();
        let mut sorted = ideals.to_vec();
        sorted.sort_unstable();
        for (p, f) in sorted {
            match splits.last_mut() {
                Some(s) if s.p == p => s.residue_degrees.push(f as usize),
                _ => splits.push(LocalSplitting { p, residue_degrees: vec![f as usize], skipped: false }),
            }
        }
        Self::from_splits(t_max, splits)
    }

    fn from_splits(t_max: f64, splits: Vec<LocalSplitting>) -> Self {
        let mut entries = Vec::new();
        let mut ideals = Vec::new();
        for s in &splits {
            let lp = (s.p as f64).ln();
            for &f in &s.residue_degrees {
                let Some(base) = checked_pow(s.p, f as u32) else { continue };
                if (base as f64) < t_max {
                    ideals.push(Ideal { norm: base, p: s.p, f: f as u32 });
                }
                let mut norm = base;
                let mut m = 1;
                while (norm as f64) < t_max {
                    let nf = norm as f64;
                    entries.push(NormEntry {
                        x: nf.ln(),
                        logp_f: f as f64 * lp,
                        inv_norm_half: 1.0 / nf.sqrt(),
                        inv_norm: 1.0 / nf,
                        norm,
                        p: s.p,
                        f: f as u32,
                        m,
                    });
                    match norm.checked_mul(base) {
                        Some(v) => norm = v,
                        None => break,
                    }
                    m += 1;
                }
            }
        }
        entries.sort_by_key(|e| (e.norm, e.p, e.f, e.m));
        ideals.sort_unstable();
        let n = entries.len();
        let mut t = NormTable {
            t_max,
            entries,
            ideals,
            splits,
            sum_w: Vec::with_capacity(n + 1),
            sum_xw: Vec::with_capacity(n + 1),
            sum_lp: Vec::with_capacity(n + 1),
            sum_xlp: Vec::with_capacity(n + 1),
            sum_lp_inv: Vec::with_capacity(n + 1),
        };
        let (mut w, mut xw, mut lp, mut xlp, mut lpi) = (0.0, 0.0, 0.0, 0.0, 0.0);
        t.sum_w.push(0.0);
        t.sum_xw.push(0.0);
        t.sum_lp.push(0.0);
        t.sum_xlp.push(0.0);
        t.sum_lp_inv.push(0.0);
        for e in &t.entries {
            let we = e.logp_f * e.inv_norm_half;
            w += we;
            xw += e.x * we;
            lp += e.logp_f;
            xlp += e.x * e.logp_f;
            lpi += e.logp_f * e.inv_norm;
            t.sum_w.push(w);
            t.sum_xw.push(xw);
            t.sum_lp.push(lp);
            t.sum_xlp.push(xlp);
            t.sum_lp_inv.push(lpi);
        }
        t
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn entries(&self) -> &[NormEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Primes left out of every sum because their splitting could not be
    /// determined.
    pub fn skipped_primes(&self) -> Vec<u64> {
        self.splits.iter().filter(|s| s.skipped).map(|s| s.p).collect()
    }

    pub fn splits(&self) -> &[LocalSplitting] {
        &self.splits
    }

    /// Fails unless every norm below `t` is present.
    pub fn require(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::Coverage { needed: t, available: self.t_max });
        }
        Ok(())
    }

    /// Number of entries with `x_e < l`.
    pub fn count_x_below(&self, l: f64) -> usize {
        self.entries.partition_point(|e| e.x < l)
    }

    /// Number of entries with `x_e <= l`.
    pub fn count_x_at_most(&self, l: f64) -> usize {
        self.entries.partition_point(|e| e.x <= l)
    }

    /// Number of entries with norm `< t`.
    pub fn count_norm_below(&self, t: u64) -> usize {
        self.entries.partition_point(|e| e.norm < t)
    }

    /// `Σ w_e` over the first `k` entries, `w_e = log N𝔭 · N𝔭^{-m/2}`.
    pub fn sum_w(&self, k: usize) -> f64 {
        self.sum_w[k]
    }

    pub fn sum_xw(&self, k: usize) -> f64 {
        self.sum_xw[k]
    }

    pub fn sum_lp(&self, k: usize) -> f64 {
        self.sum_lp[k]
    }

    pub fn sum_xlp(&self, k: usize) -> f64 {
        self.sum_xlp[k]
    }

    pub fn sum_lp_inv(&self, k: usize) -> f64 {
        self.sum_lp_inv[k]
    }

    /// Prime ideals of norm below `t_max`, sorted by norm then `p`.
    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    /// Number of prime ideals with `N𝔭 <= t`.
    pub fn ideal_count(&self, t: u64) -> usize {
        self.ideals.partition_point(|i| i.norm <= t)
    }

    /// Distinct prime ideal norms, ascending.
    pub fn ideal_norms(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.ideals.iter().map(|i| i.norm).collect();
        v.dedup();
        v
    }

    /// Distinct values of `N𝔭^m`, ascending.
    pub fn distinct_norms(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.entries.iter().map(|e| e.norm).collect();
        v.dedup();
        v
    }
}

fn checked_pow(base: u64, e: u32) -> Option<u64> {
    let mut r: u64 = 1;
    for _ in 0..e {
        r = r.checked_mul(base)?;
    }
    Some(r)
}

fn split_all(
    ctx: &SplittingContext,
    primes: &[u64],
    mut known: Vec<LocalSplitting>,
    cache: Option<&mut SplittingCache>,
) -> Vec<LocalSplitting> {
    known.retain(|s| primes.binary_search(&s.p).is_ok());
    let start = known.len();
    let cached: Vec<Option<LocalSplitting>> = match &cache {
        Some(c) => primes[start..].iter().map(|&p| c.get(p).cloned()).collect(),
        None => vec![None; primes.len() - start],
    };
    let fresh: Vec<LocalSplitting> = primes[start..]
        .par_iter()
        .zip(cached.into_par_iter())
        .map(|(&p, hit)| hit.unwrap_or_else(|| ctx.split(p)))
        .collect();
    if let Some(c) = cache {
        for s in &fresh {
            c.insert(s.clone());
        }
    }
    known.extend(fresh);
    known
}
