//! Drivers for the three bounds on a single field: the one-step bound
//! `T(K)` of Belabas, Diaz y Diaz and Friedman, the multistep bound
//! `T_1(K)`, and the simplified bound `T_2(K)`.
//!
//! Reported thresholds are integers `T` such that the prime ideals of norm
//! at most `T` generate the class group.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;

use crate::closed_form_bounds::{bound_cap_t0, BoundReport};
use crate::error::{Error, Result};
use crate::explicit_formula::{bdydf_check, t2_check};
use crate::negative_eigenvalue::{ndelta, verify_certificate, Certificate};
use crate::numberfield::norm_table::T_MAX_LIMIT;
use crate::numberfield::{
    field_invariants, DiscSource, FieldInvariants, Ideal, Irreducibility, NormTable, Polynomial,
    SplittingCache, SplittingContext,
};
use crate::SUCCESS_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bdydf,
    Multistep,
    Simplified,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Bdydf => "bdydf",
            Algorithm::Multistep => "multistep",
            Algorithm::Simplified => "simplified",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgorithmResult {
    pub t: u64,
    pub algorithm: Algorithm,
    pub certificate: Option<Certificate>,
    /// Prime ideals of norm at most `t`.
    pub ideal_count: usize,
    pub elapsed: Duration,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultistepOptions {
    pub delta_grid: f64,
    pub initial_n: usize,
    pub n_safety: usize,
}

impl Default for MultistepOptions {
    fn default() -> Self {
        MultistepOptions { delta_grid: 0.0625, initial_n: 8, n_safety: 1 << 14 }
    }
}

type Check = fn(&FieldInvariants, &NormTable, f64) -> Result<f64>;

/// A field together with its splitting data, grown on demand.
#[derive(Debug, Clone)]
pub struct Field {
    poly: Polynomial,
    hash: String,
    inv: FieldInvariants,
    ctx: SplittingContext,
    table: NormTable,
    cap_t0: f64,
    cache: Option<SplittingCache>,
    t_max_limit: f64,
}

impl Field {
    pub fn new(
        poly: Polynomial,
        disc_override: Option<&BigInt>,
        log_disc_override: Option<f64>,
    ) -> Result<Self> {
        Self::with_cache(poly, disc_override, log_disc_override, None)
    }

    /// Like [`Field::new`], reading and recording splitting data in `cache`.
    pub fn with_cache(
        poly: Polynomial,
        disc_override: Option<&BigInt>,
        log_disc_override: Option<f64>,
        mut cache: Option<SplittingCache>,
    ) -> Result<Self> {
        let inv = field_invariants(&poly, disc_override, log_disc_override)?;
        let cap_t0 = bound_cap_t0(inv.log_disc, inv.n)?;
        let ctx = SplittingContext::new(&poly);
        let t_max = (cap_t0.max(64.0) * 1.05 + 2.0).min(T_MAX_LIMIT);
        let table = NormTable::build_with_cache(&ctx, t_max, cache.as_mut())?;
        let hash = poly.content_hash();
        Ok(Field { poly, hash, inv, ctx, table, cap_t0, cache, t_max_limit: T_MAX_LIMIT })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn invariants(&self) -> &FieldInvariants {
        &self.inv
    }

    pub fn table(&self) -> &NormTable {
        &self.table
    }

    pub fn cap_t0(&self) -> f64 {
        self.cap_t0
    }

    pub fn cache(&self) -> Option<&SplittingCache> {
        self.cache.as_ref()
    }

    pub fn cache_mut(&mut self) -> Option<&mut SplittingCache> {
        self.cache.as_mut()
    }

    /// Caps the size to which the norm table may grow.
    pub fn set_t_max_limit(&mut self, limit: f64) {
        self.t_max_limit = limit.min(T_MAX_LIMIT);
    }

    pub fn closed_forms(&self) -> Result<BoundReport> {
        BoundReport::new(self.inv.log_disc, self.inv.n)
    }

    /// Warnings about the field itself, shared by every result.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.inv.disc_source == DiscSource::PolyDiscConservative {
            w.push("discriminant not proven to be the field discriminant; using |disc(P)|".into());
        }
        if self.inv.irreducibility == Irreducibility::Unverified {
            w.push("irreducibility of P not verified".into());
        }
        let skipped = self.table.skipped_primes();
        if !skipped.is_empty() {
            let list: Vec<String> = skipped.iter().map(|p| p.to_string()).collect();
            w.push(format!("primes dividing the index omitted: {}", list.join(",")));
        }
        w
    }

    /// Grows the norm table so that it covers every norm up to `t`.
    pub fn ensure(&mut self, t: f64) -> Result<()> {
        if t < self.table.t_max() {
            return Ok(());
        }
        let target = (t * 1.25 + 2.0).max(2.0 * self.table.t_max()).min(self.t_max_limit);
        if target <= t {
            return Err(Error::Resource(format!(
                "norm table would need to exceed {}",
                self.t_max_limit
            )));
        }
        self.table = self.table.extend_with_cache(&self.ctx, target, self.cache.as_mut())?;
        Ok(())
    }

    fn covered<R>(&mut self, f: impl Fn(&FieldInvariants, &NormTable) -> Result<R>) -> Result<R> {
        loop {
            match f(&self.inv, &self.table) {
                Err(Error::Coverage { needed, .. }) => self.ensure(needed)?,
                r => return r,
            }
        }
    }

    fn search_limit(&self) -> u64 {
        let l = self.inv.log_disc;
        let log_term = 3.9 * (l * l.ln()).powi(2);
        (2.0 * self.cap_t0).max(log_term).max(100.0).min(T_MAX_LIMIT - 2.0).ceil() as u64
    }

    fn finish(
        &mut self,
        algorithm: Algorithm,
        t: u64,
        certificate: Option<Certificate>,
        start: Instant,
        mut flags: Vec<String>,
    ) -> Result<AlgorithmResult> {
        self.ensure(t as f64 + 1.0)?;
        let mut all = self.warnings();
        all.append(&mut flags);
        Ok(AlgorithmResult {
            t,
            algorithm,
            certificate,
            ideal_count: self.table.ideal_count(t),
            elapsed: start.elapsed(),
            flags: all,
        })
    }

    /// Smallest integer `T >= 2` with `check(T) < -ε`, or `None` below
    /// `limit`. The check only jumps where a norm (or, with `squares`, the
    /// square of a norm) enters the strict sums; between those points it is
    /// decreasing, so each stretch is tested at its right end and bisected.
    fn first_integer(&mut self, check: Check, squares: bool, limit: u64) -> Result<Option<u64>> {
        let mut s: u64 = 2;
        loop {
            let top = (self.table.t_max().floor() as u64).min(limit);
            let mut breaks: Vec<u64> = Vec::new();
            for n in self.table.distinct_norms() {
                breaks.push(n + 1);
                if squares {
                    if let Some(q) = n.checked_mul(n) {
                        breaks.push(q);
                        breaks.push(q + 1);
                    }
                }
            }
            breaks.retain(|&b| b > s && b <= top);
            breaks.sort_unstable();
            breaks.dedup();
            breaks.push(top + 1);
            for b in breaks {
                let e = b - 1;
                if e < s {
                    continue;
                }
                if check(&self.inv, &self.table, e as f64)? < -SUCCESS_EPS {
                    let (mut lo, mut hi) = (s, e);
                    while lo < hi {
                        let mid = lo + (hi - lo) / 2;
                        if check(&self.inv, &self.table, mid as f64)? < -SUCCESS_EPS {
                            hi = mid;
                        } else {
                            lo = mid + 1;
                        }
                    }
                    return Ok(Some(lo));
                }
                s = b;
            }
            if top >= limit {
                return Ok(None);
            }
            let next = (2.0 * self.table.t_max()).min(limit as f64 + 2.0);
            self.ensure(next)?;
        }
    }

    fn scan_algorithm(&mut self, algorithm: Algorithm, check: Check, squares: bool) -> Result<AlgorithmResult> {
        let start = Instant::now();
        let limit = self.search_limit();
        let mut flags = Vec::new();
        let t = match self.first_integer(check, squares, limit)? {
            Some(t) => t,
            None => {
                log::warn!("{}: no success up to {limit}", algorithm.as_str());
                flags.push(format!("no success below the search limit {limit}"));
                limit
            }
        };
        self.finish(algorithm, t, None, start, flags)
    }

    /// The one-step bound `T(K)`.
    pub fn bdydf(&mut self) -> Result<AlgorithmResult> {
        self.scan_algorithm(Algorithm::Bdydf, bdydf_check, false)
    }

    /// The simplified bound `T_2(K)`.
    pub fn simplified_bound(&mut self) -> Result<AlgorithmResult> {
        self.scan_algorithm(Algorithm::Simplified, t2_check, true)
    }

    fn try_threshold(&mut self, n: usize, c: u64) -> Result<Option<Certificate>> {
        let delta = (c as f64).ln() / (2 * n) as f64;
        self.try_delta(n, delta)
    }

    fn try_delta(&mut self, n: usize, delta: f64) -> Result<Option<Certificate>> {
        let out = self.covered(|inv, norms| ndelta(inv, norms, delta, n))?;
        Ok(out.certificate)
    }

    /// Largest prime ideal norm below the threshold `c`, i.e. the bound
    /// proved by a success at `c`; at least 2.
    fn norm_below(&self, c: u64) -> u64 {
        self.table.ideal_norms().into_iter().take_while(|&m| m < c).last().unwrap_or(2).max(2)
    }

    /// Smallest threshold `c` in `[t_l, t_h]`, taken among the prime ideal
    /// norms, at which the `N`-step search succeeds, found by bisection, with
    /// its certificate. A success at `c = N𝔭` uses exactly the ideals of
    /// norm below `N𝔭`. When even the top of the range fails, the norms above
    /// `t_h` are tried in turn.
    pub fn optimal_t(&mut self, n: usize, t_l: f64, t_h: f64) -> Result<(u64, Certificate)> {
        self.ensure(t_h + 2.0)?;
        let cands: Vec<u64> = self
            .table
            .ideal_norms()
            .into_iter()
            .filter(|&c| c as f64 >= t_l && c as f64 <= t_h)
            .collect();
        if let Some(&top) = cands.last() {
            if let Some(mut cert) = self.try_threshold(n, top)? {
                let (mut lo, mut hi) = (0, cands.len() - 1);
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    match self.try_threshold(n, cands[mid])? {
                        Some(c) => {
                            hi = mid;
                            cert = c;
                        }
                        None => lo = mid + 1,
                    }
                }
                return Ok((cands[hi], cert));
            }
        }
        log::debug!("N = {n}: no success in [{t_l}, {t_h}], scanning upward");
        let mut floor = cands.last().copied().unwrap_or(0).max(t_h.floor() as u64);
        loop {
            let next = self.table.ideal_norms().into_iter().find(|&c| c > floor);
            match next {
                Some(c) => {
                    if let Some(cert) = self.try_threshold(n, c)? {
                        return Ok((c, cert));
                    }
                    floor = c;
                }
                None => {
                    let t = 2.0 * self.table.t_max();
                    self.ensure(t)?;
                }
            }
        }
    }

    /// The multistep bound `T_1(K)`: escalate `δ` with `N` fixed until the
    /// search succeeds, optimize the threshold, then keep doubling `N` while
    /// that improves it or while it exceeds the cap `T_0`.
    pub fn multistep_bound(&mut self, opts: &MultistepOptions) -> Result<AlgorithmResult> {
        if !(opts.delta_grid > 0.0) || opts.initial_n == 0 || opts.n_safety < opts.initial_n {
            return Err(Error::Domain(format!("invalid multistep options {opts:?}")));
        }
        let start = Instant::now();
        let t0 = self.cap_t0;
        let g = opts.delta_grid;
        let mut n = opts.initial_n;
        let nf = n as f64;
        let mut delta = g;
        while self.try_delta(n, delta)?.is_none() {
            delta += g;
            if (2.0 * nf * delta).exp() > T_MAX_LIMIT {
                return Err(Error::Resource(format!("no success with N = {n} below {T_MAX_LIMIT}")));
            }
        }
        let mut flags = Vec::new();
        let (mut th, mut cert) = self.optimal_t(n, (2.0 * nf * (delta - g)).exp(), (2.0 * nf * delta).exp())?;
        let mut t = th + 1;
        while th < t || self.norm_below(t) as f64 > t0 {
            t = th;
            if self.norm_below(t) <= 2 {
                if t0 < 2.0 {
                    flags.push(format!("cap T_0 = {t0:.3} is below the smallest possible bound"));
                }
                break;
            }
            if 2 * n > opts.n_safety {
                log::warn!("N would exceed {}; stopping at T = {}", opts.n_safety, self.norm_below(t));
                flags.push(format!("safety cap N <= {} reached", opts.n_safety));
                break;
            }
            n *= 2;
            let (h, c) = self.optimal_t(n, 1.0, t as f64)?;
            th = h;
            cert = c;
        }
        cert.field_hash = self.hash.clone();
        let q = self.covered(|inv, norms| verify_certificate(inv, norms, &cert))?;
        if !(q < -SUCCESS_EPS) {
            return Err(Error::Integrity(format!("certificate does not verify: q = {q:e}")));
        }
        let reported = self.norm_below(t);
        if reported as f64 > t0 {
            flags.push(format!("result exceeds the cap T_0 = {t0:.3}"));
        }
        self.finish(Algorithm::Multistep, reported, Some(cert), start, flags)
    }

    /// Prime ideals of norm at most `t`, sorted by norm then `p`.
    pub fn list_generators(&mut self, t: u64) -> Result<Vec<Ideal>> {
        self.ensure(t as f64 + 1.0)?;
        let k = self.table.ideal_count(t);
        Ok(self.table.ideals()[..k].to_vec())
    }
}
