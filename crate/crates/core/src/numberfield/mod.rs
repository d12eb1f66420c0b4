//! Arithmetic of `K = Q[x]/(P)`: degree, signature, discriminant and the
//! splitting of rational primes, assembled into a [`NormTable`].

pub mod cache;
pub mod factor;
pub mod modp;
pub mod norm_table;
pub mod poly;
pub mod sieve;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use factor::{small_prime, square_divisors};
use modp::{kronecker, Fp};

pub use cache::SplittingCache;
pub use modp::dedekind_index_test;
pub use norm_table::{Ideal, NormEntry, NormTable};
pub use poly::{discriminant_of_polynomial, signature, Polynomial};

/// Parses `"x^3 + 5*x - 7"` or `"[-7, 5, 0, 1]"`.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    text.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscSource {
    ComputedExact,
    UserSupplied,
    PolyDiscConservative,
}

impl DiscSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiscSource::ComputedExact => "computed_exact",
            DiscSource::UserSupplied => "user_supplied",
            DiscSource::PolyDiscConservative => "poly_disc_conservative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// No rational root and either degree at most 3 or factor degrees modulo
    /// small primes that no proper factor can match.
    Proven,
    /// No obstruction found; accepted with a warning.
    Unverified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldInvariants {
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    /// Natural log of the absolute discriminant of K (or of the value used
    /// in its place, see `disc_source`).
    pub log_disc: f64,
    pub disc_exact: Option<BigInt>,
    pub disc_source: DiscSource,
    pub irreducibility: Irreducibility,
}

/// Natural logarithm of `|m|` for integers of any size.
pub fn big_log(m: &BigInt) -> f64 {
    let a = m.abs();
    let bits = a.bits();
    if bits < 1000 {
        return a.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (&a >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fundamental discriminant of the quadratic field with polynomial
/// discriminant `d`, when the square part of `d` can be fully resolved.
fn fundamental_quadratic_disc(d: &BigInt) -> Option<BigInt> {
    let sq = square_divisors(d);
    if !sq.complete {
        return None;
    }
    let mut k = d.clone();
    for p in &sq.primes {
        let p2 = p * p;
        while (&k % &p2).is_zero() {
            k /= &p2;
        }
    }
    if k.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        Some(k)
    } else {
        Some(k * 4)
    }
}

/// Log of Minkowski's lower bound `((π/4)^r2 n^n / n!)^2` for `|Δ_K|`.
fn minkowski_log_disc(n: usize, r2: usize) -> f64 {
    let nf = n as f64;
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    2.0 * (nf * nf.ln() - log_fact + r2 as f64 * (std::f64::consts::PI / 4.0).ln())
}

/// Factor degrees of `P` modulo each good prime up to 200 are compared:
/// a proper factor of degree `d` would need `d` to be a subset sum of the
/// degrees at every prime.
fn check_irreducible(p: &Polynomial, disc: &BigInt) -> Result<Irreducibility> {
    let roots = poly::integer_roots(p)?;
    if let Some(r) = roots.first() {
        return Err(Error::Reducible(format!("x = {r} is a rational root")));
    }
    let n = p.degree();
    if n <= 3 {
        return Ok(Irreducibility::Proven);
    }
    let mut possible = vec![true; n];
    possible[0] = false;
    for q in sieve::primes_below(200, sieve::DEFAULT_SEGMENT) {
        if (disc % q).is_zero() {
            continue;
        }
        let fp = Fp::new(q);
        let degrees = fp.factor_degrees(&fp.reduce(p.coeffs()));
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for &d in &degrees {
            for s in (d..=n).rev() {
                sums[s] |= sums[s - d];
            }
        }
        for (d, flag) in possible.iter_mut().enumerate() {
            *flag &= sums[d];
        }
        if !possible.iter().any(|&b| b) {
            return Ok(Irreducibility::Proven);
        }
    }
    Ok(Irreducibility::Unverified)
}

/// Degree, signature and discriminant of `K`, with the discriminant sourced
/// from (in order) the overrides, the exact quadratic formula, Dedekind's
/// criterion at every prime whose square divides `disc(P)`, and finally
/// `|disc(P)|` itself as a conservative stand-in.
pub fn field_invariants(
    p: &Polynomial,
    disc_override: Option<&BigInt>,
    log_disc_override: Option<f64>,
) -> Result<FieldInvariants> {
    let n = p.degree();
    let pdisc = discriminant_of_polynomial(p);
    if pdisc.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let irreducibility = check_irreducible(p, &pdisc)?;
    let (r1, r2) = signature(p)?;
    if irreducibility == Irreducibility::Unverified && big_log(&pdisc) < minkowski_log_disc(n, r2) {
        return Err(Error::Reducible(format!(
            "|disc(P)| = {} is below the smallest discriminant of a degree {n} field",
            pdisc.abs()
        )));
    }
    let expected_sign = if r2 % 2 == 0 { 1 } else { -1 };
    let make = |log_disc, disc_exact, disc_source| FieldInvariants {
        n,
        r1,
        r2,
        log_disc,
        disc_exact,
        disc_source,
        irreducibility,
    };

    if let Some(d) = disc_override {
        if d.is_zero() {
            return Err(Error::Discriminant("discriminant cannot be 0".into()));
        }
        let sign = if d.is_negative() { -1 } else { 1 };
        if sign != expected_sign {
            return Err(Error::Discriminant(format!(
                "sign of {d} contradicts signature ({r1}, {r2})"
            )));
        }
        let (q, r) = pdisc.div_rem(d);
        if !r.is_zero() || !q.is_positive() || q.sqrt().pow(2) != q {
            return Err(Error::Discriminant(format!(
                "disc(P) / {d} is not a perfect square"
            )));
        }
        return Ok(make(big_log(d), Some(d.clone()), DiscSource::UserSupplied));
    }
    if let Some(ld) = log_disc_override {
        if !(ld.is_finite() && ld > 0.0) {
            return Err(Error::Discriminant(format!("log discriminant {ld} must be positive")));
        }
        return Ok(make(ld, None, DiscSource::UserSupplied));
    }
    if n == 2 {
        if let Some(d) = fundamental_quadratic_disc(&pdisc) {
            return Ok(make(big_log(&d), Some(d), DiscSource::ComputedExact));
        }
    }
    let sq = square_divisors(&pdisc);
    let index_one = sq.complete
        && sq.primes.iter().all(|q| match small_prime(q) {
            Some(q) => dedekind_index_test(p.coeffs(), q),
            None => false,
        });
    if index_one {
        Ok(make(big_log(&pdisc), Some(pdisc), DiscSource::ComputedExact))
    } else {
        log::warn!("index of Z[x]/(P) not shown to be 1; using |disc(P)|");
        Ok(make(big_log(&pdisc), None, DiscSource::PolyDiscConservative))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSplitting {
    pub p: u64,
    pub residue_degrees: Vec<usize>,
    pub skipped: bool,
}

/// Precomputed data for splitting many primes of the same field.
#[derive(Debug, Clone)]
pub struct SplittingContext {
    coeffs: Vec<BigInt>,
    pdisc: BigInt,
    quadratic_disc: Option<BigInt>,
}

impl SplittingContext {
    pub fn new(p: &Polynomial) -> Self {
        let pdisc = discriminant_of_polynomial(p);
        let quadratic_disc = if p.degree() == 2 {
            fundamental_quadratic_disc(&pdisc)
        } else {
            None
        };
        SplittingContext { coeffs: p.coeffs().to_vec(), pdisc, quadratic_disc }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn split(&self, p: u64) -> LocalSplitting {
        let residue_degrees = |degrees| LocalSplitting { p, residue_degrees: degrees, skipped: false };
        if let Some(d) = &self.quadratic_disc {
            return residue_degrees(match kronecker(d, p) {
                1 => vec![1, 1],
                -1 => vec![2],
                _ => vec![1],
            });
        }
        let fp = Fp::new(p);
        let pbar = fp.reduce(&self.coeffs);
        if !(&self.pdisc % p).is_zero() {
            return residue_degrees(fp.factor_degrees(&pbar));
        }
        if !dedekind_index_test(&self.coeffs, p) {
            return LocalSplitting { p, residue_degrees: Vec::new(), skipped: true };
        }
        let radical = fp
            .squarefree_decomposition(&pbar)
            .into_iter()
            .fold(vec![1], |acc, (g, _)| fp.mul(&acc, &g));
        let mut degrees = fp.factor_degrees(&radical);
        degrees.sort_unstable();
        residue_degrees(degrees)
    }
}

/// Splitting of `p` in `K`; see [`SplittingContext`] for repeated use.
pub fn local_splitting(p: &Polynomial, prime: u64) -> LocalSplitting {
    SplittingContext::new(p).split(prime)
}
