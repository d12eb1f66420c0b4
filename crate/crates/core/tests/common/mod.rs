#![allow(dead_code)]

use std::f64::consts::PI;

pub const CUBIC: &str = "x^3 + 559752270111028720*x + 55137512477462689";

const GAMMA: f64 = 0.577_215_664_901_532_9;
const CATALAN: f64 = 0.915_965_594_177_219;

pub fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn squarefree(n: i64) -> bool {
    let n = n.abs();
    let mut d = 2;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Fundamental discriminants with `|d| <= bound`, ordered by `|d|` then sign.
pub fn fundamental_discs(bound: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (-bound..=bound).filter(|&d| is_fundamental(d)).collect();
    v.sort_by_key(|&d| (d.abs(), d > 0));
    v
}

/// A defining polynomial of discriminant exactly `d`.
pub fn quadratic_poly(d: i64) -> String {
    if d.rem_euclid(4) == 1 {
        let c = (1 - d) / 4;
        format!("x^2 - x + {c}").replace("+ -", "- ")
    } else {
        let c = -d / 4;
        format!("x^2 + {c}").replace("+ -", "- ")
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Kronecker symbol `(d/p)` for a prime `p`, by Euler's criterion.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Prime ideal norms of `Q(√d)` below `limit`, one entry per ideal.
pub fn quadratic_ideal_norms(d: i64, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in primes_upto(limit) {
        match kronecker(d, p) {
            1 => out.extend([p, p]),
            0 => out.push(p),
            _ => {
                if p * p < limit {
                    out.push(p * p)
                }
            }
        }
    }
    out
}

/// The one-step check at integer `t`, summing every `(𝔭, m)` from scratch.
pub fn brute_bdydf_check(d: i64, norms: &[u64], t: u64) -> f64 {
    let l = (t as f64).ln();
    let r1 = if d > 0 { 2.0 } else { 0.0 };
    let c8 = GAMMA + (8.0 * PI).ln();
    let mut s = 0.0;
    for &nrm in norms {
        let ln = (nrm as f64).ln();
        let mut q = nrm as u128;
        let mut m = 1.0;
        while q < t as u128 {
            s += 2.0 * ln / (q as f64).sqrt() * (1.0 - m * ln / l);
            q *= nrm as u128;
            m += 1.0;
        }
    }
    (d.abs() as f64).ln() - 2.0 * c8 + PI * PI / l - (PI * l / 2.0 - 4.0 * CATALAN) / l * r1 - s
}

/// First integer `t >= 2` where the brute-force check is below `-1e-9`.
pub fn brute_bdydf(d: i64) -> u64 {
    let mut limit = 1024;
    let mut norms = quadratic_ideal_norms(d, limit);
    let mut t = 2;
    loop {
        if t >= limit {
            limit *= 4;
            norms = quadratic_ideal_norms(d, limit);
        }
        if brute_bdydf_check(d, &norms, t) < -1e-9 {
            return t;
        }
        t += 1;
    }
}

/// Small irreducible-looking polynomials of degrees 2 to 6 (reducible ones
/// are rejected later by the library and skipped by callers).
pub fn corpus() -> Vec<String> {
    let mut v = Vec::new();
    for d in fundamental_discs(400).into_iter().take(70) {
        v.push(quadratic_poly(d));
    }
    for d in [100_003i64, -100_003, 1_000_001 * 4 + 1, -9_999_991, 77_777_777 * 4 + 1] {
        if is_fundamental(d) {
            v.push(quadratic_poly(d));
        }
    }
    for a in -4i64..=4 {
        for b in 1i64..=7 {
            v.push(format!("x^3 + {a}*x + {b}").replace("+ -", "- "));
        }
    }
    for a in -3i64..=3 {
        for b in [1i64, 2, 3, 5, 7] {
            v.push(format!("x^4 + {a}*x + {b}").replace("+ -", "- "));
        }
    }
    for a in [-3i64, -1, 1, 3] {
        for b in [1i64, 2, 5] {
            v.push(format!("x^4 + {a}*x^2 + {b}").replace("+ -", "- "));
        }
    }
    for a in -3i64..=3 {
        for b in [1i64, 2, 3, 5] {
            v.push(format!("x^5 + {a}*x + {b}").replace("+ -", "- "));
        }
    }
    for a in -3i64..=3 {
        for b in [1i64, 2, 3] {
            v.push(format!("x^6 + {a}*x + {b}").replace("+ -", "- "));
        }
    }
    v
}

/// Fields with `log Δ` of a few hundred.
pub fn large_fields() -> Vec<String> {
    let mut v = Vec::new();
    for k in 0..10u32 {
        v.push(format!("x^2 + 1{}{}", "0".repeat(87), 7 + 2 * k));
        v.push(format!("x^2 - x - 3{}{}", "1".repeat(88 + k as usize % 3), k));
    }
    for k in 1..=8u32 {
        v.push(format!("x^3 - 123456789012345678901234567890{k}*x - 9876543210987654321{k}"));
        v.push(format!("x^4 + 31415926535897932384626{k}*x + 27182818284590452353602{k}"));
    }
    for k in 1..=4u32 {
        v.push(format!("x^5 + 1618033988749894848{k}*x + 1414213562373095048{k}"));
    }
    v
}
