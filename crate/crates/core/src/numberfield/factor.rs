//! Partial factorization of discriminants, enough to find the primes whose
//! square divides an integer or to report that this could not be decided.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1 << 20;
const RHO_ITERATIONS: u64 = 1 << 16;

/// Primes `p` with `p^2 | m` found by [`square_divisors`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareDivisors {
    pub primes: Vec<BigInt>,
    /// False when some cofactor could be neither factored nor shown to be
    /// squarefree; the list may then be incomplete.
    pub complete: bool,
}

/// Finds every prime whose square divides `m` (trial division, then
/// Miller-Rabin, perfect-square detection and bounded Pollard-Brent rho).
pub fn square_divisors(m: &BigInt) -> SquareDivisors {
    let mut n = m.abs();
    let mut primes = Vec::new();
    if n.is_zero() {
        return SquareDivisors { primes, complete: false };
    }
    let mut d = 2u64;
    while d < TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e >= 2 {
            primes.push(bd);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut complete = true;
    let b = BigInt::from(TRIAL_LIMIT);
    let cube = &b * &b * &b;
    let mut stack = vec![n];
    let mut pending: Vec<BigInt> = Vec::new();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if c < BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT) || is_probable_prime(&c) {
            // Every prime factor left exceeds the trial limit, so a cofactor
            // below its square is itself prime.
            pending.push(c);
            continue;
        }
        let r = c.sqrt();
        if &r * &r == c {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        if c < cube {
            // Not prime, not a square, and too small to hold p^2 * q with
            // p, q above the trial limit.
            pending.push(c);
            continue;
        }
        match pollard_brent(&c) {
            Some(f) => {
                let g = &c / &f;
                stack.push(f);
                stack.push(g);
            }
            None => complete = false,
        }
    }
    // Composite cofactors are squarefree here, so equal entries reveal
    // repeated primes and pairwise gcds catch shared factors.
    pending.sort();
    for i in 0..pending.len() {
        for j in i + 1..pending.len() {
            let g = pending[i].gcd(&pending[j]);
            if !g.is_one() && !primes.contains(&g) {
                if is_probable_prime(&g) {
                    primes.push(g);
                } else {
                    complete = false;
                }
            }
        }
    }
    primes.sort();
    SquareDivisors { primes, complete }
}

fn mod_pow(b: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    b.modpow(e, m)
}

/// Miller-Rabin with the first twelve prime bases; deterministic below
/// 3.3e24 and overwhelmingly reliable beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        let bb = BigInt::from(b);
        if *n == bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &b in &BASES {
        let mut x = mod_pow(&BigInt::from(b), &d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; returns a nontrivial factor or gives up
/// after a fixed number of iterations per seed.
fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for seed in 1u64..=4 {
        let c = BigInt::from(seed);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        let mut iterations = 0u64;
        while g.is_one() && iterations < RHO_ITERATIONS {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = q * (&x - &y).abs() % n;
                }
                g = q.gcd(n);
                k += m;
            }
            iterations += r;
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// `Some(p)` when `p` fits the word-sized modular routines.
pub fn small_prime(p: &BigInt) -> Option<u64> {
    p.to_u64().filter(|&v| v < 1 << 32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn sq(m: &str) -> SquareDivisors {
        square_divisors(&BigInt::from_str(m).unwrap())
    }

    #[test]
    fn small_values() {
        assert_eq!(sq("-108").primes, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(sq("5").primes, Vec::<BigInt>::new());
        assert!(sq("5").complete);
        assert_eq!(sq("-12").primes, vec![BigInt::from(2)]);
    }

    #[test]
    fn large_prime_square_is_found() {
        // 1000003^2 * 7
        let q = BigInt::from(1_000_003u64);
        let m = &q * &q * 7;
        let r = square_divisors(&m);
        assert!(r.complete);
        assert_eq!(r.primes, vec![q]);
    }

    #[test]
    fn cubic_discriminant_is_prime() {
        let d = BigInt::from_str("-701532155228068267977226255775854204753089701687381467").unwrap();
        assert!(is_probable_prime(&d.abs()));
        let r = square_divisors(&d);
        assert!(r.complete);
        assert!(r.primes.is_empty());
    }

    #[test]
    fn semiprime_cofactor_is_squarefree() {
        let p = BigInt::from_str("1000000007").unwrap();
        let q = BigInt::from_str("998244353").unwrap();
        let r = square_divisors(&(&p * &q * 9));
        assert!(r.complete);
        assert_eq!(r.primes, vec![BigInt::from(3)]);
    }

    #[test]
    fn miller_rabin() {
        let primes = [2u64, 3, 5, 1_000_003, 2_147_483_647];
        for p in primes {
            assert!(is_probable_prime(&BigInt::from(p)));
        }
        for c in [1u64, 4, 561, 1_000_001, 3_215_031_751] {
            assert!(!is_probable_prime(&BigInt::from(c)));
        }
    }
}
