//! Dense polynomials over F_p for word-sized primes.
//!
//! Polynomials are `Vec<u64>` in increasing degree order with no trailing
//! zeros; the zero polynomial is the empty vector. Every routine expects
//! `p < 2^32` so that products of two residues fit in a `u64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub type Poly = Vec<u64>;

#[derive(Debug, Clone, Copy)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < 1 << 32, "prime {p} outside the supported range");
        Fp { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow_mod(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_mod(r, a);
            }
            a = self.mul_mod(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow_mod(a, self.p - 2)
    }

    /// Reduces integer coefficients modulo `p`.
    pub fn reduce(&self, coeffs: &[BigInt]) -> Poly {
        let m = BigInt::from(self.p);
        let mut out: Poly = coeffs.iter().map(|c| c.mod_floor(&m).to_u64().unwrap()).collect();
        trim(&mut out);
        out
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Poly {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + self.p - y) % self.p;
        }
        trim(&mut out);
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let lead_inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul_mod(r[k + db], lead_inv);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - self.mul_mod(c, bj)) % self.p;
            }
        }
        r.truncate(db);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Poly {
        self.divrem(a, b).1
    }

    pub fn div_exact(&self, a: &[u64], b: &[u64]) -> Poly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_empty());
        q
    }

    pub fn monic(&self, a: &[u64]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lead) => {
                let inv = self.inv(lead);
                a.iter().map(|&c| self.mul_mod(c, inv)).collect()
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Poly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &[u64]) -> Poly {
        let mut out: Poly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul_mod(c, i as u64 % self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// `base^e mod m` by square and multiply.
    pub fn pow_rem(&self, base: &[u64], mut e: u64, m: &[u64]) -> Poly {
        let mut result = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.rem(&self.mul(&result, &b), m);
            }
            e >>= 1;
            if e > 0 {
                b = self.rem(&self.mul(&b, &b), m);
            }
        }
        result
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
    /// `a = prod g^e`, each `g` squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self, a: &[u64]) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        self.sqf_into(&self.monic(a), 1, &mut out);
        out
    }

    fn sqf_into(&self, a: &[u64], mult: u32, out: &mut Vec<(Poly, u32)>) {
        if a.len() <= 1 {
            return;
        }
        let da = self.derivative(a);
        if da.is_empty() {
            self.sqf_into(&self.pth_root(a), mult * self.p as u32, out);
            return;
        }
        let mut c = self.gcd(a, &da);
        let mut w = self.div_exact(a, &c);
        let mut i = 1;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let factor = self.div_exact(&w, &y);
            if factor.len() > 1 {
                out.push((factor, i * mult));
            }
            c = self.div_exact(&c, &y);
            w = y;
            i += 1;
        }
        if c.len() > 1 {
            self.sqf_into(&self.pth_root(&c), mult * self.p as u32, out);
        }
    }

    /// For `a = b(x)^p`, returns `b`. Over the prime field `c^p = c`.
    fn pth_root(&self, a: &[u64]) -> Poly {
        let p = self.p as usize;
        a.iter().step_by(p).copied().collect()
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, in
    /// increasing order, by distinct-degree factorization.
    pub fn factor_degrees(&self, f: &[u64]) -> Vec<usize> {
        let mut f = self.monic(f);
        let mut degrees = Vec::new();
        let x: Poly = vec![0, 1];
        let mut h = x.clone();
        let mut d = 1;
        while f.len() > 2 * d {
            h = self.pow_rem(&h, self.p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            let k = g.len() - 1;
            if k > 0 {
                degrees.extend(std::iter::repeat_n(d, k / d));
                f = self.div_exact(&f, &g);
                h = self.rem(&h, &f);
            }
            d += 1;
        }
        if f.len() > 1 {
            degrees.push(f.len() - 1);
        }
        degrees
    }
}

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Dedekind's criterion: true when `p` does not divide the index of
/// `Z[x]/(P)` in the maximal order.
pub fn dedekind_index_test(coeffs: &[BigInt], p: u64) -> bool {
    let fp = Fp::new(p);
    let pbar = fp.reduce(coeffs);
    let parts = fp.squarefree_decomposition(&pbar);
    if parts.iter().all(|(_, e)| *e == 1) {
        return true;
    }
    let mut g: Poly = vec![1];
    let mut h: Poly = vec![1];
    for (factor, e) in &parts {
        g = fp.mul(&g, factor);
        for _ in 1..*e {
            h = fp.mul(&h, factor);
        }
    }
    // F = (P - g*h)/p with g, h lifted to [0, p); only F mod p is needed, so
    // work modulo p^2.
    let gh = int_mul(&g, &h);
    let p2 = BigInt::from(p) * BigInt::from(p);
    let mut f: Poly = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lifted = gh.get(i).cloned().unwrap_or_else(BigInt::zero);
            let diff = (c - lifted).mod_floor(&p2);
            debug_assert!((&diff % p).is_zero());
            (diff / p).to_u64().unwrap()
        })
        .collect();
    trim(&mut f);
    let common = fp.gcd(&g, &h);
    fp.gcd(&f, &common).len() == 1
}

/// Product over Z of two polynomials with residues as coefficients.
fn int_mul(a: &[u64], b: &[u64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += BigInt::from(x) * BigInt::from(y);
        }
    }
    out
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: &BigInt, p: u64) -> i32 {
    if p == 2 {
        let r = d.mod_floor(&BigInt::from(8)).to_u64().unwrap();
        return match r {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let fp = Fp::new(p);
    let a = d.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if a == 0 {
        return 0;
    }
    if fp.pow_mod(a, (p - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}
