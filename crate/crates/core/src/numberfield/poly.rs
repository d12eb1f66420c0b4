//! Monic integer polynomials: parsing, discriminant and real-root counting.
//!
//! All arithmetic here is exact. Sturm sequences are built with signed
//! pseudo-remainders whose multiplier is forced positive, and every term is
//! divided by its content to keep coefficient growth in check.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A monic polynomial with integer coefficients; `coeffs[i]` is the
/// coefficient of `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Builds a polynomial from coefficients in increasing degree order.
    /// Trailing zeros are dropped before the monic and degree checks.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Result<Self> {
        trim(&mut coeffs);
        if coeffs.len() < 3 {
            return Err(Error::DegreeTooSmall(coeffs.len().saturating_sub(1)));
        }
        let lead = coeffs.last().unwrap();
        if !lead.is_one() {
            return Err(Error::NotMonic(lead.to_string()));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Hex SHA-256 of the canonical coefficient list; identifies the
    /// polynomial in caches, certificates and batch output.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_bracket_string().as_bytes());
        hex::encode(hasher.finalize())
    }

    /// `[c0, c1, ..., 1]`
    pub fn to_bracket_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        eval(&self.coeffs, x)
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        derivative(&self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 if show_coeff => write!(f, "*x")?,
                1 => write!(f, "x")?,
                _ if show_coeff => write!(f, "*x^{i}")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let coeffs = if text.trim_start().starts_with('[') {
            parse_bracket(text)?
        } else {
            Parser::new(text).parse()?
        };
        Polynomial::from_coeffs(coeffs)
    }
}

fn parse_bracket(text: &str) -> Result<Vec<BigInt>> {
    let start = text.find('[').unwrap();
    let end = text
        .rfind(']')
        .ok_or_else(|| Error::Parse { pos: text.len(), msg: "missing ']'".into() })?;
    if !text[end + 1..].trim().is_empty() {
        return Err(Error::Parse { pos: end + 1, msg: "trailing input after ']'".into() });
    }
    let body = &text[start + 1..end];
    let mut coeffs = Vec::new();
    let mut offset = start + 1;
    for item in body.split(',') {
        let trimmed = item.trim();
        let pos = offset + item.find(trimmed).unwrap_or(0);
        if trimmed.is_empty() {
            return Err(Error::Parse { pos, msg: "empty coefficient".into() });
        }
        if trimmed.contains(['.', 'e', 'E', '/']) {
            return Err(Error::Parse { pos, msg: format!("non-integer coefficient '{trimmed}'") });
        }
        let value = BigInt::from_str(trimmed)
            .map_err(|_| Error::Parse { pos, msg: format!("malformed coefficient '{trimmed}'") })?;
        coeffs.push(value);
        offset += item.len() + 1;
    }
    Ok(coeffs)
}

/// Recursive-descent parser for sums of monomials `c*x^k`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Some(BigInt::from_str(digits).unwrap())
    }

    fn exponent(&mut self) -> Result<usize> {
        let at = self.pos;
        match self.integer() {
            Some(e) => usize::try_from(e).or_else(|_| {
                self.pos = at;
                self.err("exponent too large")
            }),
            None => self.err("expected exponent"),
        }
    }

    fn parse(mut self) -> Result<Vec<BigInt>> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return self.err(format!("expected '+' or '-', found '{}'", c as char)),
            };
            first = false;
            let (c, k) = self.term()?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] += c * sign;
        }
        Ok(coeffs)
    }

    fn term(&mut self) -> Result<(BigInt, usize)> {
        let coeff = self.integer();
        if let Some(b'.') = self.src.get(self.pos).copied() {
            return self.err("non-integer coefficient");
        }
        let mut has_x = false;
        match self.peek() {
            Some(b'*') if coeff.is_some() => {
                self.pos += 1;
                if self.peek() != Some(b'x') {
                    return self.err("expected 'x' after '*'");
                }
                self.pos += 1;
                has_x = true;
            }
            Some(b'x') => {
                self.pos += 1;
                has_x = true;
            }
            _ => {}
        }
        if coeff.is_none() && !has_x {
            return match self.peek() {
                Some(c) => self.err(format!("unexpected character '{}'", c as char)),
                None => self.err("unexpected end of input"),
            };
        }
        let mut k = usize::from(has_x);
        if has_x {
            if self.peek() == Some(b'^') {
                self.pos += 1;
                k = self.exponent()?;
            } else if self.src[self.pos..].starts_with(b"**") {
                self.pos += 2;
                k = self.exponent()?;
            }
        }
        Ok((coeff.unwrap_or_else(BigInt::one), k))
    }
}

pub(crate) fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub(crate) fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination with row pivoting.
pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Resultant of two nonzero integer polynomials via the Sylvester matrix.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// `disc(P) = (-1)^{n(n-1)/2} Res(P, P')` for monic `P`.
pub fn discriminant_of_polynomial(p: &Polynomial) -> BigInt {
    let n = p.degree();
    let res = resultant(p.coeffs(), &p.derivative());
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Pseudo-remainder of `a` by `b` scaled by `|lc(b)|^(deg a - deg b + 1)`,
/// so the sign of the remainder matches the true remainder.
fn signed_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut r = a.to_vec();
    let mut steps = 0usize;
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        for (i, c) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * c;
        }
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    let total = a.len() - db;
    // Multiplier so far is lc^steps; complete it to lc^total, then fix sign.
    for _ in steps..total {
        for c in r.iter_mut() {
            *c *= &lc;
        }
    }
    if lc.is_negative() && total % 2 == 1 {
        for c in r.iter_mut() {
            *c = -&*c;
        }
    }
    r
}

/// Sturm chain of `p` with content removed from every member.
fn sturm_chain(p: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let k = chain.len();
        let mut r = signed_prem(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -&*c;
        }
        let g = content(&r);
        if !g.is_one() {
            for c in r.iter_mut() {
                *c /= &g;
            }
        }
        chain.push(r);
    }
    if chain.last().unwrap().len() > 1 {
        return Err(Error::NotSquarefree);
    }
    Ok(chain)
}

fn sign_changes(signs: impl Iterator<Item = Sign>) -> usize {
    let mut count = 0;
    let mut last = Sign::NoSign;
    for s in signs.filter(|s| *s != Sign::NoSign) {
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn neg_sign(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
        Sign::NoSign => Sign::NoSign,
    }
}

/// Real signature `(r1, r2)` from an exact Sturm sequence.
pub fn signature(p: &Polynomial) -> Result<(usize, usize)> {
    let chain = sturm_chain(p.coeffs())?;
    let at_pos_inf = sign_changes(chain.iter().map(|q| q.last().unwrap().sign()));
    let at_neg_inf = sign_changes(chain.iter().map(|q| {
        let s = q.last().unwrap().sign();
        if (q.len() - 1) % 2 == 1 {
            neg_sign(s)
        } else {
            s
        }
    }));
    let r1 = at_neg_inf - at_pos_inf;
    let n = p.degree();
    Ok((r1, (n - r1) / 2))
}

/// Integer roots of `p`, found by exact Sturm bisection on integer
/// intervals. For monic `p` these are all of its rational roots.
pub fn integer_roots(p: &Polynomial) -> Result<Vec<BigInt>> {
    let chain = sturm_chain(p.coeffs())?;
    let count_at = |x: &BigInt| sign_changes(chain.iter().map(|q| eval(q, x).sign()));
    // Cauchy bound: every root has |r| < 1 + max |c_i|.
    let bound = p.coeffs().iter().map(|c| c.abs()).max().unwrap() + BigInt::one();
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    // Roots counted in the half-open interval (lo, hi].
    while let Some((lo, hi)) = stack.pop() {
        let n = count_at(&lo) - count_at(&hi);
        if n == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if p.eval(&hi).is_zero() {
                roots.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    Ok(roots)
}
