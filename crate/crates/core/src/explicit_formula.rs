//! The explicit formula as a test: check functions whose negative values
//! certify that prime ideals of norm below `T` generate the class group,
//! and the linear form `ℓ_K` on piecewise-linear weights.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numberfield::{FieldInvariants, NormTable};
use crate::special_functions::{ij_simplified, ij_triangle, Constants};

/// Coverage test with a little slack for `exp(log t)` round trips.
fn cover(norms: &NormTable, l: f64) -> Result<()> {
    let t = l.exp();
    if t > norms.t_max() * (1.0 + 1e-12) {
        return Err(Error::Coverage { needed: t, available: norms.t_max() });
    }
    Ok(())
}

fn check_l(l: f64) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Domain(format!("L = {l} must be positive")));
    }
    Ok(())
}

/// `2 Σ_{x_e < L} w_e (1 - x_e/L)` from prefix sums.
fn triangle_prime_sum(norms: &NormTable, l: f64) -> f64 {
    let k = norms.count_x_below(l);
    2.0 * (norms.sum_w(k) - norms.sum_xw(k) / l)
}

fn archimedean(inv: &FieldInvariants) -> f64 {
    inv.log_disc - Constants::gamma_log_8pi() * inv.n as f64
}

/// Right side minus left side of the explicit formula for the triangle
/// weight `F_L`, with `I(F_L)` and `J(F_L)` evaluated exactly. Negative
/// values mean `T = e^L` is a bound.
pub fn grh_check(inv: &FieldInvariants, norms: &NormTable, l: f64) -> Result<f64> {
    check_l(l)?;
    cover(norms, l)?;
    let (i, j) = ij_triangle(l.exp())?;
    Ok(archimedean(inv) + i / l * inv.n as f64 - j / l * inv.r1 as f64
        - triangle_prime_sum(norms, l))
}

/// The same check with `I(F_L) <= π²/2` and `J(F_L) >= πL/2 - 4C`, which is
/// the test of Belabas, Diaz y Diaz and Friedman.
pub fn bdydf_check(inv: &FieldInvariants, norms: &NormTable, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("threshold {t} must exceed 1")));
    }
    let l = t.ln();
    cover(norms, l)?;
    let i = PI * PI / 2.0;
    let j = PI * l / 2.0 - 4.0 * Constants::CATALAN;
    Ok(archimedean(inv) + i / l * inv.n as f64 - j / l * inv.r1 as f64
        - triangle_prime_sum(norms, l))
}

/// Right side minus left side of the inequality for the weight of the
/// simplified algorithm (cut point `a = L/2`).
pub fn t2_check(inv: &FieldInvariants, norms: &NormTable, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("threshold {t} must exceed 1")));
    }
    let l = t.ln();
    cover(norms, l)?;
    let rt = t.sqrt();
    let k1 = norms.count_x_below(l / 2.0);
    let k2 = norms.count_x_below(l);
    let near = norms.sum_xlp(k1) - 2.0 * norms.sum_lp(k1) + 2.0 * rt * norms.sum_lp_inv(k1);
    let far = l * (norms.sum_lp(k2) - norms.sum_lp(k1)) - (norms.sum_xlp(k2) - norms.sum_xlp(k1));
    let (i_half, j_half) = ij_simplified(t)?;
    let rhs = (rt - 1.0) * archimedean(inv) + i_half * inv.n as f64 - j_half * inv.r1 as f64;
    Ok(rhs - (near + far))
}

/// An even, compactly supported, piecewise-linear function given by its
/// values at breakpoints `0 = x_0 < x_1 < ... < x_k`, vanishing from `x_k`
/// on.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearWeight {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinearWeight {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |m: &str| Err(Error::Domain(format!("piecewise-linear weight: {m}")));
        if points.len() < 2 {
            return bad("need at least two breakpoints");
        }
        if points[0].0 != 0.0 {
            return bad("first breakpoint must be at x = 0");
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return bad("non-finite breakpoint");
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return bad("breakpoints must be strictly increasing");
        }
        if points.last().unwrap().1 != 0.0 {
            return bad("last breakpoint must have value 0");
        }
        Ok(PiecewiseLinearWeight { points })
    }

    /// The triangle `F_L(x) = max(L - |x|, 0)`.
    pub fn triangle(l: f64) -> Result<Self> {
        Self::new(vec![(0.0, l), (l, 0.0)])
    }

    /// `F_a - F_b` for `a > b >= 0`, which equals `Φ_i ∗ Φ_j` when
    /// `a = (i+j)δ` and `b = |i-j|δ`.
    pub fn trapezoid(a: f64, b: f64) -> Result<Self> {
        if b == 0.0 {
            return Self::triangle(a);
        }
        Self::new(vec![(0.0, a - b), (b, a - b), (a, 0.0)])
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn support(&self) -> f64 {
        self.points.last().unwrap().0
    }

    pub fn at_zero(&self) -> f64 {
        self.points[0].1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if x >= self.support() {
            return 0.0;
        }
        let k = self.points.partition_point(|p| p.0 <= x);
        let (x0, y0) = self.points[k - 1];
        let (x1, y1) = self.points[k];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        PiecewiseLinearWeight { points: self.points.iter().map(|&(x, y)| (x, c * y)).collect() }
    }
}

/// Adaptive Simpson on `[a, b]` with absolute tolerance `tol`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `I(F) = ∫_0^∞ (F(0) - F(x))/(2 sinh(x/2)) dx` and
/// `J(F) = ∫_0^∞ F(x)/(2 cosh(x/2)) dx` by adaptive quadrature on each
/// linear piece, with the tail of `I` in closed form.
pub fn ij_quadrature(f: &PiecewiseLinearWeight) -> (f64, f64) {
    let f0 = f.at_zero();
    let tol = 1e-12 * f0.abs().max(1e-300);
    let pieces = f.points().len() - 1;
    let mut i_int = 0.0;
    let mut j_int = 0.0;
    for w in f.points().windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let slope = (y1 - y0) / (x1 - x0);
        // F(0) - F(x) = (f0 - y0) - slope (x - x0); near 0 only the slope term
        // survives and the integrand tends to -slope.
        let gi = |x: f64| {
            if x == 0.0 {
                -slope
            } else {
                ((f0 - y0) - slope * (x - x0)) / (2.0 * (x / 2.0).sinh())
            }
        };
        let gj = |x: f64| (y0 + slope * (x - x0)) / (2.0 * (x / 2.0).cosh());
        i_int += simpson(&gi, x0, x1, tol / pieces as f64);
        j_int += simpson(&gj, x0, x1, tol / pieces as f64);
    }
    let x_end = f.support();
    i_int += f0 * -(x_end / 4.0).tanh().ln();
    (i_int, j_int)
}

/// `ℓ_K(F) = -2 Σ w_e F(x_e) + F(0)(log Δ - (γ + log 8π) n) + I(F) n - J(F) r1`.
pub fn ell_piecewise_linear(
    inv: &FieldInvariants,
    norms: &NormTable,
    f: &PiecewiseLinearWeight,
) -> Result<f64> {
    let x_end = f.support();
    cover(norms, x_end)?;
    let k = norms.count_x_below(x_end);
    let prime_sum: f64 = norms.entries()[..k]
        .iter()
        .map(|e| e.logp_f * e.inv_norm_half * f.eval(e.x))
        .sum();
    let (i, j) = ij_quadrature(f);
    Ok(-2.0 * prime_sum + f.at_zero() * archimedean(inv) + i * inv.n as f64 - j * inv.r1 as f64)
}
