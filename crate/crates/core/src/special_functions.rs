//! Dilogarithms and the closed forms of `I(F)` and `J(F)` for the triangle
//! and simplified weights, plus the zero-counting majorants `S(U)` and
//! `M_K(t)`.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::numberfield::FieldInvariants;

/// Mathematical constants used throughout.
#[derive(Debug, Clone, Copy)]
pub struct Constants;

impl Constants {
    pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    pub const CATALAN: f64 = 0.915_965_594_177_219;
    pub const PI: f64 = PI;

    /// `γ + log 2π`
    pub fn gamma_log_2pi() -> f64 {
        Self::EULER_GAMMA + (2.0 * PI).ln()
    }

    /// `γ + log 8π`
    pub fn gamma_log_8pi() -> f64 {
        Self::EULER_GAMMA + (8.0 * PI).ln()
    }
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

/// Power series for `Li2(x)`, `|x| <= 1/2`.
fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = x;
    let mut k = 1.0;
    loop {
        let term = pow / (k * k);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            return sum;
        }
        pow *= x;
        k += 1.0;
    }
}

/// `Li2(x) = -∫_0^x log(1-u)/u du` for `-1 <= x <= 1`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("dilog argument {x} outside [-1, 1]")));
    }
    Ok(dilog_unchecked(x))
}

fn dilog_unchecked(x: f64) -> f64 {
    if x == 1.0 {
        PI * PI / 6.0
    } else if x > 0.5 {
        PI * PI / 6.0 - x.ln() * (-x).ln_1p() - dilog_series(1.0 - x)
    } else if x >= 0.0 {
        dilog_series(x)
    } else {
        // Landen: x/(x-1) lies in (0, 1/2].
        let l = (-x).ln_1p();
        -dilog_series(x / (x - 1.0)) - 0.5 * l * l
    }
}

/// Sum of the alternating series `Σ (-1)^k a_k` whose terms are moments of
/// a positive measure, by the Cohen-Villegas-Zagier acceleration.
fn cvz_alternating(a: impl Fn(usize) -> f64, n: usize) -> f64 {
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..n {
        c = b - c;
        s += c * a(k);
        let kf = k as f64;
        let nf = n as f64;
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// `Im Li2(iy) = Σ_{k>=0} (-1)^k y^{2k+1}/(2k+1)^2` for `0 <= y <= 1`.
pub fn im_dilog_i(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(domain(format!("im_dilog_i argument {y} outside [0, 1]")));
    }
    Ok(im_dilog_i_unchecked(y))
}

fn im_dilog_i_unchecked(y: f64) -> f64 {
    if y <= 0.5 {
        let y2 = y * y;
        let mut sum = 0.0;
        let mut pow = y;
        let mut k = 0usize;
        loop {
            let d = (2 * k + 1) as f64;
            let term = pow / (d * d);
            sum += if k % 2 == 0 { term } else { -term };
            if term <= 1e-17 * sum.abs() || term == 0.0 {
                return sum;
            }
            pow *= y2;
            k += 1;
        }
    }
    let y2 = y * y;
    cvz_alternating(
        |k| {
            let d = (2 * k + 1) as f64;
            y * y2.powi(k as i32) / (d * d)
        },
        32,
    )
}

fn check_t(t: f64) -> Result<f64> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(domain(format!("threshold {t} must be a finite value > 1")));
    }
    Ok(t.ln())
}

/// `(I(F_L), J(F_L))` for the triangle weight `F_L(x) = max(L - |x|, 0)`
/// with `L = log t`.
pub fn ij_triangle(t: f64) -> Result<(f64, f64)> {
    let l = check_t(t)?;
    let s = 1.0 / t.sqrt();
    let i = PI * PI / 2.0 - 4.0 * dilog_unchecked(s) + dilog_unchecked(1.0 / t);
    let j = PI * l / 2.0 - 4.0 * Constants::CATALAN + 4.0 * im_dilog_i_unchecked(s);
    Ok((i, j))
}

/// `(I(F)/(2√t), J(F)/(2√t))` for the weight of the simplified algorithm.
pub fn ij_simplified(t: f64) -> Result<(f64, f64)> {
    let l = check_t(t)?;
    let rt = t.sqrt();
    let s = 1.0 / rt;
    let li_s = dilog_unchecked(-s);
    let i_half = (rt - 1.0) * (4.0 / (1.0 - s)).ln() - l * l / 8.0 + l / 2.0 - PI * PI / 12.0 - li_s;
    let j_half = (rt + 1.0) * (2.0 / (1.0 + s)).ln() + l * l / 8.0 - l / 2.0 - PI * PI / 24.0 - li_s
        + 0.5 * dilog_unchecked(-1.0 / t);
    Ok((i_half, j_half))
}

/// `S(U) = 960((U-4)e^{U/4} + (U+4)e^{-U/4})^2 / U^5`.
pub fn s_bound(u: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain(format!("S(U) needs U > 0, got {u}")));
    }
    let z = u / 4.0;
    // g = 2U cosh(U/4) - 8 sinh(U/4) = 8 Σ_{k>=1} 2k z^{2k+1}/(2k+1)!
    let g = if z < 1.0 {
        let z2 = z * z;
        let mut term = z * z2 / 6.0;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let c = 2.0 * k * term;
            sum += c;
            if c <= 1e-17 * sum {
                break;
            }
            term *= z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            k += 1.0;
        }
        8.0 * sum
    } else {
        2.0 * u * z.cosh() - 8.0 * z.sinh()
    };
    Ok(960.0 * g * g / u.powi(5))
}

/// The majorant `M_K(t)` of the zero-counting function.
pub fn zero_count_bound(t: f64, inv: &FieldInvariants) -> Result<f64> {
    zero_count_bound_raw(t, inv.log_disc, inv.n)
}

pub fn zero_count_bound_raw(t: f64, log_disc: f64, n: usize) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("M_K(t) needs t > 0, got {t}")));
    }
    let nf = n as f64;
    if t < 1.0 {
        Ok(0.637 * t * (log_disc - 2.45 * nf + s_bound(3.03 / t)?))
    } else {
        Ok(t / PI * (log_disc + nf * (t / (2.0 * PI * E)).ln())
            + 0.247 * (log_disc + nf * t.ln())
            + 8.851 * nf
            + 3.024)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Plain partial sums with many terms; slow but independent.
    fn dilog_oracle(x: f64) -> f64 {
        (1..200_000).map(|k| x.powi(k) / (k as f64 * k as f64)).sum()
    }

    #[test]
    fn constants() {
        let catalan: f64 = (0..2_000_000)
            .map(|k| {
                let d = (2 * k + 1) as f64;
                if k % 2 == 0 { 1.0 / (d * d) } else { -1.0 / (d * d) }
            })
            .sum();
        assert_abs_diff_eq!(catalan, Constants::CATALAN, epsilon = 1e-12);
        assert!(2.0 * PI * Constants::EULER_GAMMA.exp() > 11.19);
        assert_abs_diff_eq!(Constants::gamma_log_2pi(), 2.415_092_731_310_878, epsilon = 1e-14);
        assert_abs_diff_eq!(Constants::gamma_log_8pi(), 3.801_387_092_430_769, epsilon = 1e-14);
    }

    #[test]
    fn dilog_special_values() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(dilog(1.0).unwrap(), PI * PI / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dilog(-1.0).unwrap(), -PI * PI / 12.0, epsilon = 1e-14);
        let ln2 = 2f64.ln();
        assert_abs_diff_eq!(dilog(0.5).unwrap(), PI * PI / 12.0 - ln2 * ln2 / 2.0, epsilon = 1e-15);
        assert!(dilog(1.5).is_err());
        assert!(dilog(f64::NAN).is_err());
    }

    #[test]
    fn dilog_matches_series() {
        for &x in &[-0.9, -0.5, -0.25, 0.1, 0.3, 0.6, 0.75, 0.9] {
            assert_abs_diff_eq!(dilog(x).unwrap(), dilog_oracle(x), epsilon = 1e-13);
        }
        // Near 1 the oracle would need ~1e12 terms; use the reflection value.
        let x = 1.0 - 1e-12;
        assert_abs_diff_eq!(dilog(x).unwrap(), PI * PI / 6.0, epsilon = 3e-11);
    }

    #[test]
    fn im_dilog_values() {
        assert_eq!(im_dilog_i(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(im_dilog_i(1.0).unwrap(), Constants::CATALAN, epsilon = 1e-13);
        let oracle: f64 = (0..30)
            .map(|k| {
                let d = (2 * k + 1) as f64;
                let t = 0.5f64.powi(2 * k + 1) / (d * d);
                if k % 2 == 0 { t } else { -t }
            })
            .sum();
        assert_abs_diff_eq!(im_dilog_i(0.5).unwrap(), oracle, epsilon = 1e-15);
        // Both branches agree near the switch point.
        let direct: f64 = (0..200)
            .map(|k| {
                let d = (2 * k + 1) as f64;
                let t = 0.7f64.powi(2 * k + 1) / (d * d);
                if k % 2 == 0 { t } else { -t }
            })
            .sum();
        assert_abs_diff_eq!(im_dilog_i(0.7).unwrap(), direct, epsilon = 1e-15);
        assert!(im_dilog_i(-0.1).is_err());
        assert!(im_dilog_i(1.1).is_err());
    }

    #[test]
    fn triangle_weight() {
        let (i, j) = ij_triangle(4.0).unwrap();
        let ln2 = 2f64.ln();
        let li_half = PI * PI / 12.0 - ln2 * ln2 / 2.0;
        assert_abs_diff_eq!(i, PI * PI / 2.0 - 4.0 * li_half + dilog_oracle(0.25), epsilon = 1e-13);
        assert!(j >= PI * 4f64.ln() / 2.0 - 4.0 * Constants::CATALAN);
        let (i, j) = ij_triangle(1e30).unwrap();
        assert_abs_diff_eq!(i, PI * PI / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(j - (PI * 1e30f64.ln() / 2.0 - 4.0 * Constants::CATALAN), 0.0, epsilon = 1e-13);
        assert!(ij_triangle(1.0).is_err());
    }

    #[test]
    fn simplified_weight() {
        let (i, j) = ij_simplified(4.0).unwrap();
        let l = 4f64.ln();
        let li_m_half = dilog_oracle(-0.5);
        let li_m_quarter = dilog_oracle(-0.25);
        let ei = 8f64.ln() - l * l / 8.0 + l / 2.0 - PI * PI / 12.0 - li_m_half;
        let ej = 3.0 * (4.0f64 / 3.0).ln() + l * l / 8.0 - l / 2.0 - PI * PI / 24.0 - li_m_half
            + 0.5 * li_m_quarter;
        assert_abs_diff_eq!(i, ei, epsilon = 1e-13);
        assert_abs_diff_eq!(j, ej, epsilon = 1e-13);
        let t = 1e24f64;
        let (i, _) = ij_simplified(t).unwrap();
        assert!((i / t.sqrt() - 4f64.ln()).abs() < 1e-9);
        let (i, j) = ij_simplified(E * E).unwrap();
        let s = 1.0 / E;
        assert_abs_diff_eq!(
            i,
            (E - 1.0) * (4.0 / (1.0 - s)).ln() - 0.5 + 1.0 - PI * PI / 12.0 - dilog_oracle(-s),
            epsilon = 1e-13
        );
        assert!(j.is_finite());
    }

    #[test]
    fn s_bound_values() {
        assert_abs_diff_eq!(s_bound(4.0).unwrap(), 60.0 * (-2f64).exp(), epsilon = 1e-12);
        for &u in &[1e-3, 1e-2, 1e-1] {
            let r = s_bound(u).unwrap() / u;
            assert!((r - 5.0 / 3.0).abs() < u, "U = {u}: {r}");
        }
        // Series and direct forms agree where both are accurate.
        let direct = |u: f64| {
            let z = u / 4.0;
            let g = 2.0 * u * z.cosh() - 8.0 * z.sinh();
            960.0 * g * g / u.powi(5)
        };
        for &u in &[2.0, 3.0, 3.99] {
            assert_abs_diff_eq!(s_bound(u).unwrap(), direct(u), epsilon = 1e-9 * direct(u));
        }
        let mut prev = 0.0;
        for k in 1..=5000 {
            let s = s_bound(k as f64 * 0.01).unwrap();
            assert!(s > prev);
            prev = s;
        }
        assert!(s_bound(0.0).is_err());
    }

    #[test]
    fn zero_count_branches() {
        let ld = 5f64.ln();
        let expected = (ld + 2.0 * (1.0 / (2.0 * PI * E)).ln()) / PI + 0.247 * ld + 2.0 * 8.851 + 3.024;
        assert_abs_diff_eq!(zero_count_bound_raw(1.0, ld, 2).unwrap(), expected, epsilon = 1e-13);
        let small = zero_count_bound_raw(0.5, ld, 2).unwrap();
        assert_abs_diff_eq!(
            small,
            0.637 * 0.5 * (ld - 4.9 + s_bound(6.06).unwrap()),
            epsilon = 1e-13
        );
        for k in 0..200 {
            let t = 1.0 + k as f64 * 0.5;
            for n in 2..10 {
                assert!(zero_count_bound_raw(t, 1.0, n).unwrap() >= 0.0);
                assert!(
                    zero_count_bound_raw(t, 7.0, n).unwrap() > zero_count_bound_raw(t, 6.0, n).unwrap()
                );
            }
        }
        assert!(zero_count_bound_raw(0.0, ld, 2).is_err());
    }

    proptest! {
        #[test]
        fn duplication(x in -1.0f64..=1.0) {
            let lhs = dilog(x).unwrap() + dilog(-x).unwrap();
            prop_assert!((lhs - 0.5 * dilog(x * x).unwrap()).abs() < 1e-11);
        }

        #[test]
        fn im_dilog_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assume!(a < b);
            prop_assert!(im_dilog_i(a).unwrap() < im_dilog_i(b).unwrap());
        }

        #[test]
        fn triangle_i_bounds(lt in 1e-6f64..60.0) {
            let (i, j) = ij_triangle(lt.exp()).unwrap();
            prop_assert!(i >= 0.0 && i <= PI * PI / 2.0 + 1e-15);
            prop_assert!(j >= PI * lt / 2.0 - 4.0 * Constants::CATALAN - 1e-15);
        }
    }
}
