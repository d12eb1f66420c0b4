//! Search for a negative direction of `q_K` on even step functions.
//!
//! With `Φ_i` the indicator of `(-iδ, iδ)`, the Gram matrix of `q_K` on
//! `span(Φ_1..Φ_N)` is `A[i][j] = tab[i+j] - tab[|i-j|]`, where
//! `tab[k] = k · grh_check(kδ)`. The matrix grows one row at a time and an
//! `LDLᵀ` factorization is extended alongside; a negative determinant
//! (odd number of negative pivots, none zero) is a success, and a row of
//! `L⁻¹` gives an explicit witness.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explicit_formula::{ell_piecewise_linear, grh_check, PiecewiseLinearWeight};
use crate::numberfield::{FieldInvariants, NormTable};
use crate::SUCCESS_EPS;

/// A vector `v` with `vᵀ A v < 0`, proving that prime ideals of norm below
/// `T = e^{2Nδ}` generate the class group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub delta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub v: Vec<f64>,
    pub q_value: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub field_hash: String,
}

#[derive(Debug, Clone)]
pub struct GramState {
    delta: f64,
    tab: Vec<f64>,
    /// Row `k` holds `A[k][0..=k]` (0-based).
    rows: Vec<Vec<f64>>,
    /// Row `k` holds the strictly lower part of `L`.
    l: Vec<Vec<f64>>,
    d: Vec<f64>,
    neg_pivots: usize,
    zero_pivot: bool,
    eps_pivot: f64,
    /// Inertia from the eigen decomposition once a zero pivot has broken
    /// the factorization: (negative, zero) counts and the eigenpair of the
    /// smallest eigenvalue.
    eigen: Option<(usize, usize, f64, Vec<f64>)>,
}

impl GramState {
    pub fn new(delta: f64) -> Self {
        GramState {
            delta,
            tab: vec![0.0],
            rows: Vec::new(),
            l: Vec::new(),
            d: Vec::new(),
            neg_pivots: 0,
            zero_pivot: false,
            eps_pivot: 0.0,
            eigen: None,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn tab(&self) -> &[f64] {
        &self.tab
    }

    /// `A[i][j]` with 1-based indices as in the basis `Φ_1..Φ_N`.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.tab[i + j] - self.tab[i.abs_diff(j)]
    }

    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    pub fn neg_pivot_count(&self) -> usize {
        self.neg_pivots
    }

    pub fn zero_pivot_flag(&self) -> bool {
        self.zero_pivot
    }

    /// Adds `Φ_{N+1}`: two new `tab` entries and one new row.
    pub fn grow(&mut self, inv: &FieldInvariants, norms: &NormTable) -> Result<()> {
        let n = self.dim() + 1;
        for k in [2 * n - 1, 2 * n] {
            let kf = k as f64;
            self.tab.push(kf * grh_check(inv, norms, kf * self.delta)?);
        }
        self.add_row();
        Ok(())
    }

    /// Extends `A` and its factorization by one row; `tab` must already
    /// hold the entries up to `2N`.
    fn add_row(&mut self) {
        let n = self.dim() + 1;
        let row: Vec<f64> = (1..=n).map(|i| self.a(n, i)).collect();
        self.rows.push(row);
        if n == 1 {
            self.eps_pivot = 1e-9 * self.rows[0][0].abs().max(1.0);
        }
        if self.zero_pivot {
            self.refresh_eigen();
            return;
        }
        let row = &self.rows[n - 1];
        let mut lrow = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            let s: f64 = (0..j).map(|k| lrow[k] * self.l[j][k] * self.d[k]).sum();
            lrow.push((row[j] - s) / self.d[j]);
        }
        let pivot = row[n - 1] - (0..n - 1).map(|k| lrow[k] * lrow[k] * self.d[k]).sum::<f64>();
        self.l.push(lrow);
        self.d.push(pivot);
        if pivot.abs() < self.eps_pivot {
            log::debug!("zero pivot at N = {n}, δ = {}; switching to eigenvalues", self.delta);
            self.zero_pivot = true;
            self.refresh_eigen();
        } else if pivot < 0.0 {
            self.neg_pivots += 1;
        }
    }

    fn full_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.a(i + 1, j + 1))
    }

    fn refresh_eigen(&mut self) {
        let eig = SymmetricEigen::new(self.full_matrix());
        let neg = eig.eigenvalues.iter().filter(|&&x| x <= -self.eps_pivot).count();
        let zero = eig.eigenvalues.iter().filter(|&&x| x.abs() < self.eps_pivot).count();
        let (k, &lmin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let vec = eig.eigenvectors.column(k).iter().copied().collect();
        self.eigen = Some((neg, zero, lmin, vec));
    }

    /// Negative determinant: an odd number of negative eigenvalues and no
    /// zero eigenvalue.
    pub fn determinant_negative(&self) -> bool {
        match &self.eigen {
            Some((neg, zero, _, _)) => neg % 2 == 1 && *zero == 0,
            None => self.neg_pivots % 2 == 1,
        }
    }

    /// A direction of negative `q`, from the last negative pivot (a row of
    /// `L⁻¹`) or from the eigenvector of the smallest eigenvalue.
    pub fn witness(&self) -> Option<Vec<f64>> {
        if let Some((_, _, lmin, v)) = &self.eigen {
            return (*lmin < 0.0).then(|| v.clone());
        }
        let m = self.d.iter().rposition(|&p| p < 0.0)?;
        // Row m of L⁻¹: solve u L = e_m restricted to the leading block.
        let mut u = vec![0.0; self.dim()];
        u[m] = 1.0;
        for j in (0..m).rev() {
            u[j] = -(j + 1..=m).map(|k| u[k] * self.l[k][j]).sum::<f64>();
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        Some(u.into_iter().map(|x| x / norm).collect())
    }

    /// `vᵀ A v` from the stored `tab`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        quadratic_form_from_tab(&self.tab, v)
    }
}

fn quadratic_form_from_tab(tab: &[f64], v: &[f64]) -> f64 {
    let mut q = 0.0;
    for (i, vi) in v.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            q += vi * vj * (tab[i + j + 2] - tab[i.abs_diff(j)]);
        }
    }
    q
}

#[derive(Debug, Clone)]
pub struct NDeltaOutcome {
    /// Smallest `N <= n_max` at which the search succeeded, or 0.
    pub n: usize,
    pub certificate: Option<Certificate>,
}

/// Grows the Gram matrix until its determinant is negative (with a
/// witness whose recomputed `q` is below `-ε`), or `n_max` is reached.
pub fn ndelta(
    inv: &FieldInvariants,
    norms: &NormTable,
    delta: f64,
    n_max: usize,
) -> Result<NDeltaOutcome> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("δ = {delta} must be positive")));
    }
    norms.require((2.0 * n_max as f64 * delta).exp() * (1.0 - 1e-12))?;
    let mut state = GramState::new(delta);
    let mut diag_negative_seen = false;
    while state.dim() < n_max {
        state.grow(inv, norms)?;
        let n = state.dim();
        diag_negative_seen |= state.a(n, n) < -SUCCESS_EPS;
        if state.determinant_negative() {
            if let Some(v) = state.witness() {
                let q = state.quadratic_form(&v);
                if q < -SUCCESS_EPS {
                    let certificate = Certificate {
                        delta,
                        n,
                        v,
                        q_value: q,
                        t: (2.0 * n as f64 * delta).exp(),
                        field_hash: String::new(),
                    };
                    return Ok(NDeltaOutcome { n, certificate: Some(certificate) });
                }
            }
        } else if diag_negative_seen {
            log::debug!(
                "δ = {delta}, N = {n}: a negative diagonal entry exists but the determinant is not negative"
            );
        }
    }
    Ok(NDeltaOutcome { n: 0, certificate: None })
}

/// `Φ_v ∗ Φ_v` as a piecewise-linear weight with breakpoints `kδ`.
pub fn convolution_square(v: &[f64], delta: f64) -> Result<PiecewiseLinearWeight> {
    let n = v.len();
    // Autocorrelations by sum and by difference of the (1-based) indices.
    let mut by_sum = vec![0.0; 2 * n + 1];
    let mut by_diff = vec![0.0; n];
    for (i, vi) in v.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            by_sum[i + j + 2] += vi * vj;
            by_diff[i.abs_diff(j)] += vi * vj;
        }
    }
    let points = (0..=2 * n)
        .map(|k| {
            let plus: f64 = (k + 1..=2 * n).map(|s| by_sum[s] * (s - k) as f64).sum();
            let minus: f64 = (k + 1..n).map(|d| by_diff[d] * (d - k) as f64).sum();
            (k as f64 * delta, (plus - minus) * delta)
        })
        .collect();
    PiecewiseLinearWeight::new(points)
}

/// Recomputes `q = vᵀ A v` from a freshly built `tab`, and independently as
/// `ℓ_K(Φ_v ∗ Φ_v)/δ` by quadrature. Fails with an integrity error when the
/// two disagree by more than `1e-6` relative; returns the first value.
pub fn verify_certificate(inv: &FieldInvariants, norms: &NormTable, cert: &Certificate) -> Result<f64> {
    let n = cert.n;
    if n == 0 || cert.v.len() != n || !(cert.delta > 0.0) {
        return Err(Error::Integrity(format!(
            "malformed certificate: N = {n}, {} coefficients, δ = {}",
            cert.v.len(),
            cert.delta
        )));
    }
    let mut tab = vec![0.0];
    for k in 1..=2 * n {
        let kf = k as f64;
        tab.push(kf * grh_check(inv, norms, kf * cert.delta)?);
    }
    let q = quadratic_form_from_tab(&tab, &cert.v);
    let conv = convolution_square(&cert.v, cert.delta)?;
    let q2 = ell_piecewise_linear(inv, norms, &conv)? / cert.delta;
    let scale = q.abs().max(q2.abs());
    if (q - q2).abs() > 1e-6 * scale {
        return Err(Error::Integrity(format!(
            "certificate routes disagree: Gram form {q:.12e}, quadrature {q2:.12e}"
        )));
    }
    Ok(q)
}
