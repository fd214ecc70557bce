//! Failure predicates of the two earlier joint decoders and closed-form
//! failure-probability bounds.
//!
//! The received-word decoder fails when the stacked q-Vandermonde matrix
//! `R_R` has rank below `n - 1`; the syndrome decoder fails when its
//! key-equation matrix `S` has rank below `t`. Only the ranks are computed.

use crate::codes::{qvandermonde, InterleavedCode, WordMatrix};
use crate::error::{Error, Result};
use crate::ffield::Elem;
use crate::interp::{radius_list, radius_unique};
use crate::linalg::{self, Matrix};

/// `( qvan_{n-t-1}(g) ; qvan_{n-k_1-t}(r^(1)) ; ... )`.
pub fn rr_matrix(code: &InterleavedCode, r: &WordMatrix, t: usize) -> Result<Matrix> {
    code.check_word(r)?;
    let n = code.n();
    if t + 1 > n {
        return Err(Error::RadiusInfeasible(format!("t = {t} needs n > t")));
    }
    let field = code.field();
    let mut parts = vec![qvandermonde(field, n - t - 1, code.g())];
    for (i, &ki) in code.k().iter().enumerate() {
        if ki + t >= n {
            return Err(Error::RadiusInfeasible(format!(
                "t = {t} leaves no rows for dimension {ki}"
            )));
        }
        parts.push(qvandermonde(field, n - ki - t, r.row(i)));
    }
    let refs: Vec<&Matrix> = parts.iter().collect();
    Ok(Matrix::vstack(&refs))
}

pub fn rr_fails(code: &InterleavedCode, r: &WordMatrix, t: usize) -> Result<bool> {
    Ok(linalg::rank(code.field(), &rr_matrix(code, r, t)?) + 1 < code.n())
}

/// `s~^(i)_j = s^{(i)[j-n+k_i+1]}_{n-k_i-1-j}`.
pub fn modified_syndromes(code: &InterleavedCode, r: &WordMatrix) -> Result<Vec<Vec<Elem>>> {
    let field = code.field();
    let n = code.n() as i64;
    Ok(code
        .syndromes(r)?
        .into_iter()
        .zip(code.k())
        .map(|(syn, &ki)| {
            let len = syn.len();
            (0..len)
                .map(|j| field.frobenius(syn[len - 1 - j], j as i64 - n + ki as i64 + 1))
                .collect()
        })
        .collect())
}

/// Stack of the `(n - k_i - t) x (t + 1)` blocks `S^(i)` with entry `(u, c)`
/// equal to `s^{(i)[t-n+k_i+1+u]}_{n-k_i-1-t-u+c}`.
pub fn syndrome_matrix(code: &InterleavedCode, r: &WordMatrix, t: usize) -> Result<Matrix> {
    let field = code.field();
    let syn = code.syndromes(r)?;
    let n = code.n();
    let mut parts = Vec::with_capacity(code.s());
    for (i, &ki) in code.k().iter().enumerate() {
        if ki + t >= n {
            return Err(Error::RadiusInfeasible(format!(
                "t = {t} leaves no rows for dimension {ki}"
            )));
        }
        let rows = n - ki - t;
        parts.push(Matrix::from_fn(rows, t + 1, |u, c| {
            let shift = t as i64 - n as i64 + ki as i64 + 1 + u as i64;
            field.frobenius(syn[i][n - ki - 1 - t - u + c], shift)
        }));
    }
    let refs: Vec<&Matrix> = parts.iter().collect();
    Ok(Matrix::vstack(&refs))
}

pub fn sb_fails(code: &InterleavedCode, r: &WordMatrix, t: usize) -> Result<bool> {
    Ok(linalg::rank(code.field(), &syndrome_matrix(code, r, t)?) < t)
}

/// Closed-form bounds for one code and error rank `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub t: usize,
    pub tau_u: usize,
    pub tau_list: usize,
    /// Received-word decoder bound; defined for `s <= t`.
    pub p_lo: Option<f64>,
    /// Syndrome decoder bound at radius `tau_u`; defined for `s <= tau_u`.
    pub p_sb: Option<f64>,
    /// Bound on `P(rk Q < sk)` from the random-coefficient argument.
    pub p_alt: f64,
    /// Upper bound on the expected number of wrong codewords in the list
    /// decoding ball of radius `tau_list`.
    pub avg_list_excess: f64,
}

impl BoundsReport {
    pub fn avg_list(&self) -> f64 {
        1.0 + self.avg_list_excess
    }
}

pub fn bounds(code: &InterleavedCode, t: usize) -> BoundsReport {
    let q = f64::from(code.field().q());
    let m = code.field().m() as f64;
    let s = code.s() as f64;
    let n = code.n() as f64;
    let ksum = code.k_sum() as f64;
    let tau_u = radius_unique(code);
    let tau_list = radius_list(code);
    let tf = t as f64;

    let p_lo = (code.s() <= t).then(|| {
        1.0 - (1.0 - 4.0 / q.powf(m)) * (1.0 - q.powf(m * (s - tf))).powf(s)
    });
    let tu = tau_u as f64;
    let p_sb = (code.s() <= tau_u)
        .then(|| (3.5 * q.powf(-m * ((s + 1.0) * (tu - tf) + 1.0))).min(1.0));
    let p_alt = (4.0 * q.powf(-m * (s * (n - tu) - ksum - tf + 1.0))).min(1.0);

    let tl = tau_list as f64;
    let ball = (s * m + n) * tl - tl * tl - s * m * n;
    // 4 (q^{m sum k} - 1) q^{ball}, kept in the log domain
    let avg_list_excess =
        4.0 * (q.ln() * (m * ksum + ball)).exp() * (1.0 - q.powf(-m * ksum));

    BoundsReport {
        t,
        tau_u,
        tau_list,
        p_lo,
        p_sb,
        p_alt,
        avg_list_excess,
    }
}
