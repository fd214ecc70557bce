//! Error-erasure decoding for `n = m`.
//!
//! Known row erasures `a^(i,R)` and column erasures `B^(C)` are absorbed into
//! the received word. The result is a word of a code with larger dimensions
//! `k_i + rho_i + gamma` hit by the full error only, which the interpolation
//! decoder handles. Messages are recovered by dividing out the known factors.

use crate::channel::ErasureInfo;
use crate::codes::{InterleavedCode, MessageTuple, WordMatrix};
use crate::error::{Error, Result};
use crate::ffield::{rank_over_base, Elem};
use crate::interp::{self, DecodeOutcome, FailureReason, Mode};
use crate::linalg::{self, Matrix};
use crate::linpoly::{min_subspace_poly, LinPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasureContext {
    /// `d_j = sum_l B^(C)_{j,l} beta^{[l]}`.
    pub d_basis: Vec<Elem>,
    /// `Gamma^(C)`, vanishing on the span of `d`.
    pub gamma_poly: LinPoly,
    /// Full q-reverse of `Gamma^(C)`.
    pub gamma_rev: LinPoly,
    /// `gamma_rev(x^{[gamma]})` reduced modulo `x^{[m]} - x`; q-degree `gamma`.
    pub right_factor: LinPoly,
    /// `Lambda^(i,R)`, vanishing on the span of `a^(i,R)`.
    pub lambda_row: Vec<LinPoly>,
    pub augmented_dims: Vec<usize>,
}

/// Validates `info` against `code` and builds the erasure polynomials.
pub fn build_context(code: &InterleavedCode, info: &ErasureInfo) -> Result<ErasureContext> {
    let field = code.field();
    let (s, n, m) = (code.s(), code.n(), field.m());
    if n != m {
        return Err(Error::InvalidErasures(format!(
            "error-erasure decoding needs n = m, got n = {n}, m = {m}"
        )));
    }
    let nb = code.normal_basis().ok_or_else(|| {
        Error::InvalidErasures("code points are not the dual of a normal basis".into())
    })?;
    if info.a_row.len() != s {
        return Err(Error::InvalidErasures(format!(
            "{} row-erasure sets for interleaving order {s}",
            info.a_row.len()
        )));
    }
    if info.b_col.cols() != n {
        return Err(Error::InvalidErasures(format!(
            "column-erasure matrix has {} columns, expected {n}",
            info.b_col.cols()
        )));
    }
    let q = field.q();
    let base = field.base();
    let b_col = &info.b_col;
    if (0..b_col.rows()).any(|r| b_col.row(r).iter().any(|e| e.0 >= q)) {
        return Err(Error::InvalidErasures(
            "column-erasure entries must lie in the base field".into(),
        ));
    }
    let gamma = b_col.rows();
    if linalg::rank(&base, b_col) != gamma {
        return Err(Error::InvalidErasures(
            "column-erasure matrix must have full row rank".into(),
        ));
    }
    for a in &info.a_row {
        if rank_over_base(field, &Matrix::from_rows(vec![a.clone()])) != a.len() {
            return Err(Error::InvalidErasures(
                "row-erasure vectors must be linearly independent".into(),
            ));
        }
    }

    let d_basis: Vec<Elem> = (0..gamma)
        .map(|j| {
            (0..n).fold(Elem::ZERO, |acc, l| {
                field.add(acc, field.mul(field.scalar(b_col.get(j, l).0), nb.basis[l]))
            })
        })
        .collect();
    let gamma_poly = min_subspace_poly(field, &d_basis);
    let gamma_rev = gamma_poly.qreverse(field, m)?;
    let right_factor = gamma_rev
        .compose(field, &LinPoly::monomial(Elem::ONE, gamma))
        .mod_xqm(field, m);
    let lambda_row: Vec<LinPoly> = info.a_row.iter().map(|a| min_subspace_poly(field, a)).collect();
    let augmented_dims = code
        .k()
        .iter()
        .zip(&info.a_row)
        .map(|(&k, a)| k + a.len() + gamma)
        .collect();
    Ok(ErasureContext {
        d_basis,
        gamma_poly,
        gamma_rev,
        right_factor,
        lambda_row,
        augmented_dims,
    })
}

impl ErasureContext {
    /// `Lambda^(i,R)(f^(i)(G(x)))` for each row: the message of the
    /// augmented code that corresponds to `msg`.
    pub fn augmented_message(&self, code: &InterleavedCode, msg: &MessageTuple) -> MessageTuple {
        let field = code.field();
        MessageTuple::new(
            msg.polys
                .iter()
                .zip(&self.lambda_row)
                .map(|(f, lam)| lam.compose(field, &f.compose(field, &self.right_factor)))
                .collect(),
        )
    }

    /// Inverse of [`augmented_message`](Self::augmented_message); `None` if a
    /// division leaves a remainder or the quotient is too long.
    pub fn recover_message(&self, code: &InterleavedCode, aug: &MessageTuple) -> Option<MessageTuple> {
        let field = code.field();
        let polys = aug
            .polys
            .iter()
            .zip(&self.lambda_row)
            .zip(code.k())
            .map(|((p, lam), &k)| {
                let f = p
                    .left_divide(field, lam)
                    .and_then(|x| x.right_divide(field, &self.right_factor))
                    .ok()?;
                f.degree().is_none_or(|d| d < k).then_some(f)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MessageTuple::new(polys))
    }
}

/// `y^(i) = Lambda^(i,R)(r~^(i)(G(x))) mod (x^{[m]} - x)` evaluated on `g`,
/// together with the augmented code.
pub fn modify_received(
    ctx: &ErasureContext,
    code: &InterleavedCode,
    r: &WordMatrix,
) -> Result<(WordMatrix, InterleavedCode)> {
    code.check_word(r)?;
    if let Some(&k) = ctx.augmented_dims.iter().find(|&&k| k > code.n()) {
        return Err(Error::RadiusInfeasible(format!(
            "augmented dimension {k} exceeds n = {}",
            code.n()
        )));
    }
    let field = code.field();
    let m = field.m();
    let rows = (0..code.s())
        .map(|i| {
            let rt = code.interpolate_row(r.row(i));
            ctx.lambda_row[i]
                .compose(field, &rt.compose(field, &ctx.right_factor))
                .mod_xqm(field, m)
                .eval_vec(field, code.g())
        })
        .collect();
    Ok((Matrix::from_rows(rows), code.with_dims(&ctx.augmented_dims)?))
}

pub fn decode_error_erasure(
    code: &InterleavedCode,
    r: &WordMatrix,
    info: &ErasureInfo,
    mode: Mode,
    list_cap: u64,
) -> Result<DecodeOutcome> {
    let ctx = build_context(code, info)?;
    let (y, aug) = modify_received(&ctx, code, r)?;
    Ok(match interp::decode(&aug, &y, mode, list_cap)? {
        DecodeOutcome::Unique(p) => match ctx.recover_message(code, &p) {
            Some(msg) => DecodeOutcome::Unique(msg),
            None => DecodeOutcome::Failure(FailureReason::RankDeficient),
        },
        DecodeOutcome::List(ps) => DecodeOutcome::List(
            ps.iter()
                .filter_map(|p| ctx.recover_message(code, p))
                .collect(),
        ),
        failure => failure,
    })
}
