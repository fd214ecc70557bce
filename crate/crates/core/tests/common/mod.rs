//! Checks shared by the property and acceptance suites. Each returns
//! `true` when the stated relation holds for the given inputs.
#![allow(dead_code)]

use igab::channel::{random_message, sample_erasure_scenario, trial_rng};
use igab::codes::InterleavedCode;
use igab::erasure::{build_context, modify_received};
use igab::ffield::{rank_over_base, BasisPair, Elem, Field};
use igab::linalg::{self, Matrix};
use igab::linpoly::{min_subspace_poly, LinPoly};

/// Coordinates of the q-reverse on the dual basis are the transpose of the
/// coordinates of `p` on the basis.
pub fn qreverse_transposes(field: &Field, nb: &BasisPair, p: &LinPoly) -> bool {
    let m = field.m();
    let fwd = p.coordinate_matrix(field, &nb.basis, &nb.dual);
    let rev = p.qreverse(field, m).unwrap();
    rev.coordinate_matrix(field, &nb.dual, &nb.basis) == fwd.transpose()
}

/// The coordinate matrix of `b(a(x))` has its rows in the row space of the
/// coordinate matrix of `a`.
pub fn composition_row_space(field: &Field, nb: &BasisPair, a: &LinPoly, b: &LinPoly) -> bool {
    let base = field.base();
    let ma = a.coordinate_matrix(field, &nb.basis, &nb.dual);
    let mc = b.compose(field, a).coordinate_matrix(field, &nb.basis, &nb.dual);
    linalg::rank(&base, &Matrix::vstack(&[&ma, &mc])) == linalg::rank(&base, &ma)
}

/// Outcome of one seeded error-erasure draw.
pub struct ErasureCheck {
    /// Rank of `y` minus the augmented codeword, and the full-error rank.
    pub modified_rank: usize,
    pub t: usize,
    /// Whether the transformed key equation vanishes for every row.
    pub key_equation: bool,
    /// Whether it already vanishes without the full-error factor.
    pub vacuous: bool,
}

pub fn erasure_draw(
    code: &InterleavedCode,
    rho: &[usize],
    gamma: usize,
    t: usize,
    seed: u64,
    index: u64,
) -> ErasureCheck {
    let field = code.field();
    let m = field.m();
    let mut rng = trial_rng(seed, index);
    let msg = random_message(code, &mut rng);
    let draw = sample_erasure_scenario(code, rho, gamma, t, &mut rng).unwrap();
    let info = draw.erasures.as_ref().unwrap();
    let parts = draw.parts.as_ref().unwrap();
    let ctx = build_context(code, info).unwrap();
    let r = linalg::add(field, &code.encode(&msg).unwrap(), &draw.error);
    let (y, aug) = modify_received(&ctx, code, &r).unwrap();
    let c_aug = aug.encode(&ctx.augmented_message(code, &msg)).unwrap();
    let modified_rank = rank_over_base(field, &linalg::sub(field, &y, &c_aug));

    let rows: Vec<(bool, bool)> = (0..code.s())
        .map(|i| {
            let e = code.interpolate_row(draw.error.row(i));
            let lambda_r = &ctx.lambda_row[i];
            let images: Vec<Elem> = parts
                .a_full
                .row(i)
                .iter()
                .map(|&a| lambda_r.eval(field, a))
                .collect();
            let lambda_e = min_subspace_poly(field, &images);
            let inner = lambda_r.compose(field, &e).compose(field, &ctx.gamma_rev);
            (
                lambda_e.compose(field, &inner).mod_xqm(field, m).is_zero(),
                inner.mod_xqm(field, m).is_zero(),
            )
        })
        .collect();
    ErasureCheck {
        modified_rank,
        t,
        key_equation: rows.iter().all(|r| r.0),
        vacuous: rows.iter().all(|r| r.1),
    }
}
