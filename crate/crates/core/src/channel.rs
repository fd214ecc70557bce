//! Seeded rank-error and erasure generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{InterleavedCode, MessageTuple, WordMatrix};
use crate::error::{Error, Result};
use crate::ffield::{fold_from_base, rank_over_base, Elem, Field};
use crate::linalg::{self, Matrix};
use crate::linpoly::LinPoly;

/// RNG for trial `index` of a run seeded with `seed`. Streams are disjoint,
/// so trials can run in any order or on any thread.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_elem<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Elem {
    Elem(rng.random_range(0..field.order()))
}

pub fn random_vec<R: Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> Vec<Elem> {
    (0..len).map(|_| random_elem(field, rng)).collect()
}

/// Uniform message tuple for `code`.
pub fn random_message<R: Rng + ?Sized>(code: &InterleavedCode, rng: &mut R) -> MessageTuple {
    MessageTuple::new(
        code.k()
            .iter()
            .map(|&ki| LinPoly::new(random_vec(code.field(), ki, rng)))
            .collect(),
    )
}

/// Uniform `rows x cols` matrix over `field` of rank `min(rows, cols)`.
pub fn random_full_rank<R: Rng + ?Sized>(
    field: &Field,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix {
    loop {
        let m = Matrix::from_fn(rows, cols, |_, _| random_elem(field, rng));
        if linalg::rank(field, &m) == rows.min(cols) {
            return m;
        }
    }
}

/// `len` elements of `F_{q^m}` that are independent over `F_q`.
pub fn random_independent<R: Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> Vec<Elem> {
    assert!(len <= field.m());
    let base = field.base();
    let coords = random_full_rank(&base, field.m(), len, rng);
    fold_from_base(field, &coords).row(0).to_vec()
}

/// Uniform `s x n` word whose `sm x n` expansion has rank exactly `t`.
///
/// Every rank-`t` matrix has exactly `|GL_t(F_q)|` factorizations `A B` with
/// full-rank `A` (`sm x t`) and `B` (`t x n`), so drawing both factors
/// uniformly gives a uniform product.
pub fn sample_rank_error<R: Rng + ?Sized>(
    field: &Field,
    s: usize,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<WordMatrix> {
    Ok(sample_rank_error_parts(field, s, n, t, rng)?.0)
}

/// Like [`sample_rank_error`], also returning `a^(i)` (an `s x t` matrix over
/// `F_{q^m}`) and `B` (a `t x n` matrix over `F_q`) with `e = a B`.
pub fn sample_rank_error_parts<R: Rng + ?Sized>(
    field: &Field,
    s: usize,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<(WordMatrix, Matrix, Matrix)> {
    let m = field.m();
    if t > (s * m).min(n) {
        return Err(Error::InvalidParameters(format!(
            "rank {t} exceeds min(sm, n) = {}",
            (s * m).min(n)
        )));
    }
    let base = field.base();
    let a = random_full_rank(&base, s * m, t, rng);
    let b = random_full_rank(&base, t, n, rng);
    let a_big = fold_from_base(field, &a);
    Ok((times_base(field, &a_big, &b), a_big, b))
}

/// `A B` where `A` is over `F_{q^m}` and `B` holds `F_q` entries.
pub fn times_base(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |r, c| {
        (0..a.cols()).fold(Elem::ZERO, |acc, p| {
            field.add(acc, field.mul(a.get(r, p), field.scalar(b.get(p, c).0)))
        })
    })
}

/// Number of successes in `n` Bernoulli(`p`) draws.
pub fn sample_binomial<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> usize {
    (0..n).filter(|_| rng.random_bool(p.clamp(0.0, 1.0))).count()
}

/// Rank drawn from `Bin(n, p)`, then a uniform error of that rank.
pub fn qsc_rank_channel<R: Rng + ?Sized>(
    field: &Field,
    s: usize,
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<ChannelDraw> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameters(format!("p_qsc = {p} outside [0, 1]")));
    }
    let t = sample_binomial(n, p, rng).min(s * field.m());
    Ok(ChannelDraw {
        error: sample_rank_error(field, s, n, t, rng)?,
        erasures: None,
        t_full: t,
        parts: None,
    })
}

/// Side information known to the receiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasureInfo {
    /// `a^(i,R)`, `rho_i` independent elements per row.
    pub a_row: Vec<Vec<Elem>>,
    /// `B^(C)`, a full-rank `gamma x n` matrix with entries in `F_q`.
    pub b_col: Matrix,
}

impl ErasureInfo {
    pub fn none(s: usize, n: usize) -> ErasureInfo {
        ErasureInfo {
            a_row: vec![Vec::new(); s],
            b_col: Matrix::zeros(0, n),
        }
    }

    pub fn rho(&self) -> Vec<usize> {
        self.a_row.iter().map(Vec::len).collect()
    }

    pub fn gamma(&self) -> usize {
        self.b_col.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma() == 0 && self.a_row.iter().all(Vec::is_empty)
    }
}

/// The parts of an error-erasure draw the receiver never sees.
#[derive(Clone, Debug)]
pub struct HiddenParts {
    pub b_row: Vec<Matrix>,
    pub a_col: Matrix,
    /// `a^(i,E)` as an `s x t` matrix.
    pub a_full: Matrix,
    /// `B^(E)`, `t x n` over `F_q`.
    pub b_full: Matrix,
    /// `a^(E) B^(E)` on its own.
    pub full_error: WordMatrix,
}

#[derive(Clone, Debug)]
pub struct ChannelDraw {
    pub error: WordMatrix,
    pub erasures: Option<ErasureInfo>,
    pub t_full: usize,
    pub parts: Option<HiddenParts>,
}

impl ChannelDraw {
    pub fn rank(&self, field: &Field) -> usize {
        rank_over_base(field, &self.error)
    }
}

/// Draws `e^(i) = a^(i,R) B^(i,R) + a^(i,C) B^(C) + a^(i,E) B^(E)` with a
/// full-error summand of rank `t`.
pub fn sample_erasure_scenario<R: Rng + ?Sized>(
    code: &InterleavedCode,
    rho: &[usize],
    gamma: usize,
    t: usize,
    rng: &mut R,
) -> Result<ChannelDraw> {
    let field = code.field();
    let (s, n, m) = (code.s(), code.n(), field.m());
    if rho.len() != s {
        return Err(Error::InvalidErasures(format!(
            "{} row-erasure ranks for interleaving order {s}",
            rho.len()
        )));
    }
    if let Some(&r) = rho.iter().find(|&&r| r > m || r > n) {
        return Err(Error::InvalidErasures(format!(
            "row-erasure rank {r} exceeds min(m, n)"
        )));
    }
    if gamma > n {
        return Err(Error::InvalidErasures(format!(
            "column-erasure rank {gamma} exceeds n = {n}"
        )));
    }
    let base = field.base();
    let a_row: Vec<Vec<Elem>> = rho
        .iter()
        .map(|&r| random_independent(field, r, rng))
        .collect();
    let b_row: Vec<Matrix> = rho
        .iter()
        .map(|&r| random_full_rank(&base, r, n, rng))
        .collect();
    let b_col = random_full_rank(&base, gamma, n, rng);
    let a_col = Matrix::from_fn(s, gamma, |_, _| random_elem(field, rng));
    let (full_error, a_full, b_full) = sample_rank_error_parts(field, s, n, t, rng)?;

    let col_part = times_base(field, &a_col, &b_col);
    let mut error = linalg::add(field, &full_error, &col_part);
    for i in 0..s {
        let a = Matrix::from_rows(vec![a_row[i].clone()]);
        let row_part = times_base(field, &a, &b_row[i]);
        for j in 0..n {
            let v = field.add(error.get(i, j), row_part.get(0, j));
            error.set(i, j, v);
        }
    }
    Ok(ChannelDraw {
        error,
        erasures: Some(ErasureInfo { a_row, b_col }),
        t_full: t,
        parts: Some(HiddenParts {
            b_row,
            a_col,
            a_full,
            b_full,
            full_error,
        }),
    })
}
