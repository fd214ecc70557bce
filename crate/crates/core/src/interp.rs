//! Interpolation-based list and unique decoding.
//!
//! The interpolation step finds every `Q(x, y_1, ..., y_s) = Q_0(x) + sum_i
//! Q_i(y_i)` vanishing on the received tuples with `deg_q Q_0 < n - tau` and
//! `deg_q Q_i < n - tau - k_i + 1`. The root-finding step then solves the
//! linear system `Q_0 + sum_i Q_i(f^(i)) = 0` in the message coefficients.

use std::fmt;
use std::str::FromStr;

use crate::codes::{rank_distance, InterleavedCode, MessageTuple, WordMatrix};
use crate::error::{Error, Result};
use crate::ffield::{Elem, Field};
use crate::linalg::{self, AffineSolution, Matrix};
use crate::linpoly::LinPoly;

/// Default bound on the number of enumerated list candidates.
pub const DEFAULT_LIST_CAP: u64 = 65_536;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Unique,
    List,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "unique" => Ok(Mode::Unique),
            "list" => Ok(Mode::List),
            other => Err(Error::Parse(format!("unknown decoding mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Unique => "unique",
            Mode::List => "list",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    /// The root-finding matrix lacks full column rank.
    RankDeficient,
    /// The affine solution space has more than `list_cap` points.
    ListOverflow,
    /// The solution is inconsistent or too far from the received word.
    RadiusExceeded,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::RankDeficient => "rank-deficient",
            FailureReason::ListOverflow => "list-overflow",
            FailureReason::RadiusExceeded => "radius-exceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Unique(MessageTuple),
    List(Vec<MessageTuple>),
    Failure(FailureReason),
}

impl DecodeOutcome {
    pub fn messages(&self) -> &[MessageTuple] {
        match self {
            DecodeOutcome::Unique(m) => std::slice::from_ref(m),
            DecodeOutcome::List(l) => l,
            DecodeOutcome::Failure(_) => &[],
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure(_))
    }
}

/// Largest `tau` with `tau (s+1) < sn - sum k + s`.
pub fn radius_list(code: &InterleavedCode) -> usize {
    let s = code.s();
    (s * code.n() + s - code.k_sum() - 1) / (s + 1)
}

/// `floor((sn - sum k) / (s+1))`.
pub fn radius_unique(code: &InterleavedCode) -> usize {
    let s = code.s();
    (s * code.n() - code.k_sum()) / (s + 1)
}

pub fn radius(code: &InterleavedCode, mode: Mode) -> usize {
    match mode {
        Mode::Unique => radius_unique(code),
        Mode::List => radius_list(code),
    }
}

/// Column block widths of the interpolation matrix: `n - tau` for `Q_0`, then
/// `n - tau - k_i + 1` for each `Q_i`.
pub fn block_widths(code: &InterleavedCode, tau: usize) -> Result<Vec<usize>> {
    let n = code.n();
    let mut widths = Vec::with_capacity(code.s() + 1);
    if tau >= n {
        return Err(Error::RadiusInfeasible(format!("tau = {tau} >= n = {n}")));
    }
    widths.push(n - tau);
    for &ki in code.k() {
        if n < tau + ki {
            return Err(Error::RadiusInfeasible(format!(
                "tau = {tau} leaves no coefficient for a message of dimension {ki}"
            )));
        }
        widths.push(n - tau - ki + 1);
    }
    Ok(widths)
}

/// `R = ( qvan_{n-tau}(g)^T | qvan_{n-tau-k_1+1}(r^(1))^T | ... )`.
pub fn build_interp_matrix(code: &InterleavedCode, r: &WordMatrix, tau: usize) -> Result<Matrix> {
    code.check_word(r)?;
    let field = code.field();
    let widths = block_widths(code, tau)?;
    let cols: usize = widths.iter().sum();
    let mut out = Matrix::zeros(code.n(), cols);
    for j in 0..code.n() {
        let mut c = 0;
        for (b, &w) in widths.iter().enumerate() {
            let point = if b == 0 { code.g()[j] } else { r.get(b - 1, j) };
            for e in 0..w {
                out.set(j, c, field.frobenius(point, e as i64));
                c += 1;
            }
        }
    }
    Ok(out)
}

/// A kernel basis of the interpolation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpSolution {
    pub tau: usize,
    pub widths: Vec<usize>,
    pub basis: Vec<Vec<Elem>>,
    /// Rank of the interpolation matrix.
    pub rank: usize,
}

impl InterpSolution {
    pub fn d_i(&self) -> usize {
        self.basis.len()
    }

    /// `q^{(h)}_{i,j}`, zero outside the coefficient range of block `i`.
    pub fn coeff(&self, h: usize, i: usize, j: usize) -> Elem {
        if j >= self.widths[i] {
            return Elem::ZERO;
        }
        let off: usize = self.widths[..i].iter().sum();
        self.basis[h][off + j]
    }

    /// `Q^{(h)}_i` as a polynomial (`i = 0` is `Q_0`).
    pub fn poly(&self, h: usize, i: usize) -> LinPoly {
        LinPoly::new((0..self.widths[i]).map(|j| self.coeff(h, i, j)).collect())
    }

    /// `Q^{(h)}(x, f^(1)(x), ..., f^(s)(x))`.
    pub fn apply(&self, field: &Field, h: usize, msg: &MessageTuple) -> LinPoly {
        msg.polys
            .iter()
            .enumerate()
            .fold(self.poly(h, 0), |acc, (i, f)| {
                acc.add(field, &self.poly(h, i + 1).compose(field, f))
            })
    }
}

/// Full kernel basis of the interpolation matrix (fixed RREF convention).
pub fn interpolate(code: &InterleavedCode, r: &WordMatrix, tau: usize) -> Result<InterpSolution> {
    let field = code.field();
    let mut reduced = build_interp_matrix(code, r, tau)?;
    let pivots = linalg::rref(field, &mut reduced);
    let rank = pivots.len();
    Ok(InterpSolution {
        tau,
        widths: block_widths(code, tau)?,
        basis: linalg::kernel(field, &reduced),
        rank,
    })
}

/// `d_I x (s+1)` matrix of lowest coefficients `q^{(h)}_{i,0}`, `i = 0..=s`.
pub fn q_bar_0(sol: &InterpSolution) -> Matrix {
    Matrix::from_fn(sol.d_i(), sol.widths.len(), |h, i| sol.coeff(h, i, 0))
}

/// `Q_0^{[shift]}`: the `d_I x s` matrix of `q^{(h)}_{i,0}` for `i >= 1`,
/// each raised to the `shift`-th Frobenius power.
pub fn q_0_block(field: &Field, sol: &InterpSolution, shift: i64) -> Matrix {
    let s = sol.widths.len() - 1;
    Matrix::from_fn(sol.d_i(), s, |h, i| {
        field.frobenius(sol.coeff(h, i + 1, 0), shift)
    })
}

/// The root-finding system `Q u = q_0` in the unknowns
/// `u = (f_0, f_1^{[-1]}, ..., f_{k-1}^{[-(k-1)]})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub matrix: Matrix,
    pub rhs: Vec<Elem>,
    /// `(b, i)` for each column: unknown `f_b^{(i)[-b]}`.
    pub columns: Vec<(usize, usize)>,
    /// Number of equation blocks, `n - tau`.
    pub blocks: usize,
    pub d_i: usize,
}

impl RootSystem {
    /// Message tuple from a solution vector.
    pub fn message(&self, field: &Field, k: &[usize], u: &[Elem]) -> MessageTuple {
        let mut coeffs: Vec<Vec<Elem>> = k.iter().map(|&ki| vec![Elem::ZERO; ki]).collect();
        for (&(b, i), &v) in self.columns.iter().zip(u) {
            coeffs[i][b] = field.frobenius(v, b as i64);
        }
        MessageTuple::new(coeffs.into_iter().map(LinPoly::new).collect())
    }

    /// Solution vector of a message tuple.
    pub fn unknowns(&self, field: &Field, msg: &MessageTuple) -> Vec<Elem> {
        self.columns
            .iter()
            .map(|&(b, i)| field.frobenius(msg.polys[i].coeff(b), -(b as i64)))
            .collect()
    }

    pub fn full_rank(&self) -> usize {
        self.columns.len()
    }
}

/// Rows are ordered by equation block `p` then basis polynomial `h`; row
/// `(p, h)` is coefficient `p` of `Q^{(h)}(x, f(x)) = 0` raised to `[-p]`.
pub fn build_rootfind_system(code: &InterleavedCode, sol: &InterpSolution) -> RootSystem {
    let field = code.field();
    let k = code.k();
    let blocks = sol.widths[0];
    let d_i = sol.d_i();
    let columns: Vec<(usize, usize)> = (0..code.k_max())
        .flat_map(|b| (0..k.len()).filter(move |&i| b < k[i]).map(move |i| (b, i)))
        .collect();
    let mut matrix = Matrix::zeros(blocks * d_i, columns.len());
    let mut rhs = vec![Elem::ZERO; blocks * d_i];
    for p in 0..blocks {
        let shift = -(p as i64);
        for h in 0..d_i {
            let row = p * d_i + h;
            rhs[row] = field.neg(field.frobenius(sol.coeff(h, 0, p), shift));
            for (c, &(b, i)) in columns.iter().enumerate() {
                if b <= p {
                    let q = sol.coeff(h, i + 1, p - b);
                    matrix.set(row, c, field.frobenius(q, shift));
                }
            }
        }
    }
    RootSystem {
        matrix,
        rhs,
        columns,
        blocks,
        d_i,
    }
}

/// Block forward substitution: solve `Q_0^{[-b]} u_b = rhs_b - (known terms)`
/// for `b = 0, 1, ...`, then check every remaining equation. `None` if some
/// diagonal block lacks full column rank or the system is inconsistent.
pub fn solve_recursive(field: &Field, sys: &RootSystem) -> Option<Vec<Elem>> {
    let d_i = sys.d_i;
    let mut u = vec![Elem::ZERO; sys.columns.len()];
    let mut start = 0;
    while start < sys.columns.len() {
        let b = sys.columns[start].0;
        let end = start + sys.columns[start..].iter().take_while(|c| c.0 == b).count();
        if b >= sys.blocks {
            return None;
        }
        let rows = b * d_i..(b + 1) * d_i;
        let diag = Matrix::from_fn(d_i, end - start, |h, c| sys.matrix.get(b * d_i + h, start + c));
        let target: Vec<Elem> = rows
            .map(|row| {
                (0..start).fold(sys.rhs[row], |acc, c| {
                    field.sub(acc, field.mul(sys.matrix.get(row, c), u[c]))
                })
            })
            .collect();
        let sol = linalg::solve(field, &diag, &target)?;
        if !sol.kernel.is_empty() {
            return None;
        }
        u[start..end].copy_from_slice(&sol.particular);
        start = end;
    }
    (linalg::mul_vec(field, &sys.matrix, &u) == sys.rhs).then_some(u)
}

/// Gaussian elimination on the whole system.
pub fn solve_direct(field: &Field, sys: &RootSystem) -> Option<AffineSolution> {
    linalg::solve(field, &sys.matrix, &sys.rhs)
}

/// Decoder state useful for diagnostics and lemma checks.
#[derive(Clone, Debug)]
pub struct DecodeReport {
    pub outcome: DecodeOutcome,
    pub tau: usize,
    pub d_i: usize,
    pub rank_r: usize,
    /// Rank of the root-finding matrix and its full column rank.
    pub rank_q: usize,
    pub full_rank: usize,
    pub rank_q0: usize,
    pub rank_q_bar0: usize,
    /// Dimension of the affine solution space, if consistent.
    pub solution_dim: Option<usize>,
}

/// Root finding for a given interpolation solution.
pub fn root_find(
    code: &InterleavedCode,
    r: &WordMatrix,
    sol: &InterpSolution,
    mode: Mode,
    list_cap: u64,
) -> DecodeOutcome {
    root_find_report(code, r, sol, mode, list_cap).outcome
}

fn root_find_report(
    code: &InterleavedCode,
    r: &WordMatrix,
    sol: &InterpSolution,
    mode: Mode,
    list_cap: u64,
) -> DecodeReport {
    let field = code.field();
    let sys = build_rootfind_system(code, sol);
    let rank_q0 = linalg::rank(field, &q_0_block(field, sol, 0));
    let rank_q_bar0 = linalg::rank(field, &q_bar_0(sol));
    let direct = solve_direct(field, &sys);
    let rank_q = linalg::rank(field, &sys.matrix);
    let within = |msg: &MessageTuple| {
        let c = code.encode(msg).expect("degree bounds hold by construction");
        rank_distance(field, &c, r).expect("shapes match") <= sol.tau
    };
    let outcome = match mode {
        Mode::Unique => {
            if rank_q < sys.full_rank() {
                DecodeOutcome::Failure(FailureReason::RankDeficient)
            } else {
                let u = if rank_q0 == code.s() {
                    solve_recursive(field, &sys)
                } else {
                    direct.as_ref().map(|d| d.particular.clone())
                };
                match u.map(|u| sys.message(field, code.k(), &u)) {
                    Some(msg) if within(&msg) => DecodeOutcome::Unique(msg),
                    _ => DecodeOutcome::Failure(FailureReason::RadiusExceeded),
                }
            }
        }
        Mode::List => match &direct {
            None => DecodeOutcome::List(Vec::new()),
            Some(aff) => match enumerate(field, aff, list_cap) {
                None => DecodeOutcome::Failure(FailureReason::ListOverflow),
                Some(cands) => DecodeOutcome::List(
                    cands
                        .iter()
                        .map(|u| sys.message(field, code.k(), u))
                        .filter(within)
                        .collect(),
                ),
            },
        },
    };
    DecodeReport {
        outcome,
        tau: sol.tau,
        d_i: sol.d_i(),
        rank_r: sol.rank,
        rank_q,
        full_rank: sys.full_rank(),
        rank_q0,
        rank_q_bar0,
        solution_dim: direct.map(|d| d.kernel.len()),
    }
}

/// All points of an affine space over `F_{q^m}`, or `None` past `cap`.
fn enumerate(field: &Field, aff: &AffineSolution, cap: u64) -> Option<Vec<Vec<Elem>>> {
    let order = u64::from(field.order());
    let dim = aff.kernel.len();
    let mut count: u64 = 1;
    for _ in 0..dim {
        count = count.checked_mul(order).filter(|&c| c <= cap)?;
    }
    Some(
        (0..count)
            .map(|mut idx| {
                let mut v = aff.particular.clone();
                for basis in &aff.kernel {
                    let c = Elem((idx % order) as u32);
                    idx /= order;
                    if c.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(basis) {
                        *x = field.add(*x, field.mul(c, y));
                    }
                }
                v
            })
            .collect(),
    )
}

/// Interpolate at the mode's radius, then find roots.
pub fn decode(
    code: &InterleavedCode,
    r: &WordMatrix,
    mode: Mode,
    list_cap: u64,
) -> Result<DecodeOutcome> {
    Ok(decode_report(code, r, mode, list_cap)?.outcome)
}

pub fn decode_report(
    code: &InterleavedCode,
    r: &WordMatrix,
    mode: Mode,
    list_cap: u64,
) -> Result<DecodeReport> {
    let sol = interpolate(code, r, radius(code, mode))?;
    Ok(root_find_report(code, r, &sol, mode, list_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{random_vec, sample_rank_error, trial_rng};
    use rand::Rng;

    fn base_code() -> InterleavedCode {
        InterleavedCode::new(&Field::new(2, 7).unwrap(), 7, &[2, 2]).unwrap()
    }

    fn random_msg<R: Rng>(code: &InterleavedCode, rng: &mut R) -> MessageTuple {
        MessageTuple::new(
            code.k()
                .iter()
                .map(|&ki| LinPoly::new(random_vec(code.field(), ki, rng)))
                .collect(),
        )
    }

    #[test]
    fn radii() {
        assert_eq!((radius_list(&base_code()), radius_unique(&base_code())), (3, 3));
        let f = Field::new(2, 7).unwrap();
        let s1 = InterleavedCode::new(&f, 7, &[3]).unwrap();
        assert_eq!((radius_list(&s1), radius_unique(&s1)), (2, 2));
        let f4 = Field::new(2, 4).unwrap();
        let tiny = InterleavedCode::new(&f4, 4, &[1, 1]).unwrap();
        assert_eq!((radius_list(&tiny), radius_unique(&tiny)), (2, 2));
        // 3 * 6 + 3 - 7 = 14 -> tau < 3.5, unique 11 / 4 = 2
        let f6 = Field::new(2, 6).unwrap();
        let mixed = InterleavedCode::new(&f6, 6, &[1, 2, 4]).unwrap();
        assert_eq!((radius_list(&mixed), radius_unique(&mixed)), (3, 2));
    }

    #[test]
    fn interp_matrix_shape_and_blocks() {
        let code = base_code();
        let r = Matrix::zeros(2, 7);
        let m = build_interp_matrix(&code, &r, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (7, 10));
        for j in 0..7 {
            assert!(m.row(j)[4..].iter().all(|x| x.is_zero()));
        }
        assert!(matches!(
            build_interp_matrix(&code, &r, 6),
            Err(Error::RadiusInfeasible(_))
        ));
    }

    #[test]
    fn zero_error_decodes_uniquely() {
        let code = base_code();
        let mut rng = trial_rng(21, 0);
        for _ in 0..20 {
            let msg = random_msg(&code, &mut rng);
            let c = code.encode(&msg).unwrap();
            let sol = interpolate(&code, &c, 3).unwrap();
            for h in 0..sol.d_i() {
                assert!(sol.apply(code.field(), h, &msg).is_zero());
            }
            let sys = build_rootfind_system(&code, &sol);
            assert_eq!(
                linalg::mul_vec(code.field(), &sys.matrix, &sys.unknowns(code.field(), &msg)),
                sys.rhs
            );
            assert_eq!(
                decode(&code, &c, Mode::Unique, DEFAULT_LIST_CAP).unwrap(),
                DecodeOutcome::Unique(msg.clone())
            );
            assert_eq!(
                decode(&code, &c, Mode::List, DEFAULT_LIST_CAP).unwrap(),
                DecodeOutcome::List(vec![msg])
            );
        }
    }

    #[test]
    fn root_system_shape_matches_worked_example() {
        let code = base_code();
        let mut rng = trial_rng(22, 0);
        let msg = random_msg(&code, &mut rng);
        let e = sample_rank_error(code.field(), 2, 7, 3, &mut rng).unwrap();
        let r = linalg::add(code.field(), &code.encode(&msg).unwrap(), &e);
        let mut sol = interpolate(&code, &r, 3).unwrap();
        sol.basis.truncate(1);
        let sys = build_rootfind_system(&code, &sol);
        assert_eq!((sys.matrix.rows(), sys.matrix.cols()), (4, 4));
        assert_eq!(sys.columns, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let f = code.field();
        // row 3 is (0, 0, q_{1,2}^{[-3]}, q_{2,2}^{[-3]})
        assert!(sys.matrix.get(3, 0).is_zero() && sys.matrix.get(3, 1).is_zero());
        assert_eq!(sys.matrix.get(3, 2), f.frobenius(sol.coeff(0, 1, 2), -3));
        assert_eq!(sys.matrix.get(0, 2), Elem::ZERO);
        assert_eq!(sys.matrix.get(1, 0), f.frobenius(sol.coeff(0, 1, 1), -1));
    }

    #[test]
    fn frobenius_bookkeeping_recovers_raw_equations() {
        // raising block row p by [p] gives coefficient p of Q(x, f(x))
        let code = base_code();
        let f = code.field();
        let mut rng = trial_rng(23, 0);
        let msg = random_msg(&code, &mut rng);
        let e = sample_rank_error(f, 2, 7, 2, &mut rng).unwrap();
        let r = linalg::add(f, &code.encode(&msg).unwrap(), &e);
        let sol = interpolate(&code, &r, 3).unwrap();
        let sys = build_rootfind_system(&code, &sol);
        let other = random_msg(&code, &mut rng);
        let u = sys.unknowns(f, &other);
        let lhs = linalg::mul_vec(f, &sys.matrix, &u);
        for h in 0..sol.d_i() {
            let poly = sol.apply(f, h, &other);
            for p in 0..sys.blocks {
                let row = p * sys.d_i + h;
                let raw = f.frobenius(f.sub(lhs[row], sys.rhs[row]), p as i64);
                assert_eq!(raw, poly.coeff(p));
            }
        }
    }

    #[test]
    fn recursive_solver_matches_direct_solve() {
        let code = base_code();
        let f = code.field();
        for trial in 0..200 {
            let mut rng = trial_rng(24, trial);
            let msg = random_msg(&code, &mut rng);
            let e = sample_rank_error(f, 2, 7, 3, &mut rng).unwrap();
            let r = linalg::add(f, &code.encode(&msg).unwrap(), &e);
            let sol = interpolate(&code, &r, 3).unwrap();
            let sys = build_rootfind_system(&code, &sol);
            if linalg::rank(f, &q_0_block(f, &sol, 0)) == 2 {
                let rec = solve_recursive(f, &sys).unwrap();
                let dir = solve_direct(f, &sys).unwrap();
                assert!(dir.kernel.is_empty());
                assert_eq!(rec, dir.particular);
                assert_eq!(sys.message(f, code.k(), &rec), msg);
            }
        }
    }

    #[test]
    fn unequal_dimensions_decode() {
        let f = Field::new(2, 6).unwrap();
        let code = InterleavedCode::new(&f, 6, &[1, 2, 3]).unwrap();
        let tau = radius_unique(&code);
        assert_eq!(tau, 3);
        let mut ok = 0;
        for trial in 0..50 {
            let mut rng = trial_rng(25, trial);
            let msg = random_msg(&code, &mut rng);
            let e = sample_rank_error(&f, 3, 6, tau, &mut rng).unwrap();
            let r = linalg::add(&f, &code.encode(&msg).unwrap(), &e);
            match decode(&code, &r, Mode::Unique, DEFAULT_LIST_CAP).unwrap() {
                DecodeOutcome::Unique(m) => {
                    assert_eq!(m, msg);
                    ok += 1;
                }
                DecodeOutcome::Failure(_) => {}
                DecodeOutcome::List(_) => unreachable!(),
            }
            let list = decode(&code, &r, Mode::List, DEFAULT_LIST_CAP).unwrap();
            assert!(list.messages().contains(&msg));
        }
        assert!(ok > 40);
    }

    #[test]
    fn list_overflow_is_reported() {
        let f = Field::new(2, 4).unwrap();
        let code = InterleavedCode::new(&f, 4, &[1, 1]).unwrap();
        let mut seen = false;
        for trial in 0..500 {
            let mut rng = trial_rng(26, trial);
            let r = Matrix::from_rows(vec![random_vec(&f, 4, &mut rng), random_vec(&f, 4, &mut rng)]);
            let rep = decode_report(&code, &r, Mode::List, 1).unwrap();
            if rep.solution_dim.is_some_and(|d| d > 0) {
                assert_eq!(rep.outcome, DecodeOutcome::Failure(FailureReason::ListOverflow));
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn mode_round_trips_through_text() {
        for m in [Mode::Unique, Mode::List] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("both".parse::<Mode>().is_err());
    }
}
