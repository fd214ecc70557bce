//! Interleaved Gabidulin codes: evaluation points, encoding, parity checks.

use crate::error::{Error, Result};
use crate::ffield::{find_normal_basis, rank_over_base, BasisPair, Elem, Field};
use crate::linalg::{self, Matrix};
use crate::linpoly::{interpolate_with, lagrange_basis, LinPoly};

/// An `s x n` array over `F_{q^m}`: codewords, received words and errors.
pub type WordMatrix = Matrix;

/// One message polynomial per interleaved row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageTuple {
    pub polys: Vec<LinPoly>,
}

impl MessageTuple {
    pub fn new(polys: Vec<LinPoly>) -> MessageTuple {
        MessageTuple { polys }
    }

    pub fn zero(s: usize) -> MessageTuple {
        MessageTuple {
            polys: vec![LinPoly::zero(); s],
        }
    }
}

/// `IGab[s; n, k^(1..s)]` over a fixed field with evaluation points `g`.
#[derive(Clone, Debug)]
pub struct InterleavedCode {
    field: Field,
    n: usize,
    k: Vec<usize>,
    g: Vec<Elem>,
    /// Base parity point `h'`: `sum_l h'_l g_l^{[j]} = 0` for `j < n - 1`.
    h: Vec<Elem>,
    /// Normal basis whose dual is `g`, when the code was built that way.
    normal: Option<BasisPair>,
    lagrange: Vec<LinPoly>,
}

impl InterleavedCode {
    /// Default points: the dual normal basis when `n = m`, otherwise the
    /// first `n` polynomial-basis elements `1, x, ..., x^{n-1}`.
    pub fn new(field: &Field, n: usize, k: &[usize]) -> Result<InterleavedCode> {
        if n == 0 || n > field.m() {
            return Err(Error::InvalidParameters(format!(
                "length n = {n} must be in 1..={}",
                field.m()
            )));
        }
        if n == field.m() {
            let nb = find_normal_basis(field);
            let mut code = InterleavedCode::with_points(field, k, nb.dual.clone())?;
            // h'_j = beta^{[j-1]}: sum_l h'_l g_l^{[j]} = Tr(beta^{[-1]} g_0^{[j]})
            code.h = (0..n)
                .map(|j| field.frobenius(nb.basis[0], j as i64 - 1))
                .collect();
            code.normal = Some(nb);
            Ok(code)
        } else {
            let q = u64::from(field.q());
            let g = (0..n)
                .map(|j| field.elem(q.pow(j as u32)))
                .collect::<Result<Vec<_>>>()?;
            InterleavedCode::with_points(field, k, g)
        }
    }

    /// Code with explicit evaluation points (must be `F_q`-independent).
    pub fn with_points(field: &Field, k: &[usize], g: Vec<Elem>) -> Result<InterleavedCode> {
        let n = g.len();
        if n == 0 || n > field.m() {
            return Err(Error::InvalidParameters(format!(
                "length n = {n} must be in 1..={}",
                field.m()
            )));
        }
        if k.is_empty() {
            return Err(Error::InvalidParameters(
                "interleaving order must be at least 1".into(),
            ));
        }
        if let Some(&bad) = k.iter().find(|&&ki| ki == 0 || ki > n) {
            return Err(Error::InvalidParameters(format!(
                "dimension k = {bad} must be in 1..={n}"
            )));
        }
        if rank_over_base(field, &Matrix::from_rows(vec![g.clone()])) < n {
            return Err(Error::DependentPoints);
        }
        let h = if n == 1 {
            vec![Elem::ONE]
        } else {
            let mut ker = linalg::kernel(field, &qvandermonde(field, n - 1, &g));
            debug_assert_eq!(ker.len(), 1);
            ker.pop().expect("q-Vandermonde of n-1 rows has a 1-dim kernel")
        };
        let lagrange = lagrange_basis(field, &g)?;
        Ok(InterleavedCode {
            field: field.clone(),
            n,
            k: k.to_vec(),
            g,
            h,
            normal: None,
            lagrange,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.k.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn k_max(&self) -> usize {
        *self.k.iter().max().expect("s >= 1")
    }

    pub fn k_sum(&self) -> usize {
        self.k.iter().sum()
    }

    pub fn g(&self) -> &[Elem] {
        &self.g
    }

    pub fn h_base(&self) -> &[Elem] {
        &self.h
    }

    pub fn normal_basis(&self) -> Option<&BasisPair> {
        self.normal.as_ref()
    }

    /// Minimum rank distance `n - max k + 1`.
    pub fn min_distance(&self) -> usize {
        self.n - self.k_max() + 1
    }

    /// Same points and parity data with new elementary dimensions.
    pub fn with_dims(&self, k: &[usize]) -> Result<InterleavedCode> {
        if k.is_empty() {
            return Err(Error::InvalidParameters(
                "interleaving order must be at least 1".into(),
            ));
        }
        if let Some(&bad) = k.iter().find(|&&ki| ki == 0 || ki > self.n) {
            return Err(Error::InvalidParameters(format!(
                "dimension k = {bad} must be in 1..={}",
                self.n
            )));
        }
        Ok(InterleavedCode {
            k: k.to_vec(),
            ..self.clone()
        })
    }

    /// The polynomial of q-degree `< n` taking `row` on `g`.
    pub fn interpolate_row(&self, row: &[Elem]) -> LinPoly {
        interpolate_with(&self.field, &self.lagrange, row)
    }

    pub fn check_message(&self, msg: &MessageTuple) -> Result<()> {
        if msg.polys.len() != self.s() {
            return Err(Error::DimensionMismatch(format!(
                "{} message polynomials for interleaving order {}",
                msg.polys.len(),
                self.s()
            )));
        }
        for (p, &ki) in msg.polys.iter().zip(&self.k) {
            if let Some(d) = p.degree() {
                if d >= ki {
                    return Err(Error::DegreeTooLarge {
                        degree: d,
                        bound: ki - 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Row `i` is `f^(i)` evaluated on `g`.
    pub fn encode(&self, msg: &MessageTuple) -> Result<WordMatrix> {
        self.check_message(msg)?;
        Ok(Matrix::from_rows(
            msg.polys
                .iter()
                .map(|p| p.eval_vec(&self.field, &self.g))
                .collect(),
        ))
    }

    /// Parity points of elementary code `i`: `h'^{[-(n-k_i-1)]}`.
    pub fn parity_points(&self, i: usize) -> Vec<Elem> {
        let shift = -((self.n - self.k[i]) as i64 - 1);
        self.h
            .iter()
            .map(|&x| self.field.frobenius(x, shift))
            .collect()
    }

    /// `(n - k_i) x n` parity-check matrix of elementary code `i`.
    pub fn parity_matrix(&self, i: usize) -> Matrix {
        qvandermonde(&self.field, self.n - self.k[i], &self.parity_points(i))
    }

    /// `s^(i) = r^(i) H^(i)T` for every row.
    pub fn syndromes(&self, r: &WordMatrix) -> Result<Vec<Vec<Elem>>> {
        self.check_word(r)?;
        Ok((0..self.s())
            .map(|i| linalg::mul_vec(&self.field, &self.parity_matrix(i), r.row(i)))
            .collect())
    }

    pub fn check_word(&self, r: &WordMatrix) -> Result<()> {
        if r.rows() != self.s() || r.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "word is {}x{}, code expects {}x{}",
                r.rows(),
                r.cols(),
                self.s(),
                self.n
            )));
        }
        Ok(())
    }

    /// Number of message tuples, if it fits in `limit`.
    pub fn codebook_size(&self, limit: u64) -> Option<u64> {
        let order = u64::from(self.field.order());
        let mut total: u64 = 1;
        for _ in 0..self.k_sum() {
            total = total.checked_mul(order).filter(|&t| t <= limit)?;
        }
        Some(total)
    }

    /// Message tuple number `index` in mixed-radix order (row 0, low
    /// coefficient first).
    pub fn message_at(&self, mut index: u64) -> MessageTuple {
        let order = u64::from(self.field.order());
        MessageTuple::new(
            self.k
                .iter()
                .map(|&ki| {
                    LinPoly::new(
                        (0..ki)
                            .map(|_| {
                                let c = Elem((index % order) as u32);
                                index /= order;
                                c
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// `rows x n` matrix with entry `(i, j) = a_j^{[i]}`.
pub fn qvandermonde(field: &Field, rows: usize, a: &[Elem]) -> Matrix {
    Matrix::from_fn(rows, a.len(), |i, j| field.frobenius(a[j], i as i64))
}

/// Rank over `F_q` of `a - b`.
pub fn rank_distance(field: &Field, a: &WordMatrix, b: &WordMatrix) -> Result<usize> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(rank_over_base(field, &linalg::sub(field, a, b)))
}
