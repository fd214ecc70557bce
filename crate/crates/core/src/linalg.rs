//! Dense matrices over a [`Field`] and Gaussian elimination.
//!
//! Reduced row echelon form uses one fixed convention everywhere: columns are
//! scanned left to right, the pivot of a column is the first nonzero entry at
//! or below the current pivot row, and kernel bases have one vector per free
//! column (in increasing column order) with a unit entry in that column.

use std::fmt;

use crate::ffield::{Elem, Field};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|e| e.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.cols == cols), "column mismatch");
        Matrix {
            rows: parts.iter().map(|m| m.rows).sum(),
            cols,
            data: parts.iter().flat_map(|m| m.data.iter().copied()).collect(),
        }
    }

    /// Places matrices with equal row counts side by side.
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(parts.iter().all(|m| m.rows == rows), "row mismatch");
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for m in parts {
                data.extend_from_slice(m.row(r));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn map(&self, mut f: impl FnMut(Elem) -> Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| f(e)).collect(),
        }
    }
}

pub fn add(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::from_fn(a.rows, a.cols, |r, c| field.add(a.get(r, c), b.get(r, c)))
}

pub fn sub(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::from_fn(a.rows, a.cols, |r, c| field.sub(a.get(r, c), b.get(r, c)))
}

pub fn mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.rows);
    Matrix::from_fn(a.rows, b.cols, |r, c| {
        (0..a.cols).fold(Elem::ZERO, |acc, k| {
            field.add(acc, field.mul(a.get(r, k), b.get(k, c)))
        })
    })
}

pub fn mul_vec(field: &Field, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| {
            a.row(r).iter().zip(v).fold(Elem::ZERO, |acc, (&x, &y)| {
                field.add(acc, field.mul(x, y))
            })
        })
        .collect()
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(field: &Field, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..m.cols {
        if prow == m.rows {
            break;
        }
        let Some(src) = (prow..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(prow, src);
        let inv = field.inv(m.get(prow, col));
        for c in col..m.cols {
            let v = m.get(prow, c);
            m.set(prow, c, field.mul(v, inv));
        }
        for r in 0..m.rows {
            if r == prow {
                continue;
            }
            let factor = m.get(r, col);
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(prow, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    rref(field, &mut work).len()
}

fn kernel_from_rref(field: &Field, reduced: &Matrix, pivots: &[usize]) -> Vec<Vec<Elem>> {
    let cols = reduced.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(reduced.get(row, free));
            }
            v
        })
        .collect()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel(field: &Field, m: &Matrix) -> Vec<Vec<Elem>> {
    let mut work = m.clone();
    let pivots = rref(field, &mut work);
    kernel_from_rref(field, &work, &pivots)
}

/// Solution set of `A x = b`: one particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Elem>,
    pub kernel: Vec<Vec<Elem>>,
    pub rank: usize,
}

/// Solves `A x = b`; `None` if the system is inconsistent.
pub fn solve(field: &Field, a: &Matrix, b: &[Elem]) -> Option<AffineSolution> {
    assert_eq!(a.rows, b.len());
    let rhs = Matrix::from_fn(b.len(), 1, |r, _| b[r]);
    let mut aug = Matrix::hstack(&[a, &rhs]);
    let pivots = rref(field, &mut aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut particular = vec![Elem::ZERO; a.cols];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = aug.get(row, a.cols);
    }
    // drop the rhs column before reading off the kernel
    let reduced = Matrix::from_fn(aug.rows, a.cols, |r, c| aug.get(r, c));
    Some(AffineSolution {
        kernel: kernel_from_rref(field, &reduced, &pivots),
        particular,
        rank: pivots.len(),
    })
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(field: &Field, a: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let id = Matrix::from_fn(n, n, |r, c| if r == c { Elem::ONE } else { Elem::ZERO });
    let mut aug = Matrix::hstack(&[a, &id]);
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |r, c| aug.get(r, n + c)))
}
