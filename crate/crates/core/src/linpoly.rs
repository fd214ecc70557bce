//! Linearized polynomials `f(x) = sum_i f_i x^{[i]}` over `F_{q^m}`.
//!
//! Addition is coefficientwise; the ring product is composition, which is not
//! commutative. All operations take the field explicitly.

use crate::error::{Error, Result};
use crate::ffield::{rank_over_base, Elem, Field};
use crate::linalg::Matrix;

/// Coefficients indexed by q-degree; trailing zeros are never stored, so the
/// zero polynomial is the empty sequence and has no q-degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinPoly {
    coeffs: Vec<Elem>,
}

impl LinPoly {
    pub fn zero() -> LinPoly {
        LinPoly { coeffs: Vec::new() }
    }

    /// The identity map `x = x^{[0]}`.
    pub fn x() -> LinPoly {
        LinPoly::monomial(Elem::ONE, 0)
    }

    /// `c * x^{[i]}`.
    pub fn monomial(c: Elem, i: usize) -> LinPoly {
        let mut coeffs = vec![Elem::ZERO; i + 1];
        coeffs[i] = c;
        LinPoly::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Elem>) -> LinPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^{[i]}` (zero past the end).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Coefficients padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<Elem> {
        let mut v = self.coeffs.clone();
        if v.len() < len {
            v.resize(len, Elem::ZERO);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// q-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Elem::ONE)
    }

    pub fn eval(&self, field: &Field, a: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut pow = a;
        for &c in &self.coeffs {
            acc = field.add(acc, field.mul(c, pow));
            pow = field.frobenius(pow, 1);
        }
        acc
    }

    pub fn eval_vec(&self, field: &Field, points: &[Elem]) -> Vec<Elem> {
        points.iter().map(|&a| self.eval(field, a)).collect()
    }

    pub fn add(&self, field: &Field, other: &LinPoly) -> LinPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        LinPoly::new(
            (0..len)
                .map(|i| field.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, field: &Field, other: &LinPoly) -> LinPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        LinPoly::new(
            (0..len)
                .map(|i| field.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    /// Left scalar multiple `c * f(x)`.
    pub fn scale(&self, field: &Field, c: Elem) -> LinPoly {
        LinPoly::new(self.coeffs.iter().map(|&a| field.mul(c, a)).collect())
    }

    /// `self(other(x))`: `c_k = sum_{i+j=k} a_i b_j^{[i]}`.
    pub fn compose(&self, field: &Field, other: &LinPoly) -> LinPoly {
        if self.is_zero() || other.is_zero() {
            return LinPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = field.mul(a, field.frobenius(b, i as i64));
                out[i + j] = field.add(out[i + j], term);
            }
        }
        LinPoly::new(out)
    }

    /// Reduction modulo `x^{[m]} - x`: the coefficient of `x^{[i]}` moves to
    /// `x^{[i mod m]}`. The result is the same map on `F_{q^m}`.
    pub fn mod_xqm(&self, field: &Field, m: usize) -> LinPoly {
        if self.coeffs.len() <= m {
            return self.clone();
        }
        let mut out = vec![Elem::ZERO; m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i % m] = field.add(out[i % m], c);
        }
        LinPoly::new(out)
    }

    /// Full q-reverse: `rev_j = p_{-j mod m}^{[j]}` for `j < m`.
    pub fn qreverse(&self, field: &Field, m: usize) -> Result<LinPoly> {
        if let Some(d) = self.degree() {
            if d >= m {
                return Err(Error::DegreeTooLarge {
                    degree: d,
                    bound: m - 1,
                });
            }
        }
        Ok(LinPoly::new(
            (0..m)
                .map(|j| field.frobenius(self.coeff((m - j) % m), j as i64))
                .collect(),
        ))
    }

    /// Finds `f` with `self = a(f(x))`.
    pub fn left_divide(&self, field: &Field, a: &LinPoly) -> Result<LinPoly> {
        let da = a.degree().ok_or(Error::NonzeroRemainder)?;
        let lead_inv = field.inv(a.coeffs[da]);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(dr) = rem.degree() {
            if dr < da {
                return Err(Error::NonzeroRemainder);
            }
            let j = dr - da;
            // a_da * f_j^{[da]} must cancel the leading coefficient
            let fj = field.frobenius(field.mul(rem.coeffs[dr], lead_inv), -(da as i64));
            if quot.len() <= j {
                quot.resize(j + 1, Elem::ZERO);
            }
            quot[j] = fj;
            rem = rem.sub(field, &a.compose(field, &LinPoly::monomial(fj, j)));
        }
        Ok(LinPoly::new(quot))
    }

    /// Finds `f` with `self = f(b(x))`.
    pub fn right_divide(&self, field: &Field, b: &LinPoly) -> Result<LinPoly> {
        let db = b.degree().ok_or(Error::NonzeroRemainder)?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(dr) = rem.degree() {
            if dr < db {
                return Err(Error::NonzeroRemainder);
            }
            let i = dr - db;
            // f_i * b_db^{[i]} must cancel the leading coefficient
            let fi = field.div(rem.coeffs[dr], field.frobenius(b.coeffs[db], i as i64));
            if quot.len() <= i {
                quot.resize(i + 1, Elem::ZERO);
            }
            quot[i] = fi;
            rem = rem.sub(field, &LinPoly::monomial(fi, i).compose(field, b));
        }
        Ok(LinPoly::new(quot))
    }

    /// The `m x m` base-field matrix `P` with `p(basis_j) = sum_l P_{l,j} out_l`
    /// where `out_dual` is the dual of the output basis.
    pub fn coordinate_matrix(
        &self,
        field: &Field,
        basis: &[Elem],
        out_dual: &[Elem],
    ) -> Matrix {
        Matrix::from_fn(out_dual.len(), basis.len(), |l, j| {
            let v = self.eval(field, basis[j]);
            Elem(field.trace(field.mul(v, out_dual[l])))
        })
    }
}

/// Monic polynomial of least q-degree vanishing on the `F_q`-span of `gens`.
///
/// Built one generator at a time: if `p` vanishes on `V` and `p(v) != 0`,
/// then `p^{[1]} - p(v)^{q-1} p` vanishes on `V + F_q v`.
pub fn min_subspace_poly(field: &Field, gens: &[Elem]) -> LinPoly {
    let mut p = LinPoly::x();
    for &v in gens {
        let val = p.eval(field, v);
        if val.is_zero() {
            continue;
        }
        let c = field.pow(val, (field.q() - 1) as u64);
        let step = LinPoly::new(vec![field.neg(c), Elem::ONE]);
        p = step.compose(field, &p);
    }
    p
}

/// Lagrange basis for points `g`: `L_i / L_i(g_i)` where `L_i` is the minimal
/// subspace polynomial of `g` without `g_i`.
pub fn lagrange_basis(field: &Field, g: &[Elem]) -> Result<Vec<LinPoly>> {
    let mut out = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let others: Vec<Elem> = g
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let li = min_subspace_poly(field, &others);
        let at = li.eval(field, g[i]);
        if at.is_zero() || li.degree() != Some(g.len() - 1) {
            return Err(Error::DependentPoints);
        }
        out.push(li.scale(field, field.inv(at)));
    }
    Ok(out)
}

/// Combines a precomputed Lagrange basis with values.
pub fn interpolate_with(field: &Field, basis: &[LinPoly], vals: &[Elem]) -> LinPoly {
    assert_eq!(basis.len(), vals.len());
    let len = basis.iter().map(|b| b.coeffs.len()).max().unwrap_or(0);
    let mut out = vec![Elem::ZERO; len];
    for (b, &v) in basis.iter().zip(vals) {
        if v.is_zero() {
            continue;
        }
        for (o, &c) in out.iter_mut().zip(&b.coeffs) {
            *o = field.add(*o, field.mul(v, c));
        }
    }
    LinPoly::new(out)
}

/// The unique polynomial of q-degree `< n` with `p(g_i) = vals_i`.
pub fn lagrange(field: &Field, g: &[Elem], vals: &[Elem]) -> Result<LinPoly> {
    if g.len() != vals.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points but {} values",
            g.len(),
            vals.len()
        )));
    }
    if rank_over_base(field, &Matrix::from_rows(vec![g.to_vec()])) < g.len() {
        return Err(Error::DependentPoints);
    }
    Ok(interpolate_with(field, &lagrange_basis(field, g)?, vals))
}
