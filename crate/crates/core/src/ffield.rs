//! Prime fields `F_q` and their extensions `F_{q^m}`.
//!
//! Elements are stored as the integer `c_0 + c_1 q + ... + c_{m-1} q^{m-1}`
//! where `c_i` are the coordinates in the polynomial basis `1, x, ..., x^{m-1}`
//! modulo the field's defining polynomial. Multiplication, inversion and the
//! Frobenius automorphism go through exp/log tables built from a primitive
//! element, so fields are limited to at most `2^20` elements.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u64 = 1 << 20;

/// An element of some [`Field`]; the wrapped integer is its base-`q` encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    q: u32,
    m: usize,
    order: u32,
    modulus: Vec<u32>,
    /// `exp[i] = alpha^i` for `i < 2(order - 1)`.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `q^i mod (order - 1)` for `i < m`.
    frob: Vec<u64>,
    base: Option<Field>,
}

/// The finite field `F_{q^m}` for a prime `q`.
///
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.t.q)
            .field("m", &self.t.m)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.q == other.t.q && self.t.modulus == other.t.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_order(q: u32, m: usize) -> Result<u32> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if m == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut order: u64 = 1;
    for _ in 0..m {
        order *= q as u64;
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge { q, m });
        }
    }
    Ok(order as u32)
}

// Dense polynomials over F_q, coefficients low to high.

fn poly_trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem_monic(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + q - (lead * bj) % q) % q;
            }
        }
        poly_trim(&mut r);
    }
    r
}

fn digits(mut v: u64, q: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % q as u64) as u32);
        v /= q as u64;
    }
    out
}

fn is_irreducible(modulus: &[u32], q: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    for d in 1..=m / 2 {
        let count = (q as u64).pow(d as u32);
        for v in 0..count {
            let mut divisor = digits(v, q, d);
            divisor.push(1);
            if poly_rem_monic(modulus, &divisor, q).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `m` over `F_q`, where
/// candidates are ordered by the integer encoding of their non-leading
/// coefficients (`c_0 + c_1 q + ...`).
pub fn default_modulus(q: u32, m: usize) -> Result<Vec<u32>> {
    let order = check_order(q, m)? as u64;
    for v in 0..order {
        let mut cand = digits(v, q, m);
        cand.push(1);
        if is_irreducible(&cand, q) {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Slow reference arithmetic on digit vectors, used only to build the tables.
struct SlowArith<'a> {
    q: u32,
    m: usize,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (q, m) = (self.q, self.m);
        let da = digits(a as u64, q, m);
        let db = digits(b as u64, q, m);
        let mut prod = vec![0u32; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
        let r = poly_rem_monic(&prod, self.modulus, q);
        r.iter().rev().fold(0u32, |acc, &c| acc * q + c)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl Field {
    /// Builds `F_{q^m}` with the default (first irreducible) modulus.
    pub fn new(q: u32, m: usize) -> Result<Field> {
        let modulus = default_modulus(q, m)?;
        Field::with_modulus(q, &modulus)
    }

    /// Builds `F_{q^m}` from an explicit monic irreducible modulus of degree `m`
    /// given low coefficient first.
    pub fn with_modulus(q: u32, modulus: &[u32]) -> Result<Field> {
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let m = modulus.len() - 1;
        let order = check_order(q, m)?;
        if modulus[m] != 1 || modulus.iter().any(|&c| c >= q) || !is_irreducible(modulus, q) {
            return Err(Error::InvalidModulus(q));
        }
        let slow = SlowArith { q, m, modulus };
        let n = (order - 1) as u64;
        let factors = prime_factors(n);
        let generator = (1..order)
            .find(|&g| factors.iter().all(|&p| slow.pow(g, n / p) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u32;
        for i in 0..n as usize {
            exp[i] = x;
            exp[i + n as usize] = x;
            log[x as usize] = i as u32;
            x = slow.mul(x, generator);
        }
        let mut frob = Vec::with_capacity(m);
        let mut p = 1u64;
        for _ in 0..m {
            frob.push(p % n.max(1));
            p = p * q as u64 % n.max(1);
        }
        let base = if m == 1 { None } else { Some(Field::new(q, 1)?) };
        Ok(Field {
            t: Arc::new(Tables {
                q,
                m,
                order,
                modulus: modulus.to_vec(),
                exp,
                log,
                frob,
                base,
            }),
        })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.t.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.t.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// The prime field `F_q` underlying this field.
    pub fn base(&self) -> Field {
        match &self.t.base {
            Some(b) => b.clone(),
            None => self.clone(),
        }
    }

    /// Validated conversion from the integer encoding.
    pub fn elem(&self, value: u64) -> Result<Elem> {
        if value >= self.t.order as u64 {
            return Err(Error::ElementOutOfRange {
                value,
                order: self.t.order,
            });
        }
        Ok(Elem(value as u32))
    }

    /// Embeds a base-field value `c < q`.
    #[inline]
    pub fn scalar(&self, c: u32) -> Elem {
        debug_assert!(c < self.t.q);
        Elem(c)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.t.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let q = self.t.q;
        if q == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % q + y % q) % q) * place;
            x /= q;
            y /= q;
            place = place.wrapping_mul(q);
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let q = self.t.q;
        if q == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            out += ((q - x % q) % q) * place;
            x /= q;
            place = place.wrapping_mul(q);
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.t.q == 2 {
            return Elem(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.t;
        Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let t = &*self.t;
        let n = t.order - 1;
        Elem(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.t;
        let n = (t.order - 1) as u64;
        Elem(t.exp[((t.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }

    /// `a^{[i]} = a^{q^i}`; negative `i` applies the inverse automorphism.
    #[inline]
    pub fn frobenius(&self, a: Elem, i: i64) -> Elem {
        if a.0 <= 1 {
            return a;
        }
        let t = &*self.t;
        let e = t.frob[i.rem_euclid(t.m as i64) as usize];
        let n = (t.order - 1) as u64;
        Elem(t.exp[((t.log[a.0 as usize] as u64 * e) % n) as usize])
    }

    /// Absolute trace to `F_q`, returned as the base-field value.
    pub fn trace(&self, a: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        for i in 0..self.t.m {
            acc = self.add(acc, self.frobenius(a, i as i64));
        }
        debug_assert!(acc.0 < self.t.q);
        acc.0
    }

    /// Polynomial-basis coordinates, low first.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        digits(a.0 as u64, self.t.q, self.t.m)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Elem {
        debug_assert!(coords.len() <= self.t.m);
        let q = self.t.q;
        Elem(coords.iter().rev().fold(0u32, |acc, &c| acc * q + c))
    }

    /// Slow polynomial-basis multiplication, independent of the tables.
    pub fn mul_reference(&self, a: Elem, b: Elem) -> Elem {
        let slow = SlowArith {
            q: self.t.q,
            m: self.t.m,
            modulus: &self.t.modulus,
        };
        Elem(slow.mul(a.0, b.0))
    }
}

/// Rank over `F_q` of an `s x n` matrix over `F_{q^m}`, after expanding each
/// entry into its `m` polynomial-basis coordinates (an `sm x n` matrix).
pub fn rank_over_base(field: &Field, rows: &Matrix) -> usize {
    linalg::rank(&field.base(), &expand_to_base(field, rows))
}

/// The `sm x n` base-field matrix of an `s x n` matrix over `F_{q^m}`; row
/// `i*m + c` holds coordinate `c` of row `i`.
pub fn expand_to_base(field: &Field, rows: &Matrix) -> Matrix {
    let m = field.m();
    let mut out = Matrix::zeros(rows.rows() * m, rows.cols());
    for i in 0..rows.rows() {
        for j in 0..rows.cols() {
            for (c, v) in field.coords(rows.get(i, j)).into_iter().enumerate() {
                out.set(i * m + c, j, Elem(v));
            }
        }
    }
    out
}

/// Inverse of [`expand_to_base`]: folds each block of `m` base-field rows into
/// one row over `F_{q^m}`.
pub fn fold_from_base(field: &Field, expanded: &Matrix) -> Matrix {
    let m = field.m();
    assert_eq!(expanded.rows() % m, 0);
    let s = expanded.rows() / m;
    let mut out = Matrix::zeros(s, expanded.cols());
    let mut buf = vec![0u32; m];
    for i in 0..s {
        for j in 0..expanded.cols() {
            for (c, slot) in buf.iter_mut().enumerate() {
                *slot = expanded.get(i * m + c, j).0;
            }
            out.set(i, j, field.from_coords(&buf));
        }
    }
    out
}

/// A basis of `F_{q^m}` over `F_q` together with its trace-dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPair {
    pub basis: Vec<Elem>,
    pub dual: Vec<Elem>,
    pub is_normal: bool,
}

impl BasisPair {
    /// Coordinates of `x` in `basis`: `x = sum_j c_j basis_j`.
    pub fn coords(&self, field: &Field, x: Elem) -> Vec<u32> {
        self.dual.iter().map(|&d| field.trace(field.mul(x, d))).collect()
    }
}

/// Trace-dual of a basis, or `DependentPoints` if `basis` is not a basis.
pub fn dual_basis(field: &Field, basis: &[Elem]) -> Result<Vec<Elem>> {
    let m = field.m();
    if basis.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} elements, field degree is {m}",
            basis.len()
        )));
    }
    let base = field.base();
    let mut gram = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            gram.set(i, j, Elem(field.trace(field.mul(basis[i], basis[j]))));
        }
    }
    let inv = linalg::inverse(&base, &gram).ok_or(Error::DependentPoints)?;
    Ok((0..m)
        .map(|j| {
            (0..m).fold(Elem::ZERO, |acc, k| {
                field.add(acc, field.mul(basis[k], field.scalar(inv.get(j, k).0)))
            })
        })
        .collect())
}

/// Orbit `(b, b^{[1]}, ..., b^{[m-1]})`.
pub fn frobenius_orbit(field: &Field, b: Elem) -> Vec<Elem> {
    (0..field.m()).map(|i| field.frobenius(b, i as i64)).collect()
}

/// The first element (in canonical order) generating a normal basis, paired
/// with its dual basis. The dual of a normal basis is again normal.
pub fn find_normal_basis(field: &Field) -> BasisPair {
    let m = field.m();
    for b in field.elements().skip(1) {
        let orbit = frobenius_orbit(field, b);
        let row = Matrix::from_rows(vec![orbit.clone()]);
        if rank_over_base(field, &row) == m {
            let dual = dual_basis(field, &orbit).expect("orbit is a basis");
            return BasisPair {
                basis: orbit,
                dual,
                is_normal: true,
            };
        }
    }
    unreachable!("every finite field has a normal basis")
}
