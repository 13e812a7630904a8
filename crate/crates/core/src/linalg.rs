//! Exact rational arithmetic: scalars, vectors, dense matrices, rank and
//! row-space membership.
//!
//! Every quantity is an arbitrary-precision fraction kept in lowest terms, so
//! no computation here can round or overflow. Row reduction always picks the
//! leftmost column that still has a nonzero entry and, within that column, the
//! first row (from the top of the unreduced block) whose entry is nonzero.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LinalgError;

/// An exact fraction `numerator / denominator` with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self, LinalgError> {
        if denominator == 0 {
            return Err(LinalgError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numerator.into(), denominator.into())))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rational(self.0.ceil())
    }

    /// Value as `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational(BigRational::from_integer(value))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = LinalgError;

    /// Accepts `p`, `p/q`, with an optional leading `-`, `+` or U+2212 minus.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let normalized = trimmed.replace('\u{2212}', "-");
        let bad = || LinalgError::ParseRational(trimmed.to_string());
        let (num, den) = match normalized.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (normalized.as_str(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(LinalgError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $assign_trait<&'a Rational> for Rational {
            fn $assign_method(&mut self, rhs: &'a Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div<Rational> for Rational {
    type Output = Rational;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A dense vector of exact rationals.
pub type RatVector = Vec<Rational>;

/// Builds a rational vector from integer entries.
pub fn int_vector(values: &[i64]) -> RatVector {
    values.iter().map(|&v| Rational::from_integer(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Rational], s: &Rational) -> RatVector {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vector(a: &[Rational]) -> bool {
    a.iter().all(Rational::is_zero)
}

/// Rescales a nonzero vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denominator());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| x.numerator() * (&lcm / x.denominator()))
        .collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &g).collect()
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from explicit rows; `cols` fixes the width so that a
    /// matrix with no rows still has a well-defined column count.
    pub fn from_rows(cols: usize, rows: Vec<RatVector>) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRow { row: i, expected: cols, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { rows: n, cols, entries })
    }

    pub fn from_int_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(cols, rows.iter().map(|r| int_vector(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension { expected: self.cols, found: v.len() });
        }
        Ok(self.row_vectors().map(|row| dot(row, v)).collect())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn reduce_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(pivot_row) = (next_row..self.rows).find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            self.swap_rows(next_row, pivot_row);
            let inv = self.get(next_row, col).recip().expect("pivot is nonzero");
            for c in col..self.cols {
                let idx = next_row * self.cols + c;
                if !self.entries[idx].is_zero() {
                    self.entries[idx] *= &inv;
                }
            }
            let pivot: RatVector = self.row(next_row).to_vec();
            for r in 0..self.rows {
                if r == next_row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (c, p) in pivot.iter().enumerate().skip(col) {
                    if !p.is_zero() {
                        let idx = r * self.cols + c;
                        self.entries[idx] -= &(&factor * p);
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut span = RowSpan::new(self.cols);
        for row in self.row_vectors() {
            span.insert(row);
        }
        span.rank()
    }

    /// Whether `v` is a rational combination of the rows.
    pub fn in_row_space(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension { expected: self.cols, found: v.len() });
        }
        let mut span = RowSpan::new(self.cols);
        for row in self.row_vectors() {
            span.insert(row);
        }
        Ok(span.contains(v))
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r.get(i, free);
            }
            basis.push(x);
        }
        basis
    }

    /// Inverse of a square matrix, or `Singular`.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let pivots = aug.reduce_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

/// Incrementally maintained row space in reduced echelon form.
///
/// Inserting a vector reduces it against the stored pivots; a nonzero
/// remainder becomes a new basis row. Stored rows keep a leading 1 at their
/// pivot column and zeros in every other stored pivot column.
#[derive(Clone, Debug)]
pub struct RowSpan {
    cols: usize,
    basis: Vec<(usize, RatVector)>,
}

impl RowSpan {
    pub fn new(cols: usize) -> Self {
        RowSpan { cols, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &[Rational]) -> RatVector {
        assert_eq!(v.len(), self.cols, "vector length does not match span width");
        let mut w = v.to_vec();
        for (pivot, row) in &self.basis {
            let factor = w[*pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    w[c] -= &(&factor * x);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v`; returns `true` when it was independent of the current span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pivot].recip().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for (_, row) in self.basis.iter_mut() {
            let factor = row[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (c, x) in w.iter().enumerate() {
                if !x.is_zero() {
                    row[c] -= &(&factor * x);
                }
            }
        }
        self.basis.push((pivot, w));
        true
    }
}

/// Rank of a list of vectors of common length `cols`.
pub fn rank_of<'a, I>(cols: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a [Rational]>,
{
    let mut span = RowSpan::new(cols);
    for v in vectors {
        span.insert(v);
    }
    span.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rationals_stay_reduced() {
        let x = r(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert!(x.denominator() > &BigInt::zero());
        assert_eq!(r(2, 4), r(1, 2));
    }

    #[test]
    fn parse_accepts_unicode_minus() {
        assert_eq!("\u{2212}3/2".parse::<Rational>().unwrap(), r(-3, 2));
        assert_eq!(" 7 ".parse::<Rational>().unwrap(), Rational::from(7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_uses_strings() {
        let v = vec![r(-3, 2), Rational::from(4)];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["-3/2","4"]"#);
        let back: Vec<Rational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rank_of_empty_and_identity() {
        assert_eq!(RatMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(RatMatrix::zeros(2, 5).rank(), 0);
    }

    #[test]
    fn row_space_membership() {
        let id = RatMatrix::identity(2);
        assert!(id.in_row_space(&int_vector(&[3, -5])).unwrap());
        let single = RatMatrix::from_int_rows(2, &[vec![1, 0]]).unwrap();
        assert!(!single.in_row_space(&int_vector(&[0, 1])).unwrap());
        assert!(matches!(
            single.in_row_space(&int_vector(&[1, 0, 0])),
            Err(LinalgError::Dimension { .. })
        ));
    }

    #[test]
    fn rref_follows_leftmost_pivot_rule() {
        let m = RatMatrix::from_int_rows(3, &[vec![0, 2, 4], vec![1, 1, 1], vec![2, 4, 6]]).unwrap();
        let (red, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(red.row(0), int_vector(&[1, 0, -1]).as_slice());
        assert_eq!(red.row(1), int_vector(&[0, 1, 2]).as_slice());
        assert!(is_zero_vector(red.row(2)));
    }

    #[test]
    fn nullspace_and_inverse() {
        let m = RatMatrix::from_int_rows(3, &[vec![1, 1, 1]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
        }
        let a = RatMatrix::from_int_rows(2, &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
        let sing = RatMatrix::from_int_rows(2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let v = vec![r(1, 2), r(-3, 4), Rational::zero()];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::zero()]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = RatMatrix::from_int_rows(2, &[vec![1, 2], vec![1]]).unwrap_err();
        assert_eq!(err, LinalgError::RaggedRow { row: 1, expected: 2, found: 1 });
    }
}
