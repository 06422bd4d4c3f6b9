//! Exact integer and rational vectors, primitive normalization, the conformal
//! order and orthant bookkeeping.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! reduced form with a positive denominator. Its `Display` prints `p/q`, and
//! plain `p` when the denominator is one.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

pub fn rat_from_int(v: &Int) -> Rational {
    Rational::from_integer(v.clone())
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<Int>().ok().map(Rational::from_integer),
    }
}

/// Integer vector of fixed dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec(pub Vec<Int>);

impl IntVec {
    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![Int::zero(); dim])
    }

    pub fn from_i64(vals: &[i64]) -> Self {
        IntVec(vals.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Int] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Int> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn dot(&self, other: &IntVec) -> Int {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn add(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), other.dim());
        IntVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), other.dim());
        IntVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Int) -> IntVec {
        IntVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn max_abs(&self) -> Int {
        self.0.iter().map(|a| a.abs()).max().unwrap_or_else(Int::zero)
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec(self.0.iter().map(rat_from_int).collect())
    }

    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, a| g.gcd(a))
    }
}

impl Index<usize> for IntVec {
    type Output = Int;
    fn index(&self, i: usize) -> &Int {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVec {
    fn index_mut(&mut self, i: usize) -> &mut Int {
        &mut self.0[i]
    }
}

impl From<Vec<Int>> for IntVec {
    fn from(v: Vec<Int>) -> Self {
        IntVec(v)
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for a in &self.0 {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }
}

/// Rational vector of fixed dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec(pub Vec<Rational>);

impl RatVec {
    pub fn zeros(dim: usize) -> Self {
        RatVec(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), other.dim());
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), other.dim());
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rational) -> RatVec {
        RatVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot_int(&self, other: &[Int]) -> Rational {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| a * rat_from_int(b))
            .sum()
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Returns the vector when every entry is integral.
    pub fn to_int(&self) -> Option<IntVec> {
        self.0
            .iter()
            .map(|a| a.is_integer().then(|| a.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntVec)
    }
}

impl Index<usize> for RatVec {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVec {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for a in &self.0 {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }
}

pub(crate) fn write_tuple<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| Int::from(v)));
        }
        Ok(IntMat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat {
            rows: n,
            cols: n,
            data: vec![Int::zero(); n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> IntVec {
        IntVec((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    /// Submatrix made of the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMat {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        IntMat {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> IntMat {
        let all: Vec<usize> = (0..self.rows).collect();
        self.select(&all, cols)
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVec {
        debug_assert_eq!(v.len(), self.cols);
        IntVec(
            (0..self.rows)
                .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn mul_rat_vec(&self, v: &[Rational]) -> RatVec {
        debug_assert_eq!(v.len(), self.cols);
        RatVec(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v)
                        .map(|(a, b)| b * rat_from_int(a))
                        .sum()
                })
                .collect(),
        )
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(rat_from_int).collect())
            .collect()
    }
}

/// Divides out the content and makes the first nonzero entry positive, so
/// parallel vectors share one representative.
pub fn normalize_primitive(v: &IntVec) -> Result<IntVec> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let lead_negative = v.iter().find(|a| !a.is_zero()).is_some_and(|a| a.is_negative());
    let g = if lead_negative { -g } else { g };
    Ok(IntVec(v.iter().map(|a| a / &g).collect()))
}

/// Divides out the content, keeping the direction.
pub fn primitive_part(v: &IntVec) -> Result<IntVec> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(IntVec(v.iter().map(|a| a / &g).collect()))
}

/// Clears denominators of a rational vector and returns its primitive
/// integer multiple (same direction). Zero maps to zero.
pub fn clear_denominators(v: &[Rational]) -> IntVec {
    let l = v.iter().fold(Int::one(), |l, a| l.lcm(a.denom()));
    let scaled = IntVec(v.iter().map(|a| (a * rat_from_int(&l)).to_integer()).collect());
    primitive_part(&scaled).unwrap_or(scaled)
}

pub(crate) fn conformal_slices<T: Signed + PartialOrd>(a: &[T], b: &[T]) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let opposite = (x.is_positive() && y.is_negative()) || (x.is_negative() && y.is_positive());
        !opposite && x.abs() <= y.abs()
    })
}

/// `a ⊑ b`: same orthant and `|a_i| <= |b_i|` for every coordinate.
pub fn conformal_leq(a: &IntVec, b: &IntVec) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(conformal_slices(&a.0, &b.0))
}

/// Conformal order on rational vectors, same rule entrywise.
pub fn conformal_leq_rat(a: &RatVec, b: &RatVec) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(conformal_slices(&a.0, &b.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// A closed coordinate orthant of `Z^d`, given by one sign per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthantId {
    pub signs: Vec<Sign>,
}

impl OrthantId {
    pub fn new(signs: Vec<Sign>) -> Self {
        OrthantId { signs }
    }

    /// Orthant number `k` in `0..2^d`; bit `i` set means coordinate `i` is negative.
    pub fn from_index(d: usize, k: usize) -> Self {
        let signs = (0..d)
            .map(|i| if k >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        OrthantId { signs }
    }

    pub fn all(d: usize) -> impl Iterator<Item = OrthantId> {
        (0..1usize << d).map(move |k| OrthantId::from_index(d, k))
    }

    /// The orthant of `v`, zeros counted as `+`.
    pub fn of(v: &IntVec) -> Self {
        OrthantId {
            signs: v
                .iter()
                .map(|a| if a.is_negative() { Sign::Minus } else { Sign::Plus })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn contains(&self, v: &IntVec) -> bool {
        v.dim() == self.dim()
            && v.iter().zip(&self.signs).all(|(a, s)| match s {
                Sign::Plus => !a.is_negative(),
                Sign::Minus => !a.is_positive(),
            })
    }
}

impl fmt::Display for OrthantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(
            f,
            self.signs
                .iter()
                .map(|s| if *s == Sign::Plus { "+" } else { "-" }),
        )
    }
}

pub fn orthant_members(vectors: &[IntVec], k: &OrthantId) -> Vec<IntVec> {
    vectors.iter().filter(|v| k.contains(v)).cloned().collect()
}
