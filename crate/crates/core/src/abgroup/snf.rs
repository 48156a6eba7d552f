//! Smith normal form over the integers.
//!
//! The elimination runs generically over [`SnfInt`]. Callers first try the
//! checked `i64` instantiation and rerun on [`BigInt`] when any intermediate
//! entry overflows, so results are always exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| x.into()).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Diagonal entries `d[0..min(rows, cols)]`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are the smallest-magnitude nonzero entry of the remaining block,
/// first in row-major order, so the output is reproducible.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let small = Dense::<i64>::try_from_fn(a.rows, a.cols, |i, j| a.get(i, j).to_i64())
        .and_then(|m| smith(m, true, true));
    match small {
        Some(s) => s.into_public(),
        None => {
            let m = Dense::from_fn(a.rows, a.cols, |i, j| a.get(i, j).clone());
            smith(m, true, true)
                .expect("big-integer elimination cannot overflow")
                .into_public()
        }
    }
}

/// Integer-like scalar the elimination can run over. Every operation that can
/// overflow reports it with `None`.
pub(crate) trait SnfInt: Clone + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_u64(x: u64) -> Option<Self>;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    fn checked_neg(&self) -> Option<Self>;
    /// `self - q * other`
    fn checked_sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
    /// Truncating quotient.
    fn checked_quot(&self, other: &Self) -> Option<Self>;
    /// `other` is a multiple of `self`.
    fn divides(&self, other: &Self) -> bool;
    /// Least non-negative residue modulo `m >= 1`.
    fn rem_u64(&self, m: u64) -> u64;
    fn to_u64(&self) -> Option<u64>;
    fn to_bigint(&self) -> BigInt;
}

impl SnfInt for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn from_u64(x: u64) -> Option<Self> {
        i64::try_from(x).ok()
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn checked_sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*other)?)
    }
    fn checked_quot(&self, other: &Self) -> Option<Self> {
        self.checked_div(*other)
    }
    fn divides(&self, other: &Self) -> bool {
        if *self == 0 {
            *other == 0
        } else {
            other.checked_rem(*self).is_none_or(|r| r == 0)
        }
    }
    fn rem_u64(&self, m: u64) -> u64 {
        (*self as i128).rem_euclid(m as i128) as u64
    }
    fn to_u64(&self) -> Option<u64> {
        u64::try_from(*self).ok()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfInt for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_u64(x: u64) -> Option<Self> {
        Some(BigInt::from(x))
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
    fn checked_quot(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(other)
        } else {
            Zero::is_zero(&(other % self))
        }
    }
    fn rem_u64(&self, m: u64) -> u64 {
        ToPrimitive::to_u64(&self.mod_floor(&BigInt::from(m)))
            .expect("residue below a u64 modulus")
    }
    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Row-major dense matrix used by the elimination.
#[derive(Clone, Debug)]
pub(crate) struct Dense<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: SnfInt> Dense<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Dense { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Option<T>,
    ) -> Option<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Some(Dense { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::unit() } else { T::nil() })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for j in 0..self.cols {
            if self.at(src, j).is_nil() {
                continue;
            }
            let v = self.at(dst, j).checked_sub_mul(q, self.at(src, j))?;
            *self.at_mut(dst, j) = v;
        }
        Some(())
    }

    /// col[dst] -= q * col[src]
    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        for i in 0..self.rows {
            if self.at(i, src).is_nil() {
                continue;
            }
            let v = self.at(i, dst).checked_sub_mul(q, self.at(i, src))?;
            *self.at_mut(i, dst) = v;
        }
        Some(())
    }

    fn neg_row(&mut self, r: usize) -> Option<()> {
        for j in 0..self.cols {
            let v = self.at(r, j).checked_neg()?;
            *self.at_mut(r, j) = v;
        }
        Some(())
    }

    fn neg_col(&mut self, c: usize) -> Option<()> {
        for i in 0..self.rows {
            let v = self.at(i, c).checked_neg()?;
            *self.at_mut(i, c) = v;
        }
        Some(())
    }

    fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).to_bigint())
    }
}

/// Output of the generic elimination. `u * a * v` is diagonal with entries `diag`.
#[derive(Clone, Debug)]
pub(crate) struct Smith<T> {
    pub diag: Vec<T>,
    pub rows: usize,
    pub cols: usize,
    pub u: Option<Dense<T>>,
    pub u_inv: Option<Dense<T>>,
    pub v: Option<Dense<T>>,
}

impl<T: SnfInt> Smith<T> {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_nil()).count()
    }

    fn into_public(self) -> SmithForm {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.to_bigint());
        }
        SmithForm {
            u: self.u.expect("tracked").to_int_matrix(),
            d,
            v: self.v.expect("tracked").to_int_matrix(),
        }
    }
}

struct Transforms<T> {
    u: Option<Dense<T>>,
    u_inv: Option<Dense<T>>,
    v: Option<Dense<T>>,
}

impl<T: SnfInt> Transforms<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }

    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        if let Some(u) = &mut self.u {
            u.row_sub_mul(dst, src, q)?;
        }
        if let Some(ui) = &mut self.u_inv {
            // inverse of (row dst -= q row src) is (col src += q col dst)
            let mq = q.checked_neg()?;
            ui.col_sub_mul(src, dst, &mq)?;
        }
        Some(())
    }

    fn neg_row(&mut self, r: usize) -> Option<()> {
        if let Some(u) = &mut self.u {
            u.neg_row(r)?;
        }
        if let Some(ui) = &mut self.u_inv {
            ui.neg_col(r)?;
        }
        Some(())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        if let Some(v) = &mut self.v {
            v.col_sub_mul(dst, src, q)?;
        }
        Some(())
    }
}

fn min_nonzero<T: SnfInt>(a: &Dense<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.at(i, j);
            if x.is_nil() {
                continue;
            }
            match best {
                Some((bi, bj)) if !x.abs_lt(a.at(bi, bj)) => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Generic Smith elimination. Returns `None` on arithmetic overflow.
pub(crate) fn smith<T: SnfInt>(mut a: Dense<T>, track_u: bool, track_v: bool) -> Option<Smith<T>> {
    let (m, n) = (a.rows, a.cols);
    let mut tr = Transforms {
        u: track_u.then(|| Dense::identity(m)),
        u_inv: track_u.then(|| Dense::identity(m)),
        v: track_v.then(|| Dense::identity(n)),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        a.swap_cols(t, pj);
        tr.swap_cols(t, pj);
        loop {
            let mut best: Option<(bool, usize)> = None;
            for i in t + 1..m {
                if a.at(i, t).is_nil() {
                    continue;
                }
                let q = a.at(i, t).checked_quot(a.at(t, t))?;
                if !q.is_nil() {
                    a.row_sub_mul(i, t, &q)?;
                    tr.row_sub_mul(i, t, &q)?;
                }
                if !a.at(i, t).is_nil() {
                    let smaller = match best {
                        None => true,
                        Some((true, bi)) => a.at(i, t).abs_lt(a.at(bi, t)),
                        Some((false, bj)) => a.at(i, t).abs_lt(a.at(t, bj)),
                    };
                    if smaller {
                        best = Some((true, i));
                    }
                }
            }
            for j in t + 1..n {
                if a.at(t, j).is_nil() {
                    continue;
                }
                let q = a.at(t, j).checked_quot(a.at(t, t))?;
                if !q.is_nil() {
                    a.col_sub_mul(j, t, &q)?;
                    tr.col_sub_mul(j, t, &q)?;
                }
                if !a.at(t, j).is_nil() {
                    let smaller = match best {
                        None => true,
                        Some((true, bi)) => a.at(t, j).abs_lt(a.at(bi, t)),
                        Some((false, bj)) => a.at(t, j).abs_lt(a.at(t, bj)),
                    };
                    if smaller {
                        best = Some((false, j));
                    }
                }
            }
            match best {
                Some((true, i)) => {
                    a.swap_rows(t, i);
                    tr.swap_rows(t, i);
                    continue;
                }
                Some((false, j)) => {
                    a.swap_cols(t, j);
                    tr.swap_cols(t, j);
                    continue;
                }
                None => {}
            }
            // Row and column are clear; the pivot must divide the remaining block.
            let pivot = a.at(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(a.at(i, j))));
            match offender {
                Some(i) => {
                    // row t += row i
                    let minus_one = T::unit().checked_neg()?;
                    a.row_sub_mul(t, i, &minus_one)?;
                    tr.row_sub_mul(t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if a.at(t, t).is_neg() {
            a.neg_row(t)?;
            tr.neg_row(t)?;
        }
        t += 1;
    }
    let diag = (0..m.min(n)).map(|i| a.at(i, i).clone()).collect();
    Some(Smith {
        diag,
        rows: m,
        cols: n,
        u: tr.u,
        u_inv: tr.u_inv,
        v: tr.v,
    })
}

/// Runs `job` on the `i64` instantiation and falls back to `BigInt` on overflow.
pub(crate) fn with_fallback<R>(
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> u64,
    track_u: bool,
    track_v: bool,
    job: impl JobOnSmith<R>,
) -> R {
    if let Some(a) = Dense::<i64>::try_from_fn(rows, cols, |i, j| i64::from_u64(entry(i, j))) {
        if let Some(s) = smith(a, track_u, track_v) {
            if let Some(r) = job.run(&s) {
                return r;
            }
        }
    }
    let a = Dense::<BigInt>::from_fn(rows, cols, |i, j| BigInt::from(entry(i, j)));
    let s = smith(a, track_u, track_v).expect("big-integer elimination cannot overflow");
    job.run(&s).expect("big-integer post-processing cannot overflow")
}

/// Post-processing of an elimination, generic over the scalar.
pub(crate) trait JobOnSmith<R> {
    fn run<T: SnfInt>(&self, s: &Smith<T>) -> Option<R>;
}
