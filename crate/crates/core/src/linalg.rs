//! Dense exact linear algebra over a small prime field GF(p).
//!
//! Every hom-space, extension group and idempotent in the crate is ultimately
//! a matrix over GF(p). Bases are always produced in reduced row-echelon
//! pivot order so that two computations of "the same" space agree entry for
//! entry.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes supported by every session.
pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

pub fn is_supported_prime(p: u32) -> bool {
    SUPPORTED_PRIMES.contains(&p)
}

/// Multiplicative inverse modulo a prime (`a != 0`).
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u32;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// A dense `rows x cols` matrix with entries in `[0, p)`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} mod {}]", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            write!(f, " {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of (possibly negative) integers, reduced mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = v.rem_euclid(p as i64) as u32;
            }
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|v| v % p).collect();
        Mat { p, rows, cols, data }
    }

    /// Column vector from entries.
    pub fn column(p: u32, entries: &[u32]) -> Self {
        Self::from_vec(p, entries.len(), 1, entries.to_vec())
    }

    /// Matrix whose columns are the given column vectors (all of height `rows`).
    pub fn from_columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v % p;
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.p, other.p, "field mismatch");
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % p).collect();
        Mat { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + p - b) % p).collect();
        Mat { data, ..*self }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, s: u32) -> Self {
        let p = self.p;
        let s = s % p;
        let data = self.data.iter().map(|a| a * s % p).collect();
        Mat { data, ..*self }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "field mismatch");
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let p = self.p;
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut out = vec![0u32; n * m];
        for i in 0..n {
            let orow = &mut out[i * m..(i + 1) * m];
            for t in 0..k {
                let a = self.data[i * k + t];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
            for o in orow.iter_mut() {
                *o %= p;
            }
        }
        Mat { p, rows: n, cols: m, data: out }
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.p, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(p: u32, blocks: &[Mat]) -> Self {
        let rows = blocks.iter().map(Mat::rows).sum();
        let cols = blocks.iter().map(Mat::cols).sum();
        let mut m = Self::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut m = Self::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.p, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in col..m.cols {
                let v = m.get(row, c) * inv % p;
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m.get(r, c) + p * p - f * m.get(row, c)) % p;
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns forming a basis of the kernel, one per free column of the RREF.
    pub fn kernel_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if v != 0 {
                    k.set(pc, j, self.p - v);
                }
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` when
    /// `b` is not in the column space.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>> {
        if b.rows != self.rows || b.cols != 1 {
            return Err(Error::DimensionMismatch(format!(
                "solve: matrix is {}x{}, right-hand side is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.p, self.cols, 1);
        for (i, &pc) in pivots.iter().enumerate() {
            x.set(pc, 0, r.get(i, self.cols));
        }
        Ok(Some(x))
    }

    /// Column space basis: the columns of `self` at the RREF pivot positions.
    pub fn column_space(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Coordinates on the cokernel of `self: k^cols -> k^rows`.
    ///
    /// Returns `(proj, section)` where `proj` has full row rank, `proj * self = 0`
    /// and `proj * section = I`.
    pub fn cokernel_projection(&self) -> (Mat, Mat) {
        let proj = self.transpose().kernel_basis().transpose();
        let k = proj.rows;
        let mut cols = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = Mat::zeros(self.p, k, 1);
            e.set(i, 0, 1);
            let s = proj.solve(&e).expect("shape").expect("full row rank");
            cols.push(s.col(0));
        }
        let section = Mat::from_columns(self.p, self.rows, &cols);
        (proj, section)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Mat::identity(self.p, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }
}

/// Solves `a * x = b` for the vector `b`, returning `x` as a vector.
pub fn solve_vec(a: &Mat, b: &[u32]) -> Result<Option<Vec<u32>>> {
    let col = Mat::column(a.p(), b);
    Ok(a.solve(&col)?.map(|x| x.col(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u32, rows: &[Vec<i64>]) -> Mat {
        Mat::from_rows(p, rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Mat::identity(2, 2);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1]);
        let z = Mat::zeros(2, 3, 3);
        let (r, piv) = z.rref();
        assert_eq!(r, z);
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_rank_one_gf2() {
        let a = m(2, &[vec![1, 1], vec![1, 1]]);
        let (r, piv) = a.rref();
        assert_eq!(r, m(2, &[vec![1, 1], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let id = Mat::identity(3, 2);
        let b = Mat::column(3, &[2, 1]);
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        let z = Mat::zeros(3, 2, 2);
        assert!(z.solve(&Mat::column(3, &[1, 0])).unwrap().is_none());
        // enumerating the four candidates of [[1,1]] x = 1 over GF(2) gives
        // {(1,0),(0,1)}; the free variable x1 is zeroed.
        let a = m(2, &[vec![1, 1]]);
        let x = a.solve(&Mat::column(2, &[1])).unwrap().unwrap();
        assert_eq!(x.col(0), vec![1, 0]);
        assert!(a.solve(&Mat::column(2, &[1, 1])).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::identity(5, 3).kernel_basis().cols(), 0);
        assert_eq!(Mat::zeros(5, 3, 3).kernel_basis(), Mat::identity(5, 3));
        let k = m(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k, Mat::column(2, &[1, 1]));
    }

    #[test]
    fn cokernel_examples() {
        let (proj, _) = Mat::identity(3, 2).cokernel_projection();
        assert_eq!(proj.rows(), 0);
        let (proj, sec) = Mat::zeros(3, 2, 2).cokernel_projection();
        assert_eq!(proj, Mat::identity(3, 2));
        assert_eq!(proj.mul(&sec), Mat::identity(3, 2));
        let a = Mat::column(2, &[1, 1]);
        let (proj, sec) = a.cokernel_projection();
        assert_eq!(proj, m(2, &[vec![1, 1]]));
        assert!(proj.mul(&a).is_zero());
        assert_eq!(proj.mul(&sec), Mat::identity(2, 1));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(5, &[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(2, &[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    fn arb_mat() -> impl Strategy<Value = Mat> {
        (prop::sample::select(vec![2u32, 3, 5]), 1usize..=6, 1usize..=6).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |d| Mat::from_vec(p, r, c, d))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in arb_mat()) {
            let (r, piv) = a.rref();
            let (r2, piv2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(piv, piv2);
        }

        #[test]
        fn rank_nullity(a in arb_mat()) {
            let k = a.kernel_basis();
            prop_assert_eq!(k.cols() + a.rank(), a.cols());
            prop_assert!(a.mul(&k).is_zero());
        }

        #[test]
        fn cokernel_is_coordinates(a in arb_mat()) {
            let (proj, sec) = a.cokernel_projection();
            prop_assert_eq!(proj.rows(), a.rows() - a.rank());
            prop_assert!(proj.mul(&a).is_zero());
            prop_assert!(proj.mul(&sec).is_identity());
        }

        #[test]
        fn solve_fails_iff_rank_rises(a in arb_mat(), seed in any::<u64>()) {
            let p = a.p();
            let b: Vec<u32> = (0..a.rows()).map(|i| ((seed >> (i % 60)) as u32) % p).collect();
            let bm = Mat::column(p, &b);
            let raised = a.hstack(&bm).rank() > a.rank();
            match a.solve(&bm).unwrap() {
                Some(x) => { prop_assert!(!raised); prop_assert_eq!(a.mul(&x), bm); }
                None => prop_assert!(raised),
            }
        }
    }
}
