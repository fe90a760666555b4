//! Dense exact integer matrices and Smith normal form.
//!
//! Everything here is generic over the integer scalar so the same code runs
//! on `i64` (fast, overflow-checked in debug) and on [`crate::Int`]
//! (arbitrary precision, the default everywhere results matter).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer scalar usable in exact matrix computations.
pub trait Scalar:
    Integer + Signed + Clone + fmt::Debug + fmt::Display + From<i64> + Into<BigInt> + ToPrimitive
{
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + fmt::Debug + fmt::Display + From<i64> + Into<BigInt> + ToPrimitive
{
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MatrixShape("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| T::from(v))).collect();
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Stack `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn map_to<U: Scalar>(&self) -> Mat<U>
    where
        T: Clone,
        U: From<T>,
    {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().map(U::from).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row_mul(&mut self, a: usize, b: usize, q: &T) {
        for j in 0..self.cols {
            let add = q.clone() * self[(b, j)].clone();
            self[(a, j)] = self[(a, j)].clone() + add;
        }
    }

    /// col[a] += q * col[b]
    fn add_col_mul(&mut self, a: usize, b: usize, q: &T) {
        for i in 0..self.rows {
            let add = q.clone() * self[(i, b)].clone();
            self[(i, a)] = self[(i, a)].clone() + add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = T::zero() - self[(a, j)].clone();
        }
    }

    /// Smith normal form with transforms: `left * self * right` is diagonal
    /// with a divisibility chain. Pivots are chosen by minimal absolute
    /// value, scanning row-major, so the result is deterministic.
    pub fn smith(&self) -> Smith<T> {
        let mut a = self.clone();
        let mut left = Mat::identity(self.rows);
        let mut right = Mat::identity(self.cols);
        let steps = self.rows.min(self.cols);

        for k in 0..steps {
            'pivot: loop {
                // minimal |entry| != 0 in the trailing submatrix
                let mut best: Option<(usize, usize)> = None;
                for i in k..a.rows {
                    for j in k..a.cols {
                        if !a[(i, j)].is_zero()
                            && best.map_or(true, |(bi, bj)| {
                                a[(i, j)].abs() < a[(bi, bj)].abs()
                            })
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break 'pivot };
                a.swap_rows(k, pi);
                left.swap_rows(k, pi);
                a.swap_cols(k, pj);
                right.swap_cols(k, pj);

                let mut clean = true;
                for i in k + 1..a.rows {
                    if a[(i, k)].is_zero() {
                        continue;
                    }
                    let q = T::zero() - a[(i, k)].clone() / a[(k, k)].clone();
                    a.add_row_mul(i, k, &q);
                    left.add_row_mul(i, k, &q);
                    if !a[(i, k)].is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..a.cols {
                    if a[(k, j)].is_zero() {
                        continue;
                    }
                    let q = T::zero() - a[(k, j)].clone() / a[(k, k)].clone();
                    a.add_col_mul(j, k, &q);
                    right.add_col_mul(j, k, &q);
                    if !a[(k, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue 'pivot;
                }
                // pivot must divide the rest of the submatrix
                let mut offender = None;
                'scan: for i in k + 1..a.rows {
                    for j in k + 1..a.cols {
                        if !(a[(i, j)].clone() % a[(k, k)].clone()).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let one = T::one();
                        a.add_row_mul(k, i, &one);
                        left.add_row_mul(k, i, &one);
                    }
                    None => break 'pivot,
                }
            }
            if a[(k, k)].is_negative() {
                a.negate_row(k);
                left.negate_row(k);
            }
        }

        let mut diag = Vec::new();
        for k in 0..steps {
            if a[(k, k)].is_zero() {
                break;
            }
            diag.push(a[(k, k)].clone());
        }
        Smith {
            rows: self.rows,
            cols: self.cols,
            diag,
            left,
            right,
        }
    }

    pub fn rank(&self) -> usize {
        self.smith().rank()
    }

    /// Basis of the integer kernel lattice, one column per generator. The
    /// basis is saturated: it spans a direct summand.
    pub fn kernel_basis(&self) -> Mat<T> {
        let snf = self.smith();
        let r = snf.rank();
        Mat::from_fn(self.cols, self.cols - r, |i, j| {
            snf.right[(i, r + j)].clone()
        })
    }

    /// Exact solution of `self * x = b`, if one exists over the integers.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let snf = self.smith();
        let y = snf.left.mul_vec(b);
        let r = snf.rank();
        let mut x = vec![T::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            if i < r {
                let (q, rem) = yi.div_rem(&snf.diag[i]);
                if !rem.is_zero() {
                    return None;
                }
                x[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(snf.right.mul_vec(&x))
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<Mat<T>> {
        if self.rows != self.cols {
            return Err(Error::MatrixShape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let x = self
                .solve(&e)
                .ok_or_else(|| Error::MatrixShape("matrix is not unimodular".into()))?;
            cols.push(x);
        }
        Ok(Mat::from_fn(n, n, |i, j| cols[j][i].clone()))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `left * A * right = diag`.
pub struct Smith<T> {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<T>,
    pub left: Mat<T>,
    pub right: Mat<T>,
}

impl<T: Scalar> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Rank of the matrix over Z/p: unimodular transforms stay invertible mod
    /// p, so it is the number of diagonal entries not divisible by p.
    pub fn rank_mod(&self, p: u64) -> usize {
        let p = T::from(p as i64);
        self.diag
            .iter()
            .filter(|d| !((*d).clone() % p.clone()).is_zero())
            .count()
    }

    /// Diagonal entries greater than one (the nontrivial invariant factors).
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diag
            .iter()
            .filter(|d| !(*d).is_one())
            .cloned()
            .collect()
    }
}

/// The divisibility-chained diagonal of the Smith normal form (units
/// dropped) together with the rank.
pub fn smith_normal_form<T: Scalar>(m: &Mat<T>) -> (Vec<T>, usize) {
    let snf = m.smith();
    (snf.invariant_factors(), snf.rank())
}

/// Presentation of a quotient `ker(d_out) / im(d_in)` of integer lattices,
/// exposing a basis with relations and coordinates for arbitrary cycles.
///
/// `d_out: Z^n -> Z^q` and `d_in: Z^m -> Z^n` must satisfy
/// `d_out * d_in = 0`.
pub struct Quotient<T> {
    /// n×k kernel basis (saturated).
    kernel: Mat<T>,
    /// Unimodular change of coordinates on the kernel, k×k.
    u: Mat<T>,
    u_inv: Mat<T>,
    /// Relation per transformed coordinate: 0 = free, 1 = collapsed,
    /// d >= 2 = torsion of order d.
    rel: Vec<T>,
}

/// Coordinates of a class in a [`Quotient`]: free part plus torsion part
/// (each torsion value reduced mod its order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCoords<T> {
    pub free: Vec<T>,
    pub torsion: Vec<T>,
}

impl<T: Scalar> ClassCoords<T> {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

impl<T: Scalar> Quotient<T> {
    pub fn new(d_out: &Mat<T>, d_in: &Mat<T>) -> Result<Self> {
        if d_out.cols() != d_in.rows() {
            return Err(Error::MatrixShape(
                "quotient: d_out and d_in are not composable".into(),
            ));
        }
        if !d_out.mul(d_in).is_zero() {
            return Err(Error::MatrixShape(
                "quotient: d_out * d_in is nonzero".into(),
            ));
        }
        let kernel = d_out.kernel_basis();
        let k = kernel.cols();
        // express each image generator in kernel coordinates
        let mut x = Mat::zeros(k, d_in.cols());
        for j in 0..d_in.cols() {
            let b = d_in.col(j);
            let coords = kernel.solve(&b).ok_or_else(|| {
                Error::Unsolvable("image vector not in the kernel lattice".into())
            })?;
            for i in 0..k {
                x[(i, j)] = coords[i].clone();
            }
        }
        let snf = x.smith();
        let mut rel = vec![T::zero(); k];
        for (i, d) in snf.diag.iter().enumerate() {
            rel[i] = d.clone();
        }
        let u_inv = snf.left.inverse_unimodular()?;
        Ok(Quotient {
            kernel,
            u: snf.left,
            u_inv,
            rel,
        })
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.rel.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<T> {
        self.rel
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// A cycle vector representing the i-th free generator.
    pub fn free_rep(&self, i: usize) -> Vec<T> {
        let idx = self
            .rel
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_zero())
            .map(|(j, _)| j)
            .nth(i)
            .expect("free generator index out of range");
        self.kernel.mul_vec(&self.u_inv.col(idx))
    }

    /// A cycle vector representing the i-th torsion generator.
    pub fn torsion_rep(&self, i: usize) -> Vec<T> {
        let idx = self
            .rel
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero() && !d.is_one())
            .map(|(j, _)| j)
            .nth(i)
            .expect("torsion generator index out of range");
        self.kernel.mul_vec(&self.u_inv.col(idx))
    }

    /// Coordinates of the class of `cycle`; fails when `cycle` is not in the
    /// kernel lattice.
    pub fn coords(&self, cycle: &[T]) -> Result<ClassCoords<T>> {
        let raw = self
            .kernel
            .solve(cycle)
            .ok_or_else(|| Error::Unsolvable("vector is not a cycle".into()))?;
        let y = self.u.mul_vec(&raw);
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (yi, d) in y.into_iter().zip(&self.rel) {
            if d.is_zero() {
                free.push(yi);
            } else if !d.is_one() {
                torsion.push(yi.mod_floor(d));
            }
        }
        Ok(ClassCoords { free, torsion })
    }

    /// Whether the class of `cycle` lies in the subgroup generated by the
    /// classes of `gens`.
    pub fn class_in_span(&self, cycle: &[T], gens: &[Vec<T>]) -> Result<bool> {
        let target = self.coords(cycle)?;
        let cols: Vec<ClassCoords<T>> = gens
            .iter()
            .map(|g| self.coords(g))
            .collect::<Result<_>>()?;
        let nfree = target.free.len();
        let ntor = target.torsion.len();
        let torsion_orders: Vec<T> = self
            .rel
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        // unknowns: one per generator, plus one per torsion relation
        let rows = nfree + ntor;
        let mut a = Mat::zeros(rows, cols.len() + ntor);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nfree {
                a[(i, j)] = c.free[i].clone();
            }
            for i in 0..ntor {
                a[(nfree + i, j)] = c.torsion[i].clone();
            }
        }
        for i in 0..ntor {
            a[(nfree + i, cols.len() + i)] = torsion_orders[i].clone();
        }
        let mut b = target.free.clone();
        b.extend(target.torsion.clone());
        Ok(a.solve(&b).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = Mat<i64>;

    #[test]
    fn snf_diag_2_3() {
        let m = M::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let (inv, rank) = smith_normal_form(&m);
        assert_eq!(inv, vec![6]);
        assert_eq!(rank, 2);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = M::zeros(3, 3);
        let (inv, rank) = smith_normal_form(&m);
        assert!(inv.is_empty());
        assert_eq!(rank, 0);
    }

    #[test]
    fn snf_identity() {
        let m = M::identity(4);
        let (inv, rank) = smith_normal_form(&m);
        assert!(inv.is_empty());
        assert_eq!(rank, 4);
    }

    #[test]
    fn snf_empty_matrix() {
        let m = M::zeros(0, 5);
        let (inv, rank) = smith_normal_form(&m);
        assert!(inv.is_empty());
        assert_eq!(rank, 0);
    }

    #[test]
    fn snf_transforms_recover_diagonal() {
        let m = M::from_i64_rows(&[&[-6, 111, -36, 6], &[5, -672, 210, 74], &[0, -255, 81, 24]]);
        let snf = m.smith();
        let d = snf.left.mul(&m).mul(&snf.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i == j && i < snf.diag.len() {
                    assert_eq!(d[(i, j)], snf.diag[i]);
                } else {
                    assert_eq!(d[(i, j)], 0);
                }
            }
        }
        // divisibility chain
        for w in snf.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn solve_exact_and_unsolvable() {
        let m = M::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let x = m.solve(&[4, 9]).unwrap();
        assert_eq!(x, vec![2, 3]);
        assert!(m.solve(&[1, 0]).is_none());
    }

    #[test]
    fn kernel_is_saturated() {
        let m = M::from_i64_rows(&[&[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // kernel of [2 4] is spanned by (2, -1), not (4, -2)
        let g = k.col(0);
        assert_eq!(g[0].abs(), 2);
        assert_eq!(g[1].abs(), 1);
    }

    #[test]
    fn quotient_z_mod_2() {
        // 0 -> Z --2--> Z -> 0, homology at the right is Z/2
        let d_out = M::zeros(0, 1);
        let d_in = M::from_i64_rows(&[&[2]]);
        let q = Quotient::new(&d_out, &d_in).unwrap();
        assert_eq!(q.rank(), 0);
        assert_eq!(q.torsion(), vec![2]);
        let c = q.coords(&[1]).unwrap();
        assert!(!c.is_zero());
        let c2 = q.coords(&[2]).unwrap();
        assert!(c2.is_zero());
    }

    #[test]
    fn quotient_membership() {
        // Z^2 with no relations; span of (1,1)
        let d_out = M::zeros(0, 2);
        let d_in = M::zeros(2, 0);
        let q = Quotient::new(&d_out, &d_in).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(q.class_in_span(&[2, 2], &[vec![1, 1]]).unwrap());
        assert!(!q.class_in_span(&[1, 0], &[vec![1, 1]]).unwrap());
    }

    fn arb_matrix() -> impl Strategy<Value = M> {
        ((1usize..5, 1usize..5)).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-8i64..8, r * c).prop_map(move |data| Mat {
                rows: r,
                cols: c,
                data,
            })
        })
    }

    proptest! {
        // randomized row/column operations leave invariants and rank alone
        #[test]
        fn snf_invariant_under_unimodular_ops(
            m in arb_matrix(),
            ops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..3), 0..8)
        ) {
            let (inv, rank) = smith_normal_form(&m);
            let mut t = m.clone();
            for (a, b, q) in ops {
                let (a2, b2) = (a % t.rows(), b % t.rows());
                if a2 != b2 {
                    t.add_row_mul(a2, b2, &q);
                }
                let (a3, b3) = (a % t.cols(), b % t.cols());
                if a3 != b3 {
                    t.add_col_mul(a3, b3, &q);
                }
            }
            let (inv2, rank2) = smith_normal_form(&t);
            prop_assert_eq!(inv, inv2);
            prop_assert_eq!(rank, rank2);
        }

        #[test]
        fn smith_transforms_always_diagonalize(m in arb_matrix()) {
            let snf = m.smith();
            let d = snf.left.mul(&m).mul(&snf.right);
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if i != j {
                        prop_assert_eq!(d[(i, j)], 0);
                    }
                }
            }
            for w in snf.diag.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
