//! Field scalars (rationals and prime fields) with just enough dense linear
//! algebra for the cup-product oracle over field coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Element of the rationals or of a prime field Z/p. Mixing the two in one
/// computation is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElem {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl FieldElem {
    pub fn zero_like(&self) -> FieldElem {
        match self {
            FieldElem::Q(_) => FieldElem::Q(BigRational::zero()),
            FieldElem::Fp { p, .. } => FieldElem::Fp { v: 0, p: *p },
        }
    }

    pub fn q_from_int(n: &BigInt) -> FieldElem {
        FieldElem::Q(BigRational::from(n.clone()))
    }

    pub fn fp_from_int(n: &BigInt, p: u64) -> FieldElem {
        let m = BigInt::from(p);
        let r = ((n % &m) + &m) % &m;
        let v: u64 = r.try_into().expect("reduced residue fits u64");
        FieldElem::Fp { v, p }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(x) => x.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed prime fields");
                FieldElem::Fp {
                    v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("mixed field elements"),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: p2 }) => {
                assert_eq!(p, p2, "mixed prime fields");
                FieldElem::Fp {
                    v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("mixed field elements"),
        }
    }

    pub fn inv(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                FieldElem::Q(a.recip())
            }
            FieldElem::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero");
                // extended Euclid
                let (mut t, mut new_t) = (0i128, 1i128);
                let (mut r, mut new_r) = (*p as i128, *v as i128);
                while new_r != 0 {
                    let q = r / new_r;
                    (t, new_t) = (new_t, t - q * new_t);
                    (r, new_r) = (new_r, r - q * new_r);
                }
                debug_assert_eq!(r, 1, "p must be prime");
                let v = ((t % *p as i128 + *p as i128) % *p as i128) as u64;
                FieldElem::Fp { v, p: *p }
            }
        }
    }

    /// Integer value when the element happens to be an integer; used to keep
    /// ring structure constants in integer form.
    pub fn to_integer(&self) -> Result<BigInt> {
        match self {
            FieldElem::Q(a) => {
                if a.denom().is_one() {
                    Ok(a.numer().clone())
                } else {
                    Err(Error::Ring(format!(
                        "non-integer structure constant {a}"
                    )))
                }
            }
            FieldElem::Fp { v, p } => {
                // report a balanced representative for readability
                let half = p / 2;
                if *v > half {
                    Ok(BigInt::from(*v as i128 - *p as i128))
                } else {
                    Ok(BigInt::from(*v))
                }
            }
        }
    }
}

/// Dense matrix over a field, stored row-major. Carries a zero of its field
/// so shape-degenerate matrices still know their scalar type.
#[derive(Debug, Clone)]
pub struct FMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElem>,
    zero: FieldElem,
}

impl FMat {
    pub fn zeros_like(rows: usize, cols: usize, sample: &FieldElem) -> FMat {
        FMat {
            rows,
            cols,
            data: vec![sample.zero_like(); rows * cols],
            zero: sample.zero_like(),
        }
    }

    fn one(&self) -> FieldElem {
        match &self.zero {
            FieldElem::Q(_) => FieldElem::Q(BigRational::one()),
            FieldElem::Fp { p, .. } => FieldElem::Fp { v: 1, p: *p },
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.at(i, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let a = self.at(row, j).clone();
                let b = self.at(p, j).clone();
                self.set(row, j, b);
                self.set(p, j, a);
            }
            let inv = self.at(row, col).inv();
            for j in 0..self.cols {
                let v = self.at(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i != row && !self.at(i, col).is_zero() {
                    let f = self.at(i, col).clone();
                    for j in 0..self.cols {
                        let v = self.at(i, j).sub(&f.mul(self.at(row, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space, one `Vec` per generator.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElem>> {
        let zero = self.zero.clone();
        let mut r = self.clone();
        let pivots = r.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![zero.zero_like(); self.cols];
            vec[free] = self.one();
            for (row, &col) in pivots.iter().enumerate() {
                vec[col] = r.at(row, free).neg();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[Vec<FieldElem>]) -> Option<Vec<Vec<FieldElem>>> {
        // augmented elimination with multiple right-hand sides
        assert!(b.iter().all(|v| v.len() == self.rows));
        let zero = self.zero.clone();
        let nb = b.len();
        let mut aug = FMat::zeros_like(self.rows, self.cols + nb, &zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            for (k, rhs) in b.iter().enumerate() {
                aug.set(i, self.cols + k, rhs[i].clone());
            }
        }
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut out = Vec::with_capacity(nb);
        for k in 0..nb {
            let mut x = vec![zero.zero_like(); self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                x[col] = aug.at(row, self.cols + k).clone();
            }
            out.push(x);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: u64, p: u64) -> FieldElem {
        FieldElem::Fp { v, p }
    }

    #[test]
    fn fp_inverse() {
        for p in [2u64, 3, 5, 7, 11] {
            for v in 1..p {
                let x = fp(v, p);
                assert_eq!(x.mul(&x.inv()), fp(1, p));
            }
        }
    }

    #[test]
    fn rref_rank_mod_2() {
        // [1 1; 1 1] has rank 1 over Z/2
        let mut m = FMat::zeros_like(2, 2, &fp(0, 2));
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, fp(1, 2));
            }
        }
        assert_eq!(m.rref().len(), 1);
    }

    #[test]
    fn kernel_and_solve_rational() {
        let q = |n: i64| FieldElem::Q(BigRational::from(BigInt::from(n)));
        let mut m = FMat::zeros_like(1, 2, &q(0));
        m.set(0, 0, q(2));
        m.set(0, 1, q(4));
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let sol = m.solve(&[vec![q(6)]]).unwrap();
        // 2x + 4y = 6 must hold
        let lhs = sol[0][0].mul(&q(2)).add(&sol[0][1].mul(&q(4)));
        assert_eq!(lhs, q(6));
    }
}
