//! Exact integer chain complexes: the brute-force oracle behind every
//! closed-form rule in the crate.
//!
//! Complexes are built from small CW-style models (spheres with zero
//! differentials, tensor products with Koszul signs, wedges, connected sums)
//! or imported from JSON, and their homology is computed by Smith normal
//! form. One integral Smith decomposition per boundary map yields homology
//! over Z, Q and every prime field at once, since unimodular transforms stay
//! invertible over any of them.

pub mod simplicial;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Coefficients, FgModule, GradedModule};
use crate::matrix::{Mat, Scalar};
use crate::DEFAULT_DEGREE_CAP;

/// A bounded chain complex of free modules: `boundaries[d]` maps degree-d
/// chains to degree-(d-1) chains; `boundaries[0]` has zero rows.
#[derive(Clone)]
pub struct ChainComplex<T> {
    /// Rank of the chain group in each degree, `ranks[d]`.
    ranks: Vec<usize>,
    /// `boundaries[d]`: ranks[d-1] × ranks[d]; index 0 is the 0 × ranks[0]
    /// matrix.
    boundaries: Vec<Mat<T>>,
}

impl<T: Scalar> ChainComplex<T> {
    /// Validates shapes and that consecutive boundaries compose to zero.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<Mat<T>>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::ChainComplex("no degrees".into()));
        }
        if boundaries.len() != ranks.len() {
            return Err(Error::ChainComplex(
                "need one boundary matrix per degree".into(),
            ));
        }
        for (d, b) in boundaries.iter().enumerate() {
            let rows = if d == 0 { 0 } else { ranks[d - 1] };
            if b.rows() != rows || b.cols() != ranks[d] {
                return Err(Error::ChainComplex(format!(
                    "boundary {d} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    rows,
                    ranks[d]
                )));
            }
        }
        for d in 1..boundaries.len() {
            if !boundaries[d - 1].mul(&boundaries[d]).is_zero() {
                return Err(Error::BoundarySquareNonzero { degree: d });
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    /// Complex with zero differentials and the given ranks.
    pub fn with_zero_boundaries(ranks: Vec<usize>) -> Result<Self> {
        let boundaries = (0..ranks.len())
            .map(|d| {
                let rows = if d == 0 { 0 } else { ranks[d - 1] };
                Mat::zeros(rows, ranks[d])
            })
            .collect();
        Self::new(ranks, boundaries)
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, d: usize) -> &Mat<T> {
        &self.boundaries[d]
    }

    /// Homology over the requested coefficients. Over Z the result carries
    /// free ranks and invariant factors; over a field, ranks only.
    pub fn homology(&self, coefficients: Coefficients) -> Result<GradedModule> {
        let mut out = GradedModule::new(coefficients);
        let snfs: Vec<_> = self.boundaries.iter().map(Mat::smith).collect();
        for d in 0..=self.top_degree() {
            let n = self.ranks[d];
            let snf_out = &snfs[d];
            let next = snfs.get(d + 1);
            let module = match coefficients {
                Coefficients::Integers => {
                    let r_out = snf_out.rank();
                    let r_in = next.map_or(0, |s| s.rank());
                    let torsion: Vec<u64> = next
                        .map(|s| {
                            s.invariant_factors()
                                .iter()
                                .map(|t| t.to_u64().ok_or(Error::InvariantFactorOverflow))
                                .collect::<Result<Vec<u64>>>()
                        })
                        .transpose()?
                        .unwrap_or_default();
                    FgModule::new(coefficients, n - r_out - r_in, &torsion)?
                }
                Coefficients::Rationals => {
                    let r_out = snf_out.rank();
                    let r_in = next.map_or(0, |s| s.rank());
                    FgModule::free(coefficients, n - r_out - r_in)
                }
                Coefficients::ModP(p) => {
                    let r_out = snf_out.rank_mod(p);
                    let r_in = next.map_or(0, |s| s.rank_mod(p));
                    FgModule::free(coefficients, n - r_out - r_in)
                }
            };
            out.add(d, &module)?;
        }
        Ok(out)
    }

    /// Tensor product of complexes with Koszul signs.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let top = self.top_degree() + other.top_degree();
        if top > DEFAULT_DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: top,
                cap: DEFAULT_DEGREE_CAP,
            });
        }
        // basis of degree d: pairs (i, j) with i + j = d, blocks ordered by
        // i, cells within a block ordered (cell of self, cell of other)
        let offset = |d: usize, i: usize| -> usize {
            (0..i).map(|k| self.rank(k) * other.rank(d - k)).sum()
        };
        let ranks: Vec<usize> = (0..=top)
            .map(|d| (0..=d).map(|i| self.rank(i) * other.rank(d - i)).sum())
            .collect();
        let mut boundaries = Vec::with_capacity(top + 1);
        boundaries.push(Mat::zeros(0, ranks[0]));
        for d in 1..=top {
            let mut b = Mat::<T>::zeros(ranks[d - 1], ranks[d]);
            for i in 0..=d {
                let j = d - i;
                let (ra, rb) = (self.rank(i), other.rank(j));
                if ra == 0 || rb == 0 {
                    continue;
                }
                let col_base = offset(d, i);
                for a in 0..ra {
                    for bb in 0..rb {
                        let col = col_base + a * rb + bb;
                        // d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy
                        if i > 0 {
                            let da = self.boundary(i);
                            let row_base = offset(d - 1, i - 1);
                            for r in 0..self.rank(i - 1) {
                                let v = da[(r, a)].clone();
                                if !v.is_zero() {
                                    b[(row_base + r * rb + bb, col)] = v;
                                }
                            }
                        }
                        if j > 0 {
                            let db = other.boundary(j);
                            let row_base = offset(d - 1, i);
                            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                            for r in 0..other.rank(j - 1) {
                                let v = db[(r, bb)].clone() * sign.clone();
                                if !v.is_zero() {
                                    b[(row_base + a * other.rank(j - 1) + r, col)] = v;
                                }
                            }
                        }
                    }
                }
            }
            boundaries.push(b);
        }
        Self::new(ranks, boundaries)
    }

    /// Wedge along the base 0-cell (cell 0 of degree 0 in every summand).
    /// Positive-degree chains stack block-diagonally; the base 0-cells are
    /// identified and boundary rows remapped accordingly.
    pub fn wedge(summands: &[Self]) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::ChainComplex("wedge of an empty list".into()));
        }
        for s in summands {
            if s.rank(0) == 0 {
                return Err(Error::ChainComplex(
                    "wedge summand has no base 0-cell".into(),
                ));
            }
        }
        let top = summands.iter().map(Self::top_degree).max().unwrap();
        let mut ranks = vec![0usize; top + 1];
        ranks[0] = 1 + summands.iter().map(|s| s.rank(0) - 1).sum::<usize>();
        for (d, r) in ranks.iter_mut().enumerate().skip(1) {
            *r = summands.iter().map(|s| s.rank(d)).sum();
        }
        let zero_cell_row = |s: usize, c: usize| -> usize {
            if c == 0 {
                0
            } else {
                1 + summands[..s].iter().map(|x| x.rank(0) - 1).sum::<usize>() + (c - 1)
            }
        };
        let block_offset =
            |d: usize, s: usize| -> usize { summands[..s].iter().map(|x| x.rank(d)).sum() };
        let mut boundaries = Vec::with_capacity(top + 1);
        boundaries.push(Mat::zeros(0, ranks[0]));
        for d in 1..=top {
            let mut b = Mat::<T>::zeros(ranks[d - 1], ranks[d]);
            for (s, cx) in summands.iter().enumerate() {
                if d > cx.top_degree() {
                    continue;
                }
                let src = cx.boundary(d);
                let col0 = block_offset(d, s);
                for c in 0..cx.rank(d) {
                    for r in 0..src.rows() {
                        let v = src[(r, c)].clone();
                        if v.is_zero() {
                            continue;
                        }
                        let row = if d == 1 {
                            zero_cell_row(s, r)
                        } else {
                            block_offset(d - 1, s) + r
                        };
                        b[(row, col0 + c)] = b[(row, col0 + c)].clone() + v;
                    }
                }
            }
            boundaries.push(b);
        }
        Self::new(ranks, boundaries)
    }

    /// Connected sum of closed-manifold models sharing the top degree n:
    /// one top cell is deleted from each summand (its boundary must be the
    /// zero chain, as it is for every model built here), the base 0-cells
    /// are identified, and a single fresh top cell with zero boundary is
    /// glued in.
    pub fn connected_sum(summands: &[Self]) -> Result<Self> {
        if summands.len() < 2 {
            return Err(Error::ChainComplex(
                "connected sum needs at least two summands".into(),
            ));
        }
        let n = summands[0].top_degree();
        if n == 0 {
            return Err(Error::ChainComplex(
                "connected sum of 0-dimensional models".into(),
            ));
        }
        let mut truncated = Vec::with_capacity(summands.len());
        for s in summands {
            if s.top_degree() != n {
                return Err(Error::ChainComplex(
                    "connected sum of models of different dimensions".into(),
                ));
            }
            if s.rank(n) == 0 {
                return Err(Error::ChainComplex("summand has no top cell".into()));
            }
            let last = s.rank(n) - 1;
            if (0..s.boundary(n).rows()).any(|r| !s.boundary(n)[(r, last)].is_zero()) {
                return Err(Error::ChainComplex(
                    "summand top cell is not a cycle; cannot glue".into(),
                ));
            }
            let mut ranks = s.ranks.clone();
            ranks[n] -= 1;
            let mut boundaries = s.boundaries.clone();
            let bn = &s.boundaries[n];
            boundaries[n] = Mat::from_fn(bn.rows(), bn.cols() - 1, |i, j| bn[(i, j)].clone());
            truncated.push(Self::new(ranks, boundaries)?);
        }
        let wedge = Self::wedge(&truncated)?;
        let mut ranks = wedge.ranks.clone();
        ranks[n] += 1;
        let mut boundaries = wedge.boundaries.clone();
        let bn = &wedge.boundaries[n];
        boundaries[n] = Mat::from_fn(bn.rows(), bn.cols() + 1, |i, j| {
            if j < bn.cols() {
                bn[(i, j)].clone()
            } else {
                T::zero()
            }
        });
        Self::new(ranks, boundaries)
    }
}

/// Minimal CW model of the d-sphere: one 0-cell and one d-cell with zero
/// differentials. The 0-sphere is a one-point set by convention.
pub fn sphere_complex<T: Scalar>(d: i64) -> Result<ChainComplex<T>> {
    if d < 0 {
        return Err(Error::SphereDimOutOfRange { dim: d, ambient: 0 });
    }
    let d = d as usize;
    if d > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded {
            degree: d,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    let mut ranks = vec![0usize; d + 1];
    ranks[0] = 1;
    if d > 0 {
        ranks[d] = 1;
    }
    ChainComplex::with_zero_boundaries(ranks)
}

/// Chain model of the boundary of a thickened hole inside an n-disc.
///
/// A hole is a bouquet of spheres given by their dimensions (an empty list
/// is a point hole). A regular neighborhood of the bouquet is a boundary
/// connected sum of `S^s × D^{n-s}` pieces, so its boundary is the connected
/// sum of the `S^s × S^{n-s-1}`; for a point hole it is `S^{n-1}`.
pub fn boundary_of_thickened_hole<T: Scalar>(
    n: usize,
    hole: &[usize],
) -> Result<ChainComplex<T>> {
    if n == 0 {
        return Err(Error::SphereDimOutOfRange { dim: 0, ambient: 0 });
    }
    for &s in hole {
        if s > n - 1 {
            return Err(Error::SphereDimOutOfRange {
                dim: s as i64,
                ambient: n,
            });
        }
    }
    let pieces: Vec<ChainComplex<T>> = hole
        .iter()
        .filter(|&&s| s > 0) // a 0-sphere summand is a point and adds nothing
        .map(|&s| {
            sphere_complex::<T>(s as i64)?.tensor(&sphere_complex::<T>((n - s - 1) as i64)?)
        })
        .collect::<Result<_>>()?;
    match pieces.len() {
        0 => sphere_complex((n - 1) as i64),
        1 => Ok(pieces.into_iter().next().unwrap()),
        _ => ChainComplex::connected_sum(&pieces),
    }
}

/// Chain model of a hole itself: the wedge of its spheres (a point for the
/// empty hole).
pub fn hole_wedge_complex<T: Scalar>(hole: &[usize]) -> Result<ChainComplex<T>> {
    let spheres: Vec<ChainComplex<T>> = hole
        .iter()
        .map(|&s| sphere_complex(s as i64))
        .collect::<Result<_>>()?;
    match spheres.len() {
        0 => sphere_complex(0),
        1 => Ok(spheres.into_iter().next().unwrap()),
        _ => ChainComplex::wedge(&spheres),
    }
}

/// Reduced-homology difference `total ⊖ part`, degreewise; fails when the
/// part does not embed (the split identity would be violated).
fn reduced_difference(
    total: &GradedModule,
    part: &GradedModule,
    coefficients: Coefficients,
) -> Result<GradedModule> {
    let mut out = GradedModule::new(coefficients);
    let top = total
        .top_degree()
        .unwrap_or(0)
        .max(part.top_degree().unwrap_or(0));
    for d in 1..=top {
        let t = total.degree(d);
        let p = part.degree(d);
        if t.free_rank() < p.free_rank() || t.invariant_factors() != p.invariant_factors() {
            return Err(Error::ChainComplex(format!(
                "split identity fails in degree {d}: {t} does not contain {p}"
            )));
        }
        out.add(
            d,
            &FgModule::free(coefficients, t.free_rank() - p.free_rank()),
        )?;
    }
    Ok(out)
}

/// Homology of the n-disc with the interiors of thickened holes removed,
/// computed through the split identity
/// `H̃_i(∂N) = H̃_i(N) ⊕ H̃_i(X)`:
/// the boundary and neighborhood homologies are computed independently at
/// chain level and subtracted.
pub fn disc_with_holes_mv<T: Scalar>(
    n: usize,
    holes: &[Vec<usize>],
    coefficients: Coefficients,
) -> Result<GradedModule> {
    let mut boundary_total = GradedModule::new(coefficients);
    let mut neighborhood_total = GradedModule::new(coefficients);
    for hole in holes {
        let bd = boundary_of_thickened_hole::<T>(n, hole)?.homology(coefficients)?;
        let nb = hole_wedge_complex::<T>(hole)?.homology(coefficients)?;
        for (d, m) in bd.degrees().filter(|(d, _)| *d >= 1) {
            boundary_total.add(d, m)?;
        }
        for (d, m) in nb.degrees().filter(|(d, _)| *d >= 1) {
            neighborhood_total.add(d, m)?;
        }
    }
    let mut x = reduced_difference(&boundary_total, &neighborhood_total, coefficients)?;
    x.add(0, &FgModule::free(coefficients, 1))?;
    Ok(x)
}

/// A chain complex realizing a prescribed integral graded module: free
/// generators become cells with zero boundary, and each torsion summand
/// `Z/t` in degree d becomes a pair of cells in degrees d and d+1 connected
/// by multiplication by t.
pub fn complex_realizing<T: Scalar>(module: &GradedModule) -> Result<ChainComplex<T>> {
    if module.coefficients() != Coefficients::Integers {
        return Err(Error::CoefficientMismatch {
            left: module.coefficients().to_string(),
            right: "Z (realization needs an integral module)".into(),
        });
    }
    let top = module.top_degree().unwrap_or(0) + 1;
    let mut ranks = vec![0usize; top + 1];
    let mut torsion_of: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    for (d, m) in module.degrees() {
        ranks[d] += m.free_rank() + m.invariant_factors().len();
        ranks[d + 1] += m.invariant_factors().len();
        torsion_of[d] = m.invariant_factors().to_vec();
    }
    let mut boundaries = Vec::with_capacity(top + 1);
    boundaries.push(Mat::zeros(0, ranks[0]));
    for d in 1..=top {
        let mut b = Mat::<T>::zeros(ranks[d - 1], ranks[d]);
        // torsion-kill cells of degree d hit the torsion cells sitting right
        // after the free cells of degree d-1
        let m_below = module.degree(d - 1);
        let col_base = ranks[d] - torsion_of[d - 1].len();
        let row_base = m_below.free_rank();
        for (i, &t) in torsion_of[d - 1].iter().enumerate() {
            b[(row_base + i, col_base + i)] = T::from(t as i64);
        }
        boundaries.push(b);
    }
    ChainComplex::new(ranks, boundaries)
}

/// Serialized chain complex: per-degree ranks plus the boundary matrices for
/// degrees 1 and up as nested integer arrays.
#[derive(Serialize, Deserialize)]
pub struct ChainComplexJson {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<Vec<Vec<i64>>>,
}

impl ChainComplexJson {
    pub fn decode<T: Scalar>(&self) -> Result<ChainComplex<T>> {
        if self.ranks.is_empty() {
            return Err(Error::ChainComplex("no degrees".into()));
        }
        if self.boundaries.len() + 1 != self.ranks.len() {
            return Err(Error::ChainComplex(
                "need one boundary matrix per degree above zero".into(),
            ));
        }
        let mut mats = vec![Mat::zeros(0, self.ranks[0])];
        for (d, rows) in self.boundaries.iter().enumerate() {
            let expect_rows = self.ranks[d];
            let expect_cols = self.ranks[d + 1];
            if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
                return Err(Error::ChainComplex(format!(
                    "boundary {} has wrong shape",
                    d + 1
                )));
            }
            mats.push(Mat::from_fn(expect_rows, expect_cols, |i, j| {
                T::from(rows[i][j])
            }));
        }
        ChainComplex::new(self.ranks.clone(), mats)
    }

    pub fn encode<T: Scalar>(c: &ChainComplex<T>) -> Result<Self> {
        let mut boundaries = Vec::new();
        for d in 1..=c.top_degree() {
            let b = c.boundary(d);
            let mut rows = Vec::with_capacity(b.rows());
            for i in 0..b.rows() {
                let mut row = Vec::with_capacity(b.cols());
                for j in 0..b.cols() {
                    row.push(b[(i, j)].to_i64().ok_or_else(|| {
                        Error::ChainComplex("entry does not fit in i64".into())
                    })?);
                }
                rows.push(row);
            }
            boundaries.push(rows);
        }
        Ok(ChainComplexJson {
            ranks: c.ranks().to_vec(),
            boundaries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Coefficients::{Integers as Z, Rationals as Q};

    type C = ChainComplex<i64>;

    fn free_ranks(g: &GradedModule) -> Vec<(usize, usize)> {
        g.degrees().map(|(d, m)| (d, m.free_rank())).collect()
    }

    #[test]
    fn sphere_homology() {
        for d in [0i64, 1, 3, 5] {
            let c: C = sphere_complex(d).unwrap();
            let h = c.homology(Z).unwrap();
            let expect = GradedModule::sphere(Z, d as usize).unwrap();
            assert_eq!(h, expect, "S^{d}");
        }
        assert!(sphere_complex::<i64>(-1).is_err());
    }

    #[test]
    fn boundary_of_4_simplex_is_s3() {
        let c = simplicial::OrderedSimplicialComplex::simplex_boundary(4)
            .unwrap()
            .chain_complex::<i64>()
            .unwrap();
        let h = c.homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (3, 1)]);
    }

    #[test]
    fn tensor_kunneth_cross_check() {
        let s2: C = sphere_complex(2).unwrap();
        let s3: C = sphere_complex(3).unwrap();
        let prod = s2.tensor(&s3).unwrap();
        let h = prod.homology(Z).unwrap();
        let k = GradedModule::sphere(Z, 2)
            .unwrap()
            .kunneth(&GradedModule::sphere(Z, 3).unwrap())
            .unwrap();
        assert_eq!(h, k);
    }

    #[test]
    fn tensor_s2_s2() {
        let s2: C = sphere_complex(2).unwrap();
        let h = s2.tensor(&s2).unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn tensor_with_point_is_identity() {
        let s3: C = sphere_complex(3).unwrap();
        let pt: C = sphere_complex(0).unwrap();
        let h = pt.tensor(&s3).unwrap().homology(Z).unwrap();
        assert_eq!(h, s3.homology(Z).unwrap());
    }

    #[test]
    fn torus_as_tensor_of_circles() {
        let s1: C = sphere_complex(1).unwrap();
        let h = s1.tensor(&s1).unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn wedge_examples() {
        let s2: C = sphere_complex(2).unwrap();
        let s3: C = sphere_complex(3).unwrap();
        let h = C::wedge(&[s2.clone(), s3.clone()])
            .unwrap()
            .homology(Z)
            .unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (2, 1), (3, 1)]);

        let h3 = C::wedge(&[s3.clone(), s3.clone(), s3.clone()])
            .unwrap()
            .homology(Z)
            .unwrap();
        assert_eq!(free_ranks(&h3), vec![(0, 1), (3, 3)]);

        let h22 = C::wedge(&[s2.clone(), s2]).unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h22), vec![(0, 1), (2, 2)]);

        assert!(C::wedge(&[]).is_err());
    }

    #[test]
    fn thickened_hole_boundaries() {
        // (n=6, hole=[3]): S^3 x S^2
        let c: C = boundary_of_thickened_hole(6, &[3]).unwrap();
        let h = c.homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (2, 1), (3, 1), (5, 1)]);

        // (n=6, point hole): S^5
        let c: C = boundary_of_thickened_hole(6, &[]).unwrap();
        assert_eq!(c.homology(Z).unwrap(), GradedModule::sphere(Z, 5).unwrap());

        // (n=6, hole=[2,3]): (S^2 x S^3) # (S^3 x S^2)
        let c: C = boundary_of_thickened_hole(6, &[2, 3]).unwrap();
        let h = c.homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (2, 2), (3, 2), (5, 1)]);

        assert!(boundary_of_thickened_hole::<i64>(6, &[6]).is_err());
    }

    #[test]
    fn homology_over_fields() {
        let mut g = GradedModule::point(Z);
        g.add(1, &FgModule::new(Z, 0, &[2]).unwrap()).unwrap();
        let c: C = complex_realizing(&g).unwrap();
        assert_eq!(c.homology(Z).unwrap(), g);
        // over Q the torsion dies
        let hq = c.homology(Q).unwrap();
        assert_eq!(free_ranks(&hq), vec![(0, 1)]);
        // over Z/2 it contributes in degrees 1 and 2
        let h2 = c.homology(Coefficients::ModP(2)).unwrap();
        assert_eq!(free_ranks(&h2), vec![(0, 1), (1, 1), (2, 1)]);
        let h3 = c.homology(Coefficients::ModP(3)).unwrap();
        assert_eq!(free_ranks(&h3), vec![(0, 1)]);
    }

    #[test]
    fn dd_zero_is_enforced() {
        let ranks = vec![1, 1, 1];
        let b1 = Mat::<i64>::from_i64_rows(&[&[1]]);
        let b2 = Mat::<i64>::from_i64_rows(&[&[1]]);
        let bad = ChainComplex::new(ranks, vec![Mat::zeros(0, 1), b1, b2]);
        assert!(matches!(
            bad,
            Err(Error::BoundarySquareNonzero { degree: 2 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let c: C = boundary_of_thickened_hole(5, &[2]).unwrap();
        let js = ChainComplexJson::encode(&c).unwrap();
        let text = serde_json::to_string(&js).unwrap();
        let back: ChainComplexJson = serde_json::from_str(&text).unwrap();
        let c2: C = back.decode().unwrap();
        assert_eq!(c2.homology(Z).unwrap(), c.homology(Z).unwrap());
    }
}
