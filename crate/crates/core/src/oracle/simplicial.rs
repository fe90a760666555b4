//! Ordered simplicial complexes and the front-face/back-face cochain
//! product: the oracle for cohomology ring rules.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FMat, FieldElem};
use crate::graded::Coefficients;
use crate::matrix::{Mat, Quotient, Scalar};
use crate::ring::{CohomologyRing, Label};
use crate::Int;

/// Desk-scale bound on the dimension of complexes fed to the cup-product
/// oracle.
pub const CUP_DIMENSION_BOUND: usize = 6;

/// A finite simplicial complex on totally ordered vertices; simplices are
/// stored as strictly increasing vertex lists, closed under faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedSimplicialComplex {
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl OrderedSimplicialComplex {
    /// Build from a set of simplices, closing downward.
    pub fn from_maximal(maximal: &[Vec<usize>]) -> Result<Self> {
        if maximal.is_empty() {
            return Err(Error::Simplicial("no simplices".into()));
        }
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for s in maximal {
            let mut v = s.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != s.len() {
                return Err(Error::Simplicial(format!(
                    "simplex {s:?} has repeated vertices"
                )));
            }
            if v.is_empty() {
                return Err(Error::Simplicial("empty simplex".into()));
            }
            stack.push(v);
        }
        while let Some(s) = stack.pop() {
            if !all.insert(s.clone()) {
                continue;
            }
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    stack.push(f);
                }
            }
        }
        let dim = all.iter().map(|s| s.len() - 1).max().unwrap();
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for level in &mut by_dim {
            level.sort();
        }
        Ok(OrderedSimplicialComplex { by_dim })
    }

    /// The boundary of the n-simplex on vertices 0..=n, a model of the
    /// (n-1)-sphere.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Simplicial(
                "boundary of a point is empty".into(),
            ));
        }
        let all: Vec<usize> = (0..=n).collect();
        let maximal: Vec<Vec<usize>> = (0..=n)
            .map(|skip| {
                all.iter()
                    .copied()
                    .filter(|&v| v != skip)
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::from_maximal(&maximal)
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim
            .get(d)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    fn index_maps(&self) -> Vec<HashMap<Vec<usize>, usize>> {
        self.by_dim
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect()
    }

    /// Simplicial chain complex with the usual alternating-sign boundary.
    pub fn chain_complex<T: Scalar>(&self) -> Result<crate::oracle::ChainComplex<T>> {
        let idx = self.index_maps();
        let ranks: Vec<usize> = (0..=self.dim()).map(|d| self.count(d)).collect();
        let mut boundaries = vec![Mat::zeros(0, ranks[0])];
        for d in 1..=self.dim() {
            let mut b = Mat::<T>::zeros(ranks[d - 1], ranks[d]);
            for (col, s) in self.simplices(d).iter().enumerate() {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    let row = idx[d - 1][&f];
                    let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                    b[(row, col)] = sign;
                }
            }
            boundaries.push(b);
        }
        crate::oracle::ChainComplex::new(ranks, boundaries)
    }

    /// Staircase (ordered) product triangulation: simplices are chains of
    /// vertex pairs, non-decreasing in each coordinate, whose projections
    /// span simplices of the factors. Vertex pairs are encoded as
    /// `u * stride + v` with `stride` one past the largest vertex of
    /// `other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let stride = other
            .by_dim
            .iter()
            .flatten()
            .flatten()
            .max()
            .copied()
            .unwrap_or(0)
            + 1;
        let mut maximal = Vec::new();
        for sigma in self.by_dim.last().map(Vec::as_slice).unwrap_or(&[]) {
            for tau in other.by_dim.last().map(Vec::as_slice).unwrap_or(&[]) {
                staircases(sigma, tau, stride, &mut maximal);
            }
        }
        // factors need not be pure; include products of lower maximal cells
        // by closing over all simplex pairs (cheap at desk scale)
        for (p, level_a) in self.by_dim.iter().enumerate() {
            for (q, level_b) in other.by_dim.iter().enumerate() {
                if p + 1 == self.by_dim.len() && q + 1 == other.by_dim.len() {
                    continue;
                }
                for sigma in level_a {
                    for tau in level_b {
                        staircases(sigma, tau, stride, &mut maximal);
                    }
                }
            }
        }
        Self::from_maximal(&maximal)
    }

    /// Cohomology ring via the front-face/back-face cochain product.
    ///
    /// Over the integers the cohomology must be torsion-free (an error
    /// reports the offending degree and suggests a field); any field works.
    pub fn cup_product(&self, coefficients: Coefficients) -> Result<CohomologyRing> {
        if self.dim() > CUP_DIMENSION_BOUND {
            return Err(Error::DimensionBound {
                dim: self.dim(),
                bound: CUP_DIMENSION_BOUND,
            });
        }
        match coefficients {
            Coefficients::Integers => self.cup_product_int(),
            Coefficients::Rationals => self.cup_product_field(coefficients),
            Coefficients::ModP(_) => self.cup_product_field(coefficients),
        }
    }

    /// Coboundary matrices: `delta[d]` maps degree-d cochains to degree-d+1
    /// cochains (the transpose of the (d+1)-boundary).
    fn coboundaries<T: Scalar>(&self) -> Result<Vec<Mat<T>>> {
        let chain = self.chain_complex::<T>()?;
        let mut delta = Vec::new();
        for d in 0..=self.dim() {
            if d + 1 <= self.dim() {
                delta.push(chain.boundary(d + 1).transpose());
            } else {
                delta.push(Mat::zeros(0, chain.rank(d)));
            }
        }
        Ok(delta)
    }

    fn cup_product_int(&self) -> Result<CohomologyRing> {
        let delta = self.coboundaries::<Int>()?;
        let mut quotients: Vec<Quotient<Int>> = Vec::new();
        for d in 0..=self.dim() {
            let d_in = if d == 0 {
                Mat::zeros(self.count(0), 0)
            } else {
                delta[d - 1].clone()
            };
            let q = Quotient::new(&delta[d], &d_in)?;
            if !q.torsion().is_empty() {
                return Err(Error::TorsionOverIntegers { degree: d });
            }
            quotients.push(q);
        }
        let mut ring = CohomologyRing::new(Coefficients::Integers, self.dim());
        for (d, q) in quotients.iter().enumerate().skip(1) {
            if q.rank() > 0 {
                ring.ranks.insert(d, q.rank());
            }
        }
        let idx = self.index_maps();
        for p in 1..=self.dim() {
            for q in 1..=self.dim() {
                let d = p + q;
                if d > self.dim() {
                    continue;
                }
                for a in 0..quotients[p].rank() {
                    let rep_a = quotients[p].free_rep(a);
                    for b in 0..quotients[q].rank() {
                        let rep_b = quotients[q].free_rep(b);
                        let w = self.cup_cochain_int(&rep_a, p, &rep_b, q, &idx);
                        let coords = quotients[d].coords(&w)?;
                        let combo: Vec<(i64, Label)> = coords
                            .free
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                            .map(|(i, c)| {
                                num_traits::ToPrimitive::to_i64(c)
                                    .ok_or_else(|| {
                                        Error::Ring("structure constant overflow".into())
                                    })
                                    .map(|v| (v, Label::new(d, i + 1)))
                            })
                            .collect::<Result<_>>()?;
                        ring.set_product(Label::new(p, a + 1), Label::new(q, b + 1), combo)?;
                    }
                }
            }
        }
        ring.check_invariants()?;
        Ok(ring)
    }

    fn cup_cochain_int(
        &self,
        rep_a: &[Int],
        p: usize,
        rep_b: &[Int],
        q: usize,
        idx: &[HashMap<Vec<usize>, usize>],
    ) -> Vec<Int> {
        use num_traits::Zero;
        let d = p + q;
        self.simplices(d)
            .iter()
            .map(|s| {
                let front = &s[..=p];
                let back = &s[p..];
                match (idx[p].get(front), idx[q].get(back)) {
                    (Some(&fi), Some(&bi)) => rep_a[fi].clone() * rep_b[bi].clone(),
                    _ => Int::zero(),
                }
            })
            .collect()
    }

    fn cup_product_field(&self, coefficients: Coefficients) -> Result<CohomologyRing> {
        let lift = |n: &Int| -> FieldElem {
            match coefficients {
                Coefficients::Rationals => FieldElem::q_from_int(n),
                Coefficients::ModP(p) => FieldElem::fp_from_int(n, p),
                Coefficients::Integers => unreachable!(),
            }
        };
        let delta = self.coboundaries::<Int>()?;
        let to_fmat = |m: &Mat<Int>| -> FMat {
            let zero = lift(&Int::from(0));
            let mut f = FMat::zeros_like(m.rows(), m.cols(), &zero);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    f.set(i, j, lift(&m[(i, j)]));
                }
            }
            f
        };
        struct DegreeBasis {
            /// columns: coboundary generators then chosen representatives
            span: FMat,
            n_cobound: usize,
            reps: Vec<Vec<FieldElem>>,
        }
        let zero = lift(&Int::from(0));
        let mut bases: Vec<DegreeBasis> = Vec::new();
        for d in 0..=self.dim() {
            let n = self.count(d);
            let kernel = to_fmat(&delta[d]).kernel_basis();
            let cobound: Vec<Vec<FieldElem>> = if d == 0 {
                Vec::new()
            } else {
                let dm = to_fmat(&delta[d - 1]);
                (0..dm.cols).map(|j| dm.col(j)).collect()
            };
            // greedily extend the coboundary span by kernel vectors
            let mut cols: Vec<Vec<FieldElem>> = cobound.clone();
            let mut reps = Vec::new();
            let mut current_rank = {
                let m = cols_to_fmat(&cols, n, &zero);
                m.rank()
            };
            for k in kernel {
                cols.push(k.clone());
                let r = cols_to_fmat(&cols, n, &zero).rank();
                if r > current_rank {
                    current_rank = r;
                    reps.push(k);
                } else {
                    cols.pop();
                }
            }
            bases.push(DegreeBasis {
                span: cols_to_fmat(&cols, n, &zero),
                n_cobound: cobound.len(),
                reps,
            });
        }
        let mut ring = CohomologyRing::new(coefficients, self.dim());
        for (d, b) in bases.iter().enumerate().skip(1) {
            if !b.reps.is_empty() {
                ring.ranks.insert(d, b.reps.len());
            }
        }
        let idx = self.index_maps();
        for p in 1..=self.dim() {
            for q in 1..=self.dim() {
                let d = p + q;
                if d > self.dim() {
                    continue;
                }
                for (a, rep_a) in bases[p].reps.iter().enumerate() {
                    for (b, rep_b) in bases[q].reps.iter().enumerate() {
                        let w: Vec<FieldElem> = self
                            .simplices(d)
                            .iter()
                            .map(|s| {
                                let front = &s[..=p];
                                let back = &s[p..];
                                match (idx[p].get(front), idx[q].get(back)) {
                                    (Some(&fi), Some(&bi)) => rep_a[fi].mul(&rep_b[bi]),
                                    _ => zero.zero_like(),
                                }
                            })
                            .collect();
                        let sols = bases[d]
                            .span
                            .solve(&[w])
                            .ok_or_else(|| Error::Ring("cup product not a cocycle".into()))?;
                        let x = &sols[0];
                        let mut combo = Vec::new();
                        for (i, c) in x[bases[d].n_cobound..].iter().enumerate() {
                            if !c.is_zero() {
                                let v = num_traits::ToPrimitive::to_i64(&c.to_integer()?)
                                    .ok_or_else(|| {
                                        Error::Ring("structure constant overflow".into())
                                    })?;
                                combo.push((v, Label::new(d, i + 1)));
                            }
                        }
                        ring.set_product(Label::new(p, a + 1), Label::new(q, b + 1), combo)?;
                    }
                }
            }
        }
        ring.check_invariants()?;
        Ok(ring)
    }
}

fn cols_to_fmat(cols: &[Vec<FieldElem>], n: usize, zero: &FieldElem) -> FMat {
    let mut m = FMat::zeros_like(n, cols.len(), zero);
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

/// All maximal monotone staircase chains through `sigma × tau`, pushed onto
/// `out` as encoded vertex lists.
fn staircases(sigma: &[usize], tau: &[usize], stride: usize, out: &mut Vec<Vec<usize>>) {
    let p = sigma.len() - 1;
    let q = tau.len() - 1;
    // lattice paths from (0,0) to (p,q)
    let mut path = vec![(0usize, 0usize)];
    fn rec(
        path: &mut Vec<(usize, usize)>,
        p: usize,
        q: usize,
        sigma: &[usize],
        tau: &[usize],
        stride: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let &(i, j) = path.last().unwrap();
        if i == p && j == q {
            out.push(
                path.iter()
                    .map(|&(a, b)| sigma[a] * stride + tau[b])
                    .collect(),
            );
            return;
        }
        if i < p {
            path.push((i + 1, j));
            rec(path, p, q, sigma, tau, stride, out);
            path.pop();
        }
        if j < q {
            path.push((i, j + 1));
            rec(path, p, q, sigma, tau, stride, out);
            path.pop();
        }
    }
    rec(&mut path, p, q, sigma, tau, stride, out);
}

/// The 7-vertex triangulation of the torus.
pub fn torus_seven() -> OrderedSimplicialComplex {
    let mut faces = Vec::new();
    for i in 0..7usize {
        faces.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        faces.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    OrderedSimplicialComplex::from_maximal(&faces).expect("valid triangulation")
}

/// The 6-vertex triangulation of the real projective plane.
pub fn projective_plane_six() -> OrderedSimplicialComplex {
    let faces: Vec<Vec<usize>> = vec![
        vec![0, 1, 3],
        vec![0, 1, 5],
        vec![0, 2, 4],
        vec![0, 2, 5],
        vec![0, 3, 4],
        vec![1, 2, 3],
        vec![1, 2, 4],
        vec![1, 4, 5],
        vec![2, 3, 5],
        vec![3, 4, 5],
    ];
    OrderedSimplicialComplex::from_maximal(&faces).expect("valid triangulation")
}

/// Serialized form: the list of (maximal) simplices as sorted vertex lists.
#[derive(Serialize, Deserialize)]
pub struct SimplicialJson {
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialJson {
    pub fn decode(&self) -> Result<OrderedSimplicialComplex> {
        OrderedSimplicialComplex::from_maximal(&self.simplices)
    }

    pub fn encode(c: &OrderedSimplicialComplex) -> Self {
        // emitting every simplex keeps the format trivially re-importable
        SimplicialJson {
            simplices: (0..=c.dim())
                .flat_map(|d| c.simplices(d).iter().cloned())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Coefficients::{Integers as Z, Rationals as Q};
    use crate::graded::GradedModule;

    fn free_ranks(g: &GradedModule) -> Vec<(usize, usize)> {
        g.degrees().map(|(d, m)| (d, m.free_rank())).collect()
    }

    #[test]
    fn torus_homology() {
        let t = torus_seven();
        assert_eq!(t.simplices(0).len(), 7);
        assert_eq!(t.simplices(1).len(), 21);
        assert_eq!(t.simplices(2).len(), 14);
        let h = t.chain_complex::<i64>().unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (1, 2), (2, 1)]);
        assert!(h.degree(1).is_free());
    }

    #[test]
    fn projective_plane_homology() {
        let p = projective_plane_six();
        let h = p.chain_complex::<i64>().unwrap().homology(Z).unwrap();
        assert_eq!(h.degree(0).free_rank(), 1);
        assert_eq!(h.degree(1).free_rank(), 0);
        assert_eq!(h.degree(1).invariant_factors(), &[2]);
        assert!(h.degree(2).is_trivial());
    }

    #[test]
    fn torus_cup_product_ring() {
        let ring = torus_seven().cup_product(Z).unwrap();
        assert_eq!(ring.rank(1), 2);
        assert_eq!(ring.rank(2), 1);
        let u = Label::new(1, 1);
        let v = Label::new(1, 2);
        let uv = ring.product(u, v);
        let vu = ring.product(v, u);
        assert_eq!(uv.len(), 1);
        assert_eq!(uv[0].0.abs(), 1, "u·v generates the top degree");
        assert_eq!(crate::ring::combo_scale(&vu, -1), uv);
        assert!(ring.product(u, u).is_empty());
        assert!(ring.product(v, v).is_empty());
    }

    #[test]
    fn sphere_cup_products_trivial() {
        let s2 = OrderedSimplicialComplex::simplex_boundary(3).unwrap();
        let ring = s2.cup_product(Z).unwrap();
        assert_eq!(ring.rank(2), 1);
        let top = Label::new(2, 1);
        assert!(ring.product(top, top).is_empty());
    }

    #[test]
    fn projective_plane_ring_over_fields() {
        // over Z there is torsion, so the oracle must refuse
        let p = projective_plane_six();
        assert!(matches!(
            p.cup_product(Z),
            Err(Error::TorsionOverIntegers { degree: 2 })
        ));
        // over Z/2 the generator squares to the top class
        let ring = p.cup_product(Coefficients::ModP(2)).unwrap();
        assert_eq!(ring.rank(1), 1);
        assert_eq!(ring.rank(2), 1);
        let u = Label::new(1, 1);
        assert_eq!(ring.product(u, u), vec![(1, Label::new(2, 1))]);
        // over Q everything above degree 0 dies
        let ring_q = p.cup_product(Q).unwrap();
        assert_eq!(ring_q.rank(1), 0);
        assert_eq!(ring_q.rank(2), 0);
    }

    #[test]
    fn product_triangulation_of_spheres() {
        let s2 = OrderedSimplicialComplex::simplex_boundary(3).unwrap();
        let prod = s2.product(&s2).unwrap();
        let h = prod.chain_complex::<i64>().unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn s2xs2_cup_products_give_hyperbolic_form() {
        let s2 = OrderedSimplicialComplex::simplex_boundary(3).unwrap();
        let prod = s2.product(&s2).unwrap();
        let ring = prod.cup_product(Z).unwrap();
        assert_eq!(ring.rank(2), 2);
        assert_eq!(ring.rank(4), 1);
        let x = Label::new(2, 1);
        let y = Label::new(2, 2);
        let form = |c: crate::ring::Combo| -> i64 {
            match c.as_slice() {
                [] => 0,
                [(v, l)] => {
                    assert_eq!(*l, Label::new(4, 1));
                    *v
                }
                _ => panic!("unexpected combination"),
            }
        };
        let q11 = form(ring.product(x, x));
        let q12 = form(ring.product(x, y));
        let q22 = form(ring.product(y, y));
        // the intersection form of this four-manifold: even, determinant -1
        assert_eq!(q11 % 2, 0);
        assert_eq!(q22 % 2, 0);
        assert_eq!(q11 * q22 - q12 * q12, -1);
    }

    #[test]
    fn torus_as_circle_product_matches_tensor_oracle() {
        let s1 = OrderedSimplicialComplex::simplex_boundary(2).unwrap();
        let prod = s1.product(&s1).unwrap();
        let h = prod.chain_complex::<i64>().unwrap().homology(Z).unwrap();
        assert_eq!(free_ranks(&h), vec![(0, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn dimension_bound_enforced() {
        let s7 = OrderedSimplicialComplex::simplex_boundary(8).unwrap();
        assert!(matches!(
            s7.cup_product(Z),
            Err(Error::DimensionBound { dim: 7, .. })
        ));
    }
}
