//! Closed-form invariants of polyhedron terms and of discs with holes:
//! homology, connectivity, hole realization, parametrized cup-product rings,
//! and the degree-based vanishing checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Coefficients, FgModule, GradedModule};
use crate::ring::{combo_add, combo_scale, CohomologyRing, Combo, Label};
use crate::term::PolyhedronTerm;
use crate::DEFAULT_DEGREE_CAP;

/// Closed-form homology of a term over the requested coefficients.
///
/// Atoms carry integral homology and are converted by universal
/// coefficients; bouquets take reduced direct sums; products use the
/// Künneth rule; connected sums take reduced direct sums in the middle
/// degrees with a single class at top and bottom.
pub fn homology_of_term(
    t: &PolyhedronTerm,
    coefficients: Coefficients,
) -> Result<GradedModule> {
    match t {
        PolyhedronTerm::Atom(a) => a.homology.with_coefficients(coefficients),
        PolyhedronTerm::Bouquet(cs) => {
            let mut out = GradedModule::point(coefficients);
            for c in cs {
                let h = homology_of_term(c, coefficients)?;
                for (d, m) in h.degrees().filter(|(d, _)| *d >= 1) {
                    out.add(d, m)?;
                }
            }
            Ok(out)
        }
        PolyhedronTerm::Product(a, b) => homology_of_term(a, coefficients)?
            .kunneth(&homology_of_term(b, coefficients)?),
        PolyhedronTerm::ConnSum(cs) => {
            let n = t.dim();
            let mut out = GradedModule::point(coefficients);
            for c in cs {
                let h = homology_of_term(c, coefficients)?;
                for (d, m) in h.degrees().filter(|(d, _)| *d >= 1 && *d <= n - 1) {
                    out.add(d, m)?;
                }
            }
            out.add(n, &FgModule::free(coefficients, 1))?;
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectivityReport {
    /// Largest c with reduced integral homology trivial in degrees <= c.
    pub connectivity: usize,
    /// Set when a non-simply-connected atom is present, so the figure is
    /// homological only.
    pub homological_only: bool,
}

/// Homological connectivity of a term. Under the simple-connectivity flags
/// of the atoms this is the connectivity; otherwise the report says so.
pub fn connectivity_of_term(t: &PolyhedronTerm) -> Result<ConnectivityReport> {
    let h = homology_of_term(t, Coefficients::Integers)?;
    let first_nontrivial = (1..=DEFAULT_DEGREE_CAP).find(|&d| !h.degree(d).is_trivial());
    let connectivity = match first_nontrivial {
        Some(d) => d - 1,
        None => crate::term::POINT_CONNECTIVITY,
    };
    let homological_only = t.atoms().iter().any(|a| !a.simply_connected);
    Ok(ConnectivityReport {
        connectivity,
        homological_only,
    })
}

/// Reference to one sphere summand: (hole index, summand index), 0-based.
pub type SummandRef = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub a: SummandRef,
    pub b: SummandRef,
    pub lk: i64,
}

/// Holes of a disc: each hole is a bouquet of spheres listed by dimension
/// (an empty list is a point hole), with optional linking integers on pairs
/// of sphere summands in complementary dimensions (s, n-1-s).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleSpec {
    pub holes: Vec<Vec<usize>>,
    #[serde(default)]
    pub linking: Vec<LinkEntry>,
}

impl HoleSpec {
    pub fn new(holes: Vec<Vec<usize>>) -> Self {
        HoleSpec {
            holes,
            linking: Vec::new(),
        }
    }

    pub fn sphere_count(&self) -> usize {
        self.holes.iter().map(Vec::len).sum()
    }

    pub fn summand_dim(&self, r: SummandRef) -> Result<usize> {
        self.holes
            .get(r.0)
            .and_then(|h| h.get(r.1))
            .copied()
            .ok_or_else(|| Error::HoleSpec(format!("no summand {r:?}")))
    }

    /// Structural checks against the ambient dimension: sphere dimensions in
    /// 1..=n-2 and linking only on complementary pairs.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::HoleSpec(format!("ambient dimension {n} too small")));
        }
        for hole in &self.holes {
            for &s in hole {
                if s == 0 || s >= n - 1 {
                    return Err(Error::SphereDimOutOfRange {
                        dim: s as i64,
                        ambient: n,
                    });
                }
            }
        }
        for e in &self.linking {
            let da = self.summand_dim(e.a)?;
            let db = self.summand_dim(e.b)?;
            if da + db != n - 1 {
                return Err(Error::HoleSpec(format!(
                    "linking on non-complementary pair of dimensions ({da}, {db}) \
                     with ambient {n}"
                )));
            }
            if e.a == e.b {
                return Err(Error::HoleSpec("self-linking entry".into()));
            }
        }
        Ok(())
    }

    /// Linking integer between two summands (0 when unspecified).
    pub fn linking_between(&self, a: SummandRef, b: SummandRef) -> i64 {
        self.linking
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map_or(0, |e| e.lk)
    }
}

#[derive(Debug, Clone)]
pub struct DiscHomology {
    pub homology: GradedModule,
    /// Hole summands exceeding the connectivity target n-k-1.
    pub warnings: Vec<String>,
}

/// Homology of the n-disc with the given holes removed: rank 1 in degree 0,
/// one class of degree n-s-1 per sphere summand of dimension s, and one
/// class of degree n-1 per hole; everything free.
pub fn disc_with_holes_homology(
    n: usize,
    k: usize,
    spec: &HoleSpec,
    coefficients: Coefficients,
) -> Result<DiscHomology> {
    spec.validate(n)?;
    let mut warnings = Vec::new();
    for (h, hole) in spec.holes.iter().enumerate() {
        for &s in hole {
            if s + k + 1 > n {
                warnings.push(format!(
                    "hole {h}: sphere dimension {s} exceeds n-k-1 = {}; the result \
                     cannot be (k-1)-connected",
                    n as i64 - k as i64 - 1
                ));
            }
        }
    }
    let mut out = GradedModule::point(coefficients);
    for hole in &spec.holes {
        for &s in hole {
            out.add(n - s - 1, &FgModule::free(coefficients, 1))?;
        }
    }
    out.add(
        n - 1,
        &FgModule::free(coefficients, spec.holes.len()),
    )?;
    Ok(DiscHomology {
        homology: out,
        warnings,
    })
}

/// Target ranks per degree; absent degrees are zero.
pub type RankVector = BTreeMap<usize, usize>;

/// Emit holes realizing the requested free ranks: one sphere of dimension
/// n-j-1 per unit of rank in degree j <= n-2, grouped into exactly
/// `ranks[n-1]` bouquet holes, largest hole first.
pub fn realize_ranks(n: usize, k: usize, ranks: &RankVector) -> Result<HoleSpec> {
    if n < 2 || k < 2 || n < k {
        return Err(Error::Invalid(format!(
            "need n >= k >= 2, got (n, k) = ({n}, {k})"
        )));
    }
    for (&j, &r) in ranks {
        if r == 0 {
            continue;
        }
        if j < k {
            return Err(Error::RankHypothesis(format!(
                "rank in degree {j} must vanish below the connectivity degree {k}"
            )));
        }
        if j > n - 1 {
            return Err(Error::RankHypothesis(format!(
                "rank in degree {j} must vanish at and above the dimension {n}"
            )));
        }
    }
    let top_rank = ranks.get(&(n - 1)).copied().unwrap_or(0);
    let middle_total: usize = ranks
        .iter()
        .filter(|(&j, _)| j <= n - 2)
        .map(|(_, &r)| r)
        .sum();
    if middle_total < top_rank {
        return Err(Error::RankHypothesis(format!(
            "need sum of middle ranks >= top rank; deficit {}",
            top_rank - middle_total
        )));
    }
    if top_rank == 0 && middle_total > 0 {
        return Err(Error::RankHypothesis(
            "middle classes need holes, but the degree n-1 rank is 0".into(),
        ));
    }
    // spheres in descending dimension: degree j contributes dim n-j-1
    let mut spheres = Vec::with_capacity(middle_total);
    for (&j, &r) in ranks.iter().filter(|(&j, _)| j <= n - 2) {
        for _ in 0..r {
            spheres.push(n - j - 1);
        }
    }
    spheres.sort_unstable_by(|a, b| b.cmp(a));
    let mut holes: Vec<Vec<usize>> = Vec::with_capacity(top_rank);
    if top_rank > 0 {
        let first_take = middle_total - top_rank + 1;
        holes.push(spheres[..first_take].to_vec());
        for s in &spheres[first_take..] {
            holes.push(vec![*s]);
        }
    }
    Ok(HoleSpec::new(holes))
}

/// Which reading of the middle-degree coefficient index to use when n is
/// odd: the literal expression (which can run past the sequence and then
/// errors), or the standard triangular pair index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexMode {
    Literal,
    Triangular,
}

impl Default for IndexMode {
    fn default() -> Self {
        IndexMode::Literal
    }
}

impl std::str::FromStr for IndexMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(IndexMode::Literal),
            "triangular" => Ok(IndexMode::Triangular),
            _ => Err(Error::Invalid(format!("unknown index mode {s:?}"))),
        }
    }
}

/// The parametrized cohomology ring of a disc-with-holes in the equality
/// case (middle rank sum equals the top rank).
///
/// Basis: `e[j, i]` with i ranging over rank_j per degree j, plus the unit.
/// For a1 < b1 with a1 + b1 = n-1 the product of `e[a1,a2]` and `e[b1,b2]`
/// is the coefficient `a[idx]` times the sum of the two top-degree classes
/// dual to the holes involved, with
/// `idx = Σ_{j<a1} rank_j·rank_{n-1-j} + rank_{b1}·(a2-1) + b2`;
/// products of positive-degree classes not complementary in degree vanish.
/// When n is odd, middle-degree products use the separate sequence `a0`
/// indexed per [`IndexMode`], and squares of middle classes vanish.
pub fn presented_ring(
    n: usize,
    k: usize,
    coefficients: Coefficients,
    ranks: &RankVector,
    a: &[i64],
    a0: &[i64],
    index_mode: IndexMode,
) -> Result<CohomologyRing> {
    if n < 2 || k < 2 || n < k {
        return Err(Error::Invalid(format!(
            "need n >= k >= 2, got (n, k) = ({n}, {k})"
        )));
    }
    let rank = |j: usize| -> usize { ranks.get(&j).copied().unwrap_or(0) };
    for (&j, &r) in ranks {
        if r > 0 && (j < k || j > n - 1) {
            return Err(Error::RankHypothesis(format!(
                "rank in degree {j} must vanish outside {k}..={}",
                n - 1
            )));
        }
    }
    let middle_total: usize = (1..=n - 2).map(rank).sum();
    if middle_total != rank(n - 1) {
        return Err(Error::RankHypothesis(format!(
            "the presented ring needs the equality case: middle rank sum {} \
             vs top rank {}",
            middle_total,
            rank(n - 1)
        )));
    }
    // expected coefficient sequence length
    let half = (n - 1) / 2;
    let expected_l: usize = (1..=half).map(|j| rank(j) * rank(n - 1 - j)).sum();
    if a.len() != expected_l {
        return Err(Error::SequenceLength {
            which: "product coefficients",
            expected: expected_l,
            got: a.len(),
        });
    }
    let zero_prefix: usize = (1..k).map(|j| rank(j) * rank(n - 1 - j)).sum();
    for (i, &v) in a.iter().take(zero_prefix).enumerate() {
        if v != 0 {
            return Err(Error::RankHypothesis(format!(
                "coefficient {} lies in the forced-zero prefix (length {zero_prefix}) \
                 but is {v}",
                i + 1
            )));
        }
    }
    let r_mid = if n % 2 == 1 { rank((n - 1) / 2) } else { 0 };
    let l0 = r_mid * r_mid.saturating_sub(1) / 2;
    if a0.len() != l0 {
        return Err(Error::SequenceLength {
            which: "middle-degree coefficients",
            expected: l0,
            got: a0.len(),
        });
    }

    let mut ring = CohomologyRing::new(coefficients, n);
    for j in k..=n - 1 {
        if rank(j) > 0 {
            ring.ranks.insert(j, rank(j));
        }
    }
    // prefix sums of ranks: position of a degree's block among the
    // top-degree classes
    let block_start = |d: usize| -> usize { (1..d).map(rank).sum() };

    for a1 in 1..=half {
        let b1 = n - 1 - a1;
        if a1 >= b1 {
            continue;
        }
        if rank(a1) == 0 || rank(b1) == 0 {
            continue;
        }
        let idx_base: usize = (1..a1).map(|j| rank(j) * rank(n - 1 - j)).sum();
        for a2 in 1..=rank(a1) {
            for b2 in 1..=rank(b1) {
                let idx = idx_base + rank(b1) * (a2 - 1) + b2;
                let coeff = a[idx - 1];
                let value: Combo = combo_scale(
                    &vec![
                        (1, Label::new(n - 1, block_start(a1) + a2)),
                        (1, Label::new(n - 1, block_start(b1) + b2)),
                    ],
                    coeff,
                );
                let la = Label::new(a1, a2);
                let lb = Label::new(b1, b2);
                ring.set_product(la, lb, value.clone())?;
                let sign = if (a1 * b1) % 2 == 0 { 1 } else { -1 };
                ring.set_product(lb, la, combo_scale(&value, sign))?;
            }
        }
    }
    if n % 2 == 1 && r_mid > 0 {
        let m = (n - 1) / 2;
        for a_i in 1..=r_mid {
            for b_i in (a_i + 1)..=r_mid {
                let idx = match index_mode {
                    IndexMode::Literal => {
                        let idx: usize =
                            (1..a_i).map(|j| l0 - j).sum::<usize>() + (b_i - a_i);
                        if idx > l0 {
                            return Err(Error::LiteralIndexOutOfRange { index: idx, len: l0 });
                        }
                        idx
                    }
                    IndexMode::Triangular => {
                        (1..a_i).map(|j| r_mid - j).sum::<usize>() + (b_i - a_i)
                    }
                };
                let coeff = a0[idx - 1];
                let value: Combo = combo_scale(
                    &vec![
                        (1, Label::new(n - 1, block_start(m) + a_i)),
                        (1, Label::new(n - 1, block_start(m) + b_i)),
                    ],
                    coeff,
                );
                let la = Label::new(m, a_i);
                let lb = Label::new(m, b_i);
                ring.set_product(la, lb, value.clone())?;
                let sign = if (m * m) % 2 == 0 { 1 } else { -1 };
                ring.set_product(lb, la, combo_scale(&value, sign))?;
            }
        }
    }
    ring.check_invariants()?;
    Ok(ring)
}

/// Extract the coefficient sequences from linking data and build the
/// presented ring: the class dual to one sphere evaluates on the fiber of
/// the other's tubular neighborhood with multiplicity the linking integer.
/// Holes must each be a single sphere (points are rejected by the equality
/// case).
pub fn ring_from_holes(
    n: usize,
    k: usize,
    spec: &HoleSpec,
    coefficients: Coefficients,
    index_mode: IndexMode,
) -> Result<CohomologyRing> {
    spec.validate(n)?;
    for (h, hole) in spec.holes.iter().enumerate() {
        if hole.len() > 1 {
            return Err(Error::HoleSpec(format!(
                "hole {h} has {} sphere summands; the cup-product extraction \
                 needs single-sphere holes",
                hole.len()
            )));
        }
    }
    // ranks: degree n-s-1 per sphere, degree n-1 per hole
    let mut ranks: RankVector = BTreeMap::new();
    for hole in &spec.holes {
        for &s in hole {
            *ranks.entry(n - s - 1).or_insert(0) += 1;
        }
    }
    if !spec.holes.is_empty() {
        *ranks.entry(n - 1).or_insert(0) += spec.holes.len();
    }
    // summand refs ordered the same way the ring orders classes: by degree
    // (descending sphere dimension), then hole order
    let mut by_degree: BTreeMap<usize, Vec<SummandRef>> = BTreeMap::new();
    for (h, hole) in spec.holes.iter().enumerate() {
        for (s_idx, &s) in hole.iter().enumerate() {
            by_degree.entry(n - s - 1).or_default().push((h, s_idx));
        }
    }
    let rank = |j: usize| -> usize { ranks.get(&j).copied().unwrap_or(0) };
    let half = (n - 1) / 2;
    let expected_l: usize = (1..=half).map(|j| rank(j) * rank(n - 1 - j)).sum();
    let mut a = vec![0i64; expected_l];
    for a1 in 1..=half {
        let b1 = n - 1 - a1;
        if a1 >= b1 || rank(a1) == 0 || rank(b1) == 0 {
            continue;
        }
        let idx_base: usize = (1..a1).map(|j| rank(j) * rank(n - 1 - j)).sum();
        for (a2, &ra) in by_degree[&a1].iter().enumerate() {
            for (b2, &rb) in by_degree[&b1].iter().enumerate() {
                let idx = idx_base + rank(b1) * a2 + b2 + 1;
                a[idx - 1] = spec.linking_between(ra, rb);
            }
        }
    }
    let r_mid = if n % 2 == 1 { rank((n - 1) / 2) } else { 0 };
    let l0 = r_mid * r_mid.saturating_sub(1) / 2;
    let mut a0 = vec![0i64; l0];
    if r_mid > 0 {
        let mid = &by_degree[&((n - 1) / 2)];
        for ai in 0..r_mid {
            for bi in (ai + 1)..r_mid {
                let idx: usize =
                    (1..=ai).map(|j| r_mid - j).sum::<usize>() + (bi - ai);
                a0[idx - 1] = spec.linking_between(mid[ai], mid[bi]);
            }
        }
    }
    presented_ring(n, k, coefficients, &ranks, &a, &a0, index_mode)
}

/// Verdict of the product-vanishing check.
#[derive(Debug, Clone)]
pub struct VanishingVerdict {
    pub pass: bool,
    /// Factors and the nonzero product witnessing failure.
    pub witness: Option<(Vec<Label>, Combo)>,
    /// Completeness bound used for the enumeration.
    pub max_factors: usize,
}

pub const DEFAULT_MAX_FACTORS: usize = 4;

/// Enumerates products of basis classes (with repetition, up to
/// `max_factors` factors) whose degrees are each at most m-n and whose
/// total degree is at least n; passes when every such product vanishes.
pub fn check_degree_vanishing(
    ring: &CohomologyRing,
    m: usize,
    n: usize,
    max_factors: usize,
) -> Result<VanishingVerdict> {
    if m <= n || n < 1 {
        return Err(Error::Invalid(format!(
            "need source dimension m > target dimension n >= 1, got ({m}, {n})"
        )));
    }
    let eligible: Vec<Label> = ring
        .basis()
        .into_iter()
        .filter(|l| l.degree >= 1 && l.degree <= m - n)
        .collect();
    // depth-first over non-decreasing factor multisets, pruning on zero
    // partial products
    fn dfs(
        ring: &CohomologyRing,
        eligible: &[Label],
        start: usize,
        chosen: &mut Vec<Label>,
        partial: &Combo,
        degree_sum: usize,
        n: usize,
        max_factors: usize,
    ) -> Option<(Vec<Label>, Combo)> {
        if !chosen.is_empty() && degree_sum >= n && !partial.is_empty() {
            return Some((chosen.clone(), partial.clone()));
        }
        if chosen.len() == max_factors {
            return None;
        }
        for i in start..eligible.len() {
            let l = eligible[i];
            let next = if chosen.is_empty() {
                vec![(1, l)]
            } else {
                ring.multiply(partial, &vec![(1, l)])
            };
            if next.is_empty() {
                continue;
            }
            chosen.push(l);
            if let Some(w) = dfs(
                ring,
                eligible,
                i,
                chosen,
                &next,
                degree_sum + l.degree,
                n,
                max_factors,
            ) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = Vec::new();
    let witness = dfs(
        ring,
        &eligible,
        0,
        &mut chosen,
        &Vec::new(),
        0,
        n,
        max_factors,
    );
    Ok(VanishingVerdict {
        pass: witness.is_none(),
        witness,
        max_factors,
    })
}

/// Degree-arithmetic certificate for vanishing of triple products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripleProductVerdict {
    /// Every candidate triple product lives in degree >= 3k-1, above the
    /// top nontrivial degree n-1.
    Pass {
        minimal_triple_degree: usize,
        top_degree: usize,
    },
    /// n >= 3k: degrees alone decide nothing.
    NotDecidedByDegree,
}

/// Degree-based triple-product vanishing for rings with classes only in
/// degrees k..=n-1.
pub fn triple_products_vanish_by_degree(
    n: usize,
    k: usize,
    ranks: &RankVector,
) -> Result<TripleProductVerdict> {
    if k < 1 {
        return Err(Error::Invalid("need k >= 1".into()));
    }
    for (&j, &r) in ranks {
        if r > 0 && (j < k || j >= n) {
            return Err(Error::RankHypothesis(format!(
                "rank in degree {j} violates the window {k}..={}",
                n - 1
            )));
        }
    }
    if n < 3 * k {
        Ok(TripleProductVerdict::Pass {
            minimal_triple_degree: 3 * k - 1,
            top_degree: n - 1,
        })
    } else {
        Ok(TripleProductVerdict::NotDecidedByDegree)
    }
}

pub fn ranks_of(pairs: &[(usize, usize)]) -> RankVector {
    pairs.iter().copied().collect()
}

/// Free ranks of a graded module as a rank vector (degree 0 omitted).
pub fn rank_vector_of(g: &GradedModule) -> RankVector {
    g.degrees()
        .filter(|(d, _)| *d >= 1)
        .map(|(d, m)| (d, m.free_rank()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Coefficients::{Integers as Z, Rationals as Q};
    use crate::oracle;
    use crate::term::{builtin_atoms, AtomType, PolyhedronTerm};

    fn s(d: usize) -> PolyhedronTerm {
        PolyhedronTerm::atom(AtomType::sphere(d))
    }

    fn expect_free(pairs: &[(usize, usize)]) -> GradedModule {
        GradedModule::from_free_ranks(Z, pairs).unwrap()
    }

    #[test]
    fn homology_of_connected_sum_of_s2xs2() {
        let t = builtin_atoms();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        for q in 2..=3 {
            let term =
                PolyhedronTerm::connected_sum(vec![a.clone(); q]).unwrap();
            let h = homology_of_term(&term, Z).unwrap();
            assert_eq!(h, expect_free(&[(0, 1), (2, 2 * q), (4, 1)]));
        }
    }

    #[test]
    fn homology_of_product_with_bouquet() {
        let term = PolyhedronTerm::product(
            s(2),
            PolyhedronTerm::bouquet(vec![s(3), s(3)]).unwrap(),
        )
        .unwrap();
        let h = homology_of_term(&term, Z).unwrap();
        assert_eq!(h, expect_free(&[(0, 1), (2, 1), (3, 2), (5, 2)]));
    }

    #[test]
    fn homology_of_atom() {
        let h = homology_of_term(&s(7), Z).unwrap();
        assert_eq!(h, expect_free(&[(0, 1), (7, 1)]));
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(connectivity_of_term(&s(3)).unwrap().connectivity, 2);
        let b = PolyhedronTerm::bouquet(vec![s(2), s(4)]).unwrap();
        assert_eq!(connectivity_of_term(&b).unwrap().connectivity, 1);
        let p = PolyhedronTerm::product(s(3), s(3)).unwrap();
        assert_eq!(connectivity_of_term(&p).unwrap().connectivity, 2);
        // S1 forces the homological-only flag
        let c = PolyhedronTerm::product(s(1), s(1)).unwrap();
        let r = connectivity_of_term(&c).unwrap();
        assert_eq!(r.connectivity, 0);
        assert!(r.homological_only);
    }

    #[test]
    fn disc_with_holes_examples() {
        let spec = HoleSpec::new(vec![vec![3], vec![3], vec![3]]);
        let d = disc_with_holes_homology(6, 2, &spec, Z).unwrap();
        assert_eq!(d.homology, expect_free(&[(0, 1), (2, 3), (5, 3)]));
        assert!(d.warnings.is_empty());

        let empty = disc_with_holes_homology(6, 2, &HoleSpec::default(), Z).unwrap();
        assert_eq!(empty.homology, expect_free(&[(0, 1)]));

        let spec = HoleSpec::new(vec![vec![2, 3]]);
        let d = disc_with_holes_homology(6, 2, &spec, Z).unwrap();
        assert_eq!(
            d.homology,
            expect_free(&[(0, 1), (2, 1), (3, 1), (5, 1)])
        );

        // out-of-range sphere dimension
        let bad = HoleSpec::new(vec![vec![5]]);
        assert!(disc_with_holes_homology(6, 2, &bad, Z).is_err());

        // connectivity warning: dim 4 > n-k-1 = 3
        let warn = HoleSpec::new(vec![vec![4]]);
        let d = disc_with_holes_homology(6, 2, &warn, Z).unwrap();
        assert_eq!(d.warnings.len(), 1);
    }

    #[test]
    fn disc_with_holes_matches_mv_oracle() {
        for spec in [
            HoleSpec::new(vec![vec![3], vec![3], vec![3]]),
            HoleSpec::new(vec![vec![2, 3]]),
            HoleSpec::new(vec![vec![], vec![2]]),
            HoleSpec::new(vec![vec![1, 1, 2], vec![3]]),
        ] {
            for coeff in [Z, Q, Coefficients::ModP(2)] {
                let formula = disc_with_holes_homology(6, 2, &spec, coeff)
                    .unwrap()
                    .homology;
                let mv = oracle::disc_with_holes_mv::<i64>(6, &spec.holes, coeff).unwrap();
                assert_eq!(formula, mv, "spec {spec:?} over {coeff}");
            }
        }
    }

    #[test]
    fn realize_ranks_examples() {
        let spec = realize_ranks(6, 2, &ranks_of(&[(2, 3), (5, 3)])).unwrap();
        assert_eq!(spec.holes, vec![vec![3], vec![3], vec![3]]);

        let spec = realize_ranks(6, 2, &ranks_of(&[(2, 3), (5, 2)])).unwrap();
        assert_eq!(spec.holes, vec![vec![3, 3], vec![3]]);

        assert!(matches!(
            realize_ranks(6, 2, &ranks_of(&[(5, 1)])),
            Err(Error::RankHypothesis(_))
        ));
    }

    #[test]
    fn realize_then_evaluate_is_identity() {
        let cases: Vec<RankVector> = vec![
            ranks_of(&[(2, 3), (5, 3)]),
            ranks_of(&[(2, 2), (3, 1), (5, 2)]),
            ranks_of(&[(3, 4), (5, 1)]),
            ranks_of(&[]),
        ];
        for ranks in cases {
            let spec = realize_ranks(6, 2, &ranks).unwrap();
            let h = disc_with_holes_homology(6, 2, &spec, Z).unwrap().homology;
            assert_eq!(rank_vector_of(&h), {
                let mut expect = ranks.clone();
                expect.retain(|_, r| *r > 0);
                expect
            });
        }
    }

    #[test]
    fn presented_ring_index_formula() {
        // n=6, k=2: one degree-2 class, one degree-3 class, two top classes
        let ranks = ranks_of(&[(2, 1), (3, 1), (5, 2)]);
        let ring =
            presented_ring(6, 2, Z, &ranks, &[1], &[], IndexMode::Literal).unwrap();
        let product = ring.product(Label::new(2, 1), Label::new(3, 1));
        assert_eq!(
            product,
            vec![(1, Label::new(5, 1)), (1, Label::new(5, 2))]
        );
        // graded commutativity: degrees 2·3 even
        assert_eq!(
            ring.product(Label::new(3, 1), Label::new(2, 1)),
            product
        );
    }

    #[test]
    fn presented_ring_middle_degree() {
        // n=5, k=2: two middle classes of degree 2, two top classes
        let ranks = ranks_of(&[(2, 2), (4, 2)]);
        let ring = presented_ring(5, 2, Z, &ranks, &[0; 4], &[7], IndexMode::Literal)
            .unwrap();
        let e21 = Label::new(2, 1);
        let e22 = Label::new(2, 2);
        assert_eq!(
            ring.product(e21, e22),
            vec![(7, Label::new(4, 1)), (7, Label::new(4, 2))]
        );
        assert!(ring.product(e21, e21).is_empty());
        assert!(ring.product(e22, e22).is_empty());
    }

    #[test]
    fn presented_ring_literal_mode_can_overflow() {
        // four middle classes: the literal index expression escapes 1..=l0
        let ranks = ranks_of(&[(2, 4), (4, 4)]);
        let err = presented_ring(5, 2, Z, &ranks, &[0; 16], &[0; 6], IndexMode::Literal)
            .unwrap_err();
        assert!(matches!(err, Error::LiteralIndexOutOfRange { .. }));
        let ok = presented_ring(5, 2, Z, &ranks, &[0; 16], &[1, 2, 3, 4, 5, 6],
            IndexMode::Triangular);
        assert!(ok.is_ok());
    }

    #[test]
    fn presented_ring_validations() {
        // not the equality case
        assert!(matches!(
            presented_ring(6, 2, Z, &ranks_of(&[(2, 1), (5, 2)]), &[], &[], IndexMode::Literal),
            Err(Error::RankHypothesis(_))
        ));
        // wrong coefficient count
        assert!(matches!(
            presented_ring(6, 2, Z, &ranks_of(&[(2, 1), (3, 1), (5, 2)]), &[], &[], IndexMode::Literal),
            Err(Error::SequenceLength { .. })
        ));
    }

    #[test]
    fn ring_from_holes_examples() {
        // no linking: all products vanish
        let spec = HoleSpec::new(vec![vec![3], vec![3], vec![3]]);
        let ring = ring_from_holes(6, 2, &spec, Z, IndexMode::Literal).unwrap();
        assert_eq!(ring.rank(2), 3);
        assert_eq!(ring.rank(5), 3);
        assert!(ring.products.is_empty());

        // one S2 and one S3 with linking 1 reproduces the index-formula ring
        let spec = HoleSpec {
            holes: vec![vec![2], vec![3]],
            linking: vec![LinkEntry {
                a: (0, 0),
                b: (1, 0),
                lk: 1,
            }],
        };
        let ring = ring_from_holes(6, 2, &spec, Z, IndexMode::Literal).unwrap();
        assert_eq!(
            ring.product(Label::new(2, 1), Label::new(3, 1)),
            vec![(1, Label::new(5, 1)), (1, Label::new(5, 2))]
        );

        // linking on a non-complementary pair is rejected
        let bad = HoleSpec {
            holes: vec![vec![3], vec![3]],
            linking: vec![LinkEntry {
                a: (0, 0),
                b: (1, 0),
                lk: 1,
            }],
        };
        assert!(ring_from_holes(6, 2, &bad, Z, IndexMode::Literal).is_err());
    }

    #[test]
    fn degree_vanishing_checker() {
        // ring of S^2 x S^5 has no classes of degree <= 1: vacuous pass
        let mut ring = CohomologyRing::new(Z, 7);
        ring.ranks.insert(2, 1);
        ring.ranks.insert(5, 1);
        ring.ranks.insert(7, 1);
        ring.set_product(
            Label::new(2, 1),
            Label::new(5, 1),
            vec![(1, Label::new(7, 1))],
        )
        .unwrap();
        ring.set_product(
            Label::new(5, 1),
            Label::new(2, 1),
            vec![(1, Label::new(7, 1))],
        )
        .unwrap();
        let v = check_degree_vanishing(&ring, 7, 6, DEFAULT_MAX_FACTORS).unwrap();
        assert!(v.pass);

        // the 7-torus exterior ring fails with a 6-fold witness
        let torus = crate::ring::exterior_ring(7, Z).unwrap();
        let v = check_degree_vanishing(&torus, 7, 6, 6).unwrap();
        assert!(!v.pass);
        let (factors, product) = v.witness.unwrap();
        assert_eq!(factors.len(), 6);
        assert!(factors.iter().all(|l| l.degree == 1));
        assert!(!product.is_empty());

        // direct failure: m-n covers the whole ring and products reach
        // degree >= n
        let v = check_degree_vanishing(&torus, 10, 2, 2).unwrap();
        assert!(!v.pass);
    }

    #[test]
    fn triple_product_degree_certificates() {
        assert_eq!(
            triple_products_vanish_by_degree(5, 2, &ranks_of(&[(2, 2), (4, 2)])).unwrap(),
            TripleProductVerdict::Pass {
                minimal_triple_degree: 5,
                top_degree: 4
            }
        );
        assert_eq!(
            triple_products_vanish_by_degree(6, 2, &ranks_of(&[(2, 3), (5, 3)])).unwrap(),
            TripleProductVerdict::NotDecidedByDegree
        );
        assert_eq!(
            triple_products_vanish_by_degree(7, 3, &ranks_of(&[(3, 1), (6, 1)])).unwrap(),
            TripleProductVerdict::Pass {
                minimal_triple_degree: 8,
                top_degree: 6
            }
        );
    }
}
