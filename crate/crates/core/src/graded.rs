//! Coefficient rings and finitely generated graded modules over a PID.
//!
//! A module is stored in canonical form: a free rank plus a divisibility
//! chain of invariant factors. Every constructor re-normalizes, so equality
//! of values is equality of isomorphism classes.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_DEGREE_CAP;

/// The coefficient PID: the integers, the rationals, or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
    ModP(u64),
}

impl Coefficients {
    /// Z/p, rejecting composite moduli.
    pub fn mod_p(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Coefficients::ModP(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Integers)
    }

    fn ensure_same(&self, other: &Coefficients) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CoefficientMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::ModP(p) => write!(f, "Z/{p}"),
        }
    }
}

impl std::str::FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Coefficients::Integers),
            "Q" | "q" => Ok(Coefficients::Rationals),
            _ => {
                let body = s
                    .strip_prefix("Zp:")
                    .or_else(|| s.strip_prefix("Z/"))
                    .or_else(|| s.strip_prefix("zp:"))
                    .ok_or_else(|| {
                        Error::Invalid(format!("unknown coefficient ring {s:?}"))
                    })?;
                let p: u64 = body
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad prime in {s:?}")))?;
                Coefficients::mod_p(p)
            }
        }
    }
}

impl Serialize for Coefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Finitely generated module over the chosen PID: a free rank plus invariant
/// factors forming a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FgModule {
    coefficients: Coefficients,
    free_rank: usize,
    invariant_factors: Vec<u64>,
}

impl FgModule {
    /// Build from a free rank and an arbitrary multiset of torsion orders.
    /// Orders are recombined into a divisibility chain; over a field the
    /// torsion is discarded.
    pub fn new(
        coefficients: Coefficients,
        free_rank: usize,
        torsion_orders: &[u64],
    ) -> Result<Self> {
        let invariant_factors = if coefficients.is_field() {
            Vec::new()
        } else {
            normalize_factors(torsion_orders)?
        };
        Ok(FgModule {
            coefficients,
            free_rank,
            invariant_factors,
        })
    }

    pub fn free(coefficients: Coefficients, rank: usize) -> Self {
        FgModule {
            coefficients,
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn zero(coefficients: Coefficients) -> Self {
        Self::free(coefficients, 0)
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Number of generators (free rank plus torsion summands); over a field
    /// this is the dimension.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Direct sum. Free ranks add; invariant factors merge and re-chain.
    pub fn sum(&self, other: &FgModule) -> Result<FgModule> {
        self.coefficients.ensure_same(&other.coefficients)?;
        let mut orders = self.invariant_factors.clone();
        orders.extend_from_slice(&other.invariant_factors);
        FgModule::new(
            self.coefficients,
            self.free_rank + other.free_rank,
            &orders,
        )
    }

    /// Tensor product over the PID, expanded bilinearly:
    /// free⊗free multiplies ranks, free⊗torsion copies torsion, and
    /// Z/a ⊗ Z/b = Z/gcd(a,b).
    pub fn tensor(&self, other: &FgModule) -> Result<FgModule> {
        self.coefficients.ensure_same(&other.coefficients)?;
        let mut orders = Vec::new();
        for _ in 0..self.free_rank {
            orders.extend_from_slice(&other.invariant_factors);
        }
        for _ in 0..other.free_rank {
            orders.extend_from_slice(&self.invariant_factors);
        }
        for a in &self.invariant_factors {
            for b in &other.invariant_factors {
                orders.push(a.gcd(b));
            }
        }
        FgModule::new(
            self.coefficients,
            self.free_rank * other.free_rank,
            &orders,
        )
    }

    /// The torsion product: free parts contribute nothing and
    /// Tor(Z/a, Z/b) = Z/gcd(a,b). Zero over a field.
    pub fn tor(&self, other: &FgModule) -> Result<FgModule> {
        self.coefficients.ensure_same(&other.coefficients)?;
        if self.coefficients.is_field() {
            return Ok(FgModule::zero(self.coefficients));
        }
        let mut orders = Vec::new();
        for a in &self.invariant_factors {
            for b in &other.invariant_factors {
                orders.push(a.gcd(b));
            }
        }
        FgModule::new(self.coefficients, 0, &orders)
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(self.coefficients.to_string()),
            r => parts.push(format!("{}^{r}", self.coefficients)),
        }
        for t in &self.invariant_factors {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Recombine a multiset of torsion orders into a divisibility chain (the
/// invariant factor normal form), dropping units.
fn normalize_factors(orders: &[u64]) -> Result<Vec<u64>> {
    let mut fs: Vec<u64> = Vec::with_capacity(orders.len());
    for &o in orders {
        match o {
            0 => return Err(Error::InvalidInvariantFactor(0)),
            1 => {}
            _ => fs.push(o),
        }
    }
    // pairwise gcd/lcm exchange: after the forward sweep fs[i] divides
    // every later entry
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let g = fs[i].gcd(&fs[j]);
            let l = (fs[i] / g)
                .checked_mul(fs[j])
                .ok_or(Error::InvariantFactorOverflow)?;
            fs[i] = g;
            fs[j] = l;
        }
    }
    fs.retain(|&f| f != 1);
    debug_assert!(fs.windows(2).all(|w| w[1] % w[0] == 0));
    Ok(fs)
}

/// Graded module: one [`FgModule`] per degree, trivial degrees absent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedModule {
    coefficients: Coefficients,
    by_degree: BTreeMap<usize, FgModule>,
}

impl GradedModule {
    pub fn new(coefficients: Coefficients) -> Self {
        GradedModule {
            coefficients,
            by_degree: BTreeMap::new(),
        }
    }

    /// Convenience: free module of the given rank in each listed degree.
    pub fn from_free_ranks(coefficients: Coefficients, ranks: &[(usize, usize)]) -> Result<Self> {
        let mut g = GradedModule::new(coefficients);
        for &(degree, rank) in ranks {
            g.add(degree, &FgModule::free(coefficients, rank))?;
        }
        Ok(g)
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    /// Insert (direct-summing into anything already present).
    pub fn add(&mut self, degree: usize, module: &FgModule) -> Result<()> {
        self.coefficients.ensure_same(&module.coefficients())?;
        if degree > DEFAULT_DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: DEFAULT_DEGREE_CAP,
            });
        }
        if module.is_trivial() {
            return Ok(());
        }
        match self.by_degree.remove(&degree) {
            None => {
                self.by_degree.insert(degree, module.clone());
            }
            Some(old) => {
                self.by_degree.insert(degree, old.sum(module)?);
            }
        }
        Ok(())
    }

    pub fn degree(&self, d: usize) -> FgModule {
        self.by_degree
            .get(&d)
            .cloned()
            .unwrap_or_else(|| FgModule::zero(self.coefficients))
    }

    pub fn rank(&self, d: usize) -> usize {
        self.by_degree.get(&d).map_or(0, FgModule::free_rank)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (usize, &FgModule)> {
        self.by_degree.iter().map(|(d, m)| (*d, m))
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.by_degree.keys().next_back().copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.by_degree.is_empty()
    }

    /// Total generator count across degrees; dimension over a field.
    pub fn total_generators(&self) -> usize {
        self.by_degree.values().map(FgModule::generator_count).sum()
    }

    pub fn sum(&self, other: &GradedModule) -> Result<GradedModule> {
        self.coefficients.ensure_same(&other.coefficients)?;
        let mut out = self.clone();
        for (d, m) in other.degrees() {
            out.add(d, m)?;
        }
        Ok(out)
    }

    /// Degreewise Künneth product:
    /// `(a ⊗ b)_d = ⊕_{i+j=d} a_i⊗b_j  ⊕  ⊕_{i+j=d-1} Tor(a_i, b_j)`.
    pub fn kunneth(&self, other: &GradedModule) -> Result<GradedModule> {
        self.coefficients.ensure_same(&other.coefficients)?;
        if let (Some(ta), Some(tb)) = (self.top_degree(), other.top_degree()) {
            let top = ta + tb;
            if top > DEFAULT_DEGREE_CAP {
                return Err(Error::DegreeCapExceeded {
                    degree: top,
                    cap: DEFAULT_DEGREE_CAP,
                });
            }
        }
        let mut out = GradedModule::new(self.coefficients);
        for (i, a) in self.degrees() {
            for (j, b) in other.degrees() {
                out.add(i + j, &a.tensor(b)?)?;
                let tor = a.tor(b)?;
                if !tor.is_trivial() {
                    out.add(i + j + 1, &tor)?;
                }
            }
        }
        Ok(out)
    }

    /// Reinterpret an integral graded module over new coefficients via
    /// universal coefficients: `H_d ⊗ A  ⊕  Tor(H_{d-1}, A)`.
    pub fn with_coefficients(&self, target: Coefficients) -> Result<GradedModule> {
        if self.coefficients != Coefficients::Integers {
            return Err(Error::CoefficientMismatch {
                left: self.coefficients.to_string(),
                right: "Z (required as the source of a coefficient change)".into(),
            });
        }
        match target {
            Coefficients::Integers => Ok(self.clone()),
            Coefficients::Rationals => {
                let mut out = GradedModule::new(target);
                for (d, m) in self.degrees() {
                    out.add(d, &FgModule::free(target, m.free_rank()))?;
                }
                Ok(out)
            }
            Coefficients::ModP(p) => {
                let mut out = GradedModule::new(target);
                for (d, m) in self.degrees() {
                    let p_torsion =
                        m.invariant_factors().iter().filter(|&&f| f % p == 0).count();
                    // H_d ⊗ Z/p
                    out.add(d, &FgModule::free(target, m.free_rank() + p_torsion))?;
                    // Tor(H_d, Z/p) lands one degree up
                    out.add(d + 1, &FgModule::free(target, p_torsion))?;
                }
                Ok(out)
            }
        }
    }

    /// The graded module of a point: the coefficient ring in degree 0.
    pub fn point(coefficients: Coefficients) -> Self {
        let mut g = GradedModule::new(coefficients);
        g.add(0, &FgModule::free(coefficients, 1)).expect("degree 0");
        g
    }

    /// The graded module of a d-sphere; the 0-sphere is a point by
    /// convention.
    pub fn sphere(coefficients: Coefficients, d: usize) -> Result<Self> {
        let mut g = GradedModule::point(coefficients);
        if d > 0 {
            g.add(d, &FgModule::free(coefficients, 1))?;
        }
        Ok(g)
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.by_degree.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .by_degree
            .iter()
            .map(|(d, m)| format!("H_{d} = {m}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl Serialize for GradedModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            rank: usize,
            torsion: &'a [u64],
        }
        let mut map = s.serialize_map(Some(self.by_degree.len() + 1))?;
        map.serialize_entry("coefficients", &self.coefficients)?;
        for (d, m) in &self.by_degree {
            map.serialize_entry(
                &d.to_string(),
                &Entry {
                    rank: m.free_rank(),
                    torsion: m.invariant_factors(),
                },
            )?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for GradedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            rank: usize,
            #[serde(default)]
            torsion: Vec<u64>,
        }
        #[derive(Deserialize)]
        struct Repr {
            coefficients: Coefficients,
            #[serde(flatten)]
            degrees: BTreeMap<String, Entry>,
        }
        let repr = Repr::deserialize(d)?;
        let mut g = GradedModule::new(repr.coefficients);
        for (key, entry) in repr.degrees {
            let degree: usize = key.parse().map_err(|_| {
                serde::de::Error::custom(format!("bad degree key {key:?}"))
            })?;
            let m = FgModule::new(repr.coefficients, entry.rank, &entry.torsion)
                .map_err(serde::de::Error::custom)?;
            g.add(degree, &m).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z: Coefficients = Coefficients::Integers;
    const Q: Coefficients = Coefficients::Rationals;

    fn m(rank: usize, tors: &[u64]) -> FgModule {
        FgModule::new(Z, rank, tors).unwrap()
    }

    #[test]
    fn sum_of_free_modules() {
        assert_eq!(m(2, &[]).sum(&m(1, &[])).unwrap(), m(3, &[]));
    }

    #[test]
    fn sum_recombines_torsion() {
        // Z/2 + Z/3 = Z/6 (Smith normal form of diag(2,3))
        assert_eq!(m(0, &[2]).sum(&m(0, &[3])).unwrap(), m(0, &[6]));
        // Z + Z/4 + Z/2 has elementary divisors {2, 4}
        let s = m(1, &[4]).sum(&m(0, &[2])).unwrap();
        assert_eq!(s.free_rank(), 1);
        assert_eq!(s.invariant_factors(), &[2, 4]);
    }

    #[test]
    fn sum_coefficient_mismatch() {
        let a = FgModule::new(Z, 1, &[]).unwrap();
        let b = FgModule::new(Q, 1, &[]).unwrap();
        assert!(matches!(a.sum(&b), Err(Error::CoefficientMismatch { .. })));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(m(2, &[]).tensor(&m(3, &[])).unwrap(), m(6, &[]));
        // Z/4 ⊗ Z/6 = Z/2
        assert_eq!(m(0, &[4]).tensor(&m(0, &[6])).unwrap(), m(0, &[2]));
        // (Z + Z/2) ⊗ Z = Z + Z/2
        assert_eq!(m(1, &[2]).tensor(&m(1, &[])).unwrap(), m(1, &[2]));
    }

    #[test]
    fn tor_examples() {
        assert_eq!(m(5, &[]).tor(&m(7, &[])).unwrap(), m(0, &[]));
        assert_eq!(m(0, &[2]).tor(&m(0, &[2])).unwrap(), m(0, &[2]));
        let a = FgModule::new(Q, 3, &[]).unwrap();
        let b = FgModule::new(Q, 2, &[]).unwrap();
        assert!(a.tor(&b).unwrap().is_trivial());
    }

    #[test]
    fn field_discards_torsion_at_construction() {
        let f = FgModule::new(Q, 2, &[2, 4]).unwrap();
        assert!(f.invariant_factors().is_empty());
        assert_eq!(f.free_rank(), 2);
    }

    #[test]
    fn mod_p_requires_prime() {
        assert!(Coefficients::mod_p(6).is_err());
        assert!(Coefficients::mod_p(1).is_err());
        assert!(Coefficients::mod_p(13).is_ok());
    }

    #[test]
    fn kunneth_spheres() {
        // H(S^2) x H(S^3) concentrates in degrees 0, 2, 3, 5
        let s2 = GradedModule::sphere(Z, 2).unwrap();
        let s3 = GradedModule::sphere(Z, 3).unwrap();
        let k = s2.kunneth(&s3).unwrap();
        let expect =
            GradedModule::from_free_ranks(Z, &[(0, 1), (2, 1), (3, 1), (5, 1)]).unwrap();
        assert_eq!(k, expect);
    }

    #[test]
    fn kunneth_point_is_identity() {
        let s3 = GradedModule::sphere(Z, 3).unwrap();
        let p = GradedModule::point(Z);
        assert_eq!(p.kunneth(&s3).unwrap(), s3);
        assert_eq!(s3.kunneth(&p).unwrap(), s3);
    }

    #[test]
    fn kunneth_with_torsion() {
        // (Z/2 in degree 1) x (Z/2 in degree 1):
        // tensor lands in degree 2, Tor shifts to degree 3
        let mut a = GradedModule::point(Z);
        a.add(1, &m(0, &[2])).unwrap();
        let k = a.kunneth(&a).unwrap();
        assert_eq!(k.degree(2).invariant_factors(), &[2]);
        assert_eq!(k.degree(3).invariant_factors(), &[2]);
    }

    #[test]
    fn kunneth_degree_cap() {
        let a = GradedModule::sphere(Z, 20).unwrap();
        let b = GradedModule::sphere(Z, 20).unwrap();
        assert!(matches!(
            a.kunneth(&b),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn change_of_coefficients() {
        // Z + Z/2 in degree 1
        let mut g = GradedModule::point(Z);
        g.add(1, &m(1, &[2])).unwrap();
        let q = g.with_coefficients(Q).unwrap();
        assert_eq!(q.degree(1), FgModule::free(Q, 1));
        let f2 = g.with_coefficients(Coefficients::ModP(2)).unwrap();
        // rank 2 in degree 1 (free + torsion), rank 1 in degree 2 (Tor)
        assert_eq!(f2.degree(1).free_rank(), 2);
        assert_eq!(f2.degree(2).free_rank(), 1);
        let f3 = g.with_coefficients(Coefficients::ModP(3)).unwrap();
        assert_eq!(f3.degree(1).free_rank(), 1);
        assert_eq!(f3.degree(2).free_rank(), 0);
    }

    fn arb_module() -> impl Strategy<Value = FgModule> {
        (
            0usize..4,
            proptest::collection::vec(prop_oneof![Just(2u64), Just(3), Just(4), Just(6), Just(9)], 0..4),
        )
            .prop_map(|(r, t)| FgModule::new(Z, r, &t).unwrap())
    }

    proptest! {
        #[test]
        fn sum_commutative_associative(a in arb_module(), b in arb_module(), c in arb_module()) {
            prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
            prop_assert_eq!(
                a.sum(&b).unwrap().sum(&c).unwrap(),
                a.sum(&b.sum(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn tensor_commutative_associative(a in arb_module(), b in arb_module(), c in arb_module()) {
            prop_assert_eq!(a.tensor(&b).unwrap(), b.tensor(&a).unwrap());
            prop_assert_eq!(
                a.tensor(&b).unwrap().tensor(&c).unwrap(),
                a.tensor(&b.tensor(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn normalization_idempotent(a in arb_module()) {
            let again = FgModule::new(Z, a.free_rank(), a.invariant_factors()).unwrap();
            prop_assert_eq!(a, again);
        }

        #[test]
        fn kunneth_dimension_over_field(
            ra in proptest::collection::vec((0usize..5, 0usize..3), 1..4),
            rb in proptest::collection::vec((0usize..5, 0usize..3), 1..4),
        ) {
            let a = GradedModule::from_free_ranks(Q, &ra).unwrap();
            let b = GradedModule::from_free_ranks(Q, &rb).unwrap();
            let k = a.kunneth(&b).unwrap();
            prop_assert_eq!(
                k.total_generators(),
                a.total_generators() * b.total_generators()
            );
        }
    }
}
