//! Polyhedron terms: manifold atoms combined by bouquets, products and
//! connected sums, together with root sequences, trace-embedding records,
//! and the classification checkers for roots.
//!
//! Every value of [`PolyhedronTerm`] carries a type bit: 1 for terms naming
//! a smooth closed manifold (atoms, connected sums), 0 for terms naming only
//! a polyhedron (bouquets, products). The combination rules consult these
//! bits: products need at least one manifold factor, connected sums need
//! only manifold summands of one common dimension.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CombineRule, Error, Result};
use crate::graded::{Coefficients, GradedModule};
use crate::DEFAULT_DEGREE_CAP;

/// Connectivity recorded for a point, which is as highly connected as any
/// check will ever ask for.
pub const POINT_CONNECTIVITY: usize = 9999;

/// A named diffeomorphism type with the metadata the checkers consume.
///
/// Atoms are closed and connected; `homology` is integral. The
/// `is_manifold` flag is the atom's type bit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomType {
    pub name: String,
    pub dim: usize,
    pub is_manifold: bool,
    pub simply_connected: bool,
    /// Largest c such that reduced homology vanishes in degrees <= c
    /// (claimed; validated against `homology`).
    pub connectivity: usize,
    pub orientable: bool,
    pub homotopy_sphere: bool,
    pub standard_sphere: bool,
    #[serde(default)]
    pub spin: Option<bool>,
    #[serde(default)]
    pub signature: Option<i64>,
    pub homology: GradedModule,
}

impl AtomType {
    pub fn validate(&self) -> Result<()> {
        let fail = |detail: &str| {
            Err(Error::InvalidAtom {
                name: self.name.clone(),
                detail: detail.into(),
            })
        };
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return fail("name must be a nonempty alphanumeric/underscore identifier");
        }
        if self.dim > DEFAULT_DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: self.dim,
                cap: DEFAULT_DEGREE_CAP,
            });
        }
        if self.homology.coefficients() != Coefficients::Integers {
            return fail("atom homology must be integral");
        }
        let h0 = self.homology.degree(0);
        if h0.free_rank() != 1 || !h0.is_free() {
            return fail("degree-0 homology must be free of rank 1 (connected)");
        }
        if let Some(top) = self.homology.top_degree() {
            if top > self.dim {
                return fail("homology above the dimension");
            }
        }
        if self.is_manifold && self.orientable && self.dim > 0 {
            let ht = self.homology.degree(self.dim);
            if ht.free_rank() != 1 || !ht.is_free() {
                return fail("closed orientable manifold needs top homology of rank 1");
            }
        }
        if self.homotopy_sphere
            && self.homology != GradedModule::sphere(Coefficients::Integers, self.dim)?
        {
            return fail("homotopy sphere with non-sphere homology");
        }
        if self.standard_sphere && !self.homotopy_sphere {
            return fail("standard sphere must be a homotopy sphere");
        }
        if self.signature.is_some() && (self.dim == 0 || self.dim % 4 != 0 || !self.orientable)
        {
            return fail("signature only applies to orientable dimensions divisible by 4");
        }
        if self.spin == Some(true) && !self.orientable {
            return fail("spin requires orientable");
        }
        for d in 1..=self.connectivity.min(DEFAULT_DEGREE_CAP) {
            if !self.homology.degree(d).is_trivial() {
                return fail("reduced homology must vanish up to the stated connectivity");
            }
        }
        Ok(())
    }

    /// Whether the atom is (c)-connected, combining the simple-connectivity
    /// flag with the homological metadata.
    pub fn connected_at_least(&self, c: usize) -> bool {
        c == 0 || (self.simply_connected && self.connectivity >= c)
    }

    /// The standard d-sphere (a point for d = 0).
    pub fn sphere(d: usize) -> Arc<AtomType> {
        let a = AtomType {
            name: format!("S{d}"),
            dim: d,
            is_manifold: true,
            simply_connected: d != 1,
            connectivity: if d == 0 {
                POINT_CONNECTIVITY
            } else {
                d - 1
            },
            orientable: true,
            homotopy_sphere: true,
            standard_sphere: true,
            spin: Some(true),
            signature: if d > 0 && d % 4 == 0 { Some(0) } else { None },
            homology: GradedModule::sphere(Coefficients::Integers, d)
                .expect("sphere homology under the cap"),
        };
        debug_assert!(a.validate().is_ok());
        Arc::new(a)
    }
}

/// The built-in atom table: spheres S0..S9 (with `pt` as an alias for S0),
/// connected sums of copies of S2xS2, and the small-dimension fixtures the
/// whitelist checkers need.
pub fn builtin_atoms() -> AtomTable {
    let z = Coefficients::Integers;
    let free = |pairs: &[(usize, usize)]| GradedModule::from_free_ranks(z, pairs).unwrap();
    let mut table = AtomTable::default();
    for d in 0..=9 {
        table.insert_arc(AtomType::sphere(d));
    }
    table.alias("pt", "S0").unwrap();

    let s2xs2 = |copies: usize| AtomType {
        name: if copies == 1 {
            "S2xS2".into()
        } else {
            format!("S2xS2_{copies}")
        },
        dim: 4,
        is_manifold: true,
        simply_connected: true,
        connectivity: 1,
        orientable: true,
        homotopy_sphere: false,
        standard_sphere: false,
        spin: Some(true),
        signature: Some(0),
        homology: free(&[(0, 1), (2, 2 * copies), (4, 1)]),
    };
    table.insert(s2xs2(1)).unwrap();
    table.insert(s2xs2(2)).unwrap();
    table.insert(s2xs2(3)).unwrap();

    table
        .insert(AtomType {
            name: "S2xS3".into(),
            dim: 5,
            is_manifold: true,
            simply_connected: true,
            connectivity: 1,
            orientable: true,
            homotopy_sphere: false,
            standard_sphere: false,
            spin: Some(true),
            signature: None,
            homology: free(&[(0, 1), (2, 1), (3, 1), (5, 1)]),
        })
        .unwrap();

    // the Wu manifold SU(3)/SO(3): simply connected, orientable,
    // non-spin, H_2 = Z/2
    let mut wu = GradedModule::from_free_ranks(z, &[(0, 1), (5, 1)]).unwrap();
    wu.add(
        2,
        &crate::graded::FgModule::new(z, 0, &[2]).unwrap(),
    )
    .unwrap();
    table
        .insert(AtomType {
            name: "Wu5".into(),
            dim: 5,
            is_manifold: true,
            simply_connected: true,
            connectivity: 1,
            orientable: true,
            homotopy_sphere: false,
            standard_sphere: false,
            spin: Some(false),
            signature: None,
            homology: wu,
        })
        .unwrap();

    table
        .insert(AtomType {
            name: "CP2".into(),
            dim: 4,
            is_manifold: true,
            simply_connected: true,
            connectivity: 1,
            orientable: true,
            homotopy_sphere: false,
            standard_sphere: false,
            spin: Some(false),
            signature: Some(1),
            homology: free(&[(0, 1), (2, 1), (4, 1)]),
        })
        .unwrap();

    // CP^2 # (-CP^2): signature 0 but not spin, so not a sum of S2xS2's
    table
        .insert(AtomType {
            name: "CP2_CP2bar".into(),
            dim: 4,
            is_manifold: true,
            simply_connected: true,
            connectivity: 1,
            orientable: true,
            homotopy_sphere: false,
            standard_sphere: false,
            spin: Some(false),
            signature: Some(0),
            homology: free(&[(0, 1), (2, 2), (4, 1)]),
        })
        .unwrap();

    table
}

/// Named atoms, with aliases, loadable from JSON.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    atoms: BTreeMap<String, Arc<AtomType>>,
}

impl AtomTable {
    pub fn insert(&mut self, atom: AtomType) -> Result<Arc<AtomType>> {
        atom.validate()?;
        let arc = Arc::new(atom);
        self.atoms.insert(arc.name.clone(), arc.clone());
        Ok(arc)
    }

    fn insert_arc(&mut self, atom: Arc<AtomType>) {
        self.atoms.insert(atom.name.clone(), atom);
    }

    pub fn alias(&mut self, alias: &str, target: &str) -> Result<()> {
        let atom = self
            .atoms
            .get(target)
            .ok_or_else(|| Error::AtomTable(format!("unknown alias target {target}")))?
            .clone();
        self.atoms.insert(alias.to_string(), atom);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Arc<AtomType>> {
        self.atoms.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.atoms.keys().map(String::as_str)
    }

    /// Merge user-supplied atoms from JSON (a list of [`AtomType`] records)
    /// over this table.
    pub fn load_json(&mut self, text: &str) -> Result<()> {
        let atoms: Vec<AtomType> = serde_json::from_str(text)?;
        for a in atoms {
            self.insert(a)?;
        }
        Ok(())
    }
}

/// An expression naming a polyhedron built from atoms. Bouquet and
/// connected-sum nodes are kept flattened and sorted, so structurally equal
/// values name PL-equal objects of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolyhedronTerm {
    Atom(Arc<AtomType>),
    Bouquet(Vec<PolyhedronTerm>),
    Product(Box<PolyhedronTerm>, Box<PolyhedronTerm>),
    ConnSum(Vec<PolyhedronTerm>),
}

impl PolyhedronTerm {
    pub fn atom(a: Arc<AtomType>) -> Self {
        PolyhedronTerm::Atom(a)
    }

    /// Bouquet of two or more pieces. Nested bouquets flatten; children are
    /// sorted into canonical order.
    pub fn bouquet(children: Vec<PolyhedronTerm>) -> Result<Self> {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                PolyhedronTerm::Bouquet(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(Error::rule(
                CombineRule::Bouquet,
                "a bouquet needs at least two pieces",
            ));
        }
        flat.sort();
        Ok(PolyhedronTerm::Bouquet(flat))
    }

    /// Product of two pieces, at least one of manifold type.
    pub fn product(a: PolyhedronTerm, b: PolyhedronTerm) -> Result<Self> {
        if a.bit() == 0 && b.bit() == 0 {
            return Err(Error::rule(
                CombineRule::Product,
                "both factors are polyhedron-typed (type bits (0, 0))",
            ));
        }
        Ok(PolyhedronTerm::Product(Box::new(a), Box::new(b)))
    }

    /// Connected sum of two or more closed, connected, orientable manifold
    /// terms of one common dimension. Nested sums flatten; summands sort.
    pub fn connected_sum(children: Vec<PolyhedronTerm>) -> Result<Self> {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                PolyhedronTerm::ConnSum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(Error::rule(
                CombineRule::ConnSum,
                "a connected sum needs at least two summands",
            ));
        }
        for c in &flat {
            if c.bit() != 1 {
                return Err(Error::rule(
                    CombineRule::ConnSum,
                    format!("summand {c} is polyhedron-typed (type bit 0)"),
                ));
            }
            if !c.is_orientable_manifold() {
                return Err(Error::rule(
                    CombineRule::ConnSum,
                    format!("summand {c} is not a closed orientable manifold"),
                ));
            }
        }
        let dim = flat[0].dim();
        if dim == 0 {
            return Err(Error::rule(
                CombineRule::ConnSum,
                "summands must have positive dimension",
            ));
        }
        if flat.iter().any(|c| c.dim() != dim) {
            return Err(Error::rule(
                CombineRule::ConnSum,
                "summands must share one dimension",
            ));
        }
        flat.sort();
        Ok(PolyhedronTerm::ConnSum(flat))
    }

    /// The manifold/polyhedron type bit: atoms carry their own, connected
    /// sums are manifolds, bouquets and products are polyhedra.
    pub fn bit(&self) -> u8 {
        match self {
            PolyhedronTerm::Atom(a) => a.is_manifold as u8,
            PolyhedronTerm::Bouquet(_) | PolyhedronTerm::Product(..) => 0,
            PolyhedronTerm::ConnSum(_) => 1,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PolyhedronTerm::Atom(a) => a.dim,
            PolyhedronTerm::Bouquet(cs) => cs.iter().map(Self::dim).max().unwrap_or(0),
            PolyhedronTerm::Product(a, b) => a.dim() + b.dim(),
            PolyhedronTerm::ConnSum(cs) => cs.first().map_or(0, Self::dim),
        }
    }

    /// Whether the term names a closed connected orientable manifold.
    pub fn is_orientable_manifold(&self) -> bool {
        match self {
            PolyhedronTerm::Atom(a) => a.is_manifold && a.orientable,
            PolyhedronTerm::ConnSum(cs) => cs.iter().all(Self::is_orientable_manifold),
            _ => false,
        }
    }

    /// The atom multiset, sorted by name.
    pub fn atoms(&self) -> Vec<Arc<AtomType>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Arc<AtomType>>) {
        match self {
            PolyhedronTerm::Atom(a) => out.push(a.clone()),
            PolyhedronTerm::Bouquet(cs) | PolyhedronTerm::ConnSum(cs) => {
                cs.iter().for_each(|c| c.collect_atoms(out))
            }
            PolyhedronTerm::Product(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            PolyhedronTerm::Atom(_) => 1,
            PolyhedronTerm::Bouquet(cs) | PolyhedronTerm::ConnSum(cs) => {
                cs.iter().map(Self::atom_count).sum()
            }
            PolyhedronTerm::Product(a, b) => a.atom_count() + b.atom_count(),
        }
    }

    /// Optional normalization pass, off by default everywhere else: drop
    /// standard-sphere summands from connected sums (a degenerate summand).
    pub fn simplify_sphere_summands(&self) -> PolyhedronTerm {
        match self {
            PolyhedronTerm::ConnSum(cs) => {
                let kept: Vec<PolyhedronTerm> = cs
                    .iter()
                    .map(Self::simplify_sphere_summands)
                    .filter(|c| !matches!(c, PolyhedronTerm::Atom(a) if a.standard_sphere))
                    .collect();
                match kept.len() {
                    0 => cs[0].clone(),
                    1 => kept.into_iter().next().unwrap(),
                    _ => PolyhedronTerm::ConnSum(kept),
                }
            }
            PolyhedronTerm::Bouquet(cs) => PolyhedronTerm::Bouquet(
                cs.iter().map(Self::simplify_sphere_summands).collect(),
            ),
            PolyhedronTerm::Product(a, b) => PolyhedronTerm::Product(
                Box::new(a.simplify_sphere_summands()),
                Box::new(b.simplify_sphere_summands()),
            ),
            atom => atom.clone(),
        }
    }

    /// Scan the whole tree and confirm the bit table holds at every node.
    pub fn bits_consistent(&self) -> bool {
        let here = match self {
            PolyhedronTerm::Atom(a) => self.bit() == a.is_manifold as u8,
            PolyhedronTerm::Bouquet(_) | PolyhedronTerm::Product(..) => self.bit() == 0,
            PolyhedronTerm::ConnSum(_) => self.bit() == 1,
        };
        let children = match self {
            PolyhedronTerm::Atom(_) => true,
            PolyhedronTerm::Bouquet(cs) | PolyhedronTerm::ConnSum(cs) => {
                cs.iter().all(Self::bits_consistent)
            }
            PolyhedronTerm::Product(a, b) => a.bits_consistent() && b.bits_consistent(),
        };
        here && children
    }
}

impl fmt::Display for PolyhedronTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyhedronTerm::Atom(a) => {
                let sphere_shorthand = a.name.strip_prefix('S').is_some_and(|rest| {
                    !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
                });
                if sphere_shorthand {
                    write!(f, "{}", a.name)
                } else {
                    write!(f, "@{}", a.name)
                }
            }
            PolyhedronTerm::Bouquet(cs) => {
                write!(f, "B(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            PolyhedronTerm::Product(a, b) => write!(f, "P({a},{b})"),
            PolyhedronTerm::ConnSum(cs) => {
                write!(f, "CS[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// How a combined piece sits inside the new space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmbeddingKind {
    BouquetSummand,
    ProductFactor,
}

/// One trace embedding: the canonical inclusion of an operand into the term
/// built from it; special when the operand was manifold-typed.
#[derive(Debug, Clone)]
pub struct TraceEmbedding {
    pub kind: EmbeddingKind,
    pub source: PolyhedronTerm,
    pub target: PolyhedronTerm,
    pub special: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CombineKind {
    Bouquet,
    Product,
    ConnSum,
}

#[derive(Debug, Clone, Copy)]
pub struct CombineRecord {
    pub k1: usize,
    pub k2: usize,
    pub kind: CombineKind,
}

/// A working sequence of terms, combined pairwise until one remains. The
/// starting entries are manifold atoms; each combination removes two entries
/// and appends the result.
#[derive(Debug, Clone)]
pub struct RootSequence {
    entries: Vec<PolyhedronTerm>,
    history: Vec<CombineRecord>,
    traces: Vec<TraceEmbedding>,
}

impl RootSequence {
    pub fn new(atoms: &[Arc<AtomType>]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::RootSequence("empty starting list".into()));
        }
        for a in atoms {
            if !a.is_manifold {
                return Err(Error::RootSequence(format!(
                    "starting entry {} is not a manifold type",
                    a.name
                )));
            }
        }
        Ok(RootSequence {
            entries: atoms
                .iter()
                .map(|a| PolyhedronTerm::atom(a.clone()))
                .collect(),
            history: Vec::new(),
            traces: Vec::new(),
        })
    }

    pub fn entries(&self) -> &[PolyhedronTerm] {
        &self.entries
    }

    pub fn history(&self) -> &[CombineRecord] {
        &self.history
    }

    pub fn traces(&self) -> &[TraceEmbedding] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The atom multiset across all entries; invariant under combination.
    pub fn root_atoms(&self) -> Vec<Arc<AtomType>> {
        let mut out = Vec::new();
        for e in &self.entries {
            out.extend(e.atoms());
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }

    /// Combine entries `k1 < k2` with the given kind. On any rule violation
    /// the sequence is left untouched.
    pub fn combine(&mut self, k1: usize, k2: usize, kind: CombineKind) -> Result<()> {
        let len = self.entries.len();
        if k1 >= len {
            return Err(Error::RootIndex { index: k1, len });
        }
        if k2 >= len {
            return Err(Error::RootIndex { index: k2, len });
        }
        if k1 >= k2 {
            return Err(Error::RootSequence(format!(
                "need k1 < k2, got ({k1}, {k2})"
            )));
        }
        let a = self.entries[k1].clone();
        let b = self.entries[k2].clone();
        let combined = match kind {
            CombineKind::Bouquet => PolyhedronTerm::bouquet(vec![a.clone(), b.clone()])?,
            CombineKind::Product => PolyhedronTerm::product(a.clone(), b.clone())?,
            CombineKind::ConnSum => {
                PolyhedronTerm::connected_sum(vec![a.clone(), b.clone()])?
            }
        };
        let trace_kind = match kind {
            CombineKind::Bouquet => Some(EmbeddingKind::BouquetSummand),
            CombineKind::Product => Some(EmbeddingKind::ProductFactor),
            CombineKind::ConnSum => None,
        };
        if let Some(tk) = trace_kind {
            for operand in [&a, &b] {
                self.traces.push(TraceEmbedding {
                    kind: tk,
                    source: operand.clone(),
                    target: combined.clone(),
                    special: operand.bit() == 1,
                });
            }
        }
        // remove the two entries and append the result
        self.entries.remove(k2);
        self.entries.remove(k1);
        self.entries.push(combined);
        self.history.push(CombineRecord { k1, k2, kind });
        Ok(())
    }

    /// Finish: exactly one entry must remain.
    pub fn finish(self) -> Result<(PolyhedronTerm, Vec<TraceEmbedding>)> {
        if self.entries.len() != 1 {
            return Err(Error::RootSequence(format!(
                "{} entries remain; combine down to one first",
                self.entries.len()
            )));
        }
        let mut entries = self.entries;
        Ok((entries.pop().unwrap(), self.traces))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImmersionMode {
    Immersed,
    Embedded,
}

impl fmt::Display for ImmersionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImmersionMode::Immersed => write!(f, "SIE"),
            ImmersionMode::Embedded => write!(f, "SEE"),
        }
    }
}

/// Classification of an immersed/embedded manifold collapsing to a term,
/// possibly with holes removed.
#[derive(Debug, Clone)]
pub struct SieClassification {
    pub mode: ImmersionMode,
    /// True when holes are present.
    pub essential: bool,
    /// True when, additionally, every hole is a bouquet of spheres or a
    /// point.
    pub very_essential: bool,
    pub host: PolyhedronTerm,
    pub holes: Vec<PolyhedronTerm>,
}

impl fmt::Display for SieClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.very_essential {
            "very essentially "
        } else if self.essential {
            "essentially "
        } else {
            ""
        };
        write!(f, "{prefix}{}", self.mode)
    }
}

/// Whether the term is a bouquet of homotopy spheres (or a single one, or a
/// point).
pub fn is_sphere_bouquet(t: &PolyhedronTerm) -> bool {
    match t {
        PolyhedronTerm::Atom(a) => a.homotopy_sphere,
        PolyhedronTerm::Bouquet(cs) => cs
            .iter()
            .all(|c| matches!(c, PolyhedronTerm::Atom(a) if a.homotopy_sphere)),
        _ => false,
    }
}

/// Label the configuration: SIE/SEE, essential when holes are present, very
/// essential when every hole is a bouquet of spheres or a point. When a
/// generating atom set is supplied, the host and every hole must draw their
/// atoms from it.
pub fn classify_sie_see(
    host: &PolyhedronTerm,
    mode: ImmersionMode,
    holes: &[PolyhedronTerm],
    generating_set: Option<&[Arc<AtomType>]>,
) -> Result<SieClassification> {
    if let Some(set) = generating_set {
        let allowed: Vec<&str> = set.iter().map(|a| a.name.as_str()).collect();
        for (what, term) in std::iter::once(("host", host))
            .chain(holes.iter().map(|h| ("hole", h)))
        {
            for a in term.atoms() {
                if !allowed.contains(&a.name.as_str()) {
                    return Err(Error::HoleSpec(format!(
                        "{what} {term} uses atom {} outside the generating set",
                        a.name
                    )));
                }
            }
        }
    }
    let essential = !holes.is_empty();
    let very_essential = essential && holes.iter().all(is_sphere_bouquet);
    Ok(SieClassification {
        mode,
        essential,
        very_essential,
        host: host.clone(),
        holes: holes.to_vec(),
    })
}

/// Verdict of the bouquet normal-form test for images of (k-1)-connected
/// manifolds.
#[derive(Debug, Clone)]
pub enum ShapeVerdict {
    /// The term is an iterated bouquet of admissible pieces.
    Satisfies,
    /// A subterm breaks the normal form.
    Violates {
        witness: PolyhedronTerm,
        reason: String,
    },
    /// The hypothesis n <= 3k does not hold, so no shape is forced.
    Unconstrained,
}

#[derive(Debug, Clone)]
pub struct NormalFormReport {
    pub shape: ShapeVerdict,
    /// Atoms failing the (k-1)-connectivity requirement on roots.
    pub connectivity_failures: Vec<String>,
}

impl NormalFormReport {
    pub fn accepted(&self) -> bool {
        self.connectivity_failures.is_empty()
            && !matches!(self.shape, ShapeVerdict::Violates { .. })
    }
}

/// One admissible piece: a product of a homotopy sphere with a bouquet of
/// homotopy spheres, or a connected sum of root atoms (a single atom
/// counts as either degenerate case).
fn piece_violation(t: &PolyhedronTerm) -> Option<(PolyhedronTerm, String)> {
    match t {
        PolyhedronTerm::Atom(a) => {
            if a.is_manifold {
                None
            } else {
                Some((t.clone(), format!("atom {} is not a manifold type", a.name)))
            }
        }
        PolyhedronTerm::ConnSum(cs) => cs
            .iter()
            .find(|c| !matches!(c, PolyhedronTerm::Atom(_)))
            .map(|c| {
                (
                    c.clone(),
                    "connected-sum summand is not a root atom".to_string(),
                )
            }),
        PolyhedronTerm::Product(a, b) => {
            let sphere_atom =
                |t: &PolyhedronTerm| matches!(t, PolyhedronTerm::Atom(x) if x.homotopy_sphere);
            if (sphere_atom(a) && is_sphere_bouquet(b))
                || (sphere_atom(b) && is_sphere_bouquet(a))
            {
                None
            } else {
                let witness = if sphere_atom(a) || is_sphere_bouquet(a) {
                    (**b).clone()
                } else {
                    (**a).clone()
                };
                Some((
                    witness,
                    "product factor is not a homotopy sphere (or sphere bouquet)".to_string(),
                ))
            }
        }
        PolyhedronTerm::Bouquet(_) => Some((
            t.clone(),
            "nested bouquet where a product or connected sum piece is required".to_string(),
        )),
    }
}

/// Normal-form classifier for the image polyhedron of a (k-1)-connected
/// compact manifold in codimension zero: when n <= 3k the term must be an
/// iterated bouquet of admissible pieces; root atoms must always be
/// (k-1)-connected.
pub fn classify_normal_form(
    term: &PolyhedronTerm,
    n: usize,
    k: usize,
) -> Result<NormalFormReport> {
    if k < 2 || n < k {
        return Err(Error::Invalid(format!(
            "need n >= k >= 2, got (n, k) = ({n}, {k})"
        )));
    }
    let connectivity_failures: Vec<String> = term
        .atoms()
        .iter()
        .filter(|a| !a.connected_at_least(k - 1))
        .map(|a| a.name.clone())
        .collect();
    let shape = if n > 3 * k {
        ShapeVerdict::Unconstrained
    } else {
        let violation = match term {
            PolyhedronTerm::Bouquet(cs) => cs.iter().find_map(piece_violation),
            other => piece_violation(other),
        };
        match violation {
            None => ShapeVerdict::Satisfies,
            Some((witness, reason)) => ShapeVerdict::Violates { witness, reason },
        }
    };
    Ok(NormalFormReport {
        shape,
        connectivity_failures,
    })
}

/// Root whitelist for the two explicitly classified target dimensions.
#[derive(Debug, Clone)]
pub struct WhitelistVerdict {
    pub accepted: bool,
    /// (atom name, reason) for each rejected atom.
    pub failures: Vec<(String, String)>,
}

fn is_s2xs2_connected_sum(a: &AtomType) -> bool {
    let h2 = a.homology.degree(2);
    a.dim == 4
        && a.is_manifold
        && a.simply_connected
        && a.orientable
        && a.spin == Some(true)
        && a.signature == Some(0)
        && a.homology.degree(1).is_trivial()
        && a.homology.degree(3).is_trivial()
        && h2.is_free()
        && h2.free_rank() >= 2
        && h2.free_rank() % 2 == 0
}

fn is_dim5_spin(a: &AtomType) -> bool {
    a.dim == 5 && a.is_manifold && a.simply_connected && a.orientable && a.spin == Some(true)
}

fn is_dim4_signature_zero(a: &AtomType) -> bool {
    a.dim == 4
        && a.is_manifold
        && a.simply_connected
        && a.orientable
        && a.signature == Some(0)
}

/// Validate every non-homotopy-sphere root atom against the whitelist for
/// (n, k) in {(5, 2), (6, 2)}:
/// - (5, 2), both modes: connected sums of copies of S2xS2;
/// - (6, 2), embedded: those, or 5-dimensional simply connected spin;
/// - (6, 2), immersed: 4-dimensional simply connected with signature 0, or
///   5-dimensional simply connected spin.
pub fn validate_root_whitelist(
    atoms: &[Arc<AtomType>],
    n: usize,
    k: usize,
    mode: ImmersionMode,
) -> Result<WhitelistVerdict> {
    if !matches!((n, k), (5, 2) | (6, 2)) {
        return Err(Error::UnsupportedWhitelist { n, k });
    }
    let mut failures = Vec::new();
    for a in atoms {
        if a.homotopy_sphere {
            continue;
        }
        let ok = match (n, mode) {
            (5, _) => is_s2xs2_connected_sum(a),
            (6, ImmersionMode::Embedded) => is_s2xs2_connected_sum(a) || is_dim5_spin(a),
            (6, ImmersionMode::Immersed) => {
                is_dim4_signature_zero(a) || is_dim5_spin(a)
            }
            _ => unreachable!(),
        };
        if !ok {
            let reason = match (n, mode) {
                (5, _) => "not a connected sum of copies of S2xS2",
                (6, ImmersionMode::Embedded) => {
                    "neither a connected sum of copies of S2xS2 nor 5-dimensional \
                     simply connected spin"
                }
                _ => {
                    "neither 4-dimensional simply connected with signature 0 nor \
                     5-dimensional simply connected spin"
                }
            };
            failures.push((a.name.clone(), reason.to_string()));
        }
    }
    Ok(WhitelistVerdict {
        accepted: failures.is_empty(),
        failures,
    })
}

/// Parse the term grammar: `S<d>` (sphere), `@name` (table lookup),
/// `B(t,...)` (bouquet), `P(t,t)` (product), `CS[t,...]` (connected sum).
/// Whitespace is ignored everywhere.
pub fn parse_term(text: &str, table: &AtomTable) -> Result<PolyhedronTerm> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        table,
    };
    p.skip_ws();
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse {
            pos: p.pos,
            msg: "trailing input after term".into(),
        });
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a AtomTable,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos,
                msg: format!("expected '{}'", c as char),
            })
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                pos: start,
                msg: "expected an identifier".into(),
            });
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn list(&mut self, open: u8, close: u8, min: usize) -> Result<Vec<PolyhedronTerm>> {
        self.expect(open)?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            items.push(self.term()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(c) if c == close => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    return Err(Error::Parse {
                        pos: self.pos,
                        msg: format!("expected ',' or '{}'", close as char),
                    })
                }
            }
        }
        if items.len() < min {
            return Err(Error::Parse {
                pos: self.pos,
                msg: format!("need at least {min} items"),
            });
        }
        Ok(items)
    }

    fn term(&mut self) -> Result<PolyhedronTerm> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'@') => {
                self.pos += 1;
                let name = self.ident()?;
                let atom = self.table.get(&name).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("unknown atom @{name}"),
                })?;
                Ok(PolyhedronTerm::atom(atom))
            }
            Some(b'B') => {
                self.pos += 1;
                let items = self.list(b'(', b')', 2)?;
                PolyhedronTerm::bouquet(items)
            }
            Some(b'P') => {
                self.pos += 1;
                let items = self.list(b'(', b')', 2)?;
                if items.len() != 2 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "a product takes exactly two factors".into(),
                    });
                }
                let mut it = items.into_iter();
                PolyhedronTerm::product(it.next().unwrap(), it.next().unwrap())
            }
            Some(b'C') => {
                self.pos += 1;
                if self.peek() != Some(b'S') {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "expected 'CS'".into(),
                    });
                }
                self.pos += 1;
                let items = self.list(b'[', b']', 2)?;
                PolyhedronTerm::connected_sum(items)
            }
            Some(b'S') => {
                let name = self.ident()?;
                // S<digits> is sphere shorthand; S-prefixed table names work too
                if let Some(atom) = self.table.get(&name) {
                    return Ok(PolyhedronTerm::atom(atom));
                }
                if let Some(digits) = name.strip_prefix('S') {
                    if let Ok(d) = digits.parse::<usize>() {
                        if d > DEFAULT_DEGREE_CAP {
                            return Err(Error::DegreeCapExceeded {
                                degree: d,
                                cap: DEFAULT_DEGREE_CAP,
                            });
                        }
                        return Ok(PolyhedronTerm::atom(AtomType::sphere(d)));
                    }
                }
                Err(Error::Parse {
                    pos: start,
                    msg: format!("unknown atom {name}"),
                })
            }
            _ => Err(Error::Parse {
                pos: self.pos,
                msg: "expected a term (S<d>, @name, B(...), P(...), CS[...])".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: usize) -> PolyhedronTerm {
        PolyhedronTerm::atom(AtomType::sphere(d))
    }

    fn table() -> AtomTable {
        builtin_atoms()
    }

    #[test]
    fn builtin_atoms_validate() {
        let t = table();
        for name in t.names() {
            t.get(name).unwrap().validate().unwrap();
        }
        assert_eq!(t.get("pt").unwrap().name, "S0");
    }

    #[test]
    fn bit_table() {
        let t = table();
        let s2xs2 = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        assert_eq!(s(2).bit(), 1);
        assert_eq!(PolyhedronTerm::bouquet(vec![s(2), s(3)]).unwrap().bit(), 0);
        assert_eq!(PolyhedronTerm::product(s(2), s(3)).unwrap().bit(), 0);
        assert_eq!(
            PolyhedronTerm::connected_sum(vec![s2xs2.clone(), s2xs2]).unwrap().bit(),
            1
        );
    }

    #[test]
    fn product_of_two_polyhedra_rejected() {
        let b1 = PolyhedronTerm::bouquet(vec![s(2), s(2)]).unwrap();
        let b2 = PolyhedronTerm::bouquet(vec![s(3), s(3)]).unwrap();
        let err = PolyhedronTerm::product(b1, b2).unwrap_err();
        assert!(matches!(
            err,
            Error::RuleViolation { rule: CombineRule::Product, .. }
        ));
    }

    #[test]
    fn connsum_constraints() {
        // polyhedron summand
        let b = PolyhedronTerm::bouquet(vec![s(2), s(2)]).unwrap();
        assert!(matches!(
            PolyhedronTerm::connected_sum(vec![b, s(4)]),
            Err(Error::RuleViolation { rule: CombineRule::ConnSum, .. })
        ));
        // dimension mismatch
        assert!(PolyhedronTerm::connected_sum(vec![s(2), s(3)]).is_err());
        // flattening and sorting
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let inner = PolyhedronTerm::connected_sum(vec![a.clone(), s(4)]).unwrap();
        let outer = PolyhedronTerm::connected_sum(vec![inner, a.clone()]).unwrap();
        match &outer {
            PolyhedronTerm::ConnSum(cs) => assert_eq!(cs.len(), 3),
            _ => panic!("expected a connected sum"),
        }
    }

    #[test]
    fn bouquet_flattens_and_sorts() {
        let ab = PolyhedronTerm::bouquet(vec![s(3), s(2)]).unwrap();
        let cd = PolyhedronTerm::bouquet(vec![s(5), s(4)]).unwrap();
        let joined = PolyhedronTerm::bouquet(vec![ab.clone(), cd.clone()]).unwrap();
        let direct = PolyhedronTerm::bouquet(vec![s(4), s(2), s(5), s(3)]).unwrap();
        assert_eq!(joined, direct);
    }

    #[test]
    fn root_sequence_bouquet_traces() {
        let mut r = RootSequence::new(&[AtomType::sphere(2), AtomType::sphere(3)]).unwrap();
        r.combine(0, 1, CombineKind::Bouquet).unwrap();
        assert_eq!(r.len(), 1);
        let (term, traces) = r.finish().unwrap();
        assert_eq!(term.bit(), 0);
        assert_eq!(traces.len(), 2);
        assert!(traces.iter().all(|t| t.special));
        assert!(traces
            .iter()
            .all(|t| t.kind == EmbeddingKind::BouquetSummand));
    }

    #[test]
    fn root_sequence_connsum_no_traces() {
        let mut r = RootSequence::new(&[AtomType::sphere(2), AtomType::sphere(2)]).unwrap();
        r.combine(0, 1, CombineKind::ConnSum).unwrap();
        let (term, traces) = r.finish().unwrap();
        assert_eq!(term.bit(), 1);
        assert!(traces.is_empty());
    }

    #[test]
    fn root_sequence_product_rule_violation_names_clause() {
        let atoms = vec![
            AtomType::sphere(2),
            AtomType::sphere(2),
            AtomType::sphere(3),
            AtomType::sphere(3),
        ];
        let mut r = RootSequence::new(&atoms).unwrap();
        r.combine(0, 1, CombineKind::Bouquet).unwrap();
        r.combine(0, 1, CombineKind::Bouquet).unwrap();
        // two bit-0 entries remain; the product rule must reject them
        let err = r.combine(0, 1, CombineKind::Product).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("product rule"), "got: {msg}");
        // the failed call must not mutate the sequence
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn root_sequence_errors() {
        assert!(RootSequence::new(&[]).is_err());
        let mut r = RootSequence::new(&[AtomType::sphere(2), AtomType::sphere(3)]).unwrap();
        assert!(matches!(
            r.combine(0, 5, CombineKind::Bouquet),
            Err(Error::RootIndex { index: 5, .. })
        ));
        assert!(r.combine(1, 1, CombineKind::Bouquet).is_err());
        assert!(r.clone().finish().is_err());
        let single = RootSequence::new(&[AtomType::sphere(3)]).unwrap();
        let (term, traces) = single.finish().unwrap();
        assert_eq!(term, s(3));
        assert!(traces.is_empty());
    }

    #[test]
    fn root_multiset_invariant_under_history() {
        let atoms = vec![
            AtomType::sphere(2),
            AtomType::sphere(2),
            AtomType::sphere(3),
        ];
        let mut r = RootSequence::new(&atoms).unwrap();
        let before: Vec<String> = r.root_atoms().iter().map(|a| a.name.clone()).collect();
        r.combine(0, 2, CombineKind::Bouquet).unwrap();
        let mid: Vec<String> = r.root_atoms().iter().map(|a| a.name.clone()).collect();
        r.combine(0, 1, CombineKind::Bouquet).unwrap();
        let after: Vec<String> = r.root_atoms().iter().map(|a| a.name.clone()).collect();
        assert_eq!(before, mid);
        assert_eq!(before, after);
    }

    #[test]
    fn trace_count_is_twice_the_bouquet_product_steps() {
        let atoms = vec![
            AtomType::sphere(2),
            AtomType::sphere(2),
            AtomType::sphere(3),
            AtomType::sphere(3),
        ];
        let mut r = RootSequence::new(&atoms).unwrap();
        r.combine(0, 1, CombineKind::ConnSum).unwrap(); // no traces
        r.combine(0, 1, CombineKind::Bouquet).unwrap(); // +2
        r.combine(0, 1, CombineKind::Product).unwrap(); // +2
        assert_eq!(r.traces().len(), 4);
    }

    #[test]
    fn classify_sie_see_examples() {
        let pt = s(0);
        // no holes: plain SEE, not essential
        let c = classify_sie_see(&pt, ImmersionMode::Embedded, &[], None).unwrap();
        assert!(!c.essential && !c.very_essential);
        assert_eq!(c.to_string(), "SEE");
        // three 3-sphere holes: very essential
        let holes = vec![s(3), s(3), s(3)];
        let c = classify_sie_see(&pt, ImmersionMode::Embedded, &holes, None).unwrap();
        assert!(c.essential && c.very_essential);
        assert_eq!(c.to_string(), "very essentially SEE");
        // a product hole is not a bouquet of spheres
        let t = table();
        let hole = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let c = classify_sie_see(&pt, ImmersionMode::Embedded, &[hole], None).unwrap();
        assert!(c.essential && !c.very_essential);
        // generating-set mismatch is an error
        let err = classify_sie_see(
            &pt,
            ImmersionMode::Embedded,
            &[s(3)],
            Some(&[AtomType::sphere(0)]),
        );
        assert!(err.is_err());
    }

    #[test]
    fn normal_form_accepts_documented_positive() {
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let cs = PolyhedronTerm::connected_sum(vec![a.clone(), a]).unwrap();
        let term = PolyhedronTerm::bouquet(vec![s(2), cs]).unwrap();
        let report = classify_normal_form(&term, 6, 2).unwrap();
        assert!(report.accepted(), "{report:?}");
    }

    #[test]
    fn normal_form_rejects_documented_negative() {
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let term = PolyhedronTerm::product(a.clone(), s(2)).unwrap();
        let report = classify_normal_form(&term, 6, 2).unwrap();
        match report.shape {
            ShapeVerdict::Violates { witness, .. } => assert_eq!(witness, a),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn normal_form_unconstrained_when_n_large() {
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let term = PolyhedronTerm::product(a.clone(), s(2)).unwrap();
        // n = 7 > 3k = 6: no shape constraint
        let report = classify_normal_form(&term, 7, 2).unwrap();
        assert!(matches!(report.shape, ShapeVerdict::Unconstrained));
        assert!(report.accepted());
    }

    #[test]
    fn normal_form_invariant_under_bouquet_reassociation() {
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let p1 = PolyhedronTerm::product(s(2), s(2)).unwrap();
        let left = PolyhedronTerm::bouquet(vec![
            PolyhedronTerm::bouquet(vec![s(2), p1.clone()]).unwrap(),
            a.clone(),
        ])
        .unwrap();
        let right = PolyhedronTerm::bouquet(vec![
            s(2),
            PolyhedronTerm::bouquet(vec![p1, a]).unwrap(),
        ])
        .unwrap();
        assert_eq!(left, right);
        let rl = classify_normal_form(&left, 6, 2).unwrap();
        let rr = classify_normal_form(&right, 6, 2).unwrap();
        assert_eq!(rl.accepted(), rr.accepted());
    }

    #[test]
    fn normal_form_flags_low_connectivity_roots() {
        // S1 is not simply connected, so it fails (k-1)-connectivity at k=2
        let term = PolyhedronTerm::bouquet(vec![s(1), s(2)]).unwrap();
        let report = classify_normal_form(&term, 6, 2).unwrap();
        assert_eq!(report.connectivity_failures, vec!["S1".to_string()]);
        assert!(!report.accepted());
    }

    #[test]
    fn whitelist_verdicts() {
        let t = table();
        let s2xs2_2 = vec![t.get("S2xS2_2").unwrap()];
        assert!(validate_root_whitelist(&s2xs2_2, 5, 2, ImmersionMode::Immersed)
            .unwrap()
            .accepted);
        // 4-manifold with signature 0 that is not spin: accepted immersed
        // into R^6, rejected embedded and in R^5
        let sig0 = vec![t.get("CP2_CP2bar").unwrap()];
        assert!(validate_root_whitelist(&sig0, 6, 2, ImmersionMode::Immersed)
            .unwrap()
            .accepted);
        assert!(!validate_root_whitelist(&sig0, 6, 2, ImmersionMode::Embedded)
            .unwrap()
            .accepted);
        assert!(!validate_root_whitelist(&sig0, 5, 2, ImmersionMode::Immersed)
            .unwrap()
            .accepted);
        // non-spin 5-manifold rejected for SEE at (6, 2)
        let wu = vec![t.get("Wu5").unwrap()];
        assert!(!validate_root_whitelist(&wu, 6, 2, ImmersionMode::Embedded)
            .unwrap()
            .accepted);
        // spin 5-manifold accepted for SEE at (6, 2)
        let s2xs3 = vec![t.get("S2xS3").unwrap()];
        assert!(validate_root_whitelist(&s2xs3, 6, 2, ImmersionMode::Embedded)
            .unwrap()
            .accepted);
        // homotopy spheres always pass
        let hs = vec![AtomType::sphere(4)];
        assert!(validate_root_whitelist(&hs, 5, 2, ImmersionMode::Embedded)
            .unwrap()
            .accepted);
        // unsupported (n, k)
        assert!(matches!(
            validate_root_whitelist(&hs, 7, 2, ImmersionMode::Embedded),
            Err(Error::UnsupportedWhitelist { n: 7, k: 2 })
        ));
    }

    #[test]
    fn parse_basic_terms() {
        let t = table();
        assert_eq!(parse_term("B(S2,S3)", &t).unwrap().to_string(), "B(S2,S3)");
        assert_eq!(
            parse_term("CS[@S2xS2,@S2xS2]", &t).unwrap().to_string(),
            "CS[@S2xS2,@S2xS2]"
        );
        assert_eq!(
            parse_term(" P( B(S2, S3), S4 ) ", &t).unwrap().to_string(),
            "P(B(S2,S3),S4)"
        );
    }

    #[test]
    fn parse_rejects_bad_products() {
        let t = table();
        let err = parse_term("P(B(S2,S2),B(S3,S3))", &t).unwrap_err();
        assert!(err.to_string().contains("product rule"), "{err}");
    }

    #[test]
    fn parse_degree_cap() {
        let t = table();
        assert!(matches!(
            parse_term("S9999", &t),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn parse_syntax_errors_carry_positions() {
        let t = table();
        match parse_term("B(S2", &t).unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other}"),
        }
        assert!(parse_term("@nosuch", &t).is_err());
        assert!(parse_term("B(S2,S3) junk", &t).is_err());
    }

    #[test]
    fn print_parse_round_trip_is_stable() {
        let t = table();
        for text in [
            "B(S2,S3)",
            "CS[@S2xS2,S4,S4]",
            "P(S2,B(S3,S3))",
            "B(P(S2,S2),CS[S4,@S2xS2],S5)",
        ] {
            let once = parse_term(text, &t).unwrap();
            let printed = once.to_string();
            let twice = parse_term(&printed, &t).unwrap();
            assert_eq!(once, twice);
            assert_eq!(printed, twice.to_string());
        }
    }

    #[test]
    fn bits_consistent_scan() {
        let t = table();
        let term = parse_term("B(P(S2,S2),CS[S4,@S2xS2],S5)", &t).unwrap();
        assert!(term.bits_consistent());
    }

    #[test]
    fn simplify_sphere_summands_pass() {
        let t = table();
        let a = PolyhedronTerm::atom(t.get("S2xS2").unwrap());
        let cs = PolyhedronTerm::connected_sum(vec![a.clone(), s(4)]).unwrap();
        // off by default: the sum keeps its sphere summand
        match &cs {
            PolyhedronTerm::ConnSum(children) => assert_eq!(children.len(), 2),
            _ => unreachable!(),
        }
        assert_eq!(cs.simplify_sphere_summands(), a);
    }

    #[test]
    fn atom_table_json_round_trip() {
        let t = table();
        let atom = t.get("Wu5").unwrap();
        let text = serde_json::to_string(&[atom.as_ref()]).unwrap();
        let mut fresh = AtomTable::default();
        fresh.load_json(&text).unwrap();
        assert_eq!(fresh.get("Wu5").unwrap(), atom);
    }

    #[test]
    fn atom_validation_rejects_bad_metadata() {
        let mut bad = (*AtomType::sphere(3)).clone();
        bad.connectivity = 3; // claims reduced homology vanishes through degree 3
        assert!(bad.validate().is_err());

        let mut bad2 = (*AtomType::sphere(4)).clone();
        bad2.homology = GradedModule::sphere(Coefficients::Integers, 3).unwrap();
        assert!(bad2.validate().is_err());

        let mut bad3 = (*AtomType::sphere(3)).clone();
        bad3.signature = Some(0); // dim not divisible by 4
        assert!(bad3.validate().is_err());
    }
}
