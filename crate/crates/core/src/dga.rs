//! Finite differential graded algebras over the integers, their cohomology,
//! and triple Massey products with indeterminacy — including the Borromean
//! fixture whose triple product does not vanish.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Coefficients, GradedModule};
use crate::matrix::{Mat, Quotient};
use crate::Int;

/// Integer combination of basis elements, sparse and sorted by index.
pub type Combination = Vec<(Int, usize)>;

fn comb_normalize(mut c: Combination) -> Combination {
    c.sort_by_key(|&(_, i)| i);
    let mut out: Combination = Vec::with_capacity(c.len());
    for (v, i) in c {
        match out.last_mut() {
            Some((acc, j)) if *j == i => *acc += v,
            _ => out.push((v, i)),
        }
    }
    out.retain(|(v, _)| !v.is_zero());
    out
}

fn comb_add(a: &Combination, b: &Combination) -> Combination {
    let mut c = a.clone();
    c.extend_from_slice(b);
    comb_normalize(c)
}

fn comb_scale(a: &Combination, s: &Int) -> Combination {
    comb_normalize(a.iter().map(|(v, i)| (v.clone() * s.clone(), *i)).collect())
}

/// A finite-dimensional differential graded algebra: named basis elements
/// with degrees, a degree +1 differential, and integer structure constants.
#[derive(Debug, Clone)]
pub struct FiniteDGA {
    coefficients: Coefficients,
    names: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    /// Basis indices per degree, in listing order.
    by_degree: BTreeMap<usize, Vec<usize>>,
    /// Sparse differential on basis elements.
    differential: BTreeMap<usize, Combination>,
    /// Sparse structure constants on basis pairs (unit pairs implicit).
    products: BTreeMap<(usize, usize), Combination>,
    /// Permit non-commutative inputs (off by default).
    pub allow_noncommutative: bool,
}

impl FiniteDGA {
    pub fn new(basis: Vec<(String, usize)>, unit_name: &str) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Dga("empty basis".into()));
        }
        let names: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
        {
            let mut sorted = names.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != names.len() {
                return Err(Error::Dga("duplicate basis names".into()));
            }
        }
        let degrees: Vec<usize> = basis.iter().map(|&(_, d)| d).collect();
        let unit = names
            .iter()
            .position(|n| n == unit_name)
            .ok_or_else(|| Error::Dga(format!("unit {unit_name} not in basis")))?;
        if degrees[unit] != 0 {
            return Err(Error::Dga("unit must have degree 0".into()));
        }
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            by_degree.entry(d).or_default().push(i);
        }
        Ok(FiniteDGA {
            coefficients: Coefficients::Integers,
            names,
            degrees,
            unit,
            by_degree,
            differential: BTreeMap::new(),
            products: BTreeMap::new(),
            allow_noncommutative: false,
        })
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Dga(format!("unknown basis element {name}")))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn basis_of_degree(&self, d: usize) -> &[usize] {
        self.by_degree.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn top_degree(&self) -> usize {
        *self.by_degree.keys().next_back().unwrap()
    }

    pub fn set_differential(&mut self, from: &str, to: Combination) -> Result<()> {
        let i = self.index_of(from)?;
        let d = self.degrees[i];
        for (_, j) in &to {
            if self.degrees[*j] != d + 1 {
                return Err(Error::Dga(format!(
                    "differential of {from} must raise degree by one"
                )));
            }
        }
        let to = comb_normalize(to);
        if to.is_empty() {
            self.differential.remove(&i);
        } else {
            self.differential.insert(i, to);
        }
        Ok(())
    }

    pub fn set_product(&mut self, lhs: &str, rhs: &str, value: Combination) -> Result<()> {
        let i = self.index_of(lhs)?;
        let j = self.index_of(rhs)?;
        if i == self.unit || j == self.unit {
            return Err(Error::Dga("unit products are implicit".into()));
        }
        let d = self.degrees[i] + self.degrees[j];
        for (_, k) in &value {
            if self.degrees[*k] != d {
                return Err(Error::Dga(format!(
                    "product {lhs}·{rhs} must land in degree {d}"
                )));
            }
        }
        let value = comb_normalize(value);
        if value.is_empty() {
            self.products.remove(&(i, j));
        } else {
            self.products.insert((i, j), value);
        }
        Ok(())
    }

    /// Differential of a combination.
    pub fn d(&self, c: &Combination) -> Combination {
        let mut out = Combination::new();
        for (v, i) in c {
            if let Some(di) = self.differential.get(i) {
                out = comb_add(&out, &comb_scale(di, v));
            }
        }
        out
    }

    fn basis_product(&self, i: usize, j: usize) -> Combination {
        if i == self.unit {
            return vec![(Int::one(), j)];
        }
        if j == self.unit {
            return vec![(Int::one(), i)];
        }
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Product of combinations, extended bilinearly.
    pub fn mul(&self, a: &Combination, b: &Combination) -> Combination {
        let mut out = Combination::new();
        for (va, ia) in a {
            for (vb, ib) in b {
                let term = comb_scale(&self.basis_product(*ia, *ib), &(va.clone() * vb.clone()));
                out = comb_add(&out, &term);
            }
        }
        out
    }

    pub fn combination_string(&self, c: &Combination) -> String {
        if c.is_empty() {
            return "0".into();
        }
        c.iter()
            .map(|(v, i)| {
                if v.is_one() {
                    self.names[*i].clone()
                } else if (-v.clone()).is_one() {
                    format!("-{}", self.names[*i])
                } else {
                    format!("{v}·{}", self.names[*i])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Degree of a nonzero homogeneous combination.
    fn homogeneous_degree(&self, c: &Combination, what: &str) -> Result<usize> {
        let mut degs = c.iter().map(|(_, i)| self.degrees[*i]);
        let Some(first) = degs.next() else {
            return Err(Error::Dga(format!("{what} is zero; need a homogeneous class")));
        };
        if degs.all(|d| d == first) {
            Ok(first)
        } else {
            Err(Error::Dga(format!("{what} is not homogeneous")))
        }
    }

    /// Coordinates of a combination in its degree's basis; the combination
    /// must be homogeneous of degree `d` (or zero).
    fn coords_in_degree(&self, c: &Combination, d: usize) -> Result<Vec<Int>> {
        let basis = self.basis_of_degree(d);
        let mut out = vec![Int::zero(); basis.len()];
        for (v, i) in c {
            let pos = basis
                .iter()
                .position(|b| b == i)
                .ok_or_else(|| Error::Dga("combination leaves its degree".into()))?;
            out[pos] = v.clone();
        }
        Ok(out)
    }

    fn comb_from_coords(&self, coords: &[Int], d: usize) -> Combination {
        comb_normalize(
            self.basis_of_degree(d)
                .iter()
                .zip(coords)
                .map(|(&i, v)| (v.clone(), i))
                .collect(),
        )
    }

    /// Matrix of the differential from degree d to degree d+1.
    pub fn differential_matrix(&self, d: usize) -> Mat<Int> {
        let dom = self.basis_of_degree(d);
        let cod = self.basis_of_degree(d + 1);
        Mat::from_fn(cod.len(), dom.len(), |r, c| {
            self.differential
                .get(&dom[c])
                .and_then(|comb| {
                    comb.iter()
                        .find(|(_, i)| *i == cod[r])
                        .map(|(v, _)| v.clone())
                })
                .unwrap_or_else(Int::zero)
        })
    }

    /// Check every structural identity; reports the first violation.
    pub fn validate(&self) -> Result<()> {
        // d ∘ d = 0
        for (i, di) in &self.differential {
            let dd = self.d(di);
            if !dd.is_empty() {
                return Err(Error::Dga(format!(
                    "d∘d({}) = {} is nonzero",
                    self.names[*i],
                    self.combination_string(&dd)
                )));
            }
        }
        let n = self.names.len();
        for i in 0..n {
            for j in 0..n {
                if i == self.unit || j == self.unit {
                    continue;
                }
                let xi = vec![(Int::one(), i)];
                let xj = vec![(Int::one(), j)];
                // Leibniz: d(xy) = dx·y + (-1)^{|x|} x·dy
                let lhs = self.d(&self.basis_product(i, j));
                let sign = if self.degrees[i] % 2 == 0 {
                    Int::one()
                } else {
                    -Int::one()
                };
                let rhs = comb_add(
                    &self.mul(&self.d(&xi), &xj),
                    &comb_scale(&self.mul(&xi, &self.d(&xj)), &sign),
                );
                if lhs != rhs {
                    return Err(Error::Dga(format!(
                        "Leibniz fails on ({}, {}): d(xy) = {} but dx·y ± x·dy = {}",
                        self.names[i],
                        self.names[j],
                        self.combination_string(&lhs),
                        self.combination_string(&rhs)
                    )));
                }
                // graded commutativity
                if !self.allow_noncommutative {
                    let sign = if (self.degrees[i] * self.degrees[j]) % 2 == 0 {
                        Int::one()
                    } else {
                        -Int::one()
                    };
                    let ab = self.basis_product(i, j);
                    let ba = comb_scale(&self.basis_product(j, i), &sign);
                    if ab != ba {
                        return Err(Error::Dga(format!(
                            "graded commutativity fails on ({}, {})",
                            self.names[i], self.names[j]
                        )));
                    }
                }
                // associativity over basis triples is checked against k below
                for k in 0..n {
                    if k == self.unit {
                        continue;
                    }
                    let left = self.mul(&self.basis_product(i, j), &vec![(Int::one(), k)]);
                    let right = self.mul(&xi, &self.basis_product(j, k));
                    if left != right {
                        return Err(Error::Dga(format!(
                            "associativity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn quotient_at(&self, d: usize) -> Result<Quotient<Int>> {
        let d_out = self.differential_matrix(d);
        let d_in = if d == 0 {
            Mat::zeros(self.basis_of_degree(0).len(), 0)
        } else {
            self.differential_matrix(d - 1)
        };
        Quotient::new(&d_out, &d_in)
    }

    /// Cohomology of the underlying cochain complex.
    pub fn cohomology(&self) -> Result<GradedModule> {
        let mut out = GradedModule::new(Coefficients::Integers);
        for &d in self.by_degree.keys() {
            let q = self.quotient_at(d)?;
            let torsion: Vec<u64> = q
                .torsion()
                .iter()
                .map(|t| {
                    num_traits::ToPrimitive::to_u64(t).ok_or(Error::InvariantFactorOverflow)
                })
                .collect::<Result<_>>()?;
            out.add(
                d,
                &crate::graded::FgModule::new(Coefficients::Integers, q.rank(), &torsion)?,
            )?;
        }
        Ok(out)
    }

    /// Representative cocycles for a generating set (free and torsion) of
    /// the degree-d cohomology.
    pub fn cohomology_generators(&self, d: usize) -> Result<Vec<Combination>> {
        let q = self.quotient_at(d)?;
        let mut out = Vec::new();
        for i in 0..q.rank() {
            out.push(self.comb_from_coords(&q.free_rep(i), d));
        }
        for i in 0..q.torsion().len() {
            out.push(self.comb_from_coords(&q.torsion_rep(i), d));
        }
        Ok(out)
    }
}

/// Sign normalization of the Massey representative; the two common choices
/// differ by an overall sign and never change the vanishing verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MasseySign {
    /// `Z = X·w - (-1)^{|u|} u·Y`.
    #[default]
    Standard,
    /// The negated normalization.
    Opposite,
}

/// Extra knobs for robustness testing: primitives may be shifted by
/// arbitrary cocycles without changing the verdict.
#[derive(Debug, Clone, Default)]
pub struct MasseyOptions {
    pub sign: MasseySign,
    pub offset_x: Option<Combination>,
    pub offset_y: Option<Combination>,
}

#[derive(Debug, Clone)]
pub struct MasseyResult {
    pub defined: bool,
    /// Representative cocycle (present when defined).
    pub representative: Option<Combination>,
    /// Generators of the indeterminacy subgroup, as cocycles.
    pub indeterminacy_basis: Vec<Combination>,
    /// Whether every generator of the indeterminacy maps to zero in
    /// cohomology.
    pub indeterminacy_trivial: bool,
    /// Representative lies outside the indeterminacy subgroup.
    pub nonvanishing: bool,
}

/// The triple Massey product ⟨u, v, w⟩ of cocycle classes, with
/// indeterminacy `[u]·H^{|v|+|w|-1} + H^{|u|+|v|-1}·[w]`.
pub fn triple_massey(
    dga: &FiniteDGA,
    u: &Combination,
    v: &Combination,
    w: &Combination,
) -> Result<MasseyResult> {
    triple_massey_with(dga, u, v, w, &MasseyOptions::default())
}

pub fn triple_massey_with(
    dga: &FiniteDGA,
    u: &Combination,
    v: &Combination,
    w: &Combination,
    options: &MasseyOptions,
) -> Result<MasseyResult> {
    if dga.coefficients() != Coefficients::Integers {
        return Err(Error::Dga("Massey products are computed over Z".into()));
    }
    for (name, c) in [("u", u), ("v", v), ("w", w)] {
        if !dga.d(c).is_empty() {
            return Err(Error::Dga(format!("{name} is not a cocycle")));
        }
    }
    let (du, dv, dw) = (
        dga.homogeneous_degree(u, "u")?,
        dga.homogeneous_degree(v, "v")?,
        dga.homogeneous_degree(w, "w")?,
    );
    let uv = dga.mul(u, v);
    let vw = dga.mul(v, w);

    // a pairwise product must be exact for the triple product to be defined
    let solve_primitive = |prod: &Combination, deg: usize| -> Result<Option<Combination>> {
        let target = dga.coords_in_degree(prod, deg + 1)?;
        let q = dga.quotient_at(deg + 1)?;
        match q.coords(&target) {
            Ok(c) if c.is_zero() => {}
            _ => return Ok(None), // class nonzero (or not even a cocycle)
        }
        let mat = dga.differential_matrix(deg);
        let x = mat.solve(&target).ok_or_else(|| {
            Error::Unsolvable("exact class admits no primitive; inconsistent algebra".into())
        })?;
        Ok(Some(dga.comb_from_coords(&x, deg)))
    };
    let Some(mut x) = solve_primitive(&uv, du + dv - 1)? else {
        return Ok(MasseyResult {
            defined: false,
            representative: None,
            indeterminacy_basis: Vec::new(),
            indeterminacy_trivial: true,
            nonvanishing: false,
        });
    };
    let Some(mut y) = solve_primitive(&vw, dv + dw - 1)? else {
        return Ok(MasseyResult {
            defined: false,
            representative: None,
            indeterminacy_basis: Vec::new(),
            indeterminacy_trivial: true,
            nonvanishing: false,
        });
    };
    if let Some(off) = &options.offset_x {
        if !dga.d(off).is_empty() {
            return Err(Error::Dga("offset for X must be a cocycle".into()));
        }
        x = comb_add(&x, off);
    }
    if let Some(off) = &options.offset_y {
        if !dga.d(off).is_empty() {
            return Err(Error::Dga("offset for Y must be a cocycle".into()));
        }
        y = comb_add(&y, off);
    }

    // Z = X·w - (-1)^{|u|} u·Y
    let sign = if du % 2 == 0 { -Int::one() } else { Int::one() };
    let mut z = comb_add(&dga.mul(&x, w), &comb_scale(&dga.mul(u, &y), &sign));
    if options.sign == MasseySign::Opposite {
        z = comb_scale(&z, &-Int::one());
    }
    let z_degree = du + dv + dw - 1;
    debug_assert_eq!(
        dga.homogeneous_degree(&z, "representative").ok(),
        if z.is_empty() { None } else { Some(z_degree) }
    );
    if !dga.d(&z).is_empty() {
        return Err(Error::Unsolvable(
            "Massey representative is not closed; inconsistent algebra".into(),
        ));
    }

    // indeterminacy: u·H^{|v|+|w|-1} + H^{|u|+|v|-1}·w
    let mut indeterminacy = Vec::new();
    for g in dga.cohomology_generators(dv + dw - 1)? {
        let c = dga.mul(u, &g);
        if !c.is_empty() {
            indeterminacy.push(c);
        }
    }
    for g in dga.cohomology_generators(du + dv - 1)? {
        let c = dga.mul(&g, w);
        if !c.is_empty() {
            indeterminacy.push(c);
        }
    }

    let q = dga.quotient_at(z_degree)?;
    let z_coords = dga.coords_in_degree(&z, z_degree)?;
    let gens: Vec<Vec<Int>> = indeterminacy
        .iter()
        .map(|c| dga.coords_in_degree(c, z_degree))
        .collect::<Result<_>>()?;
    let vanishing = q.class_in_span(&z_coords, &gens)?;
    let indeterminacy_trivial = gens
        .iter()
        .map(|g| q.coords(g).map(|c| c.is_zero()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    Ok(MasseyResult {
        defined: true,
        representative: Some(z),
        indeterminacy_basis: indeterminacy,
        indeterminacy_trivial,
        nonvanishing: !vanishing,
    })
}

impl FiniteDGA {
    /// Conjugate the whole structure by per-degree unimodular blocks: new
    /// basis vectors are the columns of each block in old coordinates.
    pub fn change_basis(&self, blocks: &BTreeMap<usize, Mat<Int>>) -> Result<FiniteDGA> {
        let mut inv: BTreeMap<usize, Mat<Int>> = BTreeMap::new();
        for (&d, m) in blocks {
            let dim = self.basis_of_degree(d).len();
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dga(format!(
                    "basis-change block in degree {d} has wrong shape"
                )));
            }
            inv.insert(d, m.inverse_unimodular()?);
        }
        let block = |d: usize| -> Mat<Int> {
            blocks
                .get(&d)
                .cloned()
                .unwrap_or_else(|| Mat::identity(self.basis_of_degree(d).len()))
        };
        let block_inv = |d: usize| -> Mat<Int> {
            inv.get(&d)
                .cloned()
                .unwrap_or_else(|| Mat::identity(self.basis_of_degree(d).len()))
        };
        // keep names; the meaning of index i in degree d becomes column i
        let mut out = self.clone();
        out.differential.clear();
        out.products.clear();
        // differential: D' = N_{d+1}^{-1} · D · N_d
        for (&d, dom) in &self.by_degree {
            let dmat = self.differential_matrix(d);
            if dmat.rows() == 0 {
                continue;
            }
            let new = block_inv(d + 1).mul(&dmat).mul(&block(d));
            for (c, &i) in dom.iter().enumerate() {
                let comb = dga_col_to_comb(self, &new, c, d + 1);
                if !comb.is_empty() {
                    out.differential.insert(i, comb);
                }
            }
        }
        // products: c'(i, j) = N^{-1}( mul(N e_i, N e_j) )
        let n = self.names.len();
        for i in 0..n {
            for j in 0..n {
                if i == self.unit || j == self.unit {
                    continue;
                }
                let (di, dj) = (self.degrees[i], self.degrees[j]);
                let ei = self.new_basis_vector(i, &block(di));
                let ej = self.new_basis_vector(j, &block(dj));
                let prod = self.mul(&ei, &ej);
                if prod.is_empty() {
                    continue;
                }
                let dd = di + dj;
                let coords = self.coords_in_degree(&prod, dd)?;
                let new_coords = block_inv(dd).mul_vec(&coords);
                let comb = out.comb_from_coords(&new_coords, dd);
                if !comb.is_empty() {
                    out.products.insert((i, j), comb);
                }
            }
        }
        Ok(out)
    }

    /// Old-coordinate expansion of new basis element i (degree block `n`).
    fn new_basis_vector(&self, i: usize, n: &Mat<Int>) -> Combination {
        let d = self.degrees[i];
        let basis = self.basis_of_degree(d);
        let col = basis.iter().position(|b| *b == i).expect("listed");
        comb_normalize(
            basis
                .iter()
                .enumerate()
                .map(|(r, &b)| (n[(r, col)].clone(), b))
                .collect(),
        )
    }

    /// Transform a combination's coordinates into the new basis after
    /// [`Self::change_basis`] with the same blocks.
    pub fn into_new_coordinates(
        &self,
        c: &Combination,
        blocks: &BTreeMap<usize, Mat<Int>>,
    ) -> Result<Combination> {
        if c.is_empty() {
            return Ok(Vec::new());
        }
        let d = self.homogeneous_degree(c, "combination")?;
        let coords = self.coords_in_degree(c, d)?;
        let new = match blocks.get(&d) {
            Some(m) => m.inverse_unimodular()?.mul_vec(&coords),
            None => coords,
        };
        Ok(self.comb_from_coords(&new, d))
    }
}

fn dga_col_to_comb(dga: &FiniteDGA, m: &Mat<Int>, col: usize, degree: usize) -> Combination {
    let basis = dga.basis_of_degree(degree);
    comb_normalize(
        (0..m.rows())
            .map(|r| (m[(r, col)].clone(), basis[r]))
            .collect(),
    )
}

/// The algebraic model used for the construction removing a neighborhood of
/// a trio of pairwise-unlinked but globally linked 3-spheres from the
/// 6-disc: each pairwise class product is exact, and the triple product of
/// the three degree-2 classes survives.
///
/// This is a finite model adequate for the Massey computation, not the full
/// cochain algebra of the complement.
pub fn borromean_fixture() -> FiniteDGA {
    let mut dga = FiniteDGA::new(
        vec![
            ("1".into(), 0),
            ("x1".into(), 2),
            ("x2".into(), 2),
            ("x3".into(), 2),
            ("y12".into(), 3),
            ("y13".into(), 3),
            ("y23".into(), 3),
            ("w12".into(), 4),
            ("w13".into(), 4),
            ("w23".into(), 4),
            ("v1".into(), 5),
            ("v2".into(), 5),
            ("v3".into(), 5),
            ("t".into(), 6),
        ],
        "1",
    )
    .expect("fixture basis");
    let one = || Int::one();
    let unit_combo = |dga: &FiniteDGA, n: &str| -> Combination {
        vec![(one(), dga.index_of(n).unwrap())]
    };
    // the pairwise products bound: d(y_ij) = x_i x_j = w_ij
    for (y, w) in [("y12", "w12"), ("y13", "w13"), ("y23", "w23")] {
        let c = unit_combo(&dga, w);
        dga.set_differential(y, c).unwrap();
    }
    // the three 5-cochains all hit the triple product t
    for v in ["v1", "v2", "v3"] {
        let c = unit_combo(&dga, "t");
        dga.set_differential(v, c).unwrap();
    }
    // degree 2 · degree 2
    for (a, b, w) in [
        ("x1", "x2", "w12"),
        ("x1", "x3", "w13"),
        ("x2", "x3", "w23"),
    ] {
        let c = unit_combo(&dga, w);
        dga.set_product(a, b, c.clone()).unwrap();
        dga.set_product(b, a, c).unwrap();
    }
    // degree 2 · degree 3 with disjoint indices
    for (x, y, v) in [
        ("x1", "y23", "v1"),
        ("x2", "y13", "v2"),
        ("x3", "y12", "v3"),
    ] {
        let c = unit_combo(&dga, v);
        dga.set_product(x, y, c.clone()).unwrap();
        dga.set_product(y, x, c).unwrap();
    }
    // degree 2 · degree 4 with disjoint indices: the triple product
    for (x, w) in [("x1", "w23"), ("x2", "w13"), ("x3", "w12")] {
        let c = unit_combo(&dga, "t");
        dga.set_product(x, w, c.clone()).unwrap();
        dga.set_product(w, x, c).unwrap();
    }
    debug_assert!(dga.validate().is_ok());
    dga
}

/// JSON form of a DGA: basis records, differentials by name, and products
/// keyed `"lhs*rhs"`; combinations are name→coefficient maps.
#[derive(Serialize, Deserialize)]
pub struct DgaJson {
    pub basis: Vec<DgaBasisJson>,
    pub unit: String,
    pub d: BTreeMap<String, BTreeMap<String, i64>>,
    pub mul: BTreeMap<String, BTreeMap<String, i64>>,
}

#[derive(Serialize, Deserialize)]
pub struct DgaBasisJson {
    pub name: String,
    pub degree: usize,
}

impl DgaJson {
    pub fn encode(dga: &FiniteDGA) -> DgaJson {
        let comb = |c: &Combination| -> BTreeMap<String, i64> {
            c.iter()
                .map(|(v, i)| {
                    (
                        dga.names[*i].clone(),
                        num_traits::ToPrimitive::to_i64(v).expect("desk-scale constant"),
                    )
                })
                .collect()
        };
        DgaJson {
            basis: dga
                .names
                .iter()
                .zip(&dga.degrees)
                .map(|(n, &d)| DgaBasisJson {
                    name: n.clone(),
                    degree: d,
                })
                .collect(),
            unit: dga.names[dga.unit].clone(),
            d: dga
                .differential
                .iter()
                .map(|(i, c)| (dga.names[*i].clone(), comb(c)))
                .collect(),
            mul: dga
                .products
                .iter()
                .map(|((i, j), c)| {
                    (format!("{}*{}", dga.names[*i], dga.names[*j]), comb(c))
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<FiniteDGA> {
        let mut dga = FiniteDGA::new(
            self.basis
                .iter()
                .map(|b| (b.name.clone(), b.degree))
                .collect(),
            &self.unit,
        )?;
        let comb = |m: &BTreeMap<String, i64>, dga: &FiniteDGA| -> Result<Combination> {
            m.iter()
                .map(|(n, v)| Ok((Int::from(*v), dga.index_of(n)?)))
                .collect()
        };
        for (from, to) in &self.d {
            let c = comb(to, &dga)?;
            dga.set_differential(from, c)?;
        }
        for (key, value) in &self.mul {
            let (lhs, rhs) = key.split_once('*').ok_or_else(|| {
                Error::Dga(format!("product key {key:?} must look like lhs*rhs"))
            })?;
            let c = comb(value, &dga)?;
            dga.set_product(lhs, rhs, c)?;
        }
        dga.validate()?;
        Ok(dga)
    }
}

impl fmt::Display for FiniteDGA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis:")?;
        for (&d, idxs) in &self.by_degree {
            let names: Vec<&str> = idxs.iter().map(|&i| self.names[i].as_str()).collect();
            writeln!(f, "  degree {d}: {}", names.join(", "))?;
        }
        writeln!(f, "differential:")?;
        for (i, c) in &self.differential {
            writeln!(
                f,
                "  d({}) = {}",
                self.names[*i],
                self.combination_string(c)
            )?;
        }
        Ok(())
    }
}
