//! Graded cohomology rings presented by a basis and structure constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::Coefficients;

/// A basis label `e_{degree, index}`; indices are 1-based within a degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub degree: usize,
    pub index: usize,
}

impl Label {
    pub fn new(degree: usize, index: usize) -> Self {
        Label { degree, index }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.degree, self.index)
    }
}

/// Integer combination of basis labels, sorted with nonzero coefficients.
pub type Combo = Vec<(i64, Label)>;

pub fn combo_normalize(mut c: Combo) -> Combo {
    c.sort_by_key(|&(_, l)| l);
    let mut out: Combo = Vec::with_capacity(c.len());
    for (coeff, label) in c {
        match out.last_mut() {
            Some((acc, l)) if *l == label => *acc += coeff,
            _ => out.push((coeff, label)),
        }
    }
    out.retain(|&(coeff, _)| coeff != 0);
    out
}

pub fn combo_add(a: &Combo, b: &Combo) -> Combo {
    let mut c = a.clone();
    c.extend_from_slice(b);
    combo_normalize(c)
}

pub fn combo_scale(a: &Combo, s: i64) -> Combo {
    combo_normalize(a.iter().map(|&(c, l)| (c * s, l)).collect())
}

pub fn combo_to_string(c: &Combo) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (coeff, label)) in c.iter().enumerate() {
        if i == 0 {
            match coeff {
                1 => {}
                -1 => s.push('-'),
                _ => s.push_str(&format!("{coeff}·")),
            }
        } else if *coeff >= 0 {
            s.push_str(" + ");
            if *coeff != 1 {
                s.push_str(&format!("{coeff}·"));
            }
        } else {
            s.push_str(" - ");
            if *coeff != -1 {
                s.push_str(&format!("{}·", -coeff));
            }
        }
        s.push_str(&label.to_string());
    }
    s
}

/// A graded-commutative ring with unit, finite basis per degree, and integer
/// structure constants. Over `Z/p` the constants are read modulo p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRing {
    pub coefficients: Coefficients,
    /// Dimension of the ambient object; products above `ambient_dim` are not
    /// listed and read as zero.
    pub ambient_dim: usize,
    /// Basis size per degree. Degree 0 always has exactly the unit.
    pub ranks: BTreeMap<usize, usize>,
    /// Products of positive-degree basis pairs; missing entries are zero.
    pub products: BTreeMap<(Label, Label), Combo>,
}

impl CohomologyRing {
    pub fn new(coefficients: Coefficients, ambient_dim: usize) -> Self {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        CohomologyRing {
            coefficients,
            ambient_dim,
            ranks,
            products: BTreeMap::new(),
        }
    }

    pub fn unit(&self) -> Label {
        Label::new(0, 1)
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn basis(&self) -> Vec<Label> {
        self.ranks
            .iter()
            .flat_map(|(&d, &r)| (1..=r).map(move |i| Label::new(d, i)))
            .collect()
    }

    pub fn contains(&self, l: &Label) -> bool {
        l.index >= 1 && l.index <= self.rank(l.degree)
    }

    /// Reduce an integer modulo the coefficient characteristic (balanced
    /// representative for Z/p, identity otherwise).
    fn reduce(&self, v: i64) -> i64 {
        match self.coefficients {
            Coefficients::ModP(p) => {
                let p = p as i64;
                let r = v.rem_euclid(p);
                if r > p / 2 {
                    r - p
                } else {
                    r
                }
            }
            _ => v,
        }
    }

    fn reduce_combo(&self, c: Combo) -> Combo {
        combo_normalize(c.into_iter().map(|(v, l)| (self.reduce(v), l)).collect())
    }

    pub fn set_product(&mut self, a: Label, b: Label, value: Combo) -> Result<()> {
        for l in [&a, &b] {
            if !self.contains(l) {
                return Err(Error::Ring(format!("label {l} not in basis")));
            }
        }
        let value = self.reduce_combo(value);
        for (_, l) in &value {
            if !self.contains(l) {
                return Err(Error::Ring(format!(
                    "product value label {l} not in basis"
                )));
            }
            if l.degree != a.degree + b.degree {
                return Err(Error::Ring(format!(
                    "product of degrees {} and {} lands in degree {}",
                    a.degree, b.degree, l.degree
                )));
            }
        }
        if value.is_empty() {
            self.products.remove(&(a, b));
        } else {
            self.products.insert((a, b), value);
        }
        Ok(())
    }

    /// Product of two basis labels.
    pub fn product(&self, a: Label, b: Label) -> Combo {
        if a.degree == 0 {
            return vec![(1, b)];
        }
        if b.degree == 0 {
            return vec![(1, a)];
        }
        self.products.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// Bilinear extension of [`Self::product`] to combinations.
    pub fn multiply(&self, a: &Combo, b: &Combo) -> Combo {
        let mut acc: Combo = Vec::new();
        for &(ca, la) in a {
            for &(cb, lb) in b {
                let term = combo_scale(&self.product(la, lb), ca * cb);
                acc = combo_add(&acc, &term);
            }
        }
        self.reduce_combo(acc)
    }

    /// Check gradedness, graded commutativity and associativity over the
    /// whole basis. Reports the first violation.
    pub fn check_invariants(&self) -> Result<()> {
        if self.rank(0) != 1 {
            return Err(Error::Ring("degree 0 must be spanned by the unit".into()));
        }
        let basis = self.basis();
        for ((a, b), v) in &self.products {
            if !self.contains(a) || !self.contains(b) {
                return Err(Error::Ring(format!("stray product entry ({a}, {b})")));
            }
            for (_, l) in v {
                if l.degree != a.degree + b.degree || !self.contains(l) {
                    return Err(Error::Ring(format!("product ({a}, {b}) is not graded")));
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                if a.degree == 0 || b.degree == 0 {
                    continue;
                }
                let ab = self.product(a, b);
                let ba = self.product(b, a);
                let sign = if (a.degree * b.degree) % 2 == 0 { 1 } else { -1 };
                if self.reduce_combo(combo_scale(&ba, sign)) != self.reduce_combo(ab.clone()) {
                    return Err(Error::Ring(format!(
                        "graded commutativity fails on ({a}, {b})"
                    )));
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                for &c in &basis {
                    let left = self.multiply(&self.product(a, b), &vec![(1, c)]);
                    let right = self.multiply(&vec![(1, a)], &self.product(b, c));
                    if left != right {
                        return Err(Error::Ring(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Aligned text multiplication table of the positive-degree basis.
    pub fn table(&self) -> String {
        let basis: Vec<Label> = self.basis().into_iter().filter(|l| l.degree > 0).collect();
        let mut out = String::new();
        out.push_str(&format!(
            "cohomology ring over {} (ambient dimension {})\n",
            self.coefficients, self.ambient_dim
        ));
        let ranks: Vec<String> = self
            .ranks
            .iter()
            .map(|(d, r)| format!("H^{d}: {r}"))
            .collect();
        out.push_str(&format!("ranks: {}\n", ranks.join(", ")));
        if basis.is_empty() {
            return out;
        }
        let names: Vec<String> = basis.iter().map(Label::to_string).collect();
        let width = names
            .iter()
            .map(String::len)
            .chain(basis.iter().flat_map(|&a| {
                basis
                    .iter()
                    .map(move |&b| combo_to_string(&self.product(a, b)).len())
            }))
            .max()
            .unwrap_or(1);
        out.push_str(&format!("{:w$} |", "", w = width));
        for n in &names {
            out.push_str(&format!(" {n:>w$}", w = width));
        }
        out.push('\n');
        for (i, &a) in basis.iter().enumerate() {
            out.push_str(&format!("{:>w$} |", names[i], w = width));
            for &b in &basis {
                out.push_str(&format!(
                    " {:>w$}",
                    combo_to_string(&self.product(a, b)),
                    w = width
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// The exterior algebra on `g` degree-1 generators (the cohomology ring of a
/// g-torus): basis labels enumerate the subsets of {1..g} in size-then-lex
/// order, and products are signed shuffles.
pub fn exterior_ring(g: usize, coefficients: Coefficients) -> Result<CohomologyRing> {
    if g > 16 {
        return Err(Error::Ring("exterior ring capped at 16 generators".into()));
    }
    let mut subsets_by_size: Vec<Vec<u32>> = vec![Vec::new(); g + 1];
    for mask in 0u32..(1u32 << g) {
        subsets_by_size[mask.count_ones() as usize].push(mask);
    }
    for level in &mut subsets_by_size {
        level.sort_unstable();
    }
    let index_of = |mask: u32| -> Label {
        let size = mask.count_ones() as usize;
        let idx = subsets_by_size[size]
            .iter()
            .position(|&m| m == mask)
            .expect("subset listed")
            + 1;
        Label::new(size, idx)
    };
    let mut ring = CohomologyRing::new(coefficients, g);
    for (size, level) in subsets_by_size.iter().enumerate().skip(1) {
        if !level.is_empty() {
            ring.ranks.insert(size, level.len());
        }
    }
    // sign of merging sorted index sets a and b: parity of inversions
    let shuffle_sign = |a: u32, b: u32| -> i64 {
        let mut inversions = 0u32;
        for i in 0..g {
            if b & (1 << i) != 0 {
                inversions += (a >> (i + 1)).count_ones();
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    };
    for (sa, level_a) in subsets_by_size.iter().enumerate().skip(1) {
        for &a in level_a {
            for (sb, level_b) in subsets_by_size.iter().enumerate().skip(1) {
                if sa + sb > g {
                    continue;
                }
                for &b in level_b {
                    if a & b != 0 {
                        continue;
                    }
                    let sign = shuffle_sign(a, b);
                    let target = index_of(a | b);
                    ring.set_product(index_of(a), index_of(b), vec![(sign, target)])?;
                }
            }
        }
    }
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Coefficients::Integers as Z;

    #[test]
    fn combo_arithmetic() {
        let a = vec![(1, Label::new(2, 1)), (2, Label::new(2, 2))];
        let b = vec![(-1, Label::new(2, 1))];
        assert_eq!(combo_add(&a, &b), vec![(2, Label::new(2, 2))]);
        assert_eq!(combo_scale(&b, 0), vec![]);
    }

    #[test]
    fn exterior_ring_is_a_valid_ring() {
        let ring = exterior_ring(4, Z).unwrap();
        ring.check_invariants().unwrap();
        assert_eq!(ring.rank(1), 4);
        assert_eq!(ring.rank(2), 6);
        assert_eq!(ring.rank(4), 1);
    }

    #[test]
    fn exterior_anticommutes_in_degree_one() {
        let ring = exterior_ring(3, Z).unwrap();
        let x = Label::new(1, 1);
        let y = Label::new(1, 2);
        let xy = ring.product(x, y);
        let yx = ring.product(y, x);
        assert_eq!(combo_scale(&yx, -1), xy);
        assert!(ring.product(x, x).is_empty());
    }

    #[test]
    fn exterior_top_product() {
        let ring = exterior_ring(3, Z).unwrap();
        let x = vec![(1, Label::new(1, 1))];
        let y = vec![(1, Label::new(1, 2))];
        let z = vec![(1, Label::new(1, 3))];
        let top = ring.multiply(&ring.multiply(&x, &y), &z);
        assert_eq!(top, vec![(1, Label::new(3, 1))]);
    }

    #[test]
    fn gradedness_is_enforced() {
        let mut ring = CohomologyRing::new(Z, 4);
        ring.ranks.insert(1, 1);
        ring.ranks.insert(3, 1);
        let bad = ring.set_product(
            Label::new(1, 1),
            Label::new(1, 1),
            vec![(1, Label::new(3, 1))],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn mod_p_structure_constants_reduce() {
        let mut ring = CohomologyRing::new(Coefficients::ModP(3), 4);
        ring.ranks.insert(1, 1);
        ring.ranks.insert(2, 1);
        ring.set_product(
            Label::new(1, 1),
            Label::new(1, 1),
            vec![(3, Label::new(2, 1))],
        )
        .unwrap();
        assert!(ring.product(Label::new(1, 1), Label::new(1, 1)).is_empty());
    }
}
