//! Finite abelian groups written additively as products of cyclic factors
//! `Z_{d_1} x ... x Z_{d_t}`, together with their characters.
//!
//! Elements and character indices share one shape: a coordinate vector with
//! `0 <= x_i < d_i`. Both are enumerated lexicographically with the first
//! factor most significant, so the lexicographic rank of an element doubles
//! as its vertex index in a Cayley graph.
//!
//! The character indexed by `a` is `chi_a(x) = exp(2 pi i sum_i a_i x_i / d_i)`.
//! Values are looked up in a table of `e`-th roots of unity, where `e` is the
//! group exponent; the roots at quarter turns are stored exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Groups larger than this are rejected at construction.
pub const MAX_GROUP_ORDER: usize = 1 << 24;

/// Tolerance factor for deciding that an accumulated character sum is real
/// or zero: a sum over a group of order `n` is treated as zero when below
/// `SUM_TOLERANCE * n`.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Deserialize)]
struct GroupSpec {
    factors: Vec<u64>,
}

/// A finite abelian group `Z_{d_1} x ... x Z_{d_t}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec")]
pub struct AbelianGroup {
    factors: Vec<u64>,
    #[serde(skip)]
    order: usize,
    #[serde(skip)]
    strides: Vec<usize>,
}

impl TryFrom<GroupSpec> for AbelianGroup {
    type Error = Error;

    fn try_from(spec: GroupSpec) -> Result<Self> {
        AbelianGroup::new(spec.factors)
    }
}

/// An element of an [`AbelianGroup`], as reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

/// Index of a character of an [`AbelianGroup`]; the all-zero index is the
/// principal character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterIndex(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl CharacterIndex {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_principal(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("factor {d} is smaller than 2")));
        }
        let mut order: usize = 1;
        for &d in &factors {
            order = order
                .checked_mul(d as usize)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or_else(|| Error::Budget(format!("group order exceeds {MAX_GROUP_ORDER}")))?;
        }
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(Self {
            factors,
            order,
            strides,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The elementary abelian group `Z_2^m`.
    pub fn elementary_abelian_2(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("Z_2^0 is trivial".into()));
        }
        Self::new(vec![2; m as usize])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the factors.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &d| acc / gcd(acc, d) * d)
    }

    /// True when every factor is 2.
    pub fn is_elementary_abelian_2(&self) -> bool {
        self.factors.iter().all(|&d| d == 2)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    fn check_shape(&self, coords: &[u64]) -> Result<()> {
        if coords.len() != self.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.rank(),
                actual: coords.len(),
            });
        }
        for (&x, &d) in coords.iter().zip(&self.factors) {
            if x >= d {
                return Err(Error::CoordinateOutOfRange {
                    value: x,
                    modulus: d,
                });
            }
        }
        Ok(())
    }

    /// Builds a validated element from reduced coordinates.
    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        self.check_shape(&coords)?;
        Ok(GroupElement(coords))
    }

    /// Builds an element, reducing each coordinate modulo its factor.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.rank(),
                actual: coords.len(),
            });
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| x.rem_euclid(d as i64) as u64)
                .collect(),
        ))
    }

    pub fn character(&self, coords: Vec<u64>) -> Result<CharacterIndex> {
        self.check_shape(&coords)?;
        Ok(CharacterIndex(coords))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.check_shape(&g.0).is_ok()
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_shape(&g.0)?;
        self.check_shape(&h.0)?;
        Ok(GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((&a, &b), &d)| (a + b) % d)
                .collect(),
        ))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_shape(&g.0)?;
        Ok(GroupElement(
            g.0.iter()
                .zip(&self.factors)
                .map(|(&a, &d)| (d - a) % d)
                .collect(),
        ))
    }

    pub fn sub(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let nh = self.neg(h)?;
        self.add(g, &nh)
    }

    /// Lexicographic rank of an element (first factor most significant).
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check_shape(&g.0)?;
        Ok(self.rank_unchecked(&g.0))
    }

    fn rank_unchecked(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&x, &s)| x as usize * s)
            .sum()
    }

    /// Element with the given lexicographic rank.
    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        GroupElement(self.digits(index).collect())
    }

    fn digits(&self, index: usize) -> impl Iterator<Item = u64> + '_ {
        self.strides
            .iter()
            .zip(&self.factors)
            .map(move |(&s, &d)| ((index / s) % d as usize) as u64)
    }

    /// Group law on lexicographic ranks.
    pub fn add_index(&self, u: usize, v: usize) -> usize {
        let mut out = 0;
        for (&s, &d) in self.strides.iter().zip(&self.factors) {
            let d = d as usize;
            out += (((u / s) % d + (v / s) % d) % d) * s;
        }
        out
    }

    pub fn neg_index(&self, u: usize) -> usize {
        let mut out = 0;
        for (&s, &d) in self.strides.iter().zip(&self.factors) {
            let d = d as usize;
            out += ((d - (u / s) % d) % d) * s;
        }
        out
    }

    pub fn sub_index(&self, u: usize, v: usize) -> usize {
        self.add_index(u, self.neg_index(v))
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    /// All character indices in lexicographic order.
    pub fn characters(&self) -> impl Iterator<Item = CharacterIndex> + '_ {
        (0..self.order).map(|i| CharacterIndex(self.digits(i).collect()))
    }

    pub fn character_at(&self, index: usize) -> CharacterIndex {
        CharacterIndex(self.digits(index).collect())
    }

    /// `chi_a(x)`.
    pub fn character_value(&self, a: &CharacterIndex, x: &GroupElement) -> Result<Complex64> {
        self.check_shape(&a.0)?;
        self.check_shape(&x.0)?;
        let table = RootTable::new(self);
        Ok(table.root(table.phase(&a.0, &x.0)))
    }

    /// `chi_a(C) = sum_{c in C} chi_a(c)`.
    pub fn character_sum(&self, a: &CharacterIndex, set: &[GroupElement]) -> Result<Complex64> {
        self.check_shape(&a.0)?;
        for c in set {
            self.check_shape(&c.0)?;
        }
        let table = RootTable::new(self);
        Ok(set
            .iter()
            .map(|c| table.root(table.phase(&a.0, &c.0)))
            .sum())
    }

    /// Subgroup generated by `gens`, sorted lexicographically.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
        let mut gen_idx = Vec::with_capacity(gens.len());
        for g in gens {
            gen_idx.push(self.index_of(g)?);
        }
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            for &g in &gen_idx {
                let v = self.add_index(u, g);
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        // In a finite group closure under addition already contains inverses.
        Ok(seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| self.element_at(i))
            .collect())
    }

    /// True when `set` is closed under negation.
    pub fn is_symmetric(&self, set: &[GroupElement]) -> Result<bool> {
        let members: BTreeSet<&GroupElement> = set.iter().collect();
        for c in set {
            if !members.contains(&self.neg(c)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Table of `e`-th roots of unity for a group of exponent `e`, plus the
/// per-factor weights `e / d_i` that turn `sum a_i x_i / d_i` into an
/// integer phase modulo `e`.
#[derive(Clone, Debug)]
pub struct RootTable {
    exponent: u64,
    weights: Vec<u64>,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(group: &AbelianGroup) -> Self {
        let exponent = group.exponent();
        let weights = group.factors().iter().map(|&d| exponent / d).collect();
        let roots = (0..exponent).map(|j| exact_root(j, exponent)).collect();
        Self {
            exponent,
            weights,
            roots,
        }
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Integer phase `p` with `chi_a(x) = exp(2 pi i p / e)`.
    pub fn phase(&self, a: &[u64], x: &[u64]) -> u64 {
        let mut p = 0u64;
        for ((&ai, &xi), &w) in a.iter().zip(x).zip(&self.weights) {
            p = (p + (ai * xi % self.exponent) * w) % self.exponent;
        }
        p
    }

    pub fn root(&self, phase: u64) -> Complex64 {
        self.roots[phase as usize]
    }
}

fn exact_root(j: u64, e: u64) -> Complex64 {
    if (4 * j).is_multiple_of(e) {
        match 4 * j / e {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / e as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}
