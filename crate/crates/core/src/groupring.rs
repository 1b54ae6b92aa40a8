//! Group-ring computations on subsets of an abelian group.
//!
//! For a subset `C`, the product `C C^{(-1)}` in `Z[G]` has coefficient
//! `mu_g = #{(c1, c2) in C x C : c1 - c2 = g}` at `g` (ordered pairs), and
//! `|C|` at the identity. `C` is a generalized difference set (GDS) when the
//! `mu_g` for `g != 0` take at most two values; the certificate records the
//! set `S` on which the first value is taken.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

/// Coefficients of `C C^{(-1)}`, indexed by lexicographic element rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceMultiset {
    group: AbelianGroup,
    counts: Vec<u64>,
}

impl DifferenceMultiset {
    /// Coefficient of the identity, always `|C|`.
    pub fn identity_coefficient(&self) -> u64 {
        self.counts[0]
    }

    pub fn get(&self, g: &GroupElement) -> Result<u64> {
        Ok(self.counts[self.group.index_of(g)?])
    }

    /// All coefficients by element rank, identity first.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Distinct values of `mu_g` over `g != 0`.
    pub fn nonidentity_values(&self) -> BTreeSet<u64> {
        self.counts[1..].iter().copied().collect()
    }
}

/// Verified GDS parameters `(n, |S|, k, mu1, mu2)` together with `S` and `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdsCertificate {
    pub n: usize,
    pub k: usize,
    pub mu1: u64,
    pub mu2: u64,
    #[serde(rename = "S")]
    pub s: Vec<GroupElement>,
    #[serde(rename = "identity_in_S")]
    pub identity_in_s: bool,
    #[serde(rename = "C")]
    pub c: Vec<GroupElement>,
}

impl GdsCertificate {
    /// `(n, |S|, k, mu1, mu2)`.
    pub fn parameters(&self) -> (usize, usize, usize, u64, u64) {
        (self.n, self.s.len(), self.k, self.mu1, self.mu2)
    }

    /// Degenerate single-value case: `C` is an `(n, k, mu1)` difference set.
    pub fn is_difference_set(&self) -> bool {
        self.mu1 == self.mu2
    }

    /// Rebuilds `C C^{(-1)}` and checks it against
    /// `(k - mu1) 0 + mu1 S + mu2 (G - S)` when `0 in S`, or
    /// `(k - mu2) 0 + mu1 S + mu2 (G - S)` otherwise, coefficient by coefficient.
    pub fn check_identity(&self, group: &AbelianGroup) -> Result<bool> {
        if group.order() != self.n {
            return Err(Error::InvalidParameter(format!(
                "certificate order {} does not match group order {}",
                self.n,
                group.order()
            )));
        }
        let diffs = difference_counts(group, &self.c)?;
        let mut in_s = vec![false; self.n];
        for g in &self.s {
            in_s[group.index_of(g)?] = true;
        }
        if in_s[0] != self.identity_in_s || self.c.len() != self.k {
            return Ok(false);
        }
        let base = if self.identity_in_s {
            self.mu1
        } else {
            self.mu2
        } as i64;
        Ok(diffs.counts().iter().enumerate().all(|(g, &actual)| {
            let mut expected = if in_s[g] { self.mu1 } else { self.mu2 } as i64;
            if g == 0 {
                expected += self.k as i64 - base;
            }
            expected == actual as i64
        }))
    }
}

pub(crate) fn index_set(group: &AbelianGroup, set: &[GroupElement]) -> Result<Vec<usize>> {
    let mut idx = Vec::with_capacity(set.len());
    for g in set {
        idx.push(group.index_of(g)?);
    }
    idx.sort_unstable();
    let before = idx.len();
    idx.dedup();
    if idx.len() != before {
        return Err(Error::InvalidParameter(
            "subset contains duplicate elements".into(),
        ));
    }
    Ok(idx)
}

/// `mu_g` for every `g`, counting ordered pairs.
pub fn difference_counts(group: &AbelianGroup, c: &[GroupElement]) -> Result<DifferenceMultiset> {
    if c.is_empty() {
        return Err(Error::InvalidParameter(
            "difference counts of the empty set".into(),
        ));
    }
    let idx = index_set(group, c)?;
    let mut counts = vec![0u64; group.order()];
    for &a in &idx {
        for &b in &idx {
            counts[group.sub_index(a, b)] += 1;
        }
    }
    Ok(DifferenceMultiset {
        group: group.clone(),
        counts,
    })
}

/// Certificate for `C` if its nonidentity difference counts take at most two
/// values. With two values the identity is placed in `S` and `mu1 < mu2`;
/// with one value `S = {0}` and `mu1 = mu2`.
pub fn verify_gds(group: &AbelianGroup, c: &[GroupElement]) -> Result<Option<GdsCertificate>> {
    if c.is_empty() {
        return Ok(None);
    }
    let diffs = difference_counts(group, c)?;
    if c.len() == group.order() {
        return Ok(None);
    }
    let values: Vec<u64> = diffs.nonidentity_values().into_iter().collect();
    let (mu1, mu2) = match values.as_slice() {
        [v] => (*v, *v),
        [lo, hi] => (*lo, *hi),
        _ => return Ok(None),
    };
    let mut s = vec![group.identity()];
    if mu1 != mu2 {
        s.extend(
            diffs.counts[1..]
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == mu1)
                .map(|(i, _)| group.element_at(i + 1)),
        );
    }
    let mut sorted_c = c.to_vec();
    sorted_c.sort();
    Ok(Some(GdsCertificate {
        n: group.order(),
        k: c.len(),
        mu1,
        mu2,
        s,
        identity_in_s: true,
        c: sorted_c,
    }))
}

/// `(n, k, lambda)` when every nonidentity element is a difference exactly
/// `lambda` times.
pub fn verify_difference_set(
    group: &AbelianGroup,
    c: &[GroupElement],
) -> Result<Option<(usize, usize, u64)>> {
    Ok(verify_gds(group, c)?
        .filter(GdsCertificate::is_difference_set)
        .map(|cert| (cert.n, cert.k, cert.mu1)))
}

/// True iff `-C = C + t` for some `t` in the group.
pub fn has_multiplier_minus_one(group: &AbelianGroup, c: &[GroupElement]) -> Result<bool> {
    Ok(multiplier_minus_one_shift(group, c)?.is_some())
}

/// The smallest-rank `t` with `-C = C + t`, if any.
pub fn multiplier_minus_one_shift(
    group: &AbelianGroup,
    c: &[GroupElement],
) -> Result<Option<GroupElement>> {
    if c.is_empty() {
        return Err(Error::InvalidParameter("empty subset".into()));
    }
    let idx = index_set(group, c)?;
    let mut neg = vec![false; group.order()];
    for &a in &idx {
        neg[group.neg_index(a)] = true;
    }
    Ok((0..group.order())
        .find(|&t| idx.iter().all(|&a| neg[group.add_index(a, t)]))
        .map(|t| group.element_at(t)))
}

/// Largest `n` accepted by [`search_gds`].
pub const MAX_SEARCH_GDS_ORDER: u32 = 24;

#[derive(Clone, Copy, Debug)]
pub struct SearchGdsOptions {
    /// Emit only subsets that are lexicographically minimal among all their
    /// translates and negated translates.
    pub prune_orbits: bool,
}

impl Default for SearchGdsOptions {
    fn default() -> Self {
        Self { prune_orbits: true }
    }
}

/// One subset found by [`search_gds`]. Bit `i` of `mask` is set iff `i` is in `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdsHit {
    pub n: u32,
    pub mask: u64,
    pub residues: Vec<u64>,
    pub certificate: GdsCertificate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchGdsSummary {
    pub examined: u64,
    pub hits: u64,
}

fn rotl(mask: u64, t: u32, n: u32) -> u64 {
    let full = (1u64 << n) - 1;
    let t = t % n;
    if t == 0 {
        return mask;
    }
    ((mask << t) | (mask >> (n - t))) & full
}

fn negate(mask: u64, n: u32) -> u64 {
    let mut out = 0;
    for i in 0..n {
        if (mask >> i) & 1 == 1 {
            out |= 1 << ((n - i) % n);
        }
    }
    out
}

/// Lexicographic order of equal-size sets by their sorted element lists.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// True when `mask` is lexicographically minimal in its orbit under
/// translation and negation in `Z_n`.
pub fn is_orbit_canonical(mask: u64, n: u32) -> bool {
    let neg = negate(mask, n);
    (0..n).all(|t| !lex_less(rotl(mask, t, n), mask) && !lex_less(rotl(neg, t, n), mask))
}

/// Lexicographically minimal member of the orbit of `mask`.
pub fn orbit_canonical_form(mask: u64, n: u32) -> u64 {
    let neg = negate(mask, n);
    (0..n)
        .flat_map(|t| [rotl(mask, t, n), rotl(neg, t, n)])
        .fold(
            mask,
            |best, cand| if lex_less(cand, best) { cand } else { best },
        )
}

fn two_valued_cyclic(mask: u64, n: u32) -> bool {
    let mut first = None;
    let mut second = None;
    for g in 1..n {
        let mu = (mask & rotl(mask, g, n)).count_ones();
        match (first, second) {
            (None, _) => first = Some(mu),
            (Some(a), _) if a == mu => {}
            (Some(_), None) => second = Some(mu),
            (Some(_), Some(b)) if b == mu => {}
            _ => return false,
        }
    }
    true
}

fn residues_of(mask: u64, n: u32) -> Vec<u64> {
    (0..n as u64).filter(|&i| (mask >> i) & 1 == 1).collect()
}

/// Exhaustive GDS search in `Z_n` over subsets encoded as bitmasks, emitting
/// hits in increasing mask order. Subsets with fewer than two elements and
/// the whole group are skipped.
pub fn search_gds<F>(n: u32, options: SearchGdsOptions, mut emit: F) -> Result<SearchGdsSummary>
where
    F: FnMut(GdsHit),
{
    if !(2..=MAX_SEARCH_GDS_ORDER).contains(&n) {
        return Err(Error::Budget(format!(
            "GDS search supports 2 <= n <= {MAX_SEARCH_GDS_ORDER}, got {n}"
        )));
    }
    let group = AbelianGroup::cyclic(n as u64)?;
    let full = (1u64 << n) - 1;
    const BLOCK: u64 = 1 << 14;
    let mut summary = SearchGdsSummary::default();
    let mut start = 1u64;
    while start < full {
        let end = (start + BLOCK).min(full);
        let found: Vec<u64> = (start..end)
            .into_par_iter()
            .filter(|&mask| {
                mask.count_ones() >= 2
                    && (!options.prune_orbits || is_orbit_canonical(mask, n))
                    && two_valued_cyclic(mask, n)
            })
            .collect();
        summary.examined += end - start;
        for mask in found {
            let residues = residues_of(mask, n);
            let c: Vec<GroupElement> = residues.iter().map(|&r| GroupElement(vec![r])).collect();
            let certificate = verify_gds(&group, &c)?
                .expect("bitmask prefilter and group-ring verification agree");
            summary.hits += 1;
            emit(GdsHit {
                n,
                mask,
                residues,
                certificate,
            });
        }
        start = end;
    }
    Ok(summary)
}
