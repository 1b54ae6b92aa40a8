//! Explicit connection sets with closed-form spectra.
//!
//! Each construction returns a [`ConstructionReport`] holding the graph, the
//! degree and eigenvalues predicted by its closed forms, and, once a computed
//! spectrum is supplied, any values falling outside the prediction.

use serde::Serialize;

use crate::cayley::{CayleyGraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::gf2m::{Gf2Element, Gf2Field, KloostermanTable};
use crate::group::AbelianGroup;
use crate::spectral::Spectrum;

/// Largest field degree accepted by [`kloosterman_trace_set`].
pub const MAX_KLOOSTERMAN_DEGREE: u32 = 20;
/// Largest half-degree accepted by [`polar_trace_set`].
pub const MAX_POLAR_DEGREE: u32 = 10;
/// Largest `u` accepted by [`bent_hadamard_set`].
pub const MAX_BENT_U: u32 = 6;
/// Largest `s` or `r` accepted by [`theorem33_set`].
pub const MAX_PRODUCT_FACTOR: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub name: String,
    pub graph: CayleyGraph,
    pub predicted_degree: usize,
    /// Predicted eigenvalues, decreasing, without repeats. Includes the
    /// degree itself and `-degree` when the construction is bipartite.
    pub predicted_eigenvalues: Vec<i64>,
    /// Where each predicted value comes from.
    pub provenance: Vec<String>,
    /// Computed eigenvalues not covered by the prediction.
    pub discrepancies: Vec<String>,
}

impl ConstructionReport {
    fn new(
        name: impl Into<String>,
        graph: CayleyGraph,
        predicted_degree: usize,
        mut predicted_eigenvalues: Vec<i64>,
        provenance: Vec<String>,
    ) -> Result<Self> {
        let name = name.into();
        if graph.degree() != predicted_degree {
            return Err(Error::FormulaMismatch(format!(
                "{name}: closed-form degree {predicted_degree}, connection set has {}",
                graph.degree()
            )));
        }
        predicted_eigenvalues.sort_unstable_by(|a, b| b.cmp(a));
        predicted_eigenvalues.dedup();
        Ok(Self {
            name,
            graph,
            predicted_degree,
            predicted_eigenvalues,
            provenance,
            discrepancies: vec![],
        })
    }

    pub fn connection(&self) -> &ConnectionSet {
        self.graph.connection()
    }

    /// Replaces `discrepancies` with every computed value outside the
    /// predicted set and `+-degree`. Returns true when there are none.
    pub fn check_spectrum(&mut self, spec: &Spectrum) -> bool {
        let k = self.predicted_degree as i64;
        self.discrepancies = spec
            .entries()
            .iter()
            .filter(|(v, _)| match v.exact() {
                Some(x) => x.abs() != k && !self.predicted_eigenvalues.contains(&x),
                None => true,
            })
            .map(|(v, m)| {
                format!(
                    "{}: computed eigenvalue {v} (multiplicity {m}) not predicted",
                    self.name
                )
            })
            .collect();
        self.discrepancies.is_empty()
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            name: self.name.clone(),
            order: self.graph.order(),
            predicted_degree: self.predicted_degree,
            predicted_eigenvalues: self.predicted_eigenvalues.clone(),
            provenance: self.provenance.clone(),
            discrepancies: self.discrepancies.clone(),
        }
    }
}

/// Serializable view of a report without the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportSummary {
    pub name: String,
    pub order: usize,
    pub predicted_degree: usize,
    pub predicted_eigenvalues: Vec<i64>,
    pub provenance: Vec<String>,
    pub discrepancies: Vec<String>,
}

fn check_product_params(s: u64, r: u64) -> Result<()> {
    for (name, v) in [("s", s), ("r", r)] {
        if v < 4 || v % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "{name} = {v} must be even and at least 4"
            )));
        }
        if v > MAX_PRODUCT_FACTOR {
            return Err(Error::Budget(format!(
                "{name} = {v} > {MAX_PRODUCT_FACTOR}"
            )));
        }
    }
    Ok(())
}

/// Eigenvalue for each character class of the product set, keyed by class
/// number: 0 is the principal character, 1 through 8 the nontrivial classes.
pub fn theorem33_case_value(s: u64, r: u64, case: u8) -> i64 {
    let (s, r) = (s as i64, r as i64);
    match case {
        0 => s * r / 2 - 2,
        1 | 6 => r - 2,
        3 | 7 => s - 2,
        5 => -(s - 2) * (r - 2) / 2,
        _ => -2,
    }
}

/// Class of the character `(a, b)` of `Z_s x Z_r`. The first component is
/// principal when `a = 0` and trivial on the even subgroup when `a = s/2`;
/// likewise for `b`.
pub fn theorem33_case(s: u64, r: u64, a: u64, b: u64) -> u8 {
    #[derive(PartialEq)]
    enum Kind {
        Principal,
        TrivialOnEven,
        Nontrivial,
    }
    let kind = |x: u64, n: u64| {
        if x == 0 {
            Kind::Principal
        } else if 2 * x == n {
            Kind::TrivialOnEven
        } else {
            Kind::Nontrivial
        }
    };
    use Kind::*;
    match (kind(a % s, s), kind(b % r, r)) {
        (Principal, Principal) => 0,
        (Principal, TrivialOnEven) => 1,
        (Principal, Nontrivial) => 2,
        (TrivialOnEven, Principal) => 3,
        (Nontrivial, Principal) => 4,
        (TrivialOnEven, TrivialOnEven) => 5,
        (Nontrivial, TrivialOnEven) => 6,
        (TrivialOnEven, Nontrivial) => 7,
        (Nontrivial, Nontrivial) => 8,
    }
}

/// `D = (C0 x Z_r) xor (Z_s x C1)` in `Z_s x Z_r`, where `C0` and `C1` are
/// the nonzero even residues.
pub fn theorem33_set(s: u64, r: u64) -> Result<ConstructionReport> {
    check_product_params(s, r)?;
    let group = AbelianGroup::new(vec![s, r])?;
    let indices: Vec<usize> = (0..group.order())
        .filter(|&i| {
            let e = group.element_at(i);
            let in_a = e.0[0] % 2 == 0 && e.0[0] != 0;
            let in_b = e.0[1] % 2 == 0 && e.0[1] != 0;
            in_a != in_b
        })
        .collect();
    let graph = CayleyGraph::from_connection(ConnectionSet::from_indices(group, indices)?);
    let predicted: Vec<i64> = (0..=8).map(|c| theorem33_case_value(s, r, c)).collect();
    let provenance = vec![
        format!("{}: principal character", predicted[0]),
        format!("{}: classes 1 and 6", predicted[1]),
        format!("{}: classes 3 and 7", predicted[3]),
        "-2: classes 2, 4 and 8".to_string(),
        format!(
            "{}: class 5, -(s-2)(r-2)/2, checked against the dense spectrum at (4,4)",
            predicted[5]
        ),
    ];
    ConstructionReport::new(
        format!("theorem33(s={s}, r={r})"),
        graph,
        (s * r / 2 - 2) as usize,
        predicted,
        provenance,
    )
}

/// Stated sufficient hypothesis: `s >= 4` and `2s > r >= s`, or the same
/// with `s` and `r` exchanged.
pub fn theorem33_hypothesis(s: u64, r: u64) -> bool {
    (s >= 4 && 2 * s > r && r >= s) || (r >= 4 && 2 * r > s && s >= r)
}

/// The two inequalities `(2s + 4 - r) r > 16` and `(2r + 4 - s) s > 16`,
/// stated as equivalent to `max(r - 2, s - 2) < 2 sqrt(sr/2 - 3)`.
pub fn theorem33_condition(s: u64, r: u64) -> bool {
    let (s, r) = (s as i64, r as i64);
    (2 * s + 4 - r) * r > 16 && (2 * r + 4 - s) * s > 16
}

/// `max(r - 2, s - 2)^2 < 4 (sr/2 - 3)`, evaluated in integers.
pub fn theorem33_stated_bound(s: u64, r: u64) -> bool {
    let (s, r) = (s as i64, r as i64);
    let m = (r - 2).max(s - 2);
    m * m < 4 * (s * r / 2 - 3)
}

/// The stated criterion set against a spectrum-based verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Theorem33Assessment {
    pub s: u64,
    pub r: u64,
    pub hypothesis: bool,
    pub condition: bool,
    pub verdict: bool,
    /// Present when `condition` and `verdict` disagree.
    pub conflict: Option<String>,
}

pub fn theorem33_assessment(s: u64, r: u64, verdict: bool) -> Theorem33Assessment {
    let hypothesis = theorem33_hypothesis(s, r);
    let condition = theorem33_condition(s, r);
    let conflict = (condition != verdict).then(|| {
        let k = (s * r / 2 - 2) as i64;
        let case5 = theorem33_case_value(s, r, 5);
        format!(
            "(s={s}, r={r}): stated criterion gives {condition} but the computed spectrum gives {verdict}; \
             eigenvalue {case5} has square {} against 4(k-1) = {}",
            case5 * case5,
            4 * (k - 1)
        )
    });
    Theorem33Assessment {
        s,
        r,
        hypothesis,
        condition,
        verdict,
        conflict,
    }
}

fn check_degree(name: &str, m: u32, max: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be at least 1"
        )));
    }
    if m > max {
        return Err(Error::Budget(format!("{name} = {m} > {max}")));
    }
    Ok(())
}

/// `{z != 0 : Tr(z) = i, Tr(1/z) = j}` over GF(2^m), as field elements.
pub fn dij_elements(field: &Gf2Field, i: u8, j: u8) -> Vec<Gf2Element> {
    let inv = field.inverse_table();
    field
        .nonzero_elements()
        .filter(|&z| field.abs_trace(z) == i && field.abs_trace(Gf2Element(inv[z.0 as usize])) == j)
        .collect()
}

/// `D_{i,j}` as a connection set on the additive group `Z_2^m`, where an
/// element's bit pattern is its group rank.
pub fn dij_set(m: u32, i: u8, j: u8) -> Result<ConnectionSet> {
    check_degree("m", m, MAX_KLOOSTERMAN_DEGREE)?;
    if i > 1 || j > 1 {
        return Err(Error::InvalidParameter(format!(
            "trace values must be bits, got ({i}, {j})"
        )));
    }
    let field = Gf2Field::new(m)?;
    let group = AbelianGroup::elementary_abelian_2(m)?;
    let idx = dij_elements(&field, i, j)
        .into_iter()
        .map(|z| z.0 as usize)
        .collect();
    ConnectionSet::from_indices(group, idx)
}

/// `|D_{i,j}| = (2^m - 1 - (-1)^j - (-1)^i + (-1)^{i+j} k_m(1)) / 4`.
pub fn dij_cardinality(m: u32, i: u8, j: u8) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "cardinality formula needs m >= 2, got {m}"
        )));
    }
    if i > 1 || j > 1 {
        return Err(Error::InvalidParameter(format!(
            "trace values must be bits, got ({i}, {j})"
        )));
    }
    let k = crate::gf2m::kloosterman_one_recursive(m)?;
    let sign = |e: u8| if e.is_multiple_of(2) { 1 } else { -1 };
    let total = (1i64 << m) - 1 - sign(j) - sign(i) + sign(i + j) * k;
    debug_assert_eq!(total % 4, 0);
    Ok(total / 4)
}

/// `sum_{z in D} (-1)^{Tr(a z)}` for the set `D = D_{1,1}`.
pub fn kloosterman_trace_character_sum(field: &Gf2Field, d: &[Gf2Element], a: Gf2Element) -> i64 {
    d.iter()
        .map(|&z| {
            if field.abs_trace(field.mul(a, z)) == 0 {
                1
            } else {
                -1
            }
        })
        .sum()
}

/// Closed form of the character sum at `a`: `|D|` at 0, `-|D|` at 1 and
/// `(k_m(a+1) - k_m(a)) / 4` elsewhere.
pub fn kloosterman_trace_eigenvalue(table: &KloostermanTable, a: Gf2Element) -> i64 {
    let k1 = table.get(Gf2Element::ONE);
    let size = (k1 + (1i64 << table.degree()) + 1) / 4;
    match a.0 {
        0 => size,
        1 => -size,
        _ => (-table.get(a) + table.get(Gf2Element(a.0 ^ 1))) / 4,
    }
}

/// `D = {z != 0 : Tr(z) = Tr(1/z) = 1}` on the additive group of GF(2^m).
pub fn kloosterman_trace_set(m: u32) -> Result<ConstructionReport> {
    check_degree("m", m, MAX_KLOOSTERMAN_DEGREE)?;
    let field = Gf2Field::new(m)?;
    let table = KloostermanTable::compute(&field)?;
    kloosterman_trace_set_with_table(&field, &table)
}

/// As [`kloosterman_trace_set`], reusing a precomputed (possibly cached) table.
pub fn kloosterman_trace_set_with_table(
    field: &Gf2Field,
    table: &KloostermanTable,
) -> Result<ConstructionReport> {
    let m = field.degree();
    if table.degree() != m || table.modulus() != field.modulus() {
        return Err(Error::InvalidParameter(
            "Kloosterman table does not match the field".into(),
        ));
    }
    let group = AbelianGroup::elementary_abelian_2(m)?;
    let idx = dij_elements(field, 1, 1)
        .into_iter()
        .map(|z| z.0 as usize)
        .collect();
    let graph = CayleyGraph::from_connection(ConnectionSet::from_indices(group, idx)?);
    let k1 = table.get(Gf2Element::ONE);
    let degree = ((k1 + (1i64 << m) + 1) / 4) as usize;
    let predicted: Vec<i64> = field
        .elements()
        .map(|a| kloosterman_trace_eigenvalue(table, a))
        .collect();
    let provenance = vec![
        format!("{degree} = (k_m(1) + 2^m + 1)/4 with k_m(1) = {k1}"),
        format!("-{degree}: character at a = 1"),
        "(k_m(a+1) - k_m(a))/4 for a not in {0, 1}".to_string(),
        format!("predicted Ramanujan when k_m(1) > 3: {}", k1 > 3),
    ];
    ConstructionReport::new(
        format!("kloosterman-trace(m={m})"),
        graph,
        degree,
        predicted,
        provenance,
    )
}

/// Degree of the polar-trace graph: `2^{2m-2}` for even `m`,
/// `2^{2m-2} + 2^{m-1}` for odd `m`.
pub fn polar_trace_degree(m: u32) -> u64 {
    let base = 1u64 << (2 * m - 2);
    if m.is_multiple_of(2) {
        base
    } else {
        base + (1 << (m - 1))
    }
}

/// `{x != 0 : Tr_m(x + conj x) = Tr_m(x conj x) = 1}` in GF(2^{2m}), where
/// `Tr_m` is the trace from the subfield GF(2^m) to GF(2).
pub fn polar_trace_elements(big: &Gf2Field) -> Result<Vec<Gf2Element>> {
    let m = big.degree() / 2;
    let mut out = Vec::new();
    for x in big.nonzero_elements() {
        let xb = big.conjugate(x)?;
        if big.subfield_trace(big.add(x, xb), m)? == 1
            && big.subfield_trace(big.mul(x, xb), m)? == 1
        {
            out.push(x);
        }
    }
    Ok(out)
}

/// Four-way table for `chi_a(D)`, `a` not in `{0, 1}`: zero unless
/// `Tr(a) = 1` (even `m`) or `Tr(a) = 0` (odd `m`), and then
/// `-2^{m-1}` or `2^{m-1}` as `Tr_m(a conj a)` is 1 or 0.
pub fn polar_case_value(big: &Gf2Field, a: Gf2Element) -> Result<i64> {
    let m = big.degree() / 2;
    let active = if m.is_multiple_of(2) { 1 } else { 0 };
    if big.abs_trace(a) != active {
        return Ok(0);
    }
    let norm = big.mul(a, big.conjugate(a)?);
    let half = 1i64 << (m - 1);
    Ok(if big.subfield_trace(norm, m)? == 1 {
        -half
    } else {
        half
    })
}

/// `sum_{x in D} (-1)^{Tr(a x)}` in GF(2^{2m}).
pub fn polar_character_sum(big: &Gf2Field, d: &[Gf2Element], a: Gf2Element) -> i64 {
    kloosterman_trace_character_sum(big, d, a)
}

/// Polar-trace set on the additive group of GF(2^{2m}).
pub fn polar_trace_set(m: u32) -> Result<ConstructionReport> {
    check_degree("m", m, MAX_POLAR_DEGREE)?;
    let big = Gf2Field::new(2 * m)?;
    let group = AbelianGroup::elementary_abelian_2(2 * m)?;
    let idx = polar_trace_elements(&big)?
        .into_iter()
        .map(|z| z.0 as usize)
        .collect();
    let graph = CayleyGraph::from_connection(ConnectionSet::from_indices(group, idx)?);
    let k = polar_trace_degree(m) as i64;
    let half = 1i64 << (m - 1);
    let provenance = vec![
        format!("+-{k}: degree by parity of m"),
        format!("+-{half}, 0: case table over Tr(a) and Tr_m(a conj a)"),
    ];
    ConstructionReport::new(
        format!("polar-trace(m={m})"),
        graph,
        k as usize,
        vec![k, half, 0, -half, -k],
        provenance,
    )
}

/// Support of the inner-product bent function `x . y` on `Z_2^{2u}`, with
/// `x` the first `u` coordinates and `y` the last `u`.
pub fn bent_hadamard_set(u: u32) -> Result<ConstructionReport> {
    check_degree("u", u, MAX_BENT_U)?;
    let group = AbelianGroup::elementary_abelian_2(2 * u)?;
    let low = (1usize << u) - 1;
    let idx = (0..group.order())
        .filter(|&i| ((i >> u) & i & low).count_ones() % 2 == 1)
        .collect();
    let graph = CayleyGraph::from_connection(ConnectionSet::from_indices(group, idx)?);
    let k = (1i64 << (2 * u - 1)) - (1i64 << (u - 1));
    let half = 1i64 << (u - 1);
    ConstructionReport::new(
        format!("bent-hadamard(u={u})"),
        graph,
        k as usize,
        vec![k, half, -half],
        vec![format!(
            "{k} = 2^(2u-1) - 2^(u-1); +-{half} = +-2^(u-1) from the flat Walsh spectrum"
        )],
    )
}

/// Difference-set parameters `(2^{2u}, 2^{2u-1} - 2^{u-1}, 2^{2u-2} - 2^{u-1})`.
pub fn bent_hadamard_parameters(u: u32) -> (usize, usize, u64) {
    (
        1 << (2 * u),
        (1 << (2 * u - 1)) - (1 << (u - 1)),
        (1 << (2 * u - 2)) - (1 << (u - 1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::spectral::spectrum_by_characters;

    #[test]
    fn example_two_set() {
        let rep = theorem33_set(4, 4).unwrap();
        let expected: Vec<GroupElement> = [[0, 2], [1, 2], [2, 0], [2, 1], [2, 3], [3, 2]]
            .iter()
            .map(|c| GroupElement(c.to_vec()))
            .collect();
        assert_eq!(rep.connection().elements(), expected.as_slice());
        assert_eq!(rep.predicted_eigenvalues, vec![6, 2, -2]);
    }

    #[test]
    fn product_parameters() {
        assert!(theorem33_set(3, 4).is_err());
        assert!(theorem33_set(4, 2).is_err());
        assert_eq!(theorem33_set(4, 6).unwrap().predicted_degree, 10);
        assert_eq!(theorem33_set(6, 6).unwrap().predicted_degree, 16);
        assert_eq!(theorem33_case_value(4, 6, 5), -4);
        assert_eq!(theorem33_case_value(6, 6, 5), -8);
        assert!(theorem33_condition(4, 4) && theorem33_hypothesis(4, 4));
        assert!(!theorem33_condition(4, 12) && !theorem33_hypothesis(4, 12));
        assert!(theorem33_condition(6, 6));
        for s in (4..=20).step_by(2) {
            for r in (4..=20).step_by(2) {
                assert_eq!(
                    theorem33_condition(s, r),
                    theorem33_stated_bound(s, r),
                    "({s},{r})"
                );
            }
        }
    }

    #[test]
    fn product_cases_match_character_sums() {
        for (s, r) in [(4, 4), (4, 6), (6, 8), (8, 4)] {
            let rep = theorem33_set(s, r).unwrap();
            let g = rep.graph.group().clone();
            let vals = crate::spectral::character_values(&rep.graph);
            for (i, v) in vals.iter().enumerate() {
                let chi = g.character_at(i);
                let case = theorem33_case(s, r, chi.0[0], chi.0[1]);
                assert_eq!(
                    v.round() as i64,
                    theorem33_case_value(s, r, case),
                    "({s},{r}) chi={chi:?}"
                );
            }
        }
    }

    #[test]
    fn assessment_conflicts() {
        assert_eq!(theorem33_assessment(4, 4, true).conflict, None);
        let a = theorem33_assessment(6, 6, false);
        assert!(a.condition && !a.verdict && a.conflict.is_some());
    }

    #[test]
    fn kloosterman_trace_small() {
        let r1 = kloosterman_trace_set(1).unwrap();
        assert_eq!(r1.connection().indices(), &[1]);
        let r2 = kloosterman_trace_set(2).unwrap();
        assert_eq!(r2.connection().indices(), &[2, 3]);
        let mut r5 = kloosterman_trace_set(5).unwrap();
        assert_eq!(r5.predicted_degree, 11);
        assert!(r5.check_spectrum(&spectrum_by_characters(&r5.graph)));
        assert!(kloosterman_trace_set(0).is_err());
        assert!(kloosterman_trace_set(21).is_err());
    }

    #[test]
    fn dij_small() {
        assert_eq!(dij_cardinality(3, 0, 0).unwrap(), 0);
        assert_eq!(dij_cardinality(3, 1, 0).unwrap(), 3);
        assert_eq!(dij_cardinality(3, 0, 1).unwrap(), 3);
        assert!(dij_cardinality(1, 1, 1).is_err());
        assert!(dij_set(3, 0, 0).is_err());
        let f = Gf2Field::new(3).unwrap();
        assert_eq!(dij_elements(&f, 0, 0).len(), 0);
        assert_eq!(
            dij_set(3, 1, 1).unwrap(),
            kloosterman_trace_set(3).unwrap().connection().clone()
        );
    }

    #[test]
    fn polar_small() {
        let r1 = polar_trace_set(1).unwrap();
        assert_eq!(r1.predicted_degree, 2);
        let mut r2 = polar_trace_set(2).unwrap();
        assert_eq!(r2.predicted_degree, 4);
        assert!(r2.check_spectrum(&spectrum_by_characters(&r2.graph)));
        assert_eq!(polar_trace_degree(3), 20);
        let big = Gf2Field::new(6).unwrap();
        let d = polar_trace_elements(&big).unwrap();
        for a in big.elements().skip(2) {
            assert_eq!(
                polar_character_sum(&big, &d, a),
                polar_case_value(&big, a).unwrap()
            );
        }
    }

    #[test]
    fn bent_small() {
        let r1 = bent_hadamard_set(1).unwrap();
        assert_eq!(r1.connection().elements(), &[GroupElement(vec![1, 1])]);
        let r2 = bent_hadamard_set(2).unwrap();
        assert_eq!(r2.predicted_degree, 6);
        assert_eq!(bent_hadamard_parameters(2), (16, 6, 2));
        assert_eq!(bent_hadamard_parameters(3), (64, 28, 12));
        assert!(bent_hadamard_set(7).is_err());
    }

    #[test]
    fn discrepancy_invariant() {
        let mut rep = theorem33_set(4, 4).unwrap();
        let bad = Spectrum::from_exact(vec![6, 3, -2]);
        assert!(!rep.check_spectrum(&bad));
        assert_eq!(rep.discrepancies.len(), 1);
        assert!(rep.check_spectrum(&spectrum_by_characters(&rep.graph)));
        assert!(rep.discrepancies.is_empty());
    }
}
