//! Exhaustive search for Ramanujan circulant graphs.
//!
//! A symmetric subset of `Z_n` without 0 is encoded by an integer `s`: bit
//! `i - 1` selects the pair `{i, n - i}` for `i = 1..=n/2`, and for even `n`
//! the top bit selects the single element `n/2`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, ConnectionSet};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::groupring::has_multiplier_minus_one;
use crate::spectral::{ramanujan_check, spectrum_by_characters, RamanujanVerdict};

pub const MIN_SEARCH_ORDER: u32 = 3;
pub const MAX_SEARCH_ORDER: u32 = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchHit {
    pub n: u32,
    pub encoding: u64,
    #[serde(rename = "C")]
    pub residues: Vec<u64>,
    pub degree: usize,
    pub second_largest_abs: f64,
    pub multiplier_minus_one: bool,
    pub verdict: RamanujanVerdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub n: u32,
    pub examined: u64,
    pub hits: u64,
}

fn check_order(n: u32) -> Result<()> {
    if !(MIN_SEARCH_ORDER..=MAX_SEARCH_ORDER).contains(&n) {
        return Err(Error::Budget(format!(
            "circulant search supports {MIN_SEARCH_ORDER} <= n <= {MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    Ok(())
}

fn check_encoding(n: u32, s: u64) -> Result<()> {
    check_order(n)?;
    if s >> (n / 2) != 0 {
        return Err(Error::InvalidParameter(format!(
            "encoding {s} has bits beyond {} pairs",
            n / 2
        )));
    }
    Ok(())
}

/// Sorted residues selected by `s`.
pub fn connection_from_encoding(n: u32, s: u64) -> Result<Vec<u64>> {
    check_encoding(n, s)?;
    let n64 = n as u64;
    let mut c: Vec<u64> = (1..=n64 / 2)
        .filter(|i| (s >> (i - 1)) & 1 == 1)
        .flat_map(|i| [i, n64 - i])
        .collect();
    c.sort_unstable();
    c.dedup();
    Ok(c)
}

/// Inverse of [`connection_from_encoding`] for symmetric sets without 0.
pub fn encoding_of_residues(n: u32, residues: &[u64]) -> Result<u64> {
    check_order(n)?;
    let n64 = n as u64;
    let mut s = 0u64;
    for &c in residues {
        if c == 0 || c >= n64 {
            return Err(Error::InvalidParameter(format!(
                "residue {c} not in 1..{n}"
            )));
        }
        if !residues.contains(&(n64 - c)) {
            return Err(Error::AsymmetricConnectionSet(format!("({c})")));
        }
        s |= 1 << (c.min(n64 - c) - 1);
    }
    Ok(s)
}

/// `|C|` for the set encoded by `s`.
pub fn degree_of_encoding(n: u32, s: u64) -> Result<usize> {
    check_encoding(n, s)?;
    let mid = if n.is_multiple_of(2) {
        (s >> (n / 2 - 1)) & 1
    } else {
        0
    };
    Ok(2 * s.count_ones() as usize - mid as usize)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Certifies one encoded circulant; `None` when it is not a hit.
pub fn evaluate_encoding(n: u32, s: u64, min_degree: usize) -> Result<Option<SearchHit>> {
    let residues = connection_from_encoding(n, s)?;
    if residues.len() < min_degree.max(1) {
        return Ok(None);
    }
    // <C> = Z_n exactly when gcd(n, C) = 1.
    if residues.iter().fold(n as u64, |g, &c| gcd(g, c)) != 1 {
        return Ok(None);
    }
    certify_residues(n, &residues)
}

/// Builds the circulant on the given residues and keeps it if it certifies.
pub fn certify_residues(n: u32, residues: &[u64]) -> Result<Option<SearchHit>> {
    let group = AbelianGroup::cyclic(n as u64)?;
    let elements: Vec<GroupElement> = residues.iter().map(|&c| GroupElement(vec![c])).collect();
    let graph = CayleyGraph::from_connection(ConnectionSet::new(group.clone(), elements.clone())?);
    let spec = spectrum_by_characters(&graph);
    let verdict = ramanujan_check(&spec, graph.degree(), &graph.stats());
    if !verdict.is_ramanujan {
        return Ok(None);
    }
    Ok(Some(SearchHit {
        n,
        encoding: encoding_of_residues(n, residues)?,
        residues: graph
            .connection()
            .elements()
            .iter()
            .map(|g| g.0[0])
            .collect(),
        degree: graph.degree(),
        second_largest_abs: verdict.second_largest_abs,
        multiplier_minus_one: has_multiplier_minus_one(&group, &elements)?,
        verdict,
    }))
}

/// All encodings `s = 1 .. 2^{n/2}` in increasing order, emitting certified
/// Ramanujan circulants of degree at least `min_degree`.
pub fn search_ramanujan_circulant<F>(
    n: u32,
    min_degree: usize,
    mut emit: F,
) -> Result<SearchSummary>
where
    F: FnMut(SearchHit),
{
    check_order(n)?;
    let end = 1u64 << (n / 2);
    const BLOCK: u64 = 1 << 12;
    let mut summary = SearchSummary {
        n,
        ..Default::default()
    };
    let mut start = 1u64;
    while start < end {
        let stop = (start + BLOCK).min(end);
        let found: Vec<SearchHit> = (start..stop)
            .into_par_iter()
            .map(|s| evaluate_encoding(n, s, min_degree))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        summary.examined += stop - start;
        for hit in found {
            summary.hits += 1;
            emit(hit);
        }
        start = stop;
    }
    Ok(summary)
}

/// One JSON object per line.
pub fn write_hits_jsonl<W: Write>(out: &mut W, hits: &[SearchHit]) -> Result<()> {
    for h in hits {
        serde_json::to_writer(&mut *out, h)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow {
    n: u32,
    s: u64,
    k: usize,
    lambda2: f64,
    ramanujan: bool,
}

/// `n,s,k,lambda2,ramanujan` with `lambda2` the largest nontrivial `|lambda|`.
pub fn hits_to_csv(hits: &[SearchHit]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for h in hits {
        w.serialize(CsvRow {
            n: h.n,
            s: h.encoding,
            k: h.degree,
            lambda2: h.second_largest_abs,
            ramanujan: h.verdict.is_ramanujan,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))
}
