//! Spectra of Cayley graphs and the certificates derived from them.
//!
//! The eigenvalues of a Cayley graph on an abelian group are the character
//! sums `chi(C)`. These are computed by direct summation, or by a
//! Walsh-Hadamard transform when every factor is 2, and cross-checked
//! against a dense symmetric eigensolver on small graphs.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, GraphStats};
use crate::error::{Error, Result};
use crate::gf2m::walsh_hadamard;
use crate::group::{AbelianGroup, RootTable};
use crate::groupring::GdsCertificate;

/// Values within this distance of an integer are stored exactly.
pub const SNAP_TOLERANCE: f64 = 1e-6;
/// Real eigenvalues closer than `GROUP_TOLERANCE_PER_VERTEX * n` are merged.
pub const GROUP_TOLERANCE_PER_VERTEX: f64 = 1e-8;
/// Agreement required between the character and dense spectra.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Distance to the Ramanujan bound below which a real value is flagged.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;
/// Largest vertex count accepted by the dense eigensolver.
pub const MAX_ORACLE_ORDER: usize = 4096;
/// Largest vertex count accepted by the exhaustive expansion scan.
pub const MAX_EXPANSION_ORDER: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Eigenvalue {
    Exact(i64),
    Approx(f64),
}

impl Eigenvalue {
    /// Snaps to the nearest integer when within [`SNAP_TOLERANCE`].
    pub fn snap(x: f64) -> Self {
        let r = x.round();
        if (x - r).abs() < SNAP_TOLERANCE && r.abs() < 9.0e15 {
            Eigenvalue::Exact(r as i64)
        } else {
            Eigenvalue::Approx(x)
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Eigenvalue::Exact(v) => v as f64,
            Eigenvalue::Approx(x) => x,
        }
    }

    pub fn exact(&self) -> Option<i64> {
        match *self {
            Eigenvalue::Exact(v) => Some(v),
            Eigenvalue::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Eigenvalue::Exact(_))
    }

    fn close_to(&self, other: &Eigenvalue, tol: f64) -> bool {
        match (self, other) {
            (Eigenvalue::Exact(a), Eigenvalue::Exact(b)) => a == b,
            _ => (self.value() - other.value()).abs() <= tol,
        }
    }
}

impl std::fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Eigenvalue::Exact(v) => write!(f, "{v}"),
            Eigenvalue::Approx(x) => write!(f, "{x:.12}"),
        }
    }
}

/// Eigenvalues with multiplicities, sorted by decreasing value.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    entries: Vec<(Eigenvalue, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRow {
    value: f64,
    multiplicity: usize,
    exact: bool,
}

impl Spectrum {
    /// Snaps and groups a list of eigenvalues.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let tol = GROUP_TOLERANCE_PER_VERTEX * n.max(1) as f64;
        let mut exact: Vec<i64> = Vec::new();
        let mut approx: Vec<f64> = Vec::new();
        for &x in values {
            match Eigenvalue::snap(x) {
                Eigenvalue::Exact(v) => exact.push(v),
                Eigenvalue::Approx(x) => approx.push(x),
            }
        }
        let mut entries = group_exact(exact);
        approx.sort_by(|a, b| b.total_cmp(a));
        let mut i = 0;
        while i < approx.len() {
            let mut j = i + 1;
            while j < approx.len() && approx[j - 1] - approx[j] <= tol {
                j += 1;
            }
            let mean = approx[i..j].iter().sum::<f64>() / (j - i) as f64;
            entries.push((Eigenvalue::Approx(mean), j - i));
            i = j;
        }
        Self::from_entries(entries)
    }

    /// Groups integer eigenvalues.
    pub fn from_exact(values: Vec<i64>) -> Self {
        Self::from_entries(group_exact(values))
    }

    /// Takes `(value, multiplicity)` pairs as given and sorts them.
    pub fn from_entries(mut entries: Vec<(Eigenvalue, usize)>) -> Self {
        entries.retain(|&(_, m)| m > 0);
        entries.sort_by(|a, b| b.0.value().total_cmp(&a.0.value()));
        Self { entries }
    }

    pub fn entries(&self) -> &[(Eigenvalue, usize)] {
        &self.entries
    }

    /// Sum of multiplicities.
    pub fn order(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    pub fn largest(&self) -> Option<Eigenvalue> {
        self.entries.first().map(|e| e.0)
    }

    pub fn multiplicity_of(&self, value: i64) -> usize {
        self.entries
            .iter()
            .find(|(v, _)| v.exact() == Some(value))
            .map_or(0, |e| e.1)
    }

    pub fn is_all_exact(&self) -> bool {
        self.entries.iter().all(|(v, _)| v.is_exact())
    }

    /// Values within `tol` and multiplicities equal, entry by entry.
    pub fn matches(&self, other: &Spectrum, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((a, ma), (b, mb))| ma == mb && (a.value() - b.value()).abs() <= tol)
    }

    /// Multiplicity of `v` equals that of `-v` for every value.
    pub fn is_symmetric(&self) -> bool {
        let tol = GROUP_TOLERANCE_PER_VERTEX * self.order().max(1) as f64;
        let n = self.entries.len();
        (0..n).all(|i| {
            let (a, ma) = self.entries[i];
            let (b, mb) = self.entries[n - 1 - i];
            ma == mb
                && match (a, b) {
                    (Eigenvalue::Exact(x), Eigenvalue::Exact(y)) => x == -y,
                    _ => (a.value() + b.value()).abs() <= tol.max(SNAP_TOLERANCE),
                }
        })
    }

    /// `sum m * v` and `sum m * v^2`, exact when every value is an integer.
    pub fn exact_moments(&self) -> Option<(i128, i128)> {
        let mut first = 0i128;
        let mut second = 0i128;
        for (v, m) in &self.entries {
            let v = v.exact()? as i128;
            first += v * *m as i128;
            second += v * v * *m as i128;
        }
        Some((first, second))
    }

    /// Trace identities for a loop-free `k`-regular graph on `n = order()`
    /// vertices: `sum m v = 0` and `sum m v^2 = n k`. Exact for integer
    /// spectra, otherwise within a relative tolerance.
    pub fn satisfies_trace_identities(&self, k: usize) -> bool {
        let n = self.order();
        if let Some((s1, s2)) = self.exact_moments() {
            return s1 == 0 && s2 == (n * k) as i128;
        }
        let s1: f64 = self
            .entries
            .iter()
            .map(|(v, m)| v.value() * *m as f64)
            .sum();
        let s2: f64 = self
            .entries
            .iter()
            .map(|(v, m)| v.value().powi(2) * *m as f64)
            .sum();
        let tol = 1e-6 * (n * k).max(1) as f64;
        s1.abs() <= tol && (s2 - (n * k) as f64).abs() <= tol
    }

    /// Every value lies in `allowed` (exact match for integers, `tol` otherwise).
    pub fn values_within(&self, allowed: &[Eigenvalue], tol: f64) -> bool {
        self.entries
            .iter()
            .all(|(v, _)| allowed.iter().any(|a| v.close_to(a, tol)))
    }

    /// Second eigenvalue counted with multiplicity: the top value again when
    /// it is repeated, as happens for disconnected regular graphs.
    pub fn second_largest(&self) -> Option<f64> {
        match self.entries.as_slice() {
            [(top, m), ..] if *m >= 2 => Some(top.value()),
            [_, (next, _), ..] => Some(next.value()),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["value", "multiplicity", "exact"])?;
        for (v, m) in &self.entries {
            w.write_record([v.to_string(), m.to_string(), v.is_exact().to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut entries = Vec::new();
        for row in r.deserialize() {
            let row: SpectrumRow = row?;
            let value = if row.exact {
                if row.value.fract() != 0.0 {
                    return Err(Error::Malformed(format!(
                        "non-integer exact value {}",
                        row.value
                    )));
                }
                Eigenvalue::Exact(row.value as i64)
            } else {
                Eigenvalue::Approx(row.value)
            };
            entries.push((value, row.multiplicity));
        }
        Ok(Self::from_entries(entries))
    }
}

fn group_exact(mut values: Vec<i64>) -> Vec<(Eigenvalue, usize)> {
    values.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<(Eigenvalue, usize)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((Eigenvalue::Exact(last), m)) if *last == v => *m += 1,
            _ => out.push((Eigenvalue::Exact(v), 1)),
        }
    }
    out
}

/// `chi_a(C)` for `a = 2^m` characters, computed exactly by a fast transform.
fn elementary_abelian_character_values(graph: &CayleyGraph) -> Vec<i64> {
    let mut v = vec![0i64; graph.order()];
    for &c in graph.connection().indices() {
        v[c] = 1;
    }
    walsh_hadamard(&mut v);
    v
}

/// `chi_a(C)` indexed by character rank. Symmetric connection sets give
/// real sums; the imaginary part is dropped.
pub fn character_values(graph: &CayleyGraph) -> Vec<f64> {
    let group = graph.group();
    if group.is_elementary_abelian_2() {
        return elementary_abelian_character_values(graph)
            .into_iter()
            .map(|v| v as f64)
            .collect();
    }
    let roots = RootTable::new(group);
    let conn: Vec<Vec<u64>> = graph
        .connection()
        .elements()
        .iter()
        .map(|g| g.0.clone())
        .collect();
    (0..group.order())
        .into_par_iter()
        .map(|a| {
            let chi = group.character_at(a);
            conn.iter()
                .map(|c| roots.root(roots.phase(chi.coords(), c)))
                .sum::<Complex64>()
                .re
        })
        .collect()
}

/// One eigenvalue per character, snapped and grouped.
pub fn spectrum_by_characters(graph: &CayleyGraph) -> Spectrum {
    if graph.group().is_elementary_abelian_2() {
        return Spectrum::from_exact(elementary_abelian_character_values(graph));
    }
    Spectrum::from_values(&character_values(graph))
}

/// Dense adjacency matrix as an `nalgebra` matrix.
pub fn adjacency_matrix(graph: &CayleyGraph) -> Result<DMatrix<f64>> {
    let n = graph.order();
    if n > MAX_ORACLE_ORDER {
        return Err(Error::Budget(format!(
            "dense matrix for {n} > {MAX_ORACLE_ORDER} vertices"
        )));
    }
    let a = graph.dense_adjacency();
    Ok(DMatrix::from_fn(n, n, |i, j| a[i * n + j] as f64))
}

/// Eigenvalues of the dense adjacency matrix.
pub fn spectrum_oracle(graph: &CayleyGraph) -> Result<Spectrum> {
    let m = adjacency_matrix(graph)?;
    let eig = SymmetricEigen::new(m);
    Ok(Spectrum::from_values(eig.eigenvalues.as_slice()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RamanujanVerdict {
    pub is_ramanujan: bool,
    /// Largest `|lambda|` over eigenvalues with `|lambda| != k`; 0 if none.
    pub second_largest_abs: f64,
    /// `2 sqrt(k - 1)`.
    pub bound: f64,
    pub connected: bool,
    pub boundary_flag: bool,
    pub reason: String,
}

/// Connected, and `lambda^2 <= 4(k - 1)` for every eigenvalue with
/// `|lambda| != k`. Integer values are compared exactly.
pub fn ramanujan_check(spec: &Spectrum, k: usize, stats: &GraphStats) -> RamanujanVerdict {
    let bound = 2.0 * ((k as f64) - 1.0).max(0.0).sqrt();
    let limit = 4 * (k as i128 - 1);
    let mut second_largest_abs = 0.0f64;
    let mut boundary_flag = false;
    let mut violation: Option<Eigenvalue> = None;
    for &(v, _) in spec.entries() {
        let within = match v {
            Eigenvalue::Exact(x) => {
                if x.unsigned_abs() as usize == k {
                    continue;
                }
                (x as i128) * (x as i128) <= limit
            }
            Eigenvalue::Approx(x) => {
                if (x.abs() - bound).abs() < BOUNDARY_TOLERANCE {
                    boundary_flag = true;
                }
                x.abs() <= bound
            }
        };
        second_largest_abs = second_largest_abs.max(v.value().abs());
        if !within && violation.is_none() {
            violation = Some(v);
        }
    }
    let connected = stats.component_count == 1;
    let reason = if !connected {
        "not connected".to_string()
    } else if let Some(v) = violation {
        format!("eigenvalue {v} exceeds 2*sqrt(k-1) = {bound:.6}")
    } else {
        "all nontrivial eigenvalues within 2*sqrt(k-1)".to_string()
    };
    RamanujanVerdict {
        is_ramanujan: connected && violation.is_none(),
        second_largest_abs,
        bound,
        connected,
        boundary_flag,
        reason,
    }
}

/// `k - lambda_2` with `lambda_2` counted with multiplicity, so that a
/// disconnected graph has gap 0.
pub fn spectral_gap(spec: &Spectrum, k: usize) -> f64 {
    spec.second_largest().map_or(0.0, |l2| k as f64 - l2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossingBound {
    /// `(k - lambda_2) |A| |B| / n`.
    pub bound: f64,
    /// Edges with one end in each part.
    pub actual: usize,
}

/// Edge count across the partition `(omega1, omega2)` against its spectral
/// lower bound.
pub fn crossing_lemma_bound(
    graph: &CayleyGraph,
    spec: &Spectrum,
    omega1: &[usize],
    omega2: &[usize],
) -> Result<CrossingBound> {
    let n = graph.order();
    let mut side = vec![0u8; n];
    for (part, set) in [(1u8, omega1), (2u8, omega2)] {
        for &v in set {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if side[v] != 0 {
                return Err(Error::NotAPartition(format!("vertex {v} listed twice")));
            }
            side[v] = part;
        }
    }
    if let Some(v) = side.iter().position(|&s| s == 0) {
        return Err(Error::NotAPartition(format!("vertex {v} missing")));
    }
    let actual = omega1
        .iter()
        .map(|&u| graph.neighbors(u).filter(|&w| side[w] == 2).count())
        .sum();
    let gap = spectral_gap(spec, graph.degree());
    let bound = gap * omega1.len() as f64 * omega2.len() as f64 / n as f64;
    Ok(CrossingBound { bound, actual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossingTrials {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `actual - bound` observed.
    pub min_slack: f64,
}

/// Uniformly random two-part partitions from a seeded generator.
pub fn crossing_lemma_trials(
    graph: &CayleyGraph,
    spec: &Spectrum,
    trials: usize,
    seed: u64,
) -> Result<CrossingTrials> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let splits: Vec<Vec<bool>> = (0..trials)
        .map(|_| (0..graph.order()).map(|_| rng.random::<bool>()).collect())
        .collect();
    let slacks: Vec<f64> = splits
        .par_iter()
        .map(|side| {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..graph.order()).partition(|&v| side[v]);
            crossing_lemma_bound(graph, spec, &a, &b).map(|r| r.actual as f64 - r.bound)
        })
        .collect::<Result<_>>()?;
    let violations = slacks.iter().filter(|&&x| x < -1e-9).count();
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CrossingTrials {
        trials,
        violations,
        min_slack,
    })
}

/// Minimum of `|N(A) \ A| / |A|` over nonempty `A` with `|A| <= n/2`.
pub fn vertex_expansion(graph: &CayleyGraph) -> Result<f64> {
    let n = graph.order();
    if n > MAX_EXPANSION_ORDER {
        return Err(Error::Budget(format!(
            "expansion scan for {n} > {MAX_EXPANSION_ORDER} vertices"
        )));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|u| graph.neighbors(u).fold(0u32, |m, w| m | 1 << w))
        .collect();
    let (mut best_num, mut best_den) = (u32::MAX, 1u32);
    for set in 1u32..(1 << n) {
        let size = set.count_ones();
        if 2 * size as usize > n {
            continue;
        }
        let mut reach = 0u32;
        let mut rest = set;
        while rest != 0 {
            reach |= nbr[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let boundary = (reach & !set).count_ones();
        if (boundary as u64) * (best_den as u64) < (best_num as u64) * (size as u64) {
            best_num = boundary;
            best_den = size;
        }
    }
    Ok(best_num as f64 / best_den as f64)
}

/// `+-sqrt(k - mu1 + (mu1 - mu2) chi(S))` over nonprincipal characters when
/// the identity is in `S`, and `+-sqrt(k - mu2 + (mu1 - mu2) chi(S))`
/// otherwise. Sorted by decreasing value without repeats.
pub fn gds_predicted_eigenvalues(
    group: &AbelianGroup,
    cert: &GdsCertificate,
) -> Result<Vec<Eigenvalue>> {
    if group.order() != cert.n {
        return Err(Error::InvalidParameter(format!(
            "certificate order {} does not match group order {}",
            cert.n,
            group.order()
        )));
    }
    let roots = RootTable::new(group);
    let s: Vec<Vec<u64>> = cert
        .s
        .iter()
        .map(|g| group.index_of(g).map(|_| g.0.clone()))
        .collect::<Result<_>>()?;
    let base = cert.k as f64
        - if cert.identity_in_s {
            cert.mu1
        } else {
            cert.mu2
        } as f64;
    let diff = cert.mu1 as f64 - cert.mu2 as f64;
    let mut radicands: Vec<Eigenvalue> = (1..group.order())
        .into_par_iter()
        .map(|a| {
            let chi = group.character_at(a);
            let chi_s: f64 = s
                .iter()
                .map(|x| roots.root(roots.phase(chi.coords(), x)))
                .sum::<Complex64>()
                .re;
            Eigenvalue::snap(base + diff * chi_s)
        })
        .collect();
    radicands.sort_by(|a, b| a.value().total_cmp(&b.value()));
    radicands.dedup_by(|a, b| a.close_to(b, SNAP_TOLERANCE));
    let mut out = Vec::new();
    for r in radicands {
        let root = Eigenvalue::snap(r.value().max(0.0).sqrt());
        let root = match (r, root) {
            (Eigenvalue::Exact(x), Eigenvalue::Exact(y)) if y * y != x => {
                Eigenvalue::Approx((x as f64).sqrt())
            }
            (_, root) => root,
        };
        out.push(root);
        out.push(match root {
            Eigenvalue::Exact(y) => Eigenvalue::Exact(-y),
            Eigenvalue::Approx(y) => Eigenvalue::Approx(-y),
        });
    }
    out.sort_by(|a, b| b.value().partial_cmp(&a.value()).unwrap_or(Ordering::Equal));
    out.dedup_by(|a, b| a.close_to(b, SNAP_TOLERANCE));
    Ok(out)
}
