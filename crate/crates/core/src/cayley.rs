//! Cayley graphs `u ~ v iff u - v in C` over finite abelian groups.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

/// A symmetric, identity-free, nonempty subset of a group. Elements are kept
/// sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSet {
    group: AbelianGroup,
    elements: Vec<GroupElement>,
    indices: Vec<usize>,
}

impl ConnectionSet {
    pub fn new(group: AbelianGroup, elements: Vec<GroupElement>) -> Result<Self> {
        let mut indices = Vec::with_capacity(elements.len());
        for g in &elements {
            indices.push(group.index_of(g)?);
        }
        Self::from_indices(group, indices)
    }

    pub fn from_indices(group: AbelianGroup, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyConnectionSet);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= group.order()) {
            return Err(Error::InvalidParameter(format!(
                "element rank {bad} out of range"
            )));
        }
        indices.sort_unstable();
        indices.dedup();
        if indices[0] == 0 {
            return Err(Error::IdentityInConnectionSet);
        }
        let mut member = vec![false; group.order()];
        for &i in &indices {
            member[i] = true;
        }
        if let Some(&bad) = indices.iter().find(|&&i| !member[group.neg_index(i)]) {
            return Err(Error::AsymmetricConnectionSet(
                group.element_at(bad).to_string(),
            ));
        }
        let elements = indices.iter().map(|&i| group.element_at(i)).collect();
        Ok(Self {
            group,
            elements,
            indices,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Element ranks in increasing order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Canonical graph file: group factors plus connection-set coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub factors: Vec<u64>,
    pub connection_set: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphStats {
    pub component_count: usize,
    pub bipartite: bool,
    /// `None` when the graph is disconnected.
    pub diameter: Option<usize>,
}

/// `(v, k, lambda, mu)`. For complete graphs there are no nonadjacent pairs
/// and `mu` is reported as 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParameters {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParameters {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.v, self.k, self.lambda, self.mu)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    connection: ConnectionSet,
    member: Vec<bool>,
}

impl CayleyGraph {
    pub fn build(group: &AbelianGroup, elements: Vec<GroupElement>) -> Result<Self> {
        Ok(Self::from_connection(ConnectionSet::new(
            group.clone(),
            elements,
        )?))
    }

    pub fn from_connection(connection: ConnectionSet) -> Self {
        let mut member = vec![false; connection.group.order()];
        for &i in &connection.indices {
            member[i] = true;
        }
        Self { connection, member }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let group = AbelianGroup::new(json.factors.clone())?;
        let elements = json
            .connection_set
            .iter()
            .map(|c| group.element(c.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(&group, elements)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            factors: self.group().factors().to_vec(),
            connection_set: self
                .connection
                .elements
                .iter()
                .map(|g| g.0.clone())
                .collect(),
        }
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.connection.group
    }

    pub fn order(&self) -> usize {
        self.member.len()
    }

    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.member[self.group().sub_index(u, v)]
    }

    /// `u + c` for each `c` in the connection set, in connection-set order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let group = self.group();
        self.connection
            .indices
            .iter()
            .map(move |&c| group.add_index(u, c))
    }

    /// Component index of every vertex, numbered in order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.order();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn components(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    /// Two-colors each component by BFS parity.
    pub fn is_bipartite(&self) -> bool {
        let n = self.order();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if color[w] == u8::MAX {
                        color[w] = color[u] ^ 1;
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// BFS distances from `source`; unreachable vertices get `None`.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Eccentricity of the identity, which equals the diameter since
    /// translations act transitively. `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        self.distances_from(0)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn stats(&self) -> GraphStats {
        let component_count = self.components();
        GraphStats {
            component_count,
            bipartite: self.is_bipartite(),
            diameter: if component_count == 1 {
                self.diameter()
            } else {
                None
            },
        }
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.neighbors(u)
            .filter(|&w| self.is_adjacent(w, v))
            .count()
    }

    /// Strong-regularity test on pairs `(0, v)`, sufficient by transitivity.
    pub fn srg_check(&self) -> Result<Option<SrgParameters>> {
        let components = self.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        let mut lambda = None;
        let mut mu = None;
        for v in 1..self.order() {
            let count = self.common_neighbors(0, v);
            let slot = if self.member[v] { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(count),
                Some(c) if c == count => {}
                Some(_) => return Ok(None),
            }
        }
        Ok(Some(SrgParameters {
            v: self.order(),
            k: self.degree(),
            lambda: lambda.unwrap_or(0),
            mu: mu.unwrap_or(0),
        }))
    }

    /// Row-major 0/1 adjacency matrix.
    pub fn dense_adjacency(&self) -> Vec<u8> {
        let n = self.order();
        let mut a = vec![0u8; n * n];
        for u in 0..n {
            for w in self.neighbors(u) {
                a[u * n + w] = 1;
            }
        }
        a
    }

    /// Undirected DOT with vertices labeled by coordinates.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        for u in 0..self.order() {
            let _ = writeln!(out, "  {u} [label=\"{}\"];", self.group().element_at(u));
        }
        for u in 0..self.order() {
            let mut nbrs: Vec<usize> = self.neighbors(u).filter(|&w| w > u).collect();
            nbrs.sort_unstable();
            for w in nbrs {
                let _ = writeln!(out, "  {u} -- {w};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant(n: u64, c: &[u64]) -> CayleyGraph {
        let g = AbelianGroup::cyclic(n).unwrap();
        CayleyGraph::build(&g, c.iter().map(|&x| GroupElement(vec![x])).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_sets() {
        let g = AbelianGroup::cyclic(5).unwrap();
        let e = |x: u64| GroupElement(vec![x]);
        assert_eq!(
            CayleyGraph::build(&g, vec![e(0), e(1), e(4)]),
            Err(Error::IdentityInConnectionSet)
        );
        assert!(matches!(
            CayleyGraph::build(&g, vec![e(1)]),
            Err(Error::AsymmetricConnectionSet(_))
        ));
        assert_eq!(
            CayleyGraph::build(&g, vec![]),
            Err(Error::EmptyConnectionSet)
        );
        assert!(CayleyGraph::build(&g, vec![e(7)]).is_err());
    }

    #[test]
    fn four_cycle() {
        let c4 = circulant(4, &[1, 3]);
        assert_eq!(c4.degree(), 2);
        assert_eq!(
            c4.stats(),
            GraphStats {
                component_count: 1,
                bipartite: true,
                diameter: Some(2)
            }
        );
        assert!(c4.is_adjacent(0, 1) && !c4.is_adjacent(0, 2));
        assert_eq!(c4.common_neighbors(0, 2), 2);
    }

    #[test]
    fn example_one_components() {
        let g = circulant(20, &[4, 8, 12, 16]);
        assert_eq!(g.components(), 4);
        assert_eq!(g.diameter(), None);
        assert_eq!(g.stats().diameter, None);
        // each component is K_5
        let labels = g.component_labels();
        for u in 0..20 {
            for v in 0..20 {
                if u != v {
                    assert_eq!(labels[u] == labels[v], g.is_adjacent(u, v));
                }
            }
        }
        assert_eq!(g.srg_check(), Err(Error::Disconnected { components: 4 }));
    }

    #[test]
    fn srg_small_cycles() {
        let c5 = circulant(5, &[1, 4]);
        assert_eq!(c5.srg_check().unwrap().unwrap().as_tuple(), (5, 2, 0, 1));
        assert_eq!(circulant(6, &[1, 5]).srg_check().unwrap(), None);
        let k4 = circulant(4, &[1, 2, 3]);
        assert_eq!(k4.srg_check().unwrap().unwrap().as_tuple(), (4, 3, 2, 0));
    }

    #[test]
    fn json_and_dot() {
        let g = circulant(4, &[3, 1]);
        let json = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(json, r#"{"factors":[4],"connection_set":[[1],[3]]}"#);
        assert_eq!(CayleyGraph::from_json_str(&json).unwrap(), g);
        assert!(
            CayleyGraph::from_json_str(r#"{"factors":[4],"connection_set":[[1]]}"#)
                .unwrap_err()
                .is_invariant_violation()
        );
        assert!(CayleyGraph::from_json_str("{").is_err());
        let dot = g.to_dot();
        assert!(
            dot.contains("0 -- 1;") && dot.contains("0 -- 3;") && dot.contains("label=\"(2)\"")
        );
        assert_eq!(dot.matches("--").count(), 4);
    }

    #[test]
    fn dense_adjacency_symmetric() {
        let g = circulant(7, &[1, 2, 5, 6]);
        let a = g.dense_adjacency();
        for u in 0..7 {
            assert_eq!(
                a[u * 7..u * 7 + 7]
                    .iter()
                    .map(|&x| x as usize)
                    .sum::<usize>(),
                4
            );
            for v in 0..7 {
                assert_eq!(a[u * 7 + v], a[v * 7 + u]);
            }
        }
    }
}
