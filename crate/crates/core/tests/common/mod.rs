#![allow(dead_code)]

use cayley_core::cayley::{CayleyGraph, ConnectionSet};
use cayley_core::constructions::{
    bent_hadamard_set, kloosterman_trace_set, polar_trace_set, theorem33_set,
};
use cayley_core::{AbelianGroup, GroupElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CorpusGraph {
    pub name: String,
    pub graph: CayleyGraph,
}

pub fn circulant(n: u64, c: &[u64]) -> CayleyGraph {
    let g = AbelianGroup::cyclic(n).unwrap();
    CayleyGraph::build(&g, c.iter().map(|&x| GroupElement(vec![x])).collect()).unwrap()
}

/// Random symmetric identity-free subset of `group`, nonempty.
pub fn random_symmetric(group: &AbelianGroup, rng: &mut ChaCha8Rng, density: f64) -> ConnectionSet {
    loop {
        let mut picked = vec![false; group.order()];
        for i in 1..group.order() {
            let j = group.neg_index(i);
            if j >= i && rng.random::<f64>() < density {
                picked[i] = true;
                picked[j] = true;
            }
        }
        let idx: Vec<usize> = (0..group.order()).filter(|&i| picked[i]).collect();
        if let Ok(c) = ConnectionSet::from_indices(group.clone(), idx) {
            return c;
        }
    }
}

/// Every graph family the suite builds, all with at most 1024 vertices.
pub fn corpus() -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    let mut push = |name: String, graph: CayleyGraph| out.push(CorpusGraph { name, graph });

    push("Z20 {4,8,12,16}".into(), circulant(20, &[4, 8, 12, 16]));
    push("Z20 {2,6,14,18}".into(), circulant(20, &[2, 6, 14, 18]));
    push(
        "Z20 {3,4,8,12,16,17}".into(),
        circulant(20, &[3, 4, 8, 12, 16, 17]),
    );
    push(
        "Z20 {1,3,4,7,8,9,11,12,13,16,17,19}".into(),
        circulant(20, &[1, 3, 4, 7, 8, 9, 11, 12, 13, 16, 17, 19]),
    );
    push(
        "Z13 quadratic residues".into(),
        circulant(13, &[1, 3, 4, 9, 10, 12]),
    );
    push("Z5 quadratic residues".into(), circulant(5, &[1, 4]));
    for n in 3..=10u64 {
        push(format!("cycle C{n}"), circulant(n, &[1, n - 1]));
    }
    for n in 2..=8u64 {
        let all: Vec<u64> = (1..n).collect();
        push(format!("complete K{n}"), circulant(n, &all));
    }
    for s in (4..=12u64).step_by(2) {
        for r in (s..=12).step_by(2) {
            push(
                format!("product set ({s},{r})"),
                theorem33_set(s, r).unwrap().graph,
            );
        }
    }
    for m in 1..=10 {
        push(
            format!("kloosterman trace m={m}"),
            kloosterman_trace_set(m).unwrap().graph,
        );
    }
    for m in 1..=5 {
        push(
            format!("polar trace m={m}"),
            polar_trace_set(m).unwrap().graph,
        );
    }
    for u in 1..=5 {
        push(format!("bent u={u}"), bent_hadamard_set(u).unwrap().graph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let shapes: [&[u64]; 10] = [
        &[12],
        &[17],
        &[30],
        &[3, 6],
        &[4, 4],
        &[2, 2, 2, 2],
        &[5, 5],
        &[2, 3, 4],
        &[6, 10],
        &[2, 2, 2, 2, 2, 2],
    ];
    for (i, factors) in shapes.iter().enumerate() {
        let group = AbelianGroup::new(factors.to_vec()).unwrap();
        let density = 0.2 + 0.06 * i as f64;
        let c = random_symmetric(&group, &mut rng, density);
        push(
            format!("random {factors:?} #{i}"),
            CayleyGraph::from_connection(c),
        );
    }
    out
}
