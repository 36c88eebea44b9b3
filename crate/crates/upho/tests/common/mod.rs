//! Shared fixtures and independent oracles for the integration suites.
// each test binary compiles its own copy and uses a different subset
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use upho::constructions::{
    b_construction, chain, grid_construction, k_ary_tree, theorem12_construction,
    BConstructionSpec, GridSpec,
};
use upho::monoid::{monoid_poset, s_family, MonoidPresentation};
use upho::planar::{planar_construction, MergeSchedule};
use upho::poset::{RankedPoset, Vertex};

pub fn bowtie() -> RankedPoset {
    RankedPoset::new(
        vec![vec![0], vec![1, 2], vec![3, 4]],
        vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)],
        None,
    )
    .unwrap()
}

pub fn single_vertex() -> RankedPoset {
    RankedPoset::new(vec![vec![0]], vec![], None).unwrap()
}

pub fn grid(a: &[u64], depth: usize) -> RankedPoset {
    grid_construction(&GridSpec::new(a.to_vec(), depth).unwrap())
}

pub fn planar(b: usize, counts: &[(usize, usize)], depth: usize) -> RankedPoset {
    let schedule = MergeSchedule::new(b, counts.iter().copied().collect()).unwrap();
    planar_construction(&schedule, depth).unwrap()
}

pub fn stern_poset(max_len: usize) -> RankedPoset {
    monoid_poset(&MonoidPresentation::stern(), max_len).unwrap()
}

pub fn sfamily_poset(indices: &[usize], max_len: usize) -> RankedPoset {
    let indices: BTreeSet<usize> = indices.iter().copied().collect();
    monoid_poset(&s_family(&indices).unwrap(), max_len).unwrap()
}

/// The standing test corpus: a spread of constructions plus the
/// pathological fixtures.
pub fn corpus() -> Vec<(String, RankedPoset)> {
    vec![
        ("single".into(), single_vertex()),
        ("chain5".into(), chain(5)),
        ("tree2_4".into(), k_ary_tree(2, 4)),
        ("tree3_3".into(), k_ary_tree(3, 3)),
        ("grid_1_1_4".into(), grid(&[1, 1], 4)),
        ("grid_1_2_4".into(), grid(&[1, 2], 4)),
        ("grid_2_5".into(), grid(&[2], 5)),
        (
            "bcon_1_b2_4".into(),
            b_construction(&BConstructionSpec::new(vec![1], 2, 4).unwrap()),
        ),
        (
            "bcon_12_b2_4".into(),
            b_construction(&BConstructionSpec::new(vec![1, 2], 2, 4).unwrap()),
        ),
        ("planar_3_21_31_5".into(), planar(3, &[(2, 1), (3, 1)], 5)),
        ("planar_2_21_5".into(), planar(2, &[(2, 1)], 5)),
        ("bowtie".into(), bowtie()),
        ("stern_3".into(), stern_poset(3)),
        ("sfamily_2_6".into(), sfamily_poset(&[2], 6)),
        (
            "product_chain_chain_4".into(),
            chain(4).product(&chain(4), 4).unwrap(),
        ),
        (
            "theorem12_1_23_3".into(),
            theorem12_construction(&[1], &[2, 3], 3).unwrap(),
        ),
    ]
}

/// Exhaustive rank-respecting backtracking matcher, independent of the
/// color-refinement path: assigns vertices in rank-major order, requiring
/// the covered sets to correspond exactly.
pub fn brute_force_isomorphic(p: &RankedPoset, q: &RankedPoset) -> bool {
    if p.rank_sizes() != q.rank_sizes() || p.covers().len() != q.covers().len() {
        return false;
    }
    let order: Vec<Vertex> = p.ranks().iter().flatten().copied().collect();
    let mut map = vec![usize::MAX; p.num_vertices()];
    let mut used = vec![false; q.num_vertices()];

    fn extend(
        p: &RankedPoset,
        q: &RankedPoset,
        order: &[Vertex],
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        let rank = p.rank_of(v).unwrap();
        let image_down: BTreeSet<Vertex> = p
            .down_neighbors(v)
            .iter()
            .map(|&d| map[d])
            .collect();
        for &w in &q.ranks()[rank] {
            if used[w] {
                continue;
            }
            let down_w: BTreeSet<Vertex> = q.down_neighbors(w).iter().copied().collect();
            if down_w != image_down {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(p, q, order, i + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    extend(p, q, &order, 0, &mut map, &mut used)
}

/// Randomly renumbers the vertices and shuffles the order inside each rank;
/// the result is isomorphic to the input by construction.
pub fn random_relabel(p: &RankedPoset, seed: u64) -> RankedPoset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.num_vertices();
    let mut new_ids: Vec<Vertex> = (0..n).collect();
    new_ids.shuffle(&mut rng);
    let mut ranks: Vec<Vec<Vertex>> = p
        .ranks()
        .iter()
        .map(|rank| rank.iter().map(|&v| new_ids[v]).collect())
        .collect();
    for rank in &mut ranks {
        rank.shuffle(&mut rng);
    }
    let covers: Vec<(Vertex, Vertex)> = p
        .covers()
        .iter()
        .map(|&(u, v)| (new_ids[u], new_ids[v]))
        .collect();
    let embedding = p.embedding().map(|emb| {
        emb.iter()
            .map(|order| order.iter().map(|&v| new_ids[v]).collect())
            .collect()
    });
    RankedPoset::new(ranks, covers, embedding).expect("relabeling keeps the poset valid")
}

/// Sanity guard used by the suites: a witness really is a graded
/// isomorphism.
pub fn witness_is_valid(p: &RankedPoset, q: &RankedPoset, witness: &[Vertex]) -> bool {
    if witness.len() != p.num_vertices() {
        return false;
    }
    let distinct: HashSet<_> = witness.iter().collect();
    if distinct.len() != witness.len() {
        return false;
    }
    for v in 0..p.num_vertices() {
        if p.rank_of(v).unwrap() != q.rank_of(witness[v]).unwrap() {
            return false;
        }
    }
    let q_edges: HashSet<(Vertex, Vertex)> = q.covers().iter().copied().collect();
    p.covers().len() == q.covers().len()
        && p.covers()
            .iter()
            .all(|&(u, v)| q_edges.contains(&(witness[u], witness[v])))
}
