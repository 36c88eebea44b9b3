//! Planar upho poset construction and level-planarity machinery.
//!
//! The construction realizes rank-generating functions of the form
//! `1 / (1 - bx + a_2 x^2 + ... + a_n x^n)` with nonnegative `a_i` summing
//! to at most `b - 1`. It grows rank by rank: every vertex tentatively
//! receives `b` ordered children, then scheduled merge events combine
//! adjacent tentative pairs across subtree boundaries, producing vertices
//! that cover two others. A merge event propagates to every order filter,
//! which is what keeps the result upho.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{MeetResult, PosetError, RankedPoset, Vertex};
use crate::series::IntPolynomial;

/// Default cap on rank width for the exhaustive embedding search.
pub const DEFAULT_WIDTH_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("invalid merge schedule: {0}")]
    ScheduleInvalid(String),
    #[error("poset has no embedding")]
    MissingEmbedding,
    #[error("rank {rank} has width {width}, beyond the search cap {cap}")]
    WidthLimitExceeded {
        rank: usize,
        width: usize,
        cap: usize,
    },
    #[error("structure violation at vertex {vertex}: {reason}")]
    StructureError { vertex: Vertex, reason: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// The data `(b; a_2, ..., a_n)` driving the planar construction, with a
/// deterministic assignment of merge events to atom-pair boundaries.
///
/// Each event `(rank r, pair index p)` creates one root-bifurcated vertex
/// on rank r above the boundary between atoms p and p+1 (1-based, counting
/// from the left), and replays in every order filter. Pair indices are
/// pairwise distinct, which both realizes the `sum a_i <= b - 1` bound and
/// keeps simultaneous merge targets disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeSchedule {
    b: usize,
    counts: BTreeMap<usize, usize>,
    events: Vec<(usize, usize)>,
}

impl MergeSchedule {
    /// Builds the canonical schedule for up-degree `b` and root-bifurcation
    /// counts `a_r` (map rank -> count): events consume pair indices left to
    /// right in increasing rank order.
    pub fn new(b: usize, counts: BTreeMap<usize, usize>) -> Result<Self, PlanarError> {
        if b == 0 {
            return Err(PlanarError::ScheduleInvalid("b must be at least 1".into()));
        }
        let counts: BTreeMap<usize, usize> =
            counts.into_iter().filter(|&(_, c)| c > 0).collect();
        if let Some((&r, _)) = counts.iter().find(|&(&r, _)| r < 2) {
            return Err(PlanarError::ScheduleInvalid(format!(
                "a_{r} must be 0: a rank-{r} vertex cannot cover two vertices"
            )));
        }
        let total: usize = counts.values().sum();
        if total + 1 > b {
            return Err(PlanarError::ScheduleInvalid(format!(
                "sum of a_i is {total}, exceeding b - 1 = {}",
                b - 1
            )));
        }
        let mut events = Vec::with_capacity(total);
        let mut pair = 1;
        for (&rank, &count) in &counts {
            for _ in 0..count {
                events.push((rank, pair));
                pair += 1;
            }
        }
        Ok(MergeSchedule { b, counts, events })
    }

    /// Builds a schedule from explicit events, keeping their order. Event
    /// order never changes the constructed poset (targets are disjoint);
    /// this entry point exists to exercise exactly that.
    pub fn from_events(b: usize, events: Vec<(usize, usize)>) -> Result<Self, PlanarError> {
        if b == 0 {
            return Err(PlanarError::ScheduleInvalid("b must be at least 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &(r, p) in &events {
            if r < 2 {
                return Err(PlanarError::ScheduleInvalid(format!(
                    "event at rank {r}: merges start at rank 2"
                )));
            }
            if p == 0 || p >= b {
                return Err(PlanarError::ScheduleInvalid(format!(
                    "pair index {p} outside 1..={}",
                    b - 1
                )));
            }
            if !seen.insert(p) {
                return Err(PlanarError::ScheduleInvalid(format!(
                    "pair index {p} used twice"
                )));
            }
            *counts.entry(r).or_insert(0) += 1;
        }
        Ok(MergeSchedule { b, counts, events })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Root-bifurcation counts per rank (ranks with count 0 omitted).
    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn events(&self) -> &[(usize, usize)] {
        &self.events
    }

    /// The polynomial `1 - bx + a_2 x^2 + ... + a_n x^n` whose reciprocal
    /// the construction realizes.
    pub fn denominator(&self) -> IntPolynomial {
        let max_rank = self.counts.keys().max().copied().unwrap_or(1);
        let mut coeffs = vec![num_bigint::BigInt::from(0); max_rank + 1];
        coeffs[0] = 1.into();
        coeffs[1] = -num_bigint::BigInt::from(self.b as i64);
        for (&r, &c) in &self.counts {
            coeffs[r] = (c as i64).into();
        }
        IntPolynomial::new(coeffs)
    }
}

/// Builds the planar construction for a merge schedule, truncated to
/// `depth` ranks, with its left-to-right embedding.
///
/// Rank i starts as `b` tentative children per rank-(i-1) vertex. For every
/// vertex v on rank j = i - r and every event (r, p), the tentative pair
/// straddling the boundary between the subtrees above children p and p+1 of
/// v is merged: the rightmost tentative child of the right-extreme
/// rank-(i-1) descendant of child p with the leftmost tentative child of
/// the left-extreme rank-(i-1) descendant of child p+1. The merged vertex
/// takes the embedding slot between the two, covering both. Rank sizes
/// then satisfy `r_i = b r_{i-1} - sum_k a_k r_{i-k}`.
pub fn planar_construction(
    schedule: &MergeSchedule,
    depth: usize,
) -> Result<RankedPoset, PlanarError> {
    if depth == 0 {
        return Err(PlanarError::Poset(PosetError::InsufficientDepth {
            needed: 1,
            available: 0,
        }));
    }
    let b = schedule.b();
    let mut sizes = vec![1usize];
    // children[r][pos]: positions on rank r+1 covering vertex pos of rank r,
    // left to right.
    let mut children: Vec<Vec<Vec<usize>>> = Vec::new();
    // covers as ((rank, pos), pos on rank+1)
    let mut covers_by_rank: Vec<Vec<(usize, usize)>> = Vec::new();

    for i in 1..depth {
        let parents = sizes[i - 1];
        let slots = parents * b;
        let mut merge_start = vec![false; slots];
        let mut in_merge = vec![false; slots];

        for &(r, p) in schedule.events() {
            if r > i {
                continue;
            }
            let j = i - r;
            for v in 0..sizes[j] {
                let kids = &children[j][v];
                // right-extreme rank-(i-1) descendant of child p of v
                let mut rpos = kids[p - 1];
                for rk in j + 1..i - 1 {
                    rpos = *children[rk][rpos].last().unwrap();
                }
                // left-extreme rank-(i-1) descendant of child p+1 of v
                let mut lpos = kids[p];
                for rk in j + 1..i - 1 {
                    lpos = *children[rk][lpos].first().unwrap();
                }
                let t1 = rpos * b + (b - 1);
                let t2 = lpos * b;
                if t2 != t1 + 1 {
                    return Err(PlanarError::StructureError {
                        vertex: t1,
                        reason: format!(
                            "merge targets for event ({r}, {p}) are not adjacent on rank {i}"
                        ),
                    });
                }
                if in_merge[t1] || in_merge[t2] {
                    return Err(PlanarError::StructureError {
                        vertex: t1,
                        reason: format!("conflicting merges on rank {i}"),
                    });
                }
                merge_start[t1] = true;
                in_merge[t1] = true;
                in_merge[t2] = true;
            }
        }

        let mut kid_lists: Vec<Vec<usize>> = vec![Vec::with_capacity(b); parents];
        let mut rank_covers = Vec::with_capacity(slots);
        let mut pos = 0usize;
        let mut t = 0usize;
        while t < slots {
            let parent = t / b;
            if merge_start[t] {
                let right_parent = (t + 1) / b;
                kid_lists[parent].push(pos);
                kid_lists[right_parent].push(pos);
                rank_covers.push((parent, pos));
                rank_covers.push((right_parent, pos));
                pos += 1;
                t += 2;
            } else {
                kid_lists[parent].push(pos);
                rank_covers.push((parent, pos));
                pos += 1;
                t += 1;
            }
        }
        children.push(kid_lists);
        covers_by_rank.push(rank_covers);
        sizes.push(pos);
    }

    let mut rank_start = Vec::with_capacity(depth);
    let mut next = 0;
    for &sz in &sizes {
        rank_start.push(next);
        next += sz;
    }
    let ranks: Vec<Vec<Vertex>> = sizes
        .iter()
        .zip(&rank_start)
        .map(|(&sz, &start)| (start..start + sz).collect())
        .collect();
    let mut covers = Vec::new();
    for (i, rank_covers) in covers_by_rank.iter().enumerate() {
        for &(u, v) in rank_covers {
            covers.push((rank_start[i] + u, rank_start[i + 1] + v));
        }
    }
    let embedding = Some(ranks.clone());
    Ok(RankedPoset::new(ranks, covers, embedding)
        .expect("planar construction output is always a valid poset"))
}

/// Two cover edges between the same consecutive ranks, drawn crossing.
pub type CrossingPair = ((Vertex, Vertex), (Vertex, Vertex));

/// Lists every pair of crossing edges of the stored embedding. Edges cross
/// iff their endpoints strictly interleave; edges sharing an endpoint never
/// cross. An empty list means the layout is planar.
pub fn check_embedding(p: &RankedPoset) -> Result<Vec<CrossingPair>, PlanarError> {
    let embedding = p.embedding().ok_or(PlanarError::MissingEmbedding)?;
    let mut pos = vec![0usize; p.num_vertices()];
    for order in embedding {
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
    }
    let mut edges_by_rank: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); p.depth()];
    for &(u, v) in p.covers() {
        edges_by_rank[p.rank_of(u).unwrap()].push((u, v));
    }
    let mut crossings = Vec::new();
    for edges in &edges_by_rank {
        for (a, &(u1, v1)) in edges.iter().enumerate() {
            for &(u2, v2) in &edges[a + 1..] {
                if u1 == u2 || v1 == v2 {
                    continue;
                }
                if (pos[u1] < pos[u2]) != (pos[v1] < pos[v2]) {
                    crossings.push(((u1, v1), (u2, v2)));
                }
            }
        }
    }
    Ok(crossings)
}

/// Exhaustive search for a level-planar embedding: per-rank left-to-right
/// orders are extended rank by rank, pruning as soon as a crossing appears.
/// Sound and complete for the truncation; exponential in rank width, hence
/// the cap.
pub fn find_embedding(
    p: &RankedPoset,
    width_cap: usize,
) -> Result<Option<Vec<Vec<Vertex>>>, PlanarError> {
    for (rank, r) in p.ranks().iter().enumerate() {
        if r.len() > width_cap {
            return Err(PlanarError::WidthLimitExceeded {
                rank,
                width: r.len(),
                cap: width_cap,
            });
        }
    }
    let mut orders: Vec<Vec<Vertex>> = Vec::new();
    if extend_rank(p, 0, &mut orders) {
        Ok(Some(orders))
    } else {
        Ok(None)
    }
}

fn extend_rank(p: &RankedPoset, rank: usize, orders: &mut Vec<Vec<Vertex>>) -> bool {
    if rank == p.depth() {
        return true;
    }
    let mut verts = p.ranks()[rank].clone();
    verts.sort_unstable();
    let prev_pos: BTreeMap<Vertex, usize> = if rank == 0 {
        BTreeMap::new()
    } else {
        orders[rank - 1]
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect()
    };
    let mut chosen = Vec::with_capacity(verts.len());
    let mut used = vec![false; verts.len()];
    place_vertex(p, rank, &verts, &prev_pos, &mut chosen, &mut used, orders)
}

fn place_vertex(
    p: &RankedPoset,
    rank: usize,
    verts: &[Vertex],
    prev_pos: &BTreeMap<Vertex, usize>,
    chosen: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
    orders: &mut Vec<Vec<Vertex>>,
) -> bool {
    if chosen.len() == verts.len() {
        orders.push(chosen.clone());
        if extend_rank(p, rank + 1, orders) {
            return true;
        }
        orders.pop();
        return false;
    }
    'candidates: for (i, &cand) in verts.iter().enumerate() {
        if used[i] {
            continue;
        }
        // cand would sit right of everything placed: an edge (w, cand)
        // crosses an edge (w', u) of a placed u iff w' is strictly right
        // of w below.
        for &w in p.down_neighbors(cand) {
            let pw = prev_pos[&w];
            for &u in chosen.iter() {
                for &w2 in p.down_neighbors(u) {
                    if prev_pos[&w2] > pw {
                        continue 'candidates;
                    }
                }
            }
        }
        used[i] = true;
        chosen.push(cand);
        if place_vertex(p, rank, verts, prev_pos, chosen, used, orders) {
            return true;
        }
        chosen.pop();
        used[i] = false;
    }
    false
}

/// Bifurcation census of a poset truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeClassification {
    /// Per rank: vertices covering two others whose meet is the minimum.
    pub root_bifurcated_per_rank: Vec<usize>,
    /// Per rank: vertices covering two others whose meet is not the minimum.
    pub bifurcated_per_rank: Vec<usize>,
    /// For every down-degree-2 vertex, the meet of its two covered vertices.
    pub merge_meets: BTreeMap<Vertex, Vertex>,
}

/// Classifies every vertex of down-degree 2 by the meet of the two vertices
/// it covers: meet at the minimum means root-bifurcated, anything else
/// bifurcated. Down-degree above 2 or a non-unique meet is a structure
/// violation.
pub fn classify_merges(p: &RankedPoset) -> Result<MergeClassification, PlanarError> {
    let mut root_bif = vec![0usize; p.depth()];
    let mut bif = vec![0usize; p.depth()];
    let mut merge_meets = BTreeMap::new();
    for v in 0..p.num_vertices() {
        let down = p.down_neighbors(v);
        if down.len() > 2 {
            return Err(PlanarError::StructureError {
                vertex: v,
                reason: format!("covers {} vertices, at most 2 allowed", down.len()),
            });
        }
        if down.len() != 2 {
            continue;
        }
        match p.meet(down[0], down[1])? {
            MeetResult::Meet(m) => {
                merge_meets.insert(v, m);
                let rank = p.rank_of(v).unwrap();
                if p.rank_of(m).unwrap() == 0 {
                    root_bif[rank] += 1;
                } else {
                    bif[rank] += 1;
                }
            }
            MeetResult::NonUnique(_) => {
                return Err(PlanarError::StructureError {
                    vertex: v,
                    reason: "covered pair has no unique meet".into(),
                })
            }
            MeetResult::NoMeet => {
                return Err(PlanarError::StructureError {
                    vertex: v,
                    reason: "covered pair has no common lower bound".into(),
                })
            }
        }
    }
    Ok(MergeClassification {
        root_bifurcated_per_rank: root_bif,
        bifurcated_per_rank: bif,
        merge_meets,
    })
}

impl MergeClassification {
    pub fn total_root_bifurcated(&self) -> usize {
        self.root_bifurcated_per_rank.iter().sum()
    }
}

/// Verifies the rank-size recurrence `r_i = b r_{i-1} - sum_k a_k r_{i-k}`
/// using the observed root-bifurcation counts, where b is the constant
/// up-degree of all vertices below the top rank.
pub fn planar_rgf_check(p: &RankedPoset) -> Result<bool, PlanarError> {
    let classification = classify_merges(p)?;
    let mut b: Option<usize> = None;
    for v in 0..p.num_vertices() {
        if p.rank_of(v).unwrap() + 1 >= p.depth() {
            continue;
        }
        let d = p.up_neighbors(v).len();
        match b {
            None => b = Some(d),
            Some(existing) if existing != d => {
                return Err(PlanarError::StructureError {
                    vertex: v,
                    reason: format!("up-degree {d} differs from {existing}"),
                })
            }
            _ => {}
        }
    }
    let b = match b {
        Some(b) => b as i128,
        None => return Ok(true),
    };
    let r: Vec<i128> = p.rank_sizes().iter().map(|&n| n as i128).collect();
    let a = &classification.root_bifurcated_per_rank;
    for i in 1..p.depth() {
        let mut expected = b * r[i - 1];
        for k in 1..=i {
            expected -= a[k] as i128 * r[i - k];
        }
        if r[i] != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Renders the Hasse diagram in DOT format. Vertices are pinned to
/// same-rank groups; when an embedding is present its left-to-right order
/// is preserved with invisible chain edges.
pub fn to_dot(p: &RankedPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for (i, rank) in p.ranks().iter().enumerate() {
        let order: &[Vertex] = match p.embedding() {
            Some(emb) => &emb[i],
            None => rank,
        };
        out.push_str("  { rank=same; ");
        for &v in order {
            out.push_str(&format!("v{v}; "));
        }
        out.push_str("}\n");
        if order.len() > 1 {
            out.push_str("  ");
            let chain: Vec<String> = order.iter().map(|v| format!("v{v}")).collect();
            out.push_str(&chain.join(" -> "));
            out.push_str(" [style=invis];\n");
        }
    }
    for &(u, v) in p.covers() {
        out.push_str(&format!("  v{u} -> v{v};\n"));
    }
    out.push_str("}\n");
    out
}
