//! Graded-poset data model: ranked truncations, order filters, products,
//! meets, and upho verification.
//!
//! A [`RankedPoset`] is a finite truncation of a graded poset: `depth` ranks
//! of vertices with cover edges that always span exactly one rank. Vertex
//! identifiers are dense integers; constructions in this crate assign them
//! rank-major, left to right whenever an embedding is present.

mod iso;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use iso::{are_isomorphic, canonical_digest, IsoReport};

pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset has no vertices")]
    EmptyPoset,
    #[error("rank {0} is empty")]
    EmptyRank(usize),
    #[error("vertex ids are not dense: expected exactly 0..{expected}")]
    IdsNotDense { expected: usize },
    #[error("cover edge ({0}, {1}) appears more than once")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge ({u}, {v}) spans ranks {from_rank} -> {to_rank}, expected a single step")]
    EdgeRankSkip {
        u: Vertex,
        v: Vertex,
        from_rank: usize,
        to_rank: usize,
    },
    #[error("vertex {0} above rank 0 covers nothing")]
    DanglingVertex(Vertex),
    #[error("vertex {0} not found")]
    VertexNotFound(Vertex),
    #[error("embedding is not a permutation of every rank")]
    InvalidEmbedding,
    #[error("operation needs depth {needed} but only {available} ranks are available")]
    InsufficientDepth { needed: usize, available: usize },
}

/// A finite truncation of a graded poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedPoset {
    ranks: Vec<Vec<Vertex>>,
    covers: Vec<(Vertex, Vertex)>,
    embedding: Option<Vec<Vec<Vertex>>>,
    rank_of: Vec<usize>,
    up: Vec<Vec<Vertex>>,
    down: Vec<Vec<Vertex>>,
}

impl RankedPoset {
    /// Validates and builds a poset truncation.
    ///
    /// `ranks[i]` lists the vertex ids on rank i; ids must be dense
    /// (exactly `0..n` across all ranks). Every cover edge must span exactly
    /// one rank, appear once, and every vertex above rank 0 must cover at
    /// least one vertex. `embedding`, when given, fixes a left-to-right
    /// order per rank and must be a permutation of it.
    pub fn new(
        ranks: Vec<Vec<Vertex>>,
        covers: Vec<(Vertex, Vertex)>,
        embedding: Option<Vec<Vec<Vertex>>>,
    ) -> Result<Self, PosetError> {
        if ranks.is_empty() || ranks.iter().all(|r| r.is_empty()) {
            return Err(PosetError::EmptyPoset);
        }
        if let Some(i) = ranks.iter().position(|r| r.is_empty()) {
            return Err(PosetError::EmptyRank(i));
        }
        let n: usize = ranks.iter().map(|r| r.len()).sum();
        let mut rank_of = vec![usize::MAX; n];
        for (i, rank) in ranks.iter().enumerate() {
            for &v in rank {
                if v >= n || rank_of[v] != usize::MAX {
                    return Err(PosetError::IdsNotDense { expected: n });
                }
                rank_of[v] = i;
            }
        }

        let mut seen = BTreeSet::new();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(u, v) in &covers {
            if u >= n {
                return Err(PosetError::VertexNotFound(u));
            }
            if v >= n {
                return Err(PosetError::VertexNotFound(v));
            }
            if !seen.insert((u, v)) {
                return Err(PosetError::DuplicateEdge(u, v));
            }
            if rank_of[v] != rank_of[u] + 1 {
                return Err(PosetError::EdgeRankSkip {
                    u,
                    v,
                    from_rank: rank_of[u],
                    to_rank: rank_of[v],
                });
            }
            up[u].push(v);
            down[v].push(u);
        }
        for (v, rank) in rank_of.iter().enumerate() {
            if *rank > 0 && down[v].is_empty() {
                return Err(PosetError::DanglingVertex(v));
            }
        }

        if let Some(emb) = &embedding {
            if emb.len() != ranks.len() {
                return Err(PosetError::InvalidEmbedding);
            }
            for (rank, order) in ranks.iter().zip(emb) {
                let expected: BTreeSet<_> = rank.iter().collect();
                let got: BTreeSet<_> = order.iter().collect();
                if order.len() != rank.len() || expected != got {
                    return Err(PosetError::InvalidEmbedding);
                }
            }
        }

        for adj in up.iter_mut().chain(down.iter_mut()) {
            adj.sort_unstable();
        }
        let covers: Vec<_> = seen.into_iter().collect();
        Ok(RankedPoset {
            ranks,
            covers,
            embedding,
            rank_of,
            up,
            down,
        })
    }

    /// Number of ranks stored (the truncation bound).
    pub fn depth(&self) -> usize {
        self.ranks.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.rank_of.len()
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| r.len()).collect()
    }

    pub fn ranks(&self) -> &[Vec<Vertex>] {
        &self.ranks
    }

    /// Cover edges, sorted lexicographically.
    pub fn covers(&self) -> &[(Vertex, Vertex)] {
        &self.covers
    }

    pub fn embedding(&self) -> Option<&[Vec<Vertex>]> {
        self.embedding.as_deref()
    }

    pub fn rank_of(&self, v: Vertex) -> Result<usize, PosetError> {
        self.rank_of
            .get(v)
            .copied()
            .ok_or(PosetError::VertexNotFound(v))
    }

    /// Vertices covering v, ascending.
    pub fn up_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.up[v]
    }

    /// Vertices covered by v, ascending.
    pub fn down_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.down[v]
    }

    /// The rank-0 vertex when it is unique.
    pub fn root(&self) -> Option<Vertex> {
        match self.ranks[0].as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    pub fn is_single_vertex(&self) -> bool {
        self.num_vertices() == 1
    }

    /// Replaces the embedding wholesale; validates it against the ranks.
    pub fn with_embedding(
        &self,
        embedding: Option<Vec<Vec<Vertex>>>,
    ) -> Result<RankedPoset, PosetError> {
        RankedPoset::new(self.ranks.clone(), self.covers.clone(), embedding)
    }

    /// The truncation keeping only the first `depth` ranks.
    ///
    /// Vertex ids are reassigned rank-major following the existing per-rank
    /// order, so posets that already use rank-major ids keep them.
    pub fn truncate(&self, depth: usize) -> Result<RankedPoset, PosetError> {
        if depth == 0 || depth > self.depth() {
            return Err(PosetError::InsufficientDepth {
                needed: depth,
                available: self.depth(),
            });
        }
        let mut remap = vec![usize::MAX; self.num_vertices()];
        let mut next = 0;
        let mut ranks = Vec::with_capacity(depth);
        for rank in &self.ranks[..depth] {
            let mut new_rank = Vec::with_capacity(rank.len());
            for &v in rank {
                remap[v] = next;
                new_rank.push(next);
                next += 1;
            }
            ranks.push(new_rank);
        }
        let covers = self
            .covers
            .iter()
            .filter(|(_, v)| self.rank_of[*v] < depth)
            .map(|&(u, v)| (remap[u], remap[v]))
            .collect();
        let embedding = self.embedding.as_ref().map(|emb| {
            emb[..depth]
                .iter()
                .map(|order| order.iter().map(|&v| remap[v]).collect())
                .collect()
        });
        RankedPoset::new(ranks, covers, embedding)
    }

    /// The principal order filter above `s`: the induced subposet on all
    /// vertices >= s, re-ranked so s sits at rank 0. Its depth is
    /// `self.depth() - rank(s)`; the embedding order is restricted when one
    /// is present.
    pub fn order_filter(&self, s: Vertex) -> Result<RankedPoset, PosetError> {
        let base_rank = self.rank_of(s)?;
        let mut in_filter = vec![false; self.num_vertices()];
        in_filter[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.up[v] {
                if !in_filter[w] {
                    in_filter[w] = true;
                    queue.push_back(w);
                }
            }
        }

        let depth = self.depth() - base_rank;
        let mut remap = vec![usize::MAX; self.num_vertices()];
        let mut next = 0;
        let mut ranks = Vec::with_capacity(depth);
        for rank in &self.ranks[base_rank..] {
            let mut new_rank = Vec::new();
            for &v in rank {
                if in_filter[v] {
                    remap[v] = next;
                    new_rank.push(next);
                    next += 1;
                }
            }
            ranks.push(new_rank);
        }
        let covers = self
            .covers
            .iter()
            .filter(|&&(u, v)| in_filter[u] && in_filter[v])
            .map(|&(u, v)| (remap[u], remap[v]))
            .collect();
        let embedding = self.embedding.as_ref().map(|emb| {
            emb[base_rank..]
                .iter()
                .map(|order| {
                    order
                        .iter()
                        .filter(|&&v| in_filter[v])
                        .map(|&v| remap[v])
                        .collect()
                })
                .collect()
        });
        RankedPoset::new(ranks, covers, embedding)
    }

    /// Cartesian product truncated to `depth` ranks: vertices are pairs
    /// (p, q) with rank(p) + rank(q) < depth, and (p, q) is covered by
    /// (p', q') iff exactly one coordinate is a cover and the other is equal.
    ///
    /// Each factor must carry at least `depth` ranks, except that a
    /// single-vertex poset (the one finite upho poset, which is complete as
    /// stored) acts as the identity at any depth.
    pub fn product(&self, other: &RankedPoset, depth: usize) -> Result<RankedPoset, PosetError> {
        if depth == 0 {
            return Err(PosetError::InsufficientDepth {
                needed: 1,
                available: 0,
            });
        }
        for factor in [self, other] {
            if factor.depth() < depth && !factor.is_single_vertex() {
                return Err(PosetError::InsufficientDepth {
                    needed: depth,
                    available: factor.depth(),
                });
            }
        }
        if self.depth() + other.depth() < depth + 1 {
            return Err(PosetError::InsufficientDepth {
                needed: depth,
                available: self.depth() + other.depth() - 1,
            });
        }

        let mut id_of = BTreeMap::new();
        let mut ranks = Vec::with_capacity(depth);
        for k in 0..depth {
            let mut rank = Vec::new();
            for t in 0..=k.min(self.depth() - 1) {
                if k - t >= other.depth() {
                    continue;
                }
                for &p in &self.ranks[t] {
                    for &q in &other.ranks[k - t] {
                        let id = id_of.len();
                        id_of.insert((p, q), id);
                        rank.push(id);
                    }
                }
            }
            if rank.is_empty() {
                return Err(PosetError::InsufficientDepth {
                    needed: depth,
                    available: k,
                });
            }
            ranks.push(rank);
        }

        let mut covers = Vec::new();
        for (&(p, q), &id) in &id_of {
            for &p2 in &self.up[p] {
                if let Some(&to) = id_of.get(&(p2, q)) {
                    covers.push((id, to));
                }
            }
            for &q2 in &other.up[q] {
                if let Some(&to) = id_of.get(&(p, q2)) {
                    covers.push((id, to));
                }
            }
        }
        RankedPoset::new(ranks, covers, None)
    }

    /// All vertices <= v within the truncation.
    pub fn down_set(&self, v: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.num_vertices()];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        let mut out = vec![v];
        while let Some(x) = queue.pop_front() {
            for &w in &self.down[x] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All vertices >= v within the truncation.
    pub fn up_set(&self, v: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.num_vertices()];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        let mut out = vec![v];
        while let Some(x) = queue.pop_front() {
            for &w in &self.up[x] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True iff u <= v.
    pub fn leq(&self, u: Vertex, v: Vertex) -> bool {
        if self.rank_of[u] > self.rank_of[v] {
            return false;
        }
        let mut seen = vec![false; self.num_vertices()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                return true;
            }
            for &w in &self.up[x] {
                if !seen[w] && self.rank_of[w] <= self.rank_of[v] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Greatest lower bound of u and v, when it is unique.
    ///
    /// Computes the set of maximal common lower bounds. All lower bounds lie
    /// at ranks <= min(rank(u), rank(v)), so the answer does not change when
    /// the poset is truncated to any depth above that.
    pub fn meet(&self, u: Vertex, v: Vertex) -> Result<MeetResult, PosetError> {
        self.rank_of(u)?;
        self.rank_of(v)?;
        let below_u: BTreeSet<_> = self.down_set(u).into_iter().collect();
        let common: Vec<Vertex> = self
            .down_set(v)
            .into_iter()
            .filter(|w| below_u.contains(w))
            .collect();
        let mut maximal: Vec<Vertex> = common
            .iter()
            .copied()
            .filter(|&c| !common.iter().any(|&d| d != c && self.leq(c, d)))
            .collect();
        maximal.sort_unstable();
        Ok(match maximal.len() {
            0 => MeetResult::NoMeet,
            1 => MeetResult::Meet(maximal[0]),
            _ => MeetResult::NonUnique(maximal),
        })
    }

    /// True iff rank 0 has exactly one vertex and every other vertex has
    /// down-degree at least one, so the truncation has a unique minimum.
    pub fn unique_min_check(&self) -> bool {
        self.ranks[0].len() == 1
            && self
                .rank_of
                .iter()
                .enumerate()
                .all(|(v, &r)| r == 0 || !self.down[v].is_empty())
    }

    /// Checks the truncated upho property: for every vertex s with
    /// 1 <= rank(s) <= `max_root_rank`, the order filter above s must be
    /// isomorphic to the whole poset once both are truncated to
    /// `depth() - rank(s)` ranks. The precondition
    /// `depth() >= min_depth + max_root_rank` guarantees every comparison
    /// happens at depth at least `min_depth`.
    pub fn verify_upho(
        &self,
        min_depth: usize,
        max_root_rank: usize,
    ) -> Result<UphoReport, PosetError> {
        if self.depth() < min_depth + max_root_rank {
            return Err(PosetError::InsufficientDepth {
                needed: min_depth + max_root_rank,
                available: self.depth(),
            });
        }
        let mut checked_roots = Vec::new();
        let mut failures = Vec::new();
        for rank in 1..=max_root_rank.min(self.depth().saturating_sub(1)) {
            let compared_depth = self.depth() - rank;
            let base = self.truncate(compared_depth)?;
            for &s in &self.ranks[rank] {
                let filter = self.order_filter(s)?;
                checked_roots.push((s, compared_depth));
                if !are_isomorphic(&filter, &base).isomorphic {
                    failures.push(s);
                }
            }
        }
        Ok(UphoReport {
            checked_roots,
            failures,
        })
    }

    /// Serializes to the canonical JSON poset format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poset serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<RankedPoset, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

/// Outcome of a meet computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeetResult {
    /// The unique greatest lower bound.
    Meet(Vertex),
    /// No common lower bound exists (only possible with several roots).
    NoMeet,
    /// The antichain of maximal common lower bounds, sorted ascending.
    NonUnique(Vec<Vertex>),
}

/// Result of a truncated upho verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UphoReport {
    /// Every root vertex examined, with the depth both sides were truncated
    /// to for the comparison.
    pub checked_roots: Vec<(Vertex, usize)>,
    /// Vertices whose truncated order filter is not isomorphic to the
    /// equally truncated poset.
    pub failures: Vec<Vertex>,
}

impl UphoReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

// The JSON poset format: {"depth": N, "ranks": [[ids..]..],
// "covers": [[u,v]..], "embedding": [[ids..]..] | null} with covers sorted
// lexicographically and deterministic field order.
#[derive(Serialize, Deserialize)]
struct PosetJson {
    depth: usize,
    ranks: Vec<Vec<Vertex>>,
    covers: Vec<(Vertex, Vertex)>,
    embedding: Option<Vec<Vec<Vertex>>>,
}

impl Serialize for RankedPoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PosetJson {
            depth: self.depth(),
            ranks: self.ranks.clone(),
            covers: self.covers.clone(),
            embedding: self.embedding.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RankedPoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PosetJson::deserialize(d)?;
        if raw.depth != raw.ranks.len() {
            return Err(serde::de::Error::custom(format!(
                "depth field {} does not match {} ranks",
                raw.depth,
                raw.ranks.len()
            )));
        }
        RankedPoset::new(raw.ranks, raw.covers, raw.embedding)
            .map_err(serde::de::Error::custom)
    }
}
