//! Constructions of upho poset truncations with rational rank-generating
//! functions: grid posets, the recursive b-construction, free trees, and
//! products combining them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::poset::{PosetError, RankedPoset, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parameter a_{0} must be positive")]
    NonPositiveParameter(usize),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("branching factor b must be at least 1")]
    ZeroBranching,
    #[error("at least one pole parameter is required")]
    NoPoles,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Parameters of the grid construction: the poset of points
/// `(y_1, ..., y_n)` with `0 <= y_i <= a_i`, replicated along ranks, whose
/// rank-generating function is `(1 + a_1 x) ... (1 + a_n x) / (1 - x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    a: Vec<u64>,
    depth: usize,
}

impl GridSpec {
    pub fn new(a: Vec<u64>, depth: usize) -> Result<Self, ConstructionError> {
        if depth == 0 {
            return Err(ConstructionError::ZeroDepth);
        }
        if let Some(i) = a.iter().position(|&ai| ai == 0) {
            return Err(ConstructionError::NonPositiveParameter(i + 1));
        }
        Ok(GridSpec { a, depth })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// Parameters of the recursive construction realizing
/// `(1 + a_1 x) ... (1 + a_n x) / (1 - b x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BConstructionSpec {
    a: Vec<u64>,
    b: u64,
    depth: usize,
}

impl BConstructionSpec {
    pub fn new(a: Vec<u64>, b: u64, depth: usize) -> Result<Self, ConstructionError> {
        if depth == 0 {
            return Err(ConstructionError::ZeroDepth);
        }
        if b == 0 {
            return Err(ConstructionError::ZeroBranching);
        }
        if let Some(i) = a.iter().position(|&ai| ai == 0) {
            return Err(ConstructionError::NonPositiveParameter(i + 1));
        }
        Ok(BConstructionSpec { a, b, depth })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

// Point tables shared by grid_construction and grid_filter_map: all points
// of the box in lexicographic order, their nonzero-coordinate counts, and
// the id of (point, rank) pairs that are actually materialized.
struct GridTables {
    points: Vec<Vec<u64>>,
    nonzeros: Vec<usize>,
    index_of: BTreeMap<Vec<u64>, usize>,
    // per rank: point indices present, and id of the first vertex of the rank
    members: Vec<Vec<usize>>,
    rank_start: Vec<usize>,
    position: Vec<BTreeMap<usize, usize>>,
}

impl GridTables {
    fn build(spec: &GridSpec) -> GridTables {
        let mut points = vec![Vec::new()];
        for &ai in &spec.a {
            let mut next = Vec::new();
            for p in &points {
                for v in 0..=ai {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            points = next;
        }
        points.sort();
        let nonzeros: Vec<usize> = points
            .iter()
            .map(|p| p.iter().filter(|&&c| c != 0).count())
            .collect();
        let index_of: BTreeMap<Vec<u64>, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut members = Vec::with_capacity(spec.depth);
        let mut rank_start = Vec::with_capacity(spec.depth);
        let mut position = Vec::with_capacity(spec.depth);
        let mut next_id = 0;
        for k in 0..spec.depth {
            let m: Vec<usize> = (0..points.len()).filter(|&i| nonzeros[i] <= k).collect();
            rank_start.push(next_id);
            next_id += m.len();
            position.push(m.iter().enumerate().map(|(pos, &i)| (i, pos)).collect());
            members.push(m);
        }
        GridTables {
            points,
            nonzeros,
            index_of,
            members,
            rank_start,
            position,
        }
    }

    fn id(&self, rank: usize, point_idx: usize) -> Vertex {
        self.rank_start[rank] + self.position[rank][&point_idx]
    }
}

/// Builds the grid poset truncation.
///
/// Rank k holds exactly the points with at most k nonzero coordinates (the
/// set reachable from the all-zero point), and `(y; k)` is covered by
/// `(z; k+1)` iff y and z differ in at most one coordinate. Rank sizes are
/// the prefix sums of the elementary symmetric values of `a`.
pub fn grid_construction(spec: &GridSpec) -> RankedPoset {
    let tables = GridTables::build(spec);
    let mut ranks = Vec::with_capacity(spec.depth);
    for k in 0..spec.depth {
        let start = tables.rank_start[k];
        ranks.push((start..start + tables.members[k].len()).collect());
    }
    let mut covers = Vec::new();
    for k in 0..spec.depth.saturating_sub(1) {
        for &pi in &tables.members[k] {
            let y = &tables.points[pi];
            // unchanged point one rank up
            covers.push((tables.id(k, pi), tables.id(k + 1, pi)));
            for (i, &ai) in spec.a.iter().enumerate() {
                for val in 0..=ai {
                    if val == y[i] {
                        continue;
                    }
                    let mut z = y.clone();
                    z[i] = val;
                    let zi = tables.index_of[&z];
                    debug_assert!(tables.nonzeros[zi] <= k + 1);
                    covers.push((tables.id(k, pi), tables.id(k + 1, zi)));
                }
            }
        }
    }
    RankedPoset::new(ranks, covers, None).expect("grid construction is always valid")
}

/// The explicit order-filter isomorphism of the grid poset: adds the
/// coordinates of `p` componentwise modulo `a_i + 1` and shifts ranks by
/// `rank(p)`. The returned map is a cover-preserving bijection from the
/// vertices with `rank + rank(p) < depth` onto the order filter above `p`.
pub fn grid_filter_map(
    spec: &GridSpec,
    p: Vertex,
) -> Result<BTreeMap<Vertex, Vertex>, PosetError> {
    let tables = GridTables::build(spec);
    let total: usize = tables.members.iter().map(|m| m.len()).sum();
    if p >= total {
        return Err(PosetError::VertexNotFound(p));
    }
    let k_p = match tables.rank_start.iter().rposition(|&s| s <= p) {
        Some(k) => k,
        None => return Err(PosetError::VertexNotFound(p)),
    };
    let p_point = &tables.points[tables.members[k_p][p - tables.rank_start[k_p]]];

    let mut map = BTreeMap::new();
    for k in 0..spec.depth.saturating_sub(k_p) {
        for &pi in &tables.members[k] {
            let y = &tables.points[pi];
            let shifted: Vec<u64> = y
                .iter()
                .zip(p_point)
                .zip(&spec.a)
                .map(|((yi, pi), ai)| (yi + pi) % (ai + 1))
                .collect();
            let zi = tables.index_of[&shifted];
            map.insert(tables.id(k, pi), tables.id(k + k_p, zi));
        }
    }
    Ok(map)
}

/// Builds the recursive construction for `(1+a_1 x)...(1+a_n x) / (1-bx)`.
///
/// Rank i is the disjoint union of a copy of rank i of the grid poset and,
/// for 1 <= j <= i, b-1 copies of this construction's own rank j-1. The
/// cover wiring is deterministic: the grid part copies the grid covers,
/// every vertex of the j = 1 group covers every grid vertex one rank down
/// (complete bipartite), and the remaining groups replicate this
/// construction's own covers copy by copy, matching copy indices at both
/// ends. Rank sizes satisfy `r_{i+1} = b r_i + e_{i+1}` exactly.
pub fn b_construction(spec: &BConstructionSpec) -> RankedPoset {
    let grid_spec = GridSpec {
        a: spec.a.clone(),
        depth: spec.depth,
    };
    let grid = grid_construction(&grid_spec);
    let s = grid.rank_sizes();
    let b = spec.b as usize;

    // Position of each grid vertex within its rank (ids are rank-major).
    let mut grid_pos = vec![0usize; grid.num_vertices()];
    for rank in grid.ranks() {
        for (pos, &v) in rank.iter().enumerate() {
            grid_pos[v] = pos;
        }
    }
    let mut grid_edges_by_rank: Vec<Vec<(usize, usize)>> = vec![Vec::new(); spec.depth];
    for &(u, v) in grid.covers() {
        let r = grid.rank_of(v).unwrap();
        grid_edges_by_rank[r].push((grid_pos[u], grid_pos[v]));
    }

    let mut sizes = vec![1usize];
    // edges_by_rank[i]: covers between rank i-1 and rank i, as positions
    // within the respective ranks.
    let mut edges_by_rank: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    // offsets[i][j]: offset of group j within rank i.
    let mut offsets: Vec<Vec<usize>> = vec![vec![0]];

    for i in 1..spec.depth {
        let mut group_sizes = vec![s[i]];
        for j in 1..=i {
            group_sizes.push((b - 1) * sizes[j - 1]);
        }
        let mut offs = Vec::with_capacity(group_sizes.len());
        let mut acc = 0;
        for &g in &group_sizes {
            offs.push(acc);
            acc += g;
        }

        let mut edges = Vec::new();
        for &(u, v) in &grid_edges_by_rank[i] {
            edges.push((u, v));
        }
        for u in 0..s[i - 1] {
            for v in 0..group_sizes[1] {
                edges.push((u, offs[1] + v));
            }
        }
        for j in 1..i {
            for c in 0..b - 1 {
                for &(u, v) in &edges_by_rank[j] {
                    edges.push((
                        offsets[i - 1][j] + c * sizes[j - 1] + u,
                        offs[j + 1] + c * sizes[j] + v,
                    ));
                }
            }
        }
        sizes.push(acc);
        edges_by_rank.push(edges);
        offsets.push(offs);
    }

    let mut rank_start = Vec::with_capacity(spec.depth);
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
    for (i, edges) in edges_by_rank.iter().enumerate().skip(1) {
        for &(u, v) in edges {
            covers.push((rank_start[i - 1] + u, rank_start[i] + v));
        }
    }
    RankedPoset::new(ranks, covers, None).expect("b-construction is always valid")
}

/// Product construction realizing
/// `(1+a_1 x)...(1+a_n x) / ((1-b_1 x)...(1-b_m x))`: the b-construction for
/// the first pole times free trees for the remaining poles.
pub fn theorem12_construction(
    a: &[u64],
    b: &[u64],
    depth: usize,
) -> Result<RankedPoset, ConstructionError> {
    let (&b1, rest) = b.split_first().ok_or(ConstructionError::NoPoles)?;
    let spec = BConstructionSpec::new(a.to_vec(), b1, depth)?;
    let mut poset = b_construction(&spec);
    for &bi in rest {
        if bi == 0 {
            return Err(ConstructionError::ZeroBranching);
        }
        poset = poset.product(&k_ary_tree(bi, depth), depth)?;
    }
    Ok(poset)
}

/// The free k-ary tree truncation: every vertex gets k children. Comes with
/// its natural left-to-right embedding.
pub fn k_ary_tree(k: u64, depth: usize) -> RankedPoset {
    assert!(k >= 1, "branching factor must be at least 1");
    assert!(depth >= 1, "depth must be at least 1");
    let k = k as usize;
    let mut ranks = Vec::with_capacity(depth);
    let mut start = 0usize;
    let mut size = 1usize;
    for _ in 0..depth {
        ranks.push((start..start + size).collect::<Vec<_>>());
        start += size;
        size *= k;
    }
    let mut covers = Vec::new();
    for i in 0..depth - 1 {
        for (pos, &v) in ranks[i].iter().enumerate() {
            for c in 0..k {
                covers.push((v, ranks[i + 1][pos * k + c]));
            }
        }
    }
    let embedding = Some(ranks.clone());
    RankedPoset::new(ranks, covers, embedding).expect("tree construction is always valid")
}

/// The chain truncation (the natural numbers up to depth).
pub fn chain(depth: usize) -> RankedPoset {
    k_ary_tree(1, depth)
}
