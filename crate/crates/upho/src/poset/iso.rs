//! Rank-preserving isomorphism testing for graded poset truncations.
//!
//! The test runs iterated color refinement seeded by rank (colors are
//! refined by the multisets of neighbor colors, upward and downward, until
//! stable) and then individualization-refinement backtracking on color
//! ties. Refinement signatures also yield a canonical digest: isomorphic
//! posets always share a digest, so digests work as hash keys for
//! bucketing, while `are_isomorphic` itself is exact.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{RankedPoset, Vertex};

/// Result of an isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    /// When isomorphic, `witness[p]` is the image of vertex p; the bijection
    /// maps rank i to rank i and preserves cover edges in both directions.
    pub witness: Option<Vec<Vertex>>,
    /// Refinement-based canonical form digest per poset.
    pub certificate: (String, String),
}

type Color = u32;

fn initial_colors(p: &RankedPoset) -> Vec<Color> {
    (0..p.num_vertices())
        .map(|v| p.rank_of(v).unwrap() as Color)
        .collect()
}

fn signature(p: &RankedPoset, colors: &[Color], v: Vertex) -> (Color, Vec<Color>, Vec<Color>) {
    let mut up: Vec<Color> = p.up_neighbors(v).iter().map(|&w| colors[w]).collect();
    let mut down: Vec<Color> = p.down_neighbors(v).iter().map(|&w| colors[w]).collect();
    up.sort_unstable();
    down.sort_unstable();
    (colors[v], up, down)
}

fn color_count(colors: &[Color]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// One joint refinement pass to a fixed point. Colors are renamed by sorted
/// signature order, so the naming is independent of vertex numbering and
/// aligned between the two posets. Returns `None` as soon as the color
/// class sizes of the two posets diverge.
fn refine_pair(
    p: &RankedPoset,
    q: &RankedPoset,
    mut cp: Vec<Color>,
    mut cq: Vec<Color>,
) -> Option<(Vec<Color>, Vec<Color>, usize)> {
    let mut num = color_count(&cp).max(color_count(&cq));
    loop {
        let sig_p: Vec<_> = (0..p.num_vertices()).map(|v| signature(p, &cp, v)).collect();
        let sig_q: Vec<_> = (0..q.num_vertices()).map(|v| signature(q, &cq, v)).collect();
        let mut naming = BTreeMap::new();
        for sig in sig_p.iter().chain(sig_q.iter()) {
            naming.insert(sig.clone(), 0 as Color);
        }
        for (i, c) in naming.values_mut().enumerate() {
            *c = i as Color;
        }
        let mut count_p = vec![0usize; naming.len()];
        let mut count_q = vec![0usize; naming.len()];
        for (v, sig) in sig_p.iter().enumerate() {
            cp[v] = naming[sig];
            count_p[cp[v] as usize] += 1;
        }
        for (v, sig) in sig_q.iter().enumerate() {
            cq[v] = naming[sig];
            count_q[cq[v] as usize] += 1;
        }
        if count_p != count_q {
            return None;
        }
        if naming.len() == num {
            return Some((cp, cq, num));
        }
        num = naming.len();
    }
}

/// Single-poset refinement to a fixed point, same canonical renaming.
fn refine_single(p: &RankedPoset, mut colors: Vec<Color>) -> (Vec<Color>, usize) {
    let mut num = color_count(&colors);
    loop {
        let sigs: Vec<_> = (0..p.num_vertices())
            .map(|v| signature(p, &colors, v))
            .collect();
        let mut naming = BTreeMap::new();
        for sig in &sigs {
            naming.insert(sig.clone(), 0 as Color);
        }
        for (i, c) in naming.values_mut().enumerate() {
            *c = i as Color;
        }
        for (v, sig) in sigs.iter().enumerate() {
            colors[v] = naming[sig];
        }
        if naming.len() == num {
            return (colors, num);
        }
        num = naming.len();
    }
}

/// Digest of the stable refinement: isomorphic posets always get equal
/// digests, which makes them usable as hash keys.
pub fn canonical_digest(p: &RankedPoset) -> String {
    let (colors, num) = refine_single(p, initial_colors(p));
    // At the fixed point every member of a color class has the same
    // signature, so one representative per class describes the quotient.
    let mut classes: Vec<(usize, Vec<Color>, Vec<Color>)> = vec![(0, Vec::new(), Vec::new()); num];
    for v in 0..p.num_vertices() {
        let c = colors[v] as usize;
        classes[c].0 += 1;
        let (_, up, down) = signature(p, &colors, v);
        classes[c].1 = up;
        classes[c].2 = down;
    }
    let mut hasher = Sha256::new();
    hasher.update(format!("depth={};sizes={:?};", p.depth(), p.rank_sizes()));
    for (c, (count, up, down)) in classes.iter().enumerate() {
        hasher.update(format!("{c}:{count}:{up:?}:{down:?};"));
    }
    format!("{:x}", hasher.finalize())
}

fn search(
    p: &RankedPoset,
    q: &RankedPoset,
    cp: Vec<Color>,
    cq: Vec<Color>,
) -> Option<Vec<Vertex>> {
    let (cp, cq, num) = refine_pair(p, q, cp, cq)?;
    let n = p.num_vertices();
    if num == n {
        let mut q_of_color = vec![usize::MAX; num];
        for (w, &c) in cq.iter().enumerate() {
            q_of_color[c as usize] = w;
        }
        let map: Vec<Vertex> = cp.iter().map(|&c| q_of_color[c as usize]).collect();
        let q_edges: HashSet<(Vertex, Vertex)> = q.covers().iter().copied().collect();
        if p.covers()
            .iter()
            .all(|&(u, v)| q_edges.contains(&(map[u], map[v])))
        {
            return Some(map);
        }
        return None;
    }

    // Ties remain: individualize the first tied class. Color ids follow the
    // initial rank seeding, so the first tied class is the lowest-ranked
    // one; the fixed pivot in p is its lowest vertex id.
    let mut count = vec![0usize; num];
    for &c in &cp {
        count[c as usize] += 1;
    }
    let target = (0..num).find(|&c| count[c] > 1).unwrap() as Color;
    let pivot = cp.iter().position(|&c| c == target).unwrap();
    let fresh = num as Color;
    for (w, &cw) in cq.iter().enumerate() {
        if cw != target {
            continue;
        }
        let mut cp2 = cp.clone();
        let mut cq2 = cq.clone();
        cp2[pivot] = fresh;
        cq2[w] = fresh;
        if let Some(map) = search(p, q, cp2, cq2) {
            return Some(map);
        }
    }
    None
}

/// Decides whether two truncations are isomorphic as graded posets
/// (rank-preserving, cover-preserving in both directions), producing an
/// explicit witness when they are.
pub fn are_isomorphic(p: &RankedPoset, q: &RankedPoset) -> IsoReport {
    let certificate = (canonical_digest(p), canonical_digest(q));
    if p.rank_sizes() != q.rank_sizes()
        || p.covers().len() != q.covers().len()
        || certificate.0 != certificate.1
    {
        return IsoReport {
            isomorphic: false,
            witness: None,
            certificate,
        };
    }
    let witness = search(p, q, initial_colors(p), initial_colors(q));
    IsoReport {
        isomorphic: witness.is_some(),
        witness,
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{chain, k_ary_tree};
    use crate::monoid::{congruence_classes, monoid_poset, MonoidPresentation};

    #[test]
    fn free_monoid_poset_is_binary_tree() {
        let pres = MonoidPresentation::new("ab", &[]).unwrap();
        let _ = congruence_classes(&pres, 3).unwrap();
        let p = monoid_poset(&pres, 3).unwrap();
        let t = k_ary_tree(2, 4);
        let report = are_isomorphic(&t, &p);
        assert!(report.isomorphic);
        assert_eq!(report.certificate.0, report.certificate.1);
    }

    #[test]
    fn chain_vs_tree_not_isomorphic() {
        let report = are_isomorphic(&chain(4), &k_ary_tree(2, 4));
        assert!(!report.isomorphic);
        assert!(report.witness.is_none());
    }

    #[test]
    fn witness_preserves_structure() {
        let t = k_ary_tree(2, 4);
        // Renumber the tree: reverse all ids.
        let n = t.num_vertices();
        let remap = |v: Vertex| n - 1 - v;
        let ranks = t
            .ranks()
            .iter()
            .map(|r| r.iter().map(|&v| remap(v)).collect())
            .collect();
        let covers = t.covers().iter().map(|&(u, v)| (remap(u), remap(v))).collect();
        let q = RankedPoset::new(ranks, covers, None).unwrap();

        let report = are_isomorphic(&t, &q);
        assert!(report.isomorphic);
        let w = report.witness.unwrap();
        let q_edges: HashSet<_> = q.covers().iter().copied().collect();
        assert_eq!(t.covers().len(), q.covers().len());
        for &(u, v) in t.covers() {
            assert!(q_edges.contains(&(w[u], w[v])));
        }
        for v in 0..n {
            assert_eq!(t.rank_of(v).unwrap(), q.rank_of(w[v]).unwrap());
        }
    }

    #[test]
    fn digest_detects_structural_difference() {
        // Same rank sizes, different poset: a "Y" vs a diamond top.
        let y = RankedPoset::new(
            vec![vec![0], vec![1, 2], vec![3, 4]],
            vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 4)],
            None,
        )
        .unwrap();
        let b = super::super::tests::bowtie();
        assert_ne!(canonical_digest(&y), canonical_digest(&b));
        assert!(!are_isomorphic(&y, &b).isomorphic);
    }
}
