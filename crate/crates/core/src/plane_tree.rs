//! Two-colored labeled plane trees encoding a noncrossing partition together
//! with its Kreweras dual.
//!
//! Black vertices are blocks of the partition, white vertices are dual
//! blocks, and the edge joining a block to an adjacent dual block carries the
//! label `gamma`. The root is the block containing `1`; vertex colour is the
//! parity of depth (root black) and is never stored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::NoncrossingPartition;

/// An unlabeled ordered rooted tree. Serializes as nested arrays: a vertex is
/// the array of its children, so a leaf is `[]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaneTree {
    pub children: Vec<PlaneTree>,
}

impl PlaneTree {
    pub fn leaf() -> Self {
        PlaneTree { children: Vec::new() }
    }

    pub fn with_children(children: Vec<PlaneTree>) -> Self {
        PlaneTree { children }
    }

    pub fn num_vertices(&self) -> usize {
        1 + self.children.iter().map(PlaneTree::num_vertices).sum::<usize>()
    }

    /// Child counts in preorder.
    pub fn preorder_child_counts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn walk(t: &PlaneTree, out: &mut Vec<usize>) {
            out.push(t.children.len());
            for c in &t.children {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// Rebuilds a tree from its preorder child counts. Returns `None` unless
    /// the sequence describes exactly one tree.
    pub fn from_preorder_child_counts(counts: &[usize]) -> Option<PlaneTree> {
        fn build(counts: &[usize], pos: &mut usize) -> Option<PlaneTree> {
            let c = *counts.get(*pos)?;
            *pos += 1;
            let children = (0..c).map(|_| build(counts, pos)).collect::<Option<Vec<_>>>()?;
            Some(PlaneTree { children })
        }
        let mut pos = 0;
        let tree = build(counts, &mut pos)?;
        (pos == counts.len()).then_some(tree)
    }
}

/// Child-count restriction used by [`enumerate_shapes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeConstraint {
    All,
    /// Every vertex has graph degree `1 mod d`: the root has `1 mod d`
    /// children, every other vertex `0 mod d`.
    Degree1ModD(usize),
    /// Every vertex has a multiple of `d` children.
    DDivisible(usize),
    /// Every vertex has `0` or exactly `d` children.
    DAry(usize),
}

impl ShapeConstraint {
    fn root_ok(self, c: usize) -> bool {
        match self {
            ShapeConstraint::All => true,
            ShapeConstraint::Degree1ModD(d) => c % d == 1 % d,
            ShapeConstraint::DDivisible(d) => c.is_multiple_of(d),
            ShapeConstraint::DAry(d) => c == 0 || c == d,
        }
    }

    fn inner_ok(self, c: usize) -> bool {
        match self {
            ShapeConstraint::All => true,
            ShapeConstraint::Degree1ModD(d) | ShapeConstraint::DDivisible(d) => c.is_multiple_of(d),
            ShapeConstraint::DAry(d) => c == 0 || c == d,
        }
    }
}

/// All plane trees on `v` vertices obeying `constraint`, each once, in a
/// fixed order (by root child count, then lexicographically by subtrees).
pub fn enumerate_shapes(v: usize, constraint: ShapeConstraint) -> Vec<PlaneTree> {
    if v == 0 {
        return Vec::new();
    }
    if let ShapeConstraint::Degree1ModD(0) | ShapeConstraint::DDivisible(0) = constraint {
        return Vec::new();
    }
    let mut memo: BTreeMap<usize, Vec<PlaneTree>> = BTreeMap::new();
    trees_with_root(v, constraint, true, &mut memo)
}

fn trees_with_root(
    v: usize,
    constraint: ShapeConstraint,
    is_root: bool,
    memo: &mut BTreeMap<usize, Vec<PlaneTree>>,
) -> Vec<PlaneTree> {
    if !is_root {
        if let Some(hit) = memo.get(&v) {
            return hit.clone();
        }
    }
    let mut out = Vec::new();
    for c in 0..v {
        let ok = if is_root {
            constraint.root_ok(c)
        } else {
            constraint.inner_ok(c)
        };
        if !ok {
            continue;
        }
        for forest in forests(v - 1, c, constraint, memo) {
            out.push(PlaneTree { children: forest });
        }
    }
    if !is_root {
        memo.insert(v, out.clone());
    }
    out
}

/// Ordered forests of `parts` nonroot trees with `total` vertices in all.
fn forests(
    total: usize,
    parts: usize,
    constraint: ShapeConstraint,
    memo: &mut BTreeMap<usize, Vec<PlaneTree>>,
) -> Vec<Vec<PlaneTree>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if total < parts {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        let heads = trees_with_root(first, constraint, false, memo);
        if heads.is_empty() {
            continue;
        }
        let tails = forests(total - first, parts - 1, constraint, memo);
        for h in &heads {
            for t in &tails {
                let mut f = Vec::with_capacity(parts);
                f.push(h.clone());
                f.extend(t.iter().cloned());
                out.push(f);
            }
        }
    }
    out
}

/// A plane tree with a label on every edge, stored on the child side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPlaneTree {
    pub root: LabeledVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledVertex {
    /// `(label of the edge to the child, child)`, left to right.
    pub children: Vec<(usize, LabeledVertex)>,
}

#[derive(Serialize, Deserialize)]
struct LabeledRepr {
    shape: PlaneTree,
    /// Edge labels in preorder of the child endpoints.
    labels: Vec<usize>,
}

impl Serialize for LabeledPlaneTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LabeledRepr {
            shape: self.shape(),
            labels: self.preorder_labels(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledPlaneTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LabeledRepr::deserialize(d)?;
        LabeledPlaneTree::from_shape_and_labels(&repr.shape, &repr.labels)
            .map_err(serde::de::Error::custom)
    }
}

/// Flattened per-vertex view used by the label checks.
struct VertexInfo {
    depth: usize,
    parent_label: Option<usize>,
    child_labels: Vec<usize>,
    children: Vec<usize>,
    /// Labels on edges strictly below this vertex.
    subtree: Vec<usize>,
}

impl LabeledPlaneTree {
    /// Attaches preorder edge labels to `shape`.
    pub fn from_shape_and_labels(shape: &PlaneTree, labels: &[usize]) -> Result<Self> {
        fn build(t: &PlaneTree, labels: &[usize], pos: &mut usize) -> Result<LabeledVertex> {
            let mut children = Vec::with_capacity(t.children.len());
            for c in &t.children {
                let label = *labels
                    .get(*pos)
                    .ok_or_else(|| Error::Parse("too few edge labels".into()))?;
                *pos += 1;
                children.push((label, build(c, labels, pos)?));
            }
            Ok(LabeledVertex { children })
        }
        let mut pos = 0;
        let root = build(shape, labels, &mut pos)?;
        if pos != labels.len() {
            return Err(Error::Parse("too many edge labels".into()));
        }
        Ok(LabeledPlaneTree { root })
    }

    pub fn num_edges(&self) -> usize {
        self.preorder_labels().len()
    }

    pub fn preorder_labels(&self) -> Vec<usize> {
        fn walk(v: &LabeledVertex, out: &mut Vec<usize>) {
            for (l, c) in &v.children {
                out.push(*l);
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Forgets the labels.
    pub fn shape(&self) -> PlaneTree {
        fn strip(v: &LabeledVertex) -> PlaneTree {
            PlaneTree {
                children: v.children.iter().map(|(_, c)| strip(c)).collect(),
            }
        }
        strip(&self.root)
    }

    fn flatten(&self) -> Vec<VertexInfo> {
        fn walk(
            v: &LabeledVertex,
            depth: usize,
            parent_label: Option<usize>,
            out: &mut Vec<VertexInfo>,
        ) -> Vec<usize> {
            let me = out.len();
            out.push(VertexInfo {
                depth,
                parent_label,
                child_labels: v.children.iter().map(|(l, _)| *l).collect(),
                children: Vec::new(),
                subtree: Vec::new(),
            });
            let mut below = Vec::new();
            for (l, c) in &v.children {
                let id = out.len();
                out[me].children.push(id);
                below.push(*l);
                below.extend(walk(c, depth + 1, Some(*l), out));
            }
            out[me].subtree = below.clone();
            below
        }
        let mut out = Vec::new();
        walk(&self.root, 0, None, &mut out);
        out
    }

    /// Checks one of the six labeling conditions.
    pub fn check_condition(&self, condition: u8) -> Result<()> {
        let info = self.flatten();
        let fail = |detail: String| Err(Error::LabelCondition { condition, detail });
        match condition {
            1 => {
                let mut labels = self.preorder_labels();
                labels.sort_unstable();
                if labels.iter().enumerate().any(|(t, &l)| l != t + 1) {
                    return fail(format!("labels {labels:?} are not a permutation of [1, n]"));
                }
            }
            2 => {
                for (v, vi) in info.iter().enumerate() {
                    if vi.child_labels.windows(2).any(|w| w[0] >= w[1]) {
                        return fail(format!("child labels {:?} at vertex {v}", vi.child_labels));
                    }
                }
            }
            3 => {
                for (v, vi) in info.iter().enumerate() {
                    let Some(p) = vi.parent_label else { continue };
                    let incident = vi.child_labels.iter().copied().chain([p]);
                    let ok = if vi.depth % 2 == 0 {
                        incident.max() == Some(p)
                    } else {
                        incident.min() == Some(p)
                    };
                    if !ok {
                        return fail(format!("parent edge label {p} at vertex {v}"));
                    }
                }
            }
            4 => {
                for (v, vi) in info.iter().enumerate() {
                    if let (Some(lo), Some(hi)) = (vi.subtree.iter().min(), vi.subtree.iter().max()) {
                        if hi - lo + 1 != vi.subtree.len() {
                            return fail(format!("subtree labels of vertex {v} are not an interval"));
                        }
                    }
                }
            }
            5 => {
                for (v, vi) in info.iter().enumerate() {
                    let (Some(first), Some(last)) = (vi.child_labels.first(), vi.child_labels.last())
                    else {
                        continue;
                    };
                    let ok = if vi.depth % 2 == 0 {
                        vi.subtree.iter().min() == Some(first)
                    } else {
                        vi.subtree.iter().max() == Some(last)
                    };
                    if !ok {
                        return fail(format!("extreme subtree label misplaced at vertex {v}"));
                    }
                }
            }
            6 => {
                for (v, vi) in info.iter().enumerate() {
                    for a in 0..vi.children.len() {
                        for b in a + 1..vi.children.len() {
                            let (la, lb) = (vi.child_labels[a], vi.child_labels[b]);
                            let below_a = &info[vi.children[a]].subtree;
                            let below_b = &info[vi.children[b]].subtree;
                            if below_b.iter().any(|&x| x <= la) || below_a.iter().any(|&x| x >= lb) {
                                return fail(format!("sibling subtrees not separated at vertex {v}"));
                            }
                        }
                    }
                }
            }
            _ => return Err(Error::OutOfRange(format!("no labeling condition {condition}"))),
        }
        Ok(())
    }

    /// Runs conditions 1 through 6 and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        (1..=6).try_for_each(|c| self.check_condition(c))
    }
}

/// The labeled plane tree of `pi`.
pub fn partition_to_tree(pi: &NoncrossingPartition) -> LabeledPlaneTree {
    let blocks = pi.num_blocks();
    let dual_blocks = pi.n() + 1 - blocks;
    // vertices: blocks first, then dual blocks; adjacency lists come out
    // sorted by label because adjacencies are sorted by gamma
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); blocks + dual_blocks];
    for a in pi.adjacencies() {
        let w = blocks + a.dual_block_index;
        adj[a.block_index].push((a.gamma, w));
        adj[w].push((a.gamma, a.block_index));
    }
    fn grow(v: usize, parent: Option<usize>, adj: &[Vec<(usize, usize)>]) -> LabeledVertex {
        let children = adj[v]
            .iter()
            .filter(|&&(_, u)| Some(u) != parent)
            .map(|&(l, u)| (l, grow(u, Some(v), adj)))
            .collect();
        LabeledVertex { children }
    }
    // block 0 holds the element 1 in canonical form
    LabeledPlaneTree {
        root: grow(0, None, &adj),
    }
}

/// Inverse of [`partition_to_tree`]; rejects trees violating a labeling
/// condition, naming the first one that fails.
pub fn tree_to_partition(tree: &LabeledPlaneTree) -> Result<NoncrossingPartition> {
    tree.validate()?;
    Ok(blocks_of_tree(tree))
}

pub(crate) fn blocks_of_tree(tree: &LabeledPlaneTree) -> NoncrossingPartition {
    fn walk(v: &LabeledVertex, depth: usize, parent: Option<usize>, out: &mut Vec<Vec<usize>>) {
        if depth.is_multiple_of(2) {
            let mut block: Vec<usize> = v.children.iter().map(|(l, _)| *l).collect();
            block.extend(parent);
            out.push(block);
        }
        for (l, c) in &v.children {
            walk(c, depth + 1, Some(*l), out);
        }
    }
    let mut blocks = Vec::new();
    walk(&tree.root, 0, None, &mut blocks);
    let n = blocks.iter().map(Vec::len).sum();
    let mut ids = vec![0; n];
    for (b, block) in blocks.iter().enumerate() {
        for &i in block {
            ids[i - 1] = b;
        }
    }
    NoncrossingPartition::from_assignment_unchecked(&ids)
}

/// The unique labeling of `shape` satisfying the six labeling conditions.
/// Below a black vertex the order is `edge, child subtree, edge, ...`;
/// below a white vertex it is `child subtree, edge, child subtree, edge, ...`.
pub fn reconstruct_labels(shape: &PlaneTree) -> LabeledPlaneTree {
    fn assign(t: &PlaneTree, depth: usize, next: &mut usize) -> LabeledVertex {
        let mut children = Vec::with_capacity(t.children.len());
        for c in &t.children {
            if depth.is_multiple_of(2) {
                let label = *next;
                *next += 1;
                children.push((label, assign(c, depth + 1, next)));
            } else {
                let child = assign(c, depth + 1, next);
                children.push((*next, child));
                *next += 1;
            }
        }
        LabeledVertex { children }
    }
    let mut next = 1;
    LabeledPlaneTree {
        root: assign(shape, 0, &mut next),
    }
}

/// `NC^d_n` generated from degree-constrained shapes on `n + 1` vertices.
pub fn indivisible_partitions_via_trees(n: usize, d: usize) -> Vec<NoncrossingPartition> {
    if n == 0 || d == 0 {
        return Vec::new();
    }
    let mut out: Vec<NoncrossingPartition> = enumerate_shapes(n + 1, ShapeConstraint::Degree1ModD(d))
        .iter()
        .map(|s| blocks_of_tree(&reconstruct_labels(s)))
        .collect();
    out.sort();
    out
}

/// All of `NC_n` through the tree bijection.
pub fn all_partitions_via_trees(n: usize) -> Vec<NoncrossingPartition> {
    indivisible_partitions_via_trees(n, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_by_filter;

    fn eleven_point_partition() -> NoncrossingPartition {
        "1|2,9,10|3|4,5,6,7,8|11".parse().unwrap()
    }

    #[test]
    fn eleven_point_tree() {
        let t = partition_to_tree(&eleven_point_partition());
        let root_labels: Vec<usize> = t.root.children.iter().map(|(l, _)| *l).collect();
        assert_eq!(root_labels, vec![1]);
        let white = &t.root.children[0].1;
        let white_labels: Vec<usize> = white.children.iter().map(|(l, _)| *l).collect();
        assert_eq!(white_labels, vec![10, 11]);
        // preorder of the drawn tree
        assert_eq!(t.preorder_labels(), vec![1, 10, 2, 3, 8, 4, 5, 6, 7, 9, 11]);
        t.validate().unwrap();
        assert_eq!(tree_to_partition(&t).unwrap(), eleven_point_partition());
    }

    #[test]
    fn single_edge_and_single_block() {
        let t = partition_to_tree(&NoncrossingPartition::singletons(1).unwrap());
        assert_eq!(t.preorder_labels(), vec![1]);
        assert_eq!(
            tree_to_partition(&t).unwrap(),
            NoncrossingPartition::singletons(1).unwrap()
        );
        let t = partition_to_tree(&NoncrossingPartition::full(3).unwrap());
        assert_eq!(t.root.children.len(), 3);
        assert_eq!(t.preorder_labels(), vec![1, 2, 3]);
        assert!(t.root.children.iter().all(|(_, c)| c.children.is_empty()));
    }

    #[test]
    fn reconstruct_small_shapes() {
        let path = PlaneTree::with_children(vec![PlaneTree::with_children(vec![PlaneTree::leaf()])]);
        assert_eq!(reconstruct_labels(&path).preorder_labels(), vec![1, 2]);
        let star = PlaneTree::with_children(vec![PlaneTree::leaf(); 4]);
        assert_eq!(reconstruct_labels(&star).preorder_labels(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn shapes_on_five_vertices_give_nc4() {
        let shapes = enumerate_shapes(5, ShapeConstraint::All);
        assert_eq!(shapes.len(), 14);
        let mut parts: Vec<_> = shapes
            .iter()
            .map(|s| tree_to_partition(&reconstruct_labels(s)).unwrap())
            .collect();
        parts.sort();
        parts.dedup();
        assert_eq!(parts, enumerate_by_filter(4));
    }

    #[test]
    fn constrained_shape_counts() {
        assert_eq!(enumerate_shapes(6, ShapeConstraint::Degree1ModD(2)).len(), 7);
        assert_eq!(enumerate_shapes(5, ShapeConstraint::DAry(2)).len(), 2);
        assert_eq!(enumerate_shapes(1, ShapeConstraint::All).len(), 1);
    }

    #[test]
    fn violations_name_the_condition() {
        let shape = PlaneTree::with_children(vec![PlaneTree::leaf(), PlaneTree::leaf()]);
        let t = LabeledPlaneTree::from_shape_and_labels(&shape, &[2, 1]).unwrap();
        assert!(matches!(
            tree_to_partition(&t),
            Err(Error::LabelCondition { condition: 2, .. })
        ));
        let t = LabeledPlaneTree::from_shape_and_labels(&shape, &[1, 3]).unwrap();
        assert!(matches!(
            tree_to_partition(&t),
            Err(Error::LabelCondition { condition: 1, .. })
        ));
    }

    #[test]
    fn preorder_counts_round_trip() {
        for s in enumerate_shapes(6, ShapeConstraint::All) {
            let counts = s.preorder_child_counts();
            assert_eq!(PlaneTree::from_preorder_child_counts(&counts), Some(s));
        }
        assert_eq!(PlaneTree::from_preorder_child_counts(&[2, 0]), None);
    }
}
