//! d-parking trees: plane trees whose non-root vertices carry labels `i_j`,
//! with the vertices `i_1, ..., i_d` forming one run of siblings.

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::{DParkingFunction, MaximalChain};
use crate::error::{Error, Result};
use crate::partition::NoncrossingPartition;
use crate::plane_tree::{enumerate_shapes, PlaneTree, ShapeConstraint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Infinity,
    Index { i: usize, j: usize },
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Infinity => write!(f, "inf"),
            VertexLabel::Index { i, j } => write!(f, "{i}_{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParkingNode {
    pub label: VertexLabel,
    pub children: Vec<ParkingNode>,
}

impl ParkingNode {
    fn shape(&self) -> PlaneTree {
        PlaneTree::with_children(self.children.iter().map(ParkingNode::shape).collect())
    }

    fn relabel(&self, f: &impl Fn(VertexLabel) -> VertexLabel) -> ParkingNode {
        ParkingNode {
            label: f(self.label),
            children: self.children.iter().map(|c| c.relabel(f)).collect(),
        }
    }
}

/// One vertex in preorder: its label and the preorder position of its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatVertex {
    pub label: VertexLabel,
    pub parent: Option<usize>,
}

/// A d-parking tree on `dk + 1` vertices.
///
/// Trees built with [`DParkingTree::new`] satisfy every labeling rule,
/// including that sibling blocks with larger `i` sit further left.
/// [`DParkingTree::new_relaxed`] drops that ordering rule; straightened and
/// expanded trees generally need it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DParkingTree {
    d: usize,
    k: usize,
    root: ParkingNode,
}

impl DParkingTree {
    pub fn new(d: usize, root: ParkingNode) -> Result<Self> {
        let t = Self::new_relaxed(d, root)?;
        t.check_sibling_order()?;
        Ok(t)
    }

    pub fn new_relaxed(d: usize, root: ParkingNode) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroD);
        }
        let bad = |detail: String| Error::InvalidParkingTree { d, detail };
        if root.label != VertexLabel::Infinity {
            return Err(bad("root must be labeled inf".into()));
        }
        let n = count_vertices(&root);
        if !(n - 1).is_multiple_of(d) {
            return Err(bad(format!("{n} vertices is not dk+1")));
        }
        let k = (n - 1) / d;
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack = vec![&root];
        while let Some(v) = stack.pop() {
            if v.children.len() % d != 0 {
                return Err(bad(format!(
                    "vertex {} has {} children",
                    v.label,
                    v.children.len()
                )));
            }
            for run in v.children.chunks(d) {
                let i = match run[0].label {
                    VertexLabel::Index { i, .. } if (1..=k).contains(&i) => i,
                    other => return Err(bad(format!("bad label {other}"))),
                };
                for (pos, c) in run.iter().enumerate() {
                    if c.label != (VertexLabel::Index { i, j: pos + 1 }) {
                        return Err(bad(format!(
                            "expected {i}_{} but found {}",
                            pos + 1,
                            c.label
                        )));
                    }
                }
                if let Some(prev) = seen.insert(i, 1) {
                    return Err(bad(format!("index {i} used {} times", prev + 1)));
                }
            }
            stack.extend(v.children.iter());
        }
        Ok(DParkingTree { d, k, root })
    }

    fn check_sibling_order(&self) -> Result<()> {
        let mut stack = vec![&self.root];
        while let Some(v) = stack.pop() {
            let ids: Vec<usize> = v.children.iter().step_by(self.d).map(block_index).collect();
            if ids.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidParkingTree {
                    d: self.d,
                    detail: format!("sibling blocks under {} are not decreasing", v.label),
                });
            }
            stack.extend(v.children.iter());
        }
        Ok(())
    }

    /// Whether sibling blocks decrease from left to right everywhere.
    pub fn is_strict(&self) -> bool {
        self.check_sibling_order().is_ok()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.d * self.k + 1
    }

    pub fn root(&self) -> &ParkingNode {
        &self.root
    }

    /// Vertices in preorder; the DFS number of a vertex is its position
    /// plus one.
    pub fn flatten(&self) -> Vec<FlatVertex> {
        fn walk(v: &ParkingNode, parent: Option<usize>, out: &mut Vec<FlatVertex>) {
            let me = out.len();
            out.push(FlatVertex {
                label: v.label,
                parent,
            });
            for c in &v.children {
                walk(c, Some(me), out);
            }
        }
        let mut out = Vec::with_capacity(self.n());
        walk(&self.root, None, &mut out);
        out
    }

    /// Depth-first numbering `ω`: each label with its number in `[1, n]`.
    pub fn dfs_order(&self) -> Vec<(VertexLabel, usize)> {
        self.flatten()
            .iter()
            .enumerate()
            .map(|(pos, v)| (v.label, pos + 1))
            .collect()
    }

    /// `a_i = ω(parent of i_1)`.
    pub fn to_parking(&self) -> DParkingFunction {
        let mut values = vec![0; self.k];
        for v in self.flatten() {
            if let VertexLabel::Index { i, j: 1 } = v.label {
                values[i - 1] = v.parent.expect("non-root") + 1;
            }
        }
        DParkingFunction::new(self.d, values).expect("tree labels give a parking function")
    }

    pub fn shape(&self) -> PlaneTree {
        self.root.shape()
    }

    /// Relabels sibling blocks `1, ..., k` in order of parent DFS number,
    /// then left to right.
    pub fn straighten(&self) -> DParkingTree {
        let flat = self.flatten();
        let mut firsts: Vec<(usize, usize, usize)> = flat
            .iter()
            .enumerate()
            .filter_map(|(pos, v)| match v.label {
                VertexLabel::Index { i, j: 1 } => Some((v.parent.unwrap(), pos, i)),
                _ => None,
            })
            .collect();
        firsts.sort_unstable();
        let order: BTreeMap<usize, usize> = firsts
            .iter()
            .enumerate()
            .map(|(rank, &(_, _, i))| (i, rank + 1))
            .collect();
        let root = self.root.relabel(&|l| match l {
            VertexLabel::Index { i, j } => VertexLabel::Index { i: order[&i], j },
            VertexLabel::Infinity => l,
        });
        DParkingTree::new_relaxed(self.d, root).expect("relabeling keeps structure")
    }

    /// The 1-parking tree with `i_j` replaced by `((i-1)d + j)_1`.
    pub fn expansion(&self) -> DParkingTree {
        let d = self.d;
        let root = self.root.relabel(&|l| match l {
            VertexLabel::Index { i, j } => VertexLabel::Index {
                i: (i - 1) * d + j,
                j: 1,
            },
            VertexLabel::Infinity => l,
        });
        DParkingTree::new_relaxed(1, root).expect("expansion keeps structure")
    }

    /// Components after keeping only the parent edges of `i_j` with `i`
    /// outside `removed`, on the DFS numbers.
    pub fn partition_from_subset(&self, removed: &[usize]) -> NoncrossingPartition {
        self.components(|i| !removed.contains(&i))
    }

    fn components(&self, keep: impl Fn(usize) -> bool) -> NoncrossingPartition {
        let flat = self.flatten();
        let mut uf = UnionFind::<usize>::new(flat.len());
        for (pos, v) in flat.iter().enumerate() {
            if let (VertexLabel::Index { i, .. }, Some(p)) = (v.label, v.parent) {
                if keep(i) {
                    uf.union(pos, p);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        let ids: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = first.len();
                *first.entry(l).or_insert(next)
            })
            .collect();
        NoncrossingPartition::from_assignment(&ids).expect("tree components are noncrossing")
    }

    /// `π_i` = components of the parent edges of all `j_s` with `j <= i`.
    pub fn to_chain(&self) -> Result<MaximalChain> {
        let steps = (0..=self.k).map(|i| self.components(|j| j <= i)).collect();
        MaximalChain::new(self.d, steps)
    }

    pub fn to_dump(&self) -> ParkingTreeDump {
        ParkingTreeDump {
            d: self.d,
            k: self.k,
            tree: node_to_value(&self.root),
        }
    }

    /// Parses a dump, enforcing every labeling rule.
    pub fn from_dump(dump: &ParkingTreeDump) -> Result<Self> {
        let t = DParkingTree::new(dump.d, value_to_node(&dump.tree)?)?;
        if t.k != dump.k {
            return Err(Error::Parse(format!("k = {} but tree has k = {}", dump.k, t.k)));
        }
        Ok(t)
    }
}

fn block_index(v: &ParkingNode) -> usize {
    match v.label {
        VertexLabel::Index { i, .. } => i,
        VertexLabel::Infinity => 0,
    }
}

fn count_vertices(v: &ParkingNode) -> usize {
    1 + v.children.iter().map(count_vertices).sum::<usize>()
}

impl fmt::Display for DParkingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(v: &ParkingNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{}", v.label)?;
            if !v.children.is_empty() {
                write!(f, "(")?;
                for (idx, c) in v.children.iter().enumerate() {
                    if idx > 0 {
                        write!(f, " ")?;
                    }
                    walk(c, f)?;
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        walk(&self.root, f)
    }
}

/// JSON form `{"d", "k", "tree"}` where a vertex is `[label, [children]]`
/// and a label is `"inf"` or `[i, j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParkingTreeDump {
    pub d: usize,
    pub k: usize,
    pub tree: Value,
}

fn node_to_value(v: &ParkingNode) -> Value {
    let label = match v.label {
        VertexLabel::Infinity => Value::from("inf"),
        VertexLabel::Index { i, j } => Value::from(vec![i, j]),
    };
    Value::Array(vec![
        label,
        Value::Array(v.children.iter().map(node_to_value).collect()),
    ])
}

fn value_to_node(v: &Value) -> Result<ParkingNode> {
    let bad = || Error::Parse(format!("malformed parking tree vertex: {v}"));
    let [label, children] = v.as_array().map(Vec::as_slice).ok_or_else(bad)? else {
        return Err(bad());
    };
    let label = match label {
        Value::String(s) if s == "inf" => VertexLabel::Infinity,
        Value::Array(pair) => match pair.as_slice() {
            [i, j] => VertexLabel::Index {
                i: i.as_u64().ok_or_else(bad)? as usize,
                j: j.as_u64().ok_or_else(bad)? as usize,
            },
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    };
    let children = children
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(value_to_node)
        .collect::<Result<Vec<_>>>()?;
    Ok(ParkingNode { label, children })
}

/// Attaches labels to `shape`: the vertex at preorder position `p` receives
/// the sibling blocks listed in `blocks[p]`, left to right.
fn label_shape(shape: &PlaneTree, blocks: &[Vec<usize>], d: usize) -> ParkingNode {
    fn walk(
        t: &PlaneTree,
        label: VertexLabel,
        pos: &mut usize,
        blocks: &[Vec<usize>],
        d: usize,
    ) -> ParkingNode {
        let me = *pos;
        *pos += 1;
        let children = t
            .children
            .iter()
            .enumerate()
            .map(|(c, sub)| {
                let l = VertexLabel::Index {
                    i: blocks[me][c / d],
                    j: c % d + 1,
                };
                walk(sub, l, pos, blocks, d)
            })
            .collect();
        ParkingNode { label, children }
    }
    walk(shape, VertexLabel::Infinity, &mut 0, blocks, d)
}

/// The unique d-parking tree whose parking function is `pf`.
///
/// The vertex numbered `j` receives `d·#{i : a_i = j}` children; the shape is
/// assembled from these counts in preorder and the indices with `a_i = j`
/// are placed under vertex `j` in decreasing order.
pub fn parking_to_tree(pf: &DParkingFunction) -> DParkingTree {
    let (d, k) = (pf.d(), pf.k());
    let n = d * k + 1;
    let mut blocks = vec![Vec::new(); n];
    for (idx, &a) in pf.values().iter().enumerate() {
        blocks[a - 1].push(idx + 1);
    }
    for b in &mut blocks {
        b.reverse();
    }
    let counts: Vec<usize> = blocks.iter().map(|b| d * b.len()).collect();
    // inserting children vertex by vertex never runs out of open slots
    let mut total = 0;
    for (j, c) in counts.iter().enumerate().take(n - 1) {
        total += c;
        assert!(
            total > j,
            "child insertion failed at vertex {} for {pf}",
            j + 1
        );
    }
    let shape = PlaneTree::from_preorder_child_counts(&counts)
        .unwrap_or_else(|| panic!("child counts of {pf} do not form a tree"));
    DParkingTree::new(d, label_shape(&shape, &blocks, d))
        .unwrap_or_else(|e| panic!("tree built from {pf} is invalid: {e}"))
}

pub fn tree_to_parking(t: &DParkingTree) -> DParkingFunction {
    t.to_parking()
}

/// Unlabeled shape; chains in one symmetric-group orbit share it.
pub fn shape_orbit_key(t: &DParkingTree) -> PlaneTree {
    t.shape()
}

/// Every d-parking tree on `dk + 1` vertices, generated shape by shape.
pub fn enumerate_parking_trees(d: usize, k: usize) -> Vec<DParkingTree> {
    let mut out = Vec::new();
    for shape in enumerate_shapes(d * k + 1, ShapeConstraint::DDivisible(d)) {
        let sizes: Vec<usize> = shape
            .preorder_child_counts()
            .iter()
            .map(|c| c / d)
            .collect();
        let mut blocks = vec![Vec::new(); sizes.len()];
        distribute(1, k, &sizes, &mut blocks, &mut |blocks| {
            let mut sorted = blocks.to_vec();
            for b in &mut sorted {
                b.sort_unstable_by(|x, y| y.cmp(x));
            }
            out.push(
                DParkingTree::new(d, label_shape(&shape, &sorted, d)).expect("valid by construction"),
            );
        });
    }
    out
}

/// Assigns indices `next..=k` to vertices with capacities `sizes`.
fn distribute(
    next: usize,
    k: usize,
    sizes: &[usize],
    blocks: &mut [Vec<usize>],
    emit: &mut impl FnMut(&[Vec<usize>]),
) {
    if next > k {
        emit(blocks);
        return;
    }
    for v in 0..sizes.len() {
        if blocks[v].len() < sizes[v] {
            blocks[v].push(next);
            distribute(next + 1, k, sizes, blocks, emit);
            blocks[v].pop();
        }
    }
}
