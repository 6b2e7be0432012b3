//! Noncrossing partitions of `[n] = {1, ..., n}`, their Kreweras and
//! Simion-Ullman duals, and the block/dual-block adjacency structure.
//!
//! Everything is 1-based. A dual partition lives on the primed points
//! `1', ..., n'` placed on the circle as `1 < 1' < 2 < 2' < ... < n < n'`;
//! it is stored as an ordinary [`NoncrossingPartition`] on `[n]` with the
//! primes left implicit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A noncrossing set partition of `[n]` in canonical form: each block is
/// strictly increasing and blocks are sorted by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct NoncrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for NoncrossingPartition {
    type Error = Error;

    fn try_from(repr: PartitionRepr) -> Result<Self> {
        NoncrossingPartition::new(repr.n, repr.blocks)
    }
}

impl From<NoncrossingPartition> for PartitionRepr {
    fn from(p: NoncrossingPartition) -> Self {
        PartitionRepr { n: p.n, blocks: p.blocks }
    }
}

/// An edge of the bipartite block/dual-block tree of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualAdjacency {
    pub block_index: usize,
    pub dual_block_index: usize,
    /// The element `i` with `i` in the block and `i'` in the dual block.
    pub gamma: usize,
}

impl NoncrossingPartition {
    /// Validates and canonicalizes `blocks` as a noncrossing partition of `[n]`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let ids = block_assignment(n, &blocks)?;
        if let Some((a, b)) = first_crossing(&ids) {
            let canon = canonical_blocks(&ids);
            return Err(Error::Crossing {
                first: canon[a].clone(),
                second: canon[b].clone(),
            });
        }
        Ok(Self::from_assignment_unchecked(&ids))
    }

    /// Builds a partition from `ids[i - 1] = block label of i`. Labels are
    /// arbitrary; the caller guarantees the result is noncrossing.
    pub(crate) fn from_assignment_unchecked(ids: &[usize]) -> Self {
        NoncrossingPartition {
            n: ids.len(),
            blocks: canonical_blocks(ids),
        }
    }

    /// Like [`from_assignment_unchecked`](Self::from_assignment_unchecked)
    /// but rejects crossing assignments.
    pub fn from_assignment(ids: &[usize]) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if let Some((a, b)) = first_crossing(ids) {
            let canon = canonical_blocks(ids);
            return Err(Error::Crossing {
                first: canon[a].clone(),
                second: canon[b].clone(),
            });
        }
        Ok(Self::from_assignment_unchecked(ids))
    }

    /// The minimum `{1}|{2}|...|{n}`.
    pub fn singletons(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(NoncrossingPartition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        })
    }

    /// The maximum `{1, ..., n}`.
    pub fn full(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(NoncrossingPartition {
            n,
            blocks: vec![(1..=n).collect()],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `ids[i - 1]` is the index in [`blocks`](Self::blocks) of the block holding `i`.
    pub fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                ids[i - 1] = b;
            }
        }
        ids
    }

    pub fn block_of(&self, element: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&element).is_ok())
    }

    pub fn contains_singleton(&self, element: usize) -> bool {
        self.blocks.iter().any(|b| b.len() == 1 && b[0] == element)
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &NoncrossingPartition) -> bool {
        if self.n != other.n {
            return false;
        }
        let ids = other.block_ids();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&i| ids[i - 1] == ids[b[0] - 1]))
    }

    /// Joins the blocks with the given indices into one block. Returns `None`
    /// when the result is crossing.
    pub fn merge_blocks(&self, indices: &[usize]) -> Option<NoncrossingPartition> {
        let mut ids = self.block_ids();
        let target = *indices.first()?;
        for id in ids.iter_mut() {
            if indices.contains(id) {
                *id = target;
            }
        }
        if first_crossing(&ids).is_some() {
            None
        } else {
            Some(Self::from_assignment_unchecked(&ids))
        }
    }

    /// Restriction to a subset of the ground set, relabelled to `[m]` in
    /// increasing order.
    pub fn restrict(&self, subset: &[usize]) -> Result<NoncrossingPartition> {
        let ids = self.block_ids();
        let sub: Vec<usize> = subset.iter().map(|&i| ids[i - 1]).collect();
        NoncrossingPartition::from_assignment(&sub)
    }

    /// Kreweras dual on the primed points, returned on `[n]`.
    ///
    /// With `p` the permutation sending each element to the next element of
    /// its block (cyclically) and `c = (1 2 ... n)`, the dual blocks are the
    /// cycles of `p^{-1} c`.
    pub fn kreweras_dual(&self) -> NoncrossingPartition {
        let n = self.n;
        let mut prev = vec![0usize; n + 1];
        for block in &self.blocks {
            for (t, &x) in block.iter().enumerate() {
                let before = block[(t + block.len() - 1) % block.len()];
                prev[x] = before;
            }
        }
        let step = |i: usize| prev[i % n + 1];
        let mut ids = vec![usize::MAX; n];
        let mut next_id = 0;
        for start in 1..=n {
            if ids[start - 1] != usize::MAX {
                continue;
            }
            let mut i = start;
            while ids[i - 1] == usize::MAX {
                ids[i - 1] = next_id;
                i = step(i);
            }
            next_id += 1;
        }
        Self::from_assignment_unchecked(&ids)
    }

    /// Simion-Ullman dual: the dual point sitting between `i` and `i + 1`
    /// is labelled `(n + 1 - i)'` instead of `i'`.
    pub fn simion_ullman_dual(&self) -> NoncrossingPartition {
        let n = self.n;
        let kd = self.kreweras_dual();
        let kids = kd.block_ids();
        let mut ids = vec![0; n];
        for i in 1..=n {
            ids[n - i] = kids[i - 1];
        }
        Self::from_assignment_unchecked(&ids)
    }

    /// The `n` block/dual-block adjacencies, sorted by `gamma`.
    pub fn adjacencies(&self) -> Vec<DualAdjacency> {
        let ids = self.block_ids();
        let dual_ids = self.kreweras_dual().block_ids();
        (1..=self.n)
            .map(|i| DualAdjacency {
                block_index: ids[i - 1],
                dual_block_index: dual_ids[i - 1],
                gamma: i,
            })
            .collect()
    }

    /// Every block and every dual block has size `1 mod d`.
    pub fn is_d_indivisible(&self, d: usize) -> bool {
        if d == 0 {
            return false;
        }
        let ok = |blocks: &[Vec<usize>]| blocks.iter().all(|b| b.len() % d == 1 % d);
        ok(&self.blocks) && ok(&self.kreweras_dual().blocks)
    }

    /// Same predicate via cyclic gaps: `n = 1 mod d` and the number of
    /// elements strictly between cyclically consecutive elements of any
    /// nonsingleton block is a multiple of `d`.
    pub fn is_d_indivisible_by_gaps(&self, d: usize) -> bool {
        if d == 0 || self.n % d != 1 % d {
            return false;
        }
        let n = self.n;
        self.blocks.iter().filter(|b| b.len() > 1).all(|b| {
            b.iter().enumerate().all(|(t, &i)| {
                let j = b[(t + 1) % b.len()];
                let between = if j > i { j - i - 1 } else { n - i + j - 1 };
                between % d == 0
            })
        })
    }

    /// Rank in `NC^d_n`, assuming membership.
    pub fn rank(&self, d: usize) -> usize {
        (self.n - self.blocks.len()) / d
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", text.join("|"))
    }
}

/// Parses the bar notation `1|2,9,10|3|4,5,6,7,8|11`; `n` is the largest element.
impl FromStr for NoncrossingPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.trim().split('|') {
            let block = part
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        NoncrossingPartition::new(n, blocks)
    }
}

/// Checks that `blocks` is a set partition of `[n]` and reports whether it is
/// noncrossing.
pub fn is_noncrossing(n: usize, blocks: &[Vec<usize>]) -> Result<bool> {
    let ids = block_assignment(n, blocks)?;
    Ok(first_crossing(&ids).is_none())
}

/// Number of moves from `b` to `c` when reading `b ∪ c'` around the
/// interleaved cycle `1 < 1' < 2 < ... < n < n'`.
pub fn intertwining_number(b: &[usize], c: &[usize], n: usize) -> usize {
    if b.is_empty() || c.is_empty() {
        return 0;
    }
    // element i sits at position 2i - 1, its primed twin at 2i
    let mut marks = vec![None; 2 * n + 1];
    for &i in b {
        marks[2 * i - 1] = Some(false);
    }
    for &i in c {
        marks[2 * i] = Some(true);
    }
    let seq: Vec<bool> = marks.into_iter().flatten().collect();
    (0..seq.len())
        .filter(|&t| !seq[t] && seq[(t + 1) % seq.len()])
        .count()
}

/// All noncrossing partitions of `[n]`, found by filtering every set
/// partition (restricted growth strings). Bell-number work; meant as an
/// oracle for small `n`.
pub fn enumerate_by_filter(n: usize) -> Vec<NoncrossingPartition> {
    fn grow(ids: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<NoncrossingPartition>) {
        if ids.len() == n {
            if first_crossing(ids).is_none() {
                out.push(NoncrossingPartition::from_assignment_unchecked(ids));
            }
            return;
        }
        for b in 0..=max + 1 {
            ids.push(b);
            grow(ids, max.max(b), n, out);
            ids.pop();
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut ids = vec![0];
    grow(&mut ids, 0, n, &mut out);
    out.sort();
    out
}

fn block_assignment(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let mut ids = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::NotASetPartition {
                n,
                reason: "empty block".into(),
            });
        }
        for &i in block {
            if i == 0 || i > n {
                return Err(Error::NotASetPartition {
                    n,
                    reason: format!("element {i} out of range"),
                });
            }
            if ids[i - 1] != usize::MAX {
                return Err(Error::NotASetPartition {
                    n,
                    reason: format!("element {i} repeated"),
                });
            }
            ids[i - 1] = b;
        }
    }
    if let Some(missing) = ids.iter().position(|&x| x == usize::MAX) {
        return Err(Error::NotASetPartition {
            n,
            reason: format!("element {} missing", missing + 1),
        });
    }
    Ok(ids)
}

fn canonical_blocks(ids: &[usize]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (t, &id) in ids.iter().enumerate() {
        match order.iter().position(|&o| o == id) {
            Some(b) => blocks[b].push(t + 1),
            None => {
                order.push(id);
                blocks.push(vec![t + 1]);
            }
        }
    }
    blocks
}

/// Stack scan for the pattern `a..b..a..b`. Returns canonical indices of a
/// crossing pair, if any.
fn first_crossing(ids: &[usize]) -> Option<(usize, usize)> {
    let max = ids.iter().copied().max().unwrap_or(0);
    let mut last = vec![0usize; max + 1];
    let mut canon = vec![usize::MAX; max + 1];
    let mut next = 0;
    for (t, &id) in ids.iter().enumerate() {
        last[id] = t;
        if canon[id] == usize::MAX {
            canon[id] = next;
            next += 1;
        }
    }
    let mut seen = vec![false; max + 1];
    let mut stack: Vec<usize> = Vec::new();
    for (t, &id) in ids.iter().enumerate() {
        if !seen[id] {
            seen[id] = true;
            stack.push(id);
        } else if let Some(&top) = stack.last() {
            if top != id {
                return Some((canon[id], canon[top]));
            }
        }
        if last[id] == t {
            stack.pop();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NoncrossingPartition {
        s.parse().unwrap()
    }

    fn eleven_point_partition() -> NoncrossingPartition {
        NoncrossingPartition::new(
            11,
            vec![vec![1], vec![2, 9, 10], vec![3], vec![4, 5, 6, 7, 8], vec![11]],
        )
        .unwrap()
    }

    #[test]
    fn crossing_detection() {
        assert!(!is_noncrossing(4, &[vec![1, 3], vec![2, 4]]).unwrap());
        let singles: Vec<Vec<usize>> = (1..=5).map(|i| vec![i]).collect();
        assert!(is_noncrossing(5, &singles).unwrap());
        assert!(is_noncrossing(
            11,
            &[vec![1], vec![2, 9, 10], vec![3], vec![4, 5, 6, 7, 8], vec![11]]
        )
        .unwrap());
    }

    #[test]
    fn rejects_non_partitions() {
        assert!(matches!(
            is_noncrossing(3, &[vec![1, 2], vec![2, 3]]),
            Err(Error::NotASetPartition { .. })
        ));
        assert!(matches!(
            is_noncrossing(3, &[vec![1, 2]]),
            Err(Error::NotASetPartition { .. })
        ));
        assert!(matches!(
            NoncrossingPartition::new(0, vec![]),
            Err(Error::EmptyGroundSet)
        ));
        assert!(matches!(
            NoncrossingPartition::new(4, vec![vec![3, 1], vec![4, 2]]),
            Err(Error::Crossing { .. })
        ));
    }

    #[test]
    fn canonical_form() {
        let a = NoncrossingPartition::new(4, vec![vec![4], vec![3, 2], vec![1]]).unwrap();
        assert_eq!(a.blocks(), &[vec![1], vec![2, 3], vec![4]]);
        assert_eq!(a.to_string(), "1|2,3|4");
    }

    #[test]
    fn kreweras_examples() {
        assert_eq!(
            eleven_point_partition().kreweras_dual(),
            p("1,10,11|2,3,8|4|5|6|7|9")
        );
        assert_eq!(
            NoncrossingPartition::singletons(6).unwrap().kreweras_dual(),
            NoncrossingPartition::full(6).unwrap()
        );
        assert_eq!(p("1,2|3").kreweras_dual(), p("1|2,3"));
    }

    #[test]
    fn simion_ullman_extremes() {
        assert_eq!(
            NoncrossingPartition::full(5).unwrap().simion_ullman_dual(),
            NoncrossingPartition::singletons(5).unwrap()
        );
        for pi in enumerate_by_filter(5) {
            assert_eq!(pi.simion_ullman_dual().simion_ullman_dual(), pi);
        }
    }

    #[test]
    fn adjacency_small_cases() {
        let one = NoncrossingPartition::singletons(1).unwrap();
        let adj = one.adjacencies();
        assert_eq!(adj.len(), 1);
        assert_eq!(adj[0].gamma, 1);
        let pi = eleven_point_partition();
        let gammas: Vec<usize> = pi.adjacencies().iter().map(|a| a.gamma).collect();
        assert_eq!(gammas, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn indivisibility_examples() {
        let pi = eleven_point_partition();
        assert!(pi.is_d_indivisible(2));
        assert!(pi.is_d_indivisible_by_gaps(2));
        assert!(NoncrossingPartition::full(7).unwrap().is_d_indivisible(3));
        assert!(p("1,2,3|4|5").is_d_indivisible(2));
        assert!(!p("1,2|3|4|5").is_d_indivisible(2));
        assert!(!p("1,2|3|4|5").is_d_indivisible_by_gaps(2));
    }

    #[test]
    fn intertwining_examples() {
        assert_eq!(intertwining_number(&[], &[1, 2], 3), 0);
        assert_eq!(intertwining_number(&[1], &[1], 1), 1);
        assert_eq!(intertwining_number(&[1, 3], &[1, 3], 4), 2);
    }

    #[test]
    fn filter_counts_are_catalan() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_by_filter(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let pi = eleven_point_partition();
        let text = serde_json::to_string(&pi).unwrap();
        assert_eq!(text, r#"{"n":11,"blocks":[[1],[2,9,10],[3],[4,5,6,7,8],[11]]}"#);
        let back: NoncrossingPartition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, pi);
        assert!(serde_json::from_str::<NoncrossingPartition>(r#"{"n":4,"blocks":[[1,3],[2,4]]}"#).is_err());
    }
}
