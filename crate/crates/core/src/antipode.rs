//! The antipode of `NC^d_n` in the incidence Hopf algebra, computed from
//! chains of the poset and from noncrossing hypertrees.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::NoncrossingPartition;
use crate::poset::{factorization_of, GradedPoset};

/// Default cap on the number of strict chains summed by
/// [`antipode_schmitt`].
pub const CHAIN_BUDGET: u128 = 10_000_000;

/// A finite integer combination of products `Π_m NC^d_m`, each product
/// written as the sorted multiset of its sizes with 1s removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfElement {
    terms: BTreeMap<Vec<usize>, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfTerm {
    pub sizes: Vec<usize>,
    pub coeff: i64,
}

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty product with coefficient 1.
    pub fn unit() -> Self {
        Self::monomial(Vec::new(), 1)
    }

    pub fn monomial(sizes: Vec<usize>, coeff: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(sizes, coeff);
        out
    }

    pub fn add_term(&mut self, mut sizes: Vec<usize>, coeff: i64) {
        sizes.retain(|&m| m > 1);
        sizes.sort_unstable();
        let entry = self.terms.entry(sizes.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&sizes);
        }
    }

    pub fn add(&mut self, other: &HopfElement) {
        for (s, &c) in &other.terms {
            self.add_term(s.clone(), c);
        }
    }

    /// Product with a single monomial: sizes are concatenated.
    pub fn times(&self, sizes: &[usize], coeff: i64) -> HopfElement {
        let mut out = Self::zero();
        for (s, &c) in &self.terms {
            let mut joined = s.clone();
            joined.extend_from_slice(sizes);
            out.add_term(joined, c * coeff);
        }
        out
    }

    pub fn coefficient(&self, sizes: &[usize]) -> i64 {
        let mut key: Vec<usize> = sizes.iter().copied().filter(|&m| m > 1).collect();
        key.sort_unstable();
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> Vec<HopfTerm> {
        self.terms
            .iter()
            .map(|(s, &c)| HopfTerm {
                sizes: s.clone(),
                coeff: c,
            })
            .collect()
    }

    /// Replaces every factor `[m]` by a number and sums.
    pub fn evaluate(&self, value: impl Fn(usize) -> i64) -> i64 {
        self.terms
            .iter()
            .map(|(s, &c)| c * s.iter().map(|&m| value(m)).product::<i64>())
            .sum()
    }
}

impl fmt::Display for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (s, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (idx, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            let parts: Vec<String> = s.iter().map(|m| m.to_string()).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

/// `Σ_chains (-1)^k Π_i [x_{i-1}, x_i]` over all strict chains
/// `bottom = x_0 < ... < x_k = top`, each interval replaced by its factor
/// sizes.
pub fn antipode_schmitt(p: &GradedPoset) -> Result<HopfElement> {
    antipode_schmitt_with_budget(p, CHAIN_BUDGET)
}

pub fn antipode_schmitt_with_budget(p: &GradedPoset, budget: u128) -> Result<HopfElement> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(p.rank_of(i)));
    let above: Vec<Vec<usize>> = (0..p.len())
        .map(|x| {
            (0..p.len())
                .filter(|&y| p.rank_of(y) > p.rank_of(x) && p.leq(x, y))
                .collect()
        })
        .collect();
    let mut count = vec![0u128; p.len()];
    count[p.top()] = 1;
    for &x in &order {
        if x != p.top() {
            count[x] = above[x].iter().map(|&y| count[y]).fold(0u128, u128::saturating_add);
        }
    }
    if count[p.bottom()] > budget {
        return Err(Error::BudgetExceeded {
            predicted: count[p.bottom()],
            budget,
        });
    }
    let mut from: Vec<Option<HopfElement>> = vec![None; p.len()];
    from[p.top()] = Some(HopfElement::unit());
    for &x in &order {
        if x == p.top() {
            continue;
        }
        let mut acc = HopfElement::zero();
        for &y in &above[x] {
            let sizes = factorization_of(p.element(x), p.element(y), p.d()).sizes;
            acc.add(&from[y].as_ref().expect("processed by rank").times(&sizes, -1));
        }
        from[x] = Some(acc);
    }
    Ok(from[p.bottom()].take().expect("bottom processed"))
}

/// A set of hyperedges on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hypertree {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypertree {
    /// Sorts vertices within edges and edges lexicographically.
    pub fn new(n: usize, mut edges: Vec<Vec<usize>>) -> Self {
        for e in &mut edges {
            e.sort_unstable();
        }
        edges.sort();
        Hypertree { n, edges }
    }

    pub fn edge_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.edges.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut uf = UnionFind::<usize>::new(self.n + 1);
        for e in &self.edges {
            for w in e.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        (2..=self.n).all(|v| uf.equiv(1, v))
    }

    /// Connected, `Σ(|E| - 1) = n - 1`, edges of size at least 2 inside
    /// `[n]`, pairwise sharing at most one vertex and pairwise noncrossing.
    pub fn is_noncrossing_hypertree(&self) -> bool {
        let in_range = self
            .edges
            .iter()
            .all(|e| e.len() >= 2 && e.iter().all(|&v| (1..=self.n).contains(&v)));
        let excess: usize = self.edges.iter().map(|e| e.len() - 1).sum();
        in_range
            && excess + 1 == self.n
            && self.is_connected()
            && self.edges.iter().enumerate().all(|(a, e)| {
                self.edges[a + 1..]
                    .iter()
                    .all(|f| e.iter().filter(|v| f.contains(v)).count() <= 1 && !edges_cross(e, f))
            })
    }
}

/// Whether some `i < j < k < l` has `i, k` in `e` and `j, l` in `f`, or the
/// same with the roles exchanged.
fn edges_cross(e: &[usize], f: &[usize]) -> bool {
    fn pattern(e: &[usize], f: &[usize]) -> bool {
        e.iter().any(|&i| {
            f.iter().any(|&j| {
                j > i
                    && e.iter()
                        .any(|&k| k > j && f.iter().any(|&l| l > k))
            })
        })
    }
    pattern(e, f) || pattern(f, e)
}

impl fmt::Display for Hypertree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let vs: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

type Edges = Vec<Vec<usize>>;

struct HypertreeBuilder {
    d: usize,
    /// Trees on `{0, ..., len-1}` by `len`.
    trees: HashMap<usize, Vec<Edges>>,
    /// Trees on `{0, ..., len-1}` with `0` and `len-1` in one edge.
    closed: HashMap<usize, Vec<Edges>>,
}

fn shifted(edges: &Edges, by: usize) -> Edges {
    edges
        .iter()
        .map(|e| e.iter().map(|v| v + by).collect())
        .collect()
}

impl HypertreeBuilder {
    fn trees(&mut self, len: usize) -> Vec<Edges> {
        if let Some(hit) = self.trees.get(&len) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if len == 1 {
            out.push(Vec::new());
        }
        // m is the largest vertex sharing an edge with vertex 0
        for m in 1..len {
            let left = self.closed(m + 1);
            let right = self.trees(len - m);
            for l in &left {
                for r in &right {
                    let mut edges = l.clone();
                    edges.extend(shifted(r, m));
                    out.push(edges);
                }
            }
        }
        self.trees.insert(len, out.clone());
        out
    }

    fn closed(&mut self, len: usize) -> Vec<Edges> {
        if let Some(hit) = self.closed.get(&len) {
            return hit.clone();
        }
        let last = len - 1;
        let mut out = Vec::new();
        // the edge through 0 and last, with interior vertices `mid`
        for mask in 0u64..(1u64 << (len.saturating_sub(2))) {
            let mut edge = vec![0];
            edge.extend((1..last).filter(|v| mask >> (v - 1) & 1 == 1));
            edge.push(last);
            if edge.len() % self.d != 1 % self.d {
                continue;
            }
            let mut partial: Vec<Edges> = vec![vec![edge.clone()]];
            for w in edge.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let mut next = Vec::new();
                // split the gap into [lo, c] and [c+1, hi]
                for c in lo..hi {
                    let a = self.trees(c - lo + 1);
                    let b = self.trees(hi - c);
                    for base in &partial {
                        for x in &a {
                            for y in &b {
                                let mut edges = base.clone();
                                edges.extend(shifted(x, lo));
                                edges.extend(shifted(y, c + 1));
                                next.push(edges);
                            }
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        self.closed.insert(len, out.clone());
        out
    }
}

/// Noncrossing hypertrees on `[n]` with every edge of size `1 mod d`.
pub fn enumerate_hypertrees(n: usize, d: usize) -> Result<Vec<Hypertree>> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if d == 0 {
        return Err(Error::ZeroD);
    }
    if n % d != 1 % d {
        return Err(Error::EmptyPosetFamily { n, d });
    }
    let mut b = HypertreeBuilder {
        d,
        trees: HashMap::new(),
        closed: HashMap::new(),
    };
    let mut out: Vec<Hypertree> = b
        .trees(n)
        .iter()
        .map(|edges| Hypertree::new(n, shifted(edges, 1)))
        .collect();
    out.sort();
    Ok(out)
}

/// The same set by filtering all families of candidate edges. Exponential.
pub fn enumerate_hypertrees_brute(n: usize, d: usize) -> Vec<Hypertree> {
    let candidates: Vec<Vec<usize>> = (1u64..(1 << n))
        .map(|mask| (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(|e| e.len() >= 2 && e.len() % d == 1 % d)
        .collect();
    let mut out = Vec::new();
    fn pick(
        n: usize,
        candidates: &[Vec<usize>],
        start: usize,
        excess: usize,
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<Hypertree>,
    ) {
        if excess == n - 1 {
            let t = Hypertree::new(n, chosen.clone());
            if t.is_noncrossing_hypertree() {
                out.push(t);
            }
            return;
        }
        for i in start..candidates.len() {
            let e = &candidates[i];
            if excess + e.len() - 1 < n {
                chosen.push(e.clone());
                pick(n, candidates, i + 1, excess + e.len() - 1, chosen, out);
                chosen.pop();
            }
        }
    }
    pick(n, &candidates, 0, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `Σ_T (-1)^{|T|} Π_{E in T} [|E|]`.
pub fn antipode_hypertrees(n: usize, d: usize) -> Result<HopfElement> {
    let mut out = HopfElement::zero();
    for t in enumerate_hypertrees(n, d)? {
        let sign = if t.edges.len() % 2 == 0 { 1 } else { -1 };
        out.add_term(t.edge_sizes(), sign);
    }
    Ok(out)
}

/// `Σ_T (-1)^{|T|}`.
pub fn mobius_via_hypertrees(n: usize, d: usize) -> Result<i64> {
    Ok(enumerate_hypertrees(n, d)?
        .iter()
        .map(|t| if t.edges.len() % 2 == 0 { 1 } else { -1 })
        .sum())
}

/// The hypergraph `φ(π, σ)`: for each dual block `C'` of `π`, the blocks of
/// `π` adjacent to `C'` that lie in a common block of `σ` give one edge made
/// of their adjacency labels, when there are at least two of them.
pub fn phi(pi: &NoncrossingPartition, sigma: &NoncrossingPartition) -> Result<Vec<Vec<usize>>> {
    if pi.n() != sigma.n() || !pi.refines(sigma) || pi == sigma {
        return Err(Error::NotStrictlyBelow);
    }
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for adj in pi.adjacencies() {
        let rep = pi.blocks()[adj.block_index][0];
        let target = sigma.block_of(rep).expect("same ground set");
        groups
            .entry((adj.dual_block_index, target))
            .or_default()
            .push(adj.gamma);
    }
    let mut edges: Vec<Vec<usize>> = groups
        .into_values()
        .filter(|g| g.len() >= 2)
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    edges.sort();
    Ok(edges)
}

/// `φ` of a chain: the union of `φ` over its consecutive steps.
pub fn phi_chain(chain: &[NoncrossingPartition]) -> Result<Hypertree> {
    let n = chain.first().ok_or(Error::NotAnElement)?.n();
    let mut edges = Vec::new();
    for w in chain.windows(2) {
        edges.extend(phi(&w[0], &w[1])?);
    }
    Ok(Hypertree::new(n, edges))
}
