//! Edge labels of maximal chains and d-parking functions.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::NoncrossingPartition;
use crate::poset::GradedPoset;

/// A sequence `(a_1, ..., a_k)` whose sorted rearrangement satisfies
/// `a_(i) <= d(i-1) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ParkingRepr")]
pub struct DParkingFunction {
    d: usize,
    values: Vec<usize>,
}

#[derive(Deserialize)]
struct ParkingRepr {
    d: usize,
    values: Vec<usize>,
}

impl TryFrom<ParkingRepr> for DParkingFunction {
    type Error = Error;

    fn try_from(r: ParkingRepr) -> Result<Self> {
        DParkingFunction::new(r.d, r.values)
    }
}

pub fn is_d_parking(values: &[usize], d: usize) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .enumerate()
        .all(|(i, &a)| a >= 1 && a <= d * i + 1)
}

impl DParkingFunction {
    pub fn new(d: usize, values: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroD);
        }
        if !is_d_parking(&values, d) {
            return Err(Error::NotParking { values, d });
        }
        Ok(DParkingFunction { d, values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Size of the ground set of the matching poset, `dk + 1`.
    pub fn n(&self) -> usize {
        self.d * self.k() + 1
    }

    /// Whether `a_i <= a_{i+1} + d - 1` for every `i`.
    pub fn is_falling(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1] + self.d)
    }
}

impl fmt::Display for DParkingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The parking function of the unique rising chain,
/// `((k-1)d+1, ..., d+1, 1)`.
pub fn rising_parking_function(d: usize, k: usize) -> DParkingFunction {
    DParkingFunction {
        d,
        values: (0..k).rev().map(|i| i * d + 1).collect(),
    }
}

/// A saturated chain `0 = π_0 ⋖ π_1 ⋖ ... ⋖ π_k = 1` of `NC^d_{dk+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MaximalChain {
    d: usize,
    steps: Vec<NoncrossingPartition>,
}

impl MaximalChain {
    pub fn new(d: usize, steps: Vec<NoncrossingPartition>) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::InvalidChain("empty chain".into()))?;
        let n = first.n();
        if *first != NoncrossingPartition::singletons(n)? {
            return Err(Error::InvalidChain("does not start at the minimum".into()));
        }
        if steps.last() != Some(&NoncrossingPartition::full(n)?) {
            return Err(Error::InvalidChain("does not end at the maximum".into()));
        }
        for w in steps.windows(2) {
            edge_label(&w[0], &w[1], d)
                .map_err(|e| Error::InvalidChain(format!("{} -> {}: {e}", w[0], w[1])))?;
        }
        Ok(MaximalChain { d, steps })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> &[NoncrossingPartition] {
        &self.steps
    }

    pub fn n(&self) -> usize {
        self.steps[0].n()
    }

    /// Number of cover steps.
    pub fn k(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn labels(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .map(|w| edge_label(&w[0], &w[1], self.d).expect("validated chain"))
            .collect()
    }

    /// Labels `λ*(π, σ) = |π| - λ(π, σ)`; these may be negative.
    pub fn star_labels(&self) -> Vec<i64> {
        self.steps
            .windows(2)
            .zip(self.labels())
            .map(|(w, l)| w[0].num_blocks() as i64 - l as i64)
            .collect()
    }

    /// Checks that for `r` the largest label and `s` its last position,
    /// `π_{s-1}` has the singleton blocks `{r+1}, ..., {r+d}`.
    pub fn has_trailing_singletons(&self) -> bool {
        let labels = self.labels();
        let Some(&r) = labels.iter().max() else {
            return true;
        };
        let s = labels.iter().rposition(|&l| l == r).unwrap();
        (r + 1..=r + self.d).all(|e| self.steps[s].contains_singleton(e))
    }
}

impl fmt::Display for MaximalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

/// `λ(π, σ)` for a cover `π ⋖ σ` of `NC^d_n`: with the merged blocks
/// `B_1, ..., B_{d+1}` ordered by minima, the largest element of `B_1`
/// below `min B_2`.
pub fn edge_label(pi: &NoncrossingPartition, sigma: &NoncrossingPartition, d: usize) -> Result<usize> {
    let not_cover = |why: &str| Error::NotACover(format!("{pi} -> {sigma}: {why}"));
    if pi.n() != sigma.n() {
        return Err(not_cover("ground sets differ"));
    }
    if !pi.is_d_indivisible(d) || !sigma.is_d_indivisible(d) {
        return Err(not_cover("not both d-indivisible"));
    }
    if !pi.refines(sigma) || pi.num_blocks() != sigma.num_blocks() + d {
        return Err(not_cover("not a single merge of d+1 blocks"));
    }
    let target = sigma
        .blocks()
        .iter()
        .find(|b| pi.block_of(b[0]).map(|i| pi.blocks()[i].len()) != Some(b.len()))
        .ok_or_else(|| not_cover("no merged block"))?;
    let mut merged: Vec<&Vec<usize>> = pi
        .blocks()
        .iter()
        .filter(|b| target.contains(&b[0]))
        .collect();
    if merged.len() != d + 1 {
        return Err(not_cover("merge touches more than one block"));
    }
    merged.sort_by_key(|b| b[0]);
    let bound = merged[1][0];
    Ok(*merged[0].iter().filter(|&&i| i < bound).max().unwrap())
}

pub fn chain_to_parking(chain: &MaximalChain) -> DParkingFunction {
    DParkingFunction {
        d: chain.d,
        values: chain.labels(),
    }
}

/// The unique maximal chain with label sequence `pf`, built recursively by
/// removing the last occurrence of the largest value.
pub fn parking_to_chain(pf: &DParkingFunction) -> MaximalChain {
    let d = pf.d;
    let steps = chain_blocks(&pf.values, d)
        .into_iter()
        .map(|blocks| {
            let n = blocks.iter().map(Vec::len).sum();
            NoncrossingPartition::new(n, blocks).expect("construction stays noncrossing")
        })
        .collect();
    MaximalChain { d, steps }
}

fn chain_blocks(values: &[usize], d: usize) -> Vec<Vec<Vec<usize>>> {
    if values.is_empty() {
        return vec![vec![vec![1]]];
    }
    let r = *values.iter().max().unwrap();
    let s = values.iter().rposition(|&v| v == r).unwrap() + 1;
    let mut shorter = values.to_vec();
    shorter.remove(s - 1);
    let inner = chain_blocks(&shorter, d);
    let relabel = |block: &Vec<usize>| -> Vec<usize> {
        block.iter().map(|&j| if j <= r { j } else { j + d }).collect()
    };
    let mut out = Vec::with_capacity(values.len() + 1);
    for sigma in &inner[..s] {
        let mut blocks: Vec<Vec<usize>> = sigma.iter().map(relabel).collect();
        blocks.extend((r + 1..=r + d).map(|e| vec![e]));
        out.push(blocks);
    }
    for sigma in &inner[s - 1..] {
        let blocks = sigma
            .iter()
            .map(|b| {
                let mut nb = relabel(b);
                if b.contains(&r) {
                    nb.extend(r + 1..=r + d);
                }
                nb
            })
            .collect();
        out.push(blocks);
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All d-parking functions of length `k` in lexicographic order.
pub fn enumerate_parking(d: usize, k: usize) -> Vec<DParkingFunction> {
    fn profiles(d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = prefix.len();
        if i == k {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(1);
        for a in lo..=d * i + 1 {
            prefix.push(a);
            profiles(d, k, prefix, out);
            prefix.pop();
        }
    }
    let mut sorted = Vec::new();
    profiles(d, k, &mut Vec::new(), &mut sorted);
    let mut out = Vec::new();
    for mut p in sorted {
        loop {
            out.push(DParkingFunction {
                d,
                values: p.clone(),
            });
            if !next_permutation(&mut p) {
                break;
            }
        }
    }
    out.sort();
    out
}

/// Number of d-parking functions of length `k` with
/// `a_i <= a_{i+1} + d - 1` throughout.
pub fn falling_count(d: usize, k: usize) -> usize {
    enumerate_parking(d, k)
        .iter()
        .filter(|pf| pf.is_falling())
        .count()
}

/// Result of checking the labeling `λ*` on every interval of a poset.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ElReport {
    pub intervals_checked: usize,
    pub violations: Vec<String>,
    /// `λ` labels of the rising chain of the whole poset.
    pub rising_labels: Vec<usize>,
    /// Number of strictly decreasing `λ*` chains of the whole poset.
    pub falling_chains: usize,
}

impl ElReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every interval `[x, y]` with `x < y` has exactly one chain
/// with weakly increasing `λ*` labels and that it is lexicographically first.
pub fn el_check(p: &GradedPoset) -> ElReport {
    let d = p.d();
    let mut star: HashMap<(usize, usize), i64> = HashMap::new();
    let mut plain: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, b) in p.cover_pairs() {
        let l = edge_label(p.element(a), p.element(b), d).expect("poset covers are covers");
        plain.insert((a, b), l);
        star.insert((a, b), p.element(a).num_blocks() as i64 - l as i64);
    }
    let mut report = ElReport::default();
    for x in 0..p.len() {
        for y in 0..p.len() {
            if x == y || !p.leq(x, y) {
                continue;
            }
            report.intervals_checked += 1;
            let chains = chains_between(p, x, y);
            let labelled: Vec<Vec<i64>> = chains
                .iter()
                .map(|c| c.windows(2).map(|w| star[&(w[0], w[1])]).collect())
                .collect();
            let rising: Vec<usize> = (0..chains.len())
                .filter(|&c| labelled[c].windows(2).all(|w| w[0] <= w[1]))
                .collect();
            let name = || format!("[{}, {}]", p.element(x), p.element(y));
            if rising.len() != 1 {
                report
                    .violations
                    .push(format!("{}: {} rising chains", name(), rising.len()));
                continue;
            }
            let r = rising[0];
            if (0..chains.len()).any(|c| c != r && labelled[c] <= labelled[r]) {
                report
                    .violations
                    .push(format!("{}: rising chain is not lexicographically first", name()));
            }
            if x == p.bottom() && y == p.top() {
                report.rising_labels = chains[r]
                    .windows(2)
                    .map(|w| plain[&(w[0], w[1])])
                    .collect();
                report.falling_chains = labelled
                    .iter()
                    .filter(|l| l.windows(2).all(|w| w[0] > w[1]))
                    .count();
            }
        }
    }
    if p.bottom() == p.top() {
        report.falling_chains = 1;
    }
    report
}

fn chains_between(p: &GradedPoset, x: usize, y: usize) -> Vec<Vec<usize>> {
    fn walk(p: &GradedPoset, y: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *chain.last().unwrap();
        if last == y {
            out.push(chain.clone());
            return;
        }
        for &z in p.covers_of(last) {
            if p.leq(z, y) {
                chain.push(z);
                walk(p, y, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(p, y, &mut vec![x], &mut out);
    out
}

/// Every maximal chain of the poset as a [`MaximalChain`].
pub fn all_chains(p: &GradedPoset) -> Vec<MaximalChain> {
    p.maximal_chains()
        .into_iter()
        .map(|idx| MaximalChain {
            d: p.d(),
            steps: idx.into_iter().map(|i| p.element(i).clone()).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::build_poset;

    fn p(s: &str) -> NoncrossingPartition {
        s.parse().unwrap()
    }

    fn example_chain() -> Vec<NoncrossingPartition> {
        vec![
            NoncrossingPartition::singletons(11).unwrap(),
            p("1|2,3,8|4|5|6|7|9|10|11"),
            p("1,10,11|2,3,8|4|5|6|7|9"),
            p("1,10,11|2,3,6,7,8|4|5|9"),
            p("1,2,3,6,7,8,9,10,11|4|5"),
            NoncrossingPartition::full(11).unwrap(),
        ]
    }

    #[test]
    fn edge_label_examples() {
        let c = example_chain();
        assert_eq!(edge_label(&c[0], &c[1], 2).unwrap(), 2);
        assert_eq!(edge_label(&c[2], &c[3], 2).unwrap(), 3);
        let bottom = NoncrossingPartition::singletons(2).unwrap();
        let top = NoncrossingPartition::full(2).unwrap();
        assert_eq!(edge_label(&bottom, &top, 1).unwrap(), 1);
        assert!(matches!(edge_label(&c[0], &c[2], 2), Err(Error::NotACover(_))));
    }

    #[test]
    fn example_chain_round_trip() {
        let chain = MaximalChain::new(2, example_chain()).unwrap();
        let pf = chain_to_parking(&chain);
        assert_eq!(pf.values(), &[2, 1, 3, 1, 3]);
        assert_eq!(parking_to_chain(&pf), chain);
    }

    #[test]
    fn parking_predicate() {
        assert!(is_d_parking(&[2, 1, 3, 1, 3], 2));
        assert!(!is_d_parking(&[2], 1));
        let count = (1..=3)
            .flat_map(|a| (1..=3).map(move |b| [a, b]))
            .filter(|v| is_d_parking(v, 2))
            .count();
        assert_eq!(count, 5);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_parking(1, 2).len(), 3);
        assert_eq!(enumerate_parking(2, 2).len(), 5);
        assert_eq!(enumerate_parking(1, 3).len(), 16);
        assert_eq!(enumerate_parking(2, 3).len(), 49);
    }

    #[test]
    fn nc3_chains() {
        let q = build_poset(3, 1).unwrap();
        let mut labels: Vec<Vec<usize>> =
            all_chains(&q).iter().map(|c| chain_to_parking(c).values).collect();
        labels.sort();
        assert_eq!(labels, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn single_step_chain() {
        for d in 1..4 {
            let pf = DParkingFunction::new(d, vec![1]).unwrap();
            let chain = parking_to_chain(&pf);
            assert_eq!(chain.steps().len(), 2);
            assert_eq!(chain_to_parking(&chain), pf);
        }
    }

    #[test]
    fn falling_counts() {
        assert_eq!(falling_count(1, 2), 2);
        assert_eq!(falling_count(2, 2), 4);
        assert_eq!(falling_count(3, 1), 1);
    }

    #[test]
    fn el_type_a() {
        let report = el_check(&build_poset(4, 1).unwrap());
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.rising_labels, vec![3, 2, 1]);
        assert_eq!(report.falling_chains, 5);
        assert!(el_check(&build_poset(5, 1).unwrap()).passed());
    }

    #[test]
    fn el_fails_on_some_intervals_for_d2() {
        let q = build_poset(7, 2).unwrap();
        let report = el_check(&q);
        assert_eq!(report.rising_labels, vec![5, 3, 1]);
        assert_eq!(report.falling_chains, 22);
        // [0, 1,4,5,6,7|2|3] has rising chains through {4,5,6} and {5,6,7}
        assert!(report
            .violations
            .contains(&"[1|2|3|4|5|6|7, 1,4,5,6,7|2|3]: 2 rising chains".to_string()));
        assert_eq!(report.violations.len(), 4);
    }

    #[test]
    fn rejects_non_parking() {
        assert!(matches!(
            DParkingFunction::new(1, vec![2, 2]),
            Err(Error::NotParking { .. })
        ));
        let bad: std::result::Result<DParkingFunction, _> =
            serde_json::from_str(r#"{"d":1,"values":[3,1]}"#);
        assert!(bad.is_err());
    }
}
