//! The graded poset `NC^d_n` and its intervals.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{enumerate_by_filter, intertwining_number, NoncrossingPartition};
use crate::plane_tree::indivisible_partitions_via_trees;
use crate::series::closed_form::{closed_form, ClosedForm};

/// Element cap used when no explicit budget is given.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Where the elements of `NC^d_n` come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ElementSource {
    /// Degree-constrained plane trees mapped through the tree bijection.
    #[default]
    Trees,
    /// Every set partition of `[n]`, filtered. Exponential; oracle use only.
    Filter,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub budget: u128,
    pub source: ElementSource,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: DEFAULT_BUDGET,
            source: ElementSource::Trees,
        }
    }
}

/// A finite graded poset of noncrossing partitions of a common `[n]`,
/// ordered by refinement, with a unique minimum and maximum.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    n: usize,
    d: usize,
    elements: Vec<NoncrossingPartition>,
    block_ids: Vec<Vec<usize>>,
    index: HashMap<NoncrossingPartition, usize>,
    covers: Vec<Vec<usize>>,
    rank_of: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Multiset of factor sizes `m` in `[pi, sigma] ≅ Π NC^d_m`, sizes equal
/// to 1 omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntervalFactorization {
    pub d: usize,
    pub sizes: Vec<usize>,
}

impl IntervalFactorization {
    pub fn rank(&self) -> usize {
        self.sizes.iter().map(|m| (m - 1) / self.d).sum()
    }

    /// Product of the factor cardinalities from the closed form.
    pub fn predicted_cardinality(&self) -> Result<BigInt> {
        self.sizes.iter().try_fold(BigInt::from(1), |acc, &m| {
            Ok(acc * factor_card(m, self.d)?)
        })
    }

    /// Product of the factor rank polynomials.
    pub fn predicted_rank_counts(&self) -> Result<Vec<BigInt>> {
        let mut acc = vec![BigInt::from(1)];
        for &m in &self.sizes {
            let k = (m - 1) / self.d;
            let poly = (0..=k)
                .map(|j| {
                    closed_form(
                        ClosedForm::RankCount { i: k - j, j },
                        self.d,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let mut next = vec![BigInt::from(0); acc.len() + poly.len() - 1];
            for (a, x) in acc.iter().enumerate() {
                for (b, y) in poly.iter().enumerate() {
                    next[a + b] += x * y;
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

fn factor_card(m: usize, d: usize) -> Result<BigInt> {
    if m % d != 1 % d {
        return Err(Error::FactorizationMismatch(format!(
            "factor size {m} is not 1 mod {d}"
        )));
    }
    closed_form(ClosedForm::Cardinality { k: (m - 1) / d }, d)
}

/// Builds `NC^d_n` with the default options.
pub fn build_poset(n: usize, d: usize) -> Result<GradedPoset> {
    build_poset_with(n, d, &BuildOptions::default())
}

pub fn build_poset_with(n: usize, d: usize, options: &BuildOptions) -> Result<GradedPoset> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if d == 0 {
        return Err(Error::ZeroD);
    }
    if n % d != 1 % d {
        return Err(Error::EmptyPosetFamily { n, d });
    }
    let k = (n - 1) / d;
    let predicted = closed_form(ClosedForm::Cardinality { k }, d)?;
    let predicted = predicted.to_u128().unwrap_or(u128::MAX);
    if predicted > options.budget {
        return Err(Error::BudgetExceeded {
            predicted,
            budget: options.budget,
        });
    }
    let elements = match options.source {
        ElementSource::Trees => indivisible_partitions_via_trees(n, d),
        ElementSource::Filter => enumerate_by_filter(n)
            .into_iter()
            .filter(|p| p.is_d_indivisible(d))
            .collect(),
    };
    let index: HashMap<NoncrossingPartition, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let mut covers = vec![Vec::new(); elements.len()];
    for (i, p) in elements.iter().enumerate() {
        for subset in (0..p.num_blocks()).combinations(d + 1) {
            if let Some(q) = p.merge_blocks(&subset) {
                if let Some(&j) = index.get(&q) {
                    covers[i].push(j);
                }
            }
        }
        covers[i].sort_unstable();
    }
    let rank_of = elements.iter().map(|p| p.rank(d)).collect();
    let bottom = index[&NoncrossingPartition::singletons(n)?];
    let top = index[&NoncrossingPartition::full(n)?];
    Ok(GradedPoset {
        n,
        d,
        block_ids: elements.iter().map(|p| p.block_ids()).collect(),
        elements,
        index,
        covers,
        rank_of,
        bottom,
        top,
    })
}

impl GradedPoset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NoncrossingPartition] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &NoncrossingPartition {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &NoncrossingPartition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Indices of the elements covering `i`.
    pub fn covers_of(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(i, up)| up.iter().map(move |&j| (i, j)))
            .collect()
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.rank_of[i]
    }

    pub fn rank(&self) -> usize {
        self.rank_of[self.top]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.block_ids[i], &self.block_ids[j]);
        // a refines b iff equal a-labels imply equal b-labels; compare with
        // the first element of each a-block
        let mut rep = vec![usize::MAX; a.len()];
        a.iter().zip(b).all(|(&x, &y)| {
            if rep[x] == usize::MAX {
                rep[x] = y;
                true
            } else {
                rep[x] == y
            }
        })
    }

    fn strictly_above(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| {
                (0..self.len())
                    .filter(|&j| j != i && self.rank_of[j] > self.rank_of[i] && self.leq(i, j))
                    .collect()
            })
            .collect()
    }

    fn order_by_rank(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.rank_of[i], i));
        order
    }

    /// `W_j = #{x : rank(x) = j}`.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rank() + 1];
        for &r in &self.rank_of {
            counts[r] += 1;
        }
        counts
    }

    /// The induced subposet `[lo, hi]`, regraded so that `lo` has rank 0.
    pub fn interval(&self, lo: usize, hi: usize) -> Result<GradedPoset> {
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable);
        }
        let members: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq(lo, x) && self.leq(x, hi))
            .collect();
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(t, &x)| (x, t)).collect();
        let base = self.rank_of[lo];
        let elements: Vec<NoncrossingPartition> =
            members.iter().map(|&x| self.elements[x].clone()).collect();
        Ok(GradedPoset {
            n: self.n,
            d: self.d,
            block_ids: members.iter().map(|&x| self.block_ids[x].clone()).collect(),
            index: elements.iter().cloned().enumerate().map(|(t, p)| (p, t)).collect(),
            covers: members
                .iter()
                .map(|&x| {
                    self.covers[x]
                        .iter()
                        .filter_map(|y| local.get(y).copied())
                        .collect()
                })
                .collect(),
            rank_of: members.iter().map(|&x| self.rank_of[x] - base).collect(),
            bottom: local[&lo],
            top: local[&hi],
            elements,
        })
    }

    /// Interval lookup by partition value.
    pub fn interval_of(
        &self,
        lo: &NoncrossingPartition,
        hi: &NoncrossingPartition,
    ) -> Result<GradedPoset> {
        let i = self.index_of(lo).ok_or(Error::NotAnElement)?;
        let j = self.index_of(hi).ok_or(Error::NotAnElement)?;
        self.interval(i, j)
    }

    /// Factor sizes of `[lo, hi]` from intertwining numbers of the blocks of
    /// `hi` with the dual blocks of `lo`.
    pub fn interval_factorization(&self, lo: usize, hi: usize) -> Result<IntervalFactorization> {
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable);
        }
        Ok(factorization_of(&self.elements[lo], &self.elements[hi], self.d))
    }

    /// Compares the factorization of `[lo, hi]` with the explicit interval:
    /// cardinality and rank vector must both match.
    pub fn verify_factorization(&self, lo: usize, hi: usize) -> Result<IntervalFactorization> {
        let f = self.interval_factorization(lo, hi)?;
        let iv = self.interval(lo, hi)?;
        let card = f.predicted_cardinality()?;
        if card != BigInt::from(iv.len()) {
            return Err(Error::FactorizationMismatch(format!(
                "[{}, {}]: product {card} but interval has {} elements",
                self.elements[lo],
                self.elements[hi],
                iv.len()
            )));
        }
        let ranks: Vec<BigInt> = iv.rank_counts().into_iter().map(BigInt::from).collect();
        if f.predicted_rank_counts()? != ranks {
            return Err(Error::FactorizationMismatch(format!(
                "[{}, {}]: rank vectors differ",
                self.elements[lo], self.elements[hi]
            )));
        }
        Ok(f)
    }

    /// Every saturated chain from the minimum to the maximum, as index lists.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        fn extend(p: &GradedPoset, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let last = *chain.last().expect("chain starts at the bottom");
            if last == p.top {
                out.push(chain.clone());
                return;
            }
            for &up in &p.covers[last] {
                chain.push(up);
                extend(p, chain, out);
                chain.pop();
            }
        }
        let mut out = Vec::new();
        extend(self, &mut vec![self.bottom], &mut out);
        out
    }

    /// Number of maximal chains, by dynamic programming.
    pub fn count_maximal_chains(&self) -> u128 {
        let mut count = vec![0u128; self.len()];
        count[self.top] = 1;
        for &x in self.order_by_rank().iter().rev() {
            if x != self.top {
                count[x] = self.covers[x].iter().map(|&y| count[y]).sum();
            }
        }
        count[self.bottom]
    }

    /// `mu(bottom, top)` from the defining recursion
    /// `mu(0, y) = -Σ_{0 <= z < y} mu(0, z)`.
    pub fn mobius_recursive(&self) -> i64 {
        let order = self.order_by_rank();
        let mut mu = vec![0i64; self.len()];
        for &y in &order {
            if y == self.bottom {
                mu[y] = 1;
                continue;
            }
            mu[y] = -order
                .iter()
                .take_while(|&&z| self.rank_of[z] < self.rank_of[y])
                .filter(|&&z| self.leq(z, y))
                .map(|&z| mu[z])
                .sum::<i64>();
        }
        mu[self.top]
    }

    /// Philip Hall's theorem: `Σ_k (-1)^k c_k` where `c_k` counts strict
    /// chains `bottom = x_0 < ... < x_k = top`.
    pub fn mobius_hall(&self) -> i64 {
        let above = self.strictly_above();
        let len = self.rank() + 1;
        let mut chains = vec![vec![0i128; len]; self.len()];
        chains[self.top][0] = 1;
        for &x in self.order_by_rank().iter().rev() {
            if x == self.top {
                continue;
            }
            for &y in &above[x] {
                for l in 1..len {
                    chains[x][l] += chains[y][l - 1];
                }
            }
        }
        let total: i128 = chains[self.bottom]
            .iter()
            .enumerate()
            .map(|(l, &c)| if l % 2 == 0 { c } else { -c })
            .sum();
        total as i64
    }

    /// `mu(bottom, top)`.
    pub fn mobius(&self) -> i64 {
        self.mobius_recursive()
    }

    /// Whether the Simion-Ullman dual maps the element set to itself and
    /// reverses every cover.
    pub fn simion_ullman_reverses_order(&self) -> bool {
        let image: Option<Vec<usize>> = self
            .elements
            .iter()
            .map(|p| self.index_of(&p.simion_ullman_dual()))
            .collect();
        let Some(image) = image else { return false };
        let mut seen = vec![false; self.len()];
        for &j in &image {
            if seen[j] {
                return false;
            }
            seen[j] = true;
        }
        self.cover_pairs()
            .into_iter()
            .all(|(a, b)| self.covers[image[b]].contains(&image[a]))
    }

    pub fn to_dump(&self) -> PosetDump {
        PosetDump {
            n: self.n,
            d: self.d,
            elements: self.elements.clone(),
            covers: self.cover_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    /// Rebuilds `NC^d_n` and checks that `dump` describes it exactly.
    pub fn from_dump(dump: &PosetDump) -> Result<GradedPoset> {
        let p = build_poset_with(
            dump.n,
            dump.d,
            &BuildOptions {
                budget: u128::MAX,
                source: ElementSource::Trees,
            },
        )?;
        let mut covers: Vec<[usize; 2]> = dump.covers.clone();
        covers.sort_unstable();
        if p.elements != dump.elements || p.to_dump().covers != covers {
            return Err(Error::Parse("poset dump does not match NC^d_n".into()));
        }
        Ok(p)
    }
}

/// Multiset `{ i(B, C') : B in hi, C' in lo', i > 1 }`.
pub fn factorization_of(
    lo: &NoncrossingPartition,
    hi: &NoncrossingPartition,
    d: usize,
) -> IntervalFactorization {
    let dual = lo.kreweras_dual();
    let mut sizes: Vec<usize> = hi
        .blocks()
        .iter()
        .cartesian_product(dual.blocks())
        .map(|(b, c)| intertwining_number(b, c, lo.n()))
        .filter(|&m| m > 1)
        .collect();
    sizes.sort_unstable();
    IntervalFactorization { d, sizes }
}

/// JSON form of a poset: `{"n", "d", "elements", "covers"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDump {
    pub n: usize,
    pub d: usize,
    pub elements: Vec<NoncrossingPartition>,
    pub covers: Vec<[usize; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NoncrossingPartition {
        s.parse().unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(build_poset(5, 2).unwrap().len(), 7);
        assert_eq!(build_poset(4, 1).unwrap().len(), 14);
        assert_eq!(build_poset(1, 3).unwrap().len(), 1);
    }

    #[test]
    fn empty_family_rejected() {
        assert_eq!(
            build_poset(4, 2).unwrap_err(),
            Error::EmptyPosetFamily { n: 4, d: 2 }
        );
        assert_eq!(build_poset(3, 0).unwrap_err(), Error::ZeroD);
    }

    #[test]
    fn budget_guardrail() {
        let opts = BuildOptions {
            budget: 10,
            ..Default::default()
        };
        assert!(matches!(
            build_poset_with(5, 1, &opts),
            Err(Error::BudgetExceeded { predicted: 42, budget: 10 })
        ));
    }

    #[test]
    fn mobius_values() {
        let p41 = build_poset(4, 1).unwrap();
        assert_eq!(p41.mobius_recursive(), -5);
        assert_eq!(p41.mobius_hall(), -5);
        let p52 = build_poset(5, 2).unwrap();
        assert_eq!(p52.mobius_recursive(), 4);
        assert_eq!(p52.mobius_hall(), 4);
        let point = build_poset(1, 1).unwrap();
        assert_eq!(point.mobius_recursive(), 1);
        assert_eq!(point.mobius_hall(), 1);
    }

    #[test]
    fn intervals() {
        let q = build_poset(5, 2).unwrap();
        let whole = q.interval(q.bottom(), q.top()).unwrap();
        assert_eq!(whole.len(), q.len());
        let x = q.index_of(&p("1,2,3|4|5")).unwrap();
        assert_eq!(q.interval(x, x).unwrap().len(), 1);
        assert_eq!(q.interval(q.bottom(), x).unwrap().len(), 2);
        let y = q.index_of(&p("1|2,3,4|5")).unwrap();
        assert_eq!(q.interval(x, y).unwrap_err(), Error::NotComparable);
    }

    #[test]
    fn coatom_factorization() {
        let q = build_poset(7, 2).unwrap();
        for c in 0..q.len() {
            if q.covers_of(c) == [q.top()] {
                let sigma = q.element(c);
                let mut expect: Vec<usize> =
                    sigma.blocks().iter().map(Vec::len).filter(|&m| m > 1).collect();
                expect.sort_unstable();
                assert_eq!(q.interval_factorization(q.bottom(), c).unwrap().sizes, expect);
            }
        }
        let f = q.interval_factorization(3, 3).unwrap();
        assert!(f.sizes.is_empty());
    }

    #[test]
    fn chains_and_ranks() {
        assert_eq!(build_poset(3, 1).unwrap().maximal_chains().len(), 3);
        assert_eq!(build_poset(5, 2).unwrap().maximal_chains().len(), 5);
        let point = build_poset(1, 2).unwrap();
        assert_eq!(point.maximal_chains(), vec![vec![0]]);
        assert_eq!(point.rank_counts(), vec![1]);
        assert_eq!(build_poset(5, 2).unwrap().rank_counts(), vec![1, 5, 1]);
        assert_eq!(build_poset(4, 1).unwrap().rank_counts(), vec![1, 6, 6, 1]);
    }

    #[test]
    fn dump_round_trip() {
        let q = build_poset(5, 2).unwrap();
        let text = serde_json::to_string(&q.to_dump()).unwrap();
        let dump: PosetDump = serde_json::from_str(&text).unwrap();
        let back = GradedPoset::from_dump(&dump).unwrap();
        assert_eq!(back.elements(), q.elements());
    }
}
