use std::collections::BTreeMap;

use num_traits::One;

use super::omega::OmegaOpen;
use super::real::{ClosedInterval, Ext, RealCompactSet, RealOpenSet};
use super::Region;
use crate::error::{Error, Result};
use crate::uea::{int, Rational, Scalar};

/// Upper-triangular family of open sets `W_{ij}`, `1 ≤ i ≤ j ≤ p`, indexing
/// the entries of a triangular matrix algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DomainTuple<R> {
    p: usize,
    entries: BTreeMap<(usize, usize), R>,
}

impl<R: Region> DomainTuple<R> {
    /// Missing entries are taken to be empty.
    pub fn new(p: usize, mut entries: BTreeMap<(usize, usize), R>) -> Result<Self> {
        if let Some(&(i, j)) = entries
            .keys()
            .find(|&&(i, j)| !(1 <= i && i <= j && j <= p))
        {
            return Err(Error::Precondition(format!(
                "entry ({i},{j}) outside order {p}"
            )));
        }
        for i in 1..=p {
            for j in i..=p {
                entries.entry((i, j)).or_insert_with(R::empty);
            }
        }
        Ok(Self { p, entries })
    }

    /// Every entry the same set.
    pub fn constant(p: usize, region: R) -> Self {
        let entries = index_pairs(p).map(|ij| (ij, region.clone())).collect();
        Self { p, entries }
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[&(i, j)]
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), R> {
        &self.entries
    }

    /// Checks `W_{ik} ⊆ W_{ij} ∩ W_{jk}` for all `i ≤ j ≤ k`, as the pair of
    /// inclusions `W_{ik} ⊆ W_{ij}` and `W_{ik} ⊆ W_{jk}`.
    pub fn check_condition(&self) -> Result<()> {
        for (i, j, k) in index_triples(self.p) {
            let ik = self.get(i, k);
            if !ik.is_subset(self.get(i, j)) || !ik.is_subset(self.get(j, k)) {
                return Err(Error::TupleCondition { i, j, k });
            }
        }
        Ok(())
    }

    /// Entrywise inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.p == other.p
            && self
                .entries
                .iter()
                .all(|(ij, w)| w.is_subset(&other.entries[ij]))
    }
}

pub(crate) fn index_pairs(p: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=p).flat_map(move |i| (i..=p).map(move |j| (i, j)))
}

fn index_triples(p: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=p).flat_map(move |i| (i..=p).flat_map(move |j| (j..=p).map(move |k| (i, j, k))))
}

/// `W^{q+1}_{ij} = V_{j-i} - q - 1 + i` for `1 ≤ i ≤ j ≤ q + 1`.
pub fn build_w_tuple<R: Region>(v: &OmegaOpen<R>, q: usize) -> Result<DomainTuple<R>> {
    v.validate()?;
    let n = q + 1;
    let entries = index_pairs(n)
        .map(|(i, j)| {
            let offset = R::Scalar::from_i64(i as i64 - n as i64);
            ((i, j), v.level(j - i).shift(&offset))
        })
        .collect();
    let w = DomainTuple { p: n, entries };
    debug_assert!(
        w.check_condition().is_ok(),
        "shift condition implies the tuple condition"
    );
    Ok(w)
}

/// Upper-triangular family of compact subsets of ℝ, possibly empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompactTuple {
    p: usize,
    entries: BTreeMap<(usize, usize), RealCompactSet>,
}

impl CompactTuple {
    /// Missing entries are taken to be empty.
    pub fn new(p: usize, mut entries: BTreeMap<(usize, usize), RealCompactSet>) -> Result<Self> {
        if let Some(&(i, j)) = entries
            .keys()
            .find(|&&(i, j)| !(1 <= i && i <= j && j <= p))
        {
            return Err(Error::Precondition(format!(
                "entry ({i},{j}) outside order {p}"
            )));
        }
        for ij in index_pairs(p) {
            entries.entry(ij).or_default();
        }
        Ok(Self { p, entries })
    }

    pub fn empty(p: usize) -> Self {
        Self::new(p, BTreeMap::new()).expect("no entries")
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> &RealCompactSet {
        &self.entries[&(i, j)]
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), RealCompactSet> {
        &self.entries
    }

    pub fn check_condition(&self) -> Result<()> {
        for (i, j, k) in index_triples(self.p) {
            let ik = self.get(i, k);
            if !ik.is_subset(self.get(i, j)) || !ik.is_subset(self.get(j, k)) {
                return Err(Error::TupleCondition { i, j, k });
            }
        }
        Ok(())
    }

    /// Nonempty entries have dense interior.
    pub fn has_dense_interior(&self) -> bool {
        self.entries
            .values()
            .all(RealCompactSet::has_dense_interior)
    }

    /// Entrywise `K_{ij} ⊆ W_{ij}`.
    pub fn inside(&self, w: &DomainTuple<RealOpenSet>) -> bool {
        self.p == w.order()
            && self
                .entries
                .iter()
                .all(|((i, j), k)| k.inside(w.get(*i, *j)))
    }

    /// Entrywise `self ⊆ other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.p == other.p
            && self
                .entries
                .iter()
                .all(|(ij, k)| k.is_subset(&other.entries[ij]))
    }
}

/// Enlarges `K ⊂ W` to a compact tuple `K'` with `K ⊆ K' ⊆ W` that
/// satisfies the tuple condition and has dense interior.
///
/// For every nonempty `K_{i'k'}` and each of its components `[a, b]`, pick
/// the component `(lo, hi)` of `W_{i'k'}` holding it and a closed interval
/// `S = [a - δ, b + δ]` strictly inside `(lo, hi)`. The tuple condition on
/// `W` gives `W_{i'k'} ⊆ W_{ik}` whenever `i' ≤ i ≤ k ≤ k'`, so `S` may be
/// added to every such `K'_{ik}`. The family of intervals is finite, one per
/// component.
pub fn exhaust(k: &CompactTuple, w: &DomainTuple<RealOpenSet>) -> Result<CompactTuple> {
    if k.order() != w.order() {
        return Err(Error::OrderMismatch {
            left: k.order(),
            right: w.order(),
        });
    }
    if !k.inside(w) {
        return Err(Error::Precondition("K is not contained in W".into()));
    }
    w.check_condition()?;
    let p = k.order();
    let mut grown: BTreeMap<(usize, usize), Vec<ClosedInterval>> = BTreeMap::new();
    for ((i0, k0), set) in k.entries() {
        let wk = w.get(*i0, *k0);
        for iv in set.intervals() {
            let home = wk
                .locate(&iv.lo)
                .map(|c| &wk.intervals()[c])
                .expect("compact component inside an open component");
            let s = widen(iv, &home.lo, &home.hi);
            for i in *i0..=*k0 {
                for kk in i..=*k0 {
                    grown.entry((i, kk)).or_default().push(s.clone());
                }
            }
        }
    }
    let entries = grown
        .into_iter()
        .map(|(ij, ivs)| (ij, RealCompactSet::new(ivs)))
        .collect();
    let out = CompactTuple::new(p, entries)?;
    debug_assert!(out.check_condition().is_ok());
    debug_assert!(k.is_subset(&out) && out.inside(w) && out.has_dense_interior());
    Ok(out)
}

/// `[a - δ, b + δ]` with `δ = min(1, (a - lo)/2, (hi - b)/2)`.
fn widen(iv: &ClosedInterval, lo: &Ext, hi: &Ext) -> ClosedInterval {
    let half = Rational::one() / int(2);
    let mut delta = Rational::one();
    if let Ext::Finite(l) = lo {
        delta = delta.min((&iv.lo - l) * &half);
    }
    if let Ext::Finite(h) = hi {
        delta = delta.min((h - &iv.hi) * &half);
    }
    ClosedInterval {
        lo: &iv.lo - &delta,
        hi: &iv.hi + &delta,
    }
}

/// Dominating compacts `M_k = ⋃_{j-i=k} (K_{ij} + q + 1 - i)`, `k = 0..=q`.
pub fn cover_compacts(k: &CompactTuple, q: usize) -> Result<Vec<RealCompactSet>> {
    if k.order() != q + 1 {
        return Err(Error::OrderMismatch {
            left: k.order(),
            right: q + 1,
        });
    }
    let mut m = vec![RealCompactSet::empty(); q + 1];
    for ((i, j), set) in k.entries() {
        let shifted = set.shift(&int((q + 1 - i) as i64));
        m[j - i] = m[j - i].union(&shifted);
    }
    debug_assert!(k
        .entries()
        .iter()
        .all(|((i, j), s)| s.shift(&int((q + 1 - i) as i64)).is_subset(&m[j - i])));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uea::rat;

    fn set(pairs: &[(i64, i64)]) -> RealOpenSet {
        RealOpenSet::from_finite(
            &pairs
                .iter()
                .map(|&(a, b)| (int(a), int(b)))
                .collect::<Vec<_>>(),
        )
    }

    fn staircase() -> OmegaOpen<RealOpenSet> {
        OmegaOpen::finite(vec![set(&[(0, 3)]), set(&[(1, 3)]), set(&[(2, 3)])])
    }

    #[test]
    fn w_tuple_example() {
        let w = build_w_tuple(&staircase(), 2).unwrap();
        assert_eq!(w.get(1, 1), &set(&[(-2, 1)]));
        assert_eq!(w.get(1, 2), &set(&[(-1, 1)]));
        assert_eq!(w.get(1, 3), &set(&[(0, 1)]));
        assert_eq!(w.get(2, 2), &set(&[(-1, 2)]));
        assert_eq!(w.get(2, 3), &set(&[(0, 2)]));
        assert_eq!(w.get(3, 3), &set(&[(0, 3)]));
        let cap = w.get(1, 2).intersect(w.get(2, 3)).unwrap();
        assert_eq!(cap, set(&[(0, 1)]));
        assert!(w.get(1, 3).is_subset(&cap));
        assert!(w.check_condition().is_ok());
    }

    #[test]
    fn w_tuple_of_whole_space() {
        let w = build_w_tuple(&OmegaOpen::<RealOpenSet>::whole(), 4).unwrap();
        assert!(w.entries().values().all(Region::is_whole));
    }

    #[test]
    fn w_tuple_rejects_invalid() {
        let bad = OmegaOpen::finite(vec![set(&[(0, 1)]), set(&[(0, 1)])]);
        assert!(build_w_tuple(&bad, 1).is_err());
    }

    #[test]
    fn tuple_condition_examples() {
        assert!(DomainTuple::constant(3, set(&[(0, 1)]))
            .check_condition()
            .is_ok());
        let mut e = BTreeMap::new();
        e.insert((1, 2), set(&[(0, 1)]));
        e.insert((2, 3), set(&[(5, 6)]));
        e.insert((1, 3), set(&[(0, 1)]));
        for i in 1..=3 {
            e.insert((i, i), RealOpenSet::whole());
        }
        let t = DomainTuple::new(3, e).unwrap();
        assert_eq!(
            t.check_condition(),
            Err(Error::TupleCondition { i: 1, j: 2, k: 3 })
        );
    }

    #[test]
    fn exhaust_order_two() {
        let mut we = BTreeMap::new();
        we.insert((1, 1), set(&[(0, 3)]));
        we.insert((2, 2), set(&[(0, 3)]));
        we.insert((1, 2), set(&[(1, 2)]));
        let w = DomainTuple::new(2, we).unwrap();
        let mut ke = BTreeMap::new();
        ke.insert((1, 2), RealCompactSet::interval(rat(5, 4), rat(7, 4)));
        let k = CompactTuple::new(2, ke).unwrap();
        let out = exhaust(&k, &w).unwrap();
        assert_eq!(out.get(1, 1), out.get(1, 2));
        assert_eq!(out.get(2, 2), out.get(1, 2));
        assert!(RealCompactSet::interval(rat(5, 4), rat(7, 4)).is_subset(out.get(1, 2)));
        assert!(out.get(1, 2).inside(&set(&[(1, 2)])));
        assert!(out.check_condition().is_ok());
    }

    #[test]
    fn exhaust_trivial_cases() {
        let w = DomainTuple::constant(2, set(&[(0, 1)]));
        assert_eq!(
            exhaust(&CompactTuple::empty(2), &w).unwrap(),
            CompactTuple::empty(2)
        );

        let w1 = DomainTuple::constant(1, set(&[(-1, 2)]));
        let mut ke = BTreeMap::new();
        ke.insert((1, 1), RealCompactSet::interval(int(0), int(1)));
        let k = CompactTuple::new(1, ke).unwrap();
        let out = exhaust(&k, &w1).unwrap();
        assert!(k.is_subset(&out));
        assert!(out.inside(&w1));
    }

    #[test]
    fn exhaust_rejects_outside() {
        let w = DomainTuple::constant(1, set(&[(0, 1)]));
        let mut ke = BTreeMap::new();
        ke.insert((1, 1), RealCompactSet::interval(int(0), int(1)));
        let k = CompactTuple::new(1, ke).unwrap();
        assert!(matches!(exhaust(&k, &w), Err(Error::Precondition(_))));
    }

    #[test]
    fn cover_example() {
        let mut ke = BTreeMap::new();
        ke.insert((1, 1), RealCompactSet::interval(int(-1), int(0)));
        ke.insert((2, 2), RealCompactSet::interval(int(0), int(1)));
        ke.insert((1, 2), RealCompactSet::interval(rat(-1, 2), int(0)));
        let k = CompactTuple::new(2, ke).unwrap();
        let m = cover_compacts(&k, 1).unwrap();
        assert_eq!(m[0], RealCompactSet::interval(int(0), int(1)));
        assert_eq!(m[1], RealCompactSet::interval(rat(1, 2), int(1)));
    }

    #[test]
    fn cover_trivial() {
        let m = cover_compacts(&CompactTuple::empty(3), 2).unwrap();
        assert!(m.iter().all(RealCompactSet::is_empty));
        let mut ke = BTreeMap::new();
        ke.insert((1, 1), RealCompactSet::interval(int(2), int(5)));
        let k = CompactTuple::new(1, ke).unwrap();
        assert_eq!(
            cover_compacts(&k, 0).unwrap()[0],
            RealCompactSet::interval(int(2), int(5))
        );
    }
}
