//! Random instances shared by the property and acceptance suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ncsheaf_core::domains::{
    base_open, build_w_tuple, ClosedInterval, CompactTuple, ComplexRegion, DomainTuple, Ext,
    Interval, OmegaOpen, RealCompactSet, RealOpenSet, Region, SetOp,
};
use ncsheaf_core::sheaf::Section;
use ncsheaf_core::uea::{int, rat, GaussianRational, PbwElement, Polynomial, Rational, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `|n/d| ≤ bound` and `d ≤ 3`.
pub fn small_rat(rng: &mut impl Rng, bound: i64) -> Rational {
    let d = rng.gen_range(1..=3);
    rat(rng.gen_range(-bound * d..=bound * d), d)
}

pub fn rand_poly<S: RandScalar>(rng: &mut impl Rng, max_deg: usize) -> Polynomial<S> {
    let deg = rng.gen_range(0..=max_deg);
    Polynomial::new(
        (0..=deg)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    S::from_i64(0)
                } else {
                    S::random(rng, 10)
                }
            })
            .collect(),
    )
}

/// Scalars with a random constructor.
pub trait RandScalar: Scalar {
    fn random(rng: &mut impl Rng, bound: i64) -> Self;
}

impl RandScalar for Rational {
    fn random(rng: &mut impl Rng, bound: i64) -> Self {
        small_rat(rng, bound)
    }
}

impl RandScalar for GaussianRational {
    fn random(rng: &mut impl Rng, bound: i64) -> Self {
        GaussianRational::new(small_rat(rng, bound), small_rat(rng, bound))
    }
}

/// e₂-degree ≤ `max_q`, coefficient degree ≤ `max_deg`.
pub fn rand_pbw<S: RandScalar>(rng: &mut impl Rng, max_q: usize, max_deg: usize) -> PbwElement<S> {
    let q = rng.gen_range(0..=max_q);
    PbwElement::new((0..=q).map(|_| rand_poly(rng, max_deg)).collect())
}

fn rand_between(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    let t = rat(rng.gen_range(1..16), 16);
    lo + (hi - lo) * t
}

/// Finite `(lo, hi)` inside `iv`; infinite ends are cut off.
fn finite_window(rng: &mut impl Rng, iv: &Interval) -> (Rational, Rational) {
    let lo = match (&iv.lo, &iv.hi) {
        (Ext::Finite(a), _) => a.clone(),
        (_, Ext::Finite(b)) => b - int(rng.gen_range(2..6)),
        _ => small_rat(rng, 4),
    };
    let hi = match &iv.hi {
        Ext::Finite(b) => b.clone(),
        _ => &lo + int(rng.gen_range(2..6)),
    };
    (lo, hi)
}

/// Random open interval inside `iv`; an infinite end is kept with
/// probability one half.
fn sub_interval(rng: &mut impl Rng, iv: &Interval) -> Interval {
    let (lo, hi) = finite_window(rng, iv);
    let a = if rng.gen_bool(0.5) {
        iv.lo.clone()
    } else {
        Ext::Finite(rand_between(rng, &lo, &hi))
    };
    let start = a.finite().cloned().unwrap_or(lo);
    let b = if rng.gen_bool(0.5) {
        iv.hi.clone()
    } else {
        Ext::Finite(rand_between(rng, &start, &hi))
    };
    Interval::new(a, b).expect("nonempty")
}

/// Union of up to `max_parts` random intervals with ends in [-6, 6].
pub fn rand_open_set(rng: &mut impl Rng, max_parts: usize) -> RealOpenSet {
    let n = rng.gen_range(1..=max_parts);
    let ivs = (0..n)
        .map(|_| {
            let roll = rng.gen_range(0..10);
            let a = small_rat(rng, 6);
            let b = &a + rat(rng.gen_range(1..=24), 4);
            match roll {
                0 => Interval::new(Ext::NegInf, Ext::Finite(b)).unwrap(),
                1 => Interval::new(Ext::Finite(a), Ext::PosInf).unwrap(),
                _ => Interval::finite(a, b).unwrap(),
            }
        })
        .collect();
    RealOpenSet::new(ivs)
}

/// Valid `V` with at most `max_levels` levels and `max_parts` components per
/// level: each level is a random open subset of `V_q ∩ (V_q + 1)`.
pub fn rand_omega(
    rng: &mut impl Rng,
    max_levels: usize,
    max_parts: usize,
) -> OmegaOpen<RealOpenSet> {
    if rng.gen_ratio(1, 40) {
        return OmegaOpen::whole();
    }
    let mut levels = vec![rand_open_set(rng, max_parts)];
    let n = rng.gen_range(1..=max_levels);
    while levels.len() < n {
        let last = levels.last().unwrap();
        let room = last.intersect(&last.shift(&int(1))).unwrap();
        if room.is_empty() {
            break;
        }
        let mut parts = Vec::new();
        for iv in room.intervals() {
            if rng.gen_bool(0.8) {
                parts.push(sub_interval(rng, iv));
            }
        }
        parts.truncate(max_parts);
        if parts.is_empty() {
            break;
        }
        levels.push(RealOpenSet::new(parts));
    }
    OmegaOpen::finite(levels)
}

/// Valid `V` with finitely many levels, all bounded.
pub fn rand_bounded_omega(rng: &mut impl Rng, max_levels: usize) -> OmegaOpen<RealOpenSet> {
    loop {
        let v = rand_omega(rng, max_levels, 3);
        if v.support().is_some()
            && v.levels().iter().all(|l| {
                l.intervals()
                    .iter()
                    .all(|iv| iv.lo.finite().is_some() && iv.hi.finite().is_some())
            })
        {
            return v;
        }
    }
}

/// A sequence that fails the level condition exactly at `level`.
pub fn rand_invalid_omega(rng: &mut impl Rng) -> (OmegaOpen<RealOpenSet>, usize) {
    loop {
        let v = rand_omega(rng, 5, 3);
        let Some(n) = v.support() else { continue };
        if n == 0 {
            continue;
        }
        let mut levels = v.levels().to_vec();
        let k = rng.gen_range(0..n);
        let room = levels[k].intersect(&levels[k].shift(&int(1))).unwrap();
        let x = small_rat(rng, 8);
        if room.contains(&x) {
            continue;
        }
        let bump = RealOpenSet::interval(&x - rat(1, 8), &x + rat(1, 8));
        if k + 1 == levels.len() {
            levels.push(bump);
        } else {
            levels[k + 1] = levels[k + 1].union(&bump).unwrap();
        }
        return (OmegaOpen::finite(levels), k);
    }
}

/// Base open set around a random center.
pub fn rand_base(rng: &mut impl Rng) -> OmegaOpen<ComplexRegion> {
    let c = GaussianRational::new(small_rat(rng, 3), small_rat(rng, 3));
    let eps = rat(1, rng.gen_range(2..=5));
    base_open(&c, rng.gen_range(0..=3), &eps).unwrap()
}

/// Section with random polynomials on each component.
pub fn rand_section<R: Region<Scalar: RandScalar>>(
    rng: &mut impl Rng,
    v: &OmegaOpen<R>,
    max_deg: usize,
) -> Section<R> {
    let n = v.support().unwrap_or(3);
    let levels = (0..n)
        .map(|q| {
            (0..v.level(q).component_count())
                .map(|_| rand_poly(rng, max_deg))
                .collect()
        })
        .collect();
    Section::new(v.clone(), levels).unwrap()
}

/// Intersection of `v` with a random valid open set, which is again valid.
pub fn rand_sub_omega(rng: &mut impl Rng, v: &OmegaOpen<RealOpenSet>) -> OmegaOpen<RealOpenSet> {
    let u = rand_omega(rng, 4, 3);
    v.combine(&u, SetOp::Intersect).unwrap()
}

/// Compact tuple with each entry a few closed pieces of the matching entry
/// of `w`.
pub fn rand_compact_inside(rng: &mut impl Rng, w: &DomainTuple<RealOpenSet>) -> CompactTuple {
    let p = w.order();
    let mut entries = BTreeMap::new();
    for i in 1..=p {
        for j in i..=p {
            let mut pieces = Vec::new();
            for iv in w.get(i, j).intervals() {
                if !rng.gen_bool(0.6) {
                    continue;
                }
                let (lo, hi) = finite_window(rng, iv);
                let a = rand_between(rng, &lo, &hi);
                let b = if rng.gen_ratio(1, 8) {
                    a.clone()
                } else {
                    rand_between(rng, &a, &hi)
                };
                pieces.push(ClosedInterval::new(a, b).unwrap());
            }
            entries.insert((i, j), RealCompactSet::new(pieces));
        }
    }
    CompactTuple::new(p, entries).unwrap()
}

/// W-tuple of order `q + 1` from a random valid `V`.
pub fn rand_w_tuple(rng: &mut impl Rng, q: usize) -> DomainTuple<RealOpenSet> {
    let v = rand_omega(rng, q + 2, 3);
    build_w_tuple(&v, q).unwrap()
}
