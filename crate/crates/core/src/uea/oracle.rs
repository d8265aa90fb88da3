//! Reference multiplication in U(aff₁) by word rewriting.
//!
//! Operands are expanded into words over {e₁, e₂}, concatenated, and reduced
//! with the single rule `e₂e₁ → e₁e₂ − e₂` until every word reads
//! `e₁^a e₂^b`. This shares no code with [`PbwElement::mul`].

use std::collections::BTreeMap;

use super::pbw::PbwElement;
use super::poly::Polynomial;
use super::scalar::Scalar;

const E1: u8 = 0;
const E2: u8 = 1;

pub type Word = Vec<u8>;

/// Linear combination of words.
pub fn expand<S: Scalar>(a: &PbwElement<S>) -> BTreeMap<Word, S> {
    let mut out = BTreeMap::new();
    for (q, f) in a.levels().iter().enumerate() {
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut w = vec![E1; k];
            w.extend(std::iter::repeat_n(E2, q));
            accumulate(&mut out, w, c.clone());
        }
    }
    out
}

fn accumulate<S: Scalar>(map: &mut BTreeMap<Word, S>, w: Word, c: S) {
    match map.remove(&w) {
        Some(old) => {
            let s = old + c;
            if !s.is_zero() {
                map.insert(w, s);
            }
        }
        None => {
            if !c.is_zero() {
                map.insert(w, c);
            }
        }
    }
}

fn first_inversion(w: &[u8]) -> Option<usize> {
    w.windows(2).position(|p| p[0] == E2 && p[1] == E1)
}

/// Rewrites a combination of words into normal-ordered words.
///
/// Longer words are processed first so that the shorter words produced by
/// the rule are merged before they are themselves rewritten.
pub fn normal_order<S: Scalar>(words: BTreeMap<Word, S>) -> BTreeMap<Word, S> {
    let mut pending: BTreeMap<(usize, Word), S> = BTreeMap::new();
    for (w, c) in words {
        pending.insert((w.len(), w), c);
    }
    let mut done = BTreeMap::new();
    while let Some(((_, w), c)) = pending.pop_last() {
        let Some(pos) = first_inversion(&w) else {
            accumulate(&mut done, w, c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.swap(pos, pos + 1);
        let mut shorter = w;
        shorter.remove(pos + 1);
        shorter[pos] = E2;
        push(&mut pending, swapped, c.clone());
        push(&mut pending, shorter, -c);
    }
    done
}

fn push<S: Scalar>(pending: &mut BTreeMap<(usize, Word), S>, w: Word, c: S) {
    let key = (w.len(), w);
    match pending.remove(&key) {
        Some(old) => {
            let s = old + c;
            if !s.is_zero() {
                pending.insert(key, s);
            }
        }
        None => {
            if !c.is_zero() {
                pending.insert(key, c);
            }
        }
    }
}

/// Reads normal-ordered words back into PBW levels.
pub fn collect<S: Scalar>(words: &BTreeMap<Word, S>) -> PbwElement<S> {
    let mut levels: Vec<Vec<S>> = Vec::new();
    for (w, c) in words {
        let a = w.iter().take_while(|&&x| x == E1).count();
        let b = w.len() - a;
        debug_assert!(w[a..].iter().all(|&x| x == E2), "word not normal ordered");
        if levels.len() <= b {
            levels.resize(b + 1, Vec::new());
        }
        let lvl = &mut levels[b];
        if lvl.len() <= a {
            lvl.resize(a + 1, S::zero());
        }
        lvl[a] = std::mem::replace(&mut lvl[a], S::zero()) + c.clone();
    }
    PbwElement::new(levels.into_iter().map(Polynomial::new).collect())
}

pub fn mul_by_rewriting<S: Scalar>(a: &PbwElement<S>, b: &PbwElement<S>) -> PbwElement<S> {
    let left = expand(a);
    let right = expand(b);
    let mut product = BTreeMap::new();
    for (u, c) in &left {
        for (v, d) in &right {
            let mut w = u.clone();
            w.extend_from_slice(v);
            accumulate(&mut product, w, c.clone() * d.clone());
        }
    }
    collect(&normal_order(product))
}
