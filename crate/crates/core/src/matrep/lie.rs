use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{NumericTriMatrix, UpperTriangular};
use crate::error::{Error, Result};
use crate::uea::{int, GaussianRational, Rational, Scalar};

/// Matrix units `E_ij`, `i ≤ j`, spanning all of `T_p`.
pub fn full_basis<S: Scalar>(p: usize) -> Vec<UpperTriangular<S>> {
    (1..=p)
        .flat_map(|i| (i..=p).map(move |j| UpperTriangular::unit(p, i, j)))
        .collect()
}

pub fn diagonal_basis<S: Scalar>(p: usize) -> Vec<UpperTriangular<S>> {
    (1..=p).map(|i| UpperTriangular::unit(p, i, i)).collect()
}

pub fn strict_basis<S: Scalar>(p: usize) -> Vec<UpperTriangular<S>> {
    (1..=p)
        .flat_map(|i| (i + 1..=p).map(move |j| UpperTriangular::unit(p, i, j)))
        .collect()
}

/// Row echelon basis of a subspace of `T_p`, each row stored with its pivot.
struct Echelon<S> {
    p: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> Echelon<S> {
    fn new(p: usize) -> Self {
        Self {
            p,
            rows: Vec::new(),
        }
    }

    /// Adds `m` to the span; false when it was already there.
    fn insert(&mut self, m: &UpperTriangular<S>) -> bool {
        let mut v: Vec<S> = m.upper_entries().cloned().collect();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inverse().expect("nonzero pivot");
        for x in &mut v {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let c = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                *x = x.clone() - c.clone() * r.clone();
            }
        }
        self.rows.push((pivot, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn basis(&self) -> Vec<UpperTriangular<S>> {
        self.rows
            .iter()
            .map(|(_, v)| {
                let mut it = v.iter();
                UpperTriangular::from_fn(self.p, |_, _| it.next().expect("upper length").clone())
            })
            .collect()
    }
}

/// Derived series `g⁰ ⊇ g¹ ⊇ …` of the Lie algebra generated linearly by
/// the inputs under the commutator, stopped at zero or at stabilization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSeries<S> {
    pub bases: Vec<Vec<UpperTriangular<S>>>,
    pub solvable: bool,
    /// Set when the inputs were floating point and had to be rationalized.
    pub rationalized: bool,
}

impl<S> DerivedSeries<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }
}

pub fn derived_series<S: Scalar>(generators: &[UpperTriangular<S>]) -> Result<DerivedSeries<S>> {
    let p = generators.first().map_or(0, UpperTriangular::order);
    if let Some(g) = generators.iter().find(|g| g.order() != p) {
        return Err(Error::OrderMismatch {
            left: p,
            right: g.order(),
        });
    }
    let mut span = Echelon::new(p);
    for g in generators {
        span.insert(g);
    }
    let mut bases = vec![span.basis()];
    loop {
        let cur = bases.last().expect("nonempty chain");
        if cur.is_empty() {
            return Ok(DerivedSeries {
                bases,
                solvable: true,
                rationalized: false,
            });
        }
        let mut next = Echelon::new(p);
        for (k, x) in cur.iter().enumerate() {
            for y in &cur[k + 1..] {
                next.insert(&x.bracket(y)?);
            }
        }
        if next.dim() == cur.len() {
            return Ok(DerivedSeries {
                bases,
                solvable: false,
                rationalized: false,
            });
        }
        bases.push(next.basis());
    }
}

/// Floating point inputs are replaced entrywise by the simplest rationals
/// within `tol`, and the result is flagged.
pub fn derived_series_numeric(
    generators: &[NumericTriMatrix],
    tol: f64,
) -> Result<DerivedSeries<GaussianRational>> {
    let exact = generators
        .iter()
        .map(|g| {
            let p = g.order();
            let mut m = UpperTriangular::zeros(p);
            for i in 1..=p {
                for j in i..=p {
                    let z = g.get(i, j);
                    m.set(
                        i,
                        j,
                        GaussianRational::new(rationalize(z.re, tol)?, rationalize(z.im, tol)?),
                    );
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = derived_series(&exact)?;
    out.rationalized = true;
    Ok(out)
}

/// Simplest rational within `tol` of `x`, from the continued fraction
/// convergents.
pub fn rationalize(x: f64, tol: f64) -> Result<Rational> {
    if !x.is_finite() || !(tol > 0.0) {
        return Err(Error::Range(format!(
            "cannot rationalize {x} with tolerance {tol}"
        )));
    }
    let exact = Rational::from_float(x).expect("finite");
    let tol = Rational::from_float(tol).expect("finite");
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = exact.clone();
    loop {
        let a = rest.floor();
        let ai = a.to_integer();
        let h = &ai * &h1 + &h0;
        let k = &ai * &k1 + &k0;
        let approx = Rational::new(h.clone(), k.clone());
        let frac = &rest - &a;
        if (&approx - &exact).abs() <= tol || frac.is_zero() {
            return Ok(approx);
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        rest = frac.recip();
    }
}

/// Nilpotency index of the strictly upper triangular part of `T_p`.
///
/// The product of `m` generic strict matrices has entry `(i, k)` equal to a
/// sum of distinct monomials, one per chain `i < j₁ < … < k` of length `m`,
/// so it vanishes identically exactly when the `m`-th power of the 0/1
/// strict pattern does. That settles length `p`; the product
/// `E₁₂E₂₃⋯E_{p−1,p} = E_{1p}` witnesses that length `p − 1` does not.
pub fn strict_nilpotency_check(p: usize) -> Result<usize> {
    if p == 0 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let pattern =
        UpperTriangular::<Rational>::from_fn(p, |i, j| if i < j { int(1) } else { int(0) });
    let power =
        |m: usize| (0..m).try_fold(UpperTriangular::identity(p), |acc, _| acc.mul(&pattern));
    if !power(p)?.is_zero() {
        return Err(Error::Precondition(format!(
            "strict products of length {p} do not vanish"
        )));
    }
    if p >= 2 {
        let chains = power(p - 1)?;
        let witness = (1..p).try_fold(UpperTriangular::identity(p), |acc, i| {
            acc.mul(&UpperTriangular::<Rational>::unit(p, i, i + 1))
        })?;
        if chains.get(1, p).is_zero() || witness != UpperTriangular::unit(p, 1, p) {
            return Err(Error::Precondition(format!(
                "no nonzero product of length {}",
                p - 1
            )));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uea::rat;

    type M = UpperTriangular<Rational>;

    #[test]
    fn t2_chain() {
        let s = derived_series(&full_basis::<Rational>(2)).unwrap();
        assert_eq!(s.dims(), vec![3, 1, 0]);
        assert!(s.solvable);
        assert_eq!(s.bases[1], vec![M::unit(2, 1, 2)]);
    }

    #[test]
    fn t3_chain() {
        let s = derived_series(&full_basis::<Rational>(3)).unwrap();
        assert_eq!(s.dims(), vec![6, 3, 1, 0]);
        assert_eq!(s.bases[2], vec![M::unit(3, 1, 3)]);
    }

    #[test]
    fn diagonal_is_abelian() {
        let s = derived_series(&diagonal_basis::<Rational>(4)).unwrap();
        assert_eq!(s.dims(), vec![4, 0]);
    }

    #[test]
    fn numeric_generators() {
        let gens: Vec<NumericTriMatrix> = full_basis::<Rational>(2)
            .iter()
            .map(NumericTriMatrix::from_exact)
            .collect();
        let s = derived_series_numeric(&gens, 1e-12).unwrap();
        assert_eq!(s.dims(), vec![3, 1, 0]);
        assert!(s.rationalized);
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.5, 1e-12).unwrap(), rat(1, 2));
        assert_eq!(rationalize(1.0 / 3.0, 1e-9).unwrap(), rat(1, 3));
        assert_eq!(rationalize(-2.25, 1e-12).unwrap(), rat(-9, 4));
        assert_eq!(rationalize(3.14159, 1e-2).unwrap(), rat(22, 7));
        assert!(rationalize(f64::NAN, 1e-9).is_err());
    }

    #[test]
    fn nilpotency_examples() {
        for p in 1..=6 {
            assert_eq!(strict_nilpotency_check(p).unwrap(), p);
        }
        let e12 = M::unit(2, 1, 2);
        assert!(e12.mul(&e12).unwrap().is_zero());
        let p3 = M::unit(3, 1, 2).mul(&M::unit(3, 2, 3)).unwrap();
        assert_eq!(p3, M::unit(3, 1, 3));
    }
}
