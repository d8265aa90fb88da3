use std::fmt;

use crate::error::{Error, Result};
use crate::uea::Scalar;

/// Exact upper triangular matrix of order `p`, indexed from 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UpperTriangular<S> {
    p: usize,
    data: Vec<S>,
}

impl<S: Scalar> UpperTriangular<S> {
    pub fn zeros(p: usize) -> Self {
        Self {
            p,
            data: vec![S::zero(); p * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        Self::from_fn(p, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// Matrix unit `E_ij`.
    pub fn unit(p: usize, i: usize, j: usize) -> Self {
        assert!(
            1 <= i && i <= j && j <= p,
            "E_{i}{j} is not upper triangular of order {p}"
        );
        let mut m = Self::zeros(p);
        m.set(i, j, S::one());
        m
    }

    /// Fills `(i, j)` for `i ≤ j` from `f`.
    pub fn from_fn(p: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(p);
        for i in 1..=p {
            for j in i..=p {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rejects nonzero entries below the diagonal and ragged rows.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let p = rows.len();
        let mut m = Self::zeros(p);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != p {
                return Err(Error::Precondition(format!(
                    "row {} has length {}",
                    r + 1,
                    row.len()
                )));
            }
            for (c, x) in row.into_iter().enumerate() {
                if c < r {
                    if !x.is_zero() {
                        return Err(Error::Precondition(format!(
                            "entry ({},{}) below the diagonal is nonzero",
                            r + 1,
                            c + 1
                        )));
                    }
                } else {
                    m.set(r + 1, c + 1, x);
                }
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[(i - 1) * self.p + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, x: S) {
        debug_assert!(i <= j || x.is_zero());
        let p = self.p;
        self.data[(i - 1) * p + (j - 1)] = x;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data
            .chunks(self.p.max(1))
            .take(self.p)
            .map(<[S]>::to_vec)
            .collect()
    }

    /// Entries on and above the diagonal, row by row.
    pub fn upper_entries(&self) -> impl Iterator<Item = &S> + '_ {
        (1..=self.p).flat_map(move |i| (i..=self.p).map(move |j| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn is_strict(&self) -> bool {
        (1..=self.p).all(|i| self.get(i, i).is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::OrderMismatch {
                left: self.p,
                right: o.p,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self { p: self.p, data })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self { p: self.p, data })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            p: self.p,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let p = self.p;
        Ok(Self::from_fn(p, |i, k| {
            (i..=k).fold(S::zero(), |acc, j| {
                let (a, b) = (self.get(i, j), o.get(j, k));
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a.clone() * b.clone()
                }
            })
        }))
    }

    /// Commutator `xy − yx`.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }
}

impl<S: Scalar> fmt::Display for UpperTriangular<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows().iter().enumerate() {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, x) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}
