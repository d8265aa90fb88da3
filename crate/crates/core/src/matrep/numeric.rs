use num_complex::Complex64;

use super::UpperTriangular;
use crate::error::{Error, Result};
use crate::uea::Scalar;

/// Upper triangular matrix with complex double entries, indexed from 1.
#[derive(Clone, PartialEq, Debug)]
pub struct NumericTriMatrix {
    p: usize,
    data: Vec<Complex64>,
}

impl NumericTriMatrix {
    pub fn zeros(p: usize) -> Self {
        Self {
            p,
            data: vec![Complex64::new(0.0, 0.0); p * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        let mut m = Self::zeros(p);
        for i in 1..=p {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Rejects ragged rows and nonzero entries below the diagonal.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
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
                if c < r && x != Complex64::new(0.0, 0.0) {
                    return Err(Error::Precondition(format!(
                        "entry ({},{}) below the diagonal is nonzero",
                        r + 1,
                        c + 1
                    )));
                }
                if c >= r {
                    m.set(r + 1, c + 1, x);
                }
            }
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Upper triangle, row by row.
    pub fn from_upper(p: usize, upper: &[Complex64]) -> Result<Self> {
        if upper.len() != p * (p + 1) / 2 {
            return Err(Error::Precondition(format!(
                "order {p} needs {} upper entries, got {}",
                p * (p + 1) / 2,
                upper.len()
            )));
        }
        let mut m = Self::zeros(p);
        let mut it = upper.iter();
        for i in 1..=p {
            for j in i..=p {
                m.set(i, j, *it.next().expect("length checked"));
            }
        }
        Ok(m)
    }

    pub fn upper(&self) -> Vec<Complex64> {
        (1..=self.p)
            .flat_map(|i| (i..=self.p).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    pub fn from_exact<S: Scalar>(m: &UpperTriangular<S>) -> Self {
        let p = m.order();
        let mut out = Self::zeros(p);
        for i in 1..=p {
            for j in i..=p {
                out.set(i, j, m.get(i, j).to_complex64());
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i - 1) * self.p + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Complex64) {
        let p = self.p;
        self.data[(i - 1) * p + (j - 1)] = x;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data
            .chunks(self.p.max(1))
            .take(self.p)
            .map(<[Complex64]>::to_vec)
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::OrderMismatch {
                left: self.p,
                right: o.p,
            });
        }
        let mut out = Self::zeros(self.p);
        for i in 1..=self.p {
            for k in i..=self.p {
                let s = (i..=k).map(|j| self.get(i, j) * o.get(j, k)).sum();
                out.set(i, k, s);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::OrderMismatch {
                left: self.p,
                right: o.p,
            });
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Ok(Self { p: self.p, data })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            p: self.p,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Induced ∞-norm: the largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.p.max(1))
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (1..=self.p).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> Complex64 {
        (1..=self.p).map(|i| self.get(i, i)).product()
    }
}
