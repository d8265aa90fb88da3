use std::fmt;

use num_traits::Zero;

use super::poly::Polynomial;
use super::scalar::{Field, GaussianRational, Rational, Scalar};
use crate::error::{Error, Result};

/// Element `Σ_q f_q(e₁) e₂^q` of U(aff₁) in PBW normal form.
///
/// `levels[q]` holds `f_q`; the last level is nonzero unless the element is
/// zero, which is the empty sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PbwElement<S> {
    levels: Vec<Polynomial<S>>,
}

impl<S: Scalar> PbwElement<S> {
    pub fn new(mut levels: Vec<Polynomial<S>>) -> Self {
        while levels.last().is_some_and(Polynomial::is_zero) {
            levels.pop();
        }
        Self { levels }
    }

    pub fn zero() -> Self {
        Self { levels: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![Polynomial::one()])
    }

    pub fn scalar(c: S) -> Self {
        Self::new(vec![Polynomial::constant(c)])
    }

    pub fn e1() -> Self {
        Self::new(vec![Polynomial::identity()])
    }

    pub fn e2() -> Self {
        Self::new(vec![Polynomial::zero(), Polynomial::one()])
    }

    /// `f(e₁) e₂^q`.
    pub fn term(f: Polynomial<S>, q: usize) -> Self {
        let mut levels = vec![Polynomial::zero(); q];
        levels.push(f);
        Self::new(levels)
    }

    pub fn field(&self) -> Field {
        S::FIELD
    }

    pub fn levels(&self) -> &[Polynomial<S>] {
        &self.levels
    }

    /// `f_q`, zero beyond the stored levels.
    pub fn level(&self, q: usize) -> Polynomial<S> {
        self.levels.get(q).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// Degree in e₂; `None` for zero.
    pub fn e2_degree(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.levels.len().max(o.levels.len());
        Self::new((0..n).map(|q| &self.level(q) + &o.level(q)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.levels.len().max(o.levels.len());
        Self::new((0..n).map(|q| &self.level(q) - &o.level(q)).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.levels.iter().map(|f| f.scale(c)).collect())
    }

    /// Product in normal form.
    ///
    /// From `e₂ e₁ = (e₁ - 1) e₂` one gets `e₂^i g(e₁) = g(e₁ - i) e₂^i`, hence
    /// `h_q(λ) = Σ_{i+j=q} f_i(λ) g_j(λ - i)`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Polynomial::zero(); self.levels.len() + o.levels.len() - 1];
        // g_j(λ - i) depends only on (i, j); compute each shift once.
        for (i, f) in self.levels.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let back = -S::from_i64(i as i64);
            for (j, g) in o.levels.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let term = f * &g.shift(&back);
                out[i + j] = &out[i + j] + &term;
            }
        }
        Self::new(out)
    }

    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl<S: Scalar> fmt::Display for PbwElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (q, p) in self.levels.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{p}]")?;
            match q {
                0 => {}
                1 => f.write_str("·e2")?,
                _ => write!(f, "·e2^{q}")?,
            }
        }
        Ok(())
    }
}

/// A PBW element whose field is only known at run time (documents, CLI).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyPbw {
    Real(PbwElement<Rational>),
    Complex(PbwElement<GaussianRational>),
}

impl AnyPbw {
    pub fn field(&self) -> Field {
        match self {
            AnyPbw::Real(_) => Field::Real,
            AnyPbw::Complex(_) => Field::Complex,
        }
    }

    fn zip(
        &self,
        o: &Self,
        real: impl Fn(&PbwElement<Rational>, &PbwElement<Rational>) -> PbwElement<Rational>,
        complex: impl Fn(
            &PbwElement<GaussianRational>,
            &PbwElement<GaussianRational>,
        ) -> PbwElement<GaussianRational>,
    ) -> Result<Self> {
        match (self, o) {
            (AnyPbw::Real(a), AnyPbw::Real(b)) => Ok(AnyPbw::Real(real(a, b))),
            (AnyPbw::Complex(a), AnyPbw::Complex(b)) => Ok(AnyPbw::Complex(complex(a, b))),
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: o.field(),
            }),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, PbwElement::mul, PbwElement::mul)
    }

    pub fn mul_oracle(&self, o: &Self) -> Result<Self> {
        self.zip(
            o,
            super::oracle::mul_by_rewriting,
            super::oracle::mul_by_rewriting,
        )
    }

    pub fn bracket(&self, o: &Self) -> Result<Self> {
        self.zip(o, PbwElement::bracket, PbwElement::bracket)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyPbw::Real(a) => a.is_zero(),
            AnyPbw::Complex(a) => a.is_zero(),
        }
    }
}

impl<S: Scalar> Zero for PbwElement<S> {
    fn zero() -> Self {
        PbwElement::zero()
    }
    fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }
}

impl<S: Scalar> std::ops::Add for PbwElement<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PbwElement::add(&self, &o)
    }
}
