use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::complex::{ComplexRegion, Disk};
use super::Region;
use crate::error::{Error, Result};
use crate::uea::{int, GaussianRational, Rational, Scalar};

/// What the level sequence does past the listed levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    /// All further levels are empty.
    Empty,
    /// Every level is the whole space.
    Full,
}

impl Tail {
    pub fn as_str(self) -> &'static str {
        match self {
            Tail::Empty => "empty",
            Tail::Full => "full",
        }
    }
}

impl FromStr for Tail {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "empty" => Ok(Tail::Empty),
            "full" => Ok(Tail::Full),
            other => Err(format!("unknown tail `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
}

/// Open subset `⋃_q {σ_{r,q} : r ∈ V_q}` of Ω, given by its level sequence.
///
/// Construction does not check the shift condition
/// `V_{q+1} ⊆ V_q ∩ (V_q + 1)`; [`OmegaOpen::validate`] does, so that
/// invalid sequences can still be represented and rejected downstream.
///
/// Canonical form: a full tail lists no levels, an empty tail lists no
/// trailing empty levels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OmegaOpen<R> {
    levels: Vec<R>,
    tail: Tail,
}

impl<R: Region> OmegaOpen<R> {
    pub fn new(mut levels: Vec<R>, tail: Tail) -> Result<Self> {
        match tail {
            Tail::Full => {
                if let Some(q) = levels.iter().position(|v| !v.is_whole()) {
                    return Err(Error::Precondition(format!(
                        "a full tail needs every level to be the whole space (level {q} is not)"
                    )));
                }
                levels.clear();
            }
            Tail::Empty => {
                while levels.last().is_some_and(Region::is_empty) {
                    levels.pop();
                }
            }
        }
        Ok(Self { levels, tail })
    }

    /// Finitely supported open set.
    pub fn finite(levels: Vec<R>) -> Self {
        Self::new(levels, Tail::Empty).expect("empty tail is always admissible")
    }

    /// All of Ω.
    pub fn whole() -> Self {
        Self {
            levels: Vec::new(),
            tail: Tail::Full,
        }
    }

    pub fn empty() -> Self {
        Self {
            levels: Vec::new(),
            tail: Tail::Empty,
        }
    }

    pub fn levels(&self) -> &[R] {
        &self.levels
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// `V_q`, using the tail beyond the listed levels.
    pub fn level(&self, q: usize) -> R {
        match self.levels.get(q) {
            Some(v) => v.clone(),
            None => match self.tail {
                Tail::Empty => R::empty(),
                Tail::Full => R::whole(),
            },
        }
    }

    /// Number of levels that may be nonempty; `None` when unbounded.
    pub fn support(&self) -> Option<usize> {
        match self.tail {
            Tail::Empty => Some(self.levels.len()),
            Tail::Full => None,
        }
    }

    /// Checks `V_{q+1} ⊆ V_q` and `V_{q+1} ⊆ V_q + 1` for every `q`.
    ///
    /// The two inclusions together are the shift condition; testing them
    /// separately avoids intersecting regions that only support unions.
    pub fn validate(&self) -> Result<()> {
        let one = R::Scalar::one();
        for q in 0..self.levels.len() {
            let next = self.level(q + 1);
            if next.is_empty() {
                continue;
            }
            let cur = &self.levels[q];
            if !next.is_subset(cur) || !next.is_subset(&cur.shift(&one)) {
                return Err(Error::InvalidOmega { level: q });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Levelwise union or intersection of two valid opens.
    pub fn combine(&self, other: &Self, op: SetOp) -> Result<Self> {
        self.validate()?;
        other.validate()?;
        let n = self.levels.len().max(other.levels.len());
        let tail = match (op, self.tail, other.tail) {
            (SetOp::Union, Tail::Full, _) | (SetOp::Union, _, Tail::Full) => Tail::Full,
            (SetOp::Intersect, Tail::Full, Tail::Full) => Tail::Full,
            _ => Tail::Empty,
        };
        if tail == Tail::Full {
            return Ok(Self::whole());
        }
        let levels = (0..n)
            .map(|q| {
                let (a, b) = (self.level(q), other.level(q));
                match op {
                    SetOp::Union => a.union(&b),
                    SetOp::Intersect => a.intersect(&b),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let out = Self::new(levels, tail)?;
        debug_assert!(out.is_valid());
        Ok(out)
    }

    /// Whether `σ_{r,q}` lies in the open set.
    pub fn member(&self, r: &R::Scalar, q: usize) -> bool {
        self.level(q).contains(r)
    }

    /// `self ⊆ other` levelwise; on failure reports the first bad level.
    pub fn check_subset(&self, other: &Self) -> Result<()> {
        if other.tail == Tail::Full {
            return Ok(());
        }
        if self.tail == Tail::Full {
            return Err(Error::NotSubset {
                level: other.levels.len(),
            });
        }
        for (q, v) in self.levels.iter().enumerate() {
            if !v.is_subset(&other.level(q)) {
                return Err(Error::NotSubset { level: q });
            }
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_subset(other).is_ok()
    }
}

impl<R: Region> fmt::Display for OmegaOpen<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (q, v) in self.levels.iter().enumerate() {
            if q > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ") tail {}", self.tail.as_str())
    }
}

/// Member of the base: `V_q = ⋃_{k=0}^{p-q} D(λ - k, ε)` for `q ≤ p`, empty
/// above `p`.
pub fn base_open(
    center: &GaussianRational,
    p: usize,
    eps: &Rational,
) -> Result<OmegaOpen<ComplexRegion>> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::Range(format!(
            "radius must lie in (0, 1), got {eps}"
        )));
    }
    let levels = (0..=p)
        .map(|q| {
            ComplexRegion::disks(
                (0..=p - q)
                    .map(|k| {
                        let c = center.clone() - GaussianRational::from_i64(k as i64);
                        Disk::new(c, eps.clone()).expect("positive radius")
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(OmegaOpen::finite(levels))
}

/// Whether `V` has the shape of a base member: finite support `0..=p`, and
/// each level `q` a union of equal disks of radius in (0, 1) centered at
/// `λ, λ-1, ..., λ-p+q`, where `V_p` is the single disk at `λ`.
pub fn in_base(v: &OmegaOpen<ComplexRegion>) -> bool {
    if v.tail() != Tail::Empty || v.levels().is_empty() {
        return false;
    }
    let p = v.levels().len() - 1;
    let Some(top) = v.levels()[p].as_disks() else {
        return false;
    };
    let [apex] = top else {
        return false;
    };
    let lambda = &apex.center;
    v.levels().iter().enumerate().all(|(q, level)| {
        let Some(disks) = level.as_disks() else {
            return false;
        };
        let Some(first) = disks.first() else {
            return false;
        };
        let eps = &first.radius;
        if !eps.is_positive() || *eps >= Rational::one() || disks.len() != p - q + 1 {
            return false;
        }
        (0..=p - q).all(|k| {
            let c = lambda.clone() - GaussianRational::real(int(k as i64));
            disks.iter().any(|d| d.center == c && &d.radius == eps)
        })
    })
}
