//! Locally polynomial sections of the noncommutative function algebras over
//! open subsets of Ω, with the shifted convolution product, restriction
//! homomorphisms and gluing.
//!
//! A section over `V` carries one polynomial per connected component of
//! each level `V_q`. The product is
//!
//! ```text
//! (s·t)_q(λ) = Σ_{i+j=q} s_i(λ) t_j(λ - i)
//! ```
//!
//! which only makes sense when every component of `V_q` lies in a component
//! of `V_i` and, shifted by `-i`, in a component of `V_j`. Both follow from
//! the shift condition on `V`, so the product refuses invalid level
//! sequences.

use crate::domains::{in_base, ComplexRegion, OmegaOpen, RealOpenSet, Region, SetOp, Tail};
use crate::error::{Error, Result};
use crate::uea::{PbwElement, Polynomial, Scalar};

type Poly<R> = Polynomial<<R as Region>::Scalar>;

/// How a multiplication on sections over `V` relates to U(aff₁).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Polynomials are dense in every level, so the product is the unique
    /// continuous extension of the product of U(aff₁).
    DenseImage,
    /// Polynomial density is not known for `V`; the same formula is applied
    /// and the result is an extension of the general existence kind.
    General,
}

impl Extension {
    pub fn as_str(self) -> &'static str {
        match self {
            Extension::DenseImage => "dense",
            Extension::General => "general",
        }
    }
}

/// Spaces that know whether polynomials are dense in the level algebras.
pub trait PolynomialDensity: Region {
    fn extension(v: &OmegaOpen<Self>) -> Extension;
}

impl PolynomialDensity for RealOpenSet {
    fn extension(_: &OmegaOpen<Self>) -> Extension {
        Extension::DenseImage
    }
}

impl PolynomialDensity for ComplexRegion {
    fn extension(v: &OmegaOpen<Self>) -> Extension {
        if in_base(v) {
            Extension::DenseImage
        } else {
            Extension::General
        }
    }
}

/// Components of one level, cached for point lookups.
struct LevelIndex<R> {
    components: Vec<R>,
}

impl<R: Region> LevelIndex<R> {
    fn new(region: &R) -> Self {
        Self {
            components: region.components(),
        }
    }

    fn locate(&self, x: &R::Scalar) -> Option<usize> {
        self.components.iter().position(|c| c.contains(x))
    }
}

/// Locally polynomial section over an open subset of Ω.
///
/// For a finitely supported parent every listed level is stored. For a
/// parent with full tail the stored levels stop after the last nonzero one
/// and all further levels are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section<R: Region> {
    parent: OmegaOpen<R>,
    levels: Vec<Vec<Poly<R>>>,
}

impl<R: Region> Section<R> {
    /// Checks that every level lists one polynomial per component. Missing
    /// trailing levels are zero.
    pub fn new(parent: OmegaOpen<R>, mut levels: Vec<Vec<Poly<R>>>) -> Result<Self> {
        if let Some(n) = parent.support() {
            if levels.len() > n {
                return Err(Error::Precondition(format!(
                    "section has {} levels but its open set only {n}",
                    levels.len()
                )));
            }
            for q in levels.len()..n {
                levels.push(vec![Polynomial::zero(); parent.level(q).component_count()]);
            }
        }
        for (q, polys) in levels.iter().enumerate() {
            let expected = parent.level(q).component_count();
            if polys.len() != expected {
                return Err(Error::Precondition(format!(
                    "level {q} has {} polynomials for {expected} components",
                    polys.len()
                )));
            }
        }
        if parent.tail() == Tail::Full {
            while levels
                .last()
                .is_some_and(|l| l.iter().all(Polynomial::is_zero))
            {
                levels.pop();
            }
        }
        Ok(Self { parent, levels })
    }

    pub fn zero(parent: OmegaOpen<R>) -> Self {
        Self::new(parent, Vec::new()).expect("zero section")
    }

    /// Multiplicative unit: 1 on level 0, zero above.
    pub fn unit(parent: OmegaOpen<R>) -> Self {
        let levels = if parent.levels().is_empty() && parent.tail() == Tail::Full {
            vec![vec![Polynomial::one()]]
        } else {
            let mut out: Vec<_> = parent
                .levels()
                .iter()
                .map(|v| vec![Polynomial::zero(); v.component_count()])
                .collect();
            if let Some(first) = out.first_mut() {
                first.iter_mut().for_each(|p| *p = Polynomial::one());
            }
            out
        };
        Self::new(parent, levels).expect("unit section")
    }

    pub fn parent(&self) -> &OmegaOpen<R> {
        &self.parent
    }

    pub fn levels(&self) -> &[Vec<Poly<R>>] {
        &self.levels
    }

    /// Polynomial on component `c` of level `q`; zero past the stored levels.
    pub fn poly(&self, q: usize, c: usize) -> Poly<R> {
        self.levels
            .get(q)
            .and_then(|l| l.get(c))
            .cloned()
            .unwrap_or_default()
    }

    fn level_len(&self) -> usize {
        self.levels.len()
    }
}

/// Image of `a = Σ f_q(e₁)e₂^q`: the global polynomial `f_q` on every
/// component of `V_q`.
pub fn embed_u<R: Region>(a: &PbwElement<R::Scalar>, v: &OmegaOpen<R>) -> Result<Section<R>> {
    v.validate()?;
    let n = v.support().unwrap_or(a.levels().len());
    let levels = (0..n)
        .map(|q| vec![a.level(q); v.level(q).component_count()])
        .collect();
    Section::new(v.clone(), levels)
}

/// Product of two sections over a valid `V`.
pub fn nc_mul<R: Region>(v: &OmegaOpen<R>, s: &Section<R>, t: &Section<R>) -> Result<Section<R>> {
    v.validate()?;
    if s.parent() != v || t.parent() != v {
        return Err(Error::Precondition(
            "sections must live over the given open set".into(),
        ));
    }
    let n = match v.support() {
        Some(n) => n,
        None if s.level_len() == 0 || t.level_len() == 0 => 0,
        None => s.level_len() + t.level_len() - 1,
    };
    let index: Vec<LevelIndex<R>> = (0..n).map(|q| LevelIndex::new(&v.level(q))).collect();
    let mut levels = Vec::with_capacity(n);
    for q in 0..n {
        let mut out = Vec::with_capacity(index[q].components.len());
        for comp in &index[q].components {
            let x = comp.sample_point().expect("components are nonempty");
            let mut acc = Polynomial::zero();
            for i in 0..=q {
                let j = q - i;
                let shift = R::Scalar::from_i64(i as i64);
                let si = index[i]
                    .locate(&x)
                    .ok_or(Error::InvalidOmega { level: i })?;
                let f = s.poly(i, si);
                if f.is_zero() {
                    continue;
                }
                let y = x.clone() - shift.clone();
                let tj = index[j]
                    .locate(&y)
                    .ok_or(Error::InvalidOmega { level: j })?;
                let g = t.poly(j, tj);
                if g.is_zero() {
                    continue;
                }
                acc = &acc + &(&f * &g.shift(&-shift));
            }
            out.push(acc);
        }
        levels.push(out);
    }
    Section::new(v.clone(), levels)
}

/// Restriction `τ_{VW}` to an open `W ⊆ V`.
pub fn tau_restrict<R: Region>(
    v: &OmegaOpen<R>,
    w: &OmegaOpen<R>,
    s: &Section<R>,
) -> Result<Section<R>> {
    v.validate()?;
    w.validate()?;
    if s.parent() != v {
        return Err(Error::Precondition("section must live over V".into()));
    }
    w.check_subset(v)?;
    let n = w.support().unwrap_or(s.level_len());
    let mut levels = Vec::with_capacity(n);
    for q in 0..n {
        let big = LevelIndex::new(&v.level(q));
        let small = w.level(q).components();
        let polys = small
            .iter()
            .map(|c| {
                let x = c.sample_point().expect("components are nonempty");
                big.locate(&x)
                    .map(|k| s.poly(q, k))
                    .ok_or(Error::NotSubset { level: q })
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(polys);
    }
    Section::new(w.clone(), levels)
}

/// Glues sections that agree on overlaps into the unique section over the
/// union of the cover.
///
/// Two components meet in a nonempty open set, and polynomials agreeing on
/// one are equal, so compatibility is exact equality for every pair of
/// meeting components.
pub fn glue<R: Region>(cover: &[OmegaOpen<R>], sections: &[Section<R>]) -> Result<Section<R>> {
    if cover.is_empty() || cover.len() != sections.len() {
        return Err(Error::Precondition(
            "need one section per cover member and a nonempty cover".into(),
        ));
    }
    for (v, s) in cover.iter().zip(sections) {
        v.validate()?;
        if s.parent() != v {
            return Err(Error::Precondition(
                "section does not live over its cover member".into(),
            ));
        }
    }
    let depth = cover
        .iter()
        .zip(sections)
        .map(|(v, s)| v.support().unwrap_or(s.level_len()))
        .max()
        .unwrap_or(0);
    let comps: Vec<Vec<Vec<R>>> = cover
        .iter()
        .map(|v| (0..depth).map(|q| v.level(q).components()).collect())
        .collect();

    for a in 0..cover.len() {
        for b in a + 1..cover.len() {
            for q in 0..depth {
                for (ci, c) in comps[a][q].iter().enumerate() {
                    for (di, d) in comps[b][q].iter().enumerate() {
                        if c.meets(d) && sections[a].poly(q, ci) != sections[b].poly(q, di) {
                            return Err(Error::Incompatible {
                                first: a,
                                second: b,
                                level: q,
                                component: ci,
                            });
                        }
                    }
                }
            }
        }
    }

    let mut union = cover[0].clone();
    for v in &cover[1..] {
        union = union.combine(v, SetOp::Union)?;
    }
    let n = union.support().unwrap_or(depth);
    let mut levels = Vec::with_capacity(n);
    for q in 0..n {
        let target = LevelIndex::new(&union.level(q));
        let mut polys: Vec<Option<Poly<R>>> = vec![None; target.components.len()];
        for (m, member) in comps.iter().enumerate() {
            for (ci, c) in member[q].iter().enumerate() {
                let x = c.sample_point().expect("components are nonempty");
                let e = target.locate(&x).expect("cover member inside the union");
                polys[e].get_or_insert_with(|| sections[m].poly(q, ci));
            }
        }
        levels.push(
            polys
                .into_iter()
                .map(|p| p.expect("every component of the union is covered"))
                .collect(),
        );
    }
    Section::new(union, levels)
}

/// Exact value at `σ_{x,q}`.
pub fn section_eval<R: Region>(s: &Section<R>, q: usize, x: &R::Scalar) -> Result<R::Scalar> {
    let c = s
        .parent()
        .level(q)
        .component_containing(x)
        .ok_or(Error::OutOfDomain { level: q })?;
    Ok(s.poly(q, c).eval(x))
}
