use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;

use super::{NumericTriMatrix, UpperTriangular};
use crate::domains::{build_w_tuple, DomainTuple, OmegaOpen, Region};
use crate::error::{Error, Result};
use crate::uea::{PbwElement, Polynomial, Scalar};

type Poly<R> = Polynomial<<R as Region>::Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E1,
    E2,
}

impl FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "e1" => Ok(Generator::E1),
            "e2" => Ok(Generator::E2),
            other => Err(format!("unknown generator `{other}`")),
        }
    }
}

/// `σ_{r,q}(e₁) = X_q + r` with `X_q = diag(q, q−1, …, 0)`, and
/// `σ_{r,q}(e₂) = Y_q`, the superdiagonal of ones. Order `q + 1`.
pub fn sigma_exact<S: Scalar>(r: &S, q: usize, g: Generator) -> UpperTriangular<S> {
    UpperTriangular::from_fn(q + 1, |i, j| match g {
        Generator::E1 if i == j => S::from_i64((q + 1 - i) as i64) + r.clone(),
        Generator::E2 if j == i + 1 => S::one(),
        _ => S::zero(),
    })
}

pub fn sigma_rep(r: Complex64, q: usize, g: Generator) -> NumericTriMatrix {
    let mut m = NumericTriMatrix::zeros(q + 1);
    for i in 1..=q + 1 {
        match g {
            Generator::E1 => m.set(i, i, r + (q + 1 - i) as f64),
            Generator::E2 if i <= q => m.set(i, i + 1, Complex64::new(1.0, 0.0)),
            Generator::E2 => {}
        }
    }
    m
}

/// Element of the triangular algebra over a domain tuple: entry `(i, j)`
/// holds one polynomial per connected component of `W_{ij}`, so entries
/// over empty domains are absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriMatrixElement<R: Region> {
    domains: DomainTuple<R>,
    entries: BTreeMap<(usize, usize), Vec<Poly<R>>>,
}

impl<R: Region> TriMatrixElement<R> {
    /// Missing entries over nonempty domains are zero.
    pub fn new(
        domains: DomainTuple<R>,
        mut entries: BTreeMap<(usize, usize), Vec<Poly<R>>>,
    ) -> Result<Self> {
        let p = domains.order();
        if let Some(&(i, j)) = entries
            .keys()
            .find(|&&(i, j)| !(1 <= i && i <= j && j <= p))
        {
            return Err(Error::Precondition(format!(
                "entry ({i},{j}) outside order {p}"
            )));
        }
        for (&(i, j), w) in domains.entries() {
            let n = w.component_count();
            let polys = entries
                .entry((i, j))
                .or_insert_with(|| vec![Polynomial::zero(); n]);
            if polys.len() != n {
                return Err(Error::Precondition(format!(
                    "entry ({i},{j}) has {} polynomials for {n} components",
                    polys.len()
                )));
            }
        }
        entries.retain(|_, v| !v.is_empty());
        Ok(Self { domains, entries })
    }

    /// Global polynomials `f(i, j)` restricted to each domain.
    pub fn from_global(
        domains: DomainTuple<R>,
        mut f: impl FnMut(usize, usize) -> Poly<R>,
    ) -> Self {
        let entries = domains
            .entries()
            .iter()
            .filter(|(_, w)| !w.is_empty())
            .map(|(&(i, j), w)| (((i, j)), vec![f(i, j); w.component_count()]))
            .collect();
        Self { domains, entries }
    }

    pub fn identity(domains: DomainTuple<R>) -> Self {
        Self::from_global(domains, |i, j| {
            if i == j {
                Polynomial::one()
            } else {
                Polynomial::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.domains.order()
    }

    pub fn domains(&self) -> &DomainTuple<R> {
        &self.domains
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Vec<Poly<R>>> {
        &self.entries
    }

    /// Polynomials of entry `(i, j)`, one per component; empty when the
    /// domain is empty.
    pub fn entry(&self, i: usize, j: usize) -> &[Poly<R>] {
        self.entries.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    /// The single polynomial of an entry whose domain is connected, or the
    /// common polynomial of all components.
    pub fn global_entry(&self, i: usize, j: usize) -> Option<&Poly<R>> {
        let e = self.entry(i, j);
        let first = e.first()?;
        e.iter().all(|f| f == first).then_some(first)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().flatten().all(Polynomial::is_zero)
    }

    /// Value at `λ`. Entries whose domain misses `λ` are an error.
    pub fn eval_at(&self, lambda: &R::Scalar) -> Result<UpperTriangular<R::Scalar>> {
        let p = self.order();
        let mut m = UpperTriangular::zeros(p);
        for i in 1..=p {
            for j in i..=p {
                let w = self.domains.get(i, j);
                let c = w
                    .component_containing(lambda)
                    .ok_or(Error::OutOfDomain { level: j - i })?;
                m.set(i, j, self.entry(i, j)[c].eval(lambda));
            }
        }
        Ok(m)
    }
}

/// `π̃_q(a)`: the matrix function `λ ↦ σ_{λ,q}(a)` over the W-tuple of `V`,
/// whose entry `(i, j)` is `λ ↦ f_{j−i}(λ + q + 1 − i)`.
pub fn pi_tilde<R: Region>(
    a: &PbwElement<R::Scalar>,
    q: usize,
    v: &OmegaOpen<R>,
) -> Result<TriMatrixElement<R>> {
    let w = build_w_tuple(v, q)?;
    Ok(TriMatrixElement::from_global(w, |i, j| {
        a.level(j - i)
            .shift(&R::Scalar::from_i64((q + 1 - i) as i64))
    }))
}

/// Product `h_{ik} = Σ_j f_{ij}|_{W_{ik}} g_{jk}|_{W_{ik}}` over the domains
/// of `a`.
///
/// The domains of `a` must satisfy the tuple condition and lie entrywise
/// inside those of `b`, so that every component of `W_{ik}` sits inside one
/// component of each factor's domain.
pub fn tri_mul<R: Region>(
    a: &TriMatrixElement<R>,
    b: &TriMatrixElement<R>,
) -> Result<TriMatrixElement<R>> {
    let p = a.order();
    if b.order() != p {
        return Err(Error::OrderMismatch {
            left: p,
            right: b.order(),
        });
    }
    let (wa, wb) = (a.domains(), b.domains());
    wa.check_condition()?;
    if wa != wb {
        for (&(i, j), w) in wa.entries() {
            if !w.is_subset(wb.get(i, j)) {
                return Err(Error::DomainMismatch { i, j });
            }
        }
    }
    let comps: BTreeMap<(usize, usize), (Vec<R>, Vec<R>)> = wa
        .entries()
        .iter()
        .map(|(&ij, w)| (ij, (w.components(), wb.get(ij.0, ij.1).components())))
        .collect();
    let mut entries = BTreeMap::new();
    for (&(i, k), w) in wa.entries() {
        if w.is_empty() {
            continue;
        }
        let targets = &comps[&(i, k)].0;
        let mut polys = Vec::with_capacity(targets.len());
        for c in targets {
            let x = c.sample_point().expect("components are nonempty");
            let mut acc = Polynomial::zero();
            for j in i..=k {
                let ca = comps[&(i, j)].0.iter().position(|d| d.contains(&x));
                let cb = comps[&(j, k)].1.iter().position(|d| d.contains(&x));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Err(Error::TupleCondition { i, j, k });
                };
                let f = &a.entry(i, j)[ca];
                let g = &b.entry(j, k)[cb];
                if !f.is_zero() && !g.is_zero() {
                    acc = &acc + &(f * g);
                }
            }
            polys.push(acc);
        }
        entries.insert((i, k), polys);
    }
    TriMatrixElement::new(wa.clone(), entries)
}

/// Recovers `f_p` from the corner entry `(1, p + 1)` of `π̃_p(a)` over all
/// of Ω, which is `λ ↦ f_p(λ + p)`.
pub fn corner_recover<R: Region>(a: &PbwElement<R::Scalar>, p: usize) -> Result<Poly<R>> {
    match a.e2_degree() {
        Some(d) if p <= d => {}
        d => {
            return Err(Error::Degree(format!(
                "corner {p} needs e2-degree at least {p}, got {}",
                d.map_or("none (zero element)".to_string(), |d| d.to_string())
            )))
        }
    }
    let m = pi_tilde(a, p, &OmegaOpen::<R>::whole())?;
    let corner = m.global_entry(1, p + 1).cloned().unwrap_or_default();
    let f = corner.shift(&R::Scalar::from_i64(-(p as i64)));
    if f != a.level(p) {
        return Err(Error::Precondition(format!(
            "corner entry does not reproduce f_{p}"
        )));
    }
    Ok(f)
}
