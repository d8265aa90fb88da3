//! Open subsets of ℂ.
//!
//! Rectangle unions form an exact boolean algebra. Their canonical form is
//! the set of maximal open rectangles aligned to the intrinsic grid of the
//! set, so two descriptions of the same set normalize to the same value.
//! Disk unions are only combined by union, and containment between them is
//! tested conservatively (each disk must sit in a single disk).

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::real::{unsupported, Ext, Interval};
use super::Region;
use crate::error::Result;
use crate::uea::{int, rational_to_f64, rational_to_string, Field, GaussianRational, Rational};

/// Open axis-aligned rectangle `x × y`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x: Interval, y: Interval) -> Self {
        Self { x, y }
    }

    pub fn finite(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Option<Self> {
        Some(Self {
            x: Interval::finite(x0, x1)?,
            y: Interval::finite(y0, y1)?,
        })
    }

    pub fn whole() -> Self {
        Self {
            x: Interval::whole(),
            y: Interval::whole(),
        }
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        self.x.contains(&z.re) && self.y.contains(&z.im)
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x.intersect(&o.x).is_some() && self.y.intersect(&o.y).is_some()
    }

    pub fn intersect(&self, o: &Rect) -> Option<Rect> {
        Some(Rect {
            x: self.x.intersect(&o.x)?,
            y: self.y.intersect(&o.y)?,
        })
    }

    pub fn shift(&self, c: &GaussianRational) -> Rect {
        Rect {
            x: self.x.shift(&c.re),
            y: self.y.shift(&c.im),
        }
    }

    pub fn sample_point(&self) -> GaussianRational {
        GaussianRational::new(self.x.sample_point(), self.y.sample_point())
    }

    fn corners(&self) -> Option<[GaussianRational; 4]> {
        let (x0, x1) = (self.x.lo.finite()?, self.x.hi.finite()?);
        let (y0, y1) = (self.y.lo.finite()?, self.y.hi.finite()?);
        Some([
            GaussianRational::new(x0.clone(), y0.clone()),
            GaussianRational::new(x0.clone(), y1.clone()),
            GaussianRational::new(x1.clone(), y0.clone()),
            GaussianRational::new(x1.clone(), y1.clone()),
        ])
    }

    /// Squared distance from `z` to the closure of the rectangle.
    fn dist_sqr_to(&self, z: &GaussianRational) -> Rational {
        fn gap(iv: &Interval, t: &Rational) -> Rational {
            let t_ext = Ext::Finite(t.clone());
            if t_ext < iv.lo {
                iv.lo.finite().expect("finite below") - t
            } else if t_ext > iv.hi {
                t - iv.hi.finite().expect("finite above")
            } else {
                Rational::zero()
            }
        }
        let dx = gap(&self.x, &z.re);
        let dy = gap(&self.y, &z.im);
        &dx * &dx + &dy * &dy
    }
}

/// Open disk.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Disk {
    pub center: GaussianRational,
    pub radius: Rational,
}

impl Disk {
    /// `None` unless the radius is positive.
    pub fn new(center: GaussianRational, radius: Rational) -> Option<Self> {
        radius.is_positive().then_some(Self { center, radius })
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        (z.clone() - self.center.clone()).norm_sqr() < &self.radius * &self.radius
    }

    /// `self ⊆ o` iff `|c₁ − c₂| ≤ r₂ − r₁`.
    pub fn inside(&self, o: &Disk) -> bool {
        if self.radius > o.radius {
            return false;
        }
        let gap = &o.radius - &self.radius;
        (self.center.clone() - o.center.clone()).norm_sqr() <= &gap * &gap
    }

    /// Open disks meet iff `|c₁ − c₂| < r₁ + r₂`; tangent disks do not.
    pub fn overlaps(&self, o: &Disk) -> bool {
        let sum = &self.radius + &o.radius;
        (self.center.clone() - o.center.clone()).norm_sqr() < &sum * &sum
    }

    pub fn shift(&self, c: &GaussianRational) -> Disk {
        Disk {
            center: self.center.clone() + c.clone(),
            radius: self.radius.clone(),
        }
    }

    fn bounding_rect(&self) -> Rect {
        let r = &self.radius;
        Rect::finite(
            &self.center.re - r,
            &self.center.re + r,
            &self.center.im - r,
            &self.center.im + r,
        )
        .expect("positive radius")
    }

    fn meets_rect(&self, rect: &Rect) -> bool {
        rect.dist_sqr_to(&self.center) < &self.radius * &self.radius
    }
}

/// Open subset of ℂ, either a union of rectangles or a union of disks.
///
/// The empty set is always stored as an empty rectangle union.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ComplexRegion {
    Rects(Vec<Rect>),
    Disks(Vec<Disk>),
}

impl Default for ComplexRegion {
    fn default() -> Self {
        ComplexRegion::Rects(Vec::new())
    }
}

impl ComplexRegion {
    pub fn rects(rects: Vec<Rect>) -> Self {
        ComplexRegion::Rects(normalize_rects(&rects))
    }

    pub fn disks(mut disks: Vec<Disk>) -> Self {
        disks.sort_by(|a, b| {
            (&a.center.re, &a.center.im, &a.radius).cmp(&(&b.center.re, &b.center.im, &b.radius))
        });
        disks.dedup();
        let kept: Vec<Disk> = disks
            .iter()
            .enumerate()
            .filter(|(i, d)| {
                !disks
                    .iter()
                    .enumerate()
                    .any(|(j, e)| j != *i && d.inside(e) && !(e.inside(d) && j > *i))
            })
            .map(|(_, d)| d.clone())
            .collect();
        if kept.is_empty() {
            ComplexRegion::default()
        } else {
            ComplexRegion::Disks(kept)
        }
    }

    pub fn disk(center: GaussianRational, radius: Rational) -> Self {
        Self::disks(Disk::new(center, radius).into_iter().collect())
    }

    pub fn rect(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Self {
        Self::rects(Rect::finite(x0, x1, y0, y1).into_iter().collect())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ComplexRegion::Rects(_) => "rects",
            ComplexRegion::Disks(_) => "disks",
        }
    }

    pub fn as_disks(&self) -> Option<&[Disk]> {
        match self {
            ComplexRegion::Disks(d) => Some(d),
            ComplexRegion::Rects(r) if r.is_empty() => Some(&[]),
            ComplexRegion::Rects(_) => None,
        }
    }

    /// Inner approximation of a disk union by rectangles.
    ///
    /// Each disk is covered by overlapping horizontal strips of height at
    /// most `2·tol`; every strip lies inside its disk exactly, and the
    /// uncovered part of each disk lies within distance `2·tol` of its
    /// boundary circle.
    pub fn disks_to_rects(&self, tol: &Rational) -> Result<ComplexRegion> {
        let disks = match self {
            ComplexRegion::Rects(_) => return Ok(self.clone()),
            ComplexRegion::Disks(d) => d,
        };
        if !tol.is_positive() {
            return Err(crate::error::Error::Range(
                "tolerance must be positive".into(),
            ));
        }
        let mut rects = Vec::new();
        for d in disks {
            let r = &d.radius;
            let steps = ((r * int(2)) / tol).ceil().to_integer();
            let steps = steps.max(2.into());
            let h = (r * int(2)) / Rational::from_integer(steps.clone());
            let n: usize = steps.try_into().unwrap_or(usize::MAX);
            let bottom = &d.center.im - r;
            for k in 0..n.saturating_sub(1) {
                let y0 = &bottom + &h * int(k as i64);
                let y1 = &y0 + &h * int(2);
                let d0 = (&y0 - &d.center.im).abs();
                let d1 = (&y1 - &d.center.im).abs();
                let far = if d0 > d1 { d0 } else { d1 };
                let room = r * r - &far * &far;
                if !room.is_positive() {
                    continue;
                }
                let w = rational_sqrt_below(&room);
                if let Some(rect) =
                    Rect::finite(&d.center.re - &w, &d.center.re + &w, y0.clone(), y1)
                {
                    rects.push(rect);
                }
            }
        }
        Ok(ComplexRegion::rects(rects))
    }
}

/// A rational `w > 0` with `w² ≤ v`, close to `√v`.
fn rational_sqrt_below(v: &Rational) -> Rational {
    let scale = int(1 << 30);
    let approx = rational_to_f64(v).sqrt() * (1u64 << 30) as f64;
    let mut w = Rational::from_integer(num_bigint::BigInt::from(approx.floor() as i64)) / &scale;
    while &w * &w > *v {
        w -= Rational::one() / &scale;
    }
    if !w.is_positive() {
        // fall back to a small safe value: v / (v + 1) satisfies w² ≤ v for 0 < v
        let cand = v / (v + Rational::one());
        return if &cand * &cand <= *v { cand } else { v.clone() };
    }
    w
}

struct Grid {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl Grid {
    fn from_rects<'a>(rects: impl Iterator<Item = &'a Rect>) -> Self {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in rects {
            for e in [&r.x.lo, &r.x.hi] {
                if let Some(v) = e.finite() {
                    xs.push(v.clone());
                }
            }
            for e in [&r.y.lo, &r.y.hi] {
                if let Some(v) = e.finite() {
                    ys.push(v.clone());
                }
            }
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        Self { xs, ys }
    }

    /// Cell span of an interval along an axis. Cells alternate gap, line,
    /// gap, ...: cell `2i` is the gap left of coordinate `i`, cell `2k+1`
    /// the line through coordinate `k`.
    fn span(coords: &[Rational], iv: &Interval) -> (usize, usize) {
        let start = match &iv.lo {
            Ext::NegInf => 0,
            Ext::Finite(v) => 2 * coords.binary_search(v).expect("grid coordinate") + 2,
            Ext::PosInf => unreachable!("empty interval"),
        };
        let end = match &iv.hi {
            Ext::PosInf => 2 * coords.len(),
            Ext::Finite(v) => 2 * coords.binary_search(v).expect("grid coordinate"),
            Ext::NegInf => unreachable!("empty interval"),
        };
        (start, end)
    }

    fn table(&self, rects: &[Rect]) -> Vec<Vec<bool>> {
        let mut t = vec![vec![false; 2 * self.ys.len() + 1]; 2 * self.xs.len() + 1];
        for r in rects {
            let (x0, x1) = Self::span(&self.xs, &r.x);
            let (y0, y1) = Self::span(&self.ys, &r.y);
            for col in &mut t[x0..=x1] {
                for cell in &mut col[y0..=y1] {
                    *cell = true;
                }
            }
        }
        t
    }

    /// Drops grid lines across which the set does not change.
    fn prune(&mut self, t: &mut Vec<Vec<bool>>) {
        loop {
            let mut changed = false;
            let mut k = 0;
            while k < self.xs.len() {
                if t[2 * k] == t[2 * k + 1] && t[2 * k + 1] == t[2 * k + 2] {
                    t.drain(2 * k + 1..=2 * k + 2);
                    self.xs.remove(k);
                    changed = true;
                } else {
                    k += 1;
                }
            }
            let mut k = 0;
            while k < self.ys.len() {
                let same = t
                    .iter()
                    .all(|col| col[2 * k] == col[2 * k + 1] && col[2 * k + 1] == col[2 * k + 2]);
                if same {
                    for col in t.iter_mut() {
                        col.drain(2 * k + 1..=2 * k + 2);
                    }
                    self.ys.remove(k);
                    changed = true;
                } else {
                    k += 1;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn bound(coords: &[Rational], idx: usize) -> Ext {
        if idx == 0 {
            Ext::NegInf
        } else if idx == coords.len() + 1 {
            Ext::PosInf
        } else {
            Ext::Finite(coords[idx - 1].clone())
        }
    }
}

/// 2-D prefix sums over the cell table.
struct Prefix {
    sums: Vec<Vec<u32>>,
}

impl Prefix {
    fn new(t: &[Vec<bool>]) -> Self {
        let nx = t.len();
        let ny = t.first().map_or(0, Vec::len);
        let mut sums = vec![vec![0u32; ny + 1]; nx + 1];
        for i in 0..nx {
            for j in 0..ny {
                sums[i + 1][j + 1] = t[i][j] as u32 + sums[i][j + 1] + sums[i + 1][j] - sums[i][j];
            }
        }
        Self { sums }
    }

    /// Whether every cell in the inclusive block is set.
    fn full(&self, x0: usize, x1: usize, y0: usize, y1: usize) -> bool {
        let s = &self.sums;
        let count = s[x1 + 1][y1 + 1] + s[x0][y0] - s[x0][y1 + 1] - s[x1 + 1][y0];
        count as usize == (x1 - x0 + 1) * (y1 - y0 + 1)
    }
}

/// Canonical form of a rectangle union: maximal grid-aligned rectangles on
/// the pruned grid, sorted.
fn normalize_rects(rects: &[Rect]) -> Vec<Rect> {
    if rects.is_empty() {
        return Vec::new();
    }
    let mut grid = Grid::from_rects(rects.iter());
    let mut t = grid.table(rects);
    grid.prune(&mut t);
    let prefix = Prefix::new(&t);
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    // bounds are indices 0..=n+1 into [-inf, coords..., +inf]; a bound pair
    // (a, b) covers cells 2a..=2(b-1)
    let inside = |a: usize, b: usize, c: usize, d: usize| {
        prefix.full(2 * a, 2 * (b - 1), 2 * c, 2 * (d - 1))
    };
    let mut out = Vec::new();
    for a in 0..=nx {
        for b in a + 1..=nx + 1 {
            for c in 0..=ny {
                for d in c + 1..=ny + 1 {
                    if !inside(a, b, c, d) {
                        continue;
                    }
                    let grows = (a > 0 && inside(a - 1, b, c, d))
                        || (b <= nx && inside(a, b + 1, c, d))
                        || (c > 0 && inside(a, b, c - 1, d))
                        || (d <= ny && inside(a, b, c, d + 1));
                    if !grows {
                        out.push(Rect {
                            x: Interval {
                                lo: Grid::bound(&grid.xs, a),
                                hi: Grid::bound(&grid.xs, b),
                            },
                            y: Interval {
                                lo: Grid::bound(&grid.ys, c),
                                hi: Grid::bound(&grid.ys, d),
                            },
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|p, q| {
        (&p.x.lo, &p.x.hi, &p.y.lo, &p.y.hi).cmp(&(&q.x.lo, &q.x.hi, &q.y.lo, &q.y.hi))
    });
    out
}

fn rects_subset(a: &[Rect], b: &[Rect]) -> bool {
    if a.is_empty() {
        return true;
    }
    let grid = Grid::from_rects(a.iter().chain(b.iter()));
    let ta = grid.table(a);
    let tb = grid.table(b);
    ta.iter()
        .zip(&tb)
        .all(|(ca, cb)| ca.iter().zip(cb).all(|(&x, &y)| !x || y))
}

/// Groups items into connected components of an overlap relation, in order
/// of first appearance.
fn overlap_components<T>(items: &[T], overlaps: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if overlaps(&items[i], &items[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

impl Region for ComplexRegion {
    type Scalar = GaussianRational;
    const SPACE: Field = Field::Complex;

    fn empty() -> Self {
        ComplexRegion::default()
    }

    fn whole() -> Self {
        ComplexRegion::Rects(vec![Rect::whole()])
    }

    fn is_empty(&self) -> bool {
        match self {
            ComplexRegion::Rects(r) => r.is_empty(),
            ComplexRegion::Disks(d) => d.is_empty(),
        }
    }

    fn is_whole(&self) -> bool {
        matches!(self, ComplexRegion::Rects(r) if r.len() == 1 && r[0] == Rect::whole())
    }

    fn union(&self, other: &Self) -> Result<Self> {
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        match (self, other) {
            (ComplexRegion::Rects(a), ComplexRegion::Rects(b)) => {
                Ok(ComplexRegion::rects(a.iter().chain(b).cloned().collect()))
            }
            (ComplexRegion::Disks(a), ComplexRegion::Disks(b)) => {
                Ok(ComplexRegion::disks(a.iter().chain(b).cloned().collect()))
            }
            _ => Err(unsupported("union of a rectangle union with a disk union")),
        }
    }

    fn intersect(&self, other: &Self) -> Result<Self> {
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty());
        }
        match (self, other) {
            (ComplexRegion::Rects(a), ComplexRegion::Rects(b)) => {
                let pieces = a
                    .iter()
                    .flat_map(|p| b.iter().filter_map(move |q| p.intersect(q)))
                    .collect();
                Ok(ComplexRegion::rects(pieces))
            }
            _ => Err(unsupported("intersection of disk unions")),
        }
    }

    fn shift(&self, c: &GaussianRational) -> Self {
        match self {
            ComplexRegion::Rects(r) => ComplexRegion::Rects(r.iter().map(|x| x.shift(c)).collect()),
            ComplexRegion::Disks(d) => ComplexRegion::Disks(d.iter().map(|x| x.shift(c)).collect()),
        }
    }

    fn is_subset(&self, other: &Self) -> bool {
        if self.is_empty() {
            return true;
        }
        match (self, other) {
            (ComplexRegion::Rects(a), ComplexRegion::Rects(b)) => rects_subset(a, b),
            (ComplexRegion::Disks(a), ComplexRegion::Disks(b)) => {
                a.iter().all(|d| b.iter().any(|e| d.inside(e)))
            }
            (ComplexRegion::Disks(a), ComplexRegion::Rects(b)) => {
                let boxes: Vec<Rect> = a.iter().map(Disk::bounding_rect).collect();
                rects_subset(&boxes, b)
            }
            (ComplexRegion::Rects(a), ComplexRegion::Disks(b)) => a.iter().all(|r| {
                r.corners().is_some_and(|cs| {
                    b.iter().any(|d| {
                        let rr = &d.radius * &d.radius;
                        cs.iter()
                            .all(|z| (z.clone() - d.center.clone()).norm_sqr() <= rr)
                    })
                })
            }),
        }
    }

    fn contains(&self, z: &GaussianRational) -> bool {
        match self {
            ComplexRegion::Rects(r) => r.iter().any(|x| x.contains(z)),
            ComplexRegion::Disks(d) => d.iter().any(|x| x.contains(z)),
        }
    }

    fn components(&self) -> Vec<Self> {
        match self {
            ComplexRegion::Rects(r) => overlap_components(r, Rect::overlaps)
                .into_iter()
                .map(|g| ComplexRegion::rects(g.into_iter().map(|i| r[i].clone()).collect()))
                .collect(),
            ComplexRegion::Disks(d) => overlap_components(d, Disk::overlaps)
                .into_iter()
                .map(|g| ComplexRegion::Disks(g.into_iter().map(|i| d[i].clone()).collect()))
                .collect(),
        }
    }

    fn component_containing(&self, z: &GaussianRational) -> Option<usize> {
        match self {
            ComplexRegion::Rects(r) => {
                let hit = r.iter().position(|x| x.contains(z))?;
                overlap_components(r, Rect::overlaps)
                    .iter()
                    .position(|g| g.contains(&hit))
            }
            ComplexRegion::Disks(d) => {
                let hit = d.iter().position(|x| x.contains(z))?;
                overlap_components(d, Disk::overlaps)
                    .iter()
                    .position(|g| g.contains(&hit))
            }
        }
    }

    fn component_count(&self) -> usize {
        match self {
            ComplexRegion::Rects(r) => overlap_components(r, Rect::overlaps).len(),
            ComplexRegion::Disks(d) => overlap_components(d, Disk::overlaps).len(),
        }
    }

    fn sample_point(&self) -> Option<GaussianRational> {
        match self {
            ComplexRegion::Rects(r) => r.first().map(Rect::sample_point),
            ComplexRegion::Disks(d) => d.first().map(|x| x.center.clone()),
        }
    }

    fn meets(&self, other: &Self) -> bool {
        match (self, other) {
            (ComplexRegion::Rects(a), ComplexRegion::Rects(b)) => {
                a.iter().any(|p| b.iter().any(|q| p.overlaps(q)))
            }
            (ComplexRegion::Disks(a), ComplexRegion::Disks(b)) => {
                a.iter().any(|p| b.iter().any(|q| p.overlaps(q)))
            }
            (ComplexRegion::Disks(a), ComplexRegion::Rects(b))
            | (ComplexRegion::Rects(b), ComplexRegion::Disks(a)) => {
                a.iter().any(|d| b.iter().any(|r| d.meets_rect(r)))
            }
        }
    }
}

impl fmt::Display for ComplexRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        match self {
            ComplexRegion::Rects(r) => {
                for (k, x) in r.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ∪ ")?;
                    }
                    write!(f, "{}×{}", x.x, x.y)?;
                }
            }
            ComplexRegion::Disks(d) => {
                for (k, x) in d.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ∪ ")?;
                    }
                    write!(f, "D({}, {})", x.center, rational_to_string(&x.radius))?;
                }
            }
        }
        Ok(())
    }
}
