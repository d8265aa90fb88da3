//! Exact set algebra for open subsets of ℝ and ℂ, the topology of the
//! representation space Ω, W-tuples, the base of disk-union opens, and
//! compact tuples.

mod complex;
mod omega;
mod real;
mod tuple;

use std::fmt;

pub use complex::{ComplexRegion, Disk, Rect};
pub use omega::{base_open, in_base, OmegaOpen, SetOp, Tail};
pub use real::{ClosedInterval, Ext, Interval, RealCompactSet, RealOpenSet};
pub use tuple::{build_w_tuple, cover_compacts, exhaust, CompactTuple, DomainTuple};

use crate::error::Result;
use crate::uea::{Field, Scalar};

/// An open subset of the scalar line or plane with exact operations.
pub trait Region:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Scalar: Scalar;
    const SPACE: Field;

    fn empty() -> Self;
    fn whole() -> Self;
    fn is_empty(&self) -> bool;
    fn is_whole(&self) -> bool;
    fn union(&self, other: &Self) -> Result<Self>;
    fn intersect(&self, other: &Self) -> Result<Self>;
    /// Translate by `c`.
    fn shift(&self, c: &Self::Scalar) -> Self;
    fn is_subset(&self, other: &Self) -> bool;
    fn contains(&self, x: &Self::Scalar) -> bool;
    /// Connected components in canonical order.
    fn components(&self) -> Vec<Self>;

    fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Some point of the set, `None` when empty.
    fn sample_point(&self) -> Option<Self::Scalar>;

    fn component_containing(&self, x: &Self::Scalar) -> Option<usize> {
        self.components().iter().position(|c| c.contains(x))
    }

    /// Index of the component containing the connected set `part`.
    ///
    /// A connected subset meets exactly one component, so one sample point
    /// decides.
    fn component_of(&self, part: &Self) -> Option<usize> {
        self.component_containing(&part.sample_point()?)
    }

    /// Whether the two sets intersect.
    fn meets(&self, other: &Self) -> bool;
}
