use std::fmt;

use serde::{Serialize, Serializer};

use super::{ops, rows_json, PresentedGroup};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A homomorphism of presented groups. Row `i` of `matrix` is the image of
/// source generator `i`, written in target generators.
#[derive(Clone)]
pub struct GroupMorphism {
    source: PresentedGroup,
    target: PresentedGroup,
    matrix: IntMatrix,
}

impl GroupMorphism {
    /// Checked constructor: shape and well-definedness.
    pub fn new(source: PresentedGroup, target: PresentedGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (source.generators(), target.generators()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        let f = GroupMorphism { source, target, matrix };
        if !f.is_well_defined() {
            return Err(Error::IllDefined(format!(
                "{} → {} by {}",
                f.source.label(),
                f.target.label(),
                f.matrix
            )));
        }
        Ok(f)
    }

    /// Shape-checked only. Callers guarantee well-definedness.
    pub(crate) fn from_parts(source: PresentedGroup, target: PresentedGroup, matrix: IntMatrix) -> Self {
        assert_eq!(matrix.shape(), (source.generators(), target.generators()), "morphism shape");
        GroupMorphism { source, target, matrix }
    }

    /// Shape-checked, without the well-definedness test.
    pub fn new_unchecked(source: PresentedGroup, target: PresentedGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (source.generators(), target.generators()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.generators(),
                target.generators()
            )));
        }
        Ok(GroupMorphism { source, target, matrix })
    }

    pub fn identity(x: &PresentedGroup) -> Self {
        Self::from_parts(x.clone(), x.clone(), IntMatrix::identity(x.generators()))
    }

    pub fn zero(x: &PresentedGroup, y: &PresentedGroup) -> Self {
        Self::from_parts(x.clone(), y.clone(), IntMatrix::zeros(x.generators(), y.generators()))
    }

    /// Multiplication by `c` on `x`.
    pub fn scalar(x: &PresentedGroup, c: i64) -> Self {
        Self::from_parts(x.clone(), x.clone(), IntMatrix::scalar(x.generators(), c))
    }

    pub fn source(&self) -> &PresentedGroup {
        &self.source
    }

    pub fn target(&self) -> &PresentedGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Every source relator maps into the target relation lattice.
    pub fn is_well_defined(&self) -> bool {
        let images = self.source.relations().mul(&self.matrix);
        self.target.relation_lattice().contains_rows(&images)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupMorphism) -> GroupMorphism {
        self.try_then(next).expect("composable morphisms")
    }

    pub fn try_then(&self, next: &GroupMorphism) -> Result<GroupMorphism> {
        if self.target.generators() != next.source.generators() {
            return Err(Error::IllTyped(format!(
                "cannot compose {} → {} with {} → {}",
                self.source.label(),
                self.target.label(),
                next.source.label(),
                next.target.label()
            )));
        }
        Ok(Self::from_parts(self.source.clone(), next.target.clone(), self.matrix.mul(&next.matrix)))
    }

    /// Equality of induced maps: the difference sends every generator to zero.
    pub fn equals(&self, other: &GroupMorphism) -> bool {
        self.matrix.shape() == other.matrix.shape()
            && self.target.relation_lattice().contains_rows(&self.matrix.sub(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.target.relation_lattice().contains_rows(&self.matrix)
    }

    pub fn add(&self, other: &GroupMorphism) -> GroupMorphism {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &GroupMorphism) -> GroupMorphism {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn neg(&self) -> GroupMorphism {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    /// Same map with the source/target presentations swapped for other ones
    /// with the same generator counts (e.g. after a relabelling).
    pub fn retyped(&self, source: &PresentedGroup, target: &PresentedGroup) -> Result<GroupMorphism> {
        GroupMorphism::new(source.clone(), target.clone(), self.matrix.clone())
    }

    pub fn is_mono(&self) -> bool {
        ops::kernel(self).0.is_trivial()
    }

    pub fn is_epi(&self) -> bool {
        ops::cokernel(self).0.is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Two-sided inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GroupMorphism> {
        if !self.is_mono() {
            return None;
        }
        let inv = ops::descend_along_epi(self, &GroupMorphism::identity(&self.source))?;
        debug_assert!(self.then(&inv).equals(&GroupMorphism::identity(&self.source)));
        Some(inv)
    }

    /// `t` factored as `self ∘ s` for a mono `self`; `None` if `t` does not
    /// land in the image.
    pub fn lift_through(&self, t: &GroupMorphism) -> Option<GroupMorphism> {
        ops::factor_through_mono(self, t)
    }

    /// `t` factored as `s ∘ self` for an epi `self`; `None` if `t` does not
    /// kill the kernel.
    pub fn descend(&self, t: &GroupMorphism) -> Option<GroupMorphism> {
        ops::descend_along_epi(self, t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": rows_json(&self.matrix),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("morphism needs \"{k}\"")));
        let source = PresentedGroup::from_json(field("source")?)?;
        let target = PresentedGroup::from_json(field("target")?)?;
        let matrix = IntMatrix::from_json(field("matrix")?, Some(target.generators())).map_err(Error::Parse)?;
        let matrix = if matrix.rows() == 0 { IntMatrix::zeros(source.generators(), target.generators()) } else { matrix };
        GroupMorphism::new(source, target, matrix)
    }
}

impl fmt::Debug for GroupMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{}--> {}", self.source.label(), self.matrix, self.target.label())
    }
}

impl Serialize for GroupMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
