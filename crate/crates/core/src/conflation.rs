//! Conflations, conflation structures and the bicartesian criterion.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    copair, cokernel, descend_along_epi, direct_sum, factor_through_mono, kernel, pair, pullback, GroupMorphism,
    PresentedGroup,
};
use crate::subcat::Subcategory;

/// The ambient abelian category: all finitely generated groups, or those
/// killed by `n` (modules over `ℤ/n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ambient {
    AllGroups,
    KilledBy(u64),
}

impl Ambient {
    pub fn contains(&self, g: &PresentedGroup) -> bool {
        match self {
            Ambient::AllGroups => true,
            Ambient::KilledBy(n) => g.is_killed_by(&BigInt::from(*n)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Ambient::AllGroups => "fgab".into(),
            Ambient::KilledBy(n) => format!("killed-by:{n}"),
        }
    }
}

/// A composable pair `X ↣ Y ↠ Z`. Construction only checks typing; whether
/// it is a kernel–cokernel pair is a separate question.
#[derive(Clone)]
pub struct Conflation {
    pub inflation: GroupMorphism,
    pub deflation: GroupMorphism,
}

impl Conflation {
    pub fn new(inflation: GroupMorphism, deflation: GroupMorphism) -> Result<Self> {
        if inflation.target().generators() != deflation.source().generators() {
            return Err(Error::IllTyped(format!(
                "inflation lands in {} but deflation starts at {}",
                inflation.target().label(),
                deflation.source().label()
            )));
        }
        Ok(Conflation { inflation, deflation })
    }

    /// `ker p ↣ Y ↠ Z`.
    pub fn of_deflation(p: &GroupMorphism) -> Self {
        let (_, i) = kernel(p);
        Conflation { inflation: i, deflation: p.clone() }
    }

    /// `X ↣ Y ↠ coker i`.
    pub fn of_inflation(i: &GroupMorphism) -> Self {
        let (_, p) = cokernel(i);
        Conflation { inflation: i.clone(), deflation: p }
    }

    /// `X ↣ X ⊕ Z ↠ Z`.
    pub fn split(x: &PresentedGroup, z: &PresentedGroup) -> Self {
        let b = crate::group::biproduct(&[x.clone(), z.clone()]);
        Conflation { inflation: b.inj[0].clone(), deflation: b.proj[1].clone() }
    }

    pub fn left(&self) -> &PresentedGroup {
        self.inflation.source()
    }

    pub fn middle(&self) -> &PresentedGroup {
        self.deflation.source()
    }

    pub fn right(&self) -> &PresentedGroup {
        self.deflation.target()
    }

    pub fn terms(&self) -> [&PresentedGroup; 3] {
        [self.left(), self.middle(), self.right()]
    }

    /// Exactness of `0 → X → Y → Z → 0`.
    pub fn is_kernel_cokernel_pair(&self) -> bool {
        if !self.inflation.then(&self.deflation).is_zero() || !self.inflation.is_mono() || !self.deflation.is_epi() {
            return false;
        }
        let (_, k) = kernel(&self.deflation);
        factor_through_mono(&self.inflation, &k).is_some()
    }

    /// For finitely generated abelian groups a short exact sequence splits
    /// iff the middle term is isomorphic to the sum of the outer ones.
    pub fn is_split(&self) -> bool {
        self.is_kernel_cokernel_pair() && self.middle().is_isomorphic(&direct_sum(self.left(), self.right()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "inflation": self.inflation.to_json(),
            "deflation": self.deflation.to_json(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("conflation needs \"{k}\"")));
        Conflation::new(GroupMorphism::from_json(get("inflation")?)?, GroupMorphism::from_json(get("deflation")?)?)
    }
}

impl fmt::Debug for Conflation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ↣ {} ↠ {}", self.left().label(), self.middle().label(), self.right().label())
    }
}

impl Serialize for Conflation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Clone, Debug)]
pub enum StructureKind {
    /// Every short exact sequence of the ambient category.
    Abelian,
    /// Short exact sequences with all three terms in the subcategory.
    Induced(Subcategory),
    /// Negative control: short exact sequences that do not split.
    NoSplit,
}

#[derive(Clone, Debug)]
pub struct ConflationStructure {
    pub name: String,
    pub ambient: Ambient,
    pub kind: StructureKind,
}

impl ConflationStructure {
    pub fn abelian() -> Self {
        ConflationStructure { name: "fgab".into(), ambient: Ambient::AllGroups, kind: StructureKind::Abelian }
    }

    pub fn killed_by(n: u64) -> Self {
        let ambient = Ambient::KilledBy(n);
        ConflationStructure { name: ambient.name(), ambient, kind: StructureKind::Abelian }
    }

    /// The abelian structure on an ambient category.
    pub fn of_ambient(a: Ambient) -> Self {
        match a {
            Ambient::AllGroups => Self::abelian(),
            Ambient::KilledBy(n) => Self::killed_by(n),
        }
    }

    pub fn induced(sub: &Subcategory) -> Self {
        ConflationStructure { name: sub.name().into(), ambient: sub.ambient(), kind: StructureKind::Induced(sub.clone()) }
    }

    pub fn broken_demo() -> Self {
        ConflationStructure { name: "broken-demo".into(), ambient: Ambient::AllGroups, kind: StructureKind::NoSplit }
    }

    /// `fgab`, `killed-by:N`, `broken-demo`, or any subcategory name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "fgab" => Ok(Self::abelian()),
            "broken-demo" => Ok(Self::broken_demo()),
            n => {
                if let Some(k) = n.strip_prefix("killed-by:") {
                    let k: u64 = k.parse().map_err(|_| Error::UnknownName(n.into()))?;
                    if k < 1 {
                        return Err(Error::InvalidArgument("killed-by needs n ≥ 1".into()));
                    }
                    return Ok(Self::killed_by(k));
                }
                Subcategory::from_name(n).map(|s| Self::induced(&s))
            }
        }
    }

    pub fn subcategory(&self) -> Option<&Subcategory> {
        match &self.kind {
            StructureKind::Induced(s) => Some(s),
            _ => None,
        }
    }

    /// Objects of the category carrying this structure.
    pub fn contains_object(&self, g: &PresentedGroup) -> bool {
        self.ambient.contains(g)
            && match &self.kind {
                StructureKind::Induced(s) => s.member(g),
                _ => true,
            }
    }

    pub fn admits(&self, c: &Conflation) -> bool {
        c.terms().iter().all(|t| self.contains_object(t))
            && c.is_kernel_cokernel_pair()
            && match &self.kind {
                StructureKind::NoSplit => !c.is_split(),
                _ => true,
            }
    }

    pub fn is_deflation(&self, p: &GroupMorphism) -> bool {
        p.is_epi()
            && self.contains_object(p.source())
            && self.contains_object(p.target())
            && self.admits(&Conflation::of_deflation(p))
    }

    pub fn is_inflation(&self, i: &GroupMorphism) -> bool {
        i.is_mono() && self.admits(&Conflation::of_inflation(i))
    }
}

/// Is `c` a conflation of `s`?
pub fn verify_conflation(s: &ConflationStructure, c: &Conflation) -> bool {
    s.admits(c)
}

/// The square
///
/// ```text
/// Y' --p'--> Z'
/// |f         |g
/// Y  --p-->  Z
/// ```
#[derive(Clone, Debug)]
pub struct DeflationSquare {
    pub f: GroupMorphism,
    pub g: GroupMorphism,
    pub p_prime: GroupMorphism,
    pub p: GroupMorphism,
}

impl DeflationSquare {
    pub fn commutes(&self) -> bool {
        self.f.matrix().cols() == self.p.matrix().rows()
            && self.p_prime.matrix().cols() == self.g.matrix().rows()
            && self.f.then(&self.p).equals(&self.p_prime.then(&self.g))
    }

    /// The comparison map `Y' → Y ×_Z Z'` is an isomorphism.
    pub fn is_pullback(&self) -> bool {
        let pb = pullback(&self.p, &self.g);
        let incl = pair(&pb.left, &pb.right);
        let u = pair(&self.f, &self.p_prime);
        factor_through_mono(&incl, &u).is_some_and(|c| c.is_iso())
    }

    /// The square built from a pullback of `p` along `g`.
    pub fn from_pullback(p: &GroupMorphism, g: &GroupMorphism) -> Self {
        let pb = pullback(p, g);
        DeflationSquare { f: pb.left, g: g.clone(), p_prime: pb.right, p: p.clone() }
    }
}

/// `Y' ↣ Y ⊕ Z' ↠ Z` with inflation `(f, −p')` and deflation `(p, g)`.
pub fn bicartesian_conflation(s: &ConflationStructure, sq: &DeflationSquare) -> Result<Conflation> {
    if !sq.commutes() {
        return Err(Error::NonCommuting);
    }
    if !s.is_deflation(&sq.p) || !s.is_deflation(&sq.p_prime) {
        return Err(Error::Precondition("horizontal arrows must be deflations".into()));
    }
    if !sq.is_pullback() {
        return Err(Error::NotPullback);
    }
    let c = Conflation::new(pair(&sq.f, &sq.p_prime.neg()), copair(&sq.p, &sq.g))?;
    if !s.admits(&c) {
        return Err(Error::Precondition("induced sequence is not a conflation".into()));
    }
    Ok(c)
}

/// A cone `t: Y ⊕ Z' → T` with `(f, −p') ; t = 0` factors through `(p, g)`.
pub fn pushout_property_holds(c: &Conflation, t: &GroupMorphism) -> bool {
    if !c.inflation.then(t).is_zero() {
        return false;
    }
    c.deflation.is_epi() && descend_along_epi(&c.deflation, t).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn g(s: &str) -> PresentedGroup {
        PresentedGroup::parse(s).unwrap()
    }

    fn m(a: &PresentedGroup, b: &PresentedGroup, rows: &[&[i64]]) -> GroupMorphism {
        GroupMorphism::new(a.clone(), b.clone(), IntMatrix::from_rows_with_cols(rows, b.generators())).unwrap()
    }

    #[test]
    fn verify_examples() {
        let s = ConflationStructure::abelian();
        let (z, z2, z4) = (g("Z"), g("Z/2"), g("Z/4"));
        let c = Conflation::new(m(&z, &z, &[&[3]]), m(&z, &g("Z/3"), &[&[1]])).unwrap();
        assert!(verify_conflation(&s, &c));
        let c = Conflation::new(m(&z2, &z4, &[&[2]]), m(&z4, &z2, &[&[1]])).unwrap();
        assert!(verify_conflation(&s, &c));
        assert!(!c.is_split());
        let c = Conflation::new(m(&z, &z, &[&[3]]), m(&z, &z, &[&[0]])).unwrap();
        assert!(!verify_conflation(&s, &c));
        assert!(Conflation::new(m(&z, &z, &[&[1]]), GroupMorphism::identity(&g("Z^2"))).is_err());
    }

    #[test]
    fn induced_structure_needs_member_terms() {
        let s = ConflationStructure::from_name("isbell:2").unwrap();
        let (z2, z4) = (g("Z/2"), g("Z/4"));
        let c = Conflation::new(m(&z2, &z4, &[&[2]]), m(&z4, &z2, &[&[1]])).unwrap();
        assert!(!s.admits(&c));
        assert!(s.admits(&Conflation::split(&z2, &g("Z"))));
    }

    #[test]
    fn broken_demo_rejects_split() {
        let s = ConflationStructure::broken_demo();
        let x = g("Z/3");
        let to_zero = GroupMorphism::zero(&x, &PresentedGroup::zero());
        assert!(!s.is_deflation(&to_zero));
        assert!(ConflationStructure::abelian().is_deflation(&to_zero));
    }

    #[test]
    fn bicartesian_examples() {
        let s = ConflationStructure::abelian();
        let (z, z4) = (g("Z"), g("Z/4"));
        let q = m(&z, &z4, &[&[1]]);
        let sq = DeflationSquare::from_pullback(&q, &GroupMorphism::identity(&z4));
        let c = bicartesian_conflation(&s, &sq).unwrap();
        assert!(c.middle().is_isomorphic(&g("Z + Z/4")));
        let sq = DeflationSquare::from_pullback(&q, &q);
        let c = bicartesian_conflation(&s, &sq).unwrap();
        assert!(c.left().is_isomorphic(&g("Z^2")));
        let (_, coker) = cokernel(&c.inflation);
        assert!(pushout_property_holds(&c, &coker));

        // Commuting but not a pullback: Z --0--> 0 over q.
        let zero = PresentedGroup::zero();
        let bad = DeflationSquare {
            f: GroupMorphism::scalar(&z, 8),
            g: GroupMorphism::zero(&zero, &z4),
            p_prime: GroupMorphism::zero(&z, &zero),
            p: q.clone(),
        };
        assert!(bad.commutes());
        assert_eq!(bicartesian_conflation(&s, &bad).unwrap_err(), Error::NotPullback);
        let noncomm = DeflationSquare { f: GroupMorphism::identity(&z), ..bad };
        assert_eq!(bicartesian_conflation(&s, &noncomm).unwrap_err(), Error::NonCommuting);
    }
}
