//! Subcategories of finitely generated abelian groups given by a membership
//! test, a cover, and declared closure properties.

mod completion;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::conflation::Ambient;
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupMorphism, PresentedGroup};
use crate::linalg::IntMatrix;

pub use completion::{rwic_member, Retraction, RwicVerdict};
pub use witness::{
    c2prime_witness, is_a_conflation, is_deflation_closed, summand_correction, AConflationWitness,
    C2PrimeWitness, ClosureReport, PullbackTest, SummandCorrection, Verdict,
};

#[derive(Clone, Debug)]
pub enum SubcatKind {
    /// Groups with no element of order `p²`.
    Isbell { p: u64 },
    /// Free abelian groups.
    Free,
    /// Finite direct sums of the given groups, inside groups killed by `exponent`.
    AddClosure { exponent: u64, generators: Vec<PresentedGroup> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    SubobjectClosed,
    DeflationClosed,
    ExtensionClosed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    ProvedByCharacterization,
    Sampled,
}

#[derive(Clone)]
pub struct Subcategory {
    name: String,
    kind: SubcatKind,
}

impl Subcategory {
    pub fn isbell(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(Subcategory { name: format!("isbell:{p}"), kind: SubcatKind::Isbell { p } })
    }

    pub fn free() -> Self {
        Subcategory { name: "free".into(), kind: SubcatKind::Free }
    }

    /// `add(ℤ/n)` inside groups killed by `n`.
    pub fn add_ring(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("add-ring needs n ≥ 2".into()));
        }
        Ok(Subcategory {
            name: format!("add-ring:{n}"),
            kind: SubcatKind::AddClosure { exponent: n, generators: vec![PresentedGroup::cyclic(n)] },
        })
    }

    /// Additive closure of finite groups, inside groups killed by the lcm of
    /// their exponents.
    pub fn add_closure(generators: Vec<PresentedGroup>) -> Result<Self> {
        let mut exp = BigInt::one();
        for g in &generators {
            let e = g.exponent().ok_or_else(|| Error::InvalidArgument(format!("{} is infinite", g.label())))?;
            exp = exp.lcm(&e);
        }
        let exponent = exp.to_u64().filter(|&e| e >= 2).ok_or_else(|| Error::InvalidArgument("bad exponent".into()))?;
        let name = format!("add:{}", generators.iter().map(|g| g.label().replace(' ', "")).collect::<Vec<_>>().join("|"));
        Ok(Subcategory { name, kind: SubcatKind::AddClosure { exponent, generators } })
    }

    /// Registry: `isbell:p`, `free`, `add-ring:N`, `add:<group>|<group>…`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "free" {
            return Ok(Self::free());
        }
        if let Some(p) = name.strip_prefix("isbell:") {
            let p = p.parse().map_err(|_| Error::UnknownName(name.into()))?;
            return Self::isbell(p);
        }
        if let Some(n) = name.strip_prefix("add-ring:") {
            let n = n.parse().map_err(|_| Error::UnknownName(name.into()))?;
            return Self::add_ring(n);
        }
        if let Some(gens) = name.strip_prefix("add:") {
            let gens = gens.split('|').map(PresentedGroup::parse).collect::<Result<Vec<_>>>()?;
            return Self::add_closure(gens);
        }
        Err(Error::UnknownName(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &SubcatKind {
        &self.kind
    }

    pub fn ambient(&self) -> Ambient {
        match &self.kind {
            SubcatKind::AddClosure { exponent, .. } => Ambient::KilledBy(*exponent),
            _ => Ambient::AllGroups,
        }
    }

    /// Isomorphism-invariant membership test.
    pub fn member(&self, g: &PresentedGroup) -> bool {
        match &self.kind {
            SubcatKind::Isbell { p } => {
                let p2 = BigInt::from(*p) * BigInt::from(*p);
                g.invariants().iter().all(|d| d.is_zero() || !(d % &p2).is_zero())
            }
            SubcatKind::Free => g.is_free(),
            SubcatKind::AddClosure { generators, .. } => {
                let Some(target) = elementary_divisors(g) else { return false };
                let gens: Vec<_> = generators.iter().filter_map(elementary_divisors).collect();
                decomposes(&target, &gens)
            }
        }
    }

    pub fn closures(&self) -> Vec<(Closure, Justification)> {
        use Closure::*;
        use Justification::*;
        match &self.kind {
            SubcatKind::Isbell { .. } => {
                vec![(SubobjectClosed, ProvedByCharacterization), (DeflationClosed, ProvedByCharacterization)]
            }
            SubcatKind::Free => vec![
                (SubobjectClosed, ProvedByCharacterization),
                (DeflationClosed, ProvedByCharacterization),
                (ExtensionClosed, ProvedByCharacterization),
            ],
            SubcatKind::AddClosure { .. } => vec![(DeflationClosed, Sampled)],
        }
    }

    pub fn declares(&self, c: Closure, j: Justification) -> bool {
        self.closures().contains(&(c, j))
    }

    /// Deflation-closed, either proved or declared on sampling evidence.
    pub fn is_declared_deflation_closed(&self) -> bool {
        self.closures().iter().any(|(c, _)| matches!(c, Closure::DeflationClosed | Closure::SubobjectClosed))
    }

    /// A registered bound on `resdim` over the whole ambient category.
    pub fn uniform_bound(&self) -> Option<usize> {
        match &self.kind {
            SubcatKind::Isbell { .. } | SubcatKind::Free => Some(1),
            SubcatKind::AddClosure { .. } => None,
        }
    }

    /// Exact resolution dimension from a characterization, where one is known.
    pub fn characterized_resdim(&self, g: &PresentedGroup) -> Option<usize> {
        match &self.kind {
            SubcatKind::Isbell { .. } | SubcatKind::Free => Some(if self.member(g) { 0 } else { 1 }),
            SubcatKind::AddClosure { .. } => None,
        }
    }

    /// Indecomposable members used to build candidate objects.
    pub fn building_blocks(&self) -> Vec<PresentedGroup> {
        match &self.kind {
            SubcatKind::Isbell { p } => vec![PresentedGroup::free(1), PresentedGroup::cyclic(*p)],
            SubcatKind::Free => vec![PresentedGroup::free(1)],
            SubcatKind::AddClosure { generators, .. } => generators.clone(),
        }
    }

    /// The canonical deflation `A ↠ E` with `A` a member: the free group (or
    /// `(ℤ/N)^g` for an additive closure containing `ℤ/N`) on `E`'s
    /// generators.
    pub fn cover(&self, e: &PresentedGroup) -> Result<GroupMorphism> {
        let g = e.generators();
        let source = match &self.kind {
            SubcatKind::Isbell { .. } | SubcatKind::Free => PresentedGroup::free(g),
            SubcatKind::AddClosure { exponent, .. } => {
                let ring = PresentedGroup::cyclic(*exponent);
                if !self.ambient().contains(e) || !self.member(&ring) {
                    return Err(Error::NoCover { sub: self.name.clone(), object: e.label() });
                }
                PresentedGroup::from_factors(&vec![*exponent; g])
            }
        };
        GroupMorphism::new(source, e.clone(), IntMatrix::identity(g))
    }

    /// `cover` unless `E` is already a member, in which case the identity.
    pub fn cover_or_identity(&self, e: &PresentedGroup) -> Result<GroupMorphism> {
        if self.member(e) {
            Ok(GroupMorphism::identity(e))
        } else {
            self.cover(e)
        }
    }
}

impl fmt::Debug for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Subcategory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

/// Prime-power cyclic summands with multiplicity; `None` for infinite groups.
fn elementary_divisors(g: &PresentedGroup) -> Option<BTreeMap<BigInt, usize>> {
    let mut out = BTreeMap::new();
    for d in g.invariants() {
        if d.is_zero() {
            return None;
        }
        let mut n = d.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            if (&n % &p).is_zero() {
                let mut q = BigInt::one();
                while (&n % &p).is_zero() {
                    n /= &p;
                    q *= &p;
                }
                *out.entry(q).or_insert(0) += 1;
            }
            p += 1;
        }
        if !n.is_one() {
            *out.entry(n).or_insert(0) += 1;
        }
    }
    Some(out)
}

/// Is `target` a non-negative integer combination of `parts`?
fn decomposes(target: &BTreeMap<BigInt, usize>, parts: &[BTreeMap<BigInt, usize>]) -> bool {
    if target.values().all(|&c| c == 0) {
        return true;
    }
    let Some((first, rest)) = parts.split_first() else { return false };
    if first.is_empty() {
        return decomposes(target, rest);
    }
    let mut t = target.clone();
    loop {
        if decomposes(&t, rest) {
            return true;
        }
        for (k, c) in first {
            match t.get_mut(k) {
                Some(have) if *have >= *c => *have -= c,
                _ => return false,
            }
        }
    }
}
