//! Finitely generated abelian groups given by generators and relators, and the
//! homomorphisms between them.
//!
//! Elements are integer row vectors over the generators; a group is
//! `ℤ^g / L` where `L` is spanned by the relator rows. A morphism `X → Y` is a
//! `g_X × g_Y` matrix whose row `i` is the image of generator `i`.

mod morphism;
mod ops;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RowLattice};

pub use morphism::GroupMorphism;
pub use ops::{
    biproduct, cokernel, copair, descend_along_epi, direct_sum, factor_through_mono, factorize, factorize_on_source, kernel,
    pair, pullback, pushout, sum_map, Biproduct, Factorization, Pullback, Pushout,
};

#[derive(Debug)]
struct Inner {
    generators: usize,
    relations: IntMatrix,
    lattice: RowLattice,
    invariants: Vec<BigInt>,
}

/// A finitely presented abelian group. Cheap to clone.
///
/// Objects are never compared for equality; isomorphism is decided by
/// [`PresentedGroup::invariants`] and explicit maps.
#[derive(Clone)]
pub struct PresentedGroup(Arc<Inner>);

/// A presentation in Smith form together with the comparison isomorphisms.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub group: PresentedGroup,
    /// original → reduced
    pub to: GroupMorphism,
    /// reduced → original
    pub from: GroupMorphism,
}

impl PresentedGroup {
    /// `relations` must have one column per generator; its rows are relators.
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} columns for {} generators",
                relations.cols(),
                generators
            )));
        }
        let lattice = RowLattice::new(relations.clone());
        let rank = lattice.rank();
        let mut invariants: Vec<BigInt> =
            lattice.smith().diagonal().into_iter().take(rank).filter(|d| !d.is_one()).collect();
        invariants.extend(std::iter::repeat_n(BigInt::zero(), generators - rank));
        Ok(PresentedGroup(Arc::new(Inner { generators, relations, lattice, invariants })))
    }

    pub fn zero() -> Self {
        Self::new(0, IntMatrix::zeros(0, 0)).expect("zero group")
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(0, rank)).expect("free group")
    }

    /// `ℤ/n`, with `n = 0` giving `ℤ`.
    pub fn cyclic(n: u64) -> Self {
        Self::from_factors(&[n])
    }

    /// Diagonal presentation `⊕ ℤ/n_i` (0 meaning `ℤ`).
    pub fn from_factors(factors: &[u64]) -> Self {
        let big: Vec<BigInt> = factors.iter().map(|&n| BigInt::from(n)).collect();
        Self::from_big_factors(&big)
    }

    pub fn from_big_factors(factors: &[BigInt]) -> Self {
        let g = factors.len();
        let rows: Vec<Vec<BigInt>> = factors
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| {
                let mut r = vec![BigInt::zero(); g];
                r[i] = n.abs();
                r
            })
            .collect();
        let rel = IntMatrix::from_big_rows(rows, g).expect("diagonal relations");
        Self::new(g, rel).expect("diagonal presentation")
    }

    pub fn generators(&self) -> usize {
        self.0.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// The relation lattice `L ⊆ ℤ^g`.
    pub fn relation_lattice(&self) -> &RowLattice {
        &self.0.lattice
    }

    /// Invariant factors other than 1, torsion first, with `0` for each free
    /// summand. A complete isomorphism invariant.
    pub fn invariants(&self) -> &[BigInt] {
        &self.0.invariants
    }

    /// Invariant factors as `u64`, if they fit.
    pub fn invariants_u64(&self) -> Option<Vec<u64>> {
        self.0.invariants.iter().map(|d| d.to_u64()).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.0.invariants.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.invariants.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.0.invariants.iter().all(Zero::is_zero)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        Some(self.0.invariants.iter().product())
    }

    /// Least common multiple of element orders; `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        Some(self.0.invariants.iter().fold(BigInt::one(), |a, d| a.lcm(d)))
    }

    pub fn is_isomorphic(&self, other: &PresentedGroup) -> bool {
        self.invariants() == other.invariants()
    }

    /// Same generator count and identical relator matrix.
    pub fn same_presentation(&self, other: &PresentedGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.generators() == other.generators() && self.relations() == other.relations())
    }

    /// `n · G = 0`.
    pub fn is_killed_by(&self, n: &BigInt) -> bool {
        !n.is_zero() && self.0.invariants.iter().all(|d| !d.is_zero() && (n % d).is_zero())
    }

    /// Whether `v` (a row vector over the generators) is zero in the group.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.0.lattice.contains(v)
    }

    /// Does the group contain an element of exact order `n`?
    ///
    /// `ℤ/d` has one iff `n | d`; in a direct sum an element of order `n`
    /// exists iff every prime-power part of `n` divides some invariant factor.
    /// Free summands only contribute elements of infinite order.
    pub fn has_element_of_order(&self, n: u64) -> Result<bool> {
        if n == 0 {
            return Err(Error::InvalidArgument("element order must be at least 1".into()));
        }
        let torsion: Vec<&BigInt> = self.0.invariants.iter().filter(|d| !d.is_zero()).collect();
        Ok(prime_power_parts(n)
            .into_iter()
            .all(|q| torsion.iter().any(|d| (*d % q).is_zero())))
    }

    /// Smith-form presentation with one generator per non-unit invariant
    /// factor, plus the comparison isomorphisms.
    pub fn reduce(&self) -> Reduction {
        let snf = self.0.lattice.smith();
        let rank = self.0.lattice.rank();
        let g = self.generators();
        let diag = snf.diagonal();
        let kept: Vec<usize> = (0..g).filter(|&i| i >= rank || !diag[i].is_one()).collect();
        let factors: Vec<BigInt> =
            kept.iter().map(|&i| if i < rank { diag[i].clone() } else { BigInt::zero() }).collect();
        let group = PresentedGroup::from_big_factors(&factors);
        let to = snf.v.select_cols(kept.iter().copied());
        let from = snf.v_inv.select_rows(kept.iter().copied());
        Reduction {
            to: GroupMorphism::from_parts(self.clone(), group.clone(), to),
            from: GroupMorphism::from_parts(group.clone(), self.clone(), from),
            group,
        }
    }

    /// Already a diagonal presentation with no unit relators?
    pub fn is_reduced(&self) -> bool {
        let r = self.relations();
        let g = self.generators();
        let mut seen = vec![false; g];
        for row in r.row_iter() {
            let nz: Vec<usize> = (0..g).filter(|&j| !row[j].is_zero()).collect();
            if nz.len() != 1 || seen[nz[0]] || row[nz[0]] <= BigInt::one() {
                return false;
            }
            seen[nz[0]] = true;
        }
        true
    }

    /// Human-readable isomorphism type, e.g. `Z/2 ⊕ Z`.
    pub fn label(&self) -> String {
        label_of(self.invariants())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "generators": self.generators(),
            "relations": rows_json(self.relations()),
        })
    }

    /// Parses `{"generators": g, "relations": [[...]]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let g = v
            .get("generators")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("group needs an integer \"generators\" field".into()))?
            as usize;
        let rel = match v.get("relations") {
            None | Some(serde_json::Value::Null) => IntMatrix::zeros(0, g),
            Some(r) => IntMatrix::from_json(r, Some(g)).map_err(Error::Parse)?,
        };
        // `[[], []]` on zero generators parses with zero columns already.
        Self::new(g, rel)
    }

    /// Parses JSON or the shorthand `Z/4 + Z + Z/2^3`.
    pub fn parse(s: &str) -> Result<Self> {
        parse::parse_group(s)
    }
}

pub(crate) fn label_of(inv: &[BigInt]) -> String {
    if inv.is_empty() {
        return "0".into();
    }
    inv.iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

/// JSON array of rows, always an array even when some dimension is zero.
pub(crate) fn rows_json(m: &IntMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.row_iter()
            .map(|r| {
                serde_json::Value::Array(
                    r.iter().map(|x| serde_json::Value::Number(crate::linalg::big_to_json(x))).collect(),
                )
            })
            .collect(),
    )
}

fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

impl fmt::Debug for PresentedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | {}⟩ ≅ {}", self.generators(), self.relations(), self.label())
    }
}

impl fmt::Display for PresentedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for PresentedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
