//! Membership in the relative weak idempotent completion: kernels of
//! retractions between members.

use serde::Serialize;

use super::Subcategory;
use crate::group::{biproduct, kernel, GroupMorphism, PresentedGroup};

/// `r: A → B` a retraction with section `s`, `A, B` members, and
/// `k: X → A` identifying `X` with `ker r`.
#[derive(Clone, Debug, Serialize)]
pub struct Retraction {
    pub a: PresentedGroup,
    pub b: PresentedGroup,
    pub r: GroupMorphism,
    pub s: GroupMorphism,
    pub k: GroupMorphism,
}

impl Retraction {
    pub fn replays(&self, sub: &Subcategory, x: &PresentedGroup) -> bool {
        let (ker, _) = kernel(&self.r);
        sub.member(&self.a)
            && sub.member(&self.b)
            && self.s.then(&self.r).equals(&GroupMorphism::identity(&self.b))
            && self.k.then(&self.r).is_zero()
            && self.k.is_mono()
            && ker.is_isomorphic(x)
            && self.k.source().is_isomorphic(x)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RwicVerdict {
    MemberOfA,
    InCompletion { witness: Box<Retraction> },
    /// No complement found among sums of at most `searched` building blocks.
    Unknown { searched: usize },
}

/// Searches complements `B` among direct sums of at most `bound` building
/// blocks with `X ⊕ B` and `B` members.
pub fn rwic_member(sub: &Subcategory, x: &PresentedGroup, bound: usize) -> RwicVerdict {
    if sub.member(x) {
        return RwicVerdict::MemberOfA;
    }
    let blocks = sub.building_blocks();
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=bound {
        combos.extend(multisets(blocks.len(), len));
    }
    for combo in combos {
        let parts: Vec<PresentedGroup> = combo.iter().map(|&i| blocks[i].clone()).collect();
        let b = biproduct(&parts).object;
        if !sub.member(&b) {
            continue;
        }
        let sum = biproduct(&[x.clone(), b.clone()]);
        if !sub.member(&sum.object) {
            continue;
        }
        let w = Retraction {
            a: sum.object.clone(),
            b,
            r: sum.proj[1].clone(),
            s: sum.inj[1].clone(),
            k: sum.inj[0].clone(),
        };
        debug_assert!(w.replays(sub, x));
        return RwicVerdict::InCompletion { witness: Box::new(w) };
    }
    RwicVerdict::Unknown { searched: bound }
}

/// Non-decreasing index sequences of length `len` over `0..n`.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, len, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, len, 0, &mut Vec::new(), &mut out);
    out
}
