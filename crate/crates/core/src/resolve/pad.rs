//! Adding a null-homotopic complex to an acyclic complex of members so
//! that every image becomes a member.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::dominate::dominate_core;
use super::{ambient_structure, resolve_object, Resolution};
use crate::complex::{is_acyclic, AcyclicityCertificate, ChainComplex};
use crate::error::{Error, Result};
use crate::group::{biproduct, direct_sum, factorize, sum_map, GroupMorphism, PresentedGroup};
use crate::linalg::IntMatrix;
use crate::subcat::Subcategory;

/// `h^n: C^n → C^{n−1}` with `h d + d h = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct NullHomotopy {
    pub period: Option<usize>,
    pub components: BTreeMap<i64, GroupMorphism>,
}

impl NullHomotopy {
    pub fn component(&self, c: &ChainComplex, n: i64) -> GroupMorphism {
        let key = match self.period {
            Some(t) => n.rem_euclid(t as i64),
            None => n,
        };
        match self.components.get(&key) {
            Some(h) => h.clone(),
            None => GroupMorphism::zero(&c.object(n), &c.object(n - 1)),
        }
    }

    pub fn replays(&self, c: &ChainComplex) -> bool {
        c.check_range().all(|n| {
            let h = self.component(c, n);
            let h1 = self.component(c, n + 1);
            h.source().generators() == c.object(n).generators()
                && h.then(&c.diff(n - 1)).add(&c.diff(n).then(&h1)).equals(&GroupMorphism::identity(&c.object(n)))
        })
    }
}

/// `B →id B` in degrees `r, r + 1`, repeated with period `t` if given.
fn contractible_piece(b: &PresentedGroup, r: i64, period: Option<usize>) -> (ChainComplex, NullHomotopy) {
    let g = b.generators();
    let hit = |n: i64| match period {
        Some(t) => n.rem_euclid(t as i64) == r.rem_euclid(t as i64),
        None => n == r,
    };
    let (has_bottom, has_top) = (|n: i64| hit(n), |n: i64| hit(n - 1));
    let obj = move |n: i64| {
        let mut parts = Vec::new();
        if has_bottom(n) {
            parts.push(b.clone());
        }
        if has_top(n) {
            parts.push(b.clone());
        }
        biproduct(&parts).object
    };
    let one = |rows: usize, cols: usize, r0: usize, c0: usize| {
        IntMatrix::from_fn(rows, cols, |i, j| BigInt::from((i >= r0 && i < r0 + g && j == c0 + (i - r0)) as i64))
    };
    let diff = |n: i64, _tail: bool| {
        let (src, dst) = (obj(n), obj(n + 1));
        let m = if has_bottom(n) {
            let top_offset = if has_bottom(n + 1) { g } else { 0 };
            one(src.generators(), dst.generators(), 0, top_offset)
        } else {
            IntMatrix::zeros(src.generators(), dst.generators())
        };
        GroupMorphism::new(src, dst, m).expect("contractible differential")
    };
    let h = |n: i64| {
        let (src, dst) = (obj(n), obj(n - 1));
        let m = if has_top(n) {
            let top_offset = if has_bottom(n) { g } else { 0 };
            one(src.generators(), dst.generators(), top_offset, 0)
        } else {
            IntMatrix::zeros(src.generators(), dst.generators())
        };
        GroupMorphism::new(src, dst, m).expect("contractible homotopy")
    };
    let window = period.is_none().then_some((r, r + 1));
    let c = ChainComplex::build(window, period, &|n, _| obj(n), &diff);
    let degrees: Vec<i64> = match period {
        Some(t) => (0..t as i64).collect(),
        None => (r..=r + 1).collect(),
    };
    let components = degrees.into_iter().map(|n| (n, h(n))).collect();
    (c, NullHomotopy { period, components })
}

/// Evidence for one degree `l` whose image is not a member.
#[derive(Clone, Debug, Serialize)]
pub struct Complement {
    pub degree: i64,
    pub image: PresentedGroup,
    /// `B^{l+1}` of the dominating resolution of `im d^{l+n+1}`.
    pub complement: PresentedGroup,
    /// `im d_B^{l+1}` is a member.
    pub kernel_member: bool,
    /// `im d^l ⊕ B^{l+1}` is a member.
    pub sum_member: bool,
}

/// The brutal truncation `E^{≤k} ↠ im d^k` as a resolution, cut after
/// `depth` terms for unbounded complexes.
fn truncation(sub: &Subcategory, e: &ChainComplex, k: i64, depth: usize) -> Result<Resolution> {
    let aug = factorize(&e.diff(k)).deflation;
    let bottom = match (e.is_bounded(), e.window()) {
        (true, Some((lo, _))) => lo.min(k),
        (true, None) => k,
        (false, _) => k - depth as i64 + 1,
    };
    let diffs = (bottom..k).rev().map(|j| e.diff(j)).collect();
    Resolution::new(sub, aug, diffs)
}

/// Dominates `E^{≤k} ↠ im d^k`, with `k = l + n + 1`, against a shortest
/// known resolution and reads off the complement `B^{l+1}`.
pub fn complement_for_degree(sub: &Subcategory, e: &ChainComplex, l: i64, n: usize) -> Result<Complement> {
    let k = l + n as i64 + 1;
    let image = factorize(&e.diff(l)).image;
    let el = truncation(sub, e, k, n + 2)?;
    let short = resolve_object(sub, &el.target, n)?;
    let core = dominate_core(sub, &el, &short, Some(n))?;
    let b = |level: usize| core.to_a.get(level).map(|f| f.source().clone()).unwrap_or_else(PresentedGroup::zero);
    let complement = b(n);
    let kernel_member = core.kernels.get(n).is_none_or(|kg| sub.member(kg));
    let sum_member = sub.member(&direct_sum(&image, &complement));
    Ok(Complement { degree: l, image, complement, kernel_member, sum_member })
}

#[derive(Clone, Debug, Serialize)]
pub struct Padding {
    pub subcategory: String,
    pub bound: usize,
    pub input: ChainComplex,
    /// The null-homotopic complex `C•`.
    pub padding: ChainComplex,
    pub homotopy: NullHomotopy,
    pub homotopy_replays: bool,
    /// `E• ⊕ C•`
    pub padded: ChainComplex,
    pub complements: Vec<Complement>,
    #[serde(skip)]
    pub certificate: Option<AcyclicityCertificate>,
}

impl Padding {
    pub fn relatively_acyclic(&self) -> bool {
        self.certificate.is_some()
    }
}

/// For each degree whose image is not a member, adds `B →id B` with `B`
/// from `complement_for_degree`.
pub fn pad_to_relative_acyclic(sub: &Subcategory, e: &ChainComplex) -> Result<Padding> {
    let n = sub.uniform_bound().ok_or_else(|| {
        Error::Precondition(format!("{} is not uniformly preresolving (no registered resdim bound)", sub.name()))
    })?;
    let s = ambient_structure(sub);
    if !e.validate() {
        return Err(Error::Precondition("input is not a complex".into()));
    }
    if e.period().is_some() && e.window().is_some() {
        return Err(Error::Precondition("padding supports bounded or strictly periodic complexes".into()));
    }
    if is_acyclic(e, &s, None).is_none() {
        return Err(Error::Precondition("input is not acyclic".into()));
    }
    if let Some(n) = e.check_range().find(|&n| !sub.member(&e.object(n))) {
        return Err(Error::NotMembers(format!("{} (degree {n})", sub.name())));
    }
    let mut complements = Vec::new();
    for l in e.check_range() {
        if sub.member(&factorize(&e.diff(l)).image) {
            continue;
        }
        let c = complement_for_degree(sub, e, l, n)?;
        if !c.sum_member {
            return Err(Error::Precondition(format!("no member complement for the image in degree {l}")));
        }
        complements.push(c);
    }
    let pieces: Vec<_> = complements.iter().map(|c| contractible_piece(&c.complement, c.degree, e.period())).collect();
    let (padding, homotopy) = combine(&pieces, e.period());
    let homotopy_replays = homotopy.replays(&padding);
    let padded = e.direct_sum(&padding);
    let certificate = is_acyclic(&padded, &s, Some(sub));
    Ok(Padding {
        subcategory: sub.name().to_string(),
        bound: n,
        input: e.clone(),
        padding,
        homotopy,
        homotopy_replays,
        padded,
        complements,
        certificate,
    })
}

fn combine(pieces: &[(ChainComplex, NullHomotopy)], period: Option<usize>) -> (ChainComplex, NullHomotopy) {
    let mut c = match period {
        Some(_) if !pieces.is_empty() => pieces[0].0.clone(),
        _ => ChainComplex::zero(),
    };
    let start = usize::from(period.is_some() && !pieces.is_empty());
    for (p, _) in &pieces[start..] {
        c = c.direct_sum(p);
    }
    let degrees: Vec<i64> = match period {
        Some(t) => (0..t as i64).collect(),
        None => c.check_range().collect(),
    };
    let components = degrees
        .into_iter()
        .map(|n| {
            let mut parts = pieces.iter().map(|(pc, h)| h.component(pc, n));
            let first = parts.next().unwrap_or_else(|| GroupMorphism::zero(&c.object(n), &c.object(n - 1)));
            let start_zero = period.is_none();
            let h = if start_zero {
                let zero = GroupMorphism::zero(&PresentedGroup::zero(), &PresentedGroup::zero());
                std::iter::once(first).fold(zero, |acc, h| sum_map(&acc, &h))
            } else {
                first
            };
            (n, parts.fold(h, |acc, h| sum_map(&acc, &h)))
        })
        .collect();
    (c, NullHomotopy { period, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> PresentedGroup {
        PresentedGroup::parse(s).unwrap()
    }

    #[test]
    fn pieces_are_contractible() {
        let b = g("Z/2+Z");
        let (c, h) = contractible_piece(&b, 3, None);
        assert!(c.validate() && h.replays(&c));
        let (p, hp) = contractible_piece(&b, 0, Some(1));
        assert!(p.validate() && hp.replays(&p));
        let (q, hq) = contractible_piece(&b, 1, Some(3));
        assert!(q.validate() && hq.replays(&q));
        let (all, hall) = combine(&[(p, hp), contractible_piece(&g("Z/3"), 0, Some(1))], Some(1));
        assert!(hall.replays(&all));
    }

    #[test]
    fn isbell_needs_no_padding() {
        let i = Subcategory::isbell(2).unwrap();
        let z = g("Z");
        let z2 = g("Z/2");
        let e = ChainComplex::bounded(
            0,
            vec![z.clone(), z.clone(), z2.clone()],
            vec![GroupMorphism::scalar(&z, 2), GroupMorphism::new(z.clone(), z2.clone(), IntMatrix::identity(1)).unwrap()],
        )
        .unwrap();
        let p = pad_to_relative_acyclic(&i, &e).unwrap();
        assert!(p.complements.is_empty());
        assert!(p.padding.window().is_none());
        assert!(p.relatively_acyclic() && p.homotopy_replays);
        // The construction agrees: image ⊕ complement is a member anyway.
        for l in e.check_range() {
            let c = complement_for_degree(&i, &e, l, 1).unwrap();
            assert!(c.sum_member && c.kernel_member);
        }
    }

    #[test]
    fn add_ring_is_not_uniformly_preresolving() {
        let a = Subcategory::add_ring(4).unwrap();
        let z4 = g("Z/4");
        let e = ChainComplex::periodic(vec![z4.clone()], vec![GroupMorphism::scalar(&z4, 2)]).unwrap();
        assert!(matches!(pad_to_relative_acyclic(&a, &e), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_complex() {
        let i = Subcategory::isbell(2).unwrap();
        let p = pad_to_relative_acyclic(&i, &ChainComplex::zero()).unwrap();
        assert!(p.padding.window().is_none() && p.relatively_acyclic());
    }
}
