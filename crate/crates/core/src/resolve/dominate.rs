//! A resolution mapping onto two given resolutions of the same object.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ambient_structure, Resolution};
use crate::complex::{is_acyclic, ChainMap};
use crate::error::{Error, Result};
use crate::group::{factor_through_mono, kernel, pullback, GroupMorphism, PresentedGroup};
use crate::subcat::Subcategory;

/// Membership of `ker d^k` in the three resolutions, `d^0` being the
/// augmentation.
#[derive(Clone, Debug, Serialize)]
pub struct KernelLevel {
    pub level: i64,
    pub a_member: bool,
    pub c_member: bool,
    pub b_member: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Domination {
    pub b: Resolution,
    /// `B• → A•` and `B• → C•` over the identity of `E`.
    #[serde(skip)]
    pub to_a: ChainMap,
    #[serde(skip)]
    pub to_c: ChainMap,
    pub triangles_commute: bool,
    pub kernel_levels: Vec<KernelLevel>,
    /// `−n + 1` where `n` is the length of `C•`.
    pub minimal_level: i64,
    pub minimal_level_member: bool,
    /// `ker d_A^k` member implies `ker d_B^k` member at every level.
    pub propagation_holds: bool,
    pub cone_relatively_acyclic: bool,
}

impl Domination {
    pub fn verified(&self, sub: &Subcategory) -> bool {
        self.b.verify(sub)
            && self.triangles_commute
            && self.minimal_level_member
            && self.propagation_holds
            && self.cone_relatively_acyclic
    }
}

/// Levels `0, −1, …` of the construction: `augmentation` and `diffs` of
/// `B•`, components of the maps to `A•` and `C•`, and the kernels
/// `I_B^{−k} = ker d_B^{−k+1}`.
pub(crate) struct Core {
    pub augmentation: GroupMorphism,
    pub diffs: Vec<GroupMorphism>,
    pub to_a: Vec<GroupMorphism>,
    pub to_c: Vec<GroupMorphism>,
    pub kernels: Vec<PresentedGroup>,
}

/// `d_A^{−k}` corestricted to `ker d_A^{−k+1}`.
fn corestricted(r: &Resolution, k: i64) -> Result<(GroupMorphism, GroupMorphism)> {
    let (_, incl) = r.kernel(-k + 1);
    let d = factor_through_mono(&incl, &r.diff(-k)).ok_or_else(|| Error::Precondition("d ∘ d ≠ 0 in a resolution".into()))?;
    Ok((d, incl))
}

/// Builds `B•` level by level. With `depth = Some(n)` the levels `0..=n`
/// are built and the construction stops; otherwise it runs until both
/// inputs are exhausted and the next kernel is a member.
pub(crate) fn dominate_core(sub: &Subcategory, a: &Resolution, c: &Resolution, depth: Option<usize>) -> Result<Core> {
    if !a.target.same_presentation(&c.target) {
        return Err(Error::Precondition("resolutions of different objects".into()));
    }
    let pb0 = pullback(&a.augmentation, &c.augmentation);
    let cov = sub.cover_or_identity(&pb0.object)?;
    let f0 = cov.then(&pb0.left);
    let g0 = cov.then(&pb0.right);
    let augmentation = f0.then(&a.augmentation);
    let (mut ib, mut ib_incl) = kernel(&augmentation);
    let lift = |into: &GroupMorphism, t: &GroupMorphism| {
        factor_through_mono(into, t).ok_or_else(|| Error::Precondition("induced map on kernels does not exist".into()))
    };
    let mut alpha = lift(&a.kernel(0).1, &ib_incl.then(&f0))?;
    let mut gamma = lift(&c.kernel(0).1, &ib_incl.then(&g0))?;
    let mut core = Core { augmentation, diffs: vec![], to_a: vec![f0], to_c: vec![g0], kernels: vec![ib.clone()] };
    let exhausted_at = a.length().max(c.length()) + 1;
    let mut k = 1usize;
    loop {
        match depth {
            Some(d) if k > d => break,
            None if k >= exhausted_at && sub.member(&ib) => {
                if !ib.is_trivial() {
                    core.diffs.push(ib_incl.clone());
                    core.to_a.push(GroupMorphism::zero(&ib, &a.term(-(k as i64))));
                    core.to_c.push(GroupMorphism::zero(&ib, &c.term(-(k as i64))));
                }
                break;
            }
            None if k > exhausted_at + 64 => return Err(Error::DepthExceeded { max_len: exhausted_at + 64 }),
            _ => {}
        }
        let ki = k as i64;
        let (da, _) = corestricted(a, ki)?;
        let (dc, _) = corestricted(c, ki)?;
        let p = pullback(&da, &alpha);
        let q = pullback(&dc, &gamma);
        let r = pullback(&p.right, &q.right);
        let cov = sub.cover_or_identity(&r.object)?;
        let to_ib = cov.then(&r.left).then(&p.right);
        let fk = cov.then(&r.left).then(&p.left);
        let gk = cov.then(&r.right).then(&q.left);
        core.diffs.push(to_ib.then(&ib_incl));
        let (next, next_incl) = kernel(&to_ib);
        alpha = lift(&a.kernel(-ki).1, &next_incl.then(&fk))?;
        gamma = lift(&c.kernel(-ki).1, &next_incl.then(&gk))?;
        core.to_a.push(fk);
        core.to_c.push(gk);
        core.kernels.push(next.clone());
        ib = next;
        ib_incl = next_incl;
        k += 1;
    }
    Ok(core)
}

fn chain_map(b: &Resolution, r: &Resolution, comps: &[GroupMorphism]) -> Result<ChainMap> {
    let map: BTreeMap<i64, GroupMorphism> = comps.iter().enumerate().map(|(k, f)| (-(k as i64), f.clone())).collect();
    ChainMap::bounded(&b.complex(), &r.complex(), map)
}

/// Pullbacks of the two resolutions against each other, covered by
/// members at every level.
pub fn dominate_resolutions(sub: &Subcategory, ra: &Resolution, rc: &Resolution) -> Result<Domination> {
    let core = dominate_core(sub, ra, rc, None)?;
    let b = Resolution::new(sub, core.augmentation.clone(), core.diffs.clone())?;
    let to_a = chain_map(&b, ra, &core.to_a)?;
    let to_c = chain_map(&b, rc, &core.to_c)?;
    let triangles_commute = to_a.validate()
        && to_c.validate()
        && to_a.component(0).then(&ra.augmentation).equals(&b.augmentation)
        && to_c.component(0).then(&rc.augmentation).equals(&b.augmentation);
    let deepest = ra.length().max(rc.length()).max(b.length()) as i64;
    let kernel_levels: Vec<KernelLevel> = (-deepest..=0)
        .rev()
        .map(|k| KernelLevel {
            level: k,
            a_member: sub.member(&ra.kernel(k).0),
            c_member: sub.member(&rc.kernel(k).0),
            b_member: sub.member(&b.kernel(k).0),
        })
        .collect();
    let minimal_level = -(rc.length() as i64) + 1;
    let minimal_level_member = sub.member(&b.kernel(minimal_level).0);
    let propagation_holds = kernel_levels.iter().all(|l| !l.a_member || l.b_member);
    let s = ambient_structure(sub);
    let cone_relatively_acyclic = to_a.cone().ok().is_some_and(|cone| is_acyclic(&cone, &s, Some(sub)).is_some());
    Ok(Domination {
        b,
        to_a,
        to_c,
        triangles_commute,
        kernel_levels,
        minimal_level,
        minimal_level_member,
        propagation_holds,
        cone_relatively_acyclic,
    })
}
