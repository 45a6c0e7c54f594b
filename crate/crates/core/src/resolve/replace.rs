//! Replacing complexes by complexes of subcategory objects through towers
//! of explicit quasi-isomorphisms.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ambient_structure, resdim, resolve_object, ResdimValue};
use crate::complex::{is_quasi_iso, ChainComplex, ChainMap};
use crate::conflation::{bicartesian_conflation, Conflation, ConflationStructure, DeflationSquare};
use crate::error::{Error, Result};
use crate::group::{direct_sum, factor_through_mono, kernel, pair, pullback, GroupMorphism, PresentedGroup};
use crate::subcat::Subcategory;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageKind {
    /// Nothing to do in this degree.
    Identity,
    /// Cover a term and pull the differential below it back.
    Cover,
    /// Cover the pullback against a resolution of a term.
    Shorten,
    /// Split pullback along the resolution's deflation.
    Split,
}

/// One quasi-isomorphism `complex → previous complex` of a tower.
#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub kind: StageKind,
    pub degree: i64,
    /// Degrees whose terms were replaced.
    pub changed: (i64, i64),
    pub complex: ChainComplex,
    #[serde(skip)]
    pub map: ChainMap,
    pub quasi_iso: bool,
    /// The conflation `P ↣ A ⊕ Y ↠ X` of the pullback square of a cover stage.
    pub conflation: Option<Conflation>,
    pub note: Option<String>,
}

impl Stage {
    /// Two rows of terms around the changed degrees with the vertical maps.
    pub fn diagram(&self) -> String {
        let (lo, hi) = (self.changed.0 - 1, self.changed.1 + 1);
        let mut top = String::new();
        let mut mid = String::new();
        let mut bot = String::new();
        for n in lo..=hi {
            let f = self.map.component(n);
            let (a, b) = (f.source().label(), f.target().label());
            let arrow = if f.source().same_presentation(f.target()) && f.matrix().is_identity() {
                "="
            } else if f.is_epi() {
                "↠"
            } else {
                "↓"
            };
            let w = a.chars().count().max(b.chars().count()).max(3) + 2;
            top.push_str(&format!("{a:^w$}"));
            mid.push_str(&format!("{arrow:^w$}"));
            bot.push_str(&format!("{b:^w$}"));
        }
        let degrees: Vec<String> = (lo..=hi).map(|n| n.to_string()).collect();
        format!(
            "{:?} at degree {} (degrees {}):\n  {top}\n  {mid}\n  {bot}\n",
            self.kind,
            self.degree,
            degrees.join(" "),
        )
    }
}

fn trace_of(stages: &[Stage]) -> String {
    stages.iter().enumerate().map(|(i, s)| format!("stage {}: {}", i + 1, s.diagram())).collect()
}

/// Output of the bounded replacements.
#[derive(Clone, Debug, Serialize)]
pub struct Replacement {
    pub subcategory: String,
    pub input: ChainComplex,
    pub output: ChainComplex,
    pub stages: Vec<Stage>,
    /// `output → input`
    #[serde(skip)]
    pub map: ChainMap,
    pub quasi_iso: bool,
    pub members: bool,
    /// How many degrees the nonzero range grew downwards.
    pub window_growth: i64,
}

impl Replacement {
    pub fn trace(&self) -> String {
        trace_of(&self.stages)
    }
}

struct Pb {
    object: PresentedGroup,
    to_x: GroupMorphism,
    to_a: GroupMorphism,
}

fn is_identity(c: &GroupMorphism) -> bool {
    c.source().same_presentation(c.target()) && c.matrix().is_identity()
}

/// Pullback of `d: X → T` along `c: A → T`; along an identity the
/// pullback is `X` itself.
fn pullback_along(d: &GroupMorphism, c: &GroupMorphism) -> Pb {
    if is_identity(c) {
        return Pb { object: d.source().clone(), to_x: GroupMorphism::identity(d.source()), to_a: d.clone() };
    }
    let pb = pullback(d, c);
    Pb { object: pb.object, to_x: pb.left, to_a: pb.right }
}

/// The map into a pullback with components `u` and `v`.
fn into_pullback(pb: &Pb, u: &GroupMorphism, v: &GroupMorphism) -> Result<GroupMorphism> {
    factor_through_mono(&pair(&pb.to_x, &pb.to_a), &pair(u, v))
        .ok_or_else(|| Error::IllDefined("map does not factor through the pullback".into()))
}

#[allow(clippy::too_many_arguments)]
fn finish_stage(
    s: &ConflationStructure,
    kind: StageKind,
    degree: i64,
    changed: (i64, i64),
    previous: &ChainComplex,
    complex: ChainComplex,
    comps: BTreeMap<i64, GroupMorphism>,
    conflation: Option<Conflation>,
    note: Option<String>,
) -> Result<Stage> {
    let map = ChainMap::identity_except(&complex, previous, comps)?;
    map.ensure_valid()?;
    let quasi_iso = is_quasi_iso(&map, s)?.quasi_iso;
    Ok(Stage { kind, degree, changed, complex, map, quasi_iso, conflation, note })
}

fn identity_stage(y: &ChainComplex, m: i64) -> Stage {
    Stage {
        kind: StageKind::Identity,
        degree: m,
        changed: (m, m),
        complex: y.clone(),
        map: ChainMap::identity(y),
        quasi_iso: true,
        conflation: None,
        note: None,
    }
}

/// Covers `Y^m` and replaces `Y^{m−1}` by the pullback of `d^{m−1}`.
fn cover_step(sub: &Subcategory, s: &ConflationStructure, y: &ChainComplex, m: i64) -> Result<Stage> {
    let c = sub.cover_or_identity(&y.object(m))?;
    if is_identity(&c) {
        return Ok(identity_stage(y, m));
    }
    let d = y.diff(m - 1);
    let pb = pullback_along(&d, &c);
    let a = c.source().clone();
    let objects = BTreeMap::from([(m, a.clone()), (m - 1, pb.object.clone())]);
    let below = into_pullback(&pb, &y.diff(m - 2), &GroupMorphism::zero(&y.object(m - 2), &a))?;
    let diffs = BTreeMap::from([(m, c.then(&y.diff(m))), (m - 1, pb.to_a.clone()), (m - 2, below)]);
    let complex = y.with_changes(&objects, &diffs)?;
    let square = DeflationSquare { f: pb.to_a.clone(), g: d, p_prime: pb.to_x.clone(), p: c.clone() };
    let conflation = bicartesian_conflation(s, &square)?;
    let comps = BTreeMap::from([(m, c), (m - 1, pb.to_x)]);
    finish_stage(s, StageKind::Cover, m, (m - 1, m), y, complex, comps, Some(conflation), None)
}

fn compose(stages: &[Stage], input: &ChainComplex) -> Result<ChainMap> {
    let mut map = ChainMap::identity(input);
    for st in stages {
        map = st.map.then(&map)?;
    }
    Ok(map)
}

/// Replaces a bounded complex by one with member terms: cover the top
/// term, pull the differential back, and repeat downwards until the
/// bottom term is a member.
pub fn replace_bounded_above(sub: &Subcategory, e: &ChainComplex, max_len: usize) -> Result<Replacement> {
    if !e.validate() {
        return Err(Error::Precondition("input is not a complex".into()));
    }
    if !e.is_bounded() {
        return Err(Error::Precondition("bounded replacement needs a complex with a finite window".into()));
    }
    let s = ambient_structure(sub);
    let mut stages = Vec::new();
    let mut y = e.clone();
    if let Some((lo, hi)) = e.window() {
        let mut m = hi;
        loop {
            if m < lo && sub.member(&y.object(m)) {
                break;
            }
            if lo - m > max_len as i64 {
                return Err(Error::DepthExceeded { max_len });
            }
            let st = cover_step(sub, &s, &y, m)?;
            y = st.complex.clone();
            stages.push(st);
            m -= 1;
        }
    }
    finish_replacement(sub, &s, e, y, stages)
}

fn finish_replacement(
    sub: &Subcategory,
    s: &ConflationStructure,
    e: &ChainComplex,
    y: ChainComplex,
    stages: Vec<Stage>,
) -> Result<Replacement> {
    let map = compose(&stages, e)?;
    let quasi_iso = is_quasi_iso(&map, s)?.quasi_iso;
    let members = y.check_range().all(|n| sub.member(&y.object(n)));
    let low = |c: &ChainComplex| c.nonzero_range().map(|r| r.0);
    let window_growth = match (low(e), low(&y)) {
        (Some(a), Some(b)) => (a - b).max(0),
        _ => 0,
    };
    Ok(Replacement { subcategory: sub.name().to_string(), input: e.clone(), output: y, stages, map, quasi_iso, members, window_growth })
}

/// Bounded replacement after checking that every term has finite
/// resolution dimension.
pub fn replace_bounded(sub: &Subcategory, e: &ChainComplex) -> Result<Replacement> {
    if !e.is_bounded() {
        return Err(Error::Precondition("bounded replacement needs a complex with a finite window".into()));
    }
    let mut worst = 0;
    if let Some((lo, hi)) = e.window() {
        for n in lo..=hi {
            let x = e.object(n);
            match resdim(sub, &x, 8)? {
                ResdimValue::InfiniteEvidence { reason, .. } => {
                    return Err(Error::InfiniteResdim(format!("{} in degree {n}: {reason}", x.label())))
                }
                ResdimValue::Undetermined { searched } => {
                    return Err(Error::Precondition(format!(
                        "resdim of {} in degree {n} undetermined after {searched} steps",
                        x.label()
                    )))
                }
                v => worst = worst.max(v.finite().unwrap_or(0)),
            }
        }
    }
    replace_bounded_above(sub, e, worst + 1)
}

/// Output of the windowed replacement of a possibly unbounded complex.
#[derive(Clone, Debug, Serialize)]
pub struct WindowReplacement {
    pub subcategory: String,
    pub window: (i64, i64),
    pub bound: usize,
    pub input: ChainComplex,
    pub output: ChainComplex,
    pub stages: Vec<Stage>,
    #[serde(skip)]
    pub map: ChainMap,
    pub quasi_iso: bool,
    /// Every term in the window is a member.
    pub members_in_window: bool,
    /// For each degree, the last stage (1-based) that changed it.
    pub last_change: BTreeMap<i64, usize>,
}

impl WindowReplacement {
    pub fn trace(&self) -> String {
        trace_of(&self.stages)
    }
}

/// Makes the terms in degrees `a..=b` members: the bounded-above
/// replacement from degree `a` downwards, then for each higher degree a
/// run of at most `n` shortening steps, where `n` is the registered
/// uniform bound on resolution dimension.
pub fn unbounded_replace_window(sub: &Subcategory, e: &ChainComplex, a: i64, b: i64) -> Result<WindowReplacement> {
    let n = sub
        .uniform_bound()
        .ok_or_else(|| Error::Precondition(format!("{} has no registered uniform resdim bound", sub.name())))?;
    if a > b {
        return Err(Error::InvalidArgument("window must satisfy a ≤ b".into()));
    }
    if !e.validate() {
        return Err(Error::Precondition("input is not a complex".into()));
    }
    let s = ambient_structure(sub);
    let mut stages = Vec::new();
    let mut y = e.clone();

    let depth_limit = 64;
    let mut m = a;
    loop {
        let done = match (e.is_bounded(), e.window()) {
            (false, _) => m < a - n as i64 - 1,
            (true, Some((lo, _))) => m < lo.min(a) && sub.member(&y.object(m)),
            (true, None) => m < a,
        };
        if done {
            break;
        }
        if a - m > depth_limit {
            return Err(Error::DepthExceeded { max_len: depth_limit as usize });
        }
        let st = cover_step(sub, &s, &y, m)?;
        y = st.complex.clone();
        stages.push(st);
        m -= 1;
    }

    for m in a + 1..=b {
        if sub.member(&y.object(m)) {
            stages.push(identity_stage(&y, m));
            continue;
        }
        shorten(sub, &s, &mut y, &mut stages, m, n)?;
    }

    let map = compose(&stages, e)?;
    let quasi_iso = is_quasi_iso(&map, &s)?.quasi_iso;
    let members_in_window = (a..=b).all(|k| sub.member(&y.object(k)));
    let mut last_change = BTreeMap::new();
    for (i, st) in stages.iter().enumerate() {
        if st.kind != StageKind::Identity {
            for k in st.changed.0..=st.changed.1 {
                last_change.insert(k, i + 1);
            }
        }
    }
    Ok(WindowReplacement {
        subcategory: sub.name().to_string(),
        window: (a, b),
        bound: n,
        input: e.clone(),
        output: y,
        stages,
        map,
        quasi_iso,
        members_in_window,
        last_change,
    })
}

/// Shortening steps at degree `m`: resolve `X = Y^m` by `C ↠ X`, cover the
/// pullback `P` of `C^0 ↠ X` along `d^{m−1}`, pull `d^{m−2}` back, then
/// replace `X` by `C^0` and `B` by the split pullback `B ×_X C^0`, whose
/// resolution dimension is smaller. Moves one degree down per step.
fn shorten(
    sub: &Subcategory,
    s: &ConflationStructure,
    y: &mut ChainComplex,
    stages: &mut Vec<Stage>,
    start: i64,
    n: usize,
) -> Result<()> {
    let mut m = start;
    let mut r = n;
    loop {
        let x = y.object(m);
        if sub.member(&x) {
            return Ok(());
        }
        if r == 0 {
            return Err(Error::Precondition(format!(
                "{} in degree {m} is still not a member after {n} shortening steps",
                x.label()
            )));
        }
        let c = resolve_object(sub, &x, r)?;
        let pi = c.augmentation.clone();
        let d1 = y.diff(m - 1);
        let p = pullback_along(&d1, &pi);
        let bcov = sub.cover_or_identity(&p.object)?;
        let bobj = bcov.source().clone();
        let beta_y = bcov.then(&p.to_x);
        let q = pullback_along(&y.diff(m - 2), &beta_y);
        let below = into_pullback(&q, &y.diff(m - 3), &GroupMorphism::zero(&y.object(m - 3), &bobj))?;
        let objects = BTreeMap::from([(m - 1, bobj.clone()), (m - 2, q.object.clone())]);
        let beta = beta_y.then(&d1);
        let diffs = BTreeMap::from([(m - 1, beta.clone()), (m - 2, q.to_a.clone()), (m - 3, below)]);
        let mid = y.with_changes(&objects, &diffs)?;
        let note = format!("pulled-back term {} is {}a member", q.object.label(), if sub.member(&q.object) { "" } else { "not " });
        let comps = BTreeMap::from([(m - 1, beta_y), (m - 2, q.to_x.clone())]);
        let st = finish_stage(s, StageKind::Shorten, m, (m - 2, m - 1), y, mid.clone(), comps, None, Some(note))?;
        stages.push(st);

        let t = pullback_along(&beta, &pi);
        let c0 = pi.source().clone();
        let into_t = into_pullback(&t, &q.to_a, &GroupMorphism::zero(&q.object, &c0))?;
        let objects = BTreeMap::from([(m, c0), (m - 1, t.object.clone())]);
        let diffs = BTreeMap::from([(m, pi.then(&mid.diff(m))), (m - 1, t.to_a.clone()), (m - 2, into_t)]);
        let new = mid.with_changes(&objects, &diffs)?;
        let split = direct_sum(&bobj, &kernel(&pi).0);
        let note = format!(
            "split pullback {} {} {} ⊕ ker",
            t.object.label(),
            if t.object.is_isomorphic(&split) { "≅" } else { "≇" },
            bobj.label()
        );
        let comps = BTreeMap::from([(m, pi), (m - 1, t.to_x)]);
        let st = finish_stage(s, StageKind::Split, m, (m - 1, m), &mid, new.clone(), comps, None, Some(note))?;
        stages.push(st);
        *y = new;
        m -= 1;
        r -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;

    fn g(s: &str) -> PresentedGroup {
        PresentedGroup::parse(s).unwrap()
    }

    #[test]
    fn stalk_z4_over_isbell() {
        let i = Subcategory::isbell(2).unwrap();
        let e = ChainComplex::stalk(&g("Z/4"), 0);
        let r = replace_bounded_above(&i, &e, 4).unwrap();
        assert!(r.members && r.quasi_iso);
        assert!(r.stages.iter().all(|s| s.quasi_iso));
        assert_eq!(r.output.nonzero_range(), Some((-1, 0)));
        assert!(r.output.object(-1).is_isomorphic(&g("Z")));
        assert!(homology(&r.output, 0).is_isomorphic(&g("Z/4")));
        assert_eq!(r.window_growth, 1);
    }

    #[test]
    fn member_terms_unchanged() {
        let i = Subcategory::isbell(2).unwrap();
        let z = g("Z");
        let e = ChainComplex::bounded(0, vec![z.clone(), z.clone()], vec![GroupMorphism::scalar(&z, 4)]).unwrap();
        let r = replace_bounded(&i, &e).unwrap();
        assert!(r.stages.iter().all(|s| s.kind == StageKind::Identity));
        assert!(r.map.equals(&ChainMap::identity(&e)));
        assert_eq!(r.window_growth, 0);
    }

    #[test]
    fn two_term_z4() {
        let i = Subcategory::isbell(2).unwrap();
        let z4 = g("Z/4");
        let e = ChainComplex::bounded(0, vec![z4.clone(), z4.clone()], vec![GroupMorphism::scalar(&z4, 2)]).unwrap();
        let r = replace_bounded(&i, &e).unwrap();
        assert!(r.members && r.quasi_iso);
        assert!(r.window_growth <= 1);
        for n in -2..=2 {
            assert!(homology(&r.output, n).is_isomorphic(&homology(&e, n)));
        }
    }

    #[test]
    fn infinite_resdim_rejected() {
        let a = Subcategory::add_ring(4).unwrap();
        let e = ChainComplex::stalk(&g("Z/2"), 0);
        assert!(matches!(replace_bounded(&a, &e), Err(Error::InfiniteResdim(_))));
    }

    #[test]
    fn window_replacement_shortens_degree_one() {
        let i = Subcategory::isbell(2).unwrap();
        let e = ChainComplex::stalk(&g("Z/4"), 1);
        let w = unbounded_replace_window(&i, &e, 0, 1).unwrap();
        assert!(w.members_in_window && w.quasi_iso);
        assert!(w.stages.iter().any(|s| s.kind == StageKind::Split));
        assert!(w.stages.iter().all(|s| s.quasi_iso));
        assert!(homology(&w.output, 1).is_isomorphic(&g("Z/4")));
        assert!(w.trace().contains("Split"));
    }

    #[test]
    fn window_replacement_periodic() {
        let i = Subcategory::isbell(2).unwrap();
        let z8 = g("Z/8");
        let p = ChainComplex::periodic(vec![z8.clone()], vec![GroupMorphism::scalar(&z8, 4)]).unwrap();
        let w = unbounded_replace_window(&i, &p, 0, 2).unwrap();
        assert!(w.members_in_window, "{}", w.trace());
        assert!(w.quasi_iso);
        assert!(w.output.validate());
        // Far from the window nothing changes.
        assert!(w.output.object(10).same_presentation(&z8));
        assert!(w.output.object(-10).same_presentation(&z8));
    }

    #[test]
    fn window_of_members_is_identity() {
        let i = Subcategory::isbell(2).unwrap();
        let z2 = g("Z/2");
        let p = ChainComplex::periodic(vec![z2.clone()], vec![GroupMorphism::zero(&z2, &z2)]).unwrap();
        let w = unbounded_replace_window(&i, &p, 0, 3).unwrap();
        assert!(w.stages.iter().all(|s| s.kind == StageKind::Identity));
        assert!(w.last_change.is_empty());
    }

    #[test]
    fn window_needs_bound() {
        let a = Subcategory::add_ring(4).unwrap();
        let e = ChainComplex::stalk(&g("Z/4"), 0);
        assert!(matches!(unbounded_replace_window(&a, &e, 0, 0), Err(Error::Precondition(_))));
    }
}
