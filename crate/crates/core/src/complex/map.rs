//! Chain maps and mapping cones.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::{json, Value};

use super::{lcm_period, union_window, ChainComplex};
use crate::error::{Error, Result};
use crate::group::{biproduct, rows_json, GroupMorphism};
use crate::linalg::IntMatrix;

/// Components outside the explicitly stored degrees.
#[derive(Clone, Debug)]
pub enum MapTail {
    Zero,
    /// Only valid between complexes with the same tail.
    Identity,
    Periodic { comps: Vec<GroupMorphism> },
}

impl MapTail {
    fn period(&self) -> Option<usize> {
        match self {
            MapTail::Periodic { comps } => Some(comps.len()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    explicit: BTreeMap<i64, GroupMorphism>,
    tail: MapTail,
}

impl ChainMap {
    /// A map with the given explicit components and tail. Typing is
    /// checked; commutation is checked by `validate`.
    pub fn new(source: ChainComplex, target: ChainComplex, explicit: BTreeMap<i64, GroupMorphism>, tail: MapTail) -> Result<Self> {
        let m = ChainMap { source, target, explicit, tail };
        for n in m.check_range() {
            let f = m.component(n);
            let (a, b) = (m.source.object(n), m.target.object(n));
            if f.matrix().shape() != (a.generators(), b.generators()) {
                return Err(Error::DimensionMismatch(format!("component {n} has the wrong shape")));
            }
        }
        Ok(m)
    }

    /// Map of bounded complexes from its components on the union window.
    pub fn bounded(source: &ChainComplex, target: &ChainComplex, comps: BTreeMap<i64, GroupMorphism>) -> Result<Self> {
        if !source.is_bounded() || !target.is_bounded() {
            return Err(Error::Precondition("bounded map between unbounded complexes".into()));
        }
        let mut explicit = BTreeMap::new();
        if let Some((lo, hi)) = union_window(source.window(), target.window()) {
            for n in lo..=hi {
                let f = comps.get(&n).cloned().unwrap_or_else(|| GroupMorphism::zero(&source.object(n), &target.object(n)));
                explicit.insert(n, f);
            }
        }
        Self::new(source.clone(), target.clone(), explicit, MapTail::Zero)
    }

    /// Identity components outside `comps`; the two complexes must agree
    /// wherever no component is given.
    pub fn identity_except(source: &ChainComplex, target: &ChainComplex, comps: BTreeMap<i64, GroupMorphism>) -> Result<Self> {
        let keys = comps.keys().next().copied().zip(comps.keys().last().copied());
        let window = union_window(keys, union_window(source.window(), target.window()));
        let mut explicit = BTreeMap::new();
        if let Some((lo, hi)) = window {
            for n in lo..=hi {
                let f = match comps.get(&n) {
                    Some(f) => f.clone(),
                    None => {
                        let (a, b) = (source.object(n), target.object(n));
                        if !a.same_presentation(&b) {
                            return Err(Error::DimensionMismatch(format!("no component given in degree {n}")));
                        }
                        GroupMorphism::identity(&a)
                    }
                };
                explicit.insert(n, f);
            }
        }
        Self::new(source.clone(), target.clone(), explicit, MapTail::Identity)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let explicit = match c.window() {
            Some((lo, hi)) => (lo..=hi).map(|n| (n, GroupMorphism::identity(&c.object(n)))).collect(),
            None => BTreeMap::new(),
        };
        ChainMap { source: c.clone(), target: c.clone(), explicit, tail: MapTail::Identity }
    }

    pub fn zero(a: &ChainComplex, b: &ChainComplex) -> Self {
        let window = union_window(a.window(), b.window());
        let explicit = match window {
            Some((lo, hi)) => (lo..=hi).map(|n| (n, GroupMorphism::zero(&a.object(n), &b.object(n)))).collect(),
            None => BTreeMap::new(),
        };
        let tail = match lcm_period(a.period(), b.period()) {
            None => MapTail::Zero,
            Some(t) => MapTail::Periodic {
                comps: (0..t as i64).map(|r| GroupMorphism::zero(&a.tail_object(r), &b.tail_object(r))).collect(),
            },
        };
        ChainMap { source: a.clone(), target: b.clone(), explicit, tail }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn tail(&self) -> &MapTail {
        &self.tail
    }

    fn explicit_window(&self) -> Option<(i64, i64)> {
        let keys = (self.explicit.keys().next().copied(), self.explicit.keys().last().copied());
        let own = match keys {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        union_window(own, union_window(self.source.window(), self.target.window()))
    }

    pub fn period(&self) -> Option<usize> {
        lcm_period(lcm_period(self.source.period(), self.target.period()), self.tail.period())
    }

    pub fn tail_component(&self, n: i64) -> GroupMorphism {
        let (a, b) = (self.source.tail_object(n), self.target.tail_object(n));
        match &self.tail {
            MapTail::Zero => GroupMorphism::zero(&a, &b),
            MapTail::Identity => GroupMorphism::identity(&a),
            MapTail::Periodic { comps } => comps[n.rem_euclid(comps.len() as i64) as usize].clone(),
        }
    }

    pub fn component(&self, n: i64) -> GroupMorphism {
        match self.explicit.get(&n) {
            Some(f) => f.clone(),
            None => self.tail_component(n),
        }
    }

    pub fn check_range(&self) -> std::ops::RangeInclusive<i64> {
        range_for(self.explicit_window(), self.period())
    }

    /// Components well defined and commuting with the differentials.
    pub fn validate(&self) -> bool {
        if matches!(self.tail, MapTail::Identity) && !same_tail(&self.source, &self.target) {
            return false;
        }
        self.check_range().all(|n| {
            let f = self.component(n);
            let g = self.component(n + 1);
            f.is_well_defined()
                && self.source.diff(n).then(&g).equals(&f.then(&self.target.diff(n)))
        })
    }

    pub fn ensure_valid(&self) -> Result<()> {
        if self.validate() {
            Ok(())
        } else {
            Err(Error::NotChainMap("components do not commute with the differentials".into()))
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let window = union_window(self.explicit_window(), next.explicit_window());
        let mut explicit = BTreeMap::new();
        if let Some((lo, hi)) = window {
            for n in lo..=hi {
                explicit.insert(n, self.component(n).try_then(&next.component(n))?);
            }
        }
        let tail = match (&self.tail, &next.tail) {
            (MapTail::Zero, _) | (_, MapTail::Zero) => MapTail::Zero,
            (MapTail::Identity, MapTail::Identity) => MapTail::Identity,
            _ => {
                let t = self.period().unwrap_or(1).lcm(&next.period().unwrap_or(1));
                MapTail::Periodic {
                    comps: (0..t as i64)
                        .map(|r| self.tail_component(r).try_then(&next.tail_component(r)))
                        .collect::<Result<_>>()?,
                }
            }
        };
        Ok(ChainMap { source: self.source.clone(), target: next.target.clone(), explicit, tail })
    }

    /// Componentwise equality over the check range.
    pub fn equals(&self, other: &ChainMap) -> bool {
        let window = union_window(self.explicit_window(), other.explicit_window());
        range_for(window, lcm_period(self.period(), other.period()))
            .all(|n| self.component(n).equals(&other.component(n)))
    }

    /// `cone^n = A^{n+1} ⊕ B^n` with `d(a, b) = (−d_A a, f a + d_B b)`.
    pub fn cone(&self) -> Result<ChainComplex> {
        self.ensure_valid()?;
        let (a, b) = (&self.source, &self.target);
        let shifted = self.explicit_window().map(|(lo, hi)| (lo - 1, hi));
        let window = union_window(shifted, b.window());
        let obj = |n: i64, tail: bool| {
            let parts = if tail { [a.tail_object(n + 1), b.tail_object(n)] } else { [a.object(n + 1), b.object(n)] };
            biproduct(&parts).object
        };
        let diff = |n: i64, tail: bool| {
            let (da, db, f) = if tail {
                (a.tail_diff(n + 1), b.tail_diff(n), self.tail_component(n + 1))
            } else {
                (a.diff(n + 1), b.diff(n), self.component(n + 1))
            };
            let zero = IntMatrix::zeros(db.matrix().rows(), da.matrix().cols());
            let m = IntMatrix::blocks(&da.matrix().neg(), f.matrix(), &zero, db.matrix());
            GroupMorphism::from_parts(obj(n, tail), obj(n + 1, tail), m)
        };
        Ok(ChainComplex::build(window, self.period(), &obj, &diff))
    }

    pub fn to_json(&self) -> Value {
        let comps: serde_json::Map<String, Value> =
            self.check_range().map(|n| (n.to_string(), rows_json(self.component(n).matrix()))).collect();
        json!({"source": self.source.to_json(), "target": self.target.to_json(), "components": comps})
    }
}

/// Same idea as `ChainComplex::check_range` for a window/period pair.
pub(crate) fn range_for(window: Option<(i64, i64)>, period: Option<usize>) -> std::ops::RangeInclusive<i64> {
    match (window, period) {
        (None, None) => std::ops::RangeInclusive::new(1, 0),
        (Some((lo, hi)), None) => lo - 1..=hi + 1,
        (None, Some(t)) => 0..=t as i64 - 1,
        (Some((lo, hi)), Some(t)) => lo - t as i64 - 1..=hi + t as i64 + 1,
    }
}

fn same_tail(a: &ChainComplex, b: &ChainComplex) -> bool {
    if a.period() != b.period() {
        return false;
    }
    match a.period() {
        None => true,
        Some(t) => (0..t as i64).all(|r| {
            a.tail_object(r).same_presentation(&b.tail_object(r)) && a.tail_diff(r).matrix() == b.tail_diff(r).matrix()
        }),
    }
}

/// The inclusion `B → cone(f)`.
pub fn cone_inclusion(f: &ChainMap) -> Result<ChainMap> {
    let c = f.cone()?;
    let b = f.target();
    let window = union_window(c.window(), b.window());
    let comp = |n: i64, tail: bool| {
        let (an, bn) = if tail { (f.source().tail_object(n + 1), b.tail_object(n)) } else { (f.source().object(n + 1), b.object(n)) };
        biproduct(&[an, bn]).inj[1].clone()
    };
    let explicit = match window {
        Some((lo, hi)) => (lo..=hi).map(|n| (n, comp(n, false))).collect(),
        None => BTreeMap::new(),
    };
    let tail = match c.period() {
        None => MapTail::Zero,
        Some(t) => MapTail::Periodic { comps: (0..t as i64).map(|r| comp(r, true)).collect() },
    };
    ChainMap::new(b.clone(), c, explicit, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PresentedGroup;

    fn g(s: &str) -> PresentedGroup {
        PresentedGroup::parse(s).unwrap()
    }

    #[test]
    fn cone_of_identity_on_stalk() {
        let z = g("Z");
        let c = ChainComplex::stalk(&z, 0);
        let cone = ChainMap::identity(&c).cone().unwrap();
        assert!(cone.validate());
        assert_eq!(cone.window(), Some((-1, 0)));
        assert!(cone.object(-1).is_isomorphic(&z));
        assert!(cone.diff(-1).matrix().is_identity());
    }

    #[test]
    fn cone_of_zero_map_is_sum() {
        let z = g("Z");
        let a = ChainComplex::bounded(0, vec![z.clone(), z.clone()], vec![GroupMorphism::scalar(&z, 2)]).unwrap();
        let cone = ChainMap::zero(&a, &a).cone().unwrap();
        let sum = a.shift(1).direct_sum(&a);
        for n in -2..=2 {
            assert!(cone.object(n).is_isomorphic(&sum.object(n)));
            assert_eq!(cone.diff(n).matrix(), sum.diff(n).matrix());
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let z = g("Z");
        let a = ChainComplex::bounded(0, vec![z.clone(), z.clone()], vec![GroupMorphism::scalar(&z, 2)]).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert(0, GroupMorphism::identity(&z));
        let f = ChainMap::bounded(&a, &a, comps).unwrap();
        assert!(!f.validate());
        assert!(matches!(f.cone(), Err(Error::NotChainMap(_))));
    }

    #[test]
    fn periodic_cone_validates() {
        let z4 = g("Z/4");
        let p = ChainComplex::periodic(vec![z4.clone()], vec![GroupMorphism::scalar(&z4, 2)]).unwrap();
        let cone = ChainMap::identity(&p).cone().unwrap();
        assert_eq!(cone.period(), Some(1));
        assert!(cone.validate());
        let d = cone.diff(5);
        assert_eq!(d.matrix(), &IntMatrix::from_rows(&[[-2, 1], [0, 2]]));
    }

    #[test]
    fn composition() {
        let z = g("Z");
        let c = ChainComplex::stalk(&z, 0);
        let mut comps = BTreeMap::new();
        comps.insert(0, GroupMorphism::scalar(&z, 3));
        let f = ChainMap::bounded(&c, &c, comps).unwrap();
        let ff = f.then(&f).unwrap();
        assert!(ff.component(0).equals(&GroupMorphism::scalar(&z, 9)));
        assert!(ChainMap::identity(&c).then(&f).unwrap().equals(&f));
    }
}
