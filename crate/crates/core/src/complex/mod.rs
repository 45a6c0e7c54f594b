//! ℤ-graded cochain complexes of presented groups.
//!
//! A complex is an explicit window of degrees `[lo, hi]` together with a
//! tail describing every other degree: either zero (bounded complexes) or a
//! periodic pattern (periodic complexes, possibly with a finite patch).
//! Differentials raise degree by one.

mod acyclic;
mod map;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{biproduct, rows_json, GroupMorphism, PresentedGroup};
use crate::linalg::IntMatrix;

pub use acyclic::{
    analyze_acyclicity, cone_image_conflations, homology, is_acyclic, is_quasi_iso, AcyclicityAnalysis,
    AcyclicityCertificate, ConeImageConflations, DegreeCertificate, QuasiIsoEvidence,
};
pub use map::{cone_inclusion, ChainMap, MapTail};

#[derive(Clone)]
pub enum Tail {
    Zero,
    Periodic { objects: Vec<PresentedGroup>, diffs: Vec<GroupMorphism> },
}

impl Tail {
    pub fn period(&self) -> Option<usize> {
        match self {
            Tail::Zero => None,
            Tail::Periodic { objects, .. } => Some(objects.len()),
        }
    }
}

#[derive(Clone)]
pub struct ChainComplex {
    /// Explicit degrees `lo..=hi`; empty when `lo > hi`.
    lo: i64,
    hi: i64,
    objects: Vec<PresentedGroup>,
    /// Differentials `d^n` for `n ∈ [lo − 1, hi]`.
    diffs: BTreeMap<i64, GroupMorphism>,
    tail: Tail,
}

/// How a complex is supported, for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Support {
    Window { lo: i64, hi: i64 },
    Periodic { period: usize },
    Patched { lo: i64, hi: i64, period: usize },
}

impl ChainComplex {
    /// Bounded complex with `objects[k]` in degree `lo + k` and `diffs[k]`
    /// the differential out of degree `lo + k`.
    pub fn bounded(lo: i64, objects: Vec<PresentedGroup>, diffs: Vec<GroupMorphism>) -> Result<Self> {
        if objects.is_empty() {
            return Ok(Self::zero());
        }
        if diffs.len() + 1 != objects.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} objects need {} differentials, got {}",
                objects.len(),
                objects.len() - 1,
                diffs.len()
            )));
        }
        let hi = lo + objects.len() as i64 - 1;
        let mut map = BTreeMap::new();
        for (k, d) in diffs.into_iter().enumerate() {
            map.insert(lo + k as i64, d);
        }
        let c = Self::assemble(lo, hi, objects, map, Tail::Zero);
        c.check_typing()?;
        Ok(c)
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 1, hi: 0, objects: vec![], diffs: BTreeMap::new(), tail: Tail::Zero }
    }

    /// `X` concentrated in degree `n`.
    pub fn stalk(x: &PresentedGroup, n: i64) -> Self {
        Self::bounded(n, vec![x.clone()], vec![]).expect("stalk complex")
    }

    /// Periodic complex; `diffs[r]` maps `objects[r] → objects[(r+1) mod T]`.
    pub fn periodic(objects: Vec<PresentedGroup>, diffs: Vec<GroupMorphism>) -> Result<Self> {
        let t = objects.len();
        if t == 0 || diffs.len() != t {
            return Err(Error::DimensionMismatch("periodic complex needs T ≥ 1 objects and T differentials".into()));
        }
        let c = ChainComplex { lo: 1, hi: 0, objects: vec![], diffs: BTreeMap::new(), tail: Tail::Periodic { objects, diffs } };
        c.check_typing()?;
        Ok(c)
    }

    /// Replaces degrees `lo..=hi` of `base` (which must have an empty
    /// explicit window) and the differentials touching them.
    pub fn patched(base: &ChainComplex, lo: i64, objects: Vec<PresentedGroup>, diffs: BTreeMap<i64, GroupMorphism>) -> Result<Self> {
        let hi = lo + objects.len() as i64 - 1;
        let mut all = BTreeMap::new();
        for n in lo - 1..=hi {
            let d = diffs.get(&n).cloned().ok_or_else(|| Error::DimensionMismatch(format!("missing differential {n}")))?;
            all.insert(n, d);
        }
        let c = Self::assemble(lo, hi, objects, all, base.tail.clone());
        c.check_typing()?;
        Ok(c)
    }

    fn assemble(lo: i64, hi: i64, objects: Vec<PresentedGroup>, mut diffs: BTreeMap<i64, GroupMorphism>, tail: Tail) -> Self {
        let mut c = ChainComplex { lo, hi, objects, diffs: BTreeMap::new(), tail };
        if lo <= hi {
            for n in [lo - 1, hi] {
                diffs.entry(n).or_insert_with(|| GroupMorphism::zero(&c.object(n), &c.object(n + 1)));
            }
        }
        c.diffs = diffs;
        c
    }

    /// Builds a complex degree by degree. `object(n, tail)` and
    /// `diff(n, tail)` are asked for the explicit window and, if `period`
    /// is set, for the residues `0..period` of the tail.
    pub(crate) fn build(
        window: Option<(i64, i64)>,
        period: Option<usize>,
        object: &dyn Fn(i64, bool) -> PresentedGroup,
        diff: &dyn Fn(i64, bool) -> GroupMorphism,
    ) -> Self {
        let tail = match period {
            None => Tail::Zero,
            Some(t) => Tail::Periodic {
                objects: (0..t as i64).map(|r| object(r, true)).collect(),
                diffs: (0..t as i64).map(|r| diff(r, true)).collect(),
            },
        };
        let (lo, hi) = window.unwrap_or((1, 0));
        let objects = (lo..=hi).map(|n| object(n, false)).collect();
        let mut diffs = BTreeMap::new();
        if lo <= hi {
            for n in lo - 1..=hi {
                diffs.insert(n, diff(n, false));
            }
        }
        ChainComplex { lo, hi, objects, diffs, tail }
    }

    /// Replaces the given objects and differentials, keeping the tail.
    pub fn with_changes(&self, objects: &BTreeMap<i64, PresentedGroup>, diffs: &BTreeMap<i64, GroupMorphism>) -> Result<Self> {
        let span = |keys: Vec<i64>| -> Option<(i64, i64)> { Some((*keys.iter().min()?, *keys.iter().max()?)) };
        let touched = span(objects.keys().copied().chain(diffs.keys().flat_map(|&n| [n, n + 1])).collect());
        let window = union_window(self.window(), touched);
        let c = Self::build(
            window,
            self.period(),
            &|n, tail| if tail { self.tail_object(n) } else { objects.get(&n).cloned().unwrap_or_else(|| self.object(n)) },
            &|n, tail| if tail { self.tail_diff(n) } else { diffs.get(&n).cloned().unwrap_or_else(|| self.diff(n)) },
        );
        c.check_typing()?;
        Ok(c)
    }

    fn check_typing(&self) -> Result<()> {
        for n in self.check_range() {
            let d = self.diff(n);
            let (a, b) = (self.object(n), self.object(n + 1));
            if d.matrix().shape() != (a.generators(), b.generators()) {
                return Err(Error::DimensionMismatch(format!("differential {n} has the wrong shape")));
            }
        }
        Ok(())
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        (self.lo <= self.hi).then_some((self.lo, self.hi))
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn period(&self) -> Option<usize> {
        self.tail.period()
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.tail, Tail::Zero)
    }

    pub fn support(&self) -> Support {
        match (self.window(), self.period()) {
            (Some((lo, hi)), None) => Support::Window { lo, hi },
            (None, None) => Support::Window { lo: 0, hi: -1 },
            (None, Some(period)) => Support::Periodic { period },
            (Some((lo, hi)), Some(period)) => Support::Patched { lo, hi, period },
        }
    }

    fn in_window(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn tail_object(&self, n: i64) -> PresentedGroup {
        match &self.tail {
            Tail::Zero => PresentedGroup::zero(),
            Tail::Periodic { objects, .. } => objects[n.rem_euclid(objects.len() as i64) as usize].clone(),
        }
    }

    pub fn tail_diff(&self, n: i64) -> GroupMorphism {
        match &self.tail {
            Tail::Zero => GroupMorphism::zero(&PresentedGroup::zero(), &PresentedGroup::zero()),
            Tail::Periodic { diffs, .. } => diffs[n.rem_euclid(diffs.len() as i64) as usize].clone(),
        }
    }

    pub fn object(&self, n: i64) -> PresentedGroup {
        if self.in_window(n) {
            self.objects[(n - self.lo) as usize].clone()
        } else {
            self.tail_object(n)
        }
    }

    /// `d^n: X^n → X^{n+1}`.
    pub fn diff(&self, n: i64) -> GroupMorphism {
        match self.diffs.get(&n) {
            Some(d) => d.clone(),
            None => self.tail_diff(n),
        }
    }

    /// Degrees that determine the whole complex: every condition on
    /// `d^{n+1} ∘ d^n` or on exactness at `n` is decided by some `n` here.
    pub fn check_range(&self) -> std::ops::RangeInclusive<i64> {
        match (self.window(), self.period()) {
            (None, None) => std::ops::RangeInclusive::new(1, 0),
            (Some((lo, hi)), None) => lo - 1..=hi + 1,
            (None, Some(t)) => 0..=t as i64 - 1,
            (Some((lo, hi)), Some(t)) => lo - t as i64 - 1..=hi + t as i64 + 1,
        }
    }

    /// Every differential is well defined and `d ∘ d = 0`.
    pub fn validate(&self) -> bool {
        self.check_range().all(|n| {
            let d = self.diff(n);
            let e = self.diff(n + 1);
            d.is_well_defined()
                && e.is_well_defined()
                && d.matrix().cols() == e.matrix().rows()
                && d.then(&e).is_zero()
        })
    }

    /// `X[k]^n = X^{n+k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = |d: GroupMorphism| if k.rem_euclid(2) == 1 { d.neg() } else { d };
        let window = self.window().map(|(lo, hi)| (lo - k, hi - k));
        Self::build(
            window,
            self.period(),
            &|n, tail| if tail { self.tail_object(n + k) } else { self.object(n + k) },
            &|n, tail| sign(if tail { self.tail_diff(n + k) } else { self.diff(n + k) }),
        )
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let window = union_window(self.window(), other.window());
        let period = lcm_period(self.period(), other.period());
        Self::build(
            window,
            period,
            &|n, tail| {
                let (a, b) = if tail { (self.tail_object(n), other.tail_object(n)) } else { (self.object(n), other.object(n)) };
                biproduct(&[a, b]).object
            },
            &|n, tail| {
                let (d, e) = if tail { (self.tail_diff(n), other.tail_diff(n)) } else { (self.diff(n), other.diff(n)) };
                crate::group::sum_map(&d, &e)
            },
        )
    }

    /// Brutal truncation keeping degrees `≥ from` of a bounded window.
    pub fn brutal_truncation_above(&self, from: i64) -> Result<ChainComplex> {
        let (lo, hi) = self.window().ok_or_else(|| Error::Precondition("truncation needs an explicit window".into()))?;
        if !self.is_bounded() {
            return Err(Error::Precondition("truncation of a periodic complex".into()));
        }
        let lo = lo.max(from);
        if lo > hi {
            return Ok(Self::zero());
        }
        let objects = (lo..=hi).map(|n| self.object(n)).collect();
        let diffs = (lo..hi).map(|n| self.diff(n)).collect();
        ChainComplex::bounded(lo, objects, diffs)
    }

    /// Degrees in the explicit window with nonzero objects, for a bounded
    /// complex.
    pub fn nonzero_range(&self) -> Option<(i64, i64)> {
        let (lo, hi) = self.window()?;
        let nz: Vec<i64> = (lo..=hi).filter(|&n| !self.object(n).is_trivial()).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn to_json(&self) -> Value {
        let objs = |range: &mut dyn Iterator<Item = i64>, f: &dyn Fn(i64) -> PresentedGroup| -> Value {
            Value::Object(range.map(|n| (n.to_string(), f(n).to_json())).collect())
        };
        let diffs = |range: &mut dyn Iterator<Item = i64>, f: &dyn Fn(i64) -> GroupMorphism| -> Value {
            Value::Object(range.map(|n| (n.to_string(), rows_json(f(n).matrix()))).collect())
        };
        let tail_json = |t: usize| {
            json!({
                "period": t,
                "objects": objs(&mut (0..t as i64), &|n| self.tail_object(n)),
                "differentials": diffs(&mut (0..t as i64), &|n| self.tail_diff(n)),
            })
        };
        match (self.window(), self.period()) {
            (None, Some(t)) => {
                let mut v = tail_json(t);
                v["window"] = json!({"period": t});
                v
            }
            (w, p) => {
                let (lo, hi) = w.unwrap_or((0, -1));
                let mut v = json!({
                    "window": [lo, hi],
                    "objects": objs(&mut (lo..=hi), &|n| self.object(n)),
                    "differentials": diffs(&mut (lo..hi), &|n| self.diff(n)),
                });
                if let Some(t) = p {
                    v["boundary_differentials"] = diffs(&mut [lo - 1, hi].into_iter(), &|n| self.diff(n));
                    v["tail"] = tail_json(t);
                }
                v
            }
        }
    }

    /// Parses `{"window": [a, b] | {"period": T}, "objects": {...},
    /// "differentials": {...}}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let window = v.get("window").ok_or_else(|| Error::Parse("complex needs \"window\"".into()))?;
        let objects = |v: &Value, range: &mut dyn Iterator<Item = i64>| -> Result<Vec<PresentedGroup>> {
            range
                .map(|n| {
                    v.get("objects")
                        .and_then(|o| o.get(n.to_string()))
                        .map(PresentedGroup::from_json)
                        .unwrap_or_else(|| Ok(PresentedGroup::zero()))
                })
                .collect()
        };
        let diff = |v: &Value, key: &str, n: i64, a: &PresentedGroup, b: &PresentedGroup| -> Result<GroupMorphism> {
            match v.get(key).and_then(|o| o.get(n.to_string())) {
                None => Ok(GroupMorphism::zero(a, b)),
                Some(m) => {
                    let m = IntMatrix::from_json(m, Some(b.generators())).map_err(Error::Parse)?;
                    let m = if m.rows() == 0 && a.generators() > 0 { IntMatrix::zeros(a.generators(), b.generators()) } else { m };
                    GroupMorphism::new(a.clone(), b.clone(), m)
                }
            }
        };
        let parse_tail = |t: &Value| -> Result<ChainComplex> {
            let period = t.get("period").and_then(Value::as_u64).ok_or_else(|| Error::Parse("bad period".into()))? as i64;
            if period < 1 {
                return Err(Error::Parse("period must be ≥ 1".into()));
            }
            let objs = objects(t, &mut (0..period))?;
            let ds = (0..period)
                .map(|r| diff(t, "differentials", r, &objs[r as usize], &objs[((r + 1) % period) as usize]))
                .collect::<Result<Vec<_>>>()?;
            ChainComplex::periodic(objs, ds)
        };
        if window.get("period").is_some() {
            let mut t = v.clone();
            t["period"] = window["period"].clone();
            return parse_tail(&t);
        }
        let w = window.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("window must be [a, b]".into()))?;
        let lo = w[0].as_i64().ok_or_else(|| Error::Parse("bad window".into()))?;
        let hi = w[1].as_i64().ok_or_else(|| Error::Parse("bad window".into()))?;
        let objs = objects(v, &mut (lo..=hi))?;
        match v.get("tail") {
            None => {
                if lo > hi {
                    return Ok(Self::zero());
                }
                let ds = (lo..hi)
                    .map(|n| diff(v, "differentials", n, &objs[(n - lo) as usize], &objs[(n - lo + 1) as usize]))
                    .collect::<Result<Vec<_>>>()?;
                ChainComplex::bounded(lo, objs, ds)
            }
            Some(t) => {
                let base = parse_tail(t)?;
                let obj = |n: i64| if (lo..=hi).contains(&n) { objs[(n - lo) as usize].clone() } else { base.object(n) };
                let mut ds = BTreeMap::new();
                for n in lo - 1..=hi {
                    let key = if n == lo - 1 || n == hi { "boundary_differentials" } else { "differentials" };
                    ds.insert(n, diff(v, key, n, &obj(n), &obj(n + 1))?);
                }
                ChainComplex::patched(&base, lo, objs, ds)
            }
        }
    }

    /// One line per degree in the check range.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for n in self.check_range() {
            out.push_str(&format!("  {n:>3}: {}  --{}-->\n", self.object(n).label(), self.diff(n).matrix()));
        }
        out
    }
}

pub(crate) fn union_window(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

pub(crate) fn lcm_period(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(a.lcm(&b)),
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex {:?}", self.support())?;
        f.write_str(&self.describe())
    }
}

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
