//! Resolutions by subcategory objects, resolution dimension, and the
//! replacement, domination and padding constructions.

mod dominate;
mod pad;
mod replace;

use serde::Serialize;

use crate::complex::{is_acyclic, AcyclicityCertificate, ChainComplex, ChainMap};
use crate::conflation::ConflationStructure;
use crate::error::{Error, Result};
use crate::group::{kernel, GroupMorphism, PresentedGroup};
use crate::subcat::Subcategory;

pub use dominate::{dominate_resolutions, Domination, KernelLevel};
pub use pad::{complement_for_degree, pad_to_relative_acyclic, Complement, NullHomotopy, Padding};
pub use replace::{
    replace_bounded, replace_bounded_above, unbounded_replace_window, Replacement, Stage, StageKind, WindowReplacement,
};

/// Kernel-cokernel pairs of the ambient category of `sub`.
pub fn ambient_structure(sub: &Subcategory) -> ConflationStructure {
    ConflationStructure::of_ambient(sub.ambient())
}

/// `0 → A^{−n} → … → A^0 → E → 0` with `A^i` members.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub subcategory: String,
    pub target: PresentedGroup,
    /// `terms[k]` is `A^{−k}`.
    pub terms: Vec<PresentedGroup>,
    /// `diffs[k − 1]` is `d^{−k}: A^{−k} → A^{−k+1}`.
    pub diffs: Vec<GroupMorphism>,
    /// `A^0 ↠ E`
    pub augmentation: GroupMorphism,
    pub certificate: Option<AcyclicityCertificate>,
}

impl Resolution {
    /// Builds and certifies a resolution from its terms.
    pub fn new(sub: &Subcategory, augmentation: GroupMorphism, diffs: Vec<GroupMorphism>) -> Result<Self> {
        let mut terms = vec![augmentation.source().clone()];
        for (k, d) in diffs.iter().enumerate() {
            if !d.target().same_presentation(&terms[k]) {
                return Err(Error::DimensionMismatch(format!("differential {} has the wrong target", -(k as i64) - 1)));
            }
            terms.push(d.source().clone());
        }
        let mut r = Resolution {
            subcategory: sub.name().to_string(),
            target: augmentation.target().clone(),
            terms,
            diffs,
            augmentation,
            certificate: None,
        };
        r.certificate = is_acyclic(&r.augmented(), &ambient_structure(sub), None);
        Ok(r)
    }

    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// `A^k` for `k ≤ 0`, zero below the resolution.
    pub fn term(&self, k: i64) -> PresentedGroup {
        if k > 0 || -k as usize >= self.terms.len() {
            PresentedGroup::zero()
        } else {
            self.terms[(-k) as usize].clone()
        }
    }

    /// `d^k` for `k ≤ 0`, with `d^0` the augmentation.
    pub fn diff(&self, k: i64) -> GroupMorphism {
        if k == 0 {
            return self.augmentation.clone();
        }
        match self.diffs.get((-k - 1) as usize) {
            Some(d) if k < 0 => d.clone(),
            _ => GroupMorphism::zero(&self.term(k), &self.term(k + 1)),
        }
    }

    /// `A^{−n} → … → A^0` in degrees `−n..=0`.
    pub fn complex(&self) -> ChainComplex {
        let n = self.length() as i64;
        let objects = (-n..=0).map(|k| self.term(k)).collect();
        let diffs = (-n..0).map(|k| self.diff(k)).collect();
        ChainComplex::bounded(-n, objects, diffs).expect("resolution complex")
    }

    /// The complex with `E` appended in degree 1.
    pub fn augmented(&self) -> ChainComplex {
        let n = self.length() as i64;
        let objects = (-n..=1).map(|k| if k == 1 { self.target.clone() } else { self.term(k) }).collect();
        let diffs = (-n..=0).map(|k| self.diff(k)).collect();
        ChainComplex::bounded(-n, objects, diffs).expect("augmented resolution")
    }

    /// The augmentation as a chain map to `E` concentrated in degree 0.
    pub fn to_stalk(&self) -> ChainMap {
        let stalk = ChainComplex::stalk(&self.target, 0);
        let comps = [(0, self.augmentation.clone())].into_iter().collect();
        ChainMap::bounded(&self.complex(), &stalk, comps).expect("augmentation map")
    }

    /// `ker d^k ↣ A^k`.
    pub fn kernel(&self, k: i64) -> (PresentedGroup, GroupMorphism) {
        kernel(&self.diff(k))
    }

    pub fn verify(&self, sub: &Subcategory) -> bool {
        self.terms.iter().all(|t| sub.member(t))
            && self.augmentation.is_epi()
            && self.certificate.as_ref().is_some_and(|c| c.replays(&self.augmented(), &ambient_structure(sub), None))
    }
}

/// One step of the kernel tower: `A^{−k} ↠ K_{k−1}` and `K_k ↣ A^{−k}`,
/// where `K_{−1} = E`.
#[derive(Clone, Debug, Serialize)]
pub struct TowerStep {
    pub cover: GroupMorphism,
    pub kernel: GroupMorphism,
    pub kernel_member: bool,
}

/// Covers and kernels, repeated until a kernel is a member or `steps`
/// covers have been taken.
pub fn kernel_tower(sub: &Subcategory, e: &PresentedGroup, steps: usize) -> Result<Vec<TowerStep>> {
    let mut out = Vec::new();
    let mut current = e.clone();
    for _ in 0..=steps {
        let cover = sub.cover_or_identity(&current)?;
        let (k, incl) = kernel(&cover);
        let kernel_member = sub.member(&k);
        out.push(TowerStep { cover, kernel: incl, kernel_member });
        if kernel_member {
            break;
        }
        current = k;
    }
    Ok(out)
}

/// Iterated covers and kernels; stops as soon as a kernel is a member.
pub fn resolve_object(sub: &Subcategory, e: &PresentedGroup, max_len: usize) -> Result<Resolution> {
    let tower = kernel_tower(sub, e, max_len)?;
    let last = tower.last().expect("tower is never empty");
    if !last.kernel_member {
        return Err(Error::DepthExceeded { max_len });
    }
    resolution_from_tower(sub, &tower)
}

fn resolution_from_tower(sub: &Subcategory, tower: &[TowerStep]) -> Result<Resolution> {
    let augmentation = tower[0].cover.clone();
    let mut diffs = Vec::new();
    for i in 1..tower.len() {
        diffs.push(tower[i].cover.then(&tower[i - 1].kernel));
    }
    let last = tower.last().unwrap();
    if !last.kernel.source().is_trivial() {
        diffs.push(last.kernel.clone());
    }
    Resolution::new(sub, augmentation, diffs)
}

/// A resolution of `E` built from an explicit deflation `A^0 ↠ E` and
/// the chosen covers below it.
pub fn resolve_from(sub: &Subcategory, augmentation: &GroupMorphism, max_len: usize) -> Result<Resolution> {
    let (k, incl) = kernel(augmentation);
    let mut diffs = Vec::new();
    if !sub.member(&k) {
        let rest = resolve_object(sub, &k, max_len.saturating_sub(1))?;
        diffs.push(rest.augmentation.then(&incl));
        diffs.extend(rest.diffs.iter().cloned());
    } else if !k.is_trivial() {
        diffs.push(incl);
    }
    Resolution::new(sub, augmentation.clone(), diffs)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResdimValue {
    Exact { n: usize, justification: String, resolution: Box<Resolution> },
    UpperBound { n: usize, resolution: Box<Resolution> },
    /// The kernel tower returned to an earlier isomorphism class.
    InfiniteEvidence { reason: String, first: usize, repeat: usize },
    /// No member kernel and no repetition within the bound.
    Undetermined { searched: usize },
}

impl ResdimValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            ResdimValue::Exact { n, .. } | ResdimValue::UpperBound { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn resolution(&self) -> Option<&Resolution> {
        match self {
            ResdimValue::Exact { resolution, .. } | ResdimValue::UpperBound { resolution, .. } => Some(resolution),
            _ => None,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            ResdimValue::Exact { n, .. } => format!("exact({n})"),
            ResdimValue::UpperBound { n, .. } => format!("upper-bound({n})"),
            ResdimValue::InfiniteEvidence { reason, .. } => format!("infinite-evidence({reason})"),
            ResdimValue::Undetermined { searched } => format!("undetermined(searched {searched})"),
        }
    }
}

/// How far back the kernel tower is compared for repetitions.
const CYCLE_WINDOW: usize = 8;

pub fn resdim(sub: &Subcategory, e: &PresentedGroup, bound: usize) -> Result<ResdimValue> {
    if let Some(n) = sub.characterized_resdim(e) {
        let resolution = resolve_object(sub, e, n)?;
        let justification = if n == 0 {
            format!("{} is a member of {}", e.label(), sub.name())
        } else {
            format!("{} is not a member and {} has resdim ≤ {n} everywhere", e.label(), sub.name())
        };
        return Ok(ResdimValue::Exact { n: resolution.length(), justification, resolution: Box::new(resolution) });
    }
    let tower = kernel_tower(sub, e, bound)?;
    if tower.last().is_some_and(|s| s.kernel_member) {
        let resolution = resolution_from_tower(sub, &tower)?;
        return Ok(ResdimValue::UpperBound { n: resolution.length(), resolution: Box::new(resolution) });
    }
    let mut seen: Vec<PresentedGroup> = vec![e.clone()];
    for step in &tower {
        let k = step.kernel.source().clone();
        let start = seen.len().saturating_sub(CYCLE_WINDOW);
        if let Some(j) = (start..seen.len()).find(|&j| seen[j].is_isomorphic(&k)) {
            let repeat = seen.len();
            return Ok(ResdimValue::InfiniteEvidence {
                reason: format!("kernel tower repeats {} (steps {j} and {repeat})", k.label()),
                first: j,
                repeat,
            });
        }
        seen.push(k);
    }
    Ok(ResdimValue::Undetermined { searched: bound })
}
