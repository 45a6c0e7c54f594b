//! Sample-based certification of the deflation-exact axioms R0–R3 and R3⁺.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::conflation::{ConflationStructure, StructureKind};
use crate::error::{Error, Result};
use crate::group::{biproduct, copair, kernel, pullback, GroupMorphism, PresentedGroup};
use crate::sample::{self, random_deflation, random_deflation_onto, random_object, SampleConfig};
use crate::subcat::{Closure, Justification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    R0,
    R1,
    R2,
    R3,
    R3Plus,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::R0, Axiom::R1, Axiom::R2, Axiom::R3, Axiom::R3Plus];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::R0 => "R0",
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
            Axiom::R3 => "R3",
            Axiom::R3Plus => "R3+",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Axiom::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| Error::UnknownName(s.into()))
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Axiom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AxiomStatus {
    /// Follows from registered closure data; samples were still run.
    Proved { justification: String, samples: usize },
    CertifiedOnSample { samples: usize, vacuous: usize },
    Counterexample { witness: Value, seed: u64, index: u64, size: usize },
}

impl AxiomStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, AxiomStatus::Counterexample { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    #[serde(flatten)]
    pub status: AxiomStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub structure: String,
    pub budget: usize,
    pub seed: u64,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status.passed())
    }

    pub fn get(&self, a: Axiom) -> Option<&AxiomStatus> {
        self.results.iter().find(|r| r.axiom == a).map(|r| &r.status)
    }
}

enum Outcome {
    Holds,
    Vacuous,
    Violated(Value),
}

const SIZES: usize = 4;

/// Checks R0–R3⁺ on `budget` samples per axiom.
///
/// Samples run in parallel; each draws from its own seeded stream, so the
/// report is a function of `(structure, budget, seed)` alone.
pub fn check_axioms(s: &ConflationStructure, budget: usize, seed: u64) -> AxiomReport {
    let cfg = config_for(s);
    let results = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomResult { axiom, status: check_one(s, &cfg, axiom, budget, seed) })
        .collect();
    AxiomReport { structure: s.name.clone(), budget, seed, results }
}

fn config_for(s: &ConflationStructure) -> SampleConfig {
    match &s.kind {
        StructureKind::Induced(sub) => match sub.kind() {
            crate::subcat::SubcatKind::Isbell { p } => SampleConfig::with_prime(*p),
            _ => SampleConfig::default(),
        },
        _ => SampleConfig::default(),
    }
}

fn check_one(s: &ConflationStructure, cfg: &SampleConfig, axiom: Axiom, budget: usize, seed: u64) -> AxiomStatus {
    let outcomes: Vec<(u64, usize, Outcome)> = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let size = 1 + (i as usize % SIZES);
            (i, size, run_sample(s, cfg, axiom, seed, i, size))
        })
        .collect();
    let vacuous = outcomes.iter().filter(|(_, _, o)| matches!(o, Outcome::Vacuous)).count();
    if let Some((i, size, Outcome::Violated(w))) = outcomes.into_iter().find(|(_, _, o)| matches!(o, Outcome::Violated(_))) {
        let (index, size, witness) = shrink(s, cfg, axiom, seed, i, size, w);
        return AxiomStatus::Counterexample { witness, seed, index, size };
    }
    if let StructureKind::Induced(sub) = &s.kind {
        if sub.declares(Closure::SubobjectClosed, Justification::ProvedByCharacterization)
            || sub.declares(Closure::DeflationClosed, Justification::ProvedByCharacterization)
        {
            return AxiomStatus::Proved {
                justification: format!("{} is deflation-closed in an abelian category", sub.name()),
                samples: budget,
            };
        }
    }
    AxiomStatus::CertifiedOnSample { samples: budget, vacuous }
}

/// Re-samples at smaller sizes and keeps the smallest violating witness.
fn shrink(
    s: &ConflationStructure,
    cfg: &SampleConfig,
    axiom: Axiom,
    seed: u64,
    index: u64,
    size: usize,
    witness: Value,
) -> (u64, usize, Value) {
    let mut best = (index, size, witness);
    let mut best_weight = witness_weight(&best.2);
    for sz in 0..=size {
        for k in 0..32u64 {
            let i = (1 << 40) + ((sz as u64) << 16) + k;
            if let Outcome::Violated(w) = run_sample(s, cfg, axiom, seed, i, sz) {
                let wt = witness_weight(&w);
                if wt < best_weight {
                    best = (i, sz, w);
                    best_weight = wt;
                }
            }
        }
        if best.1 <= sz {
            break;
        }
    }
    best
}

fn witness_weight(w: &Value) -> (usize, usize) {
    (witness_size(w), w.to_string().len())
}

fn run_sample(s: &ConflationStructure, cfg: &SampleConfig, axiom: Axiom, seed: u64, index: u64, size: usize) -> Outcome {
    let mut rng = sample::rng_for(seed, axiom.stream(), index);
    let rng = &mut rng;
    match axiom {
        Axiom::R0 => {
            let x = random_object(rng, s, cfg, size);
            let w = json!({"axiom": "R0", "object": x.to_json()});
            verdict(eval(s, axiom, &w), w)
        }
        Axiom::R1 => {
            let Some(q) = random_deflation(rng, s, cfg, size) else { return Outcome::Vacuous };
            let Some(p) = random_deflation_onto(rng, s, q.source(), cfg, size) else { return Outcome::Vacuous };
            let w = json!({"axiom": "R1", "p": p.to_json(), "q": q.to_json()});
            verdict(eval(s, axiom, &w), w)
        }
        Axiom::R2 => {
            let Some(p) = random_deflation(rng, s, cfg, size) else { return Outcome::Vacuous };
            let z2 = random_object(rng, s, cfg, size);
            let t = sample::random_morphism(rng, &z2, p.target(), cfg);
            let w = json!({"axiom": "R2", "p": p.to_json(), "t": t.to_json()});
            verdict(eval(s, axiom, &w), w)
        }
        Axiom::R3 | Axiom::R3Plus => {
            // B = A ⊕ B₀, i the inclusion, p = [q r]: then p∘i = q is a deflation.
            let Some(q) = random_deflation(rng, s, cfg, size) else { return Outcome::Vacuous };
            let b0 = random_object(rng, s, cfg, size);
            let r = sample::random_morphism(rng, &b0, q.target(), cfg);
            let sum = biproduct(&[q.source().clone(), b0]);
            let p = copair(&q, &r);
            let w = json!({"axiom": axiom.name(), "i": sum.inj[0].to_json(), "p": p.to_json()});
            verdict(eval(s, axiom, &w), w)
        }
    }
}

fn verdict(r: Result<Option<bool>>, w: Value) -> Outcome {
    match r {
        Ok(Some(true)) => Outcome::Holds,
        Ok(None) => Outcome::Vacuous,
        Ok(Some(false)) | Err(_) => Outcome::Violated(w),
    }
}

/// Evaluates a witness: `Some(true)` if the axiom instance holds, `None`
/// if its hypotheses fail.
fn eval(s: &ConflationStructure, axiom: Axiom, w: &Value) -> Result<Option<bool>> {
    let m = |k: &str| -> Result<GroupMorphism> {
        GroupMorphism::from_json(w.get(k).ok_or_else(|| Error::Parse(format!("witness needs \"{k}\"")))?)
    };
    match axiom {
        Axiom::R0 => {
            let x = PresentedGroup::from_json(w.get("object").ok_or_else(|| Error::Parse("witness needs object".into()))?)?;
            if !s.contains_object(&x) {
                return Ok(None);
            }
            Ok(Some(s.is_deflation(&GroupMorphism::zero(&x, &PresentedGroup::zero()))))
        }
        Axiom::R1 => {
            let (p, q) = (m("p")?, m("q")?);
            if !s.is_deflation(&p) || !s.is_deflation(&q) {
                return Ok(None);
            }
            Ok(Some(s.is_deflation(&p.try_then(&q)?)))
        }
        Axiom::R2 => {
            let (p, t) = (m("p")?, m("t")?);
            if !s.is_deflation(&p) || !s.contains_object(t.source()) {
                return Ok(None);
            }
            let pb = pullback(&p, &t);
            Ok(Some(s.contains_object(&pb.object) && s.is_deflation(&pb.right)))
        }
        Axiom::R3 | Axiom::R3Plus => {
            let (i, p) = (m("i")?, m("p")?);
            let pi = i.try_then(&p)?;
            if !s.contains_object(i.source()) || !s.contains_object(p.source()) || !s.is_deflation(&pi) {
                return Ok(None);
            }
            if axiom == Axiom::R3 && !s.contains_object(&kernel(&p).0) {
                return Ok(None);
            }
            Ok(Some(s.is_deflation(&p)))
        }
    }
}

/// Re-evaluates a counterexample witness; `true` iff it still violates its
/// axiom.
pub fn replay_witness(s: &ConflationStructure, witness: &Value) -> Result<bool> {
    let name = witness.get("axiom").and_then(Value::as_str).ok_or_else(|| Error::Parse("witness needs axiom".into()))?;
    let axiom = Axiom::from_name(name)?;
    Ok(eval(s, axiom, witness)? == Some(false))
}

/// Total generator count of the objects mentioned in a witness.
pub fn witness_size(witness: &Value) -> usize {
    fn walk(v: &Value, acc: &mut usize) {
        match v {
            Value::Object(m) => {
                if let Some(g) = m.get("generators").and_then(Value::as_u64) {
                    *acc += g as usize;
                }
                m.values().for_each(|x| walk(x, acc));
            }
            Value::Array(a) => a.iter().for_each(|x| walk(x, acc)),
            _ => {}
        }
    }
    let mut n = 0;
    walk(witness, &mut n);
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_structure_passes() {
        let r = check_axioms(&ConflationStructure::abelian(), 40, 7);
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn isbell_structure_is_proved() {
        let r = check_axioms(&ConflationStructure::from_name("isbell:2").unwrap(), 40, 7);
        assert!(r.all_passed(), "{r:?}");
        assert!(matches!(r.get(Axiom::R2), Some(AxiomStatus::Proved { .. })));
    }

    #[test]
    fn broken_demo_fails_r0_and_replays() {
        let s = ConflationStructure::broken_demo();
        let r = check_axioms(&s, 20, 1);
        let Some(AxiomStatus::Counterexample { witness, .. }) = r.get(Axiom::R0) else { panic!("{r:?}") };
        assert!(replay_witness(&s, witness).unwrap());
        assert!(!replay_witness(&ConflationStructure::abelian(), witness).unwrap());
    }

    #[test]
    fn deterministic_reports() {
        let s = ConflationStructure::broken_demo();
        let a = serde_json::to_string(&check_axioms(&s, 12, 3)).unwrap();
        let b = serde_json::to_string(&check_axioms(&s, 12, 3)).unwrap();
        assert_eq!(a, b);
    }
}
