use preresolve_core::axioms::{check_axioms, AxiomStatus};
use preresolve_core::complex::{analyze_acyclicity, ChainComplex};
use preresolve_core::conflation::{verify_conflation, Ambient, Conflation};
use preresolve_core::group::{factorize, sum_map};
use preresolve_core::resolve::{
    ambient_structure, dominate_resolutions, kernel_tower, pad_to_relative_acyclic, replace_bounded,
    replace_bounded_above, resdim, resolve_object, unbounded_replace_window, Resolution,
};
use preresolve_core::sample::{random_group, rng_for, SampleConfig};
use preresolve_core::{ConflationStructure, Error, GroupMorphism, IntMatrix, PresentedGroup, Result, Subcategory};
use serde_json::{json, Value};

use crate::input::Loaded;
use crate::report::RunReport;

/// Indices at or above this come from witness shrinking.
const SHRUNK: u64 = 1 << 40;

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).unwrap_or(Value::Null)
}

pub fn check_axioms_cmd(structure: &str, budget: usize, seed: u64) -> Result<RunReport> {
    let s = ConflationStructure::from_name(structure)?;
    let mut r = RunReport::new("check-axioms", json!({ "structure": structure, "budget": budget }), seed);
    let report = check_axioms(&s, budget, seed);
    for res in &report.results {
        let detail = match &res.status {
            AxiomStatus::Proved { justification, samples } => format!("proved ({justification}; {samples} samples run)"),
            AxiomStatus::CertifiedOnSample { samples, vacuous } => {
                format!("certified on {samples} samples ({vacuous} vacuous)")
            }
            AxiomStatus::Counterexample { index, size, .. } if *index >= SHRUNK => {
                format!("counterexample, shrunk to size {size} (replay index {index})")
            }
            AxiomStatus::Counterexample { index, size, .. } => format!("counterexample at sample {index} (size {size})"),
        };
        r.verdict(res.axiom.name(), res.status.passed(), detail);
    }
    r.witness("axioms", to_value(&report));
    Ok(r)
}

fn resolution_line(res: &Resolution) -> String {
    let mut out = String::from("0 → ");
    for k in (0..=res.length()).rev() {
        out.push_str(&format!("{} → ", res.term(-(k as i64)).label()));
    }
    out.push_str(&format!("{} → 0", res.target.label()));
    out
}

pub fn resolve_cmd(sub: &str, object: &Loaded<PresentedGroup>, max_len: usize, trace: bool) -> Result<(RunReport, String)> {
    let a = Subcategory::from_name(sub)?;
    let e = &object.value;
    let mut r = RunReport::new("resolve", json!({ "sub": sub, "object": object.reported, "max_len": max_len }), 0);
    let mut text = String::new();
    match resolve_object(&a, e, max_len) {
        Ok(res) => {
            r.verdict("resolution", res.verify(&a), format!("length {}: {}", res.length(), resolution_line(&res)));
            r.witness("resolution", to_value(&res));
        }
        Err(Error::DepthExceeded { .. }) => {
            let tower = kernel_tower(&a, e, max_len)?;
            r.verdict("resolution", false, format!("depth exceeded: no member kernel within {max_len} steps"));
            if trace {
                for (k, step) in tower.iter().enumerate() {
                    text.push_str(&format!(
                        "  step {k}: {} ↠ {}, kernel {}\n",
                        step.cover.source().label(),
                        step.cover.target().label(),
                        step.kernel.source().label()
                    ));
                }
            }
            r.witness("partial_tower", to_value(&tower));
        }
        Err(err) => return Err(err),
    }
    let d = resdim(&a, e, max_len.max(1))?;
    r.verdict("resdim", true, d.summary());
    Ok((r, text))
}

pub fn acyclic_cmd(c: &Loaded<ChainComplex>, sub: Option<&str>, structure: Option<&str>) -> Result<RunReport> {
    let a = sub.map(Subcategory::from_name).transpose()?;
    let s = match (structure, &a) {
        (Some(name), _) => ConflationStructure::from_name(name)?,
        (None, Some(a)) => ambient_structure(a),
        (None, None) => ConflationStructure::abelian(),
    };
    let mut r = RunReport::new("acyclic", json!({ "complex": c.reported, "sub": sub, "structure": structure }), 0);
    let abs = analyze_acyclicity(&c.value, &s, None);
    r.verdict("valid complex", abs.valid, if abs.valid { "d ∘ d = 0" } else { "d ∘ d ≠ 0" });
    r.verdict("absolutely acyclic", abs.acyclic(), failures(&abs));
    r.witness("absolute", to_value(&abs));
    if let Some(a) = &a {
        let rel = analyze_acyclicity(&c.value, &s, Some(a));
        r.verdict(&format!("acyclic relative to {}", a.name()), rel.acyclic(), failures(&rel));
        r.witness("relative", to_value(&rel));
    }
    Ok(r)
}

fn failures(a: &preresolve_core::complex::AcyclicityAnalysis) -> String {
    let f: Vec<String> =
        a.failures().map(|d| format!("degree {}: {}", d.degree, d.failure.clone().unwrap_or_default())).collect();
    if f.is_empty() {
        "every degree certified".into()
    } else {
        f.join("; ")
    }
}

pub fn replace_cmd(
    sub: &str,
    c: &Loaded<ChainComplex>,
    max_len: Option<usize>,
    window: Option<(i64, i64)>,
) -> Result<(RunReport, String)> {
    let a = Subcategory::from_name(sub)?;
    let inputs = json!({ "sub": sub, "complex": c.reported, "max_len": max_len, "window": window });
    let mut r = RunReport::new("replace", inputs, 0);
    let e = &c.value;
    let trace = if let Some((lo, hi)) = window {
        let w = unbounded_replace_window(&a, e, lo, hi)?;
        r.verdict("members in window", w.members_in_window, format!("degrees {lo}..={hi}"));
        r.verdict("quasi-isomorphism", w.quasi_iso, format!("{} stages", w.stages.len()));
        r.witness("replacement", to_value(&w));
        w.trace()
    } else {
        let rep = match max_len {
            Some(n) => replace_bounded_above(&a, e, n)?,
            None => replace_bounded(&a, e)?,
        };
        let span = match rep.output.nonzero_range() {
            Some((lo, hi)) => format!("nonzero in degrees {lo}..={hi}"),
            None => "zero complex".into(),
        };
        r.verdict("member terms", rep.members, span);
        r.verdict("quasi-isomorphism", rep.quasi_iso, format!("{} stages", rep.stages.len()));
        r.verdict("window growth", true, rep.window_growth.to_string());
        r.witness("replacement", to_value(&rep));
        rep.trace()
    };
    Ok((r, trace))
}

pub fn resdim_cmd(sub: &str, object: &Loaded<PresentedGroup>, bound: usize) -> Result<RunReport> {
    let a = Subcategory::from_name(sub)?;
    let mut r = RunReport::new("resdim", json!({ "sub": sub, "object": object.reported, "bound": bound }), 0);
    let d = resdim(&a, &object.value, bound)?;
    r.verdict("resdim", true, d.summary());
    r.witness("resdim", to_value(&d));
    Ok(r)
}

pub const DEMOS: [&str; 4] = ["isbell", "periodic-counterexample", "domination", "padding"];

pub fn demo_cmd(name: &str, seed: u64, complex: Option<&Loaded<ChainComplex>>, sub: &str) -> Result<RunReport> {
    match name {
        "isbell" => demo_isbell(seed),
        "periodic-counterexample" => demo_periodic(seed),
        "domination" => demo_domination(seed),
        "padding" => demo_padding(seed, complex, sub),
        other => Err(Error::UnknownName(format!("demo {other} (known: {})", DEMOS.join(", ")))),
    }
}

const ISBELL_SAMPLE: u64 = 50;

fn demo_isbell(seed: u64) -> Result<RunReport> {
    let i = Subcategory::isbell(2)?;
    let mut r = RunReport::new("demo isbell", json!({ "sub": "isbell:2", "sample": ISBELL_SAMPLE }), seed);
    let (z2, z4) = (PresentedGroup::cyclic(2), PresentedGroup::cyclic(4));
    r.verdict("membership", i.member(&z2) && !i.member(&z4), "Z/2 ∈ I, Z/4 ∉ I");
    let c = Conflation::new(
        GroupMorphism::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[[2]]))?,
        GroupMorphism::new(z4.clone(), z2.clone(), IntMatrix::from_rows(&[[1]]))?,
    )?;
    let witness_ok = verify_conflation(&ConflationStructure::abelian(), &c) && !i.member(c.middle());
    r.verdict("I not extension-closed", witness_ok, "witness Z/2 ↣ Z/4 ↠ Z/2");
    r.witness("conflation", c.to_json());
    let mut values = Vec::new();
    for n in 0..ISBELL_SAMPLE {
        let mut rng = rng_for(seed, 0, n);
        let g = random_group(&mut rng, Ambient::AllGroups, &SampleConfig::default(), 4);
        values.push((g.label(), resdim(&i, &g, 4)?.finite()));
    }
    let bounded = values.iter().all(|(_, v)| matches!(v, Some(0) | Some(1)));
    let max = values.iter().filter_map(|(_, v)| *v).max().unwrap_or(0);
    r.verdict("resdim(Ab over I) = 1 on sample", bounded && max == 1, format!("{ISBELL_SAMPLE} groups, max {max}"));
    r.witness("resdim_sample", to_value(&values));
    Ok(r)
}

fn demo_periodic(seed: u64) -> Result<RunReport> {
    let z4 = PresentedGroup::cyclic(4);
    let e = ChainComplex::periodic(vec![z4.clone()], vec![GroupMorphism::scalar(&z4, 2)])?;
    let a = Subcategory::add_ring(4)?;
    let s = ConflationStructure::killed_by(4);
    let mut r = RunReport::new("demo periodic-counterexample", json!({ "complex": e.to_json(), "sub": "add-ring:4" }), seed);
    let abs = analyze_acyclicity(&e, &s, None);
    let rel = analyze_acyclicity(&e, &s, Some(&a));
    let yn = |b: bool| if b { "yes" } else { "no" };
    r.verdict("expected yes", abs.acyclic(), format!("acyclic absolutely: {}", yn(abs.acyclic())));
    r.verdict("expected no", !rel.acyclic(), format!("acyclic rel add(Z/4): {}", yn(rel.acyclic())));
    let im = factorize(&e.diff(0)).image;
    r.verdict("images ≅ Z/2", im.is_isomorphic(&PresentedGroup::cyclic(2)), format!("im d = {}", im.label()));
    r.witness("relative", to_value(&rel));
    Ok(r)
}

fn demo_domination(seed: u64) -> Result<RunReport> {
    let i = Subcategory::isbell(2)?;
    let e = PresentedGroup::cyclic(4);
    let minimal = resolve_object(&i, &e, 2)?;
    let z = PresentedGroup::free(1);
    let aug = GroupMorphism::new(PresentedGroup::free(2), e.clone(), IntMatrix::from_rows(&[[1], [0]]))?;
    let padded = Resolution::new(&i, aug, vec![sum_map(&GroupMorphism::scalar(&z, 4), &GroupMorphism::identity(&z))])?;
    let mut r = RunReport::new("demo domination", json!({ "object": e.to_json(), "sub": "isbell:2" }), seed);
    let d = dominate_resolutions(&i, &padded, &minimal)?;
    r.verdict("B• is a resolution", d.b.verify(&i), format!("length {}", d.b.length()));
    r.verdict("triangles commute", d.triangles_commute, "B• → A• and B• → C• over id");
    r.verdict(
        "minimal-level kernel is a member",
        d.minimal_level_member,
        format!("ker d_B at level {}: {}", d.minimal_level, d.b.kernel(d.minimal_level).0.label()),
    );
    r.verdict("kernel membership propagates", d.propagation_holds, format!("{} levels", d.kernel_levels.len()));
    r.verdict("cone relatively acyclic", d.cone_relatively_acyclic, "cone(B• → A•)");
    r.witness("domination", to_value(&d));
    Ok(r)
}

fn demo_padding(seed: u64, complex: Option<&Loaded<ChainComplex>>, sub: &str) -> Result<RunReport> {
    let i = Subcategory::from_name(sub)?;
    let e = complex.map(|c| c.value.clone()).unwrap_or_else(ChainComplex::zero);
    let inputs = json!({ "complex": complex.map(|c| c.reported.clone()).unwrap_or_else(|| e.to_json()), "sub": sub });
    let mut r = RunReport::new("demo padding", inputs, seed);
    let p = pad_to_relative_acyclic(&i, &e)?;
    let zero = p.padding.window().is_none() && p.padding.period().is_none();
    let shape = if zero { "C• = 0".to_string() } else { format!("C• nonzero on {:?}", p.padding.window()) };
    r.verdict("padding computed", true, shape);
    r.verdict("null-homotopy replays", p.homotopy_replays, "h d + d h = 1");
    r.verdict(&format!("E• ⊕ C• acyclic relative to {sub}"), p.relatively_acyclic(), format!("{} complements", p.complements.len()));
    r.witness("padding", to_value(&p));
    Ok(r)
}
