//! Acyclicity certificates, homology and quasi-isomorphisms.

use rayon::prelude::*;
use serde::Serialize;

use super::{ChainComplex, ChainMap, Support};
use crate::conflation::{Conflation, ConflationStructure};
use crate::error::{Error, Result};
use crate::group::{cokernel, factor_through_mono, factorize, factorize_on_source, kernel, GroupMorphism, PresentedGroup};
use crate::linalg::IntMatrix;
use crate::subcat::Subcategory;

/// Data showing that `I^{n−1} ↣ X^n ↠ I^n` is a conflation and that
/// `ker d^n ≅ im d^{n−1}`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeCertificate {
    pub degree: i64,
    /// `X^n ↠ I^n`
    pub deflation: GroupMorphism,
    /// `I^n ↣ X^{n+1}`
    pub inflation: GroupMorphism,
    /// `ker d^n ↣ X^n`
    pub kernel: GroupMorphism,
    /// `I^{n−1} → ker d^n` and its inverse.
    pub iso: GroupMorphism,
    pub iso_inverse: GroupMorphism,
    pub conflation: Conflation,
    /// Membership of `I^n` in the subcategory, in the relative case.
    pub image_member: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityCertificate {
    pub structure: String,
    pub relative_to: Option<String>,
    pub support: Support,
    pub degrees: Vec<DegreeCertificate>,
}

impl AcyclicityCertificate {
    /// Re-checks every equality and conflation against `c`.
    pub fn replays(&self, c: &ChainComplex, s: &ConflationStructure, sub: Option<&Subcategory>) -> bool {
        let covered: Vec<i64> = self.degrees.iter().map(|d| d.degree).collect();
        covered == c.check_range().collect::<Vec<_>>()
            && self.degrees.iter().enumerate().all(|(i, d)| {
                let n = d.degree;
                let dn = c.diff(n);
                let prev_inflation = match i {
                    0 => factorize(&c.diff(n - 1)).inflation,
                    _ => self.degrees[i - 1].inflation.clone(),
                };
                d.deflation.then(&d.inflation).equals(&dn)
                    && d.kernel.then(&dn).is_zero()
                    && d.kernel.is_mono()
                    && d.iso.then(&d.kernel).equals(&prev_inflation)
                    && d.iso.then(&d.iso_inverse).equals(&GroupMorphism::identity(d.iso.source()))
                    && d.iso_inverse.then(&d.iso).equals(&GroupMorphism::identity(d.iso.target()))
                    && d.conflation.inflation.equals(&prev_inflation)
                    && d.conflation.deflation.equals(&d.deflation)
                    && s.admits(&d.conflation)
                    && match sub {
                        None => true,
                        Some(a) => d.conflation.terms().iter().all(|t| a.member(t)),
                    }
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: i64,
    pub image: String,
    pub image_member: Option<bool>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityAnalysis {
    pub valid: bool,
    pub degrees: Vec<DegreeReport>,
    #[serde(skip)]
    pub certificate: Option<AcyclicityCertificate>,
}

impl AcyclicityAnalysis {
    pub fn acyclic(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn failures(&self) -> impl Iterator<Item = &DegreeReport> {
        self.degrees.iter().filter(|d| d.failure.is_some())
    }
}

fn degree_check(
    c: &ChainComplex,
    s: &ConflationStructure,
    sub: Option<&Subcategory>,
    n: i64,
) -> (DegreeReport, Option<DegreeCertificate>) {
    let prev = factorize(&c.diff(n - 1));
    let here = factorize(&c.diff(n));
    let image_member = sub.map(|a| a.member(&here.image));
    let report = DegreeReport { degree: n, image: here.image.label(), image_member, failure: None };
    let fail = |mut r: DegreeReport, why: String| {
        r.failure = Some(why);
        (r, None)
    };
    let (_, k) = kernel(&c.diff(n));
    let Some(iso) = factor_through_mono(&k, &prev.inflation) else {
        return fail(report, "image does not lie in the kernel".into());
    };
    let Some(iso_inverse) = iso.inverse() else {
        let h = homology(c, n);
        return fail(report, format!("cohomology {} in degree {n}", h.label()));
    };
    let conflation = match Conflation::new(prev.inflation.clone(), here.deflation.clone()) {
        Ok(cf) => cf,
        Err(e) => return fail(report, e.to_string()),
    };
    if !s.admits(&conflation) {
        return fail(report, format!("{} does not admit the image conflation", s.name));
    }
    if let Some(a) = sub {
        let labels = ["image", "term", "image"];
        let xn = c.object(n);
        let terms = [&prev.image, &xn, &here.image];
        if let Some(i) = (0..3).find(|&i| !a.member(terms[i])) {
            return fail(report, format!("{} {} not in {}", labels[i], terms[i].label(), a.name()));
        }
    }
    let cert = DegreeCertificate {
        degree: n,
        deflation: here.deflation,
        inflation: here.inflation,
        kernel: k,
        iso,
        iso_inverse,
        conflation,
        image_member,
    };
    (report, Some(cert))
}

/// Per-degree acyclicity report over the check range of `c`.
pub fn analyze_acyclicity(c: &ChainComplex, s: &ConflationStructure, relative_to: Option<&Subcategory>) -> AcyclicityAnalysis {
    if !c.validate() {
        return AcyclicityAnalysis { valid: false, degrees: vec![], certificate: None };
    }
    let degrees: Vec<i64> = c.check_range().collect();
    let results: Vec<_> = degrees.par_iter().map(|&n| degree_check(c, s, relative_to, n)).collect();
    let mut reports = Vec::with_capacity(results.len());
    let mut certs = Vec::with_capacity(results.len());
    for (r, cert) in results {
        reports.push(r);
        certs.push(cert);
    }
    let certificate = certs.into_iter().collect::<Option<Vec<_>>>().map(|degrees| AcyclicityCertificate {
        structure: s.name.clone(),
        relative_to: relative_to.map(|a| a.name().to_string()),
        support: c.support(),
        degrees,
    });
    AcyclicityAnalysis { valid: true, degrees: reports, certificate }
}

pub fn is_acyclic(c: &ChainComplex, s: &ConflationStructure, relative_to: Option<&Subcategory>) -> Option<AcyclicityCertificate> {
    analyze_acyclicity(c, s, relative_to).certificate
}

/// `H^n = ker d^n / im d^{n−1}`, reduced.
pub fn homology(c: &ChainComplex, n: i64) -> PresentedGroup {
    let (_, k) = kernel(&c.diff(n));
    let into_kernel = factor_through_mono(&k, &c.diff(n - 1)).expect("d ∘ d = 0");
    cokernel(&into_kernel).0
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoEvidence {
    pub quasi_iso: bool,
    pub cone: ChainComplex,
    pub cone_analysis: AcyclicityAnalysis,
}

impl QuasiIsoEvidence {
    pub fn certificate(&self) -> Option<&AcyclicityCertificate> {
        self.cone_analysis.certificate.as_ref()
    }
}

/// A chain map is a quasi-isomorphism iff its cone is acyclic.
pub fn is_quasi_iso(f: &ChainMap, s: &ConflationStructure) -> Result<QuasiIsoEvidence> {
    if !f.source().validate() || !f.target().validate() {
        return Err(Error::Precondition("source or target is not a complex".into()));
    }
    let cone = f.cone()?;
    let cone_analysis = analyze_acyclicity(&cone, s, None);
    Ok(QuasiIsoEvidence { quasi_iso: cone_analysis.acyclic(), cone, cone_analysis })
}

/// For acyclic `X`, `Y` and `f: X → Y`, with images presented on the
/// generators of the source of each differential:
/// `im d_X^{n−1} ↣ X^n ⊕ im d_Y^{n−1} ↠ im d_cone^{n−1}` and
/// `im d_cone^{n−1} ↣ Y^n ⊕ im d_X^n ↠ im d_Y^n`.
#[derive(Clone, Debug, Serialize)]
pub struct ConeImageConflations {
    pub degree: i64,
    pub first: Conflation,
    pub second: Conflation,
}

pub fn cone_image_conflations(f: &ChainMap, s: &ConflationStructure) -> Result<Vec<ConeImageConflations>> {
    let (x, y) = (f.source(), f.target());
    if is_acyclic(x, s, None).is_none() || is_acyclic(y, s, None).is_none() {
        return Err(Error::Precondition("both complexes must be acyclic".into()));
    }
    let cone = f.cone()?;
    let degrees: Vec<i64> = cone.check_range().collect();
    degrees
        .par_iter()
        .map(|&n| {
            let ix_prev = factorize_on_source(&x.diff(n - 1)).image;
            let iy_prev = factorize_on_source(&y.diff(n - 1)).image;
            let ic_prev = factorize_on_source(&cone.diff(n - 1)).image;
            let ix = factorize_on_source(&x.diff(n)).image;
            let iy = factorize_on_source(&y.diff(n)).image;
            let (dx_prev, dy_prev) = (x.diff(n - 1), y.diff(n - 1));
            let (f_prev, f_n) = (f.component(n - 1), f.component(n));

            let mid1 = crate::group::direct_sum(&x.object(n), &iy_prev);
            let infl1 = GroupMorphism::new(ix_prev, mid1.clone(), dx_prev.matrix().hstack(&f_prev.matrix().neg()))?;
            let defl1 = GroupMorphism::new(mid1, ic_prev.clone(), IntMatrix::identity(ic_prev.generators()))?;
            let first = Conflation::new(infl1, defl1)?;

            let mid2 = crate::group::direct_sum(&y.object(n), &ix);
            let gx = x.object(n).generators();
            let infl2_rows = f_n
                .matrix()
                .hstack(&IntMatrix::identity(gx))
                .vstack(&dy_prev.matrix().hstack(&IntMatrix::zeros(dy_prev.matrix().rows(), gx)));
            let infl2 = GroupMorphism::new(ic_prev, mid2.clone(), infl2_rows)?;
            let defl2 =
                GroupMorphism::new(mid2, iy, IntMatrix::identity(y.object(n).generators()).vstack(&f_n.matrix().neg()))?;
            let second = Conflation::new(infl2, defl2)?;

            for (which, c) in [("first", &first), ("second", &second)] {
                if !s.admits(c) {
                    return Err(Error::Precondition(format!("{which} cone image sequence in degree {n} is not a conflation")));
                }
            }
            Ok(ConeImageConflations { degree: n, first, second })
        })
        .collect()
}
