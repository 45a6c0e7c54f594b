//! Seeded random groups, morphisms and deflations.
//!
//! Groups are built from invariant factors in `{0, p, p², pq}` (restricted
//! to the ambient category) and then re-presented by a random unimodular
//! change of generators plus redundant relators, so that algorithms never
//! see only diagonal presentations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conflation::{Ambient, ConflationStructure, StructureKind};
use crate::complex::ChainComplex;
use crate::group::{biproduct, cokernel, kernel, GroupMorphism, PresentedGroup};
use crate::linalg::IntMatrix;
use crate::subcat::Subcategory;

#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub p: u64,
    pub q: u64,
    /// Upper bound on invariant factors per sampled group.
    pub max_factors: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { p: 2, q: 3, max_factors: 4 }
    }
}

impl SampleConfig {
    pub fn with_prime(p: u64) -> Self {
        let q = if p == 3 { 2 } else { 3 };
        SampleConfig { p, q, max_factors: 4 }
    }

    fn entry_bound(&self) -> i64 {
        (3 * self.p * self.p) as i64
    }
}

/// Deterministic per-sample RNG.
pub fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 20);
    rng
}

/// Invariant factors available in the ambient category.
pub fn factor_pool(ambient: Ambient, cfg: &SampleConfig) -> Vec<u64> {
    let (p, q) = (cfg.p, cfg.q);
    match ambient {
        Ambient::AllGroups => vec![0, p, p * p, p * q],
        Ambient::KilledBy(n) => (2..=n).filter(|d| n % d == 0).collect(),
    }
}

pub fn random_group<R: Rng>(rng: &mut R, ambient: Ambient, cfg: &SampleConfig, size: usize) -> PresentedGroup {
    let pool = factor_pool(ambient, cfg);
    let k = rng.gen_range(0..=size.min(cfg.max_factors));
    let factors: Vec<u64> = (0..k).map(|_| *pool.choose(rng).expect("nonempty pool")).collect();
    represent(rng, &PresentedGroup::from_factors(&factors)).0
}

/// Random member of `sub` built from its building blocks and the member
/// cyclic groups of the factor pool.
pub fn random_member<R: Rng>(rng: &mut R, sub: &Subcategory, cfg: &SampleConfig, size: usize) -> PresentedGroup {
    let mut blocks = sub.building_blocks();
    for d in factor_pool(sub.ambient(), cfg) {
        let c = PresentedGroup::cyclic(d);
        if sub.member(&c) && !blocks.iter().any(|b| b.is_isomorphic(&c)) {
            blocks.push(c);
        }
    }
    let k = rng.gen_range(0..=size.min(cfg.max_factors));
    let parts: Vec<PresentedGroup> = (0..k).map(|_| blocks.choose(rng).expect("blocks").clone()).collect();
    let g = biproduct(&parts).object;
    debug_assert!(sub.member(&g));
    represent(rng, &g).0
}

pub fn random_object<R: Rng>(rng: &mut R, s: &ConflationStructure, cfg: &SampleConfig, size: usize) -> PresentedGroup {
    match &s.kind {
        StructureKind::Induced(sub) => random_member(rng, sub, cfg, size),
        _ => random_group(rng, s.ambient, cfg, size),
    }
}

/// A random presentation of the same group with isomorphisms `G → G'` and
/// `G' → G`.
pub fn represent<R: Rng>(rng: &mut R, g: &PresentedGroup) -> (PresentedGroup, GroupMorphism, GroupMorphism) {
    let n = g.generators();
    let extra = usize::from(rng.gen_bool(0.3));
    let m = n + extra;
    // Extra generator killed by a unit relator.
    let mut rel = g.relations().hstack(&IntMatrix::zeros(g.relations().rows(), extra));
    if extra == 1 {
        rel = rel.vstack(&IntMatrix::from_fn(1, m, |_, j| BigInt::from((j == n) as i64)));
    }
    let embed = IntMatrix::from_fn(n, m, |i, j| BigInt::from((i == j) as i64));
    let project = IntMatrix::from_fn(m, n, |i, j| BigInt::from((i == j) as i64));
    let (w, w_inv) = random_unimodular(rng, m);
    let mut new_rel = rel.mul(&w);
    if new_rel.rows() > 0 && rng.gen_bool(0.5) {
        let comb = IntMatrix::from_fn(1, new_rel.rows(), |_, _| BigInt::from(rng.gen_range(-2..=2)));
        new_rel = new_rel.vstack(&comb.mul(&new_rel));
    }
    let h = PresentedGroup::new(m, new_rel).expect("re-presentation");
    let to = GroupMorphism::new(g.clone(), h.clone(), embed.mul(&w)).expect("re-presentation map");
    let from = GroupMorphism::new(h.clone(), g.clone(), w_inv.mul(&project)).expect("re-presentation inverse");
    (h, to, from)
}

/// A product of elementary moves and its inverse.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut w = IntMatrix::identity(n);
    let mut w_inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            w.negate_row(0);
            w_inv.negate_col(0);
        }
        return (w, w_inv);
    }
    for _ in 0..n + 1 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                w.swap_cols(i, j);
                w_inv.swap_rows(i, j);
            }
            1 => {
                w.negate_col(i);
                w_inv.negate_row(i);
            }
            _ => {
                let c = BigInt::from(rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 });
                // col i += c·col j, inverse row j -= c·row i
                w.add_col_multiple(i, j, &c);
                w_inv.add_row_multiple(j, i, &-c);
            }
        }
    }
    (w, w_inv)
}

/// Per-generator invariant of a diagonal presentation; 0 for free generators.
fn diagonal_factors(g: &PresentedGroup) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); g.generators()];
    for row in g.relations().row_iter() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                out[j] = x.clone();
            }
        }
    }
    out
}

/// A uniformly built well-defined morphism `X → Y`, drawn in Smith
/// coordinates so that almost every draw is nonzero.
pub fn random_morphism<R: Rng>(rng: &mut R, x: &PresentedGroup, y: &PresentedGroup, cfg: &SampleConfig) -> GroupMorphism {
    let rx = x.reduce();
    let ry = y.reduce();
    let a = diagonal_factors(&rx.group);
    let b = diagonal_factors(&ry.group);
    let bound = cfg.entry_bound().max(2);
    let m = IntMatrix::from_fn(a.len(), b.len(), |i, j| {
        let c = BigInt::from(rng.gen_range(-bound..=bound));
        match (a[i].is_zero(), b[j].is_zero()) {
            (_, true) if !a[i].is_zero() => BigInt::zero(),
            (true, _) | (_, true) => c,
            (false, false) => c * (&b[j] / a[i].gcd(&b[j])),
        }
    });
    let core = GroupMorphism::new(rx.group.clone(), ry.group.clone(), m).expect("smith-coordinate morphism");
    rx.to.then(&core).then(&ry.from)
}

/// An epimorphism `Z ⊕ W → Z`, re-presented, onto a prescribed `Z`.
pub fn random_epi_onto<R: Rng>(rng: &mut R, z: &PresentedGroup, w: &PresentedGroup, cfg: &SampleConfig) -> GroupMorphism {
    let r = random_morphism(rng, w, z, cfg);
    let sum = biproduct(&[z.clone(), w.clone()]);
    let p0 = GroupMorphism::new(sum.object.clone(), z.clone(), IntMatrix::identity(z.generators()).vstack(r.matrix()))
        .expect("epi onto");
    let (_, _, from) = represent(rng, &sum.object);
    from.then(&p0)
}

/// A random epimorphism as the cokernel of a random map into `Y`.
pub fn random_quotient<R: Rng>(rng: &mut R, y: &PresentedGroup, k: &PresentedGroup, cfg: &SampleConfig) -> GroupMorphism {
    let f = random_morphism(rng, k, y, cfg);
    cokernel(&f).1
}

/// Deflation of the structure, or `None` if none was found quickly.
pub fn random_deflation<R: Rng>(rng: &mut R, s: &ConflationStructure, cfg: &SampleConfig, size: usize) -> Option<GroupMorphism> {
    for attempt in 0..24 {
        let p = if attempt % 2 == 0 {
            let z = random_object(rng, s, cfg, size);
            let w = random_object(rng, s, cfg, size);
            random_epi_onto(rng, &z, &w, cfg)
        } else {
            let y = random_object(rng, s, cfg, size);
            let k = random_object(rng, s, cfg, size);
            random_quotient(rng, &y, &k, cfg)
        };
        if s.is_deflation(&p) {
            return Some(p);
        }
    }
    None
}

/// Deflation onto a prescribed object, or `None`.
pub fn random_deflation_onto<R: Rng>(
    rng: &mut R,
    s: &ConflationStructure,
    z: &PresentedGroup,
    cfg: &SampleConfig,
    size: usize,
) -> Option<GroupMorphism> {
    for _ in 0..12 {
        let w = random_object(rng, s, cfg, size);
        let p = random_epi_onto(rng, z, &w, cfg);
        if s.is_deflation(&p) {
            return Some(p);
        }
    }
    None
}

/// A bounded complex in degrees `lo..lo + len` with terms from `s`: each
/// differential is a random map out of the cokernel of the previous one.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    s: &ConflationStructure,
    cfg: &SampleConfig,
    lo: i64,
    len: usize,
    size: usize,
) -> ChainComplex {
    let objects: Vec<PresentedGroup> = (0..len).map(|_| random_object(rng, s, cfg, size)).collect();
    let mut diffs: Vec<GroupMorphism> = Vec::new();
    for i in 0..len.saturating_sub(1) {
        let d = match diffs.last() {
            None => random_morphism(rng, &objects[0], &objects[1], cfg),
            Some(prev) => {
                let (c, q) = cokernel(prev);
                q.then(&random_morphism(rng, &c, &objects[i + 1], cfg))
            }
        };
        diffs.push(d);
    }
    ChainComplex::bounded(lo, objects, diffs).expect("d ∘ d = 0 by construction")
}

/// A bounded acyclic complex in degrees `lo..lo + len`: a sum of
/// conflations `K ↣ Y ↠ Z` of `s` and contractible `X →id X`, re-presented
/// degreewise.
pub fn random_acyclic_complex<R: Rng>(
    rng: &mut R,
    s: &ConflationStructure,
    cfg: &SampleConfig,
    lo: i64,
    len: usize,
    size: usize,
) -> ChainComplex {
    let mut c = ChainComplex::zero();
    let pieces = rng.gen_range(1..=2);
    for _ in 0..pieces {
        let r = lo + rng.gen_range(0..len.max(1)) as i64;
        let room = lo + len as i64 - r;
        let conflation = if room >= 3 { random_deflation(rng, s, cfg, size) } else { None };
        let piece = match conflation {
            Some(p) => {
                let (k, i) = kernel(&p);
                ChainComplex::bounded(r, vec![k, p.source().clone(), p.target().clone()], vec![i, p])
            }
            None if room >= 2 => {
                let x = random_object(rng, s, cfg, size);
                ChainComplex::bounded(r, vec![x.clone(), x.clone()], vec![GroupMorphism::identity(&x)])
            }
            None => continue,
        };
        c = c.direct_sum(&piece.expect("piece is a complex"));
    }
    represent_complex(rng, &c)
}

/// The same bounded complex with every term re-presented.
pub fn represent_complex<R: Rng>(rng: &mut R, c: &ChainComplex) -> ChainComplex {
    let Some((lo, hi)) = c.window() else {
        return c.clone();
    };
    let reps: Vec<_> = (lo..=hi).map(|n| represent(rng, &c.object(n))).collect();
    let objects = reps.iter().map(|(h, _, _)| h.clone()).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let i = (n - lo) as usize;
            reps[i].2.then(&c.diff(n)).then(&reps[i + 1].1)
        })
        .collect();
    ChainComplex::bounded(lo, objects, diffs).expect("re-presented complex")
}

/// Rough size of a presentation, used to rank counterexamples.
pub fn complexity(g: &PresentedGroup) -> usize {
    g.generators() + g.invariants().iter().filter(|d| !d.is_one()).count()
}
