//! Element-level model of finite presented groups, independent of the
//! library's lattice code: canonical representatives come from a Hermite
//! form computed here with plain `i64` arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use preresolve_core::{GroupMorphism, PresentedGroup};

pub struct Finite {
    /// Upper triangular basis of the relation lattice with positive diagonal.
    h: Vec<Vec<i64>>,
    pub gens: usize,
}

pub type Elem = Vec<i64>;

fn hermite(rows: Vec<Vec<i64>>, g: usize) -> Option<Vec<Vec<i64>>> {
    let mut rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut out = Vec::new();
    for c in 0..g {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][c].div_euclid(rows[p][c]);
                    let pr = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        let idx = (0..rows.len()).find(|&i| rows[i][c] != 0)?;
        let mut pivot = rows.remove(idx);
        if pivot[c] < 0 {
            pivot.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(pivot);
    }
    Some(out)
}

impl Finite {
    /// `None` for infinite groups.
    pub fn new(g: &PresentedGroup) -> Option<Finite> {
        let rows = g.relations().to_i64_rows()?;
        let h = hermite(rows, g.generators())?;
        Some(Finite { h, gens: g.generators() })
    }

    pub fn order(&self) -> usize {
        self.h.iter().enumerate().map(|(i, r)| r[i] as usize).product()
    }

    pub fn canon(&self, v: &[i64]) -> Elem {
        let mut v = v.to_vec();
        for (i, r) in self.h.iter().enumerate() {
            let q = v[i].div_euclid(r[i]);
            for (x, y) in v.iter_mut().zip(r) {
                *x -= q * y;
            }
        }
        v
    }

    pub fn elements(&self) -> Vec<Elem> {
        let mut out = vec![vec![0; self.gens]];
        for i in 0..self.gens {
            let m = self.h[i][i];
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..m).map(move |k| {
                        let mut e = e.clone();
                        e[i] = k;
                        e
                    })
                })
                .collect();
        }
        out
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.canon(v).iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Elem {
        self.canon(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn element_order(&self, v: &[i64]) -> usize {
        let mut acc = vec![0; self.gens];
        for k in 1.. {
            acc = self.add(&acc, v);
            if acc.iter().all(|&x| x == 0) {
                return k;
            }
        }
        unreachable!()
    }

    /// Number of elements of each order; determines a finite abelian group
    /// up to isomorphism.
    pub fn order_histogram(&self, subset: &[Elem]) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in subset {
            *h.entry(self.element_order(e)).or_insert(0) += 1;
        }
        h
    }

    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        self.order_histogram(&self.elements())
    }
}

pub fn apply(f: &GroupMorphism, target: &Finite, v: &[i64]) -> Elem {
    let m = f.matrix();
    let out: Vec<i64> = (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| v[i] * m[(i, j)].to_i64().unwrap()).sum())
        .collect();
    target.canon(&out)
}

pub fn image(f: &GroupMorphism, src: &Finite, dst: &Finite) -> BTreeSet<Elem> {
    src.elements().iter().map(|x| apply(f, dst, x)).collect()
}

pub fn is_injective(f: &GroupMorphism, src: &Finite, dst: &Finite) -> bool {
    image(f, src, dst).len() == src.order()
}

pub fn is_surjective(f: &GroupMorphism, src: &Finite, dst: &Finite) -> bool {
    image(f, src, dst).len() == dst.order()
}

pub fn group(s: &str) -> PresentedGroup {
    PresentedGroup::parse(s).unwrap()
}

/// A random finite group of order at most `max_order`.
pub fn small_finite(rng: &mut rand_chacha::ChaCha8Rng, max_order: u64) -> PresentedGroup {
    use preresolve_core::conflation::Ambient;
    use preresolve_core::sample::{random_group, SampleConfig};
    loop {
        let g = random_group(rng, Ambient::KilledBy(12), &SampleConfig::default(), 3);
        if g.order().is_some_and(|o| o <= num_bigint::BigInt::from(max_order)) {
            return g;
        }
    }
}
