//! Kernels, cokernels, images, pullbacks, pushouts and biproducts.

use num_bigint::BigInt;

use super::{GroupMorphism, PresentedGroup};
use crate::linalg::{left_kernel_basis, IntMatrix, RowLattice};

/// `im f = I`, `f = deflation ; inflation`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub image: PresentedGroup,
    /// `X ↠ I`
    pub deflation: GroupMorphism,
    /// `I ↣ Y`
    pub inflation: GroupMorphism,
}

/// `P` with `left: P → X`, `right: P → Y` and `left ; f = right ; g`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: PresentedGroup,
    pub left: GroupMorphism,
    pub right: GroupMorphism,
}

/// `Q` with `left: X → Q`, `right: Y → Q` and `f ; left = g ; right`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: PresentedGroup,
    pub left: GroupMorphism,
    pub right: GroupMorphism,
}

#[derive(Clone, Debug)]
pub struct Biproduct {
    pub object: PresentedGroup,
    pub inj: Vec<GroupMorphism>,
    pub proj: Vec<GroupMorphism>,
}

/// The lattice `{x : x·F ∈ L_Y}` of source vectors killed by `f`, as a basis.
fn preimage_of_zero(f: &GroupMorphism) -> IntMatrix {
    let gx = f.source().generators();
    let stacked = f.matrix().vstack(f.target().relations());
    let lk = left_kernel_basis(&stacked);
    let xs = lk.col_range(0, gx);
    RowLattice::new(xs).basis()
}

/// `ker f ↣ X`, with the kernel in reduced form.
pub fn kernel(f: &GroupMorphism) -> (PresentedGroup, GroupMorphism) {
    let x = f.source();
    let basis = preimage_of_zero(f);
    let k = basis.rows();
    // L_X sits inside the preimage lattice, so these coordinates exist.
    let rel = RowLattice::new(basis.clone())
        .coords_rows(x.relations())
        .expect("relations lie in the kernel lattice");
    let raw = PresentedGroup::new(k, rel).expect("kernel presentation");
    let red = raw.reduce();
    let incl = red.from.matrix().mul(&basis);
    (red.group.clone(), GroupMorphism::from_parts(red.group, x.clone(), incl))
}

/// `Y ↠ coker f`, reduced.
pub fn cokernel(f: &GroupMorphism) -> (PresentedGroup, GroupMorphism) {
    let y = f.target();
    let rel = y.relations().vstack(f.matrix());
    let raw = PresentedGroup::new(y.generators(), rel).expect("cokernel presentation");
    let red = raw.reduce();
    let proj = GroupMorphism::from_parts(y.clone(), red.group.clone(), red.to.matrix().clone());
    (red.group, proj)
}

/// Epi–mono factorization through a reduced image.
pub fn factorize(f: &GroupMorphism) -> Factorization {
    let x = f.source();
    let basis = preimage_of_zero(f);
    let raw = PresentedGroup::new(x.generators(), basis).expect("image presentation");
    let red = raw.reduce();
    let deflation = GroupMorphism::from_parts(x.clone(), red.group.clone(), red.to.matrix().clone());
    let inflation =
        GroupMorphism::from_parts(red.group.clone(), f.target().clone(), red.from.matrix().mul(f.matrix()));
    Factorization { image: red.group, deflation, inflation }
}

/// Factorization through the image presented on the source generators:
/// the deflation is the identity matrix and the inflation is `f`'s matrix.
pub fn factorize_on_source(f: &GroupMorphism) -> Factorization {
    let x = f.source();
    let image = PresentedGroup::new(x.generators(), preimage_of_zero(f)).expect("image presentation");
    let deflation = GroupMorphism::from_parts(x.clone(), image.clone(), IntMatrix::identity(x.generators()));
    let inflation = GroupMorphism::from_parts(image.clone(), f.target().clone(), f.matrix().clone());
    Factorization { image, deflation, inflation }
}

/// Pullback of `f: X → Z` and `g: Y → Z`.
pub fn pullback(f: &GroupMorphism, g: &GroupMorphism) -> Pullback {
    assert_eq!(f.target().generators(), g.target().generators(), "pullback of maps into different objects");
    let sum = biproduct(&[f.source().clone(), g.source().clone()]);
    let h = GroupMorphism::from_parts(sum.object.clone(), f.target().clone(), f.matrix().vstack(&g.matrix().neg()));
    let (p, incl) = kernel(&h);
    Pullback { left: incl.then(&sum.proj[0]), right: incl.then(&sum.proj[1]), object: p }
}

/// Pushout of `f: A → X` and `g: A → Y`.
pub fn pushout(f: &GroupMorphism, g: &GroupMorphism) -> Pushout {
    assert_eq!(f.source().generators(), g.source().generators(), "pushout of maps from different objects");
    let sum = biproduct(&[f.target().clone(), g.target().clone()]);
    let h = GroupMorphism::from_parts(f.source().clone(), sum.object.clone(), f.matrix().hstack(&g.matrix().neg()));
    let (q, proj) = cokernel(&h);
    Pushout { left: sum.inj[0].then(&proj), right: sum.inj[1].then(&proj), object: q }
}

/// Direct sum with block-diagonal relations, injections and projections.
pub fn biproduct(objects: &[PresentedGroup]) -> Biproduct {
    let total: usize = objects.iter().map(|o| o.generators()).sum();
    let rel = objects.iter().fold(IntMatrix::zeros(0, 0), |acc, o| acc.block_diag(o.relations()));
    let object = PresentedGroup::new(total, rel).expect("direct sum");
    let mut inj = Vec::with_capacity(objects.len());
    let mut proj = Vec::with_capacity(objects.len());
    let mut off = 0;
    for o in objects {
        let g = o.generators();
        let i = IntMatrix::from_fn(g, total, |r, c| BigInt::from((c == off + r) as i64));
        proj.push(GroupMorphism::from_parts(object.clone(), o.clone(), i.transpose()));
        inj.push(GroupMorphism::from_parts(o.clone(), object.clone(), i));
        off += g;
    }
    Biproduct { object, inj, proj }
}

pub fn direct_sum(a: &PresentedGroup, b: &PresentedGroup) -> PresentedGroup {
    biproduct(&[a.clone(), b.clone()]).object
}

/// `(f, g): X → A ⊕ B`.
pub fn pair(f: &GroupMorphism, g: &GroupMorphism) -> GroupMorphism {
    let target = direct_sum(f.target(), g.target());
    GroupMorphism::from_parts(f.source().clone(), target, f.matrix().hstack(g.matrix()))
}

/// `[f g]: A ⊕ B → Y`.
pub fn copair(f: &GroupMorphism, g: &GroupMorphism) -> GroupMorphism {
    let source = direct_sum(f.source(), g.source());
    GroupMorphism::from_parts(source, f.target().clone(), f.matrix().vstack(g.matrix()))
}

/// `f ⊕ g: A ⊕ B → X ⊕ Y`.
pub fn sum_map(f: &GroupMorphism, g: &GroupMorphism) -> GroupMorphism {
    GroupMorphism::from_parts(
        direct_sum(f.source(), g.source()),
        direct_sum(f.target(), g.target()),
        f.matrix().block_diag(g.matrix()),
    )
}

/// Solves `s ; i = t` for a mono `i: I → Y` and `t: T → Y`.
pub fn factor_through_mono(i: &GroupMorphism, t: &GroupMorphism) -> Option<GroupMorphism> {
    if i.target().generators() != t.target().generators() {
        return None;
    }
    let gi = i.source().generators();
    let lat = RowLattice::new(i.matrix().vstack(i.target().relations()));
    let coords = lat.coords_rows(t.matrix())?;
    let s = GroupMorphism::new(t.source().clone(), i.source().clone(), coords.col_range(0, gi)).ok()?;
    s.then(i).equals(t).then_some(s)
}

/// Solves `p ; s = t` for an epi `p: X → Z` and `t: X → T`.
pub fn descend_along_epi(p: &GroupMorphism, t: &GroupMorphism) -> Option<GroupMorphism> {
    if p.source().generators() != t.source().generators() {
        return None;
    }
    let gx = p.source().generators();
    let gz = p.target().generators();
    let lat = RowLattice::new(p.matrix().vstack(p.target().relations()));
    // A set-theoretic section of p on generators.
    let section = lat.coords_rows(&IntMatrix::identity(gz))?.col_range(0, gx);
    let s = GroupMorphism::new(p.target().clone(), t.target().clone(), section.mul(t.matrix())).ok()?;
    p.then(&s).equals(t).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]], cols: usize) -> IntMatrix {
        IntMatrix::from_rows_with_cols(rows, cols)
    }

    fn inv(g: &PresentedGroup) -> Vec<u64> {
        g.invariants_u64().unwrap()
    }

    #[test]
    fn kernel_of_multiplication() {
        let z4 = PresentedGroup::cyclic(4);
        let two = GroupMorphism::scalar(&z4, 2);
        let (k, i) = kernel(&two);
        assert_eq!(inv(&k), vec![2]);
        assert!(i.then(&two).is_zero());
        assert!(i.is_mono());
        let (c, p) = cokernel(&two);
        assert_eq!(inv(&c), vec![2]);
        assert!(two.then(&p).is_zero());
    }

    #[test]
    fn kernel_of_free_map() {
        let f = GroupMorphism::new(PresentedGroup::free(2), PresentedGroup::free(1), m(&[&[1], &[1]], 1)).unwrap();
        let (k, i) = kernel(&f);
        assert_eq!(inv(&k), vec![0]);
        assert!(i.then(&f).is_zero());
    }

    #[test]
    fn image_factorization() {
        let f = GroupMorphism::new(PresentedGroup::free(1), PresentedGroup::cyclic(6), m(&[&[2]], 1)).unwrap();
        let fac = factorize(&f);
        assert_eq!(inv(&fac.image), vec![3]);
        assert!(fac.deflation.then(&fac.inflation).equals(&f));
        assert!(fac.deflation.is_epi() && fac.inflation.is_mono());
    }

    #[test]
    fn pullback_of_projections() {
        let z = PresentedGroup::free(1);
        let z2 = PresentedGroup::cyclic(2);
        let p = GroupMorphism::new(z.clone(), z2.clone(), m(&[&[1]], 1)).unwrap();
        let pb = pullback(&p, &p);
        // {(a, b) : a ≡ b mod 2} ≅ ℤ²
        assert_eq!(inv(&pb.object), vec![0, 0]);
        assert!(pb.left.then(&p).equals(&pb.right.then(&p)));
    }

    #[test]
    fn pushout_of_inclusions() {
        let z2 = PresentedGroup::cyclic(2);
        let z4 = PresentedGroup::cyclic(4);
        let i = GroupMorphism::new(z2, z4, m(&[&[2]], 1)).unwrap();
        let po = pushout(&i, &i);
        assert_eq!(inv(&po.object), vec![2, 4]);
        assert!(i.then(&po.left).equals(&i.then(&po.right)));
    }

    #[test]
    fn lifting_and_descending() {
        let z2 = PresentedGroup::cyclic(2);
        let z4 = PresentedGroup::cyclic(4);
        let i = GroupMorphism::new(z2.clone(), z4.clone(), m(&[&[2]], 1)).unwrap();
        let t = GroupMorphism::scalar(&z4, 2);
        assert!(factor_through_mono(&i, &GroupMorphism::identity(&z4)).is_none());
        assert!(factor_through_mono(&i, &t).is_some());
        let t2 = GroupMorphism::new(z2.clone(), z4.clone(), m(&[&[2]], 1)).unwrap();
        assert!(factor_through_mono(&i, &t2).unwrap().equals(&GroupMorphism::identity(&z2)));

        let p = GroupMorphism::new(z4.clone(), z2.clone(), m(&[&[1]], 1)).unwrap();
        assert!(descend_along_epi(&p, &GroupMorphism::identity(&z4)).is_none());
        let s = descend_along_epi(&p, &t).unwrap();
        assert!(p.then(&s).equals(&t));
    }

    #[test]
    fn biproduct_identities() {
        let b = biproduct(&[PresentedGroup::cyclic(2), PresentedGroup::free(1)]);
        assert!(b.inj[0].then(&b.proj[0]).equals(&GroupMorphism::identity(&PresentedGroup::cyclic(2))));
        assert!(b.inj[0].then(&b.proj[1]).is_zero());
        let sum = b.proj[0].then(&b.inj[0]).add(&b.proj[1].then(&b.inj[1]));
        assert!(sum.equals(&GroupMorphism::identity(&b.object)));
    }
}
