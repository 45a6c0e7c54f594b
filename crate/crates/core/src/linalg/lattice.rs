//! Integer solving, kernels and row lattices, all read off a Smith decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::smith::{smith_normal_form, SmithDecomposition};
use crate::error::{Error, Result};

/// Solves `M · x = b` over the integers. `Ok(None)` when no integer solution
/// exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a {}x{} system",
            b.len(),
            m.rows(),
            m.cols()
        )));
    }
    let s = smith_normal_form(m);
    Ok(solve_with(&s, b))
}

fn solve_with(s: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rank = s.rank();
    let c = s.u.apply_col(b);
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for i in 0..rank {
        let (q, r) = c[i].div_rem(&s.d[(i, i)]);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(s.v.apply_col(&y))
}

/// Columns form a lattice basis of `{x ∈ ℤⁿ : M·x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let rank = s.rank();
    s.v.col_range(rank, m.cols())
}

/// Rows form a lattice basis of `{y : y·M = 0}`.
pub fn left_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let rank = s.rank();
    s.u.row_range(rank, m.rows())
}

/// The sublattice of `ℤⁿ` spanned by the rows of a generator matrix.
///
/// Membership and coordinates come from one cached Smith decomposition of the
/// generators.
#[derive(Clone, Debug)]
pub struct RowLattice {
    generators: IntMatrix,
    snf: SmithDecomposition,
    rank: usize,
}

impl RowLattice {
    pub fn new(generators: IntMatrix) -> Self {
        let snf = smith_normal_form(&generators);
        let rank = snf.rank();
        RowLattice { generators, snf, rank }
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.cols()
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Some `y` with `y · generators = v`, or `None` if `v` is outside.
    ///
    /// With `U G V = D`: `y G = v ⇔ (y U⁻¹) D = v V`.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim(), "vector length mismatch");
        let w = self.snf.v.apply_row(v);
        if w[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = vec![BigInt::zero(); self.generators.rows()];
        for i in 0..self.rank {
            let (q, r) = w[i].div_rem(&self.snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
        Some(self.snf.u.apply_row(&z))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let w = self.snf.v.apply_row(v);
        w[self.rank..].iter().all(Zero::is_zero)
            && (0..self.rank).all(|i| (&w[i] % &self.snf.d[(i, i)]).is_zero())
    }

    /// Every row of `m` lies in the lattice.
    pub fn contains_rows(&self, m: &IntMatrix) -> bool {
        m.row_iter().all(|r| self.contains(r))
    }

    /// Coordinates for every row of `m`, as a `m.rows() × generators.rows()` matrix.
    pub fn coords_rows(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let rows = m.row_iter().map(|r| self.coords(r)).collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_big_rows(rows, self.generators.rows()).expect("coordinate width"))
    }

    /// A basis (independent rows) of the same lattice: the rows of `D·V⁻¹`
    /// with nonzero `d_i`.
    pub fn basis(&self) -> IntMatrix {
        let n = self.ambient_dim();
        IntMatrix::from_fn(self.rank, n, |i, j| &self.snf.d[(i, i)] * &self.snf.v_inv[(i, j)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(solve_integer(&id, &bv(&[4, -1, 7])).unwrap(), Some(bv(&[4, -1, 7])));
        let two = IntMatrix::from_rows(&[[2]]);
        assert_eq!(solve_integer(&two, &bv(&[4])).unwrap(), Some(bv(&[2])));
        assert_eq!(solve_integer(&two, &bv(&[3])).unwrap(), None);
        assert!(solve_integer(&two, &bv(&[1, 2])).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.shape(), (2, 1));
        let col = k.column(0);
        assert!(col == bv(&[1, -1]) || col == bv(&[-1, 1]), "{col:?}");
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        assert!(kernel_basis(&IntMatrix::zeros(2, 3)).mul(&IntMatrix::identity(3)).cols() == 3);
    }

    #[test]
    fn lattice_membership() {
        let l = RowLattice::new(IntMatrix::from_rows(&[[2, 0], [0, 3], [2, 3]]));
        assert!(l.contains(&bv(&[4, 9])));
        assert!(!l.contains(&bv(&[1, 0])));
        let y = l.coords(&bv(&[6, -3])).unwrap();
        assert_eq!(l.generators().transpose().apply_col(&y), bv(&[6, -3]));
        assert_eq!(l.basis().rows(), 2);
    }
}
