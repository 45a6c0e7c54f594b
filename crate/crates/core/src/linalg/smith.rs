//! Smith normal form over the integers with unimodular transforms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d₁ | d₂ | … ≥ 0`.
///
/// `v_inv` is carried along because lattice bases are read off `D · V⁻¹`.
#[derive(Clone, Debug, Serialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    #[serde(skip)]
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Diagonal entries `d_i` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c·row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
    }

    /// col[dst] += c·col[src]; the inverse is row[src] -= c·row[dst] on V⁻¹.
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    /// Smallest nonzero |entry| in row t / column t from the diagonal on,
    /// ties broken by (row, col).
    fn cross_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        let mut consider = |pos: (usize, usize), x: &BigInt| {
            if x.is_zero() {
                return;
            }
            let ax = x.abs();
            let better = match &best {
                None => true,
                Some((bp, bv)) => ax < *bv || (ax == *bv && pos < *bp),
            };
            if better {
                best = Some((pos, ax));
            }
        };
        for i in t..self.a.rows() {
            consider((i, t), &self.a[(i, t)]);
        }
        for j in t..self.a.cols() {
            consider((t, j), &self.a[(t, j)]);
        }
        best.map(|(p, _)| p)
    }

    fn global_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, bv)| ax < *bv) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    fn bring_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Reduces row t and column t against the pivot; true when both are clear.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clear = true;
        let p = self.a[(t, t)].clone();
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = &self.a[(i, t)] / &p;
            self.row_op(i, t, &-q);
            if !self.a[(i, t)].is_zero() {
                clear = false;
            }
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = &self.a[(t, j)] / &p;
            self.col_op(j, t, &-q);
            if !self.a[(t, j)].is_zero() {
                clear = false;
            }
        }
        clear
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !(&self.a[(i, j)] % p).is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Computes the Smith normal form of `m`.
///
/// Pivoting is deterministic: smallest nonzero absolute value, then
/// lexicographic position, so equal inputs give identical decompositions.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = m.shape();
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let n = r.min(c);
    for t in 0..n {
        let Some(pos) = w.global_pivot(t) else { break };
        w.bring_to(t, pos);
        loop {
            if !w.clear_cross(t) {
                let pos = w.cross_pivot(t).expect("pivot row/column cannot vanish");
                w.bring_to(t, pos);
                continue;
            }
            match w.first_non_multiple(t) {
                Some(i) => {
                    w.row_op(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.a.negate_row(t);
            w.u.negate_row(t);
        }
    }
    SmithDecomposition { u: w.u, d: w.a, v: w.v, v_inv: w.v_inv }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.clone();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = val;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.v.mul(&s.v_inv).is_identity());
        assert_eq!(determinant(&s.u).abs(), BigInt::from(1));
        assert_eq!(determinant(&s.v).abs(), BigInt::from(1));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {diag:?}");
            } else {
                assert!(w[0] >= BigInt::zero());
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert!(s.u.is_identity() && s.v.is_identity() && s.d.is_identity());
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.d.is_zero());
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn needs_gcd_fixup() {
        // diag(2,3) is diagonal but not in normal form.
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        let s = check(&IntMatrix::zeros(0, 3));
        assert_eq!(s.v.shape(), (3, 3));
        let s = check(&IntMatrix::zeros(2, 0));
        assert_eq!(s.u.shape(), (2, 2));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(determinant(&IntMatrix::from_rows(&[[2, 4], [6, 8]])), BigInt::from(-8));
        assert_eq!(determinant(&IntMatrix::from_rows(&[[0, 1], [1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6], [7, 8, 10]])),
            BigInt::from(-3)
        );
    }
}
