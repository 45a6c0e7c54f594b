use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use preresolve_core::linalg::{determinant, kernel_basis, smith_normal_form, solve_integer, IntMatrix};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j]))
        })
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of k×k minors.
fn invariants_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows().min(m.cols());
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor = m.select_rows(rs.iter().copied()).select_cols(cs.iter().copied());
                g = g.gcd(&determinant(&minor));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat_n(BigInt::zero(), n - k + 1));
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_identity_and_divisibility(m in matrix(4, 4, 6)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.v.mul(&s.v_inv).is_identity());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
        prop_assert!(diag.iter().all(|d| d >= &BigInt::zero()));
        prop_assert_eq!(diag, invariants_by_minors(&m));
    }

    #[test]
    fn kernel_is_saturated(m in matrix(4, 5, 4)) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
        let s = smith_normal_form(&m);
        prop_assert_eq!(k.cols(), m.cols() - s.rank());
        if k.cols() > 0 {
            let sk = smith_normal_form(&k);
            prop_assert_eq!(sk.rank(), k.cols());
            prop_assert!(sk.diagonal().iter().all(|d| d.is_one()));
        }
    }

    #[test]
    fn solve_matches_search(m in matrix(3, 3, 3), b in prop::collection::vec(-4i64..=4, 3)) {
        let b: Vec<BigInt> = b[..m.rows()].iter().map(|&x| BigInt::from(x)).collect();
        let found = solve_integer(&m, &b).unwrap();
        if let Some(x) = &found {
            prop_assert_eq!(m.apply_col(x), b.clone());
        }
        // Box search: any solution in the box must have been found.
        let bound = 6i64;
        let n = m.cols();
        let mut x = vec![-bound; n];
        loop {
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if m.apply_col(&xb) == b {
                prop_assert!(found.is_some());
                break;
            }
            let mut i = 0;
            while i < n && x[i] == bound {
                x[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
            x[i] += 1;
        }
    }
}

#[test]
fn minors_oracle_on_fixed_matrix() {
    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let expected: Vec<BigInt> = [2, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(invariants_by_minors(&m), expected);
    assert_eq!(smith_normal_form(&m).diagonal(), expected);
}
