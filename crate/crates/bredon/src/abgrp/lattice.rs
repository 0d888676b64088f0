//! Subgroup-lattice calculus inside a fixed ambient ℤ^m.
//!
//! A lattice is handed around as an `IntMatrix` whose columns generate it.
//! Sums, intersections, preimages and membership all reduce to kernels and
//! integral solves, which keeps every subquotient in the engine exact.

use super::matrix::{col_basis, kernel, solve, IntMatrix};
use num_bigint::BigInt;

/// Lattice generated by the columns of both arguments.
pub fn sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows());
    a.hconcat(b)
}

/// Intersection of two lattices: x-parts of the kernel of [a | -b].
pub fn intersect(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), b.rows());
    let stacked = a.hconcat(&b.neg());
    let k = kernel(&stacked);
    let xs = k.submatrix(0, 0, a.cols(), k.cols());
    col_basis(&a.mul(&xs))
}

/// Preimage lattice {x : t·x ∈ L}.
pub fn preimage(t: &IntMatrix, l: &IntMatrix) -> IntMatrix {
    assert_eq!(t.rows(), l.rows());
    let stacked = t.hconcat(&l.neg());
    let k = kernel(&stacked);
    col_basis(&k.submatrix(0, 0, t.cols(), k.cols()))
}

pub fn contains_vec(l: &IntMatrix, v: &[BigInt]) -> bool {
    let rhs = IntMatrix::from_cols(l.rows(), vec![v.to_vec()]);
    solve(l, &rhs).is_some()
}

/// Every column of `m` lies in the lattice `l`.
pub fn contains_all(l: &IntMatrix, m: &IntMatrix) -> bool {
    solve(l, m).is_some()
}

pub fn eq(a: &IntMatrix, b: &IntMatrix) -> bool {
    contains_all(a, b) && contains_all(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersect_sublattices_of_z2() {
        // <(2,0),(0,3)> ∩ <(3,0),(0,2)> = <(6,0),(0,6)>
        let a = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let b = IntMatrix::from_rows_i64(&[vec![3, 0], vec![0, 2]]);
        let c = intersect(&a, &b);
        let expected = IntMatrix::from_rows_i64(&[vec![6, 0], vec![0, 6]]);
        assert!(eq(&c, &expected));
    }

    #[test]
    fn preimage_of_even_lattice_under_doubling() {
        // t(x) = (2x): preimage of <4> is <2>
        let t = IntMatrix::from_rows_i64(&[vec![2]]);
        let l = IntMatrix::from_rows_i64(&[vec![4]]);
        let p = preimage(&t, &l);
        assert!(eq(&p, &IntMatrix::from_rows_i64(&[vec![2]])));
    }

    #[test]
    fn membership() {
        let l = IntMatrix::from_rows_i64(&[vec![2, 1], vec![0, 3]]);
        assert!(contains_vec(&l, &[BigInt::from(1), BigInt::from(3)]));
        assert!(!contains_vec(&l, &[BigInt::from(1), BigInt::from(0)]));
    }
}
