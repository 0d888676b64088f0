//! Dense integer matrices with exact arithmetic and Smith normal form.
//!
//! Everything downstream (cohomology groups, spectral sequence pages,
//! convergence certificates) reduces to the routines in this file, so they are
//! kept deliberately simple: dense `BigInt` entries, unimodular row/column
//! operations with tracked transforms, smallest-pivot selection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A rows×cols matrix over ℤ, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*x));
            }
        }
        m
    }

    /// Build from column vectors over an ambient of `rows` coordinates.
    pub fn from_cols(rows: usize, cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        let mut m = Self::zeros(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Paste `block` with its (0,0) at (r0,c0), adding into existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = self.get(r0 + i, c0 + j) + block.get(i, j);
                self.set(r0 + i, c0 + j, v);
            }
        }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = IntMatrix::zeros(self.rows, self.cols + other.cols);
        m.add_block(0, 0, self);
        m.add_block(0, self.cols, other);
        m
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.data.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -self.get(i, k);
            self.set(i, k, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = -self.get(k, j);
            self.set(k, j, v);
        }
    }

    /// row_j += c * row_i
    fn add_row_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.cols {
            let v = self.get(j, k) + c * self.get(i, k);
            self.set(j, k, v);
        }
    }

    /// col_j += c * col_i
    fn add_col_multiple(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.rows {
            let v = self.get(k, j) + c * self.get(k, i);
            self.set(k, j, v);
        }
    }
}

/// Smith normal form `u * a * v = s` with `u`, `v` unimodular and `s` diagonal
/// with a divisor chain d₁ | d₂ | …  The inverses are tracked alongside so
/// column bases of image lattices come out without a second elimination.
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Diagonal entries d₁, …, d_rank.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smallest-nonzero-pivot Smith normal form. Deterministic: scans row-major,
/// takes the entry of least absolute value (ties to the earliest position).
pub fn smith(a: &IntMatrix) -> Smith {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Elementary ops applied to s are mirrored into the transforms.
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            s.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            s.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! row_neg {
        ($i:expr) => {{
            s.negate_row($i);
            u.negate_row($i);
            u_inv.negate_col($i);
        }};
    }
    macro_rules! row_add {
        ($i:expr, $j:expr, $c:expr) => {{
            let c: BigInt = $c;
            s.add_row_multiple($i, $j, &c);
            u.add_row_multiple($i, $j, &c);
            u_inv.add_col_multiple($j, $i, &(-&c));
        }};
    }
    macro_rules! col_add {
        ($i:expr, $j:expr, $c:expr) => {{
            let c: BigInt = $c;
            s.add_col_multiple($i, $j, &c);
            v.add_col_multiple($i, $j, &c);
            v_inv.add_row_multiple($j, $i, &(-&c));
        }};
    }

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // locate the smallest nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if s.get(i, j).abs() < s.get(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap!(k, pi);
        col_swap!(k, pj);
        if s.get(k, k).is_negative() {
            row_neg!(k);
        }

        // clear row and column k; repeat because remainders can shrink the pivot
        loop {
            let mut dirty = false;
            for i in (k + 1)..rows {
                if !s.get(i, k).is_zero() {
                    let q = s.get(i, k).div_floor(s.get(k, k));
                    row_add!(k, i, -q);
                    if !s.get(i, k).is_zero() {
                        // remainder strictly smaller than pivot: promote it
                        row_swap!(k, i);
                        if s.get(k, k).is_negative() {
                            row_neg!(k);
                        }
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..cols {
                if !s.get(k, j).is_zero() {
                    let q = s.get(k, j).div_floor(s.get(k, k));
                    col_add!(k, j, -q);
                    if !s.get(k, j).is_zero() {
                        col_swap!(k, j);
                        if s.get(k, k).is_negative() {
                            row_neg!(k);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty && (k + 1..rows).all(|i| s.get(i, k).is_zero()) {
                break;
            }
        }

        // divisibility sweep: the pivot must divide the trailing block.
        // Import the offending row, reduce the bad entry by the pivot and
        // promote its remainder, which is strictly smaller, so the pivot
        // value decreases on every pass that does not advance k.
        let mut fixed = false;
        'outer: for i in (k + 1)..rows {
            for j in (k + 1)..cols {
                if !s.get(i, j).mod_floor(s.get(k, k)).is_zero() {
                    row_add!(i, k, BigInt::one());
                    let q = s.get(k, j).div_floor(s.get(k, k));
                    col_add!(k, j, -q);
                    col_swap!(k, j);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // re-clear row and column k with the smaller pivot
        }
        k += 1;
    }

    let rank = (0..n).take_while(|&i| !s.get(i, i).is_zero()).count();
    Smith { s, u, v, u_inv, v_inv, rank }
}

/// Basis of the kernel lattice {x : a·x = 0}, as matrix columns.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let sm = smith(a);
    let cols: Vec<Vec<BigInt>> = (sm.rank..a.cols()).map(|j| sm.v.col(j)).collect();
    IntMatrix::from_cols(a.cols(), cols)
}

/// One integral solution x of a·x = b for each column b of `rhs`, or `None`
/// if some column is not in the column lattice of `a`.
pub fn solve(a: &IntMatrix, rhs: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), rhs.rows());
    let sm = smith(a);
    let ub = sm.u.mul(rhs);
    let mut y = IntMatrix::zeros(a.cols(), rhs.cols());
    for j in 0..rhs.cols() {
        for i in 0..a.rows() {
            let bi = ub.get(i, j);
            if i < sm.rank {
                let d = sm.s.get(i, i);
                let (q, r) = bi.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                if i < a.cols() {
                    y.set(i, j, q);
                }
            } else if !bi.is_zero() {
                return None;
            }
        }
    }
    Some(sm.v.mul(&y))
}

/// A basis (as columns) for the lattice generated by the columns of `a`.
pub fn col_basis(a: &IntMatrix) -> IntMatrix {
    let sm = smith(a);
    let cols: Vec<Vec<BigInt>> = (0..sm.rank)
        .map(|i| {
            let d = sm.s.get(i, i).clone();
            sm.u_inv.col(i).into_iter().map(|x| x * &d).collect()
        })
        .collect();
    IntMatrix::from_cols(a.rows(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) {
        let sm = smith(a);
        assert_eq!(sm.u.mul(a).mul(&sm.v), sm.s, "u·a·v = s");
        assert_eq!(sm.u.mul(&sm.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(sm.v.mul(&sm.v_inv), IntMatrix::identity(a.cols()));
        for i in 0..sm.rank.saturating_sub(1) {
            let d0 = sm.s.get(i, i);
            let d1 = sm.s.get(i + 1, i + 1);
            assert!(d1.mod_floor(d0).is_zero(), "divisor chain");
        }
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j || i >= sm.rank {
                    assert!(sm.s.get(i, j).is_zero(), "s diagonal");
                }
            }
        }
    }

    #[test]
    fn smith_zero_matrix() {
        let a = IntMatrix::zeros(3, 2);
        let sm = smith(&a);
        assert_eq!(sm.rank, 0);
        check_smith(&a);
    }

    #[test]
    fn smith_identity() {
        let a = IntMatrix::identity(4);
        let sm = smith(&a);
        assert_eq!(sm.rank, 4);
        assert_eq!(sm.s, IntMatrix::identity(4));
    }

    #[test]
    fn smith_diag_2_3_normalizes_to_1_6() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        let sm = smith(&a);
        assert_eq!(sm.divisors(), vec![BigInt::from(1), BigInt::from(6)]);
        check_smith(&a);
    }

    #[test]
    fn smith_known_4x4() {
        let a = IntMatrix::from_rows_i64(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let sm = smith(&a);
        assert_eq!(
            sm.divisors(),
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(21)]
        );
        check_smith(&a);
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 4, 6], vec![1, 2, 3]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());

        let b = IntMatrix::from_rows_i64(&[vec![2], vec![1]]);
        let x = solve(&a, &b).expect("solvable");
        assert_eq!(a.mul(&x), b);

        let b_bad = IntMatrix::from_rows_i64(&[vec![1], vec![1]]);
        assert!(solve(&a, &b_bad).is_none());
    }

    #[test]
    fn col_basis_spans_same_lattice() {
        let a = IntMatrix::from_rows_i64(&[vec![2, 4, 0], vec![0, 6, 6]]);
        let b = col_basis(&a);
        assert!(solve(&b, &a).is_some(), "original columns lie in basis lattice");
        assert!(solve(&a, &b).is_some(), "basis columns lie in original lattice");
    }
}
