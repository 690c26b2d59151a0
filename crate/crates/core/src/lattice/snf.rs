use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `d = u * a * v` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn smallest_nonzero(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of an integer matrix.
///
/// The pivot at each stage is the entry of smallest nonzero absolute value
/// in the remaining submatrix (first in row-major order on ties), so the
/// transforms are deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&m, t) else {
                return SmithForm { d: m, u, v, rank };
            };
            m.swap_rows(t, pi);
            u.swap_rows(t, pi);
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = m[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = -m[(i, t)].div_floor(&pivot);
                m.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= m[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = -m[(t, j)].div_floor(&pivot);
                m.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= m[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                m.add_row_multiple(t, i, &BigInt::one());
                u.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    SmithForm { d: m, u, v, rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d, "U A V must equal D");
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_zero() || w[1].is_multiple_of(&w[0]), "divisibility chain broken: {diag:?}");
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let s = check(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, a);
        assert_eq!(s.v, a);
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn upper_triangular_cyclic() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap();
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(4)]);
    }

    #[test]
    fn empty_and_rectangular() {
        let s = check(&IntMatrix::zeros(0, 0));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::zeros(2, 0));
        assert_eq!(s.rank, 0);
        let a = IntMatrix::from_rows(&[vec![4, 6, 10], vec![6, 9, 15]]).unwrap();
        let s = check(&a);
        assert_eq!(s.rank, 1);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::zero()]);
        let a = IntMatrix::from_rows(&[vec![0, 0], vec![0, -7], vec![0, 0]]).unwrap();
        let s = check(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(7), BigInt::zero()]);
    }
}
