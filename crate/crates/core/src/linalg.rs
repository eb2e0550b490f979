//! Exact row reduction over the rationals.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::Rational;

/// Reduced row echelon form of `rows`, dropping zero rows. Returns the
/// reduced rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Whether `v` lies in the row space of a reduced basis with given pivots.
pub fn in_row_space(basis: &[Vec<Rational>], pivots: &[usize], v: &[Rational]) -> bool {
    let mut v = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (x, y) in v.iter_mut().zip(row.iter()) {
            *x -= &f * y;
        }
    }
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn reduce_and_test() {
        let rows = alloc::vec![
            alloc::vec![int(1), int(2), int(3)],
            alloc::vec![int(2), int(4), int(6)],
            alloc::vec![int(0), int(1), int(1)],
        ];
        let (b, p) = rref(rows, 3);
        assert_eq!(b.len(), 2);
        assert_eq!(p, [0, 1]);
        assert!(in_row_space(&b, &p, &[int(1), int(3), int(4)]));
        assert!(!in_row_space(&b, &p, &[int(0), int(0), int(1)]));
    }
}
