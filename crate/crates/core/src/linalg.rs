//! Fraction-free integer elimination.
//!
//! Bareiss elimination keeps every intermediate entry an integer (each one is
//! a minor of the input), so the only rational arithmetic happens in the
//! final back substitution of [`nullspace`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by Bareiss elimination with row
/// pivoting.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
pub fn leading_principal_minors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    (1..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<BigInt>> = matrix[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Row echelon form of `rows` (each of length `cols`) computed fraction
/// free. Returns the reduced rows and the pivot column of each.
fn bareiss_echelon(rows: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    bareiss_echelon(rows, cols).1.len()
}

/// Basis of the right nullspace `{ v : A v = 0 }` over the rationals, one
/// vector per free column, each with a 1 in its free column.
pub fn nullspace(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigRational>> {
    let (echelon, pivots) = bareiss_echelon(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();

    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let row = &echelon[r];
                let mut acc = BigRational::zero();
                for c in pc + 1..cols {
                    if !row[c].is_zero() && !v[c].is_zero() {
                        acc += BigRational::from_integer(row[c].clone()) * &v[c];
                    }
                }
                v[pc] = -acc / BigRational::from_integer(row[pc].clone());
            }
            v
        })
        .collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray
/// (same direction, entries coprime).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / g.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[-2]])), BigInt::from(-2));
        assert_eq!(determinant(&m(&[&[-2, 1], &[1, -2]])), BigInt::from(3));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            determinant(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
    }

    #[test]
    fn minors_of_a2() {
        let minors = leading_principal_minors(&m(&[&[-2, 1], &[1, -2]]));
        assert_eq!(minors, vec![BigInt::from(-2), BigInt::from(3)]);
    }

    #[test]
    fn nullspace_one_equation() {
        let ns = nullspace(&m(&[&[-3, 2]]), 2);
        assert_eq!(ns.len(), 1);
        assert_eq!(primitive_integer_vector(&ns[0]), vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn nullspace_with_zero_pivot_column() {
        // x0 free after a zero leading column
        let ns = nullspace(&m(&[&[0, 1, -1]]), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((v[1].clone() - v[2].clone()).is_zero());
        }
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&m(&[&[-2, 1, 1], &[1, -2, 1]]), 3), 2);
    }
}
