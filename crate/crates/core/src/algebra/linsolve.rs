use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// No solution exists.
    Inconsistent,
    /// The solution space is positive-dimensional. `kernel_vector` is a
    /// nonzero solution of the homogeneous system, witnessing the first free
    /// column.
    Underdetermined {
        free_columns: Vec<usize>,
        kernel_vector: Vec<Rational>,
    },
    /// Ragged matrix or right-hand side of the wrong length.
    Shape,
}

/// Clears denominators row by row, producing an integer row of `cols + 1`
/// entries (the last one is the right-hand side).
fn integer_row(row: &[Rational], rhs: &Rational) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .chain(std::iter::once(rhs))
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter()
        .chain(std::iter::once(rhs))
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect()
}

/// Solves `matrix * x = rhs` exactly.
///
/// Bareiss fraction-free elimination on the integer-scaled augmented matrix;
/// every intermediate division is exact, so no rational arithmetic happens until
/// back-substitution.
pub fn solve_linear(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>, SolveError> {
    if matrix.len() != rhs.len() {
        return Err(SolveError::Shape);
    }
    let cols = match matrix.first() {
        Some(r) => r.len(),
        None => 0,
    };
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(SolveError::Shape);
    }
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| integer_row(row, b))
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            if factor.is_zero() {
                for x in row[c + 1..].iter_mut() {
                    *x = &*x * pv / &prev;
                }
            } else {
                for j in c + 1..=cols {
                    row[j] = (pv * &row[j] - &factor * &pivot_row[j]) / &prev;
                }
                row[c] = BigInt::zero();
            }
        }
        prev = pv.clone();
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }

    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Err(SolveError::Inconsistent);
    }

    let rank = pivots.len();
    if rank < cols {
        let free_columns: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut x = vec![Rational::zero(); cols];
        x[free_columns[0]] = Rational::one();
        back_substitute(&a[..rank], &pivots, &mut x, false);
        return Err(SolveError::Underdetermined {
            free_columns,
            kernel_vector: x,
        });
    }

    let mut x = vec![Rational::zero(); cols];
    back_substitute(&a[..rank], &pivots, &mut x, true);
    Ok(x)
}

/// Fills the pivot entries of `x` from the echelon rows; free entries are taken
/// as already set.
fn back_substitute(rows: &[Vec<BigInt>], pivots: &[usize], x: &mut [Rational], use_rhs: bool) {
    let cols = x.len();
    for (row, &pc) in rows.iter().zip(pivots).rev() {
        let mut acc = if use_rhs {
            Rational::from_integer(row[cols].clone())
        } else {
            Rational::zero()
        };
        for j in pc + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &x[j] * Rational::from_integer(row[j].clone());
            }
        }
        x[pc] = acc / Rational::from_integer(row[pc].clone());
    }
}
