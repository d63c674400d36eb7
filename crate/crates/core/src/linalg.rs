//! Dense Gaussian elimination over any [`Scalar`]; exact for rationals.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `A X = B` for square `A` (row-major `n x n`) and `B` with `k`
/// columns (row-major `n x k`). Uses partial pivoting by magnitude, which in
/// rational mode only serves to pick a nonzero pivot.
pub fn solve<S: Scalar>(a: &[S], b: &[S], n: usize, k: usize) -> Result<Vec<S>> {
    if a.len() != n * n || b.len() != n * k {
        return Err(Error::Shape(format!(
            "solve expects {n}x{n} and {n}x{k} operands, got {} and {} entries",
            a.len(),
            b.len()
        )));
    }
    let width = n + k;
    let mut m: Vec<S> = Vec::with_capacity(n * width);
    for r in 0..n {
        m.extend_from_slice(&a[r * n..(r + 1) * n]);
        m.extend_from_slice(&b[r * k..(r + 1) * k]);
    }
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r * width + col].is_zero())
            .max_by(|&x, &y| {
                let (ax, ay) = (m[x * width + col].abs_f64(), m[y * width + col].abs_f64());
                ax.partial_cmp(&ay).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or_else(|| Error::Degenerate(format!("singular matrix at column {col}")))?;
        if pivot != col {
            for c in 0..width {
                m.swap(pivot * width + c, col * width + c);
            }
        }
        let inv = S::one() / m[col * width + col].clone();
        for c in col..width {
            m[col * width + c] = m[col * width + c].clone() * &inv;
        }
        for r in 0..n {
            if r == col || m[r * width + col].is_zero() {
                continue;
            }
            let factor = m[r * width + col].clone();
            for c in col..width {
                let delta = factor.clone() * &m[col * width + c];
                m[r * width + c] = m[r * width + c].clone() - &delta;
            }
        }
    }
    let mut x = Vec::with_capacity(n * k);
    for r in 0..n {
        x.extend_from_slice(&m[r * width + n..(r + 1) * width]);
    }
    Ok(x)
}

/// Least-squares solution of the overdetermined system `A x = b` (`rows x cols`)
/// through the normal equations. If the system is consistent the solution is
/// exact in rational mode.
pub fn least_squares<S: Scalar>(a: &[S], b: &[S], rows: usize, cols: usize) -> Result<Vec<S>> {
    if a.len() != rows * cols || b.len() != rows {
        return Err(Error::Shape("least_squares operand sizes disagree".into()));
    }
    let mut ata = vec![S::zero(); cols * cols];
    let mut atb = vec![S::zero(); cols];
    for r in 0..rows {
        let row = &a[r * cols..(r + 1) * cols];
        for i in 0..cols {
            if row[i].is_zero() {
                continue;
            }
            for j in 0..cols {
                ata[i * cols + j] = ata[i * cols + j].clone() + row[i].clone() * &row[j];
            }
            atb[i] = atb[i].clone() + row[i].clone() * &b[r];
        }
    }
    solve(&ata, &atb, cols, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn solves_small_system_exactly() {
        // [[2,1],[1,3]] x = [[3],[5]]  ->  x = [4/5, 7/5]
        let a = vec![q(2), q(1), q(1), q(3)];
        let b = vec![q(3), q(5)];
        let x = solve(&a, &b, 2, 1).unwrap();
        assert_eq!(x, vec![Q::ratio(4, 5), Q::ratio(7, 5)]);
    }

    #[test]
    fn needs_row_exchange() {
        let a = vec![q(0), q(1), q(1), q(0)];
        let b = vec![q(7), q(9)];
        assert_eq!(solve(&a, &b, 2, 1).unwrap(), vec![q(9), q(7)]);
    }

    #[test]
    fn singular_is_degenerate() {
        let a = vec![q(1), q(2), q(2), q(4)];
        let b = vec![q(1), q(1)];
        assert!(matches!(solve(&a, &b, 2, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn multiple_right_hand_sides() {
        let a = vec![q(1), q(1), q(0), q(1)];
        let b = vec![q(1), q(2), q(3), q(4)];
        let x = solve(&a, &b, 2, 2).unwrap();
        assert_eq!(x, vec![q(-2), q(-2), q(3), q(4)]);
    }

    #[test]
    fn consistent_least_squares_is_exact() {
        // rows: x + y = 3, x - y = 1, 2x = 4
        let a = vec![q(1), q(1), q(1), q(-1), q(2), q(0)];
        let b = vec![q(3), q(1), q(4)];
        assert_eq!(least_squares(&a, &b, 3, 2).unwrap(), vec![q(2), q(1)]);
    }

    #[test]
    fn float_least_squares() {
        let a = vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let b = vec![1.0, 1.0, 2.0];
        let x = least_squares(&a, &b, 3, 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
