use num_bigint::BigInt;

use super::{LaurentPoly, PolyError};

/// Row-major matrix of Laurent polynomials.
pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

/// Determinant by fraction-free (Bareiss) elimination. Every division is
/// exact in the Laurent ring; a failed division signals corrupted input.
pub fn det_bareiss(m: &PolyMatrix, num_vars: usize) -> Result<LaurentPoly, PolyError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(PolyError::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    if n == 0 {
        return Ok(LaurentPoly::one(num_vars));
    }
    let mut a = m.clone();
    let mut prev = LaurentPoly::one(num_vars);
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            // pivot on the sparsest nonzero candidate below
            let swap = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].len());
            match swap {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero(num_vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).ok_or(PolyError::InexactDivision)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// `det(t I - m)` for a square integer matrix, in one variable `t`.
pub fn char_poly(m: &[Vec<i64>]) -> Result<LaurentPoly, PolyError> {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    char_poly_big(&big)
}

/// As [`char_poly`], for arbitrary-precision entries.
pub fn char_poly_big(m: &[Vec<BigInt>]) -> Result<LaurentPoly, PolyError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(PolyError::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    let t = LaurentPoly::var(1, 0);
    let pm: PolyMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = LaurentPoly::constant(1, -&m[i][j]);
                    if i == j {
                        &c + &t
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    det_bareiss(&pm, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(1, v)
    }

    #[test]
    fn integer_determinants() {
        let m = vec![vec![c(2), c(1)], vec![c(1), c(1)]];
        assert_eq!(det_bareiss(&m, 1).unwrap(), c(1));
        let m = vec![
            vec![c(0), c(1), c(2)],
            vec![c(3), c(4), c(5)],
            vec![c(6), c(7), c(9)],
        ];
        assert_eq!(det_bareiss(&m, 1).unwrap(), c(-3));
        let sing = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        assert!(det_bareiss(&sing, 1).unwrap().is_zero());
    }

    #[test]
    fn polynomial_determinant() {
        // det(tI - [[2,1],[1,1]]) = t^2 - 3t + 1
        let t = LaurentPoly::var(1, 0);
        let m = vec![vec![&t - &c(2), c(-1)], vec![c(-1), &t - &c(1)]];
        assert_eq!(
            det_bareiss(&m, 1).unwrap(),
            LaurentPoly::from_coeffs(&[1, -3, 1])
        );
    }

    #[test]
    fn not_square() {
        let m = vec![vec![c(1), c(2)]];
        assert!(matches!(
            det_bareiss(&m, 1),
            Err(PolyError::NotSquare { .. })
        ));
    }
}
