use super::{det_bareiss, LaurentPoly, PolyError};

/// Resultant of `p` and `q` with respect to variable `var`.
///
/// Each input is first multiplied by the power of `x_var` that clears its
/// negative exponents in that variable (a unit of the Laurent ring); the
/// resultant of the resulting polynomials is the determinant of their
/// Sylvester matrix, whose entries are Laurent polynomials in the remaining
/// variables. The determinant is taken fraction-free. The result has exponent
/// zero in `var` and keeps the same variable count.
///
/// Sign convention: rows of `p` come first, so
/// `Res(p, q) = lc(p)^deg(q) * prod_{p(a)=0} q(a)`.
pub fn resultant(p: &LaurentPoly, q: &LaurentPoly, var: usize) -> Result<LaurentPoly, PolyError> {
    let n = p.num_vars();
    if q.num_vars() != n {
        return Err(PolyError::VarMismatch {
            left: n,
            right: q.num_vars(),
        });
    }
    if var >= n {
        return Err(PolyError::VarIndex {
            index: var,
            vars: n,
        });
    }
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (_, pc) = p.coefficients_in(var);
    let (_, qc) = q.coefficients_in(var);
    let dp = pc.len() - 1;
    let dq = qc.len() - 1;
    if dp == 0 {
        return Ok(pc[0].pow(dq as u32));
    }
    if dq == 0 {
        return Ok(qc[0].pow(dp as u32));
    }
    let size = dp + dq;
    let zero = LaurentPoly::zero(n);
    let mut m = vec![vec![zero; size]; size];
    // Row i holds x^(dq-1-i) * p with coefficients in descending degree.
    for i in 0..dq {
        for (j, c) in pc.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..dp {
        for (j, c) in qc.iter().rev().enumerate() {
            m[dq + i][i + j] = c.clone();
        }
    }
    det_bareiss(&m, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Polynomial in (z, t) from (z_exp, t_exp, coeff) triples.
    fn zt(terms: &[(i64, i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(2, terms.iter().map(|&(a, b, c)| (vec![a, b], c))).unwrap()
    }

    fn t_only(coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_terms(
            2,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (vec![0, i as i64], c)),
        )
        .unwrap()
    }

    #[test]
    fn evaluation_identity() {
        // Res_z(z^2 - t^2, z - 3) = (3 - t)(-3 - t) up to sign
        let r = resultant(
            &zt(&[(2, 0, 1), (0, 2, -1)]),
            &zt(&[(1, 0, 1), (0, 0, -3)]),
            0,
        )
        .unwrap();
        assert!(r.equals_up_to_unit(&t_only(&[9, 0, -1])));
    }

    #[test]
    fn root_product_identity() {
        let p = LaurentPoly::from_coeffs(&[-1, 0, 1]);
        let q = LaurentPoly::from_coeffs(&[-5, 1]);
        let r = resultant(&p, &q, 0).unwrap();
        assert_eq!(r, LaurentPoly::constant(1, 24));
    }

    #[test]
    fn cube_roots_of_unity() {
        // prod_{z^3=1} (t z - 3) = t^3 - 27
        let r = resultant(
            &zt(&[(3, 0, 1), (0, 0, -1)]),
            &zt(&[(1, 1, 1), (0, 0, -3)]),
            0,
        )
        .unwrap();
        assert_eq!(r, t_only(&[-27, 0, 0, 1]));
    }

    #[test]
    fn negative_powers_are_cleared() {
        // z^-1 (z^2 - 1) has the same resultant as z^2 - 1
        let p = LaurentPoly::from_terms(1, [(vec![1], 1), (vec![-1], -1)]).unwrap();
        let q = LaurentPoly::from_coeffs(&[-5, 1]);
        assert_eq!(resultant(&p, &q, 0).unwrap(), LaurentPoly::constant(1, 24));
    }

    #[test]
    fn constant_inputs_and_errors() {
        let c = LaurentPoly::constant(1, 2);
        let q = LaurentPoly::from_coeffs(&[1, 1, 1]);
        assert_eq!(resultant(&c, &q, 0).unwrap(), LaurentPoly::constant(1, 4));
        assert_eq!(
            resultant(&LaurentPoly::zero(1), &q, 0),
            Err(PolyError::ZeroPolynomial)
        );
    }
}
