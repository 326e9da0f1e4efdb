//! Fox free differential calculus and orders of presentation matrices.

use itertools::Itertools;

use super::{AlexanderError, GroupPresentation};
use crate::lpoly::{det_bareiss, gcd_all, LaurentPoly, PolyMatrix};
use crate::word::Word;

/// `psi(w)` as an exponent vector.
fn image(psi: &[Vec<i64>], w: &[crate::word::Letter]) -> Vec<i64> {
    let mut e = vec![0; psi.len()];
    for l in w {
        for (ei, row) in e.iter_mut().zip(psi) {
            *ei += l.sign() * row[l.generator];
        }
    }
    e
}

/// Fox derivatives `d w / d x_j` for all `j`, pushed into `Z[Z^n]` by the
/// abelianization map with matrix `psi` (column `j` is the image of `x_j`).
pub fn fox_row(w: &Word, psi: &[Vec<i64>], generators: usize) -> Vec<LaurentPoly> {
    let n = psi.len();
    let mut row = vec![LaurentPoly::zero(n); generators];
    let letters = w.letters();
    for (k, l) in letters.iter().enumerate() {
        let mut prefix = image(psi, &letters[..k]);
        let j = l.generator;
        let term = if l.inverse {
            // d(x^-1)/dx = -x^-1
            for (p, r) in prefix.iter_mut().zip(psi) {
                *p -= r[j];
            }
            LaurentPoly::monomial(n, prefix, -1)
        } else {
            LaurentPoly::monomial(n, prefix, 1)
        };
        row[j] = &row[j] + &term;
    }
    row
}

/// The Fox matrix of a presentation: one row per relator, one column per
/// generator.
pub fn fox_presentation_matrix(gp: &GroupPresentation) -> Result<PolyMatrix, AlexanderError> {
    gp.validate()?;
    let words = gp.relator_words()?;
    Ok(words
        .iter()
        .map(|w| fox_row(w, &gp.psi, gp.generators))
        .collect())
}

/// Order of the module presented by `m` (rows are relations): the gcd of all
/// maximal minors, in unit normal form.
pub fn alexander_from_presentation(m: &PolyMatrix) -> Result<LaurentPoly, AlexanderError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(AlexanderError::BadMatrix);
    }
    let num_vars = m[0][0].num_vars();
    let size = rows.min(cols);
    minors_gcd(m, size, num_vars)
}

/// gcd of all `size x size` minors, unit-normalized; error if all vanish.
pub fn minors_gcd(
    m: &PolyMatrix,
    size: usize,
    num_vars: usize,
) -> Result<LaurentPoly, AlexanderError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if size == 0 {
        return Ok(LaurentPoly::one(num_vars));
    }
    let mut minors = Vec::new();
    for rs in (0..rows).combinations(size) {
        for cs in (0..cols).combinations(size) {
            let sub: PolyMatrix = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            let d = det_bareiss(&sub, num_vars)?;
            if d.is_zero() {
                continue;
            }
            if d.is_monomial()
                && d.leading_term()
                    .is_some_and(|(_, c)| c.magnitude() == &1u32.into())
            {
                return Ok(LaurentPoly::one(num_vars));
            }
            minors.push(d);
        }
    }
    if minors.is_empty() {
        return Err(AlexanderError::OrderZero);
    }
    Ok(gcd_all(&minors, num_vars).normalized())
}

/// Multivariable Alexander polynomial of a finitely presented group: the gcd
/// of the `(s-1)`-minors of the Fox matrix, `s` the number of generators.
/// When `psi` has rank one and some generator maps to a generator of `Z`, that
/// column is deleted and only the remaining maximal minors are used.
pub fn alexander_of_group(gp: &GroupPresentation) -> Result<LaurentPoly, AlexanderError> {
    let fox = fox_presentation_matrix(gp)?;
    let n = gp.psi.len();
    let s = gp.generators;
    if n == 1 {
        if let Some(j) = (0..s).find(|&j| gp.psi[0][j].abs() == 1) {
            if s == 1 {
                return Ok(LaurentPoly::one(1));
            }
            let reduced: PolyMatrix = fox
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            return alexander_from_presentation(&reduced);
        }
    }
    if s == 0 {
        return Ok(LaurentPoly::one(n));
    }
    if fox.len() < s - 1 {
        return Err(AlexanderError::OrderZero);
    }
    minors_gcd(&fox, s - 1, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(generators: usize, relators: &[&str], psi: Vec<Vec<i64>>) -> GroupPresentation {
        GroupPresentation {
            generators,
            relators: relators.iter().map(|s| s.to_string()).collect(),
            psi,
        }
    }

    fn t(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    #[test]
    fn commutator_row() {
        let g = gp(2, &["x1x2X1X2"], vec![vec![1, 1]]);
        let m = fox_presentation_matrix(&g).unwrap();
        assert_eq!(m[0], vec![t(&[1, -1]), t(&[-1, 1])]);
    }

    #[test]
    fn single_generator_relator() {
        let g = gp(3, &["x1"], vec![vec![0, 1, 0]]);
        let m = fox_presentation_matrix(&g).unwrap();
        assert_eq!(
            m[0],
            vec![t(&[1]), LaurentPoly::zero(1), LaurentPoly::zero(1)]
        );
    }

    #[test]
    fn trefoil() {
        let g = gp(2, &["x1x2x1X2X1X2"], vec![vec![1, 1]]);
        let d = alexander_of_group(&g).unwrap();
        assert_eq!(d, t(&[1, -1, 1]));
        let m = fox_presentation_matrix(&g).unwrap();
        let cut: PolyMatrix = vec![vec![m[0][0].clone()]];
        assert_eq!(alexander_from_presentation(&cut).unwrap(), t(&[1, -1, 1]));
    }

    #[test]
    fn hopf_link_is_one() {
        let g = gp(2, &["x1x2X1X2"], vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(alexander_of_group(&g).unwrap(), LaurentPoly::one(2));
    }

    #[test]
    fn diagonal_orders() {
        let a = t(&[1, -3, 1]);
        assert_eq!(
            alexander_from_presentation(&vec![vec![a.clone()]]).unwrap(),
            a
        );
        let z = LaurentPoly::zero(1);
        let m = vec![vec![t(&[-1, 1]), z.clone()], vec![z.clone(), t(&[-1, 1])]];
        assert_eq!(alexander_from_presentation(&m).unwrap(), t(&[1, -2, 1]));
        let zero = vec![vec![z.clone(), z]];
        assert_eq!(
            alexander_from_presentation(&zero),
            Err(AlexanderError::OrderZero)
        );
    }
}
