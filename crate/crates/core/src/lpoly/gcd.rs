//! Multivariable gcd over the integers by primitive-part recursion on one
//! variable at a time (primitive remainder sequences).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::LaurentPoly;

/// gcd of two Laurent polynomials, returned in unit normal form.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    assert_eq!(a.num_vars(), b.num_vars());
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    gcd_rec(&a.normalized(), &b.normalized(), a.num_vars()).normalized()
}

/// gcd of a list; zero entries are ignored (the gcd of an all-zero list is 0).
pub fn gcd_all<'a>(
    items: impl IntoIterator<Item = &'a LaurentPoly>,
    num_vars: usize,
) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(num_vars);
    for p in items {
        acc = gcd(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            break;
        }
    }
    acc
}

/// Both inputs are nonzero polynomials (no negative exponents). `vars` bounds
/// the variables that may still occur.
fn gcd_rec(a: &LaurentPoly, b: &LaurentPoly, vars: usize) -> LaurentPoly {
    let n = a.num_vars();
    let main = (0..vars)
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
    let Some(v) = main else {
        // both constants (after normalization every exponent is zero)
        let g = a.constant_value().gcd(&b.constant_value());
        return LaurentPoly::constant(n, g);
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let cg = gcd_rec(&ca, &cb, v);

    let (mut r0, mut r1) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !r1.is_zero() {
        let r = pseudo_rem(&r0, &r1, v);
        r0 = r1;
        r1 = if r.is_zero() {
            r
        } else {
            primitive_part(&r, v)
        };
    }
    let g = if r0.degree_in(v) == 0 {
        LaurentPoly::one(n)
    } else {
        primitive_part(&r0, v)
    };
    (&cg * &g).normalized()
}

/// gcd of the coefficients of `p` as a polynomial in `v`; these live in the
/// variables below `v`.
fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let (_, coeffs) = p.coefficients_in(v);
    let mut acc: Option<LaurentPoly> = None;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let cn = c.normalized();
        acc = Some(match acc {
            None => cn,
            Some(g) => gcd_rec(&g, &cn, v),
        });
        if let Some(g) = &acc {
            if g.is_constant() && g.constant_value().magnitude() == &1u32.into() {
                break;
            }
        }
    }
    acc.unwrap_or_else(|| LaurentPoly::zero(p.num_vars()))
}

fn primitive_part(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let p = p.normalized();
    let c = content_in(&p, v);
    p.exact_div(&c).expect("content divides").normalized()
}

/// Pseudo-remainder of `a` by `b` in variable `v` (both in the polynomial ring).
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let n = a.num_vars();
    let (_, bc) = b.normalized().coefficients_in(v);
    let (_, ac) = a.normalized().coefficients_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut rem = ac;
    while rem.len() > db && !rem.is_empty() {
        let da = rem.len() - 1;
        let la = rem[da].clone();
        if la.is_zero() {
            rem.pop();
            continue;
        }
        let shift = da - db;
        let mut next: Vec<LaurentPoly> = rem.iter().map(|c| c * &lb).collect();
        for (i, c) in bc.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(c * &la);
        }
        debug_assert!(next[da].is_zero());
        next.pop();
        while next.last().is_some_and(LaurentPoly::is_zero) {
            next.pop();
        }
        rem = next;
    }
    let out = LaurentPoly::from_coefficients_in(n, v, 0, &rem);
    // drop a common integer factor to curb growth
    let c = out.content();
    if c.is_zero() || c == BigInt::from(1) {
        out
    } else {
        out.exact_div(&LaurentPoly::constant(n, c)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(terms: &[([i64; 2], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn univariate_gcd() {
        let a = LaurentPoly::from_coeffs(&[-1, 0, 1]); // t^2 - 1
        let b = LaurentPoly::from_coeffs(&[1, 2, 1]); // (t+1)^2
        assert_eq!(gcd(&a, &b), LaurentPoly::from_coeffs(&[1, 1]));
        let c = LaurentPoly::from_coeffs(&[6, 6]);
        let d = LaurentPoly::from_coeffs(&[4, 0, -4]);
        assert_eq!(gcd(&c, &d), LaurentPoly::from_coeffs(&[2, 2]));
    }

    #[test]
    fn multivariate_gcd() {
        let f = p2(&[([1, 0], 1), ([0, 1], -1)]); // x - y
        let g = p2(&[([1, 1], 1), ([0, 0], 2)]); // xy + 2
        let h = p2(&[([2, 0], 1), ([0, 0], 1)]); // x^2 + 1
        let a = &(&f * &g) * &LaurentPoly::constant(2, 3);
        let b = &(&f * &h).mul_monomial(&[-2, 1]) * &LaurentPoly::constant(2, 6);
        assert_eq!(
            gcd(&a, &b),
            (&f * &LaurentPoly::constant(2, 3)).normalized()
        );
        // coprime linear forms
        let u = p2(&[([0, 1], 1), ([0, 0], -1)]);
        let w = p2(&[([1, 0], 1), ([0, 0], -1)]);
        assert_eq!(gcd(&u, &w), LaurentPoly::one(2));
    }

    #[test]
    fn gcd_with_zero() {
        let a = LaurentPoly::from_coeffs(&[0, -2, 4]);
        assert_eq!(
            gcd(&a, &LaurentPoly::zero(1)),
            LaurentPoly::from_coeffs(&[-2, 4])
        );
        assert!(gcd(&LaurentPoly::zero(1), &LaurentPoly::zero(1)).is_zero());
    }
}
