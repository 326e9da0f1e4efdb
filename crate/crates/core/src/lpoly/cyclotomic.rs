use std::collections::HashMap;

use super::{LaurentPoly, PolyError};

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The n-th cyclotomic polynomial, built by dividing `z^n - 1` by every
/// `Psi_d` with `d` a proper divisor of `n`.
pub fn cyclotomic(n: u64) -> Result<LaurentPoly, PolyError> {
    if n == 0 {
        return Err(PolyError::BadCyclotomicIndex);
    }
    let mut cache = HashMap::new();
    Ok(cyclotomic_cached(n, &mut cache))
}

fn cyclotomic_cached(n: u64, cache: &mut HashMap<u64, LaurentPoly>) -> LaurentPoly {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = LaurentPoly::from_terms(1, [(vec![n as i64], 1), (vec![0], -1)]).unwrap();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let q = cyclotomic_cached(d, cache);
        p = p.exact_div(&q).expect("cyclotomic factor divides z^n - 1");
    }
    cache.insert(n, p.clone());
    p
}

/// `z^b * Psi_n(z^v)` in `v.len()` variables, where
/// `b_k = max(0, -v_k deg Psi_n)` clears the negative exponents.
pub fn extended_cyclotomic(n: u64, v: &[i64]) -> Result<LaurentPoly, PolyError> {
    if v.iter().all(|&x| x == 0) {
        return Err(PolyError::ZeroDirection);
    }
    let psi = cyclotomic(n)?;
    let deg = euler_phi(n) as i64;
    let m = v.len();
    let shift: Vec<i64> = v.iter().map(|&vk| 0.max(-vk * deg)).collect();
    let mut terms = Vec::with_capacity(psi.len());
    for (e, c) in psi.terms() {
        let k = e[0];
        let exp: Vec<i64> = v.iter().zip(&shift).map(|(vk, bk)| vk * k + bk).collect();
        terms.push((exp, c.clone()));
    }
    LaurentPoly::from_terms(m, terms)
}
