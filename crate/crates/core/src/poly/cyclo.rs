use super::IntPolynomial;
use crate::nt::totient;
use crate::quotient::FieldElement;
use num_bigint::BigInt;
use num_traits::One;
use std::sync::Arc;

/// The n-th cyclotomic polynomial by recursive exact division of x^n - 1.
pub fn cyclotomic_poly(n: u64) -> IntPolynomial {
    assert!(n >= 1);
    if n == 1 {
        return IntPolynomial::from_i64(&[-1, 1]);
    }
    let mut num = {
        let mut c = vec![BigInt::from(0); n as usize + 1];
        c[0] = BigInt::from(-1);
        c[n as usize] = BigInt::one();
        IntPolynomial::new(c)
    };
    for d in 1..n {
        if n % d == 0 {
            num = num.exact_div(&cyclotomic_poly(d)).expect("phi_d | x^n-1");
        }
    }
    num
}

/// Detects whether all roots of f are primitive n-th roots of unity.
///
/// Returns the smallest n with f | x^n - 1, verified exactly by computing
/// x^n mod f; candidates are limited to n <= 2 d^2 with phi(n) = d, which is
/// exhaustive for an irreducible f of degree d. `None` certifies that the
/// roots of f are not roots of unity (given irreducibility).
pub fn cyclotomic_test(f: &IntPolynomial) -> Option<u64> {
    let d = f.degree()? as u64;
    if d == 0 {
        return None;
    }
    // A monic-up-to-sign condition is necessary: a primitive polynomial
    // dividing x^n - 1 over Q also divides it over Z.
    if !f.leading().abs().is_one() || !f.constant_term().abs().is_one() {
        return None;
    }
    let modulus = Arc::new(f.clone());
    let x = FieldElement::generator(modulus).ok()?;
    let bound = 2 * d * d;
    for n in 1..=bound {
        if totient(n) != d {
            continue;
        }
        if x.pow(&BigInt::from(n)).ok()?.is_one() {
            return Some(n);
        }
    }
    None
}

use num_traits::Signed;
