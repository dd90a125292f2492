//! Small number-theory helpers: totient, factorials, prime lists.

use num_bigint::BigInt;
use num_traits::One;

/// Euler's totient by trial-division factorization.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient requires n >= 1");
    let mut n = n;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            phi -= phi / p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// phi(1..=max) by a linear sieve; index 0 unused.
pub fn totient_sieve(max: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=max as u64).collect();
    for i in 2..=max {
        if phi[i] == i as u64 {
            // i prime
            let mut j = i;
            while j <= max {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn pow2(n: u64) -> BigInt {
    BigInt::one() << n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_small_values() {
        let expected = [1u64, 1, 2, 2, 4, 2, 6, 4, 6, 4];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(totient((i + 1) as u64), e, "phi({})", i + 1);
        }
        assert_eq!(totient(29), 28);
        assert_eq!(totient(30), 8);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = totient_sieve(1000);
        for n in 1..=1000usize {
            assert_eq!(sieve[n], totient(n as u64), "phi({})", n);
        }
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(8), BigInt::from(40320));
    }
}
