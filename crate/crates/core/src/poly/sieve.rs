use super::{modp_factor_degrees, IntPolynomial};
use crate::error::Error;

/// Outcome of the degree-set irreducibility sieve. `Unknown` is one-sided:
/// it does not assert reducibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SieveOutcome {
    /// No nontrivial factor degree is compatible with every usable prime.
    Certified { primes_used: Vec<u64> },
    Unknown,
}

impl SieveOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, SieveOutcome::Certified { .. })
    }
}

/// Degree-set argument: a factor of f over Q reduces mod p (p not dividing
/// the leading coefficient) to a product of irreducible factors, so its
/// degree is a subset sum of the mod-p degree multiset. If the intersection
/// of those subset-sum sets over the usable primes contains no degree
/// strictly between 0 and deg f, the polynomial is irreducible.
pub fn irreducibility_sieve(f: &IntPolynomial, primes: &[u64]) -> SieveOutcome {
    let d = match f.degree() {
        None | Some(0) => return SieveOutcome::Unknown,
        Some(d) => d,
    };
    let mut feasible: Option<Vec<bool>> = None; // index = possible proper factor degree
    let mut used = vec![];
    for &p in primes {
        let degs = match modp_factor_degrees(f, p) {
            Ok(d) => d,
            Err(_) => continue, // bad prime, skip
        };
        // subset sums via bitset
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for &g in &degs {
            for s in (0..=d.saturating_sub(g)).rev() {
                if sums[s] {
                    sums[s + g] = true;
                }
            }
        }
        match feasible.as_mut() {
            None => {
                feasible = Some(sums);
            }
            Some(f) => {
                for (a, b) in f.iter_mut().zip(sums.iter()) {
                    *a = *a && *b;
                }
            }
        }
        used.push(p);
        if let Some(f) = &feasible {
            if !f[1..d].iter().any(|&b| b) {
                return SieveOutcome::Certified { primes_used: used };
            }
        }
    }
    SieveOutcome::Unknown
}

/// Irreducibility status carried through height and Galois certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified,
    Assumed,
    No,
}

impl Irreducibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Irreducibility::Certified => "certified",
            Irreducibility::Assumed => "assumed",
            Irreducibility::No => "no",
        }
    }
}

/// Sieve with the default prime list, downgraded to `No` when a rational
/// root (degree > 1) or squarefree failure gives a reducibility witness.
pub fn irreducibility_status(f: &IntPolynomial, primes: &[u64]) -> Result<Irreducibility, Error> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if d == 1 {
        return Ok(Irreducibility::Certified);
    }
    if !f.squarefree_check()? {
        return Ok(Irreducibility::No);
    }
    if !f.rational_roots().is_empty() {
        return Ok(Irreducibility::No);
    }
    Ok(match irreducibility_sieve(f, primes) {
        SieveOutcome::Certified { .. } => Irreducibility::Certified,
        SieveOutcome::Unknown => Irreducibility::Assumed,
    })
}

pub const DEFAULT_SIEVE_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(v)
    }

    #[test]
    fn certifies_x2_plus_1_with_prime_3() {
        assert!(irreducibility_sieve(&p(&[1, 0, 1]), &[3]).is_certified());
    }

    #[test]
    fn x4_plus_1_unknown_under_default_primes() {
        let out = irreducibility_sieve(&p(&[1, 0, 0, 0, 1]), &DEFAULT_SIEVE_PRIMES);
        assert_eq!(out, SieveOutcome::Unknown);
    }

    #[test]
    fn reducible_never_certified() {
        // x^2 - 1: degree set mod 3 contains 1
        assert_eq!(
            irreducibility_sieve(&p(&[-1, 0, 1]), &[3]),
            SieveOutcome::Unknown
        );
    }

    #[test]
    fn lehmer_certified_by_2_and_3() {
        let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        assert!(irreducibility_sieve(&lehmer, &[2, 3]).is_certified());
    }

    #[test]
    fn status_detects_rational_roots() {
        assert_eq!(
            irreducibility_status(&p(&[-1, 0, 1]), &DEFAULT_SIEVE_PRIMES).unwrap(),
            Irreducibility::No
        );
        assert_eq!(
            irreducibility_status(&p(&[-2, 1]), &DEFAULT_SIEVE_PRIMES).unwrap(),
            Irreducibility::Certified
        );
    }
}
