use super::IntPolynomial;
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Dense polynomial over F_p for a small odd-or-even prime p < 2^31.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>, // ascending, canonical
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn from_int_poly(f: &IntPolynomial, p: u64) -> Self {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(&num_bigint::BigInt::from(p));
                r.to_u64().expect("residue fits")
            })
            .collect();
        ModPoly::new(p, coeffs)
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        // Fermat inverse; p prime.
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mulmod(result, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        result
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % self.p;
        }
        ModPoly::new(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + self.p - b) % self.p;
        }
        ModPoly::new(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % self.p as u128;
            }
        }
        ModPoly::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("div_rem: zero divisor");
        let lc_inv = self.inv_scalar(divisor.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd {
            let rd = r.len() - 1;
            let factor = self.mulmod(r[rd], lc_inv);
            if factor != 0 {
                let shift = rd - dd;
                q[shift] = factor;
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    let sub = self.mulmod(factor, dc);
                    r[shift + i] = (r[shift + i] + self.p - sub) % self.p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        (ModPoly::new(self.p, q), ModPoly::new(self.p, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.inv_scalar(self.leading());
        ModPoly::new(
            self.p,
            self.coeffs.iter().map(|&c| self.mulmod(c, inv)).collect(),
        )
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        ModPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mulmod(c, i as u64 % self.p))
                .collect(),
        )
    }

    /// self^e mod modulus by binary exponentiation.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut result = ModPoly::one(self.p);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        result
    }
}

/// Multiset of irreducible-factor degrees of `f` mod `prime` by distinct-degree
/// factorization. Splitting inside a degree class is not performed; the
/// degree multiset is recovered from deg(product)/class degree.
pub fn modp_factor_degrees(f: &IntPolynomial, prime: u64) -> Result<Vec<usize>> {
    let fp = ModPoly::from_int_poly(f, prime);
    if fp.degree() != f.degree() {
        return Err(Error::BadPrime(prime)); // prime divides leading coefficient
    }
    let d = match fp.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    let monic = fp.monic();
    if monic.gcd(&monic.derivative()).degree() != Some(0) {
        return Err(Error::BadPrime(prime)); // not squarefree mod prime
    }
    let mut degrees = vec![];
    let mut v = monic;
    let x = ModPoly::x(prime);
    let mut h = x.clone();
    let mut i = 0usize;
    while v.degree().map_or(false, |dv| dv >= 1) {
        i += 1;
        if 2 * i > v.degree().unwrap() {
            // remaining cofactor is irreducible
            degrees.push(v.degree().unwrap());
            break;
        }
        h = h.pow_mod(prime, &v); // h = x^(p^i) mod v
        let g = h.sub(&x).gcd(&v);
        if let Some(dg) = g.degree() {
            if dg > 0 {
                for _ in 0..dg / i {
                    degrees.push(i);
                }
                v = v.div_rem(&g).0;
                h = h.rem(&v);
            }
        }
    }
    degrees.sort_unstable();
    debug_assert_eq!(degrees.iter().sum::<usize>(), d);
    Ok(degrees)
}
