//! Exact univariate polynomial arithmetic over Z and Q.
//!
//! `IntPolynomial` stores coefficients in ascending degree order as a
//! `Vec<BigInt>`. The representation is canonical: the vector is empty for
//! the zero polynomial, and the last element is nonzero otherwise.

mod cyclo;
mod modp;
mod ratpoly;
mod sieve;

pub use cyclo::{cyclotomic_poly, cyclotomic_test};
pub use modp::{modp_factor_degrees, ModPoly};
pub use ratpoly::RatPoly;
pub use sieve::{irreducibility_sieve, irreducibility_status, Irreducibility, SieveOutcome, DEFAULT_SIEVE_PRIMES};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// x^n with a unit coefficient.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// gcd of all coefficients, always positive for nonzero input.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Splits p = content * primitive with primitive leading coefficient > 0.
    pub fn primitive_part(&self) -> Result<(BigInt, IntPolynomial)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut content = self.content();
        if self.leading().is_negative() {
            content = -content;
        }
        let prim = IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c / &content).collect(),
        };
        Ok((content.abs(), prim))
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    /// Pseudo-remainder: returns R with lc(divisor)^(delta+1) * self = Q * divisor + R.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("pseudo_rem: zero divisor");
        let lc = divisor.leading();
        let mut r = self.clone();
        let delta = self.degree().map_or(0, |d| d.saturating_sub(dd));
        let mut e = delta as i64 + 1;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            let top = r.leading();
            // r = lc*r - top*x^shift*divisor
            let mut shifted = vec![BigInt::zero(); shift];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &top));
            let shifted = IntPolynomial::new(shifted);
            r = r.scale(&lc).sub(&shifted);
            e -= 1;
        }
        for _ in 0..e.max(0) {
            r = r.scale(&lc);
        }
        r
    }

    /// Exact division; error if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = RatPoly::from(self).div_rem(&RatPoly::from(divisor));
        if !r.is_zero() {
            return Err(Error::InvalidParameter(
                "exact_div: remainder is nonzero".into(),
            ));
        }
        q.to_int_polynomial()
            .ok_or_else(|| Error::InvalidParameter("exact_div: quotient not integral".into()))
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        let (_, r) = RatPoly::from(other).div_rem(&RatPoly::from(self));
        r.is_zero()
    }

    /// Primitive gcd over Z via the primitive pseudo-remainder sequence;
    /// result has positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            if other.is_zero() {
                return Self::zero();
            }
            return other.primitive_part().unwrap().1;
        }
        if other.is_zero() {
            return self.primitive_part().unwrap().1;
        }
        let ca = self.content();
        let cb = other.content();
        let g = ca.gcd(&cb);
        let mut a = self.primitive_part().unwrap().1;
        let mut b = other.primitive_part().unwrap().1;
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.scale(&g);
            }
            if r.degree() == Some(0) {
                return IntPolynomial::new(vec![g]);
            }
            a = b;
            b = r.primitive_part().unwrap().1;
        }
    }

    /// True iff gcd(p, p') over Q is constant.
    pub fn squarefree_check(&self) -> Result<bool> {
        match self.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Err(Error::ConstantPolynomial),
            Some(_) => Ok(self.gcd(&self.derivative()).degree() == Some(0)),
        }
    }

    /// Squarefree part: p / gcd(p, p'), primitive, same root set.
    pub fn squarefree_part(&self) -> Result<IntPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        let q = if g.degree() == Some(0) {
            self.clone()
        } else {
            self.exact_div(&g)?
        };
        Ok(q.primitive_part()?.1)
    }

    /// Resultant via the subresultant pseudo-remainder sequence, computed
    /// exactly over Z and returned as a rational for interface uniformity.
    pub fn resultant(&self, other: &Self) -> Result<BigRational> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(BigRational::from_integer(resultant_int(self, other)))
    }

    /// All rational roots p/q in lowest terms (q > 0), found by testing
    /// divisor pairs of the constant and leading coefficients.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = vec![];
        if self.is_zero() || self.degree() == Some(0) {
            return roots;
        }
        // Strip x^k first: root 0.
        let mut p = self.clone();
        if p.constant_term().is_zero() {
            roots.push(BigRational::zero());
            while p.constant_term().is_zero() && p.degree() > Some(0) {
                p = IntPolynomial::new(p.coeffs[1..].to_vec());
            }
        }
        if p.degree() == Some(0) {
            return roots;
        }
        let c0 = p.constant_term().abs();
        let cl = p.leading().abs();
        for num in divisors(&c0) {
            for den in divisors(&cl) {
                if num.gcd(&den) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&num * BigInt::from(sign), den.clone());
                    if p.eval_rational(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Positive divisors; exponential only in the number of prime factors of
    // small constants, which is all we ever feed it.
    let mut out = vec![];
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    let limit = n.sqrt();
    while d <= limit {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
        if d.bits() > 22 {
            // give up on pathological constants; rational-root scan is advisory
            break;
        }
    }
    out.sort();
    out
}

/// res(a, b) over Z by the subresultant PRS (Cohen, Alg. 3.3.7 shape).
fn resultant_int(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    let mut a = a.clone();
    let mut b = b.clone();
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.degree() == Some(0) {
        return sign * b.leading().pow(a.degree().unwrap() as u32);
    }
    let (ca, pa) = a.primitive_part().unwrap();
    let (cb, pb) = b.primitive_part().unwrap();
    let sa = if a.leading().is_negative() { -1i64 } else { 1 };
    let sb = if b.leading().is_negative() { -1i64 } else { 1 };
    // res(c*A, B) = c^{deg B} res(A, B); primitive_part reports |content|,
    // so reattach the stripped signs to the degree-many scalar factors.
    let mut t = sign
        * (BigInt::from(sa) * ca).pow(b.degree().unwrap() as u32)
        * (BigInt::from(sb) * cb).pow(a.degree().unwrap() as u32);
    let mut a = pa;
    let mut b = pb;
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            t = -t;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let denom = &g * h.pow(delta);
        b = IntPolynomial::new(r.coeffs.iter().map(|c| c / &denom).collect());
        g = a.leading();
        h = if delta == 0 {
            h
        } else {
            // h^{1-delta} g^delta, exact over Z
            let num = g.pow(delta);
            if delta == 1 {
                num
            } else {
                num / h.pow(delta - 1)
            }
        };
        if b.is_zero() {
            // common factor of positive degree
            return BigInt::zero();
        }
        if b.degree() == Some(0) {
            let da = a.degree().unwrap() as u32;
            let num = b.leading().pow(da);
            let res_prim = if da == 0 {
                num
            } else {
                num / h.pow(da - 1)
            };
            return t * res_prim;
        }
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({})", self)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                1 => {
                    if a.is_one() {
                        write!(f, "x")?
                    } else {
                        write!(f, "{}x", a)?
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "x^{}", i)?
                    } else {
                        write!(f, "{}x^{}", a, i)?
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Parses the comma-separated, constant-first exact integer format.
/// Whitespace is ignored; `#` starts a comment running to end of input.
pub fn parse_coeffs(s: &str) -> Result<IntPolynomial> {
    let body = match s.find('#') {
        Some(i) => &s[..i],
        None => s,
    };
    let mut coeffs = vec![];
    for part in body.split(',') {
        let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
        if part.is_empty() {
            return Err(Error::InvalidParameter("empty coefficient".into()));
        }
        let v: BigInt = part
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad integer `{}`", part)))?;
        coeffs.push(v);
    }
    if coeffs.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    if coeffs.last().map_or(false, Zero::is_zero) {
        return Err(Error::InvalidParameter(
            "last coefficient must be nonzero".into(),
        ));
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Renders in the same format `parse_coeffs` accepts.
pub fn render_coeffs(p: &IntPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(v)
    }

    #[test]
    fn primitive_part_examples() {
        // 6x^2 - 4 -> (2, 3x^2 - 2)
        let (c, q) = p(&[-4, 0, 6]).primitive_part().unwrap();
        assert_eq!(c, BigInt::from(2));
        assert_eq!(q, p(&[-2, 0, 3]));
        // x^2 - 2 already primitive
        let (c, q) = p(&[-2, 0, 1]).primitive_part().unwrap();
        assert_eq!(c, BigInt::from(1));
        assert_eq!(q, p(&[-2, 0, 1]));
        // -3x -> (3, x): sign normalization
        let (c, q) = p(&[0, -3]).primitive_part().unwrap();
        assert_eq!(c, BigInt::from(3));
        assert_eq!(q, p(&[0, 1]));
        assert!(matches!(
            IntPolynomial::zero().primitive_part(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn squarefree_examples() {
        assert!(p(&[-2, 0, 1]).squarefree_check().unwrap());
        assert!(!p(&[0, 0, 1]).squarefree_check().unwrap());
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        assert!(!p(&[2, -3, 0, 1]).squarefree_check().unwrap());
        assert!(p(&[5]).squarefree_check().is_err());
    }

    #[test]
    fn resultant_examples() {
        let r = p(&[-2, 0, 1]).resultant(&p(&[-3, 0, 1])).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(1)));
        let r = p(&[0, 1]).resultant(&p(&[-5, 1])).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(-5)));
        let r = p(&[1, 0, 1]).resultant(&p(&[1, 0, 1])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_basic() {
        // gcd((x-1)(x+2), (x-1)(x-3)) = x - 1
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        // coprime
        assert_eq!(p(&[-2, 0, 1]).gcd(&p(&[-3, 0, 1])).degree(), Some(0));
    }

    #[test]
    fn rational_roots_finds_all() {
        // (2x-3)(x+1) = 2x^2 - x - 3
        let roots = p(&[-3, -1, 2]).rational_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&BigRational::new(BigInt::from(3), BigInt::from(2))));
        assert!(roots.contains(&BigRational::from_integer(BigInt::from(-1))));
        assert!(p(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn parse_render_roundtrip() {
        let f = parse_coeffs(" -1, -1, 1  # golden").unwrap();
        assert_eq!(f, p(&[-1, -1, 1]));
        assert_eq!(render_coeffs(&f), "-1,-1,1");
        assert!(parse_coeffs("0,0").is_err());
        assert!(parse_coeffs("1,2,0").is_err());
        assert!(parse_coeffs("a,b").is_err());
    }
}
