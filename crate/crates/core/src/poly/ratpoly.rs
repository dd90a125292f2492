use super::IntPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial over Q, ascending coefficient order, canonical
/// (empty vector = zero, last coefficient nonzero otherwise).
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        RatPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
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

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("div_rem: zero divisor");
        let lc = divisor.leading();
        let mut r = self.clone();
        let mut q = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            let factor = r.leading() / lc.clone();
            q[shift] = factor.clone();
            let mut shifted = vec![BigRational::zero(); shift];
            shifted.extend(divisor.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&RatPoly::new(shifted));
        }
        (Self::new(q), r)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd via the Euclidean algorithm over Q.
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

    /// Extended gcd: returns (g, s, t) monic with s*self + t*other = g.
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lc = r0.leading();
        let inv = BigRational::one() / lc;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = BigRational::one() / self.leading();
        self.scale(&inv)
    }

    /// Some(p) when every coefficient is an integer.
    pub fn to_int_polynomial(&self) -> Option<IntPolynomial> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(IntPolynomial::new(out))
    }

    /// Clears denominators: returns (den, p) with den > 0 minimal such that
    /// den * self has integer coefficients; p is that integer polynomial.
    pub fn clear_denominators(&self) -> (BigInt, IntPolynomial) {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let p = IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
        (den, p)
    }

    /// Largest absolute value among numerators and denominators in lowest terms.
    pub fn coeff_height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for c in &self.coeffs {
            h = h.max(c.numer().abs()).max(c.denom().abs());
        }
        h
    }
}

impl From<&IntPolynomial> for RatPoly {
    fn from(p: &IntPolynomial) -> Self {
        RatPoly {
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "RatPoly(0)");
        }
        write!(f, "RatPoly(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})x^{}", c, i)?;
        }
        write!(f, ")")
    }
}
