//! Arithmetic in Q[x]/(f) for an integer polynomial f.
//!
//! The ring is well-defined for any nonconstant f; it is a field only when f
//! is irreducible. Inversion failure surfaces the discovered factor of f,
//! which is a reducibility witness.

use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    modulus: Arc<IntPolynomial>,
    rep: RatPoly,
}

impl FieldElement {
    pub fn new(modulus: Arc<IntPolynomial>, rep: RatPoly) -> Result<Self> {
        if modulus.degree().map_or(true, |d| d == 0) {
            return Err(Error::ConstantPolynomial);
        }
        let rep = rep.rem(&RatPoly::from(modulus.as_ref()));
        Ok(FieldElement { modulus, rep })
    }

    pub fn from_int_poly(modulus: Arc<IntPolynomial>, rep: &IntPolynomial) -> Result<Self> {
        Self::new(modulus, RatPoly::from(rep))
    }

    pub fn constant(modulus: Arc<IntPolynomial>, c: BigRational) -> Result<Self> {
        Self::new(modulus, RatPoly::constant(c))
    }

    pub fn one(modulus: Arc<IntPolynomial>) -> Result<Self> {
        Self::constant(modulus, BigRational::one())
    }

    /// The generator x mod f.
    pub fn generator(modulus: Arc<IntPolynomial>) -> Result<Self> {
        Self::new(modulus, RatPoly::x())
    }

    pub fn modulus(&self) -> &Arc<IntPolynomial> {
        &self.modulus
    }

    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.degree() == Some(0) && self.rep.coeff(0).is_one()
    }

    fn check_same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_modulus(other)?;
        Ok(FieldElement {
            modulus: self.modulus.clone(),
            rep: self
                .rep
                .add(&other.rep)
                .rem(&RatPoly::from(self.modulus.as_ref())),
        })
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            modulus: self.modulus.clone(),
            rep: self.rep.neg(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_modulus(other)?;
        Ok(FieldElement {
            modulus: self.modulus.clone(),
            rep: self
                .rep
                .mul(&other.rep)
                .rem(&RatPoly::from(self.modulus.as_ref())),
        })
    }

    /// Inverse via the extended gcd in Q[x]. When gcd(rep, f) is nonconstant
    /// the element is a zero divisor and the gcd is returned as an error
    /// payload: a nontrivial factor of f.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible {
                witness: self.modulus.as_ref().clone(),
            });
        }
        let f = RatPoly::from(self.modulus.as_ref());
        let (g, s, _) = self.rep.extended_gcd(&f);
        if g.degree() != Some(0) {
            let (_, witness) = g.clear_denominators();
            return Err(Error::NotInvertible { witness });
        }
        // g is monic constant 1 after normalization, so s * rep = 1 mod f.
        Ok(FieldElement {
            modulus: self.modulus.clone(),
            rep: s.rem(&f),
        })
    }

    /// Binary exponentiation; negative exponents go through `inverse`.
    pub fn pow(&self, e: &BigInt) -> Result<Self> {
        if e.is_negative() {
            return self.inverse()?.pow(&-e);
        }
        let mut result = FieldElement::one(self.modulus.clone())?;
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base)?;
            }
            if i + 1 < bits {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        self.pow(&BigInt::from(e))
    }
}

/// elem_mul from the module contract; mirrors `FieldElement::mul`.
pub fn elem_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

/// elem_pow from the module contract; mirrors `FieldElement::pow`.
pub fn elem_pow(a: &FieldElement, e: i64) -> Result<FieldElement> {
    a.pow_i64(e)
}
