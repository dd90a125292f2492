use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Rounding direction: toward minus or plus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Exact dyadic rational sign * mant * 2^exp.
///
/// Canonical form: zero has sign 0, mant 0, exp 0; otherwise mant is odd.
/// All arithmetic is exact unless a rounding precision is passed explicitly,
/// so equality of representations is equality of values.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    sign: i8,
    mant: BigUint,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            sign: 0,
            mant: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            sign: 1,
            mant: BigUint::one(),
            exp: 0,
        }
    }

    pub fn new(sign: i8, mant: BigUint, exp: i64) -> Self {
        if sign == 0 || mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            sign,
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let sign = match n.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        };
        Self::new(sign, n.magnitude().clone(), 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Exact conversion; every finite f64 is dyadic.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i8 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Self::new(sign, BigUint::from(mant), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Smallest e with |self| < 2^e (None for zero).
    pub fn msb_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            sign: -self.sign,
            mant: self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            sign: self.sign.abs(),
            mant: self.mant.clone(),
            exp: self.exp,
        }
    }

    /// Exact multiplication by 2^k.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            sign: self.sign,
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Nearest integer, ties away from zero; exact.
    pub fn to_bigint_round(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let mag = if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let shift = (-self.exp) as u64;
            if shift > self.mant.bits() + 1 {
                BigUint::zero()
            } else {
                (&self.mant + (BigUint::one() << (shift - 1))) >> shift
            }
        };
        BigInt::from(mag) * BigInt::from(self.sign)
    }

    pub fn to_bigrational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let m = BigInt::from(self.mant.clone()) * BigInt::from(self.sign);
        if self.exp >= 0 {
            BigRational::from_integer(m << self.exp as u64)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exp) as u64)
        }
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        let ta = self.msb_exp().unwrap();
        let tb = other.msb_exp().unwrap();
        if ta != tb {
            return ta.cmp(&tb);
        }
        // Same magnitude window: align mantissas.
        let ea = self.exp;
        let eb = other.exp;
        if ea >= eb {
            let a = &self.mant << (ea - eb) as u64;
            a.cmp(&other.mant)
        } else {
            let b = &other.mant << (eb - ea) as u64;
            self.mant.cmp(&b)
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match self.sign {
            0 => Ordering::Equal,
            1 => self.cmp_magnitude(other),
            _ => other.cmp_magnitude(self),
        }
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = bits - prec as u64;
        let kept = &self.mant >> drop;
        let inexact = (&kept << drop) != self.mant;
        let away = inexact
            && match (self.sign, dir) {
                (1, Dir::Up) | (-1, Dir::Down) => true,
                _ => false,
            };
        let kept = if away { kept + 1u32 } else { kept };
        Self::new(self.sign, kept, self.exp + drop as i64)
    }

    /// Exact addition. Cost grows with the exponent gap; callers that may
    /// feed wildly different magnitudes should use `add_rounded`.
    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = BigInt::from(self.mant.clone()) * self.sign << (self.exp - e) as u64;
        let b = BigInt::from(other.mant.clone()) * other.sign << (other.exp - e) as u64;
        Self::from_bigint(&(a + b)).shl(e)
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    /// Directed addition at `prec` bits. Exact when the magnitudes are
    /// comparable; otherwise the smaller operand is replaced by a one-ulp
    /// nudge in the safe direction, so containment is preserved without
    /// materializing huge aligned mantissas.
    pub fn add_rounded(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let ta = self.msb_exp().unwrap();
        let tb = other.msb_exp().unwrap();
        let gap = (ta - tb).abs();
        if gap <= prec as i64 + 64 {
            return self.add_exact(other).round(prec, dir);
        }
        let (big, small) = if ta > tb {
            (self, other)
        } else {
            (other, self)
        };
        let mut r = big.round(prec + 8, dir);
        let nudge_needed = match dir {
            Dir::Down => small.sign < 0,
            Dir::Up => small.sign > 0,
        };
        if nudge_needed {
            // |small| < 2^(top - prec - 64) <= ulp, so one ulp covers it.
            let ulp = Dyadic {
                sign: if dir == Dir::Down { -1 } else { 1 },
                mant: BigUint::one(),
                exp: big.msb_exp().unwrap() - prec as i64 - 12,
            };
            r = r.add_exact(&ulp);
        }
        r.round(prec, dir)
    }

    /// Exact product.
    pub fn mul_exact(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic {
            sign: self.sign * other.sign,
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_rounded(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        self.mul_exact(other).round(prec, dir)
    }

    /// Directed division to `prec` significant bits. Panics on zero divisor.
    pub fn div_rounded(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let sign = self.sign * other.sign;
        let want = prec as i64 + 2;
        let shift = want + other.mant.bits() as i64 - self.mant.bits() as i64;
        let (num, den) = if shift >= 0 {
            (&self.mant << shift as u64, other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << (-shift) as u64)
        };
        let (q, r) = num.div_rem(&den);
        let inexact = !r.is_zero();
        let away = inexact
            && match (sign, dir) {
                (1, Dir::Up) | (-1, Dir::Down) => true,
                _ => false,
            };
        let q = if away { q + 1u32 } else { q };
        Self::new(sign, q, self.exp - other.exp - shift).round(prec, dir)
    }

    /// Directed square root; self must be >= 0.
    pub fn sqrt_rounded(&self, prec: u32, dir: Dir) -> Self {
        assert!(self.sign >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = (self.exp - shift) / 2;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = match (dir, exact) {
            (Dir::Up, false) => s + 1u32,
            _ => s,
        };
        Self::new(1, s, e).round(prec, dir)
    }

    /// Directed conversion of an integer ratio.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Dir) -> Self {
        assert!(!den.is_zero());
        let a = Self::from_bigint(num);
        let b = Self::from_bigint(den);
        a.div_rounded(&b, prec, dir)
    }

    pub fn from_bigrational(q: &BigRational, prec: u32, dir: Dir) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    /// Directed conversion to f64 (saturating to +-inf / 0 at the extremes).
    pub fn to_f64(&self, dir: Dir) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = self.msb_exp().unwrap();
        if top > 1030 {
            return match (self.sign, dir) {
                (1, _) => f64::INFINITY,
                (-1, Dir::Down) => f64::NEG_INFINITY,
                (-1, Dir::Up) => -f64::MAX,
                _ => unreachable!(),
            };
        }
        if top < -1080 {
            return match (self.sign, dir) {
                (1, Dir::Down) => 0.0,
                (1, Dir::Up) => f64::MIN_POSITIVE * f64::EPSILON, // smallest subnormal
                (-1, Dir::Down) => -(f64::MIN_POSITIVE * f64::EPSILON),
                (-1, Dir::Up) => -0.0,
                _ => unreachable!(),
            };
        }
        let r = self.round(53, dir);
        let m = r.mant.to_u64().unwrap_or(u64::MAX) as f64 * r.sign as f64;
        let v = ldexp(m, r.exp);
        // One extra directed nudge absorbs any double rounding above.
        let nudged = match dir {
            Dir::Down => next_down(v),
            Dir::Up => next_up(v),
        };
        let exact_check = Self::from_f64(v);
        if exact_check.as_ref() == Some(self) {
            v
        } else {
            nudged
        }
    }
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    // Chunked scaling; powi alone overflows its intermediate reciprocal for
    // exponents beyond +-1023.
    while e > 600 {
        m *= 2f64.powi(600);
        e -= 600;
        if !m.is_finite() {
            return m;
        }
    }
    while e < -600 {
        m *= 2f64.powi(-600);
        e += 600;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = if x == 0.0 { 0u64 } else { x.to_bits() };
    let next = if x >= 0.0 { bits + 1 } else { bits - 1 };
    f64::from_bits(next)
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

impl std::fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Dyadic({} ~ {:e})",
            match self.sign {
                0 => "0".to_string(),
                _ => format!("{}*{}*2^{}", self.sign, self.mant, self.exp),
            },
            self.to_f64(Dir::Down)
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Dyadic::new(1, BigUint::from(8u32), 0), d(8.0));
        assert_eq!(d(8.0).mant_bits(), 1);
        assert!(Dyadic::new(0, BigUint::from(5u32), 3).is_zero());
    }

    #[test]
    fn rounding_directions() {
        // 0b1011 = 11, to 2 bits: down 10 (=8... as 0b10 << 2), up 0b11 << 2 = 12
        let x = Dyadic::from_i64(11);
        assert_eq!(x.round(2, Dir::Down), Dyadic::from_i64(8).shl(0).round(2, Dir::Down));
        assert_eq!(x.round(2, Dir::Down).to_bigrational(), BigRational::from_integer(BigInt::from(8)));
        assert_eq!(x.round(2, Dir::Up).to_bigrational(), BigRational::from_integer(BigInt::from(12)));
        let y = Dyadic::from_i64(-11);
        assert_eq!(y.round(2, Dir::Down).to_bigrational(), BigRational::from_integer(BigInt::from(-12)));
        assert_eq!(y.round(2, Dir::Up).to_bigrational(), BigRational::from_integer(BigInt::from(-8)));
    }

    #[test]
    fn arithmetic_exactness() {
        assert_eq!(d(1.5).add_exact(&d(2.25)), d(3.75));
        assert_eq!(d(1.5).mul_exact(&d(-2.0)), d(-3.0));
        assert_eq!(d(10.0).sub_exact(&d(10.0)), Dyadic::zero());
    }

    #[test]
    fn division_brackets_value() {
        let lo = Dyadic::from_i64(1).div_rounded(&Dyadic::from_i64(3), 64, Dir::Down);
        let hi = Dyadic::from_i64(1).div_rounded(&Dyadic::from_i64(3), 64, Dir::Up);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(lo.to_bigrational() < third && third < hi.to_bigrational());
        assert!(lo < hi);
        let w = hi.sub_exact(&lo);
        assert!(w.msb_exp().unwrap() < -60);
    }

    #[test]
    fn sqrt_brackets_value() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt_rounded(64, Dir::Down);
        let hi = two.sqrt_rounded(64, Dir::Up);
        assert!(lo.mul_exact(&lo).to_bigrational() <= BigRational::from_integer(BigInt::from(2)));
        assert!(hi.mul_exact(&hi).to_bigrational() >= BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn far_apart_addition_is_safe() {
        let big = d(1.0);
        let tiny = Dyadic::new(1, BigUint::one(), -10_000);
        let lo = big.add_rounded(&tiny, 64, Dir::Down);
        let hi = big.add_rounded(&tiny, 64, Dir::Up);
        let exact = big.to_bigrational() + tiny.to_bigrational();
        assert!(lo.to_bigrational() <= exact && exact <= hi.to_bigrational());
        let neg = tiny.neg();
        let lo = big.add_rounded(&neg, 64, Dir::Down);
        let hi = big.add_rounded(&neg, 64, Dir::Up);
        let exact = big.to_bigrational() - tiny.to_bigrational();
        assert!(lo.to_bigrational() <= exact && exact <= hi.to_bigrational());
    }

    #[test]
    fn f64_roundtrip() {
        for v in [0.0, 1.0, -1.5, 0.1, 1e300, -1e-300, 123456.789] {
            let x = Dyadic::from_f64(v).unwrap();
            assert!(x.to_f64(Dir::Down) <= v && v <= x.to_f64(Dir::Up));
        }
    }
}
