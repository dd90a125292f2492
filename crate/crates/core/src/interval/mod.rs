//! Outward-rounded enclosure arithmetic over the reals.
//!
//! Every operation returns an enclosure containing the exact image of its
//! input enclosures. Rounding direction is applied per endpoint and never
//! touches process-global state. Endpoints may be signed-infinity sentinels
//! so log-scale overflow can be represented; ordinary pipelines stay finite.

mod dyadic;
mod functions;

pub use dyadic::{Dir, Dyadic};
pub(crate) use functions::{exp_point, ln_point};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

use std::cmp::Ordering;

/// Default working precision in bits, and the adaptive-refinement cap.
pub const DEFAULT_PREC: u32 = 128;
pub const DEFAULT_PREC_CAP: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    Fin(Dyadic),
    PosInf,
}

impl Endpoint {
    pub fn fin(&self) -> &Dyadic {
        match self {
            Endpoint::Fin(d) => d,
            _ => panic!("infinite endpoint where finite required"),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Endpoint::Fin(_))
    }

    fn cmp_ep(&self, other: &Endpoint) -> Ordering {
        use Endpoint::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp_exact(b),
        }
    }

    fn add(&self, other: &Endpoint, prec: u32, dir: Dir) -> Endpoint {
        use Endpoint::*;
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => panic!("inf - inf in endpoint addition"),
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Fin(a), Fin(b)) => Fin(a.add_rounded(b, prec, dir)),
        }
    }

    fn neg(&self) -> Endpoint {
        match self {
            Endpoint::NegInf => Endpoint::PosInf,
            Endpoint::PosInf => Endpoint::NegInf,
            Endpoint::Fin(d) => Endpoint::Fin(d.neg()),
        }
    }
}

/// Verdict of a one-sided certified comparison. `Overlap` must never be
/// treated as pass or fail; callers retry at higher precision or report
/// indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvOrder {
    Less,
    Greater,
    Overlap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Endpoint,
    hi: Endpoint,
}

impl RealEnclosure {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Self {
        debug_assert!(lo.cmp_ep(&hi) != Ordering::Greater, "inverted enclosure");
        RealEnclosure { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        RealEnclosure {
            lo: Endpoint::Fin(d.clone()),
            hi: Endpoint::Fin(d),
        }
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic) -> Self {
        Self::new(Endpoint::Fin(lo), Endpoint::Fin(hi))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::point(Dyadic::from_i64(n))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::point(Dyadic::from_bigint(n))
    }

    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        Self::from_endpoints(
            Dyadic::from_bigrational(q, prec, Dir::Down),
            Dyadic::from_bigrational(q, prec, Dir::Up),
        )
    }

    pub fn neg_inf_to(hi: Dyadic) -> Self {
        Self::new(Endpoint::NegInf, Endpoint::Fin(hi))
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn lo_fin(&self) -> &Dyadic {
        self.lo.fin()
    }

    pub fn hi_fin(&self) -> &Dyadic {
        self.hi.fin()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.is_finite() && self.lo_fin() == self.hi_fin()
    }

    pub fn contains_zero(&self) -> bool {
        let z = Dyadic::zero();
        self.lo.cmp_ep(&Endpoint::Fin(z.clone())) != Ordering::Greater
            && self.hi.cmp_ep(&Endpoint::Fin(z)) != Ordering::Less
    }

    pub fn is_strictly_positive(&self) -> bool {
        match &self.lo {
            Endpoint::Fin(d) => d.sign() > 0,
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
        }
    }

    pub fn contains_ratio(&self, q: &BigRational) -> bool {
        let lo_ok = match &self.lo {
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
            Endpoint::Fin(d) => d.to_bigrational() <= *q,
        };
        let hi_ok = match &self.hi {
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
            Endpoint::Fin(d) => *q <= d.to_bigrational(),
        };
        lo_ok && hi_ok
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.lo.cmp_ep(&other.lo) != Ordering::Greater && self.hi.cmp_ep(&other.hi) != Ordering::Less
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo.cmp_ep(&other.hi) != Ordering::Greater && other.lo.cmp_ep(&self.hi) != Ordering::Greater
    }

    /// hi - lo rounded up; None when an endpoint is infinite.
    pub fn width(&self) -> Option<Dyadic> {
        if !self.is_finite() {
            return None;
        }
        Some(self.hi_fin().sub_exact(self.lo_fin()))
    }

    pub fn midpoint(&self) -> Dyadic {
        let s = self.lo_fin().add_exact(self.hi_fin());
        s.shl(-1)
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        Self::new(
            self.lo.add(&other.lo, prec, Dir::Down),
            self.hi.add(&other.hi, prec, Dir::Up),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.hi.neg(), self.lo.neg())
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let (a, b) = (self.lo_fin(), self.hi_fin());
        let (c, d) = (other.lo_fin(), other.hi_fin());
        let mut products = [
            a.mul_exact(c),
            a.mul_exact(d),
            b.mul_exact(c),
            b.mul_exact(d),
        ];
        products.sort();
        Self::from_endpoints(
            products[0].round(prec, Dir::Down),
            products[3].round(prec, Dir::Up),
        )
    }

    pub fn mul_i64(&self, k: i64, prec: u32) -> Self {
        self.mul(&Self::from_i64(k), prec)
    }

    pub fn mul_bigint(&self, k: &BigInt, prec: u32) -> Self {
        self.mul(&Self::from_bigint(k), prec)
    }

    /// Tight square (no sign-crossing overestimate).
    pub fn sqr(&self, prec: u32) -> Self {
        let a = self.lo_fin();
        let b = self.hi_fin();
        let asq = a.mul_exact(a);
        let bsq = b.mul_exact(b);
        let (lo, hi) = if self.contains_zero() {
            (Dyadic::zero(), asq.max(bsq))
        } else if asq <= bsq {
            (asq, bsq)
        } else {
            (bsq, asq)
        };
        Self::from_endpoints(lo.round(prec, Dir::Down), hi.round(prec, Dir::Up))
    }

    pub fn div(&self, other: &Self, prec: u32) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::IntervalDivByZero);
        }
        let (c, d) = (other.lo_fin(), other.hi_fin());
        let inv = if c.sign() > 0 {
            Self::from_endpoints(
                Dyadic::one().div_rounded(d, prec + 4, Dir::Down),
                Dyadic::one().div_rounded(c, prec + 4, Dir::Up),
            )
        } else {
            Self::from_endpoints(
                Dyadic::one().div_rounded(d, prec + 4, Dir::Down),
                Dyadic::one().div_rounded(c, prec + 4, Dir::Up),
            )
        };
        Ok(self.mul(&inv, prec))
    }

    pub fn abs(&self) -> Self {
        let z = Dyadic::zero();
        if !self.is_finite() {
            panic!("abs of infinite enclosure");
        }
        if self.lo_fin().sign() >= 0 {
            self.clone()
        } else if self.hi_fin().sign() <= 0 {
            self.neg()
        } else {
            Self::from_endpoints(z, self.lo_fin().neg().max(self.hi_fin().clone()))
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        let lo = if self.lo.cmp_ep(&other.lo) == Ordering::Less {
            other.lo.clone()
        } else {
            self.lo.clone()
        };
        let hi = if self.hi.cmp_ep(&other.hi) == Ordering::Less {
            other.hi.clone()
        } else {
            self.hi.clone()
        };
        Self::new(lo, hi)
    }

    /// One-sided certified comparison.
    pub fn compare(&self, other: &Self) -> IvOrder {
        if self.hi.cmp_ep(&other.lo) == Ordering::Less {
            return IvOrder::Less;
        }
        if self.lo.cmp_ep(&other.hi) == Ordering::Greater {
            return IvOrder::Greater;
        }
        IvOrder::Overlap
    }

    /// Natural logarithm; requires lo > 0.
    pub fn log(&self, prec: u32) -> Result<Self> {
        if !self.is_strictly_positive() {
            return Err(Error::LogDomain);
        }
        let lo = ln_point(self.lo_fin(), prec, Dir::Down);
        let hi = match &self.hi {
            Endpoint::PosInf => Endpoint::PosInf,
            Endpoint::Fin(d) => Endpoint::Fin(ln_point(d, prec, Dir::Up)),
            Endpoint::NegInf => unreachable!(),
        };
        Ok(Self::new(Endpoint::Fin(lo), hi))
    }

    pub fn exp(&self, prec: u32) -> Self {
        let lo = match &self.lo {
            Endpoint::NegInf => Endpoint::Fin(Dyadic::zero()),
            Endpoint::Fin(d) => Endpoint::Fin(exp_point(d, prec, Dir::Down)),
            Endpoint::PosInf => Endpoint::PosInf,
        };
        let hi = match &self.hi {
            Endpoint::PosInf => Endpoint::PosInf,
            Endpoint::Fin(d) => Endpoint::Fin(exp_point(d, prec, Dir::Up)),
            Endpoint::NegInf => unreachable!("enclosure with hi = -inf"),
        };
        Self::new(lo, hi)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        if !self.is_finite() || self.lo_fin().sign() < 0 {
            return Err(Error::SqrtDomain);
        }
        Ok(Self::from_endpoints(
            self.lo_fin().sqrt_rounded(prec, Dir::Down),
            self.hi_fin().sqrt_rounded(prec, Dir::Up),
        ))
    }

    pub fn pow_i64(&self, e: i64, prec: u32) -> Result<Self> {
        if e < 0 {
            let p = self.pow_i64(-e, prec)?;
            return Self::from_i64(1).div(&p, prec);
        }
        let mut result = Self::from_i64(1);
        let mut base = self.clone();
        let mut e = e as u64;
        if e == 0 {
            return Ok(result);
        }
        loop {
            if e & 1 == 1 {
                result = result.mul(&base, prec + 8);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.sqr(prec + 8);
        }
        Ok(Self::from_endpoints(
            result.lo_fin().round(prec, Dir::Down),
            result.hi_fin().round(prec, Dir::Up),
        ))
    }

    /// x^q for exact rational q; non-integer exponents require lo > 0.
    pub fn pow_ratio(&self, e: &BigRational, prec: u32) -> Result<Self> {
        if e.is_integer() {
            let k = e
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
            return self.pow_i64(k, prec);
        }
        if !self.is_strictly_positive() {
            return Err(Error::PowDomain);
        }
        let ln = self.log(prec + 8)?;
        let e_iv = Self::from_ratio(e, prec + 8);
        Ok(ln.mul(&e_iv, prec + 8).exp(prec))
    }

    /// Outward re-round of both endpoints (used when a caller assembled
    /// endpoints at higher working precision).
    pub fn round_outward(&self, prec: u32) -> Self {
        let lo = match &self.lo {
            Endpoint::Fin(d) => Endpoint::Fin(d.round(prec, Dir::Down)),
            e => e.clone(),
        };
        let hi = match &self.hi {
            Endpoint::Fin(d) => Endpoint::Fin(d.round(prec, Dir::Up)),
            e => e.clone(),
        };
        Self::new(lo, hi)
    }

    /// Approximate printable value (midpoint for finite enclosures).
    pub fn to_f64(&self) -> f64 {
        match (&self.lo, &self.hi) {
            (Endpoint::Fin(_), Endpoint::Fin(_)) => self.midpoint().to_f64(Dir::Down),
            (Endpoint::NegInf, _) => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        }
    }
}

/// Constant enclosures at a given precision.
pub mod consts {
    use super::functions;
    use super::RealEnclosure;

    pub fn ln2(prec: u32) -> RealEnclosure {
        functions::ln2(prec)
    }

    pub fn pi(prec: u32) -> RealEnclosure {
        functions::pi(prec)
    }
}

/// Adaptive evaluation: run `f` at doubling precision until it returns
/// Some, or the cap is exceeded.
pub fn refine_until<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> Option<T>,
) -> Result<T> {
    let mut prec = start.max(8);
    loop {
        if let Some(v) = f(prec) {
            return Ok(v);
        }
        if prec >= cap {
            return Err(Error::PrecisionCap { cap });
        }
        prec = (prec * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> RealEnclosure {
        RealEnclosure::from_endpoints(
            Dyadic::from_f64(lo).unwrap(),
            Dyadic::from_f64(hi).unwrap(),
        )
    }

    #[test]
    fn arith_examples() {
        let s = iv(1.0, 1.0).add(&iv(2.0, 2.0), 64);
        assert!(s.contains_ratio(&BigRational::from_integer(3.into())));
        assert!(s.is_point());

        let m = iv(-1.0, 2.0).mul(&iv(3.0, 4.0), 64);
        assert_eq!(m.lo_fin().to_f64(Dir::Down), -4.0);
        assert_eq!(m.hi_fin().to_f64(Dir::Up), 8.0);

        let mx = iv(0.0, 0.0).max(&iv(-1.0, 2.0));
        assert_eq!(mx.lo_fin().to_f64(Dir::Down), 0.0);
        assert_eq!(mx.hi_fin().to_f64(Dir::Up), 2.0);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(iv(1.0, 2.0).compare(&iv(3.0, 4.0)), IvOrder::Less);
        assert_eq!(iv(1.0, 3.0).compare(&iv(2.0, 4.0)), IvOrder::Overlap);
        assert_eq!(iv(5.0, 6.0).compare(&iv(0.0, 1.0)), IvOrder::Greater);
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        assert!(matches!(
            iv(1.0, 1.0).div(&iv(-1.0, 1.0), 64),
            Err(Error::IntervalDivByZero)
        ));
    }

    #[test]
    fn sqr_is_tight_across_zero() {
        let s = iv(-1.0, 2.0).sqr(64);
        assert_eq!(s.lo_fin().to_f64(Dir::Down), 0.0);
        assert_eq!(s.hi_fin().to_f64(Dir::Up), 4.0);
    }

    #[test]
    fn infinite_endpoints_flow_through_add_and_exp() {
        let x = RealEnclosure::neg_inf_to(Dyadic::from_i64(0));
        let y = x.add(&RealEnclosure::from_i64(5), 64);
        assert!(!y.lo().is_finite());
        let e = y.exp(64);
        assert_eq!(e.lo_fin().sign(), 0); // exp(-inf) = 0
        assert!(e.hi_fin().cmp_exact(&Dyadic::from_i64(149)) == std::cmp::Ordering::Less);
    }
}
