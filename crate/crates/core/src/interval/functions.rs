//! Certified elementary functions on dyadic points: natural log and exp via
//! argument reduction and Taylor series with explicit remainder bounds.

use super::dyadic::{Dir, Dyadic};
use super::RealEnclosure;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

const GUARD: u32 = 24;

static CONST_CACHE: Mutex<Option<HashMap<(u8, u32), RealEnclosure>>> = Mutex::new(None);

fn cached(key: u8, prec: u32, compute: impl FnOnce() -> RealEnclosure) -> RealEnclosure {
    {
        let guard = CONST_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(v) = map.get(&(key, prec)) {
                return v.clone();
            }
        }
    }
    let v = compute();
    let mut guard = CONST_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((key, prec), v.clone());
    v
}

/// ln 2 = 2 atanh(1/3) = 2 sum t^(2i+1)/(2i+1), t = 1/3; all terms positive,
/// tail after term n bounded by (9/8) * next term.
pub fn ln2(prec: u32) -> RealEnclosure {
    cached(0, prec, || {
        let mut sum = BigRational::zero();
        let third_sq = BigRational::new(BigInt::one(), BigInt::from(9));
        let mut power = BigRational::new(BigInt::one(), BigInt::from(3));
        let mut k = 0u32;
        let threshold = BigRational::new(BigInt::one(), BigInt::one() << (prec + 8) as u64);
        loop {
            let term = &power / BigRational::from_integer(BigInt::from(2 * k + 1));
            if term < threshold {
                let tail = &term * BigRational::new(BigInt::from(9), BigInt::from(8));
                let lo = &sum * BigRational::from_integer(BigInt::from(2));
                let hi = (&sum + &tail) * BigRational::from_integer(BigInt::from(2));
                return RealEnclosure::from_endpoints(
                    Dyadic::from_bigrational(&lo, prec, Dir::Down),
                    Dyadic::from_bigrational(&hi, prec, Dir::Up),
                );
            }
            sum += term;
            power *= &third_sq;
            k += 1;
        }
    })
}

/// Machin: pi = 16 atan(1/5) - 4 atan(1/239), with alternating-series
/// bracketing of each arctangent.
pub fn pi(prec: u32) -> RealEnclosure {
    cached(1, prec, || {
        let a5 = atan_inv(5, prec + 8);
        let a239 = atan_inv(239, prec + 8);
        let lo = BigRational::from_integer(BigInt::from(16)) * &a5.0
            - BigRational::from_integer(BigInt::from(4)) * &a239.1;
        let hi = BigRational::from_integer(BigInt::from(16)) * &a5.1
            - BigRational::from_integer(BigInt::from(4)) * &a239.0;
        RealEnclosure::from_endpoints(
            Dyadic::from_bigrational(&lo, prec, Dir::Down),
            Dyadic::from_bigrational(&hi, prec, Dir::Up),
        )
    })
}

/// (lower, upper) rational bounds for atan(1/k) from consecutive partial sums.
fn atan_inv(k: u32, prec: u32) -> (BigRational, BigRational) {
    let ksq = BigRational::from_integer(BigInt::from(k) * BigInt::from(k));
    let mut power = BigRational::new(BigInt::one(), BigInt::from(k));
    let mut sum = BigRational::zero();
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (prec + 4) as u64);
    let mut i = 0u32;
    loop {
        let term = &power / BigRational::from_integer(BigInt::from(2 * i + 1));
        let prev = sum.clone();
        if i % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < threshold {
            // True value lies between consecutive partial sums.
            return if prev < sum {
                (prev, sum)
            } else {
                (sum, prev)
            };
        }
        power /= &ksq;
        i += 1;
    }
}

/// Enclosure of ln(x) for an exact dyadic x > 0, evaluated at working
/// precision prec + GUARD and rounded outward at prec; `dir` picks the side.
pub fn ln_point(x: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
    let iv = ln_point_enclosure(x, prec);
    match dir {
        Dir::Down => iv.lo_fin().clone(),
        Dir::Up => iv.hi_fin().clone(),
    }
}

pub fn ln_point_enclosure(x: &Dyadic, prec: u32) -> RealEnclosure {
    assert!(x.sign() > 0, "ln of nonpositive dyadic");
    let w = prec + GUARD;
    // x = m * 2^b with m in [1, 2)
    let b = x.msb_exp().unwrap() - 1;
    let m = x.shl(-b);
    // t = (m-1)/(m+1) in [0, 1/3); ln m = 2 atanh(t)
    let one = Dyadic::one();
    let num = m.sub_exact(&one);
    let den = m.add_exact(&one);
    let ln_m = if num.is_zero() {
        RealEnclosure::point(Dyadic::zero())
    } else {
        let t_lo = num.div_rounded(&den, w, Dir::Down);
        let t_hi = num.div_rounded(&den, w, Dir::Up);
        let tsq_lo = t_lo.mul_rounded(&t_lo, w, Dir::Down);
        let tsq_hi = t_hi.mul_rounded(&t_hi, w, Dir::Up);
        let mut pow_lo = t_lo.clone();
        let mut pow_hi = t_hi.clone();
        let mut s_lo = Dyadic::zero();
        let mut s_hi = Dyadic::zero();
        let thr_exp = -(w as i64) - 2;
        let mut k = 0u32;
        loop {
            let denom = Dyadic::from_i64((2 * k + 1) as i64);
            let term_lo = pow_lo.div_rounded(&denom, w, Dir::Down);
            let term_hi = pow_hi.div_rounded(&denom, w, Dir::Up);
            s_lo = s_lo.add_rounded(&term_lo, w, Dir::Down);
            s_hi = s_hi.add_rounded(&term_hi, w, Dir::Up);
            if term_hi.msb_exp().map_or(true, |e| e < thr_exp) {
                // Geometric tail: ratio t^2 <= 1/9 + eps, so tail < 2 * threshold.
                let tail = Dyadic::new(1, 1u32.into(), thr_exp + 1);
                s_hi = s_hi.add_rounded(&tail, w, Dir::Up);
                break;
            }
            pow_lo = pow_lo.mul_rounded(&tsq_lo, w, Dir::Down);
            pow_hi = pow_hi.mul_rounded(&tsq_hi, w, Dir::Up);
            k += 1;
            assert!(k < 4 * w, "atanh series failed to converge");
        }
        RealEnclosure::from_endpoints(s_lo.shl(1), s_hi.shl(1))
    };
    let b_iv = RealEnclosure::from_i64(b);
    let result = ln_m.add(&b_iv.mul(&ln2(w), w), w);
    result.round_outward(prec)
}

/// Enclosure endpoint of exp(x) for an exact dyadic x.
pub fn exp_point(x: &Dyadic, prec: u32, dir: Dir) -> Dyadic {
    let iv = exp_point_enclosure(x, prec);
    match dir {
        Dir::Down => iv.lo_fin().clone(),
        Dir::Up => iv.hi_fin().clone(),
    }
}

pub fn exp_point_enclosure(x: &Dyadic, prec: u32) -> RealEnclosure {
    let w = prec + GUARD;
    if x.is_zero() {
        return RealEnclosure::point(Dyadic::one());
    }
    assert!(
        x.msb_exp().unwrap() <= 48,
        "exp argument out of supported range"
    );
    // Reduce: x = k ln2 + r, |r| <= 0.37; exp(x) = 2^k exp(r).
    let xf = x.to_f64(Dir::Down);
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let ln2_iv = ln2(w);
    let r = RealEnclosure::point(x.clone()).sub(&ln2_iv.mul_i64(k, w), w);
    // Taylor sum of exp(r) with remainder |r|^(N+1)/(N+1)! * 1/(1-|r|) < 2*term.
    let mut sum = RealEnclosure::point(Dyadic::one());
    let mut term = RealEnclosure::point(Dyadic::one());
    let thr_exp = -(w as i64) - 2;
    let mut n = 1i64;
    loop {
        term = term.mul(&r, w);
        term = term
            .div(&RealEnclosure::from_i64(n), w)
            .expect("nonzero factorial denominator");
        sum = sum.add(&term, w);
        let mag = term
            .lo_fin()
            .abs()
            .max(term.hi_fin().abs())
            .msb_exp();
        if mag.map_or(true, |e| e < thr_exp) {
            let tail = Dyadic::new(1, 1u32.into(), thr_exp + 1);
            let tail_iv = RealEnclosure::from_endpoints(tail.neg(), tail);
            sum = sum.add(&tail_iv, w);
            break;
        }
        n += 1;
        assert!(n < 4 * w as i64, "exp series failed to converge");
    }
    let scaled = RealEnclosure::from_endpoints(sum.lo_fin().shl(k), sum.hi_fin().shl(k));
    scaled.round_outward(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_decimal;

    #[test]
    fn ln2_matches_reference() {
        let iv = ln2(128);
        let reference =
            parse_decimal("0.6931471805599453094172321214581765680755001343602553").unwrap();
        assert!(iv.contains_ratio(&reference));
        assert!(iv.width().unwrap().msb_exp().unwrap() < -120);
    }

    #[test]
    fn pi_matches_reference() {
        let iv = pi(128);
        let reference =
            parse_decimal("3.141592653589793238462643383279502884197169399375106").unwrap();
        assert!(iv.contains_ratio(&reference));
    }

    #[test]
    fn ln_of_two_tight_at_64_bits() {
        let x = Dyadic::from_i64(2);
        let iv = ln_point_enclosure(&x, 64);
        let reference =
            parse_decimal("0.6931471805599453094172321214581765680755001343602553").unwrap();
        assert!(iv.contains_ratio(&reference));
        // width <= 1e-15 at 64-bit precision
        assert!(iv.width().unwrap().msb_exp().unwrap() < -50);
    }

    #[test]
    fn exp_zero_is_one() {
        let iv = exp_point_enclosure(&Dyadic::zero(), 64);
        assert!(iv.is_point());
        assert_eq!(iv.lo_fin().clone(), Dyadic::one());
    }

    #[test]
    fn exp_ln_composition_contains_input() {
        for v in [3i64, 7, 100, 12345] {
            let x = Dyadic::from_i64(v);
            let ln = ln_point_enclosure(&x, 96);
            let back = ln.exp(96);
            assert!(
                back.contains_ratio(&x.to_bigrational()),
                "exp(ln({})) lost containment",
                v
            );
        }
    }

    #[test]
    fn exp_of_negative_hundreds() {
        // (2/e)^1000-scale arguments must stay finite and bracketed
        let x = Dyadic::from_f64(-306.85).unwrap();
        let iv = exp_point_enclosure(&x, 96);
        assert!(iv.is_strictly_positive());
        assert!(iv.hi_fin().msb_exp().unwrap() < -430);
    }
}
