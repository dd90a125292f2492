//! Certified Weil height and Mahler measure of an algebraic number given by
//! its minimal polynomial.
//!
//! h(alpha) = (1/d) log(|a| prod_i max(1, |alpha_i|)) in nats. Zero height is
//! decided exactly through the root-of-unity certificate, never numerically.

use crate::error::{Error, Result};
use crate::interval::{Dir, Dyadic, RealEnclosure, DEFAULT_PREC_CAP};
use crate::poly::{
    cyclotomic_test, irreducibility_status, IntPolynomial, Irreducibility, DEFAULT_SIEVE_PRIMES,
};
use crate::roots::{isolate_roots, log_plus_abs, ComplexBox};

#[derive(Clone, Debug)]
pub struct HeightResult {
    /// Enclosure of h(alpha) in nats; lower endpoint never negative.
    pub h: RealEnclosure,
    /// Exact Kronecker certificate: alpha is 0 or a root of unity.
    pub exact_zero: bool,
    pub degree: usize,
    /// Enclosure of log M(f) = log|a| + sum log max(1, |alpha_i|); h = mahler_log / d.
    pub mahler_log: RealEnclosure,
    pub irreducibility: Irreducibility,
    /// Order n when the roots are primitive n-th roots of unity.
    pub root_of_unity_order: Option<u64>,
    /// Width target unreachable at the precision cap; widest achieved returned.
    pub indeterminate: bool,
}

fn zero_result(degree: usize, irr: Irreducibility, order: Option<u64>) -> HeightResult {
    HeightResult {
        h: RealEnclosure::point(Dyadic::zero()),
        exact_zero: true,
        degree,
        mahler_log: RealEnclosure::point(Dyadic::zero()),
        irreducibility: irr,
        root_of_unity_order: order,
        indeterminate: false,
    }
}

/// Divide an enclosure by a positive integer, outward.
fn div_by_degree(x: &RealEnclosure, d: usize, prec: u32) -> RealEnclosure {
    let dd = Dyadic::from_i64(d as i64);
    RealEnclosure::from_endpoints(
        x.lo_fin().div_rounded(&dd, prec, Dir::Down),
        x.hi_fin().div_rounded(&dd, prec, Dir::Up),
    )
}

pub fn weil_height(f: &IntPolynomial, target_width: &Dyadic, cap: u32) -> Result<HeightResult> {
    let (_, f) = f.primitive_part()?;
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    if !f.squarefree_check()? {
        return Err(Error::NotSquarefree);
    }
    let irr = irreducibility_status(&f, &DEFAULT_SIEVE_PRIMES)?;
    if irr == Irreducibility::No {
        return Err(Error::Reducible);
    }

    // Kronecker certificate: alpha = 0 (f = x) or a root of unity.
    if f == IntPolynomial::x() {
        return Ok(zero_result(d, irr, None));
    }
    if let Some(n) = cyclotomic_test(&f) {
        return Ok(zero_result(d, irr, Some(n)));
    }

    let lead = f.leading(); // positive after primitive_part
    let mut box_target = {
        // log|z| error is roughly box width / |z|; spread the height budget
        // over d roots plus slack and tighten on failure.
        let denom = Dyadic::from_i64(8 * (d as i64 + 1));
        target_width.div_rounded(&denom, 64, Dir::Down)
    };
    let mut indeterminate = false;
    let mut best: Option<(RealEnclosure, RealEnclosure)> = None;
    loop {
        let prec = ((-box_target.msb_exp().unwrap_or(-64)) as u32).max(64) + 32;
        let boxes = match isolate_roots(&f, &box_target, cap) {
            Ok(b) => b,
            Err(Error::PrecisionCap { .. }) => {
                indeterminate = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let mut mahler = RealEnclosure::from_bigint(&lead).log(prec)?;
        for b in &boxes {
            mahler = mahler.add(&log_plus_abs(b, prec), prec);
        }
        // Mahler measure of an integer polynomial is >= 1.
        mahler = mahler.max(&RealEnclosure::point(Dyadic::zero()));
        let h = div_by_degree(&mahler, d, prec);
        let narrow_enough = h
            .width()
            .map_or(false, |w| w.cmp_exact(target_width) != std::cmp::Ordering::Greater);
        best = Some((h, mahler));
        if narrow_enough {
            break;
        }
        let next = box_target.shl(-2);
        let prec_needed = (-next.msb_exp().unwrap_or(0)).max(0) as u32;
        if prec_needed > cap {
            indeterminate = true;
            break;
        }
        box_target = next;
    }
    let (h, mahler_log) = best.ok_or(Error::PrecisionCap { cap })?;
    Ok(HeightResult {
        h,
        exact_zero: false,
        degree: d,
        mahler_log,
        irreducibility: irr,
        root_of_unity_order: None,
        indeterminate,
    })
}

pub const DEFAULT_TARGET_WIDTH: f64 = 1e-12;

pub fn weil_height_default(f: &IntPolynomial) -> Result<HeightResult> {
    weil_height(
        f,
        &Dyadic::from_f64(DEFAULT_TARGET_WIDTH).unwrap(),
        DEFAULT_PREC_CAP,
    )
}

/// The comparison constant h(theta) = (1/3) log theta, where theta is the
/// real root > 1 of x^3 - x - 1 (the smallest height among non-reciprocal
/// algebraic integers).
pub fn smyth_reference() -> RealEnclosure {
    let f = IntPolynomial::from_i64(&[-1, -1, 0, 1]);
    weil_height_default(&f)
        .expect("x^3 - x - 1 is irreducible and squarefree")
        .h
}

/// Re-exported box isolation at the height module's defaults.
pub fn isolate_for_height(f: &IntPolynomial, target_width: &Dyadic) -> Result<Vec<ComplexBox>> {
    isolate_roots(f, target_width, DEFAULT_PREC_CAP)
}
