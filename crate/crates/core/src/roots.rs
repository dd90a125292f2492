//! Certified complex root enclosures of squarefree integer polynomials.
//!
//! Candidates come from floating-point Aberth-Ehrlich iteration; rigor comes
//! only from the a-posteriori certificate. For a candidate z with f'(z) != 0,
//! the logarithmic derivative gives min_i |z - alpha_i| <= deg(f) |f(z)/f'(z)|,
//! so the disk of that radius contains at least one root. When the deg(f)
//! disks are pairwise disjoint, each contains exactly one root. A disk
//! centered on the real axis is its own conjugate, and a disjoint self-
//! conjugate disk with a unique root certifies that the root is real.

use crate::error::{Error, Result};
use crate::interval::{Dir, Dyadic, RealEnclosure};
use crate::poly::IntPolynomial;
use num_complex::Complex64;

/// Disk certificate recorded with each box: exactly one root of f lies
/// within `radius` of `center`, by the residual bound at `precision` bits.
#[derive(Clone, Debug)]
pub struct DiskCertificate {
    pub center: (Dyadic, Dyadic),
    pub radius: Dyadic,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct ComplexBox {
    re: RealEnclosure,
    im: RealEnclosure,
    real: bool,
    cert: DiskCertificate,
}

impl ComplexBox {
    pub fn re(&self) -> &RealEnclosure {
        &self.re
    }

    pub fn im(&self) -> &RealEnclosure {
        &self.im
    }

    /// True when the unique root in the box is certified real.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn certificate(&self) -> &DiskCertificate {
        &self.cert
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        self.cert.center.clone()
    }

    pub fn width(&self) -> Dyadic {
        let wr = self.re.width().expect("finite box");
        let wi = self.im.width().expect("finite box");
        wr.max(wi)
    }

    /// Enclosure of |z| for the unique root z in the box.
    pub fn abs_enclosure(&self, prec: u32) -> RealEnclosure {
        let m2 = self.re.sqr(prec).add(&self.im.sqr(prec), prec);
        m2.sqrt(prec).expect("|z|^2 is nonnegative")
    }

    /// Whether the other box is the complex-conjugate mirror of this one.
    pub fn is_conjugate_of(&self, other: &ComplexBox) -> bool {
        self.re == other.re && self.im == other.im.neg()
    }
}

/// Enclosure of log max(1, |z|) for the unique root in a certified box.
/// Exactly [0, 0] when the root is certified inside the closed unit disk;
/// never negative.
pub fn log_plus_abs(b: &ComplexBox, prec: u32) -> RealEnclosure {
    let mag = b.abs_enclosure(prec + 8);
    let one = RealEnclosure::from_i64(1);
    let clamped = mag.max(&one);
    if clamped.hi_fin().cmp_exact(&Dyadic::one()) == std::cmp::Ordering::Equal {
        return RealEnclosure::point(Dyadic::zero());
    }
    let lg = clamped.log(prec).expect("clamped magnitude >= 1");
    // Clamp the lower end at zero: log max(1,.) >= 0.
    lg.max(&RealEnclosure::point(Dyadic::zero()))
}

#[derive(Clone)]
struct Candidate {
    re: Dyadic,
    im: Dyadic, // zero for real candidates, > 0 for canonical pair members
    pair: bool,
}

/// Complex dyadic point arithmetic: exact products/sums with truncation
/// applied explicitly by callers.
#[derive(Clone)]
struct CPoint {
    re: Dyadic,
    im: Dyadic,
}

impl CPoint {
    fn trunc(&self, prec: u32) -> CPoint {
        CPoint {
            re: trunc(&self.re, prec),
            im: trunc(&self.im, prec),
        }
    }
}

fn trunc(x: &Dyadic, prec: u32) -> Dyadic {
    if x.sign() >= 0 {
        x.round(prec, Dir::Down)
    } else {
        x.round(prec, Dir::Up)
    }
}

fn horner_exact(coeffs: &[Dyadic], z: &CPoint) -> CPoint {
    let mut acc = CPoint {
        re: Dyadic::zero(),
        im: Dyadic::zero(),
    };
    for c in coeffs.iter().rev() {
        let re = acc
            .re
            .mul_exact(&z.re)
            .sub_exact(&acc.im.mul_exact(&z.im))
            .add_exact(c);
        let im = acc.re.mul_exact(&z.im).add_exact(&acc.im.mul_exact(&z.re));
        acc = CPoint { re, im };
    }
    acc
}

fn horner_trunc(coeffs: &[Dyadic], z: &CPoint, prec: u32) -> CPoint {
    let mut acc = CPoint {
        re: Dyadic::zero(),
        im: Dyadic::zero(),
    };
    for c in coeffs.iter().rev() {
        let re = acc
            .re
            .mul_exact(&z.re)
            .sub_exact(&acc.im.mul_exact(&z.im))
            .add_exact(c);
        let im = acc.re.mul_exact(&z.im).add_exact(&acc.im.mul_exact(&z.re));
        acc = CPoint { re, im }.trunc(prec);
    }
    acc
}

/// Isolates all deg(f) roots of a squarefree primitive polynomial into
/// pairwise disjoint certified boxes of width at most `target_width`, with
/// the box multiset closed under complex conjugation and deterministically
/// ordered by (Re, Im) of the disk centers.
pub fn isolate_roots(f: &IntPolynomial, target_width: &Dyadic, cap: u32) -> Result<Vec<ComplexBox>> {
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    if !f.squarefree_check()? {
        return Err(Error::NotSquarefree);
    }
    let (_, f) = f.primitive_part()?;
    let coeffs: Vec<Dyadic> = f.coeffs().iter().map(Dyadic::from_bigint).collect();
    let dcoeffs: Vec<Dyadic> = f
        .derivative()
        .coeffs()
        .iter()
        .map(Dyadic::from_bigint)
        .collect();

    let approx = aberth(&f, 400);
    let mut pair_tol = 1e-7 * scale_of(&approx);
    let mut candidates = classify(&approx, d, pair_tol)?;

    let mut prec: u32 = 64;
    let mut failures = 0u32;
    loop {
        for c in candidates.iter_mut() {
            newton_refine(&coeffs, &dcoeffs, c, prec);
        }
        if let Some(boxes) = certify(&f, &coeffs, &dcoeffs, &candidates, d, target_width, prec) {
            return Ok(boxes);
        }
        failures += 1;
        if failures == 3 {
            // Classification may be wrong near the real axis; redo it tighter.
            pair_tol *= 1e-3;
            candidates = classify(&approx, d, pair_tol)?;
        }
        if prec >= cap {
            return Err(Error::PrecisionCap { cap });
        }
        prec = (prec * 2).min(cap);
    }
}

fn scale_of(roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max)
}

fn classify(approx: &[Complex64], d: usize, tol: f64) -> Result<Vec<Candidate>> {
    let mut reals: Vec<f64> = vec![];
    let mut pos: Vec<Complex64> = vec![];
    let mut neg: Vec<Complex64> = vec![];
    for z in approx {
        if z.im.abs() <= tol {
            reals.push(z.re);
        } else if z.im > 0.0 {
            pos.push(*z);
        } else {
            neg.push(*z);
        }
    }
    if pos.len() != neg.len() || reals.len() + 2 * pos.len() != d {
        return Err(Error::InvalidParameter(
            "root classification failed; conjugate pairing mismatch".into(),
        ));
    }
    let mut candidates: Vec<Candidate> = reals
        .iter()
        .map(|&x| Candidate {
            re: Dyadic::from_f64(x).unwrap_or_else(Dyadic::zero),
            im: Dyadic::zero(),
            pair: false,
        })
        .collect();
    for z in &pos {
        candidates.push(Candidate {
            re: Dyadic::from_f64(z.re).unwrap_or_else(Dyadic::zero),
            im: Dyadic::from_f64(z.im).unwrap_or_else(Dyadic::zero),
            pair: true,
        });
    }
    Ok(candidates)
}

/// Aberth-Ehrlich simultaneous iteration in f64; deterministic start layout.
fn aberth(f: &IntPolynomial, max_iter: usize) -> Vec<Complex64> {
    let d = f.degree().unwrap();
    let c: Vec<f64> = {
        // scale coefficients into f64 range uniformly (does not move roots)
        let max_bits = f
            .coeffs()
            .iter()
            .map(|c| Dyadic::from_bigint(c).mant_bits() as i64 + 0)
            .max()
            .unwrap_or(0);
        let shift = if max_bits > 500 { 500 - max_bits } else { 0 };
        f.coeffs()
            .iter()
            .map(|ci| Dyadic::from_bigint(ci).shl(shift).to_f64(Dir::Down))
            .collect()
    };
    let lead = c[d];
    let radius = 1.0
        + c[..d]
            .iter()
            .map(|ci| (ci / lead).abs())
            .fold(0.0f64, f64::max);
    let radius = radius.clamp(1e-6, 1e12);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius * (0.5 + 0.5 * (k as f64 + 1.0) / d as f64), theta)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for ci in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ci;
        }
        (p, dp)
    };
    for _ in 0..max_iter {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let n = if dp.norm() == 0.0 {
                Complex64::new(1e-12, 1e-12)
            } else {
                p / dp
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - n * s;
            let w = if denom.norm() == 0.0 { n } else { n / denom };
            z[k] -= w;
            moved = moved.max(w.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-14 {
            break;
        }
    }
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    z
}

fn newton_refine(coeffs: &[Dyadic], dcoeffs: &[Dyadic], cand: &mut Candidate, prec: u32) {
    let w = prec + 16;
    for _ in 0..4 {
        let z = CPoint {
            re: cand.re.clone(),
            im: cand.im.clone(),
        };
        let p = horner_trunc(coeffs, &z, w);
        let dp = horner_trunc(dcoeffs, &z, w);
        // q = p / dp in complex arithmetic
        let den = dp
            .re
            .mul_exact(&dp.re)
            .add_exact(&dp.im.mul_exact(&dp.im));
        if den.is_zero() {
            return;
        }
        let num_re = p.re.mul_exact(&dp.re).add_exact(&p.im.mul_exact(&dp.im));
        let num_im = p.im.mul_exact(&dp.re).sub_exact(&p.re.mul_exact(&dp.im));
        let q_re = num_re.div_rounded(&den, w, Dir::Down);
        let q_im = num_im.div_rounded(&den, w, Dir::Down);
        cand.re = trunc(&cand.re.sub_exact(&q_re), w);
        if cand.pair {
            cand.im = trunc(&cand.im.sub_exact(&q_im), w);
            if cand.im.sign() < 0 {
                cand.im = cand.im.neg(); // keep canonical member above the axis
            }
        }
    }
}

fn certify(
    f: &IntPolynomial,
    coeffs: &[Dyadic],
    dcoeffs: &[Dyadic],
    candidates: &[Candidate],
    d: usize,
    target_width: &Dyadic,
    prec: u32,
) -> Option<Vec<ComplexBox>> {
    let _ = f;
    // Expand canonical candidates into all d disk centers.
    let mut centers: Vec<(Dyadic, Dyadic)> = vec![];
    for c in candidates {
        centers.push((c.re.clone(), c.im.clone()));
        if c.pair {
            centers.push((c.re.clone(), c.im.neg()));
        }
    }
    debug_assert_eq!(centers.len(), d);
    let dd = Dyadic::from_i64(d as i64);
    let mut radii: Vec<Dyadic> = Vec::with_capacity(d);
    let half_target = target_width.shl(-1);
    for (a, b) in &centers {
        let z = CPoint {
            re: a.clone(),
            im: b.clone(),
        };
        let p = horner_exact(coeffs, &z);
        let dp = horner_exact(dcoeffs, &z);
        let num = p.re.mul_exact(&p.re).add_exact(&p.im.mul_exact(&p.im));
        let den = dp
            .re
            .mul_exact(&dp.re)
            .add_exact(&dp.im.mul_exact(&dp.im));
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            radii.push(Dyadic::zero());
            continue;
        }
        let rsq = num
            .mul_exact(&dd)
            .mul_exact(&dd)
            .div_rounded(&den, 64, Dir::Up);
        let r = rsq.sqrt_rounded(64, Dir::Up);
        if r.cmp_exact(&half_target) == std::cmp::Ordering::Greater {
            return None;
        }
        radii.push(r);
    }
    // Pairwise disjointness, exact: |zi - zj|^2 > (ri + rj)^2.
    for i in 0..d {
        for j in i + 1..d {
            let dx = centers[i].0.sub_exact(&centers[j].0);
            let dy = centers[i].1.sub_exact(&centers[j].1);
            let dist2 = dx.mul_exact(&dx).add_exact(&dy.mul_exact(&dy));
            let rsum = radii[i].add_exact(&radii[j]);
            let rsum2 = rsum.mul_exact(&rsum);
            if dist2.cmp_exact(&rsum2) != std::cmp::Ordering::Greater {
                return None;
            }
        }
    }
    let mut boxes: Vec<ComplexBox> = centers
        .iter()
        .zip(radii.iter())
        .map(|((a, b), r)| {
            let real = b.is_zero();
            let re = RealEnclosure::from_endpoints(a.sub_exact(r), a.add_exact(r));
            let im = if real {
                RealEnclosure::point(Dyadic::zero())
            } else {
                RealEnclosure::from_endpoints(b.sub_exact(r), b.add_exact(r))
            };
            ComplexBox {
                re,
                im,
                real,
                cert: DiskCertificate {
                    center: (a.clone(), b.clone()),
                    radius: r.clone(),
                    precision: prec,
                },
            }
        })
        .collect();
    boxes.sort_by(|x, y| {
        x.cert
            .center
            .0
            .cmp_exact(&y.cert.center.0)
            .then(x.cert.center.1.cmp_exact(&y.cert.center.1))
    });
    Some(boxes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_decimal;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(v)
    }

    fn tw(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    /// Number of real roots by Sturm's theorem; independent oracle.
    fn sturm_real_root_count(f: &IntPolynomial) -> usize {
        use crate::poly::RatPoly;
        let mut chain = vec![RatPoly::from(f), RatPoly::from(&f.derivative())];
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        let sign_at_inf = |p: &RatPoly, positive: bool| -> i32 {
            let lc = p.leading();
            let s = if lc.is_positive() { 1 } else { -1 };
            if positive || p.degree().unwrap_or(0) % 2 == 0 {
                s
            } else {
                -s
            }
        };
        let count_changes = |positive: bool| -> usize {
            let mut changes = 0;
            let mut last = 0;
            for q in &chain {
                if q.is_zero() {
                    continue;
                }
                let s = sign_at_inf(q, positive);
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
            changes
        };
        count_changes(false) - count_changes(true)
    }

    #[test]
    fn sqrt2_boxes() {
        let boxes = isolate_roots(&p(&[-2, 0, 1]), &tw(1e-10), 4096).unwrap();
        assert_eq!(boxes.len(), 2);
        let r = parse_decimal("1.41421356237309504880168872420969807856967187537694").unwrap();
        assert!(boxes[0].re().contains_ratio(&(-r.clone())));
        assert!(boxes[1].re().contains_ratio(&r));
        assert!(boxes.iter().all(|b| b.is_real()));
        assert!(boxes
            .iter()
            .all(|b| b.width().to_f64(Dir::Up) <= 1e-10));
    }

    #[test]
    fn linear_rational_root_exact() {
        let boxes = isolate_roots(&p(&[-7, 1]), &tw(1e-10), 4096).unwrap();
        assert_eq!(boxes.len(), 1);
        assert!(boxes[0].re().is_point());
        assert!(boxes[0]
            .re()
            .contains_ratio(&BigRational::from_integer(BigInt::from(7))));
        assert!(boxes[0].is_real());
    }

    #[test]
    fn lehmer_salem_root() {
        let lehmer = p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let boxes = isolate_roots(&lehmer, &tw(1e-10), 4096).unwrap();
        assert_eq!(boxes.len(), 10);
        let one = BigRational::from_integer(BigInt::from(1));
        let outside: Vec<_> = boxes
            .iter()
            .filter(|b| b.abs_enclosure(96).lo_fin().to_bigrational() > one)
            .collect();
        assert_eq!(outside.len(), 1);
        let salem =
            parse_decimal("1.176280818259917506544070338474035050693415806564695").unwrap();
        assert!(outside[0].re().contains_ratio(&salem));
        assert!(outside[0].is_real());
    }

    #[test]
    fn conjugate_closure_and_ordering() {
        let f = p(&[-2, 0, 0, 1]); // x^3 - 2: one real, one conjugate pair
        let boxes = isolate_roots(&f, &tw(1e-12), 4096).unwrap();
        assert_eq!(boxes.len(), 3);
        assert_eq!(boxes.iter().filter(|b| b.is_real()).count(), 1);
        // pair members mirror exactly
        assert!(boxes[0].is_conjugate_of(&boxes[1]) || boxes[1].is_conjugate_of(&boxes[0]));
        // deterministic order: complex pair (re ~ -0.63) before real root 1.26
        assert!(boxes[2].is_real());
        // repeat run gives identical output
        let again = isolate_roots(&f, &tw(1e-12), 4096).unwrap();
        for (a, b) in boxes.iter().zip(again.iter()) {
            assert_eq!(a.re(), b.re());
            assert_eq!(a.im(), b.im());
        }
    }

    #[test]
    fn real_count_matches_sturm() {
        for f in [
            p(&[-2, 0, 1]),
            p(&[-2, 0, 0, 1]),
            p(&[1, 0, 1]),
            p(&[-1, -1, 0, 1]),
            p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]),
            p(&[1, 0, -1, 0, 1]),
            p(&[-1, -1, 1]),
        ] {
            let expected = sturm_real_root_count(&f);
            let boxes = isolate_roots(&f, &tw(1e-9), 4096).unwrap();
            let got = boxes.iter().filter(|b| b.is_real()).count();
            assert_eq!(got, expected, "real-root count for {}", f);
        }
    }

    #[test]
    fn root_product_contains_constant_ratio() {
        // sum of log|z_i| over all roots must contain log|f(0)/a|
        for f in [
            p(&[-2, 0, 1]),
            p(&[3, -4, 1]),
            p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]),
            p(&[-2, 0, 0, 1]),
        ] {
            let boxes = isolate_roots(&f, &tw(1e-12), 4096).unwrap();
            let prec = 128;
            let mut sum = RealEnclosure::from_i64(0);
            for b in &boxes {
                sum = sum.add(&b.abs_enclosure(prec).log(prec).unwrap(), prec);
            }
            let ratio = BigRational::new(f.constant_term().abs(), f.leading().abs());
            let expected = RealEnclosure::from_ratio(&ratio, prec).log(prec).unwrap();
            assert!(
                sum.intersects(&expected),
                "product identity violated for {}",
                f
            );
        }
    }

    #[test]
    fn refinement_shrinks_and_keeps_containment() {
        let f = p(&[-1, -1, 1]);
        let coarse = isolate_roots(&f, &tw(1e-6), 4096).unwrap();
        let fine = isolate_roots(&f, &tw(1e-40), 4096).unwrap();
        for (c, g) in coarse.iter().zip(fine.iter()) {
            // both boxes contain the same root, so they must intersect,
            // and the refined box must be strictly smaller
            assert!(c.re().intersects(g.re()), "containment lost");
            assert!(c.im().intersects(g.im()), "containment lost");
            assert!(g.width() < c.width() || c.width().is_zero());
        }
    }

    #[test]
    fn log_plus_clamps_inside_unit_disk() {
        // roots of x^2 - x + 1 (= phi_6) lie on the unit circle;
        // roots of 4x^2-1 = (2x-1)(2x+1)... use x^2 - 1/4 scaled: 4x^2 - 1
        let inside = isolate_roots(&p(&[-1, 0, 4]), &tw(1e-10), 4096).unwrap();
        for b in &inside {
            let lp = log_plus_abs(b, 96);
            assert!(lp.is_point());
            assert!(lp.lo_fin().is_zero());
        }
        let two = isolate_roots(&p(&[-2, 1]), &tw(1e-12), 4096).unwrap();
        let lp = log_plus_abs(&two[0], 96);
        let ln2 = parse_decimal("0.6931471805599453094172321214581765680755").unwrap();
        assert!(lp.contains_ratio(&ln2));
        // straddling |z| = 1: never negative
        let phi6 = isolate_roots(&p(&[1, -1, 1]), &tw(1e-10), 4096).unwrap();
        for b in &phi6 {
            let lp = log_plus_abs(b, 96);
            assert!(lp.lo_fin().sign() >= 0);
            assert!(lp.hi_fin().to_f64(Dir::Up) < 1e-9);
        }
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(matches!(
            isolate_roots(&p(&[0, 0, 1]), &tw(1e-10), 4096),
            Err(Error::NotSquarefree)
        ));
    }
}
