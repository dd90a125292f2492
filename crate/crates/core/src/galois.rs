//! Exact certificates that Q(alpha)/Q is Galois, root-of-unity order
//! detection inside Q(alpha), and multiplicative-rank estimation of the
//! conjugates with verified relation certificates.
//!
//! Positive answers carry exact certificates; negative answers (`NoWitness`)
//! are one-sided. Candidate expressions and relations are found by lattice
//! reduction on high-precision embeddings, then verified by exact arithmetic
//! in Q[x]/(f).

use crate::error::{Error, Result};
use crate::interval::{Dyadic, RealEnclosure};
use crate::lattice::{default_delta, integer_rank, lll_reduce, LatticeBasis};
use crate::nt::totient;
use crate::poly::{cyclotomic_test, IntPolynomial, RatPoly};
use crate::quotient::FieldElement;
use crate::roots::{isolate_roots, ComplexBox};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct GaloisConfig {
    /// Bound on numerators/denominators of expression coefficients.
    pub height_bound: BigInt,
    /// Max |exponent| searched in torsion relations.
    pub relation_bound: i64,
    /// Embedding precision in bits for lattice candidates.
    pub precision: u32,
    /// Precision cap for root refinement.
    pub precision_cap: u32,
}

impl Default for GaloisConfig {
    fn default() -> Self {
        GaloisConfig {
            height_bound: BigInt::from(1_000_000u64),
            relation_bound: 20,
            precision: 256,
            precision_cap: crate::interval::DEFAULT_PREC_CAP,
        }
    }
}

/// Witness that alpha_i = p_i(alpha_1), verified exactly: f(p_i(x)) = 0 in
/// Q[x]/(f), plus the numeric match pinning the conjugate index.
#[derive(Clone, Debug)]
pub struct ConjugateExpression {
    pub index: usize,
    pub expression: RatPoly,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub enum GaloisOutcome {
    /// Every conjugate lies in Q(alpha_1); given irreducibility this makes
    /// Q(alpha)/Q Galois.
    Certified(Vec<ConjugateExpression>),
    /// No expression found with coefficients bounded by `height_bound` at
    /// `precision` bits. Explicitly one-sided.
    NoWitness { height_bound: BigInt, precision: u32 },
}

impl GaloisOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, GaloisOutcome::Certified(_))
    }
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub exponents: Vec<BigInt>,
    pub torsion_order: u64,
}

#[derive(Clone, Debug)]
pub struct RankEstimate {
    pub num_conjugates: usize,
    pub relation_basis: Vec<Relation>,
    pub rank_upper_certified: usize,
    pub rank_heuristic: usize,
    pub search_bound: i64,
}

// ----- complex interval helpers -----

#[derive(Clone, Debug)]
struct CIv {
    re: RealEnclosure,
    im: RealEnclosure,
}

impl CIv {
    fn from_box(b: &ComplexBox) -> CIv {
        CIv {
            re: b.re().clone(),
            im: b.im().clone(),
        }
    }

    fn point(re: Dyadic, im: Dyadic) -> CIv {
        CIv {
            re: RealEnclosure::point(re),
            im: RealEnclosure::point(im),
        }
    }

    fn mul(&self, o: &CIv, prec: u32) -> CIv {
        CIv {
            re: self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec),
            im: self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec),
        }
    }

    fn add(&self, o: &CIv, prec: u32) -> CIv {
        CIv {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    fn intersects_box(&self, b: &ComplexBox) -> bool {
        self.re.intersects(b.re()) && self.im.intersects(b.im())
    }

    fn abs(&self, prec: u32) -> RealEnclosure {
        self.re
            .sqr(prec)
            .add(&self.im.sqr(prec), prec)
            .sqrt(prec)
            .expect("nonnegative")
    }
}

fn eval_ratpoly(p: &RatPoly, z: &CIv, prec: u32) -> CIv {
    let zero = CIv::point(Dyadic::zero(), Dyadic::zero());
    let mut acc = zero;
    for c in p.coeffs().iter().rev() {
        let c_iv = CIv {
            re: RealEnclosure::from_ratio(c, prec),
            im: RealEnclosure::point(Dyadic::zero()),
        };
        acc = acc.mul(z, prec).add(&c_iv, prec);
    }
    acc
}

// ----- expression search -----

fn expression_scales(cfg: &GaloisConfig) -> Vec<u32> {
    let mut s = vec![64u32, 128, 256];
    if !s.contains(&cfg.precision) {
        s.push(cfg.precision);
    }
    s.sort_unstable();
    s.retain(|&x| x <= cfg.precision.max(256));
    s
}

/// Exact certificate check: f(p(x)) reduces to 0 mod f.
fn expression_maps_roots(f: &Arc<IntPolynomial>, p: &RatPoly) -> bool {
    let pe = match FieldElement::new(f.clone(), p.clone()) {
        Ok(e) => e,
        Err(_) => return false,
    };
    // Horner over the quotient ring
    let mut acc = match FieldElement::constant(f.clone(), BigRational::zero()) {
        Ok(a) => a,
        Err(_) => return false,
    };
    for c in f.coeffs().iter().rev() {
        let c_elem = FieldElement::constant(f.clone(), BigRational::from_integer(c.clone()))
            .expect("constant embeds");
        acc = match acc.mul(&pe).and_then(|m| m.add(&c_elem)) {
            Ok(v) => v,
            Err(_) => return false,
        };
    }
    acc.is_zero()
}

/// Numeric pinning: p evaluated over the base box must intersect the target
/// box and no other.
fn expression_hits_target(
    p: &RatPoly,
    boxes: &[ComplexBox],
    base: usize,
    target: usize,
    prec: u32,
) -> bool {
    let image = eval_ratpoly(p, &CIv::from_box(&boxes[base]), prec);
    if !image.intersects_box(&boxes[target]) {
        return false;
    }
    boxes
        .iter()
        .enumerate()
        .all(|(j, b)| j == target || !image.intersects_box(b))
}

fn candidate_rows(
    boxes: &[ComplexBox],
    base: usize,
    target: usize,
    d: usize,
    scale: u32,
    prec: u32,
) -> LatticeBasis {
    // rows: [ I_{d+1} | C*Re(v_i), C*Im(v_i) ] with v = (1, a, ..., a^{d-1}, a_t)
    let c1 = CIv::from_box(&boxes[base]);
    let mut powers: Vec<CIv> = Vec::with_capacity(d);
    let mut acc = CIv::point(Dyadic::one(), Dyadic::zero());
    for _ in 0..d {
        powers.push(acc.clone());
        acc = acc.mul(&c1, prec);
    }
    powers.push(CIv::from_box(&boxes[target]));
    let mut rows = Vec::with_capacity(d + 1);
    for (i, v) in powers.iter().enumerate() {
        let mut row = vec![BigInt::zero(); d + 3];
        row[i] = BigInt::one();
        row[d + 1] = v.re.midpoint().shl(scale as i64).to_bigint_round();
        row[d + 2] = v.im.midpoint().shl(scale as i64).to_bigint_round();
        rows.push(row);
    }
    LatticeBasis { rows }
}

/// Searches for a certified expression of the target conjugate as a
/// polynomial in the base conjugate with bounded rational coefficients.
pub fn express_conjugate(
    f: &IntPolynomial,
    boxes: &[ComplexBox],
    base: usize,
    target: usize,
    cfg: &GaloisConfig,
    scale: u32,
) -> Option<ConjugateExpression> {
    let d = f.degree()?;
    let fmod = Arc::new(f.clone());
    if target == base {
        let p = if d == 1 {
            RatPoly::constant(BigRational::new(-f.constant_term(), f.leading()))
        } else {
            RatPoly::x()
        };
        return Some(ConjugateExpression {
            index: target,
            expression: p,
            certified: true,
        });
    }
    let prec = scale + 48;
    let basis = candidate_rows(boxes, base, target, d, scale, prec);
    let reduced = lll_reduce(&basis, &default_delta()).ok()?;
    for row in &reduced.rows {
        let cd = &row[d];
        if cd.is_zero() {
            continue;
        }
        let denom = BigRational::from_integer(cd.clone());
        let coeffs: Vec<BigRational> = (0..d)
            .map(|j| -BigRational::from_integer(row[j].clone()) / denom.clone())
            .collect();
        let p = RatPoly::new(coeffs);
        if p.coeff_height() > cfg.height_bound {
            continue;
        }
        if !expression_maps_roots(&fmod, &p) {
            continue;
        }
        if !expression_hits_target(&p, boxes, base, target, prec) {
            continue;
        }
        return Some(ConjugateExpression {
            index: target,
            expression: p,
            certified: true,
        });
    }
    None
}

/// Certifies Galois-ness by expressing every conjugate in Q(alpha_1).
pub fn is_galois(f: &IntPolynomial, cfg: &GaloisConfig) -> Result<GaloisOutcome> {
    let (_, f) = f.primitive_part()?;
    let d = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    if !f.squarefree_check()? {
        return Err(Error::NotSquarefree);
    }
    let mut last_scale = 0u32;
    for scale in expression_scales(cfg) {
        last_scale = scale;
        let width = Dyadic::one().shl(-(scale as i64 + 16));
        let boxes = match isolate_roots(&f, &width, cfg.precision_cap) {
            Ok(b) => b,
            Err(Error::PrecisionCap { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut expressions = Vec::with_capacity(d);
        let mut all = true;
        for target in 0..d {
            match express_conjugate(&f, &boxes, 0, target, cfg, scale) {
                Some(e) => expressions.push(e),
                None => {
                    all = false;
                    break;
                }
            }
        }
        if all {
            return Ok(GaloisOutcome::Certified(expressions));
        }
    }
    Ok(GaloisOutcome::NoWitness {
        height_bound: cfg.height_bound.clone(),
        precision: last_scale,
    })
}

/// Smallest n <= 2 d^2 with g^n = 1 in Q[x]/(f), or None -- which certifies
/// that g is not a root of unity: torsion in a degree-d number field has
/// order n with phi(n) | d and phi(n) >= sqrt(n/2), hence n <= 2 d^2.
pub fn unit_order(g: &FieldElement, d: usize) -> Option<u64> {
    if g.is_zero() {
        return None;
    }
    let bound = 2 * (d as u64) * (d as u64);
    for n in 1..=bound {
        if d as u64 % totient(n) != 0 {
            continue;
        }
        if let Ok(p) = g.pow(&BigInt::from(n)) {
            if p.is_one() {
                return Some(n);
            }
        }
    }
    None
}

/// Conjugates as field elements from their certified expressions.
fn conjugate_elements(
    f: &Arc<IntPolynomial>,
    expressions: &[ConjugateExpression],
) -> Result<Vec<FieldElement>> {
    expressions
        .iter()
        .map(|e| FieldElement::new(f.clone(), e.expression.clone()))
        .collect()
}

fn normalize_candidate(mut e: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = e.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in e.iter_mut() {
                *x = -&*x;
            }
        }
    }
    e
}

/// Lattice-based search for integer vectors e with prod alpha_i^{e_i} a root
/// of unity. Candidates come from archimedean log data only; every returned
/// relation is re-verified exactly and carries its torsion order.
pub fn find_relations(
    f: &IntPolynomial,
    expressions: &[ConjugateExpression],
    boxes: &[ComplexBox],
    cfg: &GaloisConfig,
) -> Result<(Vec<Relation>, Vec<Vec<BigInt>>)> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let fmod = Arc::new(f.clone());
    let elements = conjugate_elements(&fmod, expressions)?;
    let scale = cfg.precision;
    let prec = scale + 48;
    // log |sigma_j(alpha_i)| = log |p_i(alpha_j)|
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for (i, e) in expressions.iter().enumerate() {
        let mut row = vec![BigInt::zero(); 2 * d];
        row[i] = BigInt::one();
        for (j, b) in boxes.iter().enumerate() {
            let image = eval_ratpoly(&e.expression, &CIv::from_box(b), prec);
            let mag = image.abs(prec);
            if !mag.is_strictly_positive() {
                return Err(Error::InvalidParameter(
                    "embedding magnitude enclosure touches zero; raise precision".into(),
                ));
            }
            let lg = mag.log(prec)?;
            row[d + j] = lg.midpoint().shl(scale as i64).to_bigint_round();
        }
        rows.push(row);
    }
    let reduced = lll_reduce(&LatticeBasis { rows }, &default_delta())?;
    // Candidates: reduced rows whose log block collapsed and whose exponents
    // respect the search bound.
    let log_threshold = BigInt::one() << (scale / 2) as u64;
    let bound = BigInt::from(cfg.relation_bound);
    let mut candidates: Vec<Vec<BigInt>> = vec![];
    for row in &reduced.rows {
        let e: Vec<BigInt> = row[..d].to_vec();
        if e.iter().all(|x| x.is_zero()) {
            continue;
        }
        if e.iter().any(|x| x.abs() > bound) {
            continue;
        }
        if row[d..].iter().any(|x| x.abs() > log_threshold) {
            continue;
        }
        candidates.push(normalize_candidate(e));
    }
    candidates.sort();
    candidates.dedup();
    let mut relations = vec![];
    for e in &candidates {
        let mut prod = FieldElement::one(fmod.clone())?;
        let mut ok = true;
        for (elem, exp) in elements.iter().zip(e.iter()) {
            match elem.pow(exp) {
                Ok(p) => match prod.mul(&p) {
                    Ok(m) => prod = m,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                },
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(order) = unit_order(&prod, d) {
            relations.push(Relation {
                exponents: e.clone(),
                torsion_order: order,
            });
        }
    }
    Ok((relations, candidates))
}

/// Rank estimate from already-certified conjugate expressions; isolates the
/// embedding boxes once.
pub fn rank_from_expressions(
    f: &IntPolynomial,
    expressions: &[ConjugateExpression],
    cfg: &GaloisConfig,
) -> Result<RankEstimate> {
    let (_, f) = f.primitive_part()?;
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let width = Dyadic::one().shl(-(cfg.precision as i64 + 16));
    let boxes = isolate_roots(&f, &width, cfg.precision_cap)?;
    let (relations, candidates) = find_relations(&f, expressions, &boxes, cfg)?;
    let certified_rows: Vec<Vec<BigInt>> = relations.iter().map(|r| r.exponents.clone()).collect();
    let rank_upper = d - integer_rank(&certified_rows);
    let mut rank_heuristic = d - integer_rank(&candidates);
    let torsion = f == IntPolynomial::x() || cyclotomic_test(&f).is_some();
    if !torsion {
        rank_heuristic = rank_heuristic.max(1);
    }
    rank_heuristic = rank_heuristic.min(rank_upper);
    Ok(RankEstimate {
        num_conjugates: d,
        relation_basis: relations,
        rank_upper_certified: rank_upper,
        rank_heuristic,
        search_bound: cfg.relation_bound,
    })
}

/// Certified upper bound and heuristic value for the multiplicative rank of
/// the conjugates. The upper bound uses only exactly-verified relations; the
/// heuristic trusts the raw lattice candidates and additionally assumes no
/// relations exist beyond the search bound.
pub fn mult_rank(f: &IntPolynomial, cfg: &GaloisConfig) -> Result<RankEstimate> {
    let (_, f) = f.primitive_part()?;
    let outcome = is_galois(&f, cfg)?;
    let GaloisOutcome::Certified(expressions) = outcome else {
        return Err(Error::InvalidParameter(
            "multiplicative rank needs certified conjugate expressions".into(),
        ));
    };
    rank_from_expressions(&f, &expressions, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic_poly;

    fn p(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(v)
    }

    fn cfg() -> GaloisConfig {
        GaloisConfig::default()
    }

    #[test]
    fn quadratics_always_certified() {
        for f in [p(&[-5, 0, 1]), p(&[-1, -1, 1]), p(&[3, 3, 1]), p(&[1, 0, 1])] {
            let out = is_galois(&f, &cfg()).unwrap();
            assert!(out.is_certified(), "quadratic {} not certified", f);
        }
    }

    #[test]
    fn neg_sqrt2_expression_is_minus_x() {
        let f = p(&[-2, 0, 1]);
        let width = Dyadic::from_f64(1e-30).unwrap();
        let boxes = isolate_roots(&f, &width, 4096).unwrap();
        // boxes sorted by re: box 0 is -sqrt2, box 1 is +sqrt2
        let e = express_conjugate(&f, &boxes, 0, 1, &cfg(), 64).unwrap();
        // alpha_2 = -alpha_1
        assert_eq!(
            e.expression,
            RatPoly::new(vec![BigRational::zero(), -BigRational::one()])
        );
    }

    #[test]
    fn cyclotomic12_certified_with_power_expressions() {
        let f = cyclotomic_poly(12);
        let out = is_galois(&f, &cfg()).unwrap();
        let GaloisOutcome::Certified(exprs) = out else {
            panic!("phi_12 must certify");
        };
        assert_eq!(exprs.len(), 4);
        let fmod = Arc::new(f.clone());
        for e in &exprs {
            // re-verify the certificate independently
            assert!(expression_maps_roots(&fmod, &e.expression));
        }
    }

    #[test]
    fn cube_root_two_no_witness() {
        let out = is_galois(&p(&[-2, 0, 0, 1]), &cfg()).unwrap();
        assert!(!out.is_certified());
    }

    #[test]
    fn smyth_cubic_no_witness() {
        let out = is_galois(&p(&[-1, -1, 0, 1]), &cfg()).unwrap();
        assert!(!out.is_certified());
    }

    #[test]
    fn unit_order_examples() {
        let f2 = Arc::new(p(&[-2, 0, 1]));
        let minus_one =
            FieldElement::constant(f2.clone(), -BigRational::one()).unwrap();
        assert_eq!(unit_order(&minus_one, 2), Some(2));
        let x = FieldElement::generator(f2).unwrap();
        assert_eq!(unit_order(&x, 2), None);
        let f8 = Arc::new(p(&[1, 0, 0, 0, 1]));
        let x8 = FieldElement::generator(f8).unwrap();
        assert_eq!(unit_order(&x8, 4), Some(8));
    }

    #[test]
    fn golden_ratio_rank() {
        let est = mult_rank(&p(&[-1, -1, 1]), &cfg()).unwrap();
        assert_eq!(est.rank_upper_certified, 1);
        assert_eq!(est.rank_heuristic, 1);
        // the product relation alpha1 * alpha2 = -1 must be certified
        assert!(est
            .relation_basis
            .iter()
            .any(|r| r.exponents == vec![BigInt::one(), BigInt::one()] && r.torsion_order == 2));
    }

    #[test]
    fn sqrt2_rank() {
        let est = mult_rank(&p(&[-2, 0, 1]), &cfg()).unwrap();
        assert_eq!(est.rank_upper_certified, 1);
        assert_eq!(est.rank_heuristic, 1);
        assert!(est
            .relation_basis
            .iter()
            .any(|r| r.exponents == vec![BigInt::one(), BigInt::from(-1)]
                && r.torsion_order == 2));
    }

    #[test]
    fn cyclotomic8_rank_zero() {
        let est = mult_rank(&p(&[1, 0, 0, 0, 1]), &cfg()).unwrap();
        assert_eq!(est.rank_upper_certified, 0);
        assert_eq!(est.rank_heuristic, 0);
        assert_eq!(integer_rank(
            &est.relation_basis
                .iter()
                .map(|r| r.exponents.clone())
                .collect::<Vec<_>>()
        ), 4);
    }

    #[test]
    fn degree_one_certified() {
        let out = is_galois(&p(&[-2, 1]), &cfg()).unwrap();
        assert!(out.is_certified());
        let est = mult_rank(&p(&[-2, 1]), &cfg()).unwrap();
        assert_eq!(est.rank_upper_certified, 1);
        assert_eq!(est.rank_heuristic, 1);
    }

    #[test]
    fn relation_certificates_reverify() {
        let f = p(&[-1, -1, 1]);
        let est = mult_rank(&f, &cfg()).unwrap();
        let out = is_galois(&f, &cfg()).unwrap();
        let GaloisOutcome::Certified(exprs) = out else {
            panic!()
        };
        let fmod = Arc::new(f.clone());
        let elements = conjugate_elements(&fmod, &exprs).unwrap();
        for rel in &est.relation_basis {
            let mut prod = FieldElement::one(fmod.clone()).unwrap();
            for (elem, e) in elements.iter().zip(rel.exponents.iter()) {
                prod = prod.mul(&elem.pow(e).unwrap()).unwrap();
            }
            let k = prod.pow(&BigInt::from(rel.torsion_order)).unwrap();
            assert!(k.is_one(), "relation power is not 1");
            // minimality: no smaller positive power is 1
            for m in 1..rel.torsion_order {
                assert!(!prod.pow(&BigInt::from(m)).unwrap().is_one());
            }
        }
    }
}
