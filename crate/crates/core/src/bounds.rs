//! Log-scale certified evaluation of every explicit height lower bound, and
//! grid audits of the inequality chains connecting them.
//!
//! All magnitudes that can overflow floating-point range are carried as
//! enclosures of their natural logarithm end to end. Verdicts are one-sided:
//! `Holds` and `Fails` require disjoint enclosures; `Overlap` triggers
//! adaptive precision doubling and, at the cap, an `Indeterminate` verdict.

use crate::error::{Error, Result};
use crate::interval::{consts, Dyadic, IvOrder, RealEnclosure, DEFAULT_PREC, DEFAULT_PREC_CAP};
use crate::nt::{factorial, totient, totient_sieve};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

/// Inequality identifiers, named by what each step does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    /// 718 sqrt(2 pi r) e^(1/12r) (2/e)^r <= 1440
    StirlingConstant,
    /// n(r) <= 135 r! 2^(r-1), equality at r = 8
    SubgroupOrderBound,
    /// X log(2X)^4 <= g2 for X = 1440 r^r loglog(6 d^2)
    DegreeLogStep,
    /// low-rank case: g2 <= 6.5e7 exp(3.5 log(3d)^(1/4) loglog(3d))
    LowRankBound,
    /// high-rank case: g1 <= 31693 exp(log(3d)^(3/4) + 13.5 log(3d)^(3/4) loglog(3d))
    HighRankBound,
    /// min(g1, g2) <= 6.5e7 exp(24.5 log(3d)^(3/4) loglog(3d))
    MainBound,
    /// log c(eps) - eps log d <= log main_bound(d)
    EpsilonBound,
    /// n/phi(n) <= loglog(3n)/loglog(3)
    TotientUpper,
    /// 2 phi(n)^2 >= n
    TotientSqrt,
    /// n!/n^n <= sqrt(2 pi n) e^(1/12n) e^(-n)
    Stirling,
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::StirlingConstant => "stirling-constant",
            CheckId::SubgroupOrderBound => "subgroup-order-bound",
            CheckId::DegreeLogStep => "degree-log-step",
            CheckId::LowRankBound => "low-rank-bound",
            CheckId::HighRankBound => "high-rank-bound",
            CheckId::MainBound => "main-bound",
            CheckId::EpsilonBound => "epsilon-bound",
            CheckId::TotientUpper => "totient-upper",
            CheckId::TotientSqrt => "totient-sqrt",
            CheckId::Stirling => "stirling",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParamPoint {
    pub d: Option<BigInt>,
    pub rho: Option<u64>,
    pub eps: Option<BigRational>,
    pub n: Option<u64>,
}

impl ParamPoint {
    pub fn render(&self) -> String {
        let mut parts = vec![];
        if let Some(d) = &self.d {
            if d.bits() > 64 {
                parts.push(format!("d=10^{}", (d.bits() as f64 * 0.30103).round()));
            } else {
                parts.push(format!("d={}", d));
            }
        }
        if let Some(r) = self.rho {
            parts.push(format!("rho={}", r));
        }
        if let Some(e) = &self.eps {
            parts.push(format!("eps={}", e));
        }
        if let Some(n) = self.n {
            parts.push(format!("n={}", n));
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct ChainVerdict {
    pub id: CheckId,
    pub point: ParamPoint,
    pub verdict: Verdict,
    /// Enclosure of log(RHS) - log(LHS); None when a side is undefined.
    pub margin: Option<RealEnclosure>,
    /// Exact equality detected by integer/symbolic reasoning.
    pub equality: bool,
    /// Expected failure in the default profile (reported distinctly).
    pub whitelisted: bool,
    pub precision: u32,
}

fn decide(lhs_log: &RealEnclosure, rhs_log: &RealEnclosure, prec: u32) -> (Verdict, RealEnclosure) {
    let margin = rhs_log.sub(lhs_log, prec);
    let verdict = match lhs_log.compare(rhs_log) {
        IvOrder::Less => Verdict::Holds,
        IvOrder::Greater => Verdict::Fails,
        IvOrder::Overlap => Verdict::Indeterminate,
    };
    (verdict, margin)
}

// ----- exact combinatorial quantities -----

/// Largest order of a finite subgroup of GL_rho(Z): rho! 2^rho for
/// rho in {1, 3, 5} and rho > 10, exceptional table values otherwise.
pub fn n_rho(rho: u64) -> Result<BigInt> {
    if rho < 1 {
        return Err(Error::InvalidParameter("n_rho requires rho >= 1".into()));
    }
    let table: &[(u64, u64)] = &[
        (2, 12),
        (4, 1152),
        (6, 103_680),
        (7, 2_903_040),
        (8, 696_729_600),
        (9, 1_393_459_200),
        (10, 8_360_755_200),
    ];
    if let Some((_, v)) = table.iter().find(|(r, _)| *r == rho) {
        return Ok(BigInt::from(*v));
    }
    Ok(factorial(rho) << rho)
}

pub use crate::nt::totient as totient_exact;

// ----- shared log-scale pieces -----

fn ln_bigint(x: &BigInt, prec: u32) -> Result<RealEnclosure> {
    RealEnclosure::from_bigint(x).log(prec)
}

fn ln_u64(x: u64, prec: u32) -> RealEnclosure {
    ln_bigint(&BigInt::from(x), prec).expect("positive")
}

fn ln3d(d: &BigInt, prec: u32) -> RealEnclosure {
    ln_bigint(&(d * 3), prec).expect("3d >= 3")
}

fn lnln3d(d: &BigInt, prec: u32) -> RealEnclosure {
    // log(3d) >= log 3 > 1.09, so the outer log is defined and positive.
    ln3d(d, prec).log(prec).expect("log(3d) > 1")
}

fn lnln6d2(d: &BigInt, prec: u32) -> RealEnclosure {
    let six_d2 = BigInt::from(6) * d * d;
    ln_bigint(&six_d2, prec)
        .expect("6d^2 >= 6")
        .log(prec)
        .expect("log(6d^2) > 1")
}

fn quarter_pow(x: &RealEnclosure, prec: u32) -> RealEnclosure {
    x.pow_ratio(&BigRational::new(BigInt::one(), BigInt::from(4)), prec)
        .expect("positive base")
}

fn three_quarter_pow(x: &RealEnclosure, prec: u32) -> RealEnclosure {
    x.pow_ratio(&BigRational::new(BigInt::from(3), BigInt::from(4)), prec)
        .expect("positive base")
}

// ----- bound formulas (log scale) -----

#[derive(Clone, Debug)]
pub enum LogBound {
    /// Formula undefined or nonpositive in this range.
    Trivial,
    Value(RealEnclosure),
}

impl LogBound {
    pub fn value(&self) -> Option<&RealEnclosure> {
        match self {
            LogBound::Trivial => None,
            LogBound::Value(v) => Some(v),
        }
    }
}

/// log of (1/(4d)) (loglog d / log d)^3; Trivial for d < 3.
pub fn voutier_log(d: u64, prec: u32) -> LogBound {
    if d < 3 {
        return LogBound::Trivial;
    }
    let dd = BigInt::from(d);
    let ln_d = ln_bigint(&dd, prec).expect("d >= 3");
    let lnln_d = ln_d.log(prec).expect("log d > 1 for d >= 3");
    let v = lnln_d
        .log(prec)
        .expect("loglog d > 0 for d >= 3")
        .sub(&ln_d.log(prec).expect("log d > 0"), prec)
        .mul_i64(3, prec)
        .sub(&ln_u64(4 * d, prec), prec);
    LogBound::Value(v)
}

/// log of D^(-1) (1050 n^5 log(3D))^(-n^2 (n+1)^2).
pub fn product_bound_log(n: u64, big_d: &BigInt, prec: u32) -> Result<RealEnclosure> {
    if n < 1 || big_d < &BigInt::one() {
        return Err(Error::InvalidParameter("product bound needs n, D >= 1".into()));
    }
    let base = RealEnclosure::from_bigint(&(BigInt::from(1050u32) * BigInt::from(n).pow(5)))
        .mul(&ln3d(big_d, prec), prec)
        .log(prec)?;
    let exponent = BigInt::from(n * n) * BigInt::from((n + 1) * (n + 1));
    let ln_d = ln_bigint(big_d, prec)?;
    Ok(ln_d.neg().sub(&base.mul_bigint(&exponent, prec), prec))
}

/// log of D^(-1) loglog(5D)^3 / log(2D)^4.
pub fn relative_dobrowolski_log(big_d: &BigInt, prec: u32) -> Result<RealEnclosure> {
    if big_d < &BigInt::one() {
        return Err(Error::InvalidParameter("D >= 1 required".into()));
    }
    let ln_d = ln_bigint(big_d, prec)?;
    let lnln5d = ln_bigint(&(big_d * 5), prec)?.log(prec)?;
    let ln2d = ln_bigint(&(big_d * 2), prec)?;
    // log(2D) = 0 at D = 1 would break the 4th power's log; handle via the
    // direct log of log(2)^4 which is fine since log 2 > 0.
    let v = lnln5d
        .log(prec)?
        .mul_i64(3, prec)
        .sub(&ln2d.log(prec)?.mul_i64(4, prec), prec)
        .sub(&ln_d, prec);
    Ok(v)
}

/// g1(rho, d) = min over 1 <= r <= rho of d^(1/r) (1050 r^5 log(3d))^(r (r+1)^2),
/// in log scale, with the argmin r recorded.
pub fn g1_log(rho: u64, d: &BigInt, prec: u32) -> Result<(RealEnclosure, u64)> {
    if rho < 1 {
        return Err(Error::InvalidParameter("rho >= 1 required".into()));
    }
    let ln_d = ln_bigint(d, prec)?;
    let l3d = ln3d(d, prec);
    let mut best: Option<(RealEnclosure, u64)> = None;
    for r in 1..=rho {
        let term = g1_term_log(&ln_d, &l3d, r, prec);
        best = Some(match best {
            None => (term, r),
            Some((cur, cur_r)) => {
                // Pointwise-min enclosure stays rigorous even when the two
                // candidates overlap; argmin by smaller upper bound.
                let lo = if term.lo_fin() < cur.lo_fin() {
                    term.lo_fin().clone()
                } else {
                    cur.lo_fin().clone()
                };
                let (hi, arg) = if term.hi_fin() < cur.hi_fin() {
                    (term.hi_fin().clone(), r)
                } else {
                    (cur.hi_fin().clone(), cur_r)
                };
                (RealEnclosure::from_endpoints(lo, hi), arg)
            }
        });
    }
    Ok(best.unwrap())
}

fn g1_term_log(ln_d: &RealEnclosure, l3d: &RealEnclosure, r: u64, prec: u32) -> RealEnclosure {
    let r_big = BigInt::from(r);
    let coeff = BigInt::from(1050u32) * r_big.pow(5);
    let base = RealEnclosure::from_bigint(&coeff)
        .mul(l3d, prec)
        .log(prec)
        .expect("positive base");
    let exponent = BigInt::from(r) * BigInt::from((r + 1) * (r + 1));
    let d_part = RealEnclosure::from_endpoints(
        ln_d.lo_fin().div_rounded(&Dyadic::from_i64(r as i64), prec, crate::interval::Dir::Down),
        ln_d.hi_fin().div_rounded(&Dyadic::from_i64(r as i64), prec, crate::interval::Dir::Up),
    );
    d_part.add(&base.mul_bigint(&exponent, prec), prec)
}

/// g2(rho, d) = 6.5e7 rho^(rho+5) loglog(6 d^2)^5, in log scale.
pub fn g2_log(rho: u64, d: &BigInt, prec: u32) -> Result<RealEnclosure> {
    if rho < 1 {
        return Err(Error::InvalidParameter("rho >= 1 required".into()));
    }
    let lll = lnln6d2(d, prec);
    let ln_rho = ln_u64(rho, prec);
    Ok(ln_u64(65_000_000, prec)
        .add(&ln_rho.mul_bigint(&BigInt::from(rho + 5), prec), prec)
        .add(&lll.log(prec)?.mul_i64(5, prec), prec))
}

/// Theorem-level lower bound 1e-8 exp(-24.5 log(3d)^(3/4) loglog(3d)), log scale.
pub fn main_bound_log(d: &BigInt, prec: u32) -> Result<RealEnclosure> {
    if d < &BigInt::one() {
        return Err(Error::InvalidParameter("d >= 1 required".into()));
    }
    let ten8 = BigRational::new(BigInt::one(), BigInt::from(100_000_000u64));
    let c = RealEnclosure::from_ratio(&ten8, prec).log(prec)?;
    let body = three_quarter_pow(&ln3d(d, prec), prec)
        .mul(&lnln3d(d, prec), prec)
        .mul(&RealEnclosure::from_ratio(&BigRational::new(49.into(), 2.into()), prec), prec);
    Ok(c.sub(&body, prec))
}

/// log c(eps) = log 1e-8 + eps log(1/3) - 181 t^4 - t^5 with t = 724/(5 eps),
/// the rational powers taken exactly before enclosure.
pub fn c_eps_log(eps: &BigRational, prec: u32) -> Result<RealEnclosure> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps > 0 required".into()));
    }
    let ten8 = BigRational::new(BigInt::one(), BigInt::from(100_000_000u64));
    let c = RealEnclosure::from_ratio(&ten8, prec).log(prec)?;
    let t = BigRational::new(BigInt::from(724), BigInt::from(5)) / eps;
    let t4 = &t * &t * &t * &t;
    let t5 = &t4 * &t;
    let poly = BigRational::from_integer(BigInt::from(181)) * t4 + t5;
    let eps_ln3 = RealEnclosure::from_ratio(eps, prec).mul(&ln_u64(3, prec), prec);
    Ok(c.sub(&eps_ln3, prec)
        .sub(&RealEnclosure::from_ratio(&poly, prec), prec))
}

// ----- chain checks -----

/// (a) 718 sqrt(2 pi rho) e^(1/12 rho) (2/e)^rho <= 1440, compared in log scale.
pub fn check_stirling_constant(rho: u64, prec: u32) -> ChainVerdict {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let two_pi_rho = consts::pi(prec).mul_bigint(&BigInt::from(2 * rho), prec);
    let ln2 = consts::ln2(prec);
    let lhs = ln_u64(718, prec)
        .add(&two_pi_rho.log(prec).expect("positive").mul(&RealEnclosure::from_ratio(&half, prec), prec), prec)
        .add(
            &RealEnclosure::from_ratio(
                &BigRational::new(BigInt::one(), BigInt::from(12 * rho)),
                prec,
            ),
            prec,
        )
        .add(
            &ln2.sub(&RealEnclosure::from_i64(1), prec)
                .mul_bigint(&BigInt::from(rho), prec),
            prec,
        );
    let rhs = ln_u64(1440, prec);
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    ChainVerdict {
        id: CheckId::StirlingConstant,
        point: ParamPoint {
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    }
}

/// Linear-scale value of the step-(a) constant, for reporting.
pub fn stirling_constant_value(rho: u64, prec: u32) -> RealEnclosure {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let two_pi_rho = consts::pi(prec).mul_bigint(&BigInt::from(2 * rho), prec);
    let lhs_log = ln_u64(718, prec)
        .add(&two_pi_rho.log(prec).unwrap().mul(&RealEnclosure::from_ratio(&half, prec), prec), prec)
        .add(
            &RealEnclosure::from_ratio(
                &BigRational::new(BigInt::one(), BigInt::from(12 * rho)),
                prec,
            ),
            prec,
        )
        .add(
            &consts::ln2(prec)
                .sub(&RealEnclosure::from_i64(1), prec)
                .mul_bigint(&BigInt::from(rho), prec),
            prec,
        );
    lhs_log.exp(prec)
}

/// (b) n(rho) <= 135 rho! 2^(rho-1), exact integers; equality at rho = 8.
pub fn check_subgroup_order(rho: u64, prec: u32) -> Result<ChainVerdict> {
    let lhs = n_rho(rho)?;
    let rhs: BigInt = BigInt::from(135) * factorial(rho) << (rho - 1);
    let equality = lhs == rhs;
    let verdict = if lhs <= rhs { Verdict::Holds } else { Verdict::Fails };
    let margin = if equality {
        RealEnclosure::point(Dyadic::zero())
    } else {
        let ratio = BigRational::new(rhs.clone(), lhs.clone());
        RealEnclosure::from_ratio(&ratio, prec).log(prec)?
    };
    Ok(ChainVerdict {
        id: CheckId::SubgroupOrderBound,
        point: ParamPoint {
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality,
        whitelisted: false,
        precision: prec,
    })
}

/// (c) X log(2X)^4 <= g2(rho, d) where X = 1440 rho^rho loglog(6 d^2).
pub fn check_degree_log_step(d: &BigInt, rho: u64, prec: u32) -> Result<ChainVerdict> {
    let lll = lnln6d2(d, prec);
    let x_log = ln_u64(1440, prec)
        .add(&ln_u64(rho, prec).mul_bigint(&BigInt::from(rho), prec), prec)
        .add(&lll.log(prec)?, prec);
    let ln_2x = consts::ln2(prec).add(&x_log, prec);
    let lhs = x_log.add(&ln_2x.log(prec)?.mul_i64(4, prec), prec);
    let rhs = g2_log(rho, d, prec)?;
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    Ok(ChainVerdict {
        id: CheckId::DegreeLogStep,
        point: ParamPoint {
            d: Some(d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    })
}

/// Certified comparison of an integer rho with log(3d)^(1/4).
/// Returns Some(true) if rho <= threshold, Some(false) if rho > threshold.
fn rho_below_threshold(rho: u64, d: &BigInt, prec: u32) -> Option<bool> {
    let t = quarter_pow(&ln3d(d, prec), prec);
    match RealEnclosure::from_bigint(&BigInt::from(rho)).compare(&t) {
        IvOrder::Less => Some(true),
        IvOrder::Greater => Some(false),
        IvOrder::Overlap => None, // log(3d)^(1/4) is irrational; refine
    }
}

/// (d) if rho <= log(3d)^(1/4): g2 <= 6.5e7 exp(3.5 log(3d)^(1/4) loglog(3d)).
/// None when the condition certifiably fails (check not applicable).
pub fn check_low_rank(d: &BigInt, rho: u64, prec: u32) -> Result<Option<ChainVerdict>> {
    match rho_below_threshold(rho, d, prec) {
        Some(false) => return Ok(None),
        Some(true) => {}
        None => {
            return Ok(Some(indeterminate_verdict(CheckId::LowRankBound, d, rho, prec)));
        }
    }
    let lhs = g2_log(rho, d, prec)?;
    let seven_halves = BigRational::new(BigInt::from(7), BigInt::from(2));
    let rhs = ln_u64(65_000_000, prec).add(
        &quarter_pow(&ln3d(d, prec), prec)
            .mul(&lnln3d(d, prec), prec)
            .mul(&RealEnclosure::from_ratio(&seven_halves, prec), prec),
        prec,
    );
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    Ok(Some(ChainVerdict {
        id: CheckId::LowRankBound,
        point: ParamPoint {
            d: Some(d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    }))
}

/// (e) if rho >= log(3d)^(1/4): g1 <= 31693 exp(log(3d)^(3/4) (1 + 13.5 loglog(3d))).
/// Fails at small d are expected: the derivation needs log(3d) >= 16, and
/// such points are whitelisted in the default profile.
pub fn check_high_rank(d: &BigInt, rho: u64, prec: u32) -> Result<Option<ChainVerdict>> {
    match rho_below_threshold(rho, d, prec) {
        Some(true) => return Ok(None),
        Some(false) => {}
        None => {
            return Ok(Some(indeterminate_verdict(CheckId::HighRankBound, d, rho, prec)));
        }
    }
    let (lhs, _) = g1_log(rho, d, prec)?;
    let twentyseven_halves = BigRational::new(BigInt::from(27), BigInt::from(2));
    let body = three_quarter_pow(&ln3d(d, prec), prec);
    let rhs = ln_u64(31693, prec).add(
        &body.mul(
            &RealEnclosure::from_i64(1).add(
                &lnln3d(d, prec)
                    .mul(&RealEnclosure::from_ratio(&twentyseven_halves, prec), prec),
                prec,
            ),
            prec,
        ),
        prec,
    );
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    let whitelisted = verdict == Verdict::Fails && small_d_regime(d, prec);
    Ok(Some(ChainVerdict {
        id: CheckId::HighRankBound,
        point: ParamPoint {
            d: Some(d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted,
        precision: prec,
    }))
}

/// The high-rank derivation requires log(3d) >= 16.
fn small_d_regime(d: &BigInt, prec: u32) -> bool {
    matches!(
        ln3d(d, prec).compare(&RealEnclosure::from_i64(16)),
        IvOrder::Less
    )
}

/// (f) min(g1, g2) <= 6.5e7 exp(24.5 log(3d)^(3/4) loglog(3d)).
pub fn check_main_bound(d: &BigInt, rho: u64, prec: u32) -> Result<ChainVerdict> {
    let (g1, _) = g1_log(rho, d, prec)?;
    let g2 = g2_log(rho, d, prec)?;
    let lhs = RealEnclosure::from_endpoints(
        g1.lo_fin().clone().min(g2.lo_fin().clone()),
        g1.hi_fin().clone().min(g2.hi_fin().clone()),
    );
    let fortynine_halves = BigRational::new(BigInt::from(49), BigInt::from(2));
    let rhs = ln_u64(65_000_000, prec).add(
        &three_quarter_pow(&ln3d(d, prec), prec)
            .mul(&lnln3d(d, prec), prec)
            .mul(&RealEnclosure::from_ratio(&fortynine_halves, prec), prec),
        prec,
    );
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    Ok(ChainVerdict {
        id: CheckId::MainBound,
        point: ParamPoint {
            d: Some(d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    })
}

/// (g) log c(eps) - eps log d <= log main_bound(d).
pub fn check_epsilon_bound(d: &BigInt, eps: &BigRational, prec: u32) -> Result<ChainVerdict> {
    let lhs = c_eps_log(eps, prec)?.sub(
        &RealEnclosure::from_ratio(eps, prec).mul(&ln_bigint(d, prec)?, prec),
        prec,
    );
    let rhs = main_bound_log(d, prec)?;
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    Ok(ChainVerdict {
        id: CheckId::EpsilonBound,
        point: ParamPoint {
            d: Some(d.clone()),
            eps: Some(eps.clone()),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    })
}

fn indeterminate_verdict(id: CheckId, d: &BigInt, rho: u64, prec: u32) -> ChainVerdict {
    ChainVerdict {
        id,
        point: ParamPoint {
            d: Some(d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict: Verdict::Indeterminate,
        margin: None,
        equality: false,
        whitelisted: false,
        precision: prec,
    }
}

// ----- totient and Stirling lemma checks -----

/// Both totient inequalities at a single n, as certified verdicts.
pub fn totient_lemma_check(n: u64, prec: u32) -> (ChainVerdict, ChainVerdict) {
    let phi = totient(n);
    let point = ParamPoint {
        n: Some(n),
        ..Default::default()
    };
    // n / phi(n) <= loglog(3n)/loglog(3), i.e. n loglog3 <= phi loglog(3n).
    let first = if n == 1 {
        // both sides are literally the same expression
        ChainVerdict {
            id: CheckId::TotientUpper,
            point: point.clone(),
            verdict: Verdict::Holds,
            margin: Some(RealEnclosure::point(Dyadic::zero())),
            equality: true,
            whitelisted: false,
            precision: prec,
        }
    } else {
        let lll3 = ln_u64(3, prec).log(prec).expect("loglog 3 > 0");
        let lll3n = ln_u64(3 * n, prec).log(prec).expect("loglog(3n) > 0");
        let lhs = RealEnclosure::from_i64(n as i64).mul(&lll3, prec);
        let rhs = RealEnclosure::from_i64(phi as i64).mul(&lll3n, prec);
        // margin in the lemma's own scale: log of ratio of the two sides
        let (verdict, _) = decide(&lhs, &rhs, prec);
        let margin = rhs
            .log(prec)
            .and_then(|r| Ok(r.sub(&lhs.log(prec)?, prec)))
            .ok();
        ChainVerdict {
            id: CheckId::TotientUpper,
            point: point.clone(),
            verdict,
            margin,
            equality: false,
            whitelisted: false,
            precision: prec,
        }
    };
    // phi(n) >= sqrt(n/2), checked exactly as 2 phi^2 >= n.
    let two_phi_sq = BigInt::from(2) * BigInt::from(phi) * BigInt::from(phi);
    let nn = BigInt::from(n);
    let equality = two_phi_sq == nn;
    let verdict = if two_phi_sq >= nn { Verdict::Holds } else { Verdict::Fails };
    let margin = if equality {
        RealEnclosure::point(Dyadic::zero())
    } else {
        let ratio = BigRational::new(two_phi_sq, nn);
        RealEnclosure::from_ratio(&ratio, prec)
            .log(prec)
            .expect("positive ratio")
    };
    let second = ChainVerdict {
        id: CheckId::TotientSqrt,
        point,
        verdict,
        margin: Some(margin),
        equality,
        whitelisted: false,
        precision: prec,
    };
    (first, second)
}

/// Round a small positive enclosure endpoint to 64-bit fixed point.
/// `up` rounds the value up (safe upper bound), else down (safe lower bound).
fn fixed64(x: &Dyadic, up: bool) -> u128 {
    let scaled = x.shl(64);
    let q = scaled.to_bigrational();
    let floor = q.floor().to_integer();
    let v = if up && !q.is_integer() {
        floor + BigInt::one()
    } else {
        floor
    };
    v.to_u128().expect("fixed-point value in range")
}

/// Exhaustive totient audit over 1..=max using a sieve, 64-bit fixed-point
/// certified bounds, and per-power-of-two lower bounds of the right-hand
/// side; single-threaded.
pub fn totient_exhaustive(max: u64, prec: u32) -> Result<Vec<u64>> {
    let phi = totient_sieve(max as usize);
    let lll3 = ln_u64(3, prec).log(prec)?;
    // a >= loglog(3) * 2^64: multiplying n by a only strengthens the check
    let a = fixed64(lll3.hi_fin(), true);
    let mut failures = vec![];
    // bucket by powers of two: for n in [2^k, 2^{k+1}), loglog(3*2^k) lower-bounds loglog(3n)
    let mut bucket_lo: Vec<u128> = vec![];
    let mut k = 0u32;
    while (1u64 << k) <= max {
        let lll = ln_u64(3 * (1u64 << k), prec).log(prec)?;
        bucket_lo.push(fixed64(lll.lo_fin(), false));
        k += 1;
    }
    for n in 1..=max {
        let p = phi[n as usize];
        // exact square-root form
        if 2 * (p as u128) * (p as u128) < n as u128 {
            failures.push(n);
            continue;
        }
        if n == 1 {
            continue; // equality case of the first inequality
        }
        let bucket = (63 - n.leading_zeros() as u64) as usize;
        // n * a >= n loglog3 * 2^64 and phi * b <= phi loglog(3n) * 2^64,
        // so n * a <= phi * b certifies the lemma inequality at n.
        if n as u128 * a <= p as u128 * bucket_lo[bucket] {
            continue;
        }
        // rare slow path: exact per-n comparison
        let (v1, _) = totient_lemma_check(n, prec.max(96));
        if v1.verdict != Verdict::Holds {
            failures.push(n);
        }
    }
    Ok(failures)
}

/// n!/n^n <= sqrt(2 pi n) e^(1/12n) e^(-n), compared in log scale.
pub fn stirling_check(n: u64, prec: u32) -> Result<ChainVerdict> {
    if n < 1 {
        return Err(Error::InvalidParameter("n >= 1 required".into()));
    }
    let lhs = ln_bigint(&factorial(n), prec)?
        .sub(&ln_u64(n, prec).mul_bigint(&BigInt::from(n), prec), prec);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rhs = consts::pi(prec)
        .mul_bigint(&BigInt::from(2 * n), prec)
        .log(prec)?
        .mul(&RealEnclosure::from_ratio(&half, prec), prec)
        .add(
            &RealEnclosure::from_ratio(&BigRational::new(BigInt::one(), BigInt::from(12 * n)), prec),
            prec,
        )
        .sub(&RealEnclosure::from_i64(n as i64), prec);
    let (verdict, margin) = decide(&lhs, &rhs, prec);
    Ok(ChainVerdict {
        id: CheckId::Stirling,
        point: ParamPoint {
            n: Some(n),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted: false,
        precision: prec,
    })
}

// ----- grids and the chain verifier -----

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub d_values: Vec<BigInt>,
    pub rho_cap: u64,
    pub eps: Vec<BigRational>,
}

/// Default audit grid: d = 1..=10 then 10^j up to 10^300 (309 points, 301 of
/// them log-spaced), rho up to min(d, 200), eps in {0.1, 0.5, 1, 2}. The
/// small-d points are where the high-rank step is expected to fail.
pub fn default_grid() -> GridSpec {
    let ten = BigInt::from(10);
    let mut d_values: Vec<BigInt> = (1..=9u32).map(BigInt::from).collect();
    d_values.extend((1..=300u32).map(|j| ten.pow(j)));
    let eps = [(1, 10), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
        .collect();
    GridSpec {
        d_values,
        rho_cap: 200,
        eps,
    }
}

fn adaptive<T>(
    start: u32,
    cap: u32,
    mut f: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let mut prec = start;
    loop {
        if let Some(v) = f(prec)? {
            return Ok(Some(v));
        }
        if prec >= cap {
            return Ok(None);
        }
        prec = (prec * 2).min(cap);
    }
}

fn settle(
    start: u32,
    cap: u32,
    f: impl Fn(u32) -> Result<Option<ChainVerdict>>,
) -> Result<Option<ChainVerdict>> {
    let settled = adaptive(start, cap, |p| {
        Ok(match f(p)? {
            None => Some(None),                       // not applicable, settled
            Some(v) if v.verdict != Verdict::Indeterminate => Some(Some(v)),
            Some(_) => None,                          // overlap: retry
        })
    })?;
    match settled {
        Some(v) => Ok(v),
        None => f(cap), // report the indeterminate outcome at the cap
    }
}

/// Shared per-d quantities for the grid sweep, built once per degree value.
struct DegreeContext {
    d: BigInt,
    ln_d: RealEnclosure,
    lll3d: RealEnclosure,
    pow14: RealEnclosure,
    g2_base: RealEnclosure,  // ln(6.5e7) + 5 ln(loglog(6 d^2))
    x_base: RealEnclosure,   // ln 1440 + ln(loglog(6 d^2))
    rhs_low: RealEnclosure,  // ln(6.5e7) + 3.5 log(3d)^(1/4) loglog(3d)
    rhs_high: RealEnclosure, // ln 31693 + log(3d)^(3/4) (1 + 13.5 loglog(3d))
    rhs_main: RealEnclosure, // ln(6.5e7) + 24.5 log(3d)^(3/4) loglog(3d)
    main_bound: RealEnclosure,
    small_d: bool,
}

impl DegreeContext {
    fn build(d: &BigInt, prec: u32) -> Result<DegreeContext> {
        let ln_d = ln_bigint(d, prec)?;
        let l3d = ln3d(d, prec);
        let lll3d = l3d.log(prec)?;
        let lll6d2 = lnln6d2(d, prec);
        let pow14 = quarter_pow(&l3d, prec);
        let pow34 = three_quarter_pow(&l3d, prec);
        let ratio = |p: i64, q: i64| {
            RealEnclosure::from_ratio(&BigRational::new(BigInt::from(p), BigInt::from(q)), prec)
        };
        let ln65e6 = ln_u64(65_000_000, prec);
        let g2_base = ln65e6.add(&lll6d2.log(prec)?.mul_i64(5, prec), prec);
        let x_base = ln_u64(1440, prec).add(&lll6d2.log(prec)?, prec);
        let rhs_low = ln65e6.add(&pow14.mul(&lll3d, prec).mul(&ratio(7, 2), prec), prec);
        let rhs_high = ln_u64(31693, prec).add(
            &pow34.mul(
                &RealEnclosure::from_i64(1).add(&lll3d.mul(&ratio(27, 2), prec), prec),
                prec,
            ),
            prec,
        );
        let rhs_main = ln65e6.add(&pow34.mul(&lll3d, prec).mul(&ratio(49, 2), prec), prec);
        let small_d = matches!(
            l3d.compare(&RealEnclosure::from_i64(16)),
            IvOrder::Less
        );
        Ok(DegreeContext {
            d: d.clone(),
            ln_d,
            lll3d,
            pow14,
            g2_base,
            x_base,
            rhs_low,
            rhs_high,
            rhs_main,
            main_bound: main_bound_log(d, prec)?,
            small_d,
        })
    }
}

fn verdict_at(
    id: CheckId,
    ctx: &DegreeContext,
    rho: u64,
    lhs: &RealEnclosure,
    rhs: &RealEnclosure,
    prec: u32,
) -> ChainVerdict {
    let (verdict, margin) = decide(lhs, rhs, prec);
    let whitelisted = id == CheckId::HighRankBound && verdict == Verdict::Fails && ctx.small_d;
    ChainVerdict {
        id,
        point: ParamPoint {
            d: Some(ctx.d.clone()),
            rho: Some(rho),
            ..Default::default()
        },
        verdict,
        margin: Some(margin),
        equality: false,
        whitelisted,
        precision: prec,
    }
}

/// Runs checks (c)-(f) over (d, rho) grid points and (g) over (d, eps).
/// The sweep runs at `start_prec` with per-d shared subexpressions; any
/// point left indeterminate is settled individually with adaptive precision
/// doubling up to `cap`, so every verdict in the result is final.
pub fn verify_chain(grid: &GridSpec, start_prec: u32, cap: u32) -> Result<Vec<ChainVerdict>> {
    let prec = start_prec;
    let rho_cap = grid.rho_cap.max(1);
    // per-rho constants shared across all d
    let ln_rho: Vec<RealEnclosure> = (0..=rho_cap).map(|r| ln_u64(r.max(1), prec)).collect();
    let ln_coeff: Vec<RealEnclosure> = (0..=rho_cap)
        .map(|r| {
            let r = r.max(1);
            ln_bigint(&(BigInt::from(1050u32) * BigInt::from(r).pow(5)), prec).expect("positive")
        })
        .collect();
    let ln2 = consts::ln2(prec);
    let c_eps_cache: Vec<(BigRational, RealEnclosure)> = grid
        .eps
        .iter()
        .map(|e| Ok((e.clone(), c_eps_log(e, prec)?)))
        .collect::<Result<_>>()?;

    let mut out = vec![];
    for d in &grid.d_values {
        let ctx = DegreeContext::build(d, prec)?;
        let rho_max = d.to_u64().map_or(rho_cap, |v| v.min(rho_cap));
        // incremental prefix-min for g1
        let mut g1_pref: Option<RealEnclosure> = None;
        for rho in 1..=rho_max {
            let term = {
                let exponent = BigInt::from(rho) * BigInt::from((rho + 1) * (rho + 1));
                let base = ln_coeff[rho as usize].add(&ctx.lll3d, prec);
                let r_dy = Dyadic::from_i64(rho as i64);
                let d_part = RealEnclosure::from_endpoints(
                    ctx.ln_d
                        .lo_fin()
                        .div_rounded(&r_dy, prec, crate::interval::Dir::Down),
                    ctx.ln_d
                        .hi_fin()
                        .div_rounded(&r_dy, prec, crate::interval::Dir::Up),
                );
                d_part.add(&base.mul_bigint(&exponent, prec), prec)
            };
            let g1 = match &g1_pref {
                None => term,
                Some(prev) => RealEnclosure::from_endpoints(
                    prev.lo_fin().clone().min(term.lo_fin().clone()),
                    prev.hi_fin().clone().min(term.hi_fin().clone()),
                ),
            };
            g1_pref = Some(g1.clone());
            let g2 = ctx.g2_base.add(
                &ln_rho[rho as usize].mul_bigint(&BigInt::from(rho + 5), prec),
                prec,
            );
            // (c)
            let x_log = ctx
                .x_base
                .add(&ln_rho[rho as usize].mul_bigint(&BigInt::from(rho), prec), prec);
            let lhs_c = x_log.add(&ln2.add(&x_log, prec).log(prec)?.mul_i64(4, prec), prec);
            out.push(verdict_at(CheckId::DegreeLogStep, &ctx, rho, &lhs_c, &g2, prec));
            // (d)/(e) condition
            let below = match RealEnclosure::from_bigint(&BigInt::from(rho)).compare(&ctx.pow14) {
                IvOrder::Less => Some(true),
                IvOrder::Greater => Some(false),
                IvOrder::Overlap => None,
            };
            match below {
                Some(true) => {
                    out.push(verdict_at(CheckId::LowRankBound, &ctx, rho, &g2, &ctx.rhs_low, prec));
                }
                Some(false) => {
                    out.push(verdict_at(CheckId::HighRankBound, &ctx, rho, &g1, &ctx.rhs_high, prec));
                }
                None => {
                    out.push(indeterminate_verdict(CheckId::LowRankBound, d, rho, prec));
                    out.push(indeterminate_verdict(CheckId::HighRankBound, d, rho, prec));
                }
            }
            // (f)
            let lhs_f = RealEnclosure::from_endpoints(
                g1.lo_fin().clone().min(g2.lo_fin().clone()),
                g1.hi_fin().clone().min(g2.hi_fin().clone()),
            );
            out.push(verdict_at(CheckId::MainBound, &ctx, rho, &lhs_f, &ctx.rhs_main, prec));
        }
        for (eps, c_log) in &c_eps_cache {
            let lhs = c_log.sub(
                &RealEnclosure::from_ratio(eps, prec).mul(&ctx.ln_d, prec),
                prec,
            );
            let (verdict, margin) = decide(&lhs, &ctx.main_bound, prec);
            out.push(ChainVerdict {
                id: CheckId::EpsilonBound,
                point: ParamPoint {
                    d: Some(d.clone()),
                    eps: Some(eps.clone()),
                    ..Default::default()
                },
                verdict,
                margin: Some(margin),
                equality: false,
                whitelisted: false,
                precision: prec,
            });
        }
    }
    // settle any indeterminate points individually
    for v in out.iter_mut() {
        if v.verdict != Verdict::Indeterminate {
            continue;
        }
        let d = v.point.d.clone().expect("grid verdicts carry d");
        let settled = match v.id {
            CheckId::LowRankBound => {
                settle(prec * 2, cap, |p| check_low_rank(&d, v.point.rho.unwrap(), p))?
            }
            CheckId::HighRankBound => {
                settle(prec * 2, cap, |p| check_high_rank(&d, v.point.rho.unwrap(), p))?
            }
            CheckId::DegreeLogStep => settle(prec * 2, cap, |p| {
                check_degree_log_step(&d, v.point.rho.unwrap(), p).map(Some)
            })?,
            CheckId::MainBound => settle(prec * 2, cap, |p| {
                check_main_bound(&d, v.point.rho.unwrap(), p).map(Some)
            })?,
            CheckId::EpsilonBound => settle(prec * 2, cap, |p| {
                check_epsilon_bound(&d, v.point.eps.as_ref().unwrap(), p).map(Some)
            })?,
            _ => None,
        };
        if let Some(s) = settled {
            *v = s;
        }
    }
    out.retain(|v| {
        // drop not-applicable placeholders that settled to None
        !(v.verdict == Verdict::Indeterminate
            && matches!(v.id, CheckId::LowRankBound | CheckId::HighRankBound)
            && v.margin.is_none()
            && {
                // re-check applicability at the cap
                let d = v.point.d.as_ref().unwrap();
                let rho = v.point.rho.unwrap();
                rho_below_threshold(rho, d, cap)
                    .map(|below| match v.id {
                        CheckId::LowRankBound => !below,
                        _ => below,
                    })
                    .unwrap_or(false)
            })
    });
    Ok(out)
}

// ----- bound report -----

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub d: BigInt,
    pub rho: Option<u64>,
    pub eps: Option<BigRational>,
    pub precision: u32,
    pub entries: Vec<(String, LogBound)>,
}

pub fn bound_report(
    d: &BigInt,
    rho: Option<u64>,
    eps: Option<&BigRational>,
    prec: u32,
) -> Result<BoundReport> {
    if d < &BigInt::one() {
        return Err(Error::InvalidParameter("d >= 1 required".into()));
    }
    let mut entries: Vec<(String, LogBound)> = vec![];
    let d_u64 = d.to_u64().unwrap_or(u64::MAX);
    entries.push(("voutier".into(), voutier_log(d_u64, prec)));
    for n in 1..=3u64 {
        entries.push((
            format!("product_bound(n={})", n),
            LogBound::Value(product_bound_log(n, d, prec)?),
        ));
    }
    entries.push((
        "relative_dobrowolski".into(),
        LogBound::Value(relative_dobrowolski_log(d, prec)?),
    ));
    if let Some(r) = rho {
        let (g1, argmin) = g1_log(r, d, prec)?;
        entries.push((format!("g1 (argmin r={})", argmin), LogBound::Value(g1)));
        entries.push(("g2".into(), LogBound::Value(g2_log(r, d, prec)?)));
    }
    entries.push(("main_bound".into(), LogBound::Value(main_bound_log(d, prec)?)));
    if let Some(e) = eps {
        entries.push(("c_eps".into(), LogBound::Value(c_eps_log(e, prec)?)));
    }
    Ok(BoundReport {
        d: d.clone(),
        rho,
        eps: eps.cloned(),
        precision: prec,
        entries,
    })
}

pub fn default_precision() -> (u32, u32) {
    (DEFAULT_PREC, DEFAULT_PREC_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_decimal;

    fn contains(iv: &RealEnclosure, decimal: &str) -> bool {
        iv.contains_ratio(&parse_decimal(decimal).unwrap())
    }

    fn big(d: u64) -> BigInt {
        BigInt::from(d)
    }

    #[test]
    fn n_rho_values() {
        assert_eq!(n_rho(1).unwrap(), big(2).into());
        assert_eq!(n_rho(8).unwrap(), BigInt::from(696_729_600u64));
        // 11! * 2^11 = 39916800 * 2048
        assert_eq!(
            n_rho(11).unwrap(),
            BigInt::from(39_916_800u64) * BigInt::from(2048u64)
        );
        assert_eq!(n_rho(3).unwrap(), BigInt::from(48)); // 3! 2^3
        assert!(n_rho(0).is_err());
    }

    #[test]
    fn subgroup_order_equality_only_at_8() {
        for rho in 1..=30u64 {
            let v = check_subgroup_order(rho, 96).unwrap();
            assert_eq!(v.verdict, Verdict::Holds, "rho = {}", rho);
            assert_eq!(v.equality, rho == 8, "equality flag at rho = {}", rho);
        }
    }

    #[test]
    fn stirling_constant_near_1440() {
        let v = check_stirling_constant(1, 128);
        assert_eq!(v.verdict, Verdict::Holds);
        let value = stirling_constant_value(1, 128);
        assert!(contains(&value, "1439.266109025677481613271729141747946400789870771128"));
        for rho in [2u64, 10, 100, 1000] {
            assert_eq!(check_stirling_constant(rho, 128).verdict, Verdict::Holds);
        }
    }

    #[test]
    fn totient_check_examples() {
        let (a, b) = totient_lemma_check(1, 96);
        assert_eq!(a.verdict, Verdict::Holds);
        assert!(a.equality);
        assert_eq!(b.verdict, Verdict::Holds);
        let (_, b2) = totient_lemma_check(2, 96);
        assert!(b2.equality, "2 phi(2)^2 = 2 exactly");
        let (a10, b10) = totient_lemma_check(10, 96);
        assert_eq!(a10.verdict, Verdict::Holds);
        assert_eq!(b10.verdict, Verdict::Holds);
    }

    #[test]
    fn totient_exhaustive_small() {
        assert!(totient_exhaustive(20_000, 96).unwrap().is_empty());
    }

    #[test]
    fn stirling_margins() {
        let v1 = stirling_check(1, 128).unwrap();
        assert_eq!(v1.verdict, Verdict::Holds);
        let m = v1.margin.unwrap();
        assert!(contains(&m, "0.002271866538006075113663069738950973194730806971116746"));
        let v2 = stirling_check(2, 128).unwrap();
        assert_eq!(v2.verdict, Verdict::Holds);
        let v100 = stirling_check(100, 128).unwrap();
        assert_eq!(v100.verdict, Verdict::Holds);
    }

    #[test]
    fn voutier_values() {
        assert!(matches!(voutier_log(1, 96), LogBound::Trivial));
        assert!(matches!(voutier_log(2, 96), LogBound::Trivial));
        let LogBound::Value(v3) = voutier_log(3, 128) else { panic!() };
        assert!(contains(&v3, "-9.858905597666848527062009537739943494883756104971646"));
        let LogBound::Value(v100) = voutier_log(100, 128) else { panic!() };
        assert!(contains(&v100, "-9.302735467150773871866049726891368053280592907504327"));
    }

    #[test]
    fn product_bound_values() {
        let v = product_bound_log(1, &big(1), 128).unwrap();
        assert!(contains(&v, "-28.20237308307307228517473240144300509678646463968128"));
        let v10 = product_bound_log(1, &big(10), 128).unwrap();
        assert!(contains(&v10, "-35.02527702840648944725591186759732266146376312622738"));
        // monotone: larger n gives a smaller bound
        let v2 = product_bound_log(2, &big(10), 128).unwrap();
        assert_eq!(v2.compare(&v10), IvOrder::Less);
    }

    #[test]
    fn relative_dobrowolski_values() {
        let v1 = relative_dobrowolski_log(&big(1), 128).unwrap();
        assert!(contains(&v1, "-0.7616854988670688345451828550167172997005289793283863"));
        let v10 = relative_dobrowolski_log(&big(10), 128).unwrap();
        assert!(contains(&v10, "-5.759955058284551365747421824542364158316171380017992"));
        // decreasing on a sampled grid
        let mut prev = v1;
        for d in [2u64, 5, 10, 100, 1000] {
            let v = relative_dobrowolski_log(&big(d), 128).unwrap();
            assert_eq!(v.compare(&prev), IvOrder::Less, "not decreasing at D={}", d);
            prev = v;
        }
    }

    #[test]
    fn g1_g2_values() {
        let (g1, argmin) = g1_log(1, &big(10), 128).unwrap();
        assert_eq!(argmin, 1);
        assert!(contains(&g1, "35.02527702840648944725591186759732266146376312622738"));
        let g2 = g2_log(1, &big(10), 128).unwrap();
        assert!(contains(&g2, "21.08152603461931193248547789205967472761151087277219"));
        let g2_11 = g2_log(1, &big(1), 128).unwrap();
        assert!(contains(&g2_11, "15.29375588219908600123832879678067316789427439144735"));
        let (g1_22, _) = g1_log(2, &big(2), 128).unwrap();
        assert!(contains(&g1_22, "30.85212127629685872153250027201775564642863768511848"));
    }

    #[test]
    fn main_bound_values() {
        let v1 = main_bound_log(&big(1), 128).unwrap();
        assert!(contains(&v1, "-20.89324844705286326222780552516877538254040912253968"));
        let v2 = main_bound_log(&big(2), 128).unwrap();
        assert!(contains(&v2, "-40.54866999158599911263581937013040200333814061011978"));
        // monotone decreasing in d
        let mut prev = v1;
        for d in [2u64, 3, 10, 100, 10_000] {
            let v = main_bound_log(&big(d), 128).unwrap();
            assert_eq!(v.compare(&prev), IvOrder::Less);
            prev = v;
        }
    }

    #[test]
    fn c_eps_values() {
        let one = BigRational::one();
        let v = c_eps_log(&one, 160).unwrap();
        assert!(contains(&v, "-143227142500.1285730326204751635391768743974393654563"));
        let extreme = BigRational::new(BigInt::from(724), BigInt::from(5));
        let v2 = c_eps_log(&extreme, 160).unwrap();
        assert!(contains(&v2, "-359.4997401430946487861754419438566356937654446817643"));
        // monotone in eps on a sampled grid
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let tenth = BigRational::new(BigInt::one(), BigInt::from(10));
        let v_tenth = c_eps_log(&tenth, 160).unwrap();
        let v_half = c_eps_log(&half, 160).unwrap();
        assert_eq!(v_tenth.compare(&v_half), IvOrder::Less);
        assert_eq!(v_half.compare(&v), IvOrder::Less);
    }

    #[test]
    fn expected_failure_at_small_d() {
        let v = check_high_rank(&big(2), 2, 128).unwrap().unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
        assert!(v.whitelisted, "small-d failure must be whitelisted");
        // g1 ~ 2.5e13 vs RHS ~ 2.9e10: margin = log RHS - log LHS
        let m = v.margin.unwrap();
        // 24.10549798 - 30.85212128 = -6.74662330
        assert!(contains(&m, "-6.74662329977547647820978724764189031773445119235995"));
    }

    #[test]
    fn main_bound_holds_where_high_rank_fails() {
        let v = check_main_bound(&big(2), 2, 128).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        // margin = 40.11788708 - 23.56792033 = 16.54996675
        assert!(contains(
            &v.margin.unwrap(),
            "16.54996674530088577759184251578962200961842672741316"
        ));
    }

    #[test]
    fn low_rank_holds_at_d1() {
        let v = check_low_rank(&big(1), 1, 128).unwrap().unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        // rho=2 > log(3)^{1/4}: not applicable
        assert!(check_low_rank(&big(1), 2, 128).unwrap().is_none());
    }

    #[test]
    fn chain_on_tiny_grid() {
        let grid = GridSpec {
            d_values: vec![big(1), big(2), big(10), big(100)],
            rho_cap: 4,
            eps: vec![BigRational::one()],
        };
        let verdicts = verify_chain(&grid, 96, 1024).unwrap();
        assert!(!verdicts.is_empty());
        for v in &verdicts {
            assert_ne!(v.verdict, Verdict::Indeterminate, "{:?}", v);
            if v.verdict == Verdict::Fails {
                assert_eq!(v.id, CheckId::HighRankBound, "unexpected failure {:?}", v);
                assert!(v.whitelisted);
            }
        }
        // main bound and epsilon bound hold everywhere on the grid
        assert!(verdicts
            .iter()
            .filter(|v| v.id == CheckId::MainBound || v.id == CheckId::EpsilonBound)
            .all(|v| v.verdict == Verdict::Holds));
    }

    #[test]
    fn precision_refinement_nests() {
        for (lo_p, hi_p) in [(96u32, 192u32), (128, 256)] {
            let coarse = main_bound_log(&big(7), lo_p).unwrap();
            let fine = main_bound_log(&big(7), hi_p).unwrap();
            assert!(coarse.contains(&fine), "refinement not nested");
            let coarse_g = g2_log(3, &big(1_000_000), lo_p).unwrap();
            let fine_g = g2_log(3, &big(1_000_000), hi_p).unwrap();
            assert!(coarse_g.contains(&fine_g));
        }
    }

    #[test]
    fn bound_report_renders_all_rows() {
        let r = bound_report(&big(10), Some(1), Some(&BigRational::one()), 128).unwrap();
        assert!(r.entries.iter().any(|(n, _)| n.starts_with("g1")));
        let names: Vec<&str> = r.entries.iter().map(|(n, _)| n.as_str()).collect();
        assert!(names.contains(&"voutier"));
        assert!(names.contains(&"main_bound"));
        assert!(names.contains(&"c_eps"));
        let r1 = bound_report(&big(1), None, None, 96).unwrap();
        assert!(matches!(
            r1.entries.iter().find(|(n, _)| n == "voutier").unwrap().1,
            LogBound::Trivial
        ));
    }
}
