//! Antiderivatives `F_k(x) = ∫_{-1}^x f_k`, the series `F = Σ F_k / 2^k`,
//! the normalized signed antiderivative `G`, and an independent enclosure
//! integrator used to cross-check them.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::affine::Affine;
use crate::cells::{level1_containing, Level1Id};
use crate::construction::Certified;
use crate::error::{Error, Result};
use crate::rat::{self, check_domain, Rat};
use crate::report::{Check, PointValue, Quantity, Relation, WitnessKind, WitnessReport};

/// `F_0(x) = (x² - 1)/2`, the integral of the identity from `-1`.
pub fn antiderivative_base(x: &Rat) -> Result<Rat> {
    check_domain(x)?;
    Ok((x * x - Rat::one()) / rat::int(2))
}

/// `F_k` through the substitution recursion `F_k(x) = F_{k-1}(f_1(x)) / σ`,
/// where `σ` is the slope of `f_1` on a level-1 cell holding `x`. At shared
/// endpoints `pick_right` selects which of the two cells is used.
pub(crate) fn antiderivative_term_via(x: &Rat, k: usize, pick_right: bool) -> Result<Rat> {
    check_domain(x)?;
    let mut y = x.clone();
    let mut scale = Rat::one();
    for _ in 0..k {
        let ids = level1_containing(&y)?;
        let Some(j) = (if pick_right { ids.last() } else { ids.first() }) else {
            // y = ±1: F_m(±1) = 0 for every m
            return Ok(Rat::zero());
        };
        let phi = j.affine();
        scale /= &phi.slope;
        y = phi.apply(&y);
    }
    Ok((&y * &y - Rat::one()) / rat::int(2) * scale)
}

/// Exact `F_k(x)`; `k = 0` is [`antiderivative_base`].
pub fn antiderivative_term(x: &Rat, k: usize) -> Result<Rat> {
    antiderivative_term_via(x, k, false)
}

/// Certified `F(x) = Σ_{k≥1} F_k(x)/2^k` using `|F_k| ≤ 2` for the tail.
pub fn antiderivative(x: &Rat, terms: usize) -> Result<Certified> {
    check_domain(x)?;
    let mut center = Rat::zero();
    for k in 1..=terms {
        center += antiderivative_term(x, k)? * rat::pow2(-(k as i64));
    }
    Ok(Certified { center, radius: rat::pow2(1 - terms as i64) })
}

/// Center of the `terms`-term enclosure of `F(0)`, the constant subtracted to
/// normalize `F(0) = 0`.
pub fn normalization_constant(terms: usize) -> Rat {
    antiderivative(&Rat::zero(), terms).expect("0 is in range").center
}

/// Certified `G(x) = (F(x) - F(0))·sign(x)`. The radius is doubled to cover
/// the uncertainty in both `F(x)` and `F(0)`.
pub fn signed_antiderivative(x: &Rat, terms: usize) -> Result<Certified> {
    check_domain(x)?;
    if x.is_zero() {
        return Ok(Certified::exact(Rat::zero()));
    }
    let v = antiderivative(x, terms)?;
    let c0 = normalization_constant(terms);
    let center = (v.center - c0) * rat::int(rat::sign(x) as i64);
    Ok(Certified { center, radius: v.radius * rat::int(2) })
}

/// Rigorous two-sided bound `lower ≤ I ≤ upper` on an integral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    #[serde(with = "rat::serde_str")]
    pub lower: Rat,
    #[serde(with = "rat::serde_str")]
    pub upper: Rat,
}

impl Enclosure {
    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.lower <= *v && *v <= self.upper
    }
}

/// Exact integral over the enumerated cells plus the length left uncovered
/// by the truncated enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tally {
    integral: Rat,
    uncovered: Rat,
}

impl Tally {
    fn zero() -> Self {
        Tally { integral: Rat::zero(), uncovered: Rat::zero() }
    }

    fn scaled(&self, s: &Rat) -> Tally {
        Tally { integral: &self.integral * s, uncovered: &self.uncovered * s }
    }

    fn add(&mut self, other: Tally) {
        self.integral += other.integral;
        self.uncovered += other.uncovered;
    }

    /// Enclosure for an integrand bounded by `bound` in absolute value.
    fn enclosure(&self, bound: &Rat) -> Enclosure {
        let slack = &self.uncovered * bound;
        Enclosure { lower: &self.integral - &slack, upper: &self.integral + slack }
    }
}

fn overlap(a: &Rat, b: &Rat, lo: &Rat, hi: &Rat) -> Rat {
    let l = a.max(lo);
    let h = b.min(hi);
    if l < h {
        h - l
    } else {
        Rat::zero()
    }
}

/// Integration of `f_m` over the uniform truncated cell family (level-1
/// indices `|j| ≤ budget` at every level). Cells are integrated exactly with
/// the trapezoid rule; everything the family misses is reported as uncovered
/// length. Whole cells are self-similar copies of the root family, so their
/// contribution is memoized in `full` instead of enumerated cell by cell.
struct CellIntegrator {
    full: Vec<Tally>,
    covered_lo: Rat,
    covered_hi: Rat,
}

impl CellIntegrator {
    fn new(budget: u64, depth: usize) -> Self {
        let gap = rat::ratio(1, budget as i64 + 2);
        let mut it = CellIntegrator {
            full: Vec::with_capacity(depth + 1),
            covered_lo: &gap - Rat::one(),
            covered_hi: Rat::one() - gap,
        };
        let root = Affine::identity().integral(&-Rat::one(), &Rat::one());
        it.full.push(Tally { integral: root, uncovered: Rat::zero() });
        for m in 1..=depth {
            let t = it.segment(m, &-Rat::one(), &Rat::one());
            it.full.push(t);
        }
        it
    }

    fn piece(&self, m: usize, j: Level1Id, a: &Rat, b: &Rat) -> Tally {
        let phi = j.affine();
        let (p, q) = phi.image(a, b);
        self.segment(m - 1, &p, &q).scaled(&phi.slope.abs().recip())
    }

    /// Tally of `f_m` over `[a, b] ⊆ [-1, 1]`.
    fn segment(&self, m: usize, a: &Rat, b: &Rat) -> Tally {
        if a >= b {
            return Tally::zero();
        }
        if m == 0 {
            return Tally { integral: Affine::identity().integral(a, b), uncovered: Rat::zero() };
        }
        if a.abs().is_one() && b.is_one() {
            if let Some(t) = self.full.get(m) {
                return t.clone();
            }
        }
        let one = Rat::one();
        let mut out = Tally::zero();
        out.uncovered += overlap(a, b, &-one.clone(), &self.covered_lo);
        out.uncovered += overlap(a, b, &self.covered_hi, &one);
        let a2 = a.max(&self.covered_lo).clone();
        let b2 = b.min(&self.covered_hi).clone();
        if a2 >= b2 {
            return out;
        }
        let ja = *level1_containing(&a2).expect("in range").last().expect("interior");
        let jb = *level1_containing(&b2).expect("in range").first().expect("interior");
        if ja == jb {
            out.add(self.piece(m, ja, &a2, &b2));
            return out;
        }
        let (_, hi_a) = ja.interval();
        let (lo_b, _) = jb.interval();
        out.add(self.piece(m, ja, &a2, &hi_a));
        out.add(self.piece(m, jb, &lo_b, &b2));
        let middle = (&lo_b - &hi_a) / rat::int(2);
        out.add(self.full[m - 1].scaled(&middle));
        out
    }
}

/// Rigorous enclosure of `∫_{-1}^{upto} f_k` that never uses the
/// antiderivative recursion: exact trapezoid integrals over the cells of
/// level `k` with indices `|j| ≤ index_budget`, plus `±1` per unit of length
/// those cells leave uncovered. The width is at most `4k / (index_budget + 2)`.
pub fn enclose_integral(k: usize, upto: &Rat, index_budget: u64) -> Result<Enclosure> {
    check_domain(upto)?;
    let it = CellIntegrator::new(index_budget, k.saturating_sub(1));
    Ok(it.segment(k, &-Rat::one(), upto).enclosure(&Rat::one()))
}

/// Rigorous enclosure of `∫_{-1}^1 f`: each term `f_k / 2^k` (`k ≤ terms`) is
/// integrated over its enumerated level-`k` cells with a `±2^-k` charge per
/// uncovered length, and the series tail adds `±2·2^-terms`.
pub fn darboux_gap(terms: usize, cells_budget: u64) -> Enclosure {
    let it = CellIntegrator::new(cells_budget, terms);
    let mut integral = Rat::zero();
    let mut slack = rat::pow2(1 - terms as i64);
    for k in 1..=terms {
        let w = rat::pow2(-(k as i64));
        let t = &it.full[k];
        integral += &t.integral * &w;
        slack += &t.uncovered * &w;
    }
    Enclosure { lower: &integral - &slack, upper: integral + slack }
}

/// Checks `|F_k(x) / (x + 1)| ≤ 1/n` for `x ∈ (1/(n+1) - 1, 1/n - 1]`.
pub fn quotient_bound_check(k: usize, n: u64, x: &Rat) -> Result<WitnessReport> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} must be at least 2")));
    }
    let n_r = rat::int(n as i64);
    let band_lo = (&n_r + Rat::one()).recip() - Rat::one();
    let band_hi = n_r.recip() - Rat::one();
    if !(band_lo < *x && *x <= band_hi) {
        return Err(Error::Precondition(format!("{x} is not in ({band_lo}, {band_hi}]")));
    }
    let value = antiderivative_term(x, k)?;
    let quotient = (&value / (x + Rat::one())).abs();
    let mut r = WitnessReport::new(WitnessKind::QuotientBound)
        .input("k", k)
        .input("n", n)
        .input("x", x);
    r.point("x", x, Quantity::Antiderivative(k), PointValue::Exact(value));
    r.check(Check::new("|F_k(x)/(x+1)| <= 1/n", quotient, Relation::Le, n_r.recip()));
    Ok(r.conclude())
}
