//! Constructive witness searches. Every verdict rests on exact rational
//! inequalities recorded in the report's certificate.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::affine::Affine;
use crate::antiderivative::{antiderivative_term, enclose_integral};
use crate::cells::{self, cell, cells_at_level, e_level, locate, Cell, Level1Id};
use crate::construction::{eval_f, fk_unchecked, orbit, partial_sum_unchecked, Absorber, DEFAULT_TERMS};
use crate::error::{Error, Result};
use crate::rat::{self, check_domain, Rat};
use crate::report::{Check, PointValue, Quantity, Relation, WitnessKind, WitnessReport};

/// Default orbit depth used to decide membership in the exceptional set.
pub const DEFAULT_DEPTH: usize = 40;

/// Number of times the witness index is doubled before giving up.
const MAX_DOUBLINGS: usize = 48;

fn positive(delta: &Rat) -> Result<()> {
    if delta.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("delta = {delta} must be positive")))
    }
}

/// Exact `f(x)` for a point whose orbit is known to absorb by step `k + 1`.
fn exact_f(x: &Rat, k: usize) -> Rat {
    debug_assert!(fk_unchecked(x, k + 1).is_zero());
    partial_sum_unchecked(x, k)
}

/// Two cell endpoints near an exceptional point, where `f` jumps by more
/// than `2^-(k+1)` above and below `f(x0)`.
#[derive(Debug, Clone)]
struct Oscillation {
    level: usize,
    x0: Rat,
    f0: Rat,
    above: Rat,
    f_above: Rat,
    below: Rat,
    f_below: Rat,
}

/// Affine map of `f_{k-1}` on a level-`(k-1)` cell having `x0` as an
/// endpoint, preferring the cell to the right of `x0`.
fn adjacent_map(x0: &Rat, k: usize) -> Result<Affine> {
    if k == 1 {
        return Ok(Affine::identity());
    }
    let cells: Vec<Cell> = locate(x0, k - 1)?.iter().map(cell).collect();
    cells
        .iter()
        .find(|c| c.lo == *x0)
        .or_else(|| cells.iter().find(|c| c.hi == *x0))
        .map(Cell::map)
        .ok_or_else(|| Error::Precondition(format!("{x0} is not a level-{} endpoint", k - 1)))
}

fn find_oscillation(x0: &Rat, delta: &Rat, depth: usize) -> Result<Oscillation> {
    check_domain(x0)?;
    positive(delta)?;
    let k = e_level(x0, depth)?.ok_or_else(|| Error::NotAnEPoint(x0.clone(), depth))?;
    let p = adjacent_map(x0, k)?;
    // p(x0) = ±1; points p⁻¹(ε(1 - 1/n)) approach x0 from inside the cell
    let eps = p.apply(x0);
    debug_assert!(eps.abs().is_one());
    let inv = p.inverse();
    let f0 = exact_f(x0, k.saturating_sub(1));
    let offset = rat::pow2(-(k as i64) - 1);
    let scale = p.slope.abs();
    let mut n = rat::floor_int(&(delta * &scale).recip()) + 1u32;
    if n < 2u32.into() {
        n = 2u32.into();
    }
    for _ in 0..MAX_DOUBLINGS {
        let mut above = None;
        let mut below = None;
        for m in [n.clone(), &n + 1u32] {
            let y = &eps * (Rat::one() - Rat::from_integer(m).recip());
            let x = inv.apply(&y);
            let fx = exact_f(&x, k);
            if fk_unchecked(&x, k).is_positive() {
                above = Some((x, fx));
            } else {
                below = Some((x, fx));
            }
        }
        let (above, f_above) = above.expect("consecutive indices alternate sign");
        let (below, f_below) = below.expect("consecutive indices alternate sign");
        if f_above > &f0 + &offset && f_below < &f0 - &offset {
            return Ok(Oscillation { level: k, x0: x0.clone(), f0, above, f_above, below, f_below });
        }
        n *= 2u32;
    }
    Err(Error::SearchBudgetExhausted(format!("no oscillation witness near {x0} within {MAX_DOUBLINGS} doublings")))
}

impl Oscillation {
    fn record(&self, r: &mut WitnessReport, delta: &Rat) {
        let k = self.level;
        r.point("x0", &self.x0, Quantity::F, PointValue::Exact(self.f0.clone()));
        r.point("x1", &self.above, Quantity::F, PointValue::Exact(self.f_above.clone()));
        r.point("x2", &self.below, Quantity::F, PointValue::Exact(self.f_below.clone()));
        r.point("x1", &self.above, Quantity::Iterate(k), PointValue::Exact(Rat::one()));
        r.point("x2", &self.below, Quantity::Iterate(k), PointValue::Exact(-Rat::one()));
        let offset = rat::pow2(-(k as i64) - 1);
        r.check(Check::new("|x1 - x0| < delta", (&self.above - &self.x0).abs(), Relation::Lt, delta.clone()));
        r.check(Check::new("|x2 - x0| < delta", (&self.below - &self.x0).abs(), Relation::Lt, delta.clone()));
        r.check(Check::new(
            "f(x1) > f(x0) + 2^-(k+1)",
            self.f_above.clone(),
            Relation::Gt,
            &self.f0 + &offset,
        ));
        r.check(Check::new(
            "f(x2) < f(x0) - 2^-(k+1)",
            self.f_below.clone(),
            Relation::Lt,
            &self.f0 - &offset,
        ));
    }
}

/// Witnesses that `f` oscillates by more than `2^-(k+1)` on both sides of
/// `f(x0)` inside every `delta`-neighbourhood of an exceptional point `x0`
/// (first level `k`). All three values are exact because the orbits absorb.
pub fn oscillation_witness(x0: &Rat, delta: &Rat, depth: usize) -> Result<WitnessReport> {
    let osc = find_oscillation(x0, delta, depth)?;
    let mut r = WitnessReport::new(WitnessKind::Oscillation)
        .input("x0", x0)
        .input("delta", delta)
        .input("depth", depth)
        .input("k", osc.level);
    osc.record(&mut r, delta);
    Ok(r.conclude())
}

/// Witnesses `x1 < x0 < x2` within `delta` of `x0` with
/// `(f(x1) - f(x0))(f(x2) - f(x0)) < 0`, so `x0` is not a local extremum.
pub fn non_extremum_witness(x0: &Rat, delta: &Rat, depth: usize) -> Result<WitnessReport> {
    check_domain(x0)?;
    positive(delta)?;
    let base = WitnessReport::new(WitnessKind::NonExtremum)
        .input("x0", x0)
        .input("delta", delta)
        .input("depth", depth);

    if e_level(x0, depth)?.is_some() {
        let osc = find_oscillation(x0, delta, depth)?;
        let mut r = base.input("k", osc.level).input("case", "exceptional");
        osc.record(&mut r, delta);
        let product = (&osc.f_above - &osc.f0) * (&osc.f_below - &osc.f0);
        r.check(Check::new("(f(x1) - f(x0))(f(x2) - f(x0)) < 0", product, Relation::Lt, Rat::zero()));
        return Ok(r.conclude());
    }

    let orb = orbit(x0, depth)?;
    if orb.absorber == Some(Absorber::Zero) {
        return Ok(origin_witness(base, delta));
    }

    // x0 lies in the interior of exactly one cell at every level ≤ depth
    for k in 1..depth {
        let addr = locate(x0, k + 1)?;
        let [child] = addr.as_slice() else {
            return Err(Error::DepthExhausted(x0.clone(), depth));
        };
        let parent = cell(&child.truncated(k));
        if !(parent.lo > x0 - delta && parent.hi < x0 + delta) {
            continue;
        }
        let here = child.ids()[k].0;
        let step = if parent.slope.is_positive() { 1 } else { -1 };
        let v = fk_unchecked(x0, k + 1);
        let preimage = |j: i64| parent.child(Level1Id(j)).map().inverse().apply(&v);
        let x1 = preimage(here - step);
        let x2 = preimage(here + step);
        let s0 = partial_sum_unchecked(x0, k);
        let s1 = partial_sum_unchecked(&x1, k);
        let s2 = partial_sum_unchecked(&x2, k);
        let product = (&s1 - &s0) * (&s2 - &s0);
        if product.is_zero() {
            // S_k constant on this cell; the next level is not
            continue;
        }
        let mut r = base.input("k", k).input("case", "interior");
        for (label, x, s) in [("x0", x0, &s0), ("x1", &x1, &s1), ("x2", &x2, &s2)] {
            r.point(label, x, Quantity::PartialSum(k), PointValue::Exact(s.clone()));
            r.point(label, x, Quantity::Iterate(k + 1), PointValue::Exact(fk_unchecked(x, k + 1)));
            r.point(label, x, Quantity::F, PointValue::Certified(eval_f(x, DEFAULT_TERMS)?));
        }
        r.check(Check::new("x1 < x0", x1.clone(), Relation::Lt, x0.clone()));
        r.check(Check::new("x0 < x2", x0.clone(), Relation::Lt, x2.clone()));
        r.check(Check::new("|x1 - x0| < delta", (&x1 - x0).abs(), Relation::Lt, delta.clone()));
        r.check(Check::new("|x2 - x0| < delta", (&x2 - x0).abs(), Relation::Lt, delta.clone()));
        r.check(Check::new("f_(k+1)(x1) = f_(k+1)(x0)", fk_unchecked(&x1, k + 1), Relation::Eq, v.clone()));
        r.check(Check::new("f_(k+1)(x2) = f_(k+1)(x0)", fk_unchecked(&x2, k + 1), Relation::Eq, v.clone()));
        r.check(Check::new("(S_k(x1) - S_k(x0))(S_k(x2) - S_k(x0)) < 0", product, Relation::Lt, Rat::zero()));
        return Ok(r.conclude());
    }
    Err(Error::DepthExhausted(x0.clone(), depth))
}

/// `x0 = 0`: `f` is odd and `f(2^-m) = m·2^-m > 0`, so `±2^-m` straddle `f(0) = 0`.
fn origin_witness(base: WitnessReport, delta: &Rat) -> WitnessReport {
    let mut m = 3i64;
    while rat::pow2(-m) >= *delta {
        m += 1;
    }
    let x = rat::pow2(-m);
    let k = m as usize;
    let fx = exact_f(&x, k);
    let fm = exact_f(&-x.clone(), k);
    let mut r = base.input("k", k).input("case", "origin");
    r.point("x0", &Rat::zero(), Quantity::F, PointValue::Exact(Rat::zero()));
    r.point("x1", &-x.clone(), Quantity::F, PointValue::Exact(fm.clone()));
    r.point("x2", &x, Quantity::F, PointValue::Exact(fx.clone()));
    r.check(Check::new("|x1 - x0| < delta", x.clone(), Relation::Lt, delta.clone()));
    r.check(Check::new("|x2 - x0| < delta", x.clone(), Relation::Lt, delta.clone()));
    r.check(Check::new("(f(x1) - f(x0))(f(x2) - f(x0)) < 0", fm * fx, Relation::Lt, Rat::zero()));
    r.conclude()
}

/// Locates an exceptional point strictly inside `(a, b)` by walking down the
/// cells containing the midpoint until one has an endpoint inside.
fn exceptional_point_in(a: &Rat, b: &Rat) -> Result<(Rat, usize)> {
    let mid = (a + b) / rat::int(2);
    // cell lengths are at most 2^(1-l), so this terminates once 2^(1-l) < b - a
    let mut l = 1usize;
    loop {
        let addrs = locate(&mid, l)?;
        let Some(first) = addrs.first() else {
            return Ok((mid, l));
        };
        let c = cell(first);
        if c.lo > *a {
            return Ok((c.lo, l + 1));
        }
        if c.hi < *b {
            return Ok((c.hi, l + 1));
        }
        l += 1;
        if rat::pow2(1 - l as i64) < (b - a) / rat::int(4) {
            return Err(Error::SearchBudgetExhausted(format!("no exceptional point found in ({a}, {b})")));
        }
    }
}

/// Witnesses `x1 < x2 < x3` in `(a, b)` with exact values such that
/// `f(x2) - f(x1)` and `f(x3) - f(x2)` have strictly opposite signs.
pub fn non_monotone_witness(a: &Rat, b: &Rat, depth: usize) -> Result<WitnessReport> {
    check_domain(a)?;
    check_domain(b)?;
    if a >= b {
        return Err(Error::Precondition(format!("need a < b, got ({a}, {b})")));
    }
    let (x0, level_hint) = exceptional_point_in(a, b)?;
    let delta = (&x0 - a).min(b - &x0);
    let osc = find_oscillation(&x0, &delta, depth.max(level_hint + 1))?;
    let mut triple = [
        (x0.clone(), osc.f0.clone()),
        (osc.above.clone(), osc.f_above.clone()),
        (osc.below.clone(), osc.f_below.clone()),
    ];
    triple.sort_by(|p, q| p.0.cmp(&q.0));
    let [(x1, f1), (x2, f2), (x3, f3)] = triple;

    let mut r = WitnessReport::new(WitnessKind::NonMonotone)
        .input("a", a)
        .input("b", b)
        .input("depth", depth)
        .input("center", &x0)
        .input("k", osc.level);
    for (label, x, v) in [("x1", &x1, &f1), ("x2", &x2, &f2), ("x3", &x3, &f3)] {
        r.point(label, x, Quantity::F, PointValue::Exact(v.clone()));
    }
    r.check(Check::new("a < x1", a.clone(), Relation::Lt, x1.clone()));
    r.check(Check::new("x1 < x2", x1, Relation::Lt, x2.clone()));
    r.check(Check::new("x2 < x3", x2, Relation::Lt, x3.clone()));
    r.check(Check::new("x3 < b", x3, Relation::Lt, b.clone()));
    let product = (&f2 - &f1) * (&f3 - &f2);
    r.check(Check::new("(f(x2) - f(x1))(f(x3) - f(x2)) < 0", product, Relation::Lt, Rat::zero()));
    Ok(r.conclude())
}

/// Certifies `f(x) > 0` for `x ∈ (0, 1/4)` from the dyadic band
/// `x ∈ [2^-(k+1), 2^-k)`: `f_l(x) = 2^l·x` for `l ≤ k`, so
/// `S_k(x) ≥ k/2^(k+1)` and `f(x) ≥ S_k(x) - 2^-k`.
pub fn local_min_check(x: &Rat) -> Result<WitnessReport> {
    if !(x.is_positive() && *x < rat::ratio(1, 4)) {
        return Err(Error::Precondition(format!("{x} is not in (0, 1/4)")));
    }
    let mut k = 2usize;
    while *x < rat::pow2(-(k as i64) - 1) {
        k += 1;
    }
    let mut r = WitnessReport::new(WitnessKind::LocalMin).input("x", x).input("k", k);
    for l in 1..=k {
        r.check(Check::new(
            format!("f_{l}(x) = 2^{l} x"),
            fk_unchecked(x, l),
            Relation::Eq,
            rat::pow2(l as i64) * x,
        ));
    }
    let s = partial_sum_unchecked(x, k);
    r.point("x", x, Quantity::PartialSum(k), PointValue::Exact(s.clone()));
    let bound = rat::int(k as i64) * rat::pow2(-(k as i64) - 1);
    let tail = rat::pow2(-(k as i64));
    let at_band_edge = *x == rat::pow2(-(k as i64) - 1);
    if !at_band_edge {
        r.check(Check::new("S_k(x) > k/2^(k+1)", s.clone(), Relation::Gt, bound));
        r.check(Check::new("S_k(x) - 2^-k > 0", &s - &tail, Relation::Gt, Rat::zero()));
    } else {
        // x = 2^-(k+1): both bounds hold with equality, but the orbit
        // reaches 1 at step k+1 and f(x) = S_(k+1)(x) exactly
        r.check(Check::new("S_k(x) >= k/2^(k+1)", s.clone(), Relation::Ge, bound));
        let fx = eval_f(x, k + 1)?;
        r.check(Check::zero_count("orbit absorbed by step k+1", usize::from(!fx.is_exact())));
        r.point("x", x, Quantity::F, PointValue::Exact(fx.center.clone()));
        r.check(Check::new("f(x) > 0", fx.center, Relation::Gt, Rat::zero()));
    }
    Ok(r.conclude())
}

/// Parent intervals of the level-`k` family: level-`(k-1)` cells, or the
/// whole of `[-1, 1]` for `k = 1`.
fn parents(k: usize, budget: u64) -> Vec<(Rat, Rat, Vec<Cell>)> {
    if k == 1 {
        return vec![(-Rat::one(), Rat::one(), cells_at_level(1, budget))];
    }
    cells_at_level(k - 1, budget)
        .into_iter()
        .map(|p| {
            let kids = cells::children_of(&p, budget);
            (p.lo, p.hi, kids)
        })
        .collect()
}

/// Runs the structural invariants of the level-`k` cell family truncated
/// at `|j| ≤ index_budget`: affinity, onto `[-1, 1]`, tiling, location,
/// endpoint-set equality away from accumulation points, length bound,
/// exact total length, agreement with the rescaled family (k ≤ 3,
/// budget ≤ 6) and vanishing on enumerated exceptional points.
pub fn structure_check(k: usize, index_budget: u64) -> WitnessReport {
    assert!(k >= 1);
    let mut r = WitnessReport::new(WitnessKind::Structure)
        .input("k", k)
        .input("index_budget", index_budget);
    let families = parents(k, index_budget);
    let cells: Vec<&Cell> = families.iter().flat_map(|(_, _, kids)| kids.iter()).collect();
    let one = Rat::one();

    let mut affinity = 0;
    let mut onto = 0;
    for c in &cells {
        let len = c.len();
        for frac in [rat::ratio(1, 4), rat::ratio(1, 2), rat::ratio(5, 7)] {
            let p = &c.lo + &len * frac;
            if fk_unchecked(&p, k) != c.map().apply(&p) {
                affinity += 1;
            }
        }
        let (a, b) = (fk_unchecked(&c.lo, k), fk_unchecked(&c.hi, k));
        if !(a.abs() == one && b == -a.clone() && c.map().apply(&c.lo) == a && c.map().apply(&c.hi) == b) {
            onto += 1;
        }
        if !fk_unchecked(&c.midpoint(), k).is_zero() {
            onto += 1;
        }
    }
    r.check(Check::zero_count("affine: f_k matches slope·x + intercept at 3 interior points", affinity));
    r.check(Check::zero_count("onto: f_k(endpoints) = ∓1, f_k(midpoint) = 0", onto));

    let mut tiling = 0;
    for (plo, phi, kids) in &families {
        for w in kids.windows(2) {
            if w[0].hi > w[1].lo {
                tiling += 1;
            }
        }
        tiling += kids.iter().filter(|c| !(c.lo < c.hi && *plo <= c.lo && c.hi <= *phi)).count();
    }
    for w in cells.windows(2) {
        if w[0].hi > w[1].lo {
            tiling += 1;
        }
    }
    r.check(Check::zero_count("tiling: ordered, disjoint up to endpoints, inside parent", tiling));

    let mut located = 0;
    for c in &cells {
        let at_mid = locate(&c.midpoint(), k).unwrap_or_default();
        let at_lo = locate(&c.lo, k).unwrap_or_default();
        if at_mid != vec![c.address.clone()] || !at_lo.contains(&c.address) {
            located += 1;
        }
    }
    r.check(Check::zero_count("locate: cells contain their own points", located));

    let lefts: BTreeSet<&Rat> = cells.iter().map(|c| &c.lo).collect();
    let rights: BTreeSet<&Rat> = cells.iter().map(|c| &c.hi).collect();
    // the outermost endpoints of each truncated family border the gaps
    // accumulating at the parent's endpoints
    let margin: BTreeSet<&Rat> = families
        .iter()
        .filter_map(|(_, _, kids)| Some([&kids.first()?.lo, &kids.last()?.hi]))
        .flatten()
        .collect();
    let unmatched = lefts.symmetric_difference(&rights).filter(|x| !margin.contains(*x)).count();
    r.check(Check::zero_count("endpoints: left set = right set away from accumulation margins", unmatched));

    let max_len = rat::pow2(1 - k as i64);
    let long = cells.iter().filter(|c| c.len() > max_len).count();
    r.check(Check::zero_count("length: hi - lo <= 2^(1-k)", long));

    let total: Rat = cells.iter().map(|c| c.len()).sum();
    let covered = Rat::one() - rat::ratio(1, index_budget as i64 + 2);
    let expected = rat::int(2) * num_traits::pow(covered, k);
    r.check(Check::new("total length = 2(1 - 1/(budget+2))^k", total, Relation::Eq, expected));

    if k <= 3 && index_budget <= 6 {
        let pre: BTreeSet<(Rat, Rat)> = cells.iter().map(|c| (c.lo.clone(), c.hi.clone())).collect();
        let resc = cells::rescaled_family(k, index_budget);
        let mismatched = pre.symmetric_difference(&resc).count();
        r.check(Check::zero_count("preimage family = rescaled family", mismatched));
    }

    let window = (-Rat::one(), Rat::one());
    let mut e_bad = 0;
    for p in cells::e_points(k + 1, (&window.0, &window.1), index_budget) {
        let vanishes = (p.first_level..=k + 1).all(|l| fk_unchecked(&p.x, l).is_zero());
        if !vanishes || e_level(&p.x, k + 1).ok().flatten() != Some(p.first_level) {
            e_bad += 1;
        }
    }
    r.check(Check::zero_count("exceptional points: f_l = 0 from their first level on", e_bad));
    r.conclude()
}

/// Checks `F_k(x) ∈ enclose_integral(k, x, budget)` for every `x`.
pub fn integral_crosscheck(k: usize, xs: &[Rat], index_budget: u64) -> Result<WitnessReport> {
    let mut r = WitnessReport::new(WitnessKind::IntegralCrosscheck)
        .input("k", k)
        .input("index_budget", index_budget)
        .input("points", xs.len());
    for (i, x) in xs.iter().enumerate() {
        let v = antiderivative_term(x, k)?;
        let e = enclose_integral(k, x, index_budget)?;
        r.point(&format!("x{i}"), x, Quantity::Antiderivative(k), PointValue::Exact(v.clone()));
        r.check(Check::new(format!("lower({x}) <= F_k({x})"), e.lower, Relation::Le, v.clone()));
        r.check(Check::new(format!("F_k({x}) <= upper({x})"), v, Relation::Le, e.upper));
    }
    Ok(r.conclude())
}
