//! Seeded verification suites that batch the witness searches into
//! [`SuiteReport`]s.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antiderivative::{antiderivative_term, darboux_gap, enclose_integral, quotient_bound_check};
use crate::cells::{cell, e_points, Address, EPoint};
use crate::construction::DEFAULT_TERMS;
use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::report::{Check, PointValue, Quantity, Relation, SuiteReport, WitnessKind, WitnessReport};
use crate::verifier::{
    integral_crosscheck, local_min_check, non_extremum_witness, non_monotone_witness, oscillation_witness,
    structure_check, DEFAULT_DEPTH,
};

pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_INDEX_BUDGET: u64 = 50;

/// Largest denominator of randomly sampled rationals.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Structure,
    Oscillation,
    NoExtrema,
    NowhereMonotone,
    LocalMin,
    QuotientBound,
    IntegralCrosscheck,
    Darboux,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Structure,
        Suite::Oscillation,
        Suite::NoExtrema,
        Suite::NowhereMonotone,
        Suite::LocalMin,
        Suite::QuotientBound,
        Suite::IntegralCrosscheck,
        Suite::Darboux,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Oscillation => "oscillation",
            Suite::NoExtrema => "no-extrema",
            Suite::NowhereMonotone => "nowhere-monotone",
            Suite::LocalMin => "local-min",
            Suite::QuotientBound => "quotient-bound",
            Suite::IntegralCrosscheck => "integral-crosscheck",
            Suite::Darboux => "darboux",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Parameters shared by all suites. `None` means the suite's own default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub terms: usize,
    pub depth: usize,
    pub index_budget: u64,
    pub level: Option<usize>,
    pub count: Option<usize>,
    pub n_max: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            terms: DEFAULT_TERMS,
            depth: DEFAULT_DEPTH,
            index_budget: DEFAULT_INDEX_BUDGET,
            level: None,
            count: None,
            n_max: 50,
        }
    }
}

/// Uniform rational in the open interval `(lo, hi)` with denominator at most
/// `max_den`. Retries denominators too small to fit a numerator.
pub fn random_rat(rng: &mut impl Rng, lo: &Rat, hi: &Rat, max_den: i64) -> Rat {
    assert!(lo < hi);
    loop {
        let q = rng.gen_range(2..=max_den);
        let qr = rat::int(q);
        let p_lo = rat::floor_int(&(lo * &qr)) + 1;
        let p_hi = rat::ceil_int(&(hi * &qr)) - 1;
        if p_lo > p_hi {
            continue;
        }
        let span = i64::try_from(&p_hi - &p_lo).expect("numerators fit in i64");
        let p = p_lo + rng.gen_range(0..=span);
        return Rat::new(p, q.into());
    }
}

/// Runs `f`, turning search errors into failed reports tagged with `inputs`.
fn attempt(kind: WitnessKind, inputs: &[(&str, String)], f: impl FnOnce() -> Result<WitnessReport>) -> WitnessReport {
    f().unwrap_or_else(|e| {
        inputs
            .iter()
            .fold(WitnessReport::failed(kind, e.to_string()), |r, (k, v)| r.input(k, v))
    })
}

struct Run<'a> {
    cfg: &'a SuiteConfig,
    rng: ChaCha8Rng,
    params: BTreeMap<String, String>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a SuiteConfig, suite: Suite) -> Self {
        // each suite gets its own stream so `all` reproduces the single runs
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(suite as u64);
        Run { cfg, rng, params: BTreeMap::new() }
    }

    fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    fn count(&mut self, default: usize) -> usize {
        let n = self.cfg.count.unwrap_or(default);
        self.param("count", n);
        n
    }

    fn level(&mut self, default: usize) -> usize {
        let k = self.cfg.level.unwrap_or(default).max(1);
        self.param("k", k);
        k
    }
}

/// Runs suite `suite` and collects its cases.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    if suite == Suite::All {
        let mut cases = Vec::new();
        let mut params = BTreeMap::new();
        for s in Suite::ALL {
            let r = run_suite(s, cfg);
            for (k, v) in r.parameters {
                params.insert(format!("{s}.{k}"), v);
            }
            cases.extend(r.cases);
        }
        return SuiteReport::new(suite.name(), cfg.seed, params, cases);
    }
    let mut run = Run::new(cfg, suite);
    let cases = match suite {
        Suite::Structure => structure(&mut run),
        Suite::Oscillation => oscillation(&mut run),
        Suite::NoExtrema => no_extrema(&mut run),
        Suite::NowhereMonotone => nowhere_monotone(&mut run),
        Suite::LocalMin => local_min(&mut run),
        Suite::QuotientBound => quotient_bound(&mut run),
        Suite::IntegralCrosscheck => crosscheck(&mut run),
        Suite::Darboux => darboux(&mut run),
        Suite::All => unreachable!(),
    };
    SuiteReport::new(suite.name(), cfg.seed, run.params, cases)
}

/// Convenience wrapper taking the suite name.
pub fn run_named(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    Ok(run_suite(name.parse()?, cfg))
}

/// Cap on the number of cells a single structure case enumerates.
const STRUCTURE_CELLS: u64 = 20_000;

fn structure(run: &mut Run) -> Vec<WitnessReport> {
    let top = run.level(4);
    let budget = run.cfg.index_budget;
    run.param("index_budget", budget);
    let mut cases = Vec::new();
    for k in 1..=top {
        // largest budget keeping (2b+1)^k cells under the cap
        let mut b = budget;
        while b > 0 && (2 * b + 1).checked_pow(k as u32).is_none_or(|n| n > STRUCTURE_CELLS) {
            b -= 1;
        }
        let mut budgets = vec![b];
        if k <= 3 && b > 6 {
            budgets.push(6);
        }
        cases.extend(budgets.into_iter().map(|b| structure_check(k, b)));
    }
    cases
}

/// Exceptional points of first level `≤ top`: every one at the configured
/// budget while the enumeration stays small, then seeded random cell
/// endpoints at the deeper levels.
pub fn oscillation_targets(top: usize, budget: u64, full_cap: u64, per_level: usize, rng: &mut impl Rng) -> Vec<EPoint> {
    let one = Rat::one();
    let window = (&-one.clone(), &one);
    let mut full = 1;
    while full < top && (2 * budget + 1).checked_pow(full as u32).is_some_and(|n| n <= full_cap) {
        full += 1;
    }
    let mut pts = e_points(full, window, budget);
    let b = budget as i64;
    for level in full + 1..=top {
        for _ in 0..per_level {
            let ids: Vec<i64> = (1..level).map(|_| rng.gen_range(-b..=b)).collect();
            let c = cell(&Address::from_indices(&ids).expect("nonempty address"));
            let x = if rng.gen_bool(0.5) { c.lo } else { c.hi };
            pts.push(EPoint { x, first_level: level });
        }
    }
    pts
}

fn oscillation(run: &mut Run) -> Vec<WitnessReport> {
    let top = run.level(6);
    let per_level = run.count(100);
    let budget = run.cfg.index_budget;
    let depth = run.cfg.depth.max(top + 1);
    let delta = rat::ratio(1, 1000);
    run.param("index_budget", budget);
    run.param("depth", depth);
    run.param("delta", &delta);
    let targets = oscillation_targets(top, budget, 200, per_level, &mut run.rng);
    targets
        .iter()
        .map(|p| {
            let inputs = [("x0", p.x.to_string()), ("delta", delta.to_string())];
            attempt(WitnessKind::Oscillation, &inputs, || {
                let r = oscillation_witness(&p.x, &delta, depth)?;
                Ok(expect_level(r, p.first_level))
            })
        })
        .collect()
}

/// Adds a check that the detected first level matches the enumerated one.
fn expect_level(mut r: WitnessReport, level: usize) -> WitnessReport {
    let found: i64 = r.inputs.get("k").and_then(|k| k.parse().ok()).unwrap_or(-1);
    r.check(Check::new("detected level = enumerated level", rat::int(found), Relation::Eq, rat::int(level as i64)));
    r.conclude()
}

fn no_extrema(run: &mut Run) -> Vec<WitnessReport> {
    let n = run.count(200);
    let depth = run.cfg.depth;
    run.param("depth", depth);
    run.param("max_denominator", MAX_DENOMINATOR);
    let deltas = [rat::ratio(1, 10), rat::ratio(1, 100), rat::ratio(1, 1000)];
    let one = Rat::one();
    (0..n)
        .map(|i| {
            let x0 = random_rat(&mut run.rng, &-one.clone(), &one, MAX_DENOMINATOR);
            let delta = &deltas[i % deltas.len()];
            let inputs = [("x0", x0.to_string()), ("delta", delta.to_string())];
            attempt(WitnessKind::NonExtremum, &inputs, || non_extremum_witness(&x0, delta, depth))
        })
        .collect()
}

fn nowhere_monotone(run: &mut Run) -> Vec<WitnessReport> {
    let n = run.count(100);
    let depth = run.cfg.depth;
    let min_len = rat::ratio(1, 1000);
    run.param("depth", depth);
    run.param("min_length", &min_len);
    let one = Rat::one();
    (0..n)
        .map(|i| {
            let a = random_rat(&mut run.rng, &-one.clone(), &(&one - &min_len), MAX_DENOMINATOR);
            // alternate short intervals with long ones
            let max_len = if i % 2 == 0 { (&min_len * rat::int(2)).min(&one - &a) } else { &one - &a };
            let len = if max_len > min_len {
                random_rat(&mut run.rng, &min_len, &max_len, MAX_DENOMINATOR)
            } else {
                min_len.clone()
            };
            let b = &a + len;
            let inputs = [("a", a.to_string()), ("b", b.to_string())];
            attempt(WitnessKind::NonMonotone, &inputs, || non_monotone_witness(&a, &b, depth))
        })
        .collect()
}

fn local_min(run: &mut Run) -> Vec<WitnessReport> {
    let n = run.count(100);
    run.param("max_denominator", MAX_DENOMINATOR);
    let quarter = rat::ratio(1, 4);
    (0..n)
        .map(|i| {
            // every other sample is drawn from a random dyadic band so small x are covered
            let hi = if i % 2 == 0 { quarter.clone() } else { rat::pow2(-run.rng.gen_range(2..=18)) };
            let x = random_rat(&mut run.rng, &Rat::zero(), &hi, MAX_DENOMINATOR);
            attempt(WitnessKind::LocalMin, &[("x", x.to_string())], || local_min_check(&x))
        })
        .collect()
}

fn quotient_bound(run: &mut Run) -> Vec<WitnessReport> {
    let top = run.level(8);
    let n_max = run.cfg.n_max.max(2);
    run.param("n_max", n_max);
    let one = Rat::one();
    let mut cases = Vec::new();
    for k in 1..=top {
        for n in 2..=n_max {
            let nr = rat::int(n as i64);
            let lo = (&nr + &one).recip() - &one;
            let hi = nr.recip() - &one;
            let mid = (&lo + &hi) / rat::int(2);
            let random = random_rat(&mut run.rng, &lo, &hi, MAX_DENOMINATOR.min(1000 * (n as i64 + 1)));
            for x in [hi, mid, random] {
                let inputs = [("k", k.to_string()), ("n", n.to_string()), ("x", x.to_string())];
                cases.push(attempt(WitnessKind::QuotientBound, &inputs, || quotient_bound_check(k, n, &x)));
            }
        }
    }
    cases
}

/// Smallest budget whose enclosure width bound `4k / (b + 2)` is at most
/// `2^-bits`.
pub fn budget_for_width(k: usize, bits: u32) -> u64 {
    (4 * k as u64) << bits
}

fn crosscheck(run: &mut Run) -> Vec<WitnessReport> {
    let top = run.level(6);
    let count = run.count(20);
    let bits = 12;
    run.param("width_bits", bits);
    let one = Rat::one();
    let mut xs = vec![-one.clone(), Rat::zero(), one.clone()];
    while xs.len() < count {
        xs.push(random_rat(&mut run.rng, &-one.clone(), &one, MAX_DENOMINATOR));
    }
    xs.truncate(count.max(1));
    let mut cases = Vec::new();
    for k in 1..=top {
        let budget = budget_for_width(k, bits);
        let inputs = [("k", k.to_string()), ("index_budget", budget.to_string())];
        cases.push(attempt(WitnessKind::IntegralCrosscheck, &inputs, || {
            let mut r = integral_crosscheck(k, &xs, budget)?;
            let widest = xs
                .iter()
                .map(|x| enclose_integral(k, x, budget).map(|e| e.width()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .unwrap_or_default();
            r.check(Check::new("max enclosure width <= 2^-12", widest, Relation::Le, rat::pow2(-(bits as i64))));
            let f0 = antiderivative_term(&Rat::zero(), k)?;
            r.point("origin", &Rat::zero(), Quantity::Antiderivative(k), PointValue::Exact(f0.clone()));
            r.check(Check::new("F_k(0) = -2^-(k+1)", f0, Relation::Eq, -rat::pow2(-(k as i64) - 1)));
            Ok(r.conclude())
        }));
    }
    cases
}

fn darboux(run: &mut Run) -> Vec<WitnessReport> {
    let terms = run.cfg.terms.min(60);
    let budget = run.cfg.index_budget;
    run.param("K", terms);
    run.param("index_budget", budget);
    let e = darboux_gap(terms, budget);
    let coarse = darboux_gap(terms, budget / 2);
    let mut r = WitnessReport::new(WitnessKind::Darboux)
        .input("K", terms)
        .input("index_budget", budget)
        .input("width", e.width());
    r.check(Check::new("lower <= 0", e.lower.clone(), Relation::Le, Rat::zero()));
    r.check(Check::new("0 <= upper", Rat::zero(), Relation::Le, e.upper.clone()));
    r.check(Check::new("width(budget) <= width(budget/2)", e.width(), Relation::Le, coarse.width()));
    r.check(Check::new("width > 0", e.width(), Relation::Gt, Rat::zero()));
    vec![r.conclude()]
}
