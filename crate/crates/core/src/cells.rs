//! Maximal linearity cells of the iterates `f_k`.
//!
//! A level-1 cell is one of the closed intervals on which `f_1` is affine and
//! onto `[-1, 1]`. It is named by a signed [`Level1Id`]:
//!
//! * `0` is `[-1/2, 1/2]`,
//! * `j ≥ 1` is `[1 - 1/(j+1), 1 - 1/(j+2)]`,
//! * `j ≤ -1` is the mirror image of `|j|`.
//!
//! The level-`k` cell with address `(j_1, …, j_k)` is the preimage of the cell
//! `(j_2, …, j_k)` under `f_1` restricted to `j_1`. On it `f_k` is affine and
//! maps the cell onto `[-1, 1]`. Points outside every level-`k` cell form the
//! exceptional set `E_k`, where `f_k` vanishes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::affine::Affine;
use crate::error::{Error, Result};
use crate::rat::{self, check_domain, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Level1Id(pub i64);

impl Level1Id {
    /// Endpoints and the affine restriction of `f_1` to this cell.
    pub fn interval(self) -> (Rat, Rat) {
        let j = self.0;
        if j == 0 {
            return (rat::ratio(-1, 2), rat::half());
        }
        let m = j.unsigned_abs() as i64;
        let (lo, hi) = (
            rat::int(1) - rat::ratio(1, m + 1),
            rat::int(1) - rat::ratio(1, m + 2),
        );
        if j > 0 {
            (lo, hi)
        } else {
            (-hi, -lo)
        }
    }

    pub fn affine(self) -> Affine {
        let j = self.0;
        if j == 0 {
            return Affine::new(rat::int(2), Rat::zero());
        }
        // n = |j| + 1; f_1(1 - 1/n) = (-1)^n with slope (-1)^(n+1)·2n(n+1)
        let n = BigInt::from(j.unsigned_abs()) + 1;
        let nn1 = Rat::from_integer(&n * (&n + 1u32) * 2u32);
        let even = num_integer::Integer::is_even(&n);
        let slope = if even { -nn1 } else { nn1 };
        let lo = Rat::one() - Rat::from_integer(n).recip();
        let at_lo = if even { Rat::one() } else { -Rat::one() };
        let intercept = at_lo - &slope * &lo;
        if j > 0 {
            Affine::new(slope, intercept)
        } else {
            Affine::new(slope, -intercept)
        }
    }
}

impl fmt::Display for Level1Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sequence of level-1 indices naming one level-`k` cell (`k` = length).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Address(Vec<Level1Id>);

impl Address {
    pub fn new(ids: Vec<Level1Id>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::Precondition("address must be nonempty".into()));
        }
        Ok(Address(ids))
    }

    pub fn from_indices(ids: &[i64]) -> Result<Self> {
        Address::new(ids.iter().copied().map(Level1Id).collect())
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn ids(&self) -> &[Level1Id] {
        &self.0
    }

    pub fn child(&self, j: Level1Id) -> Address {
        let mut ids = self.0.clone();
        ids.push(j);
        Address(ids)
    }

    /// Address of the enclosing level-`level` cell.
    pub fn truncated(&self, level: usize) -> Address {
        Address(self.0[..level].to_vec())
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

/// Closed interval `[lo, hi]` together with the affine form of `f_k` on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub address: Address,
    #[serde(with = "rat::serde_str")]
    pub lo: Rat,
    #[serde(with = "rat::serde_str")]
    pub hi: Rat,
    #[serde(with = "rat::serde_str")]
    pub slope: Rat,
    #[serde(with = "rat::serde_str")]
    pub intercept: Rat,
}

impl Cell {
    pub fn level(&self) -> usize {
        self.address.level()
    }

    pub fn map(&self) -> Affine {
        Affine::new(self.slope.clone(), self.intercept.clone())
    }

    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat::int(2)
    }

    /// Sub-cell `address + j`: preimage of `A_{1,j}` under `f_k` on this cell.
    pub fn child(&self, j: Level1Id) -> Cell {
        let (a, b) = j.interval();
        let (lo, hi) = self.map().inverse().image(&a, &b);
        let f = j.affine().after(&self.map());
        Cell {
            address: self.address.child(j),
            lo,
            hi,
            slope: f.slope,
            intercept: f.intercept,
        }
    }
}

pub fn level1_cell(j: Level1Id) -> Cell {
    let (lo, hi) = j.interval();
    let f = j.affine();
    Cell {
        address: Address(vec![j]),
        lo,
        hi,
        slope: f.slope,
        intercept: f.intercept,
    }
}

/// Affine map `h(x) = (hi - lo)(x + 1)/2 + lo` sending `[-1, 1]` onto `[lo, hi]`.
pub fn child_map(lo: &Rat, hi: &Rat) -> Affine {
    let s = (hi - lo) / rat::int(2);
    let c = &s + lo;
    Affine::new(s, c)
}

/// The cell named by `address`, built by pulling the tail cell back through
/// the level-1 restrictions of `f_1`, innermost first.
pub fn cell(address: &Address) -> Cell {
    let ids = address.ids();
    let last = *ids.last().expect("nonempty address");
    let (mut lo, mut hi) = last.interval();
    let mut f = last.affine();
    for j in ids[..ids.len() - 1].iter().rev() {
        let phi = j.affine();
        let (a, b) = phi.inverse().image(&lo, &hi);
        lo = a;
        hi = b;
        f = f.after(&phi);
    }
    Cell {
        address: address.clone(),
        lo,
        hi,
        slope: f.slope,
        intercept: f.intercept,
    }
}

fn id_from(n: BigInt) -> Result<Level1Id> {
    n.to_i64()
        .map(Level1Id)
        .ok_or_else(|| Error::IndexOverflow(n.to_string()))
}

/// Level-1 cells containing `x` for `|x| < 1`, in spatial order (one, or
/// two at a shared endpoint). Empty for `x = ±1`.
pub fn level1_containing(x: &Rat) -> Result<Vec<Level1Id>> {
    check_domain(x)?;
    let ax = x.abs();
    if ax.is_one() {
        return Ok(Vec::new());
    }
    let mut ids = if ax <= rat::half() {
        if ax == rat::half() {
            vec![Level1Id(0), Level1Id(1)]
        } else {
            vec![Level1Id(0)]
        }
    } else {
        let n = rat::floor_int(&(Rat::one() - &ax).recip());
        let j = id_from(&n - 1)?;
        if ax == Rat::one() - Rat::from_integer(n).recip() {
            vec![Level1Id(j.0 - 1), j]
        } else {
            vec![j]
        }
    };
    if x.is_negative() {
        ids = ids.into_iter().rev().map(|j| Level1Id(-j.0)).collect();
    }
    Ok(ids)
}

/// All level-`k` addresses whose cell contains `x`, in address order.
pub fn locate(x: &Rat, k: usize) -> Result<Vec<Address>> {
    check_domain(x)?;
    if k == 0 {
        return Err(Error::Precondition("level must be positive".into()));
    }
    let mut out = Vec::new();
    locate_into(x, k, &mut Vec::new(), &mut out)?;
    out.sort();
    Ok(out)
}

fn locate_into(x: &Rat, k: usize, prefix: &mut Vec<Level1Id>, out: &mut Vec<Address>) -> Result<()> {
    for j in level1_containing(x)? {
        prefix.push(j);
        if k == 1 {
            out.push(Address(prefix.clone()));
        } else {
            let y = j.affine().apply(x);
            locate_into(&y, k - 1, prefix, out)?;
        }
        prefix.pop();
    }
    Ok(())
}

fn child_ids(budget: u64, increasing: bool) -> impl Iterator<Item = Level1Id> {
    let b = budget as i64;
    let ids: Box<dyn Iterator<Item = i64>> = if increasing {
        Box::new(-b..=b)
    } else {
        Box::new((-b..=b).rev())
    };
    ids.map(Level1Id)
}

/// Sub-cells `address + j` with `|j| ≤ index_budget`, in increasing spatial order.
pub fn children(address: &Address, index_budget: u64) -> Vec<Cell> {
    children_of(&cell(address), index_budget)
}

pub fn children_of(parent: &Cell, index_budget: u64) -> Vec<Cell> {
    child_ids(index_budget, parent.slope.is_positive())
        .map(|j| parent.child(j))
        .collect()
}

/// All level-`k` cells whose indices satisfy `|j_i| ≤ index_budget`, in
/// increasing spatial order. There are `(2·budget + 1)^k` of them.
pub fn cells_at_level(k: usize, index_budget: u64) -> Vec<Cell> {
    assert!(k >= 1);
    let mut cells: Vec<Cell> = child_ids(index_budget, true).map(level1_cell).collect();
    for _ in 1..k {
        cells = cells.iter().flat_map(|c| children_of(c, index_budget)).collect();
    }
    cells
}

/// Truncated family built the other way round: level 1 is `{A_{1,j}}` and
/// level `k+1` is `{h_C(A_{1,j})}` over level-`k` intervals `C`, with `h_C`
/// the rescaling [`child_map`]. Returned as sorted endpoint pairs.
pub fn rescaled_family(k: usize, index_budget: u64) -> BTreeSet<(Rat, Rat)> {
    assert!(k >= 1);
    let base: Vec<(Rat, Rat)> = child_ids(index_budget, true).map(|j| j.interval()).collect();
    let mut level = base.clone();
    for _ in 1..k {
        level = level
            .iter()
            .flat_map(|(lo, hi)| {
                let h = child_map(lo, hi);
                base.iter().map(move |(a, b)| h.image(a, b))
            })
            .collect();
    }
    level.into_iter().collect()
}

/// A point of `E_k` tagged with the least level whose exceptional set holds it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EPoint {
    #[serde(with = "rat::serde_str")]
    pub x: Rat,
    pub first_level: usize,
}

/// Truncated enumeration of `E_k ∩ [window.0, window.1]`: `±1` plus every
/// endpoint of an enumerated cell of level below `k`. Sorted by position.
pub fn e_points(k: usize, window: (&Rat, &Rat), index_budget: u64) -> Vec<EPoint> {
    assert!(k >= 1);
    let (wlo, whi) = window;
    let inside = |x: &Rat| wlo <= x && x <= whi;
    let mut pts: Vec<EPoint> = [-Rat::one(), Rat::one()]
        .into_iter()
        .filter(|x| inside(x))
        .map(|x| EPoint { x, first_level: 1 })
        .collect();
    if k >= 2 {
        let mut level: Vec<Cell> = child_ids(index_budget, true).map(level1_cell).collect();
        for l in 1..k {
            if l > 1 {
                level = level.iter().flat_map(|c| children_of(c, index_budget)).collect();
            }
            for c in &level {
                for x in [&c.lo, &c.hi] {
                    if inside(x) {
                        pts.push(EPoint { x: x.clone(), first_level: l + 1 });
                    }
                }
            }
        }
    }
    pts.sort_by(|a, b| a.x.cmp(&b.x));
    pts.dedup_by(|a, b| a.x == b.x);
    pts
}

/// First level `l` with `x ∈ E_l`, if it is at most `depth + 1`.
pub fn e_level(x: &Rat, depth: usize) -> Result<Option<usize>> {
    check_domain(x)?;
    if x.abs().is_one() {
        return Ok(Some(1));
    }
    let orb = crate::construction::orbit(x, depth)?;
    Ok(match (orb.absorbed_step, orb.absorber) {
        (Some(m), Some(a)) if a.is_unit() => Some(m + 1),
        _ => None,
    })
}
