//! The iterates `f_k`, their partial sums and certified values of the series
//! `f = Σ_{k≥1} f_k / 2^k` and of `g(x) = f(x)·sign(x)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::rat::{self, check_domain, Rat};

/// Number of series terms used when the caller does not choose one.
pub const DEFAULT_TERMS: usize = 30;

/// `f_1` on `[-1, 1]`; the argument must already be in range.
pub(crate) fn f1_unchecked(x: &Rat) -> Rat {
    if x.is_negative() {
        return -f1_unchecked(&-x);
    }
    if x.is_one() {
        return Rat::zero();
    }
    let half = rat::half();
    if *x < half {
        return x * rat::int(2);
    }
    // x ∈ [1 - 1/n, 1 - 1/(n+1)) with n = floor(1 / (1 - x)) ≥ 2
    let n = rat::floor_int(&(Rat::one() - x).recip());
    let nr = Rat::from_integer(n.clone());
    let left = Rat::one() - nr.recip();
    let t = (x - left) * Rat::from_integer(&n * (&n + BigInt::one()));
    let v = Rat::one() - t * rat::int(2);
    if n.is_even() {
        v
    } else {
        -v
    }
}

/// Exact value of `f_1(x)`.
pub fn f1(x: &Rat) -> Result<Rat> {
    check_domain(x)?;
    Ok(f1_unchecked(x))
}

/// Point where an orbit gets absorbed; every later iterate is `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Absorber {
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    PlusOne,
}

impl Absorber {
    fn of(y: &Rat) -> Option<Absorber> {
        if y.is_zero() {
            Some(Absorber::Zero)
        } else if y.is_one() {
            Some(Absorber::PlusOne)
        } else if *y == -Rat::one() {
            Some(Absorber::MinusOne)
        } else {
            None
        }
    }

    pub fn value(self) -> Rat {
        match self {
            Absorber::MinusOne => -Rat::one(),
            Absorber::Zero => Rat::zero(),
            Absorber::PlusOne => Rat::one(),
        }
    }

    pub fn is_unit(self) -> bool {
        self != Absorber::Zero
    }
}

/// The iterates `y_l = f_l(start)` up to the first absorption or the depth limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub start: Rat,
    pub values: Vec<Rat>,
    pub absorbed_step: Option<usize>,
    pub absorber: Option<Absorber>,
    pub depth_limit: usize,
}

impl OrbitInfo {
    /// `f_l(start)` for any `l ≥ 1`, or `None` if the orbit was cut off
    /// before step `l`.
    pub fn iterate(&self, l: usize) -> Option<Rat> {
        assert!(l >= 1);
        match self.absorbed_step {
            Some(m) if l > m => Some(Rat::zero()),
            _ => self.values.get(l - 1).cloned(),
        }
    }

    pub fn is_absorbed(&self) -> bool {
        self.absorbed_step.is_some()
    }
}

pub fn orbit(x: &Rat, depth: usize) -> Result<OrbitInfo> {
    check_domain(x)?;
    let mut values = Vec::new();
    let mut y = x.clone();
    let mut absorbed = None;
    for step in 1..=depth {
        y = f1_unchecked(&y);
        let hit = Absorber::of(&y);
        values.push(y.clone());
        if let Some(a) = hit {
            absorbed = Some((step, a));
            break;
        }
    }
    Ok(OrbitInfo {
        start: x.clone(),
        values,
        absorbed_step: absorbed.map(|(m, _)| m),
        absorber: absorbed.map(|(_, a)| a),
        depth_limit: depth,
    })
}

pub(crate) fn fk_unchecked(x: &Rat, k: usize) -> Rat {
    let mut y = x.clone();
    for _ in 0..k {
        if y.is_zero() {
            break;
        }
        y = f1_unchecked(&y);
    }
    y
}

/// Exact `f_k(x)`, the `k`-fold iterate of `f_1`. `k = 0` gives the identity.
pub fn fk(x: &Rat, k: usize) -> Result<Rat> {
    check_domain(x)?;
    Ok(fk_unchecked(x, k))
}

pub(crate) fn partial_sum_unchecked(x: &Rat, terms: usize) -> Rat {
    let mut y = x.clone();
    let mut sum = Rat::zero();
    let mut w = rat::half();
    for _ in 0..terms {
        y = f1_unchecked(&y);
        if y.is_zero() {
            break;
        }
        sum += &y * &w;
        w /= rat::int(2);
    }
    sum
}

/// Exact `S_K(x) = Σ_{k=1..K} f_k(x) / 2^k`.
pub fn partial_sum(x: &Rat, terms: usize) -> Result<Rat> {
    check_domain(x)?;
    Ok(partial_sum_unchecked(x, terms))
}

/// A real number known to lie in `[center - radius, center + radius]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certified {
    #[serde(with = "rat::serde_str")]
    pub center: Rat,
    #[serde(with = "rat::serde_str")]
    pub radius: Rat,
}

impl Certified {
    pub fn exact(center: Rat) -> Self {
        Certified { center, radius: Rat::zero() }
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn lower(&self) -> Rat {
        &self.center - &self.radius
    }

    pub fn upper(&self) -> Rat {
        &self.center + &self.radius
    }

    pub fn contains(&self, v: &Rat) -> bool {
        (v - &self.center).abs() <= self.radius
    }

    pub fn negate(self) -> Self {
        Certified { center: -self.center, radius: self.radius }
    }
}

/// Certified `f(x)` from `terms` series terms. Absorbed orbits make the
/// series finite and the result exact; otherwise the tail is bounded by
/// `2^-terms`.
pub fn eval_f(x: &Rat, terms: usize) -> Result<Certified> {
    let orb = orbit(x, terms)?;
    let mut center = Rat::zero();
    let mut w = rat::half();
    for y in &orb.values {
        center += y * &w;
        w /= rat::int(2);
    }
    Ok(if orb.is_absorbed() {
        Certified::exact(center)
    } else {
        Certified { center, radius: rat::pow2(-(terms as i64)) }
    })
}

/// Certified `g(x) = f(x)·sign(x)`.
pub fn eval_g(x: &Rat, terms: usize) -> Result<Certified> {
    let v = eval_f(x, terms)?;
    Ok(match rat::sign(x) {
        0 => Certified::exact(Rat::zero()),
        1 => v,
        _ => v.negate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    /// Independent f_1: scan n = 1, 2, ... for the half-open band
    /// [1 - 1/n, 1 - 1/(n+1)) containing |x| and use the t-parametrization.
    fn f1_by_scan(x: &Rat) -> Rat {
        if x.is_negative() {
            return -f1_by_scan(&-x);
        }
        if x.is_one() {
            return Rat::zero();
        }
        let mut n = 1i64;
        loop {
            let a = int(1) - ratio(1, n);
            let b = int(1) - ratio(1, n + 1);
            if a <= *x && *x < b {
                let t = (x - &a) / (&b - &a);
                return if n == 1 {
                    t
                } else if n % 2 == 0 {
                    int(1) - t * int(2)
                } else {
                    t * int(2) - int(1)
                };
            }
            n += 1;
        }
    }

    #[test]
    fn f1_spot_values() {
        assert_eq!(f1(&ratio(1, 2)).unwrap(), int(1));
        assert_eq!(f1(&int(0)).unwrap(), int(0));
        assert_eq!(f1(&int(1)).unwrap(), int(0));
        assert_eq!(f1(&int(-1)).unwrap(), int(0));
        assert_eq!(f1(&ratio(7, 10)).unwrap(), ratio(-1, 5));
        assert_eq!(f1(&ratio(5, 6)).unwrap(), int(1));
        for x in [ratio(7, 10), ratio(5, 6), ratio(-13, 17), ratio(999, 1000), ratio(1, 3)] {
            assert_eq!(f1(&x).unwrap(), f1_by_scan(&x), "{x}");
        }
    }

    #[test]
    fn f1_rejects_out_of_range() {
        assert!(f1(&ratio(3, 2)).is_err());
        assert!(fk(&ratio(-11, 10), 2).is_err());
        assert!(eval_f(&int(2), 5).is_err());
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&ratio(1, 4), 10).unwrap();
        assert_eq!(o.values, vec![ratio(1, 2), int(1)]);
        assert_eq!(o.absorbed_step, Some(2));
        assert_eq!(o.absorber, Some(Absorber::PlusOne));

        let o = orbit(&int(0), 10).unwrap();
        assert_eq!(o.absorbed_step, Some(1));
        assert_eq!(o.absorber, Some(Absorber::Zero));

        let o = orbit(&ratio(7, 10), 3).unwrap();
        assert_eq!(o.values, vec![ratio(-1, 5), ratio(-2, 5), ratio(-4, 5)]);
        assert!(!o.is_absorbed());
        assert_eq!(o.iterate(2), Some(ratio(-2, 5)));
        assert_eq!(o.iterate(4), None);
    }

    #[test]
    fn iterates_and_partial_sums() {
        assert_eq!(fk(&ratio(1, 4), 2).unwrap(), int(1));
        assert_eq!(fk(&ratio(1, 4), 3).unwrap(), int(0));
        assert_eq!(fk(&ratio(1, 4), 0).unwrap(), ratio(1, 4));
        for k in 0..20 {
            assert_eq!(fk(&int(0), k).unwrap(), int(0));
            assert_eq!(partial_sum(&int(0), k + 1).unwrap(), int(0));
        }
        assert_eq!(partial_sum(&ratio(1, 4), 2).unwrap(), ratio(1, 2));
        assert_eq!(partial_sum(&ratio(1, 2), 1).unwrap(), ratio(1, 2));
    }

    #[test]
    fn certified_values() {
        assert_eq!(eval_f(&ratio(1, 4), 30).unwrap(), Certified::exact(ratio(1, 2)));
        assert_eq!(eval_f(&int(0), 30).unwrap(), Certified::exact(int(0)));
        // 7/10 absorbs at step 4 (-1/5, -2/5, -4/5, 1), so its value is exact
        assert_eq!(eval_f(&ratio(7, 10), 20).unwrap(), Certified::exact(partial_sum(&ratio(7, 10), 4).unwrap()));
        // 1/7 cycles through 2/7, 4/7 and never absorbs
        let v = eval_f(&ratio(1, 7), 20).unwrap();
        assert_eq!(v.radius, rat::pow2(-20));
        assert_eq!(v.center, partial_sum(&ratio(1, 7), 20).unwrap());

        assert_eq!(eval_g(&ratio(-1, 4), 30).unwrap(), Certified::exact(ratio(1, 2)));
        assert_eq!(eval_g(&ratio(1, 4), 30).unwrap(), Certified::exact(ratio(1, 2)));
        assert_eq!(eval_g(&int(0), 30).unwrap(), Certified::exact(int(0)));
    }
}
