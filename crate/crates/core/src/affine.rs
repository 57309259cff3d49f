//! Exact affine maps `t ↦ slope·t + intercept`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Affine {
    #[serde(with = "rat::serde_str")]
    pub slope: Rat,
    #[serde(with = "rat::serde_str")]
    pub intercept: Rat,
}

impl Affine {
    pub fn new(slope: Rat, intercept: Rat) -> Self {
        Affine { slope, intercept }
    }

    pub fn identity() -> Self {
        Affine::new(Rat::one(), Rat::zero())
    }

    /// The unique affine map sending `x0 ↦ y0` and `x1 ↦ y1`.
    pub fn through(x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Affine::new(slope, intercept)
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }

    /// `self ∘ inner`, i.e. `t ↦ self(inner(t))`.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine::new(
            &self.slope * &inner.slope,
            &self.slope * &inner.intercept + &self.intercept,
        )
    }

    /// Inverse map; the slope must be nonzero.
    pub fn inverse(&self) -> Affine {
        let slope = self.slope.recip();
        let intercept = -(&self.intercept * &slope);
        Affine::new(slope, intercept)
    }

    /// Image of `[lo, hi]`, returned in increasing order.
    pub fn image(&self, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
        let a = self.apply(lo);
        let b = self.apply(hi);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Exact integral of the map over `[a, b]` (trapezoid rule, exact for
    /// affine integrands).
    pub fn integral(&self, a: &Rat, b: &Rat) -> Rat {
        (self.apply(a) + self.apply(b)) * (b - a) / rat::int(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    #[test]
    fn compose_and_invert() {
        let f = Affine::new(int(-12), int(7));
        let g = Affine::new(int(2), int(0));
        assert_eq!(f.after(&g).apply(&ratio(1, 4)), int(1));
        assert_eq!(f.inverse().after(&f), Affine::identity());
        assert_eq!(f.image(&ratio(1, 2), &ratio(2, 3)), (int(-1), int(1)));
    }

    #[test]
    fn integral_of_affine_piece() {
        let f = Affine::new(int(2), int(0));
        assert_eq!(f.integral(&ratio(-1, 2), &int(0)), ratio(-1, 4));
        assert_eq!(f.integral(&ratio(-1, 2), &ratio(1, 2)), int(0));
    }
}
