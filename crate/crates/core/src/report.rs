//! Machine-checkable evidence objects.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::construction::Certified;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Oscillation,
    NonExtremum,
    NonMonotone,
    LocalMin,
    QuotientBound,
    Structure,
    IntegralCrosscheck,
    Darboux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// One exact inequality `lhs rel rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    #[serde(with = "rat::serde_str")]
    pub lhs: Rat,
    pub rel: Relation,
    #[serde(with = "rat::serde_str")]
    pub rhs: Rat,
    pub holds: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, lhs: Rat, rel: Relation, rhs: Rat) -> Self {
        let holds = rel.holds(&lhs, &rhs);
        Check { label: label.into(), lhs, rel, rhs, holds }
    }

    /// `count = 0`, used for aggregated structural sub-checks.
    pub fn zero_count(label: impl Into<String>, count: usize) -> Self {
        Check::new(label, rat::int(count as i64), Relation::Eq, rat::int(0))
    }

    /// Re-evaluates the inequality, ignoring the stored flag.
    pub fn recheck(&self) -> bool {
        self.rel.holds(&self.lhs, &self.rhs)
    }
}

/// Which quantity a recorded point value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// The series `f`.
    F,
    /// Partial sum `S_k`.
    PartialSum(usize),
    /// Iterate `f_k`.
    Iterate(usize),
    /// Antiderivative term `F_k`.
    Antiderivative(usize),
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::F => s.serialize_str("f"),
            Quantity::PartialSum(k) => s.collect_str(&format_args!("S_{k}")),
            Quantity::Iterate(k) => s.collect_str(&format_args!("f_{k}")),
            Quantity::Antiderivative(k) => s.collect_str(&format_args!("F_{k}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PointValue {
    Exact(#[serde(with = "rat::serde_str")] Rat),
    Certified(Certified),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Point {
    pub label: String,
    #[serde(with = "rat::serde_str")]
    pub x: Rat,
    pub quantity: Quantity,
    pub value: PointValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub inputs: BTreeMap<String, String>,
    pub points: Vec<Point>,
    pub verdict: Verdict,
    pub certificate: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl WitnessReport {
    pub fn new(kind: WitnessKind) -> Self {
        WitnessReport {
            kind,
            inputs: BTreeMap::new(),
            points: Vec::new(),
            verdict: Verdict::Fail,
            certificate: Vec::new(),
            diagnostic: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn point(&mut self, label: &str, x: &Rat, quantity: Quantity, value: PointValue) {
        self.points.push(Point { label: label.to_string(), x: x.clone(), quantity, value });
    }

    pub fn check(&mut self, check: Check) {
        self.certificate.push(check);
    }

    /// Sets the verdict from the certificate: pass iff it is nonempty and
    /// every inequality holds.
    pub fn conclude(mut self) -> Self {
        self.verdict = if !self.certificate.is_empty() && self.certificate.iter().all(|c| c.holds) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    pub fn failed(kind: WitnessKind, diagnostic: impl Into<String>) -> Self {
        let mut r = WitnessReport::new(kind);
        r.diagnostic = Some(diagnostic.into());
        r
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Recomputes every inequality and every exactly recorded point value
    /// from scratch and confirms the stored verdict.
    pub fn recheck(&self) -> bool {
        let checks_ok = self.certificate.iter().all(|c| c.recheck() == c.holds);
        let expect = !self.certificate.is_empty() && self.certificate.iter().all(Check::recheck);
        let points_ok = self.points.iter().all(|p| {
            let PointValue::Exact(v) = &p.value else {
                return true;
            };
            let fresh = match p.quantity {
                Quantity::F => crate::construction::eval_f(&p.x, 200)
                    .ok()
                    .filter(Certified::is_exact)
                    .map(|c| c.center),
                Quantity::PartialSum(k) => crate::construction::partial_sum(&p.x, k).ok(),
                Quantity::Iterate(k) => crate::construction::fk(&p.x, k).ok(),
                Quantity::Antiderivative(k) => crate::antiderivative::antiderivative_term(&p.x, k).ok(),
            };
            fresh.as_ref() == Some(v)
        });
        checks_ok && points_ok && expect == self.passed()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

/// Output of one verification suite run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub cases: Vec<WitnessReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, parameters: BTreeMap<String, String>, cases: Vec<WitnessReport>) -> Self {
        let pass = cases.iter().filter(|c| c.passed()).count();
        let fail = cases.len() - pass;
        SuiteReport { suite: suite.to_string(), seed, parameters, cases, summary: Summary { pass, fail } }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    #[test]
    fn verdict_follows_certificate() {
        let mut r = WitnessReport::new(WitnessKind::LocalMin).input("x", ratio(1, 8));
        r.check(Check::new("a", ratio(1, 3), Relation::Gt, int(0)));
        let r = r.conclude();
        assert!(r.passed() && r.recheck());

        let mut r = WitnessReport::new(WitnessKind::LocalMin);
        r.check(Check::new("a", int(0), Relation::Gt, int(0)));
        let r = r.conclude();
        assert!(!r.passed() && r.recheck());

        assert!(!WitnessReport::new(WitnessKind::Structure).conclude().passed());
    }

    #[test]
    fn tampered_report_fails_recheck() {
        let mut r = WitnessReport::new(WitnessKind::Oscillation);
        r.point("x0", &ratio(1, 4), Quantity::F, PointValue::Exact(ratio(1, 2)));
        r.check(Check::new("a", int(1), Relation::Gt, int(0)));
        let mut r = r.conclude();
        assert!(r.recheck());
        r.points[0].value = PointValue::Exact(ratio(1, 3));
        assert!(!r.recheck());
    }

    #[test]
    fn serializes_rationals_as_strings() {
        let mut r = WitnessReport::new(WitnessKind::QuotientBound).input("n", 2);
        r.check(Check::new("q", ratio(1, 10), Relation::Le, ratio(1, 2)));
        let json = serde_json::to_value(r.conclude()).unwrap();
        assert_eq!(json["certificate"][0]["lhs"], "1/10");
        assert_eq!(json["certificate"][0]["rel"], "<=");
        assert_eq!(json["verdict"], "pass");
        assert_eq!(json["kind"], "quotient_bound");
    }
}
