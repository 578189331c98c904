//! One evaluation of an inequality or identity on one instance.

use crate::rational::{format_rational, to_f64, Rational};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

/// Floats are written with 17 significant digits; non-finite values become `null`.
pub fn float_json(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("valid JSON number")
}

pub fn serialize_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    float_json(*x).serialize(s)
}

pub fn serialize_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => float_json(*v).serialize(s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(Rational),
    Real(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => to_f64(r),
            Num::Real(x) => *x,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Num::Exact(r) => format_rational(r),
            Num::Real(x) => format!("{x:.16e}"),
        }
    }
}

impl From<Rational> for Num {
    fn from(r: Rational) -> Self {
        Num::Exact(r)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num::Real(x)
    }
}

/// Exact values serialize as `"p/q"` strings, reals as numbers.
impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Exact(r) => s.serialize_str(&format_rational(r)),
            Num::Real(x) => float_json(*x).serialize(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≤ rhs·(1 + tol)` (or `lhs ≤ rhs` when exact).
    Le,
    /// `lhs = rhs`.
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    HypothesisNotMet,
    /// A metric with no asserted bound.
    Reported,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub check_id: String,
    pub instance: String,
    pub relation: Relation,
    pub lhs: Num,
    pub rhs: Option<Num>,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub notes: String,
}

/// Decides `lhs (rel) rhs` with a relative tolerance on the right side.
pub fn holds(relation: Relation, lhs: &Num, rhs: &Num, tolerance: f64) -> bool {
    match (relation, lhs, rhs) {
        (Relation::Le, Num::Exact(a), Num::Exact(b)) if tolerance == 0.0 => a <= b,
        (Relation::Eq, Num::Exact(a), Num::Exact(b)) => a == b,
        (Relation::Le, a, b) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            a <= b + tolerance * b.abs()
        }
        (Relation::Eq, a, b) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            (a - b).abs() <= tolerance * b.abs()
        }
    }
}

impl CheckRecord {
    /// Asserted `lhs ≤ rhs` (relative tolerance `tol` when floats are involved).
    pub fn le(id: &str, instance: &str, lhs: impl Into<Num>, rhs: impl Into<Num>, tol: f64) -> Self {
        Self::asserted(id, instance, Relation::Le, lhs.into(), rhs.into(), tol)
    }

    pub fn eq(id: &str, instance: &str, lhs: impl Into<Num>, rhs: impl Into<Num>) -> Self {
        Self::asserted(id, instance, Relation::Eq, lhs.into(), rhs.into(), 0.0)
    }

    fn asserted(id: &str, instance: &str, relation: Relation, lhs: Num, rhs: Num, tol: f64) -> Self {
        let outcome = if holds(relation, &lhs, &rhs, tol) { Outcome::Pass } else { Outcome::Fail };
        CheckRecord {
            check_id: id.into(),
            instance: instance.into(),
            relation,
            lhs,
            rhs: Some(rhs),
            tolerance: tol,
            outcome,
            notes: String::new(),
        }
    }

    /// A metric with no assertion.
    pub fn reported(id: &str, instance: &str, value: impl Into<Num>) -> Self {
        CheckRecord {
            check_id: id.into(),
            instance: instance.into(),
            relation: Relation::Le,
            lhs: value.into(),
            rhs: None,
            tolerance: 0.0,
            outcome: Outcome::Reported,
            notes: String::new(),
        }
    }

    /// Hypothesis not met; the values are still recorded when available.
    pub fn not_applicable(id: &str, instance: &str, lhs: impl Into<Num>, rhs: Option<Num>, why: &str) -> Self {
        CheckRecord {
            check_id: id.into(),
            instance: instance.into(),
            relation: Relation::Le,
            lhs: lhs.into(),
            rhs,
            tolerance: 0.0,
            outcome: Outcome::HypothesisNotMet,
            notes: why.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.notes.is_empty() {
            self.notes = note;
        } else {
            self.notes = format!("{}; {note}", self.notes);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }

    /// `lhs / rhs` when the right side is a nonzero number.
    pub fn ratio(&self) -> Option<f64> {
        let rhs = self.rhs.as_ref()?;
        let r = match (&self.lhs, rhs) {
            (Num::Exact(a), Num::Exact(b)) if !num_traits::Zero::is_zero(b) => to_f64(&(a / b)),
            (a, b) => {
                let b = b.to_f64();
                if b == 0.0 {
                    return None;
                }
                a.to_f64() / b
            }
        };
        Some(r)
    }

    /// Re-derives pass/fail from `lhs`, `rhs` and `tolerance`.
    pub fn recompute(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Pass | Outcome::Fail => Some(holds(self.relation, &self.lhs, self.rhs.as_ref()?, self.tolerance)),
            _ => None,
        }
    }
}

impl Serialize for CheckRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckRecord", 9)?;
        st.serialize_field("check_id", &self.check_id)?;
        st.serialize_field("instance", &self.instance)?;
        st.serialize_field("relation", &self.relation)?;
        st.serialize_field("lhs", &self.lhs)?;
        st.serialize_field("rhs", &self.rhs)?;
        match self.ratio() {
            Some(r) => st.serialize_field("ratio", &float_json(r))?,
            None => st.serialize_field("ratio", &Option::<f64>::None)?,
        }
        st.serialize_field("tolerance", &float_json(self.tolerance))?;
        st.serialize_field("pass", &self.passed())?;
        st.serialize_field("outcome", &self.outcome)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn exact_inequality() {
        let r = CheckRecord::le("X", "i", rat(3, 16), rat(3, 16), 0.0);
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(r.ratio(), Some(1.0));
        let f = CheckRecord::le("X", "i", rat(1, 2), rat(1, 3), 0.0);
        assert_eq!(f.outcome, Outcome::Fail);
        assert_eq!(f.recompute(), Some(false));
    }

    #[test]
    fn relative_tolerance() {
        let r = CheckRecord::le("X", "i", 1.0 + 1e-13, 1.0, 1e-12);
        assert!(r.passed());
        let r = CheckRecord::le("X", "i", 1.0 + 1e-11, 1.0, 1e-12);
        assert!(!r.passed());
    }

    #[test]
    fn json_shape() {
        let r = CheckRecord::le("LEM111", "ltf:1,1;0", rat(3, 16), int(1) / int(4), 0.0);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"lhs\":\"3/16\""));
        assert!(s.contains("\"ratio\":7.5000000000000000e-1"));
        assert!(s.contains("\"pass\":true"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["outcome"], "pass");
        let rep = CheckRecord::reported("R", "i", f64::NAN);
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"lhs\":null"));
    }
}
