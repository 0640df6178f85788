use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::rational::{fmt_rat, int, max_rat, min_rat, show_rat, Rat};

/// `[lo, hi]` with exact rational endpoints; `exact` means the value is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub exact: bool,
}

impl HeightInterval {
    pub fn exact(x: Rat) -> Self {
        HeightInterval { lo: x.clone(), hi: x, exact: true }
    }

    pub fn zero() -> Self {
        Self::exact(Rat::zero())
    }

    /// `[lo, hi]`; collapses to an exact value when the endpoints meet.
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "empty interval");
        let exact = lo == hi;
        HeightInterval { lo, hi, exact }
    }

    /// Intersection with `[0, inf)`.
    pub fn clamp_nonneg(self) -> Self {
        let z = Rat::zero();
        if self.hi < z {
            // cannot happen for sound inputs; keep the point 0 visible
            return Self::new(z.clone(), z);
        }
        let lo = max_rat(&self.lo, &z);
        HeightInterval { exact: self.exact || lo == self.hi, lo, hi: self.hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        HeightInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, exact: self.exact && other.exact }
    }

    pub fn shift(&self, c: &Rat) -> Self {
        HeightInterval { lo: &self.lo + c, hi: &self.hi + c, exact: self.exact }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        assert!(*c >= Rat::zero());
        HeightInterval { lo: &self.lo * c, hi: &self.hi * c, exact: self.exact }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        if !self.intersects(other) {
            return None;
        }
        let lo = max_rat(&self.lo, &other.lo);
        let hi = min_rat(&self.hi, &other.hi);
        let exact = self.exact || other.exact || lo == hi;
        Some(HeightInterval { lo, hi, exact })
    }

    /// True when every point lies in `[lo, hi]`.
    pub fn within(&self, lo: &Rat, hi: &Rat) -> bool {
        *lo <= self.lo && self.hi <= *hi
    }

    /// True when some point lies in `[lo, hi]`.
    pub fn meets(&self, lo: &Rat, hi: &Rat) -> bool {
        *lo <= self.hi && self.lo <= *hi
    }

    pub fn render(&self) -> String {
        if self.exact {
            show_rat(&self.lo)
        } else {
            format!("[{}, {}]", show_rat(&self.lo), show_rat(&self.hi))
        }
    }
}

impl Serialize for HeightInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HeightInterval", 3)?;
        st.serialize_field("lo", &fmt_rat(&self.lo))?;
        st.serialize_field("hi", &fmt_rat(&self.hi))?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

/// Value of a local Green's function with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenResult {
    pub value: HeightInterval,
    /// Iteration at which the orbit left the escape radius.
    pub escaped_at: Option<u32>,
    /// The escape formula was used.
    pub closed_form: bool,
}

impl GreenResult {
    pub fn zero() -> Self {
        GreenResult { value: HeightInterval::zero(), escaped_at: None, closed_form: false }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn interval_ops() {
        let a = HeightInterval::new(rat(-1, 2), int(1)).clamp_nonneg();
        assert_eq!(a.lo, int(0));
        assert!(!a.exact);
        let b = HeightInterval::exact(rat(1, 3));
        assert!(a.intersects(&b));
        assert_eq!(a.intersect(&b).unwrap(), b);
        assert_eq!(a.add(&b).hi, rat(4, 3));
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"lo":"1/3","hi":"1/3","exact":true}"#);
    }
}
