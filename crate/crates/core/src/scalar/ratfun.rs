use super::{Field, PolyU, Ring, ScalarError, ScalarK};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Rational function `num / den` in `u` over K.
///
/// Reduction by the gcd is lazy; equality is decided by cross
/// multiplication so unreduced values compare correctly.
#[derive(Clone)]
pub struct RatFunU {
    num: PolyU,
    den: PolyU,
}

/// Denominator degree above which arithmetic reduces eagerly.
const REDUCE_ABOVE: usize = 6;

impl RatFunU {
    pub fn new(num: PolyU, den: PolyU) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(RatFunU { num, den })
    }

    pub fn from_poly(p: PolyU) -> Self {
        RatFunU { num: p, den: PolyU::one() }
    }

    pub fn constant(c: ScalarK) -> Self {
        Self::from_poly(PolyU::constant(c))
    }

    pub fn u() -> Self {
        Self::from_poly(PolyU::u())
    }

    /// `c / (u - a)`.
    pub fn pole(c: ScalarK, a: ScalarK) -> Self {
        RatFunU { num: PolyU::constant(c), den: PolyU::linear_root(a) }
    }

    pub fn num(&self) -> &PolyU {
        &self.num
    }

    pub fn den(&self) -> &PolyU {
        &self.den
    }

    /// gcd-reduced form with monic denominator.
    pub fn normalized(&self) -> RatFunU {
        if self.num.is_zero() {
            return RatFunU { num: PolyU::zero(), den: PolyU::one() };
        }
        let g = self.num.gcd(&self.den);
        let (n, _) = self.num.divrem(&g);
        let (d, _) = self.den.divrem(&g);
        let li = d.leading().inv().unwrap();
        RatFunU { num: n.scale(&li), den: d.scale(&li) }
    }

    fn maybe_reduce(self) -> Self {
        if self.den.deg() > REDUCE_ABOVE {
            self.normalized()
        } else {
            self
        }
    }

    /// deg num - deg den (the order of growth at infinity), `None` for zero.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.den.deg() as i64)
    }

    pub fn is_proper(&self) -> bool {
        self.degree_at_infinity().is_none_or(|d| d <= 0)
    }

    pub fn eval(&self, x: &ScalarK) -> Result<ScalarK, ScalarError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            let r = self.normalized();
            let d2 = r.den.eval(x);
            if d2.is_zero() {
                return Err(ScalarError::Pole { at: x.canonical() });
            }
            return Ok(r.num.eval(x).times(&d2.inv().unwrap()));
        }
        Ok(self.num.eval(x).times(&d.inv().unwrap()))
    }

    /// `f(u + c)`.
    pub fn shift(&self, c: &ScalarK) -> RatFunU {
        RatFunU { num: self.num.shift(c), den: self.den.shift(c) }
    }

    /// `f(s u)`.
    pub fn scale_var(&self, s: &ScalarK) -> RatFunU {
        RatFunU { num: self.num.scale_var(s), den: self.den.scale_var(s) }
    }

    pub fn inv(&self) -> Option<RatFunU> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunU { num: self.den.clone(), den: self.num.clone() })
        }
    }

    pub fn scale(&self, s: &ScalarK) -> RatFunU {
        RatFunU { num: self.num.scale(s), den: self.den.clone() }
    }

    /// JSON-friendly coefficient lists of the reduced form.
    pub fn to_lists(&self) -> (Vec<String>, Vec<String>) {
        let r = self.normalized();
        (r.num.coeffs().iter().map(|c| c.canonical()).collect(), r.den.coeffs().iter().map(|c| c.canonical()).collect())
    }
}

impl PartialEq for RatFunU {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Ring for RatFunU {
    fn zero() -> Self {
        Self::from_poly(PolyU::zero())
    }
    fn one() -> Self {
        Self::from_poly(PolyU::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if o.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return RatFunU { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RatFunU { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.maybe_reduce()
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        RatFunU { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.maybe_reduce()
    }
    fn negated(&self) -> Self {
        RatFunU { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Field for RatFunU {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl fmt::Debug for RatFunU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFunU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.normalized();
        if r.den == PolyU::one() {
            write!(f, "{}", r.num)
        } else {
            write!(f, "({}) / ({})", r.num, r.den)
        }
    }
}

impl Serialize for RatFunU {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (n, d) = self.to_lists();
        let mut st = s.serialize_struct("RatFunU", 3)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("num", &n)?;
        st.serialize_field("den", &d)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_pole() {
        // (u-1)/(u+1) at 3
        let f = RatFunU::new(PolyU::linear_root(ScalarK::int(1)), PolyU::linear_root(ScalarK::int(-1))).unwrap();
        assert_eq!(f.eval(&ScalarK::int(3)).unwrap(), ScalarK::frac(1, 2));
        let g = RatFunU::pole(ScalarK::int(1), ScalarK::frac(3, 2));
        assert!(matches!(g.eval(&ScalarK::frac(3, 2)), Err(ScalarError::Pole { .. })));
        let h = RatFunU::pole(ScalarK::int(1), ScalarK::int(0));
        assert_eq!(h.eval(&ScalarK::int(2)).unwrap(), ScalarK::frac(1, 2));
    }

    #[test]
    fn removable_singularity_evaluates() {
        // (u^2 - 1)/(u - 1) at u = 1 -> 2
        let f = RatFunU::new(
            PolyU::new(vec![ScalarK::int(-1), ScalarK::zero(), ScalarK::int(1)]),
            PolyU::linear_root(ScalarK::int(1)),
        )
        .unwrap();
        assert_eq!(f.eval(&ScalarK::int(1)).unwrap(), ScalarK::int(2));
    }

    #[test]
    fn lazy_equality() {
        let a = RatFunU::pole(ScalarK::int(1), ScalarK::int(2));
        let b = a.plus(&a).minus(&a);
        assert_eq!(a, b);
        assert_eq!(a.times(&a.inv().unwrap()), RatFunU::one());
    }
}
