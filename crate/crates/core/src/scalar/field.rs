use super::{fmt_q, parse_q, q_is_neg, qi, Field, Ring, ScalarError, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Element a + b z + c z^2 + d z^3 of Q(z8) = Q[z]/(z^4 + 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarK {
    c: [Q; 4],
}

impl ScalarK {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        ScalarK { c: [a, b, c, d] }
    }

    pub fn from_q(a: Q) -> Self {
        ScalarK { c: [a, Q::zero(), Q::zero(), Q::zero()] }
    }

    pub fn int(n: i64) -> Self {
        Self::from_q(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_q(super::q(n, d))
    }

    /// The primitive eighth root of unity z8.
    pub fn z8() -> Self {
        ScalarK::new(Q::zero(), Q::one(), Q::zero(), Q::zero())
    }

    /// sqrt(2) = z + z^{-1} = z - z^3.
    pub fn sqrt2() -> Self {
        ScalarK::new(Q::zero(), Q::one(), Q::zero(), -Q::one())
    }

    /// sqrt(-1) = z^2.
    pub fn i() -> Self {
        ScalarK::new(Q::zero(), Q::zero(), Q::one(), Q::zero())
    }

    /// sqrt(-2) = sqrt(-1) * sqrt(2) = z + z^3.
    pub fn sqrt_m2() -> Self {
        ScalarK::new(Q::zero(), Q::one(), Q::zero(), Q::one())
    }

    pub fn coeffs(&self) -> &[Q; 4] {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.is_rational() {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero_k();
        }
        ScalarK { c: [&self.c[0] * s, &self.c[1] * s, &self.c[2] * s, &self.c[3] * s] }
    }

    fn zero_k() -> Self {
        ScalarK { c: [Q::zero(), Q::zero(), Q::zero(), Q::zero()] }
    }

    /// Galois automorphism z -> z^k for odd k.
    pub fn galois(&self, k: usize) -> Self {
        let mut out = Self::zero_k();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let e = (j * k) % 8;
            if e < 4 {
                out.c[e] += cj;
            } else {
                out.c[e - 4] -= cj;
            }
        }
        out
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Q {
        let p = self.mul_ref(&self.galois(3)).mul_ref(&self.galois(5)).mul_ref(&self.galois(7));
        debug_assert!(p.is_rational());
        p.c[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if let Some(a) = self.as_rational() {
            return if a.is_zero() { None } else { Some(Self::from_q(a.recip())) };
        }
        let co = self.galois(3).mul_ref(&self.galois(5)).mul_ref(&self.galois(7));
        let n = self.mul_ref(&co);
        let n = n.c[0].clone();
        if n.is_zero() {
            None
        } else {
            Some(co.scale_q(&n.recip()))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::int(1);
        for _ in 0..e {
            r = r.mul_ref(self);
        }
        r
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if let Some(a) = self.as_rational() {
            return o.scale_q(a);
        }
        if let Some(b) = o.as_rational() {
            return self.scale_q(b);
        }
        let mut out = Self::zero_k();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if o.c[j].is_zero() {
                    continue;
                }
                let p = &self.c[i] * &o.c[j];
                let k = i + j;
                if k < 4 {
                    out.c[k] += p;
                } else {
                    out.c[k - 4] -= p;
                }
            }
        }
        out
    }

    /// Canonical text form `a + b*z8 + c*z8^2 + d*z8^3`.
    pub fn canonical(&self) -> String {
        format!(
            "{} + {}*z8 + {}*z8^2 + {}*z8^3",
            fmt_q(&self.c[0]),
            fmt_q(&self.c[1]),
            fmt_q(&self.c[2]),
            fmt_q(&self.c[3])
        )
    }

    /// Parses either the canonical form or a bare rational `p/q`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let t = s.trim();
        if !t.contains("z8") {
            return Ok(Self::from_q(parse_q(t)?));
        }
        let mut out = Self::zero_k();
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        // split on '+' that are not part of a sign following '/' or start
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (idx, ch) in compact.chars().enumerate() {
            if ch == '+' && idx > 0 {
                terms.push(std::mem::take(&mut cur));
            } else {
                cur.push(ch);
            }
        }
        terms.push(cur);
        for term in terms {
            let (coef, power) = match term.split_once("*z8") {
                None => (term.as_str(), 0usize),
                Some((c, rest)) => {
                    let p = if rest.is_empty() {
                        1
                    } else {
                        rest.trim_start_matches('^').parse::<usize>().map_err(|_| ScalarError::Parse(s.to_string()))?
                    };
                    (c, p)
                }
            };
            if power > 3 {
                return Err(ScalarError::Parse(s.to_string()));
            }
            out.c[power] += parse_q(coef)?;
        }
        Ok(out)
    }
}

impl Ring for ScalarK {
    fn zero() -> Self {
        Self::zero_k()
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn plus(&self, o: &Self) -> Self {
        ScalarK { c: [&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2], &self.c[3] + &o.c[3]] }
    }
    fn minus(&self, o: &Self) -> Self {
        ScalarK { c: [&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2], &self.c[3] - &o.c[3]] }
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn negated(&self) -> Self {
        ScalarK { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
    fn add_to(&mut self, o: &Self) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] += &o.c[k];
            }
        }
    }
    fn is_one(&self) -> bool {
        self.is_rational() && self.c[0].is_one()
    }
}

impl Field for ScalarK {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl From<Q> for ScalarK {
    fn from(q: Q) -> Self {
        Self::from_q(q)
    }
}

impl From<i64> for ScalarK {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl fmt::Debug for ScalarK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Compact form: only nonzero terms, e.g. `3/2`, `-1*z8^2`, `0`.
impl fmt::Display for ScalarK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let base = match k {
                0 => String::new(),
                1 => "*z8".to_string(),
                _ => format!("*z8^{}", k),
            };
            let s = fmt_q(c);
            if parts.is_empty() || q_is_neg(c) {
                parts.push(format!("{}{}", s, base));
            } else {
                parts.push(format!("+{}{}", s, base));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl Serialize for ScalarK {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for ScalarK {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ScalarK::parse(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&ScalarK> for &ScalarK {
            type Output = ScalarK;
            fn $m(self, o: &ScalarK) -> ScalarK {
                Ring::$f(self, o)
            }
        }
        impl $tr<ScalarK> for ScalarK {
            type Output = ScalarK;
            fn $m(self, o: ScalarK) -> ScalarK {
                Ring::$f(&self, &o)
            }
        }
        impl $tr<&ScalarK> for ScalarK {
            type Output = ScalarK;
            fn $m(self, o: &ScalarK) -> ScalarK {
                Ring::$f(&self, o)
            }
        }
    };
}
binop!(Add, add, plus);
binop!(Sub, sub, minus);
binop!(Mul, mul, times);

impl Div<&ScalarK> for &ScalarK {
    type Output = ScalarK;
    fn div(self, o: &ScalarK) -> ScalarK {
        self.mul_ref(&o.inv().expect("division by zero in ScalarK"))
    }
}

impl Div<ScalarK> for ScalarK {
    type Output = ScalarK;
    fn div(self, o: ScalarK) -> ScalarK {
        &self / &o
    }
}

impl Neg for ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        self.negated()
    }
}

impl Neg for &ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        self.negated()
    }
}

impl AddAssign<&ScalarK> for ScalarK {
    fn add_assign(&mut self, o: &ScalarK) {
        self.add_to(o);
    }
}

impl SubAssign<&ScalarK> for ScalarK {
    fn sub_assign(&mut self, o: &ScalarK) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] -= &o.c[k];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn k(a: i64, b: i64, c: i64, d: i64) -> ScalarK {
        ScalarK::new(qi(a), qi(b), qi(c), qi(d))
    }

    #[test]
    fn roots_square_correctly() {
        let s2 = ScalarK::sqrt2();
        assert_eq!(&s2 * &s2, ScalarK::int(2));
        let i = ScalarK::i();
        assert_eq!(&i * &i, ScalarK::int(-1));
        let m2 = ScalarK::sqrt_m2();
        assert_eq!(&m2 * &m2, ScalarK::int(-2));
        assert_eq!(ScalarK::z8().pow(4), ScalarK::int(-1));
        assert_eq!(ScalarK::z8().pow(8), ScalarK::int(1));
    }

    #[test]
    fn inverse_of_sqrt2() {
        let h = ScalarK::sqrt2().inv().unwrap();
        assert_eq!(&h * &h, ScalarK::from_q(q(1, 2)));
        assert!(ScalarK::zero().inv().is_none());
    }

    #[test]
    fn canonical_round_trip() {
        let x = ScalarK::new(q(3, 2), q(-1, 5), qi(0), qi(7));
        let s = x.canonical();
        assert_eq!(s, "3/2 + -1/5*z8 + 0*z8^2 + 7*z8^3");
        assert_eq!(ScalarK::parse(&s).unwrap(), x);
        assert_eq!(ScalarK::parse("-4/6").unwrap(), ScalarK::frac(-2, 3));
    }

    #[test]
    fn norm_is_multiplicative_on_sample() {
        let a = k(1, 2, 0, -1);
        let b = k(0, 1, 3, 1);
        assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    }

    fn arb_k() -> impl Strategy<Value = ScalarK> {
        prop::array::uniform4((-20i64..20, 1i64..6))
            .prop_map(|v| ScalarK::new(q(v[0].0, v[0].1), q(v[1].0, v[1].1), q(v[2].0, v[2].1), q(v[3].0, v[3].1)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_k(), b in arb_k(), c in arb_k()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), ScalarK::int(1));
            }
        }
    }
}
