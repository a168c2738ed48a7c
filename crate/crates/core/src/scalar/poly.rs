use super::{Ring, ScalarK};
use serde::Serialize;
use std::fmt;

/// Univariate polynomial in `u` over K, coefficients stored from u^0 upward.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyU {
    coeffs: Vec<ScalarK>,
}

impl PolyU {
    pub fn new(mut coeffs: Vec<ScalarK>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyU { coeffs }
    }

    pub fn zero() -> Self {
        PolyU { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ScalarK::one())
    }

    pub fn constant(c: ScalarK) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `u`.
    pub fn u() -> Self {
        Self::new(vec![ScalarK::zero(), ScalarK::one()])
    }

    /// `u - a`.
    pub fn linear_root(a: ScalarK) -> Self {
        Self::new(vec![a.negated(), ScalarK::one()])
    }

    pub fn coeffs(&self) -> &[ScalarK] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ScalarK {
        self.coeffs.get(k).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> ScalarK {
        self.coeffs.last().cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, o: &PolyU) -> PolyU {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyU::new((0..n).map(|k| self.coeff(k).plus(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &PolyU) -> PolyU {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyU::new((0..n).map(|k| self.coeff(k).minus(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> PolyU {
        PolyU { coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }

    pub fn mul(&self, o: &PolyU) -> PolyU {
        if self.is_zero() || o.is_zero() {
            return PolyU::zero();
        }
        let mut out = vec![ScalarK::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j].add_to(&a.times(b));
            }
        }
        PolyU::new(out)
    }

    pub fn scale(&self, s: &ScalarK) -> PolyU {
        PolyU::new(self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, d: &PolyU) -> (PolyU, PolyU) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (PolyU::zero(), self.clone());
        }
        let mut qv = vec![ScalarK::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = r[k + dd].times(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = c.times(dj);
                r[k + j] = r[k + j].minus(&t);
            }
            qv[k] = c;
        }
        r.truncate(dd);
        (PolyU::new(qv), PolyU::new(r))
    }

    pub fn monic(&self) -> PolyU {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, o: &PolyU) -> PolyU {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &ScalarK) -> ScalarK {
        let mut acc = ScalarK::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// `p(u + c)` by Horner-style Taylor shift.
    pub fn shift(&self, c: &ScalarK) -> PolyU {
        let lin = PolyU::new(vec![c.clone(), ScalarK::one()]);
        let mut acc = PolyU::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&PolyU::constant(a.clone()));
        }
        acc
    }

    /// `p(s u)`.
    pub fn scale_var(&self, s: &ScalarK) -> PolyU {
        let mut pw = ScalarK::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.times(&pw));
            pw = pw.times(s);
        }
        PolyU::new(out)
    }

    pub fn pow(&self, e: u32) -> PolyU {
        let mut r = PolyU::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl fmt::Debug for PolyU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolyU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_rational() { format!("{}", c) } else { format!("({})", c) };
            terms.push(match k {
                0 => cs,
                1 if c.is_one() => "u".to_string(),
                1 => format!("{}*u", cs),
                _ if c.is_one() => format!("u^{}", k),
                _ => format!("{}*u^{}", cs, k),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> PolyU {
        PolyU::new(v.iter().map(|&x| ScalarK::int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (u-1)(u+2) and (u-1)(u-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (qq, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(qq, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let a = p(&[5, -3, 0, 2]);
        let c = ScalarK::frac(3, 2);
        let s = a.shift(&c);
        for x in [-2i64, 0, 1, 7] {
            let x = ScalarK::int(x);
            assert_eq!(s.eval(&x), a.eval(&(&x + &c)));
        }
    }
}
