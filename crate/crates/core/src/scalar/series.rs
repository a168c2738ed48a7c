use super::{PolyU, RatFunU, Ring, ScalarError, ScalarK};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use std::fmt;

/// Power series `c_0 + c_1 u^{-1} + ... + c_K u^{-K}` truncated at order K.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct TruncSeriesU {
    order: usize,
    coeffs: Vec<ScalarK>,
}

impl TruncSeriesU {
    pub fn new(order: usize, mut coeffs: Vec<ScalarK>) -> Self {
        coeffs.resize(order + 1, ScalarK::zero());
        TruncSeriesU { order, coeffs }
    }

    pub fn constant(order: usize, c: ScalarK) -> Self {
        Self::new(order, vec![c])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, ScalarK::one())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[ScalarK] {
        &self.coeffs
    }

    /// Coefficient of `u^{-k}`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> ScalarK {
        self.coeffs.get(k).cloned().unwrap_or_else(ScalarK::zero)
    }

    pub fn set_coeff(&mut self, k: usize, c: ScalarK) {
        if k <= self.order {
            self.coeffs[k] = c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(order, self.coeffs.iter().take(order + 1).cloned().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn common(&self, o: &Self) -> usize {
        self.order.min(o.order)
    }

    pub fn add(&self, o: &Self) -> Self {
        let k = self.common(o);
        Self::new(k, (0..=k).map(|i| self.coeffs[i].plus(&o.coeffs[i])).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let k = self.common(o);
        Self::new(k, (0..=k).map(|i| self.coeffs[i].minus(&o.coeffs[i])).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|c| c.negated()).collect())
    }

    pub fn scale(&self, s: &ScalarK) -> Self {
        Self::new(self.order, self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.common(o);
        let mut out = vec![ScalarK::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j].add_to(&self.coeffs[i].times(&o.coeffs[j]));
            }
        }
        Self::new(k, out)
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        let c0i = self.coeffs[0].inv().ok_or(ScalarError::NotUnit)?;
        let k = self.order;
        let mut out = vec![ScalarK::zero(); k + 1];
        out[0] = c0i.clone();
        for n in 1..=k {
            let mut acc = ScalarK::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc.add_to(&self.coeffs[j].times(&out[n - j]));
            }
            out[n] = acc.times(&c0i).negated();
        }
        Ok(Self::new(k, out))
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiplies by `u^{-s}`, dropping terms past the order.
    pub fn shift_down(&self, s: usize) -> Self {
        let mut out = vec![ScalarK::zero(); s.min(self.order + 1)];
        out.extend(self.coeffs.iter().take((self.order + 1).saturating_sub(s)).cloned());
        Self::new(self.order, out)
    }

    /// Agreement of the first `order + 1` coefficients.
    pub fn agrees_to(&self, o: &Self, order: usize) -> bool {
        (0..=order).all(|k| self.coeff(k) == o.coeff(k))
    }

    /// First index where the two series differ, up to the common order.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        (0..=self.common(o)).find(|&k| self.coeffs[k] != o.coeffs[k])
    }

    /// Rescales the variable: the expansion of `s(u / z)`, i.e. c_k -> z^k c_k.
    pub fn scale_var_inv(&self, z: &ScalarK) -> Self {
        let mut pw = ScalarK::one();
        let mut out = Vec::with_capacity(self.order + 1);
        for c in &self.coeffs {
            out.push(c.times(&pw));
            pw = pw.times(z);
        }
        Self::new(self.order, out)
    }
}

impl fmt::Debug for TruncSeriesU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TruncSeriesU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_rational() { format!("{}", c) } else { format!("({})", c) };
            terms.push(if k == 0 { cs } else { format!("{}*u^-{}", cs, k) });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(u^-{})", terms.join(" + "), self.order + 1)
    }
}

/// Binomial coefficient C(n, k) for n >= 0 as a big integer.
fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Expansion of `s(u + c)` in powers of `u^{-1}` at the order of `s`.
///
/// Uses (u+c)^{-k} = sum_j C(-k, j) c^j u^{-k-j} with
/// C(-k, j) = (-1)^j C(k+j-1, j).
pub fn series_shift(s: &TruncSeriesU, c: &ScalarK) -> TruncSeriesU {
    let k_max = s.order();
    let mut cpow = vec![ScalarK::one()];
    for j in 1..=k_max {
        let next = cpow[j - 1].times(c);
        cpow.push(next);
    }
    let mut out = vec![ScalarK::zero(); k_max + 1];
    out[0] = s.coeff(0);
    for k in 1..=k_max {
        let sk = s.coeff(k);
        if sk.is_zero() {
            continue;
        }
        for j in 0..=(k_max - k) {
            let b = binom(k + j - 1, j);
            let b = if j % 2 == 1 { -b } else { b };
            let coef = ScalarK::from_q(super::Q::from_integer(b));
            out[k + j].add_to(&sk.times(&cpow[j]).times(&coef));
        }
    }
    TruncSeriesU::new(k_max, out)
}

/// Expansion of a proper rational function at `u = infinity`.
pub fn ratfun_to_series(f: &RatFunU, order: usize) -> Result<TruncSeriesU, ScalarError> {
    let num = f.num();
    let den = f.den();
    let dd = den.deg();
    if let Some(dn) = num.degree() {
        if dn > dd {
            return Err(ScalarError::Improper { gap: dn - dd });
        }
    } else {
        return Ok(TruncSeriesU::zero(order));
    }
    // In x = 1/u: num(u) u^{-D} = sum num_i x^{D-i}, likewise for den.
    let in_x = |p: &PolyU| -> TruncSeriesU {
        let mut v = vec![ScalarK::zero(); order + 1];
        for (i, c) in p.coeffs().iter().enumerate() {
            let e = dd - i;
            if e <= order {
                v[e] = c.clone();
            }
        }
        TruncSeriesU::new(order, v)
    };
    in_x(num).div(&in_x(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};
    use proptest::prelude::*;

    fn ser(v: &[(i64, i64)], order: usize) -> TruncSeriesU {
        TruncSeriesU::new(order, v.iter().map(|&(a, b)| ScalarK::frac(a, b)).collect())
    }

    #[test]
    fn geometric_expansion() {
        // u/(u-1) -> 1 + u^-1 + u^-2 + u^-3
        let f = RatFunU::new(PolyU::u(), PolyU::linear_root(ScalarK::int(1))).unwrap();
        let s = ratfun_to_series(&f, 3).unwrap();
        assert_eq!(s, ser(&[(1, 1), (1, 1), (1, 1), (1, 1)], 3));
    }

    #[test]
    fn g_right_hand_side() {
        // u^2/(u^2 - 1) -> 1 + u^-2 + u^-4
        let f = RatFunU::new(PolyU::u().pow(2), PolyU::new(vec![ScalarK::int(-1), ScalarK::zero(), ScalarK::int(1)]))
            .unwrap();
        let s = ratfun_to_series(&f, 4).unwrap();
        assert_eq!(s, ser(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 1)], 4));
    }

    #[test]
    fn simple_pole_expansion() {
        // 1/(u - 3/2) -> u^-1 + 3/2 u^-2
        let f = RatFunU::pole(ScalarK::int(1), ScalarK::frac(3, 2));
        let s = ratfun_to_series(&f, 2).unwrap();
        assert_eq!(s, ser(&[(0, 1), (1, 1), (3, 2)], 2));
    }

    #[test]
    fn improper_is_rejected() {
        let f = RatFunU::from_poly(PolyU::u().pow(2));
        assert_eq!(ratfun_to_series(&f, 3), Err(ScalarError::Improper { gap: 2 }));
    }

    #[test]
    fn shift_examples() {
        let s = ser(&[(1, 1), (1, 1)], 4);
        let t = series_shift(&s, &ScalarK::int(1));
        assert_eq!(t, ser(&[(1, 1), (1, 1), (-1, 1), (1, 1), (-1, 1)], 4));
        let one = TruncSeriesU::one(5);
        assert_eq!(series_shift(&one, &ScalarK::frac(7, 3)), one);
        let kappa = ScalarK::frac(3, 2);
        let u2 = ser(&[(0, 1), (0, 1), (1, 1)], 4);
        let t = series_shift(&u2, &kappa);
        let k2 = kappa.times(&kappa);
        assert_eq!(t.coeff(2), ScalarK::int(1));
        assert_eq!(t.coeff(3), kappa.times(&ScalarK::int(-2)));
        assert_eq!(t.coeff(4), k2.times(&ScalarK::int(3)));
    }

    #[test]
    fn inverse_round_trip() {
        let s = ser(&[(2, 1), (1, 3), (-1, 1), (5, 7)], 6);
        let p = s.mul(&s.inv().unwrap());
        assert_eq!(p, TruncSeriesU::one(6));
    }

    proptest! {
        #[test]
        fn shift_composes(c in prop::collection::vec((-9i64..9, 1i64..4), 7), a in (-5i64..5, 1i64..4), b in (-5i64..5, 1i64..4)) {
            let s = TruncSeriesU::new(6, c.iter().map(|&(x, y)| ScalarK::from_q(q(x, y))).collect());
            let a = ScalarK::from_q(q(a.0, a.1));
            let b = ScalarK::from_q(q(b.0, b.1));
            let lhs = series_shift(&series_shift(&s, &a), &b);
            let rhs = series_shift(&s, &(&a + &b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn expansion_is_multiplicative(a in -6i64..6, b in -6i64..6) {
            let f = RatFunU::pole(ScalarK::int(1), ScalarK::from_q(Q::from_integer(a.into())));
            let g = RatFunU::new(PolyU::u(), PolyU::linear_root(ScalarK::int(b))).unwrap();
            let lhs = ratfun_to_series(&f.times(&g), 7).unwrap();
            let rhs = ratfun_to_series(&f, 7).unwrap().mul(&ratfun_to_series(&g, 7).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
