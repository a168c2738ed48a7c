//! Padé approximants in the variable x = 1/u and rational reconstruction.

use super::{ratfun_to_series, PolyU, RatFunU, Ring, ScalarK, TruncSeriesU};
use crate::linalg::solve_linear;

/// The [l/m] Padé approximant of `s` (in x = 1/u), normalized so q(0) = 1.
///
/// Returns numerator and denominator coefficient vectors in x, or `None`
/// if the defining system is inconsistent.
pub fn pade(s: &TruncSeriesU, l: usize, m: usize) -> Option<(Vec<ScalarK>, Vec<ScalarK>)> {
    if l + m > s.order() {
        return None;
    }
    // unknowns q_1..q_m: sum_{j=0}^m q_j c_{k-j} = 0 for k = l+1..l+m
    let c = |k: i64| if k < 0 { ScalarK::zero() } else { s.coeff(k as usize) };
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for k in (l + 1)..=(l + m) {
        rows.push((1..=m).map(|j| c(k as i64 - j as i64)).collect::<Vec<_>>());
        rhs.push(c(k as i64).negated());
    }
    let qs = if m == 0 { Vec::new() } else { solve_linear(&rows, &rhs, m)? };
    let mut qv = vec![ScalarK::one()];
    qv.extend(qs);
    let pv: Vec<ScalarK> = (0..=l)
        .map(|k| {
            let mut acc = ScalarK::zero();
            for (j, qj) in qv.iter().enumerate() {
                if j <= k {
                    acc.add_to(&qj.times(&c((k - j) as i64)));
                }
            }
            acc
        })
        .collect();
    Some((pv, qv))
}

/// Smallest diagonal Padé approximant (degrees up to `max_deg`) whose
/// expansion reproduces every stored coefficient of `s`, as a rational
/// function of u. `None` when no such approximant exists.
pub fn rational_reconstruct(s: &TruncSeriesU, max_deg: usize) -> Option<RatFunU> {
    for d in 0..=max_deg {
        if 2 * d > s.order() {
            break;
        }
        let Some((p, qv)) = pade(s, d, d) else { continue };
        // p(1/u)/q(1/u) = (u^d p(1/u)) / (u^d q(1/u))
        let rev = |v: &[ScalarK]| {
            let mut w = vec![ScalarK::zero(); d + 1];
            for (k, c) in v.iter().enumerate() {
                w[d - k] = c.clone();
            }
            PolyU::new(w)
        };
        let Ok(f) = RatFunU::new(rev(&p), rev(&qv)) else { continue };
        let Ok(back) = ratfun_to_series(&f, s.order()) else { continue };
        if back == *s {
            return Some(f.normalized());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reconstructs_simple_pole() {
        let f = RatFunU::pole(ScalarK::frac(1, 3), ScalarK::frac(5, 6));
        let s = ratfun_to_series(&f, 6).unwrap();
        let g = rational_reconstruct(&s, 3).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn polynomial_in_x_is_rejected_when_too_long() {
        // 1 + x + x^2 + ... + x^8 with alternating junk is not low degree
        let s = TruncSeriesU::new(8, [1, 0, 0, 0, 5, 0, 0, 0, 1].iter().map(|&c| ScalarK::int(c)).collect());
        assert!(rational_reconstruct(&s, 3).is_none());
    }

    proptest! {
        #[test]
        fn pade_round_trip(a in -5i64..5, b in -5i64..5, c in 1i64..4, e in -3i64..3) {
            // (u^2 + e u + c) / ((u - a)(u - b - 1/2)) has degrees 2 < 8/2... proper
            let num = PolyU::new(vec![ScalarK::int(c), ScalarK::int(e), ScalarK::int(1)]);
            let den = PolyU::linear_root(ScalarK::int(a)).mul(&PolyU::linear_root(ScalarK::frac(2 * b + 1, 2)));
            let f = RatFunU::new(num, den).unwrap();
            let s = ratfun_to_series(&f, 8).unwrap();
            let g = rational_reconstruct(&s, 3).unwrap();
            prop_assert_eq!(g, f);
        }
    }
}
