//! Representations of the current presentation as finite tables.

use super::{residual, RepError};
use crate::liealg::{Series, Spec};
use crate::linalg::KMat;
use crate::report::CheckReport;
use crate::scalar::{fmt_q, Ring, ScalarK, Q};
use num_bigint::BigInt;
use num_traits::One;

/// Default range r, s <= 3 for the full relation suite.
pub const DEFAULT_RS_MAX: usize = 3;

/// Tables x_{ir}^+, x_{ir}^-, h_{ir} indexed [i][r].
#[derive(Clone, Debug)]
pub struct CurRep {
    pub spec: Spec,
    pub zeta: Q,
    pub dim: usize,
    pub xp: Vec<Vec<KMat>>,
    pub xm: Vec<Vec<KMat>>,
    pub h: Vec<Vec<KMat>>,
}

impl CurRep {
    /// Largest r present for every generator.
    pub fn top(&self) -> usize {
        let lens = self.xp.iter().chain(&self.xm).chain(&self.h).map(|t| t.len());
        lens.min().unwrap_or(0).saturating_sub(1)
    }

    pub fn zeta_k(&self) -> ScalarK {
        ScalarK::from_q(self.zeta.clone())
    }

    pub fn x(&self, sign: i8, i: usize, r: usize) -> &KMat {
        if sign > 0 {
            &self.xp[i][r]
        } else {
            &self.xm[i][r]
        }
    }

    /// h~_{i1} = h_{i1} - zeta h_{i0}^2 / 2.
    pub fn h_tilde(&self, i: usize) -> KMat {
        let h0 = &self.h[i][0];
        self.h[i][1].axpy(&self.zeta_k().times(&ScalarK::frac(-1, 2)), &h0.mul(h0))
    }

    /// Builds the tables from the degree 0 and 1 generators with
    /// x_{i,r+1} = +-(alpha_i,alpha_i)^{-1} [h~_{i1}, x_{ir}] and h_{ir} = [x_{ir}^+, x_{i0}^-].
    #[allow(clippy::too_many_arguments)]
    pub fn from_degree_one(
        spec: &Spec,
        zeta: &Q,
        dim: usize,
        x0: (Vec<KMat>, Vec<KMat>),
        h0: Vec<KMat>,
        x1: (Vec<KMat>, Vec<KMat>),
        h1: Vec<KMat>,
        top: usize,
    ) -> CurRep {
        let n = spec.n;
        let mut rep = CurRep {
            spec: spec.clone(),
            zeta: zeta.clone(),
            dim,
            xp: (0..n).map(|i| vec![x0.0[i].clone(), x1.0[i].clone()]).collect(),
            xm: (0..n).map(|i| vec![x0.1[i].clone(), x1.1[i].clone()]).collect(),
            h: (0..n).map(|i| vec![h0[i].clone(), h1[i].clone()]).collect(),
        };
        for i in 0..n {
            let ht = rep.h_tilde(i);
            let c = ScalarK::from_q(Q::one() / spec.root_pairing(i, i));
            for r in 1..top {
                let p = ht.commutator(&rep.xp[i][r]).scale(&c);
                let m = ht.commutator(&rep.xm[i][r]).scale(&c.negated());
                let h = p.commutator(&rep.xm[i][0]);
                rep.xp[i].push(p);
                rep.xm[i].push(m);
                rep.h[i].push(h);
            }
        }
        rep
    }
}

/// Closed-form evaluation-type action on C^N for r = 0..=top.
pub fn natural_current_rep(spec: &Spec, zeta: &Q, top: usize) -> CurRep {
    let z = ScalarK::from_q(zeta.clone());
    let e = |i: i32, j: i32| spec.e_mat(i, j);
    let a = match spec.series {
        Series::B => z.times(&ScalarK::frac(-1, 4)),
        Series::C => z.times(&ScalarK::frac(1, 2)),
        Series::D => z.times(&ScalarK::frac(-1, 2)),
    };
    let n = spec.n;
    let nn = spec.big_n;
    let (mut xp, mut xm, mut h) = (vec![Vec::new(); n], vec![Vec::new(); n], vec![Vec::new(); n]);
    let fm = |i: i32, j: i32| crate::liealg::f(spec, i, j).mat;
    for r in 0..=top {
        let rr = r as u32;
        let delta = if r == 0 { ScalarK::one() } else { ScalarK::zero() };
        let (p0, m0, h0) = match spec.series {
            Series::B => {
                let c = z.times(&ScalarK::frac(-1, 4)).pow(rr);
                let cb = z.times(&ScalarK::frac(1, 4)).pow(rr);
                (
                    e(0, 1).scale(&c).axpy(&cb.negated(), &e(-1, 0)),
                    e(1, 0).scale(&c).axpy(&cb.negated(), &e(0, -1)),
                    e(0, 0).sub(&e(1, 1)).scale(&c).axpy(&cb, &e(-1, -1).sub(&e(0, 0))),
                )
            }
            Series::C => {
                let s = ScalarK::sqrt2().inv().unwrap().times(&delta);
                (fm(-1, 1).scale(&s), fm(1, -1).scale(&s), fm(1, 1).scale(&ScalarK::int(-2).times(&delta)))
            }
            Series::D => {
                (fm(-1, 2).scale(&delta), fm(2, -1).scale(&delta), fm(1, 1).add(&fm(2, 2)).scale(&delta.negated()))
            }
        };
        xp[0].push(p0);
        xm[0].push(m0);
        h[0].push(h0);
        for i in 1..n {
            let k = i as i32;
            let c0 = a.plus(&z.times(&ScalarK::frac(k as i64, 2)));
            let c = c0.pow(rr);
            let cb = c0.negated().pow(rr);
            xp[i].push(e(k, k + 1).scale(&c).axpy(&cb.negated(), &e(-k - 1, -k)));
            xm[i].push(e(k + 1, k).scale(&c).axpy(&cb.negated(), &e(-k, -k - 1)));
            let hp = e(k, k).sub(&e(k + 1, k + 1));
            let hm = e(-k, -k).sub(&e(-k - 1, -k - 1));
            h[i].push(hp.scale(&c).axpy(&cb.negated(), &hm));
        }
    }
    CurRep { spec: spec.clone(), zeta: zeta.clone(), dim: nn, xp, xm, h }
}

fn pm(sign: i8) -> &'static str {
    if sign > 0 {
        "+"
    } else {
        "-"
    }
}

fn serre(rep: &CurRep, out: &mut CheckReport, tag: &str) {
    let spec = &rep.spec;
    for i in 0..spec.n {
        for j in 0..spec.n {
            if i == j {
                continue;
            }
            let m = Q::one() - spec.cartan(i, j);
            let m = m.to_integer().try_into().unwrap_or(0u32);
            for sign in [1i8, -1] {
                // all r_k = 0: the symmetrized sum is m! ad(x_{i0})^m (x_{j0})
                let mut y = rep.x(sign, j, 0).clone();
                for _ in 0..m {
                    y = rep.x(sign, i, 0).commutator(&y);
                }
                out.record(tag, y.is_zero(), || residual(&format!("Serre i={i} j={j} {}", pm(sign)), &y));
            }
        }
    }
}

/// Relations Ycr-1 to Ycr-3 for r <= r_max, s <= s_max, and Serre at r = 0.
pub fn check_current_relations(rep: &CurRep, r_max: usize, s_max: usize) -> CheckReport {
    let spec = &rep.spec;
    let mut out = CheckReport::new("current-relations", "Ycr-1..4").with_spec(spec.name()).with_zeta(fmt_q(&rep.zeta));
    let need = (r_max + s_max).max(r_max + 1).max(s_max + 1);
    if rep.top() < need {
        out.error(
            RepError::Range(format!("tables stop at r = {}, relations need r = {}", rep.top(), need)).to_string(),
        );
        return out;
    }
    let half_z = rep.zeta_k().times(&ScalarK::frac(1, 2));
    let n = spec.n;
    for i in 0..n {
        for j in 0..n {
            let aij = ScalarK::from_q(spec.root_pairing(i, j));
            for r in 0..=r_max {
                for s in 0..=s_max {
                    let loc = |what: &str| format!("{what} i={i} j={j} r={r} s={s}");
                    let d = rep.h[i][r].commutator(&rep.h[j][s]);
                    out.record("Ycr-1", d.is_zero(), || residual(&loc("[h,h]"), &d));
                    let mut d = rep.xp[i][r].commutator(&rep.xm[j][s]);
                    if i == j {
                        d = d.sub(&rep.h[i][r + s]);
                    }
                    out.record("Ycr-1", d.is_zero(), || residual(&loc("[x+,x-]"), &d));
                    for sign in [1i8, -1] {
                        let sa = if sign > 0 { aij.clone() } else { aij.negated() };
                        if r == 0 {
                            let d = rep.h[i][0].commutator(rep.x(sign, j, s)).axpy(&sa.negated(), rep.x(sign, j, s));
                            out.record("Ycr-1", d.is_zero(), || residual(&loc(&format!("[h0,x{}]", pm(sign))), &d));
                        }
                        let c = sa.times(&half_z);
                        let lhs = rep.h[i][r + 1].commutator(rep.x(sign, j, s)).sub(&rep.h[i][r].commutator(rep.x(
                            sign,
                            j,
                            s + 1,
                        )));
                        let d = lhs.axpy(&c.negated(), &rep.h[i][r].anticommutator(rep.x(sign, j, s)));
                        out.record("Ycr-2", d.is_zero(), || residual(&loc(pm(sign)), &d));
                        let lhs = rep
                            .x(sign, i, r + 1)
                            .commutator(rep.x(sign, j, s))
                            .sub(&rep.x(sign, i, r).commutator(rep.x(sign, j, s + 1)));
                        let d = lhs.axpy(&c.negated(), &rep.x(sign, i, r).anticommutator(rep.x(sign, j, s)));
                        out.record("Ycr-3", d.is_zero(), || residual(&loc(pm(sign)), &d));
                    }
                }
            }
        }
    }
    serre(rep, &mut out, "Ycr-4");
    out
}

/// Relations Le1-Le3 on r in {0, 1}, plus the extra sl_2 relation for sp_2.
pub fn check_minimal_relations(rep: &CurRep) -> CheckReport {
    let spec = &rep.spec;
    let mut out = CheckReport::new("minimal-relations", "Le1-Le3").with_spec(spec.name()).with_zeta(fmt_q(&rep.zeta));
    if rep.top() < 1 {
        out.error(RepError::Range("the r = 1 tables are missing".into()).to_string());
        return out;
    }
    let half_z = rep.zeta_k().times(&ScalarK::frac(1, 2));
    let n = spec.n;
    let ht: Vec<KMat> = (0..n).map(|i| rep.h_tilde(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let aij = ScalarK::from_q(spec.root_pairing(i, j));
            for r in 0..2 {
                for s in 0..2 {
                    let d = rep.h[i][r].commutator(&rep.h[j][s]);
                    out.record("Le1", d.is_zero(), || residual(&format!("[h{i}{r},h{j}{s}]"), &d));
                }
                let mut d = rep.xp[i][r].commutator(&rep.xm[j][0]);
                if i == j {
                    d = d.sub(&rep.h[i][r]);
                }
                out.record("Le2", d.is_zero(), || residual(&format!("[x+{i}{r},x-{j}0]"), &d));
            }
            for sign in [1i8, -1] {
                let sa = if sign > 0 { aij.clone() } else { aij.negated() };
                let d = rep.h[i][0].commutator(rep.x(sign, j, 0)).axpy(&sa.negated(), rep.x(sign, j, 0));
                out.record("Le1", d.is_zero(), || residual(&format!("[h{i}0,x{}{j}0]", pm(sign)), &d));
                let d = ht[i].commutator(rep.x(sign, j, 0)).axpy(&sa.negated(), rep.x(sign, j, 1));
                out.record("Le1", d.is_zero(), || residual(&format!("[h~{i}1,x{}{j}0]", pm(sign)), &d));
                let lhs = rep.x(sign, i, 1).commutator(rep.x(sign, j, 0));
                let rhs = rep
                    .x(sign, i, 0)
                    .commutator(rep.x(sign, j, 1))
                    .axpy(&sa.times(&half_z), &rep.x(sign, i, 0).anticommutator(rep.x(sign, j, 0)));
                let d = lhs.sub(&rhs);
                out.record("Le2", d.is_zero(), || residual(&format!("i={i} j={j} {}", pm(sign)), &d));
            }
        }
    }
    serre(rep, &mut out, "Le3");
    if spec.is_sp2() {
        let (p, m) = (&rep.xp[0][1], &rep.xm[0][1]);
        let d = ht[0].commutator(p).commutator(m).add(&p.commutator(&ht[0].commutator(m)));
        out.record("sl2", d.is_zero(), || residual("[[h~,x+1],x-1] + [x+1,[h~,x-1]]", &d));
    }
    out
}

fn binom(n: usize, k: usize) -> ScalarK {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    ScalarK::from_q(Q::from_integer(r))
}

/// Pullback along the shift automorphism: x_{ir} -> sum_k C(r,k) (b zeta)^{r-k} x_{ik}.
pub fn cur_shift(rep: &CurRep, b: &ScalarK) -> CurRep {
    let bz = b.times(&rep.zeta_k());
    let shift = |t: &Vec<KMat>| -> Vec<KMat> {
        (0..t.len())
            .map(|r| {
                let mut acc = KMat::zeros(rep.dim, rep.dim);
                for (k, m) in t.iter().enumerate().take(r + 1) {
                    acc = acc.axpy(&binom(r, k).times(&bz.pow((r - k) as u32)), m);
                }
                acc
            })
            .collect()
    };
    CurRep {
        spec: rep.spec.clone(),
        zeta: rep.zeta.clone(),
        dim: rep.dim,
        xp: rep.xp.iter().map(shift).collect(),
        xm: rep.xm.iter().map(shift).collect(),
        h: rep.h.iter().map(shift).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_lie_algebra;
    use crate::scalar::{q, qi};

    #[test]
    fn natural_current_passes() {
        for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::D, 3), (Series::C, 1), (Series::B, 1)] {
            let spec = build_lie_algebra(s, n).unwrap();
            for z in [qi(1), q(1, 3)] {
                let rep = natural_current_rep(&spec, &z, 6);
                let r = check_current_relations(&rep, 3, 3);
                assert!(r.passed(), "{:?} {}: {}", s, n, r);
                assert!(check_minimal_relations(&rep).passed());
            }
        }
    }

    #[test]
    fn so5_worked_instance() {
        let spec = build_lie_algebra(Series::B, 2).unwrap();
        let z = q(2, 1);
        let rep = natural_current_rep(&spec, &z, 5);
        let zq = ScalarK::from_q(z.clone()).times(&ScalarK::frac(1, 4));
        for r in 0..3usize {
            for s in 0..3usize {
                let lhs = rep.xp[0][r + 1].commutator(&rep.xp[1][s]).sub(&rep.xp[0][r].commutator(&rep.xp[1][s + 1]));
                let sg = |k: usize| ScalarK::int(if k % 2 == 0 { 1 } else { -1 });
                let want = spec
                    .e_mat(0, 2)
                    .scale(&sg(r + 1))
                    .add(&spec.e_mat(-2, 0).scale(&sg(s + 1)))
                    .scale(&ScalarK::int(2).times(&zq.pow((r + 1 + s) as u32)));
                assert_eq!(lhs, want);
                let rhs = rep.xp[0][r].anticommutator(&rep.xp[1][s]).scale(&ScalarK::from_q(-z.clone() / qi(2)));
                let want2 = spec
                    .e_mat(0, 2)
                    .scale(&sg(r))
                    .add(&spec.e_mat(-2, 0).scale(&sg(s)))
                    .scale(&ScalarK::from_q(-z.clone() / qi(2)).times(&zq.pow((r + s) as u32)));
                assert_eq!(rhs, want2);
            }
        }
    }

    #[test]
    fn perturbations_are_caught() {
        let spec = build_lie_algebra(Series::C, 2).unwrap();
        let mut rep = natural_current_rep(&spec, &qi(1), 6);
        rep.h[1][1] = rep.h[1][1].add(&spec.e_mat(1, 1));
        assert!(check_current_relations(&rep, 3, 3).failed_tag("Ycr-1"));
        let mut rep = natural_current_rep(&spec, &qi(1), 6);
        rep.xp[0][1] = rep.xp[0][1].add(&rep.xp[0][0].clone());
        let r = check_minimal_relations(&rep);
        assert!(r.failed_tag("Le2") || r.failed_tag("Le1"));
        let short = natural_current_rep(&spec, &qi(1), 2);
        assert_eq!(check_current_relations(&short, 3, 3).status, crate::report::Status::Error);
    }

    #[test]
    fn recursion_and_shift() {
        let spec = build_lie_algebra(Series::B, 2).unwrap();
        let rep = natural_current_rep(&spec, &qi(1), 5);
        let take = |t: &Vec<Vec<KMat>>, r: usize| t.iter().map(|v| v[r].clone()).collect::<Vec<_>>();
        let rec = CurRep::from_degree_one(
            &spec,
            &qi(1),
            5,
            (take(&rep.xp, 0), take(&rep.xm, 0)),
            take(&rep.h, 0),
            (take(&rep.xp, 1), take(&rep.xm, 1)),
            take(&rep.h, 1),
            5,
        );
        assert_eq!(rec.xp, rep.xp);
        assert_eq!(rec.h, rep.h);
        let sh = cur_shift(&rep, &ScalarK::frac(2, 3));
        assert!(check_current_relations(&sh, 2, 2).passed());
    }
}
