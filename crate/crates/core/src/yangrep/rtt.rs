//! Representations of the RTT presentation.
//!
//! An RTTRep stores T(u) = f(u) N(u) / d(u) with f a scalar series in u^{-1},
//! d a scalar polynomial and N an N x N array of matrix polynomials.

use super::{fundamental_module, restrict_mats, RepError};
use crate::liealg::{LieError, Series, Spec};
use crate::linalg::{Echelon, KMat};
use crate::report::CheckReport;
use crate::scalar::{fmt_q, ratfun_to_series, series_shift, PolyU, RatFunU, Ring, ScalarK, TruncSeriesU, Q};
use num_traits::One;
use rayon::prelude::*;

/// A polynomial in u with matrix coefficients (index = power of u).
#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly {
    pub dim: usize,
    pub coeffs: Vec<KMat>,
}

impl MatPoly {
    pub fn new(dim: usize, mut coeffs: Vec<KMat>) -> Self {
        while coeffs.last().map(|m| m.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        MatPoly { dim, coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        MatPoly { dim, coeffs: Vec::new() }
    }

    /// p(u) I.
    pub fn scalar_poly(dim: usize, p: &PolyU) -> Self {
        Self::new(dim, p.coeffs().iter().map(|c| KMat::scalar(dim, c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> KMat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| KMat::zeros(self.dim, self.dim))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.dim, (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.dim, (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = vec![KMat::zeros(self.dim, o.dim); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                out[a + b] = out[a + b].add(&x.mul(y));
            }
        }
        Self::new(self.dim, out)
    }

    pub fn kron(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.dim * o.dim);
        }
        let mut out = vec![KMat::zeros(self.dim * o.dim, self.dim * o.dim); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in o.coeffs.iter().enumerate() {
                out[a + b] = out[a + b].add(&x.kron(y));
            }
        }
        Self::new(self.dim * o.dim, out)
    }

    pub fn scale(&self, s: &ScalarK) -> Self {
        Self::new(self.dim, self.coeffs.iter().map(|m| m.scale(s)).collect())
    }

    /// Multiplies by a scalar polynomial.
    pub fn mul_poly(&self, p: &PolyU) -> Self {
        self.mul(&Self::scalar_poly(self.dim, p))
    }

    pub fn eval(&self, x: &ScalarK) -> KMat {
        let mut acc = KMat::zeros(self.dim, self.dim);
        for m in self.coeffs.iter().rev() {
            acc = acc.scale(x).add(m);
        }
        acc
    }

    /// p(u + c).
    pub fn shift(&self, c: &ScalarK) -> Self {
        let lin = Self::scalar_poly(self.dim, &PolyU::new(vec![c.clone(), ScalarK::one()]));
        let mut acc = Self::zero(self.dim);
        for m in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::new(self.dim, vec![m.clone()]));
        }
        acc
    }

    /// p(s u).
    pub fn scale_var(&self, s: &ScalarK) -> Self {
        let mut pw = ScalarK::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for m in &self.coeffs {
            out.push(m.scale(&pw));
            pw = pw.times(s);
        }
        Self::new(self.dim, out)
    }

    pub fn map_coeffs(&self, dim: usize, f: impl Fn(&KMat) -> KMat) -> Self {
        Self::new(dim, self.coeffs.iter().map(f).collect())
    }
}

#[derive(Clone, Debug)]
pub struct RTTRep {
    pub spec: Spec,
    pub zeta: Q,
    pub dim: usize,
    pub order: usize,
    pub prefactor: TruncSeriesU,
    pub den: PolyU,
    /// Numerators indexed pos(i) * N + pos(j).
    pub num: Vec<MatPoly>,
}

impl RTTRep {
    fn at(&self, i: i32, j: i32) -> usize {
        self.spec.pos(i) * self.spec.big_n + self.spec.pos(j)
    }

    pub fn entry(&self, i: i32, j: i32) -> &MatPoly {
        &self.num[self.at(i, j)]
    }

    pub fn zeta_k(&self) -> ScalarK {
        ScalarK::from_q(self.zeta.clone())
    }

    /// Whether the prefactor is exactly 1, so T(u) is rational.
    pub fn is_rational(&self) -> bool {
        self.prefactor == TruncSeriesU::one(self.order)
    }

    /// Coefficients of u^{-r}, r = 0..=order, of every entry: [entry][r].
    pub fn raw_coeffs(&self) -> Vec<Vec<KMat>> {
        let k = self.order;
        let dd = self.den.deg();
        let inv = ratfun_to_series(&RatFunU::new(PolyU::one(), self.den.clone()).unwrap(), k + dd + 1)
            .expect("1/d is proper");
        self.num
            .iter()
            .map(|p| {
                // M_r = sum_k N_k a_{r+k}
                let m: Vec<KMat> = (0..=k)
                    .map(|r| {
                        let mut acc = KMat::zeros(self.dim, self.dim);
                        for (e, c) in p.coeffs.iter().enumerate() {
                            let a = inv.coeff(r + e);
                            if !a.is_zero() {
                                acc = acc.axpy(&a, c);
                            }
                        }
                        acc
                    })
                    .collect();
                (0..=k)
                    .map(|r| {
                        let mut acc = KMat::zeros(self.dim, self.dim);
                        for j in 0..=r {
                            let f = self.prefactor.coeff(j);
                            if !f.is_zero() {
                                acc = acc.axpy(&f, &m[r - j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// t^{(r)}_{ij}: the u^{-r} coefficient divided by zeta^r.
    pub fn t_coeff(&self, i: i32, j: i32, r: usize) -> KMat {
        let raw = &self.raw_coeffs()[self.at(i, j)][r];
        raw.scale(&self.zeta_k().pow(r as u32).inv().expect("zeta is nonzero"))
    }

    /// All t^{(r)}_{ij} for r <= order, as [entry][r].
    pub fn t_coeffs(&self) -> Vec<Vec<KMat>> {
        let zi = self.zeta_k().inv().expect("zeta is nonzero");
        self.raw_coeffs()
            .into_iter()
            .map(|v| v.into_iter().enumerate().map(|(r, m)| m.scale(&zi.pow(r as u32))).collect())
            .collect()
    }

    /// Representation on an invariant subspace.
    pub fn restrict(&self, basis: &Echelon<ScalarK>) -> Result<RTTRep, RepError> {
        let dim = basis.rank();
        let num = self
            .num
            .iter()
            .map(|p| restrict_mats(&p.coeffs, basis).map(|c| MatPoly::new(dim, c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RTTRep { num, dim, ..self.clone() })
    }

    /// T(u) -> T(u / zeta), turning a zeta = 1 representation into one at zeta.
    pub fn rescale(&self, zeta: &Q) -> RTTRep {
        let z = ScalarK::from_q(zeta.clone());
        let zi = z.inv().expect("zeta is nonzero");
        let dd = self.den.deg() as u32;
        let lift = z.pow(dd);
        RTTRep {
            zeta: zeta.clone(),
            prefactor: self.prefactor.scale_var_inv(&z),
            den: self.den.scale_var(&zi).scale(&lift),
            num: self.num.iter().map(|p| p.scale_var(&zi).scale(&lift)).collect(),
            ..self.clone()
        }
    }
}

/// Solves f(u) f(u + c) = s(u) with f = 1 + O(u^{-1}), to the order of s.
pub fn half_shift(s: &TruncSeriesU, c: &ScalarK) -> TruncSeriesU {
    let k = s.order();
    let mut f = TruncSeriesU::one(k);
    for m in 1..=k {
        let prod = f.mul(&series_shift(&f, c));
        let gap = s.coeff(m).minus(&prod.coeff(m));
        f.set_coeff(m, gap.times(&ScalarK::frac(1, 2)));
    }
    f
}

/// g(u) with g(u) g(u + kappa) = u^2 / (u^2 - 1).
pub fn g_series(spec: &Spec, order: usize) -> TruncSeriesU {
    let u2 = PolyU::u().pow(2);
    let s = RatFunU::new(u2.clone(), u2.sub(&PolyU::one())).unwrap();
    half_shift(&ratfun_to_series(&s, order).unwrap(), &ScalarK::from_q(spec.kappa.clone()))
}

/// f(u) with f(u) f(u + kappa) = 4u(u + kappa) / (4u(u + kappa) - 2 kappa - 1).
pub fn spin_f_series(spec: &Spec, order: usize) -> TruncSeriesU {
    let k = ScalarK::from_q(spec.kappa.clone());
    let p = PolyU::new(vec![ScalarK::zero(), k.times(&ScalarK::int(4)), ScalarK::int(4)]);
    let c = k.times(&ScalarK::int(2)).plus(&ScalarK::one());
    let s = RatFunU::new(p.clone(), p.sub(&PolyU::constant(c))).unwrap();
    half_shift(&ratfun_to_series(&s, order).unwrap(), &k)
}

/// t_{ij}(u) = delta_{ij}.
pub fn identity_rtt_rep(spec: &Spec, zeta: &Q, dim: usize, order: usize) -> RTTRep {
    let nn = spec.big_n;
    let num = (0..nn * nn)
        .map(|e| if e / nn == e % nn { MatPoly::new(dim, vec![KMat::identity(dim)]) } else { MatPoly::zero(dim) })
        .collect();
    RTTRep {
        spec: spec.clone(),
        zeta: zeta.clone(),
        dim,
        order,
        prefactor: TruncSeriesU::one(order),
        den: PolyU::one(),
        num,
    }
}

/// t_{ij}(u) -> g(u)(delta_{ij} + E_{ij}/(u - kappa) - theta_{ij} E_{-j,-i}/u) on C^N.
pub fn rtt_natural_rep(spec: &Spec, zeta: &Q, order: usize) -> RTTRep {
    let nn = spec.big_n;
    let k = ScalarK::from_q(spec.kappa.clone());
    let u = PolyU::u();
    let umk = PolyU::linear_root(k.clone());
    let den = u.mul(&umk);
    let mut num = Vec::with_capacity(nn * nn);
    for &i in spec.indices() {
        for &j in spec.indices() {
            let mut p = MatPoly::new(nn, vec![spec.e_mat(i, j)]).mul_poly(&u);
            let th = ScalarK::int(-spec.theta(i, j));
            p = p.add(&MatPoly::new(nn, vec![spec.e_mat(-j, -i).scale(&th)]).mul_poly(&umk));
            if i == j {
                p = p.add(&MatPoly::scalar_poly(nn, &den));
            }
            num.push(p);
        }
    }
    let rep = RTTRep { spec: spec.clone(), zeta: Q::one(), dim: nn, order, prefactor: g_series(spec, order), den, num };
    if zeta.is_one() {
        rep
    } else {
        rep.rescale(zeta)
    }
}

/// t_{kl}(u) -> f(u)(delta_{kl} + F_{kl} u^{-1}) on V(omega_i), i in {0, 1}.
pub fn rtt_spin_rep(spec: &Spec, zeta: &Q, i: usize, order: usize) -> Result<RTTRep, RepError> {
    let ok = match spec.series {
        Series::B => i == 0,
        Series::D => i <= 1,
        Series::C => false,
    };
    if !ok {
        return Err(RepError::NodeNotAllowed {
            node: i,
            reason: "spin modules exist for so_{2n+1} node 0 and so_{2n} nodes 0, 1".into(),
        });
    }
    let m = fundamental_module(spec, i)?;
    let dim = m.rep.dim();
    let mut num = Vec::new();
    for &k in spec.indices() {
        for &l in spec.indices() {
            let mut c = vec![m.rep.f(k, l)];
            if k == l {
                c.push(KMat::identity(dim));
            }
            num.push(MatPoly::new(dim, c));
        }
    }
    let rep = RTTRep {
        spec: spec.clone(),
        zeta: Q::one(),
        dim,
        order,
        prefactor: spin_f_series(spec, order),
        den: PolyU::u(),
        num,
    };
    Ok(if zeta.is_one() { rep } else { rep.rescale(zeta) })
}

/// Coproduct: t_{ij}(u) -> sum_k t_{ik}(u) (x) t_{kj}(u).
pub fn rtt_tensor(a: &RTTRep, b: &RTTRep) -> Result<RTTRep, RepError> {
    if *a.spec != *b.spec || a.zeta != b.zeta {
        return Err(LieError::SpecMismatch.into());
    }
    let nn = a.spec.big_n;
    let dim = a.dim * b.dim;
    let num = (0..nn * nn)
        .into_par_iter()
        .map(|e| {
            let (i, j) = (e / nn, e % nn);
            let mut acc = MatPoly::zero(dim);
            for k in 0..nn {
                let (x, y) = (&a.num[i * nn + k], &b.num[k * nn + j]);
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.kron(y));
                }
            }
            acc
        })
        .collect();
    let order = a.order.min(b.order);
    Ok(RTTRep {
        spec: a.spec.clone(),
        zeta: a.zeta.clone(),
        dim,
        order,
        prefactor: a.prefactor.truncate(order).mul(&b.prefactor.truncate(order)),
        den: a.den.mul(&b.den),
        num,
    })
}

/// T(u) -> T(u - c).
pub fn rtt_shift(rep: &RTTRep, c: &ScalarK) -> RTTRep {
    let m = c.negated();
    RTTRep {
        prefactor: series_shift(&rep.prefactor, &m),
        den: rep.den.shift(&m),
        num: rep.num.iter().map(|p| p.shift(&m)).collect(),
        ..rep.clone()
    }
}

fn witness(loc: String, d: &KMat) -> (String, String) {
    super::residual(&loc, d)
}

/// RTT relation and unitarity: exact on the rational part, and to the
/// truncation order on the full series.
pub fn check_rtt_relations(rep: &RTTRep) -> CheckReport {
    let spec = &rep.spec;
    let mut out =
        CheckReport::new("rtt-relations", "RTT and unitarity").with_spec(spec.name()).with_zeta(fmt_q(&rep.zeta));
    out.set_info("order", rep.order);
    let raw = rep.raw_coeffs();
    // normalization t_{ij}(u) = delta_{ij} + O(u^{-1})
    let nn = spec.big_n;
    for (e, c) in raw.iter().enumerate() {
        let want = if e / nn == e % nn { KMat::identity(rep.dim) } else { KMat::zeros(rep.dim, rep.dim) };
        let d = c[0].sub(&want);
        out.record("normalization", d.is_zero(), || witness(format!("entry {e}"), &d));
    }
    rational_rtt(rep, &mut out);
    rational_unitarity(rep, &mut out);
    series_rtt(rep, &raw, &mut out);
    series_unitarity(rep, &raw, &mut out);
    out
}

/// Index quadruples (i, j, k, l) as positions.
fn quads(nn: usize) -> Vec<(usize, usize, usize, usize)> {
    (0..nn.pow(4)).map(|q| (q / (nn * nn * nn), (q / (nn * nn)) % nn, (q / nn) % nn, q % nn)).collect()
}

/// Cleared-denominator RTT identity evaluated on a grid that determines it.
fn rational_rtt(rep: &RTTRep, out: &mut CheckReport) {
    let spec = &rep.spec;
    let nn = spec.big_n;
    let idx = spec.indices().to_vec();
    let deg = rep.num.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let pts: Vec<ScalarK> = (0..deg + 3).map(|k| ScalarK::int(3 * k as i64 + 1)).collect();
    let vpts: Vec<ScalarK> = (0..deg + 3).map(|k| ScalarK::frac(-(2 * k as i64) - 1, 2)).collect();
    let at_u: Vec<Vec<KMat>> = pts.iter().map(|x| rep.num.iter().map(|p| p.eval(x)).collect()).collect();
    let at_v: Vec<Vec<KMat>> = vpts.iter().map(|x| rep.num.iter().map(|p| p.eval(x)).collect()).collect();
    let z = rep.zeta_k();
    let zk = z.times(&ScalarK::from_q(spec.kappa.clone()));
    let neg = |p: usize| spec.pos(-idx[p]);
    let th = |a: usize, b: usize| ScalarK::int(spec.theta(idx[a], idx[b]));
    let grid: Vec<(usize, usize)> = (0..pts.len()).flat_map(|a| (0..vpts.len()).map(move |b| (a, b))).collect();
    let (pts, vpts, idx) = (&pts, &vpts, &idx);
    let res: Vec<(bool, (String, String))> = grid
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let (tu, tv) = (&at_u[a], &at_v[b]);
            let x = pts[a].minus(&vpts[b]);
            let x2 = x.minus(&zk);
            let c0 = x.times(&x2);
            let c1 = z.times(&x2).negated();
            let c2 = z.times(&x);
            let at = |i: usize, j: usize| i * nn + j;
            quads(nn).into_iter().map(move |(i, j, k, l)| {
                let mut d = tu[at(i, j)].commutator_with(&tv[at(k, l)]).scale(&c0);
                let ab = tu[at(k, j)].mul(&tv[at(i, l)]).sub(&tv[at(k, j)].mul(&tu[at(i, l)]));
                d = d.axpy(&c1, &ab);
                if k == neg(i) {
                    for p in 0..nn {
                        let m = tu[at(p, j)].mul(&tv[at(neg(p), l)]);
                        d = d.axpy(&c2.times(&th(i, p)), &m);
                    }
                }
                if l == neg(j) {
                    for p in 0..nn {
                        let m = tv[at(k, neg(p))].mul(&tu[at(i, p)]);
                        d = d.axpy(&c2.times(&th(j, p)).negated(), &m);
                    }
                }
                let loc = format!("u={} v={} (i,j,k,l)=({},{},{},{})", pts[a], vpts[b], idx[i], idx[j], idx[k], idx[l]);
                (d.is_zero(), witness(loc, &d))
            })
        })
        .collect();
    for (ok, w) in res {
        out.record("RTT", ok, || w.clone());
    }
}

trait Comm {
    fn commutator_with(&self, o: &KMat) -> KMat;
}

impl Comm for KMat {
    fn commutator_with(&self, o: &KMat) -> KMat {
        self.mul(o).sub(&o.mul(self))
    }
}

/// sum_a theta_{aj} N_{ia}(u) N_{-j,-a}(u + zeta kappa) = p(u) delta_{ij} I and the
/// mirrored product; then f(u) f(u + zeta kappa) p(u) / (d(u) d(u + zeta kappa)) = 1.
fn rational_unitarity(rep: &RTTRep, out: &mut CheckReport) {
    let spec = &rep.spec;
    let nn = spec.big_n;
    let idx = spec.indices().to_vec();
    let zk = rep.zeta_k().times(&ScalarK::from_q(spec.kappa.clone()));
    let shifted: Vec<MatPoly> = rep.num.iter().map(|p| p.shift(&zk)).collect();
    let neg = |p: usize| spec.pos(-idx[p]);
    let th = |a: usize, b: usize| ScalarK::int(spec.theta(idx[a], idx[b]));
    let mut scalar: Option<MatPoly> = None;
    for i in 0..nn {
        for j in 0..nn {
            let mut left = MatPoly::zero(rep.dim);
            let mut right = MatPoly::zero(rep.dim);
            for a in 0..nn {
                left = left.add(&rep.num[i * nn + a].mul(&shifted[neg(j) * nn + neg(a)]).scale(&th(a, j)));
                right = right.add(&shifted[neg(a) * nn + neg(i)].mul(&rep.num[a * nn + j]).scale(&th(i, a)));
            }
            for (tag, m) in [("unitary-left", &left), ("unitary-right", &right)] {
                let ok = if i == j {
                    let reference = scalar.get_or_insert_with(|| m.clone()).clone();
                    let scal = m.coeffs.iter().all(|c| *c == KMat::scalar(rep.dim, c.get(0, 0)));
                    scal && *m == reference
                } else {
                    m.is_zero()
                };
                out.record(tag, ok, || {
                    (format!("rational part ({},{})", idx[i], idx[j]), format!("degree {:?}", m.degree()))
                });
            }
        }
    }
    if let Some(p) = scalar {
        let pp = PolyU::new(p.coeffs.iter().map(|c| c.get(0, 0)).collect());
        let d2 = rep.den.mul(&rep.den.shift(&zk));
        let k = rep.order;
        let lhs = match RatFunU::new(pp, d2).and_then(|r| ratfun_to_series(&r, k)) {
            Ok(s) => s.mul(&rep.prefactor).mul(&series_shift(&rep.prefactor, &zk)),
            Err(e) => {
                out.error(format!("unitarity scalar is not proper: {e}"));
                return;
            }
        };
        let first = lhs.first_difference(&TruncSeriesU::one(k));
        out.record("unitary-scalar", first.is_none(), || {
            let m = first.unwrap_or(0);
            (format!("u^-{m} coefficient"), lhs.coeff(m).to_string())
        });
    }
}

/// Bi-series form of RTT multiplied by (u - v)(u - v - zeta kappa), coefficients
/// of u^{-p} v^{-q} for -2 <= p, q <= order - 2.
fn series_rtt(rep: &RTTRep, raw: &[Vec<KMat>], out: &mut CheckReport) {
    let spec = &rep.spec;
    let nn = spec.big_n;
    let k = rep.order;
    if k < 2 {
        out.error("series check needs order >= 2");
        return;
    }
    let idx = spec.indices().to_vec();
    let z = rep.zeta_k();
    let zk = z.times(&ScalarK::from_q(spec.kappa.clone()));
    let neg = |p: usize| spec.pos(-idx[p]);
    let th = |a: usize, b: usize| ScalarK::int(spec.theta(idx[a], idx[b]));
    let dim = rep.dim;
    // (u - v)(u - v - zk) = u^2 - 2uv + v^2 - zk u + zk v, as (alpha, beta, coefficient)
    let two = ScalarK::int(2);
    let mono_c0 = vec![
        (2usize, 0usize, ScalarK::one()),
        (1, 1, two.negated()),
        (0, 2, ScalarK::one()),
        (1, 0, zk.negated()),
        (0, 1, zk.clone()),
    ];
    // -zeta (u - v - zk)
    let mono_c1 = vec![(1usize, 0usize, z.negated()), (0, 1, z.clone()), (0, 0, z.times(&zk))];
    // zeta (u - v)
    let mono_c2 = vec![(1usize, 0usize, z.clone()), (0, 1, z.negated())];
    let at = |i: usize, j: usize| i * nn + j;
    let res: Vec<(bool, (String, String))> = quads(nn)
        .par_iter()
        .map(|&(i, j, kk, l)| {
            // bi-series coefficient tables S[p][q]
            let table = |f: &dyn Fn(usize, usize) -> KMat| -> Vec<Vec<KMat>> {
                (0..=k).map(|p| (0..=k).map(|q| f(p, q)).collect()).collect()
            };
            let comm = table(&|p, q| {
                let (a, b) = (&raw[at(i, j)][p], &raw[at(kk, l)][q]);
                a.mul(b).sub(&b.mul(a))
            });
            let swap = table(&|p, q| {
                // t_kj(u) t_il(v) - t_kj(v) t_il(u)
                raw[at(kk, j)][p].mul(&raw[at(i, l)][q]).sub(&raw[at(kk, j)][q].mul(&raw[at(i, l)][p]))
            });
            let qterm = table(&|p, q| {
                let mut acc = KMat::zeros(dim, dim);
                if kk == neg(i) {
                    for a in 0..nn {
                        acc = acc.axpy(&th(i, a), &raw[at(a, j)][p].mul(&raw[at(neg(a), l)][q]));
                    }
                }
                if l == neg(j) {
                    for a in 0..nn {
                        acc = acc.axpy(&th(j, a).negated(), &raw[at(kk, neg(a))][q].mul(&raw[at(i, a)][p]));
                    }
                }
                acc
            });
            for p in 0..=k - 2 + 2 {
                for q in 0..=k - 2 + 2 {
                    // p, q here are shifted by 2: actual exponents p - 2, q - 2
                    let mut d = KMat::zeros(dim, dim);
                    for (tab, monos) in [(&comm, &mono_c0), (&swap, &mono_c1), (&qterm, &mono_c2)] {
                        for (al, be, c) in monos.iter() {
                            let (pp, qq) = (p + al, q + be);
                            if pp < 2 || qq < 2 {
                                continue;
                            }
                            let (pp, qq) = (pp - 2, qq - 2);
                            if pp > k || qq > k {
                                continue;
                            }
                            d = d.axpy(c, &tab[pp][qq]);
                        }
                    }
                    if !d.is_zero() {
                        let loc = format!(
                            "u^{} v^{} (i,j,k,l)=({},{},{},{})",
                            2i64 - p as i64,
                            2i64 - q as i64,
                            idx[i],
                            idx[j],
                            idx[kk],
                            idx[l]
                        );
                        return (false, witness(loc, &d));
                    }
                }
            }
            (true, (String::new(), String::new()))
        })
        .collect();
    for (ok, w) in res {
        out.record("RTT-series", ok, || w.clone());
    }
}

/// Series expansion of t(u + c) from the coefficients of t(u).
fn shifted_coeffs(c: &[KMat], shift: &ScalarK, dim: usize) -> Vec<KMat> {
    let k = c.len() - 1;
    let mut out = vec![KMat::zeros(dim, dim); k + 1];
    out[0] = c[0].clone();
    let mut pw = vec![ScalarK::one()];
    for j in 1..=k {
        pw.push(pw[j - 1].times(shift));
    }
    for (r, m) in c.iter().enumerate().skip(1) {
        if m.is_zero() {
            continue;
        }
        // (u + s)^{-r} = sum_j (-1)^j C(r + j - 1, j) s^j u^{-r-j}
        let mut b = Q::one();
        for j in 0..=(k - r) {
            if j > 0 {
                b = b * Q::from_integer((r + j - 1).into()) / Q::from_integer(j.into());
            }
            let sgn = if j % 2 == 0 { b.clone() } else { -b.clone() };
            out[r + j] = out[r + j].axpy(&pw[j].times(&ScalarK::from_q(sgn)), m);
        }
    }
    out
}

fn series_unitarity(rep: &RTTRep, raw: &[Vec<KMat>], out: &mut CheckReport) {
    let spec = &rep.spec;
    let nn = spec.big_n;
    let k = rep.order;
    let idx = spec.indices().to_vec();
    let zk = rep.zeta_k().times(&ScalarK::from_q(spec.kappa.clone()));
    let sh: Vec<Vec<KMat>> = raw.iter().map(|c| shifted_coeffs(c, &zk, rep.dim)).collect();
    let neg = |p: usize| spec.pos(-idx[p]);
    let th = |a: usize, b: usize| ScalarK::int(spec.theta(idx[a], idx[b]));
    for i in 0..nn {
        for j in 0..nn {
            for m in 0..=k {
                let mut left = KMat::zeros(rep.dim, rep.dim);
                let mut right = KMat::zeros(rep.dim, rep.dim);
                for a in 0..nn {
                    for r in 0..=m {
                        let x = raw[i * nn + a][r].mul(&sh[neg(j) * nn + neg(a)][m - r]);
                        left = left.axpy(&th(a, j), &x);
                        let y = sh[neg(a) * nn + neg(i)][r].mul(&raw[a * nn + j][m - r]);
                        right = right.axpy(&th(i, a), &y);
                    }
                }
                let want = if i == j && m == 0 { KMat::identity(rep.dim) } else { KMat::zeros(rep.dim, rep.dim) };
                let dl = left.sub(&want);
                let dr = right.sub(&want);
                let loc = format!("u^-{m} ({},{})", idx[i], idx[j]);
                out.record("unitary-series", dl.is_zero(), || witness(loc.clone(), &dl));
                out.record("unitary-series", dr.is_zero(), || witness(loc, &dr));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_lie_algebra;
    use crate::scalar::{q, qi};

    #[test]
    fn g_and_f_leading_terms() {
        let spec = build_lie_algebra(Series::B, 2).unwrap();
        let g = g_series(&spec, 6);
        assert_eq!(g.coeff(1), ScalarK::zero());
        assert_eq!(g.coeff(2), ScalarK::frac(1, 2));
        let f = spin_f_series(&spec, 6);
        let want = ScalarK::from_q(spec.kappa.clone() / qi(4) + q(1, 8));
        assert_eq!(f.coeff(2), want);
        assert_eq!(f.coeff(1), ScalarK::zero());
    }

    #[test]
    fn natural_rep_coefficients() {
        let spec = build_lie_algebra(Series::C, 2).unwrap();
        let rep = rtt_natural_rep(&spec, &qi(1), 4);
        for &i in spec.indices() {
            for &j in spec.indices() {
                assert_eq!(rep.t_coeff(i, j, 1), crate::liealg::f(&spec, i, j).mat);
                let mut want = spec.e_mat(i, j).scale(&ScalarK::from_q(spec.kappa.clone()));
                if i == j {
                    want = want.add(&KMat::scalar(spec.big_n, ScalarK::frac(1, 2)));
                }
                assert_eq!(rep.t_coeff(i, j, 2), want);
            }
        }
    }

    #[test]
    fn natural_rep_passes_and_perturbation_fails() {
        let spec = build_lie_algebra(Series::B, 1).unwrap();
        for z in [qi(1), q(1, 3)] {
            let rep = rtt_natural_rep(&spec, &z, 6);
            let r = check_rtt_relations(&rep);
            assert!(r.passed(), "{}", r);
        }
        let mut bad = rtt_natural_rep(&spec, &qi(1), 6);
        bad.num[0] = bad.num[0].add(&MatPoly::new(3, vec![spec.e_mat(0, 0)]));
        assert!(!check_rtt_relations(&bad).passed());
    }

    #[test]
    fn identity_tensor_shift() {
        let spec = build_lie_algebra(Series::C, 1).unwrap();
        let id = identity_rtt_rep(&spec, &qi(1), 1, 4);
        assert!(check_rtt_relations(&id).passed());
        let v = rtt_natural_rep(&spec, &qi(1), 5);
        let w = rtt_shift(&v, &ScalarK::int(-1));
        assert_eq!(rtt_shift(&v, &ScalarK::zero()).num, v.num);
        let t = rtt_tensor(&v, &w).unwrap();
        let r = check_rtt_relations(&t);
        assert!(r.passed(), "{}", r);
    }

    #[test]
    fn spin_rep_passes() {
        let spec = build_lie_algebra(Series::D, 2).unwrap();
        let rep = rtt_spin_rep(&spec, &qi(1), 0, 5).unwrap();
        let r = check_rtt_relations(&rep);
        assert!(r.passed(), "{}", r);
        assert!(rtt_spin_rep(&build_lie_algebra(Series::C, 2).unwrap(), &qi(1), 0, 4).is_err());
    }
}
