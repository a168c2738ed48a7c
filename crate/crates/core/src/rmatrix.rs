//! The rational R-matrix on C^N (x) C^N, its identities, the projectors of
//! the tensor square and a solver for the intertwiner equation.

use crate::liealg::{chevalley_generators, orthonormal_basis, tensor_operators, LieError, Spec};
use crate::linalg::{svec_from_dense, Echelon, KMat, SVec};
use crate::report::CheckReport;
use crate::scalar::{
    fmt_q, ratfun_to_series, rational_reconstruct, series_shift, PolyU, RatFunU, Ring, ScalarError, ScalarK,
    TruncSeriesU, Q,
};
use crate::yangrep::{half_shift, JRep, MatPoly, RepError};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RMatrixError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("rank unstable between D-1 and D (D = {bound}: {lower} vs {upper})")]
    RankUnstable { bound: usize, lower: usize, upper: usize },
    #[error("rational reconstruction failed for solution {index}, coordinate {coord}")]
    Reconstruction { index: usize, coord: usize },
}

/// A square matrix of rational functions stored as N(u) / d(u).
#[derive(Clone, Debug)]
pub struct RatMatrix {
    pub spec: String,
    pub dim: usize,
    pub den: PolyU,
    pub num: MatPoly,
    /// Set when the matrix degenerates, e.g. R at zeta = 0.
    pub note: Option<String>,
}

impl RatMatrix {
    pub fn new(spec: impl Into<String>, num: MatPoly, den: PolyU) -> Result<Self, RMatrixError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero.into());
        }
        Ok(RatMatrix { spec: spec.into(), dim: num.dim, den, num, note: None })
    }

    pub fn constant(spec: impl Into<String>, m: &KMat) -> Self {
        RatMatrix {
            spec: spec.into(),
            dim: m.nrows(),
            den: PolyU::one(),
            num: MatPoly::new(m.nrows(), vec![m.clone()]),
            note: None,
        }
    }

    /// sum_a f_a(u) B_a over a common denominator.
    pub fn combination(spec: impl Into<String>, funcs: &[RatFunU], mats: &[KMat]) -> Self {
        let dim = mats[0].nrows();
        let den = funcs.iter().fold(PolyU::one(), |acc, f| {
            let g = acc.gcd(f.den());
            acc.mul(&f.den().divrem(&g).0)
        });
        let mut num = MatPoly::zero(dim);
        for (f, b) in funcs.iter().zip(mats) {
            let (cof, _) = den.divrem(f.den());
            let p = f.num().mul(&cof);
            num = num.add(&MatPoly::new(dim, vec![b.clone()]).mul_poly(&p));
        }
        RatMatrix { spec: spec.into(), dim, den, num, note: None }
    }

    pub fn entry(&self, r: usize, c: usize) -> RatFunU {
        let p = PolyU::new(self.num.coeffs.iter().map(|m| m.get(r, c)).collect());
        RatFunU::new(p, self.den.clone()).expect("nonzero denominator").normalized()
    }

    pub fn eval(&self, x: &ScalarK) -> Result<KMat, RMatrixError> {
        let d = self.den.eval(x);
        let inv = d.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self.num.eval(x).scale(&inv))
    }

    pub fn mul(&self, o: &Self) -> Result<Self, RMatrixError> {
        if self.dim != o.dim {
            return Err(RMatrixError::Dim(format!("{} vs {}", self.dim, o.dim)));
        }
        Ok(RatMatrix { num: self.num.mul(&o.num), den: self.den.mul(&o.den), ..self.clone() })
    }

    /// Exact equality by cross multiplication.
    pub fn same_as(&self, o: &Self) -> bool {
        self.dim == o.dim && self.num.mul_poly(&o.den) == o.num.mul_poly(&self.den)
    }

    /// M(u + c).
    pub fn shift(&self, c: &ScalarK) -> Self {
        RatMatrix { num: self.num.shift(c), den: self.den.shift(c), ..self.clone() }
    }

    /// M(s u).
    pub fn scale_var(&self, s: &ScalarK) -> Self {
        RatMatrix { num: self.num.scale_var(s), den: self.den.scale_var(s), ..self.clone() }
    }

    /// Multiplies every entry by a scalar rational function.
    pub fn times_fn(&self, f: &RatFunU) -> Self {
        RatMatrix { num: self.num.mul_poly(f.num()), den: self.den.mul(f.den()), ..self.clone() }
    }

    pub fn map_mats(&self, f: impl Fn(&KMat) -> KMat) -> Self {
        RatMatrix { num: self.num.map_coeffs(self.dim, f), ..self.clone() }
    }

    /// Coefficients M_k of M(u) = sum_k M_k u^{-k}, k = 0..=order.
    pub fn series(&self, order: usize) -> Result<Vec<KMat>, RMatrixError> {
        let m = self.den.deg();
        if self.num.degree().map(|d| d > m).unwrap_or(false) {
            return Err(ScalarError::Improper { gap: self.num.degree().unwrap() - m }.into());
        }
        // 1/d(u) = u^{-m} sum_i s_i u^{-i}
        let inv = ratfun_to_series(
            &RatFunU::new(PolyU::constant(ScalarK::one()).mul(&PolyU::u().pow(m as u32)), self.den.clone())?,
            order,
        )?;
        let mut out = vec![KMat::zeros(self.dim, self.dim); order + 1];
        for (j, nj) in self.num.coeffs.iter().enumerate() {
            for (k, slot) in out.iter_mut().enumerate() {
                // u^{j-m-i} = u^{-k}
                let Some(i) = (k + j).checked_sub(m) else { continue };
                if i <= order {
                    *slot = slot.axpy(&inv.coeff(i), nj);
                }
            }
        }
        Ok(out)
    }
}

/// R(u) = I - (zeta/u) P + zeta/(u - zeta kappa) Q.
pub fn r_matrix(spec: &Spec, zeta: &Q) -> RatMatrix {
    let ops = tensor_operators(spec);
    let z = ScalarK::from_q(zeta.clone());
    let zk = ScalarK::from_q(zeta * &spec.kappa);
    let d = ops.p.nrows();
    let u = PolyU::u();
    let u_k = PolyU::linear_root(zk.clone());
    // u(u - zk) I - zeta (u - zk) P + zeta u Q
    let num = MatPoly::scalar_poly(d, &u.mul(&u_k))
        .sub(&MatPoly::new(d, vec![ops.p.clone()]).mul_poly(&u_k.scale(&z)))
        .add(&MatPoly::new(d, vec![ops.q.clone()]).mul_poly(&u.scale(&z)));
    let mut r = RatMatrix { spec: spec.name(), dim: d, den: u.mul(&u_k), num, note: None };
    if zeta.is_zero() {
        r.note = Some("classical point: R(u) = I".into());
    }
    r
}

/// (E_ij (x) E_kl)^{t_1} = theta_ij E_{-j,-i} (x) E_kl, likewise in slot 2.
pub fn partial_transpose_mat(spec: &Spec, m: &KMat, slot: u8) -> Result<KMat, RMatrixError> {
    let nn = spec.big_n;
    if m.nrows() != nn * nn || m.ncols() != nn * nn {
        return Err(RMatrixError::Dim(format!("expected {0} x {0}", nn * nn)));
    }
    if slot != 1 && slot != 2 {
        return Err(RMatrixError::Dim(format!("slot {slot} is not 1 or 2")));
    }
    let idx = spec.indices();
    let trips: Vec<_> = m
        .entries()
        .map(|(r, c, x)| {
            let (i, k) = (idx[r / nn], idx[r % nn]);
            let (j, l) = (idx[c / nn], idx[c % nn]);
            let (i, j, k, l, th) =
                if slot == 1 { (-j, -i, k, l, spec.theta(i, j)) } else { (i, j, -l, -k, spec.theta(k, l)) };
            let y = if th == 1 { x.clone() } else { x.negated() };
            (spec.pos(i) * nn + spec.pos(k), spec.pos(j) * nn + spec.pos(l), y)
        })
        .collect();
    Ok(KMat::from_triplets(nn * nn, nn * nn, trips))
}

pub fn partial_transpose(spec: &Spec, m: &RatMatrix, slot: u8) -> Result<RatMatrix, RMatrixError> {
    let coeffs = m.num.coeffs.iter().map(|c| partial_transpose_mat(spec, c, slot)).collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix { num: MatPoly::new(m.dim, coeffs), ..m.clone() })
}

/// Projectors onto the summands of C^N (x) C^N: trivial, the complement in
/// the P-eigenspace containing Q, and the other P-eigenspace. For N = 2 the
/// middle one vanishes and only two are returned.
pub fn projectors(spec: &Spec) -> Vec<KMat> {
    let ops = tensor_operators(spec);
    let d = ops.p.nrows();
    let nn = ScalarK::int(spec.big_n as i64);
    let half = ScalarK::frac(1, 2);
    let id = KMat::identity(d);
    let sym = id.add(&ops.p).scale(&half);
    let alt = id.sub(&ops.p).scale(&half);
    let p1 = ops.q.scale(&nn.inv().unwrap());
    let (with_q, other) = if spec.is_orthogonal() { (sym, alt) } else { (alt, sym) };
    let p2 = with_q.sub(&p1);
    if spec.big_n == 2 {
        vec![p1, other]
    } else {
        vec![p1, p2, other]
    }
}

fn grid_points(count: usize, start: Q, avoid: impl Fn(&Q) -> bool) -> Vec<ScalarK> {
    let mut out = Vec::with_capacity(count);
    let mut x = start;
    let step = crate::scalar::q(5, 7);
    while out.len() < count {
        if !avoid(&x) {
            out.push(x.clone());
        }
        x += &step;
    }
    out.into_iter().map(ScalarK::from_q).collect()
}

/// Permutation of the last two factors of (C^N)^{(x)3}.
fn swap23(n: usize) -> KMat {
    let mut trips = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                trips.push((a * n * n + c * n + b, a * n * n + b * n + c, ScalarK::one()));
            }
        }
    }
    KMat::from_triplets(n * n * n, n * n * n, trips)
}

/// QYBE for R(u).
pub fn check_qybe(spec: &Spec, zeta: &Q) -> CheckReport {
    check_qybe_matrix(spec, zeta, &r_matrix(spec, zeta))
}

/// R_12(u-v) R_13(u) R_23(v) = R_23(v) R_13(u) R_12(u-v) for any R on C^N (x) C^N.
///
/// Both sides share the denominator d(u-v) d(u) d(v), so the identity is
/// equivalent to a polynomial identity of degree at most 2 deg N in u and
/// in v, checked on a grid of (2 deg N + 1)^2 points away from every pole.
pub fn check_qybe_matrix(spec: &Spec, zeta: &Q, r: &RatMatrix) -> CheckReport {
    let mut rep = CheckReport::new("qybe", "R12 R13 R23 = R23 R13 R12").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    let nn = spec.big_n;
    if r.dim != nn * nn {
        rep.error(format!("R has dimension {}, expected {}", r.dim, nn * nn));
        return rep;
    }
    let deg = r.num.degree().unwrap_or(0);
    let size = 2 * deg + 1;
    rep.set_info("degree_bounds", [2 * deg, 2 * deg]);
    // keep u, v and u - v off the zeros of the denominator
    let is_pole = |x: &Q| r.den.eval(&ScalarK::from_q(x.clone())).is_zero();
    let vs = grid_points(size, crate::scalar::q(-13, 3), |x| is_pole(x));
    let vq: Vec<Q> = vs.iter().map(|x| x.as_rational().cloned().unwrap()).collect();
    let us = grid_points(size, crate::scalar::q(1, 11), |x| is_pole(x) || vq.iter().any(|v| is_pole(&(x - v))));
    let id = KMat::identity(nn);
    let s23 = swap23(nn);
    let pairs: Vec<(ScalarK, ScalarK)> =
        us.iter().flat_map(|u| vs.iter().map(move |v| (u.clone(), v.clone()))).collect();
    let results: Vec<(String, Option<(String, String)>)> = pairs
        .par_iter()
        .map(|(u, v)| {
            let loc = format!("u={u}, v={v}");
            let ruv = r.eval(&u.minus(v)).expect("grid avoids poles");
            let ru = r.eval(u).expect("grid avoids poles");
            let rv = r.eval(v).expect("grid avoids poles");
            let r12 = ruv.kron(&id);
            let r13 = s23.mul(&ru.kron(&id)).mul(&s23);
            let r23 = id.kron(&rv);
            let d = r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12));
            let w = if d.is_zero() { None } else { Some(crate::yangrep::residual(&loc, &d)) };
            (loc, w)
        })
        .collect();
    let mut worst = "0".to_string();
    for (_, w) in results {
        if let Some((_, v)) = &w {
            worst = v.clone();
        }
        rep.record("QYBE", w.is_none(), || w.clone().unwrap());
    }
    rep.set_info("residual", worst);
    rep
}

/// Unitarity R(u) R(-u) = (1 - zeta^2 u^{-2}) I and crossing
/// R(u + zeta kappa)^{t_a} = R(-u) in both slots, as exact identities.
pub fn check_r_identities(spec: &Spec, zeta: &Q) -> CheckReport {
    let mut rep =
        CheckReport::new("r-identities", "unitarity and crossing").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    let r = r_matrix(spec, zeta);
    let z = ScalarK::from_q(zeta.clone());
    let minus = r.scale_var(&ScalarK::int(-1));
    let u2 = PolyU::u().pow(2);
    let target = RatFunU::new(u2.sub(&PolyU::constant(z.times(&z))), u2).unwrap();
    let ident = RatMatrix::constant(spec.name(), &KMat::identity(r.dim)).times_fn(&target);
    let prod = r.mul(&minus).unwrap();
    rep.record("unitarity", prod.same_as(&ident), || ("R(u)R(-u)".into(), "differs from (1-zeta^2/u^2) I".into()));
    let shifted = r.shift(&ScalarK::from_q(zeta * &spec.kappa));
    for slot in [1u8, 2] {
        let t = partial_transpose(spec, &shifted, slot).unwrap();
        rep.record("crossing", t.same_as(&minus), || (format!("slot {slot}"), "R(u+zeta kappa)^t != R(-u)".into()));
        let p = r.mul(&t).unwrap();
        rep.record("crossing-product", p.same_as(&ident), || (format!("slot {slot}"), "product differs".into()));
    }
    rep
}

/// h(u) with h(u) h(u + zeta kappa) = (1 - zeta^2 u^{-2})^{-1}.
pub fn h_series(spec: &Spec, zeta: &Q, order: usize) -> TruncSeriesU {
    let z2 = ScalarK::from_q(zeta * zeta);
    let u2 = PolyU::u().pow(2);
    let s = RatFunU::new(u2.clone(), u2.sub(&PolyU::constant(z2))).unwrap();
    half_shift(&ratfun_to_series(&s, order).unwrap(), &ScalarK::from_q(zeta * &spec.kappa))
}

/// h(u) R(u) against the truncation 1 - zeta u^{-1}(P-Q) + zeta^2/2 u^{-2}(P-Q)^2.
pub fn check_universal_truncation(spec: &Spec, zeta: &Q) -> CheckReport {
    let mut rep =
        CheckReport::new("universal-truncation", "h(u) R(u) to order 2").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    let order = 4;
    let z = ScalarK::from_q(zeta.clone());
    let h = h_series(spec, zeta, order);
    let c = ScalarK::from_q(zeta * &spec.kappa);
    let lhs = h.mul(&series_shift(&h, &c));
    let want = ratfun_to_series(
        &RatFunU::new(PolyU::u().pow(2), PolyU::u().pow(2).sub(&PolyU::constant(z.times(&z)))).unwrap(),
        order,
    )
    .unwrap();
    rep.record("h-hk", lhs == want, || ("h(u)h(u+zeta kappa)".into(), lhs.to_string()));
    let h2 = z.times(&z).times(&ScalarK::frac(1, 2));
    rep.record("h2", h.coeff(2) == h2, || ("h_2".into(), h.coeff(2).to_string()));
    let ops = tensor_operators(spec);
    let pq = ops.p.sub(&ops.q);
    let d = pq.nrows();
    let sq = pq.mul(&pq);
    let kap = ScalarK::from_q(spec.kappa.clone());
    let expect_sq = KMat::identity(d).add(&ops.q.scale(&kap.times(&ScalarK::int(2))));
    rep.record("(P-Q)^2", sq == expect_sq, || ("(P-Q)^2".into(), "differs from I + 2 kappa Q".into()));
    let rs = r_matrix(spec, zeta).series(2).unwrap();
    let hr: Vec<KMat> =
        (0..=2).map(|k| (0..=k).fold(KMat::zeros(d, d), |acc, i| acc.axpy(&h.coeff(i), &rs[k - i]))).collect();
    let trunc = [KMat::identity(d), pq.scale(&z.negated()), sq.scale(&h2)];
    for k in 0..=2 {
        let diff = hr[k].sub(&trunc[k]);
        rep.record("order-2", diff.is_zero(), || crate::yangrep::residual(&format!("u^-{k}"), &diff));
    }
    rep
}

/// Basis of series solutions of the intertwiner equation, with their
/// rational reconstructions.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionSpace {
    pub rank: usize,
    pub degree_bound: usize,
    /// g-intertwiners of V (x) W the solutions are expanded in.
    #[serde(skip)]
    pub commutant: Vec<KMat>,
    /// Per solution, the series coefficient of each commutant element.
    #[serde(skip)]
    pub series: Vec<Vec<TruncSeriesU>>,
    #[serde(skip)]
    pub basis: Vec<RatMatrix>,
    /// Per solution, the rational coefficient of each commutant element.
    #[serde(skip)]
    pub coefficients: Vec<Vec<RatFunU>>,
}

fn vec_of(m: &KMat) -> SVec<ScalarK> {
    let n = m.ncols();
    m.entries().map(|(r, c, x)| (r * n + c, x.clone())).collect()
}

/// Matrix of M -> X M - M X on row-major vectorized d x d matrices.
fn commutator_superop(x: &KMat) -> KMat {
    let d = x.nrows();
    let xt = x.transpose();
    let mut trips = Vec::new();
    // (XM)_{ij} = sum_k X_ik M_kj ; (MX)_{ij} = sum_k M_ik X_kj
    for i in 0..d {
        for j in 0..d {
            let row = i * d + j;
            for (k, v) in x.row(i) {
                trips.push((row, k * d + j, v.clone()));
            }
            for (k, v) in xt.row(j) {
                trips.push((row, i * d + k, v.negated()));
            }
        }
    }
    KMat::from_triplets(d * d, d * d, trips)
}

/// Solution space of the v = 0 specialization of
/// (rho^V_w (x) rho^W)(Delta J(X)) R(w) = R(w) (rho^V_w (x) rho^W)(Delta' J(X))
/// together with [Delta(X), R(w)] = 0, for R(w) = sum_{k <= D} R_k w^{-k}.
pub fn solve_intertwiner(v: &JRep, w: &JRep, bound: usize) -> Result<SolutionSpace, RMatrixError> {
    if *v.spec() != *w.spec() || v.zeta != w.zeta {
        return Err(LieError::SpecMismatch.into());
    }
    if bound < 2 {
        return Err(RMatrixError::Dim("degree bound must be at least 2".into()));
    }
    let spec = v.spec().clone();
    let tensor = v.g.tensor(&w.g)?;
    let d = tensor.dim();
    // commutant of the diagonal action; Chevalley generators generate g
    let gens: Vec<KMat> = chevalley_generators(&spec)
        .iter()
        .flat_map(|c| [c.xp.clone(), c.xm.clone()])
        .map(|x| commutator_superop(&tensor.act(&x)))
        .collect();
    let commutant: Vec<KMat> = crate::linalg::common_kernel(&gens.iter().collect::<Vec<_>>(), d * d)
        .into_iter()
        .map(|vv| KMat::from_triplets(d, d, vv.into_iter().map(|(p, x)| (p / d, p % d, x))))
        .collect();
    let m = commutant.len();
    let (iv, iw) = (KMat::identity(v.dim()), KMat::identity(w.dim()));
    let mut omega = KMat::zeros(d, d);
    for (_, x) in orthonormal_basis(&spec) {
        omega = omega.add(&v.g.act(&x).kron(&w.g.act(&x)));
    }
    let half_z = v.zeta_k().times(&ScalarK::frac(1, 2));
    // [X (x) 1, R_k] + A R_{k-1} - R_{k-1} A' = 0 with
    // A = J_V (x) 1 + 1 (x) J_W + zeta/2 [X (x) 1, Omega], A' likewise with 1 (x) X
    let mut block = Echelon::new(2 * m);
    for k in 0..spec.dim() {
        let x1 = v.g.mats()[k].kron(&iw);
        let x2 = iv.kron(&w.g.mats()[k]);
        let base = v.j[k].kron(&iw).add(&iv.kron(&w.j[k]));
        let a = base.axpy(&half_z, &x1.commutator(&omega));
        let a2 = base.axpy(&half_z, &x2.commutator(&omega));
        let cols: Vec<SVec<ScalarK>> = commutant
            .iter()
            .map(|b| vec_of(&x1.commutator(b)))
            .chain(commutant.iter().map(|b| vec_of(&a.mul(b).sub(&b.mul(&a2)))))
            .collect();
        // transpose the column vectors into equation rows
        let mut rows: std::collections::BTreeMap<usize, Vec<ScalarK>> = Default::default();
        for (c, col) in cols.iter().enumerate() {
            for (p, x) in col {
                rows.entry(*p).or_insert_with(|| vec![ScalarK::zero(); 2 * m])[c] = x.clone();
            }
        }
        for r in rows.values() {
            block.insert(&svec_from_dense(r));
        }
    }
    let block_rows = block.basis();
    // rows for equation k act on (c_k, c_{k-1}); unknowns ordered c_0, c_1, ...
    let system = |top: usize, extra: &[SVec<ScalarK>]| -> Echelon<ScalarK> {
        let mut e = Echelon::new((top + 1) * m);
        for k in 0..=top {
            for r in &block_rows {
                let mut row: SVec<ScalarK> = Vec::new();
                for (c, x) in r {
                    if *c < m {
                        row.push((k * m + c, x.clone()));
                    } else if k > 0 {
                        row.push(((k - 1) * m + c - m, x.clone()));
                    }
                }
                row.sort_by_key(|e| e.0);
                if !row.is_empty() {
                    e.insert(&row);
                }
            }
        }
        for r in extra {
            e.insert(r);
        }
        e
    };
    let dim_s = |top: usize| (top + 1) * m - system(top, &[]).rank();
    let (s2, s1, s0) = (dim_s(bound - 2), dim_s(bound - 1), dim_s(bound));
    let (lower, upper) = (s1 - s2, s0 - s1);
    if lower != upper {
        return Err(RMatrixError::RankUnstable { bound, lower, upper });
    }
    let rank = upper;
    // leading coefficients of the solutions, and their pivots
    let full = system(bound, &[]).nullspace();
    let mut lead = Echelon::new(m);
    for s in &full {
        let c0: SVec<ScalarK> = s.iter().filter(|(c, _)| *c < m).cloned().collect();
        lead.insert(&c0);
    }
    let pivots = lead.pivots();
    // fix the scalar-series freedom: pivot coordinates vanish beyond order 0
    let norm: Vec<SVec<ScalarK>> =
        (1..=bound).flat_map(|k| pivots.iter().map(move |p| vec![(k * m + p, ScalarK::one())])).collect();
    let sols = system(bound, &norm).nullspace();
    let mut ech = Echelon::new((bound + 1) * m);
    for s in &sols {
        ech.insert(s);
    }
    let sols = ech.basis();
    if sols.len() != rank {
        return Err(RMatrixError::RankUnstable { bound, lower: rank, upper: sols.len() });
    }
    let mut series = Vec::with_capacity(rank);
    let mut basis = Vec::with_capacity(rank);
    let mut coefficients = Vec::with_capacity(rank);
    for (idx, s) in sols.iter().enumerate() {
        let dense = crate::linalg::svec_to_dense(s, (bound + 1) * m);
        let per: Vec<TruncSeriesU> =
            (0..m).map(|a| TruncSeriesU::new(bound, (0..=bound).map(|k| dense[k * m + a].clone()).collect())).collect();
        let funcs = per
            .iter()
            .enumerate()
            .map(|(a, ser)| {
                rational_reconstruct(ser, bound / 2).ok_or(RMatrixError::Reconstruction { index: idx, coord: a })
            })
            .collect::<Result<Vec<_>, _>>()?;
        basis.push(RatMatrix::combination(spec.name(), &funcs, &commutant));
        coefficients.push(funcs);
        series.push(per);
    }
    Ok(SolutionSpace { rank, degree_bound: bound, commutant, series, basis, coefficients })
}

/// Coefficients (A, B, C) of M = A I + B P + C Q on C^N (x) C^N, if M has that form.
pub fn abc_coefficients(spec: &Spec, m: &RatMatrix) -> Option<(RatFunU, RatFunU, RatFunU)> {
    let nn = spec.big_n;
    if nn < 3 || m.dim != nn * nn {
        return None;
    }
    let idx = spec.indices();
    let at = |a: i32, b: i32| spec.pos(a) * nn + spec.pos(b);
    let (a, b) = (idx[0], idx[1]);
    let ca = m.entry(at(a, b), at(a, b));
    let cb = m.entry(at(b, a), at(a, b));
    let cc = m.entry(at(a, -a), at(b, -b)).scale(&ScalarK::int(spec.theta(a, b)));
    let ops = tensor_operators(spec);
    let back = RatMatrix::combination(
        spec.name(),
        &[ca.clone(), cb.clone(), cc.clone()],
        &[KMat::identity(nn * nn), ops.p, ops.q],
    );
    back.same_as(m).then_some((ca, cb, cc))
}

/// A zeta = B (-u) and C (u - zeta kappa) = A zeta, the v = 0 form of the
/// constraints singling out R(u) among A I + B P + C Q.
pub fn check_abc_relations(spec: &Spec, zeta: &Q, m: &RatMatrix) -> CheckReport {
    let mut rep =
        CheckReport::new("abc-relations", "A I + B P + C Q constraints").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    let Some((a, b, c)) = abc_coefficients(spec, m) else {
        rep.error("matrix is not of the form A I + B P + C Q");
        return rep;
    };
    let z = RatFunU::constant(ScalarK::from_q(zeta.clone()));
    let u = RatFunU::u();
    let zk = RatFunU::constant(ScalarK::from_q(zeta * &spec.kappa));
    let az = a.times(&z);
    rep.record("A-B", az == b.times(&u.negated()), || ("A zeta".into(), format!("{az} vs {}", b.times(&u.negated()))));
    let lhs = c.times(&u.minus(&zk));
    rep.record("C-A", lhs == az, || ("C(u - zeta kappa)".into(), format!("{lhs} vs {az}")));
    rep
}

/// Whether two matrices agree up to a scalar rational function.
pub fn proportional(a: &RatMatrix, b: &RatMatrix) -> Option<RatFunU> {
    let (r, c, _) = a.num.coeffs.iter().find_map(|m| m.first_nonzero())?;
    let fa = a.entry(r, c);
    let fb = b.entry(r, c);
    let ratio = fb.times(&fa.inv()?);
    a.times_fn(&ratio).same_as(b).then_some(ratio)
}

/// Intertwiners of natural (x) natural: rank 1, spanned by R(u) (sp_2: I - (2 zeta / u) P).
pub fn check_intertwiner_natural(spec: &Spec, zeta: &Q, bound: usize) -> CheckReport {
    let mut out =
        CheckReport::new("intertwiner-natural", "eq PRRP, C:RmcR").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    let v = crate::yangrep::natural_j_rep(spec, zeta);
    let sol = match solve_intertwiner(&v, &v, bound) {
        Ok(s) => s,
        Err(e) => {
            out.error(e.to_string());
            return out;
        }
    };
    out.set_info("rank", sol.rank);
    out.set_info("degree_bound", bound);
    out.record("rank=1", sol.rank == 1, || ("rank".into(), sol.rank.to_string()));
    let Some(b) = sol.basis.first() else { return out };
    let target = if spec.is_sp2() {
        let z2 = ScalarK::from_q(zeta * Q::from_integer(2.into()));
        let nn = spec.big_n;
        RatMatrix::combination(
            spec.name(),
            &[RatFunU::constant(ScalarK::one()), RatFunU::pole(z2.negated(), ScalarK::zero())],
            &[KMat::identity(nn * nn), tensor_operators(spec).p],
        )
    } else {
        r_matrix(spec, zeta)
    };
    out.record("proportional", proportional(b, &target).is_some(), || ("basis[0]".into(), "not proportional".into()));
    if !spec.is_sp2() {
        out.absorb(&check_abc_relations(spec, zeta, b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_lie_algebra, Series};
    use crate::scalar::{q, qi};
    use crate::yangrep::{natural_j_rep, natural_rep, trivial_rep};

    fn spec(s: Series, n: usize) -> Spec {
        build_lie_algebra(s, n).unwrap()
    }

    #[test]
    fn so3_poles() {
        let s = spec(Series::B, 1);
        let r = r_matrix(&s, &qi(1));
        assert!(r.den.eval(&ScalarK::frac(1, 2)).is_zero());
        assert_eq!(r.den.deg(), 2);
        assert!(r.eval(&ScalarK::frac(1, 2)).is_err());
        assert!(r.eval(&ScalarK::zero()).is_err());
        assert!(r_matrix(&s, &qi(0)).note.is_some());
    }

    #[test]
    fn qybe_and_identities() {
        for (sr, n, z) in [(Series::B, 1, qi(1)), (Series::C, 2, q(1, 3)), (Series::C, 1, qi(2))] {
            let s = spec(sr, n);
            assert!(check_qybe(&s, &z).passed());
            assert!(check_r_identities(&s, &z).passed());
            assert!(check_universal_truncation(&s, &z).passed());
        }
    }

    #[test]
    fn wrong_q_term_fails_qybe() {
        let s = spec(Series::B, 2);
        let z = qi(1);
        let ops = tensor_operators(&s);
        let full = r_matrix(&s, &z);
        // with the Q term removed what is left is the Yang matrix, which is a solution
        let u = PolyU::u();
        let u_k = PolyU::linear_root(ScalarK::from_q(s.kappa.clone()));
        let yang = MatPoly::scalar_poly(25, &u.mul(&u_k)).sub(&MatPoly::new(25, vec![ops.p.clone()]).mul_poly(&u_k));
        assert!(check_qybe_matrix(&s, &z, &RatMatrix { num: yang, ..full.clone() }).passed());
        let doubled =
            RatMatrix { num: full.num.add(&MatPoly::new(25, vec![ops.q.clone()]).mul_poly(&u)), ..full.clone() };
        let r = check_qybe_matrix(&s, &z, &doubled);
        assert!(!r.passed());
        assert!(r.witness.is_some());
    }

    #[test]
    fn transpose_and_projectors() {
        for (sr, n) in [(Series::B, 1), (Series::C, 1), (Series::C, 2), (Series::D, 2)] {
            let s = spec(sr, n);
            let ops = tensor_operators(&s);
            assert_eq!(partial_transpose_mat(&s, &ops.p, 1).unwrap(), ops.q);
            assert_eq!(partial_transpose_mat(&s, &ops.p, 2).unwrap(), ops.q);
            let m = ops.omega.add(&ops.p.mul(&ops.q));
            let back = partial_transpose_mat(&s, &partial_transpose_mat(&s, &m, 1).unwrap(), 1).unwrap();
            assert_eq!(back, m);
            let pr = projectors(&s);
            let d = ops.p.nrows();
            let sum = pr.iter().fold(KMat::zeros(d, d), |a, p| a.add(p));
            assert_eq!(sum, KMat::identity(d));
            for (a, pa) in pr.iter().enumerate() {
                for (b, pb) in pr.iter().enumerate() {
                    let prod = pa.mul(pb);
                    assert!(if a == b { prod == *pa } else { prod.is_zero() });
                }
            }
            assert_eq!(pr[0].trace(), ScalarK::one());
            let v = natural_rep(&s);
            let t = v.tensor(&v).unwrap();
            for m in t.mats() {
                for p in &pr {
                    assert!(m.commutator(p).is_zero());
                }
                assert!(m.commutator(&ops.omega).is_zero());
            }
        }
    }

    #[test]
    fn intertwiner_natural() {
        let s = spec(Series::B, 2);
        let z = qi(1);
        let v = natural_j_rep(&s, &z);
        let sol = solve_intertwiner(&v, &v, 6).unwrap();
        assert_eq!(sol.rank, 1);
        let r = r_matrix(&s, &z);
        assert!(proportional(&sol.basis[0], &r).is_some());
        assert!(check_abc_relations(&s, &z, &sol.basis[0]).passed());

        let s = spec(Series::C, 1);
        let v = natural_j_rep(&s, &z);
        let sol = solve_intertwiner(&v, &v, 6).unwrap();
        assert_eq!(sol.rank, 1);
        let ops = tensor_operators(&s);
        let two_z = ScalarK::int(2);
        let target = RatMatrix::combination(
            s.name(),
            &[RatFunU::constant(ScalarK::one()), RatFunU::pole(two_z.negated(), ScalarK::zero())],
            &[KMat::identity(4), ops.p],
        );
        assert!(proportional(&sol.basis[0], &target).is_some());
    }

    #[test]
    fn intertwiner_trivial() {
        let s = spec(Series::C, 2);
        let t = JRep::new(trivial_rep(&s), qi(1), vec![KMat::zeros(1, 1); s.dim()]).unwrap();
        let sol = solve_intertwiner(&t, &t, 4).unwrap();
        assert_eq!(sol.rank, 1);
        assert!(sol.basis[0].same_as(&RatMatrix::constant(s.name(), &KMat::identity(1))));
    }
}
