//! Highest weights and Drinfeld polynomials on the current and RTT sides,
//! the substitution relating the two tuples, and the modules C^{N,m}.

use crate::liealg::{Series, Spec};
use crate::linalg::{common_kernel, solve_linear, svec_get, Echelon, KMat, SVec};
use crate::report::CheckReport;
use crate::scalar::{fmt_q, series_shift, PolyU, Ring, ScalarK, TruncSeriesU, Q};
use crate::yangrep::{cyclic_span, half_shift, rtt_natural_rep, rtt_shift, rtt_tensor, CurRep, RTTRep, RepError};
use num_traits::Zero;
use serde::Serialize;

/// Largest ambient dimension N^m accepted by [`build_cnm`].
pub const CNM_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DrinfeldError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("series must start with 1")]
    ConstantTerm,
    #[error("not a highest weight module in the stored range: {0}")]
    NotHighestWeight(String),
    #[error("no monic polynomial of degree {degree} fits series {index} (checked to order {order})")]
    Inconsistent { index: usize, degree: usize, order: usize },
    #[error("degree of polynomial {index} is not a nonnegative integer: {value}")]
    Degree { index: usize, value: String },
    #[error("series {index} determines no unique polynomial at order {order}")]
    Underdetermined { index: usize, order: usize },
    #[error("tuple side does not match the translation direction")]
    Side,
    #[error("ambient dimension {0} exceeds the budget {CNM_BUDGET}")]
    Budget(usize),
    #[error("m must satisfy 1 <= m <= n, got {0}")]
    BadM(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cur,
    Rtt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    RttToCur,
    CurToRtt,
}

/// Monic polynomials: Q_0..Q_{n-1} on the current side, P_1..P_n on the RTT side.
#[derive(Debug, Clone, PartialEq)]
pub struct DrinfeldTuple {
    pub side: Side,
    pub zeta: Q,
    pub polys: Vec<PolyU>,
}

impl DrinfeldTuple {
    /// All polynomials 1 except `u - a` in slot `k`.
    pub fn fundamental(side: Side, zeta: &Q, n: usize, k: usize, a: &Q) -> Self {
        let mut polys = vec![PolyU::one(); n];
        polys[k] = PolyU::linear_root(ScalarK::from_q(a.clone()));
        DrinfeldTuple { side, zeta: zeta.clone(), polys }
    }

    /// Q(u - b) for every polynomial.
    pub fn shifted(&self, b: &ScalarK) -> Self {
        DrinfeldTuple { polys: self.polys.iter().map(|p| p.shift(&b.negated())).collect(), ..self.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let polys: Vec<Vec<String>> =
            self.polys.iter().map(|p| p.coeffs().iter().map(|c| c.to_string()).collect()).collect();
        serde_json::json!({ "side": self.side, "polys": polys })
    }
}

#[derive(Debug, Clone)]
pub enum Weights {
    /// lambda_i^r, [i][r].
    Cur(Vec<Vec<ScalarK>>),
    /// lambda_k(u) in position order of the indices -n..n.
    Rtt(Vec<TruncSeriesU>),
}

#[derive(Debug, Clone)]
pub struct HighestWeightData {
    pub zeta: Q,
    pub weights: Weights,
    pub vector: SVec<ScalarK>,
}

/// The s with s(u) s(u + c) = q(u) and s = 1 + O(u^{-1}).
pub fn solve_half_shift(q: &TruncSeriesU, c: &Q, order: usize) -> Result<TruncSeriesU, DrinfeldError> {
    if !q.coeff(0).is_one() {
        return Err(DrinfeldError::ConstantTerm);
    }
    Ok(half_shift(&q.truncate(order), &ScalarK::from_q(c.clone())))
}

/// b = d_i a + (zeta d_i / 2)(kappa - d_i), the J(h_i) eigenvalue on the
/// highest weight vector of V(i; a). J(X) itself acts by (b / d_i) X.
pub fn fundamental_b(spec: &Spec, zeta: &Q, i: usize, a: &Q) -> Q {
    let d = &spec.d[i];
    d * a + zeta * d / Q::from_integer(2.into()) * (&spec.kappa - d)
}

fn columns(m: &KMat) -> Vec<SVec<ScalarK>> {
    m.transpose().rows().to_vec()
}

/// Highest weight vector of a module with 1-dimensional top: the span L of
/// all lowering images has codimension 1, the Cartan weights are read on
/// V / L, and the vector spans the corresponding joint eigenspace.
fn top_vector(
    dim: usize,
    raising: &[&KMat],
    lowering: &[&KMat],
    cartan: &[&KMat],
) -> Result<(SVec<ScalarK>, Vec<ScalarK>), DrinfeldError> {
    let mut low = Echelon::new(dim);
    for m in lowering {
        for c in columns(m) {
            if !c.is_empty() {
                low.insert(&c);
            }
        }
    }
    if low.rank() + 1 != dim {
        return Err(DrinfeldError::NotHighestWeight(format!("lowering images have codimension {}", dim - low.rank())));
    }
    let pivots = low.pivots();
    let free = (0..dim).find(|c| !pivots.contains(c)).expect("codimension one");
    let v: SVec<ScalarK> = vec![(free, ScalarK::one())];
    let mut weights = Vec::with_capacity(cartan.len());
    for h in cartan {
        let r = low.reduce(&h.mul_vec(&v));
        let lam = svec_get(&r, free).cloned().unwrap_or_else(ScalarK::zero);
        weights.push(lam);
    }
    let shifted: Vec<KMat> = cartan.iter().zip(&weights).map(|(h, l)| h.sub(&KMat::scalar(dim, l.clone()))).collect();
    let kernel = common_kernel(&shifted.iter().collect::<Vec<_>>(), dim);
    if kernel.len() != 1 {
        return Err(DrinfeldError::NotHighestWeight(format!("top weight space has dimension {}", kernel.len())));
    }
    let xi = kernel.into_iter().next().unwrap();
    if let Some(k) = raising.iter().position(|m| !m.mul_vec(&xi).is_empty()) {
        return Err(DrinfeldError::NotHighestWeight(format!("raising operator {k} does not kill the top vector")));
    }
    Ok((xi, weights))
}

fn eigenvalue(m: &KMat, v: &SVec<ScalarK>) -> Option<ScalarK> {
    let w = m.mul_vec(v);
    let (p, x) = v.first()?;
    let c = svec_get(&w, *p).cloned().unwrap_or_else(ScalarK::zero).times(&x.inv()?);
    (w == crate::linalg::svec_scale(v, &c)).then_some(c)
}

/// x_{ir}^+ xi = 0 and h_{ir} xi = lambda_i^r xi for all stored r.
pub fn highest_weight_cur(rep: &CurRep) -> Result<HighestWeightData, DrinfeldError> {
    let top = rep.top();
    let n = rep.spec.n;
    let raising: Vec<&KMat> =
        (0..n).flat_map(|i| (0..=top).map(move |r| (i, r))).map(|(i, r)| rep.x(1, i, r)).collect();
    let lowering: Vec<&KMat> =
        (0..n).flat_map(|i| (0..=top).map(move |r| (i, r))).map(|(i, r)| rep.x(-1, i, r)).collect();
    let cartan: Vec<&KMat> = (0..n).map(|i| &rep.h[i][0]).collect();
    let (xi, _) = top_vector(rep.dim, &raising, &lowering, &cartan)?;
    let mut table = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(top + 1);
        for r in 0..=top {
            let lam = eigenvalue(&rep.h[i][r], &xi).ok_or_else(|| {
                DrinfeldError::NotHighestWeight(format!("h_{{{i},{r}}} does not preserve the top line"))
            })?;
            row.push(lam);
        }
        table.push(row);
    }
    Ok(HighestWeightData { zeta: rep.zeta.clone(), weights: Weights::Cur(table), vector: xi })
}

/// t_{kl}(u) xi = 0 for k < l and t_{kk}(u) xi = lambda_k(u) xi to the stored order.
pub fn highest_weight_rtt(rep: &RTTRep) -> Result<HighestWeightData, DrinfeldError> {
    let spec = &rep.spec;
    let idx = spec.indices().to_vec();
    let nn = spec.big_n;
    let t = rep.t_coeffs();
    let raw = rep.raw_coeffs();
    let at = |k: usize, l: usize| k * nn + l;
    let mut raising = Vec::new();
    let mut lowering = Vec::new();
    for k in 0..nn {
        for l in 0..nn {
            for r in 1..=rep.order {
                if k < l {
                    raising.push(&t[at(k, l)][r]);
                } else if k > l {
                    lowering.push(&t[at(k, l)][r]);
                }
            }
        }
    }
    let cartan: Vec<&KMat> = (1..=spec.n as i32).map(|k| &t[at(spec.pos(k), spec.pos(k))][1]).collect();
    let (xi, _) = top_vector(rep.dim, &raising, &lowering, &cartan)?;
    let mut lambdas = Vec::with_capacity(nn);
    for (p, k) in idx.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(rep.order + 1);
        for r in 0..=rep.order {
            let lam = eigenvalue(&raw[at(p, p)][r], &xi).ok_or_else(|| {
                DrinfeldError::NotHighestWeight(format!("t_{{{k},{k}}} does not preserve the top line"))
            })?;
            coeffs.push(lam);
        }
        lambdas.push(TruncSeriesU::new(rep.order, coeffs));
    }
    Ok(HighestWeightData { zeta: rep.zeta.clone(), weights: Weights::Rtt(lambdas), vector: xi })
}

/// The monic P of the given degree with P(u + c) = rho(u) P(u) to the order of rho.
pub fn poly_from_ratio(rho: &TruncSeriesU, c: &ScalarK, degree: usize, index: usize) -> Result<PolyU, DrinfeldError> {
    let k = rho.order();
    // A_j(x) = (u + c)^j u^{-deg} - rho(x) u^{j - deg} as series in x = 1/u
    let basis: Vec<TruncSeriesU> = (0..=degree)
        .map(|j| {
            let mut shifted = vec![ScalarK::zero(); k + 1];
            let mut plain = vec![ScalarK::zero(); k + 1];
            let mut binom = ScalarK::one();
            // (u + c)^j = sum_t C(j,t) c^{j-t} u^t
            for t in (0..=j).rev() {
                let e = degree - t;
                if e <= k {
                    shifted[e] = binom.times(&c.pow((j - t) as u32));
                }
                if t > 0 {
                    binom =
                        binom.times(&ScalarK::int(t as i64)).times(&ScalarK::int((j - t + 1) as i64).inv().unwrap());
                }
            }
            if degree - j <= k {
                plain[degree - j] = ScalarK::one();
            }
            TruncSeriesU::new(k, shifted).sub(&rho.mul(&TruncSeriesU::new(k, plain)))
        })
        .collect();
    let rows: Vec<Vec<ScalarK>> = (0..=k).map(|m| (0..degree).map(|j| basis[j].coeff(m)).collect()).collect();
    let rhs: Vec<ScalarK> = (0..=k).map(|m| basis[degree].coeff(m).negated()).collect();
    let mut ech = Echelon::new(degree);
    for r in &rows {
        ech.insert(&crate::linalg::svec_from_dense(r));
    }
    let sol = solve_linear(&rows, &rhs, degree).ok_or(DrinfeldError::Inconsistent { index, degree, order: k })?;
    if ech.rank() < degree {
        return Err(DrinfeldError::Underdetermined { index, order: k });
    }
    let mut coeffs = sol;
    coeffs.push(ScalarK::one());
    Ok(PolyU::new(coeffs))
}

fn degree_of(lead: &ScalarK, c: &ScalarK, index: usize) -> Result<usize, DrinfeldError> {
    let bad = || DrinfeldError::Degree { index, value: lead.to_string() };
    let x = lead.times(&c.inv().ok_or_else(bad)?);
    let q = x.as_rational().ok_or_else(bad)?;
    if !q.is_integer() || *q < Q::zero() {
        return Err(bad());
    }
    q.to_integer().try_into().map_err(|_| bad())
}

/// The pair (k0, k1) whose ratio determines P_1.
fn node_pair(spec: &Spec) -> (i32, i32) {
    match spec.series {
        Series::B => (0, 1),
        Series::C => (-1, 1),
        Series::D => (-1, 2),
    }
}

/// Reconstructs the Drinfeld tuple from highest weight data.
///
/// Current side: 1 + zeta sum_r lambda_i^r u^{-r-1} = Q_i(u + zeta d_i) / Q_i(u).
/// RTT side: lambda_{k-1}/lambda_k = P_k(u + zeta)/P_k(u) for k >= 2 and
/// lambda_{k0}/lambda_{k1} = P_1(u + zeta d_0)/P_1(u).
pub fn tuple_from_weights(hw: &HighestWeightData, spec: &Spec) -> Result<DrinfeldTuple, DrinfeldError> {
    let z = ScalarK::from_q(hw.zeta.clone());
    match &hw.weights {
        Weights::Cur(table) => {
            let mut polys = Vec::with_capacity(spec.n);
            for (i, row) in table.iter().enumerate() {
                let mut coeffs = vec![ScalarK::one()];
                coeffs.extend(row.iter().map(|l| l.times(&z)));
                let s = TruncSeriesU::new(row.len(), coeffs);
                let c = z.times(&ScalarK::from_q(spec.d[i].clone()));
                let deg = degree_of(&s.coeff(1), &c, i)?;
                polys.push(poly_from_ratio(&s, &c, deg, i)?);
            }
            Ok(DrinfeldTuple { side: Side::Cur, zeta: hw.zeta.clone(), polys })
        }
        Weights::Rtt(lams) => {
            let lam = |k: i32| &lams[spec.pos(k)];
            let mut polys = Vec::with_capacity(spec.n);
            let (k0, k1) = node_pair(spec);
            let c0 = z.times(&ScalarK::from_q(spec.d[0].clone()));
            let mut pairs = vec![(k0, k1, c0)];
            for k in 2..=spec.n as i32 {
                pairs.push((k - 1, k, z.clone()));
            }
            for (idx, (a, b, c)) in pairs.into_iter().enumerate() {
                let rho = lam(a).div(lam(b)).map_err(|_| DrinfeldError::ConstantTerm)?;
                let deg = degree_of(&rho.coeff(1), &c, idx)?;
                polys.push(poly_from_ratio(&rho, &c, deg, idx)?);
            }
            Ok(DrinfeldTuple { side: Side::Rtt, zeta: hw.zeta.clone(), polys })
        }
    }
}

/// Argument offsets s_i with Q_i(u) = P_{i+1}(u + zeta s_i).
pub fn translation_offsets(spec: &Spec) -> Vec<Q> {
    let n = Q::from_integer((spec.n as i64).into());
    let two = Q::from_integer(2.into());
    (0..spec.n)
        .map(|i| {
            if i == 0 {
                match spec.series {
                    Series::B => &spec.kappa + Q::new(1.into(), 4.into()),
                    _ => spec.kappa.clone(),
                }
            } else {
                (&n + &spec.kappa - Q::from_integer((i as i64).into())) / &two
            }
        })
        .collect()
}

pub fn translate_tuple(t: &DrinfeldTuple, spec: &Spec, dir: Direction) -> Result<DrinfeldTuple, DrinfeldError> {
    let (from, to, sign) = match dir {
        Direction::RttToCur => (Side::Rtt, Side::Cur, 1),
        Direction::CurToRtt => (Side::Cur, Side::Rtt, -1),
    };
    if t.side != from || t.polys.len() != spec.n {
        return Err(DrinfeldError::Side);
    }
    let z = ScalarK::from_q(t.zeta.clone());
    let polys = t
        .polys
        .iter()
        .zip(translation_offsets(spec))
        .map(|(p, s)| p.shift(&z.times(&ScalarK::from_q(s)).times(&ScalarK::int(sign))))
        .collect();
    Ok(DrinfeldTuple { side: to, zeta: t.zeta.clone(), polys })
}

/// Text form of the substitutions used by [`translate_tuple`].
pub fn translation_report(spec: &Spec) -> Vec<String> {
    translation_offsets(spec)
        .iter()
        .enumerate()
        .map(|(i, s)| format!("Q_{i}(u) = P_{}(u + {})", i + 1, fmt_q(s)))
        .collect()
}

/// C^{N,m} with its generating vector xi_m.
#[derive(Clone, Debug)]
pub struct CnmModule {
    pub m: usize,
    pub rep: RTTRep,
    pub xi: SVec<ScalarK>,
}

fn permutations(m: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(rest: Vec<usize>, cur: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if rest.is_empty() {
            out.push((cur.clone(), sign));
            return;
        }
        for k in 0..rest.len() {
            let mut r = rest.clone();
            let x = r.remove(k);
            cur.push(x);
            go(r, cur, if k % 2 == 0 { sign } else { -sign }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go((0..m).collect(), &mut Vec::new(), 1, &mut out);
    out
}

/// The submodule of C^N (x) (C^N)_{-1} (x) ... (x) (C^N)_{-m+1} generated by
/// xi_m = sum_sigma sign(sigma) e_{-n-1+sigma(1)} (x) ... (x) e_{-n-1+sigma(m)}.
pub fn build_cnm(spec: &Spec, zeta: &Q, m: usize, order: usize) -> Result<CnmModule, DrinfeldError> {
    if m == 0 || m > spec.n {
        return Err(DrinfeldError::BadM(m));
    }
    let nn = spec.big_n;
    let total = nn.checked_pow(m as u32).unwrap_or(usize::MAX);
    if total > CNM_BUDGET {
        return Err(DrinfeldError::Budget(total));
    }
    let nat = rtt_natural_rep(spec, zeta, order);
    let z = ScalarK::from_q(zeta.clone());
    let mut rep = nat.clone();
    for k in 1..m {
        // (C^N)_{-k}: T(u) -> T(u + k), in units of zeta
        let factor = rtt_shift(&nat, &z.times(&ScalarK::int(-(k as i64))));
        rep = rtt_tensor(&rep, &factor)?;
    }
    let n = spec.n as i32;
    let mut xi: SVec<ScalarK> = Vec::new();
    for (perm, sign) in permutations(m) {
        let mut pos = 0usize;
        for s in &perm {
            // sigma(k) ranges over 1..m, index -n-1+sigma(k)
            pos = pos * nn + spec.pos(-n + *s as i32);
        }
        xi.push((pos, ScalarK::int(sign)));
    }
    xi.sort_by_key(|e| e.0);
    let mats: Vec<KMat> = rep.t_coeffs().into_iter().flat_map(|v| v.into_iter().skip(1)).collect();
    let span = cyclic_span(&mats, &[xi.clone()], rep.dim);
    let sub = rep.restrict(&span)?;
    let coords = span.coordinates(&xi).expect("seed lies in its span");
    let xi = coords.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
    Ok(CnmModule { m, rep: sub, xi })
}

/// g_m(u)^{-1} lambda_i(u) for C^{N,m}, as rational data: (u - k + m)/(u - k + m - 1),
/// 1 or (u - 1)/u by range of i, all in units of zeta.
pub fn cnm_expected_weights(spec: &Spec, zeta: &Q, m: usize, order: usize) -> Vec<TruncSeriesU> {
    let z = ScalarK::from_q(zeta.clone());
    let g = crate::yangrep::g_series(spec, order).scale_var_inv(&z);
    let mut gm = TruncSeriesU::one(order);
    for k in 0..m {
        gm = gm.mul(&series_shift(&g, &z.times(&ScalarK::int(k as i64))));
    }
    let n = spec.n as i32;
    let mi = m as i32;
    let kap = ScalarK::from_q(spec.kappa.clone());
    let mk = |a: ScalarK, b: ScalarK| {
        // (u - a z)/(u - b z) as a series
        let f = crate::scalar::RatFunU::new(PolyU::linear_root(a.times(&z)), PolyU::linear_root(b.times(&z))).unwrap();
        crate::scalar::ratfun_to_series(&f, order).unwrap()
    };
    spec.indices()
        .iter()
        .map(|&i| {
            let base = if i <= -n + mi - 1 {
                mk(kap.minus(&ScalarK::int(m as i64)), kap.minus(&ScalarK::int(m as i64 - 1)))
            } else if i <= n - mi {
                TruncSeriesU::one(order)
            } else {
                mk(ScalarK::one(), ScalarK::zero())
            };
            gm.mul(&base)
        })
        .collect()
}

/// Highest weight of C^{N,m} against g_m(u) times the rational factors above.
pub fn check_cnm_weights(spec: &Spec, zeta: &Q, m: usize, order: usize) -> CheckReport {
    let mut out =
        CheckReport::new(format!("cnm-weights-m{m}"), "eq R-CN,m").with_spec(spec.name()).with_zeta(fmt_q(zeta));
    out.set_info("order", order);
    let hw = match build_cnm(spec, zeta, m, order).and_then(|c| {
        out.set_info("dim", c.rep.dim);
        highest_weight_rtt(&c.rep)
    }) {
        Ok(hw) => hw,
        Err(e) => {
            out.error(e.to_string());
            return out;
        }
    };
    let Weights::Rtt(got) = &hw.weights else { unreachable!() };
    let want = cnm_expected_weights(spec, zeta, m, order);
    for ((g, w), k) in got.iter().zip(&want).zip(spec.indices()) {
        out.record("lambda", g == w, || (format!("k = {k}"), format!("{g:?}")));
    }
    out
}
