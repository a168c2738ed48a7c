//! The Lie algebras so_N and sp_N in the F_{ij} basis.
//!
//! Indices run over `-n..=-1, [0], 1..=n` (0 only when N is odd) and are
//! stored at positions `0..N` in that order.

use crate::linalg::{solve_linear, KMat, SMat, SVec};
use crate::report::CheckReport;
use crate::scalar::{fmt_q, q, qi, Ring, ScalarK, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    /// so_{2n+1}
    B,
    /// sp_{2n}
    C,
    /// so_{2n}
    D,
}

impl Series {
    pub fn parse(s: &str) -> Option<Series> {
        match s.trim() {
            "B" | "b" => Some(Series::B),
            "C" | "c" => Some(Series::C),
            "D" | "d" => Some(Series::D),
            _ => None,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A basis label (i, j) of F_{ij}.
pub type Label = (i32, i32);

/// A weight in epsilon coordinates.
pub type Weight = Vec<Q>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("invalid Lie algebra ({series:?}, n = {n}): {reason}")]
    InvalidSpec { series: Series, n: usize, reason: String },
    #[error("index {0} out of range")]
    IndexOutOfRange(i32),
    #[error("operands belong to different Lie algebras")]
    SpecMismatch,
    #[error("label ({0}, {1}) is not a basis label")]
    NotBasis(i32, i32),
}

/// A positive root with its F-basis representative.
#[derive(Debug, Clone)]
pub struct PositiveRoot {
    /// Label (i, j), i < j, of the raising vector F_{ij}.
    pub label: Label,
    pub eps: Weight,
}

/// Static description of g_N.
pub struct LieAlgebraSpec {
    pub series: Series,
    pub n: usize,
    pub big_n: usize,
    pub kappa: Q,
    /// d_0, ..., d_{n-1}
    pub d: Vec<Q>,
    indices: Vec<i32>,
    labels: Vec<Label>,
    label_index: HashMap<Label, usize>,
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<PositiveRoot>,
    pub fundamental_weights: Vec<Weight>,
    /// Highest root, when unique (so_4 has two maximal roots).
    pub highest_root: Option<Weight>,
    /// Coefficients m_i of the highest root in the simple roots.
    pub marks: Option<Vec<Q>>,
    brackets: Vec<Vec<SVec<ScalarK>>>,
}

/// Shared handle to a spec.
pub type Spec = Arc<LieAlgebraSpec>;

impl fmt::Debug for LieAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for LieAlgebraSpec {
    fn eq(&self, o: &Self) -> bool {
        self.series == o.series && self.n == o.n
    }
}

/// JSON summary of a spec.
#[derive(Debug, Clone, Serialize)]
pub struct SpecSummary {
    pub name: String,
    pub series: Series,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub kappa: String,
    pub d: Vec<String>,
    pub simple_roots: Vec<Vec<String>>,
}

fn eps(n: usize, k: i32) -> Weight {
    let mut w = vec![Q::zero(); n];
    if k != 0 {
        let s = if k > 0 { Q::one() } else { -Q::one() };
        w[k.unsigned_abs() as usize - 1] = s;
    }
    w
}

fn wsub(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Standard dot product (eps_i, eps_j) = delta_ij.
pub fn pairing(a: &Weight, b: &Weight) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn build_lie_algebra(series: Series, n: usize) -> Result<Spec, LieError> {
    let bad = |reason: &str| Err(LieError::InvalidSpec { series, n, reason: reason.into() });
    if n == 0 {
        return bad("n must be at least 1");
    }
    if series == Series::D && n < 2 {
        return bad("so_{2n} requires n >= 2");
    }
    let big_n = if series == Series::B { 2 * n + 1 } else { 2 * n };
    let mut indices: Vec<i32> = (1..=n as i32).rev().map(|k| -k).collect();
    if series == Series::B {
        indices.push(0);
    }
    indices.extend(1..=n as i32);
    let kappa = match series {
        Series::C => q(big_n as i64, 2) + Q::one(),
        _ => q(big_n as i64, 2) - Q::one(),
    };
    let mut d = vec![Q::one(); n];
    d[0] = match series {
        Series::B => q(1, 2),
        Series::C => qi(2),
        Series::D => Q::one(),
    };
    let orth = series != Series::C;
    let pos_of = |i: i32| indices.iter().position(|&x| x == i).unwrap();
    let mut labels = Vec::new();
    for &i in &indices {
        for &j in &indices {
            let s = i + j;
            if s > 0 || (!orth && s == 0) {
                labels.push((i, j));
            }
        }
    }
    labels.sort_by_key(|&(i, j)| (pos_of(i), pos_of(j)));
    let label_index: HashMap<Label, usize> = labels.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let mut simple_roots = Vec::with_capacity(n);
    simple_roots.push(match series {
        Series::B => eps(n, -1),
        Series::C => eps(n, -1).iter().map(|x| x * qi(2)).collect(),
        Series::D => wsub(&eps(n, -1), &eps(n, 2)),
    });
    for i in 1..n as i32 {
        simple_roots.push(wsub(&eps(n, i), &eps(n, i + 1)));
    }
    let mut positive_roots = Vec::new();
    for &(i, j) in &labels {
        if pos_of(i) < pos_of(j) {
            positive_roots.push(PositiveRoot { label: (i, j), eps: wsub(&eps(n, i), &eps(n, j)) });
        }
    }
    let half = q(1, 2);
    let mut fundamental_weights = Vec::with_capacity(n);
    let tail = |i: usize| -> Weight { (0..n).map(|k| if k >= i { -Q::one() } else { Q::zero() }).collect() };
    for i in 0..n {
        let w = match (series, i) {
            (Series::B, 0) | (Series::D, 0) => vec![-half.clone(); n],
            (Series::D, 1) => {
                let mut w = vec![-half.clone(); n];
                w[0] = half.clone();
                w
            }
            (Series::C, 0) => tail(0),
            _ => tail(i),
        };
        fundamental_weights.push(w);
    }
    let mut spec = LieAlgebraSpec {
        series,
        n,
        big_n,
        kappa,
        d,
        indices,
        labels,
        label_index,
        simple_roots,
        positive_roots,
        fundamental_weights,
        highest_root: None,
        marks: None,
        brackets: Vec::new(),
    };
    // highest root: the unique positive root of maximal height
    let heights: Vec<(Q, Weight)> = spec
        .positive_roots
        .iter()
        .map(|r| {
            let c = spec.simple_coords(&r.eps).expect("roots are integral combinations");
            (c.iter().sum::<Q>(), r.eps.clone())
        })
        .collect();
    let hmax = heights.iter().map(|h| h.0.clone()).max().unwrap();
    let tops: Vec<&Weight> = heights.iter().filter(|h| h.0 == hmax).map(|h| &h.1).collect();
    if tops.len() == 1 {
        spec.marks = spec.simple_coords(tops[0]);
        spec.highest_root = Some(tops[0].clone());
    }
    let dim = spec.labels.len();
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let (i, j) = spec.labels[a];
            let (k, l) = spec.labels[b];
            let m = spec.f_mat(i, j).commutator(&spec.f_mat(k, l));
            brackets[a][b] = spec.coords_of(&m);
        }
    }
    spec.brackets = brackets;
    Ok(Arc::new(spec))
}

impl LieAlgebraSpec {
    pub fn name(&self) -> String {
        match self.series {
            Series::B => format!("so{}", self.big_n),
            Series::C => format!("sp{}", self.big_n),
            Series::D => format!("so{}", self.big_n),
        }
    }

    pub fn summary(&self) -> SpecSummary {
        SpecSummary {
            name: self.name(),
            series: self.series,
            n: self.n,
            big_n: self.big_n,
            kappa: fmt_q(&self.kappa),
            d: self.d.iter().map(fmt_q).collect(),
            simple_roots: self.simple_roots.iter().map(|w| w.iter().map(fmt_q).collect()).collect(),
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        self.series != Series::C
    }

    pub fn is_sp2(&self) -> bool {
        self.series == Series::C && self.n == 1
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn indices(&self) -> &[i32] {
        &self.indices
    }

    /// Basis labels in PBW order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label_index(&self, l: Label) -> Option<usize> {
        self.label_index.get(&l).copied()
    }

    pub fn has_index(&self, i: i32) -> bool {
        i.unsigned_abs() as usize <= self.n && (i != 0 || self.series == Series::B)
    }

    /// Position of index i in the fixed order.
    pub fn pos(&self, i: i32) -> usize {
        let n = self.n as i32;
        if i < 0 {
            (i + n) as usize
        } else if self.series == Series::B {
            (i + n) as usize
        } else {
            (i + n - 1) as usize
        }
    }

    pub fn theta(&self, i: i32, j: i32) -> i64 {
        if self.is_orthogonal() || (i > 0) == (j > 0) {
            1
        } else {
            -1
        }
    }

    /// Whether (i, j) satisfies i + j (>=) 0.
    pub fn in_basis(&self, i: i32, j: i32) -> bool {
        self.label_index.contains_key(&(i, j))
    }

    /// Writes F_{ij} as c * F_{label}; `None` when F_{ij} = 0.
    pub fn canonical(&self, i: i32, j: i32) -> Option<(usize, i64)> {
        if let Some(k) = self.label_index((i, j)) {
            return Some((k, 1));
        }
        if self.is_orthogonal() && i == -j {
            return None;
        }
        self.label_index((-j, -i)).map(|k| (k, -self.theta(i, j)))
    }

    fn f_mat(&self, i: i32, j: i32) -> KMat {
        let nn = self.big_n;
        SMat::from_triplets(
            nn,
            nn,
            [(self.pos(i), self.pos(j), ScalarK::one()), (self.pos(-j), self.pos(-i), ScalarK::int(-self.theta(i, j)))],
        )
    }

    /// Matrix unit E_{ij} on C^N.
    pub fn e_mat(&self, i: i32, j: i32) -> KMat {
        SMat::unit(self.big_n, self.big_n, self.pos(i), self.pos(j), ScalarK::one())
    }

    /// Coordinates of an N x N matrix of g_N in the F basis.
    fn coords_of(&self, m: &KMat) -> SVec<ScalarK> {
        let mut out = Vec::new();
        for (k, &(i, j)) in self.labels.iter().enumerate() {
            let mut c = m.get(self.pos(i), self.pos(j));
            if !self.is_orthogonal() && i == -j {
                c = c.times(&ScalarK::frac(1, 2));
            }
            if !c.is_zero() {
                out.push((k, c));
            }
        }
        out
    }

    /// Structure constants: [F_a, F_b] in the F basis.
    pub fn bracket_labels(&self, a: usize, b: usize) -> &SVec<ScalarK> {
        &self.brackets[a][b]
    }

    /// Coordinates of the simple-root expansion of a weight, if it exists.
    pub fn simple_coords(&self, w: &Weight) -> Option<Vec<Q>> {
        let n = self.n;
        let rows: Vec<Vec<ScalarK>> =
            (0..n).map(|k| (0..n).map(|i| ScalarK::from_q(self.simple_roots[i][k].clone())).collect()).collect();
        let rhs: Vec<ScalarK> = w.iter().map(|x| ScalarK::from_q(x.clone())).collect();
        solve_linear(&rows, &rhs, n).map(|v| v.into_iter().map(|x| x.as_rational().unwrap().clone()).collect())
    }

    /// (alpha_i, alpha_j).
    pub fn root_pairing(&self, i: usize, j: usize) -> Q {
        pairing(&self.simple_roots[i], &self.simple_roots[j])
    }

    /// Cartan matrix entry 2 (alpha_i, alpha_j) / (alpha_i, alpha_i).
    pub fn cartan(&self, i: usize, j: usize) -> Q {
        qi(2) * self.root_pairing(i, j) / self.root_pairing(i, i)
    }

    /// Nodes for which V(omega_i) carries an evaluation-type J action:
    /// m_i = 1 or m_i = (theta, theta) / (alpha_i, alpha_i).
    pub fn allowed_fundamental_nodes(&self) -> Vec<usize> {
        match (&self.marks, &self.highest_root) {
            (Some(m), Some(th)) => (0..self.n)
                .filter(|&i| {
                    let ratio = pairing(th, th) / self.root_pairing(i, i);
                    m[i].is_one() || m[i] == ratio
                })
                .collect(),
            _ => (0..self.n).collect(),
        }
    }

    /// Weight (eps_i - eps_j) of F_{ij}.
    pub fn label_weight(&self, l: Label) -> Weight {
        wsub(&eps(self.n, l.0), &eps(self.n, l.1))
    }

    pub fn eps(&self, k: i32) -> Weight {
        eps(self.n, k)
    }
}

/// An element of g_N as an N x N matrix.
#[derive(Clone, Debug)]
pub struct GElement {
    pub spec: Spec,
    pub mat: KMat,
}

impl PartialEq for GElement {
    fn eq(&self, o: &Self) -> bool {
        *self.spec == *o.spec && self.mat == o.mat
    }
}

impl GElement {
    pub fn zero(spec: &Spec) -> Self {
        GElement { spec: spec.clone(), mat: SMat::zeros(spec.big_n, spec.big_n) }
    }

    pub fn add(&self, o: &Self) -> Self {
        GElement { spec: self.spec.clone(), mat: self.mat.add(&o.mat) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GElement { spec: self.spec.clone(), mat: self.mat.sub(&o.mat) }
    }

    pub fn scale(&self, s: &ScalarK) -> Self {
        GElement { spec: self.spec.clone(), mat: self.mat.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Coordinates in the F basis (label index, coefficient).
    pub fn coords(&self) -> SVec<ScalarK> {
        self.spec.coords_of(&self.mat)
    }

    pub fn from_coords(spec: &Spec, c: &SVec<ScalarK>) -> Self {
        let mut m = SMat::zeros(spec.big_n, spec.big_n);
        for (k, x) in c {
            let (i, j) = spec.labels[*k];
            m = m.axpy(x, &spec.f_mat(i, j));
        }
        GElement { spec: spec.clone(), mat: m }
    }

    /// Whether X + X^t = 0 for the twisted transposition.
    pub fn is_in_algebra(&self) -> bool {
        self.mat.add(&twisted_transpose(&self.spec, &self.mat)).is_zero()
    }
}

pub fn f_matrix(spec: &Spec, i: i32, j: i32) -> Result<GElement, LieError> {
    for k in [i, j] {
        if !spec.has_index(k) {
            return Err(LieError::IndexOutOfRange(k));
        }
    }
    Ok(GElement { spec: spec.clone(), mat: spec.f_mat(i, j) })
}

/// F_{ij} for valid indices (panics otherwise).
pub fn f(spec: &Spec, i: i32, j: i32) -> GElement {
    f_matrix(spec, i, j).expect("valid index")
}

pub fn bracket(x: &GElement, y: &GElement) -> Result<GElement, LieError> {
    if *x.spec != *y.spec {
        return Err(LieError::SpecMismatch);
    }
    Ok(GElement { spec: x.spec.clone(), mat: x.mat.commutator(&y.mat) })
}

/// (X, Y) = Tr(XY) / 2.
pub fn bilinear_form(x: &GElement, y: &GElement) -> Result<ScalarK, LieError> {
    if *x.spec != *y.spec {
        return Err(LieError::SpecMismatch);
    }
    Ok(x.mat.mul(&y.mat).trace().times(&ScalarK::frac(1, 2)))
}

/// The twisted transposition (E_{ij})^t = theta_{ij} E_{-j,-i} on N x N matrices.
pub fn twisted_transpose<T: Ring>(spec: &LieAlgebraSpec, m: &SMat<T>) -> SMat<T> {
    let idx = spec.indices();
    let trips = m.entries().map(|(a, b, x)| {
        let (i, j) = (idx[a], idx[b]);
        let y = if spec.theta(i, j) == 1 { x.clone() } else { x.negated() };
        (spec.pos(-j), spec.pos(-i), y)
    });
    SMat::from_triplets(m.nrows(), m.ncols(), trips.collect::<Vec<_>>())
}

/// Orthonormal basis indexed by Lambda_N, in label order.
pub fn orthonormal_basis(spec: &Spec) -> Vec<(Label, GElement)> {
    let s2i = ScalarK::sqrt2().inv().unwrap();
    let sm2i = ScalarK::sqrt_m2().inv().unwrap();
    let half = ScalarK::frac(1, 2);
    let mut out = Vec::with_capacity(spec.dim());
    for &(i, j) in spec.labels() {
        let x = if i == j {
            f(spec, i, i)
        } else if i == -j {
            // symplectic only
            let a = f(spec, -i.abs(), i.abs());
            let b = f(spec, i.abs(), -i.abs());
            if i > 0 {
                a.add(&b).scale(&half)
            } else {
                a.sub(&b).scale(&ScalarK::i().times(&half))
            }
        } else {
            let (lo, hi) = if spec.pos(i) < spec.pos(j) { (i, j) } else { (j, i) };
            let a = f(spec, lo, hi);
            let b = f(spec, hi, lo);
            if (i, j) == (lo, hi) {
                a.add(&b).scale(&s2i)
            } else {
                a.sub(&b).scale(&sm2i)
            }
        };
        out.push(((i, j), x));
    }
    out
}

/// Chevalley generators (x_i^+, x_i^-, h_i) of a node.
#[derive(Clone, Debug)]
pub struct Chevalley {
    pub xp: GElement,
    pub xm: GElement,
    pub h: GElement,
}

pub fn chevalley_generators(spec: &Spec) -> Vec<Chevalley> {
    let mut out = Vec::with_capacity(spec.n);
    let s2i = ScalarK::sqrt2().inv().unwrap();
    let (xp0, xm0) = match spec.series {
        Series::B => (f(spec, 0, 1), f(spec, 1, 0)),
        Series::C => (f(spec, -1, 1).scale(&s2i), f(spec, 1, -1).scale(&s2i)),
        Series::D => (f(spec, -1, 2), f(spec, 2, -1)),
    };
    let h0 = bracket(&xp0, &xm0).unwrap();
    out.push(Chevalley { xp: xp0, xm: xm0, h: h0 });
    for i in 1..spec.n as i32 {
        let xp = f(spec, i, i + 1);
        let xm = f(spec, i + 1, i);
        let h = f(spec, i, i).sub(&f(spec, i + 1, i + 1));
        out.push(Chevalley { xp, xm, h });
    }
    out
}

/// Root vectors (x_alpha^+, x_alpha^-) with (x^+, x^-) = 1, one per positive root.
pub fn root_vectors(spec: &Spec) -> Vec<(PositiveRoot, GElement, GElement)> {
    let s2i = ScalarK::sqrt2().inv().unwrap();
    spec.positive_roots
        .iter()
        .map(|r| {
            let (i, j) = r.label;
            let (xp, xm) = (f(spec, i, j), f(spec, j, i));
            if i == -j {
                (r.clone(), xp.scale(&s2i), xm.scale(&s2i))
            } else {
                (r.clone(), xp, xm)
            }
        })
        .collect()
}

/// The operators P, Q and Omega on C^N (x) C^N.
pub struct TensorOperators {
    pub p: KMat,
    pub q: KMat,
    pub omega: KMat,
}

pub fn tensor_operators(spec: &Spec) -> TensorOperators {
    let nn = spec.big_n;
    let idx = spec.indices().to_vec();
    let at = |a: i32, b: i32| spec.pos(a) * nn + spec.pos(b);
    let mut p = Vec::new();
    let mut qt = Vec::new();
    for &i in &idx {
        for &j in &idx {
            // E_ij (x) E_ji maps e_j (x) e_i to e_i (x) e_j
            p.push((at(i, j), at(j, i), ScalarK::one()));
            // theta_ij E_ij (x) E_{-i,-j} maps e_j (x) e_{-j} to e_i (x) e_{-i}
            qt.push((at(i, -i), at(j, -j), ScalarK::int(spec.theta(i, j))));
        }
    }
    let p = SMat::from_triplets(nn * nn, nn * nn, p);
    let qm = SMat::from_triplets(nn * nn, nn * nn, qt);
    let mut omega = SMat::zeros(nn * nn, nn * nn);
    for (_, x) in orthonormal_basis(spec) {
        omega = omega.add(&x.mat.kron(&x.mat));
    }
    TensorOperators { p, q: qm, omega }
}

/// Adjoint action matrix of X on g_N in the F basis.
pub fn ad_matrix(x: &GElement) -> KMat {
    let spec = &x.spec;
    let dim = spec.dim();
    let mut trips = Vec::new();
    for (b, &(k, l)) in spec.labels().iter().enumerate() {
        let y = f(spec, k, l);
        let z = bracket(x, &y).unwrap();
        for (a, c) in z.coords() {
            trips.push((a, b, c));
        }
    }
    SMat::from_triplets(dim, dim, trips)
}

/// P^2 = I, Q^2 = N Q, PQ = QP = +-Q, P^{t_1} = Q and Omega = P - Q.
pub fn check_tensor_identities(spec: &Spec) -> CheckReport {
    let mut out = CheckReport::new("tensor-operators", "eqs P, Q, Omega").with_spec(spec.name());
    let t = tensor_operators(spec);
    let nn = spec.big_n;
    let id = KMat::identity(nn * nn);
    let sign = ScalarK::int(if spec.is_orthogonal() { 1 } else { -1 });
    let q_signed = t.q.scale(&sign);
    let mut rec = |tag: &str, ok: bool| out.record(tag, ok, || (tag.to_string(), "differs".into()));
    rec("P^2=I", t.p.mul(&t.p) == id);
    rec("Q^2=NQ", t.q.mul(&t.q) == t.q.scale(&ScalarK::int(nn as i64)));
    rec("PQ=+-Q", t.p.mul(&t.q) == q_signed);
    rec("QP=+-Q", t.q.mul(&t.p) == q_signed);
    let pt = crate::rmatrix::partial_transpose_mat(spec, &t.p, 1);
    rec("P^t1=Q", pt.map(|m| m == t.q).unwrap_or(false));
    rec("Omega=P-Q", t.omega == t.p.sub(&t.q));
    out
}

/// sum_lambda ad(X_lambda)^2 = 4 kappa on g_N.
pub fn check_casimir(spec: &Spec) -> CheckReport {
    let mut out = CheckReport::new("casimir-adjoint", "Omega, kappa").with_spec(spec.name());
    let dim = spec.dim();
    let mut c = KMat::zeros(dim, dim);
    for (_, x) in orthonormal_basis(spec) {
        let a = ad_matrix(&x);
        c = c.add(&a.mul(&a));
    }
    let want = KMat::scalar(dim, ScalarK::from_q(qi(4) * &spec.kappa));
    out.record("casimir", c == want, || ("ad".into(), format!("{c:?}")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small_specs() -> Vec<Spec> {
        let mut v = Vec::new();
        for n in 1..=3 {
            v.push(build_lie_algebra(Series::B, n).unwrap());
            v.push(build_lie_algebra(Series::C, n).unwrap());
            if n >= 2 {
                v.push(build_lie_algebra(Series::D, n).unwrap());
            }
        }
        v
    }

    #[test]
    fn tensor_and_casimir_checks() {
        for sp in all_small_specs() {
            let r = check_tensor_identities(&sp);
            assert!(r.passed(), "{r}");
            let r = check_casimir(&sp);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn basic_invariants() {
        let b2 = build_lie_algebra(Series::B, 2).unwrap();
        assert_eq!((b2.big_n, b2.dim()), (5, 10));
        assert_eq!(b2.kappa, q(3, 2));
        let c1 = build_lie_algebra(Series::C, 1).unwrap();
        assert_eq!((c1.big_n, c1.kappa.clone(), c1.d[0].clone()), (2, qi(2), qi(2)));
        let d2 = build_lie_algebra(Series::D, 2).unwrap();
        assert_eq!(d2.kappa, qi(1));
        assert_eq!(d2.simple_roots, vec![vec![qi(-1), qi(-1)], vec![qi(1), qi(-1)]]);
        assert!(build_lie_algebra(Series::D, 1).is_err());
        assert!(build_lie_algebra(Series::B, 0).is_err());
        for s in all_small_specs() {
            let nn = s.big_n;
            let expect = if s.is_orthogonal() { nn * (nn - 1) / 2 } else { nn * (nn + 1) / 2 };
            assert_eq!(s.dim(), expect);
        }
    }

    #[test]
    fn f_matrix_examples() {
        let c1 = build_lie_algebra(Series::C, 1).unwrap();
        let m = f(&c1, 1, -1).mat;
        assert_eq!(m, c1.e_mat(1, -1).scale(&ScalarK::int(2)));
        let b2 = build_lie_algebra(Series::B, 2).unwrap();
        assert_eq!(f(&b2, 1, 1).mat, b2.e_mat(1, 1).sub(&b2.e_mat(-1, -1)));
        assert!(f_matrix(&b2, 3, 1).is_err());
        for s in all_small_specs() {
            for &i in s.indices() {
                for &j in s.indices() {
                    let a = f(&s, i, j);
                    let b = f(&s, -j, -i).scale(&ScalarK::int(s.theta(i, j)));
                    assert!(a.add(&b).is_zero());
                    assert!(a.is_in_algebra());
                }
            }
        }
    }

    /// The structure-constant formula evaluated on labels.
    fn formula(s: &Spec, (i, j): Label, (k, l): Label) -> GElement {
        let d = |a: i32, b: i32| a == b;
        let th = ScalarK::int(s.theta(i, j));
        let mut z = GElement::zero(s);
        if d(j, k) {
            z = z.add(&f(s, i, l));
        }
        if d(i, l) {
            z = z.sub(&f(s, k, j));
        }
        if d(j, -l) {
            z = z.add(&f(s, k, -i).scale(&th));
        }
        if d(i, -k) {
            z = z.sub(&f(s, -j, l).scale(&th));
        }
        z
    }

    #[test]
    fn bracket_matches_structure_constants() {
        for s in all_small_specs() {
            for &a in s.labels() {
                for &b in s.labels() {
                    let lhs = bracket(&f(&s, a.0, a.1), &f(&s, b.0, b.1)).unwrap();
                    assert_eq!(lhs, formula(&s, a, b), "{} {:?} {:?}", s.name(), a, b);
                }
            }
        }
        let b2 = build_lie_algebra(Series::B, 2).unwrap();
        assert_eq!(bracket(&f(&b2, 1, 1), &f(&b2, 1, 2)).unwrap(), f(&b2, 1, 2));
        assert_eq!(bracket(&f(&b2, 1, 2), &f(&b2, 2, 1)).unwrap(), f(&b2, 1, 1).sub(&f(&b2, 2, 2)));
    }

    #[test]
    fn jacobi_and_invariance() {
        for s in all_small_specs() {
            if s.n > 2 {
                continue;
            }
            let basis: Vec<GElement> = s.labels().iter().map(|&(i, j)| f(&s, i, j)).collect();
            for x in &basis {
                for y in &basis {
                    let xy = bracket(x, y).unwrap();
                    assert!(xy.add(&bracket(y, x).unwrap()).is_zero());
                    for z in &basis {
                        let j1 = bracket(x, &bracket(y, z).unwrap()).unwrap();
                        let j2 = bracket(y, &bracket(z, x).unwrap()).unwrap();
                        let j3 = bracket(z, &xy).unwrap();
                        assert!(j1.add(&j2).add(&j3).is_zero());
                        let lhs = bilinear_form(&xy, z).unwrap();
                        let rhs = bilinear_form(y, &bracket(x, z).unwrap()).unwrap();
                        assert!(lhs.plus(&rhs).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn form_values() {
        let b2 = build_lie_algebra(Series::B, 2).unwrap();
        assert_eq!(bilinear_form(&f(&b2, 1, 2), &f(&b2, 2, 1)).unwrap(), ScalarK::int(1));
        assert!(bilinear_form(&f(&b2, 1, 1), &f(&b2, 2, 2)).unwrap().is_zero());
        let c2 = build_lie_algebra(Series::C, 2).unwrap();
        assert_eq!(bilinear_form(&f(&c2, 1, -1), &f(&c2, -1, 1)).unwrap(), ScalarK::int(2));
    }

    #[test]
    fn orthonormal_gram_is_identity() {
        for s in all_small_specs() {
            let b = orthonormal_basis(&s);
            assert_eq!(b.len(), s.dim());
            for (a, (_, x)) in b.iter().enumerate() {
                for (c, (_, y)) in b.iter().enumerate() {
                    let v = bilinear_form(x, y).unwrap();
                    let e = if a == c { ScalarK::one() } else { ScalarK::zero() };
                    assert_eq!(v, e, "{} {} {}", s.name(), a, c);
                }
            }
        }
        let c1 = build_lie_algebra(Series::C, 1).unwrap();
        let b = orthonormal_basis(&c1);
        let x1 = &b.iter().find(|(l, _)| *l == (1, -1)).unwrap().1;
        assert_eq!(*x1, f(&c1, -1, 1).add(&f(&c1, 1, -1)).scale(&ScalarK::frac(1, 2)));
    }

    #[test]
    fn chevalley_relations() {
        for s in all_small_specs() {
            let ch = chevalley_generators(&s);
            for (i, ci) in ch.iter().enumerate() {
                assert_eq!(bilinear_form(&ci.xp, &ci.xm).unwrap(), ScalarK::one());
                assert_eq!(bracket(&ci.xp, &ci.xm).unwrap(), ci.h);
                for (j, cj) in ch.iter().enumerate() {
                    let a = ScalarK::from_q(s.root_pairing(i, j));
                    assert_eq!(bracket(&ci.h, &cj.xp).unwrap(), cj.xp.scale(&a));
                    assert_eq!(bracket(&ci.h, &cj.xm).unwrap(), cj.xm.scale(&a.negated()));
                    if i != j {
                        assert!(bracket(&ci.xp, &cj.xm).unwrap().is_zero());
                    }
                }
            }
        }
        let b2 = build_lie_algebra(Series::B, 2).unwrap();
        let ch = chevalley_generators(&b2);
        assert_eq!(ch[0].xp, f(&b2, 0, 1));
        assert_eq!(ch[0].h, f(&b2, 1, 1).scale(&ScalarK::int(-1)));
        let c2 = build_lie_algebra(Series::C, 2).unwrap();
        assert_eq!(chevalley_generators(&c2)[0].h, f(&c2, 1, 1).scale(&ScalarK::int(-2)));
    }

    #[test]
    fn weights_are_dual_to_coroots() {
        for s in all_small_specs() {
            for i in 0..s.n {
                for j in 0..s.n {
                    let a = &s.simple_roots[j];
                    let v = qi(2) * pairing(&s.fundamental_weights[i], a) / pairing(a, a);
                    assert_eq!(v, if i == j { qi(1) } else { qi(0) }, "{} {} {}", s.name(), i, j);
                }
            }
        }
    }

    #[test]
    fn marks_and_allowed_nodes() {
        for n in 1..=4usize {
            let b = build_lie_algebra(Series::B, n).unwrap();
            let mut expect = vec![0];
            if n >= 2 {
                expect.push(n - 1);
            }
            assert_eq!(b.allowed_fundamental_nodes(), expect, "B{}", n);
            let c = build_lie_algebra(Series::C, n).unwrap();
            assert_eq!(c.allowed_fundamental_nodes(), (0..n).collect::<Vec<_>>());
            if n >= 2 {
                let d = build_lie_algebra(Series::D, n).unwrap();
                let mut expect = vec![0, 1];
                if n >= 3 {
                    expect.push(n - 1);
                }
                expect.dedup();
                assert_eq!(d.allowed_fundamental_nodes(), expect, "D{}", n);
            }
        }
        let b3 = build_lie_algebra(Series::B, 3).unwrap();
        assert_eq!(b3.highest_root.clone().unwrap(), vec![qi(0), qi(-1), qi(-1)]);
        // B-series: m_i = 1 only for i = n - 1
        assert_eq!(b3.marks.clone().unwrap(), vec![qi(2), qi(2), qi(1)]);
        let c3 = build_lie_algebra(Series::C, 3).unwrap();
        assert_eq!(c3.highest_root.clone().unwrap(), vec![qi(0), qi(0), qi(-2)]);
        assert!(build_lie_algebra(Series::D, 2).unwrap().highest_root.is_none());
    }

    #[test]
    fn tensor_operator_identities() {
        for s in all_small_specs() {
            let t = tensor_operators(&s);
            let nn = s.big_n;
            let id = SMat::identity(nn * nn);
            assert_eq!(t.p.mul(&t.p), id);
            assert_eq!(t.q.mul(&t.q), t.q.scale(&ScalarK::int(nn as i64)));
            let sign = if s.is_orthogonal() { 1 } else { -1 };
            assert_eq!(t.p.mul(&t.q), t.q.scale(&ScalarK::int(sign)));
            assert_eq!(t.q.mul(&t.p), t.q.scale(&ScalarK::int(sign)));
            assert_eq!(t.omega, t.p.sub(&t.q));
        }
        let c1 = build_lie_algebra(Series::C, 1).unwrap();
        let t = tensor_operators(&c1);
        assert_eq!(t.q, SMat::identity(4).sub(&t.p));
    }

    #[test]
    fn casimir_on_adjoint() {
        for s in all_small_specs() {
            let mut c = SMat::zeros(s.dim(), s.dim());
            for (_, x) in orthonormal_basis(&s) {
                let a = ad_matrix(&x);
                c = c.add(&a.mul(&a));
            }
            let four_kappa = ScalarK::from_q(qi(4) * &s.kappa);
            assert_eq!(c, SMat::scalar(s.dim(), four_kappa), "{}", s.name());
        }
    }
}
