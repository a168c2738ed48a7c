//! Exact arithmetic in U(g_N) on PBW normal forms.
//!
//! The PBW order is the label order of [`LieAlgebraSpec::labels`]:
//! lexicographic in (i, j) under the index position map. A monomial is a
//! weakly increasing sequence of label indices.

use crate::liealg::{GElement, Label, LieError, Series, Spec};
use crate::linalg::KMat;
use crate::scalar::{Ring, ScalarK};
use crate::yangrep::GRep;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub type Monomial = Vec<u16>;
type Terms = BTreeMap<Monomial, ScalarK>;

/// Straightening context for one Lie algebra, with a memo of
/// `monomial * generator` products.
pub struct UAlgebra {
    pub spec: Spec,
    memo: Mutex<HashMap<(Monomial, u16), Arc<Terms>>>,
}

impl fmt::Debug for UAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({})", self.spec.name())
    }
}

fn add_scaled(acc: &mut Terms, src: &Terms, s: &ScalarK) {
    for (m, c) in src {
        let v = c.times(s);
        match acc.get_mut(m) {
            Some(x) => {
                x.add_to(&v);
                if x.is_zero() {
                    acc.remove(m);
                }
            }
            None => {
                if !v.is_zero() {
                    acc.insert(m.clone(), v);
                }
            }
        }
    }
}

impl UAlgebra {
    pub fn new(spec: &Spec) -> Arc<UAlgebra> {
        Arc::new(UAlgebra { spec: spec.clone(), memo: Mutex::new(HashMap::new()) })
    }

    /// Shared algebra per (series, n), so memo tables are reused.
    pub fn for_spec(spec: &Spec) -> Arc<UAlgebra> {
        static CACHE: OnceLock<Mutex<HashMap<(Series, usize), Arc<UAlgebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = cache.lock().unwrap();
        g.entry((spec.series, spec.n)).or_insert_with(|| UAlgebra::new(spec)).clone()
    }

    /// Normal form of `m * x` for a PBW monomial m and a generator x.
    fn mul_gen(&self, m: &[u16], x: u16) -> Arc<Terms> {
        if m.last().map_or(true, |&y| y <= x) {
            let mut v = m.to_vec();
            v.push(x);
            let mut t = Terms::new();
            t.insert(v, ScalarK::one());
            return Arc::new(t);
        }
        let key = (m.to_vec(), x);
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return t.clone();
        }
        // m' y x = (m' x) y + m' [y, x]
        let (head, y) = (&m[..m.len() - 1], m[m.len() - 1]);
        let mut out = Terms::new();
        let hx = self.mul_gen(head, x);
        for (t, c) in hx.iter() {
            add_scaled(&mut out, &self.mul_gen(t, y), c);
        }
        for (k, c) in self.spec.bracket_labels(y as usize, x as usize) {
            add_scaled(&mut out, &self.mul_gen(head, *k as u16), c);
        }
        let out = Arc::new(out);
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (mb, cb) in b {
            let mut cur = a.clone();
            for &g in mb {
                let mut next = Terms::new();
                for (m, c) in &cur {
                    add_scaled(&mut next, &self.mul_gen(m, g), c);
                }
                cur = next;
            }
            add_scaled(&mut out, &cur, cb);
        }
        out
    }

    pub fn memo_size(&self) -> usize {
        self.memo.lock().unwrap().len()
    }
}

/// An element of U(g_N) in PBW normal form.
#[derive(Clone)]
pub struct UElement {
    alg: Arc<UAlgebra>,
    terms: Terms,
}

impl PartialEq for UElement {
    fn eq(&self, o: &Self) -> bool {
        *self.alg.spec == *o.alg.spec && self.terms == o.terms
    }
}

impl fmt::Debug for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let labels = self.alg.spec.labels();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if m.is_empty() {
                continue;
            }
            f.write_str(" * ")?;
            for &g in m {
                let (i, j) = labels[g as usize];
                write!(f, "F({},{})", i, j)?;
            }
        }
        Ok(())
    }
}

impl UElement {
    pub fn zero(alg: &Arc<UAlgebra>) -> Self {
        UElement { alg: alg.clone(), terms: Terms::new() }
    }

    pub fn scalar(alg: &Arc<UAlgebra>, s: ScalarK) -> Self {
        let mut terms = Terms::new();
        if !s.is_zero() {
            terms.insert(Vec::new(), s);
        }
        UElement { alg: alg.clone(), terms }
    }

    pub fn one(alg: &Arc<UAlgebra>) -> Self {
        Self::scalar(alg, ScalarK::one())
    }

    /// F_{ij} for any valid indices, rewritten onto basis labels.
    pub fn gen(alg: &Arc<UAlgebra>, i: i32, j: i32) -> Result<Self, LieError> {
        let spec = &alg.spec;
        for k in [i, j] {
            if !spec.has_index(k) {
                return Err(LieError::IndexOutOfRange(k));
            }
        }
        let mut terms = Terms::new();
        if let Some((k, c)) = spec.canonical(i, j) {
            terms.insert(vec![k as u16], ScalarK::int(c));
        }
        Ok(UElement { alg: alg.clone(), terms })
    }

    /// F_{ij}, panicking on invalid indices.
    pub fn f(alg: &Arc<UAlgebra>, i: i32, j: i32) -> Self {
        Self::gen(alg, i, j).expect("valid index")
    }

    pub fn from_g(alg: &Arc<UAlgebra>, x: &GElement) -> Self {
        let terms = x.coords().into_iter().map(|(k, c)| (vec![k as u16], c)).collect();
        UElement { alg: alg.clone(), terms }
    }

    pub fn algebra(&self) -> &Arc<UAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarK)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    fn check(&self, o: &Self) -> Result<(), LieError> {
        if *self.alg.spec == *o.alg.spec {
            Ok(())
        } else {
            Err(LieError::SpecMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        add_scaled(&mut t, &o.terms, &ScalarK::one());
        UElement { alg: self.alg.clone(), terms: t }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        add_scaled(&mut t, &o.terms, &ScalarK::int(-1));
        UElement { alg: self.alg.clone(), terms: t }
    }

    pub fn scale(&self, s: &ScalarK) -> Self {
        let mut t = Terms::new();
        add_scaled(&mut t, &self.terms, s);
        UElement { alg: self.alg.clone(), terms: t }
    }

    pub fn neg(&self) -> Self {
        self.scale(&ScalarK::int(-1))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, LieError> {
        self.check(o)?;
        Ok(UElement { alg: self.alg.clone(), terms: self.alg.mul_terms(&self.terms, &o.terms) })
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("same Lie algebra")
    }

    /// [a, b] = ab - ba
    pub fn comm(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// {a, b} = ab + ba
    pub fn anti(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }
}

/// Normal form of a product of labels (any valid indices).
pub fn normal_form(alg: &Arc<UAlgebra>, word: &[Label]) -> Result<UElement, LieError> {
    let mut acc = UElement::one(alg);
    for &(i, j) in word {
        acc = acc.try_mul(&UElement::gen(alg, i, j)?)?;
    }
    Ok(acc)
}

pub fn u_mul(a: &UElement, b: &UElement) -> Result<UElement, LieError> {
    a.try_mul(b)
}

/// Image of a in a representation given by one matrix per basis label.
pub fn act_on(a: &UElement, mats: &[KMat], dim: usize) -> KMat {
    let mut out = KMat::zeros(dim, dim);
    let mut cache: HashMap<&[u16], KMat> = HashMap::new();
    for (m, c) in &a.terms {
        let mut prod = KMat::identity(dim);
        // reuse the longest cached prefix
        let mut start = 0;
        for k in (1..=m.len()).rev() {
            if let Some(p) = cache.get(&m[..k]) {
                prod = p.clone();
                start = k;
                break;
            }
        }
        for k in start..m.len() {
            prod = prod.mul(&mats[m[k] as usize]);
            cache.insert(&m[..=k], prod.clone());
        }
        out = out.axpy(c, &prod);
    }
    out
}

pub fn act(a: &UElement, rep: &GRep) -> Result<KMat, LieError> {
    if *a.alg.spec != *rep.spec {
        return Err(LieError::SpecMismatch);
    }
    Ok(act_on(a, rep.mats(), rep.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_lie_algebra, orthonormal_basis};
    use crate::yangrep::adjoint_rep;
    use proptest::prelude::*;

    fn alg(s: Series, n: usize) -> Arc<UAlgebra> {
        UAlgebra::new(&build_lie_algebra(s, n).unwrap())
    }

    #[test]
    fn swap_example() {
        let a = alg(Series::B, 2);
        let lhs = normal_form(&a, &[(2, 1), (1, 2)]).unwrap();
        let rhs = normal_form(&a, &[(1, 2), (2, 1)]).unwrap().sub(&UElement::f(&a, 1, 1)).add(&UElement::f(&a, 2, 2));
        assert_eq!(lhs, rhs);
        // already ordered input stays a single monomial
        assert_eq!(normal_form(&a, &[(1, 2), (2, 1)]).unwrap().terms().count(), 1);
        let sq = normal_form(&a, &[(1, 1), (1, 1)]).unwrap();
        assert_eq!(sq.terms().count(), 1);
        assert_eq!(normal_form(&a, &[(1, 2)]).unwrap(), UElement::f(&a, 1, 2));
        assert!(UElement::gen(&a, 3, 1).is_err());
    }

    #[test]
    fn commutator_matches_bracket() {
        for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::D, 3), (Series::C, 1)] {
            let a = alg(s, n);
            let spec = a.spec.clone();
            for &(i, j) in spec.labels() {
                for &(k, l) in spec.labels() {
                    let x = UElement::f(&a, i, j);
                    let y = UElement::f(&a, k, l);
                    let br =
                        crate::liealg::bracket(&crate::liealg::f(&spec, i, j), &crate::liealg::f(&spec, k, l)).unwrap();
                    assert_eq!(x.comm(&y), UElement::from_g(&a, &br));
                }
            }
        }
    }

    #[test]
    fn casimir_acts_as_4kappa_on_adjoint() {
        for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::D, 2)] {
            let a = alg(s, n);
            let spec = a.spec.clone();
            let mut c = UElement::zero(&a);
            for (_, x) in orthonormal_basis(&spec) {
                let ux = UElement::from_g(&a, &x);
                c = c.add(&ux.mul(&ux));
            }
            let ad = adjoint_rep(&spec);
            let m = act(&c, &ad).unwrap();
            let k4 = ScalarK::from_q(crate::scalar::qi(4) * &spec.kappa);
            assert_eq!(m, KMat::scalar(spec.dim(), k4));
            assert_eq!(act(&UElement::one(&a), &ad).unwrap(), KMat::identity(spec.dim()));
        }
    }

    #[test]
    fn act_is_multiplicative_on_basis() {
        let a = alg(Series::C, 2);
        let spec = a.spec.clone();
        let ad = adjoint_rep(&spec);
        for &x in spec.labels() {
            for &y in spec.labels() {
                let nf = normal_form(&a, &[x, y]).unwrap();
                let lhs = act(&nf, &ad).unwrap();
                let rhs = ad.mats()[spec.label_index(x).unwrap()].mul(&ad.mats()[spec.label_index(y).unwrap()]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    fn random_elem(a: &Arc<UAlgebra>, seeds: &[(usize, usize, i64)]) -> UElement {
        let labels = a.spec.labels().to_vec();
        let mut e = UElement::zero(a);
        for &(p, q, c) in seeds {
            let x = labels[p % labels.len()];
            let y = labels[q % labels.len()];
            e = e.add(&normal_form(a, &[x, y]).unwrap().scale(&ScalarK::int(c)));
        }
        e
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn associativity(s1 in proptest::collection::vec((0usize..40, 0usize..40, -3i64..4), 1..3),
                         s2 in proptest::collection::vec((0usize..40, 0usize..40, -3i64..4), 1..3),
                         s3 in proptest::collection::vec((0usize..40, 0usize..40, -3i64..4), 1..3)) {
            let a = UAlgebra::for_spec(&build_lie_algebra(Series::B, 2).unwrap());
            let (x, y, z) = (random_elem(&a, &s1), random_elem(&a, &s2), random_elem(&a, &s3));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert!(x.mul(&y).degree() <= x.degree() + y.degree());
            // idempotence of normal form: multiplying by 1 changes nothing
            prop_assert_eq!(x.mul(&UElement::one(&a)), x.clone());
        }
    }
}
