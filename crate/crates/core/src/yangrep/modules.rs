//! Concrete g_N-modules: natural, adjoint, exterior powers, spin, and the
//! fundamental modules V(omega_i) cut out as cyclic spans.

use super::{GRep, RepError};
use crate::liealg::{ad_matrix, f, Series, Spec};
use crate::linalg::{Echelon, KMat, SVec};
use crate::scalar::{Ring, ScalarK};
use std::collections::{HashMap, VecDeque};

pub fn natural_rep(spec: &Spec) -> GRep {
    GRep::from_fn(spec, spec.big_n, |(i, j)| f(spec, i, j).mat)
}

pub fn adjoint_rep(spec: &Spec) -> GRep {
    GRep::from_fn(spec, spec.dim(), |(i, j)| ad_matrix(&f(spec, i, j)))
}

pub fn trivial_rep(spec: &Spec) -> GRep {
    GRep::from_fn(spec, 1, |_| KMat::zeros(1, 1))
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            go(k + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Derivation action of an N x N matrix on Lambda^m, basis of sorted subsets.
fn wedge_action(x: &KMat, subs: &[Vec<usize>], index: &HashMap<Vec<usize>, usize>) -> KMat {
    let mut trips = Vec::new();
    for (col, s) in subs.iter().enumerate() {
        for (k, &b) in s.iter().enumerate() {
            // x e_b = sum_a x[a][b] e_a
            for (a, row) in x.rows().iter().enumerate() {
                let Some(c) = crate::linalg::svec_get(row, b) else { continue };
                if a != b && s.contains(&a) {
                    continue;
                }
                let mut t = s.clone();
                t[k] = a;
                // sort by adjacent swaps, tracking parity
                let mut sign = 1i64;
                let mut p = k;
                while p > 0 && t[p - 1] > t[p] {
                    t.swap(p - 1, p);
                    p -= 1;
                    sign = -sign;
                }
                while p + 1 < t.len() && t[p] > t[p + 1] {
                    t.swap(p, p + 1);
                    p += 1;
                    sign = -sign;
                }
                trips.push((index[&t], col, c.times(&ScalarK::int(sign))));
            }
        }
    }
    KMat::from_triplets(subs.len(), subs.len(), trips)
}

/// Lambda^m(C^N); basis vectors are sorted position subsets in lexicographic order.
pub fn exterior_power_rep(spec: &Spec, m: usize) -> GRep {
    let subs = subsets(spec.big_n, m);
    let index: HashMap<Vec<usize>, usize> = subs.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
    GRep::from_fn(spec, subs.len(), |(i, j)| wedge_action(&f(spec, i, j).mat, &subs, &index))
}

/// Clifford operator gamma_k on Lambda(C^n), basis indexed by bitmasks.
fn gamma(n: usize, k: i32) -> KMat {
    let dim = 1usize << n;
    let mut trips = Vec::new();
    for s in 0..dim {
        if k == 0 {
            let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
            let c = ScalarK::sqrt2().inv().unwrap().times(&ScalarK::int(sign));
            trips.push((s, s, c));
            continue;
        }
        let bit = 1usize << (k.unsigned_abs() as usize - 1);
        let below = (s & (bit - 1)).count_ones();
        let sign = ScalarK::int(if below % 2 == 0 { 1 } else { -1 });
        if k > 0 && s & bit == 0 {
            trips.push((s | bit, s, sign));
        } else if k < 0 && s & bit != 0 {
            trips.push((s & !bit, s, sign));
        }
    }
    KMat::from_triplets(dim, dim, trips)
}

/// The spin module on Lambda(C^n): F_{ij} acts by gamma_i gamma_{-j} - delta_{ij}/2.
pub fn spin_rep(spec: &Spec) -> Result<GRep, RepError> {
    if !spec.is_orthogonal() {
        return Err(RepError::Invalid("spin module requires an orthogonal algebra".into()));
    }
    let n = spec.n;
    let dim = 1usize << n;
    let g: HashMap<i32, KMat> = spec.indices().iter().map(|&k| (k, gamma(n, k))).collect();
    Ok(GRep::from_fn(spec, dim, |(i, j)| {
        let m = g[&i].mul(&g[&-j]);
        if i == j {
            m.sub(&KMat::scalar(dim, ScalarK::frac(1, 2)))
        } else {
            m
        }
    }))
}

/// Span of the seeds under all words in `mats`.
pub fn cyclic_span(mats: &[KMat], seeds: &[SVec<ScalarK>], dim: usize) -> Echelon<ScalarK> {
    let mut e = Echelon::new(dim);
    let mut queue = VecDeque::new();
    for s in seeds {
        if e.insert(s) {
            queue.push_back(s.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        for m in mats {
            let w = m.mul_vec(&v);
            if !w.is_empty() && e.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    e
}

/// V(omega_i) with the coordinates of its highest weight vector.
#[derive(Clone, Debug)]
pub struct FundamentalModule {
    pub node: usize,
    pub rep: GRep,
    pub highest: SVec<ScalarK>,
}

pub fn fundamental_module(spec: &Spec, i: usize) -> Result<FundamentalModule, RepError> {
    let n = spec.n;
    if i >= n {
        return Err(RepError::NodeNotAllowed { node: i, reason: format!("nodes run over 0..{}", n - 1) });
    }
    let one = ScalarK::one();
    let (ambient, seed) = match (spec.series, i) {
        (Series::B, 0) | (Series::D, 0) => (spin_rep(spec)?, vec![(0usize, one)]),
        (Series::D, 1) => (spin_rep(spec)?, vec![(1usize, one)]),
        _ => {
            // e_{-n} ^ ... ^ e_{-(i+1)} is the first subset in lexicographic order
            (exterior_power_rep(spec, n - i), vec![(0usize, one)])
        }
    };
    let span = cyclic_span(ambient.mats(), &[seed.clone()], ambient.dim());
    let rep = ambient.restrict(&span)?;
    let highest = super::subspace_coords(&span, &seed).expect("seed lies in its span");
    Ok(FundamentalModule { node: i, rep, highest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_lie_algebra;

    #[test]
    fn exterior_and_spin_are_reps() {
        let spec = build_lie_algebra(Series::B, 2).unwrap();
        assert!(exterior_power_rep(&spec, 2).check_bracket().passed());
        assert!(spin_rep(&spec).unwrap().check_bracket().passed());
        let spec = build_lie_algebra(Series::D, 3).unwrap();
        assert!(spin_rep(&spec).unwrap().check_bracket().passed());
    }

    #[test]
    fn fundamental_dimensions_and_weights() {
        // (series, n, node, dim)
        let cases = [
            (Series::B, 2, 0, 4),
            (Series::B, 2, 1, 5),
            (Series::C, 2, 0, 5),
            (Series::C, 2, 1, 4),
            (Series::D, 3, 0, 4),
            (Series::D, 3, 1, 4),
            (Series::D, 3, 2, 6),
            (Series::C, 3, 0, 14),
            (Series::B, 3, 1, 21),
        ];
        for (s, n, i, d) in cases {
            let spec = build_lie_algebra(s, n).unwrap();
            let m = fundamental_module(&spec, i).unwrap();
            assert_eq!(m.rep.dim(), d, "{:?} {} {}", s, n, i);
            assert!(m.rep.check_bracket().passed());
            let w = m.rep.weight_of(&m.highest).unwrap();
            let want: Vec<ScalarK> = spec.fundamental_weights[i].iter().cloned().map(ScalarK::from_q).collect();
            assert_eq!(w, want);
        }
    }
}
