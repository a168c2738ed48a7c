//! Sparse matrices over an exact ring and row reduction over exact fields.

use crate::scalar::{Field, Ring, ScalarK};
use serde::Serialize;
use std::collections::BTreeMap;

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SVec<T> = Vec<(usize, T)>;

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SMat<T: Ring> {
    rows: Vec<SVec<T>>,
    ncols: usize,
}

/// Matrices over K.
pub type KMat = SMat<ScalarK>;

fn push_nonzero<T: Ring>(v: &mut SVec<T>, c: usize, x: T) {
    if !x.is_zero() {
        v.push((c, x));
    }
}

/// `a + s * b` for sparse vectors.
pub fn svec_axpy<T: Ring>(a: &SVec<T>, s: &T, b: &SVec<T>) -> SVec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            push_nonzero(&mut out, b[j].0, s.times(&b[j].1));
            j += 1;
        } else {
            push_nonzero(&mut out, a[i].0, a[i].1.plus(&s.times(&b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn svec_get<T: Ring>(v: &SVec<T>, c: usize) -> Option<&T> {
    v.binary_search_by_key(&c, |e| e.0).ok().map(|k| &v[k].1)
}

pub fn svec_scale<T: Ring>(v: &SVec<T>, s: &T) -> SVec<T> {
    let mut out = Vec::with_capacity(v.len());
    for (c, x) in v {
        push_nonzero(&mut out, *c, x.times(s));
    }
    out
}

pub fn svec_from_dense<T: Ring>(v: &[T]) -> SVec<T> {
    let mut out = Vec::new();
    for (c, x) in v.iter().enumerate() {
        push_nonzero(&mut out, c, x.clone());
    }
    out
}

pub fn svec_to_dense<T: Ring>(v: &SVec<T>, n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// Accumulator for building sparse rows out of order.
struct RowAcc<T: Ring> {
    map: BTreeMap<usize, T>,
}

impl<T: Ring> RowAcc<T> {
    fn new() -> Self {
        RowAcc { map: BTreeMap::new() }
    }
    fn add(&mut self, c: usize, x: &T) {
        match self.map.get_mut(&c) {
            Some(e) => e.add_to(x),
            None => {
                self.map.insert(c, x.clone());
            }
        }
    }
    fn finish(self) -> SVec<T> {
        self.map.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

impl<T: Ring> SMat<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SMat { rows: vec![Vec::new(); nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    pub fn scalar(n: usize, s: T) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for i in 0..n {
                m.rows[i].push((i, s.clone()));
            }
        }
        m
    }

    /// Single matrix unit `s * E_{ij}`.
    pub fn unit(nrows: usize, ncols: usize, i: usize, j: usize, s: T) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        if !s.is_zero() {
            m.rows[i].push((j, s));
        }
        m
    }

    pub fn from_triplets(nrows: usize, ncols: usize, trips: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut accs: Vec<RowAcc<T>> = (0..nrows).map(|_| RowAcc::new()).collect();
        for (i, j, x) in trips {
            accs[i].add(j, &x);
        }
        SMat { rows: accs.into_iter().map(|a| a.finish()).collect(), ncols }
    }

    pub fn from_rows(rows: Vec<SVec<T>>, ncols: usize) -> Self {
        SMat { rows, ncols }
    }

    pub fn from_dense(d: &[Vec<T>]) -> Self {
        let ncols = d.first().map_or(0, |r| r.len());
        SMat { rows: d.iter().map(|r| svec_from_dense(r)).collect(), ncols }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        self.rows.iter().map(|r| svec_to_dense(r, self.ncols)).collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SVec<T> {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SVec<T>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        svec_get(&self.rows[i], j).cloned().unwrap_or_else(T::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Iterates over stored entries `(i, j, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))
    }

    /// First nonzero entry, used as a residual witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize, T)> {
        self.entries().next().map(|(i, j, x)| (i, j, x.clone()))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&T::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&T::one().negated(), o)
    }

    /// `self + s * o`.
    pub fn axpy(&self, s: &T, o: &Self) -> Self {
        assert_eq!(self.nrows(), o.nrows(), "row mismatch");
        assert_eq!(self.ncols, o.ncols, "column mismatch");
        SMat { rows: self.rows.iter().zip(&o.rows).map(|(a, b)| svec_axpy(a, s, b)).collect(), ncols: self.ncols }
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zeros(self.nrows(), self.ncols);
        }
        SMat { rows: self.rows.iter().map(|r| svec_scale(r, s)).collect(), ncols: self.ncols }
    }

    pub fn neg(&self) -> Self {
        self.scale(&T::one().negated())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.ncols, o.nrows(), "dimension mismatch in product");
        let mut rows = Vec::with_capacity(self.nrows());
        let mut dense: Vec<Option<T>> = vec![None; o.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for r in &self.rows {
            for (k, a) in r {
                for (j, b) in &o.rows[*k] {
                    let p = a.times(b);
                    match &mut dense[*j] {
                        Some(x) => x.add_to(&p),
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                let x = dense[j].take().unwrap();
                push_nonzero(&mut row, j, x);
            }
            touched.clear();
            rows.push(row);
        }
        SMat { rows, ncols: o.ncols }
    }

    pub fn mul_vec(&self, v: &SVec<T>) -> SVec<T> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc = T::zero();
            let (mut a, mut b) = (0, 0);
            while a < r.len() && b < v.len() {
                match r[a].0.cmp(&v[b].0) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        acc.add_to(&r[a].1.times(&v[b].1));
                        a += 1;
                        b += 1;
                    }
                }
            }
            push_nonzero(&mut out, i, acc);
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    pub fn transpose(&self) -> Self {
        let mut accs: Vec<SVec<T>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                accs[*j].push((i, x.clone()));
            }
        }
        SMat { rows: accs, ncols: self.nrows() }
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let (p, q) = (o.nrows(), o.ncols);
        let mut rows = Vec::with_capacity(self.nrows() * p);
        for ra in &self.rows {
            for rb in &o.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ja, a) in ra {
                    for (jb, b) in rb {
                        push_nonzero(&mut row, ja * q + jb, a.times(b));
                    }
                }
                rows.push(row);
            }
        }
        SMat { rows, ncols: self.ncols * q }
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(x) = svec_get(r, i) {
                acc.add_to(x);
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::identity(self.nrows());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Applies `f` to every stored entry, dropping zeros.
    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> SMat<U> {
        SMat {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    let mut out = Vec::with_capacity(r.len());
                    for (j, x) in r {
                        push_nonzero(&mut out, *j, f(x));
                    }
                    out
                })
                .collect(),
            ncols: self.ncols,
        }
    }

    /// Fallible entrywise map.
    pub fn try_map<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<SMat<U>, E> {
        let mut rows = Vec::with_capacity(self.nrows());
        for r in &self.rows {
            let mut out = Vec::with_capacity(r.len());
            for (j, x) in r {
                push_nonzero(&mut out, *j, f(x)?);
            }
            rows.push(out);
        }
        Ok(SMat { rows, ncols: self.ncols })
    }

    /// Submatrix keeping the given rows and columns (in the given orders).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let out = rows
            .iter()
            .map(|&i| {
                let mut r: SVec<T> = self.rows[i]
                    .iter()
                    .filter(|(j, _)| pos[*j] != usize::MAX)
                    .map(|(j, x)| (pos[*j], x.clone()))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        SMat { rows: out, ncols: cols.len() }
    }
}

impl SMat<ScalarK> {
    /// Sparse triplets with canonical scalar text, for JSON output.
    pub fn triplets(&self) -> Vec<Triplet> {
        self.entries().map(|(i, j, x)| Triplet { row: i, col: j, value: x.canonical() }).collect()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

/// Incremental row echelon form over a field.
///
/// Stored rows are normalized to have leading coefficient 1 at their pivot.
#[derive(Clone, Debug)]
pub struct Echelon<T: Field> {
    ncols: usize,
    rows: BTreeMap<usize, SVec<T>>,
}

impl<T: Field> Echelon<T> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Reduces `v` against the stored rows; returns the remainder.
    pub fn reduce(&self, v: &SVec<T>) -> SVec<T> {
        let mut v = v.clone();
        let mut start = 0usize;
        loop {
            let Some(pos) = v.iter().position(|(c, _)| *c >= start && self.rows.contains_key(c)) else {
                return v;
            };
            let (c, x) = v[pos].clone();
            let row = &self.rows[&c];
            v = svec_axpy(&v, &x.negated(), row);
            start = c + 1;
        }
    }

    /// Adds `v` to the row space; returns true if the rank grew.
    pub fn insert(&mut self, v: &SVec<T>) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SVec<T>) -> bool {
        let Some((p, lead)) = r.first().cloned() else { return false };
        let inv = lead.inverse().expect("nonzero pivot");
        let r = svec_scale(&r, &inv);
        // keep the stored rows fully reduced at pivot columns
        for row in self.rows.values_mut() {
            if let Some(x) = svec_get(row, p).cloned() {
                *row = svec_axpy(row, &x.negated(), &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: &SVec<T>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduced rows in increasing pivot order.
    pub fn basis(&self) -> Vec<SVec<T>> {
        self.rows.values().cloned().collect()
    }

    /// Coordinates of `v` in the reduced basis; `None` if outside the span.
    pub fn coordinates(&self, v: &SVec<T>) -> Option<Vec<T>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.keys().map(|p| svec_get(v, *p).cloned().unwrap_or_else(T::zero)).collect())
    }

    /// Basis of the nullspace `{x : row . x = 0 for all stored rows}`.
    pub fn nullspace(&self) -> Vec<SVec<T>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.rows.contains_key(&f) {
                continue;
            }
            let mut v: SVec<T> = Vec::new();
            for (p, row) in &self.rows {
                if let Some(x) = svec_get(row, f) {
                    v.push((*p, x.negated()));
                }
            }
            v.push((f, T::one()));
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

/// Solves `rows * x = rhs` for `x` of length `ncols`; free variables are 0.
pub fn solve_linear<T: Field>(rows: &[Vec<T>], rhs: &[T], ncols: usize) -> Option<Vec<T>> {
    let mut e = Echelon::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut v = svec_from_dense(r);
        push_nonzero(&mut v, ncols, b.clone());
        e.insert(&v);
    }
    if e.rows.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![T::zero(); ncols];
    for (p, row) in &e.rows {
        x[*p] = svec_get(row, ncols).cloned().unwrap_or_else(T::zero);
    }
    Some(x)
}

/// Basis of the common kernel of a list of matrices with the same column count.
pub fn common_kernel<T: Field>(mats: &[&SMat<T>], ncols: usize) -> Vec<SVec<T>> {
    let mut e = Echelon::new(ncols);
    for m in mats {
        for r in m.rows() {
            if !r.is_empty() {
                e.insert(r);
            }
        }
    }
    e.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = ScalarK;
    fn q(n: i64, d: i64) -> ScalarK {
        ScalarK::frac(n, d)
    }

    fn m(d: &[&[i64]]) -> SMat<Q> {
        SMat::from_dense(&d.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn product_and_kron() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[1, 0]]));
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), q(1, 1));
        assert_eq!(k.get(1, 2), q(2, 1));
        assert_eq!(k.nrows(), 4);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let mut e = Echelon::new(3);
        for r in a.rows() {
            e.insert(r);
        }
        assert_eq!(e.rank(), 1);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let rows = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]];
        let x = solve_linear(&rows, &[q(3, 1), q(1, 1)], 2).unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        let rows = vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]];
        assert!(solve_linear(&rows, &[q(1, 1), q(3, 1)], 2).is_none());
    }

    #[test]
    fn coordinates_in_span() {
        let mut e = Echelon::<Q>::new(3);
        e.insert(&svec_from_dense(&[q(1, 1), q(1, 1), q(0, 1)]));
        e.insert(&svec_from_dense(&[q(0, 1), q(1, 1), q(1, 1)]));
        let v = svec_from_dense(&[q(2, 1), q(5, 1), q(3, 1)]);
        let c = e.coordinates(&v).unwrap();
        let b = e.basis();
        let rebuilt = svec_axpy(&svec_scale(&b[0], &c[0]), &c[1], &b[1]);
        assert_eq!(rebuilt, v);
        assert!(e.coordinates(&svec_from_dense(&[q(1, 1), q(0, 1), q(0, 1)])).is_none());
    }
}
