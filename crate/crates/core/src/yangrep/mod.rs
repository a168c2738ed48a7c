//! Representations of g_N and of the three Yangian presentations, with
//! relation checkers and the concrete builders used throughout the kit.

mod current;
mod jrep;
mod modules;
mod rtt;

pub use current::{
    check_current_relations, check_minimal_relations, cur_shift, natural_current_rep, CurRep, DEFAULT_RS_MAX,
};
pub use jrep::{
    check_antipode_duality, check_j_relations, evaluation_j_rep, fundamental_j_rep, j_shift, j_tensor, natural_j_rep,
    JRep, DEFAULT_TRIPLE_BUDGET,
};
pub use modules::{
    adjoint_rep, cyclic_span, exterior_power_rep, fundamental_module, natural_rep, spin_rep, trivial_rep,
    FundamentalModule,
};
pub use rtt::{
    check_rtt_relations, g_series, half_shift, identity_rtt_rep, rtt_natural_rep, rtt_shift, rtt_spin_rep, rtt_tensor,
    spin_f_series, MatPoly, RTTRep,
};

use crate::liealg::{GElement, Label, LieError, Spec};
use crate::linalg::{svec_get, Echelon, KMat, SVec};
use crate::report::CheckReport;
use crate::scalar::{Ring, ScalarK};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("node {node} is not covered: {reason}")]
    NodeNotAllowed { node: usize, reason: String },
    #[error("representation mismatch: {0}")]
    Mismatch(String),
    #[error("table range too small: {0}")]
    Range(String),
    #[error("{0}")]
    Invalid(String),
}

/// A representation of g_N: one matrix per basis label, in label order.
#[derive(Clone, Debug)]
pub struct GRep {
    pub spec: Spec,
    dim: usize,
    mats: Vec<KMat>,
}

impl GRep {
    pub fn new(spec: &Spec, dim: usize, mats: Vec<KMat>) -> Result<Self, RepError> {
        if mats.len() != spec.dim() {
            return Err(RepError::Mismatch(format!("{} matrices for dim g = {}", mats.len(), spec.dim())));
        }
        if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(RepError::Mismatch(format!("matrix shape differs from {dim} x {dim}")));
        }
        Ok(GRep { spec: spec.clone(), dim, mats })
    }

    pub fn from_fn(spec: &Spec, dim: usize, mut g: impl FnMut(Label) -> KMat) -> Self {
        let mats = spec.labels().iter().map(|&l| g(l)).collect();
        GRep { spec: spec.clone(), dim, mats }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[KMat] {
        &self.mats
    }

    /// Action of F_{ij} for any pair of indices.
    pub fn f(&self, i: i32, j: i32) -> KMat {
        match self.spec.canonical(i, j) {
            Some((k, 1)) => self.mats[k].clone(),
            Some((k, s)) => self.mats[k].scale(&ScalarK::int(s)),
            None => KMat::zeros(self.dim, self.dim),
        }
    }

    /// Action of an arbitrary element of g_N.
    pub fn act(&self, x: &GElement) -> KMat {
        combine(&self.mats, &x.coords(), self.dim)
    }

    /// X (x) 1 + 1 (x) X.
    pub fn tensor(&self, o: &GRep) -> Result<GRep, RepError> {
        if *self.spec != *o.spec {
            return Err(LieError::SpecMismatch.into());
        }
        let (ia, ib) = (KMat::identity(self.dim), KMat::identity(o.dim));
        let mats = self.mats.iter().zip(&o.mats).map(|(a, b)| a.kron(&ib).add(&ia.kron(b))).collect();
        Ok(GRep { spec: self.spec.clone(), dim: self.dim * o.dim, mats })
    }

    /// Induced representation on an invariant subspace given by reduced rows.
    pub fn restrict(&self, basis: &Echelon<ScalarK>) -> Result<GRep, RepError> {
        let mats = restrict_mats(&self.mats, basis)?;
        Ok(GRep { spec: self.spec.clone(), dim: basis.rank(), mats })
    }

    /// rho([F_a, F_b]) = [rho(F_a), rho(F_b)] on all basis pairs.
    pub fn check_bracket(&self) -> CheckReport {
        let mut rep = CheckReport::new("g-rep", "F_{ij} bracket").with_spec(self.spec.name());
        let labels = self.spec.labels();
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                let lhs = self.mats[a].commutator(&self.mats[b]);
                let rhs = combine(&self.mats, self.spec.bracket_labels(a, b), self.dim);
                let d = lhs.sub(&rhs);
                rep.record("bracket", d.is_zero(), || residual(&format!("{:?},{:?}", labels[a], labels[b]), &d));
            }
        }
        rep
    }

    /// Eigenvalues of F_{11}, ..., F_{nn} on a weight vector, if it is one.
    pub fn weight_of(&self, v: &SVec<ScalarK>) -> Option<Vec<ScalarK>> {
        let mut w = Vec::with_capacity(self.spec.n);
        let (p, x) = v.first()?.clone();
        for k in 1..=self.spec.n as i32 {
            let hv = self.f(k, k).mul_vec(v);
            let c = svec_get(&hv, p).cloned().unwrap_or_else(ScalarK::zero).times(&x.inv()?);
            if hv != crate::linalg::svec_scale(v, &c) {
                return None;
            }
            w.push(c);
        }
        Some(w)
    }
}

/// Linear combination sum c_k M_k.
pub(crate) fn combine(mats: &[KMat], coords: &SVec<ScalarK>, dim: usize) -> KMat {
    let mut out = KMat::zeros(dim, dim);
    for (k, c) in coords {
        out = out.axpy(c, &mats[*k]);
    }
    out
}

/// Witness text for a nonzero residual matrix.
pub(crate) fn residual(loc: &str, d: &KMat) -> (String, String) {
    match d.first_nonzero() {
        Some((i, j, x)) => (format!("{loc} entry ({i},{j})"), x.to_string()),
        None => (loc.to_string(), "0".into()),
    }
}

/// Matrices of an invariant subspace in the basis of reduced rows.
pub(crate) fn restrict_mats(mats: &[KMat], basis: &Echelon<ScalarK>) -> Result<Vec<KMat>, RepError> {
    let rows = basis.basis();
    let k = rows.len();
    let mut out = Vec::with_capacity(mats.len());
    for m in mats {
        let mut trips = Vec::new();
        for (c, b) in rows.iter().enumerate() {
            let y = m.mul_vec(b);
            let coords = basis.coordinates(&y).ok_or_else(|| RepError::Invalid("subspace is not invariant".into()))?;
            for (r, x) in coords.into_iter().enumerate() {
                if !x.is_zero() {
                    trips.push((r, c, x));
                }
            }
        }
        out.push(KMat::from_triplets(k, k, trips));
    }
    Ok(out)
}

/// Coordinates of a vector of the ambient space in the reduced basis.
pub(crate) fn subspace_coords(basis: &Echelon<ScalarK>, v: &SVec<ScalarK>) -> Option<SVec<ScalarK>> {
    let c = basis.coordinates(v)?;
    Some(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_lie_algebra, Series};

    #[test]
    fn natural_and_adjoint_are_reps() {
        for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::D, 3), (Series::C, 1)] {
            let spec = build_lie_algebra(s, n).unwrap();
            assert!(natural_rep(&spec).check_bracket().passed());
            assert!(adjoint_rep(&spec).check_bracket().passed());
        }
    }

    #[test]
    fn tensor_is_rep() {
        let spec = build_lie_algebra(Series::B, 1).unwrap();
        let v = natural_rep(&spec);
        assert!(v.tensor(&v).unwrap().check_bracket().passed());
    }
}
