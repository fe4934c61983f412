use num_traits::Zero;

use super::{LinAlgError, Rat, RatMatrix};

/// A linear subspace of `R^ambient`, stored by a basis in reduced column
/// echelon form. The canonical basis is unique, so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: RatMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: RatMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: RatMatrix::identity(ambient) }
    }

    pub fn from_vectors(ambient: usize, vs: &[Vec<Rat>]) -> Self {
        let rows = RatMatrix::from_rows(ambient, vs);
        Self::from_row_matrix(ambient, &rows)
    }

    /// Span of the columns of `m`.
    pub fn from_matrix_cols(m: &RatMatrix) -> Self {
        Self::from_row_matrix(m.nrows(), &m.transpose())
    }

    fn from_row_matrix(ambient: usize, rows: &RatMatrix) -> Self {
        let (r, pivots) = rows.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let basis = r.select_rows(&keep).transpose();
        let basis = if keep.is_empty() { RatMatrix::zeros(ambient, 0) } else { basis };
        Subspace { ambient, basis }
    }

    /// The `i`-th coordinate axis.
    pub fn axis(ambient: usize, i: usize) -> Self {
        let mut v = vec![Rat::zero(); ambient];
        v[i] = num_traits::One::one();
        Self::from_vectors(ambient, &[v])
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Canonical basis, one vector per column.
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.cols_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check(&self, other: &Subspace) -> Result<(), LinAlgError> {
        if self.ambient != other.ambient {
            return Err(LinAlgError::Dimension(format!(
                "subspaces live in R^{} and R^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other)?;
        Ok(Subspace::from_matrix_cols(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check(other)?;
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    pub fn perp(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        self.basis.transpose().kernel()
    }

    /// `{x : m x ∈ self}`
    pub fn preimage(&self, m: &RatMatrix) -> Result<Subspace, LinAlgError> {
        if m.nrows() != self.ambient {
            return Err(LinAlgError::Dimension(format!(
                "preimage: map has {} rows, subspace lives in R^{}",
                m.nrows(),
                self.ambient
            )));
        }
        let p = self.perp();
        if p.is_zero() {
            return Ok(Subspace::full(m.ncols()));
        }
        Ok(p.basis.transpose().mul(m).kernel())
    }

    /// `m · self`
    pub fn image(&self, m: &RatMatrix) -> Result<Subspace, LinAlgError> {
        if m.ncols() != self.ambient {
            return Err(LinAlgError::Dimension(format!(
                "image: map has {} columns, subspace lives in R^{}",
                m.ncols(),
                self.ambient
            )));
        }
        if self.is_zero() {
            return Ok(Subspace::zero(m.nrows()));
        }
        Ok(Subspace::from_matrix_cols(&m.mul(&self.basis)))
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinAlgError> {
        self.check(other)?;
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if super::is_zero_vec(v) {
            return true;
        }
        let p = self.perp();
        (0..p.dim()).all(|j| super::dot(&p.basis.col(j), v).is_zero())
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Subspace) -> Subspace {
        let n = self.ambient + other.ambient;
        let mut vs = Vec::new();
        for v in self.basis_vectors() {
            let mut w = v;
            w.resize(n, Rat::zero());
            vs.push(w);
        }
        for v in other.basis_vectors() {
            let mut w = vec![Rat::zero(); self.ambient];
            w.extend(v);
            vs.push(w);
        }
        Subspace::from_vectors(n, &vs)
    }

    /// A basis of some complement of `inner` inside `self`, chosen among the
    /// canonical basis vectors of `self`. Returned as columns.
    pub fn complement_basis(&self, inner: &Subspace) -> Result<RatMatrix, LinAlgError> {
        self.check(inner)?;
        let mut acc = inner.basis.clone();
        let mut rank = inner.dim();
        let mut picked = Vec::new();
        for v in self.basis_vectors() {
            let trial = acc.hstack(&RatMatrix::column_vector(&v));
            let r = trial.rank();
            if r > rank {
                acc = trial;
                rank = r;
                picked.push(v);
            }
        }
        if rank != self.dim() {
            return Err(LinAlgError::Dimension("inner subspace is not contained in outer".into()));
        }
        Ok(RatMatrix::from_cols(self.ambient, &picked))
    }

    /// Embeds into a larger space by padding coordinates after the current ones.
    pub fn pad(&self, extra: usize) -> Subspace {
        self.product(&Subspace::zero(extra))
    }
}
