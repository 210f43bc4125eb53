use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// A subquotient `Z / B` of an ambient space `F^n`, with `B ⊆ Z`.
///
/// `cycles` and `boundaries` hold bases as columns. `reps` holds a basis of a
/// complement of `B` in `Z`, chosen greedily from the columns of `cycles` in
/// order; the classes of the reps form the distinguished basis of `Z / B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient<F> {
    ambient_dim: usize,
    cycles: Matrix<F>,
    boundaries: Matrix<F>,
    reps: Matrix<F>,
    /// `[boundaries | reps]`, a basis of `Z`.
    frame: Matrix<F>,
}

impl<F: Field> Subquotient<F> {
    /// `z` and `b` are spanning sets (columns) of `Z` and `B` in the ambient.
    pub fn new(z: &Matrix<F>, b: &Matrix<F>) -> Result<Self> {
        if z.rows() != b.rows() {
            return Err(Error::Dimension(format!(
                "subquotient: Z lives in dimension {}, B in {}",
                z.rows(),
                b.rows()
            )));
        }
        let n = z.rows();
        let cycles = z.image_basis();
        let boundaries = b.image_basis();
        if cycles.hstack(&boundaries).rank() != cycles.cols() {
            return Err(Error::NotSubspace(
                "boundary space is not contained in the cycle space".into(),
            ));
        }
        let both = boundaries.hstack(&cycles);
        let picked: Vec<usize> = both
            .independent_columns()
            .into_iter()
            .filter(|&j| j >= boundaries.cols())
            .map(|j| j - boundaries.cols())
            .collect();
        let reps = cycles.select_columns(&picked);
        let frame = boundaries.hstack(&reps);
        Ok(Subquotient {
            ambient_dim: n,
            cycles,
            boundaries,
            reps,
            frame,
        })
    }

    /// The zero subquotient of `F^n`.
    pub fn zero(n: usize) -> Self {
        let e = Matrix::zeros(n, 0);
        Subquotient {
            ambient_dim: n,
            cycles: e.clone(),
            boundaries: e.clone(),
            reps: e.clone(),
            frame: e,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cycles(&self) -> &Matrix<F> {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Matrix<F> {
        &self.boundaries
    }

    pub fn reps(&self) -> &Matrix<F> {
        &self.reps
    }

    /// Coordinates of the classes of the columns of `v` in the rep basis.
    /// Fails if some column is not in `Z`.
    pub fn coords(&self, v: &Matrix<F>) -> Result<Matrix<F>> {
        if v.rows() != self.ambient_dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in ambient of dimension {}",
                v.rows(),
                self.ambient_dim
            )));
        }
        let x = self
            .frame
            .solve(v)
            .ok_or_else(|| Error::NotWellDefined("vector is not a cycle".into()))?;
        let nb = self.boundaries.cols();
        Ok(x.block(nb, 0, self.dim(), v.cols()))
    }

    /// True when every column of `v` lies in `Z`.
    pub fn contains_cycles(&self, v: &Matrix<F>) -> bool {
        v.cols() == 0 || self.cycles.solve(v).is_some()
    }

    /// True when every column of `v` lies in `B`.
    pub fn contains_boundaries(&self, v: &Matrix<F>) -> bool {
        v.cols() == 0 || self.boundaries.solve(v).is_some()
    }
}

/// Matrix of the map `Z_src / B_src -> Z_dst / B_dst` induced by `f`,
/// after checking `f(Z_src) ⊆ Z_dst` and `f(B_src) ⊆ B_dst`.
pub fn induced_map<F: Field>(
    f: &Matrix<F>,
    src: &Subquotient<F>,
    dst: &Subquotient<F>,
) -> Result<Matrix<F>> {
    if f.cols() != src.ambient_dim() || f.rows() != dst.ambient_dim() {
        return Err(Error::Dimension(format!(
            "map is {}x{}, subquotients live in {} -> {}",
            f.rows(),
            f.cols(),
            src.ambient_dim(),
            dst.ambient_dim()
        )));
    }
    let fz = f.mul(src.cycles());
    if !dst.contains_cycles(&fz) {
        return Err(Error::NotWellDefined("f(Z) is not inside Z'".into()));
    }
    let fb = f.mul(src.boundaries());
    if !dst.contains_boundaries(&fb) {
        return Err(Error::NotWellDefined("f(B) is not inside B'".into()));
    }
    dst.coords(&f.mul(src.reps()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    type F = Fp<7>;

    fn col(v: &[i64]) -> Matrix<F> {
        Matrix::from_fn(v.len(), 1, |i, _| F::from_i64(v[i]))
    }

    #[test]
    fn plane_mod_line() {
        let z = col(&[1, 0, 0]).hstack(&col(&[0, 1, 0]));
        let b = col(&[1, 1, 0]);
        let sq = Subquotient::new(&z, &b).unwrap();
        assert_eq!(sq.dim(), 1);
        let c = sq.coords(&col(&[2, 2, 0])).unwrap();
        assert!(c.is_zero());
        let c = sq.coords(&col(&[1, 0, 0])).unwrap();
        assert_eq!(c[(0, 0)], F::one());
        assert!(sq.coords(&col(&[0, 0, 1])).is_err());
        assert!(Subquotient::new(&b, &z).is_err());
    }

    #[test]
    fn induced_identity() {
        let z = Matrix::<F>::identity(3);
        let b = col(&[0, 0, 1]);
        let sq = Subquotient::new(&z, &b).unwrap();
        let m = induced_map(&Matrix::identity(3), &sq, &sq).unwrap();
        assert_eq!(m, Matrix::identity(2));
        let swap = Matrix::from_fn(3, 3, |i, j| F::from_i64((i + j == 2) as i64));
        assert!(induced_map(&swap, &sq, &sq).is_err());
    }

    proptest! {
        #[test]
        fn dimension_formula(v in proptest::collection::vec(0i64..7, 16), k in 0usize..4) {
            let z = Matrix::from_fn(4, 4, |i, j| F::from_i64(v[i * 4 + j]));
            let b = z.select_columns(&(0..k).collect::<Vec<_>>());
            let sq = Subquotient::new(&z, &b).unwrap();
            prop_assert_eq!(sq.dim(), z.rank() - b.rank());
            let c = sq.coords(sq.reps()).unwrap();
            prop_assert_eq!(c, Matrix::identity(sq.dim()));
        }
    }
}
