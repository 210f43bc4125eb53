use std::collections::BTreeMap;

use crate::bigraded::{BasisElem, Bideg, BigradedModule, LinComb};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

/// Element of a module, as a combination of basis vectors.
pub type Vector<F> = LinComb<BasisElem, F>;

/// A homogeneous linear map of bidegree `bideg`.
///
/// `blocks[s]` is the matrix `src_s -> dst_{s + bideg}`; absent blocks are zero.
#[derive(Clone, Debug)]
pub struct BigradedMap<F> {
    src: BigradedModule,
    dst: BigradedModule,
    bideg: Bideg,
    blocks: BTreeMap<Bideg, Matrix<F>>,
}

impl<F: Field> PartialEq for BigradedMap<F> {
    fn eq(&self, o: &Self) -> bool {
        self.src == o.src
            && self.dst == o.dst
            && self.bideg == o.bideg
            && self.sub(o).is_zero()
    }
}

impl<F: Field> Eq for BigradedMap<F> {}

impl<F: Field> BigradedMap<F> {
    pub fn zero(src: &BigradedModule, dst: &BigradedModule, bideg: Bideg) -> Self {
        BigradedMap {
            src: src.clone(),
            dst: dst.clone(),
            bideg,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(m: &BigradedModule) -> Self {
        let blocks = m
            .dims()
            .iter()
            .map(|(&b, &n)| (b, Matrix::identity(n)))
            .collect();
        BigradedMap {
            src: m.clone(),
            dst: m.clone(),
            bideg: Bideg::ZERO,
            blocks,
        }
    }

    /// Validating constructor: every block must have the right shape and sit
    /// on a bidegree where both source and target are nonzero (or be zero).
    pub fn new(
        src: &BigradedModule,
        dst: &BigradedModule,
        bideg: Bideg,
        blocks: impl IntoIterator<Item = (Bideg, Matrix<F>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(src, dst, bideg);
        for (s, m) in blocks {
            let (r, c) = (dst.dim(s + bideg), src.dim(s));
            if m.shape() != (r, c) {
                if m.is_zero() && m.is_empty() {
                    continue;
                }
                return Err(Error::Dimension(format!(
                    "block at source {s} is {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
            if out.blocks.contains_key(&s) {
                return Err(Error::Invalid(format!("two blocks with source {s}")));
            }
            if !m.is_zero() {
                out.blocks.insert(s, m);
            }
        }
        Ok(out)
    }

    /// Builds a map by evaluating on every source basis vector.
    pub fn from_fn(
        src: &BigradedModule,
        dst: &BigradedModule,
        bideg: Bideg,
        mut f: impl FnMut(BasisElem) -> Vector<F>,
    ) -> Self {
        let mut out = Self::zero(src, dst, bideg);
        for (&s, &n) in src.dims() {
            let t = s + bideg;
            let rows = dst.dim(t);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(rows, n);
            for j in 0..n {
                for (e, c) in f(BasisElem::new(s, j)).iter() {
                    assert_eq!(e.deg, t, "from_fn: value has the wrong bidegree");
                    m[(e.idx, j)] += c.clone();
                }
            }
            if !m.is_zero() {
                out.blocks.insert(s, m);
            }
        }
        out
    }

    pub fn src(&self) -> &BigradedModule {
        &self.src
    }

    pub fn dst(&self) -> &BigradedModule {
        &self.dst
    }

    pub fn bideg(&self) -> Bideg {
        self.bideg
    }

    /// Nonzero blocks keyed by source bidegree.
    pub fn blocks(&self) -> &BTreeMap<Bideg, Matrix<F>> {
        &self.blocks
    }

    pub fn block(&self, s: Bideg) -> Option<&Matrix<F>> {
        self.blocks.get(&s)
    }

    pub fn block_or_zero(&self, s: Bideg) -> Matrix<F> {
        self.blocks
            .get(&s)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dst.dim(s + self.bideg), self.src.dim(s)))
    }

    pub fn set_block(&mut self, s: Bideg, m: Matrix<F>) {
        assert_eq!(
            m.shape(),
            (self.dst.dim(s + self.bideg), self.src.dim(s)),
            "set_block shape"
        );
        if m.is_zero() {
            self.blocks.remove(&s);
        } else {
            self.blocks.insert(s, m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// Image of a basis vector.
    pub fn apply_basis(&self, e: BasisElem) -> Vector<F> {
        let mut v = Vector::new();
        if let Some(m) = self.blocks.get(&e.deg) {
            let t = e.deg + self.bideg;
            for i in 0..m.rows() {
                v.add_term(BasisElem::new(t, i), m[(i, e.idx)].clone());
            }
        }
        v
    }

    pub fn apply(&self, x: &Vector<F>) -> Vector<F> {
        let mut v = Vector::new();
        for (e, c) in x.iter() {
            v.add_scaled(c, &self.apply_basis(*e));
        }
        v
    }

    fn assert_parallel(&self, o: &Self) {
        assert!(
            self.src == o.src && self.dst == o.dst && self.bideg == o.bideg,
            "maps are not parallel: {} vs {}",
            self.bideg,
            o.bideg
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        self.add_scaled_assign(&F::one(), o);
    }

    /// `self += c * o`.
    pub fn add_scaled_assign(&mut self, c: &F, o: &Self) {
        self.assert_parallel(o);
        if c.is_zero() {
            return;
        }
        for (&s, m) in &o.blocks {
            match self.blocks.get_mut(&s) {
                Some(b) => b.add_scaled(c, m),
                None => {
                    self.blocks.insert(s, m.scale(c));
                }
            }
        }
        self.blocks.retain(|_, m| !m.is_zero());
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_assign(&-F::one(), o);
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.src, &self.dst, self.bideg);
        }
        BigradedMap {
            blocks: self.blocks.iter().map(|(&s, m)| (s, m.scale(c))).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// `self ∘ f` (apply `f` first).
    pub fn compose(&self, f: &Self) -> Self {
        assert!(f.dst == self.src, "compose: intermediate modules differ");
        let mut out = Self::zero(&f.src, &self.dst, self.bideg + f.bideg);
        for (&s, fm) in &f.blocks {
            if let Some(gm) = self.blocks.get(&(s + f.bideg)) {
                let m = gm.mul(fm);
                if !m.is_zero() {
                    out.blocks.insert(s, m);
                }
            }
        }
        out
    }

    /// Checked composition for externally supplied maps.
    pub fn try_compose(&self, f: &Self) -> Result<Self> {
        if f.dst != self.src {
            return Err(Error::ModuleMismatch(
                "target of the first map differs from source of the second".into(),
            ));
        }
        Ok(self.compose(f))
    }

    /// Same blocks, reinterpreted between other modules with identical dims
    /// on the touched bidegrees. Used to move maps along relabellings.
    pub fn with_modules(&self, src: &BigradedModule, dst: &BigradedModule) -> Self {
        let out = BigradedMap {
            src: src.clone(),
            dst: dst.clone(),
            bideg: self.bideg,
            blocks: self.blocks.clone(),
        };
        for (&s, m) in &out.blocks {
            assert_eq!(m.shape(), (dst.dim(s + self.bideg), src.dim(s)));
        }
        out
    }

    /// Source bidegrees whose block is nonzero.
    pub fn nonzero_sources(&self) -> Vec<Bideg> {
        self.blocks
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&s, _)| s)
            .collect()
    }
}
