use std::collections::{BTreeMap, HashMap};

use crate::bigraded::{BasisElem, Bideg, BigradedModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::report::Report;

/// Coordinates on the total spaces `Tot^n = ⊕_i A_i^{n+i}` of a bigraded
/// module: summands ordered by column `i` ascending, then by basis index, so
/// every filtration step `F_p Tot^n` is a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotLayout {
    module: BigradedModule,
    /// `n -> [(bidegree, offset, dim)]`.
    degrees: BTreeMap<i32, Vec<(Bideg, usize, usize)>>,
}

impl TotLayout {
    pub fn new(module: &BigradedModule) -> Self {
        let mut degrees: BTreeMap<i32, Vec<(Bideg, usize, usize)>> = BTreeMap::new();
        for (&b, &n) in module.dims() {
            degrees.entry(b.total()).or_default().push((b, 0, n));
        }
        for list in degrees.values_mut() {
            list.sort_by_key(|x| x.0.h());
            let mut off = 0;
            for x in list.iter_mut() {
                x.1 = off;
                off += x.2;
            }
        }
        TotLayout {
            module: module.clone(),
            degrees,
        }
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.degrees.keys().copied()
    }

    pub fn dim(&self, n: i32) -> usize {
        self.degrees.get(&n).map_or(0, |l| l.iter().map(|x| x.2).sum())
    }

    pub fn pieces(&self, n: i32) -> &[(Bideg, usize, usize)] {
        self.degrees.get(&n).map_or(&[], |l| l.as_slice())
    }

    /// Offset of the summand `b` inside `Tot^{b.total()}`.
    pub fn offset(&self, b: Bideg) -> Option<usize> {
        self.pieces(b.total()).iter().find(|x| x.0 == b).map(|x| x.1)
    }

    /// `dim F_p Tot^n`.
    pub fn prefix(&self, n: i32, p: i32) -> usize {
        self.pieces(n).iter().filter(|x| x.0.h() <= p).map(|x| x.2).sum()
    }
}

/// A linear map between total spaces of degree `degree` which raises the
/// column index by at most `shift`: it is stored as blocks `A_s -> B_t` with
/// `t.total() = s.total() + degree` and `t.h() <= s.h() + shift`.
#[derive(Clone, Debug)]
pub struct TotalMap<F> {
    src: BigradedModule,
    dst: BigradedModule,
    degree: i32,
    shift: i32,
    blocks: BTreeMap<(Bideg, Bideg), Matrix<F>>,
}

impl<F: Field> PartialEq for TotalMap<F> {
    fn eq(&self, o: &Self) -> bool {
        self.src == o.src && self.dst == o.dst && self.degree == o.degree && self.sub(o).is_zero()
    }
}

impl<F: Field> Eq for TotalMap<F> {}

impl<F: Field> TotalMap<F> {
    pub fn zero(src: &BigradedModule, dst: &BigradedModule, degree: i32, shift: i32) -> Self {
        TotalMap {
            src: src.clone(),
            dst: dst.clone(),
            degree,
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(m: &BigradedModule) -> Self {
        let mut out = Self::zero(m, m, 0, 0);
        for (&b, &n) in m.dims() {
            out.blocks.insert((b, b), Matrix::identity(n));
        }
        out
    }

    pub fn src(&self) -> &BigradedModule {
        &self.src
    }

    pub fn dst(&self) -> &BigradedModule {
        &self.dst
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn blocks(&self) -> &BTreeMap<(Bideg, Bideg), Matrix<F>> {
        &self.blocks
    }

    pub fn block(&self, s: Bideg, t: Bideg) -> Option<&Matrix<F>> {
        self.blocks.get(&(s, t))
    }

    /// Adds `m` to the block `A_s -> B_t`, validating degree, filtration and shape.
    pub fn add_block(&mut self, s: Bideg, t: Bideg, m: &Matrix<F>) -> Result<()> {
        if t.total() != s.total() + self.degree {
            return Err(Error::Invalid(format!(
                "block {s} -> {t} does not have total degree {}",
                self.degree
            )));
        }
        if m.is_zero() && m.shape() == (self.dst.dim(t), self.src.dim(s)) {
            return Ok(());
        }
        if t.h() > s.h() + self.shift {
            return Err(Error::Filtration(format!(
                "block {s} -> {t} raises the column index by more than {}",
                self.shift
            )));
        }
        if m.shape() != (self.dst.dim(t), self.src.dim(s)) {
            return Err(Error::Dimension(format!(
                "block {s} -> {t} has shape {:?}, expected {:?}",
                m.shape(),
                (self.dst.dim(t), self.src.dim(s))
            )));
        }
        let sum = match self.blocks.get(&(s, t)) {
            Some(x) => x.add(m),
            None => m.clone(),
        };
        if sum.is_zero() {
            self.blocks.remove(&(s, t));
        } else {
            self.blocks.insert((s, t), sum);
        }
        Ok(())
    }

    /// Builds a map from its values on basis vectors.
    pub fn from_fn(
        src: &BigradedModule,
        dst: &BigradedModule,
        degree: i32,
        shift: i32,
        mut f: impl FnMut(BasisElem) -> Vec<(BasisElem, F)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(Bideg, Bideg), Matrix<F>> = BTreeMap::new();
        for e in src.basis() {
            for (t, c) in f(e) {
                if t.deg.total() != e.deg.total() + degree {
                    return Err(Error::Invalid(format!("value on {} has the wrong degree", e.deg)));
                }
                let m = acc
                    .entry((e.deg, t.deg))
                    .or_insert_with(|| Matrix::zeros(dst.dim(t.deg), src.dim(e.deg)));
                m[(t.idx, e.idx)] += c;
            }
        }
        let mut out = Self::zero(src, dst, degree, shift);
        for ((s, t), m) in acc {
            out.add_block(s, t, &m)?;
        }
        Ok(out)
    }

    /// Image of a basis vector.
    pub fn apply_basis(&self, e: BasisElem) -> Vec<(BasisElem, F)> {
        let lo = (e.deg, Bideg(i32::MIN, i32::MIN));
        let hi = (e.deg, Bideg(i32::MAX, i32::MAX));
        let mut out = Vec::new();
        for (&(_, t), m) in self.blocks.range(lo..=hi) {
            for i in 0..m.rows() {
                if !m[(i, e.idx)].is_zero() {
                    out.push((BasisElem::new(t, i), m[(i, e.idx)].clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn add_scaled(&self, c: &F, o: &Self) -> Self {
        assert!(
            self.src == o.src && self.dst == o.dst && self.degree == o.degree,
            "total maps are not parallel"
        );
        let mut out = self.clone();
        out.shift = self.shift.max(o.shift);
        for (&(s, t), m) in &o.blocks {
            out.add_block(s, t, &m.scale(c)).expect("parallel block");
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.add_scaled(&F::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add_scaled(&-F::one(), o)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.src, &self.dst, self.degree, self.shift);
        for (&(s, t), m) in &self.blocks {
            out.add_block(s, t, &m.scale(c)).expect("scaled block");
        }
        out
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &Self) -> Self {
        assert!(f.dst == self.src, "compose: modules do not match");
        let mut by_src: HashMap<Bideg, Vec<(Bideg, &Matrix<F>)>> = HashMap::new();
        for (&(t, u), g) in &self.blocks {
            by_src.entry(t).or_default().push((u, g));
        }
        let mut out = Self::zero(&f.src, &self.dst, f.degree + self.degree, f.shift + self.shift);
        for (&(s, t), fm) in &f.blocks {
            for &(u, g) in by_src.get(&t).map_or(&[][..], |v| v.as_slice()) {
                out.add_block(s, u, &g.mul(fm)).expect("composite block");
            }
        }
        out
    }

    /// The same map with another allowed filtration shift, which must cover
    /// the blocks present.
    pub fn with_shift(&self, shift: i32) -> Self {
        assert!(
            self.needed_shift().map_or(true, |s| s <= shift),
            "blocks raise the filtration by more than {shift}"
        );
        TotalMap {
            shift,
            ..self.clone()
        }
    }

    /// Smallest shift the nonzero blocks actually need.
    pub fn needed_shift(&self) -> Option<i32> {
        self.blocks.keys().map(|(s, t)| t.h() - s.h()).max()
    }

    /// The matrix `Tot^n(src) -> Tot^{n+degree}(dst)` in [`TotLayout`] coordinates.
    pub fn dense(&self, ls: &TotLayout, ld: &TotLayout, n: i32) -> Matrix<F> {
        let mut out = Matrix::zeros(ld.dim(n + self.degree), ls.dim(n));
        for &(s, so, _) in ls.pieces(n) {
            for &(t, to, _) in ld.pieces(n + self.degree) {
                if let Some(m) = self.blocks.get(&(s, t)) {
                    out.set_block(to, so, m);
                }
            }
        }
        out
    }

    /// Reads blocks back from dense matrices, one per source total degree.
    pub fn from_dense(
        src: &BigradedModule,
        dst: &BigradedModule,
        degree: i32,
        shift: i32,
        mut dense: impl FnMut(i32) -> Matrix<F>,
    ) -> Result<Self> {
        let (ls, ld) = (TotLayout::new(src), TotLayout::new(dst));
        let mut out = Self::zero(src, dst, degree, shift);
        for n in ls.degrees() {
            let m = dense(n);
            if m.shape() != (ld.dim(n + degree), ls.dim(n)) {
                return Err(Error::Dimension(format!("dense map in degree {n} has the wrong shape")));
            }
            for &(s, so, sd) in ls.pieces(n) {
                for &(t, to, td) in ld.pieces(n + degree) {
                    out.add_block(s, t, &m.block(to, so, td, sd))?;
                }
            }
        }
        Ok(out)
    }
}

/// Coordinates on the vector space of all [`TotalMap`]s of a given degree
/// and filtration shift, used to set up linear systems over such maps.
#[derive(Clone, Debug)]
pub struct TotalMapSpace {
    src: BigradedModule,
    dst: BigradedModule,
    degree: i32,
    shift: i32,
    /// `(s, t, rows, cols, offset)`.
    slots: Vec<(Bideg, Bideg, usize, usize, usize)>,
    dim: usize,
}

impl TotalMapSpace {
    pub fn new(src: &BigradedModule, dst: &BigradedModule, degree: i32, shift: i32) -> Self {
        let mut slots = Vec::new();
        let mut off = 0;
        for (&s, &c) in src.dims() {
            for (&t, &r) in dst.dims() {
                if t.total() == s.total() + degree && t.h() <= s.h() + shift {
                    slots.push((s, t, r, c, off));
                    off += r * c;
                }
            }
        }
        TotalMapSpace {
            src: src.clone(),
            dst: dst.clone(),
            degree,
            shift,
            slots,
            dim: off,
        }
    }

    /// Only blocks `s -> t` accepted by `keep`.
    pub fn restricted(mut self, keep: impl Fn(Bideg, Bideg) -> bool) -> Self {
        let mut off = 0;
        self.slots.retain(|x| keep(x.0, x.1));
        for x in self.slots.iter_mut() {
            x.4 = off;
            off += x.2 * x.3;
        }
        self.dim = off;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn map_of<F: Field>(&self, coords: &[F]) -> TotalMap<F> {
        assert_eq!(coords.len(), self.dim, "coordinate vector length");
        let mut out = TotalMap::zero(&self.src, &self.dst, self.degree, self.shift);
        for &(s, t, r, c, off) in &self.slots {
            let m = Matrix::from_fn(r, c, |i, j| coords[off + i * c + j].clone());
            out.add_block(s, t, &m).expect("slot block");
        }
        out
    }

    /// Coordinates of `f`, or `None` if `f` has a block outside the space.
    pub fn coords_of<F: Field>(&self, f: &TotalMap<F>) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); self.dim];
        let mut used = 0;
        for &(s, t, r, c, off) in &self.slots {
            if let Some(m) = f.block(s, t) {
                used += 1;
                for i in 0..r {
                    for j in 0..c {
                        v[off + i * c + j] = m[(i, j)].clone();
                    }
                }
            }
        }
        (used == f.blocks().len()).then_some(v)
    }

    /// Kernel of a linear operator `L` from this space into `target`, as a
    /// list of maps; `L` is evaluated on unit maps.
    pub fn kernel<F: Field>(
        &self,
        target: &TotalMapSpace,
        op: impl Fn(&TotalMap<F>) -> TotalMap<F>,
    ) -> Vec<TotalMap<F>> {
        let mut m = Matrix::zeros(target.dim, self.dim);
        let mut unit = vec![F::zero(); self.dim];
        for k in 0..self.dim {
            unit[k] = F::one();
            let img = op(&self.map_of(&unit));
            let col = target.coords_of(&img).expect("operator lands in the target space");
            for (i, x) in col.into_iter().enumerate() {
                m[(i, k)] = x;
            }
            unit[k] = F::zero();
        }
        let ker = m.kernel_basis();
        (0..ker.cols()).map(|j| self.map_of(&ker.column(j))).collect()
    }
}

/// A cochain complex `(Tot, d)` split along a bigraded module, filtered by
/// columns: `F_p Tot^n = ⊕_{i <= p} A_i^{n+i}`.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F> {
    layout: TotLayout,
    d: TotalMap<F>,
}

impl_field_eq!(FilteredComplex { layout, d });

impl<F: Field> FilteredComplex<F> {
    /// `d` must have degree 1 and respect the filtration.
    pub fn new(d: TotalMap<F>) -> Result<Self> {
        if d.src() != d.dst() || d.degree() != 1 {
            return Err(Error::Invalid("differential must be a degree 1 endomorphism".into()));
        }
        if d.needed_shift().is_some_and(|s| s > 0) {
            return Err(Error::Filtration("differential raises the filtration".into()));
        }
        let d = TotalMap { shift: 0, ..d };
        Ok(FilteredComplex {
            layout: TotLayout::new(d.src()),
            d,
        })
    }

    pub fn module(&self) -> &BigradedModule {
        self.layout.module()
    }

    pub fn layout(&self) -> &TotLayout {
        &self.layout
    }

    pub fn d(&self) -> &TotalMap<F> {
        &self.d
    }

    pub fn dense_d(&self, n: i32) -> Matrix<F> {
        self.d.dense(&self.layout, &self.layout, n)
    }
}

/// Verifies `d² = 0`; filtration compatibility holds by construction.
pub fn check_filtered<F: Field>(k: &FilteredComplex<F>) -> Report {
    let mut rep = Report::new("filtered complex");
    let dd = k.d().compose(k.d());
    let mut seen = std::collections::BTreeSet::new();
    for ((s, _), m) in dd.blocks() {
        if !m.is_zero() && seen.insert(*s) {
            rep.fail("d^2", Some(*s), "");
        }
    }
    rep
}

/// Verifies `g ∘ d = d ∘ f` for a degree 0 map between filtered complexes.
pub fn check_chain_map<F: Field>(a: &FilteredComplex<F>, b: &FilteredComplex<F>, f: &TotalMap<F>) -> Report {
    let mut rep = Report::new("filtered chain map");
    if f.src() != a.module() || f.dst() != b.module() || f.degree() != 0 {
        rep.fail("shape", None, "map does not fit the complexes");
        return rep;
    }
    if f.needed_shift().is_some_and(|s| s > 0) {
        rep.fail("filtration", None, "map raises the filtration");
    }
    let res = b.d().compose(f).sub(&f.compose(a.d()));
    let mut seen = std::collections::BTreeSet::new();
    for ((s, _), m) in res.blocks() {
        if !m.is_zero() && seen.insert(*s) {
            rep.fail("d f = f d", Some(*s), "");
        }
    }
    rep
}
