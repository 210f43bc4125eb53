use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, Vector};
use crate::field::Field;

/// A direct sum of shifted modules: in bidegree `b` the sum has the summands
/// `M_k(b + shift_k)` stacked in slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumLayout {
    slots: Vec<(BigradedModule, Bideg)>,
    module: BigradedModule,
}

impl SumLayout {
    pub fn new(slots: Vec<(BigradedModule, Bideg)>) -> Self {
        let module = BigradedModule::from_dims(
            slots
                .iter()
                .flat_map(|(m, sh)| m.dims().iter().map(move |(&b, &n)| (b - *sh, n))),
        );
        SumLayout { slots, module }
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot_module(&self, k: usize) -> &BigradedModule {
        &self.slots[k].0
    }

    pub fn shift(&self, k: usize) -> Bideg {
        self.slots[k].1
    }

    fn offset(&self, b: Bideg, k: usize) -> usize {
        self.slots[..k].iter().map(|(m, sh)| m.dim(b + *sh)).sum()
    }

    /// Basis vector of the sum for basis vector `e` of slot `k`.
    pub fn embed(&self, k: usize, e: BasisElem) -> BasisElem {
        let b = e.deg - self.slots[k].1;
        BasisElem::new(b, self.offset(b, k) + e.idx)
    }

    /// Slot and slot basis vector of a basis vector of the sum.
    pub fn locate(&self, e: BasisElem) -> (usize, BasisElem) {
        let mut idx = e.idx;
        for (k, (m, sh)) in self.slots.iter().enumerate() {
            let n = m.dim(e.deg + *sh);
            if idx < n {
                return (k, BasisElem::new(e.deg + *sh, idx));
            }
            idx -= n;
        }
        panic!("basis vector {e:?} outside the sum");
    }

    /// Inclusion of slot `k`, of bidegree `-shift_k`.
    pub fn inclusion<F: Field>(&self, k: usize) -> BigradedMap<F> {
        let (m, sh) = &self.slots[k];
        BigradedMap::from_fn(m, &self.module, -*sh, |e| Vector::single(self.embed(k, e), F::one()))
    }

    /// Projection onto slot `k`, of bidegree `shift_k`.
    pub fn projection<F: Field>(&self, k: usize) -> BigradedMap<F> {
        let (m, sh) = &self.slots[k];
        BigradedMap::from_fn(&self.module, m, *sh, |e| {
            let (l, x) = self.locate(e);
            if l == k {
                Vector::single(x, F::one())
            } else {
                Vector::new()
            }
        })
    }

    /// `incl_k ∘ f ∘ proj_l` for a map `f` from slot `l` to slot `k`.
    pub fn place<F: Field>(&self, k: usize, l: usize, f: &BigradedMap<F>) -> BigradedMap<F> {
        self.inclusion::<F>(k).compose(f).compose(&self.projection(l))
    }
}
