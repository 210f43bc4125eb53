use std::collections::{BTreeMap, HashMap};

use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, LinComb, Vector};
use crate::field::Field;

/// Pure tensor of basis vectors.
pub type Tuple = Vec<BasisElem>;

/// Element of a tensor product, as a combination of pure tensors.
pub type TensorVector<F> = LinComb<Tuple, F>;

/// Basis of `M_1 ⊗ ... ⊗ M_n`.
///
/// Within each total bidegree, pure tensors are ordered lexicographically by
/// the bidegrees of their factors and then by the basis indices. For two
/// factors this is: summands `A_{(p,q)} ⊗ B_{s-(p,q)}` in lexicographic order
/// of `(p,q)`, each laid out with the `A` index major.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    factors: Vec<BigradedModule>,
    module: BigradedModule,
    tuples: BTreeMap<Bideg, Vec<Tuple>>,
    index: HashMap<Tuple, usize>,
}

impl TensorLayout {
    pub fn new(factors: Vec<BigradedModule>) -> Self {
        let mut all: Vec<Tuple> = vec![Vec::new()];
        for m in &factors {
            let basis: Vec<BasisElem> = m.basis().collect();
            let mut next = Vec::with_capacity(all.len() * basis.len());
            for t in &all {
                for &b in &basis {
                    let mut u = t.clone();
                    u.push(b);
                    next.push(u);
                }
            }
            all = next;
        }
        let mut tuples: BTreeMap<Bideg, Vec<Tuple>> = BTreeMap::new();
        for t in all {
            tuples.entry(t.iter().map(|e| e.deg).sum()).or_default().push(t);
        }
        let mut index = HashMap::new();
        for list in tuples.values_mut() {
            list.sort_by(|a, b| {
                let ka = a.iter().map(|e| e.deg);
                let kb = b.iter().map(|e| e.deg);
                ka.cmp(kb)
                    .then_with(|| a.iter().map(|e| e.idx).cmp(b.iter().map(|e| e.idx)))
            });
            for (i, t) in list.iter().enumerate() {
                index.insert(t.clone(), i);
            }
        }
        let module = BigradedModule::from_dims(tuples.iter().map(|(&b, l)| (b, l.len())));
        TensorLayout {
            factors,
            module,
            tuples,
            index,
        }
    }

    /// `M^{⊗n}`.
    pub fn power(m: &BigradedModule, n: usize) -> Self {
        Self::new(vec![m.clone(); n])
    }

    pub fn factors(&self) -> &[BigradedModule] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn module(&self) -> &BigradedModule {
        &self.module
    }

    pub fn tuples(&self, deg: Bideg) -> &[Tuple] {
        self.tuples.get(&deg).map_or(&[], |v| v.as_slice())
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Bideg, &[Tuple])> {
        self.tuples.iter().map(|(&b, v)| (b, v.as_slice()))
    }

    /// Basis vector of the tensor module for a pure tensor.
    pub fn elem(&self, t: &[BasisElem]) -> BasisElem {
        let deg = t.iter().map(|e| e.deg).sum();
        let idx = *self
            .index
            .get(t)
            .unwrap_or_else(|| panic!("tuple {t:?} is not a basis tensor of this layout"));
        BasisElem::new(deg, idx)
    }

    /// Pure tensor for a basis vector of the tensor module.
    pub fn tuple(&self, e: BasisElem) -> &[BasisElem] {
        &self.tuples[&e.deg][e.idx]
    }

    pub fn flatten<F: Field>(&self, x: &TensorVector<F>) -> Vector<F> {
        x.iter().map(|(t, c)| (self.elem(t), c.clone())).collect()
    }
}

/// `f_1 ⊗ ... ⊗ f_n` with the Koszul rule
/// `(f_1 ⊗ ... ⊗ f_n)(x_1 ⊗ ... ⊗ x_n) = (-1)^{Σ_{s<t} <f_t, x_s>} f_1(x_1) ⊗ ... ⊗ f_n(x_n)`.
pub fn tensor_maps<F: Field>(
    maps: &[&BigradedMap<F>],
    src: &TensorLayout,
    dst: &TensorLayout,
) -> BigradedMap<F> {
    assert_eq!(maps.len(), src.arity());
    assert_eq!(maps.len(), dst.arity());
    for (k, f) in maps.iter().enumerate() {
        assert_eq!(f.src(), &src.factors()[k], "tensor_maps: source factor {k}");
        assert_eq!(f.dst(), &dst.factors()[k], "tensor_maps: target factor {k}");
    }
    let bideg = maps.iter().map(|f| f.bideg()).sum();
    BigradedMap::from_fn(src.module(), dst.module(), bideg, |e| {
        let t = src.tuple(e);
        let mut odd = false;
        for (s, x) in t.iter().enumerate() {
            for f in &maps[s + 1..] {
                odd ^= f.bideg().dot_odd(x.deg);
            }
        }
        let mut acc: TensorVector<F> = LinComb::single(Vec::new(), F::sign(odd));
        for (f, x) in maps.iter().zip(t) {
            acc = extend_tensor(&acc, &f.apply_basis(*x));
            if acc.is_zero() {
                break;
            }
        }
        dst.flatten(&acc)
    })
}

/// Appends a factor to every pure tensor: `x ⊗ v`.
pub fn extend_tensor<F: Field>(x: &TensorVector<F>, v: &Vector<F>) -> TensorVector<F> {
    let mut out = TensorVector::new();
    for (t, a) in x.iter() {
        for (e, b) in v.iter() {
            let mut u = t.clone();
            u.push(*e);
            out.add_term(u, a.clone() * b.clone());
        }
    }
    out
}

/// The symmetry `A ⊗ B -> B ⊗ A`, `a ⊗ b ↦ (-1)^{<a,b>} b ⊗ a`.
pub fn symmetry_iso<F: Field>(ab: &TensorLayout, ba: &TensorLayout) -> BigradedMap<F> {
    assert_eq!(ab.arity(), 2);
    assert_eq!(ab.factors()[0], ba.factors()[1]);
    assert_eq!(ab.factors()[1], ba.factors()[0]);
    BigradedMap::from_fn(ab.module(), ba.module(), Bideg::ZERO, |e| {
        let t = ab.tuple(e);
        let sign = F::sign(t[0].deg.dot_odd(t[1].deg));
        Vector::single(ba.elem(&[t[1], t[0]]), sign)
    })
}
