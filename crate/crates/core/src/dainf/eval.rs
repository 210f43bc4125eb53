//! Evaluation of composites of multilinear maps on basis tensors.

use std::collections::{BTreeMap, HashMap};

use crate::bigraded::{
    apply_factors, apply_operation, BasisElem, Bideg, BigradedMap, BigradedModule, Factor, Operation, TensorLayout,
    Vector,
};
use crate::field::Field;

/// Tensor powers `M^{⊗n}` of one module, built on demand.
pub(crate) struct Powers {
    module: BigradedModule,
    layouts: HashMap<usize, TensorLayout>,
}

impl Powers {
    pub fn new(module: &BigradedModule) -> Self {
        Powers {
            module: module.clone(),
            layouts: HashMap::new(),
        }
    }

    pub fn get(&mut self, n: usize) -> &TensorLayout {
        let m = &self.module;
        self.layouts.entry(n).or_insert_with(|| TensorLayout::power(m, n))
    }

    /// Basis vectors of `M^{⊗n}` with their pure tensors.
    pub fn basis(&mut self, n: usize) -> Vec<(BasisElem, Vec<BasisElem>)> {
        let lay = self.get(n);
        lay.module().basis().map(|e| (e, lay.tuple(e).to_vec())).collect()
    }
}

/// Indexed maps `M^{⊗j} -> N` turned into operations.
pub(crate) struct OpTable<F> {
    pub ops: BTreeMap<(usize, usize), Operation<F>>,
}

impl<F: Field> OpTable<F> {
    pub fn new(maps: &BTreeMap<(usize, usize), BigradedMap<F>>, powers: &mut Powers) -> Self {
        let ops = maps
            .iter()
            .map(|(&(i, j), m)| ((i, j), Operation::from_map(m, powers.get(j))))
            .collect();
        OpTable { ops }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Operation<F>> {
        self.ops.get(&(i, j))
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ops.keys().copied()
    }
}

/// `outer((factors)(x))` for a pure tensor `x`.
pub(crate) fn eval_composite<F: Field>(outer: &Operation<F>, factors: &[Factor<'_, F>], x: &[BasisElem]) -> Vector<F> {
    let inner = apply_factors(factors, x);
    if inner.is_zero() {
        return Vector::new();
    }
    apply_operation(outer, &inner)
}

/// `1^{⊗r} ⊗ op ⊗ 1^{⊗t}`.
pub(crate) fn padded<F: Field>(r: usize, op: &Operation<F>, t: usize) -> Vec<Factor<'_, F>> {
    let mut v = vec![Factor::Id; r];
    v.push(Factor::Op(op));
    v.extend(std::iter::repeat(Factor::Id).take(t));
    v
}

/// Residual maps keyed by relation index, accumulated basis tensor by basis
/// tensor.
pub(crate) struct Accumulator<F> {
    pub terms: BTreeMap<(usize, usize), HashMap<BasisElem, Vector<F>>>,
}

impl<F: Field> Accumulator<F> {
    pub fn new() -> Self {
        Accumulator { terms: BTreeMap::new() }
    }

    pub fn add(&mut self, key: (usize, usize), src: BasisElem, c: &F, v: &Vector<F>) {
        if v.is_zero() {
            return;
        }
        self.terms
            .entry(key)
            .or_default()
            .entry(src)
            .or_default()
            .add_scaled(c, v);
    }

    /// One map per key, of bidegree `bideg(key)`; zero maps are dropped.
    pub fn into_maps(
        self,
        powers: &mut Powers,
        dst: &BigradedModule,
        bideg: impl Fn((usize, usize)) -> Bideg,
    ) -> BTreeMap<(usize, usize), BigradedMap<F>> {
        let mut out = BTreeMap::new();
        for (key, cols) in self.terms {
            let lay = powers.get(key.1);
            let m = BigradedMap::from_fn(lay.module(), dst, bideg(key), |e| cols.get(&e).cloned().unwrap_or_default());
            if !m.is_zero() {
                out.insert(key, m);
            }
        }
        out
    }
}

/// All sequences `(p_1, q_1), ..., (p_l, q_l)` of keys with `Σ q = total`.
pub(crate) fn sequences(keys: &[(usize, usize)], l: usize, total: usize) -> Vec<Vec<(usize, usize)>> {
    slot_sequences(&vec![keys; l], total)
}

/// Sequences with entry `s` drawn from `slots[s]` and `Σ q = total`.
pub(crate) fn slot_sequences(slots: &[&[(usize, usize)]], total: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        slots: &[&[(usize, usize)]],
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let n = cur.len();
        if n == slots.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots_after = slots.len() - n - 1;
        for &(p, q) in slots[n] {
            if q + slots_after <= left {
                cur.push((p, q));
                go(slots, left - q, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(slots, total, &mut Vec::with_capacity(slots.len()), &mut out);
    out
}
