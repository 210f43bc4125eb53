use std::collections::HashMap;

use crate::bigraded::{BasisElem, Bideg, BigradedMap, LinComb, TensorLayout, TensorVector, Tuple, Vector};
use crate::field::Field;

/// A multilinear map stored column by column for fast evaluation on pure
/// tensors of basis vectors.
#[derive(Clone, Debug)]
pub struct Operation<F> {
    arity: usize,
    bideg: Bideg,
    cols: HashMap<Tuple, Vec<(BasisElem, F)>>,
}

impl<F: Field> Operation<F> {
    /// `map` must have source `layout.module()`.
    pub fn from_map(map: &BigradedMap<F>, layout: &TensorLayout) -> Self {
        assert_eq!(map.src(), layout.module(), "operation source is not the layout");
        let mut cols = HashMap::new();
        for (&s, m) in map.blocks() {
            let t = s + map.bideg();
            for (j, tuple) in layout.tuples(s).iter().enumerate() {
                let col: Vec<(BasisElem, F)> = (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (BasisElem::new(t, i), m[(i, j)].clone()))
                    .collect();
                if !col.is_empty() {
                    cols.insert(tuple.clone(), col);
                }
            }
        }
        Operation {
            arity: layout.arity(),
            bideg: map.bideg(),
            cols,
        }
    }

    /// Operation given directly by its value on basis tensors.
    pub fn from_fn(
        layout: &TensorLayout,
        bideg: Bideg,
        mut f: impl FnMut(&[BasisElem]) -> Vector<F>,
    ) -> Self {
        let mut cols = HashMap::new();
        for (_, tuples) in layout.blocks() {
            for t in tuples {
                let v: Vec<(BasisElem, F)> = f(t).into_terms().into_iter().collect();
                if !v.is_empty() {
                    cols.insert(t.clone(), v);
                }
            }
        }
        Operation {
            arity: layout.arity(),
            bideg,
            cols,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bideg(&self) -> Bideg {
        self.bideg
    }

    pub fn eval(&self, t: &[BasisElem]) -> &[(BasisElem, F)] {
        debug_assert_eq!(t.len(), self.arity);
        self.cols.get(t).map_or(&[], |v| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }
}

/// One slot of a tensor product of operations.
#[derive(Clone, Copy, Debug)]
pub enum Factor<'a, F> {
    Id,
    Op(&'a Operation<F>),
}

impl<F: Field> Factor<'_, F> {
    pub fn arity(&self) -> usize {
        match self {
            Factor::Id => 1,
            Factor::Op(o) => o.arity(),
        }
    }

    pub fn bideg(&self) -> Bideg {
        match self {
            Factor::Id => Bideg::ZERO,
            Factor::Op(o) => o.bideg(),
        }
    }
}

/// `(g_1 ⊗ ... ⊗ g_l)(x_1 ⊗ ... ⊗ x_n)`: each `g_s` eats the next `arity(g_s)`
/// inputs; the sign is `(-1)^{Σ_{s<t} <g_t, inputs of g_s>}`.
pub fn apply_factors<F: Field>(factors: &[Factor<'_, F>], t: &[BasisElem]) -> TensorVector<F> {
    let mut odd = false;
    let mut pos = 0;
    let mut later: Bideg = factors.iter().map(|g| g.bideg()).sum();
    let mut acc: Vec<(Tuple, F)> = vec![(Vec::with_capacity(factors.len()), F::one())];
    for g in factors {
        let k = g.arity();
        let inputs = &t[pos..pos + k];
        pos += k;
        later = later - g.bideg();
        let in_deg: Bideg = inputs.iter().map(|e| e.deg).sum();
        odd ^= later.dot_odd(in_deg);
        match g {
            Factor::Id => {
                for (u, _) in acc.iter_mut() {
                    u.push(inputs[0]);
                }
            }
            Factor::Op(o) => {
                let vals = o.eval(inputs);
                if vals.is_empty() {
                    return TensorVector::new();
                }
                let mut next = Vec::with_capacity(acc.len() * vals.len());
                for (u, c) in &acc {
                    for (e, x) in vals {
                        let mut w = u.clone();
                        w.push(*e);
                        next.push((w, c.clone() * x.clone()));
                    }
                }
                acc = next;
            }
        }
    }
    assert_eq!(pos, t.len(), "factor arities do not match the input length");
    let sign = F::sign(odd);
    acc.into_iter().map(|(u, c)| (u, c * sign.clone())).collect()
}

/// Applies an operation of arity `n` to an element of the `n`-fold tensor.
pub fn apply_operation<F: Field>(op: &Operation<F>, x: &TensorVector<F>) -> Vector<F> {
    let mut out = LinComb::new();
    for (t, c) in x.iter() {
        for (e, v) in op.eval(t) {
            out.add_term(*e, c.clone() * v.clone());
        }
    }
    out
}

/// `(-1)^{Σ_{s<t} <g_t, x_s>}` for maps of bidegrees `maps` applied to
/// inputs grouped into total bidegrees `inputs`.
pub fn koszul_odd(maps: &[Bideg], inputs: &[Bideg]) -> bool {
    assert_eq!(maps.len(), inputs.len());
    let mut odd = false;
    for s in 0..inputs.len() {
        for g in &maps[s + 1..] {
            odd ^= g.dot_odd(inputs[s]);
        }
    }
    odd
}
