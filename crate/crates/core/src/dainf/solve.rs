//! Affine equations in families of multilinear maps, solved by probing the
//! residual on unit vectors.

use std::collections::{BTreeMap, HashMap};

use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule, TensorLayout};
use crate::field::Field;
use crate::linalg::Matrix;

type Key = (usize, usize);

/// Coordinates on families `(i, j) ↦ φ_{ij}: M^{⊗j} -> N`: one per matrix
/// entry of every block that can be nonzero.
#[derive(Clone, Debug)]
pub struct MapUnknowns {
    dst: BigradedModule,
    sources: BTreeMap<usize, BigradedModule>,
    bidegs: BTreeMap<Key, Bideg>,
    slots: Vec<(Key, BasisElem, BasisElem)>,
}

impl MapUnknowns {
    pub fn new(
        src: &BigradedModule,
        dst: &BigradedModule,
        keys: impl IntoIterator<Item = Key>,
        bideg: impl Fn(usize, usize) -> Bideg,
    ) -> Self {
        let mut sources = BTreeMap::new();
        let mut bidegs = BTreeMap::new();
        let mut slots = Vec::new();
        for (i, j) in keys {
            let s = sources
                .entry(j)
                .or_insert_with(|| TensorLayout::power(src, j).module().clone());
            let b = bideg(i, j);
            bidegs.insert((i, j), b);
            for e in s.basis() {
                for k in 0..dst.dim(e.deg + b) {
                    slots.push(((i, j), e, BasisElem::new(e.deg + b, k)));
                }
            }
        }
        MapUnknowns {
            dst: dst.clone(),
            sources,
            bidegs,
            slots,
        }
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    pub fn maps_of<F: Field>(&self, coords: &[F]) -> BTreeMap<Key, BigradedMap<F>> {
        assert_eq!(coords.len(), self.slots.len());
        let mut cols: HashMap<Key, HashMap<BasisElem, Vec<(BasisElem, F)>>> = HashMap::new();
        for (slot, c) in self.slots.iter().zip(coords) {
            if !c.is_zero() {
                cols.entry(slot.0).or_default().entry(slot.1).or_default().push((slot.2, c.clone()));
            }
        }
        let mut out = BTreeMap::new();
        for (&key, &b) in &self.bidegs {
            let Some(kc) = cols.get(&key) else { continue };
            let m = BigradedMap::from_fn(&self.sources[&key.1], &self.dst, b, |e| {
                kc.get(&e).map_or_else(Default::default, |v| v.iter().cloned().collect())
            });
            out.insert(key, m);
        }
        out
    }
}

/// Flattens a residual into `(entry, value)` pairs.
fn entries<F: Field>(res: &BTreeMap<Key, BigradedMap<F>>) -> Vec<((Key, Bideg, usize, usize), F)> {
    let mut out = Vec::new();
    for (&k, m) in res {
        for (&s, blk) in m.blocks() {
            for r in 0..blk.rows() {
                for c in 0..blk.cols() {
                    if !blk[(r, c)].is_zero() {
                        out.push(((k, s, r, c), blk[(r, c)].clone()));
                    }
                }
            }
        }
    }
    out
}

/// Solutions of `residual(x) = 0` for a residual that is affine in the
/// family `x`: a particular solution and a kernel basis, as coordinates in
/// `space`. `None` when the system is inconsistent.
pub fn solve_affine<F: Field>(
    space: &MapUnknowns,
    residual: impl Fn(&BTreeMap<Key, BigradedMap<F>>) -> BTreeMap<Key, BigradedMap<F>>,
) -> Option<(Vec<F>, Vec<Vec<F>>)> {
    let n = space.dim();
    let mut index: HashMap<(Key, Bideg, usize, usize), usize> = HashMap::new();
    let mut place = |k| {
        let len = index.len();
        *index.entry(k).or_insert(len)
    };
    let base: Vec<(usize, F)> = entries(&residual(&BTreeMap::new()))
        .into_iter()
        .map(|(k, v)| (place(k), v))
        .collect();
    let mut columns: Vec<HashMap<usize, F>> = Vec::with_capacity(n);
    let mut unit = vec![F::zero(); n];
    for k in 0..n {
        unit[k] = F::one();
        let mut col: HashMap<usize, F> = HashMap::new();
        for (e, v) in entries(&residual(&space.maps_of(&unit))) {
            *col.entry(place(e)).or_insert_with(F::zero) += v;
        }
        for (row, v) in &base {
            *col.entry(*row).or_insert_with(F::zero) -= v.clone();
        }
        col.retain(|_, v| !v.is_zero());
        columns.push(col);
        unit[k] = F::zero();
    }
    let rows = index.len();
    let a = Matrix::from_fn(rows, n, |i, j| columns[j].get(&i).cloned().unwrap_or_else(F::zero));
    let mut rhs = Matrix::zeros(rows, 1);
    for (row, v) in base {
        rhs[(row, 0)] -= v;
    }
    let x = a.solve(&rhs)?;
    let kernel = a.kernel_basis();
    let particular = (0..n).map(|i| x[(i, 0)].clone()).collect();
    let basis = (0..kernel.cols()).map(|j| kernel.column(j)).collect();
    Some((particular, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::linalg::Matrix;

    #[test]
    fn coordinates_round_trip() {
        let m = BigradedModule::from_dims([(Bideg(0, 0), 2), (Bideg(1, 1), 1)]);
        let space = MapUnknowns::new(&m, &m, [(0, 1), (1, 1)], |i, _| Bideg(-(i as i32), -(i as i32)));
        // (0,1): 2·2 + 1·1 entries; (1,1): (1,1) -> (0,0), 2 entries
        assert_eq!(space.dim(), 7);
        let coords: Vec<Q> = (0..7).map(|k| Q::from_i64(k as i64 + 1)).collect();
        let maps = space.maps_of(&coords);
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[&(1, 1)].block(Bideg(1, 1)).unwrap(), &Matrix::from_rows(vec![vec![Q::from_i64(6)], vec![Q::from_i64(7)]], 1).unwrap());
    }

    #[test]
    fn solves_a_fixed_point_equation() {
        // φ - 2·id = 0 on a one-dimensional module
        let m = BigradedModule::unit();
        let space = MapUnknowns::new(&m, &m, [(0, 1)], |_, _| Bideg::ZERO);
        let (x, ker) = solve_affine(&space, |f| {
            let mut r = f.get(&(0, 1)).cloned().unwrap_or_else(|| BigradedMap::zero(&m, &m, Bideg::ZERO));
            r.add_scaled_assign(&Q::from_i64(-2), &BigradedMap::identity(&m));
            BTreeMap::from([((0, 1), r)])
        })
        .unwrap();
        assert_eq!(x, vec![Q::from_i64(2)]);
        assert!(ker.is_empty());
    }
}
