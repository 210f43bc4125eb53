use std::collections::BTreeMap;

use crate::bigraded::{BasisElem, Bideg, BigradedMap, Operation, SumLayout, TensorLayout, Vector};
use crate::field::Field;
use crate::twisted::path::{path_layout, X, Y, Z};

use super::eval::Powers;
use super::tensor::{lambda_r_dga, tensor_twisted_dga, LambdaR};
use super::{transport_algebra, DAInfAlgebra, DAInfMorphism};

/// The `r`-path `P_r(A)` with its structure maps.
#[derive(Clone, Debug)]
pub struct DAInfPath<F> {
    pub r: usize,
    pub algebra: DAInfAlgebra<F>,
    pub layout: SumLayout,
    /// `∂⁻(x,y,z) = x`.
    pub minus: DAInfMorphism<F>,
    /// `∂⁺(x,y,z) = z`.
    pub plus: DAInfMorphism<F>,
    /// `ι(x) = (x,0,x)`.
    pub iota: DAInfMorphism<F>,
    /// `∂⁰(x,y,z) = y`, a bare map of bidegree `(r, r-1)`.
    pub middle: BigradedMap<F>,
}

/// `(-1)^{<u, x>}` for `u` of bidegree `(-r, 1-r)`.
fn bar_odd(r: usize, x: Bideg) -> bool {
    Bideg(-(r as i32), 1 - r as i32).dot_odd(x)
}

/// `diag(φ, ±φ, φ) ∘ t_j` on one pure tensor of `P_r(A)^{⊗j}`: only the
/// patterns `x..x`, `z..z` and `x..x y z..z` contribute.
fn through_t<F: Field>(
    src: &SumLayout,
    dst: &SumLayout,
    r: usize,
    middle_odd: bool,
    phi: &Operation<F>,
    xs: &[BasisElem],
) -> Vector<F> {
    let parts: Vec<(usize, BasisElem)> = xs.iter().map(|e| src.locate(*e)).collect();
    let inner: Vec<BasisElem> = parts.iter().map(|p| p.1).collect();
    let (slot, odd) = if parts.iter().all(|p| p.0 == X) {
        (X, false)
    } else if parts.iter().all(|p| p.0 == Z) {
        (Z, false)
    } else {
        let Some(s) = parts.iter().position(|p| p.0 != X) else { unreachable!() };
        if parts[s].0 != Y || parts[s + 1..].iter().any(|p| p.0 != Z) {
            return Vector::new();
        }
        let bar = parts[..s].iter().fold(false, |acc, p| acc ^ bar_odd(r, p.1.deg));
        (Y, middle_odd ^ bar)
    };
    let c = F::sign(odd);
    phi.eval(&inner).iter().map(|(e, v)| (dst.embed(slot, *e), c.clone() * v.clone())).collect()
}

/// `M_{ij} = diag(m_{ij}, (-1)^{rj+i+j} m_{ij}, m_{ij}) ∘ t_j`, plus the
/// entries `-1` (from `x`) and `1` (from `z`) into `y` in `M_{r1}`.
pub fn path_dainf<F: Field>(a: &DAInfAlgebra<F>, r: usize) -> DAInfPath<F> {
    let l = path_layout(a.module(), r);
    let module = l.module().clone();
    let mut ap = Powers::new(a.module());
    let mut pp = Powers::new(&module);
    let mut maps: BTreeMap<(usize, usize), BigradedMap<F>> = BTreeMap::new();
    for (&(i, j), m) in a.maps() {
        let op = Operation::from_map(m, ap.get(j));
        let lay = pp.get(j);
        let middle_odd = (r * j + i + j) % 2 == 1;
        let big = BigradedMap::from_fn(lay.module(), &module, m.bideg(), |e| {
            through_t(&l, &l, r, middle_odd, &op, lay.tuple(e))
        });
        maps.insert((i, j), big);
    }
    let id = BigradedMap::identity(a.module());
    let mut jump = l.place(Y, Z, &id);
    jump.add_scaled_assign(&-F::one(), &l.place(Y, X, &id));
    maps.entry((r, 1)).and_modify(|m| m.add_assign(&jump)).or_insert(jump);
    let algebra = DAInfAlgebra::new(module, maps).expect("path structure maps");
    let minus = DAInfMorphism::strict(&algebra, a, l.projection(X)).expect("∂⁻");
    let plus = DAInfMorphism::strict(&algebra, a, l.projection(Z)).expect("∂⁺");
    let iota = DAInfMorphism::strict(a, &algebra, l.inclusion::<F>(X).add(&l.inclusion(Z))).expect("ι");
    let middle = l.projection(Y);
    DAInfPath {
        r,
        algebra,
        layout: l,
        minus,
        plus,
        iota,
        middle,
    }
}

/// `P_r(f)_{ij} = (f_{ij}, (-1)^{(r+1)(j-1)+i} f_{ij}, f_{ij}) ∘ t_j`.
pub fn path_dainf_morphism<F: Field>(f: &DAInfMorphism<F>, r: usize) -> DAInfMorphism<F> {
    let ps = path_dainf(f.src(), r);
    let pd = path_dainf(f.dst(), r);
    let mut ap = Powers::new(f.src().module());
    let mut pp = Powers::new(ps.algebra.module());
    let mut maps = BTreeMap::new();
    for (&(i, j), m) in f.maps() {
        let op = Operation::from_map(m, ap.get(j));
        let lay = pp.get(j);
        let middle_odd = ((r + 1) * (j - 1) + i) % 2 == 1;
        let big = BigradedMap::from_fn(lay.module(), pd.algebra.module(), m.bideg(), |e| {
            through_t(&ps.layout, &pd.layout, r, middle_odd, &op, lay.tuple(e))
        });
        maps.insert((i, j), big);
    }
    DAInfMorphism::new(&ps.algebra, &pd.algebra, maps).expect("path morphism components")
}

/// The identification `e_-⊗x + u⊗y + e_+⊗z ↦ (x, y, z)` from `Λ_r ⊗ A`
/// onto the path layout.
pub fn lambda_to_path<F: Field>(
    lambda: &LambdaR<F>,
    pair: &TensorLayout,
    path: &SumLayout,
) -> (BigradedMap<F>, BigradedMap<F>) {
    let u = lambda.u();
    let slot = |e: BasisElem| {
        if e == LambdaR::<F>::e_minus() {
            X
        } else if e == u {
            Y
        } else {
            Z
        }
    };
    let fwd = BigradedMap::from_fn(pair.module(), path.module(), Bideg::ZERO, |e| {
        let t = pair.tuple(e);
        Vector::single(path.embed(slot(t[0]), t[1]), F::one())
    });
    let back = BigradedMap::from_fn(path.module(), pair.module(), Bideg::ZERO, |e| {
        let (k, x) = path.locate(e);
        let lam = [LambdaR::<F>::e_minus(), u, LambdaR::<F>::e_plus()][k];
        Vector::single(pair.elem(&[lam, x]), F::one())
    });
    (fwd, back)
}

/// `Λ_r ⊗ A` moved onto the path layout; equal to [`path_dainf`] map by map.
pub fn path_via_tensor<F: Field>(a: &DAInfAlgebra<F>, r: usize) -> DAInfAlgebra<F> {
    let lambda = lambda_r_dga::<F>(r);
    let (t, pair) = tensor_twisted_dga(&lambda.dga, a);
    let l = path_layout(a.module(), r);
    let (fwd, back) = lambda_to_path(&lambda, &pair, &l);
    transport_algebra(&t, &fwd, &back)
}
