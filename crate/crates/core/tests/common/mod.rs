//! Independent oracles and instance helpers shared by the integration tests.
#![allow(dead_code)]

use multiplex::bigraded::{Bideg, BigradedModule};
use multiplex::field::Field;
use multiplex::filtered::{tot, SpectralPage, TotLayout};
use multiplex::gen::{random_module, random_twisted, Shape};
use multiplex::linalg::{induced_map, Matrix, Subquotient};
use multiplex::twisted::TwistedComplex;
use rand::Rng;

pub fn small_shape<R: Rng>(rng: &mut R) -> Shape {
    Shape {
        width: rng.gen_range(1..=3),
        degrees: (-1, 1),
        max_dim: 2,
    }
}

pub fn small_twisted<F: Field, R: Rng>(rng: &mut R) -> TwistedComplex<F> {
    let shape = small_shape(rng);
    let m = random_module(rng, shape);
    random_twisted(rng, &m)
}

/// `H(A_p^*, d_0)` at `(p, q)` in the coordinates of `A_p^q`.
fn column_homology<F: Field>(a: &TwistedComplex<F>, pq: Bideg) -> Subquotient<F> {
    let m = a.module();
    let d0 = a.dm(0);
    let n = m.dim(pq);
    let out = d0.block_or_zero(pq);
    let prev = Bideg(pq.h(), pq.v() - 1);
    let inc = d0.block_or_zero(prev);
    Subquotient::new(&out.kernel_basis(), &inc).unwrap_or_else(|_| Subquotient::zero(n))
}

/// Projection of a vector of `Tot^{q-p}` onto the summand `A_p^q`.
fn project<F: Field>(l: &TotLayout, m: &BigradedModule, pq: Bideg, v: &Matrix<F>) -> Matrix<F> {
    let off = l.offset(pq).unwrap();
    v.block(off, 0, m.dim(pq), v.cols())
}

/// Checks `E_0 = A` and `δ_0 = d_0` through the projection of the page
/// representatives onto their own column.
pub fn e0_conforms<F: Field>(a: &TwistedComplex<F>, e0: &SpectralPage<F>) -> Result<(), String> {
    let l = tot(a).layout().clone();
    let m = a.module();
    let mut phi = std::collections::BTreeMap::new();
    for pq in m.support() {
        let ours = e0.entry(pq).unwrap();
        if ours.dim() != m.dim(pq) {
            return Err(format!("E_0 dimension at {pq}: {} vs {}", ours.dim(), m.dim(pq)));
        }
        let x = project(&l, m, pq, ours.reps());
        if !x.is_invertible() {
            return Err(format!("E_0 representatives at {pq} do not span A_p^q"));
        }
        phi.insert(pq, x);
    }
    let d0 = a.dm(0);
    for pq in m.support() {
        let ours = e0.delta(pq).unwrap();
        match phi.get(&Bideg(pq.h(), pq.v() + 1)) {
            Some(x2) => {
                if x2.mul(ours) != d0.block_or_zero(pq).mul(&phi[&pq]) {
                    return Err(format!("δ_0 at {pq} differs from d_0"));
                }
            }
            None => {
                if ours.rows() != 0 {
                    return Err(format!("δ_0 at {pq} has a target outside the support"));
                }
            }
        }
    }
    Ok(())
}

/// Checks `E_1 = H(A_p, d_0)` and `δ_1 = (-1)^{q-p} H(d_1)` through the
/// projection of cycle representatives onto their top column.
pub fn e1_conforms<F: Field>(a: &TwistedComplex<F>, e1: &SpectralPage<F>) -> Result<(), String> {
    let l = tot(a).layout().clone();
    let m = a.module();
    let mut phi = std::collections::BTreeMap::new();
    for pq in m.support() {
        let sq = column_homology(a, pq);
        let ours = e1.entry(pq).unwrap();
        if sq.dim() != ours.dim() {
            return Err(format!("E_1 dimension at {pq}: {} vs {}", ours.dim(), sq.dim()));
        }
        let x = sq.coords(&project(&l, m, pq, ours.reps())).map_err(|e| e.to_string())?;
        if !x.is_invertible() {
            return Err(format!("identification at {pq} is not invertible"));
        }
        phi.insert(pq, (sq, x));
    }
    let d1 = a.dm(1);
    for pq in m.support() {
        let tgt = Bideg(pq.h() - 1, pq.v());
        let (sq, x) = &phi[&pq];
        let ours = e1.delta(pq).unwrap();
        let sign = F::sign((pq.v() - pq.h()).rem_euclid(2) == 1);
        match phi.get(&tgt) {
            Some((sq2, x2)) => {
                let h = induced_map(&d1.block_or_zero(pq), sq, sq2).map_err(|e| e.to_string())?;
                if x2.mul(ours) != h.mul(x).scale(&sign) {
                    return Err(format!("δ_1 at {pq} differs from H(d_1)"));
                }
            }
            None => {
                if ours.rows() != 0 {
                    return Err(format!("δ_1 at {pq} has a target outside the support"));
                }
            }
        }
    }
    Ok(())
}

/// Checks that `E_{r+1}` is the homology of `(E_r, δ_r)`: equal dimensions,
/// and the classes of the `E_{r+1}` representatives form a basis of
/// `ker δ_r / im δ_r`.
pub fn next_page_is_homology<F: Field>(er: &SpectralPage<F>, next: &SpectralPage<F>) -> Result<(), String> {
    let r = er.r() as i32;
    for (&pq, e) in er.entries() {
        let out = er.delta(pq).unwrap();
        let src = Bideg(pq.h() + r, pq.v() + r - 1);
        let inc = match er.delta(src) {
            Some(m) if er.entry(src).is_some() => m.clone(),
            _ => Matrix::zeros(e.dim(), 0),
        };
        if !out.mul(&inc).is_zero() {
            return Err(format!("δ_r ∘ δ_r ≠ 0 into {pq}"));
        }
        let h = Subquotient::new(&out.kernel_basis(), &inc).map_err(|e| e.to_string())?;
        let n = next.entry(pq).unwrap();
        if h.dim() != n.dim() {
            return Err(format!("dim E_{} at {pq}: {} vs homology {}", r + 1, n.dim(), h.dim()));
        }
        let in_er = e.coords(n.reps()).map_err(|e| e.to_string())?;
        let cls = h.coords(&in_er).map_err(|e| e.to_string())?;
        if !cls.is_invertible() {
            return Err(format!("E_{} reps at {pq} are not a homology basis", r + 1));
        }
    }
    Ok(())
}
