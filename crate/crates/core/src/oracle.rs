//! Cross-check of twisted-complex homotopy theory through cofree
//! coalgebras over `R[x]`, `x` of bidegree `(-1,-1)`.
//!
//! A family `(f_0, f_1, ..)` becomes one dense matrix on
//! `R[x]_{≤N} ⊗ A`; every identity is then checked by plain matrix
//! algebra, independently of the family convolution formulas. Lifted maps
//! never raise the power of `x`, so the truncation is exact for all
//! components of index at most `N`.

use std::collections::HashMap;

use crate::bigraded::{BasisElem, Bideg, BigradedMap, BigradedModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::twisted::{check_r_homotopy_direct, check_twisted, Family, RHomotopy, TwistedComplex};

/// Basis `x^k ⊗ e` of `R[x]_{≤N} ⊗ M`, indexed `k·dim M + pos(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Truncation {
    n: usize,
    basis: Vec<BasisElem>,
    pos: HashMap<BasisElem, usize>,
}

impl Truncation {
    fn new(m: &BigradedModule, n: usize) -> Self {
        let basis: Vec<BasisElem> = m.basis().collect();
        let pos = basis.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        Truncation { n, basis, pos }
    }

    fn dim(&self) -> usize {
        (self.n + 1) * self.basis.len()
    }

    fn index(&self, k: usize, e: BasisElem) -> usize {
        k * self.basis.len() + self.pos[&e]
    }
}

/// A map `R[x]_{≤N} ⊗ A -> R[x]_{≤N} ⊗ B` of bidegree `bideg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCoalgebraMap<F> {
    n: usize,
    src: BigradedModule,
    dst: BigradedModule,
    bideg: Bideg,
    matrix: Matrix<F>,
}

impl<F: Field> TruncatedCoalgebraMap<F> {
    pub fn truncation(&self) -> usize {
        self.n
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

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        if o.dst != self.src || o.n != self.n {
            return Err(Error::ModuleMismatch("truncated maps are not composable".into()));
        }
        Ok(TruncatedCoalgebraMap {
            n: self.n,
            src: o.src.clone(),
            dst: self.dst.clone(),
            bideg: self.bideg + o.bideg,
            matrix: self.matrix.mul(&o.matrix),
        })
    }

    /// `self + c·o`; both must have the same shape and bidegree.
    pub fn add_scaled(&self, c: &F, o: &Self) -> Result<Self> {
        if o.src != self.src || o.dst != self.dst || o.n != self.n || o.bideg != self.bideg {
            return Err(Error::ModuleMismatch("truncated maps are not parallel".into()));
        }
        let mut matrix = self.matrix.clone();
        matrix.add_scaled(c, &o.matrix);
        Ok(TruncatedCoalgebraMap { matrix, ..self.clone() })
    }

    /// `f_k = π_{x^0} F̃(x^k ⊗ -)` for `k ≤ N`.
    pub fn extract(&self) -> Family<F> {
        let (ts, td) = (Truncation::new(&self.src, self.n), Truncation::new(&self.dst, self.n));
        let mut out = Family::zero(&self.src, &self.dst, self.bideg);
        for k in 0..=self.n {
            let b = Family::<F>::bideg_of(self.bideg, k);
            let m = BigradedMap::from_fn(&self.src, &self.dst, b, |e| {
                let col = ts.index(k, e);
                td.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !self.matrix[(*i, col)].is_zero())
                    .map(|(i, t)| (*t, self.matrix[(i, col)].clone()))
                    .collect()
            });
            if !m.is_zero() {
                out.set(k, m);
            }
        }
        out
    }
}

/// `F̃(x^n ⊗ a) = Σ_i (-1)^{i(u+v)} x^i ⊗ f_{n-i}(a)` for a family with
/// base `(u, v)`.
pub fn lift<F: Field>(f: &Family<F>, n: usize) -> TruncatedCoalgebraMap<F> {
    let (ts, td) = (Truncation::new(f.src(), n), Truncation::new(f.dst(), n));
    let mut matrix = Matrix::zeros(td.dim(), ts.dim());
    let odd = f.base().total() % 2 != 0;
    for (m, fm) in f.members() {
        for k in m..=n {
            let i = k - m;
            let c = F::sign(odd && i % 2 == 1);
            for e in &ts.basis {
                for (t, v) in fm.apply_basis(*e).iter() {
                    matrix[(td.index(i, *t), ts.index(k, *e))] += c.clone() * v.clone();
                }
            }
        }
    }
    TruncatedCoalgebraMap {
        n,
        src: f.src().clone(),
        dst: f.dst().clone(),
        bideg: f.base(),
        matrix,
    }
}

/// `d_x(x^k ⊗ a) = x^{k-1} ⊗ a`, of bidegree `(1,1)`.
pub fn d_x<F: Field>(m: &BigradedModule, n: usize) -> TruncatedCoalgebraMap<F> {
    let t = Truncation::new(m, n);
    let mut matrix = Matrix::zeros(t.dim(), t.dim());
    for k in 1..=n {
        for e in &t.basis {
            matrix[(t.index(k - 1, *e), t.index(k, *e))] = F::one();
        }
    }
    TruncatedCoalgebraMap {
        n,
        src: m.clone(),
        dst: m.clone(),
        bideg: Bideg(1, 1),
        matrix,
    }
}

/// `𝕊F̃ = F̃ d_x`.
pub fn shift<F: Field>(f: &TruncatedCoalgebraMap<F>) -> TruncatedCoalgebraMap<F> {
    f.compose(&d_x(&f.src, f.n)).expect("same truncation")
}

fn shift_pow<F: Field>(f: &TruncatedCoalgebraMap<F>, r: usize) -> TruncatedCoalgebraMap<F> {
    (0..r).fold(f.clone(), |g, _| shift(&g))
}

/// Outcome of one oracle comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    /// Verdict of the coalgebra route.
    pub coalgebra: bool,
    /// Verdict of the direct family check.
    pub direct: bool,
    /// Smallest `m` with a nonzero `x^m`-column of the coalgebra residual.
    pub first_failure: Option<usize>,
}

impl OracleVerdict {
    pub fn agree(&self) -> bool {
        self.coalgebra == self.direct
    }
}

/// Smallest `k` with a nonzero column `x^k ⊗ -` of `f`.
fn first_column<F: Field>(f: &TruncatedCoalgebraMap<F>) -> Option<usize> {
    let w = f.src.total_dim();
    (0..=f.n).find(|k| (k * w..(k + 1) * w).any(|c| (0..f.matrix.rows()).any(|r| !f.matrix[(r, c)].is_zero())))
}

/// `d̃² = 0` on `R[x]_{≤N} ⊗ A`, against `check_twisted` restricted to
/// relations `m ≤ N`.
pub fn check_square_zero_coderivation<F: Field>(d: &Family<F>, n: usize) -> Result<OracleVerdict> {
    let a = TwistedComplex::from_family(d.clone())?;
    let dt = lift(d, n);
    let sq = dt.compose(&dt)?;
    let first_failure = first_column(&sq);
    let rep = check_twisted(&a);
    let direct = !rep.failures.iter().any(|f| relation_index(&f.relation).is_some_and(|m| m <= n));
    Ok(OracleVerdict {
        coalgebra: first_failure.is_none(),
        direct,
        first_failure,
    })
}

/// `m` from a relation name `A_{m,1}`.
fn relation_index(name: &str) -> Option<usize> {
    name.strip_prefix("A_{")?.split(',').next()?.parse().ok()
}

/// Smallest truncation that sees every component of the homotopy identity.
pub fn min_truncation<F: Field>(h: &RHomotopy<F>) -> usize {
    let (a, b) = (h.src().module(), h.dst().module());
    let width = match (a.horizontal_range(), b.horizontal_range()) {
        (Some((alo, ahi)), Some((blo, bhi))) => (ahi.max(bhi) - alo.min(blo)).max(0) as usize,
        _ => 0,
    };
    width + h.r()
}

/// Default truncation: `width + r + 2`.
pub fn default_truncation<F: Field>(h: &RHomotopy<F>) -> usize {
    min_truncation(h) + 2
}

/// `(-1)^r d̃^B H̃ + H̃ d̃^A = 𝕊^r G̃ - 𝕊^r F̃` on `R[x]_{≤N} ⊗ A`, against
/// the direct homotopy check.
pub fn check_coderh<F: Field>(h: &RHomotopy<F>, n: usize) -> Result<OracleVerdict> {
    let need = min_truncation(h);
    if n < need {
        return Err(Error::Truncation(format!("{n} is below the required {need}")));
    }
    let r = h.r();
    let ht = lift(h.h(), n);
    let da = lift(h.src().d(), n);
    let db = lift(h.dst().d(), n);
    let ft = lift(h.f().family(), n);
    let gt = lift(h.g().family(), n);
    let left = db.compose(&ht)?.scale_sign(r % 2 == 1).add_scaled(&F::one(), &ht.compose(&da)?)?;
    let right = shift_pow(&gt, r).add_scaled(&-F::one(), &shift_pow(&ft, r))?;
    let res = left.add_scaled(&-F::one(), &right)?;
    let first_failure = first_column(&res);
    Ok(OracleVerdict {
        coalgebra: first_failure.is_none(),
        direct: check_r_homotopy_direct(h).ok,
        first_failure,
    })
}

impl<F: Field> TruncatedCoalgebraMap<F> {
    fn scale_sign(&self, odd: bool) -> Self {
        TruncatedCoalgebraMap {
            matrix: self.matrix.scale(&F::sign(odd)),
            ..self.clone()
        }
    }
}
