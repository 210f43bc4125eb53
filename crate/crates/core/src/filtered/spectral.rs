use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::bigraded::Bideg;
use crate::error::Result;
use crate::field::Field;
use crate::filtered::{tot, tot_morphism, FilteredComplex, TotLayout, TotalMap};
use crate::linalg::{induced_map, Matrix, Subquotient};
use crate::twisted::{cone, TwistedComplex, TwistedMorphism};

/// Page `E_r` of the column-filtration spectral sequence. Entries are indexed
/// by `(p, q)` with `E_r^{p,q}` a subquotient of `Tot^{q-p}`; `δ_r` maps
/// `(p, q)` to `(p - r, q - r + 1)`.
#[derive(Clone, Debug)]
pub struct SpectralPage<F> {
    r: usize,
    entries: BTreeMap<Bideg, Subquotient<F>>,
    delta: BTreeMap<Bideg, Matrix<F>>,
}

impl<F: Field> SpectralPage<F> {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &BTreeMap<Bideg, Subquotient<F>> {
        &self.entries
    }

    pub fn entry(&self, pq: Bideg) -> Option<&Subquotient<F>> {
        self.entries.get(&pq)
    }

    pub fn dim(&self, pq: Bideg) -> usize {
        self.entries.get(&pq).map_or(0, |e| e.dim())
    }

    /// Nonzero dimensions only.
    pub fn dims(&self) -> BTreeMap<Bideg, usize> {
        self.entries
            .iter()
            .filter(|(_, e)| e.dim() > 0)
            .map(|(&b, e)| (b, e.dim()))
            .collect()
    }

    /// Target of `δ_r` out of `(p, q)`.
    pub fn target(&self, pq: Bideg) -> Bideg {
        let r = self.r as i32;
        Bideg(pq.h() - r, pq.v() - r + 1)
    }

    /// `δ_r` out of `(p, q)` in rep coordinates, `dim E(target) x dim E(p,q)`.
    pub fn delta(&self, pq: Bideg) -> Option<&Matrix<F>> {
        self.delta.get(&pq)
    }

    pub fn deltas(&self) -> &BTreeMap<Bideg, Matrix<F>> {
        &self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|e| e.dim() == 0)
    }
}

/// Computes pages of a filtered complex, caching the `Z_r` spaces.
pub struct SpectralEngine<'a, F> {
    complex: &'a FilteredComplex<F>,
    dense: HashMap<i32, Matrix<F>>,
    cycles: HashMap<(i64, i32, i32), Matrix<F>>,
}

impl<'a, F: Field> SpectralEngine<'a, F> {
    pub fn new(complex: &'a FilteredComplex<F>) -> Self {
        SpectralEngine {
            complex,
            dense: HashMap::new(),
            cycles: HashMap::new(),
        }
    }

    fn layout(&self) -> &TotLayout {
        self.complex.layout()
    }

    fn d(&mut self, n: i32) -> &Matrix<F> {
        let k = self.complex;
        self.dense.entry(n).or_insert_with(|| k.dense_d(n))
    }

    /// `Z_r^{p,n} = {x ∈ F_p Tot^n : dx ∈ F_{p-r}}` as columns; for `r <= 0`
    /// this is `F_p Tot^n`.
    pub fn z(&mut self, r: i64, p: i32, n: i32) -> Matrix<F> {
        if let Some(z) = self.cycles.get(&(r.max(0), p, n)) {
            return z.clone();
        }
        let dim = self.layout().dim(n);
        let k = self.layout().prefix(n, p);
        let z = if r <= 0 {
            Matrix::from_fn(dim, k, |i, j| if i == j { F::one() } else { F::zero() })
        } else {
            let lo = self.layout().prefix(n + 1, (p as i64 - r) as i32);
            let d = self.d(n).clone();
            let outside = d.block(lo, 0, d.rows() - lo, k);
            let ker = outside.kernel_basis();
            let mut z = Matrix::zeros(dim, ker.cols());
            z.set_block(0, 0, &ker);
            z
        };
        self.cycles.insert((r.max(0), p, n), z.clone());
        z
    }

    /// `E_r^{p,q} = Z_r^{p,n} / (Z_{r-1}^{p-1,n} + d Z_{r-1}^{p+r-1,n-1})`, `n = q - p`.
    pub fn entry(&mut self, r: usize, pq: Bideg) -> Subquotient<F> {
        let (p, n) = (pq.h(), pq.v() - pq.h());
        let r = r as i64;
        let z = self.z(r, p, n);
        let b1 = self.z(r - 1, p - 1, n);
        let src = self.z(r - 1, (p as i64 + r - 1) as i32, n - 1);
        let b2 = self.d(n - 1).mul(&src);
        Subquotient::new(&z, &b1.hstack(&b2)).expect("B_r lies in Z_r")
    }

    pub fn page(&mut self, r: usize) -> SpectralPage<F> {
        let support: Vec<Bideg> = self.complex.module().support().collect();
        let mut entries = BTreeMap::new();
        for &pq in &support {
            entries.insert(pq, self.entry(r, pq));
        }
        let ri = r as i32;
        let mut delta = BTreeMap::new();
        for &pq in &support {
            let tgt = Bideg(pq.h() - ri, pq.v() - ri + 1);
            let src = &entries[&pq];
            let n = pq.v() - pq.h();
            let image = self.d(n).mul(src.reps());
            let m = match entries.get(&tgt) {
                Some(t) => t.coords(&image).expect("d maps Z_r into Z_r"),
                None => Matrix::zeros(0, src.dim()),
            };
            delta.insert(pq, m);
        }
        SpectralPage { r, entries, delta }
    }
}

pub fn spectral_page_filtered<F: Field>(k: &FilteredComplex<F>, r: usize) -> SpectralPage<F> {
    SpectralEngine::new(k).page(r)
}

/// `E_r` of a twisted complex: the page of `Tot(A)` with its column filtration.
pub fn spectral_page<F: Field>(a: &TwistedComplex<F>, r: usize) -> SpectralPage<F> {
    spectral_page_filtered(&tot(a), r)
}

/// `E_r(f)` for a filtered chain map, one matrix per `(p, q)` in the union of
/// the supports, in the rep bases of the two pages.
pub fn page_map_filtered<F: Field>(
    k: &FilteredComplex<F>,
    l: &FilteredComplex<F>,
    f: &TotalMap<F>,
    r: usize,
) -> Result<BTreeMap<Bideg, Matrix<F>>> {
    let (mut ek, mut el) = (SpectralEngine::new(k), SpectralEngine::new(l));
    let support: BTreeSet<Bideg> = k.module().support().chain(l.module().support()).collect();
    let mut out = BTreeMap::new();
    for pq in support {
        let n = pq.v() - pq.h();
        let src = ek.entry(r, pq);
        let dst = el.entry(r, pq);
        let fd = f.dense(k.layout(), l.layout(), n);
        out.insert(pq, induced_map(&fd, &src, &dst)?);
    }
    Ok(out)
}

pub fn page_of_morphism<F: Field>(f: &TwistedMorphism<F>, r: usize) -> Result<BTreeMap<Bideg, Matrix<F>>> {
    page_map_filtered(&tot(f.src()), &tot(f.dst()), &tot_morphism(f), r)
}

/// Every block of `E_{r+1}(f)` is invertible.
pub fn is_er_quasi_iso_filtered<F: Field>(
    k: &FilteredComplex<F>,
    l: &FilteredComplex<F>,
    f: &TotalMap<F>,
    r: usize,
) -> Result<bool> {
    Ok(page_map_filtered(k, l, f, r + 1)?.values().all(|m| m.is_invertible()))
}

pub fn is_er_quasi_iso<F: Field>(f: &TwistedMorphism<F>, r: usize) -> Result<bool> {
    is_er_quasi_iso_filtered(&tot(f.src()), &tot(f.dst()), &tot_morphism(f), r)
}

/// `E_{r+1}(C_r(f)) = 0`.
pub fn is_er_quasi_iso_via_cone<F: Field>(f: &TwistedMorphism<F>, r: usize) -> bool {
    spectral_page(&cone(f, r).complex, r + 1).is_zero()
}
