//! JSON interchange documents.
//!
//! A document names a field and a set of objects. Dimensions are written
//! `[i, j, n]` for `dim A_i^j = n`; a map is
//! `{"bidegree": [p, q], "blocks": [{"src": [i, j], "matrix": [[..], ..]}]}`
//! with matrices acting on column vectors. Missing blocks are zero. Maps
//! out of tensor powers use the basis order of [`TensorLayout`]. Entries
//! are strings `"a/b"` over `Q` and integers in `0..p` over `F_p`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bigraded::{Bideg, BigradedMap, BigradedModule, TensorLayout};
use crate::dainf::{DAInfAlgebra, DAInfHomotopy, DAInfMorphism, FilteredAInf};
use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};
use crate::filtered::{FilteredComplex, TotalMap};
use crate::linalg::Matrix;
use crate::twisted::{homotopy_base, Family, RHomotopy, TwistedComplex, TwistedMorphism, DIFFERENTIAL};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBlock {
    pub src: [i32; 2],
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    pub bidegree: [i32; 2],
    #[serde(default)]
    pub blocks: Vec<RawBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTotalBlock {
    pub src: [i32; 2],
    pub dst: [i32; 2],
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTotalMap {
    pub degree: i32,
    #[serde(default)]
    pub blocks: Vec<RawTotalBlock>,
}

/// Member `index` of a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMember {
    pub index: usize,
    pub map: RawMap,
}

/// Component `(i, j)` of a dA∞ structure, morphism or homotopy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub i: usize,
    pub j: usize,
    pub map: RawMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOperation {
    pub k: usize,
    pub map: RawTotalMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawObject {
    TwistedComplex {
        dims: Vec<(i32, i32, usize)>,
        #[serde(default)]
        d: Vec<RawMember>,
    },
    TwistedMorphism {
        src: String,
        dst: String,
        #[serde(default)]
        components: Vec<RawMember>,
    },
    RHomotopy {
        r: usize,
        f: String,
        g: String,
        #[serde(default)]
        components: Vec<RawMember>,
    },
    FilteredComplex {
        dims: Vec<(i32, i32, usize)>,
        d: RawTotalMap,
    },
    DainfAlgebra {
        dims: Vec<(i32, i32, usize)>,
        #[serde(default)]
        maps: Vec<RawComponent>,
    },
    DainfMorphism {
        src: String,
        dst: String,
        #[serde(default)]
        components: Vec<RawComponent>,
    },
    DainfHomotopy {
        r: usize,
        f: String,
        g: String,
        #[serde(default)]
        components: Vec<RawComponent>,
    },
    FilteredAinf {
        dims: Vec<(i32, i32, usize)>,
        #[serde(default)]
        ops: Vec<RawOperation>,
    },
}

impl RawObject {
    pub fn kind(&self) -> &'static str {
        match self {
            RawObject::TwistedComplex { .. } => "twisted_complex",
            RawObject::TwistedMorphism { .. } => "twisted_morphism",
            RawObject::RHomotopy { .. } => "r_homotopy",
            RawObject::FilteredComplex { .. } => "filtered_complex",
            RawObject::DainfAlgebra { .. } => "dainf_algebra",
            RawObject::DainfMorphism { .. } => "dainf_morphism",
            RawObject::DainfHomotopy { .. } => "dainf_homotopy",
            RawObject::FilteredAinf { .. } => "filtered_ainf",
        }
    }

    fn references(&self) -> Vec<&str> {
        match self {
            RawObject::TwistedMorphism { src, dst, .. } | RawObject::DainfMorphism { src, dst, .. } => {
                vec![src, dst]
            }
            RawObject::RHomotopy { f, g, .. } | RawObject::DainfHomotopy { f, g, .. } => vec![f, g],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub schema_version: String,
    pub field: FieldConfig,
    #[serde(default)]
    pub objects: BTreeMap<String, RawObject>,
}

impl RawDocument {
    pub fn new(field: FieldConfig) -> Self {
        RawDocument {
            schema_version: SCHEMA_VERSION.into(),
            field,
            objects: BTreeMap::new(),
        }
    }

    /// Parses and checks the envelope; entries are not interpreted yet.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                raw.schema_version
            )));
        }
        Ok(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// A resolved object.
#[derive(Clone, Debug)]
pub enum Object<F> {
    Twisted(TwistedComplex<F>),
    Morphism(TwistedMorphism<F>),
    Homotopy(RHomotopy<F>),
    Filtered(FilteredComplex<F>),
    DAInf(DAInfAlgebra<F>),
    DAInfMorphism(DAInfMorphism<F>),
    DAInfHomotopy(DAInfHomotopy<F>),
    FilteredAInf(FilteredAInf<F>),
}

/// A document with every object resolved over the field `F`.
#[derive(Clone, Debug)]
pub struct Document<F> {
    objects: BTreeMap<String, Object<F>>,
    kinds: BTreeMap<String, &'static str>,
}

fn module_of(dims: &[(i32, i32, usize)]) -> Result<BigradedModule> {
    let mut seen = BTreeSet::new();
    for &(i, j, _) in dims {
        if !seen.insert((i, j)) {
            return Err(Error::Parse(format!("bidegree [{i}, {j}] declared twice")));
        }
    }
    BigradedModule::try_from_dims(dims.iter().map(|&(i, j, n)| (Bideg(i, j), n)))
}

fn parse_matrix<F: Field>(rows: &[Vec<Value>], shape: (usize, usize), at: Bideg) -> Result<Matrix<F>> {
    if rows.is_empty() && shape.0 == 0 {
        return Ok(Matrix::zeros(0, shape.1));
    }
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Dimension(format!(
            "block at source {at} must be {}x{}",
            shape.0, shape.1
        )));
    }
    let mut m = Matrix::zeros(shape.0, shape.1);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = F::from_json(v)?;
        }
    }
    Ok(m)
}

pub fn emit_matrix<F: Field>(m: &Matrix<F>) -> Vec<Vec<Value>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_json()).collect()).collect()
}

pub fn parse_map<F: Field>(raw: &RawMap, src: &BigradedModule, dst: &BigradedModule) -> Result<BigradedMap<F>> {
    let b = Bideg(raw.bidegree[0], raw.bidegree[1]);
    let mut blocks = Vec::new();
    for blk in &raw.blocks {
        let s = Bideg(blk.src[0], blk.src[1]);
        if src.dim(s) == 0 && !blk.matrix.iter().flatten().next().is_none() {
            return Err(Error::Dimension(format!("block at source {s}, where the source is zero")));
        }
        let m = parse_matrix(&blk.matrix, (dst.dim(s + b), src.dim(s)), s)?;
        blocks.push((s, m));
    }
    BigradedMap::new(src, dst, b, blocks)
}

pub fn emit_map<F: Field>(m: &BigradedMap<F>) -> RawMap {
    RawMap {
        bidegree: [m.bideg().h(), m.bideg().v()],
        blocks: m
            .blocks()
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(s, x)| RawBlock {
                src: [s.h(), s.v()],
                matrix: emit_matrix(x),
            })
            .collect(),
    }
}

fn parse_total<F: Field>(
    raw: &RawTotalMap,
    src: &BigradedModule,
    dst: &BigradedModule,
) -> Result<TotalMap<F>> {
    let shift = raw.blocks.iter().map(|b| b.dst[0] - b.src[0]).max().unwrap_or(0).max(0);
    let mut out = TotalMap::zero(src, dst, raw.degree, shift);
    let mut seen = BTreeSet::new();
    for blk in &raw.blocks {
        let (s, t) = (Bideg(blk.src[0], blk.src[1]), Bideg(blk.dst[0], blk.dst[1]));
        if !seen.insert((s, t)) {
            return Err(Error::Parse(format!("two blocks {s} -> {t}")));
        }
        let m = parse_matrix(&blk.matrix, (dst.dim(t), src.dim(s)), s)?;
        if m.is_empty() {
            continue;
        }
        out.add_block(s, t, &m)?;
    }
    Ok(out)
}

fn emit_total<F: Field>(m: &TotalMap<F>) -> RawTotalMap {
    RawTotalMap {
        degree: m.degree(),
        blocks: m
            .blocks()
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|((s, t), x)| RawTotalBlock {
                src: [s.h(), s.v()],
                dst: [t.h(), t.v()],
                matrix: emit_matrix(x),
            })
            .collect(),
    }
}

fn dims_of(m: &BigradedModule) -> Vec<(i32, i32, usize)> {
    m.dims().iter().map(|(b, &n)| (b.h(), b.v(), n)).collect()
}

fn members<F: Field>(
    raw: &[RawMember],
    src: &BigradedModule,
    dst: &BigradedModule,
) -> Result<Vec<(usize, BigradedMap<F>)>> {
    raw.iter().map(|m| Ok((m.index, parse_map(&m.map, src, dst)?))).collect()
}

fn emit_members<F: Field>(f: &Family<F>) -> Vec<RawMember> {
    f.members().map(|(index, m)| RawMember { index, map: emit_map(m) }).collect()
}

/// Components `(i, j)` with sources `A^{⊗j}`.
fn components<F: Field>(
    raw: &[RawComponent],
    src: &BigradedModule,
    dst: &BigradedModule,
) -> Result<BTreeMap<(usize, usize), BigradedMap<F>>> {
    let mut powers: BTreeMap<usize, BigradedModule> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for c in raw {
        if c.j == 0 {
            return Err(Error::Parse(format!("component ({}, 0) has no inputs", c.i)));
        }
        if c.j > 16 {
            return Err(Error::Parse(format!("arity {} is beyond the supported 16", c.j)));
        }
        let s = powers.entry(c.j).or_insert_with(|| TensorLayout::power(src, c.j).module().clone());
        if out.insert((c.i, c.j), parse_map(&c.map, s, dst)?).is_some() {
            return Err(Error::Parse(format!("component ({}, {}) given twice", c.i, c.j)));
        }
    }
    Ok(out)
}

fn emit_components<F: Field>(maps: &BTreeMap<(usize, usize), BigradedMap<F>>) -> Vec<RawComponent> {
    maps.iter().map(|(&(i, j), m)| RawComponent { i, j, map: emit_map(m) }).collect()
}

impl<F: Field> Document<F> {
    /// Resolves every object; references must name earlier kinds
    /// (complexes before morphisms before homotopies).
    pub fn from_raw(raw: &RawDocument) -> Result<Self> {
        if raw.field != F::config() {
            return Err(Error::FieldMismatch {
                expected: F::config().to_string(),
                found: raw.field.to_string(),
            });
        }
        let mut doc = Document {
            objects: BTreeMap::new(),
            kinds: BTreeMap::new(),
        };
        for (name, obj) in &raw.objects {
            for r in obj.references() {
                if !raw.objects.contains_key(r) {
                    return Err(Error::Parse(format!("{name}: unknown object {r:?}")));
                }
            }
        }
        for pass in 0..3 {
            for (name, obj) in &raw.objects {
                let level = match obj {
                    RawObject::TwistedMorphism { .. } | RawObject::DainfMorphism { .. } => 1,
                    RawObject::RHomotopy { .. } | RawObject::DainfHomotopy { .. } => 2,
                    _ => 0,
                };
                if level == pass {
                    let x = doc.resolve(obj).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
                    doc.kinds.insert(name.clone(), obj.kind());
                    doc.objects.insert(name.clone(), x);
                }
            }
        }
        Ok(doc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawDocument::from_json(text)?)
    }

    fn twisted(&self, name: &str) -> Result<&TwistedComplex<F>> {
        match self.objects.get(name) {
            Some(Object::Twisted(a)) => Ok(a),
            _ => Err(Error::Parse(format!("{name:?} is not a twisted complex"))),
        }
    }

    fn morphism(&self, name: &str) -> Result<&TwistedMorphism<F>> {
        match self.objects.get(name) {
            Some(Object::Morphism(f)) => Ok(f),
            _ => Err(Error::Parse(format!("{name:?} is not a twisted morphism"))),
        }
    }

    fn dainf(&self, name: &str) -> Result<&DAInfAlgebra<F>> {
        match self.objects.get(name) {
            Some(Object::DAInf(a)) => Ok(a),
            _ => Err(Error::Parse(format!("{name:?} is not a dA-infinity algebra"))),
        }
    }

    fn dainf_morphism(&self, name: &str) -> Result<&DAInfMorphism<F>> {
        match self.objects.get(name) {
            Some(Object::DAInfMorphism(f)) => Ok(f),
            _ => Err(Error::Parse(format!("{name:?} is not a dA-infinity morphism"))),
        }
    }

    fn resolve(&self, obj: &RawObject) -> Result<Object<F>> {
        Ok(match obj {
            RawObject::TwistedComplex { dims, d } => {
                let m = module_of(dims)?;
                let d = members(d, &m, &m)?;
                Object::Twisted(TwistedComplex::from_family(Family::from_maps(&m, &m, DIFFERENTIAL, d)?)?)
            }
            RawObject::TwistedMorphism { src, dst, components } => {
                let (a, b) = (self.twisted(src)?, self.twisted(dst)?);
                let parts = members(components, a.module(), b.module())?;
                Object::Morphism(TwistedMorphism::new(a, b, parts)?)
            }
            RawObject::RHomotopy { r, f, g, components } => {
                let (f, g) = (self.morphism(f)?, self.morphism(g)?);
                if f.src() != g.src() || f.dst() != g.dst() {
                    return Err(Error::ModuleMismatch("f and g are not parallel".into()));
                }
                let (a, b) = (f.src().module(), f.dst().module());
                let h = Family::from_maps(a, b, homotopy_base(*r), members(components, a, b)?)?;
                Object::Homotopy(RHomotopy::new(*r, f, g, h)?)
            }
            RawObject::FilteredComplex { dims, d } => {
                let m = module_of(dims)?;
                Object::Filtered(FilteredComplex::new(parse_total(d, &m, &m)?)?)
            }
            RawObject::DainfAlgebra { dims, maps } => {
                let m = module_of(dims)?;
                let maps = components(maps, &m, &m)?;
                Object::DAInf(DAInfAlgebra::new(m, maps)?)
            }
            RawObject::DainfMorphism { src, dst, components: c } => {
                let (a, b) = (self.dainf(src)?, self.dainf(dst)?);
                let maps = components(c, a.module(), b.module())?;
                Object::DAInfMorphism(DAInfMorphism::new(a, b, maps)?)
            }
            RawObject::DainfHomotopy { r, f, g, components: c } => {
                let (f, g) = (self.dainf_morphism(f)?, self.dainf_morphism(g)?);
                let maps = components(c, f.src().module(), f.dst().module())?;
                Object::DAInfHomotopy(DAInfHomotopy::new(*r, f, g, maps)?)
            }
            RawObject::FilteredAinf { dims, ops } => {
                let m = module_of(dims)?;
                let mut parsed = Vec::new();
                for op in ops {
                    if op.k == 0 || op.k > 16 {
                        return Err(Error::Parse(format!("operation arity {} out of range", op.k)));
                    }
                    let src = TensorLayout::power(&m, op.k).module().clone();
                    parsed.push((op.k, parse_total(&op.map, &src, &m)?));
                }
                Object::FilteredAInf(FilteredAInf::new(m, parsed)?)
            }
        })
    }

    pub fn objects(&self) -> &BTreeMap<String, Object<F>> {
        &self.objects
    }

    pub fn get(&self, name: &str) -> Option<&Object<F>> {
        self.objects.get(name)
    }

    /// Names of the objects of one kind, in name order.
    pub fn names_of_kind(&self, kind: &str) -> Vec<&str> {
        self.kinds.iter().filter(|(_, k)| **k == kind).map(|(n, _)| n.as_str()).collect()
    }
}

/// Builds documents object by object.
#[derive(Clone, Debug)]
pub struct Emitter<F> {
    raw: RawDocument,
    _field: std::marker::PhantomData<F>,
}

impl<F: Field> Default for Emitter<F> {
    fn default() -> Self {
        Emitter {
            raw: RawDocument::new(F::config()),
            _field: std::marker::PhantomData,
        }
    }
}

impl<F: Field> Emitter<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn twisted(&mut self, name: &str, a: &TwistedComplex<F>) -> &mut Self {
        self.put(name, RawObject::TwistedComplex {
            dims: dims_of(a.module()),
            d: emit_members(a.d()),
        })
    }

    pub fn morphism(&mut self, name: &str, src: &str, dst: &str, f: &TwistedMorphism<F>) -> &mut Self {
        self.put(name, RawObject::TwistedMorphism {
            src: src.into(),
            dst: dst.into(),
            components: emit_members(f.family()),
        })
    }

    pub fn homotopy(&mut self, name: &str, f: &str, g: &str, h: &RHomotopy<F>) -> &mut Self {
        self.put(name, RawObject::RHomotopy {
            r: h.r(),
            f: f.into(),
            g: g.into(),
            components: emit_members(h.h()),
        })
    }

    pub fn filtered(&mut self, name: &str, k: &FilteredComplex<F>) -> &mut Self {
        self.put(name, RawObject::FilteredComplex {
            dims: dims_of(k.module()),
            d: emit_total(k.d()),
        })
    }

    pub fn dainf(&mut self, name: &str, a: &DAInfAlgebra<F>) -> &mut Self {
        self.put(name, RawObject::DainfAlgebra {
            dims: dims_of(a.module()),
            maps: emit_components(a.maps()),
        })
    }

    pub fn dainf_morphism(&mut self, name: &str, src: &str, dst: &str, f: &DAInfMorphism<F>) -> &mut Self {
        self.put(name, RawObject::DainfMorphism {
            src: src.into(),
            dst: dst.into(),
            components: emit_components(f.maps()),
        })
    }

    pub fn dainf_homotopy(&mut self, name: &str, f: &str, g: &str, h: &DAInfHomotopy<F>) -> &mut Self {
        self.put(name, RawObject::DainfHomotopy {
            r: h.r(),
            f: f.into(),
            g: g.into(),
            components: emit_components(h.h()),
        })
    }

    pub fn filtered_ainf(&mut self, name: &str, k: &FilteredAInf<F>) -> &mut Self {
        self.put(name, RawObject::FilteredAinf {
            dims: dims_of(k.module()),
            ops: k.ops().iter().map(|(&k, m)| RawOperation { k, map: emit_total(m) }).collect(),
        })
    }

    fn put(&mut self, name: &str, obj: RawObject) -> &mut Self {
        self.raw.objects.insert(name.into(), obj);
        self
    }

    pub fn raw(&self) -> &RawDocument {
        &self.raw
    }

    pub fn to_json(&self) -> String {
        self.raw.to_json()
    }
}

/// Parses `i,j,n;i,j,n;..` into a module, as used on the command line.
pub fn parse_dims(s: &str) -> Result<BigradedModule> {
    let mut dims = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let xs: Vec<&str> = part.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("expected i,j,n in {part:?}"));
        if xs.len() != 3 {
            return Err(bad());
        }
        let i: i32 = xs[0].parse().map_err(|_| bad())?;
        let j: i32 = xs[1].parse().map_err(|_| bad())?;
        let n: usize = xs[2].parse().map_err(|_| bad())?;
        if n > 64 {
            return Err(Error::Parse(format!("dimension {n} in {part:?} is too large")));
        }
        dims.push((i, j, n));
    }
    module_of(&dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dainf::{lambda_r_dga, tot_dainf};
    use crate::field::{F32003, Q};
    use crate::filtered::tot;
    use crate::gen::{random_homotopy, random_module, random_morphism, random_twisted, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type K = F32003;

    #[test]
    fn twisted_objects_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for r in 0..3 {
            let (m1, m2) = (random_module(&mut rng, Shape::default()), random_module(&mut rng, Shape::default()));
            let (a, b) = (random_twisted::<K, _>(&mut rng, &m1), random_twisted::<K, _>(&mut rng, &m2));
            let f = random_morphism(&mut rng, &a, &b);
            let h = random_homotopy(&mut rng, &f, r);
            let mut e = Emitter::new();
            e.twisted("A", &a).twisted("B", &b).morphism("f", "A", "B", h.f()).morphism("g", "A", "B", h.g());
            e.homotopy("h", "f", "g", &h).filtered("T", &tot(&a));
            let doc = Document::<K>::parse(&e.to_json()).unwrap();
            match doc.get("h") {
                Some(Object::Homotopy(x)) => assert_eq!(x, &h),
                _ => panic!("homotopy missing"),
            }
            match doc.get("T") {
                Some(Object::Filtered(x)) => assert_eq!(x, &tot(&a)),
                _ => panic!("filtered complex missing"),
            }
            assert_eq!(doc.names_of_kind("twisted_morphism"), vec!["f", "g"]);
        }
    }

    #[test]
    fn dainf_objects_round_trip() {
        let l = lambda_r_dga::<Q>(2);
        let a = l.dga.algebra();
        let mut e = Emitter::new();
        e.dainf("L", a).dainf_morphism("id", "L", "L", &DAInfMorphism::identity(a));
        e.filtered_ainf("T", &tot_dainf(a));
        let doc = Document::<Q>::parse(&e.to_json()).unwrap();
        match (doc.get("L"), doc.get("T")) {
            (Some(Object::DAInf(x)), Some(Object::FilteredAInf(t))) => {
                assert_eq!(x, a);
                assert_eq!(t, &tot_dainf(a));
            }
            _ => panic!("objects missing"),
        }
    }

    fn doc(objects: &str) -> String {
        format!(r#"{{"schema_version": "1", "field": {{"kind": "rational"}}, "objects": {objects}}}"#)
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"{"A": {"type": "twisted_complex", "dims": [[0,0,1],[0,0,2]]}}"#,
            r#"{"A": {"type": "twisted_complex", "dims": [[0,0,1],[0,1,1]], "d": [{"index": 0, "map": {"bidegree": [0,1], "blocks": [{"src": [0,0], "matrix": [["1","2"]]}]}}]}}"#,
            r#"{"A": {"type": "twisted_complex", "dims": [[0,0,1],[0,1,1]], "d": [{"index": 0, "map": {"bidegree": [0,2], "blocks": []}}]}}"#,
            r#"{"A": {"type": "twisted_complex", "dims": [[0,0,1],[0,1,1]], "d": [{"index": 0, "map": {"bidegree": [0,1], "blocks": [{"src": [0,0], "matrix": [[1]]}]}}]}}"#,
            r#"{"f": {"type": "twisted_morphism", "src": "A", "dst": "A"}}"#,
            r#"{"A": {"type": "twisted_complex", "dims": [], "extra": 1}}"#,
            r#"{"A": {"type": "dainf_algebra", "dims": [[0,0,1]], "maps": [{"i": 0, "j": 0, "map": {"bidegree": [0,2]}}]}}"#,
        ];
        for c in cases {
            assert!(Document::<Q>::parse(&doc(c)).is_err(), "{c}");
        }
        assert!(Document::<K>::parse(&doc("{}")).is_err());
        assert!(Document::<Q>::parse(&doc("{}").replace("\"1\"", "\"2\"")).is_err());
        assert!(Document::<Q>::parse(&doc("{}")).is_ok());
    }

    #[test]
    fn zero_differential_needs_no_blocks() {
        let text = doc(r#"{"A": {"type": "twisted_complex", "dims": [[0,0,1],[1,0,0]]}}"#);
        let d = Document::<Q>::parse(&text).unwrap();
        assert!(matches!(d.get("A"), Some(Object::Twisted(a)) if a.d().is_zero()));
    }

    #[test]
    fn dims_syntax() {
        let m = parse_dims("0,0,1; 1,0,2").unwrap();
        assert_eq!(m.dim(Bideg(1, 0)), 2);
        for bad in ["0,0", "0,0,1;0,0,1", "a,0,1", "0,0,-1", "0,0,1000"] {
            assert!(parse_dims(bad).is_err(), "{bad}");
        }
        assert!(parse_dims("").unwrap().is_zero());
    }
}
