//! Subcommand implementations, generic over the coefficient field.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use multiplex::dainf::{
    check_dainf, check_dainf_morphism, check_filtered_ainf, check_r_homotopy_dainf, compose_dainf,
    is_er_quasi_iso_dainf, path_dainf, solve_r_homotopy_dainf, tot_dainf, underlying_twisted_morphism,
};
use multiplex::doc::{emit_matrix, parse_dims, Document, Emitter, Object, RawDocument};
use multiplex::field::{DynFp, Field, FieldConfig, Q};
use multiplex::filtered::{
    check_filtered, is_er_quasi_iso, is_er_quasi_iso_via_cone, spectral_page, spectral_page_filtered, tot,
    tot_inverse, SpectralPage,
};
use multiplex::gen::random_twisted;
use multiplex::oracle::{check_coderh, default_truncation};
use multiplex::report::Report;
use multiplex::twisted::{
    check_morphism, check_r_homotopy, check_twisted, compose, cone, path, path_witness, solve_r_homotopy, tensor,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{CheckKind, Command, Format, GenCommand, HomotopyAction, HomotopyArgs, OracleCommand};

/// What to print, and whether it counts as success.
pub struct Outcome {
    pub ok: bool,
    pub text: String,
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn load(path: &Path) -> Result<RawDocument> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RawDocument::from_json(&text).with_context(|| path.display().to_string())
}

fn parse_field(s: &str) -> Result<FieldConfig> {
    match s.to_ascii_lowercase().as_str() {
        "q" | "rational" => Ok(FieldConfig::Rational),
        p => Ok(FieldConfig::PrimeField {
            p: p.parse().map_err(|_| anyhow!("field must be `q` or a prime, got {s:?}"))?,
        }),
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    let paths: Vec<&Path> = match cmd {
        Command::Check { file, .. }
        | Command::Tot { file }
        | Command::TotInverse { file }
        | Command::Spectral { file, .. }
        | Command::ErQis { file, .. }
        | Command::Cone { file, .. }
        | Command::Path { file, .. }
        | Command::Homotopy(HomotopyArgs { file, .. })
        | Command::Oracle(OracleCommand::Coderh { file, .. }) => vec![file],
        Command::Tensor { a, b } => vec![a, b],
        Command::Compose { f, g, .. } => vec![f, g],
        Command::Gen(_) => vec![],
    };
    let docs = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    let field = match cmd {
        Command::Gen(GenCommand::RandomTwisted { field, .. }) => parse_field(field)?,
        _ => docs[0].field,
    };
    for (d, p) in docs.iter().zip(&paths) {
        if d.field != field {
            bail!("{}: field {} differs from {}", p.display(), d.field, field);
        }
    }
    let job = Job { cmd, raw: docs };
    match field {
        FieldConfig::Rational => job.run::<Q>(),
        FieldConfig::PrimeField { p } => {
            DynFp::set_modulus(p)?;
            job.run::<DynFp>()
        }
    }
}

struct Job<'a> {
    cmd: &'a Command,
    raw: Vec<RawDocument>,
}

/// Objects selected by `pick`, in name order.
fn select<'a, F: Field, T>(doc: &'a Document<F>, pick: impl Fn(&'a Object<F>) -> Option<&'a T>) -> Vec<(&'a str, &'a T)> {
    doc.objects().iter().filter_map(|(n, o)| pick(o).map(|x| (n.as_str(), x))).collect()
}

fn nonempty<T>(xs: Vec<T>, what: &str) -> Result<Vec<T>> {
    if xs.is_empty() {
        bail!("the document has no {what} objects");
    }
    Ok(xs)
}

fn only<T>(xs: Vec<T>, what: &str, path: usize) -> Result<T> {
    let n = xs.len();
    let mut it = xs.into_iter();
    match (it.next(), n) {
        (Some(x), 1) => Ok(x),
        _ => bail!("document {} must hold exactly one {what}, found {n}", path + 1),
    }
}

fn check_map<T: Sync>(items: &[(&str, &T)], f: impl Fn(&T) -> Report + Sync) -> BTreeMap<String, Report> {
    items.par_iter().map(|(n, x)| (n.to_string(), f(x))).collect()
}

fn verdicts(command: &str, reports: &BTreeMap<String, Report>) -> Outcome {
    let ok = reports.values().all(|r| r.ok);
    let results: BTreeMap<&String, Value> =
        reports.iter().map(|(n, r)| (n, serde_json::to_value(r).expect("reports serialize"))).collect();
    Outcome {
        ok,
        text: pretty(&json!({ "command": command, "ok": ok, "results": results })),
    }
}

/// The document if every self-check passed, the failing reports otherwise.
fn construction(command: &str, reports: &BTreeMap<String, Report>, out: String) -> Outcome {
    if reports.values().all(|r| r.ok) {
        Outcome { ok: true, text: out }
    } else {
        verdicts(command, reports)
    }
}

fn merge(a: &mut Report, prefix: &str, b: &Report) {
    a.absorb(prefix, b);
}

fn page_json<F: Field>(p: &SpectralPage<F>) -> Value {
    let entries: Vec<Value> = p.dims().iter().map(|(b, d)| json!({ "bidegree": [b.h(), b.v()], "dim": d })).collect();
    let deltas: Vec<Value> = p
        .deltas()
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(b, m)| {
            let t = p.target(*b);
            json!({ "src": [b.h(), b.v()], "dst": [t.h(), t.v()], "matrix": emit_matrix(m) })
        })
        .collect();
    json!({ "entries": entries, "differentials": deltas })
}

fn page_table<F: Field>(out: &mut String, name: &str, p: &SpectralPage<F>) {
    let _ = writeln!(out, "{name}: E_{}", p.r());
    for (b, d) in p.dims() {
        let _ = writeln!(out, "  {:<10} {d}", b.to_string());
    }
    for (b, m) in p.deltas().iter().filter(|(_, m)| !m.is_zero()) {
        let _ = writeln!(out, "  delta {b} -> {}", p.target(*b));
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
            let _ = writeln!(out, "    [{}]", row.join(" "));
        }
    }
}

impl Job<'_> {
    fn run<F: Field>(&self) -> Result<Outcome> {
        let docs = self
            .raw
            .iter()
            .enumerate()
            .map(|(i, r)| Document::<F>::from_raw(r).with_context(|| format!("document {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        match self.cmd {
            Command::Check { kind, .. } => self.check(&docs[0], *kind),
            Command::Tot { .. } => self.tot(&docs[0]),
            Command::TotInverse { .. } => self.tot_inverse(&docs[0]),
            Command::Spectral { page, format, .. } => self.spectral(&docs[0], *page, *format),
            Command::ErQis { r, via_cone, .. } => self.er_qis(&docs[0], *r, *via_cone),
            Command::Cone { r, .. } => self.cone(&docs[0], *r),
            Command::Path { r, dainf, .. } => self.path(&docs[0], *r, *dainf),
            Command::Homotopy(args) => match args.action {
                HomotopyAction::Check => self.homotopy_check(&docs[0], args),
                HomotopyAction::Solve => self.homotopy_solve(&docs[0], args),
            },
            Command::Tensor { .. } => self.tensor(&docs),
            Command::Compose { dainf, .. } => self.compose(&docs, *dainf),
            Command::Oracle(OracleCommand::Coderh { r, n, .. }) => self.coderh(&docs[0], *r, *n),
            Command::Gen(GenCommand::RandomTwisted { seed, dims, .. }) => gen_twisted::<F>(*seed, dims),
        }
    }

    fn check<F: Field>(&self, doc: &Document<F>, kind: CheckKind) -> Result<Outcome> {
        let reports = match kind {
            CheckKind::Twisted => {
                let xs = nonempty(select(doc, |o| if let Object::Twisted(a) = o { Some(a) } else { None }), "twisted_complex")?;
                check_map(&xs, check_twisted)
            }
            CheckKind::Morphism => {
                let xs = nonempty(select(doc, |o| if let Object::Morphism(f) = o { Some(f) } else { None }), "twisted_morphism")?;
                check_map(&xs, check_morphism)
            }
            CheckKind::Dainf => {
                let xs = nonempty(select(doc, |o| if let Object::DAInf(a) = o { Some(a) } else { None }), "dainf_algebra")?;
                check_map(&xs, check_dainf)
            }
            CheckKind::DainfMorphism => {
                let xs = nonempty(select(doc, |o| if let Object::DAInfMorphism(f) = o { Some(f) } else { None }), "dainf_morphism")?;
                check_map(&xs, check_dainf_morphism)
            }
            CheckKind::FilteredAinf => {
                let xs = nonempty(select(doc, |o| if let Object::FilteredAInf(a) = o { Some(a) } else { None }), "filtered_ainf")?;
                check_map(&xs, check_filtered_ainf)
            }
        };
        Ok(verdicts("check", &reports))
    }

    fn tot<F: Field>(&self, doc: &Document<F>) -> Result<Outcome> {
        let twisted = select(doc, |o| if let Object::Twisted(a) = o { Some(a) } else { None });
        let algebras = select(doc, |o| if let Object::DAInf(a) = o { Some(a) } else { None });
        if twisted.is_empty() && algebras.is_empty() {
            bail!("the document has no twisted_complex or dainf_algebra objects");
        }
        let mut e = Emitter::<F>::new();
        let mut reports = BTreeMap::new();
        for (name, a) in twisted {
            let k = tot(a);
            let mut rep = check_filtered(&k);
            if tot_inverse(&k).ok().as_ref() != Some(a) {
                rep.fail("round trip", None, "tot_inverse(tot(A)) differs from A");
            }
            e.filtered(name, &k);
            reports.insert(name.to_string(), rep);
        }
        for (name, a) in algebras {
            let k = tot_dainf(a);
            e.filtered_ainf(name, &k);
            reports.insert(name.to_string(), check_filtered_ainf(&k));
        }
        Ok(construction("tot", &reports, e.to_json()))
    }

    fn tot_inverse<F: Field>(&self, doc: &Document<F>) -> Result<Outcome> {
        let xs = nonempty(select(doc, |o| if let Object::Filtered(k) = o { Some(k) } else { None }), "filtered_complex")?;
        let mut e = Emitter::<F>::new();
        let mut reports = BTreeMap::new();
        for (name, k) in xs {
            let a = tot_inverse(k).with_context(|| name.to_string())?;
            let mut rep = check_twisted(&a);
            if tot(&a) != *k {
                rep.fail("round trip", None, "tot(tot_inverse(K)) differs from K");
            }
            e.twisted(name, &a);
            reports.insert(name.to_string(), rep);
        }
        Ok(construction("tot-inverse", &reports, e.to_json()))
    }

    fn spectral<F: Field>(&self, doc: &Document<F>, r: usize, format: Format) -> Result<Outcome> {
        let mut reports = BTreeMap::new();
        let mut pages = BTreeMap::new();
        for (name, o) in doc.objects() {
            let (rep, page) = match o {
                Object::Twisted(a) => (check_twisted(a), spectral_page(a, r)),
                Object::Filtered(k) => (check_filtered(k), spectral_page_filtered(k, r)),
                _ => continue,
            };
            reports.insert(name.clone(), rep);
            pages.insert(name.clone(), page);
        }
        if pages.is_empty() {
            bail!("the document has no twisted_complex or filtered_complex objects");
        }
        if reports.values().any(|r| !r.ok) {
            return Ok(verdicts("spectral", &reports));
        }
        let text = match format {
            Format::Json => {
                let v: BTreeMap<&String, Value> = pages.iter().map(|(n, p)| (n, page_json(p))).collect();
                pretty(&json!({ "page": r, "complexes": v }))
            }
            Format::Table => {
                let mut out = String::new();
                for (n, p) in &pages {
                    page_table(&mut out, n, p);
                }
                out
            }
        };
        Ok(Outcome { ok: true, text })
    }

    fn er_qis<F: Field>(&self, doc: &Document<F>, r: usize, via_cone: bool) -> Result<Outcome> {
        let mut maps = Vec::new();
        for (name, o) in doc.objects() {
            let (f, mut rep) = match o {
                Object::Morphism(f) => (f.clone(), check_morphism(f)),
                Object::DAInfMorphism(f) => (underlying_twisted_morphism(f), check_dainf_morphism(f)),
                _ => continue,
            };
            merge(&mut rep, "source ", &check_twisted(f.src()));
            merge(&mut rep, "target ", &check_twisted(f.dst()));
            maps.push((name.as_str(), f, rep, matches!(o, Object::DAInfMorphism(_))));
        }
        if maps.is_empty() {
            bail!("the document has no twisted_morphism or dainf_morphism objects");
        }
        let results = maps
            .par_iter()
            .map(|(name, f, rep, dainf)| {
                if !rep.ok {
                    return Ok((name.to_string(), false, json!({ "valid": false, "report": rep })));
                }
                let qis = match (via_cone, *dainf) {
                    (true, _) => is_er_quasi_iso_via_cone(f, r),
                    (false, false) => is_er_quasi_iso(f, r)?,
                    (false, true) => {
                        let Some(Object::DAInfMorphism(g)) = doc.get(name) else { unreachable!() };
                        is_er_quasi_iso_dainf(g, r)?
                    }
                };
                Ok((name.to_string(), qis, json!({ "valid": true, "qis": qis })))
            })
            .collect::<multiplex::Result<Vec<_>>>()?;
        let ok = results.iter().all(|x| x.1);
        let v: BTreeMap<String, Value> = results.into_iter().map(|(n, _, v)| (n, v)).collect();
        let method = if via_cone { "cone" } else { "pages" };
        Ok(Outcome {
            ok,
            text: pretty(&json!({ "command": "er-qis", "r": r, "method": method, "ok": ok, "results": v })),
        })
    }

    fn cone<F: Field>(&self, doc: &Document<F>, r: usize) -> Result<Outcome> {
        let xs = nonempty(select(doc, |o| if let Object::Morphism(f) = o { Some(f) } else { None }), "twisted_morphism")?;
        let mut e = Emitter::<F>::new();
        let mut reports = BTreeMap::new();
        for (name, f) in xs {
            let c = cone(f, r);
            let mut rep = check_twisted(&c.complex);
            merge(&mut rep, "inclusion ", &check_morphism(&c.inclusion));
            merge(&mut rep, "projection ", &check_morphism(&c.projection));
            e.twisted(&format!("{name}_cone"), &c.complex);
            reports.insert(name.to_string(), rep);
        }
        Ok(construction("cone", &reports, e.to_json()))
    }

    fn path<F: Field>(&self, doc: &Document<F>, r: usize, dainf: bool) -> Result<Outcome> {
        let mut e = Emitter::<F>::new();
        let mut reports = BTreeMap::new();
        if dainf {
            let xs = nonempty(select(doc, |o| if let Object::DAInf(a) = o { Some(a) } else { None }), "dainf_algebra")?;
            for (name, a) in xs {
                let p = path_dainf(a, r);
                let pn = format!("{name}_path");
                let mut rep = check_dainf(&p.algebra);
                for (tag, m) in [("iota", &p.iota), ("minus", &p.minus), ("plus", &p.plus)] {
                    merge(&mut rep, &format!("{tag} "), &check_dainf_morphism(m));
                }
                e.dainf(name, a).dainf(&pn, &p.algebra);
                e.dainf_morphism(&format!("{name}_iota"), name, &pn, &p.iota);
                e.dainf_morphism(&format!("{name}_minus"), &pn, name, &p.minus);
                e.dainf_morphism(&format!("{name}_plus"), &pn, name, &p.plus);
                reports.insert(name.to_string(), rep);
            }
        } else {
            let xs = nonempty(select(doc, |o| if let Object::Twisted(a) = o { Some(a) } else { None }), "twisted_complex")?;
            for (name, a) in xs {
                let p = path(a, r);
                let pn = format!("{name}_path");
                let mut rep = check_twisted(&p.complex);
                for (tag, m) in [("iota", &p.iota), ("minus", &p.minus), ("plus", &p.plus)] {
                    merge(&mut rep, &format!("{tag} "), &check_morphism(m));
                }
                merge(&mut rep, "contraction ", &check_r_homotopy(&path_witness(a, r)));
                e.twisted(name, a).twisted(&pn, &p.complex);
                e.morphism(&format!("{name}_iota"), name, &pn, &p.iota);
                e.morphism(&format!("{name}_minus"), &pn, name, &p.minus);
                e.morphism(&format!("{name}_plus"), &pn, name, &p.plus);
                reports.insert(name.to_string(), rep);
            }
        }
        Ok(construction("path", &reports, e.to_json()))
    }

    fn homotopy_check<F: Field>(&self, doc: &Document<F>, args: &HomotopyArgs) -> Result<Outcome> {
        let reports = if args.dainf {
            let xs = nonempty(select(doc, |o| if let Object::DAInfHomotopy(h) = o { Some(h) } else { None }), "dainf_homotopy")?;
            if let Some((n, h)) = xs.iter().find(|(_, h)| h.r() != args.r) {
                bail!("{n} is a {}-homotopy, not an {}-homotopy", h.r(), args.r);
            }
            check_map(&xs, check_r_homotopy_dainf)
        } else {
            let xs = nonempty(select(doc, |o| if let Object::Homotopy(h) = o { Some(h) } else { None }), "r_homotopy")?;
            if let Some((n, h)) = xs.iter().find(|(_, h)| h.r() != args.r) {
                bail!("{n} is a {}-homotopy, not an {}-homotopy", h.r(), args.r);
            }
            check_map(&xs, check_r_homotopy)
        };
        Ok(verdicts("homotopy check", &reports))
    }

    fn endpoints<'a, F: Field>(&self, doc: &'a Document<F>, args: &'a HomotopyArgs, kind: &str) -> Result<(&'a str, &'a str)> {
        let names = doc.names_of_kind(kind);
        match (&args.from, &args.to) {
            (Some(f), Some(g)) => Ok((f, g)),
            (None, None) if names.len() == 2 => Ok((names[0], names[1])),
            (None, None) => bail!("give --from and --to, or a document with exactly two {kind} objects"),
            _ => bail!("--from and --to go together"),
        }
    }

    fn homotopy_solve<F: Field>(&self, doc: &Document<F>, args: &HomotopyArgs) -> Result<Outcome> {
        let r = args.r;
        let mut raw = self.raw[0].clone();
        let mut e = Emitter::<F>::new();
        let (from, to, rep, found) = if args.dainf {
            let (from, to) = self.endpoints(doc, args, "dainf_morphism")?;
            let (Some(Object::DAInfMorphism(f)), Some(Object::DAInfMorphism(g))) = (doc.get(from), doc.get(to)) else {
                bail!("{from} and {to} must be dainf_morphism objects");
            };
            if f.src() != g.src() || f.dst() != g.dst() {
                bail!("{from} and {to} are not parallel");
            }
            match solve_r_homotopy_dainf(f, g, r, args.max_arity)? {
                Some(h) => {
                    e.dainf_homotopy(&format!("{from}_{to}_homotopy"), from, to, &h);
                    (from, to, check_r_homotopy_dainf(&h), true)
                }
                None => (from, to, Report::new("dA-infinity r-homotopy"), false),
            }
        } else {
            let (from, to) = self.endpoints(doc, args, "twisted_morphism")?;
            let (Some(Object::Morphism(f)), Some(Object::Morphism(g))) = (doc.get(from), doc.get(to)) else {
                bail!("{from} and {to} must be twisted_morphism objects");
            };
            if f.src() != g.src() || f.dst() != g.dst() {
                bail!("{from} and {to} are not parallel");
            }
            match solve_r_homotopy(f, g, r)? {
                Some(h) => {
                    e.homotopy(&format!("{from}_{to}_homotopy"), from, to, &h);
                    (from, to, check_r_homotopy(&h), true)
                }
                None => (from, to, Report::new("r-homotopy"), false),
            }
        };
        if !found {
            return Ok(Outcome {
                ok: false,
                text: pretty(&json!({
                    "command": "homotopy solve",
                    "ok": false,
                    "detail": format!("no {r}-homotopy from {from} to {to}"),
                })),
            });
        }
        raw.objects.extend(e.raw().objects.clone());
        let reports = BTreeMap::from([(format!("{from}_{to}_homotopy"), rep)]);
        Ok(construction("homotopy solve", &reports, raw.to_json()))
    }

    fn tensor<F: Field>(&self, docs: &[Document<F>]) -> Result<Outcome> {
        let pick = |i: usize| {
            only(select(&docs[i], |o| if let Object::Twisted(a) = o { Some(a) } else { None }), "twisted_complex", i)
        };
        let ((na, a), (nb, b)) = (pick(0)?, pick(1)?);
        let t = tensor(a, b);
        let mut e = Emitter::<F>::new();
        e.twisted("tensor", &t);
        let reports = BTreeMap::from([(format!("{na} x {nb}"), check_twisted(&t))]);
        Ok(construction("tensor", &reports, e.to_json()))
    }

    fn compose<F: Field>(&self, docs: &[Document<F>], dainf: bool) -> Result<Outcome> {
        let mut e = Emitter::<F>::new();
        let rep = if dainf {
            let pick = |i: usize| {
                only(select(&docs[i], |o| if let Object::DAInfMorphism(f) = o { Some(f) } else { None }), "dainf_morphism", i)
            };
            let ((_, f), (_, g)) = (pick(0)?, pick(1)?);
            let h = compose_dainf(f, g)?;
            e.dainf("src", h.src()).dainf("dst", h.dst()).dainf_morphism("composite", "src", "dst", &h);
            check_dainf_morphism(&h)
        } else {
            let pick = |i: usize| {
                only(select(&docs[i], |o| if let Object::Morphism(f) = o { Some(f) } else { None }), "twisted_morphism", i)
            };
            let ((_, f), (_, g)) = (pick(0)?, pick(1)?);
            let h = compose(f, g)?;
            e.twisted("src", h.src()).twisted("dst", h.dst()).morphism("composite", "src", "dst", &h);
            check_morphism(&h)
        };
        let reports = BTreeMap::from([("composite".to_string(), rep)]);
        Ok(construction("compose", &reports, e.to_json()))
    }

    fn coderh<F: Field>(&self, doc: &Document<F>, r: usize, n: Option<usize>) -> Result<Outcome> {
        let xs = nonempty(select(doc, |o| if let Object::Homotopy(h) = o { Some(h) } else { None }), "r_homotopy")?;
        if let Some((name, h)) = xs.iter().find(|(_, h)| h.r() != r) {
            bail!("{name} is a {}-homotopy, not an {r}-homotopy", h.r());
        }
        let results = xs
            .par_iter()
            .map(|(name, h)| {
                let n = n.unwrap_or_else(|| default_truncation(h));
                let v = check_coderh(h, n)?;
                Ok((name.to_string(), v.agree() && v.direct, json!({
                    "N": n,
                    "coalgebra": v.coalgebra,
                    "direct": v.direct,
                    "agree": v.agree(),
                    "first_failure": v.first_failure,
                })))
            })
            .collect::<multiplex::Result<Vec<_>>>()?;
        let ok = results.iter().all(|x| x.1);
        let v: BTreeMap<String, Value> = results.into_iter().map(|(n, _, v)| (n, v)).collect();
        Ok(Outcome {
            ok,
            text: pretty(&json!({ "command": "oracle coderh", "r": r, "ok": ok, "results": v })),
        })
    }
}

fn gen_twisted<F: Field>(seed: u64, dims: &str) -> Result<Outcome> {
    let m = parse_dims(dims)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_twisted::<F, _>(&mut rng, &m);
    let mut e = Emitter::<F>::new();
    e.twisted("A", &a);
    let reports = BTreeMap::from([("A".to_string(), check_twisted(&a))]);
    Ok(construction("gen random-twisted", &reports, e.to_json()))
}
