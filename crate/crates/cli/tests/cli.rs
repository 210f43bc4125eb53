use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multiplex::dainf::{compose_dainf, lambda_r_dga, path_dainf, DAInfAlgebra, DAInfMorphism};
use multiplex::doc::Emitter;
use multiplex::field::{Q, F32003};
use multiplex::gen::{random_er_qis, random_module, random_morphism, random_twisted, Shape};
use multiplex::twisted::TwistedMorphism;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiplex"))
        .args(args)
        .env("MULTIPLEX_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn zero_complex_checks() {
    let o = run(&["check", "twisted", path_str(&fixture("zero.json"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["ok"], true);
}

#[test]
fn broken_complex_reports_location() {
    let o = run(&["check", "twisted", path_str(&fixture("not_square_zero.json"))]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    let fails = &v["results"]["A"]["failures"];
    assert_eq!(fails[0]["bidegree"], serde_json::json!([0, 0]));
}

#[test]
fn acyclic_column_has_zero_first_page() {
    let o = run(&["spectral", path_str(&fixture("acyclic_column.json")), "--page", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let entries = v["complexes"]["A"]["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["dim"] == 0), "{v}");
    let o = run(&["spectral", path_str(&fixture("acyclic_column.json")), "--page", "0", "--format", "table"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("delta (0,0) -> (0,1)"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_shape = write(
        dir.path(),
        "shape.json",
        r#"{"schema_version": "1", "field": {"kind": "rational"}, "objects": {"A": {"type": "twisted_complex",
            "dims": [[0,0,1],[0,1,1]], "d": [{"index": 0, "map": {"bidegree": [0,1], "blocks": [{"src": [0,0], "matrix": [["1","1"]]}]}}]}}}"#,
    );
    let bad_json = write(dir.path(), "broken.json", "{");
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"schema_version": "1", "field": {"kind": "rational"}, "objects": {"f": {"type": "twisted_morphism", "src": "A", "dst": "A"}}}"#,
    );
    let not_prime = write(dir.path(), "p.json", r#"{"schema_version": "1", "field": {"kind": "prime_field", "p": 8}, "objects": {}}"#);
    for p in [&bad_shape, &bad_json, &unknown, &not_prime] {
        let o = run(&["check", "twisted", path_str(p)]);
        assert_eq!(code(&o), 2, "{}", p.display());
        assert!(!o.stderr.is_empty());
    }
    // Right file, wrong kind.
    assert_eq!(code(&run(&["check", "dainf", path_str(&fixture("zero.json"))])), 2);
    assert_eq!(code(&run(&["check", "twisted", "/nonexistent/file.json"])), 2);
    let o = run(&["tensor", path_str(&fixture("zero.json")), path_str(&fixture("random.json"))]);
    assert_eq!(code(&o), 2, "mixed fields");
    let o = run(&["gen", "random-twisted", "--seed", "1", "--dims", "0,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn tot_round_trips_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["random.json", "random_q.json", "staircase.json"] {
        let o = run(&["tot", path_str(&fixture(name))]);
        assert_eq!(code(&o), 0, "{name}");
        let t = write(dir.path(), "t.json", std::str::from_utf8(&o.stdout).unwrap());
        let o = run(&["tot-inverse", path_str(&t)]);
        assert_eq!(code(&o), 0, "{name}");
        let orig: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let back = json(&o);
        // Compare after a typed reload so block order and zero blocks do not matter.
        let o2 = run(&["tot", path_str(&write(dir.path(), "b.json", &back.to_string()))]);
        assert_eq!(o2.stdout, run(&["tot", path_str(&fixture(name))]).stdout);
        assert_eq!(back["field"], orig["field"]);
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["gen", "random-twisted", "--seed", "11", "--dims", "0,0,2;0,1,2;1,0,1;1,1,2;2,1,1"]);
    let b = run(&["gen", "random-twisted", "--seed", "11", "--dims", "0,0,2;0,1,2;1,0,1;1,1,2;2,1,1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["gen", "random-twisted", "--seed", "12", "--dims", "0,0,2;0,1,2;1,0,1;1,1,2;2,1,1"]);
    assert_ne!(a.stdout, c.stdout);
    let f = fixture("path_r1.json");
    let x = run(&["er-qis", path_str(&f), "-r", "1"]);
    let y = Command::new(env!("CARGO_BIN_EXE_multiplex"))
        .args(["er-qis", path_str(&f), "-r", "1"])
        .env("MULTIPLEX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_multiplex"))
        .args(["check", "twisted", path_str(&fixture("zero.json"))])
        .env("MULTIPLEX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn path_homotopy_and_oracle() {
    let p = fixture("path_r1.json");
    assert_eq!(code(&run(&["check", "morphism", path_str(&p)])), 0);
    let h = fixture("homotopy_r1.json");
    let o = run(&["homotopy", "check", path_str(&h), "-r", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["homotopy", "check", path_str(&h), "-r", "2"])), 2);
    let o = run(&["oracle", "coderh", path_str(&h), "-r", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let res = v["results"].as_object().unwrap().values().next().unwrap().clone();
    assert_eq!(res["agree"], true);
    let n = res["N"].as_u64().unwrap().to_string();
    assert_eq!(code(&run(&["oracle", "coderh", path_str(&h), "-r", "1", "-N", &n])), 0);
    assert_eq!(code(&run(&["oracle", "coderh", path_str(&h), "-r", "1", "-N", "0"])), 2);
    // ∂⁻ and ∂⁺ agree only up to a 1-homotopy.
    let o = run(&["homotopy", "solve", path_str(&p), "-r", "0", "--from", "A_minus", "--to", "A_plus"]);
    assert_eq!(code(&o), 1);
    let o = run(&["homotopy", "solve", path_str(&p), "-r", "2", "--from", "A_minus", "--to", "A_plus"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["objects"]["A_minus_A_plus_homotopy"]["r"] == 2);
}

#[test]
fn tampered_homotopy_fails_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixture("homotopy_r1.json")).unwrap()).unwrap();
    let comps = v["objects"]["A_minus_A_plus_homotopy"]["components"].as_array_mut().unwrap();
    let blocks = comps[0]["map"]["blocks"].as_array_mut().unwrap();
    let entry = &mut blocks[0]["matrix"][0][0];
    *entry = Value::from((entry.as_u64().unwrap() + 1) % 32003);
    let t = write(dir.path(), "h.json", &v.to_string());
    assert_eq!(code(&run(&["homotopy", "check", path_str(&t), "-r", "1"])), 1);
    let o = run(&["oracle", "coderh", path_str(&t), "-r", "1"]);
    assert_eq!(code(&o), 1);
    let res = json(&o)["results"]["A_minus_A_plus_homotopy"].clone();
    assert_eq!((res["coalgebra"].clone(), res["direct"].clone()), (Value::Bool(false), Value::Bool(false)));
}

#[test]
fn cone_and_compose_and_tensor() {
    let p = fixture("path_r1.json");
    let o = run(&["cone", path_str(&p), "-r", "1"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["objects"]["A_iota_cone"].is_object());

    let dir = tempfile::tempdir().unwrap();
    let full: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let o = &full["objects"];
    let f = serde_json::json!({"schema_version": "1", "field": full["field"], "objects": {"P": o["A_path"], "A": o["A"], "m": o["A_minus"]}});
    let mut f = f;
    f["objects"]["m"]["src"] = "P".into();
    f["objects"]["m"]["dst"] = "A".into();
    let mut g = serde_json::json!({"schema_version": "1", "field": full["field"], "objects": {"P": o["A_path"], "A": o["A"], "i": o["A_iota"]}});
    g["objects"]["i"]["src"] = "A".into();
    g["objects"]["i"]["dst"] = "P".into();
    let (fp, gp) = (write(dir.path(), "f.json", &f.to_string()), write(dir.path(), "g.json", &g.to_string()));
    // ∂⁻ ∘ ι is the identity.
    let out = run(&["compose", path_str(&fp), path_str(&gp)]);
    assert_eq!(code(&out), 0);
    let c = json(&out);
    assert_eq!(c["objects"]["src"], c["objects"]["dst"]);
    let comps = c["objects"]["composite"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    for b in comps[0]["map"]["blocks"].as_array().unwrap() {
        let m = b["matrix"].as_array().unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.as_array().unwrap().iter().enumerate() {
                assert_eq!(x.as_u64().unwrap(), (i == j) as u64);
            }
        }
    }
    // ι ∘ ι does not typecheck.
    assert_eq!(code(&run(&["compose", path_str(&gp), path_str(&gp)])), 2);

    let o = run(&["tensor", path_str(&fixture("random.json")), path_str(&fixture("random.json"))]);
    assert_eq!(code(&o), 0);
    let o = run(&["tensor", path_str(&fixture("staircase.json")), path_str(&fixture("acyclic_column.json"))]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["objects"]["tensor"].is_object());
}

fn morphism_doc(f: &TwistedMorphism<F32003>, name: &str) -> String {
    let mut e = Emitter::new();
    e.twisted("A", f.src()).twisted("B", f.dst()).morphism(name, "A", "B", f);
    e.to_json()
}

#[test]
fn er_qis_methods_agree_on_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = vec![fixture("path_r1.json")];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..6 {
        let shape = Shape { width: 2, degrees: (-1, 1), max_dim: 2 };
        let m = random_module(&mut rng, shape);
        let a = random_twisted::<F32003, _>(&mut rng, &m);
        let (i, _) = random_er_qis(&mut rng, &a, k % 3);
        files.push(write(dir.path(), &format!("q{k}.json"), &morphism_doc(&i, "f")));
        let m = random_module(&mut rng, shape);
        let b = random_twisted::<F32003, _>(&mut rng, &m);
        let f = random_morphism(&mut rng, &a, &b);
        files.push(write(dir.path(), &format!("m{k}.json"), &morphism_doc(&f, "f")));
    }
    let mut seen = [false; 2];
    for f in &files {
        for r in ["0", "1", "2"] {
            let x = run(&["er-qis", path_str(f), "-r", r]);
            let y = run(&["er-qis", path_str(f), "-r", r, "--via-cone"]);
            assert_eq!(code(&x), code(&y), "{} r = {r}", f.display());
            assert_eq!(json(&x)["results"], json(&y)["results"]);
            seen[code(&x) as usize] = true;
        }
    }
    assert_eq!(seen, [true, true], "corpus should contain both verdicts");
}

#[test]
fn dainf_commands() {
    let dir = tempfile::tempdir().unwrap();
    for r in 0..3 {
        let l = lambda_r_dga::<Q>(r);
        let a = l.dga.algebra();
        let mut e = Emitter::new();
        e.dainf("L", a).dainf("U", &DAInfAlgebra::unit());
        e.dainf_morphism("id", "L", "L", &DAInfMorphism::identity(a));
        let p = write(dir.path(), &format!("l{r}.json"), &e.to_json());
        assert_eq!(code(&run(&["check", "dainf", path_str(&p)])), 0);
        assert_eq!(code(&run(&["check", "dainf-morphism", path_str(&p)])), 0);

        let o = run(&["tot", path_str(&p)]);
        assert_eq!(code(&o), 0);
        let t = write(dir.path(), "t.json", std::str::from_utf8(&o.stdout).unwrap());
        assert_eq!(code(&run(&["check", "filtered-ainf", path_str(&t)])), 0);

        let o = run(&["path", path_str(&p), "-r", &r.to_string(), "--dainf"]);
        assert_eq!(code(&o), 0);
        let q = write(dir.path(), "p.json", std::str::from_utf8(&o.stdout).unwrap());
        assert_eq!(code(&run(&["check", "dainf-morphism", path_str(&q)])), 0);
        let mut e = Emitter::new();
        e.dainf("L", a).dainf_morphism("id", "L", "L", &DAInfMorphism::identity(a));
        let f = write(dir.path(), "f.json", &e.to_json());
        let o = run(&["compose", path_str(&f), path_str(&f), "--dainf"]);
        assert_eq!(code(&o), 0);
        assert_eq!(code(&run(&["er-qis", path_str(&f), "-r", "0"])), 0);
    }
}

/// `ι∘∂⁻ ≃_r id` on the path of a zero-product algebra, solved and rechecked.
#[test]
fn dainf_contraction_is_solved() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let shape = Shape { width: 1, degrees: (-1, 1), max_dim: 1 };
    let m = random_module(&mut rng, shape);
    let a = DAInfAlgebra::from_twisted(&random_twisted::<F32003, _>(&mut rng, &m));
    for r in 0..3 {
        let p = path_dainf(&a, r);
        let f = compose_dainf(&p.iota, &p.minus).unwrap();
        let mut e = Emitter::new();
        e.dainf("P", &p.algebra);
        e.dainf_morphism("f", "P", "P", &f).dainf_morphism("id", "P", "P", &DAInfMorphism::identity(&p.algebra));
        let q = write(dir.path(), "q.json", &e.to_json());
        let rs = r.to_string();
        let o = run(&["homotopy", "solve", path_str(&q), "-r", &rs, "--dainf", "--from", "f", "--to", "id", "--max-arity", "1"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        let h = write(dir.path(), "h.json", std::str::from_utf8(&o.stdout).unwrap());
        assert_eq!(code(&run(&["homotopy", "check", path_str(&h), "-r", &rs, "--dainf"])), 0);
    }
}
