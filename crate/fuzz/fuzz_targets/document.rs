#![no_main]

use libfuzzer_sys::fuzz_target;
use multiplex::doc::{Document, Emitter, Object, RawDocument};
use multiplex::field::{FieldConfig, F32003, Q};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(raw) = RawDocument::from_json(text) else { return };
    // Emitting a resolved complex and reading it back must give it again.
    match raw.field {
        FieldConfig::Rational => {
            if let Ok(doc) = Document::<Q>::from_raw(&raw) {
                for (name, o) in doc.objects() {
                    if let Object::Twisted(a) = o {
                        let mut e = Emitter::new();
                        e.twisted(name, a);
                        let back = Document::<Q>::parse(&e.to_json()).expect("emitted documents parse");
                        assert!(matches!(back.get(name), Some(Object::Twisted(b)) if b == a));
                    }
                }
            }
        }
        FieldConfig::PrimeField { p: 32003 } => {
            let _ = Document::<F32003>::from_raw(&raw);
        }
        FieldConfig::PrimeField { .. } => {}
    }
});
