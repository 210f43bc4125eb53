#![no_main]

use libfuzzer_sys::fuzz_target;
use multiplex::doc::parse_dims;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_dims(text) {
        let again: Vec<String> = m.dims().iter().map(|(b, n)| format!("{},{},{n}", b.h(), b.v())).collect();
        assert_eq!(parse_dims(&again.join(";")).unwrap(), m);
    }
});
