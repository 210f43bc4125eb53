#![no_main]

use libfuzzer_sys::fuzz_target;
use multiplex::field::{Field, F32003, Q};
use serde_json::Value;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<Q>() {
        assert_eq!(Q::from_json(&x.to_json()).unwrap(), x);
    }
    let Ok(v) = serde_json::from_str::<Value>(text) else { return };
    if let Ok(x) = Q::from_json(&v) {
        assert_eq!(Q::from_json(&x.to_json()).unwrap(), x);
    }
    if let Ok(x) = F32003::from_json(&v) {
        assert_eq!(F32003::from_json(&x.to_json()).unwrap(), x);
    }
});
