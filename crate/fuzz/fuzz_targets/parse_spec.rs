#![no_main]

use libfuzzer_sys::fuzz_target;
use priorent::SystemSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = SystemSpec::from_json_bytes(data) {
        let text = spec.to_json();
        let again = SystemSpec::from_json(&text).expect("serialized spec must parse");
        assert_eq!(again, spec);
    }
});
