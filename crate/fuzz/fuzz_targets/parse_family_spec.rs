#![no_main]

use chainsemi::text::parse_family_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_family_spec(s);
    }
});
