#![no_main]

use chainsemi::text::parse_chain_map;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = parse_chain_map(s) {
        assert_eq!(parse_chain_map(&a.to_string()).unwrap(), a);
    }
});
