#![no_main]

use chainsemi::text::parse_map_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(maps) = parse_map_list(s) {
        let text: Vec<String> = maps.iter().map(|a| a.to_string()).collect();
        assert_eq!(parse_map_list(&text.join("\n")).unwrap(), maps);
    }
});
