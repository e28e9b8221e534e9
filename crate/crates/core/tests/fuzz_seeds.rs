use std::fs;
use std::path::PathBuf;

use chainsemi::text::{parse_chain_map, parse_class_spec, parse_family_spec, parse_map_list};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

fn check(target: &str, rejected: &[&str], parse: impl Fn(&str) -> bool) {
    for (name, text) in seeds(target) {
        assert_eq!(
            parse(&text),
            !rejected.contains(&name.as_str()),
            "{target}/{name}"
        );
    }
}

#[test]
fn seeds_parse_as_expected() {
    check("parse_chain_map", &["truncated"], |s| {
        parse_chain_map(s)
            .map(|a| assert_eq!(parse_chain_map(&a.to_string()).unwrap(), a))
            .is_ok()
    });
    check("parse_map_list", &["mixed_sizes"], |s| {
        parse_map_list(s).is_ok()
    });
    check("parse_class_spec", &["overflow"], |s| {
        parse_class_spec(s).is_ok()
    });
    check("parse_family_spec", &[], |s| parse_family_spec(s).is_ok());
}
