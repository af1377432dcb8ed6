#![no_main]

use fracmap::io::{apply_override, parse_override};
use libfuzzer_sys::fuzz_target;
use serde_json::json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((path, value)) = parse_override(text) {
        assert!(!path.is_empty());
        let mut root = json!({
            "grid": {"dim": 1, "points_per_axis": 32},
            "energy": {"s": 0.5},
            "seed": 1
        });
        if apply_override(&mut root, &path, value.clone()).is_ok() {
            let mut node = &root;
            for key in &path {
                node = &node[key.as_str()];
            }
            assert_eq!(node, &value);
        }
    }
});
