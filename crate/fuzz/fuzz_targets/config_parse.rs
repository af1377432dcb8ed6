#![no_main]

use fracmap::io::RunConfig;
use libfuzzer_sys::fuzz_target;

// Arbitrary bytes as a configuration file; the first line, when present and
// shaped like `key=value`, is additionally applied as an override.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_json_str(text, &[]) {
        // A config that loads must hash and report derived quantities.
        let _ = cfg.hash();
        let _ = cfg.derived();
    }
    if let Some((first, rest)) = text.split_once('\n') {
        let _ = RunConfig::from_json_str(rest, &[first.to_string()]);
    }
});
