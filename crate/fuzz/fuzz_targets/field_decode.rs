#![no_main]

use fracmap::io::{decode_field, encode_field};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((field, header)) = decode_field(data) {
        // Anything accepted must survive a re-encode bit for bit.
        let (again, h2) = decode_field(&encode_field(&field, header.checkpoint))
            .expect("re-encoded field decodes");
        assert_eq!(h2.grid, header.grid);
        assert_eq!(h2.digest, header.digest);
        let bits = |f: &fracmap::grid::VectorField| -> Vec<u64> {
            f.samples().iter().map(|v| v.to_bits()).collect()
        };
        assert_eq!(bits(&again), bits(&field));
    }
});
