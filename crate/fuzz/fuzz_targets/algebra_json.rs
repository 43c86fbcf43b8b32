#![no_main]

use hyperdef::serial::parse_algebra;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_algebra(s);
});
