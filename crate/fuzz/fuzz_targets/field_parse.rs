#![no_main]

use hyperdef::Field;
use libfuzzer_sys::fuzz_target;

// Input: "<p> <k> <element>", e.g. "3 2 [1,2]".
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let mut parts = s.splitn(3, ' ');
    let (Some(p), Some(k), Some(elem)) = (parts.next(), parts.next(), parts.next()) else { return };
    let (Ok(p), Ok(k)) = (p.parse::<u32>(), k.parse::<u32>()) else { return };
    let Ok(f) = Field::new(p, k) else { return };
    if let Ok(x) = f.parse(elem) {
        assert_eq!(f.parse(&f.format(x)).unwrap(), x);
    }
});
