#![no_main]

use std::sync::OnceLock;

use hyperdef::hyper::PCharacter;
use hyperdef::Field;
use libfuzzer_sys::fuzz_target;

static F9: OnceLock<std::sync::Arc<Field>> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let f = F9.get_or_init(|| Field::new(3, 2).unwrap());
    if let Ok(chi) = PCharacter::parse(s, f) {
        assert_eq!(PCharacter::parse(&chi.format(f), f).unwrap(), chi);
    }
});
