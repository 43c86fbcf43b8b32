#![no_main]

use std::sync::{Arc, OnceLock};

use hyperdef::hyper::{build_di_gr, StructureConstantAlgebra};
use hyperdef::serial::parse_representation;
use hyperdef::Field;
use libfuzzer_sys::fuzz_target;

static DI1: OnceLock<Arc<StructureConstantAlgebra>> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let alg = DI1.get_or_init(|| Arc::new(build_di_gr(1, Field::prime(2).unwrap()).unwrap()));
    let _ = parse_representation(s, alg.clone());
});
