use hyperdef::dist::{oracle_structure_constants, oracle_structure_constants_via_ring};
use hyperdef::hyper::build_di_gr;
use hyperdef::Field;

fn sorted(mut v: Vec<(usize, usize, usize, hyperdef::Fe)>) -> Vec<(usize, usize, usize, hyperdef::Fe)> {
    v.sort_unstable_by_key(|x| (x.0, x.1, x.2));
    v
}

#[test]
fn kostant_tensor_equals_big_cell_oracle() {
    for (p, r) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
        let f = Field::prime(p).unwrap();
        let alg = build_di_gr(r, f.clone()).unwrap();
        let built = sorted(alg.structure_tensor().collect());
        let oracle = sorted(oracle_structure_constants(r, &f).unwrap());
        assert_eq!(built.len(), oracle.len(), "p={p} r={r}");
        assert!(built == oracle, "p={p} r={r}: tensors differ");
    }
}

#[test]
fn coordinate_ring_route_equals_kostant_for_p2() {
    let f = Field::prime(2).unwrap();
    let alg = build_di_gr(1, f.clone()).unwrap();
    let via_ring = sorted(oracle_structure_constants_via_ring(1, f, None).unwrap());
    assert_eq!(sorted(alg.structure_tensor().collect()), via_ring);
}

#[test]
fn oracle_over_extension_field_is_prime_field_tensor() {
    let f4 = Field::new(2, 2).unwrap();
    let f2 = Field::prime(2).unwrap();
    let a = oracle_structure_constants(1, &f4).unwrap();
    let b = oracle_structure_constants(1, &f2).unwrap();
    assert_eq!(a, b);
}
