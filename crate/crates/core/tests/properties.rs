use std::sync::Arc;

use proptest::prelude::*;

use hyperdef::hyper::{build_u_r_chi, classify_pchar, conjugate_pchar, PCharacter};
use hyperdef::linalg::Matrix;
use hyperdef::repthy::{dot_action, ChiContext};
use hyperdef::serial::{algebra_to_json, parse_algebra};
use hyperdef::{Fe, Field};

const FIELDS: [(u32, u32); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)];

fn field_and_elems() -> impl Strategy<Value = (Arc<Field>, Fe, Fe, Fe)> {
    (0..FIELDS.len()).prop_flat_map(|i| {
        let (p, k) = FIELDS[i];
        let f = Field::new(p, k).unwrap();
        let q = f.order() as u16;
        (Just(f), 0..q, 0..q, 0..q).prop_map(|(f, a, b, c)| (f, Fe(a), Fe(b), Fe(c)))
    })
}

fn chi_over(p: u32) -> impl Strategy<Value = PCharacter> {
    let q = p as u16;
    (0..q, 0..q, 0..q).prop_map(|(e, h, f)| PCharacter::new(Fe(e), Fe(h), Fe(f)))
}

/// Determinant-one matrix from three entries, `a` nonzero.
fn sl2(f: &Field, a: u16, b: u16, c: u16) -> Matrix {
    let (a, b, c) = (Fe(a), Fe(b), Fe(c));
    let d = f.div(f.add(Fe::ONE, f.mul(b, c)), a).unwrap();
    Matrix::from_rows(&[vec![a, b], vec![c, d]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_is_a_commutative_ring_with_inverses((f, a, b, c) in field_and_elems()) {
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
        }
        // Frobenius is additive
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn chi_text_round_trips((f, a, b, c) in field_and_elems()) {
        let chi = PCharacter::new(a, b, c);
        prop_assert_eq!(PCharacter::parse(&chi.format(&f), &f).unwrap(), chi);
    }

    #[test]
    fn conjugation_is_an_action_preserving_the_class(
        chi in chi_over(5),
        g in (1u16..5, 0u16..5, 0u16..5),
        h in (1u16..5, 0u16..5, 0u16..5),
    ) {
        let f = Field::prime(5).unwrap();
        let (mg, mh) = (sl2(&f, g.0, g.1, g.2), sl2(&f, h.0, h.1, h.2));
        let once = conjugate_pchar(&conjugate_pchar(&chi, &mg, &f).unwrap(), &mh, &f).unwrap();
        let composed = conjugate_pchar(&chi, &mh.mul(&mg, &f), &f).unwrap();
        prop_assert_eq!(once, composed);
        prop_assert_eq!(classify_pchar(&once, &f), classify_pchar(&chi, &f));
    }

    #[test]
    fn dot_action_is_an_involution((f, a, _, _) in field_and_elems()) {
        prop_assert_eq!(dot_action(dot_action(a, &f), &f), a);
        prop_assert_eq!(dot_action(a, &f), f.sub(f.neg(a), f.from_int(2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reduced_algebra_multiplication_is_associative(
        chi in chi_over(3),
        x in proptest::collection::vec(0u16..3, 27),
        y in proptest::collection::vec(0u16..3, 27),
        z in proptest::collection::vec(0u16..3, 27),
    ) {
        let f = Field::prime(3).unwrap();
        let alg = build_u_r_chi(0, chi, f).unwrap();
        let v = |d: &[u16]| d.iter().map(|&c| Fe(c)).collect::<Vec<_>>();
        let (x, y, z) = (v(&x), v(&y), v(&z));
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        let one = alg.basis_vector(alg.unit());
        prop_assert_eq!(alg.mul(&one, &x), x.clone());
        prop_assert_eq!(alg.mul(&x, &one), x);
    }

    #[test]
    fn algebra_json_round_trips(chi in chi_over(3), r in 0u32..2) {
        let f = Field::prime(3).unwrap();
        let alg = build_u_r_chi(r, chi, f).unwrap();
        let back = parse_algebra(&algebra_to_json(&alg).unwrap()).unwrap();
        prop_assert_eq!(back.dim(), alg.dim());
        prop_assert!(back.structure_tensor().eq(alg.structure_tensor()));
    }

    #[test]
    fn lambda_chi_solves_artin_schreier(chi in chi_over(3)) {
        let ctx = ChiContext::new(0, &chi, &Field::prime(3).unwrap()).unwrap();
        let f = &*ctx.field;
        prop_assert_eq!(ctx.lambdas.len(), 3);
        for l in &ctx.lambdas {
            prop_assert_eq!(f.sub(f.pow(l.value, 3), l.value), f.pow(ctx.chi.h, 3));
        }
    }

    #[test]
    fn teenage_verma_dimension_is_p_dim_p(chi in chi_over(3), pi in 0usize..3, li in 0usize..3) {
        let ctx = ChiContext::new(1, &chi, &Field::prime(3).unwrap()).unwrap();
        let z = ctx.teenage_verma(pi, li).unwrap();
        prop_assert_eq!(z.dim, 3 * ctx.simples[pi].dim());
        prop_assert_eq!(ctx.simples[pi].dim(), pi + 1);
    }
}
