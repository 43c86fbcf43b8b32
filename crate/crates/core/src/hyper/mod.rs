//! Finite-dimensional algebras attached to `SL₂`: the Frobenius-kernel
//! distribution algebras `Di(G_r)`, the higher reduced enveloping algebras
//! `U^[r]_χ`, the reduced enveloping algebras `U_χ(sl₂)`, their Borel-type
//! subalgebras, the quotient map `Υ` and centers.

pub(crate) mod algebra;
mod center;
mod kostant;
mod pchar;
mod uchi;
mod upsilon;

pub use algebra::{AlgebraKind, BasisKind, DividedPowerMonomial, StructureConstantAlgebra};
pub use center::{center, CenterData};
pub use kostant::{build_di_gr, build_u_r_chi, build_uhat_b};
pub use pchar::{classify_pchar, conjugate_pchar, conjugate_to_standard, ChiClass, PCharacter, SemisimpleNilpotent};
pub use uchi::build_u_chi_g;
pub use upsilon::{upsilon, Upsilon};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Fe, Field};
    use std::sync::Arc;

    fn tensor(a: &StructureConstantAlgebra) -> Vec<(usize, usize, usize, Fe)> {
        a.structure_tensor().collect()
    }

    #[test]
    fn di_g1_small_primes() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            let di = build_di_gr(1, f).unwrap();
            assert_eq!(di.dim(), (p * p * p) as usize);
            di.check_unit().unwrap();
            di.check_associativity(None, 0).unwrap();
        }
    }

    #[test]
    fn u_r_zero_is_next_frobenius_kernel() {
        for (p, r) in [(2u32, 0u32), (3, 0), (2, 1)] {
            let f = Field::prime(p).unwrap();
            let u = build_u_r_chi(r, PCharacter::ZERO, f.clone()).unwrap();
            let di = build_di_gr(r + 1, f).unwrap();
            assert_eq!(tensor(&u), tensor(&di), "p={p} r={r}");
        }
    }

    #[test]
    fn u_r_chi_associative_with_upsilon() {
        let cases: Vec<(u32, u32, u32, PCharacter)> = vec![
            (2, 0, 2, PCharacter::new(Fe(0), Fe(0), Fe(1))),
            (2, 0, 2, PCharacter::new(Fe(1), Fe(1), Fe(0))),
            (3, 0, 1, PCharacter::new(Fe(1), Fe(2), Fe(1))),
            (2, 1, 2, PCharacter::new(Fe(0), Fe(2), Fe(1))),
        ];
        for (p, r, k, chi) in cases {
            let f = Field::new(p, k).unwrap();
            let u = build_u_r_chi(r, chi, f.clone()).unwrap();
            u.check_unit().unwrap();
            if u.dim() <= 27 {
                u.check_associativity(None, 0).unwrap();
            } else {
                u.check_associativity(Some(20000), 1).unwrap();
            }
            let g = build_u_chi_g(chi, f.clone()).unwrap();
            let ups = upsilon(&u, &g).unwrap();
            ups.verify_multiplicative(&u, &g, None, 0).unwrap();
            assert_eq!(ups.rank(&g), g.dim());
            let _ = Arc::new(u);
        }
    }
}
