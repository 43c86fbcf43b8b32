use std::sync::Arc;

use crate::error::Result;
use crate::gf::{Fe, Field};

use super::algebra::{AlgebraKind, DividedPowerMonomial, StructureConstantAlgebra};
use super::pchar::PCharacter;

/// Left multiplication by `e`, `h`, `f` on `U_χ(sl₂)` in the power basis
/// `e^i h^k f^j` (`i, k, j < p`), using `[e,f] = h`, `[h,e] = 2e`,
/// `[h,f] = −2f`, `e^p = χ(e)^p`, `f^p = χ(f)^p`, `h^p = h + χ(h)^p`.
struct Rewriter<'a> {
    f: &'a Field,
    p: usize,
    ce: Fe,
    ch: Fe,
    cf: Fe,
}

impl Rewriter<'_> {
    fn idx(&self, i: usize, k: usize, j: usize) -> usize {
        (i * self.p + k) * self.p + j
    }

    /// Adds `c · e^i · (Σ_k poly[k] h^k) · f^j` to `out`, reducing `h`-powers
    /// and wrapping `f`-powers at `p`.
    fn add_term(&self, out: &mut [Fe], c: Fe, i: usize, poly: &[Fe], j: usize) {
        let f = self.f;
        let p = self.p;
        let mut c = c;
        let mut j = j;
        if j == p {
            c = f.mul(c, self.cf);
            j = 0;
        }
        let mut i = i;
        if i == p {
            c = f.mul(c, self.ce);
            i = 0;
        }
        if c.is_zero() {
            return;
        }
        // h^p = h + χ(h)^p; degrees here never exceed p
        let mut red = vec![Fe::ZERO; p];
        for (k, &a) in poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if k < p {
                red[k] = f.add(red[k], a);
            } else {
                debug_assert_eq!(k, p);
                red[1 % p] = f.add(red[1 % p], a);
                red[0] = f.add(red[0], f.mul(a, self.ch));
            }
        }
        for (k, &a) in red.iter().enumerate() {
            if !a.is_zero() {
                let t = self.idx(i, k, j);
                out[t] = f.add(out[t], f.mul(c, a));
            }
        }
    }

    /// `(h + s)^k` coefficients.
    fn shifted_power(&self, s: Fe, k: usize) -> Vec<Fe> {
        let f = self.f;
        let mut poly = vec![Fe::ONE];
        for _ in 0..k {
            let mut next = vec![Fe::ZERO; poly.len() + 1];
            for (d, &a) in poly.iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], a);
                next[d] = f.add(next[d], f.mul(a, s));
            }
            poly = next;
        }
        poly
    }

    fn left(&self, gen: usize, v: &[Fe]) -> Vec<Fe> {
        let f = self.f;
        let p = self.p;
        let mut out = vec![Fe::ZERO; v.len()];
        for i in 0..p {
            for k in 0..p {
                for j in 0..p {
                    let c = v[self.idx(i, k, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let mut hk = vec![Fe::ZERO; k + 1];
                    hk[k] = Fe::ONE;
                    match gen {
                        0 => self.add_term(&mut out, c, i + 1, &hk, j),
                        1 => {
                            // h e^i = e^i (h + 2i)
                            let mut poly = vec![Fe::ZERO; k + 2];
                            poly[k + 1] = Fe::ONE;
                            poly[k] = f.from_int(2 * i as i64);
                            self.add_term(&mut out, c, i, &poly, j);
                        }
                        _ => {
                            // f e^i h^k = e^i (h+2)^k f − i e^{i−1} (h+i−1) h^k
                            let sp = self.shifted_power(f.from_int(2), k);
                            self.add_term(&mut out, c, i, &sp, j + 1);
                            if i > 0 {
                                let mut poly = vec![Fe::ZERO; k + 2];
                                poly[k + 1] = Fe::ONE;
                                poly[k] = f.from_int(i as i64 - 1);
                                let ci = f.neg(f.mul(c, f.from_int(i as i64)));
                                self.add_term(&mut out, ci, i - 1, &poly, j);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// The reduced enveloping algebra `U_χ(sl₂)`, dimension `p³`, in the power basis.
pub fn build_u_chi_g(chi: PCharacter, field: Arc<Field>) -> Result<StructureConstantAlgebra> {
    let p = field.p();
    let pu = p as usize;
    let rw = Rewriter {
        f: &field,
        p: pu,
        ce: field.frobenius(chi.e),
        ch: field.frobenius(chi.h),
        cf: field.frobenius(chi.f),
    };
    let n = pu * pu * pu;
    let basis = super::algebra::box_basis([p; 3]);
    let gens = [DividedPowerMonomial::new(1, 0, 0), DividedPowerMonomial::new(0, 1, 0), DividedPowerMonomial::new(0, 0, 1)];
    StructureConstantAlgebra::assemble(
        AlgebraKind::UgChi { chi },
        format!("UgChi(p={p},chi={})", chi.format(&field)),
        field.clone(),
        [p; 3],
        &gens,
        |a, b| {
            let m = basis[a];
            let mut v = vec![Fe::ZERO; n];
            v[b] = Fe::ONE;
            for _ in 0..m.j {
                v = rw.left(2, &v);
            }
            for _ in 0..m.k {
                v = rw.left(1, &v);
            }
            for _ in 0..m.i {
                v = rw.left(0, &v);
            }
            super::algebra::sparse(&v)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen_idx(alg: &StructureConstantAlgebra, i: u32, k: u32, j: u32) -> usize {
        alg.index_of(DividedPowerMonomial::new(i, k, j)).unwrap()
    }

    #[test]
    fn sl2_relations_hold() {
        for p in [2u32, 3, 5] {
            let f = Field::prime(p).unwrap();
            let alg = build_u_chi_g(PCharacter::new(Fe(1), Fe(0), Fe(1 % p as u16)), f.clone()).unwrap();
            let (e, h, ff) = (gen_idx(&alg, 1, 0, 0), gen_idx(&alg, 0, 1, 0), gen_idx(&alg, 0, 0, 1));
            let bv = |i| alg.basis_vector(i);
            let comm = |a: usize, b: usize| {
                let x = alg.mul(&bv(a), &bv(b));
                let y = alg.mul(&bv(b), &bv(a));
                x.iter().zip(&y).map(|(&s, &t)| f.sub(s, t)).collect::<Vec<_>>()
            };
            assert_eq!(comm(e, ff), bv(h));
            let two_e: Vec<Fe> = bv(e).iter().map(|&x| f.mul(x, f.from_int(2))).collect();
            assert_eq!(comm(h, e), two_e);
            let m2f: Vec<Fe> = bv(ff).iter().map(|&x| f.mul(x, f.from_int(-2))).collect();
            assert_eq!(comm(h, ff), m2f);
        }
    }

    #[test]
    fn p_power_relations() {
        let f = Field::prime(3).unwrap();
        let chi = PCharacter::new(Fe(2), Fe(1), Fe(1));
        let alg = build_u_chi_g(chi, f.clone()).unwrap();
        let pow = |g: usize| {
            let mut v = alg.basis_vector(alg.unit());
            for _ in 0..3 {
                v = alg.mul(&alg.basis_vector(g), &v);
            }
            v
        };
        let unit = alg.basis_vector(alg.unit());
        let scaled = |c: Fe| unit.iter().map(|&x| f.mul(x, c)).collect::<Vec<_>>();
        assert_eq!(pow(gen_idx(&alg, 1, 0, 0)), scaled(f.frobenius(chi.e)));
        assert_eq!(pow(gen_idx(&alg, 0, 0, 1)), scaled(f.frobenius(chi.f)));
        let h = gen_idx(&alg, 0, 1, 0);
        let mut want = scaled(f.frobenius(chi.h));
        want[h] = Fe::ONE;
        assert_eq!(pow(h), want);
    }

    #[test]
    fn associative_and_unital() {
        for (p, chi) in [(2u32, PCharacter::new(Fe(0), Fe(1), Fe(1))), (3, PCharacter::new(Fe(1), Fe(2), Fe(0)))] {
            let alg = build_u_chi_g(chi, Field::prime(p).unwrap()).unwrap();
            assert_eq!(alg.dim(), (p * p * p) as usize);
            alg.check_unit().unwrap();
            alg.check_associativity(None, 0).unwrap();
        }
    }
}
