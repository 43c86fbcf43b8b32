use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::linalg::Matrix;

use super::algebra::{AlgebraKind, DividedPowerMonomial, StructureConstantAlgebra};

/// The quotient map `Υ : U^[r]_χ → U_χ(sl₂)`, stored as the image of every
/// basis element.
#[derive(Clone, Debug)]
pub struct Upsilon {
    pub images: Vec<Vec<Fe>>,
}

/// Builds `Υ` from its values on generators: `x^(p^r) ↦ x` for `x = e, f`,
/// `binom(h; p^r) ↦ h`, lower-level generators `↦ 0`. Values on the rest
/// of the basis come from generator words, so nothing beyond the generator
/// assignment is assumed.
pub fn upsilon(src: &StructureConstantAlgebra, tgt: &StructureConstantAlgebra) -> Result<Upsilon> {
    let AlgebraKind::UrChi { r, chi } = src.kind() else {
        return Err(Error::Precondition("source must be U^[r]_chi".into()));
    };
    if tgt.kind() != (AlgebraKind::UgChi { chi }) || tgt.field().params() != src.field().params() {
        return Err(Error::Precondition("target must be U_chi(g) for the same chi and field".into()));
    }
    let f = src.field();
    let p = src.p();
    let pr = p.pow(r);
    let gen_image = |g: usize| -> Vec<Fe> {
        let m = src.basis()[g];
        let target = if m.i == pr {
            Some(DividedPowerMonomial::new(1, 0, 0))
        } else if m.k == pr {
            Some(DividedPowerMonomial::new(0, 1, 0))
        } else if m.j == pr {
            Some(DividedPowerMonomial::new(0, 0, 1))
        } else {
            None
        };
        match target {
            Some(t) => tgt.basis_vector(tgt.index_of(t).unwrap()),
            None => vec![Fe::ZERO; tgt.dim()],
        }
    };
    let n = src.dim();
    let mut words: Vec<Vec<Fe>> = vec![Vec::new(); n];
    for b in src.word_order() {
        words[b] = match src.word_tail(b) {
            None => tgt.basis_vector(tgt.unit()),
            Some((g, tail)) => tgt.mul(&gen_image(g), &words[tail]),
        };
    }
    let images = (0..n)
        .map(|b| {
            let mut acc = vec![Fe::ZERO; tgt.dim()];
            for &(w, c) in src.word_expansion(b) {
                for (x, &y) in acc.iter_mut().zip(&words[w]) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            acc
        })
        .collect();
    Ok(Upsilon { images })
}

impl Upsilon {
    pub fn apply(&self, x: &[Fe], tgt: &StructureConstantAlgebra) -> Vec<Fe> {
        let f = tgt.field();
        let mut acc = vec![Fe::ZERO; tgt.dim()];
        for (img, &c) in self.images.iter().zip(x) {
            if c.is_zero() {
                continue;
            }
            for (a, &y) in acc.iter_mut().zip(img) {
                *a = f.add(*a, f.mul(c, y));
            }
        }
        acc
    }

    /// `Υ(ab) = Υ(a)Υ(b)` on all pairs (`None`) or `samples` seeded pairs.
    pub fn verify_multiplicative(
        &self,
        src: &StructureConstantAlgebra,
        tgt: &StructureConstantAlgebra,
        samples: Option<usize>,
        seed: u64,
    ) -> Result<usize> {
        let f = tgt.field();
        let n = src.dim();
        let check = |a: usize, b: usize| -> Result<()> {
            let lhs = tgt.mul(&self.images[a], &self.images[b]);
            let mut rhs = vec![Fe::ZERO; tgt.dim()];
            for &(e, c) in src.product(a, b) {
                for (x, &y) in rhs.iter_mut().zip(&self.images[e as usize]) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            if lhs != rhs {
                return Err(Error::NotMultiplicative(format!(
                    "Upsilon({} * {})",
                    src.basis_label(a),
                    src.basis_label(b)
                )));
            }
            Ok(())
        };
        match samples {
            None => {
                for a in 0..n {
                    for b in 0..n {
                        check(a, b)?;
                    }
                }
                Ok(n * n)
            }
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for &g in src.generators() {
                    for b in 0..n {
                        check(g, b)?;
                    }
                }
                for _ in 0..s {
                    check(rng.gen_range(0..n), rng.gen_range(0..n))?;
                }
                Ok(s + src.generators().len() * n)
            }
        }
    }

    pub fn rank(&self, tgt: &StructureConstantAlgebra) -> usize {
        Matrix::from_rows(&self.images).rank(tgt.field())
    }
}
