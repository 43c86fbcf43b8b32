use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Fe;
use crate::linalg::{nullspace, Matrix};

use super::algebra::{AlgebraKind, DividedPowerMonomial, StructureConstantAlgebra};

/// Central data of a finite-dimensional algebra.
#[derive(Clone, Debug, Serialize)]
pub struct CenterData {
    /// For `U^[r]_χ`: the elements `(e^(p^r))^p`, `binom(h;p^r)^p − binom(h;p^r)`,
    /// `(f^(p^r))^p` computed by in-algebra multiplication, each a multiple
    /// of the unit.
    pub p_center_scalars: Option<[Fe; 3]>,
    /// Basis of the center, as coordinate vectors.
    pub full_center_basis: Vec<Vec<Fe>>,
}

fn power(alg: &StructureConstantAlgebra, x: &[Fe], n: u32) -> Vec<Fe> {
    let mut v = alg.basis_vector(alg.unit());
    for _ in 0..n {
        v = alg.mul(x, &v);
    }
    v
}

/// `Some(c)` when `x = c · 1`.
pub(crate) fn as_unit_multiple(alg: &StructureConstantAlgebra, x: &[Fe]) -> Option<Fe> {
    let u = alg.unit();
    x.iter().enumerate().all(|(i, c)| i == u || c.is_zero()).then_some(x[u])
}

/// `(x^(p^r))^p` for the three generator families of `U^[r]_χ`, with the torus
/// one shifted by `−binom(h;p^r)`; errors if one is not a scalar.
pub(crate) fn p_center_scalars(alg: &StructureConstantAlgebra) -> Result<Option<[Fe; 3]>> {
    let (AlgebraKind::UrChi { r, .. } | AlgebraKind::UhatB { r, .. }) = alg.kind() else {
        return Ok(None);
    };
    if matches!(alg.kind(), AlgebraKind::UhatB { .. }) {
        return Ok(None);
    }
    let f = alg.field();
    let p = alg.p();
    let pr = p.pow(r);
    let mut out = [Fe::ZERO; 3];
    for (slot, m) in [
        DividedPowerMonomial::new(pr, 0, 0),
        DividedPowerMonomial::new(0, pr, 0),
        DividedPowerMonomial::new(0, 0, pr),
    ]
    .into_iter()
    .enumerate()
    {
        let g = alg.index_of(m).unwrap();
        let gv = alg.basis_vector(g);
        let mut v = power(alg, &gv, p);
        if slot == 1 {
            v[g] = f.sub(v[g], Fe::ONE);
        }
        out[slot] = as_unit_multiple(alg, &v).ok_or_else(|| {
            Error::Certification(format!("p-th power of {} is not central scalar", alg.basis_label(g)))
        })?;
    }
    Ok(Some(out))
}

/// Center of `alg`: the commutant of the generators, found one generator at a
/// time, then checked against every basis element.
pub fn center(alg: &StructureConstantAlgebra) -> Result<CenterData> {
    let n = alg.dim();
    if n > 1000 {
        return Err(Error::Precondition("center computation limited to dimension 1000".into()));
    }
    let f = alg.field();
    // current subspace, as coordinate vectors in the basis
    let mut space: Vec<Vec<Fe>> = (0..n).map(|b| alg.basis_vector(b)).collect();
    for &g in alg.generators() {
        // columns: [z, g] for each current basis vector z
        let mut cols: Vec<Vec<Fe>> = Vec::with_capacity(space.len());
        for z in &space {
            let mut c = vec![Fe::ZERO; n];
            for (a, &za) in z.iter().enumerate() {
                if za.is_zero() {
                    continue;
                }
                for &(e, x) in alg.product(a, g) {
                    c[e as usize] = f.add(c[e as usize], f.mul(za, x));
                }
                for &(e, x) in alg.product(g, a) {
                    c[e as usize] = f.sub(c[e as usize], f.mul(za, x));
                }
            }
            cols.push(c);
        }
        let m = Matrix::from_rows(&cols).transpose();
        let kernel = nullspace(&m, f);
        space = kernel
            .into_iter()
            .map(|coeffs| {
                let mut v = vec![Fe::ZERO; n];
                for (z, &c) in space.iter().zip(&coeffs) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(z) {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
                v
            })
            .collect();
    }
    for z in &space {
        for b in 0..n {
            let bv = alg.basis_vector(b);
            if alg.mul(z, &bv) != alg.mul(&bv, z) {
                return Err(Error::Certification(format!("central candidate fails against {}", alg.basis_label(b))));
            }
        }
    }
    Ok(CenterData { p_center_scalars: p_center_scalars(alg)?, full_center_basis: space })
}
