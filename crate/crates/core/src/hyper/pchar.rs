use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

/// A p-character `χ ∈ sl₂*`, stored by its values on the Chevalley basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PCharacter {
    pub e: Fe,
    pub h: Fe,
    pub f: Fe,
}

impl PCharacter {
    pub const ZERO: PCharacter = PCharacter { e: Fe::ZERO, h: Fe::ZERO, f: Fe::ZERO };

    pub fn new(e: Fe, h: Fe, f: Fe) -> PCharacter {
        PCharacter { e, h, f }
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_zero() && self.h.is_zero() && self.f.is_zero()
    }

    /// Parses `"e,h,f"`, each entry a field element (bare integer or a
    /// bracketed coefficient vector).
    pub fn parse(s: &str, field: &Field) -> Result<PCharacter> {
        let parts = split_top_level(s)?;
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three comma-separated values, got {}", parts.len())));
        }
        Ok(PCharacter {
            e: field.parse(parts[0])?,
            h: field.parse(parts[1])?,
            f: field.parse(parts[2])?,
        })
    }

    pub fn format(&self, field: &Field) -> String {
        format!("{},{},{}", field.format(self.e), field.format(self.h), field.format(self.f))
    }

    /// Image under a field embedding given as an element table.
    pub fn embed(&self, map: &[Fe]) -> PCharacter {
        PCharacter { e: map[self.e.0 as usize], h: map[self.h.0 as usize], f: map[self.f.0 as usize] }
    }

    /// `χ(y)` for a traceless matrix `y = y12·e + y11·h + y21·f`.
    pub fn eval_matrix(&self, y: &Matrix, field: &Field) -> Fe {
        let t = field.mul(y.get(0, 1), self.e);
        let t = field.add(t, field.mul(y.get(0, 0), self.h));
        field.add(t, field.mul(y.get(1, 0), self.f))
    }
}

/// Splits on commas that are not inside brackets.
pub(crate) fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
    }
    out.push(s[start..].trim());
    Ok(out)
}

fn mat2(a: Fe, b: Fe, c: Fe, d: Fe) -> Matrix {
    Matrix::from_rows(&[vec![a, b], vec![c, d]])
}

pub(crate) fn chevalley(field: &Field) -> [Matrix; 3] {
    let (o, z) = (Fe::ONE, Fe::ZERO);
    [mat2(z, o, z, z), mat2(o, z, z, field.neg(o)), mat2(z, z, o, z)]
}

/// Coadjoint action `(g·χ)(y) = χ(g⁻¹ y g)` for `g ∈ SL₂(F_q)`.
pub fn conjugate_pchar(chi: &PCharacter, g: &Matrix, field: &Field) -> Result<PCharacter> {
    if g.rows != 2 || g.cols != 2 {
        return Err(Error::Precondition("g must be 2x2".into()));
    }
    let det = field.sub(field.mul(g.get(0, 0), g.get(1, 1)), field.mul(g.get(0, 1), g.get(1, 0)));
    if det != Fe::ONE {
        return Err(Error::Precondition("det(g) != 1".into()));
    }
    let gi = mat2(g.get(1, 1), field.neg(g.get(0, 1)), field.neg(g.get(1, 0)), g.get(0, 0));
    let [e, h, f] = chevalley(field);
    let val = |y: &Matrix| chi.eval_matrix(&gi.mul(y, field).mul(g, field), field);
    Ok(PCharacter { e: val(&e), h: val(&h), f: val(&f) })
}

/// An element `g ∈ SL₂(F_q)` with `(g·χ)(e) = 0`, when one exists over `F_q`.
pub fn conjugate_to_standard(chi: &PCharacter, field: &Field) -> Option<(Matrix, PCharacter)> {
    let (o, z) = (Fe::ONE, Fe::ZERO);
    let g = if chi.e.is_zero() {
        Matrix::identity(2)
    } else if !chi.f.is_zero() || !chi.h.is_zero() {
        // g = [[1,0],[c,1]] gives (g·χ)(e) = χ(e) + cχ(h) − c²χ(f)
        let c = if chi.f.is_zero() {
            field.neg(field.div(chi.e, chi.h)?)
        } else {
            let roots = field.quadratic_roots(field.neg(chi.f), chi.h, chi.e);
            *roots.first()?
        };
        mat2(o, z, c, o)
    } else {
        mat2(z, o, field.neg(o), z)
    };
    let out = conjugate_pchar(chi, &g, field).ok()?;
    debug_assert!(out.e.is_zero());
    Some((g, out))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemisimpleNilpotent {
    /// `χ = 0`: both semisimple and nilpotent.
    Zero,
    Semisimple,
    Nilpotent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiClass {
    pub kind: SemisimpleNilpotent,
    pub regular: bool,
}

/// Jordan type of `χ` through `x_χ = [[χ(h)/2, χ(f)], [χ(e), −χ(h)/2]]`, whose
/// characteristic polynomial is `t² − D` with `D = χ(h)²/4 + χ(e)χ(f)`.
///
/// For `p = 2` the trace form is degenerate; the convention there is
/// `D = χ(h)²`, i.e. nilpotent iff `χ(h) = 0`.
pub fn classify_pchar(chi: &PCharacter, field: &Field) -> ChiClass {
    if chi.is_zero() {
        return ChiClass { kind: SemisimpleNilpotent::Zero, regular: false };
    }
    let d = if field.p() == 2 {
        field.mul(chi.h, chi.h)
    } else {
        let quarter = field.inv(field.from_int(4)).unwrap();
        field.add(field.mul(field.mul(chi.h, chi.h), quarter), field.mul(chi.e, chi.f))
    };
    let kind = if d.is_zero() { SemisimpleNilpotent::Nilpotent } else { SemisimpleNilpotent::Semisimple };
    ChiClass { kind, regular: true }
}
