//! JSON forms of algebras, modules and distribution tables.
//!
//! Field elements are written as coefficient vectors over the prime field,
//! least significant first (`[2,1]` is `2 + t`). Every parser validates
//! fully and returns an error rather than panicking on malformed input.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dist::oracle_structure_constants;
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::hyper::algebra::box_basis;
use crate::hyper::{AlgebraKind, DividedPowerMonomial, PCharacter, StructureConstantAlgebra};
use crate::linalg::{Matrix, Representation, DEFAULT_SEED};

/// Parsed algebras larger than this are associativity-checked on samples.
pub const EXHAUSTIVE_ASSOC_DIM: usize = 27;
/// Sampled associativity triples for large parsed algebras.
pub const ASSOC_SAMPLES: usize = 10_000;
/// Upper bound on the dimension of a parsed algebra.
pub const MAX_PARSED_DIM: usize = 4096;

pub type FeJson = Vec<u32>;

fn fe_to_json(f: &Field, a: Fe) -> FeJson {
    f.coeffs(a)
}

fn fe_from_json(f: &Field, c: &[u32]) -> Result<Fe> {
    f.from_coeffs(c)
}

fn kind_tag(kind: &AlgebraKind) -> &'static str {
    match kind {
        AlgebraKind::DiGr { .. } => "di_gr",
        AlgebraKind::UrChi { .. } => "u_r_chi",
        AlgebraKind::UgChi { .. } => "u_chi_g",
        AlgebraKind::UhatB { .. } => "uhat_b",
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub label: String,
    pub kind: String,
    pub p: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<[FeJson; 3]>,
    pub dim: usize,
    /// Monomial exponent triples `(i, k, j)` in index order.
    pub basis: Vec<[u32; 3]>,
    pub unit: usize,
    pub generators: Vec<[u32; 3]>,
    /// Nonzero structure constants `[a, b, e, c]`: `b_a b_b` has coefficient `c` on `b_e`.
    pub mult: Vec<(usize, usize, usize, FeJson)>,
}

impl AlgebraJson {
    pub fn from_algebra(alg: &StructureConstantAlgebra) -> AlgebraJson {
        let f = alg.field();
        let kind = alg.kind();
        let r = match kind {
            AlgebraKind::DiGr { r } | AlgebraKind::UrChi { r, .. } | AlgebraKind::UhatB { r, .. } => Some(r),
            AlgebraKind::UgChi { .. } => None,
        };
        let triple = |m: DividedPowerMonomial| [m.i, m.k, m.j];
        AlgebraJson {
            label: alg.label().to_string(),
            kind: kind_tag(&kind).to_string(),
            p: f.p(),
            k: f.k(),
            r,
            chi: kind.chi().map(|c| [fe_to_json(f, c.e), fe_to_json(f, c.h), fe_to_json(f, c.f)]),
            dim: alg.dim(),
            basis: alg.basis().iter().map(|&m| triple(m)).collect(),
            unit: alg.unit(),
            generators: alg.generators().iter().map(|&g| triple(alg.basis()[g])).collect(),
            mult: alg.structure_tensor().map(|(a, b, e, c)| (a, b, e, fe_to_json(f, c))).collect(),
        }
    }

    /// Rebuilds the algebra and certifies it: box-shaped basis, generator
    /// words, unit law and associativity.
    pub fn to_algebra(&self) -> Result<StructureConstantAlgebra> {
        let field = Field::new(self.p, self.k)?;
        let f = &*field;
        let n = self.basis.len();
        if n == 0 || n != self.dim || n > MAX_PARSED_DIM {
            return Err(Error::Parse(format!("dim {} does not match a basis of {n} monomials", self.dim)));
        }
        let mut bounds = [0u32; 3];
        for m in &self.basis {
            for (b, &x) in bounds.iter_mut().zip(m) {
                *b = (*b).max(x.saturating_add(1));
            }
        }
        let boxed = bounds.iter().try_fold(1usize, |acc, &b| acc.checked_mul(b as usize));
        if boxed != Some(n) {
            return Err(Error::Parse("basis is not a full box of monomials".into()));
        }
        let expected = box_basis(bounds);
        if expected.iter().zip(&self.basis).any(|(m, t)| [m.i, m.k, m.j] != *t) {
            return Err(Error::Parse("basis is not in lexicographic order".into()));
        }
        let chi = match &self.chi {
            None => None,
            Some([e, h, fv]) => Some(PCharacter::new(fe_from_json(f, e)?, fe_from_json(f, h)?, fe_from_json(f, fv)?)),
        };
        let need_r = || self.r.ok_or_else(|| Error::Parse(format!("kind {} needs r", self.kind)));
        let need_chi = || chi.ok_or_else(|| Error::Parse(format!("kind {} needs chi", self.kind)));
        let kind = match self.kind.as_str() {
            "di_gr" => AlgebraKind::DiGr { r: need_r()? },
            "u_r_chi" => AlgebraKind::UrChi { r: need_r()?, chi: need_chi()? },
            "u_chi_g" => AlgebraKind::UgChi { chi: need_chi()? },
            "uhat_b" => AlgebraKind::UhatB { r: need_r()?, chi: need_chi()? },
            other => return Err(Error::Parse(format!("unknown algebra kind {other:?}"))),
        };
        if self.unit != 0 {
            return Err(Error::Parse("the unit must be the monomial (0,0,0) at index 0".into()));
        }
        let mut cells: BTreeMap<(usize, usize), Vec<(u16, Fe)>> = BTreeMap::new();
        for (a, b, e, c) in &self.mult {
            if *a >= n || *b >= n || *e >= n {
                return Err(Error::Parse(format!("structure constant index out of range: ({a}, {b}, {e})")));
            }
            let c = fe_from_json(f, c)?;
            let cell = cells.entry((*a, *b)).or_default();
            if cell.iter().any(|t| t.0 as usize == *e) {
                return Err(Error::Parse(format!("duplicate structure constant ({a}, {b}, {e})")));
            }
            if !c.is_zero() {
                cell.push((*e as u16, c));
            }
        }
        let mut offsets = Vec::with_capacity(n * n + 1);
        let mut terms = Vec::new();
        offsets.push(0u32);
        for a in 0..n {
            for b in 0..n {
                if let Some(mut cell) = cells.remove(&(a, b)) {
                    cell.sort_by_key(|t| t.0);
                    terms.extend(cell);
                }
                offsets.push(terms.len() as u32);
            }
        }
        let generators: Vec<DividedPowerMonomial> =
            self.generators.iter().map(|g| DividedPowerMonomial::new(g[0], g[1], g[2])).collect();
        let alg = StructureConstantAlgebra::from_parts(kind, self.label.clone(), field, bounds, offsets, terms, &generators)?;
        alg.check_unit()?;
        let samples = (n > EXHAUSTIVE_ASSOC_DIM).then_some(ASSOC_SAMPLES);
        alg.check_associativity(samples, DEFAULT_SEED)?;
        Ok(alg)
    }
}

pub fn algebra_to_json(alg: &StructureConstantAlgebra) -> Result<String> {
    Ok(serde_json::to_string(&AlgebraJson::from_algebra(alg))?)
}

pub fn parse_algebra(s: &str) -> Result<StructureConstantAlgebra> {
    let j: AlgebraJson = serde_json::from_str(s)?;
    j.to_algebra()
}

/// A module as one matrix per algebra basis element; entries are
/// coefficient vectors.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RepresentationJson {
    pub algebra: String,
    pub dim: usize,
    pub action: Vec<Vec<Vec<FeJson>>>,
}

impl RepresentationJson {
    pub fn from_representation(rep: &Representation) -> RepresentationJson {
        let f = rep.field();
        let action = rep
            .action
            .iter()
            .map(|m| (0..m.rows).map(|i| m.row(i).iter().map(|&x| fe_to_json(f, x)).collect()).collect())
            .collect();
        RepresentationJson { algebra: rep.algebra.label().to_string(), dim: rep.dim, action }
    }

    /// Reads the matrices against `algebra` and certifies the module
    /// structure on every generator-basis pair plus sampled pairs.
    pub fn to_representation(&self, algebra: Arc<StructureConstantAlgebra>) -> Result<Representation> {
        if self.algebra != algebra.label() {
            return Err(Error::Parse(format!(
                "module is over {:?}, not {:?}",
                self.algebra,
                algebra.label()
            )));
        }
        if self.action.len() != algebra.dim() {
            return Err(Error::Parse(format!(
                "{} action matrices for an algebra of dimension {}",
                self.action.len(),
                algebra.dim()
            )));
        }
        let d = self.dim;
        let f = algebra.field();
        let mut action = Vec::with_capacity(self.action.len());
        for rows in &self.action {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Parse(format!("action matrix is not {d}x{d}")));
            }
            let mut m = Matrix::zeros(d, d);
            for (i, row) in rows.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    m.set(i, j, fe_from_json(f, c)?);
                }
            }
            action.push(m);
        }
        let rep = Representation { algebra, dim: d, action };
        rep.check_structure(Some(crate::repthy::STRUCTURE_SAMPLES), DEFAULT_SEED)?;
        Ok(rep)
    }
}

pub fn representation_to_json(rep: &Representation) -> Result<String> {
    Ok(serde_json::to_string(&RepresentationJson::from_representation(rep))?)
}

pub fn parse_representation(s: &str, algebra: Arc<StructureConstantAlgebra>) -> Result<Representation> {
    let j: RepresentationJson = serde_json::from_str(s)?;
    j.to_representation(algebra)
}

/// Divided-power basis labels and sparse products of `Di(G_r)` computed
/// from the coordinate-ring oracle.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DistDumpJson {
    pub basis: Vec<String>,
    /// `[i, j, k, c]`: the product of basis elements `i` and `j` has coefficient `c` on `k`.
    pub mult: Vec<(usize, usize, usize, FeJson)>,
}

pub fn dist_dump(r: u32, field: &Field) -> Result<DistDumpJson> {
    let n = field.p().pow(r);
    let basis = box_basis([n; 3]).iter().map(|m| format!("e^({}) h^[{}] f^({})", m.i, m.k, m.j)).collect();
    let mut mult: Vec<_> = oracle_structure_constants(r, field)?
        .into_iter()
        .map(|(a, b, e, c)| (a, b, e, fe_to_json(field, c)))
        .collect();
    mult.sort();
    Ok(DistDumpJson { basis, mult })
}
